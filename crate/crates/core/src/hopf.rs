//! The three cocommutative Hopf algebra kernels: the ground field itself,
//! group algebras `k[G]` of finite groups, and polynomial algebras
//! `k[d1..dn]` with primitive generators.
//!
//! Elements are kept in canonical form: a sorted map from basis monomials
//! to nonzero scalars. Equality is map equality.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::scalar::{FieldSpec, Scalar};

/// Multiplication table of a finite group, validated at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    labels: Vec<String>,
    mul: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    pub fn new(labels: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self, String> {
        let n = labels.len();
        if n == 0 {
            return Err("group must be nonempty".into());
        }
        {
            let mut sorted = labels.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != n {
                return Err("group labels must be distinct".into());
            }
        }
        if mul.len() != n || mul.iter().any(|row| row.len() != n) {
            return Err(format!("multiplication table must be {n}x{n}"));
        }
        for row in &mul {
            if row.iter().any(|&k| k >= n) {
                return Err("multiplication table entry out of range".into());
            }
        }
        // two-sided identity
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mul[e][g] == g && mul[g][e] == g))
            .ok_or("group table has no identity element")?;
        // inverses
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            inverse[g] = (0..n)
                .find(|&h| mul[g][h] == identity && mul[h][g] == identity)
                .ok_or_else(|| format!("element '{}' has no inverse", labels[g]))?;
        }
        // associativity
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(format!(
                            "multiplication table not associative at ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        ));
                    }
                }
            }
        }
        Ok(GroupTable { labels, mul, identity, inverse })
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    /// The cyclic group Z/n with labels `g0..g{n-1}`, `g0` the identity.
    pub fn cyclic(n: usize) -> Self {
        let labels = (0..n).map(|i| format!("g{i}")).collect();
        let mul = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        GroupTable::new(labels, mul).expect("cyclic table is a group")
    }

    /// The symmetric group S3 as permutations of three points, labels
    /// `s0..s5` with `s0` the identity.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let compose = |a: &[usize; 3], b: &[usize; 3]| -> [usize; 3] {
            // (a*b)(x) = a(b(x))
            [a[b[0]], a[b[1]], a[b[2]]]
        };
        let labels = (0..6).map(|i| format!("s{i}")).collect();
        let mul = (0..6)
            .map(|i| {
                (0..6)
                    .map(|j| {
                        let c = compose(&perms[i], &perms[j]);
                        perms.iter().position(|p| *p == c).unwrap()
                    })
                    .collect()
            })
            .collect();
        GroupTable::new(labels, mul).expect("S3 table is a group")
    }
}

/// Which Hopf algebra we are working over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HopfKind {
    /// `H = k`.
    Trivial,
    /// Group algebra `k[G]`, grouplike basis.
    Group(GroupTable),
    /// Polynomial algebra on primitive generators.
    Polynomial { generators: Vec<String> },
}

/// Descriptor shared by every element: the kind plus the scalar field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfAlgebra {
    pub kind: HopfKind,
    pub field: FieldSpec,
}

pub type HopfRef = Arc<HopfAlgebra>;

impl HopfAlgebra {
    pub fn trivial(field: FieldSpec) -> HopfRef {
        Arc::new(HopfAlgebra { kind: HopfKind::Trivial, field })
    }

    pub fn group(table: GroupTable, field: FieldSpec) -> HopfRef {
        Arc::new(HopfAlgebra { kind: HopfKind::Group(table), field })
    }

    pub fn polynomial(generators: Vec<&str>, field: FieldSpec) -> HopfRef {
        Arc::new(HopfAlgebra {
            kind: HopfKind::Polynomial { generators: generators.iter().map(|s| s.to_string()).collect() },
            field,
        })
    }

    /// Dimension over `k`, or `None` for polynomial kinds.
    pub fn k_dimension(&self) -> Option<usize> {
        match &self.kind {
            HopfKind::Trivial => Some(1),
            HopfKind::Group(t) => Some(t.order()),
            HopfKind::Polynomial { .. } => None,
        }
    }

    /// All basis monomials, for finite-dimensional kinds.
    pub fn basis_monomials(&self) -> Option<Vec<Mono>> {
        match &self.kind {
            HopfKind::Trivial => Some(vec![Mono::unit(self)]),
            HopfKind::Group(t) => Some((0..t.order()).map(Mono::Grp).collect()),
            HopfKind::Polynomial { .. } => None,
        }
    }
}

/// A basis monomial of `H`: a group element or an exponent vector.
/// The trivial kind uses the empty exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mono {
    Grp(usize),
    Exp(Vec<u32>),
}

impl Mono {
    pub fn unit(alg: &HopfAlgebra) -> Mono {
        match &alg.kind {
            HopfKind::Trivial => Mono::Exp(vec![]),
            HopfKind::Group(t) => Mono::Grp(t.identity()),
            HopfKind::Polynomial { generators } => Mono::Exp(vec![0; generators.len()]),
        }
    }

    pub fn is_unit(&self, alg: &HopfAlgebra) -> bool {
        *self == Mono::unit(alg)
    }

    fn total_degree(&self) -> u32 {
        match self {
            Mono::Grp(_) => 0,
            Mono::Exp(e) => e.iter().sum(),
        }
    }

    pub fn render(&self, alg: &HopfAlgebra) -> String {
        match (self, &alg.kind) {
            (Mono::Grp(g), HopfKind::Group(t)) => t.label(*g).to_string(),
            (Mono::Exp(e), HopfKind::Polynomial { generators }) => {
                let parts: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            generators[i].clone()
                        } else {
                            format!("{}^{}", generators[i], k)
                        }
                    })
                    .collect();
                if parts.is_empty() {
                    "1".to_string()
                } else {
                    parts.join("*")
                }
            }
            (Mono::Exp(_), HopfKind::Trivial) => "1".to_string(),
            _ => unreachable!("monomial does not match Hopf kind"),
        }
    }
}

// Graded-lexicographic order on exponent vectors; plain index order on
// group elements. Gives deterministic canonical printing.
impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Mono::Grp(a), Mono::Grp(b)) => a.cmp(b),
            (Mono::Exp(a), Mono::Exp(b)) => {
                let (da, db) = (self.total_degree(), other.total_degree());
                da.cmp(&db).then_with(|| a.cmp(b))
            }
            (Mono::Grp(_), Mono::Exp(_)) => Ordering::Less,
            (Mono::Exp(_), Mono::Grp(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

use std::collections::BTreeMap;

/// An element of `H` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfElement {
    algebra: HopfRef,
    terms: BTreeMap<Mono, Scalar>,
}

fn same_algebra(a: &HopfRef, b: &HopfRef) {
    assert!(a == b, "hopf descriptor mismatch");
}

impl HopfElement {
    pub fn zero(algebra: &HopfRef) -> Self {
        HopfElement { algebra: algebra.clone(), terms: BTreeMap::new() }
    }

    pub fn one(algebra: &HopfRef) -> Self {
        HopfElement::monomial(algebra, Mono::unit(algebra))
    }

    pub fn monomial(algebra: &HopfRef, m: Mono) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, Scalar::one(algebra.field));
        HopfElement { algebra: algebra.clone(), terms }
    }

    pub fn scalar(algebra: &HopfRef, c: Scalar) -> Self {
        let mut el = HopfElement::zero(algebra);
        el.add_term(Mono::unit(algebra), c);
        el
    }

    /// The generator `d{i}` of a polynomial algebra.
    pub fn generator(algebra: &HopfRef, i: usize) -> Self {
        match &algebra.kind {
            HopfKind::Polynomial { generators } => {
                assert!(i < generators.len(), "generator index out of range");
                let mut e = vec![0; generators.len()];
                e[i] = 1;
                HopfElement::monomial(algebra, Mono::Exp(e))
            }
            _ => panic!("generator() requires a polynomial Hopf algebra"),
        }
    }

    /// A group basis element by index.
    pub fn group_element(algebra: &HopfRef, g: usize) -> Self {
        match &algebra.kind {
            HopfKind::Group(t) => {
                assert!(g < t.order(), "group index out of range");
                HopfElement::monomial(algebra, Mono::Grp(g))
            }
            _ => panic!("group_element() requires a group Hopf algebra"),
        }
    }

    pub fn algebra(&self) -> &HopfRef {
        &self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &HopfElement) -> HopfElement {
        same_algebra(&self.algebra, &other.algebra);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> HopfElement {
        let mut out = HopfElement::zero(&self.algebra);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> HopfElement {
        let mut out = HopfElement::zero(&self.algebra);
        for (m, s) in &self.terms {
            out.add_term(m.clone(), s * c);
        }
        out
    }

    /// Product of two basis monomials, always a single monomial.
    pub fn mul_mono(alg: &HopfAlgebra, a: &Mono, b: &Mono) -> Mono {
        match (&alg.kind, a, b) {
            (HopfKind::Group(t), Mono::Grp(x), Mono::Grp(y)) => Mono::Grp(t.mul(*x, *y)),
            (_, Mono::Exp(x), Mono::Exp(y)) => {
                Mono::Exp(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            _ => unreachable!("monomial does not match Hopf kind"),
        }
    }

    pub fn mul(&self, other: &HopfElement) -> HopfElement {
        same_algebra(&self.algebra, &other.algebra);
        let mut out = HopfElement::zero(&self.algebra);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(HopfElement::mul_mono(&self.algebra, ma, mb), ca * cb);
            }
        }
        out
    }

    pub fn counit(&self) -> Scalar {
        let mut acc = Scalar::zero(self.algebra.field);
        for (m, c) in &self.terms {
            if counit_keeps(&self.algebra, m) {
                acc = &acc + c;
            }
        }
        acc
    }

    pub fn antipode(&self) -> HopfElement {
        let mut out = HopfElement::zero(&self.algebra);
        for (m, c) in &self.terms {
            let (m2, sign) = antipode_mono(&self.algebra, m);
            out.add_term(m2, if sign { c.neg() } else { c.clone() });
        }
        out
    }

    /// `Delta(a)` as an element of `H (x) H`.
    pub fn comul(&self) -> HopfTensor {
        self.iterated_comul(2)
    }

    /// `Delta^{(n-1)}(a)`, with `Delta^{(0)} = id`.
    pub fn iterated_comul(&self, n: usize) -> HopfTensor {
        assert!(n >= 1, "iterated_comul requires n >= 1");
        let mut out = HopfTensor::zero(&self.algebra, n);
        for (m, c) in &self.terms {
            for (legs, k) in comul_mono(&self.algebra, m, n) {
                out.add_term(legs, &k * c);
            }
        }
        out
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono = m.render(&self.algebra);
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    s.push('-');
                }
            } else if c.is_negative() {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            if mono == "1" {
                s.push_str(&mag.to_string());
            } else if mag.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{mag}*{mono}"));
            }
        }
        s
    }
}

fn counit_keeps(alg: &HopfAlgebra, m: &Mono) -> bool {
    match (&alg.kind, m) {
        (HopfKind::Group(_), Mono::Grp(_)) => true,
        (_, Mono::Exp(e)) => e.iter().all(|&k| k == 0),
        _ => unreachable!(),
    }
}

fn antipode_mono(alg: &HopfAlgebra, m: &Mono) -> (Mono, bool) {
    match (&alg.kind, m) {
        (HopfKind::Group(t), Mono::Grp(g)) => (Mono::Grp(t.inverse(*g)), false),
        (_, Mono::Exp(e)) => {
            let deg: u32 = e.iter().sum();
            (Mono::Exp(e.clone()), deg % 2 == 1)
        }
        _ => unreachable!(),
    }
}

/// All ways to split an exponent vector into `n` parts, with multinomial
/// coefficients.
fn exp_splits(e: &[u32], n: usize) -> Vec<(Vec<Vec<u32>>, u64)> {
    // per-variable splits, then cartesian product
    let mut acc: Vec<(Vec<Vec<u32>>, u64)> =
        vec![(vec![vec![]; n], 1)];
    for &deg in e {
        let splits = compositions(deg, n);
        let mut next = Vec::with_capacity(acc.len() * splits.len());
        for (parts, coeff) in &acc {
            for (comp, c) in &splits {
                let mut parts2 = parts.clone();
                for (i, &k) in comp.iter().enumerate() {
                    parts2[i].push(k);
                }
                next.push((parts2, coeff * c));
            }
        }
        acc = next;
    }
    acc
}

/// Weak compositions of `deg` into `n` parts with multinomial coefficients
/// `deg! / (k1! .. kn!)`.
fn compositions(deg: u32, n: usize) -> Vec<(Vec<u32>, u64)> {
    fn binom(n: u64, k: u64) -> u64 {
        let k = k.min(n - k);
        let mut acc = 1u64;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(
        pos: usize,
        rem: u32,
        coeff: u64,
        cur: &mut Vec<u32>,
        out: &mut Vec<(Vec<u32>, u64)>,
        binom: &dyn Fn(u64, u64) -> u64,
    ) {
        if pos + 1 == cur.len() {
            cur[pos] = rem;
            out.push((cur.clone(), coeff));
            return;
        }
        for k in 0..=rem {
            cur[pos] = k;
            let c = binom(rem as u64, k as u64);
            rec(pos + 1, rem - k, coeff * c, cur, out, binom);
        }
    }
    rec(0, deg, 1, &mut cur, &mut out, &binom);
    out
}

fn comul_mono(alg: &HopfAlgebra, m: &Mono, n: usize) -> Vec<(Vec<Mono>, Scalar)> {
    match (&alg.kind, m) {
        (HopfKind::Group(_), Mono::Grp(g)) => {
            vec![(vec![Mono::Grp(*g); n], Scalar::one(alg.field))]
        }
        (_, Mono::Exp(e)) => exp_splits(e, n)
            .into_iter()
            .map(|(parts, c)| {
                (
                    parts.into_iter().map(Mono::Exp).collect(),
                    Scalar::from_int(alg.field, c as i64),
                )
            })
            .collect(),
        _ => unreachable!(),
    }
}

/// An element of `H^{(x) n}` in canonical form: a sum of pure monomial
/// tensors with scalar coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfTensor {
    algebra: HopfRef,
    arity: usize,
    terms: BTreeMap<Vec<Mono>, Scalar>,
}

impl HopfTensor {
    pub fn zero(algebra: &HopfRef, arity: usize) -> Self {
        assert!(arity >= 1);
        HopfTensor { algebra: algebra.clone(), arity, terms: BTreeMap::new() }
    }

    pub fn unit(algebra: &HopfRef, arity: usize) -> Self {
        let mut t = HopfTensor::zero(algebra, arity);
        t.add_term(vec![Mono::unit(algebra); arity], Scalar::one(algebra.field));
        t
    }

    /// Pure tensor of elements, expanded to canonical form.
    pub fn pure(factors: &[HopfElement]) -> Self {
        assert!(!factors.is_empty());
        let algebra = factors[0].algebra().clone();
        for f in factors {
            same_algebra(&algebra, f.algebra());
        }
        let mut terms: Vec<(Vec<Mono>, Scalar)> =
            vec![(Vec::new(), Scalar::one(algebra.field))];
        for f in factors {
            let mut next = Vec::with_capacity(terms.len() * f.terms.len());
            for (legs, c) in &terms {
                for (m, k) in f.terms() {
                    let mut legs2 = legs.clone();
                    legs2.push(m.clone());
                    next.push((legs2, c * k));
                }
            }
            terms = next;
        }
        let mut out = HopfTensor::zero(&algebra, factors.len());
        for (legs, c) in terms {
            out.add_term(legs, c);
        }
        out
    }

    pub fn algebra(&self) -> &HopfRef {
        &self.algebra
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Mono>, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, legs: Vec<Mono>, c: Scalar) {
        assert_eq!(legs.len(), self.arity, "leg arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(legs) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &HopfTensor) -> HopfTensor {
        same_algebra(&self.algebra, &other.algebra);
        assert_eq!(self.arity, other.arity, "tensor arity mismatch");
        let mut out = self.clone();
        for (legs, c) in &other.terms {
            out.add_term(legs.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> HopfTensor {
        let mut out = HopfTensor::zero(&self.algebra, self.arity);
        for (legs, s) in &self.terms {
            out.add_term(legs.clone(), s * c);
        }
        out
    }

    /// Componentwise product.
    pub fn mul(&self, other: &HopfTensor) -> HopfTensor {
        same_algebra(&self.algebra, &other.algebra);
        assert_eq!(self.arity, other.arity, "tensor arity mismatch");
        let mut out = HopfTensor::zero(&self.algebra, self.arity);
        for (la, ca) in &self.terms {
            for (lb, cb) in &other.terms {
                let legs = la
                    .iter()
                    .zip(lb)
                    .map(|(x, y)| HopfElement::mul_mono(&self.algebra, x, y))
                    .collect();
                out.add_term(legs, ca * cb);
            }
        }
        out
    }

    /// The flip of the two legs of an arity-2 tensor.
    pub fn flip(&self) -> HopfTensor {
        assert_eq!(self.arity, 2);
        let mut out = HopfTensor::zero(&self.algebra, 2);
        for (legs, c) in &self.terms {
            out.add_term(vec![legs[1].clone(), legs[0].clone()], c.clone());
        }
        out
    }

    /// Applies the counit to leg `i` and drops it (arity decreases by 1,
    /// unless arity is 1 in which case the scalar is returned via
    /// `counit_all`). Used by counit-axiom checks.
    pub fn counit_leg(&self, i: usize) -> HopfTensor {
        assert!(self.arity >= 2 && i < self.arity);
        let mut out = HopfTensor::zero(&self.algebra, self.arity - 1);
        for (legs, c) in &self.terms {
            if counit_keeps(&self.algebra, &legs[i]) {
                let mut rest = legs.clone();
                rest.remove(i);
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Converts an arity-1 tensor back to an element.
    pub fn into_element(&self) -> HopfElement {
        assert_eq!(self.arity, 1);
        let mut out = HopfElement::zero(&self.algebra);
        for (legs, c) in &self.terms {
            out.add_term(legs[0].clone(), c.clone());
        }
        out
    }
}

impl fmt::Display for HopfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
