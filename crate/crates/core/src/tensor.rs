//! Canonical forms and arithmetic for elements of `H^{(x)n} (x)_H M`
//! over free modules.
//!
//! For free `M` the canonical form pushes every `H`-coefficient on the
//! module slot into the tensor legs through the iterated comultiplication:
//! `F (x)_H (h e_i) = F * Delta^{(n-1)}(h) (x)_H e_i`. The stored data is
//! then an element of `H^{(x)n} (x) k^r`, which is unique, so equality is
//! term-by-term.

use std::collections::BTreeMap;
use std::fmt;

use crate::hopf::{HopfElement, HopfTensor, Mono};
use crate::module::{ModuleElement, ModuleMap, ModuleRef};
use crate::scalar::Scalar;

/// A permutation of the tensor legs; `perm[i]` is the destination of
/// leg `i`. Composition: `(s.compose(t))` acts as `s` after `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegPermutation(Vec<usize>);

impl LegPermutation {
    pub fn new(images: Vec<usize>) -> Self {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            assert!(i < n && !seen[i], "not a permutation");
            seen[i] = true;
        }
        LegPermutation(images)
    }

    pub fn identity(n: usize) -> Self {
        LegPermutation((0..n).collect())
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(a, b);
        LegPermutation(v)
    }

    /// The flip of two legs.
    pub fn flip2() -> Self {
        LegPermutation(vec![1, 0])
    }

    /// The permutation sending the legs of a term whose arguments sit at
    /// ambient positions `slots` back into ambient order: leg `i` moves
    /// to position `slots[i]`.
    pub fn realign(slots: &[usize]) -> Self {
        LegPermutation::new(slots.to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &LegPermutation) -> LegPermutation {
        assert_eq!(self.len(), other.len());
        LegPermutation((0..self.len()).map(|i| self.0[other.0[i]]).collect())
    }

    pub fn inverse(&self) -> LegPermutation {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        LegPermutation(inv)
    }

    pub fn sign(&self) -> i32 {
        let mut inv = 0;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.0[i] > self.0[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    fn apply(&self, legs: &[Mono]) -> Vec<Mono> {
        let mut out = vec![Mono::Exp(vec![]); legs.len()];
        for (i, m) in legs.iter().enumerate() {
            out[self.0[i]] = m.clone();
        }
        out
    }
}

/// An element of `H^{(x)n} (x)_H M` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    arity: usize,
    module: ModuleRef,
    terms: BTreeMap<(Vec<Mono>, usize), Scalar>,
}

impl TensorElement {
    pub fn zero(module: &ModuleRef, arity: usize) -> Self {
        assert!(arity >= 1, "arity must be positive");
        TensorElement { arity, module: module.clone(), terms: BTreeMap::new() }
    }

    /// Canonicalizes a list of `(F, x)` pairs with `F` in `H^{(x)n}` and
    /// `x` a module element: each `H`-coefficient of `x` is spread over
    /// the legs via the iterated comultiplication.
    pub fn canonicalize(module: &ModuleRef, arity: usize, pairs: &[(HopfTensor, ModuleElement)]) -> Self {
        let mut out = TensorElement::zero(module, arity);
        for (f, x) in pairs {
            assert_eq!(f.arity(), arity, "arity mismatch");
            assert!(f.algebra() == &module.algebra, "hopf descriptor mismatch");
            assert!(&x.module == module, "target module mismatch");
            for (i, h) in x.coeffs.iter().enumerate() {
                if h.is_zero() {
                    continue;
                }
                let spread = h.iterated_comul(arity);
                let prod = f.mul(&spread);
                for (legs, c) in prod.terms() {
                    out.add_term(legs.clone(), i, c.clone());
                }
            }
        }
        out
    }

    /// A single canonical term built from a pure monomial tensor.
    pub fn term(module: &ModuleRef, legs: Vec<Mono>, idx: usize, c: Scalar) -> Self {
        let mut out = TensorElement::zero(module, legs.len());
        out.add_term(legs, idx, c);
        out
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn module(&self) -> &ModuleRef {
        &self.module
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Vec<Mono>, usize), &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, legs: Vec<Mono>, idx: usize, c: Scalar) {
        assert_eq!(legs.len(), self.arity, "arity mismatch");
        assert!(idx < self.module.rank(), "basis index out of range");
        if c.is_zero() {
            return;
        }
        match self.terms.entry((legs, idx)) {
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

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        assert!(self.module == other.module, "target module mismatch");
        let mut out = self.clone();
        for ((legs, idx), c) in &other.terms {
            out.add_term(legs.clone(), *idx, c.clone());
        }
        out
    }

    pub fn neg(&self) -> TensorElement {
        let mut out = TensorElement::zero(&self.module, self.arity);
        for ((legs, idx), c) in &self.terms {
            out.add_term(legs.clone(), *idx, c.neg());
        }
        out
    }

    pub fn sub(&self, other: &TensorElement) -> TensorElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> TensorElement {
        let mut out = TensorElement::zero(&self.module, self.arity);
        for ((legs, idx), s) in &self.terms {
            out.add_term(legs.clone(), *idx, s * c);
        }
        out
    }

    /// Componentwise left multiplication of the legs by `F`.
    pub fn act(&self, f: &HopfTensor) -> TensorElement {
        assert_eq!(f.arity(), self.arity, "arity mismatch");
        assert!(f.algebra() == &self.module.algebra, "hopf descriptor mismatch");
        let mut out = TensorElement::zero(&self.module, self.arity);
        for (fl, fc) in f.terms() {
            for ((legs, idx), c) in &self.terms {
                let prod: Vec<Mono> = fl
                    .iter()
                    .zip(legs)
                    .map(|(a, b)| HopfElement::mul_mono(&self.module.algebra, a, b))
                    .collect();
                out.add_term(prod, *idx, fc * c);
            }
        }
        out
    }

    pub fn permute_legs(&self, sigma: &LegPermutation) -> TensorElement {
        assert_eq!(sigma.len(), self.arity, "size mismatch");
        let mut out = TensorElement::zero(&self.module, self.arity);
        for ((legs, idx), c) in &self.terms {
            out.add_term(sigma.apply(legs), *idx, c.clone());
        }
        out
    }

    /// The leg-splicing rule. For each term `(a (x) rest) (x)_H e` of
    /// `self`, the first leg `a` is spread by the iterated comultiplication
    /// over the legs of `F` and multiplied in componentwise; the remaining
    /// legs pass through:
    ///
    /// `F.splice(T)  =  sum (F * Delta^{(m)}(a)) (x) rest (x)_H e`
    ///
    /// where `F` has `m+1` legs. With `m = 1` this is exactly the
    /// composition rule for feeding a bracket value into the first slot of
    /// another polylinear map.
    pub fn splice_into(&self, f: &HopfTensor) -> TensorElement {
        assert!(f.algebra() == &self.module.algebra, "hopf descriptor mismatch");
        let m_plus_1 = f.arity();
        let rest = self.arity - 1;
        let mut out = TensorElement::zero(&self.module, m_plus_1 + rest);
        for ((legs, idx), c) in &self.terms {
            let first = HopfElement::monomial(&self.module.algebra, legs[0].clone());
            let spread = first.iterated_comul(m_plus_1);
            let head = f.mul(&spread);
            for (hl, hc) in head.terms() {
                let mut new_legs = hl.clone();
                new_legs.extend(legs[1..].iter().cloned());
                out.add_term(new_legs, *idx, hc * c);
            }
        }
        out
    }

    /// Applies the counit to leg `i` and drops it.
    pub fn counit_leg(&self, i: usize) -> TensorElement {
        assert!(self.arity >= 2 && i < self.arity, "leg index out of range");
        let mut out = TensorElement::zero(&self.module, self.arity - 1);
        for ((legs, idx), c) in &self.terms {
            let h = HopfElement::monomial(&self.module.algebra, legs[i].clone());
            let eps = h.counit();
            if eps.is_zero() {
                continue;
            }
            let mut rest = legs.clone();
            rest.remove(i);
            out.add_term(rest, *idx, &eps * c);
        }
        out
    }

    /// Pushes the target through an `H`-linear map, recanonicalizing.
    pub fn map_target(&self, theta: &ModuleMap) -> TensorElement {
        assert!(theta.source == self.module, "target module mismatch");
        let mut out = TensorElement::zero(&theta.target, self.arity);
        for ((legs, idx), c) in &self.terms {
            for (j, entry) in theta.entries.iter().enumerate() {
                let h = &entry[*idx];
                if h.is_zero() {
                    continue;
                }
                let spread = h.iterated_comul(self.arity);
                for (sl, sc) in spread.terms() {
                    let prod: Vec<Mono> = legs
                        .iter()
                        .zip(sl)
                        .map(|(a, b)| HopfElement::mul_mono(&self.module.algebra, a, b))
                        .collect();
                    out.add_term(prod, j, sc * c);
                }
            }
        }
        out
    }

    /// Re-targets the element into a larger module whose basis contains
    /// this module's basis starting at `offset`.
    pub fn embed(&self, into: &ModuleRef, offset: usize) -> TensorElement {
        assert!(offset + self.module.rank() <= into.rank(), "embedding out of range");
        let mut out = TensorElement::zero(into, self.arity);
        for ((legs, idx), c) in &self.terms {
            out.add_term(legs.clone(), idx + offset, c.clone());
        }
        out
    }

    /// Extracts the component supported on basis indices
    /// `offset..offset+sub.rank()`; the remaining components are returned
    /// alongside so callers can check they vanish.
    pub fn project(&self, sub: &ModuleRef, offset: usize) -> (TensorElement, bool) {
        let mut out = TensorElement::zero(sub, self.arity);
        let mut clean = true;
        for ((legs, idx), c) in &self.terms {
            if *idx >= offset && *idx < offset + sub.rank() {
                out.add_term(legs.clone(), idx - offset, c.clone());
            } else {
                clean = false;
            }
        }
        (out, clean)
    }

    /// Splits the element back into `(F, basis element)` pairs; round
    /// tripping through `canonicalize` is the identity.
    pub fn decompose(&self) -> Vec<(HopfTensor, ModuleElement)> {
        self.terms
            .iter()
            .map(|((legs, idx), c)| {
                let mut f = HopfTensor::zero(&self.module.algebra, self.arity);
                f.add_term(legs.clone(), c.clone());
                (f, ModuleElement::basis(&self.module, *idx))
            })
            .collect()
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let alg = &self.module.algebra;
        let mut s = String::new();
        for (i, ((legs, idx), c)) in self.terms.iter().enumerate() {
            let legs_str: Vec<String> = legs.iter().map(|m| m.render(alg)).collect();
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
            if !mag.is_one() {
                s.push_str(&format!("{mag}*"));
            }
            s.push_str(&format!("({}) {}", legs_str.join(" | "), self.module.basis[*idx]));
        }
        s
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
