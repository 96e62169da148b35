//! Free finite-rank left `H`-modules, their elements, and `H`-linear maps
//! between them.

use std::fmt;
use std::sync::Arc;

use crate::hopf::{HopfElement, HopfKind, HopfRef, Mono};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A free left `H`-module with a named basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModule {
    pub name: String,
    pub basis: Vec<String>,
    pub algebra: HopfRef,
}

pub type ModuleRef = Arc<FreeModule>;

impl FreeModule {
    pub fn new(name: &str, basis: Vec<&str>, algebra: &HopfRef) -> Result<ModuleRef, String> {
        let basis: Vec<String> = basis.iter().map(|s| s.to_string()).collect();
        let mut sorted = basis.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != basis.len() {
            return Err(format!("module '{name}' has duplicate basis labels"));
        }
        Ok(Arc::new(FreeModule { name: name.to_string(), basis, algebra: algebra.clone() }))
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|l| l == label)
    }

    /// The direct sum `self (+) other`, with basis labels concatenated.
    pub fn direct_sum(a: &ModuleRef, b: &ModuleRef, name: &str) -> ModuleRef {
        assert!(a.algebra == b.algebra, "hopf descriptor mismatch");
        let mut basis: Vec<String> = a.basis.clone();
        basis.extend(b.basis.iter().cloned());
        {
            let mut sorted = basis.clone();
            sorted.sort();
            sorted.dedup();
            assert!(sorted.len() == basis.len(), "direct summands share basis labels");
        }
        Arc::new(FreeModule { name: name.to_string(), basis, algebra: a.algebra.clone() })
    }
}

/// An element `sum_i h_i e_i` of a free module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleElement {
    pub module: ModuleRef,
    pub coeffs: Vec<HopfElement>,
}

impl ModuleElement {
    pub fn zero(module: &ModuleRef) -> Self {
        let coeffs = (0..module.rank()).map(|_| HopfElement::zero(&module.algebra)).collect();
        ModuleElement { module: module.clone(), coeffs }
    }

    pub fn basis(module: &ModuleRef, i: usize) -> Self {
        assert!(i < module.rank(), "basis index out of range");
        let mut el = ModuleElement::zero(module);
        el.coeffs[i] = HopfElement::one(&module.algebra);
        el
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &ModuleElement) -> ModuleElement {
        assert!(self.module == other.module, "module mismatch");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect();
        ModuleElement { module: self.module.clone(), coeffs }
    }

    pub fn neg(&self) -> ModuleElement {
        ModuleElement {
            module: self.module.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, other: &ModuleElement) -> ModuleElement {
        self.add(&other.neg())
    }

    /// Left action of `h`.
    pub fn act(&self, h: &HopfElement) -> ModuleElement {
        ModuleElement {
            module: self.module.clone(),
            coeffs: self.coeffs.iter().map(|c| h.mul(c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> ModuleElement {
        ModuleElement {
            module: self.module.clone(),
            coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect(),
        }
    }

    /// Re-coordinates the element into a larger module containing this
    /// module's basis at `offset`.
    pub fn embed(&self, into: &ModuleRef, offset: usize) -> ModuleElement {
        assert!(offset + self.module.rank() <= into.rank(), "embedding out of range");
        let mut out = ModuleElement::zero(into);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.coeffs[offset + i] = c.clone();
        }
        out
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({})*{}", c.render(), self.module.basis[i]))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// An `H`-linear map between free modules, stored as a
/// (target rank) x (source rank) matrix of `H`-entries:
/// `map(e_i) = sum_j entries[j][i] f_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub source: ModuleRef,
    pub target: ModuleRef,
    pub entries: Vec<Vec<HopfElement>>,
}

impl ModuleMap {
    pub fn new(
        source: &ModuleRef,
        target: &ModuleRef,
        entries: Vec<Vec<HopfElement>>,
    ) -> Result<Self, String> {
        if source.algebra != target.algebra {
            return Err("hopf descriptor mismatch between source and target".into());
        }
        if entries.len() != target.rank() || entries.iter().any(|r| r.len() != source.rank()) {
            return Err(format!(
                "map shape must be {}x{}",
                target.rank(),
                source.rank()
            ));
        }
        for row in &entries {
            for e in row {
                if e.algebra() != &source.algebra {
                    return Err("map entry over wrong Hopf algebra".into());
                }
            }
        }
        Ok(ModuleMap { source: source.clone(), target: target.clone(), entries })
    }

    pub fn zero(source: &ModuleRef, target: &ModuleRef) -> Self {
        let entries = (0..target.rank())
            .map(|_| (0..source.rank()).map(|_| HopfElement::zero(&source.algebra)).collect())
            .collect();
        ModuleMap::new(source, target, entries).unwrap()
    }

    pub fn identity(module: &ModuleRef) -> Self {
        let mut m = ModuleMap::zero(module, module);
        for i in 0..module.rank() {
            m.entries[i][i] = HopfElement::one(&module.algebra);
        }
        m
    }

    /// Diagonal scalar map on a module.
    pub fn diagonal(module: &ModuleRef, diag: &[Scalar]) -> Self {
        assert_eq!(diag.len(), module.rank());
        let mut m = ModuleMap::zero(module, module);
        for (i, c) in diag.iter().enumerate() {
            m.entries[i][i] = HopfElement::scalar(&module.algebra, c.clone());
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && *self == ModuleMap::identity(&self.source)
    }

    pub fn apply(&self, x: &ModuleElement) -> ModuleElement {
        assert!(x.module == self.source, "module mismatch in map application");
        let alg = &self.source.algebra;
        let mut out = ModuleElement::zero(&self.target);
        for j in 0..self.target.rank() {
            let mut acc = HopfElement::zero(alg);
            for i in 0..self.source.rank() {
                // left module: Theta(h e_i) = h * entries[j][i] f_j
                acc = acc.add(&x.coeffs[i].mul(&self.entries[j][i]));
            }
            out.coeffs[j] = acc;
        }
        out
    }

    /// `self` after `first`: `(self . first)(x) = self(first(x))`.
    pub fn compose(&self, first: &ModuleMap) -> ModuleMap {
        assert!(first.target == self.source, "composition shape mismatch");
        let mut out = ModuleMap::zero(&first.source, &self.target);
        for i in 0..first.source.rank() {
            let image = self.apply(&first.apply(&ModuleElement::basis(&first.source, i)));
            for j in 0..self.target.rank() {
                out.entries[j][i] = image.coeffs[j].clone();
            }
        }
        out
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        assert!(self.source == other.source && self.target == other.target);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| a.add(b)).collect())
            .collect();
        ModuleMap { source: self.source.clone(), target: self.target.clone(), entries }
    }

    pub fn neg(&self) -> ModuleMap {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|a| a.neg()).collect())
            .collect();
        ModuleMap { source: self.source.clone(), target: self.target.clone(), entries }
    }

    pub fn sub(&self, other: &ModuleMap) -> ModuleMap {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.iter().all(|e| e.is_zero()))
    }

    /// Exact inverse as an `H`-module map, when it exists.
    ///
    /// For finite-dimensional kernels the map is linearized over `k` and
    /// inverted there; for polynomial kernels the determinant must be a
    /// unit (a nonzero constant), and the adjugate gives the inverse.
    pub fn inverse(&self) -> Option<ModuleMap> {
        if self.source.rank() != self.target.rank() {
            return None;
        }
        let alg = &self.source.algebra;
        match &alg.kind {
            HopfKind::Trivial | HopfKind::Group(_) => self.inverse_linearized(),
            HopfKind::Polynomial { .. } => self.inverse_polynomial(),
        }
    }

    fn inverse_linearized(&self) -> Option<ModuleMap> {
        let alg = &self.source.algebra;
        let monos = alg.basis_monomials().expect("finite-dimensional kernel");
        let dim_h = monos.len();
        let r = self.source.rank();
        let n = r * dim_h;
        let field = alg.field;
        let coord = |i: usize, m: &Mono| -> usize {
            i * dim_h + monos.iter().position(|x| x == m).unwrap()
        };
        let mut mat = Matrix::zeros(field, n, n);
        for i in 0..r {
            for (gi, g) in monos.iter().enumerate() {
                // image of g*e_i
                let x = ModuleElement::basis(&self.source, i)
                    .act(&HopfElement::monomial(alg, g.clone()));
                let y = self.apply(&x);
                for (j, c) in y.coeffs.iter().enumerate() {
                    for (m, s) in c.terms() {
                        let row = coord(j, m);
                        let prev = mat.get(row, i * dim_h + gi).clone();
                        mat.set(row, i * dim_h + gi, &prev + s);
                    }
                }
            }
        }
        let inv = mat.inverse()?;
        // read back the H-matrix: columns are preimages of 1*f_j
        let unit_idx = monos.iter().position(|m| m.is_unit(alg)).unwrap();
        let mut out = ModuleMap::zero(&self.target, &self.source);
        for j in 0..r {
            let col = j * dim_h + unit_idx;
            for i in 0..r {
                let mut h = HopfElement::zero(alg);
                for (gi, g) in monos.iter().enumerate() {
                    let c = inv.get(i * dim_h + gi, col).clone();
                    if !c.is_zero() {
                        let mut term = HopfElement::monomial(alg, g.clone());
                        term = term.scale(&c);
                        h = h.add(&term);
                    }
                }
                out.entries[i][j] = h;
            }
        }
        Some(out)
    }

    fn inverse_polynomial(&self) -> Option<ModuleMap> {
        let alg = &self.source.algebra;
        let n = self.source.rank();
        let det = determinant(alg, &self.entries, (0..n).collect(), (0..n).collect());
        // unit in k[d..] = nonzero constant
        let mut unit_inv: Option<Scalar> = None;
        let mut nonconstant = false;
        for (m, c) in det.terms() {
            if m.is_unit(alg) {
                unit_inv = Some(c.inv());
            } else {
                nonconstant = true;
            }
        }
        if nonconstant || unit_inv.is_none() {
            return None;
        }
        let d_inv = unit_inv.unwrap();
        let mut out = ModuleMap::zero(&self.target, &self.source);
        for i in 0..n {
            for j in 0..n {
                // adjugate: cofactor C_ji
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let minor = determinant(alg, &self.entries, rows, cols);
                let sign = if (i + j) % 2 == 0 { minor } else { minor.neg() };
                out.entries[i][j] = sign.scale(&d_inv);
            }
        }
        Some(out)
    }

    pub fn render(&self) -> String {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|e| e.render()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("{} -> {}: [{}]", self.source.name, self.target.name, rows.join(", "))
    }
}

/// Laplace-expansion determinant of a submatrix (commutative kernels only).
fn determinant(
    alg: &HopfRef,
    entries: &[Vec<HopfElement>],
    rows: Vec<usize>,
    cols: Vec<usize>,
) -> HopfElement {
    assert_eq!(rows.len(), cols.len());
    if rows.is_empty() {
        return HopfElement::one(alg);
    }
    let mut acc = HopfElement::zero(alg);
    let r0 = rows[0];
    for (k, &c) in cols.iter().enumerate() {
        let e = &entries[r0][c];
        if e.is_zero() {
            continue;
        }
        let sub_rows: Vec<usize> = rows[1..].to_vec();
        let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = determinant(alg, entries, sub_rows, sub_cols);
        let term = e.mul(&minor);
        acc = if k % 2 == 0 { acc.add(&term) } else { acc.add(&term.neg()) };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{GroupTable, HopfAlgebra};
    use crate::scalar::FieldSpec;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    #[test]
    fn identity_inverse() {
        let h = HopfAlgebra::trivial(q());
        let m = FreeModule::new("L", vec!["x1", "x2"], &h).unwrap();
        let id = ModuleMap::identity(&m);
        assert_eq!(id.inverse().unwrap(), id);
    }

    #[test]
    fn trivial_kernel_matrix_inverse() {
        let h = HopfAlgebra::trivial(q());
        let m = FreeModule::new("L", vec!["x1", "x2"], &h).unwrap();
        let s = |n: i64| HopfElement::scalar(&h, Scalar::from_int(q(), n));
        let map = ModuleMap::new(&m, &m, vec![vec![s(2), s(1)], vec![s(1), s(1)]]).unwrap();
        let inv = map.inverse().unwrap();
        assert!(map.compose(&inv).is_identity());
        assert!(inv.compose(&map).is_identity());
    }

    #[test]
    fn group_kernel_inverse() {
        let h = HopfAlgebra::group(GroupTable::cyclic(2), q());
        let m = FreeModule::new("L", vec!["x"], &h).unwrap();
        let g = HopfElement::group_element(&h, 1);
        // multiplication by g is invertible with inverse g
        let map = ModuleMap::new(&m, &m, vec![vec![g.clone()]]).unwrap();
        let inv = map.inverse().unwrap();
        assert_eq!(inv.entries[0][0], g);
        // 1 + g is not invertible in Q[Z/2]? (1+g)(1-g) = 1 - g^2 = 0, so no.
        let bad = ModuleMap::new(&m, &m, vec![vec![HopfElement::one(&h).add(&g)]]).unwrap();
        assert!(bad.inverse().is_none());
    }

    #[test]
    fn polynomial_kernel_inverse_requires_unit_det() {
        let h = HopfAlgebra::polynomial(vec!["d1"], q());
        let m = FreeModule::new("L", vec!["x1", "x2"], &h).unwrap();
        let d = HopfElement::generator(&h, 0);
        let one = HopfElement::one(&h);
        let zero = HopfElement::zero(&h);
        // [[1, d],[0, 1]] has det 1: invertible
        let map = ModuleMap::new(
            &m,
            &m,
            vec![vec![one.clone(), d.clone()], vec![zero.clone(), one.clone()]],
        )
        .unwrap();
        let inv = map.inverse().unwrap();
        assert!(map.compose(&inv).is_identity());
        // [[d, 0],[0, 1]] has det d: not a unit
        let bad =
            ModuleMap::new(&m, &m, vec![vec![d.clone(), zero.clone()], vec![zero, one]]).unwrap();
        assert!(bad.inverse().is_none());
    }

    #[test]
    fn apply_respects_left_action() {
        let h = HopfAlgebra::polynomial(vec!["d1"], q());
        let m = FreeModule::new("L", vec!["x"], &h).unwrap();
        let d = HopfElement::generator(&h, 0);
        let map = ModuleMap::new(&m, &m, vec![vec![d.clone()]]).unwrap();
        let x = ModuleElement::basis(&m, 0).act(&d);
        let y = map.apply(&x);
        assert_eq!(y.coeffs[0], d.mul(&d));
    }
}
