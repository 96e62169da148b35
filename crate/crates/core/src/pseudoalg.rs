//! Lie pseudoalgebra structures, representations, homomorphisms, the two
//! iterated-bracket composition formulas, axiom checkers and fixture
//! constructors.
//!
//! Every identity is evaluated as an equality of canonical tensor
//! elements. Nested brackets compose by the leg-splicing rule; a term
//! whose arguments are fed in a different order than the ambient tuple is
//! realigned by the matching leg permutation afterwards.

use crate::hopf::{HopfKind, HopfRef, HopfTensor, Mono};
use crate::module::{ModuleElement, ModuleMap, ModuleRef};
use crate::polymap::{all_tuples, PolyMap};
use crate::report::CheckReport;
use crate::scalar::Scalar;
use crate::tensor::{LegPermutation, TensorElement};

/// A Lie pseudoalgebra: a free module together with a skew pseudobracket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiePseudoalgebra {
    pub module: ModuleRef,
    pub bracket: PolyMap,
}

impl LiePseudoalgebra {
    pub fn new(module: ModuleRef, bracket: PolyMap) -> Self {
        assert_eq!(bracket.arity(), 2);
        assert!(bracket.sources()[0] == module && bracket.sources()[1] == module);
        assert!(bracket.target() == &module);
        LiePseudoalgebra { module, bracket }
    }

    pub fn abelian(module: ModuleRef) -> Self {
        let bracket = PolyMap::zero(vec![module.clone(), module.clone()], module.clone());
        LiePseudoalgebra { module, bracket }
    }

    pub fn algebra(&self) -> &HopfRef {
        &self.module.algebra
    }
}

/// A representation: an action map `L (x) M -> H^2 (x)_H M` over a
/// pseudoalgebra.
#[derive(Clone, Debug)]
pub struct Representation {
    pub algebra: LiePseudoalgebra,
    pub module: ModuleRef,
    pub action: PolyMap,
}

impl Representation {
    pub fn new(algebra: LiePseudoalgebra, module: ModuleRef, action: PolyMap) -> Self {
        assert_eq!(action.arity(), 2);
        assert!(action.sources()[0] == algebra.module);
        assert!(action.sources()[1] == module);
        assert!(action.target() == &module);
        Representation { algebra, module, action }
    }

    pub fn adjoint(algebra: &LiePseudoalgebra) -> Self {
        Representation {
            algebra: algebra.clone(),
            module: algebra.module.clone(),
            action: algebra.bracket.clone(),
        }
    }

    /// The trivial action on a module.
    pub fn trivial(algebra: &LiePseudoalgebra, module: &ModuleRef) -> Self {
        let action = PolyMap::zero(vec![algebra.module.clone(), module.clone()], module.clone());
        Representation { algebra: algebra.clone(), module: module.clone(), action }
    }
}

/// Bilinear evaluation of an arity-2 table on module elements.
pub fn eval_bracket(b: &PolyMap, x: &ModuleElement, y: &ModuleElement) -> TensorElement {
    b.eval(&[x, y])
}

/// `B_out(B_in(x, y), z)` with output legs aligned to `(x, y, z)`.
///
/// For each term `(f (x) g) (x)_H e` of the inner value, the outer value
/// `B_out(e, z)` is spliced: its first leg is spread by the
/// comultiplication and multiplied into `(f, g)`, the second leg passes
/// through.
pub fn compose_left(
    b_out: &PolyMap,
    b_in: &PolyMap,
    x: &ModuleElement,
    y: &ModuleElement,
    z: &ModuleElement,
) -> TensorElement {
    assert!(b_in.target() == &b_out.sources()[0], "module mismatch");
    let inner = b_in.eval(&[x, y]);
    let mut out = TensorElement::zero(b_out.target(), 3);
    for ((legs, idx), c) in inner.terms() {
        let outer = b_out.eval(&[&ModuleElement::basis(&b_out.sources()[0], *idx), z]);
        let mut f = HopfTensor::zero(&b_in.target().algebra, 2);
        f.add_term(legs.clone(), c.clone());
        out = out.add(&outer.splice_into(&f));
    }
    out
}

/// `B_out(x, B_in(y, z))` with output legs aligned to `(x, y, z)`.
///
/// Realized as flip-splice-rotate: the outer value's legs are flipped so
/// its second leg is spread into the inner legs, then the passed-through
/// first leg is rotated back to the front.
pub fn compose_right(
    b_out: &PolyMap,
    b_in: &PolyMap,
    x: &ModuleElement,
    y: &ModuleElement,
    z: &ModuleElement,
) -> TensorElement {
    assert!(b_in.target() == &b_out.sources()[1], "module mismatch");
    let inner = b_in.eval(&[y, z]);
    let mut out = TensorElement::zero(b_out.target(), 3);
    let rotate = LegPermutation::new(vec![1, 2, 0]);
    for ((legs, idx), c) in inner.terms() {
        let outer = b_out.eval(&[x, &ModuleElement::basis(&b_out.sources()[1], *idx)]);
        let mut f = HopfTensor::zero(&b_in.target().algebra, 2);
        f.add_term(legs.clone(), c.clone());
        let spliced = outer.permute_legs(&LegPermutation::flip2()).splice_into(&f);
        out = out.add(&spliced.permute_legs(&rotate));
    }
    out
}

/// `x * T` for an action map and `T` in `H^{(x)n} (x)_H M`: the result has
/// `n+1` legs with `x`'s leg first. Realized as flip-splice-rotate.
pub fn act_nested(action: &PolyMap, x: &ModuleElement, t: &TensorElement) -> TensorElement {
    assert!(action.target() == t.module(), "module mismatch");
    let n = t.arity();
    let mut out = TensorElement::zero(action.target(), n + 1);
    // rotation bringing the passed-through first leg to the front
    let mut images: Vec<usize> = (1..=n).collect();
    images.push(0);
    let rotate = LegPermutation::new(images);
    for ((legs, idx), c) in t.terms() {
        let outer = action.eval(&[x, &ModuleElement::basis(&action.sources()[1], *idx)]);
        let mut f = HopfTensor::zero(&t.module().algebra, n);
        f.add_term(legs.clone(), c.clone());
        let spliced = outer.permute_legs(&LegPermutation::flip2()).splice_into(&f);
        out = out.add(&spliced.permute_legs(&rotate));
    }
    out
}

/// `theta(B(x_i, x_j), rest...)` for an `n`-ary table: the bracket value's
/// leg pair is spliced into the first slot, so the result has `n+1` legs,
/// the pair first.
pub fn bracket_nested(
    theta: &PolyMap,
    b_value: &TensorElement,
    rest: &[&ModuleElement],
) -> TensorElement {
    assert_eq!(b_value.arity(), 2);
    assert!(b_value.module() == &theta.sources()[0], "module mismatch");
    assert_eq!(rest.len(), theta.arity() - 1);
    let mut out = TensorElement::zero(theta.target(), theta.arity() + 1);
    for ((legs, idx), c) in b_value.terms() {
        let first = ModuleElement::basis(&theta.sources()[0], *idx);
        let mut args: Vec<&ModuleElement> = Vec::with_capacity(theta.arity());
        args.push(&first);
        args.extend(rest.iter().copied());
        let inner = theta.eval(&args);
        let mut f = HopfTensor::zero(&theta.target().algebra, 2);
        f.add_term(legs.clone(), c.clone());
        out = out.add(&inner.splice_into(&f));
    }
    out
}

/// Skew-symmetry of an arity-2 table.
pub fn check_skew(b: &PolyMap) -> CheckReport {
    b.check_skew()
}

/// Jacobi identity on all basis triples:
/// `[[x*y]*z] = [x*[y*z]] - sigma_12 [y*[x*z]]`, where the flip realigns
/// the legs of the third term to the ambient `(x, y, z)` order.
pub fn check_jacobi(candidate: &LiePseudoalgebra) -> CheckReport {
    let mut report = CheckReport::new("jacobi");
    let rho = &candidate.bracket;
    let m = &candidate.module;
    let realign = LegPermutation::realign(&[1, 0, 2]);
    for t in all_tuples(&[m.rank(), m.rank(), m.rank()]) {
        let x = ModuleElement::basis(m, t[0]);
        let y = ModuleElement::basis(m, t[1]);
        let z = ModuleElement::basis(m, t[2]);
        let lhs = compose_left(rho, rho, &x, &y, &z);
        let r1 = compose_right(rho, rho, &x, &y, &z);
        let r2 = compose_right(rho, rho, &y, &x, &z).permute_legs(&realign);
        let diff = lhs.sub(&r1.sub(&r2));
        if !diff.is_zero() {
            report.push(t.iter().map(|&i| m.basis[i].clone()).collect(), diff.render());
        }
    }
    report
}

/// Representation identity `[x*y]*u = x*(y*u) - sigma_12 y*(x*u)` on all
/// basis pairs times module basis.
pub fn check_representation(rep: &Representation) -> CheckReport {
    let mut report = CheckReport::new("representation");
    let rho = &rep.algebra.bracket;
    let psi = &rep.action;
    let l = &rep.algebra.module;
    let m = &rep.module;
    let realign = LegPermutation::realign(&[1, 0, 2]);
    for t in all_tuples(&[l.rank(), l.rank(), m.rank()]) {
        let x = ModuleElement::basis(l, t[0]);
        let y = ModuleElement::basis(l, t[1]);
        let u = ModuleElement::basis(m, t[2]);
        let lhs = compose_left(psi, rho, &x, &y, &u);
        let r1 = compose_right(psi, psi, &x, &y, &u);
        let r2 = compose_right(psi, psi, &y, &x, &u).permute_legs(&realign);
        let diff = lhs.sub(&r1.sub(&r2));
        if !diff.is_zero() {
            report.push(
                vec![l.basis[t[0]].clone(), l.basis[t[1]].clone(), m.basis[t[2]].clone()],
                diff.render(),
            );
        }
    }
    report
}

/// Checks that `theta` intertwines the two pseudobrackets, and separately
/// whether it is invertible as an `H`-module map.
pub fn check_homomorphism(
    theta: &ModuleMap,
    a: &LiePseudoalgebra,
    a_prime: &LiePseudoalgebra,
) -> (CheckReport, bool) {
    assert!(theta.source == a.module && theta.target == a_prime.module, "shape mismatch");
    let mut report = CheckReport::new("homomorphism");
    let l = &a.module;
    for t in all_tuples(&[l.rank(), l.rank()]) {
        let x = theta.apply(&ModuleElement::basis(l, t[0]));
        let y = theta.apply(&ModuleElement::basis(l, t[1]));
        let lhs = a_prime.bracket.eval(&[&x, &y]);
        let rhs = a.bracket.value(&t).map_target(theta);
        let diff = lhs.sub(&rhs);
        if !diff.is_zero() {
            report.push(vec![l.basis[t[0]].clone(), l.basis[t[1]].clone()], diff.render());
        }
    }
    let invertible = theta.inverse().is_some();
    (report, invertible)
}

/// The current pseudoalgebra over `H` on classical structure constants
/// `c[i][j][k]`: the bracket table is `(1 x 1) (x)_H [e_i, e_j]`.
pub fn current_pseudoalgebra(
    labels: Vec<&str>,
    constants: &[Vec<Vec<Scalar>>],
    algebra: &HopfRef,
) -> Result<LiePseudoalgebra, String> {
    let dim = labels.len();
    if constants.len() != dim
        || constants.iter().any(|r| r.len() != dim || r.iter().any(|v| v.len() != dim))
    {
        return Err("structure constants must be dim x dim x dim".into());
    }
    let field = algebra.field;
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let anti = &constants[i][j][k] + &constants[j][i][k];
                if !anti.is_zero() {
                    return Err(format!(
                        "structure constants not antisymmetric at ({i},{j},{k})"
                    ));
                }
            }
        }
    }
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                for m in 0..dim {
                    let mut acc = Scalar::zero(field);
                    for l in 0..dim {
                        acc = &acc + &(&constants[i][j][l] * &constants[l][k][m]);
                        acc = &acc + &(&constants[j][k][l] * &constants[l][i][m]);
                        acc = &acc + &(&constants[k][i][l] * &constants[l][j][m]);
                    }
                    if !acc.is_zero() {
                        return Err(format!("structure constants fail Jacobi at ({i},{j},{k})"));
                    }
                }
            }
        }
    }
    let module = crate::module::FreeModule::new("Cur", labels, algebra)?;
    let mut bracket = PolyMap::zero(vec![module.clone(), module.clone()], module.clone());
    let unit = Mono::unit(algebra);
    for i in 0..dim {
        for j in 0..dim {
            let mut v = TensorElement::zero(&module, 2);
            for k in 0..dim {
                v.add_term(vec![unit.clone(), unit.clone()], k, constants[i][j][k].clone());
            }
            bracket.set(vec![i, j], v);
        }
    }
    Ok(LiePseudoalgebra::new(module, bracket))
}

/// A lambda-bracket table for modules over `k[d]`: for each basis pair,
/// the list of lambda powers with their module-element coefficients
/// (which may carry `d`-polynomials).
pub type LambdaTable = Vec<((usize, usize), Vec<(u32, ModuleElement)>)>;

/// Translates a lambda-bracket into a pseudobracket: the term
/// `lambda^m c_m` becomes `((-d)^m (x) 1) (x)_H c_m`, with the
/// `d`-coefficients of `c_m` pushed into the legs by canonicalization.
pub fn from_lambda_bracket(module: &ModuleRef, table: &LambdaTable) -> Result<PolyMap, String> {
    let algebra = &module.algebra;
    match &algebra.kind {
        HopfKind::Polynomial { generators } if generators.len() == 1 => {}
        _ => return Err("lambda dictionary requires H = k[d] with one generator".into()),
    }
    let mut bracket = PolyMap::zero(vec![module.clone(), module.clone()], module.clone());
    for ((i, j), terms) in table {
        let mut value = TensorElement::zero(module, 2);
        for (m, coeff) in terms {
            let mut legs = HopfTensor::zero(algebra, 2);
            let sign = if m % 2 == 0 {
                Scalar::one(algebra.field)
            } else {
                Scalar::from_int(algebra.field, -1)
            };
            legs.add_term(vec![Mono::Exp(vec![*m]), Mono::Exp(vec![0])], sign);
            value = value.add(&TensorElement::canonicalize(module, 2, &[(legs, coeff.clone())]));
        }
        bracket.set(vec![*i, *j], value);
    }
    Ok(bracket)
}

/// Inverse of the dictionary: the first leg is evaluated at `-lambda`,
/// the second at `lambda + d` (binomially expanded).
pub fn to_lambda_bracket(bracket: &PolyMap) -> Result<LambdaTable, String> {
    let module = bracket.target().clone();
    let algebra = module.algebra.clone();
    match &algebra.kind {
        HopfKind::Polynomial { generators } if generators.len() == 1 => {}
        _ => return Err("lambda dictionary requires H = k[d] with one generator".into()),
    }
    fn binom(n: u64, k: u64) -> u64 {
        let k = k.min(n - k);
        let mut acc = 1u64;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }
    let mut out: LambdaTable = Vec::new();
    for (tuple, value) in bracket.entries() {
        let mut per_power: std::collections::BTreeMap<u32, ModuleElement> = Default::default();
        for ((legs, idx), c) in value.terms() {
            let (a, b) = match (&legs[0], &legs[1]) {
                (Mono::Exp(ea), Mono::Exp(eb)) => (ea[0], eb[0]),
                _ => unreachable!(),
            };
            // (-lambda)^a (lambda + d)^b
            for s in 0..=b {
                let mut coeff = Scalar::from_int(algebra.field, binom(b as u64, s as u64) as i64);
                if a % 2 == 1 {
                    coeff = coeff.neg();
                }
                coeff = &coeff * c;
                let power = a + s;
                let dpart = crate::hopf::HopfElement::monomial(&algebra, Mono::Exp(vec![b - s]))
                    .scale(&coeff);
                let entry =
                    per_power.entry(power).or_insert_with(|| ModuleElement::zero(&module));
                entry.coeffs[*idx] = entry.coeffs[*idx].add(&dpart);
            }
        }
        let terms: Vec<(u32, ModuleElement)> =
            per_power.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        if !terms.is_empty() {
            out.push(((tuple[0], tuple[1]), terms));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::hopf::HopfAlgebra;
    use crate::module::FreeModule;
    use crate::scalar::FieldSpec;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    #[test]
    fn virasoro_bracket_from_lambda() {
        let vir = fixtures::virasoro(q());
        // [L*L] = (1 x d - d x 1) (x) L
        let v = vir.bracket.value(&[0, 0]);
        let mut expect = TensorElement::zero(&vir.module, 2);
        expect.add_term(vec![Mono::Exp(vec![0]), Mono::Exp(vec![1])], 0, Scalar::one(q()));
        expect.add_term(vec![Mono::Exp(vec![1]), Mono::Exp(vec![0])], 0, Scalar::from_int(q(), -1));
        assert_eq!(v, expect);
    }

    #[test]
    fn virasoro_skew_and_jacobi() {
        let vir = fixtures::virasoro(q());
        assert!(check_skew(&vir.bracket).passed());
        assert!(check_jacobi(&vir).passed());
    }

    #[test]
    fn virasoro_eval_with_coefficients() {
        let vir = fixtures::virasoro(q());
        let d = crate::hopf::HopfElement::generator(vir.algebra(), 0);
        let x = ModuleElement::basis(&vir.module, 0).act(&d);
        let y = ModuleElement::basis(&vir.module, 0);
        // [dL * L] = (d x d - d^2 x 1) (x) L
        let v = eval_bracket(&vir.bracket, &x, &y);
        let mut expect = TensorElement::zero(&vir.module, 2);
        expect.add_term(vec![Mono::Exp(vec![1]), Mono::Exp(vec![1])], 0, Scalar::one(q()));
        expect.add_term(vec![Mono::Exp(vec![2]), Mono::Exp(vec![0])], 0, Scalar::from_int(q(), -1));
        assert_eq!(v, expect);
    }

    #[test]
    fn sl2_compose_examples() {
        let sl2 = fixtures::sl2(q());
        let m = &sl2.module;
        let e = ModuleElement::basis(m, 0);
        let f = ModuleElement::basis(m, 1);
        let h = ModuleElement::basis(m, 2);
        // [[e*f]*h] = [h,h] = 0
        let v = compose_left(&sl2.bracket, &sl2.bracket, &e, &f, &h);
        assert!(v.is_zero());
        // [e*[f*h]] = [e, 2f] = 2h
        let v2 = compose_right(&sl2.bracket, &sl2.bracket, &e, &f, &h);
        let unit = Mono::unit(sl2.algebra());
        let expect = TensorElement::term(
            m,
            vec![unit.clone(), unit.clone(), unit.clone()],
            2,
            Scalar::from_int(q(), 2),
        );
        assert_eq!(v2, expect);
    }

    #[test]
    fn sl2_skew_jacobi_and_adjoint() {
        let sl2 = fixtures::sl2(q());
        assert!(check_skew(&sl2.bracket).passed());
        assert!(check_jacobi(&sl2).passed());
        assert!(check_representation(&Representation::adjoint(&sl2)).passed());
    }

    #[test]
    fn zero_bracket_passes_everything() {
        let h = HopfAlgebra::trivial(q());
        let m = FreeModule::new("L", vec!["a", "b"], &h).unwrap();
        let alg = LiePseudoalgebra::abelian(m.clone());
        assert!(check_skew(&alg.bracket).passed());
        assert!(check_jacobi(&alg).passed());
        let zero_rep = Representation::trivial(&alg, &m);
        assert!(check_representation(&zero_rep).passed());
    }

    #[test]
    fn skew_failure_located() {
        let h = HopfAlgebra::trivial(q());
        let m = FreeModule::new("L", vec!["e1", "e2"], &h).unwrap();
        let unit = Mono::unit(&h);
        let mut b = PolyMap::zero(vec![m.clone(), m.clone()], m.clone());
        let val = TensorElement::term(&m, vec![unit.clone(), unit.clone()], 0, Scalar::one(q()));
        b.set(vec![0, 1], val.clone());
        b.set(vec![1, 0], val);
        let report = check_skew(&b);
        assert!(!report.passed());
        assert!(report.findings.iter().any(|f| f.locator.contains(&"e2".to_string())));
    }

    #[test]
    fn current_over_z2_passes() {
        let cur = fixtures::cur_sl2_z2(q());
        assert!(check_jacobi(&cur).passed());
        assert!(check_skew(&cur.bracket).passed());
    }

    #[test]
    fn current_rejects_non_jacobi_constants() {
        let h = HopfAlgebra::trivial(q());
        let one = Scalar::one(q());
        let zero = Scalar::zero(q());
        // [e1,e2]=e3, [e2,e3]=e1, [e1,e3]=e1 violates Jacobi
        let mut c = vec![vec![vec![zero.clone(); 3]; 3]; 3];
        c[0][1][2] = one.clone();
        c[1][0][2] = one.neg();
        c[1][2][0] = one.clone();
        c[2][1][0] = one.neg();
        c[0][2][0] = one.clone();
        c[2][0][0] = one.neg();
        assert!(current_pseudoalgebra(vec!["e1", "e2", "e3"], &c, &h).is_err());
    }

    #[test]
    fn lambda_round_trip() {
        let vir = fixtures::virasoro(q());
        let table = to_lambda_bracket(&vir.bracket).unwrap();
        let back = from_lambda_bracket(&vir.module, &table).unwrap();
        assert_eq!(back, vir.bracket);
        // and the recovered table is (d + 2 lambda) L
        assert_eq!(table.len(), 1);
        let (pair, terms) = &table[0];
        assert_eq!(*pair, (0, 0));
        assert_eq!(terms.len(), 2);
        let d = crate::hopf::HopfElement::generator(vir.algebra(), 0);
        assert_eq!(terms[0].0, 0);
        assert_eq!(terms[0].1.coeffs[0], d);
        assert_eq!(terms[1].0, 1);
        assert_eq!(
            terms[1].1.coeffs[0],
            crate::hopf::HopfElement::scalar(vir.algebra(), Scalar::from_int(q(), 2))
        );
    }

    #[test]
    fn lambda_requires_single_generator() {
        let h = HopfAlgebra::polynomial(vec!["d1", "d2"], q());
        let m = FreeModule::new("L", vec!["L"], &h).unwrap();
        assert!(from_lambda_bracket(&m, &vec![]).is_err());
        let ht = HopfAlgebra::trivial(q());
        let mt = FreeModule::new("L", vec!["L"], &ht).unwrap();
        assert!(from_lambda_bracket(&mt, &vec![]).is_err());
    }

    #[test]
    fn homomorphism_sl2_swap() {
        // e -> f, f -> e, h -> -h is an automorphism of sl2
        let sl2 = fixtures::sl2(q());
        let m = &sl2.module;
        let alg = sl2.algebra();
        let s = |n: i64| crate::hopf::HopfElement::scalar(alg, Scalar::from_int(q(), n));
        let theta = ModuleMap::new(
            m,
            m,
            vec![
                vec![s(0), s(1), s(0)],
                vec![s(1), s(0), s(0)],
                vec![s(0), s(0), s(-1)],
            ],
        )
        .unwrap();
        let (report, invertible) = check_homomorphism(&theta, &sl2, &sl2);
        assert!(report.passed());
        assert!(invertible);
        // 2*id is not an automorphism of sl2 (quadratic terms mismatch)
        let double = ModuleMap::diagonal(m, &vec![Scalar::from_int(q(), 2); 3]);
        let (report2, inv2) = check_homomorphism(&double, &sl2, &sl2);
        assert!(!report2.passed());
        assert!(inv2);
    }
}
