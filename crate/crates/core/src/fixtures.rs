//! Standing fixtures used across the test suites and shipped as model
//! files: the Heisenberg cocycle data, sl2, the Virasoro conformal
//! algebra, the current algebra of sl2 over `Q[Z/2]`, and the semidirect
//! `aff(1)` kernel.

use crate::hopf::{GroupTable, HopfAlgebra, HopfElement, Mono};
use crate::module::{FreeModule, ModuleElement};
use crate::polymap::PolyMap;
use crate::pseudoalg::{
    current_pseudoalgebra, from_lambda_bracket, LambdaTable, LiePseudoalgebra,
};
use crate::scalar::{FieldSpec, Scalar};
use crate::tensor::TensorElement;

/// Two pseudoalgebras plus candidate cocycle data `(chi, psi)` between
/// them.
#[derive(Clone, Debug)]
pub struct CocycleFixture {
    pub l: LiePseudoalgebra,
    pub m: LiePseudoalgebra,
    pub chi: PolyMap,
    pub psi: PolyMap,
}

/// Abelian rank-2 `L = <x1, x2>`, abelian rank-1 `M = <z>`, with
/// `chi(x1, x2) = (1 x 1) z` and zero action. Building the extension
/// yields the Heisenberg algebra `h3`.
pub fn heisenberg_data(field: FieldSpec) -> CocycleFixture {
    let h = HopfAlgebra::trivial(field);
    let l_mod = FreeModule::new("L", vec!["x1", "x2"], &h).unwrap();
    let m_mod = FreeModule::new("M", vec!["z"], &h).unwrap();
    let l = LiePseudoalgebra::abelian(l_mod.clone());
    let m = LiePseudoalgebra::abelian(m_mod.clone());
    let unit = Mono::unit(&h);
    let chi = PolyMap::skew_fill(
        vec![l_mod.clone(), l_mod.clone()],
        m_mod.clone(),
        vec![(
            vec![0, 1],
            TensorElement::term(&m_mod, vec![unit.clone(), unit.clone()], 0, Scalar::one(field)),
        )],
    )
    .unwrap();
    let psi = PolyMap::zero(vec![l_mod, m_mod.clone()], m_mod);
    CocycleFixture { l, m, chi, psi }
}

/// sl2 over the trivial kernel: `[e,f] = h`, `[h,e] = 2e`, `[h,f] = -2f`.
pub fn sl2(field: FieldSpec) -> LiePseudoalgebra {
    let h = HopfAlgebra::trivial(field);
    sl2_over(&h, field)
}

fn sl2_constants(field: FieldSpec) -> Vec<Vec<Vec<Scalar>>> {
    let zero = Scalar::zero(field);
    let s = |n: i64| Scalar::from_int(field, n);
    let mut c = vec![vec![vec![zero; 3]; 3]; 3];
    // basis order (e, f, h)
    c[0][1][2] = s(1);
    c[1][0][2] = s(-1);
    c[2][0][0] = s(2);
    c[0][2][0] = s(-2);
    c[2][1][1] = s(-2);
    c[1][2][1] = s(2);
    c
}

fn sl2_over(h: &crate::hopf::HopfRef, field: FieldSpec) -> LiePseudoalgebra {
    current_pseudoalgebra(vec!["e", "f", "h"], &sl2_constants(field), h)
        .expect("sl2 constants satisfy Jacobi")
}

/// The Virasoro conformal algebra over `k[d]`, from the lambda bracket
/// `[L_lambda L] = (d + 2 lambda) L`.
pub fn virasoro(field: FieldSpec) -> LiePseudoalgebra {
    let h = HopfAlgebra::polynomial(vec!["d1"], field);
    let module = FreeModule::new("Vir", vec!["L"], &h).unwrap();
    let d = HopfElement::generator(&h, 0);
    let table: LambdaTable = vec![(
        (0, 0),
        vec![
            (0, ModuleElement::basis(&module, 0).act(&d)),
            (1, ModuleElement::basis(&module, 0).scale(&Scalar::from_int(field, 2))),
        ],
    )];
    let bracket = from_lambda_bracket(&module, &table).unwrap();
    LiePseudoalgebra::new(module, bracket)
}

/// The current pseudoalgebra of sl2 over the group algebra `k[Z/2]`.
pub fn cur_sl2_z2(field: FieldSpec) -> LiePseudoalgebra {
    let h = HopfAlgebra::group(GroupTable::cyclic(2), field);
    sl2_over(&h, field)
}

/// Abelian rank-1 `L = <t>` acting on the non-abelian kernel
/// `M = aff(1) = <a, b>` with `[a,b] = b`; the action is `ad_a` and
/// `chi = 0`. Building the extension gives `Q t` semidirect `aff(1)`.
pub fn aff1_semidirect_data(field: FieldSpec) -> CocycleFixture {
    let h = HopfAlgebra::trivial(field);
    let l_mod = FreeModule::new("L", vec!["t"], &h).unwrap();
    let m_mod = FreeModule::new("M", vec!["a", "b"], &h).unwrap();
    let l = LiePseudoalgebra::abelian(l_mod.clone());
    let unit = Mono::unit(&h);
    let m_bracket = PolyMap::skew_fill(
        vec![m_mod.clone(), m_mod.clone()],
        m_mod.clone(),
        vec![(
            vec![0, 1],
            TensorElement::term(&m_mod, vec![unit.clone(), unit.clone()], 1, Scalar::one(field)),
        )],
    )
    .unwrap();
    let m = LiePseudoalgebra::new(m_mod.clone(), m_bracket.clone());
    // psi(t, u) = (1 x 1) [a, u]
    let mut psi = PolyMap::zero(vec![l_mod.clone(), m_mod.clone()], m_mod.clone());
    for u in 0..m_mod.rank() {
        psi.set(vec![0, u], m_bracket.value(&[0, u]));
    }
    let chi = PolyMap::zero(vec![l_mod.clone(), l_mod.clone()], m_mod);
    CocycleFixture { l, m, chi, psi }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudoalg::{check_jacobi, check_skew};

    #[test]
    fn fixtures_are_valid() {
        let f = FieldSpec::Rational;
        assert!(check_jacobi(&sl2(f)).passed());
        assert!(check_jacobi(&virasoro(f)).passed());
        assert!(check_jacobi(&cur_sl2_z2(f)).passed());
        let aff = aff1_semidirect_data(f);
        assert!(check_skew(&aff.m.bracket).passed());
        assert!(check_jacobi(&aff.m).passed());
        let heis = heisenberg_data(FieldSpec::Prime(5));
        assert!(heis.chi.check_skew().passed());
    }
}
