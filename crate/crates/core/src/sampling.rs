//! Seeded random generators for property tests and the sampling-based
//! CLI commands. Everything is deterministic given the seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::hopf::{HopfElement, HopfKind, HopfRef, Mono};
use crate::module::{ModuleMap, ModuleRef};
use crate::polymap::{increasing_tuples, nondecreasing_tuples, PolyMap};
use crate::scalar::{FieldSpec, Scalar};
use crate::tensor::TensorElement;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_scalar(r: &mut ChaCha8Rng, field: FieldSpec) -> Scalar {
    match field {
        FieldSpec::Rational => Scalar::from_int(field, r.gen_range(-4..=4)),
        FieldSpec::Prime(p) => Scalar::from_int(field, r.gen_range(0..p) as i64),
    }
}

pub fn random_nonzero_scalar(r: &mut ChaCha8Rng, field: FieldSpec) -> Scalar {
    loop {
        let s = random_scalar(r, field);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A random basis monomial; polynomial kinds are bounded by total degree.
pub fn random_mono(r: &mut ChaCha8Rng, algebra: &HopfRef, max_degree: u32) -> Mono {
    match &algebra.kind {
        HopfKind::Trivial => Mono::Exp(vec![]),
        HopfKind::Group(t) => Mono::Grp(r.gen_range(0..t.order())),
        HopfKind::Polynomial { generators } => {
            let mut e = vec![0u32; generators.len()];
            let deg = r.gen_range(0..=max_degree);
            for _ in 0..deg {
                let i = r.gen_range(0..generators.len());
                e[i] += 1;
            }
            Mono::Exp(e)
        }
    }
}

pub fn random_hopf_element(
    r: &mut ChaCha8Rng,
    algebra: &HopfRef,
    terms: usize,
    max_degree: u32,
) -> HopfElement {
    let mut el = HopfElement::zero(algebra);
    for _ in 0..terms {
        el.add_term(random_mono(r, algebra, max_degree), random_scalar(r, algebra.field));
    }
    el
}

/// A random canonical tensor value with the given leg arity.
pub fn random_tensor(
    r: &mut ChaCha8Rng,
    module: &ModuleRef,
    arity: usize,
    terms: usize,
    max_degree: u32,
) -> TensorElement {
    let mut t = TensorElement::zero(module, arity);
    for _ in 0..terms {
        let legs = (0..arity).map(|_| random_mono(r, &module.algebra, max_degree)).collect();
        let idx = r.gen_range(0..module.rank());
        t.add_term(legs, idx, random_scalar(r, module.algebra.field));
    }
    t
}

/// A random skew polylinear map on `n` copies of `source` into `target`:
/// free random values on strictly increasing tuples, stabilizer-projected
/// values on repeated tuples, transported everywhere by the skew rule.
pub fn random_skew_polymap(
    r: &mut ChaCha8Rng,
    source: &ModuleRef,
    target: &ModuleRef,
    n: usize,
    max_degree: u32,
) -> PolyMap {
    let mut generators = Vec::new();
    for t in increasing_tuples(source.rank(), n) {
        generators.push((t, random_tensor(r, target, n, 2, max_degree)));
    }
    for t in nondecreasing_tuples(source.rank(), n) {
        if t.windows(2).all(|w| w[0] < w[1]) {
            continue; // strictly increasing handled above
        }
        let raw = random_tensor(r, target, n, 2, max_degree);
        let projected = PolyMap::stabilizer_project(&t, &raw);
        generators.push((t, projected));
    }
    let sources = vec![source.clone(); n];
    PolyMap::skew_fill(sources, target.clone(), generators)
        .expect("projected generators are consistent")
}

/// A random non-skew polylinear map (full table).
pub fn random_polymap(
    r: &mut ChaCha8Rng,
    sources: Vec<ModuleRef>,
    target: &ModuleRef,
    max_degree: u32,
) -> PolyMap {
    let ranks: Vec<usize> = sources.iter().map(|m| m.rank()).collect();
    let mut map = PolyMap::zero(sources, target.clone());
    for t in crate::polymap::all_tuples(&ranks) {
        let n = t.len();
        map.set(t, random_tensor(r, target, n, 2, max_degree));
    }
    map
}

/// A random `H`-linear map as a matrix of random entries.
pub fn random_module_map(
    r: &mut ChaCha8Rng,
    source: &ModuleRef,
    target: &ModuleRef,
    max_degree: u32,
) -> ModuleMap {
    let entries = (0..target.rank())
        .map(|_| {
            (0..source.rank())
                .map(|_| random_hopf_element(r, &source.algebra, 1, max_degree))
                .collect()
        })
        .collect();
    ModuleMap::new(source, target, entries).unwrap()
}

/// Random antisymmetric structure constants over the field (not
/// necessarily Lie).
pub fn random_structure_constants(
    r: &mut ChaCha8Rng,
    dim: usize,
    field: FieldSpec,
) -> Vec<Vec<Vec<Scalar>>> {
    let mut c = vec![vec![vec![Scalar::zero(field); dim]; dim]; dim];
    for i in 0..dim {
        for j in i + 1..dim {
            for k in 0..dim {
                let s = random_scalar(r, field);
                c[i][j][k] = s.clone();
                c[j][i][k] = s.neg();
            }
        }
    }
    c
}
