//! Exact symbolic machinery for Lie pseudoalgebras over cocommutative
//! Hopf algebras.
//!
//! The crate provides, over an exact scalar field (`Q` or `F_p`):
//!
//! * the three concrete Hopf kernels (trivial, finite group algebra,
//!   polynomial algebra with primitive generators) — [`hopf`];
//! * canonical forms for elements of `H^{(x)n} (x)_H M` over free modules,
//!   with leg permutations and the splicing rule behind every iterated
//!   bracket — [`tensor`];
//! * pseudobrackets, representations, homomorphisms, axiom checkers and
//!   the lambda-bracket dictionary for `k[d]` — [`pseudoalg`];
//! * the cochain complex with its coboundary, the graded bracket with
//!   Maurer-Cartan and gauge machinery, and exact cohomology dimensions
//!   for finite-dimensional kernels — [`cohomology`];
//! * non-abelian 2-cocycles, extension (de)construction and equivalence
//!   search — [`nonabelian`];
//! * automorphism pairs, the obstruction map, inducibility decisions with
//!   explicit lifts, and the connecting exact sequence — [`wells`];
//! * independent classical implementations used for cross-validation at
//!   the trivial kernel — [`oracle`].

pub mod cohomology;
pub mod fixtures;
pub mod hopf;
pub mod linalg;
pub mod module;
pub mod nonabelian;
pub mod oracle;
pub mod polymap;
pub mod pseudoalg;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod tensor;
pub mod wells;

pub use hopf::{GroupTable, HopfAlgebra, HopfElement, HopfKind, HopfRef, HopfTensor, Mono};
pub use module::{FreeModule, ModuleElement, ModuleMap, ModuleRef};
pub use polymap::PolyMap;
pub use report::{CheckReport, Finding, Verdict};
pub use scalar::{FieldSpec, Scalar};
pub use tensor::{LegPermutation, TensorElement};
