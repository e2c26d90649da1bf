//! Dihedral weight-one modular forms from class group characters of `Q(√−q)`.
//!
//! The crate builds theta series `θ_ψ = Σ ψ(𝔫) e(N(𝔫) z)` exactly, checks
//! their Hecke structure, models the trace algebra of finite-image Hecke
//! eigenvalues, and computes the associated prime statistics.

pub mod arith;
pub mod character;
pub mod classgroup;
pub mod cyclotomic;
pub mod error;
pub mod heckealg;
pub mod stats;
pub mod theta;

pub use arith::{factorize, kronecker, primes_up_to, Factorization, PrimeTable};
pub use character::{all_characters, conjugate_pairs, ClassCharacter};
pub use classgroup::{compose, enumerate_class_group, reduce, ClassGroup, PrimeIdealClass, QuadraticForm};
pub use cyclotomic::{CyclotomicSum, RootOfUnity};
pub use error::{Error, Result};
pub use heckealg::{HeckeLinearRelation, HeckePowerExpression, UnitEigenPair};
pub use stats::{AtomicMeasure, DensityReport, EmpiricalMeasure};
pub use theta::{DihedralForm, ThetaSeries};
