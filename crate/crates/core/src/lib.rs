//! Exact arithmetic in hyperalgebras of split reductive groups of
//! semisimple rank one, the Frobenius splitting `φ`, and the module
//! operations built on it.

pub mod arith;
pub mod compat;
pub mod error;
pub mod hyperalgebra;
pub mod lattice;
pub mod matrix;
pub mod modules;
pub mod periodic;
pub mod report;
pub mod ring;
pub mod root_datum;
pub mod sampled;
pub mod torus;
pub mod verify;

pub use error::{AlgebraError, ArithError, DatumError, FormatError, ModuleError};
pub use report::VerificationReport;
pub use ring::{CoefficientRing, Integers, PrimeField, RingTag};
pub use root_datum::{corpus, LatticeMorphism, RootDatum};
pub use torus::{MultiIndex, TorusElement};
pub use hyperalgebra::{AlgebraContext, PbwElement};
pub use verify::{verify_borel, verify_theorem, TheoremMode};
pub use compat::{verify_compat, TorusProjection};
pub use matrix::Matrix;
pub use modules::{weyl_module, Character, WeightModule};
