//! Exact free-field realization of level-two `U_q(sl2-hat)`.

pub mod chevalley;
pub mod evalrep;
pub mod fields;
pub mod fock;
pub mod linalg;
pub mod rmatrix;
pub mod scalar;
pub mod verify;
pub mod ybe;

pub use scalar::{QScalar, RatFuncQ};

/// Rational functions of the spectral variable over `Q(q)[√2]`.
pub type ZRatFunc = scalar::RatFunc<QScalar>;
