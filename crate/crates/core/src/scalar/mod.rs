//! Coefficient arithmetic: exact `Q(q)[√2]`, floating backends, and the traits
//! that let the Fock-space and field machinery run over either.

mod cyclotomic;
pub mod format;
mod int;
mod ipoly;
mod laurent;
pub mod numeric;
mod poly;
mod qnumber;
mod qscalar;
mod rational;
mod ratfunc;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use thiserror::Error;

pub use cyclotomic::{cyclotomic, split_cyclotomic};
pub use int::Int;
pub use ipoly::IntLaurent;
pub use laurent::LaurentPolyQ;
pub use numeric::{evaluate_numeric, Evaluate, Numeric, NumericValue};
pub use poly::{Poly, RatFunc};
pub use qnumber::{q_binomial, q_factorial, q_integer};
pub use qscalar::QScalar;
pub use rational::Rat;
pub use ratfunc::RatFuncQ;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation hits a pole: denominator {denominator} vanishes")]
    Pole { denominator: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot parse scalar: {0}")]
    Parse(String),
}

/// Commutative ring with unit. Reference-taking methods exist so hot loops can
/// avoid cloning heavyweight exact values.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn from_i64(n: i64) -> Self;

    fn add_ref(&self, o: &Self) -> Self {
        self.clone() + o.clone()
    }

    fn sub_ref(&self, o: &Self) -> Self {
        self.clone() - o.clone()
    }

    fn mul_ref(&self, o: &Self) -> Self {
        self.clone() * o.clone()
    }
}

pub trait Field: Ring {
    fn try_inv(&self) -> Result<Self, ScalarError>;

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_i64(n).mul_ref(&Self::from_i64(d).try_inv().expect("nonzero denominator"))
    }

    fn try_div(&self, o: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul_ref(&o.try_inv()?))
    }

    fn powi(&self, n: i32) -> Result<Self, ScalarError> {
        let base = if n < 0 { self.try_inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul_ref(&base);
        }
        Ok(acc)
    }
}

/// A realization of the deformation parameter `q` in some field: either the
/// formal symbol (exact backend) or a number (floating backend).
pub trait Deformation: Clone + Debug + Send + Sync + 'static {
    type Scalar: Field;

    fn q_pow(&self, k: i64) -> Self::Scalar;

    fn sqrt2(&self) -> Self::Scalar;

    /// Image of an exact value; the identity for the symbolic backend.
    fn lift(&self, x: &QScalar) -> Self::Scalar;

    fn rational(&self, n: i64, d: i64) -> Self::Scalar {
        Self::Scalar::from_ratio(n, d)
    }

    /// `[n] = (q^n - q^-n)/(q - q^-1)`.
    fn q_integer(&self, n: i64) -> Self::Scalar {
        let m = n.abs();
        let mut acc = Self::Scalar::zero();
        for k in 0..m {
            acc = acc.add_ref(&self.q_pow(m - 1 - 2 * k));
        }
        if n < 0 {
            -acc
        } else {
            acc
        }
    }

    fn inv_q_integer(&self, n: i64) -> Self::Scalar {
        self.q_integer(n).try_inv().expect("[n] is invertible for n != 0")
    }
}

/// The formal deformation parameter: coefficients live in `Q(q)[√2]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Symbolic;

impl Deformation for Symbolic {
    type Scalar = QScalar;

    fn q_pow(&self, k: i64) -> QScalar {
        QScalar::q_pow(k)
    }

    fn sqrt2(&self) -> QScalar {
        QScalar::sqrt2()
    }

    fn lift(&self, x: &QScalar) -> QScalar {
        x.clone()
    }

    fn q_integer(&self, n: i64) -> QScalar {
        QScalar::from_ratfunc(q_integer(n))
    }

    fn inv_q_integer(&self, n: i64) -> QScalar {
        QScalar::from_ratfunc(RatFuncQ::inv_q_integer(n))
    }
}

macro_rules! float_field {
    ($t:ty) => {
        impl Ring for $t {
            fn from_i64(n: i64) -> Self {
                n as $t
            }
            fn add_ref(&self, o: &Self) -> Self {
                *self + *o
            }
            fn sub_ref(&self, o: &Self) -> Self {
                *self - *o
            }
            fn mul_ref(&self, o: &Self) -> Self {
                *self * *o
            }
        }

        impl Field for $t {
            fn try_inv(&self) -> Result<Self, ScalarError> {
                if *self == 0.0 {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(1.0 / *self)
                }
            }
            fn from_ratio(n: i64, d: i64) -> Self {
                n as $t / d as $t
            }
        }
    };
}

float_field!(f32);
float_field!(f64);

impl Ring for Complex64 {
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn add_ref(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        *self - *o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        *self * *o
    }
}

impl Field for Complex64 {
    fn try_inv(&self) -> Result<Self, ScalarError> {
        if self.norm() == 0.0 {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(self.inv())
        }
    }
}
