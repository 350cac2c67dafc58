use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::laurent::LaurentPolyQ;
use super::ratfunc::RatFuncQ;
use super::rational::Rat;
use super::{Field, Ring, ScalarError};

/// Exact element of `Q(q)[√2]`: `rational + sqrt2 · √2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QScalar {
    rational: RatFuncQ,
    sqrt2: RatFuncQ,
}

impl QScalar {
    pub fn new(rational: RatFuncQ, sqrt2: RatFuncQ) -> Self {
        QScalar { rational, sqrt2 }
    }

    pub fn from_ratfunc(r: RatFuncQ) -> Self {
        QScalar { rational: r, sqrt2: RatFuncQ::zero() }
    }

    pub fn from_laurent(p: LaurentPolyQ) -> Self {
        Self::from_ratfunc(RatFuncQ::from_laurent(p))
    }

    pub fn from_rat(r: Rat) -> Self {
        Self::from_ratfunc(RatFuncQ::from_rat(r))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rat(Rat::from_i64(n, d))
    }

    pub fn q_pow(k: i64) -> Self {
        Self::from_ratfunc(RatFuncQ::q_pow(k))
    }

    pub fn sqrt2() -> Self {
        QScalar { rational: RatFuncQ::zero(), sqrt2: RatFuncQ::one() }
    }

    pub fn rational_part(&self) -> &RatFuncQ {
        &self.rational
    }

    pub fn sqrt2_part(&self) -> &RatFuncQ {
        &self.sqrt2
    }

    /// The value as an element of `Q(q)` when the `√2` part vanishes.
    pub fn as_ratfunc(&self) -> Option<&RatFuncQ> {
        self.sqrt2.is_zero().then_some(&self.rational)
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.sqrt2.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.sqrt2.is_zero() && self.rational.is_one()
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        QScalar { rational: self.rational.add(&o.rational), sqrt2: self.sqrt2.add(&o.sqrt2) }
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        QScalar { rational: self.rational.sub(&o.rational), sqrt2: self.sqrt2.sub(&o.sqrt2) }
    }

    pub fn neg_ref(&self) -> Self {
        QScalar { rational: self.rational.neg(), sqrt2: self.sqrt2.neg() }
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        let two = Rat::from_i64(2, 1);
        match (self.sqrt2.is_zero(), o.sqrt2.is_zero()) {
            (true, true) => Self::from_ratfunc(self.rational.mul(&o.rational)),
            (true, false) => QScalar {
                rational: self.rational.mul(&o.rational),
                sqrt2: self.rational.mul(&o.sqrt2),
            },
            (false, true) => QScalar {
                rational: self.rational.mul(&o.rational),
                sqrt2: self.sqrt2.mul(&o.rational),
            },
            (false, false) => QScalar {
                rational: self
                    .rational
                    .mul(&o.rational)
                    .add(&self.sqrt2.mul(&o.sqrt2).scale_by(&two)),
                sqrt2: self.rational.mul(&o.sqrt2).add(&self.sqrt2.mul(&o.rational)),
            },
        }
    }

    pub fn scale_by(&self, r: &Rat) -> Self {
        QScalar { rational: self.rational.scale_by(r), sqrt2: self.sqrt2.scale_by(r) }
    }

    /// `(a + b√2)^-1 = (a − b√2)/(a² − 2b²)`.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.sqrt2.is_zero() {
            return Ok(Self::from_ratfunc(self.rational.inv()?));
        }
        let norm = self
            .rational
            .mul(&self.rational)
            .sub(&self.sqrt2.mul(&self.sqrt2).scale_by(&Rat::from_i64(2, 1)));
        let ninv = norm.inv()?;
        Ok(QScalar { rational: self.rational.mul(&ninv), sqrt2: self.sqrt2.neg().mul(&ninv) })
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul_ref(&o.inv()?))
    }

    pub fn pow(&self, n: i32) -> Result<Self, ScalarError> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul_ref(&base);
        }
        Ok(acc)
    }

    pub fn eval_complex(&self, q: Complex64) -> Result<Complex64, ScalarError> {
        let a = self.rational.eval_complex(q)?;
        if self.sqrt2.is_zero() {
            return Ok(a);
        }
        Ok(a + self.sqrt2.eval_complex(q)? * std::f64::consts::SQRT_2)
    }

    pub fn eval_f64(&self, q: f64) -> Result<f64, ScalarError> {
        let a = self.rational.eval_f64(q)?;
        if self.sqrt2.is_zero() {
            return Ok(a);
        }
        Ok(a + self.sqrt2.eval_f64(q)? * std::f64::consts::SQRT_2)
    }

    pub fn invert_q(&self) -> Self {
        QScalar { rational: self.rational.invert_q(), sqrt2: self.sqrt2.invert_q() }
    }
}

impl From<RatFuncQ> for QScalar {
    fn from(r: RatFuncQ) -> Self {
        QScalar::from_ratfunc(r)
    }
}

impl Zero for QScalar {
    fn zero() -> Self {
        QScalar { rational: RatFuncQ::zero(), sqrt2: RatFuncQ::zero() }
    }
    fn is_zero(&self) -> bool {
        QScalar::is_zero(self)
    }
}

impl One for QScalar {
    fn one() -> Self {
        Self::from_ratfunc(RatFuncQ::one())
    }
}

impl Add for QScalar {
    type Output = QScalar;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl Sub for QScalar {
    type Output = QScalar;
    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl Mul for QScalar {
    type Output = QScalar;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl Div for QScalar {
    type Output = QScalar;
    /// Panics on division by zero; use [`QScalar::checked_div`] to handle it.
    fn div(self, rhs: Self) -> Self {
        self.checked_div(&rhs).expect("division by zero in Q(q)[√2]")
    }
}

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

impl Ring for QScalar {
    fn from_i64(n: i64) -> Self {
        QScalar::from_ratio(n, 1)
    }
    fn add_ref(&self, o: &Self) -> Self {
        QScalar::add_ref(self, o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        QScalar::sub_ref(self, o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        QScalar::mul_ref(self, o)
    }
}

impl Field for QScalar {
    fn try_inv(&self) -> Result<Self, ScalarError> {
        self.inv()
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        QScalar::from_ratio(n, d)
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::format::qscalar_to_string(self))
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::format::qscalar_to_string(self))
    }
}

impl FromStr for QScalar {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::format::parse_qscalar(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qnumber::q_integer;

    #[test]
    fn sqrt2_squares_to_two() {
        let r = QScalar::sqrt2().mul_ref(&QScalar::sqrt2());
        assert_eq!(r, QScalar::from_ratio(2, 1));
    }

    #[test]
    fn q_difference_inverse() {
        let d = QScalar::q_pow(1).sub_ref(&QScalar::q_pow(-1));
        assert!(d.inv().unwrap().mul_ref(&d).is_one());
    }

    #[test]
    fn quadratic_extension_division() {
        let a = QScalar::one().add_ref(&QScalar::sqrt2());
        assert!(a.checked_div(&a).unwrap().is_one());
        let b = QScalar::from_ratfunc(q_integer(2)).add_ref(&QScalar::sqrt2().mul_ref(&QScalar::q_pow(3)));
        assert!(a.mul_ref(&b).checked_div(&b).unwrap().sub_ref(&a).is_zero());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(QScalar::one().checked_div(&QScalar::zero()), Err(ScalarError::DivisionByZero)));
    }
}
