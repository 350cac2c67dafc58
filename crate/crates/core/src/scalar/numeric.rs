//! Floating-point backends for `q`.

use num_complex::Complex64;

use super::poly::RatFunc;
use super::qscalar::QScalar;
use super::{Deformation, Field, ScalarError};

/// A floating scalar type usable as the coefficient field of a numeric run.
pub trait NumericValue: Field + Copy {
    fn sqrt2() -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_complex(self) -> Complex64;
    /// Real types keep the real part.
    fn from_complex(c: Complex64) -> Self;
    fn magnitude(self) -> f64 {
        self.to_complex().norm()
    }
}

impl NumericValue for f32 {
    fn sqrt2() -> Self {
        std::f32::consts::SQRT_2
    }
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self as f64, 0.0)
    }
    fn from_complex(c: Complex64) -> Self {
        c.re as f32
    }
}

impl NumericValue for f64 {
    fn sqrt2() -> Self {
        std::f64::consts::SQRT_2
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn from_complex(c: Complex64) -> Self {
        c.re
    }
}

impl NumericValue for Complex64 {
    fn sqrt2() -> Self {
        Complex64::new(std::f64::consts::SQRT_2, 0.0)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn to_complex(self) -> Complex64 {
        self
    }
    fn from_complex(c: Complex64) -> Self {
        c
    }
}

/// `q` specialized to a nonzero number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Numeric<T> {
    q: T,
}

impl<T: NumericValue> Numeric<T> {
    pub fn new(q: T) -> Result<Self, ScalarError> {
        if q.is_zero() {
            return Err(ScalarError::InvalidArgument("q must be nonzero".into()));
        }
        Ok(Numeric { q })
    }

    pub fn q(&self) -> T {
        self.q
    }
}

impl<T: NumericValue> Deformation for Numeric<T> {
    type Scalar = T;

    fn q_pow(&self, k: i64) -> T {
        self.q.powi(k as i32).expect("q is nonzero")
    }

    fn sqrt2(&self) -> T {
        T::sqrt2()
    }

    fn lift(&self, x: &QScalar) -> T {
        T::from_complex(x.eval_complex(self.q.to_complex()).expect("exact value regular at q"))
    }
}

/// Exact values that can be evaluated at a numeric `q` (and `z`).
pub trait Evaluate {
    fn evaluate(&self, q0: Complex64, z0: Option<Complex64>) -> Result<Complex64, ScalarError>;
}

impl Evaluate for QScalar {
    fn evaluate(&self, q0: Complex64, _z0: Option<Complex64>) -> Result<Complex64, ScalarError> {
        self.eval_complex(q0)
    }
}

impl Evaluate for RatFunc<QScalar> {
    fn evaluate(&self, q0: Complex64, z0: Option<Complex64>) -> Result<Complex64, ScalarError> {
        let z = z0.ok_or_else(|| ScalarError::InvalidArgument("spectral value z0 required".into()))?;
        let num = self.numerator().map(|c| c.eval_complex(q0).expect("q-pole in coefficient"));
        let den = self.denominator().map(|c| c.eval_complex(q0).expect("q-pole in coefficient"));
        let d = den.eval(&z)?;
        if d.norm() == 0.0 {
            return Err(ScalarError::Pole { denominator: self.denominator().to_string_in("z") });
        }
        Ok(num.eval(&z)? / d)
    }
}

/// Floating evaluation with `√2` replaced by its positive root.
pub fn evaluate_numeric<X: Evaluate>(x: &X, q0: Complex64, z0: Option<Complex64>) -> Result<Complex64, ScalarError> {
    if q0.norm() == 0.0 {
        return Err(ScalarError::InvalidArgument("q0 must be nonzero".into()));
    }
    x.evaluate(q0, z0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_binomial, q_integer, Poly, Symbolic};
    use num_traits::One;
    use proptest::prelude::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn spec_examples() {
        let v = evaluate_numeric(&QScalar::from_ratfunc(q_integer(2)), c(2.0), None).unwrap();
        assert!((v - c(2.5)).norm() < 1e-15);
        let v = evaluate_numeric(&QScalar::from_ratfunc(q_integer(0)), c(0.7), None).unwrap();
        assert_eq!(v, c(0.0));
        let v = evaluate_numeric(&QScalar::from_ratfunc(q_binomial(4, 2).unwrap()), c(1.0), None).unwrap();
        assert!((v - c(6.0)).norm() < 1e-12);
    }

    #[test]
    fn pole_is_reported() {
        let x = QScalar::q_pow(1).sub_ref(&QScalar::q_pow(-1)).inv().unwrap();
        assert!(matches!(evaluate_numeric(&x, c(1.0), None), Err(ScalarError::Pole { .. })));
        let r = RatFunc::new(Poly::constant(QScalar::one()), Poly::from_coeffs(0, vec![QScalar::from_ratio(-1, 1), QScalar::one()])).unwrap();
        assert!(matches!(evaluate_numeric(&r, c(0.5), Some(c(1.0))), Err(ScalarError::Pole { .. })));
        assert!(evaluate_numeric(&r, c(0.5), None).is_err());
    }

    #[test]
    fn numeric_deformation_matches_symbolic() {
        let num = Numeric::new(0.37f64).unwrap();
        for n in -5..=5 {
            let exact = Symbolic.inv_q_integer(if n == 0 { 1 } else { n }).eval_f64(0.37).unwrap();
            let float = num.inv_q_integer(if n == 0 { 1 } else { n });
            assert!((exact - float).abs() < 1e-12 * exact.abs());
        }
        assert!(Numeric::new(0.0f64).is_err());
        let single = Numeric::new(0.5f32).unwrap();
        assert!((single.q_integer(2) - 2.5).abs() < 1e-6);
    }

    #[derive(Clone, Debug)]
    enum Expr {
        Q(i64),
        Const(i64, i64),
        Sqrt2,
        QInt(i64),
        Add(Box<Expr>, Box<Expr>),
        Sub(Box<Expr>, Box<Expr>),
        Mul(Box<Expr>, Box<Expr>),
        Div(Box<Expr>, Box<Expr>),
    }

    fn expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (-4i64..5).prop_map(Expr::Q),
            (-5i64..6, 1i64..5).prop_map(|(n, d)| Expr::Const(n, d)),
            Just(Expr::Sqrt2),
            (1i64..5).prop_map(Expr::QInt),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            ]
        })
    }

    fn exact(e: &Expr) -> Option<QScalar> {
        Some(match e {
            Expr::Q(k) => QScalar::q_pow(*k),
            Expr::Const(n, d) => QScalar::from_ratio(*n, *d),
            Expr::Sqrt2 => QScalar::sqrt2(),
            Expr::QInt(n) => QScalar::from_ratfunc(q_integer(*n)),
            Expr::Add(a, b) => exact(a)?.add_ref(&exact(b)?),
            Expr::Sub(a, b) => exact(a)?.sub_ref(&exact(b)?),
            Expr::Mul(a, b) => exact(a)?.mul_ref(&exact(b)?),
            Expr::Div(a, b) => exact(a)?.checked_div(&exact(b)?).ok()?,
        })
    }

    fn float(e: &Expr, q: f64) -> f64 {
        match e {
            Expr::Q(k) => q.powi(*k as i32),
            Expr::Const(n, d) => *n as f64 / *d as f64,
            Expr::Sqrt2 => std::f64::consts::SQRT_2,
            Expr::QInt(n) => (q.powi(*n as i32) - q.powi(-*n as i32)) / (q - 1.0 / q),
            Expr::Add(a, b) => float(a, q) + float(b, q),
            Expr::Sub(a, b) => float(a, q) - float(b, q),
            Expr::Mul(a, b) => float(a, q) * float(b, q),
            Expr::Div(a, b) => float(a, q) / float(b, q),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn exact_and_float_agree(e in expr()) {
            let q0 = 0.37;
            let Some(x) = exact(&e) else { return Ok(()) };
            let expected = float(&e, q0);
            prop_assume!(expected.is_finite());
            let got = evaluate_numeric(&x, c(q0), None).unwrap();
            let scale = expected.abs().max(1.0);
            prop_assert!((got.re - expected).abs() <= 1e-10 * scale, "{} vs {}", got.re, expected);
            prop_assert!(got.im.abs() <= 1e-10 * scale);
        }
    }
}
