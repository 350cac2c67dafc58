//! q-integers, q-factorials and q-binomials.

use super::laurent::LaurentPolyQ;
use super::ratfunc::RatFuncQ;
use super::rational::Rat;
use super::ScalarError;

/// `[n] = q^(n-1) + q^(n-3) + … + q^(1-n)`, with `[-n] = -[n]` and `[0] = 0`.
///
/// Half-integer arguments never occur: callers needing `[2r]` for a
/// half-integer `r` pass the doubled integer `2r`.
pub fn q_integer(n: i64) -> RatFuncQ {
    let m = n.abs();
    let sign = if n < 0 { -1 } else { 1 };
    let p = LaurentPolyQ::from_terms((0..m).map(|k| (m - 1 - 2 * k, Rat::from_i64(sign, 1))));
    RatFuncQ::from_laurent(p)
}

/// `[n]! = [n][n-1]…[1]`, `[0]! = 1`.
pub fn q_factorial(n: i64) -> Result<RatFuncQ, ScalarError> {
    if n < 0 {
        return Err(ScalarError::InvalidArgument(format!("q_factorial of negative integer {n}")));
    }
    Ok((1..=n).fold(RatFuncQ::one(), |acc, k| acc.mul(&q_integer(k))))
}

/// `[n choose r] = [n]! / ([n-r]! [r]!)` for `0 ≤ r ≤ n`.
pub fn q_binomial(n: i64, r: i64) -> Result<RatFuncQ, ScalarError> {
    if r < 0 || r > n {
        return Err(ScalarError::InvalidArgument(format!("q_binomial({n}, {r}) needs 0 <= r <= n")));
    }
    let num = q_factorial(n)?;
    let den = q_factorial(n - r)?.mul(&q_factorial(r)?);
    num.div(&den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(terms: &[(i64, i64)]) -> RatFuncQ {
        RatFuncQ::from_laurent(LaurentPolyQ::from_terms(terms.iter().map(|&(e, c)| (e, Rat::from_i64(c, 1)))))
    }

    #[test]
    fn small_q_integers() {
        assert!(q_integer(0).is_zero());
        assert_eq!(q_integer(2), lp(&[(1, 1), (-1, 1)]));
        assert_eq!(q_integer(3), lp(&[(2, 1), (0, 1), (-2, 1)]));
        assert_eq!(q_integer(-3), q_integer(3).neg());
    }

    #[test]
    fn factorials() {
        assert!(q_factorial(0).unwrap().is_one());
        assert_eq!(q_factorial(2).unwrap(), q_integer(2));
        // (q+q^-1)(q^2+1+q^-2) expanded by hand: q^3 + 2q + 2q^-1 + q^-3
        assert_eq!(q_factorial(3).unwrap(), lp(&[(3, 1), (1, 2), (-1, 2), (-3, 1)]));
        assert!(q_factorial(-1).is_err());
    }

    #[test]
    fn binomials() {
        assert!(q_binomial(3, 0).unwrap().is_one());
        assert_eq!(q_binomial(2, 1).unwrap(), q_integer(2));
        let b = q_binomial(4, 2).unwrap();
        // [4][3]/([2][1]) = q^4 + q^2 + 2 + q^-2 + q^-4
        assert_eq!(b, lp(&[(4, 1), (2, 1), (0, 2), (-2, 1), (-4, 1)]));
        assert!(b.is_laurent());
        assert_eq!(b.invert_q(), b);
        assert!(q_binomial(2, 3).is_err());
        assert!(q_binomial(2, -1).is_err());
    }

    #[test]
    fn binomial_numeric_cross_check() {
        let q = 0.5f64;
        let f = |n: i64| (q.powi(n as i32) - q.powi(-(n as i32))) / (q - 1.0 / q);
        let expect = f(4) * f(3) / (f(2) * f(1));
        let got = q_binomial(4, 2).unwrap().eval_f64(q).unwrap();
        assert!((got - expect).abs() < 1e-12 * expect.abs());
        let fact3 = q_factorial(3).unwrap().eval_f64(q).unwrap();
        assert!((fact3 - f(3) * f(2)).abs() < 1e-12 * fact3.abs());
    }

    proptest! {
        #[test]
        fn q_integer_symmetries(n in -20i64..20) {
            prop_assert_eq!(q_integer(-n), q_integer(n).neg());
            prop_assert_eq!(q_integer(n).invert_q(), q_integer(n));
        }

        #[test]
        fn binomial_symmetry(n in 0i64..9, r in 0i64..9) {
            prop_assume!(r <= n);
            prop_assert_eq!(q_binomial(n, r).unwrap(), q_binomial(n, n - r).unwrap());
        }
    }
}
