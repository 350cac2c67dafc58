//! Cyclotomic polynomials, the building blocks of every q-number denominator.
//!
//! `Φ_1` is stored as `1 - q` so that every table entry has constant term `+1`.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use super::int::Int;
use super::ipoly::IntLaurent;

fn table() -> &'static RwLock<Vec<Option<Arc<IntLaurent>>>> {
    static TABLE: OnceLock<RwLock<Vec<Option<Arc<IntLaurent>>>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(Vec::new()))
}

/// The `d`-th cyclotomic polynomial (sign-normalized), memoized.
pub fn cyclotomic(d: u32) -> Arc<IntLaurent> {
    assert!(d >= 1);
    if let Some(Some(p)) = table().read().unwrap().get(d as usize) {
        return p.clone();
    }
    // q^d - 1 divided by all proper divisors' factors.
    let mut num = IntLaurent::monomial(Int::from(1), d as i64).sub(&IntLaurent::one());
    for e in divisors(d) {
        if e == d {
            continue;
        }
        num = num.div_exact_unit(&cyclotomic(e)).expect("cyclotomic recursion is exact");
    }
    if num.lowest_coeff().is_some_and(|c| c.is_negative()) {
        num = num.neg();
    }
    let p = Arc::new(num);
    let mut w = table().write().unwrap();
    if w.len() <= d as usize {
        w.resize(d as usize + 1, None);
    }
    w[d as usize] = Some(p.clone());
    p
}

pub fn divisors(n: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (1..=n).take_while(|k| k * k <= n).filter(|k| n % k == 0).collect();
    let mut big: Vec<u32> = out.iter().rev().map(|k| n / k).filter(|&b| b * b != n).collect();
    out.append(&mut big);
    out
}

pub fn euler_phi(mut n: u32) -> u32 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Cyclotomic factorization of `[n]·q^(n-1) = (q^(2n)-1)/(q^2-1)` for `n > 0`.
pub fn q_integer_factors(n: u32) -> Vec<(u32, u32)> {
    divisors(2 * n).into_iter().filter(|&d| d >= 3).map(|d| (d, 1)).collect()
}

/// Splits the polynomial part of `p` (lowest exponent stripped) into cyclotomic
/// factors and a cyclotomic-free remainder: `p = q^low · Π Φ_d^e · rest`.
pub fn split_cyclotomic(p: &IntLaurent) -> (Vec<(u32, u32)>, IntLaurent) {
    let mut rest = p.without_low();
    let mut factors = Vec::new();
    let deg = (rest.span() as u32).saturating_sub(1);
    if deg == 0 {
        return (factors, rest);
    }
    let scale: f64 = rest.coeffs().iter().map(|c| c.to_f64().abs()).sum::<f64>().max(1.0);
    let bound = 2 * deg * deg + 2;
    let mut d = 1u32;
    while d <= bound {
        let cur = (rest.span() as u32).saturating_sub(1);
        if cur == 0 {
            break;
        }
        if euler_phi(d) <= cur {
            let zeta = Complex64::from_polar(1.0, 2.0 * PI / d as f64);
            if rest.eval_complex(zeta).norm() <= 1e-7 * scale {
                let phi = cyclotomic(d);
                let mut e = 0;
                while let Some(qt) = rest.div_exact_unit(&phi) {
                    rest = qt;
                    e += 1;
                }
                if e > 0 {
                    factors.push((d, e));
                }
            }
        }
        d += 1;
    }
    (factors, rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(*cyclotomic(1), IntLaurent::from_i64s(0, &[1, -1]));
        assert_eq!(*cyclotomic(2), IntLaurent::from_i64s(0, &[1, 1]));
        assert_eq!(*cyclotomic(4), IntLaurent::from_i64s(0, &[1, 0, 1]));
        assert_eq!(*cyclotomic(6), IntLaurent::from_i64s(0, &[1, -1, 1]));
        assert_eq!(*cyclotomic(12), IntLaurent::from_i64s(0, &[1, 0, -1, 0, 1]));
    }

    #[test]
    fn phi_and_divisors() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(7), 6);
    }

    #[test]
    fn splits_products() {
        let a = cyclotomic(3).mul(&cyclotomic(3)).mul(&cyclotomic(10));
        let rest = IntLaurent::from_i64s(0, &[2, 0, 1]);
        let (f, r) = split_cyclotomic(&a.mul(&rest).shift(3));
        assert_eq!(f, vec![(3, 2), (10, 1)]);
        assert_eq!(r, rest);
    }
}
