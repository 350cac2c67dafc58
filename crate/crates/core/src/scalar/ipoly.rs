//! Dense Laurent polynomials in `q` with integer coefficients.
//!
//! This is the workhorse under [`LaurentPolyQ`](super::LaurentPolyQ) and
//! [`RatFuncQ`](super::RatFuncQ): numerators are kept primitive so that
//! rational content lives in a single scale factor.

use std::fmt;

use num_complex::Complex64;

use super::int::Int;

/// `Σ coeffs[i] q^(low + i)`. Invariant: empty, or first and last entries nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntLaurent {
    low: i64,
    coeffs: Vec<Int>,
}

impl IntLaurent {
    pub fn zero() -> Self {
        IntLaurent { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Int::from(1), 0)
    }

    pub fn monomial(c: Int, exp: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntLaurent { low: exp, coeffs: vec![c] }
    }

    pub fn from_coeffs(low: i64, coeffs: Vec<Int>) -> Self {
        let mut p = IntLaurent { low, coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(low: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(low, coeffs.iter().map(|&c| Int::from(c)).collect())
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent present (0 for the zero polynomial).
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Highest exponent present.
    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    /// Number of coefficient slots between lowest and highest exponent.
    pub fn span(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: i64) -> Int {
        let i = exp - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            Int::from(0)
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    pub fn lowest_coeff(&self) -> Option<&Int> {
        self.coeffs.first()
    }

    pub fn leading_coeff(&self) -> Option<&Int> {
        self.coeffs.last()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Int)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        IntLaurent { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    /// Drops the monomial factor: returns the polynomial with lowest exponent 0.
    pub fn without_low(&self) -> Self {
        self.shift(-self.low)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, &Int::from(1), &Int::from(1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &Int::from(1), &Int::from(-1))
    }

    /// `a*self + b*other`.
    pub fn add_scaled(&self, other: &Self, a: &Int, b: &Int) -> Self {
        if other.is_zero() {
            return self.scale(a);
        }
        if self.is_zero() {
            return other.scale(b);
        }
        let low = self.low.min(other.low);
        let high = self.high().max(other.high());
        let mut out = vec![Int::from(0); (high - low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(self.low - low) as usize + i].mul_add_assign(a, c);
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[(other.low - low) as usize + i].mul_add_assign(b, c);
        }
        Self::from_coeffs(low, out)
    }

    pub fn neg(&self) -> Self {
        IntLaurent { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, s: &Int) -> Self {
        if s.is_zero() || self.is_zero() {
            return Self::zero();
        }
        if s.is_one() {
            return self.clone();
        }
        IntLaurent { low: self.low, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.coeffs.len() == 1 && other.coeffs[0].is_one() {
            return self.shift(other.low);
        }
        if self.coeffs.len() == 1 && self.coeffs[0].is_one() {
            return other.shift(self.low);
        }
        let mut out = vec![Int::from(0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j].mul_add_assign(a, b);
            }
        }
        Self::from_coeffs(self.low + other.low, out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// gcd of all coefficients, always nonnegative.
    pub fn content(&self) -> Int {
        let mut g = Int::from(0);
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Splits into `(content, primitive part)` with the primitive part's lowest
    /// coefficient positive; the sign is carried by the returned content.
    pub fn primitive(&self) -> (Int, Self) {
        if self.is_zero() {
            return (Int::from(0), Self::zero());
        }
        let mut g = self.content();
        if self.coeffs[0].is_negative() {
            g = -g;
        }
        if g.is_one() {
            return (g, self.clone());
        }
        let coeffs = self.coeffs.iter().map(|c| c.div_exact(&g)).collect();
        (g, IntLaurent { low: self.low, coeffs })
    }

    /// Exact quotient by a polynomial `d` with `d.low() == 0` and unit lowest and
    /// leading coefficients (e.g. a cyclotomic factor). Returns `None` if `d` does
    /// not divide `self` in `Z[q, q^-1]`.
    pub fn div_exact_unit(&self, d: &Self) -> Option<Self> {
        debug_assert_eq!(d.low, 0);
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dn = d.coeffs.len() - 1;
        if dn == 0 {
            let u = &d.coeffs[0];
            return Some(IntLaurent {
                low: self.low,
                coeffs: self.coeffs.iter().map(|c| c.div_exact(u)).collect(),
            });
        }
        let n = self.coeffs.len();
        if n <= dn {
            return None;
        }
        let lead = d.coeffs[dn].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Int::from(0); n - dn];
        for i in (0..n - dn).rev() {
            let c = &rem[i + dn];
            if c.is_zero() {
                continue;
            }
            let qc = c.checked_div_exact(&lead)?;
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    let t = &qc * dc;
                    rem[i + j] = &rem[i + j] - &t;
                }
            }
            quot[i] = qc;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(self.low, quot))
    }

    /// Pseudo-remainder of polynomial parts (lowest exponents stripped).
    fn pseudo_rem(a: &Self, b: &Self) -> Self {
        let mut r = a.without_low().coeffs;
        let b = b.without_low();
        let bn = b.coeffs.len() - 1;
        let lb = b.coeffs[bn].clone();
        while r.len() > bn && !r.is_empty() {
            let lr = r.last().unwrap().clone();
            let shift = r.len() - 1 - bn;
            for c in r.iter_mut() {
                *c = &*c * &lb;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                let t = &lr * bc;
                r[shift + j] = &r[shift + j] - &t;
            }
            r.pop();
            while matches!(r.last(), Some(c) if c.is_zero()) {
                r.pop();
            }
        }
        Self::from_coeffs(0, r)
    }

    /// gcd in `Z[q]` of the polynomial parts, primitive with positive lowest coefficient.
    pub fn poly_gcd(a: &Self, b: &Self) -> Self {
        if a.is_zero() {
            return b.without_low().primitive().1;
        }
        if b.is_zero() {
            return a.without_low().primitive().1;
        }
        let mut x = a.without_low().primitive().1;
        let mut y = b.without_low().primitive().1;
        if x.span() < y.span() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_zero() {
            if y.span() == 1 {
                return Self::one();
            }
            let r = Self::pseudo_rem(&x, &y);
            x = y;
            y = r.without_low().primitive().1;
        }
        x.without_low().primitive().1
    }

    pub fn eval_f64(&self, q: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * q + c.to_f64();
        }
        acc * q.powi(self.low as i32)
    }

    pub fn eval_complex(&self, q: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * q + c.to_f64();
        }
        acc * q.powi(self.low as i32)
    }
}

impl fmt::Debug for IntLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntLaurent(low={}, {:?})", self.low, self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(low: i64, c: &[i64]) -> IntLaurent {
        IntLaurent::from_i64s(low, c)
    }

    #[test]
    fn trims_and_multiplies() {
        let a = p(-1, &[0, 1, 1, 0]);
        assert_eq!(a.low(), 0);
        assert_eq!(a.high(), 1);
        let sq = a.mul(&a);
        assert_eq!(sq, p(0, &[1, 2, 1]));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn exact_division_by_unit_polynomials() {
        // (1+q)(1-q+q^2) = 1+q^3
        let num = p(2, &[1, 0, 0, 1]);
        let d = p(0, &[1, 1]);
        assert_eq!(num.div_exact_unit(&d), Some(p(2, &[1, -1, 1])));
        assert_eq!(p(0, &[1, 0, 1]).div_exact_unit(&d), None);
    }

    #[test]
    fn gcd_of_products() {
        let f = p(0, &[1, 1]);
        let g = p(0, &[1, 0, 1]);
        let h = p(0, &[2, -1, 3]);
        let a = f.mul(&g).mul(&h);
        let b = f.mul(&h).mul(&p(0, &[5, 7]));
        assert_eq!(IntLaurent::poly_gcd(&a, &b), f.mul(&h));
    }
}
