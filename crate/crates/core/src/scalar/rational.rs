use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::int::Int;

/// Reduced fraction with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rat {
    num: Int,
    den: Int,
}

impl Rat {
    pub fn new(num: Int, den: Int) -> Rat {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Rat::zero();
        }
        let mut g = num.gcd(&den);
        if den.is_negative() {
            g = -g;
        }
        if g.is_one() {
            Rat { num, den }
        } else {
            Rat { num: num.div_exact(&g), den: den.div_exact(&g) }
        }
    }

    pub fn from_int(n: Int) -> Rat {
        Rat { num: n, den: Int::from(1) }
    }

    pub fn from_i64(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    pub fn zero() -> Rat {
        Rat { num: Int::from(0), den: Int::from(1) }
    }

    pub fn one() -> Rat {
        Rat { num: Int::from(1), den: Int::from(1) }
    }

    pub fn num(&self) -> &Int {
        &self.num
    }

    pub fn den(&self) -> &Int {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn mul(&self, o: &Rat) -> Rat {
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n = &self.num.div_exact(&g1) * &o.num.div_exact(&g2);
        let d = &self.den.div_exact(&g2) * &o.den.div_exact(&g1);
        Rat { num: n, den: d }
    }

    pub fn mul_int(&self, k: &Int) -> Rat {
        self.mul(&Rat::from_int(k.clone()))
    }

    pub fn add(&self, o: &Rat) -> Rat {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        Rat::new(n, &self.den * &o.den)
    }

    pub fn neg(&self) -> Rat {
        Rat { num: -&self.num, den: self.den.clone() }
    }

    pub fn inv(&self) -> Rat {
        Rat::new(self.den.clone(), self.num.clone())
    }

    pub fn to_f64(&self) -> f64 {
        self.num.to_f64() / self.den.to_f64()
    }

    pub fn to_big(&self) -> BigRational {
        BigRational::new(self.num.to_big(), self.den.to_big())
    }

    pub fn from_big(r: &BigRational) -> Rat {
        Rat::new(Int::from(r.numer().clone()), Int::from(r.denom().clone()))
    }

    pub fn from_bigint(n: BigInt) -> Rat {
        Rat::from_int(Int::from(n))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
