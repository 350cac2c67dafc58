//! Canonical string form of exact scalars.
//!
//! Grammar of the printed form (whitespace as shown is significant only for
//! byte-identical reports; the parser ignores it):
//!
//! ```text
//! qscalar  := "0" | ratfunc | ratfunc " + sqrt2*(" ratfunc ")" | "sqrt2*(" ratfunc ")"
//! ratfunc  := poly | "(" poly ")/(" poly ")"
//! poly     := ["-"] term { (" + " | " - ") term }      terms by decreasing exponent
//! term     := coeff | [coeff "*"] "q" ["^" int]
//! coeff    := uint | uint "/" uint
//! ```
//!
//! The denominator of a `ratfunc` is the expanded canonical denominator: an
//! integer polynomial with lowest exponent 0 and positive constant term. The
//! parser accepts any arithmetic expression over `q`, `sqrt2`, integers,
//! `+ - * / ^` and parentheses, so every printed value parses back to itself.

use super::int::Int;
use super::ipoly::IntLaurent;
use super::laurent::LaurentPolyQ;
use super::qscalar::QScalar;
use super::ratfunc::RatFuncQ;
use super::rational::Rat;
use super::ScalarError;

fn write_terms<'a>(terms: impl Iterator<Item = (i64, String, bool)> + 'a, var: &str) -> String {
    // (exponent, |coefficient| text, negative)
    let mut out = String::new();
    for (i, (e, mag, neg)) in terms.enumerate() {
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let unit = mag == "1";
        match e {
            0 => out.push_str(&mag),
            _ => {
                if !unit {
                    out.push_str(&mag);
                    out.push('*');
                }
                out.push_str(var);
                if e != 1 {
                    out.push('^');
                    out.push_str(&e.to_string());
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn int_poly_to_string(p: &IntLaurent) -> String {
    let mut terms: Vec<(i64, &Int)> = p.terms().collect();
    terms.reverse();
    write_terms(terms.into_iter().map(|(e, c)| (e, c.abs().to_string(), c.is_negative())), "q")
}

pub fn laurent_to_string(p: &LaurentPolyQ) -> String {
    let mut terms = p.coefficients();
    terms.reverse();
    write_terms(
        terms.into_iter().map(|(e, c)| {
            let neg = c.num().is_negative();
            let mag = if neg { c.neg() } else { c };
            (e, mag.to_string(), neg)
        }),
        "q",
    )
}

pub fn ratfunc_to_string(r: &RatFuncQ) -> String {
    if r.is_laurent() {
        return laurent_to_string(r.numerator());
    }
    format!("({})/({})", laurent_to_string(r.numerator()), int_poly_to_string(&r.denominator()))
}

pub fn qscalar_to_string(x: &QScalar) -> String {
    let a = x.rational_part();
    let b = x.sqrt2_part();
    match (a.is_zero(), b.is_zero()) {
        (true, true) => "0".to_string(),
        (false, true) => ratfunc_to_string(a),
        (true, false) => format!("sqrt2*({})", ratfunc_to_string(b)),
        (false, false) => format!("{} + sqrt2*({})", ratfunc_to_string(a), ratfunc_to_string(b)),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Int),
    Q,
    Sqrt2,
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, ScalarError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let v: num_bigint::BigInt = text.parse().map_err(|_| ScalarError::Parse(text.clone()))?;
            out.push(Tok::Num(Int::from(v)));
        } else if s[i..].starts_with("sqrt2") {
            out.push(Tok::Sqrt2);
            i += 5;
        } else if c == 'q' {
            out.push(Tok::Q);
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(ScalarError::Parse(format!("unexpected character '{c}' in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<QScalar, ScalarError> {
        let mut acc = if self.eat('-') { self.term()?.neg_ref() } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = acc.add_ref(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub_ref(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QScalar, ScalarError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul_ref(&self.power()?);
            } else if self.eat('/') {
                acc = acc.checked_div(&self.power()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<QScalar, ScalarError> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e = n.to_f64() as i32;
                    return base.pow(if neg { -e } else { e });
                }
                other => return Err(ScalarError::Parse(format!("expected exponent, found {other:?}"))),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<QScalar, ScalarError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(QScalar::from_rat(Rat::from_int(n)))
            }
            Some(Tok::Q) => {
                self.pos += 1;
                Ok(QScalar::q_pow(1))
            }
            Some(Tok::Sqrt2) => {
                self.pos += 1;
                Ok(QScalar::sqrt2())
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(ScalarError::Parse("missing ')'".into()));
                }
                Ok(v)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.atom()?.neg_ref())
            }
            other => Err(ScalarError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse_qscalar(s: &str) -> Result<QScalar, ScalarError> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ScalarError::Parse(format!("trailing input in {s:?}")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_integer;

    #[test]
    fn prints_canonical_forms() {
        assert_eq!(qscalar_to_string(&QScalar::from_ratfunc(q_integer(2))), "q + q^-1");
        let half_inv = QScalar::from_ratfunc(RatFuncQ::inv_q_integer(2)).scale_by(&Rat::from_i64(-1, 2));
        assert_eq!(qscalar_to_string(&half_inv), "(-1/2*q)/(q^2 + 1)");
        let s = QScalar::sqrt2().mul_ref(&QScalar::q_pow(-3));
        assert_eq!(qscalar_to_string(&s), "sqrt2*(q^-3)");
        assert_eq!(qscalar_to_string(&QScalar::from_ratio(0, 1)), "0");
    }

    #[test]
    fn parses_spec_style_expressions() {
        let v = parse_qscalar("(2*q^3 - 1)/(q - q^-1) + sqrt2*(q^2)").unwrap();
        let back = parse_qscalar(&qscalar_to_string(&v)).unwrap();
        assert_eq!(v, back);
        assert!(parse_qscalar("q +").is_err());
        assert!(parse_qscalar("x").is_err());
    }
}
