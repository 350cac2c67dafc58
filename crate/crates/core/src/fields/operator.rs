use std::fmt;

use thiserror::Error;

use crate::chevalley::{qint, Gen};
use crate::fock::Half;
use crate::scalar::QScalar;

use super::spec::ExpFieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("unknown field name `{0}`")]
    UnknownField(String),
    #[error("field `{0}` is not homogeneous")]
    NotHomogeneous(String),
    #[error("mode {mode} of `{field}` leaves the computed window at state {state}")]
    OutOfWindow { field: String, mode: String, state: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FermionPart {
    All,
    /// `Σ_{r<0} b_r z^{-r-1/2}`
    Creation,
    /// `Σ_{r>0} b_r z^{-r-1/2}`
    Annihilation,
}

/// Declarative description of a field `O(z)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldOperator {
    Exp(ExpFieldSpec),
    Fermion(FermionPart),
    /// `O(λz)`
    Scaled(Box<FieldOperator>, QScalar),
    /// Applied right to left.
    Product(Vec<FieldOperator>),
    /// `[O(z), M]_x = O(z)M - x M O(z)`
    ModeCommutator { field: Box<FieldOperator>, op: FiniteOp, x: QScalar },
    Scalar(QScalar, Box<FieldOperator>),
}

/// Operators with a fixed degree shift.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FiniteOp {
    /// `O_m`, mapping degree `Δ` to `Δ - m`.
    Mode { field: Box<FieldOperator>, m: Half },
    /// `q^{2kP} = K^k`
    KPower(i64),
    Scalar(QScalar, Box<FiniteOp>),
    /// Applied right to left.
    Product(Vec<FiniteOp>),
}

fn one() -> QScalar {
    QScalar::from_ratio(1, 1)
}

impl FieldOperator {
    /// Doubled weight offset `w`: the coefficient of `z^k` raises the degree
    /// by `k + w`.
    pub fn weight2(&self) -> i64 {
        match self {
            FieldOperator::Exp(s) => s.weight2().expect("homogeneous exponential field"),
            FieldOperator::Fermion(_) => 1,
            FieldOperator::Scaled(f, _) | FieldOperator::Scalar(_, f) => f.weight2(),
            FieldOperator::Product(fs) => fs.iter().map(|f| f.weight2()).sum(),
            FieldOperator::ModeCommutator { field, op, .. } => field.weight2() + op.shift2(),
        }
    }

    pub fn weight(&self) -> Half {
        Half::from_doubled(self.weight2())
    }

    pub fn scaled(self, lambda: QScalar) -> FieldOperator {
        FieldOperator::Scaled(Box::new(self), lambda)
    }

    pub fn times(self, c: QScalar) -> FieldOperator {
        FieldOperator::Scalar(c, Box::new(self))
    }

    pub fn commutator(self, op: FiniteOp, x: QScalar) -> FieldOperator {
        FieldOperator::ModeCommutator { field: Box::new(self), op, x }
    }

    pub fn mode(&self, m: Half) -> FiniteOp {
        FiniteOp::Mode { field: Box::new(self.clone()), m }
    }

    /// `√2 B(z) E^±(z)`
    pub fn current(sign: i64) -> FieldOperator {
        FieldOperator::Product(vec![FieldOperator::Fermion(FermionPart::All), FieldOperator::Exp(ExpFieldSpec::e_pm(sign))])
            .times(QScalar::sqrt2())
    }
}

impl FiniteOp {
    /// Doubled degree shift.
    pub fn shift2(&self) -> i64 {
        match self {
            FiniteOp::Mode { m, .. } => -m.doubled(),
            FiniteOp::KPower(_) => 0,
            FiniteOp::Scalar(_, o) => o.shift2(),
            FiniteOp::Product(os) => os.iter().map(|o| o.shift2()).sum(),
        }
    }

    /// Generators: `e_1 = X^+_0`, `f_1 = X^-_0`, `t_1 = K`, `t_0 = q^2 K^-1`,
    /// `e_0 = X^-_1 t_1^-1`, `f_0 = t_1 X^+_-1`.
    pub fn chevalley(g: Gen) -> FiniteOp {
        let xp = FieldOperator::current(1);
        let xm = FieldOperator::current(-1);
        match g {
            Gen::E1 => xp.mode(Half::ZERO),
            Gen::F1 => xm.mode(Half::ZERO),
            Gen::T1 => FiniteOp::KPower(1),
            Gen::T1Inv => FiniteOp::KPower(-1),
            Gen::T0 => FiniteOp::Scalar(QScalar::q_pow(2), Box::new(FiniteOp::KPower(-1))),
            Gen::T0Inv => FiniteOp::Scalar(QScalar::q_pow(-2), Box::new(FiniteOp::KPower(1))),
            Gen::E0 => FiniteOp::Product(vec![xm.mode(Half::int(1)), FiniteOp::KPower(-1)]),
            Gen::F0 => FiniteOp::Product(vec![FiniteOp::KPower(1), xp.mode(Half::int(-1))]),
        }
    }
}

/// Names accepted by [`build_named_field`].
pub const FIELD_NAMES: [&str; 21] = [
    "E+", "E-", "B", "psi+", "psi-", "X+", "X-", "phi_1", "phi_0", "phi_-1", "phi*_1", "phi*_0", "phi*_-1", "psi_-1",
    "psi_0", "psi_1", "psi*_1", "psi*_0", "psi*_-1", "B+", "B-",
];

/// Type I components `φ_j` (`psi = false`) or type II `ψ_j` (`psi = true`).
pub fn vertex_component(psi: bool, j: i64) -> FieldOperator {
    let e1 = FiniteOp::chevalley(Gen::E1);
    let f1 = FiniteOp::chevalley(Gen::F1);
    let inv2 = qint(2).inv().expect("nonzero");
    match (psi, j) {
        (false, 1) => FieldOperator::Exp(ExpFieldSpec::phi_1()),
        (false, 0) => vertex_component(false, 1).commutator(f1, QScalar::q_pow(2)),
        (false, -1) => vertex_component(false, 0).commutator(f1, one()).times(inv2),
        (true, -1) => FieldOperator::Exp(ExpFieldSpec::psi_m1()),
        (true, 0) => vertex_component(true, -1).commutator(e1, QScalar::q_pow(2)),
        (true, 1) => vertex_component(true, 0).commutator(e1, one()).times(inv2),
        _ => panic!("component index must be 1, 0 or -1"),
    }
}

/// `φ*_j(z) = φ_{-j}(zq^-2)`, and likewise for `ψ*_j`.
pub fn dual_component(psi: bool, j: i64) -> FieldOperator {
    vertex_component(psi, -j).scaled(QScalar::q_pow(-2))
}

/// [`build_named_field`] for names known to be valid.
pub fn build_normal(name: &str) -> FieldOperator {
    build_named_field(name).expect("known field name")
}

pub fn build_named_field(name: &str) -> Result<FieldOperator, FieldError> {
    let f = match name {
        "E+" => FieldOperator::Exp(ExpFieldSpec::e_pm(1)),
        "E-" => FieldOperator::Exp(ExpFieldSpec::e_pm(-1)),
        "B" => FieldOperator::Fermion(FermionPart::All),
        "B+" => FieldOperator::Fermion(FermionPart::Creation),
        "B-" => FieldOperator::Fermion(FermionPart::Annihilation),
        "psi+" => FieldOperator::Exp(ExpFieldSpec::psi_pm(1)),
        "psi-" => FieldOperator::Exp(ExpFieldSpec::psi_pm(-1)),
        "X+" => FieldOperator::current(1),
        "X-" => FieldOperator::current(-1),
        _ => {
            let (dual, rest) = match name.strip_prefix("phi*_").or_else(|| name.strip_prefix("psi*_")) {
                Some(r) => (true, r),
                None => (false, name.strip_prefix("phi_").or_else(|| name.strip_prefix("psi_")).unwrap_or("")),
            };
            let psi = name.starts_with("psi");
            let j: i64 = match rest {
                "1" => 1,
                "0" => 0,
                "-1" => -1,
                _ => return Err(FieldError::UnknownField(name.to_string())),
            };
            if dual {
                dual_component(psi, j)
            } else {
                vertex_component(psi, j)
            }
        }
    };
    Ok(f)
}

impl fmt::Display for FermionPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FermionPart::All => "B",
            FermionPart::Creation => "B+",
            FermionPart::Annihilation => "B-",
        })
    }
}

impl fmt::Display for FieldOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldOperator::Exp(s) => write!(f, "exp[shift {}, K^{}]", s.shift, s.k_power),
            FieldOperator::Fermion(p) => write!(f, "{p}"),
            FieldOperator::Scaled(o, l) => write!(f, "({o})(({l})z)"),
            FieldOperator::Product(os) => {
                let parts: Vec<String> = os.iter().map(|o| o.to_string()).collect();
                write!(f, "{}", parts.join(" "))
            }
            FieldOperator::ModeCommutator { field, op, x } => write!(f, "[{field}, {op}]_({x})"),
            FieldOperator::Scalar(c, o) => write!(f, "({c})*({o})"),
        }
    }
}

impl fmt::Display for FiniteOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteOp::Mode { field, m } => write!(f, "mode_{m}({field})"),
            FiniteOp::KPower(k) => write!(f, "K^{k}"),
            FiniteOp::Scalar(c, o) => write!(f, "({c})*{o}"),
            FiniteOp::Product(os) => {
                let parts: Vec<String> = os.iter().map(|o| o.to_string()).collect();
                write!(f, "{}", parts.join(" "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        assert_eq!(build_named_field("phi_1").unwrap().weight2(), 1);
        assert_eq!(build_named_field("phi_-1").unwrap().weight2(), 1);
        assert_eq!(build_named_field("psi*_0").unwrap().weight2(), 1);
        assert_eq!(build_named_field("X+").unwrap().weight2(), 2);
        assert_eq!(build_named_field("psi-").unwrap().weight2(), 0);
        assert_eq!(build_named_field("E-").unwrap().weight2(), 1);
        assert!(matches!(build_named_field("chi"), Err(FieldError::UnknownField(_))));
        for n in FIELD_NAMES {
            build_named_field(n).unwrap();
        }
    }

    #[test]
    fn chevalley_shifts() {
        assert_eq!(FiniteOp::chevalley(Gen::E0).shift2(), -2);
        assert_eq!(FiniteOp::chevalley(Gen::F0).shift2(), 2);
        assert_eq!(FiniteOp::chevalley(Gen::E1).shift2(), 0);
    }
}
