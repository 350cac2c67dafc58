//! Defining relations of the Chevalley presentation, checked on any module
//! that can apply the six generators and the inverses of `t_i`.

use std::collections::HashMap;

use crate::scalar::{q_binomial, q_integer, QScalar};
use crate::verify::report::VerificationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    E0,
    E1,
    F0,
    F1,
    T0,
    T1,
    T0Inv,
    T1Inv,
}

impl Gen {
    pub fn e(i: usize) -> Gen {
        [Gen::E0, Gen::E1][i]
    }
    pub fn f(i: usize) -> Gen {
        [Gen::F0, Gen::F1][i]
    }
    pub fn t(i: usize) -> Gen {
        [Gen::T0, Gen::T1][i]
    }
    pub fn t_inv(i: usize) -> Gen {
        [Gen::T0Inv, Gen::T1Inv][i]
    }
}

/// Cartan matrix of affine sl2.
pub const CARTAN: [[i64; 2]; 2] = [[2, -2], [-2, 2]];

/// `Σ coeff · word = 0`; words are operator products, applied right to left.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: String,
    pub terms: Vec<(QScalar, Vec<Gen>)>,
}

pub fn chevalley_relations() -> Vec<Relation> {
    let one = QScalar::from_ratio(1, 1);
    let mut out = Vec::new();
    out.push(Relation {
        name: "t_0 t_1 = t_1 t_0".into(),
        terms: vec![(one.clone(), vec![Gen::T0, Gen::T1]), (-one.clone(), vec![Gen::T1, Gen::T0])],
    });
    for i in 0..2 {
        out.push(Relation {
            name: format!("t_{i} t_{i}^-1 = 1"),
            terms: vec![(one.clone(), vec![Gen::t(i), Gen::t_inv(i)]), (-one.clone(), vec![])],
        });
        for j in 0..2 {
            let a = CARTAN[i][j];
            out.push(Relation {
                name: format!("t_{i} e_{j} t_{i}^-1 = q^{a} e_{j}"),
                terms: vec![
                    (one.clone(), vec![Gen::t(i), Gen::e(j), Gen::t_inv(i)]),
                    (-QScalar::q_pow(a), vec![Gen::e(j)]),
                ],
            });
            out.push(Relation {
                name: format!("t_{i} f_{j} t_{i}^-1 = q^{} f_{j}", -a),
                terms: vec![
                    (one.clone(), vec![Gen::t(i), Gen::f(j), Gen::t_inv(i)]),
                    (-QScalar::q_pow(-a), vec![Gen::f(j)]),
                ],
            });
            let mut terms = vec![(one.clone(), vec![Gen::e(i), Gen::f(j)]), (-one.clone(), vec![Gen::f(j), Gen::e(i)])];
            if i == j {
                let c = QScalar::q_pow(1).sub_ref(&QScalar::q_pow(-1)).inv().expect("nonzero");
                terms.push((-c.clone(), vec![Gen::t(i)]));
                terms.push((c, vec![Gen::t_inv(i)]));
            }
            out.push(Relation { name: format!("[e_{i}, f_{j}] = {}", if i == j { format!("(t_{i} - t_{i}^-1)/(q - q^-1)") } else { "0".into() }), terms });
        }
    }
    for i in 0..2 {
        let j = 1 - i;
        let n = 1 - CARTAN[i][j];
        for (label, g) in [("e", Gen::e as fn(usize) -> Gen), ("f", Gen::f as fn(usize) -> Gen)] {
            let terms = (0..=n)
                .map(|r| {
                    let c = QScalar::from_ratfunc(q_binomial(n, r).expect("0 <= r <= n"));
                    let c = if r % 2 == 1 { -c } else { c };
                    let mut word = vec![g(i); r as usize];
                    word.push(g(j));
                    word.extend(std::iter::repeat(g(i)).take((n - r) as usize));
                    (c, word)
                })
                .collect();
            out.push(Relation { name: format!("Serre ({label}_{i}, {label}_{j})"), terms });
        }
    }
    out
}

/// A module on which the Chevalley generators act.
pub trait ChevalleyModule {
    type Vector: Clone;

    /// Test vectors with printable labels.
    fn test_vectors(&self) -> Vec<(String, Self::Vector)>;
    fn apply(&self, g: Gen, v: &Self::Vector) -> Self::Vector;
    fn combine(&self, terms: &[(QScalar, Self::Vector)]) -> Self::Vector;
    fn is_zero(&self, v: &Self::Vector) -> bool;
    fn show(&self, v: &Self::Vector) -> String;
}

fn apply_word<M: ChevalleyModule>(
    m: &M,
    word: &[Gen],
    v: &M::Vector,
    memo: &mut HashMap<Vec<Gen>, M::Vector>,
) -> M::Vector {
    if word.is_empty() {
        return v.clone();
    }
    if let Some(r) = memo.get(word) {
        return r.clone();
    }
    let inner = apply_word(m, &word[1..], v, memo);
    let r = m.apply(word[0], &inner);
    memo.insert(word.to_vec(), r.clone());
    r
}

/// Checks every relation on every test vector.
pub fn check_relations<M: ChevalleyModule>(m: &M, relations: &[Relation], suite: &str) -> VerificationReport {
    let mut report = VerificationReport::new(suite);
    let vectors = m.test_vectors();
    report.param("test_vectors", vectors.len());
    let mut memos: Vec<HashMap<Vec<Gen>, M::Vector>> = vectors.iter().map(|_| HashMap::new()).collect();
    for rel in relations {
        let mut witness = None;
        for ((label, v), memo) in vectors.iter().zip(memos.iter_mut()) {
            let terms: Vec<(QScalar, M::Vector)> =
                rel.terms.iter().map(|(c, w)| (c.clone(), apply_word(m, w, v, memo))).collect();
            let res = m.combine(&terms);
            if !m.is_zero(&res) {
                witness = Some((m.show(&res), label.clone()));
                break;
            }
        }
        report.exact(rel.name.clone(), witness);
    }
    report
}

pub fn check_chevalley<M: ChevalleyModule>(m: &M, suite: &str) -> VerificationReport {
    check_relations(m, &chevalley_relations(), suite)
}

/// `[n]` as a `QScalar`.
pub fn qint(n: i64) -> QScalar {
    QScalar::from_ratfunc(q_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_inventory() {
        let rels = chevalley_relations();
        // 1 + 2 + 2·2·3 + 4 Serre
        assert_eq!(rels.len(), 1 + 2 + 12 + 4);
        let serre = rels.iter().find(|r| r.name == "Serre (e_0, e_1)").unwrap();
        assert_eq!(serre.terms.len(), 4);
        assert_eq!(serre.terms[1].0, -qint(3));
        assert_eq!(serre.terms[1].1, vec![Gen::E0, Gen::E1, Gen::E0, Gen::E0]);
    }
}
