use crate::chevalley::Gen;
use crate::fields::{build_normal, FieldEngine, FieldOperator, FiniteOp, SectorBlock};
use crate::fock::{sectors, FockState, FockVector, Half, Sector, Truncation};
use crate::scalar::{QScalar, Symbolic};

use super::report::VerificationReport;
use super::words::{show_vector, Atom, OpSum, WordEvaluator};

/// The twelve vertex components.
pub const VERTEX_COMPONENTS: [&str; 12] =
    ["phi_1", "phi_0", "phi_-1", "phi*_1", "phi*_0", "phi*_-1", "psi_-1", "psi_0", "psi_1", "psi*_1", "psi*_0", "psi*_-1"];

/// Provider of mode matrices `O_m` on one sector.
pub trait BlockSource {
    fn block(&mut self, engine: &FieldEngine<Symbolic>, name: &str, m: Half, sector: Sector, t: &Truncation) -> SectorBlock<QScalar>;
}

/// Computes every block afresh.
pub struct DirectBlocks;

impl BlockSource for DirectBlocks {
    fn block(&mut self, engine: &FieldEngine<Symbolic>, name: &str, m: Half, sector: Sector, t: &Truncation) -> SectorBlock<QScalar> {
        engine.mode_block(engine.field(&build_normal(name)), m, sector, t).expect("mode inside the window")
    }
}

/// Highest-weight vectors, projector commutation and `P_± Θ(z) P_± = 0` on
/// states of degree at most `component_degree`.
pub fn verify_module_structure(engine: &FieldEngine<Symbolic>, t: &Truncation, component_degree: Half) -> VerificationReport {
    verify_module_structure_with(engine, t, component_degree, &mut DirectBlocks)
}

/// [`verify_module_structure`] with the sector matrices of the vertex
/// components taken from `blocks`.
pub fn verify_module_structure_with(
    engine: &FieldEngine<Symbolic>,
    t: &Truncation,
    component_degree: Half,
    blocks: &mut dyn BlockSource,
) -> VerificationReport {
    let ev = WordEvaluator::new(engine);
    let mut r = VerificationReport::new("module-structure");
    r.param("max_degree", t.max_degree).param("component_degree", component_degree);
    let gen = |g: Gen| Atom::Op(engine.op(&FiniteOp::chevalley(g)));
    let apply = |word: &[Atom], s: &FockState| ev.apply_word(word, &FockVector::basis(s.clone()));
    let expect = |r: &mut VerificationReport, name: String, got: FockVector<QScalar>, want: FockVector<QScalar>| {
        let d = got.sub(&want);
        r.exact(name, (!d.is_zero()).then(|| (show_vector(&d), show_vector(&got))));
    };
    let vac = FockState::vacuum();
    let one = FockState::charged(1);
    let q2 = QScalar::q_pow(2);
    for (label, s, t1, t0) in [("|0>", &vac, QScalar::from_ratio(1, 1), q2.clone()), ("|1>", &one, q2.clone(), QScalar::from_ratio(1, 1))] {
        let v = FockVector::basis(s.clone());
        expect(&mut r, format!("e_1 {label} = 0"), apply(&[gen(Gen::E1)], s), FockVector::zero());
        expect(&mut r, format!("e_0 {label} = 0"), apply(&[gen(Gen::E0)], s), FockVector::zero());
        expect(&mut r, format!("t_1 {label} = ({t1}) {label}"), apply(&[gen(Gen::T1)], s), v.scale(&t1));
        expect(&mut r, format!("t_0 {label} = ({t0}) {label}"), apply(&[gen(Gen::T0)], s), v.scale(&t0));
    }
    let (f0, f1) = (gen(Gen::F0), gen(Gen::F1));
    expect(&mut r, "f_1 |0> = 0".into(), apply(&[f1], &vac), FockVector::zero());
    expect(&mut r, "f_0^3 |0> = 0".into(), apply(&[f0, f0, f0], &vac), FockVector::zero());
    expect(&mut r, "f_0 |1> = 0".into(), apply(&[f0], &one), FockVector::zero());
    expect(&mut r, "f_1^3 |1> = 0".into(), apply(&[f1, f1, f1], &one), FockVector::zero());
    r.exact("f_0^2 |0> != 0", apply(&[f0, f0], &vac).is_zero().then(|| ("0".into(), "|0>".into())));
    r.exact("f_1^2 |1> != 0", apply(&[f1, f1], &one).is_zero().then(|| ("0".into(), "|1>".into())));

    let mut samples: Vec<(String, Atom)> = [Gen::E0, Gen::E1, Gen::F0, Gen::F1, Gen::T0, Gen::T1]
        .into_iter()
        .map(|g| (format!("{g:?}"), gen(g)))
        .collect();
    for sign in [1, -1] {
        let s = if sign > 0 { "+" } else { "-" };
        for n in -2..=2 {
            samples.push((format!("X^{s}_{n}"), Atom::Op(engine.op(&FieldOperator::current(sign).mode(Half::int(n))))));
        }
        for n in 0..=2 {
            let (name, m) = if sign > 0 { ("psi+", n) } else { ("psi-", -n) };
            samples.push((format!("{name}_{m}"), Atom::Op(engine.op(&build_normal(name).mode(Half::int(m))))));
        }
    }
    for m in [-2, -1, 1, 2] {
        samples.push((format!("a_{m}"), Atom::Boson(m)));
    }
    for (name, x) in &samples {
        for sign in [1, -1] {
            let p = Atom::Projector(sign);
            let s = if sign > 0 { "+" } else { "-" };
            let sum = OpSum::new().plus(vec![p, *x]).minus(vec![*x, p]);
            ev.check(&mut r, format!("[P_{s}, {name}] = 0"), &sum, t);
        }
    }

    let window = Truncation::with_window(component_degree, t.p_min, t.p_max);
    let bound = component_degree.doubled();
    for name in VERTEX_COMPONENTS {
        let f = build_normal(name);
        for sign in [1, -1] {
            let p = Atom::Projector(sign);
            let s = if sign > 0 { "+" } else { "-" };
            let sums: Vec<OpSum> = (-bound..=bound)
                .filter(|m2| m2.rem_euclid(2) == 1)
                .map(|m2| OpSum::new().plus(vec![p, Atom::Op(engine.op(&f.mode(Half::from_doubled(m2)))), p]))
                .collect();
            ev.check_all(&mut r, format!("P_{s} {name}(z) P_{s} = 0"), &sums, &window);
        }
    }
    let mut nonzero = 0;
    let mut count = 0;
    for name in VERTEX_COMPONENTS {
        let mut witness = None;
        for sector in sectors(&window) {
            for m2 in -bound..=bound {
                let m = Half::from_doubled(m2);
                let target = sector.degree - m;
                if m2.rem_euclid(2) == 0 || target < Half::ZERO || target > component_degree {
                    continue;
                }
                let b = blocks.block(engine, name, m, sector, &window);
                count += 1;
                nonzero += usize::from(!b.is_zero());
                let parity = if sector.degree.is_integer() { 1 } else { -1 };
                for (s, col) in b.basis.iter().zip(&b.columns) {
                    let same = col.filter(|u| u.parity() == parity);
                    if !same.is_zero() && witness.is_none() {
                        witness = Some((show_vector(&same), format!("mode {m} on |{s}>")));
                    }
                }
            }
        }
        r.exact(format!("P_+ {name}_m P_+ and P_- {name}_m P_- are zero sector matrices"), witness);
    }
    r.param("component_blocks", count);
    r.param("nonzero_component_blocks", nonzero);
    r.note("the projected vertex operators between the irreducible submodules follow from the unprojected identities together with the projector relations");
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_window() {
        let e = FieldEngine::new(Symbolic);
        let r = verify_module_structure(&e, &Truncation::new(Half::int(3)), Half::int(2));
        assert!(r.fully_passed(), "{}", r.to_text());
        assert_ne!(r.parameters["nonzero_component_blocks"], "0");
    }

    struct Leaky;

    impl BlockSource for Leaky {
        fn block(&mut self, e: &FieldEngine<Symbolic>, name: &str, m: Half, sector: Sector, t: &Truncation) -> SectorBlock<QScalar> {
            let mut b = DirectBlocks.block(e, name, m, sector, t);
            if let Some(c) = b.columns.first_mut() {
                c.add_term(b.basis[0].clone(), QScalar::from_ratio(1, 1));
            }
            b
        }
    }

    #[test]
    fn detects_parity_preserving_block() {
        let e = FieldEngine::new(Symbolic);
        let r = verify_module_structure_with(&e, &Truncation::new(Half::int(3)), Half::int(2), &mut Leaky);
        assert_eq!(r.counts().fail, 12);
    }
}
