use std::collections::BTreeMap;

use proptest::prelude::*;
use qaffine::chevalley::qint;
use qaffine::fields::{build_normal, vertex_component, FieldEngine, FiniteOp, FIELD_NAMES};
use qaffine::fock::{enumerate_basis, FockState, FockVector, Half, MomentumOp, Oscillators, Truncation};
use qaffine::rmatrix::{build_rmatrix, cleared_denominator};
use qaffine::scalar::Symbolic;
use qaffine::verify::exchange::expand_ratio;
use qaffine::verify::scaling::check_scaling_covariance;
use qaffine::ybe::ybe_numeric_residual;
use qaffine::QScalar;

fn scalar() -> impl Strategy<Value = QScalar> {
    let atom = (-3i64..=3, 1i64..=3, -3i64..=3, any::<bool>()).prop_map(|(n, d, k, s)| {
        let x = QScalar::from_ratio(n, d).mul_ref(&QScalar::q_pow(k));
        if s {
            x.mul_ref(&QScalar::sqrt2())
        } else {
            x
        }
    });
    (atom.clone(), atom.clone(), atom, 1i64..4).prop_map(|(a, b, c, n)| {
        let den = qint(n).add_ref(&c);
        match a.add_ref(&b).checked_div(&den) {
            Ok(x) => x,
            Err(_) => a,
        }
    })
}

fn state() -> impl Strategy<Value = FockState> {
    (-2i64..=2, prop::collection::vec(1i64..=4, 0..3), prop::collection::vec(any::<bool>(), 3)).prop_map(|(p, a, mask)| {
        let b: Vec<Half> = mask.iter().enumerate().filter(|(_, &on)| on).map(|(i, _)| Half::from_doubled(2 * i as i64 + 1)).collect();
        FockState::new(p, &a, &b).expect("valid labels")
    })
}

fn wide() -> Truncation {
    Truncation::new(Half::int(40))
}

fn brute_partitions(n: usize, max: usize) -> usize {
    if n == 0 {
        return 1;
    }
    (1..=max.min(n)).map(|k| brute_partitions(n - k, k)).sum()
}

#[test]
fn neutral_bosonic_count_matches_partitions() {
    for n in 0..=8 {
        let t = Truncation::new(Half::int(n));
        let got = enumerate_basis(&t).iter().filter(|s| s.momentum() == 0 && s.fermion_count() == 0).count();
        let want: usize = (0..=n as usize).map(|k| brute_partitions(k, k)).sum();
        assert_eq!(got, want, "max degree {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_forms(a in scalar(), b in scalar()) {
        let back: QScalar = a.to_string().parse().unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert!(a.sub_ref(&a).is_zero());
        if !a.is_zero() {
            prop_assert!(a.mul_ref(&a.inv().unwrap()).is_one());
        }
        prop_assert_eq!(a.add_ref(&b).sub_ref(&b), a.clone());
        prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
    }

    #[test]
    fn yang_baxter_at_random_points(q in 0.2f64..0.5, z in 0.3f64..2.0, w in 0.3f64..2.0) {
        for a in [z, w, z * w] {
            prop_assume!((a - q * q).abs() > 0.05);
            prop_assume!((a * q * q - 1.0 / (q * q)).abs() > 0.05);
            prop_assume!((a * q - 1.0 / q).abs() > 0.05);
        }
        prop_assert!(ybe_numeric_residual(&build_rmatrix(), q, z, w) < 1e-8);
    }

    #[test]
    fn boson_commutator(s in state(), m in -3i64..=3, n in -3i64..=3) {
        prop_assume!(m != 0 && n != 0);
        let o = Oscillators::new(Symbolic);
        let t = wide();
        let v = FockVector::basis(s);
        let mn = o.apply_boson(m, &o.apply_boson(n, &v, &t), &t);
        let nm = o.apply_boson(n, &o.apply_boson(m, &v, &t), &t);
        let want = if m + n == 0 {
            v.scale(&qint(2 * m).mul_ref(&qint(2 * m)).mul_ref(&QScalar::from_ratio(1, m)))
        } else {
            FockVector::zero()
        };
        prop_assert_eq!(mn.sub(&nm), want);
    }

    #[test]
    fn fermion_anticommutator(s in state(), r2 in -7i64..=7, s2 in -7i64..=7) {
        prop_assume!(r2 % 2 != 0 && s2 % 2 != 0);
        let o = Oscillators::new(Symbolic);
        let t = wide();
        let (r, sm) = (Half::from_doubled(r2), Half::from_doubled(s2));
        let v = FockVector::basis(s);
        let rs = o.apply_fermion(r, &o.apply_fermion(sm, &v, &t), &t);
        let sr = o.apply_fermion(sm, &o.apply_fermion(r, &v, &t), &t);
        let want = if r2 + s2 == 0 {
            let k = qint(2 * r2).checked_div(&QScalar::from_ratio(2, 1).mul_ref(&qint(r2))).unwrap();
            v.scale(&k)
        } else {
            FockVector::zero()
        };
        prop_assert_eq!(rs.add(&sr), want);
    }

    #[test]
    fn degree_additivity(s in state(), n in 1i64..=4, r2 in 0i64..=3) {
        let o = Oscillators::new(Symbolic);
        let t = wide();
        let v = FockVector::basis(s.clone());
        for (u, _) in o.apply_boson(-n, &v, &t).iter() {
            prop_assert_eq!(u.degree2(), s.degree2() + 2 * n);
        }
        let r = Half::from_doubled(2 * r2 + 1);
        for (u, _) in o.apply_fermion(-r, &v, &t).iter() {
            prop_assert_eq!(u.degree2(), s.degree2() + r.doubled());
        }
        let shifted = o.apply_momentum(MomentumOp::ExpQ(1), &v, &t);
        prop_assert_eq!(shifted.len(), 1);
        for (u, _) in shifted.iter() {
            prop_assert_eq!(u.degree2(), s.degree2() + 2 * s.momentum() + 1);
        }
    }

    #[test]
    fn parity_and_projectors(s in state()) {
        let o = Oscillators::new(Symbolic);
        let sign = if (s.fermion_count() as i64 + s.momentum()).rem_euclid(2) == 0 { 1 } else { -1 };
        prop_assert_eq!(s.parity(), sign);
        let v = FockVector::basis(s.clone()).add(&FockVector::basis(FockState::charged(1)));
        let (p, m) = (o.project(1, &v), o.project(-1, &v));
        prop_assert_eq!(p.add(&m), v.clone());
        prop_assert_eq!(o.project(1, &p), p.clone());
        prop_assert!(o.project(-1, &p).is_zero());
        let d = o.apply_momentum(MomentumOp::Parity, &v, &wide());
        prop_assert_eq!(d, p.sub(&m));
    }

    #[test]
    fn weight_conjugation(s in state(), psi in any::<bool>(), j in -1i64..=1, m2 in -2i64..=2) {
        prop_assume!(s.degree2() <= 12);
        let e = FieldEngine::new(Symbolic);
        let m = Half::from_doubled(2 * m2 + 1);
        let o = e.op(&vertex_component(psi, j).mode(m));
        let k = e.op(&FiniteOp::KPower(1));
        let kinv = e.op(&FiniteOp::KPower(-1));
        let v = FockVector::basis(s);
        let lhs = e.apply_op(k, &e.apply_op(o, &e.apply_op(kinv, &v)));
        let rhs = e.apply_op(o, &v).scale(&QScalar::q_pow(2 * j));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reconstruction_soundness(coeffs in prop::collection::vec(-4i64..=4, 1..5), low in -3i64..=3, ascending in any::<bool>()) {
        let d = cleared_denominator();
        let p: BTreeMap<i64, QScalar> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (low + i as i64, QScalar::from_ratio(c, 1).mul_ref(&QScalar::q_pow(i as i64))))
            .collect();
        prop_assume!(!p.is_empty());
        let (plo, phi) = (*p.keys().next().unwrap(), *p.keys().last().unwrap());
        let (lo, hi) = if ascending { (plo - d.low(), plo - d.low() + 10) } else { (phi - d.high() - 10, phi - d.high()) };
        let s = expand_ratio(&p, &d, ascending, lo, hi);
        let window = if ascending { plo..=hi + d.low() } else { lo + d.high()..=phi };
        for e in window {
            let mut acc = QScalar::from_ratio(0, 1);
            for (k, c) in d.terms() {
                if let Some(x) = s.get(&(e - k)) {
                    acc = acc.add_ref(&c.mul_ref(x));
                }
            }
            let want = p.get(&e).cloned().unwrap_or_else(|| QScalar::from_ratio(0, 1));
            prop_assert_eq!(acc, want, "exponent {}", e);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn homogeneity_of_named_fields(i in 0usize..FIELD_NAMES.len(), k in 0usize..3) {
        let name = FIELD_NAMES[i];
        let x = [QScalar::from_ratio(3, 2), QScalar::q_pow(1), QScalar::from_ratio(2, 1).mul_ref(&QScalar::q_pow(-1))][k].clone();
        let e = FieldEngine::new(Symbolic);
        let r = check_scaling_covariance(&e, name, &build_normal(name), &x, &Truncation::new(Half::int(1)), Half::int(1), Half::int(2));
        prop_assert!(r.fully_passed(), "{}", r.to_text());
    }
}
