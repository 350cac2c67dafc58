use std::process::Command;
use std::time::{Duration, Instant};

use qaffine::fields::FieldEngine;
use qaffine::fock::{Half, Truncation};
use qaffine::rmatrix::{build_rmatrix, check_initial_condition, check_structure};
use qaffine::scalar::Symbolic;
use qaffine::verify::drinfeld::{verify_chevalley, verify_drinfeld};
use qaffine::verify::exchange::{verify_exchange_all, Convention};
use qaffine::verify::intertwiner::verify_intertwiner;
use qaffine::verify::invertibility::verify_invertibility;
use qaffine::verify::module::{verify_module_structure, VERTEX_COMPONENTS};
use qaffine::verify::normal_order::{panel, verify_normal_ordering};
use qaffine::verify::oscillators::verify_oscillators;
use qaffine::verify::report::VerificationReport;
use qaffine::ybe::check_yang_baxter;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn summary(reports: &[&VerificationReport]) -> (bool, String) {
    let ok = reports.iter().all(|r| r.fully_passed());
    let parts: Vec<String> = reports
        .iter()
        .map(|r| {
            let c = r.counts();
            format!("{} {}/{}", r.suite, c.pass, c.pass + c.fail + c.skipped)
        })
        .collect();
    let mut detail = parts.join(", ");
    for r in reports {
        if let Some(f) = r.checks.iter().find(|c| c.status != qaffine::verify::report::Status::Pass) {
            detail.push_str(&format!("; first problem in {}: {}", r.suite, f.description));
        }
    }
    (ok, detail)
}

fn has(r: &VerificationReport, needle: &str) -> bool {
    r.checks.iter().any(|c| c.description.contains(needle))
}

fn engine() -> FieldEngine<Symbolic> {
    FieldEngine::new(Symbolic)
}

fn c1() -> Outcome {
    let t0 = Instant::now();
    let r = check_yang_baxter(&build_rmatrix());
    let dt = t0.elapsed();
    let identical = r.parameters.get("identical_entries").map(String::as_str) == Some("729");
    let (ok, d) = summary(&[&r]);
    outcome(ok && identical && dt < Duration::from_secs(120), format!("{d}; 729 identical entries: {identical}; {:.2} s", dt.as_secs_f64()))
}

fn c2() -> Outcome {
    let rm = build_rmatrix();
    let (s, i) = (check_structure(&rm), check_initial_condition(&rm));
    let (ok, d) = summary(&[&s, &i]);
    let named = has(&i, "R(1) = P") && has(&s, "zero pattern") && has(&s, "gbar") && has(&s, "h = ");
    outcome(ok && named, d)
}

fn c3() -> Outcome {
    let r = verify_oscillators(&engine(), &Truncation::new(Half::int(6)), 2, Half::from_doubled(5));
    let (ok, d) = summary(&[&r]);
    outcome(ok, d)
}

fn c4() -> Outcome {
    let e = engine();
    let t = Truncation::new(Half::int(6));
    let (dr, ch) = (verify_drinfeld(&e, &t, 2), verify_chevalley(&e, &t));
    let (ok, d) = summary(&[&dr, &ch]);
    let named = has(&dr, "psi") && has(&dr, "quadratic X^+") && has(&dr, "quadratic X^-") && has(&ch, "Serre (e_0, e_1)") && has(&ch, "Serre (f_0, f_1)");
    outcome(ok && named, format!("{d}; psi expansion, quadratic and Serre checks present: {named}"))
}

fn c5() -> Outcome {
    let states = panel();
    let excited = states.iter().filter(|s| s.degree2() > 0).count();
    let r = verify_normal_ordering(&engine(), 8, &states, Half::int(2));
    let (ok, d) = summary(&[&r]);
    outcome(ok && excited >= 3, format!("{d}; vacuum and {excited} excited states"))
}

fn c6() -> Outcome {
    let r = verify_intertwiner(&engine(), &Truncation::new(Half::int(6)), Half::int(3));
    let (ok, d) = summary(&[&r]);
    outcome(ok, d)
}

fn c7() -> Outcome {
    let reports = verify_exchange_all(&engine(), Half::int(2), 12, &Convention::standard());
    let refs: Vec<&VerificationReport> = reports.iter().collect();
    let (ok, d) = summary(&refs);
    let all_pairs = reports.iter().all(|r| r.checks.len() == 9);
    let mixed = reports.iter().any(|r| r.suite == "exchange-I-II");
    outcome(ok && all_pairs && mixed, d)
}

fn c8() -> Outcome {
    let r = verify_invertibility(0.2, Half::int(2), 12, 1e-6);
    let (ok, d) = summary(&[&r]);
    let named = has(&r, "merged") || has(&r, ":phi_1(z) phi_1(zq^-2) E-(zq^4) E-(zq^2): = id");
    let ratios = has(&r, "f_0 / f_1 = -[2]") && has(&r, "f_-1 / f_1 = q^-2");
    let worst: Vec<String> = r.checks.iter().filter(|c| c.description.starts_with("|S_N")).filter_map(|c| c.residual.clone()).collect();
    outcome(ok && named && ratios, format!("{d}; final residuals {}", worst.join(", ")))
}

fn c9() -> Outcome {
    let r = verify_module_structure(&engine(), &Truncation::new(Half::int(6)), Half::int(4));
    let (ok, d) = summary(&[&r]);
    let components = VERTEX_COMPONENTS.iter().all(|n| has(&r, &format!("P_+ {n}_m P_+")));
    let hw = has(&r, "e_0 |0> = 0") && has(&r, "e_1 |1> = 0");
    outcome(ok && components && hw, d)
}

fn c10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_qaffine");
    let t0 = Instant::now();
    let mut outs = Vec::new();
    for _ in 0..2 {
        let o = Command::new(bin).args(["run", "all", "--format", "json"]).env_remove("QAFFINE_CACHE_DIR").output().expect("binary runs");
        outs.push(o);
    }
    let dt = t0.elapsed() / 2;
    let exit_ok = outs.iter().all(|o| o.status.code() == Some(0));
    let same = outs[0].stdout == outs[1].stdout && !outs[0].stdout.is_empty();
    let doc: serde_json::Value = serde_json::from_slice(&outs[0].stdout).unwrap_or_default();
    let fails = doc["summary"]["fail"].as_u64();
    outcome(
        exit_ok && same && fails == Some(0) && dt < Duration::from_secs(600),
        format!("exit 0: {exit_ok}; byte-identical: {same}; summary {}; {:.1} s per run", doc["summary"], dt.as_secs_f64()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("symbolic Yang-Baxter, 729 entries, under 120 s", c1),
        ("R(1) = P, zero pattern and gbar, h proportionalities", c2),
        ("oscillator relations at max degree 6", c3),
        ("Drinfeld relations for mode range 2 and Chevalley relations", c4),
        ("normal-ordering relations through order 8", c5),
        ("intertwiner relations for |m| <= 3", c6),
        ("exchange relations through order 12", c7),
        ("invertibility at q = 0.2 and exact identities", c8),
        ("module structure and projector relations", c9),
        ("end-to-end run all", c10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let o = f();
        let status = if o.ok { "PASS" } else { "FAIL" };
        failed += usize::from(!o.ok);
        println!("criterion {:>2} [{status}] {name} ({:.1} s): {}", i + 1, t0.elapsed().as_secs_f64(), o.detail);
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
