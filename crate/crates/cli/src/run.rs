use std::fmt::Write;
use std::time::Instant;

use qaffine::fields::FieldEngine;
use qaffine::fock::{Half, Truncation};
use qaffine::scalar::Symbolic;
use qaffine::verify::drinfeld::{verify_chevalley, verify_drinfeld};
use qaffine::verify::exchange::{verify_exchange_all, Convention};
use qaffine::verify::intertwiner::verify_intertwiner;
use qaffine::verify::invertibility::verify_invertibility;
use qaffine::verify::module::verify_module_structure_with;
use qaffine::verify::normal_order::{panel, verify_normal_ordering};
use qaffine::verify::oscillators::verify_oscillators;
use qaffine::verify::report::{Counts, VerificationReport};
use qaffine::verify::rmatrix::verify_rmatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cache::{tool_version, CachedBlocks, OperatorCache};
use crate::config::{ConfigError, RunConfig, Suite};

pub const SCHEMA_VERSION: u32 = 1;
pub const INVERTIBILITY_TOL: f64 = 1e-6;
pub const SPOT_TOL: f64 = 1e-9;

/// Outcome of a run. Wall times are kept out of the serialized form so
/// that identical configurations give byte-identical documents.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: String,
    pub config: RunConfig,
    pub suites: Vec<VerificationReport>,
    pub summary: Counts,
    #[serde(skip)]
    pub timings: Vec<(String, f64)>,
    #[serde(skip)]
    pub total_wall_time_s: f64,
}

impl ReportDocument {
    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} (report schema {})", self.tool, self.version, self.schema_version);
        for (r, (_, t)) in self.suites.iter().zip(&self.timings) {
            s.push_str(&r.to_text());
            let _ = writeln!(s, "   wall time {t:.2} s");
        }
        let c = self.summary;
        let _ = writeln!(
            s,
            "summary: {} pass, {} fail, {} skipped in {:.2} s -> {}",
            c.pass,
            c.fail,
            c.skipped,
            self.total_wall_time_s,
            if self.passed() { "OK" } else { "FAILED" }
        );
        s
    }
}

/// Seeded `(q, z, w)` samples for floating Yang-Baxter checks.
pub fn spot_points(seed: u64, n: usize) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (rng.gen_range(0.2..0.8), rng.gen_range(0.3..3.0), rng.gen_range(0.3..3.0))).collect()
}

fn run_suite(s: Suite, c: &RunConfig, engine: &FieldEngine<Symbolic>, cache: &mut OperatorCache) -> Vec<VerificationReport> {
    let t = Truncation::new(c.max_degree);
    let panel_degree = Half::int(c.panel_degree);
    match s {
        Suite::Rmatrix => {
            let spots = if c.mode.numeric() { spot_points(c.seed, 3) } else { Vec::new() };
            vec![verify_rmatrix(&spots, SPOT_TOL)]
        }
        Suite::Oscillators => vec![verify_oscillators(engine, &t, 2, Half::from_doubled(5))],
        Suite::Drinfeld => vec![verify_drinfeld(engine, &t, 2)],
        Suite::Chevalley => vec![verify_chevalley(engine, &t)],
        Suite::NormalOrder => vec![verify_normal_ordering(engine, c.series_order as usize, &panel(), Half::int(2))],
        Suite::Intertwiner => vec![verify_intertwiner(engine, &t, Half::int(3))],
        Suite::Exchange => verify_exchange_all(engine, panel_degree, c.exchange_order, &Convention::standard()),
        Suite::Invertibility => {
            vec![verify_invertibility(c.q.to_f64(), panel_degree, c.max_degree.doubled(), INVERTIBILITY_TOL)]
        }
        Suite::ModuleStructure => {
            let degree = c.max_degree - Half::int(2);
            vec![verify_module_structure_with(engine, &t, degree, &mut CachedBlocks { cache })]
        }
        Suite::All => unreachable!("expanded by the plan"),
    }
}

/// Runs every planned suite in canonical order.
pub fn run(c: &RunConfig, cache: &mut OperatorCache) -> Result<ReportDocument, ConfigError> {
    let plan = c.plan()?;
    let start = Instant::now();
    let engine = FieldEngine::new(Symbolic);
    let mut suites = Vec::new();
    let mut timings = Vec::new();
    for s in plan {
        let t0 = Instant::now();
        let reports = run_suite(s, c, &engine, cache);
        engine.clear_memos();
        let dt = t0.elapsed().as_secs_f64() / reports.len() as f64;
        for r in reports {
            timings.push((r.suite.clone(), dt));
            suites.push(r);
        }
    }
    let mut summary = Counts::default();
    for r in &suites {
        summary.add(r.counts());
    }
    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION,
        tool: "qaffine",
        version: tool_version(),
        config: c.clone(),
        suites,
        summary,
        timings,
        total_wall_time_s: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Mode;

    #[test]
    fn spots_are_seeded() {
        assert_eq!(spot_points(7, 3), spot_points(7, 3));
        assert_ne!(spot_points(7, 3), spot_points(8, 3));
        for (q, z, w) in spot_points(1, 10) {
            assert!((0.2..0.8).contains(&q) && (0.3..3.0).contains(&z) && (0.3..3.0).contains(&w));
        }
    }

    #[test]
    fn rmatrix_exact_run() {
        let c = RunConfig { suites: vec![Suite::Rmatrix], mode: Mode::Exact, ..RunConfig::default() };
        let d = run(&c, &mut OperatorCache::disabled()).unwrap();
        assert_eq!(d.exit_code(), 0);
        assert!(!d.to_json().contains("yang-baxter at q"));
        assert!(d.to_text().contains("OK"));
    }

    #[test]
    fn failure_is_not_masked() {
        let c = RunConfig { suites: vec![Suite::Rmatrix], ..RunConfig::default() };
        let mut d = run(&c, &mut OperatorCache::disabled()).unwrap();
        let mut bad = VerificationReport::new("injected");
        bad.fail("x", "1", "here");
        d.suites.insert(0, bad);
        d.summary = Counts::default();
        for r in &d.suites {
            d.summary.add(r.counts());
        }
        assert_eq!(d.exit_code(), 1);
    }
}
