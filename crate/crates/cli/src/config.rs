use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use num_rational::Ratio;
use qaffine::fock::Half;
use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Rmatrix,
    Oscillators,
    Drinfeld,
    Chevalley,
    NormalOrder,
    Intertwiner,
    Exchange,
    Invertibility,
    ModuleStructure,
    All,
}

impl Suite {
    pub const EVERY: [Suite; 9] = [
        Suite::Rmatrix,
        Suite::Oscillators,
        Suite::Drinfeld,
        Suite::Chevalley,
        Suite::NormalOrder,
        Suite::Intertwiner,
        Suite::Exchange,
        Suite::Invertibility,
        Suite::ModuleStructure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Rmatrix => "rmatrix",
            Suite::Oscillators => "oscillators",
            Suite::Drinfeld => "drinfeld",
            Suite::Chevalley => "chevalley",
            Suite::NormalOrder => "normal-order",
            Suite::Intertwiner => "intertwiner",
            Suite::Exchange => "exchange",
            Suite::Invertibility => "invertibility",
            Suite::ModuleStructure => "module-structure",
            Suite::All => "all",
        }
    }

    pub fn numeric_only(self) -> bool {
        self == Suite::Invertibility
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
    Both,
}

impl Mode {
    pub fn numeric(self) -> bool {
        self != Mode::Exact
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

/// Sample value of `q`, written `a/b` or as a decimal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QValue(pub Ratio<i64>);

impl QValue {
    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl FromStr for QValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let r = match s.split_once('.') {
            Some((int, frac)) => {
                if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
                    return Err(format!("invalid decimal `{s}`"));
                }
                let den = 10i64.pow(frac.len() as u32);
                let int: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| format!("invalid decimal `{s}`"))? };
                let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| format!("invalid decimal `{s}`"))? };
                Ratio::new(int * den + frac, den)
            }
            None => Ratio::from_str(s).map_err(|_| format!("invalid rational `{s}`"))?,
        };
        Ok(QValue(r))
    }
}

impl std::fmt::Display for QValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for QValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub suites: Vec<Suite>,
    #[serde(serialize_with = "as_string")]
    pub max_degree: Half,
    pub mode: Mode,
    pub q: QValue,
    pub series_order: i64,
    pub exchange_order: i64,
    pub panel_degree: i64,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
    pub seed: u64,
}

fn as_string<S: serde::Serializer>(h: &Half, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(h)
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suites: vec![Suite::All],
            max_degree: Half::int(6),
            mode: Mode::Both,
            q: QValue(Ratio::new(1, 5)),
            series_order: 8,
            exchange_order: 12,
            panel_degree: 2,
            cache_dir: None,
            format: Format::Json,
            seed: 0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("suite `{0}` is numeric only and requires --mode numeric or --mode both")]
    NumericOnly(&'static str),
    #[error("--max-degree {max} must be at least --panel-degree + 2 = {need}")]
    Window { max: Half, need: i64 },
    #[error("--q must lie strictly between 0 and 1, got {0}")]
    QRange(QValue),
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("no suite selected")]
    NoSuite,
}

impl RunConfig {
    /// Checks the invariants and returns the suites to run, in canonical
    /// order; `all` under `--mode exact` leaves out the numeric-only suites.
    pub fn plan(&self) -> Result<Vec<Suite>, ConfigError> {
        if self.suites.is_empty() {
            return Err(ConfigError::NoSuite);
        }
        for s in &self.suites {
            if s.numeric_only() && !self.mode.numeric() {
                return Err(ConfigError::NumericOnly(s.name()));
            }
        }
        if self.max_degree < Half::int(self.panel_degree + 2) {
            return Err(ConfigError::Window { max: self.max_degree, need: self.panel_degree + 2 });
        }
        let q = self.q.0;
        if q <= Ratio::from_integer(0) || q >= Ratio::from_integer(1) {
            return Err(ConfigError::QRange(self.q));
        }
        for (name, v) in [("--series-order", self.series_order), ("--exchange-order", self.exchange_order), ("--panel-degree", self.panel_degree + 1)] {
            if v <= 0 {
                return Err(ConfigError::NonPositive(name));
            }
        }
        let mut out: Vec<Suite> = if self.suites.contains(&Suite::All) {
            Suite::EVERY.iter().copied().filter(|s| self.mode.numeric() || !s.numeric_only()).collect()
        } else {
            self.suites.clone()
        };
        out.sort();
        out.dedup();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_q() {
        assert_eq!("1/5".parse::<QValue>().unwrap().0, Ratio::new(1, 5));
        assert_eq!("0.2".parse::<QValue>().unwrap().0, Ratio::new(1, 5));
        assert_eq!(".25".parse::<QValue>().unwrap().0, Ratio::new(1, 4));
        assert!("x".parse::<QValue>().is_err());
        assert!("0.2e".parse::<QValue>().is_err());
    }

    #[test]
    fn plans() {
        let c = RunConfig::default();
        assert_eq!(c.plan().unwrap().len(), 9);
        let c = RunConfig { mode: Mode::Exact, ..RunConfig::default() };
        assert!(!c.plan().unwrap().contains(&Suite::Invertibility));
        let c = RunConfig { mode: Mode::Exact, suites: vec![Suite::Invertibility], ..RunConfig::default() };
        assert_eq!(c.plan(), Err(ConfigError::NumericOnly("invertibility")));
        let c = RunConfig { max_degree: Half::int(3), ..RunConfig::default() };
        assert!(matches!(c.plan(), Err(ConfigError::Window { .. })));
        let c = RunConfig { q: QValue(Ratio::new(3, 2)), ..RunConfig::default() };
        assert!(matches!(c.plan(), Err(ConfigError::QRange(_))));
        let c = RunConfig { suites: vec![Suite::Exchange, Suite::Rmatrix, Suite::Exchange], ..RunConfig::default() };
        assert_eq!(c.plan().unwrap(), vec![Suite::Rmatrix, Suite::Exchange]);
    }
}
