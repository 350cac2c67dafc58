use std::fs;
use std::path::{Path, PathBuf};

use qaffine::fields::{FieldEngine, SectorBlock};
use qaffine::fock::{FockState, FockVector, Half, Sector, Truncation};
use qaffine::scalar::Symbolic;
use qaffine::verify::module::{BlockSource, DirectBlocks};
use qaffine::QScalar;
use serde::{Deserialize, Serialize};

/// Bumped whenever the stored layout or the operator conventions change.
pub const CACHE_FORMAT: u32 = 1;

pub fn tool_version() -> String {
    format!("{}+cache{}", env!("CARGO_PKG_VERSION"), CACHE_FORMAT)
}

/// Identity of one stored block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockKey {
    pub version: String,
    pub field: String,
    pub max_degree: String,
    pub p_min: i64,
    pub p_max: i64,
    pub sector_degree: String,
    pub sector_momentum: i64,
    pub mode: String,
    pub coefficients: String,
}

impl BlockKey {
    pub fn new(field: &str, m: Half, sector: Sector, t: &Truncation) -> Self {
        BlockKey {
            version: tool_version(),
            field: field.to_string(),
            max_degree: t.max_degree.to_string(),
            p_min: t.p_min,
            p_max: t.p_max,
            sector_degree: sector.degree.to_string(),
            sector_momentum: sector.momentum,
            mode: m.to_string(),
            coefficients: "exact".into(),
        }
    }

    fn file_name(&self) -> String {
        let raw = format!(
            "{}_m{}_d{}_p{}_t{}_{}_{}.json",
            self.field, self.mode, self.sector_degree, self.sector_momentum, self.max_degree, self.p_min, self.p_max
        );
        raw.chars()
            .map(|c| match c {
                '*' => 's',
                '/' => 'h',
                c if c.is_ascii_alphanumeric() || c == '.' || c == '_' || c == '-' => c,
                _ => 'x',
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct StoredBlock {
    key: BlockKey,
    basis: Vec<String>,
    columns: Vec<Vec<(String, String)>>,
}

/// Sector matrices on disk, one JSON file per block under a directory
/// named after the tool version. Unreadable entries are recomputed.
pub struct OperatorCache {
    dir: Option<PathBuf>,
    pub hits: usize,
    pub misses: usize,
    pub warnings: Vec<String>,
}

impl OperatorCache {
    pub fn new(root: Option<&Path>) -> Self {
        let dir = root.map(|r| r.join(format!("v{}", tool_version())));
        OperatorCache { dir, hits: 0, misses: 0, warnings: Vec::new() }
    }

    pub fn disabled() -> Self {
        OperatorCache::new(None)
    }

    fn path(&self, key: &BlockKey) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(key.file_name()))
    }

    pub fn store(&mut self, key: &BlockKey, block: &SectorBlock<QScalar>) {
        let Some(path) = self.path(key) else { return };
        let stored = StoredBlock {
            key: key.clone(),
            basis: block.basis.iter().map(|s| s.to_string()).collect(),
            columns: block.columns.iter().map(|c| c.iter().map(|(s, x)| (s.to_string(), x.to_string())).collect()).collect(),
        };
        let text = serde_json::to_string(&stored).expect("serializable");
        let tmp = path.with_extension("tmp");
        let res = path
            .parent()
            .map_or(Ok(()), fs::create_dir_all)
            .and_then(|_| fs::write(&tmp, text))
            .and_then(|_| fs::rename(&tmp, &path));
        if let Err(e) = res {
            self.warnings.push(format!("cache write failed for {}: {e}", path.display()));
        }
    }

    /// `None` on a miss; a corrupt or mismatched entry counts as a miss and
    /// leaves a warning.
    pub fn load(&mut self, key: &BlockKey, sector: Sector) -> Option<SectorBlock<QScalar>> {
        let path = self.path(key)?;
        let text = fs::read_to_string(&path).ok()?;
        match decode(&text, key, sector) {
            Ok(b) => Some(b),
            Err(e) => {
                self.warnings.push(format!("discarding corrupt cache entry {}: {e}", path.display()));
                None
            }
        }
    }
}

fn decode(text: &str, key: &BlockKey, sector: Sector) -> Result<SectorBlock<QScalar>, String> {
    let stored: StoredBlock = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if &stored.key != key {
        return Err("key mismatch".into());
    }
    if stored.basis.len() != stored.columns.len() {
        return Err("column count differs from basis size".into());
    }
    let state = |s: &str| s.parse::<FockState>().map_err(|e| format!("{e:?}"));
    let basis = stored.basis.iter().map(|s| state(s)).collect::<Result<Vec<_>, _>>()?;
    let mut columns = Vec::with_capacity(basis.len());
    for col in &stored.columns {
        let mut v = FockVector::zero();
        for (s, x) in col {
            let c: QScalar = x.parse().map_err(|e| format!("{e:?}"))?;
            v.add_term(state(s)?, c);
        }
        columns.push(v);
    }
    Ok(SectorBlock { source: sector, basis, columns })
}

/// Block source that consults the cache before computing.
pub struct CachedBlocks<'a> {
    pub cache: &'a mut OperatorCache,
}

impl BlockSource for CachedBlocks<'_> {
    fn block(&mut self, engine: &FieldEngine<Symbolic>, name: &str, m: Half, sector: Sector, t: &Truncation) -> SectorBlock<QScalar> {
        let key = BlockKey::new(name, m, sector, t);
        if let Some(b) = self.cache.load(&key, sector) {
            self.cache.hits += 1;
            return b;
        }
        self.cache.misses += 1;
        let b = DirectBlocks.block(engine, name, m, sector, t);
        self.cache.store(&key, &b);
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_plus_0() -> (BlockKey, Sector, Truncation, SectorBlock<QScalar>) {
        let e = FieldEngine::new(Symbolic);
        let t = Truncation::new(Half::int(4));
        let sector = Sector { degree: Half::int(2), momentum: 0 };
        let b = DirectBlocks.block(&e, "X+", Half::ZERO, sector, &t);
        (BlockKey::new("X+", Half::ZERO, sector, &t), sector, t, b)
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let (key, sector, _, b) = x_plus_0();
        assert!(!b.is_zero());
        let mut c = OperatorCache::new(Some(dir.path()));
        assert!(c.load(&key, sector).is_none());
        c.store(&key, &b);
        assert_eq!(c.load(&key, sector), Some(b));
        assert!(c.warnings.is_empty());
    }

    #[test]
    fn version_bump_misses() {
        let dir = tempfile::tempdir().unwrap();
        let (key, sector, _, b) = x_plus_0();
        let mut c = OperatorCache::new(Some(dir.path()));
        c.store(&key, &b);
        let stale = BlockKey { version: "0.0.0+cache0".into(), ..key.clone() };
        assert!(c.load(&stale, sector).is_none());
        let mut old = OperatorCache { dir: Some(dir.path().join("v0.0.0+cache0")), hits: 0, misses: 0, warnings: vec![] };
        assert!(old.load(&key, sector).is_none());
    }

    #[test]
    fn corrupt_entry_recomputes() {
        let dir = tempfile::tempdir().unwrap();
        let (key, sector, t, b) = x_plus_0();
        let mut c = OperatorCache::new(Some(dir.path()));
        c.store(&key, &b);
        let path = c.path(&key).unwrap();
        fs::write(&path, "{ not json").unwrap();
        let e = FieldEngine::new(Symbolic);
        let got = CachedBlocks { cache: &mut c }.block(&e, "X+", Half::ZERO, sector, &t);
        assert_eq!(got, b);
        assert_eq!(c.warnings.len(), 1);
        assert_eq!(c.misses, 1);
        assert_eq!(c.load(&key, sector), Some(b));
    }

    #[test]
    fn disabled_cache_never_hits() {
        let (key, sector, _, b) = x_plus_0();
        let mut c = OperatorCache::disabled();
        c.store(&key, &b);
        assert!(c.load(&key, sector).is_none());
    }
}
