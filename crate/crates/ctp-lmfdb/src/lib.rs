//! Optional cross-check client: fetch known rank/Sha data for an
//! elliptic curve from a public database over HTTP (an LMFDB-style
//! `ec_curvedata` endpoint), with a local one-file-per-record cache so
//! offline runs and CI never touch the network.
//!
//! This crate is a pure observer: lookups return `None` on any failure
//! (network, parse, missing record) with a logged warning, and nothing
//! downstream may depend on it for correctness.
//!
//! Environment variables:
//! * `LMFDB_BASE_URL` — REST endpoint returning JSON curve records
//!   (e.g. `https://www.lmfdb.org/api/ec_curvedata/`); unset means
//!   cache-only operation.
//! * `LMFDB_CACHE_DIR` — cache directory (default `.lmfdb-cache`).
//! * `LMFDB_OFFLINE` — any nonempty value disables network access.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

/// A cached record about one curve, as far as the database knows it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExternalCurveRecord {
    pub label: String,
    pub rank: i64,
    pub sha_order: Option<u64>,
    pub torsion_structure: String,
    /// The five a-invariants [a1, a2, a3, a4, a6] as decimal strings,
    /// when the database provides them (needed to run from a label).
    #[serde(default)]
    pub ainvs: Option<[String; 5]>,
    pub source_url: String,
    /// Unix seconds at fetch time.
    pub fetched_at: u64,
}

/// Lookup key: either a database label or the short Weierstrass
/// coefficients (A, B) as canonical decimal strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveKey {
    Label(String),
    Coefficients { a: String, b: String },
}

impl CurveKey {
    fn cache_file_name(&self) -> String {
        match self {
            CurveKey::Label(l) => format!("label_{}.json", sanitize(l)),
            CurveKey::Coefficients { a, b } => {
                format!("ab_{}_{}.json", sanitize(a), sanitize(b))
            }
        }
    }
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

/// Database client with local cache. All lookups go through the cache
/// first; network requests are throttled and soft-fail to `None`.
pub struct DbClient {
    base_url: Option<String>,
    cache_dir: PathBuf,
    offline: bool,
    throttle: Duration,
    last_request: Mutex<Option<Instant>>,
}

impl DbClient {
    pub fn new(base_url: Option<String>, cache_dir: PathBuf, offline: bool) -> DbClient {
        DbClient {
            base_url,
            cache_dir,
            offline,
            throttle: Duration::from_millis(500),
            last_request: Mutex::new(None),
        }
    }

    pub fn from_env() -> DbClient {
        let base_url = std::env::var("LMFDB_BASE_URL").ok().filter(|s| !s.is_empty());
        let cache_dir = std::env::var("LMFDB_CACHE_DIR")
            .map(PathBuf::from)
            .unwrap_or_else(|_| PathBuf::from(".lmfdb-cache"));
        let offline = std::env::var("LMFDB_OFFLINE").map(|v| !v.is_empty()).unwrap_or(false);
        DbClient::new(base_url, cache_dir, offline)
    }

    pub fn offline(&self) -> bool {
        self.offline
    }

    /// Cache-first lookup; `None` when the record is unavailable for
    /// any reason (absent, offline, network error, malformed response).
    pub fn lookup(&self, key: &CurveKey) -> Option<ExternalCurveRecord> {
        if let Some(rec) = self.read_cache(key) {
            return Some(rec);
        }
        if self.offline {
            return None;
        }
        let base = self.base_url.as_ref()?;
        let url = build_url(base, key);
        self.throttle();
        let body = match reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(10))
            .build()
            .and_then(|c| c.get(&url).send())
        {
            Ok(resp) => match resp.text() {
                Ok(b) => b,
                Err(e) => {
                    log::warn!("database response unreadable for {url}: {e}");
                    return None;
                }
            },
            Err(e) => {
                log::warn!("database request failed for {url}: {e}");
                return None;
            }
        };
        match parse_record(&body, &url) {
            Some(rec) => {
                self.store(key, &rec);
                Some(rec)
            }
            None => {
                log::warn!("no parsable curve record at {url}");
                None
            }
        }
    }

    /// Write a record into the cache (also how test fixtures and
    /// pre-seeded offline data get planted).
    pub fn store(&self, key: &CurveKey, rec: &ExternalCurveRecord) {
        if let Err(e) = fs::create_dir_all(&self.cache_dir) {
            log::warn!("cannot create cache dir {:?}: {e}", self.cache_dir);
            return;
        }
        let path = self.cache_path(key);
        match serde_json::to_string_pretty(rec) {
            Ok(json) => {
                if let Err(e) = fs::write(&path, json) {
                    log::warn!("cache write failed for {path:?}: {e}");
                }
            }
            Err(e) => log::warn!("cache serialization failed: {e}"),
        }
    }

    pub fn cache_path(&self, key: &CurveKey) -> PathBuf {
        self.cache_dir.join(key.cache_file_name())
    }

    fn read_cache(&self, key: &CurveKey) -> Option<ExternalCurveRecord> {
        read_record_file(&self.cache_path(key))
    }

    fn throttle(&self) {
        let mut last = self.last_request.lock().unwrap();
        if let Some(t) = *last {
            let elapsed = t.elapsed();
            if elapsed < self.throttle {
                std::thread::sleep(self.throttle - elapsed);
            }
        }
        *last = Some(Instant::now());
    }
}

/// Read one cached record, tolerating missing or corrupt files.
pub fn read_record_file(path: &Path) -> Option<ExternalCurveRecord> {
    let bytes = fs::read(path).ok()?;
    match serde_json::from_slice(&bytes) {
        Ok(rec) => Some(rec),
        Err(e) => {
            log::warn!("malformed cache entry {path:?}: {e}");
            None
        }
    }
}

fn build_url(base: &str, key: &CurveKey) -> String {
    let sep = if base.contains('?') { "&" } else { "?" };
    match key {
        CurveKey::Label(l) => format!("{base}{sep}lmfdb_label={l}&_format=json"),
        CurveKey::Coefficients { a, b } => {
            format!("{base}{sep}ainvs=[0,0,0,{a},{b}]&_format=json")
        }
    }
}

/// Parse a database response: either a bare record object or an
/// LMFDB-style envelope `{"data": [record, ...]}`. Unknown fields are
/// ignored; missing essentials yield `None`.
pub fn parse_record(body: &str, source_url: &str) -> Option<ExternalCurveRecord> {
    let value: serde_json::Value = serde_json::from_str(body).ok()?;
    let obj = if let Some(arr) = value.get("data").and_then(|d| d.as_array()) {
        arr.first()?.clone()
    } else {
        value
    };
    let label = obj
        .get("lmfdb_label")
        .or_else(|| obj.get("label"))
        .and_then(|v| v.as_str())?
        .to_string();
    let rank = obj.get("rank").and_then(|v| v.as_i64())?;
    let sha_order = obj
        .get("sha")
        .or_else(|| obj.get("sha_order"))
        .and_then(|v| v.as_u64());
    let torsion_structure = obj
        .get("torsion_structure")
        .map(|v| v.to_string())
        .unwrap_or_else(|| "[]".to_string());
    let ainvs = obj.get("ainvs").and_then(|v| v.as_array()).and_then(|arr| {
        if arr.len() != 5 {
            return None;
        }
        let strings: Vec<String> = arr
            .iter()
            .map(|x| match x {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            })
            .collect();
        strings.try_into().ok()
    });
    Some(ExternalCurveRecord {
        label,
        rank,
        sha_order,
        torsion_structure,
        ainvs,
        source_url: source_url.to_string(),
        fetched_at: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    })
}

/// Consistency verdicts from comparing a computed run against a
/// database record. Mismatches are advisory warnings, except the
/// impossible case (a bound below the proven rank), which signals an
/// implementation bug.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// refined bound equals the database rank.
    BoundSharp,
    /// refined bound exceeds the database rank by this gap (possible
    /// 4-torsion in Sha, or points beyond the search height).
    Gap(u32),
    /// refined bound is *below* the database rank: impossible if both
    /// sides are right.
    HardInconsistency,
    /// sha has nontrivial 2-part, matching (or not) a nonzero pairing
    /// matrix rank.
    ShaExpectation { consistent: bool },
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::BoundSharp => write!(f, "bound sharp: refined bound equals database rank"),
            Verdict::Gap(g) => write!(
                f,
                "gap {g} — possible Sha[4] or insufficient pairing/search"
            ),
            Verdict::HardInconsistency => {
                write!(f, "HARD INCONSISTENCY: bound below database rank (bug signal)")
            }
            Verdict::ShaExpectation { consistent: true } => {
                write!(f, "nontrivial Sha[2] matches nonzero pairing-matrix rank")
            }
            Verdict::ShaExpectation { consistent: false } => {
                write!(f, "warning: Sha 2-part and pairing-matrix rank disagree")
            }
        }
    }
}

/// Compare a computed refined rank bound and pairing-matrix rank with a
/// database record.
pub fn compare(
    refined_rank_bound: u32,
    pairing_matrix_rank: usize,
    record: &ExternalCurveRecord,
) -> Vec<Verdict> {
    let mut verdicts = Vec::new();
    if record.rank < 0 {
        return verdicts;
    }
    let rank = record.rank as u32;
    if refined_rank_bound < rank {
        verdicts.push(Verdict::HardInconsistency);
    } else if refined_rank_bound == rank {
        verdicts.push(Verdict::BoundSharp);
    } else {
        verdicts.push(Verdict::Gap(refined_rank_bound - rank));
    }
    if let Some(sha) = record.sha_order {
        let two_part_nontrivial = sha % 2 == 0;
        // A nontrivial 2-part of Sha should show up as nonzero pairing
        // rank and vice versa; stay silent when both sides are trivial.
        if two_part_nontrivial || pairing_matrix_rank > 0 {
            verdicts.push(Verdict::ShaExpectation {
                consistent: two_part_nontrivial == (pairing_matrix_rank > 0),
            });
        }
    }
    verdicts
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::TempDir;

    fn record(label: &str, rank: i64, sha: Option<u64>) -> ExternalCurveRecord {
        ExternalCurveRecord {
            label: label.to_string(),
            rank,
            sha_order: sha,
            torsion_structure: "[2,2]".to_string(),
            ainvs: None,
            source_url: "fixture".to_string(),
            fetched_at: 0,
        }
    }

    #[test]
    fn offline_empty_cache_is_none() {
        let dir = TempDir::new().unwrap();
        let client = DbClient::new(None, dir.path().to_path_buf(), true);
        assert_eq!(client.lookup(&CurveKey::Label("32.a3".into())), None);
    }

    #[test]
    fn cache_round_trip() {
        let dir = TempDir::new().unwrap();
        let client = DbClient::new(None, dir.path().to_path_buf(), true);
        let key = CurveKey::Coefficients { a: "-1".into(), b: "0".into() };
        let rec = record("32.a3", 0, Some(1));
        client.store(&key, &rec);
        assert_eq!(client.lookup(&key), Some(rec));
    }

    #[test]
    fn malformed_cache_entry_is_none() {
        let dir = TempDir::new().unwrap();
        let client = DbClient::new(None, dir.path().to_path_buf(), true);
        let key = CurveKey::Label("bad".into());
        std::fs::create_dir_all(dir.path()).unwrap();
        std::fs::write(client.cache_path(&key), b"{not json").unwrap();
        assert_eq!(client.lookup(&key), None);
    }

    #[test]
    fn parses_lmfdb_envelope_and_bare_records() {
        let body = r#"{"data": [{"lmfdb_label": "32.a3", "rank": 0, "sha": 1,
                       "ainvs": [0, 0, 0, -1, 0],
                       "torsion_structure": [2, 2]}]}"#;
        let rec = parse_record(body, "test://x").unwrap();
        assert_eq!(rec.label, "32.a3");
        assert_eq!(rec.rank, 0);
        assert_eq!(rec.sha_order, Some(1));
        assert_eq!(
            rec.ainvs,
            Some(["0".into(), "0".into(), "0".into(), "-1".into(), "0".into()])
        );

        let body = r#"{"label": "256.a1", "rank": 1}"#;
        let rec = parse_record(body, "test://y").unwrap();
        assert_eq!((rec.label.as_str(), rec.rank), ("256.a1", 1));

        assert_eq!(parse_record("[]", "test://z"), None);
        assert_eq!(parse_record("not json", "test://w"), None);
    }

    #[test]
    fn compare_verdicts() {
        // bound 0 vs rank 0: sharp.
        assert_eq!(compare(0, 0, &record("x", 0, None)), vec![Verdict::BoundSharp]);
        // bound 1 vs rank 0: gap 1 warning.
        assert_eq!(compare(1, 0, &record("x", 0, None)), vec![Verdict::Gap(1)]);
        // bound 0 vs rank 1: impossible.
        assert_eq!(
            compare(0, 0, &record("x", 1, None)),
            vec![Verdict::HardInconsistency]
        );
        // Sha with nontrivial 2-part expects nonzero matrix rank.
        assert_eq!(
            compare(0, 2, &record("x", 0, Some(4))),
            vec![Verdict::BoundSharp, Verdict::ShaExpectation { consistent: true }]
        );
        assert_eq!(
            compare(0, 0, &record("x", 0, Some(4))),
            vec![Verdict::BoundSharp, Verdict::ShaExpectation { consistent: false }]
        );
        // Trivial 2-part and zero rank: nothing to report.
        assert_eq!(compare(0, 0, &record("x", 0, Some(1))), vec![Verdict::BoundSharp]);
    }

    #[test]
    fn url_building() {
        assert_eq!(
            build_url("https://db.example/api", &CurveKey::Label("32.a3".into())),
            "https://db.example/api?lmfdb_label=32.a3&_format=json"
        );
        assert!(build_url(
            "https://db.example/api?x=1",
            &CurveKey::Coefficients { a: "-36".into(), b: "0".into() }
        )
        .starts_with("https://db.example/api?x=1&ainvs="));
    }
}
