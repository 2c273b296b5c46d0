//! Pipeline front end: parse a curve, run the complete 2-descent,
//! evaluate the Cassels-Tate pairing matrix, derive rank bounds, and
//! assemble a reproducible report (text or JSON).

use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use ctp_core::ctp::{pairing_matrix, MatrixOptions, PairingMatrix};
use ctp_core::curve::{descent_image, point_search, CurvePoint, SplitCurve, SquareClassTriple};
use ctp_core::numth::{Place, PRECISION_CAP};
use ctp_core::selmer::compute_selmer;
use ctp_core::Error as CoreError;

pub use ctp_lmfdb::{compare, CurveKey, DbClient, ExternalCurveRecord, Verdict};

/// How the curve is specified on the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveInput {
    /// Three rational roots "r1,r2,r3" of the right-hand side.
    Roots(String),
    /// Coefficients "A,B" of y² = x³ + Ax + B.
    Coefficients(String),
    /// A database label, resolved through the (cached) database client.
    Label(String),
}

/// One full pipeline configuration. Exactly one curve-input source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input: CurveInput,
    pub height_bound: u64,
    pub precision_cap: u32,
    pub seed: u64,
    pub verify: bool,
    pub extra_places: Vec<u64>,
    pub offline: bool,
    pub database: bool,
}

impl RunConfig {
    pub fn new(input: CurveInput) -> RunConfig {
        RunConfig {
            input,
            height_bound: 1000,
            precision_cap: PRECISION_CAP,
            seed: 0,
            verify: false,
            extra_places: Vec::new(),
            offline: false,
            database: true,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CurveSection {
    pub e1: String,
    pub e2: String,
    pub e3: String,
    pub a: String,
    pub b: String,
    pub disc: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SelmerSection {
    pub dim: usize,
    pub basis: Vec<[String; 3]>,
    pub torsion_image: Vec<[String; 3]>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PairingSection {
    pub matrix_bits: Vec<Vec<u8>>,
    pub matrix_signs: Vec<Vec<i8>>,
    pub kernel_basis: Vec<Vec<u8>>,
    pub kernel_dim: usize,
    pub f2_rank: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BoundsSection {
    pub naive: u32,
    pub refined: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LocalLogEntry {
    pub place: String,
    pub element_pair: [usize; 2],
    pub factor: i8,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DatabaseSection {
    pub label: String,
    pub rank: i64,
    pub sha_order: Option<u64>,
    pub verdicts: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct Timings {
    pub total_ms: u128,
    pub selmer_ms: u128,
    pub pairing_ms: u128,
    pub point_search_ms: u128,
}

/// The full result of a run. Serializes to the stable JSON schema; all
/// big integers are decimal strings. `timings` is excluded from the
/// determinism contract (see [`Report::canonical_json`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub curve: CurveSection,
    pub selmer: SelmerSection,
    pub pairing: PairingSection,
    pub bounds: BoundsSection,
    /// Rational points found by search: `null` is the point at
    /// infinity, otherwise `[x, y]` as exact rationals.
    pub points: Vec<Option<[String; 2]>>,
    pub local_log: Vec<LocalLogEntry>,
    pub database: Option<DatabaseSection>,
    pub config: RunConfig,
    pub version: String,
    pub timings: Option<Timings>,
}

impl Report {
    /// Deterministic serialization: identical seed and config yield
    /// byte-identical output (timings stripped).
    pub fn canonical_json(&self) -> String {
        let mut stripped = self.clone();
        stripped.timings = None;
        serde_json::to_string_pretty(&stripped).expect("report serializes")
    }

    pub fn full_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn parse_rational(s: &str) -> Result<BigRational, CoreError> {
    BigRational::from_str(s.trim())
        .or_else(|_| BigInt::from_str(s.trim()).map(BigRational::from))
        .map_err(|_| CoreError::Inconsistency(format!("cannot parse rational '{s}'")))
}

fn parse_list(s: &str, expected: usize) -> Result<Vec<BigRational>, CoreError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != expected {
        return Err(CoreError::Inconsistency(format!(
            "expected {expected} comma-separated values in '{s}'"
        )));
    }
    parts.into_iter().map(parse_rational).collect()
}

/// Resolve the configured curve input to a normalized split curve.
pub fn resolve_curve(config: &RunConfig, db: &DbClient) -> Result<SplitCurve, CoreError> {
    match &config.input {
        CurveInput::Roots(s) => {
            let r = parse_list(s, 3)?;
            SplitCurve::from_roots(&r[0], &r[1], &r[2])
        }
        CurveInput::Coefficients(s) => {
            let c = parse_list(s, 2)?;
            SplitCurve::from_coefficients(&c[0], &c[1])
        }
        CurveInput::Label(label) => {
            let rec = db.lookup(&CurveKey::Label(label.clone())).ok_or_else(|| {
                CoreError::Inconsistency(format!(
                    "label '{label}' not found in cache{}",
                    if config.offline { " (offline)" } else { " or database" }
                ))
            })?;
            let ainvs = rec.ainvs.as_ref().ok_or_else(|| {
                CoreError::Inconsistency(format!(
                    "record for '{label}' carries no a-invariants; run with --roots or --coeffs"
                ))
            })?;
            let v: Vec<BigRational> = ainvs
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<_, _>>()?;
            let (a1, a2, a3, a4, a6) = (&v[0], &v[1], &v[2], &v[3], &v[4]);
            // Standard short-Weierstrass model: y² = x³ − 27c₄x − 54c₆.
            let four = BigRational::from(BigInt::from(4));
            let b2 = a1 * a1 + &four * a2;
            let b4 = BigRational::from(BigInt::from(2)) * a4 + a1 * a3;
            let b6 = a3 * a3 + &four * a6;
            let c4 = &b2 * &b2 - BigRational::from(BigInt::from(24)) * &b4;
            let c6 = -(&b2 * &b2 * &b2) + BigRational::from(BigInt::from(36)) * &b2 * &b4
                - BigRational::from(BigInt::from(216)) * &b6;
            let a = -BigRational::from(BigInt::from(27)) * c4;
            let b = -BigRational::from(BigInt::from(54)) * c6;
            SplitCurve::from_coefficients(&a, &b)
        }
    }
}

fn triple_strings(t: &SquareClassTriple) -> [String; 3] {
    [
        t.get(0).rep().to_string(),
        t.get(1).rep().to_string(),
        t.get(2).rep().to_string(),
    ]
}

fn point_strings(p: &CurvePoint<ctp_core::curve::field::Rationals>) -> Option<[String; 2]> {
    match p {
        CurvePoint::Infinity => None,
        CurvePoint::Affine { x, y } => Some([x.to_string(), y.to_string()]),
    }
}

fn place_string(v: &Place) -> String {
    v.to_string()
}

/// Run the full pipeline for one configuration.
pub fn run(config: &RunConfig) -> Result<Report, CoreError> {
    let db = DbClient::from_env();
    run_with_db(config, &db)
}

pub fn run_with_db(config: &RunConfig, db: &DbClient) -> Result<Report, CoreError> {
    let t_total = Instant::now();
    let curve = resolve_curve(config, db)?;

    let t_selmer = Instant::now();
    let selmer = compute_selmer(&curve)?;
    let selmer_ms = t_selmer.elapsed().as_millis();

    let t_points = Instant::now();
    let points = point_search(&curve, config.height_bound);
    let point_search_ms = t_points.elapsed().as_millis();

    let t_pairing = Instant::now();
    let opts = MatrixOptions {
        seed: config.seed,
        extra_places: config.extra_places.clone(),
        verify: config.verify,
        precision_cap: config.precision_cap.min(PRECISION_CAP),
        ..MatrixOptions::default()
    };
    let matrix = pairing_matrix(&selmer, &opts)?;
    let pairing_ms = t_pairing.elapsed().as_millis();

    // Report invariants: structure checks before emission, and the
    // kernel must contain the image of every point found.
    matrix.check_structure()?;
    for p in &points {
        let img = descent_image(&curve, p);
        match matrix.kernel_contains(&selmer, &img) {
            Some(true) => {}
            Some(false) => {
                return Err(CoreError::Inconsistency(format!(
                    "kernel misses the image {img} of a rational point"
                )))
            }
            None => {
                return Err(CoreError::Inconsistency(format!(
                    "image {img} of a rational point is outside the Selmer group"
                )))
            }
        }
    }

    let database = lookup_database(config, db, &curve, &matrix);

    let report = Report {
        curve: CurveSection {
            e1: curve.root(0).to_string(),
            e2: curve.root(1).to_string(),
            e3: curve.root(2).to_string(),
            a: curve.a().to_string(),
            b: curve.b().to_string(),
            disc: curve.disc().to_string(),
        },
        selmer: SelmerSection {
            dim: selmer.dim(),
            basis: selmer.basis().iter().map(triple_strings).collect(),
            torsion_image: selmer.torsion_image().iter().map(triple_strings).collect(),
        },
        pairing: PairingSection {
            matrix_bits: (0..matrix.dim())
                .map(|r| (0..matrix.dim()).map(|c| matrix.bit(r, c) as u8).collect())
                .collect(),
            matrix_signs: (0..matrix.dim())
                .map(|r| (0..matrix.dim()).map(|c| matrix.sign(r, c)).collect())
                .collect(),
            kernel_basis: matrix
                .kernel_basis()
                .iter()
                .map(|v| v.iter().map(|&b| b as u8).collect())
                .collect(),
            kernel_dim: matrix.kernel_dim(),
            f2_rank: matrix.f2_rank(),
        },
        bounds: BoundsSection {
            naive: matrix.naive_rank_bound(),
            refined: matrix.refined_rank_bound(),
        },
        points: points.iter().map(point_strings).collect(),
        local_log: matrix
            .local_log()
            .iter()
            .map(|r| LocalLogEntry {
                place: place_string(&r.place),
                element_pair: [r.row, r.col],
                factor: r.factor,
            })
            .collect(),
        database,
        config: config.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        timings: Some(Timings {
            total_ms: t_total.elapsed().as_millis(),
            selmer_ms,
            pairing_ms,
            point_search_ms,
        }),
    };
    debug_assert!(report.bounds.refined <= report.bounds.naive);
    Ok(report)
}

fn lookup_database(
    config: &RunConfig,
    db: &DbClient,
    curve: &SplitCurve,
    matrix: &PairingMatrix,
) -> Option<DatabaseSection> {
    if !config.database {
        return None;
    }
    let key = CurveKey::Coefficients {
        a: curve.a().to_string(),
        b: curve.b().to_string(),
    };
    let record = db.lookup(&key)?;
    let verdicts = compare(matrix.refined_rank_bound(), matrix.f2_rank(), &record);
    Some(DatabaseSection {
        label: record.label.clone(),
        rank: record.rank,
        sha_order: record.sha_order,
        verdicts: verdicts.iter().map(|v| v.to_string()).collect(),
    })
}

/// Human-readable report rendering.
pub fn render_text(report: &Report) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let c = &report.curve;
    writeln!(out, "curve: y² = (x − {})(x − {})(x − {})", c.e1, c.e2, c.e3).unwrap();
    writeln!(out, "       = x³ + ({})x + ({}),  disc(f) = {}", c.a, c.b, c.disc).unwrap();
    writeln!(out, "2-Selmer dimension: {}", report.selmer.dim).unwrap();
    for (i, b) in report.selmer.basis.iter().enumerate() {
        writeln!(out, "  basis[{i}] = ({}, {}, {})", b[0], b[1], b[2]).unwrap();
    }
    writeln!(out, "pairing matrix (bits):").unwrap();
    for row in &report.pairing.matrix_bits {
        writeln!(
            out,
            "  [{}]",
            row.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ")
        )
        .unwrap();
    }
    writeln!(
        out,
        "F₂-rank {}, kernel dimension {}",
        report.pairing.f2_rank, report.pairing.kernel_dim
    )
    .unwrap();
    writeln!(
        out,
        "rank bounds: naive (Selmer) ≤ {}, refined (pairing) ≤ {}",
        report.bounds.naive, report.bounds.refined
    )
    .unwrap();
    let affine = report.points.iter().filter(|p| p.is_some()).count();
    writeln!(
        out,
        "points found (height ≤ {}): {} affine + infinity",
        report.config.height_bound, affine
    )
    .unwrap();
    if let Some(db) = &report.database {
        writeln!(out, "database: {} (rank {})", db.label, db.rank).unwrap();
        for v in &db.verdicts {
            writeln!(out, "  {v}").unwrap();
        }
    }
    if let Some(t) = &report.timings {
        writeln!(
            out,
            "timings: total {} ms (selmer {}, pairing {}, points {})",
            t.total_ms, t.selmer_ms, t.pairing_ms, t.point_search_ms
        )
        .unwrap();
    }
    writeln!(out, "seed: {}  version: {}", report.config.seed, report.version).unwrap();
    out
}
