//! Grid runs: one certificate per `(n, d)` cell, plus a summary.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{
    certify_dominance, relation_campaign, relation_dims, symbolic_outcome, CampaignConfig, Certificate, CertifyError,
    DominanceConfig, FieldSpec, RelationReport, Verdict, DEFAULT_TERM_BUDGET, SCHEMA_VERSION,
};

/// Cells where dominance is claimed: `(n, d_min..=d_max)`.
pub const DOMINANCE_ROWS: [(usize, usize, usize); 4] = [(2, 3, 25), (3, 4, 17), (4, 6, 12), (5, 7, 9)];

/// `n` for which a first-order relation is claimed at `d = n + 1`.
pub const RELATION_NS: std::ops::RangeInclusive<usize> = 4..=8;

pub fn dominance_cells() -> Vec<(usize, usize)> {
    DOMINANCE_ROWS.iter().flat_map(|&(n, lo, hi)| (lo..=hi).map(move |d| (n, d))).collect()
}

/// Batch settings; every field has a default so a config file may be partial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BatchConfig {
    pub seed: u64,
    /// Points per dominance cell before giving up on full rank.
    pub trials: usize,
    pub bound: i64,
    /// Worker threads; `None` uses the available cores.
    pub parallelism: Option<usize>,
    /// Fields for dominance cells: `"q"` or a prime as a decimal string.
    pub fields: Vec<String>,
    pub prime_trials: usize,
    pub rational_trials: usize,
    /// Largest `n` given a symbolic minor check in relation runs.
    pub symbolic_max_n: usize,
    pub term_budget: usize,
}

impl Default for BatchConfig {
    fn default() -> Self {
        BatchConfig {
            seed: 1,
            trials: 3,
            bound: 99,
            parallelism: None,
            fields: vec!["q".into()],
            prime_trials: 20,
            rational_trials: 5,
            symbolic_max_n: 5,
            term_budget: DEFAULT_TERM_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BatchError {
    #[error("unknown field `{0}`; use `q` or a prime")]
    BadField(String),
    #[error("cannot build worker pool: {0}")]
    Pool(String),
}

pub fn parse_field(text: &str) -> Result<FieldSpec, BatchError> {
    match text.trim().to_ascii_lowercase().as_str() {
        "q" | "rationals" => Ok(FieldSpec::Rationals),
        other => other
            .parse::<u64>()
            .ok()
            .filter(|&p| crate::scalar::is_prime_u64(p) && p < (1 << 63))
            .map(FieldSpec::Prime)
            .ok_or_else(|| BatchError::BadField(text.into())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellStatus {
    AsExpected,
    VerdictDiffers,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub n: usize,
    pub d: usize,
    pub field: FieldSpec,
    pub expected: Verdict,
    pub verdict: Option<Verdict>,
    pub observed_rank: Option<usize>,
    pub target_rank: Option<usize>,
    pub status: CellStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowCount {
    pub n: usize,
    pub cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub schema_version: u32,
    pub kind: String,
    pub config: BatchConfig,
    pub cell_count: usize,
    pub rows: Vec<RowCount>,
    pub cells: Vec<CellResult>,
    pub all_as_expected: bool,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub certificates: Vec<Certificate>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub relation_reports: Vec<RelationReport>,
}

impl BatchReport {
    /// JSON with every timing field zeroed.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        for c in &mut r.certificates {
            c.timing_ms = 0;
        }
        for rep in &mut r.relation_reports {
            for c in &mut rep.certificates {
                c.timing_ms = 0;
            }
            if let Some(s) = &mut rep.symbolic {
                s.timing_ms = 0;
            }
        }
        serde_json::to_string_pretty(&r).expect("reports serialize")
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("n,d,field,expected,verdict,observed_rank,target_rank,status\n");
        for c in &self.cells {
            let opt = |v: Option<usize>| v.map_or(String::new(), |x| x.to_string());
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                c.n,
                c.d,
                c.field,
                c.expected,
                c.verdict.map_or("error".into(), |v| v.to_string()),
                opt(c.observed_rank),
                opt(c.target_rank),
                match c.status {
                    CellStatus::AsExpected => "as-expected",
                    CellStatus::VerdictDiffers => "verdict-differs",
                    CellStatus::Error => "error",
                }
            ));
        }
        out
    }
}

fn pool(cfg: &BatchConfig, cells: usize) -> Result<rayon::ThreadPool, BatchError> {
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let threads = cfg.parallelism.unwrap_or(cores).clamp(1, cells.max(1));
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| BatchError::Pool(e.to_string()))
}

fn row_counts(cells: &[(usize, usize)]) -> Vec<RowCount> {
    let mut rows: Vec<RowCount> = Vec::new();
    for &(n, _) in cells {
        match rows.last_mut() {
            Some(r) if r.n == n => r.cells += 1,
            _ => rows.push(RowCount { n, cells: 1 }),
        }
    }
    rows
}

fn cell_result(n: usize, d: usize, field: FieldSpec, expected: Verdict, res: &Result<Certificate, CertifyError>) -> CellResult {
    match res {
        Ok(c) => CellResult {
            n,
            d,
            field,
            expected,
            verdict: Some(c.verdict),
            observed_rank: Some(c.observed_rank),
            target_rank: Some(c.target_rank),
            status: if c.verdict == expected { CellStatus::AsExpected } else { CellStatus::VerdictDiffers },
            error: None,
        },
        Err(e) => CellResult {
            n,
            d,
            field,
            expected,
            verdict: None,
            observed_rank: None,
            target_rank: None,
            status: CellStatus::Error,
            error: Some(e.to_string()),
        },
    }
}

/// Certifies dominance on the listed cells, each with its own seed-derived randomness.
pub fn run_dominance_grid(cfg: &BatchConfig, cells: &[(usize, usize)]) -> Result<BatchReport, BatchError> {
    let fields = cfg.fields.iter().map(|f| parse_field(f)).collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(usize, usize, FieldSpec)> =
        fields.iter().flat_map(|&f| cells.iter().map(move |&(n, d)| (n, d, f))).collect();
    let results: Vec<Result<Certificate, CertifyError>> = pool(cfg, jobs.len())?.install(|| {
        jobs.par_iter()
            .map(|&(n, d, field)| {
                certify_dominance(&DominanceConfig {
                    n,
                    d,
                    field,
                    seed: cfg.seed,
                    trials: cfg.trials,
                    bound: cfg.bound,
                    max_degenerate: 16,
                    battery: true,
                })
            })
            .collect()
    });
    let cell_results: Vec<CellResult> = jobs
        .iter()
        .zip(&results)
        .map(|(&(n, d, f), r)| cell_result(n, d, f, Verdict::DominantCertified, r))
        .collect();
    let all = cell_results.iter().all(|c| c.status == CellStatus::AsExpected);
    Ok(BatchReport {
        schema_version: SCHEMA_VERSION,
        kind: "dominance-grid".into(),
        config: cfg.clone(),
        cell_count: jobs.len(),
        rows: row_counts(cells),
        cells: cell_results,
        all_as_expected: all,
        certificates: results.into_iter().filter_map(Result::ok).collect(),
        relation_reports: Vec::new(),
    })
}

/// Relation campaigns for each `n`, with a symbolic check where `n` is small.
pub fn run_relation_grid(cfg: &BatchConfig, ns: &[usize]) -> Result<BatchReport, BatchError> {
    let results: Vec<Result<RelationReport, CertifyError>> = pool(cfg, ns.len())?.install(|| {
        ns.par_iter()
            .map(|&n| {
                let mut report = relation_campaign(&CampaignConfig {
                    n,
                    seed: cfg.seed,
                    prime_trials: cfg.prime_trials,
                    rational_trials: cfg.rational_trials,
                    bound: cfg.bound,
                    primes: None,
                })?;
                if n <= cfg.symbolic_max_n {
                    report.symbolic = Some(symbolic_outcome(relation_dims(n)?, cfg.term_budget, cfg.seed)?);
                }
                Ok(report)
            })
            .collect()
    });
    let mut cells = Vec::new();
    for (&n, r) in ns.iter().zip(&results) {
        let d = n + 1;
        let expected = Verdict::RelationDetected;
        cells.push(match r {
            Ok(rep) => CellResult {
                n,
                d,
                field: FieldSpec::Rationals,
                expected,
                verdict: Some(rep.verdict),
                observed_rank: rep.certificates.iter().map(|c| c.observed_rank).max(),
                target_rank: Some(1),
                status: if rep.verdict == expected { CellStatus::AsExpected } else { CellStatus::VerdictDiffers },
                error: None,
            },
            Err(e) => CellResult {
                n,
                d,
                field: FieldSpec::Rationals,
                expected,
                verdict: None,
                observed_rank: None,
                target_rank: None,
                status: CellStatus::Error,
                error: Some(e.to_string()),
            },
        });
    }
    let all = cells.iter().all(|c| c.status == CellStatus::AsExpected);
    let pairs: Vec<(usize, usize)> = ns.iter().map(|&n| (n, n + 1)).collect();
    Ok(BatchReport {
        schema_version: SCHEMA_VERSION,
        kind: "relation-grid".into(),
        config: cfg.clone(),
        cell_count: ns.len(),
        rows: row_counts(&pairs),
        cells,
        all_as_expected: all,
        certificates: Vec::new(),
        relation_reports: results.into_iter().filter_map(Result::ok).collect(),
    })
}
