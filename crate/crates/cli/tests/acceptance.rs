//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Every check asserts its criterion as stated; nothing is relaxed to make a
//! line pass.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use tangent_core::batch::{dominance_cells, DOMINANCE_ROWS, RELATION_NS};
use tangent_core::certify::{
    certify_dominance, detect_relation, psi_jacobian, relation_campaign, relation_dims, sample_params, symbolic_outcome,
    trial_rng, CampaignConfig, DominanceConfig, FieldSpec, RelationConfig, DEFAULT_TERM_BUDGET,
};
use tangent_core::oracle::property_suite;
use tangent_core::pipeline::{PipelineError, ProblemDims, SyzygyParams};
use tangent_core::rank::exact_rank;
use tangent_core::reference::{check_matrix_example, compare_cubic, reference_examples, DEFAULT_POINTS};
use tangent_core::scalar::{PrimeField, Rational, Rationals, Ring};

const QUINTIC_LIMIT: Duration = Duration::from_secs(1);
const CUBIC_LIMIT: Duration = Duration::from_secs(10);
const DOMINANCE_GRID_LIMIT: Duration = Duration::from_secs(30 * 60);
const RELATION_LIMIT: Duration = Duration::from_secs(5 * 60);
/// Compounded false-relation bound must be strictly below `10^-40`.
const RELATION_BOUND_EXPONENT: i32 = -40;
const CONTROL_POINTS: usize = 20;
const PROPERTY_CASES: usize = 100;
const PROPERTY_BOUND: i64 = 9;
const SEED: u64 = 1;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn tangent(out_dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tangent"))
        .args(args)
        .env("TANGENT_OUT_DIR", out_dir)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("report written")).expect("valid JSON")
}

fn within(elapsed: Duration, limit: Duration) -> String {
    format!("{:.2}s of {}s allowed", elapsed.as_secs_f64(), limit.as_secs())
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let ex = reference_examples().expect("fixture parses");
    let (report, _) = match check_matrix_example(&ex.quintic_p4) {
        Ok(r) => r,
        Err(e) => return verdict(false, e.to_string()),
    };
    let elapsed = start.elapsed();
    let stages: Vec<String> =
        report.stages.iter().map(|s| format!("{}={}", s.stage, if s.matches { "ok" } else { "mismatch" })).collect();
    verdict(
        report.all_match() && elapsed < QUINTIC_LIMIT,
        format!("epsilon {} [{}], {}", report.epsilon, stages.join(" "), within(elapsed, QUINTIC_LIMIT)),
    )
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let ex = reference_examples().expect("fixture parses").plane_cubic;
    let report = match compare_cubic(&ex, DEFAULT_POINTS, SEED) {
        Ok(r) => r,
        Err(e) => return verdict(false, e.to_string()),
    };
    let dims = ProblemDims::new(ex.n, ex.d).expect("in scope");
    let point = sample_params(dims, &Rationals, &mut trial_rng(SEED, 0), 99);
    let rank = psi_jacobian(&point, &Rationals).map(|j| exact_rank(&j.entries, &Rationals));
    let elapsed = start.elapsed();
    let mismatched: Vec<&str> = report.mismatched().iter().map(|v| v.name.as_str()).collect();
    let entries = report.verdicts.iter().filter(|v| v.name.starts_with('d'));
    let (jac_total, jac_ok) = entries.fold((0, 0), |(t, ok), v| (t + 1, ok + usize::from(v.matches())));
    let pass = mismatched.is_empty() && matches!(rank, Ok(7)) && elapsed < CUBIC_LIMIT;
    verdict(
        pass,
        format!(
            "{}/{} formulas match (Jacobian entries {jac_ok}/{jac_total}); mismatched: [{}]; rank {:?}; {}",
            report.matched(),
            report.verdicts.len(),
            mismatched.join(", "),
            rank,
            within(elapsed, CUBIC_LIMIT)
        ),
    )
}

fn criterion_3(out: &Path) -> Verdict {
    let start = Instant::now();
    let dir = out.join("thm12-a");
    let o = tangent(out, &["reproduce", "--thm", "12", "--seed", &SEED.to_string(), "--out", dir.to_str().unwrap()]);
    let elapsed = start.elapsed();
    let report = read_json(&dir.join("report.json"));
    let cells = report["cells"].as_array().cloned().unwrap_or_default();
    let full = cells
        .iter()
        .filter(|c| c["verdict"] == "dominant-certified" && c["observed_rank"] == c["target_rank"] && c["field"] == "rationals")
        .count();
    let rows: Vec<u64> = report["rows"].as_array().map_or(vec![], |r| r.iter().map(|x| x["cells"].as_u64().unwrap_or(0)).collect());
    let expected_rows: Vec<u64> = DOMINANCE_ROWS.iter().map(|&(_, lo, hi)| (hi - lo + 1) as u64).collect();
    let pass = o.status.code() == Some(0)
        && full == cells.len()
        && cells.len() == dominance_cells().len()
        && rows == vec![23, 14, 7, 3]
        && rows == expected_rows
        && elapsed < DOMINANCE_GRID_LIMIT;
    verdict(
        pass,
        format!(
            "{full}/{} cells full rank over Q, rows {rows:?}, exit {:?}, {}",
            cells.len(),
            o.status.code(),
            within(elapsed, DOMINANCE_GRID_LIMIT)
        ),
    )
}

fn below_ten_to(exact: &str, exponent: i32) -> bool {
    exact.parse::<Rational>().is_ok_and(|v| Rationals.sub(&v, &Rational::from(10).pow(exponent)).is_negative())
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut pass = true;
    for n in RELATION_NS {
        let report = match relation_campaign(&CampaignConfig::new(n, SEED)) {
            Ok(r) => r,
            Err(e) => return verdict(false, format!("n={n}: {e}")),
        };
        let all_rank_one = report.certificates.iter().all(|c| c.ranks.iter().all(|&r| r == 1));
        let primes_ok = report.certificates.iter().filter(|c| matches!(c.field, FieldSpec::Prime(p) if p > 1_000_000)).count() == 2;
        let bound = &report.combined_error_bound;
        let bound_ok = bound.log10_at_most != i64::MIN && below_ten_to(&bound.exact, RELATION_BOUND_EXPONENT);
        let ranks: Vec<String> = report
            .certificates
            .iter()
            .map(|c| {
                let mut r = c.ranks.clone();
                r.dedup();
                format!("{}:{r:?}", if c.field == FieldSpec::Rationals { "Q" } else { "Fp" })
            })
            .collect();
        pass &= all_rank_one && primes_ok && bound_ok;
        lines.push(format!("n={n} ranks {} bound {}", ranks.join(" "), if bound_ok { "below 10^-40" } else { "none (no relation claimed)" }));
    }
    for n in [4, 5] {
        let dims = relation_dims(n).expect("in scope");
        match symbolic_outcome(dims, DEFAULT_TERM_BUDGET, SEED) {
            Ok(o) => {
                pass &= o.status == "all-minors-vanish";
                lines.push(format!("symbolic n={n}: {}", o.status));
            }
            Err(e) => {
                pass = false;
                lines.push(format!("symbolic n={n}: {e}"));
            }
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < RELATION_LIMIT;
    verdict(pass, format!("{}; {}", lines.join("; "), within(elapsed, RELATION_LIMIT)))
}

fn criterion_5() -> Verdict {
    let mut cfg = DominanceConfig::new(4, 5, SEED);
    cfg.trials = CONTROL_POINTS;
    let cert = match certify_dominance(&cfg) {
        Ok(c) => c,
        Err(e) => return verdict(false, e.to_string()),
    };
    let deficient = cert.ranks.len() == CONTROL_POINTS && cert.ranks.iter().all(|&r| r < cert.target_rank);
    let control = detect_relation(&RelationConfig { n: 3, field: FieldSpec::Rationals, seed: SEED, trials: 5, bound: 99, max_degenerate: 16 });
    let control_ranks = control.map(|c| c.ranks).map_err(|e| e.to_string());
    let control_ok = matches!(&control_ranks, Ok(r) if r.iter().all(|&x| x == 2));
    let mut ranks = cert.ranks.clone();
    ranks.dedup();
    verdict(
        deficient && control_ok,
        format!(
            "(4,5): {} points, ranks {ranks:?} < {}; (3,4) relation control ranks {:?}",
            cert.ranks.len(),
            cert.target_rank,
            control_ranks
        ),
    )
}

fn criterion_6() -> Verdict {
    let start = Instant::now();
    let prime = PrimeField::new(2_305_843_009_213_693_951).expect("Mersenne prime");
    let mut cells = dominance_cells();
    cells.extend(RELATION_NS.map(|n| (n, n + 1)));
    let mut failures = Vec::new();
    let mut cases = 0;
    for &(n, d) in &cells {
        let dims = ProblemDims::new(n, d).expect("grid cell in scope");
        let q = Rationals;
        let mut done = 0;
        let mut draw = 0u64;
        while done < PROPERTY_CASES {
            let mut rng = trial_rng(SEED, draw);
            draw += 1;
            let params: SyzygyParams<Rational> = sample_params(dims, &q, &mut rng, PROPERTY_BOUND);
            let direction: Vec<Rational> =
                sample_params(dims, &q, &mut rng, PROPERTY_BOUND).values().to_vec();
            let lambda = Rational::from(2 + (draw % 5) as i64);
            match property_suite(&params, &lambda, &direction, &prime) {
                Ok(report) => {
                    done += 1;
                    if !report.all_passed() {
                        failures.push(format!("({n},{d}) draw {}: {:?}", draw - 1, report.failures()));
                    }
                }
                Err(tangent_core::oracle::OracleError::Pipeline(PipelineError::DegenerateParameters)) => {}
                Err(e) => failures.push(format!("({n},{d}): {e}")),
            }
            if draw > 10 * PROPERTY_CASES as u64 {
                failures.push(format!("({n},{d}): too many degenerate draws"));
                break;
            }
        }
        cases += done;
    }
    verdict(
        failures.is_empty(),
        format!(
            "{} cells x {PROPERTY_CASES} points, {cases} cases, 8 identities each, {} failures{}; {:.1}s",
            cells.len(),
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default(),
            start.elapsed().as_secs_f64()
        ),
    )
}

/// Sets every `timing_ms` field to zero.
fn strip_timing(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(map) => {
            for (k, x) in map.iter_mut() {
                if k == "timing_ms" {
                    *x = 0.into();
                } else {
                    strip_timing(x);
                }
            }
        }
        serde_json::Value::Array(xs) => xs.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn canonical_file(path: &Path) -> String {
    let mut v = read_json(path);
    strip_timing(&mut v);
    serde_json::to_string(&v).expect("serializes")
}

/// Every file under `dir`, JSON with timings zeroed, others verbatim.
fn snapshot(dir: &Path) -> BTreeMap<PathBuf, String> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).into_iter().flatten().flatten() {
            let path = entry.path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let text = if path.extension().is_some_and(|e| e == "json") {
                    canonical_file(&path)
                } else {
                    std::fs::read_to_string(&path).unwrap_or_default()
                };
                out.insert(path.strip_prefix(dir).unwrap().to_path_buf(), text);
            }
        }
    }
    out
}

fn criterion_7(out: &Path) -> Verdict {
    let fixture = format!("{}/fixtures/quintic_p4.json", env!("CARGO_MANIFEST_DIR"));
    let seed = SEED.to_string();
    let runs: Vec<Vec<&str>> = vec![
        vec!["dims", "--n", "5", "--d", "9", "--format", "json"],
        vec!["example", &fixture, "--format", "json"],
        vec!["certify", "--n", "3", "--d", "9", "--seed", &seed, "--trials", "2"],
        vec!["certify", "--n", "4", "--d", "5", "--field", "fp", "--seed", &seed, "--trials", "3"],
        vec!["relations", "--n", "4", "--seed", &seed, "--symbolic"],
        vec!["reproduce", "--thm", "12", "--seed", &seed],
        vec!["reproduce", "--thm", "13", "--seed", &seed],
        vec!["compare", "--example", "quartic", "--seed", &seed, "--format", "json"],
    ];
    let mut differing = Vec::new();
    let mut files = 0;
    for (i, args) in runs.iter().enumerate() {
        let dir = out.join(format!("det-{i}"));
        let first = tangent(&dir, args);
        let written = snapshot(&dir);
        let second = tangent(&dir, args);
        let label = args[..2].join(" ");
        if first.stdout != second.stdout || first.status.code() != second.status.code() {
            differing.push(format!("{label}: output"));
        }
        let rewritten = snapshot(&dir);
        files += written.len();
        if written != rewritten {
            differing.push(format!("{label}: files"));
        }
    }
    verdict(
        differing.is_empty(),
        format!("{} commands run twice, {files} files compared, differences: [{}]", runs.len(), differing.join(", ")),
    )
}

fn main() {
    let out = tempfile::tempdir().expect("temp dir");
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict>)> = vec![
        ("quintic example regression", Box::new(criterion_1)),
        ("plane cubic regression", Box::new(criterion_2)),
        ("dominance grid reproduction", Box::new(|| criterion_3(out.path()))),
        ("first-order relation reproduction", Box::new(criterion_4)),
        ("negative controls", Box::new(criterion_5)),
        ("property suites", Box::new(criterion_6)),
        ("determinism", Box::new(|| criterion_7(out.path()))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        failed += usize::from(!v.pass);
        println!(
            "criterion {} {:<36} {} ({:.2}s) {}",
            i + 1,
            name,
            if v.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
