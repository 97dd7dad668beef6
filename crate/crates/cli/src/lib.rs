//! The `tangent` command line: subcommands, output files and exit codes.
//!
//! Exit codes: 0 when the computed verdict is the expected one, 2 when the
//! mathematics disagrees (rank deficit, no relation, degenerate points),
//! 3 for bad input, 4 when an internal invariant breaks.

use std::io::Read as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tangent_core::batch::{dominance_cells, run_dominance_grid, run_relation_grid, BatchConfig, BatchError, RELATION_NS};
use tangent_core::certify::{
    certify_dominance, detect_relation, random_prime, relation_campaign, relation_dims, symbolic_outcome,
    CampaignConfig, CertifyError, DominanceConfig, FieldSpec, RelationConfig, Verdict, DEFAULT_TERM_BUDGET,
};
use tangent_core::oracle::identity_battery;
use tangent_core::pipeline::{run_pipeline, ParamsFile, PipelineError, ProblemDims};
use tangent_core::reference::{check_matrix_example, compare_cubic, compare_quartic, reference_examples, ReferenceError, DEFAULT_POINTS};
use tangent_core::scalar::{Rationals, ScalarError};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "TANGENT_OUT_DIR";
const FALLBACK_OUT_DIR: &str = "tangent-out";

#[derive(Debug, Parser)]
#[command(name = "tangent", version, about = "Exact dominance certificates for the syzygy-to-morphism map")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    /// The rationals.
    Q,
    /// A prime field; see `--prime`.
    Fp,
    /// Two random primes and the rationals (relations only).
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleId {
    /// Plane cubic, `n = 2, d = 3`.
    #[value(alias = "4.2")]
    PlaneCubic,
    /// Quartic in the plane, `n = 2, d = 4`.
    #[value(alias = "3.2")]
    Quartic,
    /// Quintic in `P^4`, fully numeric.
    #[value(alias = "3.1")]
    Quintic,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the integer bookkeeping for (n, d).
    Dims {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run the pipeline on a parameter file (`-` reads standard input).
    Example {
        params: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Certify dominance by an exact full-rank Jacobian at a random point.
    Certify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value = "q")]
        field: FieldArg,
        /// Prime for `--field fp`; drawn from the seed when absent.
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 99)]
        bound: i64,
        #[arg(long)]
        no_battery: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look for a first-order relation among the F components at d = n + 1.
    Relations {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "all")]
        field: FieldArg,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Trials per prime (and per run for a single field).
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 5)]
        rational_trials: usize,
        #[arg(long, default_value_t = 99)]
        bound: i64,
        /// Also expand the 2x2 minors over parameter polynomials.
        #[arg(long)]
        symbolic: bool,
        #[arg(long, default_value_t = DEFAULT_TERM_BUDGET)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run a whole grid: `12` for dominance, `13` for relations.
    Reproduce {
        #[arg(long, value_parser = ["12", "13"])]
        thm: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare transcribed reference formulas with the computation.
    Compare {
        #[arg(long, value_enum, default_value = "plane-cubic")]
        example: ExampleId,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Math(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Math(_) => 2,
            CliError::Input(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::DegenerateParameters => CliError::Math(e.to_string()),
            PipelineError::OutOfScope { .. } | PipelineError::DimensionMismatch(_) | PipelineError::Scalar(_) => {
                CliError::Input(e.to_string())
            }
            PipelineError::InconsistentDiagram(_) | PipelineError::Matrix(_) | PipelineError::Poly(_) => {
                CliError::Internal(e.to_string())
            }
        }
    }
}

impl From<CertifyError> for CliError {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::AllTrialsDegenerate { .. } => CliError::Math(e.to_string()),
            CertifyError::RelationOutOfScope(_) | CertifyError::Scalar(_) => CliError::Input(e.to_string()),
            CertifyError::Pipeline(p) => p.into(),
        }
    }
}

impl From<ScalarError> for CliError {
    fn from(e: ScalarError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<BatchError> for CliError {
    fn from(e: BatchError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ReferenceError> for CliError {
    fn from(e: ReferenceError) -> Self {
        match e {
            ReferenceError::Pipeline(p) => p.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

/// What a successful command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    /// Whether the verdict is the expected one (exit 0) or not (exit 2).
    pub as_expected: bool,
    pub written: Vec<PathBuf>,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, as_expected: true, written: Vec::new() }
    }

    pub fn exit_code(&self) -> i32 {
        if self.as_expected {
            0
        } else {
            2
        }
    }
}

pub fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from(FALLBACK_OUT_DIR), PathBuf::from)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("outputs serialize") + "\n"
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Dims { n, d, format } => cmd_dims(n, d, format),
        Command::Example { params, format } => cmd_example(&params, format),
        Command::Certify { n, d, field, prime, seed, trials, bound, no_battery, out } => {
            let field = resolve_field(field, prime, seed)?;
            let cfg = DominanceConfig { n, d, field, seed, trials, bound, max_degenerate: 16, battery: !no_battery };
            cmd_certify(&cfg, out)
        }
        Command::Relations { n, field, prime, seed, trials, rational_trials, bound, symbolic, budget, out } => {
            cmd_relations(RelationArgs { n, field, prime, seed, trials, rational_trials, bound, symbolic, budget }, out)
        }
        Command::Reproduce { thm, config, out, seed } => cmd_reproduce(&thm, config.as_deref(), out, seed),
        Command::Compare { example, points, seed, format } => cmd_compare(example, points, seed, format),
    }
}

fn resolve_field(field: FieldArg, prime: Option<u64>, seed: u64) -> Result<FieldSpec, CliError> {
    match (field, prime) {
        (FieldArg::Q, None) => Ok(FieldSpec::Rationals),
        (FieldArg::Q, Some(_)) => Err(CliError::Input("--prime needs --field fp".into())),
        (FieldArg::Fp, Some(p)) => {
            tangent_core::scalar::PrimeField::new(p)?;
            Ok(FieldSpec::Prime(p))
        }
        (FieldArg::Fp, None) => Ok(FieldSpec::Prime(random_prime(seed, 0))),
        (FieldArg::All, _) => Err(CliError::Input("--field all applies to `relations` only".into())),
    }
}

fn cmd_dims(n: usize, d: usize, format: Format) -> Result<Outcome, CliError> {
    let dims = ProblemDims::new(n, d)?;
    let diff = dims.domain_dim - dims.codomain_dim;
    Ok(Outcome::ok(match format {
        Format::Text => format!(
            "n={} d={} q={} a={} b={} dom={} codom={} diff={}\n",
            dims.n, dims.d, dims.q, dims.a, dims.b, dims.domain_dim, dims.codomain_dim, diff
        ),
        Format::Json => to_json(&serde_json::json!({ "dims": dims, "diff": diff })),
    }))
}

fn read_params(path: &Path) -> Result<ParamsFile, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("parse error in {}: {e}", path.display())))
}

fn cmd_example(path: &Path, format: Format) -> Result<Outcome, CliError> {
    let file = read_params(path)?;
    let params = file.to_params()?;
    let dims = *params.dims();
    let q = Rationals;
    let trace = run_pipeline(&params, &q)?;
    let battery = identity_battery(&params, &q);
    if !battery.all_passed() {
        return Err(CliError::Internal(format!("identity battery failed: {:?}", battery.failures())));
    }
    let render_vec = |v: &[tangent_core::homog::HomogPoly<_>]| v.iter().map(|p| p.render(&q)).collect::<Vec<_>>();
    let out = match format {
        Format::Json => to_json(&serde_json::json!({
            "dims": dims,
            "lp": trace.lp.render(&q),
            "g": render_vec(&trace.curve.g),
            "jacobian": trace.jacobian.render(&q),
            "lp_j": trace.lp_j.render(&q),
            "f": render_vec(&trace.fh.f),
            "h": render_vec(&trace.fh.h),
            "identity_battery": battery,
        })),
        Format::Text => {
            let mut s = format!("n={} d={} q={} a={} b={}\n", dims.n, dims.d, dims.q, dims.a, dims.b);
            let block = |s: &mut String, title: &str, rows: Vec<Vec<String>>| {
                s.push_str(&format!("\n{title}:\n"));
                for row in rows {
                    s.push_str(&format!("  [ {} ]\n", row.join(" | ")));
                }
            };
            block(&mut s, "LP", trace.lp.render(&q));
            block(&mut s, "G", vec![render_vec(&trace.curve.g)]);
            block(&mut s, "J", trace.jacobian.render(&q));
            block(&mut s, "LP*J", trace.lp_j.render(&q));
            s.push_str("\nFH:\n");
            for (k, f) in trace.fh.f.iter().enumerate() {
                s.push_str(&format!("  F_{} = {}\n", k + 1, f.render(&q)));
            }
            for (k, h) in trace.fh.h.iter().enumerate() {
                s.push_str(&format!("  H_{} = {}\n", k + 1, h.render(&q)));
            }
            s.push_str("\nidentities: all passed\n");
            s
        }
    };
    Ok(Outcome::ok(out))
}

fn cmd_certify(cfg: &DominanceConfig, out: Option<PathBuf>) -> Result<Outcome, CliError> {
    let cert = certify_dominance(cfg)?;
    if let Some(b) = &cert.identity_battery {
        if !b.all_passed() {
            return Err(CliError::Internal(format!("identity battery failed: {:?}", b.failures())));
        }
    }
    let path = out.unwrap_or_else(|| {
        default_out_dir().join(format!("certify_n{}_d{}_{}_seed{}.json", cfg.n, cfg.d, cert.field, cfg.seed))
    });
    write_file(&path, &to_json(&cert))?;
    let stdout = format!(
        "n={} d={} field={} rank {}/{} {} -> {}\n",
        cert.n,
        cert.d,
        cert.field,
        cert.observed_rank,
        cert.target_rank,
        cert.verdict,
        path.display()
    );
    Ok(Outcome { stdout, as_expected: cert.verdict == Verdict::DominantCertified, written: vec![path] })
}

struct RelationArgs {
    n: usize,
    field: FieldArg,
    prime: Option<u64>,
    seed: u64,
    trials: usize,
    rational_trials: usize,
    bound: i64,
    symbolic: bool,
    budget: usize,
}

fn cmd_relations(a: RelationArgs, out: Option<PathBuf>) -> Result<Outcome, CliError> {
    let dims = relation_dims(a.n)?;
    let path = out.unwrap_or_else(|| default_out_dir().join(format!("relations_n{}_seed{}.json", a.n, a.seed)));
    let mut stdout = String::new();
    let (verdict, json) = if a.field == FieldArg::All {
        let primes = match a.prime {
            Some(_) => return Err(CliError::Input("--prime needs --field fp".into())),
            None => None,
        };
        let mut report = relation_campaign(&CampaignConfig {
            n: a.n,
            seed: a.seed,
            prime_trials: a.trials,
            rational_trials: a.rational_trials,
            bound: a.bound,
            primes,
        })?;
        if a.symbolic {
            report.symbolic = Some(symbolic_outcome(dims, a.budget, a.seed)?);
        }
        for c in &report.certificates {
            stdout.push_str(&format!("  {}: ranks {:?} {}\n", c.field, c.ranks, c.verdict));
        }
        let bound = &report.combined_error_bound;
        if bound.log10_at_most == i64::MIN {
            stdout.push_str("combined error bound: 0 (exact witness)\n");
        } else {
            stdout.push_str(&format!("combined error bound: {} (<= 10^{})\n", bound.exact, bound.log10_at_most));
        }
        (report.verdict, to_json(&report))
    } else {
        let field = resolve_field(a.field, a.prime, a.seed)?;
        let trials = if field == FieldSpec::Rationals { a.rational_trials } else { a.trials };
        let cert = detect_relation(&RelationConfig { n: a.n, field, seed: a.seed, trials, bound: a.bound, max_degenerate: 16 })?;
        stdout.push_str(&format!("  {}: ranks {:?} {}\n", cert.field, cert.ranks, cert.verdict));
        let mut value = serde_json::to_value(&cert).expect("certificates serialize");
        if a.symbolic {
            let sym = symbolic_outcome(dims, a.budget, a.seed)?;
            value["symbolic"] = serde_json::to_value(&sym).expect("outcomes serialize");
        }
        (cert.verdict, to_json(&value))
    };
    if a.symbolic {
        let parsed: serde_json::Value = serde_json::from_str(&json).expect("just serialized");
        stdout.push_str(&format!(
            "symbolic: {} ({})\n",
            parsed["symbolic"]["status"].as_str().unwrap_or("?"),
            parsed["symbolic"]["detail"].as_str().unwrap_or("")
        ));
    }
    write_file(&path, &json)?;
    let header = format!("n={} d={} {} -> {}\n", dims.n, dims.d, verdict, path.display());
    Ok(Outcome { stdout: header + &stdout, as_expected: verdict == Verdict::RelationDetected, written: vec![path] })
}

fn cmd_reproduce(thm: &str, config: Option<&Path>, out: Option<PathBuf>, seed: Option<u64>) -> Result<Outcome, CliError> {
    let mut cfg: BatchConfig = match config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::Input(format!("parse error in {}: {e}", p.display())))?
        }
        None => BatchConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let report = match thm {
        "12" => run_dominance_grid(&cfg, &dominance_cells())?,
        "13" => run_relation_grid(&cfg, &RELATION_NS.collect::<Vec<_>>())?,
        other => return Err(CliError::Input(format!("unknown --thm {other}"))),
    };
    let dir = out.unwrap_or_else(|| default_out_dir().join(&report.kind));
    let json_path = dir.join("report.json");
    let csv_path = dir.join("summary.csv");
    write_file(&json_path, &to_json(&report))?;
    write_file(&csv_path, &report.csv())?;
    let differing = report.cells.iter().filter(|c| c.status != tangent_core::batch::CellStatus::AsExpected).count();
    let rows: Vec<String> = report.rows.iter().map(|r| format!("n={}: {}", r.n, r.cells)).collect();
    let mut stdout = report.csv();
    stdout.push_str(&format!(
        "{}: {} cells ({}), {} as expected, {} differ -> {}\n",
        report.kind,
        report.cell_count,
        rows.join(", "),
        report.cell_count - differing,
        differing,
        dir.display()
    ));
    Ok(Outcome { stdout, as_expected: report.all_as_expected, written: vec![json_path, csv_path] })
}

fn cmd_compare(example: ExampleId, points: usize, seed: u64, format: Format) -> Result<Outcome, CliError> {
    let ex = reference_examples()?;
    match example {
        ExampleId::Quintic => {
            let (report, _) = check_matrix_example(&ex.quintic_p4)?;
            let stdout = match format {
                Format::Json => to_json(&report),
                Format::Text => {
                    let mut s = format!("quintic_p4 (n=4, d=5): epsilon {}\n", report.epsilon);
                    for st in &report.stages {
                        s.push_str(&format!("  {:<6} {}\n", st.stage, if st.matches { "match" } else { "mismatch" }));
                        for m in &st.mismatches {
                            s.push_str(&format!("    {m}\n"));
                        }
                    }
                    s
                }
            };
            Ok(Outcome { stdout, as_expected: report.all_match(), written: Vec::new() })
        }
        ExampleId::PlaneCubic | ExampleId::Quartic => {
            let report = if example == ExampleId::PlaneCubic {
                compare_cubic(&ex.plane_cubic, points, seed)?
            } else {
                compare_quartic(&ex.quartic_p2, points, seed)?
            };
            let stdout = match format {
                Format::Json => to_json(&report),
                Format::Text => report.render_text(),
            };
            let all = report.mismatched().is_empty();
            Ok(Outcome { stdout, as_expected: all, written: Vec::new() })
        }
    }
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
