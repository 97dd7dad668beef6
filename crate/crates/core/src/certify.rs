//! Jacobian of `psi`, dominance certificates and first-order relations.
//!
//! A full-rank Jacobian at one exact point proves dominance outright. Rank
//! deficiency at points is only evidence, so relations among the `F`
//! components are reported with a Schwartz-Zippel bound, or proved (or
//! refuted) by expanding minors over parameter polynomials.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::oracle::{identity_battery, BatteryReport};
use crate::pipeline::{f_block, psi, curve_from_params, PipelineError, ProblemDims, SyzygyParams};
use crate::rank::{exact_rank, ErrorBound, ExactRank, ScalarMatrix};
use crate::scalar::{
    is_prime_u64, FromRational, JetRing, ParamPoly, ParamPolyRing, PrimeField, Rational, Rationals, Ring, ScalarError,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertifyError {
    #[error("all {attempts} sampled points were degenerate")]
    AllTrialsDegenerate { attempts: usize },
    #[error("relation detection needs n >= 3, got n = {0}")]
    RelationOutOfScope(usize),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// The coefficient field of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldSpec::Rationals => f.write_str("Q"),
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Dominance,
    Relation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    DominantCertified,
    NotFullRankAtPoint,
    RelationDetected,
    NoRelationDetected,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::DominantCertified => "dominant-certified",
            Verdict::NotFullRankAtPoint => "not-full-rank-at-point",
            Verdict::RelationDetected => "relation-detected",
            Verdict::NoRelationDetected => "no-relation-detected",
        })
    }
}

/// Reproducible record of one dominance or relation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub version: String,
    pub kind: CertificateKind,
    pub n: usize,
    pub d: usize,
    pub field: FieldSpec,
    pub seed: u64,
    /// Trials requested.
    pub trials: usize,
    /// Rank per evaluated point, in trial order.
    pub ranks: Vec<usize>,
    /// Points rejected as degenerate before a usable one was found.
    pub degenerate_draws: usize,
    pub observed_rank: usize,
    pub target_rank: usize,
    pub verdict: Verdict,
    pub error_bound: Option<ErrorBound>,
    pub timing_ms: u64,
    pub param_order: String,
    pub param_names: Vec<String>,
    /// The point realizing `observed_rank`, rendered in the field.
    pub point: Vec<String>,
    pub identity_battery: Option<BatteryReport>,
}

impl Certificate {
    /// JSON with the timing field zeroed, for determinism comparisons.
    pub fn canonical_json(&self) -> String {
        let mut c = self.clone();
        c.timing_ms = 0;
        serde_json::to_string_pretty(&c).expect("certificates serialize")
    }

    pub const CSV_HEADER: &'static str = "kind,n,d,field,seed,trials,observed_rank,target_rank,verdict,log10_error_bound,timing_ms";

    pub fn csv_row(&self) -> String {
        let bound = match &self.error_bound {
            Some(b) if b.log10_at_most != i64::MIN => b.log10_at_most.to_string(),
            Some(_) => "-inf".into(),
            None => String::new(),
        };
        let kind = match self.kind {
            CertificateKind::Dominance => "dominance",
            CertificateKind::Relation => "relation",
        };
        format!(
            "{kind},{},{},{},{},{},{},{},{},{bound},{}",
            self.n, self.d, self.field, self.seed, self.trials, self.observed_rank, self.target_rank, self.verdict, self.timing_ms
        )
    }
}

/// The `codomain_dim x domain_dim` Jacobian of `psi` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianMatrix<E> {
    pub dims: ProblemDims,
    pub entries: ScalarMatrix<E>,
    pub point: SyzygyParams<E>,
}

/// Runs the whole pipeline over jets with every parameter active.
pub fn psi_jacobian<R: Ring>(params: &SyzygyParams<R::Elem>, ring: &R) -> Result<JacobianMatrix<R::Elem>, PipelineError> {
    let dims = *params.dims();
    // degeneracy is a property of the point, not of the jets
    curve_from_params(params, ring)?;
    let jets = JetRing::new(ring.clone(), dims.domain_dim);
    let lifted = SyzygyParams::new(
        dims,
        params.values().iter().enumerate().map(|(i, v)| jets.lift(v.clone(), i)).collect::<Result<_, _>>()?,
    )?;
    let values = psi(&lifted, &jets)?;
    let rows: Vec<Vec<R::Elem>> = values.into_iter().map(|j| j.grad).collect();
    Ok(JacobianMatrix { dims, entries: ScalarMatrix::from_rows(rows), point: params.clone() })
}

/// Parameters as the variables of a polynomial ring, named in flattening order.
pub fn symbolic_params(dims: ProblemDims, extra_vars: &[&str]) -> (ParamPolyRing<Rationals>, SyzygyParams<ParamPoly<Rational>>) {
    let mut names = dims.param_names();
    names.extend(extra_vars.iter().map(|s| s.to_string()));
    let ring = ParamPolyRing::new(Rationals, names);
    let values = (0..dims.domain_dim).map(|i| ring.var(i).expect("in range")).collect();
    let params = SyzygyParams::new(dims, values).expect("length is domain_dim");
    (ring, params)
}

/// `psi` with every coefficient a polynomial in the parameters.
pub fn symbolic_psi(dims: ProblemDims) -> Result<(ParamPolyRing<Rationals>, Vec<ParamPoly<Rational>>), PipelineError> {
    let (ring, params) = symbolic_params(dims, &[]);
    let values = psi(&params, &ring)?;
    Ok((ring, values))
}

/// Symbolic Jacobian, rows indexed by codomain coordinates.
pub fn symbolic_jacobian(dims: ProblemDims) -> Result<(ParamPolyRing<Rationals>, Vec<Vec<ParamPoly<Rational>>>), PipelineError> {
    let (ring, values) = symbolic_psi(dims)?;
    let jac = values.iter().map(|v| (0..dims.domain_dim).map(|c| ring.partial(v, c)).collect()).collect();
    Ok((ring, jac))
}

/// Fields that can be sampled for random points.
pub trait SampleField: ExactRank + FromRational {
    fn spec(&self) -> FieldSpec;
    /// A random scalar; `bound` limits integer draws over `Q`.
    fn sample(&self, rng: &mut ChaCha20Rng, bound: i64) -> Self::Elem;
}

impl SampleField for Rationals {
    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }

    fn sample(&self, rng: &mut ChaCha20Rng, bound: i64) -> Rational {
        let v = rng.gen_range(1..=bound.max(1));
        Rational::from(if rng.gen_bool(0.5) { v } else { -v })
    }
}

impl SampleField for PrimeField {
    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.modulus())
    }

    fn sample(&self, rng: &mut ChaCha20Rng, _bound: i64) -> crate::scalar::FpElem {
        self.elem(rng.gen_range(0..self.modulus()))
    }
}

/// The RNG for trial `index`: key from the seed, one stream per trial.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A random prime in `[2^61, 2^62)`, drawn from a stream reserved for primes.
pub fn random_prime(seed: u64, index: u64) -> u64 {
    let mut rng = trial_rng(seed, u64::MAX - index);
    loop {
        let c = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime_u64(c) {
            return c;
        }
    }
}

pub fn sample_params<F: SampleField>(dims: ProblemDims, field: &F, rng: &mut ChaCha20Rng, bound: i64) -> SyzygyParams<F::Elem> {
    let values = (0..dims.domain_dim).map(|_| field.sample(rng, bound)).collect();
    SyzygyParams::new(dims, values).expect("length is domain_dim")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceConfig {
    pub n: usize,
    pub d: usize,
    pub field: FieldSpec,
    pub seed: u64,
    /// Points tried before giving up on full rank.
    pub trials: usize,
    /// Integer sampling range over `Q`.
    pub bound: i64,
    /// Degenerate draws tolerated per trial.
    pub max_degenerate: usize,
    /// Run the identity battery on the reported point.
    pub battery: bool,
}

impl DominanceConfig {
    pub fn new(n: usize, d: usize, seed: u64) -> Self {
        DominanceConfig { n, d, field: FieldSpec::Rationals, seed, trials: 1, bound: 99, max_degenerate: 16, battery: true }
    }
}

/// Samples points until the Jacobian has full rank or the trials run out.
pub fn certify_dominance(cfg: &DominanceConfig) -> Result<Certificate, CertifyError> {
    match cfg.field {
        FieldSpec::Rationals => certify_dominance_in(cfg, &Rationals),
        FieldSpec::Prime(p) => certify_dominance_in(cfg, &PrimeField::new(p)?),
    }
}

fn certify_dominance_in<F: SampleField>(cfg: &DominanceConfig, field: &F) -> Result<Certificate, CertifyError> {
    let start = Instant::now();
    let dims = ProblemDims::new(cfg.n, cfg.d)?;
    let target = dims.codomain_dim;
    let mut ranks = Vec::new();
    let mut degenerate = 0;
    let mut best: Option<(usize, SyzygyParams<F::Elem>)> = None;
    for trial in 0..cfg.trials.max(1) {
        let (params, jac, skipped) = sample_jacobian(dims, field, cfg.seed, trial, cfg.bound, cfg.max_degenerate)?;
        degenerate += skipped;
        let rank = exact_rank(&jac.entries, field);
        ranks.push(rank);
        if best.as_ref().is_none_or(|(r, _)| rank > *r) {
            best = Some((rank, params));
        }
        if rank == target {
            break;
        }
    }
    let (observed, point) = best.expect("at least one trial");
    let verdict = if observed == target { Verdict::DominantCertified } else { Verdict::NotFullRankAtPoint };
    let battery = cfg.battery.then(|| identity_battery(&point, field));
    Ok(Certificate {
        schema_version: SCHEMA_VERSION,
        version: VERSION.into(),
        kind: CertificateKind::Dominance,
        n: cfg.n,
        d: cfg.d,
        field: field.spec(),
        seed: cfg.seed,
        trials: cfg.trials,
        ranks,
        degenerate_draws: degenerate,
        observed_rank: observed,
        target_rank: target,
        verdict,
        // a full-rank point is a witness; a deficient one proves nothing
        error_bound: (verdict == Verdict::DominantCertified).then(ErrorBound::zero),
        timing_ms: start.elapsed().as_millis() as u64,
        param_order: ProblemDims::PARAM_ORDER.into(),
        param_names: dims.param_names(),
        point: point.values().iter().map(|v| field.render(v)).collect(),
        identity_battery: battery,
    })
}

fn sample_jacobian<F: SampleField>(
    dims: ProblemDims,
    field: &F,
    seed: u64,
    trial: usize,
    bound: i64,
    max_degenerate: usize,
) -> Result<(SyzygyParams<F::Elem>, JacobianMatrix<F::Elem>, usize), CertifyError> {
    let mut rng = trial_rng(seed, trial as u64);
    for skipped in 0..=max_degenerate {
        let params = sample_params(dims, field, &mut rng, bound);
        match psi_jacobian(&params, field) {
            Ok(jac) => return Ok((params, jac, skipped)),
            Err(PipelineError::DegenerateParameters) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(CertifyError::AllTrialsDegenerate { attempts: max_degenerate + 1 })
}

/// Coefficients of `F_1..F_a` as an `a x (deg F + 1)` matrix.
pub fn relation_matrix<R: Ring>(params: &SyzygyParams<R::Elem>, ring: &R) -> Result<ScalarMatrix<R::Elem>, PipelineError> {
    let f = f_block(params, ring)?;
    Ok(ScalarMatrix::from_rows(f.into_iter().map(|p| p.into_coeffs()).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationConfig {
    pub n: usize,
    pub field: FieldSpec,
    pub seed: u64,
    pub trials: usize,
    pub bound: i64,
    pub max_degenerate: usize,
}

/// `d = n + 1`, where `q = 1`, `a = n - 1`, `b = 1`.
pub fn relation_dims(n: usize) -> Result<ProblemDims, CertifyError> {
    if n < 3 {
        return Err(CertifyError::RelationOutOfScope(n));
    }
    Ok(ProblemDims::new(n, n + 1)?)
}

/// Rank of the `F`-coefficient matrix at random points; a relation is
/// reported only when every trial has rank at most 1.
pub fn detect_relation(cfg: &RelationConfig) -> Result<Certificate, CertifyError> {
    match cfg.field {
        FieldSpec::Rationals => detect_relation_in(cfg, &Rationals),
        FieldSpec::Prime(p) => detect_relation_in(cfg, &PrimeField::new(p)?),
    }
}

fn detect_relation_in<F: SampleField>(cfg: &RelationConfig, field: &F) -> Result<Certificate, CertifyError> {
    let start = Instant::now();
    let dims = relation_dims(cfg.n)?;
    let trials = cfg.trials.max(1);
    let mut ranks = Vec::with_capacity(trials);
    let mut degenerate = 0;
    let mut best: Option<(usize, SyzygyParams<F::Elem>)> = None;
    for trial in 0..trials {
        let mut rng = trial_rng(cfg.seed, trial as u64);
        let mut found = None;
        for _ in 0..=cfg.max_degenerate {
            let params = sample_params(dims, field, &mut rng, cfg.bound);
            match relation_matrix(&params, field) {
                Ok(m) => {
                    found = Some((params, m));
                    break;
                }
                Err(PipelineError::DegenerateParameters) => degenerate += 1,
                Err(e) => return Err(e.into()),
            }
        }
        let (params, m) = found.ok_or(CertifyError::AllTrialsDegenerate { attempts: cfg.max_degenerate + 1 })?;
        let rank = exact_rank(&m, field);
        ranks.push(rank);
        if best.as_ref().is_none_or(|(r, _)| rank > *r) {
            best = Some((rank, params));
        }
    }
    let (observed, point) = best.expect("at least one trial");
    let verdict = if observed <= 1 { Verdict::RelationDetected } else { Verdict::NoRelationDetected };
    // each 2x2 minor has parameter-degree 2(n+1)
    let error_bound = match (verdict, field.spec()) {
        (Verdict::NoRelationDetected, _) => ErrorBound::zero(),
        (_, FieldSpec::Prime(p)) => ErrorBound::schwartz_zippel(2 * (cfg.n as u64 + 1), &[(p, trials)]),
        (_, FieldSpec::Rationals) => ErrorBound::heuristic_zero(),
    };
    Ok(Certificate {
        schema_version: SCHEMA_VERSION,
        version: VERSION.into(),
        kind: CertificateKind::Relation,
        n: dims.n,
        d: dims.d,
        field: field.spec(),
        seed: cfg.seed,
        trials,
        ranks,
        degenerate_draws: degenerate,
        observed_rank: observed,
        target_rank: 1,
        verdict,
        error_bound: Some(error_bound),
        timing_ms: start.elapsed().as_millis() as u64,
        param_order: ProblemDims::PARAM_ORDER.into(),
        param_names: dims.param_names(),
        point: point.values().iter().map(|v| field.render(v)).collect(),
        identity_battery: None,
    })
}

/// Two random primes plus rational points, with the combined bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub schema_version: u32,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub certificates: Vec<Certificate>,
    pub combined_error_bound: ErrorBound,
    pub verdict: Verdict,
    pub symbolic: Option<SymbolicOutcome>,
}

impl RelationReport {
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        for c in &mut r.certificates {
            c.timing_ms = 0;
        }
        if let Some(SymbolicOutcome { timing_ms, .. }) = &mut r.symbolic {
            *timing_ms = 0;
        }
        serde_json::to_string_pretty(&r).expect("reports serialize")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub n: usize,
    pub seed: u64,
    pub prime_trials: usize,
    pub rational_trials: usize,
    pub bound: i64,
    /// Fixed primes; drawn from the seed when absent.
    pub primes: Option<[u64; 2]>,
}

impl CampaignConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        CampaignConfig { n, seed, prime_trials: 20, rational_trials: 5, bound: 99, primes: None }
    }
}

pub fn relation_campaign(cfg: &CampaignConfig) -> Result<RelationReport, CertifyError> {
    let dims = relation_dims(cfg.n)?;
    let primes = cfg.primes.unwrap_or_else(|| [random_prime(cfg.seed, 0), random_prime(cfg.seed, 1)]);
    let mut certificates = Vec::with_capacity(3);
    for (i, p) in primes.iter().enumerate() {
        certificates.push(detect_relation(&RelationConfig {
            n: cfg.n,
            field: FieldSpec::Prime(*p),
            seed: cfg.seed.wrapping_add(i as u64 + 1),
            trials: cfg.prime_trials,
            bound: cfg.bound,
            max_degenerate: 16,
        })?);
    }
    certificates.push(detect_relation(&RelationConfig {
        n: cfg.n,
        field: FieldSpec::Rationals,
        seed: cfg.seed,
        trials: cfg.rational_trials,
        bound: cfg.bound,
        max_degenerate: 16,
    })?);
    let all = certificates.iter().all(|c| c.verdict == Verdict::RelationDetected);
    let verdict = if all { Verdict::RelationDetected } else { Verdict::NoRelationDetected };
    let combined = if all {
        let bounds: Vec<&ErrorBound> = certificates.iter().filter_map(|c| c.error_bound.as_ref()).collect();
        ErrorBound::product(&bounds)?
    } else {
        ErrorBound::zero()
    };
    Ok(RelationReport {
        schema_version: SCHEMA_VERSION,
        n: dims.n,
        d: dims.d,
        seed: cfg.seed,
        certificates,
        combined_error_bound: combined,
        verdict,
        symbolic: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolicError {
    #[error("term budget exceeded: {what} needs about {terms} terms, budget {budget}")]
    BudgetExceeded { what: String, terms: usize, budget: usize },
    #[error("minor of rows ({}, {}) and columns ({}, {}) is a nonzero polynomial", rows.0, rows.1, cols.0, cols.1)]
    NonzeroMinor {
        rows: (usize, usize),
        cols: (usize, usize),
        /// Value at `witness`, which proves the minor is not identically zero.
        value: String,
        witness: Vec<String>,
        /// Number of minors shown to vanish before this one.
        zero_minors: usize,
    },
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

/// Serializable summary of a symbolic run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicOutcome {
    pub n: usize,
    pub d: usize,
    /// `all-minors-vanish`, `nonzero-minor` or `budget-exceeded`.
    pub status: String,
    pub minors_checked: usize,
    pub max_entry_terms: usize,
    pub detail: String,
    pub timing_ms: u64,
}

/// Proof that every 2x2 minor of the `F`-coefficient matrix is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicProof {
    pub dims: ProblemDims,
    pub minors_checked: usize,
    pub max_entry_terms: usize,
}

pub const DEFAULT_TERM_BUDGET: usize = 50_000_000;

/// Expands the `F` block over parameter polynomials and checks all 2x2
/// minors. A minor that is nonzero at an integer point is nonzero as a
/// polynomial, so refutations come with a witness; vanishing is only
/// claimed after full expansion.
pub fn relation_symbolic(dims: ProblemDims, budget: usize, seed: u64) -> Result<SymbolicProof, SymbolicError> {
    let (ring, params) = symbolic_params(dims, &[]);
    let f = f_block(&params, &ring)?;
    let m: Vec<Vec<ParamPoly<Rational>>> = f.into_iter().map(|p| p.into_coeffs()).collect();
    let max_entry_terms = m.iter().flatten().map(ParamPoly::num_terms).max().unwrap_or(0);
    if max_entry_terms > budget {
        return Err(SymbolicError::BudgetExceeded { what: "F coefficients".into(), terms: max_entry_terms, budget });
    }

    let mut rng = trial_rng(seed, 0);
    let point: Vec<Rational> = (0..dims.domain_dim).map(|_| Rationals.sample(&mut rng, 99)).collect();
    let values: Vec<Vec<Rational>> = m.iter().map(|row| row.iter().map(|e| ring.eval(e, &point)).collect()).collect();

    let q = Rationals;
    let cols = m.first().map_or(0, Vec::len);
    let mut checked = 0;
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            for c1 in 0..cols {
                for c2 in c1 + 1..cols {
                    let at_point = q.sub(&q.mul(&values[i][c1], &values[j][c2]), &q.mul(&values[i][c2], &values[j][c1]));
                    if !q.is_zero(&at_point) {
                        return Err(SymbolicError::NonzeroMinor {
                            rows: (i, j),
                            cols: (c1, c2),
                            value: at_point.to_string(),
                            witness: point.iter().map(|v| v.to_string()).collect(),
                            zero_minors: checked,
                        });
                    }
                    let work = m[i][c1].num_terms() * m[j][c2].num_terms() + m[i][c2].num_terms() * m[j][c1].num_terms();
                    if work > budget {
                        return Err(SymbolicError::BudgetExceeded {
                            what: format!("minor ({i}, {j}; {c1}, {c2})"),
                            terms: work,
                            budget,
                        });
                    }
                    let minor = ring.sub(&ring.mul(&m[i][c1], &m[j][c2]), &ring.mul(&m[i][c2], &m[j][c1]));
                    if !ring.is_zero(&minor) {
                        // zero at the point but not identically zero
                        let witness = find_nonzero_point(&ring, &minor, seed);
                        return Err(SymbolicError::NonzeroMinor {
                            rows: (i, j),
                            cols: (c1, c2),
                            value: witness.0,
                            witness: witness.1,
                            zero_minors: checked,
                        });
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(SymbolicProof { dims, minors_checked: checked, max_entry_terms })
}

fn find_nonzero_point(ring: &ParamPolyRing<Rationals>, poly: &ParamPoly<Rational>, seed: u64) -> (String, Vec<String>) {
    for attempt in 1.. {
        let mut rng = trial_rng(seed, attempt);
        let point: Vec<Rational> = (0..ring.n_vars()).map(|_| Rationals.sample(&mut rng, 99)).collect();
        let v = ring.eval(poly, &point);
        if !v.is_zero() {
            return (v.to_string(), point.iter().map(|x| x.to_string()).collect());
        }
    }
    unreachable!("a nonzero polynomial has a nonzero integer point")
}

/// Runs [`relation_symbolic`] and packs the result for a report.
pub fn symbolic_outcome(dims: ProblemDims, budget: usize, seed: u64) -> Result<SymbolicOutcome, PipelineError> {
    let start = Instant::now();
    let (status, checked, terms, detail) = match relation_symbolic(dims, budget, seed) {
        Ok(p) => ("all-minors-vanish", p.minors_checked, p.max_entry_terms, "every 2x2 minor is the zero polynomial".to_string()),
        Err(e @ SymbolicError::NonzeroMinor { zero_minors, .. }) => ("nonzero-minor", zero_minors + 1, 0, e.to_string()),
        Err(e @ SymbolicError::BudgetExceeded { .. }) => ("budget-exceeded", 0, 0, e.to_string()),
        Err(SymbolicError::Pipeline(e)) => return Err(e),
    };
    Ok(SymbolicOutcome {
        n: dims.n,
        d: dims.d,
        status: status.into(),
        minors_checked: checked,
        max_entry_terms: terms,
        detail,
        timing_ms: start.elapsed().as_millis() as u64,
    })
}
