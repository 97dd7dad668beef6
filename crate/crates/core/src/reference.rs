//! Transcribed reference examples and the comparison harness.
//!
//! The printed formulas are data: each one is parsed, compared symbolically
//! with the computed polynomial and evaluated at random integer points, and
//! gets its own verdict. A mismatching formula is reported, never patched.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::certify::{psi_jacobian, symbolic_params, trial_rng};
use crate::expr::{parse_expr, ExprError};
use crate::homog::HomogPoly;
use crate::pipeline::{curve_from_params, psi, run_pipeline, ParamsFile, PipelineError, PipelineTrace, ProblemDims, SyzygyParams};
use crate::scalar::{ParamPoly, ParamPolyRing, Rational, Rationals, Ring};

pub const REFERENCE_EXAMPLES: &str = include_str!("../fixtures/reference_examples.json");

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReferenceError {
    #[error("fixture is malformed: {0}")]
    Fixture(String),
    #[error("`{text}`: {source}")]
    Expr { text: String, source: ExprError },
    #[error("`{0}` is not homogeneous of degree {1} in s, t")]
    NotHomogeneous(String, usize),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

#[derive(Debug, Clone, Deserialize)]
pub struct ReferenceExamples {
    pub quintic_p4: MatrixExample,
    pub quartic_p2: FormulaExample,
    pub plane_cubic: CubicExample,
}

/// A fully numeric example: parameters and every intermediate matrix.
#[derive(Debug, Clone, Deserialize)]
pub struct MatrixExample {
    pub n: usize,
    pub d: usize,
    pub epsilon: i64,
    pub params: ParamsFile,
    pub lp: Vec<Vec<String>>,
    pub g: Vec<String>,
    pub jacobian: Vec<Vec<String>>,
    pub lp_j: Vec<Vec<String>>,
    pub fh: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct NamedFormula {
    pub name: String,
    pub expr: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct FormulaExample {
    pub n: usize,
    pub d: usize,
    pub formulas: Vec<NamedFormula>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct PrintedJacobian {
    pub row_params: Vec<String>,
    pub col_components: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CubicExample {
    pub n: usize,
    pub d: usize,
    pub g: Vec<NamedFormula>,
    pub formulas: Vec<NamedFormula>,
    pub jacobian: PrintedJacobian,
}

pub fn reference_examples() -> Result<ReferenceExamples, ReferenceError> {
    serde_json::from_str(REFERENCE_EXAMPLES).map_err(|e| ReferenceError::Fixture(e.to_string()))
}

/// Parses a polynomial in `s`, `t` with rational coefficients.
pub fn parse_homog(text: &str, degree: usize) -> Result<HomogPoly<Rational>, ReferenceError> {
    let ring = ParamPolyRing::new(Rationals, vec!["s".into(), "t".into()]);
    let p = parse_expr(text, &ring).map_err(|source| ReferenceError::Expr { text: text.into(), source })?;
    let mut coeffs = vec![Rational::zero(); degree + 1];
    for (m, c) in p.terms() {
        let (js, jt) = (m.exponent(0) as usize, m.exponent(1) as usize);
        if js + jt != degree {
            return Err(ReferenceError::NotHomogeneous(text.into(), degree));
        }
        coeffs[js] = c.clone();
    }
    Ok(HomogPoly::from_coeffs(coeffs))
}

/// Outcome of one matrix or vector of the numeric example.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageCheck {
    pub stage: String,
    pub matches: bool,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixExampleReport {
    pub n: usize,
    pub d: usize,
    pub epsilon: i64,
    pub stages: Vec<StageCheck>,
}

impl MatrixExampleReport {
    pub fn all_match(&self) -> bool {
        self.stages.iter().all(|s| s.matches)
    }
}

/// Runs the numeric example and compares every stage, scaling the printed
/// `G`, `J`, `LP*J` and `FH` by the pinned sign.
pub fn check_matrix_example(ex: &MatrixExample) -> Result<(MatrixExampleReport, PipelineTrace<Rational>), ReferenceError> {
    let params = ex.params.to_params()?;
    let dims = *params.dims();
    let trace = run_pipeline(&params, &Rationals)?;
    let q = Rationals;
    let eps = Rational::from(ex.epsilon);
    let signed = |p: HomogPoly<Rational>| p.scale(&eps, &q);
    let mut stages = Vec::new();

    let mut compare = |stage: &str, printed: Vec<(String, HomogPoly<Rational>)>, computed: Vec<&HomogPoly<Rational>>| {
        let mut mismatches = Vec::new();
        if printed.len() != computed.len() {
            mismatches.push(format!("{} printed entries, {} computed", printed.len(), computed.len()));
        }
        for ((label, want), got) in printed.iter().zip(&computed) {
            if want != *got {
                mismatches.push(format!("{label}: printed {} computed {}", want.render(&q), got.render(&q)));
            }
        }
        stages.push(StageCheck { stage: stage.into(), matches: mismatches.is_empty(), mismatches });
    };

    let grid = |rows: &[Vec<String>], degs: &dyn Fn(usize) -> usize, sign: bool| -> Result<Vec<(String, HomogPoly<Rational>)>, ReferenceError> {
        let mut out = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            for (c, text) in row.iter().enumerate() {
                let p = parse_homog(text, degs(r))?;
                out.push((format!("({r},{c})"), if sign { signed(p) } else { p }));
            }
        }
        Ok(out)
    };

    let lp_rows = trace.lp.row_degrees().to_vec();
    let printed_lp = grid(&ex.lp, &|r| lp_rows[r], false)?;
    let computed_lp: Vec<_> = (0..trace.lp.rows()).flat_map(|r| trace.lp.row(r).iter()).collect();
    compare("LP", printed_lp, computed_lp);

    let printed_g: Vec<_> = ex
        .g
        .iter()
        .enumerate()
        .map(|(i, t)| Ok((format!("G_{i}"), signed(parse_homog(t, dims.d)?))))
        .collect::<Result<_, ReferenceError>>()?;
    compare("G", printed_g, trace.curve.g.iter().collect());

    let printed_j = grid(&ex.jacobian, &|_| dims.d - 1, true)?;
    let computed_j: Vec<_> = (0..trace.jacobian.rows()).flat_map(|r| trace.jacobian.row(r).iter()).collect();
    compare("J", printed_j, computed_j);

    let w_rows = trace.lp_j.row_degrees().to_vec();
    let printed_w = grid(&ex.lp_j, &|r| w_rows[r], true)?;
    let computed_w: Vec<_> = (0..trace.lp_j.rows()).flat_map(|r| trace.lp_j.row(r).iter()).collect();
    compare("LP*J", printed_w, computed_w);

    let printed_fh: Vec<_> = ex
        .fh
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let deg = if k < dims.a { dims.f_degree() } else { dims.h_degree() };
            Ok((format!("FH_{k}"), signed(parse_homog(t, deg)?)))
        })
        .collect::<Result<_, ReferenceError>>()?;
    compare("FH", printed_fh, trace.fh.components().collect());

    Ok((MatrixExampleReport { n: dims.n, d: dims.d, epsilon: ex.epsilon, stages }, trace))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaKind {
    Curve,
    Component,
    JacobianEntry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaVerdict {
    pub name: String,
    pub kind: FormulaKind,
    /// Printed formula equals the signed computed polynomial.
    pub symbolic_match: bool,
    pub numeric_points: usize,
    /// Points where printed and signed computed values agree.
    pub numeric_agree: usize,
    /// Matches only with the sign opposite to the example's.
    pub opposite_sign: bool,
    /// Terms of `printed - epsilon * computed`, when short enough to show.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub difference: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl FormulaVerdict {
    pub fn matches(&self) -> bool {
        self.symbolic_match && self.numeric_agree == self.numeric_points && self.error.is_none()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub example: String,
    pub n: usize,
    pub d: usize,
    /// Global sign, fixed by the first formula that matches up to sign.
    pub epsilon: Option<i64>,
    pub seed: u64,
    pub verdicts: Vec<FormulaVerdict>,
}

impl CompareReport {
    pub fn matched(&self) -> usize {
        self.verdicts.iter().filter(|v| v.matches()).count()
    }

    pub fn mismatched(&self) -> Vec<&FormulaVerdict> {
        self.verdicts.iter().filter(|v| !v.matches()).collect()
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "{} (n={}, d={}): epsilon {}, {}/{} formulas match\n",
            self.example,
            self.n,
            self.d,
            self.epsilon.map_or("undetermined".into(), |e| e.to_string()),
            self.matched(),
            self.verdicts.len()
        );
        for v in &self.verdicts {
            let status = if v.matches() {
                "match".to_string()
            } else if v.opposite_sign {
                "mismatch (matches with the opposite sign)".to_string()
            } else {
                format!("mismatch ({}/{} points agree)", v.numeric_agree, v.numeric_points)
            };
            out.push_str(&format!("  {:<28} {status}", v.name));
            if let Some(diff) = &v.difference {
                out.push_str(&format!("  printed - computed = {diff}"));
            }
            if let Some(err) = &v.error {
                out.push_str(&format!("  error: {err}"));
            }
            out.push('\n');
        }
        out
    }
}

/// One printed formula against the symbolic and numeric computations.
struct Candidate {
    name: String,
    kind: FormulaKind,
    printed: Result<ParamPoly<Rational>, String>,
    computed: ParamPoly<Rational>,
    /// Independent numeric value of the computed side at a point
    /// (parameters, then `s`, `t`).
    numeric: Box<dyn Fn(&[Rational]) -> Result<Rational, PipelineError>>,
}

pub const DEFAULT_POINTS: usize = 12;

/// Compares the quartic example's `f` formulas.
pub fn compare_quartic(ex: &FormulaExample, points: usize, seed: u64) -> Result<CompareReport, ReferenceError> {
    let dims = ProblemDims::new(ex.n, ex.d)?;
    let (ring, params) = symbolic_params(dims, &[]);
    let psi_sym = psi(&params, &ring)?;
    let names = dims.component_names();
    let mut cands = Vec::new();
    for f in &ex.formulas {
        let idx = names.iter().position(|n| *n == f.name).ok_or_else(|| ReferenceError::Fixture(format!("no component {}", f.name)))?;
        cands.push(Candidate {
            name: f.name.clone(),
            kind: FormulaKind::Component,
            printed: parse_expr(&f.expr, &ring).map_err(|e| e.to_string()),
            computed: psi_sym[idx].clone(),
            numeric: Box::new(move |pt: &[Rational]| {
                let v = psi(&SyzygyParams::new(dims, pt[..dims.domain_dim].to_vec())?, &Rationals)?;
                Ok(v[idx].clone())
            }),
        });
    }
    Ok(run_comparison("quartic_p2", dims, &ring, cands, points, seed))
}

/// Compares the cubic example's `G`, `f`/`h` formulas and printed Jacobian.
pub fn compare_cubic(ex: &CubicExample, points: usize, seed: u64) -> Result<CompareReport, ReferenceError> {
    let dims = ProblemDims::new(ex.n, ex.d)?;
    let (ring, params) = symbolic_params(dims, &["s", "t"]);
    let (s_var, t_var) = (dims.domain_dim, dims.domain_dim + 1);
    let curve = curve_from_params(&params, &ring)?;
    let psi_sym = psi(&params, &ring)?;
    let names = dims.component_names();
    let pnames = dims.param_names();
    let mut cands = Vec::new();

    for (i, g) in ex.g.iter().enumerate() {
        let s = ring.var(s_var).expect("s is a ring variable");
        let t = ring.var(t_var).expect("t is a ring variable");
        let mut computed = ring.zero();
        for (j, c) in curve.g[i].coeffs().iter().enumerate() {
            let mono = ring.mul(&ring.pow(&s, j as u32), &ring.pow(&t, (dims.d - j) as u32));
            ring.mul_add_assign(&mut computed, c, &mono);
        }
        cands.push(Candidate {
            name: g.name.clone(),
            kind: FormulaKind::Curve,
            printed: parse_expr(&g.expr, &ring).map_err(|e| e.to_string()),
            computed,
            numeric: Box::new(move |pt: &[Rational]| {
                let c = curve_from_params(&SyzygyParams::new(dims, pt[..dims.domain_dim].to_vec())?, &Rationals)?;
                Ok(c.g[i].eval(&pt[s_var], &pt[t_var], &Rationals))
            }),
        });
    }

    let component = |name: &str| {
        names.iter().position(|n| n == name).ok_or_else(|| ReferenceError::Fixture(format!("no component {name}")))
    };
    for f in &ex.formulas {
        let idx = component(&f.name)?;
        cands.push(Candidate {
            name: f.name.clone(),
            kind: FormulaKind::Component,
            printed: parse_expr(&f.expr, &ring).map_err(|e| e.to_string()),
            computed: psi_sym[idx].clone(),
            numeric: Box::new(move |pt: &[Rational]| {
                let v = psi(&SyzygyParams::new(dims, pt[..dims.domain_dim].to_vec())?, &Rationals)?;
                Ok(v[idx].clone())
            }),
        });
    }

    let jac = &ex.jacobian;
    for (r, pname) in jac.row_params.iter().enumerate() {
        let col = pnames.iter().position(|n| n == pname).ok_or_else(|| ReferenceError::Fixture(format!("no parameter {pname}")))?;
        for (c, cname) in jac.col_components.iter().enumerate() {
            let idx = component(cname)?;
            let text = jac.entries.get(r).and_then(|row| row.get(c)).ok_or_else(|| ReferenceError::Fixture("short Jacobian".into()))?;
            cands.push(Candidate {
                name: format!("d{cname}/d{pname}"),
                kind: FormulaKind::JacobianEntry,
                printed: parse_expr(text, &ring).map_err(|e| e.to_string()),
                computed: ring.partial(&psi_sym[idx], col),
                numeric: Box::new(move |pt: &[Rational]| {
                    let j = psi_jacobian(&SyzygyParams::new(dims, pt[..dims.domain_dim].to_vec())?, &Rationals)?;
                    Ok(j.entries.get(idx, col).clone())
                }),
            });
        }
    }
    Ok(run_comparison("plane_cubic", dims, &ring, cands, points, seed))
}

fn run_comparison(
    example: &str,
    dims: ProblemDims,
    ring: &ParamPolyRing<Rationals>,
    cands: Vec<Candidate>,
    points: usize,
    seed: u64,
) -> CompareReport {
    let q = Rationals;
    let epsilon = cands.iter().find_map(|c| match &c.printed {
        Ok(p) if *p == c.computed => Some(1),
        Ok(p) if *p == ring.neg(&c.computed) => Some(-1),
        _ => None,
    });
    let eps = epsilon.unwrap_or(1);
    let mut rng = trial_rng(seed, 0);
    let pts: Vec<Vec<Rational>> = (0..points)
        .map(|_| {
            (0..ring.n_vars())
                .map(|_| {
                    let v: i64 = rng.gen_range(1..=99);
                    Rational::from(if rng.gen_bool(0.5) { v } else { -v })
                })
                .collect()
        })
        .collect();

    let verdicts = cands
        .iter()
        .map(|c| {
            let signed = if eps == 1 { c.computed.clone() } else { ring.neg(&c.computed) };
            let printed = match &c.printed {
                Ok(p) => p,
                Err(e) => {
                    return FormulaVerdict {
                        name: c.name.clone(),
                        kind: c.kind,
                        symbolic_match: false,
                        numeric_points: 0,
                        numeric_agree: 0,
                        opposite_sign: false,
                        difference: None,
                        error: Some(e.clone()),
                    }
                }
            };
            let symbolic_match = *printed == signed;
            let opposite_sign = !symbolic_match && *printed == ring.neg(&signed);
            let mut agree = 0;
            let mut error = None;
            for pt in &pts {
                match (c.numeric)(pt) {
                    Ok(v) => {
                        let v = if eps == 1 { v } else { q.neg(&v) };
                        if ring.eval(printed, pt) == v {
                            agree += 1;
                        }
                    }
                    Err(e) => error = Some(e.to_string()),
                }
            }
            let diff = ring.sub(printed, &signed);
            let difference = (!symbolic_match && diff.num_terms() <= 12).then(|| ring.render(&diff));
            FormulaVerdict {
                name: c.name.clone(),
                kind: c.kind,
                symbolic_match,
                numeric_points: pts.len(),
                numeric_agree: agree,
                opposite_sign,
                difference,
                error,
            }
        })
        .collect();
    CompareReport { example: example.into(), n: dims.n, d: dims.d, epsilon, seed, verdicts }
}
