//! Independent validators for the pipeline.
//!
//! Nothing here shares code paths with the jet Jacobian: directional
//! derivatives come from exact univariate interpolation of `psi` along a
//! line, and the identity battery re-derives every relation of the
//! construction from its inputs.

use serde::{Deserialize, Serialize};

use crate::homog::{HomogPoly, Var};
use crate::matrix::PolyMatrix;
use crate::pipeline::{extract_fh_from_product, psi, st_jacobian, Curve, PipelineError, ProblemDims, SyzygyParams};
use crate::scalar::{Field, Rational, Rationals, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub checks: Vec<IdentityCheck>,
    /// Degree of `gcd(G_0, ..., G_n)`; nonzero means base points.
    pub gcd_degree: Option<usize>,
    pub warnings: Vec<String>,
}

impl BatteryReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

pub const LP_G_ZERO: &str = "LP*G^T = 0";
pub const EULER: &str = "J*(s,t)^T = d*G^T";
pub const LPJ_FH: &str = "LP*J = FH*(-t, s)";
pub const NONDEGENERATE: &str = "some G_i is nonzero";

/// Runs the pipeline from `params` and checks every identity.
pub fn identity_battery<F: Field>(params: &SyzygyParams<F::Elem>, field: &F) -> BatteryReport {
    let lp = crate::pipeline::build_lp(params);
    let curve = Curve { g: crate::matrix::signed_maximal_minors(&lp, field).expect("LP is n x (n+1)") };
    check_identities(&lp, &curve, params.dims(), field)
}

/// Checks the identities for a given `LP` and claimed curve, so a tampered
/// curve can be fed in.
pub fn check_identities<F: Field>(
    lp: &PolyMatrix<F::Elem>,
    curve: &Curve<F::Elem>,
    dims: &ProblemDims,
    field: &F,
) -> BatteryReport {
    let mut checks = Vec::new();
    let mut warnings = Vec::new();
    let mut push = |name: &str, result: Result<(), String>| {
        checks.push(IdentityCheck { name: name.into(), passed: result.is_ok(), detail: result.err() });
    };

    let nondegenerate = curve.g.iter().any(|g| !g.is_zero(field));
    push(NONDEGENERATE, if nondegenerate { Ok(()) } else { Err("every G_i vanishes".into()) });

    let lp_g = PolyMatrix::column(curve.g.clone())
        .map_err(|e| e.to_string())
        .and_then(|col| lp.mul(&col, field).map_err(|e| e.to_string()))
        .and_then(|prod| match (0..prod.rows()).find(|&k| !prod.get(k, 0).is_zero(field)) {
            None => Ok(()),
            Some(k) => Err(format!("row {k} is {}", prod.get(k, 0).render(field))),
        });
    push(LP_G_ZERO, lp_g);

    let jac = match st_jacobian(curve, field) {
        Ok(j) => j,
        Err(e) => {
            push(EULER, Err(e.to_string()));
            push(LPJ_FH, Err("no Jacobian".into()));
            return BatteryReport { checks, gcd_degree: None, warnings };
        }
    };
    let euler = (0..curve.g.len()).try_for_each(|i| {
        let lhs = jac.get(i, 0).mul_var(Var::S, field).add(&jac.get(i, 1).mul_var(Var::T, field), field);
        let rhs = curve.g[i].map(|c| field.scale_i64(c, dims.d as i64));
        match lhs {
            Ok(l) if l == rhs => Ok(()),
            Ok(_) => Err(format!("fails for G_{i}")),
            Err(e) => Err(e.to_string()),
        }
    });
    push(EULER, euler);

    let lpj = lp.mul(&jac, field).map_err(|e| e.to_string()).and_then(|w| {
        let fh = extract_fh_from_product(&w, dims, field).map_err(|e| e.to_string())?;
        for (k, comp) in fh.components().enumerate() {
            let col0 = comp.mul_var(Var::T, field).neg(field);
            let col1 = comp.mul_var(Var::S, field);
            if &col0 != w.get(k, 0) || &col1 != w.get(k, 1) {
                return Err(format!("row {k} does not reconstruct"));
            }
        }
        Ok(())
    });
    push(LPJ_FH, lpj);

    let gcd_degree = gcd_degree(&curve.g, field);
    match gcd_degree {
        Some(0) | None => {}
        Some(deg) => warnings.push(format!("gcd(G) has degree {deg}: the curve has base points")),
    }
    BatteryReport { checks, gcd_degree, warnings }
}

fn gcd_degree<F: Field>(g: &[HomogPoly<F::Elem>], field: &F) -> Option<usize> {
    let mut acc: Option<HomogPoly<F::Elem>> = None;
    for gi in g.iter().filter(|p| !p.is_zero(field)) {
        acc = Some(match acc {
            None => gi.clone(),
            Some(a) => a.gcd(gi, field).ok()?,
        });
    }
    acc.map(|a| a.degree())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("direction has length {got}, expected {expected}")]
    DirectionLength { got: usize, expected: usize },
    #[error("could not find enough non-degenerate interpolation nodes")]
    DegenerateParameters,
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

/// Nodes `0, 1, -1, 2, -2, ...`.
fn node(i: usize) -> i64 {
    let k = i.div_ceil(2) as i64;
    if i % 2 == 1 {
        k
    } else {
        -k
    }
}

/// Derivative at `x = 0` of `psi(params + x * direction)` for every component,
/// by interpolating through `n + 2` nodes (`psi` has parameter-degree `n + 1`).
pub fn interpolation_directional_derivative(
    params: &SyzygyParams<Rational>,
    direction: &[Rational],
) -> Result<Vec<Rational>, OracleError> {
    let dims = *params.dims();
    if direction.len() != dims.domain_dim {
        return Err(OracleError::DirectionLength { got: direction.len(), expected: dims.domain_dim });
    }
    let q = Rationals;
    let needed = dims.n + 2;
    let mut xs: Vec<Rational> = Vec::with_capacity(needed);
    let mut ys: Vec<Vec<Rational>> = Vec::with_capacity(needed);
    for i in 0..needed + 32 {
        if xs.len() == needed {
            break;
        }
        let x = Rational::from(node(i));
        let shifted: Vec<Rational> =
            params.values().iter().zip(direction).map(|(p, v)| q.add(p, &q.mul(&x, v))).collect();
        match psi(&SyzygyParams::new(dims, shifted)?, &q) {
            Ok(y) => {
                xs.push(x);
                ys.push(y);
            }
            Err(PipelineError::DegenerateParameters) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    if xs.len() < needed {
        return Err(OracleError::DegenerateParameters);
    }
    let weights = lagrange_derivative_weights(&xs);
    let mut out = vec![Rational::zero(); dims.codomain_dim];
    for (w, y) in weights.iter().zip(&ys) {
        for (o, v) in out.iter_mut().zip(y) {
            q.mul_add_assign(o, w, v);
        }
    }
    Ok(out)
}

pub fn interpolation_directional_component(
    params: &SyzygyParams<Rational>,
    direction: &[Rational],
    component: usize,
) -> Result<Rational, OracleError> {
    Ok(interpolation_directional_derivative(params, direction)?.swap_remove(component))
}

/// `w_k = L_k'(0)` for the Lagrange basis on distinct nodes `xs`.
fn lagrange_derivative_weights(xs: &[Rational]) -> Vec<Rational> {
    let q = Rationals;
    (0..xs.len())
        .map(|k| {
            let mut denom = Rational::one();
            for (m, xm) in xs.iter().enumerate() {
                if m != k {
                    denom = q.mul(&denom, &q.sub(&xs[k], xm));
                }
            }
            // d/dx prod_{m != k} (x - x_m) at 0 = sum_m prod_{l != k, m} (-x_l)
            let mut numer = Rational::zero();
            for m in (0..xs.len()).filter(|&m| m != k) {
                let mut prod = Rational::one();
                for (l, xl) in xs.iter().enumerate() {
                    if l != k && l != m {
                        prod = q.mul(&prod, &q.neg(xl));
                    }
                }
                numer = q.add(&numer, &prod);
            }
            q.div(&numer, &denom).expect("nodes are distinct")
        })
        .collect()
}

/// Names of the per-point properties checked by [`property_suite`].
pub const HOMOGENEITY: &str = "psi(lambda x) = lambda^(n+1) psi(x)";
pub const JET_VS_INTERPOLATION: &str = "jet Jacobian * v = interpolated derivative along v";
pub const BAREISS_VS_COFACTOR: &str = "det_fraction_free = poly_det";
pub const MOD_P: &str = "F_p pipeline = Q pipeline mod p";

/// Every identity of the construction at one integer point: the battery,
/// homogeneity, jets against interpolation, both determinant algorithms
/// on the minors of `LP`, and reduction mod `prime`.
pub fn property_suite(
    params: &SyzygyParams<Rational>,
    lambda: &Rational,
    direction: &[Rational],
    prime: &crate::scalar::PrimeField,
) -> Result<BatteryReport, OracleError> {
    let q = Rationals;
    let dims = *params.dims();
    let base = psi(params, &q)?;
    let mut report = identity_battery(params, &q);
    let mut push = |name: &str, ok: bool, detail: &str| {
        report.checks.push(IdentityCheck { name: name.into(), passed: ok, detail: (!ok).then(|| detail.to_string()) });
    };

    let scaled = psi(&params.map(|v| q.mul(v, lambda)), &q)?;
    let factor = q.pow(lambda, dims.n as u32 + 1);
    let homogeneous = scaled.iter().zip(&base).all(|(a, b)| *a == q.mul(b, &factor));
    push(HOMOGENEITY, homogeneous, &format!("lambda = {lambda}"));

    let jac = crate::certify::psi_jacobian(params, &q)?;
    let via_nodes = interpolation_directional_derivative(params, direction)?;
    push(JET_VS_INTERPOLATION, jac.entries.apply(direction, &q) == via_nodes, "directional derivatives differ");

    let lp = crate::pipeline::build_lp(params);
    let dets = (0..=dims.n).try_for_each(|drop| {
        let cols: Vec<usize> = (0..=dims.n).filter(|&c| c != drop).collect();
        let square = lp.select_columns(&cols);
        let ff = crate::matrix::det_fraction_free(&square, &q).map_err(|e| e.to_string())?;
        let cof = crate::matrix::poly_det(&square, &q).map_err(|e| e.to_string())?;
        if ff == cof {
            Ok(())
        } else {
            Err(format!("minor without column {drop}"))
        }
    });
    push(BAREISS_VS_COFACTOR, dets.is_ok(), dets.as_ref().err().map_or("", String::as_str));

    let reduced = params.try_map(|v| crate::scalar::FromRational::from_rational(prime, v)).map_err(PipelineError::from)?;
    let mod_p = match psi(&reduced, prime) {
        Ok(over_p) => {
            let expected: Result<Vec<_>, _> =
                base.iter().map(|v| crate::scalar::FromRational::from_rational(prime, v)).collect();
            expected.is_ok_and(|e| e == over_p)
        }
        // every minor vanishes mod p: no morphism to compare
        Err(PipelineError::DegenerateParameters) => true,
        Err(e) => return Err(e.into()),
    };
    push(MOD_P, mod_p, &format!("p = {}", prime.modulus()));
    Ok(report)
}
