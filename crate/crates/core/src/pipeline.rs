//! From syzygy parameters to the induced morphism.
//!
//! The stages are:
//!
//! 1. `LP`: the `n x (n+1)` syzygy matrix, `a` rows of degree `q` built from
//!    the `l` parameters and `b` rows of degree `q+1` from the `p` parameters;
//! 2. `G`: its signed maximal minors, the coordinates of a degree-`d` curve;
//! 3. `J`: the `(n+1) x 2` matrix of partials `(dG/ds, dG/dt)`;
//! 4. `W = LP * J`, whose row `k` equals `(-t X_k, s X_k)` for the morphism
//!    component `X_k` (an `F` for `k < a`, an `H` otherwise).
//!
//! The composite parameters -> coefficients of `(F, H)` is the map computed
//! by [`psi`]. Everything is generic over the coefficient ring, so the same
//! code runs over rationals, prime fields, jets and parameter polynomials.

use serde::{Deserialize, Serialize};

use crate::homog::{HomogPoly, PolyError, Var};
use crate::matrix::{signed_maximal_minors, MatrixError, PolyMatrix};
use crate::scalar::{FromRational, Rational, Ring, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("(n, d) = ({n}, {d}) is out of scope: {reason}")]
    OutOfScope { n: usize, d: usize, reason: &'static str },
    #[error("degenerate parameters: every maximal minor of LP vanishes")]
    DegenerateParameters,
    #[error("inconsistent diagram: {0}")]
    InconsistentDiagram(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Integer bookkeeping for a `(n, d)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemDims {
    pub n: usize,
    pub d: usize,
    pub q: usize,
    pub a: usize,
    pub b: usize,
    pub domain_dim: usize,
    pub codomain_dim: usize,
}

impl ProblemDims {
    pub fn new(n: usize, d: usize) -> Result<Self, PipelineError> {
        if n < 2 {
            return Err(PipelineError::OutOfScope { n, d, reason: "n must be at least 2" });
        }
        if d == n {
            return Err(PipelineError::OutOfScope {
                n,
                d,
                reason: "d = n is the rational normal curve; every morphism is induced",
            });
        }
        if d < n {
            return Err(PipelineError::OutOfScope {
                n,
                d,
                reason: "d < n gives a degenerate curve with unbalanced restriction",
            });
        }
        let q = d / n;
        let a = (q + 1) * n - d;
        let b = d - n * q;
        let domain_dim = ((q + 1) * a + (q + 2) * b) * (n + 1);
        let codomain_dim = a * (d + q - 1) + b * (d + q);
        let dims = ProblemDims { n, d, q, a, b, domain_dim, codomain_dim };
        debug_assert_eq!(a + b, n);
        debug_assert_eq!(a * (d + q) + b * (d + q + 1), (n + 1) * d);
        debug_assert_eq!(domain_dim - codomain_dim, n * n + 2 * n);
        Ok(dims)
    }

    /// Degree of the `F` components, `d + q - 2`.
    pub fn f_degree(&self) -> usize {
        self.d + self.q - 2
    }

    /// Degree of the `H` components, `d + q - 1`.
    pub fn h_degree(&self) -> usize {
        self.d + self.q - 1
    }

    pub fn l_count(&self) -> usize {
        self.a * (self.n + 1) * (self.q + 1)
    }

    /// Flat index of `l_{k,i,j}` (all zero-based).
    pub fn l_index(&self, k: usize, i: usize, j: usize) -> usize {
        debug_assert!(k < self.a && i <= self.n && j <= self.q);
        (k * (self.n + 1) + i) * (self.q + 1) + j
    }

    /// Flat index of `p_{k,i,j}` (all zero-based).
    pub fn p_index(&self, k: usize, i: usize, j: usize) -> usize {
        debug_assert!(k < self.b && i <= self.n && j <= self.q + 1);
        self.l_count() + (k * (self.n + 1) + i) * (self.q + 2) + j
    }

    /// Parameter names in flattening order, with 1-based row index `k`:
    /// `l{k}{i}{j}` when every index is a single digit, `l_{k}_{i}_{j}` otherwise.
    pub fn param_names(&self) -> Vec<String> {
        let compact = self.a.max(self.b) <= 9 && self.n <= 9 && self.q < 9;
        let name = |prefix: char, k: usize, i: usize, j: usize| {
            if compact {
                format!("{prefix}{}{i}{j}", k + 1)
            } else {
                format!("{prefix}_{}_{i}_{j}", k + 1)
            }
        };
        let mut names = Vec::with_capacity(self.domain_dim);
        for k in 0..self.a {
            for i in 0..=self.n {
                for j in 0..=self.q {
                    names.push(name('l', k, i, j));
                }
            }
        }
        for k in 0..self.b {
            for i in 0..=self.n {
                for j in 0..=self.q + 1 {
                    names.push(name('p', k, i, j));
                }
            }
        }
        names
    }

    /// Names of the codomain coordinates in flattening order.
    pub fn component_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.codomain_dim);
        for k in 0..self.a {
            for j in 0..=self.f_degree() {
                names.push(format!("f_{},{j}", k + 1));
            }
        }
        for k in 0..self.b {
            for j in 0..=self.h_degree() {
                names.push(format!("h_{},{j}", k + 1));
            }
        }
        names
    }

    pub const PARAM_ORDER: &'static str =
        "l block then p block; each row-major over (k, i, j) with k = 1.., i = 0..n, j = 0..deg";
}

/// Coefficients of the syzygy matrix in flattening order.
#[derive(Debug, Clone, PartialEq)]
pub struct SyzygyParams<E> {
    dims: ProblemDims,
    values: Vec<E>,
}

impl<E: Clone> SyzygyParams<E> {
    pub fn new(dims: ProblemDims, values: Vec<E>) -> Result<Self, PipelineError> {
        if values.len() != dims.domain_dim {
            return Err(PipelineError::DimensionMismatch(format!(
                "expected {} parameters for (n, d) = ({}, {}), got {}",
                dims.domain_dim,
                dims.n,
                dims.d,
                values.len()
            )));
        }
        Ok(SyzygyParams { dims, values })
    }

    pub fn dims(&self) -> &ProblemDims {
        &self.dims
    }

    pub fn values(&self) -> &[E] {
        &self.values
    }

    pub fn l(&self, k: usize, i: usize, j: usize) -> &E {
        &self.values[self.dims.l_index(k, i, j)]
    }

    pub fn p(&self, k: usize, i: usize, j: usize) -> &E {
        &self.values[self.dims.p_index(k, i, j)]
    }

    pub fn map<T: Clone>(&self, f: impl FnMut(&E) -> T) -> SyzygyParams<T> {
        SyzygyParams { dims: self.dims, values: self.values.iter().map(f).collect() }
    }

    pub fn try_map<T: Clone, Er>(&self, f: impl FnMut(&E) -> Result<T, Er>) -> Result<SyzygyParams<T>, Er> {
        Ok(SyzygyParams { dims: self.dims, values: self.values.iter().map(f).collect::<Result<_, _>>()? })
    }
}

impl SyzygyParams<i64> {
    /// Uniform nonzero integers in `[-bound, bound]`.
    pub fn random_integers(dims: ProblemDims, bound: i64, rng: &mut impl rand::Rng) -> Self {
        assert!(bound >= 1);
        let values = (0..dims.domain_dim)
            .map(|_| {
                let v = rng.gen_range(1..=bound);
                if rng.gen_bool(0.5) {
                    v
                } else {
                    -v
                }
            })
            .collect();
        SyzygyParams { dims, values }
    }

    pub fn into_ring<R: Ring>(&self, ring: &R) -> SyzygyParams<R::Elem> {
        self.map(|&v| ring.from_i64(v))
    }
}

impl SyzygyParams<Rational> {
    pub fn into_field<R: FromRational>(&self, ring: &R) -> Result<SyzygyParams<R::Elem>, ScalarError> {
        self.try_map(|v| ring.from_rational(v))
    }
}

/// JSON parameter file: `l[k][i][j]` and `p[k][i][j]` as integers or
/// fraction strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamsFile {
    pub n: usize,
    pub d: usize,
    pub l: Vec<Vec<Vec<serde_json::Value>>>,
    pub p: Vec<Vec<Vec<serde_json::Value>>>,
}

impl ParamsFile {
    pub fn to_params(&self) -> Result<SyzygyParams<Rational>, PipelineError> {
        let dims = ProblemDims::new(self.n, self.d)?;
        let mismatch = |what: String| PipelineError::DimensionMismatch(what);
        let scalar = |v: &serde_json::Value| -> Result<Rational, PipelineError> {
            match v {
                serde_json::Value::Number(num) => num
                    .as_i64()
                    .map(Rational::from)
                    .ok_or_else(|| mismatch(format!("non-integer number {num}; use a fraction string"))),
                serde_json::Value::String(s) => Ok(s.parse()?),
                other => Err(mismatch(format!("unexpected value {other}"))),
            }
        };
        let mut values = Vec::with_capacity(dims.domain_dim);
        let blocks = [(&self.l, dims.a, dims.q + 1, 'l'), (&self.p, dims.b, dims.q + 2, 'p')];
        for (block, rows, width, name) in blocks {
            if block.len() != rows {
                return Err(mismatch(format!("{name} has {} rows, expected {rows}", block.len())));
            }
            for (k, row) in block.iter().enumerate() {
                if row.len() != dims.n + 1 {
                    return Err(mismatch(format!("{name}[{k}] has {} entries, expected {}", row.len(), dims.n + 1)));
                }
                for (i, entry) in row.iter().enumerate() {
                    if entry.len() != width {
                        return Err(mismatch(format!(
                            "{name}[{k}][{i}] has {} coefficients, expected {width}",
                            entry.len()
                        )));
                    }
                    for v in entry {
                        values.push(scalar(v)?);
                    }
                }
            }
        }
        SyzygyParams::new(dims, values)
    }

    pub fn from_params(params: &SyzygyParams<Rational>) -> Self {
        let dims = *params.dims();
        let val = |q: &Rational| {
            if q.is_integer() {
                serde_json::Value::from(q.to_string().parse::<i64>().unwrap_or(0))
            } else {
                serde_json::Value::String(q.to_string())
            }
        };
        let l = (0..dims.a)
            .map(|k| (0..=dims.n).map(|i| (0..=dims.q).map(|j| val(params.l(k, i, j))).collect()).collect())
            .collect();
        let p = (0..dims.b)
            .map(|k| (0..=dims.n).map(|i| (0..=dims.q + 1).map(|j| val(params.p(k, i, j))).collect()).collect())
            .collect();
        ParamsFile { n: dims.n, d: dims.d, l, p }
    }
}

/// The curve `[G_0 : ... : G_n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve<E> {
    pub g: Vec<HomogPoly<E>>,
}

/// The morphism as its `F` and `H` components.
#[derive(Debug, Clone, PartialEq)]
pub struct MorphismFH<E> {
    pub f: Vec<HomogPoly<E>>,
    pub h: Vec<HomogPoly<E>>,
}

impl<E: Clone> MorphismFH<E> {
    /// `(f_{1,0..}, ..., f_{a,..}, h_{1,0..}, ..., h_{b,..})`
    pub fn flatten(&self) -> Vec<E> {
        self.f.iter().chain(&self.h).flat_map(|p| p.coeffs().iter().cloned()).collect()
    }

    pub fn unflatten(dims: &ProblemDims, values: &[E]) -> Result<Self, PipelineError> {
        if values.len() != dims.codomain_dim {
            return Err(PipelineError::DimensionMismatch(format!(
                "expected {} coefficients, got {}",
                dims.codomain_dim,
                values.len()
            )));
        }
        let (fw, hw) = (dims.f_degree() + 1, dims.h_degree() + 1);
        let (fvals, hvals) = values.split_at(dims.a * fw);
        Ok(MorphismFH {
            f: fvals.chunks(fw).map(|c| HomogPoly::from_coeffs(c.to_vec())).collect(),
            h: hvals.chunks(hw).map(|c| HomogPoly::from_coeffs(c.to_vec())).collect(),
        })
    }

    pub fn components(&self) -> impl Iterator<Item = &HomogPoly<E>> {
        self.f.iter().chain(&self.h)
    }
}

pub fn build_lp<E: Clone>(params: &SyzygyParams<E>) -> PolyMatrix<E> {
    let dims = params.dims();
    let mut rows = Vec::with_capacity(dims.n);
    for k in 0..dims.a {
        rows.push(
            (0..=dims.n)
                .map(|i| HomogPoly::from_coeffs((0..=dims.q).map(|j| params.l(k, i, j).clone()).collect()))
                .collect(),
        );
    }
    for k in 0..dims.b {
        rows.push(
            (0..=dims.n)
                .map(|i| HomogPoly::from_coeffs((0..=dims.q + 1).map(|j| params.p(k, i, j).clone()).collect()))
                .collect(),
        );
    }
    PolyMatrix::from_rows(rows).expect("syzygy rows are uniform by construction")
}

pub fn curve_from_lp<R: Ring>(lp: &PolyMatrix<R::Elem>, ring: &R) -> Result<Curve<R::Elem>, PipelineError> {
    let g = signed_maximal_minors(lp, ring)?;
    if g.iter().all(|gi| gi.is_zero(ring)) {
        return Err(PipelineError::DegenerateParameters);
    }
    Ok(Curve { g })
}

pub fn curve_from_params<R: Ring>(params: &SyzygyParams<R::Elem>, ring: &R) -> Result<Curve<R::Elem>, PipelineError> {
    curve_from_lp(&build_lp(params), ring)
}

/// `(n+1) x 2` matrix with columns `dG_i/ds`, `dG_i/dt`.
pub fn st_jacobian<R: Ring>(curve: &Curve<R::Elem>, ring: &R) -> Result<PolyMatrix<R::Elem>, PipelineError> {
    let rows = curve
        .g
        .iter()
        .map(|gi| Ok(vec![gi.partial(Var::S, ring)?, gi.partial(Var::T, ring)?]))
        .collect::<Result<Vec<_>, PolyError>>()?;
    Ok(PolyMatrix::from_rows(rows)?)
}

/// Solves `LP * J = FH * (-t, s)` row by row.
pub fn extract_fh<R: Ring>(
    lp: &PolyMatrix<R::Elem>,
    jac: &PolyMatrix<R::Elem>,
    dims: &ProblemDims,
    ring: &R,
) -> Result<MorphismFH<R::Elem>, PipelineError> {
    if lp.rows() != dims.n || lp.cols() != dims.n + 1 || jac.rows() != dims.n + 1 || jac.cols() != 2 {
        return Err(PipelineError::DimensionMismatch(format!(
            "LP is {}x{}, J is {}x{}",
            lp.rows(),
            lp.cols(),
            jac.rows(),
            jac.cols()
        )));
    }
    let w = lp.mul(jac, ring)?;
    extract_fh_from_product(&w, dims, ring)
}

/// The extraction step on an already formed `W = LP * J`.
pub fn extract_fh_from_product<R: Ring>(
    w: &PolyMatrix<R::Elem>,
    dims: &ProblemDims,
    ring: &R,
) -> Result<MorphismFH<R::Elem>, PipelineError> {
    let mut fh = MorphismFH { f: Vec::with_capacity(dims.a), h: Vec::with_capacity(dims.b) };
    for k in 0..dims.n {
        let comp = w
            .get(k, 1)
            .div_linear(Var::S, ring)
            .map_err(|_| PipelineError::InconsistentDiagram(format!("row {k}: second column is not divisible by s")))?;
        let minus_t_comp = comp.mul_var(Var::T, ring).neg(ring);
        if !w.get(k, 0).sub(&minus_t_comp, ring)?.is_zero(ring) {
            return Err(PipelineError::InconsistentDiagram(format!("row {k}: first column is not -t times the component")));
        }
        let expected = if k < dims.a { dims.f_degree() } else { dims.h_degree() };
        if comp.degree() != expected {
            return Err(PipelineError::InconsistentDiagram(format!(
                "row {k}: component has degree {}, expected {expected}",
                comp.degree()
            )));
        }
        if k < dims.a {
            fh.f.push(comp);
        } else {
            fh.h.push(comp);
        }
    }
    Ok(fh)
}

/// Every intermediate object of one pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineTrace<E> {
    pub lp: PolyMatrix<E>,
    pub curve: Curve<E>,
    pub jacobian: PolyMatrix<E>,
    pub lp_j: PolyMatrix<E>,
    pub fh: MorphismFH<E>,
}

pub fn run_pipeline<R: Ring>(params: &SyzygyParams<R::Elem>, ring: &R) -> Result<PipelineTrace<R::Elem>, PipelineError> {
    let dims = params.dims();
    let lp = build_lp(params);
    let curve = curve_from_lp(&lp, ring)?;
    let jacobian = st_jacobian(&curve, ring)?;
    let lp_j = lp.mul(&jacobian, ring)?;
    let fh = extract_fh_from_product(&lp_j, dims, ring)?;
    Ok(PipelineTrace { lp, curve, jacobian, lp_j, fh })
}

pub fn morphism<R: Ring>(params: &SyzygyParams<R::Elem>, ring: &R) -> Result<MorphismFH<R::Elem>, PipelineError> {
    Ok(run_pipeline(params, ring)?.fh)
}

/// The coefficient vector of the induced morphism, length `codomain_dim`.
pub fn psi<R: Ring>(params: &SyzygyParams<R::Elem>, ring: &R) -> Result<Vec<R::Elem>, PipelineError> {
    Ok(morphism(params, ring)?.flatten())
}

/// Only the `F` block, which needs just the first `a` rows of `LP * J`.
pub fn f_block<R: Ring>(params: &SyzygyParams<R::Elem>, ring: &R) -> Result<Vec<HomogPoly<R::Elem>>, PipelineError> {
    let dims = params.dims();
    let lp = build_lp(params);
    let curve = curve_from_lp(&lp, ring)?;
    let jac = st_jacobian(&curve, ring)?;
    let top: Vec<Vec<HomogPoly<R::Elem>>> = (0..dims.a).map(|k| lp.row(k).to_vec()).collect();
    if top.is_empty() {
        return Ok(Vec::new());
    }
    let w = PolyMatrix::from_rows(top)?.mul(&jac, ring)?;
    let mut out = Vec::with_capacity(dims.a);
    for k in 0..dims.a {
        let comp = w
            .get(k, 1)
            .div_linear(Var::S, ring)
            .map_err(|_| PipelineError::InconsistentDiagram(format!("row {k}: not divisible by s")))?;
        let minus_t_comp = comp.mul_var(Var::T, ring).neg(ring);
        if !w.get(k, 0).sub(&minus_t_comp, ring)?.is_zero(ring) {
            return Err(PipelineError::InconsistentDiagram(format!("row {k}: columns disagree")));
        }
        out.push(comp);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rationals;

    #[test]
    fn dims_examples() {
        let d = ProblemDims::new(4, 5).unwrap();
        assert_eq!((d.q, d.a, d.b, d.domain_dim, d.codomain_dim), (1, 3, 1, 45, 21));
        let d = ProblemDims::new(2, 3).unwrap();
        assert_eq!((d.q, d.a, d.b, d.domain_dim, d.codomain_dim), (1, 1, 1, 15, 7));
        let d = ProblemDims::new(2, 4).unwrap();
        assert_eq!((d.q, d.a, d.b, d.domain_dim, d.codomain_dim), (2, 2, 0, 18, 10));
        let d = ProblemDims::new(5, 9).unwrap();
        assert_eq!((d.domain_dim, d.codomain_dim), (84, 49));
    }

    #[test]
    fn dims_out_of_scope() {
        assert!(matches!(ProblemDims::new(3, 3), Err(PipelineError::OutOfScope { .. })));
        assert!(matches!(ProblemDims::new(4, 2), Err(PipelineError::OutOfScope { .. })));
        assert!(matches!(ProblemDims::new(1, 5), Err(PipelineError::OutOfScope { .. })));
    }

    #[test]
    fn dims_invariants_hold_across_grid() {
        for n in 2..=9 {
            for d in (n + 1)..=30 {
                let dims = ProblemDims::new(n, d).unwrap();
                assert_eq!(dims.a + dims.b, n);
                assert_eq!(dims.domain_dim - dims.codomain_dim, n * n + 2 * n);
                assert_eq!(dims.a * (d + dims.q) + dims.b * (d + dims.q + 1), (n + 1) * d);
                assert_eq!(dims.param_names().len(), dims.domain_dim);
                assert_eq!(dims.component_names().len(), dims.codomain_dim);
            }
        }
    }

    #[test]
    fn param_names_compact_form() {
        let dims = ProblemDims::new(2, 3).unwrap();
        let names = dims.param_names();
        assert_eq!(&names[..3], &["l100", "l101", "l110"]);
        assert_eq!(names[dims.p_index(0, 2, 2)], "p122");
        let wide = ProblemDims::new(2, 25).unwrap().param_names();
        assert_eq!(wide[0], "l_1_0_0");
    }

    #[test]
    fn zero_params_are_degenerate() {
        let dims = ProblemDims::new(2, 3).unwrap();
        let params = SyzygyParams::new(dims, vec![Rational::zero(); 15]).unwrap();
        let lp = build_lp(&params);
        assert!(lp.is_zero(&Rationals));
        assert_eq!(lp.row_degrees(), &[1, 2]);
        assert_eq!(psi(&params, &Rationals), Err(PipelineError::DegenerateParameters));
    }

    #[test]
    fn non_divisible_product_is_inconsistent() {
        let dims = ProblemDims::new(2, 3).unwrap();
        let r = Rationals;
        let poly = |text: &str, deg| HomogPoly::parse(text, deg, &r).unwrap();
        // degrees: row 0 (F) has degree d+q-1 = 3 entries, row 1 (H) degree 4
        let w = PolyMatrix::from_rows(vec![
            vec![poly("-s^2*t", 3), poly("t^3 + s^3", 3)],
            vec![poly("0", 4), poly("0", 4)],
        ])
        .unwrap();
        assert!(matches!(extract_fh_from_product(&w, &dims, &r), Err(PipelineError::InconsistentDiagram(_))));
    }

    #[test]
    fn wrong_param_count() {
        let dims = ProblemDims::new(2, 3).unwrap();
        assert!(matches!(SyzygyParams::new(dims, vec![0i64; 14]), Err(PipelineError::DimensionMismatch(_))));
    }
}
