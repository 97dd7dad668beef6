//! Matrices of homogeneous polynomials.

use std::collections::HashMap;

use crate::homog::{HomogPoly, PolyError};
use crate::scalar::{ExactDivision, Ring};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is {0}x{1}, not square")]
    NotSquare(usize, usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Row-major matrix whose entries in row `k` all have degree `row_degrees[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix<E> {
    rows: usize,
    cols: usize,
    entries: Vec<HomogPoly<E>>,
    row_degrees: Vec<usize>,
}

impl<E: Clone> PolyMatrix<E> {
    pub fn from_rows(rows: Vec<Vec<HomogPoly<E>>>) -> Result<Self, MatrixError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if nrows == 0 || ncols == 0 {
            return Err(MatrixError::ShapeMismatch("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(nrows * ncols);
        let mut row_degrees = Vec::with_capacity(nrows);
        for (k, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(MatrixError::ShapeMismatch(format!("row {k} has {} entries, expected {ncols}", row.len())));
            }
            let deg = row[0].degree();
            if let Some(bad) = row.iter().find(|p| p.degree() != deg) {
                return Err(MatrixError::Poly(PolyError::DegreeMismatch(deg, bad.degree())));
            }
            row_degrees.push(deg);
            entries.extend(row);
        }
        Ok(PolyMatrix { rows: nrows, cols: ncols, entries, row_degrees })
    }

    pub fn zero<R: Ring<Elem = E>>(ring: &R, row_degrees: Vec<usize>, cols: usize) -> Self {
        let entries = row_degrees
            .iter()
            .flat_map(|&d| std::iter::repeat_n(HomogPoly::zero(ring, d), cols))
            .collect();
        PolyMatrix { rows: row_degrees.len(), cols, entries, row_degrees }
    }

    /// Identity with constant entries.
    pub fn identity<R: Ring<Elem = E>>(ring: &R, size: usize) -> Self {
        let mut m = Self::zero(ring, vec![0; size], size);
        for i in 0..size {
            m.entries[i * size + i] = HomogPoly::from_coeffs(vec![ring.one()]);
        }
        m
    }

    /// A single column holding the given polynomials.
    pub fn column(polys: Vec<HomogPoly<E>>) -> Result<Self, MatrixError> {
        Self::from_rows(polys.into_iter().map(|p| vec![p]).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_degrees(&self) -> &[usize] {
        &self.row_degrees
    }

    pub fn get(&self, r: usize, c: usize) -> &HomogPoly<E> {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[HomogPoly<E>] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn map<T: Clone>(&self, mut f: impl FnMut(&E) -> T) -> PolyMatrix<T> {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| p.map(&mut f)).collect(),
            row_degrees: self.row_degrees.clone(),
        }
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.entries.iter().all(|p| p.is_zero(ring))
    }

    pub fn sub<R: Ring<Elem = E>>(&self, rhs: &Self, ring: &R) -> Result<Self, MatrixError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(MatrixError::ShapeMismatch(format!(
                "{}x{} minus {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.sub(b, ring))
            .collect::<Result<_, _>>()?;
        Ok(PolyMatrix { entries, ..self.clone() })
    }

    /// Product of polynomial matrices. `rhs` must have a uniform row degree so
    /// every entry of the product is homogeneous.
    pub fn mul<R: Ring<Elem = E>>(&self, rhs: &Self, ring: &R) -> Result<Self, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let rdeg = rhs.row_degrees[0];
        if rhs.row_degrees.iter().any(|&d| d != rdeg) {
            return Err(MatrixError::ShapeMismatch("right factor has non-uniform row degrees".into()));
        }
        let row_degrees: Vec<usize> = self.row_degrees.iter().map(|&d| d + rdeg).collect();
        let mut out = Self::zero(ring, row_degrees, rhs.cols);
        for k in 0..self.rows {
            for c in 0..rhs.cols {
                let slot = &mut out.entries[k * rhs.cols + c];
                let mut acc = std::mem::replace(slot, HomogPoly::zero(ring, 0)).into_coeffs();
                for m in 0..self.cols {
                    self.get(k, m).mul_acc_into(rhs.get(m, c), &mut acc, ring);
                }
                *slot = HomogPoly::from_coeffs(acc);
            }
        }
        Ok(out)
    }

    /// Submatrix keeping all rows and the listed columns.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let entries = (0..self.rows)
            .flat_map(|r| cols.iter().map(move |&c| (r, c)))
            .map(|(r, c)| self.get(r, c).clone())
            .collect();
        PolyMatrix { rows: self.rows, cols: cols.len(), entries, row_degrees: self.row_degrees.clone() }
    }

    pub fn render<R: Ring<Elem = E>>(&self, ring: &R) -> Vec<Vec<String>> {
        (0..self.rows).map(|r| self.row(r).iter().map(|p| p.render(ring)).collect()).collect()
    }
}

/// Determinants of the top-left-anchored `k x k` minors on every column
/// subset, built bottom-up by Laplace expansion along the topmost row.
///
/// `table[mask]` holds the determinant of rows `rows - popcount(mask) ..`
/// restricted to the columns in `mask` (in increasing order).
fn laplace_table<R: Ring>(
    m: &PolyMatrix<R::Elem>,
    ring: &R,
    full_masks: &[u64],
) -> HashMap<u64, HomogPoly<R::Elem>> {
    let n = m.rows;
    let mut table: HashMap<u64, HomogPoly<R::Elem>> = HashMap::new();
    // only the masks reachable from the requested full minors are needed
    let mut levels: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
    levels[n] = full_masks.to_vec();
    for size in (1..=n).rev() {
        let mut next: Vec<u64> = Vec::new();
        for &mask in &levels[size] {
            let mut bits = mask;
            while bits != 0 {
                let b = bits & bits.wrapping_neg();
                next.push(mask & !b);
                bits &= !b;
            }
        }
        next.sort_unstable();
        next.dedup();
        levels[size - 1] = next;
    }
    table.insert(0, HomogPoly::from_coeffs(vec![ring.one()]));
    for size in 1..=n {
        let row = n - size;
        let deg: usize = m.row_degrees[row..].iter().sum();
        for &mask in &levels[size] {
            let mut acc = HomogPoly::zero(ring, deg).into_coeffs();
            let mut sign_positive = true;
            let mut bits = mask;
            while bits != 0 {
                let b = bits & bits.wrapping_neg();
                let col = b.trailing_zeros() as usize;
                let sub = &table[&(mask & !b)];
                let entry = m.get(row, col);
                if sign_positive {
                    entry.mul_acc_into(sub, &mut acc, ring);
                } else {
                    let neg = entry.neg(ring);
                    neg.mul_acc_into(sub, &mut acc, ring);
                }
                sign_positive = !sign_positive;
                bits &= !b;
            }
            table.insert(mask, HomogPoly::from_coeffs(acc));
        }
    }
    table
}

/// Determinant by cofactor expansion (memoized over column subsets).
pub fn poly_det<R: Ring>(m: &PolyMatrix<R::Elem>, ring: &R) -> Result<HomogPoly<R::Elem>, MatrixError> {
    if m.rows != m.cols {
        return Err(MatrixError::NotSquare(m.rows, m.cols));
    }
    if m.rows > 63 {
        return Err(MatrixError::ShapeMismatch("cofactor expansion supports at most 63 columns".into()));
    }
    let full = (1u64 << m.cols) - 1;
    let mut table = laplace_table(m, ring, &[full]);
    Ok(table.remove(&full).expect("full minor computed"))
}

/// `G_i = (-1)^i det(A without column i)` for an `n x (n+1)` matrix `A`.
/// With this sign convention `A * G^T = 0` identically.
pub fn signed_maximal_minors<R: Ring>(
    m: &PolyMatrix<R::Elem>,
    ring: &R,
) -> Result<Vec<HomogPoly<R::Elem>>, MatrixError> {
    if m.cols != m.rows + 1 {
        return Err(MatrixError::ShapeMismatch(format!(
            "maximal minors need an n x (n+1) matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    if m.cols > 63 {
        return Err(MatrixError::ShapeMismatch("too many columns".into()));
    }
    let all = (1u64 << m.cols) - 1;
    let masks: Vec<u64> = (0..m.cols).map(|i| all & !(1 << i)).collect();
    let table = laplace_table(m, ring, &masks);
    Ok(masks
        .iter()
        .enumerate()
        .map(|(i, mask)| {
            let minor = &table[mask];
            if i % 2 == 0 {
                minor.clone()
            } else {
                minor.neg(ring)
            }
        })
        .collect())
}

/// Fraction-free (Bareiss) determinant; each step's division by the previous
/// pivot is exact.
pub fn det_fraction_free<R: ExactDivision>(
    m: &PolyMatrix<R::Elem>,
    ring: &R,
) -> Result<HomogPoly<R::Elem>, MatrixError> {
    let n = m.rows;
    if n != m.cols {
        return Err(MatrixError::NotSquare(m.rows, m.cols));
    }
    let total_degree: usize = m.row_degrees.iter().sum();
    let mut a: Vec<Vec<HomogPoly<R::Elem>>> = (0..n).map(|r| m.row(r).to_vec()).collect();
    let mut negate = false;
    let mut prev: HomogPoly<R::Elem> = HomogPoly::from_coeffs(vec![ring.one()]);
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero(ring)) else {
            return Ok(HomogPoly::zero(ring, total_degree));
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let lhs = a[k][k].mul(&a[i][j], ring);
                let rhs = a[i][k].mul(&a[k][j], ring);
                a[i][j] = lhs.sub(&rhs, ring)?.div_exact(&prev, ring)?;
            }
            a[i][k] = HomogPoly::zero(ring, 0);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { det.neg(ring) } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, Rationals};

    fn qp(text: &str, degree: usize) -> HomogPoly<Rational> {
        HomogPoly::parse(text, degree, &Rationals).unwrap()
    }

    fn mat(rows: &[(&[&str], usize)]) -> PolyMatrix<Rational> {
        PolyMatrix::from_rows(
            rows.iter().map(|(r, d)| r.iter().map(|e| qp(e, *d)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn two_by_two_det() {
        let m = mat(&[(&["-t", "s"], 1), (&["-t^2", "s^2"], 2)]);
        let det = poly_det(&m, &Rationals).unwrap();
        assert_eq!(det, qp("-s^2*t + s*t^2", 3));
        assert_eq!(det_fraction_free(&m, &Rationals).unwrap(), det);
    }

    #[test]
    fn triangular_det_is_diagonal_product() {
        let m = mat(&[(&["s", "t", "s"], 1), (&["0", "s + t", "7*t"], 1), (&["0", "0", "2*t"], 1)]);
        let expect = qp("s", 1).mul(&qp("s + t", 1), &Rationals).mul(&qp("2*t", 1), &Rationals);
        assert_eq!(poly_det(&m, &Rationals).unwrap(), expect);
        assert_eq!(det_fraction_free(&m, &Rationals).unwrap(), expect);
    }

    #[test]
    fn zero_matrix_det() {
        let m = PolyMatrix::zero(&Rationals, vec![1, 1], 2);
        assert!(poly_det(&m, &Rationals).unwrap().is_zero(&Rationals));
        assert!(det_fraction_free(&m, &Rationals).unwrap().is_zero(&Rationals));
        assert_eq!(det_fraction_free(&m, &Rationals).unwrap().degree(), 2);
    }

    #[test]
    fn not_square() {
        let m = mat(&[(&["-t", "s"], 1)]);
        assert_eq!(poly_det(&m, &Rationals), Err(MatrixError::NotSquare(1, 2)));
    }

    #[test]
    fn minors_of_euler_row() {
        let m = mat(&[(&["-t", "s"], 1)]);
        let g = signed_maximal_minors(&m, &Rationals).unwrap();
        assert_eq!(g, vec![qp("s", 1), qp("t", 1)]);
    }

    #[test]
    fn identity_and_zero_rows() {
        let m = mat(&[(&["-t", "s", "s"], 1), (&["0", "0", "0"], 2)]);
        let id = PolyMatrix::identity(&Rationals, 3);
        assert_eq!(m.mul(&id, &Rationals).unwrap(), m);
        let b = mat(&[(&["s^3", "t^3"], 3), (&["t^3", "s*t^2"], 3), (&["1/2*s^3", "0"], 3)]);
        let prod = m.mul(&b, &Rationals).unwrap();
        assert!(prod.row(1).iter().all(|p| p.is_zero(&Rationals)));
        assert_eq!(prod.row_degrees(), &[4, 5]);
    }

    #[test]
    fn mul_shape_errors() {
        let m = mat(&[(&["-t", "s"], 1)]);
        assert!(matches!(m.mul(&m, &Rationals), Err(MatrixError::ShapeMismatch(_))));
        let uneven = mat(&[(&["s"], 1), (&["s^2"], 2)]);
        assert!(matches!(m.mul(&uneven, &Rationals), Err(MatrixError::ShapeMismatch(_))));
    }
}
