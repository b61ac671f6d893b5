//! Dense matrices over the scalar fields, exact elimination, SVD kernels,
//! realification and the matrix exponential.

use std::ops::{Index, IndexMut};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::{ComplexField, Field, C64};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;

    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Clone> Mat<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::dim("ragged rows"));
        }
        Ok(Mat {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<T>]) -> Self {
        Mat::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// Stack matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[Mat<T>]) -> Result<Self> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::dim("vstack with differing column counts"));
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let data = blocks.iter().flat_map(|b| b.data.iter().cloned()).collect();
        Ok(Mat { rows, cols, data })
    }
}

impl<T: Field> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn mul(&self, other: &Mat<T>) -> Result<Mat<T>> {
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out: Mat<T> = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(r, c)] = out[(r, c)].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::dim(format!(
                "{}x{} matrix applied to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    pub fn add(&self, other: &Mat<T>) -> Result<Mat<T>> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Mat<T>) -> Result<Mat<T>> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, s: &T) -> Mat<T> {
        self.map(|a| a.clone() * s.clone())
    }

    /// `self * other - other * self`
    pub fn commutator(&self, other: &Mat<T>) -> Result<Mat<T>> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    fn zip_with(&self, other: &Mat<T>, f: impl Fn(&T, &T) -> T) -> Result<Mat<T>> {
        if self.shape() != other.shape() {
            return Err(Error::dim(format!(
                "shapes {:?} and {:?} differ",
                self.shape(),
                other.shape()
            )));
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Field::abs_f64).fold(0.0, f64::max)
    }

    pub fn is_negligible(&self, eps: f64) -> bool {
        self.data.iter().all(|a| a.is_negligible(eps))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn to_f64(&self) -> Mat<f64> {
        self.map(Field::to_f64)
    }
}

impl<C: ComplexField> Mat<C> {
    pub fn to_c64(&self) -> Mat<C64> {
        self.map(ComplexField::to_c64)
    }

    pub fn conj(&self) -> Mat<C> {
        self.map(ComplexField::conj)
    }

    pub fn real_part(&self) -> Mat<C::Real> {
        self.map(ComplexField::re)
    }
}

/// Reduced row echelon form with the pivot columns. Pivots are chosen by
/// largest magnitude among entries that are not negligible.
pub fn rref<T: Field>(m: &Mat<T>, eps: f64) -> (Mat<T>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        if pr >= rows {
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for r in pr..rows {
            let v = &a[(r, c)];
            if v.is_negligible(eps) {
                continue;
            }
            let mag = v.abs_f64();
            if best.is_none_or(|(_, b)| mag > b) {
                best = Some((r, mag));
            }
        }
        let Some((r, _)) = best else { continue };
        if r != pr {
            for k in 0..cols {
                a.data.swap(r * cols + k, pr * cols + k);
            }
        }
        let p = a[(pr, c)].clone();
        for k in c..cols {
            a[(pr, k)] = a[(pr, k)].clone() / p.clone();
        }
        for r in 0..rows {
            if r == pr {
                continue;
            }
            let f = a[(r, c)].clone();
            if f.is_zero() {
                continue;
            }
            for k in c..cols {
                let v = a[(pr, k)].clone();
                a[(r, k)] = a[(r, k)].clone() - f.clone() * v;
            }
        }
        pivots.push(c);
        pr += 1;
    }
    (a, pivots)
}

pub fn rank<T: Field>(m: &Mat<T>, eps: f64) -> usize {
    if T::EXACT {
        rref(m, eps).1.len()
    } else {
        m.cols() - T::nullspace(m, eps).len()
    }
}

/// Kernel basis from the reduced row echelon form; one vector per free column.
pub fn nullspace_rref<T: Field>(m: &Mat<T>, eps: f64) -> Vec<Vec<T>> {
    let (r, pivots) = rref(m, eps);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); cols];
            v[f] = T::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, f)].clone();
            }
            v
        })
        .collect()
}

/// Solve `m x = b`, returning `None` when the system is inconsistent.
pub fn solve<T: Field>(m: &Mat<T>, b: &[T], eps: f64) -> Result<Option<Vec<T>>> {
    if b.len() != m.rows() {
        return Err(Error::dim("right-hand side length"));
    }
    let aug = Mat::from_fn(m.rows(), m.cols() + 1, |r, c| {
        if c < m.cols() {
            m[(r, c)].clone()
        } else {
            b[r].clone()
        }
    });
    let (red, pivots) = rref(&aug, eps);
    if pivots.last() == Some(&m.cols()) {
        return Ok(None);
    }
    let mut x = vec![T::zero(); m.cols()];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = red[(row, m.cols())].clone();
    }
    Ok(Some(x))
}

pub fn to_dmatrix<T: Clone + nalgebra::Scalar>(m: &Mat<T>) -> DMatrix<T> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn from_dmatrix<T: Clone + nalgebra::Scalar>(m: &DMatrix<T>) -> Mat<T> {
    Mat::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)].clone())
}

/// Kernel by singular-value thresholding: right singular vectors whose
/// singular value is at most `eps` times the largest one (or `eps` when the
/// matrix is tiny).
pub fn nullspace_svd_real(m: &Mat<f64>, eps: f64) -> Vec<Vec<f64>> {
    let cols = m.cols();
    if cols == 0 {
        return Vec::new();
    }
    let padded = pad_rows(m, 0.0);
    let svd = to_dmatrix(&padded).svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let thresh = eps * smax.max(1.0);
    (0..cols)
        .filter(|&i| svd.singular_values[i] <= thresh)
        .map(|i| (0..cols).map(|c| vt[(i, c)]).collect())
        .collect()
}

pub fn nullspace_svd_complex(m: &Mat<C64>, eps: f64) -> Vec<Vec<C64>> {
    let cols = m.cols();
    if cols == 0 {
        return Vec::new();
    }
    let padded = pad_rows(m, C64::new(0.0, 0.0));
    let svd = to_dmatrix(&padded).svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let thresh = eps * smax.max(1.0);
    // Rows of V^H are conjugated kernel vectors.
    (0..cols)
        .filter(|&i| svd.singular_values[i] <= thresh)
        .map(|i| (0..cols).map(|c| vt[(i, c)].conj()).collect())
        .collect()
}

fn pad_rows<T: Clone>(m: &Mat<T>, zero: T) -> Mat<T> {
    if m.rows() >= m.cols() {
        return m.clone();
    }
    Mat::from_fn(m.cols(), m.cols(), |r, c| {
        if r < m.rows() {
            m[(r, c)].clone()
        } else {
            zero.clone()
        }
    })
}

/// Real form of a complex matrix in interleaved coordinates
/// `(Re z_0, Im z_0, Re z_1, ...)`: entry `a + bi` becomes `[[a, -b], [b, a]]`.
pub fn realify<C: ComplexField>(m: &Mat<C>) -> Mat<C::Real> {
    Mat::from_fn(2 * m.rows(), 2 * m.cols(), |r, c| {
        let z = &m[(r / 2, c / 2)];
        match (r % 2, c % 2) {
            (0, 0) | (1, 1) => z.re(),
            (0, 1) => -z.im(),
            _ => z.im(),
        }
    })
}

pub fn realify_vec<C: ComplexField>(v: &[C]) -> Vec<C::Real> {
    v.iter().flat_map(|z| [z.re(), z.im()]).collect()
}

pub fn complexify_vec<C: ComplexField>(v: &[C::Real]) -> Vec<C> {
    v.chunks(2)
        .map(|p| C::from_parts(p[0].clone(), p[1].clone()))
        .collect()
}

/// Returns the number of the first vanishing power of `m`, if `m` is
/// nilpotent (exactly, entry by entry).
fn nilpotency_index(m: &Mat<C64>) -> Option<usize> {
    let n = m.rows();
    let mut p = m.clone();
    for k in 1..=n {
        if p.as_slice().iter().all(|z| z.re == 0.0 && z.im == 0.0) {
            return Some(k);
        }
        p = p.mul(m).ok()?;
    }
    if p.as_slice().iter().all(|z| z.re == 0.0 && z.im == 0.0) {
        Some(n + 1)
    } else {
        None
    }
}

/// Matrix exponential. Nilpotent inputs use the finite series; everything
/// else uses scaling and squaring with a Taylor series truncated once the
/// terms drop below machine precision.
pub fn expm(m: &Mat<C64>) -> Mat<C64> {
    let n = m.rows();
    assert_eq!(n, m.cols(), "expm of a non-square matrix");
    if let Some(k) = nilpotency_index(m) {
        let mut out = Mat::<C64>::identity(n);
        let mut term = Mat::<C64>::identity(n);
        for j in 1..k {
            term = term.mul(m).expect("square").scale(&C64::new(1.0 / j as f64, 0.0));
            out = out.add(&term).expect("square");
        }
        return out;
    }
    let norm = (0..n)
        .map(|r| m.row(r).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m.scale(&C64::new(0.5f64.powi(squarings as i32), 0.0));
    let mut out = Mat::<C64>::identity(n);
    let mut term = Mat::<C64>::identity(n);
    for j in 1..40 {
        term = term
            .mul(&scaled)
            .expect("square")
            .scale(&C64::new(1.0 / j as f64, 0.0));
        out = out.add(&term).expect("square");
        if term.max_abs() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        out = out.mul(&out).expect("square");
    }
    out
}

/// `exp(a)` together with its directional derivative along `e`, read off the
/// exponential of the block matrix `[[a, e], [0, a]]`.
pub fn expm_with_derivative(a: &Mat<C64>, e: &Mat<C64>) -> (Mat<C64>, Mat<C64>) {
    let n = a.rows();
    let block = Mat::from_fn(2 * n, 2 * n, |r, c| match (r < n, c < n) {
        (true, true) => a[(r, c)],
        (true, false) => e[(r, c - n)],
        (false, false) => a[(r - n, c - n)],
        (false, true) => C64::new(0.0, 0.0),
    });
    let big = expm(&block);
    let exp = Mat::from_fn(n, n, |r, c| big[(r, c)]);
    let der = Mat::from_fn(n, n, |r, c| big[(r, c + n)]);
    (exp, der)
}

pub fn inverse_c64(m: &Mat<C64>) -> Result<Mat<C64>> {
    to_dmatrix(m)
        .try_inverse()
        .map(|inv| from_dmatrix(&inv))
        .ok_or_else(|| Error::Numeric {
            location: "matrix inverse".into(),
            message: "singular matrix".into(),
        })
}

/// Least-squares coordinates of square matrices in the complex span of a
/// fixed list of matrices.
#[derive(Clone, Debug)]
pub struct SpanProjector {
    size: usize,
    basis: DMatrix<C64>,
    pinv: DMatrix<C64>,
}

impl SpanProjector {
    pub fn new(mats: &[Mat<C64>]) -> Result<Self> {
        let size = mats.first().map_or(0, Mat::rows);
        let basis = DMatrix::from_fn(size * size, mats.len(), |r, c| mats[c].as_slice()[r]);
        let pinv = basis
            .clone()
            .pseudo_inverse(1e-12)
            .map_err(|e| Error::Numeric {
                location: "span projector".into(),
                message: e.to_string(),
            })?;
        Ok(SpanProjector { size, basis, pinv })
    }

    pub fn coords(&self, m: &Mat<C64>) -> Vec<C64> {
        let v = DVector::from_row_slice(m.as_slice());
        (&self.pinv * v).iter().copied().collect()
    }

    /// Distance from `m` to the span.
    pub fn residual(&self, m: &Mat<C64>) -> f64 {
        let v = DVector::from_row_slice(m.as_slice());
        let back = &self.basis * (&self.pinv * &v);
        (back - v).norm()
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

/// Euclidean norm of a complex vector.
pub fn norm_c64(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Q};
    use num_traits::Zero;

    fn qm(rows: &[&[i64]]) -> Mat<Q> {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| q(v, 1)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn exact_nullspace_of_rank_one() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        let ker = nullspace_rref(&m, 0.0);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn svd_nullspace_matches_exact_dimension() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let ker = nullspace_svd_real(&m.to_f64(), 1e-9);
        assert_eq!(ker.len(), 1);
        let r = m.to_f64().mul_vec(&ker[0]).unwrap();
        assert!(r.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn wide_matrix_kernel_is_padded() {
        let m = qm(&[&[1, 1, 0, 0]]);
        assert_eq!(nullspace_svd_real(&m.to_f64(), 1e-9).len(), 3);
        assert_eq!(nullspace_rref(&m, 0.0).len(), 3);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = qm(&[&[1, 0], &[0, 0]]);
        assert!(solve(&m, &[q(1, 1), q(1, 1)], 0.0).unwrap().is_none());
        let x = solve(&m, &[q(3, 1), q(0, 1)], 0.0).unwrap().unwrap();
        assert_eq!(x[0], q(3, 1));
    }

    #[test]
    fn realify_multiplication_by_i() {
        let i = Mat::from_rows(vec![vec![C64::new(0.0, 1.0)]]).unwrap();
        let r = realify(&i);
        assert_eq!(r.to_rows(), vec![vec![0.0, -1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn expm_of_rotation_generator() {
        let t = std::f64::consts::FRAC_PI_2;
        let a = Mat::from_rows(vec![
            vec![C64::new(0.0, 0.0), C64::new(-t, 0.0)],
            vec![C64::new(t, 0.0), C64::new(0.0, 0.0)],
        ])
        .unwrap();
        let e = expm(&a);
        assert!((e[(0, 0)].re).abs() < 1e-15);
        assert!((e[(1, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn expm_of_nilpotent_is_exact_finite_series() {
        let z = C64::new(0.0, 0.0);
        let o = C64::new(1.0, 0.0);
        let n = Mat::from_rows(vec![vec![z, o, z], vec![z, z, o], vec![z, z, z]]).unwrap();
        let e = expm(&n);
        assert_eq!(e[(0, 2)], C64::new(0.5, 0.0));
        assert_eq!(e[(0, 1)], o);
    }

    #[test]
    fn expm_derivative_matches_finite_difference() {
        let a = Mat::from_fn(3, 3, |r, c| C64::new(0.3 * r as f64 - 0.2 * c as f64, 0.1 * (r * c) as f64));
        let e = Mat::from_fn(3, 3, |r, c| C64::new(((r + 2 * c) % 3) as f64 - 1.0, 0.0));
        let (_, d) = expm_with_derivative(&a, &e);
        let h = 1e-5;
        let plus = expm(&a.add(&e.scale(&C64::new(h, 0.0))).unwrap());
        let minus = expm(&a.sub(&e.scale(&C64::new(h, 0.0))).unwrap());
        let fd = plus.sub(&minus).unwrap().scale(&C64::new(0.5 / h, 0.0));
        assert!(fd.sub(&d).unwrap().max_abs() < 1e-8);
    }
}
