use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lie::{FieldKind, LieAlgebra};
use crate::linalg::{self, Mat};
use crate::scalar::{Cq, C64, Q};

/// A Lie algebra realized as a span of square matrices. Real algebras are
/// real spans of (possibly complex) matrices, complex algebras complex spans.
#[derive(Clone, Debug)]
pub struct MatrixBasis {
    size: usize,
    field: FieldKind,
    mats: Vec<Mat<Cq>>,
}

impl MatrixBasis {
    pub fn new(field: FieldKind, mats: Vec<Mat<Cq>>) -> Result<Self> {
        let size = mats.first().map_or(0, Mat::rows);
        if mats.iter().any(|m| m.shape() != (size, size)) {
            return Err(Error::dim("matrix basis with differing shapes"));
        }
        let basis = MatrixBasis { size, field, mats };
        let system = basis.system();
        let rank = linalg::rref(&system, 0.0).1.len();
        if rank != basis.mats.len() {
            return Err(Error::input(format!(
                "matrix basis is linearly dependent (rank {rank} of {})",
                basis.mats.len()
            )));
        }
        Ok(basis)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn matrices(&self) -> &[Mat<Cq>] {
        &self.mats
    }

    /// Coefficient system: one column per basis matrix. For real spans every
    /// complex entry contributes its real and imaginary part as two rows.
    fn system(&self) -> Mat<Cq> {
        let n2 = self.size * self.size;
        match self.field {
            FieldKind::Complex => Mat::from_fn(n2, self.mats.len(), |r, c| {
                self.mats[c].as_slice()[r].clone()
            }),
            FieldKind::Real => Mat::from_fn(2 * n2, self.mats.len(), |r, c| {
                let z = &self.mats[c].as_slice()[r / 2];
                let part = if r % 2 == 0 { z.re.clone() } else { z.im.clone() };
                Cq::new(part, Q::zero())
            }),
        }
    }

    fn rhs(&self, m: &Mat<Cq>) -> Vec<Cq> {
        match self.field {
            FieldKind::Complex => m.as_slice().to_vec(),
            FieldKind::Real => m
                .as_slice()
                .iter()
                .flat_map(|z| [Cq::new(z.re.clone(), Q::zero()), Cq::new(z.im.clone(), Q::zero())])
                .collect(),
        }
    }

    /// Exact coordinates of `m` in this basis; errors when `m` is not in the span.
    pub fn coords(&self, m: &Mat<Cq>) -> Result<Vec<Cq>> {
        if m.shape() != (self.size, self.size) {
            return Err(Error::dim("matrix of the wrong size"));
        }
        linalg::solve(&self.system(), &self.rhs(m), 0.0)?
            .ok_or_else(|| Error::input("matrix is not in the span of the basis"))
    }

    pub fn contains(&self, m: &Mat<Cq>) -> bool {
        self.coords(m).is_ok()
    }

    pub fn matrix(&self, coords: &[Cq]) -> Result<Mat<Cq>> {
        if coords.len() != self.mats.len() {
            return Err(Error::dim("coordinate vector length"));
        }
        let mut out = Mat::zeros(self.size, self.size);
        for (c, m) in coords.iter().zip(&self.mats) {
            if !c.is_zero() {
                out = out.add(&m.scale(c))?;
            }
        }
        Ok(out)
    }

    pub fn matrix_c64(&self, coords: &[C64]) -> Mat<C64> {
        let mut out = Mat::zeros(self.size, self.size);
        for (c, m) in coords.iter().zip(&self.mats) {
            out = out.add(&m.to_c64().scale(c)).expect("same shape");
        }
        out
    }

    /// Structure constants of the span under the matrix commutator.
    pub fn lie_algebra(&self, name: &str, labels: Option<Vec<String>>) -> Result<LieAlgebra> {
        let d = self.mats.len();
        let mut entries = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                let br = self.mats[i].commutator(&self.mats[j])?;
                let coords = self.coords(&br).map_err(|_| {
                    Error::Construction(format!(
                        "{name}: commutator of basis matrices {i} and {j} leaves the span"
                    ))
                })?;
                for (k, c) in coords.into_iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((i, j, k, c));
                    }
                }
            }
        }
        LieAlgebra::new(name, self.field, d, labels, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cqi;

    fn m2(a: [[(i64, i64); 2]; 2]) -> Mat<Cq> {
        Mat::from_fn(2, 2, |r, c| cqi(a[r][c].0, a[r][c].1))
    }

    #[test]
    fn sl2_from_matrix_commutators() {
        let h = m2([[(1, 0), (0, 0)], [(0, 0), (-1, 0)]]);
        let e = m2([[(0, 0), (1, 0)], [(0, 0), (0, 0)]]);
        let f = m2([[(0, 0), (0, 0)], [(1, 0), (0, 0)]]);
        let basis = MatrixBasis::new(FieldKind::Complex, vec![h, e, f]).unwrap();
        let g = basis.lie_algebra("sl2", None).unwrap();
        let e_v = g.basis_vector::<Cq>(1);
        let f_v = g.basis_vector::<Cq>(2);
        assert_eq!(g.bracket(&e_v, &f_v).unwrap(), g.basis_vector::<Cq>(0));
        assert!(g.check_jacobi::<Cq>(0.0).passed);
    }

    #[test]
    fn real_span_rejects_complex_multiples() {
        let ih = m2([[(0, 1), (0, 0)], [(0, 0), (0, -1)]]);
        let basis = MatrixBasis::new(FieldKind::Real, vec![ih]).unwrap();
        let h = m2([[(1, 0), (0, 0)], [(0, 0), (-1, 0)]]);
        assert!(basis.coords(&h).is_err());
        let two_ih = m2([[(0, 2), (0, 0)], [(0, 0), (0, -2)]]);
        assert_eq!(basis.coords(&two_ih).unwrap(), vec![cqi(2, 0)]);
    }

    #[test]
    fn dependent_basis_is_rejected() {
        let e = m2([[(0, 0), (1, 0)], [(0, 0), (0, 0)]]);
        let ie = m2([[(0, 0), (0, 1)], [(0, 0), (0, 0)]]);
        assert!(MatrixBasis::new(FieldKind::Complex, vec![e.clone(), ie.clone()]).is_err());
        assert!(MatrixBasis::new(FieldKind::Real, vec![e, ie]).is_ok());
    }
}
