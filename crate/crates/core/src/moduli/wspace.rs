use crate::error::{Error, Result};
use crate::lie::{FieldKind, LieAlgebra};
use crate::linalg::{self, Mat};
use crate::moduli::HomomorphismDatum;
use crate::scalar::{magnitude, Cq, Field, Mode, Tolerance, Q};
use crate::semidirect::DerivationAction;

/// `W = Hom_R(n, k)`. An element is a `dim k × dim_R n` matrix `Ω` whose
/// columns are the images of the real basis of `n`; for complex `n` that
/// basis is `(e_0, i e_0, e_1, i e_1, ..)`. Coordinates are the entries of
/// `Ω` in row-major order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WSpace {
    dim_n_real: usize,
    dim_k: usize,
}

impl WSpace {
    pub fn new(n: &LieAlgebra, k: &LieAlgebra) -> Self {
        WSpace {
            dim_n_real: n.real_dim(),
            dim_k: k.dim(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim_n_real * self.dim_k
    }

    pub fn dim_n_real(&self) -> usize {
        self.dim_n_real
    }

    pub fn dim_k(&self) -> usize {
        self.dim_k
    }

    pub fn to_coords<T: Clone>(&self, omega: &Mat<T>) -> Result<Vec<T>> {
        if omega.shape() != (self.dim_k, self.dim_n_real) {
            return Err(Error::dim(format!(
                "omega is {}x{}, expected {}x{}",
                omega.rows(),
                omega.cols(),
                self.dim_k,
                self.dim_n_real
            )));
        }
        Ok(omega.as_slice().to_vec())
    }

    pub fn from_coords<T: Clone>(&self, v: &[T]) -> Result<Mat<T>> {
        if v.len() != self.dim() {
            return Err(Error::dim("coordinate vector length for W"));
        }
        Ok(Mat::from_fn(self.dim_k, self.dim_n_real, |r, c| v[r * self.dim_n_real + c].clone()))
    }
}

/// `act(ξ)` as a real matrix on the real basis of `n`.
pub(crate) fn real_action(action: &DerivationAction, i: usize) -> Mat<Q> {
    let m = &action.matrices()[i];
    match action.target().field() {
        FieldKind::Complex => linalg::realify(m),
        FieldKind::Real => m.real_part(),
    }
}

fn check_compatible(beta: &HomomorphismDatum, d: &DerivationAction) -> Result<()> {
    if beta.source() != d.source() {
        return Err(Error::input("homomorphism datum and action have different K(S)"));
    }
    Ok(())
}

/// For each basis vector `ξ` of `k(S)` the matrix on `W` of
/// `(ξ·ω)(v) = [dβ(ξ), ω(v)] − ω(act(ξ) v)`.
pub fn action_operator(beta: &HomomorphismDatum, d: &DerivationAction) -> Result<Vec<Mat<Q>>> {
    check_compatible(beta, d)?;
    let w = WSpace::new(d.target(), beta.target());
    let k = beta.target();
    (0..beta.source().dim())
        .map(|i| {
            let image = beta.apply::<Cq>(&beta.source().basis_vector::<Cq>(i));
            let ad = k.ad_matrix(&image)?.real_part();
            let r = real_action(d, i);
            Ok(operator_matrix(&w, &ad, &r))
        })
        .collect()
}

/// Matrix of `Ω ↦ A Ω − Ω R` in row-major coordinates.
fn operator_matrix<T: Field>(w: &WSpace, a: &Mat<T>, r: &Mat<T>) -> Mat<T> {
    let dn = w.dim_n_real;
    Mat::from_fn(w.dim(), w.dim(), |row, col| {
        let (ra, rc) = (row / dn, row % dn);
        let (cb, ce) = (col / dn, col % dn);
        let mut v = T::zero();
        if rc == ce {
            v = v + a[(ra, cb)].clone();
        }
        if ra == cb {
            v = v - r[(ce, rc)].clone();
        }
        v
    })
}

/// `ξ·Ω` for a coordinate vector `ξ` of `k(S)`, in floating point.
pub fn act_on_omega(beta: &HomomorphismDatum, d: &DerivationAction, xi: &[f64], omega: &Mat<f64>) -> Result<Mat<f64>> {
    check_compatible(beta, d)?;
    let k = beta.target();
    let xi_c: Vec<crate::scalar::C64> = xi.iter().map(|&x| crate::scalar::C64::new(x, 0.0)).collect();
    let ad = k.ad_matrix(&beta.apply(&xi_c))?.real_part();
    let act = d.apply_c64(&xi_c);
    let r = match d.target().field() {
        FieldKind::Complex => linalg::realify(&act),
        FieldKind::Real => act.real_part(),
    };
    ad.mul(omega)?.sub(&omega.mul(&r)?)
}

/// Basis of the joint kernel of the operators, i.e. of `W^{K(S)}` for
/// connected `K(S)`. Exact mode eliminates over the rationals; floating
/// mode thresholds singular values at `eps`.
pub fn invariant_subspace(ops: &[Mat<Q>], dim: usize, tol: Tolerance) -> Vec<Vec<Q>> {
    if ops.is_empty() {
        return (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { Q::from_i64(1) } else { Q::from_i64(0) }).collect())
            .collect();
    }
    let stacked = Mat::vstack(ops).expect("equal widths");
    match tol.mode {
        Mode::Exact => linalg::nullspace_rref(&stacked, 0.0),
        Mode::Float => linalg::nullspace_svd_real(&stacked.to_f64(), tol.eps)
            .into_iter()
            .map(|v| v.iter().map(|&x| Q::from_f64(x)).collect())
            .collect(),
    }
}

/// A pair `(β, ω)` with `ω ∈ W^{K(S)}`.
#[derive(Clone, Debug)]
pub struct CandidatePair {
    beta: HomomorphismDatum,
    omega: Mat<Q>,
}

impl CandidatePair {
    /// Validates that `ω` is annihilated by every action operator.
    pub fn new(beta: HomomorphismDatum, omega: Mat<Q>, d: &DerivationAction, tol: Tolerance) -> Result<Self> {
        let w = WSpace::new(d.target(), beta.target());
        let coords = w.to_coords(&omega)?;
        let ops = action_operator(&beta, d)?;
        let res = invariance_residual(&ops, &coords, tol);
        if !tol.accepts(res) {
            return Err(Error::input(format!(
                "omega is not K(S)-invariant, residual {res:e}"
            )));
        }
        Ok(CandidatePair { beta, omega })
    }

    pub fn unchecked(beta: HomomorphismDatum, omega: Mat<Q>) -> Self {
        CandidatePair { beta, omega }
    }

    pub fn beta(&self) -> &HomomorphismDatum {
        &self.beta
    }

    pub fn omega(&self) -> &Mat<Q> {
        &self.omega
    }

    pub fn omega_f64(&self) -> Mat<f64> {
        self.omega.to_f64()
    }
}

/// Largest entry of `op · v` over all operators.
pub fn invariance_residual(ops: &[Mat<Q>], v: &[Q], tol: Tolerance) -> f64 {
    match tol.mode {
        Mode::Exact => ops
            .iter()
            .flat_map(|op| op.mul_vec(v).expect("shape"))
            .map(|x| magnitude(&x))
            .fold(0.0, f64::max),
        Mode::Float => {
            let vf: Vec<f64> = v.iter().map(Field::to_f64).collect();
            ops.iter()
                .flat_map(|op| op.to_f64().mul_vec(&vf).expect("shape"))
                .map(f64::abs)
                .fold(0.0, f64::max)
        }
    }
}
