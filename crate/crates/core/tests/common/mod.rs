//! Brute-force oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use std::f64::consts::PI;

use eqbundle_core::lie::{FieldKind, LieAlgebra};
use eqbundle_core::linalg::Mat;
use eqbundle_core::scalar::{Field, C64, Q};
use eqbundle_core::semidirect::MatrixGroupModel;
use nalgebra::DMatrix;

pub const CIRCLE_SAMPLES: usize = 360;

/// `ad(v)` on a real algebra, assembled from brackets of basis vectors.
pub fn ad_real(k: &LieAlgebra, v: &[f64]) -> DMatrix<f64> {
    let d = k.dim();
    let vc: Vec<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
    let mut m = DMatrix::zeros(d, d);
    for j in 0..d {
        let e: Vec<C64> = (0..d).map(|i| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect();
        let col = k.bracket(&vc, &e).expect("bracket");
        for i in 0..d {
            m[(i, j)] = col[i].re;
        }
    }
    m
}

pub fn to_dm(m: &Mat<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)])
}

pub fn q_to_dm(m: &Mat<Q>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)].to_f64())
}

/// Realified `Ad(exp(t·ξ_j))` on `n`, computed in the matrix model.
pub fn model_n_adjoint(model: &MatrixGroupModel, j: usize, t: f64) -> DMatrix<f64> {
    let ks = &model.ks_matrices()[j];
    let size = model.size();
    let gen = DMatrix::from_fn(size, size, |r, c| ks[(r, c)] * t);
    let g = gen.exp();
    let g_inv = (-gen).exp();
    let mats = model.n_matrices();
    let dn = mats.len();
    let mut out = DMatrix::zeros(2 * dn, 2 * dn);
    for a in 0..dn {
        for (part, scale) in [(0, C64::new(1.0, 0.0)), (1, C64::new(0.0, 1.0))] {
            let m = DMatrix::from_fn(size, size, |r, c| mats[a][(r, c)] * scale);
            let moved = &g * m * &g_inv;
            let moved = Mat::from_fn(size, size, |r, c| moved[(r, c)]);
            let coords = model.n_coords(&moved);
            for (b, z) in coords.iter().enumerate() {
                out[(2 * b, 2 * a + part)] = z.re;
                out[(2 * b + 1, 2 * a + part)] = z.im;
            }
        }
    }
    out
}

/// Realified `exp(t·A)` for a complex matrix `A` acting on `C^n`.
pub fn realified_exp(a: &DMatrix<C64>, t: f64) -> DMatrix<f64> {
    let e = (a * C64::new(t, 0.0)).exp();
    let n = e.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let z = e[(r / 2, c / 2)];
        match (r % 2, c % 2) {
            (0, 0) | (1, 1) => z.re,
            (0, 1) => -z.im,
            _ => z.im,
        }
    })
}

/// Projector onto `W^{K(S)}` by averaging each one-parameter subgroup over
/// `CIRCLE_SAMPLES` points of `[0, 2π)` and intersecting the fixed spaces.
/// `n_adjoint(j, t)` is the realified `Ad(exp(t ξ_j))` on `n`.
pub fn circle_average_projector(
    k: &LieAlgebra,
    dbeta: &Mat<Q>,
    n_adjoint: &dyn Fn(usize, f64) -> DMatrix<f64>,
) -> DMatrix<f64> {
    let dk = k.dim();
    let ks_dim = dbeta.cols();
    let dn = n_adjoint(0, 0.0).nrows();
    let dim = dk * dn;
    let mut constraints: Vec<DMatrix<f64>> = Vec::new();
    for j in 0..ks_dim {
        let image: Vec<f64> = (0..dk).map(|r| dbeta[(r, j)].to_f64()).collect();
        let ad = ad_real(k, &image);
        let mut avg = DMatrix::zeros(dim, dim);
        for m in 0..CIRCLE_SAMPLES {
            let t = 2.0 * PI * m as f64 / CIRCLE_SAMPLES as f64;
            let big = (&ad * t).exp();
            let r_inv = n_adjoint(j, -t);
            // Ω ↦ Ad(β(k)) Ω Ad_k^{-1} on row-major coordinates.
            avg += big.kronecker(&r_inv.transpose());
        }
        avg /= CIRCLE_SAMPLES as f64;
        constraints.push(avg - DMatrix::identity(dim, dim));
    }
    let mut stacked = DMatrix::zeros(constraints.len() * dim, dim);
    for (i, c) in constraints.iter().enumerate() {
        stacked.view_mut((i * dim, 0), (dim, dim)).copy_from(c);
    }
    let kernel = kernel_basis(&stacked, 1e-7);
    projector(&kernel, dim)
}

/// Orthonormal basis of the numerical kernel.
pub fn kernel_basis(m: &DMatrix<f64>, tol: f64) -> Vec<Vec<f64>> {
    let n = m.ncols();
    let gram = m.transpose() * m;
    let eig = gram.symmetric_eigen();
    (0..n)
        .filter(|&i| eig.eigenvalues[i].abs().sqrt() < tol)
        .map(|i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect()
}

/// Orthogonal projector onto the span of `vectors`.
pub fn projector(vectors: &[Vec<f64>], dim: usize) -> DMatrix<f64> {
    if vectors.is_empty() {
        return DMatrix::zeros(dim, dim);
    }
    let a = DMatrix::from_fn(dim, vectors.len(), |r, c| vectors[c][r]);
    let svd = a.svd(true, false);
    let u = svd.u.expect("u");
    let rank = svd.singular_values.iter().filter(|&&s| s > 1e-10).count();
    let u = u.columns(0, rank);
    u * u.transpose()
}

pub fn q_vectors_to_f64(vs: &[Vec<Q>]) -> Vec<Vec<f64>> {
    vs.iter().map(|v| v.iter().map(Field::to_f64).collect()).collect()
}

/// `su(2)` on the basis `iH, E12 − E21, i(E12 + E21)`, from its brackets.
pub fn su2() -> LieAlgebra {
    use eqbundle_core::scalar::cqi;
    LieAlgebra::new(
        "su2",
        FieldKind::Real,
        3,
        None,
        vec![(0, 1, 2, cqi(2, 0)), (0, 2, 1, cqi(-2, 0)), (1, 2, 0, cqi(2, 0))],
    )
    .expect("su2")
}

/// `Ad(exp(Y_m) ⋯ exp(Y_1))` from factors listed as `[Y_1, .., Y_m]`.
pub fn adjoint_of_factors(k: &LieAlgebra, factors: &[Vec<f64>]) -> DMatrix<f64> {
    let mut r = DMatrix::identity(k.dim(), k.dim());
    for y in factors {
        r = ad_real(k, y).exp() * r;
    }
    r
}

/// `[dβ | ω]` of a pair as one real matrix.
pub fn pair_matrix(p: &eqbundle_core::moduli::CandidatePair) -> DMatrix<f64> {
    let db = q_to_dm(p.beta().dbeta());
    let om = q_to_dm(p.omega());
    let mut m = DMatrix::zeros(db.nrows(), db.ncols() + om.ncols());
    m.view_mut((0, 0), db.shape()).copy_from(&db);
    m.view_mut((0, db.ncols()), om.shape()).copy_from(&om);
    m
}

/// `k·p = (Ad(k)∘β, Ad(k)∘ω)` for `k = exp(Y)`, rounded to rationals.
pub fn conjugate_pair(
    p: &eqbundle_core::moduli::CandidatePair,
    y: &[f64],
) -> eqbundle_core::moduli::CandidatePair {
    use eqbundle_core::moduli::{CandidatePair, HomomorphismDatum};
    let beta = p.beta();
    let k = beta.target();
    let ad = ad_real(k, y).exp();
    let to_q = |m: DMatrix<f64>| Mat::from_fn(m.nrows(), m.ncols(), |r, c| Q::from_f64(m[(r, c)]));
    let dbeta = to_q(&ad * q_to_dm(beta.dbeta()));
    let omega = to_q(&ad * q_to_dm(p.omega()));
    let datum = HomomorphismDatum::unchecked(
        beta.source().clone(),
        k.clone(),
        dbeta,
        beta.zeta().to_vec(),
        beta.w0(),
    )
    .expect("shapes");
    CandidatePair::unchecked(datum, omega)
}

/// `w0` read off the model: `[Z, N] = i·w0·N` for every generator `N` of `n`.
pub fn model_w0(e: &eqbundle_core::catalog::CatalogEntry) -> i64 {
    let m = e.model.as_ref().unwrap();
    let zeta: Vec<f64> = e.z_data.zeta().iter().map(Field::to_f64).collect();
    let size = m.size();
    let mut z = DMatrix::<C64>::zeros(size, size);
    for (c, k) in zeta.iter().zip(m.ks_matrices()) {
        z += DMatrix::from_fn(size, size, |r, s| k[(r, s)] * *c);
    }
    let mut w = None;
    for n in m.n_matrices() {
        let n = DMatrix::from_fn(size, size, |r, s| n[(r, s)]);
        let br = &z * &n - &n * &z;
        let (i, _) = n.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).unwrap();
        let ratio = br[i] / (n[i] * C64::new(0.0, 1.0));
        assert!((&br - &n * C64::new(0.0, ratio.re)).norm() < 1e-12, "{}: not a scalar action", e.id);
        let r = ratio.re.round() as i64;
        assert!(w.is_none() || w == Some(r));
        w = Some(r);
    }
    w.unwrap()
}
