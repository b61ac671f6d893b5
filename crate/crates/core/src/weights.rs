//! Decomposition of `h = k ⊗ C` under the central circle `Z = exp(Rζ)` and
//! the weight argument that removes the `∂̄`-term.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::RealForm;
use crate::linalg::{self, Mat};
use crate::moduli::{to_antiholomorphic, CandidatePair, HomomorphismDatum};
use crate::scalar::{ComplexField, Cq, Field, Mode, Tolerance, C64, DEFAULT_EPS, Q};

/// Distance to the nearest integer accepted for a weight.
pub const INTEGRALITY_TOL: f64 = 1e-6;

const SCHUR_MAX_ITERATIONS: usize = 10_000;

/// One isotypical block `V^χ`: `exp(tζ)` acts on it by `e^{i n t}`.
#[derive(Clone, Debug)]
pub struct Block {
    pub weight: i64,
    pub basis: Vec<Vec<C64>>,
    pub exact: Option<Vec<Vec<Cq>>>,
}

#[derive(Clone, Debug)]
pub struct IsotypicalDecomposition {
    dim: usize,
    /// `ad(dβ(ζ))` on `h`.
    generator: Mat<Q>,
    blocks: Vec<Block>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecompositionReport {
    pub weights: Vec<i64>,
    pub block_dims: Vec<usize>,
    pub projector_sum_residual: f64,
    pub eigen_residual: f64,
    pub invariance_residual: f64,
}

/// Eigenspaces of `ad(dβ(ζ))` on `h`, labelled by integer weights.
pub fn isotypical_decompose(
    beta: &HomomorphismDatum,
    h: &RealForm,
    tol: Tolerance,
) -> Result<IsotypicalDecomposition> {
    let k = beta.target();
    if !h.matches_codomain(k) {
        return Err(Error::input(format!(
            "{} is not the complexification of {}",
            h.complex().name(),
            k.name()
        )));
    }
    let d = k.dim();
    let z: Vec<Cq> = beta.dbeta_zeta();
    let generator = k.ad_matrix(&z)?.real_part();
    let weights = spectrum_weights(&generator, k)?;
    let mut blocks = Vec::new();
    for &w in &weights {
        let shift = Cq::new(Q::from_i64(0), Q::from_i64(w));
        let (basis, exact) = match tol.mode {
            Mode::Exact => {
                let m = generator.map(|x| Cq::new(x.clone(), Q::from_i64(0)));
                let m = m.sub(&Mat::identity(d).scale(&shift))?;
                let ker = linalg::nullspace_rref(&m, 0.0);
                let float = ker.iter().map(|v| v.iter().map(|z| z.to_c64()).collect()).collect();
                (float, Some(ker))
            }
            Mode::Float => {
                let m = generator.to_f64().map(|&x| C64::new(x, 0.0));
                let m = m.sub(&Mat::identity(d).scale(&C64::new(0.0, w as f64)))?;
                let eps = if tol.eps > 0.0 { tol.eps } else { DEFAULT_EPS };
                (linalg::nullspace_svd_complex(&m, eps.max(1e-12)), None)
            }
        };
        blocks.push(Block {
            weight: w,
            basis,
            exact,
        });
    }
    let total: usize = blocks.iter().map(|b| b.basis.len()).sum();
    if total != d {
        return Err(Error::input(format!(
            "ad(dbeta(zeta)) is not diagonalizable: eigenspaces span {total} of {d} dimensions"
        )));
    }
    Ok(IsotypicalDecomposition {
        dim: d,
        generator,
        blocks,
    })
}

/// Integer weights `n` with `i n` an eigenvalue of `ad(dβ(ζ))`, ascending
/// and without repetition.
fn spectrum_weights(generator: &Mat<Q>, k: &crate::lie::LieAlgebra) -> Result<Vec<i64>> {
    let g = linalg::to_dmatrix(&generator.to_f64());
    let raw: Vec<f64> = if k.has_invariant_gram() {
        // Skew-adjoint for the invariant product: conjugate to a real skew
        // matrix through the Cholesky factor and diagonalize -i times it.
        let gram = linalg::to_dmatrix(&k.invariant_gram());
        let l = gram.clone().cholesky().expect("positive definite").l();
        let lt_inv = l.transpose().try_inverse().expect("invertible");
        let skew = l.transpose() * &g * lt_inv;
        let herm: DMatrix<C64> = skew.map(|x| C64::new(0.0, -x));
        herm.symmetric_eigen().eigenvalues.iter().copied().collect()
    } else {
        let ev = nalgebra::linalg::Schur::try_new(g, f64::EPSILON, SCHUR_MAX_ITERATIONS)
            .ok_or_else(|| Error::input("eigenvalues of ad(dbeta(zeta)) did not converge"))?
            .complex_eigenvalues();
        if let Some(z) = ev.iter().find(|z| z.re.abs() > INTEGRALITY_TOL) {
            return Err(Error::input(format!(
                "ad(dbeta(zeta)) has eigenvalue {z} off the imaginary axis; dbeta(zeta) does not generate a circle"
            )));
        }
        ev.iter().map(|z| z.im).collect()
    };
    let mut weights = Vec::new();
    for x in raw {
        let n = x.round();
        if (x - n).abs() > INTEGRALITY_TOL {
            return Err(Error::input(format!(
                "ad(dbeta(zeta)) has eigenvalue {x:.6}i, not an integer multiple of i; dbeta(zeta) does not generate a circle"
            )));
        }
        weights.push(n as i64);
    }
    weights.sort_unstable();
    weights.dedup();
    Ok(weights)
}

impl IsotypicalDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> Vec<i64> {
        self.blocks.iter().map(|b| b.weight).collect()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, weight: i64) -> Option<&Block> {
        self.blocks.iter().find(|b| b.weight == weight)
    }

    fn change_of_basis(&self) -> DMatrix<C64> {
        let cols: Vec<&Vec<C64>> = self.blocks.iter().flat_map(|b| &b.basis).collect();
        DMatrix::from_fn(self.dim, cols.len(), |r, c| cols[c][r])
    }

    /// Projector onto each block along the others, in block order.
    pub fn projectors(&self) -> Vec<DMatrix<C64>> {
        let p = self.change_of_basis();
        let pinv = p.clone().try_inverse().expect("blocks form a basis");
        let mut out = Vec::new();
        let mut offset = 0;
        for b in &self.blocks {
            let n = b.basis.len();
            let mut sel = DMatrix::<C64>::zeros(self.dim, self.dim);
            for i in offset..offset + n {
                sel[(i, i)] = C64::new(1.0, 0.0);
            }
            out.push(&p * sel * &pinv);
            offset += n;
        }
        out
    }

    pub fn projector(&self, weight: i64) -> Option<DMatrix<C64>> {
        let i = self.blocks.iter().position(|b| b.weight == weight)?;
        Some(self.projectors().swap_remove(i))
    }

    pub fn report(&self, beta: &HomomorphismDatum) -> Result<DecompositionReport> {
        let projectors = self.projectors();
        let mut sum = DMatrix::<C64>::zeros(self.dim, self.dim);
        for p in &projectors {
            sum += p;
        }
        let projector_sum_residual = (sum - DMatrix::<C64>::identity(self.dim, self.dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);

        let g = linalg::to_dmatrix(&self.generator.to_f64()).map(|x| C64::new(x, 0.0));
        let mut eigen_residual = 0.0f64;
        for b in &self.blocks {
            for v in &b.basis {
                let v = nalgebra::DVector::from_column_slice(v);
                let r = &g * &v - &v * C64::new(0.0, b.weight as f64);
                eigen_residual = eigen_residual.max(r.norm() / v.norm().max(f64::MIN_POSITIVE));
            }
        }

        let k = beta.target();
        let mut invariance_residual = 0.0f64;
        for i in 0..beta.source().dim() {
            let image: Vec<C64> = beta.apply(&beta.source().basis_vector::<C64>(i));
            let ad = linalg::to_dmatrix(&k.ad_matrix(&image)?);
            for (b, p) in self.blocks.iter().zip(&projectors) {
                let off = DMatrix::<C64>::identity(self.dim, self.dim) - p;
                for v in &b.basis {
                    let v = nalgebra::DVector::from_column_slice(v);
                    let r = &off * (&ad * &v);
                    invariance_residual = invariance_residual.max(r.norm() / v.norm().max(f64::MIN_POSITIVE));
                }
            }
        }

        Ok(DecompositionReport {
            weights: self.weights(),
            block_dims: self.blocks.iter().map(|b| b.basis.len()).collect(),
            projector_sum_residual,
            eigen_residual,
            invariance_residual,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OmegaWeightReport {
    pub expected_weight: i64,
    pub leakage: f64,
    pub passed: bool,
}

/// Checks that `ω^{0,1}` takes values in `V^{-w0}` and reports the largest
/// component outside it.
pub fn check_omega_weight(
    p: &CandidatePair,
    dec: &IsotypicalDecomposition,
    tol: Tolerance,
) -> Result<OmegaWeightReport> {
    let w0 = p.beta().w0();
    let expected_weight = -w0;
    let alpha: Mat<C64> = to_antiholomorphic(&p.omega_f64())?;
    if alpha.rows() != dec.dim() {
        return Err(Error::dim("omega and decomposition live on different algebras"));
    }
    let keep = dec
        .projector(expected_weight)
        .unwrap_or_else(|| DMatrix::zeros(dec.dim(), dec.dim()));
    let off = DMatrix::<C64>::identity(dec.dim(), dec.dim()) - keep;
    let a = linalg::to_dmatrix(&alpha);
    let leak = &off * &a;
    let leakage = (0..leak.ncols())
        .map(|c| leak.column(c).norm())
        .fold(0.0, f64::max);
    let passed = match tol.mode {
        Mode::Exact => {
            // Exact membership: (ad(dβζ) + i w0) α(e_a) = 0 for every a.
            let alpha_q: Mat<Cq> = to_antiholomorphic(p.omega())?;
            let g = dec.generator.map(|x| Cq::new(x.clone(), Q::from_i64(0)));
            let shifted = g.add(&Mat::identity(dec.dim()).scale(&Cq::new(Q::from_i64(0), Q::from_i64(w0))))?;
            shifted.mul(&alpha_q)?.as_slice().iter().all(num_traits::Zero::is_zero)
        }
        Mode::Float => leakage <= tol.eps.max(f64::EPSILON),
    };
    Ok(OmegaWeightReport {
        expected_weight,
        leakage,
        passed,
    })
}

/// The weight argument: `Z` acts on `V^{-w0} ⊗ Λ²n̄*` with weight
/// `-w0 + 2 w0 = w0`, so for `w0 ≠ 0` there are no invariants.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VanishingCertificate {
    pub w0: i64,
    pub dim_n: usize,
    pub block_weights: Vec<i64>,
    pub verdict: String,
    pub arithmetic: String,
}

impl VanishingCertificate {
    pub fn passed(&self) -> bool {
        self.verdict == "pass" || self.verdict == "vacuous-pass"
    }
}

pub fn dbar_vanishing_certificate(
    dec: &IsotypicalDecomposition,
    w0: i64,
    dim_n: usize,
) -> Result<VanishingCertificate> {
    if w0 == 0 {
        return Err(Error::Hypothesis(
            "single-character scalar action hypothesis violated: w0 = 0, the weight argument does not apply".into(),
        ));
    }
    let (verdict, arithmetic) = if dim_n <= 1 {
        (
            "vacuous-pass".to_string(),
            format!("dim n = {dim_n}, so there are no (0,2)-forms"),
        )
    } else {
        let total = -w0 + 2 * w0;
        (
            "pass".to_string(),
            format!("({}) + 2·({}) = {} ≠ 0", -w0, w0, total),
        )
    };
    Ok(VanishingCertificate {
        w0,
        dim_n,
        block_weights: dec.weights(),
        verdict,
        arithmetic,
    })
}
