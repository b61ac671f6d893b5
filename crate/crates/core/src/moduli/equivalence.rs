use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg;
use crate::moduli::CandidatePair;
use crate::scalar::Cq;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Equivalent,
    Inequivalent,
    Undecided,
}

/// Limits of the numerical orbit search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchBudget {
    pub starts: usize,
    pub iterations: usize,
    pub seed: u64,
    /// Largest entry of `Ad(k)·M1 − M2` accepted for a witness.
    pub accept: f64,
    /// Relative tolerance of the invariant separators.
    pub separator_tol: f64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            starts: 24,
            iterations: 80,
            seed: 0,
            accept: 1e-10,
            separator_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EquivalenceReport {
    pub verdict: Verdict,
    /// `k = exp(Y_m) ⋯ exp(Y_1)`, listed as `[Y_1, .., Y_m]` in coordinates of `k`.
    pub witness: Option<Vec<Vec<f64>>>,
    pub witness_residual: Option<f64>,
    pub separator: Option<String>,
    pub starts_tried: usize,
    pub seed: u64,
}

/// Decides whether `p2 = Ad(k)·p1` for some `k ∈ K`.
///
/// Ad-invariant separators are tried first; only they can produce
/// `Inequivalent`. Then a seeded multi-start Levenberg–Marquardt search on
/// `Ad(K)` looks for a witness. Running out of budget gives `Undecided`.
pub fn equivalent_pairs(
    p1: &CandidatePair,
    p2: &CandidatePair,
    k: &LieAlgebra,
    budget: SearchBudget,
) -> Result<EquivalenceReport> {
    let m1 = combined(p1, k)?;
    let m2 = combined(p2, k)?;
    if m1.shape() != m2.shape() {
        return Err(Error::dim("pairs have different shapes"));
    }
    if p1.beta().zeta() != p2.beta().zeta() || p1.beta().w0() != p2.beta().w0() {
        return Err(Error::input("pairs carry different Z data"));
    }
    let base = SearchBase {
        starts_tried: 0,
        seed: budget.seed,
    };
    if let Some(sep) = separate(&m1, &m2, k, budget.separator_tol) {
        return Ok(base.report(Verdict::Inequivalent, None, None, Some(sep)));
    }
    let ads = adjoint_basis(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for start in 0..budget.starts {
        let y0: Vec<f64> = if start == 0 {
            vec![0.0; k.dim()]
        } else {
            (0..k.dim()).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect()
        };
        if let Some((factors, _)) = search(&ads, &m1, &m2, y0, budget) {
            let r = witness_adjoint(k, &factors)?;
            let residual = (r * &m1 - &m2).abs().max();
            if residual <= budget.accept.max(1e-9) {
                let base = SearchBase {
                    starts_tried: start + 1,
                    seed: budget.seed,
                };
                return Ok(base.report(Verdict::Equivalent, Some(factors), Some(residual), None));
            }
        }
    }
    let base = SearchBase {
        starts_tried: budget.starts,
        seed: budget.seed,
    };
    Ok(base.report(Verdict::Undecided, None, None, None))
}

struct SearchBase {
    starts_tried: usize,
    seed: u64,
}

impl SearchBase {
    fn report(
        self,
        verdict: Verdict,
        witness: Option<Vec<Vec<f64>>>,
        witness_residual: Option<f64>,
        separator: Option<String>,
    ) -> EquivalenceReport {
        EquivalenceReport {
            verdict,
            witness,
            witness_residual,
            separator,
            starts_tried: self.starts_tried,
            seed: self.seed,
        }
    }
}

/// `[dβ | ω]` as one real matrix with `dim k` rows.
fn combined(p: &CandidatePair, k: &LieAlgebra) -> Result<DMatrix<f64>> {
    if p.beta().target() != k {
        return Err(Error::input("pair does not target the given algebra"));
    }
    let db = p.beta().dbeta_f64();
    let om = p.omega_f64();
    let cols = db.cols() + om.cols();
    Ok(DMatrix::from_fn(k.dim(), cols, |r, c| {
        if c < db.cols() {
            db[(r, c)]
        } else {
            om[(r, c - db.cols())]
        }
    }))
}

fn adjoint_basis(k: &LieAlgebra) -> Result<Vec<DMatrix<f64>>> {
    (0..k.dim())
        .map(|i| {
            let ad = k.ad_matrix(&k.basis_vector::<Cq>(i))?.real_part().to_f64();
            Ok(linalg::to_dmatrix(&ad))
        })
        .collect()
}

fn ad_of(ads: &[DMatrix<f64>], y: &[f64]) -> DMatrix<f64> {
    let d = ads[0].nrows();
    let mut out = DMatrix::zeros(d, d);
    for (c, a) in y.iter().zip(ads) {
        out += a * *c;
    }
    out
}

/// `Ad(k)` for `k = exp(Y_m) ⋯ exp(Y_1)`.
pub fn witness_adjoint(k: &LieAlgebra, factors: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let ads = adjoint_basis(k)?;
    let mut r = DMatrix::identity(k.dim(), k.dim());
    for y in factors {
        r = ad_of(&ads, y).exp() * r;
    }
    Ok(r)
}

fn search(
    ads: &[DMatrix<f64>],
    m1: &DMatrix<f64>,
    m2: &DMatrix<f64>,
    y0: Vec<f64>,
    budget: SearchBudget,
) -> Option<(Vec<Vec<f64>>, f64)> {
    let d = ads.len();
    let mut r = ad_of(ads, &y0).exp();
    let mut factors = vec![y0];
    let cost = |r: &DMatrix<f64>| (r * m1 - m2).norm_squared();
    let mut c = cost(&r);
    let mut lambda = 1e-3;
    for _ in 0..budget.iterations {
        let rm1 = &r * m1;
        let e = &rm1 - m2;
        if e.abs().max() <= budget.accept * 0.1 {
            return Some((factors, c));
        }
        let n = e.len();
        let jac = DMatrix::from_fn(n, d, |row, j| {
            let col = row / e.nrows();
            let rr = row % e.nrows();
            (&ads[j] * rm1.column(col))[rr]
        });
        let ev = DVector::from_column_slice(e.as_slice());
        let jtj = jac.transpose() * &jac;
        let jte = jac.transpose() * ev;
        let mut improved = false;
        for _ in 0..12 {
            let mut a = jtj.clone();
            for i in 0..d {
                a[(i, i)] += lambda * (1.0 + jtj[(i, i)]);
            }
            let Some(step) = a.lu().solve(&(-&jte)) else {
                lambda *= 10.0;
                continue;
            };
            let y: Vec<f64> = step.iter().copied().collect();
            let candidate = ad_of(ads, &y).exp() * &r;
            let cc = cost(&candidate);
            if cc < c {
                r = candidate;
                c = cc;
                factors.push(y);
                lambda = (lambda / 3.0).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    let e = (&r * m1 - m2).abs().max();
    (e <= budget.accept).then_some((factors, c))
}

/// Ad-invariant separators: the traces `tr(ad(X)^j)` of each column `X`,
/// which fix the characteristic polynomial of `ad(X)`, the Gram matrix of
/// the columns under an invariant inner product, and the projection of each
/// column onto the center.
fn separate(m1: &DMatrix<f64>, m2: &DMatrix<f64>, k: &LieAlgebra, tol: f64) -> Option<String> {
    let scale = 1.0 + m1.abs().max().max(m2.abs().max());
    let ads = adjoint_basis(k).ok()?;
    for c in 0..m1.ncols() {
        let a1 = ad_of(&ads, m1.column(c).as_slice());
        let a2 = ad_of(&ads, m2.column(c).as_slice());
        let unit = a1.norm().max(a2.norm()).max(1.0);
        let gap = power_traces(&a1)
            .iter()
            .zip(power_traces(&a2))
            .enumerate()
            .map(|(j, (x, y))| (x - y).abs() / unit.powi(j as i32 + 1))
            .fold(0.0, f64::max);
        if gap > tol * a1.nrows() as f64 {
            return Some(format!(
                "characteristic polynomial of ad(column {c}) differs by {gap:.3e}"
            ));
        }
    }
    if k.has_invariant_gram() {
        let g = linalg::to_dmatrix(&k.invariant_gram());
        let g1 = m1.transpose() * &g * m1;
        let g2 = m2.transpose() * &g * m2;
        let gap = (g1 - g2).abs().max();
        if gap > tol * scale * scale {
            return Some(format!("invariant Gram matrices of the columns differ by {gap:.3e}"));
        }
    }
    if let Some(pz) = k.center_projection() {
        let pz = linalg::to_dmatrix(&pz);
        let gap = (&pz * m1 - &pz * m2).abs().max();
        if gap > tol * scale {
            return Some(format!("center components differ by {gap:.3e}"));
        }
    }
    None
}

/// `tr(M^j)` for `j = 1..=dim`.
fn power_traces(m: &DMatrix<f64>) -> Vec<f64> {
    let mut p = DMatrix::identity(m.nrows(), m.ncols());
    (0..m.nrows())
        .map(|_| {
            p = &p * m;
            p.trace()
        })
        .collect()
}
