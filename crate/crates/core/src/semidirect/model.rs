use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::MatrixBasis;
use crate::linalg::{self, Mat, SpanProjector};
use crate::scalar::C64;
use crate::semidirect::SemidirectSum;

/// Matrix realization of `N ⋊ S` inside `GL(m)`: `N` and `S` are
/// exponentials of the given spans, the product is matrix multiplication and
/// `η` is conjugation.
#[derive(Clone, Debug)]
pub struct MatrixGroupModel {
    n: MatrixBasis,
    s: MatrixBasis,
    ks: Option<MatrixBasis>,
    n64: Vec<Mat<C64>>,
    s64: Vec<Mat<C64>>,
    ks64: Vec<Mat<C64>>,
    n_proj: SpanProjector,
    p_proj: SpanProjector,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConsistencyReport {
    pub h: f64,
    pub pairs_checked: usize,
    pub max_residual: f64,
}

impl MatrixGroupModel {
    pub fn new(n: MatrixBasis, s: MatrixBasis, ks: Option<MatrixBasis>) -> Result<Self> {
        let size = n.size();
        if s.size() != size || ks.as_ref().is_some_and(|k| k.size() != size) {
            return Err(Error::dim("model bases of different matrix sizes"));
        }
        let c64 = |b: &MatrixBasis| b.matrices().iter().map(Mat::to_c64).collect::<Vec<_>>();
        let n64 = c64(&n);
        let s64 = c64(&s);
        let ks64 = ks.as_ref().map(c64).unwrap_or_default();
        let n_proj = SpanProjector::new(&n64)?;
        let mut p64 = n64.clone();
        p64.extend(s64.iter().cloned());
        let p_proj = SpanProjector::new(&p64)?;
        Ok(MatrixGroupModel {
            n,
            s,
            ks,
            n64,
            s64,
            ks64,
            n_proj,
            p_proj,
        })
    }

    pub fn size(&self) -> usize {
        self.n.size()
    }

    pub fn n_basis(&self) -> &MatrixBasis {
        &self.n
    }

    pub fn s_basis(&self) -> &MatrixBasis {
        &self.s
    }

    pub fn ks_basis(&self) -> Option<&MatrixBasis> {
        self.ks.as_ref()
    }

    pub fn n_matrices(&self) -> &[Mat<C64>] {
        &self.n64
    }

    pub fn s_matrices(&self) -> &[Mat<C64>] {
        &self.s64
    }

    pub fn ks_matrices(&self) -> &[Mat<C64>] {
        &self.ks64
    }

    pub fn n_element(&self, coords: &[C64]) -> Mat<C64> {
        combine(self.size(), &self.n64, coords)
    }

    pub fn s_element(&self, coords: &[C64]) -> Mat<C64> {
        combine(self.size(), &self.s64, coords)
    }

    pub fn ks_element(&self, coords: &[f64]) -> Mat<C64> {
        let c: Vec<C64> = coords.iter().map(|&x| C64::new(x, 0.0)).collect();
        combine(self.size(), &self.ks64, &c)
    }

    pub fn exp_n(&self, coords: &[C64]) -> Mat<C64> {
        linalg::expm(&self.n_element(coords))
    }

    pub fn exp_s(&self, coords: &[C64]) -> Mat<C64> {
        linalg::expm(&self.s_element(coords))
    }

    /// `η(g)(x) = g x g⁻¹`.
    pub fn eta(&self, g: &Mat<C64>, x: &Mat<C64>) -> Result<Mat<C64>> {
        g.mul(x)?.mul(&linalg::inverse_c64(g)?)
    }

    /// Coordinates of a matrix in the basis of `p = n ⊕ s`.
    pub fn p_coords(&self, m: &Mat<C64>) -> Vec<C64> {
        self.p_proj.coords(m)
    }

    pub fn p_residual(&self, m: &Mat<C64>) -> f64 {
        self.p_proj.residual(m)
    }

    pub fn n_coords(&self, m: &Mat<C64>) -> Vec<C64> {
        self.n_proj.coords(m)
    }

    /// Largest distance from the span of `n` of `η(exp ξ)(x)` over sampled
    /// `ξ ∈ s` and `x ∈ n`.
    pub fn eta_residual(&self, samples: usize, seed: u64) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let xi = random_coords(&mut rng, self.s64.len());
            let x = random_coords(&mut rng, self.n64.len());
            let g = self.exp_s(&xi);
            let moved = self.eta(&g, &self.n_element(&x))?;
            worst = worst.max(self.n_proj.residual(&moved));
        }
        Ok(worst)
    }
}

fn combine(size: usize, mats: &[Mat<C64>], coords: &[C64]) -> Mat<C64> {
    let mut out = Mat::zeros(size, size);
    for (c, m) in coords.iter().zip(mats) {
        if *c != C64::new(0.0, 0.0) {
            out = out.add(&m.scale(c)).expect("same shape");
        }
    }
    out
}

fn random_coords(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), 0.0))
        .collect()
}

/// Symmetrized group commutator `((c(h) + c(-h))/2 - I) / h²` with
/// `c(t) = e^{tX} e^{tY} e^{-tX} e^{-tY}`; equals `[X, Y] + O(h²)`.
pub fn commutator_fd(x: &Mat<C64>, y: &Mat<C64>, h: f64) -> Mat<C64> {
    let n = x.rows();
    let c = |t: f64| {
        let s = C64::new(t, 0.0);
        let ex = linalg::expm(&x.scale(&s));
        let ey = linalg::expm(&y.scale(&s));
        let exi = linalg::expm(&x.scale(&-s));
        let eyi = linalg::expm(&y.scale(&-s));
        ex.mul(&ey).and_then(|m| m.mul(&exi)).and_then(|m| m.mul(&eyi)).expect("square")
    };
    let avg = c(h).add(&c(-h)).expect("square").scale(&C64::new(0.5, 0.0));
    avg.sub(&Mat::identity(n)).expect("square").scale(&C64::new(1.0 / (h * h), 0.0))
}

/// Compares finite-difference commutators of one-parameter subgroups with
/// the structure constants of `ss`, on all basis pairs and on `samples`
/// random pairs.
pub fn model_consistency(
    ss: &SemidirectSum,
    m: &MatrixGroupModel,
    samples: usize,
    h: f64,
) -> Result<ConsistencyReport> {
    if ss.dim_n() != m.n64.len() || ss.dim_s() != m.s64.len() {
        return Err(Error::dim(format!(
            "model has {}+{} generators, algebra {}+{}",
            m.n64.len(),
            m.s64.len(),
            ss.dim_n(),
            ss.dim_s()
        )));
    }
    if h <= 0.0 {
        return Err(Error::input("step must be positive"));
    }
    let p = ss.algebra();
    let d = p.dim();
    let mut pairs: Vec<(Vec<C64>, Vec<C64>)> = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            pairs.push((p.basis_vector(i), p.basis_vector(j)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..samples {
        pairs.push((random_coords(&mut rng, d), random_coords(&mut rng, d)));
    }
    let dn = ss.dim_n();
    let to_matrix = |v: &[C64]| {
        m.n_element(&v[..dn])
            .add(&m.s_element(&v[dn..]))
            .expect("same shape")
    };
    let mut worst = 0.0f64;
    for (x, y) in &pairs {
        let fd = commutator_fd(&to_matrix(x), &to_matrix(y), h);
        let coords = m.p_coords(&fd);
        let exact = p.bracket(x, y)?;
        let r = coords
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        worst = worst.max(r);
    }
    Ok(ConsistencyReport {
        h,
        pairs_checked: pairs.len(),
        max_residual: worst,
    })
}
