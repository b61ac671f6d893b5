//! Finite-difference checks of connections on `N`, trivialized over the
//! exponential chart `x ↦ exp(Σ x_r N_r)` with `N_{2a} = e_a`, `N_{2a+1} = i e_a`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curvature::TwoFormValued;
use crate::error::{Error, Result};
use crate::lie::{FieldKind, LieAlgebra};
use crate::linalg::{self, Mat};
use crate::moduli::{CandidatePair, HomomorphismDatum};
use crate::scalar::C64;
use crate::semidirect::MatrixGroupModel;

pub const DEFAULT_GRID_POINTS: usize = 5;
pub const DEFAULT_STEP: f64 = 1e-4;
/// Largest number of grid points evaluated; larger grids are strided.
pub const GRID_CAP: usize = 4096;
/// Threshold for flatness, invariance and vanishing of `F^{0,2}`.
pub const NUMERIC_TOL: f64 = 1e-6;
/// Chart box outside which invariance samples are skipped.
pub const CHART_BOX: f64 = 2.0;

type FormFn = Arc<dyn Fn(&[f64]) -> Result<Mat<C64>> + Send + Sync>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Pair(String),
    Tautological,
    Custom(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Pair(id) => write!(f, "pair:{id}"),
            Provenance::Tautological => f.write_str("tautological"),
            Provenance::Custom(id) => write!(f, "custom:{id}"),
        }
    }
}

#[derive(Clone)]
enum Form {
    Constant {
        omega: Mat<C64>,
        beta: Option<HomomorphismDatum>,
    },
    Tautological(Box<Tautological>),
    Custom(FormFn),
}

#[derive(Clone)]
struct Tautological {
    model: MatrixGroupModel,
    dim_n: usize,
    left: Mat<C64>,
    gauge: Vec<GaugeFactor>,
}

/// `exp(c(x) σ)` with `c(x) = sin(⟨w, x⟩ + φ)`.
#[derive(Clone)]
struct GaugeFactor {
    generator: Mat<C64>,
    weights: Vec<f64>,
    phase: f64,
}

impl GaugeFactor {
    fn arg(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + self.phase
    }
}

/// A connection on the trivial bundle over the chart: `A(x)` is a
/// `dim g × 2 dim_C n` matrix whose column `r` is `A(∂_r)` in coordinates of
/// the value algebra `g`.
#[derive(Clone)]
pub struct TrivializedConnection {
    values: LieAlgebra,
    dim_n: usize,
    abelian_n: bool,
    provenance: Provenance,
    form: Form,
}

impl fmt::Debug for TrivializedConnection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TrivializedConnection")
            .field("values", &self.values.name())
            .field("dim_n", &self.dim_n)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl TrivializedConnection {
    /// The invariant connection of a pair `(β, ω)` over abelian `n`: the
    /// constant form `ω`.
    pub fn from_pair(id: &str, pair: &CandidatePair, n: &LieAlgebra) -> Result<Self> {
        if n.field() != FieldKind::Complex {
            return Err(Error::input("the chart needs a complex n"));
        }
        if !n.is_abelian() {
            return Err(Error::Unsupported(format!(
                "{} is not abelian; the invariant form in exponential coordinates is not available",
                n.name()
            )));
        }
        let omega = pair.omega_f64();
        if omega.cols() != 2 * n.dim() {
            return Err(Error::dim(format!(
                "omega has {} columns, the chart of {} has {}",
                omega.cols(),
                n.name(),
                2 * n.dim()
            )));
        }
        Ok(TrivializedConnection {
            values: pair.beta().target().clone(),
            dim_n: n.dim(),
            abelian_n: true,
            provenance: Provenance::Pair(id.to_string()),
            form: Form::Constant {
                omega: omega.map(|&x| C64::new(x, 0.0)),
                beta: Some(pair.beta().clone()),
            },
        })
    }

    /// A constant form with values in `values` over an abelian `n` of
    /// complex dimension `dim_n`.
    pub fn constant(id: &str, values: LieAlgebra, omega: Mat<f64>, dim_n: usize) -> Result<Self> {
        if omega.shape() != (values.dim(), 2 * dim_n) {
            return Err(Error::dim(format!(
                "constant form of shape {:?}, expected ({}, {})",
                omega.shape(),
                values.dim(),
                2 * dim_n
            )));
        }
        Ok(TrivializedConnection {
            values,
            dim_n,
            abelian_n: true,
            provenance: Provenance::Custom(id.to_string()),
            form: Form::Constant {
                omega: omega.map(|&x| C64::new(x, 0.0)),
                beta: None,
            },
        })
    }

    /// The `s`-component of `g⁻¹dg` along the section
    /// `g(x) = exp(Σ x_r N_r)·s(x)`, where `s(x)` is a product of
    /// exponentials of the first basis elements of `s` with smooth
    /// non-polynomial coefficients.
    pub fn tautological(model: &MatrixGroupModel, n: &LieAlgebra, s: &LieAlgebra) -> Result<Self> {
        if model.n_matrices().len() != n.dim() || model.s_matrices().len() != s.dim() {
            return Err(Error::dim("model and algebras disagree on dimensions"));
        }
        let m = 2 * n.dim();
        let gauge = model
            .s_matrices()
            .iter()
            .take(2)
            .enumerate()
            .map(|(j, g)| GaugeFactor {
                generator: g.clone(),
                weights: (0..m).map(|r| (0.5 + 0.25 * r as f64) * (1.0 + 0.5 * j as f64)).collect(),
                phase: 0.3 + 0.7 * j as f64,
            })
            .collect();
        Ok(TrivializedConnection {
            values: s.clone(),
            dim_n: n.dim(),
            abelian_n: n.is_abelian(),
            provenance: Provenance::Tautological,
            form: Form::Tautological(Box::new(Tautological {
                model: model.clone(),
                dim_n: n.dim(),
                left: Mat::identity(model.size()),
                gauge,
            })),
        })
    }

    /// Same connection computed along `left·g(x)`.
    pub fn with_left_translation(mut self, left: Mat<C64>) -> Result<Self> {
        match &mut self.form {
            Form::Tautological(t) => {
                if left.shape() != (t.model.size(), t.model.size()) {
                    return Err(Error::dim("left translation of the wrong size"));
                }
                t.left = left;
                Ok(self)
            }
            _ => Err(Error::input("left translation applies to the tautological connection")),
        }
    }

    /// A form given by a function of the chart point.
    pub fn from_fn(
        id: &str,
        values: LieAlgebra,
        dim_n: usize,
        abelian_n: bool,
        f: impl Fn(&[f64]) -> Result<Mat<C64>> + Send + Sync + 'static,
    ) -> Self {
        TrivializedConnection {
            values,
            dim_n,
            abelian_n,
            provenance: Provenance::Custom(id.to_string()),
            form: Form::Custom(Arc::new(f)),
        }
    }

    pub fn values(&self) -> &LieAlgebra {
        &self.values
    }

    pub fn dim_n(&self) -> usize {
        self.dim_n
    }

    pub fn chart_dim(&self) -> usize {
        2 * self.dim_n
    }

    pub fn is_n_abelian(&self) -> bool {
        self.abelian_n
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// `A(x)` as a `dim g × chart_dim` matrix.
    pub fn form_at(&self, x: &[f64]) -> Result<Mat<C64>> {
        if x.len() != self.chart_dim() {
            return Err(Error::dim(format!(
                "chart point of length {}, chart dimension {}",
                x.len(),
                self.chart_dim()
            )));
        }
        let a = match &self.form {
            Form::Constant { omega, .. } => omega.clone(),
            Form::Tautological(t) => t.form_at(x)?,
            Form::Custom(f) => f(x)?,
        };
        if a.shape() != (self.values.dim(), self.chart_dim()) {
            return Err(Error::dim(format!("form of shape {:?} at {x:?}", a.shape())));
        }
        if let Some(bad) = a.as_slice().iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric {
                location: format!("chart point {x:?}"),
                message: format!("non-finite form value {bad}"),
            });
        }
        Ok(a)
    }
}

impl Tautological {
    fn direction(&self, r: usize) -> Mat<C64> {
        let m = &self.model.n_matrices()[r / 2];
        if r % 2 == 0 {
            m.clone()
        } else {
            m.scale(&C64::new(0.0, 1.0))
        }
    }

    fn form_at(&self, x: &[f64]) -> Result<Mat<C64>> {
        let coords: Vec<C64> = (0..self.dim_n).map(|a| C64::new(x[2 * a], x[2 * a + 1])).collect();
        let big_x = self.model.n_element(&coords);
        let factors: Vec<Mat<C64>> = self
            .gauge
            .iter()
            .map(|g| linalg::expm(&g.generator.scale(&C64::new(g.arg(x).sin(), 0.0))))
            .collect();
        let size = self.model.size();
        let mut s = Mat::identity(size);
        for f in &factors {
            s = s.mul(f)?;
        }
        let u = linalg::expm(&big_x);
        let g = self.left.mul(&u)?.mul(&s)?;
        let g_inv = linalg::inverse_c64(&g).map_err(|_| Error::Numeric {
            location: format!("chart point {x:?}"),
            message: "section is not invertible".into(),
        })?;
        let dim_s = self.model.s_matrices().len();
        let mut out = Mat::zeros(dim_s, x.len());
        for r in 0..x.len() {
            let (_, du) = linalg::expm_with_derivative(&big_x, &self.direction(r));
            // ∂_r s = Σ_j E_1..E_{j-1} (c_j' σ_j) E_j..E_last
            let mut ds = Mat::zeros(size, size);
            for (j, gf) in self.gauge.iter().enumerate() {
                let dc = gf.arg(x).cos() * gf.weights[r];
                let mut term = Mat::identity(size);
                for f in &factors[..j] {
                    term = term.mul(f)?;
                }
                term = term.mul(&gf.generator.scale(&C64::new(dc, 0.0)))?;
                for f in &factors[j..] {
                    term = term.mul(f)?;
                }
                ds = ds.add(&term)?;
            }
            let dg = self.left.mul(&du.mul(&s)?.add(&u.mul(&ds)?)?)?;
            let mc = g_inv.mul(&dg)?;
            let p = self.model.p_coords(&mc);
            for (i, z) in p[self.dim_n..].iter().enumerate() {
                out[(i, r)] = *z;
            }
        }
        Ok(out)
    }
}

fn central_difference(c: &TrivializedConnection, x: &[f64], r: usize, h: f64) -> Result<Mat<C64>> {
    let mut plus = x.to_vec();
    let mut minus = x.to_vec();
    plus[r] += h;
    minus[r] -= h;
    let ap = c.form_at(&plus)?;
    let am = c.form_at(&minus)?;
    Ok(ap.sub(&am)?.scale(&C64::new(1.0 / (2.0 * h), 0.0)))
}

/// `dA(∂_r, ∂_s) = ∂_r A(∂_s) − ∂_s A(∂_r)` by central differences.
pub fn exterior_derivative_numeric(c: &TrivializedConnection, pt: &[f64], h: f64) -> Result<TwoFormValued<C64>> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::input(format!("step must be positive, got {h}")));
    }
    let m = c.chart_dim();
    if pt.len() != m {
        return Err(Error::dim(format!("chart point of length {}, chart dimension {m}", pt.len())));
    }
    let derivs = (0..m)
        .map(|r| central_difference(c, pt, r, h))
        .collect::<Result<Vec<_>>>()?;
    let mut out = TwoFormValued::zero(m, c.values.dim());
    for r in 0..m {
        for s in (r + 1)..m {
            let v = (0..c.values.dim())
                .map(|i| derivs[r][(i, s)] - derivs[s][(i, r)])
                .collect();
            out.set(r, s, v);
        }
    }
    Ok(out)
}

/// `[A(∂_r), A(∂_s)]` at `pt`.
pub fn bracket_term(c: &TrivializedConnection, pt: &[f64]) -> Result<TwoFormValued<C64>> {
    let a = c.form_at(pt)?;
    let t = c.values.table::<C64>();
    let m = c.chart_dim();
    let cols: Vec<Vec<C64>> = (0..m).map(|r| a.column(r)).collect();
    let mut out = TwoFormValued::zero(m, c.values.dim());
    for r in 0..m {
        for s in (r + 1)..m {
            out.set(r, s, t.bracket(&cols[r], &cols[s]));
        }
    }
    Ok(out)
}

/// Curvature `F = dA + ½[A ∧ A]`, i.e. `F(∂_r, ∂_s) = dA(∂_r, ∂_s) + [A(∂_r), A(∂_s)]`,
/// with `dA` by central differences of step `h`.
pub fn curvature_numeric(c: &TrivializedConnection, pt: &[f64], h: f64) -> Result<TwoFormValued<C64>> {
    let da = exterior_derivative_numeric(c, pt, h)?;
    let br = bracket_term(c, pt)?;
    add_forms(&da, &br)
}

fn add_forms(a: &TwoFormValued<C64>, b: &TwoFormValued<C64>) -> Result<TwoFormValued<C64>> {
    if a.dim_n() != b.dim_n() || a.dim_h() != b.dim_h() {
        return Err(Error::dim("two-forms of different shapes"));
    }
    let mut out = TwoFormValued::zero(a.dim_n(), a.dim_h());
    let pairs: Vec<_> = a.pairs().collect();
    for (r, s) in pairs {
        let v = a.value(r, s).iter().zip(b.value(r, s)).map(|(x, y)| x + y).collect();
        out.set(r, s, v);
    }
    Ok(out)
}

/// Type decomposition of a 2-form on the chart with complex coordinates
/// `z_a = x_{2a} + i x_{2a+1}`. Components are stored on `∂_a = ∂/∂z_a` and
/// `∂̄_a = ∂/∂z̄_a`: `f20(a, b) = F(∂_a, ∂_b)`, `f11[a][b] = F(∂_a, ∂̄_b)`,
/// `f02(a, b) = F(∂̄_a, ∂̄_b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HodgeSplit {
    pub f20: TwoFormValued<C64>,
    pub f11: Vec<Vec<Vec<C64>>>,
    pub f02: TwoFormValued<C64>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Hol,
    Anti,
}

/// `∂_{x_a} = ∂_a + ∂̄_a`, `∂_{y_a} = i∂_a − i∂̄_a`.
fn expansion(r: usize) -> [(Kind, C64); 2] {
    if r % 2 == 0 {
        [(Kind::Hol, C64::new(1.0, 0.0)), (Kind::Anti, C64::new(1.0, 0.0))]
    } else {
        [(Kind::Hol, C64::new(0.0, 1.0)), (Kind::Anti, C64::new(0.0, -1.0))]
    }
}

/// `∂_a = ½(∂_{x_a} − i∂_{y_a})`, `∂̄_a = ½(∂_{x_a} + i∂_{y_a})`.
fn coframe(kind: Kind, a: usize) -> [(usize, C64); 2] {
    let s = if kind == Kind::Hol { -0.5 } else { 0.5 };
    [(2 * a, C64::new(0.5, 0.0)), (2 * a + 1, C64::new(0.0, s))]
}

fn eval_real(f: &TwoFormValued<C64>, u: &[(usize, C64); 2], w: &[(usize, C64); 2]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); f.dim_h()];
    for &(r, cr) in u {
        for &(s, cs) in w {
            for (o, v) in out.iter_mut().zip(f.value(r, s)) {
                *o += cr * cs * v;
            }
        }
    }
    out
}

pub fn hodge_split(f: &TwoFormValued<C64>) -> Result<HodgeSplit> {
    if f.dim_n() % 2 != 0 {
        return Err(Error::dim("a complex chart has even real dimension"));
    }
    let n = f.dim_n() / 2;
    let mut f20 = TwoFormValued::zero(n, f.dim_h());
    let mut f02 = TwoFormValued::zero(n, f.dim_h());
    for a in 0..n {
        for b in (a + 1)..n {
            f20.set(a, b, eval_real(f, &coframe(Kind::Hol, a), &coframe(Kind::Hol, b)));
            f02.set(a, b, eval_real(f, &coframe(Kind::Anti, a), &coframe(Kind::Anti, b)));
        }
    }
    let f11 = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| eval_real(f, &coframe(Kind::Hol, a), &coframe(Kind::Anti, b)))
                .collect()
        })
        .collect();
    Ok(HodgeSplit { f20, f11, f02 })
}

impl HodgeSplit {
    fn component(&self, p: Kind, a: usize, q: Kind, b: usize) -> Vec<C64> {
        match (p, q) {
            (Kind::Hol, Kind::Hol) => self.f20.value(a, b),
            (Kind::Anti, Kind::Anti) => self.f02.value(a, b),
            (Kind::Hol, Kind::Anti) => self.f11[a][b].clone(),
            (Kind::Anti, Kind::Hol) => self.f11[b][a].iter().map(|z| -z).collect(),
        }
    }

    /// The real 2-form `F^{2,0} + F^{1,1} + F^{0,2}` on the real chart basis.
    pub fn reassemble(&self) -> TwoFormValued<C64> {
        let n = self.f20.dim_n();
        let dim_h = self.f20.dim_h();
        let mut out = TwoFormValued::zero(2 * n, dim_h);
        for r in 0..2 * n {
            for s in (r + 1)..2 * n {
                let mut v = vec![C64::new(0.0, 0.0); dim_h];
                for (p, cp) in expansion(r) {
                    for (q, cq) in expansion(s) {
                        for (o, z) in v.iter_mut().zip(self.component(p, r / 2, q, s / 2)) {
                            *o += cp * cq * z;
                        }
                    }
                }
                out.set(r, s, v);
            }
        }
        out
    }

    /// Largest coordinate difference between the reassembled form and `f`.
    pub fn reassembly_residual(&self, f: &TwoFormValued<C64>) -> f64 {
        max_difference(&self.reassemble(), f)
    }
}

/// Largest entrywise difference of two 2-forms of the same shape.
pub fn max_difference(a: &TwoFormValued<C64>, b: &TwoFormValued<C64>) -> f64 {
    a.pairs()
        .flat_map(|(r, s)| {
            a.value(r, s)
                .into_iter()
                .zip(b.value(r, s))
                .map(|(x, y)| (x - y).norm())
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}

/// Points of the grid with `points` values per real dimension on `[-1, 1]`,
/// in lexicographic order; grids larger than [`GRID_CAP`] are strided.
pub fn chart_grid(dim: usize, points: usize) -> Vec<Vec<f64>> {
    if points == 0 {
        return Vec::new();
    }
    let coord = |i: usize| {
        if points == 1 {
            0.0
        } else {
            -1.0 + 2.0 * i as f64 / (points - 1) as f64
        }
    };
    let total = (points as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    let (count, stride) = if total <= GRID_CAP as u128 {
        (total as usize, 1u128)
    } else {
        (GRID_CAP, total / GRID_CAP as u128)
    };
    (0..count)
        .map(|k| {
            let mut idx = k as u128 * stride;
            let mut p = vec![0.0; dim];
            for slot in p.iter_mut().rev() {
                *slot = coord((idx % points as u128) as usize);
                idx /= points as u128;
            }
            p
        })
        .collect()
}

fn euclidean(dim: usize) -> Mat<f64> {
    Mat::identity(dim)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FlatnessReport {
    pub points: usize,
    pub h: f64,
    pub max_residual: f64,
    pub argmax: usize,
    pub half_step_residual: f64,
    /// Residual at `h` over residual at `h/2` on the convergence subset.
    pub convergence_ratio: Option<f64>,
    pub passed: bool,
}

/// Points of `grid` used for the convergence ratio.
const CONVERGENCE_POINTS: usize = 32;

/// Largest `‖F‖` over the grid, and the step-halving ratio of the
/// finite-difference error on a strided subset.
pub fn flatness_sweep(c: &TrivializedConnection, grid: &[Vec<f64>], h: f64) -> Result<FlatnessReport> {
    if grid.is_empty() {
        return Err(Error::input("empty grid"));
    }
    let gram = euclidean(c.values.dim());
    let mut max_residual = 0.0f64;
    let mut argmax = 0;
    for (i, pt) in grid.iter().enumerate() {
        let r = curvature_numeric(c, pt, h)?.norm(&gram);
        if r > max_residual {
            max_residual = r;
            argmax = i;
        }
    }
    let stride = grid.len().div_ceil(CONVERGENCE_POINTS).max(1);
    let mut at_h = 0.0f64;
    let mut at_half = 0.0f64;
    for pt in grid.iter().step_by(stride) {
        at_h = at_h.max(curvature_numeric(c, pt, h)?.norm(&gram));
        at_half = at_half.max(curvature_numeric(c, pt, h / 2.0)?.norm(&gram));
    }
    let convergence_ratio = (at_half > 0.0).then(|| at_h / at_half);
    Ok(FlatnessReport {
        points: grid.len(),
        h,
        max_residual,
        argmax,
        half_step_residual: at_half,
        convergence_ratio,
        passed: max_residual < NUMERIC_TOL,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HolomorphicityReport {
    pub holomorphic: bool,
    #[serde(rename = "maxF02")]
    pub max_f02: f64,
    pub argmax: usize,
    pub points: usize,
    pub h: f64,
}

/// Whether `F^{0,2}` vanishes on the grid, with `‖F^{0,2}‖` measured by the
/// invariant Hermitian product of the value algebra.
pub fn holomorphicity_verdict(c: &TrivializedConnection, grid: &[Vec<f64>], h: f64) -> Result<HolomorphicityReport> {
    if !c.abelian_n {
        return Err(Error::Unsupported(
            "holomorphicity is checked numerically only over abelian n".into(),
        ));
    }
    if grid.is_empty() {
        return Err(Error::input("empty grid"));
    }
    let gram = c.values.invariant_gram();
    let mut max_f02 = 0.0f64;
    let mut argmax = 0;
    for (i, pt) in grid.iter().enumerate() {
        let f = curvature_numeric(c, pt, h)?;
        let r = hodge_split(&f)?.f02.norm(&gram);
        if r > max_f02 {
            max_f02 = r;
            argmax = i;
        }
    }
    Ok(HolomorphicityReport {
        holomorphic: max_f02 < NUMERIC_TOL,
        max_f02,
        argmax,
        points: grid.len(),
        h,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InvarianceReport {
    pub samples: usize,
    pub skipped: usize,
    pub max_discrepancy: f64,
    pub passed: bool,
}

/// Compares `A` with its transform under sampled group elements.
///
/// For a pair connection the samples are `k = exp(tξ) ∈ K(S)` acting on the
/// chart by `Ad(k)` and on values by `Ad(β(k))`: invariance means
/// `Ad(β(k)) A(x)(v) = A(Ad(k)x)(Ad(k)v)`. Transformed points outside the
/// chart box are skipped. For the tautological connection the samples are
/// left translations by `g = exp(X) exp(Y)`, `X ∈ n`, `Y ∈ s`.
pub fn invariance_probe(
    c: &TrivializedConnection,
    m: &MatrixGroupModel,
    samples: usize,
    seed: u64,
) -> Result<InvarianceReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = c.chart_dim();
    let mut max_discrepancy = 0.0f64;
    let mut skipped = 0;
    match &c.form {
        Form::Constant { beta: Some(beta), .. } => {
            if m.ks_matrices().len() != beta.source().dim() {
                return Err(Error::dim("model and pair disagree on dim k(S)"));
            }
            let k = beta.target();
            for _ in 0..samples {
                let xi: Vec<f64> = (0..beta.source().dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
                let t: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
                let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
                let kk = linalg::expm(&m.ks_element(&xi).scale(&C64::new(t, 0.0)));
                let rot = chart_adjoint(m, &kk)?;
                let moved = &rot * DVector::from_column_slice(&x);
                if moved.iter().any(|v| v.abs() > CHART_BOX) {
                    skipped += 1;
                    continue;
                }
                let image: Vec<C64> = beta.apply(&xi.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>());
                let ad = linalg::to_dmatrix(&k.ad_matrix(&image)?.real_part());
                let ad_beta = (ad * t).exp();
                let a_here = real_form_matrix(&c.form_at(&x)?);
                let a_there = real_form_matrix(&c.form_at(moved.as_slice())?);
                let gap = (&ad_beta * a_here - a_there * &rot).abs().max();
                max_discrepancy = max_discrepancy.max(gap);
            }
        }
        Form::Tautological(_) => {
            let dn = m.n_matrices().len();
            let ds = m.s_matrices().len();
            for _ in 0..samples {
                let xn: Vec<C64> = (0..dn).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
                let xs: Vec<C64> = (0..ds).map(|_| C64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5))).collect();
                let g = m.exp_n(&xn).mul(&m.exp_s(&xs))?;
                let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
                let moved = c.clone().with_left_translation(g)?;
                let a = c.form_at(&x)?;
                let b = moved.form_at(&x)?;
                let gap = a.sub(&b)?.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max);
                max_discrepancy = max_discrepancy.max(gap);
            }
        }
        _ => {
            return Err(Error::Precondition(
                "invariance probe needs a pair connection or the tautological connection".into(),
            ))
        }
    }
    Ok(InvarianceReport {
        samples,
        skipped,
        max_discrepancy,
        passed: max_discrepancy < NUMERIC_TOL,
    })
}

/// Real matrix of `Ad(k)` on the chart coordinates of `n`.
fn chart_adjoint(m: &MatrixGroupModel, k: &Mat<C64>) -> Result<DMatrix<f64>> {
    let n = m.n_matrices().len();
    let k_inv = linalg::inverse_c64(k)?;
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    for (b, e) in m.n_matrices().iter().enumerate() {
        let moved = k.mul(e)?.mul(&k_inv)?;
        let z = m.n_coords(&moved);
        for (a, za) in z.iter().enumerate() {
            // e_b ↦ Σ z_a e_a, and i e_b ↦ Σ z_a (i e_a).
            out[(2 * a, 2 * b)] = za.re;
            out[(2 * a + 1, 2 * b)] = za.im;
            out[(2 * a, 2 * b + 1)] = -za.im;
            out[(2 * a + 1, 2 * b + 1)] = za.re;
        }
    }
    Ok(out)
}

fn real_form_matrix(a: &Mat<C64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.rows(), a.cols(), |r, c| a[(r, c)].re)
}
