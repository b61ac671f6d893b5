//! The quadratic map `φ(α)(v ∧ w) = [α(v), α(w)]` and membership in `C0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{hermitian_norm_with, LieAlgebra, RealForm};
use crate::linalg::Mat;
use crate::moduli::{conjugate_linear_part, real_to_antiholomorphic, CandidatePair};
use crate::scalar::{ComplexField, Cq, Field, Mode, Tolerance, C64};
use crate::weights::VanishingCertificate;

/// An alternating form `Λ²n̄ → h`, stored on the basis pairs `a < b` in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoFormValued<C> {
    dim_n: usize,
    dim_h: usize,
    values: Vec<Vec<C>>,
}

impl<C: ComplexField> TwoFormValued<C> {
    pub fn zero(dim_n: usize, dim_h: usize) -> Self {
        let pairs = dim_n * dim_n.saturating_sub(1) / 2;
        TwoFormValued {
            dim_n,
            dim_h,
            values: vec![vec![C::zero(); dim_h]; pairs],
        }
    }

    pub fn dim_n(&self) -> usize {
        self.dim_n
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.dim_n;
        (0..n).flat_map(move |a| ((a + 1)..n).map(move |b| (a, b)))
    }

    fn index(&self, a: usize, b: usize) -> usize {
        // Pairs before row a, then the offset inside row a.
        a * self.dim_n - a * (a + 1) / 2 + (b - a - 1)
    }

    /// Value on `ē_a ∧ ē_b`, using antisymmetry when `a > b`.
    pub fn value(&self, a: usize, b: usize) -> Vec<C> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => self.values[self.index(a, b)].clone(),
            std::cmp::Ordering::Greater => self.values[self.index(b, a)].iter().map(|x| -x.clone()).collect(),
            std::cmp::Ordering::Equal => vec![C::zero(); self.dim_h],
        }
    }

    pub fn set(&mut self, a: usize, b: usize, v: Vec<C>) {
        let i = self.index(a, b);
        self.values[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(num_traits::Zero::is_zero))
    }

    pub fn to_c64(&self) -> TwoFormValued<C64> {
        TwoFormValued {
            dim_n: self.dim_n,
            dim_h: self.dim_h,
            values: self.values.iter().map(|v| v.iter().map(C::to_c64).collect()).collect(),
        }
    }

    /// Largest norm over basis pairs, for the Hermitian product with Gram
    /// matrix `gram` on `h`.
    pub fn norm(&self, gram: &Mat<f64>) -> f64 {
        self.values
            .iter()
            .map(|v| {
                let z: Vec<C64> = v.iter().map(C::to_c64).collect();
                hermitian_norm_with(gram, &z)
            })
            .fold(0.0, f64::max)
    }
}

/// `φ(α)` for `α: n̄ → h` given by its columns `α(ē_a)`.
pub fn phi<C: ComplexField>(alpha: &Mat<C>, h: &LieAlgebra) -> Result<TwoFormValued<C>> {
    if alpha.rows() != h.dim() {
        return Err(Error::dim(format!(
            "alpha has {} rows, {} has dimension {}",
            alpha.rows(),
            h.name(),
            h.dim()
        )));
    }
    let t = h.table::<C>();
    let mut out = TwoFormValued::zero(alpha.cols(), h.dim());
    let cols: Vec<Vec<C>> = (0..alpha.cols()).map(|c| alpha.column(c)).collect();
    for a in 0..alpha.cols() {
        for b in (a + 1)..alpha.cols() {
            out.set(a, b, t.bracket(&cols[a], &cols[b]));
        }
    }
    Ok(out)
}

/// `φ` of a real-linear map `n → h` given in realified coordinates; rejects
/// maps that are not complex linear on `n̄`.
pub fn phi_real<C: ComplexField>(m: &Mat<C::Real>, h: &LieAlgebra, eps: f64) -> Result<TwoFormValued<C>> {
    let alpha = conjugate_linear_part::<C>(m, eps)?;
    phi(&alpha, h)
}

/// Symmetric bilinear form attached to `φ`:
/// `(α, β)(v ∧ w) = [α(v), β(w)] + [β(v), α(w)]`, so `φ(α + β) = φ(α) + φ(β) + (α, β)`.
pub fn phi_polar<C: ComplexField>(a1: &Mat<C>, a2: &Mat<C>, h: &LieAlgebra) -> Result<TwoFormValued<C>> {
    if a1.shape() != a2.shape() || a1.rows() != h.dim() {
        return Err(Error::dim("polarization of maps with different shapes"));
    }
    let t = h.table::<C>();
    let mut out = TwoFormValued::zero(a1.cols(), h.dim());
    for a in 0..a1.cols() {
        for b in (a + 1)..a1.cols() {
            let x = t.bracket(&a1.column(a), &a2.column(b));
            let y = t.bracket(&a2.column(a), &a1.column(b));
            out.set(a, b, x.into_iter().zip(y).map(|(p, q)| p + q).collect());
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct C0Report {
    pub c0: bool,
    pub residual: f64,
}

fn two_form_verdict<C: ComplexField>(f: &TwoFormValued<C>, gram: &Mat<f64>, tol: Tolerance) -> C0Report {
    let residual = f.norm(gram);
    let c0 = match tol.mode {
        Mode::Exact => f.is_zero(),
        Mode::Float => residual <= tol.eps,
    };
    C0Report { c0, residual }
}

/// Whether `φ(ω^{0,1}) = 0`; the residual is the norm of `φ(ω^{0,1})`.
pub fn c0_membership(p: &CandidatePair, h: &RealForm, tol: Tolerance) -> Result<C0Report> {
    let gram = h.real().invariant_gram();
    match tol.mode {
        Mode::Exact => {
            let alpha: Mat<Cq> = real_to_antiholomorphic(p.omega(), h)?;
            Ok(two_form_verdict(&phi(&alpha, h.complex())?, &gram, tol))
        }
        Mode::Float => {
            let alpha: Mat<C64> = real_to_antiholomorphic(&p.omega_f64(), h)?;
            Ok(two_form_verdict(&phi(&alpha, h.complex())?, &gram, tol))
        }
    }
}

/// Whether every element of the span of `omegas` lies in `C0`: `φ` must
/// vanish on each element and the polar form on each pair.
pub fn c0_whole_span(omegas: &[Mat<crate::scalar::Q>], h: &RealForm, tol: Tolerance) -> Result<C0Report> {
    fn run<C: ComplexField>(
        alphas: &[Mat<C>],
        h: &RealForm,
        gram: &Mat<f64>,
        tol: Tolerance,
    ) -> Result<C0Report> {
        let mut report = C0Report {
            c0: true,
            residual: 0.0,
        };
        for (i, a) in alphas.iter().enumerate() {
            for b in &alphas[i..] {
                let f = if std::ptr::eq(a, b) {
                    phi(a, h.complex())?
                } else {
                    phi_polar(a, b, h.complex())?
                };
                let r = two_form_verdict(&f, gram, tol);
                report.c0 &= r.c0;
                report.residual = report.residual.max(r.residual);
            }
        }
        Ok(report)
    }
    let gram = h.real().invariant_gram();
    match tol.mode {
        Mode::Exact => {
            let alphas = omegas
                .iter()
                .map(|o| real_to_antiholomorphic::<Cq>(o, h))
                .collect::<Result<Vec<_>>>()?;
            run(&alphas, h, &gram, tol)
        }
        Mode::Float => {
            let alphas = omegas
                .iter()
                .map(|o| real_to_antiholomorphic::<C64>(&o.to_f64(), h))
                .collect::<Result<Vec<_>>>()?;
            run(&alphas, h, &gram, tol)
        }
    }
}

/// `K^{0,2}` of the connection attached to `p` at the base point, which is
/// `φ(ω^{0,1})` once the `∂̄`-term is known to vanish.
pub fn curvature02_algebraic<C: ComplexField>(
    p: &CandidatePair,
    h: &RealForm,
    certificate: Option<&VanishingCertificate>,
) -> Result<TwoFormValued<C>> {
    let Some(cert) = certificate else {
        return Err(Error::Precondition(
            "no vanishing certificate: the (0,2)-curvature formula needs the single-character hypothesis".into(),
        ));
    };
    if !cert.passed() {
        return Err(Error::Precondition(format!(
            "vanishing certificate did not pass ({})",
            cert.verdict
        )));
    }
    if cert.w0 != p.beta().w0() {
        return Err(Error::Precondition(format!(
            "certificate is for w0 = {}, the pair has w0 = {}",
            cert.w0,
            p.beta().w0()
        )));
    }
    let omega: Mat<C::Real> = p.omega().map(C::Real::from_q);
    let alpha: Mat<C> = real_to_antiholomorphic(&omega, h)?;
    phi(&alpha, h.complex())
}
