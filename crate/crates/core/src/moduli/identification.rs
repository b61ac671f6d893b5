use crate::error::{Error, Result};
use crate::lie::{FieldKind, RealForm};
use crate::linalg::Mat;
use crate::moduli::HomomorphismDatum;
use crate::scalar::{ComplexField, Field};
use crate::semidirect::DerivationAction;

/// `ω ↦ ω^{0,1}` with `ω^{0,1}(e_a) = ½(ω(e_a) + i·ω(i e_a))`, a complex
/// linear map `n̄ → h` stored as a `dim h × dim_C n` matrix.
pub fn real_to_antiholomorphic<C: ComplexField>(omega: &Mat<C::Real>, h: &RealForm) -> Result<Mat<C>> {
    if omega.rows() != h.real().dim() {
        return Err(Error::input(format!(
            "omega takes values in a {}-dimensional algebra, {} has dimension {}",
            omega.rows(),
            h.complex().name(),
            h.complex().dim()
        )));
    }
    to_antiholomorphic(omega)
}

pub(crate) fn to_antiholomorphic<C: ComplexField>(omega: &Mat<C::Real>) -> Result<Mat<C>> {
    if omega.cols() % 2 != 0 {
        return Err(Error::dim("omega needs an even number of real columns"));
    }
    let half = C::Real::from_q(&crate::scalar::q(1, 2));
    Ok(Mat::from_fn(omega.rows(), omega.cols() / 2, |r, a| {
        C::from_parts(
            omega[(r, 2 * a)].clone() * half.clone(),
            omega[(r, 2 * a + 1)].clone() * half.clone(),
        )
    }))
}

/// Inverse of [`real_to_antiholomorphic`]: `ω(e_a) = 2 Re α(e_a)`,
/// `ω(i e_a) = 2 Im α(e_a)`.
pub fn antiholomorphic_to_real<C: ComplexField>(alpha: &Mat<C>) -> Mat<C::Real> {
    let two = C::Real::from_i64(2);
    Mat::from_fn(alpha.rows(), 2 * alpha.cols(), |r, c| {
        let z = &alpha[(r, c / 2)];
        let part = if c % 2 == 0 { z.re() } else { z.im() };
        part * two.clone()
    })
}

/// Action of `ξ ∈ k(S)` on `Hom_C(n̄, h)`: `ξ·α = ad(dβ ξ) α − α conj(act ξ)`.
pub fn act_on_antiholomorphic<C: ComplexField>(
    beta: &HomomorphismDatum,
    d: &DerivationAction,
    xi: &[C],
    alpha: &Mat<C>,
) -> Result<Mat<C>> {
    if d.target().field() != FieldKind::Complex {
        return Err(Error::input("the (0,1) identification needs a complex n"));
    }
    let k = beta.target();
    let ad = k.ad_matrix(&beta.apply(xi))?;
    let act = d.apply(xi).conj();
    ad.mul(alpha)?.sub(&alpha.mul(&act)?)
}

/// Checks that a real-linear map `n → h` (both realified) is complex linear
/// from `n̄`, i.e. `M ∘ J_n = −J_h ∘ M`, and returns it as a complex matrix.
pub fn conjugate_linear_part<C: ComplexField>(m: &Mat<C::Real>, eps: f64) -> Result<Mat<C>> {
    if m.rows() % 2 != 0 || m.cols() % 2 != 0 {
        return Err(Error::dim("realified map needs even dimensions"));
    }
    let (rows, cols) = (m.rows() / 2, m.cols() / 2);
    for r in 0..rows {
        for c in 0..cols {
            let (a, b) = (m[(2 * r, 2 * c)].clone(), m[(2 * r, 2 * c + 1)].clone());
            let (cc, dd) = (m[(2 * r + 1, 2 * c)].clone(), m[(2 * r + 1, 2 * c + 1)].clone());
            // A conjugate-linear 2x2 block has the form [[a, b], [b, -a]].
            let s1 = a.clone() + dd;
            let s2 = b.clone() - cc;
            if !s1.is_negligible(eps) || !s2.is_negligible(eps) {
                return Err(Error::input(format!(
                    "map is not complex linear on the conjugate space at block ({r}, {c})"
                )));
            }
        }
    }
    Ok(Mat::from_fn(rows, cols, |r, c| {
        C::from_parts(m[(2 * r, 2 * c)].clone(), m[(2 * r + 1, 2 * c)].clone())
    }))
}
