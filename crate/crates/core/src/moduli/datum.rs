use std::ops::RangeInclusive;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lie::{FieldKind, LieAlgebra};
use crate::linalg::Mat;
use crate::scalar::{magnitude, ComplexField, Cq, Field, Mode, Tolerance, C64, Q};
use crate::semidirect::DerivationAction;

/// Differential data of a homomorphism `β: K(S) → K` together with the
/// central circle `Z = exp(Rζ)` and the integer `w0` by which it acts on `n`.
#[derive(Clone, Debug)]
pub struct HomomorphismDatum {
    ks: LieAlgebra,
    k: LieAlgebra,
    dbeta: Mat<Q>,
    zeta: Vec<Q>,
    w0: i64,
}

impl HomomorphismDatum {
    /// Checks that `dβ` is a homomorphism, that `ζ` is central and that `ζ`
    /// acts on `n` as `i·w0` times the identity with `w0 ≠ 0`.
    pub fn new(
        ks: LieAlgebra,
        k: LieAlgebra,
        dbeta: Mat<Q>,
        zeta: Vec<Q>,
        w0: i64,
        action: &DerivationAction,
        tol: Tolerance,
    ) -> Result<Self> {
        let datum = HomomorphismDatum::unchecked(ks, k, dbeta, zeta, w0)?;
        if action.source() != &datum.ks {
            return Err(Error::input("derivation action is not an action of K(S)"));
        }
        datum.check_homomorphism(tol)?;
        datum.check_central(tol)?;
        datum.check_scalar_action(action, tol)?;
        Ok(datum)
    }

    /// Builds the datum checking only shapes and fields.
    pub fn unchecked(ks: LieAlgebra, k: LieAlgebra, dbeta: Mat<Q>, zeta: Vec<Q>, w0: i64) -> Result<Self> {
        if ks.field() != FieldKind::Real || k.field() != FieldKind::Real {
            return Err(Error::input("K(S) and K must have real Lie algebras"));
        }
        if dbeta.shape() != (k.dim(), ks.dim()) {
            return Err(Error::dim(format!(
                "dbeta is {}x{}, expected {}x{}",
                dbeta.rows(),
                dbeta.cols(),
                k.dim(),
                ks.dim()
            )));
        }
        if zeta.len() != ks.dim() {
            return Err(Error::dim(format!(
                "zGenerator has length {}, expected {}",
                zeta.len(),
                ks.dim()
            )));
        }
        Ok(HomomorphismDatum {
            ks,
            k,
            dbeta,
            zeta,
            w0,
        })
    }

    pub fn source(&self) -> &LieAlgebra {
        &self.ks
    }

    pub fn target(&self) -> &LieAlgebra {
        &self.k
    }

    pub fn dbeta(&self) -> &Mat<Q> {
        &self.dbeta
    }

    pub fn dbeta_f64(&self) -> Mat<f64> {
        self.dbeta.to_f64()
    }

    pub fn zeta(&self) -> &[Q] {
        &self.zeta
    }

    pub fn w0(&self) -> i64 {
        self.w0
    }

    /// `dβ(ξ)` as a coordinate vector of `k`.
    pub fn apply<C: ComplexField>(&self, xi: &[C]) -> Vec<C> {
        let m: Mat<C> = self.dbeta.map(|x| C::from_real(C::Real::from_q(x)));
        m.mul_vec(xi).expect("shape")
    }

    /// `dβ(ζ)`.
    pub fn dbeta_zeta<C: ComplexField>(&self) -> Vec<C> {
        let z: Vec<C> = self.zeta.iter().map(|x| C::from_real(C::Real::from_q(x))).collect();
        self.apply(&z)
    }

    /// Same datum with `dβ` replaced, e.g. after conjugation in `K`.
    pub fn with_dbeta(&self, dbeta: Mat<Q>) -> Result<Self> {
        HomomorphismDatum::unchecked(self.ks.clone(), self.k.clone(), dbeta, self.zeta.clone(), self.w0)
    }

    pub fn check_homomorphism(&self, tol: Tolerance) -> Result<()> {
        match tol.mode {
            Mode::Exact => self.check_homomorphism_in::<Cq>(tol),
            Mode::Float => self.check_homomorphism_in::<C64>(tol),
        }
    }

    fn check_homomorphism_in<C: ComplexField>(&self, tol: Tolerance) -> Result<()> {
        let st = self.ks.table::<C>();
        let kt = self.k.table::<C>();
        let d = self.ks.dim();
        let images: Vec<Vec<C>> = (0..d).map(|i| self.apply(&self.ks.basis_vector::<C>(i))).collect();
        for i in 0..d {
            for j in (i + 1)..d {
                let lhs = self.apply(&st.basis_bracket(i, j));
                let rhs = kt.bracket(&images[i], &images[j]);
                let res = lhs
                    .iter()
                    .zip(&rhs)
                    .map(|(a, b)| magnitude(&(a.clone() - b.clone())))
                    .fold(0.0, f64::max);
                if !tol.accepts(res) {
                    return Err(Error::input(format!(
                        "dbeta is not a Lie algebra homomorphism on basis pair ({i}, {j}) of {}, residual {res:e}",
                        self.ks.name()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn check_central(&self, tol: Tolerance) -> Result<()> {
        let z: Vec<Cq> = self.zeta.iter().map(|x| Cq::new(x.clone(), Q::zero())).collect();
        for i in 0..self.ks.dim() {
            let b = self.ks.bracket(&z, &self.ks.basis_vector::<Cq>(i))?;
            let res = b.iter().map(|c| magnitude(&c.re)).fold(0.0, f64::max);
            if !tol.accepts(res) {
                return Err(Error::input(format!(
                    "zGenerator is not central in {}: [zeta, {}] != 0",
                    self.ks.name(),
                    self.ks.labels()[i]
                )));
            }
        }
        Ok(())
    }

    /// The single-character hypothesis: `ζ` acts on `n` as `i·w0·id`, `w0 ≠ 0`.
    pub fn check_scalar_action(&self, action: &DerivationAction, tol: Tolerance) -> Result<()> {
        check_scalar_action(action, &self.zeta, self.w0, tol)
    }
}

/// Checks that `ζ` acts on `n` by multiplication with `i·w0`, `w0 ≠ 0`.
pub fn check_scalar_action(action: &DerivationAction, zeta: &[Q], w0: i64, tol: Tolerance) -> Result<()> {
    let n = action.target();
    if n.field() != FieldKind::Complex {
        return Err(Error::Hypothesis(format!(
            "single-character scalar action hypothesis needs a complex n; {} is real",
            n.name()
        )));
    }
    let z: Vec<Cq> = zeta.iter().map(|x| Cq::new(x.clone(), Q::zero())).collect();
    let m = action.apply(&z);
    let target = Mat::<Cq>::identity(n.dim()).scale(&Cq::new(Q::zero(), Q::from_i64(w0)));
    let res = m
        .sub(&target)
        .expect("shape")
        .as_slice()
        .iter()
        .map(|c| if tol.is_exact() { magnitude(c) } else { c.to_c64().norm() })
        .fold(0.0, f64::max);
    if !tol.accepts(res) {
        return Err(Error::Hypothesis(format!(
            "single-character scalar action hypothesis violated: zeta acts on {} with weights {}, not as {}i times the identity",
            n.name(),
            describe_weights(&m),
            w0
        )));
    }
    if w0 == 0 {
        return Err(Error::Hypothesis(
            "single-character scalar action hypothesis violated: the character w0 is trivial".into(),
        ));
    }
    Ok(())
}

fn describe_weights(m: &Mat<Cq>) -> String {
    let diagonal = (0..m.rows()).all(|r| (0..m.cols()).all(|c| r == c || m[(r, c)].is_zero()));
    if !diagonal {
        return "given by a non-diagonal matrix".into();
    }
    let ws: Vec<String> = (0..m.rows())
        .map(|i| {
            let z = &m[(i, i)];
            if z.re.is_zero() {
                crate::scalar::format_rational(&z.im)
            } else {
                format!("{}", z.to_c64() / C64::new(0.0, 1.0))
            }
        })
        .collect();
    format!("({})", ws.join(", "))
}

/// For a one-dimensional `K(S) = U(1)` with `ζ = z·ξ_0`, the data `dβ(ζ) = c·circle`
/// for each integer `c` in `range`. `circle` must generate a `2π`-periodic
/// circle in `K`.
pub fn circle_characters(
    ks: &LieAlgebra,
    k: &LieAlgebra,
    zeta: &[Q],
    w0: i64,
    circle: &[Q],
    range: RangeInclusive<i64>,
) -> Result<Vec<(i64, HomomorphismDatum)>> {
    if ks.dim() != 1 {
        return Err(Error::Unsupported(format!(
            "character enumeration needs a one-dimensional K(S), {} has dimension {}",
            ks.name(),
            ks.dim()
        )));
    }
    if circle.len() != k.dim() {
        return Err(Error::dim("circle generator length"));
    }
    let z = &zeta[0];
    if z.is_zero() {
        return Err(Error::input("zGenerator is zero"));
    }
    range
        .map(|c| {
            let scale = Q::from_i64(c) / z.clone();
            let dbeta = Mat::from_fn(k.dim(), 1, |r, _| circle[r].clone() * scale.clone());
            HomomorphismDatum::unchecked(ks.clone(), k.clone(), dbeta, zeta.to_vec(), w0).map(|d| (c, d))
        })
        .collect()
}
