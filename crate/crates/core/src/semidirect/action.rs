use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{FieldKind, LieAlgebra};
use crate::linalg::Mat;
use crate::scalar::{magnitude, ComplexField, Cq, Mode, Tolerance, C64};

/// A Lie algebra `s` acting on `n` by derivations, one endomorphism of `n`
/// per basis vector of `s`.
#[derive(Clone, Debug)]
pub struct DerivationAction {
    s: LieAlgebra,
    n: LieAlgebra,
    mats: Vec<Mat<Cq>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ActionReport {
    pub derivation_residual: f64,
    pub homomorphism_residual: f64,
    pub failure: Option<String>,
    pub passed: bool,
}

impl DerivationAction {
    /// Builds the action and checks the Leibniz rule and the homomorphism
    /// property on all basis pairs.
    pub fn new(s: LieAlgebra, n: LieAlgebra, mats: Vec<Mat<Cq>>, tol: Tolerance) -> Result<Self> {
        let action = DerivationAction::unchecked(s, n, mats)?;
        let report = action.check(tol);
        match report.failure {
            Some(msg) if !report.passed => Err(Error::Construction(msg)),
            _ => Ok(action),
        }
    }

    /// Builds the action checking only shapes.
    pub fn unchecked(s: LieAlgebra, n: LieAlgebra, mats: Vec<Mat<Cq>>) -> Result<Self> {
        if mats.len() != s.dim() {
            return Err(Error::dim(format!(
                "{} action matrices for {} of dimension {}",
                mats.len(),
                s.name(),
                s.dim()
            )));
        }
        let d = n.dim();
        if let Some(i) = mats.iter().position(|m| m.shape() != (d, d)) {
            return Err(Error::dim(format!(
                "action matrix {i} is {}x{}, expected {d}x{d}",
                mats[i].rows(),
                mats[i].cols()
            )));
        }
        if n.field() == FieldKind::Real && mats.iter().any(|m| m.as_slice().iter().any(|z| !z.im.is_zero())) {
            return Err(Error::input(format!(
                "complex action matrix on the real algebra {}",
                n.name()
            )));
        }
        Ok(DerivationAction { s, n, mats })
    }

    pub fn zero(s: LieAlgebra, n: LieAlgebra) -> Self {
        let d = n.dim();
        let mats = vec![Mat::zeros(d, d); s.dim()];
        DerivationAction { s, n, mats }
    }

    pub fn source(&self) -> &LieAlgebra {
        &self.s
    }

    pub fn target(&self) -> &LieAlgebra {
        &self.n
    }

    pub fn matrices(&self) -> &[Mat<Cq>] {
        &self.mats
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(|m| m.as_slice().iter().all(Zero::is_zero))
    }

    /// `act(xi)` for a coordinate vector `xi` of the acting algebra.
    pub fn apply<C: ComplexField>(&self, xi: &[C]) -> Mat<C> {
        let d = self.n.dim();
        let mut out = Mat::zeros(d, d);
        for (c, m) in xi.iter().zip(&self.mats) {
            if !c.is_zero() {
                out = out.add(&m.map(C::from_cq).scale(c)).expect("same shape");
            }
        }
        out
    }

    pub fn apply_c64(&self, xi: &[C64]) -> Mat<C64> {
        self.apply(xi)
    }

    pub fn check(&self, tol: Tolerance) -> ActionReport {
        match tol.mode {
            Mode::Exact => self.check_in::<Cq>(tol),
            Mode::Float => self.check_in::<C64>(tol),
        }
    }

    fn check_in<C: ComplexField>(&self, tol: Tolerance) -> ActionReport {
        let nt = self.n.table::<C>();
        let st = self.s.table::<C>();
        let mats: Vec<Mat<C>> = self.mats.iter().map(|m| m.map(C::from_cq)).collect();
        let dn = self.n.dim();
        let mut failure = None;

        let mut derivation_residual = 0.0f64;
        for (i, a) in mats.iter().enumerate() {
            for x in 0..dn {
                for y in (x + 1)..dn {
                    let lhs = a.mul_vec(&nt.basis_bracket(x, y)).expect("shape");
                    let ax = a.column(x);
                    let ay = a.column(y);
                    let ex = self.n.basis_vector::<C>(x);
                    let ey = self.n.basis_vector::<C>(y);
                    let r1 = nt.bracket(&ax, &ey);
                    let r2 = nt.bracket(&ex, &ay);
                    let res = (0..dn)
                        .map(|k| magnitude(&(lhs[k].clone() - r1[k].clone() - r2[k].clone())))
                        .fold(0.0, f64::max);
                    if !tol.accepts(res) && failure.is_none() {
                        failure = Some(format!(
                            "act({}) is not a derivation of {} on basis pair ({x}, {y}), residual {res:e}",
                            self.s.labels()[i],
                            self.n.name()
                        ));
                    }
                    derivation_residual = derivation_residual.max(res);
                }
            }
        }

        let mut homomorphism_residual = 0.0f64;
        let ds = self.s.dim();
        for i in 0..ds {
            for j in (i + 1)..ds {
                let lhs = self.apply(&st.basis_bracket(i, j));
                let rhs = mats[i].commutator(&mats[j]).expect("square");
                let res = lhs.sub(&rhs).expect("shape").as_slice().iter().map(magnitude).fold(0.0, f64::max);
                if !tol.accepts(res) && failure.is_none() {
                    failure = Some(format!(
                        "act is not a homomorphism on basis pair ({i}, {j}) of {}, residual {res:e}",
                        self.s.name()
                    ));
                }
                homomorphism_residual = homomorphism_residual.max(res);
            }
        }

        ActionReport {
            derivation_residual,
            homomorphism_residual,
            passed: failure.is_none(),
            failure,
        }
    }
}
