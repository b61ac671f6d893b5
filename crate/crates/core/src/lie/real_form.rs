use crate::error::{Error, Result};
use crate::lie::{FieldKind, LieAlgebra};
use crate::scalar::{ComplexField, Field};

/// A complex Lie algebra together with the conjugation fixing a real form.
///
/// Only real forms produced by [`complexify`] are represented, so the real
/// form's basis is also a complex basis of the ambient algebra and the
/// conjugation acts by conjugating coordinates.
#[derive(Clone, Debug)]
pub struct RealForm {
    real: LieAlgebra,
    complex: LieAlgebra,
}

/// `k ⊗ C` with the conjugation of the real basis.
pub fn complexify(k: &LieAlgebra) -> Result<RealForm> {
    if k.field() != FieldKind::Real {
        return Err(Error::input(format!(
            "{} is already complex; only real algebras can be complexified",
            k.name()
        )));
    }
    let complex = k
        .clone()
        .with_field(FieldKind::Complex)
        .with_name(format!("{}⊗C", k.name()));
    Ok(RealForm {
        real: k.clone(),
        complex,
    })
}

impl RealForm {
    pub fn complex(&self) -> &LieAlgebra {
        &self.complex
    }

    pub fn real(&self) -> &LieAlgebra {
        &self.real
    }

    /// Antilinear involution fixing the real form.
    pub fn sigma<C: ComplexField>(&self, v: &[C]) -> Vec<C> {
        v.iter().map(ComplexField::conj).collect()
    }

    /// The fixed set of `sigma` with its induced bracket.
    pub fn restrict(&self) -> LieAlgebra {
        self.complex.clone().with_field(FieldKind::Real)
    }

    /// Whether `v` lies in the real form, up to `eps`.
    pub fn is_real<C: ComplexField>(&self, v: &[C], eps: f64) -> bool {
        v.iter().all(|z| z.im().is_negligible(eps))
    }

    /// Checks that `other` is this algebra's complexification target, i.e.
    /// has the same dimension and constants.
    pub fn matches_codomain(&self, k: &LieAlgebra) -> bool {
        k.field() == FieldKind::Real && *k == self.real
    }
}

/// The conjugate of a complex vector space: same underlying real space,
/// scalars act through their complex conjugates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConjugateSpace {
    dim: usize,
    conjugated: bool,
}

pub fn conjugate_space(dim: usize) -> ConjugateSpace {
    ConjugateSpace {
        dim,
        conjugated: true,
    }
}

impl ConjugateSpace {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn real_dim(&self) -> usize {
        2 * self.dim
    }

    pub fn is_conjugated(&self) -> bool {
        self.conjugated
    }

    pub fn conjugate(&self) -> ConjugateSpace {
        ConjugateSpace {
            dim: self.dim,
            conjugated: !self.conjugated,
        }
    }

    /// `lambda · v` in this space, written in the original coordinates.
    pub fn scalar_mul<C: ComplexField>(&self, lambda: &C, v: &[C]) -> Vec<C> {
        let l = if self.conjugated {
            lambda.conj()
        } else {
            lambda.clone()
        };
        v.iter().map(|x| l.clone() * x.clone()).collect()
    }
}
