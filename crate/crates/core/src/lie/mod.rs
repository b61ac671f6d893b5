//! Finite-dimensional Lie algebras given by structure constants.

mod algebra;
mod matrix_basis;
mod real_form;

pub use algebra::{FieldKind, JacobiReport, LieAlgebra, StructureConstant, StructureTable};
pub use matrix_basis::MatrixBasis;
pub use real_form::{complexify, conjugate_space, ConjugateSpace, RealForm};
pub(crate) use algebra::hermitian_norm_with;
