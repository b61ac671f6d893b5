//! The space `W = Hom_R(n, k)`, its `K(S)`-action and the pairs `(β, ω)`.

mod datum;
mod equivalence;
mod identification;
mod wspace;

pub use datum::{check_scalar_action, circle_characters, HomomorphismDatum};
pub use equivalence::{equivalent_pairs, witness_adjoint, EquivalenceReport, SearchBudget, Verdict};
pub use identification::{
    act_on_antiholomorphic, antiholomorphic_to_real, conjugate_linear_part, real_to_antiholomorphic,
};
pub(crate) use identification::to_antiholomorphic;
pub use wspace::{
    act_on_omega, action_operator, invariance_residual, invariant_subspace, CandidatePair, WSpace,
};
