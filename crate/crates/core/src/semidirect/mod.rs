//! Semidirect sums `n ⋊ s` and their matrix group models.

mod action;
mod model;
mod sum;

pub use action::{ActionReport, DerivationAction};
pub use model::{commutator_fd, model_consistency, ConsistencyReport, MatrixGroupModel};
pub use sum::{check_ideal, semidirect_sum, verify_horizontal_integrability, IntegrabilityReport, SemidirectSum};
