pub mod catalog;
pub mod curvature;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod moduli;
pub mod numeric;
pub mod pipeline;
pub mod scalar;
pub mod semidirect;
pub mod specfile;
pub mod weights;

pub use error::{Error, Result};
