pub mod epistemic;
pub mod error;
pub mod exactalg;
pub mod horizon;
pub mod json;
pub mod measurement;
pub mod phasespace;
pub mod transform;
pub mod variable;

pub use epistemic::EpistemicState;
pub use error::{Error, Result};
pub use exactalg::{Field, Matrix, Scalar, Subspace, Vector};
pub use phasespace::{OnticState, PhaseSpace, SubspaceClass};
pub use transform::{AffineSymplectic, PhysicalTransformation};
pub use variable::{GeneralVariable, LinearVariable};
pub use measurement::{construct_copier, construct_measurement, Measurement, ToySubject};
