pub mod classify;
pub mod expr;
pub mod gf;
pub mod group;
pub mod linalg;
pub mod pg;
pub mod reps;
pub mod tables;
pub mod verify;

pub use classify::{Classifier, ClassifyError, LineDistribution, LineOrbit, PlaneOrbit, PointClass, PointDistribution};
pub use gf::{Fe, Field, FieldError};
pub use group::{GroupElement, GroupError};
pub use pg::{NetInput, PgError, Subspace, SymPoint};
pub use reps::{RepError, RepParams};
pub use verify::{VerificationReport, VerifyError, VerifyOptions};
