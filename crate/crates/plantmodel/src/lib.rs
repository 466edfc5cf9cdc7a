//! Fuzzy singular plant descriptions: per-rule linear dynamics blended by
//! memberships, two-interval random delays with a Bernoulli switch, diagonal
//! sensor-fault bands, and linear-fractional uncertainty channels.
//!
//! Plants are immutable after construction; every sampling operation takes an
//! explicit random source, so concurrent use is safe and reproducible.

mod delay;
mod error;
mod examples;
mod fault;
mod membership;
mod plant;
mod uncertainty;

pub use delay::{sample_delay_path, DelayGenerator, DelayPath, DelaySpec, DeltaProcess};
pub use error::PlantError;
pub use examples::{
    build_dc_motor, build_example1, dc_motor_delays, dc_motor_uncertainty, example1_delays,
    DcMotorModel, MotorParameters, MOTOR_PARAMETERS,
};
pub use fault::{fault_decompose, sample_fault, SensorFaultModel};
pub use membership::{blend, normalize_memberships, MembershipEvaluator, MembershipModel};
pub use plant::{check_admissible, AdmissibilityReport, FuzzyPlant, FuzzyRule, InitialFunction};
pub use uncertainty::{
    resolve_uncertainty, sample_contraction, sample_uncertainty, spectral_norm,
    UncertaintyStructure,
};
