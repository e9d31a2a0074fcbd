//! Exact correctness, blindness and leakage audits.
//!
//! Every audit takes a [`ClientProgram`] (a plain variant converts into one),
//! so weakened programs with pad bits forced to zero run through the same
//! code as the real protocols.

pub mod blindness;
pub mod correctness;
pub mod leakage;
pub mod strategies;

pub use blindness::{
    audit_blindness_channel, audit_blindness_emission, averaged_client_emission, negative_controls, BlindnessForm,
    BlindnessReport, NegativeControl,
};
pub use correctness::{audit_correctness, CorrectnessCase, CorrectnessReport};
pub use leakage::{leakage_under_strategy, server_views, LeakageReport};

/// Default equality tolerance of every audit verdict.
pub const AUDIT_TOL: f64 = crate::qsim::EQ_TOL;

/// Inputs in report order, index `2a + b`.
pub const INPUTS: [(u8, u8); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];
