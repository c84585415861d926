//! Verifiers turning candidate points into certificates.

mod gda;
mod global;
mod linearvi;
mod local;
mod qvi;

pub use gda::verify_gda_fixed_point;
pub use global::verify_globalization;
pub use linearvi::{box_vi_residual, single_component_residual, verify_linearvi};
pub use local::{ball_offsets, search_local_minmax, single_component_gain, verify_local_minmax};
pub use qvi::{verify_kakutani, verify_qvi};

/// Slack used for feasibility and membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
