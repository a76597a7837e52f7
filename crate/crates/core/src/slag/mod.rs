//! Special Lagrangian curves: conditions, tracing and verification.

pub mod conditions;
pub mod curves;
pub mod marching;
pub mod verify;

pub use conditions::{ah_condition, ah_cos2psi, ah_cos2psi_unchecked, ah_level_value, ah_psi, ah_w, SinSign};
pub use curves::{
    ah_trace_theta_k, ah_trace_theta_phi, tn_so2_curve, tn_so2_radius, tn_u1_case1, tn_u1_case2, CurveTrace,
    ResidualSummary, SO2Branch, TraceChart, TraceSample,
};
pub use marching::{sample_grid, thin_polyline, trace_zero_set, ImplicitGrid, Polyline};
pub use verify::{tangents, verify_in_place, verify_slag, VerifyReport};
