//! The full pipeline: parameter gate, hypothesis check, reduction loop, case
//! split, and one of the two constructive branches, packaged as a
//! self-verifying certificate.

mod analyze;
mod certificate;
mod params;
mod sweep;
mod verify;

pub use analyze::{analyze, analyze_with_trace};
pub use certificate::{
    Certificate, Finder, InconclusiveReason, OutcomeKind, OverridesRecord, ParamsRecord, Payload,
    TraceSummary, CERTIFICATE_VERSION,
};
pub use params::{
    check_hypothesis, format_rational, parse_rational, HypothesisReport, Mode, Overrides,
    ParamViolation, Params, INEQ_C_LOWER, INEQ_C_UPPER, INEQ_EPS, INEQ_MULTIPLIER, INEQ_OVERRIDES,
    INEQ_PROFILE, INEQ_R, INEQ_RELAXED,
};
pub use sweep::{sweep, SweepRow};
pub use verify::{check_certificate, verify_certificate, VerifyError};
