//! Geodesic segments `t ↦ u·e^{itz}`, polygonal and sampled paths, their
//! lengths in a symmetric norm, and executable forms of the minimality,
//! triangle, metric-equivalence and uniqueness statements.

mod checks;
mod paths;

pub use checks::{
    alignment_test, antipodal_logs, metric_equivalence_check, metric_equivalence_constant,
    triangle_exponent_inequality, AlignmentRecord, EquivalenceRecord, Hypothesis, TriangleRecord,
};
pub use paths::{
    geodesic_between, geodesic_distance, polygonal_length, sampled_length, segment_length, GeodesicSegment,
    PolygonalPath, SampledPath,
};

/// Slack on `‖z‖_∞ ≤ π` for segment exponents.
pub const PI_SLACK: f64 = 1e-12;
/// Relative Frobenius tolerance for recognizing `log(u*w) = t₀·log(u*v)`.
pub const ALIGN_TOL: f64 = 1e-7;
