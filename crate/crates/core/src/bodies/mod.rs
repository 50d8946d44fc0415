//! Star bodies stored by radial samples, and the geometric operators acting on them.

pub mod body;
pub mod ops;
pub mod shape;

pub use body::{BodySpec, HarmonicTerm, LinearMap, StarBody, MAX_CONDITION, SYMMETRY_TOLERANCE};
pub use ops::{
    apply_linear, centroid_body, centroid_body_closed_form, intersection_body, legendre_matrix,
    polar, polar_intersection_body, radial_from_support, support_function, support_on_grid,
    SupportEvaluator,
};
pub use shape::{
    convexity_check, deviation_from_unit, distance_to_ball, isotropic_position, BodyDistanceReport,
    ConvexityReport, CONVEXITY_TOLERANCE, ISOTROPY_TOLERANCE,
};
