//! Runnable experiments: constants, contraction spectra, fixed-point iteration and
//! linearization error measurements.

pub mod constants;
pub mod iteration;
pub mod linearization;
pub mod spectra;
pub mod verify;

pub use constants::{c_b, c_b_p, c_b_prime, constants, ConstantsTable, CONSTANT_TOLERANCE};
pub use iteration::{
    constant_drift_under, constant_stability_check, estimate_constant, isotropic_relative_distance,
    iterate_fixed_point, least_squares_scale, ConstantStability, IterationOptions, IterationStep,
    IterationTrace, Renormalize, CONVERGENCE_THRESHOLD, MAX_INITIAL_DEVIATION, MAX_STEPS,
};
pub use linearization::{
    binomial_linearization_check, compare_istar, linear_response, linearization_error_sweep,
    log_log_slope, BinomialCheck, DegreeTransfer, IStarComparison, LinearResponse, ResidualSweep,
    ResponseOperator,
};
pub use spectra::{
    eigenvalue_cross_validation, measure_multiplier, theorem1_multipliers_quadrature,
    theorem1_operator_spectrum, theorem2_operator_spectrum, theorem2_ratio, theorem3_multiplier,
    theorem3_operator_spectrum, EigenCheck, MeasuredMultiplier, Meridian, Theorem3Spectrum,
};
pub use verify::{random_map, verify, CheckResult, VerifyConfig};
