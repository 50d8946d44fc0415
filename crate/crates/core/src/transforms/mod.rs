//! Cosine, p-cosine and spherical Radon transforms, as grid operators, as
//! pointwise integrals, and through their closed-form eigenvalues.

pub mod closed;
pub mod funk_hecke;
pub mod operator;
pub mod pointwise;

pub use closed::{
    eigenvalue_cosine, eigenvalue_p_cosine, eigenvalue_p_cosine_gamma, eigenvalue_p_cosine_raw,
    eigenvalue_radon, is_even_integer, EigenvalueTable, TransformKind,
};
pub use funk_hecke::{
    p_cosine_multiplier_quadrature, p_cosine_multipliers_quadrature, radon_multipliers_quadrature,
};
pub use operator::{
    as_multiplier, contraction_check, cosine_transform, p_cosine_transform, radon_inverse,
    radon_transform, ContractionReport, OperatorName, SpectralOperator,
};
pub use pointwise::{cosine_at, p_cosine_at, radon_at, AdaptedRule, SubsphereRule};
