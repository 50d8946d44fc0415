//! Quadrature grids on S^{n-1}, sampled functions, and harmonic projection
//! through zonal kernels.

pub mod frame;
pub mod function;
pub mod grid;
pub mod harmonics;
pub mod interp;
pub mod kernel;

pub use frame::orthonormal_complement;
pub use function::SphereFunction;
pub use grid::{GridDescriptor, SphereGrid, MAX_POINTS};
pub use harmonics::{
    decompose, project, unit_axis, zonal_harmonic, HarmonicSpectrum, SpectrumSummary, ZonalHarmonic,
};
pub use interp::{maximize_on_sphere, BandLimited, Jet};
pub use kernel::{apply_kernel, evaluate_kernel, harmonic_dim, multiplier_kernel, project_all};
