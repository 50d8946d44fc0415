use std::sync::Arc;

use rayon::prelude::*;

use super::grid::SphereGrid;
use crate::error::{Error, Result};
use crate::numerics::pairwise_sum;

/// Values of a function sampled at the nodes of a shared grid.
#[derive(Debug, Clone)]
pub struct SphereFunction {
    grid: Arc<SphereGrid>,
    values: Vec<f64>,
}

impl SphereFunction {
    pub fn new(grid: Arc<SphereGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite value at grid point {i}"
            )));
        }
        Ok(Self { grid, values })
    }

    /// Constructor for values already known to be finite and of the right length.
    pub(crate) fn from_parts(grid: Arc<SphereGrid>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn constant(grid: Arc<SphereGrid>, c: f64) -> Self {
        let len = grid.len();
        Self::from_parts(grid, vec![c; len])
    }

    pub fn from_fn<F>(grid: Arc<SphereGrid>, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|i| f(grid.point(i)))
            .collect();
        Self::from_parts(grid, values)
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn same_grid(&self, other: &SphereFunction) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid)
    }

    fn check_grid(&self, other: &SphereFunction) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Σ w_i f_i with pairwise summation.
    pub fn integrate(&self) -> f64 {
        let terms: Vec<f64> = self
            .values
            .iter()
            .zip(self.grid.weights())
            .map(|(f, w)| f * w)
            .collect();
        pairwise_sum(&terms)
    }

    /// Average over the sphere.
    pub fn mean(&self) -> f64 {
        self.integrate() / self.grid.measure()
    }

    pub fn inner(&self, other: &SphereFunction) -> Result<f64> {
        self.check_grid(other)?;
        let terms: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.grid.weights())
            .map(|((a, b), w)| a * b * w)
            .collect();
        Ok(pairwise_sum(&terms))
    }

    pub fn l2_norm(&self) -> f64 {
        self.inner(self).expect("same grid").max(0.0).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> SphereFunction {
        Self::from_parts(
            self.grid.clone(),
            self.values.iter().map(|&v| f(v)).collect(),
        )
    }

    pub fn zip_map(
        &self,
        other: &SphereFunction,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<SphereFunction> {
        self.check_grid(other)?;
        Ok(Self::from_parts(
            self.grid.clone(),
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn scale(&self, c: f64) -> SphereFunction {
        self.map(|v| c * v)
    }

    pub fn add(&self, other: &SphereFunction) -> Result<SphereFunction> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SphereFunction) -> Result<SphereFunction> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn powf(&self, e: f64) -> SphereFunction {
        self.map(|v| v.powf(e))
    }

    /// Largest |f(θ) − f(−θ)|.
    pub fn antipodal_asymmetry(&self) -> f64 {
        self.grid
            .half()
            .iter()
            .map(|&i| (self.values[i] - self.values[self.grid.antipode(i)]).abs())
            .fold(0.0, f64::max)
    }

    /// L² norm of the odd part (f(θ) − f(−θ))/2.
    pub fn odd_norm(&self) -> f64 {
        let g = &self.grid;
        let odd = Self::from_parts(
            g.clone(),
            (0..g.len())
                .map(|i| 0.5 * (self.values[i] - self.values[g.antipode(i)]))
                .collect(),
        );
        odd.l2_norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid3() -> Arc<SphereGrid> {
        Arc::new(SphereGrid::build(3, 16).unwrap())
    }

    #[test]
    fn integrate_one() {
        let f = SphereFunction::constant(grid3(), 1.0);
        assert!((f.integrate() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn integrate_odd_product_vanishes() {
        let f = SphereFunction::from_fn(grid3(), |x| x[0] * x[1]);
        assert!(f.integrate().abs() < 1e-14);
    }

    #[test]
    fn integrate_abs_coordinate() {
        // |x1| is not a polynomial; a fine grid converges to 2π
        let g = Arc::new(SphereGrid::build(3, 128).unwrap());
        let f = SphereFunction::from_fn(g, |x| x[0].abs());
        assert!((f.integrate() - 2.0 * PI).abs() < 1e-3);
    }

    #[test]
    fn rejects_wrong_length_and_nan() {
        let g = grid3();
        assert!(SphereFunction::new(g.clone(), vec![0.0; 3]).is_err());
        let mut v = vec![0.0; g.len()];
        v[5] = f64::NAN;
        assert!(SphereFunction::new(g, v).is_err());
    }

    #[test]
    fn mismatched_grids_rejected() {
        let a = SphereFunction::constant(grid3(), 1.0);
        let b = SphereFunction::constant(grid3(), 1.0);
        assert!(matches!(a.inner(&b), Err(Error::GridMismatch)));
    }
}
