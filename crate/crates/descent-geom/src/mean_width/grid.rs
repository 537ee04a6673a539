use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::geom::{omega, shapes::fibonacci_sphere, Vector, MAX_DIM};

/// Default number of quadrature nodes.
pub const DEFAULT_GRID_SIZE: usize = 20_000;

/// Weighted directions on S^{n-1}; weights sum to ω_n.
///
/// Planar grids are uniform in angle, R^3 uses a Fibonacci lattice and
/// higher dimensions use antithetic pairs of seeded Gaussian samples.
/// The seed shifts the planar and Fibonacci lattices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereGrid {
    dim: usize,
    seed: u64,
    directions: Vec<Vector>,
    weights: Vec<f64>,
}

impl SphereGrid {
    pub fn new(dim: usize, size: usize, seed: u64) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(GeomError::InvalidInput(format!("grid dimension {dim}")));
        }
        if size < 2 {
            return Err(GeomError::InvalidInput(format!("grid size {size} < 2")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let offset = if seed == 0 { 0.0 } else { rng.gen::<f64>() };
        let directions: Vec<Vector> = match dim {
            1 => vec![Vector::from([1.0]), Vector::from([-1.0])],
            2 => (0..size)
                .map(|i| Vector::polar(2.0 * std::f64::consts::PI * (i as f64 + offset) / size as f64))
                .collect(),
            3 => fibonacci_sphere(size, 2.0 * std::f64::consts::PI * offset),
            _ => {
                let mut d = Vec::with_capacity(size);
                while d.len() + 1 < size {
                    let g = Vector::from_iter_unchecked((0..dim).map(|_| rng.sample(StandardNormal)));
                    if let Some(u) = g.normalized() {
                        d.push(-&u);
                        d.push(u);
                    }
                }
                d
            }
        };
        let w = omega(dim) / directions.len() as f64;
        let weights = vec![w; directions.len()];
        Ok(SphereGrid {
            dim,
            seed,
            directions,
            weights,
        })
    }

    /// Grid of the default size.
    pub fn default_for(dim: usize, seed: u64) -> Result<Self> {
        SphereGrid::new(dim, DEFAULT_GRID_SIZE, seed)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[Vector] {
        &self.directions
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Σ w_i f(θ_i), summed in index order.
    pub fn integrate(&self, f: impl Fn(&Vector) -> f64) -> f64 {
        self.directions
            .iter()
            .zip(&self.weights)
            .map(|(t, w)| w * f(t))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn weights_and_norms() {
        for dim in 1..=6 {
            let g = SphereGrid::new(dim, 1000, 7).unwrap();
            assert_eq!(g.directions().len(), g.weights().len());
            assert_abs_diff_eq!(g.weights().iter().sum::<f64>(), omega(dim), epsilon = 1e-9);
            for t in g.directions() {
                assert_abs_diff_eq!(t.norm(), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn deterministic_from_seed() {
        assert_eq!(SphereGrid::new(4, 500, 9).unwrap(), SphereGrid::new(4, 500, 9).unwrap());
        assert_ne!(SphereGrid::new(4, 500, 9).unwrap(), SphereGrid::new(4, 500, 10).unwrap());
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(SphereGrid::new(0, 10, 0).is_err());
        assert!(SphereGrid::new(3, 1, 0).is_err());
    }
}
