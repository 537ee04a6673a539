//! Builders for common bodies: boxes, segments and polytopal balls.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::body::{hull, ConvexBody};
use super::vector::Vector;
use crate::error::{check_dim, GeomError, Result};

/// Default vertex count of a planar ball.
pub const BALL_VERTICES_2D: usize = 64;
/// Default vertex count of a ball in R^3.
pub const BALL_VERTICES_3D: usize = 512;

pub fn segment(a: &Vector, b: &Vector) -> Result<ConvexBody> {
    hull(&[a.clone(), b.clone()])
}

/// Axis-parallel box with opposite corners `lo` and `hi`.
pub fn box_body(lo: &Vector, hi: &Vector) -> Result<ConvexBody> {
    check_dim(lo.dim(), hi.dim())?;
    let n = lo.dim();
    let pts: Vec<Vector> = (0..1usize << n)
        .map(|mask| {
            Vector::raw(
                (0..n)
                    .map(|k| if mask >> k & 1 == 1 { hi[k] } else { lo[k] })
                    .collect(),
            )
        })
        .collect();
    hull(&pts)
}

/// Regular m-gon inscribed in the circle of radius r about `center`,
/// with a vertex at angle `phase`.
pub fn regular_polygon(center: &Vector, r: f64, m: usize, phase: f64) -> Result<ConvexBody> {
    check_dim(2, center.dim())?;
    if m < 3 || !(r > 0.0) {
        return Err(GeomError::InvalidInput(format!("polygon with m={m}, r={r}")));
    }
    let pts: Vec<Vector> = (0..m)
        .map(|i| {
            let a = phase + 2.0 * std::f64::consts::PI * i as f64 / m as f64;
            Vector::raw(vec![center[0] + r * a.cos(), center[1] + r * a.sin()])
        })
        .collect();
    hull(&pts)
}

/// Points of a spherical Fibonacci lattice on S^2.
pub fn fibonacci_sphere(m: usize, offset: f64) -> Vec<Vector> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..m)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / m as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let a = golden * i as f64 + offset;
            Vector::raw(vec![rho * a.cos(), rho * a.sin(), z])
        })
        .collect()
}

/// Polytopal approximation of the ball B(center, r) with about `m` vertices on the sphere.
///
/// Planar balls are regular m-gons, balls in R^3 use a Fibonacci lattice,
/// higher dimensions use the 2n axis points plus seeded random directions.
pub fn ball_with(center: &Vector, r: f64, m: usize) -> Result<ConvexBody> {
    let n = center.dim();
    if !(r >= 0.0) {
        return Err(GeomError::InvalidInput(format!("negative radius {r}")));
    }
    if r == 0.0 {
        return hull(std::slice::from_ref(center));
    }
    let dirs: Vec<Vector> = match n {
        1 => vec![Vector::from([1.0]), Vector::from([-1.0])],
        2 => return regular_polygon(center, r, m, 0.0),
        3 => fibonacci_sphere(m, 0.0),
        _ => {
            let mut d: Vec<Vector> = (0..n)
                .flat_map(|k| [Vector::unit(n, k), -&Vector::unit(n, k)])
                .collect();
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            while d.len() < m {
                let g = Vector::raw((0..n).map(|_| rng.sample(StandardNormal)).collect());
                if let Some(u) = g.normalized() {
                    d.push(u);
                }
            }
            d
        }
    };
    hull(&dirs.iter().map(|u| center + &(u * r)).collect::<Vec<_>>())
}

/// Ball with the default resolution for its dimension.
pub fn ball(center: &Vector, r: f64) -> Result<ConvexBody> {
    let m = match center.dim() {
        2 => BALL_VERTICES_2D,
        3 => BALL_VERTICES_3D,
        n => 64 * n,
    };
    ball_with(center, r, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::hausdorff;
    use approx::assert_abs_diff_eq;

    #[test]
    fn nested_polygon_balls() {
        let c = Vector::zeros(2);
        let b1 = regular_polygon(&c, 1.0, 32, 0.0).unwrap();
        let b2 = regular_polygon(&c, 2.0, 32, 0.0).unwrap();
        assert!(b2.includes(&b1, 1e-12).unwrap());
        assert!(!b1.includes(&b2, 1e-12).unwrap());
        assert_abs_diff_eq!(hausdorff(&b1, &b2).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn sphere_mesh_keeps_all_vertices() {
        let b = ball(&Vector::zeros(3), 1.0).unwrap();
        assert_eq!(b.vertices().len(), BALL_VERTICES_3D);
        assert_eq!(b.dim_affine(), 3);
        let p = b.project(&Vector::from([2.0, 0.0, 0.0])).unwrap();
        assert!((p.norm() - 1.0).abs() < 0.01);
    }

    #[test]
    fn box_corners() {
        let b = box_body(&Vector::from([0.0, 0.0, 0.0]), &Vector::from([1.0, 2.0, 3.0])).unwrap();
        assert_eq!(b.vertices().len(), 8);
        assert_abs_diff_eq!(b.diameter(), 14f64.sqrt(), epsilon = 1e-14);
    }
}
