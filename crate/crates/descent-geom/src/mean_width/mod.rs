//! Mean width: exact in the plane, by sphere quadrature above; first
//! variation on cap bodies and width/Hausdorff distance bounds.

mod grid;

pub use grid::{SphereGrid, DEFAULT_GRID_SIZE};

use serde::Serialize;

use crate::cones::{cap_body, normal_cone, tangent_cone, PolyCone};
use crate::error::{check_dim, GeomError, Result};
use crate::geom::{hausdorff, hull, omega, ConvexBody, Vector, TAU_PT};

/// Mean width w(K) = (2/ω_n) ∫ h_K dσ.
///
/// Planar bodies use perimeter/π; other dimensions use the grid.
pub fn mean_width(k: &ConvexBody, grid: &SphereGrid) -> Result<f64> {
    check_dim(k.dim(), grid.dim())?;
    if k.dim() == 2 {
        mean_width_2d(k)
    } else {
        mean_width_quadrature(k, grid)
    }
}

/// Planar mean width: perimeter/π.
pub fn mean_width_2d(k: &ConvexBody) -> Result<f64> {
    Ok(k.perimeter_2d()? / std::f64::consts::PI)
}

/// (2/ω_n) Σ w_i h_K(θ_i), in any dimension.
pub fn mean_width_quadrature(k: &ConvexBody, grid: &SphereGrid) -> Result<f64> {
    check_dim(k.dim(), grid.dim())?;
    let s = grid.integrate(|t| k.support_unchecked(t));
    Ok(2.0 / omega(k.dim()) * s)
}

/// w_k(K)/w_n(K) = (ω_{k+1}/ω_k)(ω_n/ω_{n+1}) for a body of affine dimension k in R^n.
pub fn mean_width_ratio(n: usize, k: usize) -> Result<f64> {
    if k < 1 || k >= n {
        return Err(GeomError::InvalidInput(format!(
            "ratio needs 1 <= k < n, got k={k}, n={n}"
        )));
    }
    Ok(omega(k + 1) / omega(k) * omega(n) / omega(n + 1))
}

/// Mean width of K measured inside its own affine hull.
pub fn intrinsic_mean_width(k: &ConvexBody, grid_size: usize, seed: u64) -> Result<f64> {
    let (c, basis) = k.affine_frame();
    if basis.is_empty() {
        return Ok(0.0);
    }
    let pts: Vec<Vector> = k
        .vertices()
        .iter()
        .map(|v| {
            let d = v - &c;
            Vector::new(basis.iter().map(|b| b.dot(&d)).collect())
        })
        .collect::<Result<_>>()?;
    let local = hull(&pts)?;
    let grid = SphereGrid::new(local.dim(), grid_size, seed)?;
    mean_width(&local, &grid)
}

/// ∫ ⟨θ, u⟩ dσ over the spherical sector of a cone.
///
/// Exact arc integration in the plane, grid filtering otherwise.
pub fn sector_moment(cone: &PolyCone, u: &Vector, grid: &SphereGrid) -> Result<f64> {
    let c = sector_centroid(cone, grid)?;
    Ok(c.dot(u))
}

/// ∫ θ dσ over the spherical sector of a cone.
pub fn sector_centroid(cone: &PolyCone, grid: &SphereGrid) -> Result<Vector> {
    let n = cone.dim();
    check_dim(n, grid.dim())?;
    if n == 2 {
        let (mut x, mut y) = (0.0, 0.0);
        for (a, len) in cone.arcs_2d()? {
            let b = a + len;
            x += b.sin() - a.sin();
            y += a.cos() - b.cos();
        }
        return Vector::new(vec![x, y]);
    }
    let mut acc = vec![0.0; n];
    if cone.is_zero() {
        return Vector::new(acc);
    }
    for (t, w) in grid.directions().iter().zip(grid.weights()) {
        if cone.contains(t, 0.0) {
            for (a, tk) in acc.iter_mut().zip(t.coords()) {
                *a += w * tk;
            }
        }
    }
    Vector::new(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct FirstVariation {
    pub delta_w: f64,
    pub first_term: f64,
    pub remainder: f64,
}

/// Splits w(K^{p0+εu}) − w(K) into the first-order term
/// (2/ω_n)·ε·∫_{N̂(p0) ∩ {u}*} ⟨θ, u⟩ dσ and a remainder.
pub fn first_variation(
    k: &ConvexBody,
    p0: &Vector,
    u: &Vector,
    eps: f64,
    grid: &SphereGrid,
) -> Result<FirstVariation> {
    let n = k.dim();
    check_dim(n, u.dim())?;
    check_dim(n, grid.dim())?;
    if !(eps > 0.0) {
        return Err(GeomError::InvalidInput(format!("eps {eps} must be positive")));
    }
    let u = u
        .normalized()
        .ok_or_else(|| GeomError::InvalidInput("zero direction".into()))?;
    let nk = normal_cone(k, p0)?;
    if nk.is_zero() {
        return Err(GeomError::PreconditionViolated(
            "p0 is an interior point".into(),
        ));
    }
    if tangent_cone(k, p0)?.contains(&u, 1e-8) {
        return Err(GeomError::PreconditionViolated(
            "direction u lies in the tangent cone at p0".into(),
        ));
    }
    let limit = nk.intersect(&PolyCone::from_halfspaces(n, std::slice::from_ref(&u))?)?;
    let first_term = 2.0 / omega(n) * eps * sector_moment(&limit, &u, grid)?;
    let kp = cap_body(k, &(p0 + &(&u * eps)))?;
    let delta_w = mean_width(&kp, grid)? - mean_width(k, grid)?;
    Ok(FirstVariation {
        delta_w,
        first_term,
        remainder: delta_w - first_term,
    })
}

/// ∇_p w(K^p) = (2/ω_n) ∫_{N̂(p)} θ dσ for p outside K, with N(p) the
/// normal cone of K^p at p.
pub fn cap_width_gradient(k: &ConvexBody, p: &Vector, grid: &SphereGrid) -> Result<Vector> {
    check_dim(k.dim(), p.dim())?;
    if k.contains(p, TAU_PT)? {
        return Err(GeomError::PreconditionViolated(
            "gradient formula needs p outside K".into(),
        ));
    }
    let kp = cap_body(k, p)?;
    let c = sector_centroid(&normal_cone(&kp, p)?, grid)?;
    Ok(&c * (2.0 / omega(k.dim())))
}

/// Lower constant c⁰_n = 2^{−(n−1)} ω_{n−1} / ((n−1) ω_n).
pub fn c0(n: usize) -> f64 {
    let m = (n - 1) as f64;
    2f64.powf(-m) * omega(n - 1) / (m * omega(n))
}

#[derive(Clone, Debug, Serialize)]
pub struct WidthBounds {
    /// (c⁰_n / diam(K2)^{n−1})^{1/n} · dist(K1, K2)
    pub lhs_lower: f64,
    /// (w(K2) − w(K1))^{1/n}
    pub delta_w_root: f64,
    pub delta_w: f64,
    pub dist: f64,
    /// Upper bound for delta_w: (2/ω_n) ∫ max|h2 − h1| dσ = 2·dist.
    pub upper: f64,
}

impl WidthBounds {
    pub fn lower_holds(&self, tol: f64) -> bool {
        self.lhs_lower <= self.delta_w_root + tol
    }

    pub fn upper_holds(&self, tol: f64) -> bool {
        self.delta_w <= self.upper + tol
    }
}

/// Hausdorff distance versus mean-width gap for nested bodies K1 ⊆ K2.
pub fn width_distance_bounds(
    k1: &ConvexBody,
    k2: &ConvexBody,
    grid: &SphereGrid,
) -> Result<WidthBounds> {
    let n = k1.dim();
    check_dim(n, k2.dim())?;
    if n < 2 {
        return Err(GeomError::InvalidInput("bounds need n >= 2".into()));
    }
    if !k2.includes(k1, TAU_PT)? {
        return Err(GeomError::PreconditionViolated(
            "K1 is not contained in K2".into(),
        ));
    }
    let delta_w = mean_width(k2, grid)? - mean_width(k1, grid)?;
    let dist = hausdorff(k1, k2)?;
    let diam = k2.diameter();
    let lhs_lower = if dist == 0.0 {
        0.0
    } else {
        (c0(n) / diam.powi(n as i32 - 1)).powf(1.0 / n as f64) * dist
    };
    Ok(WidthBounds {
        lhs_lower,
        delta_w_root: delta_w.max(0.0).powf(1.0 / n as f64),
        delta_w,
        dist,
        upper: 2.0 * dist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::shapes;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn v2(x: f64, y: f64) -> Vector {
        Vector::from([x, y])
    }

    fn square() -> ConvexBody {
        shapes::box_body(&v2(0.0, 0.0), &v2(1.0, 1.0)).unwrap()
    }

    #[test]
    fn planar_examples() {
        let g = SphereGrid::new(2, 20_000, 0).unwrap();
        let seg = shapes::segment(&v2(0.0, 0.0), &v2(3.0, 0.0)).unwrap();
        assert_abs_diff_eq!(mean_width(&seg, &g).unwrap(), 6.0 / PI, epsilon = 1e-14);
        let sq = shapes::box_body(&v2(-1.0, -1.0), &v2(1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(mean_width(&sq, &g).unwrap(), 8.0 / PI, epsilon = 1e-14);
        assert_abs_diff_eq!(mean_width_quadrature(&sq, &g).unwrap(), 8.0 / PI, epsilon = 1e-3);
        let disk = shapes::regular_polygon(&v2(0.0, 0.0), 1.0, 4096, 0.0).unwrap();
        assert_abs_diff_eq!(mean_width(&disk, &g).unwrap(), 2.0, epsilon = 1e-6);
    }

    #[test]
    fn quadrature_in_3d() {
        let g = SphereGrid::default_for(3, 0).unwrap();
        // the unit ball has mean width 2; the mesh is a little smaller
        let b = shapes::ball(&Vector::zeros(3), 1.0).unwrap();
        let w = mean_width(&b, &g).unwrap();
        assert!(w < 2.0 && w > 1.98, "{w}");
        // a cube of side a has mean width 3a/2
        let c = shapes::box_body(&Vector::zeros(3), &Vector::from([1.0, 1.0, 1.0])).unwrap();
        assert_abs_diff_eq!(mean_width(&c, &g).unwrap(), 1.5, epsilon = 1e-4);
    }

    #[test]
    fn ratio_examples() {
        assert_abs_diff_eq!(mean_width_ratio(2, 1).unwrap(), PI / 2.0, epsilon = 1e-14);
        assert!(mean_width_ratio(2, 2).is_err());
        assert!(mean_width_ratio(3, 0).is_err());
        // segment in the plane: w_1 = L, w_2 = 2L/π
        let seg = shapes::segment(&v2(0.0, 0.0), &v2(0.0, 2.5)).unwrap();
        let g = SphereGrid::new(2, 100, 0).unwrap();
        let ratio = intrinsic_mean_width(&seg, 100, 0).unwrap() / mean_width(&seg, &g).unwrap();
        assert_abs_diff_eq!(ratio, mean_width_ratio(2, 1).unwrap(), epsilon = 1e-12);
        // planar square in R^3
        let sq3 = shapes::box_body(&Vector::zeros(3), &Vector::from([1.0, 1.0, 0.0])).unwrap();
        let g3 = SphereGrid::default_for(3, 0).unwrap();
        let ratio = intrinsic_mean_width(&sq3, 100, 0).unwrap() / mean_width(&sq3, &g3).unwrap();
        assert_abs_diff_eq!(ratio, mean_width_ratio(3, 2).unwrap(), epsilon = 1e-4);
        // segment in R^3
        let seg3 = shapes::segment(&Vector::zeros(3), &Vector::from([1.0, 2.0, 2.0])).unwrap();
        let ratio = intrinsic_mean_width(&seg3, 100, 0).unwrap() / mean_width(&seg3, &g3).unwrap();
        assert_abs_diff_eq!(ratio, mean_width_ratio(3, 1).unwrap(), epsilon = 1e-4);
    }

    #[test]
    fn first_variation_on_edge_has_no_first_term() {
        let g = SphereGrid::new(2, 100, 0).unwrap();
        let fv = first_variation(&square(), &v2(1.0, 0.5), &v2(1.0, 0.0), 0.1, &g).unwrap();
        assert_eq!(fv.first_term, 0.0);
        assert!(fv.remainder > 0.0);
        assert_abs_diff_eq!(fv.delta_w, (2.0 * (0.01f64 + 0.25).sqrt() - 1.0) / PI, epsilon = 1e-14);
    }

    #[test]
    fn first_variation_at_corner_matches_closed_form() {
        let g = SphereGrid::new(2, 100, 0).unwrap();
        let u = v2(1.0, 1.0);
        for eps in [0.2, 0.1, 0.05, 0.025] {
            let fv = first_variation(&square(), &v2(1.0, 1.0), &u, eps, &g).unwrap();
            let a: f64 = eps / 2f64.sqrt();
            assert_abs_diff_eq!(fv.first_term, 2.0 * a / PI, epsilon = 1e-14);
            let exact = (2.0 * (1.0 + 2.0 * a + 2.0 * a * a).sqrt() - 2.0 - 2.0 * a) / PI;
            assert_abs_diff_eq!(fv.remainder, exact, epsilon = 1e-13);
        }
        let e = first_variation(&square(), &v2(0.5, 0.5), &u, 0.1, &g);
        assert!(matches!(e, Err(GeomError::PreconditionViolated(_))));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let g = SphereGrid::new(2, 100, 0).unwrap();
        let k = square();
        let p = v2(2.0, 2.0);
        let grad = cap_width_gradient(&k, &p, &g).unwrap();
        let h = 1e-5;
        let w = |q: &Vector| mean_width(&cap_body(&k, q).unwrap(), &g).unwrap();
        for i in 0..2 {
            let e = &Vector::unit(2, i) * h;
            let fd = (w(&(&p + &e)) - w(&(&p - &e))) / (2.0 * h);
            assert!((fd - grad[i]).abs() <= 1e-6 * grad[i].abs().max(1e-3), "{fd} vs {}", grad[i]);
        }
    }

    #[test]
    fn bounds_for_concentric_disks() {
        let g = SphereGrid::new(2, 100, 0).unwrap();
        let c = v2(0.0, 0.0);
        let k1 = shapes::regular_polygon(&c, 1.0, 64, 0.0).unwrap();
        let k2 = shapes::regular_polygon(&c, 2.0, 64, 0.0).unwrap();
        let b = width_distance_bounds(&k1, &k2, &g).unwrap();
        assert_abs_diff_eq!(b.dist, 1.0, epsilon = 1e-12);
        assert!(b.lower_holds(0.0) && b.upper_holds(0.0));
        let same = width_distance_bounds(&k1, &k1, &g).unwrap();
        assert_eq!(same.delta_w, 0.0);
        assert!(same.lower_holds(0.0) && same.upper_holds(0.0));
        assert!(matches!(
            width_distance_bounds(&k2, &k1, &g),
            Err(GeomError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn segment_and_apex_closed_form() {
        let g = SphereGrid::new(2, 100, 0).unwrap();
        for nu in 1..=8 {
            let nu = nu as f64;
            let alpha = nu * nu;
            let half = alpha / nu / 2.0;
            let k1 = shapes::segment(&v2(-half, 0.0), &v2(half, 0.0)).unwrap();
            let k2 = k1.with_point(&v2(0.0, 1.0 / nu)).unwrap();
            let b = width_distance_bounds(&k1, &k2, &g).unwrap();
            let expect = ((4.0 + alpha * alpha).sqrt() - alpha) / (PI * nu);
            assert_abs_diff_eq!(b.delta_w, expect, epsilon = 1e-9);
        }
    }
}
