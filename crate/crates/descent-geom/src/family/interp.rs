use std::f64::consts::PI;

use crate::error::{check_dim, GeomError, Result};
use crate::geom::{hausdorff, hull, shapes, ConvexBody, Vector, TAU_PT};

/// Mesh points per vertex used for planar parallel bodies.
pub const PARALLEL_MESH_2D: usize = 32;
/// Mesh points per vertex used for parallel bodies in R^3 and above.
pub const PARALLEL_MESH_ND: usize = 128;

/// Offsets approximating the ball of radius `r`. In the plane the polygon
/// is circumscribed, so the mesh covers the true ball.
fn ball_offsets(n: usize, r: f64) -> Result<Vec<Vector>> {
    let origin = Vector::zeros(n);
    if n == 2 {
        let m = PARALLEL_MESH_2D;
        let rc = r / (PI / m as f64).cos();
        return Ok((0..m)
            .map(|i| Vector::polar(2.0 * PI * i as f64 / m as f64) * rc)
            .collect());
    }
    Ok(shapes::ball_with(&origin, r, PARALLEL_MESH_ND)?
        .vertices()
        .to_vec())
}

/// Outer parallel body K ⊕ B(r) as a V-polytope.
pub fn parallel_body(k: &ConvexBody, r: f64) -> Result<ConvexBody> {
    if r <= 0.0 {
        return Ok(k.clone());
    }
    let offs = ball_offsets(k.dim(), r)?;
    let pts: Vec<Vector> = k
        .vertices()
        .iter()
        .flat_map(|v| offs.iter().map(move |o| v + o))
        .collect();
    hull(&pts)
}

/// Clips a counter-clockwise polygon by the half-plane left of each edge
/// of the full-dimensional counter-clockwise polygon `clip`.
fn clip_polygon(subject: &[Vector], clip: &[Vector]) -> Vec<Vector> {
    let mut out = subject.to_vec();
    let m = clip.len();
    for i in 0..m {
        if out.is_empty() {
            break;
        }
        let a = &clip[i];
        let b = &clip[(i + 1) % m];
        let e = b - a;
        let side = |p: &Vector| e[0] * (p[1] - a[1]) - e[1] * (p[0] - a[0]);
        let input = std::mem::take(&mut out);
        for j in 0..input.len() {
            let p = &input[j];
            let q = &input[(j + 1) % input.len()];
            let (sp, sq) = (side(p), side(q));
            if sp >= 0.0 {
                out.push(p.clone());
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                out.push(Vector::lerp(p, q, sp / (sp - sq)));
            }
        }
    }
    out
}

/// K2 ∩ (K1 ⊕ B(r)).
///
/// Exact polygon clipping when K2 is a full-dimensional polygon. Otherwise
/// each vertex w of K2 contributes the point at distance min(r, dist(w, K1))
/// from its projection onto K1 toward w. These points slide outward along
/// fixed segments inside K2 as r grows, so the hull with K1 is an inner
/// approximation of the intersection that is nested in r and reaches K2 at
/// r = dist(K1, K2).
pub fn clipped_parallel_body(k1: &ConvexBody, k2: &ConvexBody, r: f64) -> Result<ConvexBody> {
    check_dim(k1.dim(), k2.dim())?;
    if r <= 0.0 {
        return Ok(k1.clone());
    }
    if k2.dim() == 2 && k2.is_full_dim() {
        let outer = parallel_body(k1, r)?;
        if k2.includes(&outer, 0.0)? {
            return Ok(outer);
        }
        if outer.vertices().len() >= 3 {
            let pts = clip_polygon(outer.vertices(), k2.vertices());
            let mut pts = if pts.is_empty() { k1.vertices().to_vec() } else { pts };
            pts.extend(k1.vertices().iter().cloned());
            return hull(&pts);
        }
    }
    let mut pts = k1.vertices().to_vec();
    for w in k2.vertices() {
        let foot = k1.project(w)?;
        let d = foot.dist(w);
        if d > 0.0 {
            pts.push(Vector::lerp(&foot, w, (r / d).min(1.0)));
        }
    }
    hull(&pts)
}

/// The interpolating body at fraction `f` ∈ [0, 1] between nested K1 ⊆ K2:
/// the points of K2 within f·dist(K1, K2) of K1.
pub fn interpolate(k1: &ConvexBody, k2: &ConvexBody, f: f64) -> Result<ConvexBody> {
    check_dim(k1.dim(), k2.dim())?;
    if !(0.0..=1.0).contains(&f) {
        return Err(GeomError::PreconditionViolated(format!(
            "fraction {f} outside [0, 1]"
        )));
    }
    if !k2.includes(k1, TAU_PT * (1.0 + k2.diameter()))? {
        return Err(GeomError::PreconditionViolated(
            "interpolation needs K1 inside K2".into(),
        ));
    }
    if f == 0.0 {
        return Ok(k1.clone());
    }
    if f == 1.0 {
        return Ok(k2.clone());
    }
    let d = hausdorff(k1, k2)?;
    clipped_parallel_body(k1, k2, f * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mean_width::mean_width_2d;
    use approx::assert_abs_diff_eq;

    fn v2(x: f64, y: f64) -> Vector {
        Vector::from([x, y])
    }

    #[test]
    fn disks_halfway() {
        let o = v2(0.0, 0.0);
        let k1 = shapes::ball(&o, 1.0).unwrap();
        let k2 = shapes::ball(&o, 2.0).unwrap();
        let a = interpolate(&k1, &k2, 0.5).unwrap();
        let r = PI / 64.0;
        // Radius between the inscribed and circumscribed values.
        for v in a.vertices() {
            assert!(v.norm() <= 2.0 + 1e-12);
            assert!(v.norm() >= 1.5 * r.cos() - 1e-12, "{}", v.norm());
        }
        assert_abs_diff_eq!(mean_width_2d(&a).unwrap(), 3.0, epsilon = 0.01);
    }

    #[test]
    fn endpoints() {
        let k1 = shapes::box_body(&v2(0.0, 0.0), &v2(1.0, 1.0)).unwrap();
        let k2 = shapes::box_body(&v2(-1.0, -1.0), &v2(2.0, 2.0)).unwrap();
        assert_eq!(interpolate(&k1, &k2, 0.0).unwrap(), k1);
        assert_eq!(interpolate(&k1, &k2, 1.0).unwrap(), k2);
        let near_one = interpolate(&k1, &k2, 1.0 - 1e-12).unwrap();
        assert!(hausdorff(&near_one, &k2).unwrap() < 1e-9);
        assert!(interpolate(&k2, &k1, 0.5).is_err());
        assert!(interpolate(&k1, &k2, 1.5).is_err());
    }

    #[test]
    fn monotone_in_fraction() {
        let k1 = shapes::box_body(&v2(0.0, 0.0), &v2(1.0, 0.2)).unwrap();
        let k2 = shapes::regular_polygon(&v2(0.5, 0.1), 2.0, 7, 0.3).unwrap();
        let mut prev = k1.clone();
        for i in 1..=10 {
            let a = interpolate(&k1, &k2, i as f64 / 10.0).unwrap();
            assert!(a.includes(&prev, 1e-9).unwrap());
            assert!(k2.includes(&a, 1e-9).unwrap());
            prev = a;
        }
    }

    #[test]
    fn segment_inside_triangle_in_space() {
        let k1 = shapes::segment(&Vector::from([0.0, 0.0, 0.0]), &Vector::from([1.0, 0.0, 0.0])).unwrap();
        let k2 = hull(&[
            Vector::from([-1.0, -1.0, 0.0]),
            Vector::from([3.0, -1.0, 0.0]),
            Vector::from([0.0, 3.0, 0.0]),
            Vector::from([0.0, 0.0, 1.0]),
        ])
        .unwrap();
        let mut prev = k1.clone();
        for i in 1..=8 {
            let a = interpolate(&k1, &k2, i as f64 / 8.0).unwrap();
            assert!(a.includes(&prev, 1e-9).unwrap(), "fraction {i}/8");
            assert!(k2.includes(&a, 1e-9).unwrap());
            prev = a;
        }
        assert_eq!(prev, k2);
    }

    #[test]
    fn nested_in_space() {
        let k1 = shapes::ball_with(&Vector::from([0.1, 0.0, 0.2]), 0.5, 40).unwrap();
        let mut pts = k1.scale_about(&k1.centroid(), 1.5).unwrap().vertices().to_vec();
        pts.push(Vector::from([2.0, 0.3, -0.4]));
        pts.push(Vector::from([-0.2, -1.7, 0.9]));
        let k2 = hull(&pts).unwrap();
        let mut prev = k1.clone();
        for i in 1..=16 {
            let a = interpolate(&k1, &k2, i as f64 / 16.0).unwrap();
            assert!(a.includes(&prev, 1e-9).unwrap(), "fraction {i}/16");
            assert!(k2.includes(&a, 1e-9).unwrap());
            prev = a;
        }
    }
}
