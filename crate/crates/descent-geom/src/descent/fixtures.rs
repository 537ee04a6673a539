//! Deterministic families and curves for the descent checks.

use std::f64::consts::PI;

use crate::error::{GeomError, Result};
use crate::family::{complete, validate_stratification, Family};
use crate::geom::{hull, shapes, ConvexBody, Vector};
use crate::mean_width::SphereGrid;
use crate::sep::fixtures::{cantor_function, cantor_knots};
use crate::sep::Polyline;

/// Vertices of the planar disks used by the fixtures. A vertex sits at
/// angle 0, so radial projection along the positive x axis is exact.
pub const DISK_VERTICES: usize = 64;
/// Azimuthal resolution of the solids of revolution in R^3.
pub const AZIMUTHS: usize = 24;
/// Sample angles on the rounded rim of the solids of revolution.
pub const RIM_SAMPLES: usize = 5;

fn disk(r: f64) -> Result<ConvexBody> {
    let o = Vector::from([0.0, 0.0]);
    if r == 0.0 {
        return hull(&[o]);
    }
    shapes::regular_polygon(&o, r, DISK_VERTICES, 0.0)
}

/// Concentric disks with radii r0 + (r1 − r0)·i/levels, i = 0..=levels.
pub fn disk_family(r0: f64, r1: f64, levels: usize) -> Result<Family> {
    if levels == 0 || !(0.0..r1).contains(&r0) {
        return Err(GeomError::InvalidInput(format!(
            "disk family needs 0 ≤ r0 < r1 and levels ≥ 1, got {r0}, {r1}, {levels}"
        )));
    }
    let bodies = (0..=levels)
        .map(|i| disk(r0 + (r1 - r0) * i as f64 / levels as f64))
        .collect::<Result<Vec<_>>>()?;
    Family::from_bodies(bodies, &SphereGrid::new(2, 2, 0)?)
}

/// Squares about the origin with half-sides 1.4^i, each rotated 15° past
/// the previous one, completed at resolution `h`.
pub fn rotated_squares(levels: usize, h: f64) -> Result<Family> {
    let bodies = (0..levels)
        .map(|i| {
            let half = 1.4f64.powi(i as i32);
            let phase = PI / 4.0 + (15f64).to_radians() * i as f64;
            shapes::regular_polygon(&Vector::from([0.0, 0.0]), half * 2f64.sqrt(), 4, phase)
        })
        .collect::<Result<Vec<_>>>()?;
    let strat = validate_stratification(bodies)?;
    complete(&strat, h, &SphereGrid::new(2, 2, 0)?)
}

/// A vertex of the largest member of [`rotated_squares`].
pub fn rotated_squares_corner(levels: usize, k: usize) -> Vector {
    let half = 1.4f64.powi(levels as i32 - 1);
    let phase = PI / 4.0 + (15f64).to_radians() * (levels - 1) as f64 + PI / 2.0 * k as f64;
    Vector::polar(phase) * (half * 2f64.sqrt())
}

/// The solid-of-revolution family in R^3: flat disks D_t (radius t in the
/// plane x3 = 0) for t ∈ [0, 1], then E_t = D_1 thickened by t − 1 for
/// t ∈ (1, 2].
#[derive(Clone, Debug)]
pub struct StallingDisks {
    pub family: Family,
    /// Time parameter t of each member.
    pub times: Vec<f64>,
    /// Endpoint on the top face of E_2.
    pub endpoint: Vector,
    /// Vertical segment down to the plane, stall, then radius to the origin.
    pub curve: Polyline,
    /// The curve stalls for t in (stall, 1].
    pub stall: f64,
}

fn flat_disk_3d(r: f64) -> Result<ConvexBody> {
    if r == 0.0 {
        return hull(&[Vector::zeros(3)]);
    }
    let pts: Vec<Vector> = (0..AZIMUTHS)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / AZIMUTHS as f64;
            Vector::from([r * a.cos(), r * a.sin(), 0.0])
        })
        .collect();
    hull(&pts)
}

fn thick_disk(s: f64) -> Result<ConvexBody> {
    let mut pts = Vec::with_capacity(AZIMUTHS * RIM_SAMPLES);
    for k in 0..AZIMUTHS {
        let a = 2.0 * PI * k as f64 / AZIMUTHS as f64;
        for j in 0..RIM_SAMPLES {
            let psi = -PI / 2.0 + PI * j as f64 / (RIM_SAMPLES - 1) as f64;
            let r = 1.0 + s * psi.cos();
            pts.push(Vector::from([r * a.cos(), r * a.sin(), s * psi.sin()]));
        }
    }
    hull(&pts)
}

/// [`StallingDisks`] with `n` members on each of [0, 1] and (1, 2]; `xbar`
/// is the planar part of the endpoint, 0 < |xbar| < 1.
pub fn stalling_disks(n: usize, xbar: f64) -> Result<StallingDisks> {
    if n == 0 || !(xbar > 0.0 && xbar < 1.0) {
        return Err(GeomError::InvalidInput(format!(
            "stalling_disks needs n ≥ 1 and 0 < xbar < 1, got {n}, {xbar}"
        )));
    }
    let mut bodies = Vec::with_capacity(2 * n + 1);
    let mut times = Vec::with_capacity(2 * n + 1);
    for i in 0..=n {
        let t = i as f64 / n as f64;
        bodies.push(flat_disk_3d(t)?);
        times.push(t);
    }
    for i in 1..=n {
        let s = i as f64 / n as f64;
        bodies.push(thick_disk(s)?);
        times.push(1.0 + s);
    }
    let family = Family::from_bodies(bodies, &SphereGrid::default_for(3, 0)?)?;
    let endpoint = Vector::from([xbar, 0.0, 1.0]);
    let curve = Polyline::new(vec![
        Vector::zeros(3),
        Vector::from([xbar, 0.0, 0.0]),
        endpoint.clone(),
    ])?;
    Ok(StallingDisks {
        family,
        times,
        endpoint,
        curve,
        stall: xbar,
    })
}

/// Ω_t = [0, t] × [g(t), 1] for the level-`level` staircase g, at each t.
/// These boxes are not nested, so they are returned as a plain list.
pub fn cantor_family(level: u32, ts: &[f64]) -> Result<Vec<ConvexBody>> {
    ts.iter()
        .map(|&t| {
            let g = cantor_function(level, t);
            shapes::box_body(&Vector::from([0.0, g]), &Vector::from([t, 1.0]))
        })
        .collect()
}

/// Distinct break-point parameters of the level-`level` staircase.
pub fn cantor_times(level: u32) -> Vec<f64> {
    let mut ts: Vec<f64> = cantor_knots(level).into_iter().map(|k| k.0).collect();
    ts.dedup();
    ts
}

/// Concentric disks of radius (g(t) + t)/2 at the break points of the
/// level-`level` staircase, with the radius from the origin to (1, 0).
pub fn cantor_disks(level: u32) -> Result<(Family, Polyline)> {
    let bodies = cantor_times(level)
        .into_iter()
        .map(|t| disk(0.5 * (cantor_function(level, t) + t)))
        .collect::<Result<Vec<_>>>()?;
    let fam = Family::from_bodies(bodies, &SphereGrid::new(2, 2, 0)?)?;
    let curve = Polyline::new(vec![Vector::from([0.0, 0.0]), Vector::from([1.0, 0.0])])?;
    Ok((fam, curve))
}
