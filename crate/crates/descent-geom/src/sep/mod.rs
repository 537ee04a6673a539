//! Self-expanding paths: polylines along which the distance from any point
//! to every later point never decreases.
//!
//! A polyline is such a path iff at every segment start `a` with unit
//! direction `d`, ⟨d, a − y⟩ ≥ 0 for all earlier vertices `y`. Earlier
//! vertices suffice because the inequality is affine in `y`, and the check
//! at segment starts suffices because |x(t) − y|² is convex along a segment.

pub mod fixtures;
mod polyline;

pub use polyline::Polyline;

use serde::Serialize;

use crate::cones::normal_cone;
use crate::error::{GeomError, Result};
use crate::geom::{hull, omega, ConvexBody, Vector};
use crate::mean_width::{mean_width, sector_moment, SphereGrid};

/// Default tolerance on normalized inner products.
pub const SEP_TOL: f64 = 1e-9;

/// Slack used by the length bound.
pub const LENGTH_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SepWitness {
    /// Earlier vertex.
    pub y: Vector,
    /// Start of the offending segment.
    pub a: Vector,
    /// Unit direction of the segment.
    pub d: Vector,
    /// ⟨d, a − y⟩ / |a − y|
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SepReport {
    pub ok: bool,
    pub witness: Option<SepWitness>,
}

/// Exact decision for polylines; reports the first violation in path order.
pub fn is_sep(gamma: &Polyline, tol: f64) -> SepReport {
    let pts = gamma.points();
    for i in 0..pts.len().saturating_sub(1) {
        let a = &pts[i];
        let Some(d) = (&pts[i + 1] - a).normalized() else {
            continue;
        };
        for y in &pts[..i] {
            let r = a - y;
            let n = r.norm();
            if n == 0.0 {
                continue;
            }
            let value = d.dot(&r) / n;
            if value < -tol {
                return SepReport {
                    ok: false,
                    witness: Some(SepWitness {
                        y: y.clone(),
                        a: a.clone(),
                        d,
                        value,
                    }),
                };
            }
        }
    }
    SepReport { ok: true, witness: None }
}

fn require_sep(gamma: &Polyline) -> Result<()> {
    match is_sep(gamma, SEP_TOL).witness {
        None => Ok(()),
        Some(w) => Err(GeomError::PreconditionViolated(format!(
            "not a self-expanding path: segment at {:?} heads back towards {:?}",
            w.a.coords(),
            w.y.coords()
        ))),
    }
}

/// Hulls of the prefixes γ_0 ⊆ γ_1 ⊆ ..., built incrementally.
pub fn prefix_hulls(gamma: &Polyline) -> Result<Vec<ConvexBody>> {
    let mut out: Vec<ConvexBody> = Vec::with_capacity(gamma.len());
    for p in gamma.points() {
        let next = match out.last() {
            None => hull(std::slice::from_ref(p))?,
            Some(h) => h.with_point(p)?,
        };
        out.push(next);
    }
    Ok(out)
}

/// w_i = mean width of the hull of the first i + 1 vertices.
pub fn meanwidth_param(gamma: &Polyline, grid: &SphereGrid) -> Result<Vec<f64>> {
    require_sep(gamma)?;
    prefix_hulls(gamma)?
        .iter()
        .map(|k| mean_width(k, grid))
        .collect()
}

/// Lipschitz constant of a self-expanding path in its mean-width
/// parametrization: 1 on the line, π in the plane, and
/// (n − 1) n^{n/2} ω_n / ω_{n−1} above.
pub fn c1(n: usize) -> f64 {
    match n {
        0 | 1 => 1.0,
        2 => std::f64::consts::PI,
        _ => {
            let m = n as f64;
            (m - 1.0) * m.powf(m / 2.0) * omega(n) / omega(n - 1)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LipschitzReport {
    pub max_ratio: f64,
    pub bound: f64,
    /// Steps whose hull did not grow; left out of `max_ratio`.
    pub flat_steps: Vec<usize>,
}

impl LipschitzReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_ratio <= self.bound + tol
    }
}

/// max_i |x_{i+1} − x_i| / (w_{i+1} − w_i).
pub fn lipschitz_ratio(gamma: &Polyline, grid: &SphereGrid) -> Result<LipschitzReport> {
    let w = meanwidth_param(gamma, grid)?;
    let pts = gamma.points();
    let mut max_ratio = 0.0f64;
    let mut flat_steps = Vec::new();
    for i in 0..pts.len().saturating_sub(1) {
        let dw = w[i + 1] - w[i];
        if dw <= 0.0 {
            flat_steps.push(i);
            continue;
        }
        max_ratio = max_ratio.max(pts[i].dist(&pts[i + 1]) / dw);
    }
    Ok(LipschitzReport {
        max_ratio,
        bound: c1(gamma.dim()),
        flat_steps,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LengthReport {
    pub length: f64,
    pub w_hull: f64,
    /// c1(n) · w_hull
    pub bound: f64,
    pub bound_ok: bool,
}

impl LengthReport {
    /// length / w_hull
    pub fn ratio(&self) -> f64 {
        self.length / self.w_hull
    }
}

/// ‖γ‖ ≤ c1(n) · w(co γ).
pub fn length_bound_check(gamma: &Polyline, grid: &SphereGrid) -> Result<LengthReport> {
    require_sep(gamma)?;
    let length = gamma.length();
    let w_hull = mean_width(&hull(gamma.points())?, grid)?;
    let bound = c1(gamma.dim()) * w_hull;
    Ok(LengthReport {
        length,
        w_hull,
        bound,
        bound_ok: length <= bound + LENGTH_TOL * (1.0 + bound),
    })
}

/// Per-segment gap Δw/Δs − (2/ω_n) ∫_{N̂(a)} ⟨θ, d⟩ dσ, where N̂(a) is the
/// normal cone of the prefix hull at the segment start `a`.
///
/// Nonnegative up to rounding; small values mean the hull grows at the
/// first-order rate.
pub fn mp_residuals(gamma: &Polyline, grid: &SphereGrid) -> Result<Vec<f64>> {
    require_sep(gamma)?;
    let hulls = prefix_hulls(gamma)?;
    let pts = gamma.points();
    let n = gamma.dim();
    let mut out = Vec::with_capacity(pts.len().saturating_sub(1));
    for i in 0..pts.len().saturating_sub(1) {
        let ds = pts[i].dist(&pts[i + 1]);
        let d = (&pts[i + 1] - &pts[i]) * (1.0 / ds);
        let dw = mean_width(&hulls[i + 1], grid)? - mean_width(&hulls[i], grid)?;
        let cone = normal_cone(&hulls[i], &pts[i])?;
        let rhs = 2.0 / omega(n) * sector_moment(&cone, &d, grid)?;
        out.push(dw / ds - rhs);
    }
    Ok(out)
}
