//! Normal, tangent and dual cones of polytopes, cap bodies, circular cones
//! and spherical sector integrals.

mod circular;
mod limit;
mod polycone;

pub use circular::CircularCone;
pub use limit::{normal_cone_limit_report, LimitReport, LimitStep};
pub use polycone::{PolyCone, MEMBERSHIP_TOL};

use crate::error::{check_dim, GeomError, Result};
use crate::geom::{omega, ConvexBody, Vector, TAU_PT};

fn require_member(k: &ConvexBody, q: &Vector) -> Result<()> {
    check_dim(k.dim(), q.dim())?;
    let d = k.distance(q)?;
    if d > TAU_PT * (1.0 + q.norm()) {
        return Err(GeomError::InvalidInput(format!(
            "point {:?} lies at distance {d:e} outside the body",
            q.coords()
        )));
    }
    Ok(())
}

/// N_K(q) = {x : ⟨x, y − q⟩ ≤ 0 for all y ∈ K}.
///
/// The zero cone at interior points; lower-dimensional bodies get the
/// orthogonal complement of their affine hull as lineality.
pub fn normal_cone(k: &ConvexBody, q: &Vector) -> Result<PolyCone> {
    require_member(k, q)?;
    let rows: Vec<Vector> = k.vertices().iter().map(|v| q - v).collect();
    PolyCone::from_halfspaces(k.dim(), &rows)
}

/// T_K(q): the cone spanned by the directions (v − q)/|v − q| over vertices v ≠ q.
pub fn tangent_cone(k: &ConvexBody, q: &Vector) -> Result<PolyCone> {
    require_member(k, q)?;
    let gens: Vec<Vector> = k.vertices().iter().map(|v| v - q).collect();
    PolyCone::from_generators(k.dim(), &gens)
}

/// C* = {y : ⟨y, x⟩ ≥ 0 for all x ∈ C}.
pub fn dual_cone(c: &PolyCone) -> Result<PolyCone> {
    PolyCone::from_halfspaces(c.dim(), c.generators())
}

/// The cap body K^p = co(K ∪ {p}); K itself when p ∈ K.
pub fn cap_body(k: &ConvexBody, p: &Vector) -> Result<ConvexBody> {
    check_dim(k.dim(), p.dim())?;
    if k.contains(p, 1e-12)? {
        return Ok(k.clone());
    }
    k.with_point(p)
}

/// Support function of K^p by the two-branch rule: ⟨x, p⟩ when x lies in
/// the normal cone of K^p at p, H_K(x) otherwise.
pub fn cap_support(k: &ConvexBody, p: &Vector, x: &Vector) -> Result<f64> {
    check_dim(k.dim(), p.dim())?;
    let hk = k.support(x)?;
    let xp = x.dot(p);
    // x ∈ N_{K^p}(p) iff ⟨x, v − p⟩ ≤ 0 for every vertex v of K
    let in_normal = k.vertices().iter().all(|v| x.dot(v) <= xp);
    Ok(if in_normal { xp } else { hk })
}

/// ∫ ⟨θ, v⟩ dσ over the cap of S^{n-1} of angular radius δ about v:
/// ω_{n−1}/(n−1) · sin^{n−1} δ.
pub fn sector_integral_exact(n: usize, delta: f64) -> Result<f64> {
    if n < 2 {
        return Err(GeomError::InvalidInput(format!("dimension {n} < 2")));
    }
    if !(delta > 0.0 && delta <= std::f64::consts::FRAC_PI_2) {
        return Err(GeomError::InvalidInput(format!(
            "opening {delta} outside (0, π/2]"
        )));
    }
    let m = (n - 1) as f64;
    Ok(omega(n - 1) / m * delta.sin().powi(n as i32 - 1))
}

/// Lower bound ω_{n−1}/(n−1) · sin^n(α/4) for ∫ ⟨θ, u⟩ dσ over the cap of
/// radius α/2 about v, valid for unit u in the dual of that cap.
pub fn sector_integral_lower_bound(n: usize, alpha: f64) -> Result<f64> {
    if n < 2 {
        return Err(GeomError::InvalidInput(format!("dimension {n} < 2")));
    }
    if !(alpha > 0.0 && alpha < std::f64::consts::PI) {
        return Err(GeomError::InvalidInput(format!("alpha {alpha} outside (0, π)")));
    }
    let m = (n - 1) as f64;
    Ok(omega(n - 1) / m * (alpha / 4.0).sin().powi(n as i32))
}
