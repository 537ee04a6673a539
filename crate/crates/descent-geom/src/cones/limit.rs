use serde::Serialize;

use super::{cap_body, normal_cone, tangent_cone, PolyCone};
use crate::error::{check_dim, GeomError, Result};
use crate::geom::{ConvexBody, Vector};
use crate::mean_width::SphereGrid;

/// One ε of a normal-cone limit study.
#[derive(Clone, Debug, Serialize)]
pub struct LimitStep {
    pub eps: f64,
    /// N_{K^{p_ε}}(p_ε) ⊆ {u}* on generators and probes.
    pub upper_ok: bool,
    /// N_K(p0) ∩ {u}* ⊆ N_{K^{p_ε}}(p_ε) on generators and probes.
    pub lower_ok: bool,
    /// Angular Hausdorff distance between the two spherical sectors.
    pub metric: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub limit_generators: Vec<Vector>,
    pub steps: Vec<LimitStep>,
    pub sandwich_ok: bool,
    pub metric_decreasing: bool,
}

const PROBE_TOL: f64 = 1e-9;

/// Follows N_{K^{p_ε}}(p_ε), p_ε = p0 + εu, along `eps_list` and compares it
/// with the limit cone N_K(p0) ∩ {u}* on the direction probes of `grid`.
pub fn normal_cone_limit_report(
    k: &ConvexBody,
    p0: &Vector,
    u: &Vector,
    eps_list: &[f64],
    grid: &SphereGrid,
) -> Result<LimitReport> {
    let n = k.dim();
    check_dim(n, u.dim())?;
    check_dim(n, grid.dim())?;
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
    if eps_list.iter().any(|&e| !(e > 0.0)) || eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(GeomError::InvalidInput(
            "eps list must be positive and decreasing".into(),
        ));
    }
    let half = PolyCone::from_halfspaces(n, std::slice::from_ref(&u))?;
    let limit = nk.intersect(&half)?;
    let limit_probes: Vec<&Vector> = grid
        .directions()
        .iter()
        .filter(|t| limit.contains(t, PROBE_TOL))
        .collect();

    let mut steps = Vec::new();
    for &eps in eps_list {
        let pe = p0 + &(&u * eps);
        let kp = cap_body(k, &pe)?;
        let ne = normal_cone(&kp, &pe)?;
        let probes: Vec<&Vector> = grid
            .directions()
            .iter()
            .filter(|t| ne.contains(t, PROBE_TOL))
            .collect();
        let upper_ok = ne
            .generators()
            .iter()
            .chain(probes.iter().copied())
            .all(|t| t.dot(&u) >= -1e-7);
        let lower_ok = limit
            .generators()
            .iter()
            .all(|t| ne.contains(t, 1e-7))
            && limit_probes.iter().all(|t| ne.contains(t, 1e-7));
        let side = |from: &[&Vector], to: &PolyCone| {
            from.iter().map(|t| to.angle_to(t)).fold(0.0f64, f64::max)
        };
        let mut s1: Vec<&Vector> = ne.generators().iter().collect();
        s1.extend(probes.iter().copied());
        let mut s2: Vec<&Vector> = limit.generators().iter().collect();
        s2.extend(limit_probes.iter().copied());
        let metric = side(&s1, &limit).max(side(&s2, &ne));
        steps.push(LimitStep {
            eps,
            upper_ok,
            lower_ok,
            metric,
        });
    }
    let sandwich_ok = steps.iter().all(|s| s.upper_ok && s.lower_ok);
    let metric_decreasing = steps.windows(2).all(|w| w[1].metric <= w[0].metric + 1e-12);
    Ok(LimitReport {
        limit_generators: limit.generators().to_vec(),
        steps,
        sandwich_ok,
        metric_decreasing,
    })
}
