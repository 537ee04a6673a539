//! Steepest-descent curves of nested families: construction by successive
//! projection, expanding-couple and viable-curve checks, the joint
//! parametrization, stability and annulus length bounds.

mod align;
mod construct;
pub mod fixtures;

pub use align::{alignment, arc_length_at, last_point_inside, segment_interval, CurvePos};
pub use construct::{construct_descent, descend, knot_indices, uniform_distance, DescentCurve};

use serde::Serialize;

use crate::cones::{normal_cone, MEMBERSHIP_TOL};
use crate::error::{GeomError, Result};
use crate::family::Family;
use crate::geom::{hausdorff, ConvexBody, Vector, TAU_PT};
use crate::mean_width::c0;
use crate::sep::{c1, is_sep, Polyline, SEP_TOL};

/// Default tolerance of the couple and stability checks.
pub const EC_TOL: f64 = 1e-9;

/// Containment tolerance used when aligning a curve with a body.
fn align_tol(k: &ConvexBody) -> f64 {
    TAU_PT * (1.0 + k.diameter())
}

fn align_all(curve: &Polyline, bodies: &[ConvexBody]) -> Result<Vec<CurvePos>> {
    bodies
        .iter()
        .enumerate()
        .map(|(i, k)| {
            last_point_inside(curve, k, align_tol(k))?
                .ok_or_else(|| GeomError::InvalidInput(format!("curve never meets body {i}")))
        })
        .collect()
}

/// A curve with a family and, for each member Ω_t, the point
/// x(t) = last curve point inside Ω_t.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpandingCouple {
    pub curve: Polyline,
    pub family: Family,
    pub alignment: Vec<CurvePos>,
}

impl ExpandingCouple {
    /// Aligns the curve with the family; fails if some member misses the
    /// curve or the alignment runs backwards.
    pub fn new(curve: Polyline, family: Family) -> Result<Self> {
        let mut alignment = align_all(&curve, family.bodies())?;
        let cum = curve.cumulative_lengths();
        for i in 1..alignment.len() {
            let back = arc_length_at(&curve, &cum, &alignment[i - 1])
                - arc_length_at(&curve, &cum, &alignment[i]);
            if back > family.bodies()[i].boundary_band().max(TAU_PT) {
                return Err(GeomError::InvalidInput(format!(
                    "alignment moves backwards between members {} and {i}",
                    i - 1
                )));
            }
            if back > 0.0 {
                // rounding noise on a stall: keep the earlier position
                alignment[i] = alignment[i - 1].clone();
            }
        }
        Ok(ExpandingCouple {
            curve,
            family,
            alignment,
        })
    }

    pub fn endpoint(&self) -> &Vector {
        self.curve.last()
    }

    /// The aligned points x(t), one per member.
    pub fn points(&self) -> Vec<Vector> {
        self.alignment.iter().map(|p| p.point.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EcWitness {
    pub body: usize,
    pub x: Vector,
    pub y: Vector,
    pub x1: Vector,
    /// |x − y|
    pub dist_x: f64,
    /// |x1 − y|
    pub dist_x1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EcReport {
    pub ok: bool,
    /// "sep", "meets", "boundary" or "monotone" for the first failing condition.
    pub failed: Option<String>,
    pub witness: Option<EcWitness>,
}

impl EcReport {
    fn fail(cond: &str, witness: Option<EcWitness>) -> Self {
        EcReport {
            ok: false,
            failed: Some(cond.into()),
            witness,
        }
    }
}

/// Expanding-couple check of a curve against an ordered list of bodies.
///
/// The curve must be a self-expanding path meeting every body and the
/// relative boundary of the last one. Then, for each body Q with departure
/// point x' (the last curve point in Q), each vertex y of Q and each later
/// curve point x ⪰ x', the distance |x1 − y| must not drop below |x − y|
/// for x1 ≻ x. By convexity this reduces to ⟨d, a − y⟩ ≥ −tol·|a − y| at
/// x' and at every later segment start a, with d the segment direction;
/// vertices suffice for y because the inequality is affine in y.
///
/// The reported witness prefers violations that persist up to the curve's
/// end (x the departure point, x1 the endpoint), largest gap first. When
/// every violation is local, the witness maximizing |x − y| − |x1 − y| is
/// reported, with x1 the latest curve vertex closer to y than x; taking the
/// latest vertex keeps witnesses stable when the curve is refined.
pub fn is_expanding_couple(gamma: &Polyline, bodies: &[ConvexBody], tol: f64) -> Result<EcReport> {
    if bodies.is_empty() {
        return Err(GeomError::InvalidInput("no bodies".into()));
    }
    if !is_sep(gamma, SEP_TOL.max(tol)).ok {
        return Ok(EcReport::fail("sep", None));
    }
    let mut xs = Vec::with_capacity(bodies.len());
    for (i, k) in bodies.iter().enumerate() {
        match last_point_inside(gamma, k, align_tol(k))? {
            Some(p) => xs.push(p),
            None => {
                return Ok(EcReport::fail(
                    "meets",
                    Some(EcWitness {
                        body: i,
                        x: gamma.first().clone(),
                        y: k.centroid(),
                        x1: gamma.last().clone(),
                        dist_x: f64::NAN,
                        dist_x1: f64::NAN,
                    }),
                ))
            }
        }
    }
    let kmax = bodies.last().unwrap();
    let on_max = gamma
        .points()
        .iter()
        .chain(std::iter::once(&xs.last().unwrap().point))
        .map(|p| kmax.on_rel_boundary(p))
        .collect::<Result<Vec<_>>>()?;
    if !on_max.into_iter().any(|b| b) {
        return Ok(EcReport::fail("boundary", None));
    }
    let pts = gamma.points();
    let mut worst: Option<EcWitness> = None;
    for (qi, (q, xp)) in bodies.iter().zip(&xs).enumerate() {
        // Segment starts from the departure point on.
        let mut starts: Vec<(Vector, usize)> = Vec::new();
        if xp.segment + 1 < pts.len() {
            starts.push((xp.point.clone(), xp.segment));
        }
        for k in xp.segment + 1..pts.len().saturating_sub(1) {
            starts.push((pts[k].clone(), k));
        }
        for y in q.vertices() {
            for (a, seg) in &starts {
                let Some(d) = (&pts[seg + 1] - &pts[*seg]).normalized() else {
                    continue;
                };
                let r = a - y;
                let n = r.norm();
                // Within tol of y the distance cannot drop by more than tol.
                if n <= tol || d.dot(&r) >= -tol * n {
                    continue;
                }
                let x1 = pts[seg + 1..]
                    .iter()
                    .rev()
                    .find(|p| p.dist(y) < n - tol)
                    .cloned()
                    .unwrap_or_else(|| {
                        // Only points inside the segment come closer: use the foot.
                        let t = (-d.dot(&r)).min(pts[*seg].dist(&pts[seg + 1]));
                        a + &(&d * t)
                    });
                let w = EcWitness {
                    body: qi,
                    x: a.clone(),
                    y: y.clone(),
                    dist_x: n,
                    dist_x1: x1.dist(y),
                    x1,
                };
                let gap = w.dist_x - w.dist_x1;
                if gap <= tol {
                    continue;
                }
                if worst.as_ref().is_none_or(|b| gap > b.dist_x - b.dist_x1) {
                    worst = Some(w);
                }
            }
        }
    }
    if worst.is_some() {
        if let Some(w) = global_witness(gamma, bodies, &xs, tol) {
            worst = Some(w);
        }
    }
    Ok(match worst {
        Some(w) => EcReport::fail("monotone", Some(w)),
        None => EcReport {
            ok: true,
            failed: None,
            witness: None,
        },
    })
}

/// The violation spanning the rest of the curve: x the departure point of
/// some Q, x1 the curve's end, y the vertex of Q maximizing |x − y| − |x1 − y|.
fn global_witness(
    gamma: &Polyline,
    bodies: &[ConvexBody],
    xs: &[CurvePos],
    tol: f64,
) -> Option<EcWitness> {
    let end = gamma.last();
    let mut best: Option<EcWitness> = None;
    for (qi, (q, xp)) in bodies.iter().zip(xs).enumerate() {
        for y in q.vertices() {
            let (dx, d1) = (xp.point.dist(y), end.dist(y));
            if dx - d1 <= tol * (1.0 + dx) {
                continue;
            }
            if best.as_ref().is_none_or(|b| dx - d1 > b.dist_x - b.dist_x1) {
                best = Some(EcWitness {
                    body: qi,
                    x: xp.point.clone(),
                    y: y.clone(),
                    x1: end.clone(),
                    dist_x: dx,
                    dist_x1: d1,
                });
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SdcWitness {
    pub body: usize,
    pub point: Vector,
    /// "boundary" when x(t) is not on the relative boundary, "normal" when
    /// the direction leaving x(t) is not a normal direction.
    pub condition: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SdcReport {
    pub ok: bool,
    pub witness: Option<SdcWitness>,
    /// Every failing member, in order.
    pub failing: Vec<usize>,
}

/// Discrete viable steepest-descent check at the members of a family:
/// x(t) lies on the relative boundary of Ω_t (except for the first member)
/// and the curve leaves x(t) along a direction of the normal cone N_{Ω_t}(x(t)).
pub fn is_viable_sdc(gamma: &Polyline, bodies: &[ConvexBody], tol: f64) -> Result<SdcReport> {
    let xs = align_all(gamma, bodies)?;
    let pts = gamma.points();
    let mut failing = Vec::new();
    let mut witness = None;
    for (i, (k, xp)) in bodies.iter().zip(&xs).enumerate() {
        let mut cond = None;
        if i > 0 && !k.on_rel_boundary(&xp.point)? {
            cond = Some("boundary");
        } else if xp.segment + 1 < pts.len() {
            if let Some(d) = (&pts[xp.segment + 1] - &pts[xp.segment]).normalized() {
                let q = k.project(&xp.point)?;
                if !normal_cone(k, &q)?.contains(&d, tol.max(MEMBERSHIP_TOL)) {
                    cond = Some("normal");
                }
            }
        }
        if let Some(c) = cond {
            failing.push(i);
            if witness.is_none() {
                witness = Some(SdcWitness {
                    body: i,
                    point: xp.point.clone(),
                    condition: c.into(),
                });
            }
        }
    }
    Ok(SdcReport {
        ok: failing.is_empty(),
        witness,
        failing,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointParam {
    /// Mean-width parameter of each member.
    pub w: Vec<f64>,
    /// Arc length of the curve up to x(w).
    pub s: Vec<f64>,
    /// Length of the graph of s over [w_0, w].
    pub tau: Vec<f64>,
    pub z: Vec<Vector>,
    /// |Δz| / Δτ per step (0 where Δτ vanishes).
    pub speed: Vec<f64>,
    pub lipschitz_estimate: f64,
}

/// Re-parametrizes curve and family together by the length τ of the graph
/// of w ↦ s(w); z(τ) = x(w(τ)) is then 1-Lipschitz even where the curve
/// stalls or the family jumps.
pub fn joint_parametrization(ec: &ExpandingCouple) -> JointParam {
    let cum = ec.curve.cumulative_lengths();
    let w = ec.family.params().to_vec();
    let s: Vec<f64> = ec
        .alignment
        .iter()
        .map(|p| arc_length_at(&ec.curve, &cum, p))
        .collect();
    let z = ec.points();
    let mut tau = vec![0.0];
    let mut speed = vec![0.0];
    let mut lip = 0.0f64;
    for i in 1..w.len() {
        let dt = (w[i] - w[i - 1]).hypot(s[i] - s[i - 1]);
        tau.push(tau[i - 1] + dt);
        let v = if dt > 0.0 { z[i].dist(&z[i - 1]) / dt } else { 0.0 };
        speed.push(v);
        lip = lip.max(v);
    }
    JointParam {
        w,
        s,
        tau,
        z,
        speed,
        lipschitz_estimate: lip,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    pub ok: bool,
    /// max(0, max_t |x1(t) − x2(t)| − |x̄1 − x̄2|)
    pub max_violation: f64,
    /// Knot-wise distance never decreases (up to tol).
    pub monotone: bool,
    pub distances: Vec<f64>,
    pub endpoint_distance: f64,
}

/// |x1(t) − x2(t)| ≤ |x̄1 − x̄2| at every member, and the knot-wise
/// distance is non-decreasing in t.
pub fn stability_check(
    ec1: &ExpandingCouple,
    ec2: &ExpandingCouple,
    tol: f64,
) -> Result<StabilityReport> {
    if ec1.family != ec2.family {
        return Err(GeomError::InvalidInput(
            "couples do not share their family".into(),
        ));
    }
    let e = ec1.endpoint().dist(ec2.endpoint());
    let distances: Vec<f64> = ec1
        .alignment
        .iter()
        .zip(&ec2.alignment)
        .map(|(a, b)| a.point.dist(&b.point))
        .collect();
    let max_violation = distances
        .iter()
        .map(|d| d - e)
        .fold(0.0f64, f64::max);
    let monotone = distances.windows(2).all(|w| w[1] >= w[0] - tol);
    Ok(StabilityReport {
        ok: max_violation <= tol && monotone,
        max_violation,
        monotone,
        distances,
        endpoint_distance: e,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnnulusReport {
    /// Length of the curve outside K1.
    pub len_outside: f64,
    /// hausdorff(K1, K2)
    pub dist12: f64,
    /// 2·c1(n)·dist12
    pub bound_i: f64,
    /// c·(w(K2) − w(K1))^{1/n} with c = 2·c1(n)·(diam(K2)^{n−1}/c⁰_n)^{1/n}
    pub bound_ii: f64,
    pub bound_i_ok: bool,
    pub bound_ii_ok: bool,
}

/// Length of `gamma` outside the body `k`.
pub fn length_outside(gamma: &Polyline, k: &ConvexBody) -> Result<f64> {
    // polygon clipping is exact, so no slack is needed there
    let tol = if k.dim() == 2 && k.is_full_dim() { 0.0 } else { align_tol(k) };
    let mut out = 0.0;
    for (a, b) in gamma.segments() {
        let len = a.dist(b);
        out += match segment_interval(k, a, b, tol)? {
            Some((lo, hi)) => len * (1.0 - (hi - lo).clamp(0.0, 1.0)),
            None => len,
        };
    }
    Ok(out)
}

/// Length of the curve between K1 = member `k1_index` and K2 = the last
/// member against the two annulus bounds.
pub fn annulus_length_check(ec: &ExpandingCouple, k1_index: usize) -> Result<AnnulusReport> {
    let fam = &ec.family;
    if k1_index >= fam.len() {
        return Err(GeomError::InvalidInput(format!("no member {k1_index}")));
    }
    let n = fam.dim();
    let k1 = &fam.bodies()[k1_index];
    let k2 = fam.max();
    let len_outside = length_outside(&ec.curve, k1)?;
    let dist12 = hausdorff(k1, k2)?;
    let bound_i = 2.0 * c1(n) * dist12;
    let dw = (fam.params()[fam.len() - 1] - fam.params()[k1_index]).max(0.0);
    let bound_ii = if n == 1 {
        2.0 * dw
    } else {
        let c = 2.0 * c1(n) * (k2.diameter().powi(n as i32 - 1) / c0(n)).powf(1.0 / n as f64);
        c * dw.powf(1.0 / n as f64)
    };
    let slack = 1e-9 * (1.0 + len_outside);
    Ok(AnnulusReport {
        len_outside,
        dist12,
        bound_i,
        bound_ii,
        bound_i_ok: len_outside <= bound_i + slack,
        bound_ii_ok: len_outside <= bound_ii + slack,
    })
}

/// Number of distinct curve vertices on the relative boundary of each
/// member; vertices closer than the member's boundary band count once.
pub fn boundary_hits(ec: &ExpandingCouple) -> Result<Vec<usize>> {
    ec.family
        .bodies()
        .iter()
        .map(|k| {
            let band = k.boundary_band().max(TAU_PT);
            let mut hits: Vec<&Vector> = Vec::new();
            for p in ec.curve.points() {
                if k.on_rel_boundary(p)? && hits.iter().all(|q| q.dist(p) > band) {
                    hits.push(p);
                }
            }
            Ok(hits.len())
        })
        .collect()
}
