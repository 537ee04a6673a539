use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::geom::{ConvexBody, Vector};
use crate::sep::Polyline;

/// A point on a polyline: `segment` is the index of the segment start and
/// `s` ∈ [0, 1] the fraction along that segment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePos {
    pub segment: usize,
    pub s: f64,
    pub point: Vector,
}

fn cross(e: &Vector, p: &Vector) -> f64 {
    e[0] * p[1] - e[1] * p[0]
}

/// The parameter interval {s ∈ [0, 1] : a + s(b − a) ∈ K} at tolerance
/// `tol`, or `None` when the segment misses K.
///
/// Full-dimensional polygons are clipped edge by edge; other bodies use a
/// golden-section search for the closest point followed by bisection.
pub fn segment_interval(k: &ConvexBody, a: &Vector, b: &Vector, tol: f64) -> Result<Option<(f64, f64)>> {
    if k.dim() == 2 && k.is_full_dim() {
        return Ok(clip_planar(k.vertices(), a, b, tol));
    }
    let u = b - a;
    let dist = |s: f64| k.distance(&(a + &(&u * s)));
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (dist(x1)?, dist(x2)?);
    for _ in 0..80 {
        if f1 <= tol || f2 <= tol {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = dist(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = dist(x2)?;
        }
    }
    let mut inside = None;
    for s in [0.0, 1.0, x1, x2] {
        if dist(s)? <= tol {
            inside = Some(s);
            break;
        }
    }
    let Some(mid) = inside else {
        return Ok(None);
    };
    let edge = |mut inn: f64, mut out: f64| -> Result<f64> {
        if dist(out)? <= tol {
            return Ok(out);
        }
        for _ in 0..60 {
            let m = 0.5 * (inn + out);
            if dist(m)? <= tol {
                inn = m;
            } else {
                out = m;
            }
        }
        Ok(inn)
    };
    Ok(Some((edge(mid, 0.0)?, edge(mid, 1.0)?)))
}

fn clip_planar(verts: &[Vector], a: &Vector, b: &Vector, tol: f64) -> Option<(f64, f64)> {
    let u = b - a;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let m = verts.len();
    for i in 0..m {
        let e = &verts[(i + 1) % m] - &verts[i];
        // inside: cross(e, p − v_i) ≥ −tol·|e|
        let c0 = cross(&e, &(a - &verts[i])) + tol * e.norm();
        let c1 = cross(&e, &u);
        if c1.abs() < 1e-300 {
            if c0 < 0.0 {
                return None;
            }
            continue;
        }
        let s = -c0 / c1;
        if c1 > 0.0 {
            lo = lo.max(s);
        } else {
            hi = hi.min(s);
        }
        if lo > hi {
            return None;
        }
    }
    Some((lo, hi))
}

/// The last point of `curve` inside `k` (at tolerance `tol`).
pub fn last_point_inside(curve: &Polyline, k: &ConvexBody, tol: f64) -> Result<Option<CurvePos>> {
    let pts = curve.points();
    if pts.len() == 1 {
        return Ok(k.contains(&pts[0], tol)?.then(|| CurvePos {
            segment: 0,
            s: 0.0,
            point: pts[0].clone(),
        }));
    }
    for i in (0..pts.len() - 1).rev() {
        if let Some((_, hi)) = segment_interval(k, &pts[i], &pts[i + 1], tol)? {
            // within the boundary band of a vertex counts as the vertex: a
            // grazing segment stays within `tol` of K for up to tol/sin(angle)
            let snap = tol.max(k.boundary_band());
            let len = pts[i].dist(&pts[i + 1]);
            if hi * len <= snap {
                return Ok(Some(CurvePos {
                    segment: i,
                    s: 0.0,
                    point: pts[i].clone(),
                }));
            }
            if hi >= 1.0 || (1.0 - hi) * len <= snap {
                return Ok(Some(CurvePos {
                    segment: i + 1,
                    s: 0.0,
                    point: pts[i + 1].clone(),
                }));
            }
            return Ok(Some(CurvePos {
                segment: i,
                s: hi,
                point: Vector::lerp(&pts[i], &pts[i + 1], hi),
            }));
        }
    }
    Ok(None)
}

/// x(t) for each body: the last curve point inside it.
pub fn alignment(curve: &Polyline, bodies: &[ConvexBody], tol: f64) -> Result<Vec<CurvePos>> {
    bodies
        .iter()
        .enumerate()
        .map(|(i, k)| {
            last_point_inside(curve, k, tol)?.ok_or_else(|| {
                GeomError::InvalidInput(format!("curve never meets body {i}"))
            })
        })
        .collect()
}

/// Arc length from the start of the curve to `pos`.
pub fn arc_length_at(curve: &Polyline, cum: &[f64], pos: &CurvePos) -> f64 {
    let pts = curve.points();
    let base = cum[pos.segment];
    if pos.s == 0.0 || pos.segment + 1 >= pts.len() {
        base
    } else {
        base + pos.s * pts[pos.segment].dist(&pts[pos.segment + 1])
    }
}
