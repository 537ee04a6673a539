use serde::Serialize;

use super::ExpandingCouple;
use crate::error::{GeomError, Result};
use crate::family::Family;
use crate::geom::Vector;
use crate::sep::Polyline;

/// `m` member indices spread uniformly over `0..n` (first and last included).
pub fn knot_indices(n: usize, m: usize) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    if m <= 1 || n == 1 {
        return vec![n - 1];
    }
    let mut idx: Vec<usize> = (0..m)
        .map(|j| ((j * (n - 1)) as f64 / (m - 1) as f64).round() as usize)
        .collect();
    idx.dedup();
    idx
}

/// Discrete descent curve: one point per knot member, each the projection
/// of the next point onto its member.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DescentCurve {
    /// Member indices in the source family.
    pub knots: Vec<usize>,
    pub params: Vec<f64>,
    pub points: Vec<Vector>,
    #[serde(skip)]
    family: Family,
}

impl DescentCurve {
    pub fn family(&self) -> &Family {
        &self.family
    }

    /// The knot members as a family of their own.
    pub fn knot_family(&self) -> Result<Family> {
        self.family.subfamily(&self.knots)
    }

    /// The curve as a polyline from the smallest member to the endpoint.
    pub fn polyline(&self) -> Result<Polyline> {
        Polyline::new(self.points.clone())
    }

    /// x(w), linear in w between knots and constant outside.
    pub fn at(&self, w: f64) -> Vector {
        let p = &self.params;
        let i = p.partition_point(|q| *q < w);
        if i == 0 {
            return self.points[0].clone();
        }
        if i >= p.len() {
            return self.points[p.len() - 1].clone();
        }
        let span = p[i] - p[i - 1];
        let f = if span > 0.0 { (w - p[i - 1]) / span } else { 1.0 };
        Vector::lerp(&self.points[i - 1], &self.points[i], f)
    }

    /// The curve coupled with its knot family.
    pub fn couple(&self) -> Result<ExpandingCouple> {
        ExpandingCouple::new(self.polyline()?, self.knot_family()?)
    }
}

/// Builds the discrete descent from `endpoint` through `m` members of `fam`,
/// projecting backwards from the largest member down to the smallest.
pub fn descend(fam: &Family, endpoint: &Vector, m: usize) -> Result<DescentCurve> {
    if m < 2 {
        return Err(GeomError::InvalidInput("need at least two knots".into()));
    }
    let kmax = fam.max();
    if endpoint.dim() != fam.dim() {
        return Err(GeomError::DimensionMismatch {
            expected: fam.dim(),
            got: endpoint.dim(),
        });
    }
    if !kmax.on_rel_boundary(endpoint)? {
        return Err(GeomError::PreconditionViolated(
            "endpoint must lie on the relative boundary of the largest member".into(),
        ));
    }
    let knots = knot_indices(fam.len(), m);
    let mut points = vec![endpoint.clone(); knots.len()];
    for j in (0..knots.len() - 1).rev() {
        points[j] = fam.bodies()[knots[j]].project(&points[j + 1])?;
    }
    Ok(DescentCurve {
        params: knots.iter().map(|&i| fam.params()[i]).collect(),
        knots,
        points,
        family: fam.clone(),
    })
}

/// The descent curve as a polyline.
pub fn construct_descent(fam: &Family, endpoint: &Vector, m: usize) -> Result<Polyline> {
    descend(fam, endpoint, m)?.polyline()
}

/// max_w |x1(w) − x2(w)| over the union of both knot parameter sets.
pub fn uniform_distance(a: &DescentCurve, b: &DescentCurve) -> f64 {
    a.params
        .iter()
        .chain(&b.params)
        .map(|&w| a.at(w).dist(&b.at(w)))
        .fold(0.0, f64::max)
}
