//! Nested families of convex bodies: validation, completion to a densely
//! sampled family indexed by mean width, connectedness and distances.
//!
//! A continuous family can also be described as the sublevel sets of a
//! quasi-convex function; that view is not used here.

mod interp;

pub use interp::{
    clipped_parallel_body, interpolate, parallel_body, PARALLEL_MESH_2D, PARALLEL_MESH_ND,
};

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::geom::{hausdorff, ConvexBody, TAU_PT};
use crate::mean_width::{c0, mean_width, SphereGrid};

/// Default multiplier of the connectedness surrogate.
pub const CONNECT_TOL: f64 = 1.0;
/// Iteration cap of the width-matching bisection.
pub const BISECTION_CAP: usize = 200;

/// A strictly increasing chain of bodies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stratification {
    bodies: Vec<ConvexBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<Vec<f64>>,
}

impl Stratification {
    pub fn bodies(&self) -> &[ConvexBody] {
        &self.bodies
    }

    pub fn params(&self) -> Option<&[f64]> {
        self.params.as_deref()
    }

    pub fn min(&self) -> &ConvexBody {
        &self.bodies[0]
    }

    pub fn max(&self) -> &ConvexBody {
        self.bodies.last().expect("at least two bodies")
    }

    /// Attaches parameters, which must increase strictly.
    pub fn with_params(mut self, params: Vec<f64>) -> Result<Self> {
        check_params(&params, self.bodies.len())?;
        self.params = Some(params);
        Ok(self)
    }
}

fn check_params(params: &[f64], n: usize) -> Result<()> {
    if params.len() != n {
        return Err(GeomError::InvalidInput(format!(
            "{} parameters for {n} bodies",
            params.len()
        )));
    }
    if params.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(GeomError::InvalidInput(
            "parameters must increase strictly".into(),
        ));
    }
    Ok(())
}

// Planar bodies use the exact width; elsewhere a fixed grid is enough to
// order a chain.
fn order_key(k: &ConvexBody) -> Result<f64> {
    let grid = SphereGrid::new(k.dim(), 4096, 0)?;
    mean_width(k, &grid)
}

/// Sorts `bodies` by inclusion and checks they form a strict chain.
///
/// `NotAChain(i, j)` names input positions of the first non-nested pair.
pub fn validate_stratification(bodies: Vec<ConvexBody>) -> Result<Stratification> {
    if bodies.len() < 2 {
        return Err(GeomError::InvalidInput(
            "a stratification needs at least two bodies".into(),
        ));
    }
    let n = bodies[0].dim();
    for b in &bodies {
        crate::error::check_dim(n, b.dim())?;
    }
    let keys = bodies.iter().map(order_key).collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..bodies.len()).collect();
    order.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]));
    for w in order.windows(2) {
        let (a, b) = (&bodies[w[0]], &bodies[w[1]]);
        if !b.includes(a, TAU_PT * (1.0 + b.diameter()))? {
            return Err(GeomError::NotAChain(w[0].min(w[1]), w[0].max(w[1])));
        }
        if hausdorff(a, b)? <= TAU_PT {
            return Err(GeomError::Degenerate(format!(
                "bodies {} and {} coincide",
                w[0], w[1]
            )));
        }
    }
    let mut slots: Vec<Option<ConvexBody>> = bodies.into_iter().map(Some).collect();
    let bodies = order
        .iter()
        .map(|&i| slots[i].take().expect("each index once"))
        .collect();
    Ok(Stratification {
        bodies,
        params: None,
    })
}

/// A chain sampled along mean width: `params[i]` is the mean width of
/// `bodies[i]` and consecutive parameters are at most `h` apart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub struct Family {
    h: f64,
    bodies: Vec<ConvexBody>,
    params: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    interval: [f64; 2],
    h: f64,
    params: Vec<f64>,
    bodies: Vec<ConvexBody>,
}

impl TryFrom<FamilyJson> for Family {
    type Error = GeomError;
    fn try_from(j: FamilyJson) -> Result<Self> {
        let f = Family::new(j.bodies, j.params, j.h)?;
        let [a, b] = j.interval;
        if a != f.params[0] || b != *f.params.last().unwrap() {
            return Err(GeomError::InvalidInput(
                "interval does not match the end parameters".into(),
            ));
        }
        Ok(f)
    }
}

impl From<Family> for FamilyJson {
    fn from(f: Family) -> Self {
        FamilyJson {
            interval: [f.params[0], *f.params.last().unwrap()],
            h: f.h,
            params: f.params,
            bodies: f.bodies,
        }
    }
}

impl Family {
    /// Checks shapes and parameter order; nesting is the caller's promise
    /// (see [`Family::check_nested`]).
    pub fn new(bodies: Vec<ConvexBody>, params: Vec<f64>, h: f64) -> Result<Self> {
        if bodies.is_empty() {
            return Err(GeomError::InvalidInput("empty family".into()));
        }
        if !(h > 0.0) {
            return Err(GeomError::InvalidInput(format!("resolution {h} must be positive")));
        }
        let n = bodies[0].dim();
        for b in &bodies {
            crate::error::check_dim(n, b.dim())?;
        }
        check_params(&params, bodies.len())?;
        Ok(Family { h, bodies, params })
    }

    /// Family with parameters measured by `grid` and `h` the largest step.
    pub fn from_bodies(bodies: Vec<ConvexBody>, grid: &SphereGrid) -> Result<Self> {
        let params = bodies
            .iter()
            .map(|b| mean_width(b, grid))
            .collect::<Result<Vec<_>>>()?;
        let h = params
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::MIN_POSITIVE, f64::max);
        Family::new(bodies, params, h)
    }

    pub fn dim(&self) -> usize {
        self.bodies[0].dim()
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn bodies(&self) -> &[ConvexBody] {
        &self.bodies
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.bodies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bodies.is_empty()
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.params[0], *self.params.last().unwrap())
    }

    pub fn min(&self) -> &ConvexBody {
        &self.bodies[0]
    }

    pub fn max(&self) -> &ConvexBody {
        self.bodies.last().unwrap()
    }

    /// Index of the first member whose parameter is ≥ `w` (the member that
    /// represents `w` in a right-continuous family).
    pub fn index_at(&self, w: f64) -> usize {
        self.params
            .partition_point(|p| *p < w)
            .min(self.bodies.len() - 1)
    }

    pub fn body_at(&self, w: f64) -> &ConvexBody {
        &self.bodies[self.index_at(w)]
    }

    /// The members at `indices` (strictly increasing), with `h` the largest
    /// remaining step.
    pub fn subfamily(&self, indices: &[usize]) -> Result<Family> {
        if indices.is_empty() || indices.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GeomError::InvalidInput("indices must increase strictly".into()));
        }
        if *indices.last().unwrap() >= self.len() {
            return Err(GeomError::InvalidInput("index out of range".into()));
        }
        let params: Vec<f64> = indices.iter().map(|&i| self.params[i]).collect();
        let h = params
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(self.h, f64::max);
        Family::new(
            indices.iter().map(|&i| self.bodies[i].clone()).collect(),
            params,
            h,
        )
    }

    /// First consecutive pair that is not nested at `tol`, if any.
    pub fn check_nested(&self, tol: f64) -> Result<Option<(usize, usize)>> {
        for i in 1..self.len() {
            if !self.bodies[i].includes(&self.bodies[i - 1], tol)? {
                return Ok(Some((i - 1, i)));
            }
        }
        Ok(None)
    }

    pub fn as_stratification(&self) -> Stratification {
        Stratification {
            bodies: self.bodies.clone(),
            params: Some(self.params.clone()),
        }
    }
}

/// Body between K1 ⊆ K2 whose mean width is `target`, by bisection on the
/// interpolation fraction.
pub fn body_with_width(
    k1: &ConvexBody,
    k2: &ConvexBody,
    target: f64,
    grid: &SphereGrid,
) -> Result<(f64, ConvexBody)> {
    let w1 = mean_width(k1, grid)?;
    let w2 = mean_width(k2, grid)?;
    let tol = if k1.dim() == 2 {
        1e-10 * (1.0 + (w2 - w1).abs())
    } else {
        1e-6 * (w2 - w1).abs()
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut best: Option<(f64, f64, ConvexBody)> = None;
    for _ in 0..BISECTION_CAP {
        let mid = 0.5 * (lo + hi);
        let a = interpolate(k1, k2, mid)?;
        let w = mean_width(&a, grid)?;
        let err = (w - target).abs();
        if best.as_ref().is_none_or(|b| err < b.0) {
            best = Some((err, mid, a));
        }
        if err <= tol {
            break;
        }
        if w < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON {
            break;
        }
    }
    match best {
        Some((err, f, a)) if err <= tol => Ok((f, a)),
        Some((err, _, _)) => Err(GeomError::NumericalFailure(format!(
            "no interpolating body of width {target} (closest error {err:e})"
        ))),
        None => unreachable!("at least one bisection step"),
    }
}

/// Fills every gap of the chain with interpolating bodies so that the
/// mean-width parameters step by at most `h`. Original bodies keep their
/// own widths.
pub fn complete(strat: &Stratification, h: f64, grid: &SphereGrid) -> Result<Family> {
    if !(h > 0.0) {
        return Err(GeomError::InvalidInput(format!("step {h} must be positive")));
    }
    let ks = strat.bodies();
    let widths = ks
        .iter()
        .map(|k| mean_width(k, grid))
        .collect::<Result<Vec<_>>>()?;
    let mut bodies = vec![ks[0].clone()];
    let mut params = vec![widths[0]];
    for i in 0..ks.len() - 1 {
        let gap = widths[i + 1] - widths[i];
        let pieces = ((gap / h) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        for j in 1..pieces {
            let target = widths[i] + gap * j as f64 / pieces as f64;
            let (_, a) = body_with_width(&ks[i], &ks[i + 1], target, grid)?;
            bodies.push(a);
            params.push(target);
        }
        bodies.push(ks[i + 1].clone());
        params.push(widths[i + 1]);
    }
    Family::new(bodies, params, h)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnectedReport {
    pub ok: bool,
    /// First consecutive pair failing the test.
    pub failing_pair: Option<usize>,
    /// Largest ratio of Hausdorff jump to the allowed jump.
    pub worst_ratio: f64,
}

/// Resolution-relative connectedness: every parameter step is at most `h`
/// and every Hausdorff jump is at most `tol` times the largest jump that a
/// mean-width gap of that size permits, (Δw · diam^{n−1} / c⁰_n)^{1/n}.
pub fn connectivity(fam: &Family, tol: f64) -> Result<ConnectedReport> {
    let n = fam.dim();
    let mut report = ConnectedReport {
        ok: true,
        failing_pair: None,
        worst_ratio: 0.0,
    };
    for i in 0..fam.len().saturating_sub(1) {
        let dp = fam.params[i + 1] - fam.params[i];
        let k2 = &fam.bodies[i + 1];
        let dist = hausdorff(&fam.bodies[i], k2)?;
        let allowed = if n == 1 {
            dp
        } else {
            (dp * k2.diameter().powi(n as i32 - 1) / c0(n)).powf(1.0 / n as f64)
        };
        let ratio = if allowed > 0.0 { dist / allowed } else { f64::INFINITY };
        report.worst_ratio = report.worst_ratio.max(ratio);
        let step_ok = dp <= fam.h * (1.0 + 1e-9);
        if (!step_ok || dist > tol * allowed + TAU_PT) && report.ok {
            report.ok = false;
            report.failing_pair = Some(i);
        }
    }
    Ok(report)
}

pub fn is_connected(fam: &Family, tol: f64) -> Result<bool> {
    Ok(connectivity(fam, tol)?.ok)
}

/// sup over the union of both parameter grids of hausdorff(F(w), G(w)).
pub fn family_distance(f: &Family, g: &Family) -> Result<f64> {
    let (a0, a1) = f.interval();
    let (b0, b1) = g.interval();
    let scale = 1e-9 * (1.0 + a0.abs().max(a1.abs()));
    if (a0 - b0).abs() > scale || (a1 - b1).abs() > scale {
        return Err(GeomError::InvalidInput(format!(
            "families span [{a0}, {a1}] and [{b0}, {b1}]"
        )));
    }
    let mut grid: Vec<f64> = f.params.iter().chain(&g.params).copied().collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() <= scale);
    let mut d = 0.0f64;
    for w in grid {
        d = d.max(hausdorff(f.body_at(w), g.body_at(w))?);
    }
    Ok(d)
}

/// Members bracketing a body K: `inner` is the last member inside K,
/// `outer` the first member containing K.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bracket {
    pub inner: Option<usize>,
    pub outer: Option<usize>,
}

/// Binary search on inclusion; relies on the family being nested.
pub fn bracket(fam: &Family, k: &ConvexBody, tol: f64) -> Result<Bracket> {
    let (mut lo, mut hi) = (0usize, fam.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if k.includes(&fam.bodies[mid], tol)? {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    let inner = lo.checked_sub(1);
    let (mut lo, mut hi) = (0usize, fam.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if fam.bodies[mid].includes(k, tol)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let outer = (lo < fam.len()).then_some(lo);
    Ok(Bracket { inner, outer })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{shapes, Vector};
    use approx::assert_abs_diff_eq;

    fn v2(x: f64, y: f64) -> Vector {
        Vector::from([x, y])
    }

    fn disk(r: f64) -> ConvexBody {
        shapes::ball(&v2(0.0, 0.0), r).unwrap()
    }

    fn grid2() -> SphereGrid {
        SphereGrid::new(2, 64, 0).unwrap()
    }

    #[test]
    fn disks_are_a_chain() {
        let s = validate_stratification(vec![disk(2.0), disk(0.5), disk(1.0)]).unwrap();
        let radii: Vec<f64> = s.bodies().iter().map(|b| b.vertices()[0].norm()).collect();
        assert_eq!(radii, vec![0.5, 1.0, 2.0]);
    }

    #[test]
    fn overlapping_squares_are_not() {
        let a = shapes::box_body(&v2(0.0, 0.0), &v2(1.0, 1.0)).unwrap();
        let b = shapes::box_body(&v2(0.5, 0.5), &v2(1.6, 1.6)).unwrap();
        assert_eq!(validate_stratification(vec![a.clone(), b]), Err(GeomError::NotAChain(0, 1)));
        assert!(matches!(
            validate_stratification(vec![a.clone(), a]),
            Err(GeomError::Degenerate(_))
        ));
    }

    #[test]
    fn complete_disks() {
        let s = validate_stratification(vec![disk(1.0), disk(2.0)]).unwrap();
        let f = complete(&s, 0.1, &grid2()).unwrap();
        assert_eq!(f.len(), 21);
        assert!(f.check_nested(1e-9).unwrap().is_none());
        for (b, w) in f.bodies().iter().zip(f.params()) {
            assert_abs_diff_eq!(mean_width(b, &grid2()).unwrap(), *w, epsilon = 1e-9);
        }
        assert!(is_connected(&f, CONNECT_TOL).unwrap());
        // Already dense: nothing is added.
        let again = complete(&f.as_stratification(), 0.1, &grid2()).unwrap();
        assert_eq!(again.len(), f.len());
    }

    #[test]
    fn annulus_jump_is_disconnected() {
        let f = Family::new(vec![disk(1.0), disk(2.0)], vec![1.0, 1.0 + 1e-6], 0.1).unwrap();
        assert!(!is_connected(&f, CONNECT_TOL).unwrap());
    }

    #[test]
    fn distances_between_families() {
        let radii = [1.0, 1.5, 2.0];
        let params = vec![1.0, 2.0, 3.0];
        let f = Family::new(radii.iter().map(|r| disk(*r)).collect(), params.clone(), 1.0).unwrap();
        let g = Family::new(radii.iter().map(|r| disk(r + 0.1)).collect(), params, 1.0).unwrap();
        assert_eq!(family_distance(&f, &f).unwrap(), 0.0);
        assert_abs_diff_eq!(family_distance(&f, &g).unwrap(), 0.1, epsilon = 1e-12);
        let h = Family::new(vec![disk(1.0), disk(2.0)], vec![1.0, 2.0], 1.0).unwrap();
        assert!(family_distance(&f, &h).is_err());
    }

    #[test]
    fn bracketing() {
        let f = Family::new(
            (1..=5).map(|r| disk(r as f64)).collect(),
            vec![1.0, 2.0, 3.0, 4.0, 5.0],
            1.0,
        )
        .unwrap();
        let b = bracket(&f, &disk(2.5), 1e-9).unwrap();
        assert_eq!(b, Bracket { inner: Some(1), outer: Some(2) });
        let b = bracket(&f, &disk(9.0), 1e-9).unwrap();
        assert_eq!(b, Bracket { inner: Some(4), outer: None });
    }

    #[test]
    fn json_round_trip() {
        let f = Family::new(vec![disk(1.0), disk(2.0)], vec![2.0, 4.0], 2.0).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.starts_with(r#"{"interval":[2.0,4.0],"h":2.0"#));
        assert_eq!(serde_json::from_str::<Family>(&s).unwrap(), f);
    }
}
