//! Deterministic test curves.

use std::f64::consts::PI;

use crate::error::{GeomError, Result};
use crate::geom::Vector;

use super::Polyline;

/// Growth rate of the default spiral fixture.
pub const SPIRAL_RATE: f64 = 0.3;

/// Break points (t, g(t)) of the level-`level` Cantor staircase: on each of
/// the 2^level surviving triadic intervals g rises linearly by 2^{−level},
/// and it is flat on the removed middle thirds.
pub fn cantor_knots(level: u32) -> Vec<(f64, f64)> {
    let mut pieces = vec![((0.0, 1.0), (0.0, 1.0))];
    for _ in 0..level {
        pieces = pieces
            .into_iter()
            .flat_map(|((a, b), (ga, gb))| {
                let third = (b - a) / 3.0;
                let mid = 0.5 * (ga + gb);
                [((a, a + third), (ga, mid)), ((b - third, b), (mid, gb))]
            })
            .collect();
    }
    pieces
        .into_iter()
        .flat_map(|((a, b), (ga, gb))| [(a, ga), (b, gb)])
        .collect()
}

/// The level-`level` staircase evaluated at `t` ∈ [0, 1].
pub fn cantor_function(level: u32, t: f64) -> f64 {
    let knots = cantor_knots(level);
    let t = t.clamp(0.0, 1.0);
    let i = knots.partition_point(|k| k.0 <= t);
    if i == 0 {
        return knots[0].1;
    }
    if i == knots.len() {
        return knots[i - 1].1;
    }
    let (t0, g0) = knots[i - 1];
    let (t1, g1) = knots[i];
    if t1 == t0 {
        g1
    } else {
        g0 + (g1 - g0) * (t - t0) / (t1 - t0)
    }
}

/// Graph of the level-`level` Cantor staircase, 2^{level+1} vertices.
pub fn cantor_graph(level: u32) -> Polyline {
    let pts = cantor_knots(level)
        .into_iter()
        .map(|(t, g)| Vector::from([t, g]))
        .collect();
    Polyline::new(pts).expect("staircase vertices are valid")
}

/// Midpoints of the flat pieces of the level-`level` staircase.
pub fn cantor_flat_midpoints(level: u32) -> Vec<f64> {
    let knots = cantor_knots(level);
    knots
        .windows(2)
        .filter(|w| w[0].1 == w[1].1 && w[1].0 > w[0].0)
        .map(|w| 0.5 * (w[0].0 + w[1].0))
        .collect()
}

/// r = e^{rate·φ}, φ ∈ [0, phi_max], sampled at `m` equally spaced angles.
pub fn log_spiral(rate: f64, phi_max: f64, m: usize) -> Result<Polyline> {
    if m < 2 {
        return Err(GeomError::InvalidInput("spiral needs at least 2 vertices".into()));
    }
    let pts = (0..m)
        .map(|i| {
            let phi = phi_max * i as f64 / (m - 1) as f64;
            Vector::polar(phi) * (rate * phi).exp()
        })
        .collect();
    Polyline::new(pts)
}

/// Upper half of the circle with diameter `d` centred at the origin,
/// traversed from (−d/2, 0) to (d/2, 0).
pub fn half_circle(d: f64, m: usize) -> Result<Polyline> {
    if m < 2 || !(d > 0.0) {
        return Err(GeomError::InvalidInput("half circle needs d > 0 and m >= 2".into()));
    }
    let pts = (0..m)
        .map(|i| Vector::polar(PI * (1.0 - i as f64 / (m - 1) as f64)) * (0.5 * d))
        .collect();
    Polyline::new(pts)
}

#[cfg(test)]
mod tests {
    use super::super::{is_sep, SEP_TOL};
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn level_one_staircase() {
        let g = cantor_graph(1);
        let want = [[0.0, 0.0], [1.0 / 3.0, 0.5], [2.0 / 3.0, 0.5], [1.0, 1.0]];
        assert_eq!(g.len(), 4);
        for (p, w) in g.points().iter().zip(want) {
            assert_abs_diff_eq!(p[0], w[0], epsilon = 1e-15);
            assert_abs_diff_eq!(p[1], w[1], epsilon = 1e-15);
        }
        assert!(is_sep(&g, SEP_TOL).ok);
    }

    #[test]
    fn staircase_values() {
        assert_eq!(cantor_graph(8).len(), 512);
        assert_abs_diff_eq!(cantor_function(6, 0.5), 0.5);
        assert_abs_diff_eq!(cantor_function(6, 2.0 / 3.0), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(cantor_function(6, 0.75), 2.0 / 3.0, epsilon = 0.02);
        assert_eq!(cantor_function(6, 1.0), 1.0);
        assert_eq!(cantor_flat_midpoints(1), vec![0.5]);
    }

    #[test]
    fn fixtures_are_seps() {
        assert!(is_sep(&cantor_graph(8), SEP_TOL).ok);
        assert!(is_sep(&half_circle(2.0, 200).unwrap(), SEP_TOL).ok);
        assert!(is_sep(&log_spiral(SPIRAL_RATE, 4.0 * PI, 400).unwrap(), SEP_TOL).ok);
        assert!(!is_sep(&log_spiral(0.2, 4.0 * PI, 400).unwrap(), SEP_TOL).ok);
    }
}
