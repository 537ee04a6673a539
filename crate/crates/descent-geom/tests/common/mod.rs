//! Independent oracles and seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use descent_geom::family::{interpolate, Family};
use descent_geom::geom::{hull, omega, ConvexBody, Vector};
use descent_geom::mean_width::SphereGrid;
use descent_geom::sep::Polyline;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn v2(x: f64, y: f64) -> Vector {
    Vector::from([x, y])
}

pub fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    loop {
        let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v = Vector::new(g).unwrap();
        if v.norm() > 1e-3 && v.norm() <= 1.0 {
            return v.normalized().unwrap();
        }
    }
}

/// Hull of `m` random points in the ball B(center, r).
pub fn random_body(rng: &mut ChaCha8Rng, center: &Vector, r: f64, m: usize) -> ConvexBody {
    let n = center.dim();
    let pts: Vec<Vector> = (0..m)
        .map(|_| {
            let u = random_unit(rng, n);
            center + &(&u * (r * rng.gen_range(0.2f64..1.0).powf(1.0 / n as f64)))
        })
        .collect();
    hull(&pts).unwrap()
}

/// K1 ⊆ K2 with K2 = co(K1 ∪ random points).
pub fn random_nested_pair(rng: &mut ChaCha8Rng, n: usize) -> (ConvexBody, ConvexBody) {
    let o = Vector::zeros(n);
    let r1 = rng.gen_range(0.3..1.0);
    let k1 = random_body(rng, &o, r1, 6 + 2 * n);
    let r2 = rng.gen_range(1.0..2.5);
    let extra = random_body(rng, &o, r2, 3 + n);
    let mut pts = k1.vertices().to_vec();
    pts.extend(extra.vertices().iter().cloned());
    (k1, hull(&pts).unwrap())
}

/// Strata K0 ⊂ K1 ⊂ … (each scaled up about the first centroid and
/// extended by random points), filled with `per_gap` interpolating members.
pub fn random_family(rng: &mut ChaCha8Rng, n: usize, strata: usize, per_gap: usize) -> Family {
    let o = Vector::zeros(n);
    let mut ks = vec![random_body(rng, &o, 0.5, 5 + 2 * n)];
    let c = ks[0].centroid();
    for _ in 1..strata {
        let prev = ks.last().unwrap();
        let s = rng.gen_range(1.2..1.6);
        let grown = prev.scale_about(&c, s).unwrap();
        let r = 0.5 * grown.diameter() + 0.3;
        let extra = random_body(rng, &c, r, 3);
        let mut pts = grown.vertices().to_vec();
        pts.extend(extra.vertices().iter().cloned());
        ks.push(hull(&pts).unwrap());
    }
    let mut bodies = vec![ks[0].clone()];
    for w in ks.windows(2) {
        for j in 1..=per_gap {
            bodies.push(interpolate(&w[0], &w[1], j as f64 / per_gap as f64).unwrap());
        }
    }
    let grid = if n == 2 {
        SphereGrid::new(2, 2, 0).unwrap()
    } else {
        SphereGrid::default_for(n, 0).unwrap()
    };
    Family::from_bodies(bodies, &grid).unwrap()
}

/// A random point on the boundary of a full-dimensional planar polygon.
pub fn random_boundary_point_2d(rng: &mut ChaCha8Rng, k: &ConvexBody) -> Vector {
    let vs = k.vertices();
    let i = rng.gen_range(0..vs.len());
    Vector::lerp(&vs[i], &vs[(i + 1) % vs.len()], rng.gen_range(0.0..1.0))
}

/// Random polyline with up to `max_len` vertices: a walk whose heading
/// drifts by random turns, so that some walks expand and some backtrack.
pub fn random_polyline(rng: &mut ChaCha8Rng, max_len: usize) -> Polyline {
    let m = rng.gen_range(2..=max_len);
    let turn = [0.05, 0.3, 0.8, 2.0][rng.gen_range(0..4)];
    let growth = rng.gen_range(0.9..1.2);
    let mut heading = rng.gen_range(0.0..2.0 * PI);
    let mut step = rng.gen_range(0.05..0.5);
    let mut p = v2(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let mut pts = vec![p.clone()];
    for _ in 1..m {
        heading += rng.gen_range(-turn..turn);
        step *= growth;
        p = &p + &(Vector::polar(heading) * step);
        pts.push(p.clone());
    }
    Polyline::new(pts).unwrap()
}

/// SEP by brute force: for every vertex y, distances to y along the rest of
/// the curve are sampled at all later vertices and at the feet of the
/// perpendiculars from y onto later segments (where |· − y| is smallest on
/// a segment), and every sampled pair must be ordered.
pub fn brute_force_sep(gamma: &Polyline, tol: f64) -> bool {
    let pts = gamma.points();
    for (i, y) in pts.iter().enumerate() {
        let mut samples = Vec::new();
        for j in i..pts.len() {
            samples.push(pts[j].dist(y));
            if j + 1 < pts.len() {
                let d = &pts[j + 1] - &pts[j];
                let t = (y - &pts[j]).dot(&d) / d.norm_sq();
                if t > 0.0 && t < 1.0 {
                    samples.push((&pts[j] + &(&d * t)).dist(y));
                }
            }
        }
        for a in 0..samples.len() {
            for b in a + 1..samples.len() {
                if samples[a] > samples[b] + tol {
                    return false;
                }
            }
        }
    }
    true
}

/// ∫ ⟨θ, v⟩ over the cap of angular radius δ on S^{n−1}, by composite
/// Simpson in the polar angle: ω_{n−1} ∫_0^δ cos φ sin^{n−2} φ dφ.
pub fn cap_moment_simpson(n: usize, delta: f64, panels: usize) -> f64 {
    if n == 2 {
        // two arcs of length δ
        let f = |p: f64| 2.0 * p.cos();
        return simpson(f, 0.0, delta, panels);
    }
    let f = |p: f64| p.cos() * p.sin().powi(n as i32 - 2);
    omega(n - 1) * simpson(f, 0.0, delta, panels)
}

pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let m = panels + panels % 2;
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Planar perimeter by walking the hull.
pub fn perimeter_oracle(k: &ConvexBody) -> f64 {
    let vs = k.vertices();
    match vs.len() {
        1 => 0.0,
        2 => 2.0 * vs[0].dist(&vs[1]),
        m => (0..m).map(|i| vs[i].dist(&vs[(i + 1) % m])).sum(),
    }
}
