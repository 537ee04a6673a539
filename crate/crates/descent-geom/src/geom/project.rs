//! Nearest-point computations on vertex hulls.

use nalgebra::{DMatrix, DVector};

use super::vector::Vector;
use crate::error::{GeomError, Result};

/// Iteration cap for the active-set solver.
pub const MAX_ITER: usize = 10_000;

/// Nearest point to the origin of conv(pts), by Wolfe's active-set method.
///
/// Returns the point together with its barycentric weights over `pts`.
pub(crate) fn min_norm_point(pts: &[Vector]) -> Result<(Vector, Vec<f64>)> {
    let m = pts.len();
    if m == 0 {
        return Err(GeomError::InvalidInput("empty point set".into()));
    }
    let scale = pts.iter().map(Vector::norm_sq).fold(1.0, f64::max);
    let stop = 1e-15 * scale;
    let drop = 1e-14;

    let j0 = (0..m)
        .min_by(|&a, &b| pts[a].norm_sq().total_cmp(&pts[b].norm_sq()))
        .unwrap();
    let mut set = vec![j0];
    let mut lam = vec![1.0];
    let mut x = pts[j0].clone();
    let mut iters = 0usize;

    let tiny = 1e-26 * scale;
    loop {
        if x.norm_sq() <= tiny {
            break;
        }
        let before = x.norm_sq();
        let (j, best) = (0..m)
            .map(|i| (i, x.dot(&pts[i])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if x.norm_sq() - best <= stop || set.contains(&j) {
            break;
        }
        set.push(j);
        lam.push(0.0);

        loop {
            iters += 1;
            if iters > MAX_ITER {
                return Err(GeomError::NumericalFailure(format!(
                    "projection did not converge within {MAX_ITER} iterations"
                )));
            }
            let mu = affine_minimizer(pts, &set);
            if mu.iter().all(|&v| v > drop) {
                lam = mu;
                x = combine(pts, &set, &lam);
                break;
            }
            let mut theta = 1.0f64;
            for (l, u) in lam.iter().zip(&mu) {
                if *u <= drop {
                    let d = l - u;
                    if d > 0.0 {
                        theta = theta.min(l / d);
                    }
                }
            }
            for (l, u) in lam.iter_mut().zip(&mu) {
                *l = (1.0 - theta) * *l + theta * u;
            }
            let mut k = 0;
            while k < set.len() {
                if lam[k] <= drop && set.len() > 1 {
                    set.remove(k);
                    lam.remove(k);
                } else {
                    k += 1;
                }
            }
            let s: f64 = lam.iter().sum();
            lam.iter_mut().for_each(|l| *l /= s);
        }
        // No progress left at working precision: x is as good as it gets.
        if x.norm_sq() >= before * (1.0 - 1e-14) {
            break;
        }
    }

    let mut weights = vec![0.0; m];
    for (&i, &l) in set.iter().zip(&lam) {
        weights[i] = l;
    }
    Ok((x, weights))
}

fn combine(pts: &[Vector], set: &[usize], lam: &[f64]) -> Vector {
    let n = pts[0].dim();
    let mut c = vec![0.0; n];
    for (&i, &l) in set.iter().zip(lam) {
        for (ck, pk) in c.iter_mut().zip(pts[i].coords()) {
            *ck += l * pk;
        }
    }
    Vector::raw(c)
}

/// Weights (summing to 1) of the point of least norm in the affine hull of `set`.
fn affine_minimizer(pts: &[Vector], set: &[usize]) -> Vec<f64> {
    let s = set.len();
    if s == 1 {
        return vec![1.0];
    }
    let n = pts[0].dim();
    let p0 = &pts[set[0]];
    let d = DMatrix::from_fn(n, s - 1, |r, c| pts[set[c + 1]][r] - p0[r]);
    let rhs = DVector::from_fn(n, |r, _| -p0[r]);
    let svd = d.svd(true, true);
    let smax = svd.singular_values.max();
    let a = svd
        .solve(&rhs, 1e-12 * smax.max(1e-300))
        .unwrap_or_else(|_| DVector::zeros(s - 1));
    let mut mu = Vec::with_capacity(s);
    mu.push(1.0 - a.sum());
    mu.extend(a.iter());
    mu
}

/// Nearest point of segment [a, b] to p.
pub(crate) fn project_segment(a: &Vector, b: &Vector, p: &Vector) -> Vector {
    let ab = b - a;
    let l2 = ab.norm_sq();
    if l2 == 0.0 {
        return a.clone();
    }
    let t = ((p - a).dot(&ab) / l2).clamp(0.0, 1.0);
    Vector::lerp(a, b, t)
}

pub(crate) fn cross2(o: &Vector, a: &Vector, b: &Vector) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Exact projection onto a canonical planar hull (counter-clockwise vertex cycle).
pub(crate) fn project_planar(verts: &[Vector], p: &Vector) -> Vector {
    match verts.len() {
        1 => verts[0].clone(),
        2 => project_segment(&verts[0], &verts[1], p),
        m => {
            let inside = (0..m).all(|i| cross2(&verts[i], &verts[(i + 1) % m], p) >= 0.0);
            if inside {
                return p.clone();
            }
            (0..m)
                .map(|i| project_segment(&verts[i], &verts[(i + 1) % m], p))
                .min_by(|a, b| a.dist(p).total_cmp(&b.dist(p)))
                .unwrap()
        }
    }
}
