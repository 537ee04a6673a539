use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{check_dim, GeomError, Result};
use crate::geom::{Vector, TAU_PT};

/// Default residual threshold for cone membership.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// Polyhedral cone with apex at the origin, stored by unit generators.
///
/// Cones built from inequalities also keep those inequalities (`facets`),
/// which gives an exact membership test; otherwise membership is decided
/// by nonnegative least squares.
#[derive(Clone, Debug, Serialize)]
pub struct PolyCone {
    dim: usize,
    generators: Vec<Vector>,
    #[serde(skip)]
    facets: Option<Vec<Vector>>,
}

impl PolyCone {
    /// The cone {0}.
    pub fn zero(dim: usize) -> Self {
        PolyCone {
            dim,
            generators: Vec::new(),
            facets: None,
        }
    }

    /// All of R^n.
    pub fn full(dim: usize) -> Self {
        PolyCone {
            dim,
            generators: (0..dim)
                .flat_map(|k| [Vector::unit(dim, k), -&Vector::unit(dim, k)])
                .collect(),
            facets: Some(Vec::new()),
        }
    }

    /// Cone spanned by nonnegative combinations of `gens` (zero vectors dropped).
    pub fn from_generators(dim: usize, gens: &[Vector]) -> Result<Self> {
        for g in gens {
            check_dim(dim, g.dim())?;
        }
        Ok(PolyCone {
            dim,
            generators: unit_dedup(gens),
            facets: None,
        })
    }

    /// The cone {x : ⟨a, x⟩ ≥ 0 for every row a}.
    pub fn from_halfspaces(dim: usize, rows: &[Vector]) -> Result<Self> {
        for a in rows {
            check_dim(dim, a.dim())?;
        }
        let rows = unit_dedup(rows);
        let generators = extreme_rays(dim, &rows)?;
        Ok(PolyCone {
            dim,
            generators,
            facets: Some(rows),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Inward normals {a} with C = {x : ⟨a, x⟩ ≥ 0}.
    pub fn facets(&self) -> Result<Vec<Vector>> {
        match &self.facets {
            Some(f) => Ok(f.clone()),
            None if self.generators.is_empty() => Ok((0..self.dim)
                .flat_map(|k| [Vector::unit(self.dim, k), -&Vector::unit(self.dim, k)])
                .collect()),
            None => extreme_rays(self.dim, &self.generators),
        }
    }

    /// −C
    pub fn negate(&self) -> PolyCone {
        PolyCone {
            dim: self.dim,
            generators: self.generators.iter().map(|g| -g).collect(),
            facets: self
                .facets
                .as_ref()
                .map(|f| f.iter().map(|a| -a).collect()),
        }
    }

    /// C ∩ D
    pub fn intersect(&self, other: &PolyCone) -> Result<PolyCone> {
        check_dim(self.dim, other.dim)?;
        let mut rows = self.facets()?;
        rows.extend(other.facets()?);
        PolyCone::from_halfspaces(self.dim, &rows)
    }

    /// Nearest point of the cone to `x`.
    pub fn project(&self, x: &Vector) -> Vector {
        if self.generators.is_empty() {
            return Vector::zeros(self.dim);
        }
        nnls(&self.generators, x).1
    }

    /// Membership of `x` at tolerance `tol`, measured on the unit vector x/|x|.
    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        let Some(u) = x.normalized() else {
            return true;
        };
        match &self.facets {
            Some(f) => f.iter().all(|a| a.dot(&u) >= -tol),
            None => self.contains_nnls(&u, tol),
        }
    }

    /// Membership by nonnegative least squares on the generators.
    pub fn contains_nnls(&self, x: &Vector, tol: f64) -> bool {
        let Some(u) = x.normalized() else {
            return true;
        };
        self.project(&u).dist(&u) <= tol
    }

    /// Angle between the unit vector x/|x| and the nearest unit vector of the cone.
    pub fn angle_to(&self, x: &Vector) -> f64 {
        let Some(u) = x.normalized() else {
            return 0.0;
        };
        if self.generators.is_empty() {
            return std::f64::consts::PI;
        }
        let p = self.project(&u);
        let pn = p.norm();
        if pn > 1e-12 {
            pn.min(1.0).acos()
        } else {
            let best = self
                .generators
                .iter()
                .map(|g| g.dot(&u))
                .fold(f64::NEG_INFINITY, f64::max);
            best.clamp(-1.0, 1.0).acos()
        }
    }

    /// Angular intervals (start, length) covered by a planar cone.
    ///
    /// Rays and lines come back as zero-length intervals.
    pub fn arcs_2d(&self) -> Result<Vec<(f64, f64)>> {
        check_dim(2, self.dim)?;
        use std::f64::consts::PI;
        let g = &self.generators;
        if g.is_empty() {
            return Ok(Vec::new());
        }
        let mut ang: Vec<f64> = g.iter().map(|v| v[1].atan2(v[0])).collect();
        ang.sort_by(f64::total_cmp);
        let m = ang.len();
        let (mut gap, mut after) = (0.0f64, 0usize);
        for i in 0..m {
            let next = if i + 1 < m { ang[i + 1] } else { ang[0] + 2.0 * PI };
            if next - ang[i] > gap {
                gap = next - ang[i];
                after = (i + 1) % m;
            }
        }
        let eps = 1e-12;
        if gap > PI + eps {
            return Ok(vec![(ang[after], 2.0 * PI - gap)]);
        }
        let line_only = g
            .iter()
            .all(|a| g.iter().all(|b| a.dot(b).abs() > 1.0 - 1e-12));
        if line_only {
            return Ok(ang.iter().map(|&a| (a, 0.0)).collect());
        }
        if gap >= PI - eps {
            return Ok(vec![(ang[after], PI)]);
        }
        Ok(vec![(0.0, 2.0 * PI)])
    }
}

fn unit_dedup(vs: &[Vector]) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for v in vs {
        if v.norm() <= TAU_PT {
            continue;
        }
        if let Some(u) = v.normalized() {
            if !out.iter().any(|w| w.dist(&u) <= TAU_PT) {
                out.push(u);
            }
        }
    }
    out
}

/// Generators of {y : ⟨a_i, y⟩ ≥ 0} by the double description method.
///
/// The lineality space (orthogonal complement of the row span) contributes
/// ± basis vectors; the pointed part is built inside the row span.
fn extreme_rays(dim: usize, rows: &[Vector]) -> Result<Vec<Vector>> {
    if rows.is_empty() {
        return Ok(PolyCone::full(dim).generators);
    }
    let k = rows.len();
    let a = DMatrix::from_fn(k, dim, |r, c| rows[r][c]);
    let gram = a.transpose() * &a;
    let eig = SymmetricEigen::new(gram);
    let lmax = eig.eigenvalues.max();
    let mut span = Vec::new();
    let mut lineality = Vec::new();
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        let col = Vector::raw(eig.eigenvectors.column(i).iter().copied().collect());
        if l > 1e-12 * lmax {
            span.push(col);
        } else {
            lineality.push(col);
        }
    }
    let r = span.len();
    let coords = |v: &Vector| DVector::from_iterator(r, span.iter().map(|s| s.dot(v)));
    let b: Vec<DVector<f64>> = rows.iter().map(coords).collect();

    // initial simplicial cone from r independent rows
    let mut basis: Vec<usize> = Vec::new();
    let mut ortho: Vec<DVector<f64>> = Vec::new();
    for (i, bi) in b.iter().enumerate() {
        let mut res = bi.clone();
        for q in &ortho {
            res -= q * q.dot(bi);
        }
        if res.norm() > 1e-7 {
            ortho.push(res.normalize());
            basis.push(i);
            if basis.len() == r {
                break;
            }
        }
    }
    if basis.len() < r {
        return Err(GeomError::NumericalFailure(
            "could not find independent cone facets".into(),
        ));
    }
    let bm = DMatrix::from_fn(r, r, |i, j| b[basis[i]][j]);
    let inv = bm
        .try_inverse()
        .ok_or_else(|| GeomError::NumericalFailure("singular facet basis".into()))?;

    let words = k.div_ceil(64);
    let mut rays: Vec<(DVector<f64>, Vec<u64>)> = Vec::new();
    for j in 0..r {
        let ray = inv.column(j).normalize();
        let mut z = vec![0u64; words];
        for (t, &bi) in basis.iter().enumerate() {
            if t != j {
                z[bi / 64] |= 1 << (bi % 64);
            }
        }
        rays.push((ray, z));
    }

    let zero_eps = 1e-10;
    for i in (0..k).filter(|i| !basis.contains(i)) {
        let vals: Vec<f64> = rays.iter().map(|(ray, _)| ray.dot(&b[i])).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&t| vals[t] > zero_eps).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&t| vals[t] < -zero_eps).collect();
        let set_bit = |z: &mut Vec<u64>| z[i / 64] |= 1 << (i % 64);
        if neg.is_empty() {
            for (t, (_, z)) in rays.iter_mut().enumerate() {
                if vals[t].abs() <= zero_eps {
                    set_bit(z);
                }
            }
            continue;
        }
        let mut next: Vec<(DVector<f64>, Vec<u64>)> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common: Vec<u64> = rays[p]
                    .1
                    .iter()
                    .zip(&rays[q].1)
                    .map(|(x, y)| x & y)
                    .collect();
                let count: u32 = common.iter().map(|w| w.count_ones()).sum();
                if (count as usize + 2) < r {
                    continue;
                }
                let dominated = rays.iter().enumerate().any(|(t, (_, zt))| {
                    t != p && t != q && common.iter().zip(zt).all(|(c, z)| c & z == *c)
                });
                if dominated {
                    continue;
                }
                let new = &rays[q].0 * vals[p] - &rays[p].0 * vals[q];
                let nn = new.norm();
                if nn > 1e-300 {
                    let mut z = common;
                    set_bit(&mut z);
                    next.push((new / nn, z));
                }
            }
        }
        for (t, (ray, z)) in rays.iter().enumerate() {
            if vals[t] > zero_eps {
                next.push((ray.clone(), z.clone()));
            } else if vals[t].abs() <= zero_eps {
                let mut z = z.clone();
                set_bit(&mut z);
                next.push((ray.clone(), z));
            }
        }
        rays = Vec::new();
        for (ray, z) in next {
            if !rays.iter().any(|(r2, _)| (r2 - &ray).norm() <= 1e-9) {
                rays.push((ray, z));
            }
        }
    }

    let mut gens: Vec<Vector> = rays
        .iter()
        .map(|(ray, _)| {
            let mut v = vec![0.0; dim];
            for (c, s) in ray.iter().zip(&span) {
                for (vk, sk) in v.iter_mut().zip(s.coords()) {
                    *vk += c * sk;
                }
            }
            Vector::raw(v)
        })
        .collect();
    for l in lineality {
        gens.push(-&l);
        gens.push(l);
    }
    Ok(unit_dedup(&gens))
}

/// Lawson–Hanson nonnegative least squares: min |Σ λ_j c_j − b| over λ ≥ 0.
///
/// Returns the coefficients and the fitted vector Σ λ_j c_j.
pub(crate) fn nnls(cols: &[Vector], b: &Vector) -> (Vec<f64>, Vector) {
    let k = cols.len();
    let n = b.dim();
    let mut x = vec![0.0; k];
    let mut passive = vec![false; k];
    let mut banned = vec![false; k];
    let fit = |x: &[f64]| {
        let mut f = vec![0.0; n];
        for (xj, c) in x.iter().zip(cols) {
            if *xj != 0.0 {
                for (fk, ck) in f.iter_mut().zip(c.coords()) {
                    *fk += xj * ck;
                }
            }
        }
        Vector::raw(f)
    };
    let solve = |set: &[usize]| -> Vec<f64> {
        let m = DMatrix::from_fn(n, set.len(), |r, c| cols[set[c]][r]);
        let rhs = DVector::from_iterator(n, b.coords().iter().copied());
        let svd = m.svd(true, true);
        let smax = svd.singular_values.max();
        svd.solve(&rhs, 1e-12 * smax.max(1e-300))
            .map(|s| s.iter().copied().collect())
            .unwrap_or_else(|_| vec![0.0; set.len()])
    };
    for _ in 0..(3 * k + 30) {
        let r = b - &fit(&x);
        let cand = (0..k)
            .filter(|&j| !passive[j] && !banned[j])
            .map(|j| (j, cols[j].dot(&r)))
            .max_by(|a, b| a.1.total_cmp(&b.1));
        let Some((j, wj)) = cand else { break };
        if wj <= 1e-13 {
            break;
        }
        passive[j] = true;
        let mut first = true;
        let mut moved = false;
        for _ in 0..(3 * k + 30) {
            let set: Vec<usize> = (0..k).filter(|&t| passive[t]).collect();
            let s = solve(&set);
            if first {
                first = false;
                let sj = set
                    .iter()
                    .position(|&t| t == j)
                    .map(|p| s[p])
                    .unwrap_or(0.0);
                if sj <= 0.0 {
                    passive[j] = false;
                    banned[j] = true;
                    break;
                }
            }
            if s.iter().all(|&v| v > 0.0) {
                for (p, &t) in set.iter().enumerate() {
                    x[t] = s[p];
                }
                moved = true;
                break;
            }
            let mut alpha = 1.0f64;
            for (p, &t) in set.iter().enumerate() {
                if s[p] <= 0.0 {
                    let d = x[t] - s[p];
                    if d > 0.0 {
                        alpha = alpha.min(x[t] / d);
                    }
                }
            }
            for (p, &t) in set.iter().enumerate() {
                x[t] += alpha * (s[p] - x[t]);
                if x[t] <= 1e-15 {
                    x[t] = 0.0;
                    passive[t] = false;
                }
            }
        }
        if moved {
            banned.iter_mut().for_each(|b| *b = false);
        }
    }
    let f = fit(&x);
    (x, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v2(x: f64, y: f64) -> Vector {
        Vector::from([x, y])
    }

    #[test]
    fn halfspaces_quadrant() {
        let c = PolyCone::from_halfspaces(2, &[v2(1.0, 0.0), v2(0.0, 1.0)]).unwrap();
        assert_eq!(c.generators().len(), 2);
        assert!(c.contains(&v2(1.0, 2.0), 1e-12));
        assert!(!c.contains(&v2(-1.0, 2.0), 1e-12));
        assert!(c.contains_nnls(&v2(1.0, 2.0), 1e-8));
        assert!(!c.contains_nnls(&v2(-1.0, 2.0), 1e-8));
    }

    #[test]
    fn halfspace_and_line() {
        let h = PolyCone::from_halfspaces(2, &[v2(1.0, 0.0)]).unwrap();
        assert_eq!(h.generators().len(), 3);
        assert!(h.contains_nnls(&v2(0.1, -5.0), 1e-8));
        let line = PolyCone::from_halfspaces(2, &[v2(1.0, 0.0), v2(-1.0, 0.0)]).unwrap();
        assert_eq!(line.generators().len(), 2);
        let zero =
            PolyCone::from_halfspaces(2, &[v2(1.0, 0.0), v2(-1.0, 1.0), v2(-1.0, -1.0)]).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn octant_cut_in_3d() {
        let rows = [
            Vector::from([1.0, 0.0, 0.0]),
            Vector::from([0.0, 1.0, 0.0]),
            Vector::from([0.0, 0.0, 1.0]),
            Vector::from([1.0, 1.0, -1.0]),
        ];
        let c = PolyCone::from_halfspaces(3, &rows).unwrap();
        // rays: e1, e2, e1+e3, e2+e3
        assert_eq!(c.generators().len(), 4);
        for g in c.generators() {
            assert!(rows.iter().all(|a| a.dot(g) >= -1e-12));
        }
    }

    #[test]
    fn nnls_projection() {
        let gens = [v2(1.0, 0.0), v2(1.0, 1.0)];
        let (lam, f) = nnls(&gens, &v2(0.0, 1.0));
        assert!(lam.iter().all(|&l| l >= 0.0));
        assert!(f.dist(&v2(0.5, 0.5)) < 1e-12);
    }

    #[test]
    fn arcs_of_planar_cones() {
        use std::f64::consts::PI;
        let q = PolyCone::from_generators(2, &[v2(1.0, 0.0), v2(0.0, 1.0)]).unwrap();
        let a = q.arcs_2d().unwrap();
        assert_eq!(a.len(), 1);
        assert!(a[0].0.abs() < 1e-15 && (a[0].1 - PI / 2.0).abs() < 1e-15);
        let h = PolyCone::from_halfspaces(2, &[v2(0.0, 1.0)]).unwrap();
        let a = h.arcs_2d().unwrap();
        assert!((a[0].1 - PI).abs() < 1e-12 && a[0].0.abs() < 1e-12);
        assert_eq!(PolyCone::full(2).arcs_2d().unwrap(), vec![(0.0, 2.0 * PI)]);
        let line = PolyCone::from_generators(2, &[v2(1.0, 0.0), v2(-1.0, 0.0)]).unwrap();
        assert!(line.arcs_2d().unwrap().iter().all(|a| a.1 == 0.0));
    }
}
