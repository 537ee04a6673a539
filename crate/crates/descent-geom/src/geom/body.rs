use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::project::{cross2, min_norm_point, project_planar};
use super::vector::{Vector, MAX_DIM};
use crate::error::{check_dim, GeomError, Result};

/// Deduplication tolerance for canonical vertex sets.
pub const TAU_PT: f64 = 1e-9;

/// Tolerance for the projection optimality certificate, relative to `1 + |p - q|`.
pub const PROJ_CERT_TOL: f64 = 1e-8;

/// A convex polytope stored by its extreme points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BodyJson", into = "BodyJson")]
pub struct ConvexBody {
    dim: usize,
    vertices: Vec<Vector>,
    dim_affine: usize,
}

#[derive(Serialize, Deserialize)]
struct BodyJson {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

impl TryFrom<BodyJson> for ConvexBody {
    type Error = GeomError;
    fn try_from(j: BodyJson) -> Result<Self> {
        let pts = j
            .vertices
            .into_iter()
            .map(Vector::new)
            .collect::<Result<Vec<_>>>()?;
        let body = hull(&pts)?;
        check_dim(j.dim, body.dim)?;
        Ok(body)
    }
}

impl From<ConvexBody> for BodyJson {
    fn from(b: ConvexBody) -> Self {
        BodyJson {
            dim: b.dim,
            vertices: b.vertices.into_iter().map(Vector::into_coords).collect(),
        }
    }
}

/// Canonical convex hull of a finite point set.
///
/// Planar hulls are listed counter-clockwise from the lexicographically
/// smallest vertex; other dimensions are sorted lexicographically.
pub fn hull(points: &[Vector]) -> Result<ConvexBody> {
    let first = points
        .first()
        .ok_or_else(|| GeomError::InvalidInput("hull of an empty point set".into()))?;
    let n = first.dim();
    if n == 0 || n > MAX_DIM {
        return Err(GeomError::InvalidInput(format!("dimension {n} unsupported")));
    }
    for p in points {
        check_dim(n, p.dim())?;
    }
    let extent = points
        .iter()
        .flat_map(|p| p.coords().iter())
        .fold(0.0f64, |m, c| m.max(c.abs()));
    let tol = TAU_PT * (1.0 + extent);
    let pts = dedup(points);
    let vertices = match n {
        1 => hull_1d(pts),
        2 => hull_2d(pts, tol),
        _ => hull_nd(pts, tol)?,
    };
    let dim_affine = affine_dim(&vertices);
    Ok(ConvexBody {
        dim: n,
        vertices,
        dim_affine,
    })
}

fn dedup(points: &[Vector]) -> Vec<Vector> {
    let mut sorted: Vec<Vector> = points.to_vec();
    sorted.sort_by(|a, b| a.lex_cmp(b));
    let mut out: Vec<Vector> = Vec::with_capacity(sorted.len());
    for p in sorted {
        // duplicates within TAU_PT share their first coordinate up to TAU_PT
        let dup = out
            .iter()
            .rev()
            .take_while(|q| p[0] - q[0] <= TAU_PT)
            .any(|q| q.dist(&p) <= TAU_PT);
        if !dup {
            out.push(p);
        }
    }
    out
}

fn hull_1d(pts: Vec<Vector>) -> Vec<Vector> {
    let lo = pts.first().unwrap().clone();
    let hi = pts.last().unwrap().clone();
    if lo.dist(&hi) <= TAU_PT {
        vec![lo]
    } else {
        vec![lo, hi]
    }
}

// Andrew's monotone chain; input is lexicographically sorted.
fn hull_2d(pts: Vec<Vector>, tol: f64) -> Vec<Vector> {
    if pts.len() <= 2 {
        return pts;
    }
    let turn_ok = |o: &Vector, a: &Vector, b: &Vector| cross2(o, a, b) > tol * o.dist(b);
    let mut lower: Vec<Vector> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !turn_ok(&lower[lower.len() - 2], &lower[lower.len() - 1], p) {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vector> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !turn_ok(&upper[upper.len() - 2], &upper[upper.len() - 1], p) {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    lower
}

// A point is kept iff it stays farther than `tol` from the hull of the others.
fn hull_nd(mut pts: Vec<Vector>, tol: f64) -> Result<Vec<Vector>> {
    let mut i = 0;
    while i < pts.len() && pts.len() > 1 {
        let p = &pts[i];
        let shifted: Vec<Vector> = pts
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, q)| q - p)
            .collect();
        let (x, _) = min_norm_point(&shifted)?;
        if x.norm() <= tol {
            pts.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(pts)
}

fn affine_dim(vertices: &[Vector]) -> usize {
    if vertices.len() <= 1 {
        return 0;
    }
    let n = vertices[0].dim();
    let c = centroid_of(vertices);
    let m = DMatrix::from_fn(vertices.len(), n, |r, k| vertices[r][k] - c[k]);
    let sv = m.singular_values();
    let smax = sv.max();
    if smax <= TAU_PT {
        return 0;
    }
    sv.iter().filter(|&&s| s > 1e-8 * smax).count()
}

fn centroid_of(vertices: &[Vector]) -> Vector {
    let n = vertices[0].dim();
    let mut c = vec![0.0; n];
    for v in vertices {
        for (ck, vk) in c.iter_mut().zip(v.coords()) {
            *ck += vk;
        }
    }
    let k = vertices.len() as f64;
    Vector::raw(c.into_iter().map(|x| x / k).collect())
}

impl ConvexBody {
    /// Same as [`hull`].
    pub fn from_points(points: &[Vector]) -> Result<Self> {
        hull(points)
    }

    /// Ambient dimension n.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    /// Dimension of the affine hull.
    pub fn dim_affine(&self) -> usize {
        self.dim_affine
    }

    /// True when the body has nonempty interior in R^n.
    pub fn is_full_dim(&self) -> bool {
        self.dim_affine == self.dim
    }

    /// Support function H_K(x) = max over vertices of ⟨x, v⟩.
    pub fn support(&self, x: &Vector) -> Result<f64> {
        check_dim(self.dim, x.dim())?;
        Ok(self.support_unchecked(x))
    }

    pub(crate) fn support_unchecked(&self, x: &Vector) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Nearest point of the body to `p`.
    ///
    /// Fails with `NumericalFailure` if the solver does not converge or its
    /// optimality certificate is violated.
    pub fn project(&self, p: &Vector) -> Result<Vector> {
        check_dim(self.dim, p.dim())?;
        let q = match self.dim {
            1 => {
                let lo = self.vertices[0][0];
                let hi = self.vertices.last().unwrap()[0];
                Vector::raw(vec![p[0].clamp(lo, hi)])
            }
            2 => project_planar(&self.vertices, p),
            _ => {
                let shifted: Vec<Vector> = self.vertices.iter().map(|v| v - p).collect();
                let (x, _) = min_norm_point(&shifted)?;
                p + &x
            }
        };
        let r = p - &q;
        let bound = PROJ_CERT_TOL * (1.0 + r.norm());
        if let Some(v) = self.vertices.iter().find(|v| r.dot(&(*v - &q)) > bound) {
            return Err(GeomError::NumericalFailure(format!(
                "projection certificate violated at vertex {:?}",
                v.coords()
            )));
        }
        Ok(q)
    }

    /// Euclidean distance from `p` to the body.
    pub fn distance(&self, p: &Vector) -> Result<f64> {
        Ok(self.project(p)?.dist(p))
    }

    /// True iff `p` lies within distance `tol` of the body.
    pub fn contains(&self, p: &Vector, tol: f64) -> Result<bool> {
        Ok(self.distance(p)? <= tol)
    }

    /// True iff every vertex of `inner` lies in `self` up to `tol`.
    pub fn includes(&self, inner: &ConvexBody, tol: f64) -> Result<bool> {
        check_dim(self.dim, inner.dim)?;
        for v in &inner.vertices {
            if !self.contains(v, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Width of the boundary band used by [`ConvexBody::on_rel_boundary`].
    pub fn boundary_band(&self) -> f64 {
        1e-6 * self.diameter()
    }

    /// True iff `p` is within the boundary band of the body but outside the
    /// copy shrunk toward the centroid by the same band, so that relative
    /// boundaries of lower-dimensional bodies are detected within their
    /// affine hull. A single point has empty relative boundary.
    pub fn on_rel_boundary(&self, p: &Vector) -> Result<bool> {
        let diam = self.diameter();
        if diam == 0.0 {
            return Ok(false);
        }
        let band = self.boundary_band();
        if !self.contains(p, band)? {
            return Ok(false);
        }
        let shrunk = self.scale_about(&self.centroid(), 1.0 - band / diam)?;
        Ok(!shrunk.contains(&self.project_affine(p), 1e-12)?)
    }

    /// Orthogonal projection of `p` onto the affine hull.
    pub fn project_affine(&self, p: &Vector) -> Vector {
        if self.is_full_dim() {
            return p.clone();
        }
        let (c, basis) = self.affine_frame();
        let r = p - &c;
        basis.iter().fold(c, |acc, b| &acc + &(b * r.dot(b)))
    }

    /// True iff `p` lies in the relative interior, away from the band.
    pub fn in_rel_interior(&self, p: &Vector) -> Result<bool> {
        if self.diameter() == 0.0 {
            return self.contains(p, TAU_PT);
        }
        let band = self.boundary_band();
        Ok(self.contains(p, band)? && !self.on_rel_boundary(p)?)
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(a.dist(b));
            }
        }
        d
    }

    /// Centroid and an orthonormal basis of the affine hull.
    pub fn affine_frame(&self) -> (Vector, Vec<Vector>) {
        let c = self.centroid();
        if self.dim_affine == 0 {
            return (c, Vec::new());
        }
        let m = DMatrix::from_fn(self.vertices.len(), self.dim, |r, k| self.vertices[r][k] - c[k]);
        let svd = m.svd(false, true);
        let vt = svd.v_t.expect("requested right singular vectors");
        let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
        idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let basis = idx
            .into_iter()
            .take(self.dim_affine)
            .map(|i| Vector::raw(vt.row(i).iter().copied().collect()))
            .collect();
        (c, basis)
    }

    /// Average of the vertices (lies in the relative interior).
    pub fn centroid(&self) -> Vector {
        centroid_of(&self.vertices)
    }

    pub fn translate(&self, t: &Vector) -> Result<ConvexBody> {
        check_dim(self.dim, t.dim())?;
        hull(&self.vertices.iter().map(|v| v + t).collect::<Vec<_>>())
    }

    /// Homothety with center `c` and ratio `s`.
    pub fn scale_about(&self, c: &Vector, s: f64) -> Result<ConvexBody> {
        check_dim(self.dim, c.dim())?;
        hull(
            &self
                .vertices
                .iter()
                .map(|v| Vector::lerp(c, v, s))
                .collect::<Vec<_>>(),
        )
    }

    /// hull(self ∪ {p})
    pub fn with_point(&self, p: &Vector) -> Result<ConvexBody> {
        check_dim(self.dim, p.dim())?;
        let mut pts = self.vertices.clone();
        pts.push(p.clone());
        hull(&pts)
    }

    /// Perimeter of a planar body; a segment counts both sides.
    pub fn perimeter_2d(&self) -> Result<f64> {
        check_dim(2, self.dim)?;
        let m = self.vertices.len();
        Ok(match m {
            1 => 0.0,
            2 => 2.0 * self.vertices[0].dist(&self.vertices[1]),
            _ => (0..m)
                .map(|i| self.vertices[i].dist(&self.vertices[(i + 1) % m]))
                .sum(),
        })
    }
}

/// Hausdorff distance between two bodies.
///
/// For polytopes the distance from one body to the other is maximized at a
/// vertex, so it suffices to project vertices.
pub fn hausdorff(a: &ConvexBody, b: &ConvexBody) -> Result<f64> {
    check_dim(a.dim, b.dim)?;
    let mut d = 0.0f64;
    for v in &a.vertices {
        d = d.max(b.distance(v)?);
    }
    for v in &b.vertices {
        d = d.max(a.distance(v)?);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn v2(x: f64, y: f64) -> Vector {
        Vector::from([x, y])
    }

    fn unit_square() -> ConvexBody {
        hull(&[v2(0.0, 0.0), v2(1.0, 0.0), v2(1.0, 1.0), v2(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn hull_drops_interior_point() {
        let k = hull(&[v2(0.0, 0.0), v2(1.0, 0.0), v2(0.5, 0.25), v2(0.0, 1.0)]).unwrap();
        assert_eq!(k.vertices(), &[v2(0.0, 0.0), v2(1.0, 0.0), v2(0.0, 1.0)]);
        assert_eq!(k.dim_affine(), 2);
    }

    #[test]
    fn hull_singleton_and_errors() {
        let k = hull(&[v2(3.0, 4.0)]).unwrap();
        assert_eq!(k.vertices().len(), 1);
        assert_eq!(k.dim_affine(), 0);
        assert!(matches!(hull(&[]), Err(GeomError::InvalidInput(_))));
        assert!(matches!(
            hull(&[v2(0.0, 0.0), Vector::from([1.0, 2.0, 3.0])]),
            Err(GeomError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hull_collinear_and_duplicates() {
        let k = hull(&[v2(0.0, 0.0), v2(2.0, 0.0), v2(1.0, 0.0), v2(2.0, 1e-12)]).unwrap();
        assert_eq!(k.vertices().len(), 2);
        assert_eq!(k.dim_affine(), 1);
    }

    #[test]
    fn hull_3d_cube_with_interior() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(Vector::from([
                (i & 1) as f64,
                ((i >> 1) & 1) as f64,
                ((i >> 2) & 1) as f64,
            ]));
        }
        pts.push(Vector::from([0.5, 0.5, 0.5]));
        pts.push(Vector::from([0.5, 0.5, 1.0]));
        pts.push(Vector::from([1.0, 0.5, 1.0]));
        let k = hull(&pts).unwrap();
        assert_eq!(k.vertices().len(), 8);
        assert_eq!(k.dim_affine(), 3);
        let again = hull(k.vertices()).unwrap();
        assert_eq!(again, k);
    }

    #[test]
    fn support_examples() {
        let sq = hull(&[v2(1.0, 1.0), v2(-1.0, 1.0), v2(-1.0, -1.0), v2(1.0, -1.0)]).unwrap();
        assert_eq!(sq.support(&v2(1.0, 0.0)).unwrap(), 1.0);
        let seg = hull(&[v2(0.0, 0.0), v2(2.0, 0.0)]).unwrap();
        for k in 0..16 {
            let t = k as f64 * 0.4;
            let s = seg.support(&Vector::polar(t)).unwrap();
            assert_abs_diff_eq!(s, (2.0 * t.cos()).max(0.0), epsilon = 1e-15);
        }
        assert!(sq.support(&Vector::from([1.0])).is_err());
    }

    #[test]
    fn contains_examples() {
        let sq = unit_square();
        assert!(sq.contains(&v2(0.5, 0.5), 0.0).unwrap());
        assert!(!sq.contains(&v2(1.0 + 1e-3, 0.5), 1e-6).unwrap());
        assert!(sq.contains(&v2(1.0 + 1e-9, 0.5), 1e-6).unwrap());
    }

    #[test]
    fn project_examples() {
        let sq = unit_square();
        assert_eq!(sq.project(&v2(2.0, 2.0)).unwrap(), v2(1.0, 1.0));
        assert_eq!(sq.project(&v2(0.3, 0.6)).unwrap(), v2(0.3, 0.6));
        let cube = hull(&[
            Vector::from([0.0, 0.0, 0.0]),
            Vector::from([1.0, 0.0, 0.0]),
            Vector::from([0.0, 1.0, 0.0]),
            Vector::from([1.0, 1.0, 0.0]),
            Vector::from([0.0, 0.0, 1.0]),
            Vector::from([1.0, 0.0, 1.0]),
            Vector::from([0.0, 1.0, 1.0]),
            Vector::from([1.0, 1.0, 1.0]),
        ])
        .unwrap();
        let q = cube.project(&Vector::from([2.0, 0.5, -1.0])).unwrap();
        assert_abs_diff_eq!(q.dist(&Vector::from([1.0, 0.5, 0.0])), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn hausdorff_translated_squares() {
        let a = unit_square();
        let b = a.translate(&v2(0.3, 0.0)).unwrap();
        assert_abs_diff_eq!(hausdorff(&a, &b).unwrap(), 0.3, epsilon = 1e-14);
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn body_json_canonicalizes() {
        let s = r#"{"dim":2,"vertices":[[0,1],[0,0],[1,0],[0.2,0.2]]}"#;
        let k: ConvexBody = serde_json::from_str(s).unwrap();
        assert_eq!(k.vertices().len(), 3);
        let back: ConvexBody = serde_json::from_str(&serde_json::to_string(&k).unwrap()).unwrap();
        assert_eq!(back, k);
        assert!(serde_json::from_str::<ConvexBody>(r#"{"dim":3,"vertices":[[0,1]]}"#).is_err());
    }
}
