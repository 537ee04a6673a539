//! Ambient geometry: vectors, V-polytopes, support functions, projection and
//! Hausdorff distance.

mod body;
mod project;
pub mod shapes;
mod vector;

pub use body::{hausdorff, hull, ConvexBody, PROJ_CERT_TOL, TAU_PT};
pub use project::MAX_ITER;
pub use vector::{omega, Vector, MAX_DIM};

/// Support function of `k` at `x`.
pub fn support(k: &ConvexBody, x: &Vector) -> crate::Result<f64> {
    k.support(x)
}

/// Nearest point of `k` to `p`.
pub fn project(k: &ConvexBody, p: &Vector) -> crate::Result<Vector> {
    k.project(p)
}

/// True iff `p` is within `tol` of `k`.
pub fn contains(k: &ConvexBody, p: &Vector, tol: f64) -> crate::Result<bool> {
    k.contains(p, tol)
}

/// True iff every vertex of `b` is within `tol` of `a`.
pub fn includes(a: &ConvexBody, b: &ConvexBody, tol: f64) -> crate::Result<bool> {
    a.includes(b, tol)
}
