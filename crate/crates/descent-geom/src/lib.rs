//! Steepest-descent curves for nested families of convex polytopes.
//!
//! Modules build on each other: [`geom`] (polytopes), [`cones`],
//! [`mean_width`], [`sep`] (self-expanding paths), [`family`] and
//! [`descent`]. The [`cli`] module backs the `descent-geom` binary.

pub mod cli;
pub mod cones;
pub mod descent;
pub mod error;
pub mod family;
pub mod geom;
pub mod mean_width;
pub mod sep;

pub use error::{GeomError, Result};
pub use geom::{ConvexBody, Vector};
