use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::geom::Vector;

/// Circular cone K_{v,δ}: directions at angle at most δ from the axis v.
#[derive(Clone, Debug, Serialize)]
pub struct CircularCone {
    axis: Vector,
    opening: f64,
}

impl CircularCone {
    pub fn new(axis: &Vector, opening: f64) -> Result<Self> {
        let axis = axis
            .normalized()
            .ok_or_else(|| GeomError::InvalidInput("zero axis".into()))?;
        if !(0.0..=std::f64::consts::PI).contains(&opening) {
            return Err(GeomError::InvalidInput(format!("opening {opening}")));
        }
        Ok(CircularCone { axis, opening })
    }

    pub fn axis(&self) -> &Vector {
        &self.axis
    }

    pub fn opening(&self) -> f64 {
        self.opening
    }

    /// Exact test by angle comparison.
    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        x.norm() == 0.0 || x.angle_to(&self.axis) <= self.opening + tol
    }

    /// The dual of a convex circular cone has the same axis and opening π/2 − δ.
    pub fn dual(&self) -> Result<CircularCone> {
        if self.opening > std::f64::consts::FRAC_PI_2 {
            return Err(GeomError::InvalidInput(
                "circular cone with opening above π/2 is not convex".into(),
            ));
        }
        CircularCone::new(&self.axis, std::f64::consts::FRAC_PI_2 - self.opening)
    }
}
