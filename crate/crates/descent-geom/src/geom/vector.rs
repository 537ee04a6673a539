use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// Largest ambient dimension the library accepts.
pub const MAX_DIM: usize = 8;

/// A point or direction in R^n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Vector(Vec<f64>);

impl Vector {
    /// Validated constructor: 1 <= n <= 8, all entries finite.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(GeomError::InvalidInput(format!(
                "vector length {} outside 1..={MAX_DIM}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeomError::InvalidInput("non-finite coordinate".into()));
        }
        Ok(Vector(coords))
    }

    pub(crate) fn raw(coords: Vec<f64>) -> Self {
        Vector(coords)
    }

    pub(crate) fn from_iter_unchecked(it: impl Iterator<Item = f64>) -> Self {
        Vector(it.collect())
    }

    pub fn zeros(n: usize) -> Self {
        Vector(vec![0.0; n])
    }

    /// The i-th standard basis vector of R^n.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut c = vec![0.0; n];
        c[i] = 1.0;
        Vector(c)
    }

    /// Unit vector (cos a, sin a).
    pub fn polar(angle: f64) -> Self {
        Vector(vec![angle.cos(), angle.sin()])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(&self, other: &Vector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// `self / |self|`, or `None` for a (numerically) zero vector.
    pub fn normalized(&self) -> Option<Vector> {
        let n = self.norm();
        if n > 1e-300 {
            Some(self * (1.0 / n))
        } else {
            None
        }
    }

    /// `(1 - t) a + t b`
    pub fn lerp(a: &Vector, b: &Vector, t: f64) -> Vector {
        Vector(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| x + t * (y - x))
                .collect(),
        )
    }

    /// Angle in [0, π] between two nonzero vectors.
    pub fn angle_to(&self, other: &Vector) -> f64 {
        let c = self.dot(other) / (self.norm() * other.norm());
        c.clamp(-1.0, 1.0).acos()
    }

    /// Lexicographic comparison, used for canonical orderings.
    pub fn lex_cmp(&self, other: &Vector) -> std::cmp::Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }

    /// Parse "x,y,..." as used on the command line.
    pub fn parse(s: &str) -> Result<Vector> {
        let coords = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| GeomError::InvalidInput(format!("bad coordinate {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Vector::new(coords)
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = GeomError;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Vector::new(v)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

impl<const N: usize> From<[f64; N]> for Vector {
    fn from(a: [f64; N]) -> Self {
        Vector(a.to_vec())
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &Vector {
    type Output = Vector;
    fn mul(self, s: f64) -> Vector {
        Vector(self.0.iter().map(|a| a * s).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

impl Add for Vector {
    type Output = Vector;
    fn add(self, rhs: Vector) -> Vector {
        &self + &rhs
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(self, rhs: Vector) -> Vector {
        &self - &rhs
    }
}

impl Mul<f64> for Vector {
    type Output = Vector;
    fn mul(self, s: f64) -> Vector {
        &self * s
    }
}

/// Surface area of the unit sphere S^{k-1} in R^k: 2π^{k/2}/Γ(k/2).
///
/// Computed by the recursion ω_{k+2} = 2π ω_k / k from ω_1 = 2, ω_2 = 2π.
pub fn omega(k: usize) -> f64 {
    assert!(k >= 1, "omega is defined for k >= 1");
    let (mut w, mut j) = if k % 2 == 1 {
        (2.0, 1usize)
    } else {
        (2.0 * std::f64::consts::PI, 2usize)
    };
    while j < k {
        w *= 2.0 * std::f64::consts::PI / j as f64;
        j += 2;
    }
    w
}
