use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::geom::{Vector, TAU_PT};

/// An ordered polygonal path; the order of `points` is the path order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolylineJson")]
pub struct Polyline {
    dim: usize,
    points: Vec<Vector>,
}

#[derive(Deserialize)]
struct PolylineJson {
    dim: usize,
    points: Vec<Vector>,
}

impl TryFrom<PolylineJson> for Polyline {
    type Error = GeomError;
    fn try_from(j: PolylineJson) -> Result<Self> {
        let p = Polyline::new(j.points)?;
        if p.dim != j.dim {
            return Err(GeomError::DimensionMismatch {
                expected: j.dim,
                got: p.dim,
            });
        }
        Ok(p)
    }
}

impl Polyline {
    /// Drops consecutive points closer than τ_pt.
    pub fn new(points: Vec<Vector>) -> Result<Self> {
        let dim = points
            .first()
            .ok_or_else(|| GeomError::InvalidInput("empty polyline".into()))?
            .dim();
        let mut kept: Vec<Vector> = Vec::with_capacity(points.len());
        for p in points {
            if p.dim() != dim {
                return Err(GeomError::DimensionMismatch { expected: dim, got: p.dim() });
            }
            if kept.last().is_none_or(|q| q.dist(&p) > TAU_PT) {
                kept.push(p);
            }
        }
        Ok(Polyline { dim, points: kept })
    }

    /// One point per row, comma separated, no header; `#` starts a comment.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut points = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| GeomError::InvalidInput(format!("csv: {e}")))?;
            let coords = rec
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|e| GeomError::InvalidInput(format!("csv field {f:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            points.push(Vector::new(coords)?);
        }
        Polyline::new(points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn first(&self) -> &Vector {
        &self.points[0]
    }

    /// The end point.
    pub fn last(&self) -> &Vector {
        self.points.last().expect("polyline is nonempty")
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Consecutive vertex pairs.
    pub fn segments(&self) -> impl Iterator<Item = (&Vector, &Vector)> + '_ {
        self.points.windows(2).map(|w| (&w[0], &w[1]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| a.dist(b)).sum()
    }

    /// Arc length at each vertex, starting from 0.
    pub fn cumulative_lengths(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = vec![0.0];
        for (a, b) in self.segments() {
            acc += a.dist(b);
            out.push(acc);
        }
        out
    }

    /// Same path traversed in the opposite direction.
    pub fn reversed(&self) -> Polyline {
        let mut points = self.points.clone();
        points.reverse();
        Polyline { dim: self.dim, points }
    }
}
