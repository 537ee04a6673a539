use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::family::{Family, Stratification};
use crate::geom::ConvexBody;
use crate::sep::Polyline;

/// One line of a JSON-lines stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    Curve(Polyline),
    Family(Family),
    Stratification(Stratification),
    /// An ordered list of bodies that need not be nested.
    Bodies { bodies: Vec<ConvexBody> },
    Report(serde_json::Value),
}

impl Record {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn parse(line: &str) -> Result<Record> {
        if let Ok(r) = serde_json::from_str::<Record>(line) {
            return Ok(r);
        }
        // Bare objects without the tag.
        if let Ok(f) = serde_json::from_str::<Family>(line) {
            return Ok(Record::Family(f));
        }
        if let Ok(c) = serde_json::from_str::<Polyline>(line) {
            return Ok(Record::Curve(c));
        }
        if let Ok(s) = serde_json::from_str::<Stratification>(line) {
            return Ok(Record::Stratification(s));
        }
        serde_json::from_str::<Record>(line)
            .map_err(|e| GeomError::InvalidInput(format!("unreadable record: {e}")))
    }
}

/// Parses every non-empty line.
pub fn read_records(input: &mut dyn BufRead) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    let mut buf = String::new();
    loop {
        buf.clear();
        let n = input
            .read_line(&mut buf)
            .map_err(|e| GeomError::InvalidInput(format!("read failed: {e}")))?;
        if n == 0 {
            break;
        }
        let line = buf.trim();
        if !line.is_empty() {
            out.push(Record::parse(line)?);
        }
    }
    Ok(out)
}

/// Records from a file: JSON lines, a single JSON document, or a CSV curve.
pub fn read_file(path: &Path) -> Result<Vec<Record>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| GeomError::InvalidInput(format!("{}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "csv") {
        return Ok(vec![Record::Curve(Polyline::from_csv(text.as_bytes())?)]);
    }
    if let Ok(r) = Record::parse(text.trim()) {
        return Ok(vec![r]);
    }
    read_records(&mut text.as_bytes())
}

pub fn first_curve(records: &[Record]) -> Option<&Polyline> {
    records.iter().find_map(|r| match r {
        Record::Curve(c) => Some(c),
        _ => None,
    })
}

pub fn first_family(records: &[Record]) -> Option<&Family> {
    records.iter().find_map(|r| match r {
        Record::Family(f) => Some(f),
        _ => None,
    })
}

/// Bodies of the first family, stratification or body list.
pub fn first_bodies(records: &[Record]) -> Option<Vec<ConvexBody>> {
    records.iter().find_map(|r| match r {
        Record::Family(f) => Some(f.bodies().to_vec()),
        Record::Stratification(s) => Some(s.bodies().to_vec()),
        Record::Bodies { bodies } => Some(bodies.clone()),
        _ => None,
    })
}
