use std::fmt::Write;

use crate::geom::{hull, ConvexBody, Vector};
use crate::sep::Polyline;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

fn planar(v: &Vector) -> (f64, f64) {
    (v[0], if v.dim() > 1 { v[1] } else { 0.0 })
}

/// Outline of a body in the (x1, x2) plane; bodies in R^3 and above are
/// drawn as the hull of their projected vertices.
fn outline(k: &ConvexBody) -> Vec<(f64, f64)> {
    if k.dim() == 2 {
        return k.vertices().iter().map(planar).collect();
    }
    let flat: Vec<Vector> = k
        .vertices()
        .iter()
        .map(|v| {
            let (x, y) = planar(v);
            Vector::from([x, y])
        })
        .collect();
    match hull(&flat) {
        Ok(h) => h.vertices().iter().map(planar).collect(),
        Err(_) => flat.iter().map(planar).collect(),
    }
}

/// Family outlines in grey with the curve on top.
pub fn render(bodies: &[ConvexBody], curve: Option<&Polyline>) -> String {
    let polys: Vec<Vec<(f64, f64)>> = bodies.iter().map(outline).collect();
    let line: Vec<(f64, f64)> = curve.map_or(Vec::new(), |c| c.points().iter().map(planar).collect());
    let all = polys.iter().flatten().chain(&line);
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &(x, y) in all {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let s = (SIZE - 2.0 * MARGIN) / span;
    let map = |(x, y): (f64, f64)| (MARGIN + (x - x0) * s, SIZE - MARGIN - (y - y0) * s);
    let pts = |ps: &[(f64, f64)]| {
        ps.iter()
            .map(|&p| {
                let (a, b) = map(p);
                format!("{a:.3},{b:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    for p in &polys {
        let _ = writeln!(
            out,
            r##"<polygon points="{}" fill="none" stroke="#999" stroke-width="0.6"/>"##,
            pts(p)
        );
    }
    if !line.is_empty() {
        let _ = writeln!(
            out,
            r##"<polyline points="{}" fill="none" stroke="#c00" stroke-width="1.8"/>"##,
            pts(&line)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::shapes;

    #[test]
    fn draws_everything() {
        let k = shapes::box_body(&Vector::from([0.0, 0.0]), &Vector::from([1.0, 1.0])).unwrap();
        let c = Polyline::new(vec![Vector::from([0.5, 0.5]), Vector::from([1.0, 1.0])]).unwrap();
        let s = render(&[k], Some(&c));
        assert!(s.starts_with("<svg") && s.contains("<polygon") && s.contains("<polyline"));
    }
}
