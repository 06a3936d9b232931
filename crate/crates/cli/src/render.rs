//! SVG drawing of a curve on a fixed 512×512 canvas, origin at the lower
//! left.

use std::fmt::Write;

use hilbert_atlas::{Cell, Curve};

pub const CANVAS: f64 = 512.0;

/// Centre of `cell` in canvas coordinates (y grows downwards in SVG).
fn centre(cell: Cell, cell_size: f64) -> (f64, f64) {
    (
        (f64::from(cell.col) + 0.5) * cell_size,
        CANVAS - (f64::from(cell.row) + 0.5) * cell_size,
    )
}

pub fn svg(curve: &Curve) -> String {
    let side = f64::from(curve.side());
    let cell_size = CANVAS / side;
    let stroke = CANVAS / (4.0 * side);
    let mut points = String::with_capacity(curve.len() * 16);
    for (i, &c) in curve.cells().iter().enumerate() {
        let (x, y) = centre(c, cell_size);
        if i > 0 {
            points.push(' ');
        }
        write!(points, "{x},{y}").unwrap();
    }
    let (ex, ey) = centre(curve.entry(), cell_size);
    let title = match curve.family() {
        Some(k) => format!("family {k}, order {}", curve.order()),
        None => format!("order {}", curve.order()),
    };
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"#
    )
    .unwrap();
    writeln!(out, "<title>{title}</title>").unwrap();
    // The arrowhead scales with the stroke, so it stays visible at every order.
    writeln!(
        out,
        r#"<defs><marker id="exit" viewBox="0 0 10 10" refX="5" refY="5" markerWidth="3" markerHeight="3" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="black"/></marker></defs>"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect width="{CANVAS}" height="{CANVAS}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<polyline fill="none" stroke="black" stroke-width="{stroke}" stroke-linejoin="round" marker-end="url(#exit)" points="{points}"/>"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<circle cx="{ex}" cy="{ey}" r="{}" fill="black"/>"#,
        1.5 * stroke
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use hilbert_atlas::{generate, Family};

    #[test]
    fn order_one_coordinates() {
        let s = svg(&generate(Family::HILBERT, 1).unwrap());
        assert!(s.contains(r#"points="128,384 128,128 384,128 384,384""#));
        assert!(s.contains(r#"stroke-width="64""#));
        assert!(s.contains(r#"<circle cx="128" cy="384" r="96""#));
    }

    #[test]
    fn deterministic() {
        let c = generate(Family::new(6).unwrap(), 3).unwrap();
        assert_eq!(svg(&c), svg(&c));
    }
}
