//! Static SVG figures of stripe arrangements.

use std::fmt::Write as _;

use stripecover::{Arrangement, Axis, Field, Scalar};

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

/// One layer: an arrangement drawn in a single colour.
pub struct Layer<'a> {
    pub arrangement: &'a Arrangement,
    pub colour: &'a str,
}

// all breakpoints together with 0 and 1
fn parameters(layers: &[Layer]) -> Vec<Scalar> {
    let mut ts: Vec<Scalar> = layers
        .iter()
        .flat_map(|l| l.arrangement.functions())
        .flat_map(|f| f.breakpoints().iter().cloned())
        .chain([Scalar::from_int(0), Scalar::from_int(1)])
        .collect();
    ts.sort_by(|a, b| a.partial_cmp(b).expect("rationals are ordered"));
    ts.dedup();
    ts
}

/// Renders the stripes of every layer as filled bands around their centre
/// lines, over the range of breakpoints (at least `[0, 1]`).
pub fn render(layers: &[Layer]) -> String {
    let ts = parameters(layers);
    let mut bands: Vec<(Axis, &str, Vec<(f64, f64, f64)>)> = Vec::new();
    for layer in layers {
        let a = layer.arrangement;
        let half = a.delta().to_f64_lossy() / 2.0;
        for f in a.functions() {
            let pts = ts
                .iter()
                .map(|t| {
                    let c = f.value(t).to_f64_lossy();
                    (t.to_f64_lossy(), c - half, c + half)
                })
                .collect();
            bands.push((a.axis(), layer.colour, pts));
        }
    }

    // bounding box in plane coordinates
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (axis, _, pts) in &bands {
        for &(t, a, b) in pts {
            for y in [a, b] {
                let (x, y) = match axis {
                    Axis::X1 => (t, y),
                    Axis::X2 => (y, t),
                };
                x0 = x0.min(x);
                x1 = x1.max(x);
                y0 = y0.min(y);
                y1 = y1.max(y);
            }
        }
    }
    if bands.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let scale = (SIZE - 2.0 * MARGIN) / (x1 - x0).max(y1 - y0).max(1e-9);
    let map = |axis: Axis, t: f64, y: f64| {
        let (x, y) = match axis {
            Axis::X1 => (t, y),
            Axis::X2 => (y, t),
        };
        (MARGIN + (x - x0) * scale, SIZE - MARGIN - (y - y0) * scale)
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (axis, colour, pts) in &bands {
        let mut poly = String::new();
        for &(t, a, _) in pts {
            let (x, y) = map(*axis, t, a);
            let _ = write!(poly, "{x:.2},{y:.2} ");
        }
        for &(t, _, b) in pts.iter().rev() {
            let (x, y) = map(*axis, t, b);
            let _ = write!(poly, "{x:.2},{y:.2} ");
        }
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{colour}" fill-opacity="0.3" stroke="{colour}" stroke-width="0.5"/>"#,
            poly.trim_end()
        );
        let mut line = String::new();
        for &(t, a, b) in pts {
            let (x, y) = map(*axis, t, (a + b) / 2.0);
            let _ = write!(line, "{x:.2},{y:.2} ");
        }
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1"/>"#,
            line.trim_end()
        );
    }
    out.push_str("</svg>\n");
    out
}
