//! SVG 1.1 drawing of a family with its piercing points and witness.

use std::fmt::Write;

use crate::bodies::{BBox, Body, Family};
use crate::certificate::PierceCertificate;
use crate::error::{Error, Result};
use crate::geom::scalar::to_f64;

const WIDTH: f64 = 800.0;

/// Members filled at 40% opacity, witness members outlined, points drawn as
/// crosses. The y axis points up.
pub fn render(f: &Family, cert: Option<&PierceCertificate>) -> Result<String> {
    if f.dim() != 2 {
        return Err(Error::InvalidFamily(format!("cannot draw a {}-dimensional family", f.dim())));
    }
    let bodies: Vec<Body> = (0..f.len()).map(|i| f.realize(i)).collect();
    let bounds = bodies.iter().map(Body::bbox).reduce(|a, b| a.union(&b)).expect("nonempty family");
    let BBox { lo, hi } = bounds;
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let pad = span * 0.05;
    let (x0, y0) = (lo[0] - pad, -hi[1] - pad);
    let (w, h) = (hi[0] - lo[0] + 2.0 * pad, hi[1] - lo[1] + 2.0 * pad);
    let stroke = span / 400.0;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{:.0}" viewBox="{x0} {y0} {w} {h}">"#,
        WIDTH * h / w
    );
    let _ = writeln!(out, r#"<g fill="steelblue" fill-opacity="0.4" stroke="navy" stroke-width="{stroke}">"#);
    for b in &bodies {
        out.push_str(&shape(b));
    }
    out.push_str("</g>\n");

    if let Some(c) = cert {
        let _ = writeln!(out, r#"<g fill="none" stroke="darkorange" stroke-width="{}">"#, 3.0 * stroke);
        for &i in &c.witness {
            if let Some(b) = bodies.get(i) {
                out.push_str(&shape(b));
            }
        }
        out.push_str("</g>\n");
        let arm = span / 80.0;
        let _ = writeln!(out, r#"<g stroke="crimson" stroke-width="{}">"#, 2.0 * stroke);
        for p in &c.points {
            let v = p.to_f64();
            let (x, y) = (v[0], -v[1]);
            let _ = writeln!(
                out,
                r#"<path d="M{} {}L{} {}M{} {}L{} {}"/>"#,
                x - arm,
                y - arm,
                x + arm,
                y + arm,
                x - arm,
                y + arm,
                x + arm,
                y - arm
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn shape(b: &Body) -> String {
    match b {
        Body::Polygon(p) => {
            let pts: Vec<String> = p
                .vertices()
                .iter()
                .map(|v| {
                    let (x, y) = v.to_f64();
                    format!("{x},{}", -y)
                })
                .collect();
            format!("<polygon points=\"{}\"/>\n", pts.join(" "))
        }
        Body::Disk { center, radius } => {
            let (x, y) = center.to_f64();
            format!("<circle cx=\"{x}\" cy=\"{}\" r=\"{}\"/>\n", -y, to_f64(radius))
        }
        Body::Box { lo, hi } => {
            let (x, y) = (to_f64(&lo[0]), to_f64(&hi[1]));
            let (w, h) = (to_f64(&hi[0]) - x, y - to_f64(&lo[1]));
            format!("<rect x=\"{x}\" y=\"{}\" width=\"{w}\" height=\"{h}\"/>\n", -y)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::five_square_cycle;
    use crate::pierce::{pierce, PierceOptions};

    #[test]
    fn draws_every_member_point_and_witness() {
        let f = five_square_cycle();
        let c = pierce(&f, &PierceOptions::default()).unwrap();
        let svg = render(&f, Some(&c)).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polygon").count(), f.len() + c.witness.len());
        assert_eq!(svg.matches("<path").count(), c.points.len());
        assert!(svg.contains("fill-opacity=\"0.4\""));
    }

    #[test]
    fn rejects_higher_dimensional_boxes() {
        let base = crate::bodies::ConvexBody::axis_box(vec![crate::geom::scalar::int(1); 3]).unwrap();
        let f = Family::translates(base, vec![vec![crate::geom::scalar::int(0); 3]]).unwrap();
        assert!(render(&f, None).is_err());
    }
}
