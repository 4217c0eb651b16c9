use std::fmt::Write as _;

use crate::polyhedra::Polyhedron;
use crate::presymlin::{format_vector, Subspace};

/// Float formatting shared by every float section: 12 significant digits.
pub fn float(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn floats(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| float(x)).collect();
    format!("({})", parts.join(", "))
}

/// Plain-text report assembled section by section.
#[derive(Default)]
pub struct Report {
    text: String,
}

impl Report {
    pub fn new(name: &str, seed: u64, analyses: &[&str]) -> Self {
        let mut r = Report::default();
        r.line("momentlab report");
        r.line(&format!("scenario: {name}"));
        r.line(&format!("seed: {seed}"));
        r.line(&format!(
            "analyses: {}",
            if analyses.is_empty() {
                "none".into()
            } else {
                analyses.join(", ")
            }
        ));
        r
    }

    pub fn section(&mut self, title: &str) {
        let _ = write!(self.text, "\n== {title} ==\n");
    }

    pub fn line(&mut self, s: &str) {
        self.text.push_str(s);
        self.text.push('\n');
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.text, "{key}: {value}");
    }

    pub fn subspace(&mut self, key: &str, s: &Subspace) {
        self.kv(key, s);
    }

    pub fn polyhedron(&mut self, p: &Polyhedron) {
        if p.is_empty() {
            self.line("  empty");
            return;
        }
        for h in p.equalities() {
            self.line(&format!(
                "  eq   {} . x = {}",
                format_vector(&h.normal),
                h.offset
            ));
        }
        for h in p.halfspaces() {
            self.line(&format!(
                "  ineq {} . x >= {}",
                format_vector(&h.normal),
                h.offset
            ));
        }
        let v = p.vrep();
        for x in &v.vertices {
            self.line(&format!("  vertex {}", format_vector(x)));
        }
        for x in &v.rays {
            self.line(&format!("  ray    {}", format_vector(x)));
        }
        for x in &v.lines {
            self.line(&format!("  line   {}", format_vector(x)));
        }
    }

    pub fn yes_no(b: bool) -> &'static str {
        if b {
            "yes"
        } else {
            "no"
        }
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// `x,y[,z]` rows with a header.
pub fn csv(points: &[Vec<f64>]) -> String {
    let d = points.first().map_or(2, |p| p.len());
    let header = ["x", "y", "z", "w"][..d.min(4)].join(",");
    let mut out = header + "\n";
    for p in points {
        let row: Vec<String> = p.iter().map(|&v| float(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

const SIZE: f64 = 400.0;
const MARGIN: f64 = 30.0;

/// Plane picture: orthant axes and one polyline per point list.
pub fn svg(polylines: &[(Vec<[f64; 2]>, bool)], title: &str) -> String {
    let mut hi: f64 = 1.0;
    for (pl, _) in polylines {
        for p in pl {
            hi = hi.max(p[0]).max(p[1]);
        }
    }
    let scale = (SIZE - 2.0 * MARGIN) / (hi * 1.05);
    let map = |p: &[f64; 2]| (MARGIN + p[0] * scale, SIZE - MARGIN - p[1] * scale);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "<title>{title}</title>");
    let (ox, oy) = map(&[0.0, 0.0]);
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{ox:.3}" y1="{oy:.3}" x2="{:.3}" y2="{oy:.3}" stroke="black"/>"#,
        SIZE - MARGIN / 2.0
    );
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{ox:.3}" y1="{oy:.3}" x2="{ox:.3}" y2="{:.3}" stroke="black"/>"#,
        MARGIN / 2.0
    );
    for (pl, closed) in polylines {
        let pts: Vec<String> = pl
            .iter()
            .map(|p| {
                let (x, y) = map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let tag = if *closed { "polygon" } else { "polyline" };
        let _ = writeln!(
            s,
            r#"<{tag} points="{}" fill="none" stroke="steelblue"/>"#,
            pts.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_has_twelve_digits() {
        assert_eq!(float(1.0), "1.00000000000e0");
        assert_eq!(float(-0.125), "-1.25000000000e-1");
    }

    #[test]
    fn csv_header_and_rows() {
        let s = csv(&[vec![1.0, 0.0], vec![0.5, 0.5]]);
        assert!(s.starts_with("x,y\n1.00000000000e0,0.00000000000e0\n"));
        assert!(csv(&[vec![0.0, 0.0, 1.0]]).starts_with("x,y,z\n"));
    }

    #[test]
    fn svg_has_axes_and_polyline() {
        let s = svg(&[(vec![[1.0, 0.0], [0.0, 1.0]], false)], "segment");
        assert_eq!(s.matches("class=\"axis\"").count(), 2);
        assert_eq!(s.matches("<polyline").count(), 1);
    }
}
