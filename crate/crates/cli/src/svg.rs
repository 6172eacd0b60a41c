//! Static SVG figures: boundaries, obstacles, paths and labelled points.

use std::fmt::Write as _;

use relmetric::Point2;

#[derive(Default)]
pub struct Figure {
    polygons: Vec<(Vec<Point2>, &'static str, &'static str)>,
    lines: Vec<(Vec<Point2>, &'static str, f64)>,
    points: Vec<(Point2, String, &'static str)>,
}

impl Figure {
    pub fn polygon(&mut self, v: &[Point2], fill: &'static str, stroke: &'static str) -> &mut Self {
        self.polygons.push((v.to_vec(), fill, stroke));
        self
    }

    pub fn polyline(&mut self, v: &[Point2], stroke: &'static str, width: f64) -> &mut Self {
        if v.len() >= 2 {
            self.lines.push((v.to_vec(), stroke, width));
        }
        self
    }

    pub fn point(&mut self, p: Point2, label: impl Into<String>, color: &'static str) -> &mut Self {
        self.points.push((p, label.into(), color));
        self
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let all = self
            .polygons
            .iter()
            .flat_map(|p| p.0.iter())
            .chain(self.lines.iter().flat_map(|l| l.0.iter()))
            .chain(self.points.iter().map(|p| &p.0));
        let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in all {
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
        if !x0.is_finite() {
            return (0.0, 0.0, 1.0, 1.0);
        }
        let pad = 0.05 * (x1 - x0).max(y1 - y0).max(1e-9);
        (x0 - pad, y0 - pad, x1 + pad, y1 + pad)
    }

    pub fn render(&self) -> String {
        let (x0, y0, x1, y1) = self.bounds();
        let (w, h) = (x1 - x0, y1 - y0);
        let px = 800.0;
        let sc = px / w.max(h);
        let unit = 1.0 / sc;
        let f = |p: &Point2| format!("{:.6},{:.6}", p.x, p.y);
        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"#,
            w * sc,
            h * sc,
            w * sc,
            h * sc
        );
        let _ = writeln!(s, r#"<g transform="scale({sc:.6},{:.6}) translate({:.6},{:.6})">"#, -sc, -x0, -y1);
        for (v, fill, stroke) in &self.polygons {
            let pts: Vec<String> = v.iter().map(f).collect();
            let _ = writeln!(
                s,
                r#"<polygon points="{}" fill="{fill}" stroke="{stroke}" stroke-width="{:.6}"/>"#,
                pts.join(" "),
                1.5 * unit
            );
        }
        for (v, stroke, wd) in &self.lines {
            let pts: Vec<String> = v.iter().map(f).collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{:.6}"/>"#,
                pts.join(" "),
                wd * unit
            );
        }
        for (p, _, c) in &self.points {
            let _ = writeln!(s, r#"<circle cx="{:.6}" cy="{:.6}" r="{:.6}" fill="{c}"/>"#, p.x, p.y, 3.0 * unit);
        }
        let _ = writeln!(s, "</g>");
        for (p, label, _) in &self.points {
            if label.is_empty() {
                continue;
            }
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{}</text>"#,
                (p.x - x0) * sc + 5.0,
                (y1 - p.y) * sc - 5.0,
                escape(label)
            );
        }
        let _ = writeln!(s, "</svg>");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_elements() {
        let mut f = Figure::default();
        let sq = [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1.0, 1.0)];
        f.polygon(&sq, "none", "black").polyline(&sq[..2], "red", 2.0).point(sq[2], "a<b", "blue");
        let s = f.render();
        assert!(s.starts_with("<?xml"));
        assert!(s.contains("<polygon") && s.contains("<polyline") && s.contains("a&lt;b"));
        assert!(s.trim_end().ends_with("</svg>"));
    }
}
