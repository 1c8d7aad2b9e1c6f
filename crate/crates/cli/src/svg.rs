//! Minimal SVG 1.1 drawings of candidates, bisectors and region labels.

use std::fmt::Write;

use prefgeom::geometry::{to_f64, Bisector, Piece, Point2};

pub struct Label {
    pub at: Point2,
    pub text: String,
}

pub struct Scene<'a> {
    pub candidates: &'a [Point2],
    pub bisectors: &'a [Bisector],
    pub labels: Vec<Label>,
    /// Extra points that must be visible, such as intersection vertices.
    pub extent: Vec<Point2>,
}

fn fmt(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn xy(p: &Point2) -> (f64, f64) {
    (to_f64(&p.x), to_f64(&p.y))
}

/// Endpoints of a piece clipped to a reach around the view; rays and lines are extended.
fn piece_ends(piece: &Piece, reach: f64) -> ((f64, f64), (f64, f64)) {
    let (ox, oy) = xy(piece.origin());
    let (dx, dy) = xy(&piece.direction());
    let len = (dx * dx + dy * dy).sqrt();
    let (ux, uy) = (dx / len * reach, dy / len * reach);
    match piece {
        Piece::Segment { b, .. } => ((ox, oy), xy(b)),
        Piece::Ray { .. } => ((ox, oy), (ox + ux, oy + uy)),
        Piece::Line { .. } => ((ox - ux, oy - uy), (ox + ux, oy + uy)),
    }
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

/// Renders the scene. The y axis points up; the view box covers all points plus 10%.
pub fn render(scene: &Scene) -> String {
    let mut pts: Vec<(f64, f64)> = scene.candidates.iter().chain(&scene.extent).map(xy).collect();
    pts.extend(scene.labels.iter().map(|l| xy(&l.at)));
    pts.extend(scene.bisectors.iter().flat_map(|b| b.breakpoints()).map(|p| xy(&p)));
    let min_x = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let max_x = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let min_y = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max_y = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let span = (max_x - min_x).max(max_y - min_y).max(1.0);
    let margin = span * 0.1;
    let (vx, vy) = (min_x - margin, -(max_y + margin));
    let (vw, vh) = (max_x - min_x + 2.0 * margin, max_y - min_y + 2.0 * margin);
    let reach = 4.0 * span;
    let stroke = span / 250.0;
    let radius = span / 80.0;
    let font = span / 40.0;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}">"#,
        fmt(vx),
        fmt(vy),
        fmt(vw),
        fmt(vh)
    );
    let _ = writeln!(
        out,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="white"/>"#,
        fmt(vx),
        fmt(vy),
        fmt(vw),
        fmt(vh)
    );
    for (k, b) in scene.bisectors.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let mut d = String::new();
        for piece in b.pieces() {
            let ((x1, y1), (x2, y2)) = piece_ends(&piece, reach);
            let _ = write!(d, "M{} {} L{} {} ", fmt(x1), fmt(-y1), fmt(x2), fmt(-y2));
        }
        if let Bisector::Quadrant { m1, m2 } = b {
            let ((x1, y1), (x2, y2)) = (xy(m1), xy(m2));
            let _ = write!(d, "M{} {} L{} {} ", fmt(x1), fmt(-y1), fmt(x2), fmt(-y2));
        }
        let _ = writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="{colour}" stroke-width="{}"/>"#,
            d.trim_end(),
            fmt(stroke)
        );
    }
    for (k, c) in scene.candidates.iter().enumerate() {
        let (x, y) = xy(c);
        let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="{}" fill="black"/>"#, fmt(x), fmt(-y), fmt(radius));
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="{}" font-family="sans-serif">c{k}</text>"#,
            fmt(x + radius * 1.5),
            fmt(-y - radius * 1.5),
            fmt(font)
        );
    }
    for label in &scene.labels {
        let (x, y) = xy(&label.at);
        let _ = writeln!(
            out,
            r##"<text x="{}" y="{}" font-size="{}" font-family="sans-serif" fill="#444" text-anchor="middle">{}</text>"##,
            fmt(x),
            fmt(-y),
            fmt(font * 0.6),
            label.text
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use prefgeom::geometry::{build_bisector, NormTag};

    #[test]
    fn deterministic_and_well_formed() {
        let cands = [Point2::int(3, 3), Point2::int(8, 6)];
        let b = [build_bisector(NormTag::L1, &cands[0], &cands[1]).unwrap()];
        let scene = || Scene { candidates: &cands, bisectors: &b, labels: Vec::new(), extent: Vec::new() };
        let a = render(&scene());
        assert_eq!(a, render(&scene()));
        assert!(a.starts_with("<?xml"));
        assert!(a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<circle").count(), 2);
        assert_eq!(a.matches("<path").count(), 1);
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt(2.0), "2");
        assert_eq!(fmt(2.5), "2.5");
        assert_eq!(fmt(-0.00001), "0");
    }
}
