//! SVG rendering of a trace.

use std::fmt::Write;

use crate::trace::{EventKind, TraceEvent};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;
const COLORS: [&str; 4] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd"];

struct View {
    min: [f64; 2],
    scale: f64,
}

impl View {
    fn fit(events: &[TraceEvent]) -> View {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        let pts = events.iter().flat_map(|e| e.pos.iter().copied().chain(e.dest));
        for p in pts {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        if !lo[0].is_finite() {
            lo = [0.0; 2];
            hi = [1.0; 2];
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
        View { min: lo, scale: (SIZE - 2.0 * MARGIN) / span }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (MARGIN + (p[0] - self.min[0]) * self.scale, SIZE - MARGIN - (p[1] - self.min[1]) * self.scale)
    }
}

/// One polyline per robot, hollow start and filled end markers, and a small
/// cross at every computed destination.
pub fn render_svg(events: &[TraceEvent]) -> String {
    let view = View::fit(events);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    for robot in 0..4 {
        let color = COLORS[robot];
        let mut path: Vec<[f64; 2]> = Vec::new();
        for e in events {
            let p = e.pos[robot];
            if path.last() != Some(&p) {
                path.push(p);
            }
        }
        let Some((&first, &last)) = path.first().zip(path.last()) else { continue };
        let pts: Vec<String> = path
            .iter()
            .map(|&p| {
                let (x, y) = view.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        for e in events.iter().filter(|e| e.kind == EventKind::Compute && e.robot == Some(robot)) {
            if let Some(d) = e.dest {
                let (x, y) = view.map(d);
                let _ = writeln!(
                    s,
                    r#"<path d="M{:.3} {:.3} l6 6 m0 -6 l-6 6" stroke="{color}" stroke-width="1" opacity="0.6"/>"#,
                    x - 3.0,
                    y - 3.0
                );
            }
        }
        let (x0, y0) = view.map(first);
        let (x1, y1) = view.map(last);
        let _ = writeln!(s, r#"<circle cx="{x0:.3}" cy="{y0:.3}" r="6" fill="none" stroke="{color}" stroke-width="2"/>"#);
        let _ = writeln!(s, r#"<circle cx="{x1:.3}" cy="{y1:.3}" r="5" fill="{color}"/>"#);
        let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}" font-size="14" fill="{color}">{robot}</text>"#, x0 + 8.0, y0 - 8.0);
    }
    s.push_str("</svg>\n");
    s
}
