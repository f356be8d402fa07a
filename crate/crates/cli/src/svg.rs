//! Static SVG figures.

use std::fmt::Write;

use denjoy::hyperbolicity::ScanReport;
use denjoy::io::fmt17;
use denjoy::path::PolylinePath;
use denjoy::{GapDomain, PlanePoint};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const PAD: f64 = 40.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        PAD + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * PAD)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - PAD - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * PAD)
    }
}

fn open(reference: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n<!-- {reference} -->\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        WIDTH, HEIGHT, WIDTH, HEIGHT
    )
}

fn line(s: &mut String, a: (f64, f64), b: (f64, f64), style: &str) {
    let _ = writeln!(
        s,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" {style}/>",
        fmt17(a.0),
        fmt17(a.1),
        fmt17(b.0),
        fmt17(b.1)
    );
}

fn polyline(s: &mut String, pts: &[(f64, f64)], style: &str) {
    let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{},{}", fmt17(*x), fmt17(*y))).collect();
    let _ = writeln!(s, "<polyline points=\"{}\" fill=\"none\" {style}/>", coords.join(" "));
}

fn label(s: &mut String, x: f64, y: f64, anchor: &str, text: &str) {
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"{anchor}\">{text}</text>",
        fmt17(x),
        fmt17(y)
    );
}

/// The slice of the domain around `path`: boundary in black, gaps in grey,
/// path in blue.
pub fn geodesic_plot(domain: &GapDomain, path: &PolylinePath, reference: &str) -> String {
    let v = path.vertices();
    let fold = |f: fn(&PlanePoint) -> f64, init: f64, op: fn(f64, f64) -> f64| v.iter().map(f).fold(init, op);
    let (xa, xb) = (fold(|z| z.re, f64::INFINITY, f64::min), fold(|z| z.re, f64::NEG_INFINITY, f64::max));
    let (ya, yb) = (fold(|z| z.im, 0.0, f64::min), fold(|z| z.im, 0.0, f64::max));
    let span = (xb - xa).max(yb - ya).max(1e-12);
    let mut fr = Frame {
        x0: xa - 0.1 * span,
        x1: xb + 0.1 * span,
        y0: ya - 0.1 * span,
        y1: yb + 0.1 * span,
    };
    // equal scales on both axes
    let sx = (fr.x1 - fr.x0) / (WIDTH - 2.0 * PAD);
    let sy = (fr.y1 - fr.y0) / (HEIGHT - 2.0 * PAD);
    if sx > sy {
        let extra = sx * (HEIGHT - 2.0 * PAD) - (fr.y1 - fr.y0);
        fr.y0 -= 0.5 * extra;
        fr.y1 += 0.5 * extra;
    } else {
        let extra = sy * (WIDTH - 2.0 * PAD) - (fr.x1 - fr.x0);
        fr.x0 -= 0.5 * extra;
        fr.x1 += 0.5 * extra;
    }
    let mut s = open(reference);
    let axis = fr.py(0.0);
    line(&mut s, (fr.px(fr.x0), axis), (fr.px(fr.x1), axis), "stroke=\"#bbbbbb\" stroke-width=\"1\"");
    for c in domain.components() {
        let (lo, hi) = (c.lo.max(fr.x0), c.hi.min(fr.x1));
        if lo > hi {
            continue;
        }
        if lo == hi {
            let _ = writeln!(s, "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"black\"/>", fmt17(fr.px(lo)), fmt17(axis));
        } else {
            line(&mut s, (fr.px(lo), axis), (fr.px(hi), axis), "stroke=\"black\" stroke-width=\"3\"");
        }
    }
    let pts: Vec<(f64, f64)> = v.iter().map(|z| (fr.px(z.re), fr.py(z.im))).collect();
    polyline(&mut s, &pts, "stroke=\"#1f5fbf\" stroke-width=\"2\"");
    for p in [pts[0], pts[pts.len() - 1]] {
        let _ = writeln!(s, "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"#1f5fbf\"/>", fmt17(p.0), fmt17(p.1));
    }
    label(&mut s, PAD, HEIGHT - 10.0, "start", &format!("x from {} to {}", fmt17(fr.x0), fmt17(fr.x1)));
    s.push_str("</svg>\n");
    s
}

/// `m_n` against `log₂ n`.
pub fn scan_plot(report: &ScanReport, reference: &str) -> String {
    let pts: Vec<(f64, f64, usize)> = report
        .rows
        .iter()
        .filter_map(|r| r.m_n.map(|m| ((r.n as f64).log2(), m, r.n)))
        .collect();
    let mut s = open(reference);
    let xmax = pts.iter().map(|p| p.0).fold(1.0, f64::max);
    let ymax = pts.iter().map(|p| p.1).fold(1.0, f64::max);
    let fr = Frame {
        x0: 0.0,
        x1: xmax,
        y0: 0.0,
        y1: 1.1 * ymax,
    };
    let axes = "stroke=\"black\" stroke-width=\"1\"";
    line(&mut s, (fr.px(0.0), fr.py(0.0)), (fr.px(xmax), fr.py(0.0)), axes);
    line(&mut s, (fr.px(0.0), fr.py(0.0)), (fr.px(0.0), fr.py(fr.y1)), axes);
    for &(x, _, n) in &pts {
        label(&mut s, fr.px(x), fr.py(0.0) + 16.0, "middle", &n.to_string());
    }
    label(&mut s, fr.px(0.0) - 6.0, fr.py(ymax), "end", &fmt17(ymax));
    label(&mut s, WIDTH / 2.0, HEIGHT - 4.0, "middle", "n (log scale)");
    label(&mut s, PAD, PAD / 2.0, "start", &format!("m_n, metric {}", report.metric));
    let scaled: Vec<(f64, f64)> = pts.iter().map(|&(x, y, _)| (fr.px(x), fr.py(y))).collect();
    if scaled.len() > 1 {
        polyline(&mut s, &scaled, "stroke=\"#1f5fbf\" stroke-width=\"2\"");
    }
    for (x, y) in scaled {
        let _ = writeln!(s, "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"#1f5fbf\"/>", fmt17(x), fmt17(y));
    }
    s.push_str("</svg>\n");
    s
}
