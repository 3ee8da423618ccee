//! Minimal self-contained SVG line charts; no rendering dependencies.

use std::fmt::Write as _;

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub color: &'static str,
    pub markers: bool,
}

pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

const W: f64 = 760.0;
const H: f64 = 520.0;
const ML: f64 = 70.0;
const MR: f64 = 20.0;
const MT: f64 = 40.0;
const MB: f64 = 55.0;

pub const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

impl Chart {
    pub fn render(&self) -> String {
        let tx = |v: f64| if self.log_x { v.log10() } else { v };
        let ty = |v: f64| if self.log_y { v.log10() } else { v };
        let mut xs: Vec<f64> = Vec::new();
        let mut ys: Vec<f64> = Vec::new();
        for s in &self.series {
            for &(x, y) in &s.points {
                if (self.log_x && x <= 0.0) || (self.log_y && y <= 0.0) {
                    continue;
                }
                xs.push(tx(x));
                ys.push(ty(y));
            }
        }
        let (x0, x1) = span(&xs);
        let (y0, y1) = span(&ys);
        let px = |x: f64| ML + (tx(x) - x0) / (x1 - x0) * (W - ML - MR);
        let py = |y: f64| H - MB - (ty(y) - y0) / (y1 - y0) * (H - MT - MB);

        let mut out = String::new();
        let _ = writeln!(
            out,
            r##"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"##
        );
        let _ = writeln!(out, r##"<rect width="{W}" height="{H}" fill="white"/>"##);
        let _ = writeln!(
            out,
            r##"<text x="{}" y="22" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"##,
            W / 2.0,
            xml(&self.title)
        );
        // frame
        let _ = writeln!(
            out,
            r##"<rect x="{ML}" y="{MT}" width="{}" height="{}" fill="none" stroke="#333"/>"##,
            W - ML - MR,
            H - MT - MB
        );
        // axis ticks
        for t in ticks(x0, x1, self.log_x) {
            let x = ML + (t - x0) / (x1 - x0) * (W - ML - MR);
            let label = tick_label(t, self.log_x);
            let _ = writeln!(
                out,
                r##"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#ccc"/>"##,
                MT,
                H - MB
            );
            let _ = writeln!(
                out,
                r##"<text x="{x}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{label}</text>"##,
                H - MB + 16.0
            );
        }
        for t in ticks(y0, y1, self.log_y) {
            let y = H - MB - (t - y0) / (y1 - y0) * (H - MT - MB);
            let label = tick_label(t, self.log_y);
            let _ = writeln!(
                out,
                r##"<line x1="{ML}" y1="{y}" x2="{}" y2="{y}" stroke="#ccc"/>"##,
                W - MR
            );
            let _ = writeln!(
                out,
                r##"<text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="11">{label}</text>"##,
                ML - 6.0,
                y + 4.0
            );
        }
        let _ = writeln!(
            out,
            r##"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"##,
            W / 2.0,
            H - 12.0,
            xml(&self.x_label)
        );
        let _ = writeln!(
            out,
            r##"<text x="16" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 {})">{}</text>"##,
            H / 2.0,
            H / 2.0,
            xml(&self.y_label)
        );
        // series
        for s in &self.series {
            let pts: Vec<(f64, f64)> = s
                .points
                .iter()
                .filter(|&&(x, y)| !(self.log_x && x <= 0.0) && !(self.log_y && y <= 0.0))
                .map(|&(x, y)| (px(x), py(y)))
                .collect();
            if s.markers {
                for &(x, y) in &pts {
                    let _ = writeln!(
                        out,
                        r##"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="none" stroke="{}" stroke-width="1.5"/>"##,
                        s.color
                    );
                }
            } else {
                let path: String = pts
                    .iter()
                    .enumerate()
                    .map(|(i, (x, y))| {
                        format!("{}{x:.2},{y:.2}", if i == 0 { "M" } else { "L" })
                    })
                    .collect::<Vec<_>>()
                    .join(" ");
                let _ = writeln!(
                    out,
                    r##"<path d="{path}" fill="none" stroke="{}" stroke-width="1.8"/>"##,
                    s.color
                );
            }
        }
        // legend
        let mut ly = MT + 14.0;
        for s in &self.series {
            let _ = writeln!(
                out,
                r##"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"/>"##,
                ML + 10.0,
                ML + 34.0,
                s.color
            );
            let _ = writeln!(
                out,
                r##"<text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>"##,
                ML + 40.0,
                ly + 4.0,
                xml(&s.label)
            );
            ly += 15.0;
        }
        out.push_str("</svg>\n");
        out
    }
}

fn span(vals: &[f64]) -> (f64, f64) {
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        let pad = (hi - lo) * 0.05;
        (lo - pad, hi + pad)
    }
}

fn ticks(lo: f64, hi: f64, log: bool) -> Vec<f64> {
    if log {
        let a = lo.floor() as i64;
        let b = hi.ceil() as i64;
        (a..=b).map(|e| e as f64).filter(|e| *e >= lo && *e <= hi).collect()
    } else {
        let step = nice_step(hi - lo);
        let mut t = (lo / step).ceil() * step;
        let mut out = Vec::new();
        while t <= hi {
            out.push(t);
            t += step;
        }
        out
    }
}

fn nice_step(range: f64) -> f64 {
    let raw = range / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    let m = if r < 1.5 {
        1.0
    } else if r < 3.5 {
        2.0
    } else if r < 7.5 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn tick_label(t: f64, log: bool) -> String {
    if log {
        format!("1e{}", t as i64)
    } else if t.abs() >= 1000.0 || (t != 0.0 && t.abs() < 0.01) {
        format!("{t:.1e}")
    } else {
        format!("{t}")
    }
}

fn xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
