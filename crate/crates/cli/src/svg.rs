//! Static log-log plots.

use std::fmt::Write;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;

const LEFT: f64 = 80.0;
const RIGHT: f64 = 40.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 100.0;
const MODEL_POINTS: usize = 64;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PlotError {
    #[error("no positive samples to plot ({dropped} non-positive dropped)")]
    Empty { dropped: usize },
    #[error("a plot needs at least 2 samples, got {0}")]
    TooFew(usize),
}

/// Fitted model `C·(ln x)^k·x^{slope}` drawn over the samples.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotFit {
    /// Caption symbol of the exponent, e.g. `γ` (decay) or `β` (growth).
    pub symbol: &'static str,
    /// Exponent as reported, so the slope is `−value` for a decay fit.
    pub value: f64,
    pub slope: f64,
    pub c: f64,
    pub log_power: Option<f64>,
    pub residual: f64,
}

impl PlotFit {
    pub fn decay(gamma: f64, c: f64, log_power: Option<f64>, residual: f64) -> Self {
        Self { symbol: "γ", value: gamma, slope: -gamma, c, log_power, residual }
    }

    pub fn growth(beta: f64, c: f64, residual: f64) -> Self {
        Self { symbol: "β", value: beta, slope: beta, c, log_power: None, residual }
    }

    fn predict(&self, x: f64) -> f64 {
        let log = self.log_power.map_or(1.0, |k| x.ln().powf(k));
        self.c * log * x.powf(self.slope)
    }
}

/// Fixed-point decimal with a true minus sign; never prints `−0.00`.
pub fn signed(v: f64, decimals: usize) -> String {
    let s = format!("{:.*}", decimals, v.abs());
    if v < 0.0 && s.bytes().any(|b| (b'1'..=b'9').contains(&b)) {
        format!("\u{2212}{s}")
    } else {
        s
    }
}

fn sci(v: f64) -> String {
    let s = format!("{v:.3e}");
    s.replace('-', "\u{2212}")
}

struct Axis {
    lo: f64,
    hi: f64,
    from: f64,
    to: f64,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64>, from: f64, to: f64) -> Self {
        let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            let l = v.log10();
            (a.min(l), b.max(l))
        });
        if hi - lo < 1e-9 {
            lo -= 0.5;
            hi += 0.5;
        }
        let pad = 0.05 * (hi - lo);
        Self { lo: lo - pad, hi: hi + pad, from, to }
    }

    fn map(&self, v: f64) -> f64 {
        self.from + (v.log10() - self.lo) / (self.hi - self.lo) * (self.to - self.from)
    }

    fn contains(&self, v: f64) -> bool {
        let l = v.log10();
        l >= self.lo && l <= self.hi
    }

    /// Decade ticks, or the two ends when the range holds no decade.
    fn ticks(&self) -> Vec<f64> {
        let decades: Vec<f64> = (self.lo.ceil() as i32..=self.hi.floor() as i32)
            .map(|e| 10f64.powi(e))
            .collect();
        if decades.is_empty() {
            vec![10f64.powf(self.lo), 10f64.powf(self.hi)]
        } else {
            decades
        }
    }
}

fn tick_label(v: f64) -> String {
    let e = v.log10();
    if (e - e.round()).abs() < 1e-9 && (-3.0..=4.0).contains(&e.round()) {
        signed(v, (-e.round()).max(0.0) as usize)
    } else {
        sci(v)
    }
}

/// Renders `samples` with the fitted model as a standalone SVG document.
pub fn emit_plot(title: &str, samples: &[(f64, f64)], fit: &PlotFit) -> Result<String, PlotError> {
    let kept: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .collect();
    let dropped = samples.len() - kept.len();
    match kept.len() {
        0 => return Err(PlotError::Empty { dropped }),
        1 => return Err(PlotError::TooFew(1)),
        _ => {}
    }
    let x = Axis::new(kept.iter().map(|p| p.0), LEFT, WIDTH - RIGHT);
    let y = Axis::new(kept.iter().map(|p| p.1), HEIGHT - BOTTOM, TOP);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        s,
        r#"<path d="M{x0:.2},{y1:.2} L{x0:.2},{y0:.2} L{x1:.2},{y0:.2}" fill="none" stroke="black"/>"#
    );
    for t in x.ticks() {
        let px = x.map(t);
        let _ = writeln!(s, r#"<line x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#, y0 + 5.0);
        let _ = writeln!(s, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, y0 + 20.0, tick_label(t));
    }
    for t in y.ticks() {
        let py = y.map(t);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{py:.2}" x2="{x0:.2}" y2="{py:.2}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, x0 - 8.0, py + 4.0, tick_label(t));
    }

    let (xa, xb) = (10f64.powf(x.lo), 10f64.powf(x.hi));
    let line: Vec<String> = (0..=MODEL_POINTS)
        .map(|k| xa * (xb / xa).powf(k as f64 / MODEL_POINTS as f64))
        .map(|v| (v, fit.predict(v)))
        .filter(|(v, p)| *p > 0.0 && p.is_finite() && y.contains(*p) && x.contains(*v))
        .map(|(v, p)| format!("{:.2},{:.2}", x.map(v), y.map(p)))
        .collect();
    if line.len() >= 2 {
        let _ = writeln!(s, r#"<polyline class="fit" points="{}" fill="none" stroke="crimson" stroke-width="1.5"/>"#, line.join(" "));
    }
    for (vx, vy) in &kept {
        let _ = writeln!(s, r#"<circle class="dot" cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#, x.map(*vx), y.map(*vy));
    }

    let _ = writeln!(
        s,
        r#"<text class="slope" x="{:.2}" y="{:.2}" text-anchor="end" fill="crimson">slope {}</text>"#,
        x1,
        y1 + 16.0,
        signed(fit.slope, 2)
    );
    let log = fit.log_power.map_or(String::new(), |k| format!(", log power {}", signed(k, 2)));
    let _ = writeln!(
        s,
        r#"<text class="caption" x="{x0:.2}" y="{:.2}">{} = {}, C = {}, residual = {}{log}</text>"#,
        HEIGHT - 50.0,
        fit.symbol,
        signed(fit.value, 4),
        sci(fit.c),
        sci(fit.residual)
    );
    if dropped > 0 {
        let _ = writeln!(
            s,
            r#"<text class="dropped" x="{x0:.2}" y="{:.2}">{dropped} non-positive samples dropped</text>"#,
            HEIGHT - 30.0
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
