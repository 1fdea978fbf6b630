//! Minimal hand-written SVG line and scatter charts.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

pub struct Axis {
    pub label: String,
    /// Tick positions with their labels; the axis spans their range.
    pub ticks: Vec<(f64, String)>,
}

impl Axis {
    /// Evenly spaced ticks from 0 (or `min`, if negative) up to a bound that
    /// covers `max`.
    pub fn linear(label: impl Into<String>, min: f64, max: f64) -> Self {
        let lo = min.min(0.0);
        let hi = if max > lo { max * 1.1 } else { lo + 1.0 };
        let step = nice_step((hi - lo) / 5.0);
        let mut ticks = Vec::new();
        let mut v = (lo / step).floor() * step;
        while v < hi + step {
            ticks.push((v, format_tick(v)));
            v += step;
        }
        Axis {
            label: label.into(),
            ticks,
        }
    }

    fn range(&self) -> (f64, f64) {
        let lo = self.ticks.iter().map(|t| t.0).fold(f64::INFINITY, f64::min);
        let hi = self
            .ticks
            .iter()
            .map(|t| t.0)
            .fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 1.0, lo + 1.0)
        }
    }
}

fn nice_step(raw: f64) -> f64 {
    if raw <= 0.0 || !raw.is_finite() {
        return 1.0;
    }
    let mag = 10f64.powf(raw.log10().floor());
    let frac = raw / mag;
    let nice = if frac <= 1.0 {
        1.0
    } else if frac <= 2.0 {
        2.0
    } else if frac <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn format_tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn frame(out: &mut String, title: &str, x_axis: &Axis, y_axis: &Axis) -> Frame {
    let f = Frame {
        x: x_axis.range(),
        y: y_axis.range(),
    };
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        escape(title)
    );
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(out, r#"<g stroke="black" stroke-width="1">"#);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/>"#);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>"#);
    let _ = writeln!(out, "</g>");
    for (v, label) in &x_axis.ticks {
        let x = f.px(*v);
        let _ = writeln!(
            out,
            r#"<line class="xtick" x1="{x:.1}" y1="{y0}" x2="{x:.1}" y2="{:.1}" stroke="black"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            y0 + 5.0,
            y0 + 20.0,
            escape(label)
        );
    }
    for (v, label) in &y_axis.ticks {
        let y = f.py(*v);
        let _ = writeln!(
            out,
            r##"<line x1="{x0}" y1="{y:.1}" x2="{x1}" y2="{y:.1}" stroke="#dddddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"##,
            x0 - 6.0,
            y + 4.0,
            escape(label)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 18.0,
        escape(&x_axis.label)
    );
    let _ = writeln!(
        out,
        r#"<text transform="translate(18 {:.1}) rotate(-90)" text-anchor="middle">{}</text>"#,
        (y0 + y1) / 2.0,
        escape(&y_axis.label)
    );
    f
}

fn legend(out: &mut String, labels: &[&str]) {
    for (k, label) in labels.iter().enumerate() {
        let y = TOP + 10.0 + 18.0 * k as f64;
        let x = WIDTH - RIGHT + 15.0;
        let color = PALETTE[k % PALETTE.len()];
        let _ = writeln!(
            out,
            r#"<rect x="{x}" y="{:.1}" width="12" height="12" fill="{color}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            y - 10.0,
            x + 18.0,
            y,
            escape(label)
        );
    }
}

/// Polyline per series with a marker at each point.
pub fn line_chart(title: &str, x_axis: &Axis, y_axis: &Axis, series: &[Series]) -> String {
    let mut out = String::new();
    let f = frame(&mut out, title, x_axis, y_axis);
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.1},{:.1}", f.px(x), f.py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            path.join(" ")
        );
        for &(x, y) in &s.points {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}"/>"#,
                f.px(x),
                f.py(y)
            );
        }
    }
    legend(
        &mut out,
        &series.iter().map(|s| s.label.as_str()).collect::<Vec<_>>(),
    );
    out.push_str("</svg>\n");
    out
}

/// Dots only, one color per series.
pub fn scatter_chart(title: &str, x_axis: &Axis, y_axis: &Axis, series: &[Series]) -> String {
    let mut out = String::new();
    let f = frame(&mut out, title, x_axis, y_axis);
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        for &(x, y) in &s.points {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}" fill-opacity="0.7"/>"#,
                f.px(x),
                f.py(y)
            );
        }
    }
    legend(
        &mut out,
        &series.iter().map(|s| s.label.as_str()).collect::<Vec<_>>(),
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nice_steps() {
        assert_eq!(nice_step(0.3), 0.5);
        assert_eq!(nice_step(1.0), 1.0);
        assert_eq!(nice_step(13.0), 20.0);
        assert_eq!(nice_step(0.0), 1.0);
    }

    #[test]
    fn linear_axis_covers_data() {
        let axis = Axis::linear("y", 0.0, 9.3);
        let (lo, hi) = axis.range();
        assert_eq!(lo, 0.0);
        assert!(hi >= 9.3);
        assert_eq!(axis.ticks[0].1, "0");
    }

    #[test]
    fn line_chart_is_well_formed() {
        let x = Axis {
            label: "n".into(),
            ticks: vec![(10.0, "1024".into()), (13.0, "8192".into())],
        };
        let y = Axis::linear("cost", 0.0, 12.0);
        let series = vec![Series {
            label: "a & b".into(),
            points: vec![(10.0, 3.0), (13.0, 3.1)],
        }];
        let svg = line_chart("t", &x, &y, &series);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("class=\"xtick\"").count(), 2);
        assert!(svg.contains("a &amp; b"));
        assert_eq!(svg.matches("<polyline").count(), 1);
    }
}
