//! Self-contained deterministic SVG line plots. No templating, no
//! rendering dependency: the same series always produce the same bytes.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

/// One polyline with its legend label.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, thiserror::Error)]
pub enum PlotError {
    #[error("plot `{0}`: every series needs at least 2 points")]
    TooFewPoints(String),
    #[error("plot `{0}`: non-finite coordinate")]
    NonFinite(String),
}

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 46.0;
const MARGIN_BOTTOM: f64 = 62.0;

const PALETTE: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Render a line plot to an SVG string.
pub fn render_line_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
) -> Result<String, PlotError> {
    for s in series {
        if s.points.len() < 2 {
            return Err(PlotError::TooFewPoints(title.to_string()));
        }
        if s.points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(PlotError::NonFinite(title.to_string()));
        }
    }
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for &(x, y) in &s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if x_min == x_max {
        x_min -= 1.0;
        x_max += 1.0;
    }
    if y_min == y_max {
        y_min -= 1.0;
        y_max += 1.0;
    }
    let y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_px = |x: f64, y: f64| {
        (
            MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w,
            MARGIN_TOP + (y_max - y) / (y_max - y_min) * plot_h,
        )
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="17">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    // Frame.
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN_LEFT:.2}" y="{MARGIN_TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="black" stroke-width="1"/>"#
    );

    for x in nice_ticks(x_min, x_max) {
        let (px, _) = to_px(x, 0.0);
        let y0 = MARGIN_TOP + plot_h;
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
            y0 + 6.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle" font-size="13">{x}</text>"#,
            y0 + 22.0
        );
    }
    for y in nice_ticks(y_min, y_max) {
        let (_, py) = to_px(0.0, y);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{MARGIN_LEFT:.2}" y2="{py:.2}" stroke="black" stroke-width="1"/>"#,
            MARGIN_LEFT - 6.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="13">{y}</text>"#,
            MARGIN_LEFT - 10.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="15">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 14.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{:.2}" text-anchor="middle" font-size="15" transform="rotate(-90 20 {:.2})">{}</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(y_label)
    );

    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let mut path = String::new();
        for &(x, y) in &s.points {
            let (px, py) = to_px(x, y);
            let _ = write!(path, "{px:.2},{py:.2} ");
        }
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.6"/>"#,
            path.trim_end()
        );
        // Legend entry.
        let ly = MARGIN_TOP + 16.0 + 18.0 * idx as f64;
        let lx = MARGIN_LEFT + plot_w - 150.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="1.6"/>"#,
            ly - 4.0,
            lx + 22.0,
            ly - 4.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{ly:.2}" font-size="13">{}</text>"#,
            lx + 28.0,
            escape(&s.label)
        );
    }
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

/// Render and write in one go.
pub fn write_plot(
    path: &Path,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
) -> Result<(), PlotWriteError> {
    let text = render_line_plot(title, x_label, y_label, series)?;
    std::fs::write(path, text)?;
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum PlotWriteError {
    #[error(transparent)]
    Plot(#[from] PlotError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Round ticks at a 1/2/5 decade step, 4–9 of them across the range.
fn nice_ticks(min: f64, max: f64) -> Vec<f64> {
    let span = max - min;
    let raw_step = span / 6.0;
    let mag = 10.0_f64.powf(raw_step.log10().floor());
    let norm = raw_step / mag;
    let step = if norm < 1.5 {
        mag
    } else if norm < 3.5 {
        2.0 * mag
    } else if norm < 7.5 {
        5.0 * mag
    } else {
        10.0 * mag
    };
    let mut ticks = Vec::new();
    let mut t = (min / step).ceil() * step;
    // Snap near-zero ticks so labels read "0" rather than "1e-16".
    while t <= max + 1e-9 * span {
        let snapped = if t.abs() < 1e-9 * span { 0.0 } else { t };
        ticks.push(snapped);
        t += step;
    }
    ticks
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo_series() -> Series {
        Series {
            label: "demo".into(),
            points: (0..50).map(|i| (i as f64 * 0.1, (i as f64 * 0.1).sin())).collect(),
        }
    }

    #[test]
    fn one_series_one_polyline() {
        let svg = render_line_plot("t", "x", "y", &[demo_series()]).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let series = [demo_series(), Series {
            label: "second".into(),
            points: vec![(0.0, 1.0), (1.0, 2.0), (2.0, 0.5)],
        }];
        let a = render_line_plot("t", "x", "y", &series).unwrap();
        let b = render_line_plot("t", "x", "y", &series).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matches("<polyline").count(), 2);
    }

    #[test]
    fn too_few_points_is_an_error() {
        let s = Series { label: "p".into(), points: vec![(0.0, 0.0)] };
        assert!(matches!(
            render_line_plot("t", "x", "y", &[s]),
            Err(PlotError::TooFewPoints(_))
        ));
    }

    #[test]
    fn ticks_are_nice() {
        let t = nice_ticks(0.0, 1.0);
        assert!(t.len() >= 4 && t.len() <= 9);
        assert_eq!(t[0], 0.0);
        let t = nice_ticks(-12.0, 12.0);
        assert!(t.contains(&0.0));
    }
}
