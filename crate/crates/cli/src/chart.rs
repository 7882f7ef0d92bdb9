//! Minimal SVG 1.1 charts: axes, ticks, series and a legend.

use std::fmt::Write;

use crate::config::{ChartKind, ChartSpec};
use crate::error::{CliError, Result};
use crate::table::ResultTable;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 450.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

/// Resolved drawing instructions after merging the spec with table metadata.
pub struct Plan {
    pub kind: ChartKind,
    pub x: String,
    pub y: Vec<String>,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
}

pub fn plan(tables: &[ResultTable], spec: &ChartSpec) -> Result<Plan> {
    let first = tables
        .first()
        .ok_or_else(|| CliError::Chart("no input tables".into()))?;
    let x = match &spec.x {
        Some(x) => x.clone(),
        None => first
            .columns
            .first()
            .cloned()
            .ok_or_else(|| CliError::Chart("table has no columns".into()))?,
    };
    let y = if spec.y.is_empty() {
        vec![first
            .columns
            .get(1)
            .cloned()
            .ok_or_else(|| CliError::Chart("table needs at least two columns".into()))?]
    } else {
        spec.y.clone()
    };
    let pick = |given: &Option<String>, meta: &str, fallback: &str| {
        given.clone().unwrap_or_else(|| {
            if meta.is_empty() {
                fallback.to_string()
            } else {
                meta.to_string()
            }
        })
    };
    Ok(Plan {
        kind: spec.kind.unwrap_or(first.metadata.chart),
        title: spec
            .title
            .clone()
            .unwrap_or_else(|| first.metadata.table.clone()),
        x_label: pick(&spec.x_label, &first.metadata.x_label, &x),
        y_label: pick(&spec.y_label, &first.metadata.y_label, &y.join(", ")),
        x,
        y,
    })
}

pub fn render(tables: &[ResultTable], spec: &ChartSpec) -> Result<String> {
    let plan = plan(tables, spec)?;
    let mut series = Vec::new();
    for t in tables {
        if t.is_empty() {
            return Err(CliError::Chart(format!(
                "table `{}` has no rows",
                t.metadata.label
            )));
        }
        let xs = t.column(&plan.x)?;
        for y in &plan.y {
            let ys = t.column(y)?;
            let label = if plan.y.len() > 1 {
                format!("{} {y}", t.metadata.label)
            } else {
                t.metadata.label.clone()
            };
            series.push(Series {
                label,
                points: xs.iter().copied().zip(ys).collect(),
            });
        }
    }
    Ok(draw(&plan, &series))
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

/// Tick positions at 1, 2 or 5 times a power of ten.
fn ticks(lo: f64, hi: f64, target: usize) -> (Vec<f64>, usize) {
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let start = (lo / step).ceil() as i64;
    let end = (hi / step + 1e-9).floor() as i64;
    ((start..=end).map(|i| i as f64 * step).collect(), decimals)
}

fn padded((lo, hi): (f64, f64)) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else if lo == 0.0 {
        (-1.0, 1.0)
    } else {
        (lo - 0.5 * lo.abs(), hi + 0.5 * hi.abs())
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn draw(plan: &Plan, series: &[Series]) -> String {
    let all = || series.iter().flat_map(|s| s.points.iter());
    let (mut x_lo, mut x_hi) = padded(extent(all().map(|p| p.0)));
    let (mut y_lo, mut y_hi) = padded(extent(all().map(|p| p.1)));
    let mut slot = 0.0;
    if plan.kind == ChartKind::Bar {
        y_lo = y_lo.min(0.0);
        y_hi = y_hi.max(0.0);
        let mut xs: Vec<f64> = all().map(|p| p.0).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        slot = xs
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        if !slot.is_finite() {
            slot = 1.0;
        }
        x_lo -= 0.5 * slot;
        x_hi += 0.5 * slot;
    }
    let (ylo, yhi) = (y_lo, y_hi + 0.05 * (y_hi - y_lo));
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| TOP + plot_h - (y - ylo) / (yhi - ylo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(&plan.title)
    );

    let (xt, xd) = ticks(x_lo, x_hi, 8);
    for t in xt {
        let x = sx(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#ccc"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{t:.xd$}</text>"##,
            TOP,
            TOP + plot_h,
            TOP + plot_h + 16.0
        );
    }
    let (yt, yd) = ticks(ylo, yhi, 6);
    for t in yt {
        let y = sy(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ccc"/><text x="{:.2}" y="{:.2}" text-anchor="end">{t:.yd$}</text>"##,
            LEFT + plot_w,
            LEFT - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 14.0,
        escape(&plan.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text transform="translate(18 {:.1}) rotate(-90)" text-anchor="middle">{}</text>"#,
        TOP + plot_h / 2.0,
        escape(&plan.y_label)
    );

    let n = series.len().max(1) as f64;
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        match plan.kind {
            ChartKind::Line => {
                let pts: Vec<String> = s
                    .points
                    .iter()
                    .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                    .collect();
                let _ = writeln!(
                    svg,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                    pts.join(" ")
                );
            }
            ChartKind::Bar => {
                let w = 0.8 * slot / n;
                let _ = writeln!(svg, r#"<g fill="{color}">"#);
                for &(x, y) in &s.points {
                    if y == 0.0 {
                        continue;
                    }
                    let left = x - 0.4 * slot + i as f64 * w;
                    let (top, bottom) = (sy(y.max(0.0)), sy(y.min(0.0)));
                    let _ = writeln!(
                        svg,
                        r#"<rect x="{:.2}" y="{top:.2}" width="{:.2}" height="{:.2}"/>"#,
                        sx(left),
                        (sx(left + w) - sx(left)).max(0.5),
                        bottom - top
                    );
                }
                let _ = writeln!(svg, "</g>");
            }
        }
        let ly = TOP + 14.0 + 16.0 * i as f64;
        let lx = LEFT + plot_w - 170.0;
        let _ = writeln!(
            svg,
            r#"<rect x="{lx:.1}" y="{:.1}" width="12" height="12" fill="{color}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            ly - 10.0,
            lx + 18.0,
            ly,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Metadata;

    fn table(label: &str, kind: ChartKind, rows: &[(f64, f64)]) -> ResultTable {
        let meta = Metadata::new("run", "sigma", serde_json::Value::Null)
            .chart(kind, "step l", "sigma")
            .label(label);
        let mut t = ResultTable::new(meta, &["step", "sigma"]);
        for &(x, y) in rows {
            t.push(vec![x, y]);
        }
        t
    }

    #[test]
    fn nice_ticks() {
        let (t, d) = ticks(0.0, 40.0, 8);
        assert_eq!(t, vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0]);
        assert_eq!(d, 0);
        let (t, d) = ticks(0.0, 0.13, 6);
        assert_eq!(t, vec![0.0, 0.05, 0.1]);
        assert_eq!(d, 2);
    }

    #[test]
    fn overlays_series_with_legend() {
        let a = table("ideal", ChartKind::Line, &[(0.0, 0.0), (1.0, 1.0)]);
        let b = table("su11:0.75,2", ChartKind::Line, &[(0.0, 0.0), (1.0, 0.5)]);
        let svg = render(&[a, b], &ChartSpec::default()).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">ideal</text>") && svg.contains(">su11:0.75,2</text>"));
        assert!(svg.contains(">step l</text>"));
        assert!(svg.starts_with("<?xml"));
    }

    #[test]
    fn bars_skip_zero_entries() {
        let t = table("p", ChartKind::Bar, &[(-1.0, 0.5), (0.0, 0.0), (1.0, 0.5)]);
        let svg = render(&[t], &ChartSpec::default()).unwrap();
        assert_eq!(svg.matches("<rect x=").count(), 2 + 1 + 1);
    }

    #[test]
    fn errors_are_descriptive() {
        let empty = table("e", ChartKind::Line, &[]);
        assert!(render(&[empty], &ChartSpec::default()).is_err());
        let t = table("p", ChartKind::Line, &[(0.0, 1.0)]);
        let spec = ChartSpec {
            y: vec!["entropy".into()],
            ..ChartSpec::default()
        };
        let err = render(&[t], &spec).unwrap_err().to_string();
        assert!(err.contains("entropy"));
        assert!(render(&[], &ChartSpec::default()).is_err());
    }

    #[test]
    fn escapes_markup() {
        let t = table("a<b & c", ChartKind::Line, &[(0.0, 1.0), (1.0, 2.0)]);
        let svg = render(&[t], &ChartSpec::default()).unwrap();
        assert!(svg.contains("a&lt;b &amp; c"));
    }
}
