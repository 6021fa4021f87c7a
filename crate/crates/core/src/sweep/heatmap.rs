//! Standalone SVG heat maps of a sweep.
//!
//! Ω/2π runs along x and Γ/2π along y (largest Γ at the top). Cells without
//! a value (unreachable points for the time and speed metrics) are drawn
//! with a grey hatch. Output depends only on the records, so identical
//! input gives identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::csv::format_sig9;
use super::{SweepError, SweepRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Fidelity,
    InitTime,
    Speed,
}

impl Metric {
    pub fn value(&self, r: &SweepRecord) -> Option<f64> {
        match self {
            Metric::Fidelity => Some(r.fidelity),
            Metric::InitTime => r.t_init_ns,
            Metric::Speed => r.speed_ghz,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Metric::Fidelity => "fidelity",
            Metric::InitTime => "initialization time (ns)",
            Metric::Speed => "speed (GHz)",
        }
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fidelity" => Ok(Metric::Fidelity),
            "t_init" => Ok(Metric::InitTime),
            "speed" => Ok(Metric::Speed),
            other => Err(format!("unknown metric `{other}` (expected fidelity|t_init|speed)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub fn hex(&self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }

    /// Relative luminance (sRGB, Rec. 709 weights).
    pub fn luminance(&self) -> f64 {
        let lin = |c: u8| {
            let c = c as f64 / 255.0;
            if c <= 0.04045 {
                c / 12.92
            } else {
                ((c + 0.055) / 1.055).powf(2.4)
            }
        };
        0.2126 * lin(self.0) + 0.7152 * lin(self.1) + 0.0722 * lin(self.2)
    }
}

// viridis sampled at nine evenly spaced stops
const VIRIDIS: [(u8, u8, u8); 9] = [
    (68, 1, 84),
    (71, 45, 123),
    (59, 82, 139),
    (44, 114, 142),
    (33, 145, 140),
    (40, 174, 128),
    (94, 201, 98),
    (173, 220, 48),
    (253, 231, 37),
];

/// Colour at position `t ∈ [0, 1]` of the viridis map (clamped).
pub fn colormap(t: f64) -> Rgb {
    let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
    let scaled = t * (VIRIDIS.len() - 1) as f64;
    let i = (scaled.floor() as usize).min(VIRIDIS.len() - 2);
    let f = scaled - i as f64;
    let (a, b) = (VIRIDIS[i], VIRIDIS[i + 1]);
    let mix = |x: u8, y: u8| (x as f64 + f * (y as f64 - x as f64)).round() as u8;
    Rgb(mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

/// Position of `value` on the colour scale spanning `[lo, hi]`; a
/// degenerate range maps everything to the middle.
pub fn colormap_position(value: f64, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        ((value - lo) / (hi - lo)).clamp(0.0, 1.0)
    } else {
        0.5
    }
}

/// Records arranged as rows of constant Γ.
struct GridLayout {
    omegas: Vec<f64>,
    gammas: Vec<f64>,
}

fn layout(records: &[SweepRecord]) -> Result<GridLayout, SweepError> {
    let first = records.first().ok_or(SweepError::Empty)?;
    let n_omega = records.iter().take_while(|r| r.gamma_ghz == first.gamma_ghz).count();
    if !records.len().is_multiple_of(n_omega) {
        return Err(SweepError::RaggedGrid(format!("{} records do not split into rows of {n_omega}", records.len())));
    }
    let omegas: Vec<f64> = records[..n_omega].iter().map(|r| r.omega_ghz).collect();
    let mut gammas = Vec::new();
    for (row_idx, row) in records.chunks(n_omega).enumerate() {
        let g = row[0].gamma_ghz;
        if row.iter().any(|r| r.gamma_ghz != g) {
            return Err(SweepError::RaggedGrid(format!("row {row_idx} mixes gamma values")));
        }
        if row.iter().zip(&omegas).any(|(r, o)| r.omega_ghz != *o) {
            return Err(SweepError::RaggedGrid(format!("row {row_idx} has a different omega axis")));
        }
        if gammas.contains(&g) {
            return Err(SweepError::RaggedGrid(format!("gamma {g} appears in more than one row")));
        }
        gammas.push(g);
    }
    Ok(GridLayout { omegas, gammas })
}

const PLOT_W: f64 = 600.0;
const PLOT_H: f64 = 420.0;
const LEFT: f64 = 80.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const BAR_GAP: f64 = 30.0;
const BAR_W: f64 = 24.0;
const BAR_STEPS: usize = 64;
const MAX_TICKS: usize = 6;

fn px(x: f64) -> String {
    format!("{x:.2}")
}

fn tick_indices(n: usize) -> Vec<usize> {
    if n <= MAX_TICKS {
        return (0..n).collect();
    }
    let mut idx: Vec<usize> = (0..MAX_TICKS).map(|k| k * (n - 1) / (MAX_TICKS - 1)).collect();
    idx.dedup();
    idx
}

fn axis_label(v: f64) -> String {
    if v != 0.0 && (v.abs() < 0.1 || v.abs() >= 1000.0) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// Renders `metric` over a complete rectangular sweep.
pub fn render_heatmap(records: &[SweepRecord], metric: Metric) -> Result<String, SweepError> {
    let grid = layout(records)?;
    let (nx, ny) = (grid.omegas.len(), grid.gammas.len());
    let values: Vec<Option<f64>> = records.iter().map(|r| metric.value(r)).collect();
    let present: Vec<f64> = values.iter().flatten().copied().collect();
    let range = present.iter().fold(None, |acc: Option<(f64, f64)>, &v| {
        Some(acc.map_or((v, v), |(lo, hi)| (lo.min(v), hi.max(v))))
    });

    let cell_w = PLOT_W / nx as f64;
    let cell_h = PLOT_H / ny as f64;
    let width = LEFT + PLOT_W + BAR_GAP + BAR_W + 90.0;
    let height = TOP + PLOT_H + BOTTOM;

    let mut svg = String::new();
    let w = &mut svg;
    let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif" font-size="12">"#,
        px(width),
        px(height),
        px(width),
        px(height)
    );
    let _ = writeln!(w, "<defs>");
    let _ = writeln!(
        w,
        r##"<pattern id="hatch" patternUnits="userSpaceOnUse" width="6" height="6"><rect width="6" height="6" fill="#bdbdbd"/><path d="M0,6 L6,0" stroke="#6e6e6e" stroke-width="1"/></pattern>"##
    );
    let _ = writeln!(w, "</defs>");
    let _ = writeln!(w, r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, px(width), px(height));
    let _ = writeln!(
        w,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#,
        px(LEFT + PLOT_W / 2.0),
        px(TOP / 2.0 + 5.0),
        metric.label()
    );

    let _ = writeln!(w, r#"<g id="cells">"#);
    for (k, value) in values.iter().enumerate() {
        let (i, j) = (k % nx, k / nx);
        let x = LEFT + i as f64 * cell_w;
        // largest gamma at the top
        let y = TOP + (ny - 1 - j) as f64 * cell_h;
        let fill = match (value, range) {
            (Some(v), Some((lo, hi))) => colormap(colormap_position(*v, lo, hi)).hex(),
            _ => "url(#hatch)".to_string(),
        };
        let _ = writeln!(
            w,
            r#"<rect class="cell" x="{}" y="{}" width="{}" height="{}" fill="{fill}"/>"#,
            px(x),
            px(y),
            px(cell_w),
            px(cell_h)
        );
    }
    let _ = writeln!(w, "</g>");

    // axes
    let x_axis_y = TOP + PLOT_H;
    let _ = writeln!(w, r#"<g id="axes" stroke="black" fill="none">"#);
    let _ = writeln!(
        w,
        r#"<rect x="{}" y="{}" width="{}" height="{}"/>"#,
        px(LEFT),
        px(TOP),
        px(PLOT_W),
        px(PLOT_H)
    );
    let _ = writeln!(w, "</g>");
    let _ = writeln!(w, r#"<g id="x-ticks" text-anchor="middle">"#);
    for i in tick_indices(nx) {
        let x = LEFT + (i as f64 + 0.5) * cell_w;
        let _ = writeln!(
            w,
            r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="black"/><text x="{0}" y="{3}">{4}</text>"#,
            px(x),
            px(x_axis_y),
            px(x_axis_y + 5.0),
            px(x_axis_y + 18.0),
            axis_label(grid.omegas[i])
        );
    }
    let _ = writeln!(w, "</g>");
    let _ = writeln!(w, r#"<g id="y-ticks" text-anchor="end">"#);
    for j in tick_indices(ny) {
        let y = TOP + (ny - 1 - j) as f64 * cell_h + cell_h / 2.0;
        let _ = writeln!(
            w,
            r#"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="black"/><text x="{3}" y="{4}">{5}</text>"#,
            px(LEFT - 5.0),
            px(y),
            px(LEFT),
            px(LEFT - 8.0),
            px(y + 4.0),
            axis_label(grid.gammas[j])
        );
    }
    let _ = writeln!(w, "</g>");
    let _ = writeln!(
        w,
        r#"<text x="{}" y="{}" text-anchor="middle">Ω/2π (GHz)</text>"#,
        px(LEFT + PLOT_W / 2.0),
        px(x_axis_y + 42.0)
    );
    let _ = writeln!(
        w,
        r#"<text x="{0}" y="{1}" text-anchor="middle" transform="rotate(-90 {0} {1})">Γ/2π (GHz)</text>"#,
        px(22.0),
        px(TOP + PLOT_H / 2.0)
    );

    // colour bar, low values at the bottom
    let bar_x = LEFT + PLOT_W + BAR_GAP;
    let step_h = PLOT_H / BAR_STEPS as f64;
    let _ = writeln!(w, r#"<g id="colorbar">"#);
    for s in 0..BAR_STEPS {
        let t = (s as f64 + 0.5) / BAR_STEPS as f64;
        let y = TOP + PLOT_H - (s as f64 + 1.0) * step_h;
        let _ = writeln!(
            w,
            r#"<rect class="colorbar" x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
            px(bar_x),
            px(y),
            px(BAR_W),
            px(step_h),
            colormap(t).hex()
        );
    }
    let (lo_label, hi_label) = match range {
        Some((lo, hi)) => (format_sig9(lo), format_sig9(hi)),
        None => ("n/a".to_string(), "n/a".to_string()),
    };
    let _ = writeln!(
        w,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        px(bar_x),
        px(TOP),
        px(BAR_W),
        px(PLOT_H)
    );
    let _ = writeln!(w, r#"<text x="{}" y="{}">{hi_label}</text>"#, px(bar_x + BAR_W + 6.0), px(TOP + 4.0));
    let _ = writeln!(w, r#"<text x="{}" y="{}">{lo_label}</text>"#, px(bar_x + BAR_W + 6.0), px(TOP + PLOT_H + 4.0));
    let _ = writeln!(w, "</g>");
    let _ = writeln!(w, "</svg>");
    Ok(svg)
}

pub fn write_heatmap(records: &[SweepRecord], metric: Metric, path: &Path) -> Result<(), SweepError> {
    let svg = render_heatmap(records, metric)?;
    fs::write(path, svg)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(omega: f64, gamma: f64, fidelity: f64, t: Option<f64>) -> SweepRecord {
        SweepRecord {
            omega_ghz: omega,
            gamma_ghz: gamma,
            fidelity,
            t_init_ns: t,
            speed_ghz: t.map(|t| 1.0 / (std::f64::consts::TAU * t)),
            reachable: t.is_some(),
        }
    }

    fn cell_fills(svg: &str) -> Vec<String> {
        svg.lines()
            .filter(|l| l.contains(r#"class="cell""#))
            .map(|l| {
                let start = l.find("fill=\"").unwrap() + 6;
                l[start..start + l[start..].find('"').unwrap()].to_string()
            })
            .collect()
    }

    #[test]
    fn two_by_two_structure() {
        let recs = [
            rec(0.1, 5.0, 0.6, Some(1.0)),
            rec(0.2, 5.0, 0.7, Some(0.8)),
            rec(0.1, 6.0, 0.8, None),
            rec(0.2, 6.0, 0.9, Some(0.5)),
        ];
        let svg = render_heatmap(&recs, Metric::Fidelity).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert_eq!(svg.matches(r#"class="cell""#).count(), 4);
        assert_eq!(svg.matches(r#"class="colorbar""#).count(), BAR_STEPS);
        assert!(svg.contains(r#"id="x-ticks""#) && svg.contains(r#"id="y-ticks""#));
        assert!(svg.contains("Ω/2π (GHz)") && svg.contains("Γ/2π (GHz)"));

        let svg = render_heatmap(&recs, Metric::InitTime).unwrap();
        assert_eq!(cell_fills(&svg).iter().filter(|f| *f == "url(#hatch)").count(), 1);
    }

    #[test]
    fn constant_metric_single_fill() {
        let recs: Vec<_> = (0..6).map(|k| rec(0.1 * (1 + k % 3) as f64, 5.0 + (k / 3) as f64, 0.8, None)).collect();
        let fills = cell_fills(&render_heatmap(&recs, Metric::Fidelity).unwrap());
        assert_eq!(fills.len(), 6);
        assert!(fills.iter().all(|f| f == &fills[0]));
        assert_eq!(fills[0], colormap(0.5).hex());
    }

    #[test]
    fn ragged_grid_rejected() {
        let recs = [rec(0.1, 5.0, 0.6, None), rec(0.2, 5.0, 0.7, None), rec(0.1, 6.0, 0.8, None)];
        assert!(matches!(render_heatmap(&recs, Metric::Fidelity), Err(SweepError::RaggedGrid(_))));
        let recs = [rec(0.1, 5.0, 0.6, None), rec(0.2, 5.0, 0.7, None), rec(0.1, 6.0, 0.8, None), rec(0.3, 6.0, 0.8, None)];
        assert!(matches!(render_heatmap(&recs, Metric::Fidelity), Err(SweepError::RaggedGrid(_))));
        assert!(matches!(render_heatmap(&[], Metric::Fidelity), Err(SweepError::Empty)));
    }

    #[test]
    fn colormap_endpoints_and_luminance() {
        assert_eq!(colormap(0.0), Rgb(68, 1, 84));
        assert_eq!(colormap(1.0), Rgb(253, 231, 37));
        let lum: Vec<f64> = (0..=100).map(|k| colormap(k as f64 / 100.0).luminance()).collect();
        assert!(lum.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn metric_names() {
        assert_eq!("t_init".parse::<Metric>().unwrap(), Metric::InitTime);
        assert!("purity".parse::<Metric>().is_err());
    }
}
