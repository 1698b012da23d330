//! Deterministic SVG rendering of the CSV outputs.
//!
//! Geometry comes only from CSV values; coordinates are printed with two
//! decimals so identical inputs give identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use clap::ValueEnum;
use goldbach_core::format::{sig6, CsvTable};
use goldbach_core::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    /// Pair count against 2n, one colour per band.
    #[value(name = "bands-scatter")]
    BandsScatter,
    /// Band-[2] pair counts with the EGP and IGP estimates.
    #[value(name = "b2-compare")]
    B2Compare,
    /// Per-factor and total TRPF against `log_p(x)`.
    #[value(name = "trpf-curves")]
    TrpfCurves,
    /// α against the Pen prime.
    #[value(name = "alpha-profile")]
    AlphaProfile,
}

impl PlotKind {
    /// Columns the input CSV must carry.
    pub fn schema(self) -> &'static [&'static str] {
        match self {
            PlotKind::BandsScatter => &["two_n", "gp_count", "band"],
            PlotKind::B2Compare => &["two_n", "gp_count", "egp", "igp"],
            PlotKind::TrpfCurves => &["logpx", "f2", "f3", "f4", "f5", "total"],
            PlotKind::AlphaProfile => &["p", "alpha"],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub kind: PlotKind,
    pub input: PathBuf,
    pub output: PathBuf,
    pub x_range: Option<(f64, f64)>,
    pub y_range: Option<(f64, f64)>,
}

impl PlotSpec {
    pub fn new(kind: PlotKind, input: PathBuf, output: PathBuf) -> Self {
        Self { kind, input, output, x_range: None, y_range: None }
    }
}

/// Reads `spec.input` and renders it; the caller writes `spec.output`.
pub fn render_plot(spec: &PlotSpec) -> Result<String> {
    let file = File::open(&spec.input).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", spec.input.display())))
    })?;
    let table = CsvTable::read(BufReader::new(file))?;
    render_svg(spec.kind, &table, spec.x_range, spec.y_range)
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];
const LEGEND_ROWS: usize = 16;

enum Series {
    Points { label: String, colour: &'static str, xy: Vec<(f64, f64)> },
    Line { label: String, colour: &'static str, xy: Vec<(f64, f64)> },
}

impl Series {
    fn xy(&self) -> &[(f64, f64)] {
        match self {
            Series::Points { xy, .. } | Series::Line { xy, .. } => xy,
        }
    }
}

pub fn render_svg(
    kind: PlotKind,
    table: &CsvTable,
    x_range: Option<(f64, f64)>,
    y_range: Option<(f64, f64)>,
) -> Result<String> {
    table.require(kind.schema())?;
    let (title, x_label, y_label, series) = match kind {
        PlotKind::BandsScatter => ("Goldbach pairs by band", "2n", "pairs", bands_scatter(table)?),
        PlotKind::B2Compare => ("Band [2]: count and estimates", "2n", "pairs", b2_compare(table)?),
        PlotKind::TrpfCurves => ("Relative probability factors", "log_p(x)", "TRPF", trpf_curves(table)?),
        PlotKind::AlphaProfile => ("Alpha by Pen prime", "p", "alpha", alpha_profile(table)?),
    };
    let points = series.iter().flat_map(|s| s.xy().iter().copied());
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.unzip();
    let x = Axis::new(x_range.unwrap_or_else(|| extent(&xs)), LEFT, WIDTH - RIGHT);
    let y = Axis::new(y_range.unwrap_or_else(|| extent(&ys)), HEIGHT - BOTTOM, TOP);
    Ok(draw(title, x_label, y_label, &x, &y, &series))
}

fn bands_scatter(table: &CsvTable) -> Result<Vec<Series>> {
    let two_n = table.reals("two_n")?;
    let gp = table.reals("gp_count")?;
    let bands = table.strings("band")?;
    let mut groups: BTreeMap<&str, Vec<(f64, f64)>> = BTreeMap::new();
    for ((x, y), band) in two_n.into_iter().zip(gp).zip(bands) {
        groups.entry(band).or_default().push((x, y));
    }
    Ok(groups
        .into_iter()
        .enumerate()
        .map(|(i, (band, xy))| Series::Points {
            label: format!("[{}]", band.replace('-', ",")),
            colour: PALETTE[i % PALETTE.len()],
            xy,
        })
        .collect())
}

fn b2_compare(table: &CsvTable) -> Result<Vec<Series>> {
    let two_n = table.reals("two_n")?;
    let column = |name: &str| -> Result<Vec<(f64, f64)>> {
        Ok(two_n.iter().copied().zip(table.reals(name)?).collect())
    };
    Ok(vec![
        Series::Points { label: "gp".into(), colour: PALETTE[0], xy: column("gp_count")? },
        Series::Line { label: "egp".into(), colour: PALETTE[3], xy: column("egp")? },
        Series::Line { label: "igp".into(), colour: PALETTE[2], xy: column("igp")? },
    ])
}

fn trpf_curves(table: &CsvTable) -> Result<Vec<Series>> {
    let grid = table.reals("logpx")?;
    ["f2", "f3", "f4", "f5", "total"]
        .iter()
        .enumerate()
        .map(|(i, name)| {
            Ok(Series::Line {
                label: (*name).into(),
                colour: PALETTE[i],
                xy: grid.iter().copied().zip(table.reals(name)?).collect(),
            })
        })
        .collect()
}

fn alpha_profile(table: &CsvTable) -> Result<Vec<Series>> {
    let xy: Vec<(f64, f64)> = table.reals("p")?.into_iter().zip(table.reals("alpha")?).collect();
    Ok(vec![
        Series::Line { label: "alpha".into(), colour: PALETTE[0], xy: xy.clone() },
        Series::Points { label: String::new(), colour: PALETTE[0], xy },
    ])
}

/// Data extent, widened when degenerate so a constant series sits on the
/// lower edge.
fn extent(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    if lo < hi {
        (lo, hi)
    } else {
        (lo, lo + lo.abs().max(1.0))
    }
}

struct Axis {
    lo: f64,
    hi: f64,
    from: f64,
    to: f64,
}

impl Axis {
    fn new((lo, hi): (f64, f64), from: f64, to: f64) -> Self {
        let (lo, hi) = if lo < hi { (lo, hi) } else { extent(&[lo, hi]) };
        Self { lo, hi, from, to }
    }

    fn map(&self, v: f64) -> f64 {
        self.from + (v - self.lo) / (self.hi - self.lo) * (self.to - self.from)
    }

    fn ticks(&self) -> impl Iterator<Item = f64> + '_ {
        (0..TICKS).map(|i| self.lo + (self.hi - self.lo) * i as f64 / (TICKS - 1) as f64)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn draw(title: &str, x_label: &str, y_label: &str, x: &Axis, y: &Axis, series: &[Series]) -> String {
    let mut svg = String::new();
    let w = &mut svg;
    let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        escape(title)
    );

    let (x0, x1, y0, y1) = (x.from, x.to, y.from, y.to);
    let _ = writeln!(w, r#"<g stroke="black" stroke-width="1">"#);
    let _ = writeln!(w, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/>"#);
    let _ = writeln!(w, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/>"#);
    for t in x.ticks() {
        let px = x.map(t);
        let _ = writeln!(w, r#"<line x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{:.2}"/>"#, y0 + 5.0);
    }
    for t in y.ticks() {
        let py = y.map(t);
        let _ = writeln!(w, r#"<line x1="{:.2}" y1="{py:.2}" x2="{x0:.2}" y2="{py:.2}"/>"#, x0 - 5.0);
    }
    let _ = writeln!(w, "</g>");
    for t in x.ticks() {
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            x.map(t),
            y0 + 18.0,
            sig6(t)
        );
    }
    for t in y.ticks() {
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 8.0,
            y.map(t) + 4.0,
            sig6(t)
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        w,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );

    for s in series {
        match s {
            Series::Points { colour, xy, .. } => {
                let _ = writeln!(w, r#"<g fill="{colour}">"#);
                for &(vx, vy) in xy {
                    let _ = writeln!(w, r#"<circle cx="{:.2}" cy="{:.2}" r="1.5"/>"#, x.map(vx), y.map(vy));
                }
                let _ = writeln!(w, "</g>");
            }
            Series::Line { colour, xy, .. } => {
                let path: Vec<String> =
                    xy.iter().map(|&(vx, vy)| format!("{:.2},{:.2}", x.map(vx), y.map(vy))).collect();
                let _ = writeln!(
                    w,
                    r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
                    path.join(" ")
                );
            }
        }
    }

    let labelled = series.iter().filter_map(|s| match s {
        Series::Points { label, colour, .. } | Series::Line { label, colour, .. } => {
            (!label.is_empty()).then_some((label, colour))
        }
    });
    for (row, (label, colour)) in labelled.take(LEGEND_ROWS).enumerate() {
        let ly = TOP + 16.0 * row as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(w, r#"<rect x="{lx:.2}" y="{:.2}" width="10" height="10" fill="{colour}"/>"#, ly);
        let _ = writeln!(w, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 16.0, ly + 9.0, escape(label));
    }
    let _ = writeln!(w, "</svg>");
    svg
}
