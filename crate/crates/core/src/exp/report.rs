use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ExpError, Result};
use crate::solver::Algo;
use crate::tda::BehaviourClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportKind {
    SizeSweep,
    Percolation,
    Neighbors,
    TdaBatch,
}

impl ReportKind {
    /// Subcommand name, also the stem of emitted files.
    pub fn name(self) -> &'static str {
        match self {
            ReportKind::SizeSweep => "size-sweep",
            ReportKind::Percolation => "percolation",
            ReportKind::Neighbors => "neighbors",
            ReportKind::TdaBatch => "tda-batch",
        }
    }

    pub fn note(self) -> Option<&'static str> {
        match self {
            ReportKind::Percolation => Some(
                "oracle solvers have no iteration budget; each (n, p) cell is a single column of exact-match accuracy",
            ),
            _ => None,
        }
    }
}

/// Accuracy of one cell of a maze sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyRow {
    /// Raster side.
    pub n: usize,
    pub grid_n: usize,
    pub p: f64,
    pub deadend_start: bool,
    /// Degree of the start node, for stratified reports.
    pub start_degree: Option<usize>,
    pub solver: Algo,
    pub samples: usize,
    pub correct: usize,
    pub accuracy: f64,
    /// Fraction of sampled mazes containing a cycle.
    pub cyclic_fraction: f64,
    /// Maze generations including resamples after a missing valid start.
    pub attempts: u64,
}

/// Class frequencies of one trajectory group. The four class columns sum to
/// `samples`; trajectories that could not be classified count in `errors`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyRow {
    pub group: String,
    pub samples: usize,
    pub fixed_point: usize,
    pub two_point_cycle: usize,
    pub two_loop_cycle: usize,
    pub other: usize,
    pub errors: usize,
}

impl FrequencyRow {
    pub fn new(group: impl Into<String>) -> Self {
        Self {
            group: group.into(),
            samples: 0,
            fixed_point: 0,
            two_point_cycle: 0,
            two_loop_cycle: 0,
            other: 0,
            errors: 0,
        }
    }

    pub fn record(&mut self, class: BehaviourClass) {
        self.samples += 1;
        match class {
            BehaviourClass::FixedPoint => self.fixed_point += 1,
            BehaviourClass::TwoPointCycle => self.two_point_cycle += 1,
            BehaviourClass::TwoLoopCycle => self.two_loop_cycle += 1,
            BehaviourClass::Other { .. } => self.other += 1,
        }
    }

    pub fn counts(&self) -> [usize; 4] {
        [self.fixed_point, self.two_point_cycle, self.two_loop_cycle, self.other]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReportRows {
    Accuracy(Vec<AccuracyRow>),
    Frequency(Vec<FrequencyRow>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub kind: ReportKind,
    pub rows: ReportRows,
}

const ACCURACY_COLUMNS: [&str; 11] =
    ["n", "grid_n", "p", "deadend_start", "start_degree", "solver", "samples", "correct", "accuracy", "cyclic_fraction", "attempts"];
const FREQUENCY_COLUMNS: [&str; 7] =
    ["group", "samples", "fixed_point", "two_point_cycle", "two_loop_cycle", "other", "errors"];

impl SweepReport {
    pub fn accuracy(kind: ReportKind, rows: Vec<AccuracyRow>) -> Self {
        Self { kind, rows: ReportRows::Accuracy(rows) }
    }

    pub fn frequency(kind: ReportKind, rows: Vec<FrequencyRow>) -> Self {
        Self { kind, rows: ReportRows::Frequency(rows) }
    }

    pub fn accuracy_rows(&self) -> Option<&[AccuracyRow]> {
        match &self.rows {
            ReportRows::Accuracy(rows) => Some(rows),
            ReportRows::Frequency(_) => None,
        }
    }

    pub fn frequency_rows(&self) -> Option<&[FrequencyRow]> {
        match &self.rows {
            ReportRows::Frequency(rows) => Some(rows),
            ReportRows::Accuracy(_) => None,
        }
    }

    pub fn len(&self) -> usize {
        match &self.rows {
            ReportRows::Accuracy(rows) => rows.len(),
            ReportRows::Frequency(rows) => rows.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// CSV with a header line, even when there are no rows.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        match &self.rows {
            ReportRows::Accuracy(rows) => {
                w.write_record(ACCURACY_COLUMNS)?;
                rows.iter().try_for_each(|r| w.serialize(r))?;
            }
            ReportRows::Frequency(rows) => {
                w.write_record(FREQUENCY_COLUMNS)?;
                rows.iter().try_for_each(|r| w.serialize(r))?;
            }
        }
        let bytes = w.into_inner().map_err(|e| ExpError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn from_csv(kind: ReportKind, text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        Ok(match kind {
            ReportKind::TdaBatch => Self::frequency(kind, r.deserialize().collect::<Result<_, _>>()?),
            _ => Self::accuracy(kind, r.deserialize().collect::<Result<_, _>>()?),
        })
    }

    /// JSON object with keys in sorted order at every level.
    pub fn to_json(&self) -> Result<String> {
        let mut top = BTreeMap::new();
        top.insert("kind", serde_json::to_value(self.kind)?);
        top.insert("note", serde_json::to_value(self.kind.note())?);
        top.insert("rows", serde_json::to_value(&self.rows)?);
        // serde_json::Map is ordered by key unless `preserve_order` is enabled.
        let value = serde_json::to_value(top)?;
        let mut text = serde_json::to_string_pretty(&value)?;
        text.push('\n');
        Ok(text)
    }

    pub fn to_svg(&self) -> String {
        match &self.rows {
            ReportRows::Accuracy(rows) => accuracy_svg(self.kind, rows),
            ReportRows::Frequency(rows) => frequency_svg(rows),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Svg,
}

impl ReportFormat {
    pub const ALL: [ReportFormat; 3] = [ReportFormat::Csv, ReportFormat::Json, ReportFormat::Svg];

    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
            ReportFormat::Svg => "svg",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "svg" => Ok(ReportFormat::Svg),
            other => Err(format!("unknown report format '{other}' (expected csv, json or svg)")),
        }
    }
}

/// Writes `<dir>/<kind>.<ext>` and returns its path.
pub fn emit_report(report: &SweepReport, format: ReportFormat, dir: &Path) -> Result<PathBuf> {
    let text = match format {
        ReportFormat::Csv => report.to_csv()?,
        ReportFormat::Json => report.to_json()?,
        ReportFormat::Svg => report.to_svg(),
    };
    let path = dir.join(format!("{}.{}", report.kind.name(), format.extension()));
    fs::write(&path, text)?;
    Ok(path)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn svg_open(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" font-size="14" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(title));
    s
}

/// Plot-area y coordinate of a value in `[0, 1]`.
fn y_of(v: f64) -> f64 {
    HEIGHT - BOTTOM - v * (HEIGHT - TOP - BOTTOM)
}

fn y_axis(s: &mut String, label: &str) {
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let _ = writeln!(s, r##"<line x1="{x0}" y1="{}" x2="{x0}" y2="{}" stroke="black"/>"##, y_of(0.0), y_of(1.0));
    let _ = writeln!(s, r##"<line x1="{x0}" y1="{0}" x2="{x1}" y2="{0}" stroke="black"/>"##, y_of(0.0));
    for tick in 0..=4 {
        let v = tick as f64 / 4.0;
        let y = y_of(v);
        let _ = writeln!(s, r##"<line x1="{}" y1="{y}" x2="{x1}" y2="{y}" stroke="#dddddd"/>"##, x0);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{v:.2}</text>"#, x0 - 6.0, y + 4.0);
    }
    let _ = writeln!(
        s,
        r#"<text x="15" y="{0}" text-anchor="middle" transform="rotate(-90 15 {0})">{1}</text>"#,
        (y_of(0.0) + y_of(1.0)) / 2.0,
        escape(label)
    );
}

fn legend(s: &mut String, entries: &[String]) {
    for (i, name) in entries.iter().enumerate() {
        let y = TOP + 14.0 * i as f64;
        let x = WIDTH - RIGHT + 15.0;
        let _ = writeln!(s, r#"<rect x="{x}" y="{}" width="10" height="10" fill="{}"/>"#, y - 9.0, PALETTE[i % PALETTE.len()]);
        let _ = writeln!(s, r#"<text x="{}" y="{y}">{}</text>"#, x + 14.0, escape(name));
    }
}

fn accuracy_svg(kind: ReportKind, rows: &[AccuracyRow]) -> String {
    // x axis and series key per report kind
    let (x_label, key): (&str, fn(&AccuracyRow) -> (f64, String)) = match kind {
        ReportKind::Percolation => ("percolation p", |r| (r.p, format!("n = {}", r.n))),
        ReportKind::Neighbors => ("maze size n", |r| (r.n as f64, format!("start degree {}", r.start_degree.unwrap_or(0)))),
        _ => ("maze size n", |r| (r.n as f64, r.solver.to_string())),
    };
    let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows {
        let (x, name) = key(r);
        series.entry(name).or_default().push((x, r.accuracy));
    }
    let xs: Vec<f64> = rows.iter().map(|r| key(r).0).collect();
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let x_of = |x: f64| {
        let span = WIDTH - LEFT - RIGHT;
        if hi > lo { LEFT + (x - lo) / (hi - lo) * span } else { LEFT + span / 2.0 }
    };

    let mut s = svg_open(&format!("{}: exact-match accuracy", kind.name()));
    y_axis(&mut s, "accuracy");
    let mut ticks: Vec<f64> = xs.clone();
    ticks.sort_by(f64::total_cmp);
    ticks.dedup();
    for x in &ticks {
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{x}</text>"#, x_of(*x), y_of(0.0) + 15.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#, (LEFT + WIDTH - RIGHT) / 2.0, HEIGHT - 12.0);
    for (i, points) in series.values().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = points.iter().map(|&(x, y)| format!("{:.2},{:.2}", x_of(x), y_of(y))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, path.join(" "));
        for &(x, y) in points {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, x_of(x), y_of(y));
        }
    }
    legend(&mut s, &series.keys().cloned().collect::<Vec<_>>());
    s.push_str("</svg>\n");
    s
}

fn frequency_svg(rows: &[FrequencyRow]) -> String {
    let mut s = svg_open("tda-batch: behaviour class frequencies");
    y_axis(&mut s, "fraction of trajectories");
    let span = WIDTH - LEFT - RIGHT;
    let slot = span / rows.len().max(1) as f64;
    let bar = slot * 0.8 / 4.0;
    for (g, row) in rows.iter().enumerate() {
        let x0 = LEFT + g as f64 * slot + slot * 0.1;
        for (c, &count) in row.counts().iter().enumerate() {
            let frac = if row.samples == 0 { 0.0 } else { count as f64 / row.samples as f64 };
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="{bar:.2}" height="{:.2}" fill="{}"/>"#,
                x0 + c as f64 * bar,
                y_of(frac),
                y_of(0.0) - y_of(frac),
                PALETTE[c]
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            x0 + 2.0 * bar,
            y_of(0.0) + 15.0,
            escape(&row.group)
        );
    }
    legend(&mut s, &BehaviourClass::COLUMNS.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    s.push_str("</svg>\n");
    s
}
