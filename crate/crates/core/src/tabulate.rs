//! Assurance tables and plot-ready data series.
//!
//! Tables hold assurance in percent, unrounded; [`percent_one_decimal`]
//! renders a cell the way printed tables show it.
//!
//! The infinite column can be filled with the converged root
//! ([`InfiniteMethod::Converged`]) or with the coarse Brent solve that the
//! published zero-failure table was generated with
//! ([`InfiniteMethod::PUBLISHED`]). The two differ in the first decimal at
//! n = 11, 12 and 22.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::RangeInclusive;

use crate::binomial::confidence_infinite;
use crate::error::{Error, Result};
use crate::finite::{assurance_finite, reliability_finite, step_grid, FinitePlan};
use crate::infinite::{assurance_infinite, assurance_infinite_brent, reliability_infinite};
use crate::probability::{Probability, TestEvidence};

/// A table column or plot series: a finite number of additional samples, or
/// the infinite-population limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Column {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Column::Finite(m) => write!(f, "{m}"),
            Column::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Column {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> core::result::Result<S::Ok, S::Error> {
        match self {
            Column::Finite(m) => serializer.serialize_u64(*m),
            Column::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// How the infinite-population column of an assurance table is solved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InfiniteMethod {
    /// [`assurance_infinite`]: bisection to 1e-10.
    Converged,
    /// [`assurance_infinite_brent`] with the given bracket tolerance.
    Brent { xtol: f64 },
}

impl InfiniteMethod {
    /// Brent's method with `xtol = 1e-3`, as used for the published table.
    pub const PUBLISHED: InfiniteMethod = InfiniteMethod::Brent { xtol: 1e-3 };
}

/// Assurance in percent for every `(n, column)` pair at a fixed failure
/// count. Cells are stored row-major.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AssuranceTable {
    pub failures: u64,
    pub n_values: Vec<u64>,
    #[cfg_attr(feature = "serde", serde(rename = "m_values"))]
    pub columns: Vec<Column>,
    pub cells: Vec<f64>,
}

impl AssuranceTable {
    pub fn get(&self, row: usize, column: usize) -> f64 {
        self.cells[row * self.columns.len() + column]
    }

    /// Cell for `n` samples and the given column, if present.
    pub fn cell(&self, n: u64, column: Column) -> Option<f64> {
        let row = self.n_values.iter().position(|&v| v == n)?;
        let col = self.columns.iter().position(|&c| c == column)?;
        Some(self.get(row, col))
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let width = self.columns.len();
        &self.cells[row * width..(row + 1) * width]
    }
}

/// Assurance table with rows `n_values`, finite columns `m_values`, and an
/// infinite column when `infinite` is given.
///
/// `n = 3..=22`, `m = 1..=10`, `f = 0` with [`InfiniteMethod::PUBLISHED`]
/// regenerates the classic zero-failure planning table cell for cell.
pub fn assurance_table(
    n_values: RangeInclusive<u64>,
    m_values: RangeInclusive<u64>,
    infinite: Option<InfiniteMethod>,
    failures: u64,
) -> Result<AssuranceTable> {
    let n_values: Vec<u64> = n_values.collect();
    let mut columns: Vec<Column> = m_values.map(Column::Finite).collect();
    if infinite.is_some() {
        columns.push(Column::Infinite);
    }
    let method = infinite.unwrap_or(InfiniteMethod::Converged);
    let mut cells = Vec::with_capacity(n_values.len() * columns.len());
    for &n in &n_values {
        let evidence = TestEvidence::new(n, failures).map_err(|_| Error::InfeasibleCell {
            samples: n,
            failures,
            reason: "failures exceed samples",
        })?;
        for &column in &columns {
            cells.push(assurance_cell(evidence, column, method)?.percent());
        }
    }
    Ok(AssuranceTable {
        failures,
        n_values,
        columns,
        cells,
    })
}

fn assurance_cell(
    evidence: TestEvidence,
    column: Column,
    method: InfiniteMethod,
) -> Result<Probability> {
    match column {
        Column::Finite(0) => Err(Error::InfeasibleCell {
            samples: evidence.samples(),
            failures: evidence.failures(),
            reason: "additional samples must be at least 1",
        }),
        Column::Finite(m) => Ok(assurance_finite(&FinitePlan::new(evidence, m)).assurance),
        Column::Infinite => match method {
            InfiniteMethod::Converged => assurance_infinite(evidence),
            InfiniteMethod::Brent { xtol } => assurance_infinite_brent(evidence, xtol),
        }
        .map_err(|_| Error::InfeasibleCell {
            samples: evidence.samples(),
            failures: evidence.failures(),
            reason: "infinite assurance needs at least one success",
        }),
    }
}

/// One decimal place, ties to even on the exact binary value (`81.25`
/// renders as `81.2`).
pub fn percent_one_decimal(percent: f64) -> String {
    format!("{percent:.1}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize),
    serde(rename_all = "kebab-case")
)]
pub enum SeriesKind {
    /// Discrete points from a finite plan.
    FiniteStep,
    /// A sampled continuous curve.
    InfiniteCurve,
}

impl SeriesKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeriesKind::FiniteStep => "finite-step",
            SeriesKind::InfiniteCurve => "infinite-curve",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// A labelled series of points with strictly increasing `x`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PlotSeries {
    pub label: String,
    pub kind: SeriesKind,
    pub points: Vec<Point>,
}

impl PlotSeries {
    pub fn is_strictly_increasing(&self) -> bool {
        self.points.windows(2).all(|w| w[0].x < w[1].x)
    }
}

/// Which reliability a finite step is plotted against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepAxis {
    /// Reliability needed of the additional units, `1 - d/m`.
    #[default]
    Step,
    /// Reliability of the whole population, `1 - (f + d)/(n + m)`.
    Overall,
}

const MIN_RESOLUTION: usize = 2;

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < MIN_RESOLUTION {
        Err(Error::InvalidResolution {
            got: resolution,
            min: MIN_RESOLUTION,
        })
    } else {
        Ok(())
    }
}

/// `k / resolution` for `k` in `range`.
fn grid(resolution: usize, range: impl Iterator<Item = usize>) -> impl Iterator<Item = f64> {
    range.map(move |k| k as f64 / resolution as f64)
}

fn series_label(column: Column) -> String {
    match column {
        Column::Finite(m) => format!("m={m}"),
        Column::Infinite => String::from("m=inf"),
    }
}

/// Confidence against reliability: step points for each finite column and a
/// curve sampled at `resolution + 1` points for the infinite column.
pub fn confidence_series(
    evidence: TestEvidence,
    columns: &[Column],
    resolution: usize,
    axis: StepAxis,
) -> Result<Vec<PlotSeries>> {
    check_resolution(resolution)?;
    columns
        .iter()
        .map(|&column| {
            let (kind, points) = match column {
                Column::Finite(m) => {
                    let steps = step_grid(&FinitePlan::new(evidence, m))?;
                    let points = steps
                        .iter()
                        .rev()
                        .map(|s| Point {
                            x: match axis {
                                StepAxis::Step => s.step_reliability.value(),
                                StepAxis::Overall => s.overall_reliability.value(),
                            },
                            y: s.confidence.value(),
                        })
                        .collect();
                    (SeriesKind::FiniteStep, points)
                }
                Column::Infinite => {
                    let points = grid(resolution, 0..=resolution)
                        .map(|x| Point {
                            x,
                            y: confidence_infinite(evidence, Probability::clamped(x)).value(),
                        })
                        .collect();
                    (SeriesKind::InfiniteCurve, points)
                }
            };
            Ok(PlotSeries {
                label: series_label(column),
                kind,
                points,
            })
        })
        .collect()
}

/// Reliability against confidence, sampled at the interior grid points
/// `1/resolution .. (resolution - 1)/resolution`.
pub fn reliability_series(
    evidence: TestEvidence,
    columns: &[Column],
    resolution: usize,
) -> Result<Vec<PlotSeries>> {
    check_resolution(resolution)?;
    columns
        .iter()
        .map(|&column| {
            let points = grid(resolution, 1..resolution)
                .map(|x| {
                    let c = Probability::clamped(x);
                    let y = match column {
                        Column::Finite(m) => reliability_finite(&FinitePlan::new(evidence, m), c)?,
                        Column::Infinite => reliability_infinite(evidence, c)?,
                    };
                    Ok(Point { x, y: y.value() })
                })
                .collect::<Result<Vec<_>>>()?;
            let kind = match column {
                Column::Finite(_) => SeriesKind::FiniteStep,
                Column::Infinite => SeriesKind::InfiniteCurve,
            };
            Ok(PlotSeries {
                label: series_label(column),
                kind,
                points,
            })
        })
        .collect()
}

/// Reliability, confidence, and their minimum over a failure-probability
/// grid `p = k / resolution`, with reliability `1 - p`.
///
/// The reliability and confidence curves cross at the infinite-population
/// assurance; [`crossing`] recovers it.
pub fn assurance_crossing_series(
    evidence: TestEvidence,
    resolution: usize,
) -> Result<Vec<PlotSeries>> {
    check_resolution(resolution)?;
    if evidence.all_failed() {
        return Err(Error::NoSolution {
            samples: evidence.samples(),
        });
    }
    let xs: Vec<f64> = grid(resolution, 0..=resolution).collect();
    let curve = |label: &str, y: &dyn Fn(f64) -> f64| PlotSeries {
        label: String::from(label),
        kind: SeriesKind::InfiniteCurve,
        points: xs.iter().map(|&x| Point { x, y: y(x) }).collect(),
    };
    let reliability = |p: f64| 1.0 - p;
    let confidence = |p: f64| confidence_infinite(evidence, Probability::clamped(1.0 - p)).value();
    Ok(alloc::vec![
        curve("reliability", &reliability),
        curve("confidence", &confidence),
        curve("assurance", &|p| reliability(p).min(confidence(p))),
    ])
}

/// First crossing of two series sampled on the same `x` grid, located by
/// linear interpolation between the bracketing samples.
pub fn crossing(a: &PlotSeries, b: &PlotSeries) -> Option<Point> {
    let diffs: Vec<(f64, f64, f64)> = a
        .points
        .iter()
        .zip(&b.points)
        .map(|(p, q)| (p.x, p.y - q.y, p.y))
        .collect();
    for pair in diffs.windows(2) {
        let (x0, d0, y0) = pair[0];
        let (x1, d1, y1) = pair[1];
        if d0 == 0.0 {
            return Some(Point { x: x0, y: y0 });
        }
        if (d0 < 0.0) != (d1 < 0.0) || d1 == 0.0 {
            let t = d0 / (d0 - d1);
            return Some(Point {
                x: x0 + t * (x1 - x0),
                y: y0 + t * (y1 - y0),
            });
        }
    }
    None
}
