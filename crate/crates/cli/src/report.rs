//! Report types and CSV formatting.

use serde::{Deserialize, Serialize};
use spectra_core::verify::SuiteReport;
use spectra_core::{EigenvalueHit, GapInterval, LambdaCurveTable, SolverConfig};

use crate::spec::ProblemSpec;

/// Fixed-width scientific notation with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// CSV document: header row plus data rows, `\n` line endings.
pub fn csv<I, R>(header: &[String], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.into_iter().collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HitRecord {
    pub lambda: f64,
    pub multiplicity: usize,
    pub bracket: (f64, f64),
    pub negative_type: Vec<f64>,
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_mismatch: Option<usize>,
}

impl From<&EigenvalueHit> for HitRecord {
    fn from(h: &EigenvalueHit) -> Self {
        Self {
            lambda: h.lambda,
            multiplicity: h.multiplicity,
            bracket: h.bracket,
            negative_type: h
                .negative_type
                .as_ref()
                .map(|c| c.values.clone())
                .unwrap_or_default(),
            certified: h.negative_type.as_ref().is_some_and(|c| c.certified),
            kernel_mismatch: h.kernel_mismatch,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub seconds: f64,
}

/// Result of an `eig` run. Infinite gap ends serialize as `null`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub problem: ProblemSpec,
    pub config: SolverConfig,
    pub interval: (f64, f64),
    pub gap: GapInterval,
    pub hits: Vec<HitRecord>,
    /// Set when the bisection budget ran out; `hits` is then incomplete.
    pub partial: bool,
    pub timings: Timings,
}

impl RunReport {
    pub fn to_csv(&self) -> String {
        csv(
            &header(&[
                "lambda",
                "multiplicity",
                "bracket_lo",
                "bracket_hi",
                "neg_type_max",
            ]),
            self.hits.iter().map(|h| {
                let max = h.negative_type.iter().copied().reduce(f64::max);
                vec![
                    fmt_f64(h.lambda),
                    h.multiplicity.to_string(),
                    fmt_f64(h.bracket.0),
                    fmt_f64(h.bracket.1),
                    max.map(fmt_f64).unwrap_or_default(),
                ]
            }),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub lambda: f64,
    pub gap: GapInterval,
    pub t22_spectrum: Vec<f64>,
}

impl GapReport {
    pub fn to_csv(&self) -> String {
        csv(
            &header(&["lambda", "gap_index", "gap_lo", "gap_hi", "guard"]),
            [vec![
                fmt_f64(self.lambda),
                self.gap.index.to_string(),
                fmt_f64(self.gap.lo),
                fmt_f64(self.gap.hi),
                fmt_f64(self.gap.guard),
            ]],
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InertiaReport {
    pub config: SolverConfig,
    pub grid: Vec<f64>,
    pub nu: Vec<usize>,
}

impl InertiaReport {
    pub fn to_csv(&self) -> String {
        csv(
            &header(&["lambda", "nu"]),
            self.grid
                .iter()
                .zip(&self.nu)
                .map(|(l, n)| vec![fmt_f64(*l), n.to_string()]),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvesReport {
    pub config: SolverConfig,
    pub kappa: f64,
    pub tau: f64,
    pub table: LambdaCurveTable,
}

impl CurvesReport {
    pub fn to_csv(&self) -> String {
        let t = &self.table;
        let mut cols = vec!["lambda".to_string()];
        cols.extend((0..t.curves.len()).map(|n| format!("L{n}")));
        cols.push("neg_count".into());
        csv(
            &cols,
            (0..t.grid.len()).map(|i| {
                let mut row = vec![fmt_f64(t.grid[i])];
                row.extend(t.row(i).into_iter().map(fmt_f64));
                row.push(t.negative_counts[i].to_string());
                row
            }),
        )
    }
}

pub fn suite_csv(report: &SuiteReport) -> String {
    csv(
        &header(&[
            "criterion",
            "check",
            "measured",
            "relation",
            "threshold",
            "passed",
        ]),
        report.checks.iter().map(|c| {
            vec![
                c.criterion.to_string(),
                format!("\"{}\"", c.name.replace('"', "\"\"")),
                fmt_f64(c.measured),
                match c.relation {
                    spectra_core::verify::Relation::AtMost => "<=".into(),
                    spectra_core::verify::Relation::AtLeast => ">=".into(),
                },
                fmt_f64(c.threshold),
                c.passed.to_string(),
            ]
        }),
    )
}
