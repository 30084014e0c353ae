//! Checks tails from an oracle against a set of bounds over a grid.

use serde::Serialize;

use super::montecarlo::TailEstimate;
use super::{
    exact_rademacher_tails, mc_hilbert_tails, mc_martingale_tails, sum_distribution,
    DiscreteZeroMeanDistribution, HilbertInstance, MartingaleSpec, SplitSums, WeightVector,
};
use crate::bounds::{BoundKind, Bounds};
use crate::digits::format_shortest;
use crate::error::{Error, Result};

/// A row is a violation when `tail - margin > bound + VIOLATION_SLACK`.
pub const VIOLATION_SLACK: f64 = 1e-9;

/// Below this many terms the Rademacher source walks all sign patterns;
/// above it, it uses meet-in-the-middle.
const DIRECT_LIMIT: usize = 12;

/// Anything that can produce tail probabilities on a grid.
pub trait TailSource: Sync {
    /// Whether tails are `P(|S| >= x)`.
    fn two_sided(&self) -> bool;
    fn tails(&self, xs: &[f64]) -> Result<Vec<TailEstimate>>;
}

pub struct RademacherSource {
    pub weights: WeightVector,
    pub two_sided: bool,
}

impl TailSource for RademacherSource {
    fn two_sided(&self) -> bool {
        self.two_sided
    }

    fn tails(&self, xs: &[f64]) -> Result<Vec<TailEstimate>> {
        let values = if self.weights.len() <= DIRECT_LIMIT {
            exact_rademacher_tails(&self.weights, xs, self.two_sided)?
        } else {
            let split = SplitSums::new(&self.weights)?;
            xs.iter()
                .map(|&x| split.tail(x, self.two_sided))
                .collect::<Result<_>>()?
        };
        Ok(values.into_iter().map(TailEstimate::exact).collect())
    }
}

pub struct BoundedSource {
    pub weights: WeightVector,
    pub dists: Vec<DiscreteZeroMeanDistribution>,
    pub two_sided: bool,
}

impl TailSource for BoundedSource {
    fn two_sided(&self) -> bool {
        self.two_sided
    }

    fn tails(&self, xs: &[f64]) -> Result<Vec<TailEstimate>> {
        let law = sum_distribution(&self.weights, &self.dists)?;
        xs.iter()
            .map(|&x| law.tail(x, self.two_sided).map(TailEstimate::exact))
            .collect()
    }
}

pub struct MartingaleSource {
    pub spec: MartingaleSpec,
    pub samples: usize,
    pub seed: u64,
    pub two_sided: bool,
}

impl TailSource for MartingaleSource {
    fn two_sided(&self) -> bool {
        self.two_sided
    }

    fn tails(&self, xs: &[f64]) -> Result<Vec<TailEstimate>> {
        mc_martingale_tails(&self.spec, xs, self.samples, self.seed, self.two_sided)
    }
}

pub struct HilbertSource {
    pub instance: HilbertInstance,
    pub samples: usize,
    pub seed: u64,
}

impl TailSource for HilbertSource {
    fn two_sided(&self) -> bool {
        true
    }

    fn tails(&self, xs: &[f64]) -> Result<Vec<TailEstimate>> {
        mc_hilbert_tails(&self.instance, xs, self.samples, self.seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub x: f64,
    pub tail: f64,
    pub margin: f64,
    /// One value per entry of [`VerificationReport::kinds`].
    pub bounds: Vec<f64>,
    pub violation: bool,
}

impl ReportRow {
    fn detect(&mut self) {
        let lower = self.tail - self.margin;
        self.violation = self.bounds.iter().any(|&b| lower > b + VIOLATION_SLACK);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub two_sided: bool,
    pub kinds: Vec<BoundKind>,
    pub rows: Vec<ReportRow>,
}

impl VerificationReport {
    pub fn violation_count(&self) -> usize {
        self.rows.iter().filter(|r| r.violation).count()
    }

    pub fn has_violation(&self) -> bool {
        self.rows.iter().any(|r| r.violation)
    }

    /// Smallest `bound - (tail - margin)` over all rows and kinds.
    pub fn min_slack(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.bounds.iter().map(move |b| b - (r.tail - r.margin)))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn column(&self, kind: BoundKind) -> Option<Vec<f64>> {
        let i = self.kinds.iter().position(|&k| k == kind)?;
        Some(self.rows.iter().map(|r| r.bounds[i]).collect())
    }

    /// Recomputes every violation flag from the stored columns.
    pub fn redetect(&mut self) {
        self.rows.iter_mut().for_each(ReportRow::detect);
    }

    pub fn csv_header(&self) -> String {
        let mut cols = vec!["x", "tail", "margin"];
        cols.extend(self.kinds.iter().map(|k| k.name()));
        cols.push("violation");
        cols.join(",")
    }

    /// CSV with shortest round-trip number formatting.
    pub fn to_csv(&self) -> String {
        let mut out = self.csv_header();
        out.push('\n');
        for r in &self.rows {
            let mut fields: Vec<String> =
                [r.x, r.tail, r.margin].into_iter().map(format_shortest).collect();
            fields.extend(r.bounds.iter().copied().map(format_shortest));
            fields.push(u8::from(r.violation).to_string());
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// Parses [`VerificationReport::to_csv`] output. Flags are taken as
    /// written; call [`VerificationReport::redetect`] to recheck them.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Usage("report is empty".into()))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols.len() < 5 || cols[..3] != ["x", "tail", "margin"] || cols[cols.len() - 1] != "violation" {
            return Err(Error::Usage(format!("line 1: unexpected report header `{header}`")));
        }
        let kinds = cols[3..cols.len() - 1]
            .iter()
            .map(|c| c.parse::<BoundKind>())
            .collect::<Result<Vec<_>>>()?;
        let two_sided = kinds[0].is_two_sided();
        if kinds.iter().any(|k| k.is_two_sided() != two_sided) {
            return Err(Error::Usage("report mixes one- and two-sided bounds".into()));
        }
        let mut rows = Vec::new();
        for (idx, line) in lines {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != cols.len() {
                return Err(Error::Usage(format!(
                    "line {}: expected {} fields, found {}",
                    idx + 1,
                    cols.len(),
                    fields.len()
                )));
            }
            let num = |i: usize| -> Result<f64> {
                fields[i].parse::<f64>().map_err(|_| {
                    Error::Usage(format!("line {}: field `{}` is not a number: `{}`", idx + 1, cols[i], fields[i]))
                })
            };
            let violation = match fields[fields.len() - 1] {
                "0" => false,
                "1" => true,
                other => {
                    return Err(Error::Usage(format!(
                        "line {}: violation flag must be 0 or 1, got `{other}`",
                        idx + 1
                    )))
                }
            };
            rows.push(ReportRow {
                x: num(0)?,
                tail: num(1)?,
                margin: num(2)?,
                bounds: (3..cols.len() - 1).map(num).collect::<Result<_>>()?,
                violation,
            });
        }
        Ok(VerificationReport { two_sided, kinds, rows })
    }
}

/// Evaluates `source` on `grid` and compares against each bound in `kinds`.
/// One-sided sources pair with Hoeffding, V, W and Edelman-1.5; two-sided
/// sources with Markov and W~.
pub fn verify_instance(
    source: &dyn TailSource,
    kinds: &[BoundKind],
    grid: &[f64],
) -> Result<VerificationReport> {
    verify_instance_with(&Bounds::default(), source, kinds, grid)
}

pub fn verify_instance_with(
    bounds: &Bounds,
    source: &dyn TailSource,
    kinds: &[BoundKind],
    grid: &[f64],
) -> Result<VerificationReport> {
    if kinds.is_empty() {
        return Err(Error::Usage("no bounds selected".into()));
    }
    let two_sided = source.two_sided();
    if let Some(k) = kinds.iter().find(|k| k.is_two_sided() != two_sided) {
        let side = if two_sided { "two-sided" } else { "one-sided" };
        return Err(Error::Usage(format!("bound `{k}` does not apply to {side} tails")));
    }
    let mut kinds = kinds.to_vec();
    kinds.sort();
    kinds.dedup();

    let tails = source.tails(grid)?;
    let rows = grid
        .iter()
        .zip(tails)
        .map(|(&x, t)| {
            let mut row = ReportRow {
                x,
                tail: t.value,
                margin: t.margin,
                bounds: kinds.iter().map(|&k| bounds.eval(k, x)).collect(),
                violation: false,
            };
            row.detect();
            row
        })
        .collect();
    Ok(VerificationReport { two_sided, kinds, rows })
}
