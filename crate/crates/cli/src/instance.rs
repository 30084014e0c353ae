//! Instance files.
//!
//! ```json
//! {"type": "rademacher", "weights": [1, 1, 1], "two_sided": false}
//! {"type": "bounded", "weights": [...], "dists": [{"support": [...], "probs": [...]}]}
//! {"type": "martingale", "weights": [...],
//!  "rule": {"kind": "last_signs", "depth": 1, "table": [{"up": 1, "down": 0.5}, ...]}}
//! {"type": "hilbert", "vectors": [[...], ...], "dists": [...]}
//! ```
//!
//! Weights are rescaled to unit Euclidean norm unless strict mode is on.

use std::path::Path;

use serde::Deserialize;
use tailbound::oracle::{
    BoundedSource, DifferenceRule, DiscreteZeroMeanDistribution, HilbertInstance, HilbertSource,
    MartingaleSource, MartingaleSpec, RademacherSource, TailSource, TwoPointLaw, WeightVector,
};
use tailbound::{Error, Result};

const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug)]
pub enum InstanceFile {
    Rademacher(RademacherFile),
    Bounded(BoundedFile),
    Martingale(MartingaleFile),
    Hilbert(HilbertFile),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RademacherFile {
    #[serde(rename = "type")]
    _type: String,
    pub weights: Vec<f64>,
    #[serde(default)]
    pub two_sided: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundedFile {
    #[serde(rename = "type")]
    _type: String,
    pub weights: Vec<f64>,
    pub dists: Vec<DistFile>,
    #[serde(default)]
    pub two_sided: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MartingaleFile {
    #[serde(rename = "type")]
    _type: String,
    pub weights: Vec<f64>,
    #[serde(default)]
    pub rule: Option<RuleFile>,
    #[serde(default)]
    pub two_sided: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HilbertFile {
    #[serde(rename = "type")]
    _type: String,
    pub vectors: Vec<Vec<f64>>,
    pub dists: Vec<DistFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistFile {
    pub support: Vec<f64>,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawFile {
    pub up: f64,
    pub down: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RuleFile {
    Independent { laws: Vec<LawFile> },
    LastSigns { depth: usize, table: Vec<LawFile> },
}

/// What kind of oracle an instance calls for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oracle {
    Exact,
    MonteCarlo,
}

impl InstanceFile {
    /// Reads the `type` tag first, then deserializes the matching shape
    /// straight from the text so errors keep their line and column.
    pub fn parse(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Tag {
            #[serde(rename = "type")]
            kind: String,
        }
        fn shape<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
            serde_json::from_str(text).map_err(|e| Error::Usage(format!("instance: {e}")))
        }
        let tag: Tag = shape(text)?;
        Ok(match tag.kind.as_str() {
            "rademacher" => InstanceFile::Rademacher(shape(text)?),
            "bounded" => InstanceFile::Bounded(shape(text)?),
            "martingale" => InstanceFile::Martingale(shape(text)?),
            "hilbert" => InstanceFile::Hilbert(shape(text)?),
            other => {
                return Err(Error::Usage(format!(
                    "instance field `type`: expected rademacher, bounded, martingale or hilbert, got `{other}`"
                )))
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn oracle(&self) -> Oracle {
        match self {
            InstanceFile::Rademacher(_) | InstanceFile::Bounded(_) => Oracle::Exact,
            InstanceFile::Martingale(_) | InstanceFile::Hilbert(_) => Oracle::MonteCarlo,
        }
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            InstanceFile::Rademacher(_) => "rademacher",
            InstanceFile::Bounded(_) => "bounded",
            InstanceFile::Martingale(_) => "martingale",
            InstanceFile::Hilbert(_) => "hilbert",
        }
    }

    /// Builds the tail source. `samples` and `seed` only matter for Monte
    /// Carlo instances.
    pub fn into_source(self, strict: bool, samples: usize, seed: u64) -> Result<Box<dyn TailSource>> {
        Ok(match self {
            InstanceFile::Rademacher(f) => Box::new(RademacherSource {
                weights: weights(f.weights, strict)?,
                two_sided: f.two_sided,
            }),
            InstanceFile::Bounded(f) => Box::new(BoundedSource {
                weights: weights(f.weights, strict)?,
                dists: dists(f.dists)?,
                two_sided: f.two_sided,
            }),
            InstanceFile::Martingale(f) => {
                let n = f.weights.len();
                let rule = match f.rule {
                    None => DifferenceRule::Independent(vec![TwoPointLaw::rademacher(); n]),
                    Some(RuleFile::Independent { laws: l }) => {
                        DifferenceRule::Independent(laws(&l, "rule.laws")?)
                    }
                    Some(RuleFile::LastSigns { depth, table }) => DifferenceRule::LastSigns {
                        depth,
                        table: laws(&table, "rule.table")?,
                    },
                };
                let spec = MartingaleSpec::new(weights(f.weights, strict)?, rule)
                    .map_err(|e| field_error("rule", e))?;
                Box::new(MartingaleSource { spec, samples, seed, two_sided: f.two_sided })
            }
            InstanceFile::Hilbert(f) => {
                let dists = dists(f.dists)?;
                let instance = if strict {
                    HilbertInstance::new(f.vectors, dists)
                } else {
                    HilbertInstance::normalized(f.vectors, dists)
                }
                .map_err(|e| field_error("vectors", e))?;
                Box::new(HilbertSource { instance, samples, seed })
            }
        })
    }
}

fn field_error(field: &str, e: Error) -> Error {
    Error::Usage(format!("instance field `{field}`: {e}"))
}

fn weights(raw: Vec<f64>, strict: bool) -> Result<WeightVector> {
    if strict {
        let sq: f64 = raw.iter().map(|a| a * a).sum();
        if (sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(field_error(
                "weights",
                Error::Domain(format!("sum of squares is {sq}, strict mode requires 1")),
            ));
        }
    }
    WeightVector::new(raw).map_err(|e| field_error("weights", e))
}

fn dists(raw: Vec<DistFile>) -> Result<Vec<DiscreteZeroMeanDistribution>> {
    raw.into_iter()
        .enumerate()
        .map(|(i, d)| {
            DiscreteZeroMeanDistribution::new(d.support, d.probs)
                .map_err(|e| field_error(&format!("dists[{i}]"), e))
        })
        .collect()
}

fn laws(raw: &[LawFile], field: &str) -> Result<Vec<TwoPointLaw>> {
    raw.iter()
        .enumerate()
        .map(|(i, l)| TwoPointLaw::new(l.up, l.down).map_err(|e| field_error(&format!("{field}[{i}]"), e)))
        .collect()
}
