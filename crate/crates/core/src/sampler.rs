//! Weighted resampling across datasets of very different sizes.
//!
//! Each draw first picks a dataset with probability proportional to its
//! weight, then an item uniformly inside it, with replacement. A dataset's
//! share of the plan depends on its weight only, never on its size.

use std::collections::{BTreeMap, HashSet};

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::seeded;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub name: String,
    pub size: usize,
    pub weight: f64,
}

impl DatasetSpec {
    pub fn new(name: impl Into<String>, size: usize, weight: f64) -> Self {
        Self {
            name: name.into(),
            size,
            weight,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Draw {
    pub dataset: String,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub seed: u64,
    pub draws: Vec<Draw>,
}

impl SamplePlan {
    /// Number of draws per dataset name.
    pub fn counts(&self) -> BTreeMap<&str, usize> {
        let mut out = BTreeMap::new();
        for d in &self.draws {
            *out.entry(d.dataset.as_str()).or_insert(0) += 1;
        }
        out
    }
}

fn validate(specs: &[DatasetSpec]) -> Result<()> {
    if specs.is_empty() {
        return Err(Error::InvalidParameter("no datasets given".into()));
    }
    let mut names = HashSet::new();
    for s in specs {
        if s.size == 0 {
            return Err(Error::InvalidParameter(format!("dataset {:?} is empty", s.name)));
        }
        if !(s.weight > 0.0 && s.weight.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dataset {:?} needs a positive finite weight, got {}",
                s.name, s.weight
            )));
        }
        if !names.insert(s.name.as_str()) {
            return Err(Error::InvalidParameter(format!("duplicate dataset {:?}", s.name)));
        }
    }
    Ok(())
}

/// Draws `n` (dataset, item) pairs.
pub fn plan_draws(specs: &[DatasetSpec], n: usize, seed: u64) -> Result<SamplePlan> {
    validate(specs)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let picker = WeightedIndex::new(specs.iter().map(|s| s.weight))
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = seeded(seed);
    let draws = (0..n)
        .map(|_| {
            let spec = &specs[picker.sample(&mut rng)];
            Draw {
                dataset: spec.name.clone(),
                index: rng.gen_range(0..spec.size),
            }
        })
        .collect();
    Ok(SamplePlan { seed, draws })
}
