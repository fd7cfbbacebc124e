//! Component-aware visual token selection.
//!
//! Tokens inside a multi-patch component are redundant with each other, so a
//! fraction of them can be skipped. Kept tokens always carry their original
//! flat index, which is what lets attention see the true layout; the merging
//! baseline in [`merge_components`] pools components instead and has no
//! positions to carry.
//!
//! Keep counts: a component of `m >= 2` tokens keeps
//! `max(1, floor((1 - ratio) * m + 0.5))` of them (round half up); singleton
//! components are always kept.

use serde::{Deserialize, Serialize};

use crate::error::{check_ratio, Error, Result};
use crate::rng::{derive_seed, sample_indices, seeded};
use crate::ui_graph::ComponentMap;

/// Ratio used by the selection-ratio ablation's best trade-off.
pub const DEFAULT_RATIO: f64 = 0.5;
/// Skip ratio used when training with the UI graph.
pub const TRAINING_RATIO: f64 = 0.75;

/// Stream key for the random baseline, distinct from every component id.
const BASELINE_STREAM: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionMode {
    TrainingRandom,
    InferenceUniform,
    BaselineRandom,
    None,
}

impl SelectionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SelectionMode::TrainingRandom => "training-random",
            SelectionMode::InferenceUniform => "inference-uniform",
            SelectionMode::BaselineRandom => "baseline-random",
            SelectionMode::None => "none",
        }
    }
}

/// Which tokens survive selection, by original flat index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionMask {
    pub total: usize,
    pub ratio: f64,
    pub mode: SelectionMode,
    /// Present for the seeded modes only.
    pub seed: Option<u64>,
    /// Strictly increasing.
    pub kept_positions: Vec<usize>,
}

impl SelectionMask {
    /// Keeps everything.
    pub fn identity(total: usize) -> Self {
        Self {
            total,
            ratio: 0.0,
            mode: SelectionMode::None,
            seed: None,
            kept_positions: (0..total).collect(),
        }
    }

    pub fn kept_count(&self) -> usize {
        self.kept_positions.len()
    }

    /// Per-token keep flags.
    pub fn flags(&self) -> Vec<bool> {
        let mut flags = vec![false; self.total];
        for &p in &self.kept_positions {
            flags[p] = true;
        }
        flags
    }

    /// Checks range and ordering of the kept positions.
    pub fn validate(&self) -> Result<()> {
        check_ratio(self.ratio)?;
        if let Some(&last) = self.kept_positions.last() {
            if last >= self.total {
                return Err(Error::InvalidParameter(format!(
                    "kept position {last} out of range for {} tokens",
                    self.total
                )));
            }
        }
        if self.kept_positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "kept positions must be strictly increasing".into(),
            ));
        }
        Ok(())
    }
}

/// One pooled feature per component, in canonical id order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MergedTokens {
    pub component_features: Vec<Vec<f64>>,
    pub origin_counts: Vec<usize>,
}

/// A token that survived selection, tagged with its original index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Positioned<T> {
    pub position: usize,
    pub token: T,
}

/// Number of tokens a component of `size` members keeps at `ratio`.
pub fn keep_count(size: usize, ratio: f64) -> usize {
    if size <= 1 {
        return size;
    }
    let target = ((1.0 - ratio) * size as f64 + 0.5).floor() as usize;
    target.clamp(1, size)
}

/// Random per-component skipping, as used during training.
///
/// Each component draws from its own stream seeded by `(seed, component id)`.
pub fn select_training(map: &ComponentMap, ratio: f64, seed: u64) -> Result<SelectionMask> {
    check_ratio(ratio)?;
    let mut kept = Vec::with_capacity(map.token_count());
    for (id, members) in map.members().iter().enumerate() {
        let k = keep_count(members.len(), ratio);
        if k == members.len() {
            kept.extend_from_slice(members);
            continue;
        }
        let mut rng = seeded(derive_seed(seed, id as u64));
        kept.extend(
            sample_indices(&mut rng, members.len(), k)
                .into_iter()
                .map(|rank| members[rank]),
        );
    }
    kept.sort_unstable();
    Ok(SelectionMask {
        total: map.token_count(),
        ratio,
        mode: SelectionMode::TrainingRandom,
        seed: Some(seed),
        kept_positions: kept,
    })
}

/// Deterministic selection for inference: every component keeps members at
/// evenly spaced ranks of its row-major member list, starting with the first.
pub fn select_inference(map: &ComponentMap, ratio: f64) -> Result<SelectionMask> {
    check_ratio(ratio)?;
    let mut kept = Vec::with_capacity(map.token_count());
    for members in map.members() {
        let m = members.len();
        let k = keep_count(m, ratio);
        kept.extend((0..k).map(|i| members[i * m / k]));
    }
    kept.sort_unstable();
    Ok(SelectionMask {
        total: map.token_count(),
        ratio,
        mode: SelectionMode::InferenceUniform,
        seed: None,
        kept_positions: kept,
    })
}

/// Component-agnostic random selection over all `total` tokens.
pub fn select_random_baseline(total: usize, ratio: f64, seed: u64) -> Result<SelectionMask> {
    check_ratio(ratio)?;
    if total == 0 {
        return Err(Error::InvalidParameter("token count must be at least 1".into()));
    }
    let k = keep_count(total, ratio);
    let mut rng = seeded(derive_seed(seed, BASELINE_STREAM));
    let mut kept = sample_indices(&mut rng, total, k);
    kept.sort_unstable();
    Ok(SelectionMask {
        total,
        ratio,
        mode: SelectionMode::BaselineRandom,
        seed: Some(seed),
        kept_positions: kept,
    })
}

/// Mean-pools the features of each component. Positions are lost.
pub fn merge_components(map: &ComponentMap, features: &[Vec<f64>]) -> Result<MergedTokens> {
    if features.len() != map.token_count() {
        return Err(Error::LengthMismatch {
            expected: map.token_count(),
            actual: features.len(),
        });
    }
    let dim = features.first().map_or(0, Vec::len);
    if let Some(bad) = features.iter().find(|f| f.len() != dim) {
        return Err(Error::LengthMismatch {
            expected: dim,
            actual: bad.len(),
        });
    }
    let mut sums = vec![vec![0.0; dim]; map.k()];
    for (f, &label) in features.iter().zip(map.labels()) {
        for (acc, v) in sums[label as usize].iter_mut().zip(f) {
            *acc += v;
        }
    }
    let origin_counts = map.component_sizes().to_vec();
    let component_features = sums
        .into_iter()
        .zip(&origin_counts)
        .map(|(s, &n)| s.into_iter().map(|v| v / n as f64).collect())
        .collect();
    Ok(MergedTokens {
        component_features,
        origin_counts,
    })
}

/// Keeps the masked-in tokens in their original order, tagged with their
/// original indices.
pub fn apply_mask<T: Clone>(mask: &SelectionMask, tokens: &[T]) -> Result<Vec<Positioned<T>>> {
    if tokens.len() != mask.total {
        return Err(Error::LengthMismatch {
            expected: mask.total,
            actual: tokens.len(),
        });
    }
    mask.validate()?;
    Ok(mask
        .kept_positions
        .iter()
        .map(|&position| Positioned {
            position,
            token: tokens[position].clone(),
        })
        .collect())
}
