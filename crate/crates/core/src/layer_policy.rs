//! Which transformer layers apply token selection.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Every layer.
    All,
    /// The first `insert_count` layers.
    Early,
    /// The last `insert_count` layers.
    Late,
    /// Alternating layers starting at layer 0.
    Cross,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::All => "all",
            Strategy::Early => "early",
            Strategy::Late => "late",
            Strategy::Cross => "cross",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "all" => Ok(Strategy::All),
            "early" => Ok(Strategy::Early),
            "late" => Ok(Strategy::Late),
            "cross" => Ok(Strategy::Cross),
            other => Err(Error::InvalidParameter(format!("unknown strategy {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSchedule {
    pub num_layers: usize,
    pub strategy: Strategy,
    pub insert_count: usize,
    pub flags: Vec<bool>,
}

impl LayerSchedule {
    /// Indices of layers that apply selection.
    pub fn active_layers(&self) -> Vec<usize> {
        self.flags
            .iter()
            .enumerate()
            .filter_map(|(i, &on)| on.then_some(i))
            .collect()
    }
}

/// Builds the per-layer flags for `strategy`.
///
/// `All` ignores `insert_count` and enables every layer. `Cross` can place at
/// most `ceil(num_layers / 2)` insertions.
pub fn make_schedule(num_layers: usize, strategy: Strategy, insert_count: usize) -> Result<LayerSchedule> {
    if num_layers == 0 {
        return Err(Error::InvalidParameter("num_layers must be at least 1".into()));
    }
    let insert_count = if strategy == Strategy::All {
        num_layers
    } else {
        insert_count
    };
    let capacity = match strategy {
        Strategy::Cross => num_layers.div_ceil(2),
        _ => num_layers,
    };
    if insert_count == 0 || insert_count > capacity {
        return Err(Error::CountExceedsLayers {
            num_layers,
            insert_count,
            strategy: strategy.as_str(),
        });
    }
    let flags = (0..num_layers)
        .map(|i| match strategy {
            Strategy::All => true,
            Strategy::Early => i < insert_count,
            Strategy::Late => i >= num_layers - insert_count,
            Strategy::Cross => i % 2 == 0 && i / 2 < insert_count,
        })
        .collect();
    Ok(LayerSchedule {
        num_layers,
        strategy,
        insert_count,
        flags,
    })
}
