//! Training-free building blocks for GUI visual agents.
//!
//! - [`patch_grid`] tokenizes screenshots into patch grids;
//! - [`ui_graph`] groups near-identical neighbouring patches into connected
//!   components with union-find;
//! - [`token_select`] turns components into keep/drop masks that preserve
//!   original token positions, plus the pooling baseline;
//! - [`layer_policy`] decides which layers apply selection;
//! - [`vla_stream`] defines structured actions and packs interleaved
//!   vision-language-action training sequences;
//! - [`sampler`] balances draws across datasets;
//! - [`eval`] scores grounding and navigation predictions.
//!
//! ```
//! use uigraph_core::{build_components, build_grid, select_inference, synthetic};
//!
//! let shot = synthetic::sparse_ui(1344, 756, 10, 0).unwrap();
//! let grid = build_grid(&shot, 14, 2).unwrap();
//! assert_eq!(grid.token_count(), 1296);
//! let map = build_components(&grid, 1.0).unwrap();
//! let mask = select_inference(&map, 0.5).unwrap();
//! assert!(mask.kept_count() < 1296);
//! ```

pub mod error;
pub mod eval;
pub mod export;
pub mod layer_policy;
pub mod patch_grid;
pub mod rng;
pub mod sampler;
pub mod synthetic;
pub mod token_select;
pub mod ui_graph;
pub mod vla_stream;

pub use error::{Error, Result};
pub use eval::{aggregate, macro_average, op_f1, score_grounding, score_step, GroundingCase, MetricTable, StepScore};
pub use layer_policy::{make_schedule, LayerSchedule, Strategy};
pub use patch_grid::{build_grid, token_count, PatchGrid, Screenshot};
pub use sampler::{plan_draws, DatasetSpec, SamplePlan};
pub use token_select::{
    apply_mask, merge_components, select_inference, select_random_baseline, select_training, MergedTokens,
    SelectionMask, SelectionMode,
};
pub use ui_graph::{build_components, component_stats, ComponentMap, GraphStats, Metric};
pub use vla_stream::{
    pack_grounding, pack_navigation, parse_action, render_readme, serialize_action, validate_action, ActionRecord,
    ActionSpace, ActionSpaceEntry, Episode, InterleavedSequence,
};
