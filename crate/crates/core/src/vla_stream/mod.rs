//! Structured actions, per-device action spaces, README prompts, and the
//! interleaved vision-language-action sequence packers.

mod action;
mod pack;
mod readme;
mod space;

pub use action::{check_action, parse_action, serialize_action, validate_action, ActionRecord, Violation};
pub use pack::{
    pack_grounding, pack_navigation, Element, Episode, GroundingPair, GroundingSample, InterleavedSequence, Step,
    DEFAULT_HISTORY, OMITTED_IMAGE_TOKEN,
};
pub use readme::{render_readme, render_system_prompt, render_task};
pub use space::{ActionSpace, ActionSpaceEntry};
