use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vla_stream::action::{check_action, serialize_action, ActionRecord};
use crate::vla_stream::readme::{render_system_prompt, render_task};
use crate::vla_stream::space::ActionSpace;

/// Number of past (screenshot, action) pairs kept in navigation sequences.
pub const DEFAULT_HISTORY: usize = 2;

/// Literal stand-in for a historical screenshot that was masked out.
pub const OMITTED_IMAGE_TOKEN: &str = "<image_omitted>";

/// One span of an interleaved sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Element {
    SystemText { text: String },
    TaskText { text: String },
    ImageSlot { image: String },
    /// A historical screenshot replaced by [`OMITTED_IMAGE_TOKEN`].
    OmittedImage { image: String, text: String },
    ActionText { text: String },
    QueryText { text: String },
}

impl Element {
    fn omitted(image: &str) -> Self {
        Element::OmittedImage {
            image: image.to_owned(),
            text: OMITTED_IMAGE_TOKEN.to_owned(),
        }
    }

    pub fn is_action(&self) -> bool {
        matches!(self, Element::ActionText { .. })
    }

    pub fn is_image(&self) -> bool {
        matches!(self, Element::ImageSlot { .. })
    }
}

/// Ordered spans plus a per-span supervision flag.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterleavedSequence {
    pub elements: Vec<Element>,
    pub loss_mask: Vec<bool>,
}

impl InterleavedSequence {
    fn push(&mut self, element: Element, supervised: bool) {
        debug_assert!(!supervised || element.is_action());
        self.elements.push(element);
        self.loss_mask.push(supervised);
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn supervised_count(&self) -> usize {
        self.loss_mask.iter().filter(|&&m| m).count()
    }

    /// Serialized action text of every span.
    pub fn actions(&self) -> impl Iterator<Item = &str> {
        self.elements.iter().filter_map(|e| match e {
            Element::ActionText { text } => Some(text.as_str()),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub image: String,
    pub action: ActionRecord,
}

/// A recorded multi-step trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Episode {
    pub device: String,
    pub task: String,
    pub steps: Vec<Step>,
}

impl Episode {
    pub fn validate(&self, space: &ActionSpace) -> Result<()> {
        if self.steps.is_empty() {
            return Err(Error::InvalidEpisode("episode has no steps".into()));
        }
        for (i, step) in self.steps.iter().enumerate() {
            check_action(&step.action, space)
                .map_err(|e| Error::InvalidEpisode(format!("step {}: {e}", i + 1)))?;
        }
        Ok(())
    }
}

/// One query and its target action on a shared screenshot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundingPair {
    pub query: String,
    pub action: ActionRecord,
}

/// A screenshot with every query annotated on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundingSample {
    pub image: String,
    pub pairs: Vec<GroundingPair>,
}

/// Action-visual streaming: one sequence per step.
///
/// The sequence for step `t` holds the system README and task, the last
/// `min(t - 1, history)` (screenshot, action) pairs, the current screenshot,
/// and the supervised target action. With `mask_visual_history` the past
/// screenshots become [`Element::OmittedImage`] spans.
pub fn pack_navigation(
    episode: &Episode,
    space: &ActionSpace,
    history: usize,
    mask_visual_history: bool,
) -> Result<Vec<InterleavedSequence>> {
    episode.validate(space)?;
    let system = render_system_prompt(space, &episode.device);
    let task = render_task(&episode.task);

    let mut out = Vec::with_capacity(episode.steps.len());
    for (t, step) in episode.steps.iter().enumerate() {
        let mut seq = InterleavedSequence::default();
        seq.push(Element::SystemText { text: system.clone() }, false);
        seq.push(Element::TaskText { text: task.clone() }, false);
        for past in &episode.steps[t.saturating_sub(history)..t] {
            let image = if mask_visual_history {
                Element::omitted(&past.image)
            } else {
                Element::ImageSlot {
                    image: past.image.clone(),
                }
            };
            seq.push(image, false);
            seq.push(
                Element::ActionText {
                    text: serialize_action(&past.action),
                },
                false,
            );
        }
        seq.push(
            Element::ImageSlot {
                image: step.image.clone(),
            },
            false,
        );
        seq.push(
            Element::ActionText {
                text: serialize_action(&step.action),
            },
            true,
        );
        out.push(seq);
    }
    Ok(out)
}

/// Action-query streaming: several query/action turns per screenshot,
/// chunked into sequences of at most `max_turns` turns.
pub fn pack_grounding(
    image: &str,
    pairs: &[GroundingPair],
    max_turns: usize,
    space: &ActionSpace,
) -> Result<Vec<InterleavedSequence>> {
    if pairs.is_empty() {
        return Err(Error::InvalidParameter("no query/action pairs".into()));
    }
    if max_turns == 0 {
        return Err(Error::InvalidParameter("max_turns must be at least 1".into()));
    }
    for pair in pairs {
        check_action(&pair.action, space)?;
    }
    let system = render_system_prompt(space, &space.device);
    Ok(pairs
        .chunks(max_turns)
        .map(|chunk| {
            let mut seq = InterleavedSequence::default();
            seq.push(Element::SystemText { text: system.clone() }, false);
            seq.push(
                Element::ImageSlot {
                    image: image.to_owned(),
                },
                false,
            );
            for pair in chunk {
                seq.push(
                    Element::QueryText {
                        text: pair.query.clone(),
                    },
                    false,
                );
                seq.push(
                    Element::ActionText {
                        text: serialize_action(&pair.action),
                    },
                    true,
                );
            }
            seq
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn click(x: f64) -> ActionRecord {
        ActionRecord::new("CLICK").with_position(x, 0.5)
    }

    fn episode(n: usize) -> Episode {
        Episode {
            device: "web".into(),
            task: "book a table".into(),
            steps: (0..n)
                .map(|i| Step {
                    image: format!("img_{}", i + 1),
                    action: click(i as f64 / 10.0),
                })
                .collect(),
        }
    }

    fn kinds(seq: &InterleavedSequence) -> Vec<&'static str> {
        seq.elements
            .iter()
            .map(|e| match e {
                Element::SystemText { .. } => "system",
                Element::TaskText { .. } => "task",
                Element::ImageSlot { .. } => "image",
                Element::OmittedImage { .. } => "omitted",
                Element::ActionText { .. } => "action",
                Element::QueryText { .. } => "query",
            })
            .collect()
    }

    #[test]
    fn single_step() {
        let seqs = pack_navigation(&episode(1), &ActionSpace::web(), 2, false).unwrap();
        assert_eq!(seqs.len(), 1);
        assert_eq!(kinds(&seqs[0]), ["system", "task", "image", "action"]);
        assert_eq!(seqs[0].loss_mask, [false, false, false, true]);
    }

    #[test]
    fn third_step_carries_two_pairs() {
        let seqs = pack_navigation(&episode(3), &ActionSpace::web(), 2, false).unwrap();
        let third = &seqs[2];
        assert_eq!(
            kinds(third),
            ["system", "task", "image", "action", "image", "action", "image", "action"]
        );
        let images: Vec<_> = third
            .elements
            .iter()
            .filter_map(|e| match e {
                Element::ImageSlot { image } => Some(image.as_str()),
                _ => None,
            })
            .collect();
        assert_eq!(images, ["img_1", "img_2", "img_3"]);
        assert_eq!(third.supervised_count(), 1);
        assert!(*third.loss_mask.last().unwrap());
    }

    #[test]
    fn window_slides() {
        let seqs = pack_navigation(&episode(5), &ActionSpace::web(), 2, false).unwrap();
        let past_actions: Vec<usize> = seqs.iter().map(|s| s.actions().count() - 1).collect();
        assert_eq!(past_actions, [0, 1, 2, 2, 2]);
        assert!(matches!(&seqs[4].elements[2], Element::ImageSlot { image } if image == "img_3"));
        let none = pack_navigation(&episode(3), &ActionSpace::web(), 0, false).unwrap();
        assert_eq!(kinds(&none[2]), ["system", "task", "image", "action"]);
    }

    #[test]
    fn masked_history_replaces_only_past_images() {
        let plain = pack_navigation(&episode(3), &ActionSpace::web(), 2, false).unwrap();
        let masked = pack_navigation(&episode(3), &ActionSpace::web(), 2, true).unwrap();
        let (a, b) = (&plain[2], &masked[2]);
        assert_eq!(a.len(), b.len());
        assert_eq!(a.loss_mask, b.loss_mask);
        let diffs: Vec<usize> = (0..a.len()).filter(|&i| a.elements[i] != b.elements[i]).collect();
        assert_eq!(diffs, [2, 4]);
        assert_eq!(
            b.elements[2],
            Element::OmittedImage {
                image: "img_1".into(),
                text: OMITTED_IMAGE_TOKEN.into()
            }
        );
    }

    #[test]
    fn invalid_episodes() {
        let empty = episode(0);
        assert!(matches!(
            pack_navigation(&empty, &ActionSpace::web(), 2, false),
            Err(Error::InvalidEpisode(_))
        ));
        let mut bad = episode(2);
        bad.steps[1].action = ActionRecord::new("PRESS HOME");
        assert!(matches!(
            pack_navigation(&bad, &ActionSpace::web(), 2, false),
            Err(Error::InvalidEpisode(_))
        ));
    }

    #[test]
    fn grounding_chunks() {
        let pairs: Vec<GroundingPair> = (0..10)
            .map(|i| GroundingPair {
                query: format!("button {i}"),
                action: click(0.05 * i as f64),
            })
            .collect();
        let seqs = pack_grounding("shot", &pairs, 4, &ActionSpace::web()).unwrap();
        let turns: Vec<usize> = seqs.iter().map(InterleavedSequence::supervised_count).collect();
        assert_eq!(turns, [4, 4, 2]);
        assert_eq!(kinds(&seqs[2]), ["system", "image", "query", "action", "query", "action"]);

        let one = pack_grounding("shot", &pairs[..1], 4, &ActionSpace::web()).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].supervised_count(), 1);
    }

    #[test]
    fn grounding_errors() {
        let bad = [GroundingPair {
            query: "x".into(),
            action: ActionRecord::new("CLICK"),
        }];
        assert!(matches!(
            pack_grounding("shot", &bad, 4, &ActionSpace::web()),
            Err(Error::InvalidAction(_))
        ));
        assert!(pack_grounding("shot", &[], 4, &ActionSpace::web()).is_err());
    }
}
