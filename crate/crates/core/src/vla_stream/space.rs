use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One documented action.
///
/// `description` is the lead phrase of the README line ("Click on an
/// element"); the value and position clauses are generated from the two
/// `requires_*` flags, which the validator also reads.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpaceEntry {
    pub name: String,
    pub description: String,
    pub requires_value: bool,
    pub requires_position: bool,
    /// What the value holds, e.g. "the string to type".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_hint: Option<String>,
    #[serde(default)]
    pub device_tags: BTreeSet<String>,
}

impl ActionSpaceEntry {
    fn builtin(name: &str, description: &str, value_hint: Option<&str>, requires_position: bool, tags: &[&str]) -> Self {
        Self {
            name: name.into(),
            description: description.into(),
            requires_value: value_hint.is_some(),
            requires_position,
            value_hint: value_hint.map(Into::into),
            device_tags: tags.iter().map(|t| t.to_string()).collect(),
        }
    }

    /// The README sentence for this action, without numbering.
    pub fn readme_line(&self) -> String {
        let value = match (&self.requires_value, &self.value_hint) {
            (false, _) => "value is not applicable".to_owned(),
            (true, Some(hint)) => format!("value is {hint}"),
            (true, None) => "value is required".to_owned(),
        };
        let position = if self.requires_position {
            "the position [x,y] is required"
        } else {
            "the position [x,y] is not applicable"
        };
        format!("'{}': {}, {value} and {position}.", self.name, self.description)
    }
}

/// An ordered set of actions available on one device.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpace {
    pub device: String,
    entries: Vec<ActionSpaceEntry>,
}

impl ActionSpace {
    pub fn new(device: impl Into<String>, entries: Vec<ActionSpaceEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("action space is empty".into()));
        }
        let mut seen = HashSet::new();
        for e in &entries {
            if e.name.trim().is_empty() {
                return Err(Error::InvalidParameter("action name is empty".into()));
            }
            if e.description.trim().is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "action {:?} has no description",
                    e.name
                )));
            }
            if !seen.insert(e.name.as_str()) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate action {:?}",
                    e.name
                )));
            }
        }
        Ok(Self {
            device: device.into(),
            entries,
        })
    }

    /// Parses a JSON list of entries.
    pub fn from_json(device: impl Into<String>, json: &str) -> Result<Self> {
        let entries: Vec<ActionSpaceEntry> = serde_json::from_str(json)?;
        Self::new(device, entries)
    }

    pub fn from_file(device: impl Into<String>, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(device, &text)
    }

    pub fn entries(&self) -> &[ActionSpaceEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&ActionSpaceEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Mind2Web-style web actions.
    pub fn web() -> Self {
        let tags = &["web"];
        Self {
            device: "web".into(),
            entries: vec![
                ActionSpaceEntry::builtin("CLICK", "Click on an element", None, true, tags),
                ActionSpaceEntry::builtin("TYPE", "Type a string into an element", Some("the string to type"), true, tags),
                ActionSpaceEntry::builtin("SELECT", "Select a value for an element", Some("the option to select"), true, tags),
            ],
        }
    }

    /// AITW-style mobile actions.
    pub fn mobile() -> Self {
        let tags = &["mobile"];
        let none = |name: &str, description: &str| ActionSpaceEntry::builtin(name, description, None, false, tags);
        Self {
            device: "mobile".into(),
            entries: vec![
                ActionSpaceEntry::builtin("CLICK", "Tap on an element", None, true, tags),
                ActionSpaceEntry::builtin("TYPE", "Type a string into the focused input", Some("the string to type"), false, tags),
                none("SCROLL UP", "Scroll the screen up"),
                none("SCROLL DOWN", "Scroll the screen down"),
                none("SCROLL LEFT", "Scroll the screen left"),
                none("SCROLL RIGHT", "Scroll the screen right"),
                none("PRESS BACK", "Press the back button"),
                none("PRESS HOME", "Press the home button"),
                none("PRESS ENTER", "Press the enter key"),
                none("STATUS TASK COMPLETE", "Report that the task is complete"),
                none("STATUS TASK IMPOSSIBLE", "Report that the task cannot be completed"),
            ],
        }
    }

    /// MiniWob actions.
    pub fn miniwob() -> Self {
        let tags = &["miniwob"];
        Self {
            device: "miniwob".into(),
            entries: vec![
                ActionSpaceEntry::builtin("CLICK", "Click on an element", None, true, tags),
                ActionSpaceEntry::builtin("TYPE", "Type a string into the focused input", Some("the string to type"), false, tags),
            ],
        }
    }

    /// Looks up a built-in space by device name.
    pub fn builtin(device: &str) -> Option<Self> {
        match device.to_ascii_lowercase().as_str() {
            "web" | "mind2web" => Some(Self::web()),
            "mobile" | "aitw" | "android" => Some(Self::mobile()),
            "miniwob" => Some(Self::miniwob()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_sizes() {
        assert_eq!(ActionSpace::web().len(), 3);
        assert_eq!(ActionSpace::mobile().len(), 11);
        assert_eq!(ActionSpace::miniwob().len(), 2);
        assert!(ActionSpace::builtin("AITW").is_some());
        assert!(ActionSpace::builtin("desktop").is_none());
    }

    #[test]
    fn builtins_pass_validation() {
        for s in [ActionSpace::web(), ActionSpace::mobile(), ActionSpace::miniwob()] {
            ActionSpace::new(s.device.clone(), s.entries().to_vec()).unwrap();
        }
    }

    #[test]
    fn click_line_matches_readme_wording() {
        let web = ActionSpace::web();
        assert_eq!(
            web.get("CLICK").unwrap().readme_line(),
            "'CLICK': Click on an element, value is not applicable and the position [x,y] is required."
        );
    }

    #[test]
    fn from_json_rejects_duplicates() {
        let json = r#"[
            {"name":"TAP","description":"Tap","requires_value":false,"requires_position":true},
            {"name":"TAP","description":"Tap again","requires_value":false,"requires_position":true}
        ]"#;
        assert!(ActionSpace::from_json("watch", json).is_err());
        let ok = r#"[{"name":"TAP","description":"Tap","requires_value":false,"requires_position":true}]"#;
        assert_eq!(ActionSpace::from_json("watch", ok).unwrap().len(), 1);
        assert!(ActionSpace::from_json("watch", "[]").is_err());
    }
}
