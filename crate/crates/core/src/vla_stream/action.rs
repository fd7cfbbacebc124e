use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vla_stream::space::ActionSpace;

/// One structured GUI action. Positions are relative to the screenshot,
/// `[x, y]` in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionRecord {
    pub action: String,
    #[serde(default)]
    pub value: Option<String>,
    #[serde(default)]
    pub position: Option<[f64; 2]>,
}

impl ActionRecord {
    pub fn new(action: impl Into<String>) -> Self {
        Self {
            action: action.into(),
            value: None,
            position: None,
        }
    }

    pub fn with_value(mut self, value: impl Into<String>) -> Self {
        self.value = Some(value.into());
        self
    }

    pub fn with_position(mut self, x: f64, y: f64) -> Self {
        self.position = Some([x, y]);
        self
    }

    /// The record as it reads back after serialization.
    pub fn quantized(&self) -> Self {
        Self {
            position: self.position.map(|[x, y]| [quantize(x), quantize(y)]),
            ..self.clone()
        }
    }
}

impl fmt::Display for ActionRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_action(self))
    }
}

fn quantize(v: f64) -> f64 {
    format!("{v:.2}").parse().unwrap_or(v)
}

/// A single reason an action does not fit its action space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    UnknownAction { action: String },
    MissingValue,
    UnexpectedValue,
    MissingPosition,
    UnexpectedPosition,
    CoordinateOutOfRange { axis: char, value: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownAction { action } => write!(f, "unknown action {action:?}"),
            Violation::MissingValue => f.write_str("value is required"),
            Violation::UnexpectedValue => f.write_str("value is not applicable"),
            Violation::MissingPosition => f.write_str("position is required"),
            Violation::UnexpectedPosition => f.write_str("position is not applicable"),
            Violation::CoordinateOutOfRange { axis, value } => {
                write!(f, "coordinate {axis}={value} outside [0, 1]")
            }
        }
    }
}

/// Collects every violation of `rec` against `space`.
pub fn validate_action(rec: &ActionRecord, space: &ActionSpace) -> std::result::Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    if let Some([x, y]) = rec.position {
        for (axis, value) in [('x', x), ('y', y)] {
            if !(0.0..=1.0).contains(&value) {
                out.push(Violation::CoordinateOutOfRange { axis, value });
            }
        }
    }
    match space.get(&rec.action) {
        None => out.insert(
            0,
            Violation::UnknownAction {
                action: rec.action.clone(),
            },
        ),
        Some(entry) => {
            match (entry.requires_value, rec.value.is_some()) {
                (true, false) => out.push(Violation::MissingValue),
                (false, true) => out.push(Violation::UnexpectedValue),
                _ => {}
            }
            match (entry.requires_position, rec.position.is_some()) {
                (true, false) => out.push(Violation::MissingPosition),
                (false, true) => out.push(Violation::UnexpectedPosition),
                _ => {}
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Like [`validate_action`] but folds violations into an [`Error::InvalidAction`].
pub fn check_action(rec: &ActionRecord, space: &ActionSpace) -> Result<()> {
    validate_action(rec, space).map_err(|v| {
        let reasons: Vec<String> = v.iter().map(ToString::to_string).collect();
        Error::InvalidAction(format!("{}: {}", serialize_action(rec), reasons.join("; ")))
    })
}

/// Canonical one-line JSON: keys `action`, `value`, `position` in that
/// order, positions with two decimals.
pub fn serialize_action(rec: &ActionRecord) -> String {
    let json_str = |s: &str| serde_json::to_string(s).expect("strings always serialize");
    let value = rec.value.as_deref().map_or_else(|| "null".to_owned(), json_str);
    let position = rec
        .position
        .map_or_else(|| "null".to_owned(), |[x, y]| format!("[{x:.2},{y:.2}]"));
    format!(
        "{{\"action\":{},\"value\":{value},\"position\":{position}}}",
        json_str(&rec.action)
    )
}

/// Parses an action object. Any key order and coordinate precision is accepted.
pub fn parse_action(s: &str) -> Result<ActionRecord> {
    serde_json::from_str(s).map_err(|e| Error::Parse {
        offset: byte_offset(s, e.line(), e.column()),
        message: e.to_string(),
    })
}

fn byte_offset(s: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let line_start: usize = s
        .split_inclusive('\n')
        .take(line - 1)
        .map(str::len)
        .sum();
    (line_start + column.saturating_sub(1)).min(s.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn click_serializes_canonically() {
        let rec = ActionRecord::new("CLICK").with_position(0.5, 0.25);
        let s = serialize_action(&rec);
        assert_eq!(s, r#"{"action":"CLICK","value":null,"position":[0.50,0.25]}"#);
        assert_eq!(parse_action(&s).unwrap(), rec);
    }

    #[test]
    fn value_is_escaped() {
        let rec = ActionRecord::new("TYPE").with_value("say \"hi\"\n");
        let s = serialize_action(&rec);
        assert_eq!(s, r#"{"action":"TYPE","value":"say \"hi\"\n","position":null}"#);
        assert_eq!(parse_action(&s).unwrap(), rec);
    }

    #[test]
    fn parse_quantization() {
        let rec = ActionRecord::new("CLICK").with_position(0.123_456, 0.987_6);
        let back = parse_action(&serialize_action(&rec)).unwrap();
        assert_eq!(back.position, Some([0.12, 0.99]));
        assert_eq!(back, rec.quantized());
    }

    #[test]
    fn parse_accepts_any_key_order() {
        let rec = parse_action(r#"{"position":[0.333,0.5],"action":"CLICK"}"#).unwrap();
        assert_eq!(rec.position, Some([0.333, 0.5]));
        assert_eq!(rec.value, None);
    }

    #[test]
    fn missing_action_is_parse_error() {
        let err = parse_action(r#"{"value":null,"position":[0.1,0.2]}"#).unwrap_err();
        match err {
            Error::Parse { offset, message } => {
                assert!(message.contains("action"), "{message}");
                assert!(offset > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_offset_points_at_problem() {
        let s = "{\"action\":\"CLICK\",\n\"position\":[0.1,x]}";
        let Error::Parse { offset, .. } = parse_action(s).unwrap_err() else {
            panic!("expected parse error");
        };
        assert_eq!(&s[offset..offset + 1], "x");
    }

    #[test]
    fn violations() {
        let web = ActionSpace::web();
        assert_eq!(
            validate_action(&ActionRecord::new("CLICK").with_position(0.5, 0.5), &web),
            Ok(())
        );
        assert_eq!(
            validate_action(&ActionRecord::new("CLICK").with_position(1.2, 0.5), &web),
            Err(vec![Violation::CoordinateOutOfRange { axis: 'x', value: 1.2 }])
        );
        assert_eq!(
            validate_action(&ActionRecord::new("PRESS HOME"), &web),
            Err(vec![Violation::UnknownAction {
                action: "PRESS HOME".into()
            }])
        );
        assert_eq!(
            validate_action(&ActionRecord::new("CLICK").with_value("x"), &web),
            Err(vec![Violation::UnexpectedValue, Violation::MissingPosition])
        );
        let mobile = ActionSpace::mobile();
        assert_eq!(
            validate_action(&ActionRecord::new("TYPE").with_position(0.1, 0.1), &mobile),
            Err(vec![Violation::MissingValue, Violation::UnexpectedPosition])
        );
    }
}
