//! Grounding and navigation metrics.
//!
//! Conventions:
//! - point-in-box uses a closed box, so edge hits count;
//! - Op.F1 compares lowercase whitespace tokens of `"ACTION value"`;
//! - table averages are unweighted means over the listed splits.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vla_stream::{ActionRecord, ActionSpace};

/// `[x0, y0, x1, y1]` in relative coordinates.
pub type BBox = [f64; 4];

fn check_box(b: &BBox) -> Result<()> {
    let [x0, y0, x1, y1] = *b;
    if 0.0 <= x0 && x0 < x1 && x1 <= 1.0 && 0.0 <= y0 && y0 < y1 && y1 <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("invalid bounding box {b:?}")))
    }
}

pub fn point_in_box(point: [f64; 2], b: &BBox) -> bool {
    let [x, y] = point;
    b[0] <= x && x <= b[2] && b[1] <= y && y <= b[3]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundingCase {
    #[serde(default)]
    pub query: String,
    pub gt_bbox: BBox,
    pub pred_point: [f64; 2],
    #[serde(default)]
    pub split_tags: BTreeSet<String>,
}

impl GroundingCase {
    pub fn validate(&self) -> Result<()> {
        check_box(&self.gt_bbox)?;
        if !self.pred_point.iter().all(|v| (0.0..=1.0).contains(v)) {
            return Err(Error::InvalidParameter(format!(
                "predicted point {:?} outside [0, 1]",
                self.pred_point
            )));
        }
        Ok(())
    }
}

pub fn score_grounding(case: &GroundingCase) -> bool {
    point_in_box(case.pred_point, &case.gt_bbox)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepScore {
    pub element_correct: bool,
    pub op_f1: f64,
    pub step_success: bool,
}

fn op_tokens(rec: &ActionRecord) -> Vec<String> {
    let mut text = rec.action.clone();
    if let Some(v) = &rec.value {
        text.push(' ');
        text.push_str(v);
    }
    text.split_whitespace().map(str::to_lowercase).collect()
}

/// Token-level F1 between two operations.
pub fn op_f1(pred: &ActionRecord, gt: &ActionRecord) -> f64 {
    let p = op_tokens(pred);
    let g = op_tokens(gt);
    if p.is_empty() || g.is_empty() {
        return if p.is_empty() && g.is_empty() { 1.0 } else { 0.0 };
    }
    let mut remaining: BTreeMap<&str, usize> = BTreeMap::new();
    for t in &g {
        *remaining.entry(t).or_insert(0) += 1;
    }
    let mut overlap = 0usize;
    for t in &p {
        if let Some(c) = remaining.get_mut(t.as_str()) {
            if *c > 0 {
                *c -= 1;
                overlap += 1;
            }
        }
    }
    if overlap == 0 {
        return 0.0;
    }
    let precision = overlap as f64 / p.len() as f64;
    let recall = overlap as f64 / g.len() as f64;
    2.0 * precision * recall / (precision + recall)
}

/// Scores one navigation step against its ground truth.
pub fn score_step(pred: &ActionRecord, gt: &ActionRecord, gt_bbox: Option<&BBox>, space: &ActionSpace) -> Result<StepScore> {
    if space.get(&pred.action).is_none() {
        return Err(Error::SpaceMismatch(pred.action.clone()));
    }
    let gt_entry = space
        .get(&gt.action)
        .ok_or_else(|| Error::SpaceMismatch(gt.action.clone()))?;

    let element_correct = if gt_entry.requires_position {
        let b = gt_bbox.ok_or_else(|| {
            Error::InvalidParameter(format!("ground truth {} needs a bounding box", gt.action))
        })?;
        check_box(b)?;
        pred.position.is_some_and(|p| point_in_box(p, b))
    } else {
        true
    };
    let value_ok = !gt_entry.requires_value
        || match (&pred.value, &gt.value) {
            (Some(p), Some(g)) => p.trim().to_lowercase() == g.trim().to_lowercase(),
            _ => false,
        };
    Ok(StepScore {
        element_correct,
        op_f1: op_f1(pred, gt),
        step_success: element_correct && pred.action == gt.action && value_ok,
    })
}

/// A navigation step record as read from JSONL.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepCase {
    pub device: String,
    pub pred: ActionRecord,
    pub gt: ActionRecord,
    #[serde(default)]
    pub gt_bbox: Option<BBox>,
    #[serde(default)]
    pub split_tags: BTreeSet<String>,
}

/// Per-case metric values in `[0, 1]` plus the splits the case belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoredCase {
    pub tags: BTreeSet<String>,
    pub values: Vec<f64>,
}

impl ScoredCase {
    pub fn grounding(case: &GroundingCase) -> Self {
        Self {
            tags: case.split_tags.clone(),
            values: vec![if score_grounding(case) { 1.0 } else { 0.0 }],
        }
    }

    pub fn step(score: &StepScore, tags: BTreeSet<String>) -> Self {
        let b = |v: bool| if v { 1.0 } else { 0.0 };
        Self {
            tags,
            values: vec![b(score.element_correct), score.op_f1, b(score.step_success)],
        }
    }
}

pub const GROUNDING_METRICS: &[&str] = &["accuracy"];
pub const STEP_METRICS: &[&str] = &["ele_acc", "op_f1", "step_sr"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub split: String,
    pub count: usize,
    /// Percentages.
    pub values: Vec<f64>,
}

/// Per-split metric means (in percent) and their macro average.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricTable {
    pub metrics: Vec<String>,
    pub rows: Vec<TableRow>,
    pub average: Vec<f64>,
}

/// Groups cases by split tag and averages.
///
/// With `splits` the rows follow that order, otherwise every tag seen is used
/// in sorted order. Splits with no cases are left out. When no case carries
/// any tag, a single `all` row is reported.
pub fn aggregate(metrics: &[&str], cases: &[ScoredCase], splits: Option<&[String]>) -> Result<MetricTable> {
    if cases.is_empty() {
        return Err(Error::InvalidParameter("nothing to aggregate".into()));
    }
    if let Some(bad) = cases.iter().find(|c| c.values.len() != metrics.len()) {
        return Err(Error::LengthMismatch {
            expected: metrics.len(),
            actual: bad.values.len(),
        });
    }
    let order: Vec<String> = match splits {
        Some(s) => s.to_vec(),
        None => {
            let tags: BTreeSet<&String> = cases.iter().flat_map(|c| &c.tags).collect();
            tags.into_iter().cloned().collect()
        }
    };

    let mean_row = |split: String, members: Vec<&ScoredCase>| {
        let n = members.len();
        let values = (0..metrics.len())
            .map(|m| 100.0 * members.iter().map(|c| c.values[m]).sum::<f64>() / n as f64)
            .collect();
        TableRow { split, count: n, values }
    };

    let mut rows: Vec<TableRow> = order
        .into_iter()
        .filter_map(|split| {
            let members: Vec<&ScoredCase> = cases.iter().filter(|c| c.tags.contains(&split)).collect();
            (!members.is_empty()).then(|| mean_row(split, members))
        })
        .collect();
    if rows.is_empty() && splits.is_none() {
        rows.push(mean_row("all".into(), cases.iter().collect()));
    }
    if rows.is_empty() {
        return Err(Error::InvalidParameter("no case matches the requested splits".into()));
    }
    let average = (0..metrics.len())
        .map(|m| macro_average(&rows.iter().map(|r| r.values[m]).collect::<Vec<_>>()))
        .collect();
    Ok(MetricTable {
        metrics: metrics.iter().map(|s| s.to_string()).collect(),
        rows,
        average,
    })
}

/// Unweighted mean of per-split values.
pub fn macro_average(cells: &[f64]) -> f64 {
    if cells.is_empty() {
        return f64::NAN;
    }
    cells.iter().sum::<f64>() / cells.len() as f64
}

impl MetricTable {
    /// Aligned text rendering with one decimal.
    pub fn to_text(&self) -> String {
        let mut header = vec!["split".to_owned(), "n".to_owned()];
        header.extend(self.metrics.iter().cloned());
        let mut lines: Vec<Vec<String>> = vec![header];
        for r in &self.rows {
            let mut cells = vec![r.split.clone(), r.count.to_string()];
            cells.extend(r.values.iter().map(|v| format!("{v:.1}")));
            lines.push(cells);
        }
        let mut avg = vec!["avg".to_owned(), String::new()];
        avg.extend(self.average.iter().map(|v| format!("{v:.1}")));
        lines.push(avg);

        let cols = lines[0].len();
        let widths: Vec<usize> = (0..cols)
            .map(|c| lines.iter().map(|l| l[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for line in &lines {
            for (c, cell) in line.iter().enumerate() {
                if c == 0 {
                    let _ = write!(out, "{cell:<w$}", w = widths[c]);
                } else {
                    let _ = write!(out, "  {cell:>w$}", w = widths[c]);
                }
            }
            out.push('\n');
        }
        out
    }
}
