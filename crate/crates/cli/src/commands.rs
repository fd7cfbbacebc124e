use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use log::{debug, info};
use serde::{Deserialize, Serialize};
use uigraph_core::eval::{self, ScoredCase, StepCase, GROUNDING_METRICS, STEP_METRICS};
use uigraph_core::export::{ComponentMapRecord, Versioned};
use uigraph_core::sampler::Draw;
use uigraph_core::ui_graph::render_overlay;
use uigraph_core::vla_stream::{Element, GroundingSample};
use uigraph_core::{
    build_components, build_grid, component_stats, make_schedule, pack_grounding, pack_navigation, plan_draws,
    select_inference, select_random_baseline, select_training, ActionSpace, DatasetSpec, Episode, GroundingCase,
    Screenshot,
};

use crate::io::{read_json, read_jsonl, to_json_line, write_output};
use crate::{
    Command, GraphArgs, PackGroundArgs, PackNavArgs, SampleArgs, ScheduleArgs, ScoreArgs, ScoreKind, SelectArgs,
    SelectMode,
};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Graph(a) => graph(a),
        Command::Select(a) => select(a),
        Command::Schedule(a) => schedule(a),
        Command::PackNav(a) => pack_nav(a),
        Command::PackGround(a) => pack_ground(a),
        Command::Sample(a) => sample(a),
        Command::Score(a) => score(a),
    }
}

#[derive(Serialize)]
struct StatsLine<'a> {
    source: &'a str,
    #[serde(flatten)]
    stats: &'a uigraph_core::GraphStats,
}

fn graph(args: GraphArgs) -> Result<()> {
    fs::create_dir_all(&args.out_dir).with_context(|| format!("creating {}", args.out_dir.display()))?;
    let mut summary = String::new();
    for input in &args.inputs {
        let shot = Screenshot::open(input)?;
        let grid = build_grid(&shot, args.patch_size, args.merge_factor)?;
        let map = build_components(&grid, args.delta)?;
        let stats = component_stats(&map);
        info!(
            "{}: {} tokens -> {} components",
            input.display(),
            stats.token_count,
            stats.component_count
        );

        let stem = input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "image".into());
        let components = args.out_dir.join(format!("{stem}.components.json"));
        write_output(Some(&components), &to_json_line(&ComponentMapRecord::from(&map))?)?;
        write_output(Some(&args.out_dir.join(format!("{stem}.stats.json"))), &to_json_line(&Versioned::new(&stats))?)?;
        if !args.no_overlay {
            let overlay = args.out_dir.join(format!("{stem}.overlay.png"));
            render_overlay(&map, grid.patch_size)
                .save(&overlay)
                .with_context(|| format!("writing {}", overlay.display()))?;
        }
        debug!("wrote {}", components.display());
        summary.push_str(&to_json_line(&Versioned::new(StatsLine {
            source: shot.source_id(),
            stats: &stats,
        }))?);
    }
    write_output(None, &summary)
}

fn select(args: SelectArgs) -> Result<()> {
    let record: ComponentMapRecord = read_json(&args.input)?;
    let map = record.into_map()?;
    let mask = match args.mode {
        SelectMode::Training => select_training(&map, args.ratio, args.seed)?,
        SelectMode::Inference => select_inference(&map, args.ratio)?,
        SelectMode::Baseline => select_random_baseline(map.token_count(), args.ratio, args.seed)?,
    };
    info!("kept {} of {} tokens", mask.kept_count(), mask.total);
    write_output(args.output.as_deref(), &to_json_line(&Versioned::new(&mask))?)
}

fn schedule(args: ScheduleArgs) -> Result<()> {
    let s = make_schedule(args.layers, args.strategy, args.insert)?;
    write_output(args.output.as_deref(), &to_json_line(&Versioned::new(&s))?)
}

fn resolve_space(device: &str, override_path: Option<&Path>) -> Result<ActionSpace> {
    match override_path {
        Some(p) => Ok(ActionSpace::from_file(device, p)?),
        None => match ActionSpace::builtin(device) {
            Some(s) => Ok(s),
            None => bail!("no built-in action space for device {device:?}; pass --space"),
        },
    }
}

#[derive(Serialize)]
struct NavLine<'a> {
    episode: usize,
    step: usize,
    elements: &'a [Element],
    loss_mask: &'a [bool],
}

fn pack_nav(args: PackNavArgs) -> Result<()> {
    let episodes: Vec<Episode> = read_jsonl(&args.input)?;
    let mut out = String::new();
    for (i, ep) in episodes.iter().enumerate() {
        let space = resolve_space(&ep.device, args.space.as_deref())?;
        let seqs = pack_navigation(ep, &space, args.history, args.mask_visual_history)
            .with_context(|| format!("episode {}", i + 1))?;
        for (t, seq) in seqs.iter().enumerate() {
            out.push_str(&to_json_line(&Versioned::new(NavLine {
                episode: i,
                step: t + 1,
                elements: &seq.elements,
                loss_mask: &seq.loss_mask,
            }))?);
        }
    }
    write_output(args.output.as_deref(), &out)
}

#[derive(Deserialize)]
struct GroundingLine {
    #[serde(default)]
    device: Option<String>,
    #[serde(flatten)]
    sample: GroundingSample,
}

#[derive(Serialize)]
struct GroundLine<'a> {
    sample: usize,
    chunk: usize,
    elements: &'a [Element],
    loss_mask: &'a [bool],
}

fn pack_ground(args: PackGroundArgs) -> Result<()> {
    let lines: Vec<GroundingLine> = read_jsonl(&args.input)?;
    let mut out = String::new();
    for (i, line) in lines.iter().enumerate() {
        let device = line.device.as_deref().unwrap_or(&args.device);
        let space = resolve_space(device, args.space.as_deref())?;
        let seqs = pack_grounding(&line.sample.image, &line.sample.pairs, args.max_turns, &space)
            .with_context(|| format!("sample {}", i + 1))?;
        for (j, seq) in seqs.iter().enumerate() {
            out.push_str(&to_json_line(&Versioned::new(GroundLine {
                sample: i,
                chunk: j,
                elements: &seq.elements,
                loss_mask: &seq.loss_mask,
            }))?);
        }
    }
    write_output(args.output.as_deref(), &out)
}

fn sample(args: SampleArgs) -> Result<()> {
    let specs: Vec<DatasetSpec> = read_json(&args.specs)?;
    let plan = plan_draws(&specs, args.n, args.seed)?;
    let mut out = String::with_capacity(plan.draws.len() * 48);
    for d in &plan.draws {
        out.push_str(&to_json_line(&Versioned::new(Draw {
            dataset: d.dataset.clone(),
            index: d.index,
        }))?);
    }
    write_output(args.output.as_deref(), &out)
}

fn score(args: ScoreArgs) -> Result<()> {
    let (metrics, scored): (&[&str], Vec<ScoredCase>) = match args.kind {
        ScoreKind::Grounding => {
            let cases: Vec<GroundingCase> = read_jsonl(&args.input)?;
            for (i, c) in cases.iter().enumerate() {
                c.validate().with_context(|| format!("case {}", i + 1))?;
            }
            (GROUNDING_METRICS, cases.iter().map(ScoredCase::grounding).collect())
        }
        ScoreKind::Step => {
            let cases: Vec<StepCase> = read_jsonl(&args.input)?;
            let custom = match &args.space {
                Some(p) => Some(ActionSpace::from_file("custom", p)?),
                None => None,
            };
            let scored = cases
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let builtin;
                    let space = match &custom {
                        Some(s) => s,
                        None => {
                            builtin = resolve_space(&c.device, None)?;
                            &builtin
                        }
                    };
                    let s = eval::score_step(&c.pred, &c.gt, c.gt_bbox.as_ref(), space)
                        .with_context(|| format!("case {}", i + 1))?;
                    Ok(ScoredCase::step(&s, c.split_tags.clone()))
                })
                .collect::<Result<Vec<_>>>()?;
            (STEP_METRICS, scored)
        }
    };
    if scored.is_empty() {
        bail!("{} holds no cases", args.input.display());
    }
    let splits = args.splits.map(|s| {
        let mut seen = BTreeSet::new();
        s.into_iter().filter(|t| seen.insert(t.clone())).collect::<Vec<_>>()
    });
    let table = eval::aggregate(metrics, &scored, splits.as_deref())?;
    if let Some(path) = &args.json {
        write_output(Some(path), &to_json_line(&Versioned::new(&table))?)?;
    }
    write_output(None, &table.to_text())
}
