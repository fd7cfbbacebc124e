use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod io;

/// UI connected graphs, token selection masks, interleaved action streams,
/// balanced sampling plans and agent metrics.
#[derive(Debug, Parser)]
#[command(name = "uigraph", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build component maps, stats and overlays for PNG screenshots.
    Graph(GraphArgs),
    /// Turn a component map into a token selection mask.
    Select(SelectArgs),
    /// Emit a per-layer selection schedule.
    Schedule(ScheduleArgs),
    /// Pack navigation episodes into action-visual sequences.
    PackNav(PackNavArgs),
    /// Pack grounding annotations into action-query sequences.
    PackGround(PackGroundArgs),
    /// Plan balanced draws across datasets.
    Sample(SampleArgs),
    /// Score grounding or navigation cases.
    Score(ScoreArgs),
}

#[derive(Debug, clap::Args)]
struct GraphArgs {
    /// PNG screenshots.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Vision-encoder patch edge in pixels.
    #[arg(long, default_value_t = uigraph_core::patch_grid::DEFAULT_BASE_PATCH)]
    patch_size: u32,
    /// Spatial merge factor applied on top of the patch size.
    #[arg(long, default_value_t = uigraph_core::patch_grid::DEFAULT_MERGE_FACTOR)]
    merge_factor: u32,
    /// L2 threshold on mean RGB (0-255 units); neighbours closer than this are joined.
    #[arg(long, default_value_t = uigraph_core::ui_graph::DEFAULT_DELTA)]
    delta: f64,
    /// Directory for <stem>.components.json, <stem>.stats.json and <stem>.overlay.png.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Skip the overlay PNG.
    #[arg(long)]
    no_overlay: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SelectMode {
    Training,
    Inference,
    Baseline,
}

#[derive(Debug, clap::Args)]
struct SelectArgs {
    /// Component map JSON written by `graph`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = SelectMode::Training)]
    mode: SelectMode,
    /// Fraction of redundant tokens skipped within each multi-token component.
    #[arg(long, default_value_t = uigraph_core::token_select::DEFAULT_RATIO)]
    ratio: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct ScheduleArgs {
    #[arg(long, default_value_t = 28)]
    layers: usize,
    #[arg(long, default_value = "cross")]
    strategy: uigraph_core::Strategy,
    /// Number of layers that apply selection (ignored by `all`).
    #[arg(long, default_value_t = 14)]
    insert: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct PackNavArgs {
    /// Episode JSONL: {device, task, steps:[{image, action}]} per line.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Past (screenshot, action) pairs kept per step.
    #[arg(long, default_value_t = uigraph_core::vla_stream::DEFAULT_HISTORY)]
    history: usize,
    /// Replace past screenshots with an omitted-image placeholder.
    #[arg(long)]
    mask_visual_history: bool,
    /// Action-space JSON overriding the built-in space for every episode.
    #[arg(long)]
    space: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct PackGroundArgs {
    /// Grounding JSONL: {image, device?, pairs:[{query, action}]} per line.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    max_turns: usize,
    /// Device used when a line has none.
    #[arg(long, default_value = "web")]
    device: String,
    #[arg(long)]
    space: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct SampleArgs {
    /// JSON list of {name, size, weight}.
    #[arg(long)]
    specs: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScoreKind {
    Grounding,
    Step,
}

#[derive(Debug, clap::Args)]
struct ScoreArgs {
    /// Cases JSONL.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = ScoreKind::Grounding)]
    kind: ScoreKind,
    /// Comma-separated split tags, in table order. Defaults to every tag seen.
    #[arg(long, value_delimiter = ',')]
    splits: Option<Vec<String>>,
    /// Machine-readable report path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Action-space JSON used for every step case (`--kind step` only).
    #[arg(long)]
    space: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("UIGRAPH_LOG")).init();
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("uigraph: error: {msg}");
            ExitCode::FAILURE
        }
    }
}
