use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::SystemTime;

use clap::{Args, Parser, Subcommand, ValueEnum};

use aoi_core::datagen::{generate, FixtureProfile};
use aoi_core::{mine, rank_attributes, tree_stats, ConceptTree, Hierarchies, LearningTask, Notation};

use crate::error::AppError;
use crate::json::{mine_report_to_json, parse_score_request, score_report_to_json};
use crate::report::{render_table_report, Timing};
use crate::table::{load_table, write_table};

#[derive(Debug, Parser)]
#[command(name = "aoi", version, about = "Characteristic rules by attribute-oriented induction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generalize a class of tuples and print its characteristic rule.
    Mine(MineArgs),
    /// Print the depth x width table of one or more hierarchies.
    Stats(StatsArgs),
    /// Rank attributes from a JSON document of CR/CT counts.
    Score(ScoreArgs),
    /// Write a deterministic data file from a fixture profile.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSpec {
    pub attribute: String,
    pub concept: String,
}

impl FromStr for ClassSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('=') {
            Some((a, c)) if !a.trim().is_empty() && !c.trim().is_empty() => Ok(ClassSpec {
                attribute: a.trim().to_owned(),
                concept: c.trim().to_owned(),
            }),
            _ => Err(format!("expected `attribute=concept`, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Table,
    Rules,
    Json,
}

#[derive(Debug, Args)]
pub struct MineArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Hierarchy file; repeat once per attribute.
    #[arg(long = "hierarchy", required = true)]
    pub hierarchies: Vec<PathBuf>,
    /// Target class as `attribute=concept`.
    #[arg(long = "class")]
    pub class: ClassSpec,
    /// Relation threshold: maximum tuples in the final relation.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub threshold: u64,
    /// Maximum distinct values per attribute; defaults to --threshold.
    #[arg(long = "attr-threshold", value_parser = clap::value_parser!(u64).range(1..))]
    pub attr_threshold: Option<u64>,
    #[arg(long, value_enum, default_value_t = OutputMode::Table)]
    pub output: OutputMode,
    #[arg(long)]
    pub trace: bool,
    #[arg(long)]
    pub ascii: bool,
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
    #[arg(long = "no-timing")]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long = "hierarchy", required = true)]
    pub hierarchies: Vec<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScoreFormat {
    Text,
    Json,
    Both,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// JSON document `{attribute: {"cr": [...], "ct": [...]}, ...}`.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = ScoreFormat::Both)]
    pub format: ScoreFormat,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub profile: PathBuf,
    #[arg(long = "hierarchy", required = true)]
    pub hierarchies: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Overrides the profile's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
}

fn read(path: &Path) -> Result<String, AppError> {
    std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))
}

fn delimiter_byte(c: char) -> Result<u8, AppError> {
    u8::try_from(c)
        .ok()
        .filter(u8::is_ascii)
        .ok_or_else(|| AppError::format("--delimiter", format!("`{c}` is not an ASCII character")))
}

/// Loads hierarchy files in argument order; each file names its attribute.
pub fn load_hierarchies(paths: &[PathBuf]) -> Result<Vec<ConceptTree>, AppError> {
    let mut trees: Vec<ConceptTree> = Vec::with_capacity(paths.len());
    for path in paths {
        let tree = ConceptTree::parse(&read(path)?)
            .map_err(|e| AppError::format(path.display().to_string(), e))?;
        if trees.iter().any(|t| t.attribute() == tree.attribute()) {
            return Err(AppError::format(
                path.display().to_string(),
                format!("second hierarchy for attribute `{}`", tree.attribute()),
            ));
        }
        trees.push(tree);
    }
    Ok(trees)
}

pub fn cmd_mine(args: &MineArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), AppError> {
    let trees: Hierarchies = load_hierarchies(&args.hierarchies)?.into_iter().collect();
    if trees.get(&args.class.attribute).is_none() {
        return Err(AppError::format(
            "--class",
            format!("no hierarchy loaded for `{}`", args.class.attribute),
        ));
    }
    let threshold = args.threshold as usize;
    let task = LearningTask::new(
        args.class.attribute.clone(),
        args.class.concept.clone(),
        args.attr_threshold.map_or(threshold, |t| t as usize),
        threshold,
    )
    .map_err(|e| AppError::format("task", e))?;
    task.validate(&trees).map_err(|e| AppError::format("--class", e))?;

    let text = read(&args.data)?;
    let start = SystemTime::now();
    let relation = load_table(&text, delimiter_byte(args.delimiter)?, None)
        .map_err(|e| AppError::format(args.data.display().to_string(), e))?;
    let result = mine(&relation, &task, &trees).map_err(AppError::Pipeline)?;
    let finish = SystemTime::now();

    for w in &result.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let notation = if args.ascii { Notation::Ascii } else { Notation::Unicode };
    let text = match args.output {
        OutputMode::Table => {
            let timing = (!args.no_timing).then_some(Timing { start, finish });
            render_table_report(&task, &result, notation, args.trace, timing)
        }
        OutputMode::Rules => format!("{}\n", result.rule.render(notation)),
        OutputMode::Json => format!("{}\n", mine_report_to_json(&task, &result, notation, args.trace)),
    };
    out.write_all(text.as_bytes())
        .map_err(|e| AppError::io("<stdout>", e))
}

pub fn cmd_stats(args: &StatsArgs, out: &mut dyn Write) -> Result<(), AppError> {
    let trees = load_hierarchies(&args.hierarchies)?;
    write!(out, "{}", tree_stats(&trees)).map_err(|e| AppError::io("<stdout>", e))
}

pub fn cmd_score(args: &ScoreArgs, out: &mut dyn Write) -> Result<(), AppError> {
    let context = args.input.display().to_string();
    let scores = parse_score_request(&read(&args.input)?).map_err(|e| AppError::format(&context, e))?;
    let report = rank_attributes(scores).map_err(|e| AppError::format(&context, e))?;
    let mut text = String::new();
    if matches!(args.format, ScoreFormat::Text | ScoreFormat::Both) {
        text.push_str(&report.to_string());
    }
    if args.format == ScoreFormat::Both {
        text.push('\n');
    }
    if matches!(args.format, ScoreFormat::Json | ScoreFormat::Both) {
        text.push_str(&score_report_to_json(&report));
        text.push('\n');
    }
    out.write_all(text.as_bytes())
        .map_err(|e| AppError::io("<stdout>", e))
}

pub fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<(), AppError> {
    let context = args.profile.display().to_string();
    let trees: Hierarchies = load_hierarchies(&args.hierarchies)?.into_iter().collect();
    let mut profile: FixtureProfile =
        serde_json::from_str(&read(&args.profile)?).map_err(|e| AppError::format(&context, e))?;
    if let Some(seed) = args.seed {
        profile = profile.with_seed(seed);
    }
    let relation = generate(&profile, &trees).map_err(|e| AppError::format(&context, e))?;
    let text = write_table(&relation, delimiter_byte(args.delimiter)?)
        .map_err(|e| AppError::format(&context, e))?;
    std::fs::write(&args.out, text).map_err(|e| AppError::io(&args.out, e))?;
    writeln!(
        out,
        "wrote {} rows to {} ({})",
        relation.len(),
        args.out.display(),
        relation.source()
    )
    .map_err(|e| AppError::io("<stdout>", e))
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), AppError> {
    match &cli.command {
        Command::Mine(a) => cmd_mine(a, out, err),
        Command::Stats(a) => cmd_stats(a, out),
        Command::Score(a) => cmd_score(a, out),
        Command::Generate(a) => cmd_generate(a, out),
    }
}
