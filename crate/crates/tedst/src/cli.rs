//! Command-line interface.
//!
//! Subcommands: `distance` (edit script / marker string / alignment for a
//! tree pair), `entail` (classify a pair file and report metrics), `tune`
//! (threshold search on a pair file), `oracle` (brute-force distance for
//! small trees). Exit status is 0 on success, 1 on usage errors, 2 on
//! data errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bracket::parse_bracket;
use crate::conll::{parse_conll, parse_pairs};
use crate::cost::{CostConfig, CostModel, LexiconBuilder};
use crate::entail::{
    run_pipeline, tune_thresholds, Method, Mode, Objective, PairResult, Polarity, Thresholds,
};
use crate::grouping::{assign_group_costs, group_script};
use crate::oracle::{brute_force_ted_bounded, DEFAULT_ORACLE_BOUND};
use crate::ted::{build_alignment, ted, Alignment};
use crate::tree::OrderedTree;

#[derive(Parser)]
#[command(
    name = "tedst",
    version,
    about = "Tree edit distance with subtree operations and entailment decisions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Edit distance between two trees, with script and alignment.
    Distance(DistanceArgs),
    /// Classify premise-hypothesis pairs and report metrics.
    Entail(EntailArgs),
    /// Grid-search decision thresholds on a pair file.
    Tune(TuneArgs),
    /// Brute-force distance check for small trees.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CostsArg {
    Unit,
    Illustration,
    Entailment,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Bracket,
    Conll,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Bow,
    Levenshtein,
    ZsTed,
    TedSt,
}

impl From<MethodArg> for Method {
    fn from(arg: MethodArg) -> Method {
        match arg {
            MethodArg::Bow => Method::Bow,
            MethodArg::Levenshtein => Method::Levenshtein,
            MethodArg::ZsTed => Method::ZsTed,
            MethodArg::TedSt => Method::TedSt,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Accuracy,
    FYes,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Binary,
    ThreeWay,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputArg {
    Tsv,
    Records,
}

/// Lexicon and cost-schedule options shared by all subcommands.
#[derive(Args)]
struct ModelArgs {
    /// Cost schedule.
    #[arg(long, value_enum)]
    costs: Option<CostsArg>,
    /// Relation file: word1<TAB>relation<TAB>word2 lines.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Stop-word file: one form per line.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Cost override file: `key = number` lines.
    #[arg(long)]
    overrides: Option<PathBuf>,
}

impl ModelArgs {
    fn build(&self, default_costs: CostsArg) -> Result<CostModel, CliError> {
        let mut config = match self.costs.unwrap_or(default_costs) {
            CostsArg::Unit => CostConfig::unit(),
            CostsArg::Illustration => CostConfig::illustration(),
            CostsArg::Entailment => CostConfig::entailment(),
        };
        if let Some(path) = &self.overrides {
            config
                .apply_overrides(&read(path)?)
                .map_err(|e| CliError::data(path, e))?;
        }
        let mut builder = LexiconBuilder::new();
        if let Some(path) = &self.stopwords {
            builder.add_stopwords_text(&read(path)?);
        }
        if let Some(path) = &self.lexicon {
            builder
                .add_relations_text(&read(path)?)
                .map_err(|e| CliError::data(path, e))?;
        }
        Ok(CostModel::new(config, builder.build()))
    }
}

#[derive(Args)]
struct DistanceArgs {
    /// Source tree file.
    #[arg(long)]
    t1: PathBuf,
    /// Target tree file.
    #[arg(long)]
    t2: PathBuf,
    /// Tree file format.
    #[arg(long, value_enum, default_value = "bracket")]
    format: FormatArg,
    /// Collapse runs into subtree operations.
    #[arg(long)]
    grouped: bool,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
struct EntailArgs {
    /// Pair file: `# id=.. gold=..` headers with premise and hypothesis
    /// blocks in CoNLL format.
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Decision threshold (the only one in binary mode).
    #[arg(long)]
    low: f64,
    /// Upper threshold; enables three-way decisions.
    #[arg(long)]
    high: Option<f64>,
    /// Output format for per-pair results.
    #[arg(long, value_enum, default_value = "tsv")]
    output: OutputArg,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
struct TuneArgs {
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "accuracy")]
    objective: ObjectiveArg,
    #[arg(long, value_enum, default_value = "binary")]
    mode: ModeArg,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    t1: PathBuf,
    #[arg(long)]
    t2: PathBuf,
    #[arg(long, value_enum, default_value = "bracket")]
    format: FormatArg,
    /// Maximum combined node count.
    #[arg(long, default_value_t = DEFAULT_ORACLE_BOUND)]
    bound: usize,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn data(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Data(format!("{}: {}", path.display(), err))
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::data(path, e))
}

fn load_tree(path: &Path, format: FormatArg) -> Result<OrderedTree, CliError> {
    let text = read(path)?;
    match format {
        FormatArg::Bracket => parse_bracket(&text).map_err(|e| CliError::data(path, e)),
        FormatArg::Conll => {
            let mut trees = parse_conll(&text).map_err(|e| CliError::data(path, e))?;
            if trees.len() != 1 {
                return Err(CliError::Data(format!(
                    "{}: expected exactly one sentence, found {}",
                    path.display(),
                    trees.len()
                )));
            }
            Ok(trees.pop().unwrap())
        }
    }
}

/// Format a score without trailing noise: integers print bare, anything
/// else with its shortest representation.
fn fmt_num(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

fn render_alignment(t1: &OrderedTree, t2: &OrderedTree, align: &Alignment, kinds: &str) -> String {
    let row1: Vec<String> = align
        .s1
        .iter()
        .map(|slot| slot.map_or("_".to_string(), |i| t1.label(i).surface.clone()))
        .collect();
    let row2: Vec<String> = align
        .s2
        .iter()
        .map(|slot| slot.map_or("_".to_string(), |j| t2.label(j).surface.clone()))
        .collect();
    let ops: Vec<String> = kinds.chars().map(String::from).collect();
    let widths: Vec<usize> = (0..row1.len())
        .map(|c| {
            row1[c]
                .chars()
                .count()
                .max(row2[c].chars().count())
                .max(ops[c].chars().count())
        })
        .collect();
    let pad_row = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:w$}"))
            .collect::<Vec<String>>()
            .join(" ")
            .trim_end()
            .to_string()
    };
    let mut out = String::new();
    let _ = writeln!(out, "S1: {}", pad_row(&row1));
    let _ = writeln!(out, "op: {}", pad_row(&ops));
    let _ = writeln!(out, "S2: {}", pad_row(&row2));
    out
}

fn run_distance(args: &DistanceArgs) -> Result<String, CliError> {
    let model = args.model.build(CostsArg::Unit)?;
    let t1 = load_tree(&args.t1, args.format)?;
    let t2 = load_tree(&args.t2, args.format)?;
    let script = ted(&t1, &t2, &model);
    let align = build_alignment(&t1, &t2, &script).map_err(|e| CliError::Data(e.to_string()))?;

    let mut out = String::new();
    if args.grouped {
        let grouped = group_script(&script, &align, &t1, &t2)
            .and_then(|g| Ok(assign_group_costs(g, &t1, &t2, &model)?))
            .map_err(|e| CliError::Data(e.to_string()))?;
        let _ = writeln!(out, "cost: {}", fmt_num(grouped.total_cost));
        let _ = writeln!(out, "ops: {}", grouped.marker_string);
    } else {
        let _ = writeln!(out, "cost: {}", fmt_num(script.total_cost));
        let _ = writeln!(out, "ops: {}", script.kinds_string());
    }
    out.push_str(&render_alignment(&t1, &t2, &align, &script.kinds_string()));
    Ok(out)
}

fn metrics_block(metrics: &crate::entail::MetricsReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "total\t{}", metrics.total);
    let _ = writeln!(out, "gold_yes_pred_yes\t{}", metrics.gold_yes_pred_yes);
    let _ = writeln!(out, "gold_yes_pred_no\t{}", metrics.gold_yes_pred_no);
    let _ = writeln!(
        out,
        "gold_yes_pred_unknown\t{}",
        metrics.gold_yes_pred_unknown
    );
    let _ = writeln!(out, "gold_no_pred_yes\t{}", metrics.gold_no_pred_yes);
    let _ = writeln!(out, "gold_no_pred_no\t{}", metrics.gold_no_pred_no);
    let _ = writeln!(
        out,
        "gold_no_pred_unknown\t{}",
        metrics.gold_no_pred_unknown
    );
    let _ = writeln!(out, "p_yes\t{:.4}", metrics.p_yes);
    let _ = writeln!(out, "r_yes\t{:.4}", metrics.r_yes);
    let _ = writeln!(out, "f_yes\t{:.4}", metrics.f_yes);
    let _ = writeln!(out, "p_no\t{:.4}", metrics.p_no);
    let _ = writeln!(out, "r_no\t{:.4}", metrics.r_no);
    let _ = writeln!(out, "f_no\t{:.4}", metrics.f_no);
    let _ = writeln!(out, "accuracy\t{:.4}", metrics.accuracy);
    out
}

fn result_row(result: &PairResult) -> String {
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}",
        result.id,
        result.method,
        fmt_num(result.score),
        result.decision,
        result.gold,
        result.marker.as_deref().unwrap_or("-")
    )
}

fn run_entail(args: &EntailArgs) -> Result<String, CliError> {
    let model = args.model.build(CostsArg::Entailment)?;
    let pairs = parse_pairs(&read(&args.pairs)?).map_err(|e| CliError::data(&args.pairs, e))?;
    let method: Method = args.method.into();
    let mode = if args.high.is_some() {
        Mode::ThreeWay
    } else {
        Mode::Binary
    };
    let high = args.high.unwrap_or(args.low);
    if high < args.low {
        return Err(CliError::Usage(format!(
            "--high ({high}) must not be below --low ({})",
            args.low
        )));
    }
    let th = Thresholds {
        low: args.low,
        high,
        polarity: method.polarity(),
    };
    let output = run_pipeline(&pairs, method, &model, &th, mode)
        .map_err(|e| CliError::Data(e.to_string()))?;

    let mut out = String::new();
    match args.output {
        OutputArg::Tsv => {
            let _ = writeln!(out, "id\tmethod\tscore\tdecision\tgold\tmarker");
            for result in &output.results {
                let _ = writeln!(out, "{}", result_row(result));
            }
            out.push('\n');
            out.push_str(&metrics_block(&output.metrics));
        }
        OutputArg::Records => {
            for result in &output.results {
                let _ = writeln!(out, "{}", serde_json::to_string(result).unwrap());
            }
            let _ = writeln!(out, "{}", serde_json::to_string(&output.metrics).unwrap());
        }
    }
    Ok(out)
}

fn run_tune(args: &TuneArgs) -> Result<String, CliError> {
    let model = args.model.build(CostsArg::Entailment)?;
    let pairs = parse_pairs(&read(&args.pairs)?).map_err(|e| CliError::data(&args.pairs, e))?;
    let mode = match args.mode {
        ModeArg::Binary => Mode::Binary,
        ModeArg::ThreeWay => Mode::ThreeWay,
    };
    let objective = match args.objective {
        ObjectiveArg::Accuracy => Objective::Accuracy,
        ObjectiveArg::FYes => Objective::FYes,
    };
    let outcome = tune_thresholds(&pairs, args.method.into(), &model, mode, objective)
        .map_err(|e| CliError::Data(e.to_string()))?;

    let mut out = String::new();
    let _ = writeln!(out, "low: {}", fmt_num(outcome.thresholds.low));
    if mode == Mode::ThreeWay {
        let _ = writeln!(out, "high: {}", fmt_num(outcome.thresholds.high));
    }
    let polarity = match outcome.thresholds.polarity {
        Polarity::Distance => "distance",
        Polarity::Similarity => "similarity",
    };
    let _ = writeln!(out, "polarity: {polarity}");
    let _ = writeln!(out, "objective_value: {:.4}", outcome.objective_value);
    if outcome.degenerate {
        let _ = writeln!(out, "degenerate: all development scores identical");
    }
    Ok(out)
}

fn run_oracle(args: &OracleArgs) -> Result<String, CliError> {
    let model = args.model.build(CostsArg::Unit)?;
    let t1 = load_tree(&args.t1, args.format)?;
    let t2 = load_tree(&args.t2, args.format)?;
    let cost = brute_force_ted_bounded(&t1, &t2, &model, args.bound)
        .map_err(|e| CliError::Data(e.to_string()))?;
    Ok(format!("cost: {}\n", fmt_num(cost)))
}

/// Parse arguments, run the command, and return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Distance(args) => run_distance(args),
        Command::Entail(args) => run_entail(args),
        Command::Tune(args) => run_tune(args),
        Command::Oracle(args) => run_oracle(args),
    };
    match result {
        Ok(output) => {
            print!("{output}");
            0
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}
