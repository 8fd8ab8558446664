use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use xadg::adg::{check_well_formed, extract_adg, simplify_adg, Adg};
use xadg::dataset::{load_csv, Dataset, LoadOptions, RawTable, Recipe};
use xadg::dtree::{fit, DecisionTree};
use xadg::experiment::{
    baseline, compare_baseline, comparison_table, run_experiment, ExperimentConfig, ExperimentFile,
};
use xadg::export::tree_dot;
use xadg::inference::{classify_all, equivalence_report, predictions_json, write_predictions_csv};
use xadg::xadg::{build_xadg, check_well_built, lift, PipelineConfig, Xadg};

/// Decision trees to argumentation graphs and back to predictions.
#[derive(Parser)]
#[command(name = "xadg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DataArgs {
    /// CSV file with a header row.
    #[arg(long)]
    data: PathBuf,
    /// Target column; may come from the recipe instead.
    #[arg(long)]
    target: Option<String>,
    /// TOML preprocessing recipe.
    #[arg(long)]
    recipe: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a decision tree and write it as JSON.
    FitTree {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Read one argument per tree edge.
    Extract {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Collapse same-class sibling arguments.
    Simplify {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        adg: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Fit, extract, simplify and compact in one go.
    BuildXadg {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest number of predicates allowed in one support.
        #[arg(long)]
        max_supports: Option<usize>,
        /// Let m1 also remove non-predictive arguments that are attacked or
        /// attack nothing.
        #[arg(long)]
        allow_attacked_m1: bool,
        /// Finally drop attacks between arguments never active together.
        #[arg(long)]
        prune_disjoint: bool,
        /// Also write the fitted tree here.
        #[arg(long)]
        tree_out: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Predict every row of a CSV with a graph.
    Classify {
        #[arg(long)]
        xadg: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Class for undecided rows; defaults to the one stored in the graph.
        #[arg(long)]
        fallback: Option<String>,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Repeated split / build / score runs with 95% intervals.
    Evaluate {
        /// TOML experiment file; flags below override nothing when it is given.
        #[arg(long, conflicts_with_all = ["data", "target", "recipe", "max_depth", "runs", "train_fraction", "seed", "max_supports", "allow_attacked_m1", "prune_disjoint"])]
        config: Option<PathBuf>,
        #[arg(long, required_unless_present = "config")]
        data: Option<PathBuf>,
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        recipe: Option<PathBuf>,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        #[arg(long, default_value_t = 0.8)]
        train_fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_supports: Option<usize>,
        /// Let m1 also remove non-predictive arguments that are attacked or
        /// attack nothing.
        #[arg(long)]
        allow_attacked_m1: bool,
        /// Finally drop attacks between arguments never active together.
        #[arg(long)]
        prune_disjoint: bool,
        /// Compare with `cars-prior` or `census-prior`.
        #[arg(long)]
        baseline: Option<String>,
        /// JSON file with every run and the summary.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a tree, ADG or xADG file as Graphviz DOT.
    ExportDot {
        #[arg(long, conflicts_with_all = ["adg", "xadg"], required_unless_present_any = ["adg", "xadg"])]
        tree: Option<PathBuf>,
        #[arg(long, conflicts_with = "xadg")]
        adg: Option<PathBuf>,
        #[arg(long)]
        xadg: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the structural validators and, given a tree and data, the
    /// equivalence check.
    Check {
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long, required_unless_present = "xadg")]
        adg: Option<PathBuf>,
        #[arg(long)]
        xadg: Option<PathBuf>,
        #[arg(long, requires = "tree")]
        data: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load_data(path: &Path, target: Option<&str>, recipe: Option<&Path>) -> Result<Dataset> {
    let ds = match recipe {
        Some(r) => Recipe::from_path(r)?.load(path, target)?,
        None => {
            let target = target.context("--target or --recipe is required")?;
            load_csv(path, target, &LoadOptions::default())?
        }
    };
    let report = ds.report();
    if report.rows_dropped > 0 || !report.features_dropped.is_empty() {
        eprintln!(
            "loaded {} of {} rows ({} dropped); dropped features: {:?}",
            ds.len(),
            report.rows_read,
            report.rows_dropped,
            report.features_dropped
        );
    }
    Ok(ds)
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn graph_output(
    format: Format,
    json: impl FnOnce() -> xadg::Result<String>,
    dot: impl FnOnce() -> String,
) -> Result<String> {
    match format {
        Format::Json => Ok(json()?),
        Format::Dot => Ok(dot()),
        Format::Csv => bail!("graphs are written as json or dot"),
    }
}

/// `Ok(false)` means a validator reported problems.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::FitTree {
            data,
            max_depth,
            seed,
            out,
        } => {
            let ds = load_data(&data.data, data.target.as_deref(), data.recipe.as_deref())?;
            let tree = fit(&ds, max_depth, seed)?;
            tree.save(&out)?;
            let s = tree.stats();
            println!(
                "tree: {} nodes, {} leaves, depth {}, avg path length {:.3}",
                s.nodes, s.leaves, s.depth, s.avg_path_length
            );
        }
        Command::Extract { tree, out, format } => {
            let dt = DecisionTree::load(&tree)?;
            let adg = extract_adg(&dt);
            write(
                &out,
                &graph_output(format, || adg.to_json(), || adg.to_dot())?,
            )?;
            println!(
                "adg: {} arguments, {} attacks",
                adg.len(),
                adg.attacks().len()
            );
        }
        Command::Simplify {
            tree,
            adg,
            out,
            format,
        } => {
            let dt = DecisionTree::load(&tree)?;
            let g = simplify_adg(&dt, &Adg::load(&adg)?);
            write(&out, &graph_output(format, || g.to_json(), || g.to_dot())?)?;
            println!("adg: {} arguments, {} attacks", g.len(), g.attacks().len());
        }
        Command::BuildXadg {
            data,
            max_depth,
            seed,
            max_supports,
            allow_attacked_m1,
            prune_disjoint,
            tree_out,
            out,
            format,
        } => {
            let ds = load_data(&data.data, data.target.as_deref(), data.recipe.as_deref())?;
            let config = PipelineConfig {
                max_depth,
                seed,
                max_supports,
                allow_attacked_m1,
                guard: true,
                prune_disjoint,
            };
            let p = build_xadg(&ds, &config)?;
            if let Some(path) = tree_out {
                p.tree.save(&path)?;
            }
            let g = &p.xadg;
            write(&out, &graph_output(format, || g.to_json(), || g.to_dot())?)?;
            println!("xadg: {} arguments, {} attacks", g.len(), g.attacks().len());
        }
        Command::Classify {
            xadg,
            data,
            fallback,
            out,
            format,
        } => {
            let g = Xadg::load(&xadg)?;
            let schema = g.schema();
            let fallback = match fallback {
                Some(label) => schema
                    .class_index(&label)
                    .with_context(|| format!("unknown class `{label}`"))?,
                None => g.fallback().unwrap_or(0),
            };
            let rows = RawTable::from_path(&data, &LoadOptions::default())?.instances(schema)?;
            let results = classify_all(&g, &rows, fallback);
            let text = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_predictions_csv(schema, &results, &mut buf)?;
                    String::from_utf8(buf)?
                }
                Format::Json => predictions_json(schema, &results)?,
                Format::Dot => bail!("predictions are written as csv or json"),
            };
            match out {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
        }
        Command::Evaluate {
            config,
            data,
            target,
            recipe,
            max_depth,
            runs,
            train_fraction,
            seed,
            max_supports,
            allow_attacked_m1,
            prune_disjoint,
            baseline: baseline_name,
            out,
        } => {
            let (ds, cfg, baseline_name) = match config {
                Some(path) => {
                    let file = ExperimentFile::from_path(&path)?;
                    let ds = load_data(&file.data, file.target.as_deref(), file.recipe.as_deref())?;
                    (ds, file.config(), baseline_name.or(file.baseline))
                }
                None => {
                    let data = data.expect("required by clap");
                    let ds = load_data(&data, target.as_deref(), recipe.as_deref())?;
                    let cfg = ExperimentConfig {
                        max_depth: max_depth.unwrap_or(3),
                        runs,
                        train_fraction,
                        base_seed: seed,
                        max_supports,
                        allow_attacked_m1,
                        prune_disjoint,
                    };
                    (ds, cfg, baseline_name)
                }
            };
            let result = run_experiment(&ds, &cfg)?;
            print!("{}", result.summary.table());
            if let Some(name) = baseline_name {
                let b = baseline(&name)?;
                println!();
                print!(
                    "{}",
                    comparison_table(b.name, &compare_baseline(&result.summary, &b))
                );
            }
            if let Some(path) = out {
                write(&path, &serde_json::to_string_pretty(&result)?)?;
            }
        }
        Command::ExportDot {
            tree,
            adg,
            xadg,
            out,
        } => {
            let dot = if let Some(path) = tree {
                tree_dot(&DecisionTree::load(&path)?)
            } else if let Some(path) = adg {
                Adg::load(&path)?.to_dot()
            } else {
                Xadg::load(xadg.as_ref().expect("required by clap"))?.to_dot()
            };
            write(&out, &dot)?;
        }
        Command::Check {
            tree,
            adg,
            xadg,
            data,
        } => return check(tree, adg, xadg, data),
    }
    Ok(true)
}

fn check(
    tree: Option<PathBuf>,
    adg: Option<PathBuf>,
    xadg: Option<PathBuf>,
    data: Option<PathBuf>,
) -> Result<bool> {
    let mut ok = true;
    let tree = tree.map(DecisionTree::load).transpose()?;
    let mut graphs: Vec<(&str, Xadg)> = Vec::new();
    if let Some(path) = adg {
        let adg = Adg::load(&path)?;
        let violations = check_well_formed(&adg);
        if violations.is_empty() {
            println!("well-formed: ok");
        } else {
            ok = false;
            println!("well-formed: {} violation(s)", violations.len());
            for v in violations {
                println!("  {v:?}");
            }
        }
        graphs.push(("adg", lift(&adg)));
    }
    if let Some(path) = xadg {
        let g = Xadg::load(&path)?;
        let violations = check_well_built(&g);
        if violations.is_empty() {
            println!("well-built: ok");
        } else {
            ok = false;
            println!("well-built: {} violation(s)", violations.len());
            for (id, v) in violations {
                println!("  a{id}: {v:?}");
            }
        }
        graphs.push(("xadg", g));
    }
    if let (Some(dt), Some(path)) = (&tree, data) {
        let rows = RawTable::from_path(&path, &LoadOptions::default())?.instances(dt.schema())?;
        let ds = Dataset::new(dt.schema().clone(), rows.clone(), vec![0; rows.len()])
            .context("building instance set")?;
        for (name, g) in &graphs {
            let r = equivalence_report(dt, g, &ds);
            let pct = if r.total() == 0 {
                100.0
            } else {
                100.0 * r.agree as f64 / r.total() as f64
            };
            println!(
                "equivalence ({name}): {pct}% ({}/{}, {} undecided)",
                r.agree,
                r.total(),
                r.undecided
            );
            if !r.is_equivalent() {
                ok = false;
                for d in r.disagree.iter().take(20) {
                    println!(
                        "  row {}: tree {:?}, graph {:?}",
                        d.index + 1,
                        d.tree,
                        d.graph
                    );
                }
            }
        }
    }
    Ok(ok)
}
