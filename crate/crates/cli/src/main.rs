mod output;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use hilbert_atlas::enumerate::{
    brute_force_census, enumerate_diagrams, pooled_census, quotient_diagrams, Block,
    REFERENCE_PAIRINGS,
};
use hilbert_atlas::index_map::{
    cell_to_index, index_to_cell, locality_report_with, MAX_INDEX_ORDER,
};
use hilbert_atlas::verify::{all_passed, verify_grid};
use hilbert_atlas::{generate, word_for, Cell, Family, FamilyTable, Strategy};

use output::{BlockSummary, CensusJson, CurveJson, LocalityJson, VerifyJson, SCHEMA};

const DEFAULT_MAX_ORDER: u32 = 12;
const GUARD_ENV: &str = "HILBERT_ATLAS_MAX_ORDER";

/// Builds, checks and enumerates the twelve homogeneous Hilbert curves.
///
/// Cells are written as [col,row] pairs with the origin at the lower-left
/// corner of the grid. Exit codes: 0 pass, 1 check failure, 2 usage error,
/// 3 order above the guard (default 12, override with HILBERT_ATLAS_MAX_ORDER).
#[derive(Parser)]
#[command(name = "hilbert-atlas", version)]
struct Cli {
    /// Run all work on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Target {
    /// Family index.
    #[arg(short = 'k', long, value_parser = clap::value_parser!(u32).range(0..=11))]
    family: u32,
    /// Curve order (grid side 2^order).
    #[arg(short = 'n', long, value_parser = clap::value_parser!(u32).range(1..))]
    order: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Print one curve as JSON, a stroke word, or CSV cells.
    Generate {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the check suite and print a JSON report.
    Verify {
        /// Every family.
        #[arg(long, conflicts_with = "family", required_unless_present = "family")]
        all: bool,
        #[arg(short = 'k', long, value_parser = clap::value_parser!(u32).range(0..=11))]
        family: Option<u32>,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        min_order: u32,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
        max_order: u32,
        /// Family table as JSON (see `rules`) to verify instead of the built-in one.
        #[arg(long)]
        rules: Option<PathBuf>,
    },
    /// Boundary vector diagrams and the exhaustive curve census.
    Census {
        #[arg(long, value_enum, default_value_t = BlockArg::Both)]
        block: BlockArg,
        /// Order of the exhaustively searched curves.
        #[arg(long, default_value_t = 3)]
        order: u32,
        #[arg(long)]
        json: bool,
    },
    /// Write an SVG drawing: dot at the entry, arrowhead at the exit.
    Render {
        #[command(flatten)]
        target: Target,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Convert a curve position to its cell, or a cell to its position.
    Map {
        #[command(flatten)]
        target: Target,
        #[arg(
            short = 'i',
            long,
            conflicts_with = "cell",
            required_unless_present = "cell"
        )]
        index: Option<u64>,
        /// Cell as `col,row`.
        #[arg(long, value_parser = parse_cell)]
        cell: Option<Cell>,
    },
    /// Locality figures (squared distance over index distance) as JSON.
    Locality {
        #[command(flatten)]
        target: Target,
    },
    /// Print the built-in family table as JSON.
    Rules,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Word,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum BlockArg {
    Proper,
    Improper,
    Both,
}

/// Failures with their own exit codes.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("order {order} exceeds the limit of {limit} (set {GUARD_ENV} to raise it)")]
    Guard { order: u32, limit: u32 },
}

fn parse_cell(s: &str) -> Result<Cell, String> {
    let (c, r) = s.split_once(',').ok_or("expected col,row")?;
    let num = |v: &str| v.trim().parse::<u32>().map_err(|e| format!("{v:?}: {e}"));
    Ok(Cell::new(num(c)?, num(r)?))
}

fn order_limit() -> anyhow::Result<u32> {
    match std::env::var(GUARD_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| CliError::Usage(format!("{GUARD_ENV}={v:?} is not an order")).into()),
        Err(_) => Ok(DEFAULT_MAX_ORDER),
    }
}

fn guard(order: u32) -> anyhow::Result<()> {
    let limit = order_limit()?;
    if order > limit {
        return Err(CliError::Guard { order, limit }.into());
    }
    Ok(())
}

/// Writes `text` and a newline to stdout. A reader that stops early (a
/// closed pipe) is not an error.
fn emit(text: &str) -> anyhow::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn family(k: u32) -> Family {
    Family::new(k).expect("clap bounds the family index")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let strategy = if cli.sequential {
        Strategy::Sequential
    } else {
        Strategy::Parallel
    };
    match run(cli.command, strategy) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(match e.downcast_ref::<CliError>() {
                Some(CliError::Usage(_)) => 2,
                Some(CliError::Guard { .. }) => 3,
                None => 1,
            })
        }
    }
}

/// `Ok(false)` when a check ran and failed.
fn run(command: Command, strategy: Strategy) -> anyhow::Result<bool> {
    match command {
        Command::Generate { target, format } => {
            guard(target.order)?;
            let k = family(target.family);
            match format {
                Format::Word => emit(word_for(k, target.order)?.as_str())?,
                Format::Json => {
                    let curve = generate(k, target.order)?;
                    emit(&serde_json::to_string(&CurveJson::from(&curve))?)?;
                }
                Format::Csv => emit(output::csv(&generate(k, target.order)?).trim_end())?,
            }
            Ok(true)
        }
        Command::Verify {
            all,
            family: k,
            min_order,
            max_order,
            rules,
        } => {
            if min_order > max_order {
                return Err(CliError::Usage(format!(
                    "--min-order {min_order} > --max-order {max_order}"
                ))
                .into());
            }
            guard(max_order)?;
            let table = match rules {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str::<FamilyTable>(&text)
                        .with_context(|| format!("parsing {}", path.display()))?
                }
                None => FamilyTable::standard(),
            };
            let families: Vec<Family> = match (all, k) {
                (true, _) | (false, None) => Family::all().collect(),
                (false, Some(k)) => vec![family(k)],
            };
            let reports = verify_grid(&table, &families, min_order..=max_order, strategy);
            let passed = all_passed(&reports);
            for r in reports.iter().filter(|r| !r.passed) {
                let k = r.family.map_or("-".into(), |k| k.to_string());
                eprintln!("FAIL family {k} order {} check {}", r.order, r.check);
            }
            let json = VerifyJson {
                schema: SCHEMA,
                passed,
                checks: reports.len(),
                failures: reports.iter().filter(|r| !r.passed).count(),
                reports: &reports,
            };
            emit(&serde_json::to_string_pretty(&json)?)?;
            Ok(passed)
        }
        Command::Census { block, order, json } => census(block, order, json, strategy),
        Command::Render { target, output } => {
            guard(target.order)?;
            let curve = generate(family(target.family), target.order)?;
            std::fs::write(&output, render::svg(&curve))
                .with_context(|| format!("writing {}", output.display()))?;
            Ok(true)
        }
        Command::Map {
            target,
            index,
            cell,
        } => {
            let k = family(target.family);
            let n = target.order;
            if n > MAX_INDEX_ORDER {
                return Err(CliError::Usage(format!("order {n} exceeds {MAX_INDEX_ORDER}")).into());
            }
            match (index, cell) {
                (Some(i), _) => {
                    let c = index_to_cell(k, n, i).map_err(|e| CliError::Usage(e.to_string()))?;
                    println!("{c}");
                }
                (None, Some(c)) => {
                    let i = cell_to_index(k, n, c).map_err(|e| CliError::Usage(e.to_string()))?;
                    println!("{i}");
                }
                (None, None) => unreachable!("clap requires one of --index and --cell"),
            }
            Ok(true)
        }
        Command::Locality { target } => {
            if target.order > MAX_INDEX_ORDER {
                return Err(CliError::Usage(format!(
                    "order {} exceeds {MAX_INDEX_ORDER}",
                    target.order
                ))
                .into());
            }
            let report = locality_report_with(family(target.family), target.order, strategy)?;
            emit(&serde_json::to_string_pretty(&LocalityJson {
                schema: SCHEMA,
                report: &report,
            })?)?;
            Ok(true)
        }
        Command::Rules => {
            emit(&serde_json::to_string_pretty(&FamilyTable::standard())?)?;
            Ok(true)
        }
    }
}

const EXPECTED_DIAGRAMS: usize = 8;
const EXPECTED_DIAGRAM_CLASSES: usize = 6;
const EXPECTED_CLASSES_PER_BLOCK: usize = 6;

fn census(block: BlockArg, order: u32, json: bool, strategy: Strategy) -> anyhow::Result<bool> {
    let blocks: Vec<Block> = match block {
        BlockArg::Proper => vec![Block::Proper],
        BlockArg::Improper => vec![Block::Improper],
        BlockArg::Both => Block::BOTH.to_vec(),
    };
    let brute = match block {
        BlockArg::Both => pooled_census(order, strategy),
        _ => brute_force_census(order, blocks[0], strategy),
    }
    .map_err(|e| match e {
        hilbert_atlas::Error::CensusTooLarge(_) => {
            anyhow::Error::from(CliError::Usage(e.to_string()))
        }
        e => e.into(),
    })?;

    let mut passed = true;
    let mut summaries = Vec::new();
    for &b in &blocks {
        let diagrams = enumerate_diagrams(b)?;
        let quotient = quotient_diagrams(&diagrams);
        let pairs: Vec<String> = quotient
            .enantiomorphic_pairs()
            .into_iter()
            .map(|(x, y)| format!("{x}-{y}"))
            .collect();
        let reference: Vec<Vec<String>> = REFERENCE_PAIRINGS
            .iter()
            .filter(|(rb, _)| *rb == b)
            .map(|(_, p)| p.iter().map(|s| s.to_string()).collect())
            .collect();
        passed &= diagrams.len() == EXPECTED_DIAGRAMS
            && quotient.classes.len() == EXPECTED_DIAGRAM_CLASSES;
        summaries.push(BlockSummary {
            block: b.to_string(),
            diagrams: diagrams.len(),
            classes: quotient.classes.len(),
            pairing_matches_reference: reference.contains(&pairs),
            quotient,
            pairs,
            reference_pairings: reference,
        });
    }
    let expected = EXPECTED_CLASSES_PER_BLOCK * blocks.len();
    passed &= brute.classes.len() == expected && brute.is_bijective_with_families();

    if json {
        let out = CensusJson {
            schema: SCHEMA,
            blocks: summaries,
            brute_force: brute,
            expected_classes: expected,
            passed,
        };
        emit(&serde_json::to_string_pretty(&out)?)?;
        return Ok(passed);
    }
    for s in &summaries {
        println!(
            "{}: {} diagrams -> {} classes; enantiomorphic pairs {}",
            s.block,
            s.diagrams,
            s.classes,
            s.pairs.join(", ")
        );
        if !s.pairing_matches_reference {
            let refs: Vec<String> = s.reference_pairings.iter().map(|p| p.join(", ")).collect();
            println!(
                "  note: labels follow enumeration order; published labellings list {}",
                refs.join(" / ")
            );
        }
    }
    println!(
        "brute force order {}: {} of {} assemblies valid",
        brute.order, brute.valid_assemblies, brute.assemblies_tried
    );
    for c in &brute.classes {
        let fams: Vec<String> = c.families.iter().map(|k| k.to_string()).collect();
        println!("  class {}: families [{}]", c.canonical, fams.join(","));
    }
    let noun = match block {
        BlockArg::Both => "homogeneous",
        BlockArg::Proper => "proper",
        BlockArg::Improper => "improper",
    };
    println!("{} {noun} classes", brute.classes.len());
    if !passed {
        println!("census mismatch: expected {expected} classes, each matching one family");
    }
    Ok(passed)
}
