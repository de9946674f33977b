//! `setmodal`: model checking, classification, translation, encodings,
//! tiling systems and figurative inclusion from the command line.
//!
//! Exit codes: 0 for true/pass, 1 for false/fail, 2 for errors.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use setmodal::encodings::{EncodingKind, Origin};
use setmodal::figurative::{
    backward_included, forward_counterexample, forward_equal, lemma4_check, lemma5_check, parse_family,
    parse_injection, LemmaInstance, LemmaVerdict,
};
use setmodal::formula::{levels, Fragment};
use setmodal::grid::{find_run, grid_properties, parse_tiling_system, ts_to_sigma1_hg, TilingSystem};
use setmodal::translate::check_kit;
use setmodal::{
    backward_translate, check, enumerate_structures, forward_translate, grid_characterization, parse_formula,
    parse_structure, print_formula, print_structure, std_translate, EvalConfig, Formula, GraphClass, LinearEncoding,
    Structure,
};

#[derive(Parser)]
#[command(name = "setmodal", version, about = "Hybrid modal logic with set quantifiers on finite structures")]
struct Cli {
    /// Print the elapsed time to stderr.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Model check a formula on a structure.
    Check {
        structure: String,
        formula: String,
        /// Report stipulated verdicts and search statistics.
        #[arg(long, short)]
        verbose: bool,
    },
    /// Least Sigma and Pi levels over a kernel fragment.
    Classify {
        formula: String,
        #[arg(long, default_value = "HBG")]
        kernel: Fragment,
    },
    /// Translate a formula.
    Translate {
        #[command(subcommand)]
        how: Translation,
    },
    /// Encode a structure.
    Encode { encoding: EncodingKind, structure: String },
    /// Print the image formula of an encoding.
    Image { encoding: EncodingKind },
    /// Tiling systems.
    Ts {
        #[command(subcommand)]
        action: TsAction,
    },
    /// Print the grid characterization.
    Gridformula {
        /// Print the six conjuncts separately.
        #[arg(long)]
        list: bool,
    },
    /// Enumerate the members of a class up to a size.
    Enum {
        class: GraphClass,
        max: usize,
        /// One structure per isomorphism class.
        #[arg(long)]
        dedup: bool,
    },
    /// Exhaustive verification.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Figurative inclusion between set families.
    Fig {
        #[command(subcommand)]
        cmd: Fig,
    },
}

#[derive(Subcommand)]
enum Translation {
    /// Standard translation into first-order logic.
    Std { formula: String },
    /// Forward translation through an encoding.
    Forward {
        #[arg(long)]
        encoding: EncodingKind,
        formula: String,
    },
    /// Backward translation through an encoding.
    Backward {
        #[arg(long)]
        encoding: EncodingKind,
        formula: String,
    },
}

#[derive(Subcommand)]
enum TsAction {
    /// Run a tiling system on a labeled grid.
    Run { ts: String, grid: String },
    /// Compile a tiling system into a sentence.
    Compile { ts: String },
}

#[derive(Subcommand)]
enum Verify {
    /// Check both kits of an encoding on all sources up to `--max`.
    Kit {
        encoding: EncodingKind,
        #[arg(long, default_value_t = 3)]
        max: usize,
    },
}

#[derive(Subcommand)]
enum Fig {
    /// L forward included in M figuro mu.
    Forward { l: String, m: String, mu: String },
    /// L backward includes M figuro mu.
    Backward { l: String, m: String, mu: String },
    /// Forward equality.
    Equal { l: String, m: String, mu: String },
    /// Check the transfer lemma for total injections.
    Lemma4 { l1: String, l2: String, m1: String, m2: String, mu: String },
    /// Check the intersection lemma.
    Lemma5 { l1: String, l2: String, m1: String, m2: String, mu: String },
}

/// Verdict and report of one command.
struct Outcome {
    ok: bool,
    report: String,
}

impl Outcome {
    fn pass(report: String) -> Outcome {
        Outcome { ok: true, report }
    }

    fn verdict(ok: bool, report: String) -> Outcome {
        Outcome { ok, report }
    }
}

type Result<T> = std::result::Result<T, String>;

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

/// A file path if one exists, otherwise the argument itself.
fn text_or_file(arg: &str) -> Result<String> {
    if Path::new(arg).is_file() {
        read(arg)
    } else {
        Ok(arg.to_string())
    }
}

fn formula(arg: &str) -> Result<Formula> {
    parse_formula(text_or_file(arg)?.trim()).map_err(|e| format!("formula: {e}"))
}

fn structure(path: &str) -> Result<Structure> {
    parse_structure(&read(path)?).map_err(|e| format!("{path}: {e}"))
}

fn tiling(path: &str) -> Result<TilingSystem> {
    let (ts, warnings) = parse_tiling_system(&read(path)?).map_err(|e| format!("{path}: {e}"))?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(ts)
}

fn level_text(l: Option<usize>) -> String {
    l.map_or_else(|| "none".into(), |n| n.to_string())
}

fn correspondence(e: &setmodal::encodings::Encoded) -> String {
    let mut out = String::from("# correspondence\n");
    for id in 0..e.corr.size() {
        let _ = match e.corr.origin(id) {
            Some(Origin::Copy(j, d)) => writeln!(out, "# {id} = copy {j} of {d}"),
            Some(Origin::Extra(j)) => writeln!(out, "# {id} = extra {j}"),
            None => Ok(()),
        };
    }
    out
}

fn family(path: &str) -> Result<setmodal::figurative::FiniteFamily> {
    parse_family(&read(path)?).map_err(|e| format!("{path}: {e}"))
}

fn injection(path: &str) -> Result<setmodal::figurative::PartialInjection> {
    parse_injection(&read(path)?).map_err(|e| format!("{path}: {e}"))
}

fn lemma(verdict: LemmaVerdict) -> Outcome {
    Outcome::verdict(!verdict.is_fail(), verdict.to_string())
}

fn run(cmd: Command) -> Result<Outcome> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    Ok(match cmd {
        Command::Check { structure: s, formula: f, verbose } => {
            let a = structure(&s)?;
            let f = formula(&f)?;
            let v = check(&a, &f, EvalConfig::default()).map_err(|e| err(&e))?;
            let mut report = if verbose { v.report() } else { v.value.to_string() };
            if verbose {
                let _ = write!(report, "\nkernel evaluations {}, search nodes {}", v.stats.kernel_evals, v.stats.search_nodes);
            }
            Outcome::verdict(v.value, report)
        }
        Command::Classify { formula: f, kernel } => {
            let f = formula(&f)?;
            let l = levels(&f, kernel).map_err(|e| err(&e))?;
            let report = format!("Sigma level {}\nPi level {}", level_text(l.sigma), level_text(l.pi));
            Outcome::verdict(l.sigma.is_some(), report)
        }
        Command::Translate { how } => {
            let out = match how {
                Translation::Std { formula: f } => std_translate(&formula(&f)?).map_err(|e| err(&e))?,
                Translation::Forward { encoding, formula: f } => {
                    let enc = LinearEncoding::new(encoding);
                    forward_translate(&enc.forward, &formula(&f)?).map_err(|e| err(&e))?
                }
                Translation::Backward { encoding, formula: f } => {
                    let enc = LinearEncoding::new(encoding);
                    backward_translate(&enc.backward, &formula(&f)?).map_err(|e| err(&e))?
                }
            };
            Outcome::pass(print_formula(&out))
        }
        Command::Encode { encoding, structure: s } => {
            let enc = LinearEncoding::new(encoding);
            let e = enc.encode(&structure(&s)?).map_err(|e| err(&e))?;
            Outcome::pass(format!("{}{}", print_structure(&e.structure), correspondence(&e).trim_end()))
        }
        Command::Image { encoding } => {
            let enc = LinearEncoding::new(encoding);
            Outcome::pass(print_formula(enc.image_formula().map_err(|e| err(&e))?))
        }
        Command::Ts { action: TsAction::Run { ts, grid } } => {
            let ts = tiling(&ts)?;
            let g = structure(&grid)?;
            match find_run(&ts, &g).map_err(|e| err(&e))? {
                Some(states) => {
                    let names: Vec<&str> = states.iter().map(|&s| ts.states[s].as_str()).collect();
                    Outcome::verdict(true, format!("accepted\nrun {}", names.join(" ")))
                }
                None => Outcome::verdict(false, "rejected".into()),
            }
        }
        Command::Ts { action: TsAction::Compile { ts } } => Outcome::pass(print_formula(&ts_to_sigma1_hg(&tiling(&ts)?))),
        Command::Gridformula { list } => {
            if list {
                let lines: Vec<String> = grid_properties()
                    .iter()
                    .map(|p| format!("# ({}) {}\n{}", p.label, p.description, print_formula(&p.formula)))
                    .collect();
                Outcome::pass(lines.join("\n"))
            } else {
                Outcome::pass(print_formula(&grid_characterization()))
            }
        }
        Command::Enum { class, max, dedup } => {
            let mut out = String::new();
            let mut count = 0;
            for a in enumerate_structures(&class, max, dedup).map_err(|e| err(&e))? {
                count += 1;
                out.push_str(&print_structure(&a));
                out.push('\n');
            }
            let _ = write!(out, "# {count} structures");
            Outcome::pass(out)
        }
        Command::Verify { what: Verify::Kit { encoding, max } } => {
            let enc = LinearEncoding::new(encoding);
            let reports = check_kit(&enc, max).map_err(|e| err(&e))?;
            let ok = reports.iter().all(|r| r.passed());
            let body: String = reports.iter().map(|r| r.to_string()).collect();
            Outcome::verdict(ok, format!("{body}{}", if ok { "PASS" } else { "FAIL" }))
        }
        Command::Fig { cmd } => match cmd {
            Fig::Forward { l, m, mu } => {
                let cx = forward_counterexample(&family(&l)?, &family(&m)?, &injection(&mu)?).map_err(|e| err(&e))?;
                match cx {
                    None => Outcome::verdict(true, "true".into()),
                    Some(s) => Outcome::verdict(false, format!("false: member {s:?} has no counterpart")),
                }
            }
            Fig::Backward { l, m, mu } => {
                let v = backward_included(&family(&l)?, &family(&m)?, &injection(&mu)?).map_err(|e| err(&e))?;
                Outcome::verdict(v, v.to_string())
            }
            Fig::Equal { l, m, mu } => {
                let v = forward_equal(&family(&l)?, &family(&m)?, &injection(&mu)?).map_err(|e| err(&e))?;
                Outcome::verdict(v, v.to_string())
            }
            Fig::Lemma4 { l1, l2, m1, m2, mu } => {
                let x = LemmaInstance { l1: family(&l1)?, l2: family(&l2)?, m1: family(&m1)?, m2: family(&m2)?, mu: injection(&mu)? };
                lemma(lemma4_check(&x).map_err(|e| err(&e))?)
            }
            Fig::Lemma5 { l1, l2, m1, m2, mu } => {
                let x = LemmaInstance { l1: family(&l1)?, l2: family(&l2)?, m1: family(&m1)?, m2: family(&m2)?, mu: injection(&mu)? };
                lemma(lemma5_check(&x).map_err(|e| err(&e))?)
            }
        },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(cli.command);
    if cli.timing {
        eprintln!("elapsed {:?}", start.elapsed());
    }
    match result {
        Ok(o) => {
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{}", o.report);
            ExitCode::from(if o.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
