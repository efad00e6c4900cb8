//! The `shelfwalk` command line.
//!
//! Exit codes: 0 on success, 1 on invalid input (with an error JSON on
//! stderr), 2 when `verify` finds a mismatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::extend::{ladder_spectrum, ladder_stages};
use crate::forest::forest_spectrum;
use crate::instance::{parse_weights, Instance, InstanceFile};
use crate::linalg::{build_transition_matrix, format_rational, Weights};
use crate::monoid::{doab_spectrum, monoid_report, DEFAULT_CAP};
use crate::oracle::{cross_check_dab, stationary_distribution, verify_spectrum, verify_symbolic, Check};
use crate::shuffle::apply_move;
use crate::spectrum::Spectrum;
use crate::tree::{LeafSet, ShelfTree};

#[derive(Debug, Parser)]
#[command(name = "shelfwalk", version, about = "Exact spectra of self-organizing library chains on shelf trees")]
struct Cli {
    /// Instance JSON file.
    #[arg(long, global = true)]
    instance: Option<PathBuf>,
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Emit a plain-text table (the default).
    #[arg(long, global = true)]
    table: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the states with their indices.
    States,
    /// Apply one move to a state.
    Apply {
        /// State as shelf words separated by `|`, e.g. `132|4|56`.
        #[arg(long)]
        pi: String,
        /// Leaf set as comma-separated labels; empty for the identity move.
        #[arg(long, allow_hyphen_values = true)]
        set: String,
    },
    /// Print the transition matrix, symbolic unless weights are given.
    Matrix {
        /// Weights: a JSON file, inline JSON, or `uniform`.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Compute the spectrum.
    Spectrum {
        #[arg(long, value_enum)]
        method: Method,
        /// Also list eigenvalues whose multiplicity is zero.
        #[arg(long)]
        keep_zero_multiplicity: bool,
    },
    /// Check a computed spectrum against the characteristic polynomial.
    Verify {
        /// Spectrum method; forest for rooted forests, ladder otherwise.
        #[arg(long, value_enum)]
        method: Option<Method>,
        /// Extra weight vector on top of the built-in ones.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Monoid structure of the moves.
    Monoid {
        /// Give up once a generated monoid exceeds this many elements.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Exact stationary distribution.
    Stationary {
        /// Weights: a JSON file, inline JSON, or `uniform`. Defaults to the instance weights.
        #[arg(long)]
        weights: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Forest,
    Ladder,
    Doab,
}

/// Runs the command line on `args` (program name first).
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = writeln!(err, "{}", json!({"error": "Usage", "message": e.to_string().trim_end()}));
            return 1;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let _ = writeln!(out, "{}", text.trim_end());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "{}", json!({"error": e.kind(), "message": e.to_string()}));
            1
        }
    }
}

fn load(cli: &Cli) -> Result<Instance> {
    let path = cli.instance.as_ref().ok_or_else(|| Error::Instance("--instance is required".into()))?;
    InstanceFile::load(path)?.build()
}

/// A path to a JSON file, inline JSON, or `uniform`.
fn weights_arg(t: &ShelfTree, arg: &str) -> Result<Weights> {
    if arg == "uniform" {
        return Ok(Weights::uniform(&t.admissible_sets()));
    }
    let w = if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|e| Error::Instance(format!("{arg}: {e}")))?;
        parse_weights(&text)?
    } else {
        parse_weights(arg)?
    };
    w.check_against(t)?;
    Ok(w)
}

fn resolve_weights(inst: &Instance, arg: Option<&str>) -> Result<Option<Weights>> {
    match (arg, &inst.weights) {
        (Some(a), _) => weights_arg(&inst.tree, a).map(Some),
        (None, Some(w)) => {
            w.check_against(&inst.tree)?;
            Ok(Some(w.clone()))
        }
        (None, None) => Ok(None),
    }
}

fn compute_spectrum(t: &ShelfTree, method: Method, keep_zero: bool) -> Result<Spectrum> {
    match method {
        Method::Forest => forest_spectrum(t, keep_zero),
        Method::Ladder => ladder_spectrum(t),
        Method::Doab => doab_spectrum(t, keep_zero),
    }
}

fn default_method(t: &ShelfTree) -> Method {
    if t.shelf_posets().iter().all(|p| p.is_rooted_forest()) {
        Method::Forest
    } else {
        Method::Ladder
    }
}

fn rationals(v: &[BigRational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    let inst = load(cli)?;
    let t = &inst.tree;
    let json_out = cli.json;
    match &cli.command {
        Command::States => {
            let ss = t.state_space();
            let names: Vec<String> = ss.states.iter().map(|s| t.format_state(s)).collect();
            if json_out {
                let rows: Vec<Value> =
                    names.iter().enumerate().map(|(i, s)| json!({"index": i, "state": s})).collect();
                return Ok((pretty(&json!(rows)), 0));
            }
            Ok((names.iter().enumerate().map(|(i, s)| format!("{i}\t{s}")).collect::<Vec<_>>().join("\n"), 0))
        }
        Command::Apply { pi, set } => {
            let s = t.parse_state(pi)?;
            let e = LeafSet::from_key(set)?;
            let image = t.format_state(&apply_move(t, &s, &e)?);
            if json_out {
                return Ok((pretty(&json!({"state": pi, "set": e.key(), "image": image})), 0));
            }
            Ok((image, 0))
        }
        Command::Matrix { weights } => {
            let m = build_transition_matrix(t)?;
            let names: Vec<String> = m.states.iter().map(|s| t.format_state(s)).collect();
            // only an explicit --weights turns the matrix numeric
            match weights.as_deref().map(|a| weights_arg(t, a)).transpose()? {
                None if json_out => Ok((pretty(&m.to_json(t)), 0)),
                None => {
                    let mut lines = Vec::new();
                    for i in 0..m.dim() {
                        for j in 0..m.dim() {
                            if !m.entry(i, j).is_zero() {
                                lines.push(format!("{} -> {}: {}", names[i], names[j], m.entry(i, j)));
                            }
                        }
                    }
                    Ok((lines.join("\n"), 0))
                }
                Some(w) => {
                    let a = m.substitute(&w)?;
                    let rows: Vec<Vec<String>> = a.rows().iter().map(|r| rationals(r)).collect();
                    if json_out {
                        return Ok((pretty(&json!({"states": names, "entries": rows})), 0));
                    }
                    let width = names.iter().map(|s| s.chars().count()).max().unwrap_or(0);
                    let lines: Vec<String> =
                        names.iter().zip(&rows).map(|(s, r)| format!("{s:<width$}  {}", r.join(" "))).collect();
                    Ok((lines.join("\n"), 0))
                }
            }
        }
        Command::Spectrum { method, keep_zero_multiplicity } => {
            let s = compute_spectrum(t, *method, *keep_zero_multiplicity)?;
            if json_out {
                return Ok((pretty(&serde_json::to_value(&s).expect("spectrum serializes")), 0));
            }
            Ok((s.table(), 0))
        }
        Command::Verify { method, weights } => {
            let method = method.unwrap_or_else(|| default_method(t));
            let spec = compute_spectrum(t, method, false)?;
            let mut ws = Vec::new();
            if let Some(w) = resolve_weights(&inst, weights.as_deref())? {
                ws.push(w);
            }
            ws.extend(Weights::standard(&t.admissible_sets()));
            let mut report = verify_spectrum(t, &spec, &ws)?;
            if t.state_count() <= crate::linalg::symbolic::SYMBOLIC_LIMIT as u128 {
                report.checks.push(verify_symbolic(t, &spec)?);
            }
            if method == Method::Ladder {
                for stage in ladder_stages(t)? {
                    if let Some(pair) = stage.next_break {
                        let name = format!("dab[{}:{},{}]", t.node(t.shelves()[pair.shelf]).id, pair.a, pair.b);
                        let ok = cross_check_dab(&stage.tree, pair)?;
                        report.checks.push(Check { name, passed: ok, residual: (!ok).then(|| "matrices differ".into()) });
                    }
                }
            }
            let code = if report.passed() { 0 } else { 2 };
            if json_out {
                return Ok((pretty(&serde_json::to_value(&report).expect("report serializes")), code));
            }
            Ok((report.table(), code))
        }
        Command::Monoid { cap } => {
            let r = monoid_report(t, *cap)?;
            if json_out {
                return Ok((pretty(&serde_json::to_value(&r).expect("report serializes")), 0));
            }
            let mut lines = vec![format!(
                "moves generate {} transformations of {} states; R-trivial: {}",
                r.elements, r.states, r.r_trivial
            )];
            for f in &r.factors {
                lines.push(format!(
                    "shelf {}: {} elements on {} extensions, {} J-classes, R-trivial: {}",
                    f.shelf,
                    f.elements,
                    f.extensions,
                    f.classes.len(),
                    f.r_trivial
                ));
                for c in &f.classes {
                    let below: Vec<String> =
                        f.order.iter().filter(|(_, hi)| *hi == c.id).map(|(lo, _)| lo.to_string()).collect();
                    lines.push(format!(
                        "  J{}: size {}, {}, |H| = {}, e = {}, below [{}]",
                        c.id,
                        c.size,
                        if c.regular { "regular" } else { "not regular" },
                        c.group_order,
                        c.idempotent.as_deref().unwrap_or("-"),
                        below.join(",")
                    ));
                    for (k, row) in c.characters.iter().enumerate() {
                        lines.push(format!("    χ{k}: {}", row.join(" ")));
                    }
                }
            }
            Ok((lines.join("\n"), 0))
        }
        Command::Stationary { weights } => {
            let w = resolve_weights(&inst, weights.as_deref())?
                .ok_or_else(|| Error::MissingWeight("all sets (pass --weights)".into()))?;
            let m = build_transition_matrix(t)?;
            let pi = stationary_distribution(&m.substitute(&w)?)?;
            let names: Vec<String> = m.states.iter().map(|s| t.format_state(s)).collect();
            if json_out {
                return Ok((pretty(&json!({"states": names, "distribution": rationals(&pi)})), 0));
            }
            let lines: Vec<String> =
                names.iter().zip(&pi).map(|(s, p)| format!("{s}\t{}", format_rational(p))).collect();
            Ok((lines.join("\n"), 0))
        }
    }
}
