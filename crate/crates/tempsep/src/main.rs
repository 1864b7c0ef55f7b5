//! Command-line front end: solve, verify, reduce, pad, and generate.
//!
//! Exit codes: 0 = YES / found / success, 1 = NO / not found, 2 =
//! indeterminate (a search budget ran out), 64 = usage error, 65 = input
//! format error.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use tempsep::graph::{parse_graph, write_graph, TemporalGraph, VertexId};
use tempsep::oracles;
use tempsep::reductions::{
    complement_path_instance, pad_delta, parse_hitting_set, parse_qdimacs,
    reduce_exists_forall_sat, reduce_hitting_set, write_hitting_set, write_qdimacs,
    ReducedInstance,
};
use tempsep::restless::{
    check_path, check_walk, find_path_with_budget, find_walk, PathOutcome, RestlessQuery,
    TemporalWalk, Witness, WitnessKind, DEFAULT_NODE_BUDGET,
};
use tempsep::separator::{
    check_separator, solve_bruteforce, solve_cegar, Answer, Separator, SeparatorInstance,
    SepVerdict, SolveOptions, SolveReport,
};

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_INDETERMINATE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(
    name = "tempsep",
    version,
    about = "Restless temporal paths, walks, and vertex separators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverKind {
    Brute,
    Cegar,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a restless walk between two vertices.
    SolveWalk {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 's', long)]
        source: u32,
        #[arg(short = 'z', long)]
        target: u32,
        #[arg(long)]
        delta: u32,
        #[arg(long)]
        json: bool,
    },
    /// Search for a restless path between two vertices (exact, budgeted).
    SolvePath {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 's', long)]
        source: u32,
        #[arg(short = 'z', long)]
        target: u32,
        #[arg(long)]
        delta: u32,
        /// Node-expansion cap for the search.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: usize,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether at most k vertex deletions destroy all restless paths.
    SolveSep {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 's', long)]
        source: u32,
        #[arg(short = 'z', long)]
        target: u32,
        #[arg(short = 'k')]
        k: usize,
        #[arg(long)]
        delta: u32,
        #[arg(long, value_enum, default_value = "cegar")]
        solver: SolverKind,
        /// Node-expansion cap per internal search.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: usize,
        /// Run both solvers and require identical answers.
        #[arg(long)]
        check: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check a walk/path witness file against a graph.
    VerifyPath {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 's', long)]
        source: u32,
        #[arg(short = 'z', long)]
        target: u32,
        #[arg(long)]
        delta: u32,
        /// Witness JSON ({"kind": "path"|"walk", "steps": [{u, v, t}, ...]}).
        #[arg(short = 'w', long)]
        witness: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check a candidate separator.
    VerifySep {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 's', long)]
        source: u32,
        #[arg(short = 'z', long)]
        target: u32,
        #[arg(short = 'k')]
        k: usize,
        #[arg(long)]
        delta: u32,
        /// Comma-separated vertex ids, e.g. "2,5,7"; empty for the empty set.
        #[arg(long, default_value = "")]
        separator: String,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: usize,
        #[arg(long)]
        json: bool,
    },
    /// Compile an exists-forall CNF formula into a separation instance.
    ReduceSat {
        /// QDIMACS input file.
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Graph output file (stdout if omitted).
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// Instance sidecar JSON output file.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Compile a hitting-set instance into a separation instance.
    ReduceHs {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Insert a trivial layer after every delta consecutive layers.
    Pad {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(long)]
        delta: u32,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Wrap a path query as a zero-budget separation instance.
    Complement {
        #[arg(short = 'g', long)]
        graph: PathBuf,
        #[arg(short = 's', long)]
        source: u32,
        #[arg(short = 'z', long)]
        target: u32,
        #[arg(long)]
        delta: u32,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Generate a seeded random temporal graph.
    GenGraph {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        lifetime: u32,
        #[arg(long)]
        density: f64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Generate a seeded random exists-forall CNF formula (QDIMACS).
    GenQbf {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        num_x: u32,
        #[arg(long)]
        num_y: u32,
        #[arg(long)]
        clauses: usize,
        #[arg(long)]
        width: usize,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Generate a seeded random hitting-set instance.
    GenHs {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        universe: u32,
        #[arg(long)]
        sets: usize,
        #[arg(long)]
        max_set_size: usize,
        /// Hitting budget of the generated instance.
        #[arg(short = 'k')]
        budget: u32,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

/// Failure carrying the exit code to report.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn data(message: impl fmt::Display) -> Self {
        Failure {
            code: EXIT_DATA,
            message: message.to_string(),
        }
    }
}

type RunResult = Result<u8, Failure>;

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::data(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: Option<&PathBuf>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| Failure::data(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<TemporalGraph, Failure> {
    let text = read_file(path)?;
    parse_graph(&text).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn build_query<'g>(
    g: &'g TemporalGraph,
    source: u32,
    target: u32,
    delta: u32,
) -> Result<RestlessQuery<'g>, Failure> {
    RestlessQuery::new(g, VertexId(source), VertexId(target), delta).map_err(Failure::data)
}

fn parse_separator_list(text: &str) -> Result<Separator, Failure> {
    let mut vertices = BTreeSet::new();
    for field in text.split(',') {
        let field = field.trim();
        if field.is_empty() {
            continue;
        }
        let id: u32 = field
            .parse()
            .map_err(|_| Failure::data(format!("invalid vertex id `{field}` in separator list")))?;
        vertices.insert(VertexId(id));
    }
    Ok(Separator::new(vertices))
}

fn print_walk_outcome(
    found: Option<&TemporalWalk>,
    kind: WitnessKind,
    graph: &TemporalGraph,
    json: bool,
    indeterminate: bool,
) -> u8 {
    let what = match kind {
        WitnessKind::Path => "path",
        WitnessKind::Walk => "walk",
    };
    if json {
        let value = match found {
            Some(w) => serde_json::json!({
                "found": true,
                "witness": Witness::new(kind, w),
            }),
            None => serde_json::json!({
                "found": false,
                "indeterminate": indeterminate,
            }),
        };
        println!("{}", serde_json::to_string_pretty(&value).expect("json"));
    } else {
        match found {
            Some(w) => {
                let labels: Vec<&str> = w.vertices().map(|v| graph.label(v)).collect();
                println!("{what} of length {}: {w}", w.len());
                println!("vertices: {}", labels.join(" -> "));
            }
            None if indeterminate => println!("indeterminate: search budget exhausted"),
            None => println!("no restless {what}"),
        }
    }
    if found.is_some() {
        EXIT_YES
    } else if indeterminate {
        EXIT_INDETERMINATE
    } else {
        EXIT_NO
    }
}

fn print_report(report: &SolveReport, graph: &TemporalGraph, json: bool) -> u8 {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report.to_json_value(graph)).expect("json")
        );
    } else {
        match &report.answer {
            Answer::Yes(sep) => {
                let labels: Vec<&str> =
                    sep.vertices().iter().map(|&v| graph.label(v)).collect();
                println!("YES: separator {} ({{{}}})", sep, labels.join(", "));
            }
            Answer::No => println!("NO: no separator within budget"),
            Answer::Indeterminate => println!("INDETERMINATE: search budget exhausted"),
        }
        println!(
            "statistics: {} oracle calls, {} candidates tested, {:.3} ms",
            report.stats.oracle_calls,
            report.stats.candidates_tested,
            report.stats.wall.as_secs_f64() * 1e3
        );
        for walk in &report.counterexample_paths {
            println!("counterexample path: {walk}");
        }
    }
    match report.answer {
        Answer::Yes(_) => EXIT_YES,
        Answer::No => EXIT_NO,
        Answer::Indeterminate => EXIT_INDETERMINATE,
    }
}

fn emit_reduction(
    reduced: &ReducedInstance,
    output: Option<&PathBuf>,
    labels: Option<&PathBuf>,
    json: bool,
) -> Result<u8, Failure> {
    write_output(output, &write_graph(reduced.instance.graph()))?;
    let sidecar = serde_json::to_string_pretty(&reduced.sidecar_json()).expect("json");
    if let Some(path) = labels {
        write_output(Some(path), &sidecar)?;
    }
    if json {
        println!("{sidecar}");
    } else if output.is_some() {
        let inst = &reduced.instance;
        eprintln!(
            "instance: {} vertices, lifetime {}, s={}, z={}, k={}, delta={}",
            inst.graph().vertex_count(),
            inst.graph().lifetime(),
            inst.source(),
            inst.target(),
            inst.k(),
            inst.delta()
        );
    }
    Ok(EXIT_YES)
}

fn run(cli: Cli) -> RunResult {
    match cli.command {
        Command::SolveWalk {
            graph,
            source,
            target,
            delta,
            json,
        } => {
            let g = load_graph(&graph)?;
            let q = build_query(&g, source, target, delta)?;
            let found = find_walk(&q);
            Ok(print_walk_outcome(
                found.as_ref(),
                WitnessKind::Walk,
                &g,
                json,
                false,
            ))
        }
        Command::SolvePath {
            graph,
            source,
            target,
            delta,
            budget,
            json,
        } => {
            let g = load_graph(&graph)?;
            let q = build_query(&g, source, target, delta)?;
            match find_path_with_budget(&q, budget) {
                PathOutcome::Found(w) => Ok(print_walk_outcome(
                    Some(&w),
                    WitnessKind::Path,
                    &g,
                    json,
                    false,
                )),
                PathOutcome::Absent => {
                    Ok(print_walk_outcome(None, WitnessKind::Path, &g, json, false))
                }
                PathOutcome::BudgetExceeded => {
                    Ok(print_walk_outcome(None, WitnessKind::Path, &g, json, true))
                }
            }
        }
        Command::SolveSep {
            graph,
            source,
            target,
            k,
            delta,
            solver,
            budget,
            check,
            json,
        } => {
            let g = load_graph(&graph)?;
            let inst = SeparatorInstance::new(g, VertexId(source), VertexId(target), k, delta)
                .map_err(Failure::data)?;
            let opts = SolveOptions {
                path_budget: budget,
                hitting_budget: budget,
            };
            if check {
                let brute = solve_bruteforce(&inst, &opts);
                let cegar = solve_cegar(&inst, &opts);
                let agree = match (&brute.answer, &cegar.answer) {
                    (Answer::Indeterminate, _) | (_, Answer::Indeterminate) => true,
                    (a, b) => a.is_yes() == b.is_yes(),
                };
                if !agree {
                    return Err(Failure {
                        code: EXIT_INTERNAL,
                        message: format!(
                            "solver disagreement: brute={} cegar={}",
                            brute.answer.as_str(),
                            cegar.answer.as_str()
                        ),
                    });
                }
                let primary = if matches!(brute.answer, Answer::Indeterminate) {
                    cegar
                } else {
                    brute
                };
                return Ok(print_report(&primary, inst.graph(), json));
            }
            let report = match solver {
                SolverKind::Brute => solve_bruteforce(&inst, &opts),
                SolverKind::Cegar => solve_cegar(&inst, &opts),
            };
            Ok(print_report(&report, inst.graph(), json))
        }
        Command::VerifyPath {
            graph,
            source,
            target,
            delta,
            witness,
            json,
        } => {
            let g = load_graph(&graph)?;
            let q = build_query(&g, source, target, delta)?;
            let text = read_file(&witness)?;
            let witness: Witness = serde_json::from_str(&text)
                .map_err(|e| Failure::data(format!("invalid witness JSON: {e}")))?;
            let walk = witness.walk();
            let result = match witness.kind {
                WitnessKind::Path => check_path(&q, &walk),
                WitnessKind::Walk => check_walk(&q, &walk),
            };
            if json {
                let value = serde_json::json!({
                    "valid": result.is_ok(),
                    "violation": result.as_ref().err().map(|v| v.to_string()),
                });
                println!("{}", serde_json::to_string_pretty(&value).expect("json"));
            } else {
                match &result {
                    Ok(()) => println!("valid"),
                    Err(v) => println!("invalid: {v}"),
                }
            }
            Ok(if result.is_ok() { EXIT_YES } else { EXIT_NO })
        }
        Command::VerifySep {
            graph,
            source,
            target,
            k,
            delta,
            separator,
            budget,
            json,
        } => {
            let g = load_graph(&graph)?;
            let inst = SeparatorInstance::new(g, VertexId(source), VertexId(target), k, delta)
                .map_err(Failure::data)?;
            let sep = parse_separator_list(&separator)?;
            let verdict = check_separator(&inst, &sep, budget).map_err(Failure::data)?;
            if json {
                let value = match &verdict {
                    SepVerdict::Separates => serde_json::json!({"separates": true}),
                    SepVerdict::PathSurvives(w) => serde_json::json!({
                        "separates": false,
                        "surviving_path": Witness::new(WitnessKind::Path, w),
                    }),
                    SepVerdict::Indeterminate => {
                        serde_json::json!({"separates": null, "indeterminate": true})
                    }
                };
                println!("{}", serde_json::to_string_pretty(&value).expect("json"));
            } else {
                match &verdict {
                    SepVerdict::Separates => println!("valid separator"),
                    SepVerdict::PathSurvives(w) => println!("not a separator; path survives: {w}"),
                    SepVerdict::Indeterminate => {
                        println!("indeterminate: search budget exhausted")
                    }
                }
            }
            Ok(match verdict {
                SepVerdict::Separates => EXIT_YES,
                SepVerdict::PathSurvives(_) => EXIT_NO,
                SepVerdict::Indeterminate => EXIT_INDETERMINATE,
            })
        }
        Command::ReduceSat {
            input,
            output,
            labels,
            json,
        } => {
            let text = read_file(&input)?;
            let q = parse_qdimacs(&text)
                .map_err(|e| Failure::data(format!("{}: {e}", input.display())))?;
            let reduced = reduce_exists_forall_sat(&q).map_err(Failure::data)?;
            emit_reduction(&reduced, output.as_ref(), labels.as_ref(), json)
        }
        Command::ReduceHs {
            input,
            output,
            labels,
            json,
        } => {
            let text = read_file(&input)?;
            let h = parse_hitting_set(&text)
                .map_err(|e| Failure::data(format!("{}: {e}", input.display())))?;
            let reduced = reduce_hitting_set(&h).map_err(Failure::data)?;
            emit_reduction(&reduced, output.as_ref(), labels.as_ref(), json)
        }
        Command::Pad {
            graph,
            delta,
            output,
        } => {
            let g = load_graph(&graph)?;
            let padded = pad_delta(&g, delta).map_err(Failure::data)?;
            write_output(output.as_ref(), &write_graph(&padded))?;
            Ok(EXIT_YES)
        }
        Command::Complement {
            graph,
            source,
            target,
            delta,
            output,
            labels,
        } => {
            let g = load_graph(&graph)?;
            let inst = complement_path_instance(&g, VertexId(source), VertexId(target), delta)
                .map_err(Failure::data)?;
            write_output(output.as_ref(), &write_graph(inst.graph()))?;
            let sidecar = serde_json::json!({
                "s": inst.source().0,
                "z": inst.target().0,
                "k": inst.k(),
                "delta": inst.delta(),
                "labels": inst.graph().labels(),
            });
            let sidecar = serde_json::to_string_pretty(&sidecar).expect("json");
            match labels {
                Some(path) => write_output(Some(&path), &sidecar)?,
                None => {
                    if output.is_some() {
                        println!("{sidecar}");
                    }
                }
            }
            Ok(EXIT_YES)
        }
        Command::GenGraph {
            seed,
            vertices,
            lifetime,
            density,
            output,
        } => {
            let g = oracles::gen_graph(seed, vertices, lifetime, density)
                .map_err(Failure::data)?;
            write_output(output.as_ref(), &write_graph(&g))?;
            Ok(EXIT_YES)
        }
        Command::GenQbf {
            seed,
            num_x,
            num_y,
            clauses,
            width,
            output,
        } => {
            let q = oracles::gen_qbf(seed, num_x, num_y, clauses, width)
                .map_err(Failure::data)?;
            write_output(output.as_ref(), &write_qdimacs(&q))?;
            Ok(EXIT_YES)
        }
        Command::GenHs {
            seed,
            universe,
            sets,
            max_set_size,
            budget,
            output,
        } => {
            let h = oracles::gen_hs(seed, universe, sets, max_set_size, budget)
                .map_err(Failure::data)?;
            write_output(output.as_ref(), &write_hitting_set(&h))?;
            Ok(EXIT_YES)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    return ExitCode::SUCCESS;
                }
                _ => EXIT_USAGE,
            };
            eprint!("{e}");
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
