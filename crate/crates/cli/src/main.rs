//! `slimcon`: build lattices and structures, evaluate formulas, check the
//! lattice properties and run the verification suites.
//!
//! Exit codes: 0 success, 1 the checked property is false (or a run found
//! counterexamples), 2 usage or input error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use slimcon::congruence::{congruence_lattice, jir_congruence_poset};
use slimcon::enumverify::{
    verify_birkhoff, verify_remark_18, verify_theorem_a, verify_theorem_b, verify_theorem_c, TheoremAConfig,
    VerificationRun,
};
use slimcon::folang::{library, parse, EvalOptions, Evaluator, Formula, Valuation};
use slimcon::order::{self, crown, downset_lattice, is_isomorphic, Lattice, Poset};
use slimcon::props::{Analysis, EdgeReading};
use slimcon::slimsm::{build_ln, PlanarSlimLattice};
use slimcon::structures::{self, circle_graph, cyclic_group, BipartiteMode};
use slimcon::{FiniteStructure, GraphView, PropertyReport};

#[derive(Parser)]
#[command(name = "slimcon", version, about = "Finite lattices, congruences and first-order checks")]
struct Cli {
    /// write the result here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a standard structure and print it as JSON
    Build(BuildArgs),
    /// Evaluate a first-order formula on a structure
    Eval(EvalArgs),
    /// Check one property, printing the verdict with its witness
    Check(CheckArgs),
    /// Congruence lattice of a lattice
    Con(ConArgs),
    /// Build L_n and check that J(Con L_n) is the crown K_n
    Ln {
        #[arg(long)]
        n: usize,
    },
    /// Run a verification suite
    Verify(VerifyArgs),
    /// Export a structure, poset, lattice or diagram
    Export(ExportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildKind {
    Crown,
    Circle,
    Fence,
    Chain,
    Grid,
    Zn,
    Ln,
    Downset,
    Fd3,
}

#[derive(Args)]
struct BuildArgs {
    kind: BuildKind,
    /// size parameter (crown, circle, fence, chain, grid side, zn, ln)
    #[arg(long)]
    n: Option<usize>,
    /// poset JSON, for `downset`
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// formula source
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    formula: Option<String>,
    /// library formula, `name` or `name:k` or `name:k,l`
    #[arg(long)]
    builtin: Option<String>,
    #[arg(long = "in")]
    input: PathBuf,
    /// value of a free variable, `name=element`; repeatable
    #[arg(long = "at", value_parser = parse_binding)]
    at: Vec<(String, usize)>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Bipartite,
    TwoCover,
    Bmep,
    Dcep,
    Cyclic,
    Multicyclic,
    Slim,
    Semimodular,
    Distributive,
}

#[derive(Args)]
struct CheckArgs {
    property: Property,
    #[arg(long = "in")]
    input: PathBuf,
    /// re-check a witness: the fresh report's, or the report stored in FILE
    #[arg(long, value_name = "FILE", num_args = 0..=1)]
    recheck_witness: Option<Option<PathBuf>>,
    /// adjacency of maximal join-irreducibles: lower-bound or lower-cover
    #[arg(long, default_value = "lower-bound", value_parser = parse_reading)]
    reading: EdgeReading,
    /// bipartite and bmep: also require two nonempty parts
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct ConArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// print J(Con L) as a poset instead
    #[arg(long)]
    jir: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    TheoremA,
    TheoremB,
    TheoremC,
    #[value(name = "remark-18")]
    Remark18,
    Birkhoff,
}

#[derive(Args)]
struct VerifyArgs {
    suite: Suite,
    #[arg(long, default_value_t = 6)]
    max_poset: usize,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    grid_k: usize,
    #[arg(long, default_value_t = 6)]
    max_forks: usize,
    /// 0 = all cores, 1 = sequential
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, default_value = "lower-bound", value_parser = parse_reading)]
    reading: EdgeReading,
    /// include wall time (makes the output run-dependent)
    #[arg(long)]
    timings: bool,
    /// print the one-paragraph summary instead of JSON
    #[arg(long)]
    summary: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "format")]
struct ExportFormat {
    #[arg(long)]
    dot: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    format: ExportFormat,
    #[arg(long = "in")]
    input: PathBuf,
}

fn parse_binding(s: &str) -> Result<(String, usize), String> {
    let (name, value) = s.split_once('=').ok_or("expected name=element")?;
    let value = value.trim().parse().map_err(|_| format!("bad element {value:?}"))?;
    Ok((name.trim().to_string(), value))
}

fn parse_reading(s: &str) -> Result<EdgeReading, String> {
    s.parse()
}

/// Anything the JSON readers accept.
enum Input {
    Structure(FiniteStructure),
    Poset(Poset),
    Diagram(PlanarSlimLattice),
}

impl Input {
    fn load(path: &Path) -> Result<Input> {
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        } else {
            fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?
        };
        let value: Value = serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))?;
        if value.get("signature").is_some() {
            Ok(Input::Structure(FiniteStructure::from_json(&value)?))
        } else if value.get("coverOrder").is_some() {
            Ok(Input::Diagram(PlanarSlimLattice::from_json(&value)?))
        } else {
            Ok(Input::Poset(Poset::from_json(&value)?))
        }
    }

    fn lattice(&self) -> Result<Lattice> {
        match self {
            Input::Structure(_) => bail!("expected a poset or lattice, got a structure"),
            Input::Poset(p) => Ok(Lattice::from_poset(p.clone())?),
            Input::Diagram(d) => Ok(d.lattice().clone()),
        }
    }

    fn structure(&self) -> FiniteStructure {
        match self {
            Input::Structure(s) => s.clone(),
            Input::Poset(p) => match Lattice::from_poset(p.clone()) {
                Ok(l) => l.to_structure(),
                Err(_) => p.to_structure(),
            },
            Input::Diagram(d) => d.lattice().to_structure(),
        }
    }

    fn graph(&self) -> Result<GraphView> {
        match self {
            Input::Structure(s) => Ok(GraphView::new(s.clone())?),
            _ => bail!("expected a graph structure"),
        }
    }
}

/// What a command produced and how it should exit.
struct Output {
    text: String,
    negative: bool,
}

impl Output {
    fn json(value: &Value, negative: bool) -> Self {
        Output {
            text: serde_json::to_string_pretty(value).expect("JSON prints"),
            negative,
        }
    }
}

fn need_n(n: Option<usize>, kind: &str) -> Result<usize> {
    n.ok_or_else(|| anyhow!("build {kind} needs --n"))
}

fn build(args: &BuildArgs) -> Result<Output> {
    let value = match args.kind {
        BuildKind::Crown => crown(need_n(args.n, "crown")?)?.to_json(),
        BuildKind::Fence => order::fence_segment(need_n(args.n, "fence")?)?.to_json(),
        BuildKind::Chain => order::chain(need_n(args.n, "chain")?)?.to_json(),
        BuildKind::Grid => order::grid(need_n(args.n, "grid")?)?.to_json(),
        BuildKind::Circle => circle_graph(need_n(args.n, "circle")?)?.structure().to_json(),
        BuildKind::Zn => cyclic_group(need_n(args.n, "zn")?)?.to_json(),
        BuildKind::Ln => build_ln(need_n(args.n, "ln")?)?.to_json(),
        BuildKind::Downset => {
            let path = args.input.as_ref().ok_or_else(|| anyhow!("build downset needs --in"))?;
            match Input::load(path)? {
                Input::Poset(p) => downset_lattice(&p)?.to_json(),
                _ => bail!("build downset needs a poset"),
            }
        }
        BuildKind::Fd3 => downset_lattice(&crown(3)?)?.to_json(),
    };
    Ok(Output::json(&value, false))
}

fn builtin_formula(spec: &str) -> Result<Formula> {
    let (name, params) = match spec.split_once(':') {
        Some((name, ps)) => {
            let params = ps
                .split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| anyhow!("bad parameter {p:?}")))
                .collect::<Result<Vec<_>>>()?;
            (name, params)
        }
        None => (spec, Vec::new()),
    };
    Ok(library::builtin(name, &params)?)
}

fn eval_cmd(args: &EvalArgs) -> Result<Output> {
    let input = Input::load(&args.input)?;
    let s = input.structure();
    let f = match (&args.formula, &args.builtin) {
        (Some(src), _) => parse(src, s.signature())?,
        (None, Some(b)) => builtin_formula(b)?,
        (None, None) => bail!("give --formula or --builtin"),
    };
    let mut ev = Evaluator::new(&f, &s, &EvalOptions::default())?;
    let free: Vec<String> = f.free_vars().into_iter().collect();
    let val: Valuation = args.at.iter().cloned().collect();
    if free.len() == 1 && !val.contains_key(&free[0]) {
        let values = ev.eval_each()?;
        return Ok(Output::json(
            &json!({ "formula": f.to_string(), "variable": free[0], "values": values }),
            false,
        ));
    }
    let value = ev.eval(&val)?;
    Ok(Output::json(&json!({ "formula": f.to_string(), "value": value }), !value))
}

fn check(args: &CheckArgs) -> Result<Output> {
    let input = Input::load(&args.input)?;
    let mode = if args.strict {
        BipartiteMode::Strict
    } else {
        BipartiteMode::Standard
    };
    let stored = match &args.recheck_witness {
        Some(Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            Some(serde_json::from_str::<PropertyReport>(&text).context("not a property report")?)
        }
        _ => None,
    };
    let (report, accepted) = if args.property == Property::Bipartite {
        let g = input.graph()?;
        let report = stored.unwrap_or(structures::is_bipartite(&g, mode)?);
        let ok = structures::recheck_bipartite(&g, &report);
        (report, ok)
    } else {
        let l = input.lattice()?;
        match args.property {
            Property::Slim | Property::Semimodular | Property::Distributive => {
                let report = stored.unwrap_or_else(|| match args.property {
                    Property::Slim => order::slim_report(&l),
                    Property::Semimodular => order::semimodular_report(&l),
                    _ => order::distributive_report(&l),
                });
                let ok = order::recheck_order_witness(&l, &report);
                (report, ok)
            }
            _ => {
                let a = Analysis::with_reading(&l, args.reading)?;
                let report = match stored {
                    Some(r) => r,
                    None => match args.property {
                        Property::TwoCover => a.two_cover_report(),
                        Property::Bmep => a.bmep_report(mode, args.reading),
                        Property::Dcep => a.dcep_report()?,
                        Property::Cyclic => a.cyclic_report()?,
                        _ => a.multicyclic_report()?,
                    },
                };
                let ok = a.recheck(&report)?;
                (report, ok)
            }
        }
    };
    if args.recheck_witness.is_some() {
        let value = json!({ "property": report.property, "verdict": report.verdict, "witness_ok": accepted });
        return Ok(Output::json(&value, !accepted));
    }
    let value = serde_json::to_value(&report)?;
    Ok(Output::json(&value, !report.verdict))
}

fn con(args: &ConArgs) -> Result<Output> {
    let l = Input::load(&args.input)?.lattice()?;
    let value = if args.jir {
        jir_congruence_poset(&l).map_or(Value::Null, |p| p.to_json())
    } else {
        congruence_lattice(&l)?.to_json()
    };
    Ok(Output::json(&value, false))
}

fn ln(n: usize) -> Result<Output> {
    let l = build_ln(n)?;
    let j = jir_congruence_poset(l.lattice()).ok_or_else(|| anyhow!("L_{n} has a trivial congruence lattice"))?;
    let is_crown = is_isomorphic(&j, &crown(n)?).is_some();
    let value = json!({
        "n": n,
        "size": l.size(),
        "cells": l.cells().len(),
        "jir_con_size": j.size(),
        "jir_con_is_crown": is_crown,
    });
    Ok(Output::json(&value, !is_crown))
}

fn verify(args: &VerifyArgs) -> Result<Output> {
    let run: VerificationRun = match args.suite {
        Suite::TheoremA => verify_theorem_a(&TheoremAConfig {
            count: args.count,
            seed: args.seed,
            grid_k: args.grid_k,
            max_forks: args.max_forks,
            reading: args.reading,
            workers: args.workers,
            ..TheoremAConfig::default()
        })?,
        Suite::TheoremB => verify_theorem_b(args.max_poset, args.workers, args.reading)?,
        Suite::TheoremC => verify_theorem_c(args.max_poset, args.workers)?,
        Suite::Remark18 => verify_remark_18(args.max_poset, args.workers, args.reading)?,
        Suite::Birkhoff => verify_birkhoff(args.max_poset, args.workers)?,
    };
    if args.summary {
        let mut text = run.summary_text();
        if args.timings {
            text.push_str(&format!("\nwall time {} ms", run.wall_ms));
        }
        return Ok(Output {
            text,
            negative: !run.passed(),
        });
    }
    let mut value = run.to_json();
    if args.timings {
        value["wall_ms"] = json!(run.wall_ms as u64);
    }
    Ok(Output::json(&value, !run.passed()))
}

fn export(args: &ExportArgs) -> Result<Output> {
    let input = Input::load(&args.input)?;
    if args.format.json {
        let value = match &input {
            Input::Structure(s) => s.to_json(),
            Input::Poset(p) => p.to_json(),
            Input::Diagram(d) => d.to_json(),
        };
        return Ok(Output::json(&value, false));
    }
    let text = match &input {
        Input::Structure(_) => input.graph()?.to_dot(),
        Input::Poset(p) => p.to_dot(),
        Input::Diagram(d) => d.to_dot(),
    };
    Ok(Output {
        text: text.trim_end().to_string(),
        negative: false,
    })
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Build(a) => build(a),
        Command::Eval(a) => eval_cmd(a),
        Command::Check(a) => check(a),
        Command::Con(a) => con(a),
        Command::Ln { n } => ln(*n),
        Command::Verify(a) => verify(a),
        Command::Export(a) => export(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, format!("{}\n", out.text)).with_context(|| format!("cannot write {}", path.display())),
        // a closed pipe (`| head`) is not an error
        None => match writeln!(io::stdout().lock(), "{}", out.text) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if out.negative {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
