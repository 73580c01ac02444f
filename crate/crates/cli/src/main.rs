use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use ellipsis_core::expect::{check, Verdict};
use ellipsis_core::hocu::{SearchLimits, Solution};
use ellipsis_core::parallelism::{solve_discourse, Resolution, SolveError};
use ellipsis_core::syntax::{load_axioms, load_problem, print_term, DiscourseProblem, RelationMode};
use ellipsis_core::tableau::ProofResult;
use ellipsis_core::Error;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "ellipsis", version, about = "Resolve strict and sloppy readings of elliptical discourses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve problem files, or every `.prob` file in a directory.
    Run(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(required = true)]
    paths: Vec<PathBuf>,
    #[arg(long, default_value_t = 12)]
    max_depth: usize,
    #[arg(long, default_value_t = 64)]
    max_solutions: usize,
    /// Leave every symbol uncoloured.
    #[arg(long)]
    no_colours: bool,
    /// Override the relation checked on residues at type t.
    #[arg(long, value_parser = parse_relation)]
    relation: Option<RelationMode>,
    /// Extra axiom file, added to the problem's own axioms.
    #[arg(long)]
    axioms: Option<PathBuf>,
    #[arg(long)]
    show_substitutions: bool,
    /// Print the equations and all tableau traces.
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Report wall time per problem.
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn parse_relation(s: &str) -> Result<RelationMode, String> {
    RelationMode::parse(s).ok_or_else(|| format!("unknown relation `{}` (identity, entail, common-gen)", s))
}

#[derive(Serialize)]
struct SolutionOut {
    bindings: BTreeMap<String, String>,
    colours: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    flex_flex: Vec<String>,
}

#[derive(Serialize)]
struct ProofOut {
    status: String,
    closures: Vec<BTreeMap<String, String>>,
    trace: String,
}

#[derive(Serialize)]
struct ReadingOut {
    label: String,
    target: String,
    witness: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    proof: Option<ProofOut>,
}

#[derive(Serialize)]
struct Report {
    problem: String,
    /// Expectation verdict: pass, fail, none, or error.
    status: String,
    /// solved, no-solution, underdetermined, or error.
    outcome: String,
    complete: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    equations: Vec<String>,
    solutions: Vec<SolutionOut>,
    readings: Vec<ReadingOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    time_ms: Option<f64>,
}

impl Report {
    fn empty(problem: String) -> Self {
        Report {
            problem,
            status: "none".into(),
            outcome: "error".into(),
            complete: true,
            equations: Vec::new(),
            solutions: Vec::new(),
            readings: Vec::new(),
            failures: Vec::new(),
            error: None,
            time_ms: None,
        }
    }

    fn resource_out(&self) -> bool {
        !self.complete && self.status != "pass"
    }
}

fn solution_out(s: &Solution) -> SolutionOut {
    SolutionOut {
        bindings: s.subst.terms.iter().map(|(k, v)| (k.to_string(), print_term(v))).collect(),
        colours: s.subst.colours.iter().map(|(k, v)| (format!("?{}", k), v.to_string())).collect(),
        flex_flex: s.flex_flex.iter().map(|e| format!("{} = {}", print_term(&e.lhs), print_term(&e.rhs))).collect(),
    }
}

fn proof_out(p: &ProofResult) -> ProofOut {
    ProofOut {
        status: p.status.to_string(),
        closures: p
            .closures()
            .into_iter()
            .map(|(_, bs)| bs.into_iter().map(|(v, t)| (v.to_string(), print_term(&t))).collect())
            .collect(),
        trace: p.render_trace(),
    }
}

fn expand(paths: &[PathBuf]) -> Result<Vec<PathBuf>, Error> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let entries = std::fs::read_dir(p).map_err(|e| Error::Io {
                path: p.display().to_string(),
                message: e.to_string(),
            })?;
            let mut files: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "prob"))
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

fn prepare(path: &Path, args: &RunArgs) -> Result<DiscourseProblem, Error> {
    let mut p = load_problem(path)?;
    if args.no_colours {
        p = p.without_colours();
    }
    if let Some(r) = args.relation {
        p.relation = r;
    }
    if let Some(ax) = &args.axioms {
        let extra = load_axioms(ax, &p.signature)?;
        p.axioms.extend(extra);
    }
    Ok(p)
}

fn run_one(path: &Path, args: &RunArgs) -> Report {
    let started = Instant::now();
    let mut report = Report::empty(path.display().to_string());
    let problem = match prepare(path, args) {
        Ok(p) => p,
        Err(e) => {
            report.status = "error".into();
            report.error = Some(e.to_string());
            return report;
        }
    };
    let limits = SearchLimits {
        max_depth: args.max_depth,
        max_solutions: args.max_solutions,
        ..SearchLimits::default()
    };
    let outcome = solve_discourse(&problem, &limits);
    match &outcome {
        Ok(res) => fill(&mut report, res, args),
        Err(SolveError::Input(e)) => {
            report.status = "error".into();
            report.error = Some(e.to_string());
            return report;
        }
        Err(SolveError::NoSolution { complete }) => {
            report.outcome = "no-solution".into();
            report.complete = *complete;
        }
        Err(e @ SolveError::Underdetermined { .. }) => {
            report.outcome = "underdetermined".into();
            report.error = Some(e.to_string());
        }
    }
    if let Some(exps) = problem.expectations() {
        let Verdict { failures } = check(exps, &outcome);
        report.status = if failures.is_empty() { "pass" } else { "fail" }.into();
        report.failures = failures;
    }
    if args.timings {
        report.time_ms = Some(started.elapsed().as_secs_f64() * 1000.0);
    }
    report
}

fn fill(report: &mut Report, res: &Resolution, args: &RunArgs) {
    report.outcome = "solved".into();
    report.complete = res.complete;
    if args.trace {
        report.equations = res
            .equations
            .iter()
            .map(|e| format!("{} = {}", print_term(&e.lhs), print_term(&e.rhs)))
            .collect();
    }
    report.solutions = res.solutions.iter().map(solution_out).collect();
    report.readings = res
        .readings
        .iter()
        .map(|r| ReadingOut {
            label: r.label.to_string(),
            target: print_term(&r.target.strip_labels()),
            witness: r.witness.terms.iter().map(|(k, v)| (k.to_string(), print_term(v))).collect(),
            proof: r.proof.as_ref().map(proof_out),
        })
        .collect();
}

fn print_text(r: &Report, args: &RunArgs) {
    println!("== {} ==", r.problem);
    if let Some(t) = r.time_ms {
        println!("time: {:.1} ms", t);
    }
    for e in &r.equations {
        println!("equation: {}", e);
    }
    match r.outcome.as_str() {
        "solved" => {
            let note = if r.complete { "" } else { " (search incomplete)" };
            println!("readings: {}{}", r.readings.len(), note);
            for rd in &r.readings {
                println!("  [{}] {}", rd.label, rd.target);
                if args.show_substitutions {
                    let ws: Vec<String> = rd.witness.iter().map(|(k, v)| format!("{} <- {}", k, v)).collect();
                    println!("      {{{}}}", ws.join(", "));
                }
                if let Some(p) = &rd.proof {
                    println!("      relation proof: {}", p.status);
                    for line in p.trace.lines() {
                        println!("      | {}", line);
                    }
                }
            }
            println!("solutions: {}", r.solutions.len());
            if args.show_substitutions {
                for s in &r.solutions {
                    let mut parts: Vec<String> = s.bindings.iter().map(|(k, v)| format!("{} <- {}", k, v)).collect();
                    parts.extend(s.colours.iter().map(|(k, v)| format!("{} <- {}", k, v)));
                    println!("  {{{}}}", parts.join(", "));
                    for ff in &s.flex_flex {
                        println!("    flex-flex: {}", ff);
                    }
                }
            }
        }
        "no-solution" => {
            let note = if r.complete { "" } else { " within the search limits" };
            println!("no solution{}", note);
        }
        _ => {}
    }
    if let Some(e) = &r.error {
        println!("error: {}", e);
    }
    match r.status.as_str() {
        "pass" => println!("expect: pass"),
        "fail" => {
            println!("expect: FAIL");
            for f in &r.failures {
                println!("  {}", f);
            }
        }
        _ => {}
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run(args) = cli.command;
    let paths = match expand(&args.paths) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    };
    let reports: Vec<Report> = paths.par_iter().map(|p| run_one(p, &args)).collect();
    match args.format {
        Format::Json => match serde_json::to_string_pretty(&reports) {
            Ok(s) => println!("{}", s),
            Err(e) => {
                eprintln!("error: {}", e);
                return ExitCode::from(2);
            }
        },
        Format::Text => {
            for r in &reports {
                print_text(r, &args);
            }
        }
    }
    if reports.iter().any(|r| r.status == "error") {
        ExitCode::from(2)
    } else if reports.iter().any(|r| r.status == "fail") {
        if reports.iter().any(|r| r.status == "fail" && r.resource_out()) {
            ExitCode::from(3)
        } else {
            ExitCode::from(1)
        }
    } else if reports.iter().any(|r| r.status == "none" && r.resource_out() && r.readings.is_empty()) {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}
