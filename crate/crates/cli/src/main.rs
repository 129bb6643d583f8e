//! Command-line front end: parse, lower, check, bench and experiment
//! subcommands. Exit codes: 0 when the property holds (or the command
//! succeeded), 1 when a property is violated (a replayable trace is written
//! next to the model), 2 on usage or modeling errors.

use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use tdve_cli::experiments::{self, ObservePlacement};
use tdve_cli::{fischer, format_trace, gen_preemptive};
use tdve_core::{validate_timed, Expr, Model, TimedModel};
use tdve_cycle::{build_property, compose_property, Algorithm, PropertyTemplate};
use tdve_engine::{explore, CompiledModel, ExploreConfig, Verdict};
use tdve_frontend::{parse, parse_expr, pretty, pretty_lowered};
use tdve_lower::{LoweringConfig, Method};

#[derive(Parser)]
#[command(
    name = "tdve",
    version,
    about = "Explicit-state model checker with a discrete-time front end"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct LowerOpts {
    /// Lowering method
    #[arg(long, default_value = "eedm")]
    method: Method,
    /// Keep the current-time variable in the lowered model
    #[arg(long)]
    now: bool,
    /// Drop the current-time variable even when observe flags exist
    #[arg(long, conflicts_with = "now")]
    no_now: bool,
    /// Sentinel for inactive timers
    #[arg(long, default_value_t = tdve_core::DEFAULT_INFINITY)]
    infinity: i64,
    /// Modulus for the current-time variable
    #[arg(long, default_value_t = tdve_core::DEFAULT_MAXIMAL)]
    maximal: i64,
}

impl LowerOpts {
    fn config(&self) -> LoweringConfig {
        let mut cfg = LoweringConfig::new(self.method)
            .with_infinity(self.infinity)
            .with_maximal(self.maximal);
        if self.now {
            cfg = cfg.with_now(true);
        } else if self.no_now {
            cfg = cfg.with_now(false);
        }
        cfg
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a model file
    Parse { file: PathBuf },
    /// Lower a timed model and print the untimed result
    Lower {
        file: PathBuf,
        #[command(flatten)]
        lower: LowerOpts,
    },
    /// Check a property of a (timed) model
    Check {
        file: PathBuf,
        #[command(flatten)]
        lower: LowerOpts,
        /// Temporal property: G(p), F(p) or G(p -> F(q)) over globals
        #[arg(long)]
        property: Option<String>,
        /// File holding a never-claim process (accept-marked)
        #[arg(long, conflicts_with = "property")]
        claim: Option<PathBuf>,
        #[arg(long, default_value = "owcty")]
        algorithm: Algorithm,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Run a benchmark instance
    Bench {
        #[command(subcommand)]
        bench: BenchCommand,
    },
    /// Rerun one of the benchmark experiments and write its CSV
    Experiment {
        /// 1: equal bounds swept together; 2: the check's upper bound swept
        number: u32,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        from: u32,
        #[arg(long, default_value_t = 9)]
        to: u32,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Observe placement for standard-mode rows
        #[arg(long, default_value = "whole-run")]
        observe: String,
        /// CSV output path (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Timed mutual exclusion over a shared lock variable
    Fischer {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        db_u: u32,
        #[arg(long, default_value_t = 2)]
        dc_l: u32,
        #[arg(long, default_value_t = 2)]
        dc_u: u32,
        #[command(flatten)]
        lower: LowerOpts,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Write the generated model source to this path
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Pre-emptive scheduling of prioritized tasks over one resource
    Preemptive {
        /// Work units per task, lowest priority first, e.g. 3,2
        #[arg(long, value_delimiter = ',', default_values_t = [3u32, 2u32])]
        units: Vec<u32>,
        #[command(flatten)]
        lower: LowerOpts,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Parse { file } => {
            let tm = load(&file)?;
            let diags = validate_timed(&tm);
            if diags.is_empty() {
                println!(
                    "{}: {} process(es), {} bounded transition(s)",
                    file.display(),
                    tm.base.processes.len(),
                    tm.bounds.len()
                );
                Ok(ExitCode::SUCCESS)
            } else {
                for d in &diags {
                    eprintln!("{}:{}", file.display(), d);
                }
                Err(format!("{} diagnostic(s)", diags.len()))
            }
        }
        Command::Lower { file, lower } => {
            let tm = load(&file)?;
            let model = tdve_lower::lower(&tm, &lower.config()).map_err(|e| e.to_string())?;
            print!("{}", pretty_lowered(&model));
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            file,
            lower,
            property,
            claim,
            algorithm,
            workers,
        } => {
            let tm = load(&file)?;
            let tm = attach_claim(tm, property.as_deref(), claim.as_deref())?;
            let model = if tm.bounds.is_empty() {
                // untimed model: no instrumentation needed
                tm.base.clone()
            } else {
                tdve_lower::lower(&tm, &lower.config()).map_err(|e| e.to_string())?
            };
            if model.property.is_none() {
                return Err("nothing to check: give --property or --claim, or mark a property process with 'accept'".into());
            }
            let verdict = tdve_cycle::check_liveness(
                &model,
                algorithm,
                &ExploreConfig::with_workers(workers),
            )
            .map_err(|e| e.to_string())?;
            report(&model, &verdict, &file)
        }
        Command::Bench { bench } => run_bench(bench),
        Command::Experiment {
            number,
            n,
            from,
            to,
            workers,
            observe,
            out,
        } => {
            let placement = match observe.as_str() {
                "delay" => ObservePlacement::DelayOnly,
                "write" => ObservePlacement::WriteOnly,
                "whole-run" | "both" => ObservePlacement::WholeRun,
                other => return Err(format!("unknown observe placement '{other}'")),
            };
            let rows = match number {
                1 => experiments::run_experiment1(n, from..=to, workers, placement),
                2 => experiments::run_experiment2(n, from..=to, workers, placement),
                other => return Err(format!("no experiment {other}; use 1 or 2")),
            }
            .map_err(|e| e.to_string())?;
            let csv = experiments::csv(&rows);
            match out {
                Some(path) => {
                    std::fs::write(&path, csv).map_err(|e| format!("{}: {e}", path.display()))?;
                    eprintln!("wrote {} rows to {}", rows.len(), path.display());
                }
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load(path: &Path) -> Result<TimedModel, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&text, &path.display().to_string()).map_err(|e| e.to_string())
}

/// Parse `G(p)`, `F(p)` or `G(p -> F(q))` into a claim and compose it.
fn attach_claim(
    tm: TimedModel,
    property: Option<&str>,
    claim_file: Option<&Path>,
) -> Result<TimedModel, String> {
    let claim = match (property, claim_file) {
        (None, None) => return Ok(tm),
        (Some(prop), None) => build_property(&parse_property(prop)?),
        (None, Some(path)) => {
            let claim_tm = load(path)?;
            let mut procs = claim_tm.base.processes;
            if procs.len() != 1 {
                return Err(format!(
                    "{}: a claim file holds exactly one process",
                    path.display()
                ));
            }
            let p = procs.pop().unwrap();
            if p.accepting.is_empty() {
                return Err(format!(
                    "{}: claim process has no accept locations",
                    path.display()
                ));
            }
            p
        }
        (Some(_), Some(_)) => unreachable!("clap forbids both"),
    };
    if tm.base.property.is_some() {
        return Err("model already contains a property process".into());
    }
    Ok(TimedModel {
        base: compose_property(&tm.base, claim),
        bounds: tm.bounds,
        observe: tm.observe,
    })
}

fn parse_property(text: &str) -> Result<PropertyTemplate, String> {
    let s = text.trim();
    let inner = |s: &str| -> Result<String, String> {
        let open = s
            .find('(')
            .ok_or_else(|| format!("expected '(' in '{s}'"))?;
        if !s.ends_with(')') {
            return Err(format!("expected ')' at the end of '{s}'"));
        }
        Ok(s[open + 1..s.len() - 1].to_string())
    };
    let expr = |s: &str| -> Result<Expr, String> {
        parse_expr(s, "<property>").map_err(|e| e.to_string())
    };
    if let Some(rest) = s.strip_prefix('G') {
        let body = inner(rest.trim())?;
        // response shape: p -> F(q), with the arrow at depth zero
        let mut depth = 0i32;
        let bytes = body.as_bytes();
        for i in 0..bytes.len().saturating_sub(1) {
            match bytes[i] {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'-' if depth == 0 && bytes[i + 1] == b'>' => {
                    let p = expr(&body[..i])?;
                    let right = body[i + 2..].trim();
                    let q_body = inner(
                        right
                            .strip_prefix('F')
                            .ok_or_else(|| format!("expected F(..) after '->' in '{s}'"))?
                            .trim(),
                    )?;
                    return Ok(PropertyTemplate::ResponsePQ(p, expr(&q_body)?));
                }
                _ => {}
            }
        }
        return Ok(PropertyTemplate::AlwaysP(expr(&body)?));
    }
    if let Some(rest) = s.strip_prefix('F') {
        return Ok(PropertyTemplate::EventuallyP(expr(&inner(rest.trim())?)?));
    }
    Err(format!(
        "unsupported property '{s}'; use G(p), F(p) or G(p -> F(q))"
    ))
}

/// Print the verdict, write the trace next to the model, map to exit codes.
fn report(model: &Model, verdict: &Verdict, file: &Path) -> Result<ExitCode, String> {
    let s = &verdict.stats;
    eprintln!(
        "states={} transitions={} time_ms={} mem_bytes={} deadlocks={}",
        s.states, s.transitions, s.time_ms, s.mem_bytes, s.deadlocks
    );
    if verdict.holds {
        println!("holds");
        return Ok(ExitCode::SUCCESS);
    }
    println!("violated");
    if let Some(trace) = &verdict.trace {
        let cm = CompiledModel::compile(model).map_err(|e| e.to_string())?;
        tdve_cli::replay(&cm, trace)
            .map_err(|e| format!("internal: trace does not replay: {e}"))?;
        let out = file.with_extension("trace");
        std::fs::write(&out, format_trace(&cm, trace))
            .map_err(|e| format!("{}: {e}", out.display()))?;
        eprintln!("trace written to {}", out.display());
    }
    Ok(ExitCode::from(1))
}

fn run_bench(bench: BenchCommand) -> Result<ExitCode, String> {
    match bench {
        BenchCommand::Fischer {
            n,
            db_u,
            dc_l,
            dc_u,
            lower,
            workers,
            emit,
        } => {
            let params =
                fischer::FischerParams::new(n, db_u, dc_l, dc_u).map_err(|e| e.to_string())?;
            let tm = fischer::gen_fischer(params);
            if let Some(path) = &emit {
                std::fs::write(path, pretty(&tm))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                eprintln!("model written to {}", path.display());
            }
            let model = tdve_lower::lower(&tm, &lower.config()).map_err(|e| e.to_string())?;
            let cm = CompiledModel::compile(&model).map_err(|e| e.to_string())?;
            let verdict = tdve_engine::check_safety(
                &cm,
                &fischer::mutual_exclusion_bad(),
                &ExploreConfig::with_workers(workers),
            )
            .map_err(|e| e.to_string())?;
            let s = &verdict.stats;
            println!(
                "{},{},fischer,n={};db_u={};dc_l={};dc_u={},{},{},{},{},{}",
                match lower.method {
                    Method::Ledm => "ledm",
                    Method::Eedm => "eedm",
                },
                if lower.method == Method::Eedm {
                    "leaping"
                } else {
                    "-"
                },
                n,
                db_u,
                dc_l,
                dc_u,
                s.states,
                s.transitions,
                s.time_ms,
                s.mem_bytes,
                if verdict.holds { "holds" } else { "violated" }
            );
            if verdict.holds {
                Ok(ExitCode::SUCCESS)
            } else {
                if let Some(trace) = &verdict.trace {
                    tdve_cli::replay(&cm, trace).map_err(|e| format!("internal: {e}"))?;
                    let out = PathBuf::from(format!("fischer-{n}-{db_u}-{dc_l}-{dc_u}.trace"));
                    std::fs::write(&out, format_trace(&cm, trace))
                        .map_err(|e| format!("{}: {e}", out.display()))?;
                    eprintln!("trace written to {}", out.display());
                }
                Ok(ExitCode::from(1))
            }
        }
        BenchCommand::Preemptive {
            units,
            lower,
            workers,
            emit,
        } => {
            let tm = gen_preemptive(&units).map_err(|e| e.to_string())?;
            if let Some(path) = &emit {
                std::fs::write(path, pretty(&tm))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                eprintln!("model written to {}", path.display());
            }
            let model = tdve_lower::lower(&tm, &lower.config()).map_err(|e| e.to_string())?;
            let cm = CompiledModel::compile(&model).map_err(|e| e.to_string())?;
            let g =
                explore(&cm, &ExploreConfig::with_workers(workers)).map_err(|e| e.to_string())?;
            // exclusive execution: never two tasks in their running location
            let exec_locs: Vec<Vec<usize>> = model
                .processes
                .iter()
                .map(|p| {
                    p.locations
                        .iter()
                        .enumerate()
                        .filter(|(_, l)| l.starts_with("s_Exec"))
                        .map(|(i, _)| i)
                        .collect()
                })
                .collect();
            let mut exclusive = true;
            for s in &g.states {
                let running = (0..model.processes.len())
                    .filter(|&pi| {
                        let loc = s.values[cm.layout.location_slot(pi)] as usize;
                        exec_locs[pi].contains(&loc)
                    })
                    .count();
                if running > 1 {
                    exclusive = false;
                    break;
                }
            }
            let st = &g.stats;
            println!(
                "{},{},preemptive,units={},{},{},{},{},{}",
                match lower.method {
                    Method::Ledm => "ledm",
                    Method::Eedm => "eedm",
                },
                if lower.method == Method::Eedm {
                    "standard"
                } else {
                    "-"
                },
                units
                    .iter()
                    .map(|u| u.to_string())
                    .collect::<Vec<_>>()
                    .join(":"),
                st.states,
                st.transitions,
                st.time_ms,
                st.mem_bytes,
                if exclusive { "holds" } else { "violated" }
            );
            Ok(if exclusive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
