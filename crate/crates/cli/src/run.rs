use anyhow::{anyhow, bail, Context, Result};

use wgl_core::config::{AdjacencyMode, Config, OutputFormat};
use wgl_core::game::GameParams;
use wgl_core::solver;

use crate::args::{Cli, Command, DiagCommand, SolverOpts, SortCommand, WitnessCommand};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;

pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Solve { k, factors, opts } => cmd_solve(k, &factors, &opts),
        Command::Sweep { k, factors, opts } => cmd_sweep(&k, &factors, &opts),
        Command::Witness { command } => crate::witness_cmd::run(command),
        Command::Sort { command } => crate::sort_cmd::run(command),
        Command::Diag { command } => crate::diag_cmd::run(command),
    }
}

/// Defaults, overridden by the WGL_CONFIG file if set, overridden by flags.
pub fn build_config(opts: &SolverOpts) -> Result<Config> {
    let mut config = match std::env::var_os("WGL_CONFIG") {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading WGL_CONFIG file {path:?}"))?;
            serde_json::from_str(&text).context("parsing WGL_CONFIG file")?
        }
        None => Config::default(),
    };
    if let Some(adj) = &opts.adjacency {
        config.adjacency = match adj.as_str() {
            "any" => AdjacencyMode::Any,
            "successor" => AdjacencyMode::Successor,
            other => bail!("unknown adjacency mode {other:?} (use any|successor)"),
        };
    }
    if opts.reintro_on_remove {
        config.reintro_on_remove = true;
    }
    if opts.no_symmetry {
        config.symmetry = false;
    }
    if let Some(n) = opts.node_cap {
        config.node_cap = n;
    }
    if let Some(t) = opts.time_cap_millis {
        config.time_cap_millis = t;
    }
    if let Some(t) = opts.threads {
        config.threads = t;
    }
    if let Some(f) = &opts.format {
        config.output = match f.as_str() {
            "json" => OutputFormat::Json,
            "csv" => OutputFormat::Csv,
            "dot" => OutputFormat::Dot,
            "text" => OutputFormat::Text,
            other => bail!("unknown output format {other:?}"),
        };
    }
    config.validate().map_err(|e| anyhow!(e))?;
    Ok(config)
}

pub fn parse_factors(text: &str) -> Result<Vec<u8>> {
    let mut factors: Vec<u8> = text
        .split(',')
        .map(|s| s.trim().parse::<u8>().with_context(|| format!("bad factor {s:?}")))
        .collect::<Result<_>>()?;
    if factors.is_empty() {
        bail!("factor list must be nonempty");
    }
    // Canonical order; the winner is invariant under factor permutation.
    factors.sort_unstable();
    Ok(factors)
}

fn parse_k_range(text: &str) -> Result<Vec<u8>> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u8 = lo.trim().parse().context("bad range start")?;
        let hi: u8 = hi.trim().parse().context("bad range end")?;
        if lo == 0 || hi < lo {
            bail!("bad k range {text:?}");
        }
        Ok((lo..=hi).collect())
    } else {
        Ok(vec![text.trim().parse().context("bad k")?])
    }
}

fn cmd_solve(k: u8, factors: &str, opts: &SolverOpts) -> Result<i32> {
    let config = build_config(opts)?;
    let factors = parse_factors(factors)?;
    let params = GameParams::new(k, &factors).map_err(|e| anyhow!(e))?;
    match solver::solve_full(&params, &config) {
        Ok(solved) => {
            match config.output {
                OutputFormat::Dot => print!("{}", solver::arena_to_dot(&solved.arena)),
                OutputFormat::Text => {
                    println!(
                        "winner {} nodes {} edges {} millis {}",
                        solved.result.winner,
                        solved.result.stats.nodes,
                        solved.result.stats.edges,
                        solved.result.stats.millis
                    );
                }
                _ => {
                    let json = solved.result.to_json(&params, Some(&solved.arena));
                    println!("{}", serde_json::to_string_pretty(&json)?);
                }
            }
            Ok(EXIT_OK)
        }
        Err(solver::SolveError::Resource { what, stats }) => {
            eprintln!("resource error: {what}");
            println!("{}", serde_json::to_string_pretty(&serde_json::json!({ "error": what, "partial_stats": stats }))?);
            Ok(EXIT_RESOURCE)
        }
        Err(e) => Err(anyhow!(e)),
    }
}

fn cmd_sweep(k: &str, factors: &str, opts: &SolverOpts) -> Result<i32> {
    let config = build_config(opts)?;
    let ks = parse_k_range(k)?;
    let families: Vec<Vec<u8>> = factors
        .split(';')
        .map(parse_factors)
        .collect::<Result<_>>()?;
    let report = solver::sweep(&ks, &families, &config);
    match config.output {
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        _ => {
            print!("{}", solver::sweep_csv(&report));
            if !report.monotonicity_flags.is_empty() {
                for f in &report.monotonicity_flags {
                    eprintln!("flag: {f}");
                }
            }
            eprint!("{}", report.bound_report);
        }
    }
    Ok(EXIT_OK)
}
