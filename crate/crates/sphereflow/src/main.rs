//! Thin command-line front end; all logic lives in the library.
//!
//! Subcommands: `run` (execute a scenario and its checks), `convergence`
//! (identity-residual orders across grid refinements), `oracle` (closed-form
//! shrinking-sphere table to stdout).

use sphereflow::scenario::{
    convergence_scenario, exit_code, load_scenario, oracle_csv, run_scenario, CheckStatus,
    RunOptions,
};
use std::path::PathBuf;
use std::process::ExitCode;

const USAGE: &str = "\
sphereflow - mean curvature flow on the unit sphere, with verification suites

USAGE:
  sphereflow run <SCENARIO.json> [--output-dir DIR] [--seed N] [--quiet]
  sphereflow convergence <SCENARIO.json> [--levels L] [--output-dir DIR] [--quiet]
  sphereflow oracle <n> <kappa0> <t1> [t2 ...]

SUBCOMMANDS:
  run          Integrate the scenario's flow and run its checks; writes
               trajectory.csv and report.json to the output directory.
  convergence  Run the evolution-identity suite across L grid refinements
               (default 3) and write the per-identity order table CSV.
  oracle       Print closed-form values of the shrinking geodesic sphere:
               t, r, H, A_sq, harnack_min (the ancient form H^3/n),
               H_bound = H(0)e^{nt}.

OPTIONS:
  --output-dir DIR   Output directory (default: scenario's output_dir,
                     else runs/<name>)
  --seed N           Seed for the sampled Harnack directions (default 0)
  --levels L         Refinement levels for convergence (default 3, min 3)
  --quiet            Suppress per-check lines

EXIT CODES:
  0  all requested checks pass
  1  usage or execution error
  2  a check failed
  3  inconclusive checks only (no failures)
";

struct CommonArgs {
    output_dir: Option<PathBuf>,
    seed: u64,
    levels: usize,
    quiet: bool,
    positional: Vec<String>,
}

fn parse_args(args: &[String]) -> Result<CommonArgs, String> {
    let mut out = CommonArgs {
        output_dir: None,
        seed: 0,
        levels: 3,
        quiet: false,
        positional: Vec::new(),
    };
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--output-dir" => {
                let v = it.next().ok_or("--output-dir needs a value")?;
                out.output_dir = Some(PathBuf::from(v));
            }
            "--seed" => {
                let v = it.next().ok_or("--seed needs a value")?;
                out.seed = v.parse().map_err(|e| format!("bad --seed: {e}"))?;
            }
            "--levels" => {
                let v = it.next().ok_or("--levels needs a value")?;
                out.levels = v.parse().map_err(|e| format!("bad --levels: {e}"))?;
            }
            "--quiet" => out.quiet = true,
            "--help" | "-h" => return Err(String::new()),
            other => out.positional.push(other.to_string()),
        }
    }
    Ok(out)
}

fn cmd_run(args: CommonArgs) -> Result<u8, String> {
    let [path] = args.positional.as_slice() else {
        return Err("run needs exactly one scenario path".into());
    };
    let scenario = load_scenario(std::path::Path::new(path)).map_err(|e| e.to_string())?;
    let opts = RunOptions {
        output_dir: args.output_dir,
        seed: args.seed,
        quiet: args.quiet,
    };
    let outcome = run_scenario(&scenario, &opts).map_err(|e| e.to_string())?;
    if !args.quiet {
        println!(
            "scenario {}: terminated {:?}",
            outcome.report.scenario, outcome.report.termination
        );
        if let Some(err) = outcome.report.oracle_radius_rel_error {
            println!("radius vs oracle: relative error {err:.3e}");
        }
        for check in &outcome.report.checks {
            let status = match check.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Inconclusive => "inconclusive",
            };
            let worst = check
                .worst_value
                .map(|v| format!(" (worst {v:.3e})"))
                .unwrap_or_default();
            println!("check {}: {status}{worst}", check.name);
        }
        println!("outputs in {}", outcome.output_dir.display());
    }
    Ok(exit_code(&outcome.report) as u8)
}

fn cmd_convergence(args: CommonArgs) -> Result<u8, String> {
    let [path] = args.positional.as_slice() else {
        return Err("convergence needs exactly one scenario path".into());
    };
    if args.levels < 3 {
        return Err(format!("--levels must be >= 3, got {}", args.levels));
    }
    let scenario = load_scenario(std::path::Path::new(path)).map_err(|e| e.to_string())?;
    let opts = RunOptions {
        output_dir: args.output_dir.clone(),
        seed: args.seed,
        quiet: args.quiet,
    };
    let outcome = convergence_scenario(&scenario, args.levels, &opts).map_err(|e| e.to_string())?;
    let dir = args
        .output_dir
        .or_else(|| scenario.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("runs").join(&scenario.name));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let path = dir.join("convergence.csv");
    std::fs::write(&path, &outcome.csv).map_err(|e| e.to_string())?;
    if !args.quiet {
        print!("{}", outcome.csv);
        println!("table written to {}", path.display());
    }
    Ok(if outcome.all_pass { 0 } else { 2 })
}

fn cmd_oracle(args: CommonArgs) -> Result<u8, String> {
    if args.positional.len() < 3 {
        return Err("oracle needs <n> <kappa0> <t...>".into());
    }
    let n: usize = args.positional[0]
        .parse()
        .map_err(|e| format!("bad n: {e}"))?;
    let kappa0: f64 = args.positional[1]
        .parse()
        .map_err(|e| format!("bad kappa0: {e}"))?;
    let mut times = Vec::new();
    for tok in &args.positional[2..] {
        for part in tok.split(',').filter(|s| !s.is_empty()) {
            times.push(
                part.parse::<f64>()
                    .map_err(|e| format!("bad time {part}: {e}"))?,
            );
        }
    }
    let csv = oracle_csv(n, kappa0, &times).map_err(|e| e.to_string())?;
    print!("{csv}");
    Ok(0)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let Some((cmd, rest)) = argv.split_first() else {
        eprint!("{USAGE}");
        return ExitCode::from(1);
    };
    let parsed = match parse_args(rest) {
        Ok(p) => p,
        Err(msg) => {
            if msg.is_empty() {
                print!("{USAGE}");
                return ExitCode::from(0);
            }
            eprintln!("error: {msg}");
            eprint!("{USAGE}");
            return ExitCode::from(1);
        }
    };
    let result = match cmd.as_str() {
        "run" => cmd_run(parsed),
        "convergence" => cmd_convergence(parsed),
        "oracle" => cmd_oracle(parsed),
        "--help" | "-h" | "help" => {
            print!("{USAGE}");
            return ExitCode::from(0);
        }
        other => Err(format!("unknown subcommand {other}")),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
