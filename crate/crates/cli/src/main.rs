//! `maxtsp` command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use maxtsp::harness::bench::{run_bench, BenchConfig};
use maxtsp::harness::certificate::{build_certificate, verify_certificate, Certificate};
use maxtsp::harness::generate::{generate_instance, Family};
use maxtsp::harness::io::{read_instance_file, write_instance};
use maxtsp::harness::oracle::oracle_max_tour;
use maxtsp::tour::{solve, SolveOptions};
use maxtsp::Error;

#[derive(Parser)]
#[command(name = "maxtsp", version, about = "4/5-approximation for maximum TSP with exact checking")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance file.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve an instance and optionally write its certificate.
    Solve {
        file: PathBuf,
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// For odd n, shrink only the heaviest edge. The 4/5 bound is not guaranteed.
        #[arg(long)]
        fast_odd: bool,
        /// Print the stage ledger and coloring trace to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Re-check a certificate against its instance.
    Verify { file: PathBuf, certificate: PathBuf },
    /// Run generated instances and report ratios.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = Family::ALL)]
        families: Vec<Family>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![6, 8, 10])]
        sizes: Vec<usize>,
        /// Inclusive range `A..B`.
        #[arg(long, default_value = "0..9", value_parser = parse_range)]
        seeds: (u64, u64),
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        #[arg(long)]
        fast_odd: bool,
        /// Also write the full report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Exact optimum by dynamic programming (n ≤ 18).
    Oracle { file: PathBuf },
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok((a, b))
}

enum Failure {
    Usage(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Instance(_) | Error::TooLarge(_) | Error::Precondition(_) => Failure::Usage(e.to_string()),
            _ => Failure::Violation(e.to_string()),
        }
    }
}

fn write_out(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("serializable") + "\n"
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    let mut say = |s: String| {
        let _ = writeln!(out, "{s}");
    };
    match cli.cmd {
        Cmd::Gen { family, n, seed, output } => {
            let inst = generate_instance(family, n, seed)?;
            let text = write_instance(&inst.graph);
            match output {
                Some(p) => write_out(&p, &text)?,
                None => say(text.trim_end().to_string()),
            }
        }
        Cmd::Solve { file, certificate, fast_odd, trace } => {
            let g = read_instance_file(&file)?.graph;
            let sol = solve(&g, SolveOptions { fast_odd })?;
            say(format!("weight {}", sol.tour.weight));
            say(format!("tour {}", sol.tour.order.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")));
            if trace {
                if let Some(run) = &sol.run {
                    eprintln!("{}", to_json(&run.ledger).trim_end());
                    for line in run.trace.g1.iter().chain(&run.trace.g2) {
                        eprintln!("{line}");
                    }
                    eprintln!("exchange search {:?}", run.trace.exchange);
                }
            }
            if let Some(p) = certificate {
                let cert = build_certificate(&g, &sol, fast_odd);
                write_out(&p, &to_json(&cert))?;
                if let Some(r) = &cert.ratio {
                    say(format!("ratio {} ({:.6})", r.exact, r.decimal));
                }
                let failed: Vec<&str> = cert.checklist.iter().filter(|c| !c.ok).map(|c| c.name.as_str()).collect();
                if !failed.is_empty() {
                    return Err(Failure::Violation(format!("certificate checks failed: {}", failed.join(", "))));
                }
            }
        }
        Cmd::Verify { file, certificate } => {
            let g = read_instance_file(&file)?.graph;
            let text = std::fs::read_to_string(&certificate)
                .map_err(|e| Failure::Usage(format!("{}: {e}", certificate.display())))?;
            let cert: Certificate =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", certificate.display())))?;
            let rep = verify_certificate(&g, &cert);
            for c in &rep.checks {
                say(format!("{} {}", if c.ok { "pass" } else { "FAIL" }, c.name));
                for d in &c.detail {
                    say(format!("    {d}"));
                }
            }
            if !rep.all_ok() {
                return Err(Failure::Violation(format!("{} checks failed", rep.failed().len())));
            }
        }
        Cmd::Bench { families, sizes, seeds, parallel, fast_odd, json } => {
            let rep = run_bench(&BenchConfig { families, sizes, seeds, parallel, fast_odd })?;
            say(rep.table().trim_end().to_string());
            if let Some(p) = json {
                write_out(&p, &to_json(&rep))?;
            }
            if !rep.all_ok() {
                return Err(Failure::Violation("some instances broke the bound or failed checks".into()));
            }
        }
        Cmd::Oracle { file } => {
            let g = read_instance_file(&file)?.graph;
            let (w, tour) = oracle_max_tour(&g)?;
            say(format!("opt {w}"));
            say(format!("tour {}", tour.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Violation(m)) => {
            eprintln!("invariant violation: {m}");
            ExitCode::from(1)
        }
    }
}
