use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hairhom::cell_psi::{fd::fd_cell_mean_default, CellPsi, DEFAULT_EWALD_SPLIT};
use hairhom::harness::config::{parse_float_list, SweepConfig, SweepParam};
use hairhom::harness::report::convergence_text;
use hairhom::harness::{
    compare, convergence_study, emit_outputs, load_config, run_scenario, run_sweep,
};
use hairhom::Error;

#[derive(Parser)]
#[command(
    name = "hairhom",
    version,
    about = "Homogenized and resolved models of nutrient uptake by root hairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured model and write profile.csv, summary.kv (and convergence.csv).
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Repeat a run over values of one parameter, concurrently.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        param: String,
        /// Comma-separated values, e.g. 1e-1,1e-2,1e-3.
        #[arg(long)]
        values: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the cell mean of psi, its matching residuals and the Ewald parameters.
    CellPsi {
        #[arg(long, default_value_t = 64)]
        modes: usize,
        #[arg(long, default_value_t = DEFAULT_EWALD_SPLIT)]
        split: f64,
        /// Also run the finite-difference cross-check.
        #[arg(long)]
        fd: bool,
    },
    /// Refine the configured study against its closed-form oracle.
    Converge {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        levels: usize,
        /// Also write convergence.csv here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-derive norms from a written profile.csv and check them against summary.kv.
    Compare {
        #[arg(long)]
        out: PathBuf,
    },
}

fn cell_psi(modes: usize, split: f64, fd: bool) -> hairhom::Result<()> {
    let psi = CellPsi::new(modes, split)?;
    let (images, waves) = psi.term_counts();
    println!("modes={}", psi.modes());
    println!("ewald_split={}", psi.ewald_split());
    println!("split_time={}", psi.split_time());
    println!("images={images}");
    println!("waves={waves}");
    println!("error_estimate={:e}", psi.error_estimate());
    println!("psi_mean={}", psi.mean());
    for r in [1e-2, 1e-3, 1e-4] {
        let res = psi.matching_residual(r);
        let half = psi.matching_residual(r / 2.0);
        println!("residual.r{r}={res:e}");
        println!("residual_ratio.r{r}={}", res / half);
    }
    if fd {
        let est = fd_cell_mean_default();
        for (n, v) in est.sizes.iter().zip(&est.raw) {
            println!("fd_mean.n{n}={v}");
        }
        println!("fd_mean={}", est.extrapolated);
        println!("fd_gap={:e}", (est.extrapolated - psi.mean()).abs());
    }
    Ok(())
}

fn execute(cmd: Command) -> hairhom::Result<()> {
    match cmd {
        Command::Run { config, out } => {
            let cfg = load_config(&config)?;
            let report = run_scenario(&cfg)?;
            emit_outputs(&report, &out)
        }
        Command::Sweep {
            config,
            param,
            values,
            out,
        } => {
            let cfg = load_config(&config)?;
            let param = SweepParam::parse(&param).ok_or_else(|| {
                Error::Validation(vec![format!(
                    "unknown sweep parameter `{param}` (a_eps, lambda, epsilon, kappa, beta, D_u)"
                )])
            })?;
            let values = parse_float_list(&values).map_err(|m| Error::Validation(vec![m]))?;
            run_sweep(&cfg, &SweepConfig { param, values }, Some(&out))?;
            Ok(())
        }
        Command::CellPsi { modes, split, fd } => cell_psi(modes, split, fd),
        Command::Converge {
            config,
            levels,
            out,
        } => {
            let cfg = load_config(&config)?;
            let table = convergence_study(&cfg, levels)?;
            let text = convergence_text(&table);
            print!("{text}");
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|e| Error::Io {
                    path: dir.clone(),
                    source: e,
                })?;
                let path = dir.join("convergence.csv");
                std::fs::write(&path, text).map_err(|e| Error::Io { path, source: e })?;
            }
            Ok(())
        }
        Command::Compare { out } => {
            let outcome = compare(&out)?;
            for block in &outcome.blocks {
                if let Some(tag) = &block.tag {
                    println!("[{tag}]");
                }
                for (k, v) in &block.norms {
                    println!("{k}={v}");
                }
                for (k, v) in &block.flags {
                    println!("{k}={v}");
                }
            }
            for m in &outcome.mismatches {
                eprintln!("mismatch: {m}");
            }
            println!("consistent={}", outcome.consistent());
            if outcome.consistent() {
                Ok(())
            } else {
                Err(Error::Validation(outcome.mismatches))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                Error::Validation(list) => {
                    eprintln!("error: validation failed");
                    for item in list {
                        eprintln!("  - {item}");
                    }
                }
                _ => eprintln!("error: {e}"),
            }
            ExitCode::from(if e.is_user_error() { 1 } else { 2 })
        }
    }
}
