use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use frag_cli::analysis::HistogramValues;
use frag_cli::commands::{
    cmd_analyze_histogram, cmd_analyze_powerlaw, cmd_reproduce_table1, cmd_run, cmd_theory, HistogramOptions,
};
use frag_cli::ensemble::Ensemble;
use frag_cli::CliError;
use frag_core::stats::DEFAULT_BIN_WIDTH;
use frag_core::theory::curves::Axis;

/// Fragmentation ensembles, tail statistics and theory curves.
#[derive(Parser)]
#[command(name = "fragsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate an ensemble and write interfaces.csv, fragments.csv and manifest.json.
    Run {
        /// TOML config, or a manifest.json from an earlier run.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; outputs do not depend on it.
        #[arg(long)]
        parallelism: Option<usize>,
    },
    /// Histogram or power-law statistics of a run directory.
    Analyze {
        run_dir: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Output directory (defaults to the run directory).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BIN_WIDTH)]
        bin_width: f64,
        /// Move the peak bin onto the reference peak location.
        #[arg(long)]
        shift: bool,
        #[arg(long, value_enum, default_value = "counts")]
        values: HistogramValues,
        #[arg(long)]
        parallelism: Option<usize>,
    },
    /// Tabulate a theory function into curve.csv.
    Theory {
        #[arg(long)]
        function: String,
        /// Parameter as name=value, repeatable.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        /// Grid axis as name=start:stop:step, repeatable.
        #[arg(long = "grid", value_parser = parse_grid)]
        grids: Vec<(String, Axis)>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit tail exponents across direction biases and write table.csv.
    #[command(name = "reproduce-table1")]
    ReproduceTable1 {
        #[arg(long)]
        out: PathBuf,
        /// Fraction of the full 50 x 300000 experiment, in (0, 1].
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long)]
        parallelism: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Histogram,
    Powerlaw,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("{v:?}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn parse_grid(s: &str) -> Result<(String, Axis), String> {
    let (k, range) = s.split_once('=').ok_or_else(|| format!("expected name=start:stop:step, got {s:?}"))?;
    let parts: Vec<f64> = range
        .split(':')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(format!("expected start:stop:step, got {range:?}"));
    };
    let axis = Axis::new(start, stop, step).map_err(|e| e.to_string())?;
    Ok((k.trim().to_string(), axis))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    let workers = |p: Option<usize>| p.unwrap_or_else(Ensemble::default_parallelism);
    match command {
        Command::Run { config, out, parallelism } => {
            let m = cmd_run(&config, &out, workers(parallelism))?;
            println!("{} realizations written to {}", m.realization_count, out.display());
        }
        Command::Analyze {
            run_dir,
            mode,
            out,
            bin_width,
            shift,
            values,
            parallelism,
        } => {
            let out = out.unwrap_or_else(|| run_dir.clone());
            match mode {
                Mode::Histogram => {
                    let opts = HistogramOptions { bin_width, shift, values };
                    let meta = cmd_analyze_histogram(&run_dir, &out, opts)?;
                    println!("peak {} at ({}, {})", meta.peak_value, meta.peak_x, meta.peak_y);
                }
                Mode::Powerlaw => {
                    let r = cmd_analyze_powerlaw(&run_dir, &out, workers(parallelism))?;
                    let s = &r.summary;
                    print!("mean density exponent {:.4} (sd {:.4}, {} realizations)", s.mean_exponent, s.std_exponent, s.realizations);
                    match s.predicted {
                        Some(p) => println!(", predicted {p:.4}"),
                        None => println!(),
                    }
                }
            }
        }
        Command::Theory { function, params, grids, out } => {
            let path = cmd_theory(&function, &params, &grids, &out)?;
            println!("{}", path.display());
        }
        Command::ReproduceTable1 { out, scale, parallelism } => {
            let rows = cmd_reproduce_table1(&out, scale, workers(parallelism))?;
            println!("{:<10} {:>10} {:>10} {:>8}", "case", "predicted", "computed", "sd");
            for r in rows {
                println!("{:<10} {:>10.4} {:>10.4} {:>8.4}", r.case, r.predicted, r.computed_mean, r.computed_std);
            }
        }
    }
    Ok(())
}
