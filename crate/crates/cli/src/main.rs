use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use qpl_cli::bound::{evaluate, BoundRequest};
use qpl_cli::fit::{fit_records, write_collapse, FitRequest};
use qpl_cli::plotdata::emit_plotdata;
use qpl_cli::{read_records_file, run_sweep, threads_from_env, CliError, SweepConfig};
use qpl_core::bounds::BoundForm;

#[derive(Parser)]
#[command(name = "qpl", version, about = "Noisy random-circuit coherent-information sweeps and fits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run (or resume) every cell of a sweep config.
    Sweep {
        config: PathBuf,
        /// Overrides the config's output_path.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Worker count; defaults to QPL_THREADS or the available cores.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Fit the scaling collapse per depth.
    Fit {
        results: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
        /// Also regress p* against 1/d (needs at least 3 depths).
        #[arg(long)]
        regress: bool,
        /// Half-width of the fit window around p*.
        #[arg(long)]
        window: Option<f64>,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Write the collapse table (d, n, p, x, y, model) here.
        #[arg(long)]
        collapse_out: Option<PathBuf>,
    },
    /// Worst-case coherent-information bound and its thresholds.
    Bound(BoundArgs),
    /// Write long-format CSVs for plotting.
    EmitPlotdata {
        results: PathBuf,
        /// Defaults to `plotdata/` next to the results file.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        window: Option<f64>,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").args(["critical_depth", "max_rate"])))]
struct BoundArgs {
    #[arg(long, required_unless_present_any = ["critical_depth", "max_rate"])]
    n: Option<usize>,
    #[arg(long, required_unless_present_any = ["critical_depth", "max_rate"])]
    k: Option<usize>,
    #[arg(long)]
    p: f64,
    #[arg(long, required_unless_present_any = ["critical_depth", "max_rate"])]
    d: Option<usize>,
    /// Use the (1-p)^d form instead of e^{-pd}.
    #[arg(long)]
    sharp: bool,
    /// Depth at which the bound reaches zero for rate --r.
    #[arg(long, requires = "r")]
    critical_depth: bool,
    #[arg(long)]
    r: Option<f64>,
    /// Largest rate compatible with one noisy layer.
    #[arg(long)]
    max_rate: bool,
    #[arg(long)]
    json: bool,
}

fn bound_request(a: &BoundArgs) -> BoundRequest {
    if a.critical_depth {
        BoundRequest::CriticalDepth { p: a.p, r: a.r.unwrap_or_default() }
    } else if a.max_rate {
        BoundRequest::MaxRate { p: a.p }
    } else {
        BoundRequest::Value {
            n: a.n.unwrap_or_default(),
            k: a.k.unwrap_or_default(),
            p: a.p,
            d: a.d.unwrap_or_default(),
            form: if a.sharp { BoundForm::Sharp } else { BoundForm::Exponential },
        }
    }
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep { config, output, threads } => {
            let mut cfg = SweepConfig::load(&config)?;
            if let Some(out) = output {
                cfg.output_path = out;
            }
            let threads = match threads {
                Some(t) => t,
                None => threads_from_env()?,
            };
            let report = run_sweep(&cfg, threads)?;
            eprintln!(
                "{} records written to {} ({} computed, {} from checkpoint)",
                report.records.len(),
                cfg.output_path.display(),
                report.computed,
                report.resumed
            );
        }
        Command::Fit { results, depth, regress, window, output, collapse_out } => {
            let records = read_records_file(&results)?;
            let report = fit_records(&records, &FitRequest { depth, regress, window })?;
            if let Some(path) = collapse_out {
                let f = std::fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
                write_collapse(std::io::BufWriter::new(f), &records, &report)?;
            }
            let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Fit(e.to_string()))?;
            write_or_print(output.as_ref(), &json)?;
        }
        Command::Bound(args) => {
            let answer = evaluate(bound_request(&args))?;
            if args.json {
                println!("{}", serde_json::to_string(&answer).map_err(|e| CliError::Config(e.to_string()))?);
            } else {
                println!("{answer}");
            }
        }
        Command::EmitPlotdata { results, out_dir, window } => {
            let records = read_records_file(&results)?;
            let dir = out_dir.unwrap_or_else(|| results.parent().unwrap_or(std::path::Path::new(".")).join("plotdata"));
            let out = emit_plotdata(&records, &dir, window)?;
            for (d, why) in &out.skipped {
                eprintln!("depth {d} left out of the fit tables: {why}");
            }
            for f in &out.files {
                eprintln!("wrote {}", f.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
