//! Command-line front end. Exit codes: 0 success, 1 validation error,
//! 2 I/O error. Errors go to stderr as `error: kind=<kind> message=<text>`.

use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;
use crate::csvio::{grid_from_x, Table};
use crate::error::{Error, Result};
use crate::experiments::{reproduce_figures, run_mu_sweep, summarize};
use crate::inversion::{
    error_bound, estimate_source_regularized, estimate_source_unregularized, select_mu,
    solve_forward,
};
use crate::noise::{add_noise, NoiseMode, NoiseSpec};
use crate::oracle::{invert_via_quadrature, QuadratureSpec};
use crate::sources::{exact_data, sample_source, SourceSpec};
use crate::spectral::{Grid, RealSignal};

#[derive(Debug, Parser)]
#[command(
    name = "poisson-source",
    version,
    about = "Identify a 1-D source in the half-plane Poisson problem from line data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute exact line data g for a source f; writes x,f,g.
    Forward(DataArgs),
    /// Compute exact data and add seeded noise; writes x,g,g_delta.
    Simulate {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        noise: NoiseArgs,
    },
    /// Estimate the source from line data; writes x,f_estimate.
    Invert(InvertArgs),
    /// Print the rule's mu and the error bound for given delta, p and E.
    SelectMu {
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        p: f64,
        #[arg(long = "E", default_value_t = 1.0)]
        e: f64,
    },
    /// Run a mu sweep; writes mu,delta,mean_rel_error,stderr_rel_error.
    Sweep(SweepArgs),
    /// Write every figure table and its gnuplot script.
    Figures {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Output directory (created if absent).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Print the default run configuration.
    DumpConfig,
    /// Invert through the quadrature oracle (debugging aid).
    #[command(hide = true)]
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Built-in source (ignored with --input).
    #[arg(long, default_value = "cosine", value_parser = ["cosine", "hat"])]
    source: String,
    #[arg(long, default_value_t = PI)]
    hat_center: f64,
    #[arg(long, default_value_t = 1.0)]
    hat_half_width: f64,
    #[arg(long, default_value_t = 1.0)]
    hat_height: f64,
    /// CSV with columns x,f on a uniform grid.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Subtract the mean of an input source before solving.
    #[arg(long)]
    demean: bool,
    #[arg(long, default_value_t = 256)]
    n: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    x_min: f64,
    #[arg(long, default_value_t = 2.0 * PI, allow_negative_numbers = true)]
    x_max: f64,
    /// Output CSV (stdout if omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct NoiseArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    delta: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = "iid")]
    noise_mode: NoiseMode,
}

#[derive(Debug, Args)]
struct InvertArgs {
    /// CSV with x and g_delta (or g) columns.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "rule")]
    mu: Option<f64>,
    /// Choose mu by the a-priori rule with smoothness order p.
    #[arg(long, value_name = "P", requires = "delta")]
    rule: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    #[arg(long = "E", default_value_t = 1.0)]
    e: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// TOML run configuration (defaults apply to missing keys).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

impl SweepArgs {
    fn run_config(&self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(r) = self.replicates {
            config.replicates = r;
        }
        if let Some(s) = self.seed {
            config.base_seed = s;
        }
        if let Some(w) = self.workers {
            config.workers = w;
        }
        if let Some(o) = &self.output {
            config.output = o.clone();
        }
        Ok(config)
    }
}

fn emit(table: &Table, output: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match output {
        Some(path) => table.write(path),
        None => stdout
            .write_all(table.to_csv_string().as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn required<'a>(table: &'a Table, name: &str) -> Result<&'a [f64]> {
    table
        .column(name)
        .ok_or_else(|| Error::validation(format!("CSV is missing the '{name}' column")))
}

/// Source samples and exact data for `forward`/`simulate`.
fn source_and_data(args: &DataArgs) -> Result<(RealSignal, RealSignal)> {
    if let Some(path) = &args.input {
        let table = Table::read(path)?;
        let grid = grid_from_x(required(&table, "x")?)?;
        let f = RealSignal::new(grid, required(&table, "f")?.to_vec())?;
        let g = solve_forward(&f, args.demean)?;
        return Ok((f, g));
    }
    let grid = Grid::new(args.n, args.x_min, args.x_max)?;
    let spec = match args.source.as_str() {
        "hat" => SourceSpec::Hat {
            center: args.hat_center,
            half_width: args.hat_half_width,
            height: args.hat_height,
        },
        _ => SourceSpec::Cosine,
    };
    Ok((sample_source(&spec, &grid)?, exact_data(&spec, &grid)?))
}

fn read_data(path: &Path) -> Result<RealSignal> {
    let table = Table::read(path)?;
    let grid = grid_from_x(required(&table, "x")?)?;
    let g = table
        .column("g_delta")
        .or_else(|| table.column("g"))
        .ok_or_else(|| Error::validation("CSV needs a 'g_delta' or 'g' column"))?;
    RealSignal::new(grid, g.to_vec())
}

fn x_table(signal: &RealSignal) -> Table {
    let mut t = Table::new();
    t.push("x", signal.grid().points().collect());
    t
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let log = |stderr: &mut dyn Write, line: String| {
        writeln!(stderr, "{line}").map_err(|e| Error::io("<stderr>", e))
    };
    match cli.command {
        Command::Forward(args) => {
            let (f, g) = source_and_data(&args)?;
            let mut t = x_table(&f);
            t.push("f", f.into_values());
            t.push("g", g.into_values());
            emit(&t, args.output.as_deref(), stdout)
        }
        Command::Simulate { data, noise } => {
            let (_, g) = source_and_data(&data)?;
            let spec = NoiseSpec::new(noise.delta, noise.seed, noise.noise_mode)?;
            let noisy = add_noise(&g, &spec);
            let mut t = x_table(&g);
            t.push("g", g.into_values());
            t.push("g_delta", noisy.into_values());
            emit(&t, data.output.as_deref(), stdout)
        }
        Command::Invert(args) => {
            let g = read_data(&args.input)?;
            let estimate = match (args.rule, args.mu) {
                (Some(p), _) => {
                    let delta = args.delta.unwrap_or_default();
                    let choice = select_mu(delta, args.e, p)?;
                    let bound = error_bound(delta, p, choice.mu)?;
                    log(
                        stderr,
                        format!(
                            "provenance: rule_p={p} delta={delta} E={} mu={} error_bound={bound} delta_exceeds_E={}",
                            args.e, choice.mu, choice.delta_exceeds_bound
                        ),
                    )?;
                    estimate_source_regularized(&g, choice.mu)?
                }
                (None, Some(mu)) => estimate_source_regularized(&g, mu)?,
                (None, None) => estimate_source_unregularized(&g)?,
            };
            let mut t = x_table(&estimate);
            t.push("f_estimate", estimate.into_values());
            emit(&t, args.output.as_deref(), stdout)
        }
        Command::SelectMu { delta, p, e } => {
            let choice = select_mu(delta, e, p)?;
            let bound = error_bound(delta, p, choice.mu)?;
            writeln!(
                stdout,
                "mu={} error_bound={bound} delta_exceeds_E={}",
                choice.mu, choice.delta_exceeds_bound
            )
            .map_err(|e| Error::io("<stdout>", e))
        }
        Command::Sweep(args) => {
            let run = args.run_config()?;
            let curve = summarize(&run_mu_sweep(&run.sweep_config()?)?);
            let mut t = Table::new();
            t.push("mu", curve.iter().map(|c| c.mu).collect());
            t.push("delta", curve.iter().map(|c| c.delta).collect());
            t.push(
                "mean_rel_error",
                curve.iter().map(|c| c.mean_rel_error).collect(),
            );
            t.push(
                "stderr_rel_error",
                curve.iter().map(|c| c.stderr_rel_error).collect(),
            );
            emit(
                &t,
                args.output.as_deref().or(Some(run.output.as_path())),
                stdout,
            )
        }
        Command::Figures { sweep, out_dir } => {
            let run = sweep.run_config()?;
            let dir = out_dir.unwrap_or_else(|| run.figures_dir.clone());
            let files = reproduce_figures(&dir, &run.sweep_config()?)?;
            for f in files {
                log(stderr, format!("wrote {}", f.display()))?;
            }
            Ok(())
        }
        Command::DumpConfig => stdout
            .write_all(RunConfig::default().to_toml().as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
        Command::Oracle { input, mu, output } => {
            let g = read_data(&input)?;
            let spec = QuadratureSpec::for_grid(g.grid());
            let estimate = invert_via_quadrature(&g, mu, &spec)?;
            let mut t = x_table(&estimate);
            t.push("f_estimate", estimate.into_values());
            emit(&t, output.as_deref(), stdout)
        }
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let msg = e.to_string();
                    let first = msg
                        .lines()
                        .next()
                        .unwrap_or_default()
                        .trim_start_matches("error: ");
                    let _ = writeln!(stderr, "error: kind=validation message={first}");
                    1
                }
            };
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let (kind, code) = match e {
                Error::Validation(_) => ("validation", 1),
                Error::Io { .. } => ("io", 2),
            };
            let _ = writeln!(stderr, "error: kind={kind} message={e}");
            code
        }
    }
}
