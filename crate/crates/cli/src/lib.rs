//! Command-line front end for `gravcorr-core`.

// `!(x > y)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod plot;

use std::ffi::OsString;
use std::io::{IsTerminal, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use commands::{
    cmd_asymptote, cmd_evolve, cmd_steady, cmd_sweep, num, physical_coupling, SweepAxis,
};
use config::{
    BranchName, D11Name, D12Name, InitialState, ModelName, RunConfig, SpacingName, Units,
};
use gravcorr_core::models::{PhysicalParams, NEWTON_G};
use plot::{render_svg, PlotSpec, Table};

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Capability(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) | CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Capability(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Numerical(m)
            | CliError::Capability(m)
            | CliError::Io(m) => m,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "gravcorr",
    version,
    about = "Correlation dynamics of gravitationally coupled oscillators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve the covariance matrix and tabulate correlations per sample.
    Evolve(ConfigArgs),
    /// Stationary state of the dissipative model.
    Steady(ConfigArgs),
    /// Peak and asymptotic correlations across a parameter axis.
    Sweep {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, value_enum)]
        axis: SweepAxis,
        /// Comma-separated, strictly increasing.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_negative_numbers = true
        )]
        values: Vec<f64>,
    },
    /// Long-time discord formula against numeric evolution.
    Asymptote {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long)]
        tau_min: f64,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Render CSV columns as an SVG line chart.
    Plot {
        #[arg(long)]
        csv_path: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        columns: Vec<String>,
        #[arg(long)]
        log_x: bool,
        #[arg(long)]
        log_y: bool,
        /// Defaults to stdout.
        #[arg(long)]
        out_path: Option<PathBuf>,
        #[arg(long)]
        title: Option<String>,
    },
    /// Derive the coupling from physical parameters, then evolve.
    Physical {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, default_value_t = NEWTON_G)]
        g: f64,
        #[arg(long)]
        m1: f64,
        #[arg(long)]
        m2: f64,
        #[arg(long)]
        d: f64,
    },
}

/// Flags mirroring `RunConfig`; any flag given overrides the file value.
#[derive(Args, Debug, Default)]
struct ConfigArgs {
    /// JSON file with RunConfig fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    model: Option<ModelName>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha_tilde: Option<f64>,
    #[arg(long)]
    lambda_ratio: Option<f64>,
    /// coherent, squeezed(s) or squeezed:s, thermal(nbar) or thermal:nbar.
    #[arg(long)]
    initial_state: Option<InitialState>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    n_samples: Option<usize>,
    #[arg(long, value_enum)]
    spacing: Option<SpacingName>,
    #[arg(long)]
    measured_subsystem: Option<u8>,
    #[arg(long, value_enum)]
    delta_branch: Option<BranchName>,
    #[arg(long, value_enum)]
    dktm_d11: Option<D11Name>,
    #[arg(long, value_enum)]
    dktm_d12: Option<D12Name>,
    #[arg(long, value_enum)]
    units: Option<Units>,
    #[arg(long)]
    refine_peak: bool,
    #[arg(long)]
    output_path: Option<String>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        macro_rules! over {
            ($($f:ident),*) => { $( if let Some(v) = self.$f.clone() { c.$f = v; } )* };
        }
        over!(
            model,
            eta,
            omega,
            alpha_tilde,
            lambda_ratio,
            initial_state,
            tau_max,
            n_samples,
            spacing,
            measured_subsystem,
            delta_branch,
            dktm_d11,
            dktm_d12,
            units
        );
        if self.refine_peak {
            c.refine_peak = true;
        }
        if let Some(p) = &self.output_path {
            c.output_path = Some(p.clone());
        }
        Ok(c)
    }
}

fn emit(path: Option<&std::path::Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(content.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(CliError::Io(e.to_string()))
                }
                _ => Ok(()),
            }
        }
    }
}

fn emit_config(cfg: &RunConfig, content: &str) -> Result<(), CliError> {
    emit(
        cfg.output_path.as_deref().map(std::path::Path::new),
        content,
    )
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Evolve(a) => {
            let cfg = a.resolve()?;
            emit_config(&cfg, &cmd_evolve(&cfg)?)
        }
        Command::Steady(a) => {
            let cfg = a.resolve()?;
            emit_config(&cfg, &cmd_steady(&cfg)?)
        }
        Command::Sweep { cfg, axis, values } => {
            let cfg = cfg.resolve()?;
            emit_config(&cfg, &cmd_sweep(&cfg, axis, &values)?)
        }
        Command::Asymptote { cfg, tau_min, n } => {
            let cfg = cfg.resolve()?;
            emit_config(&cfg, &cmd_asymptote(&cfg, tau_min, cfg.tau_max, n)?)
        }
        Command::Plot {
            csv_path,
            columns,
            log_x,
            log_y,
            out_path,
            title,
        } => {
            let text = std::fs::read_to_string(&csv_path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", csv_path.display())))?;
            let table = Table::from_csv(&text)?;
            let spec = PlotSpec {
                columns,
                log_x,
                log_y,
                title: title.unwrap_or_else(|| {
                    csv_path
                        .file_name()
                        .map(|f| f.to_string_lossy().into_owned())
                        .unwrap_or_default()
                }),
            };
            emit(out_path.as_deref(), &render_svg(&table, &spec)?)
        }
        Command::Physical { cfg, g, m1, m2, d } => {
            let mut cfg = cfg.resolve()?;
            let coupling = physical_coupling(&PhysicalParams {
                g,
                m1,
                m2,
                d,
                omega: cfg.omega,
            })?;
            eprintln!("K = {} N/m", num(coupling.k));
            eprintln!("eta = {}", num(coupling.eta));
            cfg.eta = coupling.eta;
            emit_config(&cfg, &cmd_evolve(&cfg)?)
        }
    }
}

fn report(err: &CliError) {
    let mut stderr = std::io::stderr().lock();
    let color = stderr.is_terminal() && std::env::var_os("NO_COLOR").is_none();
    let prefix = if color {
        "\x1b[31merror\x1b[0m"
    } else {
        "error"
    };
    let _ = writeln!(stderr, "{prefix}: {}", err.message());
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            report(&e);
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_override_file_values() {
        let dir = std::env::temp_dir().join(format!("gravcorr-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.json");
        std::fs::write(&path, r#"{"eta": 0.02, "n_samples": 7}"#).unwrap();
        let args = ConfigArgs {
            config: Some(path),
            n_samples: Some(9),
            ..Default::default()
        };
        let c = args.resolve().unwrap();
        assert_eq!((c.eta, c.n_samples), (0.02, 9));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Numerical(String::new()).exit_code(), 1);
        assert_eq!(CliError::Usage(String::new()).exit_code(), 2);
        assert_eq!(CliError::Capability(String::new()).exit_code(), 3);
    }
}
