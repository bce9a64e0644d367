//! Experiment drivers. Each returns the file contents it would emit.

use gravcorr_core::analysis::{
    alpha_sweep, asymptotic_ktm_discord, squeezing_sweep, SweepSettings,
};
use gravcorr_core::dynamics::{evolve_series, propagate, steady_state};
use gravcorr_core::gaussian::{correlations, gaussian_discord_with};
use gravcorr_core::models::{
    coherent_cov, derive_coupling, ktm_generators, Coupling, Model, ModelParams, PhysicalParams,
};
use gravcorr_core::Error;

use crate::config::{ModelName, RunConfig};
use crate::CliError;

/// Fixed 17-significant-digit rendering.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

struct Csv {
    out: csv::Writer<Vec<u8>>,
}

impl Csv {
    fn new(header: &[&str]) -> Result<Self, CliError> {
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        out.write_record(header).map_err(io)?;
        Ok(Self { out })
    }

    fn row(&mut self, cells: &[String]) -> Result<(), CliError> {
        self.out.write_record(cells).map_err(io)
    }

    fn finish(self) -> Result<String, CliError> {
        let bytes = self
            .out
            .into_inner()
            .map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }
}

fn io(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Maps library failures onto exit-code classes.
pub fn classify(e: Error) -> CliError {
    match e {
        Error::Input(_) | Error::Domain(_) | Error::Dimension(_) | Error::Symmetry { .. } => {
            CliError::Usage(e.to_string())
        }
        other => CliError::Numerical(other.to_string()),
    }
}

fn setup(cfg: &RunConfig) -> Result<(ModelParams, Model), CliError> {
    cfg.validate()?;
    Ok((cfg.params()?, cfg.model.into()))
}

pub fn cmd_evolve(cfg: &RunConfig) -> Result<String, CliError> {
    let (p, model) = setup(cfg)?;
    let gen = model.generators(&p, cfg.variant()).map_err(classify)?;
    let sigma0 = cfg.initial_state.covariance().map_err(classify)?;
    let traj = evolve_series(&gen, &sigma0, &cfg.grid()).map_err(classify)?;
    let opts = cfg.discord_options();
    let units = cfg.units.factor();
    let mut csv = Csv::new(&[
        "tau",
        "mutual_information",
        "discord",
        "ppt_nu_minus",
        "entangled",
        "trace",
    ])?;
    for s in &traj.samples {
        let rec = correlations(&s.sigma, &opts)
            .map_err(|e| CliError::Numerical(format!("at tau = {}: {e}", s.tau)))?;
        csv.row(&[
            num(s.tau),
            num(rec.mutual_information * units),
            num(rec.discord * units),
            num(rec.ppt_nu_minus),
            rec.entangled.to_string(),
            num(s.sigma.trace()),
        ])?;
    }
    csv.finish()
}

pub fn cmd_steady(cfg: &RunConfig) -> Result<String, CliError> {
    let (p, model) = setup(cfg)?;
    if cfg.model != ModelName::Dktm {
        return Err(CliError::Capability(format!(
            "no stationary state: the {} model lacks a stationary state (diffusion heats it without bound)",
            model.label()
        )));
    }
    let gen = model.generators(&p, cfg.variant()).map_err(classify)?;
    let ss = match steady_state(&gen) {
        Err(Error::NoUniqueSolution { condition }) => {
            return Err(CliError::Capability(format!(
                "no stationary state: Lyapunov operator is singular (condition {condition:.3e}); alpha_tilde must be positive"
            )))
        }
        other => other.map_err(classify)?,
    };
    let rec = correlations(&ss.sigma, &cfg.discord_options()).map_err(classify)?;
    let units = cfg.units.factor();
    let mut csv = Csv::new(&["quantity", "value"])?;
    for i in 0..4 {
        for j in 0..4 {
            csv.row(&[format!("sigma_{}{}", i + 1, j + 1), num(ss.sigma.get(i, j))])?;
        }
    }
    csv.row(&[
        "mutual_information".into(),
        num(rec.mutual_information * units),
    ])?;
    csv.row(&["discord".into(), num(rec.discord * units)])?;
    csv.row(&["ppt_nu_minus".into(), num(rec.ppt_nu_minus)])?;
    csv.row(&["lyapunov_residual".into(), num(ss.residual)])?;
    csv.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepAxis {
    Squeezing,
    Alpha,
}

pub fn cmd_sweep(cfg: &RunConfig, axis: SweepAxis, values: &[f64]) -> Result<String, CliError> {
    let (p, model) = setup(cfg)?;
    if values.is_empty() {
        return Err(CliError::Usage("sweep needs at least one value".into()));
    }
    if axis == SweepAxis::Alpha && cfg.model != ModelName::Dktm {
        return Err(CliError::Usage(format!(
            "the alpha axis requires model dktm, got {}",
            model.label()
        )));
    }
    let mut settings = SweepSettings::new(model, cfg.grid());
    settings.variant = cfg.variant();
    settings.discord = cfg.discord_options();
    settings.initial = cfg.initial_state.covariance().map_err(classify)?;
    settings.refine_peak = cfg.refine_peak;
    let table = match axis {
        SweepAxis::Squeezing => squeezing_sweep(&p, values, &settings),
        SweepAxis::Alpha => alpha_sweep(&p, values, &settings),
    }
    .map_err(classify)?;
    let units = cfg.units.factor();
    let mut csv = Csv::new(&[
        "value",
        "peak_discord",
        "peak_tau",
        "asymptotic_discord",
        "asymptotic_mutual_information",
    ])?;
    for row in &table.rows {
        if let Some(note) = &row.note {
            log::warn!("{} = {}: {note}", table.axis_name, row.value);
        }
        csv.row(&[
            num(row.value),
            num(row.peak_discord * units),
            num(row.peak_tau),
            opt(row.asymptotic_discord.map(|v| v * units)),
            opt(row.asymptotic_mutual_information.map(|v| v * units)),
        ])?;
    }
    csv.finish()
}

/// Long-time formula against a fresh KTM evolution from a coherent start.
/// `n = 1` evaluates `tau_min` only; otherwise `n` linearly spaced points.
pub fn cmd_asymptote(
    cfg: &RunConfig,
    tau_min: f64,
    tau_max: f64,
    n: usize,
) -> Result<String, CliError> {
    cfg.validate()?;
    let p = cfg.params()?;
    if n == 0 {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    if !(tau_min > 0.0 && tau_min.is_finite()) || !(tau_max >= tau_min && tau_max.is_finite()) {
        return Err(CliError::Usage(format!(
            "need 0 < tau_min ≤ tau_max, got [{tau_min}, {tau_max}]"
        )));
    }
    asymptotic_ktm_discord(p.eta, tau_min)
        .map_err(|e| CliError::Usage(format!("eta*tau_min = {}: {e}", p.eta * tau_min)))?;
    let gen = ktm_generators(&p).map_err(classify)?;
    let opts = cfg.discord_options();
    let units = cfg.units.factor();
    let mut csv = Csv::new(&["tau", "formula_discord", "numeric_discord", "relative_gap"])?;
    for k in 0..n {
        let tau = if n == 1 {
            tau_min
        } else if k + 1 == n {
            tau_max
        } else {
            tau_min + (tau_max - tau_min) * k as f64 / (n - 1) as f64
        };
        let formula = asymptotic_ktm_discord(p.eta, tau).map_err(classify)?;
        let sigma = propagate(&gen, &coherent_cov(), tau).map_err(classify)?;
        let numeric = gaussian_discord_with(&sigma, &opts)
            .map_err(|e| CliError::Numerical(format!("at tau = {tau}: {e}")))?;
        let gap = (numeric - formula).abs() / formula.abs();
        csv.row(&[
            num(tau),
            num(formula * units),
            num(numeric * units),
            num(gap),
        ])?;
    }
    csv.finish()
}

pub fn physical_coupling(p: &PhysicalParams) -> Result<Coupling, CliError> {
    derive_coupling(p).map_err(classify)
}
