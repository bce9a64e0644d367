//! Correlation time series, peak extraction, the long-time KTM discord
//! asymptote, and parameter sweeps.

use log::info;

use crate::dynamics::{evolve_series, propagate, steady_state, SamplingGrid, Trajectory};
use crate::error::{Error, Result};
use crate::gaussian::{
    correlations, gaussian_discord_with, CorrelationRecord, CovarianceMatrix, DiscordOptions,
};
use crate::models::{squeezed_cov, DktmVariant, GeneratorPair, Model, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationSample {
    pub tau: f64,
    pub record: CorrelationRecord,
    pub trace: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorrelationSeries {
    pub samples: Vec<CorrelationSample>,
}

impl CorrelationSeries {
    pub fn taus(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.tau).collect()
    }

    pub fn discord(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.record.discord).collect()
    }

    pub fn mutual_information(&self) -> Vec<f64> {
        self.samples
            .iter()
            .map(|s| s.record.mutual_information)
            .collect()
    }

    pub fn ppt_nu_minus(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.record.ppt_nu_minus).collect()
    }

    pub fn any_entangled(&self) -> bool {
        self.samples.iter().any(|s| s.record.entangled)
    }
}

pub fn correlation_series(traj: &Trajectory, opts: &DiscordOptions) -> Result<CorrelationSeries> {
    let samples = traj
        .samples
        .iter()
        .map(|s| {
            Ok(CorrelationSample {
                tau: s.tau,
                record: correlations(&s.sigma, opts)?,
                trace: s.sigma.trace(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationSeries { samples })
}

/// Long-time weak-coupling approximation of the KTM discord for a
/// coherent start, as a function of `x = ητ`:
///
/// `½[(1+x) ln(x/(2+x)) + ln(1 − x⁻⁴) − (x²/(1+x)) ln((x²−x−1)/(x²+x+1))]`.
///
/// Each logarithm is evaluated through `ln_1p` so the large-`x` cancellation
/// between the first and last terms stays accurate.
pub fn asymptotic_ktm_discord(eta: f64, tau: f64) -> Result<f64> {
    let x = eta * tau;
    if !x.is_finite() || x * x - x - 1.0 <= 0.0 || x <= 1.0 {
        return Err(Error::Domain(format!(
            "eta*tau = {x} must exceed the golden ratio {:.6} for the asymptote to be defined",
            (1.0 + 5f64.sqrt()) / 2.0
        )));
    }
    let first = -(1.0 + x) * (2.0 / x).ln_1p();
    let second = (-(x.powi(-4))).ln_1p();
    let ratio_log = (-(2.0 * x + 2.0) / (x * x + x + 1.0)).ln_1p();
    let third = -(x * x / (1.0 + x)) * ratio_log;
    Ok(0.5 * (first + second + third))
}

/// Maximum of a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub tau_star: f64,
    pub value: f64,
    /// Index of the largest sample.
    pub index: usize,
    /// Every sample was zero; the first sample is reported.
    pub flat: bool,
}

/// Global maximum of `values(taus)` with a three-point parabolic refinement
/// around interior maxima.
pub fn peak_of(taus: &[f64], values: &[f64]) -> Result<Peak> {
    if taus.len() != values.len() {
        return Err(Error::Dimension("taus and values differ in length".into()));
    }
    if values.len() < 3 {
        return Err(Error::Input(format!(
            "peak search needs at least 3 samples, got {}",
            values.len()
        )));
    }
    if values.iter().all(|v| *v == 0.0) {
        info!("flat series: all {} samples are zero", values.len());
        return Ok(Peak {
            tau_star: taus[0],
            value: 0.0,
            index: 0,
            flat: true,
        });
    }
    let index = values
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if *v > values[best] { i } else { best });
    let mut peak = Peak {
        tau_star: taus[index],
        value: values[index],
        index,
        flat: false,
    };
    if index > 0 && index + 1 < values.len() {
        let (x0, x1, x2) = (taus[index - 1], taus[index], taus[index + 1]);
        let (y0, y1, y2) = (values[index - 1], values[index], values[index + 1]);
        // Newton form: p(x) = y0 + d1 (x − x0) + d2 (x − x0)(x − x1).
        let d01 = (y1 - y0) / (x1 - x0);
        let d12 = (y2 - y1) / (x2 - x1);
        let d2 = (d12 - d01) / (x2 - x0);
        if d2 < 0.0 {
            let xv = (0.5 * (x0 + x1) - d01 / (2.0 * d2)).clamp(x0, x2);
            let yv = y0 + d01 * (xv - x0) + d2 * (xv - x0) * (xv - x1);
            if yv >= y1 {
                peak.tau_star = xv;
                peak.value = yv;
            }
        }
    }
    Ok(peak)
}

/// Peak of the discord column.
pub fn peak_discord(series: &CorrelationSeries) -> Result<Peak> {
    peak_of(&series.taus(), &series.discord())
}

/// Golden-section maximization of the discord of `σ(τ)` on `[lo, hi]`,
/// re-propagating exactly at each probe.
pub fn refine_peak_golden(
    gen: &GeneratorPair,
    sigma0: &CovarianceMatrix,
    opts: &DiscordOptions,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<Peak> {
    if !(hi > lo) || lo < 0.0 {
        return Err(Error::Input(format!("invalid bracket [{lo}, {hi}]")));
    }
    let eval = |t: f64| -> Result<f64> { gaussian_discord_with(&propagate(gen, sigma0, t)?, opts) };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (eval(c)?, eval(d)?);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d)?;
        }
    }
    let tau_star = 0.5 * (a + b);
    Ok(Peak {
        tau_star,
        value: eval(tau_star)?,
        index: 0,
        flat: false,
    })
}

/// Shared settings for the sweep drivers.
#[derive(Debug, Clone)]
pub struct SweepSettings {
    pub model: Model,
    pub variant: DktmVariant,
    pub grid: SamplingGrid,
    pub discord: DiscordOptions,
    /// Initial state for the alpha axis (the squeezing axis builds its own).
    pub initial: CovarianceMatrix,
    /// Follow the parabolic estimate with a golden-section search over the
    /// bracketing samples.
    pub refine_peak: bool,
}

impl SweepSettings {
    pub fn new(model: Model, grid: SamplingGrid) -> Self {
        Self {
            model,
            variant: DktmVariant::default(),
            grid,
            discord: DiscordOptions::default(),
            initial: crate::models::coherent_cov(),
            refine_peak: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub peak_discord: f64,
    pub peak_tau: f64,
    pub peak_mutual_information: f64,
    pub asymptotic_discord: Option<f64>,
    pub asymptotic_mutual_information: Option<f64>,
    /// Set when the model has no stationary state at this point.
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub axis_name: String,
    pub axis_values: Vec<f64>,
    pub rows: Vec<SweepRow>,
}

fn check_axis(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Input("sweep needs at least one axis value".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("sweep values must be finite".into()));
    }
    if values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Input(
            "sweep values must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn sweep_row(
    value: f64,
    gen: &GeneratorPair,
    sigma0: &CovarianceMatrix,
    settings: &SweepSettings,
    with_steady: bool,
) -> Result<SweepRow> {
    let traj = evolve_series(gen, sigma0, &settings.grid)?;
    let series = correlation_series(&traj, &settings.discord)?;
    let mut peak = peak_discord(&series)?;
    if settings.refine_peak && !peak.flat {
        let taus = series.taus();
        let lo = taus[peak.index.saturating_sub(1)];
        let hi = taus[(peak.index + 1).min(taus.len() - 1)];
        let refined =
            refine_peak_golden(gen, sigma0, &settings.discord, lo, hi, 1e-9 * hi.max(1.0))?;
        if refined.value > peak.value {
            peak = Peak {
                index: peak.index,
                ..refined
            };
        }
    }
    let peak_mi = peak_of(&series.taus(), &series.mutual_information())?;
    let mut row = SweepRow {
        value,
        peak_discord: peak.value,
        peak_tau: peak.tau_star,
        peak_mutual_information: peak_mi.value,
        asymptotic_discord: None,
        asymptotic_mutual_information: None,
        note: None,
    };
    if with_steady {
        match steady_state(gen) {
            Ok(ss) => {
                let rec = correlations(&ss.sigma, &settings.discord)?;
                row.asymptotic_discord = Some(rec.discord);
                row.asymptotic_mutual_information = Some(rec.mutual_information);
            }
            Err(Error::NoUniqueSolution { condition }) => {
                row.note = Some(format!("no stationary state (condition {condition:.3e})"));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(row)
}

/// One evolution per squeezing value, starting from `squeezed_cov(s)`.
pub fn squeezing_sweep(
    p: &ModelParams,
    s_values: &[f64],
    settings: &SweepSettings,
) -> Result<SweepTable> {
    check_axis(s_values)?;
    let gen = settings.model.generators(p, settings.variant)?;
    let with_steady = settings.model == Model::Dktm;
    let rows = s_values
        .iter()
        .map(|&s| sweep_row(s, &gen, &squeezed_cov(s)?, settings, with_steady))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        axis_name: "squeezing".into(),
        axis_values: s_values.to_vec(),
        rows,
    })
}

/// Dissipative-model sweep over `α̃`: asymptotic correlations from the
/// stationary state, peaks from an evolution of `settings.initial`.
pub fn alpha_sweep(
    p: &ModelParams,
    alpha_values: &[f64],
    settings: &SweepSettings,
) -> Result<SweepTable> {
    check_axis(alpha_values)?;
    if alpha_values[0] <= 0.0 {
        return Err(Error::Input("alpha values must be positive".into()));
    }
    let rows = alpha_values
        .iter()
        .map(|&a| {
            let params = p.with_alpha(a)?;
            let gen = Model::Dktm.generators(&params, settings.variant)?;
            sweep_row(a, &gen, &settings.initial, settings, true)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        axis_name: "alpha".into(),
        axis_values: alpha_values.to_vec(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Sample;
    use crate::models::coherent_cov;

    #[test]
    fn constant_identity_series() {
        let samples = (0..4)
            .map(|k| Sample {
                tau: k as f64,
                sigma: coherent_cov(),
            })
            .collect();
        let traj = Trajectory::new("const", None, samples).unwrap();
        let series = correlation_series(&traj, &DiscordOptions::default()).unwrap();
        for s in &series.samples {
            assert_eq!(s.record.discord, 0.0);
            assert_eq!(s.record.mutual_information, 0.0);
            assert!((s.record.ppt_nu_minus - 1.0).abs() < 1e-15);
            assert!(!s.record.entangled);
        }
        let peak = peak_discord(&series).unwrap();
        assert!(peak.flat);
        assert_eq!(peak.tau_star, 0.0);
    }

    #[test]
    fn parabolic_peak_of_exact_parabola() {
        let taus = [0.0, 1.0, 2.0, 3.0, 4.0];
        let vals: Vec<f64> = taus.iter().map(|t| 5.0 - (t - 1.7) * (t - 1.7)).collect();
        let p = peak_of(&taus, &vals).unwrap();
        assert!((p.tau_star - 1.7).abs() < 1e-12);
        assert!((p.value - 5.0).abs() < 1e-12);
        assert_eq!(p.index, 2);
    }

    #[test]
    fn peak_stays_in_bracket() {
        // Strongly skewed samples.
        let taus = [0.0, 1.0, 1.01, 5.0];
        let vals = [0.0, 0.9, 1.0, 0.0];
        let p = peak_of(&taus, &vals).unwrap();
        assert!(p.tau_star >= 1.0 && p.tau_star <= 5.0);
        assert!(p.value >= 1.0);
    }

    #[test]
    fn endpoint_peak_is_not_refined() {
        let p = peak_of(&[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!((p.tau_star, p.value, p.index), (2.0, 2.0, 2));
        assert!(peak_of(&[0.0, 1.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn asymptote_domain() {
        assert!(asymptotic_ktm_discord(1e-2, 100.0).is_err());
        assert!(asymptotic_ktm_discord(1e-2, 161.0).is_err());
        assert!(asymptotic_ktm_discord(1e-2, 162.0).is_ok());
    }

    #[test]
    fn asymptote_vanishes() {
        assert!(asymptotic_ktm_discord(1.0, 1e6).unwrap().abs() < 1e-5);
        assert!(asymptotic_ktm_discord(1e-2, 1e8).unwrap().abs() < 1e-5);
    }

    #[test]
    fn golden_refinement_does_not_lower_the_peak() {
        let p = ModelParams::new(1e-2).unwrap();
        let mut settings = SweepSettings::new(Model::Ktm, SamplingGrid::linear(300.0, 301));
        let coarse = squeezing_sweep(&p, &[0.0], &settings).unwrap().rows[0].peak_discord;
        settings.refine_peak = true;
        let fine = squeezing_sweep(&p, &[0.0], &settings).unwrap().rows[0].peak_discord;
        let dense = squeezing_sweep(
            &p,
            &[0.0],
            &SweepSettings::new(Model::Ktm, SamplingGrid::linear(300.0, 6001)),
        )
        .unwrap()
        .rows[0]
            .peak_discord;
        assert!(fine >= coarse);
        assert!((fine - dense).abs() < 1e-5 * dense, "{fine} vs {dense}");
    }

    #[test]
    fn sweep_axis_validation() {
        let settings = SweepSettings::new(Model::Ktm, SamplingGrid::linear(10.0, 5));
        let p = ModelParams::new(1e-2).unwrap();
        assert!(squeezing_sweep(&p, &[], &settings).is_err());
        assert!(squeezing_sweep(&p, &[1.0, 0.5], &settings).is_err());
        assert!(alpha_sweep(&p, &[0.0, 0.1], &settings).is_err());
    }
}
