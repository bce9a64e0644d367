//! Run configuration: JSON file, overridden by command-line flags.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use gravcorr_core::dynamics::{SamplingGrid, Spacing};
use gravcorr_core::gaussian::{CovarianceMatrix, DeltaBranch, DiscordOptions, Subsystem};
use gravcorr_core::models::{
    coherent_cov, squeezed_cov, thermal_cov, D11Entry, D12Entry, DktmVariant, Model, ModelParams,
};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelName {
    Ktm,
    Dktm,
    Unitary,
}

impl From<ModelName> for Model {
    fn from(m: ModelName) -> Self {
        match m {
            ModelName::Ktm => Model::Ktm,
            ModelName::Dktm => Model::Dktm,
            ModelName::Unitary => Model::Unitary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SpacingName {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BranchName {
    Paper,
    Standard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum D11Name {
    Paper,
    LimitConsistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum D12Name {
    Paper,
    Derived,
}

/// Units for reported entropic quantities. Computation is always in nats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Nats,
    Bits,
}

impl Units {
    pub fn factor(self) -> f64 {
        match self {
            Units::Nats => 1.0,
            Units::Bits => std::f64::consts::LOG2_E,
        }
    }
}

/// Initial product state. Text forms: `coherent`, `squeezed(s)` or
/// `squeezed:s`, `thermal(nbar)` or `thermal:nbar`. JSON also accepts
/// `{"squeezed": s}` and `{"thermal": nbar}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Coherent,
    Squeezed(f64),
    Thermal(f64),
}

impl InitialState {
    pub fn covariance(self) -> gravcorr_core::Result<CovarianceMatrix> {
        match self {
            InitialState::Coherent => Ok(coherent_cov()),
            InitialState::Squeezed(s) => squeezed_cov(s),
            InitialState::Thermal(n) => thermal_cov(n),
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialState::Coherent => write!(f, "coherent"),
            InitialState::Squeezed(s) => write!(f, "squeezed({s})"),
            InitialState::Thermal(n) => write!(f, "thermal({n})"),
        }
    }
}

impl FromStr for InitialState {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "coherent" {
            return Ok(InitialState::Coherent);
        }
        let (name, arg) = if let Some((n, rest)) = t.split_once('(') {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| format!("missing ')' in initial state {t:?}"))?;
            (n, inner)
        } else if let Some((n, a)) = t.split_once(':') {
            (n, a)
        } else {
            return Err(format!(
                "unknown initial state {t:?}; expected coherent, squeezed(s) or thermal(nbar)"
            ));
        };
        let value: f64 = arg
            .trim()
            .parse()
            .map_err(|_| format!("invalid number {arg:?} in initial state {t:?}"))?;
        match name.trim() {
            "squeezed" => Ok(InitialState::Squeezed(value)),
            "thermal" => Ok(InitialState::Thermal(value)),
            other => Err(format!("unknown initial state kind {other:?}")),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawInitial {
    Text(String),
    Squeezed { squeezed: f64 },
    Thermal { thermal: f64 },
}

impl<'de> Deserialize<'de> for InitialState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match RawInitial::deserialize(d)? {
            RawInitial::Text(s) => s.parse().map_err(serde::de::Error::custom),
            RawInitial::Squeezed { squeezed } => Ok(InitialState::Squeezed(squeezed)),
            RawInitial::Thermal { thermal } => Ok(InitialState::Thermal(thermal)),
        }
    }
}

impl Serialize for InitialState {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelName,
    pub eta: f64,
    /// Display only; every time in input and output is `τ = ωt`.
    pub omega: f64,
    pub alpha_tilde: f64,
    pub lambda_ratio: f64,
    pub initial_state: InitialState,
    pub tau_max: f64,
    pub n_samples: usize,
    pub spacing: SpacingName,
    pub measured_subsystem: u8,
    pub delta_branch: BranchName,
    pub dktm_d11: D11Name,
    pub dktm_d12: D12Name,
    pub units: Units,
    /// Golden-section refinement of sweep peaks.
    pub refine_peak: bool,
    pub output_path: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelName::Ktm,
            eta: 1e-2,
            omega: 1.0,
            alpha_tilde: 0.0,
            lambda_ratio: 1.0,
            initial_state: InitialState::Coherent,
            tau_max: 1e3,
            n_samples: 500,
            spacing: SpacingName::Log,
            measured_subsystem: 2,
            delta_branch: BranchName::Standard,
            dktm_d11: D11Name::LimitConsistent,
            dktm_d12: D12Name::Derived,
            units: Units::Nats,
            refine_peak: false,
            output_path: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let numbers = [
            ("eta", self.eta),
            ("omega", self.omega),
            ("alpha_tilde", self.alpha_tilde),
            ("lambda_ratio", self.lambda_ratio),
            ("tau_max", self.tau_max),
        ];
        for (name, v) in numbers {
            if !v.is_finite() {
                return Err(CliError::Usage(format!("{name} must be finite, got {v}")));
            }
        }
        if self.n_samples < 2 {
            return Err(CliError::Usage(format!(
                "n_samples must be at least 2, got {}",
                self.n_samples
            )));
        }
        if !(self.tau_max > 0.0) {
            return Err(CliError::Usage(format!(
                "tau_max must be positive, got {}",
                self.tau_max
            )));
        }
        if !(self.omega > 0.0) {
            return Err(CliError::Usage(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        Subsystem::from_index(self.measured_subsystem)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        match self.initial_state {
            InitialState::Squeezed(s) if !s.is_finite() => {
                return Err(CliError::Usage("squeezing must be finite".into()))
            }
            InitialState::Thermal(n) if !(n.is_finite() && n >= 0.0) => {
                return Err(CliError::Usage(
                    "thermal occupation must be finite and ≥ 0".into(),
                ))
            }
            _ => {}
        }
        self.params()?;
        Ok(())
    }

    pub fn params(&self) -> Result<ModelParams, CliError> {
        let p = ModelParams {
            eta: self.eta,
            omega: 1.0,
            alpha_tilde: self.alpha_tilde,
            lambda_ratio: self.lambda_ratio,
        };
        p.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(p)
    }

    pub fn variant(&self) -> DktmVariant {
        DktmVariant {
            d11: match self.dktm_d11 {
                D11Name::Paper => D11Entry::Paper,
                D11Name::LimitConsistent => D11Entry::LimitConsistent,
            },
            d12: match self.dktm_d12 {
                D12Name::Paper => D12Entry::Paper,
                D12Name::Derived => D12Entry::Derived,
            },
        }
    }

    pub fn discord_options(&self) -> DiscordOptions {
        DiscordOptions {
            measured: Subsystem::from_index(self.measured_subsystem).unwrap_or_default(),
            branch: match self.delta_branch {
                BranchName::Paper => DeltaBranch::Paper,
                BranchName::Standard => DeltaBranch::Standard,
            },
        }
    }

    pub fn grid(&self) -> SamplingGrid {
        let base = SamplingGrid::linear(self.tau_max, self.n_samples);
        match self.spacing {
            SpacingName::Linear => base,
            SpacingName::Log => SamplingGrid {
                spacing: Spacing::Log,
                ..base
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_state_text_forms() {
        assert_eq!(
            "coherent".parse::<InitialState>().unwrap(),
            InitialState::Coherent
        );
        assert_eq!(
            "squeezed(1.5)".parse::<InitialState>().unwrap(),
            InitialState::Squeezed(1.5)
        );
        assert_eq!(
            "squeezed:0.5".parse::<InitialState>().unwrap(),
            InitialState::Squeezed(0.5)
        );
        assert_eq!(
            "thermal(2)".parse::<InitialState>().unwrap(),
            InitialState::Thermal(2.0)
        );
        assert!("squeezed(1".parse::<InitialState>().is_err());
        assert!("vacuum".parse::<InitialState>().is_err());
        assert!("squeezed(x)".parse::<InitialState>().is_err());
    }

    #[test]
    fn json_roundtrip_and_forms() {
        let c = RunConfig::from_json(
            r#"{"model":"dktm","alpha_tilde":0.1,"initial_state":{"squeezed":1.0}}"#,
        )
        .unwrap();
        assert_eq!(c.model, ModelName::Dktm);
        assert_eq!(c.initial_state, InitialState::Squeezed(1.0));
        assert_eq!(c.n_samples, 500);
        let c2 = RunConfig::from_json(
            r#"{"initial_state":"thermal(0.5)","dktm_d11":"limit-consistent"}"#,
        )
        .unwrap();
        assert_eq!(c2.initial_state, InitialState::Thermal(0.5));
        let back = RunConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(RunConfig::from_json(r#"{"etaa": 0.1}"#).is_err());
    }

    #[test]
    fn validation() {
        let ok = RunConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            RunConfig {
                n_samples: 1,
                ..ok.clone()
            },
            RunConfig {
                eta: f64::NAN,
                ..ok.clone()
            },
            RunConfig {
                eta: 1.5,
                ..ok.clone()
            },
            RunConfig {
                measured_subsystem: 3,
                ..ok.clone()
            },
            RunConfig {
                tau_max: 0.0,
                ..ok.clone()
            },
            RunConfig {
                initial_state: InitialState::Thermal(-1.0),
                ..ok.clone()
            },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }
}
