//! Initial parameter vectors for a circuit template under each comparison
//! method, including the three Beta-prior schemes.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{CircuitError, CircuitTemplate, GateRole};
use crate::prior::{fit_beta_mle, sample_beta, BetaParams};
use crate::problem::FeatureVector;

pub const DEFAULT_MIXTURE_LAMBDA: f64 = 0.2;
pub const DEFAULT_ENTANGLER_SCALE: f64 = 0.4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InitError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("Beta initialisation needs a non-empty feature vector")]
    EmptyFeatures,
    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),
}

/// Method tags as they appear in records, CSV files and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "agentq")]
    AgentQ,
    #[serde(rename = "random")]
    Random,
    #[serde(rename = "uniform")]
    Uniform,
    #[serde(rename = "beta-pure")]
    BetaPure,
    #[serde(rename = "beta-mixture")]
    BetaMixture,
    #[serde(rename = "beta-stratified")]
    BetaStratified,
    /// Retrospective per-instance pick among the Beta schemes; computed, never run.
    #[serde(rename = "beta-best")]
    BetaBest,
}

impl Method {
    /// Methods that can be executed, in reporting order.
    pub const RUNNABLE: [Method; 6] = [
        Method::AgentQ,
        Method::Random,
        Method::Uniform,
        Method::BetaPure,
        Method::BetaMixture,
        Method::BetaStratified,
    ];

    pub const BETA_VARIANTS: [Method; 3] = [Method::BetaPure, Method::BetaMixture, Method::BetaStratified];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::AgentQ => "agentq",
            Method::Random => "random",
            Method::Uniform => "uniform",
            Method::BetaPure => "beta-pure",
            Method::BetaMixture => "beta-mixture",
            Method::BetaStratified => "beta-stratified",
            Method::BetaBest => "beta-best",
        }
    }

    pub fn is_beta(self) -> bool {
        Method::BETA_VARIANTS.contains(&self)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::RUNNABLE
            .iter()
            .chain(std::iter::once(&Method::BetaBest))
            .copied()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                format!(
                    "unknown method `{s}` (expected one of: agentq, random, uniform, beta-pure, beta-mixture, beta-stratified)"
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InitVariant {
    /// Angles emitted by the circuit generator, used as-is.
    AgentQBaseline,
    /// Independent draws from U[-π, π].
    Random,
    /// Deterministic centred grid over [-π, π].
    UniformGrid,
    BetaPure,
    BetaMixture { lambda: f64 },
    BetaStratified { epsilon: f64 },
}

impl InitVariant {
    pub fn method(&self) -> Method {
        match self {
            InitVariant::AgentQBaseline => Method::AgentQ,
            InitVariant::Random => Method::Random,
            InitVariant::UniformGrid => Method::Uniform,
            InitVariant::BetaPure => Method::BetaPure,
            InitVariant::BetaMixture { .. } => Method::BetaMixture,
            InitVariant::BetaStratified { .. } => Method::BetaStratified,
        }
    }

    /// Variant for a runnable method with the given hyperparameters.
    pub fn for_method(method: Method, lambda: f64, epsilon: f64) -> Option<Self> {
        Some(match method {
            Method::AgentQ => InitVariant::AgentQBaseline,
            Method::Random => InitVariant::Random,
            Method::Uniform => InitVariant::UniformGrid,
            Method::BetaPure => InitVariant::BetaPure,
            Method::BetaMixture => InitVariant::BetaMixture { lambda },
            Method::BetaStratified => InitVariant::BetaStratified { epsilon },
            Method::BetaBest => return None,
        })
    }

    pub fn validate(&self) -> Result<(), InitError> {
        match *self {
            InitVariant::BetaMixture { lambda } if !(0.0..=1.0).contains(&lambda) => Err(
                InitError::InvalidHyperparameter(format!("mixture lambda {lambda} outside [0, 1]")),
            ),
            InitVariant::BetaStratified { epsilon } if !(epsilon > 0.0 && epsilon.is_finite()) => Err(
                InitError::InvalidHyperparameter(format!("entangler scale {epsilon} must be positive")),
            ),
            _ => Ok(()),
        }
    }
}

/// Full-range angle for a latent in [0, 1]: `2πv - π`.
pub fn map_driver(v: f64) -> f64 {
    2.0 * PI * v - PI
}

/// Near-identity angle for a latent in [0, 1]: `(v - 0.5)·ε`.
pub fn map_entangler(v: f64, epsilon: f64) -> f64 {
    (v - 0.5) * epsilon
}

#[derive(Debug, Clone, PartialEq)]
pub struct Initialization {
    /// One angle per slot, in slot order.
    pub params: Vec<f64>,
    /// Fitted prior, for the Beta variants.
    pub prior: Option<BetaParams>,
    /// Latent values before angle mapping (Beta variants only).
    pub latents: Vec<f64>,
    /// Which latents were replaced by uniform draws (mixture only).
    pub replaced: Vec<bool>,
}

impl Initialization {
    fn plain(params: Vec<f64>) -> Self {
        Initialization {
            params,
            prior: None,
            latents: Vec::new(),
            replaced: Vec::new(),
        }
    }
}

/// Produces initial angles for every slot of `template`.
///
/// The Beta variants fit a prior to `features`, sample one latent per slot,
/// optionally replace each latent with a uniform draw with probability
/// `lambda` (mixture), and map latents to angles. Pure and mixture map every
/// slot to the full range; stratified maps drivers to the full range and
/// everything else near the identity.
pub fn initialize<R: Rng + ?Sized>(
    template: &CircuitTemplate,
    features: Option<&FeatureVector>,
    variant: &InitVariant,
    rng: &mut R,
) -> Result<Initialization, InitError> {
    variant.validate()?;
    let p = template.slot_count();
    match *variant {
        InitVariant::AgentQBaseline => Ok(Initialization::plain(template.baseline_parameters()?)),
        InitVariant::Random => Ok(Initialization::plain(
            (0..p).map(|_| rng.random_range(-PI..=PI)).collect(),
        )),
        InitVariant::UniformGrid => Ok(Initialization::plain(
            (0..p)
                .map(|k| -PI + 2.0 * PI * (k as f64 + 0.5) / p as f64)
                .collect(),
        )),
        InitVariant::BetaPure | InitVariant::BetaMixture { .. } | InitVariant::BetaStratified { .. } => {
            let features = features.filter(|f| !f.is_empty()).ok_or(InitError::EmptyFeatures)?;
            let prior = fit_beta_mle(features);
            let mut latents = sample_beta(&prior, p, rng);
            let mut replaced = vec![false; p];
            if let InitVariant::BetaMixture { lambda } = *variant {
                for (v, flag) in latents.iter_mut().zip(replaced.iter_mut()) {
                    if rng.random::<f64>() < lambda {
                        *v = rng.random::<f64>();
                        *flag = true;
                    }
                }
            }
            let params = match *variant {
                InitVariant::BetaStratified { epsilon } => latents
                    .iter()
                    .zip(&template.slot_roles)
                    .map(|(&v, role)| match role {
                        GateRole::Driver => map_driver(v),
                        _ => map_entangler(v, epsilon),
                    })
                    .collect(),
                _ => latents.iter().map(|&v| map_driver(v)).collect(),
            };
            Ok(Initialization {
                params,
                prior: Some(prior),
                latents,
                replaced,
            })
        }
    }
}
