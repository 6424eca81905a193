//! Scenario files: JSON with a top-level `version`, radians, complex numbers
//! as `[re, im]`.

use nonscatter_core::curves::{Builtin, CornerDomain, TrigCurve};
use nonscatter_core::quad::{QuadMode, QuadOptions};
use nonscatter_core::saddle::GridParams;
use nonscatter_core::waves::WaveModel;
use nonscatter_core::Complex64;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wave: Option<WaveSpec>,
    pub k: f64,
    pub q: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<LambdaGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disk: Option<DiskSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Builtin(Builtin),
    Fourier {
        a1: Vec<f64>,
        b1: Vec<f64>,
        a2: Vec<f64>,
        b2: Vec<f64>,
    },
    Corner {
        theta: f64,
        a1: f64,
        a2: f64,
    },
}

/// Incident wave without its wavenumber; `k` lives on the scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum WaveSpec {
    Plane { alpha: f64 },
    Combo { terms: Vec<(Complex64, f64)> },
    Harmonic { n: i32 },
    Herglotz { psi: Vec<Complex64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaGrid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<QuadMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathChoice {
    RealInterval,
    AutoShift,
    Contour,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathChoice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g0: Option<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum DiskSpec {
    Wavenumbers { n: u32, k_max: f64 },
    Herglotz { n: u32 },
    Plane { alpha: f64 },
}

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| bad(format!("scenario: {e}")))?;
        s.check()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("scenario serializes");
        out.push('\n');
        out
    }

    fn check(&self) -> Result<(), ConfigError> {
        if self.version != VERSION {
            return Err(bad(format!(
                "unsupported scenario version {} (expected {VERSION})",
                self.version
            )));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(bad(format!("k must be positive, got {}", self.k)));
        }
        if !(self.q > 0.0 && self.q.is_finite()) || self.q == 1.0 {
            return Err(bad(format!("q must be positive and != 1, got {}", self.q)));
        }
        if let Some(w) = &self.wave {
            self.wave_model_of(w)
                .validate()
                .map_err(|e| bad(e.to_string()))?;
        }
        if self.lambdas.is_some() {
            self.lambda_values()?;
        }
        Ok(())
    }

    fn wave_model_of(&self, w: &WaveSpec) -> WaveModel {
        let k = self.k;
        match w.clone() {
            WaveSpec::Plane { alpha } => WaveModel::Plane { k, alpha },
            WaveSpec::Combo { terms } => WaveModel::Combo { k, terms },
            WaveSpec::Harmonic { n } => WaveModel::Harmonic { k, n },
            WaveSpec::Herglotz { psi } => WaveModel::Herglotz { k, psi },
        }
    }

    pub fn wave_model(&self) -> Result<WaveModel, ConfigError> {
        let w = self
            .wave
            .as_ref()
            .ok_or_else(|| bad("scenario has no wave"))?;
        Ok(self.wave_model_of(w))
    }

    pub fn curve(&self) -> Result<TrigCurve, ConfigError> {
        match &self.domain {
            Some(DomainSpec::Builtin(b)) => b.curve().map_err(|e| bad(e.to_string())),
            Some(DomainSpec::Fourier { a1, b1, a2, b2 }) => {
                TrigCurve::new(a1.clone(), b1.clone(), a2.clone(), b2.clone())
                    .map_err(|e| bad(e.to_string()))
            }
            Some(DomainSpec::Corner { .. }) => {
                Err(bad("this command needs a closed curve, not a corner"))
            }
            None => Err(bad("scenario has no domain")),
        }
    }

    pub fn corner(&self) -> Result<CornerDomain, ConfigError> {
        match &self.domain {
            Some(DomainSpec::Corner { theta, a1, a2 }) => {
                CornerDomain::new(*theta, *a1, *a2).map_err(|e| bad(e.to_string()))
            }
            _ => Err(bad("this command needs a corner domain")),
        }
    }

    pub fn lambda_values(&self) -> Result<Vec<f64>, ConfigError> {
        let v = match self
            .lambdas
            .as_ref()
            .ok_or_else(|| bad("scenario has no lambdas"))?
        {
            LambdaGrid::List(v) => v.clone(),
            LambdaGrid::Range { start, stop, step } => {
                if step.is_nan() || *step <= 0.0 || stop < start {
                    return Err(bad("lambda range needs step > 0 and stop >= start"));
                }
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                (0..=n).map(|j| start + step * j as f64).collect()
            }
        };
        if v.is_empty() || v.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
            return Err(bad("lambdas must be a non-empty list of positive numbers"));
        }
        if v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("lambdas must be strictly increasing"));
        }
        Ok(v)
    }

    /// Quadrature options with command-line overrides applied.
    pub fn quad_options(
        &self,
        default_mode: QuadMode,
        nodes: Option<usize>,
        tol: Option<f64>,
    ) -> Result<QuadOptions, ConfigError> {
        let spec = self.quadrature.unwrap_or_default();
        let mode = spec.mode.unwrap_or(default_mode);
        let mut opts = match mode {
            QuadMode::PeriodicTrapezoid => QuadOptions::default(),
            QuadMode::PanelGauss => QuadOptions::panel(),
        };
        if let Some(n) = nodes.or(spec.nodes) {
            opts.nodes = n;
        }
        if let Some(t) = tol.or(spec.tol) {
            opts.tol = t;
        }
        opts.validate().map_err(|e| bad(e.to_string()))?;
        Ok(opts)
    }
}
