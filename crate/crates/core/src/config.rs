//! Experiment configuration files (TOML).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::{GeodesicSpace, Point, SpaceModel};
use crate::iteration::{RunOptions, DEFAULT_MAX_STEPS};
use crate::mappings::{derived_bound, ApproxFixedPointSpec, MappingSpec, Witness};
use crate::moduli::Schedule;
use crate::rates::RateInputs;

/// No run may exceed this many steps, whatever the configuration says.
pub const HARD_STEP_CAP: u64 = 10_000_000;

fn default_delta_ks() -> Vec<u64> {
    vec![0, 10, 100]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AfpConfig {
    pub b: f64,
    pub witness: Witness<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    #[serde(default = "default_max_steps")]
    pub max_steps: u64,
    /// Stride between stored trajectory points.
    #[serde(default = "default_report_every")]
    pub report_every: u64,
}

fn default_max_steps() -> u64 {
    DEFAULT_MAX_STEPS
}

fn default_report_every() -> u64 {
    1000
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_steps: default_max_steps(), report_every: default_report_every() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    pub eps_grid: Vec<f64>,
    #[serde(default = "default_delta_ks")]
    pub delta_ks: Vec<u64>,
    pub start: Point<f64>,
    /// Point whose distance to the orbit is tracked; defaults to the
    /// certificate's exact fixed point when it has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Point<f64>>,
    pub space: SpaceModel,
    pub map: MappingSpec<f64>,
    pub schedule: Schedule,
    pub afp: AfpConfig,
    #[serde(default)]
    pub caps: Caps,
}

/// One problem found while reading a configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostic {
    pub message: String,
    /// 1-based position in the source text, when known.
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "{l}:{c}: {}", self.message),
            _ => write!(f, "{}", self.message),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError(pub Vec<Diagnostic>);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn plain(message: impl Into<String>) -> Diagnostic {
    Diagnostic { message: message.into(), line: None, column: None }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let config: ExperimentConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = match e.span() {
            Some(span) => {
                let (l, c) = position(text, span.start);
                (Some(l), Some(c))
            }
            None => (None, None),
        };
        ConfigError(vec![Diagnostic { message: e.message().trim().to_string(), line, column }])
    })?;
    let problems = config.diagnostics();
    if problems.is_empty() {
        Ok(config)
    } else {
        Err(ConfigError(problems))
    }
}

impl ExperimentConfig {
    /// Every violated invariant, each naming what failed.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut push = |context: &str, e: Error| out.push(plain(format!("{context}: {e}")));
        if let Err(e) = self.schedule.validate() {
            push("schedule", e);
        }
        let start_ok = match GeodesicSpace::<f64>::validate(&self.space, &self.start) {
            Ok(()) => true,
            Err(e) => {
                push("start", e);
                false
            }
        };
        let map_ok = match self.map.validate(&self.space) {
            Ok(()) => true,
            Err(e) => {
                push("map", e);
                false
            }
        };
        if let Some(z) = &self.reference {
            if let Err(e) = GeodesicSpace::<f64>::validate(&self.space, z) {
                push("reference", e);
            }
        }
        if !(self.afp.b > 0.0 && self.afp.b.is_finite()) {
            push("afp", Error::InvalidWitness(format!("b = {} must be positive and finite", self.afp.b)));
        } else if start_ok && map_ok {
            if let Err(e) = derived_bound(&self.afp_spec(), &self.map, &self.space) {
                push("afp", e);
            }
        }
        if self.eps_grid.is_empty() {
            out.push(plain("eps_grid: at least one precision is required"));
        }
        for eps in &self.eps_grid {
            if !(*eps > 0.0 && eps.is_finite()) {
                out.push(plain(format!("eps_grid: {eps} must be positive and finite")));
            }
        }
        if self.caps.max_steps == 0 || self.caps.max_steps > HARD_STEP_CAP {
            out.push(plain(format!(
                "caps.max_steps = {} must lie in [1, {HARD_STEP_CAP}]",
                self.caps.max_steps
            )));
        }
        out
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configurations always serialize")
    }

    pub fn afp_spec(&self) -> ApproxFixedPointSpec<f64> {
        ApproxFixedPointSpec {
            start: self.start.clone(),
            b: self.afp.b,
            witness: self.afp.witness.clone(),
        }
    }

    /// `2b`, the bound on every residual along the orbit.
    pub fn residual_cap(&self) -> f64 {
        2.0 * self.afp.b
    }

    pub fn rate_inputs(&self, eps: f64) -> RateInputs<f64> {
        RateInputs::new(eps, self.space.modulus().clone(), self.afp.b, &self.schedule)
    }

    /// The configured reference point, else the certificate's fixed point.
    pub fn reference_point(&self) -> Option<Point<f64>> {
        self.reference.clone().or_else(|| {
            self.afp_spec().exact_fixed_point(&self.space, &self.map).ok().flatten()
        })
    }

    pub fn run_options(&self) -> RunOptions<f64> {
        RunOptions {
            point_stride: self.caps.report_every,
            max_steps: self.caps.max_steps.min(HARD_STEP_CAP),
            reference: self.reference_point(),
            residual_cap: Some(self.residual_cap()),
        }
    }

    pub fn step_cap(&self) -> u64 {
        self.caps.max_steps.min(HARD_STEP_CAP)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ROTATION_PI: &str = r#"
seed = 1
eps_grid = [0.5, 0.25, 0.125, 0.0625]
start = [1.0, 0.0]

[space]
kind = "Euclidean"
dim = 2

[map]
kind = "EuclideanRotation"
center = [0.0, 0.0]
angle = 3.141592653589793

[schedule]
L = 1
N0 = 0
lambda = { kind = "Constant", value = "1/2" }
s = { kind = "Constant", value = 0 }
theta = { kind = "ThetaLinear", a = 4, b = 0 }
gamma = { kind = "GammaZero" }

[afp]
b = 1.0
witness = { kind = "Catalog" }
"#;

    #[test]
    fn parses_golden_text() {
        let c = parse_config(ROTATION_PI).unwrap();
        assert_eq!(c.schedule.l, 1);
        assert_eq!(c.delta_ks, vec![0, 10, 100]);
        assert_eq!(c.residual_cap(), 2.0);
        assert_eq!(c.reference_point(), Some(Point::new(vec![0.0, 0.0])));
        let r = crate::rates::compute_phi(&c.rate_inputs(0.5)).unwrap();
        assert_eq!(r.phi, 2052);
    }

    #[test]
    fn round_trip() {
        let c = parse_config(ROTATION_PI).unwrap();
        let again = parse_config(&c.to_toml()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn l_zero_is_reported() {
        let err = parse_config(&ROTATION_PI.replace("L = 1", "L = 0")).unwrap_err();
        assert!(err.0.iter().any(|d| d.message.contains("L must be ≥1")), "{err}");
    }

    #[test]
    fn s_above_one_minus_inverse_l() {
        let text = ROTATION_PI
            .replace("L = 1", "L = 5")
            .replace(r#"s = { kind = "Constant", value = 0 }"#, r#"s = { kind = "Constant", value = 0.9 }"#);
        let err = parse_config(&text).unwrap_err();
        assert!(err.0.iter().any(|d| d.message.contains("1 - 1/L")), "{err}");
    }

    #[test]
    fn unknown_key_has_position() {
        let text = ROTATION_PI.replace("seed = 1", "seed = 1\nsede = 2");
        let err = parse_config(&text).unwrap_err();
        let d = &err.0[0];
        assert!(d.message.contains("sede"), "{d}");
        assert_eq!(d.line, Some(3));
    }

    #[test]
    fn collects_several_problems() {
        let text = ROTATION_PI
            .replace("L = 1", "L = 0")
            .replace("start = [1.0, 0.0]", "start = [1.0, 0.0, 2.0]")
            .replace("b = 1.0", "b = -1.0");
        let err = parse_config(&text).unwrap_err();
        assert!(err.0.len() >= 3, "{err}");
    }

    #[test]
    fn bad_certificate_is_rejected() {
        let err = parse_config(&ROTATION_PI.replace("b = 1.0", "b = 0.5")).unwrap_err();
        assert!(err.0.iter().any(|d| d.message.starts_with("afp")), "{err}");
    }
}
