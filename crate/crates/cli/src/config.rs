//! Scenario configuration files (TOML).

use serde::{Deserialize, Serialize};
use statdyn::chaos::LyapunovMode;
use statdyn::integrator::IntegratorConfig;
use statdyn::statcore::{QuadraticPotential, Statistics};
use statdyn::Complex64;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Iho,
    Lll2,
    Llln,
    Lyapunov,
    QuantumCompare,
    Phase,
    Levelset,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Iho => "iho",
            ScenarioKind::Lll2 => "lll2",
            ScenarioKind::Llln => "llln",
            ScenarioKind::Lyapunov => "lyapunov",
            ScenarioKind::QuantumCompare => "quantum_compare",
            ScenarioKind::Phase => "phase",
            ScenarioKind::Levelset => "levelset",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub scenario: ScenarioKind,
    #[serde(default = "default_statistics")]
    pub statistics: String,
    pub potential: Option<PotentialSection>,
    #[serde(default)]
    pub initial: InitialSection,
    #[serde(default)]
    pub integrator: IntegratorSection,
    #[serde(default)]
    pub lyapunov: LyapunovSection,
    #[serde(default)]
    pub quantum: QuantumSection,
    #[serde(default)]
    pub levelset: LevelsetSection,
    #[serde(default)]
    pub output: OutputSection,
    pub sweep: Option<SweepSection>,
}

fn default_statistics() -> String {
    "distinguishable".into()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    pub u: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub x0: Option<f64>,
    pub xdot0: Option<f64>,
    /// `[re, im]` per particle.
    pub particles: Option<Vec<[f64; 2]>>,
    /// Relative coordinate `[re, im]`.
    pub z0: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSection {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub t_end: Option<f64>,
    pub max_step: Option<f64>,
    pub initial_step: f64,
    pub max_steps: usize,
    /// Output sampling interval.
    pub dt: f64,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        let d = IntegratorConfig::default();
        Self {
            rel_tol: d.rel_tol,
            abs_tol: d.abs_tol,
            t_end: None,
            max_step: None,
            initial_step: d.initial_step,
            max_steps: d.max_steps,
            dt: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LyapunovSection {
    pub mode: String,
    pub perturbation: f64,
    pub renorm_interval: f64,
    pub particle: usize,
    /// Radius of the default three-particle configuration.
    pub radius: f64,
}

impl Default for LyapunovSection {
    fn default() -> Self {
        Self {
            mode: "benettin".into(),
            perturbation: 0.012,
            renorm_interval: 1.0,
            particle: 0,
            radius: 1.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuantumSection {
    pub cutoff: usize,
}

impl Default for QuantumSection {
    fn default() -> Self {
        Self { cutoff: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LevelsetSection {
    pub energy: Option<f64>,
    pub angles: usize,
}

impl Default for LevelsetSection {
    fn default() -> Self {
        Self {
            energy: None,
            angles: 360,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub csv: String,
    pub metadata: String,
    pub plot: Option<String>,
    pub plot_columns: Vec<String>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            csv: "trajectory.csv".into(),
            metadata: "metadata.json".into(),
            plot: None,
            plot_columns: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default = "default_summary")]
    pub summary: String,
    #[serde(default)]
    pub axis: Vec<Axis>,
}

fn default_summary() -> String {
    "summary.csv".into()
}

/// One sweep dimension: explicit `values`, a `start/stop/count` linspace,
/// or `labels` for the statistics axis.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub parameter: String,
    pub values: Option<Vec<f64>>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub count: Option<usize>,
    pub labels: Option<Vec<String>>,
}

pub const NUMERIC_PARAMETERS: &[&str] = &[
    "x0",
    "xdot0",
    "u",
    "v",
    "z0_re",
    "z0_im",
    "t_end",
    "perturbation",
    "radius",
    "energy",
];

#[derive(Debug, Clone, PartialEq)]
pub enum AxisValue {
    Number(f64),
    Label(String),
}

impl Axis {
    pub fn points(&self) -> Result<Vec<AxisValue>, CliError> {
        let schema = |m: String| CliError::Schema(format!("sweep axis '{}': {m}", self.parameter));
        if self.parameter == "statistics" {
            let labels = self
                .labels
                .as_ref()
                .ok_or_else(|| schema("statistics axis needs `labels`".into()))?;
            for l in labels {
                l.parse::<Statistics>().map_err(|e| schema(e.to_string()))?;
            }
            return Ok(labels.iter().cloned().map(AxisValue::Label).collect());
        }
        if !NUMERIC_PARAMETERS.contains(&self.parameter.as_str()) {
            return Err(schema(format!(
                "unknown parameter; expected statistics or one of {}",
                NUMERIC_PARAMETERS.join(", ")
            )));
        }
        let nums = match (&self.values, self.start, self.stop, self.count) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(a), Some(b), Some(n)) => linspace(a, b, n),
            _ => return Err(schema("give either `values` or all of `start`, `stop`, `count`".into())),
        };
        if nums.iter().any(|x| !x.is_finite()) {
            return Err(schema("values must be finite".into()));
        }
        Ok(nums.into_iter().map(AxisValue::Number).collect())
    }
}

/// `n` evenly spaced values, end points included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    b
                } else {
                    a + (b - a) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

impl Config {
    /// Syntax errors map to [`CliError::Parse`], shape errors to
    /// [`CliError::Schema`].
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg = Self::parse(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parse and deserialize without the per-scenario checks.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::Parse(e.to_string()))?;
        table
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Schema(e.message().to_string()))
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let canonical = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(canonical.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn statistics(&self) -> Result<Statistics, CliError> {
        self.statistics
            .parse()
            .map_err(|e: statdyn::Error| CliError::Schema(e.to_string()))
    }

    pub fn potential(&self) -> Result<QuadraticPotential, CliError> {
        let p = self
            .potential
            .ok_or_else(|| CliError::Schema(format!("scenario {} needs [potential]", self.scenario.name())))?;
        QuadraticPotential::new(p.u, p.v).map_err(|e| CliError::Schema(e.to_string()))
    }

    pub fn t_end(&self) -> f64 {
        self.integrator.t_end.unwrap_or(match self.scenario {
            ScenarioKind::Iho => 10.0,
            ScenarioKind::Lyapunov => 2000.0,
            ScenarioKind::Phase => 200.0,
            _ => 100.0,
        })
    }

    pub fn integrator_config(&self) -> IntegratorConfig {
        let i = &self.integrator;
        IntegratorConfig {
            rel_tol: i.rel_tol,
            abs_tol: i.abs_tol,
            t_end: self.t_end(),
            max_step: i.max_step.unwrap_or(f64::INFINITY),
            initial_step: i.initial_step,
            max_steps: i.max_steps,
            ..IntegratorConfig::default()
        }
    }

    pub fn particles(&self) -> Option<Vec<Complex64>> {
        self.initial
            .particles
            .as_ref()
            .map(|ps| ps.iter().map(|p| Complex64::new(p[0], p[1])).collect())
    }

    pub fn z0(&self) -> Result<Complex64, CliError> {
        let z = self
            .initial
            .z0
            .ok_or_else(|| CliError::Schema(format!("scenario {} needs initial.z0", self.scenario.name())))?;
        Ok(Complex64::new(z[0], z[1]))
    }

    pub fn lyapunov_mode(&self) -> Result<LyapunovMode, CliError> {
        self.lyapunov
            .mode
            .parse()
            .map_err(|e: statdyn::Error| CliError::Schema(e.to_string()))
    }

    /// Checks every field the scenario will read.
    pub fn validate(&self) -> Result<(), CliError> {
        let schema = |m: &str| Err(CliError::Schema(m.to_string()));
        self.statistics()?;
        self.integrator_config()
            .validate()
            .map_err(|e| CliError::Schema(e.to_string()))?;
        if !(self.integrator.dt > 0.0 && self.integrator.dt.is_finite()) {
            return schema("integrator.dt must be positive");
        }
        match self.scenario {
            ScenarioKind::Iho => {
                let (Some(x0), Some(v0)) = (self.initial.x0, self.initial.xdot0) else {
                    return schema("iho needs initial.x0 and initial.xdot0");
                };
                if !(x0.is_finite() && v0.is_finite()) {
                    return schema("initial.x0 and initial.xdot0 must be finite");
                }
            }
            ScenarioKind::Lll2 | ScenarioKind::Llln => {
                self.potential()?;
                let Some(ps) = self.particles() else {
                    return schema("LLL scenarios need initial.particles");
                };
                if self.scenario == ScenarioKind::Lll2 && ps.len() != 2 {
                    return schema("lll2 needs exactly 2 particles");
                }
                if ps.is_empty() || ps.len() > 8 {
                    return schema("llln supports 1 to 8 particles");
                }
                if ps.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                    return schema("particle coordinates must be finite");
                }
            }
            ScenarioKind::Lyapunov => {
                self.potential()?;
                self.lyapunov_mode()?;
                let l = &self.lyapunov;
                if !(l.perturbation > 0.0 && l.perturbation.is_finite()) {
                    return schema("lyapunov.perturbation must be positive");
                }
                if !(l.renorm_interval > 0.0 && l.renorm_interval <= self.t_end()) {
                    return schema("lyapunov.renorm_interval must be in (0, t_end]");
                }
                if !(l.radius > 0.0 && l.radius.is_finite()) {
                    return schema("lyapunov.radius must be positive");
                }
                let n = self.particles().map_or(3, |p| p.len());
                if n == 0 || n > 8 {
                    return schema("lyapunov supports 1 to 8 particles");
                }
                if l.particle >= n {
                    return schema("lyapunov.particle out of range");
                }
            }
            ScenarioKind::QuantumCompare | ScenarioKind::Phase => {
                self.potential()?;
                self.z0()?;
                if self.scenario == ScenarioKind::QuantumCompare && self.quantum.cutoff <= 8 {
                    return schema("quantum.cutoff must exceed 8");
                }
            }
            ScenarioKind::Levelset => {
                self.potential()?;
                if self.levelset.energy.is_none() {
                    self.z0()?;
                }
                if self.levelset.angles == 0 {
                    return schema("levelset.angles must be at least 1");
                }
            }
        }
        if let Some(sweep) = &self.sweep {
            for axis in &sweep.axis {
                axis.points()?;
            }
        }
        Ok(())
    }

    /// Copy with one sweep parameter replaced.
    pub fn with_parameter(&self, name: &str, value: &AxisValue) -> Result<Config, CliError> {
        let mut c = self.clone();
        let number = |v: &AxisValue| match v {
            AxisValue::Number(x) => Ok(*x),
            AxisValue::Label(_) => Err(CliError::Schema(format!("parameter {name} needs a number"))),
        };
        match name {
            "statistics" => match value {
                AxisValue::Label(l) => c.statistics = l.clone(),
                AxisValue::Number(_) => return Err(CliError::Schema("statistics needs a label".into())),
            },
            "x0" => c.initial.x0 = Some(number(value)?),
            "xdot0" => c.initial.xdot0 = Some(number(value)?),
            "u" | "v" => {
                let mut p = c.potential.unwrap_or(PotentialSection { u: 1.0, v: 1.0 });
                if name == "u" {
                    p.u = number(value)?;
                } else {
                    p.v = number(value)?;
                }
                c.potential = Some(p);
            }
            "z0_re" | "z0_im" => {
                let mut z = c.initial.z0.unwrap_or([0.0, 0.0]);
                z[usize::from(name == "z0_im")] = number(value)?;
                c.initial.z0 = Some(z);
            }
            "t_end" => c.integrator.t_end = Some(number(value)?),
            "perturbation" => c.lyapunov.perturbation = number(value)?,
            "radius" => c.lyapunov.radius = number(value)?,
            "energy" => c.levelset.energy = Some(number(value)?),
            other => return Err(CliError::Schema(format!("unknown sweep parameter {other}"))),
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const IHO: &str = r#"
scenario = "iho"
statistics = "fermion"

[initial]
x0 = 0.7
xdot0 = -0.3
"#;

    #[test]
    fn parses_minimal_iho() {
        let c = Config::from_toml(IHO).unwrap();
        assert_eq!(c.scenario, ScenarioKind::Iho);
        assert_eq!(c.t_end(), 10.0);
        assert_eq!(c.integrator.dt, 0.01);
    }

    #[test]
    fn error_classes() {
        assert!(matches!(Config::from_toml("scenario = "), Err(CliError::Parse(_))));
        let unknown = format!("{IHO}\nbogus = 1\n");
        assert!(matches!(Config::from_toml(&unknown), Err(CliError::Schema(_))));
        let bad_stats = IHO.replace("fermion", "anyon");
        assert!(matches!(Config::from_toml(&bad_stats), Err(CliError::Schema(_))));
        let missing = "scenario = \"lll2\"\n";
        assert!(matches!(Config::from_toml(missing), Err(CliError::Schema(_))));
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(-1.3, -0.3, 21);
        assert_eq!(v.len(), 21);
        assert_eq!(v[0], -1.3);
        assert_eq!(v[20], -0.3);
        assert!(linspace(0.0, 1.0, 0).is_empty());
    }

    #[test]
    fn axis_forms() {
        let a = Axis {
            parameter: "xdot0".into(),
            start: Some(-1.0),
            stop: Some(0.0),
            count: Some(3),
            ..Axis::default()
        };
        assert_eq!(a.points().unwrap().len(), 3);
        let s = Axis {
            parameter: "statistics".into(),
            labels: Some(vec!["boson".into(), "nope".into()]),
            ..Axis::default()
        };
        assert!(s.points().is_err());
        let bad = Axis {
            parameter: "gamma".into(),
            values: Some(vec![1.0]),
            ..Axis::default()
        };
        assert!(bad.points().is_err());
    }
}
