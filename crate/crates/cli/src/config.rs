//! TOML run specifications.

use std::fmt;
use std::path::PathBuf;

use fadmm::solver::{chi_lower_bound, SolverConfig, Variant};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum App {
    Fda,
    Srm,
    Recovery,
}

impl App {
    pub fn as_str(self) -> &'static str {
        match self {
            App::Fda => "fda",
            App::Srm => "srm",
            App::Recovery => "recovery",
        }
    }
}

impl fmt::Display for App {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where the data matrix comes from.
///
/// `name` is either `randn-m-n` (generated from `seed`), or
/// `<file>-m-n` / `<file>-a-b-m-n` for a LIBSVM file `<data_dir>/<file>.libsvm`
/// restricted to labels `a`, `b` and subsampled to `m × n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    /// Explicit LIBSVM file; overrides the lookup by name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default = "default_data_dir")]
    pub data_dir: PathBuf,
}

fn default_data_dir() -> PathBuf {
    PathBuf::from("data")
}

/// A scalar or a list of values to sweep over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sweep {
    One(f64),
    Many(Vec<f64>),
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Sweep::One(v) => vec![*v],
            Sweep::Many(v) => v.clone(),
        }
    }
}

/// Application parameters. Swept entries of equal length are zipped; scalars
/// broadcast.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Sweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub portfolios: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho0: Option<Sweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho1: Option<Sweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho2: Option<Sweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverParams {
    #[serde(default = "default_xi")]
    pub xi: f64,
    #[serde(default = "default_theta")]
    pub theta: f64,
    #[serde(default = "default_p")]
    pub p: f64,
    /// Defaults to `2√(1+ξ) + 1e-5`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
    /// Defaults to the per-application value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta0: Option<f64>,
    #[serde(default)]
    pub record_diagnostics: bool,
    #[serde(default = "default_spot_check")]
    pub spot_check_every: usize,
    #[serde(default = "default_true")]
    pub record_time: bool,
}

fn default_xi() -> f64 {
    1.0
}
fn default_theta() -> f64 {
    1.01
}
fn default_p() -> f64 {
    1.0 / 3.0
}
fn default_spot_check() -> usize {
    25
}
fn default_true() -> bool {
    true
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            xi: default_xi(),
            theta: default_theta(),
            p: default_p(),
            chi: None,
            beta0: None,
            record_diagnostics: false,
            spot_check_every: default_spot_check(),
            record_time: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            iterations: Some(1000),
            seconds: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub app: App,
    /// Prefix for output file names; defaults to `app_dataset`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<String>,
    #[serde(default = "default_variants")]
    pub variants: Vec<Variant>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    pub dataset: DatasetSpec,
    #[serde(default)]
    pub budget: Budget,
    #[serde(default)]
    pub solver: SolverParams,
    #[serde(default)]
    pub params: AppParams,
}

fn default_variants() -> Vec<Variant> {
    Variant::ALL.to_vec()
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// A config problem tied to the key and line it came from (`line` is
/// 1-based; 0 when the key does not appear in the text).
#[derive(Debug, Clone, PartialEq, Error)]
#[error("config error at line {line}, key `{key}`: {message}")]
pub struct ConfigError {
    pub key: String,
    pub line: usize,
    pub message: String,
}

/// One concrete parameter point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    pub tag: String,
    pub values: Vec<(String, f64)>,
}

impl Instance {
    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }
}

pub const DEFAULT_FDA_R: usize = 20;
pub const DEFAULT_FDA_RHO: f64 = 10.0;
pub const DEFAULT_RECOVERY_RHO: (f64, f64, f64) = (f64::INFINITY, 10.0, 1.0);

impl RunSpec {
    pub fn dataset_tag(&self) -> String {
        self.tag
            .clone()
            .unwrap_or_else(|| format!("{}_{}", self.app, self.dataset.name))
    }

    /// Engine configuration for one instance; `beta0` is the app default
    /// unless the spec overrides it.
    pub fn solver_config(&self, variant: Variant, beta0_default: f64) -> SolverConfig {
        let s = &self.solver;
        let (max_iter, max_seconds) = match (self.budget.iterations, self.budget.seconds) {
            (Some(t), _) => (t, None),
            (None, secs) => (usize::MAX - 1, secs),
        };
        SolverConfig {
            xi: s.xi,
            theta: s.theta,
            p: s.p,
            chi: s.chi.unwrap_or(chi_lower_bound(s.xi) + 1e-5),
            beta0: s.beta0.unwrap_or(beta0_default),
            max_iter,
            max_seconds,
            variant,
            seed: self.seed,
            record_diagnostics: s.record_diagnostics,
            spot_check_every: s.spot_check_every,
            record_time: s.record_time,
        }
    }

    /// Expands swept parameters into concrete instances.
    pub fn instances(&self) -> Vec<Instance> {
        let p = &self.params;
        let named: Vec<(&str, Option<&Sweep>)> = match self.app {
            App::Fda => vec![("rho", p.rho.as_ref())],
            App::Srm => vec![],
            App::Recovery => vec![
                ("rho0", p.rho0.as_ref()),
                ("rho1", p.rho1.as_ref()),
                ("rho2", p.rho2.as_ref()),
            ],
        };
        let lists: Vec<(&str, Vec<f64>)> = named
            .into_iter()
            .map(|(k, s)| (k, s.map(Sweep::values).unwrap_or_default()))
            .collect();
        let len = lists.iter().map(|(_, v)| v.len()).max().unwrap_or(1).max(1);
        let base = self.dataset_tag();
        (0..len)
            .map(|i| {
                let values: Vec<(String, f64)> = lists
                    .iter()
                    .map(|(k, v)| (k.to_string(), if v.len() == 1 { v[0] } else { v[i] }))
                    .collect();
                let mut tag = base.clone();
                if let Some(r) = p.r.filter(|_| self.app == App::Fda) {
                    tag += &format!("_r-{r}");
                }
                for (k, v) in &values {
                    tag += &format!("_{k}-{v}");
                }
                Instance { tag, values }
            })
            .collect()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("a RunSpec always serializes")
    }
}

/// Parses and validates `text`, filling application defaults.
pub fn parse_config(text: &str) -> Result<RunSpec, ConfigError> {
    let mut spec: RunSpec = toml::from_str(text).map_err(|e| from_toml(text, &e))?;
    fill_defaults(&mut spec);
    validate(&spec, text)?;
    Ok(spec)
}

fn fill_defaults(spec: &mut RunSpec) {
    let p = &mut spec.params;
    match spec.app {
        App::Fda => {
            p.r.get_or_insert(DEFAULT_FDA_R);
            p.rho.get_or_insert(Sweep::One(DEFAULT_FDA_RHO));
        }
        App::Srm => {
            p.portfolios.get_or_insert(fadmm::apps::SRM_DEFAULT_P);
        }
        App::Recovery => {
            let (r0, r1, r2) = DEFAULT_RECOVERY_RHO;
            p.rho0.get_or_insert(Sweep::One(r0));
            p.rho1.get_or_insert(Sweep::One(r1));
            p.rho2.get_or_insert(Sweep::One(r2));
        }
    }
    let xi = spec.solver.xi;
    spec.solver.chi.get_or_insert(chi_lower_bound(xi) + 1e-5);
}

fn validate(spec: &RunSpec, text: &str) -> Result<(), ConfigError> {
    let err = |section: &str, key: &str, message: String| ConfigError {
        key: key.to_string(),
        line: find_line(text, section, key),
        message,
    };
    if spec.variants.is_empty() {
        return Err(err("", "variants", "at least one variant is required".into()));
    }
    match (spec.budget.iterations, spec.budget.seconds) {
        (Some(_), Some(_)) => {
            return Err(err(
                "budget",
                "seconds",
                "give either iterations or seconds, not both".into(),
            ))
        }
        (None, None) => {
            return Err(err("budget", "iterations", "a budget is required".into()));
        }
        (None, Some(s)) if !(s > 0.0 && s.is_finite()) => {
            return Err(err("budget", "seconds", format!("must be positive, got {s}")));
        }
        _ => {}
    }
    if spec.dataset.name.trim().is_empty() {
        return Err(err("dataset", "name", "must not be empty".into()));
    }

    let allowed: &[&str] = match spec.app {
        App::Fda => &["r", "rho"],
        App::Srm => &["portfolios"],
        App::Recovery => &["rho0", "rho1", "rho2", "k"],
    };
    let p = &spec.params;
    let present = [
        ("r", p.r.is_some()),
        ("rho", p.rho.is_some()),
        ("portfolios", p.portfolios.is_some()),
        ("rho0", p.rho0.is_some()),
        ("rho1", p.rho1.is_some()),
        ("rho2", p.rho2.is_some()),
        ("k", p.k.is_some()),
    ];
    for (key, set) in present {
        if set && !allowed.contains(&key) {
            return Err(err("params", key, format!("not a parameter of app `{}`", spec.app)));
        }
    }
    let mut len = None;
    for (key, sweep) in [
        ("rho", &p.rho),
        ("rho0", &p.rho0),
        ("rho1", &p.rho1),
        ("rho2", &p.rho2),
    ] {
        let Some(s) = sweep else { continue };
        let vals = s.values();
        if vals.is_empty() {
            return Err(err("params", key, "sweep list is empty".into()));
        }
        if let Some(v) = vals.iter().find(|v| v.is_nan() || **v < 0.0) {
            return Err(err("params", key, format!("must be nonnegative, got {v}")));
        }
        if vals.len() > 1 {
            match len {
                Some(l) if l != vals.len() => {
                    return Err(err(
                        "params",
                        key,
                        format!("sweep length {} differs from {l}", vals.len()),
                    ))
                }
                _ => len = Some(vals.len()),
            }
        }
    }
    if p.r == Some(0) {
        return Err(err("params", "r", "must be at least 1".into()));
    }
    if p.portfolios == Some(0) {
        return Err(err("params", "portfolios", "must be at least 1".into()));
    }

    let cfg = spec.solver_config(Variant::FadmmD, 1.0);
    if let Err(fadmm::Error::InvalidParameter { name, .. }) = cfg.validate() {
        let message = cfg.validate().unwrap_err().to_string();
        let section = if name == "max_seconds" { "budget" } else { "solver" };
        let key = if name == "max_seconds" { "seconds" } else { name };
        return Err(err(section, key, message));
    }
    Ok(())
}

/// 1-based line of `key = …` inside `[section]` (`""` for the top level).
pub fn find_line(text: &str, section: &str, key: &str) -> usize {
    let mut current = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = name.trim().to_string();
            continue;
        }
        if current != section {
            continue;
        }
        if let Some((k, _)) = line.split_once('=') {
            if k.trim() == key {
                return i + 1;
            }
        }
    }
    0
}

fn from_toml(text: &str, e: &toml::de::Error) -> ConfigError {
    let message = e.message().to_string();
    let line = e
        .span()
        .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
        .unwrap_or(0);
    let key = backticked(&message)
        .or_else(|| {
            let l = text.lines().nth(line.checked_sub(1)?)?;
            Some(l.split_once('=')?.0.trim().to_string())
        })
        .unwrap_or_default();
    ConfigError { key, line, message }
}

fn backticked(message: &str) -> Option<String> {
    let start = message.find('`')? + 1;
    let len = message[start..].find('`')?;
    Some(message[start..start + len].to_string())
}
