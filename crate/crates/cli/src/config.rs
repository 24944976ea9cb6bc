//! Configuration resolution: defaults, then config file, then CLI flags.

use std::f64::consts::FRAC_PI_4;
use std::path::{Path, PathBuf};

use critprobe_core::chain::ChainParams;

use crate::CliError;

/// Variable swept by `--grid`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweptVar {
    Lambda,
    Gamma,
    G,
    NSites,
    TotalTime,
}

impl SweptVar {
    pub fn name(self) -> &'static str {
        match self {
            SweptVar::Lambda => "lambda",
            SweptVar::Gamma => "gamma",
            SweptVar::G => "g",
            SweptVar::NSites => "N",
            SweptVar::TotalTime => "T",
        }
    }
}

/// Parsed `--grid var:min:max:count`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub var: SweptVar,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 4 {
            return Err(CliError::Config(format!(
                "grid must be var:min:max:count, got `{text}`"
            )));
        }
        let var = match parts[0] {
            "lambda" => SweptVar::Lambda,
            "gamma" => SweptVar::Gamma,
            "g" => SweptVar::G,
            "N" => SweptVar::NSites,
            "T" => SweptVar::TotalTime,
            other => {
                return Err(CliError::Config(format!(
                    "unknown sweep variable `{other}` (expected lambda|gamma|g|N|T)"
                )))
            }
        };
        let min: f64 = parts[1]
            .parse()
            .map_err(|_| CliError::Config(format!("bad grid min `{}`", parts[1])))?;
        let max: f64 = parts[2]
            .parse()
            .map_err(|_| CliError::Config(format!("bad grid max `{}`", parts[2])))?;
        let count: usize = parts[3]
            .parse()
            .map_err(|_| CliError::Config(format!("bad grid count `{}`", parts[3])))?;
        let spec = GridSpec {
            var,
            min,
            max,
            count,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.count < 2 {
            return Err(CliError::Config("grid count must be at least 2".into()));
        }
        if self.min.is_nan() || self.max.is_nan() || self.min >= self.max {
            return Err(CliError::Config("grid min must be below max".into()));
        }
        Ok(())
    }

    /// Grid points min + i (max - min) / (count - 1), with both endpoints
    /// pinned exactly. For N the values are rounded to the nearest even
    /// integer (and deduplicated).
    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        let last = self.count - 1;
        let max = self.max;
        let min = self.min;
        let raw = (0..self.count).map(move |i| {
            if i == last {
                max
            } else {
                min + step * i as f64
            }
        });
        if self.var == SweptVar::NSites {
            let mut out: Vec<f64> = Vec::new();
            for v in raw {
                let mut n = (v / 2.0).round() as i64 * 2;
                if n < 4 {
                    n = 4;
                }
                if out.last() != Some(&(n as f64)) {
                    out.push(n as f64);
                }
            }
            out
        } else {
            raw.collect()
        }
    }

    pub fn spec_string(&self) -> String {
        format!(
            "{}:{}:{}:{}",
            self.var.name(),
            self.min,
            self.max,
            self.count
        )
    }
}

/// Pre-run verification depth for sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    Off,
    Fast,
    Full,
}

impl VerifyLevel {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        match text {
            "off" => Ok(VerifyLevel::Off),
            "fast" => Ok(VerifyLevel::Fast),
            "full" => Ok(VerifyLevel::Full),
            other => Err(CliError::Config(format!(
                "unknown verify level `{other}` (expected off|fast|full)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            VerifyLevel::Off => "off",
            VerifyLevel::Fast => "fast",
            VerifyLevel::Full => "full",
        }
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n_sites: usize,
    pub lambda: f64,
    pub gamma: f64,
    pub g: f64,
    pub mu: f64,
    pub theta_q: f64,
    pub total_time: f64,
    /// Time-grid resolution: exact step count for fixed-grid commands, the
    /// refinement cap for adaptive ones.
    pub steps: usize,
    pub grid: Option<GridSpec>,
    pub gamma_list: Vec<f64>,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub strict: bool,
    /// Run the self-verification suite before sweeping.
    pub verify_level: VerifyLevel,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_sites: 400,
            lambda: 1.0,
            gamma: 1.0,
            g: 0.1,
            mu: 0.0,
            theta_q: FRAC_PI_4,
            // T is not fixed by the physics; 10 chain-time units is the
            // project convention and is echoed in every output header.
            total_time: 10.0,
            steps: 4096,
            grid: None,
            gamma_list: Vec::new(),
            out: None,
            jobs: 0,
            strict: false,
            verify_level: VerifyLevel::Off,
        }
    }
}

/// Optional values parsed from the CLI; `None` falls through to the config
/// file and then to the defaults.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub n_sites: Option<usize>,
    pub lambda: Option<f64>,
    pub gamma: Option<f64>,
    pub g: Option<f64>,
    pub mu: Option<f64>,
    pub theta_q: Option<f64>,
    pub total_time: Option<f64>,
    pub steps: Option<usize>,
    pub grid: Option<String>,
    pub gamma_list: Option<String>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub strict: bool,
    pub verify_level: Option<String>,
}

pub fn parse_gamma_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("bad gamma-list entry `{s}`")))
        })
        .collect()
}

fn toml_f64(table: &toml::Table, key: &str) -> Result<Option<f64>, CliError> {
    match table.get(key) {
        None => Ok(None),
        Some(toml::Value::Float(x)) => Ok(Some(*x)),
        Some(toml::Value::Integer(x)) => Ok(Some(*x as f64)),
        Some(_) => Err(CliError::Config(format!(
            "config key `{key}` must be a number"
        ))),
    }
}

fn toml_usize(table: &toml::Table, key: &str) -> Result<Option<usize>, CliError> {
    match table.get(key) {
        None => Ok(None),
        Some(toml::Value::Integer(x)) if *x >= 0 => Ok(Some(*x as usize)),
        Some(_) => Err(CliError::Config(format!(
            "config key `{key}` must be a non-negative integer"
        ))),
    }
}

fn toml_str(table: &toml::Table, key: &str) -> Result<Option<String>, CliError> {
    match table.get(key) {
        None => Ok(None),
        Some(toml::Value::String(s)) => Ok(Some(s.clone())),
        Some(_) => Err(CliError::Config(format!(
            "config key `{key}` must be a string"
        ))),
    }
}

/// Apply a TOML config file on top of `cfg`.
fn apply_file(cfg: &mut RunConfig, path: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))?;

    const KNOWN: &[&str] = &[
        "N",
        "lambda",
        "gamma",
        "g",
        "mu",
        "theta_q",
        "T",
        "steps",
        "grid",
        "gamma_list",
        "out",
        "jobs",
        "strict",
        "verify_level",
    ];
    for key in table.keys() {
        if !KNOWN.contains(&key.as_str()) {
            return Err(CliError::Config(format!("unknown config key `{key}`")));
        }
    }

    if let Some(n) = toml_usize(&table, "N")? {
        cfg.n_sites = n;
    }
    if let Some(x) = toml_f64(&table, "lambda")? {
        cfg.lambda = x;
    }
    if let Some(x) = toml_f64(&table, "gamma")? {
        cfg.gamma = x;
    }
    if let Some(x) = toml_f64(&table, "g")? {
        cfg.g = x;
    }
    if let Some(x) = toml_f64(&table, "mu")? {
        cfg.mu = x;
    }
    if let Some(x) = toml_f64(&table, "theta_q")? {
        cfg.theta_q = x;
    }
    if let Some(x) = toml_f64(&table, "T")? {
        cfg.total_time = x;
    }
    if let Some(x) = toml_usize(&table, "steps")? {
        cfg.steps = x;
    }
    if let Some(s) = toml_str(&table, "grid")? {
        cfg.grid = Some(GridSpec::parse(&s)?);
    }
    if let Some(s) = toml_str(&table, "gamma_list")? {
        cfg.gamma_list = parse_gamma_list(&s)?;
    }
    if let Some(s) = toml_str(&table, "out")? {
        cfg.out = Some(PathBuf::from(s));
    }
    if let Some(j) = toml_usize(&table, "jobs")? {
        cfg.jobs = j;
    }
    if let Some(toml::Value::Boolean(b)) = table.get("strict") {
        cfg.strict = *b;
    }
    if let Some(s) = toml_str(&table, "verify_level")? {
        cfg.verify_level = VerifyLevel::parse(&s)?;
    }
    Ok(())
}

/// Resolve the final configuration: defaults < config file < flags.
pub fn resolve(overrides: &Overrides, config_path: Option<&Path>) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = config_path {
        apply_file(&mut cfg, path)?;
    }
    if let Some(n) = overrides.n_sites {
        cfg.n_sites = n;
    }
    if let Some(x) = overrides.lambda {
        cfg.lambda = x;
    }
    if let Some(x) = overrides.gamma {
        cfg.gamma = x;
    }
    if let Some(x) = overrides.g {
        cfg.g = x;
    }
    if let Some(x) = overrides.mu {
        cfg.mu = x;
    }
    if let Some(x) = overrides.theta_q {
        cfg.theta_q = x;
    }
    if let Some(x) = overrides.total_time {
        cfg.total_time = x;
    }
    if let Some(x) = overrides.steps {
        cfg.steps = x;
    }
    if let Some(s) = &overrides.grid {
        cfg.grid = Some(GridSpec::parse(s)?);
    }
    if let Some(s) = &overrides.gamma_list {
        cfg.gamma_list = parse_gamma_list(s)?;
    }
    if let Some(p) = &overrides.out {
        cfg.out = Some(p.clone());
    }
    if let Some(j) = overrides.jobs {
        cfg.jobs = j;
    }
    if overrides.strict {
        cfg.strict = true;
    }
    if let Some(s) = &overrides.verify_level {
        cfg.verify_level = VerifyLevel::parse(s)?;
    }
    if !cfg.total_time.is_finite() || cfg.total_time <= 0.0 {
        return Err(CliError::Config("T must be positive and finite".into()));
    }
    if cfg.steps < 16 {
        return Err(CliError::Config("steps must be at least 16".into()));
    }
    Ok(cfg)
}

impl RunConfig {
    pub fn chain_params(&self) -> Result<ChainParams, CliError> {
        ChainParams::new(self.n_sites, self.lambda, self.gamma, self.g, self.mu)
            .map_err(CliError::from)
    }

    /// Resolved-configuration header lines (fixed order, deterministic
    /// formatting). `jobs` and `out` are omitted: they cannot change any
    /// data byte and embedding them would break byte-level reproducibility
    /// across thread counts.
    pub fn header_lines(&self, command: &str) -> Vec<String> {
        use crate::csvfmt::fmt_f64;
        let mut lines = vec![
            format!("# command = {command}"),
            format!("# N = {}", self.n_sites),
            format!("# lambda = {}", fmt_f64(self.lambda)),
            format!("# gamma = {}", fmt_f64(self.gamma)),
            format!("# g = {}", fmt_f64(self.g)),
            format!("# mu = {}", fmt_f64(self.mu)),
            format!("# theta_q = {}", fmt_f64(self.theta_q)),
            format!("# T = {}", fmt_f64(self.total_time)),
            format!("# steps = {}", self.steps),
            format!("# strict = {}", self.strict),
            format!("# verify_level = {}", self.verify_level.name()),
        ];
        if let Some(grid) = &self.grid {
            lines.push(format!("# grid = {}", grid.spec_string()));
        }
        if !self.gamma_list.is_empty() {
            let list: Vec<String> = self.gamma_list.iter().map(|g| fmt_f64(*g)).collect();
            lines.push(format!("# gamma_list = {}", list.join(",")));
        }
        lines
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = GridSpec::parse("lambda:0.5:1.5:201").unwrap();
        assert_eq!(g.var, SweptVar::Lambda);
        assert_eq!(g.count, 201);
        assert!(GridSpec::parse("lambda:2:1:10").is_err());
        assert!(GridSpec::parse("lambda:0:1:1").is_err());
        assert!(GridSpec::parse("bogus:0:1:10").is_err());
        assert!(GridSpec::parse("lambda:0:1").is_err());
    }

    #[test]
    fn grid_values_hit_endpoints() {
        let g = GridSpec::parse("lambda:0.5:1.5:201").unwrap();
        let v = g.values();
        assert_eq!(v.len(), 201);
        assert_eq!(v[0], 0.5);
        assert_eq!(*v.last().unwrap(), 1.5);
        assert!((v[80] - 0.9).abs() < 1e-15);
    }

    #[test]
    fn n_grid_rounds_even() {
        let g = GridSpec::parse("N:128:1024:4").unwrap();
        for v in g.values() {
            assert_eq!(v as i64 % 2, 0);
        }
    }

    #[test]
    fn precedence_flags_over_file_over_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.toml");
        std::fs::write(&path, "lambda = 2.5\ngamma = 0.3\n").unwrap();
        let overrides = Overrides {
            gamma: Some(0.9),
            ..Default::default()
        };
        let cfg = resolve(&overrides, Some(&path)).unwrap();
        assert_eq!(cfg.lambda, 2.5); // file beats default
        assert_eq!(cfg.gamma, 0.9); // flag beats file
        assert_eq!(cfg.n_sites, 400); // default survives
    }

    #[test]
    fn unknown_config_key_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.toml");
        std::fs::write(&path, "lambdaa = 2.5\n").unwrap();
        assert!(resolve(&Overrides::default(), Some(&path)).is_err());
    }
}
