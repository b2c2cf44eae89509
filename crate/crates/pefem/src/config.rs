//! Experiment configuration: a `key = value` text file plus overrides.
//!
//! ```text
//! # quadratic weak Dirichlet on the disk
//! domain = disk
//! method = pefem-dirichlet-weak
//! k = 2
//! levels = 5
//! ```
//!
//! Keys: `domain`, `method`, `k`, `levels` (count), `first_level`,
//! `c_theta`, `preset`, `seed`, `out`, `deterministic`. The preset defaults
//! to `convex-cos` on the disk and `nonconvex-rational` on the square with
//! a hole.

use pefem_core::analyze::{Domain, Preset, StudyPlan};
use pefem_core::pefem::{Method, DEFAULT_C_THETA};
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("`{key}`: {message}")]
    Value { key: String, message: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub domain: Domain,
    pub method: Method,
    pub degree: usize,
    pub levels: usize,
    pub first_level: usize,
    pub c_theta: f64,
    pub preset: Preset,
    pub seed: u64,
    pub out: PathBuf,
    pub deterministic: bool,
}

impl ExperimentConfig {
    pub fn new(domain: Domain, method: Method, degree: usize, levels: usize) -> Self {
        Self {
            domain,
            method,
            degree,
            levels,
            first_level: 0,
            c_theta: DEFAULT_C_THETA,
            preset: default_preset(domain),
            seed: 0,
            out: PathBuf::from("out"),
            deterministic: false,
        }
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line: i + 1, message: format!("expected `key = value`, found `{body}`") })?;
            let key = key.trim();
            if pairs.iter().any(|(k, _): &(String, String)| k == key) {
                return Err(ConfigError::Syntax { line: i + 1, message: format!("duplicate key `{key}`") });
            }
            pairs.push((key.to_string(), value.trim().to_string()));
        }

        let get = |k: &str| pairs.iter().find(|(key, _)| key == k).map(|(_, v)| v.as_str());
        let domain: Domain = parse_value("domain", get("domain").ok_or(ConfigError::Missing("domain"))?)?;
        let method: Method = parse_value("method", get("method").ok_or(ConfigError::Missing("method"))?)?;
        let degree = parse_value("k", get("k").ok_or(ConfigError::Missing("k"))?)?;
        let levels = parse_value("levels", get("levels").ok_or(ConfigError::Missing("levels"))?)?;
        let mut cfg = Self::new(domain, method, degree, levels);
        for (key, value) in &pairs {
            match key.as_str() {
                "domain" | "method" | "k" | "levels" => {}
                _ => cfg.set(key, value)?,
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Applies one `key = value` setting, as from the file.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "domain" => {
                let explicit_preset = self.preset != default_preset(self.domain);
                self.domain = parse_value(key, value)?;
                if !explicit_preset {
                    self.preset = default_preset(self.domain);
                }
            }
            "method" => self.method = parse_value(key, value)?,
            "k" => self.degree = parse_value(key, value)?,
            "levels" => self.levels = parse_value(key, value)?,
            "first_level" => self.first_level = parse_value(key, value)?,
            "c_theta" => self.c_theta = parse_value(key, value)?,
            "preset" => self.preset = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "deterministic" => self.deterministic = parse_value(key, value)?,
            _ => return Err(ConfigError::Value { key: key.into(), message: "unknown key".into() }),
        }
        Ok(())
    }

    pub fn plan(&self) -> StudyPlan {
        let mut plan = StudyPlan::new(
            self.domain,
            self.method,
            self.preset,
            self.degree,
            (self.first_level..self.first_level + self.levels).collect(),
        );
        plan.c_theta = self.c_theta;
        plan.seed = self.seed;
        plan
    }

    /// Checks the plan invariants: `k ∈ 1..=4`, at least two levels,
    /// positive `c_theta`.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.plan().validate().map_err(|e| ConfigError::Value { key: "config".into(), message: e.to_string() })
    }

    /// Base name for output files, e.g. `disk_pefem-neumann_k3`.
    pub fn stem(&self) -> String {
        format!("{}_{}_k{}", self.domain, self.method, self.degree)
    }
}

fn default_preset(domain: Domain) -> Preset {
    match domain {
        Domain::Disk => Preset::ConvexCos,
        Domain::SquareHole => Preset::NonconvexRational,
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::Value { key: key.into(), message: format!("`{value}`: {e}") })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_file() {
        let cfg = ExperimentConfig::parse(
            "# study\ndomain = square_hole\nmethod = pefem-neumann\nk = 3\nlevels = 4\nc_theta = 20 # stiffer\nseed=9\nout = results\ndeterministic = true\n",
        )
        .unwrap();
        assert_eq!(cfg.domain, Domain::SquareHole);
        assert_eq!(cfg.method, Method::PefemNeumann);
        assert_eq!(cfg.preset, Preset::NonconvexRational);
        assert_eq!((cfg.degree, cfg.levels, cfg.seed), (3, 4, 9));
        assert_eq!(cfg.c_theta, 20.0);
        assert_eq!(cfg.out, PathBuf::from("results"));
        assert!(cfg.deterministic);
        assert_eq!(cfg.plan().levels, vec![0, 1, 2, 3]);
    }

    #[test]
    fn errors_carry_location() {
        let err = ExperimentConfig::parse("domain = disk\nmethod pefem-neumann\n").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 2, .. }), "{err}");
        let err = ExperimentConfig::parse("domain = disk\nmethod = pefem-neumann\nk = 2\n").unwrap_err();
        assert!(matches!(err, ConfigError::Missing("levels")));
        let err = ExperimentConfig::parse("domain = torus\nmethod = standard\nk = 2\nlevels = 3\n").unwrap_err();
        assert!(err.to_string().contains("domain"));
        let err = ExperimentConfig::parse("domain = disk\nmethod = standard\nk = 2\nlevels = 3\ncolour = red\n").unwrap_err();
        assert!(err.to_string().contains("colour"));
    }

    #[test]
    fn overrides_and_validation() {
        let mut cfg = ExperimentConfig::new(Domain::Disk, Method::Standard, 2, 4);
        cfg.set("domain", "square_hole").unwrap();
        assert_eq!(cfg.preset, Preset::NonconvexRational);
        cfg.set("k", "5").unwrap();
        assert!(cfg.validate().is_err());
        cfg.set("k", "4").unwrap();
        cfg.set("levels", "1").unwrap();
        assert!(cfg.validate().is_err());
        cfg.set("levels", "2").unwrap();
        assert!(cfg.validate().is_ok());
    }
}
