//! Run settings: an optional TOML file overlaid by command-line flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use zernodes_core::domains::DEFAULT_EPSILON;
use zernodes_core::{Domain, Family};

/// Overrides the node-file directory of the config file (flags still win).
pub const NODE_DIR_ENV: &str = "ZERNODES_NODE_DIR";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid config: {0}")]
    Toml(#[from] toml::de::Error),

    #[error("invalid order range {0:?}; use `n`, `a..b`, `a..=b` or a comma list")]
    Orders(String),

    #[error("unknown domain {0:?}; expected disk, hexagon, ellipse or annulus")]
    Domain(String),

    #[error("unknown basis family {0:?}; expected one of Z, K, H, E, O, C")]
    Family(String),

    #[error(transparent)]
    Core(#[from] zernodes_core::Error),
}

/// Every key that a config file may set. Unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub orders: Option<String>,
    pub n: Option<u32>,
    pub schemes: Option<Vec<String>>,
    pub bases: Option<Vec<String>>,
    pub domain: Option<String>,
    /// Ellipse semi-major axis or annulus outer radius.
    #[serde(rename = "A")]
    pub major: Option<f64>,
    /// Ellipse semi-minor axis.
    #[serde(rename = "B")]
    pub minor: Option<f64>,
    /// Annulus inner radius.
    #[serde(rename = "a")]
    pub inner: Option<f64>,
    pub epsilon: Option<f64>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub strength: Option<f64>,
    pub output: Option<PathBuf>,
    pub node_dir: Option<PathBuf>,
    pub from_file: Option<PathBuf>,
    pub radial: Option<usize>,
    pub angular: Option<usize>,
    pub mesh_factor: Option<usize>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),*) => {
        RunConfig { $($field: $top.$field.or($base.$field)),* }
    };
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        let base = self;
        overlay!(base, top; orders, n, schemes, bases, domain, major, minor, inner,
            epsilon, seed, trials, strength, output, node_dir, from_file, radial,
            angular, mesh_factor)
    }

    /// Node-file directory: `flag_dir`, then the environment, then the file,
    /// then `nodes`.
    pub fn resolve_node_dir(&self, flag_dir: Option<&Path>) -> PathBuf {
        if let Some(d) = flag_dir {
            return d.to_path_buf();
        }
        if let Some(d) = std::env::var_os(NODE_DIR_ENV).filter(|d| !d.is_empty()) {
            return PathBuf::from(d);
        }
        self.node_dir.clone().unwrap_or_else(|| PathBuf::from("nodes"))
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon.unwrap_or(DEFAULT_EPSILON)
    }

    /// The domain called `name` with this config's parameters. Ellipses
    /// default to `A = 2, B = 1`, annuli to `a = 0.5, A = 1`.
    pub fn domain_named(&self, name: &str) -> Result<Domain, ConfigError> {
        Ok(match name.to_ascii_lowercase().as_str() {
            "disk" => Domain::Disk,
            "hexagon" => Domain::Hexagon,
            "ellipse" => Domain::ellipse(self.major.unwrap_or(2.0), self.minor.unwrap_or(1.0))?,
            "annulus" => Domain::annulus(self.inner.unwrap_or(0.5), self.major.unwrap_or(1.0))?,
            _ => return Err(ConfigError::Domain(name.to_string())),
        })
    }

    /// The domain on which `family` lives.
    pub fn domain_for(&self, family: Family) -> Result<Domain, ConfigError> {
        self.domain_named(match family {
            Family::Z => "disk",
            Family::K | Family::H => "hexagon",
            Family::E => "ellipse",
            Family::O | Family::C => "annulus",
        })
    }
}

/// Parses `7`, `2..20` (inclusive, as are all ranges here), `2..=20` or
/// `2,5,9`.
pub fn parse_orders(s: &str) -> Result<Vec<u32>, ConfigError> {
    let err = || ConfigError::Orders(s.to_string());
    let s = s.trim();
    if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: u32 = lo.trim().parse().map_err(|_| err())?;
        let hi: u32 = hi.trim().parse().map_err(|_| err())?;
        if lo > hi {
            return Err(err());
        }
        return Ok((lo..=hi).collect());
    }
    let orders = s
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| err()))
        .collect::<Result<Vec<_>, _>>()?;
    if orders.is_empty() {
        return Err(err());
    }
    Ok(orders)
}

pub fn parse_families(names: &[String]) -> Result<Vec<Family>, ConfigError> {
    names
        .iter()
        .map(|n| Family::parse(n.trim()).ok_or_else(|| ConfigError::Family(n.clone())))
        .collect()
}

/// Splits comma-separated flag values, so `--schemes ocs,cuyt` and repeated
/// flags both work.
pub fn split_list(values: &[String]) -> Vec<String> {
    values
        .iter()
        .flat_map(|v| v.split(','))
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(String::from)
        .collect()
}
