//! Declarative sweep description, read from a single JSON document.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qpl_core::clifford_phase::LatticeLayout;
use qpl_core::haar::{k_for_rate, NoiseFamily};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ensemble {
    #[serde(rename = "clifford2d")]
    Clifford2d,
    HaarAllToAll,
}

impl Ensemble {
    pub fn as_str(self) -> &'static str {
        match self {
            Ensemble::Clifford2d => "clifford2d",
            Ensemble::HaarAllToAll => "haar_all_to_all",
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Ensemble {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "clifford2d" => Ok(Ensemble::Clifford2d),
            "haar_all_to_all" => Ok(Ensemble::HaarAllToAll),
            _ => Err(format!("unknown ensemble '{s}'")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    #[default]
    Log,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Default for PGrid {
    fn default() -> Self {
        Self {
            min: 0.005,
            max: 0.1,
            count: 40,
            spacing: Spacing::Log,
        }
    }
}

impl PGrid {
    /// Grid values in increasing order. Endpoints are exact.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.min;
                }
                if i == self.count - 1 {
                    return self.max;
                }
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.min + t * (self.max - self.min),
                    Spacing::Log => (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

/// Encoding rate `k/n`, given either as a number or as a string `"a/b"`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Rate(pub f64);

impl Rate {
    pub fn k_for(self, n: usize) -> usize {
        k_for_rate(n, self.0)
    }
}

impl FromStr for Rate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("rate '{s}' is not a number or a fraction a/b");
        let v = match s.split_once('/') {
            Some((a, b)) => {
                let a: f64 = a.trim().parse().map_err(|_| bad())?;
                let b: f64 = b.trim().parse().map_err(|_| bad())?;
                a / b
            }
            None => s.trim().parse().map_err(|_| bad())?,
        };
        Ok(Rate(v))
    }
}

impl<'de> Deserialize<'de> for Rate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Rate(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub ensemble: Ensemble,
    pub noise_family: NoiseFamily,
    pub n_list: Vec<usize>,
    pub rate: Rate,
    pub d_list: Vec<usize>,
    #[serde(default)]
    pub p_grid: PGrid,
    /// Trajectories per cell; Clifford only.
    #[serde(default)]
    pub samples: Option<usize>,
    pub master_seed: u64,
    pub output_path: PathBuf,
}

/// One `(n, d, p)` point of the sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub p_index: usize,
    pub p: f64,
}

impl SweepConfig {
    /// Parses and validates. JSON syntax errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SweepConfig = serde_json::from_str(text).map_err(|e| {
            CliError::Config(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; a relative `output_path` is taken relative to
    /// the directory holding the file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        if cfg.output_path.is_relative() {
            if let Some(dir) = path.parent() {
                cfg.output_path = dir.join(&cfg.output_path);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let err = |field: &str, msg: String| Err(CliError::Config(format!("{field}: {msg}")));
        if self.ensemble == Ensemble::Clifford2d && self.noise_family == NoiseFamily::AmplitudeDamping {
            return err(
                "noise_family",
                "clifford2d supports depolarizing noise only (amplitude damping is not a stabilizer channel)".into(),
            );
        }
        if self.n_list.is_empty() {
            return err("n_list", "must not be empty".into());
        }
        if self.d_list.is_empty() {
            return err("d_list", "must not be empty".into());
        }
        if has_duplicates(&self.n_list) {
            return err("n_list", "contains duplicates".into());
        }
        if has_duplicates(&self.d_list) {
            return err("d_list", "contains duplicates".into());
        }
        if !(self.rate.0 > 0.0 && self.rate.0 <= 1.0) {
            return err("rate", format!("{} outside (0, 1]", self.rate.0));
        }
        for (i, &n) in self.n_list.iter().enumerate() {
            let field = format!("n_list[{i}]");
            match self.ensemble {
                Ensemble::HaarAllToAll if n < 2 || n % 2 == 1 => {
                    return err(&field, format!("haar_all_to_all needs even n >= 2, got {n}"));
                }
                Ensemble::Clifford2d => {
                    if let Err(e) = LatticeLayout::for_qubits(n) {
                        return err(&field, format!("no lattice for n = {n}: {e}"));
                    }
                }
                _ => {}
            }
            if self.rate.k_for(n) > n {
                return err("rate", format!("k exceeds n = {n}"));
            }
        }
        let g = &self.p_grid;
        let p_cap = match self.ensemble {
            Ensemble::Clifford2d => 0.75,
            Ensemble::HaarAllToAll => 1.0,
        };
        if g.count == 0 {
            return err("p_grid.count", "must be at least 1".into());
        }
        if !(g.min.is_finite() && g.max.is_finite()) || g.min < 0.0 || g.max > p_cap || g.min > g.max {
            return err("p_grid", format!("need 0 <= min <= max <= {p_cap}, got [{}, {}]", g.min, g.max));
        }
        if g.count > 1 && g.min == g.max {
            return err("p_grid", "min equals max but count > 1".into());
        }
        if g.spacing == Spacing::Log && g.min <= 0.0 {
            return err("p_grid.min", "log spacing needs min > 0".into());
        }
        match (self.ensemble, self.samples) {
            (Ensemble::Clifford2d, None) => return err("samples", "required for clifford2d".into()),
            (Ensemble::Clifford2d, Some(0)) => return err("samples", "must be at least 1".into()),
            _ => {}
        }
        if self.output_path.as_os_str().is_empty() {
            return err("output_path", "must not be empty".into());
        }
        Ok(())
    }

    /// Every cell in output order: by `n`, then `d`, then `p`.
    pub fn cells(&self) -> Vec<Cell> {
        let grid = self.p_grid.values();
        let mut ns = self.n_list.clone();
        ns.sort_unstable();
        let mut ds = self.d_list.clone();
        ds.sort_unstable();
        let mut out = Vec::with_capacity(ns.len() * ds.len() * grid.len());
        for &n in &ns {
            let k = self.rate.k_for(n);
            for &d in &ds {
                for (p_index, &p) in grid.iter().enumerate() {
                    out.push(Cell { n, k, d, p_index, p });
                }
            }
        }
        out
    }

    pub fn checkpoint_path(&self) -> PathBuf {
        let mut s = self.output_path.clone().into_os_string();
        s.push(".ckpt");
        PathBuf::from(s)
    }
}

fn has_duplicates(v: &[usize]) -> bool {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.windows(2).any(|w| w[0] == w[1])
}
