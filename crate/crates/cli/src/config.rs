//! Flat `key = value` simulation config files.
//!
//! Blank lines and lines starting with `#` are ignored. Recognised keys and
//! their defaults:
//!
//! | key | default |
//! |---|---|
//! | `particles` | 2 |
//! | `dimension` | 1 |
//! | `box_length` | 1.0 |
//! | `potential` | `cosine_well` (`ideal`, `cosine_well`, `lennard_jones`) |
//! | `epsilon` | 1.0 |
//! | `sigma` | 1.0 (Lennard-Jones only) |
//! | `r_cut` | 2.5 (Lennard-Jones only) |
//! | `shifted` | true (Lennard-Jones only) |
//! | `beta` | 1.0 |
//! | `mass` | 1.0 |
//! | `sweeps` | 501000 |
//! | `burn_in` | 1000 |
//! | `thinning` | 10 |
//! | `max_displacement` | `box_length / 2` |
//! | `seed` | 42 |
//! | `output_prefix` | `trajectory` |

use std::collections::BTreeMap;
use std::path::Path;

use copent_core::{BoxSpec, PotentialSpec, SimParams, UnitsSpec};

use crate::error::{CliError, Result};

pub const KNOWN_KEYS: [&str; 16] = [
    "particles",
    "dimension",
    "box_length",
    "potential",
    "epsilon",
    "sigma",
    "r_cut",
    "shifted",
    "beta",
    "mass",
    "sweeps",
    "burn_in",
    "thinning",
    "max_displacement",
    "seed",
    "output_prefix",
];

/// Environment variable that overrides the config seed (a `--seed` flag
/// overrides both).
pub const SEED_ENV: &str = "COPENT_SEED";

/// A fully resolved simulation setup.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub params: SimParams,
    pub potential: PotentialSpec,
    pub sim_box: BoxSpec,
    pub units: UnitsSpec,
    pub output_prefix: String,
}

pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    let mut unknown = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Parameter(format!(
                "line {}: expected key = value, got '{line}'",
                lineno + 1
            ))
        })?;
        let key = key.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            unknown.push(key.clone());
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(CliError::Parameter(format!(
                "line {}: duplicate key '{key}'",
                lineno + 1
            )));
        }
    }
    if !unknown.is_empty() {
        return Err(CliError::Parameter(format!(
            "unknown config keys: {}",
            unknown.join(", ")
        )));
    }
    Ok(map)
}

fn get<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str, default: T) -> Result<T> {
    match map.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| CliError::Parameter(format!("config key '{key}': cannot parse '{v}'"))),
    }
}

impl SimConfig {
    /// Resolves a config map. `seed_override` is the already-resolved
    /// flag/env seed, if any.
    pub fn from_map(map: &BTreeMap<String, String>, seed_override: Option<u64>) -> Result<Self> {
        let box_length: f64 = get(map, "box_length", 1.0)?;
        let sim_box = BoxSpec::new(get(map, "dimension", 1)?, box_length)?;
        let epsilon: f64 = get(map, "epsilon", 1.0)?;
        let potential = match map
            .get("potential")
            .map(String::as_str)
            .unwrap_or("cosine_well")
        {
            "ideal" => PotentialSpec::Ideal,
            "cosine_well" => PotentialSpec::CosineWell { epsilon },
            "lennard_jones" => PotentialSpec::LennardJones {
                epsilon,
                sigma: get(map, "sigma", 1.0)?,
                r_cut: get(map, "r_cut", 2.5)?,
                shifted: get(map, "shifted", true)?,
            },
            other => {
                return Err(CliError::Parameter(format!(
                    "unknown potential '{other}' (ideal, cosine_well, lennard_jones)"
                )))
            }
        };
        potential.validate()?;
        let params = SimParams {
            particles: get(map, "particles", 2)?,
            beta: get(map, "beta", 1.0)?,
            sweeps: get(map, "sweeps", 501_000)?,
            burn_in: get(map, "burn_in", 1000)?,
            thinning: get(map, "thinning", 10)?,
            max_displacement: get(map, "max_displacement", 0.5 * box_length)?,
            seed: match seed_override {
                Some(s) => s,
                None => get(map, "seed", 42)?,
            },
        };
        params.validate()?;
        let units = UnitsSpec {
            mass: get(map, "mass", 1.0)?,
            ..UnitsSpec::default()
        };
        units.validate()?;
        Ok(Self {
            params,
            potential,
            sim_box,
            units,
            output_prefix: map
                .get("output_prefix")
                .cloned()
                .unwrap_or_else(|| "trajectory".into()),
        })
    }

    pub fn load(path: &Path, seed_override: Option<u64>) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_map(&parse_key_values(&text)?, seed_override)
    }

    /// Every key with its resolved value.
    pub fn resolved(&self) -> BTreeMap<String, String> {
        let p = &self.params;
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("particles", p.particles.to_string());
        put("dimension", self.sim_box.dimension.to_string());
        put("box_length", self.sim_box.side_length.to_string());
        put("beta", p.beta.to_string());
        put("mass", self.units.mass.to_string());
        put("sweeps", p.sweeps.to_string());
        put("burn_in", p.burn_in.to_string());
        put("thinning", p.thinning.to_string());
        put("max_displacement", p.max_displacement.to_string());
        put("seed", p.seed.to_string());
        put("output_prefix", self.output_prefix.clone());
        match self.potential {
            PotentialSpec::Ideal => put("potential", "ideal".into()),
            PotentialSpec::CosineWell { epsilon } => {
                put("potential", "cosine_well".into());
                put("epsilon", epsilon.to_string());
            }
            PotentialSpec::LennardJones {
                epsilon,
                sigma,
                r_cut,
                shifted,
            } => {
                put("potential", "lennard_jones".into());
                put("epsilon", epsilon.to_string());
                put("sigma", sigma.to_string());
                put("r_cut", r_cut.to_string());
                put("shifted", shifted.to_string());
            }
        }
        m
    }
}

/// Seed precedence: explicit flag, then `COPENT_SEED`, then the config.
pub fn resolve_seed(flag: Option<u64>, env_value: Option<&str>) -> Result<Option<u64>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match env_value {
        None => Ok(None),
        Some(v) => v.trim().parse().map(Some).map_err(|_| {
            CliError::Parameter(format!("{SEED_ENV}='{v}' is not an unsigned integer"))
        }),
    }
}
