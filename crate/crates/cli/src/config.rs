//! Flat `key = value` experiment files.
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! Values are SI numbers except `run.transit_convention`. Every key may
//! appear at most once; `--set key=value` on the command line overrides the
//! file.
//!
//! | key                       | unit     | meaning                          |
//! |---------------------------|----------|----------------------------------|
//! | `molecule.polarizability` | C·m²/V   | static polarizability            |
//! | `molecule.size`           | m        | diameter                         |
//! | `molecule.velocity`       | m/s      | forward velocity                 |
//! | `molecule.mass`           | kg       | mass                             |
//! | `laser.power`             | W        | grating laser power              |
//! | `laser.sigma_y`           | m        | waist across the beam            |
//! | `laser.sigma_z`           | m        | waist along the flight direction |
//! | `laser.period`            | m        | grating period                   |
//! | `cavity.L`                | m        | plate separation                 |
//! | `cavity.k_max`            | 1/m      | mode cutoff wavenumber           |
//! | `run.transit_convention`  |          | `sigma_over_v` or `two_sigma_over_v` (optional) |

use std::collections::BTreeMap;
use std::path::Path;

use vdl_core::feasibility::{CavityConfig, LaserConfig, MoleculeSpec, TransitConvention};

use crate::error::{CliError, CliResult};

pub const REQUIRED_KEYS: [&str; 10] = [
    "molecule.polarizability",
    "molecule.size",
    "molecule.velocity",
    "molecule.mass",
    "laser.power",
    "laser.sigma_y",
    "laser.sigma_z",
    "laser.period",
    "cavity.L",
    "cavity.k_max",
];

pub const TRANSIT_KEY: &str = "run.transit_convention";

fn is_known(key: &str) -> bool {
    key == TRANSIT_KEY || REQUIRED_KEYS.contains(&key)
}

/// Raw assignments in key order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str, origin: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = split_assignment(line)
                .ok_or_else(|| CliError::Usage(format!("{origin}:{}: expected `key = value`, got `{line}`", i + 1)))?;
            if !is_known(key) {
                return Err(CliError::Usage(format!("{origin}:{}: unknown key `{key}`", i + 1)));
            }
            if values.insert(key.to_string(), value.to_string()).is_some() {
                return Err(CliError::Usage(format!("{origin}:{}: key `{key}` given twice", i + 1)));
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Apply `key=value` overrides from the command line.
    pub fn override_with(&mut self, assignments: &[String]) -> CliResult<()> {
        for a in assignments {
            let (key, value) = split_assignment(a)
                .ok_or_else(|| CliError::Usage(format!("--set expects key=value, got `{a}`")))?;
            if !is_known(key) {
                return Err(CliError::Usage(format!("--set: unknown key `{key}`")));
            }
            self.values.insert(key.to_string(), value.to_string());
        }
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    fn missing(&self) -> Vec<&'static str> {
        REQUIRED_KEYS.iter().copied().filter(|k| !self.values.contains_key(*k)).collect()
    }

    fn number(&self, key: &str) -> CliResult<f64> {
        let raw = &self.values[key];
        let v: f64 = raw
            .parse()
            .map_err(|_| CliError::Usage(format!("`{key}` must be a number, got `{raw}`")))?;
        if !v.is_finite() {
            return Err(CliError::Usage(format!("`{key}` must be finite, got `{raw}`")));
        }
        Ok(v)
    }

    fn transit(&self) -> CliResult<TransitConvention> {
        match self.values.get(TRANSIT_KEY).map(String::as_str) {
            None | Some("sigma_over_v") => Ok(TransitConvention::SigmaOverV),
            Some("two_sigma_over_v") => Ok(TransitConvention::TwoSigmaOverV),
            Some(other) => Err(CliError::Usage(format!(
                "`{TRANSIT_KEY}` must be sigma_over_v or two_sigma_over_v, got `{other}`"
            ))),
        }
    }

    /// Build the experiment description, naming every missing key at once.
    pub fn experiment(&self, name: &str) -> CliResult<Experiment> {
        let missing = self.missing();
        if !missing.is_empty() {
            return Err(CliError::Usage(format!("missing required keys: {}", missing.join(", "))));
        }
        Ok(Experiment {
            molecule: MoleculeSpec {
                name: name.to_string(),
                polarizability: self.number("molecule.polarizability")?,
                size: self.number("molecule.size")?,
                mass: self.number("molecule.mass")?,
                velocity: self.number("molecule.velocity")?,
            },
            laser: LaserConfig {
                power: self.number("laser.power")?,
                sigma_y: self.number("laser.sigma_y")?,
                sigma_z: self.number("laser.sigma_z")?,
                grating_period: self.number("laser.period")?,
            },
            cavity: CavityConfig {
                plate_separation: self.number("cavity.L")?,
                cutoff_wavenumber: self.number("cavity.k_max")?,
            },
            transit: self.transit()?,
        })
    }
}

fn split_assignment(s: &str) -> Option<(&str, &str)> {
    let (k, v) = s.split_once('=')?;
    let (k, v) = (k.trim(), v.trim());
    (!k.is_empty() && !v.is_empty()).then_some((k, v))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub molecule: MoleculeSpec,
    pub laser: LaserConfig,
    pub cavity: CavityConfig,
    pub transit: TransitConvention,
}
