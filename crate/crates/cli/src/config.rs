use std::path::Path;

use prdesc_core::galois::{FragmentParams, PartitionConfig};
use prdesc_core::universes::RuleOptions;
use prdesc_core::{Budget, Caps, EquivConfig, Universe};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

/// Settings shared by every subcommand. Keys of the JSON config file match
/// the long flag names with `_` for `-`.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub grid: u64,
    pub steps: u64,
    pub bits: u64,
    pub caps_size: usize,
    pub caps_count: usize,
    pub format: Format,
    pub seed: u64,
    pub universe: Universe,
    pub max_size: usize,
    pub max_width: usize,
    pub allow_rec: bool,
    pub capacity: usize,
    pub parametric_nno: bool,
}

pub const DEFAULT_SEED: u64 = 0x5eed;

impl Default for Config {
    fn default() -> Self {
        let budget = Budget::default();
        let caps = Caps::default();
        let frag = FragmentParams::default();
        Config {
            grid: frag.grid,
            steps: budget.max_steps,
            bits: budget.max_bits,
            caps_size: caps.size,
            caps_count: caps.count,
            format: Format::Text,
            seed: DEFAULT_SEED,
            universe: Universe::Cat,
            max_size: frag.max_size,
            max_width: frag.max_width,
            allow_rec: frag.allow_rec,
            capacity: frag.capacity,
            parametric_nno: false,
        }
    }
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bounds = [
            ("grid", self.grid as usize),
            ("steps", self.steps as usize),
            ("bits", self.bits as usize),
            ("caps-size", self.caps_size),
            ("caps-count", self.caps_count),
            ("max-size", self.max_size),
            ("max-width", self.max_width),
            ("capacity", self.capacity),
        ];
        match bounds.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(CliError::Usage(format!("{name} must be positive"))),
            None => Ok(()),
        }
    }

    pub fn budget(&self) -> Budget {
        Budget {
            max_steps: self.steps,
            max_bits: self.bits,
        }
    }

    pub fn caps(&self) -> Caps {
        Caps {
            size: self.caps_size,
            count: self.caps_count,
        }
    }

    pub fn rules(&self) -> RuleOptions {
        RuleOptions {
            parametric_nno: self.parametric_nno,
        }
    }

    pub fn equiv(&self) -> EquivConfig {
        EquivConfig {
            caps: self.caps(),
            grid: self.grid,
            budget: self.budget(),
            rules: self.rules(),
        }
    }

    pub fn partitions(&self) -> PartitionConfig {
        PartitionConfig {
            caps: self.caps(),
            rules: self.rules(),
            budget: self.budget(),
        }
    }

    pub fn fragment(&self) -> FragmentParams {
        FragmentParams {
            max_size: self.max_size,
            max_width: self.max_width,
            allow_rec: self.allow_rec,
            grid: self.grid,
            capacity: self.capacity,
        }
    }
}
