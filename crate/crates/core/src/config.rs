//! Runtime configuration shared by the solver and the command line.

use serde::{Deserialize, Serialize};

/// Which colour pairs count as `adjacent` for reintroductions. For factors
/// of size 2 the two modes coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdjacencyMode {
    /// Any two distinct values of the same coordinate.
    Any,
    /// Additionally require |c - d| = 1.
    Successor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub adjacency: AdjacencyMode,
    /// Allow a reintroduction chain before answering a tap.
    pub reintro_on_remove: bool,
    /// Canonicalize positions under the symmetry group.
    pub symmetry: bool,
    pub node_cap: usize,
    pub time_cap_millis: u64,
    pub threads: usize,
    pub output: OutputFormat,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            adjacency: AdjacencyMode::Any,
            reintro_on_remove: false,
            symmetry: true,
            node_cap: 10_000_000,
            time_cap_millis: 600_000,
            threads: 1,
            output: OutputFormat::Json,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<(), String> {
        if self.node_cap == 0 {
            return Err("node_cap must be positive".into());
        }
        if self.time_cap_millis == 0 {
            return Err("time_cap_millis must be positive".into());
        }
        if self.threads == 0 {
            return Err("threads must be positive".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = Config::default();
        assert_eq!(c.adjacency, AdjacencyMode::Any);
        assert!(!c.reintro_on_remove);
        assert!(c.symmetry);
        assert_eq!(c.node_cap, 10_000_000);
        assert_eq!(c.time_cap_millis, 600_000);
        assert_eq!(c.threads, 1);
        assert_eq!(c.output, OutputFormat::Json);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn partial_config_file() {
        let c: Config = serde_json::from_str(r#"{"adjacency":"successor","threads":4}"#).unwrap();
        assert_eq!(c.adjacency, AdjacencyMode::Successor);
        assert_eq!(c.threads, 4);
        assert!(c.symmetry);
    }
}
