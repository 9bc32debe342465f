//! Reproduction configs for the three worked examples of the test problem.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use super::{parse_config_str, ConfigError, SweepConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Demo {
    /// Quasi-Newton, no hybrid switch, from `(5.21, 5.21)`.
    Table1,
    /// Hybrid quasi-Newton with `δ = 7`, from `(4.78, 4.78)`.
    Table2,
    /// Hybrid pseudo-Newton with `ε = 1e-4`, `δ = 13`, from `(14.55, 14.55)`.
    Table3,
}

impl Demo {
    pub const ALL: [Demo; 3] = [Demo::Table1, Demo::Table2, Demo::Table3];

    pub fn name(self) -> &'static str {
        match self {
            Demo::Table1 => "table1",
            Demo::Table2 => "table2",
            Demo::Table3 => "table3",
        }
    }

    /// The shipped JSON document.
    pub fn config_text(self) -> &'static str {
        match self {
            Demo::Table1 => include_str!("../../configs/table1.json"),
            Demo::Table2 => include_str!("../../configs/table2.json"),
            Demo::Table3 => include_str!("../../configs/table3.json"),
        }
    }

    pub fn config(self) -> SweepConfig {
        parse_config_str(self.config_text(), Path::new(".")).expect("shipped demo config is valid")
    }
}

impl fmt::Display for Demo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Demo {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Demo::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| ConfigError::new("demo", format!("unknown demo {s:?} (expected table1, table2 or table3)")))
    }
}
