//! Scenario runner for `cartan-core`: reads a JSON scenario, verifies the
//! operator-field conditions for its test function, answers convergence
//! queries and writes tables and curve data.

pub mod config;
pub mod output;
pub mod run;

use std::path::Path;

use anyhow::Context;

pub use config::{ScenarioConfig, ValidationErrors};

/// Scenarios shipped with the binary, addressable by name.
pub const BUNDLED: [(&str, &str); 3] = [
    ("m2-default", include_str!("../scenarios/m2-default.json")),
    ("m3-default", include_str!("../scenarios/m3-default.json")),
    ("m2xm2-gamma1", include_str!("../scenarios/m2xm2-gamma1.json")),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

/// Reads a scenario from a file path, or by bundled name when no such
/// file exists.
pub fn load_scenario(arg: &str) -> anyhow::Result<ScenarioConfig> {
    let path = Path::new(arg);
    let text = if path.exists() {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    } else if let Some(text) = bundled(arg) {
        text.to_string()
    } else {
        let names: Vec<&str> = BUNDLED.iter().map(|(n, _)| *n).collect();
        anyhow::bail!("{arg}: no such file and not a bundled scenario ({})", names.join(", "));
    };
    ScenarioConfig::from_json(&text).with_context(|| format!("parsing {arg}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_scenarios_validate() {
        for (name, _) in BUNDLED {
            let c = load_scenario(name).unwrap();
            assert_eq!(c.name, name);
            c.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn unknown_scenario() {
        assert!(load_scenario("no-such-scenario").is_err());
    }
}
