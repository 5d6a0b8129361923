//! Strict JSON run configuration.
//!
//! Unknown fields are rejected so that typos surface as errors instead of
//! silently applied defaults. Epsilon accepts either a plain number or
//! `{"exp": x}` meaning e^{-x}, which keeps extremely small thresholds
//! expressible without underflow in the written config.

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use walkmix::families::{FamilyPreset, PairRule};
use walkmix::group::{AbelianGroup, WalkSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walk: Option<WalkConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<EpsilonSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimulateConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkConfig {
    pub moduli: Vec<u64>,
    pub generators: Vec<Vec<i64>>,
    #[serde(default)]
    pub require_type: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub kind: String,
    pub sizes: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_rule: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpSpec {
    pub exp: f64,
}

/// A probability level, either literal or as e^{-x}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsilonSpec {
    Value(f64),
    Exp(ExpSpec),
}

impl EpsilonSpec {
    pub fn value(self) -> f64 {
        match self {
            EpsilonSpec::Value(v) => v,
            EpsilonSpec::Exp(e) => (-e.exp).exp(),
        }
    }

    /// -ln(eps), exact for the exponential form.
    pub fn minus_ln(self) -> f64 {
        match self {
            EpsilonSpec::Value(v) => -v.ln(),
            EpsilonSpec::Exp(e) => e.exp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub t: u64,
    pub samples: u64,
    pub seed: u64,
}

pub const DEFAULT_EPSILON: f64 = 0.05;

impl RunConfig {
    pub fn parse(document: &str) -> anyhow::Result<Self> {
        serde_json::from_str(document).context("invalid configuration")
    }

    pub fn epsilon_value(&self) -> f64 {
        self.epsilon.map(EpsilonSpec::value).unwrap_or(DEFAULT_EPSILON)
    }

    pub fn epsilon_minus_ln(&self) -> f64 {
        self.epsilon
            .map(EpsilonSpec::minus_ln)
            .unwrap_or(-DEFAULT_EPSILON.ln())
    }

    pub fn build_walk(&self) -> anyhow::Result<WalkSpec> {
        let wc = self
            .walk
            .as_ref()
            .context("this subcommand needs a \"walk\" section")?;
        let group = AbelianGroup::new(&wc.moduli)?;
        let gens = wc
            .generators
            .iter()
            .map(|g| group.element(g))
            .collect::<walkmix::Result<Vec<_>>>()?;
        Ok(WalkSpec::new(group, gens, wc.require_type)?)
    }

    pub fn build_family(&self) -> anyhow::Result<FamilyPreset> {
        let fc = self
            .family
            .as_ref()
            .context("this subcommand needs a \"family\" section")?;
        let preset = match fc.kind.as_str() {
            "cycle_single" => FamilyPreset::CycleSingle {
                sizes: fc.sizes.clone(),
            },
            "cycle_pair" => {
                let rule = fc
                    .pair_rule
                    .as_deref()
                    .context("family kind \"cycle_pair\" needs \"pair_rule\"")?;
                FamilyPreset::CyclePair {
                    sizes: fc.sizes.clone(),
                    rule: parse_pair_rule(rule)?,
                }
            }
            "cycle_sqrt" => FamilyPreset::CycleSqrt {
                sizes: fc.sizes.clone(),
            },
            "hypercube" => {
                let dims = fc
                    .sizes
                    .iter()
                    .map(|&d| {
                        if (2..=22).contains(&d) {
                            Ok(d as u32)
                        } else {
                            Err(anyhow::anyhow!("hypercube dimension {d} outside 2..=22"))
                        }
                    })
                    .collect::<anyhow::Result<Vec<_>>>()?;
                FamilyPreset::Hypercube { dims }
            }
            other => bail!("unknown family kind {other:?}"),
        };
        Ok(preset)
    }
}

fn parse_pair_rule(rule: &str) -> anyhow::Result<PairRule> {
    if rule == "sqrt" {
        return Ok(PairRule::Sqrt);
    }
    if let Some(k) = rule.strip_prefix("fixed:") {
        return Ok(PairRule::Fixed(k.parse().context("pair_rule fixed:<k>")?));
    }
    bail!("unknown pair_rule {rule:?} (expected \"sqrt\" or \"fixed:<k>\")")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_walk_config() {
        let cfg = RunConfig::parse(r#"{"walk":{"moduli":[8],"generators":[[1]]}}"#).unwrap();
        let walk = cfg.build_walk().unwrap();
        assert_eq!(walk.group().order(), 8);
        assert_eq!(cfg.epsilon_value(), DEFAULT_EPSILON);
    }

    #[test]
    fn missing_moduli_names_field() {
        let err = RunConfig::parse(r#"{"walk":{"generators":[[1]]}}"#)
            .unwrap_err()
            .root_cause()
            .to_string();
        assert!(err.contains("moduli"), "{err}");
    }

    #[test]
    fn unknown_field_rejected() {
        assert!(RunConfig::parse(r#"{"walk":{"moduli":[8],"generators":[[1]],"bogus":1}}"#).is_err());
        assert!(RunConfig::parse(r#"{"frobnicate":true}"#).is_err());
    }

    #[test]
    fn hypercube_family_config() {
        let cfg =
            RunConfig::parse(r#"{"family":{"kind":"hypercube","sizes":[4,5,6]}}"#).unwrap();
        let preset = cfg.build_family().unwrap();
        assert!(matches!(preset, FamilyPreset::Hypercube { .. }));
    }

    #[test]
    fn epsilon_forms() {
        let cfg = RunConfig::parse(r#"{"epsilon":0.1}"#).unwrap();
        assert_eq!(cfg.epsilon_value(), 0.1);
        let cfg = RunConfig::parse(r#"{"epsilon":{"exp":240}}"#).unwrap();
        assert_eq!(cfg.epsilon_minus_ln(), 240.0);
        assert!(cfg.epsilon_value() < 1e-100);
    }

    #[test]
    fn config_round_trips() {
        let raw = r#"{"walk":{"moduli":[4,6],"generators":[[1,0],[0,1]],"require_type":false},"epsilon":{"exp":12.5},"t_cap":1000,"kappa":2.0,"simulate":{"t":10,"samples":50000,"seed":7}}"#;
        let cfg = RunConfig::parse(raw).unwrap();
        let serialized = serde_json::to_string(&cfg).unwrap();
        let reparsed = RunConfig::parse(&serialized).unwrap();
        assert_eq!(cfg, reparsed);
    }

    #[test]
    fn pair_rules() {
        assert_eq!(parse_pair_rule("sqrt").unwrap(), PairRule::Sqrt);
        assert_eq!(parse_pair_rule("fixed:7").unwrap(), PairRule::Fixed(7));
        assert!(parse_pair_rule("cubic").is_err());
    }
}
