use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::checkers::Limits;
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::random::Seed;
use crate::ratio::Ratio;

/// What a trial decides on `family ∪ G(n, p)`.
///
/// The last three are structural events of the random edges relative to the
/// family layout; they have closed forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Property {
    Hamiltonian,
    Pancyclic,
    Connected,
    #[serde(rename = "t-tough")]
    TTough {
        t: Ratio,
    },
    CircumferenceAtLeast {
        length: usize,
    },
    /// Every component has even order: the empty-set case of Tutte's
    /// condition.
    PerfectMatchingProxy,
    /// No random edge joins two different cliques of the layout.
    NoCrossingEdge,
    /// Some clique of the layout receives no random edge to the rest.
    SomeCliqueIsolated,
    /// Fewer than `bound` vertices of `I` have a random edge into `I ∪ B`.
    IabLinkedBelow {
        bound: usize,
    },
}

impl Property {
    pub fn name(&self) -> String {
        match self {
            Property::Hamiltonian => "hamiltonian".into(),
            Property::Pancyclic => "pancyclic".into(),
            Property::Connected => "connected".into(),
            Property::TTough { t } => format!("{t}-tough"),
            Property::CircumferenceAtLeast { length } => format!("circumference>={length}"),
            Property::PerfectMatchingProxy => "perfect-matching-proxy".into(),
            Property::NoCrossingEdge => "no-crossing-edge".into(),
            Property::SomeCliqueIsolated => "some-clique-isolated".into(),
            Property::IabLinkedBelow { bound } => format!("iab-linked<{bound}"),
        }
    }

    /// Whether the property can only become true as edges are added.
    pub fn is_increasing(&self) -> bool {
        !matches!(
            self,
            Property::NoCrossingEdge
                | Property::SomeCliqueIsolated
                | Property::IabLinkedBelow { .. }
        )
    }
}

/// Edge probabilities of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PGrid {
    List(Vec<f64>),
    Range {
        min: f64,
        max: f64,
        count: usize,
        #[serde(default)]
        log: bool,
    },
}

impl PGrid {
    pub fn values(&self) -> Result<Vec<f64>> {
        let v = match self {
            PGrid::List(v) => v.clone(),
            &PGrid::Range {
                min,
                max,
                count,
                log,
            } => {
                if count == 0 {
                    return Err(Error::input("grid count must be positive"));
                }
                if log && !(min > 0.0) {
                    return Err(Error::input("log grid needs min > 0"));
                }
                if !(min <= max) {
                    return Err(Error::input("grid min exceeds max"));
                }
                if count == 1 {
                    vec![min]
                } else {
                    (0..count)
                        .map(|i| {
                            let f = i as f64 / (count - 1) as f64;
                            if log {
                                (min.ln() + f * (max.ln() - min.ln())).exp()
                            } else {
                                min + f * (max - min)
                            }
                        })
                        .collect()
                }
            }
        };
        if v.is_empty() {
            return Err(Error::input("empty p grid"));
        }
        if v.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::input("grid probabilities must lie in [0, 1]"));
        }
        if v.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(Error::input("p grid must be sorted ascending"));
        }
        Ok(v)
    }
}

fn default_trials() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub family: FamilySpec,
    pub property: Property,
    pub p_grid: PGrid,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub base_seed: Seed,
    #[serde(default)]
    pub limits: Limits,
    /// Use the same random graph for trial `i` in every cell, so success
    /// counts are monotone along the grid.
    #[serde(default)]
    pub coupled: bool,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SweepConfig =
            serde_json::from_str(text).map_err(|e| Error::input(format!("sweep config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::input("trials must be at least 1"));
        }
        self.family.layout()?;
        self.p_grid.values()?;
        if let Property::TTough { t } = self.property {
            if t.den == 0 {
                return Err(Error::input("toughness ratio with zero denominator"));
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    /// Seed of trial `trial` in grid cell `cell`.
    pub fn trial_seed(&self, cell: usize, trial: usize) -> Seed {
        let cell = if self.coupled { 0 } else { cell as u64 + 1 };
        self.base_seed.derive(cell, trial as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "family": {"kind": "TwoCliques", "n": 40},
        "property": {"kind": "connected"},
        "p_grid": {"min": 0.001, "max": 0.01, "count": 3, "log": true},
        "trials": 50,
        "base_seed": 7
    }"#;

    #[test]
    fn parses_and_hashes() {
        let cfg = SweepConfig::from_json(SAMPLE).unwrap();
        let v = cfg.p_grid.values().unwrap();
        assert_eq!(v.len(), 3);
        assert!((v[1] - 0.01f64.sqrt() * 0.001f64.sqrt()).abs() < 1e-12);
        assert_eq!(cfg.hash(), SweepConfig::from_json(SAMPLE).unwrap().hash());
        assert_eq!(cfg.hash().len(), 64);
        let other = SweepConfig {
            trials: 51,
            ..cfg.clone()
        };
        assert_ne!(cfg.hash(), other.hash());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(
            SweepConfig::from_json(&SAMPLE.replace("\"trials\": 50", "\"trials\": 0")).is_err()
        );
        assert!(SweepConfig::from_json(&SAMPLE.replace("\"base_seed\"", "\"seed\"")).is_err());
        let unsorted = SAMPLE.replace(
            r#"{"min": 0.001, "max": 0.01, "count": 3, "log": true}"#,
            "[0.2, 0.1]",
        );
        assert!(SweepConfig::from_json(&unsorted).is_err());
        let t = SAMPLE.replace(
            r#"{"kind": "connected"}"#,
            r#"{"kind": "t-tough", "t": {"num": 1, "den": 2}}"#,
        );
        assert!(SweepConfig::from_json(&t).is_ok());
    }

    #[test]
    fn coupled_seeds_ignore_the_cell() {
        let mut cfg = SweepConfig::from_json(SAMPLE).unwrap();
        assert_ne!(cfg.trial_seed(0, 3), cfg.trial_seed(1, 3));
        cfg.coupled = true;
        assert_eq!(cfg.trial_seed(0, 3), cfg.trial_seed(1, 3));
    }
}
