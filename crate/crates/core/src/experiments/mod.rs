//! Monte Carlo estimation of `P(property holds for family ∪ G(n, p))`,
//! threshold location and comparison with closed forms.

mod config;
mod oracle;
mod sweep;
mod threshold;

pub use config::{PGrid, Property, SweepConfig};
pub use oracle::{closed_form_oracle, closed_form_threshold, OracleValue};
pub use sweep::{estimate_probability, trial_outcome, Outcome};
pub use threshold::{
    find_threshold, predicted_form, scaling_report, Probe, ScalingReport, ScalingRow,
    ThresholdEstimate,
};

use serde::{Deserialize, Serialize};

/// Two-sided normal quantile for a 95% interval.
pub const Z95: f64 = 1.959963984540054;
/// Two-sided normal quantile for a 99.9% interval.
pub const Z999: f64 = 3.290526731491926;

/// Cells with more than this fraction of undecided trials are unusable.
pub const MAX_INDETERMINATE_FRACTION: f64 = 0.2;

/// Wilson score interval for `successes` out of `n` at normal quantile `z`.
/// With `n = 0` the interval is `[0, 1]`.
pub fn wilson(successes: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let phat = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (phat + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Aggregate of one grid cell. The estimate and interval use decided trials
/// only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub p: f64,
    pub trials: usize,
    pub success: usize,
    pub fail: usize,
    pub indeterminate: usize,
    pub estimate: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub usable: bool,
}

impl Cell {
    pub fn from_counts(p: f64, success: usize, fail: usize, indeterminate: usize) -> Cell {
        let trials = success + fail + indeterminate;
        let decided = success + fail;
        let estimate = if decided == 0 {
            0.0
        } else {
            success as f64 / decided as f64
        };
        let (wilson_lo, wilson_hi) = wilson(success, decided, Z95);
        Cell {
            p,
            trials,
            success,
            fail,
            indeterminate,
            estimate,
            wilson_lo,
            wilson_hi,
            usable: decided > 0
                && indeterminate as f64 <= MAX_INDETERMINATE_FRACTION * trials as f64,
        }
    }

    /// Wilson interval at another confidence level.
    pub fn interval(&self, z: f64) -> (f64, f64) {
        wilson(self.success, self.success + self.fail, z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub family: String,
    pub property: String,
    pub config_hash: String,
    pub version: String,
    pub cells: Vec<Cell>,
}

pub const CSV_HEADER: &str = "p,trials,success,fail,indeterminate,estimate,wilson_lo,wilson_hi";

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                c.p,
                c.trials,
                c.success,
                c.fail,
                c.indeterminate,
                c.estimate,
                c.wilson_lo,
                c.wilson_hi
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep result serializes")
    }
}

pub(crate) fn version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_matches_reference_values() {
        // 50/100 at 95%: center 0.5, half-width 1.96·sqrt(0.25/100 + 1.96²/40000)/(1 + 1.96²/100).
        let (lo, hi) = wilson(50, 100, Z95);
        assert!((lo - 0.403832).abs() < 1e-6, "{lo}");
        assert!((hi - 0.596168).abs() < 1e-6, "{hi}");
        let (lo, hi) = wilson(0, 10, Z95);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.277533).abs() < 1e-6, "{hi}");
        assert_eq!(wilson(0, 0, Z95), (0.0, 1.0));
    }

    #[test]
    fn cells_flag_undecided_majorities() {
        let c = Cell::from_counts(0.1, 3, 5, 2);
        assert!(c.usable);
        assert_eq!(c.trials, 10);
        assert!((c.estimate - 0.375).abs() < 1e-12);
        assert!(!Cell::from_counts(0.1, 3, 4, 3).usable);
        assert!(!Cell::from_counts(0.1, 0, 0, 1).usable);
    }
}
