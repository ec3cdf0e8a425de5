use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{predicted_properties, FamilySpec};

use super::oracle::closed_form_threshold;
use super::sweep::{run_cell, Prepared};
use super::{Cell, SweepConfig};

/// One evaluated probability during a threshold search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Probe {
    pub p: f64,
    pub success: usize,
    pub fail: usize,
    pub indeterminate: usize,
    pub estimate: f64,
    pub usable: bool,
}

impl From<&Cell> for Probe {
    fn from(c: &Cell) -> Self {
        Probe {
            p: c.p,
            success: c.success,
            fail: c.fail,
            indeterminate: c.indeterminate,
            estimate: c.estimate,
            usable: c.usable,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdEstimate {
    pub family: String,
    pub property: String,
    pub target: f64,
    /// Geometric midpoint of the final bracket.
    pub p_star: f64,
    pub bracket: (f64, f64),
    pub method: String,
    pub trials_per_probe: usize,
    /// False when a probe inside the bracket was unusable and the search
    /// stopped early.
    pub converged: bool,
    pub probes: Vec<Probe>,
    pub config_hash: String,
    pub version: String,
}

/// Bracket ratio at which bisection stops.
pub const BRACKET_RATIO: f64 = 1.1;
const MAX_BISECTIONS: usize = 64;

fn midpoint(lo: f64, hi: f64) -> f64 {
    if lo > 0.0 {
        (lo * hi).sqrt()
    } else {
        0.5 * hi
    }
}

/// Locates the `p` where the estimated probability crosses `target`.
///
/// Every grid point is probed first; the search then bisects (geometric
/// midpoint) the first adjacent usable pair that brackets the crossing until
/// `hi/lo <= 1.1`. All probes use the same coupled trial seeds. For events
/// that disappear as edges are added, the crossing is where the estimate
/// falls to the target.
pub fn find_threshold(cfg: &SweepConfig, target: f64) -> Result<ThresholdEstimate> {
    cfg.validate()?;
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::input(format!(
            "threshold target {target} outside (0, 1)"
        )));
    }
    let cfg = SweepConfig {
        coupled: true,
        ..cfg.clone()
    };
    let increasing = cfg.property.is_increasing();
    // `reached` is monotone false → true along p.
    let reached = |e: f64| if increasing { e >= target } else { e <= target };
    let prep = Prepared::new(&cfg)?;
    let grid = cfg.p_grid.values()?;
    let mut probes = Vec::new();
    let mut cells = Vec::new();
    for &p in &grid {
        let c = run_cell(&prep, &cfg, 0, p)?;
        probes.push(Probe::from(&c));
        cells.push(c);
    }
    let usable: Vec<&Cell> = cells.iter().filter(|c| c.usable).collect();
    let pair = usable
        .windows(2)
        .find(|w| !reached(w[0].estimate) && reached(w[1].estimate))
        .map(|w| (w[0].p, w[1].p));
    let Some((mut lo, mut hi)) = pair else {
        return Err(Error::input(format!(
            "p grid does not bracket the {target} crossing of {}: estimates {:?}",
            cfg.property.name(),
            cells.iter().map(|c| c.estimate).collect::<Vec<_>>()
        )));
    };
    let mut converged = true;
    for _ in 0..MAX_BISECTIONS {
        if lo > 0.0 && hi / lo <= BRACKET_RATIO {
            break;
        }
        let mid = midpoint(lo, hi);
        let c = run_cell(&prep, &cfg, 0, mid)?;
        probes.push(Probe::from(&c));
        if !c.usable {
            converged = false;
            break;
        }
        if reached(c.estimate) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ThresholdEstimate {
        family: cfg.family.kind_name().to_string(),
        property: cfg.property.name(),
        target,
        p_star: midpoint(lo, hi),
        bracket: (lo, hi),
        method: format!("coupled bisection, stop at ratio {BRACKET_RATIO}"),
        trials_per_probe: cfg.trials,
        converged,
        probes,
        config_hash: cfg.hash(),
        version: super::version(),
    })
}

/// Value of the threshold form the family is associated with, constants set
/// to 1, and a label for it.
pub fn predicted_form(spec: &FamilySpec) -> Result<(f64, &'static str)> {
    let n = spec.n() as f64;
    let props = predicted_properties(spec)?;
    Ok(match *spec {
        FamilySpec::TwoCliques { .. }
        | FamilySpec::BalancedCliques { .. }
        | FamilySpec::MCliques { .. } => {
            let delta = props.min_degree as f64 / n;
            if delta <= 0.0 {
                return Err(Error::Unsupported(
                    "threshold form needs positive minimum degree".into(),
                ));
            }
            (
                (1.0 / delta).ln() / (delta * n * n),
                "log(1/delta)/(delta n^2)",
            )
        }
        FamilySpec::CliqueForest { d, k, .. } => ((k as f64).ln() / (d as f64 * n), "log k/(d n)"),
        FamilySpec::ToughnessCliques { k, .. } => (n.ln() / (n * k as f64), "log n/(n k)"),
        FamilySpec::IAB { .. }
        | FamilySpec::UnbalancedBipartite { .. }
        | FamilySpec::DiracBipartite { .. } => {
            (props.independence_number as f64 / (n * n), "alpha/n^2")
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub value: f64,
    pub family: FamilySpec,
    pub p_star: f64,
    pub bracket: (f64, f64),
    pub converged: bool,
    pub predicted: f64,
    /// `p_star / predicted`.
    pub ratio: f64,
    /// Root of the closed form at the same target, when one exists.
    pub closed_form: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub axis: String,
    pub form: String,
    pub target: f64,
    pub rows: Vec<ScalingRow>,
    /// Largest over smallest `ratio`.
    pub spread: f64,
}

impl ScalingReport {
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "{},p_star,bracket_lo,bracket_hi,predicted,ratio,closed_form\n",
            self.axis
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.value,
                r.p_star,
                r.bracket.0,
                r.bracket.1,
                r.predicted,
                r.ratio,
                r.closed_form.map(|x| x.to_string()).unwrap_or_default()
            ));
        }
        out
    }
}

/// Threshold per value of one family parameter, set against the family's
/// predicted form.
pub fn scaling_report(
    base: &SweepConfig,
    axis: &str,
    values: &[f64],
    target: f64,
) -> Result<ScalingReport> {
    if values.is_empty() {
        return Err(Error::input("scaling axis has no values"));
    }
    let mut rows = Vec::with_capacity(values.len());
    let mut form = "";
    for &value in values {
        let family = base.family.with_param(axis, value)?;
        let cfg = SweepConfig {
            family: family.clone(),
            ..base.clone()
        };
        let est = find_threshold(&cfg, target)?;
        let (predicted, label) = predicted_form(&family)?;
        form = label;
        rows.push(ScalingRow {
            value,
            closed_form: closed_form_threshold(&family, &cfg.property, target),
            family,
            p_star: est.p_star,
            bracket: est.bracket,
            converged: est.converged,
            predicted,
            ratio: est.p_star / predicted,
        });
    }
    let max = rows.iter().map(|r| r.ratio).fold(f64::MIN, f64::max);
    let min = rows.iter().map(|r| r.ratio).fold(f64::MAX, f64::min);
    Ok(ScalingReport {
        axis: axis.to_string(),
        form: form.to_string(),
        target,
        rows,
        spread: max / min,
    })
}
