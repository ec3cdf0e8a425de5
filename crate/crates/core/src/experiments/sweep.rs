use rayon::prelude::*;

use crate::checkers::{
    circumference, is_hamiltonian, is_t_tough, pancyclicity_report, Limits, Verdict,
};
use crate::error::{Error, Result};
use crate::families::{build_family, Layout};
use crate::graph::{Graph, VertexSet};
use crate::random::{pair_present, sample_gnp, EdgeProbability, Seed};

use super::{Cell, Property, SweepConfig, SweepResult};

/// Result of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Fail,
    Indeterminate,
}

impl<Y, N> From<Verdict<Y, N>> for Outcome {
    fn from(v: Verdict<Y, N>) -> Self {
        match v {
            Verdict::Yes(_) => Outcome::Success,
            Verdict::No(_) => Outcome::Fail,
            Verdict::Indeterminate => Outcome::Indeterminate,
        }
    }
}

impl From<bool> for Outcome {
    fn from(b: bool) -> Self {
        if b {
            Outcome::Success
        } else {
            Outcome::Fail
        }
    }
}

/// What a trial needs besides its seed. Structural events never build the
/// seed graph.
pub(crate) struct Prepared {
    n: usize,
    layout: Layout,
    block_of: Vec<usize>,
    blocks: Vec<VertexSet>,
    graph: Option<Graph>,
}

impl Prepared {
    pub(crate) fn new(cfg: &SweepConfig) -> Result<Self> {
        let layout = cfg.family.layout()?;
        let n = cfg.family.n();
        let mut block_of = vec![0; n];
        let blocks = layout.blocks();
        for (i, b) in blocks.iter().enumerate() {
            for v in b.iter() {
                block_of[v] = i;
            }
        }
        let structural = matches!(
            cfg.property,
            Property::NoCrossingEdge
                | Property::SomeCliqueIsolated
                | Property::IabLinkedBelow { .. }
        );
        if let Property::IabLinkedBelow { .. } = cfg.property {
            if !matches!(layout, Layout::Iab { .. }) {
                return Err(Error::Unsupported(format!(
                    "iab-linked-below on {}",
                    cfg.family.kind_name()
                )));
            }
        }
        let graph = if structural {
            None
        } else {
            Some(build_family(&cfg.family)?)
        };
        Ok(Prepared {
            n,
            layout,
            block_of,
            blocks,
            graph,
        })
    }
}

/// Decides `property` for one random sample `R = G(n, p)` drawn from `seed`.
pub(crate) fn run_trial(
    prep: &Prepared,
    property: &Property,
    p: EdgeProbability,
    seed: Seed,
    limits: &Limits,
) -> Result<Outcome> {
    let n = prep.n;
    match property {
        Property::NoCrossingEdge => {
            for u in 0..n {
                for v in u + 1..n {
                    if prep.block_of[u] != prep.block_of[v] && pair_present(seed, p, u, v) {
                        return Ok(Outcome::Fail);
                    }
                }
            }
            Ok(Outcome::Success)
        }
        Property::SomeCliqueIsolated => {
            let isolated = prep.blocks.iter().any(|b| {
                !b.iter().any(|u| {
                    (0..n).any(|v| {
                        prep.block_of[v] != prep.block_of[u] && pair_present(seed, p, u, v)
                    })
                })
            });
            Ok(isolated.into())
        }
        &Property::IabLinkedBelow { bound } => {
            let Layout::Iab { i, a, .. } = prep.layout else {
                return Err(Error::Unsupported(
                    "iab-linked-below needs an IAB layout".into(),
                ));
            };
            // I is 0..i, B is i+a..n.
            let linked = (0..i)
                .filter(|&u| {
                    (0..i).any(|v| v != u && pair_present(seed, p, u, v))
                        || (i + a..n).any(|v| pair_present(seed, p, u, v))
                })
                .count();
            Ok((linked < bound).into())
        }
        _ => {
            let g = prep
                .graph
                .as_ref()
                .expect("graph built for graph properties");
            let h = g.union(&sample_gnp(n, p, seed))?;
            graph_outcome(&h, property, limits)
        }
    }
}

fn graph_outcome(h: &Graph, property: &Property, limits: &Limits) -> Result<Outcome> {
    Ok(match property {
        Property::Hamiltonian => is_hamiltonian(h, limits)?.into(),
        Property::Pancyclic => pancyclicity_report(h, limits)?.verdict().into(),
        Property::Connected => h.is_connected().into(),
        Property::TTough { t } => is_t_tough(h, *t, limits)?.into(),
        &Property::CircumferenceAtLeast { length } => {
            let c = circumference(h, limits)?;
            if c.length >= length {
                Outcome::Success
            } else if c.exact {
                Outcome::Fail
            } else {
                Outcome::Indeterminate
            }
        }
        Property::PerfectMatchingProxy => h
            .connected_components()
            .iter()
            .all(|c| c.len() % 2 == 0)
            .into(),
        Property::NoCrossingEdge
        | Property::SomeCliqueIsolated
        | Property::IabLinkedBelow { .. } => {
            unreachable!("structural events are decided from R alone")
        }
    })
}

/// Outcome of trial `trial` in cell `cell` of `cfg`, as the sweep computes it.
pub fn trial_outcome(cfg: &SweepConfig, cell: usize, trial: usize) -> Result<Outcome> {
    let grid = cfg.p_grid.values()?;
    let p = *grid
        .get(cell)
        .ok_or_else(|| Error::input(format!("cell {cell} outside grid of {}", grid.len())))?;
    let prep = Prepared::new(cfg)?;
    run_trial(
        &prep,
        &cfg.property,
        EdgeProbability::new(p)?,
        cfg.trial_seed(cell, trial),
        &cfg.limits,
    )
}

/// Counts for `trials` coupled or independent samples at one `p`.
pub(crate) fn run_cell(prep: &Prepared, cfg: &SweepConfig, cell: usize, p: f64) -> Result<Cell> {
    let ep = EdgeProbability::new(p)?;
    let outcomes: Vec<Outcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            run_trial(
                prep,
                &cfg.property,
                ep,
                cfg.trial_seed(cell, t),
                &cfg.limits,
            )
        })
        .collect::<Result<_>>()?;
    Ok(tally(p, &outcomes))
}

fn tally(p: f64, outcomes: &[Outcome]) -> Cell {
    let count = |o| outcomes.iter().filter(|&&x| x == o).count();
    Cell::from_counts(
        p,
        count(Outcome::Success),
        count(Outcome::Fail),
        count(Outcome::Indeterminate),
    )
}

/// Runs every cell of the grid. Trials run in parallel on the current rayon
/// pool; counts are folded in (cell, trial) order so the result does not
/// depend on the worker count.
pub fn estimate_probability(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let grid = cfg.p_grid.values()?;
    let prep = Prepared::new(cfg)?;
    let jobs: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|c| (0..cfg.trials).map(move |t| (c, t)))
        .collect();
    let probs: Vec<EdgeProbability> = grid
        .iter()
        .map(|&p| EdgeProbability::new(p))
        .collect::<Result<_>>()?;
    let outcomes: Vec<Outcome> = jobs
        .par_iter()
        .map(|&(c, t)| {
            run_trial(
                &prep,
                &cfg.property,
                probs[c],
                cfg.trial_seed(c, t),
                &cfg.limits,
            )
        })
        .collect::<Result<_>>()?;
    let cells = grid
        .iter()
        .zip(outcomes.chunks(cfg.trials))
        .map(|(&p, chunk)| tally(p, chunk))
        .collect();
    Ok(SweepResult {
        family: cfg.family.kind_name().to_string(),
        property: cfg.property.name(),
        config_hash: cfg.hash(),
        version: super::version(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::PGrid;
    use crate::families::FamilySpec;

    fn config(
        family: FamilySpec,
        property: Property,
        grid: Vec<f64>,
        trials: usize,
    ) -> SweepConfig {
        SweepConfig {
            family,
            property,
            p_grid: PGrid::List(grid),
            trials,
            base_seed: Seed(5),
            limits: Limits::default(),
            coupled: false,
        }
    }

    #[test]
    fn trivial_endpoints() {
        let cfg = config(
            FamilySpec::CliqueForest { n: 20, d: 3, k: 4 },
            Property::Connected,
            vec![0.0, 1.0],
            20,
        );
        let r = estimate_probability(&cfg).unwrap();
        assert_eq!(r.cells[0].success, 0);
        assert_eq!(r.cells[1].success, 20);
        let cfg = config(
            FamilySpec::TwoCliques { n: 10 },
            Property::Hamiltonian,
            vec![0.0],
            10,
        );
        assert_eq!(estimate_probability(&cfg).unwrap().cells[0].estimate, 0.0);
    }

    #[test]
    fn structural_events_agree_with_the_sampled_graph() {
        let spec = FamilySpec::CliqueForest { n: 20, d: 3, k: 4 };
        let layout = spec.layout().unwrap();
        let blocks = layout.blocks();
        let cfg = config(spec, Property::SomeCliqueIsolated, vec![0.02], 200);
        let prep = Prepared::new(&cfg).unwrap();
        let p = EdgeProbability::new(0.02).unwrap();
        for t in 0..200 {
            let seed = cfg.trial_seed(0, t);
            let r = sample_gnp(20, p, seed);
            let isolated = blocks.iter().any(|b| {
                b.iter()
                    .all(|u| r.neighbors(u).iter().all(|&v| b.contains(v)))
            });
            let crossing = r
                .edges()
                .any(|(u, v)| blocks.iter().any(|b| b.contains(u) != b.contains(v)));
            assert_eq!(
                run_trial(&prep, &Property::SomeCliqueIsolated, p, seed, &cfg.limits).unwrap(),
                isolated.into()
            );
            assert_eq!(
                run_trial(&prep, &Property::NoCrossingEdge, p, seed, &cfg.limits).unwrap(),
                (!crossing).into()
            );
        }
    }

    #[test]
    fn iab_count_matches_the_sampled_graph() {
        let spec = FamilySpec::IAB { n: 40, k: 8 };
        let cfg = config(spec, Property::IabLinkedBelow { bound: 4 }, vec![0.01], 50);
        let prep = Prepared::new(&cfg).unwrap();
        let p = EdgeProbability::new(0.01).unwrap();
        // I = 0..7, A = 7..11, B = 11..40.
        for t in 0..50 {
            let seed = cfg.trial_seed(0, t);
            let r = sample_gnp(40, p, seed);
            let linked = (0..7)
                .filter(|&u| r.neighbors(u).iter().any(|&v| !(7..11).contains(&v)))
                .count();
            assert_eq!(
                run_trial(&prep, &cfg.property, p, seed, &cfg.limits).unwrap(),
                (linked < 4).into()
            );
        }
        let wrong = config(
            FamilySpec::TwoCliques { n: 10 },
            Property::IabLinkedBelow { bound: 1 },
            vec![0.1],
            1,
        );
        assert!(estimate_probability(&wrong).is_err());
    }

    #[test]
    fn coupled_sweeps_are_monotone() {
        let mut cfg = config(
            FamilySpec::TwoCliques { n: 20 },
            Property::Connected,
            (1..=10).map(|i| i as f64 * 0.002).collect(),
            100,
        );
        cfg.coupled = true;
        let r = estimate_probability(&cfg).unwrap();
        assert!(r.cells.windows(2).all(|w| w[0].success <= w[1].success));
    }

    #[test]
    fn csv_is_reproducible_and_pool_independent() {
        let cfg = config(
            FamilySpec::TwoCliques { n: 12 },
            Property::Hamiltonian,
            vec![0.05, 0.2],
            40,
        );
        let a = estimate_probability(&cfg).unwrap().to_csv();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| estimate_probability(&cfg).unwrap().to_csv());
        assert_eq!(a, b);
        assert!(a.starts_with(super::super::CSV_HEADER));
        assert_eq!(a.lines().count(), 3);
    }

    #[test]
    fn perfect_matching_proxy_and_toughness() {
        let cfg = config(
            FamilySpec::TwoCliques { n: 10 },
            Property::PerfectMatchingProxy,
            vec![0.0],
            3,
        );
        // Two K_5: both components odd.
        assert_eq!(estimate_probability(&cfg).unwrap().cells[0].success, 0);
        let cfg = config(
            FamilySpec::MCliques { n: 12, m: 3 },
            Property::TTough {
                t: crate::ratio::Ratio::integer(1),
            },
            vec![1.0],
            2,
        );
        assert_eq!(estimate_probability(&cfg).unwrap().cells[0].success, 2);
    }
}
