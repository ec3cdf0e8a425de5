//! Exact deciders for the graph properties used throughout the crate.
//!
//! Searches that can blow up take [`Limits`] and report
//! [`Verdict::Indeterminate`] when the node budget runs out; that outcome is
//! never folded into "no".

pub(crate) mod connectivity;
mod cycles;
mod expander;
mod hamilton;
mod independence;
mod matching;
mod toughness;

use serde::Serialize;

pub use connectivity::{connectivity_at_least, vertex_connectivity, Connectivity};
pub use cycles::{
    circumference, cycle_cover_greedy, cycle_of_length, longest_directed_cycle,
    pancyclicity_report, Circumference, CycleCover, LongestDirected, PancyclicityReport,
};
pub use expander::expander_check;
pub use hamilton::{
    directed_hamilton_cycle, hamilton_path_between, is_hamilton_connected, is_hamiltonian,
};
pub use independence::{independence_number, Independence};
pub use matching::{bipartite_max_matching, Matching};
pub use toughness::{is_t_tough, toughness, ToughnessReport};

/// Three-valued outcome. `No` may carry a refutation witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "lowercase")]
pub enum Verdict<Y, N = ()> {
    Yes(Y),
    No(N),
    Indeterminate,
}

impl<Y, N> Verdict<Y, N> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }

    pub fn is_indeterminate(&self) -> bool {
        matches!(self, Verdict::Indeterminate)
    }

    pub fn yes(&self) -> Option<&Y> {
        match self {
            Verdict::Yes(y) => Some(y),
            _ => None,
        }
    }

    pub fn into_yes(self) -> Option<Y> {
        match self {
            Verdict::Yes(y) => Some(y),
            _ => None,
        }
    }

    /// Process exit code convention: 0 yes, 1 no, 2 indeterminate.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Yes(_) => 0,
            Verdict::No(_) => 1,
            Verdict::Indeterminate => 2,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Yes(_) => "yes",
            Verdict::No(_) => "no",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

/// Caps and budgets for the exact solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(default)]
pub struct Limits {
    /// Largest `n` handled by the Hamiltonicity bitmask program.
    pub dp_max: usize,
    /// Largest `n` handled by the all-cycle-lengths bitmask program.
    pub all_lengths_max: usize,
    /// Search nodes allowed per branch-and-bound call.
    pub node_budget: u64,
    /// Largest `n` accepted by the independence number solver.
    pub alpha_max: usize,
    /// Largest `n` for exact toughness.
    pub toughness_max: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            dp_max: 24,
            all_lengths_max: 20,
            node_budget: 2_000_000,
            alpha_max: 200,
            toughness_max: 20,
        }
    }
}

impl Limits {
    pub fn with_budget(node_budget: u64) -> Self {
        Limits {
            node_budget,
            ..Limits::default()
        }
    }
}

/// Countdown over search nodes.
#[derive(Debug)]
pub(crate) struct Budget {
    left: u64,
}

impl Budget {
    pub fn new(nodes: u64) -> Self {
        Budget { left: nodes }
    }

    /// Charges one node; `false` once the budget is spent.
    #[inline]
    pub fn tick(&mut self) -> bool {
        if self.left == 0 {
            false
        } else {
            self.left -= 1;
            true
        }
    }
}
