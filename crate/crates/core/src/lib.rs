//! Randomly perturbed graphs at desk scale.
//!
//! The crate builds the extremal seed graphs of the perturbed-graph
//! literature, adds binomial random edges to them, decides Hamiltonicity,
//! pancyclicity, connectivity and toughness exactly, runs constructive
//! cycle-building pipelines, and estimates perturbation thresholds by Monte
//! Carlo.
//!
//! ```
//! use perturbed::{build_family, checkers, perturb, EdgeProbability, FamilySpec, Limits, Seed};
//!
//! let g = build_family(&FamilySpec::TwoCliques { n: 12 }).unwrap();
//! let h = perturb(&g, EdgeProbability::new(0.2).unwrap(), Seed(7));
//! let verdict = checkers::is_hamiltonian(&h, &Limits::default()).unwrap();
//! println!("{}", verdict.label());
//! ```

// `!(x > 0.0)` style checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod bits;
pub mod certificate;
pub mod checkers;
pub mod decompose;
mod error;
pub mod experiments;
pub mod families;
mod graph;
pub mod pipelines;
mod random;
mod ratio;
mod text;

pub use certificate::{
    verify_certificate, verify_directed_cycle, Certificate, CycleCertificate, PathCertificate,
    PathSystem, Violation,
};
pub use checkers::{Limits, Verdict};
pub use error::{Error, Result};
pub use families::{build_family, predicted_properties, FamilySpec, PredictedProperties};
pub use graph::{Degeneracy, DegreeStats, Digraph, Graph, Induced, VertexSet};
pub use random::{
    pair_present, pair_uniform, perturb, sample_dnp, sample_gnp, sample_two_rounds,
    split_two_rounds, EdgeProbability, Seed,
};
pub use ratio::Ratio;
pub use text::{parse_pairs, MAX_VERTICES};
