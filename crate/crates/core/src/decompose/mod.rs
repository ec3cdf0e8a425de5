//! Vertex partitions into highly connected blocks, random bisections and
//! disjoint path systems.

mod linkage;
mod partition;

use std::fmt;

use serde::Serialize;

pub use linkage::{
    connectivity_bisection, disjoint_paths, spanning_path_system, Bisection, BisectionFailure,
    SpanningConfig, SpanningOutcome, SpanningStage, StageFailure,
};
pub use partition::{
    extract_highly_connected, partition_bfkm, partition_lemma29, Lemma29Conclusions,
    Lemma29Outcome, Lemma29Params, Method, PartitionResult,
};

/// A construction step that could not be completed, naming where it stuck.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Refusal {
    pub stage: String,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block: Option<usize>,
}

impl Refusal {
    pub(crate) fn vertex(stage: &str, reason: String, v: usize) -> Self {
        Refusal {
            stage: stage.into(),
            reason,
            vertex: Some(v),
            block: None,
        }
    }

    pub(crate) fn block(stage: &str, reason: String, i: usize) -> Self {
        Refusal {
            stage: stage.into(),
            reason,
            vertex: None,
            block: Some(i),
        }
    }
}

impl fmt::Display for Refusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.stage, self.reason)
    }
}
