//! Bipartite matching by phases of short augmenting-path elimination.

mod certificate;
mod eliminate;
mod oracle;
mod relation;
mod saturate;
mod state;

pub use certificate::{certify_expansivity, ExpansivityCertificate, EXPANSIVITY_SAMPLES};
pub use eliminate::{color_paths, eliminate_short_augmenting, short_augmenting_paths, EliminationReport};
pub use oracle::oracle_max_matching;
pub use relation::BipartiteRelation;
pub use saturate::{match_saturating, maximum_matching_by_phases, MatchingTranscript, PhaseRecord};
pub use state::{flip, AugmentingPath, MatchingState};

use crate::group_model::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatchingError {
    #[error("relation too large")]
    TooLarge,
    #[error("{side} vertex {index} out of range")]
    VertexOutOfRange { side: &'static str, index: usize },
    #[error("pair ({left}, {right}) is not in the relation")]
    Incompatible { left: usize, right: usize },
    #[error("pair ({left}, {right}) breaks injectivity")]
    NotInjective { left: usize, right: usize },
    #[error("not an augmenting path: {0}")]
    NotAugmenting(&'static str),
    #[error("relation has no left vertices")]
    EmptyLeft,
    #[error("unmatched-impossible vertex: left vertex {0} has no neighbors")]
    IsolatedLeft(usize),
    #[error("relation is not expansive (c = {0})")]
    NotExpansive(Rational),
    #[error("phase {phase}: {unmatched} of {left} unmatched exceeds the phase bound")]
    PhaseBound {
        phase: usize,
        unmatched: usize,
        left: usize,
    },
    #[error("Hall violation: {} left vertices reach only {} right vertices", left.len(), right.len())]
    HallViolation { left: Vec<usize>, right: Vec<usize> },
}
