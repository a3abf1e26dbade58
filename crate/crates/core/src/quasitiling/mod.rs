//! Greedy ε-packings, density quasitilings of action windows and the
//! group-level quasitiling, with checkers for their guarantees.

mod bdense;
mod bepack;
mod checks;
mod group;
mod params;

pub use bdense::{bdense, default_windows, verify_atlas, AtlasEntry, BdenseOptions, StageRecord, TileAtlas};
pub use bepack::{bepack, verify_packing, Packing};
pub use checks::{pack_bound_check, starinv_check, PackBound};
pub use group::{group_quasitile, verify_group_quasitiling, GroupQuasitiling, GroupTile};
pub use params::{
    check_beta, check_epsilon, first_cross_failure, group_ladder_length, ladder_length, recursion_bound,
    slack_delta, slack_inequality_holds, QuasitileParams,
};

use crate::action_space::ActionError;
use crate::group_model::{GroupError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuasitileError {
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("epsilon {0} is not in (0, 1/2)")]
    InvalidEpsilon(Rational),
    #[error("beta {0} is not in (0, 1/2)")]
    InvalidBeta(Rational),
    #[error("no slack delta in (0, 1] for epsilon {eps} and n = {n}")]
    NoSlack { eps: Rational, n: usize },
    #[error("shape {0} is empty")]
    EmptyShape(&'static str),
    #[error("ladder is empty")]
    EmptyLadder,
    #[error("ladder is not nested at level {0}")]
    NotNested(usize),
    #[error("F_{i} is not (F_{j}^-1, {tau})-invariant")]
    CrossInvariance { i: usize, j: usize, tau: Rational },
    #[error("hypothesis failed: {name}: {detail}")]
    Hypothesis { name: String, detail: String },
    #[error("precondition failed: {name}: {detail}")]
    Precondition { name: String, detail: String },
}
