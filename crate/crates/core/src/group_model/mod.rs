//! Group arithmetic, finite shapes and invariance predicates.

mod invariance;
mod model;
mod rational;
mod shape;

pub use invariance::{
    boundary, invariance_defect, invariance_defect_count, is_invariant, multiply_set,
    propagate_invariance,
};
pub use model::{GroupModel, GroupPoint, MAX_LAMPLIGHTER_INDEX};
pub use rational::{ParseRationalError, Rational};
pub use shape::Shape;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("empty shape")]
    EmptyShape,
    #[error("unsupported model {0:?}")]
    UnsupportedModel(String),
    #[error("invalid Følner index {0}")]
    InvalidIndex(usize),
    #[error("epsilon {0} must be below 1")]
    EpsilonTooLarge(Rational),
    #[error("point {point:?} is not a valid {model} element")]
    InvalidPoint { model: String, point: Vec<i64> },
}
