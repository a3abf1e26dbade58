//! Finite carriers with a free group action, subsets, densities and the
//! pointwise invariance predicates.

mod density;
mod point_set;
mod predicates;
mod window;

pub use density::{banach_density, lower_banach_density, DensityReport, WindowCounts};
pub use point_set::PointSet;
pub use predicates::{check_epsilon_disjoint, is_star_invariant, DisjointFailure, PointCheck};
pub use window::{ActionWindow, Carrier, Translator, MAX_LAMPLIGHTER_SIDE};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ActionError {
    #[error("invalid carrier: {0}")]
    InvalidCarrier(String),
    #[error("point {0:?} is not in the carrier")]
    InvalidCarrierPoint(Vec<i64>),
    #[error("element {0:?} is not valid for the model")]
    InvalidElement(Vec<i64>),
    #[error("shape {shape} has element {point:?} outside the freeness radius of side {side}")]
    OutsideRadius {
        shape: String,
        point: Vec<i64>,
        side: usize,
    },
    #[error("empty window list")]
    NoWindows,
    #[error("window {0} is empty")]
    EmptyWindow(usize),
    #[error("set {0} is empty")]
    EmptySet(&'static str),
    #[error("{tiles} tiles but {witnesses} witnesses")]
    Misaligned { tiles: usize, witnesses: usize },
}
