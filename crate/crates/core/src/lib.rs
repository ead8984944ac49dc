//! Rigorous piecewise-constant approximation of continuous functions on
//! boxes, and persistent homology of the resulting lower-star filtrations.
//!
//! The pipeline is: parse an [`expression::VectorFunction`], refine the
//! domain with [`approximation`] until interval enclosures certify the
//! requested sup-norm error, build the lower-star filtration and reduce it
//! with [`persistence`], then compare diagrams with [`metrics`].

pub mod approximation;
pub mod cli;
pub mod cwcomplex;
pub mod expression;
pub mod interval;
pub mod metrics;
pub mod persistence;

pub use approximation::{approximate, approximate_complex, greedy, ApproxError, PCApprox, Status};
pub use cwcomplex::{CellId, ComplexError, RectComplex, Rectangle};
pub use expression::{parse, Expr, VectorFunction};
pub use interval::{Interval, IntervalBox, IntervalError};
pub use metrics::{bottleneck, wasserstein, MetricError};
pub use persistence::{
    compute_persistence, compute_persistence_full, filter_short, lower_star, DiagramPoint, Filtration,
    PersistenceDiagram, PersistenceError,
};
