//! Index structures shared by the container checkers.
//!
//! Time is discretized into partitions: the open gaps between consecutive distinct
//! event timestamps, plus the two unbounded ends.

mod cover;
mod interval;
mod mintag;
mod partition;

pub use cover::CoverSegTree;
pub use interval::{OpIntervalTree, OpIntervalTreeBuilder, UnknownOp};
pub use mintag::{MinEntry, MinTagSegTree};
pub use partition::{CriticalInterval, PartitionIndex};
