//! Linearizability monitoring for concurrent histories of registers, sets, stacks,
//! queues and priority queues.
//!
//! Histories must be unambiguous: each value is added exactly once and removed at
//! most once. Under that restriction the container checkers run in `O(n log n)`
//! (sets in linear time after standardization) and the register checker in
//! polynomial time, instead of the exponential search a general checker needs.
//!
//! ```
//! use linmon::{check, parse_history, Format, Verdict};
//!
//! let text = "adt queue\nop 1 p1 enq 1 1 2\nop 2 p1 enq 2 3 4\nop 3 p2 deq 2 5 6\n";
//! let h = parse_history(text, Format::Ops, None).unwrap().history;
//! assert_eq!(check(&h).unwrap().verdict, Verdict::NonLinearizable);
//! ```

pub mod checker;
pub mod framework;
pub mod generator;
pub mod index;
pub mod model;
pub mod oracle;
pub mod seqspec;
pub mod standardize;
pub mod structures;

pub use checker::{check, check_standardized, CheckError};
pub use framework::{check_lin, CheckReport, LinPProvider, Outcome, Stage, Verdict};
pub use generator::{generate_linearizable, mutate, random_history, GenConfig, MutationKind};
pub use index::ValueIndex;
pub use model::{
    parse_history, project, serialize_history, validate_unambiguous, validate_well_formed, AdtKind, Format, History,
    Method, Operation, Parsed, Process, Selector, Time, Value,
};
pub use oracle::{find_linearization, is_linearizable_bruteforce, OracleBudget, OracleError};
pub use standardize::{standardize, StandardizedHistory};
