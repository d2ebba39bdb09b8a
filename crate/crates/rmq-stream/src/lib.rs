//! Online range-minimum queries over command streams.
//!
//! The input is a stream of four commands: `V v` appends a value to an
//! implicit sequence, `M` marks the current position as a future query
//! start, `Q i` asks for the minimum value between position `i` and the
//! current position, and `C i` announces that no more queries will start
//! at `i`.
//!
//! Three engines answer these streams online without storing the value
//! sequence:
//!
//! * [`VanillaEngine`] - monotonic stack plus union-find over every marked
//!   position; simplest, but memory grows with the number of marks.
//! * [`CompactEngine`] - adds a tombstoned open-addressing index over the
//!   active positions and periodically rebuilds itself into capacity twice
//!   the active count, so memory is bounded by the peak number of
//!   simultaneously active positions.
//! * [`RealtimeEngine`] - stores each position set only as its minimum
//!   position and replaces union-find with predecessor searches over the
//!   stack, bounding the per-command worst case.
//!
//! [`OracleEngine`] keeps the whole sequence and answers by linear scan;
//! it exists for differential testing only.

pub mod active_index;
pub mod command;
pub mod compact;
pub mod engine;
pub mod oracle;
pub mod realtime;
mod set_stack;
pub mod union_find;
pub mod vanilla;
pub mod workload;

pub use command::{parse_stream, serialize, validate, Command, Position, ValidityReport};
pub use compact::CompactEngine;
pub use engine::{EngineError, RmqEngine};
pub use oracle::OracleEngine;
pub use realtime::{query_approx, ApproxWindow, RealtimeEngine, SearchStrategy};
pub use union_find::PositionForest;
pub use vanilla::VanillaEngine;
pub use workload::WorkloadSpec;
