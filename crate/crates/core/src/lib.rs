//! Constant-time profiling of a dynamic frequency array.
//!
//! A stream of `(object, add|remove)` events changes one object's count by
//! ±1 at a time. [`Profiler`] keeps the counts in sorted order as a set of
//! blocks of equal values, so each event costs O(1) and the mode, minimum,
//! k-th largest, median and frequency histogram can be read off directly.
//!
//! ```
//! use sprofile::{LogEvent, Profiler};
//!
//! let mut p = Profiler::new(3)?;
//! for e in [LogEvent::add(2)?, LogEvent::add(2)?, LogEvent::add(1)?] {
//!     p.apply(e)?;
//! }
//! assert_eq!(p.mode().frequency, 2);
//! assert_eq!(p.histogram(), vec![(0, 1), (1, 1), (2, 1)]);
//! # Ok::<(), sprofile::Error>(())
//! ```
//!
//! Besides the profiler the crate carries a brute-force [`oracle`], the
//! heap and order-statistic-tree [`baselines`], a reproducible stream
//! generator ([`streamgen`]), a sliding-window adapter ([`window`]), a
//! graph peeling application ([`peel`]) and the timing harness ([`bench`]).

pub mod baselines;
pub mod bench;
mod error;
mod event;
mod hugemem;
pub mod oracle;
pub mod peel;
mod profile;
pub mod streamgen;
pub mod window;

pub use error::{Error, Result};
pub use event::{Action, Frequency, LogEvent, ObjectId};
pub use oracle::Oracle;
pub use profile::{
    AuditFailure, Block, Blocks, ModeResult, Probe, Profiler, SkipPermutationSwap, SpaceReport,
    WorkCounters, MAX_OBJECTS,
};
pub use window::WindowedProfiler;
