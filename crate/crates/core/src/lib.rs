//! Certifying decision procedure for interpolation of modified normal
//! bundles of curves, driven entirely by numerical tuples `(d, g, r; n)`.
//!
//! The pieces, bottom-up:
//!
//! - [`tuple`]: tuples, Euler characteristics, the regime inequality and
//!   enumeration of marked counts.
//! - [`rules`]: the reduction calculus and base cases.
//! - [`engine`] and [`certificate`]: memoized search and replayable proofs.
//! - [`sweep`]: range sweeps and CSV reports.
//! - [`classify`]: closed-form verdicts.
//! - [`split`]: split bundles on P¹.
//! - [`exceptional`]: the obstruction behind the three exceptional triples.

pub mod certificate;
pub mod classify;
pub mod config;
pub mod engine;
pub mod exceptional;
pub mod rules;
pub mod split;
pub mod sweep;
pub mod tuple;

pub use certificate::{check_certificate, Certificate, CheckFailure};
pub use classify::{classify, is_excellent, max_general_points, Classification, Excellence};
pub use config::{Config, SearchMode};
pub use engine::{Engine, NotGoodReason, SearchError, Status, Verdict};
pub use rules::{RuleApplication, RuleId};
pub use split::SplitBundle;
pub use sweep::{sweep, RangeSpec, Report};
pub use tuple::{MarkedCounts, MarkedType, Tuple};
