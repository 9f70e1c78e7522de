//! Property-(D) subshifts, residually defined g-functions and their measures.
//!
//! The crate works with finite right-resolving presentations of sofic shifts
//! and exact rational weights throughout.

pub mod conjugacy;
pub mod error;
pub mod examples;
pub mod filtration;
pub mod format;
pub mod gfunction;
pub mod gmeasure;
pub(crate) mod linalg;
pub mod measure_graph;
pub(crate) mod limit;
pub mod presentation;
pub mod ratio;
pub mod shannon;
pub mod symbolic;

pub use error::{Error, Result};
pub use presentation::{SoficPresentation, StateSet};
pub use ratio::Rational;
pub use symbolic::{Alphabet, EventuallyPeriodicPast, Past, Word};
