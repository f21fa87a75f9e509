//! Higher-order asymptotic expansions of estimators defined as roots of
//! score-type functions.
//!
//! The crate is organised bottom-up:
//!
//! * [`series`]: truncated power series, compositional inversion, Faà di
//!   Bruno, and exact multivariate polynomials for symbolic tables.
//! * [`related`]: rate profiles and the coefficient recursions that solve the
//!   formal root equation.
//! * [`expansion`]: score models, estimator expansions, remainder bounds and
//!   reparametrization.
//! * [`models`]: exponential families, the binomial phase transition and the
//!   Ornstein-Uhlenbeck estimator.
//! * [`montecarlo`]: seeded sampling and Kolmogorov-Smirnov distances.

pub mod error;
pub mod expansion;
pub mod models;
pub mod montecarlo;
pub mod related;
pub mod series;
pub mod smooth;

pub use error::{Error, Result};
pub use expansion::{ExpansionResult, Interval, Scale, Score, ScoreModel};
pub use related::{BetaProfile, ProfileKind, RelatedSequence};
pub use series::{LaurentMap, MultiPoly, TruncatedSeries};
pub use smooth::SmoothFn;
