//! Exact combinatorics of S-Motzkin and T-Motzkin paths.
//!
//! The crate is organised bottom-up:
//!
//! * [`paths`] – lattice paths, classification, statistics and piece decomposition.
//! * [`trees`] – ternary trees and non-crossing trees with their JSON wire formats.
//! * [`bijections`] – S-path ↔ ternary tree, T-path ↔ pair of S-paths, S-path ↔ non-crossing tree.
//! * [`enumeration`] – exhaustive generation, closed-form counts and the brute-force statistic oracle.
//! * [`series`] – truncated power series over exact rationals and the functional-equation solvers.
//! * [`analytics`] – means, variances, limit laws, identity checks.
//! * [`verify`] – named verification suites that bundle the checks above.
//!
//! Generating functions are indexed by `x = z³`, so the coefficient of `xⁿ` counts paths of
//! length `3n`.

pub mod analytics;
pub mod bijections;
pub mod enumeration;
mod error;
pub mod paths;
pub mod series;
pub mod trees;
pub mod verify;

pub use error::{Error, Result};

pub use analytics::{LimitDistribution, StatisticSummary};
pub use bijections::{OmegaPair, PhiTriple};
pub use enumeration::{DistributionPolynomial, PathKind, Statistic};
pub use paths::{LatticePath, PathClass, PathStatistics, Piece, Step};
pub use series::{BivariateSeries, Polynomial, Rational, TruncatedSeries};
pub use trees::{NcNode, NonCrossingTree, TernaryTree, TreePair};
