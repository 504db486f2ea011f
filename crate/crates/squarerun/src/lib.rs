//! Square detection and runs computation for strings over general unordered
//! alphabets, where the only permitted symbol operation is an equality test.
//!
//! The string is hidden behind [`oracle::EqString`], which counts every
//! comparison and memoizes positive answers through a union-find, so the
//! per-algorithm comparison budgets can be measured and regression-tested.
//! On top of that sit the classical divide-and-conquer detectors
//! ([`primitives`]), sparse suffix trees over difference-cover samples
//! ([`sst`], [`diffcover`]), approximate LZ factorisations ([`approxlz`]),
//! the phased square detector ([`detector`]) and runs pipeline
//! ([`runsengine`]), and the conflict-graph adversaries that realize the
//! matching comparison lower bounds ([`adversary`]).

pub mod adversary;
pub mod approxlz;
pub mod corpus;
pub mod detector;
pub mod diffcover;
mod error;
pub mod oracle;
pub mod primitives;
pub mod runsengine;
pub mod sst;

pub use error::Error;
