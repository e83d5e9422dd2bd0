//! Reducibility of Specht modules for the Iwahori–Hecke algebra of the
//! symmetric group at `q = -1`: partition combinatorics, the reducibility
//! criteria and classifier, exact `q`-arithmetic, a tableau-homomorphism
//! calculus, and an explicit homomorphism construction with its verifier.

pub mod cli;
pub mod criteria;
pub mod error;
pub mod homcalc;
pub mod mh;
pub mod partition;
pub mod qarith;

pub use error::{Error, Result};
pub use partition::Partition;
