//! Tableau homomorphisms between Specht and permutation modules, their
//! straightening into the semistandard basis, and kernel checks.

mod engine;
mod kernel;
mod modsolve;
mod ratfunc;
mod rules;
mod sum;
mod tableau;

pub use engine::{EngineStats, Expansion, Strategy, Straightener, BUDGET_ENV, DEFAULT_BUDGET};
pub use kernel::{
    ehom_specht_basis, kernel_intersection_check, psi_pairs, psi_straightened, row_removal_reduce,
    EhomBasis, KernelReport,
};
pub use rules::{compose_psi, killed_by_dominance, lambda_dt, straighten_step, Move};
pub use sum::FormalHomSum;
pub use tableau::{enumerate_tableaux, Entry, RowStandardTableau};
