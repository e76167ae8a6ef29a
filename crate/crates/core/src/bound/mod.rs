//! Certified checks of the binomial bound, its companion for central
//! rows of even length, the classical reference bounds and the auxiliary
//! inequalities used to establish them.

pub mod classical;
pub mod proof_support;
pub mod sweep;
pub mod theorem;

pub use classical::{check_classical_ordering, classical_bounds, comparison_table, BoundPair, ClassicalBounds};
pub use proof_support::{
    b_grid, check_b_inequality, check_f_monotone, check_t_at_minimizer, check_t_nonneg, f_grid, proof_support, t_grid,
    t_min_grid, ProofSupportReport,
};
pub use sweep::{sweep, sweep_with, SweepReport, SweepRow, SweepTarget, CSV_HEADER};
pub use theorem::{check_lemma, check_lemma_with, check_theorem, check_theorem_with, lemma_rhs_log2, theorem_rhs_log2};
