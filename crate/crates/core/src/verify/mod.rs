//! Independent group-theoretic checks: coset enumeration, subgroup and
//! homomorphism counts, explicit derivations, and the test suites built on them.

mod coset;
mod groups;
mod invariants;
mod low_index;
mod redundancy;
mod suites;
mod transport;
mod witness;

use thiserror::Error;

use crate::algebra::SimplifyError;
use crate::geometry::GeometryError;
use crate::sweep::SweepError;

pub use coset::{max_cosets_from_env, todd_coxeter, CosetTable, DEFAULT_MAX_COSETS};
pub use groups::{all_homs, count_homs_finite, FiniteGroup};
pub use invariants::{invariants_report, subgroup_counts_via_homs, Depth, HomCountReport, InvariantsReport};
pub use low_index::{low_index_subgroups, low_index_with_budget, SubgroupCountReport, DEFAULT_NODE_BUDGET};
pub use redundancy::{
    closing_presentation, replay_redundancy, verify_kappa_redundancy, RedundancyReport, RedundancyStep, RewriteKind,
};
pub use suites::{
    corollary_suite, invariants_suite, run_suite, theorem_suite, CaseReport, CaseStatus, Suite, SuiteReport,
};
pub use transport::{check_event_invariants, check_trace_invariants, TransportViolation};
pub use witness::{
    modular_witness, s3_composite_is_hom, verify_big_witness, WitnessCertificate, WitnessReport, PREIMAGE_SEARCH_LENGTH,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("coset enumeration exceeded {bound} cosets")]
    Exhausted { bound: usize },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("search budget exhausted; partial subgroup counts {partial:?}")]
    ResourceLimit { partial: Vec<u128> },
    #[error("derivation stuck at {stuck}")]
    DerivationFailed { stuck: String },
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error(transparent)]
    Simplify(#[from] SimplifyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
