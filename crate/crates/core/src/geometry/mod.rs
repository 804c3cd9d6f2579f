//! Exact real models of the arrangements and their singular fibers.

mod arrangement;
mod events;
mod qnum;

use thiserror::Error;

pub use arrangement::{
    arrangement_from_json, arrangement_to_json, build_family, Arrangement, FamilyParams, FamilyTag, LineKind,
    LineSpec, CONIC, DEFAULT_B_SLOPES, DEFAULT_C_SLOPES, DEFAULT_TANGENT_POINTS,
};
pub use events::{
    compute_events, intersect, strand_order_at, validate_genericity, BranchSide, BranchTag, Curve, Event, EventKind,
    GenericityReport, IntersectionPoint, Strand, StrandTable, Violation, ViolationKind,
};
pub use qnum::{qnum_compare, rat, simplest_between, QNum, QNumJson};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("not representable with a single square root: {0}")]
    NonRepresentable(String),
    #[error("singular fiber: {0}")]
    SingularFiber(String),
    #[error("arrangement is not generic: {0}")]
    NotGeneric(String),
    #[error("arrangement JSON: {0}")]
    Json(String),
}
