//! Arcs, pencil arcs and hierarchical arcs in PG(2, q^2), their construction
//! from Baer subplanes, exhaustive bound searches, and the schemes they give.

pub mod arcs;
pub mod baer;
pub mod bounds;
pub mod construct;
pub mod extract;
pub mod incidence;

use thiserror::Error;

use crate::access::AccessError;
use crate::field::FieldError;
use crate::projective::ProjectiveError;
use crate::scheme::SchemeError;

pub use arcs::{
    conic, conic_arc, line_points, plane_pencil, verify_harc, verify_parc, HierarchicalArc, PencilArc, Violation,
};
pub use baer::{baer_structure, BaerStructure, BaerSummary, MAX_BAER_ORDER};
pub use bounds::{harc_bound_check, parc_bound_check, two_line_parc, BoundReport, MAX_BOUND_ORDER};
pub use construct::{construct_harc, construct_parc, expand_arc_to_parc, ParcVariant};
pub use extract::{scheme_from_harc, scheme_from_parc};
pub use incidence::IncidenceStructure;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("{0}")]
    Violation(Violation),
    #[error("not an arc: {0}")]
    NotAnArc(String),
    #[error("variant {variant} needs {} q, got q = {q}", if *variant >= 31 { "even" } else { "odd" })]
    ParityMismatch { q: u32, variant: u32 },
    #[error("unknown parc variant {0}; expected 26, 27, 28, 31 or 32")]
    UnknownVariant(u32),
    #[error("order {0} is not supported here")]
    UnsupportedOrder(u32),
    #[error("no line of the subplane is external to K1")]
    NoExternalLine,
    #[error("search over PG(2, {0}) is too large")]
    TooLarge(u32),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("structure check failed: {0}")]
    StructureCheck(String),
    #[error("extracted scheme failed verification: {0}")]
    VerificationFailed(String),
    #[error("{0}")]
    Degenerate(String),
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Access(#[from] AccessError),
}
