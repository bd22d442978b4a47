//! Exact-arithmetic lower bounds for positive integer polynomials over the
//! standard simplex.
//!
//! The library computes two kinds of certified bounds for
//! min over Delta_k of P, given P in Z[X_1, ..., X_k] positive on the
//! simplex:
//!
//! * closed forms depending only on (k, d, tau), and
//! * an instance-specific bound obtained by deforming the critical-point
//!   system, rewriting in the quotient algebra basis, computing the
//!   characteristic polynomial of the multiplication map via Newton's
//!   identities, and bounding reciprocal roots of its specialization, with
//!   a face recursion handling boundary minimizers.
//!
//! Everything is exact: big integers, big rationals, and polynomials in
//! s = 1/t with integer coefficients. No floating point is involved in any
//! certified value.

pub mod arith;
pub mod bounds;
pub mod charpoly;
pub mod error;
pub mod multipoly;
pub mod oracle;
pub mod quotient;
pub mod selftest;

pub use arith::{Integer, Rational, SPoly};
pub use bounds::{
    certified_lower_bound, closed_form_full, closed_form_interior, closed_form_simplified,
    example_family, BoundReport, CertifyOptions, ClosedFormParams, Contribution,
    ContributionKind, FaceDescriptor,
};
pub use charpoly::{interior_bound, interior_pipeline, InteriorData};
pub use error::{Error, Result};
pub use multipoly::{parse_poly, MultiPoly, ProblemInstance};
pub use oracle::{direct_charpoly, grid_min, numeric_membership_check, GridSpec};
pub use quotient::DEFAULT_DIM_CAP;
