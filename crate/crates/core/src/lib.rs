//! Exact certification of the general-position conditions that make a
//! degree-`M` hypersurface `F ⊂ P^M` birationally superrigid: point
//! classification, the rank-3 condition (G), the regularity conditions
//! (R1)/(R2)/(R3), blow-up rank behaviour at quadratic points, and the
//! closed-form codimension counts for the complement of the good family.
//!
//! Everything runs over exact fields: the rationals or an odd prime field.

pub mod blowup;
pub mod census;
pub mod codim;
pub mod enumerate;
pub mod error;
pub mod expansion;
pub mod field;
pub mod groebner;
pub mod input;
pub mod linalg;
pub mod membership;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod records;
pub mod regularity;
pub mod singularity;

pub use error::{Error, Result};
pub use expansion::{expand_at, restrict_to_tangent, ProjectivePoint, TangentRestriction, TaylorExpansion};
pub use field::{CoefficientField, Field, PrimeField, Rationals};
pub use groebner::{groebner_basis, ideal_dimension, is_regular_sequence, Budget, IdealDimension};
pub use linalg::Matrix;
pub use monomial::Monomial;
pub use poly::Polynomial;
pub use singularity::{classify_point, PointKind, PointReport};
pub use input::{parse_hypersurface, parse_point, FieldSpec, Hypersurface};
pub use membership::{analyze_point, check_membership, MembershipOptions, MembershipReport, MembershipVerdict, Witness};
pub use records::{Envelope, PointRecord, Record, SCHEMA_VERSION};
