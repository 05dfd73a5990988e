//! Projective Reed-Muller codes over finite fields: construction, dual and
//! hull structure in closed form, and exact linear-algebra oracles that check
//! every closed-form value.

pub mod error;
pub mod field;
pub mod geometry;
pub mod linalg;
pub mod oracle;
pub mod report;
pub mod theory;

pub use error::{Error, Result};
pub use field::{power_sum, FieldElement, FieldSpec};
pub use geometry::{enumerate_monomials, enumerate_standard_points, evaluate, point_count, Monomial, ProjectivePoint};
pub use linalg::{rowspace_intersection, same_rowspace, GfMatrix};
