//! Exact computations with generalized affine buildings over lexicographic
//! value groups `Λ = ℚ^k`.

pub mod apartment_morphisms;
pub mod apartments;
pub mod building_morphisms;
pub mod json;
pub mod lattice_building;
pub mod matrix;
pub mod norm_building;
pub mod ordered_groups;
pub mod poly;
pub mod render;
pub mod polyhedral;
pub mod root_systems;
pub mod sampling;
pub mod scalar;
pub mod suite;
pub mod valued_fields;
pub mod weyl_extension;

pub use matrix::Matrix;
pub use ordered_groups::{LexValue, OrderedGroupMorphism};
pub use scalar::{q, qi, Scalar};
pub use valued_fields::{FieldElement, FieldKind, ValuationSpec};

/// Exact rationals.
pub type Rational = num_rational::BigRational;
/// Matrices over `ℚ`.
pub type QMatrix = Matrix<Rational>;
/// Matrices over a rational function field.
pub type FMatrix = Matrix<FieldElement>;
