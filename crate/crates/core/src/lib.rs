//! Finite rings, matrices over them, explicit subgroup enumeration and
//! stability certificates for linear groups over finite rings.

pub mod classify;
pub mod error;
pub mod lab;
pub mod matrix;
pub mod predicates;
pub mod probe;
pub mod ring;
pub mod stability;
pub mod subgroup;

pub use error::{GroupError, MatError, RingError, StabilityError};
pub use lab::GroupLab;
pub use matrix::{Factor, FactorKind, FactorWord, GroupElement, Mat, MatSpace, Transvection};
pub use ring::{build_ring, Elem, Family, FiniteRing, Ideal, RingDescriptor, RingHom};
pub use subgroup::{SubgroupClosure, DEFAULT_CAP};
