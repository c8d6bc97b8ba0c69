//! Exact lifting depths of automorphisms of height-2 formal modules over
//! quasi-canonical liftings, with brute-force Haar-integration oracles.

pub mod error;
pub mod field;
pub mod haar;
pub mod lifting;
pub mod quaternion;
pub mod sampling;
pub mod verify;
pub mod value;

pub use error::{Error, Result};
pub use field::{FieldParams, QuadExtElem, Series, Valuation};
pub use quaternion::{ExtCase, Mat2, Membership, OrderSpec, QuatElem, Zeta};
pub use value::ValueExt;
