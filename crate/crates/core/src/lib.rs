pub mod eisenstein;
pub mod epstein;
pub mod error;
pub mod harness;
pub mod lfunctions;
pub mod modgroup;
pub mod numerics;
pub mod quadforms;

pub use error::{Error, Result};
pub use modgroup::{invariant_height, reduce_to_fundamental, HalfPlanePoint, ModularWord};
pub use numerics::ComplexValue;
