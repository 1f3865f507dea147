//! Exact arithmetic primitives for p-adic computations: elements of Q_p with
//! digit rendering at a fixed working precision, and the extended value
//! monoid used for filtration levels.

mod error;
mod padic;
mod xreal;

pub use error::{Error, Result};
pub use padic::{int_valuation, rational_valuation, PadicCtx, PadicNumber, Val};
pub use xreal::XReal;

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
