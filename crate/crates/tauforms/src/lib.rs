//! Exact symbolic toolkit for order-one algebraic differential equations on
//! plane curves over differential fields Q(c_1,...,c_k)(t).
//!
//! The crate builds first jet-space prolongations and tau-forms, evaluates
//! fiberwise pairings and pullbacks, runs bounded-degree searches for the
//! geometric-triviality and strict-disintegration criteria, and computes
//! Kodaira-Spencer cup-product ranks and tau-form global-section dimensions
//! for hyperelliptic curves. All arithmetic is exact; there is no floating
//! point anywhere.

pub mod error;
pub mod vars;
pub mod mpoly;
pub mod mrat;
pub mod basefield;
pub mod geompoly;
pub mod groebner;
pub mod jet;
pub mod tauform;
pub mod triviality;

pub use error::{Error, Result};
pub use vars::{ConstantSymbol, VarId, Vars};
