//! Sieve for primes `p` admitting semistable `p`-isogenies of elliptic curves
//! over quadratic fields, with an auditable per-prime verdict.

pub mod arith;
pub mod decimal;
pub mod error;
pub mod factor;
pub mod polyres;
pub mod quadfield;
pub mod sieve;
pub mod strategy;

pub use error::{FieldError, SieveError, StrategyError};
pub use quadfield::{make_field, AuxPrimeData, OkElement, QuadField, Splitting};
pub use strategy::{run_family, run_fixed_field, SieveConfig, SieveReport, Status};
