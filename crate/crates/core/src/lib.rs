//! Exact computation of generalized Galois numbers, q-multinomial
//! coefficients and generalized Rogers-Szego polynomials, together with the
//! moments, cumulants and permutation statistics of their coefficient
//! distributions.
//!
//! All arithmetic is exact (big integers and rationals). The one approximate
//! quantity anywhere in the crate is the standard normal CDF used for
//! Kolmogorov distances in [`stats`].

pub mod apps;
pub mod error;
pub mod exact;
pub mod limits;
pub mod oracle;
pub mod permstat;
pub mod qcombi;
pub mod qpoly;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use exact::Rational;
pub use limits::Limits;
pub use num_bigint::BigInt;
pub use permstat::{DescentInvTable, PermRecord};
pub use qcombi::{Composition, Partition, RogersSzegoExpansion};
pub use qpoly::{QPoly, QSeries, QTPoly};
pub use stats::{CoeffDistribution, CumulantVector, NormalityReport};

