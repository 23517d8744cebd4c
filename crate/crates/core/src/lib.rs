//! Exact density functions of monomial ideals.
//!
//! Given a monomial ideal `I` in a polynomial ring (or a monomial quotient
//! ring), the crate computes the density functions of the filtrations
//! `{I^n}` and `{Ĩ^n}` (saturated powers) as exact piecewise polynomials, and
//! from them the ε-multiplicity, the α and β invariants, diagonal-subalgebra
//! multiplicities and mixed multiplicities.

pub mod calc;
pub mod cli;
pub mod density;
pub mod error;
pub mod hilbert;
pub mod ideal;
pub mod io;
pub mod linalg;
pub mod monomial;
pub mod piecewise;
pub mod poly;
pub mod qpfit;
pub mod ring;
pub mod scalar;
pub mod surd;
pub mod vpf;

pub use error::{Error, Result};
pub use ideal::MonomialIdeal;
pub use monomial::Monomial;
pub use ring::RingDescriptor;
pub use scalar::Rational;
