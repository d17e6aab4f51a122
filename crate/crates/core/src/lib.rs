//! Arithmetic dynamics of dominant polynomial self-maps of the affine plane over ℚ.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`]: exact sparse bivariate polynomials over ℚ and over word-sized prime
//!   fields, polynomial maps, composition, resultants and square-free parts.
//! * [`degrees`]: degree sequences, linear recurrences, the first dynamical degree as a
//!   certified real algebraic number, the growth exponent and the topological degree.
//! * [`heights`]: Weil heights of rational points, their decomposition into local
//!   heights, and the finite set of places where an orbit can pick up height.
//! * [`orbit`]: exact orbits, canonical height and arithmetic degree estimates and
//!   orbit classification.
//! * [`expr`]: a small expression language for writing maps as text.

pub mod catalog;
pub mod degrees;
pub mod error;
pub mod expr;
pub mod heights;
pub mod orbit;
pub mod poly;

pub use error::{Error, Result};
pub use heights::RationalPoint;
pub use poly::{BivariatePoly, Degree, DominantMap, PolynomialMap, UnivariatePoly};
