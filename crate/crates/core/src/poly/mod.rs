//! Exact polynomial algebra: sparse bivariate polynomials over ℚ and 𝔽ₚ,
//! dense univariate polynomials, polynomial maps of the plane and resultants.

pub mod dense;
mod degree;
mod map;
pub mod resultant;
pub mod ring;
pub mod roots;
mod sparse;
mod univariate;

pub use degree::Degree;
pub use map::{DominantMap, MapEvaluator, ModMap, PolynomialMap, DEFAULT_POLY_BIT_BUDGET};
pub use resultant::resultant_eliminate;
pub use ring::{CoeffRing, PrimeField, Rationals};
pub use sparse::{BivariatePoly, Exponent, ModPoly, SparsePoly, Var};
pub use univariate::UnivariatePoly;

pub(crate) use univariate::rational_to_f64;

/// `outer ∘ inner`.
pub fn compose_maps(outer: &PolynomialMap, inner: &PolynomialMap) -> crate::Result<PolynomialMap> {
    PolynomialMap::compose(outer, inner)
}

pub fn map_degree(f: &PolynomialMap) -> crate::Result<u32> {
    f.degree()
}

pub fn reduce_map_mod_p(f: &PolynomialMap, p: PrimeField) -> crate::Result<ModMap> {
    f.reduce_mod_p(p)
}

pub fn jacobian_is_nonzero(f: &PolynomialMap) -> bool {
    f.jacobian_is_nonzero()
}

/// `r / gcd(r, r′)`, monic.
pub fn squarefree_part(r: &UnivariatePoly) -> crate::Result<UnivariatePoly> {
    r.squarefree_part()
}
