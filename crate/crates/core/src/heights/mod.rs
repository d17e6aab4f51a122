//! Weil heights of points of 𝔸²(ℚ).
//!
//! Over ℚ every local weight is 1, so for a point written canonically as
//! `(a₁/c, a₂/c)` the global height is `log max(|a₁|, |a₂|, c)`. We carry every
//! height as the exact argument of its logarithm and only take logs on demand.
//! The decomposition into local heights is then an identity between integers:
//! the archimedean argument `max(|a₁|,|a₂|,c)/c` times `p^{v_p(c)}` over the
//! primes dividing `c` is exactly `max(|a₁|,|a₂|,c)`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::poly::{rational_to_f64, PolynomialMap};

pub mod factor;
mod point;

pub use point::{parse_rational, PointParseError, RationalPoint};

/// A place of ℚ.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    /// The p-adic absolute value for a prime p.
    Finite(BigInt),
    Archimedean,
}

impl Place {
    pub fn finite(p: i64) -> Self {
        Place::Finite(BigInt::from(p))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Archimedean => write!(f, "inf"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Natural logarithm of a positive integer of any size.
pub fn ln_bigint(n: &BigInt) -> f64 {
    assert!(n.is_positive(), "log of a non-positive integer");
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (n >> shift as usize).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of a positive rational of any size.
pub fn ln_rational(q: &BigRational) -> f64 {
    if q.numer().bits() < 1000 && q.denom().bits() < 1000 {
        return rational_to_f64(q).ln();
    }
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

/// `τ_v(P) = log r` with `r ≥ 1`; for finite places r is a power of p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalHeight {
    pub place: Place,
    #[serde(serialize_with = "serialize_rational")]
    pub log_argument: BigRational,
}

impl LocalHeight {
    pub fn value(&self) -> f64 {
        ln_rational(&self.log_argument)
    }
}

/// The global height `log M` with `M = max(|a₁|, |a₂|, c)` carried exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalHeight {
    pub log_argument: BigInt,
}

impl GlobalHeight {
    pub fn value(&self) -> f64 {
        ln_bigint(&self.log_argument)
    }

    pub fn is_zero(&self) -> bool {
        self.log_argument.is_one()
    }
}

/// The global height together with its nonzero local contributions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeightDecomposition {
    #[serde(serialize_with = "serialize_int")]
    pub global_log_argument: BigInt,
    pub locals: Vec<LocalHeight>,
}

impl HeightDecomposition {
    /// Product of the local log arguments, which must equal the global one.
    pub fn local_product(&self) -> BigRational {
        self.locals
            .iter()
            .fold(BigRational::one(), |acc, l| acc * &l.log_argument)
    }

    pub fn is_exact(&self) -> bool {
        self.local_product() == BigRational::from_integer(self.global_log_argument.clone())
    }

    pub fn value(&self) -> f64 {
        ln_bigint(&self.global_log_argument)
    }
}

pub fn global_height(p: &RationalPoint) -> GlobalHeight {
    let (a1, a2, c) = p.canonical();
    let m = a1.abs().max(a2.abs()).max(c.clone());
    GlobalHeight { log_argument: m }
}

pub fn local_height(p: &RationalPoint, v: &Place) -> LocalHeight {
    let (a1, a2, c) = p.canonical();
    let log_argument = match v {
        Place::Archimedean => {
            let top = a1.abs().max(a2.abs()).max(c.clone());
            BigRational::new(top, c.clone())
        }
        Place::Finite(prime) => {
            // −v_p(xᵢ) ≤ v_p(c), with equality for at least one coordinate.
            let mut r = BigInt::one();
            let mut rest = c.clone();
            while (&rest % prime).is_zero() {
                rest /= prime;
                r *= prime;
            }
            BigRational::from_integer(r)
        }
    };
    LocalHeight { place: v.clone(), log_argument }
}

pub fn height_decomposition(p: &RationalPoint) -> HeightDecomposition {
    let global = global_height(p);
    let mut locals: Vec<LocalHeight> = factor::factorize(p.denominator())
        .into_iter()
        .map(|(prime, e)| LocalHeight {
            place: Place::Finite(prime.clone()),
            log_argument: BigRational::from_integer(num_traits::pow(prime, e as usize)),
        })
        .collect();
    let arch = local_height(p, &Place::Archimedean);
    if !arch.log_argument.is_one() {
        locals.push(arch);
    }
    HeightDecomposition {
        global_log_argument: global.log_argument,
        locals,
    }
}

/// A finite set of places outside of which no iterate of the point has positive
/// local height: the archimedean place, the primes dividing a coefficient
/// denominator of the map, and the primes dividing the point's denominator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BadPlaces {
    pub places: BTreeSet<Place>,
}

impl BadPlaces {
    pub fn contains_prime(&self, p: &BigInt) -> bool {
        self.places.contains(&Place::Finite(p.clone()))
    }
}

pub fn bad_places(f: &PolynomialMap, p: &RationalPoint) -> BadPlaces {
    let mut places = BTreeSet::new();
    places.insert(Place::Archimedean);
    for n in [f.denominator_lcm(), p.denominator().clone()] {
        for (prime, _) in factor::factorize(&n) {
            places.insert(Place::Finite(prime));
        }
    }
    BadPlaces { places }
}

/// An explicit constant `C_f` with `h(f(P)) ≤ (deg f)·h(P) + C_f` for every rational P.
///
/// With `D` the common denominator of all coefficients and `bᵢⱼ = D·cᵢⱼ`, the image
/// of `[c : a₁ : a₂]` is `[D cᵈ : Σ b a₁ⁱ a₂ʲ cᵈ⁻ⁱ⁻ʲ : …]`, whose entries are bounded
/// by `max(D, T·max|b|) · Mᵈ` where T is the largest term count. Hence
/// `C_f = log max(D, max|b|) + log T`, the first summand being the height of the
/// projective coefficient vector `[D : b…]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthConstant {
    #[serde(serialize_with = "serialize_int")]
    pub coefficient_height_argument: BigInt,
    pub max_terms: usize,
}

impl GrowthConstant {
    pub fn value(&self) -> f64 {
        ln_bigint(&self.coefficient_height_argument) + (self.max_terms.max(1) as f64).ln()
    }
}

pub fn height_growth_constant(f: &PolynomialMap) -> GrowthConstant {
    let d = f.denominator_lcm();
    let dq = BigRational::from_integer(d.clone());
    let max_b = f
        .components()
        .iter()
        .flat_map(|c| c.terms().map(|(_, a)| (a * &dq).to_integer().abs()))
        .max()
        .unwrap_or_else(BigInt::zero);
    GrowthConstant {
        coefficient_height_argument: d.max(max_b),
        max_terms: f.max_terms(),
    }
}

pub(crate) fn serialize_int<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match n.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&n.to_string()),
    }
}

pub(crate) fn serialize_rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    if q.is_integer() {
        serialize_int(q.numer(), s)
    } else {
        s.serialize_str(&q.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> RationalPoint {
        s.parse().unwrap()
    }

    #[test]
    fn global_height_examples() {
        assert_eq!(global_height(&pt("2,0")).log_argument, BigInt::from(2));
        assert!((global_height(&pt("2,0")).value() - 2f64.ln()).abs() < 1e-15);
        assert!(global_height(&pt("0,0")).is_zero());
        assert_eq!(global_height(&pt("1/2,3")).log_argument, BigInt::from(6));
    }

    #[test]
    fn local_height_examples() {
        let p = pt("1/2,3");
        let l2 = local_height(&p, &Place::finite(2));
        assert_eq!(l2.log_argument, BigRational::from_integer(2.into()));
        let inf = local_height(&p, &Place::Archimedean);
        assert_eq!(inf.log_argument, BigRational::from_integer(3.into()));
        let l5 = local_height(&p, &Place::finite(5));
        assert!(l5.log_argument.is_one());
        assert_eq!(l5.value(), 0.0);
    }

    #[test]
    fn decomposition_examples() {
        let d = height_decomposition(&pt("1/2,3"));
        assert_eq!(d.global_log_argument, BigInt::from(6));
        assert_eq!(
            d.locals,
            vec![
                LocalHeight { place: Place::finite(2), log_argument: BigRational::from_integer(2.into()) },
                LocalHeight { place: Place::Archimedean, log_argument: BigRational::from_integer(3.into()) },
            ]
        );
        assert!(d.is_exact());

        let d = height_decomposition(&pt("7,7"));
        assert_eq!(d.global_log_argument, BigInt::from(7));
        assert_eq!(d.locals.len(), 1);
        assert_eq!(d.locals[0].place, Place::Archimedean);

        let d = height_decomposition(&pt("0,0"));
        assert!(d.locals.is_empty());
        assert!(d.global_log_argument.is_one());
    }

    #[test]
    fn archimedean_argument_can_be_fractional() {
        let d = height_decomposition(&pt("3/2,0"));
        assert_eq!(d.global_log_argument, BigInt::from(3));
        assert_eq!(d.locals[1].log_argument, BigRational::new(3.into(), 2.into()));
        assert!(d.is_exact());
    }

    #[test]
    fn bad_places_examples() {
        use crate::poly::BivariatePoly as P;
        let f = PolynomialMap::new(P::from_int_terms(&[(1, 2, 0)]), P::from_int_terms(&[(1, 1, 2)]));
        let b = bad_places(&f, &pt("2,0"));
        assert_eq!(b.places.iter().collect::<Vec<_>>(), vec![&Place::Archimedean]);
        let b = bad_places(&f, &pt("1/2,3"));
        assert_eq!(b.places.len(), 2);
        assert!(b.contains_prime(&BigInt::from(2)));
        let g = PolynomialMap::new(
            P::from_terms(&crate::poly::Rationals, [((1, 0), BigRational::new(1.into(), 3.into()))]),
            P::y(),
        );
        let b = bad_places(&g, &pt("1,1"));
        assert!(b.contains_prime(&BigInt::from(3)));
        assert_eq!(b.places.len(), 2);
    }

    #[test]
    fn growth_constant_examples() {
        use crate::poly::BivariatePoly as P;
        let f = PolynomialMap::new(P::from_int_terms(&[(1, 2, 0)]), P::from_int_terms(&[(1, 1, 2)]));
        assert_eq!(height_growth_constant(&f).value(), 0.0);
        assert_eq!(height_growth_constant(&PolynomialMap::identity()).value(), 0.0);
        let h = PolynomialMap::new(
            P::from_terms(&crate::poly::Rationals, [((1, 0), BigRational::new(1.into(), 3.into()))]),
            P::from_int_terms(&[(5, 0, 2), (1, 0, 0)]),
        );
        // D = 3, b = (1, 15, 3), two terms.
        let c = height_growth_constant(&h);
        assert_eq!(c.coefficient_height_argument, BigInt::from(15));
        assert_eq!(c.max_terms, 2);
    }

    #[test]
    fn ln_of_huge_integers() {
        let n = BigInt::one() << 5000usize;
        assert!((ln_bigint(&n) - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }
}
