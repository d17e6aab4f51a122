use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::degree::Degree;
use super::ring::{CoeffRing, PrimeField, Rationals};
use crate::error::{Error, Result};

/// Exponent pair `(i, j)` of the monomial xⁱyʲ.
pub type Exponent = (u32, u32);

/// A sparse polynomial in x, y. Coefficients live in whatever ring the caller
/// passes to the arithmetic routines; no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly<E> {
    terms: BTreeMap<Exponent, E>,
}

/// Bivariate polynomial over ℚ.
pub type BivariatePoly = SparsePoly<BigRational>;

/// Bivariate polynomial over a prime field (the field travels separately).
pub type ModPoly = SparsePoly<u64>;

/// Which variable an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

impl<E> Default for SparsePoly<E> {
    fn default() -> Self {
        SparsePoly { terms: BTreeMap::new() }
    }
}

impl<E: Clone + PartialEq + fmt::Debug> SparsePoly<E> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a polynomial from terms, combining repeated exponents and dropping zeros.
    pub fn from_terms<R, I>(ring: &R, terms: I) -> Self
    where
        R: CoeffRing<Elem = E>,
        I: IntoIterator<Item = (Exponent, E)>,
    {
        let mut out = BTreeMap::new();
        for (e, c) in terms {
            accumulate(ring, &mut out, e, c);
        }
        out.retain(|_, c| !ring.is_zero(c));
        SparsePoly { terms: out }
    }

    pub fn monomial<R: CoeffRing<Elem = E>>(ring: &R, coeff: E, i: u32, j: u32) -> Self {
        Self::from_terms(ring, [((i, j), coeff)])
    }

    pub fn constant<R: CoeffRing<Elem = E>>(ring: &R, c: E) -> Self {
        Self::monomial(ring, c, 0, 0)
    }

    pub fn var<R: CoeffRing<Elem = E>>(ring: &R, v: Var) -> Self {
        match v {
            Var::X => Self::monomial(ring, ring.one(), 1, 0),
            Var::Y => Self::monomial(ring, ring.one(), 0, 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &E)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Option<&E> {
        self.terms.get(&(i, j))
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|&(i, j)| Degree::Finite(i + j))
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    pub fn degree_in(&self, v: Var) -> Degree {
        self.terms
            .keys()
            .map(|&(i, j)| Degree::Finite(if v == Var::X { i } else { j }))
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    /// Whether the polynomial has no constant term.
    pub fn vanishes_at_origin(&self) -> bool {
        !self.terms.contains_key(&(0, 0))
    }

    pub fn add<R: CoeffRing<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let mut out = self.terms.clone();
        for (e, c) in &other.terms {
            accumulate(ring, &mut out, *e, c.clone());
        }
        out.retain(|_, c| !ring.is_zero(c));
        SparsePoly { terms: out }
    }

    pub fn neg<R: CoeffRing<Elem = E>>(&self, ring: &R) -> Self {
        SparsePoly {
            terms: self.terms.iter().map(|(e, c)| (*e, ring.neg(c))).collect(),
        }
    }

    pub fn sub<R: CoeffRing<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        self.add(ring, &other.neg(ring))
    }

    pub fn scale<R: CoeffRing<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        if ring.is_zero(c) {
            return Self::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, a)| (*e, ring.mul(a, c)))
            .filter(|(_, a)| !ring.is_zero(a))
            .collect();
        SparsePoly { terms }
    }

    pub fn mul<R: CoeffRing<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut acc: HashMap<Exponent, E> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &other.terms {
                let prod = ring.mul(a, b);
                acc.entry((i1 + i2, j1 + j2))
                    .and_modify(|c| *c = ring.add(c, &prod))
                    .or_insert(prod);
            }
        }
        SparsePoly {
            terms: acc.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect(),
        }
    }

    pub fn pow<R: CoeffRing<Elem = E>>(&self, ring: &R, k: u32) -> Self {
        let mut cache = PowerCache::new(self.clone());
        cache.get(ring, k).clone()
    }

    /// Partial derivative.
    pub fn derivative<R: CoeffRing<Elem = E>>(&self, ring: &R, v: Var) -> Self {
        let terms = self.terms.iter().filter_map(|(&(i, j), c)| {
            let (k, e) = match v {
                Var::X if i > 0 => (i, (i - 1, j)),
                Var::Y if j > 0 => (j, (i, j - 1)),
                _ => return None,
            };
            Some((e, ring.mul(c, &ring.from_i64(k as i64))))
        });
        Self::from_terms(ring, terms)
    }

    /// Substitutes `(x, y) ↦ (sub_x, sub_y)`. Powers of the substituted polynomials
    /// are built by repeated squaring and memoized.
    pub fn compose<R: CoeffRing<Elem = E>>(&self, ring: &R, sub_x: &Self, sub_y: &Self) -> Self {
        self.compose_budgeted(ring, sub_x, sub_y, u64::MAX)
            .expect("unbounded composition cannot exceed its budget")
    }

    pub(crate) fn compose_budgeted<R: CoeffRing<Elem = E>>(
        &self,
        ring: &R,
        sub_x: &Self,
        sub_y: &Self,
        bit_budget: u64,
    ) -> Result<Self> {
        let mut px = PowerCache::new(sub_x.clone());
        let mut py = PowerCache::new(sub_y.clone());
        // Group by the x exponent: Σᵢ sub_xⁱ · (Σⱼ cᵢⱼ sub_yʲ).
        let mut by_i: BTreeMap<u32, Vec<(u32, &E)>> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            by_i.entry(i).or_default().push((j, c));
        }
        let mut result = Self::zero();
        for (i, row) in by_i {
            let mut inner = Self::zero();
            for (j, c) in row {
                inner = inner.add(ring, &py.get(ring, j).scale(ring, c));
            }
            let term = px.get(ring, i).mul(ring, &inner);
            result = result.add(ring, &term);
            let bits = result.bit_size(ring);
            if bits > bit_budget {
                return Err(Error::BudgetExceeded {
                    budget: bit_budget,
                    partial_degree: result.total_degree().finite().unwrap_or(0),
                });
            }
        }
        Ok(result)
    }

    pub fn bit_size<R: CoeffRing<Elem = E>>(&self, ring: &R) -> u64 {
        self.terms.values().map(|c| ring.bits(c)).sum()
    }

    /// Rewrites the polynomial as a polynomial in `v` whose coefficients are
    /// polynomials in the other variable; index k holds the coefficient of vᵏ.
    pub fn coefficients_in(&self, v: Var) -> Vec<Self> {
        let deg = match self.degree_in(v) {
            Degree::NegInfinity => return Vec::new(),
            Degree::Finite(d) => d as usize,
        };
        let mut out = vec![Self::zero(); deg + 1];
        for (&(i, j), c) in &self.terms {
            match v {
                Var::X => out[i as usize].terms.insert((0, j), c.clone()),
                Var::Y => out[j as usize].terms.insert((i, 0), c.clone()),
            };
        }
        out
    }

    pub fn map_coeffs<F, T>(&self, mut f: F) -> SparsePoly<T>
    where
        F: FnMut(&E) -> T,
    {
        SparsePoly {
            terms: self.terms.iter().map(|(e, c)| (*e, f(c))).collect(),
        }
    }

}

fn accumulate<R: CoeffRing>(
    ring: &R,
    map: &mut BTreeMap<Exponent, R::Elem>,
    e: Exponent,
    c: R::Elem,
) {
    match map.get_mut(&e) {
        Some(existing) => *existing = ring.add(existing, &c),
        None => {
            map.insert(e, c);
        }
    }
}

/// Memoized powers of one polynomial, filled by repeated squaring.
pub(crate) struct PowerCache<E> {
    powers: HashMap<u32, SparsePoly<E>>,
}

impl<E: Clone + PartialEq + fmt::Debug> PowerCache<E> {
    pub(crate) fn new(base: SparsePoly<E>) -> Self {
        let mut powers = HashMap::new();
        powers.insert(1, base);
        PowerCache { powers }
    }

    pub(crate) fn get<R: CoeffRing<Elem = E>>(&mut self, ring: &R, k: u32) -> &SparsePoly<E> {
        if k == 0 {
            self.powers
                .entry(0)
                .or_insert_with(|| SparsePoly::constant(ring, ring.one()));
            return &self.powers[&0];
        }
        if !self.powers.contains_key(&k) {
            let half = self.get(ring, k / 2).clone();
            let mut p = half.mul(ring, &half);
            if k % 2 == 1 {
                p = p.mul(ring, &self.powers[&1]);
            }
            self.powers.insert(k, p);
        }
        &self.powers[&k]
    }
}

// ---------------------------------------------------------------------------
// Conveniences for polynomials over ℚ.

impl BivariatePoly {
    pub fn x() -> Self {
        Self::var(&Rationals, Var::X)
    }

    pub fn y() -> Self {
        Self::var(&Rationals, Var::Y)
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::constant(&Rationals, c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_rational(BigRational::from_integer(c.into()))
    }

    /// Terms given as `(coefficient, i, j)` with integer coefficients.
    pub fn from_int_terms(terms: &[(i64, u32, u32)]) -> Self {
        Self::from_terms(
            &Rationals,
            terms
                .iter()
                .map(|&(c, i, j)| ((i, j), BigRational::from_integer(c.into()))),
        )
    }

    pub fn pow_q(&self, k: u32) -> Self {
        self.pow(&Rationals, k)
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        let mut xp: HashMap<u32, BigRational> = HashMap::new();
        let mut yp: HashMap<u32, BigRational> = HashMap::new();
        for (&(i, j), c) in &self.terms {
            let xi = xp.entry(i).or_insert_with(|| num_traits::pow(x.clone(), i as usize)).clone();
            let yj = yp.entry(j).or_insert_with(|| num_traits::pow(y.clone(), j as usize));
            acc += c * xi * &*yj;
        }
        acc
    }

    /// Specializes one variable to a rational value, leaving a polynomial in the other.
    pub fn specialize(&self, v: Var, value: &BigRational) -> BivariatePoly {
        let terms = self.terms.iter().map(|(&(i, j), c)| match v {
            Var::X => ((0, j), c * num_traits::pow(value.clone(), i as usize)),
            Var::Y => ((i, 0), c * num_traits::pow(value.clone(), j as usize)),
        });
        Self::from_terms(&Rationals, terms)
    }

    /// Least common multiple of all coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Reduction modulo p, dropping coefficients that vanish.
    pub fn reduce_mod(&self, field: &PrimeField) -> Result<ModPoly> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let r = field.from_rational(c).ok_or(Error::BadPrime { p: field.modulus() })?;
            if r != 0 {
                terms.insert(*e, r);
            }
        }
        Ok(SparsePoly { terms })
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == (0, 0))
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms.get(&(0, 0)).cloned().unwrap_or_else(BigRational::zero)
    }
}

impl fmt::Display for BivariatePoly {
    /// Canonical form: terms by descending total degree, then descending x exponent.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        for (k, (&(i, j), c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || (i == 0 && j == 0) {
                factors.push(mag.to_string());
            }
            for (name, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivariatePoly({self})")
    }
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&BivariatePoly> for &BivariatePoly {
            type Output = BivariatePoly;
            fn $method(self, rhs: &BivariatePoly) -> BivariatePoly {
                SparsePoly::$method(self, &Rationals, rhs)
            }
        }
        impl $trait for BivariatePoly {
            type Output = BivariatePoly;
            fn $method(self, rhs: BivariatePoly) -> BivariatePoly {
                SparsePoly::$method(&self, &Rationals, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        SparsePoly::neg(&self, &Rationals)
    }
}

impl Neg for &BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        SparsePoly::neg(self, &Rationals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = BivariatePoly::from_int_terms(&[(1, 1, 0), (-1, 1, 0), (2, 0, 1)]);
        assert_eq!(p.num_terms(), 1);
        assert_eq!((&p - &p).total_degree(), Degree::NegInfinity);
    }

    #[test]
    fn degrees() {
        let p = BivariatePoly::from_int_terms(&[(1, 2, 3), (1, 0, 2)]);
        assert_eq!(p.total_degree(), Degree::Finite(5));
        assert_eq!(p.degree_in(Var::X), Degree::Finite(2));
        assert_eq!(p.degree_in(Var::Y), Degree::Finite(3));
    }

    #[test]
    fn composition_substitutes() {
        // (x + y)^2 at (x, y) = (y, x) is unchanged; x*y at (x^2, y) is x^2 y.
        let p = BivariatePoly::from_int_terms(&[(1, 1, 1)]);
        let out = p.compose(&Rationals, &BivariatePoly::x().pow_q(2), &BivariatePoly::y());
        assert_eq!(out, BivariatePoly::from_int_terms(&[(1, 2, 1)]));
        let s = (BivariatePoly::x() + BivariatePoly::y()).pow_q(2);
        assert_eq!(s.compose(&Rationals, &BivariatePoly::y(), &BivariatePoly::x()), s);
    }

    #[test]
    fn evaluation_and_specialization() {
        let p = BivariatePoly::from_int_terms(&[(1, 1, 3), (1, 0, 2)]);
        assert_eq!(p.eval(&q(2, 1), &q(1, 2)), q(2, 8) + q(1, 4));
        let s = p.specialize(Var::X, &q(3, 1));
        assert_eq!(s, BivariatePoly::from_int_terms(&[(3, 0, 3), (1, 0, 2)]));
    }

    #[test]
    fn display_is_canonical() {
        let p = BivariatePoly::from_terms(
            &Rationals,
            [((0, 0), q(-1, 1)), ((2, 1), q(-3, 2)), ((1, 0), q(1, 1))],
        );
        assert_eq!(p.to_string(), "-3/2*x^2*y + x - 1");
        assert_eq!(BivariatePoly::zero().to_string(), "0");
    }

    #[test]
    fn reduction_mod_p() {
        let f = PrimeField::new(3);
        let p = BivariatePoly::from_int_terms(&[(3, 1, 2), (1, 2, 0)]);
        let r = p.reduce_mod(&f).unwrap();
        assert_eq!(r.num_terms(), 1);
        let bad = BivariatePoly::from_rational(q(1, 3));
        assert_eq!(bad.reduce_mod(&f), Err(Error::BadPrime { p: 3 }));
    }

    #[test]
    fn derivative() {
        let p = BivariatePoly::from_int_terms(&[(1, 1, 3), (5, 0, 2)]);
        assert_eq!(
            p.derivative(&Rationals, Var::Y),
            BivariatePoly::from_int_terms(&[(3, 1, 2), (10, 0, 1)])
        );
    }
}
