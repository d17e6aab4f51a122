use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::degree::Degree;
use super::ring::{PrimeField, Rationals};
use super::sparse::{BivariatePoly, ModPoly, SparsePoly, Var};
use crate::error::{Error, Result};
use crate::heights::RationalPoint;

/// Default bit budget for a single polynomial during exact composition.
pub const DEFAULT_POLY_BIT_BUDGET: u64 = 100_000_000;

/// A polynomial self-map `(x, y) ↦ (f1(x, y), f2(x, y))` of the plane over ℚ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolynomialMap {
    pub f1: BivariatePoly,
    pub f2: BivariatePoly,
}

impl PolynomialMap {
    pub fn new(f1: BivariatePoly, f2: BivariatePoly) -> Self {
        PolynomialMap { f1, f2 }
    }

    pub fn identity() -> Self {
        Self::new(BivariatePoly::x(), BivariatePoly::y())
    }

    pub fn components(&self) -> [&BivariatePoly; 2] {
        [&self.f1, &self.f2]
    }

    /// `outer ∘ inner` with the default bit budget.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        Self::compose_with_budget(outer, inner, DEFAULT_POLY_BIT_BUDGET)
    }

    pub fn compose_with_budget(outer: &Self, inner: &Self, bit_budget: u64) -> Result<Self> {
        let f1 = outer
            .f1
            .compose_budgeted(&Rationals, &inner.f1, &inner.f2, bit_budget)?;
        let f2 = outer
            .f2
            .compose_budgeted(&Rationals, &inner.f1, &inner.f2, bit_budget)?;
        Ok(Self::new(f1, f2))
    }

    /// The n-th iterate, by repeated composition.
    pub fn iterate(&self, n: u32) -> Result<Self> {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = Self::compose(self, &acc)?;
        }
        Ok(acc)
    }

    /// `max(deg f1, deg f2)`; the zero map is rejected.
    pub fn degree(&self) -> Result<u32> {
        self.f1
            .total_degree()
            .max(self.f2.total_degree())
            .finite()
            .ok_or_else(|| Error::DegenerateInput("both components are zero".into()))
    }

    /// Componentwise reduction modulo p.
    pub fn reduce_mod_p(&self, field: PrimeField) -> Result<ModMap> {
        Ok(ModMap {
            field,
            f1: self.f1.reduce_mod(&field)?,
            f2: self.f2.reduce_mod(&field)?,
        })
    }

    pub fn jacobian_determinant(&self) -> BivariatePoly {
        let r = &Rationals;
        let a = self.f1.derivative(r, Var::X);
        let b = self.f1.derivative(r, Var::Y);
        let c = self.f2.derivative(r, Var::X);
        let d = self.f2.derivative(r, Var::Y);
        &(&a * &d) - &(&b * &c)
    }

    pub fn jacobian_is_nonzero(&self) -> bool {
        !self.jacobian_determinant().is_zero()
    }

    pub fn into_dominant(self) -> Result<DominantMap> {
        DominantMap::new(self)
    }

    /// Least common multiple of every coefficient denominator of both components.
    pub fn denominator_lcm(&self) -> BigInt {
        self.f1.denominator_lcm().lcm(&self.f2.denominator_lcm())
    }

    pub fn max_terms(&self) -> usize {
        self.f1.num_terms().max(self.f2.num_terms())
    }

    /// Exact image of a rational point.
    pub fn evaluate(&self, p: &RationalPoint) -> RationalPoint {
        self.evaluate_budgeted(p, u64::MAX)
            .expect("unbounded evaluation cannot exceed its budget")
    }

    /// Exact image, failing once any canonical integer of the image exceeds
    /// `bit_budget` bits.
    pub fn evaluate_budgeted(&self, p: &RationalPoint, bit_budget: u64) -> Result<RationalPoint> {
        evaluator(self).eval(p, bit_budget)
    }

    /// Precomputed integer form for repeated evaluation along an orbit.
    pub fn evaluator(&self) -> MapEvaluator {
        evaluator(self)
    }
}

/// Evaluates a map on canonical integer triples without intermediate rationals:
/// with `D` the common coefficient denominator and `d = deg f`, the image of
/// `[c : a₁ : a₂]` is `[D cᵈ : D f₁(a/c) cᵈ : D f₂(a/c) cᵈ]`.
pub struct MapEvaluator {
    denominator: BigInt,
    degree: u32,
    components: [Vec<(u32, u32, BigInt)>; 2],
}

fn evaluator(f: &PolynomialMap) -> MapEvaluator {
    let denominator = f.denominator_lcm();
    let degree = f.degree().unwrap_or(0);
    let scaled = |p: &BivariatePoly| {
        p.terms()
            .map(|(&(i, j), c)| {
                let b = (c * BigRational::from_integer(denominator.clone())).to_integer();
                (i, j, b)
            })
            .collect::<Vec<_>>()
    };
    MapEvaluator {
        components: [scaled(&f.f1), scaled(&f.f2)],
        denominator,
        degree,
    }
}

impl MapEvaluator {
    pub fn eval(&self, p: &RationalPoint, bit_budget: u64) -> Result<RationalPoint> {
        let [v1, v2, den] = self.homogeneous_image(p);
        self.check(RationalPoint::from_homogeneous(v1, v2, den), bit_budget)
    }

    fn check(&self, image: RationalPoint, bit_budget: u64) -> Result<RationalPoint> {
        if image.bits() > bit_budget {
            return Err(Error::OrbitBudgetExceeded { budget: bit_budget, iterates: 0 });
        }
        Ok(image)
    }

    fn homogeneous_image(&self, p: &RationalPoint) -> [BigInt; 3] {
        let (a1, a2, c) = p.canonical();
        let integral = c.is_one();
        let mut pow_a1: HashMap<u32, BigInt> = HashMap::new();
        let mut pow_a2: HashMap<u32, BigInt> = HashMap::new();
        let mut pow_c: HashMap<u32, BigInt> = HashMap::new();
        let pw = |cache: &mut HashMap<u32, BigInt>, base: &BigInt, e: u32| -> BigInt {
            cache
                .entry(e)
                .or_insert_with(|| num_traits::pow(base.clone(), e as usize))
                .clone()
        };
        let mut values = [BigInt::zero(), BigInt::zero()];
        for (k, comp) in self.components.iter().enumerate() {
            let mut acc = BigInt::zero();
            for (i, j, b) in comp {
                let mut t = b * pw(&mut pow_a1, a1, *i) * pw(&mut pow_a2, a2, *j);
                if !integral {
                    t *= pw(&mut pow_c, c, self.degree - i - j);
                }
                acc += t;
            }
            values[k] = acc;
        }
        let den = if integral {
            self.denominator.clone()
        } else {
            &self.denominator * num_traits::pow(c.clone(), self.degree as usize)
        };
        let [v1, v2] = values;
        [v1, v2, den]
    }
}

impl fmt::Display for PolynomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}", self.f1, self.f2)
    }
}

impl fmt::Debug for PolynomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolynomialMap({self})")
    }
}

/// A map that passed the Jacobian test, hence is dominant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DominantMap(PolynomialMap);

impl DominantMap {
    pub fn new(f: PolynomialMap) -> Result<Self> {
        if f.jacobian_is_nonzero() {
            Ok(DominantMap(f))
        } else {
            Err(Error::NotDominant)
        }
    }

    pub fn map(&self) -> &PolynomialMap {
        &self.0
    }

    pub fn into_inner(self) -> PolynomialMap {
        self.0
    }
}

impl Deref for DominantMap {
    type Target = PolynomialMap;
    fn deref(&self) -> &PolynomialMap {
        &self.0
    }
}

/// A map with coefficients in a prime field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModMap {
    pub field: PrimeField,
    pub f1: ModPoly,
    pub f2: ModPoly,
}

impl ModMap {
    pub fn compose(outer: &Self, inner: &Self) -> Self {
        assert_eq!(outer.field, inner.field, "maps over different fields");
        let f = &outer.field;
        ModMap {
            field: *f,
            f1: outer.f1.compose(f, &inner.f1, &inner.f2),
            f2: outer.f2.compose(f, &inner.f1, &inner.f2),
        }
    }

    pub fn identity(field: PrimeField) -> Self {
        ModMap {
            field,
            f1: SparsePoly::var(&field, Var::X),
            f2: SparsePoly::var(&field, Var::Y),
        }
    }

    pub fn iterate(&self, n: u32) -> Self {
        let mut acc = Self::identity(self.field);
        for _ in 0..n {
            acc = Self::compose(self, &acc);
        }
        acc
    }

    pub fn degree(&self) -> Degree {
        self.f1.total_degree().max(self.f2.total_degree())
    }
}
