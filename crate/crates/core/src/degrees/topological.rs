use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::heights::RationalPoint;
use crate::poly::roots::rational_roots;
use crate::poly::{resultant_eliminate, BivariatePoly, Degree, DominantMap, Rationals, UnivariatePoly, Var};

/// Default number of (shear, target) trials for the topological degree.
pub const DEFAULT_TRIALS: usize = 4;

/// The generic fiber size together with the per-trial counts that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopologicalDegree {
    pub value: u64,
    pub observed: Vec<usize>,
}

/// `f(x + t·y, y) − q` as a pair of polynomials.
fn sheared_system(f: &DominantMap, t: &BigRational, q: (&BigRational, &BigRational)) -> (BivariatePoly, BivariatePoly) {
    let sx = BivariatePoly::x() + BivariatePoly::y() * BivariatePoly::from_rational(t.clone());
    let sy = BivariatePoly::y();
    let g1 = f.f1.compose(&Rationals, &sx, &sy) - BivariatePoly::from_rational(q.0.clone());
    let g2 = f.f2.compose(&Rationals, &sx, &sy) - BivariatePoly::from_rational(q.1.clone());
    (g1, g2)
}

/// Whether the coefficient of the top power of `y` is a nonzero constant, so that
/// the eliminant sees every affine solution and none at infinity.
fn monic_in_y(p: &BivariatePoly) -> bool {
    match p.degree_in(Var::Y) {
        Degree::Finite(d) if d > 0 => p.coefficients_in(Var::Y)[d as usize].is_constant(),
        _ => false,
    }
}

/// `Res_y` of the sheared system, or `None` when the shear is unsuitable.
fn eliminant(g1: &BivariatePoly, g2: &BivariatePoly) -> Result<Option<UnivariatePoly>> {
    if !(monic_in_y(g1) || monic_in_y(g2)) {
        return Ok(None);
    }
    if g1.degree_in(Var::Y) == Degree::Finite(0) || g2.degree_in(Var::Y) == Degree::Finite(0) {
        return Ok(None);
    }
    resultant_eliminate(g1, g2, Var::Y).map(Some)
}

fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    let num: i64 = rng.gen_range(1_000_000..=1_000_000_000);
    let den: i64 = rng.gen_range(1_000_000..=1_000_000_000);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    BigRational::new(BigInt::from(sign * num), BigInt::from(den))
}

/// Number of distinct preimages of a general point.
///
/// Each trial applies a random shear `(x, y) ↦ (x + t·y, y)` with `t ∈ [1, 10⁶]`,
/// picks a random target with large numerators and denominators, eliminates `y`
/// and counts the distinct roots of the eliminant. The value is accepted once two
/// trials agree.
pub fn lambda2<R: Rng + ?Sized>(f: &DominantMap, trials: usize, rng: &mut R) -> Result<TopologicalDegree> {
    let mut observed = Vec::new();
    for _ in 0..trials.max(2) {
        let t = BigRational::from_integer(rng.gen_range(1i64..=1_000_000).into());
        let q = (random_rational(rng), random_rational(rng));
        let (g1, g2) = sheared_system(f, &t, (&q.0, &q.1));
        let count = match eliminant(&g1, &g2)? {
            Some(r) if !r.is_zero() => r.squarefree_part()?.degree_or_zero(),
            _ => 0,
        };
        observed.push(count);
        let agree = observed.iter().filter(|&&c| c == count).count();
        if count > 0 && agree >= 2 {
            return Ok(TopologicalDegree { value: count as u64, observed });
        }
    }
    Err(Error::Undetermined { observed })
}

/// Preimages not defined over ℚ, grouped by the factor of the eliminant that
/// carries their sheared x-coordinates. The factor has no rational roots but is
/// not necessarily irreducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrrationalPreimages {
    /// Polynomial in the sheared coordinate `x − t·y` vanishing at these points.
    pub eliminant_factor: UnivariatePoly,
    pub multiplicity: u32,
    pub count: usize,
}

/// The fiber of a map over a rational point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fiber {
    /// Rational preimages with their multiplicities, in increasing order.
    pub rational: Vec<(RationalPoint, u32)>,
    pub irrational: Vec<IrrationalPreimages>,
    /// Number of points counted with multiplicity.
    pub total_multiplicity: u32,
    /// The shear parameter `t` that separated the points.
    pub shear: i64,
}

impl Fiber {
    pub fn distinct_points(&self) -> usize {
        self.rational.len() + self.irrational.iter().map(|g| g.count).sum::<usize>()
    }

    pub fn multiplicity_of(&self, p: &RationalPoint) -> Option<u32> {
        self.rational.iter().find(|(q, _)| q == p).map(|&(_, m)| m)
    }
}

fn as_univariate_in_y(p: &BivariatePoly) -> UnivariatePoly {
    let d = p.degree_in(Var::Y).finite().unwrap_or(0) as usize;
    let mut coeffs = vec![BigRational::zero(); d + 1];
    for (&(i, j), c) in p.terms() {
        debug_assert_eq!(i, 0);
        coeffs[j as usize] = c.clone();
    }
    UnivariatePoly::new(coeffs)
}

const MAX_SHEAR: i64 = 16;

/// The preimages of `q`, with multiplicities read off the sheared eliminant.
///
/// Shears `t = 1, 2, …` are tried until every rational root of the eliminant lifts
/// to exactly one point; the eliminant vanishing identically for two shears means the
/// fiber is a curve.
pub fn count_preimages(f: &DominantMap, q: &RationalPoint) -> Result<Fiber> {
    let (qx, qy) = (q.x1(), q.x2());
    let mut vanished = 0;
    'shear: for t in 1..=MAX_SHEAR {
        let tq = BigRational::from_integer(t.into());
        let (g1, g2) = sheared_system(f, &tq, (&qx, &qy));
        let Some(r) = eliminant(&g1, &g2)? else { continue };
        if r.is_zero() {
            vanished += 1;
            if vanished >= 2 {
                return Err(Error::NonFiniteFiber);
            }
            continue;
        }
        let mut rational = BTreeMap::new();
        let mut irrational = Vec::new();
        let mut total = 0u32;
        for (factor, mult) in r.squarefree_decomposition()? {
            let roots = rational_roots(&factor);
            let mut rest = factor.clone();
            for x0 in &roots {
                rest = rest.div_rem(&UnivariatePoly::linear_with_root(x0)).0;
                let h1 = as_univariate_in_y(&g1.specialize(Var::X, x0));
                let h2 = as_univariate_in_y(&g2.specialize(Var::X, x0));
                let g = h1.gcd(&h2);
                if g.degree() != Degree::Finite(1) {
                    // Several points share this sheared coordinate.
                    continue 'shear;
                }
                let y0 = -g.coeff(0) / g.coeff(1);
                let x = x0 + &tq * &y0;
                rational.insert(RationalPoint::new(&x, &y0), mult);
                total += mult;
            }
            let count = rest.degree_or_zero();
            if count > 0 {
                total += mult * count as u32;
                irrational.push(IrrationalPreimages {
                    eliminant_factor: rest.monic(),
                    multiplicity: mult,
                    count,
                });
            }
        }
        return Ok(Fiber {
            rational: rational.into_iter().collect(),
            irrational,
            total_multiplicity: total,
            shear: t,
        });
    }
    Err(Error::InternalInconsistency(format!(
        "no shear up to {MAX_SHEAR} separates the fiber"
    )))
}
