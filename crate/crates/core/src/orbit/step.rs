//! Orbit iteration with coordinates kept factored over a fixed prime set.
//!
//! Along an orbit every denominator is a product of primes dividing the
//! coefficient denominator or the starting point's denominator. Writing each
//! numerator as `u · Π pᵉ` with `u` free of those primes turns the canonical
//! reduction into exponent arithmetic: a sum of terms has p-adic valuation equal
//! to the smallest term valuation whenever that minimum is attained once, and
//! only ties need a divisibility test. This avoids gcds of multi-million-bit
//! integers, which are quadratic in the bignum backend.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::heights::RationalPoint;
use crate::poly::PolynomialMap;

/// `u · Π pᵢ^{eᵢ}`; `u == 0` encodes zero.
#[derive(Clone, Debug)]
struct Factored {
    unit: BigInt,
    exps: Vec<u64>,
}

struct Term {
    i: u32,
    j: u32,
    coeff: Factored,
}

pub(super) struct Stepper {
    primes: Vec<BigInt>,
    components: [Vec<Term>; 2],
    degree: u32,
    /// Exponents of the common coefficient denominator.
    den_exps: Vec<u64>,
    coords: [Factored; 2],
    /// Exponents of the current denominator, which is an S-unit.
    den: Vec<u64>,
}

/// Strips the listed primes from `x`, returning `(x / Π pᵉ, e)`.
fn factor_over(x: &BigInt, primes: &[BigInt]) -> Factored {
    let mut unit = x.clone();
    let exps = primes
        .iter()
        .map(|p| if unit.is_zero() { 0 } else { strip(&mut unit, p) })
        .collect();
    Factored { unit, exps }
}

/// Removes every factor `p` from nonzero `x` and returns how many there were.
fn strip(x: &mut BigInt, p: &BigInt) -> u64 {
    if p == &BigInt::from(2) {
        let k = x.trailing_zeros().unwrap_or(0);
        *x >>= k as usize;
        return k;
    }
    // Divide by the largest power of p below 2⁶⁴ first: one pass per 64 bits of p-part.
    let (chunk, t) = {
        let (mut q, mut t) = (p.clone(), 1);
        while (&q * p).bits() <= 64 {
            q *= p;
            t += 1;
        }
        (q, t)
    };
    let mut k = 0;
    loop {
        let (q, r) = x.div_rem(&chunk);
        if !r.is_zero() {
            break;
        }
        *x = q;
        k += t;
    }
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            break;
        }
        *x = q;
        k += 1;
    }
    k
}

fn prime_power(p: &BigInt, e: u64) -> BigInt {
    if p == &BigInt::from(2) {
        BigInt::one() << e as usize
    } else {
        num_traits::pow(p.clone(), e as usize)
    }
}

fn expand(f: &Factored, primes: &[BigInt]) -> BigInt {
    let mut x = f.unit.clone();
    if x.is_zero() {
        return x;
    }
    for (p, &e) in primes.iter().zip(&f.exps) {
        if e > 0 {
            x *= prime_power(p, e);
        }
    }
    x
}

impl Stepper {
    /// `primes` must contain every prime of the coefficient denominator and of the
    /// denominator of `start`.
    pub(super) fn new(f: &PolynomialMap, start: &RationalPoint, primes: Vec<BigInt>) -> Self {
        let d = f.denominator_lcm();
        let dq = BigRational::from_integer(d.clone());
        let components = f.components().map(|c| {
            c.terms()
                .map(|(&(i, j), a)| Term { i, j, coeff: factor_over(&(a * &dq).to_integer(), &primes) })
                .collect()
        });
        let den_exps = factor_over(&d, &primes);
        assert!(den_exps.unit.is_one(), "prime set misses a coefficient denominator prime");
        let (a1, a2, c) = start.canonical();
        let den = factor_over(c, &primes);
        assert!(den.unit.is_one(), "prime set misses a denominator prime of the start point");
        Stepper {
            components,
            degree: f.degree().unwrap_or(0),
            den_exps: den_exps.exps,
            coords: [factor_over(a1, &primes), factor_over(a2, &primes)],
            den: den.exps,
            primes,
        }
    }

    /// Bits of the canonical integers, from the factored form.
    fn bits(&self, f: &Factored) -> u64 {
        if f.unit.is_zero() {
            return 0;
        }
        let extra: f64 = self
            .primes
            .iter()
            .zip(&f.exps)
            .map(|(p, &e)| e as f64 * p.to_f64().map_or(p.bits() as f64, f64::log2))
            .sum();
        f.unit.bits() + extra.ceil() as u64
    }

    fn component(&self, terms: &[Term], pow1: &mut HashMap<u32, BigInt>, pow2: &mut HashMap<u32, BigInt>) -> Factored {
        let n = self.primes.len();
        let [x, y] = &self.coords;
        let mut parts: Vec<(BigInt, Vec<u64>)> = Vec::new();
        for t in terms {
            if (t.i > 0 && x.unit.is_zero()) || (t.j > 0 && y.unit.is_zero()) {
                continue;
            }
            let k = (self.degree - t.i - t.j) as u64;
            let exps = (0..n)
                .map(|q| {
                    let xe = if t.i > 0 { t.i as u64 * x.exps[q] } else { 0 };
                    let ye = if t.j > 0 { t.j as u64 * y.exps[q] } else { 0 };
                    t.coeff.exps[q] + xe + ye + k * self.den[q]
                })
                .collect();
            let pw = |cache: &mut HashMap<u32, BigInt>, base: &BigInt, e: u32| {
                cache.entry(e).or_insert_with(|| num_traits::pow(base.clone(), e as usize)).clone()
            };
            let unit = &t.coeff.unit * pw(pow1, &x.unit, t.i) * pw(pow2, &y.unit, t.j);
            parts.push((unit, exps));
        }
        if parts.is_empty() {
            return Factored { unit: BigInt::zero(), exps: vec![0; n] };
        }
        let mins: Vec<u64> = (0..n).map(|q| parts.iter().map(|p| p.1[q]).min().unwrap()).collect();
        let ties: Vec<bool> = (0..n)
            .map(|q| parts.iter().filter(|p| p.1[q] == mins[q]).count() > 1)
            .collect();
        let mut sum = BigInt::zero();
        for (unit, exps) in parts {
            let mut v = unit;
            for (q, p) in self.primes.iter().enumerate() {
                if exps[q] > mins[q] {
                    v *= prime_power(p, exps[q] - mins[q]);
                }
            }
            sum += v;
        }
        let mut exps = mins;
        if sum.is_zero() {
            return Factored { unit: sum, exps: vec![0; n] };
        }
        // With a unique minimal term the sum is already free of p.
        for (q, p) in self.primes.iter().enumerate() {
            if ties[q] {
                exps[q] += strip(&mut sum, p);
            }
        }
        Factored { unit: sum, exps }
    }

    /// Advances to the image, failing when a canonical integer would exceed
    /// `bit_budget` bits; the state is unchanged on failure.
    pub(super) fn step(&mut self, bit_budget: u64) -> Result<RationalPoint> {
        let mut pow1 = HashMap::new();
        let mut pow2 = HashMap::new();
        let mut next = [
            self.component(&self.components[0], &mut pow1, &mut pow2),
            self.component(&self.components[1], &mut pow1, &mut pow2),
        ];
        let d = self.degree as u64;
        let mut den: Vec<u64> = (0..self.primes.len()).map(|q| self.den_exps[q] + d * self.den[q]).collect();
        for q in 0..self.primes.len() {
            let mut k = den[q];
            for c in &next {
                if !c.unit.is_zero() {
                    k = k.min(c.exps[q]);
                }
            }
            den[q] -= k;
            for c in next.iter_mut() {
                if !c.unit.is_zero() {
                    c.exps[q] -= k;
                }
            }
        }
        let den_f = Factored { unit: BigInt::one(), exps: den };
        let bits = self.bits(&next[0]).max(self.bits(&next[1])).max(self.bits(&den_f));
        // The estimate from logarithms can be off by one either way.
        if bits > bit_budget.saturating_add(1) {
            return Err(Error::OrbitBudgetExceeded { budget: bit_budget, iterates: 0 });
        }
        let a1 = expand(&next[0], &self.primes);
        let a2 = expand(&next[1], &self.primes);
        let c = expand(&den_f, &self.primes);
        let image = RationalPoint::from_canonical_parts(a1, a2, c);
        if image.bits() > bit_budget {
            return Err(Error::OrbitBudgetExceeded { budget: bit_budget, iterates: 0 });
        }
        let [x, y] = next;
        self.coords = [x, y];
        self.den = den_f.exps;
        Ok(image)
    }
}
