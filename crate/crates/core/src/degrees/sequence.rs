use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{dense, DominantMap, ModMap, ModPoly, PrimeField};

/// Default cap on the degree of the last computed iterate.
pub const DEFAULT_DEGREE_BUDGET: u64 = 100_000;

const PRIME_BITS: u32 = 60;
const MAX_RETRIES: usize = 3;

/// Degrees `deg fⁿ` for `n = 0, 1, …`, each computed modulo independent primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeSequence {
    pub values: Vec<u64>,
    /// For each entry, the primes whose computation produced that value.
    pub primes_used: Vec<Vec<u64>>,
    /// Two-prime agreement per entry.
    pub verified: Vec<bool>,
    /// Whether the budget stopped the computation before the requested length.
    pub truncated: bool,
}

impl DegreeSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The longest prefix of verified entries.
    pub fn verified_prefix(&self) -> &[u64] {
        let k = self.verified.iter().take_while(|&&v| v).count();
        &self.values[..k]
    }

    /// `values[n+m] ≤ values[n]·values[m]` over all computed indices.
    pub fn is_submultiplicative(&self) -> bool {
        let v = &self.values;
        (0..v.len()).all(|n| {
            (0..v.len() - n).all(|m| v[n + m] as u128 <= v[n] as u128 * v[m] as u128)
        })
    }
}

/// The images of a random line `t ↦ (a + bt, c + dt)` under successive iterates,
/// as dense polynomials in `t` over one prime field.
struct LineOrbit {
    map: ModMap,
    u: Vec<u64>,
    v: Vec<u64>,
    values: Vec<u64>,
}

impl LineOrbit {
    fn new<R: Rng + ?Sized>(f: &DominantMap, rng: &mut R) -> Self {
        loop {
            let field = PrimeField::random(rng, PRIME_BITS);
            let Ok(map) = f.reduce_mod_p(field) else { continue };
            let u = vec![field.random_element(rng), nonzero(&field, rng)];
            let v = vec![field.random_element(rng), nonzero(&field, rng)];
            return LineOrbit { map, u: dense::trim(u), v: dense::trim(v), values: vec![1] };
        }
    }

    fn prime(&self) -> u64 {
        self.map.field.modulus()
    }

    fn step(&mut self) {
        let f = self.map.field;
        let max_i = max_exponent(&self.map.f1, &self.map.f2, |i, _| i);
        let max_j = max_exponent(&self.map.f1, &self.map.f2, |_, j| j);
        let upow = powers(&f, &self.u, max_i);
        let vpow = powers(&f, &self.v, max_j);
        let u = push(&f, &self.map.f1, &upow, &vpow);
        let v = push(&f, &self.map.f2, &upow, &vpow);
        let d = dense::degree(&u).max(dense::degree(&v)).map_or(0, |d| d as u64);
        self.u = u;
        self.v = v;
        self.values.push(d);
    }
}

fn nonzero<R: Rng + ?Sized>(field: &PrimeField, rng: &mut R) -> u64 {
    loop {
        let c = field.random_element(rng);
        if c != 0 {
            return c;
        }
    }
}

fn max_exponent(a: &ModPoly, b: &ModPoly, pick: impl Fn(u32, u32) -> u32) -> usize {
    a.terms()
        .chain(b.terms())
        .map(|(&(i, j), _)| pick(i, j) as usize)
        .max()
        .unwrap_or(0)
}

fn powers(f: &PrimeField, base: &[u64], k: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(vec![1]);
    for n in 1..=k {
        let next = dense::mul(f, &out[n - 1], base);
        out.push(next);
    }
    out
}

/// `Σ cᵢⱼ uⁱ vʲ`, grouped by the power of `u`.
fn push(f: &PrimeField, poly: &ModPoly, upow: &[Vec<u64>], vpow: &[Vec<u64>]) -> Vec<u64> {
    let mut acc: Vec<u64> = Vec::new();
    let mut i_cur = None;
    let mut inner: Vec<u64> = Vec::new();
    let flush = |acc: &mut Vec<u64>, i: usize, inner: &[u64]| {
        let term = dense::mul(f, &upow[i], inner);
        *acc = dense::add(f, acc, &term);
    };
    for (&(i, j), &c) in poly.terms() {
        if i_cur != Some(i) {
            if let Some(prev) = i_cur {
                flush(&mut acc, prev as usize, &inner);
            }
            i_cur = Some(i);
            inner.clear();
        }
        inner = dense::add(f, &inner, &dense::scale(f, &vpow[j as usize], c));
    }
    if let Some(prev) = i_cur {
        flush(&mut acc, prev as usize, &inner);
    }
    acc
}

/// `deg fⁿ` for `n = 0..=n_max`, stopping early once the next degree could exceed
/// `degree_budget`.
///
/// Each entry is computed by pushing a random line through `f` modulo two random
/// 60-bit primes. When the primes disagree, further primes are drawn; up to three
/// extra primes are tried before giving up.
pub fn degree_sequence<R: Rng + ?Sized>(
    f: &DominantMap,
    n_max: usize,
    degree_budget: u64,
    rng: &mut R,
) -> Result<DegreeSequence> {
    if n_max < 2 {
        return Err(Error::Precondition("degree sequence needs N ≥ 2".into()));
    }
    let d = f.degree()? as u64;
    let mut orbits: Vec<LineOrbit> = (0..2).map(|_| LineOrbit::new(f, rng)).collect();
    let mut seq = DegreeSequence {
        values: vec![1],
        primes_used: vec![orbits.iter().map(LineOrbit::prime).collect()],
        verified: vec![true],
        truncated: false,
    };
    let mut retries = 0;
    for n in 1..=n_max {
        if seq.values[n - 1].saturating_mul(d) > degree_budget {
            seq.truncated = true;
            break;
        }
        for o in orbits.iter_mut() {
            o.step();
        }
        loop {
            let vals: Vec<u64> = orbits.iter().map(|o| o.values[n]).collect();
            let top = *vals.iter().max().unwrap();
            let agreeing: Vec<u64> = orbits
                .iter()
                .filter(|o| o.values[n] == top)
                .map(LineOrbit::prime)
                .collect();
            if agreeing.len() >= 2 {
                seq.values.push(top);
                seq.primes_used.push(agreeing);
                seq.verified.push(true);
                break;
            }
            if retries == MAX_RETRIES {
                return Err(Error::InternalInconsistency(format!(
                    "primes disagree on deg f^{n}: {vals:?}"
                )));
            }
            retries += 1;
            let mut extra = LineOrbit::new(f, rng);
            for _ in 0..n {
                extra.step();
            }
            orbits.push(extra);
        }
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{BivariatePoly as P, PolynomialMap};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dom(f1: &[(i64, u32, u32)], f2: &[(i64, u32, u32)]) -> DominantMap {
        PolynomialMap::new(P::from_int_terms(f1), P::from_int_terms(f2)).into_dominant().unwrap()
    }

    #[test]
    fn example16_sequence() {
        let f = dom(&[(1, 2, 0)], &[(1, 1, 2)]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = degree_sequence(&f, 6, DEFAULT_DEGREE_BUDGET, &mut rng).unwrap();
        assert_eq!(s.values, vec![1, 3, 8, 20, 48, 112, 256]);
        assert!(s.verified.iter().all(|&v| v));
        assert!(s.is_submultiplicative());
        assert!(!s.truncated);
    }

    #[test]
    fn identity_sequence() {
        let f = dom(&[(1, 1, 0)], &[(1, 0, 1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = degree_sequence(&f, 4, DEFAULT_DEGREE_BUDGET, &mut rng).unwrap();
        assert_eq!(s.values, vec![1; 5]);
    }

    #[test]
    fn noninvertible_matches_exact_composition() {
        let f = dom(&[(1, 1, 3), (1, 0, 2)], &[(1, 2, 3), (1, 1, 0)]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = degree_sequence(&f, 6, DEFAULT_DEGREE_BUDGET, &mut rng).unwrap();
        assert_eq!(s.values, vec![1, 5, 23, 107, 497, 2309, 10727]);
        for n in 0..=3u32 {
            assert_eq!(f.iterate(n).unwrap().degree().unwrap() as u64, s.values[n as usize]);
        }
    }

    #[test]
    fn budget_truncates() {
        let f = dom(&[(1, 2, 0)], &[(1, 0, 2)]);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = degree_sequence(&f, 30, 1000, &mut rng).unwrap();
        assert!(s.truncated);
        assert_eq!(s.values, vec![1, 2, 4, 8, 16, 32, 64, 128, 256, 512]);
    }
}
