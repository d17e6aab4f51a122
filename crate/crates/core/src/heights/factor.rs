//! Integer factorization for enumerating the places where a height is supported.
//! Trial division handles small primes; Pollard–Brent rho splits the rest.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::poly::ring::is_prime_u64;

const TRIAL_LIMIT: u64 = 10_000;

/// Prime factorization of `|n|` for nonzero `n`, as `(prime, exponent)` pairs in
/// increasing order of the prime.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut m = n.magnitude().clone();
    let mut out: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT && !m.is_one() {
        let bd = BigUint::from(d);
        while (&m % &bd).is_zero() {
            m /= &bd;
            *out.entry(bd.clone()).or_default() += 1;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        split_into(&m, &mut out, &mut rng);
    }
    out.into_iter().map(|(p, e)| (BigInt::from(p), e)).collect()
}

fn split_into(n: &BigUint, out: &mut BTreeMap<BigUint, u32>, rng: &mut ChaCha8Rng) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(n, rng) {
        *out.entry(n.clone()).or_default() += 1;
        return;
    }
    if let Some(r) = integer_sqrt_exact(n) {
        split_into(&r, out, rng);
        split_into(&r, out, rng);
        return;
    }
    let d = pollard_brent(n, rng);
    split_into(&d, out, rng);
    split_into(&(n / &d), out, rng);
}

fn integer_sqrt_exact(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn is_probable_prime(n: &BigUint, rng: &mut ChaCha8Rng) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    let two = BigUint::from(2u32);
    'witness: for _ in 0..32 {
        let a = rng.gen_biguint_range(&two, &n1);
        let mut x = a.modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A nontrivial factor of a composite odd `n`.
fn pollard_brent(n: &BigUint, rng: &mut ChaCha8Rng) -> BigUint {
    let one = BigUint::one();
    loop {
        let c = rng.gen_biguint_range(&one, n);
        let mut y = rng.gen_biguint_range(&one, n);
        let m = 128u64;
        let mut g = one.clone();
        let mut r = 1u64;
        let mut q = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let f = |v: &BigUint| (v * v + &c) % n;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
    }
}
