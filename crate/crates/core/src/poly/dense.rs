//! Dense univariate polynomials over a prime field, with Karatsuba multiplication.
//! Used to push random lines through iterates of a map when only degrees matter.

use super::ring::PrimeField;

const KARATSUBA_CUTOFF: usize = 48;

pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Degree of a trimmed polynomial, `None` for zero.
pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o = f.addm(*o, *s);
    }
    trim(out)
}

pub fn scale(f: &PrimeField, a: &[u64], c: u64) -> Vec<u64> {
    trim(a.iter().map(|&x| f.mulm(x, c)).collect())
}

pub fn mul(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    mul_into(f, a, b, &mut out);
    trim(out)
}

fn schoolbook(f: &PrimeField, a: &[u64], b: &[u64], out: &mut [u64]) {
    // Accumulate in u128 and reduce once per output coefficient where possible.
    let p = f.modulus() as u128;
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let t = acc[i + j] + (x as u128) * (y as u128);
            acc[i + j] = if t >= p << 64 { t % p } else { t };
        }
    }
    for (o, v) in out.iter_mut().zip(acc) {
        *o = f.addm(*o, (v % p) as u64);
    }
}

/// `out += a * b`; `out` must hold `a.len() + b.len() - 1` entries.
fn mul_into(f: &PrimeField, a: &[u64], b: &[u64], out: &mut [u64]) {
    if a.is_empty() || b.is_empty() {
        return;
    }
    if a.len() < KARATSUBA_CUTOFF || b.len() < KARATSUBA_CUTOFF {
        schoolbook(f, a, b, out);
        return;
    }
    // Unbalanced operands: split the longer one into chunks.
    if a.len() > 2 * b.len() || b.len() > 2 * a.len() {
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        for (k, chunk) in long.chunks(short.len()).enumerate() {
            let off = k * short.len();
            let end = off + chunk.len() + short.len() - 1;
            mul_into(f, chunk, short, &mut out[off..end]);
        }
        return;
    }
    let half = a.len().max(b.len()).div_ceil(2);
    let (a0, a1) = a.split_at(half.min(a.len()));
    let (b0, b1) = b.split_at(half.min(b.len()));

    let z0 = mul(f, a0, b0);
    let z2 = mul(f, a1, b1);
    let sa = add(f, a0, a1);
    let sb = add(f, b0, b1);
    let mut z1 = mul(f, &sa, &sb);
    z1.resize(z1.len().max(z0.len()).max(z2.len()), 0);
    for (k, v) in z0.iter().enumerate() {
        z1[k] = f.subm(z1[k], *v);
    }
    for (k, v) in z2.iter().enumerate() {
        z1[k] = f.subm(z1[k], *v);
    }
    for (k, v) in z0.iter().enumerate() {
        out[k] = f.addm(out[k], *v);
    }
    for (k, v) in z1.iter().enumerate() {
        if half + k < out.len() {
            out[half + k] = f.addm(out[half + k], *v);
        } else {
            debug_assert_eq!(*v, 0);
        }
    }
    for (k, v) in z2.iter().enumerate() {
        out[2 * half + k] = f.addm(out[2 * half + k], *v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.addm(out[i + j], f.mulm(x, y));
            }
        }
        trim(out)
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = PrimeField::random(&mut rng, 60);
        for &(la, lb) in &[(1, 1), (50, 50), (97, 130), (300, 41), (257, 513), (1000, 999)] {
            let a: Vec<u64> = (0..la).map(|_| rng.gen_range(1..f.modulus())).collect();
            let b: Vec<u64> = (0..lb).map(|_| rng.gen_range(1..f.modulus())).collect();
            assert_eq!(mul(&f, &a, &b), naive(&f, &a, &b), "sizes {la}x{lb}");
        }
    }

    #[test]
    fn degree_of_trimmed() {
        assert_eq!(degree(&[]), None);
        assert_eq!(degree(&[3, 0, 1]), Some(2));
        assert_eq!(trim(vec![1, 0, 0]), vec![1]);
    }
}
