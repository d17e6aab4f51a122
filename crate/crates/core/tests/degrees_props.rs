mod common;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use arithdyn::degrees::{analyze_degrees, degree_sequence, detect_recurrence, lambda2, DegreeConfig, DEFAULT_DEGREE_BUDGET};
use arithdyn::PolynomialMap;
use common::*;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent generic-fiber counter over 𝔽ₚ with p = 2³¹ − 1.
///
/// Dense arithmetic, Sylvester determinants by Gaussian elimination and Newton
/// interpolation, sharing nothing with the library's exact route over ℚ.
mod fiber_oracle {
    use super::*;

    pub const P: u64 = 2_147_483_647;

    fn mul(a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % P as u128) as u64
    }
    fn add(a: u64, b: u64) -> u64 {
        (a + b) % P
    }
    fn sub(a: u64, b: u64) -> u64 {
        (a + P - b) % P
    }
    fn pow(mut b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    }
    fn inv(a: u64) -> u64 {
        pow(a, P - 2)
    }
    fn reduce(n: &BigInt) -> u64 {
        let p = BigInt::from(P);
        (((n % &p) + &p) % &p).to_u64().unwrap()
    }

    /// `g[i][j]` is the coefficient of `xⁱ yʲ`.
    type Dense = Vec<Vec<u64>>;

    /// `c(x + t·y, y) − target` as a dense array.
    fn sheared(c: &arithdyn::BivariatePoly, t: u64, target: u64, d: usize) -> Dense {
        let mut binom = vec![vec![0u64; d + 1]; d + 1];
        for n in 0..=d {
            binom[n][0] = 1;
            for k in 1..=n {
                binom[n][k] = add(binom[n - 1][k - 1], if k < n { binom[n - 1][k] } else { 0 });
            }
        }
        let mut g = vec![vec![0u64; d + 1]; d + 1];
        for (&(i, j), a) in c.terms() {
            let a = mul(reduce(a.numer()), inv(reduce(a.denom())));
            let (i, j) = (i as usize, j as usize);
            for k in 0..=i {
                let v = mul(a, mul(binom[i][k], pow(t, k as u64)));
                g[i - k][k + j] = add(g[i - k][k + j], v);
            }
        }
        g[0][0] = sub(g[0][0], target);
        g
    }

    fn y_degree(g: &Dense) -> Option<usize> {
        (0..g[0].len()).rev().find(|&j| g.iter().any(|row| row[j] != 0))
    }

    /// Coefficients in y of `g(x₀, y)`, padded to the formal degree.
    fn at_x(g: &Dense, x0: u64, deg: usize) -> Vec<u64> {
        (0..=deg)
            .map(|j| g.iter().enumerate().fold(0, |acc, (i, row)| add(acc, mul(row[j], pow(x0, i as u64)))))
            .collect()
    }

    fn determinant(mut m: Vec<Vec<u64>>) -> u64 {
        let n = m.len();
        let mut det = 1;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| m[r][col] != 0) else { return 0 };
            if piv != col {
                m.swap(piv, col);
                det = sub(0, det);
            }
            det = mul(det, m[col][col]);
            let iv = inv(m[col][col]);
            for r in col + 1..n {
                let f = mul(m[r][col], iv);
                if f != 0 {
                    for c in col..n {
                        m[r][c] = sub(m[r][c], mul(f, m[col][c]));
                    }
                }
            }
        }
        det
    }

    fn sylvester_resultant(a: &[u64], b: &[u64]) -> u64 {
        let (m, n) = (a.len() - 1, b.len() - 1);
        let size = m + n;
        let mut rows = Vec::with_capacity(size);
        for k in 0..n {
            let mut row = vec![0; size];
            for (j, &c) in a.iter().rev().enumerate() {
                row[k + j] = c;
            }
            rows.push(row);
        }
        for k in 0..m {
            let mut row = vec![0; size];
            for (j, &c) in b.iter().rev().enumerate() {
                row[k + j] = c;
            }
            rows.push(row);
        }
        determinant(rows)
    }

    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn interpolate(xs: &[u64], ys: &[u64]) -> Vec<u64> {
        let n = xs.len();
        let mut coef = ys.to_vec();
        for k in 1..n {
            for i in (k..n).rev() {
                coef[i] = mul(sub(coef[i], coef[i - 1]), inv(sub(xs[i], xs[i - k])));
            }
        }
        let mut poly = vec![0u64; n];
        for k in (0..n).rev() {
            // poly = poly·(x − xs[k]) + coef[k]
            let mut next = vec![0u64; n];
            for i in 0..n - 1 {
                next[i + 1] = add(next[i + 1], poly[i]);
                next[i] = sub(next[i], mul(poly[i], xs[k]));
            }
            next[0] = add(next[0], coef[k]);
            poly = next;
        }
        trim(poly)
    }

    fn rem(a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut r = a.to_vec();
        let lb = inv(*b.last().unwrap());
        while r.len() >= b.len() {
            let f = mul(*r.last().unwrap(), lb);
            let shift = r.len() - b.len();
            for (i, &c) in b.iter().enumerate() {
                r[shift + i] = sub(r[shift + i], mul(f, c));
            }
            r = trim(r);
            if r.is_empty() {
                break;
            }
        }
        r
    }

    fn gcd(a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
        let (mut a, mut b) = (a, b);
        while !b.is_empty() {
            let r = rem(&a, &b);
            a = b;
            b = r;
        }
        a
    }

    fn distinct_roots(r: &[u64]) -> usize {
        if r.len() <= 1 {
            return 0;
        }
        let dr = trim((1..r.len()).map(|k| mul(k as u64, r[k])).collect());
        r.len() - gcd(r.to_vec(), dr).len()
    }

    /// Distinct preimages of one random target after one random shear, or `None`
    /// when neither sheared component is monic in y.
    fn trial<R: Rng>(f: &PolynomialMap, rng: &mut R) -> Option<usize> {
        let d = f.degree().ok()? as usize;
        let t = rng.gen_range(1..P);
        let g1 = sheared(&f.f1, t, rng.gen_range(0..P), d);
        let g2 = sheared(&f.f2, t, rng.gen_range(0..P), d);
        let (m, n) = (y_degree(&g1)?, y_degree(&g2)?);
        if m == 0 || n == 0 {
            return None;
        }
        let monic = |g: &Dense, k: usize| g.iter().skip(1).all(|row| row[k] == 0);
        if !monic(&g1, m) && !monic(&g2, n) {
            return None;
        }
        let nodes: Vec<u64> = (1..=(d * d + 1) as u64).collect();
        let values: Vec<u64> = nodes.iter().map(|&x0| sylvester_resultant(&at_x(&g1, x0, m), &at_x(&g2, x0, n))).collect();
        Some(distinct_roots(&interpolate(&nodes, &values)))
    }

    /// Most frequent fiber size over `trials` targets.
    pub fn generic_fiber(f: &PolynomialMap, trials: usize, seed: u64) -> Option<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = BTreeMap::new();
        for _ in 0..trials {
            if let Some(c) = trial(f, &mut rng) {
                *counts.entry(c).or_insert(0usize) += 1;
            }
        }
        counts.into_iter().max_by_key(|&(c, k)| (k, c)).map(|(c, _)| c as u64)
    }
}

fn lambda2_of(f: &PolynomialMap, seed: u64) -> u64 {
    let d = f.clone().into_dominant().unwrap();
    lambda2(&d, 4, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap().value
}

#[test]
fn oracle_agrees_on_the_family() {
    for (name, f) in family() {
        let expected = fiber_oracle::generic_fiber(&f, 20, 7).unwrap();
        assert_eq!(lambda2_of(&f, 3), expected, "{name}");
    }
}

#[test]
fn oracle_agrees_on_known_values() {
    for (name, v) in [("small-topological-degree", 4), ("henon", 1), ("square", 4), ("square-cube", 6), ("monomial-cat", 1)] {
        assert_eq!(fiber_oracle::generic_fiber(&named(name), 20, 11), Some(v), "{name}");
    }
}

#[test]
fn topological_degree_is_multiplicative_under_iteration() {
    for name in ["henon", "henon-shifted", "square", "complex-square", "triangular", "fibonacci-monomial", "cubic-henon"] {
        let f = named(name);
        let f2 = f.iterate(2).unwrap();
        let l = lambda2_of(&f, 5);
        assert_eq!(lambda2_of(&f2, 5), l * l, "{name}");
    }
}

#[test]
fn bezout_bound_on_the_family() {
    for (name, f) in family() {
        let r = analyze_degrees(&f, &DegreeConfig::default()).unwrap();
        assert!(r.bezout_holds, "{name}");
        assert_ne!(r.lambda1.square_cmp_integer(r.lambda2), Ordering::Less, "{name}");
        assert!(r.confidence.sequence.is_submultiplicative(), "{name}");
    }
}

/// A recurrence found on a prefix keeps predicting a longer sequence.
#[test]
fn recurrence_extends_to_later_iterates() {
    for (name, f) in family() {
        let d = f.clone().into_dominant().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let long = degree_sequence(&d, 30, DEFAULT_DEGREE_BUDGET, &mut rng).unwrap();
        let all = long.verified_prefix();
        if all.len() <= 10 {
            continue;
        }
        let Some(rec) = detect_recurrence(&all[..10], 4).unwrap() else { continue };
        assert!(rec.fits(all, 1), "{name}: {:?} does not extend", rec.coefficients);
    }
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn random_maps_match_the_oracle(f in dominant_map(3, 2, 6, 3), seed in any::<u64>()) {
        if let Some(expected) = fiber_oracle::generic_fiber(&f, 20, seed) {
            let d = f.clone().into_dominant().unwrap();
            let got = lambda2(&d, 4, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap().value;
            prop_assert_eq!(got, expected);
        }
    }

    #[test]
    fn degree_sequences_are_submultiplicative(f in dominant_map(3, 3, 6, 3), seed in any::<u64>()) {
        let d = f.into_dominant().unwrap();
        let s = degree_sequence(&d, 10, 20_000, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(s.is_submultiplicative(), "{:?}", s.values);
    }
}

#[test]
fn first_dynamical_degree_squares_under_iteration() {
    use arithdyn::degrees::lambda1;
    // The square of the degree-5 map outgrows the degree budget before a recurrence
    // can be certified, so it is not in this list.
    for name in ["henon", "henon-shifted", "square", "complex-square", "fibonacci-monomial", "cubic-henon"] {
        let f = named(name);
        let (a, b) = (lambda1(&f, &DegreeConfig::default()).unwrap(), lambda1(&f.iterate(2).unwrap(), &DegreeConfig::default()).unwrap());
        assert!(a.certified && b.certified, "{name}");
        let (l, l2) = (a.value, b.value);
        let (lo, hi) = (l.lower() * l.lower(), l.upper() * l.upper());
        // Intervals of λ₁(f²) and λ₁(f)² must overlap.
        assert!(l2.lower() <= &hi && l2.upper() >= &lo, "{name}: {} vs {}²", l2.decimal(12), l.decimal(12));
    }
}
