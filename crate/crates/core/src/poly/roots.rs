//! Real root isolation by Sturm sequences, and rational root extraction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::degree::Degree;
use super::univariate::UnivariatePoly;

/// A real root of a square-free polynomial, either known exactly or isolated in
/// an open interval `(lo, hi)` whose endpoints are not roots and carry opposite signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsolatedRoot {
    Exact(BigRational),
    Interval { lo: BigRational, hi: BigRational },
}

impl IsolatedRoot {
    pub fn lower(&self) -> &BigRational {
        match self {
            IsolatedRoot::Exact(r) => r,
            IsolatedRoot::Interval { lo, .. } => lo,
        }
    }

    pub fn upper(&self) -> &BigRational {
        match self {
            IsolatedRoot::Exact(r) => r,
            IsolatedRoot::Interval { hi, .. } => hi,
        }
    }

    pub fn width(&self) -> BigRational {
        self.upper() - self.lower()
    }

    /// Bisects until the width is at most `width`. `poly` must be the square-free
    /// polynomial the root was isolated from.
    pub fn refine(&mut self, poly: &UnivariatePoly, width: &BigRational) {
        while let IsolatedRoot::Interval { lo, hi } = self {
            if &(&*hi - &*lo) <= width {
                return;
            }
            self.bisect(poly);
        }
    }

    /// One bisection step.
    pub fn bisect(&mut self, poly: &UnivariatePoly) {
        if let IsolatedRoot::Interval { lo, hi } = self {
            let mid = (&*lo + &*hi) / BigRational::from_integer(2.into());
            let s_mid = poly.sign_at(&mid);
            if s_mid == 0 {
                *self = IsolatedRoot::Exact(mid);
            } else if s_mid == poly.sign_at(lo) {
                *lo = mid;
            } else {
                *hi = mid;
            }
        }
    }
}

/// Sturm sequence `p, p′, −rem(p, p′), …` of a nonzero polynomial.
pub fn sturm_sequence(p: &UnivariatePoly) -> Vec<UnivariatePoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        // Positive rescaling keeps the signs and the coefficients small.
        let r = match r.leading_coeff() {
            Some(lc) => r.scale(&(-lc.abs().recip())),
            None => r,
        };
        seq.push(r);
    }
    seq.pop();
    seq
}

fn sign_variations(seq: &[UnivariatePoly], x: &BigRational) -> usize {
    let signs: Vec<i8> = seq.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in `(a, b]`.
pub fn count_roots(seq: &[UnivariatePoly], a: &BigRational, b: &BigRational) -> usize {
    sign_variations(seq, a).saturating_sub(sign_variations(seq, b))
}

/// A bound `B` with every complex root strictly inside `|z| < B` (Cauchy).
pub fn root_bound(p: &UnivariatePoly) -> BigRational {
    let lc = p.leading_coeff().expect("nonzero polynomial").abs();
    let n = p.degree_or_zero();
    let m = p.coeffs()[..n]
        .iter()
        .map(|c| c.abs() / &lc)
        .max()
        .unwrap_or_else(BigRational::zero);
    BigRational::one() + m
}

/// All real roots of a square-free polynomial, in increasing order.
pub fn isolate_real_roots(p: &UnivariatePoly) -> Vec<IsolatedRoot> {
    if p.degree() <= Degree::Finite(0) {
        return Vec::new();
    }
    let seq = sturm_sequence(p);
    let b = root_bound(p);
    let mut out = Vec::new();
    isolate_in(p, &seq, -b.clone(), b, &mut out);
    out
}

fn isolate_in(
    p: &UnivariatePoly,
    seq: &[UnivariatePoly],
    lo: BigRational,
    hi: BigRational,
    out: &mut Vec<IsolatedRoot>,
) {
    let c = count_roots(seq, &lo, &hi);
    if c == 0 {
        return;
    }
    if c == 1 {
        if p.sign_at(&hi) == 0 {
            out.push(IsolatedRoot::Exact(hi));
            return;
        }
        if p.sign_at(&lo) != 0 {
            out.push(IsolatedRoot::Interval { lo, hi });
            return;
        }
    }
    let mid = (&lo + &hi) / BigRational::from_integer(2.into());
    isolate_in(p, seq, lo, mid.clone(), out);
    isolate_in(p, seq, mid, hi, out);
}

/// The rational with the smallest denominator (then smallest absolute value) in `[lo, hi]`.
pub fn simplest_rational_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    debug_assert!(lo <= hi);
    if !lo.is_positive() && !hi.is_negative() {
        return BigRational::zero();
    }
    if hi.is_negative() {
        return -simplest_rational_between(&-hi, &-lo);
    }
    let c = lo.ceil();
    if &c <= hi {
        return c;
    }
    let n = lo.floor();
    let inner = simplest_rational_between(&(hi - &n).recip(), &(lo - &n).recip());
    n + inner.recip()
}

/// The distinct rational roots of a nonzero polynomial, increasing.
pub fn rational_roots(p: &UnivariatePoly) -> Vec<BigRational> {
    if p.degree() <= Degree::Finite(0) {
        return Vec::new();
    }
    let sf = p.squarefree_part().expect("nonzero");
    let ints = sf.primitive_integer();
    let sf = UnivariatePoly::from_bigints(&ints);
    let lc: BigInt = ints.last().unwrap().abs();
    // Distinct fractions with denominators ≤ lc are ≥ 1/lc² apart.
    let tol = BigRational::new(BigInt::one(), &lc * &lc * BigInt::from(2));
    let mut out = Vec::new();
    for mut root in isolate_real_roots(&sf) {
        root.refine(&sf, &tol);
        match root {
            IsolatedRoot::Exact(r) => out.push(r),
            IsolatedRoot::Interval { lo, hi } => {
                let s = simplest_rational_between(&lo, &hi);
                if sf.eval(&s).is_zero() {
                    out.push(s);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UnivariatePoly {
        UnivariatePoly::from_ints(c)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn isolates_all_real_roots() {
        // (x^2 - 2)(x - 3)(x^2 + 1)
        let f = &(&p(&[-2, 0, 1]) * &p(&[-3, 1])) * &p(&[1, 0, 1]);
        let roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 3);
        let approx: Vec<f64> = roots
            .into_iter()
            .map(|mut r| {
                r.refine(&f, &q(1, 1_000_000));
                crate::poly::univariate::rational_to_f64(r.lower())
            })
            .collect();
        assert!((approx[0] + 2f64.sqrt()).abs() < 1e-5);
        assert!((approx[1] - 2f64.sqrt()).abs() < 1e-5);
        assert!((approx[2] - 3.0).abs() < 1e-5);
    }

    #[test]
    fn counts_half_open() {
        let f = p(&[-2, 3, -1]); // -(x-1)(x-2)
        let seq = sturm_sequence(&f);
        assert_eq!(count_roots(&seq, &q(0, 1), &q(1, 1)), 1);
        assert_eq!(count_roots(&seq, &q(1, 1), &q(3, 2)), 0);
        assert_eq!(count_roots(&seq, &q(0, 1), &q(5, 1)), 2);
    }

    #[test]
    fn simplest_fraction() {
        assert_eq!(simplest_rational_between(&q(3, 10), &q(4, 10)), q(1, 3));
        assert_eq!(simplest_rational_between(&q(-7, 2), &q(-3, 1)), q(-3, 1));
        assert_eq!(simplest_rational_between(&q(-1, 2), &q(1, 3)), q(0, 1));
        assert_eq!(simplest_rational_between(&q(22, 7), &q(22, 7)), q(22, 7));
    }

    #[test]
    fn rational_root_extraction() {
        // (3x - 2)(x + 5)^2 (x^2 - 7)
        let f = &(&(&p(&[-2, 3]) * &p(&[5, 1])) * &p(&[5, 1])) * &p(&[-7, 0, 1]);
        assert_eq!(rational_roots(&f), vec![q(-5, 1), q(2, 3)]);
        assert!(rational_roots(&p(&[1, 0, 1])).is_empty());
        assert!(rational_roots(&p(&[4])).is_empty());
    }
}
