use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::poly::roots::{isolate_real_roots, rational_roots, root_bound, sturm_sequence, count_roots, IsolatedRoot};
use crate::poly::{rational_to_f64, Degree, UnivariatePoly};

/// A real algebraic number: a root of an integer polynomial, pinned by an
/// isolating interval (or known exactly when rational).
///
/// `is_minimal` records whether the defining polynomial is certified irreducible.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraicReal {
    polynomial: UnivariatePoly,
    root: IsolatedRoot,
    is_minimal: bool,
}

impl AlgebraicReal {
    pub fn from_rational(q: BigRational) -> Self {
        let polynomial = UnivariatePoly::linear_with_root(&q).primitive_rational();
        AlgebraicReal {
            polynomial,
            root: IsolatedRoot::Exact(q),
            is_minimal: true,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// The largest real root of `p`, with its defining polynomial reduced as far as
    /// rational-root stripping and quadratic-factor search allow. `None` when `p`
    /// has no real root.
    pub fn largest_real_root(p: &UnivariatePoly) -> Option<Self> {
        if p.degree() <= Degree::Finite(0) {
            return None;
        }
        let sf = p.squarefree_part().ok()?.primitive_rational();
        let roots = isolate_real_roots(&sf);
        let mut largest = roots.last()?.clone();
        let rats = rational_roots(&sf);
        if let Some(r) = rats.last() {
            // Rational roots are exact; check whether the top one is the largest root.
            if r >= largest.lower() {
                let seq = sturm_sequence(&sf);
                if count_roots(&seq, r, &root_bound(&sf)) == 0 {
                    return Some(Self::from_rational(r.clone()));
                }
            }
        }
        if let IsolatedRoot::Exact(r) = &largest {
            return Some(Self::from_rational(r.clone()));
        }
        // Strip rational roots: what remains has no linear factor over ℚ.
        let mut rest = sf.clone();
        for r in &rats {
            rest = rest.div_rem(&UnivariatePoly::linear_with_root(r)).0;
        }
        let rest = rest.primitive_rational();
        let mut value = AlgebraicReal {
            polynomial: rest.clone(),
            root: largest.clone(),
            is_minimal: rest.degree() <= Degree::Finite(3),
        };
        if !value.is_minimal {
            let others: Vec<IsolatedRoot> = isolate_real_roots(&rest)
                .into_iter()
                .filter(|r| r.upper() <= largest.lower() || r.lower() >= largest.upper())
                .collect();
            if let Some(q) = find_quadratic_factor(&rest, &mut largest, others) {
                value = AlgebraicReal {
                    polynomial: q,
                    root: largest,
                    is_minimal: true,
                };
            }
        }
        Some(value)
    }

    /// The positive real root of `xⁿ − d`, with no minimality claim.
    pub fn nth_root(d: u64, n: u32) -> Self {
        let mut coeffs = vec![BigInt::zero(); n as usize + 1];
        coeffs[0] = -BigInt::from(d);
        coeffs[n as usize] = BigInt::one();
        let p = UnivariatePoly::from_bigints(&coeffs);
        let mut v = Self::largest_real_root(&p).expect("xⁿ − d has a positive root");
        v.is_minimal = v.is_minimal && v.polynomial.degree() == Degree::Finite(1);
        v
    }

    /// The defining polynomial, primitive with integer coefficients.
    pub fn polynomial(&self) -> &UnivariatePoly {
        &self.polynomial
    }

    pub fn minimal_polynomial(&self) -> Option<&UnivariatePoly> {
        self.is_minimal.then_some(&self.polynomial)
    }

    pub fn is_minimal(&self) -> bool {
        self.is_minimal
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.root {
            IsolatedRoot::Exact(r) => Some(r),
            IsolatedRoot::Interval { .. } => None,
        }
    }

    pub fn lower(&self) -> &BigRational {
        self.root.lower()
    }

    pub fn upper(&self) -> &BigRational {
        self.root.upper()
    }

    pub fn width(&self) -> BigRational {
        self.root.width()
    }

    /// Narrows the isolating interval to width at most `width`.
    pub fn refine(&mut self, width: &BigRational) {
        self.root.refine(&self.polynomial, width);
    }

    /// Narrows to relative width `rel` (relative to the lower endpoint, or absolute
    /// when the value is below one in magnitude).
    pub fn refine_relative(&mut self, rel: f64) {
        let scale = self.lower().abs().max(BigRational::one());
        let rel = BigRational::from_float(rel).expect("finite tolerance");
        self.refine(&(scale * rel));
    }

    /// Nearest double, refining a copy of the interval as needed.
    pub fn to_f64(&self) -> f64 {
        if self.as_rational().is_some() {
            return rational_to_f64(&self.midpoint());
        }
        let mut v = self.clone();
        v.refine_relative(1e-17);
        rational_to_f64(&v.midpoint())
    }

    pub fn midpoint(&self) -> BigRational {
        (self.lower() + self.upper()) / BigRational::from_integer(2.into())
    }

    /// Half the interval width: a bound on `|value − midpoint|`.
    pub fn error_bound(&self) -> f64 {
        rational_to_f64(&self.width()) / 2.0
    }

    /// Exact comparison of the value with a rational.
    pub fn cmp_rational(&self, k: &BigRational) -> Ordering {
        let mut root = self.root.clone();
        loop {
            match &root {
                IsolatedRoot::Exact(r) => return r.cmp(k),
                IsolatedRoot::Interval { lo, hi } => {
                    if k <= lo {
                        return Ordering::Greater;
                    }
                    if k >= hi {
                        return Ordering::Less;
                    }
                    if self.polynomial.eval(k).is_zero() {
                        return Ordering::Equal;
                    }
                }
            }
            root.bisect(&self.polynomial);
        }
    }

    pub fn cmp_integer(&self, k: i64) -> Ordering {
        self.cmp_rational(&BigRational::from_integer(k.into()))
    }

    /// Exact comparison of the square of a nonnegative value with an integer `k ≥ 0`.
    pub fn square_cmp_integer(&self, k: u64) -> Ordering {
        assert!(!self.lower().is_negative(), "square comparison needs a nonnegative value");
        let kb = BigInt::from(k);
        let s = kb.sqrt();
        if &s * &s == kb {
            return self.cmp_rational(&BigRational::from_integer(s));
        }
        let kq = BigRational::from_integer(kb.clone());
        let sqrt_k_is_root = {
            // p(√k) = A + B√k with A, B rational; √k is irrational here.
            let (mut a, mut b) = (BigRational::zero(), BigRational::zero());
            let mut kp = BigRational::one();
            for (i, c) in self.polynomial.coeffs().iter().enumerate() {
                if i % 2 == 0 {
                    a += c * &kp;
                } else {
                    b += c * &kp;
                    kp *= &kq;
                }
            }
            a.is_zero() && b.is_zero()
        };
        let mut root = self.root.clone();
        loop {
            let (lo, hi) = (root.lower().clone(), root.upper().clone());
            if &lo * &lo > kq {
                return Ordering::Greater;
            }
            if &hi * &hi < kq {
                return Ordering::Less;
            }
            if sqrt_k_is_root {
                return Ordering::Equal;
            }
            root.bisect(&self.polynomial);
        }
    }

    /// Decimal expansion of the midpoint after refining to `10^{-digits-2}`.
    pub fn decimal(&self, digits: usize) -> String {
        let mut v = self.clone();
        let ten = BigInt::from(10);
        let width = BigRational::new(BigInt::one(), num_traits::pow(ten, digits + 2));
        v.refine(&width);
        rational_to_decimal(&v.midpoint(), digits)
    }
}

/// Searches for a monic integer quadratic factor of `p` vanishing at the isolated
/// root `target`, pairing it with each other real root in turn.
fn find_quadratic_factor(
    p: &UnivariatePoly,
    target: &mut IsolatedRoot,
    others: Vec<IsolatedRoot>,
) -> Option<UnivariatePoly> {
    if !p.has_integer_coeffs() || !p.leading_coeff()?.is_one() {
        return None;
    }
    let fine = BigRational::new(BigInt::one(), BigInt::one() << 80usize);
    target.refine(p, &fine);
    let t = rational_to_f64(&target_mid(target));
    for mut other in others {
        other.refine(p, &fine);
        let o = rational_to_f64(&target_mid(&other));
        let s = (t + o).round();
        let q = (t * o).round();
        if !s.is_finite() || !q.is_finite() || s.abs() > 1e15 || q.abs() > 1e15 {
            continue;
        }
        let cand = UnivariatePoly::from_ints(&[q as i64, -(s as i64), 1]);
        if p.div_rem(&cand).1.is_zero() {
            let seq = sturm_sequence(&cand);
            if count_roots(&seq, target.lower(), target.upper()) == 1 {
                return Some(cand);
            }
        }
    }
    None
}

fn target_mid(r: &IsolatedRoot) -> BigRational {
    (r.lower() + r.upper()) / BigRational::from_integer(2.into())
}

/// Truncated decimal expansion of a rational with `digits` fractional digits.
pub fn rational_to_decimal(q: &BigRational, digits: usize) -> String {
    let negative = q.is_negative();
    let a = q.abs();
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (a * BigRational::from_integer(scale.clone())).round().to_integer();
    let int = &scaled / &scale;
    let frac = &scaled % &scale;
    let mut s = String::new();
    if negative && !scaled.is_zero() {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if digits > 0 {
        let f = frac.to_string();
        s.push('.');
        s.push_str(&"0".repeat(digits - f.len()));
        s.push_str(&f);
    }
    s
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.root {
            IsolatedRoot::Exact(r) => write!(f, "{r}"),
            IsolatedRoot::Interval { .. } => {
                write!(f, "{} (root of {})", self.decimal(12), self.polynomial)
            }
        }
    }
}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraicReal({self})")
    }
}

impl Serialize for AlgebraicReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AlgebraicReal", 6)?;
        st.serialize_field("polynomial", &self.polynomial.to_string())?;
        st.serialize_field("minimal", &self.is_minimal)?;
        st.serialize_field("exact", &self.as_rational().map(|r| r.to_string()))?;
        st.serialize_field("interval", &[self.lower().to_string(), self.upper().to_string()])?;
        st.serialize_field("decimal", &self.decimal(15))?;
        st.serialize_field("error_bound", &self.error_bound())?;
        st.end()
    }
}

impl AlgebraicReal {
    /// Integer part (floor) of the value, for display and sanity checks.
    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.as_rational() {
            return r.floor().to_integer();
        }
        let mut root = self.root.clone();
        loop {
            if let IsolatedRoot::Exact(r) = &root {
                return r.floor().to_integer();
            }
            let lo = root.lower().floor();
            if lo == root.upper().floor() {
                return lo.to_integer();
            }
            root.bisect(&self.polynomial);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UnivariatePoly {
        UnivariatePoly::from_ints(c)
    }

    #[test]
    fn rational_largest_root() {
        // (x - 2)^2 from the recurrence a_n = 4a_{n-1} - 4a_{n-2}
        let v = AlgebraicReal::largest_real_root(&p(&[4, -4, 1])).unwrap();
        assert_eq!(v.as_rational(), Some(&BigRational::from_integer(2.into())));
        assert_eq!(v.minimal_polynomial(), Some(&p(&[-2, 1])));
    }

    #[test]
    fn quadratic_irrational() {
        let mut v = AlgebraicReal::largest_real_root(&p(&[-3, -4, 1])).unwrap();
        assert_eq!(v.minimal_polynomial(), Some(&p(&[-3, -4, 1])));
        assert_eq!(v.floor(), BigInt::from(4));
        v.refine_relative(1e-13);
        assert!((v.to_f64() - (2.0 + 7f64.sqrt())).abs() < 1e-12);
        assert_eq!(v.decimal(9), "4.645751311");
        assert_eq!(v.cmp_integer(4), Ordering::Greater);
        assert_eq!(v.cmp_integer(5), Ordering::Less);
        assert_eq!(v.square_cmp_integer(21), Ordering::Greater);
        assert_eq!(v.square_cmp_integer(22), Ordering::Less);
    }

    #[test]
    fn quadratic_factor_is_extracted() {
        // (x^2 - 4x - 3)(x^2 - 2) has largest root 2 + √7.
        let f = &p(&[-3, -4, 1]) * &p(&[-2, 0, 1]);
        let v = AlgebraicReal::largest_real_root(&f).unwrap();
        assert_eq!(v.minimal_polynomial(), Some(&p(&[-3, -4, 1])));
        // (x^2 - 4x - 3)(x - 1)(x + 3)
        let g = &(&p(&[-3, -4, 1]) * &p(&[-1, 1])) * &p(&[3, 1]);
        let v = AlgebraicReal::largest_real_root(&g).unwrap();
        assert_eq!(v.minimal_polynomial(), Some(&p(&[-3, -4, 1])));
    }

    #[test]
    fn rational_root_beaten_by_irrational() {
        // (x - 3)(x^2 - 2x - 4): roots 3 and 1 ± √5, largest ≈ 3.236
        let f = &p(&[-3, 1]) * &p(&[-4, -2, 1]);
        let v = AlgebraicReal::largest_real_root(&f).unwrap();
        assert!(v.as_rational().is_none());
        assert_eq!(v.minimal_polynomial(), Some(&p(&[-4, -2, 1])));
    }

    #[test]
    fn square_comparison_equality() {
        let v = AlgebraicReal::largest_real_root(&p(&[-5, 0, 1])).unwrap();
        assert_eq!(v.square_cmp_integer(5), Ordering::Equal);
        assert_eq!(AlgebraicReal::from_integer(2).square_cmp_integer(4), Ordering::Equal);
        assert_eq!(AlgebraicReal::from_integer(2).square_cmp_integer(5), Ordering::Less);
    }

    #[test]
    fn nth_root_estimate() {
        let v = AlgebraicReal::nth_root(1000, 3);
        assert_eq!(v.as_rational(), Some(&BigRational::from_integer(10.into())));
        let w = AlgebraicReal::nth_root(20, 3);
        assert!((w.to_f64() - 20f64.cbrt()).abs() < 1e-9);
        assert!(w.floor() == BigInt::from(2));
    }

    #[test]
    fn decimals() {
        let q = BigRational::new((-1).into(), 8.into());
        assert_eq!(rational_to_decimal(&q, 3), "-0.125");
        assert_eq!(rational_to_decimal(&BigRational::from_integer(7.into()), 2), "7.00");
    }
}
