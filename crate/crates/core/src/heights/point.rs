use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// A point of 𝔸²(ℚ), stored in its canonical coprime form `(a₁, a₂, c)` with
/// `c ≥ 1`, `gcd(a₁, a₂, c) = 1` and `xᵢ = aᵢ / c`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    a1: BigInt,
    a2: BigInt,
    c: BigInt,
}

impl RationalPoint {
    pub fn new(x1: &BigRational, x2: &BigRational) -> Self {
        let c = x1.denom().lcm(x2.denom());
        let a1 = x1.numer() * (&c / x1.denom());
        let a2 = x2.numer() * (&c / x2.denom());
        RationalPoint { a1, a2, c }
    }

    pub fn from_ints(x1: i64, x2: i64) -> Self {
        RationalPoint {
            a1: x1.into(),
            a2: x2.into(),
            c: BigInt::one(),
        }
    }

    /// Builds the point `[den : n1 : n2]`, reducing to canonical form.
    /// Panics if `den` is zero.
    pub fn from_homogeneous(n1: BigInt, n2: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (mut a1, mut a2, mut c) = (n1, n2, den);
        if c.is_negative() {
            a1 = -a1;
            a2 = -a2;
            c = -c;
        }
        if !c.is_one() {
            let g = c.gcd(&a1).gcd(&a2);
            if !g.is_one() {
                a1 /= &g;
                a2 /= &g;
                c /= &g;
            }
        }
        RationalPoint { a1, a2, c }
    }

    /// Wraps an already canonical triple.
    pub(crate) fn from_canonical_parts(a1: BigInt, a2: BigInt, c: BigInt) -> Self {
        debug_assert!(c.is_positive());
        RationalPoint { a1, a2, c }
    }

    pub fn origin() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn x1(&self) -> BigRational {
        BigRational::new(self.a1.clone(), self.c.clone())
    }

    pub fn x2(&self) -> BigRational {
        BigRational::new(self.a2.clone(), self.c.clone())
    }

    /// The canonical integer triple `(a₁, a₂, c)`.
    pub fn canonical(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a1, &self.a2, &self.c)
    }

    pub fn denominator(&self) -> &BigInt {
        &self.c
    }

    pub fn is_integral(&self) -> bool {
        self.c.is_one()
    }

    /// Largest bit length among the canonical integers.
    pub fn bits(&self) -> u64 {
        self.a1.bits().max(self.a2.bits()).max(self.c.bits())
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x1(), self.x2())
    }
}

impl fmt::Debug for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1(), self.x2())
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([self.x1().to_string(), self.x2().to_string()])
    }
}

/// Error from parsing a point written as `num[/den],num[/den]`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid point {input:?}: {reason}")]
pub struct PointParseError {
    pub input: String,
    pub reason: String,
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).ok()?;
    let d = BigInt::from_str(d).ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

impl FromStr for RationalPoint {
    type Err = PointParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| PointParseError {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let (a, b) = s.split_once(',').ok_or_else(|| err("expected two comma-separated coordinates"))?;
        let x1 = parse_rational(a).ok_or_else(|| err("first coordinate is not a rational"))?;
        let x2 = parse_rational(b).ok_or_else(|| err("second coordinate is not a rational"))?;
        Ok(RationalPoint::new(&x1, &x2))
    }
}

/// Lexicographic by coordinate value.
impl Ord for RationalPoint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.x1(), self.x2()).cmp(&(other.x1(), other.x2()))
    }
}

impl PartialOrd for RationalPoint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
