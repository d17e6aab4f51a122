//! Degree growth of iterates: the degree sequence, its linear recurrence, the first
//! dynamical degree λ₁, the growth exponent and the topological degree λ₂.

mod algebraic;
mod recurrence;
mod sequence;
mod topological;

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use algebraic::{rational_to_decimal, AlgebraicReal};
pub use recurrence::{detect_recurrence, LinearRecurrence, DEFAULT_MAX_ORDER};
pub use sequence::{degree_sequence, DegreeSequence, DEFAULT_DEGREE_BUDGET};
pub use topological::{count_preimages, lambda2, Fiber, IrrationalPreimages, TopologicalDegree, DEFAULT_TRIALS};

use crate::error::{Error, Result};
use crate::poly::{DominantMap, PolynomialMap};

/// Default number of iterates requested from the degree sequence.
pub const DEFAULT_MAX_ITERATES: usize = 30;

/// Relative width of the isolating interval returned for λ₁.
pub const LAMBDA1_RELATIVE_WIDTH: f64 = 1e-12;

/// Threshold (relative to `rₙ`) used by the growth-exponent ratio test.
pub const GROWTH_THRESHOLD: f64 = 1e-3;

/// Budgets and seed for the degree computations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeConfig {
    pub max_iterates: usize,
    pub degree_budget: u64,
    pub max_order: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for DegreeConfig {
    fn default() -> Self {
        DegreeConfig {
            max_iterates: DEFAULT_MAX_ITERATES,
            degree_budget: DEFAULT_DEGREE_BUDGET,
            max_order: DEFAULT_MAX_ORDER,
            trials: DEFAULT_TRIALS,
            seed: 0,
        }
    }
}

impl DegreeConfig {
    /// Independent generators for the sequence and for λ₂, so that changing one
    /// computation does not shift the other's random choices.
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// λ₁ together with how it was obtained.
#[derive(Clone, Debug, Serialize)]
pub struct FirstDynamicalDegree {
    pub value: AlgebraicReal,
    /// False when no recurrence was found and the value is `(deg f^N)^{1/N}`.
    pub certified: bool,
    pub recurrence: Option<LinearRecurrence>,
    pub sequence: DegreeSequence,
}

/// λ₁ from a computed degree sequence.
pub fn lambda1_from_sequence(seq: DegreeSequence, max_order: usize) -> Result<FirstDynamicalDegree> {
    let verified = seq.verified_prefix();
    let order = max_order.min(verified.len().saturating_sub(2) / 2);
    let recurrence = if order >= 1 { detect_recurrence(verified, order)? } else { None };
    if let Some(rec) = &recurrence {
        if let Some(mut value) = AlgebraicReal::largest_real_root(&rec.characteristic_polynomial) {
            if value.cmp_integer(1) != Ordering::Less {
                value.refine_relative(LAMBDA1_RELATIVE_WIDTH);
                return Ok(FirstDynamicalDegree { value, certified: true, recurrence, sequence: seq });
            }
        }
    }
    let n = verified.len() - 1;
    let value = if n == 0 {
        AlgebraicReal::from_integer(1)
    } else {
        let mut v = AlgebraicReal::nth_root(verified[n], n as u32);
        v.refine_relative(LAMBDA1_RELATIVE_WIDTH);
        v
    };
    Ok(FirstDynamicalDegree { value, certified: false, recurrence: None, sequence: seq })
}

/// The first dynamical degree `lim (deg fⁿ)^{1/n}`.
pub fn lambda1(f: &PolynomialMap, config: &DegreeConfig) -> Result<FirstDynamicalDegree> {
    let f = dominant(f)?;
    let seq = degree_sequence(&f, config.max_iterates, config.degree_budget, &mut config.rng(1))?;
    lambda1_from_sequence(seq, config.max_order)
}

fn dominant(f: &PolynomialMap) -> Result<DominantMap> {
    if f.f1.is_constant() && f.f2.is_constant() {
        return Err(Error::DegenerateInput("constant map".into()));
    }
    f.clone().into_dominant()
}

/// The exponent `l` in `deg fⁿ ∼ nˡ λ₁ⁿ`.
///
/// With `rₙ = deg fⁿ / λ₁ⁿ` at the last four verified indices: `l = 0` when the first
/// differences are below `10⁻³·rₙ`, `l = 1` when they are above it while the second
/// differences are below it.
pub fn growth_exponent(seq: &DegreeSequence, lambda1: &AlgebraicReal) -> Result<u8> {
    if lambda1.cmp_integer(1) != Ordering::Greater {
        return Err(Error::GrowthExponentUndefined);
    }
    let v = seq.verified_prefix();
    if v.len() < 6 {
        return Err(Error::Precondition(format!(
            "growth exponent needs 6 verified entries, got {}",
            v.len()
        )));
    }
    let lam = lambda1.to_f64();
    let last = v.len() - 1;
    let r: Vec<f64> = (last - 3..=last).map(|n| v[n] as f64 / lam.powi(n as i32)).collect();
    let thr = GROWTH_THRESHOLD * r[3];
    let d1: Vec<f64> = r.windows(2).map(|w| w[1] - w[0]).collect();
    let d2: Vec<f64> = d1.windows(2).map(|w| w[1] - w[0]).collect();
    if d1.iter().all(|d| d.abs() < thr) {
        Ok(0)
    } else if d1.iter().all(|&d| d > thr) && d2.iter().all(|d| d.abs() < thr) {
        Ok(1)
    } else {
        Err(Error::GrowthUndetermined(format!("ratios {r:?}")))
    }
}

/// Everything recorded about how the degrees were computed.
#[derive(Clone, Debug, Serialize)]
pub struct Confidence {
    pub config: DegreeConfig,
    pub sequence: DegreeSequence,
    pub recurrence: Option<LinearRecurrence>,
    pub lambda1_certified: bool,
    pub lambda2_observed: Vec<usize>,
    pub growth_threshold: f64,
    /// Why the growth exponent is missing, when it is.
    pub growth_note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DynamicalDegrees {
    pub lambda1: AlgebraicReal,
    pub lambda2: u64,
    /// `None` when λ₁ = 1 or the ratio test was inconclusive.
    pub growth_exponent: Option<u8>,
    pub small_topological_degree: bool,
    /// λ₂ ≤ λ₁², decided exactly.
    pub bezout_holds: bool,
    pub confidence: Confidence,
}

/// λ₁, λ₂ and `l` for a dominant map, and whether λ₂ < λ₁.
pub fn analyze_degrees(f: &PolynomialMap, config: &DegreeConfig) -> Result<DynamicalDegrees> {
    let fd = dominant(f)?;
    let l1 = lambda1(f, config)?;
    let l2 = lambda2(&fd, config.trials, &mut config.rng(2))?;
    let (growth, note) = match growth_exponent(&l1.sequence, &l1.value) {
        Ok(l) => (Some(l), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let small = l1.value.cmp_integer(l2.value as i64) == Ordering::Greater;
    let bezout_holds = l1.value.square_cmp_integer(l2.value) != Ordering::Less;
    Ok(DynamicalDegrees {
        lambda1: l1.value,
        lambda2: l2.value,
        growth_exponent: growth,
        small_topological_degree: small,
        bezout_holds,
        confidence: Confidence {
            config: config.clone(),
            sequence: l1.sequence,
            recurrence: l1.recurrence,
            lambda1_certified: l1.certified,
            lambda2_observed: l2.observed,
            growth_threshold: GROWTH_THRESHOLD,
            growth_note: note,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{BivariatePoly as P, UnivariatePoly};
    use num_rational::BigRational;

    fn map(f1: &[(i64, u32, u32)], f2: &[(i64, u32, u32)]) -> PolynomialMap {
        PolynomialMap::new(P::from_int_terms(f1), P::from_int_terms(f2))
    }

    fn seq(values: &[u64]) -> DegreeSequence {
        DegreeSequence {
            values: values.to_vec(),
            primes_used: vec![vec![]; values.len()],
            verified: vec![true; values.len()],
            truncated: false,
        }
    }

    #[test]
    fn noninvertible_map() {
        let f = map(&[(1, 1, 3), (1, 0, 2)], &[(1, 2, 3), (1, 1, 0)]);
        let d = analyze_degrees(&f, &DegreeConfig::default()).unwrap();
        assert_eq!(d.lambda1.minimal_polynomial(), Some(&UnivariatePoly::from_ints(&[-3, -4, 1])));
        assert!((d.lambda1.to_f64() - (2.0 + 7f64.sqrt())).abs() < 1e-12);
        assert!(d.lambda1.width() <= BigRational::new(5.into(), 1_000_000_000_000i64.into()));
        assert_eq!(d.lambda2, 4);
        assert_eq!(d.growth_exponent, Some(0));
        assert!(d.small_topological_degree);
        assert!(d.bezout_holds);
    }

    #[test]
    fn example16() {
        let f = map(&[(1, 2, 0)], &[(1, 1, 2)]);
        let d = analyze_degrees(&f, &DegreeConfig::default()).unwrap();
        assert_eq!(d.lambda1.as_rational(), Some(&BigRational::from_integer(2.into())));
        assert_eq!(d.lambda2, 4);
        assert_eq!(d.growth_exponent, Some(1));
        assert!(!d.small_topological_degree);
        assert!(d.bezout_holds);
    }

    #[test]
    fn identity() {
        let f = map(&[(1, 1, 0)], &[(1, 0, 1)]);
        let d = analyze_degrees(&f, &DegreeConfig::default()).unwrap();
        assert_eq!(d.lambda1.as_rational(), Some(&BigRational::from_integer(1.into())));
        assert_eq!(d.lambda2, 1);
        assert_eq!(d.growth_exponent, None);
        assert!(!d.small_topological_degree);
    }

    #[test]
    fn growth_exponent_examples() {
        let two = AlgebraicReal::from_integer(2);
        let ex16: Vec<u64> = std::iter::once(1).chain((1..=8u64).map(|n| (n + 2) << (n - 1))).collect();
        assert_eq!(growth_exponent(&seq(&ex16), &two).unwrap(), 1);
        assert_eq!(growth_exponent(&seq(&[1, 2, 4, 8, 16, 32]), &two).unwrap(), 0);
        let henon = map(&[(1, 0, 1)], &[(1, 0, 2), (-1, 1, 0)]);
        let l1 = lambda1(&henon, &DegreeConfig::default()).unwrap();
        assert_eq!(l1.value.as_rational(), Some(&BigRational::from_integer(2.into())));
        assert_eq!(growth_exponent(&l1.sequence, &l1.value).unwrap(), 0);
        assert!(matches!(
            growth_exponent(&seq(&[1; 8]), &AlgebraicReal::from_integer(1)),
            Err(Error::GrowthExponentUndefined)
        ));
    }

    #[test]
    fn degenerate_maps_are_rejected() {
        let c = map(&[(3, 0, 0)], &[(1, 0, 0)]);
        assert!(matches!(analyze_degrees(&c, &DegreeConfig::default()), Err(Error::DegenerateInput(_))));
        let dependent = map(&[(1, 1, 0), (1, 0, 1)], &[(1, 1, 0), (1, 0, 1)]);
        assert!(matches!(analyze_degrees(&dependent, &DegreeConfig::default()), Err(Error::NotDominant)));
    }

    #[test]
    fn fallback_without_recurrence() {
        let s = seq(&[1, 2, 3]);
        let l = lambda1_from_sequence(s, 6).unwrap();
        assert!(!l.certified);
        assert!((l.value.to_f64() - 3f64.sqrt()).abs() < 1e-9);
    }
}
