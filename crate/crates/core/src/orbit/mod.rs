//! Exact orbits, canonical heights, arithmetic degrees and orbit classification.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::degrees::{AlgebraicReal, DynamicalDegrees};
use crate::error::{Error, Result};
use crate::heights::{bad_places, global_height, GlobalHeight, Place, RationalPoint};
use crate::poly::{rational_to_f64, PolynomialMap};

mod step;

/// Default cap on the bits of any canonical coordinate along an orbit.
pub const DEFAULT_ORBIT_BIT_BUDGET: u64 = 10_000_000;

/// Below this the canonical height estimate counts as zero.
pub const DEFAULT_ZERO_THRESHOLD: f64 = 0.05;

/// Slack allowed when comparing the arithmetic degree with λ₂.
pub const DEFAULT_ALPHA_TOLERANCE: f64 = 0.1;

/// Ratio `h(fⁿ⁺¹P)/h(fⁿP)` the last samples must exceed to count as growth.
const GROWTH_RATIO: f64 = 1.01;
const GROWTH_SAMPLES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StopReason {
    Completed,
    BudgetExceeded,
    CycleDetected { preperiod: usize, period: usize },
}

/// `P, f(P), f²(P), …` with exact heights.
///
/// When a cycle is found the repeated point is stored once more, so that
/// `points[preperiod] == points[preperiod + period]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub points: Vec<RationalPoint>,
    pub heights: Vec<GlobalHeight>,
    pub stop_reason: StopReason,
}

impl Orbit {
    /// Index of the last stored point.
    pub fn last_index(&self) -> usize {
        self.points.len() - 1
    }

    /// `h(fⁿP)`, read through the cycle when `n` lies past the stored points.
    pub fn height_at(&self, n: usize) -> Option<&GlobalHeight> {
        if n < self.heights.len() {
            return Some(&self.heights[n]);
        }
        match self.stop_reason {
            StopReason::CycleDetected { preperiod, period } => {
                let k = preperiod + (n - preperiod) % period;
                Some(&self.heights[k])
            }
            _ => None,
        }
    }

    /// Largest `n` for which `h(fⁿP)` is known, or `None` when the orbit is a cycle.
    pub fn known_up_to(&self) -> Option<usize> {
        match self.stop_reason {
            StopReason::CycleDetected { .. } => None,
            _ => Some(self.last_index()),
        }
    }

    pub fn is_cycle(&self) -> bool {
        matches!(self.stop_reason, StopReason::CycleDetected { .. })
    }
}

impl Serialize for Orbit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Orbit", 4)?;
        st.serialize_field("points", &self.points)?;
        let args: Vec<String> = self.heights.iter().map(|h| h.log_argument.to_string()).collect();
        st.serialize_field("height_log_arguments", &args)?;
        let values: Vec<f64> = self.heights.iter().map(GlobalHeight::value).collect();
        st.serialize_field("heights", &values)?;
        st.serialize_field("stop_reason", &self.stop_reason)?;
        st.end()
    }
}

/// Iterates `f` from `p` for up to `max_n` steps, stopping early on an exact
/// repetition or when a coordinate would exceed `bit_budget` bits.
pub fn orbit(f: &PolynomialMap, p: &RationalPoint, max_n: usize, bit_budget: u64) -> Orbit {
    // Every denominator along the orbit is built from these primes.
    let primes: Vec<BigInt> = bad_places(f, p)
        .places
        .into_iter()
        .filter_map(|v| match v {
            Place::Finite(q) => Some(q),
            Place::Archimedean => None,
        })
        .collect();
    let mut stepper = step::Stepper::new(f, p, primes);
    let mut seen: HashMap<RationalPoint, usize> = HashMap::new();
    let mut points = vec![p.clone()];
    let mut heights = vec![global_height(p)];
    seen.insert(p.clone(), 0);
    let mut stop_reason = StopReason::Completed;
    for n in 1..=max_n {
        let next = match stepper.step(bit_budget) {
            Ok(q) => q,
            Err(_) => {
                stop_reason = StopReason::BudgetExceeded;
                break;
            }
        };
        heights.push(global_height(&next));
        points.push(next.clone());
        if let Some(&k) = seen.get(&next) {
            stop_reason = StopReason::CycleDetected { preperiod: k, period: n - k };
            break;
        }
        seen.insert(next, n);
    }
    Orbit { points, heights, stop_reason }
}

/// `ĥ_N(P) = h(f^N P) / (N^l λ₁^N)`.
#[derive(Clone, Debug, Serialize)]
pub struct CanonicalHeightEstimate {
    pub value: f64,
    pub iterations_used: usize,
    /// `|ĥ_N − ĥ_{N−1}|`, recorded when `N ≥ 2`.
    pub tail_delta: Option<f64>,
    /// Whether `tail_delta` is within the requested tolerance.
    pub converged: bool,
    pub lambda1: AlgebraicReal,
    pub growth_exponent: u8,
    /// The orbit is a cycle, so ĥ = 0 exactly.
    pub certified_zero: bool,
    /// The bit budget cut the orbit short of the requested length.
    pub budget_exceeded: bool,
    /// Bound on the error of `value` coming from the width of λ₁'s interval.
    pub lambda1_error: f64,
    /// `ĥ_n` for `n = 1..=N`.
    pub estimates: Vec<f64>,
}

/// Parameters shared by the orbit estimators.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitConfig {
    pub max_iter: usize,
    pub bit_budget: u64,
    pub tol: f64,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        OrbitConfig { max_iter: 16, bit_budget: DEFAULT_ORBIT_BIT_BUDGET, tol: 1e-3 }
    }
}

fn lambda1_bounds(degrees: &DynamicalDegrees) -> Result<(f64, f64, f64)> {
    let l = &degrees.lambda1;
    if l.cmp_integer(1) != Ordering::Greater {
        return Err(Error::Precondition("canonical height needs λ₁ > 1".into()));
    }
    Ok((rational_to_f64(l.lower()), l.to_f64(), rational_to_f64(l.upper())))
}

/// `ĥ_n` together with its spread over λ₁'s isolating interval.
fn normalized(h: f64, n: usize, l: u8, lam: (f64, f64, f64)) -> (f64, f64) {
    let nl = if l == 1 { n as f64 } else { 1.0 };
    let at = |x: f64| h / (nl * x.powi(n as i32));
    (at(lam.1), (at(lam.0) - at(lam.2)).abs())
}

/// Estimates `ĥ(P)` from `h(f^N P)` with `N = config.max_iter`.
pub fn canonical_height(
    f: &PolynomialMap,
    p: &RationalPoint,
    degrees: &DynamicalDegrees,
    config: &OrbitConfig,
) -> Result<CanonicalHeightEstimate> {
    let o = orbit(f, p, config.max_iter, config.bit_budget);
    canonical_height_from_orbit(&o, degrees, config)
}

pub fn canonical_height_from_orbit(
    o: &Orbit,
    degrees: &DynamicalDegrees,
    config: &OrbitConfig,
) -> Result<CanonicalHeightEstimate> {
    let lam = lambda1_bounds(degrees)?;
    let l = degrees.growth_exponent.unwrap_or(0);
    let n_max = o.known_up_to().unwrap_or(config.max_iter).min(config.max_iter);
    if n_max == 0 && config.max_iter > 0 && o.stop_reason == StopReason::BudgetExceeded {
        // Not even f(P) fits: there is no estimate to flag.
        return Err(Error::OrbitBudgetExceeded { budget: config.bit_budget, iterates: 0 });
    }
    let certified_zero = o.is_cycle();
    let mut estimates = Vec::with_capacity(n_max);
    let mut spread = 0.0;
    for n in 1..=n_max {
        let (v, s) = if certified_zero {
            (0.0, 0.0)
        } else {
            normalized(o.height_at(n).unwrap().value(), n, l, lam)
        };
        estimates.push(v);
        spread = s;
    }
    let value = estimates.last().copied().unwrap_or_else(|| o.heights[0].value());
    let tail_delta = (n_max >= 2).then(|| (estimates[n_max - 1] - estimates[n_max - 2]).abs());
    Ok(CanonicalHeightEstimate {
        value,
        iterations_used: n_max,
        tail_delta,
        converged: tail_delta.is_some_and(|d| d <= config.tol),
        lambda1: degrees.lambda1.clone(),
        growth_exponent: l,
        certified_zero,
        budget_exceeded: o.stop_reason == StopReason::BudgetExceeded,
        lambda1_error: spread,
        estimates,
    })
}

/// `ĥ_N(f(P)) − λ₁·ĥ_N(P)`; exactly zero on preperiodic points.
pub fn functional_equation_residual(
    f: &PolynomialMap,
    p: &RationalPoint,
    degrees: &DynamicalDegrees,
    n: usize,
    bit_budget: u64,
) -> Result<f64> {
    let o = orbit(f, p, n + 1, bit_budget);
    residual_from_orbit(&o, degrees, n, bit_budget)
}

/// The residual at `n` from an orbit stored to at least `n + 1`.
pub fn residual_from_orbit(o: &Orbit, degrees: &DynamicalDegrees, n: usize, bit_budget: u64) -> Result<f64> {
    let lam = lambda1_bounds(degrees)?;
    if n == 0 {
        return Err(Error::Precondition("functional equation needs N ≥ 1".into()));
    }
    if o.is_cycle() {
        // ĥ vanishes on the whole cycle.
        return Ok(0.0);
    }
    let (Some(h0), Some(h1)) = (o.height_at(n), o.height_at(n + 1)) else {
        return Err(Error::OrbitBudgetExceeded { budget: bit_budget, iterates: o.last_index() });
    };
    let l = degrees.growth_exponent.unwrap_or(0);
    let (at_p, _) = normalized(h0.value(), n, l, lam);
    let (at_fp, _) = normalized(h1.value(), n, l, lam);
    Ok(at_fp - lam.1 * at_p)
}

/// Samples `max(1, h(fⁿP))^{1/n}` and the value at the largest `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArithmeticDegreeEstimate {
    pub samples: Vec<(usize, f64)>,
    pub extrapolated: f64,
    /// First and last index used.
    pub window: (usize, usize),
}

pub fn arithmetic_degree(f: &PolynomialMap, p: &RationalPoint, max_n: usize, bit_budget: u64) -> ArithmeticDegreeEstimate {
    arithmetic_degree_from_orbit(&orbit(f, p, max_n, bit_budget), max_n)
}

pub fn arithmetic_degree_from_orbit(o: &Orbit, max_n: usize) -> ArithmeticDegreeEstimate {
    let last = o.known_up_to().unwrap_or(max_n).min(max_n);
    let samples: Vec<(usize, f64)> = (1..=last)
        .map(|n| (n, o.height_at(n).unwrap().value().max(1.0).powf(1.0 / n as f64)))
        .collect();
    let extrapolated = samples.last().map_or(1.0, |s| s.1);
    ArithmeticDegreeEstimate { samples, extrapolated, window: (1.min(last), last) }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum OrbitClass {
    Periodic { preperiod: usize, period: usize },
    HeightGrowing { rate: f64 },
    Undetermined { note: String },
}

/// Periodic on an exact repetition; height-growing when the last height exceeds
/// `height_bound` and the last five ratios of consecutive heights exceed 1.01.
pub fn classify_orbit(f: &PolynomialMap, p: &RationalPoint, height_bound: f64, max_n: usize, bit_budget: u64) -> OrbitClass {
    classify_from_orbit(&orbit(f, p, max_n, bit_budget), height_bound)
}

pub fn classify_from_orbit(o: &Orbit, height_bound: f64) -> OrbitClass {
    if let StopReason::CycleDetected { preperiod, period } = o.stop_reason {
        return OrbitClass::Periodic { preperiod, period };
    }
    let h: Vec<f64> = o.heights.iter().map(GlobalHeight::value).collect();
    let last = *h.last().unwrap();
    if h.len() < GROWTH_SAMPLES + 1 {
        return OrbitClass::Undetermined { note: format!("only {} iterates computed", h.len() - 1) };
    }
    let ratios: Vec<f64> = h[h.len() - GROWTH_SAMPLES - 1..]
        .windows(2)
        .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { f64::INFINITY })
        .collect();
    if last > height_bound && ratios.iter().all(|&r| r > GROWTH_RATIO && r.is_finite()) {
        return OrbitClass::HeightGrowing { rate: *ratios.last().unwrap() };
    }
    let note = match o.stop_reason {
        StopReason::BudgetExceeded => format!("bit budget reached after {} iterates", h.len() - 1),
        _ => format!("no repetition in {} iterates; last height {last:.6}", h.len() - 1),
    };
    OrbitClass::Undetermined { note }
}

#[derive(Clone, Debug, Serialize)]
pub struct MainTheoremReport {
    /// λ₂ < λ₁.
    pub hypothesis_ok: bool,
    pub hhat: CanonicalHeightEstimate,
    pub alpha: ArithmeticDegreeEstimate,
    /// `α ≤ λ₂ + tolerance`, only when the hypothesis holds and ĥ is below the threshold.
    pub inequality_star_ok: Option<bool>,
    pub functional_equation_residual: Option<f64>,
    pub zero_threshold: f64,
    pub notes: Vec<String>,
}

/// Checks the canonical height and arithmetic degree of `p` against the dichotomy
/// for maps of small topological degree.
pub fn check_main_theorem(
    f: &PolynomialMap,
    p: &RationalPoint,
    degrees: &DynamicalDegrees,
    zero_threshold: f64,
    config: &OrbitConfig,
) -> Result<MainTheoremReport> {
    let o = orbit(f, p, config.max_iter + 1, config.bit_budget);
    let hhat = canonical_height_from_orbit(&o, degrees, config)?;
    let alpha = arithmetic_degree_from_orbit(&o, config.max_iter);
    let mut notes = Vec::new();
    let residual = match residual_from_orbit(&o, degrees, hhat.iterations_used.max(1), config.bit_budget) {
        Ok(r) => Some(r),
        Err(e) => {
            notes.push(format!("functional equation residual unavailable: {e}"));
            None
        }
    };
    let hypothesis_ok = degrees.small_topological_degree;
    let is_zero = hhat.certified_zero || hhat.value < zero_threshold;
    let inequality_star_ok = if hypothesis_ok && is_zero {
        let bound = degrees.lambda2 as f64 + DEFAULT_ALPHA_TOLERANCE;
        Some(alpha.extrapolated <= bound)
    } else {
        None
    };
    if !hypothesis_ok {
        notes.push(format!(
            "theorem inapplicable: λ₂ = {} is not below λ₁ ≈ {:.6}",
            degrees.lambda2,
            degrees.lambda1.to_f64()
        ));
        if is_zero {
            notes.push(format!(
                "ĥ ≈ {:.6} is below the zero threshold while α ≈ {:.6}",
                hhat.value, alpha.extrapolated
            ));
        }
    }
    if hhat.budget_exceeded {
        notes.push(format!("bit budget reached; estimates use N = {}", hhat.iterations_used));
    }
    Ok(MainTheoremReport {
        hypothesis_ok,
        hhat,
        alpha,
        inequality_star_ok,
        functional_equation_residual: residual,
        zero_threshold,
        notes,
    })
}

/// `log M` of an orbit height as a power of two, when it is one: `M = 2^k` gives `Some(k)`.
pub fn log2_if_power_of_two(h: &GlobalHeight) -> Option<u64> {
    let m: &BigInt = &h.log_argument;
    let k = m.bits() - 1;
    (m == &(BigInt::from(1) << k as usize)).then_some(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degrees::{analyze_degrees, DegreeConfig};
    use crate::poly::BivariatePoly as P;

    fn map(f1: &[(i64, u32, u32)], f2: &[(i64, u32, u32)]) -> PolynomialMap {
        PolynomialMap::new(P::from_int_terms(f1), P::from_int_terms(f2))
    }

    fn henon() -> PolynomialMap {
        map(&[(1, 0, 1)], &[(1, 0, 2), (-1, 1, 0)])
    }

    fn example16() -> PolynomialMap {
        map(&[(1, 2, 0)], &[(1, 1, 2)])
    }

    fn noninvertible() -> PolynomialMap {
        map(&[(1, 1, 3), (1, 0, 2)], &[(1, 2, 3), (1, 1, 0)])
    }

    fn pt(a: i64, b: i64) -> RationalPoint {
        RationalPoint::from_ints(a, b)
    }

    #[test]
    fn orbits() {
        let o = orbit(&henon(), &pt(0, 0), 10, DEFAULT_ORBIT_BIT_BUDGET);
        assert_eq!(o.stop_reason, StopReason::CycleDetected { preperiod: 0, period: 1 });
        let o = orbit(&noninvertible(), &pt(2, 0), 5, DEFAULT_ORBIT_BIT_BUDGET);
        let want = [pt(2, 0), pt(0, 2), pt(4, 0), pt(0, 4), pt(16, 0), pt(0, 16)];
        assert_eq!(o.points, want);
        assert_eq!(o.stop_reason, StopReason::Completed);
        let o = orbit(&example16(), &pt(0, 0), 10, DEFAULT_ORBIT_BIT_BUDGET);
        assert_eq!(o.stop_reason, StopReason::CycleDetected { preperiod: 0, period: 1 });
    }

    #[test]
    fn budget_truncates_orbit() {
        let o = orbit(&example16(), &pt(2, 0), 40, 1000);
        assert_eq!(o.stop_reason, StopReason::BudgetExceeded);
        assert_eq!(o.last_index(), 9); // 2^(2^9) has 513 bits, 2^(2^10) has 1025
    }

    #[test]
    fn heights_are_exact_powers_of_two() {
        let o = orbit(&example16(), &pt(2, 0), 12, DEFAULT_ORBIT_BIT_BUDGET);
        for (n, h) in o.heights.iter().enumerate() {
            assert_eq!(log2_if_power_of_two(h), Some(1 << n));
        }
    }

    #[test]
    fn canonical_heights() {
        let cfg = DegreeConfig::default();
        let d16 = analyze_degrees(&example16(), &cfg).unwrap();
        let oc = OrbitConfig { max_iter: 14, ..OrbitConfig::default() };
        let est = canonical_height(&example16(), &pt(2, 0), &d16, &oc).unwrap();
        assert!((est.value - 2f64.ln() / 14.0).abs() < 1e-12);
        assert!(est.value <= 0.05);

        let dh = analyze_degrees(&henon(), &cfg).unwrap();
        let fixed = canonical_height(&henon(), &pt(0, 0), &dh, &OrbitConfig::default()).unwrap();
        assert!(fixed.certified_zero);
        assert_eq!(fixed.value, 0.0);

        let a = canonical_height(&henon(), &pt(3, 5), &dh, &OrbitConfig { max_iter: 16, ..oc.clone() }).unwrap();
        let b = canonical_height(&henon(), &pt(3, 5), &dh, &OrbitConfig { max_iter: 18, ..oc }).unwrap();
        assert!(a.value > 0.0);
        assert!((a.value - b.value).abs() < 1e-3);
    }

    #[test]
    fn residuals() {
        let cfg = DegreeConfig::default();
        let dh = analyze_degrees(&henon(), &cfg).unwrap();
        let r = functional_equation_residual(&henon(), &pt(2, 2), &dh, 8, DEFAULT_ORBIT_BIT_BUDGET).unwrap();
        assert_eq!(r, 0.0);
        let r = functional_equation_residual(&henon(), &pt(3, 5), &dh, 16, DEFAULT_ORBIT_BIT_BUDGET).unwrap();
        assert!(r.abs() < 1e-3);

        // Axis orbit: h(fⁿP) = 2^⌊n/2⌋ log 2, so at N = 10 the residual is
        // (32 − 32λ₁) log 2 / λ₁¹⁰.
        let dn = analyze_degrees(&noninvertible(), &cfg).unwrap();
        let r = functional_equation_residual(&noninvertible(), &pt(2, 0), &dn, 10, DEFAULT_ORBIT_BIT_BUDGET).unwrap();
        let lam = 2.0 + 7f64.sqrt();
        let expected = 32.0 * (1.0 - lam) * 2f64.ln() / lam.powi(10);
        assert!((r - expected).abs() < 1e-15);
    }

    #[test]
    fn arithmetic_degrees() {
        let a = arithmetic_degree(&example16(), &pt(2, 0), 20, DEFAULT_ORBIT_BIT_BUDGET);
        assert!((a.extrapolated - 2.0).abs() < 0.05);
        for &(n, s) in &a.samples {
            assert!((s - 2.0 * 2f64.ln().powf(1.0 / n as f64)).abs() < 1e-9);
        }
        let a = arithmetic_degree(&henon(), &pt(0, 0), 20, DEFAULT_ORBIT_BIT_BUDGET);
        assert_eq!(a.extrapolated, 1.0);
        let a = arithmetic_degree(&noninvertible(), &pt(2, 0), 16, DEFAULT_ORBIT_BIT_BUDGET);
        assert!((a.extrapolated - 2f64.sqrt()).abs() < 0.1);
    }

    #[test]
    fn classification() {
        let b = DEFAULT_ORBIT_BIT_BUDGET;
        assert_eq!(classify_orbit(&henon(), &pt(2, 2), 10.0, 20, b), OrbitClass::Periodic { preperiod: 0, period: 1 });
        match classify_orbit(&henon(), &pt(3, 5), 10.0, 20, b) {
            OrbitClass::HeightGrowing { rate } => assert!((rate - 2.0).abs() < 0.01),
            other => panic!("{other:?}"),
        }
        let id = map(&[(1, 1, 0)], &[(1, 0, 1)]);
        assert_eq!(classify_orbit(&id, &pt(7, -3), 10.0, 20, b), OrbitClass::Periodic { preperiod: 0, period: 1 });
    }

    #[test]
    fn main_theorem_reports() {
        let cfg = DegreeConfig::default();
        let dn = analyze_degrees(&noninvertible(), &cfg).unwrap();
        let oc = OrbitConfig { max_iter: 10, ..OrbitConfig::default() };
        let r = check_main_theorem(&noninvertible(), &pt(2, 0), &dn, DEFAULT_ZERO_THRESHOLD, &oc).unwrap();
        assert!(r.hypothesis_ok);
        assert!(r.hhat.value < 1e-3);
        assert!((1.31..=1.52).contains(&r.alpha.extrapolated));
        assert_eq!(r.inequality_star_ok, Some(true));

        let d16 = analyze_degrees(&example16(), &cfg).unwrap();
        let oc = OrbitConfig { max_iter: 14, ..OrbitConfig::default() };
        let r = check_main_theorem(&example16(), &pt(2, 0), &d16, DEFAULT_ZERO_THRESHOLD, &oc).unwrap();
        assert!(!r.hypothesis_ok);
        assert_eq!(r.inequality_star_ok, None);
        assert!(r.notes.iter().any(|n| n.contains("inapplicable")));

        let dh = analyze_degrees(&henon(), &cfg).unwrap();
        let r = check_main_theorem(&henon(), &pt(0, 0), &dh, DEFAULT_ZERO_THRESHOLD, &OrbitConfig::default()).unwrap();
        assert!(r.hypothesis_ok);
        assert!(r.hhat.certified_zero);
        assert!(r.alpha.samples.iter().all(|s| s.1 <= 1.0));
        assert_eq!(r.inequality_star_ok, Some(true));
    }
}
