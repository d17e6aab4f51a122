use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::UnivariatePoly;

/// Default largest recurrence order tried.
pub const DEFAULT_MAX_ORDER: usize = 6;

/// Entries beyond the fitting window that a recurrence must reproduce.
const HELD_OUT: usize = 2;

/// `aₙ = c₁aₙ₋₁ + … + c_k aₙ₋ₖ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRecurrence {
    pub coefficients: Vec<BigRational>,
    pub characteristic_polynomial: UnivariatePoly,
}

impl LinearRecurrence {
    pub fn new(coefficients: Vec<BigRational>) -> Self {
        let k = coefficients.len();
        // x^k − c₁x^{k−1} − … − c_k
        let mut cp = vec![BigRational::zero(); k + 1];
        cp[k] = BigRational::one();
        for (i, c) in coefficients.iter().enumerate() {
            cp[k - 1 - i] = -c;
        }
        LinearRecurrence { coefficients, characteristic_polynomial: UnivariatePoly::new(cp) }
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// The value the recurrence predicts at index `n ≥ order` from earlier entries.
    pub fn predict(&self, values: &[BigRational], n: usize) -> BigRational {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(i, c)| c * &values[n - 1 - i])
            .sum()
    }

    /// Whether every entry from index `start + order` on is reproduced.
    pub fn fits(&self, values: &[u64], start: usize) -> bool {
        let q: Vec<BigRational> = values.iter().map(|&v| to_q(v)).collect();
        (start + self.order()..q.len()).all(|n| self.predict(&q, n) == q[n])
    }
}

impl Serialize for LinearRecurrence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LinearRecurrence", 3)?;
        st.serialize_field("order", &self.order())?;
        let c: Vec<String> = self.coefficients.iter().map(|c| c.to_string()).collect();
        st.serialize_field("coefficients", &c)?;
        st.serialize_field("characteristic_polynomial", &self.characteristic_polynomial)?;
        st.end()
    }
}

fn to_q(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// The lowest-order recurrence of order at most `max_order` satisfied by every entry
/// after index 0.
///
/// Order `k` is fitted on entries `1..=2k` by solving the Hankel system exactly and
/// must then reproduce all remaining entries, of which there must be at least two.
/// Orders without enough held-out entries are not tried.
pub fn detect_recurrence(values: &[u64], max_order: usize) -> Result<Option<LinearRecurrence>> {
    if max_order == 0 || values.len() < 2 * max_order + 2 {
        return Err(Error::Precondition(format!(
            "recurrence detection up to order {max_order} needs at least {} entries, got {}",
            2 * max_order + 2,
            values.len()
        )));
    }
    let q: Vec<BigRational> = values.iter().map(|&v| to_q(v)).collect();
    for k in 1..=max_order {
        if q.len() < 1 + 2 * k + HELD_OUT {
            break;
        }
        // Rows n = k+1..=2k: a_n = Σ c_i a_{n−i}.
        let rows: Vec<Vec<BigRational>> = (k + 1..=2 * k)
            .map(|n| (1..=k).map(|i| q[n - i].clone()).collect())
            .collect();
        let rhs: Vec<BigRational> = (k + 1..=2 * k).map(|n| q[n].clone()).collect();
        let Some(c) = solve(rows, rhs) else { continue };
        let rec = LinearRecurrence::new(c);
        if rec.fits(values, 1) {
            return Ok(Some(rec));
        }
    }
    Ok(None)
}

/// Gaussian elimination over ℚ; `None` for a singular system.
fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &a[col][col];
            for c in col..n {
                let t = &factor * &a[col][c];
                a[r][c] -= t;
            }
            let t = &factor * &b[col];
            b[r] -= t;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for r in (0..n).rev() {
        let mut s = b[r].clone();
        for c in r + 1..n {
            s -= &a[r][c] * &x[c];
        }
        x[r] = s / &a[r][r];
    }
    Some(x)
}
