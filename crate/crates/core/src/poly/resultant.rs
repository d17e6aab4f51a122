//! Sylvester resultants. The determinant is always taken with the rows of the
//! first polynomial above the rows of the second; this fixes the sign.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::degree::Degree;
use super::sparse::{BivariatePoly, Var};
use super::univariate::UnivariatePoly;
use crate::error::{Error, Result};

/// Determinant of a square rational matrix by fraction-free Bareiss elimination.
pub fn determinant(rows: &[Vec<BigRational>]) -> BigRational {
    let n = rows.len();
    if n == 0 {
        return BigRational::one();
    }
    // Clear denominators row by row.
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            debug_assert_eq!(row.len(), n);
            let l = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            scale *= &l;
            row.iter()
                .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigRational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = if sign < 0 { -&m[n - 1][n - 1] } else { m[n - 1][n - 1].clone() };
    BigRational::new(det, scale)
}

/// Sylvester matrix of `p` and `q` read with formal degrees `m` and `n`
/// (coefficient vectors low degree first, padded with zeros as needed).
fn sylvester(p: &[BigRational], m: usize, q: &[BigRational], n: usize) -> Vec<Vec<BigRational>> {
    let size = m + n;
    let coeff = |v: &[BigRational], k: usize| v.get(k).cloned().unwrap_or_else(BigRational::zero);
    let mut rows = Vec::with_capacity(size);
    for r in 0..n {
        let mut row = vec![BigRational::zero(); size];
        for k in 0..=m {
            row[r + k] = coeff(p, m - k);
        }
        rows.push(row);
    }
    for r in 0..m {
        let mut row = vec![BigRational::zero(); size];
        for k in 0..=n {
            row[r + k] = coeff(q, n - k);
        }
        rows.push(row);
    }
    rows
}

/// Resultant of two univariate polynomials with their actual degrees.
pub fn resultant(p: &UnivariatePoly, q: &UnivariatePoly) -> BigRational {
    match (p.degree(), q.degree()) {
        (Degree::Finite(m), Degree::Finite(n)) => {
            determinant(&sylvester(p.coeffs(), m as usize, q.coeffs(), n as usize))
        }
        _ => BigRational::zero(),
    }
}

/// `Res_v(p, q)` as a polynomial in the remaining variable.
///
/// Computed by evaluating the remaining variable at `deg p · deg q + 1` integers,
/// taking Sylvester determinants with the formal degrees of `p` and `q` in `v`,
/// and interpolating.
pub fn resultant_eliminate(p: &BivariatePoly, q: &BivariatePoly, v: Var) -> Result<UnivariatePoly> {
    let (m, n) = match (p.degree_in(v), q.degree_in(v)) {
        (Degree::Finite(m), Degree::Finite(n)) if m > 0 && n > 0 => (m as usize, n as usize),
        _ => {
            return Err(Error::Precondition(
                "both polynomials need positive degree in the eliminated variable".into(),
            ))
        }
    };
    let bound = (p.total_degree().finite().unwrap() * q.total_degree().finite().unwrap()) as usize;
    let other = match v {
        Var::X => Var::Y,
        Var::Y => Var::X,
    };
    let pc = univariate_coefficients(p, v, other);
    let qc = univariate_coefficients(q, v, other);
    let nodes: Vec<BigRational> = (0..=bound as i64).map(|k| BigRational::from_integer(k.into())).collect();
    let values: Vec<BigRational> = nodes
        .iter()
        .map(|t| {
            let pv: Vec<BigRational> = pc.iter().map(|c| c.eval(t)).collect();
            let qv: Vec<BigRational> = qc.iter().map(|c| c.eval(t)).collect();
            determinant(&sylvester(&pv, m, &qv, n))
        })
        .collect();
    Ok(interpolate(&nodes, &values))
}

/// Coefficients of `p` as a polynomial in `v`, each a univariate polynomial in `other`.
fn univariate_coefficients(p: &BivariatePoly, v: Var, other: Var) -> Vec<UnivariatePoly> {
    p.coefficients_in(v)
        .into_iter()
        .map(|c| {
            let deg = c.degree_in(other).finite().unwrap_or(0) as usize;
            let mut coeffs = vec![BigRational::zero(); deg + 1];
            for (&(i, j), a) in c.terms() {
                let k = if other == Var::X { i } else { j };
                coeffs[k as usize] = a.clone();
            }
            UnivariatePoly::new(coeffs)
        })
        .collect()
}

/// Newton interpolation through `(nodes[k], values[k])`.
pub fn interpolate(nodes: &[BigRational], values: &[BigRational]) -> UnivariatePoly {
    let n = nodes.len();
    let mut dd = values.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            dd[k] = (&dd[k] - &dd[k - 1]) / (&nodes[k] - &nodes[k - level]);
        }
    }
    let mut acc = UnivariatePoly::zero();
    for k in (0..n).rev() {
        let lin = UnivariatePoly::linear_with_root(&nodes[k]);
        acc = &(&acc * &lin) + &UnivariatePoly::constant(dd[k].clone());
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ring::Rationals;
    use crate::poly::sparse::SparsePoly;

    fn qi(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn determinant_small() {
        let m = vec![vec![qi(2), qi(1)], vec![qi(7), qi(4)]];
        assert_eq!(determinant(&m), qi(1));
        let m = vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]];
        assert_eq!(determinant(&m), qi(-1));
        let h = BigRational::new(1.into(), 2.into());
        let m = vec![vec![h.clone(), qi(0)], vec![qi(0), h]];
        assert_eq!(determinant(&m), BigRational::new(1.into(), 4.into()));
    }

    #[test]
    fn eliminate_y_examples() {
        // Res_y(y^2 - x, y - 1) = 1 - x
        let p = BivariatePoly::from_int_terms(&[(1, 0, 2), (-1, 1, 0)]);
        let q = BivariatePoly::from_int_terms(&[(1, 0, 1), (-1, 0, 0)]);
        let r = resultant_eliminate(&p, &q, Var::Y).unwrap();
        assert_eq!(r, UnivariatePoly::from_ints(&[1, -1]));

        // Res_y(y - a, y - b) = a - b
        let p = BivariatePoly::from_int_terms(&[(1, 0, 1), (-3, 0, 0)]);
        let q = BivariatePoly::from_int_terms(&[(1, 0, 1), (-5, 0, 0)]);
        assert_eq!(resultant_eliminate(&p, &q, Var::Y).unwrap(), UnivariatePoly::from_ints(&[3 - 5]));

        // common root y = 0
        let p = BivariatePoly::from_int_terms(&[(1, 1, 2)]);
        let q = BivariatePoly::from_int_terms(&[(1, 1, 3)]);
        assert!(resultant_eliminate(&p, &q, Var::Y).unwrap().is_zero());
    }

    #[test]
    fn eliminate_needs_positive_degree() {
        let p = BivariatePoly::from_int_terms(&[(1, 2, 0)]);
        let q = BivariatePoly::y();
        assert!(matches!(resultant_eliminate(&p, &q, Var::Y), Err(Error::Precondition(_))));
    }

    #[test]
    fn univariate_resultant_is_product_of_differences() {
        // Res((x-1)(x-2), x-5) = (1-5)(2-5) = 12 for monic inputs.
        let p = UnivariatePoly::from_ints(&[2, -3, 1]);
        let q = UnivariatePoly::from_ints(&[-5, 1]);
        assert_eq!(resultant(&p, &q), qi(12));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = UnivariatePoly::from_ints(&[3, 0, -2, 1]);
        let nodes: Vec<_> = (0..6).map(qi).collect();
        let vals: Vec<_> = nodes.iter().map(|t| f.eval(t)).collect();
        assert_eq!(interpolate(&nodes, &vals), f);
    }

    #[test]
    fn eliminate_x_by_symmetry() {
        let p = SparsePoly::from_terms(&Rationals, [((2, 0), qi(1)), ((0, 1), qi(-1))]);
        let q = SparsePoly::from_terms(&Rationals, [((1, 0), qi(1)), ((0, 0), qi(-1))]);
        assert_eq!(resultant_eliminate(&p, &q, Var::X).unwrap(), UnivariatePoly::from_ints(&[1, -1]));
    }
}
