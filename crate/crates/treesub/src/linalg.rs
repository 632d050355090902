//! Exact integer / rational linear algebra.
//!
//! Small dense matrices only; sizes here are bounded by the alphabet of the
//! substitution (or of the contour substitution), a dozen at most. Integer
//! systems are solved fraction-free (Bareiss); rational systems by ordinary
//! exact Gaussian elimination.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type QMat = Vec<Vec<BigRational>>;
pub type QVec = Vec<BigRational>;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn int_to_q_mat(m: &[Vec<BigInt>]) -> QMat {
    m.iter()
        .map(|row| row.iter().map(|e| BigRational::from_integer(e.clone())).collect())
        .collect()
}

pub fn identity(n: usize) -> QMat {
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigRational::one();
    }
    m
}

pub fn mat_mul(a: &QMat, b: &QMat) -> QMat {
    let n = a.len();
    let p = b[0].len();
    let mut out = vec![vec![BigRational::zero(); p]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..p {
                let t = aik * &b[k][j];
                out[i][j] += t;
            }
        }
    }
    out
}

pub fn mat_vec(a: &QMat, v: &QVec) -> QVec {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn mat_sub(a: &QMat, b: &QMat) -> QMat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn mat_pow(a: &QMat, n: usize) -> QMat {
    let mut acc = identity(a.len());
    for _ in 0..n {
        acc = mat_mul(&acc, a);
    }
    acc
}

/// Solves `A x = b` by exact Gaussian elimination. Errors if `A` is singular.
pub fn solve(a: &QMat, b: &QVec) -> Result<QVec> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let mut rhs = b.clone();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::Invariant("singular matrix in solve".into()))?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        let inv = m[col][col].recip();
        for j in col..n {
            m[col][j] = &m[col][j] * &inv;
        }
        rhs[col] = &rhs[col] * &inv;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..n {
                    let t = &f * &m[col][j];
                    m[r][j] -= t;
                }
                let t = &f * &rhs[col];
                rhs[r] -= t;
            }
        }
    }
    Ok(rhs)
}

/// Inverse of an exactly invertible rational matrix.
pub fn invert(a: &QMat) -> Result<QMat> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![BigRational::zero(); n];
        e[j] = BigRational::one();
        cols.push(solve(a, &e)?);
    }
    // transpose columns into a matrix
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            out[i][j] = col[i].clone();
        }
    }
    Ok(out)
}

/// Fraction-free (Bareiss) solve of an integer system `A x = b`.
/// Returns the rational solution. Errors if `A` is singular.
pub fn bareiss_solve(a: &[Vec<BigInt>], b: &[BigInt]) -> Result<QVec> {
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut denom = BigInt::one();
    for k in 0..n {
        let piv = (k..n)
            .find(|&r| !m[r][k].is_zero())
            .ok_or_else(|| Error::Invariant("singular matrix in bareiss_solve".into()))?;
        m.swap(k, piv);
        for i in (k + 1)..n {
            for j in (k + 1)..=n {
                let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = &num / &denom;
            }
            m[i][k] = BigInt::zero();
        }
        denom = m[k][k].clone();
    }
    // back substitution over rationals
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(m[i][n].clone());
        for j in (i + 1)..n {
            acc -= BigRational::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / BigRational::from_integer(m[i][i].clone());
    }
    Ok(x)
}

/// Characteristic polynomial of an integer matrix by Faddeev–LeVerrier.
/// Returned as integer coefficients, highest degree first, monic.
pub fn char_poly(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = m.len();
    let mq = int_to_q_mat(m);
    let mut coeffs = vec![BigRational::one()];
    let mut aux = identity(n);
    for k in 1..=n {
        aux = mat_mul(&mq, &aux);
        let tr: BigRational = (0..n).map(|i| aux[i][i].clone()).sum();
        let c = -tr / BigRational::from_integer(BigInt::from(k as i64));
        for (i, row) in aux.iter_mut().enumerate() {
            row[i] += c.clone();
        }
        coeffs.push(c);
    }
    coeffs
        .into_iter()
        .map(|c| {
            debug_assert!(c.is_integer());
            c.to_integer()
        })
        .collect()
}

pub fn mat_is_positive(m: &[Vec<BigInt>]) -> bool {
    m.iter().all(|row| row.iter().all(|e| e.is_positive()))
}

pub fn int_mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let p = b[0].len();
    let mut out = vec![vec![BigInt::zero(); p]; n];
    for i in 0..n {
        for k in 0..b.len() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..p {
                let t = &a[i][k] * &b[k][j];
                out[i][j] += t;
            }
        }
    }
    out
}

/// Primitivity of a nonnegative integer matrix: some power is positive.
pub fn int_mat_primitive(m: &[Vec<BigInt>]) -> bool {
    let n = m.len();
    if n == 0 {
        return false;
    }
    let bound = (n - 1) * (n - 1) + 1;
    let mut p = m.to_vec();
    for _ in 0..bound {
        if mat_is_positive(&p) {
            return true;
        }
        p = int_mat_mul(&p, m);
        // cap entry growth: clamp to 1 for reachability only
        for row in p.iter_mut() {
            for e in row.iter_mut() {
                if e.is_positive() {
                    *e = BigInt::one();
                }
            }
        }
    }
    mat_is_positive(&p)
}

/// Transpose.
pub fn int_transpose(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = m.len();
    let p = m[0].len();
    let mut out = vec![vec![BigInt::zero(); n]; p];
    for i in 0..n {
        for j in 0..p {
            out[j][i] = m[i][j].clone();
        }
    }
    out
}

pub fn q_to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // fall back through a scaled division for huge entries
        let num = x.numer();
        let den = x.denom();
        let scale = BigInt::from(1u64 << 52);
        let scaled = num * &scale / den;
        scaled.to_f64().unwrap_or(f64::NAN) / (1u64 << 52) as f64
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tribo_m() -> Vec<Vec<BigInt>> {
        vec![
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(0)],
        ]
    }

    #[test]
    fn tribonacci_char_poly() {
        // x^3 - x^2 - x - 1
        let cp = char_poly(&tribo_m());
        assert_eq!(
            cp,
            vec![BigInt::from(1), BigInt::from(-1), BigInt::from(-1), BigInt::from(-1)]
        );
    }

    #[test]
    fn bareiss_matches_gaussian() {
        let a = tribo_m();
        let b = vec![BigInt::from(2), BigInt::from(1), BigInt::from(1)];
        let x1 = bareiss_solve(&a, &b).unwrap();
        let aq = int_to_q_mat(&a);
        let bq: QVec = b.iter().map(|e| BigRational::from_integer(e.clone())).collect();
        let x2 = solve(&aq, &bq).unwrap();
        assert_eq!(x1, x2);
        // verify A x = b
        let back = mat_vec(&aq, &x1);
        assert_eq!(back, bq);
    }

    #[test]
    fn invert_round_trip() {
        let aq = int_to_q_mat(&tribo_m());
        let inv = invert(&aq).unwrap();
        assert_eq!(mat_mul(&aq, &inv), identity(3));
    }
}
