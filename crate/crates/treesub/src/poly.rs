//! Integer and rational polynomial helpers: exact division, irreducibility
//! over Q (Kronecker's interpolation method, adequate for the small degrees
//! of incidence matrices), and complex root finding (Aberth iteration) for
//! locating Galois conjugates.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficients highest-degree first, e.g. `x^3 - x^2 - x - 1` is `[1,-1,-1,-1]`.
pub type IPoly = Vec<BigInt>;

pub fn poly_degree(p: &IPoly) -> usize {
    p.len().saturating_sub(1)
}

pub fn poly_eval_int(p: &IPoly, x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p {
        acc = acc * x + c;
    }
    acc
}

pub fn poly_eval_f64(p: &IPoly, x: f64) -> f64 {
    let mut acc = 0.0;
    for c in p {
        acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
    }
    acc
}

fn poly_eval_c(p: &[(f64, f64)], z: (f64, f64)) -> (f64, f64) {
    let mut acc = (0.0, 0.0);
    for &c in p {
        let re = acc.0 * z.0 - acc.1 * z.1 + c.0;
        let im = acc.0 * z.1 + acc.1 * z.0 + c.1;
        acc = (re, im);
    }
    acc
}

/// Exact division of integer polynomials. Returns the quotient when the
/// remainder is zero and the division stays integral.
pub fn poly_div_exact(num: &IPoly, den: &IPoly) -> Option<IPoly> {
    if den.is_empty() || den[0].is_zero() {
        return None;
    }
    let mut rem: Vec<BigRational> =
        num.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let denq: Vec<BigRational> =
        den.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    if rem.len() < denq.len() {
        return None;
    }
    let qlen = rem.len() - denq.len() + 1;
    let mut quot = vec![BigRational::zero(); qlen];
    for i in 0..qlen {
        let coeff = &rem[i] / &denq[0];
        quot[i] = coeff.clone();
        for (j, d) in denq.iter().enumerate() {
            let t = &coeff * d;
            rem[i + j] -= t;
        }
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    let mut out = Vec::with_capacity(qlen);
    for c in quot {
        if !c.is_integer() {
            return None;
        }
        out.push(c.to_integer());
    }
    Some(out)
}

pub fn poly_mul(a: &IPoly, b: &IPoly) -> IPoly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    loop {
        if &d * &d > n {
            break;
        }
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// Irreducibility over Q of a monic integer polynomial, by Kronecker's
/// method: a degree-k factor is determined by its values at k+1 integer
/// points, and each value must divide the corresponding value of `p`.
/// Practical for degree ≤ 8, which covers incidence matrices here.
pub fn is_irreducible(p: &IPoly) -> Result<bool> {
    let deg = poly_degree(p);
    if deg == 0 {
        return Ok(false);
    }
    if deg == 1 {
        return Ok(true);
    }
    if p[0] != BigInt::one() {
        return Err(Error::Invariant("irreducibility test expects a monic polynomial".into()));
    }
    if p.last().unwrap().is_zero() {
        return Ok(false); // divisible by x
    }
    if deg > 8 {
        return Err(Error::CapExceeded(format!(
            "irreducibility test capped at degree 8, got {deg}"
        )));
    }
    for k in 1..=deg / 2 {
        if kronecker_has_factor(p, k)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn kronecker_has_factor(p: &IPoly, k: usize) -> Result<bool> {
    // sample points 0, 1, -1, 2, -2, ...
    let mut points: Vec<BigInt> = Vec::new();
    let mut t = 0i64;
    while points.len() < k + 1 {
        points.push(BigInt::from(t));
        if t > 0 {
            t = -t;
        } else {
            t = -t + 1;
        }
    }
    let values: Vec<BigInt> = points.iter().map(|x| poly_eval_int(p, x)).collect();
    if values.iter().any(|v| v.is_zero()) {
        // integer root => linear factor
        return Ok(true);
    }
    let divisor_lists: Vec<Vec<BigInt>> = values.iter().map(divisors).collect();
    let mut combo = vec![0usize; k + 1];
    let mut signs = vec![1i8; k + 1];
    loop {
        // candidate values d_i (with signs) at the sample points
        let cand: Vec<BigRational> = (0..=k)
            .map(|i| {
                let v = &divisor_lists[i][combo[i]];
                let v = if signs[i] > 0 { v.clone() } else { -v };
                BigRational::from_integer(v)
            })
            .collect();
        if let Some(f) = interpolate(&points, &cand, k) {
            if f[0] == BigInt::one() && poly_degree(&f) == k && poly_div_exact(p, &f).is_some() {
                return Ok(true);
            }
        }
        // advance sign/divisor odometer
        let mut i = 0;
        loop {
            if i > k {
                return Ok(false);
            }
            if signs[i] > 0 {
                signs[i] = -1;
                break;
            }
            signs[i] = 1;
            if combo[i] + 1 < divisor_lists[i].len() {
                combo[i] += 1;
                break;
            }
            combo[i] = 0;
            i += 1;
        }
    }
}

/// Lagrange interpolation; returns integer coefficients (highest first) when
/// the interpolant is an integer polynomial of degree ≤ k.
fn interpolate(points: &[BigInt], values: &[BigRational], k: usize) -> Option<IPoly> {
    let n = points.len();
    let mut acc = vec![BigRational::zero(); n];
    for i in 0..n {
        // basis polynomial for point i
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, pt) in points.iter().enumerate() {
            if j == i {
                continue;
            }
            // multiply by (x - points[j])
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d] += c;
                next[d + 1] -= c * BigRational::from_integer(pt.clone());
            }
            basis = next;
            denom *= BigRational::from_integer(&points[i] - pt);
        }
        let w = &values[i] / denom;
        let offset = n - basis.len();
        for (d, c) in basis.iter().enumerate() {
            acc[offset + d] += c * &w;
        }
    }
    // trim leading zeros down to degree k
    while acc.len() > k + 1 {
        if !acc[0].is_zero() {
            return None;
        }
        acc.remove(0);
    }
    let mut out = Vec::with_capacity(acc.len());
    for c in acc {
        if !c.is_integer() {
            return None;
        }
        out.push(c.to_integer());
    }
    Some(out)
}

/// All complex roots by Aberth–Ehrlich iteration with Newton polish.
pub fn complex_roots(p: &IPoly) -> Vec<(f64, f64)> {
    let deg = poly_degree(p);
    if deg == 0 {
        return vec![];
    }
    let pc: Vec<(f64, f64)> = p.iter().map(|c| (c.to_f64().unwrap_or(0.0), 0.0)).collect();
    // derivative
    let mut dp: Vec<(f64, f64)> = Vec::with_capacity(deg);
    for (i, &c) in pc.iter().take(deg).enumerate() {
        let k = (deg - i) as f64;
        dp.push((c.0 * k, c.1 * k));
    }
    // initial guesses on a circle of Cauchy-bound radius
    let lead = pc[0].0.abs().max(1e-12);
    let radius = 1.0
        + pc.iter().skip(1).map(|c| (c.0 * c.0 + c.1 * c.1).sqrt()).fold(0.0, f64::max) / lead;
    let mut z: Vec<(f64, f64)> = (0..deg)
        .map(|i| {
            let ang = 2.0 * std::f64::consts::PI * (i as f64 + 0.35) / deg as f64;
            (radius * 0.7 * ang.cos(), radius * 0.7 * ang.sin())
        })
        .collect();
    for _ in 0..300 {
        let mut max_step = 0.0f64;
        let snapshot = z.clone();
        for i in 0..deg {
            let zi = snapshot[i];
            let f = poly_eval_c(&pc, zi);
            let df = poly_eval_c(&dp, zi);
            let denom_norm = df.0 * df.0 + df.1 * df.1;
            if denom_norm < 1e-300 {
                continue;
            }
            // Newton ratio f/f'
            let ratio = (
                (f.0 * df.0 + f.1 * df.1) / denom_norm,
                (f.1 * df.0 - f.0 * df.1) / denom_norm,
            );
            // Aberth correction sum 1/(zi - zj)
            let mut s = (0.0, 0.0);
            for (j, &zj) in snapshot.iter().enumerate() {
                if j == i {
                    continue;
                }
                let d = (zi.0 - zj.0, zi.1 - zj.1);
                let n2 = d.0 * d.0 + d.1 * d.1;
                if n2 < 1e-300 {
                    continue;
                }
                s.0 += d.0 / n2;
                s.1 += -d.1 / n2;
            }
            let denom = (1.0 - (ratio.0 * s.0 - ratio.1 * s.1), -(ratio.0 * s.1 + ratio.1 * s.0));
            let dn = denom.0 * denom.0 + denom.1 * denom.1;
            if dn < 1e-300 {
                continue;
            }
            let step = (
                (ratio.0 * denom.0 + ratio.1 * denom.1) / dn,
                (ratio.1 * denom.0 - ratio.0 * denom.1) / dn,
            );
            z[i] = (zi.0 - step.0, zi.1 - step.1);
            max_step = max_step.max((step.0 * step.0 + step.1 * step.1).sqrt());
        }
        if max_step < 1e-14 {
            break;
        }
    }
    z
}

/// Largest real root, polished by bisection+Newton on the exact polynomial.
pub fn dominant_real_root(p: &IPoly) -> f64 {
    let roots = complex_roots(p);
    let mut best = f64::NAN;
    for (re, im) in roots {
        if im.abs() < 1e-6 && (best.is_nan() || re > best) {
            best = re;
        }
    }
    if best.is_nan() {
        return best;
    }
    // Newton polish with f64 evaluation of exact coefficients
    let mut x = best;
    for _ in 0..60 {
        let fx = poly_eval_f64(p, x);
        let h = 1e-9 * x.abs().max(1.0);
        let dfx = (poly_eval_f64(p, x + h) - poly_eval_f64(p, x - h)) / (2.0 * h);
        if dfx.abs() < 1e-300 {
            break;
        }
        let nx = x - fx / dfx;
        if (nx - x).abs() < 1e-15 * x.abs().max(1.0) {
            x = nx;
            break;
        }
        x = nx;
    }
    x
}

pub fn poly_string(p: &IPoly, var: &str) -> String {
    let deg = poly_degree(p);
    let mut terms: Vec<String> = Vec::new();
    for (i, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let d = deg - i;
        let abs = c.abs();
        let body = match d {
            0 => format!("{abs}"),
            1 => {
                if abs.is_one() {
                    var.to_string()
                } else {
                    format!("{abs}*{var}")
                }
            }
            _ => {
                if abs.is_one() {
                    format!("{var}^{d}")
                } else {
                    format!("{abs}*{var}^{d}")
                }
            }
        };
        if terms.is_empty() {
            terms.push(if c.is_negative() { format!("-{body}") } else { body });
        } else {
            terms.push(if c.is_negative() { format!("- {body}") } else { format!("+ {body}") });
        }
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ipoly(v: &[i64]) -> IPoly {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn division_and_factors() {
        // x^6 - x^4 - 4x^3 - x^2 + 1 = (x^3-x^2-x-1)(x^3+x^2+x-1)
        let prod = poly_mul(&ipoly(&[1, -1, -1, -1]), &ipoly(&[1, 1, 1, -1]));
        assert_eq!(prod, ipoly(&[1, 0, -1, -4, -1, 0, 1]));
        let q = poly_div_exact(&prod, &ipoly(&[1, -1, -1, -1])).unwrap();
        assert_eq!(q, ipoly(&[1, 1, 1, -1]));
        assert!(poly_div_exact(&prod, &ipoly(&[1, 0, 1])).is_none());
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&ipoly(&[1, -1, -1, -1])).unwrap()); // tribonacci
        assert!(is_irreducible(&ipoly(&[1, -1, -1])).unwrap()); // fibonacci
        assert!(!is_irreducible(&ipoly(&[1, -2, 0])).unwrap()); // x^2-2x = x(x-2)
        assert!(!is_irreducible(&ipoly(&[1, 0, -1, -4, -1, 0, 1])).unwrap());
        assert!(!is_irreducible(&ipoly(&[1, 0, -2, 0, 1])).unwrap()); // (x^2-1)^2... actually x^4-2x^2+1
    }

    #[test]
    fn roots_of_tribonacci() {
        let p = ipoly(&[1, -1, -1, -1]);
        let lambda = dominant_real_root(&p);
        assert!((lambda - 1.839286755214161).abs() < 1e-9);
        let roots = complex_roots(&p);
        let mut conj: Vec<f64> = roots
            .iter()
            .map(|(re, im)| (re * re + im * im).sqrt())
            .filter(|m| (m - lambda).abs() > 1e-6)
            .collect();
        conj.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(conj.len(), 2);
        assert!(conj.iter().all(|m| *m < 1.0 - 1e-9));
    }
}
