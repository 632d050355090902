//! Arithmetic in the number field Q(λ), λ the dominant eigenvalue of the
//! incidence matrix. Elements are polynomials in λ reduced modulo the
//! (irreducible) characteristic polynomial; since the modulus is irreducible
//! this is a field and every nonzero element is invertible.

use crate::error::{Error, Result};
use crate::linalg::q_to_f64;
use crate::poly::IPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::rc::Rc;

/// The field Q[x]/(minpoly), with a cached float embedding at x = λ.
#[derive(Clone, Debug)]
pub struct NumberField {
    /// Monic irreducible modulus, highest degree first.
    pub minpoly: IPoly,
    /// Float value of the distinguished root λ.
    pub lambda: f64,
}

impl NumberField {
    pub fn new(minpoly: IPoly, lambda: f64) -> Rc<Self> {
        Rc::new(NumberField { minpoly, lambda })
    }
    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }
}

/// Field element: coefficients of 1, λ, λ², …, lowest degree first.
#[derive(Clone)]
pub struct NfScalar {
    pub field: Rc<NumberField>,
    pub coeffs: Vec<BigRational>,
}

impl fmt::Debug for NfScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly_string())
    }
}

impl PartialEq for NfScalar {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}
impl Eq for NfScalar {}

impl NfScalar {
    pub fn zero(field: &Rc<NumberField>) -> Self {
        NfScalar { field: field.clone(), coeffs: vec![BigRational::zero(); field.degree()] }
    }
    pub fn one(field: &Rc<NumberField>) -> Self {
        let mut s = Self::zero(field);
        s.coeffs[0] = BigRational::one();
        s
    }
    pub fn lambda(field: &Rc<NumberField>) -> Self {
        let mut s = Self::zero(field);
        if field.degree() > 1 {
            s.coeffs[1] = BigRational::one();
        } else {
            // degree-1 field: λ is rational, read it off the modulus
            s.coeffs[0] = -BigRational::from_integer(field.minpoly[1].clone());
        }
        s
    }
    pub fn from_rational(field: &Rc<NumberField>, q: BigRational) -> Self {
        let mut s = Self::zero(field);
        s.coeffs[0] = q;
        s
    }
    pub fn from_int(field: &Rc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs =
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        NfScalar { field: self.field.clone(), coeffs }
    }
    pub fn sub(&self, other: &Self) -> Self {
        let coeffs =
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        NfScalar { field: self.field.clone(), coeffs }
    }
    pub fn neg(&self) -> Self {
        NfScalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
    pub fn scale(&self, q: &BigRational) -> Self {
        NfScalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.field.degree();
        let mut raw = vec![BigRational::zero(); 2 * d];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                raw[i + j] += a * b;
            }
        }
        // reduce modulo minpoly (monic): λ^d = -(c_1 λ^{d-1} + ... + c_d)
        for k in (d..2 * d).rev() {
            let coef = raw[k].clone();
            if coef.is_zero() {
                continue;
            }
            raw[k] = BigRational::zero();
            for i in 1..=d {
                // minpoly = [1, c_1, ..., c_d] highest first
                let c = BigRational::from_integer(self.field.minpoly[i].clone());
                raw[k - i] -= &coef * c;
            }
        }
        raw.truncate(d);
        NfScalar { field: self.field.clone(), coeffs: raw }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x].
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Invariant("division by zero in number field".into()));
        }
        let d = self.field.degree();
        // work lowest-degree-first
        let modulus: Vec<BigRational> = self
            .field
            .minpoly
            .iter()
            .rev()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let a = self.coeffs.clone();
        let (g, _, inv) = ext_gcd(&modulus, &a);
        // g must be a nonzero constant
        let gdeg = poly_deg(&g);
        if gdeg != 0 {
            return Err(Error::Invariant("modulus not coprime with element".into()));
        }
        let ginv = g[0].recip();
        let mut coeffs: Vec<BigRational> = inv.iter().map(|c| c * &ginv).collect();
        coeffs.resize(d, BigRational::zero());
        // reduce mod minpoly if degree crept up
        let mut s = NfScalar { field: self.field.clone(), coeffs: vec![BigRational::zero(); d] };
        for (i, c) in coeffs.iter().enumerate().take(d) {
            s.coeffs[i] = c.clone();
        }
        Ok(s)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn to_f64(&self) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * self.field.lambda + q_to_f64(c);
        }
        acc
    }

    /// Rendering like `1/2 + 3/2*L - L^2` with `L` standing for λ.
    pub fn poly_string(&self) -> String {
        let mut terms: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = match i {
                0 => format!("{c}"),
                1 => {
                    if c.is_one() {
                        "L".into()
                    } else {
                        format!("{c}*L")
                    }
                }
                _ => {
                    if c.is_one() {
                        format!("L^{i}")
                    } else {
                        format!("{c}*L^{i}")
                    }
                }
            };
            terms.push(if terms.is_empty() { body } else { format!("+ {body}") });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" ").replace("+ -", "- ")
        }
    }
}

fn poly_deg(p: &[BigRational]) -> usize {
    for (i, c) in p.iter().enumerate().rev() {
        if !c.is_zero() {
            return i;
        }
    }
    0
}

fn poly_is_zero(p: &[BigRational]) -> bool {
    p.iter().all(|c| c.is_zero())
}

/// `ext_gcd(a, b) = (g, s, t)` with `s·a + t·b = g`, lowest-degree-first.
fn ext_gcd(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    let mut s0 = vec![BigRational::one()];
    let mut s1 = vec![BigRational::zero()];
    let mut t0 = vec![BigRational::zero()];
    let mut t1 = vec![BigRational::one()];
    while !poly_is_zero(&r1) {
        let (q, r) = poly_divmod(&r0, &r1);
        let new_s = poly_sub(&s0, &poly_mul_q(&q, &s1));
        let new_t = poly_sub(&t0, &poly_mul_q(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = new_s;
        t0 = t1;
        t1 = new_t;
    }
    (r0, s0, t0)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = poly_deg(b);
    let mut rem = a.to_vec();
    let mut quot = vec![BigRational::zero(); a.len().max(1)];
    loop {
        let dr = poly_deg(&rem);
        if poly_is_zero(&rem) || dr < db {
            break;
        }
        let c = &rem[dr] / &b[db];
        let shift = dr - db;
        quot[shift] += c.clone();
        for i in 0..=db {
            let t = &c * &b[i];
            rem[i + shift] -= t;
        }
    }
    (quot, rem)
}

fn poly_mul_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::dominant_real_root;

    fn tribo_field() -> Rc<NumberField> {
        let p: IPoly = [1i64, -1, -1, -1].iter().map(|&x| BigInt::from(x)).collect();
        let l = dominant_real_root(&p);
        NumberField::new(p, l)
    }

    #[test]
    fn field_arithmetic() {
        let f = tribo_field();
        let l = NfScalar::lambda(&f);
        // λ^3 = λ^2 + λ + 1
        let l3 = l.mul(&l).mul(&l);
        let rhs = l.mul(&l).add(&l).add(&NfScalar::one(&f));
        assert_eq!(l3, rhs);
        let inv = l.inverse().unwrap();
        assert_eq!(l.mul(&inv), NfScalar::one(&f));
        assert!((inv.to_f64() - 1.0 / f.lambda).abs() < 1e-12);
        // 1/(1-λ) * (1-λ) = 1
        let one_minus = NfScalar::one(&f).sub(&l);
        assert_eq!(one_minus.mul(&one_minus.inverse().unwrap()), NfScalar::one(&f));
    }
}
