//! Resultants over ℤ by the subresultant pseudo-remainder sequence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::laurent::LaurentPoly;
use crate::error::{Error, Result};

type ZPoly = Vec<BigInt>;

fn trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn deg(a: &ZPoly) -> usize {
    a.len() - 1
}

fn content(a: &ZPoly) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn pseudo_rem(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let mut r = a.clone();
    let lb = b.last().unwrap().clone();
    let db = deg(b);
    let mut e = deg(a) - db + 1;
    while r.len() > db && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = deg(&r) - db;
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &lr * bc;
        }
        r = trim(r);
        e -= 1;
    }
    let f = lb.pow(e as u32);
    r.into_iter().map(|c| c * &f).collect()
}

/// Resultant of two nonzero polynomials given as ascending coefficient lists.
pub fn resultant_coeffs(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    assert!(!a.is_empty() && !b.is_empty(), "resultant of zero polynomial");
    if deg(&a) == 0 {
        return a[0].pow(deg(&b) as u32);
    }
    if deg(&b) == 0 {
        return b[0].pow(deg(&a) as u32);
    }
    let ca = content(&a);
    let cb = content(&b);
    let t = ca.pow(deg(&b) as u32) * cb.pow(deg(&a) as u32);
    a = a.into_iter().map(|c| c / &ca).collect();
    b = b.into_iter().map(|c| c / &cb).collect();
    let mut s = BigInt::one();
    if deg(&a) < deg(&b) {
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            s = -s;
        }
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = deg(&a) - deg(&b);
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            s = -s;
        }
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            return BigInt::zero();
        }
        let div = &g * h.pow(delta as u32);
        a = b;
        b = r.into_iter().map(|c| c / &div).collect();
        g = a.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta as u32) / h.pow(delta as u32 - 1)
        };
        if deg(&b) == 0 {
            let da = deg(&a) as u32;
            let lb = b[0].clone();
            let hh = if da == 0 { h.clone() } else { lb.pow(da) / h.pow(da - 1) };
            return s * t * hh;
        }
    }
}

/// `Res(f, g)` for polynomials with nonnegative exponents; Laurent inputs are
/// first multiplied by the power of `t` that makes the lowest exponent 0.
pub fn resultant(f: &LaurentPoly, g: &LaurentPoly) -> Result<BigInt> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(resultant_coeffs(&as_poly(f), &as_poly(g)))
}

fn as_poly(f: &LaurentPoly) -> ZPoly {
    let f = if f.low() < 0 { f.shift(-f.low()) } else { f.clone() };
    let mut v = vec![BigInt::zero(); f.low() as usize];
    v.extend_from_slice(f.coeffs());
    v
}

/// Determinant of the Sylvester matrix, by Bareiss elimination over ℤ.
pub fn sylvester_resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let a = trim(a.to_vec());
    let b = trim(b.to_vec());
    let (m, n) = (deg(&a), deg(&b));
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size {
        if mat[k][k].is_zero() {
            let Some(r) = (k + 1..size).find(|&r| !mat[r][k].is_zero()) else {
                return BigInt::zero();
            };
            mat.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                mat[i][j] = v / &prev;
            }
            mat[i][k] = BigInt::zero();
        }
        prev = mat[k][k].clone();
    }
    sign * &mat[size - 1][size - 1]
}

/// `|Res(f, g)|`.
pub fn abs_resultant(f: &LaurentPoly, g: &LaurentPoly) -> Result<BigInt> {
    resultant(f, g).map(|r| r.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(c)
    }

    fn big(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cases() {
        assert_eq!(resultant(&lp(&[-1, 1]), &lp(&[-2, 1])).unwrap(), BigInt::from(-1));
        assert_eq!(resultant(&lp(&[1, -3, 1]), &lp(&[-1, 0, 0, 1])).unwrap().abs(), BigInt::from(16));
        assert_eq!(resultant(&lp(&[3, 1, 4]), &lp(&[1])).unwrap(), BigInt::one());
        assert!(resultant(&lp(&[]), &lp(&[1])).is_err());
    }

    #[test]
    fn figure_eight_cube_roots_numeric() {
        // |Δ(1) Δ(ω) Δ(ω̄)| by complex evaluation
        let delta = |re: f64, im: f64| {
            let (r2, i2) = (re * re - im * im, 2.0 * re * im);
            (r2 - 3.0 * re + 1.0, i2 - 3.0 * im)
        };
        let mut prod = (1.0f64, 0.0f64);
        for k in 0..3 {
            let th = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            let (a, b) = delta(th.cos(), th.sin());
            prod = (prod.0 * a - prod.1 * b, prod.0 * b + prod.1 * a);
        }
        assert!((prod.0.abs() - 16.0).abs() < 1e-9 && prod.1.abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn matches_sylvester(a in proptest::collection::vec(-5i64..6, 1..6), b in proptest::collection::vec(-5i64..6, 1..6)) {
            let (a, b) = (big(&a), big(&b));
            prop_assume!(!trim(a.clone()).is_empty() && !trim(b.clone()).is_empty());
            prop_assert_eq!(resultant_coeffs(&a, &b), sylvester_resultant(&a, &b));
        }

        #[test]
        fn antisymmetry_and_multiplicativity(
            f in proptest::collection::vec(-4i64..5, 2..5),
            g in proptest::collection::vec(-4i64..5, 2..5),
            h in proptest::collection::vec(-4i64..5, 2..5),
        ) {
            let (f, g, h) = (lp(&f), lp(&g), lp(&h));
            prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
            prop_assume!(f.low() == 0 && g.low() == 0 && h.low() == 0);
            let df = f.high() as u32;
            let dg = g.high() as u32;
            let sign = if (df * dg) % 2 == 1 { -BigInt::one() } else { BigInt::one() };
            prop_assert_eq!(resultant(&f, &g).unwrap(), sign * resultant(&g, &f).unwrap());
            prop_assert_eq!(
                resultant(&f, &(&g * &h)).unwrap(),
                resultant(&f, &g).unwrap() * resultant(&f, &h).unwrap()
            );
        }
    }
}
