//! Dense univariate polynomials over a prime field 𝔽_p.

use std::fmt;

use serde::{Deserialize, Serialize};

pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + p as u128 - b as u128) % p as u128) as u64
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverse of zero mod {p}");
    pow_mod(a, p - 2, p)
}

/// Ascending coefficients in `[0, p)`, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolyFp {
    p: u64,
    c: Vec<u64>,
}

impl PolyFp {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut f = PolyFp { p, c: coeffs.into_iter().map(|a| a % p).collect() };
        f.trim();
        f
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        let pi = p as i64;
        Self::new(p, coeffs.iter().map(|&a| a.rem_euclid(pi) as u64).collect())
    }

    pub fn zero(p: u64) -> Self {
        PolyFp { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::constant(p, 1)
    }

    pub fn constant(p: u64, a: u64) -> Self {
        Self::new(p, vec![a])
    }

    /// The indeterminate `t`.
    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.c.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn leading(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn nonzero_terms(&self) -> usize {
        self.c.iter().filter(|&&a| a != 0).count()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.p))
    }

    pub fn scale(&self, a: u64) -> Self {
        Self::new(self.p, self.c.iter().map(|&x| mul_mod(x, a, self.p)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new(self.p, (0..n).map(|i| add_mod(self.coeff(i), o.coeff(i), self.p)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new(self.p, (0..n).map(|i| sub_mod(self.coeff(i), o.coeff(i), self.p)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::zero(self.p).sub(self)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p;
            }
        }
        Self::new(self.p, acc.into_iter().map(|a| a as u64).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        PolyFp { p: self.p, c }
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let p = self.p;
        if self.c.len() < d.c.len() {
            return (Self::zero(p), self.clone());
        }
        let inv = inv_mod(d.leading(), p);
        let mut r = self.c.clone();
        let dl = d.c.len();
        let mut q = vec![0u64; r.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let top = r[i + dl - 1];
            if top == 0 {
                continue;
            }
            let qi = mul_mod(top, inv, p);
            q[i] = qi;
            for (j, &dc) in d.c.iter().enumerate() {
                r[i + j] = sub_mod(r[i + j], mul_mod(qi, dc, p), p);
            }
        }
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, u)` with `s·self + u·o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::zero(p));
        let (mut u0, mut u1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let u2 = u0.sub(&q.mul(&u1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            u0 = std::mem::replace(&mut u1, u2);
        }
        if r0.is_zero() {
            return (r0, s0, u0);
        }
        let inv = inv_mod(r0.leading(), p);
        (r0.scale(inv), s0.scale(inv), u0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.p,
            self.c.iter().enumerate().skip(1).map(|(i, &a)| mul_mod(a, i as u64 % self.p, self.p)).collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c.iter().rev().fold(0, |acc, &a| add_mod(mul_mod(acc, x, self.p), a, self.p))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.p), |acc, _| acc.mul(self))
    }

    /// If every exponent is divisible by `p`, the `p`-th root (coefficients are
    /// fixed by Frobenius on 𝔽_p).
    pub fn pth_root(&self) -> Option<Self> {
        let p = self.p as usize;
        if self.c.iter().enumerate().any(|(i, &a)| a != 0 && i % p != 0) {
            return None;
        }
        Some(Self::new(self.p, self.c.iter().step_by(p).copied().collect()))
    }
}

/// Coefficients shown as residues in `[0, p)`, highest degree first.
impl fmt::Display for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{a}*t")?,
                (_, 1) => write!(f, "t^{k}")?,
                _ => write!(f, "{a}*t^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let f = PolyFp::from_i64(5, &[1, 2, 1]);
        let g = PolyFp::from_i64(5, &[1, 1]);
        let (q, r) = f.div_rem(&g);
        assert_eq!(q, g);
        assert!(r.is_zero());
        assert_eq!(f.gcd(&g.mul(&PolyFp::from_i64(5, &[2, 1]))), g);
        let (d, s, u) = f.ext_gcd(&PolyFp::from_i64(5, &[2, 1]));
        assert!(d.is_one());
        assert!(s.mul(&f).add(&u.mul(&PolyFp::from_i64(5, &[2, 1]))).is_one());
    }

    #[test]
    fn display() {
        assert_eq!(PolyFp::from_i64(5, &[1, 2, 0, 2, 1]).to_string(), "t^4 + 2*t^3 + 2*t + 1");
        assert_eq!(PolyFp::from_i64(3, &[-1, 1]).to_string(), "t + 2");
    }

    #[test]
    fn pth_roots() {
        let f = PolyFp::from_i64(3, &[1, 0, 0, 2]);
        assert_eq!(f.pth_root(), Some(PolyFp::from_i64(3, &[1, 2])));
        assert_eq!(PolyFp::x(3).pth_root(), None);
        assert!(f.derivative().is_zero());
    }
}
