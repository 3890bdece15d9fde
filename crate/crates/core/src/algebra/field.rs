//! Finite fields 𝔽_{p^d} = 𝔽_p[t]/(g).

use serde::{Deserialize, Serialize};

use super::factor::is_irreducible;
use super::fp_poly::{add_mod, inv_mod, mul_mod, sub_mod, PolyFp};
use super::integer::{factor_u64, is_prime};
use crate::error::{Error, Result};

/// Element of 𝔽_{p^d} as coordinates in the basis `1, α, …, α^(d-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElem {
    pub coords: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteField {
    p: u64,
    modulus: PolyFp,
}

/// Builds 𝔽_p[t]/(g), certifying that `p` is prime and `g` irreducible.
pub fn make_field(p: u64, g: &PolyFp) -> Result<FiniteField> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if g.p() != p || !is_irreducible(g) {
        return Err(Error::Reducible(p));
    }
    Ok(FiniteField { p, modulus: g.monic() })
}

impl FiniteField {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    pub fn modulus(&self) -> &PolyFp {
        &self.modulus
    }

    /// Number of elements `p^d`.
    pub fn order(&self) -> u64 {
        self.p.pow(self.degree() as u32)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { coords: vec![0; self.degree()] }
    }

    pub fn one(&self) -> FieldElem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, a: u64) -> FieldElem {
        let mut e = self.zero();
        e.coords[0] = a % self.p;
        e
    }

    /// The class of `t`.
    pub fn alpha(&self) -> FieldElem {
        self.from_poly(&PolyFp::x(self.p))
    }

    pub fn from_poly(&self, f: &PolyFp) -> FieldElem {
        let r = f.rem(&self.modulus);
        FieldElem { coords: (0..self.degree()).map(|i| r.coeff(i)).collect() }
    }

    pub fn to_poly(&self, e: &FieldElem) -> PolyFp {
        PolyFp::new(self.p, e.coords.clone())
    }

    pub fn is_zero(&self, e: &FieldElem) -> bool {
        e.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem { coords: a.coords.iter().zip(&b.coords).map(|(&x, &y)| add_mod(x, y, self.p)).collect() }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem { coords: a.coords.iter().zip(&b.coords).map(|(&x, &y)| sub_mod(x, y, self.p)).collect() }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        self.sub(&self.zero(), a)
    }

    pub fn scale(&self, a: &FieldElem, c: u64) -> FieldElem {
        FieldElem { coords: a.coords.iter().map(|&x| mul_mod(x, c % self.p, self.p)).collect() }
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.from_poly(&self.to_poly(a).mul(&self.to_poly(b)))
    }

    pub fn inv(&self, a: &FieldElem) -> Option<FieldElem> {
        if self.is_zero(a) {
            return None;
        }
        if self.degree() == 1 {
            return Some(self.from_u64(inv_mod(a.coords[0], self.p)));
        }
        let (g, s, _) = self.to_poly(a).ext_gcd(&self.modulus);
        debug_assert!(g.is_one());
        Some(self.from_poly(&s))
    }

    pub fn pow(&self, a: &FieldElem, mut e: u64) -> FieldElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `α^k` for any integer `k` (α must be nonzero when `k < 0`).
    pub fn pow_signed(&self, a: &FieldElem, k: i64) -> FieldElem {
        if k >= 0 {
            self.pow(a, k as u64)
        } else {
            let inv = self.inv(a).expect("negative power of zero");
            self.pow(&inv, k.unsigned_abs())
        }
    }

    /// Exact multiplicative order, using the factorization of `p^d - 1`.
    pub fn mult_order(&self, a: &FieldElem) -> Result<u64> {
        if self.is_zero(a) {
            return Err(Error::InvalidParameters("order of zero".into()));
        }
        let group = self.order() - 1;
        let mut n = group;
        for (q, _) in factor_u64(group) {
            while n.is_multiple_of(q) && self.pow(a, n / q) == self.one() {
                n /= q;
            }
        }
        Ok(n)
    }

    /// Base-`p` encoding of an element as an integer in `[0, p^d)`.
    pub fn index_of(&self, a: &FieldElem) -> usize {
        a.coords.iter().rev().fold(0usize, |acc, &c| acc * self.p as usize + c as usize)
    }

    pub fn elem_at(&self, mut idx: usize) -> FieldElem {
        let p = self.p as usize;
        let coords = (0..self.degree())
            .map(|_| {
                let c = idx % p;
                idx /= p;
                c as u64
            })
            .collect();
        FieldElem { coords }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order() as usize).map(move |i| self.elem_at(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_orders() {
        let f = make_field(11, &PolyFp::from_i64(11, &[0, 1])).unwrap();
        assert_eq!(f.mult_order(&f.from_u64(5)).unwrap(), 5);
        // oracle: smallest k with 5^k = 1 mod 11
        let direct = (1..=10).find(|&k| crate::algebra::fp_poly::pow_mod(5, k, 11) == 1).unwrap();
        assert_eq!(direct, 5);
    }

    #[test]
    fn f4_and_f25() {
        let f4 = make_field(2, &PolyFp::from_i64(2, &[1, 1, 1])).unwrap();
        assert_eq!(f4.mult_order(&f4.alpha()).unwrap(), 3);
        // t^2 - t + 1 stays irreducible mod 5; its roots are primitive 6th roots of unity
        let f25 = make_field(5, &PolyFp::from_i64(5, &[1, -1, 1])).unwrap();
        let a = f25.alpha();
        assert_eq!(f25.mult_order(&a).unwrap(), 6);
        let direct = (1..=24).find(|&k| f25.pow(&a, k) == f25.one()).unwrap();
        assert_eq!(direct, 6);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(make_field(4, &PolyFp::from_i64(4, &[0, 1])), Err(Error::NotPrime(4)));
        assert_eq!(make_field(5, &PolyFp::from_i64(5, &[1, 2, 1])), Err(Error::Reducible(5)));
    }

    #[test]
    fn inverses_and_indices() {
        let f = make_field(3, &PolyFp::from_i64(3, &[1, 0, 1])).unwrap();
        for (i, e) in f.elements().enumerate() {
            assert_eq!(f.index_of(&e), i);
            if let Some(inv) = f.inv(&e) {
                assert_eq!(f.mul(&e, &inv), f.one());
            }
        }
        let a = f.alpha();
        assert_eq!(f.mul(&f.pow_signed(&a, -3), &f.pow(&a, 3)), f.one());
    }
}
