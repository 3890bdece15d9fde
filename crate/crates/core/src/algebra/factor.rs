//! Factorization over 𝔽_p: squarefree decomposition, distinct-degree
//! splitting and Cantor–Zassenhaus equal-degree splitting.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fp_poly::PolyFp;
use super::integer::factor_u64;
use crate::error::{Error, Result};

/// `unit · Π factor^mult` with monic irreducible factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub p: u64,
    pub unit: u64,
    pub factors: Vec<(PolyFp, u32)>,
}

impl Factorization {
    /// Product of all factors including the unit.
    pub fn expand(&self) -> PolyFp {
        self.factors
            .iter()
            .fold(PolyFp::constant(self.p, self.unit), |acc, (g, e)| acc.mul(&g.pow(*e)))
    }

    /// The factors other than `t`.
    pub fn nonzero_root_factors(&self) -> Vec<(PolyFp, u32)> {
        self.factors.iter().filter(|(g, _)| *g != PolyFp::x(self.p)).cloned().collect()
    }

    fn balanced_unit(&self) -> i64 {
        let u = self.unit as i64;
        let p = self.p as i64;
        if u > p / 2 {
            u - p
        } else {
            u
        }
    }
}

/// Rendering in the style `((t + 1)^2, 3)` or `((2) * (t^2 + t + 1), 5)`.
impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let show_unit = self.unit != 1 || self.factors.is_empty();
        if show_unit {
            parts.push(format!("({})", self.balanced_unit()));
        }
        let several = self.factors.len() + usize::from(show_unit) > 1;
        for (g, e) in &self.factors {
            let atomic = g.nonzero_terms() == 1 && g.is_monic();
            let body = if atomic || (!several && *e == 1) {
                g.to_string()
            } else {
                format!("({g})")
            };
            parts.push(if *e > 1 { format!("{body}^{e}") } else { body });
        }
        if self.factors.is_empty() {
            return write!(f, "({}, {})", self.balanced_unit(), self.p);
        }
        write!(f, "({}, {})", parts.join(" * "), self.p)
    }
}

fn factor_order(a: &PolyFp, b: &PolyFp) -> std::cmp::Ordering {
    a.deg()
        .cmp(&b.deg())
        .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

/// Complete factorization of a nonzero polynomial over 𝔽_p.
pub fn factor_modp(f: &PolyFp) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p = f.p();
    let unit = f.leading();
    let g = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p);
    let mut out: Vec<(PolyFp, u32)> = Vec::new();
    for (sq, mult) in squarefree(&g) {
        for (h, d) in distinct_degree(&sq) {
            let mut pieces = Vec::new();
            equal_degree(&h, d, &mut rng, &mut pieces);
            out.extend(pieces.into_iter().map(|q| (q, mult)));
        }
    }
    // merge equal factors coming from different squarefree parts
    out.sort_by(|a, b| factor_order(&a.0, &b.0));
    let mut merged: Vec<(PolyFp, u32)> = Vec::new();
    for (q, e) in out {
        match merged.last_mut() {
            Some((r, m)) if *r == q => *m += e,
            _ => merged.push((q, e)),
        }
    }
    Ok(Factorization { p, unit, factors: merged })
}

/// Squarefree decomposition of a monic polynomial: pairs `(part, multiplicity)`.
pub fn squarefree(f: &PolyFp) -> Vec<(PolyFp, u32)> {
    let p = f.p();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let c0 = f.gcd(&f.derivative());
    let mut w = f.div_rem(&c0).0;
    let mut c = c0;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_rem(&y).0;
        if !fac.is_one() {
            out.push((fac.monic(), i));
        }
        w = y;
        c = c.div_rem(&w).0;
        i += 1;
    }
    if !c.is_one() && c.degree().unwrap_or(0) > 0 {
        let root = c.monic().pth_root().expect("remaining cofactor is a p-th power");
        for (g, e) in squarefree(&root) {
            out.push((g, e * p as u32));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of
/// equal degree: pairs `(product, degree)`.
pub fn distinct_degree(f: &PolyFp) -> Vec<(PolyFp, usize)> {
    let p = f.p();
    let x = PolyFp::x(p);
    let mut out = Vec::new();
    let mut g = f.clone();
    let mut h = x.rem(&g);
    let mut d = 1;
    while g.deg() >= 2 * d {
        h = h.pow_mod(p as u128, &g);
        let part = g.gcd(&h.sub(&x));
        if !part.is_one() {
            g = g.div_rem(&part).0;
            h = h.rem(&g);
            out.push((part, d));
        }
        d += 1;
    }
    if g.deg() > 0 {
        let dg = g.deg();
        out.push((g, dg));
    }
    out
}

fn random_poly(p: u64, deg: usize, rng: &mut ChaCha8Rng) -> PolyFp {
    PolyFp::new(p, (0..deg).map(|_| rng.gen_range(0..p)).collect())
}

fn equal_degree(f: &PolyFp, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<PolyFp>) {
    let n = f.deg();
    if n == d {
        out.push(f.monic());
        return;
    }
    let p = f.p();
    loop {
        let a = random_poly(p, n, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // absolute trace to 𝔽₂ of the element a of 𝔽_{2^d}
            let mut acc = a.rem(f);
            let mut term = acc.clone();
            for _ in 1..d {
                term = term.mul(&term).rem(f);
                acc = acc.add(&term);
            }
            acc
        } else {
            let q = (p as u128).checked_pow(d as u32).expect("field size fits in 128 bits");
            a.pow_mod((q - 1) / 2, f).sub(&PolyFp::one(p))
        };
        let g = f.gcd(&b);
        if !g.is_one() && g.deg() < n {
            let h = f.div_rem(&g).0;
            equal_degree(&g, d, rng, out);
            equal_degree(&h, d, rng, out);
            return;
        }
    }
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &PolyFp) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let p = f.p();
    let f = f.monic();
    let x = PolyFp::x(p);
    let frob_pow = |k: usize| {
        let mut h = x.rem(&f);
        for _ in 0..k {
            h = h.pow_mod(p as u128, &f);
        }
        h
    };
    if !frob_pow(n).sub(&x).rem(&f).is_zero() {
        return false;
    }
    factor_u64(n as u64)
        .into_iter()
        .all(|(q, _)| f.gcd(&frob_pow(n / q as usize).sub(&x)).is_one())
}
