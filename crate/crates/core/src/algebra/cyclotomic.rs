//! The cyclotomic field ℚ(ζ_p) = ℚ[x]/(Φ_p(x)) for an odd or even prime p.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coordinates in the basis `1, ζ, …, ζ^(p-2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicElem {
    p: u64,
    coords: Vec<BigRational>,
}

impl CyclotomicElem {
    pub fn zero(p: u64) -> Self {
        CyclotomicElem { p, coords: vec![BigRational::zero(); (p - 1) as usize] }
    }

    pub fn from_int(p: u64, a: i64) -> Self {
        let mut e = Self::zero(p);
        e.coords[0] = BigRational::from_integer(BigInt::from(a));
        e
    }

    pub fn one(p: u64) -> Self {
        Self::from_int(p, 1)
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(p: u64, k: i64) -> Self {
        let mut full = vec![BigRational::zero(); p as usize];
        full[k.rem_euclid(p as i64) as usize] = BigRational::one();
        Self::from_cyclic(p, full)
    }

    /// `Σ counts[k] ζ^k`, with `counts` indexed by exponents `0..p`.
    pub fn from_counts(p: u64, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), p as usize);
        let full = counts.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        Self::from_cyclic(p, full)
    }

    /// Reduce a vector modulo `x^p - 1` further modulo Φ_p, using
    /// `ζ^(p-1) = -(1 + ζ + … + ζ^(p-2))`.
    fn from_cyclic(p: u64, mut full: Vec<BigRational>) -> Self {
        let top = full.pop().expect("length p");
        if !top.is_zero() {
            for c in full.iter_mut() {
                *c -= &top;
            }
        }
        CyclotomicElem { p, coords: full }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p);
        CyclotomicElem { p: self.p, coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p);
        CyclotomicElem { p: self.p, coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Self {
        CyclotomicElem { p: self.p, coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p);
        let p = self.p as usize;
        let mut full = vec![BigRational::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if !b.is_zero() {
                    full[(i + j) % p] += a * b;
                }
            }
        }
        Self::from_cyclic(self.p, full)
    }
}

impl fmt::Display for CyclotomicElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("({c})*z"),
                _ => format!("({c})*z^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Element of ℤ[ζ_p] stored modulo `x^p - 1` (length `p`); it is zero in
/// ℤ[ζ_p] iff all coordinates are equal.
type Cyc = Vec<BigInt>;

fn cyc_is_zero(a: &Cyc) -> bool {
    a.iter().all(|c| *c == a[0])
}

fn cyc_mul(a: &Cyc, b: &Cyc) -> Cyc {
    let p = a.len();
    let mut out = vec![BigInt::zero(); p];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[(i + j) % p] += x * y;
            }
        }
    }
    normalize(out)
}

fn normalize(mut a: Cyc) -> Cyc {
    // subtract the last coordinate so representatives are canonical
    let top = a[a.len() - 1].clone();
    if !top.is_zero() {
        for c in a.iter_mut() {
            *c -= &top;
        }
    }
    a
}

fn integral_row(row: &[CyclotomicElem]) -> Vec<Cyc> {
    let lcm = row
        .iter()
        .flat_map(|e| e.coords.iter())
        .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    row.iter()
        .map(|e| {
            let mut v: Cyc = e.coords.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
            v.push(BigInt::zero());
            v
        })
        .collect()
}

fn remove_content(row: &mut [Cyc]) {
    let g = row.iter().flatten().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in row.iter_mut().flatten() {
            *c = &*c / &g;
        }
    }
}

/// Exact rank over ℚ(ζ_p), by division-free elimination in ℤ[ζ_p] with
/// row contents removed after every update.
pub fn rank_cyclotomic(m: &[Vec<CyclotomicElem>]) -> Result<usize> {
    let mut prime: Option<u64> = None;
    for e in m.iter().flatten() {
        match prime {
            None => prime = Some(e.p),
            Some(q) if q != e.p => return Err(Error::MixedPrimes(q, e.p)),
            _ => {}
        }
    }
    let mut rows: Vec<Vec<Cyc>> = m.iter().map(|r| integral_row(r)).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&i| !cyc_is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(rank, piv);
        let pivot_row = rows[rank].clone();
        let a = pivot_row[col].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if cyc_is_zero(&row[col]) {
                continue;
            }
            let b = row[col].clone();
            for j in col..ncols {
                let lhs = cyc_mul(&a, &row[j]);
                let rhs = cyc_mul(&b, &pivot_row[j]);
                row[j] = normalize(lhs.iter().zip(&rhs).map(|(x, y)| x - y).collect());
            }
            remove_content(row);
        }
        rank += 1;
    }
    Ok(rank)
}

/// Rank after mapping ζ to a primitive p-th root of unity `w` modulo the
/// prime `ell` (requires `ell ≡ 1 mod p`). Never exceeds the exact rank.
pub fn rank_mod_ell(m: &[Vec<CyclotomicElem>], ell: u64, w: u64) -> usize {
    use crate::algebra::fp_poly::{add_mod, inv_mod, mul_mod, pow_mod, sub_mod};
    let reduce = |e: &CyclotomicElem| -> Option<u64> {
        let mut acc = 0u64;
        for (k, c) in e.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let ell_b = BigInt::from(ell);
            let num = c.numer().mod_floor(&ell_b);
            let den = c.denom().mod_floor(&ell_b);
            if den.is_zero() {
                return None;
            }
            let num: u64 = num.try_into().ok()?;
            let den: u64 = den.try_into().ok()?;
            let v = mul_mod(num, inv_mod(den, ell), ell);
            acc = add_mod(acc, mul_mod(v, pow_mod(w, k as u64, ell), ell), ell);
        }
        Some(acc)
    };
    let mut a: Vec<Vec<u64>> = Vec::with_capacity(m.len());
    for row in m {
        let Some(r) = row.iter().map(reduce).collect::<Option<Vec<u64>>>() else {
            return 0;
        };
        a.push(r);
    }
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][col] != 0) else { continue };
        a.swap(rank, piv);
        let inv = inv_mod(a[rank][col], ell);
        for i in rank + 1..a.len() {
            if a[i][col] == 0 {
                continue;
            }
            let f = mul_mod(a[i][col], inv, ell);
            for j in col..ncols {
                let d = mul_mod(f, a[rank][j], ell);
                a[i][j] = sub_mod(a[i][j], d, ell);
            }
        }
        rank += 1;
    }
    rank
}

impl CyclotomicElem {
    /// True when every coordinate is an integer.
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Largest absolute numerator, a size measure for diagnostics.
    pub fn height(&self) -> BigInt {
        self.coords.iter().map(|c| c.numer().abs()).max().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_relations() {
        for p in [2u64, 3, 5, 7] {
            let z = CyclotomicElem::zeta_pow(p, 1);
            let mut acc = CyclotomicElem::one(p);
            let mut sum = CyclotomicElem::zero(p);
            for _ in 0..p {
                sum = sum.add(&acc);
                acc = acc.mul(&z);
            }
            assert_eq!(acc, CyclotomicElem::one(p));
            assert!(sum.is_zero());
        }
        assert_eq!(CyclotomicElem::zeta_pow(5, -1), CyclotomicElem::zeta_pow(5, 4));
    }

    #[test]
    fn ranks() {
        let p = 3;
        let z = CyclotomicElem::zero(p);
        assert_eq!(rank_cyclotomic(&[vec![z.clone(), z.clone()], vec![z.clone(), z.clone()]]).unwrap(), 0);
        let id: Vec<Vec<CyclotomicElem>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { CyclotomicElem::one(p) } else { z.clone() }).collect())
            .collect();
        assert_eq!(rank_cyclotomic(&id).unwrap(), 4);
        let zm1 = CyclotomicElem::zeta_pow(p, 1).sub(&CyclotomicElem::one(p));
        assert_eq!(rank_cyclotomic(&[vec![zm1, z.clone()], vec![z.clone(), z.clone()]]).unwrap(), 1);
        let mixed = vec![vec![CyclotomicElem::one(3), CyclotomicElem::one(5)]];
        assert_eq!(rank_cyclotomic(&mixed), Err(Error::MixedPrimes(3, 5)));
    }

    #[test]
    fn dependent_rows_over_the_field() {
        // second row is (1 + ζ) times the first
        let p = 5;
        let a = CyclotomicElem::zeta_pow(p, 2).sub(&CyclotomicElem::one(p));
        let b = CyclotomicElem::zeta_pow(p, 3);
        let f = CyclotomicElem::one(p).add(&CyclotomicElem::zeta_pow(p, 1));
        let m = vec![vec![a.clone(), b.clone()], vec![a.mul(&f), b.mul(&f)]];
        assert_eq!(rank_cyclotomic(&m).unwrap(), 1);
        // 11 ≡ 1 mod 5 and 3 has order 5 mod 11
        assert_eq!(rank_mod_ell(&m, 11, 3), 1);
    }
}
