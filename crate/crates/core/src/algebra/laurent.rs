//! Laurent polynomials over ℤ and matrices of them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::fp_poly::PolyFp;

/// `Σ coeffs[i] · t^(low + i)`, with nonzero first and last coefficient
/// unless the polynomial is zero (then `coeffs` is empty and `low` is 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn new(low: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = LaurentPoly { low, coeffs };
        p.trim();
        p
    }

    pub fn from_i64(low: i64, coeffs: &[i64]) -> Self {
        Self::new(low, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Ordinary polynomial with ascending coefficients.
    pub fn from_coeffs(coeffs: &[i64]) -> Self {
        Self::from_i64(0, coeffs)
    }

    pub fn zero() -> Self {
        LaurentPoly { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(0, vec![c])
    }

    pub fn monomial(c: BigInt, k: i64) -> Self {
        Self::new(k, vec![c])
    }

    pub fn t() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    /// `t^k`.
    pub fn t_pow(k: i64) -> Self {
        Self::monomial(BigInt::one(), k)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
            return;
        }
        self.coeffs.drain(..lead_zeros);
        self.low += lead_zeros as i64;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    /// Width of the support, `high - low`; 0 for the zero polynomial.
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> BigInt {
        let i = k - self.low;
        if i < 0 || i as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn trailing(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    pub fn nonzero_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.low, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        assert!(x != 0 || self.low >= 0, "evaluation at 0 of a Laurent polynomial");
        let x = BigInt::from(x);
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &x + c;
        }
        if self.low >= 0 {
            acc * x.pow(self.low as u32)
        } else {
            // only x = ±1 gives an integer here
            assert!(x.abs().is_one(), "non-integral evaluation");
            if self.low % 2 != 0 && x.is_negative() {
                -acc
            } else {
                acc
            }
        }
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Representative of the class up to `±t^k`: lowest degree 0 and
    /// positive leading coefficient.
    pub fn canonical(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.shift(-self.low);
        if p.leading().is_negative() {
            -p
        } else {
            p
        }
    }

    pub fn eq_up_to_units(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    /// Coefficients are symmetric: `a_{low+j} = a_{high-j}`.
    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|j| self.coeffs[j] == self.coeffs[n - 1 - j])
    }

    /// Reduction of the canonical representative modulo `p`.
    pub fn reduce_mod(&self, p: u64) -> PolyFp {
        let c = self.canonical();
        let pb = BigInt::from(p);
        let coeffs = c
            .coeffs
            .iter()
            .map(|a| {
                let r = a.mod_floor(&pb);
                u64::try_from(r).expect("residue fits in u64")
            })
            .collect();
        PolyFp::new(p, coeffs)
    }

    /// Exact quotient `self / d` in ℤ[t, t⁻¹]; `None` if `d` does not divide.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let mut rem: Vec<BigInt> = self.coeffs.clone();
        let dl = d.coeffs.len();
        if rem.len() < dl {
            return None;
        }
        let lead = d.leading();
        let qlen = rem.len() - dl + 1;
        let mut q = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let top = &rem[i + dl - 1];
            if top.is_zero() {
                continue;
            }
            let (qi, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &qi * dc;
            }
            q[i] = qi;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(self.low - d.low, q))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = self.high().max(rhs.high());
        let mut coeffs = vec![BigInt::zero(); (high - low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[(rhs.low - low) as usize + i] += c;
        }
        LaurentPoly::new(low, coeffs)
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { low: self.low, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -(self.clone())
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly::new(self.low + rhs.low, coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.low, &self.coeffs).cmp(&(other.low, &other.coeffs))
    }
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &BigInt,
    k: i64,
) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {} ", if neg { '-' } else { '+' })?;
    }
    let mono = match k {
        0 => String::new(),
        1 => "t".to_string(),
        _ => format!("t^{k}"),
    };
    if k == 0 {
        write!(f, "{abs}")
    } else if abs.is_one() {
        write!(f, "{mono}")
    } else {
        write!(f, "{abs}*{mono}")
    }
}

/// Renders highest degree first, e.g. `t^2 - 3*t + 1`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            write_term(f, first, c, self.low + i as i64)?;
            first = false;
        }
        Ok(())
    }
}

/// Dense matrix of Laurent polynomials.
pub type LaurentMatrix = Vec<Vec<LaurentPoly>>;

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// Each row is first multiplied by a power of `t` so that all entries are
/// ordinary polynomials; the shifts are undone at the end.
pub fn det_bareiss(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    assert!(m.iter().all(|r| r.len() == n), "det of non-square matrix");
    let mut shift = 0i64;
    let mut a: Vec<Vec<LaurentPoly>> = m
        .iter()
        .map(|row| {
            let low = row.iter().filter(|e| !e.is_zero()).map(|e| e.low()).min().unwrap_or(0);
            shift += low;
            row.iter().map(|e| e.shift(-low)).collect()
        })
        .collect();
    let mut sign = false;
    let mut prev = LaurentPoly::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return LaurentPoly::zero();
            };
            a.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = LaurentPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].shift(shift);
    if sign {
        -det
    } else {
        det
    }
}
