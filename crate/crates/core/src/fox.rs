//! Fox free differential calculus, Alexander matrices and polynomials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::fp_poly::PolyFp;
use crate::algebra::laurent::{det_bareiss, LaurentPoly};
use crate::algebra::poly_snf::snf_poly;
use crate::algebra::integer::is_prime;
use crate::error::{Error, Result};
use crate::knot_io::presentation::{GroupPresentation, Word};

/// `D_i(w)` as a ℤ-combination of freely reduced prefixes of `w`.
pub fn fox_derivative(w: &Word, i: usize, num_generators: usize) -> Result<BTreeMap<Word, i64>> {
    if i >= num_generators {
        return Err(Error::GeneratorOutOfRange { index: i, count: num_generators });
    }
    let mut out: BTreeMap<Word, i64> = BTreeMap::new();
    let l = w.letters();
    for (k, &x) in l.iter().enumerate() {
        if x.unsigned_abs() as usize - 1 != i {
            continue;
        }
        let (prefix, sign) = if x > 0 { (&l[..k], 1) } else { (&l[..=k], -1) };
        *out.entry(Word::new(prefix.to_vec())).or_insert(0) += sign;
    }
    out.retain(|_, c| *c != 0);
    Ok(out)
}

/// Row `j`, column `i`: the image of `D_i(R_j)` under the abelianization
/// `x_g ↦ t^(weight g)`.
pub fn jacobian(pres: &GroupPresentation) -> Result<Vec<Vec<LaurentPoly>>> {
    let weights = pres.abelian_weights()?;
    Ok(jacobian_with_weights(pres, &weights))
}

pub fn jacobian_with_weights(pres: &GroupPresentation, weights: &[i64]) -> Vec<Vec<LaurentPoly>> {
    let n = pres.num_generators;
    pres.relators
        .iter()
        .map(|r| {
            let mut acc: Vec<BTreeMap<i64, i64>> = vec![BTreeMap::new(); n];
            let mut e = 0i64;
            for &x in r.letters() {
                let g = x.unsigned_abs() as usize - 1;
                if x > 0 {
                    *acc[g].entry(e).or_insert(0) += 1;
                    e += weights[g];
                } else {
                    e -= weights[g];
                    *acc[g].entry(e).or_insert(0) -= 1;
                }
            }
            acc.into_iter()
                .map(|terms| {
                    terms.into_iter().fold(LaurentPoly::zero(), |s, (k, c)| {
                        &s + &LaurentPoly::monomial(BigInt::from(c), k)
                    })
                })
                .collect()
        })
        .collect()
}

fn minor(m: &[Vec<LaurentPoly>], skip_row: Option<usize>, skip_col: usize) -> Vec<Vec<LaurentPoly>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != skip_row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != skip_col).map(|(_, e)| e.clone()).collect())
        .collect()
}

/// Alexander polynomial, canonically normalized.
///
/// For a presentation with `r` generators and `r - 1` relators (a redundant
/// relator of a balanced presentation is dropped first), Δ is the minor
/// obtained by deleting a column whose generator maps to `t^{±1}`; a second
/// such column is used as a cross-check.
pub fn alexander_poly(pres: &GroupPresentation) -> Result<LaurentPoly> {
    let weights = pres.abelian_weights()?;
    let mut j = jacobian_with_weights(pres, &weights);
    let r = pres.num_generators;
    if j.len() == r && r > 0 {
        j.pop();
    }
    if j.len() + 1 != r {
        return Err(Error::RankDeficient(format!("{} relators for {} generators", j.len(), r)));
    }
    let cols: Vec<usize> = (0..r).filter(|&c| weights[c].abs() == 1).collect();
    let Some(&c1) = cols.first() else {
        return Err(Error::RankDeficient("no meridional generator".into()));
    };
    let d1 = det_bareiss(&minor(&j, None, c1));
    if d1.is_zero() {
        return Err(Error::RankDeficient("vanishing minor".into()));
    }
    if let Some(&c2) = cols.get(1) {
        let d2 = det_bareiss(&minor(&j, None, c2));
        if !d1.eq_up_to_units(&d2) {
            return Err(Error::RankDeficient(format!("minors disagree: {d1} vs {d2}")));
        }
    }
    Ok(d1.canonical())
}

/// The reduction of Δ used for roots and factorization strings: the
/// canonical integer representative read modulo `p` (powers of `t` and the
/// leading unit are kept).
pub fn delta_mod_p(delta: &LaurentPoly, p: u64) -> PolyFp {
    delta.reduce_mod(p)
}

/// Removes the largest power of `t` dividing `f` (a unit in 𝔽_p[t, t⁻¹]).
pub fn strip_t(f: &PolyFp) -> PolyFp {
    let k = f.coeffs().iter().take_while(|&&a| a == 0).count();
    PolyFp::new(f.p(), f.coeffs()[k..].to_vec())
}

/// Invariant factors of the Alexander matrix over 𝔽_p[t, t⁻¹].
#[derive(Clone, Debug, Serialize)]
pub struct AlexanderModP {
    pub p: u64,
    /// Nonzero invariant factors, monic and prime to `t`, each dividing the next.
    pub factors: Vec<PolyFp>,
    /// Product of the invariant factors.
    pub delta_p: PolyFp,
}

impl AlexanderModP {
    /// The largest invariant factor.
    pub fn largest(&self) -> PolyFp {
        self.factors.last().cloned().unwrap_or_else(|| PolyFp::one(self.p))
    }
}

fn jacobian_mod_p(pres: &GroupPresentation, p: u64) -> Result<Vec<Vec<PolyFp>>> {
    let j = jacobian(pres)?;
    Ok(j.iter()
        .map(|row| {
            let low = row.iter().filter(|e| !e.is_zero()).map(|e| e.low()).min().unwrap_or(0);
            row.iter()
                .map(|e| {
                    if e.is_zero() {
                        return PolyFp::zero(p);
                    }
                    let s = e.shift(-low);
                    let mut coeffs = vec![0u64; s.low() as usize];
                    let pb = BigInt::from(p);
                    coeffs.extend(s.coeffs().iter().map(|c| u64::try_from(c.mod_floor(&pb)).unwrap()));
                    PolyFp::new(p, coeffs)
                })
                .collect()
        })
        .collect())
}

pub fn alexander_modp(pres: &GroupPresentation, p: u64) -> Result<AlexanderModP> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let m = jacobian_mod_p(pres, p)?;
    let factors: Vec<PolyFp> = snf_poly(&m, p)
        .into_iter()
        .filter(|f| !f.is_zero())
        .map(|f| strip_t(&f).monic())
        .filter(|f| !f.is_one())
        .collect();
    let delta_p = factors.iter().fold(PolyFp::one(p), |a, f| a.mul(f));
    Ok(AlexanderModP { p, factors, delta_p })
}

/// Outcome of comparing the integral and modular Alexander invariants.
#[derive(Clone, Debug, Serialize)]
pub struct CongruenceReport {
    pub p: u64,
    /// Per index `i`: (reduction of the integral Δ_i, modular Δ_{p,i}, agree).
    pub indices: Vec<(String, String, bool)>,
}

impl CongruenceReport {
    pub fn passed(&self) -> bool {
        self.indices.iter().all(|x| x.2)
    }
}

/// Primitive generator in ℤ[t] of the gcd over ℚ, canonically normalized.
pub fn gcd_q(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let to_q = |f: &LaurentPoly| -> Vec<BigRational> {
        let f = f.shift(-f.low());
        f.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect()
    };
    let g = qpoly_gcd(to_q(a), to_q(b));
    let lcm = g.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = g.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let p = LaurentPoly::new(0, ints);
    let content = p.content();
    if content.is_zero() {
        return p;
    }
    LaurentPoly::new(0, p.coeffs().iter().map(|c| c / &content).collect()).canonical()
}

/// Monic gcd over ℚ of two coefficient vectors (ascending).
pub fn qpoly_gcd(mut a: Vec<BigRational>, mut b: Vec<BigRational>) -> Vec<BigRational> {
    let trim = |v: &mut Vec<BigRational>| {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = qpoly_rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lead) = a.last().cloned() {
        for c in a.iter_mut() {
            *c = &*c / &lead;
        }
    }
    a
}

pub fn qpoly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let f = r.last().unwrap() / &lb;
        let shift = r.len() - b.len();
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &f * bc;
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Generator of the `i`-th elementary ideal over ℚ[t]: gcd of all
/// `(r-1-i)`-minors of the Jacobian, made primitive in ℤ[t].
pub fn elementary_ideal_q(pres: &GroupPresentation, i: usize) -> Result<LaurentPoly> {
    let j = jacobian(pres)?;
    let r = pres.num_generators;
    if i + 1 >= r {
        return Ok(LaurentPoly::one());
    }
    let size = r - 1 - i;
    let mut g = LaurentPoly::zero();
    for rows in combinations(j.len(), size) {
        for cols in combinations(r, size) {
            let sub: Vec<Vec<LaurentPoly>> =
                rows.iter().map(|&a| cols.iter().map(|&b| j[a][b].clone()).collect()).collect();
            let d = det_bareiss(&sub);
            if d.is_zero() {
                continue;
            }
            g = if g.is_zero() { d.canonical() } else { gcd_q(&g, &d) };
            if g.span() == 0 {
                return Ok(LaurentPoly::one());
            }
        }
    }
    Ok(g)
}

/// Compares `Δ_i mod p` with the product of the first `r - 1 - i` invariant
/// factors over 𝔽_p, for every index where either side is nontrivial.
pub fn check_congruence(pres: &GroupPresentation, p: u64) -> Result<CongruenceReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let modp = alexander_modp(pres, p)?;
    let delta = alexander_poly(pres)?;
    let normalize = |f: &PolyFp| strip_t(f).monic();
    let mut indices = Vec::new();
    let k = modp.factors.len();
    let mut i = 0;
    loop {
        let integral = if i == 0 { delta.clone() } else { elementary_ideal_q(pres, i)? };
        let lhs = normalize(&integral.reduce_mod(p));
        let rhs = modp.factors[..k.saturating_sub(i)].iter().fold(PolyFp::one(p), |a, f| a.mul(f));
        let ok = lhs == rhs;
        let done = lhs.is_one() && rhs.is_one();
        indices.push((lhs.to_string(), rhs.to_string(), ok));
        if done || i + 1 >= pres.num_generators {
            break;
        }
        i += 1;
    }
    Ok(CongruenceReport { p, indices })
}

/// Checks of the classical properties of a knot's Alexander polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct PropsReport {
    pub value_at_one_is_unit: bool,
    pub palindromic: bool,
    pub degree: usize,
    pub degree_bound: usize,
    pub degree_within_bound: bool,
    pub nontrivial: bool,
    /// At least three nonzero coefficients (only required when nontrivial).
    pub three_terms: bool,
}

impl PropsReport {
    pub fn passed(&self) -> bool {
        self.value_at_one_is_unit
            && self.palindromic
            && self.degree_within_bound
            && (!self.nontrivial || self.three_terms)
    }
}

pub fn check_props(delta: &LaurentPoly, crossings: usize) -> PropsReport {
    let d = delta.canonical();
    let nontrivial = d.span() > 0;
    let bound = crossings.saturating_sub(1);
    PropsReport {
        value_at_one_is_unit: d.eval_i64(1).abs().is_one(),
        palindromic: d.is_palindromic(),
        degree: d.span(),
        degree_bound: bound,
        degree_within_bound: d.span() <= bound,
        nontrivial,
        three_terms: d.nonzero_terms() >= 3,
    }
}

/// Knot families with closed-form Alexander polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `J(k, l)`: two twist regions with `k` and `l = 2n` half twists.
    Twist { k: i64, l: i64 },
    /// Pretzel knot `K(p, q, r)` with `p, q, r` odd.
    Pretzel { p: i64, q: i64, r: i64 },
    /// Torus knot `T(p, q)` with `gcd(p, q) = 1`.
    Torus { p: i64, q: i64 },
}

fn alternating_middle(len: i64, scale: i64) -> LaurentPoly {
    // scale · Σ_{j=1}^{len-1} (-1)^j t^j
    let mut coeffs = vec![0i64; len as usize + 1];
    for j in 1..len {
        coeffs[j as usize] = if j % 2 == 0 { scale } else { -scale };
    }
    LaurentPoly::from_coeffs(&coeffs)
}

pub fn family_poly(family: Family) -> Result<LaurentPoly> {
    let poly = match family {
        Family::Twist { k, l } => {
            if l == 0 || l % 2 != 0 || k == 0 {
                return Err(Error::InvalidParameters("twist knots need k ≠ 0 and l = 2n ≠ 0".into()));
            }
            let n = l / 2;
            if k % 2 == 0 {
                let m = k / 2;
                LaurentPoly::from_coeffs(&[n * m, 1 - 2 * m * n, n * m])
            } else {
                let m = (k - 1).div_euclid(2);
                let (len, end) = if l > 0 { (2 * n, m) } else { (-2 * n, m + 1) };
                let ends = &LaurentPoly::from_coeffs(&[end]) + &LaurentPoly::monomial(BigInt::from(end), len);
                &ends + &alternating_middle(len, 1 + 2 * m)
            }
        }
        Family::Pretzel { p, q, r } => {
            if p % 2 == 0 || q % 2 == 0 || r % 2 == 0 {
                return Err(Error::InvalidParameters("p,q,r must be odd".into()));
            }
            let s = p * q + q * r + r * p;
            // s(t² - 2t + 1) + t² + 2t + 1, then divide by 4
            let num = [s + 1, -2 * s + 2, s + 1];
            if num.iter().any(|c| c % 4 != 0) {
                return Err(Error::InvalidParameters("pretzel polynomial is not integral".into()));
            }
            LaurentPoly::from_coeffs(&num.map(|c| c / 4))
        }
        Family::Torus { p, q } => {
            let (a, b) = (p.abs(), q.abs());
            if a == 0 || b == 0 || a.gcd(&b) != 1 {
                return Err(Error::InvalidParameters("torus knots need coprime nonzero p, q".into()));
            }
            let tk = |k: i64| &LaurentPoly::t_pow(k) - &LaurentPoly::one();
            let num = &tk(a * b) * &tk(1);
            let den = &tk(a) * &tk(b);
            num.div_exact(&den).ok_or_else(|| Error::InvalidParameters("torus division".into()))?
        }
    };
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(poly.canonical())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot_io::{builtin_knot, simplify, tietze_reduce, wirtinger};

    fn lp(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(c)
    }

    #[test]
    fn derivative_rules() {
        let d = fox_derivative(&Word(vec![1, 2]), 0, 2).unwrap();
        assert_eq!(d.into_iter().collect::<Vec<_>>(), vec![(Word(vec![]), 1)]);
        let d = fox_derivative(&Word(vec![-1]), 0, 1).unwrap();
        assert_eq!(d.into_iter().collect::<Vec<_>>(), vec![(Word(vec![-1]), -1)]);
        let d = fox_derivative(&Word(vec![1, 2, -1]), 1, 2).unwrap();
        assert_eq!(d.into_iter().collect::<Vec<_>>(), vec![(Word(vec![1]), 1)]);
        assert!(fox_derivative(&Word(vec![1]), 3, 2).is_err());
    }

    #[test]
    fn wirtinger_rows() {
        let p = wirtinger(&builtin_knot("4_1").unwrap());
        let j = jacobian(&p).unwrap();
        let allowed = [lp(&[]), lp(&[1]), lp(&[0, -1]), lp(&[-1, 1])];
        for row in &j {
            assert!(row.iter().all(|e| allowed.contains(e)));
            let at_one: BigInt = row.iter().map(|e| e.eval_i64(1)).sum();
            assert!(at_one.is_zero());
        }
        let unknot = GroupPresentation::new(1, vec![]);
        assert!(jacobian(&unknot).unwrap().is_empty());
    }

    #[test]
    fn golden_polynomials() {
        let cases = [("3_1", vec![1, -1, 1]), ("4_1", vec![1, -3, 1]), ("unknot", vec![1])];
        for (name, coeffs) in cases {
            let p = wirtinger(&builtin_knot(name).unwrap());
            assert_eq!(alexander_poly(&p).unwrap(), lp(&coeffs), "{name}");
        }
    }

    #[test]
    fn simplification_preserves_delta() {
        for name in ["3_1", "4_1", "5_2", "6_3", "7_7"] {
            let w = wirtinger(&builtin_knot(name).unwrap());
            let d = alexander_poly(&w).unwrap();
            assert_eq!(alexander_poly(&simplify(&w).unwrap()).unwrap(), d);
            assert_eq!(alexander_poly(&tietze_reduce(&w)).unwrap(), d);
        }
    }

    #[test]
    fn modular_invariants() {
        let fig8 = wirtinger(&builtin_knot("4_1").unwrap());
        let m = alexander_modp(&fig8, 11).unwrap();
        assert_eq!(m.largest(), PolyFp::from_i64(11, &[-5, 1]).mul(&PolyFp::from_i64(11, &[-9, 1])));
        let k63 = wirtinger(&builtin_knot("6_3").unwrap());
        assert_eq!(alexander_modp(&k63, 5).unwrap().delta_p, PolyFp::from_i64(5, &[1, 2, 0, 2, 1]));
        let k52 = wirtinger(&builtin_knot("5_2").unwrap());
        let d = alexander_poly(&k52).unwrap();
        assert_eq!(delta_mod_p(&d, 5), PolyFp::from_i64(5, &[2, 2, 2]));
        assert_eq!(alexander_modp(&k52, 4).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn congruences() {
        let fig8 = wirtinger(&builtin_knot("4_1").unwrap());
        assert!(check_congruence(&fig8, 5).unwrap().passed());
        let tre = wirtinger(&builtin_knot("3_1").unwrap());
        let rep = check_congruence(&tre, 2).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.indices[0].0, "t^2 + t + 1");
        assert_eq!(check_congruence(&tre, 1).unwrap_err(), Error::NotPrime(1));
    }

    #[test]
    fn properties() {
        assert!(check_props(&lp(&[1, -3, 1]), 4).passed());
        let r = check_props(&lp(&[1, -1, 1]), 3);
        assert!(r.passed() && r.degree == 2);
        assert!(!check_props(&lp(&[-1, 1]), 3).value_at_one_is_unit);
    }

    #[test]
    fn families() {
        assert_eq!(family_poly(Family::Twist { k: 2, l: 2 }).unwrap(), lp(&[1, -1, 1]));
        assert_eq!(family_poly(Family::Twist { k: -2, l: 2 }).unwrap(), lp(&[1, -3, 1]));
        assert_eq!(family_poly(Family::Pretzel { p: 3, q: 5, r: 7 }).unwrap(), lp(&[18, -35, 18]));
        assert!(family_poly(Family::Pretzel { p: -2, q: 3, r: 5 }).is_err());
        assert_eq!(family_poly(Family::Torus { p: 2, q: 3 }).unwrap(), lp(&[1, -1, 1]));
        assert_eq!(family_poly(Family::Torus { p: 2, q: 5 }).unwrap(), lp(&[1, -1, 1, -1, 1]));
        assert!(family_poly(Family::Torus { p: 2, q: 4 }).is_err());
        // odd k: Δ(1) = ±1 for every member
        for (k, l) in [(3, 2), (3, 4), (5, -4), (-3, 6)] {
            let d = family_poly(Family::Twist { k, l }).unwrap();
            assert!(d.eval_i64(1).abs().is_one(), "J({k},{l})");
            assert!(d.is_palindromic());
        }
    }
}
