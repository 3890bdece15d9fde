//! Degree bounds for non-cyclic covers in terms of the crossing number, the
//! prime search behind them, and the determinant coefficient bound for
//! matrices shaped like the de Rham presentation matrix.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::integer::next_prime;
use crate::algebra::laurent::{det_bareiss, LaurentPoly};
use crate::derham::reps_at_prime;
use crate::error::{Error, Result};
use crate::knot::Knot;

fn decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn pow(base: u64, e: u64) -> BigUint {
    BigUint::from(base).pow(e as u32)
}

/// Index bounds for the regular cover `X_ρ` and the irregular cover `Y_ρ`,
/// in both the `4^…` and `2^…` forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexBounds {
    pub c_k: usize,
    /// `4^{2c² − c}`
    #[serde(serialize_with = "decimal")]
    pub regular: BigUint,
    /// `4^{c² − 2c}`
    #[serde(serialize_with = "decimal")]
    pub irregular: BigUint,
    /// `2^{4c²}`
    #[serde(serialize_with = "decimal")]
    pub regular_power_of_two: BigUint,
    /// `2^{2c²}`
    #[serde(serialize_with = "decimal")]
    pub irregular_power_of_two: BigUint,
}

pub fn index_bounds(c_k: usize) -> Result<IndexBounds> {
    if c_k < 3 {
        return Err(Error::InvalidParameters(format!("no knot has crossing number {c_k}")));
    }
    let c = c_k as u64;
    Ok(IndexBounds {
        c_k,
        regular: pow(4, 2 * c * c - c),
        irregular: pow(4, c * c - 2 * c),
        regular_power_of_two: pow(2, 4 * c * c),
        irregular_power_of_two: pow(2, 2 * c * c),
    })
}

/// The smallest prime at which Δ is not a monomial (so a nonzero root
/// exists), compared with the
/// Bertrand window `[4^{c−1}, 2·4^{c−1} − 2]` and the threshold `4^{c−2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodPrime {
    pub p: u64,
    pub window: (u64, u64),
    /// Smallest prime in the window.
    pub window_prime: u64,
    /// Smallest prime `≥ 4^{c−2}`.
    pub threshold_prime: u64,
    /// Δ keeps at least three terms modulo both sample primes.
    pub samples_nontrivial: bool,
}

impl GoodPrime {
    pub fn passed(&self) -> bool {
        self.p <= self.window_prime && self.window_prime <= self.window.1 && self.samples_nontrivial
    }
}

/// Δ mod p is not a monomial, i.e. it has a nonzero root in some extension.
pub fn nontrivial_mod(delta: &LaurentPoly, p: u64) -> bool {
    delta.reduce_mod(p).nonzero_terms() >= 2
}

fn three_terms_mod(delta: &LaurentPoly, p: u64) -> bool {
    delta.reduce_mod(p).nonzero_terms() >= 3
}

pub fn good_prime(delta: &LaurentPoly, c_k: usize) -> Result<GoodPrime> {
    if delta.nonzero_terms() < 3 {
        return Err(Error::InvalidParameters("the Alexander polynomial is trivial".into()));
    }
    if !(3..=31).contains(&c_k) {
        return Err(Error::InvalidParameters(format!("crossing number {c_k} outside 3..=31")));
    }
    let lo = 4u64.pow(c_k as u32 - 1);
    let window = (lo, 2 * lo - 2);
    let window_prime = next_prime(lo);
    let threshold_prime = next_prime(4u64.pow(c_k as u32 - 2));
    let p = (2..)
        .map(next_prime)
        .take_while(|&p| p <= window.1)
        .find(|&p| nontrivial_mod(delta, p))
        .ok_or_else(|| Error::TheoremViolation("Δ is trivial modulo every prime in the window".into()))?;
    Ok(GoodPrime {
        p,
        window,
        window_prime,
        threshold_prime,
        samples_nontrivial: three_terms_mod(delta, window_prime) && three_terms_mod(delta, threshold_prime),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeterminantVerdict {
    pub n: usize,
    pub det: String,
    #[serde(serialize_with = "decimal")]
    pub max_coeff: BigUint,
    #[serde(serialize_with = "decimal")]
    pub bound: BigUint,
    pub holds: bool,
}

fn entry_kind(e: &LaurentPoly) -> Option<u8> {
    let t = LaurentPoly::t();
    if e.is_zero() {
        Some(0)
    } else if e.is_one() {
        Some(1)
    } else if *e == t {
        Some(2)
    } else if *e == &t - &LaurentPoly::one() {
        Some(3)
    } else {
        None
    }
}

/// Checks `|a| ≤ 4^{n−1}` for every coefficient of `det m`, where `m` has
/// entries in `{0, 1, t, t − 1}`, each nonzero kind at most once per row,
/// and no zero row.
pub fn determinant_bound_check(m: &[Vec<LaurentPoly>]) -> Result<DeterminantVerdict> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidParameters("matrix must be square and nonempty".into()));
    }
    for (i, row) in m.iter().enumerate() {
        let mut seen = [0usize; 4];
        for e in row {
            let k = entry_kind(e).ok_or_else(|| Error::InvalidParameters(format!("row {i}: entry {e} not in {{0, 1, t, t-1}}")))?;
            seen[k as usize] += 1;
        }
        if seen[1..].iter().any(|&c| c > 1) {
            return Err(Error::InvalidParameters(format!("row {i} repeats a nonzero entry")));
        }
        if seen[0] == n {
            return Err(Error::InvalidParameters(format!("row {i} is zero")));
        }
    }
    let det = det_bareiss(m);
    let max_coeff = det.coeffs().iter().map(|c| c.abs().to_biguint().expect("nonnegative")).max().unwrap_or_default();
    let bound = pow(4, n as u64 - 1);
    Ok(DeterminantVerdict { n, det: det.to_string(), holds: max_coeff <= bound, max_coeff, bound })
}

/// A random matrix meeting the hypotheses of [`determinant_bound_check`].
pub fn random_bound_matrix(n: usize, rng: &mut impl Rng) -> Vec<Vec<LaurentPoly>> {
    let kinds = [LaurentPoly::one(), LaurentPoly::t(), &LaurentPoly::t() - &LaurentPoly::one()];
    (0..n)
        .map(|_| {
            let mut row = vec![LaurentPoly::zero(); n];
            let mut cols: Vec<usize> = (0..n).collect();
            cols.shuffle(rng);
            let mut picks: Vec<&LaurentPoly> = kinds.iter().filter(|_| rng.gen_bool(0.6)).collect();
            if picks.is_empty() {
                picks.push(&kinds[rng.gen_range(0..3)]);
            }
            for (e, &c) in picks.into_iter().zip(&cols) {
                row[c] = e.clone();
            }
            row
        })
        .collect()
}

/// Runs the coefficient bound on `count` random matrices of sizes `1..=max_n`;
/// returns the number of violations.
pub fn determinant_bound_suite(seed: u64, count: usize, max_n: usize) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    for _ in 0..count {
        let n = rng.gen_range(1..=max_n);
        if !determinant_bound_check(&random_bound_matrix(n, &mut rng))?.holds {
            violations += 1;
        }
    }
    Ok(violations)
}

/// Families with their own bound on `[M_K : Y_ρ]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum BoundFamily {
    /// `J(k, 2n)`.
    Twist { k: i64, l: i64 },
    /// `K(p, q, r)` with odd parameters.
    Pretzel { p: i64, q: i64, r: i64 },
    /// Fibered of genus `g`: `2^{2g}`.
    Fibered { genus: u32 },
    /// Fibered with `c_K` crossings: `2^{c_K}`.
    FiberedCrossings { crossings: usize },
    /// Alexander polynomial of degree `d`.
    Degree { d: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyBound {
    pub family: BoundFamily,
    #[serde(serialize_with = "decimal")]
    pub bound: BigUint,
    /// The coarser headline form where one is stated: `16n²` for twist
    /// knots, `2^{2d²}` for degree `d`.
    #[serde(serialize_with = "opt_decimal")]
    pub headline: Option<BigUint>,
}

fn opt_decimal<S: serde::Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

fn nonneg(v: i128) -> Result<BigUint> {
    BigInt::from(v).to_biguint().ok_or_else(|| Error::InvalidParameters("negative bound".into()))
}

pub fn family_bound(family: BoundFamily) -> Result<FamilyBound> {
    let (bound, headline) = match family {
        BoundFamily::Twist { k, l } => {
            let poly = crate::fox::family_poly(crate::fox::Family::Twist { k, l })?;
            if poly.nonzero_terms() < 3 {
                return Err(Error::InvalidParameters(format!("J({k}, {l}) has trivial Alexander polynomial")));
            }
            let n = (l / 2) as i128;
            let bound = if k % 2 == 0 {
                let mn = (k / 2) as i128 * n;
                nonneg(4 * mn * mn - 4 * mn + 4)?
            } else if l == 2 {
                let m = (k - 1).div_euclid(2) as i128;
                nonneg(4 * m * m)?
            } else if l > 2 {
                pow(2, 2 * n as u64 - 1)
            } else {
                pow(2, (-2 * n) as u64)
            };
            (bound, Some(nonneg(16 * n * n)?))
        }
        BoundFamily::Pretzel { p, q, r } => {
            let poly = crate::fox::family_poly(crate::fox::Family::Pretzel { p, q, r })?;
            if poly.nonzero_terms() < 3 {
                return Err(Error::InvalidParameters(format!("K({p}, {q}, {r}) has trivial Alexander polynomial")));
            }
            let big = [p, q, r].iter().map(|x| x.unsigned_abs()).max().expect("three");
            (BigUint::from(4u64) * big * big, None)
        }
        BoundFamily::Fibered { genus } => (pow(2, 2 * genus as u64), None),
        BoundFamily::FiberedCrossings { crossings } => (pow(2, crossings as u64), None),
        BoundFamily::Degree { d } => {
            if d == 0 {
                return Err(Error::InvalidParameters("degree must be positive".into()));
            }
            let base = BigUint::from(2u64) * pow(4, d as u64 - 1) - BigUint::from(2u64);
            (base.pow(d), Some(pow(2, 2 * d as u64 * d as u64)))
        }
    };
    Ok(FamilyBound { family, bound, headline })
}

/// A representation realizing the smallest `[M_K : Y_ρ] = p^d` at a prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub p: u64,
    pub d: usize,
    pub n: u64,
    /// `p^d`
    pub irregular_index: u64,
    /// `n·p^d`
    pub regular_index: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub knot: String,
    pub c_k: usize,
    pub index_bounds: IndexBounds,
    pub family: Option<FamilyBound>,
    pub good_prime: GoodPrime,
    pub witness: Witness,
    pub within_index_bounds: bool,
    pub within_family: Option<bool>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.within_index_bounds && self.within_family != Some(false) && self.good_prime.passed()
    }
}

pub fn witness_at(knot: &Knot, p: u64) -> Result<Witness> {
    reps_at_prime(&knot.working, &knot.delta, p)?
        .into_iter()
        .map(|(_, r)| Witness { p, d: r.d(), n: r.order_alpha, irregular_index: r.field_order(), regular_index: r.image_order() })
        .min_by_key(|w| (w.irregular_index, w.regular_index))
        .ok_or(Error::NoRepresentation(p))
}

/// Bounds for a knot, with the family bound for fibered knots taken from
/// the genus.
pub fn bound_report(knot: &Knot) -> Result<BoundReport> {
    let c_k = knot.c_k();
    let index_bounds = index_bounds(c_k)?;
    let good_prime = good_prime(&knot.delta, c_k)?;
    let witness = witness_at(knot, good_prime.p)?;
    let family = match (knot.fibered, knot.genus) {
        (Some(true), Some(genus)) => Some(family_bound(BoundFamily::Fibered { genus })?),
        _ => None,
    };
    let within_index_bounds = BigUint::from(witness.irregular_index) <= index_bounds.irregular
        && BigUint::from(witness.regular_index) <= index_bounds.regular;
    let within_family = family.as_ref().map(|f| BigUint::from(witness.irregular_index) <= f.bound);
    Ok(BoundReport { knot: knot.name.clone(), c_k, index_bounds, family, good_prime, witness, within_index_bounds, within_family })
}

/// `Some(v)` when a bound fits in 64 bits.
pub fn small(v: &BigUint) -> Option<u64> {
    if v.is_zero() {
        return Some(0);
    }
    v.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    #[test]
    fn index_bound_values() {
        let b = index_bounds(3).unwrap();
        assert_eq!(b.regular, pow(4, 15));
        assert_eq!(b.irregular, pow(4, 3));
        assert_eq!(b.regular_power_of_two, pow(2, 36));
        assert_eq!(index_bounds(4).unwrap().regular, pow(4, 28));
        assert!(index_bounds(2).is_err());
    }

    #[test]
    fn good_primes() {
        let g = good_prime(&LaurentPoly::from_coeffs(&[1, -3, 1]), 4).unwrap();
        assert_eq!(g.p, 2);
        assert!(g.passed());
        assert_eq!(g.window, (64, 126));
        assert_eq!(g.window_prime, 67);
        assert_eq!(good_prime(&LaurentPoly::from_coeffs(&[2, -3, 2]), 5).unwrap().p, 3);
        assert!(good_prime(&LaurentPoly::one(), 3).is_err());
        for name in ["3_1", "5_1", "6_2", "6_3", "7_1", "7_7"] {
            let k = Knot::builtin(name).unwrap();
            assert_eq!(good_prime(&k.delta, k.c_k()).unwrap().p, 2, "{name}");
        }
    }

    #[test]
    fn determinant_bound_examples() {
        let t = LaurentPoly::t();
        let tm1 = &t - &LaurentPoly::one();
        let v = determinant_bound_check(&[vec![tm1.clone()]]).unwrap();
        assert_eq!((v.max_coeff.clone(), v.bound.clone(), v.holds), (BigUint::one(), BigUint::one(), true));
        let v = determinant_bound_check(&[vec![tm1.clone(), LaurentPoly::one()], vec![LaurentPoly::one(), tm1.clone()]]).unwrap();
        assert_eq!(v.max_coeff, BigUint::from(2u32));
        assert!(v.holds);
        assert!(determinant_bound_check(&[vec![LaurentPoly::zero()]]).is_err());
        assert!(determinant_bound_check(&[vec![LaurentPoly::from_coeffs(&[2])]]).is_err());
        assert!(determinant_bound_check(&[vec![t.clone(), t.clone()], vec![t.clone(), LaurentPoly::one()]]).is_err());
    }

    #[test]
    fn family_values() {
        let b = |f| family_bound(f).unwrap().bound;
        assert_eq!(b(BoundFamily::Fibered { genus: 1 }), BigUint::from(4u32));
        assert_eq!(b(BoundFamily::Pretzel { p: 3, q: 5, r: 7 }), BigUint::from(196u32));
        // J(2m, 2n): (2mn)² − 4mn + 4
        assert_eq!(b(BoundFamily::Twist { k: 4, l: 6 }), BigUint::from(124u32));
        assert_eq!(b(BoundFamily::Twist { k: 2, l: 2 }), BigUint::from(4u32));
        assert_eq!(b(BoundFamily::Degree { d: 2 }), BigUint::from(36u32));
        assert_eq!(family_bound(BoundFamily::Twist { k: 2, l: 4 }).unwrap().headline, Some(BigUint::from(64u32)));
        assert!(family_bound(BoundFamily::Pretzel { p: -3, q: 5, r: 7 }).is_err());
        assert!(family_bound(BoundFamily::Pretzel { p: 2, q: 5, r: 7 }).is_err());
        assert!(family_bound(BoundFamily::Twist { k: 1, l: 3 }).is_err());
    }

    #[test]
    fn figure_eight_is_tight() {
        let k = Knot::builtin("4_1").unwrap();
        let r = bound_report(&k).unwrap();
        assert!(r.passed());
        assert_eq!(r.witness.irregular_index, 4);
        assert_eq!(r.family.unwrap().bound, BigUint::from(4u32));
    }

    #[test]
    fn suite_has_no_violations() {
        assert_eq!(determinant_bound_suite(7, 200, 7).unwrap(), 0);
    }

    proptest! {
        #[test]
        fn random_matrices_respect_bound(seed in any::<u64>(), n in 1usize..=6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = determinant_bound_check(&random_bound_matrix(n, &mut rng)).unwrap();
            prop_assert!(v.holds);
        }
    }
}
