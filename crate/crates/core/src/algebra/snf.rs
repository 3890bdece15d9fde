//! Finitely generated abelian groups and Smith normal form over ℤ.
//!
//! Cokernels of large sparse relation matrices are reduced in two phases:
//! a sparse elimination on unit pivots in machine integers (Markowitz-style
//! pivot choice), then a dense arbitrary-precision Smith form of whatever
//! is left.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::integer::factor_bigint;
use crate::error::Error;

/// `ℤ^free_rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k` with `d₁ | d₂ | …` and every `dᵢ ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        AbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// Group presented by a diagonal matrix: zero entries add free rank,
    /// units vanish, the rest is normalized into an invariant-factor chain.
    pub fn from_diagonal(free_rank: usize, entries: impl IntoIterator<Item = BigInt>) -> Self {
        let mut free_rank = free_rank;
        let mut d: Vec<BigInt> = Vec::new();
        for e in entries {
            let e = e.abs();
            if e.is_zero() {
                free_rank += 1;
            } else if !e.is_one() {
                d.push(e);
            }
        }
        // gcd/lcm sweeps turn any diagonal into a divisibility chain
        d.sort();
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                if (&d[j] % &d[i]).is_zero() {
                    continue;
                }
                let g = d[i].gcd(&d[j]);
                let l = &d[i] / &g * &d[j];
                d[i] = g;
                d[j] = l;
            }
        }
        d.retain(|x| !x.is_one());
        d.sort();
        AbelianGroup { free_rank, torsion: d }
    }

    pub fn betti(&self) -> usize {
        self.free_rank
    }

    /// Order of the torsion subgroup (1 when torsion-free).
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |a, b| a * b)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Prime-power elementary divisors, ordered by prime and then by power.
    pub fn elementary_divisors(&self) -> Vec<(BigInt, u32)> {
        let mut out: Vec<(BigInt, u32)> = self.torsion.iter().flat_map(factor_bigint).collect();
        out.sort();
        out
    }
}

fn push_term(parts: &mut Vec<String>, base: &str, count: usize) {
    match count {
        0 => {}
        1 => parts.push(base.to_string()),
        _ => parts.push(format!("{base}^{count}")),
    }
}

/// Notation `[0^r, q₁^m₁, …]`: free rank first, then prime powers with
/// multiplicities.
impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        push_term(&mut parts, "0", self.free_rank);
        let divs = self.elementary_divisors();
        let mut i = 0;
        while i < divs.len() {
            let mut j = i;
            while j < divs.len() && divs[j] == divs[i] {
                j += 1;
            }
            let (q, e) = &divs[i];
            push_term(&mut parts, &q.pow(*e).to_string(), j - i);
            i = j;
        }
        write!(f, "[{}]", parts.join(", "))
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    /// Accepts `[0^{4},2^2]`, `[0, 11, 11]`, `[0^5,9,5]` and similar.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("abelian group {s:?}"));
        let inner = s.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let cleaned: String = inner.chars().filter(|c| !c.is_whitespace() && *c != '{' && *c != '}').collect();
        let mut free = 0usize;
        let mut entries = Vec::new();
        if cleaned.is_empty() {
            return Ok(AbelianGroup::default());
        }
        for item in cleaned.split(',') {
            let (base, count) = match item.split_once('^') {
                Some((b, c)) => (b, c.parse::<usize>().map_err(|_| bad())?),
                None => (item, 1),
            };
            let base: BigInt = base.parse().map_err(|_| bad())?;
            if base.is_zero() {
                free += count;
            } else {
                entries.extend(std::iter::repeat_n(base, count));
            }
        }
        Ok(AbelianGroup::from_diagonal(free, entries))
    }
}

/// Sparse integer matrix; rows are relations among `ncols` generators.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    pub ncols: usize,
    pub rows: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix { ncols, rows: Vec::new() }
    }

    /// Adds a row given as (column, coefficient) pairs; repeated columns are summed.
    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (usize, i64)>) {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (c, v) in entries {
            assert!(c < self.ncols, "column out of range");
            *acc.entry(c).or_insert(0) += v;
        }
        self.rows.push(acc.into_iter().filter(|&(_, v)| v != 0).collect());
    }

    pub fn from_dense(m: &[Vec<i64>]) -> Self {
        let ncols = m.first().map_or(0, |r| r.len());
        let mut s = SparseMatrix::new(ncols);
        for row in m {
            s.push_row(row.iter().enumerate().map(|(j, &v)| (j, v)));
        }
        s
    }

    pub fn cokernel(&self) -> AbelianGroup {
        cokernel_sparse(self)
    }
}

/// Cokernel `ℤ^cols / rowspace` of a dense integer matrix.
pub fn snf_int(m: &[Vec<i64>]) -> AbelianGroup {
    SparseMatrix::from_dense(m).cokernel()
}

fn merge_rows(target: &[(usize, i64)], pivot: &[(usize, i64)], mult: i64) -> Option<Vec<(usize, i64)>> {
    // target - mult * pivot
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let take_t = j == pivot.len() || (i < target.len() && target[i].0 < pivot[j].0);
        let take_p = i == target.len() || (j < pivot.len() && pivot[j].0 < target[i].0);
        if take_t {
            out.push(target[i]);
            i += 1;
        } else if take_p {
            out.push((pivot[j].0, pivot[j].1.checked_mul(mult)?.checked_neg()?));
            j += 1;
        } else {
            let v = target[i].1.checked_sub(pivot[j].1.checked_mul(mult)?)?;
            if v != 0 {
                out.push((target[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

fn cokernel_sparse(m: &SparseMatrix) -> AbelianGroup {
    let mut rows: Vec<Vec<(usize, i64)>> = m.rows.clone();
    let mut row_alive: Vec<bool> = rows.iter().map(|r| !r.is_empty()).collect();
    let mut col_rows: Vec<HashSet<usize>> = vec![HashSet::new(); m.ncols];
    for (i, r) in rows.iter().enumerate() {
        for &(c, _) in r {
            col_rows[c].insert(i);
        }
    }
    let mut col_alive = vec![true; m.ncols];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        rows.iter().enumerate().filter(|(_, r)| !r.is_empty()).map(|(i, r)| Reverse((r.len(), i))).collect();

    // Phase A: unit pivots in i64, stopping at the first overflow.
    'phase_a: while let Some(Reverse((len, r))) = heap.pop() {
        if !row_alive[r] || rows[r].len() != len {
            continue;
        }
        let Some(&(c, piv)) = rows[r]
            .iter()
            .filter(|(_, v)| v.abs() == 1)
            .min_by_key(|(c, _)| col_rows[*c].len())
        else {
            continue;
        };
        let pivot_row = rows[r].clone();
        let others: Vec<usize> = col_rows[c].iter().copied().filter(|&o| o != r).collect();
        let mut updates = Vec::with_capacity(others.len());
        for &o in &others {
            let a = rows[o].iter().find(|e| e.0 == c).map(|e| e.1).unwrap();
            let Some(new_row) = a.checked_mul(piv).and_then(|mult| merge_rows(&rows[o], &pivot_row, mult)) else {
                break 'phase_a;
            };
            updates.push((o, new_row));
        }
        for (o, new_row) in updates {
            for &(cc, _) in &rows[o] {
                col_rows[cc].remove(&o);
            }
            for &(cc, _) in &new_row {
                col_rows[cc].insert(o);
            }
            rows[o] = new_row;
            if rows[o].is_empty() {
                row_alive[o] = false;
            } else {
                heap.push(Reverse((rows[o].len(), o)));
            }
        }
        for &(cc, _) in &pivot_row {
            col_rows[cc].remove(&r);
        }
        row_alive[r] = false;
        col_alive[c] = false;
    }

    // Phase B: dense Smith form of the remainder.
    let live_cols: Vec<usize> = (0..m.ncols).filter(|&c| col_alive[c]).collect();
    let used: Vec<usize> = live_cols.iter().copied().filter(|&c| !col_rows[c].is_empty()).collect();
    let free_unused = live_cols.len() - used.len();
    let pos: std::collections::HashMap<usize, usize> = used.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let dense: Vec<Vec<BigInt>> = (0..rows.len())
        .filter(|&i| row_alive[i] && !rows[i].is_empty())
        .map(|i| {
            let mut row = vec![BigInt::zero(); used.len()];
            for &(c, v) in &rows[i] {
                row[pos[&c]] = BigInt::from(v);
            }
            row
        })
        .collect();
    let diag = if dense.len().min(used.len()) > DENSE_EUCLID_MAX {
        smith_diagonal_modular(dense, used.len())
    } else {
        smith_diagonal(dense, used.len())
    };
    let zero_cols = used.len() - diag.len();
    AbelianGroup::from_diagonal(free_unused + zero_cols, diag)
}

/// Diagonal of a Smith-equivalent form; the returned entries are the nonzero
/// pivots (their count is the rank).
pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>, ncols: usize) -> Vec<BigInt> {
    let nrows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if v.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                    if v.abs().is_one() {
                        break;
                    }
                }
            }
            if best.is_some_and(|(bi, bj)| a[bi][bj].abs().is_one()) {
                break;
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                let (head, tail) = a.split_at_mut(i);
                let (prow, row) = (&head[t], &mut tail[0]);
                for j in t..ncols {
                    if !prow[j].is_zero() {
                        row[j] -= &q * &prow[j];
                    }
                }
                if !row[t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..ncols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    if !row[t].is_zero() {
                        let d = &q * &row[t];
                        row[j] -= d;
                    }
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
            // move the smallest remaining entry of row/column t to the pivot
            let mut bi = (t, t);
            for i in t + 1..nrows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[bi.0][bi.1].abs() {
                    bi = (i, t);
                }
            }
            for j in t + 1..ncols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[bi.0][bi.1].abs() {
                    bi = (t, j);
                }
            }
            if bi.0 != t {
                a.swap(t, bi.0);
            } else if bi.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, bi.1);
                }
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Dense remainders larger than this use the modular Smith form.
const DENSE_EUCLID_MAX: usize = 48;

/// Exact rank and a nonzero maximal minor (up to sign) by fraction-free
/// Bareiss elimination.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>, ncols: usize) -> (usize, BigInt) {
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(rank, p);
        let (head, tail) = a.split_at_mut(rank + 1);
        let prow = &head[rank];
        let piv = &prow[col];
        for row in tail.iter_mut() {
            let f = row[col].clone();
            for j in col + 1..ncols {
                let v = piv * &row[j] - &f * &prow[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    (rank, prev.abs())
}

fn sym_mod(v: &BigInt, m: &BigInt, half: &BigInt) -> BigInt {
    let r = v.mod_floor(m);
    if &r > half {
        r - m
    } else {
        r
    }
}

/// Smith diagonal computed modulo `m = 2|D|`, where `D` is a nonzero maximal
/// minor. Every nonzero elementary divisor divides `D`, so the invariant
/// factors of the reduced cokernel are those divisors followed by one copy
/// of `m` per free direction. Unit pivots are cleared in a single pass;
/// the remainder falls back to Euclidean steps.
pub fn smith_diagonal_modular(a: Vec<Vec<BigInt>>, ncols: usize) -> Vec<BigInt> {
    let (rank, d) = bareiss_rank(a.clone(), ncols);
    if rank == 0 {
        return Vec::new();
    }
    let m = &d * BigInt::from(2);
    let half = &d;
    let mut a: Vec<Vec<BigInt>> = a.into_iter().map(|r| r.iter().map(|v| v.mod_floor(&m)).collect()).collect();
    let nrows = a.len();
    let mut t = 0;
    let mut pivots = Vec::new();
    // unit pivots
    while t < nrows.min(ncols) {
        let found = (t..nrows).find_map(|i| (t..ncols).find(|&j| !a[i][j].is_zero() && a[i][j].gcd(&m).is_one()).map(|j| (i, j)));
        let Some((pi, pj)) = found else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let inv = a[t][t].modinv(&m).expect("unit");
        let (head, tail) = a.split_at_mut(t + 1);
        let prow = &head[t];
        for row in tail.iter_mut() {
            if row[t].is_zero() {
                continue;
            }
            let q = (&m - (&row[t] * &inv).mod_floor(&m)) % &m;
            for j in t + 1..ncols {
                if !prow[j].is_zero() {
                    row[j] = (&row[j] + &q * &prow[j]) % &m;
                }
            }
            row[t] = BigInt::zero();
        }
        pivots.push(BigInt::one());
        t += 1;
    }
    // Euclidean steps on what is left, in symmetric residues
    for row in a.iter_mut().skip(t) {
        for v in row.iter_mut().skip(t) {
            *v = sym_mod(v, &m, half);
        }
    }
    while t < nrows.min(ncols) {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                let (head, tail) = a.split_at_mut(i);
                let (prow, row) = (&head[t], &mut tail[0]);
                for j in t..ncols {
                    if !prow[j].is_zero() {
                        row[j] = sym_mod(&(&row[j] - &q * &prow[j]), &m, half);
                    }
                }
                dirty |= !row[t].is_zero();
            }
            for j in t + 1..ncols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    if !row[t].is_zero() {
                        row[j] = sym_mod(&(&row[j] - &q * &row[t]), &m, half);
                    }
                }
                dirty |= !a[t][j].is_zero();
            }
            if !dirty {
                break;
            }
            let mut bi = (t, t);
            for i in t + 1..nrows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[bi.0][bi.1].abs() {
                    bi = (i, t);
                }
            }
            for j in t + 1..ncols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[bi.0][bi.1].abs() {
                    bi = (t, j);
                }
            }
            if bi.0 != t {
                a.swap(t, bi.0);
            } else if bi.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, bi.1);
                }
            }
        }
        pivots.push(a[t][t].gcd(&m));
        t += 1;
    }
    let zero_cols = ncols - pivots.len();
    let chain = AbelianGroup::from_diagonal(0, pivots.into_iter().chain(std::iter::repeat_n(m.clone(), zero_cols)));
    let free = chain.torsion.iter().filter(|&e| e == &m).count();
    assert_eq!(free, ncols - rank, "modular Smith form disagrees with the exact rank");
    let mut diag: Vec<BigInt> = chain.torsion.into_iter().filter(|e| e != &m).collect();
    diag.resize(rank, BigInt::one());
    diag
}

/// Rank over ℚ of a dense integer matrix.
pub fn rank_int(m: &[Vec<i64>]) -> usize {
    let ncols = m.first().map_or(0, |r| r.len());
    let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    smith_diagonal(big, ncols).len()
}

impl AbelianGroup {
    /// Torsion order as `u128` when it fits.
    pub fn torsion_order_u128(&self) -> Option<u128> {
        self.torsion_order().to_u128()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(s: &str) -> AbelianGroup {
        s.parse().unwrap()
    }

    #[test]
    fn basic_cokernels() {
        assert_eq!(snf_int(&[vec![0]]), AbelianGroup::free(1));
        let d = snf_int(&[vec![2, 0], vec![0, 4]]);
        assert_eq!(d.free_rank, 0);
        assert_eq!(d.torsion, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(snf_int(&[vec![2, 0], vec![0, 3]]).torsion, vec![BigInt::from(6)]);
        assert_eq!(snf_int(&[vec![1, 1, 0]]), AbelianGroup::free(2));
    }

    #[test]
    fn notation_roundtrip() {
        assert_eq!(g("[0^{4},2^2]").to_string(), "[0^4, 2^2]");
        assert_eq!(g("[0,11,11]"), g("[0, 11^2]"));
        assert_eq!(g("[0^5,9,5]").to_string(), "[0^5, 9, 5]");
        assert_eq!(g("[0^{13},27,3,7^2,5^2,13]").to_string(), "[0^13, 3, 27, 5^2, 7^2, 13]");
        assert_eq!(g("[0^5,9,5]").torsion, vec![BigInt::from(45)]);
        assert_eq!(g("[0,6]"), g("[0,2,3]"));
        assert_ne!(g("[0,4]"), g("[0,2,2]"));
        assert_eq!(g("[0^{13},3,27,5^2,7^2,13]").torsion_order(), BigInt::from(3 * 27 * 25 * 49 * 13));
        assert!("0,2".parse::<AbelianGroup>().is_err());
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 2;
        let m = vec![vec![1, big, 0], vec![big, 1, 0], vec![0, big, 1]];
        let grp = snf_int(&m);
        // det = 1 - big^2 in the leading 2x2 block
        let expect = BigInt::from(big) * BigInt::from(big) - 1;
        assert_eq!(grp.free_rank, 0);
        assert_eq!(grp.torsion_order(), expect);
    }

    fn det_i64(m: &[Vec<i64>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            let minor: Vec<Vec<i64>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &v)| v).collect()).collect();
            let term = BigInt::from(m[0][j]) * det_i64(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    proptest! {
        #[test]
        fn order_is_abs_det(n in 1usize..5, seed in proptest::collection::vec(-6i64..7, 16)) {
            let m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| seed[i * 4 + j]).collect()).collect();
            let grp = snf_int(&m);
            let det = det_i64(&m);
            if det.is_zero() {
                prop_assert!(grp.free_rank > 0);
            } else {
                prop_assert_eq!(grp.free_rank, 0);
                prop_assert_eq!(grp.torsion_order(), det.abs());
            }
            for w in grp.torsion.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }

        #[test]
        fn free_rank_matches_rational_rank(rows in 1usize..6, cols in 1usize..6, seed in proptest::collection::vec(-3i64..4, 36)) {
            let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 6 + j]).collect()).collect();
            prop_assert_eq!(snf_int(&m).free_rank, cols - rank_int(&m));
        }

        #[test]
        fn modular_smith_agrees(rows in 1usize..7, cols in 1usize..7, seed in proptest::collection::vec(-9i64..10, 36)) {
            let m: Vec<Vec<BigInt>> = (0..rows).map(|i| (0..cols).map(|j| BigInt::from(seed[i * 6 + j] * (1 + (i as i64 % 3)))).collect()).collect();
            let exact = smith_diagonal(m.clone(), cols);
            let modular = smith_diagonal_modular(m, cols);
            prop_assert_eq!(exact.len(), modular.len());
            prop_assert_eq!(AbelianGroup::from_diagonal(0, exact), AbelianGroup::from_diagonal(0, modular));
        }

        #[test]
        fn display_parse_roundtrip(free in 0usize..4, tors in proptest::collection::vec(2u32..60, 0..5)) {
            let grp = AbelianGroup::from_diagonal(free, tors.into_iter().map(BigInt::from));
            prop_assert_eq!(grp.to_string().parse::<AbelianGroup>().unwrap(), grp);
        }
    }
}
