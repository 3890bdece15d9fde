//! Low-index subgroups of a finitely presented group by coset-table
//! backtracking, and the smallest degree of a non-cyclic cover of a knot
//! complement.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::algebra::factor::factor_modp;
use crate::algebra::integer::{factor_u64, primes_up_to};
use crate::covers::CosetTable;
use crate::derham::reps_at_prime;
use crate::error::{Error, Result};
use crate::knot::Knot;
use crate::knot_io::GroupPresentation;

/// Largest index the enumeration accepts.
pub const MAX_INDEX: usize = 10;
/// Default index cap.
pub const DEFAULT_CAP: usize = 8;

const NONE: u8 = u8::MAX;

/// Partial coset table; column `2g` is `x_g`, column `2g + 1` is `x_g⁻¹`.
#[derive(Clone)]
struct Partial {
    cols: usize,
    rows: Vec<u8>,
    used: usize,
}

fn col(letter: i32) -> usize {
    let g = letter.unsigned_abs() as usize - 1;
    if letter > 0 {
        2 * g
    } else {
        2 * g + 1
    }
}

impl Partial {
    fn new(num_generators: usize, max: usize) -> Self {
        let cols = 2 * num_generators;
        Partial { cols, rows: vec![NONE; cols * max], used: 1 }
    }

    fn get(&self, c: usize, x: usize) -> u8 {
        self.rows[c * self.cols + x]
    }

    /// Sets `c·x = d` and `d·x⁻¹ = c`; false on a clash.
    fn set(&mut self, c: usize, x: usize, d: usize) -> bool {
        let xi = x ^ 1;
        let (a, b) = (self.get(c, x), self.get(d, xi));
        if (a != NONE && a as usize != d) || (b != NONE && b as usize != c) {
            return false;
        }
        self.rows[c * self.cols + x] = d as u8;
        self.rows[d * self.cols + xi] = c as u8;
        true
    }

    /// Scans one relator from coset `c`, deducing a single missing entry.
    /// Returns `None` on a clash, otherwise whether something was deduced.
    fn scan(&mut self, c: usize, rel: &[usize]) -> Option<bool> {
        let len = rel.len();
        let (mut f, mut i) = (c, 0);
        while i < len {
            let n = self.get(f, rel[i]);
            if n == NONE {
                break;
            }
            f = n as usize;
            i += 1;
        }
        if i == len {
            return (f == c).then_some(false);
        }
        let (mut b, mut j) = (c, len);
        while j > i {
            let n = self.get(b, rel[j - 1] ^ 1);
            if n == NONE {
                break;
            }
            b = n as usize;
            j -= 1;
        }
        if j == i {
            (f == b).then_some(false)
        } else if j == i + 1 {
            self.set(f, rel[i], b).then_some(true)
        } else {
            Some(false)
        }
    }

    fn close(&mut self, rels: &[Vec<usize>]) -> bool {
        loop {
            let mut changed = false;
            for c in 0..self.used {
                for r in rels {
                    match self.scan(c, r) {
                        None => return false,
                        Some(d) => changed |= d,
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn first_gap(&self) -> Option<(usize, usize)> {
        (0..self.used * self.cols).find(|&i| self.rows[i] == NONE).map(|i| (i / self.cols, i % self.cols))
    }

    fn complete(&self) -> Vec<u8> {
        self.rows[..self.used * self.cols].to_vec()
    }
}

/// Renumbers a complete table from basepoint `b` in first-appearance order.
fn standardize(rows: &[u8], cols: usize, b: usize) -> Vec<u8> {
    let n = rows.len() / cols;
    let mut map = vec![NONE; n];
    let mut order = vec![b];
    map[b] = 0;
    let mut i = 0;
    while i < order.len() {
        let c = order[i];
        for x in 0..cols {
            let d = rows[c * cols + x] as usize;
            if map[d] == NONE {
                map[d] = order.len() as u8;
                order.push(d);
            }
        }
        i += 1;
    }
    let map = &map;
    order.iter().flat_map(|&c| (0..cols).map(move |x| map[rows[c * cols + x] as usize])).collect()
}

fn is_class_minimal(rows: &[u8], cols: usize) -> bool {
    let n = rows.len() / cols;
    (1..n).all(|b| standardize(rows, cols, b).as_slice() >= rows)
}

fn to_coset_table(rows: &[u8], cols: usize) -> CosetTable {
    let n = rows.len() / cols;
    let action = (0..cols / 2).map(|g| (0..n).map(|c| rows[c * cols + 2 * g] as usize).collect()).collect();
    CosetTable::from_action(action).expect("complete tables are permutations")
}

fn from_coset_table(tab: &CosetTable) -> Vec<u8> {
    let n = tab.degree();
    let r = tab.num_generators();
    (0..n).flat_map(|c| (0..r).flat_map(move |g| [tab.action[g][c] as u8, tab.inverse[g][c] as u8])).collect()
}

/// Class representative of the conjugacy class of a transitive table:
/// the least standardized table over all basepoints.
pub fn class_form(tab: &CosetTable) -> Vec<u8> {
    let rows = from_coset_table(tab);
    let cols = 2 * tab.num_generators();
    (0..tab.degree()).map(|b| standardize(&rows, cols, b)).min().expect("nonempty")
}

#[derive(Clone, Debug, Serialize)]
pub struct SubgroupRecord {
    pub index: usize,
    #[serde(skip)]
    pub table: CosetTable,
    pub is_cyclic_cover: bool,
    /// Position among the enumerated classes.
    pub class_id: usize,
}

/// Every subgroup of index at most `max_index` (one table per subgroup,
/// standardized from the basepoint).
pub fn enumerate_subgroups(pres: &GroupPresentation, max_index: usize) -> Result<Vec<CosetTable>> {
    Ok(search(pres, max_index, false)?.into_iter().map(|(rows, cols)| to_coset_table(&rows, cols)).collect())
}

fn search(pres: &GroupPresentation, max_index: usize, classes: bool) -> Result<Vec<(Vec<u8>, usize)>> {
    if max_index > MAX_INDEX {
        return Err(Error::CapExceeded { cap: max_index, max: MAX_INDEX });
    }
    if max_index == 0 {
        return Err(Error::ZeroIndex);
    }
    let rels: Vec<Vec<usize>> = pres.relators.iter().map(|r| r.letters().iter().map(|&l| col(l)).collect()).collect();
    let start = Partial::new(pres.num_generators, max_index);
    let cols = start.cols;
    let mut out = Vec::new();
    let mut stack = vec![start];
    while let Some(mut t) = stack.pop() {
        if !t.close(&rels) {
            continue;
        }
        let Some((c, x)) = t.first_gap() else {
            let rows = t.complete();
            if !classes || is_class_minimal(&rows, cols) {
                out.push((rows, cols));
            }
            continue;
        };
        // push in reverse so that smaller choices are explored first
        if t.used < max_index {
            let mut next = t.clone();
            let d = next.used;
            next.used += 1;
            if next.set(c, x, d) {
                stack.push(next);
            }
        }
        for d in (0..t.used).rev() {
            if t.get(d, x ^ 1) == NONE {
                let mut next = t.clone();
                if next.set(c, x, d) {
                    stack.push(next);
                }
            }
        }
    }
    out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    Ok(out)
}

/// One record per conjugacy class of subgroups of index at most
/// `max_index`, ordered by index.
pub fn low_index_subgroups(pres: &GroupPresentation, max_index: usize) -> Result<Vec<SubgroupRecord>> {
    Ok(search(pres, max_index, true)?
        .into_iter()
        .enumerate()
        .map(|(class_id, (rows, cols))| {
            let table = to_coset_table(&rows, cols);
            SubgroupRecord { index: table.degree(), is_cyclic_cover: table.is_abelian(), table, class_id }
        })
        .collect())
}

/// The cover factors through `Γ → ℤ → ℤ/k`: since the generators are
/// conjugate meridians, an abelian transitive image is cyclic.
pub fn is_cyclic_cover(rec: &SubgroupRecord) -> bool {
    rec.table.is_abelian()
}

/// The cover `Y_ρ` of least degree `p^d` over primes `≤ max_prime`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BestY {
    pub p: u64,
    pub d: usize,
    pub degree: u64,
}

pub fn best_y(knot: &Knot, max_prime: u64) -> Result<Option<BestY>> {
    let mut best: Option<BestY> = None;
    for p in primes_up_to(max_prime) {
        let reps = match reps_at_prime(&knot.working, &knot.delta, p) {
            Ok(r) => r,
            Err(Error::NoRepresentation(_)) => continue,
            Err(e) => return Err(e),
        };
        for (_, r) in reps {
            if best.as_ref().is_none_or(|b| r.field_order() < b.degree) {
                best = Some(BestY { p, d: r.d(), degree: r.field_order() });
            }
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimalReport {
    pub knot: String,
    pub cap: usize,
    /// Smallest index of a non-cyclic cover, if one exists within the cap.
    pub degree: Option<usize>,
    pub best_y: Option<BestY>,
    /// Whether some `Y_ρ` realizes the minimal degree.
    pub matches_y: Option<bool>,
    /// Δ modulo each prime dividing the minimal degree.
    pub factorizations: Vec<String>,
}

impl MinimalReport {
    pub fn line(&self) -> String {
        match self.degree {
            None => format!("{}: none ≤ {}", self.knot, self.cap),
            Some(m) => {
                let verdict = if self.matches_y == Some(true) { "Yes" } else { "No" };
                format!("{}, {}: {}, {}", self.knot, m, verdict, self.factorizations.join(", "))
            }
        }
    }
}

/// Searches indices `2, 3, …, cap` in turn for a non-cyclic class.
pub fn minimal_noncyclic_degree(knot: &Knot, cap: usize) -> Result<MinimalReport> {
    if cap > MAX_INDEX {
        return Err(Error::CapExceeded { cap, max: MAX_INDEX });
    }
    let mut degree = None;
    for k in 2..=cap {
        let found = search(&knot.working, k, true)?
            .into_iter()
            .any(|(rows, cols)| rows.len() / cols == k && !to_coset_table(&rows, cols).is_abelian());
        if found {
            degree = Some(k);
            break;
        }
    }
    let best = best_y(knot, 13)?;
    let factorizations = match degree {
        Some(m) => factor_u64(m as u64)
            .into_iter()
            .map(|(p, _)| factor_modp(&knot.delta.reduce_mod(p)).map(|f| f.to_string()))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let matches_y = degree.zip(best.as_ref()).map(|(m, b)| b.degree == m as u64);
    Ok(MinimalReport { knot: knot.name.clone(), cap, degree, best_y: best, matches_y, factorizations })
}

/// Number of transitive homomorphisms to `S_k`, by brute force over all
/// assignments of permutations to generators.
pub fn count_transitive_actions(pres: &GroupPresentation, k: usize) -> usize {
    let perms = permutations(k);
    let r = pres.num_generators;
    let mut idx = vec![0usize; r];
    let mut count = 0;
    loop {
        let action: Vec<Vec<usize>> = idx.iter().map(|&i| perms[i].clone()).collect();
        let tab = CosetTable::from_action(action).expect("permutations");
        if tab.respects(pres) && tab.is_transitive() {
            count += 1;
        }
        let mut g = 0;
        loop {
            if g == r {
                return count;
            }
            idx[g] += 1;
            if idx[g] < perms.len() {
                break;
            }
            idx[g] = 0;
            g += 1;
        }
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    fn rec(i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for j in i..cur.len() {
            cur.swap(i, j);
            rec(i + 1, cur, out);
            cur.swap(i, j);
        }
    }
    rec(0, &mut cur, &mut out);
    out
}

/// Distinct class forms, for membership tests.
pub fn class_set(records: &[SubgroupRecord]) -> BTreeSet<Vec<u8>> {
    records.iter().map(|r| class_form(&r.table)).collect()
}
