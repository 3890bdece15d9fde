//! Finitely presented groups, Wirtinger presentations, Tietze moves and the
//! preferred longitude.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::diagram::KnotDiagram;
use crate::algebra::snf::{snf_int, AbelianGroup};
use crate::error::{Error, Result};

/// Word in the free group: `k > 0` is generator `k-1`, `-k` its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<i32>);

impl Word {
    pub fn new(letters: Vec<i32>) -> Self {
        let mut w = Word(letters);
        w.free_reduce();
        w
    }

    pub fn gen(g: usize) -> Self {
        Word(vec![g as i32 + 1])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn free_reduce(&mut self) {
        let mut out: Vec<i32> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        self.0 = out;
    }

    /// Free reduction followed by cyclic reduction.
    pub fn cyclic_reduce(&mut self) {
        self.free_reduce();
        let w = &self.0;
        let mut k = 0;
        while 2 * k + 1 < w.len() && w[k] == -w[w.len() - 1 - k] {
            k += 1;
        }
        self.0 = w[k..w.len() - k].to_vec();
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    pub fn concat(&self, o: &Word) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Word::new(v)
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word::new(v)
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, num_generators: usize) -> Vec<i64> {
        let mut v = vec![0i64; num_generators];
        for &l in &self.0 {
            v[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        v
    }

    /// Replace every occurrence of generator `g` by `image`.
    pub fn substitute(&self, g: usize, image: &Word) -> Self {
        let inv = image.inverse();
        let mut v = Vec::with_capacity(self.len());
        for &l in &self.0 {
            if l.unsigned_abs() as usize - 1 == g {
                v.extend_from_slice(if l > 0 { &image.0 } else { &inv.0 });
            } else {
                v.push(l);
            }
        }
        Word::new(v)
    }

    /// Renumber generators by `map[old] = new`.
    pub fn renumber(&self, map: &[usize]) -> Self {
        Word(
            self.0
                .iter()
                .map(|&l| {
                    let g = map[l.unsigned_abs() as usize - 1] as i32 + 1;
                    if l > 0 {
                        g
                    } else {
                        -g
                    }
                })
                .collect(),
        )
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&l| if l > 0 { format!("x{l}") } else { format!("x{}^-1", -l) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub num_generators: usize,
    pub relators: Vec<Word>,
    pub meridian_index: usize,
    pub longitude: Option<Word>,
    /// Crossing signs of the relators when the presentation is Wirtinger.
    pub signs: Option<Vec<i8>>,
}

impl GroupPresentation {
    pub fn new(num_generators: usize, relators: Vec<Word>) -> Self {
        GroupPresentation { num_generators, relators, meridian_index: 0, longitude: None, signs: None }
    }

    pub fn validate(&self) -> Result<()> {
        let words = self.relators.iter().chain(self.longitude.iter());
        for w in words {
            for &l in w.letters() {
                let g = l.unsigned_abs() as usize;
                if l == 0 || g > self.num_generators {
                    return Err(Error::GeneratorOutOfRange { index: g, count: self.num_generators });
                }
            }
        }
        if self.meridian_index >= self.num_generators && self.num_generators > 0 {
            return Err(Error::GeneratorOutOfRange { index: self.meridian_index, count: self.num_generators });
        }
        Ok(())
    }

    pub fn deficiency(&self) -> i64 {
        self.num_generators as i64 - self.relators.len() as i64
    }

    /// Relation matrix of the abelianization (rows = relators).
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators.iter().map(|r| r.exponent_sums(self.num_generators)).collect()
    }

    pub fn abelianization(&self) -> AbelianGroup {
        if self.relators.is_empty() {
            return AbelianGroup::free(self.num_generators);
        }
        snf_int(&self.exponent_matrix())
    }

    /// The homomorphism onto ℤ = H₁ sending the meridian to 1, as integer
    /// weights on the generators.
    pub fn abelian_weights(&self) -> Result<Vec<i64>> {
        if self.abelianization() != AbelianGroup::free(1) {
            return Err(Error::NotInfiniteCyclic);
        }
        // propagate from the meridian along relators that pin down one unknown
        let n = self.num_generators;
        let mut w: Vec<Option<i64>> = vec![None; n];
        w[self.meridian_index] = Some(1);
        let rows = self.exponent_matrix();
        let mut progress = true;
        while progress && w.iter().any(|x| x.is_none()) {
            progress = false;
            for row in &rows {
                let unknown: Vec<usize> = (0..n).filter(|&g| row[g] != 0 && w[g].is_none()).collect();
                if unknown.len() == 1 && row[unknown[0]].abs() == 1 {
                    let g = unknown[0];
                    let s: i64 = (0..n).filter(|&h| h != g).map(|h| row[h] * w[h].unwrap_or(0)).sum();
                    w[g] = Some(-s * row[g]);
                    progress = true;
                }
            }
        }
        if w.iter().all(|x| x.is_some()) {
            return Ok(w.into_iter().map(Option::unwrap).collect());
        }
        weights_by_kernel(&rows, n, self.meridian_index)
    }

    /// Wirtinger presentations: balanced, every relator of length 4.
    pub fn is_wirtinger(&self) -> bool {
        self.relators.len() == self.num_generators && self.relators.iter().all(|r| r.len() == 4)
    }
}

/// Integer kernel vector of the exponent matrix, scaled so the meridian has weight 1.
fn weights_by_kernel(rows: &[Vec<i64>], n: usize, meridian: usize) -> Result<Vec<i64>> {
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive, Zero};
    let mut a: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect()).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(rank, p);
        let inv = BigRational::one() / a[rank][col].clone();
        for j in 0..n {
            a[rank][j] = &a[rank][j] * &inv;
        }
        for i in 0..a.len() {
            if i != rank && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..n {
                    let d = &f * &a[rank][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    if free.len() != 1 {
        return Err(Error::NotInfiniteCyclic);
    }
    let mut v = vec![BigRational::zero(); n];
    v[free[0]] = BigRational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -a[r][free[0]].clone();
    }
    let scale = v[meridian].clone();
    if scale.is_zero() {
        return Err(Error::NotInfiniteCyclic);
    }
    v.iter()
        .map(|x| {
            let y = x / &scale;
            if !y.is_integer() {
                return Err(Error::NotInfiniteCyclic);
            }
            y.to_integer().to_i64().ok_or(Error::NotInfiniteCyclic)
        })
        .collect()
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = (1..=self.num_generators).map(|g| format!("x{g}")).collect();
        let rels: Vec<String> = self.relators.iter().map(|r| r.to_string()).collect();
        write!(f, "< {} | {} >", gens.join(", "), rels.join(", "))
    }
}

/// Arc index (0-based) of every edge label (1-based, index 0 unused).
fn arc_of_edges(d: &KnotDiagram) -> (Vec<usize>, Vec<usize>) {
    let n = d.crossing_count();
    let mut unders: Vec<(usize, usize)> = d.crossings.iter().enumerate().map(|(c, x)| (x[0], c)).collect();
    unders.sort_unstable();
    let mut arc = vec![0usize; 2 * n + 1];
    let mut passed = 0;
    for e in 1..=2 * n {
        arc[e] = passed % n;
        if passed < n && unders[passed].0 == e {
            passed += 1;
        }
    }
    (arc, unders.into_iter().map(|(_, c)| c).collect())
}

/// Wirtinger presentation: one generator per arc (numbered along the
/// orientation), one relator per crossing taken in traversal order.
///
/// Positive crossing: `x_i x_j x_{i+1}^-1 x_j^-1`; negative crossing:
/// `x_{i+1} x_j x_i^-1 x_j^-1`, where `x_j` is the over-arc.
pub fn wirtinger(d: &KnotDiagram) -> GroupPresentation {
    let n = d.crossing_count();
    let (arc, under_order) = arc_of_edges(d);
    let mut relators = Vec::with_capacity(n);
    let mut signs = Vec::with_capacity(n);
    for (i, &c) in under_order.iter().enumerate() {
        let x = d.crossings[c];
        let next = (i + 1) % n;
        let j = arc[x[1]];
        let (a, b, cc) = (i as i32 + 1, j as i32 + 1, next as i32 + 1);
        let word = if d.signs[c] > 0 { vec![a, b, -cc, -b] } else { vec![cc, b, -a, -b] };
        relators.push(Word(word));
        signs.push(d.signs[c]);
    }
    GroupPresentation {
        num_generators: n,
        relators,
        meridian_index: 0,
        longitude: Some(longitude_word(d)),
        signs: Some(signs),
    }
}

/// Preferred longitude: the over-arcs passed under while walking from the
/// start of arc 1, each with its crossing sign, times `x_1^(-writhe)`.
pub fn longitude_word(d: &KnotDiagram) -> Word {
    let (arc, under_order) = arc_of_edges(d);
    let mut letters = Vec::new();
    for &c in &under_order {
        let j = arc[d.crossings[c][1]] as i32 + 1;
        letters.push(if d.signs[c] > 0 { j } else { -j });
    }
    let w = d.writhe();
    letters.extend(std::iter::repeat_n(if w > 0 { -1 } else { 1 }, w.unsigned_abs() as usize));
    Word::new(letters)
}

/// Drops the last (redundant) Wirtinger relator and eliminates one generator
/// with the first relator, which expresses `x_2` as a conjugate of `x_1`.
/// Presentations of deficiency 1 with at most two generators are returned
/// unchanged.
pub fn simplify(pres: &GroupPresentation) -> Result<GroupPresentation> {
    if pres.deficiency() == 1 && pres.num_generators <= 2 {
        return Ok(pres.clone());
    }
    if !pres.is_wirtinger() {
        return Err(Error::NotWirtinger(format!(
            "{} generators, {} relators",
            pres.num_generators,
            pres.relators.len()
        )));
    }
    let n = pres.num_generators;
    if n == 1 {
        let mut out = pres.clone();
        out.relators.clear();
        out.signs = None;
        return Ok(out);
    }
    let mut out = pres.clone();
    out.relators.pop();
    out.signs = None;
    let mut first = out.relators[0].clone();
    first.free_reduce();
    let image = solve_for(&first, 1).ok_or_else(|| Error::NotWirtinger("first relator".into()))?;
    out = eliminate(&out, 0, 1, &image);
    Ok(out)
}

/// If generator `g` occurs exactly once in `r`, the word it equals.
fn solve_for(r: &Word, g: usize) -> Option<Word> {
    let l = r.letters();
    let pos: Vec<usize> = (0..l.len()).filter(|&k| l[k].unsigned_abs() as usize - 1 == g).collect();
    if pos.len() != 1 {
        return None;
    }
    let k = pos[0];
    // r = u g^e v = 1  =>  g^e = u^-1 v^-1
    let u = Word(l[..k].to_vec());
    let v = Word(l[k + 1..].to_vec());
    let rhs = u.inverse().concat(&v.inverse());
    Some(if l[k] > 0 { rhs } else { rhs.inverse() })
}

/// Removes relator `rel` and generator `g` (replaced by `image` everywhere).
fn eliminate(pres: &GroupPresentation, rel: usize, g: usize, image: &Word) -> GroupPresentation {
    let n = pres.num_generators;
    let map: Vec<usize> = (0..n).map(|h| if h > g { h - 1 } else { h }).collect();
    let fix = |w: &Word| {
        let mut s = w.substitute(g, image).renumber(&map);
        s.free_reduce();
        s
    };
    let relators: Vec<Word> = pres
        .relators
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != rel)
        .map(|(_, r)| {
            let mut w = fix(r);
            w.cyclic_reduce();
            w
        })
        .filter(|w| !w.is_empty())
        .collect();
    GroupPresentation {
        num_generators: n - 1,
        relators,
        meridian_index: map[pres.meridian_index],
        longitude: pres.longitude.as_ref().map(fix),
        signs: None,
    }
}

/// Greedy Tietze reduction: repeatedly eliminate a non-meridian generator
/// occurring exactly once in some relator, preferring short substitutions,
/// and drop empty or duplicate relators. Keeps the meridian and longitude.
pub fn tietze_reduce(pres: &GroupPresentation) -> GroupPresentation {
    let mut cur = pres.clone();
    cur.signs = None;
    for r in cur.relators.iter_mut() {
        r.cyclic_reduce();
    }
    cur.relators.retain(|r| !r.is_empty());
    loop {
        let mut best: Option<(usize, usize, Word, usize)> = None;
        for (ri, r) in cur.relators.iter().enumerate() {
            for g in 0..cur.num_generators {
                if g == cur.meridian_index {
                    continue;
                }
                if let Some(img) = solve_for(r, g) {
                    let occurrences: usize = cur
                        .relators
                        .iter()
                        .map(|w| w.letters().iter().filter(|l| l.unsigned_abs() as usize - 1 == g).count())
                        .sum();
                    let cost = img.len().saturating_sub(1) * occurrences;
                    if best.as_ref().is_none_or(|b| cost < b.3) {
                        best = Some((ri, g, img, cost));
                    }
                }
            }
        }
        let Some((ri, g, img, _)) = best else { break };
        cur = eliminate(&cur, ri, g, &img);
        let mut seen = std::collections::HashSet::new();
        cur.relators.retain(|r| seen.insert(r.clone()));
    }
    cur
}

/// Deficiency-one presentation used for cover computations: each Wirtinger
/// relator in turn is dropped and the rest Tietze-reduced; the result with
/// the fewest generators (then shortest relators) is kept.
pub fn working_presentation(pres: &GroupPresentation) -> GroupPresentation {
    if !pres.is_wirtinger() || pres.relators.is_empty() {
        return tietze_reduce(pres);
    }
    (0..pres.relators.len())
        .map(|i| {
            let mut q = pres.clone();
            q.relators.remove(i);
            tietze_reduce(&q)
        })
        .min_by_key(|q| (q.num_generators, q.relators.iter().map(Word::len).sum::<usize>()))
        .expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot_io::diagram::parse_pd;

    fn trefoil() -> KnotDiagram {
        parse_pd("[[6,4,1,3],[2,6,3,5],[4,2,5,1]]").unwrap()
    }

    fn figure_eight() -> KnotDiagram {
        parse_pd("[[8,4,1,3],[2,5,3,6],[4,8,5,7],[6,1,7,2]]").unwrap()
    }

    #[test]
    fn word_ops() {
        let w = Word::new(vec![1, 2, -2, 3, -1]);
        assert_eq!(w.0, vec![1, 3, -1]);
        let mut c = w.clone();
        c.cyclic_reduce();
        assert_eq!(c.0, vec![3]);
        assert_eq!(w.inverse().0, vec![1, -3, -1]);
        assert_eq!(Word(vec![1, 2]).substitute(1, &Word(vec![3, -1])).0, vec![1, 3, -1]);
        assert_eq!(Word(vec![-2]).substitute(1, &Word(vec![3, -1])).0, vec![1, -3]);
    }

    #[test]
    fn trefoil_wirtinger() {
        let p = wirtinger(&trefoil());
        assert_eq!(p.num_generators, 3);
        assert_eq!(p.relators.len(), 3);
        assert!(p.is_wirtinger());
        for r in &p.relators {
            let l = r.letters();
            assert!(l[0] > 0 && l[1] > 0 && l[2] < 0 && l[3] == -l[1]);
        }
        assert_eq!(p.abelianization(), AbelianGroup::free(1));
        assert_eq!(p.abelian_weights().unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn longitudes_are_null_homologous() {
        for d in [trefoil(), figure_eight(), parse_pd("PD[X[1,1,2,2]]").unwrap()] {
            let l = longitude_word(&d);
            let n = d.crossing_count();
            assert_eq!(l.exponent_sums(n).iter().sum::<i64>(), 0);
        }
    }

    #[test]
    fn simplify_counts() {
        let t = simplify(&wirtinger(&trefoil())).unwrap();
        assert_eq!((t.num_generators, t.relators.len()), (2, 1));
        assert_eq!(simplify(&t).unwrap(), t);
        let f = simplify(&wirtinger(&figure_eight())).unwrap();
        assert_eq!((f.num_generators, f.relators.len()), (3, 2));
        assert_eq!(f.abelianization(), AbelianGroup::free(1));
        let w = working_presentation(&wirtinger(&figure_eight()));
        assert_eq!((w.num_generators, w.deficiency()), (2, 1));
        let bad = GroupPresentation::new(3, vec![Word(vec![1, 2])]);
        assert!(simplify(&bad).is_err());
    }

    #[test]
    fn kink_is_infinite_cyclic() {
        let p = wirtinger(&parse_pd("PD[X[1,1,2,2]]").unwrap());
        assert_eq!(p.abelianization(), AbelianGroup::free(1));
        let t = tietze_reduce(&p);
        assert_eq!(t.num_generators, 1);
        assert!(t.relators.is_empty());
    }

    #[test]
    fn tietze_keeps_deficiency_one() {
        let t = tietze_reduce(&wirtinger(&figure_eight()));
        assert_eq!(t.abelianization(), AbelianGroup::free(1));
        assert!(t.num_generators <= 3);
    }
}
