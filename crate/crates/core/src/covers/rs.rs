//! Reidemeister–Schreier rewriting over a coset table.

use std::collections::VecDeque;

use super::table::CosetTable;
use crate::algebra::snf::SparseMatrix;
use crate::knot_io::{GroupPresentation, Word};

/// Breadth-first spanning tree of the coset graph and the resulting
/// numbering of Schreier generators `s_{c,g} = t_c x_g t_{c·g}⁻¹`.
#[derive(Clone, Debug)]
pub struct Schreier {
    pub degree: usize,
    pub num_generators: usize,
    /// Transversal word `t_c` for every coset.
    pub transversal: Vec<Word>,
    /// `column[c * r + g]`: index of `s_{c,g}` among the Schreier
    /// generators, or `None` for tree edges (trivial generators).
    pub column: Vec<Option<usize>>,
    /// `(c, g)` for each Schreier generator, in numbering order.
    pub pairs: Vec<(usize, usize)>,
}

impl Schreier {
    /// Transversal by BFS from coset 0, trying generators in order, each
    /// forward then backward.
    pub fn new(tab: &CosetTable) -> Self {
        let n = tab.degree();
        let r = tab.num_generators();
        let mut transversal: Vec<Option<Word>> = vec![None; n];
        let mut tree = vec![false; n * r];
        transversal[0] = Some(Word::default());
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            let tc = transversal[c].clone().expect("visited");
            for g in 0..r {
                let fwd = tab.action[g][c];
                if transversal[fwd].is_none() {
                    transversal[fwd] = Some(tc.concat(&Word::gen(g)));
                    tree[c * r + g] = true;
                    queue.push_back(fwd);
                }
                let back = tab.inverse[g][c];
                if transversal[back].is_none() {
                    transversal[back] = Some(tc.concat(&Word::gen(g).inverse()));
                    tree[back * r + g] = true;
                    queue.push_back(back);
                }
            }
        }
        let mut column = vec![None; n * r];
        let mut pairs = Vec::with_capacity(n * (r.max(1) - 1) + 1);
        for c in 0..n {
            for g in 0..r {
                if !tree[c * r + g] {
                    column[c * r + g] = Some(pairs.len());
                    pairs.push((c, g));
                }
            }
        }
        Schreier {
            degree: n,
            num_generators: r,
            transversal: transversal.into_iter().map(|t| t.expect("transitive table")).collect(),
            column,
            pairs,
        }
    }

    pub fn num_schreier_generators(&self) -> usize {
        self.pairs.len()
    }

    /// `t_c x_g t_{c·g}⁻¹` as a word in the original generators.
    pub fn schreier_word(&self, tab: &CosetTable, s: usize) -> Word {
        let (c, g) = self.pairs[s];
        self.transversal[c].concat(&Word::gen(g)).concat(&self.transversal[tab.action[g][c]].inverse())
    }

    /// Rewrites `w` read from coset `c` as signed Schreier generators;
    /// returns the letters and the end coset.
    pub fn rewrite(&self, tab: &CosetTable, c: usize, w: &Word) -> (Vec<i32>, usize) {
        let r = self.num_generators;
        let mut out = Vec::new();
        let mut cur = c;
        for &l in w.letters() {
            let g = l.unsigned_abs() as usize - 1;
            if l > 0 {
                if let Some(s) = self.column[cur * r + g] {
                    out.push(s as i32 + 1);
                }
                cur = tab.action[g][cur];
            } else {
                cur = tab.inverse[g][cur];
                if let Some(s) = self.column[cur * r + g] {
                    out.push(-(s as i32 + 1));
                }
            }
        }
        (out, cur)
    }

    /// Abelianized rewrite: `(column, coefficient)` pairs.
    pub fn rewrite_abelian(&self, tab: &CosetTable, c: usize, w: &Word) -> (Vec<(usize, i64)>, usize) {
        let (letters, end) = self.rewrite(tab, c, w);
        let v = letters.iter().map(|&l| (l.unsigned_abs() as usize - 1, l.signum() as i64)).collect();
        (v, end)
    }
}

/// Presentation of the subgroup: one generator per non-tree `(c, g)` and one
/// rewritten relator per (relator, coset).
pub fn rs_presentation(pres: &GroupPresentation, tab: &CosetTable) -> GroupPresentation {
    let sch = Schreier::new(tab);
    let mut relators = Vec::with_capacity(pres.relators.len() * tab.degree());
    for r in &pres.relators {
        for c in 0..tab.degree() {
            let (letters, end) = sch.rewrite(tab, c, r);
            debug_assert_eq!(end, c);
            relators.push(Word::new(letters));
        }
    }
    GroupPresentation::new(sch.num_schreier_generators(), relators)
}

/// Relation matrix of the abelianized subgroup presentation.
pub fn rs_relation_matrix(pres: &GroupPresentation, tab: &CosetTable, sch: &Schreier) -> SparseMatrix {
    let mut m = SparseMatrix::new(sch.num_schreier_generators());
    for r in &pres.relators {
        for c in 0..tab.degree() {
            let (v, _) = sch.rewrite_abelian(tab, c, r);
            m.push_row(v);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::table::cyclic_table;
    use crate::knot::Knot;

    #[test]
    fn degree_one_is_identity() {
        let k = Knot::builtin("4_1").unwrap();
        let tab = cyclic_table(&k.working, 1).unwrap();
        let rs = rs_presentation(&k.working, &tab);
        assert_eq!(rs.num_generators, k.working.num_generators);
        assert_eq!(rs.relators, k.working.relators);
    }

    #[test]
    fn euler_characteristic() {
        let k = Knot::builtin("3_1").unwrap();
        assert_eq!((k.working.num_generators, k.working.relators.len()), (2, 1));
        let tab = cyclic_table(&k.working, 2).unwrap();
        let rs = rs_presentation(&k.working, &tab);
        assert_eq!((rs.num_generators, rs.relators.len()), (3, 2));
        let k = Knot::builtin("4_1").unwrap();
        let tab = cyclic_table(&k.working, 3).unwrap();
        assert_eq!(rs_presentation(&k.working, &tab).abelianization().to_string(), "[0, 4^2]");
    }

    #[test]
    fn schreier_words_lie_in_subgroup() {
        let k = Knot::builtin("5_2").unwrap();
        let tab = cyclic_table(&k.working, 4).unwrap();
        let sch = Schreier::new(&tab);
        assert_eq!(sch.num_schreier_generators(), 4 * (k.working.num_generators - 1) + 1);
        for s in 0..sch.num_schreier_generators() {
            assert_eq!(tab.trace(0, &sch.schreier_word(&tab, s)), 0);
        }
    }
}
