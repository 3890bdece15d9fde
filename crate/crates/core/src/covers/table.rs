//! Coset tables: transitive right actions of the generators on `0..N`.

use crate::derham::AffineRep;
use crate::error::{Error, Result};
use crate::knot_io::{GroupPresentation, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    /// `action[g][c] = c · x_g`.
    pub action: Vec<Vec<usize>>,
    /// `inverse[g][c] = c · x_g⁻¹`.
    pub inverse: Vec<Vec<usize>>,
}

impl CosetTable {
    /// Builds a table from forward permutations, checking they are bijections.
    pub fn from_action(action: Vec<Vec<usize>>) -> Result<Self> {
        let n = action.first().map_or(1, Vec::len);
        let mut inverse = vec![vec![usize::MAX; n]; action.len()];
        for (g, perm) in action.iter().enumerate() {
            if perm.len() != n {
                return Err(Error::InvalidParameters("permutations of different sizes".into()));
            }
            for (c, &d) in perm.iter().enumerate() {
                if d >= n || inverse[g][d] != usize::MAX {
                    return Err(Error::InvalidParameters(format!("generator {} is not a bijection", g + 1)));
                }
                inverse[g][d] = c;
            }
        }
        Ok(CosetTable { action, inverse })
    }

    pub fn degree(&self) -> usize {
        self.action.first().map_or(1, Vec::len)
    }

    pub fn num_generators(&self) -> usize {
        self.action.len()
    }

    pub fn step(&self, c: usize, letter: i32) -> usize {
        let g = letter.unsigned_abs() as usize - 1;
        if letter > 0 {
            self.action[g][c]
        } else {
            self.inverse[g][c]
        }
    }

    pub fn trace(&self, c: usize, w: &Word) -> usize {
        w.letters().iter().fold(c, |c, &l| self.step(c, l))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.degree();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(c) = stack.pop() {
            for g in 0..self.num_generators() {
                for d in [self.action[g][c], self.inverse[g][c]] {
                    if !seen[d] {
                        seen[d] = true;
                        count += 1;
                        stack.push(d);
                    }
                }
            }
        }
        count == n
    }

    /// Every relator fixes every coset.
    pub fn respects(&self, pres: &GroupPresentation) -> bool {
        (0..self.degree()).all(|c| pres.relators.iter().all(|r| self.trace(c, r) == c))
    }

    /// Cycle lengths of the permutation induced by a word, sorted.
    pub fn cycle_type(&self, w: &Word) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut c = s;
            while !seen[c] {
                seen[c] = true;
                len += 1;
                c = self.trace(c, w);
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    /// Whether all generator permutations commute pairwise.
    pub fn is_abelian(&self) -> bool {
        let r = self.num_generators();
        (0..r).all(|a| {
            (a + 1..r).all(|b| (0..self.degree()).all(|c| self.action[b][self.action[a][c]] == self.action[a][self.action[b][c]]))
        })
    }

    fn checked(self, pres: &GroupPresentation) -> Result<Self> {
        if !self.is_transitive() {
            return Err(Error::TheoremViolation("coset action is not transitive".into()));
        }
        if !self.respects(pres) {
            return Err(Error::TheoremViolation("a relator acts nontrivially on the cosets".into()));
        }
        Ok(self)
    }
}

fn add_indices(a: usize, b: usize, p: usize, d: usize) -> usize {
    let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
    for _ in 0..d {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

/// Cosets of `ker ρ`: the elements `(k, b)` of `⟨α⟩ ⋉ 𝔽_{p^d}`, indexed
/// `k · p^d + index(b)`, acted on by right multiplication.
pub fn kernel_table(pres: &GroupPresentation, rep: &AffineRep) -> Result<CosetTable> {
    let n = rep.order_alpha as usize;
    let q = rep.field_order() as usize;
    let (p, d) = (rep.p() as usize, rep.d());
    let action = (0..pres.num_generators)
        .map(|g| {
            let w = rep.weights[g].rem_euclid(n as i64) as usize;
            let mut shifted = Vec::with_capacity(n);
            let mut cur = rep.translations[g].clone();
            for _ in 0..n {
                shifted.push(rep.field.index_of(&cur));
                cur = rep.field.mul(&cur, &rep.alpha);
            }
            let mut perm = vec![0; n * q];
            for k in 0..n {
                for b in 0..q {
                    perm[k * q + b] = ((k + w) % n) * q + add_indices(b, shifted[k], p, d);
                }
            }
            perm
        })
        .collect();
    CosetTable::from_action(action)?.checked(pres)
}

/// Cosets of `ρ⁻¹(⟨α⟩)`, identified with the points of 𝔽_{p^d} via
/// `z · g = ρ(g)⁻¹(z)`; the basepoint is `0`.
pub fn preimage_alpha_table(pres: &GroupPresentation, rep: &AffineRep) -> Result<CosetTable> {
    let action = (0..pres.num_generators)
        .map(|g| {
            let inv = rep.inverse(&rep.generator_image(g));
            rep.field.elements().map(|z| rep.field.index_of(&rep.apply(&inv, &z))).collect()
        })
        .collect();
    CosetTable::from_action(action)?.checked(pres)
}

/// Cosets of the kernel of `Γ → ℤ → ℤ/n`.
pub fn cyclic_table(pres: &GroupPresentation, n: usize) -> Result<CosetTable> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    let weights = pres.abelian_weights()?;
    let action = weights
        .iter()
        .map(|&w| (0..n).map(|c| (c as i64 + w).rem_euclid(n as i64) as usize).collect())
        .collect();
    CosetTable::from_action(action)?.checked(pres)
}
