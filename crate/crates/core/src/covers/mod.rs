//! Finite covers of knot complements and their first homology.
//!
//! `X_ρ` is the regular cover of `ker ρ_α`, `Y_ρ` the cover of `ρ_α⁻¹(⟨α⟩)`
//! and `X_n` the `n`-fold cyclic cover.

pub mod rs;
pub mod table;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::algebra::laurent::LaurentPoly;
use crate::algebra::resultant::resultant;
use crate::algebra::snf::{AbelianGroup, SparseMatrix};
use crate::derham::AffineRep;
use crate::error::{Error, Result};
use crate::fox::gcd_q;
use crate::knot_io::{GroupPresentation, Word};

pub use rs::{rs_presentation, rs_relation_matrix, Schreier};
pub use table::{cyclic_table, kernel_table, preimage_alpha_table, CosetTable};

/// Size limits beyond which a cover is reported as skipped.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Budget {
    pub max_degree: usize,
    /// Limit on nonzero entries of the relation matrix.
    pub max_entries: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_degree: 200, max_entries: 4_000_000 }
    }
}

impl Budget {
    pub fn with_degree(max_degree: usize) -> Self {
        Budget { max_degree, ..Budget::default() }
    }

    pub fn check_degree(&self, degree: u64) -> Result<()> {
        if degree > self.max_degree as u64 {
            return Err(Error::BudgetExceeded(format!("degree {degree} > {}", self.max_degree)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverKind {
    Kernel,
    PreimageAlpha,
    Cyclic(u64),
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverHomology {
    pub kind: CoverKind,
    pub degree: usize,
    #[serde(serialize_with = "as_string")]
    pub h1: AbelianGroup,
    pub boundary_components: usize,
    pub peripheral_rank: usize,
    pub nonperipheral_rank: usize,
}

fn as_string<S: serde::Serializer>(g: &AbelianGroup, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&g.to_string())
}

pub fn build_table(pres: &GroupPresentation, rep: Option<&AffineRep>, kind: CoverKind) -> Result<CosetTable> {
    let need = || Error::InvalidParameters("this cover needs a representation".into());
    match kind {
        CoverKind::Kernel => kernel_table(pres, rep.ok_or_else(need)?),
        CoverKind::PreimageAlpha => preimage_alpha_table(pres, rep.ok_or_else(need)?),
        CoverKind::Cyclic(n) => cyclic_table(pres, n as usize),
    }
}

fn expected_degree(rep: Option<&AffineRep>, kind: CoverKind) -> u64 {
    match (kind, rep) {
        (CoverKind::Kernel, Some(r)) => r.image_order(),
        (CoverKind::PreimageAlpha, Some(r)) => r.field_order(),
        (CoverKind::Cyclic(n), _) => n,
        _ => 0,
    }
}

/// Orbits of `⟨μ, λ⟩` on the cosets, one boundary torus each, with the
/// generators `μ^a` and `λ^m μ^{-b}` of the stabilizer lattice at a
/// representative coset.
pub fn peripheral_lifts(tab: &CosetTable, meridian: &Word, longitude: &Word) -> Vec<(usize, Word, Word)> {
    let n = tab.degree();
    let mu: Vec<usize> = (0..n).map(|c| tab.trace(c, meridian)).collect();
    let la: Vec<usize> = (0..n).map(|c| tab.trace(c, longitude)).collect();
    let mut orbit = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if orbit[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut stack = vec![s];
        orbit[s] = id;
        while let Some(c) = stack.pop() {
            for d in [mu[c], la[c]] {
                if orbit[d] == usize::MAX {
                    orbit[d] = id;
                    stack.push(d);
                }
            }
        }
        // μ-cycle through s
        let mut cycle = vec![s];
        let mut c = mu[s];
        while c != s {
            cycle.push(c);
            c = mu[c];
        }
        let a = cycle.len();
        let mut m = 1;
        let mut c = la[s];
        let b = loop {
            if let Some(j) = cycle.iter().position(|&x| x == c) {
                break j;
            }
            c = la[c];
            m += 1;
        };
        let w1 = meridian.pow(a as i64);
        let w2 = longitude.pow(m).concat(&meridian.pow(-(b as i64)));
        out.push((s, w1, w2));
    }
    out
}

/// Boundary tori of the cover (orbits of the peripheral subgroup).
pub fn boundary_components(tab: &CosetTable, meridian: &Word, longitude: &Word) -> usize {
    peripheral_lifts(tab, meridian, longitude).len()
}

/// First homology of a cover, with boundary count and the rank of the
/// subspace of `H₁ ⊗ ℚ` spanned by the boundary tori.
pub fn cover_homology(
    pres: &GroupPresentation,
    rep: Option<&AffineRep>,
    kind: CoverKind,
    budget: &Budget,
) -> Result<CoverHomology> {
    budget.check_degree(expected_degree(rep, kind))?;
    let tab = build_table(pres, rep, kind)?;
    homology_of_table(pres, &tab, kind, budget)
}

pub fn homology_of_table(
    pres: &GroupPresentation,
    tab: &CosetTable,
    kind: CoverKind,
    budget: &Budget,
) -> Result<CoverHomology> {
    let sch = Schreier::new(tab);
    let rel = rs_relation_matrix(pres, tab, &sch);
    let entries: usize = rel.rows.iter().map(Vec::len).sum();
    if entries > budget.max_entries {
        return Err(Error::BudgetExceeded(format!("{entries} matrix entries > {}", budget.max_entries)));
    }
    let h1 = rel.cokernel();
    let meridian = Word::gen(pres.meridian_index);
    let (boundary_components, peripheral_rank) = match &pres.longitude {
        Some(lon) => {
            let lifts = peripheral_lifts(tab, &meridian, lon);
            let mut aug = rel.clone();
            for (c, w1, w2) in &lifts {
                for w in [w1, w2] {
                    let (v, end) = sch.rewrite_abelian(tab, *c, w);
                    debug_assert_eq!(end, *c);
                    aug.push_row(v);
                }
            }
            let with_boundary = aug.cokernel();
            (lifts.len(), h1.betti() - with_boundary.betti())
        }
        None => (0, 0),
    };
    Ok(CoverHomology {
        kind,
        degree: tab.degree(),
        nonperipheral_rank: h1.betti() - peripheral_rank,
        h1,
        boundary_components,
        peripheral_rank,
    })
}

/// Closed forms for the cyclic cover `X_n`: `β₁ = 1 + deg gcd(Δ, tⁿ − 1)` and
/// torsion order `|Res((tⁿ − 1)/c, Δ/c)|` with `c = gcd(Δ, tⁿ − 1)` over ℚ.
pub fn fox_cyclic_invariants(delta: &LaurentPoly, n: u64) -> Result<(usize, BigInt)> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    if delta.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = delta.canonical();
    let tn = &LaurentPoly::t_pow(n as i64) - &LaurentPoly::one();
    let c = gcd_q(&d, &tn);
    let betti = 1 + c.span();
    let h = tn.div_exact(&c).ok_or_else(|| Error::InvalidParameters("gcd does not divide t^n - 1".into()))?;
    let e = d.div_exact(&c).ok_or_else(|| Error::InvalidParameters("gcd does not divide Δ".into()))?;
    let torsion = if e.span() == 0 { BigInt::one() } else { resultant(&h, &e)?.abs() };
    Ok((betti, torsion))
}

/// The two-sided Betti estimate for `X_ρ` over `X_n`.
#[derive(Clone, Debug, Serialize)]
pub struct BettiSandwich {
    pub beta_rho: usize,
    pub beta_n: usize,
    pub field_order: u64,
    pub n: u64,
    pub lower: u64,
    /// Upper bound with `n(c_K − 1)` generators' worth of characters.
    pub upper_crossings: u64,
    /// Upper bound using the size `r` of the Reidemeister–Schreier
    /// presentation of `Γ_n` actually computed.
    pub upper_presentation: u64,
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub upper_presentation_ok: bool,
}

impl BettiSandwich {
    pub fn passed(&self) -> bool {
        self.lower_ok && self.upper_ok && self.upper_presentation_ok
    }
}

/// `r_gens` is the generator count of the presentation of `Γ_n`.
pub fn betti_sandwich(beta_rho: usize, beta_n: usize, field_order: u64, n: u64, c_k: usize, r_gens: usize) -> BettiSandwich {
    let q1 = field_order - 1;
    let lower = q1 + beta_n as u64;
    let upper_crossings = n * (c_k as u64 - 1) * q1 + beta_n as u64;
    let upper_presentation = (r_gens as u64 - 1) * q1 + beta_n as u64;
    let b = beta_rho as u64;
    BettiSandwich {
        beta_rho,
        beta_n,
        field_order,
        n,
        lower,
        upper_crossings,
        upper_presentation,
        lower_ok: lower <= b,
        upper_ok: b <= upper_crossings,
        upper_presentation_ok: b <= upper_presentation,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TorsionVerdict {
    Holds,
    Fails,
    BothFree,
}

/// Whether `|Tors H₁(X_ρ)| · p^d = |Tors H₁(X_n)|`.
pub fn torsion_ratio_check(upper: &AbelianGroup, lower: &AbelianGroup, field_order: u64) -> TorsionVerdict {
    if upper.is_torsion_free() && lower.is_torsion_free() {
        return TorsionVerdict::BothFree;
    }
    if upper.torsion_order() * BigInt::from(field_order) == lower.torsion_order() {
        TorsionVerdict::Holds
    } else {
        TorsionVerdict::Fails
    }
}

/// Generator count of the Reidemeister–Schreier presentation over a table.
pub fn rs_generator_count(pres: &GroupPresentation, degree: usize) -> usize {
    degree * (pres.num_generators - 1) + 1
}

/// Rank over ℚ of an integer matrix given sparsely.
pub fn rational_rank(m: &SparseMatrix) -> usize {
    m.ncols - m.cokernel().betti()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derham::reps_at_prime;
    use crate::knot::Knot;

    fn rep(k: &Knot, p: u64) -> AffineRep {
        reps_at_prime(&k.working, &k.delta, p).unwrap().remove(0).1
    }

    #[test]
    fn table_cells() {
        let k = Knot::builtin("3_1").unwrap();
        let r = rep(&k, 2);
        let up = cover_homology(&k.working, Some(&r), CoverKind::Kernel, &Budget::default()).unwrap();
        let low = cover_homology(&k.working, None, CoverKind::Cyclic(r.order_alpha), &Budget::default()).unwrap();
        assert_eq!((up.h1.to_string(), low.h1.to_string()), ("[0^4]".into(), "[0, 2^2]".into()));
        assert_eq!(up.boundary_components, 4);
        assert_eq!(low.boundary_components, 1);

        let k = Knot::builtin("4_1").unwrap();
        let r = rep(&k, 2);
        let up = cover_homology(&k.working, Some(&r), CoverKind::Kernel, &Budget::default()).unwrap();
        assert_eq!(up.h1.to_string(), "[0^4, 2^2]");
        assert_eq!(torsion_ratio_check(&up.h1, &"[0, 4^2]".parse().unwrap(), 4), TorsionVerdict::Holds);

        let k = Knot::builtin("6_1").unwrap();
        let r = rep(&k, 3);
        let up = cover_homology(&k.working, Some(&r), CoverKind::Kernel, &Budget::default()).unwrap();
        let low = cover_homology(&k.working, None, CoverKind::Cyclic(r.order_alpha), &Budget::default()).unwrap();
        assert_eq!((up.h1.to_string(), low.h1.to_string()), ("[0^3, 3]".into(), "[0, 9]".into()));
    }

    #[test]
    fn figure_eight_boundary() {
        let k = Knot::builtin("4_1").unwrap();
        let r = rep(&k, 11);
        let tab = kernel_table(&k.working, &r).unwrap();
        let lon = k.working.longitude.clone().unwrap();
        assert_eq!(boundary_components(&tab, &Word::gen(k.working.meridian_index), &lon), 11);
    }

    #[test]
    fn budget_skips() {
        let k = Knot::builtin("4_1").unwrap();
        let r = rep(&k, 11);
        let e = cover_homology(&k.working, Some(&r), CoverKind::Kernel, &Budget::with_degree(10)).unwrap_err();
        assert!(matches!(e, Error::BudgetExceeded(_)));
    }

    #[test]
    fn fox_closed_forms() {
        let fig8 = LaurentPoly::from_coeffs(&[1, -3, 1]);
        assert_eq!(fox_cyclic_invariants(&fig8, 3).unwrap(), (1, BigInt::from(16)));
        let tre = LaurentPoly::from_coeffs(&[1, -1, 1]);
        assert_eq!(fox_cyclic_invariants(&tre, 6).unwrap().0, 3);
        assert_eq!(fox_cyclic_invariants(&LaurentPoly::one(), 5).unwrap(), (1, BigInt::one()));
        assert_eq!(fox_cyclic_invariants(&tre, 0).unwrap_err(), Error::ZeroIndex);
    }

    #[test]
    fn peripheral_ranks() {
        let k = Knot::builtin("4_1").unwrap();
        for n in 1..=6 {
            let c = cover_homology(&k.working, None, CoverKind::Cyclic(n), &Budget::default()).unwrap();
            assert_eq!((c.h1.betti(), c.nonperipheral_rank), (1, 0), "n = {n}");
        }
        let u = Knot::builtin("unknot").unwrap();
        let c = cover_homology(&u.working, None, CoverKind::Cyclic(1), &Budget::default()).unwrap();
        assert_eq!(c.nonperipheral_rank, 0);
    }

    #[test]
    fn sandwich_arithmetic() {
        let v = betti_sandwich(3, 1, 3, 2, 3, 3);
        assert_eq!(v.lower, 3);
        assert!(v.passed());
        assert!(!betti_sandwich(2, 1, 3, 2, 3, 3).lower_ok);
    }
}
