//! Metabelian representations `ρ_α: Γ_K → Aff(𝔽_{p^d})`, `x ↦ α^{w(x)} z + y_x`.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::algebra::factor::factor_modp;
use crate::algebra::field::{make_field, FieldElem, FiniteField};
use crate::algebra::fp_poly::PolyFp;
use crate::algebra::laurent::LaurentPoly;
use crate::error::{Error, Result};
use crate::fox::jacobian_with_weights;
use crate::knot_io::presentation::{GroupPresentation, Word};

/// Images above this size are checked structurally instead of by closure.
pub const CLOSURE_LIMIT: u64 = 2_000_000;

/// An irreducible factor `g ≠ t` of Δ mod p and the root it defines.
#[derive(Clone, Debug, Serialize)]
pub struct RootInfo {
    pub factor: PolyFp,
    pub multiplicity: u32,
    pub d: usize,
    /// Multiplicative order of the class of `t` in 𝔽_p[t]/(g).
    pub order: u64,
}

/// Factors `delta_p` and lists its nonzero roots, one per irreducible factor.
pub fn roots_of_delta_modp(delta_p: &PolyFp) -> Result<Vec<RootInfo>> {
    let p = delta_p.p();
    if delta_p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let fac = factor_modp(delta_p)?;
    let mut out = Vec::new();
    for (g, e) in fac.nonzero_root_factors() {
        let field = make_field(p, &g)?;
        let order = field.mult_order(&field.alpha())?;
        out.push(RootInfo { d: g.deg(), factor: g, multiplicity: e, order });
    }
    if out.is_empty() {
        return Err(Error::NoRepresentation(p));
    }
    Ok(out)
}

/// `z ↦ α^k z + b`, with `k` taken modulo the order of α.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineElem {
    pub k: u64,
    pub b: FieldElem,
}

#[derive(Clone, Debug)]
pub struct AffineRep {
    pub field: FiniteField,
    pub alpha: FieldElem,
    /// Multiplicative order `n` of α.
    pub order_alpha: u64,
    /// Exponent of α attached to each generator (its abelianization).
    pub weights: Vec<i64>,
    pub translations: Vec<FieldElem>,
    pub meridian_index: usize,
}

#[derive(Serialize)]
struct RepJson {
    p: u64,
    modulus: Vec<u64>,
    alpha_coords: Vec<u64>,
    translations: Vec<Vec<u64>>,
    order: u64,
}

impl AffineRep {
    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn d(&self) -> usize {
        self.field.degree()
    }

    /// `p^d`, the size of the translation subgroup.
    pub fn field_order(&self) -> u64 {
        self.field.order()
    }

    /// `n · p^d`, the order of `⟨α⟩ ⋉ 𝔽_{p^d}`.
    pub fn image_order(&self) -> u64 {
        self.order_alpha * self.field_order()
    }

    pub fn alpha_pow(&self, k: i64) -> FieldElem {
        self.field.pow(&self.alpha, k.rem_euclid(self.order_alpha as i64) as u64)
    }

    pub fn identity(&self) -> AffineElem {
        AffineElem { k: 0, b: self.field.zero() }
    }

    pub fn compose(&self, a: &AffineElem, b: &AffineElem) -> AffineElem {
        let shifted = self.field.mul(&self.alpha_pow(a.k as i64), &b.b);
        AffineElem { k: (a.k + b.k) % self.order_alpha, b: self.field.add(&a.b, &shifted) }
    }

    pub fn inverse(&self, a: &AffineElem) -> AffineElem {
        let k = (self.order_alpha - a.k) % self.order_alpha;
        AffineElem { k, b: self.field.neg(&self.field.mul(&self.alpha_pow(k as i64), &a.b)) }
    }

    pub fn apply(&self, a: &AffineElem, z: &FieldElem) -> FieldElem {
        self.field.add(&self.field.mul(&self.alpha_pow(a.k as i64), z), &a.b)
    }

    pub fn generator_image(&self, g: usize) -> AffineElem {
        AffineElem { k: self.weights[g].rem_euclid(self.order_alpha as i64) as u64, b: self.translations[g].clone() }
    }

    pub fn letter_image(&self, x: i32) -> AffineElem {
        let e = self.generator_image(x.unsigned_abs() as usize - 1);
        if x > 0 {
            e
        } else {
            self.inverse(&e)
        }
    }

    /// Image of a word; the rightmost letter acts first.
    pub fn word_image(&self, w: &Word) -> AffineElem {
        w.letters().iter().fold(self.identity(), |acc, &x| self.compose(&acc, &self.letter_image(x)))
    }

    /// `g ↦ c ρ(g) c⁻¹`.
    pub fn conjugate(&self, c: &AffineElem) -> AffineRep {
        let ci = self.inverse(c);
        let translations = (0..self.translations.len())
            .map(|g| self.compose(&self.compose(c, &self.generator_image(g)), &ci).b)
            .collect();
        AffineRep { translations, ..self.clone() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RepJson {
            p: self.p(),
            modulus: self.field.modulus().coeffs().to_vec(),
            alpha_coords: self.alpha.coords.clone(),
            translations: self.translations.iter().map(|y| y.coords.clone()).collect(),
            order: self.image_order(),
        })
        .expect("serializable")
    }
}

fn eval_at(field: &FiniteField, f: &LaurentPoly, alpha: &FieldElem) -> FieldElem {
    let p = BigInt::from(field.p());
    let mut acc = field.zero();
    for (i, c) in f.coeffs().iter().enumerate() {
        let c = u64::try_from(c.mod_floor(&p)).expect("reduced");
        if c != 0 {
            let term = field.pow_signed(alpha, f.low() + i as i64);
            acc = field.add(&acc, &field.scale(&term, c));
        }
    }
    acc
}

/// Basis of the right null space over the field, in reduced echelon form,
/// ordered by free column.
fn null_space(field: &FiniteField, mut m: Vec<Vec<FieldElem>>, ncols: usize) -> Vec<Vec<FieldElem>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(piv) = (row..m.len()).find(|&i| !field.is_zero(&m[i][col])) else { continue };
        m.swap(row, piv);
        let inv = field.inv(&m[row][col]).expect("nonzero");
        m[row] = m[row].iter().map(|e| field.mul(e, &inv)).collect();
        for i in 0..m.len() {
            if i != row && !field.is_zero(&m[i][col]) {
                let f = m[i][col].clone();
                for j in 0..ncols {
                    let d = field.mul(&f, &m[row][j]);
                    m[i][j] = field.sub(&m[i][j], &d);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![field.zero(); ncols];
            v[free] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(&m[r][free]);
            }
            v
        })
        .collect()
}

/// Builds `ρ_α` for α the class of `t` modulo the irreducible factor `g`,
/// normalized so that the meridian is `z ↦ αz` and the first nonzero
/// translation is 1. The result is verified before it is returned.
pub fn build_rep(pres: &GroupPresentation, p: u64, g: &PolyFp) -> Result<AffineRep> {
    let field = make_field(p, g)?;
    let alpha = field.alpha();
    if field.is_zero(&alpha) {
        return Err(Error::InvalidParameters("factor t has no nonzero root".into()));
    }
    let weights = pres.abelian_weights()?;
    let m = pres.meridian_index;
    let jac = jacobian_with_weights(pres, &weights);
    let cols: Vec<usize> = (0..pres.num_generators).filter(|&c| c != m).collect();
    let a: Vec<Vec<FieldElem>> =
        jac.iter().map(|row| cols.iter().map(|&c| eval_at(&field, &row[c], &alpha)).collect()).collect();
    let kernel = null_space(&field, a, cols.len());
    let Some(v) = kernel.into_iter().next() else {
        return Err(Error::NoSpanningKernel(format!("A(α) has trivial kernel at p = {p}")));
    };
    let first = v.iter().find(|e| !field.is_zero(e)).ok_or_else(|| Error::NoSpanningKernel("zero kernel vector".into()))?;
    let inv = field.inv(first).expect("nonzero");
    let mut translations = vec![field.zero(); pres.num_generators];
    for (&c, e) in cols.iter().zip(&v) {
        translations[c] = field.mul(e, &inv);
    }
    let order_alpha = field.mult_order(&alpha)?;
    let rep = AffineRep { field, alpha, order_alpha, weights, translations, meridian_index: m };
    let report = verify_rep(&rep, pres, None);
    if !report.passed() {
        return Err(Error::RepVerification(format!("{report:?}")));
    }
    Ok(rep)
}

/// All representations at `p`, one per irreducible factor of Δ mod p other than `t`.
pub fn reps_at_prime(pres: &GroupPresentation, delta: &LaurentPoly, p: u64) -> Result<Vec<(RootInfo, AffineRep)>> {
    roots_of_delta_modp(&delta.reduce_mod(p))?
        .into_iter()
        .map(|r| build_rep(pres, p, &r.factor).map(|rep| (r, rep)))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RepReport {
    /// Index of the first relator that does not map to the identity.
    pub failed_relator: Option<usize>,
    pub meridian_multiplier_ok: bool,
    pub non_abelian: bool,
    /// Some nonzero translation, so the α-orbit spans 𝔽_{p^d}.
    pub spanning: bool,
    pub expected_order: u64,
    /// Image order counted by closure, when small enough to enumerate.
    pub closure_order: Option<u64>,
    /// `None` when no longitude was supplied.
    pub longitude_translation: Option<bool>,
}

impl RepReport {
    pub fn passed(&self) -> bool {
        self.failed_relator.is_none()
            && self.meridian_multiplier_ok
            && self.non_abelian
            && self.spanning
            && self.closure_order.is_none_or(|o| o == self.expected_order)
            && self.longitude_translation != Some(false)
    }
}

/// Counts `|ρ(Γ)|` by breadth-first closure under right multiplication.
pub fn closure_order(rep: &AffineRep) -> u64 {
    let q = rep.field_order() as usize;
    let n = rep.order_alpha as usize;
    let gens = rep.translations.len();
    // shifted[g][k] = index of α^k y_g
    let shifted: Vec<Vec<usize>> = (0..gens)
        .map(|g| {
            let mut v = Vec::with_capacity(n);
            let mut cur = rep.translations[g].clone();
            for _ in 0..n {
                v.push(rep.field.index_of(&cur));
                cur = rep.field.mul(&cur, &rep.alpha);
            }
            v
        })
        .collect();
    let ks: Vec<usize> = rep.weights.iter().map(|w| w.rem_euclid(n as i64) as usize).collect();
    let add = |a: usize, b: usize| rep.field.index_of(&rep.field.add(&rep.field.elem_at(a), &rep.field.elem_at(b)));
    let mut seen = vec![false; n * q];
    seen[0] = true;
    let mut queue = vec![(0usize, 0usize)];
    let mut count = 1u64;
    while let Some((k, b)) = queue.pop() {
        for g in 0..gens {
            let nk = (k + ks[g]) % n;
            let nb = add(b, shifted[g][k]);
            let idx = nk * q + nb;
            if !seen[idx] {
                seen[idx] = true;
                count += 1;
                queue.push((nk, nb));
            }
        }
    }
    count
}

pub fn verify_rep(rep: &AffineRep, pres: &GroupPresentation, longitude: Option<&Word>) -> RepReport {
    let id = rep.identity();
    let failed_relator = pres.relators.iter().position(|r| rep.word_image(r) != id);
    let mer = rep.generator_image(rep.meridian_index);
    let meridian_multiplier_ok = rep.alpha_pow(mer.k as i64) == rep.alpha;
    let imgs: Vec<AffineElem> = (0..pres.num_generators).map(|g| rep.generator_image(g)).collect();
    let non_abelian = imgs
        .iter()
        .enumerate()
        .any(|(i, a)| imgs[i + 1..].iter().any(|b| rep.compose(a, b) != rep.compose(b, a)));
    let spanning = rep.translations.iter().any(|y| !rep.field.is_zero(y));
    let expected_order = rep.image_order();
    let closure = (expected_order <= CLOSURE_LIMIT).then(|| closure_order(rep));
    let lon = longitude.or(pres.longitude.as_ref());
    let longitude_translation = lon.map(|w| rep.word_image(w).k == 0);
    RepReport {
        failed_relator,
        meridian_multiplier_ok,
        non_abelian,
        spanning,
        expected_order,
        closure_order: closure,
        longitude_translation,
    }
}

/// `⟨t, x, y | t x t⁻¹ = x y x, t y t⁻¹ = y x⟩`, the figure-eight knot group
/// as a mapping torus of the once-punctured torus.
pub fn figure_eight_fiber_presentation() -> GroupPresentation {
    GroupPresentation::new(3, vec![Word::new(vec![1, 2, -1, -2, -3, -2]), Word::new(vec![1, 3, -1, -2, -3])])
}
