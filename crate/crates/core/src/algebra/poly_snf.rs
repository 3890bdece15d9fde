//! Smith normal form over 𝔽_p[t].

use super::fp_poly::PolyFp;

/// Invariant factors of `m`: `min(rows, cols)` monic polynomials, each
/// dividing the next, with zero polynomials at the end for rank deficiency.
pub fn snf_poly(m: &[Vec<PolyFp>], p: u64) -> Vec<PolyFp> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<PolyFp>> = m.to_vec();
    let size = nrows.min(ncols);
    let mut diag = Vec::new();
    for t in 0..size {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.deg() < a[bi][bj].deg()) {
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
                let q = a[i][t].div_rem(&a[t][t]).0;
                for j in t..ncols {
                    let d = q.mul(&a[t][j]);
                    a[i][j] = a[i][j].sub(&d);
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..ncols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_rem(&a[t][t]).0;
                for row in a.iter_mut().skip(t) {
                    let d = q.mul(&row[t]);
                    row[j] = row[j].sub(&d);
                }
                dirty |= !a[t][j].is_zero();
            }
            if !dirty {
                break;
            }
            let mut bi = (t, t);
            for i in t + 1..nrows {
                if !a[i][t].is_zero() && a[i][t].deg() < a[bi.0][bi.1].deg() {
                    bi = (i, t);
                }
            }
            for j in t + 1..ncols {
                if !a[t][j].is_zero() && a[t][j].deg() < a[bi.0][bi.1].deg() {
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
        diag.push(a[t][t].monic());
    }
    let rank = diag.len();
    for i in 0..rank {
        for j in i + 1..rank {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].mul(&diag[j]).div_rem(&g).0;
            diag[i] = g;
            diag[j] = l.monic();
        }
    }
    diag.sort_by_key(|d| d.deg());
    diag.resize(size, PolyFp::zero(p));
    diag
}
