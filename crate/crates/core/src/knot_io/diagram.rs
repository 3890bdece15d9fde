//! Planar-diagram (PD) codes.
//!
//! A crossing `X[i, j, k, l]` lists its four edge labels counterclockwise
//! starting from the incoming under-edge `i`; the under strand runs `i → k`.
//! A crossing is positive when the over strand runs from slot `l` to slot `j`.

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotDiagram {
    /// Edge labels `1..=2n`, consecutive along the orientation.
    pub crossings: Vec<[usize; 4]>,
    /// Crossing signs, `+1` or `-1`, aligned with `crossings`.
    pub signs: Vec<i8>,
    pub name: Option<String>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

impl KnotDiagram {
    /// Validates raw crossings and relabels edges in traversal order.
    pub fn from_crossings(raw: &[[i64; 4]], name: Option<String>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyDiagram);
        }
        let mut occurrences: HashMap<i64, Vec<(usize, usize)>> = HashMap::new();
        for (c, x) in raw.iter().enumerate() {
            for (s, &label) in x.iter().enumerate() {
                occurrences.entry(label).or_default().push((c, s));
            }
        }
        let mut labels: Vec<i64> = occurrences.keys().copied().collect();
        labels.sort_unstable();
        for &label in &labels {
            let count = occurrences[&label].len();
            if count != 2 {
                return Err(Error::ArcMultiplicity { label, count });
            }
        }
        let index: HashMap<i64, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let mut parent: Vec<usize> = (0..labels.len()).collect();
        for x in raw {
            for (a, b) in [(x[0], x[2]), (x[1], x[3])] {
                let (ra, rb) = (find(&mut parent, index[&a]), find(&mut parent, index[&b]));
                parent[ra] = rb;
            }
        }
        let components = (0..labels.len()).filter(|&i| find(&mut parent, i) == i).count();
        if components != 1 {
            return Err(Error::NotAKnot(components));
        }

        // Walk the knot, entering crossing 0 along its under-strand.
        let n_edges = labels.len();
        let mut order: Vec<i64> = Vec::with_capacity(n_edges);
        let mut over_entry: Vec<Option<usize>> = vec![None; raw.len()];
        let (mut c, mut s) = (0usize, 0usize);
        for _ in 0..n_edges {
            order.push(raw[c][s]);
            let exit = match s {
                0 => 2,
                1 => 3,
                3 => 1,
                _ => return Err(Error::Parse("inconsistent under-strand orientation".into())),
            };
            if s == 1 || s == 3 {
                over_entry[c] = Some(s);
            }
            let out_label = raw[c][exit];
            let occ = &occurrences[&out_label];
            let next = if occ[0] == (c, exit) { occ[1] } else { occ[0] };
            (c, s) = next;
        }
        if (c, s) != (0, 0) || {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            sorted.dedup();
            sorted.len() != n_edges
        } {
            return Err(Error::Parse("traversal does not close up".into()));
        }
        // Rotate so that the smallest original label becomes 1.
        let start = order.iter().position(|&l| l == labels[0]).unwrap();
        let relabel: HashMap<i64, usize> =
            (0..n_edges).map(|k| (order[(start + k) % n_edges], k + 1)).collect();
        let crossings: Vec<[usize; 4]> = raw
            .iter()
            .map(|x| [relabel[&x[0]], relabel[&x[1]], relabel[&x[2]], relabel[&x[3]]])
            .collect();
        let signs = over_entry
            .iter()
            .map(|e| match e {
                Some(3) => Ok(1),
                Some(1) => Ok(-1),
                _ => Err(Error::Parse("crossing never passed over".into())),
            })
            .collect::<Result<Vec<i8>>>()?;
        Ok(KnotDiagram { crossings, signs, name })
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    /// Raw crossing list as 4-tuples, as stored in knot tables.
    pub fn to_raw(&self) -> Vec<[i64; 4]> {
        self.crossings.iter().map(|x| x.map(|v| v as i64)).collect()
    }

    pub fn to_pd_string(&self) -> String {
        let parts: Vec<String> =
            self.crossings.iter().map(|x| format!("X[{},{},{},{}]", x[0], x[1], x[2], x[3])).collect();
        format!("PD[{}]", parts.join(", "))
    }
}

/// Parses `PD[X(1,4,2,5), ...]` (round or square brackets) or a JSON list of
/// 4-tuples.
pub fn parse_pd(text: &str) -> Result<KnotDiagram> {
    let t = text.trim();
    let raw: Vec<[i64; 4]> = if t.starts_with('[') {
        serde_json::from_str(t)?
    } else {
        let body = t
            .strip_prefix("PD")
            .map(str::trim_start)
            .and_then(|r| r.strip_prefix('[').or_else(|| r.strip_prefix('(')))
            .and_then(|r| r.strip_suffix(']').or_else(|| r.strip_suffix(')')))
            .ok_or_else(|| Error::Parse(format!("expected PD[...], got {t:?}")))?;
        parse_x_list(body)?
    };
    KnotDiagram::from_crossings(&raw, None)
}

fn parse_x_list(body: &str) -> Result<Vec<[i64; 4]>> {
    let mut out = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        let r = rest
            .strip_prefix('X')
            .map(str::trim_start)
            .ok_or_else(|| Error::Parse(format!("expected X(...) at {rest:?}")))?;
        let close = match r.chars().next() {
            Some('(') => ')',
            Some('[') => ']',
            _ => return Err(Error::Parse(format!("expected bracket at {r:?}"))),
        };
        let end = r.find(close).ok_or_else(|| Error::Parse("unclosed crossing".into()))?;
        let nums: Vec<i64> = r[1..end]
            .split(',')
            .map(|s| s.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad label {s:?}"))))
            .collect::<Result<_>>()?;
        let quad: [i64; 4] =
            nums.try_into().map_err(|_| Error::Parse("crossing needs exactly 4 labels".into()))?;
        out.push(quad);
        rest = r[end + 1..].trim_start();
        rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "PD[X(6,4,1,3), X(2,6,3,5), X(4,2,5,1)]";

    #[test]
    fn trefoil() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.edge_count(), 6);
        let mut counts = [0usize; 7];
        for x in &d.crossings {
            for &l in x {
                counts[l] += 1;
            }
        }
        assert!(counts[1..].iter().all(|&c| c == 2));
        assert_eq!(d.writhe().abs(), 3);
    }

    #[test]
    fn both_syntaxes_agree() {
        let a = parse_pd(TREFOIL).unwrap();
        let b = parse_pd("[[6,4,1,3],[2,6,3,5],[4,2,5,1]]").unwrap();
        let c = parse_pd("PD[X[6,4,1,3],X[2,6,3,5],X[4,2,5,1]]").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn relabels_to_traversal_order() {
        let d = parse_pd("[[60,40,10,30],[20,60,30,50],[40,20,50,10]]").unwrap();
        assert_eq!(d, parse_pd(TREFOIL).unwrap());
    }

    #[test]
    fn errors() {
        assert_eq!(parse_pd("PD[]").unwrap_err(), Error::EmptyDiagram);
        assert_eq!(parse_pd("[]").unwrap_err(), Error::EmptyDiagram);
        assert!(matches!(
            parse_pd("[[1,2,3,4],[4,3,2,5]]").unwrap_err(),
            Error::ArcMultiplicity { .. }
        ));
        // Hopf link
        assert_eq!(parse_pd("PD[X(4,1,3,2), X(2,3,1,4)]").unwrap_err(), Error::NotAKnot(2));
        assert!(parse_pd("PD[X(1,2,3)]").is_err());
    }

    #[test]
    fn kink() {
        let d = parse_pd("PD[X[1,1,2,2]]").unwrap();
        assert_eq!(d.signs, vec![1]);
    }
}
