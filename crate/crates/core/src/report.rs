//! Homology tables of the covers `X_ρ` (upper row) and `X_n` (lower row)
//! over a grid of knots and primes, and comparison with stored values.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::algebra::snf::AbelianGroup;
use crate::covers::{
    betti_sandwich, cover_homology, rs_generator_count, torsion_ratio_check, Budget, CoverHomology, CoverKind,
    BettiSandwich, TorsionVerdict,
};
use crate::derham::reps_at_prime;
use crate::error::{Error, Result};
use crate::knot::Knot;

pub const TABLE_KNOTS: [&str; 7] = ["3_1", "4_1", "5_1", "5_2", "6_1", "6_2", "6_3"];
pub const TABLE_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Both covers for one irreducible factor of Δ mod p.
#[derive(Clone, Debug, Serialize)]
pub struct CoverPair {
    pub factor: String,
    pub d: usize,
    pub n: u64,
    pub field_order: u64,
    pub upper: CoverHomology,
    pub lower: CoverHomology,
    pub sandwich: BettiSandwich,
    pub torsion: TorsionVerdict,
}

impl CoverPair {
    /// Sandwich bounds hold and `X_ρ` has exactly `p^d` boundary tori.
    pub fn passed(&self) -> bool {
        self.sandwich.passed() && self.upper.boundary_components as u64 == self.field_order
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CellEntry {
    Computed(Box<CoverPair>),
    Skipped { factor: String, degree: u64, reason: String },
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CellStatus {
    /// Δ is a unit times a power of `t` mod p.
    Empty,
    Entries { entries: Vec<CellEntry> },
}

#[derive(Clone, Debug, Serialize)]
pub struct TableCell {
    pub knot: String,
    pub p: u64,
    #[serde(flatten)]
    pub status: CellStatus,
}

fn join_distinct(items: impl IntoIterator<Item = String>) -> String {
    let mut seen: Vec<String> = Vec::new();
    for s in items {
        if !seen.contains(&s) {
            seen.push(s);
        }
    }
    seen.join("; ")
}

impl TableCell {
    pub fn computed(&self) -> Vec<&CoverPair> {
        match &self.status {
            CellStatus::Empty => Vec::new(),
            CellStatus::Entries { entries } => entries
                .iter()
                .filter_map(|e| match e {
                    CellEntry::Computed(c) => Some(c.as_ref()),
                    CellEntry::Skipped { .. } => None,
                })
                .collect(),
        }
    }

    pub fn is_skipped(&self) -> bool {
        matches!(&self.status, CellStatus::Entries { entries } if entries.iter().any(|e| matches!(e, CellEntry::Skipped { .. })))
    }

    fn text(&self, pick: impl Fn(&CoverPair) -> &AbelianGroup) -> String {
        match &self.status {
            CellStatus::Empty => "∅".into(),
            CellStatus::Entries { entries } => join_distinct(entries.iter().map(|e| match e {
                CellEntry::Computed(c) => pick(c).to_string(),
                CellEntry::Skipped { .. } => "skipped".into(),
            })),
        }
    }

    pub fn upper_text(&self) -> String {
        self.text(|c| &c.upper.h1)
    }

    pub fn lower_text(&self) -> String {
        self.text(|c| &c.lower.h1)
    }
}

/// Computes one cell; factors whose kernel cover exceeds the budget are
/// marked skipped.
pub fn table_cell(knot: &Knot, p: u64, budget: &Budget) -> Result<TableCell> {
    let reps = match reps_at_prime(&knot.working, &knot.delta, p) {
        Ok(r) => r,
        Err(Error::NoRepresentation(_)) => {
            return Ok(TableCell { knot: knot.name.clone(), p, status: CellStatus::Empty });
        }
        Err(e) => return Err(e),
    };
    let mut reps = reps;
    reps.sort_by_key(|(r, rep)| (rep.image_order(), r.factor.to_string()));
    let mut entries = Vec::new();
    for (root, rep) in reps {
        let factor = root.factor.to_string();
        let degree = rep.image_order();
        let upper = match cover_homology(&knot.working, Some(&rep), CoverKind::Kernel, budget) {
            Ok(h) => h,
            Err(Error::BudgetExceeded(reason)) => {
                entries.push(CellEntry::Skipped { factor, degree, reason });
                continue;
            }
            Err(e) => return Err(e),
        };
        let n = rep.order_alpha;
        let lower = cover_homology(&knot.working, None, CoverKind::Cyclic(n), budget)?;
        let q = rep.field_order();
        let sandwich = betti_sandwich(
            upper.h1.betti(),
            lower.h1.betti(),
            q,
            n,
            knot.c_k(),
            rs_generator_count(&knot.working, n as usize),
        );
        let torsion = torsion_ratio_check(&upper.h1, &lower.h1, q);
        entries.push(CellEntry::Computed(Box::new(CoverPair { factor, d: rep.d(), n, field_order: q, upper, lower, sandwich, torsion })));
    }
    Ok(TableCell { knot: knot.name.clone(), p, status: CellStatus::Entries { entries } })
}

/// Runs `job` on every item with up to `workers` threads; results keep
/// the input order.
pub fn run_parallel<T: Sync, R: Send>(items: &[T], workers: usize, job: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let next = AtomicUsize::new(0);
    let out: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers.clamp(1, items.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= items.len() {
                    break;
                }
                let r = job(&items[i]);
                out.lock().expect("poisoned")[i] = Some(r);
            });
        }
    });
    out.into_inner().expect("poisoned").into_iter().map(|r| r.expect("every job ran")).collect()
}

/// All cells for `knots × primes`, in row-major order.
pub fn compute_table(knots: &[Knot], primes: &[u64], budget: &Budget, workers: usize) -> Result<Vec<TableCell>> {
    let jobs: Vec<(&Knot, u64)> = knots.iter().flat_map(|k| primes.iter().map(move |&p| (k, p))).collect();
    run_parallel(&jobs, workers, |(k, p)| table_cell(k, *p, budget)).into_iter().collect()
}

/// Two-row layout: a header of primes, then two lines per knot.
pub fn render_row_table(cells: &[TableCell], primes: &[u64]) -> String {
    let mut out = format!("knot\t{}\n", primes.iter().map(u64::to_string).collect::<Vec<_>>().join("\t"));
    let mut rows: Vec<(&str, Vec<&TableCell>)> = Vec::new();
    for c in cells {
        match rows.last_mut() {
            Some((k, v)) if *k == c.knot => v.push(c),
            _ => rows.push((&c.knot, vec![c])),
        }
    }
    for (knot, row) in rows {
        let upper: Vec<String> = row.iter().map(|c| c.upper_text()).collect();
        let lower: Vec<String> = row.iter().map(|c| c.lower_text()).collect();
        out.push_str(&format!("{knot}\t{}\n\t{}\n", upper.join("\t"), lower.join("\t")));
    }
    out
}

pub fn render_csv(cells: &[TableCell]) -> String {
    let mut out = String::from("knot,p,upper,lower\n");
    for c in cells {
        out.push_str(&format!("{},{},\"{}\",\"{}\"\n", c.knot, c.p, c.upper_text(), c.lower_text()));
    }
    out
}

/// One stored table cell; `upper`/`lower` use the bracket notation with
/// several covers separated by `;`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoldenCell {
    pub knot: String,
    pub p: u64,
    pub upper: String,
    pub lower: String,
    pub provenance: String,
    /// Whether the cell is expected to be reproduced exactly.
    pub reproducible: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoldenLine {
    pub knot: String,
    pub line: String,
    pub provenance: String,
    pub reproducible: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Golden {
    pub table: Vec<GoldenCell>,
    pub minimal: Vec<GoldenLine>,
}

pub const GOLDEN_JSON: &str = include_str!("../data/golden.json");

impl Golden {
    pub fn builtin() -> Result<Self> {
        Ok(serde_json::from_str(GOLDEN_JSON)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn cell(&self, knot: &str, p: u64) -> Option<&GoldenCell> {
        self.table.iter().find(|c| c.knot == knot && c.p == p)
    }
}

/// Parses `∅`, or groups separated by `;`, into a sorted list.
pub fn parse_cell_groups(text: &str) -> Result<Option<Vec<AbelianGroup>>> {
    let t = text.trim();
    if t == "∅" {
        return Ok(None);
    }
    let mut v = t.split(';').map(|s| s.trim().parse::<AbelianGroup>()).collect::<Result<Vec<_>>>()?;
    v.sort_by_key(|g| g.to_string());
    v.dedup();
    Ok(Some(v))
}

fn computed_groups(cell: &TableCell, pick: impl Fn(&CoverPair) -> &AbelianGroup) -> Option<Vec<AbelianGroup>> {
    match &cell.status {
        CellStatus::Empty => None,
        CellStatus::Entries { .. } => {
            let mut v: Vec<AbelianGroup> = cell.computed().into_iter().map(|c| pick(c).clone()).collect();
            v.sort_by_key(|g| g.to_string());
            v.dedup();
            Some(v)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffOutcome {
    Match,
    Mismatch,
    Skipped,
    /// No stored value for this cell.
    Unlisted,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellDiff {
    pub knot: String,
    pub p: u64,
    pub outcome: DiffOutcome,
    pub reproducible: bool,
    pub expected: Option<(String, String)>,
    pub got: (String, String),
}

/// Compares cells with stored values as groups, so notation differences
/// such as ordering or repeated summands do not matter.
pub fn diff_cells(cells: &[TableCell], golden: &Golden) -> Result<Vec<CellDiff>> {
    let mut out = Vec::new();
    for c in cells {
        let got = (c.upper_text(), c.lower_text());
        let Some(g) = golden.cell(&c.knot, c.p) else {
            out.push(CellDiff { knot: c.knot.clone(), p: c.p, outcome: DiffOutcome::Unlisted, reproducible: false, expected: None, got });
            continue;
        };
        let outcome = if c.is_skipped() {
            DiffOutcome::Skipped
        } else if parse_cell_groups(&g.upper)? == computed_groups(c, |x| &x.upper.h1)
            && parse_cell_groups(&g.lower)? == computed_groups(c, |x| &x.lower.h1)
        {
            DiffOutcome::Match
        } else {
            DiffOutcome::Mismatch
        };
        out.push(CellDiff {
            knot: c.knot.clone(),
            p: c.p,
            outcome,
            reproducible: g.reproducible,
            expected: Some((g.upper.clone(), g.lower.clone())),
            got,
        });
    }
    Ok(out)
}

/// Whether a diff contains a failure that should change the exit status.
pub fn diff_failed(diffs: &[CellDiff]) -> bool {
    diffs.iter().any(|d| d.reproducible && d.outcome != DiffOutcome::Match)
}

/// Stored minimal-degree lines keyed by knot.
pub fn golden_lines(golden: &Golden) -> BTreeMap<&str, &GoldenLine> {
    golden.minimal.iter().map(|l| (l.knot.as_str(), l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(name: &str, p: u64) -> TableCell {
        table_cell(&Knot::builtin(name).unwrap(), p, &Budget::default()).unwrap()
    }

    #[test]
    fn trefoil_at_two() {
        let c = cell("3_1", 2);
        assert_eq!(c.upper_text(), "[0^4]");
        assert_eq!(c.lower_text(), "[0, 2^2]");
        assert!(c.computed()[0].passed());
    }

    #[test]
    fn empty_and_notation() {
        let c = cell("5_2", 2);
        assert_eq!((c.upper_text().as_str(), c.lower_text().as_str()), ("∅", "∅"));
        let c = cell("6_1", 3);
        assert_eq!((c.upper_text().as_str(), c.lower_text().as_str()), ("[0^3, 3]", "[0, 9]"));
    }

    #[test]
    fn budget_skip_is_marked() {
        let c = table_cell(&Knot::builtin("5_1").unwrap(), 7, &Budget::with_degree(100)).unwrap();
        assert!(c.is_skipped());
        assert_eq!(c.upper_text(), "skipped");
    }

    #[test]
    fn golden_parses_and_matches_small_cells() {
        let g = Golden::builtin().unwrap();
        for c in &g.table {
            parse_cell_groups(&c.upper).unwrap();
            parse_cell_groups(&c.lower).unwrap();
        }
        let cells: Vec<TableCell> = [("3_1", 2), ("4_1", 2), ("5_2", 2), ("6_1", 3)].iter().map(|(k, p)| cell(k, *p)).collect();
        let d = diff_cells(&cells, &g).unwrap();
        assert!(d.iter().all(|x| x.outcome == DiffOutcome::Match), "{d:?}");
    }

    #[test]
    fn parallel_keeps_order() {
        let v: Vec<u64> = (0..50).collect();
        assert_eq!(run_parallel(&v, 4, |x| x * 2), v.iter().map(|x| x * 2).collect::<Vec<_>>());
    }

    #[test]
    fn cell_group_parsing() {
        let a = parse_cell_groups("[0^{11}]; [0^{121},5^2]").unwrap().unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(parse_cell_groups("∅").unwrap(), None);
        assert_eq!(parse_cell_groups("[0,11,11]").unwrap(), parse_cell_groups("[0, 11^2]").unwrap());
    }
}
