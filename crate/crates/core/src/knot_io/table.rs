//! The built-in knot table, read from a JSON data file.
//!
//! The table maps a knot name to either a bare crossing list or an object
//! `{"pd": [...], "fibered": bool, "genus": n}`. Setting `METACOVER_KNOT_TABLE`
//! to a file path replaces the shipped table.

use std::collections::BTreeMap;

use serde::Deserialize;

use super::diagram::KnotDiagram;
use crate::error::{Error, Result};

pub const TABLE_ENV: &str = "METACOVER_KNOT_TABLE";

const SHIPPED: &str = include_str!("../../data/knots.json");

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Entry {
    Bare(Vec<[i64; 4]>),
    Full {
        pd: Vec<[i64; 4]>,
        #[serde(default)]
        fibered: Option<bool>,
        #[serde(default)]
        genus: Option<u32>,
    },
}

/// Diagram plus the optional metadata stored with it.
#[derive(Clone, Debug)]
pub struct KnotRecord {
    pub diagram: KnotDiagram,
    pub fibered: Option<bool>,
    pub genus: Option<u32>,
}

fn load_text() -> Result<String> {
    match std::env::var(TABLE_ENV) {
        Ok(path) if !path.is_empty() => Ok(std::fs::read_to_string(path)?),
        _ => Ok(SHIPPED.to_string()),
    }
}

fn parse_table(text: &str) -> Result<BTreeMap<String, Entry>> {
    serde_json::from_str(text).map_err(|e| Error::KnotTable(e.to_string()))
}

/// Names in the active table, in table order by crossing number then index.
pub fn knot_names() -> Result<Vec<String>> {
    let mut names: Vec<String> = parse_table(&load_text()?)?.into_keys().collect();
    names.sort_by_key(|n| sort_key(n));
    Ok(names)
}

fn sort_key(name: &str) -> (u32, u32, String) {
    match name.split_once('_') {
        Some((a, b)) => (a.parse().unwrap_or(u32::MAX), b.parse().unwrap_or(u32::MAX), name.to_string()),
        None => (0, 0, name.to_string()),
    }
}

pub fn knot_record(name: &str) -> Result<KnotRecord> {
    let table = parse_table(&load_text()?)?;
    let entry = table.get(name).ok_or_else(|| Error::UnknownKnot(name.to_string()))?;
    let (pd, fibered, genus) = match entry {
        Entry::Bare(pd) => (pd, None, None),
        Entry::Full { pd, fibered, genus } => (pd, *fibered, *genus),
    };
    let diagram = KnotDiagram::from_crossings(pd, Some(name.to_string()))?;
    Ok(KnotRecord { diagram, fibered, genus })
}

pub fn builtin_knot(name: &str) -> Result<KnotDiagram> {
    knot_record(name).map(|r| r.diagram)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups() {
        assert_eq!(builtin_knot("4_1").unwrap().crossing_count(), 4);
        assert_eq!(builtin_knot("3_1").unwrap().crossing_count(), 3);
        assert_eq!(builtin_knot("9_99").unwrap_err(), Error::UnknownKnot("9_99".into()));
        let names = knot_names().unwrap();
        assert_eq!(names.first().map(String::as_str), Some("unknot"));
        assert_eq!(names.last().map(String::as_str), Some("7_7"));
        assert_eq!(names.len(), 15);
    }

    #[test]
    fn bare_entries_parse() {
        let t = parse_table(r#"{"x": [[6,4,1,3],[2,6,3,5],[4,2,5,1]]}"#).unwrap();
        assert!(matches!(t["x"], Entry::Bare(_)));
    }
}
