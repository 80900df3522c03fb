//! Squares and tables transcribed from print: the 186 ds-isotopism class
//! representatives `DS(9,1)..DS(9,186)`, the squares displayed in the text,
//! the main-class table and the tri-partition table.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::io::{parse_squares, LabeledSquare};
use crate::partition::TriPartition;
use crate::square::LatinSquare;

pub const APPENDIX_TXT: &str = include_str!("../corpus/appendix.txt");
pub const NAMED_TXT: &str = include_str!("../corpus/named.txt");
pub const MAIN_CLASSES_TXT: &str = include_str!("../corpus/main_classes.txt");
pub const TRIPARTITIONS_TXT: &str = include_str!("../corpus/tripartitions.txt");

/// Number of appendix squares.
pub const APPENDIX_LEN: usize = 186;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub label: String,
    pub square: LatinSquare,
    /// Index of the main ds-class row that lists this square.
    pub main_class: Option<usize>,
    /// The printed tri-partition list, when one exists.
    pub tripartitions: Option<Vec<TriPartition>>,
    /// Set for squares that are relabelled displays rather than standard
    /// division sudokus in their own right.
    pub auxiliary: bool,
}

fn appendix_parsed() -> &'static Vec<LabeledSquare> {
    static CELL: OnceLock<Vec<LabeledSquare>> = OnceLock::new();
    CELL.get_or_init(|| parse_squares(APPENDIX_TXT).expect("appendix corpus parses"))
}

fn named_parsed() -> &'static Vec<LabeledSquare> {
    static CELL: OnceLock<Vec<LabeledSquare>> = OnceLock::new();
    CELL.get_or_init(|| parse_squares(NAMED_TXT).expect("named corpus parses"))
}

/// `DS(9,1)..DS(9,186)` in order.
pub fn appendix() -> Vec<LatinSquare> {
    appendix_parsed().iter().map(|e| e.square.clone()).collect()
}

/// `DS(9,i)` for `1 ≤ i ≤ 186`.
pub fn ds(i: usize) -> LatinSquare {
    let e = &appendix_parsed()[i - 1];
    debug_assert_eq!(e.label.as_deref(), Some(format!("DS(9,{i})").as_str()));
    e.square.clone()
}

/// Labels of the displayed squares: `L0`, `EX-INTERCALATE`, `EX-MINISQUARE`,
/// `Q`, `Q-RDIV`, `Q-LDIV`, `DS18-VIEW1..3`, `L17`, `L175`, `L179`.
pub fn named_labels() -> Vec<String> {
    named_parsed().iter().filter_map(|e| e.label.clone()).collect()
}

pub fn try_named(label: &str) -> Option<LatinSquare> {
    named_parsed()
        .iter()
        .find(|e| e.label.as_deref() == Some(label))
        .map(|e| e.square.clone())
}

/// Panics on an unknown label.
pub fn named(label: &str) -> LatinSquare {
    try_named(label).unwrap_or_else(|| panic!("no corpus square labelled {label}"))
}

/// 1-based column labels printed above a relabelled display.
pub fn column_labels(label: &str) -> Option<Vec<usize>> {
    let e = named_parsed().iter().find(|e| e.label.as_deref() == Some(label))?;
    let line = e.comments.iter().find_map(|c| c.strip_prefix("columns:"))?;
    Some(line.split_whitespace().map(|t| t.parse().unwrap()).collect())
}

/// Rows of the main ds-class table, each a list of appendix indices.
pub fn main_class_table() -> Vec<Vec<usize>> {
    MAIN_CLASSES_TXT
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
        .collect()
}

/// Printed tri-partition lists keyed by appendix index.
pub fn tripartition_table() -> BTreeMap<usize, Vec<TriPartition>> {
    let mut out = BTreeMap::new();
    let mut current = None;
    for line in TRIPARTITIONS_TXT.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("# DS(9,") {
            let i: usize = rest.trim_end_matches(')').parse().unwrap();
            out.insert(i, Vec::new());
            current = Some(i);
        } else if !line.is_empty() && !line.starts_with('#') {
            let t: TriPartition = line.parse().expect("tri-partition table parses");
            out.get_mut(&current.unwrap()).unwrap().push(t);
        }
    }
    out
}

pub fn entries() -> Vec<CorpusEntry> {
    let classes = main_class_table();
    let tris = tripartition_table();
    let mut out = Vec::new();
    for (k, e) in appendix_parsed().iter().enumerate() {
        let i = k + 1;
        out.push(CorpusEntry {
            label: format!("DS(9,{i})"),
            square: e.square.clone(),
            main_class: classes.iter().position(|c| c.contains(&i)),
            tripartitions: tris.get(&i).cloned(),
            auxiliary: false,
        });
    }
    for e in named_parsed() {
        let label = e.label.clone().unwrap_or_default();
        out.push(CorpusEntry {
            auxiliary: matches!(label.as_str(), "DS18-VIEW2" | "DS18-VIEW3"),
            label,
            square: e.square.clone(),
            main_class: None,
            tripartitions: None,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_sizes() {
        assert_eq!(appendix().len(), APPENDIX_LEN);
        assert_eq!(named_labels().len(), 12);
        let classes = main_class_table();
        assert_eq!(classes.len(), 45);
        let mut all: Vec<usize> = classes.concat();
        all.sort();
        assert_eq!(all, (1..=186).collect::<Vec<_>>());
        let tris = tripartition_table();
        let sizes: Vec<(usize, usize)> = tris.iter().map(|(k, v)| (*k, v.len())).collect();
        assert_eq!(sizes, vec![(2, 2), (17, 24), (18, 4), (20, 9), (27, 2), (175, 3), (179, 4)]);
    }

    #[test]
    fn column_labels_of_views() {
        assert_eq!(column_labels("DS18-VIEW2").unwrap(), vec![1, 4, 7, 2, 5, 8, 3, 6, 9]);
        assert_eq!(column_labels("L0"), None);
    }
}
