//! Machine checks binding the transcribed corpus to computed facts.

use std::collections::{BTreeMap, BTreeSet};

use crate::classification::{main_ds_classes, DsClassifier};
use crate::corpus::{self, CorpusEntry};
use crate::enumeration::is_template_extension;
use crate::error::Result;
use crate::invariants::count_intercalates;
use crate::multipart::{sigma, tri_partitions};
use crate::partition::TriPartition;
use crate::square::LatinSquare;
use crate::sudoku::{count_associative_triples, first_violation, Violation};

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Check {
    pub label: String,
    pub property: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct CorpusReport {
    pub checks: Vec<Check>,
}

impl CorpusReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    fn push(&mut self, label: &str, property: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { label: label.into(), property: property.into(), pass, detail: detail.into() });
    }
}

fn describe(v: &Violation) -> String {
    match *v {
        Violation::BandStack { band, stack, symbol } => {
            format!("minisquare (band {}, stack {}) repeats symbol {}", band + 1, stack + 1, symbol + 1)
        }
        Violation::BandPile { band, pile, col } => {
            format!("band {} ∩ pile {} repeats column {}", band + 1, pile + 1, col + 1)
        }
        Violation::StackPile { stack, pile, row } => {
            format!("stack {} ∩ pile {} repeats row {}", stack + 1, pile + 1, row + 1)
        }
    }
}

fn appendix_index(label: &str) -> Option<usize> {
    label.strip_prefix("DS(9,")?.strip_suffix(')')?.parse().ok()
}

/// A relabelled display with its printed column order undone.
fn unpermute_columns(l: &LatinSquare, cols: &[usize]) -> Option<LatinSquare> {
    let inverse: Vec<usize> = (0..l.order()).map(|y| cols.iter().position(|&c| c == y + 1)).collect::<Option<_>>()?;
    LatinSquare::from_fn(l.order(), |x, y| l.get(x, inverse[y])).ok()
}

/// Runs every check on the embedded corpus.
pub fn corpus_verify() -> Result<CorpusReport> {
    verify_entries(&corpus::entries())
}

/// Runs every check on `entries`, which may be a modified corpus.
pub fn verify_entries(entries: &[CorpusEntry]) -> Result<CorpusReport> {
    let mut report = CorpusReport::default();
    let standard = TriPartition::standard(3);
    for e in entries.iter().filter(|e| !e.auxiliary) {
        match first_violation(&e.square, &standard)? {
            None => report.push(&e.label, "standard division sudoku", true, ""),
            Some(v) => report.push(&e.label, "standard division sudoku", false, describe(&v)),
        }
    }
    let appendix: Vec<(usize, &CorpusEntry)> =
        entries.iter().filter_map(|e| appendix_index(&e.label).map(|i| (i, e))).collect();
    for (_, e) in &appendix {
        report.push(&e.label, "extends template", is_template_extension(&e.square), "");
    }
    check_class_bijection(&mut report, &appendix);
    check_main_classes(&mut report, &appendix);
    for (_, e) in &appendix {
        if let Some(expected) = &e.tripartitions {
            let mut expected = expected.clone();
            expected.sort();
            let ok = tri_partitions(&e.square).map(|t| t == expected).unwrap_or(false);
            report.push(&e.label, "tri-partition table", ok, format!("{} printed", expected.len()));
        }
    }
    check_named(&mut report, entries)?;
    Ok(report)
}

fn check_class_bijection(report: &mut CorpusReport, appendix: &[(usize, &CorpusEntry)]) {
    let dc = DsClassifier::shared();
    let mut hits: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
    for (_, e) in appendix {
        if let Ok(c) = dc.class_of(&e.square) {
            hits.entry(c).or_default().push(&e.label);
        }
    }
    let missing = dc.classes.len() - hits.len();
    report.push(
        "appendix",
        "one square per computed ds-class",
        missing == 0,
        if missing == 0 { String::new() } else { format!("{missing} computed class(es) missing") },
    );
    let dups: Vec<String> = hits.values().filter(|v| v.len() > 1).map(|v| v.join(" ~ ")).collect();
    report.push("appendix", "pairwise non-ds-isotopic", dups.is_empty(), dups.join("; "));
}

fn check_main_classes(report: &mut CorpusReport, appendix: &[(usize, &CorpusEntry)]) {
    let squares: Vec<LatinSquare> = appendix.iter().map(|(_, e)| e.square.clone()).collect();
    let expected: BTreeSet<BTreeSet<usize>> = {
        let mut rows: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for (i, e) in appendix {
            if let Some(r) = e.main_class {
                rows.entry(r).or_default().insert(*i);
            }
        }
        rows.into_values().collect()
    };
    match main_ds_classes(&squares) {
        Ok(p) => {
            let got: BTreeSet<BTreeSet<usize>> =
                p.members.iter().map(|m| m.iter().map(|&k| appendix[k].0).collect()).collect();
            let wrong = got.symmetric_difference(&expected).count();
            report.push("main-class table", "main ds-class groupings", wrong == 0, format!("{} classes computed", got.len()));
        }
        Err(err) => report.push("main-class table", "main ds-class groupings", false, err.to_string()),
    }
}

fn check_named(report: &mut CorpusReport, entries: &[CorpusEntry]) -> Result<()> {
    let get = |label: &str| entries.iter().find(|e| e.label == label).map(|e| &e.square);
    if let Some(l0) = get("L0") {
        let n = count_associative_triples(l0);
        report.push("L0", "9 associative triples", n == 9, format!("{n} found"));
        if let Some(l17) = get("L17") {
            let ok = sigma(l0).ok() == sigma(l17).ok() && sigma(l0).map(|s| s.len()).unwrap_or(0) == 4;
            report.push("L0", "sigma partitions equal those of L17", ok, "");
        }
    }
    if let Some(q) = get("Q") {
        let n = count_intercalates(q);
        report.push("Q", "idempotent with 18 intercalates", q.is_idempotent() && n == 18, format!("{n} intercalates"));
    }
    for (label, want) in [("L17", 4), ("L175", 3), ("L179", 4)] {
        if let Some(l) = get(label) {
            let s = sigma(l)?.len();
            report.push(label, &format!("sigma = {want}"), s == want, format!("sigma = {s}"));
        }
    }
    if let Some(d18) = entries.iter().find(|e| e.label == "DS(9,18)").map(|e| &e.square) {
        for view in ["DS18-VIEW1", "DS18-VIEW2", "DS18-VIEW3"] {
            if let Some(v) = get(view) {
                let restored = match corpus::column_labels(view) {
                    Some(cols) => unpermute_columns(v, &cols),
                    None => Some(v.clone()),
                };
                report.push(view, "relabelled display of DS(9,18)", restored.as_ref() == Some(d18), "");
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;
    use crate::square::Isotopism;

    #[test]
    fn full_corpus_passes() {
        let r = corpus_verify().unwrap();
        let failures: Vec<_> = r.failures().collect();
        assert!(failures.is_empty(), "{failures:?}");
        assert!(r.checks.len() > 400);
    }

    #[test]
    fn corrupted_square_is_located() {
        let mut entries = corpus::entries();
        let e = entries.iter_mut().find(|e| e.label == "DS(9,17)").unwrap();
        let swap = Permutation::from_cycles(9, &[&[1, 4]]).unwrap();
        e.square = e.square.apply_isotopism(&Isotopism::new(Permutation::identity(9), Permutation::identity(9), swap).unwrap()).unwrap();
        let r = verify_entries(&entries).unwrap();
        let bad = r.failures().find(|c| c.label == "DS(9,17)" && c.property == "standard division sudoku").unwrap();
        assert!(!bad.detail.is_empty());
    }

    #[test]
    fn deleted_class_is_reported() {
        let entries: Vec<_> = corpus::entries().into_iter().filter(|e| e.label != "DS(9,18)").collect();
        let r = verify_entries(&entries).unwrap();
        let c = r.checks.iter().find(|c| c.property == "one square per computed ds-class").unwrap();
        assert!(!c.pass);
        assert!(c.detail.contains("1 computed class"));
    }
}
