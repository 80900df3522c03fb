use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::square::ConjugateLabel;

/// A partition of `0..m²` into `m` blocks of size `m`.
///
/// Blocks are numbered by first occurrence, so block 0 contains element 0 and
/// two equal partitions always have equal `block_of` arrays.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SudokuPartition {
    rank: usize,
    block_of: Vec<u8>,
}

impl SudokuPartition {
    pub fn standard(rank: usize) -> Self {
        assert!(rank >= 1);
        SudokuPartition {
            rank,
            block_of: (0..rank * rank).map(|e| (e / rank) as u8).collect(),
        }
    }

    /// Accepts any labelling of blocks; labels are renumbered canonically.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let n = labels.len();
        let rank = crate::square::rank_of(n).ok_or(Error::NotSquareOrder { order: n })?;
        let mut relabel = vec![usize::MAX; labels.iter().copied().max().map_or(0, |m| m + 1)];
        let mut next = 0usize;
        let mut sizes = vec![0usize; rank];
        let mut block_of = Vec::with_capacity(n);
        for &l in labels {
            if relabel[l] == usize::MAX {
                if next == rank {
                    return Err(Error::InvalidPartition(format!("more than {rank} blocks")));
                }
                relabel[l] = next;
                next += 1;
            }
            let b = relabel[l];
            sizes[b] += 1;
            block_of.push(b as u8);
        }
        if next != rank || sizes.iter().any(|&s| s != rank) {
            return Err(Error::InvalidPartition(format!(
                "block sizes {sizes:?}, expected {rank} blocks of size {rank}"
            )));
        }
        Ok(SudokuPartition { rank, block_of })
    }

    /// Builds a partition from 0-based blocks.
    pub fn from_blocks(blocks: &[Vec<usize>]) -> Result<Self> {
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= n || labels[e] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("element {} misplaced", e + 1)));
                }
                labels[e] = b;
            }
        }
        Self::from_labels(&labels)
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.block_of.len()
    }

    #[inline]
    pub fn block_of(&self, e: usize) -> usize {
        self.block_of[e] as usize
    }

    pub fn labels(&self) -> &[u8] {
        &self.block_of
    }

    #[inline]
    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    /// Blocks in canonical order (by least element), members ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::with_capacity(self.rank); self.rank];
        for (e, &b) in self.block_of.iter().enumerate() {
            blocks[b as usize].push(e);
        }
        blocks
    }

    pub fn is_standard(&self) -> bool {
        *self == Self::standard(self.rank)
    }

    /// The partition `{g(X_1), ..., g(X_m)}`.
    pub fn image(&self, g: &Permutation) -> Self {
        let mut labels = vec![0usize; self.order()];
        for (e, &b) in self.block_of.iter().enumerate() {
            labels[g.apply(e)] = b as usize;
        }
        Self::from_labels(&labels).expect("image of a partition is a partition")
    }

    pub fn is_preserved_by(&self, g: &Permutation) -> bool {
        // g preserves the partition iff same-block pairs stay same-block.
        let mut target = vec![u8::MAX; self.rank];
        for (e, &b) in self.block_of.iter().enumerate() {
            let img = self.block_of[g.apply(e)];
            let t = &mut target[b as usize];
            if *t == u8::MAX {
                *t = img;
            } else if *t != img {
                return false;
            }
        }
        true
    }

    /// Sizes `|θ(X_i) ∩ X_j|` as an `m × m` matrix.
    pub fn incidence(&self, theta: &Permutation) -> Vec<Vec<usize>> {
        let mut m = vec![vec![0; self.rank]; self.rank];
        for e in 0..self.order() {
            m[self.block_of(e)][self.block_of(theta.apply(e))] += 1;
        }
        m
    }
}

impl fmt::Debug for SudokuPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `{123 456 789}` for orders up to 9, `1,5,9,13|2,6,10,14|...` otherwise.
impl fmt::Display for SudokuPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks = self.blocks();
        if self.order() <= 9 {
            let parts: Vec<String> = blocks
                .iter()
                .map(|b| b.iter().map(|e| (e + 1).to_string()).collect())
                .collect();
            write!(f, "{{{}}}", parts.join(" "))
        } else {
            let parts: Vec<String> = blocks
                .iter()
                .map(|b| b.iter().map(|e| (e + 1).to_string()).collect::<Vec<_>>().join(","))
                .collect();
            write!(f, "{}", parts.join("|"))
        }
    }
}

impl FromStr for SudokuPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let blocks: Vec<Vec<usize>> = if s.contains('|') || s.contains(',') {
            s.trim_matches(|c| c == '{' || c == '}')
                .split('|')
                .map(|block| {
                    block
                        .split(',')
                        .map(|t| parse_element(t.trim()))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?
        } else {
            let inner = s
                .strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(|| Error::InvalidPartition(format!("expected {{...}}: {s}")))?;
            inner
                .split_whitespace()
                .map(|block| {
                    block
                        .chars()
                        .map(|c| {
                            c.to_digit(10)
                                .filter(|&d| d >= 1)
                                .map(|d| d as usize - 1)
                                .ok_or_else(|| Error::InvalidPartition(format!("bad digit {c:?}")))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?
        };
        let n: usize = blocks.iter().map(Vec::len).sum();
        let rank = crate::square::rank_of(n).ok_or(Error::NotSquareOrder { order: n })?;
        if blocks.len() != rank || blocks.iter().any(|b| b.len() != rank) {
            return Err(Error::InvalidPartition(format!(
                "{s}: expected {rank} blocks of size {rank}"
            )));
        }
        SudokuPartition::from_blocks(&blocks)
    }
}

fn parse_element(t: &str) -> Result<usize> {
    t.parse::<usize>()
        .ok()
        .filter(|&v| v >= 1)
        .map(|v| v - 1)
        .ok_or_else(|| Error::InvalidPartition(format!("bad element {t:?}")))
}

/// Independent sudoku partitions of rows, columns and symbols.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriPartition {
    pub rows: SudokuPartition,
    pub cols: SudokuPartition,
    pub syms: SudokuPartition,
}

impl TriPartition {
    pub fn new(rows: SudokuPartition, cols: SudokuPartition, syms: SudokuPartition) -> Result<Self> {
        if rows.order() != cols.order() || rows.order() != syms.order() {
            return Err(Error::SizeMismatch {
                expected: rows.order(),
                found: if rows.order() != cols.order() { cols.order() } else { syms.order() },
            });
        }
        Ok(TriPartition { rows, cols, syms })
    }

    pub fn standard(rank: usize) -> Self {
        Self::synchronized(SudokuPartition::standard(rank))
    }

    pub fn synchronized(p: SudokuPartition) -> Self {
        TriPartition {
            rows: p.clone(),
            cols: p.clone(),
            syms: p,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.rank()
    }

    pub fn is_synchronized(&self) -> bool {
        self.rows == self.cols && self.cols == self.syms
    }

    fn component(&self, i: usize) -> &SudokuPartition {
        match i {
            0 => &self.rows,
            1 => &self.cols,
            _ => &self.syms,
        }
    }

    /// The tri-partition matching the conjugate `L^θ`.
    pub fn conjugate(&self, theta: ConjugateLabel) -> Self {
        let t = theta.positions();
        TriPartition {
            rows: self.component(t[0]).clone(),
            cols: self.component(t[1]).clone(),
            syms: self.component(t[2]).clone(),
        }
    }

    /// Image under an isotopism `(α, β, γ)`.
    pub fn image(&self, iso: &crate::square::Isotopism) -> Self {
        TriPartition {
            rows: self.rows.image(&iso.alpha),
            cols: self.cols.image(&iso.beta),
            syms: self.syms.image(&iso.gamma),
        }
    }
}

impl fmt::Debug for TriPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TriPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {} | {}", self.rows, self.cols, self.syms)
    }
}

impl FromStr for TriPartition {
    type Err = Error;

    /// Accepts `P | P | P`, or three brace groups optionally wrapped in
    /// parentheses and separated by commas.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<String> = if s.contains(" | ") {
            s.split(" | ").map(str::to_string).collect()
        } else {
            s.split_inclusive('}')
                .map(|p| p.trim().trim_start_matches(',').trim().to_string())
                .filter(|p| !p.is_empty())
                .collect()
        };
        if parts.len() != 3 {
            return Err(Error::InvalidPartition(format!("expected three partitions: {s}")));
        }
        TriPartition::new(parts[0].parse()?, parts[1].parse()?, parts[2].parse()?)
    }
}
