//! Intercalate structure invariant ι and minisquare structure invariant μ of
//! rank-3 standard division sudokus.

use std::fmt;

use crate::error::{Error, Result};
use crate::square::{ConjugateLabel, LatinSquare};
use crate::sudoku::is_standard_division_sudoku;

/// A 2×2 latin subsquare; all pairs are stored in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Intercalate {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
    pub symbols: (usize, usize),
}

impl Intercalate {
    pub fn cells(&self) -> [(usize, usize); 4] {
        let (r1, r2) = self.rows;
        let (c1, c2) = self.cols;
        [(r1, c1), (r1, c2), (r2, c1), (r2, c2)]
    }
}

/// All intercalates, each once, ordered by rows then columns.
pub fn find_intercalates(l: &LatinSquare) -> Vec<Intercalate> {
    let n = l.order();
    let mut out = Vec::new();
    for r1 in 0..n {
        for r2 in r1 + 1..n {
            for c1 in 0..n {
                let s1 = l.get(r1, c1);
                let s2 = l.get(r2, c1);
                let c2 = l.ldiv(r1, s2);
                if c2 > c1 && l.get(r2, c2) == s1 {
                    out.push(Intercalate {
                        rows: (r1, r2),
                        cols: (c1, c2),
                        symbols: (s1.min(s2), s1.max(s2)),
                    });
                }
            }
        }
    }
    out
}

pub fn count_intercalates(l: &LatinSquare) -> usize {
    find_intercalates(l).len()
}

const PERMS3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Common behaviour of the two invariants: relabelling by permutations of
/// bands, stacks and piles, and a canonical key that is the minimum over all
/// 216 relabellings.
pub trait StructureInvariant: Sized + Copy + Eq {
    fn relabel(&self, bands: [usize; 3], stacks: [usize; 3], piles: [usize; 3]) -> Self;

    fn raw(&self) -> u64;

    fn relabelings(&self) -> impl Iterator<Item = Self> {
        PERMS3.iter().flat_map(move |&b| {
            PERMS3
                .iter()
                .flat_map(move |&s| PERMS3.iter().map(move |&p| self.relabel(b, s, p)))
        })
    }

    fn canonical_key(&self) -> u64 {
        self.relabelings().map(|x| x.raw()).min().unwrap()
    }

    /// Some relabelling maps `self` onto `other`.
    fn equivalent(&self, other: &Self) -> bool {
        self.relabelings().any(|x| x == *other)
    }
}

/// `ι_L`, a {0,1} array indexed by (band, stack, pile).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntercalateInvariant {
    bits: u32,
}

impl IntercalateInvariant {
    #[inline]
    fn index(b: usize, s: usize, p: usize) -> usize {
        b * 9 + s * 3 + p
    }

    pub fn from_hyperedges(edges: &[(usize, usize, usize)]) -> Self {
        let mut bits = 0;
        for &(b, s, p) in edges {
            bits |= 1 << Self::index(b, s, p);
        }
        IntercalateInvariant { bits }
    }

    pub fn get(&self, band: usize, stack: usize, pile: usize) -> bool {
        self.bits >> Self::index(band, stack, pile) & 1 == 1
    }

    /// Set entries as 0-based `(band, stack, pile)`, lexicographically sorted.
    pub fn hyperedges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for b in 0..3 {
            for s in 0..3 {
                for p in 0..3 {
                    if self.get(b, s, p) {
                        out.push((b, s, p));
                    }
                }
            }
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }
}

impl StructureInvariant for IntercalateInvariant {
    fn relabel(&self, bands: [usize; 3], stacks: [usize; 3], piles: [usize; 3]) -> Self {
        let mut bits = 0;
        for (b, s, p) in self.hyperedges() {
            bits |= 1 << Self::index(bands[b], stacks[s], piles[p]);
        }
        IntercalateInvariant { bits }
    }

    fn raw(&self) -> u64 {
        self.bits as u64
    }
}

impl fmt::Debug for IntercalateInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sorted 1-based triples such as `(B1,S3,P3) (B2,S2,P1)`.
impl fmt::Display for IntercalateInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .hyperedges()
            .iter()
            .map(|(b, s, p)| format!("(B{},S{},P{})", b + 1, s + 1, p + 1))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn require_rank3_ds(l: &LatinSquare) -> Result<()> {
    match l.rank() {
        Some(3) => {}
        Some(m) => return Err(Error::UnsupportedRank { expected: 3, found: m }),
        None => return Err(Error::NotSquareOrder { order: l.order() }),
    }
    if !is_standard_division_sudoku(l) {
        return Err(Error::NotDivisionSudoku("invariants need a standard division sudoku".into()));
    }
    Ok(())
}

/// The block of rank 3 that contains both elements, or else avoids both.
#[inline]
fn band_of_pair(a: usize, b: usize) -> (usize, bool) {
    let (ba, bb) = (a / 3, b / 3);
    if ba == bb {
        (ba, true)
    } else {
        (3 - ba - bb, false)
    }
}

pub fn intercalate_invariant(l: &LatinSquare) -> Result<IntercalateInvariant> {
    require_rank3_ds(l)?;
    let mut bits = 0u32;
    for ic in find_intercalates(l) {
        let (b, in_band) = band_of_pair(ic.rows.0, ic.rows.1);
        let (s, in_stack) = band_of_pair(ic.cols.0, ic.cols.1);
        let (p, in_pile) = band_of_pair(ic.symbols.0, ic.symbols.1);
        assert!(
            u8::from(in_band) + u8::from(in_stack) + u8::from(in_pile) <= 1,
            "intercalate {ic:?} lies in two of band, stack, pile"
        );
        bits |= 1 << IntercalateInvariant::index(b, s, p);
    }
    Ok(IntercalateInvariant { bits })
}

/// Vertex classes of μ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Band,
    Stack,
    Pile,
}

impl Vertex {
    fn letter(self) -> char {
        match self {
            Vertex::Band => 'B',
            Vertex::Stack => 'S',
            Vertex::Pile => 'P',
        }
    }
}

/// Edge families of μ as (tail, head, conjugate in which the tail plays the
/// row role and the head the column role).
const FAMILIES: [(Vertex, Vertex, ConjugateLabel); 6] = [
    (Vertex::Band, Vertex::Stack, ConjugateLabel::IDENTITY),
    (Vertex::Stack, Vertex::Band, ConjugateLabel::T12),
    (Vertex::Band, Vertex::Pile, ConjugateLabel::T23),
    (Vertex::Pile, Vertex::Band, ConjugateLabel::C132),
    (Vertex::Stack, Vertex::Pile, ConjugateLabel::C123),
    (Vertex::Pile, Vertex::Stack, ConjugateLabel::T13),
];

/// `μ_L`, a directed graph on bands, stacks and piles.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinisquareInvariant {
    bits: u64,
}

/// A directed edge `tail_i → head_j`, 0-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub tail: (Vertex, usize),
    pub head: (Vertex, usize),
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}->{}{}",
            self.tail.0.letter(),
            self.tail.1 + 1,
            self.head.0.letter(),
            self.head.1 + 1
        )
    }
}

impl MinisquareInvariant {
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for (f, &(tail, head, _)) in FAMILIES.iter().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    if self.bits >> (f * 9 + i * 3 + j) & 1 == 1 {
                        out.push(Edge { tail: (tail, i), head: (head, j) });
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn from_edges(edges: &[Edge]) -> Self {
        let mut bits = 0u64;
        for e in edges {
            let f = FAMILIES
                .iter()
                .position(|&(t, h, _)| t == e.tail.0 && h == e.head.0)
                .expect("edges join distinct vertex classes");
            bits |= 1 << (f * 9 + e.tail.1 * 3 + e.head.1);
        }
        MinisquareInvariant { bits }
    }

    pub fn edge_strings(&self) -> Vec<String> {
        self.edges().iter().map(Edge::to_string).collect()
    }
}

impl StructureInvariant for MinisquareInvariant {
    fn relabel(&self, bands: [usize; 3], stacks: [usize; 3], piles: [usize; 3]) -> Self {
        let pick = |v: Vertex| match v {
            Vertex::Band => bands,
            Vertex::Stack => stacks,
            Vertex::Pile => piles,
        };
        let mut bits = 0u64;
        for (f, &(tail, head, _)) in FAMILIES.iter().enumerate() {
            let (pt, ph) = (pick(tail), pick(head));
            for i in 0..3 {
                for j in 0..3 {
                    if self.bits >> (f * 9 + i * 3 + j) & 1 == 1 {
                        bits |= 1 << (f * 9 + pt[i] * 3 + ph[j]);
                    }
                }
            }
        }
        MinisquareInvariant { bits }
    }

    fn raw(&self) -> u64 {
        self.bits
    }
}

impl fmt::Debug for MinisquareInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MinisquareInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.edge_strings().join(" "))
    }
}

/// Row-block → column-block edges of a standard rank-3 square: `i → j` when
/// the two minisquares of row block `i` outside column block `j` have the
/// same set of minicolumn symbol sets.
fn row_col_edges(l: &LatinSquare) -> [[bool; 3]; 3] {
    let minicolumns = |i: usize, j: usize| -> [u16; 3] {
        let mut sets = [0u16; 3];
        for (k, set) in sets.iter_mut().enumerate() {
            let c = 3 * j + k;
            for r in 3 * i..3 * i + 3 {
                *set |= 1 << l.get(r, c);
            }
        }
        sets.sort_unstable();
        sets
    };
    let mut out = [[false; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, edge) in row.iter_mut().enumerate() {
            let others: Vec<usize> = (0..3).filter(|&k| k != j).collect();
            *edge = minicolumns(i, others[0]) == minicolumns(i, others[1]);
        }
    }
    out
}

pub fn minisquare_invariant(l: &LatinSquare) -> Result<MinisquareInvariant> {
    require_rank3_ds(l)?;
    let mut bits = 0u64;
    for (f, &(_, _, theta)) in FAMILIES.iter().enumerate() {
        let edges = row_col_edges(&l.conjugate(theta));
        for (i, row) in edges.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                if e {
                    bits |= 1 << (f * 9 + i * 3 + j);
                }
            }
        }
    }
    Ok(MinisquareInvariant { bits })
}

/// Either invariant, for callers that handle both kinds uniformly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Invariant {
    Intercalate(IntercalateInvariant),
    Minisquare(MinisquareInvariant),
}

/// Opaque comparable key; equal keys mean equivalent invariants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantKey {
    kind: u8,
    key: u64,
}

impl Invariant {
    pub fn canonical_key(&self) -> InvariantKey {
        match self {
            Invariant::Intercalate(i) => InvariantKey { kind: 0, key: i.canonical_key() },
            Invariant::Minisquare(m) => InvariantKey { kind: 1, key: m.canonical_key() },
        }
    }
}

pub fn invariants_equivalent(a: &Invariant, b: &Invariant) -> Result<bool> {
    match (a, b) {
        (Invariant::Intercalate(x), Invariant::Intercalate(y)) => Ok(x.equivalent(y)),
        (Invariant::Minisquare(x), Invariant::Minisquare(y)) => Ok(x.equivalent(y)),
        _ => Err(Error::KindMismatch),
    }
}

/// Both canonical keys of a square.
pub fn combined_key(l: &LatinSquare) -> Result<(u64, u64)> {
    Ok((
        intercalate_invariant(l)?.canonical_key(),
        minisquare_invariant(l)?.canonical_key(),
    ))
}
