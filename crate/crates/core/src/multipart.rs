//! Tri-partitions, synchronized partitions and the synchronization search.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::partition::{SudokuPartition, TriPartition};
use crate::perm::Permutation;
use crate::square::{rank_of, Isotopism, LatinSquare};
use crate::sudoku::{is_division_sudoku, is_standard_division_sudoku};

/// Every sudoku partition of `0..m²`, in lexicographic order of block labels.
pub struct PartitionUniverse {
    rank: usize,
    labels: Vec<u8>,
}

impl PartitionUniverse {
    pub fn new(rank: usize) -> Self {
        fn go(e: usize, n: usize, m: usize, used: usize, sizes: &mut [usize], cur: &mut [u8], out: &mut Vec<u8>) {
            if e == n {
                out.extend_from_slice(cur);
                return;
            }
            for b in 0..m.min(used + 1) {
                if sizes[b] < m {
                    sizes[b] += 1;
                    cur[e] = b as u8;
                    go(e + 1, n, m, used.max(b + 1), sizes, cur, out);
                    sizes[b] -= 1;
                }
            }
        }
        let n = rank * rank;
        let mut labels = Vec::new();
        go(0, n, rank, 0, &mut vec![0; rank], &mut vec![0; n], &mut labels);
        PartitionUniverse { rank, labels }
    }

    /// Cached universes for ranks up to 4.
    pub fn cached(rank: usize) -> &'static PartitionUniverse {
        static CACHE: [OnceLock<PartitionUniverse>; 5] =
            [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
        assert!((1..=4).contains(&rank), "no cached universe for rank {rank}");
        CACHE[rank].get_or_init(|| PartitionUniverse::new(rank))
    }

    /// `(m²)! / ((m!)^m · m!)`.
    pub fn expected_len(rank: usize) -> u128 {
        let fact = |k: usize| (1..=k as u128).product::<u128>();
        fact(rank * rank) / (fact(rank).pow(rank as u32) * fact(rank))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.labels.len() / (self.rank * self.rank)
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self, i: usize) -> &[u8] {
        let n = self.rank * self.rank;
        &self.labels[i * n..(i + 1) * n]
    }

    pub fn get(&self, i: usize) -> SudokuPartition {
        let labels: Vec<usize> = self.labels(i).iter().map(|&b| b as usize).collect();
        SudokuPartition::from_labels(&labels).expect("universe holds partitions")
    }

    pub fn iter(&self) -> impl Iterator<Item = SudokuPartition> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }
}

/// Division-sudoku test for the synchronized tri-partition given by block
/// labels, with early exit.
fn is_ds_synchronized(l: &LatinSquare, lab: &[u8], m: usize, scratch: &mut [u32]) -> bool {
    let n = l.order();
    scratch.iter_mut().for_each(|s| *s = 0);
    let (bs, rest) = scratch.split_at_mut(m * m);
    let (bp, sp) = rest.split_at_mut(m * m);
    for x in 0..n {
        let bx = lab[x] as usize;
        for y in 0..n {
            let z = l.get(x, y);
            let (by, bz) = (lab[y] as usize, lab[z] as usize);
            let k = bx * m + by;
            if bs[k] >> z & 1 == 1 {
                return false;
            }
            bs[k] |= 1 << z;
            let k = bx * m + bz;
            if bp[k] >> y & 1 == 1 {
                return false;
            }
            bp[k] |= 1 << y;
            let k = by * m + bz;
            if sp[k] >> x & 1 == 1 {
                return false;
            }
            sp[k] |= 1 << x;
        }
    }
    true
}

/// Partitions `p` with `L` a division sudoku for `(p, p, p)`, by scanning the
/// whole universe.
pub fn sigma_scan(l: &LatinSquare) -> Result<Vec<SudokuPartition>> {
    let m = rank_of(l.order()).ok_or(Error::NotSquareOrder { order: l.order() })?;
    if m > 4 {
        return Err(Error::UnsupportedRank { expected: 4, found: m });
    }
    let u = PartitionUniverse::cached(m);
    let hits: Vec<usize> = (0..u.len())
        .into_par_iter()
        .with_min_len(4096)
        .map_init(|| vec![0u32; 3 * m * m], |scratch, i| (i, is_ds_synchronized(l, u.labels(i), m, scratch)))
        .filter_map(|(i, ok)| ok.then_some(i))
        .collect();
    Ok(hits.into_iter().map(|i| u.get(i)).collect())
}

/// Synchronized partitions making `L` a division sudoku; via the
/// tri-partition list at rank 3, by a universe scan otherwise.
pub fn sigma(l: &LatinSquare) -> Result<Vec<SudokuPartition>> {
    if l.order() == 9 {
        Ok(tri_partitions(l)?.into_iter().filter(TriPartition::is_synchronized).map(|t| t.rows).collect())
    } else {
        sigma_scan(l)
    }
}

/// Partitions of a 3×3 grid's cells into three transversals, as lists of
/// three cell-index triples; there are exactly two.
pub fn transversal_partitions_3x3() -> Vec<Vec<[usize; 3]>> {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let transversal = |p: &[usize; 3]| [p[0], 3 + p[1], 6 + p[2]];
    let mut out = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            for k in j + 1..6 {
                let ts = [transversal(&perms[i]), transversal(&perms[j]), transversal(&perms[k])];
                let mask = ts.iter().flatten().fold(0u16, |m, &c| m | 1 << c);
                if mask == 0x1ff {
                    out.push(ts.to_vec());
                }
            }
        }
    }
    out
}

fn triple_mask(t: &[usize]) -> u16 {
    t.iter().fold(0, |m, &e| m | 1 << e)
}

/// All tri-partitions making an order-9 square a division sudoku, sorted.
pub fn tri_partitions(l: &LatinSquare) -> Result<Vec<TriPartition>> {
    if l.order() != 9 {
        return Err(Error::UnsupportedRank { expected: 3, found: rank_of(l.order()).unwrap_or(0) });
    }
    let universe = PartitionUniverse::cached(3);
    let triples: Vec<[usize; 3]> = (0..9)
        .flat_map(|a| (a + 1..9).flat_map(move |b| (b + 1..9).map(move |c| [a, b, c])))
        .collect();
    let mut found = BTreeSet::new();
    for rows in universe.iter() {
        let bands = rows.blocks();
        // column triples S with band × S covering all symbols, for every band
        let good: Vec<u16> = triples
            .iter()
            .filter(|s| {
                bands.iter().all(|b| {
                    let mask = b.iter().flat_map(|&x| s.iter().map(move |&y| (x, y))).fold(0u16, |m, (x, y)| m | 1 << l.get(x, y));
                    mask == 0x1ff
                })
            })
            .map(|s| triple_mask(s))
            .collect();
        for &s1 in good.iter().filter(|&&s| s & 1 == 1) {
            for &s2 in &good {
                let rest = 0x1ff & !s1 & !s2;
                if s1 & s2 != 0 || s2.trailing_zeros() != (0x1ff & !s1).trailing_zeros() || !good.contains(&rest) {
                    continue;
                }
                let cols = SudokuPartition::from_blocks(&[mask_elems(s1), mask_elems(s2), mask_elems(rest)])?;
                let b1 = &bands[0];
                let c1 = mask_elems(s1);
                for anti in [false, true] {
                    let piles: Vec<Vec<usize>> = (0..3)
                        .map(|k| {
                            (0..3)
                                .map(|r| {
                                    let c = if anti { (k + 3 - r) % 3 } else { (r + k) % 3 };
                                    l.get(b1[r], c1[c])
                                })
                                .collect()
                        })
                        .collect();
                    let syms = SudokuPartition::from_blocks(&piles)?;
                    let tri = TriPartition::new(rows.clone(), cols.clone(), syms)?;
                    if is_division_sudoku(l, &tri)? {
                        found.insert(tri);
                    }
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

fn mask_elems(mask: u16) -> Vec<usize> {
    (0..16).filter(|&i| mask >> i & 1 == 1).collect()
}

/// `π(L)`.
pub fn pi(l: &LatinSquare) -> Result<usize> {
    Ok(tri_partitions(l)?.len())
}

/// A group of permutations, stored as its element list.
#[derive(Clone, Debug)]
pub struct PartitionGroup {
    elements: Vec<Permutation>,
}

impl PartitionGroup {
    /// The `(m!)^(m+1)` permutations preserving the standard partition.
    pub fn standard(rank: usize) -> Self {
        fn perms(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(k - 1) {
                for pos in 0..k {
                    let mut q = p.clone();
                    q.insert(pos, k - 1);
                    out.push(q);
                }
            }
            out
        }
        let sm = perms(rank);
        let mut elements = Vec::new();
        // index tuple over (block permutation, one inner permutation per block)
        let total = sm.len().pow(rank as u32 + 1);
        for mut code in 0..total {
            let outer = &sm[code % sm.len()];
            code /= sm.len();
            let mut images = vec![0; rank * rank];
            for b in 0..rank {
                let inner = &sm[code % sm.len()];
                code /= sm.len();
                for i in 0..rank {
                    images[b * rank + i] = outer[b] * rank + inner[i];
                }
            }
            elements.push(Permutation::from_images(images).expect("block permutation"));
        }
        elements.sort();
        PartitionGroup { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn stabilizer(&self, p: &SudokuPartition) -> Self {
        PartitionGroup { elements: self.elements.iter().filter(|g| p.is_preserved_by(g)).cloned().collect() }
    }

    /// First element (in sorted order) with `g(from) = to`.
    pub fn mapping(&self, from: &SudokuPartition, to: &SudokuPartition) -> Option<&Permutation> {
        self.elements.iter().find(|g| from.image(g) == *to)
    }

    pub fn orbit(&self, p: &SudokuPartition) -> BTreeSet<SudokuPartition> {
        self.elements.iter().map(|g| p.image(g)).collect()
    }

    /// Whether some element maps the set `a` onto the set `b`.
    pub fn maps_set(&self, a: &[SudokuPartition], b: &[SudokuPartition]) -> bool {
        let target: BTreeSet<&SudokuPartition> = b.iter().collect();
        if target.len() != a.len() {
            return false;
        }
        self.elements.iter().any(|g| {
            let img: BTreeSet<SudokuPartition> = a.iter().map(|p| p.image(g)).collect();
            img.len() == target.len() && img.iter().all(|p| target.contains(p))
        })
    }
}

/// Result of [`synchronize`].
#[derive(Clone, Debug)]
pub struct Synchronized {
    /// A member of the input's ds-class with the largest `σ`.
    pub square: LatinSquare,
    /// ds-isotopism from the input to `square`.
    pub isotopism: Isotopism,
    /// The synchronized partitions of `square`, recomputed from scratch.
    pub partitions: Vec<SudokuPartition>,
}

impl Synchronized {
    pub fn sigma(&self) -> usize {
        self.partitions.len()
    }
}

struct SyncSearch<'a> {
    tris: &'a [TriPartition],
    best: Option<(usize, Permutation, Permutation)>,
}

impl SyncSearch<'_> {
    fn synchronized_count(&self, beta: &Permutation, gamma: &Permutation) -> usize {
        self.tris
            .iter()
            .filter(|t| {
                let s = t.cols.image(beta);
                s == t.rows && t.syms.image(gamma) == t.rows
            })
            .count()
    }

    fn run(&mut self, i: usize, included: usize, beta: &Permutation, gamma: &Permutation, h: &PartitionGroup) {
        let bound = included + (self.tris.len() - i);
        if self.best.as_ref().is_some_and(|b| b.0 >= bound) {
            return;
        }
        if i == self.tris.len() {
            let count = self.synchronized_count(beta, gamma);
            if self.best.as_ref().is_none_or(|b| count > b.0) {
                self.best = Some((count, beta.clone(), gamma.clone()));
            }
            return;
        }
        let t = &self.tris[i];
        let target = &t.rows;
        let cols = t.cols.image(beta);
        let syms = t.syms.image(gamma);
        // include: move this tri-partition onto its row partition inside H
        if let (Some(g), Some(k)) = (h.mapping(&cols, target), h.mapping(&syms, target)) {
            let beta2 = beta.then(g);
            let gamma2 = gamma.then(k);
            let h2 = h.stabilizer(target);
            self.run(i + 1, included + 1, &beta2, &gamma2, &h2);
        }
        self.run(i + 1, included, beta, gamma, h);
    }
}

/// Finds a member of the ds-class of a rank-3 standard division sudoku with
/// the largest number of synchronized partitions.
pub fn synchronize(l: &LatinSquare) -> Result<Synchronized> {
    if l.order() != 9 {
        return Err(Error::UnsupportedRank { expected: 3, found: rank_of(l.order()).unwrap_or(0) });
    }
    if !is_standard_division_sudoku(l) {
        return Err(Error::NotDivisionSudoku("synchronize needs a standard division sudoku".into()));
    }
    let tris = tri_partitions(l)?;
    let group = PartitionGroup::standard(3);
    let id = Permutation::identity(9);
    let mut search = SyncSearch { tris: &tris, best: None };
    search.run(0, 0, &id, &id, &group);
    let (_, beta, gamma) = search.best.expect("the standard partition is always synchronized");
    let isotopism = Isotopism::new(id, beta, gamma)?;
    let square = l.apply_isotopism(&isotopism)?;
    let partitions = sigma(&square)?;
    Ok(Synchronized { square, isotopism, partitions })
}

/// Every two blocks from two different partitions meet in exactly one point.
pub fn is_affine_collection(parts: &[SudokuPartition]) -> Result<bool> {
    if let Some(p) = parts.first() {
        if let Some(q) = parts.iter().find(|q| q.order() != p.order()) {
            return Err(Error::SizeMismatch { expected: p.order(), found: q.order() });
        }
    }
    for (i, p) in parts.iter().enumerate() {
        for q in &parts[i + 1..] {
            let m = p.rank();
            let mut meet = vec![0usize; m * m];
            for e in 0..p.order() {
                meet[p.block_of(e) * m + q.block_of(e)] += 1;
            }
            if meet.iter().any(|&c| c != 1) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
