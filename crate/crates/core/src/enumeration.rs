//! The canonical partial table every standard division sudoku of rank 3 can
//! be moved onto, an exhaustive completion search, and canonicalization.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::square::{rank_of, Isotopism, LatinSquare, PartialLatinSquare};
use crate::sudoku::is_standard_division_sudoku;

/// Number of template extensions; the search must reproduce it.
pub const EXTENSION_COUNT: usize = 7741;

/// Standard division sudokus ds-isotopic to one template extension:
/// `|S3|^4 · |C2|` for the top-left minisquare, then `|S3|^2 · |C2|` for each
/// of band 1 and stack 1.
pub fn class_multiplier() -> u64 {
    let s3 = 6u64;
    let c2 = 2u64;
    s3.pow(4) * c2 * (s3.pow(2) * c2).pow(2)
}

/// `class_multiplier() · extensions`.
pub fn total_standard_count_from(extensions: usize) -> u64 {
    class_multiplier() * extensions as u64
}

/// Total number of standard division sudokus of rank 3, from a fresh
/// enumeration.
pub fn total_standard_count() -> u64 {
    total_standard_count_from(count_extensions())
}

const TOP_LEFT: [[usize; 3]; 3] = [[1, 4, 7], [8, 2, 5], [6, 9, 3]];
const BAND_ONE: [(usize, usize, usize); 6] = [(1, 4, 2), (2, 5, 3), (3, 6, 1), (1, 7, 3), (2, 8, 1), (3, 9, 2)];

/// The 21-cell partial square every standard representative is brought to.
pub fn template() -> PartialLatinSquare {
    let mut p = PartialLatinSquare::empty(9);
    for (x, row) in TOP_LEFT.iter().enumerate() {
        for (y, &z) in row.iter().enumerate() {
            p.set(x, y, z - 1).unwrap();
        }
    }
    for &(x, y, z) in &BAND_ONE {
        p.set(x - 1, y - 1, z - 1).unwrap();
        p.set(y - 1, x - 1, z - 1).unwrap();
    }
    p
}

pub fn is_template_extension(l: &LatinSquare) -> bool {
    template().is_extended_by(l) && is_standard_division_sudoku(l)
}

/// Backtracking state for completing a partial table to a division sudoku
/// with respect to the standard partition of rank `m`.
///
/// Besides the usual row, column and minisquare masks, the state tracks for
/// every (band, pile) the columns already used and for every (stack, pile)
/// the rows already used. These are the conditions on `/` and `\`: two cells
/// of one band with symbols in one pile never share a column, and dually.
#[derive(Clone)]
pub struct SearchState {
    m: usize,
    n: usize,
    cells: Vec<u8>,
    row_syms: Vec<u32>,
    col_syms: Vec<u32>,
    box_syms: Vec<u32>,
    band_pile_cols: Vec<u32>,
    stack_pile_rows: Vec<u32>,
    pile_masks: Vec<u32>,
    empty: usize,
}

const EMPTY: u8 = u8::MAX;

impl SearchState {
    pub fn new(partial: &PartialLatinSquare) -> Result<Self> {
        let n = partial.order();
        let m = rank_of(n).ok_or(Error::NotSquareOrder { order: n })?;
        if n > 32 {
            return Err(Error::InvalidParameter(format!("order {n} too large for search")));
        }
        let pile_masks = (0..m).map(|p| (((1u64 << m) - 1) << (p * m)) as u32).collect();
        let mut s = SearchState {
            m,
            n,
            cells: vec![EMPTY; n * n],
            row_syms: vec![0; n],
            col_syms: vec![0; n],
            box_syms: vec![0; n],
            band_pile_cols: vec![0; n],
            stack_pile_rows: vec![0; n],
            pile_masks,
            empty: n * n,
        };
        for [x, y, z] in partial.filled() {
            if s.candidates(x, y) >> z & 1 == 0 {
                return Err(Error::NotDivisionSudoku(format!(
                    "cell ({}, {}) = {} conflicts with earlier cells",
                    x + 1,
                    y + 1,
                    z + 1
                )));
            }
            s.place(x, y, z);
        }
        Ok(s)
    }

    #[inline]
    fn candidates(&self, x: usize, y: usize) -> u32 {
        let (m, n) = (self.m, self.n);
        let (b, s) = (x / m, y / m);
        let mut free = !(self.row_syms[x] | self.col_syms[y] | self.box_syms[b * m + s]);
        for p in 0..m {
            if self.band_pile_cols[b * m + p] >> y & 1 == 1 || self.stack_pile_rows[s * m + p] >> x & 1 == 1 {
                free &= !self.pile_masks[p];
            }
        }
        free & ((1u64 << n) - 1) as u32
    }

    #[inline]
    fn toggle(&mut self, x: usize, y: usize, z: usize) {
        let m = self.m;
        let (b, s, p) = (x / m, y / m, z / m);
        self.row_syms[x] ^= 1 << z;
        self.col_syms[y] ^= 1 << z;
        self.box_syms[b * m + s] ^= 1 << z;
        self.band_pile_cols[b * m + p] ^= 1 << y;
        self.stack_pile_rows[s * m + p] ^= 1 << x;
    }

    fn place(&mut self, x: usize, y: usize, z: usize) {
        self.toggle(x, y, z);
        self.cells[x * self.n + y] = z as u8;
        self.empty -= 1;
    }

    fn unplace(&mut self, x: usize, y: usize, z: usize) {
        self.toggle(x, y, z);
        self.cells[x * self.n + y] = EMPTY;
        self.empty += 1;
    }

    /// The empty cell with fewest candidates, with its candidate mask.
    fn most_constrained(&self) -> Option<(usize, u32)> {
        let n = self.n;
        let mut best: Option<(usize, u32)> = None;
        for i in 0..n * n {
            if self.cells[i] != EMPTY {
                continue;
            }
            let c = self.candidates(i / n, i % n);
            let k = c.count_ones();
            if k == 0 {
                return Some((i, 0));
            }
            if best.is_none_or(|(_, b)| k < b.count_ones()) {
                best = Some((i, c));
                if k == 1 {
                    break;
                }
            }
        }
        best
    }

    fn first_empty(&self) -> Option<usize> {
        self.cells.iter().position(|&c| c == EMPTY)
    }

    fn search(&mut self, visit: &mut dyn FnMut(&[u8])) {
        if self.empty == 0 {
            visit(&self.cells);
            return;
        }
        let Some((i, mut cand)) = self.most_constrained() else { return };
        let (x, y) = (i / self.n, i % self.n);
        while cand != 0 {
            let z = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            self.place(x, y, z);
            self.search(visit);
            self.unplace(x, y, z);
        }
    }

    /// Independent subproblems obtained by fixing the first `depth` empty
    /// cells in row-major order.
    fn split(&self, depth: usize) -> Vec<SearchState> {
        let mut frontier = vec![self.clone()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for st in frontier {
                let Some(i) = st.first_empty() else {
                    next.push(st);
                    continue;
                };
                let (x, y) = (i / st.n, i % st.n);
                let mut cand = st.candidates(x, y);
                while cand != 0 {
                    let z = cand.trailing_zeros() as usize;
                    cand &= cand - 1;
                    let mut child = st.clone();
                    child.place(x, y, z);
                    next.push(child);
                }
            }
            frontier = next;
        }
        frontier
    }

    fn to_square(&self, cells: &[u8]) -> LatinSquare {
        LatinSquare::new(self.n, cells.iter().map(|&c| c as usize).collect())
            .expect("completed search state is latin")
    }
}

/// All completions of `partial` to a division sudoku with respect to the
/// standard partition, sorted lexicographically.
pub fn complete_partial(partial: &PartialLatinSquare) -> Result<Vec<LatinSquare>> {
    let mut st = match SearchState::new(partial) {
        Ok(st) => st,
        Err(Error::NotDivisionSudoku(_)) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let proto = st.clone();
    let mut out = Vec::new();
    st.search(&mut |cells| out.push(proto.to_square(cells)));
    out.sort();
    Ok(out)
}

/// Number of completions, without materializing them.
pub fn count_completions(partial: &PartialLatinSquare) -> Result<usize> {
    let mut st = match SearchState::new(partial) {
        Ok(st) => st,
        Err(Error::NotDivisionSudoku(_)) => return Ok(0),
        Err(e) => return Err(e),
    };
    let mut count = 0;
    st.search(&mut |_| count += 1);
    Ok(count)
}

/// Every standard division sudoku of rank 3 extending [`template`], sorted.
pub fn enumerate_extensions() -> Vec<LatinSquare> {
    complete_partial(&template()).expect("template is consistent")
}

/// Same output as [`enumerate_extensions`], with subtrees searched on the
/// current rayon pool after fixing the first two empty cells.
pub fn enumerate_extensions_parallel() -> Vec<LatinSquare> {
    let root = SearchState::new(&template()).expect("template is consistent");
    let mut out: Vec<LatinSquare> = root
        .split(2)
        .into_par_iter()
        .flat_map_iter(|mut st| {
            let proto = st.clone();
            let mut part = Vec::new();
            st.search(&mut |cells| part.push(proto.to_square(cells)));
            part
        })
        .collect();
    out.sort();
    out
}

pub fn count_extensions() -> usize {
    count_completions(&template()).expect("template is consistent")
}

/// Moves a standard division sudoku of rank 3 onto an extension of
/// [`template`] by a ds-isotopism; returns the image and the isotopism.
pub fn canonicalize_to_template(l: &LatinSquare) -> Result<(LatinSquare, Isotopism)> {
    if l.order() != 9 {
        return Err(Error::UnsupportedRank { expected: 3, found: rank_of(l.order()).unwrap_or(0) });
    }
    if !is_standard_division_sudoku(l) {
        return Err(Error::NotDivisionSudoku("canonicalization needs a standard division sudoku".into()));
    }
    let pile = |z: usize| z / 3;

    // top-left minisquare: piles form either the broken diagonals or the
    // broken antidiagonals; a column swap turns the latter into the former
    let on_diagonal = pile(l.get(0, 0)) == pile(l.get(1, 1)) && pile(l.get(1, 1)) == pile(l.get(2, 2));
    let beta0 = if on_diagonal {
        Permutation::identity(9)
    } else {
        Permutation::from_images(vec![0, 2, 1, 3, 4, 5, 6, 7, 8]).unwrap()
    };
    let step0 = Isotopism::new(Permutation::identity(9), beta0, Permutation::identity(9))?;
    let l0 = l.apply_isotopism(&step0)?;

    let mut gamma = vec![usize::MAX; 9];
    for i in 0..3 {
        gamma[l0.get(i, i)] = i;
        gamma[l0.get(i, (i + 1) % 3)] = 3 + i;
        gamma[l0.get(i, (i + 2) % 3)] = 6 + i;
    }
    let step1 = Isotopism::new(
        Permutation::identity(9),
        Permutation::identity(9),
        Permutation::from_images(gamma)?,
    )?;
    let l1 = l0.apply_isotopism(&step1)?;

    // columns of stacks 2 and 3: the block-1 symbol of row r goes to column r
    // of its stack; swap the stacks if row 1 reads 3 before 2
    let mut beta = vec![usize::MAX; 9];
    beta[..3].copy_from_slice(&[0, 1, 2]);
    let swap_stacks = {
        let c = (3..6).find(|&c| l1.get(0, c) < 3).unwrap();
        l1.get(0, c) == 2
    };
    for s in 1..3 {
        let target = if swap_stacks { 3 - s } else { s };
        for r in 0..3 {
            let c = (3 * s..3 * s + 3).find(|&c| l1.get(r, c) < 3).unwrap();
            beta[c] = 3 * target + r;
        }
    }
    let step2 = Isotopism::new(
        Permutation::identity(9),
        Permutation::from_images(beta)?,
        Permutation::identity(9),
    )?;
    let l2 = l1.apply_isotopism(&step2)?;

    let mut alpha = vec![usize::MAX; 9];
    alpha[..3].copy_from_slice(&[0, 1, 2]);
    let swap_bands = {
        let r = (3..6).find(|&r| l2.get(r, 0) < 3).unwrap();
        l2.get(r, 0) == 2
    };
    for b in 1..3 {
        let target = if swap_bands { 3 - b } else { b };
        for c in 0..3 {
            let r = (3 * b..3 * b + 3).find(|&r| l2.get(r, c) < 3).unwrap();
            alpha[r] = 3 * target + c;
        }
    }
    let step3 = Isotopism::new(
        Permutation::from_images(alpha)?,
        Permutation::identity(9),
        Permutation::identity(9),
    )?;
    let out = l2.apply_isotopism(&step3)?;
    let iso = step0.then(&step1).then(&step2).then(&step3);
    debug_assert!(template().is_extended_by(&out));
    Ok((out, iso))
}
