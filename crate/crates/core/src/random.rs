//! Random latin squares and sudokus for property tests and sampling.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::square::LatinSquare;

/// A random latin square of order `n ≤ 32`, built by randomized backtracking.
///
/// The distribution is not uniform but covers many isotopy classes.
pub fn random_latin_square<R: Rng + ?Sized>(n: usize, rng: &mut R) -> LatinSquare {
    fill(n, None, rng)
}

/// A random sudoku of rank `m` with respect to the standard partition.
pub fn random_sudoku<R: Rng + ?Sized>(m: usize, rng: &mut R) -> LatinSquare {
    fill(m * m, Some(m), rng)
}

fn fill<R: Rng + ?Sized>(n: usize, boxes: Option<usize>, rng: &mut R) -> LatinSquare {
    assert!(n <= 32);
    loop {
        let mut cells = vec![0usize; n * n];
        let mut rows = vec![0u32; n];
        let mut cols = vec![0u32; n];
        let mut boxm = vec![0u32; n];
        let box_of = |x: usize, y: usize| boxes.map_or(0, |m| (x / m) * m + y / m);
        // A restart budget keeps unlucky branches from running long.
        let mut budget = 20_000usize;
        if go(0, n, &mut cells, &mut rows, &mut cols, &mut boxm, &box_of, boxes.is_some(), rng, &mut budget) {
            return LatinSquare::new(n, cells).expect("filled square is latin");
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn go<R: Rng + ?Sized>(
    i: usize,
    n: usize,
    cells: &mut [usize],
    rows: &mut [u32],
    cols: &mut [u32],
    boxm: &mut [u32],
    box_of: &dyn Fn(usize, usize) -> usize,
    use_box: bool,
    rng: &mut R,
    budget: &mut usize,
) -> bool {
    if i == n * n {
        return true;
    }
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let (x, y) = (i / n, i % n);
    let b = box_of(x, y);
    let used = rows[x] | cols[y] | if use_box { boxm[b] } else { 0 };
    let mut options: Vec<usize> = (0..n).filter(|&z| used & (1 << z) == 0).collect();
    options.shuffle(rng);
    for z in options {
        let bit = 1u32 << z;
        rows[x] |= bit;
        cols[y] |= bit;
        if use_box {
            boxm[b] |= bit;
        }
        cells[i] = z;
        if go(i + 1, n, cells, rows, cols, boxm, box_of, use_box, rng, budget) {
            return true;
        }
        rows[x] &= !bit;
        cols[y] &= !bit;
        if use_box {
            boxm[b] &= !bit;
        }
    }
    false
}
