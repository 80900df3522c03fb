//! Sudoku and division-sudoku predicates.
//!
//! Three independent routes decide division sudokus: the band/stack/pile
//! definition ([`is_division_sudoku`]), the conjugate route
//! ([`is_division_sudoku_by_conjugates`]), the pairwise quasi-equational
//! conditions ([`is_division_sudoku_quasi`]) and, for a single partition,
//! shredding by translations ([`is_division_sudoku_shred`]).

use crate::error::{Error, Result};
use crate::partition::{SudokuPartition, TriPartition};
use crate::perm::Permutation;
use crate::square::{ConjugateLabel, Isotopism, LatinSquare};

pub fn standard_partition(rank: usize) -> SudokuPartition {
    SudokuPartition::standard(rank)
}

fn check_size(l: &LatinSquare, tri: &TriPartition) -> Result<()> {
    if tri.rows.order() != l.order() {
        return Err(Error::SizeMismatch {
            expected: l.order(),
            found: tri.rows.order(),
        });
    }
    Ok(())
}

/// Every band ∩ stack contains all symbols.
pub fn is_sudoku(l: &LatinSquare, tri: &TriPartition) -> Result<bool> {
    check_size(l, tri)?;
    let n = l.order();
    let m = tri.rank();
    let mut seen = vec![false; m * m * n];
    for [x, y, z] in l.triples() {
        let k = (tri.rows.block_of(x) * m + tri.cols.block_of(y)) * n + z;
        if seen[k] {
            return Ok(false);
        }
        seen[k] = true;
    }
    Ok(true)
}

/// Band ∩ stack covers all symbols, band ∩ pile covers all columns and
/// stack ∩ pile covers all rows.
///
/// Each such intersection holds exactly `n` triples, so "covers all" is the
/// same as "no repeat".
pub fn is_division_sudoku(l: &LatinSquare, tri: &TriPartition) -> Result<bool> {
    Ok(first_violation(l, tri)?.is_none())
}

/// Where the direct definition fails first, if anywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Symbol repeated in the minisquare of band `band`, stack `stack` (0-based).
    BandStack { band: usize, stack: usize, symbol: usize },
    /// Column repeated in band ∩ pile.
    BandPile { band: usize, pile: usize, col: usize },
    /// Row repeated in stack ∩ pile.
    StackPile { stack: usize, pile: usize, row: usize },
}

pub fn first_violation(l: &LatinSquare, tri: &TriPartition) -> Result<Option<Violation>> {
    check_size(l, tri)?;
    let n = l.order();
    let m = tri.rank();
    let mut bs = vec![false; m * m * n];
    let mut bp = vec![false; m * m * n];
    let mut sp = vec![false; m * m * n];
    for [x, y, z] in l.triples() {
        let (b, s, p) = (tri.rows.block_of(x), tri.cols.block_of(y), tri.syms.block_of(z));
        let k = (b * m + s) * n + z;
        if std::mem::replace(&mut bs[k], true) {
            return Ok(Some(Violation::BandStack { band: b, stack: s, symbol: z }));
        }
        let k = (b * m + p) * n + y;
        if std::mem::replace(&mut bp[k], true) {
            return Ok(Some(Violation::BandPile { band: b, pile: p, col: y }));
        }
        let k = (s * m + p) * n + x;
        if std::mem::replace(&mut sp[k], true) {
            return Ok(Some(Violation::StackPile { stack: s, pile: p, row: x }));
        }
    }
    Ok(None)
}

/// `L`, `L^(1,3)` and `L^(2,3)` are sudokus for the matching tri-partitions.
pub fn is_division_sudoku_by_conjugates(l: &LatinSquare, tri: &TriPartition) -> Result<bool> {
    for theta in [ConjugateLabel::IDENTITY, ConjugateLabel::T13, ConjugateLabel::T23] {
        if !is_sudoku(&l.conjugate(theta), &tri.conjugate(theta))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The quantified conditions "x∼u, y∼v and x∘y = u∘v imply (x,y) = (u,v)"
/// for `∘` ranging over multiplication, right division and left division,
/// evaluated literally over all quadruples.
pub fn is_division_sudoku_quasi(l: &LatinSquare, tri: &TriPartition) -> Result<bool> {
    check_size(l, tri)?;
    let n = l.order();
    // (operation, partition of first argument, partition of second argument)
    let mul = |x: usize, y: usize| l.get(x, y);
    let rdiv = |x: usize, y: usize| l.rdiv(x, y);
    let ldiv = |x: usize, y: usize| l.ldiv(x, y);
    let ops: [(&dyn Fn(usize, usize) -> usize, &SudokuPartition, &SudokuPartition); 3] = [
        (&mul, &tri.rows, &tri.cols),
        (&rdiv, &tri.syms, &tri.cols),
        (&ldiv, &tri.rows, &tri.syms),
    ];
    for (op, left, right) in ops {
        for x in 0..n {
            for u in 0..n {
                if !left.same_block(x, u) {
                    continue;
                }
                for y in 0..n {
                    let xy = op(x, y);
                    for v in 0..n {
                        if right.same_block(y, v) && op(u, v) == xy && (x, y) != (u, v) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// `θ` shreds the partition: `|θ(X_i) ∩ X_j| = 1` for all blocks.
pub fn shreds(theta: &Permutation, p: &SudokuPartition) -> bool {
    if theta.degree() != p.order() {
        return false;
    }
    p.incidence(theta).iter().all(|row| row.iter().all(|&c| c == 1))
}

/// For every `x`, the maps `L_x`, `R_x` and `D_x` shred the partition.
///
/// Only defined for synchronized tri-partitions.
pub fn is_division_sudoku_shred(l: &LatinSquare, tri: &TriPartition) -> Result<bool> {
    check_size(l, tri)?;
    if !tri.is_synchronized() {
        return Err(Error::NotSynchronized);
    }
    let p = &tri.rows;
    for x in 0..l.order() {
        if !shreds(&l.left_translation(x), p)
            || !shreds(&l.right_translation(x), p)
            || !shreds(&l.division_map(x), p)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Convenience: division sudoku with respect to the standard partition.
pub fn is_standard_division_sudoku(l: &LatinSquare) -> bool {
    match l.rank() {
        Some(m) => is_division_sudoku(l, &TriPartition::standard(m)).unwrap_or(false),
        None => false,
    }
}

/// Number of triples with `x·(y·z) = (x·y)·z`.
pub fn count_associative_triples(l: &LatinSquare) -> usize {
    let n = l.order();
    let mut count = 0;
    for x in 0..n {
        for y in 0..n {
            let xy = l.get(x, y);
            for z in 0..n {
                if l.get(x, l.get(y, z)) == l.get(xy, z) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Moves a standard division sudoku onto an idempotent one by permuting rows
/// and columns inside each block.
///
/// In the diagonal minisquare of block `k`, the symbols of block `k` sit on a
/// transversal; sending the row and column of symbol `s` to `s` puts `s` at
/// `(s, s)`. For a square whose first diagonal minisquare already reads
/// `1, 2, ..., m` on its diagonal the first block is left alone.
pub fn make_idempotent(l: &LatinSquare) -> Result<(LatinSquare, Isotopism)> {
    let m = l.rank().ok_or(Error::NotSquareOrder { order: l.order() })?;
    if !is_standard_division_sudoku(l) {
        return Err(Error::NotDivisionSudoku("make_idempotent needs a standard division sudoku".into()));
    }
    let n = l.order();
    let mut alpha = vec![usize::MAX; n];
    let mut beta = vec![usize::MAX; n];
    for k in 0..m {
        for r in k * m..(k + 1) * m {
            for c in k * m..(k + 1) * m {
                let s = l.get(r, c);
                if s / m == k {
                    alpha[r] = s;
                    beta[c] = s;
                }
            }
        }
    }
    let iso = Isotopism::new(
        Permutation::from_images(alpha)?,
        Permutation::from_images(beta)?,
        Permutation::identity(n),
    )?;
    let out = l.apply_isotopism(&iso)?;
    debug_assert!(out.is_idempotent());
    Ok((out, iso))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use rand::SeedableRng;

    fn std3() -> TriPartition {
        TriPartition::standard(3)
    }

    #[test]
    fn l0_is_division_sudoku() {
        let l0 = corpus::named("L0");
        assert!(is_sudoku(&l0, &std3()).unwrap());
        assert!(is_division_sudoku(&l0, &std3()).unwrap());
        assert!(is_division_sudoku_quasi(&l0, &std3()).unwrap());
        assert!(is_division_sudoku_by_conjugates(&l0, &std3()).unwrap());
        assert!(is_division_sudoku_shred(&l0, &std3()).unwrap());
        assert_eq!(count_associative_triples(&l0), 9);
    }

    #[test]
    fn cyclic_nine_is_not_sudoku() {
        let c9 = LatinSquare::cyclic(9);
        // rows 0..2, cols 0..2 of x+y mod 9 hold 0,1,2,1,2,3,2,3,4
        assert!(!is_sudoku(&c9, &std3()).unwrap());
        assert_eq!(count_associative_triples(&c9), 729);
    }

    #[test]
    fn swapping_rows_across_bands_breaks_sudoku() {
        let l0 = corpus::named("L0");
        let swap = Permutation::from_cycles(9, &[&[1, 4]]).unwrap();
        let iso = Isotopism::new(swap, Permutation::identity(9), Permutation::identity(9)).unwrap();
        let moved = l0.apply_isotopism(&iso).unwrap();
        // brute-force scan of the top-left minisquare
        let mut syms: Vec<usize> = (0..3).flat_map(|x| (0..3).map(move |y| (x, y))).map(|(x, y)| moved.get(x, y)).collect();
        syms.sort();
        syms.dedup();
        assert!(syms.len() < 9);
        assert!(!is_sudoku(&moved, &std3()).unwrap());
    }

    #[test]
    fn shredding_examples() {
        let p = SudokuPartition::standard(3);
        assert!(!shreds(&Permutation::identity(9), &p));
        let theta = Permutation::from_images(vec![0, 3, 6, 1, 4, 7, 2, 5, 8]).unwrap();
        // direct count of |θ(X_i) ∩ X_j|
        for i in 0..3 {
            for j in 0..3 {
                let hits = (3 * i..3 * i + 3).filter(|&e| theta.apply(e) / 3 == j).count();
                assert_eq!(hits, 1);
            }
        }
        assert!(shreds(&theta, &p));
        let block_swap = Permutation::from_cycles(9, &[&[1, 4], &[2, 5], &[3, 6]]).unwrap();
        assert!(!shreds(&block_swap, &p));
    }

    #[test]
    fn shred_route_needs_synchronized_partition() {
        let l0 = corpus::named("L0");
        let tri: TriPartition = "{123 456 789} | {147 258 369} | {123 456 789}".parse().unwrap();
        assert_eq!(is_division_sudoku_shred(&l0, &tri), Err(Error::NotSynchronized));
        let l17 = corpus::named("L17");
        let sync = TriPartition::synchronized("{147 258 369}".parse().unwrap());
        assert!(is_division_sudoku_shred(&l17, &sync).unwrap());
        assert!(is_division_sudoku(&l17, &sync).unwrap());
    }

    #[test]
    fn size_mismatch_is_reported() {
        let l = LatinSquare::cyclic(4);
        assert!(is_division_sudoku(&l, &std3()).is_err());
        assert!(is_sudoku(&l, &std3()).is_err());
    }

    #[test]
    fn rank_one_is_vacuous() {
        let l = LatinSquare::cyclic(1);
        let t = TriPartition::standard(1);
        assert!(is_division_sudoku(&l, &t).unwrap());
        assert!(is_division_sudoku_shred(&l, &t).unwrap());
        assert!(is_division_sudoku_quasi(&l, &t).unwrap());
    }

    #[test]
    fn right_division_table_of_l0() {
        let l0 = corpus::named("L0");
        let r = l0.conjugate(ConjugateLabel::T13);
        for x in 0..9 {
            for y in 0..9 {
                // solve z·y = x by scanning column y
                let z = (0..9).find(|&z| l0.get(z, y) == x).unwrap();
                assert_eq!(r.get(x, y), z);
            }
        }
    }

    #[test]
    fn associative_triples_match_definition_on_random_order_five() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let q = crate::random::random_latin_square(5, &mut rng);
            let mut count = 0;
            for x in 0..5 {
                for y in 0..5 {
                    for z in 0..5 {
                        let left = q.cells()[x * 5 + q.cells()[y * 5 + z] as usize];
                        let right = q.cells()[q.cells()[x * 5 + y] as usize * 5 + z];
                        count += usize::from(left == right);
                    }
                }
            }
            assert_eq!(count_associative_triples(&q), count);
            assert!(count >= 5);
        }
    }

    #[test]
    fn idempotent_forms() {
        for i in [1, 17, 121, 179] {
            let l = corpus::ds(i);
            let (q, iso) = make_idempotent(&l).unwrap();
            assert!(q.is_idempotent(), "DS(9,{i})");
            assert!(iso.is_ds(&SudokuPartition::standard(3)));
            // first block untouched for template extensions
            for x in 0..3 {
                assert_eq!(iso.alpha.apply(x), x);
                assert_eq!(iso.beta.apply(x), x);
            }
            assert!(is_standard_division_sudoku(&q));
        }
        let q = corpus::named("Q");
        let (same, iso) = make_idempotent(&q).unwrap();
        assert_eq!(same, q);
        assert!(iso.is_identity());
        assert!(make_idempotent(&LatinSquare::cyclic(9)).is_err());
    }
}
