use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Returns `m` when `n = m²`.
pub fn rank_of(n: usize) -> Option<usize> {
    let m = (n as f64).sqrt().round() as usize;
    (m * m == n).then_some(m)
}

/// A latin square on `0..n`, read as the multiplication table of a quasigroup.
///
/// Alongside the table the square keeps the two division lookups, so `x \ z`
/// and `z / y` are O(1).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatinSquare {
    order: usize,
    cells: Vec<u8>,
    // row_pos[x*n + z] = y with x·y = z
    row_pos: Vec<u8>,
    // col_pos[y*n + z] = x with x·y = z
    col_pos: Vec<u8>,
}

impl LatinSquare {
    /// Validates a row-major table of 0-based symbols.
    pub fn new(order: usize, cells: Vec<usize>) -> Result<Self> {
        if cells.len() != order * order {
            return Err(Error::SizeMismatch {
                expected: order * order,
                found: cells.len(),
            });
        }
        if order > 255 {
            return Err(Error::InvalidParameter(format!("order {order} exceeds 255")));
        }
        for (i, &s) in cells.iter().enumerate() {
            if s >= order {
                return Err(Error::SymbolOutOfRange {
                    row: i / order + 1,
                    col: i % order + 1,
                    symbol: s + 1,
                    order,
                });
            }
        }
        let n = order;
        let mut row_pos = vec![u8::MAX; n * n];
        let mut col_pos = vec![u8::MAX; n * n];
        for x in 0..n {
            for y in 0..n {
                let z = cells[x * n + y];
                if row_pos[x * n + z] != u8::MAX {
                    return Err(Error::RowRepeat { row: x + 1, symbol: z + 1 });
                }
                row_pos[x * n + z] = y as u8;
                if col_pos[y * n + z] != u8::MAX {
                    return Err(Error::ColumnRepeat { col: y + 1, symbol: z + 1 });
                }
                col_pos[y * n + z] = x as u8;
            }
        }
        Ok(LatinSquare {
            order,
            cells: cells.into_iter().map(|s| s as u8).collect(),
            row_pos,
            col_pos,
        })
    }

    pub fn from_fn(order: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let cells = (0..order * order).map(|i| f(i / order, i % order)).collect();
        Self::new(order, cells)
    }

    /// Builds a square from 1-based rows, as printed.
    pub fn from_rows_1based(rows: &[&[usize]]) -> Result<Self> {
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::SizeMismatch { expected: n, found: row.len() });
            }
            for (c, &v) in row.iter().enumerate() {
                if v == 0 || v > n {
                    return Err(Error::SymbolOutOfRange { row: r + 1, col: c + 1, symbol: v, order: n });
                }
                cells.push(v - 1);
            }
        }
        Self::new(n, cells)
    }

    /// Cayley table of the cyclic group `Z_n`.
    pub fn cyclic(n: usize) -> Self {
        Self::from_fn(n, |x, y| (x + y) % n).expect("cyclic table is latin")
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    /// `Some(m)` when the order is `m²`.
    pub fn rank(&self) -> Option<usize> {
        rank_of(self.order)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.cells[x * self.order + y] as usize
    }

    /// Left division `x \ z`: the `y` with `x·y = z`.
    #[inline]
    pub fn ldiv(&self, x: usize, z: usize) -> usize {
        self.row_pos[x * self.order + z] as usize
    }

    /// Right division `z / y`: the `x` with `x·y = z`.
    #[inline]
    pub fn rdiv(&self, z: usize, y: usize) -> usize {
        self.col_pos[y * self.order + z] as usize
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn row(&self, x: usize) -> &[u8] {
        &self.cells[x * self.order..(x + 1) * self.order]
    }

    /// Orthogonal array triples `(row, column, symbol)`.
    pub fn triples(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        let n = self.order;
        self.cells
            .iter()
            .enumerate()
            .map(move |(i, &z)| [i / n, i % n, z as usize])
    }

    pub fn conjugate(&self, theta: ConjugateLabel) -> Self {
        let n = self.order;
        let t = theta.positions();
        let mut cells = vec![0usize; n * n];
        for tr in self.triples() {
            cells[tr[t[0]] * n + tr[t[1]]] = tr[t[2]];
        }
        Self::new(n, cells).expect("conjugate of a latin square is latin")
    }

    pub fn transpose(&self) -> Self {
        self.conjugate(ConjugateLabel::T12)
    }

    /// The square `M` with `M(α(x), β(y)) = γ(L(x, y))`.
    pub fn apply_isotopism(&self, iso: &Isotopism) -> Result<Self> {
        let n = self.order;
        if iso.degree() != n {
            return Err(Error::SizeMismatch { expected: n, found: iso.degree() });
        }
        let mut cells = vec![0usize; n * n];
        for [x, y, z] in self.triples() {
            cells[iso.alpha.apply(x) * n + iso.beta.apply(y)] = iso.gamma.apply(z);
        }
        Ok(Self::new(n, cells).expect("isotope of a latin square is latin"))
    }

    /// Left translation `L_x: y ↦ x·y`.
    pub fn left_translation(&self, x: usize) -> Permutation {
        Permutation::from_images((0..self.order).map(|y| self.get(x, y)).collect()).unwrap()
    }

    /// Right translation `R_x: y ↦ y·x`.
    pub fn right_translation(&self, x: usize) -> Permutation {
        Permutation::from_images((0..self.order).map(|y| self.get(y, x)).collect()).unwrap()
    }

    /// `D_x: y ↦ x / y`.
    pub fn division_map(&self, x: usize) -> Permutation {
        Permutation::from_images((0..self.order).map(|y| self.rdiv(x, y)).collect()).unwrap()
    }

    /// 1-based rows, as printed.
    pub fn to_rows_1based(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|x| self.row(x).iter().map(|&z| z as usize + 1).collect())
            .collect()
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.order).all(|x| self.get(x, x) == x)
    }

    pub fn random_isotope<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        let n = self.order;
        let iso = Isotopism::new(
            Permutation::random(n, rng),
            Permutation::random(n, rng),
            Permutation::random(n, rng),
        )
        .unwrap();
        self.apply_isotopism(&iso).unwrap()
    }
}

impl fmt::Debug for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f)?;
        fmt::Display::fmt(self, f)
    }
}

/// One line per row of 1-based symbols separated by single spaces.
impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_rows_1based() {
            let parts: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for LatinSquare {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::io::parse_square(s)
    }
}

/// An element θ of Sym{1,2,3} acting on orthogonal-array coordinates.
///
/// `L^θ` has orthogonal array `{(x_θ(1), x_θ(2), x_θ(3))}`; internally the
/// label stores the 0-based images `θ(1)-1, θ(2)-1, θ(3)-1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConjugateLabel([u8; 3]);

impl ConjugateLabel {
    pub const IDENTITY: Self = ConjugateLabel([0, 1, 2]);
    pub const T12: Self = ConjugateLabel([1, 0, 2]);
    pub const T13: Self = ConjugateLabel([2, 1, 0]);
    pub const T23: Self = ConjugateLabel([0, 2, 1]);
    /// The 3-cycle (1,2,3).
    pub const C123: Self = ConjugateLabel([1, 2, 0]);
    /// The 3-cycle (1,3,2).
    pub const C132: Self = ConjugateLabel([2, 0, 1]);

    pub const ALL: [Self; 6] = [
        Self::IDENTITY,
        Self::T12,
        Self::T13,
        Self::T23,
        Self::C123,
        Self::C132,
    ];

    pub fn positions(self) -> [usize; 3] {
        [self.0[0] as usize, self.0[1] as usize, self.0[2] as usize]
    }

    /// `θ.compose(φ)` is the label `θ∘φ`, so that `(L^θ)^φ = L^(θ∘φ)`.
    pub fn compose(self, phi: Self) -> Self {
        let t = self.0;
        let p = phi.0;
        ConjugateLabel([t[p[0] as usize], t[p[1] as usize], t[p[2] as usize]])
    }

    pub fn inverse(self) -> Self {
        let mut inv = [0u8; 3];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        ConjugateLabel(inv)
    }
}

impl fmt::Debug for ConjugateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ConjugateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = Permutation::from_images(self.positions().to_vec()).unwrap();
        write!(f, "{p}")
    }
}

impl FromStr for ConjugateLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Self::ALL
            .into_iter()
            .find(|c| c.to_string() == s || (s == "id" && *c == Self::IDENTITY))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown conjugate {s:?}")))
    }
}

/// Ordered triple `(α, β, γ)` of permutations of equal degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Isotopism {
    pub alpha: Permutation,
    pub beta: Permutation,
    pub gamma: Permutation,
}

impl Isotopism {
    pub fn new(alpha: Permutation, beta: Permutation, gamma: Permutation) -> Result<Self> {
        let n = alpha.degree();
        for p in [&beta, &gamma] {
            if p.degree() != n {
                return Err(Error::SizeMismatch { expected: n, found: p.degree() });
            }
        }
        Ok(Isotopism { alpha, beta, gamma })
    }

    pub fn identity(n: usize) -> Self {
        let id = Permutation::identity(n);
        Isotopism {
            alpha: id.clone(),
            beta: id.clone(),
            gamma: id,
        }
    }

    /// The isotopism `(θ, θ, θ)`.
    pub fn diagonal(theta: Permutation) -> Self {
        Isotopism {
            alpha: theta.clone(),
            beta: theta.clone(),
            gamma: theta,
        }
    }

    pub fn degree(&self) -> usize {
        self.alpha.degree()
    }

    pub fn inverse(&self) -> Self {
        Isotopism {
            alpha: self.alpha.inverse(),
            beta: self.beta.inverse(),
            gamma: self.gamma.inverse(),
        }
    }

    /// First `self`, then `other`.
    pub fn then(&self, other: &Isotopism) -> Self {
        Isotopism {
            alpha: self.alpha.then(&other.alpha),
            beta: self.beta.then(&other.beta),
            gamma: self.gamma.then(&other.gamma),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.alpha.is_identity() && self.beta.is_identity() && self.gamma.is_identity()
    }

    /// All three maps preserve the given partition.
    pub fn is_ds(&self, p: &crate::partition::SudokuPartition) -> bool {
        p.is_preserved_by(&self.alpha) && p.is_preserved_by(&self.beta) && p.is_preserved_by(&self.gamma)
    }

    /// A uniformly random isotopism whose maps preserve the standard partition.
    pub fn random_ds<R: Rng + ?Sized>(rank: usize, rng: &mut R) -> Self {
        Isotopism {
            alpha: random_block_preserving(rank, rng),
            beta: random_block_preserving(rank, rng),
            gamma: random_block_preserving(rank, rng),
        }
    }
}

/// A uniformly random permutation preserving the standard partition of rank `m`.
pub fn random_block_preserving<R: Rng + ?Sized>(rank: usize, rng: &mut R) -> Permutation {
    let mut blocks: Vec<usize> = (0..rank).collect();
    blocks.shuffle(rng);
    let mut images = vec![0; rank * rank];
    for (b, &target) in blocks.iter().enumerate() {
        let mut inner: Vec<usize> = (0..rank).collect();
        inner.shuffle(rng);
        for (i, &j) in inner.iter().enumerate() {
            images[b * rank + i] = target * rank + j;
        }
    }
    Permutation::from_images(images).unwrap()
}

/// An order-`n` table with some cells filled.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialLatinSquare {
    order: usize,
    cells: Vec<Option<u8>>,
}

impl PartialLatinSquare {
    pub fn empty(order: usize) -> Self {
        PartialLatinSquare {
            order,
            cells: vec![None; order * order],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, x: usize, y: usize) -> Option<usize> {
        self.cells[x * self.order + y].map(usize::from)
    }

    /// Fills a cell, rejecting repeats within its row or column.
    pub fn set(&mut self, x: usize, y: usize, z: usize) -> Result<()> {
        let n = self.order;
        if z >= n {
            return Err(Error::SymbolOutOfRange { row: x + 1, col: y + 1, symbol: z + 1, order: n });
        }
        for k in 0..n {
            if k != y && self.get(x, k) == Some(z) {
                return Err(Error::RowRepeat { row: x + 1, symbol: z + 1 });
            }
            if k != x && self.get(k, y) == Some(z) {
                return Err(Error::ColumnRepeat { col: y + 1, symbol: z + 1 });
            }
        }
        self.cells[x * n + y] = Some(z as u8);
        Ok(())
    }

    pub fn clear(&mut self, x: usize, y: usize) {
        self.cells[x * self.order + y] = None;
    }

    pub fn filled_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    pub fn filled(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        let n = self.order;
        self.cells
            .iter()
            .enumerate()
            .filter_map(move |(i, c)| c.map(|z| [i / n, i % n, z as usize]))
    }

    pub fn is_extended_by(&self, l: &LatinSquare) -> bool {
        l.order() == self.order && self.filled().all(|[x, y, z]| l.get(x, y) == z)
    }

    /// The partial table that agrees with `l` on the given cells.
    pub fn restrict(l: &LatinSquare, cells: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut p = Self::empty(l.order());
        for (x, y) in cells {
            p.cells[x * l.order() + y] = Some(l.get(x, y) as u8);
        }
        p
    }
}

impl fmt::Display for PartialLatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in 0..self.order {
            let parts: Vec<String> = (0..self.order)
                .map(|y| self.get(x, y).map_or(".".to_string(), |z| (z + 1).to_string()))
                .collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PartialLatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f)?;
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn small() -> LatinSquare {
        LatinSquare::from_rows_1based(&[&[1, 2, 3, 4], &[3, 4, 1, 2], &[4, 3, 2, 1], &[2, 1, 4, 3]])
            .unwrap()
    }

    #[test]
    fn rejects_repeats() {
        let e = LatinSquare::from_rows_1based(&[&[1, 1], &[2, 2]]).unwrap_err();
        assert_eq!(e, Error::RowRepeat { row: 1, symbol: 1 });
        let e = LatinSquare::from_rows_1based(&[&[1, 2], &[1, 2]]).unwrap_err();
        assert_eq!(e, Error::ColumnRepeat { col: 1, symbol: 1 });
    }

    #[test]
    fn divisions_invert_multiplication() {
        let l = small();
        for x in 0..4 {
            for y in 0..4 {
                let z = l.get(x, y);
                assert_eq!(l.ldiv(x, z), y);
                assert_eq!(l.rdiv(z, y), x);
            }
        }
    }

    #[test]
    fn transpose_is_t12() {
        let l = small();
        let t = l.conjugate(ConjugateLabel::T12);
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(t.get(x, y), l.get(y, x));
            }
        }
        assert_eq!(l.conjugate(ConjugateLabel::IDENTITY), l);
    }

    #[test]
    fn conjugate_action_law() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let l = small().random_isotope(&mut rng);
        for a in ConjugateLabel::ALL {
            assert_eq!(l.conjugate(a).conjugate(a.inverse()), l);
            for b in ConjugateLabel::ALL {
                assert_eq!(l.conjugate(a).conjugate(b), l.conjugate(a.compose(b)), "{a} {b}");
            }
        }
    }

    #[test]
    fn isotopism_inverse_round_trip() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let l = small();
        let iso = Isotopism::new(
            Permutation::random(4, &mut rng),
            Permutation::random(4, &mut rng),
            Permutation::random(4, &mut rng),
        )
        .unwrap();
        let m = l.apply_isotopism(&iso).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(m.get(iso.alpha.apply(x), iso.beta.apply(y)), iso.gamma.apply(l.get(x, y)));
            }
        }
        assert_eq!(m.apply_isotopism(&iso.inverse()).unwrap(), l);
        assert_eq!(l.apply_isotopism(&Isotopism::identity(4)).unwrap(), l);
        assert!(l.apply_isotopism(&Isotopism::identity(3)).is_err());
    }

    #[test]
    fn conjugate_labels_parse() {
        for c in ConjugateLabel::ALL {
            assert_eq!(c.to_string().parse::<ConjugateLabel>().unwrap(), c);
        }
        assert_eq!(ConjugateLabel::T13.to_string(), "(1,3)");
        assert_eq!(ConjugateLabel::C123.to_string(), "(1,2,3)");
    }

    #[test]
    fn random_ds_preserves_standard() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let p = crate::partition::SudokuPartition::standard(3);
        for _ in 0..100 {
            assert!(Isotopism::random_ds(3, &mut rng).is_ds(&p));
        }
    }

    #[test]
    fn partial_square_rejects_clash() {
        let mut p = PartialLatinSquare::empty(3);
        p.set(0, 0, 1).unwrap();
        assert!(p.set(0, 2, 1).is_err());
        assert!(p.set(2, 0, 1).is_err());
        p.set(1, 1, 1).unwrap();
        assert_eq!(p.filled_count(), 2);
    }
}
