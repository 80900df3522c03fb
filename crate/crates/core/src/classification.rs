//! Isotopism searches and the class partitions they induce.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::enumeration::{canonicalize_to_template, is_template_extension, template};
use crate::error::{Error, Result};
use crate::invariants::{combined_key, count_intercalates};
use crate::partition::SudokuPartition;
use crate::perm::{cycle_type_of, Permutation};
use crate::square::{rank_of, ConjugateLabel, Isotopism, LatinSquare};
use crate::sudoku::{is_sudoku, is_standard_division_sudoku};
use crate::TriPartition;

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if the two were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

/// A partition of a list of squares into classes.
///
/// Classes are ordered by their representative, the lexicographically
/// smallest member; member indices refer to the input list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPartition {
    pub representatives: Vec<LatinSquare>,
    pub members: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl ClassPartition {
    pub fn from_union_find(squares: &[LatinSquare], uf: &mut UnionFind) -> Self {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..squares.len() {
            groups.entry(uf.find(i)).or_default().push(i);
        }
        let mut classes: Vec<Vec<usize>> = groups.into_values().collect();
        for c in &mut classes {
            c.sort_by(|&a, &b| squares[a].cmp(&squares[b]).then(a.cmp(&b)));
        }
        classes.sort_by(|a, b| squares[a[0]].cmp(&squares[b[0]]));
        let mut class_of = vec![0; squares.len()];
        for (k, c) in classes.iter().enumerate() {
            for &i in c {
                class_of[i] = k;
            }
        }
        ClassPartition {
            representatives: classes.iter().map(|c| squares[c[0]].clone()).collect(),
            members: classes,
            class_of,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Class size → number of classes of that size.
    pub fn size_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for c in &self.members {
            *h.entry(c.len()).or_insert(0) += 1;
        }
        h
    }
}

/// `(α⁻¹, β⁻¹, γ⁻¹)` restricted to what the chase needs, as raw images.
struct Chase {
    a: [u8; 9],
    b: [u8; 9],
    g: [u8; 9],
}

const BLOCK_BIJECTIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// The 18 ways to send block 1 bijectively onto some block.
fn block_images() -> impl Iterator<Item = [usize; 3]> {
    (0..3).flat_map(|t| BLOCK_BIJECTIONS.iter().map(move |p| [3 * t + p[0], 3 * t + p[1], 3 * t + p[2]]))
}

fn preserves_blocks(images: &[u8; 9]) -> bool {
    (0..3).all(|b| {
        let t = images[3 * b] / 3;
        images[3 * b + 1] / 3 == t && images[3 * b + 2] / 3 == t
    })
}

fn is_bijection(images: &[u8; 9]) -> bool {
    images.iter().fold(0u16, |m, &v| m | 1 << v) == 0x1ff
}

fn invert9(images: &[u8; 9]) -> [u8; 9] {
    let mut inv = [0u8; 9];
    for (i, &v) in images.iter().enumerate() {
        inv[v as usize] = i as u8;
    }
    inv
}

/// Given `a = α⁻¹` and `b = β⁻¹` on block 1, reconstructs the unique
/// ds-isotopism candidate from `q1` onto a square extending the template,
/// using only template cells of the target.
fn template_chase(q1: &LatinSquare, a0: [usize; 3], b0: [usize; 3]) -> Option<Chase> {
    static CELLS: OnceLock<[u8; 81]> = OnceLock::new();
    let t = CELLS.get_or_init(|| {
        let mut c = [u8::MAX; 81];
        for [x, y, z] in template().filled() {
            c[9 * x + y] = z as u8;
        }
        c
    });
    let cell = |x: usize, y: usize| t[9 * x + y] as usize;
    let mut g = [u8::MAX; 9];
    for x in 0..3 {
        for y in 0..3 {
            g[cell(x, y)] = q1.get(a0[x], b0[y]) as u8;
        }
    }
    if !is_bijection(&g) {
        return None;
    }
    let mut a = [0u8; 9];
    let mut b = [0u8; 9];
    for i in 0..3 {
        a[i] = a0[i] as u8;
        b[i] = b0[i] as u8;
    }
    for y in 3..9 {
        let x = y % 3;
        b[y] = q1.ldiv(a0[x], g[cell(x, y)] as usize) as u8;
    }
    for x in 3..9 {
        let y = x % 3;
        a[x] = q1.rdiv(g[cell(x, y)] as usize, b[y] as usize) as u8;
    }
    let ok = [&a, &b, &g].iter().all(|p| is_bijection(p) && preserves_blocks(p));
    ok.then_some(Chase { a, b, g })
}

impl Chase {
    /// The target square `Q2(x, y) = γ(Q1(α⁻¹x, β⁻¹y))`.
    fn image(&self, q1: &LatinSquare) -> [u8; 81] {
        let ginv = invert9(&self.g);
        let mut cells = [0u8; 81];
        for x in 0..9 {
            for y in 0..9 {
                cells[9 * x + y] = ginv[q1.get(self.a[x] as usize, self.b[y] as usize)];
            }
        }
        cells
    }

    fn isotopism(&self) -> Isotopism {
        let p = |v: &[u8; 9]| Permutation::from_images(invert9(v).iter().map(|&i| i as usize).collect()).unwrap();
        Isotopism::new(p(&self.a), p(&self.b), p(&self.g)).unwrap()
    }
}

fn require_extension(l: &LatinSquare) -> Result<()> {
    if is_template_extension(l) {
        Ok(())
    } else {
        Err(Error::NotTemplateExtension)
    }
}

/// A ds-isotopism between two template extensions, found among the 324
/// candidates determined by `α⁻¹` and `β⁻¹` on the first two elements.
pub fn ds_isotopism_between_template_extensions(q1: &LatinSquare, q2: &LatinSquare) -> Result<Option<Isotopism>> {
    require_extension(q1)?;
    require_extension(q2)?;
    let target: Vec<u8> = q2.cells().to_vec();
    for a0 in block_images() {
        for b0 in block_images() {
            if let Some(ch) = template_chase(q1, a0, b0) {
                if ch.image(q1)[..] == target[..] {
                    return Ok(Some(ch.isotopism()));
                }
            }
        }
    }
    Ok(None)
}

/// All template extensions reachable from `q1` by the 324 candidate
/// ds-isotopisms, as raw cell arrays.
fn template_images(q1: &LatinSquare) -> Vec<[u8; 81]> {
    let mut out = Vec::with_capacity(324);
    for a0 in block_images() {
        for b0 in block_images() {
            if let Some(ch) = template_chase(q1, a0, b0) {
                out.push(ch.image(q1));
            }
        }
    }
    out
}

fn cells81(l: &LatinSquare) -> [u8; 81] {
    l.cells().try_into().expect("order 9")
}

/// Partitions the complete list of template extensions into ds-isotopism
/// classes.
pub fn ds_classes(extensions: &[LatinSquare]) -> Result<ClassPartition> {
    for l in extensions {
        require_extension(l)?;
    }
    let index: HashMap<[u8; 81], usize> = extensions.iter().enumerate().map(|(i, l)| (cells81(l), i)).collect();
    if index.len() != extensions.len() {
        return Err(Error::InvalidParameter("duplicate squares in extension list".into()));
    }
    let images: Vec<Vec<[u8; 81]>> = extensions.par_iter().map(template_images).collect();
    let mut uf = UnionFind::new(extensions.len());
    for (i, imgs) in images.iter().enumerate() {
        for img in imgs {
            let j = *index.get(img).ok_or_else(|| {
                Error::IncompleteInput(format!("image of extension {} is not in the list", i + 1))
            })?;
            uf.union(i, j);
        }
    }
    Ok(ClassPartition::from_union_find(extensions, &mut uf))
}

/// ds-class lookup for arbitrary standard division sudokus of rank 3.
#[derive(Clone, Debug)]
pub struct DsClassifier {
    pub extensions: Vec<LatinSquare>,
    pub classes: ClassPartition,
    index: HashMap<[u8; 81], usize>,
}

impl DsClassifier {
    pub fn new(extensions: Vec<LatinSquare>) -> Result<Self> {
        let classes = ds_classes(&extensions)?;
        let index = extensions.iter().enumerate().map(|(i, l)| (cells81(l), i)).collect();
        Ok(DsClassifier { extensions, classes, index })
    }

    /// Built once per process from the enumerated template extensions.
    pub fn shared() -> &'static DsClassifier {
        static CELL: OnceLock<DsClassifier> = OnceLock::new();
        CELL.get_or_init(|| DsClassifier::new(crate::enumeration::enumerate_extensions_parallel()).expect("extensions classify"))
    }

    /// Index of the ds-class containing `l`.
    pub fn class_of(&self, l: &LatinSquare) -> Result<usize> {
        let (c, _) = canonicalize_to_template(l)?;
        let i = self
            .index
            .get(&cells81(&c))
            .ok_or_else(|| Error::IncompleteInput("canonical form missing from extension list".into()))?;
        Ok(self.classes.class_of[*i])
    }
}

fn standard_tri(m: usize) -> TriPartition {
    TriPartition::standard(m)
}

/// Tries every `α` on block 1 and `β` on block 1 produced by `alphas` and
/// `betas`, completing `γ`, then `β` from row 0 and `α` from column 0, and
/// accepting on an exact match. `require_ds` also demands that all three maps
/// preserve the standard partition.
fn search_isotopism(
    q1: &LatinSquare,
    q2: &LatinSquare,
    m: usize,
    alphas: &[Vec<usize>],
    betas: &[Vec<usize>],
    require_ds: bool,
) -> Option<Isotopism> {
    let n = q1.order();
    let std = SudokuPartition::standard(m);
    let mut gamma = vec![0usize; n];
    let mut alpha = vec![0usize; n];
    let mut beta = vec![0usize; n];
    let mut seen = vec![false; n];
    for a0 in alphas {
        'beta: for b0 in betas {
            seen.iter_mut().for_each(|s| *s = false);
            for x in 0..m {
                for y in 0..m {
                    let z = q2.get(a0[x], b0[y]);
                    if seen[z] {
                        continue 'beta;
                    }
                    seen[z] = true;
                    gamma[q1.get(x, y)] = z;
                }
            }
            for y in 0..n {
                beta[y] = q2.ldiv(a0[0], gamma[q1.get(0, y)]);
            }
            for x in 0..n {
                alpha[x] = q2.rdiv(gamma[q1.get(x, 0)], beta[0]);
            }
            if (0..m).any(|i| alpha[i] != a0[i] || beta[i] != b0[i]) {
                continue;
            }
            for x in 0..n {
                for y in 0..n {
                    if q2.get(alpha[x], beta[y]) != gamma[q1.get(x, y)] {
                        continue 'beta;
                    }
                }
            }
            // an exact match forces α and β to be bijections
            let iso = Isotopism::new(
                Permutation::from_images(alpha.clone()).ok()?,
                Permutation::from_images(beta.clone()).ok()?,
                Permutation::from_images(gamma.clone()).ok()?,
            )
            .ok()?;
            if !require_ds || iso.is_ds(&std) {
                return Some(iso);
            }
        }
    }
    None
}

fn injections(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(n, k, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, k, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Images of block 1 under block-preserving maps: `m · m!` at rank `m`.
fn block_bijections(m: usize) -> Vec<Vec<usize>> {
    let perms = injections(m, m);
    (0..m)
        .flat_map(|t| perms.iter().map(move |p| p.iter().map(|&i| t * m + i).collect()))
        .collect()
}

fn require_standard_ds(l: &LatinSquare, m: usize) -> Result<()> {
    if rank_of(l.order()) != Some(m) {
        return Err(Error::SizeMismatch { expected: m * m, found: l.order() });
    }
    if !is_standard_division_sudoku(l) {
        return Err(Error::NotDivisionSudoku("ds-isotopism search needs standard division sudokus".into()));
    }
    Ok(())
}

/// A ds-isotopism between standard division sudokus of rank `m`.
pub fn ds_isotopism_general(q1: &LatinSquare, q2: &LatinSquare, m: usize) -> Result<Option<Isotopism>> {
    require_standard_ds(q1, m)?;
    require_standard_ds(q2, m)?;
    let imgs = block_bijections(m);
    Ok(search_isotopism(q1, q2, m, &imgs, &imgs, true))
}

/// Isotopy-invariant fingerprint used to skip hopeless searches: the number
/// of intercalates and, for rows and for columns, the sorted multiset of
/// cycle types of the symbol permutations between pairs of lines.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsotopyKey {
    pub intercalates: usize,
    pub row_pairs: Vec<Vec<usize>>,
    pub col_pairs: Vec<Vec<usize>>,
}

pub fn isotopy_key(l: &LatinSquare) -> IsotopyKey {
    let n = l.order();
    let mut row_pairs = Vec::new();
    let mut col_pairs = Vec::new();
    let mut img = vec![0u8; n];
    for x in 0..n {
        for y in x + 1..n {
            for z in 0..n {
                img[z] = l.get(y, l.ldiv(x, z)) as u8;
            }
            row_pairs.push(cycle_type_of(&img));
            for z in 0..n {
                img[z] = l.get(l.rdiv(z, x), y) as u8;
            }
            col_pairs.push(cycle_type_of(&img));
        }
    }
    row_pairs.sort();
    col_pairs.sort();
    IsotopyKey { intercalates: count_intercalates(l), row_pairs, col_pairs }
}

/// Any isotopism from `q1` to `q2`; `q1` must be a sudoku of some rank.
pub fn isotopism_general(q1: &LatinSquare, q2: &LatinSquare) -> Result<Option<Isotopism>> {
    if q1.order() != q2.order() {
        return Ok(None);
    }
    let m = rank_of(q1.order()).ok_or(Error::NotSquareOrder { order: q1.order() })?;
    if !is_sudoku(q1, &standard_tri(m))? {
        return Err(Error::InvalidParameter("isotopism search needs a sudoku as source".into()));
    }
    if isotopy_key(q1) != isotopy_key(q2) {
        return Ok(None);
    }
    Ok(isotopism_search_unscreened(q1, q2, m))
}

fn isotopism_search_unscreened(q1: &LatinSquare, q2: &LatinSquare, m: usize) -> Option<Isotopism> {
    let imgs = injections(q1.order(), m);
    let found: Vec<Option<Isotopism>> = imgs
        .par_chunks(16)
        .map(|chunk| search_isotopism(q1, q2, m, chunk, &imgs, false))
        .collect();
    found.into_iter().flatten().next()
}

/// Same as [`isotopism_general`] without the fingerprint prescreen.
pub fn isotopism_exhaustive(q1: &LatinSquare, q2: &LatinSquare) -> Result<Option<Isotopism>> {
    let m = rank_of(q1.order()).ok_or(Error::NotSquareOrder { order: q1.order() })?;
    if !is_sudoku(q1, &standard_tri(m))? {
        return Err(Error::InvalidParameter("isotopism search needs a sudoku as source".into()));
    }
    Ok(isotopism_search_unscreened(q1, q2, m))
}

/// Groups the 186 representatives into main ds-classes: `i ~ j` when some
/// conjugate of `i` is ds-isotopic to `j`.
pub fn main_ds_classes(reps: &[LatinSquare]) -> Result<ClassPartition> {
    for r in reps {
        require_standard_ds(r, 3)?;
    }
    let keys: Vec<(u64, u64)> = reps.iter().map(combined_key).collect::<Result<_>>()?;
    let mut by_key: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    for (i, k) in keys.iter().enumerate() {
        by_key.entry(*k).or_default().push(i);
    }
    let links: Vec<Result<Vec<(usize, usize)>>> = reps
        .par_iter()
        .enumerate()
        .map(|(i, r)| {
            let mut out = Vec::new();
            for theta in ConjugateLabel::ALL {
                let c = r.conjugate(theta);
                let key = combined_key(&c)?;
                let mut hit = None;
                for &j in by_key.get(&key).map(Vec::as_slice).unwrap_or(&[]) {
                    if ds_isotopism_general(&c, &reps[j], 3)?.is_some() {
                        hit = Some(j);
                        break;
                    }
                }
                let j = hit.ok_or_else(|| {
                    Error::IncompleteInput(format!("conjugate {theta} of representative {} has no match", i + 1))
                })?;
                out.push((i, j));
            }
            Ok(out)
        })
        .collect();
    let mut uf = UnionFind::new(reps.len());
    for l in links {
        for (i, j) in l? {
            uf.union(i, j);
        }
    }
    Ok(ClassPartition::from_union_find(reps, &mut uf))
}

/// Isotopism classes of a list of sudokus, by pairwise search within
/// prescreen buckets.
pub fn isotopism_classes(reps: &[LatinSquare]) -> Result<ClassPartition> {
    let keys: Vec<IsotopyKey> = reps.par_iter().map(isotopy_key).collect();
    let mut buckets: BTreeMap<&IsotopyKey, Vec<usize>> = BTreeMap::new();
    for (i, k) in keys.iter().enumerate() {
        buckets.entry(k).or_default().push(i);
    }
    let mut uf = UnionFind::new(reps.len());
    for members in buckets.values() {
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                if uf.same(i, j) {
                    continue;
                }
                let m = rank_of(reps[i].order()).ok_or(Error::NotSquareOrder { order: reps[i].order() })?;
                if isotopism_search_unscreened(&reps[i], &reps[j], m).is_some() {
                    uf.union(i, j);
                }
            }
        }
    }
    Ok(ClassPartition::from_union_find(reps, &mut uf))
}

/// Pairs of list indices merged by [`isotopism_classes`] into a class of size
/// two or more, as the sorted member lists.
pub fn merged_classes(p: &ClassPartition) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = p
        .members
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| {
            let mut c = c.clone();
            c.sort();
            c
        })
        .collect();
    out.sort();
    out
}

/// 1-based index of the representative `DS(9,i)` whose ds-class contains a rank-3 standard
/// division sudoku.
pub fn appendix_class_of(l: &LatinSquare) -> Result<Option<usize>> {
    let key = combined_key(l)?;
    for (i, rep) in crate::corpus::appendix().iter().enumerate() {
        if combined_key(rep)? == key && ds_isotopism_general(l, rep, 3)?.is_some() {
            return Ok(Some(i + 1));
        }
    }
    Ok(None)
}

/// The principal loop isotope `x∘y = (x/b)·(a\y)` with identity `a·b`.
pub fn loop_isotope(l: &LatinSquare, a: usize, b: usize) -> LatinSquare {
    LatinSquare::from_fn(l.order(), |x, y| l.get(l.rdiv(x, b), l.ldiv(a, y))).expect("isotope is latin")
}

pub fn is_associative(l: &LatinSquare) -> bool {
    let n = l.order();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| l.get(l.get(x, y), z) == l.get(x, l.get(y, z)))))
}

/// A loop isotopic to a group is isomorphic to it, so one loop isotope
/// decides the question.
pub fn is_isotopic_to_group(l: &LatinSquare) -> bool {
    is_associative(&loop_isotope(l, 0, 0))
}

/// True when no isotopism maps `q` onto its transpose.
pub fn not_isotopic_to_transpose(q: &LatinSquare) -> Result<bool> {
    Ok(isotopism_exhaustive(q, &q.transpose())?.is_none())
}

/// For each `x`, whether the left (resp. right) translation by `x` has a
/// cycle of length `len`.
pub fn translations_with_cycle(l: &LatinSquare, len: usize) -> (Vec<bool>, Vec<bool>) {
    let n = l.order();
    let has = |p: Permutation| p.cycle_type().contains(&len);
    (
        (0..n).map(|x| has(l.left_translation(x))).collect(),
        (0..n).map(|x| has(l.right_translation(x))).collect(),
    )
}
