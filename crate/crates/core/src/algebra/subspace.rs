use super::field::GaloisField;
use crate::error::{Error, Result};
use crate::partition::SudokuPartition;

/// All `GF(r)`-combinations of `basis` inside `f`.
fn span(f: &GaloisField, scalars: &[usize], basis: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &b in basis {
        let mut next = Vec::with_capacity(out.len() * scalars.len());
        for &v in &out {
            for &s in scalars {
                next.push(f.add(v, f.mul(s, b)));
            }
        }
        out = next;
    }
    out
}

/// A subspace of a finite field viewed as a vector space over its subfield
/// of order `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    r: usize,
    basis: Vec<usize>,
    elements: Vec<usize>,
    member: Vec<bool>,
}

impl Subspace {
    pub fn spanned(f: &GaloisField, r: usize, basis: &[usize]) -> Result<Self> {
        let scalars = f.subfield(r).ok_or_else(|| Error::InvalidField(format!("no subfield of order {r}")))?;
        let mut elements = span(f, &scalars, basis);
        elements.sort_unstable();
        elements.dedup();
        if elements.len() != r.pow(basis.len() as u32) {
            return Err(Error::InvalidParameter("basis is linearly dependent".into()));
        }
        let mut member = vec![false; f.order()];
        elements.iter().for_each(|&e| member[e] = true);
        Ok(Subspace { r, basis: basis.to_vec(), elements, member })
    }

    pub fn scalar_order(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// Sorted elements.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: usize) -> bool {
        self.member[x]
    }

    /// The image `Wc`, sorted.
    pub fn scaled(&self, f: &GaloisField, c: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.elements.iter().map(|&w| f.mul(w, c)).collect();
        v.sort_unstable();
        v
    }
}

fn meet_is_zero(a: &[usize], b: &[usize]) -> bool {
    let mut mask = vec![false; a.iter().chain(b).max().map_or(0, |m| m + 1)];
    a.iter().for_each(|&x| mask[x] = true);
    b.iter().all(|&x| x == 0 || !mask[x])
}

/// The three trivial-intersection conditions `W∩Wc`, `W∩W(c−1)` and
/// `Wc∩W(c−1)`.
pub fn intersection_conditions(f: &GaloisField, w: &Subspace, c: usize) -> [bool; 3] {
    let wc = w.scaled(f, c);
    let wc1 = w.scaled(f, f.sub(c, 1));
    [meet_is_zero(w.elements(), &wc), meet_is_zero(w.elements(), &wc1), meet_is_zero(&wc, &wc1)]
}

/// Every `dim`-dimensional `GF(r)`-subspace of `f`, one per reduced
/// row-echelon basis.
pub fn subspaces(f: &GaloisField, r: usize, dim: usize) -> Result<Vec<Subspace>> {
    let scalars = f.subfield(r).ok_or_else(|| Error::InvalidField(format!("no subfield of order {r}")))?;
    let mut ambient: Vec<usize> = Vec::new();
    let mut covered = vec![0usize];
    for x in f.elements() {
        if !covered.contains(&x) {
            ambient.push(x);
            covered = span(f, &scalars, &ambient);
        }
    }
    let d = ambient.len();
    if dim > d {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..dim).collect();
    loop {
        let free: Vec<(usize, usize)> = (0..dim)
            .flat_map(|i| ((pivots[i] + 1)..d).filter(|j| !pivots.contains(j)).map(move |j| (i, j)))
            .collect();
        let total = r.pow(free.len() as u32);
        for code in 0..total {
            let mut rows = vec![vec![0usize; d]; dim];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = 1;
            }
            let mut c = code;
            for &(i, j) in &free {
                rows[i][j] = scalars[c % r];
                c /= r;
            }
            let basis: Vec<usize> = rows
                .iter()
                .map(|row| row.iter().zip(&ambient).fold(0, |acc, (&s, &e)| f.add(acc, f.mul(s, e))))
                .collect();
            out.push(Subspace::spanned(f, r, &basis)?);
        }
        let Some(i) = (0..dim).rev().find(|&i| pivots[i] < d - dim + i) else { break };
        pivots[i] += 1;
        for j in i + 1..dim {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
    Ok(out)
}

/// Subspaces `W` of dimension `s` over `GF(r)` inside `GF(q²)`, `q = r^s`,
/// with `W∩Wc = 0`.
pub fn good_subspaces(f: &GaloisField, r: usize, s: usize, c: usize) -> Result<Vec<Subspace>> {
    let q = r.pow(s as u32);
    if q * q != f.order() {
        return Err(Error::InvalidField(format!("field of order {} is not GF({q}²)", f.order())));
    }
    Ok(subspaces(f, r, s)?
        .into_iter()
        .filter(|w| {
            let conds = intersection_conditions(f, w, c);
            assert!(conds[0] == conds[1] && conds[1] == conds[2], "intersection conditions disagree");
            conds[0]
        })
        .collect())
}

/// Cosets of `W`, which must have `√|F|` elements.
pub fn coset_partition(f: &GaloisField, w: &Subspace) -> Result<SudokuPartition> {
    let n = f.order();
    if w.len() * w.len() != n {
        return Err(Error::InvalidParameter(format!("subspace of size {} in field of order {n}", w.len())));
    }
    let labels: Vec<usize> = f.elements().map(|x| w.elements().iter().map(|&e| f.sub(x, e)).min().unwrap()).collect();
    SudokuPartition::from_labels(&labels)
}
