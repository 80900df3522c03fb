use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::field::{prime_power, GaloisField};
use super::nearfield::QuadraticNearfield;
use super::subspace::{coset_partition, good_subspaces, subspaces, Subspace};
use crate::classification::{appendix_class_of, is_isotopic_to_group};
use crate::error::{Error, Result};
use crate::multipart::{is_affine_collection, sigma_scan};
use crate::partition::{SudokuPartition, TriPartition};
use crate::perm::Permutation;
use crate::square::{Isotopism, LatinSquare};
use crate::sudoku::is_division_sudoku;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructionKind {
    Field,
    Nearfield,
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstructionKind::Field => "field",
            ConstructionKind::Nearfield => "nearfield",
        })
    }
}

impl FromStr for ConstructionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "field" => Ok(ConstructionKind::Field),
            "nearfield" => Ok(ConstructionKind::Nearfield),
            _ => Err(Error::InvalidParameter(format!("unknown kind {s:?}"))),
        }
    }
}

fn quadratic_field(q: usize) -> Result<GaloisField> {
    let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
    GaloisField::new(p, 2 * k)
}

fn check_c(n: usize, c: usize) -> Result<()> {
    if c >= n {
        Err(Error::InvalidParameter(format!("c = {c} is not an element of a field of order {n}")))
    } else if c <= 1 {
        Err(Error::InvalidParameter(format!("c = {c} must differ from 0 and 1")))
    } else {
        Ok(())
    }
}

/// Smallest encoded element of `GF(q²)` outside `GF(q)`.
pub fn default_c(q: usize) -> Result<usize> {
    let f = quadratic_field(q)?;
    let sub = f.subfield(q).expect("GF(q) sits inside GF(q²)");
    Ok(f.elements().find(|x| !sub.contains(x)).expect("proper subfield"))
}

/// `x*y = x + (y−x)c` over `GF(q²)`.
pub fn stein_field_square(q: usize, c: usize) -> Result<LatinSquare> {
    let f = quadratic_field(q)?;
    check_c(f.order(), c)?;
    LatinSquare::from_fn(f.order(), |x, y| f.add(x, f.mul(f.sub(y, x), c)))
}

/// `x*y = x + (y−x)∘c` over the quadratic nearfield of order `q²`.
pub fn stein_nearfield_square(q: usize, c: usize) -> Result<LatinSquare> {
    let nf = QuadraticNearfield::new(q)?;
    let f = nf.field();
    check_c(f.order(), c)?;
    LatinSquare::from_fn(f.order(), |x, y| f.add(x, nf.mul(f.sub(y, x), c)))
}

/// A coset partition together with the subspace it came from.
#[derive(Clone, Debug)]
pub struct CosetRecord {
    pub scalar_order: usize,
    pub basis: Vec<usize>,
    pub partition: SudokuPartition,
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct SubspaceCount {
    pub scalar_order: usize,
    pub dim: usize,
    pub total: usize,
    pub good: usize,
}

#[derive(Clone, Debug)]
pub struct ConstructionReport {
    pub q: usize,
    pub kind: ConstructionKind,
    pub c: usize,
    pub square: LatinSquare,
    pub subspace_counts: Vec<SubspaceCount>,
    /// Distinct coset partitions, each checked with the direct predicate.
    pub partitions: Vec<CosetRecord>,
    /// Whether the one-dimensional `GF(q)` line partitions form an affine
    /// collection.
    pub lines_affine: bool,
    pub line_count: usize,
    pub isotopic_to_group: bool,
    /// From a full partition scan; only for `q ≤ 4` when requested.
    pub exact_sigma: Option<usize>,
    /// The square relabeled so the subfield coset partition is standard.
    pub standard_form: LatinSquare,
    /// 1-based appendix index of the ds-class of `standard_form`, rank 3 only.
    pub ds_class: Option<usize>,
}

impl ConstructionReport {
    pub fn verified_count(&self) -> usize {
        self.partitions.iter().filter(|r| r.verified).count()
    }

    pub fn pass(&self) -> bool {
        self.partitions.iter().all(|r| r.verified) && self.lines_affine && self.line_count == self.q + 1
    }
}

/// The element relabeling sending the blocks of `p` to the standard blocks,
/// keeping order within each block.
pub fn standardizing_permutation(p: &SudokuPartition) -> Permutation {
    let m = p.rank();
    let mut image = vec![0usize; p.order()];
    for (b, block) in p.blocks().iter().enumerate() {
        for (i, &e) in block.iter().enumerate() {
            image[e] = b * m + i;
        }
    }
    Permutation::from_images(image).expect("blocks partition the elements")
}

/// Builds the Stein square for `(q, kind)` and checks its coset partitions.
/// `exact_sigma` requests a full partition scan, possible for `q ≤ 4`.
pub fn construction_report(q: usize, kind: ConstructionKind, c: Option<usize>, exact_sigma: bool) -> Result<ConstructionReport> {
    let f = quadratic_field(q)?;
    if kind == ConstructionKind::Nearfield && q.is_multiple_of(2) {
        return Err(Error::InvalidParameter("nearfield construction needs odd q".into()));
    }
    let c = match c {
        Some(c) => c,
        None => default_c(q)?,
    };
    let square = match kind {
        ConstructionKind::Field => stein_field_square(q, c)?,
        ConstructionKind::Nearfield => stein_nearfield_square(q, c)?,
    };
    let (p, k) = prime_power(q).expect("checked");
    let mut spaces: Vec<Subspace> = Vec::new();
    let mut subspace_counts = Vec::new();
    for s in (1..=k).filter(|s| k % s == 0) {
        let r = p.pow((k / s) as u32);
        if kind == ConstructionKind::Nearfield && s != 1 {
            continue;
        }
        let total = subspaces(&f, r, s)?.len();
        let good = match kind {
            ConstructionKind::Field => good_subspaces(&f, r, s, c)?,
            ConstructionKind::Nearfield => subspaces(&f, r, s)?,
        };
        subspace_counts.push(SubspaceCount { scalar_order: r, dim: s, total, good: good.len() });
        spaces.extend(good);
    }
    let mut seen = BTreeSet::new();
    let mut partitions = Vec::new();
    for w in &spaces {
        let part = coset_partition(&f, w)?;
        if seen.insert(part.clone()) {
            let verified = is_division_sudoku(&square, &TriPartition::synchronized(part.clone()))?;
            partitions.push(CosetRecord { scalar_order: w.scalar_order(), basis: w.basis().to_vec(), partition: part, verified });
        }
    }
    let lines: Vec<SudokuPartition> =
        subspaces(&f, q, 1)?.iter().map(|w| coset_partition(&f, w)).collect::<Result<_>>()?;
    let lines_affine = is_affine_collection(&lines)?;
    let exact_sigma = if exact_sigma && q <= 4 { Some(sigma_scan(&square)?.len()) } else { None };
    let subfield = Subspace::spanned(&f, q, &[1])?;
    let standard_form = square.apply_isotopism(&Isotopism::diagonal(standardizing_permutation(&coset_partition(&f, &subfield)?)))?;
    let ds_class = if q == 3 { appendix_class_of(&standard_form)? } else { None };
    Ok(ConstructionReport {
        q,
        kind,
        c,
        isotopic_to_group: is_isotopic_to_group(&square),
        square,
        subspace_counts,
        partitions,
        lines_affine,
        line_count: lines.len(),
        exact_sigma,
        standard_form,
        ds_class,
    })
}
