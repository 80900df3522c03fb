use super::field::{prime_power, GaloisField};
use crate::error::{Error, Result};

/// Dickson's quadratic nearfield on `GF(q²)`, `q` odd: `x∘y = xy` when `x`
/// is a square and `x·y^q` otherwise.
#[derive(Clone, Debug)]
pub struct QuadraticNearfield {
    field: GaloisField,
    q: usize,
    square: Vec<bool>,
    frobenius: Vec<usize>,
    inv: Vec<usize>,
}

impl QuadraticNearfield {
    pub fn new(q: usize) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        if p == 2 {
            return Err(Error::InvalidField("quadratic nearfields need odd q".into()));
        }
        let field = GaloisField::new(p, 2 * k)?;
        let square: Vec<bool> = field.elements().map(|x| field.is_square(x)).collect();
        let frobenius: Vec<usize> = field.elements().map(|x| field.pow(x, q)).collect();
        let mut nf = QuadraticNearfield { field, q, square, frobenius, inv: Vec::new() };
        nf.inv = nf.field.elements().map(|x| if x == 0 { 0 } else { (1..nf.order()).find(|&y| nf.mul(x, y) == 1).unwrap() }).collect();
        Ok(nf)
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn order(&self) -> usize {
        self.field.order()
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        if self.square[x] {
            self.field.mul(x, y)
        } else {
            self.field.mul(x, self.frobenius[y])
        }
    }

    /// Two-sided inverse under `∘`; `inv(0) = 0`.
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axioms(nf: &QuadraticNearfield, triples: impl Iterator<Item = (usize, usize, usize)>) {
        let f = nf.field();
        for (x, y, z) in triples {
            assert_eq!(nf.mul(x, f.add(y, z)), f.add(nf.mul(x, y), nf.mul(x, z)));
            assert_eq!(nf.mul(x, nf.mul(y, z)), nf.mul(nf.mul(x, y), z));
        }
        let m1 = f.neg(1);
        for x in f.elements() {
            assert_eq!(nf.mul(0, x), 0);
            assert_eq!(nf.mul(x, 0), 0);
            assert_eq!(nf.mul(1, x), x);
            assert_eq!(nf.mul(x, 1), x);
            assert_eq!(nf.mul(m1, x), f.neg(x));
            assert_eq!(nf.mul(x, m1), f.neg(x));
            if x != 0 {
                assert_eq!(nf.mul(x, nf.inv(x)), 1);
                assert_eq!(nf.mul(nf.inv(x), x), 1);
            }
            for y in f.elements() {
                let neg = f.neg(nf.mul(x, y));
                assert_eq!(nf.mul(f.neg(x), y), neg);
                assert_eq!(nf.mul(x, f.neg(y)), neg);
            }
        }
    }

    #[test]
    fn d9_axioms_exhaustive() {
        let nf = QuadraticNearfield::new(3).unwrap();
        axioms(&nf, (0..9).flat_map(|x| (0..9).flat_map(move |y| (0..9).map(move |z| (x, y, z)))));
    }

    #[test]
    fn d25_axioms_exhaustive() {
        let nf = QuadraticNearfield::new(5).unwrap();
        axioms(&nf, (0..25).flat_map(|x| (0..25).flat_map(move |y| (0..25).map(move |z| (x, y, z)))));
    }

    #[test]
    fn d9_is_not_a_field() {
        let nf = QuadraticNearfield::new(3).unwrap();
        assert!((0..9).any(|x| (0..9).any(|y| nf.mul(x, y) != nf.mul(y, x))));
        let rdist = (0..9).all(|x| (0..9).all(|y| (0..9).all(|z| nf.mul(nf.field().add(x, y), z) == nf.field().add(nf.mul(x, z), nf.mul(y, z)))));
        assert!(!rdist);
    }

    #[test]
    fn subfield_scalars_agree_with_field() {
        for q in [3, 5] {
            let nf = QuadraticNearfield::new(q).unwrap();
            let f = nf.field();
            for l in f.subfield(q).unwrap() {
                for x in f.elements() {
                    assert_eq!(nf.mul(l, x), f.mul(l, x));
                    assert_eq!(nf.mul(x, l), f.mul(l, x));
                }
            }
        }
    }

    #[test]
    fn zero_sum_lemma_on_d9() {
        let nf = QuadraticNearfield::new(3).unwrap();
        let f = nf.field();
        let sub = f.subfield(3).unwrap();
        for c in f.elements().filter(|c| !sub.contains(c)) {
            for a in f.elements() {
                for b in f.elements() {
                    if sub.contains(&f.add(a, b)) && sub.contains(&f.add(nf.mul(a, c), nf.mul(b, c))) {
                        assert_eq!(f.add(a, b), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_even_q() {
        assert!(QuadraticNearfield::new(4).is_err());
        assert!(QuadraticNearfield::new(6).is_err());
    }
}
