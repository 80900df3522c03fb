use crate::error::{Error, Result};

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// `q = p^k` with `p` prime, if `q` is a prime power.
pub fn prime_power(q: usize) -> Option<(usize, usize)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

/// Polynomials over GF(p) as coefficient vectors, lowest degree first.
fn poly_rem(a: &[usize], m: &[usize], p: usize) -> Vec<usize> {
    let mut a = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = (1..p).find(|&i| i * m[dm] % p == 1).unwrap();
    while a.len() > dm {
        let top = *a.last().unwrap();
        if top != 0 {
            let f = top * lead_inv % p;
            let shift = a.len() - 1 - dm;
            for (i, &c) in m.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p * p - f * c % p) % p;
            }
        }
        a.pop();
    }
    a
}

fn digits(mut code: usize, p: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|_| {
            let d = code % p;
            code /= p;
            d
        })
        .collect()
}

fn is_irreducible(f: &[usize], p: usize) -> bool {
    let k = f.len() - 1;
    for d in 1..=k / 2 {
        for code in 0..p.pow(d as u32) {
            let mut g = digits(code, p, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The finite field of order `p^k`, elements encoded as base-`p` digit
/// vectors of polynomial residues, with full operation tables.
#[derive(Clone, Debug)]
pub struct GaloisField {
    p: usize,
    k: usize,
    modulus: Vec<usize>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl GaloisField {
    /// Uses the smallest monic irreducible modulus of degree `k`, reading
    /// coefficients high to low as a base-`p` number.
    pub fn new(p: usize, k: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if k == 0 || p.pow(k as u32) > 256 {
            return Err(Error::InvalidField(format!("order {p}^{k} unsupported")));
        }
        let modulus = (0..p.pow(k as u32))
            .map(|code| {
                let mut f = digits(code, p, k);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, p))
            .expect("irreducible polynomials exist in every degree");
        let q = p.pow(k as u32);
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        let encode = |v: &[usize]| v.iter().rev().fold(0, |acc, &d| acc * p + d);
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&sum) as u8;
                let mut prod = vec![0usize; 2 * k - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(&prod, &modulus, p);
                r.resize(k, 0);
                mul[a * q + b] = encode(&r) as u8;
            }
        }
        let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8).collect();
        let inv = (0..q)
            .map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u8 })
            .collect();
        Ok(GaloisField { p, k, modulus, add, mul, neg, inv })
    }

    /// The field of order `q`.
    pub fn of_order(q: usize) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Self::new(p, k)
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.neg.len()
    }

    /// Modulus coefficients, lowest degree first.
    pub fn modulus(&self) -> &[usize] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order() + b] as usize
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b] as usize
    }

    /// Multiplicative inverse; `inv(0) = 0`.
    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn pow(&self, a: usize, mut e: usize) -> usize {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: usize) -> usize {
        assert!(a != 0);
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_generator(&self, a: usize) -> bool {
        a != 0 && self.element_order(a) == self.order() - 1
    }

    /// The subfield of order `r`, as sorted elements; `None` unless
    /// `r^d = order` for some `d`.
    pub fn subfield(&self, r: usize) -> Option<Vec<usize>> {
        let (p, e) = prime_power(r)?;
        if p != self.p || !self.k.is_multiple_of(e) {
            return None;
        }
        Some((0..self.order()).filter(|&x| self.pow(x, r) == x).collect())
    }

    /// Euler's criterion in odd characteristic; 0 counts as a square.
    pub fn is_square(&self, a: usize) -> bool {
        assert!(self.p != 2, "squareness test needs odd characteristic");
        a == 0 || self.pow(a, (self.order() - 1) / 2) == 1
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &GaloisField) {
        let q = f.order();
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..q {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                }
            }
        }
    }

    #[test]
    fn small_fields_satisfy_axioms() {
        for (p, k) in [(2, 1), (2, 2), (3, 2), (2, 4), (5, 2)] {
            check_axioms(&GaloisField::new(p, k).unwrap());
        }
    }

    #[test]
    fn moduli_are_smallest() {
        assert_eq!(GaloisField::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(GaloisField::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(GaloisField::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn gf9_is_cyclic_with_four_squares() {
        let f = GaloisField::new(3, 2).unwrap();
        assert!((1..9).any(|a| f.is_generator(a)));
        assert_eq!((1..9).filter(|&a| f.pow(a, 4) == 1).count(), 4);
        let squares: std::collections::BTreeSet<usize> = (0..9).map(|a| f.mul(a, a)).collect();
        for a in 0..9 {
            assert_eq!(f.is_square(a), squares.contains(&a));
        }
        let f25 = GaloisField::new(5, 2).unwrap();
        let sq25: std::collections::BTreeSet<usize> = (0..25).map(|a| f25.mul(a, a)).collect();
        assert!((0..25).all(|a| f25.is_square(a) == sq25.contains(&a)));
    }

    #[test]
    fn frobenius_fixes_subfield() {
        let f = GaloisField::new(2, 4).unwrap();
        let fixed: Vec<usize> = (0..16).filter(|&x| f.pow(x, 4) == x).collect();
        assert_eq!(fixed.len(), 4);
        assert_eq!(f.subfield(4).unwrap(), fixed);
        assert!(f.subfield(8).is_none());
        assert_eq!(GaloisField::new(3, 4).unwrap().subfield(9).unwrap().len(), 9);
    }

    #[test]
    fn rejects_non_primes() {
        assert!(GaloisField::new(4, 1).is_err());
        assert!(GaloisField::of_order(6).is_err());
        assert_eq!(prime_power(81), Some((3, 4)));
    }
}
