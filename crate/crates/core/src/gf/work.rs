use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use rand_core::RngCore;

use crate::arith::FieldArith;
use crate::error::{Error, Result};
use crate::gf::{Elem, Level};
use crate::poly::dense;

/// A polynomial-represented extension `K = B[y]/(P)` of a table-backed
/// level `B`, used where `K` is too large for tables. Elements are
/// coefficient vectors of fixed length `deg P`, lowest degree first; `B`
/// sits inside as the constant vectors.
#[derive(Clone, Debug)]
pub struct WorkField {
    base: Level,
    modulus: Vec<Elem>,
}

impl WorkField {
    /// Extension of `base` of degree `t` by the smallest monic irreducible
    /// (in the same order used for table-backed levels).
    pub fn new(base: &Level, t: u32) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidParameter("work field degree must be at least 1".into()));
        }
        let t = t as usize;
        let q = base.size() as u64;
        let mut candidate = vec![Elem::ZERO; t + 1];
        candidate[t] = Elem::ONE;
        let mut idx: u64 = 0;
        loop {
            let mut v = idx;
            for c in candidate.iter_mut().take(t) {
                *c = Elem((v % q) as u32);
                v /= q;
            }
            if v > 0 {
                return Err(Error::NotIrreducible);
            }
            if dense::is_irreducible(base.as_ref(), &candidate) {
                return Ok(Self {
                    base: base.clone(),
                    modulus: candidate,
                });
            }
            idx += 1;
        }
    }

    pub fn base(&self) -> &Level {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    /// The constant vector for an element of the base level.
    pub fn lift(&self, c: Elem) -> Vec<Elem> {
        let mut v = vec![Elem::ZERO; self.degree()];
        v[0] = c;
        v
    }

    pub fn lift_poly(&self, f: &[Elem]) -> Vec<Vec<Elem>> {
        f.iter().map(|&c| self.lift(c)).collect()
    }

    /// `x^(|B|^j)`.
    pub fn frobenius(&self, x: &[Elem], j: u32) -> Vec<Elem> {
        let q = BigUint::from(self.base.size());
        let mut y = x.to_vec();
        for _ in 0..j {
            y = FieldArith::pow(self, &y, &q);
        }
        y
    }

    fn reduce(&self, v: Vec<Elem>) -> Vec<Elem> {
        let mut r = dense::rem(self.base.as_ref(), &v, &self.modulus);
        r.resize(self.degree(), Elem::ZERO);
        r
    }
}

impl FieldArith for WorkField {
    type E = Vec<Elem>;

    fn zero(&self) -> Vec<Elem> {
        vec![Elem::ZERO; self.degree()]
    }
    fn one(&self) -> Vec<Elem> {
        self.lift(Elem::ONE)
    }
    fn add(&self, a: &Vec<Elem>, b: &Vec<Elem>) -> Vec<Elem> {
        a.iter().zip(b).map(|(&x, &y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<Elem>, b: &Vec<Elem>) -> Vec<Elem> {
        a.iter().zip(b).map(|(&x, &y)| self.base.sub(x, y)).collect()
    }
    fn neg(&self, a: &Vec<Elem>) -> Vec<Elem> {
        a.iter().map(|&x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<Elem>, b: &Vec<Elem>) -> Vec<Elem> {
        self.reduce(dense::mul(self.base.as_ref(), a, b))
    }
    fn inv(&self, a: &Vec<Elem>) -> Option<Vec<Elem>> {
        if self.is_zero(a) {
            return None;
        }
        let e = self.cardinality() - 2u32;
        Some(FieldArith::pow(self, a, &e))
    }
    fn is_zero(&self, a: &Vec<Elem>) -> bool {
        a.iter().all(|x| x.is_zero())
    }
    fn characteristic(&self) -> u32 {
        self.base.characteristic()
    }
    fn cardinality(&self) -> BigUint {
        BigUint::from(self.base.size()).pow(self.degree() as u32)
    }
    fn from_int(&self, c: u64) -> Vec<Elem> {
        self.lift(self.base.from_int(c))
    }
    fn random_element(&self, rng: &mut dyn RngCore) -> Vec<Elem> {
        (0..self.degree())
            .map(|_| Elem(rng.next_u32() % self.base.size()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::build_field;

    #[test]
    fn matches_table_level_of_same_size() {
        // F_3[y]/(P) with P the smallest irreducible quadratic is F_9 with x^2+1
        let f3 = build_field(3, 1).unwrap();
        let w = WorkField::new(&f3, 2).unwrap();
        assert_eq!(w.modulus(), &[Elem(1), Elem(0), Elem(1)]);
        let f9 = build_field(3, 2).unwrap();
        for a in f9.enumerate() {
            for b in f9.enumerate() {
                let wa = f9.coeffs(a);
                let wb = f9.coeffs(b);
                assert_eq!(w.mul(&wa, &wb), f9.coeffs(f9.mul(a, b)));
            }
        }
    }

    #[test]
    fn inverse_and_frobenius_fixed_field() {
        let f4 = build_field(2, 2).unwrap();
        let w = WorkField::new(&f4, 3).unwrap();
        let mut count_fixed = 0;
        for i in 0..64u32 {
            let x: Vec<Elem> = (0..3).map(|j| Elem(i / 4u32.pow(j) % 4)).collect();
            if !w.is_zero(&x) {
                let xi = w.inv(&x).unwrap();
                assert_eq!(w.mul(&x, &xi), w.one());
            }
            if w.frobenius(&x, 1) == x {
                count_fixed += 1;
            }
            assert_eq!(w.frobenius(&x, 3), x);
        }
        assert_eq!(count_fixed, 4);
    }
}
