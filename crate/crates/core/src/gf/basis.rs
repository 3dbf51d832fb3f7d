use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::gf::{invert_matrix, mat_vec, Elem, FieldTower};

/// A basis `alpha_1, ..., alpha_r` of `k_r` over `k`.
#[derive(Clone, Debug)]
pub struct Basis {
    tower: FieldTower,
    elems: Vec<Elem>,
    /// Column `i` holds the power-basis coordinates of `alpha_i`.
    matrix: Vec<Vec<Elem>>,
    inverse: Vec<Vec<Elem>>,
}

impl Basis {
    /// `1, u, ..., u^(r-1)` for the generator `u` of `k_r` over `k`.
    pub fn power(tower: &FieldTower) -> Self {
        let ext = tower.ext();
        let mut elems = Vec::with_capacity(tower.r() as usize);
        let mut acc = Elem::ONE;
        let u = if tower.r() == 1 { Elem::ONE } else { ext.generator() };
        for _ in 0..tower.r() {
            elems.push(acc);
            acc = ext.mul(acc, u);
        }
        Self::new(tower, elems).expect("power basis is a basis")
    }

    pub fn new(tower: &FieldTower, elems: Vec<Elem>) -> Result<Self> {
        let r = tower.r() as usize;
        if elems.len() != r {
            return Err(Error::ArityMismatch {
                expected: r,
                got: elems.len(),
            });
        }
        for e in &elems {
            tower.ext().elem(e.0)?;
        }
        let cols: Vec<Vec<Elem>> = elems.iter().map(|&a| tower.power_coords(a)).collect();
        let matrix: Vec<Vec<Elem>> = (0..r)
            .map(|row| (0..r).map(|col| cols[col][row]).collect())
            .collect();
        let inverse = invert_matrix(tower.base().as_ref(), &matrix).ok_or(Error::SingularBasis)?;
        Ok(Self {
            tower: tower.clone(),
            elems,
            matrix,
            inverse,
        })
    }

    /// Uniformly random basis by rejection sampling on singular draws.
    pub fn random<R: RngCore>(tower: &FieldTower, rng: &mut R) -> Self {
        let size = tower.ext().size();
        loop {
            let elems = (0..tower.r()).map(|_| Elem(rng.next_u32() % size)).collect();
            if let Ok(b) = Self::new(tower, elems) {
                return b;
            }
        }
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// `(x_1, ..., x_r)` in `k^r` with `x = sum_i x_i alpha_i`.
    pub fn coords(&self, x: Elem) -> Vec<Elem> {
        let pc = self.tower.power_coords(x);
        mat_vec(self.tower.base().as_ref(), &self.inverse, &pc)
    }

    pub fn from_coords(&self, c: &[Elem]) -> Result<Elem> {
        if c.len() != self.elems.len() {
            return Err(Error::ArityMismatch {
                expected: self.elems.len(),
                got: c.len(),
            });
        }
        if c.iter().any(|&x| !self.tower.is_in_base(x)) {
            return Err(Error::LevelMismatch);
        }
        let pc = mat_vec(self.tower.base().as_ref(), &self.matrix, c);
        self.tower.from_power_coords(&pc)
    }
}
