//! The minimal field interface shared by table-backed levels and
//! polynomial-represented work fields, so the dense polynomial routines in
//! [`crate::poly::dense`] run over either.

use core::fmt::Debug;

use num_bigint::BigUint;
use rand_core::RngCore;

pub trait FieldArith {
    type E: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `None` for zero.
    fn inv(&self, a: &Self::E) -> Option<Self::E>;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn characteristic(&self) -> u32;
    fn cardinality(&self) -> BigUint;
    /// Image of the integer `c` under `Z -> F_p -> self`.
    fn from_int(&self, c: u64) -> Self::E;
    fn random_element(&self, rng: &mut dyn RngCore) -> Self::E;

    fn pow(&self, a: &Self::E, exponent: &BigUint) -> Self::E {
        let mut acc = self.one();
        for i in (0..exponent.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if exponent.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
}
