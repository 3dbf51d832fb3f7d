//! Finite fields as towers of table-backed levels.
//!
//! A [`FieldLevel`] is either a prime field `F_p` or a simple extension of a
//! lower level by a monic irreducible polynomial. An element is stored as a
//! single index whose base-`|base|` digits are its coefficients over the level
//! below, lowest degree first; flattening all the way down gives the base-`p`
//! digits of the index. Consequently elements of any level in the base chain
//! keep the same index in every level above it, and addition is digitwise
//! mod `p` regardless of the tower shape.
//!
//! Multiplication goes through discrete log/antilog tables and addition
//! through Zech logarithms (XOR in characteristic 2), built once at
//! construction by slow polynomial arithmetic.

mod basis;
mod embed;
mod linalg;
mod tower;
mod work;

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::arith::FieldArith;
use crate::error::{Error, Result};
use crate::poly::dense;

pub use basis::Basis;
pub use embed::Embedding;
pub use linalg::{invert_matrix, mat_vec};
pub use tower::{CoprimeTower, FieldTower};
pub use work::WorkField;

/// Largest level for which lookup tables are built.
pub const MAX_TABLE_FIELD: u32 = 1 << 22;

const NO_LOG: u32 = u32::MAX;

/// An element of some [`FieldLevel`], as its index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

pub type Level = Arc<FieldLevel>;

pub struct FieldLevel {
    p: u32,
    degree: u32,
    size: u32,
    base: Option<Level>,
    rel_degree: u32,
    modulus: Vec<Elem>,
    order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg: Vec<u32>,
}

impl fmt::Debug for FieldLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldLevel")
            .field("p", &self.p)
            .field("degree", &self.degree)
            .field("rel_degree", &self.rel_degree)
            .field("modulus", &self.modulus)
            .field("base", &self.base)
            .finish()
    }
}

impl PartialEq for FieldLevel {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.degree == other.degree
            && self.modulus == other.modulus
            && self.base == other.base
    }
}

impl Eq for FieldLevel {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn checked_size(base: u32, exp: u32) -> Option<u32> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u64)?;
        if acc > MAX_TABLE_FIELD as u64 {
            return None;
        }
    }
    Some(acc as u32)
}

fn saturating_pow(base: u64, exp: u64) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// `F_{p^n}` with the smallest monic irreducible defining polynomial over `F_p`.
pub fn build_field(p: u32, n: u32) -> Result<Level> {
    let prime = FieldLevel::prime(p)?;
    if n == 0 {
        return Err(Error::InvalidParameter("field degree must be at least 1".into()));
    }
    if n == 1 {
        return Ok(prime);
    }
    FieldLevel::extension(&prime, n)
}

/// Slow arithmetic over a level used while its tables do not exist yet.
struct Slow<'a> {
    base: &'a FieldLevel,
    modulus: &'a [Elem],
    q: u32,
    r: usize,
}

impl Slow<'_> {
    fn decode(&self, x: u32) -> Vec<Elem> {
        let mut out = Vec::with_capacity(self.r);
        let mut x = x;
        for _ in 0..self.r {
            out.push(Elem(x % self.q));
            x /= self.q;
        }
        out
    }

    fn encode(&self, c: &[Elem]) -> u32 {
        c.iter().rev().fold(0u32, |acc, e| acc * self.q + e.0)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let a = self.decode(a);
        let b = self.decode(b);
        let prod = dense::mul(self.base, &a, &b);
        let mut rem = dense::rem(self.base, &prod, self.modulus);
        rem.resize(self.r, Elem::ZERO);
        self.encode(&rem)
    }
}

fn digit_add(p: u32, mut a: u32, mut b: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    let mut out = 0u32;
    let mut place = 1u32;
    while a > 0 || b > 0 {
        let d = (a % p + b % p) % p;
        out += d * place;
        a /= p;
        b /= p;
        place = place.wrapping_mul(p);
    }
    out
}

fn digit_neg(p: u32, mut a: u32) -> u32 {
    let mut out = 0u32;
    let mut place = 1u32;
    while a > 0 {
        let d = (p - a % p) % p;
        out += d * place;
        a /= p;
        place = place.wrapping_mul(p);
    }
    out
}

impl FieldLevel {
    /// The prime field `F_p`; its defining polynomial is recorded as `x`.
    pub fn prime(p: u32) -> Result<Level> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p > MAX_TABLE_FIELD {
            return Err(Error::BudgetExceeded {
                what: "field tables",
                needed: p as u128,
                budget: MAX_TABLE_FIELD as u64,
            });
        }
        let slow_mul = |a: u32, b: u32| ((a as u64 * b as u64) % p as u64) as u32;
        Ok(Arc::new(Self::with_tables(
            p,
            1,
            p,
            None,
            1,
            vec![Elem(0), Elem(1)],
            slow_mul,
        )))
    }

    /// Degree-`r` extension of `base` by its smallest monic irreducible
    /// polynomial (coefficient vectors ordered as in [`FieldLevel::enumerate`]).
    pub fn extension(base: &Level, r: u32) -> Result<Level> {
        if r == 0 {
            return Err(Error::InvalidParameter("extension degree must be at least 1".into()));
        }
        let size = checked_size(base.size, r).ok_or(Error::BudgetExceeded {
            what: "field tables",
            needed: saturating_pow(base.size as u64, r as u64),
            budget: MAX_TABLE_FIELD as u64,
        })?;
        let modulus = smallest_irreducible(base, r as usize, size);
        Ok(Arc::new(Self::from_modulus(base, modulus, size)))
    }

    /// Extension of `base` by an explicit monic defining polynomial, verified
    /// irreducible by trial division.
    pub fn with_modulus(base: &Level, modulus: Vec<Elem>) -> Result<Level> {
        let modulus = dense::normalized(base.as_ref(), modulus);
        if modulus.len() < 2 || modulus.last() != Some(&Elem::ONE) {
            return Err(Error::NotIrreducible);
        }
        if modulus.iter().any(|c| c.0 >= base.size) {
            return Err(Error::NotIrreducible);
        }
        let r = (modulus.len() - 1) as u32;
        let size = checked_size(base.size, r).ok_or(Error::BudgetExceeded {
            what: "field tables",
            needed: saturating_pow(base.size as u64, r as u64),
            budget: MAX_TABLE_FIELD as u64,
        })?;
        if !is_irreducible_trial(base, &modulus) {
            return Err(Error::NotIrreducible);
        }
        Ok(Arc::new(Self::from_modulus(base, modulus, size)))
    }

    fn from_modulus(base: &Level, modulus: Vec<Elem>, size: u32) -> Self {
        let r = modulus.len() - 1;
        let slow = Slow {
            base: base.as_ref(),
            modulus: &modulus,
            q: base.size,
            r,
        };
        let slow_mul = |a: u32, b: u32| slow.mul(a, b);
        Self::with_tables(
            base.p,
            base.degree * r as u32,
            size,
            Some(base.clone()),
            r as u32,
            modulus.clone(),
            slow_mul,
        )
    }

    fn with_tables(
        p: u32,
        degree: u32,
        size: u32,
        base: Option<Level>,
        rel_degree: u32,
        modulus: Vec<Elem>,
        slow_mul: impl Fn(u32, u32) -> u32,
    ) -> Self {
        let order = size - 1;
        let slow_pow = |a: u32, mut e: u64| {
            let mut acc = 1u32;
            let mut b = a;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, b);
                }
                b = slow_mul(b, b);
                e >>= 1;
            }
            acc
        };
        let factors = prime_factors(order as u64);
        let generator = (1..size)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&l| slow_pow(g, order as u64 / l) != 1)
            })
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![NO_LOG; size as usize];
        let mut cur = 1u32;
        for i in 0..order {
            exp[i as usize] = cur;
            log[cur as usize] = i;
            cur = slow_mul(cur, generator);
        }
        for i in 0..order as usize {
            exp[order as usize + i] = exp[i];
        }
        let neg: Vec<u32> = (0..size).map(|x| digit_neg(p, x)).collect();
        let zech = if p == 2 {
            Vec::new()
        } else {
            (0..order)
                .map(|i| {
                    let s = digit_add(p, 1, exp[i as usize]);
                    if s == 0 {
                        NO_LOG
                    } else {
                        log[s as usize]
                    }
                })
                .collect()
        };
        FieldLevel {
            p,
            degree,
            size,
            base,
            rel_degree,
            modulus,
            order,
            exp,
            log,
            zech,
            neg,
        }
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Degree over the level below (1 for a prime field).
    #[inline]
    pub fn rel_degree(&self) -> u32 {
        self.rel_degree
    }

    #[inline]
    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn cardinality(&self) -> BigUint {
        BigUint::from(self.size)
    }

    pub fn base(&self) -> Option<&Level> {
        self.base.as_ref()
    }

    pub fn is_prime_field(&self) -> bool {
        self.base.is_none()
    }

    /// Defining polynomial over the level below, lowest degree first.
    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    /// Size of the level below (`p` for a prime field).
    pub fn base_size(&self) -> u32 {
        self.base.as_ref().map_or(self.p, |b| b.size)
    }

    /// True if `sub` is this level or one of the levels below it, so that its
    /// elements are the indices `< sub.size()` here.
    pub fn has_sublevel(&self, sub: &FieldLevel) -> bool {
        let mut cur: Option<&FieldLevel> = Some(self);
        while let Some(level) = cur {
            if level == sub {
                return true;
            }
            cur = level.base.as_deref();
        }
        // every level contains its prime field by index
        sub.is_prime_field() && sub.p == self.p
    }

    /// The generator `u` of this level over the level below.
    pub fn generator(&self) -> Elem {
        if self.is_prime_field() {
            Elem(1)
        } else {
            Elem(self.base_size())
        }
    }

    pub fn elem(&self, index: u32) -> Result<Elem> {
        if index < self.size {
            Ok(Elem(index))
        } else {
            Err(Error::InvalidParameter(alloc::format!(
                "element index {index} out of range for a field of size {}",
                self.size
            )))
        }
    }

    /// All elements in index order (lexicographic on the coefficient
    /// vector read from the highest-degree coordinate down).
    pub fn enumerate(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.size).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let d = if lb >= la { lb - la } else { lb + self.order - la };
        let z = self.zech[d as usize];
        if z == NO_LOG {
            Elem::ZERO
        } else {
            Elem(self.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        Elem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::InverseOfZero);
        }
        Ok(Elem(self.exp[(self.order - self.log[a.0 as usize]) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    #[inline]
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let l = self.log[a.0 as usize] as u64;
        let k = (l * (e % self.order as u64)) % self.order as u64;
        Elem(self.exp[k as usize])
    }

    pub fn pow_big(&self, a: Elem, e: &BigUint) -> Elem {
        if e.bits() == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let reduced = (e % BigUint::from(self.order)).to_u64().unwrap_or(0);
        // a^e for e > 0 with e = 0 mod order is 1
        self.pow(a, if reduced == 0 { self.order as u64 } else { reduced })
    }

    /// Discrete log with respect to the table generator; `None` for zero.
    pub fn log(&self, a: Elem) -> Option<u32> {
        if a.0 == 0 {
            None
        } else {
            Some(self.log[a.0 as usize])
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_of(&self, a: Elem) -> Option<u32> {
        let l = self.log(a)?;
        Some(self.order / num_integer::gcd(self.order, l))
    }

    /// `x^(s^j)` where `s` is the size of the level below: the relative
    /// Frobenius applied `j` times (reduced mod the relative degree).
    pub fn frobenius(&self, x: Elem, j: u32) -> Elem {
        let j = j % self.rel_degree;
        let mut e: u64 = 1;
        for _ in 0..j {
            e = (e * self.base_size() as u64) % self.order.max(1) as u64;
        }
        if j == 0 {
            return x;
        }
        self.pow(x, if e == 0 { self.order as u64 } else { e })
    }

    /// `x^(p^j)`, the absolute Frobenius.
    pub fn abs_frobenius(&self, x: Elem, j: u32) -> Elem {
        let mut y = x;
        for _ in 0..(j % self.degree) {
            y = self.pow(y, self.p as u64);
        }
        y
    }

    /// Trace to the subfield of size `sub_size` (which must be `p^s` with
    /// `s | degree`), returned as an element of this level.
    pub fn trace_to_subfield(&self, x: Elem, sub_degree: u32) -> Result<Elem> {
        if sub_degree == 0 || !self.degree.is_multiple_of(sub_degree) {
            return Err(Error::NotSubfield {
                sub: sub_degree,
                target: self.degree,
            });
        }
        let mut acc = Elem::ZERO;
        let mut y = x;
        for _ in 0..self.degree / sub_degree {
            acc = self.add(acc, y);
            y = self.abs_frobenius(y, sub_degree);
        }
        Ok(acc)
    }

    pub fn norm_to_subfield(&self, x: Elem, sub_degree: u32) -> Result<Elem> {
        if sub_degree == 0 || !self.degree.is_multiple_of(sub_degree) {
            return Err(Error::NotSubfield {
                sub: sub_degree,
                target: self.degree,
            });
        }
        let mut acc = Elem::ONE;
        let mut y = x;
        for _ in 0..self.degree / sub_degree {
            acc = self.mul(acc, y);
            y = self.abs_frobenius(y, sub_degree);
        }
        Ok(acc)
    }

    /// Coefficients over the level below, lowest degree first.
    pub fn coeffs(&self, x: Elem) -> Vec<Elem> {
        let q = self.base_size();
        if self.is_prime_field() {
            return vec![x];
        }
        let mut v = x.0;
        (0..self.rel_degree)
            .map(|_| {
                let c = v % q;
                v /= q;
                Elem(c)
            })
            .collect()
    }

    pub fn from_coeffs(&self, c: &[Elem]) -> Result<Elem> {
        if c.len() != self.rel_degree as usize {
            return Err(Error::ArityMismatch {
                expected: self.rel_degree as usize,
                got: c.len(),
            });
        }
        let q = self.base_size();
        if self.is_prime_field() {
            return if c[0].0 < q { Ok(c[0]) } else { Err(Error::LevelMismatch) };
        }
        let mut v = 0u32;
        for e in c.iter().rev() {
            if e.0 >= q {
                return Err(Error::LevelMismatch);
            }
            v = v * q + e.0;
        }
        Ok(Elem(v))
    }

    /// Base-`p` digits of the flattened representation, lowest first.
    pub fn digits(&self, x: Elem) -> Vec<u32> {
        let mut v = x.0;
        (0..self.degree)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Elem> {
        if digits.len() != self.degree as usize {
            return Err(Error::ArityMismatch {
                expected: self.degree as usize,
                got: digits.len(),
            });
        }
        let mut v = 0u32;
        for &d in digits.iter().rev() {
            if d >= self.p {
                return Err(Error::InvalidParameter(alloc::format!(
                    "digit {d} out of range for characteristic {}",
                    self.p
                )));
            }
            v = v * self.p + d;
        }
        Ok(Elem(v))
    }

    /// Image of an integer in the prime field.
    #[inline]
    pub fn from_int(&self, c: u64) -> Elem {
        Elem((c % self.p as u64) as u32)
    }

    pub fn is_in_sublevel(&self, x: Elem, sub: &FieldLevel) -> bool {
        x.0 < sub.size
    }
}

impl FieldArith for FieldLevel {
    type E = Elem;

    fn zero(&self) -> Elem {
        Elem::ZERO
    }
    fn one(&self) -> Elem {
        Elem::ONE
    }
    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        FieldLevel::add(self, *a, *b)
    }
    fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        FieldLevel::sub(self, *a, *b)
    }
    fn neg(&self, a: &Elem) -> Elem {
        FieldLevel::neg(self, *a)
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        FieldLevel::mul(self, *a, *b)
    }
    fn inv(&self, a: &Elem) -> Option<Elem> {
        FieldLevel::inv(self, *a).ok()
    }
    fn is_zero(&self, a: &Elem) -> bool {
        a.0 == 0
    }
    fn characteristic(&self) -> u32 {
        self.p
    }
    fn cardinality(&self) -> BigUint {
        BigUint::from(self.size)
    }
    fn from_int(&self, c: u64) -> Elem {
        FieldLevel::from_int(self, c)
    }
    fn random_element(&self, rng: &mut dyn rand_core::RngCore) -> Elem {
        Elem(rng.next_u32() % self.size)
    }
    fn pow(&self, a: &Elem, e: &BigUint) -> Elem {
        self.pow_big(*a, e)
    }
}

/// Trial division of a monic polynomial over `base` by every monic
/// polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible_trial(base: &FieldLevel, f: &[Elem]) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let q = base.size as u64;
    for k in 1..=n / 2 {
        let count = q.pow(k as u32);
        let mut divisor = vec![Elem::ZERO; k + 1];
        divisor[k] = Elem::ONE;
        for idx in 0..count {
            let mut v = idx;
            for c in divisor.iter_mut().take(k) {
                *c = Elem((v % q) as u32);
                v /= q;
            }
            if dense::rem(base, f, &divisor).is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(base: &FieldLevel, r: usize, size: u32) -> Vec<Elem> {
    let q = base.size;
    let mut candidate = vec![Elem::ZERO; r + 1];
    candidate[r] = Elem::ONE;
    for idx in 0..size {
        let mut v = idx;
        for c in candidate.iter_mut().take(r) {
            *c = Elem(v % q);
            v /= q;
        }
        if is_irreducible_trial(base, &candidate) {
            return candidate;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// A checked element carrying its level; arithmetic rejects operands from
/// different levels.
#[derive(Clone)]
pub struct FieldElement {
    level: Level,
    value: Elem,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.level.digits(self.value))
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && (Arc::ptr_eq(&self.level, &other.level) || self.level == other.level)
    }
}

impl FieldElement {
    pub fn new(level: &Level, value: Elem) -> Result<Self> {
        level.elem(value.0)?;
        Ok(Self {
            level: level.clone(),
            value,
        })
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn level(&self) -> &Level {
        &self.level
    }

    /// Coefficient vector over the level below.
    pub fn coeffs(&self) -> Vec<Elem> {
        self.level.coeffs(self.value)
    }

    fn same_level(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.level, &other.level) || self.level == other.level {
            Ok(())
        } else {
            Err(Error::LevelMismatch)
        }
    }

    fn wrap(&self, value: Elem) -> Self {
        Self {
            level: self.level.clone(),
            value,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_level(other)?;
        Ok(self.wrap(self.level.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_level(other)?;
        Ok(self.wrap(self.level.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_level(other)?;
        Ok(self.wrap(self.level.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.wrap(self.level.inv(self.value)?))
    }

    pub fn pow(&self, e: &BigUint) -> Self {
        self.wrap(self.level.pow_big(self.value, e))
    }
}
