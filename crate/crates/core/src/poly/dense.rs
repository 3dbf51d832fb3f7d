//! Dense univariate routines on coefficient slices (lowest degree first),
//! generic over [`FieldArith`]. Results are normalized: no trailing zeros,
//! the zero polynomial is the empty vector.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use rand_core::RngCore;

use crate::arith::FieldArith;

pub fn normalized<F: FieldArith + ?Sized>(field: &F, mut v: Vec<F::E>) -> Vec<F::E> {
    while v.last().is_some_and(|c| field.is_zero(c)) {
        v.pop();
    }
    v
}

pub fn degree<E>(f: &[E]) -> Option<usize> {
    f.len().checked_sub(1)
}

pub fn add<F: FieldArith + ?Sized>(field: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let n = a.len().max(b.len());
    let zero = field.zero();
    let out = (0..n)
        .map(|i| field.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    normalized(field, out)
}

pub fn sub<F: FieldArith + ?Sized>(field: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let n = a.len().max(b.len());
    let zero = field.zero();
    let out = (0..n)
        .map(|i| field.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    normalized(field, out)
}

pub fn scale<F: FieldArith + ?Sized>(field: &F, a: &[F::E], c: &F::E) -> Vec<F::E> {
    normalized(field, a.iter().map(|x| field.mul(x, c)).collect())
}

pub fn mul<F: FieldArith + ?Sized>(field: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if field.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = field.add(&out[i + j], &field.mul(x, y));
        }
    }
    normalized(field, out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem<F: FieldArith + ?Sized>(
    field: &F,
    a: &[F::E],
    b: &[F::E],
) -> (Vec<F::E>, Vec<F::E>) {
    let b = normalized(field, b.to_vec());
    let db = degree(&b).expect("division by the zero polynomial");
    let mut rem = normalized(field, a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = field.inv(&b[db]).expect("nonzero leading coefficient");
    let mut quot = vec![field.zero(); rem.len() - db];
    while rem.len() > db {
        let dr = rem.len() - 1;
        let c = field.mul(&rem[dr], &lead_inv);
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            rem[shift + i] = field.sub(&rem[shift + i], &field.mul(&c, bc));
        }
        quot[shift] = c;
        rem.pop();
        rem = normalized(field, rem);
    }
    (normalized(field, quot), rem)
}

pub fn rem<F: FieldArith + ?Sized>(field: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    divrem(field, a, b).1
}

pub fn monic<F: FieldArith + ?Sized>(field: &F, a: &[F::E]) -> Vec<F::E> {
    match a.last() {
        None => Vec::new(),
        Some(lead) => {
            let inv = field.inv(lead).expect("normalized leading coefficient is nonzero");
            scale(field, a, &inv)
        }
    }
}

/// Monic gcd by Euclid; the gcd of two zero polynomials is zero.
pub fn gcd<F: FieldArith + ?Sized>(field: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let mut a = normalized(field, a.to_vec());
    let mut b = normalized(field, b.to_vec());
    while !b.is_empty() {
        let r = rem(field, &a, &b);
        a = b;
        b = r;
    }
    monic(field, &a)
}

pub fn derivative<F: FieldArith + ?Sized>(field: &F, a: &[F::E]) -> Vec<F::E> {
    if a.len() <= 1 {
        return Vec::new();
    }
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| field.mul(&field.from_int(i as u64), c))
        .collect();
    normalized(field, out)
}

pub fn eval<F: FieldArith + ?Sized>(field: &F, a: &[F::E], x: &F::E) -> F::E {
    a.iter()
        .rev()
        .fold(field.zero(), |acc, c| field.add(&field.mul(&acc, x), c))
}

/// `base^e mod modulus`.
pub fn powmod<F: FieldArith + ?Sized>(
    field: &F,
    base: &[F::E],
    e: &BigUint,
    modulus: &[F::E],
) -> Vec<F::E> {
    let mut acc = rem(field, &[field.one()], modulus);
    let b = rem(field, base, modulus);
    for i in (0..e.bits()).rev() {
        acc = rem(field, &mul(field, &acc, &acc), modulus);
        if e.bit(i) {
            acc = rem(field, &mul(field, &acc, &b), modulus);
        }
    }
    acc
}

/// True if `a` divides `b` exactly (`a` nonzero).
pub fn divides<F: FieldArith + ?Sized>(field: &F, a: &[F::E], b: &[F::E]) -> bool {
    rem(field, b, a).is_empty()
}

/// `x^(Q^k) mod f` for `Q = |field|`, by repeated `Q`-th powering.
pub fn frobenius_x<F: FieldArith + ?Sized>(field: &F, k: u32, f: &[F::E]) -> Vec<F::E> {
    let q = field.cardinality();
    let mut acc = rem(field, &[field.zero(), field.one()], f);
    for _ in 0..k {
        acc = powmod(field, &acc, &q, f);
    }
    acc
}

/// Rabin's test: a monic `f` of degree `n >= 1` is irreducible iff
/// `f | x^(Q^n) - x` and `gcd(f, x^(Q^(n/l)) - x) = 1` for each prime `l | n`.
pub fn is_irreducible<F: FieldArith + ?Sized>(field: &F, f: &[F::E]) -> bool {
    let f = normalized(field, f.to_vec());
    let n = match degree(&f) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let x = [field.zero(), field.one()];
    let mut l = 2usize;
    let mut m = n;
    while m > 1 {
        if m % l == 0 {
            let h = sub(field, &frobenius_x(field, (n / l) as u32, &f), &x);
            if gcd(field, &f, &h).len() != 1 {
                return false;
            }
            while m % l == 0 {
                m /= l;
            }
        }
        l += 1;
    }
    rem(field, &sub(field, &frobenius_x(field, n as u32, &f), &x), &f).is_empty()
}

/// Degrees of the distinct irreducible factors of a nonzero `f`, found by
/// distinct-degree factorization after stripping repeated factors.
pub fn irreducible_factor_degrees<F: FieldArith + ?Sized>(field: &F, f: &[F::E]) -> Vec<usize> {
    let mut h = monic(field, &normalized(field, f.to_vec()));
    let x = [field.zero(), field.one()];
    let mut out = Vec::new();
    let mut xi = x.to_vec();
    let q = field.cardinality();
    let mut i = 0usize;
    while h.len() > 1 {
        i += 1;
        xi = powmod(field, &xi, &q, &h);
        let g = gcd(field, &h, &sub(field, &xi, &x));
        if g.len() > 1 {
            for _ in 0..(g.len() - 1) / i {
                out.push(i);
            }
            loop {
                let c = gcd(field, &h, &g);
                if c.len() <= 1 {
                    break;
                }
                h = divrem(field, &h, &c).0;
            }
            xi = rem(field, &xi, &h);
        }
    }
    out
}

/// Roots of a monic `g` that is a product of distinct linear factors over
/// `field`, by Cantor-Zassenhaus equal-degree splitting.
pub fn split_linear<F: FieldArith + ?Sized>(
    field: &F,
    g: &[F::E],
    rng: &mut dyn RngCore,
) -> Vec<F::E> {
    let g = monic(field, &normalized(field, g.to_vec()));
    let mut out = Vec::new();
    let mut stack = vec![g];
    let card = field.cardinality();
    let odd = field.characteristic() != 2;
    let half = (&card - 1u32) >> 1;
    let abs_deg = card.bits() - 1;
    while let Some(g) = stack.pop() {
        match g.len() {
            0 | 1 => continue,
            2 => {
                out.push(field.neg(&g[0]));
                continue;
            }
            _ => {}
        }
        loop {
            let a = field.random_element(rng);
            let w = if odd {
                let base = [a, field.one()];
                sub(field, &powmod(field, &base, &half, &g), &[field.one()])
            } else {
                let base = rem(field, &[field.zero(), a], &g);
                let mut acc = Vec::new();
                let mut t = base;
                for _ in 0..abs_deg {
                    acc = add(field, &acc, &t);
                    t = rem(field, &mul(field, &t, &t), &g);
                }
                acc
            };
            let d = gcd(field, &w, &g);
            if d.len() > 1 && d.len() < g.len() {
                let other = divrem(field, &g, &d).0;
                stack.push(d);
                stack.push(other);
                break;
            }
        }
    }
    out
}
