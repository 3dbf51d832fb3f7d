use alloc::vec::Vec;

use crate::arith::FieldArith;

/// Inverse of a square matrix (rows of entries) by Gauss-Jordan elimination;
/// `None` if singular.
pub fn invert_matrix<F: FieldArith + ?Sized>(field: &F, m: &[Vec<F::E>]) -> Option<Vec<Vec<F::E>>> {
    let n = m.len();
    let mut a: Vec<Vec<F::E>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !field.is_zero(&a[r][col]))?;
        a.swap(col, pivot);
        let inv = field.inv(&a[col][col])?;
        for x in a[col].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for r in 0..n {
            if r != col && !field.is_zero(&a[r][col]) {
                let factor = a[r][col].clone();
                for c in 0..2 * n {
                    let t = field.mul(&factor, &a[col][c]);
                    a[r][c] = field.sub(&a[r][c], &t);
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_vec<F: FieldArith + ?Sized>(field: &F, m: &[Vec<F::E>], v: &[F::E]) -> Vec<F::E> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(field.zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)))
        })
        .collect()
}
