use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldLevel, Level};
use crate::poly::dense;

/// A field homomorphism from a level into a larger field of the same
/// characteristic. Each generator is sent to the first root of its defining
/// polynomial in the target's enumeration order, recursively from the
/// prime field up, so any two embeddings of levels sharing a sublevel agree
/// on it.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Level,
    target: Level,
    map: Vec<Elem>,
}

impl Embedding {
    pub fn new(source: &Level, target: &Level) -> Result<Self> {
        if source.characteristic() != target.characteristic()
            || !target.degree().is_multiple_of(source.degree())
        {
            return Err(Error::NotSubfield {
                sub: source.degree(),
                target: target.degree(),
            });
        }
        let map = match source.base() {
            None => source.enumerate().collect(),
            Some(base) => {
                let below = Embedding::new(base, target)?;
                let image: Vec<Elem> = source.modulus().iter().map(|&c| below.apply(c)).collect();
                let root = target
                    .enumerate()
                    .find(|x| dense::eval(target.as_ref(), &image, x).is_zero())
                    .ok_or(Error::NoRootFound)?;
                let q = base.size();
                let r = source.rel_degree();
                let mut powers = Vec::with_capacity(r as usize);
                let mut acc = Elem::ONE;
                for _ in 0..r {
                    powers.push(acc);
                    acc = target.mul(acc, root);
                }
                source
                    .enumerate()
                    .map(|x| {
                        let mut v = x.0;
                        let mut out = Elem::ZERO;
                        for pw in &powers {
                            let c = below.apply(Elem(v % q));
                            v /= q;
                            out = target.add(out, target.mul(c, *pw));
                        }
                        out
                    })
                    .collect()
            }
        };
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            map,
        })
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x.0 as usize]
    }

    pub fn source(&self) -> &Level {
        &self.source
    }

    pub fn target(&self) -> &Level {
        &self.target
    }

    pub fn source_level(&self) -> &FieldLevel {
        self.source.as_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::build_field;

    #[test]
    fn unital_and_root_of_modulus() {
        let f4 = build_field(2, 2).unwrap();
        let f16 = build_field(2, 4).unwrap();
        let e = Embedding::new(&f4, &f16).unwrap();
        assert_eq!(e.apply(Elem::ONE), Elem::ONE);
        assert_eq!(e.apply(Elem::ZERO), Elem::ZERO);
        let u = e.apply(f4.generator());
        // u^2 + u + 1 = 0 in F_16
        assert!(f16.add(f16.add(f16.mul(u, u), u), Elem::ONE).is_zero());
        // first root in enumeration order
        let first = f16
            .enumerate()
            .find(|&x| f16.add(f16.add(f16.mul(x, x), x), Elem::ONE).is_zero())
            .unwrap();
        assert_eq!(u, first);
    }

    #[test]
    fn homomorphism_f4_into_f64() {
        let f4 = build_field(2, 2).unwrap();
        let f64_ = build_field(2, 6).unwrap();
        let e = Embedding::new(&f4, &f64_).unwrap();
        for a in f4.enumerate() {
            for b in f4.enumerate() {
                assert_eq!(e.apply(f4.mul(a, b)), f64_.mul(e.apply(a), e.apply(b)));
                assert_eq!(e.apply(f4.add(a, b)), f64_.add(e.apply(a), e.apply(b)));
            }
        }
    }

    #[test]
    fn f64_admits_f4_and_f8() {
        let f64_ = build_field(2, 6).unwrap();
        for n in [2, 3] {
            let sub = build_field(2, n).unwrap();
            let e = Embedding::new(&sub, &f64_).unwrap();
            let mut image: Vec<_> = sub.enumerate().map(|x| e.apply(x)).collect();
            image.sort();
            image.dedup();
            assert_eq!(image.len(), sub.size() as usize);
            // image is exactly the fixed field of x -> x^(2^n)
            for x in f64_.enumerate() {
                let fixed = f64_.abs_frobenius(x, n) == x;
                assert_eq!(fixed, image.binary_search(&x).is_ok());
            }
        }
    }

    #[test]
    fn sublevel_of_tower_embeds_as_identity() {
        let f4 = build_field(2, 2).unwrap();
        let f16 = FieldLevel::extension(&f4, 2).unwrap();
        let e = Embedding::new(&f4, &f16).unwrap();
        for x in f4.enumerate() {
            assert_eq!(e.apply(x), x);
        }
    }

    #[test]
    fn rejects_non_dividing_degrees() {
        let f4 = build_field(2, 2).unwrap();
        let f8 = build_field(2, 3).unwrap();
        assert!(matches!(Embedding::new(&f4, &f8), Err(Error::NotSubfield { .. })));
    }
}
