use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf::{build_field, Elem, Embedding, FieldLevel, Level};

/// `k = F_q` together with `k_r = F_{q^r}`, the latter a relative degree-`r`
/// extension of `k` (the same level when `r = 1`). Elements of `k` are the
/// indices `< q` of `k_r`.
#[derive(Clone, Debug)]
pub struct FieldTower {
    base: Level,
    ext: Level,
    r: u32,
}

impl FieldTower {
    pub fn new(base: &Level, r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter("extension degree must be at least 1".into()));
        }
        let ext = if r == 1 {
            base.clone()
        } else {
            FieldLevel::extension(base, r)?
        };
        Ok(Self {
            base: base.clone(),
            ext,
            r,
        })
    }

    /// `F_{p^n}` and its degree-`r` extension.
    pub fn build(p: u32, n: u32, r: u32) -> Result<Self> {
        Self::new(&build_field(p, n)?, r)
    }

    /// Wraps an existing extension level whose level below is `base`.
    pub fn from_levels(base: &Level, ext: &Level) -> Result<Self> {
        if ext.as_ref() == base.as_ref() {
            return Ok(Self {
                base: base.clone(),
                ext: ext.clone(),
                r: 1,
            });
        }
        match ext.base() {
            Some(b) if b.as_ref() == base.as_ref() => Ok(Self {
                base: base.clone(),
                ext: ext.clone(),
                r: ext.rel_degree(),
            }),
            _ => Err(Error::LevelMismatch),
        }
    }

    /// `k`.
    pub fn base(&self) -> &Level {
        &self.base
    }

    /// `k_r`.
    pub fn ext(&self) -> &Level {
        &self.ext
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `q = |k|`.
    pub fn q(&self) -> u32 {
        self.base.size()
    }

    pub fn p(&self) -> u32 {
        self.base.characteristic()
    }

    pub fn is_in_base(&self, x: Elem) -> bool {
        x.0 < self.q()
    }

    /// `x^(q^j)`, `j` reduced mod `r`.
    pub fn frobenius(&self, x: Elem, j: u32) -> Elem {
        let mut y = x;
        for _ in 0..(j % self.r) {
            y = self.ext.pow(y, self.q() as u64);
        }
        y
    }

    /// `Tr_{k_r/k}(x)`, an element of `k`.
    pub fn trace(&self, x: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        let mut y = x;
        for _ in 0..self.r {
            acc = self.ext.add(acc, y);
            y = self.ext.pow(y, self.q() as u64);
        }
        debug_assert!(self.is_in_base(acc));
        acc
    }

    /// `N_{k_r/k}(x)`, an element of `k`.
    pub fn norm(&self, x: Elem) -> Elem {
        let mut acc = Elem::ONE;
        let mut y = x;
        for _ in 0..self.r {
            acc = self.ext.mul(acc, y);
            y = self.ext.pow(y, self.q() as u64);
        }
        debug_assert!(self.is_in_base(acc));
        acc
    }

    /// Coordinates over `k` in the power basis `1, u, ..., u^(r-1)`.
    pub fn power_coords(&self, x: Elem) -> Vec<Elem> {
        if self.r == 1 {
            vec![x]
        } else {
            self.ext.coeffs(x)
        }
    }

    pub fn from_power_coords(&self, c: &[Elem]) -> Result<Elem> {
        if self.r == 1 {
            if c.len() != 1 {
                return Err(Error::ArityMismatch { expected: 1, got: c.len() });
            }
            return self.base.elem(c[0].0);
        }
        self.ext.from_coeffs(c)
    }
}

/// The levels needed when `gcd(m, r) = 1`: `k_m` as an extension of `k`, and
/// `k_{mr}` built flat over `F_p` with embeddings of `k_r` and `k_m`.
#[derive(Clone, Debug)]
pub struct CoprimeTower {
    tower: FieldTower,
    m: u32,
    km: Level,
    kmr: Level,
    embed_kr: Embedding,
    embed_km: Embedding,
}

impl CoprimeTower {
    pub fn new(tower: &FieldTower, m: u32) -> Result<Self> {
        let r = tower.r();
        if m == 0 || num_integer::gcd(m, r) != 1 {
            return Err(Error::NotCoprime { m, r });
        }
        let km = if m == 1 {
            tower.base().clone()
        } else {
            FieldLevel::extension(tower.base(), m)?
        };
        let kmr = build_field(tower.p(), tower.base().degree() * m * r)?;
        let embed_kr = Embedding::new(tower.ext(), &kmr)?;
        let embed_km = Embedding::new(&km, &kmr)?;
        Ok(Self {
            tower: tower.clone(),
            m,
            km,
            kmr,
            embed_kr,
            embed_km,
        })
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `k_m`; elements of `k` are its indices `< q`.
    pub fn km(&self) -> &Level {
        &self.km
    }

    pub fn kmr(&self) -> &Level {
        &self.kmr
    }

    pub fn embed_kr(&self) -> &Embedding {
        &self.embed_kr
    }

    pub fn embed_km(&self) -> &Embedding {
        &self.embed_km
    }
}
