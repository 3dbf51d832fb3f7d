//! Dense univariate polynomials over a table-backed level.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::gf::{Elem, Embedding, FieldTower, Level};
use crate::poly::{dense, fmt_elem, MultiPoly};

#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: Level,
    coeffs: Vec<Elem>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly[{}^{}]({})", self.field.characteristic(), self.field.degree(), self)
    }
}

impl UniPoly {
    /// Coefficients lowest degree first; trailing zeros are dropped.
    pub fn new(field: &Level, coeffs: Vec<Elem>) -> Result<Self> {
        for c in &coeffs {
            field.elem(c.0)?;
        }
        Ok(Self::from_raw(field, coeffs))
    }

    pub(crate) fn from_raw(field: &Level, coeffs: Vec<Elem>) -> Self {
        Self {
            coeffs: dense::normalized(field.as_ref(), coeffs),
            field: field.clone(),
        }
    }

    pub fn zero(field: &Level) -> Self {
        Self::from_raw(field, Vec::new())
    }

    pub fn constant(field: &Level, c: Elem) -> Self {
        Self::from_raw(field, vec![c])
    }

    /// The polynomial `x`.
    pub fn x(field: &Level) -> Self {
        Self::from_raw(field, vec![Elem::ZERO, Elem::ONE])
    }

    /// `x^d`.
    pub fn monomial(field: &Level, c: Elem, d: usize) -> Self {
        let mut v = vec![Elem::ZERO; d + 1];
        v[d] = c;
        Self::from_raw(field, v)
    }

    pub fn field(&self) -> &Level {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        dense::degree(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<Elem> {
        self.coeffs.last().copied()
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::LevelMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self::from_raw(&self.field, dense::add(self.field.as_ref(), &self.coeffs, &other.coeffs)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self::from_raw(&self.field, dense::sub(self.field.as_ref(), &self.coeffs, &other.coeffs)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self::from_raw(&self.field, dense::mul(self.field.as_ref(), &self.coeffs, &other.coeffs)))
    }

    pub fn scale(&self, c: Elem) -> Self {
        Self::from_raw(&self.field, dense::scale(self.field.as_ref(), &self.coeffs, &c))
    }

    pub fn divrem(&self, other: &Self) -> Result<(Self, Self)> {
        self.same_field(other)?;
        if other.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (q, r) = dense::divrem(self.field.as_ref(), &self.coeffs, &other.coeffs);
        Ok((Self::from_raw(&self.field, q), Self::from_raw(&self.field, r)))
    }

    pub fn monic(&self) -> Self {
        Self::from_raw(&self.field, dense::monic(self.field.as_ref(), &self.coeffs))
    }

    pub fn eval(&self, x: Elem) -> Elem {
        dense::eval(self.field.as_ref(), &self.coeffs, &x)
    }

    /// Evaluation at a point of a larger field, embedding the coefficients.
    pub fn eval_embedded(&self, emb: &Embedding, x: Elem) -> Elem {
        let t = emb.target();
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| t.add(t.mul(acc, x), emb.apply(c)))
    }

    /// The same polynomial with coefficients mapped into a larger field.
    pub fn embed(&self, emb: &Embedding) -> Self {
        Self::from_raw(emb.target(), self.coeffs.iter().map(|&c| emb.apply(c)).collect())
    }

    /// `f^(sigma^j)`: every coefficient raised to the `q^j`-th power.
    pub fn frobenius_twist(&self, tower: &FieldTower, j: u32) -> Self {
        Self::from_raw(
            &self.field,
            self.coeffs.iter().map(|&c| tower.frobenius(c, j)).collect(),
        )
    }

    pub fn derivative(&self) -> Self {
        Self::from_raw(&self.field, dense::derivative(self.field.as_ref(), &self.coeffs))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        Ok(Self::from_raw(&self.field, dense::gcd(self.field.as_ref(), &self.coeffs, &other.coeffs)))
    }

    /// `gcd(f, f')` is constant. Errors when `f'` vanishes identically, since
    /// the criterion says nothing about `p`-th power patterns.
    pub fn is_square_free(&self) -> Result<bool> {
        match self.degree() {
            None => return Err(Error::ZeroPolynomial),
            Some(0) => {
                return Err(Error::InvalidParameter("square-free test needs degree >= 1".into()))
            }
            _ => {}
        }
        let d = self.derivative();
        if d.is_zero() {
            return Err(Error::DerivativeVanishes);
        }
        Ok(self.gcd(&d)?.degree() == Some(0))
    }

    /// All roots in `target` with multiplicity, in enumeration order.
    /// `emb` maps the coefficient field into `target`; `None` means the
    /// coefficient field itself.
    pub fn roots_in(&self, emb: Option<&Embedding>, budget: u64) -> Result<Vec<Elem>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = match emb {
            Some(e) => self.embed(e),
            None => self.clone(),
        };
        let k = f.field.clone();
        if k.size() as u64 > budget {
            return Err(Error::BudgetExceeded {
                what: "root scan",
                needed: k.size() as u128,
                budget,
            });
        }
        let mut out = Vec::new();
        for x in k.enumerate() {
            if !f.eval(x).is_zero() {
                continue;
            }
            let lin = [k.neg(x), Elem::ONE];
            let mut g = f.coeffs.clone();
            loop {
                let (q, r) = dense::divrem(k.as_ref(), &g, &lin);
                if !r.is_empty() {
                    break;
                }
                out.push(x);
                g = q;
            }
        }
        Ok(out)
    }

    /// `f(beta_1 x_1 + ... + beta_v x_v)` as a polynomial in `v` variables.
    pub fn compose_linear(&self, betas: &[Elem]) -> Result<MultiPoly> {
        if betas.is_empty() {
            return Err(Error::InvalidParameter("linear form needs at least one variable".into()));
        }
        let v = betas.len();
        let mut lin = MultiPoly::zero(&self.field, v);
        for (i, &b) in betas.iter().enumerate() {
            lin = lin.add(&MultiPoly::var(&self.field, v, i).scale(b))?;
        }
        let mut out = MultiPoly::zero(&self.field, v);
        let mut power = MultiPoly::constant(&self.field, v, Elem::ONE);
        for (k, &c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                power = power.mul(&lin)?;
            }
            if !c.is_zero() {
                out = out.add(&power.scale(c))?;
            }
        }
        Ok(out)
    }

    /// Retype coefficients into a sublevel (indices below its size).
    pub fn restrict(&self, sub: &Level) -> Result<Self> {
        if self.coeffs.iter().any(|c| c.0 >= sub.size()) {
            return Err(Error::LevelMismatch);
        }
        Ok(Self::from_raw(sub, self.coeffs.clone()))
    }

    /// Retype coefficients from a sublevel into a level containing it.
    pub fn widen(&self, sup: &Level) -> Result<Self> {
        if !sup.has_sublevel(&self.field) {
            return Err(Error::LevelMismatch);
        }
        Ok(Self::from_raw(sup, self.coeffs.clone()))
    }

    pub fn to_multi(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.field, 1);
        for (k, &c) in self.coeffs.iter().enumerate() {
            out.add_term(vec![k as u32], c);
        }
        out
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => fmt_elem(f, &self.field, c)?,
                _ => {
                    if c != Elem::ONE {
                        fmt_elem(f, &self.field, c)?;
                        f.write_str("*")?;
                    }
                    f.write_str("x")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
