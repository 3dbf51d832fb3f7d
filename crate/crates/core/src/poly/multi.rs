//! Sparse multivariate polynomials: exponent vector -> nonzero coefficient.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::gf::{Elem, Level};
use crate::poly::{fmt_elem, UniPoly};

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: Level,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Elem>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{} vars]({})", self.nvars, self)
    }
}

impl MultiPoly {
    pub fn zero(field: &Level, nvars: usize) -> Self {
        Self {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Level, nvars: usize, c: Elem) -> Self {
        let mut out = Self::zero(field, nvars);
        out.add_term(vec![0; nvars], c);
        out
    }

    /// The variable `x_{i+1}` (zero-based `i`).
    pub fn var(field: &Level, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut out = Self::zero(field, nvars);
        out.add_term(e, Elem::ONE);
        out
    }

    pub fn from_terms(field: &Level, nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Elem)>) -> Result<Self> {
        let mut out = Self::zero(field, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::ArityMismatch {
                    expected: nvars,
                    got: e.len(),
                });
            }
            field.elem(c.0)?;
            out.add_term(e, c);
        }
        Ok(out)
    }

    /// Adds `c * x^e` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, e: Vec<u32>, c: Elem) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let k = &self.field;
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = k.add(*v, c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn field(&self) -> &Level {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> Elem {
        self.terms.get(e).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::LevelMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), self.field.neg(c));
        }
        Ok(out)
    }

    pub fn scale(&self, c: Elem) -> Self {
        let mut out = Self::zero(&self.field, self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, &v) in &self.terms {
            out.terms.insert(e.clone(), self.field.mul(v, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = Self::zero(&self.field, self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    /// Exact value at a point with coordinates in the coefficient field.
    pub fn eval(&self, point: &[Elem]) -> Result<Elem> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[Elem]) -> Elem {
        let k = &self.field;
        let mut acc = Elem::ZERO;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (&x, &ei) in point.iter().zip(e) {
                if ei > 0 {
                    t = k.mul(t, k.pow(x, ei as u64));
                }
            }
            acc = k.add(acc, t);
        }
        acc
    }

    /// Formal partial derivative in zero-based variable `i`.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: i + 1,
            });
        }
        let mut out = Self::zero(&self.field, self.nvars);
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let coef = self.field.mul(self.field.from_int(e[i] as u64), c);
            let mut ne = e.clone();
            ne[i] -= 1;
            out.add_term(ne, coef);
        }
        Ok(out)
    }

    /// Sum of the terms of maximal total degree.
    pub fn top_form(&self) -> Result<Self> {
        let d = self.total_degree().ok_or(Error::ZeroPolynomial)?;
        let mut out = Self::zero(&self.field, self.nvars);
        for (e, &c) in &self.terms {
            if e.iter().sum::<u32>() == d {
                out.terms.insert(e.clone(), c);
            }
        }
        Ok(out)
    }

    /// Substitutes `x_i -> forms[i]` where each form is a linear
    /// combination (coefficient per new variable) of `m` new variables.
    pub fn substitute_linear(&self, forms: &[Vec<Elem>]) -> Result<Self> {
        if forms.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: forms.len(),
            });
        }
        let m = forms.first().map_or(0, |f| f.len());
        let lin: Vec<MultiPoly> = forms
            .iter()
            .map(|row| {
                let mut l = Self::zero(&self.field, m);
                for (j, &c) in row.iter().enumerate() {
                    let mut e = vec![0; m];
                    e[j] = 1;
                    l.add_term(e, c);
                }
                l
            })
            .collect();
        let mut powers: Vec<Vec<MultiPoly>> = lin
            .iter()
            .map(|l| vec![Self::constant(&self.field, m, Elem::ONE), l.clone()])
            .collect();
        let mut out = Self::zero(&self.field, m);
        for (e, &c) in &self.terms {
            let mut t = Self::constant(&self.field, m, c);
            for (i, &ei) in e.iter().enumerate() {
                while powers[i].len() <= ei as usize {
                    let next = powers[i].last().unwrap().mul(&lin[i])?;
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][ei as usize])?;
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// Re-indexes variables: variable `i` becomes `map[i]` among `nvars` new ones.
    pub fn remap_vars(&self, nvars: usize, map: &[usize]) -> Self {
        let mut out = Self::zero(&self.field, nvars);
        for (e, &c) in &self.terms {
            let mut ne = vec![0; nvars];
            for (i, &ei) in e.iter().enumerate() {
                ne[map[i]] += ei;
            }
            out.add_term(ne, c);
        }
        out
    }

    pub fn map_coeffs(&self, field: &Level, f: impl Fn(Elem) -> Elem) -> Self {
        let mut out = Self::zero(field, self.nvars);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Retype coefficients into a sublevel (indices below its size).
    pub fn restrict(&self, sub: &Level) -> Result<Self> {
        if self.terms.values().any(|c| c.0 >= sub.size()) {
            return Err(Error::LevelMismatch);
        }
        Ok(self.map_coeffs(sub, |c| c))
    }

    /// Retype coefficients from a sublevel into a level containing it.
    pub fn widen(&self, sup: &Level) -> Result<Self> {
        if !sup.has_sublevel(&self.field) {
            return Err(Error::LevelMismatch);
        }
        Ok(self.map_coeffs(sup, |c| c))
    }

    /// The univariate polynomial when `nvars == 1`.
    pub fn to_uni(&self) -> Result<UniPoly> {
        if self.nvars != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                got: self.nvars,
            });
        }
        let d = self.total_degree().map_or(0, |d| d as usize + 1);
        let mut c = vec![Elem::ZERO; d];
        for (e, &v) in &self.terms {
            c[e[0] as usize] = v;
        }
        UniPoly::new(&self.field, c)
    }

    /// Terms ordered by total degree, then exponent vector.
    pub fn graded_terms(&self) -> Vec<(&Vec<u32>, Elem)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, &c)| (e, c)).collect();
        v.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            da.cmp(&db).then_with(|| b.0.cmp(a.0))
        });
        v
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.graded_terms().into_iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let constant = e.iter().all(|&x| x == 0);
            if constant || c != Elem::ONE {
                fmt_elem(f, &self.field, c)?;
            }
            let mut first = constant || c != Elem::ONE;
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                if first {
                    f.write_str("*")?;
                }
                first = true;
                write!(f, "x{}", i + 1)?;
                if ei > 1 {
                    write!(f, "^{ei}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{build_field, FieldTower};
    use alloc::string::ToString;

    #[test]
    fn eval_examples() {
        let f3 = build_field(3, 1).unwrap();
        let s = MultiPoly::from_terms(&f3, 2, [(vec![2, 0], Elem(2)), (vec![0, 2], Elem(1))]).unwrap();
        assert_eq!(s.eval(&[Elem(1), Elem(1)]).unwrap(), Elem::ZERO);
        assert!(matches!(s.eval(&[Elem(1)]), Err(Error::ArityMismatch { .. })));
        let c = MultiPoly::constant(&f3, 2, Elem(2));
        assert_eq!(c.eval(&[Elem(0), Elem(1)]).unwrap(), Elem(2));
    }

    #[test]
    fn agrees_with_univariate() {
        let t = FieldTower::build(2, 2, 2).unwrap();
        let k = t.ext();
        let f = UniPoly::new(k, vec![Elem(3), Elem(7), Elem(0), Elem(11), Elem(1)]).unwrap();
        let m = f.to_multi();
        for x in k.enumerate() {
            assert_eq!(m.eval(&[x]).unwrap(), f.eval(x));
        }
        assert_eq!(m.to_uni().unwrap(), f);
    }

    #[test]
    fn top_form_examples() {
        let f5 = build_field(5, 1).unwrap();
        let f = MultiPoly::from_terms(&f5, 2, [(vec![1, 1], Elem(1)), (vec![0, 0], Elem(1))]).unwrap();
        let top = f.top_form().unwrap();
        assert_eq!(top.to_string(), "x1*x2");
        assert_eq!(top.top_form().unwrap(), top);
        let g = UniPoly::new(&f5, vec![Elem(1), Elem(1), Elem(0), Elem(1)]).unwrap().to_multi();
        assert_eq!(g.top_form().unwrap().to_string(), "x1^3");
        assert_eq!(MultiPoly::zero(&f5, 2).top_form().unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn partial_derivatives() {
        let f3 = build_field(3, 1).unwrap();
        // x1^3 x2 + 2 x1 x2^2
        let f = MultiPoly::from_terms(&f3, 2, [(vec![3, 1], Elem(1)), (vec![1, 2], Elem(2))]).unwrap();
        assert_eq!(f.partial(0).unwrap().to_string(), "2*x2^2");
        assert_eq!(f.partial(1).unwrap().to_string(), "x1*x2 + x1^3");
    }

    #[test]
    fn substitution_matches_evaluation() {
        let f5 = build_field(5, 1).unwrap();
        let f = MultiPoly::from_terms(
            &f5,
            2,
            [(vec![2, 1], Elem(3)), (vec![0, 1], Elem(1)), (vec![0, 0], Elem(4))],
        )
        .unwrap();
        let forms = vec![vec![Elem(1), Elem(2), Elem(0)], vec![Elem(0), Elem(3), Elem(4)]];
        let g = f.substitute_linear(&forms).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    let y = [Elem(a), Elem(b), Elem(c)];
                    let x0 = f5.add(Elem(a), f5.mul(Elem(2), Elem(b)));
                    let x1 = f5.add(f5.mul(Elem(3), Elem(b)), f5.mul(Elem(4), Elem(c)));
                    assert_eq!(g.eval(&y).unwrap(), f.eval(&[x0, x1]).unwrap());
                }
            }
        }
    }

    #[test]
    fn display_is_graded() {
        let f3 = build_field(3, 1).unwrap();
        let s = MultiPoly::from_terms(
            &f3,
            2,
            [(vec![2, 0], Elem(2)), (vec![0, 2], Elem(1)), (vec![0, 0], Elem(2))],
        )
        .unwrap();
        assert_eq!(s.to_string(), "2 + 2*x1^2 + x2^2");
    }
}
