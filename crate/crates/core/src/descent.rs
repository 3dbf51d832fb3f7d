//! Weil descent of `f` over `k_r` to polynomials over `k`: the additive form
//! `S = sum_j f^(sigma^j)(sum_i sigma^j(alpha_i) x_i)`, its multivariate
//! analogue in `n*r` variables, and the multiplicative form
//! `T = prod_j f^(sigma^j)(...)`.
//!
//! In `n*r` variables, `x_{l,i}` (coordinate `i` of the `l`-th point) sits at
//! index `l*r + i`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::counter::{count_hypersurface_fibers, Executor};
use crate::error::{Error, Result};
use crate::gf::{invert_matrix, Basis, Elem, FieldTower};
use crate::poly::{MultiPoly, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DescentKind {
    AdditiveS,
    MultiplicativeT,
    AdditiveSMultivar,
}

impl DescentKind {
    pub fn name(self) -> &'static str {
        match self {
            DescentKind::AdditiveS => "additive-S",
            DescentKind::MultiplicativeT => "multiplicative-T",
            DescentKind::AdditiveSMultivar => "additive-S-multivar",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Source {
    Uni(UniPoly),
    Multi(MultiPoly),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Uni(p) => p.fmt(f),
            Source::Multi(p) => p.fmt(f),
        }
    }
}

/// A descended polynomial over `k` with the data it was built from.
#[derive(Clone, Debug)]
pub struct DescentForm {
    pub kind: DescentKind,
    pub result: MultiPoly,
    pub source: Source,
    pub basis: Basis,
    pub r: u32,
    pub n: usize,
    /// `a[j-1][i] = sigma^j(alpha_i)` for `j = 1..=r`: the split-form
    /// variable `y_j` equals `sum_i a[j-1][i] x_i`.
    pub change_of_variables: Vec<Vec<Elem>>,
}

impl DescentForm {
    pub fn tower(&self) -> &FieldTower {
        self.basis.tower()
    }

    pub fn nvars(&self) -> usize {
        self.result.nvars()
    }

    /// `S` (or `T`) rewritten in the split-form variables: substitutes
    /// `x = A^{-1} y` blockwise over `k_r`.
    pub fn in_split_variables(&self) -> Result<MultiPoly> {
        let tower = self.tower();
        let ext = tower.ext();
        let r = self.r as usize;
        let inv = invert_matrix(ext.as_ref(), &self.change_of_variables).ok_or(Error::SingularBasis)?;
        let nv = self.n * r;
        let mut forms = vec![vec![Elem::ZERO; nv]; nv];
        for l in 0..self.n {
            for i in 0..r {
                for j in 0..r {
                    forms[l * r + i][l * r + j] = inv[i][j];
                }
            }
        }
        self.result.widen(ext)?.substitute_linear(&forms)
    }

    /// Provenance lines followed by the polynomial.
    pub fn to_text(&self) -> String {
        let t = self.tower();
        let basis: Vec<String> = self
            .basis
            .elems()
            .iter()
            .map(|&a| crate::poly::elem_to_string(t.ext(), a))
            .collect();
        format!(
            "# kind: {}\n# field: {}^{}\n# ext: {}\n# n: {}\n# f: {}\n# basis: {}\n{}\n",
            self.kind.name(),
            t.p(),
            t.base().degree(),
            self.r,
            self.n,
            self.source,
            basis.join(" ; "),
            self.result
        )
    }
}

fn twisted_bases(basis: &Basis) -> Vec<Vec<Elem>> {
    let t = basis.tower();
    (1..=t.r())
        .map(|j| basis.elems().iter().map(|&a| t.frobenius(a, j)).collect())
        .collect()
}

/// Checks every coefficient is fixed by Frobenius and retypes into `k`.
pub fn assert_rational(poly: &MultiPoly, tower: &FieldTower) -> Result<MultiPoly> {
    for (_, &c) in poly.terms() {
        if tower.frobenius(c, 1) != c || !tower.is_in_base(c) {
            return Err(Error::RationalityFailure);
        }
    }
    poly.restrict(tower.base())
}

fn check_source(f: &UniPoly, basis: &Basis) -> Result<()> {
    if f.field() != basis.tower().ext() {
        return Err(Error::LevelMismatch);
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(())
}

/// `S in k[x_1..x_r]` with `S(coords(x)) = Tr(f(x))`.
pub fn as_descent(f: &UniPoly, basis: &Basis) -> Result<DescentForm> {
    check_source(f, basis)?;
    let tower = basis.tower();
    let r = tower.r() as usize;
    let a = twisted_bases(basis);
    let mut acc = MultiPoly::zero(tower.ext(), r);
    for (j, row) in a.iter().enumerate() {
        let g = f.frobenius_twist(tower, j as u32 + 1).compose_linear(row)?;
        acc = acc.add(&g)?;
    }
    Ok(DescentForm {
        kind: DescentKind::AdditiveS,
        result: assert_rational(&acc, tower)?,
        source: Source::Uni(f.clone()),
        basis: basis.clone(),
        r: tower.r(),
        n: 1,
        change_of_variables: a,
    })
}

/// `T in k[x_1..x_r]` with `T(coords(x)) = N(f(x))`.
pub fn kummer_descent(f: &UniPoly, basis: &Basis) -> Result<DescentForm> {
    check_source(f, basis)?;
    let tower = basis.tower();
    let r = tower.r() as usize;
    let a = twisted_bases(basis);
    let mut acc = MultiPoly::constant(tower.ext(), r, Elem::ONE);
    for (j, row) in a.iter().enumerate() {
        let g = f.frobenius_twist(tower, j as u32 + 1).compose_linear(row)?;
        acc = acc.mul(&g)?;
    }
    Ok(DescentForm {
        kind: DescentKind::MultiplicativeT,
        result: assert_rational(&acc, tower)?,
        source: Source::Uni(f.clone()),
        basis: basis.clone(),
        r: tower.r(),
        n: 1,
        change_of_variables: a,
    })
}

/// `S` in `n*r` variables with `S(coords(y_1), ..., coords(y_n)) = Tr(f(y))`.
pub fn as_descent_multivar(f: &MultiPoly, basis: &Basis) -> Result<DescentForm> {
    let tower = basis.tower();
    if f.field() != tower.ext() {
        return Err(Error::LevelMismatch);
    }
    let n = f.nvars();
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one variable".into()));
    }
    let r = tower.r() as usize;
    let a = twisted_bases(basis);
    let mut acc = MultiPoly::zero(tower.ext(), n * r);
    for (j, row) in a.iter().enumerate() {
        let twisted = f.map_coeffs(tower.ext(), |c| tower.frobenius(c, j as u32 + 1));
        let mut forms = vec![vec![Elem::ZERO; n * r]; n];
        for (l, form) in forms.iter_mut().enumerate() {
            for (i, &b) in row.iter().enumerate() {
                form[l * r + i] = b;
            }
        }
        acc = acc.add(&twisted.substitute_linear(&forms)?)?;
    }
    Ok(DescentForm {
        kind: DescentKind::AdditiveSMultivar,
        result: assert_rational(&acc, tower)?,
        source: Source::Multi(f.clone()),
        basis: basis.clone(),
        r: tower.r(),
        n,
        change_of_variables: a,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitKind {
    Additive,
    Multiplicative,
}

/// `sum_j f^(sigma^j)(x_j)` or `prod_j f^(sigma^j)(x_j)` over `k_r`, with
/// `j = 1..=r` carried by variable `j - 1`.
pub fn split_form(f: &UniPoly, tower: &FieldTower, kind: SplitKind) -> Result<MultiPoly> {
    if f.field() != tower.ext() {
        return Err(Error::LevelMismatch);
    }
    let r = tower.r() as usize;
    let mut acc = match kind {
        SplitKind::Additive => MultiPoly::zero(tower.ext(), r),
        SplitKind::Multiplicative => MultiPoly::constant(tower.ext(), r, Elem::ONE),
    };
    for j in 1..=r {
        let g = f.frobenius_twist(tower, j as u32).to_multi().remap_vars(r, &[j - 1]);
        acc = match kind {
            SplitKind::Additive => acc.add(&g)?,
            SplitKind::Multiplicative => acc.mul(&g)?,
        };
    }
    Ok(acc)
}

/// `sum_j f^(sigma^j)(y_{1,j}, ..., y_{n,j})` in `n*r` variables, `y_{l,j}`
/// at index `l*r + j - 1`.
pub fn split_form_multivar(f: &MultiPoly, tower: &FieldTower) -> Result<MultiPoly> {
    if f.field() != tower.ext() {
        return Err(Error::LevelMismatch);
    }
    let n = f.nvars();
    let r = tower.r() as usize;
    let mut acc = MultiPoly::zero(tower.ext(), n * r);
    for j in 1..=r {
        let twisted = f.map_coeffs(tower.ext(), |c| tower.frobenius(c, j as u32));
        let map: Vec<usize> = (0..n).map(|l| l * r + j - 1).collect();
        acc = acc.add(&twisted.remap_vars(n * r, &map))?;
    }
    Ok(acc)
}

/// Whether `#{S = 0}` and every fiber `#{T = lambda}` over `k^r` agree
/// across the given bases.
pub fn descent_count_invariance_check<E: Executor>(
    f: &UniPoly,
    bases: &[Basis],
    budget: u64,
    exec: &E,
) -> Result<bool> {
    let mut reference: Option<(u64, Vec<u64>)> = None;
    for b in bases {
        let s = as_descent(f, b)?;
        let t = kummer_descent(f, b)?;
        let s_zero = count_hypersurface_fibers(&s.result, budget, exec)?[0];
        let t_fibers = count_hypersurface_fibers(&t.result, budget, exec)?;
        match &reference {
            None => reference = Some((s_zero, t_fibers)),
            Some((z, fib)) => {
                if *z != s_zero || *fib != t_fibers {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
