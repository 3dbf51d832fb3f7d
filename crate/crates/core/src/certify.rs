//! Decision procedures for the hypotheses of the bounds: degree prime to
//! `p`, square-freeness, non-singularity of the additive split form, and the
//! Deligne condition on the top homogeneous form.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::FieldArith;
use crate::counter::check_budget;
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldLevel, FieldTower, Level, WorkField, MAX_TABLE_FIELD};
use crate::poly::{dense, elem_to_string, MultiPoly, UniPoly};

/// Fixed seed for the randomized root splitting; results do not depend on
/// it, only the running time does.
const SPLIT_SEED: u64 = 0x5eed_0fc0_ffee;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inapplicable,
    /// A bounded search ended without a decision.
    Undecided,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inapplicable => "inapplicable",
            Verdict::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A point whose coordinates live in an extension of `field`, each given
    /// as a coefficient vector over `field`.
    Point { field: Level, coords: Vec<Vec<Elem>> },
    /// Critical values (in an extension of `field`) whose twisted sum is 0.
    CriticalValues { field: Level, values: Vec<Vec<Elem>> },
    RepeatedFactor(UniPoly),
    Degree { d: u64, p: u32 },
    NotDivisor { e: u64, q_minus_one: u64 },
}

fn fmt_vec(f: &mut fmt::Formatter<'_>, field: &FieldLevel, v: &[Elem]) -> fmt::Result {
    if v.len() == 1 {
        return f.write_str(&elem_to_string(field, v[0]));
    }
    f.write_str("[")?;
    for (i, c) in v.iter().enumerate() {
        if i > 0 {
            f.write_str("; ")?;
        }
        f.write_str(&elem_to_string(field, *c))?;
    }
    f.write_str("]")
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Point { field, coords } | Witness::CriticalValues { field, values: coords } => {
                if matches!(self, Witness::CriticalValues { .. }) {
                    f.write_str("critical values ")?;
                }
                f.write_str("(")?;
                for (i, c) in coords.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    fmt_vec(f, field, c)?;
                }
                f.write_str(")")
            }
            Witness::RepeatedFactor(g) => write!(f, "repeated factor {g}"),
            Witness::Degree { d, p } => write!(f, "degree {d} divisible by p = {p}"),
            Witness::NotDivisor { e, q_minus_one } => write!(f, "e = {e} does not divide q - 1 = {q_minus_one}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub check: &'static str,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Degree over the coefficient field of the extension the decision used.
    pub work_degree: u32,
    pub bounded_search: bool,
    pub note: Option<String>,
}

impl Certificate {
    fn new(check: &'static str, verdict: Verdict) -> Self {
        Self {
            check,
            verdict,
            witness: None,
            work_degree: 1,
            bounded_search: false,
            note: None,
        }
    }

    fn witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.note = Some(s.into());
        self
    }

    fn verdict(mut self, v: Verdict) -> Self {
        self.verdict = v;
        self
    }

    fn work(mut self, t: u32) -> Self {
        self.work_degree = t;
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

pub fn degree_prime_to_p(d: u64, p: u32) -> Certificate {
    let c = Certificate::new("degree-prime-to-p", Verdict::Pass);
    if d.is_multiple_of(p as u64) {
        c.witness(Witness::Degree { d, p }).verdict(Verdict::Fail)
    } else {
        c
    }
}

pub fn check_degree_prime_to_p(f: &UniPoly) -> Result<Certificate> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    Ok(degree_prime_to_p(d as u64, f.field().characteristic()))
}

fn lcm_all(v: &[usize]) -> u32 {
    v.iter().fold(1usize, |a, &b| num_integer::lcm(a, b)) as u32
}

/// Distinct roots of `h` (over `base`) in the smallest extension where it
/// splits, sorted.
fn split_roots(base: &Level, h: &[Elem]) -> Result<(WorkField, Vec<Vec<Elem>>)> {
    let t = lcm_all(&dense::irreducible_factor_degrees(base.as_ref(), h));
    let k = WorkField::new(base, t)?;
    let hk = k.lift_poly(h);
    let x = [k.zero(), k.one()];
    let xq = dense::frobenius_x(&k, 1, &hk);
    let g = dense::gcd(&k, &hk, &dense::sub(&k, &xq, &x));
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut roots = dense::split_linear(&k, &g, &mut rng);
    roots.sort();
    Ok((k, roots))
}

/// First tuple (lexicographic) with `sum_j sigma^j(values[i_j]) = 0`,
/// `j = 1..=r`, `sigma = x -> x^q`.
fn zero_tuple(
    k: &WorkField,
    tower: &FieldTower,
    values: &[Vec<Elem>],
    budget: u64,
) -> Result<Option<Vec<usize>>> {
    let r = tower.r() as usize;
    let c = values.len();
    if c == 0 {
        return Ok(None);
    }
    check_budget("critical tuples", c as u64, r as u64, budget)?;
    let q = num_bigint::BigUint::from(tower.q());
    let mut sig: Vec<Vec<Vec<Elem>>> = Vec::with_capacity(r);
    let mut cur: Vec<Vec<Elem>> = values.to_vec();
    for _ in 0..r {
        cur = cur.iter().map(|v| k.pow(v, &q)).collect();
        sig.push(cur.clone());
    }
    let mut idx = vec![0usize; r];
    loop {
        let mut s = k.zero();
        for (j, &i) in idx.iter().enumerate() {
            s = k.add(&s, &sig[j][i]);
        }
        if k.is_zero(&s) {
            return Ok(Some(idx));
        }
        let mut pos = r;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < c {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Non-singularity of `f^sigma(x_1) + ... + f^(sigma^r)(x_r) = 0`, decided by
/// locating all critical tuples in the splitting field of `f'`.
pub fn split_form_nonsingular(f: &UniPoly, tower: &FieldTower, budget: u64) -> Result<Certificate> {
    const CHECK: &str = "split-form-nonsingular";
    if f.field() != tower.ext() {
        return Err(Error::LevelMismatch);
    }
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(Error::InvalidParameter("split form of a constant".into()));
    }
    let p = tower.p();
    if (d as u64).is_multiple_of(p as u64) {
        return Ok(Certificate::new(CHECK, Verdict::Inapplicable)
            .witness(Witness::Degree { d: d as u64, p })
            .work(0));
    }
    if d == 1 {
        return Ok(Certificate::new(CHECK, Verdict::Pass).note("no critical points"));
    }
    let ext = tower.ext();
    let h = f.derivative();
    let (k, roots) = split_roots(ext, h.coeffs())?;
    let fk = k.lift_poly(f.coeffs());
    let values: Vec<Vec<Elem>> = roots.iter().map(|r| dense::eval(&k, &fk, r)).collect();
    let t = k.degree() as u32;
    match zero_tuple(&k, tower, &values, budget)? {
        None => Ok(Certificate::new(CHECK, Verdict::Pass).work(t)),
        Some(idx) => {
            let q = num_bigint::BigUint::from(tower.q());
            let point: Vec<Vec<Elem>> = idx
                .iter()
                .enumerate()
                .map(|(j, &i)| {
                    let mut y = roots[i].clone();
                    for _ in 0..=j {
                        y = k.pow(&y, &q);
                    }
                    y
                })
                .collect();
            verify_split_singular(f, tower, &k, &point)?;
            Ok(Certificate::new(CHECK, Verdict::Fail)
                .witness(Witness::Point {
                    field: ext.clone(),
                    coords: point,
                })
                .work(t))
        }
    }
}

/// The split form and all its partials vanish at `point`.
fn verify_split_singular(f: &UniPoly, tower: &FieldTower, k: &WorkField, point: &[Vec<Elem>]) -> Result<()> {
    let mut total = k.zero();
    for (j, y) in point.iter().enumerate() {
        let g = f.frobenius_twist(tower, j as u32 + 1);
        total = k.add(&total, &dense::eval(k, &k.lift_poly(g.coeffs()), y));
        let dg = dense::eval(k, &k.lift_poly(g.derivative().coeffs()), y);
        if !k.is_zero(&dg) {
            return Err(Error::IdentityViolation {
                what: "singular witness partial",
                left: format!("{dg:?}"),
                right: "0".into(),
            });
        }
    }
    if !k.is_zero(&total) {
        return Err(Error::IdentityViolation {
            what: "singular witness value",
            left: format!("{total:?}"),
            right: "0".into(),
        });
    }
    Ok(())
}

/// Table-backed extension of `base` of degree `t` (the base itself for 1).
fn table_extension(base: &Level, t: u32) -> Result<Level> {
    if t == 1 {
        Ok(base.clone())
    } else {
        FieldLevel::extension(base, t)
    }
}

/// Smallest `s | t` with every coordinate fixed by `x -> x^(Q^s)`.
fn point_degree(kt: &FieldLevel, q_sub: u64, t: u32, pt: &[Elem]) -> u32 {
    for s in 1..=t {
        if !t.is_multiple_of(s) {
            continue;
        }
        let e = num_traits::pow(q_sub, s as usize);
        if pt.iter().all(|&x| kt.pow(x, e) == x) {
            return s;
        }
    }
    t
}

enum CriticalSearch {
    Points(Vec<Vec<Elem>>),
    NotIsolated,
}

/// All common zeros in `kt^n` of the partials (coefficients widened from a
/// sublevel of `kt`).
fn critical_points(partials: &[MultiPoly], kt: &Level, budget: u64) -> Result<CriticalSearch> {
    let n = partials.len();
    let ps: Vec<MultiPoly> = partials.iter().map(|p| p.widen(kt)).collect::<Result<_>>()?;
    let size = kt.size() as u64;
    let mut out = Vec::new();
    if n == 2 {
        check_budget("critical point search", size, 1, budget)?;
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
        for a in kt.enumerate() {
            let unis: Vec<Vec<Elem>> = ps
                .iter()
                .map(|p| {
                    let mut c = vec![Elem::ZERO; p.total_degree().unwrap_or(0) as usize + 1];
                    for (e, &v) in p.terms() {
                        c[e[1] as usize] = kt.add(c[e[1] as usize], kt.mul(v, kt.pow(a, e[0] as u64)));
                    }
                    dense::normalized(kt.as_ref(), c)
                })
                .collect();
            if unis.iter().all(|u| u.is_empty()) {
                return Ok(CriticalSearch::NotIsolated);
            }
            let h = dense::gcd(kt.as_ref(), &unis[0], &unis[1]);
            if h.len() <= 1 {
                continue;
            }
            let xq = dense::frobenius_x(kt.as_ref(), 1, &h);
            let g = dense::gcd(kt.as_ref(), &h, &dense::sub(kt.as_ref(), &xq, &[Elem::ZERO, Elem::ONE]));
            let mut roots = dense::split_linear(kt.as_ref(), &g, &mut rng);
            roots.sort();
            out.extend(roots.into_iter().map(|b| vec![a, b]));
        }
    } else {
        let total = check_budget("critical point search", size, n as u64, budget)?;
        let mut pt = vec![Elem::ZERO; n];
        for i in 0..total {
            let mut v = i;
            for c in pt.iter_mut() {
                *c = Elem((v % size) as u32);
                v /= size;
            }
            if ps.iter().all(|p| p.eval(&pt).map(|x| x.is_zero()).unwrap_or(false)) {
                out.push(pt.clone());
            }
        }
    }
    Ok(CriticalSearch::Points(out))
}

/// `prod (X - c)` over the Frobenius orbit of `v` under `x -> x^Q`, retyped
/// into the sublevel of size `Q`.
fn orbit_minpoly(kt: &FieldLevel, q_sub: u32, v: Elem) -> Result<Vec<Elem>> {
    let mut conj = vec![v];
    loop {
        let next = kt.pow(*conj.last().unwrap(), q_sub as u64);
        if next == v {
            break;
        }
        conj.push(next);
    }
    let mut poly = vec![Elem::ONE];
    for c in conj {
        poly = dense::mul(kt, &poly, &[kt.neg(c), Elem::ONE]);
    }
    if poly.iter().any(|c| c.0 >= q_sub) {
        return Err(Error::RationalityFailure);
    }
    Ok(poly)
}

/// Non-singularity of `sum_j f^(sigma^j)(y_{.,j})` in `n*r` variables.
///
/// Critical points of `f` are searched in extensions of `k_r` of degree
/// `1..=max_ext`; the search is complete once `(d-1)^n` distinct points are
/// found, the most a polynomial with isolated critical points and smooth
/// top form can have. Otherwise the verdict is `Undecided`.
pub fn split_form_nonsingular_multivar(
    f: &MultiPoly,
    tower: &FieldTower,
    max_ext: u32,
    budget: u64,
) -> Result<Certificate> {
    const CHECK: &str = "split-form-nonsingular-multivar";
    let ext = tower.ext();
    if f.field() != ext {
        return Err(Error::LevelMismatch);
    }
    let n = f.nvars();
    if n == 1 {
        let mut c = split_form_nonsingular(&f.to_uni()?, tower, budget)?;
        c.check = CHECK;
        return Ok(c);
    }
    let d = f.total_degree().ok_or(Error::ZeroPolynomial)? as u64;
    let p = tower.p();
    if d == 0 {
        return Err(Error::InvalidParameter("split form of a constant".into()));
    }
    if d.is_multiple_of(p as u64) {
        return Ok(Certificate::new(CHECK, Verdict::Inapplicable)
            .witness(Witness::Degree { d, p })
            .work(0));
    }
    if d == 1 {
        return Ok(Certificate::new(CHECK, Verdict::Pass).note("no critical points"));
    }
    let expected = num_traits::pow(d - 1, n);
    let partials: Vec<MultiPoly> = (0..n).map(|i| f.partial(i)).collect::<Result<_>>()?;
    let q_sub = ext.size();
    let mut found: u64 = 0;
    let mut minpolys: BTreeSet<Vec<Elem>> = BTreeSet::new();
    let mut searched = 0u32;
    for t in 1..=max_ext {
        if checked_pow(q_sub as u64, t).is_none_or(|s| s > MAX_TABLE_FIELD as u64 || s > budget) {
            break;
        }
        let kt = table_extension(ext, t)?;
        let pts = match critical_points(&partials, &kt, budget)? {
            CriticalSearch::NotIsolated => {
                return Ok(Certificate::new(CHECK, Verdict::Undecided)
                    .note("critical locus is not finite")
                    .work(t));
            }
            CriticalSearch::Points(p) => p,
        };
        let fk = f.widen(&kt)?;
        for pt in pts {
            if point_degree(&kt, q_sub as u64, t, &pt) != t {
                continue;
            }
            found += 1;
            minpolys.insert(orbit_minpoly(&kt, q_sub, fk.eval(&pt)?)?);
        }
        searched = t;
        if found >= expected {
            break;
        }
    }
    if found != expected {
        let mut c = Certificate::new(CHECK, Verdict::Undecided)
            .note(format!("found {found} of {expected} critical points in extensions of degree <= {searched}"))
            .work(searched);
        c.bounded_search = true;
        return Ok(c);
    }
    let mut values_poly = vec![Elem::ONE];
    for m in &minpolys {
        values_poly = dense::mul(ext.as_ref(), &values_poly, m);
    }
    let (k, values) = split_roots(ext, &values_poly)?;
    let t = k.degree() as u32;
    match zero_tuple(&k, tower, &values, budget)? {
        None => Ok(Certificate::new(CHECK, Verdict::Pass).work(t)),
        Some(idx) => {
            let vals: Vec<Vec<Elem>> = idx.iter().map(|&i| values[i].clone()).collect();
            Ok(Certificate::new(CHECK, Verdict::Fail)
                .witness(Witness::CriticalValues {
                    field: ext.clone(),
                    values: vals,
                })
                .work(t))
        }
    }
}

fn checked_pow(base: u64, e: u32) -> Option<u64> {
    base.checked_pow(e)
}

/// Square-freeness of a univariate polynomial of any degree, reporting the
/// repeated part; `p`-th power patterns count as repeated.
fn square_free_witness(g: &UniPoly) -> Option<UniPoly> {
    match g.degree() {
        None | Some(0) => None,
        _ => {
            let dg = g.derivative();
            if dg.is_zero() {
                return Some(g.monic());
            }
            let c = g.gcd(&dg).ok()?;
            (c.degree() != Some(0)).then_some(c)
        }
    }
}

/// Degree prime to `p` and a smooth projective top form. For `n = 1` only
/// the degree is checked; for `n >= 3` the smoothness check is a search over
/// extensions of degree `1..=max_ext` and the certificate says so.
pub fn is_deligne(f: &MultiPoly, max_ext: u32, budget: u64) -> Result<Certificate> {
    const CHECK: &str = "deligne";
    let d = f.total_degree().ok_or(Error::ZeroPolynomial)? as u64;
    let field = f.field();
    let p = field.characteristic();
    if d.is_multiple_of(p as u64) {
        return Ok(Certificate::new(CHECK, Verdict::Fail).witness(Witness::Degree { d, p }));
    }
    let n = f.nvars();
    if n == 1 {
        return Ok(Certificate::new(CHECK, Verdict::Pass).note("one variable: degree condition only"));
    }
    let top = f.top_form()?;
    if n == 2 {
        for chart in 0..2 {
            let mut c = vec![Elem::ZERO; d as usize + 1];
            for (e, &v) in top.terms() {
                c[e[chart] as usize] = v;
            }
            let g = UniPoly::new(field, c)?;
            if let Some(w) = square_free_witness(&g) {
                return Ok(Certificate::new(CHECK, Verdict::Fail).witness(Witness::RepeatedFactor(w)));
            }
        }
        return Ok(Certificate::new(CHECK, Verdict::Pass));
    }
    let partials: Vec<MultiPoly> = (0..n).map(|i| top.partial(i)).collect::<Result<_>>()?;
    let mut searched = 0u32;
    for t in 1..=max_ext {
        let size = match checked_pow(field.size() as u64, t) {
            Some(s) if s <= MAX_TABLE_FIELD as u64 => s,
            _ => break,
        };
        let proj = (0..n as u32).try_fold(0u64, |acc, i| acc.checked_add(size.checked_pow(i)?));
        if proj.is_none_or(|v| v > budget) {
            break;
        }
        let kt = table_extension(field, t)?;
        let forms: Vec<MultiPoly> = core::iter::once(&top)
            .chain(partials.iter())
            .map(|g| g.widen(&kt))
            .collect::<Result<_>>()?;
        if let Some(pt) = projective_common_zero(&forms, &kt, n) {
            let coords = pt
                .iter()
                .map(|&x| if t == 1 { vec![x] } else { kt.coeffs(x) })
                .collect();
            return Ok(Certificate::new(CHECK, Verdict::Fail)
                .witness(Witness::Point {
                    field: field.clone(),
                    coords,
                })
                .work(t));
        }
        searched = t;
    }
    if searched == 0 {
        return Err(Error::BudgetExceeded {
            what: "projective singular point search",
            needed: (field.size() as u128).pow(n as u32 - 1),
            budget,
        });
    }
    let mut c = Certificate::new(CHECK, Verdict::Pass)
        .note(format!("no singular point over extensions of degree <= {searched}"))
        .work(searched);
    c.bounded_search = true;
    Ok(c)
}

/// A point of `P^(n-1)(kt)`, normalized with first nonzero coordinate 1,
/// where every form vanishes.
fn projective_common_zero(forms: &[MultiPoly], kt: &FieldLevel, n: usize) -> Option<Vec<Elem>> {
    let size = kt.size() as u64;
    for lead in 0..n {
        let free = n - lead - 1;
        let count = size.pow(free as u32);
        let mut pt = vec![Elem::ZERO; n];
        pt[lead] = Elem::ONE;
        for i in 0..count {
            let mut v = i;
            for c in pt.iter_mut().skip(lead + 1) {
                *c = Elem((v % size) as u32);
                v /= size;
            }
            if forms.iter().all(|g| g.eval(&pt).map(|x| x.is_zero()).unwrap_or(false)) {
                return Some(pt);
            }
        }
    }
    None
}

/// `f` square-free, `gcd(d, p) = 1`, and `e | q - 1`.
pub fn kummer_hypotheses(f: &UniPoly, e: u64, q: u64) -> Result<Certificate> {
    const CHECK: &str = "kummer-hypotheses";
    let d = f.degree().ok_or(Error::ZeroPolynomial)? as u64;
    let p = f.field().characteristic();
    let sf = square_free_witness(f);
    let deg_ok = !d.is_multiple_of(p as u64);
    let div_ok = e != 0 && (q - 1).is_multiple_of(e);
    let note = format!(
        "square-free: {}, degree prime to p: {}, e | q - 1: {}",
        sf.is_none(),
        deg_ok,
        div_ok
    );
    let c = Certificate::new(CHECK, Verdict::Pass).note(note);
    Ok(if let Some(w) = sf {
        c.verdict(Verdict::Fail).witness(Witness::RepeatedFactor(w))
    } else if !deg_ok {
        c.verdict(Verdict::Fail).witness(Witness::Degree { d, p })
    } else if !div_ok {
        c.verdict(Verdict::Fail).witness(Witness::NotDivisor { e, q_minus_one: q - 1 })
    } else {
        c
    })
}

/// First `lambda in k_r` (enumeration order) for which the split form of
/// `f - lambda` is non-singular.
pub fn find_nonsingular_shift(
    f: &UniPoly,
    tower: &FieldTower,
    budget: u64,
) -> Result<Option<(Elem, Certificate)>> {
    for lambda in tower.ext().enumerate() {
        let g = f.sub(&UniPoly::constant(tower.ext(), lambda))?;
        let c = split_form_nonsingular(&g, tower, budget)?;
        match c.verdict {
            Verdict::Pass => return Ok(Some((lambda, c))),
            Verdict::Inapplicable => return Ok(None),
            _ => {}
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counter::DEFAULT_BUDGET as B;
    use crate::descent::{split_form, SplitKind};
    use crate::gf::build_field;
    use alloc::string::ToString;
    use rand_core::RngCore;

    fn f9() -> FieldTower {
        FieldTower::build(3, 1, 2).unwrap()
    }

    fn poly(t: &FieldTower, c: &[u32]) -> UniPoly {
        UniPoly::new(t.ext(), c.iter().map(|&x| Elem(x)).collect()).unwrap()
    }

    #[test]
    fn degree_prime_to_p_examples() {
        assert!(degree_prime_to_p(3, 2).passed());
        assert_eq!(degree_prime_to_p(2, 2).verdict, Verdict::Fail);
        assert_eq!(degree_prime_to_p(9, 3).verdict, Verdict::Fail);
    }

    #[test]
    fn split_form_examples() {
        let t = f9();
        let c = split_form_nonsingular(&poly(&t, &[0, 0, 1]), &t, B).unwrap();
        assert_eq!(c.verdict, Verdict::Fail);
        assert_eq!(c.witness.as_ref().unwrap().to_string(), "(0, 0)");
        assert!(split_form_nonsingular(&poly(&t, &[1, 0, 1]), &t, B).unwrap().passed());
        let t4 = FieldTower::build(2, 1, 2).unwrap();
        let f = UniPoly::new(t4.ext(), vec![t4.ext().generator(), Elem(0), Elem(0), Elem(1)]).unwrap();
        assert!(split_form_nonsingular(&f, &t4, B).unwrap().passed());
        let cube = poly(&t, &[1, 0, 0, 1]);
        assert_eq!(split_form_nonsingular(&cube, &t, B).unwrap().verdict, Verdict::Inapplicable);
    }

    /// Exhaustive singular-point search of the split form over a table field.
    fn brute_singular(f: &UniPoly, t: &FieldTower, kt: &Level) -> bool {
        let g = split_form(f, t, SplitKind::Additive).unwrap().widen(kt).unwrap();
        let r = t.r() as usize;
        let parts: Vec<MultiPoly> = (0..r).map(|i| g.partial(i).unwrap()).collect();
        let size = kt.size() as u64;
        let mut pt = vec![Elem::ZERO; r];
        for i in 0..size.pow(r as u32) {
            let mut v = i;
            for c in pt.iter_mut() {
                *c = Elem((v % size) as u32);
                v /= size;
            }
            if g.eval(&pt).unwrap().is_zero() && parts.iter().all(|p| p.eval(&pt).unwrap().is_zero()) {
                return true;
            }
        }
        false
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (p, n, r, d) in [(2, 1, 2, 3), (3, 1, 2, 2), (5, 1, 2, 3), (2, 2, 2, 3), (2, 1, 3, 3), (7, 1, 2, 2)] {
            let t = FieldTower::build(p, n, r).unwrap();
            let k = t.ext();
            for _ in 0..12 {
                let mut c: Vec<Elem> = (0..d).map(|_| Elem(rng.next_u32() % k.size())).collect();
                c.push(Elem::ONE);
                let f = UniPoly::new(k, c).unwrap();
                let cert = split_form_nonsingular(&f, &t, B).unwrap();
                let kt = table_extension(k, cert.work_degree).unwrap();
                assert_eq!(!cert.passed(), brute_singular(&f, &t, &kt), "{f}");
            }
        }
    }

    #[test]
    fn large_work_field() {
        // f' of degree 4 over F_9 with an irreducible quartic factor
        let t = f9();
        let f = poly(&t, &[0, 1, 0, 0, 0, 1]);
        let c = split_form_nonsingular(&f, &t, B).unwrap();
        assert!(c.work_degree >= 1);
        assert!(matches!(c.verdict, Verdict::Pass | Verdict::Fail));
    }

    #[test]
    fn deligne_examples() {
        let f5 = build_field(5, 1).unwrap();
        let f = MultiPoly::from_terms(&f5, 2, [(vec![1, 1], Elem(1)), (vec![0, 0], Elem(1))]).unwrap();
        assert!(is_deligne(&f, 4, B).unwrap().passed());
        let f3 = build_field(3, 1).unwrap();
        let sq = MultiPoly::from_terms(
            &f3,
            2,
            [(vec![2, 0], Elem(1)), (vec![1, 1], Elem(2)), (vec![0, 2], Elem(1)), (vec![1, 0], Elem(1))],
        )
        .unwrap();
        let c = is_deligne(&sq, 4, B).unwrap();
        assert_eq!(c.verdict, Verdict::Fail);
        assert!(matches!(c.witness, Some(Witness::RepeatedFactor(_))));
        let circle = MultiPoly::from_terms(&f3, 2, [(vec![2, 0], Elem(1)), (vec![0, 2], Elem(1))]).unwrap();
        assert!(is_deligne(&circle, 4, B).unwrap().passed());
        let uni = UniPoly::new(&f3, vec![Elem(1), Elem(0), Elem(1)]).unwrap().to_multi();
        assert!(is_deligne(&uni, 4, B).unwrap().passed());
    }

    #[test]
    fn deligne_three_variables() {
        let f5 = build_field(5, 1).unwrap();
        // Fermat cubic is smooth for p != 3
        let fermat = MultiPoly::from_terms(
            &f5,
            3,
            [(vec![3, 0, 0], Elem(1)), (vec![0, 3, 0], Elem(1)), (vec![0, 0, 3], Elem(1))],
        )
        .unwrap();
        let c = is_deligne(&fermat, 2, B).unwrap();
        assert!(c.passed());
        assert!(c.bounded_search);
        // x1^2 x2 + x3^3 is singular at (0:1:0)
        let cusp = MultiPoly::from_terms(&f5, 3, [(vec![2, 1, 0], Elem(1)), (vec![0, 0, 3], Elem(1))]).unwrap();
        let c = is_deligne(&cusp, 1, B).unwrap();
        assert_eq!(c.verdict, Verdict::Fail);
        assert_eq!(c.witness.unwrap().to_string(), "(0, 1, 0)");
    }

    #[test]
    fn kummer_hypotheses_examples() {
        let f3 = build_field(3, 1).unwrap();
        let f = UniPoly::new(&f3, vec![Elem(1), Elem(0), Elem(1)]).unwrap();
        assert!(kummer_hypotheses(&f, 2, 3).unwrap().passed());
        for d in 2..5 {
            let f7 = build_field(7, 1).unwrap();
            let c = kummer_hypotheses(&UniPoly::monomial(&f7, Elem::ONE, d), 1, 7).unwrap();
            assert_eq!(c.verdict, Verdict::Fail);
            assert_eq!(c.witness.unwrap().to_string(), alloc::format!("repeated factor {}", UniPoly::monomial(&f7, Elem::ONE, d - 1)));
        }
        let c = kummer_hypotheses(&f, 3, 3).unwrap();
        assert!(matches!(c.witness, Some(Witness::NotDivisor { .. })));
    }

    #[test]
    fn multivar_split_form() {
        let t = FieldTower::build(3, 1, 2).unwrap();
        let k = t.ext();
        // x1 x2 + 1: single critical point (0,0) with value 1, sum 1 + 1 = 2
        let f = MultiPoly::from_terms(k, 2, [(vec![1, 1], Elem(1)), (vec![0, 0], Elem(1))]).unwrap();
        let c = split_form_nonsingular_multivar(&f, &t, 4, B).unwrap();
        assert!(c.passed(), "{c:?}");
        // x1 x2: critical value 0, singular
        let g = MultiPoly::from_terms(k, 2, [(vec![1, 1], Elem(1))]).unwrap();
        assert_eq!(split_form_nonsingular_multivar(&g, &t, 4, B).unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn shift_helper_finds_nonsingular_translate() {
        let t = f9();
        let (lambda, c) = find_nonsingular_shift(&poly(&t, &[0, 0, 1]), &t, B).unwrap().unwrap();
        assert!(c.passed());
        assert!(!t.trace(lambda).is_zero());
    }
}
