//! Exact point counts by exhaustive enumeration, each with a second
//! independent path through the trace/norm identities.
//!
//! Counts are accumulated in `u64` over blocks of the leading coordinate and
//! combined by addition, so the result does not depend on how an
//! [`Executor`] schedules the blocks.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::descent::{as_descent, as_descent_multivar, kummer_descent};
use crate::error::{Error, Result};
use crate::gf::{Basis, CoprimeTower, Elem, FieldLevel, FieldTower};
use crate::poly::{MultiPoly, UniPoly};

/// Default cap on enumerated points per count.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

const BLOCKS: u64 = 256;

/// Runs a map over block indices `0..blocks` and folds the results with an
/// associative `combine`.
pub trait Executor: Sync {
    fn fold_blocks<T, I, M, R>(&self, blocks: u64, identity: I, map: M, combine: R) -> T
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        M: Fn(u64) -> T + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send;
}

/// In-order single-threaded execution.
#[derive(Clone, Copy, Debug, Default)]
pub struct Serial;

impl Executor for Serial {
    fn fold_blocks<T, I, M, R>(&self, blocks: u64, identity: I, map: M, combine: R) -> T
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        M: Fn(u64) -> T + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        (0..blocks).fold(identity(), |acc, b| combine(acc, map(b)))
    }
}

fn block_range(total: u64, blocks: u64, b: u64) -> core::ops::Range<u64> {
    let lo = total * b / blocks;
    let hi = total * (b + 1) / blocks;
    lo..hi
}

/// `sum_{i < total} f(i)`.
fn sum_over<E: Executor>(exec: &E, total: u64, f: impl Fn(u64) -> u64 + Sync + Send) -> u64 {
    let blocks = total.clamp(1, BLOCKS);
    exec.fold_blocks(
        blocks,
        || 0u64,
        |b| block_range(total, blocks, b).map(&f).sum(),
        |a, b| a + b,
    )
}

/// Histogram of `f(i)` for `i < total`, values below `width`.
fn histogram<E: Executor>(
    exec: &E,
    total: u64,
    width: usize,
    f: impl Fn(u64) -> usize + Sync + Send,
) -> Vec<u64> {
    let blocks = total.clamp(1, BLOCKS);
    exec.fold_blocks(
        blocks,
        || vec![0u64; width],
        |b| {
            let mut h = vec![0u64; width];
            for i in block_range(total, blocks, b) {
                h[f(i)] += 1;
            }
            h
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    )
}

/// `base^exp` if it fits the budget.
pub fn check_budget(what: &'static str, base: u64, exp: u64, budget: u64) -> Result<u64> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    if acc > budget as u128 {
        return Err(Error::BudgetExceeded {
            what,
            needed: acc,
            budget,
        });
    }
    Ok(acc as u64)
}

/// Base-`q` digits of `index`, lowest first; these are the coordinates of
/// the `index`-th point of `k^v` in enumeration order.
fn decode_point(index: u64, q: u64, out: &mut [Elem]) {
    let mut v = index;
    for c in out.iter_mut() {
        *c = Elem((v % q) as u32);
        v /= q;
    }
}

/// A multivariate polynomial flattened for repeated evaluation.
struct Compiled<'a> {
    field: &'a FieldLevel,
    terms: Vec<(Elem, Vec<(usize, u64)>)>,
}

impl<'a> Compiled<'a> {
    fn new(f: &'a MultiPoly) -> Self {
        let terms = f
            .terms()
            .map(|(e, &c)| {
                let vars = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| (i, x as u64))
                    .collect();
                (c, vars)
            })
            .collect();
        Self {
            field: f.field().as_ref(),
            terms,
        }
    }

    #[inline]
    fn eval(&self, point: &[Elem]) -> Elem {
        let k = self.field;
        let mut acc = Elem::ZERO;
        for (c, vars) in &self.terms {
            let mut t = *c;
            for &(i, e) in vars {
                t = k.mul(t, k.pow(point[i], e));
                if t.is_zero() {
                    break;
                }
            }
            acc = k.add(acc, t);
        }
        acc
    }
}

fn require_ext(f: &UniPoly, tower: &FieldTower) -> Result<()> {
    if f.field() != tower.ext() {
        return Err(Error::LevelMismatch);
    }
    Ok(())
}

/// `#{(x, y) in k_r^2 : y^q - y = f(x)}` by double enumeration.
pub fn count_as_direct<E: Executor>(f: &UniPoly, tower: &FieldTower, budget: u64, exec: &E) -> Result<BigUint> {
    require_ext(f, tower)?;
    let k = tower.ext();
    let size = k.size() as u64;
    check_budget("artin-schreier curve", size, 2, budget)?;
    let q = tower.q() as u64;
    let art: Vec<Elem> = k.enumerate().map(|y| k.sub(k.pow(y, q), y)).collect();
    let n = sum_over(exec, size, |x| {
        let fx = f.eval(Elem(x as u32));
        art.iter().filter(|&&v| v == fx).count() as u64
    });
    Ok(BigUint::from(n))
}

/// `q * #{x in k_r : Tr f(x) = 0}`.
pub fn count_as_trace<E: Executor>(f: &UniPoly, tower: &FieldTower, budget: u64, exec: &E) -> Result<BigUint> {
    require_ext(f, tower)?;
    let size = tower.ext().size() as u64;
    check_budget("trace fiber", size, 1, budget)?;
    let n = sum_over(exec, size, |x| tower.trace(f.eval(Elem(x as u32))).is_zero() as u64);
    Ok(BigUint::from(n) * tower.q())
}

/// `#{x in K^v : F(x) = lambda}` where `K` is the coefficient field of `F`.
pub fn count_hypersurface<E: Executor>(f: &MultiPoly, lambda: Elem, budget: u64, exec: &E) -> Result<BigUint> {
    let q = f.field().size() as u64;
    f.field().elem(lambda.0)?;
    let total = check_budget("hypersurface", q, f.nvars() as u64, budget)?;
    let c = Compiled::new(f);
    let v = f.nvars();
    let n = sum_over(exec, total, |i| {
        let mut pt = vec![Elem::ZERO; v];
        decode_point(i, q, &mut pt);
        (c.eval(&pt) == lambda) as u64
    });
    Ok(BigUint::from(n))
}

/// `#{x in K^v : F(x) = lambda}` for every `lambda`, indexed by `lambda`.
pub fn count_hypersurface_fibers<E: Executor>(f: &MultiPoly, budget: u64, exec: &E) -> Result<Vec<u64>> {
    let q = f.field().size() as u64;
    let total = check_budget("hypersurface", q, f.nvars() as u64, budget)?;
    let c = Compiled::new(f);
    let v = f.nvars();
    Ok(histogram(exec, total, q as usize, |i| {
        let mut pt = vec![Elem::ZERO; v];
        decode_point(i, q, &mut pt);
        c.eval(&pt).0 as usize
    }))
}

fn kummer_exponent(tower: &FieldTower, e: u64) -> Result<u64> {
    let q1 = tower.q() as u64 - 1;
    if e == 0 || !q1.is_multiple_of(e) {
        return Err(Error::NotDivisor { e, q_minus_one: q1 });
    }
    Ok(q1 / e)
}

/// `#{(x, y) in k_r^2 : y^((q-1)/e) = f(x)}` by double enumeration.
pub fn count_kummer_direct<E: Executor>(
    f: &UniPoly,
    tower: &FieldTower,
    e: u64,
    budget: u64,
    exec: &E,
) -> Result<BigUint> {
    require_ext(f, tower)?;
    let m = kummer_exponent(tower, e)?;
    let k = tower.ext();
    let size = k.size() as u64;
    check_budget("kummer curve", size, 2, budget)?;
    let pw: Vec<Elem> = k.enumerate().map(|y| k.pow(y, m)).collect();
    let n = sum_over(exec, size, |x| {
        let fx = f.eval(Elem(x as u32));
        pw.iter().filter(|&&v| v == fx).count() as u64
    });
    Ok(BigUint::from(n))
}

/// Result of the norm-path Kummer count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KummerCount {
    pub total: BigUint,
    /// Number of distinct roots of `f` in `k_r`.
    pub delta: u64,
    /// `#{x in k_r : N(f(x)) = lambda}` indexed by `lambda in k`; equal to
    /// `#{T = lambda}` over `k^r`.
    pub fibers: Vec<u64>,
    /// The `lambda != 0` with `lambda^e = 1`.
    pub mu_e: Vec<Elem>,
}

/// `delta + ((q-1)/e) * sum_{lambda^e = 1} #W_lambda(k)`, with each fiber
/// counted through `T` over `k^r` and through `N o f` over `k_r`.
pub fn count_kummer_norm<E: Executor>(
    f: &UniPoly,
    basis: &Basis,
    e: u64,
    budget: u64,
    exec: &E,
) -> Result<KummerCount> {
    let tower = basis.tower();
    require_ext(f, tower)?;
    let m = kummer_exponent(tower, e)?;
    let k = tower.ext();
    let q = tower.q() as usize;
    check_budget("norm fibers", k.size() as u64, 1, budget)?;
    let by_norm = histogram(exec, k.size() as u64, q, |x| tower.norm(f.eval(Elem(x as u32))).0 as usize);
    let t = kummer_descent(f, basis)?;
    let by_t = count_hypersurface_fibers(&t.result, budget, exec)?;
    if by_norm != by_t {
        return Err(Error::IdentityViolation {
            what: "norm fibers via T",
            left: format!("{by_t:?}"),
            right: format!("{by_norm:?}"),
        });
    }
    let base = tower.base();
    let mu_e: Vec<Elem> = base.enumerate().skip(1).filter(|&l| base.pow(l, e) == Elem::ONE).collect();
    let delta = by_norm[0];
    let sum: u64 = mu_e.iter().map(|l| by_norm[l.0 as usize]).sum();
    Ok(KummerCount {
        total: BigUint::from(delta) + BigUint::from(m) * BigUint::from(sum),
        delta,
        fibers: by_norm,
        mu_e,
    })
}

/// `(#{x in k_m^r : T(x) != 0}, q^(mr) - #{x in k_mr : f(x) = 0})` for the
/// `T` of `basis`, `gcd(m, r) = 1`.
pub fn count_nonvanishing_identity<E: Executor>(
    f: &UniPoly,
    basis: &Basis,
    m: u32,
    budget: u64,
    exec: &E,
) -> Result<(BigUint, BigUint)> {
    let tower = basis.tower();
    require_ext(f, tower)?;
    let ct = CoprimeTower::new(tower, m)?;
    let big = ct.kmr();
    check_budget("non-vanishing identity", big.size() as u64, 1, budget)?;
    let t = kummer_descent(f, basis)?.result.widen(ct.km())?;
    let zeros_t = count_hypersurface(&t, Elem::ZERO, budget, exec)?;
    let total = BigUint::from(big.size());
    let lhs = &total - zeros_t;
    let emb = ct.embed_kr();
    let roots = sum_over(exec, big.size() as u64, |x| f.eval_embedded(emb, Elem(x as u32)).is_zero() as u64);
    Ok((lhs, total - BigUint::from(roots)))
}

/// Evaluates `f` over `K^n` for the coefficient field `K`, summing `pred`.
fn sum_over_points<E: Executor>(
    f: &MultiPoly,
    budget: u64,
    exec: &E,
    pred: impl Fn(Elem) -> u64 + Sync + Send,
) -> Result<u64> {
    let q = f.field().size() as u64;
    let total = check_budget("affine points", q, f.nvars() as u64, budget)?;
    let c = Compiled::new(f);
    let v = f.nvars();
    Ok(sum_over(exec, total, |i| {
        let mut pt = vec![Elem::ZERO; v];
        decode_point(i, q, &mut pt);
        pred(c.eval(&pt))
    }))
}

/// Both paths for `y^q - y = f(x_1..x_n)`: `q * #{y in k_r^n : Tr f(y) = 0}`
/// and `q * #{x in k^(nr) : S(x) = 0}`.
pub fn count_as_multivar<E: Executor>(
    f: &MultiPoly,
    basis: &Basis,
    budget: u64,
    exec: &E,
) -> Result<(BigUint, BigUint)> {
    let tower = basis.tower();
    if f.field() != tower.ext() {
        return Err(Error::LevelMismatch);
    }
    let by_trace = sum_over_points(f, budget, exec, |v| tower.trace(v).is_zero() as u64)?;
    let s = as_descent_multivar(f, basis)?;
    let by_s = count_hypersurface(&s.result, Elem::ZERO, budget, exec)?;
    let q = tower.q();
    Ok((BigUint::from(by_trace) * q, by_s * q))
}

/// `#{(y, z) in k_r^n x k_r : z^q - z = f(y)}` by direct enumeration.
pub fn count_as_hyper_direct<E: Executor>(f: &MultiPoly, tower: &FieldTower, budget: u64, exec: &E) -> Result<BigUint> {
    if f.field() != tower.ext() {
        return Err(Error::LevelMismatch);
    }
    let k = tower.ext();
    check_budget("artin-schreier hypersurface", k.size() as u64, f.nvars() as u64 + 1, budget)?;
    let q = tower.q() as u64;
    let art: Vec<Elem> = k.enumerate().map(|z| k.sub(k.pow(z, q), z)).collect();
    let n = sum_over_points(f, budget, exec, |v| art.iter().filter(|&&a| a == v).count() as u64)?;
    Ok(BigUint::from(n))
}

/// `#{(y, z) in k_r^n x k_r : z^((q-1)/e) = f(y)}` by direct enumeration.
pub fn count_kummer_hyper_direct<E: Executor>(
    f: &MultiPoly,
    tower: &FieldTower,
    e: u64,
    budget: u64,
    exec: &E,
) -> Result<BigUint> {
    if f.field() != tower.ext() {
        return Err(Error::LevelMismatch);
    }
    let m = kummer_exponent(tower, e)?;
    let k = tower.ext();
    check_budget("kummer hypersurface", k.size() as u64, f.nvars() as u64 + 1, budget)?;
    let pw: Vec<Elem> = k.enumerate().map(|z| k.pow(z, m)).collect();
    let n = sum_over_points(f, budget, exec, |v| pw.iter().filter(|&&a| a == v).count() as u64)?;
    Ok(BigUint::from(n))
}

/// `q * #{x in k^r : S(x) = 0}` for the additive descent of `f`.
pub fn count_as_descent<E: Executor>(f: &UniPoly, basis: &Basis, budget: u64, exec: &E) -> Result<BigUint> {
    let s = as_descent(f, basis)?;
    Ok(count_hypersurface(&s.result, Elem::ZERO, budget, exec)? * basis.tower().q())
}

/// Number of distinct roots of `f` in its coefficient field.
pub fn count_roots(f: &UniPoly) -> u64 {
    f.field().enumerate().filter(|&x| f.eval(x).is_zero()).count() as u64
}

/// Asserts two exact counts agree.
pub fn reconcile(what: &'static str, a: &BigUint, b: &BigUint) -> Result<()> {
    if a != b {
        return Err(Error::IdentityViolation {
            what,
            left: a.to_string(),
            right: b.to_string(),
        });
    }
    Ok(())
}
