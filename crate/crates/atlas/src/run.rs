//! Single instances, sweeps and the closed-form counterexample checks.

use std::collections::BTreeMap;
use std::time::Instant;

use descent_core::bounds;
use descent_core::certify::{self, Certificate};
use descent_core::counter::{self, Executor, Serial};
use descent_core::gf::{Basis, Elem, FieldTower};
use descent_core::poly::{MultiPoly, UniPoly};
use num_bigint::{BigInt, BigUint};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::config::{BasisChoice, ConfigError, ExperimentConfig, Mode};
use crate::exec::Parallel;
use crate::parse::{self, elem_text, field_spec, ParseError};
use crate::report::{BoundReport, CertReport, CountReport, FiberReport};

/// Rejection-sampling cap when hypotheses are required.
pub const MAX_TRIES: u32 = 1000;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("exact identity violated: {0}")]
    Violation(String),
    #[error("{0}")]
    Config(String),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Violation(_) => 1,
            RunError::Config(_) => 2,
        }
    }
}

impl From<descent_core::Error> for RunError {
    fn from(e: descent_core::Error) -> Self {
        match e {
            descent_core::Error::IdentityViolation { .. } | descent_core::Error::RationalityFailure => {
                RunError::Violation(e.to_string())
            }
            _ => RunError::Config(e.to_string()),
        }
    }
}

impl From<ParseError> for RunError {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Core(c) => c.into(),
            other => RunError::Config(other.to_string()),
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e.to_string())
    }
}

#[derive(Clone, Debug)]
pub enum Poly {
    Uni(UniPoly),
    Multi(MultiPoly),
}

impl Poly {
    fn uni(&self) -> Result<UniPoly, RunError> {
        match self {
            Poly::Uni(f) => Ok(f.clone()),
            Poly::Multi(m) => Ok(m.to_uni()?),
        }
    }

    fn multi(&self) -> MultiPoly {
        match self {
            Poly::Uni(f) => f.to_multi(),
            Poly::Multi(m) => m.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub tower: FieldTower,
    pub basis: Basis,
    pub f: Poly,
    pub e: Option<u64>,
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub budget: u64,
    pub max_ext: u32,
    pub timings: bool,
}

impl From<&ExperimentConfig> for RunOptions {
    fn from(c: &ExperimentConfig) -> Self {
        Self {
            budget: c.budget,
            max_ext: c.max_ext,
            timings: c.timings,
        }
    }
}

pub fn make_basis(tower: &FieldTower, choice: BasisChoice) -> Basis {
    match choice {
        BasisChoice::Power => Basis::power(tower),
        BasisChoice::Random(seed) => Basis::random(tower, &mut ChaCha8Rng::seed_from_u64(seed)),
    }
}

/// Builds the instance described by `field`, `ext`, `poly`, `e`, `basis`
/// and (for `as-hyper`) `nvars`.
pub fn instance_from_config(c: &ExperimentConfig, mode: Mode) -> Result<Instance, RunError> {
    let tower = parse::parse_tower(c.require_field()?, c.ext)?;
    let text = c.require_poly()?;
    let f = match mode {
        Mode::AsHyper => {
            let m = parse::parse_terms(&tower, text)?;
            let n = c.nvars.unwrap_or(m.nvars().max(1));
            Poly::Multi(parse::parse_multi(&tower, text, n)?)
        }
        _ => Poly::Uni(parse::parse_uni(&tower, text)?),
    };
    let basis = make_basis(&tower, c.basis);
    Ok(Instance {
        tower,
        basis,
        f,
        e: c.e,
    })
}

struct Timer {
    enabled: bool,
    ms: BTreeMap<String, f64>,
}

impl Timer {
    fn new(enabled: bool) -> Self {
        Self {
            enabled,
            ms: BTreeMap::new(),
        }
    }

    fn run<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.ms.insert(name.to_string(), start.elapsed().as_secs_f64() * 1e3);
        }
        out
    }

    fn finish(self) -> Option<BTreeMap<String, f64>> {
        self.enabled.then_some(self.ms)
    }
}

fn signed(v: &BigUint) -> BigInt {
    BigInt::from(v.clone())
}

fn power(q: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(q), e as usize)
}

fn all_pass(certs: &[Certificate]) -> bool {
    certs.iter().all(Certificate::passed)
}

fn verdict(hyp: bool, within: bool) -> String {
    match (hyp, within) {
        (false, _) => "exempt",
        (true, true) => "pass",
        (true, false) => "fail",
    }
    .to_string()
}

struct Header<'a> {
    inst: &'a Instance,
    mode: Mode,
    d: u32,
    n: Option<u32>,
    f: String,
}

impl Header<'_> {
    #[allow(clippy::too_many_arguments)]
    fn report(
        self,
        certs: &[Certificate],
        counts: BTreeMap<String, String>,
        n_direct: &BigUint,
        n_identity: &BigUint,
        identity_holds: bool,
        deviation: &BigInt,
        bounds: Vec<BoundReport>,
        theorem_verdict: String,
    ) -> CountReport {
        let t = &self.inst.tower;
        CountReport {
            mode: self.mode.as_str().to_string(),
            field: field_spec(t.base()),
            q: t.q() as u64,
            r: t.r(),
            d: self.d,
            e: if self.mode == Mode::Kummer { self.inst.e } else { None },
            n: self.n,
            f: self.f,
            basis: self.inst.basis.elems().iter().map(|&a| elem_text(t.ext(), a)).collect(),
            certificates: certs.iter().map(CertReport::from).collect(),
            hypotheses: all_pass(certs),
            counts,
            n_direct: n_direct.to_string(),
            n_identity: n_identity.to_string(),
            identity_holds,
            delta: None,
            fibers: Vec::new(),
            deviation: deviation.to_string(),
            bounds,
            theorem_verdict,
            timings_ms: None,
        }
    }
}

/// Certificates, both count paths, deviation and bound verdicts for one
/// instance. A disagreement between count paths is reported with
/// `identity_holds = false`; the core's internal cross-checks surface as
/// [`RunError::Violation`].
pub fn run_single<E: Executor>(inst: &Instance, mode: Mode, opts: &RunOptions, exec: &E) -> Result<CountReport, RunError> {
    match mode {
        Mode::AsCurve => run_as_curve(inst, opts, exec),
        Mode::AsHyper => run_as_hyper(inst, opts, exec),
        Mode::Kummer => run_kummer(inst, opts, exec),
    }
}

fn positive_degree(f: &UniPoly) -> Result<u32, RunError> {
    match f.degree() {
        Some(d) if d > 0 => Ok(d as u32),
        _ => Err(RunError::Config("polynomial must have positive degree".into())),
    }
}

fn run_as_curve<E: Executor>(inst: &Instance, opts: &RunOptions, exec: &E) -> Result<CountReport, RunError> {
    let t = &inst.tower;
    let f = inst.f.uni()?;
    let d = positive_degree(&f)?;
    let (q, r) = (t.q() as u64, t.r());
    let mut timer = Timer::new(opts.timings);
    let certs = timer.run("certify", || -> Result<_, RunError> {
        Ok(vec![
            certify::check_degree_prime_to_p(&f)?,
            certify::split_form_nonsingular(&f, t, opts.budget)?,
        ])
    })?;
    let direct = timer.run("direct", || counter::count_as_direct(&f, t, opts.budget, exec))?;
    let trace = timer.run("trace", || counter::count_as_trace(&f, t, opts.budget, exec))?;
    let descent = timer.run("descent", || counter::count_as_descent(&f, &inst.basis, opts.budget, exec))?;
    let identity = direct == trace && trace == descent;
    let dev = signed(&direct) - power(q, r);
    let (two, simple) = bounds::bound_as_curve(d as u64, q, r);
    let (_, weil) = bounds::genus_and_weil(d as u64, q, r, None).expect("no divisibility condition");
    let reports: Vec<BoundReport> = [&two, &simple, &weil].iter().map(|b| BoundReport::new(b, &dev)).collect();
    let hyp = all_pass(&certs);
    let v = verdict(hyp, reports[0].within && reports[1].within);
    let counts = BTreeMap::from([
        ("direct".to_string(), direct.to_string()),
        ("trace".to_string(), trace.to_string()),
        ("descent".to_string(), descent.to_string()),
    ]);
    let header = Header {
        inst,
        mode: Mode::AsCurve,
        d,
        n: None,
        f: f.to_string(),
    };
    let mut rep = header.report(&certs, counts, &direct, &descent, identity, &dev, reports, v);
    rep.timings_ms = timer.finish();
    Ok(rep)
}

fn run_as_hyper<E: Executor>(inst: &Instance, opts: &RunOptions, exec: &E) -> Result<CountReport, RunError> {
    let t = &inst.tower;
    let f = inst.f.multi();
    let d = match f.total_degree() {
        Some(d) if d > 0 => d,
        _ => return Err(RunError::Config("polynomial must have positive degree".into())),
    };
    let n = f.nvars() as u32;
    let (q, r) = (t.q() as u64, t.r());
    let mut timer = Timer::new(opts.timings);
    let certs = timer.run("certify", || -> Result<_, RunError> {
        Ok(vec![
            certify::is_deligne(&f, opts.max_ext, opts.budget)?,
            certify::split_form_nonsingular_multivar(&f, t, opts.max_ext, opts.budget)?,
        ])
    })?;
    let direct = timer.run("direct", || counter::count_as_hyper_direct(&f, t, opts.budget, exec))?;
    let (trace, descent) = timer.run("trace+descent", || counter::count_as_multivar(&f, &inst.basis, opts.budget, exec))?;
    let identity = direct == trace && trace == descent;
    let dev = signed(&direct) - power(q, n * r);
    let (two, simple) = bounds::bound_as_hypersurface(d as u64, n, q, r);
    let reports: Vec<BoundReport> = [&two, &simple].iter().map(|b| BoundReport::new(b, &dev)).collect();
    let hyp = all_pass(&certs);
    let v = verdict(hyp, reports.iter().all(|b| b.within));
    let counts = BTreeMap::from([
        ("direct".to_string(), direct.to_string()),
        ("trace".to_string(), trace.to_string()),
        ("descent".to_string(), descent.to_string()),
    ]);
    let header = Header {
        inst,
        mode: Mode::AsHyper,
        d,
        n: Some(n),
        f: f.to_string(),
    };
    let mut rep = header.report(&certs, counts, &direct, &descent, identity, &dev, reports, v);
    rep.timings_ms = timer.finish();
    Ok(rep)
}

fn run_kummer<E: Executor>(inst: &Instance, opts: &RunOptions, exec: &E) -> Result<CountReport, RunError> {
    let t = &inst.tower;
    let f = inst.f.uni()?;
    let d = positive_degree(&f)?;
    let e = inst.e.ok_or(RunError::Config("kummer mode needs e".into()))?;
    let (q, r) = (t.q() as u64, t.r());
    let mut timer = Timer::new(opts.timings);
    let certs = timer.run("certify", || certify::kummer_hypotheses(&f, e, q).map(|c| vec![c]))?;
    let direct = timer.run("direct", || counter::count_kummer_direct(&f, t, e, opts.budget, exec))?;
    let kc = timer.run("norm", || counter::count_kummer_norm(&f, &inst.basis, e, opts.budget, exec))?;
    let identity = direct == kc.total;
    let dev = signed(&direct) - power(q, r) - BigInt::from(kc.delta) + 1;
    let centre = (power(q, r) - 1) / BigInt::from(q - 1);
    let fibers: Vec<FiberReport> = kc
        .mu_e
        .iter()
        .map(|&l| FiberReport {
            lambda: elem_text(t.base(), l),
            count: kc.fibers[l.0 as usize],
        })
        .collect();
    let worst = fibers
        .iter()
        .map(|fr| BigInt::from(fr.count) - &centre)
        .max_by_key(|v: &BigInt| v.magnitude().clone())
        .unwrap_or_default();
    let kummer = bounds::bound_kummer(d as u64, q, r);
    let wl = bounds::bound_w_lambda(d as u64, q, r);
    let mut reports = vec![BoundReport::new(&kummer, &dev), BoundReport::new(&wl, &worst)];
    if let Some((_, weil)) = bounds::genus_and_weil(d as u64, q, r, Some(e)) {
        reports.push(BoundReport::new(&weil, &dev));
    }
    let hyp = all_pass(&certs);
    let v = verdict(hyp, reports[0].within && reports[1].within);
    let counts = BTreeMap::from([
        ("direct".to_string(), direct.to_string()),
        ("norm".to_string(), kc.total.to_string()),
    ]);
    let header = Header {
        inst,
        mode: Mode::Kummer,
        d,
        n: None,
        f: f.to_string(),
    };
    let mut rep = header.report(&certs, counts, &direct, &kc.total, identity, &dev, reports, v);
    rep.delta = Some(kc.delta);
    rep.fibers = fibers;
    rep.timings_ms = timer.finish();
    Ok(rep)
}

// ---------------------------------------------------------------------------
// sweeps

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for one sample of one grid cell.
pub fn cell_seed(parts: &[u64]) -> u64 {
    parts.iter().fold(0, |h, &p| splitmix(h ^ p))
}

fn random_elem(k: &descent_core::gf::FieldLevel, rng: &mut ChaCha8Rng) -> Elem {
    Elem((rng.next_u64() % k.size() as u64) as u32)
}

/// Uniform coefficients over `k_r` with a nonzero leading coefficient.
pub fn random_uni(tower: &FieldTower, d: u32, rng: &mut ChaCha8Rng) -> UniPoly {
    let k = tower.ext();
    let mut c: Vec<Elem> = (0..d).map(|_| random_elem(k, rng)).collect();
    c.push(Elem(1 + (rng.next_u64() % (k.size() as u64 - 1)) as u32));
    UniPoly::new(k, c).expect("coefficients lie in k_r")
}

/// Uniform coefficients on every monomial of total degree `<= d` in `n`
/// variables, resampled until the total degree is exactly `d`.
pub fn random_multi(tower: &FieldTower, n: usize, d: u32, rng: &mut ChaCha8Rng) -> MultiPoly {
    let k = tower.ext();
    let mut monos: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..n {
        monos = monos
            .into_iter()
            .flat_map(|m| {
                let used: u32 = m.iter().sum();
                (0..=d - used).map(move |e| {
                    let mut v = m.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    loop {
        let terms = monos.iter().map(|m| (m.clone(), random_elem(k, rng)));
        let f = MultiPoly::from_terms(k, n, terms).expect("arity matches");
        if f.total_degree() == Some(d) {
            return f;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellSummary {
    pub mode: String,
    pub field: String,
    pub q: u64,
    pub r: u32,
    pub d: u32,
    pub e: Option<u64>,
    pub instances: u32,
    pub identity_failures: u32,
    pub hypotheses_pass: u32,
    pub theorem_pass: u32,
    pub theorem_fail: u32,
    pub exempt: u32,
    pub sampling_exhausted: u32,
    /// Largest `|measured| / bound` over hypothesis-passing instances.
    pub max_ratio: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Skipped {
    pub field: String,
    pub r: u32,
    pub d: u32,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub samples: u32,
    pub cells: Vec<CellSummary>,
    pub skipped: Vec<Skipped>,
    pub errors: Vec<String>,
    pub instances: Vec<CountReport>,
}

impl SweepReport {
    pub fn violation(&self) -> bool {
        !self.errors.is_empty() || self.cells.iter().any(|c| c.identity_failures > 0 || c.theorem_fail > 0)
    }
}

struct Cell {
    field: String,
    tower: FieldTower,
    d: u32,
}

fn summarize(mode: Mode, cell: &Cell, e: Option<u64>, reports: &[&CountReport], exhausted: u32) -> CellSummary {
    let t = &cell.tower;
    let mut max_ratio: BTreeMap<String, f64> = BTreeMap::new();
    for rep in reports.iter().filter(|r| r.hypotheses) {
        for b in &rep.bounds {
            let bound: f64 = b.decimal.parse().unwrap_or(0.0);
            let m: f64 = b.measured.parse::<f64>().unwrap_or(0.0).abs();
            if bound > 0.0 {
                let v = max_ratio.entry(b.name.clone()).or_insert(0.0);
                *v = v.max(m / bound);
            }
        }
    }
    let count = |pred: &dyn Fn(&CountReport) -> bool| reports.iter().filter(|r| pred(r)).count() as u32;
    CellSummary {
        mode: mode.as_str().to_string(),
        field: cell.field.clone(),
        q: t.q() as u64,
        r: t.r(),
        d: cell.d,
        e,
        instances: reports.len() as u32,
        identity_failures: count(&|r| !r.identity_holds),
        hypotheses_pass: count(&|r| r.hypotheses),
        theorem_pass: count(&|r| r.theorem_verdict == "pass"),
        theorem_fail: count(&|r| r.theorem_verdict == "fail"),
        exempt: count(&|r| r.theorem_verdict == "exempt"),
        sampling_exhausted: exhausted,
        max_ratio: max_ratio.into_iter().map(|(k, v)| (k, format!("{v:.6}"))).collect(),
    }
}

fn hypotheses_hold(inst: &Instance, mode: Mode, opts: &RunOptions) -> Result<bool, RunError> {
    let t = &inst.tower;
    Ok(match mode {
        Mode::AsCurve => {
            let f = inst.f.uni()?;
            certify::check_degree_prime_to_p(&f)?.passed() && certify::split_form_nonsingular(&f, t, opts.budget)?.passed()
        }
        Mode::AsHyper => {
            let f = inst.f.multi();
            certify::is_deligne(&f, opts.max_ext, opts.budget)?.passed()
                && certify::split_form_nonsingular_multivar(&f, t, opts.max_ext, opts.budget)?.passed()
        }
        Mode::Kummer => certify::kummer_hypotheses(&inst.f.uni()?, inst.e.unwrap_or(1), t.q() as u64)?.passed(),
    })
}

/// Draws the instance for one sample; with `require` set, redraws from the
/// same stream until the hypotheses hold, giving up after [`MAX_TRIES`].
fn sample_instance(
    c: &ExperimentConfig,
    cell: &Cell,
    mode: Mode,
    e: Option<u64>,
    rng: &mut ChaCha8Rng,
    opts: &RunOptions,
) -> Result<(Instance, bool), RunError> {
    let t = &cell.tower;
    let basis = match c.basis {
        BasisChoice::Power => Basis::power(t),
        BasisChoice::Random(s) => Basis::random(t, &mut ChaCha8Rng::seed_from_u64(cell_seed(&[s, rng.next_u64()]))),
    };
    let n = c.nvars.unwrap_or(2);
    let mut tries = 0;
    loop {
        let f = match mode {
            Mode::AsHyper => Poly::Multi(random_multi(t, n, cell.d, rng)),
            _ => Poly::Uni(random_uni(t, cell.d, rng)),
        };
        let inst = Instance {
            tower: t.clone(),
            basis: basis.clone(),
            f,
            e,
        };
        tries += 1;
        if !c.require_hypotheses || hypotheses_hold(&inst, mode, opts)? {
            return Ok((inst, false));
        }
        if tries >= MAX_TRIES {
            return Ok((inst, true));
        }
    }
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|e| n.is_multiple_of(*e)).collect()
}

fn points_needed(mode: Mode, q: u64, r: u32, n: usize) -> u128 {
    let exp = match mode {
        Mode::AsHyper => (n as u32 + 1) * r,
        _ => 2 * r,
    };
    (q as u128).saturating_pow(exp)
}

type CellOutput = (Vec<CellSummary>, Vec<CountReport>, Vec<String>);

fn run_cell(c: &ExperimentConfig, cell: &Cell, opts: &RunOptions) -> CellOutput {
    let t = &cell.tower;
    let q = t.q() as u64;
    let mut summaries = Vec::new();
    let mut all = Vec::new();
    let mut errors = Vec::new();
    for &mode in &c.modes {
        let es: Vec<Option<u64>> = match mode {
            Mode::Kummer => c
                .es
                .clone()
                .unwrap_or_else(|| divisors(q - 1))
                .into_iter()
                .filter(|e| *e > 0 && (q - 1).is_multiple_of(*e))
                .map(Some)
                .collect(),
            _ => vec![None],
        };
        for e in es {
            let mut reports = Vec::new();
            let mut exhausted = 0;
            for s in 0..c.samples {
                let seed = cell_seed(&[c.seed, q, t.r() as u64, cell.d as u64, s as u64]);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let result = sample_instance(c, cell, mode, e, &mut rng, opts)
                    .and_then(|(inst, ex)| Ok((run_single(&inst, mode, opts, &Serial)?, ex)));
                match result {
                    Ok((rep, ex)) => {
                        exhausted += ex as u32;
                        reports.push(rep);
                    }
                    Err(err) => errors.push(format!(
                        "{} q={} r={} d={} e={:?} sample={}: {}",
                        mode.as_str(),
                        q,
                        t.r(),
                        cell.d,
                        e,
                        s,
                        err
                    )),
                }
            }
            let refs: Vec<&CountReport> = reports.iter().collect();
            summaries.push(summarize(mode, cell, e, &refs, exhausted));
            all.extend(reports);
        }
    }
    (summaries, all, errors)
}

/// Runs the grid `fields x exts x degrees` in grid order on `pool`.
pub fn run_sweep(c: &ExperimentConfig, pool: &Parallel) -> Result<SweepReport, RunError> {
    let opts = RunOptions::from(c);
    let mut cells = Vec::new();
    let mut skipped = Vec::new();
    let n = c.nvars.unwrap_or(2);
    for spec in &c.fields {
        let base = parse::parse_field(spec)?;
        for &r in &c.exts {
            let tower = FieldTower::new(&base, r)?;
            let q = tower.q() as u64;
            for &d in &c.degrees {
                let skip = |reason: String| Skipped {
                    field: field_spec(&base),
                    r,
                    d,
                    reason,
                };
                if d == 0 {
                    skipped.push(skip("degree must be positive".into()));
                } else if d % tower.p() == 0 {
                    skipped.push(skip(format!("p = {} divides d", tower.p())));
                } else if let Some(m) = c.modes.iter().find(|&&m| points_needed(m, q, r, n) > c.budget as u128) {
                    skipped.push(skip(format!("{} needs {} points, budget {}", m.as_str(), points_needed(*m, q, r, n), c.budget)));
                } else {
                    cells.push(Cell {
                        field: field_spec(&base),
                        tower: tower.clone(),
                        d,
                    });
                }
            }
        }
    }
    let outputs: Vec<CellOutput> = pool.install(|| cells.par_iter().map(|cell| run_cell(c, cell, &opts)).collect());
    let mut rep = SweepReport {
        seed: c.seed,
        samples: c.samples,
        cells: Vec::new(),
        skipped,
        errors: Vec::new(),
        instances: Vec::new(),
    };
    for (s, i, e) in outputs {
        rep.cells.extend(s);
        rep.instances.extend(i);
        rep.errors.extend(e);
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// closed forms

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleRow {
    /// `a`: `y^(q-1) = x^d`; `b`: `y^(q-1) = x1*x2 + 1`.
    pub family: String,
    pub field: String,
    pub q: u64,
    pub r: u32,
    pub d: Option<u32>,
    pub brute_force: String,
    pub stated_formula: String,
    pub stated_matches: bool,
    /// `1 + mu_d (q^r - 1)`, family `a` only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrected_formula: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrected_matches: Option<bool>,
    /// `1 + #{x in k_r : N(x^d) = 1}` compared with the stated formula.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiber_count: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiber_matches_stated: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub rows: Vec<CounterexampleRow>,
    pub skipped: Vec<String>,
}

impl CounterexampleReport {
    /// Identities that must hold: the corrected and fiber forms for family
    /// `a`, the stated formula for family `b`.
    pub fn violation(&self) -> bool {
        self.rows.iter().any(|r| {
            r.corrected_matches == Some(false)
                || r.fiber_matches_stated == Some(false)
                || (r.family == "b" && !r.stated_matches)
        })
    }
}

fn geometric(q: u64, r: u32) -> BigUint {
    (0..r).map(|j| num_traits::pow(BigUint::from(q), j as usize)).sum()
}

/// Family `a` over `q x r x d` and family `b` over odd `q x r`.
pub fn run_counterexamples<E: Executor>(
    qs: &[String],
    rs: &[u32],
    ds: &[u32],
    budget: u64,
    exec: &E,
) -> Result<CounterexampleReport, RunError> {
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for spec in qs {
        let base = parse::parse_field(spec)?;
        for &r in rs {
            let t = FieldTower::new(&base, r)?;
            let q = t.q() as u64;
            let k = t.ext();
            let qr = num_traits::pow(BigUint::from(q), r as usize);
            for &d in ds {
                if (q as u128).pow(2 * r) > budget as u128 {
                    skipped.push(format!("a: q={q} r={r} d={d} exceeds budget"));
                    continue;
                }
                let f = UniPoly::monomial(k, Elem::ONE, d as usize);
                let brute = counter::count_kummer_direct(&f, &t, 1, budget, exec)?;
                let mu = num_integer_gcd(d as u64, q - 1);
                let stated = BigUint::from(1u32) + BigUint::from(mu) * geometric(q, r);
                let corrected = BigUint::from(1u32) + BigUint::from(mu) * (&qr - 1u32);
                let kc = counter::count_kummer_norm(&f, &Basis::power(&t), 1, budget, exec)?;
                let fiber = BigUint::from(1 + kc.fibers[1]);
                rows.push(CounterexampleRow {
                    family: "a".into(),
                    field: field_spec(&base),
                    q,
                    r,
                    d: Some(d),
                    brute_force: brute.to_string(),
                    stated_formula: stated.to_string(),
                    stated_matches: brute == stated,
                    corrected_formula: Some(corrected.to_string()),
                    corrected_matches: Some(brute == corrected && kc.total == brute),
                    fiber_count: Some(fiber.to_string()),
                    fiber_matches_stated: Some(fiber == stated),
                });
            }
            if q.is_multiple_of(2) {
                skipped.push(format!("b: q={q} is even"));
                continue;
            }
            if (q as u128).pow(3 * r) > budget as u128 {
                skipped.push(format!("b: q={q} r={r} exceeds budget"));
                continue;
            }
            let f = MultiPoly::from_terms(k, 2, [(vec![1, 1], Elem::ONE), (vec![0, 0], Elem::ONE)])?;
            let brute = counter::count_kummer_hyper_direct(&f, &t, 1, budget, exec)?;
            let stated = &qr * &qr + BigUint::from(q - 2) * &qr;
            rows.push(CounterexampleRow {
                family: "b".into(),
                field: field_spec(&base),
                q,
                r,
                d: None,
                brute_force: brute.to_string(),
                stated_formula: stated.to_string(),
                stated_matches: brute == stated,
                corrected_formula: None,
                corrected_matches: None,
                fiber_count: None,
                fiber_matches_stated: None,
            });
        }
    }
    Ok(CounterexampleReport { rows, skipped })
}

fn num_integer_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_integer_gcd(b, a % b)
    }
}
