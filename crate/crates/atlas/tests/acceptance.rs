//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line;
//! `cargo test -p descent-atlas --test acceptance -- --nocapture` shows them.
//! Every comparison is exact: counts are integers and bounds are compared
//! after squaring.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use descent_atlas::config::{BasisChoice, ExperimentConfig, Mode};
use descent_atlas::exec::Parallel;
use descent_atlas::parse;
use descent_atlas::report::{to_csv, to_json, CountReport};
use descent_atlas::run::{self, cell_seed, random_uni, CounterexampleReport, Instance, Poly, RunOptions, SweepReport};
use descent_core::bounds::{self, check_within, BoundName, BoundSpec};
use descent_core::counter::{self, Serial};
use descent_core::descent::descent_count_invariance_check;
use descent_core::gf::{Basis, FieldTower};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Point budget per enumeration (2^24).
const BUDGET: u64 = 1 << 24;
const SEED: u64 = 0x5eed;
const SAMPLES: u32 = 25;
/// Allowed discrepancy between exact count paths.
const COUNT_TOLERANCE: u64 = 0;

fn line(criterion: &str, ok: bool, detail: impl AsRef<str>) {
    println!("criterion {criterion}: {} {}", if ok { "PASS" } else { "FAIL" }, detail.as_ref());
}

fn grid_config(workers: Option<usize>) -> ExperimentConfig {
    ExperimentConfig {
        fields: ["2", "3", "4", "5", "7", "8", "9"].map(String::from).to_vec(),
        exts: vec![2, 3],
        degrees: vec![1, 2, 3, 4],
        samples: SAMPLES,
        seed: SEED,
        budget: BUDGET,
        workers,
        modes: vec![Mode::AsCurve, Mode::Kummer],
        ..ExperimentConfig::default()
    }
}

fn run_grid(workers: Option<usize>) -> SweepReport {
    let c = grid_config(workers);
    run::run_sweep(&c, &Parallel::new(c.workers).unwrap()).unwrap()
}

fn grid() -> &'static SweepReport {
    static GRID: OnceLock<SweepReport> = OnceLock::new();
    GRID.get_or_init(|| run_grid(None))
}

fn hyper_config(workers: Option<usize>) -> ExperimentConfig {
    ExperimentConfig {
        fields: vec!["2".into(), "3".into()],
        exts: vec![2],
        degrees: vec![2, 3],
        samples: SAMPLES,
        seed: SEED,
        budget: BUDGET,
        workers,
        nvars: Some(2),
        modes: vec![Mode::AsHyper],
        require_hypotheses: true,
        ..ExperimentConfig::default()
    }
}

fn counterexamples() -> CounterexampleReport {
    let qs = ["3", "5", "7"].map(String::from);
    run::run_counterexamples(&qs, &[1, 2], &[2, 3, 4], BUDGET, &Serial).unwrap()
}

fn instances(mode: Mode) -> impl Iterator<Item = &'static CountReport> {
    grid().instances.iter().filter(move |r| r.mode == mode.as_str())
}

fn count(r: &CountReport, path: &str) -> BigUint {
    r.counts[path].parse().unwrap()
}

fn differ(a: &BigUint, b: &BigUint) -> bool {
    let diff = if a > b { a - b } else { b - a };
    diff > BigUint::from(COUNT_TOLERANCE)
}

fn within(r: &CountReport, name: BoundName) -> bool {
    r.bound(name).map(|b| b.within).unwrap_or(false)
}

fn tower(field: &str, r: u32) -> FieldTower {
    parse::parse_tower(field, r).unwrap()
}

fn uni_instance(field: &str, r: u32, poly: &str, e: Option<u64>) -> Instance {
    let t = tower(field, r);
    Instance {
        basis: Basis::power(&t),
        f: Poly::Uni(parse::parse_uni(&t, poly).unwrap()),
        tower: t,
        e,
    }
}

fn opts() -> RunOptions {
    RunOptions {
        budget: BUDGET,
        max_ext: 4,
        timings: false,
    }
}

/// `b^2` as an exact rational, for single-term bounds.
fn squared(b: &BoundSpec, q: u64) -> BigRational {
    assert_eq!(b.terms.len(), 1);
    let t = &b.terms[0];
    &t.coeff * &t.coeff * BigRational::from_integer(num_traits::pow(BigInt::from(q), t.exp2 as usize))
}

#[test]
fn criterion_1_identity_suite() {
    let g = grid();
    let mut bad = Vec::new();
    for r in instances(Mode::AsCurve) {
        let (direct, trace, descent) = (count(r, "direct"), count(r, "trace"), count(r, "descent"));
        if differ(&direct, &trace) || differ(&trace, &descent) || !r.identity_holds {
            bad.push(format!("as q={} r={} f={}", r.q, r.r, r.f));
        }
    }
    for r in instances(Mode::Kummer) {
        if differ(&count(r, "direct"), &count(r, "norm")) || !r.identity_holds {
            bad.push(format!("kummer q={} r={} e={:?} f={}", r.q, r.r, r.e, r.f));
        }
    }
    // Coverage: every admissible (q, r, d) cell with 25 samples, every e | q - 1.
    let mut expected_cells = 0;
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let p = parse::prime_power(q as u32).unwrap().0 as u64;
        for r in [2u32, 3] {
            assert!(q.pow(2 * r) <= BUDGET);
            for d in (1..=4u64).filter(|d| d % p != 0) {
                let divisors = (1..q).filter(|e| (q - 1) % e == 0).count();
                expected_cells += 1 + divisors;
                for c in g.cells.iter().filter(|c| c.q == q && c.r == r && c.d as u64 == d) {
                    if c.instances != SAMPLES {
                        bad.push(format!("cell q={q} r={r} d={d} has {} samples", c.instances));
                    }
                }
            }
        }
    }
    let ok = bad.is_empty() && g.errors.is_empty() && g.cells.len() == expected_cells;
    line(
        "1",
        ok,
        format!(
            "{} cells, {} instances, {} mismatches, {} errors",
            g.cells.len(),
            g.instances.len(),
            bad.len(),
            g.errors.len()
        ),
    );
    assert!(ok, "{bad:?} {:?}", g.errors);
}

#[test]
fn criterion_2_artin_schreier_curve_bound() {
    let passing: Vec<_> = instances(Mode::AsCurve).filter(|r| r.hypotheses).collect();
    let violations: Vec<_> = passing.iter().filter(|r| !within(r, BoundName::AsTwoTerm)).collect();

    let eq = run::run_single(&uni_instance("3", 2, "x^2 + 1", None), Mode::AsCurve, &opts(), &Serial).unwrap();
    let (two, _) = bounds::bound_as_curve(2, 3, 2);
    let equality = eq.n_direct == "6"
        && eq.deviation == "-3"
        && eq.theorem_verdict == "pass"
        && check_within(&BigInt::from(3), &two)
        && !check_within(&BigInt::from(4), &two);

    let sing = run::run_single(&uni_instance("3", 2, "x^2", None), Mode::AsCurve, &opts(), &Serial).unwrap();
    let exempt = sing.deviation == "6"
        && !within(&sing, BoundName::AsTwoTerm)
        && sing.certificates.iter().any(|c| c.check == "split-form-nonsingular" && c.verdict == "fail")
        && sing.theorem_verdict == "exempt"
        && sing.identity_holds;

    let ok = violations.is_empty() && equality && exempt && !passing.is_empty();
    line(
        "2",
        ok,
        format!(
            "{} certified instances, {} outside bound; x^2+1 equality {}; x^2 exempt {}",
            passing.len(),
            violations.len(),
            equality,
            exempt
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_3_kummer_bound() {
    let passing: Vec<_> = instances(Mode::Kummer).filter(|r| r.hypotheses).collect();
    let violations = passing.iter().filter(|r| !within(r, BoundName::Kummer)).count();

    let spot = run::run_single(&uni_instance("3", 2, "x^2 + 1", Some(1)), Mode::Kummer, &opts(), &Serial).unwrap();
    let dev: BigInt = spot.deviation.parse().unwrap();
    let spot_ok = spot.n_direct == "8"
        && spot.delta == Some(2)
        && &dev * &dev == BigInt::from(4)
        && squared(&bounds::bound_kummer(2, 3, 2), 3) == BigRational::from_integer(48.into())
        && within(&spot, BoundName::Kummer);

    let ok = violations == 0 && spot_ok && !passing.is_empty();
    line(
        "3",
        ok,
        format!("{} certified instances, {} outside bound; spot 4 <= 48 {}", passing.len(), violations, spot_ok),
    );
    assert!(ok);
}

#[test]
fn criterion_4_fiber_uniformity() {
    let passing: Vec<_> = instances(Mode::Kummer).filter(|r| r.hypotheses).collect();
    let mut violations = 0;
    let mut fibers = 0;
    for r in &passing {
        let b = bounds::bound_w_lambda(r.d as u64, r.q, r.r);
        let centre = (num_traits::pow(BigInt::from(r.q), r.r as usize) - 1) / BigInt::from(r.q - 1);
        for fb in &r.fibers {
            fibers += 1;
            if !check_within(&(BigInt::from(fb.count) - &centre), &b) {
                violations += 1;
            }
        }
        if !within(r, BoundName::WLambda) {
            violations += 1;
        }
    }

    let spot = run::run_single(&uni_instance("3", 2, "x^2 + 1", Some(1)), Mode::Kummer, &opts(), &Serial).unwrap();
    let wl = bounds::bound_w_lambda(2, 3, 2);
    let spot_ok = spot.fibers.len() == 1
        && spot.fibers[0].count == 3
        && check_within(&BigInt::from(3 - 4), &wl)
        && squared(&wl, 3) == BigRational::from_integer(12.into());

    let ok = violations == 0 && spot_ok && fibers > 0;
    line(
        "4",
        ok,
        format!("{fibers} fibers checked, {violations} outside bound; spot |3 - 4| <= 2*3^(1/2) {spot_ok}"),
    );
    assert!(ok);
}

#[test]
fn criterion_5_counterexamples() {
    let rep = counterexamples();
    let a: Vec<_> = rep.rows.iter().filter(|r| r.family == "a").collect();
    let b: Vec<_> = rep.rows.iter().filter(|r| r.family == "b" && [3, 5].contains(&r.q)).collect();
    assert_eq!(a.len(), 18);
    assert_eq!(b.len(), 4);

    let stated_ok = a.iter().all(|r| r.stated_matches);
    let spot = a.iter().find(|r| (r.q, r.r, r.d) == (5, 2, Some(2))).unwrap();
    line(
        "5a",
        stated_ok,
        format!(
            "stated closed form matches {}/{} cells; q=5 r=2 d=2: brute force {}, stated {}",
            a.iter().filter(|r| r.stated_matches).count(),
            a.len(),
            spot.brute_force,
            spot.stated_formula
        ),
    );

    let corrected_ok = a.iter().all(|r| r.corrected_matches == Some(true) && r.fiber_matches_stated == Some(true));
    line(
        "5a-corrected",
        corrected_ok,
        format!(
            "1 + mu_d (q^r - 1) equals brute force and 1 + #{{N(x^d) = 1}} equals the stated form in all {} cells",
            a.len()
        ),
    );

    let b_ok = b.iter().all(|r| r.stated_matches);
    let b_spot = b.iter().find(|r| (r.q, r.r) == (3, 1)).unwrap();
    line(
        "5b",
        b_ok,
        format!("{}/{} cells match; q=3 r=1: {}", b.iter().filter(|r| r.stated_matches).count(), b.len(), b_spot.brute_force),
    );

    assert!(corrected_ok && b_ok && b_spot.brute_force == "12");
}

/// The literal closed form for `y^(q-1) = x^d`. It disagrees with brute
/// force (q=5, r=2, d=2: 49 points, formula 13), so this stays red; run
/// with `--ignored` to see it.
#[test]
#[ignore = "stated closed form for y^(q-1) = x^d undercounts by the y-fiber size"]
fn criterion_5a_stated_closed_form() {
    let rep = counterexamples();
    for r in rep.rows.iter().filter(|r| r.family == "a") {
        assert_eq!(r.brute_force, r.stated_formula, "q={} r={} d={:?}", r.q, r.r, r.d);
    }
}

#[test]
fn criterion_6_hypersurface_bound() {
    let c = hyper_config(None);
    let rep = run::run_sweep(&c, &Parallel::new(None).unwrap()).unwrap();
    let mut bad = Vec::new();
    for r in &rep.instances {
        let (direct, trace, descent) = (count(r, "direct"), count(r, "trace"), count(r, "descent"));
        if !r.hypotheses {
            bad.push(format!("uncertified sample {}", r.f));
        }
        if differ(&direct, &trace) || differ(&trace, &descent) {
            bad.push(format!("identity q={} f={}", r.q, r.f));
        }
        if !within(r, BoundName::AsHyperTwoTerm) {
            bad.push(format!("bound q={} f={}", r.q, r.f));
        }
    }
    let cells: Vec<(u64, u32)> = rep.cells.iter().map(|c| (c.q, c.d)).collect();
    let exhausted: u32 = rep.cells.iter().map(|c| c.sampling_exhausted).sum();
    let ok = bad.is_empty() && exhausted == 0 && cells == vec![(2, 3), (3, 2)] && rep.instances.len() == 2 * SAMPLES as usize;
    line(
        "6",
        ok,
        format!("{} Deligne instances in cells {:?}, {} problems", rep.instances.len(), cells, bad.len()),
    );
    assert!(ok, "{bad:?}");
}

/// Counts from criteria 1-4 under one basis: every count path, the
/// deviation, delta, the fibers and the bound verdicts.
fn fingerprint(r: &CountReport) -> String {
    let verdicts: Vec<_> = r.bounds.iter().map(|b| (b.name.clone(), b.within)).collect();
    format!("{:?} {} {:?} {:?} {:?}", r.counts, r.deviation, r.delta, r.fibers, verdicts)
}

#[test]
fn criterion_7_basis_independence() {
    let mut checked = 0;
    let mut bad = Vec::new();
    for field in ["3", "4"] {
        let t = tower(field, 2);
        let q = t.q() as u64;
        let bases = [
            run::make_basis(&t, BasisChoice::Power),
            run::make_basis(&t, BasisChoice::Random(1)),
            run::make_basis(&t, BasisChoice::Random(2)),
        ];
        assert!(bases[0].elems() != bases[1].elems() && bases[1].elems() != bases[2].elems() && bases[0].elems() != bases[2].elems());
        for d in (1..=4u32).filter(|d| d % t.p() != 0) {
            for s in 0..5u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(&[SEED, q, 2, d as u64, s]));
                let f = random_uni(&t, d, &mut rng);
                if !descent_count_invariance_check(&f, &bases, BUDGET, &Serial).unwrap() {
                    bad.push(format!("descent counts q={q} f={f}"));
                }
                let mut runs: Vec<(Mode, Option<u64>)> = vec![(Mode::AsCurve, None)];
                runs.extend((1..q).filter(|e| (q - 1).is_multiple_of(*e)).map(|e| (Mode::Kummer, Some(e))));
                for (mode, e) in runs {
                    let prints: Vec<String> = bases
                        .iter()
                        .map(|b| {
                            let inst = Instance {
                                tower: t.clone(),
                                basis: b.clone(),
                                f: Poly::Uni(f.clone()),
                                e,
                            };
                            fingerprint(&run::run_single(&inst, mode, &opts(), &Serial).unwrap())
                        })
                        .collect();
                    checked += 1;
                    if prints.iter().any(|p| p != &prints[0]) {
                        bad.push(format!("{} q={q} e={e:?} f={f}", mode.as_str()));
                    }
                }
            }
        }
    }
    let ok = bad.is_empty();
    line("7", ok, format!("{checked} instances x 3 bases over F9/F3 and F16/F4, {} differ", bad.len()));
    assert!(ok, "{bad:?}");
}

#[test]
fn criterion_8_nonvanishing_identity() {
    let mut checked = 0;
    let mut bad = Vec::new();
    for (q, r, m) in [(2u32, 2u32, 1u32), (2, 2, 3), (3, 2, 1), (2, 3, 2)] {
        assert!((q as u64).pow(m * r) <= BUDGET);
        let t = tower(&q.to_string(), r);
        let b = Basis::power(&t);
        let mut polys: Vec<_> = ["x", "x^2 + 1", "x^3 + x + 1", "x^2 + x"]
            .iter()
            .map(|s| parse::parse_uni(&t, s).unwrap())
            .collect();
        for s in 0..5u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(&[SEED, q as u64, r as u64, m as u64, s]));
            polys.push(random_uni(&t, 1 + (s as u32 % 3), &mut rng));
        }
        for f in &polys {
            let (lhs, rhs) = counter::count_nonvanishing_identity(f, &b, m, BUDGET, &Serial).unwrap();
            checked += 1;
            if lhs != rhs {
                bad.push(format!("(q,r,m)=({q},{r},{m}) f={f}: {lhs} vs {rhs}"));
            }
        }
    }
    let ok = bad.is_empty();
    line("8", ok, format!("{checked} polynomials over 4 (q, r, m) triples, {} mismatches", bad.len()));
    assert!(ok, "{bad:?}");
}

#[test]
fn criterion_9_determinism() {
    let first = grid();
    let again = run_grid(Some(1));
    let hyper_a = run::run_sweep(&hyper_config(Some(3)), &Parallel::new(Some(3)).unwrap()).unwrap();
    let hyper_b = run::run_sweep(&hyper_config(Some(1)), &Parallel::new(Some(1)).unwrap()).unwrap();
    let outputs: BTreeMap<&str, bool> = BTreeMap::from([
        ("grid json", to_json(first) == to_json(&again)),
        ("grid csv", to_csv(&first.instances) == to_csv(&again.instances)),
        ("hypersurface json", to_json(&hyper_a) == to_json(&hyper_b)),
        ("counterexamples json", to_json(&counterexamples()) == to_json(&counterexamples())),
    ]);
    let ok = outputs.values().all(|&v| v);
    line("9", ok, format!("byte-identical across reruns and worker counts: {outputs:?}"));
    assert!(ok);
}
