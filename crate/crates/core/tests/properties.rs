use descent_core::bounds::{self, check_within, BoundSpec};
use descent_core::counter::{self, Serial, DEFAULT_BUDGET as B};
use descent_core::descent::{as_descent, kummer_descent, split_form, SplitKind};
use descent_core::gf::{build_field, Basis, Elem, Embedding, FieldTower};
use descent_core::poly::UniPoly;
use descent_core::Error;
use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOWERS: [(u32, u32, u32); 6] = [(2, 1, 2), (2, 2, 2), (3, 1, 2), (2, 1, 3), (5, 1, 2), (3, 1, 3)];

fn tower(i: usize) -> FieldTower {
    let (p, n, r) = TOWERS[i % TOWERS.len()];
    FieldTower::build(p, n, r).unwrap()
}

fn poly(t: &FieldTower, raw: &[u32]) -> UniPoly {
    let k = t.ext();
    UniPoly::new(k, raw.iter().map(|&c| Elem(c % k.size())).collect()).unwrap()
}

prop_compose! {
    fn tower_and_poly(max_deg: usize)(ti in 0..TOWERS.len(), raw in prop::collection::vec(any::<u32>(), 1..=max_deg + 1))
        -> (FieldTower, UniPoly) {
        let t = tower(ti);
        let f = poly(&t, &raw);
        (t, f)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn twist_composes_and_commutes_with_eval((t, f) in tower_and_poly(4), i in 0u32..4, j in 0u32..4) {
        prop_assert_eq!(f.frobenius_twist(&t, i + j), f.frobenius_twist(&t, i).frobenius_twist(&t, j));
        prop_assert_eq!(f.frobenius_twist(&t, t.r()), f.clone());
        let g = f.frobenius_twist(&t, 1);
        for x in t.ext().enumerate() {
            prop_assert_eq!(g.eval(t.frobenius(x, 1)), t.frobenius(f.eval(x), 1));
        }
    }

    #[test]
    fn compose_linear_matches_eval((t, f) in tower_and_poly(3), betas in prop::collection::vec(any::<u32>(), 1..=3)) {
        let k = t.ext();
        let betas: Vec<Elem> = betas.iter().map(|&b| Elem(b % k.size())).collect();
        let g = f.compose_linear(&betas).unwrap();
        let base = t.base();
        let v = betas.len();
        let total = (base.size() as u64).pow(v as u32);
        for i in 0..total {
            let pt: Vec<Elem> = (0..v).map(|j| Elem((i / (base.size() as u64).pow(j as u32) % base.size() as u64) as u32)).collect();
            let lin = pt.iter().zip(&betas).fold(Elem::ZERO, |s, (c, b)| k.add(s, k.mul(*c, *b)));
            prop_assert_eq!(g.eval(&pt).unwrap(), f.eval(lin));
        }
    }

    #[test]
    fn gcd_divides_both((t, f) in tower_and_poly(5), raw in prop::collection::vec(any::<u32>(), 1..6)) {
        let g = poly(&t, &raw);
        prop_assume!(!(f.is_zero() && g.is_zero()));
        let h = f.gcd(&g).unwrap();
        prop_assert_eq!(h.leading(), Some(Elem::ONE));
        prop_assert!(f.divrem(&h).unwrap().1.is_zero());
        prop_assert!(g.divrem(&h).unwrap().1.is_zero());
    }

    #[test]
    fn descent_forms_are_rational((t, f) in tower_and_poly(4), seed in any::<u64>()) {
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let basis = Basis::random(&t, &mut ChaCha8Rng::seed_from_u64(seed));
        for form in [as_descent(&f, &basis).unwrap(), kummer_descent(&f, &basis).unwrap()] {
            prop_assert!(form.result.terms().all(|(_, c)| t.is_in_base(*c)));
        }
        prop_assert_eq!(as_descent(&f, &basis).unwrap().in_split_variables().unwrap(), split_form(&f, &t, SplitKind::Additive).unwrap());
        prop_assert_eq!(kummer_descent(&f, &basis).unwrap().in_split_variables().unwrap(), split_form(&f, &t, SplitKind::Multiplicative).unwrap());
        let s = as_descent(&f, &basis).unwrap();
        prop_assert_eq!(s.result.total_degree(), f.degree().map(|d| d as u32));
        let tt = kummer_descent(&f, &basis).unwrap();
        prop_assert_eq!(tt.result.total_degree(), f.degree().map(|d| d as u32 * t.r()));
    }

    #[test]
    fn fibers_partition_the_space((t, f) in tower_and_poly(4), seed in any::<u64>()) {
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let basis = Basis::random(&t, &mut ChaCha8Rng::seed_from_u64(seed));
        for form in [as_descent(&f, &basis).unwrap(), kummer_descent(&f, &basis).unwrap()] {
            let fibers = counter::count_hypersurface_fibers(&form.result, B, &Serial).unwrap();
            prop_assert_eq!(fibers.iter().sum::<u64>(), t.ext().size() as u64);
        }
    }

    #[test]
    fn counts_do_not_depend_on_basis((t, f) in tower_and_poly(4), s1 in any::<u64>(), s2 in any::<u64>()) {
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let b1 = Basis::random(&t, &mut ChaCha8Rng::seed_from_u64(s1));
        let b2 = Basis::random(&t, &mut ChaCha8Rng::seed_from_u64(s2));
        prop_assert_eq!(
            counter::count_as_descent(&f, &b1, B, &Serial).unwrap(),
            counter::count_as_descent(&f, &b2, B, &Serial).unwrap()
        );
        let k1 = counter::count_kummer_norm(&f, &b1, 1, B, &Serial).unwrap();
        let k2 = counter::count_kummer_norm(&f, &b2, 1, B, &Serial).unwrap();
        prop_assert_eq!(k1, k2);
    }

    #[test]
    fn trace_and_direct_counts_agree((t, f) in tower_and_poly(4)) {
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let basis = Basis::power(&t);
        let direct = counter::count_as_direct(&f, &t, B, &Serial).unwrap();
        prop_assert_eq!(&direct, &counter::count_as_trace(&f, &t, B, &Serial).unwrap());
        prop_assert_eq!(&direct, &counter::count_as_descent(&f, &basis, B, &Serial).unwrap());
    }

    #[test]
    fn check_within_agrees_with_fixed_point(d in 1u64..7, r in 1u32..5, qi in 0usize..9, dev in -20_000i64..20_000, which in 0usize..4) {
        let q = [2u64, 3, 4, 5, 7, 8, 9, 11, 16][qi];
        let (two, simple) = bounds::bound_as_curve(d, q, r);
        let b = [two, simple, bounds::bound_kummer(d, q, r), bounds::bound_w_lambda(d, q, r)][which].clone();
        let dev = BigInt::from(dev);
        let (lo, hi) = fixed_point(&b);
        let scaled = dev.abs() << FRAC;
        if scaled < lo {
            prop_assert!(check_within(&dev, &b));
        } else if scaled > hi {
            prop_assert!(!check_within(&dev, &b));
        }
    }
}

const FRAC: u32 = 256;

/// Enclosure `[lo, hi]` of `bound * 2^256` from truncated integer square roots.
fn fixed_point(b: &BoundSpec) -> (BigInt, BigInt) {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for term in &b.terms {
        let q = BigUint::from(b.q);
        let m = if term.exp2 % 2 == 0 {
            num_traits::pow(q, term.exp2 as usize / 2) << FRAC
        } else {
            (num_traits::pow(q, term.exp2 as usize) << (2 * FRAC)).sqrt()
        };
        let m = BigRational::from_integer(BigInt::from_biguint(Sign::Plus, m));
        let (a, c) = (&term.coeff * &m, &term.coeff * (&m + BigRational::one()));
        if term.coeff.is_negative() {
            lo += c;
            hi += a;
        } else {
            lo += a;
            hi += c;
        }
    }
    (lo.floor().to_integer(), hi.ceil().to_integer())
}

#[test]
fn square_free_matches_root_multiplicities() {
    for p in [2u32, 3] {
        let base = build_field(p, 1).unwrap();
        let split = build_field(p, 6).unwrap();
        let emb = Embedding::new(&base, &split).unwrap();
        for d in 1..=3usize {
            for idx in 0..p.pow(d as u32) {
                let mut c: Vec<Elem> = (0..d).map(|i| Elem(idx / p.pow(i as u32) % p)).collect();
                c.push(Elem::ONE);
                let f = UniPoly::new(&base, c).unwrap();
                let roots = f.roots_in(Some(&emb), B).unwrap();
                assert_eq!(roots.len(), d, "{f} splits in F_{p}^6");
                let mut distinct = roots.clone();
                distinct.dedup();
                let oracle = distinct.len() == roots.len();
                match f.is_square_free() {
                    Ok(v) => assert_eq!(v, oracle, "{f}"),
                    Err(Error::DerivativeVanishes) => assert!(!oracle, "{f}"),
                    Err(e) => panic!("{f}: {e}"),
                }
            }
        }
    }
}

#[test]
fn bounds_monotone_and_two_term_below_simple() {
    let qs = [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16];
    for d in 2..=6u64 {
        for r in 1..=4u32 {
            for (i, &q) in qs.iter().enumerate() {
                let (two, simple) = bounds::bound_as_curve(d, q, r);
                assert_ne!(two.cmp_bound(&simple), Some(std::cmp::Ordering::Greater), "d={d} r={r} q={q}");
                let family = |d, q, r| {
                    let (a, b) = bounds::bound_as_curve(d, q, r);
                    [a, b, bounds::bound_kummer(d, q, r), bounds::bound_w_lambda(d, q, r)]
                };
                let here = family(d, q, r);
                let mut nexts = vec![family(d + 1, q, r), family(d, q, r + 1)];
                if let Some(&q2) = qs.get(i + 1) {
                    nexts.push(family(d, q2, r));
                }
                for next in nexts {
                    for (a, b) in here.iter().zip(next.iter()) {
                        assert_ne!(a.cmp_bound(b), Some(std::cmp::Ordering::Greater), "{a:?} vs {b:?}");
                    }
                }
            }
        }
    }
}
