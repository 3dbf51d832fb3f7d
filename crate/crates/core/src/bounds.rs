//! Exact evaluation of the point-count bounds.
//!
//! Every bound has the shape `sum_t c_t * q^(t/2)` with rational `c_t`, which
//! we collapse to `X + Y*sqrt(q)`. Comparisons against integers reduce to
//! sign tests decided by squaring, so no comparison is ever made in floating
//! point.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundName {
    AsTwoTerm,
    AsSimple,
    AsHyperTwoTerm,
    AsHyperSimple,
    Kummer,
    WLambda,
    Weil,
}

impl BoundName {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::AsTwoTerm => "as-two-term",
            BoundName::AsSimple => "as-simple",
            BoundName::AsHyperTwoTerm => "as-hyper-two-term",
            BoundName::AsHyperSimple => "as-hyper-simple",
            BoundName::Kummer => "kummer",
            BoundName::WLambda => "w-lambda",
            BoundName::Weil => "weil",
        }
    }
}

/// `coeff * q^(exp2 / 2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundTerm {
    pub coeff: BigRational,
    pub exp2: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BoundParams {
    pub d: u64,
    pub r: u32,
    pub n: Option<u32>,
    pub e: Option<u64>,
    pub genus: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSpec {
    pub name: BoundName,
    pub q: u64,
    pub terms: Vec<BoundTerm>,
    pub params: BoundParams,
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn pow_int(base: i64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), e as usize)
}

/// Sign of `x + y*sqrt(q)`.
pub fn sign_of_surd(x: &BigRational, y: &BigRational, q: u64) -> Ordering {
    let zero = BigRational::zero();
    let sx = x.cmp(&zero);
    let sy = y.cmp(&zero);
    match (sx, sy) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (a, b) if a == b => a,
        _ => {
            // opposite signs: the larger of x^2 and q*y^2 wins
            let x2 = x * x;
            let y2q = y * y * int(q);
            match x2.cmp(&y2q) {
                Ordering::Equal => Ordering::Equal,
                Ordering::Greater => sx,
                Ordering::Less => sy,
            }
        }
    }
}

impl BoundSpec {
    fn new(name: BoundName, q: u64, terms: Vec<BoundTerm>, params: BoundParams) -> Self {
        Self { name, q, terms, params }
    }

    /// `(X, Y)` with value `X + Y*sqrt(q)`.
    pub fn surd(&self) -> (BigRational, BigRational) {
        let mut x = BigRational::zero();
        let mut y = BigRational::zero();
        for t in &self.terms {
            let half = t.exp2 / 2;
            let scale = int(num_traits::pow(BigInt::from(self.q), half as usize));
            if t.exp2 % 2 == 0 {
                x += &t.coeff * scale;
            } else {
                y += &t.coeff * scale;
            }
        }
        (x, y)
    }

    /// Compares the bound with an integer exactly.
    pub fn cmp_int(&self, v: &BigInt) -> Ordering {
        let (x, y) = self.surd();
        sign_of_surd(&(x - int(v.clone())), &y, self.q)
    }

    /// Exact comparison of two bounds over the same `q`.
    pub fn cmp_bound(&self, other: &BoundSpec) -> Option<Ordering> {
        if self.q != other.q {
            return None;
        }
        let (x1, y1) = self.surd();
        let (x2, y2) = other.surd();
        Some(sign_of_surd(&(x1 - x2), &(y1 - y2), self.q))
    }

    /// `c1*q^(t1/2) + c2*q^(t2/2)`, coefficients as reduced fractions.
    pub fn exact_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("{}*{}^({}/2)", t.coeff, self.q, t.exp2))
            .collect();
        parts.join(" + ")
    }

    /// Decimal value truncated to `digits` places, from a 256-bit fixed
    /// point evaluation of `sqrt(q)`.
    pub fn to_decimal(&self, digits: u32) -> String {
        let (x, y) = self.surd();
        let shift = 256u32;
        let one = BigInt::one() << shift;
        let sqrt_q = (BigInt::from(self.q) << (2 * shift)).sqrt();
        let fixed = (x.numer() * &one) / x.denom() + (y.numer() * sqrt_q) / y.denom();
        let scale = num_traits::pow(BigInt::from(10u32), digits as usize);
        let scaled = (fixed * &scale) >> shift;
        format_fixed(&scaled, digits)
    }

    pub fn to_f64(&self) -> f64 {
        let (x, y) = self.surd();
        x.to_f64().unwrap_or(f64::NAN) + y.to_f64().unwrap_or(f64::NAN) * libm_sqrt(self.q as f64)
    }
}

fn libm_sqrt(v: f64) -> f64 {
    // no_std: Newton iteration seeded from the exponent is plenty for display
    if v <= 0.0 {
        return 0.0;
    }
    let mut g = v;
    for _ in 0..64 {
        g = 0.5 * (g + v / g);
    }
    g
}

fn format_fixed(v: &BigInt, digits: u32) -> String {
    let neg = v.sign() == Sign::Minus;
    let a = v.abs().to_biguint().unwrap_or_default();
    let scale = num_traits::pow(BigUint::from(10u32), digits as usize);
    let (ip, fp) = a.div_rem(&scale);
    let mut frac = format!("{fp}");
    while (frac.len() as u32) < digits {
        frac.insert(0, '0');
    }
    format!("{}{}.{}", if neg { "-" } else { "" }, ip, frac)
}

fn two_term(name: BoundName, d: u64, q: u64, m: u32, params: BoundParams) -> BoundSpec {
    let dm = d as i64 - 1;
    let sign_m: i64 = if m.is_multiple_of(2) { 1 } else { -1 };
    let a = (pow_int(dm, m + 1) - BigInt::from(sign_m * dm)) / BigInt::from(d);
    let b = (pow_int(dm, m) + BigInt::from(sign_m * dm)) / BigInt::from(d);
    BoundSpec::new(
        name,
        q,
        vec![
            BoundTerm { coeff: int(a), exp2: m + 1 },
            BoundTerm { coeff: int(b), exp2: m },
        ],
        params,
    )
}

fn simple(name: BoundName, d: u64, q: u64, m: u32, params: BoundParams) -> BoundSpec {
    BoundSpec::new(
        name,
        q,
        vec![BoundTerm {
            coeff: int(pow_int(d as i64 - 1, m)),
            exp2: m + 1,
        }],
        params,
    )
}

/// Two-term and simplified bounds on `|N_f - q^r|` for `y^q - y = f(x)`.
/// The two-term coefficients are integers for every `d >= 1`.
pub fn bound_as_curve(d: u64, q: u64, r: u32) -> (BoundSpec, BoundSpec) {
    let p = BoundParams { d, r, ..Default::default() };
    (
        two_term(BoundName::AsTwoTerm, d, q, r, p.clone()),
        simple(BoundName::AsSimple, d, q, r, p),
    )
}

/// The hypersurface analogue with `n*r` in place of `r`.
pub fn bound_as_hypersurface(d: u64, n: u32, q: u64, r: u32) -> (BoundSpec, BoundSpec) {
    let p = BoundParams { d, r, n: Some(n), ..Default::default() };
    (
        two_term(BoundName::AsHyperTwoTerm, d, q, n * r, p.clone()),
        simple(BoundName::AsHyperSimple, d, q, n * r, p),
    )
}

/// `r (d-1)^r (q-1) q^((r-1)/2)`.
pub fn bound_kummer(d: u64, q: u64, r: u32) -> BoundSpec {
    let c = BigInt::from(r) * pow_int(d as i64 - 1, r) * BigInt::from(q - 1);
    BoundSpec::new(
        BoundName::Kummer,
        q,
        vec![BoundTerm { coeff: int(c), exp2: r - 1 }],
        BoundParams { d, r, ..Default::default() },
    )
}

/// `r (d-1)^r q^((r-1)/2)`, the per-fiber bound around `(q^r - 1)/(q - 1)`.
pub fn bound_w_lambda(d: u64, q: u64, r: u32) -> BoundSpec {
    let c = BigInt::from(r) * pow_int(d as i64 - 1, r);
    BoundSpec::new(
        BoundName::WLambda,
        q,
        vec![BoundTerm { coeff: int(c), exp2: r - 1 }],
        BoundParams { d, r, ..Default::default() },
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Genus {
    Exact(BigRational),
    /// Inclusive interval; the lower end can be negative for `d = 1`.
    Range(BigRational, BigRational),
}

impl Genus {
    pub fn upper(&self) -> &BigRational {
        match self {
            Genus::Exact(g) => g,
            Genus::Range(_, hi) => hi,
        }
    }
}

/// Artin-Schreier genus `(d-1)(q-1)/2`, or for `Some(e)` the Kummer interval
/// `[((q-1)/e - 1)(d-2)/2, ((q-1)/e - 1)(d-1)/2]`; Weil bound `2 g q^(r/2)`
/// using the (upper) genus. `None` when `e` does not divide `q - 1`.
pub fn genus_and_weil(d: u64, q: u64, r: u32, e: Option<u64>) -> Option<(Genus, BoundSpec)> {
    let two = int(2);
    let dd = int(d as i64);
    let genus = match e {
        None => Genus::Exact((dd - int(1)) * int(q as i64 - 1) / &two),
        Some(e) => {
            if e == 0 || !(q - 1).is_multiple_of(e) {
                return None;
            }
            let m = int(((q - 1) / e) as i64 - 1);
            Genus::Range(
                &m * (&dd - int(2)) / &two,
                &m * (&dd - int(1)) / &two,
            )
        }
    };
    let g = genus.upper().clone();
    let weil = BoundSpec::new(
        BoundName::Weil,
        q,
        vec![BoundTerm { coeff: two * &g, exp2: r }],
        BoundParams { d, r, e, genus: Some(g), ..Default::default() },
    );
    Some((genus, weil))
}

/// `|dev| <= bound`, decided exactly.
pub fn check_within(dev: &BigInt, b: &BoundSpec) -> bool {
    b.cmp_int(&dev.abs()) != Ordering::Less
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn coeffs(b: &BoundSpec) -> Vec<(BigRational, u32)> {
        b.terms.iter().map(|t| (t.coeff.clone(), t.exp2)).collect()
    }

    #[test]
    fn as_curve_examples() {
        let (two, simple) = bound_as_curve(2, 3, 2);
        assert_eq!(coeffs(&two), vec![(r(0, 1), 3), (r(1, 1), 2)]);
        assert_eq!(two.cmp_int(&BigInt::from(3)), Ordering::Equal);
        assert_eq!(simple.to_decimal(6), "5.196152");
        let (two, simple) = bound_as_curve(3, 2, 2);
        assert_eq!(coeffs(&two), vec![(r(2, 1), 3), (r(2, 1), 2)]);
        assert_eq!(coeffs(&simple), vec![(r(4, 1), 3)]);
        let (two, _) = bound_as_curve(2, 7, 1);
        assert_eq!(two.surd(), (r(7, 1), r(0, 1)));
    }

    #[test]
    fn hypersurface_examples() {
        for (d, q, rr) in [(2, 3, 2), (3, 4, 3), (5, 2, 1)] {
            let (a, b) = bound_as_curve(d, q, rr);
            let (c, e) = bound_as_hypersurface(d, 1, q, rr);
            assert_eq!(a.terms, c.terms);
            assert_eq!(b.terms, e.terms);
        }
        let (_, s) = bound_as_hypersurface(2, 2, 3, 1);
        assert_eq!(coeffs(&s), vec![(r(1, 1), 3)]);
        let (_, s) = bound_as_hypersurface(3, 2, 2, 2);
        assert_eq!(coeffs(&s), vec![(r(16, 1), 5)]);
    }

    #[test]
    fn kummer_examples() {
        let k = bound_kummer(2, 3, 2);
        assert_eq!(coeffs(&k), vec![(r(4, 1), 1)]);
        assert_eq!(coeffs(&bound_w_lambda(2, 3, 2)), vec![(r(2, 1), 1)]);
        assert_eq!(bound_kummer(4, 7, 1).surd(), (r(18, 1), r(0, 1)));
        assert_eq!(bound_kummer(2, 4, 3).surd(), (r(36, 1), r(0, 1)));
    }

    #[test]
    fn genus_examples() {
        let (g, w) = genus_and_weil(3, 4, 1, None).unwrap();
        assert_eq!(g, Genus::Exact(r(3, 1)));
        assert_eq!(coeffs(&w), vec![(r(6, 1), 1)]);
        let (g, _) = genus_and_weil(2, 3, 2, Some(1)).unwrap();
        assert_eq!(g, Genus::Range(r(0, 1), r(1, 2)));
        let (g, w) = genus_and_weil(1, 5, 2, None).unwrap();
        assert_eq!(g, Genus::Exact(r(0, 1)));
        assert_eq!(w.cmp_int(&BigInt::zero()), Ordering::Equal);
        assert!(genus_and_weil(2, 5, 2, Some(3)).is_none());
    }

    #[test]
    fn check_within_examples() {
        assert!(check_within(&BigInt::from(3), &bound_kummer(2, 3, 2)));
        let (two, _) = bound_as_curve(2, 3, 2);
        assert!(check_within(&BigInt::from(-3), &two));
        assert!(!check_within(&BigInt::from(6), &two));
        assert!(!check_within(&BigInt::from(4), &two));
        let k = bound_kummer(2, 3, 2);
        // 4*sqrt(3) = 6.928...
        assert!(check_within(&BigInt::from(-6), &k));
        assert!(!check_within(&BigInt::from(7), &k));
    }

    #[test]
    fn two_term_coefficients_are_integers_and_sum_to_simple() {
        for d in 1..=8u64 {
            for m in 1..=6u32 {
                let dm = d as i64 - 1;
                let sign: i64 = if m % 2 == 0 { 1 } else { -1 };
                let a = pow_int(dm, m + 1) - BigInt::from(sign * dm);
                let b = pow_int(dm, m) + BigInt::from(sign * dm);
                assert!(a.is_multiple_of(&BigInt::from(d)));
                assert!(b.is_multiple_of(&BigInt::from(d)));
                assert_eq!((a + b) / BigInt::from(d), pow_int(dm, m));
            }
        }
    }

    #[test]
    fn two_term_below_simple_on_grid() {
        for d in 2..=6 {
            for rr in 1..=4 {
                for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
                    let (two, simple) = bound_as_curve(d, q, rr);
                    assert_ne!(two.cmp_bound(&simple), Some(Ordering::Greater), "{d} {rr} {q}");
                }
            }
        }
    }

    #[test]
    fn decimal_formatting() {
        let (two, _) = bound_as_curve(3, 2, 2);
        // 4 sqrt 2 + 4 = 9.656854...
        assert_eq!(two.to_decimal(6), "9.656854");
        assert_eq!(bound_kummer(2, 4, 3).to_decimal(6), "36.000000");
        assert_eq!(two.exact_string(), "2*2^(3/2) + 2*2^(2/2)");
    }
}
