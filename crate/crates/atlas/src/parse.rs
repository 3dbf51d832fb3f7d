//! Text formats: field specs, elements and polynomials.
//!
//! A field spec is `p^n` or a bare prime power `q` (smallest defining
//! polynomial), or `p;n;c0,c1,...,1` with an explicit monic modulus over
//! `F_p`. Elements are comma-separated base-`p` digits of the flattened
//! representation, lowest first. Polynomial text is a sum of products of factors, each optionally raised to `^k`:
//!
//! * an integer, read in the prime field;
//! * `(d0,d1,...)`, an element in digit form;
//! * `u`, the generator of the extension level; `v`, the generator of the
//!   base level (only when the base is not a prime field);
//! * a variable `x`, `xK` or `x_K` (`x` is `x1`).

use descent_core::gf::{build_field, Elem, FieldLevel, FieldTower, Level};
use descent_core::poly::{MultiPoly, UniPoly};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("bad field spec {0:?}: expected p^n or p;n;c0,...,1")]
    FieldSpec(String),
    #[error("bad element {text:?}: {reason}")]
    Element { text: String, reason: String },
    #[error("polynomial text {text:?}, position {pos}: {reason}")]
    Poly { text: String, pos: usize, reason: String },
    #[error(transparent)]
    Core(#[from] descent_core::Error),
}

pub type Result<T> = std::result::Result<T, ParseError>;

fn parse_u32(s: &str) -> Option<u32> {
    s.trim().parse().ok()
}

/// `q = p^n` with `p` prime.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut n = 0;
    let mut v = q;
    while v.is_multiple_of(p) {
        v /= p;
        n += 1;
    }
    (v == 1).then_some((p, n))
}

/// Accepts `q` (a prime power), `p^n` or `p;n;c0,...,1`.
pub fn parse_field(spec: &str) -> Result<Level> {
    let bad = || ParseError::FieldSpec(spec.to_string());
    let spec = spec.trim();
    if let Some(q) = parse_u32(spec) {
        let (p, n) = prime_power(q).ok_or_else(bad)?;
        return Ok(build_field(p, n)?);
    }
    if let Some((p, n)) = spec.split_once('^') {
        let (p, n) = (parse_u32(p).ok_or_else(bad)?, parse_u32(n).ok_or_else(bad)?);
        return Ok(build_field(p, n)?);
    }
    let parts: Vec<&str> = spec.split(';').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let p = parse_u32(parts[0]).ok_or_else(bad)?;
    let n = parse_u32(parts[1]).ok_or_else(bad)?;
    let coeffs: Vec<u32> = parts[2].split(',').map(parse_u32).collect::<Option<_>>().ok_or_else(bad)?;
    if coeffs.len() != n as usize + 1 || coeffs.last() != Some(&1) || coeffs.iter().any(|&c| c >= p) {
        return Err(bad());
    }
    let prime = FieldLevel::prime(p)?;
    if n == 1 {
        return Ok(prime);
    }
    Ok(FieldLevel::with_modulus(&prime, coeffs.into_iter().map(Elem).collect())?)
}

/// Canonical spec string `p^n` for a level.
pub fn field_spec(level: &FieldLevel) -> String {
    format!("{}^{}", level.characteristic(), level.degree())
}

pub fn parse_tower(field: &str, r: u32) -> Result<FieldTower> {
    let base = parse_field(field)?;
    Ok(FieldTower::new(&base, r)?)
}

pub fn parse_elem(level: &FieldLevel, text: &str) -> Result<Elem> {
    let bad = |reason: &str| ParseError::Element {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let digits: Vec<u32> = text
        .split(',')
        .map(parse_u32)
        .collect::<Option<_>>()
        .ok_or_else(|| bad("digits must be integers"))?;
    let n = level.degree() as usize;
    if digits.len() > n {
        return Err(bad("more digits than the field degree"));
    }
    if digits.iter().any(|&d| d >= level.characteristic()) {
        return Err(bad("digit out of range"));
    }
    let mut full = digits;
    full.resize(n, 0);
    Ok(level.from_digits(&full)?)
}

pub fn elem_text(level: &FieldLevel, x: Elem) -> String {
    level.digits(x).iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
}

/// Sparse terms `(exponents, coefficient)` read from polynomial text, with
/// the variable count set by the largest variable index used.
pub fn parse_terms(tower: &FieldTower, text: &str) -> Result<MultiPoly> {
    Parser { tower, text, bytes: text.as_bytes(), pos: 0 }.poly()
}

/// A univariate polynomial over `k_r`; rejects text with more than one
/// variable.
pub fn parse_uni(tower: &FieldTower, text: &str) -> Result<UniPoly> {
    let m = parse_terms(tower, text)?;
    if m.nvars() > 1 {
        return Err(ParseError::Poly {
            text: text.to_string(),
            pos: 0,
            reason: format!("expected one variable, found {}", m.nvars()),
        });
    }
    if m.nvars() == 0 {
        return Ok(UniPoly::constant(tower.ext(), m.coeff(&[])));
    }
    Ok(m.to_uni()?)
}

/// A polynomial in exactly `n` variables (fewer used variables are padded).
pub fn parse_multi(tower: &FieldTower, text: &str, n: usize) -> Result<MultiPoly> {
    let m = parse_terms(tower, text)?;
    if m.nvars() > n {
        return Err(ParseError::Poly {
            text: text.to_string(),
            pos: 0,
            reason: format!("uses {} variables, expected at most {n}", m.nvars()),
        });
    }
    let map: Vec<usize> = (0..m.nvars()).collect();
    Ok(m.remap_vars(n, &map))
}

struct Parser<'a> {
    tower: &'a FieldTower,
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

struct Term {
    coeff: Elem,
    exps: Vec<u32>,
}

impl Parser<'_> {
    fn err<T>(&self, reason: impl Into<String>) -> Result<T> {
        Err(ParseError::Poly {
            text: self.text.to_string(),
            pos: self.pos,
            reason: reason.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        match self.text[start..self.pos].parse() {
            Ok(v) => Ok(v),
            Err(_) => self.err("number too large"),
        }
    }

    fn poly(mut self) -> Result<MultiPoly> {
        let k = self.tower.ext();
        let mut terms: Vec<Term> = Vec::new();
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negate = true;
        }
        loop {
            let mut t = self.term()?;
            if negate {
                t.coeff = k.neg(t.coeff);
            }
            terms.push(t);
            match self.peek() {
                None => break,
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(_) => return self.err("expected '+', '-' or end of input"),
            }
            self.pos += 1;
        }
        let nvars = terms.iter().map(|t| t.exps.len()).max().unwrap_or(0);
        let mut out = MultiPoly::zero(k, nvars);
        for mut t in terms {
            t.exps.resize(nvars, 0);
            out.add_term(t.exps, t.coeff);
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Term> {
        let mut t = Term {
            coeff: Elem::ONE,
            exps: Vec::new(),
        };
        loop {
            self.factor(&mut t)?;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok(t);
            }
        }
    }

    fn exponent(&mut self) -> Result<u64> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.number()
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self, t: &mut Term) -> Result<()> {
        let k = self.tower.ext();
        let atom = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let v = self.number()?;
                k.from_int(v)
            }
            Some(b'(') => {
                self.pos += 1;
                let start = self.pos;
                let Some(len) = self.text[start..].find(')') else {
                    return self.err("unclosed '('");
                };
                self.pos = start + len + 1;
                match parse_elem(k, &self.text[start..start + len]) {
                    Ok(x) => x,
                    Err(e) => return self.err(e.to_string()),
                }
            }
            Some(b'u') => {
                self.pos += 1;
                if k.is_prime_field() {
                    return self.err("'u' needs a non-prime extension level");
                }
                k.generator()
            }
            Some(b'v') => {
                self.pos += 1;
                let b = self.tower.base();
                if b.is_prime_field() {
                    return self.err("'v' needs a non-prime base level");
                }
                b.generator()
            }
            Some(b'x') => {
                self.pos += 1;
                if self.bytes.get(self.pos) == Some(&b'_') {
                    self.pos += 1;
                }
                let idx = if self.bytes.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.number()? as usize
                } else {
                    1
                };
                if idx == 0 {
                    return self.err("variables are numbered from 1");
                }
                let e = self.exponent()?;
                if t.exps.len() < idx {
                    t.exps.resize(idx, 0);
                }
                match u32::try_from(e).ok().and_then(|e| t.exps[idx - 1].checked_add(e)) {
                    Some(v) => t.exps[idx - 1] = v,
                    None => return self.err("exponent too large"),
                }
                return Ok(());
            }
            Some(c) => return self.err(format!("unexpected character {:?}", c as char)),
            None => return self.err("unexpected end of input"),
        };
        let e = self.exponent()?;
        t.coeff = k.mul(t.coeff, k.pow(atom, e));
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_specs() {
        let f9 = parse_field("3^2").unwrap();
        assert_eq!(f9.size(), 9);
        let explicit = parse_field("3;2;1,0,1").unwrap();
        assert_eq!(explicit.modulus(), f9.modulus());
        assert!(parse_field("3;2;2,0,1").is_err(), "x^2+2 = (x-1)(x+1) over F_3");
        assert!(parse_field("4^1").is_err());
        assert!(parse_field("3^").is_err());
        assert_eq!(field_spec(&f9), "3^2");
        assert_eq!(parse_field("9").unwrap().modulus(), f9.modulus());
        assert!(parse_field("6").is_err());
        assert!(parse_field("1").is_err());
    }

    #[test]
    fn elements_round_trip() {
        let t = parse_tower("2^2", 2).unwrap();
        for x in t.ext().enumerate() {
            assert_eq!(parse_elem(t.ext(), &elem_text(t.ext(), x)).unwrap(), x);
        }
        assert!(parse_elem(t.ext(), "0,2").is_err());
        assert!(parse_elem(t.ext(), "1,0,0,0,0").is_err());
    }

    #[test]
    fn polynomials() {
        let t = parse_tower("3^1", 2).unwrap();
        let f = parse_uni(&t, "x^2 + 1").unwrap();
        assert_eq!(f.to_string(), "1 + x^2");
        let g = parse_uni(&t, "u*x - 2*u^2").unwrap();
        // -2 u^2 = -2 * (-1) = 2
        assert_eq!(g.coeffs(), &[Elem(2), t.ext().generator()]);
        let m = parse_terms(&t, "x1*x_2 + 1").unwrap();
        assert_eq!(m.nvars(), 2);
        assert_eq!(m.to_string(), "1 + x1*x2");
        assert!(parse_uni(&t, "x1*x2").is_err());
        assert!(parse_uni(&t, "x +").is_err());
        assert!(parse_uni(&t, "v*x").is_err());
        let t4 = parse_tower("2^2", 2).unwrap();
        let h = parse_uni(&t4, "x^3 + v").unwrap();
        assert_eq!(h.coeffs()[0], t4.base().generator());
    }

    #[test]
    fn display_round_trips() {
        let t = parse_tower("2^2", 2).unwrap();
        let k = t.ext();
        let f = UniPoly::new(k, vec![Elem(7), Elem(0), Elem(1), Elem(13)]).unwrap();
        assert_eq!(parse_uni(&t, &f.to_string()).unwrap(), f);
        let m = MultiPoly::from_terms(k, 2, [(vec![1, 1], Elem(5)), (vec![0, 2], Elem(1)), (vec![0, 0], Elem(3))]).unwrap();
        assert_eq!(parse_multi(&t, &m.to_string(), 2).unwrap(), m);
    }
}
