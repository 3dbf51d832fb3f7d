//! Polynomials over field levels.

pub mod dense;
mod multi;
mod uni;

use alloc::string::String;
use core::fmt;

pub use multi::MultiPoly;
pub use uni::UniPoly;

use crate::gf::{Elem, FieldLevel};

/// Prime-field elements print as integers, others as their parenthesized
/// base-`p` digit vector, lowest first.
pub(crate) fn fmt_elem(f: &mut fmt::Formatter<'_>, level: &FieldLevel, x: Elem) -> fmt::Result {
    if x.0 < level.characteristic() {
        return write!(f, "{}", x.0);
    }
    f.write_str("(")?;
    for (i, d) in level.digits(x).iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{d}")?;
    }
    f.write_str(")")
}

/// Text form of a single element, as used inside polynomial text.
pub fn elem_to_string(level: &FieldLevel, x: Elem) -> String {
    struct W<'a>(&'a FieldLevel, Elem);
    impl fmt::Display for W<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            fmt_elem(f, self.0, self.1)
        }
    }
    alloc::format!("{}", W(level, x))
}
