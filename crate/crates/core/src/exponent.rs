//! The family exponent: a finite real `p >= 1` or infinity.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    /// Validates `p >= 1`; `f64::INFINITY` maps to `Infinity`.
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            Err(Error::InvalidExponent { p })
        } else if p.is_infinite() {
            Ok(Exponent::Infinity)
        } else {
            Ok(Exponent::Finite(p))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts a decimal literal or the token `inf` (case-insensitive).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") {
            return Ok(Exponent::Infinity);
        }
        match t.parse::<f64>() {
            Ok(p) => Exponent::new(p),
            Err(_) => Err(Error::InvalidExponent { p: f64::NAN }),
        }
    }
}
