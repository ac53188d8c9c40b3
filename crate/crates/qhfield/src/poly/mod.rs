//! Exact polynomial arithmetic over the rationals, weighted degrees and
//! real root isolation.

mod bivar;
mod roots;
mod univar;

pub use bivar::{Axis, BivarPoly, WeightedDegree};
pub use roots::{isolate_real_roots, refine_until_sign, IsolatedRoot};
pub use univar::{univar_gcd, UnivarPoly};

use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator or denominator overflowed f64; scale down bitwise
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = (n - d).clamp(-1000, 1000);
        let scaled = if shift >= 0 {
            r / Rational::from_integer(BigInt::from(1) << (shift as usize))
        } else {
            r * Rational::from_integer(BigInt::from(1) << ((-shift) as usize))
        };
        scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
    })
}

/// Parse an optional sign, an integer and an optional `/denominator`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let digits = num.strip_prefix(['+', '-']).unwrap_or(num);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let n: BigInt = num.trim_start_matches('+').parse().ok()?;
    let d: BigInt = match den {
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            d.parse().ok()?
        }
        None => BigInt::from(1),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Weights and degree of a quasihomogeneous family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightSignature {
    pub p: u32,
    pub q: u32,
    pub m: u32,
}

impl WeightSignature {
    pub const fn new(p: u32, q: u32, m: u32) -> Self {
        WeightSignature { p, q, m }
    }

    /// Weighted degree of P, that is p - 1 + m.
    pub fn p_degree(&self) -> u32 {
        self.p - 1 + self.m
    }

    /// Weighted degree of Q, that is q - 1 + m.
    pub fn q_degree(&self) -> u32 {
        self.q - 1 + self.m
    }

    /// Weighted degree of eta, that is p + q + m - 1.
    pub fn eta_degree(&self) -> u32 {
        self.p + self.q + self.m - 1
    }
}

impl std::fmt::Display for WeightSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.p, self.q, self.m)
    }
}
