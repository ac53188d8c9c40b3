use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, Integer, One, Signed, Zero};

use super::{sign, to_f64, Rational};
use crate::error::{Error, Result};

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UnivarPoly {
    coeffs: Vec<Rational>,
}

impl UnivarPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UnivarPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| super::int(v)).collect())
    }

    pub fn zero() -> Self {
        UnivarPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The monomial c·u^n.
    pub fn monomial(c: Rational, n: usize) -> Self {
        let mut v = vec![Rational::zero(); n + 1];
        v[n] = c;
        Self::new(v)
    }

    /// u - a
    pub fn linear_root(a: &Rational) -> Self {
        Self::new(vec![-a.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> i8 {
        sign(&self.eval(x))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |d, _| d.derivative())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// p(-u)
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        self.scale(&(Rational::one() / l))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient; `None` if the division leaves a remainder.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Squarefree decomposition (Yun): pairs (f_i, i) with self = c·∏ f_i^i.
    pub fn square_free_decomposition(&self) -> Vec<(UnivarPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = gcd_monic(&f, &df);
        let mut b = f.exact_div(&a0).unwrap();
        let mut c = df.exact_div(&a0).unwrap();
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = gcd_monic(&b, &d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a).unwrap();
            c = d.exact_div(&a).unwrap();
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// The squarefree part, monic.
    pub fn square_free_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = gcd_monic(self, &self.derivative());
        self.exact_div(&g).unwrap().monic()
    }

    /// Coefficients of the primitive integer multiple with positive leading term.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &l).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let s = if self.leading().is_negative() { -g } else { g };
        ints.into_iter().map(|c| c / &s).collect()
    }

    /// Sturm sequence of a squarefree polynomial.
    pub fn sturm_sequence(&self) -> Vec<UnivarPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            // keep the remainder small: only its sign pattern matters
            let r = -r;
            let scaled = Self::new(r.primitive_integer().into_iter().map(Rational::from_integer).collect());
            let scaled = if r.leading().is_negative() { -scaled } else { scaled };
            seq.push(scaled);
        }
        seq
    }
}

pub(crate) fn sign_variations(seq: &[UnivarPoly], x: &Rational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in seq {
        let s = p.sign_at(x);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

fn gcd_monic(a: &UnivarPoly, b: &UnivarPoly) -> UnivarPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b);
        a = b;
        b = r.monic();
    }
    a.monic()
}

/// Monic greatest common divisor over the rationals.
pub fn univar_gcd(a: &UnivarPoly, b: &UnivarPoly) -> Result<UnivarPoly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    Ok(gcd_monic(a, b))
}

impl Add for &UnivarPoly {
    type Output = UnivarPoly;
    fn add(self, rhs: &UnivarPoly) -> UnivarPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UnivarPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UnivarPoly {
    type Output = UnivarPoly;
    fn sub(self, rhs: &UnivarPoly) -> UnivarPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UnivarPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UnivarPoly {
    type Output = UnivarPoly;
    fn mul(self, rhs: &UnivarPoly) -> UnivarPoly {
        if self.is_zero() || rhs.is_zero() {
            return UnivarPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UnivarPoly::new(out)
    }
}

impl Neg for UnivarPoly {
    type Output = UnivarPoly;
    fn neg(self) -> UnivarPoly {
        UnivarPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl fmt::Display for UnivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = a.is_one();
            if !unit || i == 0 {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "u")?,
                _ => write!(f, "u^{i}")?,
            }
        }
        Ok(())
    }
}
