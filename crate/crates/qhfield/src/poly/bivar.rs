use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, One, Signed, Zero};

use super::{to_f64, Rational, UnivarPoly};

/// The four directions used to restrict a bivariate polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    /// f(1, u)
    XPos,
    /// f(-1, u)
    XNeg,
    /// f(v, 1)
    YPos,
    /// f(v, -1)
    YNeg,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::XPos => "X_POS",
            Axis::XNeg => "X_NEG",
            Axis::YPos => "Y_POS",
            Axis::YNeg => "Y_NEG",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightedDegree {
    Zero,
    Homogeneous(u32),
    Mixed,
}

impl WeightedDegree {
    pub fn value(self) -> Option<u32> {
        match self {
            WeightedDegree::Homogeneous(d) => Some(d),
            _ => None,
        }
    }
}

/// Sparse polynomial in x, y: exponent pair (i, j) to coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0, 0)
    }

    pub fn monomial(c: Rational, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, u32, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(i, j, c)| (i, j, super::int(c))))
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn weighted_degree(&self, p: u32, q: u32) -> WeightedDegree {
        let mut degs = self.terms.keys().map(|&(i, j)| p * i + q * j);
        match degs.next() {
            None => WeightedDegree::Zero,
            Some(d) => {
                if degs.all(|e| e == d) {
                    WeightedDegree::Homogeneous(d)
                } else {
                    WeightedDegree::Mixed
                }
            }
        }
    }

    /// Split by weighted degree.
    pub fn weighted_components(&self, p: u32, q: u32) -> BTreeMap<u32, BivarPoly> {
        let mut out: BTreeMap<u32, BivarPoly> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            out.entry(p * i + q * j).or_default().add_term(i, j, c.clone());
        }
        out
    }

    pub fn restrict(&self, axis: Axis) -> UnivarPoly {
        let n = self
            .terms
            .keys()
            .map(|&(i, j)| match axis {
                Axis::XPos | Axis::XNeg => j,
                Axis::YPos | Axis::YNeg => i,
            })
            .max()
            .map_or(0, |d| d as usize + 1);
        let mut v = vec![Rational::zero(); n];
        for (&(i, j), c) in &self.terms {
            let (k, flip) = match axis {
                Axis::XPos => (j, false),
                Axis::XNeg => (j, i % 2 == 1),
                Axis::YPos => (i, false),
                Axis::YNeg => (i, j % 2 == 1),
            };
            if flip {
                v[k as usize] -= c;
            } else {
                v[k as usize] += c;
            }
        }
        UnivarPoly::new(v)
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * num::pow(x.clone(), i as usize) * num::pow(y.clone(), j as usize);
        }
        acc
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| to_f64(c) * x.powi(i as i32) * y.powi(j as i32))
            .sum()
    }

    pub fn to_f64_terms(&self) -> Vec<(i32, i32, f64)> {
        self.terms
            .iter()
            .map(|(&(i, j), c)| (i as i32, j as i32, to_f64(c)))
            .collect()
    }

    pub fn dx(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(&(i, _), _)| i > 0)
                .map(|(&(i, j), c)| (i - 1, j, c * Rational::from_integer(BigInt::from(i)))),
        )
    }

    pub fn dy(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(&(_, j), _)| j > 0)
                .map(|(&(i, j), c)| (i, j - 1, c * Rational::from_integer(BigInt::from(j)))),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), a)| (i, j, a * c)))
    }

    pub fn shift(&self, di: u32, dj: u32) -> Self {
        BivarPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i + di, j + dj), c.clone()))
                .collect(),
        }
    }

    /// Divide by x^di y^dj, if every term allows it.
    pub fn unshift(&self, di: u32, dj: u32) -> Option<Self> {
        if self.terms.keys().any(|&(i, j)| i < di || j < dj) {
            return None;
        }
        Some(BivarPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i - di, j - dj), c.clone()))
                .collect(),
        })
    }

    /// Exchange x and y.
    pub fn swap_xy(&self) -> Self {
        BivarPoly {
            terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
        }
    }

    /// Largest a with x^a dividing every term (0 for the zero polynomial).
    pub fn x_order(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).min().unwrap_or(0)
    }

    pub fn y_order(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).min().unwrap_or(0)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// f(l^p x, l^q y)
    pub fn weighted_scale(&self, l: &Rational, p: u32, q: u32) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(&(i, j), c)| (i, j, c * num::pow(l.clone(), (p * i + q * j) as usize))),
        )
    }

    pub fn support(&self) -> Vec<(u32, u32)> {
        self.terms.keys().copied().collect()
    }
}

impl Add for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl Sub for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, -c.clone());
        }
        out
    }
}

impl Mul for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }
}

impl Neg for BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        BivarPoly {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

fn write_var(f: &mut fmt::Formatter<'_>, v: char, e: u32) -> fmt::Result {
    match e {
        0 => Ok(()),
        1 => write!(f, "{v}"),
        _ => write!(f, "{v}^{e}"),
    }
}

/// Renders in the EXPR grammar, highest total degree first.
impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|k| std::cmp::Reverse((k.0 + k.1, k.0)));
        for (n, key) in keys.iter().enumerate() {
            let c = &self.terms[key];
            let neg = c.is_negative();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let a = c.abs();
            let bare = key.0 == 0 && key.1 == 0;
            if !a.is_one() || bare {
                write!(f, "{a}")?;
            }
            write_var(f, 'x', key.0)?;
            write_var(f, 'y', key.1)?;
        }
        Ok(())
    }
}
