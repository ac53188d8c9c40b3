//! Sign sequences at infinity, their symmetries, equivalence, admissibility
//! and the construction of a stable field realizing a sequence.

use std::fmt;

use num::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{compute_eta, validate, QHField};
use crate::geometry::{infinite_singularities, InfinitySingularity};
use crate::poly::{int, rat, sign, BivarPoly, Rational, WeightSignature};
use crate::stability::{classify, theta_membership};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ParityCase {
    /// p and q odd
    #[serde(rename = "ODD_ODD")]
    OddOdd,
    /// q even, η(0,1) ≠ 0 (m even)
    #[serde(rename = "EVEN_Q_NO_BOUNDARY")]
    EvenQNoBoundary,
    /// q even, η(0,1) = 0 (m odd)
    #[serde(rename = "EVEN_Q_BOUNDARY")]
    EvenQBoundary,
}

impl ParityCase {
    pub fn for_weights(w: WeightSignature) -> Self {
        if w.q % 2 == 1 {
            ParityCase::OddOdd
        } else if w.m.is_multiple_of(2) {
            ParityCase::EvenQNoBoundary
        } else {
            ParityCase::EvenQBoundary
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ParityCase::OddOdd => "ODD_ODD",
            ParityCase::EvenQNoBoundary => "EVEN_Q_NO_BOUNDARY",
            ParityCase::EvenQBoundary => "EVEN_Q_BOUNDARY",
        }
    }

    /// The sign relating mirrored entries.
    pub fn twist(self, w: WeightSignature, r: u32) -> i8 {
        let neg_pow = |e: u32| if e.is_multiple_of(2) { 1 } else { -1 };
        match self {
            ParityCase::OddOdd => neg_pow(w.m - 1),
            ParityCase::EvenQNoBoundary => -1,
            ParityCase::EvenQBoundary => neg_pow(r + 1),
        }
    }
}

/// A cyclic word of 2k pairs (σ, ν), stored from index 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignSequence {
    pub k: usize,
    pub entries: Vec<(i8, i8)>,
    pub parity_case: ParityCase,
    pub twist: i8,
}

fn pm(s: i8) -> char {
    if s > 0 {
        '+'
    } else {
        '-'
    }
}

/// Parse `seq := pair ("," pair)*`, `pair := ("+"|"-")("+"|"-")`.
pub fn parse_pairs(text: &str) -> Result<Vec<(i8, i8)>> {
    let bad = |col: usize, msg: &str| Error::Parse {
        line: 1,
        column: col,
        message: msg.to_string(),
    };
    let bytes = text.trim().as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    loop {
        let pair: Vec<i8> = (0..2)
            .map(|o| match bytes.get(i + o) {
                Some(b'+') => Ok(1),
                Some(b'-') => Ok(-1),
                _ => Err(bad(i + o + 1, "expected '+' or '-'")),
            })
            .collect::<Result<_>>()?;
        out.push((pair[0], pair[1]));
        i += 2;
        match bytes.get(i) {
            None => break,
            Some(b',') => i += 1,
            Some(_) => return Err(bad(i + 1, "expected ','")),
        }
    }
    if out.len() % 2 == 1 {
        return Err(bad(bytes.len(), "a sequence has an even number of pairs"));
    }
    Ok(out)
}

impl SignSequence {
    pub fn new(entries: Vec<(i8, i8)>, parity_case: ParityCase, twist: i8) -> Self {
        SignSequence {
            k: entries.len() / 2,
            entries,
            parity_case,
            twist,
        }
    }

    /// Parse the text form in the context of weights and r.
    pub fn parse(text: &str, w: WeightSignature, r: u32) -> Result<Self> {
        let pc = ParityCase::for_weights(w);
        Ok(SignSequence::new(parse_pairs(text)?, pc, pc.twist(w, r)))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry at a 1-based cyclic index.
    pub fn at(&self, i: i64) -> (i8, i8) {
        let n = self.len() as i64;
        self.entries[((i - 1).rem_euclid(n)) as usize]
    }

    /// Number of sign changes in ν₁..ν_k.
    pub fn s(&self) -> usize {
        self.entries[..self.k].windows(2).filter(|w| w[0].1 != w[1].1).count()
    }

    pub fn with_entries(&self, entries: Vec<(i8, i8)>) -> Self {
        SignSequence {
            entries,
            ..self.clone()
        }
    }

    pub fn shift(&self) -> Self {
        let mut e = self.entries.clone();
        e.rotate_left(1);
        self.with_entries(e)
    }

    pub fn shift_by(&self, t: usize) -> Self {
        let mut e = self.entries.clone();
        if !e.is_empty() {
            let n = e.len();
            e.rotate_left(t % n);
        }
        self.with_entries(e)
    }

    pub fn reverse(&self) -> Self {
        let mut e = self.entries.clone();
        e.reverse();
        self.with_entries(e)
    }

    pub fn negated(&self) -> Self {
        self.with_entries(self.entries.iter().map(|&(a, b)| (-a, -b)).collect())
    }

    /// σ alternates cyclically and the mirror relation of the parity case holds.
    pub fn check_symmetry(&self) -> std::result::Result<(), String> {
        let n = self.len() as i64;
        let k = self.k as i64;
        if n == 0 {
            return Err("empty sequence".into());
        }
        for i in 1..=n {
            if self.at(i).0 * self.at(i + 1).0 != -1 {
                return Err(format!("sigma does not alternate at index {i}"));
            }
        }
        let t = self.twist;
        let tw = |(a, b): (i8, i8)| (t * a, t * b);
        let bad = |i: i64, j: i64| format!("entries {i} and {j} violate the {} relation", self.parity_case.name());
        match self.parity_case {
            ParityCase::OddOdd => {
                for i in 1..=k {
                    if self.at(i + k) != tw(self.at(i)) {
                        return Err(bad(i, i + k));
                    }
                }
            }
            ParityCase::EvenQNoBoundary => {
                for i in 1..=k {
                    if self.at(2 * k - i + 1) != tw(self.at(i)) {
                        return Err(bad(i, 2 * k - i + 1));
                    }
                }
            }
            ParityCase::EvenQBoundary => {
                for i in 1..k {
                    if self.at(2 * k - i) != self.at(i) {
                        return Err(bad(i, 2 * k - i));
                    }
                }
                if self.at(2 * k) != tw(self.at(k)) {
                    return Err(bad(k, 2 * k));
                }
            }
        }
        Ok(())
    }

    /// Least rotation of the sequence or its reversal, as a byte key.
    pub fn canonical_key(&self) -> Vec<u8> {
        let enc = |e: &[(i8, i8)]| -> Vec<u8> {
            e.iter()
                .map(|&(a, b)| (((a > 0) as u8) << 1) | ((b > 0) as u8))
                .collect()
        };
        let mut best: Option<Vec<u8>> = None;
        for base in [self.entries.clone(), self.reverse().entries] {
            let b = enc(&base);
            for t in 0..b.len() {
                let mut r = b.clone();
                r.rotate_left(t);
                if best.as_ref().is_none_or(|cur| r < *cur) {
                    best = Some(r);
                }
            }
        }
        best.unwrap_or_default()
    }

    pub fn canonical(&self) -> Self {
        let key = self.canonical_key();
        let e = key
            .iter()
            .map(|&v| (if v & 2 != 0 { 1 } else { -1 }, if v & 1 != 0 { 1 } else { -1 }))
            .collect();
        self.with_entries(e)
    }

    /// Some rotation of `other` equals self.
    pub fn same_shift_orbit(&self, other: &Self) -> bool {
        self.len() == other.len() && (0..self.len().max(1)).any(|t| other.shift_by(t).entries == self.entries)
    }
}

impl fmt::Display for SignSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|&(a, b)| format!("{}{}", pm(a), pm(b)))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

pub fn shift(w: &SignSequence) -> SignSequence {
    w.shift()
}

pub fn reverse(w: &SignSequence) -> SignSequence {
    w.reverse()
}

/// The sequence read off the ordered singular points at infinity.
pub fn sign_sequence(x: &QHField, points: &[InfinitySingularity]) -> Result<SignSequence> {
    if points.len() < 2 || points.len() % 2 == 1 {
        return Err(Error::SymmetryViolation(format!("{} points at infinity", points.len())));
    }
    let r = theta_membership(x.w)?.r.unwrap_or(0);
    let pc = ParityCase::for_weights(x.w);
    let seq = SignSequence::new(
        points.iter().map(|s| (s.sigma_sign, s.nu_sign)).collect(),
        pc,
        pc.twist(x.w, r),
    );
    seq.check_symmetry().map_err(Error::SymmetryViolation)?;
    Ok(seq)
}

/// J(m, r): the allowed numbers k of singular points on each half-equator.
pub fn j_set(r: u32) -> Vec<u32> {
    if r % 2 == 1 {
        (0..=r.div_ceil(2)).map(|j| 2 * j).collect()
    } else {
        (0..=r / 2).map(|j| 2 * j + 1).collect()
    }
}

/// Every sequence with 2k entries satisfying the symmetry of the weights:
/// σ₁ and ν₁..ν_k are free, the rest follows from the mirror relation.
pub fn symmetric_sequences(w: WeightSignature, r: u32, k: usize) -> Vec<SignSequence> {
    let pc = ParityCase::for_weights(w);
    let t = pc.twist(w, r);
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    for sigma1 in [1i8, -1] {
        for bits in 0u64..(1 << k) {
            let mut e = vec![(0i8, 0i8); 2 * k];
            for (i, slot) in e.iter_mut().enumerate().take(k) {
                let sg = if i % 2 == 0 { sigma1 } else { -sigma1 };
                *slot = (sg, if bits >> i & 1 == 1 { 1 } else { -1 });
            }
            for i in 1..=k {
                let (a, b) = e[i - 1];
                match pc {
                    ParityCase::OddOdd => e[i + k - 1] = (t * a, t * b),
                    ParityCase::EvenQNoBoundary => e[2 * k - i] = (t * a, t * b),
                    ParityCase::EvenQBoundary if i < k => e[2 * k - i - 1] = (a, b),
                    ParityCase::EvenQBoundary => e[2 * k - 1] = (t * a, t * b),
                }
            }
            let seq = SignSequence::new(e, pc, t);
            if seq.check_symmetry().is_ok() {
                out.push(seq);
            }
        }
    }
    out
}

pub fn is_admissible(w: &SignSequence, _w_sig: WeightSignature, r: u32) -> Result<bool> {
    let k = w.k as u32;
    if k == 0 || !j_set(r).contains(&k) {
        return Err(Error::KOutOfRange { k, r });
    }
    if w.check_symmetry().is_err() {
        return Ok(false);
    }
    if k < r + 1 || (w.s() as u32) < r {
        return Ok(true);
    }
    Ok(w.entries.iter().any(|&(s, n)| s == n))
}

pub fn are_equivalent(w1: &SignSequence, w2: &SignSequence) -> Result<bool> {
    if w1.k != w2.k || w1.parity_case != w2.parity_case {
        return Err(Error::ShapeMismatch);
    }
    Ok(w1.same_shift_orbit(w2) || w1.same_shift_orbit(&w2.reverse()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConstructionCase {
    #[serde(rename = "CASE1")]
    Case1,
    #[serde(rename = "CASE2")]
    Case2,
    #[serde(rename = "CASE3")]
    Case3,
    #[serde(rename = "CASE4")]
    Case4,
}

impl ConstructionCase {
    /// Θ₁ first, then Θ₂, Θ₃, Θ₄.
    pub fn for_weights(w: WeightSignature) -> Result<Self> {
        let t = theta_membership(w)?;
        let order = [
            ConstructionCase::Case1,
            ConstructionCase::Case2,
            ConstructionCase::Case3,
            ConstructionCase::Case4,
        ];
        (0..4)
            .find(|&i| t.in_theta[i])
            .map(|i| order[i])
            .ok_or(Error::NoR(w.p, w.q, w.m))
    }

    /// η(0,1) = 0: the last point of the half-equator sits on the y-axis.
    fn has_infinity(self) -> bool {
        matches!(self, ConstructionCase::Case3 | ConstructionCase::Case4)
    }

    /// y | η: one finite root is 0.
    fn has_zero(self) -> bool {
        matches!(self, ConstructionCase::Case2 | ConstructionCase::Case4)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepresentativeSpec {
    /// finite roots λ in ascending order
    pub lambda_values: Vec<String>,
    pub at_infinity: bool,
    pub mu_values: Vec<String>,
    pub a_sign: i8,
    pub case: ConstructionCase,
    #[serde(skip)]
    lambdas: Vec<Rational>,
    #[serde(skip)]
    mus: Vec<Rational>,
}

impl RepresentativeSpec {
    pub fn lambdas(&self) -> &[Rational] {
        &self.lambdas
    }

    pub fn mus(&self) -> &[Rational] {
        &self.mus
    }
}

fn check_target(target: &SignSequence, w: WeightSignature) -> Result<u32> {
    let r = theta_membership(w)?.r.ok_or(Error::NoR(w.p, w.q, w.m))?;
    if target.parity_case != ParityCase::for_weights(w) || target.twist != target.parity_case.twist(w, r) {
        return Err(Error::CaseMismatch(format!(
            "sequence shape {} does not fit {w}",
            target.parity_case.name()
        )));
    }
    if !is_admissible(target, w, r)? {
        return Err(Error::NotAdmissible);
    }
    Ok(r)
}

fn y_pow_minus(lambda: &Rational, p: u32, q: u32) -> BivarPoly {
    // y^p − λ^p x^q
    let mut f = BivarPoly::monomial(int(1), 0, p);
    f.add_term(q, 0, -num::pow(lambda.clone(), p as usize));
    f
}

fn product(fs: impl IntoIterator<Item = BivarPoly>) -> BivarPoly {
    fs.into_iter().fold(BivarPoly::one(), |acc, f| &acc * &f)
}

/// Deterministic root placement and sign choice for a target sequence.
pub fn default_spec(target: &SignSequence, w: WeightSignature) -> Result<RepresentativeSpec> {
    let r = check_target(target, w)?;
    let case = ConstructionCase::for_weights(w)?;
    let k = target.k as i64;
    let finite = if case.has_infinity() { k - 1 } else { k };
    if case.has_zero() && finite == 0 {
        return Err(Error::CaseMismatch(format!(
            "k = {k} leaves no finite root for the y factor at {w}"
        )));
    }
    let h = (finite + 1) / 2;
    let lambdas: Vec<Rational> = if case.has_zero() {
        (1..=finite).map(|j| int(j - h)).collect()
    } else {
        (-h..0).chain(1..=finite / 2).map(int).collect()
    };
    let mus: Vec<Rational> = (1..lambdas.len())
        .filter(|&j| target.entries[j - 1].1 != target.entries[j].1)
        .map(|j| (&lambdas[j - 1] + &lambdas[j]) / int(2))
        .collect();
    let eta1 = eta_shape(case, w, r, target.k as u32, &lambdas, &int(1));
    let sigma_unit = first_sigma(&eta1, &lambdas);
    let fmt = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect();
    Ok(RepresentativeSpec {
        lambda_values: fmt(&lambdas),
        at_infinity: case.has_infinity(),
        mu_values: fmt(&mus),
        a_sign: target.entries[0].0 * sigma_unit,
        case,
        lambdas,
        mus,
    })
}

/// η = a · B · (x^2q + y^2p)^e · ∏ (y^p − λ^p x^q) over the nonzero λ.
fn eta_shape(
    case: ConstructionCase,
    w: WeightSignature,
    r: u32,
    k: u32,
    lambdas: &[Rational],
    a: &Rational,
) -> BivarPoly {
    let (p, q) = (w.p, w.q);
    let e = (r + 1 - k) / 2;
    let pd = &BivarPoly::monomial(int(1), 2 * q, 0) + &BivarPoly::monomial(int(1), 0, 2 * p);
    let (bi, bj) = match case {
        ConstructionCase::Case1 => (0, 0),
        ConstructionCase::Case2 => (0, 1),
        ConstructionCase::Case3 => (1, 0),
        ConstructionCase::Case4 => (1, 1),
    };
    let roots = product(lambdas.iter().filter(|l| !l.is_zero()).map(|l| y_pow_minus(l, p, q)));
    (&pd.pow(e) * &roots).shift(bi, bj).scale(a)
}

/// σ of the first equator point.
fn first_sigma(eta: &BivarPoly, lambdas: &[Rational]) -> i8 {
    match lambdas.first() {
        Some(l) => sign(&eta.restrict(crate::poly::Axis::XPos).derivative().eval(l)),
        None => -sign(&eta.restrict(crate::poly::Axis::YPos).coeff(1)),
    }
}

/// A factor of weighted degree d·pq with value 1 at (0,1) and sign ε on
/// x = 1, λ ∈ [lo, hi].
fn definite_factor(d: u32, eps: i8, w: WeightSignature, lo: &Rational, hi: &Rational) -> Option<BivarPoly> {
    let (p, q) = (w.p, w.q);
    let d2 = &BivarPoly::monomial(int(2), 2 * q, 0) + &BivarPoly::monomial(int(1), 0, 2 * p);
    let lp = |c: Rational| {
        let mut f = BivarPoly::monomial(int(1), 0, p);
        f.add_term(q, 0, c);
        f
    };
    let lplus = lp(int(1) - num::pow(lo.clone(), p as usize));
    let lminus = lp(-(int(1) + num::pow(hi.clone(), p as usize)));
    match (d % 2, eps > 0) {
        (0, true) => Some(d2.pow(d / 2)),
        (0, false) if d >= 2 => Some(&(&lplus * &lminus) * &d2.pow(d / 2 - 1)),
        (0, false) => None,
        (_, true) => Some(&lplus * &d2.pow(d / 2)),
        (_, false) => Some(&lminus * &d2.pow(d / 2)),
    }
}

/// Build a stable field whose sign sequence equals `target`.
pub fn construct_representative(
    spec: &RepresentativeSpec,
    target: &SignSequence,
    w: WeightSignature,
) -> Result<QHField> {
    let r = check_target(target, w)?;
    let (p, q) = (w.p, w.q);
    let k = target.k as u32;
    let case = spec.case;
    let a = int(spec.a_sign as i64);
    let eta = eta_shape(case, w, r, k, &spec.lambdas, &a);
    let h = product(spec.mus.iter().map(|m| y_pow_minus(m, p, q)));
    let s = spec.mus.len() as u32;
    let (bi, bj) = match case {
        ConstructionCase::Case1 => (0, p - 1),
        ConstructionCase::Case2 => (0, 0),
        ConstructionCase::Case3 => (1, p - 1),
        ConstructionCase::Case4 => (1, 0),
    };
    let d = if case.has_infinity() { r - 1 } else { r }
        .checked_sub(s)
        .ok_or_else(|| Error::CaseMismatch("too many sign changes".into()))?;
    let h_sign_1 = |l: &Rational| sign(&h.eval(&int(1), l));
    // t1: the sign G must take on the finite roots (times sgn γ)
    let t1 = spec
        .lambdas
        .first()
        .map(|l| target.entries[0].1 * spec.a_sign * h_sign_1(l));
    let (lo, hi) = match (spec.lambdas.first(), spec.lambdas.last()) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => (int(0), int(0)),
    };
    let impossible = || Error::NotAdmissible;
    let (gamma, g) = if case.has_infinity() {
        let nu_k = target.entries[target.k - 1].1;
        let t2 = -nu_k * spec.a_sign;
        let t1 = t1.unwrap_or(1);
        if t2 > 0 {
            let g = definite_factor(d, 1, w, &lo, &hi).ok_or_else(impossible)?;
            (if t1 > 0 { rat(1, 2) } else { int(-1) }, g)
        } else {
            (int(2), definite_factor(d, t1, w, &lo, &hi).ok_or_else(impossible)?)
        }
    } else {
        (
            int(1),
            definite_factor(d, t1.unwrap_or(1), w, &lo, &hi).ok_or_else(impossible)?,
        )
    };
    let coef = -(&a * &gamma) / int(q as i64);
    let p_poly = (&g * &h).shift(bi, bj).scale(&coef);
    // Q = (η + q y P) / (p x)
    let num = &eta + &p_poly.shift(0, 1).scale(&int(q as i64));
    let q_poly = num
        .unshift(1, 0)
        .ok_or_else(|| Error::CaseMismatch("eta + q y P is not divisible by x".into()))?
        .scale(&(int(1) / int(p as i64)));
    validate(w, p_poly, q_poly)
}

/// Construct and check: the result is stable with an equivalent sequence.
pub fn realize(target: &SignSequence, w: WeightSignature) -> Result<QHField> {
    let spec = default_spec(target, w)?;
    let x = construct_representative(&spec, target, w)?;
    if !classify(&x).is_stable() {
        return Err(Error::CaseMismatch("constructed field is not stable".into()));
    }
    let eta = compute_eta(&x);
    let got = sign_sequence(&x, &infinite_singularities(&x, &eta))?;
    if !are_equivalent(&got, target)? {
        return Err(Error::CaseMismatch(format!(
            "constructed sequence {got} differs from {target}"
        )));
    }
    Ok(x)
}
