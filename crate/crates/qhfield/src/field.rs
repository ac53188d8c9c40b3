//! Fields in H_pqm: membership, weight normalization, validation and η.

use num::{Integer, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{
    int, isolate_real_roots, univar_gcd, Axis, BivarPoly, IsolatedRoot, Rational, WeightSignature, WeightedDegree,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub nonempty: bool,
    pub k1: u32,
    pub k2: u32,
    pub coefficient_dimension: u32,
}

/// Monomials x^i y^j with p·i + q·j = d.
pub fn monomials_of_degree(p: u32, q: u32, d: u32) -> Vec<(u32, u32)> {
    (0..=d / p)
        .filter_map(|i| {
            let rest = d - p * i;
            rest.is_multiple_of(q).then_some((i, rest / q))
        })
        .collect()
}

pub fn check_membership(w: WeightSignature) -> MembershipReport {
    let k1 = monomials_of_degree(w.p, w.q, w.p_degree()).len() as u32;
    let k2 = monomials_of_degree(w.p, w.q, w.q_degree()).len() as u32;
    MembershipReport {
        nonempty: k1 >= 1 && k2 >= 1,
        k1,
        k2,
        coefficient_dimension: k1 + k2,
    }
}

/// Divide out gcd(p, q) and put the odd weight first.
pub fn normalize_weights(p: u32, q: u32, m: u32) -> Result<WeightSignature> {
    let (w, _) = normalize_with_swap(p, q, m)?;
    Ok(w)
}

/// As [`normalize_weights`], also reporting whether the axes were swapped.
pub fn normalize_with_swap(p: u32, q: u32, m: u32) -> Result<(WeightSignature, bool)> {
    if p == 0 || q == 0 || m == 0 {
        return Err(Error::BadWeights);
    }
    let k = p.gcd(&q);
    if !(m - 1).is_multiple_of(k) {
        return Err(Error::IndivisibleDegree { k, m_minus_1: m - 1 });
    }
    let (p, q, m) = (p / k, q / k, 1 + (m - 1) / k);
    if p % 2 == 0 {
        Ok((WeightSignature::new(q, p, m), true))
    } else {
        Ok((WeightSignature::new(p, q, m), false))
    }
}

/// A validated quasihomogeneous field with coprime components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QHField {
    pub w: WeightSignature,
    pub p_poly: BivarPoly,
    pub q_poly: BivarPoly,
}

fn degree_text(d: WeightedDegree) -> String {
    match d {
        WeightedDegree::Zero => "zero".into(),
        WeightedDegree::Homogeneous(d) => d.to_string(),
        WeightedDegree::Mixed => "mixed".into(),
    }
}

pub fn validate(w: WeightSignature, p_poly: BivarPoly, q_poly: BivarPoly) -> Result<QHField> {
    if p_poly.is_zero() && q_poly.is_zero() {
        return Err(Error::BothZero);
    }
    for (which, poly, expected) in [("P", &p_poly, w.p_degree()), ("Q", &q_poly, w.q_degree())] {
        let d = poly.weighted_degree(w.p, w.q);
        if d != WeightedDegree::Zero && d != WeightedDegree::Homogeneous(expected) {
            return Err(Error::WrongDegree {
                which,
                expected,
                found: degree_text(d),
            });
        }
    }
    if let Some(reason) = common_factor(&p_poly, &q_poly) {
        return Err(Error::NotCoprime(reason));
    }
    Ok(QHField { w, p_poly, q_poly })
}

/// A quasihomogeneous polynomial splits into powers of x and y times factors
/// seen by its restriction to x = 1, so the three checks below are complete.
fn common_factor(a: &BivarPoly, b: &BivarPoly) -> Option<String> {
    if a.is_zero() || b.is_zero() {
        return Some("one component is zero".into());
    }
    if a.x_order() > 0 && b.x_order() > 0 {
        return Some("x".into());
    }
    if a.y_order() > 0 && b.y_order() > 0 {
        return Some("y".into());
    }
    let g = univar_gcd(&a.restrict(Axis::XPos), &b.restrict(Axis::XPos)).ok()?;
    (g.degree().unwrap_or(0) > 0).then(|| format!("factor with restriction {g}"))
}

impl QHField {
    /// Normalize weights (and swap axes when needed), then validate.
    pub fn from_raw(p: u32, q: u32, m: u32, p_poly: BivarPoly, q_poly: BivarPoly) -> Result<Self> {
        let (w, swapped) = normalize_with_swap(p, q, m)?;
        if swapped {
            validate(w, q_poly.swap_xy(), p_poly.swap_xy())
        } else {
            validate(w, p_poly, q_poly)
        }
    }

    pub fn scaled(&self, c: &Rational) -> Result<Self> {
        validate(self.w, self.p_poly.scale(c), self.q_poly.scale(c))
    }

    pub fn eta(&self) -> BivarPoly {
        let p = int(self.w.p as i64);
        let q = int(self.w.q as i64);
        let a = (&BivarPoly::x() * &self.q_poly).scale(&p);
        let b = (&BivarPoly::y() * &self.p_poly).scale(&q);
        &a - &b
    }

    /// ξ = x^(2q-1) P + y^(2p-1) Q
    pub fn xi(&self) -> BivarPoly {
        let a = self.p_poly.shift(2 * self.w.q - 1, 0);
        let b = self.q_poly.shift(0, 2 * self.w.p - 1);
        &a + &b
    }
}

#[derive(Clone, Debug)]
pub struct EtaData {
    pub eta: BivarPoly,
    /// zeros of η(1,u), ascending
    pub pos_roots: Vec<IsolatedRoot>,
    /// zeros of η(-1,u), descending
    pub neg_roots: Vec<IsolatedRoot>,
    pub eta_0_pos: Rational,
    pub eta_0_neg: Rational,
    pub identically_zero: bool,
}

impl EtaData {
    /// Coefficient of x in η(x, 1).
    pub fn dx_at_y_pos(&self) -> Rational {
        self.eta.restrict(Axis::YPos).coeff(1)
    }

    pub fn dx_at_y_neg(&self) -> Rational {
        self.eta.restrict(Axis::YNeg).coeff(1)
    }

    pub fn boundary_vanishes(&self) -> bool {
        self.eta_0_pos.is_zero()
    }

    pub fn is_rootless(&self) -> bool {
        self.pos_roots.is_empty() && !self.eta_0_pos.is_zero()
    }
}

pub fn compute_eta(x: &QHField) -> EtaData {
    let eta = x.eta();
    if eta.is_zero() {
        return EtaData {
            eta,
            pos_roots: Vec::new(),
            neg_roots: Vec::new(),
            eta_0_pos: Rational::zero(),
            eta_0_neg: Rational::zero(),
            identically_zero: true,
        };
    }
    let pos_roots = isolate_real_roots(&eta.restrict(Axis::XPos)).expect("eta is nonzero");
    let mut neg_roots = isolate_real_roots(&eta.restrict(Axis::XNeg)).expect("eta is nonzero");
    neg_roots.reverse();
    let eta_0_pos = eta.restrict(Axis::YPos).coeff(0);
    let eta_0_neg = eta.restrict(Axis::YNeg).coeff(0);
    EtaData {
        eta,
        pos_roots,
        neg_roots,
        eta_0_pos,
        eta_0_neg,
        identically_zero: false,
    }
}

pub fn is_radial(x: &QHField) -> bool {
    x.eta().is_zero()
}
