//! Return-map integral, the stability decision, normal forms and the Θ sets.

use num::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{compute_eta, EtaData, QHField};
use crate::numerics::integrate_adaptive;
use crate::poly::{int, sign, Axis, UnivarPoly, WeightSignature};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaMembership {
    pub in_theta: [bool; 4],
    pub r: Option<u32>,
    /// the solution of each equation, where it has one
    pub r_each: [Option<u32>; 4],
}

impl ThetaMembership {
    pub fn holds(&self, i: usize) -> bool {
        self.in_theta[i - 1]
    }

    pub fn any(&self) -> bool {
        self.in_theta.iter().any(|&b| b)
    }

    /// Θ₁ only, with no other Θ holding.
    pub fn only_first(&self) -> bool {
        self.in_theta == [true, false, false, false]
    }
}

fn exact_quotient(n: i64, d: i64) -> Option<u32> {
    (n >= 0 && n % d == 0).then(|| (n / d) as u32)
}

/// Solutions in r of the four linear equations.
pub fn theta_solutions(w: WeightSignature) -> [Option<u32>; 4] {
    let (p, q, m) = (w.p as i64, w.q as i64, w.m as i64);
    let pq = p * q;
    [
        exact_quotient(p + q + m - 1, pq).and_then(|v| v.checked_sub(1)),
        exact_quotient(p + m - 1, pq),
        exact_quotient(q + m - 1, pq),
        exact_quotient(m - 1, pq).map(|v| v + 1),
    ]
}

pub fn theta_membership(w: WeightSignature) -> Result<ThetaMembership> {
    let r_each = theta_solutions(w);
    let mut r = None;
    for v in r_each.iter().flatten() {
        match r {
            None => r = Some(*v),
            Some(prev) if prev != *v => return Err(Error::InconsistentR(r_each)),
            _ => {}
        }
    }
    Ok(ThetaMembership {
        in_theta: r_each.map(|v| v.is_some()),
        r,
        r_each,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NormalCase {
    A,
    B,
    C,
    D,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    pub case: NormalCase,
    pub r: u32,
    /// (η(0,1) ≠ 0, η(1,0) ≠ 0)
    pub boundary: (bool, bool),
}

/// Case and r via the matching equation, then the support and corner checks.
pub fn normal_form(x: &QHField, eta: &EtaData) -> Result<NormalForm> {
    let (p, q) = (x.w.p, x.w.q);
    let b0 = !eta.eta_0_pos.is_zero();
    let b1 = !eta.eta.restrict(Axis::XPos).coeff(0).is_zero();
    let sol = theta_solutions(x.w);
    let (case, idx, name) = match (b0, b1) {
        (true, true) => (NormalCase::A, 0, "A"),
        (true, false) => (NormalCase::B, 1, "B"),
        (false, true) => (NormalCase::C, 2, "C"),
        (false, false) => (NormalCase::D, 3, "D"),
    };
    let r = sol[idx].ok_or(Error::NoIntegerR(name))?;
    // (x offset, y offset, number of blocks - 1): η = x^a y^b Σ c (x^q)^l (y^p)^(n-l)
    let (a, b, n) = match case {
        NormalCase::A => (0, 0, r + 1),
        NormalCase::B => (0, 1, r),
        NormalCase::C => (1, 0, r),
        NormalCase::D => (1, 1, r - 1),
    };
    for (i, j, _) in eta.eta.terms() {
        let fits = i >= a && j >= b && (i - a) % q == 0 && (j - b) % p == 0 && (i - a) / q + (j - b) / p == n;
        if !fits {
            return Err(Error::PatternViolation(format!(
                "eta has monomial x^{i} y^{j} outside the case {name} pattern"
            )));
        }
    }
    let corners = [(a, b + n * p), (a + n * q, b)];
    for (i, j) in corners {
        if eta.eta.coeff(i, j).is_zero() {
            return Err(Error::PatternViolation(format!(
                "corner coefficient c_{{{i},{j}}} of eta vanishes"
            )));
        }
    }
    Ok(NormalForm {
        case,
        r,
        boundary: (b0, b1),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReturnIntegral {
    pub value: f64,
    pub sign: i8,
    pub error_bound: f64,
    pub ambiguous: bool,
    /// the integrand is exactly odd, so the value is exactly zero
    pub exact_odd: bool,
}

impl ReturnIntegral {
    pub fn from_value(value: f64, error_bound: f64, tol: f64) -> Self {
        let ambiguous = value.abs() <= tol;
        ReturnIntegral {
            value,
            sign: if ambiguous {
                0
            } else if value > 0.0 {
                1
            } else {
                -1
            },
            error_bound,
            ambiguous,
            exact_odd: false,
        }
    }
}

/// Numerator p·ξ(1,u) and denominator (p + q u^(2p))·η(1,u) of the
/// return-map integrand.
pub fn integrand_parts(x: &QHField, eta: &EtaData) -> (UnivarPoly, UnivarPoly) {
    let (p, q) = (x.w.p, x.w.q);
    let num = x.xi().restrict(Axis::XPos).scale(&int(p as i64));
    let weight = &UnivarPoly::constant(int(p as i64)) + &UnivarPoly::monomial(int(q as i64), 2 * p as usize);
    let den = &weight * &eta.eta.restrict(Axis::XPos);
    (num, den)
}

/// N(u)/D(u) changes sign under u ↦ -u.
pub fn integrand_is_odd(num: &UnivarPoly, den: &UnivarPoly) -> bool {
    let lhs = &num.reflect() * den;
    let rhs = num * &den.reflect();
    (&lhs + &rhs).is_zero()
}

/// ∫ N(u)/D(u) du over the real line, computed as ∫ N_h(s,c) c^e / D_h(s,c) dθ
/// with u = tan θ; both homogenized forms stay bounded on the circle.
/// The result is the logarithmic gain of r over one turn in θ.
pub fn integrate_rational_line(num: &UnivarPoly, den: &UnivarPoly, tol: f64) -> (f64, f64) {
    let n: Vec<f64> = num.to_f64_coeffs();
    let d: Vec<f64> = den.to_f64_coeffs();
    let dn = n.len().saturating_sub(1) as i32;
    let dd = d.len() as i32 - 1;
    let e = dd - dn - 2;
    assert!(e >= 0, "integrand does not decay like u^-2");
    let homog = |c: &[f64], deg: i32, s: f64, co: f64| -> f64 {
        // Σ c_i s^i co^(deg - i), Horner in the ratio is unstable near co = 0
        c.iter()
            .enumerate()
            .map(|(i, a)| a * s.powi(i as i32) * co.powi(deg - i as i32))
            .sum()
    };
    let f = |t: f64| {
        let (s, co) = t.sin_cos();
        homog(&n, dn, s, co) * co.powi(e) / homog(&d, dd, s, co)
    };
    let half = std::f64::consts::FRAC_PI_2;
    let r = integrate_adaptive(f, -half, half, tol / 4.0);
    (r.value, r.error)
}

pub fn return_integral(x: &QHField, eta: &EtaData, tol: f64) -> Result<ReturnIntegral> {
    if !eta.pos_roots.is_empty() {
        return Err(Error::HypothesisViolated("eta(1,u) has a real root"));
    }
    if eta.eta_0_pos.is_zero() {
        return Err(Error::HypothesisViolated("eta(0,1) = 0"));
    }
    let (num, den) = integrand_parts(x, eta);
    if num.is_zero() || integrand_is_odd(&num, &den) {
        return Ok(ReturnIntegral {
            value: 0.0,
            sign: 0,
            error_bound: 0.0,
            ambiguous: true,
            exact_odd: true,
        });
    }
    let (value, err) = integrate_rational_line(&num, &den, tol);
    // orient along forward time; η has the sign of η(0,1) everywhere off the origin
    let orient = sign(&eta.eta_0_pos) as f64;
    Ok(ReturnIntegral::from_value(orient * value, err, tol))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "STABLE")]
    Stable,
    #[serde(rename = "UNSTABLE_IN_FAMILY")]
    UnstableInFamily,
    #[serde(rename = "DEGENERATE_RADIAL")]
    DegenerateRadial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Portrait {
    #[serde(rename = "GLOBAL_CENTER")]
    GlobalCenter,
    #[serde(rename = "GLOBAL_STABLE_FOCUS")]
    GlobalStableFocus,
    #[serde(rename = "GLOBAL_UNSTABLE_FOCUS")]
    GlobalUnstableFocus,
    #[serde(rename = "SECTORED")]
    Sectored,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Stable => "STABLE",
            Verdict::UnstableInFamily => "UNSTABLE_IN_FAMILY",
            Verdict::DegenerateRadial => "DEGENERATE_RADIAL",
        }
    }
}

impl Portrait {
    pub fn name(self) -> &'static str {
        match self {
            Portrait::GlobalCenter => "GLOBAL_CENTER",
            Portrait::GlobalStableFocus => "GLOBAL_STABLE_FOCUS",
            Portrait::GlobalUnstableFocus => "GLOBAL_UNSTABLE_FOCUS",
            Portrait::Sectored => "SECTORED",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Reason {
    #[serde(rename = "RADIAL")]
    Radial,
    #[serde(rename = "CENTER_INTEGRAL_ZERO")]
    CenterIntegralZero,
    #[serde(rename = "CENTER_CERTIFIED_ODD")]
    CenterCertifiedOdd,
    #[serde(rename = "MULTIPLE_ROOT")]
    MultipleRoot,
    #[serde(rename = "BOUNDARY_ROOT_NOT_SIMPLE")]
    BoundaryRootNotSimple,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityVerdict {
    pub verdict: Verdict,
    /// absent only for the radial field
    pub portrait: Option<Portrait>,
    pub integral: Option<ReturnIntegral>,
    pub reasons: Vec<Reason>,
}

impl StabilityVerdict {
    pub fn is_stable(&self) -> bool {
        self.verdict == Verdict::Stable
    }
}

pub fn classify(x: &QHField) -> StabilityVerdict {
    classify_with(x, &compute_eta(x), DEFAULT_TOL)
}

pub fn classify_with(x: &QHField, eta: &EtaData, tol: f64) -> StabilityVerdict {
    if eta.identically_zero {
        return StabilityVerdict {
            verdict: Verdict::DegenerateRadial,
            portrait: None,
            integral: None,
            reasons: vec![Reason::Radial],
        };
    }
    if eta.is_rootless() {
        let integral = return_integral(x, eta, tol).expect("hypothesis checked");
        let (verdict, portrait, reasons) = match integral.sign {
            1 => (Verdict::Stable, Portrait::GlobalUnstableFocus, vec![]),
            -1 => (Verdict::Stable, Portrait::GlobalStableFocus, vec![]),
            _ => {
                let mut reasons = vec![Reason::CenterIntegralZero];
                if integral.exact_odd {
                    reasons.push(Reason::CenterCertifiedOdd);
                }
                (Verdict::UnstableInFamily, Portrait::GlobalCenter, reasons)
            }
        };
        return StabilityVerdict {
            verdict,
            portrait: Some(portrait),
            integral: Some(integral),
            reasons,
        };
    }
    let mut reasons = Vec::new();
    if eta.pos_roots.iter().any(|r| r.multiplicity > 1) {
        reasons.push(Reason::MultipleRoot);
    }
    if eta.eta_0_pos.is_zero() && eta.dx_at_y_pos().is_zero() {
        reasons.push(Reason::BoundaryRootNotSimple);
    }
    StabilityVerdict {
        verdict: if reasons.is_empty() {
            Verdict::Stable
        } else {
            Verdict::UnstableInFamily
        },
        portrait: Some(Portrait::Sectored),
        integral: None,
        reasons,
    }
}
