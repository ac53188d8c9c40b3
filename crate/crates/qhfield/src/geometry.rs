//! Compactified geometry: (p,q)-trigonometric functions, infinite singular
//! points, invariant curves, origin sectors and the circle integral.

use std::ops::ControlFlow;

use num::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{EtaData, QHField};
use crate::numerics::Dopri5;
use crate::poly::{refine_until_sign, sign, Axis, IsolatedRoot, Rational, WeightSignature};
use crate::stability::ReturnIntegral;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrigState {
    pub z: f64,
    pub omega: f64,
    pub phi: f64,
    pub period: f64,
}

/// 𝒯 = 2 p^(-1/2q) q^(-1/2p) Γ(1/2p) Γ(1/2q) / Γ(1/2p + 1/2q)
pub fn period(p: u32, q: u32) -> f64 {
    let (a, b) = (1.0 / (2 * p) as f64, 1.0 / (2 * q) as f64);
    2.0 * (p as f64).powf(-b) * (q as f64).powf(-a) * libm::tgamma(a) * libm::tgamma(b) / libm::tgamma(a + b)
}

fn trig_rhs(p: u32, q: u32) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
    move |_, y| [-y[1].powi(2 * p as i32 - 1), y[0].powi(2 * q as i32 - 1)]
}

pub fn trig_start(p: u32, q: u32) -> [f64; 2] {
    [(p as f64).powf(-1.0 / (2 * q) as f64), 0.0]
}

pub fn pq_trig(w: WeightSignature, phi: f64) -> TrigState {
    let y = Dopri5::default().integrate(&trig_rhs(w.p, w.q), 0.0, trig_start(w.p, w.q), phi);
    TrigState {
        z: y[0],
        omega: y[1],
        phi,
        period: period(w.p, w.q),
    }
}

/// Samples (φ, Cs φ, Sn φ) at every accepted step over [0, φ_end].
pub fn trig_orbit(p: u32, q: u32, phi_end: f64) -> Vec<(f64, f64, f64)> {
    let mut out = vec![(0.0, trig_start(p, q)[0], 0.0)];
    Dopri5::default().solve(&trig_rhs(p, q), 0.0, trig_start(p, q), phi_end, |t, y| {
        out.push((t, y[0], y[1]));
        ControlFlow::Continue(())
    });
    out
}

/// Time of the first upward crossing of ω = 0 after leaving the start,
/// located by bisection inside the step that brackets it.
pub fn first_return_period(p: u32, q: u32) -> f64 {
    let f = trig_rhs(p, q);
    let solver = Dopri5::default();
    let mut prev = (0.0, trig_start(p, q));
    let mut bracket = None;
    let guess = period(p, q);
    solver.solve(&f, 0.0, trig_start(p, q), 2.0 * guess, |t, y| {
        // the orbit is counterclockwise; the return crosses ω = 0 from below
        if prev.1[1] < 0.0 && y[1] >= 0.0 && y[0] > 0.0 {
            bracket = Some((prev.0, prev.1, t));
            return ControlFlow::Break(());
        }
        prev = (t, *y);
        ControlFlow::Continue(())
    });
    let (t0, y0, t1) = bracket.expect("the (p,q)-trigonometric orbit is periodic");
    let (mut lo, mut hi) = (0.0, t1 - t0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (ym, _) = solver.step(&f, t0, &y0, mid);
        if ym[1] < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * t1 {
            break;
        }
    }
    t0 + 0.5 * (lo + hi)
}

/// ∮ ξ/η dφ over one period of (Cs φ, Sn φ), oriented along forward time.
pub fn circle_integral(x: &QHField, eta: &EtaData, tol: f64) -> Result<ReturnIntegral> {
    if !eta.is_rootless() {
        return Err(Error::HypothesisViolated("eta vanishes off the origin"));
    }
    let (p, q) = (x.w.p, x.w.q);
    let xi = x.xi().to_f64_terms();
    let et = eta.eta.to_f64_terms();
    let ev =
        |t: &[(i32, i32, f64)], a: f64, b: f64| -> f64 { t.iter().map(|&(i, j, c)| c * a.powi(i) * b.powi(j)).sum() };
    let f = move |_: f64, y: &[f64; 3]| {
        [
            -y[1].powi(2 * p as i32 - 1),
            y[0].powi(2 * q as i32 - 1),
            ev(&xi, y[0], y[1]) / ev(&et, y[0], y[1]),
        ]
    };
    let s0 = trig_start(p, q);
    let solver = Dopri5 {
        atol: (tol * 1e-3).min(1e-13),
        rtol: 1e-12,
        ..Dopri5::default()
    };
    let y = solver.integrate(&f, 0.0, [s0[0], s0[1], 0.0], period(p, q));
    let orient = sign(&eta.eta_0_pos) as f64;
    let mut r = ReturnIntegral::from_value(orient * y[2], tol, tol);
    r.error_bound = tol;
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingularityKind {
    #[serde(rename = "SADDLE")]
    Saddle,
    #[serde(rename = "STABLE_NODE")]
    StableNode,
    #[serde(rename = "UNSTABLE_NODE")]
    UnstableNode,
    #[serde(rename = "SADDLE_NODE")]
    SaddleNode,
}

impl SingularityKind {
    pub fn name(self) -> &'static str {
        match self {
            SingularityKind::Saddle => "SADDLE",
            SingularityKind::StableNode => "STABLE_NODE",
            SingularityKind::UnstableNode => "UNSTABLE_NODE",
            SingularityKind::SaddleNode => "SADDLE_NODE",
        }
    }

    pub fn is_node(self) -> bool {
        matches!(self, SingularityKind::StableNode | SingularityKind::UnstableNode)
    }

    fn from_signs(sigma: i8, nu: i8, multiplicity: usize) -> Self {
        if multiplicity.is_multiple_of(2) {
            SingularityKind::SaddleNode
        } else if sigma != nu {
            SingularityKind::Saddle
        } else if nu < 0 {
            SingularityKind::StableNode
        } else {
            SingularityKind::UnstableNode
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfinitySingularity {
    pub chart: Axis,
    /// None is the point at the end of the y-axis
    pub lambda: Option<IsolatedRoot>,
    pub multiplicity: usize,
    pub kind: SingularityKind,
    /// sign of the eigenvalue along the equator
    pub sigma_sign: i8,
    /// sign of the radial eigenvalue
    pub nu_sign: i8,
}

impl InfinitySingularity {
    pub fn lambda_approx(&self) -> Option<f64> {
        self.lambda.as_ref().map(IsolatedRoot::approx)
    }
}

fn x_chart_point(x: &QHField, eta: &EtaData, chart: Axis, root: &IsolatedRoot) -> InfinitySingularity {
    let k = root.multiplicity;
    let d = eta.eta.restrict(chart).nth_derivative(k);
    let p1 = x.p_poly.restrict(chart);
    let ds = refine_until_sign(root, &d).expect("k-th derivative is nonzero at a k-fold root");
    // P(±1, λ) ≠ 0 at a root of η by coprimality
    let ps = refine_until_sign(root, &p1).unwrap_or(0);
    let (sigma, nu) = match chart {
        Axis::XPos => (ds, -ps),
        _ => (-ds, ps),
    };
    InfinitySingularity {
        chart,
        lambda: Some(root.clone()),
        multiplicity: k,
        kind: SingularityKind::from_signs(sigma, nu, k),
        sigma_sign: sigma,
        nu_sign: nu,
    }
}

fn lowest_coefficient(c: &[Rational]) -> (usize, &Rational) {
    c.iter()
        .enumerate()
        .find(|(_, v)| !v.is_zero())
        .expect("eta is nonzero on the y-axis chart")
}

fn y_chart_point(x: &QHField, eta: &EtaData, chart: Axis) -> InfinitySingularity {
    let r = eta.eta.restrict(chart);
    let (k, c) = lowest_coefficient(r.coeffs());
    let qs = sign(&x.q_poly.restrict(chart).coeff(0));
    let (sigma, nu) = match chart {
        Axis::YPos => (-sign(c), -qs),
        _ => (sign(c), qs),
    };
    InfinitySingularity {
        chart,
        lambda: None,
        multiplicity: k,
        kind: SingularityKind::from_signs(sigma, nu, k),
        sigma_sign: sigma,
        nu_sign: nu,
    }
}

/// Singular points on the equator in counterclockwise order: X_POS roots
/// ascending, the Y_POS end, X_NEG roots descending, the Y_NEG end.
pub fn infinite_singularities(x: &QHField, eta: &EtaData) -> Vec<InfinitySingularity> {
    if eta.identically_zero {
        return Vec::new();
    }
    let mut out: Vec<_> = eta
        .pos_roots
        .iter()
        .map(|r| x_chart_point(x, eta, Axis::XPos, r))
        .collect();
    let boundary = eta.eta_0_pos.is_zero();
    if boundary {
        out.push(y_chart_point(x, eta, Axis::YPos));
    }
    out.extend(eta.neg_roots.iter().map(|r| x_chart_point(x, eta, Axis::XNeg, r)));
    if boundary {
        out.push(y_chart_point(x, eta, Axis::YNeg));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CurveKind {
    #[serde(rename = "AXIS_X0")]
    AxisX0,
    #[serde(rename = "CURVE")]
    Curve,
}

/// y^p − λ^p x^q = 0 for a root λ of η(1,·); its x < 0 branch meets the
/// equator at the X_NEG root (−1)^q λ.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantCurve {
    pub kind: CurveKind,
    pub lambda: Option<IsolatedRoot>,
}

pub fn invariant_curves(_x: &QHField, eta: &EtaData) -> Vec<InvariantCurve> {
    let mut out: Vec<_> = eta
        .pos_roots
        .iter()
        .map(|r| InvariantCurve {
            kind: CurveKind::Curve,
            lambda: Some(r.clone()),
        })
        .collect();
    if eta.eta_0_pos.is_zero() {
        out.push(InvariantCurve {
            kind: CurveKind::AxisX0,
            lambda: None,
        });
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SectorKind {
    #[serde(rename = "HYPERBOLIC")]
    Hyperbolic,
    #[serde(rename = "ELLIPTIC")]
    Elliptic,
    #[serde(rename = "PARABOLIC")]
    Parabolic,
}

impl SectorKind {
    pub fn letter(self) -> char {
        match self {
            SectorKind::Hyperbolic => 'H',
            SectorKind::Elliptic => 'E',
            SectorKind::Parabolic => 'P',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectorDecomposition {
    /// sector i lies between points i and i+1 (cyclically)
    pub sectors: Vec<SectorKind>,
    pub separatrix_count: usize,
}

pub fn origin_sectors(points: &[InfinitySingularity]) -> Result<SectorDecomposition> {
    if points.iter().any(|s| s.kind == SingularityKind::SaddleNode) {
        return Err(Error::InvalidKind);
    }
    let n = points.len();
    let sectors: Vec<_> = (0..n)
        .map(|i| {
            let (a, b) = (points[i].kind.is_node(), points[(i + 1) % n].kind.is_node());
            match (a, b) {
                (true, true) => SectorKind::Hyperbolic,
                (false, false) => SectorKind::Elliptic,
                _ => SectorKind::Parabolic,
            }
        })
        .collect();
    // boundary direction i separates sectors i-1 and i
    let separatrix_count = (0..n)
        .filter(|&i| sectors[i] == SectorKind::Hyperbolic || sectors[(i + n - 1) % n] == SectorKind::Hyperbolic)
        .count();
    Ok(SectorDecomposition {
        sectors,
        separatrix_count,
    })
}
