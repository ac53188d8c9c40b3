//! SVG phase portraits on the Poincaré–Lyapunov disk.
//!
//! A point with (p,q)-polar coordinates (r, θ), x = r^p Cs θ and y = r^q Sn θ,
//! is drawn at radius r/(1+r) in the direction atan2(Sn θ, Cs θ).

use std::fmt::Write as _;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::field::{compute_eta, QHField};
use crate::geometry::{infinite_singularities, invariant_curves, period, pq_trig, CurveKind, SingularityKind};
use crate::numerics::Dopri5;
use crate::poly::{Axis, BivarPoly};
use crate::stability::classify_with;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlotOptions {
    pub size: u32,
    pub trajectories: usize,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            size: 400,
            trajectories: 24,
        }
    }
}

const L_MAX: f64 = 5.0;
const S_MAX: f64 = 60.0;

struct Terms(Vec<(i32, i32, f64)>);

impl Terms {
    fn new(b: &BivarPoly) -> Self {
        Terms(b.to_f64_terms())
    }

    fn eval(&self, x: f64, y: f64) -> f64 {
        self.0.iter().map(|&(i, j, c)| c * x.powi(i) * y.powi(j)).sum()
    }
}

/// Direction (Cs, Sn) of the equator point along y = λ |x|^{q/p}, x of sign `sx`.
fn x_direction(p: u32, q: u32, lambda: f64, sx: f64) -> (f64, f64) {
    let c = (p as f64 + q as f64 * lambda.powi(2 * p as i32)).powf(-1.0 / (2 * q) as f64);
    (sx * c, lambda * c.powf(q as f64 / p as f64))
}

fn y_direction(p: u32, q: u32, sy: f64) -> (f64, f64) {
    (0.0, sy * (q as f64).powf(-1.0 / (2 * p) as f64))
}

struct Canvas {
    center: f64,
    radius: f64,
}

impl Canvas {
    fn at(&self, rho: f64, z: f64, w: f64) -> (f64, f64) {
        let a = w.atan2(z);
        let d = self.radius * rho / (1.0 + rho);
        (self.center + d * a.cos(), self.center - d * a.sin())
    }

    fn rim(&self, (z, w): (f64, f64)) -> (f64, f64) {
        let a = w.atan2(z);
        (self.center + self.radius * a.cos(), self.center - self.radius * a.sin())
    }
}

/// Stops on leaving the annulus |ln r| ≤ L_MAX, or after a full turn that
/// closes up on the seed.
fn trajectory(x: &QHField, c: &Canvas, seed: (f64, f64), dir: f64) -> (Vec<(f64, f64)>, bool) {
    let (p, q) = (x.w.p as i32, x.w.q as i32);
    let (pp, qq) = (Terms::new(&x.p_poly), Terms::new(&x.q_poly));
    let (pf, qf) = (p as f64, q as f64);
    // state (ln r, Cs θ, Sn θ, θ) in the time ds = r^{m-1} dt
    let rhs = move |_: f64, y: &[f64; 4]| {
        let (z, w) = (y[1], y[2]);
        let (a, b) = (pp.eval(z, w), qq.eval(z, w));
        let xi = z.powi(2 * q - 1) * a + w.powi(2 * p - 1) * b;
        let eta = pf * z * b - qf * w * a;
        [xi, -w.powi(2 * p - 1) * eta, z.powi(2 * q - 1) * eta, eta]
    };
    let turn = period(x.w.p, x.w.q);
    let mut turns = 0.0;
    let mut closed = false;
    let solver = Dopri5 {
        atol: 1e-9,
        rtol: 1e-9,
        h_max: 0.05,
        max_steps: 20_000,
    };
    let start = c.at(1.0, seed.0, seed.1);
    let mut pts = vec![start];
    solver.solve(&rhs, 0.0, [0.0, seed.0, seed.1, 0.0], dir * S_MAX, |_, y| {
        let pt = c.at(y[0].exp(), y[1], y[2]);
        let last = pts[pts.len() - 1];
        if (pt.0 - last.0).hypot(pt.1 - last.1) >= 2.0 {
            pts.push(pt);
        }
        if y[3].abs() >= turn * (turns + 1.0) {
            turns += 1.0;
            closed = y[0].abs() < 1e-3;
        }
        if y[0].abs() > L_MAX || closed {
            pts.push(pt);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    (pts, closed)
}

fn polyline(out: &mut String, pts: &[(f64, f64)], style: &str) {
    if pts.len() < 2 {
        return;
    }
    let body: Vec<String> = pts.iter().map(|(a, b)| format!("{a:.1},{b:.1}")).collect();
    let _ = writeln!(out, "  <polyline points=\"{}\" {style}/>", body.join(" "));
}

pub fn plot_svg(x: &QHField, opts: PlotOptions) -> Result<String> {
    let eta = compute_eta(x);
    if !classify_with(x, &eta, crate::stability::DEFAULT_TOL).is_stable() {
        return Err(Error::NotStable);
    }
    let (p, q) = (x.w.p, x.w.q);
    let size = opts.size.max(16) as f64;
    let c = Canvas {
        center: size / 2.0,
        radius: size / 2.0 - 8.0,
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">",
        opts.size.max(16)
    );
    let _ = writeln!(s, "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>");

    let n = opts.trajectories;
    let t = period(p, q);
    for j in 0..n {
        let st = pq_trig(x.w, (j as f64 + 0.5) * t / n as f64);
        for dir in [1.0, -1.0] {
            let (pts, closed) = trajectory(x, &c, (st.z, st.omega), dir);
            polyline(&mut s, &pts, "fill=\"none\" stroke=\"#3a6ea5\" stroke-width=\"0.8\"");
            if closed {
                break;
            }
        }
    }

    for curve in invariant_curves(x, &eta) {
        let ends = match (curve.kind, &curve.lambda) {
            (CurveKind::Curve, Some(l)) => {
                let l = l.approx();
                let neg = if q % 2 == 0 { l } else { -l };
                [x_direction(p, q, l, 1.0), x_direction(p, q, neg, -1.0)]
            }
            _ => [y_direction(p, q, 1.0), y_direction(p, q, -1.0)],
        };
        for e in ends {
            let (a, b) = c.rim(e);
            let _ = writeln!(
                s,
                "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{a:.2}\" y2=\"{b:.2}\" stroke=\"#c0392b\" stroke-width=\"1.2\"/>",
                c.center, c.center
            );
        }
    }

    let _ = writeln!(
        s,
        "  <circle cx=\"{0:.2}\" cy=\"{0:.2}\" r=\"{1:.2}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>",
        c.center, c.radius
    );
    let _ = writeln!(
        s,
        "  <circle cx=\"{0:.2}\" cy=\"{0:.2}\" r=\"2\" fill=\"black\"/>",
        c.center
    );

    for pt in infinite_singularities(x, &eta) {
        let d = match (&pt.lambda, pt.chart) {
            (Some(l), Axis::XPos) => x_direction(p, q, l.approx(), 1.0),
            (Some(l), _) => x_direction(p, q, l.approx(), -1.0),
            (None, Axis::YPos) => y_direction(p, q, 1.0),
            (None, _) => y_direction(p, q, -1.0),
        };
        let (a, b) = c.rim(d);
        let mark = match pt.kind {
            SingularityKind::StableNode => format!("<circle cx=\"{a:.2}\" cy=\"{b:.2}\" r=\"5\" fill=\"black\"/>"),
            SingularityKind::UnstableNode => format!(
                "<circle cx=\"{a:.2}\" cy=\"{b:.2}\" r=\"5\" fill=\"white\" stroke=\"black\" stroke-width=\"1.5\"/>"
            ),
            SingularityKind::Saddle => format!(
                "<path d=\"M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}\" stroke=\"black\" stroke-width=\"2\"/>",
                a - 5.0,
                b - 5.0,
                a + 5.0,
                b + 5.0,
                a - 5.0,
                b + 5.0,
                a + 5.0,
                b - 5.0
            ),
            SingularityKind::SaddleNode => format!(
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"8\" height=\"8\" fill=\"gray\" stroke=\"black\"/>",
                a - 4.0,
                b - 4.0
            ),
        };
        let _ = writeln!(s, "  {mark}");
    }
    s += "</svg>\n";
    Ok(s)
}
