//! Floating-point helpers: adaptive Gauss–Kronrod quadrature and an embedded
//! Dormand–Prince 5(4) integrator.

use std::ops::ControlFlow;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

/// Globally adaptive G7/K15 quadrature: bisect the worst interval until the
/// summed error estimate drops below `abs_tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Quadrature {
    const MAX_INTERVALS: usize = 4000;
    let mut parts = vec![(a, b, gk15(&f, a, b))];
    loop {
        let err: f64 = parts.iter().map(|p| p.2 .1).sum();
        if err <= abs_tol || parts.len() >= MAX_INTERVALS {
            let value = parts.iter().map(|p| p.2 .0).sum();
            return Quadrature {
                value,
                error: err,
                intervals: parts.len(),
            };
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .unwrap();
        let (lo, hi, _) = parts.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        parts.push((lo, mid, gk15(&f, lo, mid)));
        parts.push((mid, hi, gk15(&f, mid, hi)));
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Dormand–Prince 5(4) with standard step-size control.
#[derive(Clone, Copy, Debug)]
pub struct Dopri5 {
    pub atol: f64,
    pub rtol: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Dopri5 {
            atol: 1e-12,
            rtol: 1e-10,
            h_max: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }
}

impl Dopri5 {
    /// One step of size h; returns the 5th-order solution and the error vector.
    pub fn step<const N: usize, F>(&self, f: &F, t: f64, y: &[f64; N], h: f64) -> ([f64; N], [f64; N])
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        let mut k = [[0.0; N]; 7];
        k[0] = f(t, y);
        for s in 1..7 {
            let mut ys = *y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            k[s] = f(t + C[s] * h, &ys);
        }
        let mut out = *y;
        let mut err = [0.0; N];
        for i in 0..N {
            for s in 0..6 {
                out[i] += h * A[6][s] * k[s][i];
            }
            for s in 0..7 {
                err[i] += h * E[s] * k[s][i];
            }
        }
        (out, err)
    }

    fn error_norm<const N: usize>(&self, y: &[f64; N], y1: &[f64; N], err: &[f64; N]) -> f64 {
        let mut acc = 0.0;
        for i in 0..N {
            let sc = self.atol + self.rtol * y[i].abs().max(y1[i].abs());
            acc += (err[i] / sc).powi(2);
        }
        (acc / N as f64).sqrt()
    }

    /// Integrate from t0 towards t1, calling `on_step(t, y)` after every
    /// accepted step. Returns the last accepted (t, y).
    pub fn solve<const N: usize, F, S>(&self, f: &F, t0: f64, y0: [f64; N], t1: f64, mut on_step: S) -> (f64, [f64; N])
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
        S: FnMut(f64, &[f64; N]) -> ControlFlow<()>,
    {
        let dir = if t1 >= t0 { 1.0 } else { -1.0 };
        let span = (t1 - t0).abs();
        let mut t = t0;
        let mut y = y0;
        let mut h = (span * 1e-3).clamp(1e-8, self.h_max.clamp(1e-8, 0.1));
        for _ in 0..self.max_steps {
            let left = (t1 - t) * dir;
            if left <= 0.0 {
                break;
            }
            let hh = h.min(left).min(self.h_max);
            let (y1, err) = self.step(f, t, &y, dir * hh);
            let en = self.error_norm(&y, &y1, &err);
            if en <= 1.0 || hh <= 1e-14 * span.max(1.0) {
                t = if hh == left { t1 } else { t + dir * hh };
                y = y1;
                if on_step(t, &y).is_break() {
                    break;
                }
            }
            let factor = if en == 0.0 {
                5.0
            } else {
                (0.9 * en.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = hh * factor;
        }
        (t, y)
    }

    pub fn integrate<const N: usize, F>(&self, f: &F, t0: f64, y0: [f64; N], t1: f64) -> [f64; N]
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        self.solve(f, t0, y0, t1, |_, _| ControlFlow::Continue(())).1
    }
}
