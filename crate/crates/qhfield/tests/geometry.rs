use qhfield::geometry::{
    circle_integral, first_return_period, infinite_singularities, invariant_curves, origin_sectors, period, pq_trig,
    trig_orbit, CurveKind, SectorKind, SingularityKind,
};
use qhfield::poly::{rat, Axis, BivarPoly};
use qhfield::stability::{return_integral, DEFAULT_TOL};
use qhfield::{compute_eta, QHField, WeightSignature};

fn bp(t: &[(u32, u32, i64, i64)]) -> BivarPoly {
    BivarPoly::from_terms(t.iter().map(|&(i, j, n, d)| (i, j, rat(n, d))))
}

fn x1() -> QHField {
    QHField::from_raw(
        1,
        2,
        2,
        bp(&[(2, 0, 1, 1), (0, 1, -1, 2)]),
        bp(&[(3, 0, 1, 1), (1, 1, 2, 1)]),
    )
    .unwrap()
}

fn x2() -> QHField {
    QHField::from_raw(
        1,
        2,
        2,
        bp(&[(2, 0, 1, 1), (0, 1, -1, 1)]),
        bp(&[(3, 0, 2, 1), (1, 1, -3, 1)]),
    )
    .unwrap()
}

#[test]
fn classical_trig_for_1_1() {
    let s = pq_trig(WeightSignature::new(1, 1, 1), std::f64::consts::FRAC_PI_2);
    assert!(s.z.abs() < 1e-9 && (s.omega - 1.0).abs() < 1e-9);
    assert!((s.period - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    let s = pq_trig(WeightSignature::new(3, 2, 1), 0.0);
    assert_eq!((s.z, s.omega), (3f64.powf(-0.25), 0.0));
}

#[test]
fn period_matches_independent_gamma() {
    use statrs::function::gamma::gamma;
    for p in [1u32, 3, 5] {
        for q in 1..=5u32 {
            let (a, b) = (1.0 / (2 * p) as f64, 1.0 / (2 * q) as f64);
            let t = 2.0 * (p as f64).powf(-b) * (q as f64).powf(-a) * gamma(a) * gamma(b) / gamma(a + b);
            assert!((period(p, q) - t).abs() < 1e-12 * t, "{p} {q}");
        }
    }
    assert!((period(1, 2) - 7.4163).abs() < 1e-4);
}

#[test]
fn energy_and_first_return() {
    for p in [1u32, 3, 5] {
        for q in 1..=5u32 {
            let t = period(p, q);
            for (_, z, w) in trig_orbit(p, q, t) {
                let e = p as f64 * z.powi(2 * q as i32) + q as f64 * w.powi(2 * p as i32);
                assert!((e - 1.0).abs() < 1e-9, "{p} {q} {e}");
            }
            let r = first_return_period(p, q);
            assert!((r - t).abs() < 1e-6 * t, "{p} {q} {r} {t}");
        }
    }
}

#[test]
fn circle_integral_of_linear_focus() {
    // (x - y, x + y): r grows by e^(2π) per turn; the half-line integral is π
    let x = QHField::from_raw(
        1,
        1,
        1,
        bp(&[(1, 0, 1, 1), (0, 1, -1, 1)]),
        bp(&[(1, 0, 1, 1), (0, 1, 1, 1)]),
    )
    .unwrap();
    let e = compute_eta(&x);
    let c = circle_integral(&x, &e, DEFAULT_TOL).unwrap();
    let r = return_integral(&x, &e, DEFAULT_TOL).unwrap();
    assert!((c.value - 2.0 * std::f64::consts::PI).abs() < 1e-8, "{}", c.value);
    assert!((r.value - std::f64::consts::PI).abs() < 1e-8);
    let xr = x.scaled(&rat(-1, 1)).unwrap();
    let c = circle_integral(&xr, &compute_eta(&xr), DEFAULT_TOL).unwrap();
    assert_eq!(c.sign, -1);
}

#[test]
fn x1_full_turn_integral_vanishes() {
    // X1 is reversible under (x, y, t) -> (-x, y, -t), so a full turn gains nothing
    let x = x1();
    let e = compute_eta(&x);
    let c = circle_integral(&x, &e, DEFAULT_TOL).unwrap();
    assert!(c.ambiguous, "{}", c.value);
    let r = return_integral(&x, &e, DEFAULT_TOL).unwrap();
    assert_eq!(r.sign, 1);
}

#[test]
fn x2_has_two_stable_and_two_unstable_nodes() {
    let x = x2();
    let e = compute_eta(&x);
    let pts = infinite_singularities(&x, &e);
    let kinds: Vec<_> = pts.iter().map(|s| s.kind).collect();
    assert_eq!(
        kinds,
        [
            SingularityKind::StableNode,
            SingularityKind::UnstableNode,
            SingularityKind::StableNode,
            SingularityKind::UnstableNode
        ]
    );
    assert_eq!((pts[0].sigma_sign, pts[0].nu_sign), (-1, -1));
    assert_eq!((pts[1].sigma_sign, pts[1].nu_sign), (1, 1));
    let sec = origin_sectors(&pts).unwrap();
    assert_eq!(sec.sectors, vec![SectorKind::Hyperbolic; 4]);
    let curves = invariant_curves(&x, &e);
    assert_eq!(curves.len(), 2);
    assert!(curves.iter().all(|c| c.kind == CurveKind::Curve));
    assert!(infinite_singularities(&x1(), &compute_eta(&x1())).is_empty());
}

#[test]
fn mirror_roots() {
    // (1,3,1): q odd, the X_NEG roots are the negated X_POS roots
    let x = QHField::from_raw(1, 3, 1, bp(&[(1, 0, 1, 1)]), bp(&[(3, 0, 1, 1), (0, 1, 2, 1)])).unwrap();
    let e = compute_eta(&x);
    let pos: Vec<f64> = e.pos_roots.iter().map(|r| r.approx()).collect();
    let mut neg: Vec<f64> = e.neg_roots.iter().map(|r| -r.approx()).collect();
    neg.sort_by(f64::total_cmp);
    assert_eq!(pos.len(), neg.len());
    for (a, b) in pos.iter().zip(&neg) {
        assert!((a - b).abs() < 1e-12);
    }
    let _ = Axis::XNeg;
}
