use proptest::prelude::*;
use qhfield::field::monomials_of_degree;
use qhfield::poly::{int, rat, BivarPoly};
use qhfield::*;

fn bp(t: &[(u32, u32, i64)]) -> BivarPoly {
    BivarPoly::from_int_terms(t)
}

fn x2() -> QHField {
    validate(
        WeightSignature::new(1, 2, 2),
        bp(&[(2, 0, 1), (0, 1, -1)]),
        bp(&[(3, 0, 2), (1, 1, -3)]),
    )
    .unwrap()
}

#[test]
fn membership_examples() {
    assert!(!check_membership(WeightSignature::new(3, 7, 2)).nonempty);
    assert!(check_membership(WeightSignature::new(1, 2, 2)).nonempty);
    for m in 1..8 {
        let r = check_membership(WeightSignature::new(1, 1, m));
        assert!(r.nonempty);
        assert_eq!((r.k1, r.k2), (m + 1, m + 1));
    }
}

#[test]
fn normalization_examples() {
    assert_eq!(normalize_weights(2, 4, 3).unwrap(), WeightSignature::new(1, 2, 2));
    assert_eq!(normalize_weights(1, 2, 2).unwrap(), WeightSignature::new(1, 2, 2));
    assert_eq!(normalize_weights(3, 9, 4).unwrap(), WeightSignature::new(1, 3, 2));
    assert_eq!(normalize_weights(2, 1, 3).unwrap(), WeightSignature::new(1, 2, 3));
    assert!(matches!(
        normalize_weights(2, 4, 2),
        Err(Error::IndivisibleDegree { .. })
    ));
}

#[test]
fn axis_swap_exchanges_components() {
    // weights (2,1): P = xy, Q = y² − x
    let x = QHField::from_raw(2, 1, 2, bp(&[(1, 1, 1)]), bp(&[(0, 2, 1), (1, 0, -1)])).unwrap();
    assert_eq!(x.w, WeightSignature::new(1, 2, 2));
    assert_eq!(x.p_poly, bp(&[(2, 0, 1), (0, 1, -1)]));
    assert_eq!(x.q_poly, bp(&[(1, 1, 1)]));
}

#[test]
fn validation_examples() {
    let w = WeightSignature::new(1, 2, 2);
    assert!(validate(w, bp(&[(2, 0, 1), (0, 1, -1)]), bp(&[(3, 0, 2), (1, 1, -3)])).is_ok());
    assert!(matches!(
        validate(w, bp(&[(2, 0, 1)]), bp(&[(3, 0, 1)])),
        Err(Error::NotCoprime(_))
    ));
    assert!(matches!(
        validate(w, bp(&[(3, 0, 1)]), bp(&[(3, 0, 1)])),
        Err(Error::WrongDegree { which: "P", .. })
    ));
    assert_eq!(validate(w, BivarPoly::zero(), BivarPoly::zero()), Err(Error::BothZero));
    // common factor x² − y seen only through the x = 1 restriction
    let f = bp(&[(2, 0, 1), (0, 1, -1)]);
    assert!(matches!(
        validate(w, f.clone(), &f * &bp(&[(1, 0, 1)])),
        Err(Error::NotCoprime(_))
    ));
}

#[test]
fn eta_examples() {
    let e = compute_eta(&x2());
    assert_eq!(e.eta, bp(&[(4, 0, 2), (2, 1, -5), (0, 2, 2)]));
    let roots: Vec<_> = e.pos_roots.iter().map(|r| r.exact_value.clone().unwrap()).collect();
    assert_eq!(roots, vec![rat(1, 2), rat(2, 1)]);
    assert_eq!(e.eta_0_pos, int(2));
    let x1 = validate(
        WeightSignature::new(1, 2, 2),
        BivarPoly::from_terms([(2, 0, rat(1, 1)), (0, 1, rat(-1, 2))]),
        bp(&[(3, 0, 1), (1, 1, 2)]),
    )
    .unwrap();
    let e1 = compute_eta(&x1);
    assert_eq!(e1.eta, bp(&[(4, 0, 1), (0, 2, 1)]));
    assert!(e1.pos_roots.is_empty());
    assert_eq!(e1.eta_0_pos, int(1));
}

#[test]
fn radial_examples() {
    for (p, q) in [(1, 1), (1, 2), (3, 2)] {
        let w = WeightSignature::new(p, q, 1);
        for c in [1, 3] {
            let x = validate(w, bp(&[(1, 0, (c * p) as i64)]), bp(&[(0, 1, (c * q) as i64)])).unwrap();
            assert!(is_radial(&x));
            assert!(compute_eta(&x).identically_zero);
        }
    }
    assert!(!is_radial(&x2()));
}

fn random_field(p: u32, q: u32, m: u32, cs: &[i64]) -> Option<QHField> {
    let w = WeightSignature::new(p, q, m);
    let mut it = cs.iter().cycle();
    let mut mk = |d: u32| {
        let mut b = BivarPoly::zero();
        for (i, j) in monomials_of_degree(p, q, d) {
            b.add_term(i, j, int(*it.next().unwrap()));
        }
        b
    };
    let (a, b) = (mk(w.p_degree()), mk(w.q_degree()));
    validate(w, a, b).ok()
}

fn weights() -> impl Strategy<Value = (u32, u32, u32)> {
    prop::sample::select(vec![(1u32, 1u32), (1, 2), (1, 3), (3, 2), (3, 4), (5, 2)])
        .prop_flat_map(|(p, q)| (Just(p), Just(q), 1u32..=6))
}

proptest! {
    #[test]
    fn eta_degree_and_boundary((p, q, m) in weights(), cs in prop::collection::vec(-4i64..=4, 12)) {
        let Some(x) = random_field(p, q, m, &cs) else { return Ok(()) };
        let e = compute_eta(&x);
        if !e.identically_zero {
            prop_assert_eq!(e.eta.weighted_degree(p, q).value(), Some(p + q + m - 1));
        }
        let p01 = x.p_poly.restrict(qhfield::poly::Axis::YPos).coeff(0);
        prop_assert_eq!(e.eta_0_pos, -(int(q as i64) * p01));
    }

    #[test]
    fn scaling_keeps_roots((p, q, m) in weights(), cs in prop::collection::vec(-4i64..=4, 12), l in prop::sample::select(vec![2i64, 3, -1, -5])) {
        let Some(x) = random_field(p, q, m, &cs) else { return Ok(()) };
        let y = x.scaled(&int(l)).unwrap();
        let (ex, ey) = (compute_eta(&x), compute_eta(&y));
        prop_assert_eq!(ey.eta, ex.eta.scale(&int(l)));
        let rx: Vec<_> = ex.pos_roots.iter().map(|r| (r.lo.clone(), r.multiplicity)).collect();
        let ry: Vec<_> = ey.pos_roots.iter().map(|r| (r.lo.clone(), r.multiplicity)).collect();
        prop_assert_eq!(rx, ry);
    }

    #[test]
    fn positive_scaling_keeps_sign_sequence((p, q, m) in weights(), cs in prop::collection::vec(-4i64..=4, 12)) {
        let Some(x) = random_field(p, q, m, &cs) else { return Ok(()) };
        let v = classify(&x);
        prop_assume!(v.is_stable() && v.portrait == Some(qhfield::stability::Portrait::Sectored));
        let seq = |f: &QHField| {
            let e = compute_eta(f);
            qhfield::sequences::sign_sequence(f, &qhfield::geometry::infinite_singularities(f, &e)).unwrap()
        };
        let y = x.scaled(&rat(7, 2)).unwrap();
        prop_assert_eq!(seq(&x), seq(&y));
        // λ < 0 flips σ and ν together
        let z = x.scaled(&int(-1)).unwrap();
        prop_assert_eq!(seq(&z).entries, seq(&x).negated().entries);
    }

    #[test]
    fn normalization_is_idempotent(p in 1u32..=12, q in 1u32..=12, m in 1u32..=30) {
        if let Ok(w) = normalize_weights(p, q, m) {
            prop_assert_eq!(normalize_weights(w.p, w.q, w.m).unwrap(), w);
            prop_assert_eq!(w.p % 2, 1);
        }
    }
}
