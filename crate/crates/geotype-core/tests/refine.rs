mod common;

use std::cmp::Ordering;

use common::{arb_type, cat_map, full_shift};
use geotype_core::algebra::{horizontal_type, power};
use geotype_core::paclass::is_mixing;
use geotype_core::refine::*;
use geotype_core::singular::census;
use geotype_core::symbolic::*;
use geotype_core::{incidence_matrix, validate, GeometricType};
use proptest::prelude::*;

fn mixing_binary(t: &GeometricType) -> Option<GeometricType> {
    let h = horizontal_type(t);
    (is_mixing(&h).0 && h.n() <= 9).then_some(h)
}

fn interior(t: &GeometricType, p: usize) -> Vec<PeriodicOrbit> {
    enumerate_periodic_orbits(t, p, 12).unwrap().into_iter().filter(|o| !is_s_boundary_orbit(t, o)).collect()
}

fn sums_match(t: &GeometricType) -> bool {
    let a = incidence_matrix(t);
    validate(t).is_valid()
        && a.row_sums().iter().zip(t.hs()).all(|(&r, &h)| r == h as u64)
        && a.col_sums().iter().zip(t.vs()).all(|(&c, &v)| c == v as u64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn comparator_is_a_strict_order(t in arb_type(3, 3)) {
        let h = mixing_binary(&t);
        prop_assume!(h.is_some());
        let h = h.unwrap();
        let family = interior(&h, 3);
        let items: Vec<(usize, usize)> =
            family.iter().enumerate().flat_map(|(o, w)| (0..w.period()).map(move |s| (o, s))).collect();
        let cmp = |a: (usize, usize), b: (usize, usize)| compare_intervals(&h, (a.1, &family[a.0]), (b.1, &family[b.0])).unwrap();
        let host = |a: (usize, usize)| family[a.0].at(a.1);
        for &a in &items {
            for &b in &items {
                if a == b || host(a) != host(b) {
                    continue;
                }
                prop_assert_ne!(cmp(a, b), Ordering::Equal);
                prop_assert_eq!(cmp(a, b), cmp(b, a).reverse());
                for &c in &items {
                    if c != a && c != b && host(c) == host(a) && cmp(a, b) == Ordering::Less && cmp(b, c) == Ordering::Less {
                        prop_assert_eq!(cmp(a, c), Ordering::Less);
                    }
                }
            }
        }
    }

    #[test]
    fn refinement_counts_and_validity(t in arb_type(3, 3)) {
        let h = mixing_binary(&t);
        prop_assume!(h.is_some());
        let h = h.unwrap();
        let family = interior(&h, 3);
        for o in family.iter().take(4) {
            let (r, bk) = s_refine(&h, std::slice::from_ref(o)).unwrap();
            prop_assert_eq!(r.n(), h.n() + o.period());
            prop_assert!(sums_match(&r));
            prop_assert!(r.vs().iter().enumerate().all(|(x, &v)| v == h.v(bk.parent(x))));
            let (a, b) = lift_orbit_through_s_refinement(&h, &bk, o).unwrap();
            for w in [a, b] {
                prop_assert!(w.period() == o.period() || w.period() == 2 * o.period());
                prop_assert!(PeriodicOrbit::new(&r, w.word()).is_ok());
            }
        }
        let total: usize = family.iter().map(|o| o.period()).sum();
        let (r, _) = s_refine(&h, &family).unwrap();
        prop_assert_eq!(r.n(), h.n() + total);
        prop_assert!(sums_match(&r));
    }

    #[test]
    fn u_refine_is_mirrored_s_refine(t in arb_type(3, 3)) {
        let h = mixing_binary(&t);
        prop_assume!(h.is_some());
        let h = h.unwrap();
        let family: Vec<PeriodicOrbit> = enumerate_periodic_orbits(&h, 2, 12).unwrap();
        let (u, _) = u_refine(&h, &family).unwrap();
        let rev: Vec<PeriodicOrbit> = family.iter().map(|o| o.reversed()).collect();
        let (s, _) = s_refine(&h.inverse(), &rev).unwrap();
        prop_assert_eq!(u, s.inverse());
    }

    #[test]
    fn corner_refinement_is_corner_and_idempotent(t in arb_type(3, 3)) {
        let h = mixing_binary(&t);
        prop_assume!(h.is_some());
        let h = h.unwrap();
        let c = corner_refine(&h).unwrap();
        prop_assert!(sums_match(&c));
        prop_assert!(has_corner_property(&c));
        prop_assert_eq!(corner_refine(&c).unwrap(), c);
    }

    #[test]
    fn bounded_corner_is_corner(t in arb_type(2, 3), p in 1usize..=3) {
        let h = mixing_binary(&t);
        prop_assume!(h.is_some());
        let h = h.unwrap();
        let c = bounded_corner_refine(&h, p, 12).unwrap();
        prop_assert!(has_corner_property(&c));
    }
}

#[test]
fn boundary_orbits_do_nothing() {
    let h = horizontal_type(&cat_map());
    let (r, bk) = s_refine(&h, &s_boundary_orbits(&h)).unwrap();
    assert_eq!(r, h);
    assert!(bk.orbits.is_empty());
    let (r, _) = u_refine(&h, &u_boundary_orbits(&h)).unwrap();
    assert_eq!(r, h);
}

#[test]
fn full_shift_examples() {
    let t = full_shift();
    assert_eq!(corner_refine(&t).unwrap(), t);
    let (u, _) = u_refine(&t, &[PeriodicOrbit::new(&t, &[0, 1]).unwrap()]).unwrap();
    assert_eq!(u.n(), 4);
}

#[test]
fn joint_refinement_is_symmetric() {
    let a = horizontal_type(&cat_map());
    let (b, _) = s_refine(&a, &interior(&a, 2)[..1]).unwrap();
    assert_eq!(
        max_boundary_period(&a).max(max_boundary_period(&b)),
        max_boundary_period(&b).max(max_boundary_period(&a))
    );
    let (x, y) = joint_refine(&a, &b, 12).unwrap();
    let (y2, x2) = joint_refine(&b, &a, 12).unwrap();
    assert_eq!((x, y), (x2, y2));
    let (p, q) = joint_refine(&a, &a, 12).unwrap();
    assert_eq!(p, q);
}

#[test]
fn invariants_survive_refinement_and_powers() {
    let t = cat_map();
    let base = census(&t).unwrap();
    assert_eq!((base.genus, base.prongs.len()), (1, 0));
    let h = horizontal_type(&t);
    for o in interior(&h, 3) {
        let (r, _) = s_refine(&h, &[o]).unwrap();
        let c = census(&r).unwrap();
        assert_eq!((c.genus, &c.prongs), (base.genus, &base.prongs));
    }
    for m in 1..=3 {
        assert_eq!(census(&power(&t, m, 1 << 20).unwrap()).unwrap().genus, 1);
    }
    let cmp = compare_invariants(&t, &h).unwrap();
    assert_eq!(cmp.verdict, CompareVerdict::Compatible);
    assert!((cmp.first.dilatation - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
}
