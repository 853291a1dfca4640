mod common;

use common::{arb_type, cat_map};
use geotype_core::algebra::horizontal_type;
use geotype_core::paclass::is_mixing;
use geotype_core::refine::corner_refine;
use geotype_core::singular::*;
use geotype_core::symbolic::periodic_boundary_codes;
use proptest::prelude::*;

#[test]
fn cat_map_census() {
    let t = prepare_for_census(&cat_map()).unwrap();
    let r = genus(&t).unwrap();
    assert_eq!(r.genus, 1);
    assert_eq!(r.euler_characteristic_quarters, 0);
    assert!(r.classes.iter().all(|c| c.size() == 4 && c.is_regular()));
    assert!(r.prongs.is_empty());
    let total: usize = r.classes.iter().map(|c| c.size()).sum();
    assert_eq!(total, periodic_boundary_codes(&t).unwrap().len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Whatever the input, a census either fails loudly or is self-consistent.
    #[test]
    fn census_is_consistent_or_refused(t in arb_type(3, 3)) {
        let h = horizontal_type(&t);
        prop_assume!(is_mixing(&h).0 && h.n() <= 9);
        let c = corner_refine(&h).unwrap();
        let codes = periodic_boundary_codes(&c).unwrap();
        if let Ok(r) = genus(&c) {
            prop_assert!(r.classes.iter().all(|k| k.size() % 2 == 0 && k.size() >= 2));
            prop_assert_eq!(r.classes.iter().map(|k| k.size()).sum::<usize>(), codes.len());
            let q: i64 = r.classes.iter().map(|k| 4 - k.size() as i64).sum();
            prop_assert_eq!(8 - 8 * r.genus as i64, q);
        }
        for a in &codes {
            for b in &codes {
                prop_assert_eq!(s_adjacent(&c, a, b), s_adjacent(&c, b, a));
                prop_assert_eq!(u_adjacent(&c, a, b), u_adjacent(&c, b, a));
            }
        }
    }
}
