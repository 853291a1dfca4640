mod common;

use common::arb_type;
use geotype_core::algebra::{horizontal_type, power};
use geotype_core::{incidence_matrix, oracle_power_matrix, validate};
use proptest::prelude::*;

proptest! {
    #[test]
    fn power_matrix_is_matrix_power(t in arb_type(4, 3), m in 1usize..=4) {
        let p = power(&t, m, 1 << 20).unwrap();
        prop_assert!(validate(&p).is_valid());
        prop_assert_eq!(incidence_matrix(&p), oracle_power_matrix(&t, m as u32).unwrap());
    }

    #[test]
    fn inverse_is_an_involution(t in arb_type(4, 3)) {
        prop_assert!(validate(&t.inverse()).is_valid());
        prop_assert_eq!(t.inverse().inverse(), t);
    }

    #[test]
    fn inverse_commutes_with_power(t in arb_type(4, 3), m in 1usize..=4) {
        let a = power(&t, m, 1 << 20).unwrap().inverse();
        let b = power(&t.inverse(), m, 1 << 20).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn power_of_power(t in arb_type(3, 3), a in 1usize..=2, b in 1usize..=2) {
        let direct = power(&t, a * b, 1 << 20).unwrap();
        let nested = power(&power(&t, a, 1 << 20).unwrap(), b, 1 << 20).unwrap();
        prop_assert_eq!(nested, direct);
    }

    #[test]
    fn horizontal_type_is_binary(t in arb_type(4, 3)) {
        let h = horizontal_type(&t);
        prop_assert!(validate(&h).is_valid());
        prop_assert_eq!(h.n(), t.alpha());
        prop_assert!(incidence_matrix(&h).is_binary());
    }
}
