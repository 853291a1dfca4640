#![allow(dead_code)]

use geotype_core::{Cell, GeometricType};
use proptest::prelude::*;
use proptest::sample::subsequence;

/// Types with `n <= max_n` rectangles and `h_i <= max_h`.
pub fn arb_type(max_n: usize, max_h: usize) -> impl Strategy<Value = GeometricType> {
    (1..=max_n)
        .prop_flat_map(move |n| proptest::collection::vec(1..=max_h, n))
        .prop_flat_map(|h| {
            let n = h.len();
            let alpha: usize = h.iter().sum();
            let cuts = subsequence((1..alpha).collect::<Vec<_>>(), n - 1);
            let perm = Just((0..alpha).collect::<Vec<_>>()).prop_shuffle();
            let signs = proptest::collection::vec(any::<bool>(), alpha);
            (Just(h), cuts, perm, signs)
        })
        .prop_map(|(h, cuts, perm, signs)| build(h, &cuts, &perm, &signs))
}

/// `cuts` splits `0..alpha` into the vertical counts; `perm` sends cell number to slot number.
pub fn build(h: Vec<usize>, cuts: &[usize], perm: &[usize], signs: &[bool]) -> GeometricType {
    let alpha: usize = h.iter().sum();
    let mut bounds = vec![0];
    bounds.extend_from_slice(cuts);
    bounds.push(alpha);
    let v: Vec<usize> = bounds.windows(2).map(|w| w[1] - w[0]).collect();
    let slot = |s: usize| {
        let k = bounds.windows(2).position(|w| w[0] <= s && s < w[1]).unwrap();
        (k, s - bounds[k])
    };
    let mut idx = 0;
    let rows = h
        .iter()
        .map(|&hi| {
            (0..hi)
                .map(|_| {
                    let (k, l) = slot(perm[idx]);
                    let c = Cell::new(k, l, if signs[idx] { 1 } else { -1 });
                    idx += 1;
                    c
                })
                .collect()
        })
        .collect();
    GeometricType::new(h, v, rows).expect("generator builds valid types")
}

pub fn ty(h: &[usize], v: &[usize], rows: &[&[(usize, usize, i8)]]) -> GeometricType {
    GeometricType::new(
        h.to_vec(),
        v.to_vec(),
        rows.iter().map(|r| r.iter().map(|&(k, l, e)| Cell::new(k, l, e)).collect()).collect(),
    )
    .unwrap()
}

/// Two-rectangle partition of the cat map `[[2,1],[1,1]]`.
pub fn cat_map() -> GeometricType {
    ty(&[2, 3], &[2, 3], &[&[(0, 0, 1), (1, 0, 1)], &[(1, 2, 1), (0, 1, 1), (1, 1, 1)]])
}

pub fn full_shift() -> GeometricType {
    ty(&[2, 2], &[2, 2], &[&[(0, 0, 1), (1, 0, 1)], &[(0, 1, 1), (1, 1, 1)]])
}

pub fn doubling() -> GeometricType {
    ty(&[2], &[2], &[&[(0, 0, 1), (0, 1, 1)]])
}

pub fn horseshoe() -> GeometricType {
    ty(&[2], &[2], &[&[(0, 0, 1), (0, 1, -1)]])
}
