#![allow(dead_code)]

use std::path::PathBuf;

use geotype::format::parse_type;
use geotype_core::{Cell, GeometricType};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../goldens")
}

pub fn golden_path(name: &str) -> PathBuf {
    golden_dir().join(name)
}

pub fn golden_text(name: &str) -> String {
    std::fs::read_to_string(golden_path(name)).unwrap_or_else(|e| panic!("{}: {}", name, e))
}

pub fn golden(name: &str) -> GeometricType {
    parse_type(&golden_text(name)).unwrap_or_else(|e| panic!("{}: {}", name, e))
}

/// Goldens built from pseudo-Anosov maps: the cat map on two partitions, its
/// sphere quotient, and a genus-2 branched cover.
pub const PA_GOLDENS: [&str; 4] = ["t_aw.gt", "t_aw3.gt", "t_sq.gt", "t_g2.gt"];

/// A uniformly shuffled valid type with `n <= max_n` and `h_i <= max_h`.
pub fn random_type(rng: &mut ChaCha8Rng, max_n: usize, max_h: usize) -> GeometricType {
    let n = rng.gen_range(1..=max_n);
    let h: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=max_h)).collect();
    let alpha: usize = h.iter().sum();
    let mut cuts: Vec<usize> = (1..alpha).collect();
    cuts.shuffle(rng);
    cuts.truncate(n - 1);
    cuts.sort_unstable();
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(alpha);
    let v: Vec<usize> = bounds.windows(2).map(|w| w[1] - w[0]).collect();
    let mut slots: Vec<(usize, usize)> = (0..n).flat_map(|k| (0..v[k]).map(move |l| (k, l))).collect();
    slots.shuffle(rng);
    let mut it = slots.into_iter();
    let rows = h
        .iter()
        .map(|&hi| {
            (0..hi)
                .map(|_| {
                    let (k, l) = it.next().unwrap();
                    Cell::new(k, l, if rng.gen_bool(0.5) { 1 } else { -1 })
                })
                .collect()
        })
        .collect();
    GeometricType::new(h, v, rows).expect("generator builds valid types")
}

pub fn corpus(seed: u64, count: usize) -> Vec<GeometricType> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_type(&mut rng, 4, 3)).collect()
}
