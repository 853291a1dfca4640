//! The bounded decision with the per-iterate sweeps spread over threads.
//!
//! Iterates are examined in batches of `jobs`; results are reduced in
//! ascending `m`, so the verdict is the one the sequential procedure gives.

use geotype_core::paclass::{
    check_iterate, decide_pseudo_anosov_with, impasse_bound, obstruction_bound, precheck, DecideOptions, Status, Sweep,
    Verdict, Witness,
};
use geotype_core::{Error, GeometricType};

enum Outcome {
    Found(Witness),
    Capped(usize),
    Clear(usize),
}

fn sweep(
    t: &GeometricType,
    ms: std::ops::RangeInclusive<usize>,
    kind: Sweep,
    opts: DecideOptions,
    jobs: usize,
) -> Outcome {
    let ms: Vec<usize> = ms.collect();
    let mut last = 0;
    for batch in ms.chunks(jobs) {
        let results: Vec<Result<Option<Witness>, Error>> = std::thread::scope(|s| {
            let handles: Vec<_> =
                batch.iter().map(|&m| s.spawn(move || check_iterate(t, m, kind, opts.max_cells))).collect();
            handles.into_iter().map(|h| h.join().expect("sweep thread panicked")).collect()
        });
        for (&m, r) in batch.iter().zip(results) {
            match r {
                Ok(Some(w)) => return Outcome::Found(w),
                Ok(None) => last = m,
                Err(_) => return Outcome::Capped(m - 1),
            }
        }
    }
    Outcome::Clear(last)
}

/// Same verdict as [`decide_pseudo_anosov_with`], using up to `jobs` threads.
pub fn decide_with_jobs(t: &GeometricType, opts: DecideOptions, jobs: usize) -> Verdict {
    if jobs <= 1 {
        return decide_pseudo_anosov_with(t, opts);
    }
    if let Some(w) = precheck(t) {
        return Verdict { status: Status::NotPseudoAnosov, witness: Some(w), iterates_checked: 0 };
    }
    let checked = match sweep(t, 1..=impasse_bound(t), Sweep::Impasse, opts, jobs) {
        Outcome::Found(w) => {
            let m = w.m;
            return Verdict { status: Status::NotPseudoAnosov, witness: Some(w), iterates_checked: m };
        }
        Outcome::Capped(c) => return Verdict { status: Status::Inconclusive, witness: None, iterates_checked: c },
        Outcome::Clear(c) => c,
    };
    match sweep(t, 1..=obstruction_bound(t), Sweep::Obstructions, opts, jobs) {
        Outcome::Found(w) => {
            let m = checked.max(w.m);
            Verdict { status: Status::NotPseudoAnosov, witness: Some(w), iterates_checked: m }
        }
        Outcome::Capped(c) => Verdict { status: Status::Inconclusive, witness: None, iterates_checked: checked.max(c) },
        Outcome::Clear(c) => Verdict { status: Status::PseudoAnosov, witness: None, iterates_checked: checked.max(c) },
    }
}
