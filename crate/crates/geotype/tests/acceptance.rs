//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use common::{corpus, golden, golden_text, PA_GOLDENS};
use geotype::format::serialize_type;
use geotype_core::algebra::{horizontal_type, power};
use geotype_core::paclass::{
    decide_pseudo_anosov, decide_pseudo_anosov_with, impasse_bound, is_mixing, obstruction_bound, DecideOptions,
    ObstructionKind, Status,
};
use geotype_core::refine::{compare_invariants, corner_refine, joint_refine, s_refine, CompareVerdict};
use geotype_core::singular::{census, prepare_for_census, s_adjacent, singularity_classes, u_adjacent};
use geotype_core::symbolic::{
    enumerate_periodic_orbits, gamma, has_corner_property, is_s_boundary_orbit, labels, periodic_boundary_codes,
    s_boundary_code,
};
use geotype_core::{incidence_matrix, validate, GeometricType, DEFAULT_MAX_CELLS, DEFAULT_MAX_PERIOD};

const SEED: u64 = 0x5eed_0001;
const CORPUS: usize = 240;

type Check = Result<(), String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Check {
    let took = start.elapsed();
    ensure(took < limit, || format!("{} took {:?}, limit {:?}", what, took, limit))
}

/// PA goldens in the binary form refinement and census work on.
fn binary_pa_goldens() -> Vec<(&'static str, GeometricType)> {
    PA_GOLDENS
        .iter()
        .map(|&name| {
            let t = golden(name);
            let b = if incidence_matrix(&t).is_binary() { t } else { horizontal_type(&t) };
            (name, b)
        })
        .collect()
}

fn power_matrix(types: &[GeometricType]) -> Check {
    let start = Instant::now();
    for (x, t) in types.iter().enumerate() {
        let a = incidence_matrix(t);
        for m in 1..=4 {
            let p = power(t, m, DEFAULT_MAX_CELLS).map_err(|e| format!("type {} m={}: {}", x, m, e))?;
            let expect = a.checked_pow(m as u32).map_err(|e| e.to_string())?;
            ensure(incidence_matrix(&p) == expect, || format!("type {} m={}: matrix mismatch", x, m))?;
        }
    }
    within(start, Duration::from_secs(10), "corpus sweep")
}

fn inverse_algebra(types: &[GeometricType]) -> Check {
    for (x, t) in types.iter().enumerate() {
        ensure(t.inverse().inverse() == *t, || format!("type {}: inverse is not an involution", x))?;
        for m in 1..=3 {
            let a = power(&t.inverse(), m, DEFAULT_MAX_CELLS).map_err(|e| e.to_string())?;
            let b = power(t, m, DEFAULT_MAX_CELLS).map_err(|e| e.to_string())?.inverse();
            ensure(a == b, || format!("type {} m={}: inverse and power do not commute", x, m))?;
        }
    }
    Ok(())
}

fn horizontal(types: &[GeometricType]) -> Check {
    for (x, t) in types.iter().enumerate() {
        let h = horizontal_type(t);
        ensure(incidence_matrix(&h).is_binary(), || format!("type {}: H(T) not binary", x))?;
        ensure(h.n() == t.alpha(), || format!("type {}: H(T) has {} rectangles", x, h.n()))?;
    }
    ensure(serialize_type(&horizontal_type(&golden("t_db.gt"))) == golden_text("t_fs.gt"), || {
        "H(doubling) differs from the stored full shift".into()
    })
}

fn decisions() -> Check {
    let cases: [(&str, Status, Option<ObstructionKind>); 5] = [
        ("t_id.gt", Status::NotPseudoAnosov, Some(ObstructionKind::DoubleBoundary)),
        ("t_swap.gt", Status::NotPseudoAnosov, Some(ObstructionKind::NotMixing)),
        ("t_hs.gt", Status::NotPseudoAnosov, Some(ObstructionKind::Impasse)),
        ("t_db.gt", Status::NotPseudoAnosov, None),
        ("t_aw.gt", Status::PseudoAnosov, None),
    ];
    for (name, status, kind) in cases {
        let t = golden(name);
        let start = Instant::now();
        let v = decide_pseudo_anosov(&t);
        within(start, Duration::from_secs(1), name)?;
        ensure(v.status == status, || format!("{}: {:?}", name, v.status))?;
        if let Some(k) = kind {
            ensure(v.witness.as_ref().map(|w| w.kind) == Some(k), || format!("{}: witness {:?}", name, v.witness))?;
        }
        match name {
            "t_hs.gt" => ensure(v.witness.as_ref().unwrap().m == 1, || "impasse not at m=1".into())?,
            "t_db.gt" => {
                let w = v.witness.as_ref().ok_or("no witness")?;
                ensure(
                    matches!(w.kind, ObstructionKind::Type1 | ObstructionKind::Type2 | ObstructionKind::Type3)
                        && w.m <= 6,
                    || format!("doubling: {:?} at m={}", w.kind, w.m),
                )?;
            }
            "t_aw.gt" => {
                ensure(impasse_bound(&t) == 2 * t.n() + 1 && obstruction_bound(&t) == 6 * t.n(), || {
                    "sweep bounds".into()
                })?;
                ensure(v.iterates_checked == obstruction_bound(&t), || {
                    format!("cat map checked {} iterates", v.iterates_checked)
                })?;
            }
            _ => {}
        }
    }
    Ok(())
}

fn boundary_codes(types: &[GeometricType]) -> Check {
    // A small cell cap keeps the corpus decision quick; capped types are skipped.
    let opts = DecideOptions { max_cells: 20_000 };
    // The goldens come from pseudo-Anosov maps even where the bounded
    // decision runs out of budget.
    let mut accepted: Vec<GeometricType> = PA_GOLDENS.iter().map(|&g| golden(g)).collect();
    for (x, t) in types.iter().enumerate() {
        for l in labels(t) {
            let mut seen = vec![l];
            let mut cur = l;
            for _ in 0..2 * t.n() {
                cur = gamma(t, cur);
                seen.push(cur);
            }
            let last = *seen.last().unwrap();
            let period_ok = (1..=2 * t.n()).any(|p| seen[seen.len() - 1 - p] == last);
            ensure(period_ok, || format!("type {}: label orbit has not cycled after 2n steps", x))?;
        }
        if decide_pseudo_anosov_with(t, opts).status == Status::PseudoAnosov {
            accepted.push(t.clone());
        }
    }
    // Rectangle itineraries only separate boundary sides when the matrix is
    // binary. A non-binary type is checked through H(T), which the same map
    // realizes.
    for (x, t) in accepted.iter().enumerate() {
        let t = if incidence_matrix(t).is_binary() { t.clone() } else { horizontal_type(t) };
        let codes: Vec<_> = labels(&t).into_iter().map(|l| s_boundary_code(&t, l)).collect();
        ensure(codes.len() == 2 * t.n(), || format!("accepted {}: {} codes", x, codes.len()))?;
        for a in 0..codes.len() {
            for b in a + 1..codes.len() {
                ensure(!codes[a].same_sequence(&codes[b]), || format!("accepted {}: codes {} and {} agree", x, a, b))?;
            }
        }
    }
    Ok(())
}

fn refinement_counting() -> Check {
    for (name, t) in binary_pa_goldens() {
        let orbits = enumerate_periodic_orbits(&t, 3, DEFAULT_MAX_PERIOD).map_err(|e| e.to_string())?;
        for o in orbits.iter().filter(|o| !is_s_boundary_orbit(&t, o)) {
            let (r, _) = s_refine(&t, std::slice::from_ref(o)).map_err(|e| format!("{} {:?}: {}", name, o, e))?;
            ensure(r.n() == t.n() + o.period(), || format!("{} {:?}: N = {}", name, o.word(), r.n()))?;
            ensure(validate(&r).is_valid(), || format!("{} {:?}: invalid output", name, o.word()))?;
            let a = incidence_matrix(&r);
            let rows: Vec<u64> = r.hs().iter().map(|&h| h as u64).collect();
            let cols: Vec<u64> = r.vs().iter().map(|&v| v as u64).collect();
            ensure(a.row_sums() == rows && a.col_sums() == cols, || format!("{} {:?}: sums", name, o.word()))?;
        }
    }
    Ok(())
}

fn corner() -> Check {
    for (name, t) in binary_pa_goldens() {
        let c = corner_refine(&t).map_err(|e| format!("{}: {}", name, e))?;
        ensure(has_corner_property(&c), || format!("{}: not corner", name))?;
        let cc = corner_refine(&c).map_err(|e| format!("{}: {}", name, e))?;
        ensure(cc == c, || format!("{}: corner refinement not idempotent", name))?;
    }
    Ok(())
}

fn genus_oracles() -> Check {
    let start = Instant::now();
    let aw = census(&golden("t_aw.gt")).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(1), "cat map census")?;
    ensure(aw.genus == 1 && aw.euler_characteristic_quarters == 0, || format!("cat map genus {}", aw.genus))?;
    ensure(aw.classes.iter().all(|c| c.size() == 4), || "cat map class sizes".into())?;
    let start = Instant::now();
    let sq = census(&golden("t_sq.gt")).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(1), "sphere census")?;
    ensure(sq.genus == 0 && sq.euler_characteristic_quarters == 8, || format!("sphere genus {}", sq.genus))?;
    let spines = sq.classes.iter().filter(|c| c.size() == 2 && c.is_spine()).count();
    ensure(spines == 4 && sq.spine_count == 4, || format!("sphere has {} spines", spines))
}

fn genus_invariance() -> Check {
    for (name, t) in binary_pa_goldens() {
        let base = census(&t).map_err(|e| format!("{}: {}", name, e))?;
        let key = |r: &geotype_core::singular::SingularityReport| (r.genus, r.prongs.clone());
        let mut variants: Vec<(String, GeometricType)> = Vec::new();
        for m in 2..=3 {
            variants.push((format!("power {}", m), power(&t, m, DEFAULT_MAX_CELLS).map_err(|e| e.to_string())?));
        }
        let orbits = enumerate_periodic_orbits(&t, 3, DEFAULT_MAX_PERIOD).map_err(|e| e.to_string())?;
        for o in orbits.iter().filter(|o| !is_s_boundary_orbit(&t, o)) {
            let (r, _) = s_refine(&t, std::slice::from_ref(o)).map_err(|e| e.to_string())?;
            variants.push((format!("refine {:?}", o.word()), r));
        }
        variants.push(("corner".into(), corner_refine(&t).map_err(|e| e.to_string())?));
        for (what, v) in variants {
            let r = census(&v).map_err(|e| format!("{} {}: {}", name, what, e))?;
            ensure(key(&r) == key(&base), || {
                format!(
                    "{} {}: genus {} prongs {:?}, base {} {:?}",
                    name, what, r.genus, r.prongs, base.genus, base.prongs
                )
            })?;
        }
    }
    Ok(())
}

fn class_structure() -> Check {
    for (name, t) in binary_pa_goldens() {
        let c = prepare_for_census(&t).map_err(|e| e.to_string())?;
        let codes = periodic_boundary_codes(&c).map_err(|e| e.to_string())?;
        let classes = singularity_classes(&c).map_err(|e| format!("{}: {}", name, e))?;
        ensure(classes.iter().all(|k| k.size() % 2 == 0), || format!("{}: odd class", name))?;
        let total: usize = classes.iter().map(|k| k.size()).sum();
        ensure(total == codes.len(), || format!("{}: sizes sum to {} of {}", name, total, codes.len()))?;
        for a in 0..codes.len() {
            let s = (0..codes.len()).filter(|&b| b != a && s_adjacent(&c, &codes[a], &codes[b])).count();
            let u = (0..codes.len()).filter(|&b| b != a && u_adjacent(&c, &codes[a], &codes[b])).count();
            ensure(s == 1 && u == 1, || format!("{}: code {} has {} s- and {} u-partners", name, a + 1, s, u))?;
        }
    }
    Ok(())
}

fn trace_oracle(types: &[GeometricType]) -> Check {
    let mut tested = 0;
    for (x, t) in types.iter().enumerate() {
        let a = incidence_matrix(t);
        if !a.is_binary() || !is_mixing(t).0 {
            continue;
        }
        tested += 1;
        let orbits = enumerate_periodic_orbits(t, 6, DEFAULT_MAX_PERIOD).map_err(|e| e.to_string())?;
        for m in 1..=6 {
            let points: usize = orbits.iter().filter(|o| m % o.period() == 0).map(|o| o.period()).sum();
            let trace = a.checked_pow(m as u32).map_err(|e| e.to_string())?.trace();
            ensure(points as u64 == trace, || format!("type {} m={}: {} points, trace {}", x, m, points, trace))?;
        }
    }
    ensure(tested > 0, || "no binary mixing type in the corpus".into())
}

fn joint_pipeline() -> Check {
    let start = Instant::now();
    let aw = horizontal_type(&golden("t_aw.gt"));
    let orbits = enumerate_periodic_orbits(&aw, 3, DEFAULT_MAX_PERIOD).map_err(|e| e.to_string())?;
    let o = orbits.iter().find(|o| !is_s_boundary_orbit(&aw, o)).ok_or("no interior orbit")?;
    let (refined, _) = s_refine(&aw, std::slice::from_ref(o)).map_err(|e| e.to_string())?;
    let (f, g) = joint_refine(&aw, &refined, DEFAULT_MAX_PERIOD).map_err(|e| e.to_string())?;
    ensure(has_corner_property(&f) && has_corner_property(&g), || "joint outputs are not corner".into())?;
    let same = compare_invariants(&f, &g).map_err(|e| e.to_string())?;
    ensure(same.verdict == CompareVerdict::Compatible, || format!("refined pair: {}", same.verdict.text()))?;
    ensure(same.verdict.text().starts_with("compatible"), || "verdict text".into())?;
    let g2 = horizontal_type(&golden("t_g2.gt"));
    let other = compare_invariants(&aw, &g2).map_err(|e| e.to_string())?;
    ensure(other.verdict == CompareVerdict::NecessarilyDistinct, || format!("genus 2: {}", other.verdict.text()))?;
    within(start, Duration::from_secs(5), "joint pipeline")
}

fn main() {
    let types = corpus(SEED, CORPUS);
    let criteria: Vec<Criterion> = vec![
        ("power matrix equals A^m on the corpus", Box::new(|| power_matrix(&types))),
        ("inverse is an involution commuting with powers", Box::new(|| inverse_algebra(&types))),
        ("horizontal type is binary with n' = sum h", Box::new(|| horizontal(&types))),
        ("decision procedure on the goldens", Box::new(decisions)),
        ("boundary codes cycle and stay distinct", Box::new(|| boundary_codes(&types))),
        ("s-refinement adds one rectangle per orbit point", Box::new(refinement_counting)),
        ("corner refinement is corner and idempotent", Box::new(corner)),
        ("genus of the torus and sphere goldens", Box::new(genus_oracles)),
        ("genus and prongs survive powers and refinements", Box::new(genus_invariance)),
        ("singularity classes are even cycles", Box::new(class_structure)),
        ("periodic orbit count matches traces", Box::new(|| trace_oracle(&types))),
        ("joint refinement and comparison", Box::new(joint_pipeline)),
    ];
    let mut failed = 0;
    for (k, (what, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok(()) => println!("PASS criterion {}: {} ({:.2?})", k + 1, what, start.elapsed()),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {}: {}: {}", k + 1, what, e);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
