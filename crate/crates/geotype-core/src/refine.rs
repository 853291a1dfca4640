//! Refinements along periodic orbits.
//!
//! Every shift `t` of a periodic orbit `w` gives a stable interval of
//! rectangle `w_t`, lying inside the horizontal sub-rectangle `H_{j_t}` that
//! maps into `w_{t+1}`. The s-refinement cuts each rectangle along all such
//! intervals; the slabs between consecutive cuts become the new rectangles.
//! Positions inside a rectangle run `0` (bottom side), `1..=O` (intervals in
//! vertical order) and `O+1` (top side); slab `s` lies between positions
//! `s-1` and `s`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::matrix::incidence_matrix;
use crate::paclass::is_mixing;
use crate::singular::census;
use crate::symbolic::{boundary_orbits, enumerate_periodic_orbits, s_boundary_orbits, PeriodicOrbit};
use crate::types::{prefix_sums, Cell, GeometricType, Sign};
use crate::Error;

/// The `j` with `ξ(w_t, j) = w_{t+1}`; unique when `A` is binary.
pub fn unique_j(t: &GeometricType, orbit: &PeriodicOrbit, shift: usize) -> usize {
    let (i, k) = (orbit.at(shift), orbit.at(shift + 1));
    (0..t.h(i)).find(|&j| t.xi(i, j) == k).expect("orbit is admissible")
}

/// Shift `t` of orbit number `orbit` of the family; it lives in rectangle `host`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntervalIndex {
    pub orbit: usize,
    pub t: usize,
    pub host: usize,
}

/// First step `M >= 1` where the two shifted codes differ, and the sign
/// product `δ` of the first `M-1` steps of the first code.
pub fn interchange_delta(
    t: &GeometricType,
    (t1, o1): (usize, &PeriodicOrbit),
    (t2, o2): (usize, &PeriodicOrbit),
) -> Result<(usize, Sign), Error> {
    let bound = o1.period() * o2.period() + 1;
    let mut delta: Sign = 1;
    for m in 1..=bound {
        if o1.at(t1 + m) != o2.at(t2 + m) {
            return Ok((m, delta));
        }
        delta *= t.eps(o1.at(t1 + m - 1), unique_j(t, o1, t1 + m - 1));
    }
    Err(Error::IdenticalCodes)
}

/// Vertical order of two intervals hosted in the same rectangle.
pub fn compare_intervals(
    t: &GeometricType,
    (t1, o1): (usize, &PeriodicOrbit),
    (t2, o2): (usize, &PeriodicOrbit),
) -> Result<Ordering, Error> {
    let (m, delta) = interchange_delta(t, (t1, o1), (t2, o2))?;
    let j1 = unique_j(t, o1, t1 + m - 1);
    let j2 = unique_j(t, o2, t2 + m - 1);
    let ord = j1.cmp(&j2);
    Ok(if delta == 1 { ord } else { ord.reverse() })
}

/// The intervals of rectangle `i` from bottom to top (positions `1..=O`).
pub fn interval_order(t: &GeometricType, family: &[PeriodicOrbit], i: usize) -> Result<Vec<IntervalIndex>, Error> {
    let mut items: Vec<IntervalIndex> = Vec::new();
    for (o, w) in family.iter().enumerate() {
        for s in 0..w.period() {
            if w.at(s) == i {
                items.push(IntervalIndex { orbit: o, t: s, host: i });
            }
        }
    }
    let mut failure = None;
    items.sort_by(|a, b| {
        if a == b {
            return Ordering::Equal;
        }
        compare_intervals(t, (a.t, &family[a.orbit]), (b.t, &family[b.orbit])).unwrap_or_else(|e| {
            failure = Some(e);
            Ordering::Equal
        })
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(items),
    }
}

/// How a slab meets one of its horizontal sub-rectangles `H_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PieceCase {
    /// `H_j` lies inside the slab.
    Whole,
    /// Only the slab's lower cut crosses `H_j`.
    LowerCut,
    /// Only the slab's upper cut crosses `H_j`.
    UpperCut,
    /// Both cuts cross `H_j`.
    BothCuts,
}

/// The part of slab `H(r)` coming from `H_j` of the parent, and how many
/// horizontal sub-rectangles of the refined rectangle it yields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub j: usize,
    pub count: usize,
    pub case: PieceCase,
}

/// One rectangle of the refined type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RefinedRect {
    /// Parent rectangle.
    pub parent: usize,
    /// Slab number, `1..=N_parent`.
    pub slab: usize,
    /// Label in the refined type.
    pub label: usize,
    /// Bounding intervals; `None` is the parent's own side.
    pub lower: Option<IntervalIndex>,
    pub upper: Option<IntervalIndex>,
    pub pieces: Vec<Piece>,
}

/// Which side was refined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RefinementSide {
    Stable,
    /// Computed as an s-refinement of the inverse type along reversed words.
    Unstable,
}

/// Everything needed to relate the refined type to its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementBookkeeping {
    pub side: RefinementSide,
    /// The orbits actually cut along, in the alphabet of the refined parent.
    pub orbits: Vec<PeriodicOrbit>,
    /// Per parent rectangle, intervals from bottom to top.
    pub order: Vec<Vec<IntervalIndex>>,
    /// Per parent rectangle, the first refined label.
    pub offsets: Vec<usize>,
    pub rects: Vec<RefinedRect>,
}

impl RefinementBookkeeping {
    /// `O(i) + 1`.
    pub fn slabs(&self, i: usize) -> usize {
        self.order[i].len() + 1
    }

    /// Refined label of slab `s` (`1..=O+1`) of rectangle `i`.
    pub fn label(&self, i: usize, s: usize) -> usize {
        self.offsets[i] + s - 1
    }

    /// Position (`1..=O`) of shift `t` of orbit `o` inside its host.
    pub fn position(&self, o: usize, t: usize) -> usize {
        let w = &self.orbits[o];
        let t = t % w.period();
        1 + self.order[w.at(t)].iter().position(|x| x.orbit == o && x.t == t).expect("interval is ordered")
    }

    /// Parent of a refined label.
    pub fn parent(&self, label: usize) -> usize {
        self.rects[label].parent
    }

    /// Total number of refined rectangles.
    pub fn n(&self) -> usize {
        self.rects.len()
    }
}

fn require_binary(t: &GeometricType) -> Result<(), Error> {
    if incidence_matrix(t).is_binary() {
        Ok(())
    } else {
        Err(Error::NotBinary)
    }
}

/// The s-boundary refinement of `t` along `family`.
///
/// Orbits are re-validated in `t`, deduplicated, and s-boundary orbits are
/// dropped since cutting along them changes nothing.
pub fn s_refine(t: &GeometricType, family: &[PeriodicOrbit]) -> Result<(GeometricType, RefinementBookkeeping), Error> {
    require_binary(t)?;
    let boundary = s_boundary_orbits(t);
    let mut set = BTreeSet::new();
    for w in family {
        let w = PeriodicOrbit::new(t, w.word())?;
        if !boundary.contains(&w) {
            set.insert(w);
        }
    }
    let orbits: Vec<PeriodicOrbit> = set.into_iter().collect();
    let n = t.n();
    let order = (0..n).map(|i| interval_order(t, &orbits, i)).collect::<Result<Vec<_>, _>>()?;
    let sizes: Vec<usize> = order.iter().map(|o| o.len() + 1).collect();
    let offsets = prefix_sums(&sizes);

    let mut bk = RefinementBookkeeping { side: RefinementSide::Stable, orbits, order, offsets, rects: Vec::new() };
    let mut h = Vec::new();
    let mut v = Vec::new();
    let mut rows = Vec::new();
    for i in 0..n {
        let o = bk.order[i].len();
        for s in 1..=o + 1 {
            let lower = (s > 1).then(|| bk.order[i][s - 2]);
            let upper = (s <= o).then(|| bk.order[i][s - 1]);
            let jcut = |c: IntervalIndex| unique_j(t, &bk.orbits[c.orbit], c.t);
            let jlo = lower.map_or(0, jcut);
            let jhi = upper.map_or(t.h(i) - 1, jcut);
            let mut row = Vec::new();
            let mut pieces = Vec::new();
            for j in jlo..=jhi {
                let c = t.phi(i, j);
                let o_k = bk.order[c.k].len();
                // Position in rectangle k of the image of each bound of the slab ∩ H_j.
                let cut_lo = lower.filter(|&x| jcut(x) == j);
                let cut_hi = upper.filter(|&x| jcut(x) == j);
                let (side_lo, side_hi) = if c.eps == 1 { (0, o_k + 1) } else { (o_k + 1, 0) };
                let lo = cut_lo.map_or(side_lo, |x| bk.position(x.orbit, x.t + 1));
                let hi = cut_hi.map_or(side_hi, |x| bk.position(x.orbit, x.t + 1));
                let slabs: Vec<usize> =
                    if c.eps == 1 { (lo + 1..=hi).collect() } else { (hi + 1..=lo).rev().collect() };
                for &s2 in &slabs {
                    row.push(Cell { k: bk.label(c.k, s2), l: c.l, eps: c.eps });
                }
                let case = match (cut_lo.is_some(), cut_hi.is_some()) {
                    (false, false) => PieceCase::Whole,
                    (true, false) => PieceCase::LowerCut,
                    (false, true) => PieceCase::UpperCut,
                    (true, true) => PieceCase::BothCuts,
                };
                pieces.push(Piece { j, count: slabs.len(), case });
            }
            h.push(row.len());
            v.push(t.v(i));
            rows.push(row);
            bk.rects.push(RefinedRect { parent: i, slab: s, label: bk.label(i, s), lower, upper, pieces });
        }
    }
    let refined = GeometricType::new(h, v, rows)
        .map_err(|r| Error::Inconsistent(format!("refined type does not validate: {:?}", r.violations)))?;
    Ok((refined, bk))
}

/// The u-boundary refinement: `s_refine` on the inverse along reversed words, inverted back.
pub fn u_refine(t: &GeometricType, family: &[PeriodicOrbit]) -> Result<(GeometricType, RefinementBookkeeping), Error> {
    let inv = t.inverse();
    let reversed: Vec<PeriodicOrbit> = family.iter().map(|w| w.reversed()).collect();
    let (r, mut bk) = s_refine(&inv, &reversed)?;
    bk.side = RefinementSide::Unstable;
    Ok((r.inverse(), bk))
}

fn require_binary_mixing(t: &GeometricType) -> Result<(), Error> {
    require_binary(t)?;
    if is_mixing(t).0 {
        Ok(())
    } else {
        Err(Error::NotMixing)
    }
}

/// Cuts along the u-boundary orbits, then along the s-boundary orbits of the
/// result, so that every boundary periodic point becomes a corner.
pub fn corner_refine(t: &GeometricType) -> Result<GeometricType, Error> {
    require_binary_mixing(t)?;
    let (t1, _) = s_refine(t, &boundary_orbits(t))?;
    let (t2, _) = u_refine(&t1, &s_boundary_orbits(&t1))?;
    Ok(t2)
}

/// Cuts along every periodic orbit of period at most `p`, then corner-refines.
pub fn bounded_corner_refine(t: &GeometricType, p: usize, max_period: usize) -> Result<GeometricType, Error> {
    require_binary_mixing(t)?;
    let family = enumerate_periodic_orbits(t, p, max_period)?;
    let (t1, _) = s_refine(t, &family)?;
    corner_refine(&t1)
}

/// Longest period among boundary periodic orbits.
pub fn max_boundary_period(t: &GeometricType) -> usize {
    boundary_orbits(t).iter().map(|o| o.period()).max().unwrap_or(0)
}

/// Both types refined along all orbits up to the larger of their maximal boundary periods.
pub fn joint_refine(
    tf: &GeometricType,
    tg: &GeometricType,
    max_period: usize,
) -> Result<(GeometricType, GeometricType), Error> {
    require_binary_mixing(tf)?;
    require_binary_mixing(tg)?;
    let p = max_boundary_period(tf).max(max_boundary_period(tg));
    Ok((bounded_corner_refine(tf, p, max_period)?, bounded_corner_refine(tg, p, max_period)?))
}

/// Invariants that conjugate pseudo-Anosov maps share.
#[derive(Clone, Debug, PartialEq)]
pub struct Invariants {
    pub genus: u64,
    /// Prong numbers of the singular (non-regular) classes, ascending.
    pub prongs: Vec<usize>,
    pub spine_count: usize,
    pub dilatation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareVerdict {
    NecessarilyDistinct,
    Compatible,
}

impl CompareVerdict {
    pub fn text(&self) -> &'static str {
        match self {
            CompareVerdict::NecessarilyDistinct => "necessarily distinct",
            CompareVerdict::Compatible => "compatible (inconclusive — strong equivalence not decided)",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub first: Invariants,
    pub second: Invariants,
    pub verdict: CompareVerdict,
}

/// Genus, prong census and dilatation of `t`.
///
/// The caller is responsible for `t` being in the pseudo-Anosov class.
pub fn invariants(t: &GeometricType) -> Result<Invariants, Error> {
    let report = census(t)?;
    Ok(Invariants {
        genus: report.genus,
        prongs: report.prongs.clone(),
        spine_count: report.spine_count,
        dilatation: incidence_matrix(t).perron_root(),
    })
}

/// Compares necessary invariants. "Compatible" never claims conjugacy.
pub fn compare_invariants(t1: &GeometricType, t2: &GeometricType) -> Result<Comparison, Error> {
    let first = invariants(t1)?;
    let second = invariants(t2)?;
    let same = first.genus == second.genus
        && first.prongs == second.prongs
        && first.spine_count == second.spine_count
        && (first.dilatation - second.dilatation).abs() <= 1e-9 * first.dilatation.max(1.0);
    let verdict = if same { CompareVerdict::Compatible } else { CompareVerdict::NecessarilyDistinct };
    Ok(Comparison { first, second, verdict })
}

/// Lifts an orbit of the family to the refined alphabet, once starting from
/// the slab just below its interval in `w_0` and once from the slab above.
///
/// Each run follows the slab through the flips of `ε` and closes after `P`
/// or `2P` steps.
pub fn lift_orbit_through_s_refinement(
    t: &GeometricType,
    bk: &RefinementBookkeeping,
    orbit: &PeriodicOrbit,
) -> Result<(PeriodicOrbit, PeriodicOrbit), Error> {
    if bk.side != RefinementSide::Stable {
        return Err(Error::InvalidArgument("lifting needs s-refinement bookkeeping".into()));
    }
    let o = bk
        .orbits
        .iter()
        .position(|w| w == orbit)
        .ok_or_else(|| Error::BadOrbit("orbit is not cut by this refinement".into()))?;
    let p = orbit.period();
    let run = |start_above: bool| -> Result<PeriodicOrbit, Error> {
        let mut above = start_above;
        let mut word = Vec::new();
        for step in 0..2 * p {
            if step == p && above == start_above {
                break;
            }
            let i = orbit.at(step);
            let s = bk.position(o, step) + usize::from(above);
            if bk.label(i, s) >= bk.n() || bk.parent(bk.label(i, s)) != i {
                return Err(Error::Inconsistent("lifting left the parent rectangle".into()));
            }
            word.push(bk.label(i, s));
            if t.eps(i, unique_j(t, orbit, step)) == -1 {
                above = !above;
            }
        }
        if above != start_above {
            return Err(Error::Inconsistent("lifted run did not close".into()));
        }
        Ok(PeriodicOrbit::canonical(&word))
    };
    Ok((run(false)?, run(true)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::has_corner_property;

    fn fs() -> GeometricType {
        GeometricType::new(
            vec![2, 2],
            vec![2, 2],
            vec![vec![Cell::new(0, 0, 1), Cell::new(1, 0, 1)], vec![Cell::new(0, 1, 1), Cell::new(1, 1, 1)]],
        )
        .unwrap()
    }

    fn orbit(t: &GeometricType, w: &[usize]) -> PeriodicOrbit {
        PeriodicOrbit::new(t, w).unwrap()
    }

    #[test]
    fn unique_j_on_full_shift() {
        let t = fs();
        let w = orbit(&t, &[0, 1]);
        assert_eq!(unique_j(&t, &w, 0), 1);
        assert_eq!(unique_j(&t, &w, 1), 0);
        assert_eq!(unique_j(&t, &orbit(&t, &[0]), 0), 0);
    }

    #[test]
    fn delta_first_step() {
        let t = fs();
        let (a, b) = (orbit(&t, &[0, 1]), orbit(&t, &[0]));
        assert_eq!(interchange_delta(&t, (0, &a), (0, &b)), Ok((1, 1)));
        assert_eq!(interchange_delta(&t, (0, &a), (0, &a)), Err(Error::IdenticalCodes));
    }

    #[test]
    fn full_shift_refined_along_two_cycle() {
        let t = fs();
        let (r, bk) = s_refine(&t, &[orbit(&t, &[0, 1])]).unwrap();
        assert_eq!(r.n(), 4);
        assert!(r.vs().iter().all(|&x| x == 2));
        assert_eq!(bk.position(0, 0), 1);
        let (a, b) = lift_orbit_through_s_refinement(&t, &bk, &bk.orbits[0]).unwrap();
        for w in [&a, &b] {
            assert_eq!(w.period(), 2);
            assert!(PeriodicOrbit::new(&r, w.word()).is_ok());
            let projected: Vec<usize> = w.word().iter().map(|&x| bk.parent(x)).collect();
            assert_eq!(PeriodicOrbit::canonical(&projected), bk.orbits[0]);
        }
    }

    #[test]
    fn boundary_orbits_are_no_ops() {
        let t = fs();
        let (r, _) = s_refine(&t, &[orbit(&t, &[0]), orbit(&t, &[1])]).unwrap();
        assert_eq!(r, t);
        assert_eq!(corner_refine(&t).unwrap(), t);
        assert_eq!(bounded_corner_refine(&t, 1, 12).unwrap(), t);
        assert!(has_corner_property(&t));
    }

    #[test]
    fn u_refine_mirrors_s_refine() {
        let t = fs();
        let w = orbit(&t, &[0, 1]);
        let (u, _) = u_refine(&t, std::slice::from_ref(&w)).unwrap();
        let (s, _) = s_refine(&t.inverse(), &[w.reversed()]).unwrap();
        assert_eq!(u, s.inverse());
        assert_eq!(u.n(), 4);
    }
}
