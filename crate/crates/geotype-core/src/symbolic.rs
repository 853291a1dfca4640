//! Boundary codes from the generating functions `Γ` and `Υ`, and periodic
//! orbits of the subshift `Σ_A`.
//!
//! A label `(i, ε)` names a side of rectangle `i`: for s-labels `ε = +1` is
//! the top and `-1` the bottom; for u-labels the same convention is read on
//! the inverse type. Symbols are 0-based rectangle indices.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::incidence_matrix;
use crate::paclass::is_mixing;
use crate::types::{GeometricType, Sign};
use crate::Error;

pub use crate::refine::lift_orbit_through_s_refinement;

/// A rectangle side `(i, ε)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryLabel {
    pub i: usize,
    pub eps: Sign,
}

impl BoundaryLabel {
    pub fn new(i: usize, eps: Sign) -> Self {
        BoundaryLabel { i, eps }
    }
}

/// All `2n` labels, ordered by rectangle then bottom before top.
pub fn labels(t: &GeometricType) -> Vec<BoundaryLabel> {
    (0..t.n()).flat_map(|i| [BoundaryLabel::new(i, -1), BoundaryLabel::new(i, 1)]).collect()
}

/// Horizontal sub-rectangle on side `eps` of rectangle `i` (0-based).
pub fn theta(t: &GeometricType, i: usize, eps: Sign) -> usize {
    if eps == 1 {
        t.h(i) - 1
    } else {
        0
    }
}

/// One step of the s-generating function.
pub fn gamma(t: &GeometricType, label: BoundaryLabel) -> BoundaryLabel {
    let j = theta(t, label.i, label.eps);
    let c = t.phi(label.i, j);
    BoundaryLabel::new(c.k, label.eps * c.eps)
}

/// One step of the u-generating function, `Γ` of the inverse type.
pub fn upsilon(t: &GeometricType, label: BoundaryLabel) -> BoundaryLabel {
    gamma(&t.inverse(), label)
}

/// Which generating function produced a code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CodeSide {
    /// `I^+`: forward symbols under `Γ`.
    SPositive,
    /// `J^-`: backward symbols under `Υ`, listed from time 0 downwards.
    UNegative,
}

/// An eventually periodic boundary code.
///
/// `preperiod` and `period` are the symbols of the label orbit before and on
/// its cycle; their total length is at most `2n`. Two codes describe the same
/// sequence iff their [`BoundaryCode::normal_form`]s agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryCode {
    pub label: BoundaryLabel,
    pub preperiod: Vec<usize>,
    pub period: Vec<usize>,
    pub side: CodeSide,
}

impl BoundaryCode {
    /// Symbol at time `m` (backward time for u-codes).
    pub fn symbol(&self, m: usize) -> usize {
        if m < self.preperiod.len() {
            self.preperiod[m]
        } else {
            self.period[(m - self.preperiod.len()) % self.period.len()]
        }
    }

    /// Shortest preperiod and primitive period describing the same sequence.
    pub fn normal_form(&self) -> (Vec<usize>, Vec<usize>) {
        let mut per = primitive_root(&self.period).to_vec();
        let mut pre = self.preperiod.clone();
        while let Some(&last) = pre.last() {
            if last != *per.last().unwrap() {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        (pre, per)
    }

    pub fn same_sequence(&self, other: &BoundaryCode) -> bool {
        self.normal_form() == other.normal_form()
    }
}

/// Iterates `step` from `label` until a label repeats.
fn label_orbit(
    start: BoundaryLabel,
    mut step: impl FnMut(BoundaryLabel) -> BoundaryLabel,
) -> (Vec<BoundaryLabel>, usize) {
    let mut seen: Vec<BoundaryLabel> = vec![start];
    loop {
        let next = step(*seen.last().unwrap());
        if let Some(p) = seen.iter().position(|&x| x == next) {
            return (seen, p);
        }
        seen.push(next);
    }
}

fn code_from_orbit(label: BoundaryLabel, orbit: &[BoundaryLabel], cycle_start: usize, side: CodeSide) -> BoundaryCode {
    BoundaryCode {
        label,
        preperiod: orbit[..cycle_start].iter().map(|l| l.i).collect(),
        period: orbit[cycle_start..].iter().map(|l| l.i).collect(),
        side,
    }
}

/// `I^+(label)`.
pub fn s_boundary_code(t: &GeometricType, label: BoundaryLabel) -> BoundaryCode {
    let (orbit, p) = label_orbit(label, |l| gamma(t, l));
    code_from_orbit(label, &orbit, p, CodeSide::SPositive)
}

/// `J^-(label)`, computed as `I^+` of the inverse type.
pub fn u_boundary_code(t: &GeometricType, label: BoundaryLabel) -> BoundaryCode {
    let inv = t.inverse();
    let (orbit, p) = label_orbit(label, |l| gamma(&inv, l));
    code_from_orbit(label, &orbit, p, CodeSide::UNegative)
}

/// Labels lying on a cycle of `Γ` of `t`, each with its cycle word.
fn periodic_labels(t: &GeometricType) -> Vec<(BoundaryLabel, Vec<usize>)> {
    labels(t)
        .into_iter()
        .filter_map(|l| {
            let (orbit, p) = label_orbit(l, |x| gamma(t, x));
            (p == 0).then(|| (l, orbit.iter().map(|x| x.i).collect()))
        })
        .collect()
}

/// A periodic point on the boundary: a `Γ`-periodic s-label and the
/// `Υ`-periodic u-label of the same rectangle whose backward symbols continue
/// the same periodic word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicBoundaryCode {
    pub iota: usize,
    pub s_label: BoundaryLabel,
    pub u_label: BoundaryLabel,
    /// `w_0 … w_{L-1}` along the `Γ`-cycle of `s_label`, with `w_0 = s_label.i`.
    pub word: Vec<usize>,
}

impl PeriodicBoundaryCode {
    pub fn orbit(&self) -> PeriodicOrbit {
        PeriodicOrbit::canonical(primitive_root(&self.word))
    }
}

// True when the forward cycle word `fwd` read backwards from its first symbol
// equals the forward word `bwd` of the other function.
fn backward_match(fwd: &[usize], bwd: &[usize]) -> bool {
    let (a, b) = (fwd.len(), bwd.len());
    fwd[0] == bwd[0] && (0..a * b).all(|m| bwd[m % b] == fwd[(a - m % a) % a])
}

fn match_labels(to: &[(BoundaryLabel, Vec<usize>)], l: &(BoundaryLabel, Vec<usize>)) -> Option<BoundaryLabel> {
    to.iter().find(|(m, w)| m.i == l.0.i && backward_match(&l.1, w)).map(|x| x.0)
}

fn require_binary_mixing(t: &GeometricType) -> Result<(), Error> {
    if !incidence_matrix(t).is_binary() {
        return Err(Error::NotBinary);
    }
    if !is_mixing(t).0 {
        return Err(Error::NotMixing);
    }
    Ok(())
}

/// All periodic boundary codes, one per `Γ`-periodic s-label, in label order.
///
/// Fails with [`Error::NoMatchingULabel`] when some s-label has no partner;
/// that happens exactly when the corner property fails on the s side.
pub fn periodic_boundary_codes(t: &GeometricType) -> Result<Vec<PeriodicBoundaryCode>, Error> {
    require_binary_mixing(t)?;
    let s = periodic_labels(t);
    let u = periodic_labels(&t.inverse());
    s.iter()
        .enumerate()
        .map(|(iota, l)| match match_labels(&u, l) {
            Some(ul) => Ok(PeriodicBoundaryCode { iota, s_label: l.0, u_label: ul, word: l.1.clone() }),
            None => Err(Error::NoMatchingULabel { i: l.0.i, eps: l.0.eps }),
        })
        .collect()
}

/// Every periodic s-label has a matching periodic u-label and vice versa.
///
/// False (not an error) when the matrix is not binary or not mixing.
pub fn has_corner_property(t: &GeometricType) -> bool {
    if require_binary_mixing(t).is_err() {
        return false;
    }
    let s = periodic_labels(t);
    let u = periodic_labels(&t.inverse());
    s.iter().all(|l| match_labels(&u, l).is_some()) && u.iter().all(|l| match_labels(&s, l).is_some())
}

/// A primitive admissible cyclic word, stored as its least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicOrbit {
    word: Vec<usize>,
}

impl Ord for PeriodicOrbit {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        (self.word.len(), &self.word).cmp(&(other.word.len(), &other.word))
    }
}

impl PartialOrd for PeriodicOrbit {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl PeriodicOrbit {
    /// Checks admissibility in `t` and primitivity, then canonicalizes.
    pub fn new(t: &GeometricType, word: &[usize]) -> Result<Self, Error> {
        if word.is_empty() {
            return Err(Error::BadOrbit("empty word".into()));
        }
        let a = incidence_matrix(t);
        for (x, &s) in word.iter().enumerate() {
            if s >= t.n() {
                return Err(Error::BadOrbit(format!("symbol {} out of range", s + 1)));
            }
            let next = word[(x + 1) % word.len()];
            if next < t.n() && a.get(s, next) == 0 {
                return Err(Error::BadOrbit(format!("transition {} -> {} not allowed", s + 1, next + 1)));
            }
        }
        if primitive_root(word).len() != word.len() {
            return Err(Error::BadOrbit("word is not primitive".into()));
        }
        Ok(Self::canonical(word))
    }

    /// Least rotation of `word`, which must already be primitive.
    pub(crate) fn canonical(word: &[usize]) -> Self {
        PeriodicOrbit { word: least_rotation(word) }
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn period(&self) -> usize {
        self.word.len()
    }

    /// `w_t` with `t` taken mod the period.
    pub fn at(&self, t: usize) -> usize {
        self.word[t % self.word.len()]
    }

    /// The same orbit read backwards, an orbit of the inverse type.
    pub fn reversed(&self) -> Self {
        let mut w = self.word.clone();
        w.reverse();
        Self::canonical(&w)
    }
}

/// Shortest `p` with `word = p^k`.
pub fn primitive_root(word: &[usize]) -> &[usize] {
    let n = word.len();
    for d in 1..=n {
        if n % d == 0 && (d..n).all(|x| word[x] == word[x - d]) {
            return &word[..d];
        }
    }
    word
}

fn least_rotation(word: &[usize]) -> Vec<usize> {
    let n = word.len();
    let best =
        (0..n).min_by(|&a, &b| (0..n).map(|x| word[(a + x) % n]).cmp((0..n).map(|x| word[(b + x) % n]))).unwrap_or(0);
    (0..n).map(|x| word[(best + x) % n]).collect()
}

/// All primitive periodic orbits of period at most `p`, ordered by period then word.
pub fn enumerate_periodic_orbits(t: &GeometricType, p: usize, cap: usize) -> Result<Vec<PeriodicOrbit>, Error> {
    if p > cap {
        return Err(Error::PeriodCapExceeded { period: p, cap });
    }
    let a = incidence_matrix(t);
    if !a.is_binary() {
        return Err(Error::NotBinary);
    }
    let n = t.n();
    let succ: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&k| a.get(i, k) > 0).collect()).collect();
    let mut out = Vec::new();
    for len in 1..=p {
        for s in 0..n {
            let mut word = vec![s];
            extend(&succ, len, &mut word, &mut out);
        }
    }
    out.sort();
    Ok(out)
}

// Grows closed walks whose symbols are all >= the first one, keeping those that
// are primitive and already in least rotation.
fn extend(succ: &[Vec<usize>], len: usize, word: &mut Vec<usize>, out: &mut Vec<PeriodicOrbit>) {
    let s = word[0];
    let last = *word.last().unwrap();
    if word.len() == len {
        if succ[last].contains(&s) && primitive_root(word).len() == len && least_rotation(word) == *word {
            out.push(PeriodicOrbit { word: word.clone() });
        }
        return;
    }
    for &k in &succ[last] {
        if k >= s {
            word.push(k);
            extend(succ, len, word, out);
            word.pop();
        }
    }
}

/// Orbits carried by some periodic s-label.
pub fn s_boundary_orbits(t: &GeometricType) -> Vec<PeriodicOrbit> {
    let set: BTreeSet<PeriodicOrbit> =
        periodic_labels(t).iter().map(|(_, w)| PeriodicOrbit::canonical(primitive_root(w))).collect();
    set.into_iter().collect()
}

/// Orbits carried by some periodic u-label, in the alphabet of `t`.
pub fn u_boundary_orbits(t: &GeometricType) -> Vec<PeriodicOrbit> {
    let set: BTreeSet<PeriodicOrbit> = s_boundary_orbits(&t.inverse()).iter().map(|o| o.reversed()).collect();
    set.into_iter().collect()
}

/// Union of the s- and u-boundary orbits.
pub fn boundary_orbits(t: &GeometricType) -> Vec<PeriodicOrbit> {
    let mut set: BTreeSet<PeriodicOrbit> = s_boundary_orbits(t).into_iter().collect();
    set.extend(u_boundary_orbits(t));
    set.into_iter().collect()
}

pub fn is_s_boundary_orbit(t: &GeometricType, orbit: &PeriodicOrbit) -> bool {
    s_boundary_orbits(t).contains(orbit)
}

pub fn is_u_boundary_orbit(t: &GeometricType, orbit: &PeriodicOrbit) -> bool {
    is_s_boundary_orbit(&t.inverse(), &orbit.reversed())
}
