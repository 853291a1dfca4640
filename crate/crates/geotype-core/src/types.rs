//! Geometric types, their labels and validation.
//!
//! Indices are 0-based in memory. Anything that faces a user (files, reports,
//! `Display`) adds one.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Orientation sign, always `+1` or `-1`.
pub type Sign = i8;

/// A horizontal sub-rectangle `H^i_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HLabel {
    pub i: usize,
    pub j: usize,
}

/// A vertical sub-rectangle `V^k_l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VLabel {
    pub k: usize,
    pub l: usize,
}

/// Image of a horizontal sub-rectangle: target vertical cell and sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub k: usize,
    pub l: usize,
    pub eps: Sign,
}

impl Cell {
    pub fn new(k: usize, l: usize, eps: Sign) -> Self {
        Cell { k, l, eps }
    }

    pub fn vlabel(&self) -> VLabel {
        VLabel { k: self.k, l: self.l }
    }
}

/// One broken invariant. Indices inside are 0-based; `Display` shows them 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoRectangles,
    ZeroCount { i: usize },
    RowLength { i: usize, expected: usize, found: usize },
    SumMismatch { horizontal: usize, vertical: usize },
    BadSign { at: HLabel, eps: Sign },
    OutOfRange { at: HLabel, k: usize, l: usize },
    NotInjective { first: HLabel, second: HLabel, target: VLabel },
    NotSurjective { missing: VLabel },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoRectangles => write!(f, "type has no rectangles"),
            Violation::ZeroCount { i } => write!(f, "rectangle {} has a zero h or v count", i + 1),
            Violation::RowLength { i, expected, found } => {
                write!(f, "rectangle {} declares h = {} but phi has {} entries", i + 1, expected, found)
            }
            Violation::SumMismatch { horizontal, vertical } => {
                write!(f, "sum of h ({}) differs from sum of v ({})", horizontal, vertical)
            }
            Violation::BadSign { at, eps } => {
                write!(f, "phi({},{}) has sign {}, expected +1 or -1", at.i + 1, at.j + 1, eps)
            }
            Violation::OutOfRange { at, k, l } => {
                write!(f, "phi({},{}) points to ({},{}) which is out of range", at.i + 1, at.j + 1, k + 1, l + 1)
            }
            Violation::NotInjective { first, second, target } => write!(
                f,
                "rho not injective: ({},{}) and ({},{}) both map to ({},{})",
                first.i + 1,
                first.j + 1,
                second.i + 1,
                second.j + 1,
                target.k + 1,
                target.l + 1
            ),
            Violation::NotSurjective { missing } => {
                write!(f, "rho not surjective: ({},{}) has no preimage", missing.k + 1, missing.l + 1)
            }
        }
    }
}

/// Result of [`validate`]; empty means the data is a geometric type.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (idx, v) in self.violations.iter().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", v)?;
        }
        Ok(())
    }
}

/// Checks all invariants of a candidate type given as raw parts.
pub fn validate_parts(h: &[usize], v: &[usize], phi: &[Vec<Cell>]) -> ValidationReport {
    let mut out = Vec::new();
    let n = h.len();
    if n == 0 {
        out.push(Violation::NoRectangles);
        return ValidationReport { violations: out };
    }
    // Shape problems make the remaining checks meaningless.
    if v.len() != n || phi.len() != n {
        out.push(Violation::RowLength { i: n.min(v.len()).min(phi.len()), expected: n, found: v.len().min(phi.len()) });
        return ValidationReport { violations: out };
    }
    for i in 0..n {
        if h[i] == 0 || v[i] == 0 {
            out.push(Violation::ZeroCount { i });
        }
        if phi[i].len() != h[i] {
            out.push(Violation::RowLength { i, expected: h[i], found: phi[i].len() });
        }
    }
    let sh: usize = h.iter().sum();
    let sv: usize = v.iter().sum();
    if sh != sv {
        out.push(Violation::SumMismatch { horizontal: sh, vertical: sv });
    }
    let offsets = prefix_sums(v);
    let mut seen: Vec<Option<HLabel>> = vec![None; sv];
    for (i, row) in phi.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            let at = HLabel { i, j };
            if c.eps != 1 && c.eps != -1 {
                out.push(Violation::BadSign { at, eps: c.eps });
            }
            if c.k >= n || c.l >= v[c.k] {
                out.push(Violation::OutOfRange { at, k: c.k, l: c.l });
                continue;
            }
            let slot = offsets[c.k] + c.l;
            match seen[slot] {
                Some(first) => out.push(Violation::NotInjective { first, second: at, target: c.vlabel() }),
                None => seen[slot] = Some(at),
            }
        }
    }
    if out.is_empty() {
        for k in 0..n {
            for l in 0..v[k] {
                if seen[offsets[k] + l].is_none() {
                    out.push(Violation::NotSurjective { missing: VLabel { k, l } });
                }
            }
        }
    }
    ValidationReport { violations: out }
}

pub(crate) fn prefix_sums(xs: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    let mut out = Vec::with_capacity(xs.len() + 1);
    for &x in xs {
        out.push(acc);
        acc += x;
    }
    out.push(acc);
    out
}

/// An abstract geometric type `(n, {(h_i, v_i)}, Φ)`.
///
/// Values are always valid: the only public constructor validates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeometricType {
    h: Vec<usize>,
    v: Vec<usize>,
    phi: Vec<Vec<Cell>>,
}

impl GeometricType {
    /// Builds a type from 0-based parts, rejecting anything invalid.
    pub fn new(h: Vec<usize>, v: Vec<usize>, phi: Vec<Vec<Cell>>) -> Result<Self, ValidationReport> {
        let report = validate_parts(&h, &v, &phi);
        if report.is_valid() {
            Ok(GeometricType { h, v, phi })
        } else {
            Err(report)
        }
    }

    /// Builds a type whose validity the caller has established.
    pub(crate) fn from_parts_unchecked(h: Vec<usize>, v: Vec<usize>, phi: Vec<Vec<Cell>>) -> Self {
        debug_assert!(validate_parts(&h, &v, &phi).is_valid());
        GeometricType { h, v, phi }
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self, i: usize) -> usize {
        self.h[i]
    }

    pub fn v(&self, k: usize) -> usize {
        self.v[k]
    }

    pub fn hs(&self) -> &[usize] {
        &self.h
    }

    pub fn vs(&self) -> &[usize] {
        &self.v
    }

    /// `α(T) = Σ h_i`, the number of horizontal sub-rectangles.
    pub fn alpha(&self) -> usize {
        self.h.iter().sum()
    }

    pub fn phi(&self, i: usize, j: usize) -> Cell {
        self.phi[i][j]
    }

    pub fn row(&self, i: usize) -> &[Cell] {
        &self.phi[i]
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.phi
    }

    /// Target rectangle of `H^i_j`.
    pub fn xi(&self, i: usize, j: usize) -> usize {
        self.phi[i][j].k
    }

    pub fn eps(&self, i: usize, j: usize) -> Sign {
        self.phi[i][j].eps
    }

    /// Iterates `(i, j, cell)` in lexicographic order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, Cell)> + '_ {
        self.phi.iter().enumerate().flat_map(|(i, row)| row.iter().enumerate().map(move |(j, c)| (i, j, *c)))
    }

    /// `ρ^{-1}` as a table indexed by `[k][l]`.
    pub fn rho_inverse(&self) -> Vec<Vec<HLabel>> {
        let mut out: Vec<Vec<HLabel>> = self.v.iter().map(|&vk| vec![HLabel { i: 0, j: 0 }; vk]).collect();
        for (i, j, c) in self.cells() {
            out[c.k][c.l] = HLabel { i, j };
        }
        out
    }

    /// The inverse type: `ρ^{-1}` with the signs carried along.
    pub fn inverse(&self) -> GeometricType {
        let rinv = self.rho_inverse();
        let phi = rinv
            .iter()
            .map(|col| col.iter().map(|hl| Cell { k: hl.i, l: hl.j, eps: self.phi[hl.i][hl.j].eps }).collect())
            .collect();
        GeometricType::from_parts_unchecked(self.v.clone(), self.h.clone(), phi)
    }

    /// True when every sign is `+1`.
    pub fn is_orientation_preserving(&self) -> bool {
        self.cells().all(|(_, _, c)| c.eps == 1)
    }
}

/// Validation as a free function, for symmetry with the parser.
pub fn validate(t: &GeometricType) -> ValidationReport {
    validate_parts(&t.h, &t.v, &t.phi)
}
