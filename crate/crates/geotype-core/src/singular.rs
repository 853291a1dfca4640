//! Singularity classes and the genus they determine.
//!
//! Periodic boundary codes of a corner type are the sectors at boundary
//! periodic points. Two codes are s-adjacent when their sectors share a stable
//! separatrix, u-adjacent when they share an unstable one. Going around a
//! `k`-prong point alternates the two relations through `2k` sectors.

use alloc::format;
use alloc::vec::Vec;

use crate::algebra::horizontal_type;
use crate::matrix::incidence_matrix;
use crate::refine::corner_refine;
use crate::symbolic::{
    gamma, has_corner_property, periodic_boundary_codes, s_boundary_code, BoundaryLabel, PeriodicBoundaryCode,
};
use crate::types::GeometricType;
use crate::Error;

// Sides `(ξ(i,j), ε(i,j))` and `(ξ(i,j+1), -ε(i,j+1))` glued along the image
// of the common boundary of `H_j` and `H_{j+1}`, pushed forward by `Γ` until
// the pair repeats.
fn glued(t: &GeometricType, a: BoundaryLabel, b: BoundaryLabel) -> bool {
    (0..t.n()).any(|i| {
        (0..t.h(i).saturating_sub(1)).any(|j| {
            let mut pair =
                (BoundaryLabel::new(t.xi(i, j), t.eps(i, j)), BoundaryLabel::new(t.xi(i, j + 1), -t.eps(i, j + 1)));
            let mut seen = Vec::new();
            while !seen.contains(&pair) {
                if pair == (a, b) || pair == (b, a) {
                    return true;
                }
                seen.push(pair);
                pair = (gamma(t, pair.0), gamma(t, pair.1));
            }
            false
        })
    })
}

fn adjacent(t: &GeometricType, a: BoundaryLabel, b: BoundaryLabel) -> bool {
    s_boundary_code(t, a).same_sequence(&s_boundary_code(t, b)) || glued(t, a, b)
}

/// Equal positive codes, or s-labels glued across a ribbon.
pub fn s_adjacent(t: &GeometricType, a: &PeriodicBoundaryCode, b: &PeriodicBoundaryCode) -> bool {
    adjacent(t, a.s_label, b.s_label)
}

/// [`s_adjacent`] on the inverse type with the u-labels.
pub fn u_adjacent(t: &GeometricType, a: &PeriodicBoundaryCode, b: &PeriodicBoundaryCode) -> bool {
    adjacent(&t.inverse(), a.u_label, b.u_label)
}

/// Codes around one periodic point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityClass {
    /// `iota` indices of the member codes, ascending.
    pub members: Vec<usize>,
    pub prongs: usize,
}

impl SingularityClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn is_spine(&self) -> bool {
        self.prongs == 1
    }

    pub fn is_regular(&self) -> bool {
        self.prongs == 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityReport {
    pub classes: Vec<SingularityClass>,
    /// Prong numbers of the non-regular classes, ascending.
    pub prongs: Vec<usize>,
    pub spine_count: usize,
    /// `4χ`, exact.
    pub euler_characteristic_quarters: i64,
    pub genus: u64,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

fn partner(
    codes: &[PeriodicBoundaryCode],
    a: usize,
    rel: impl Fn(&PeriodicBoundaryCode, &PeriodicBoundaryCode) -> bool,
    kind: &str,
) -> Result<usize, Error> {
    let found: Vec<usize> = (0..codes.len()).filter(|&b| b != a && rel(&codes[a], &codes[b])).collect();
    match found.as_slice() {
        [b] => Ok(*b),
        [] => Err(Error::Inconsistent(format!("code {} has no {}-partner", a + 1, kind))),
        _ => Err(Error::Inconsistent(format!("code {} has {} {}-partners", a + 1, found.len(), kind))),
    }
}

/// Connected components of the s/u adjacency graph on periodic boundary codes.
///
/// Needs a binary, mixing type with the corner property.
pub fn singularity_classes(t: &GeometricType) -> Result<Vec<SingularityClass>, Error> {
    if !has_corner_property(t) {
        return Err(Error::Inconsistent("type lacks the corner property".into()));
    }
    let codes = periodic_boundary_codes(t)?;
    let inv = t.inverse();
    let n = codes.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for a in 0..n {
        let s = partner(&codes, a, |x, y| adjacent(t, x.s_label, y.s_label), "s")?;
        let u = partner(&codes, a, |x, y| adjacent(&inv, x.u_label, y.u_label), "u")?;
        for b in [s, u] {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    let mut classes: Vec<SingularityClass> = Vec::new();
    for root in 0..n {
        let members: Vec<usize> = (0..n).filter(|&x| find(&mut parent, x) == root).collect();
        if members.is_empty() {
            continue;
        }
        if members.len() % 2 == 1 {
            return Err(Error::Inconsistent(format!("class of odd size {}", members.len())));
        }
        classes.push(SingularityClass { prongs: members.len() / 2, members });
    }
    classes.sort_by_key(|c| c.members[0]);
    Ok(classes)
}

/// Genus from `2 - 2g = Σ (1 - size/4)`, kept in quarters.
pub fn genus(t: &GeometricType) -> Result<SingularityReport, Error> {
    let classes = singularity_classes(t)?;
    let chi_q: i64 = classes.iter().map(|c| 4 - c.size() as i64).sum();
    let twice_g_q = 8 - chi_q;
    if twice_g_q < 0 || twice_g_q % 8 != 0 {
        return Err(Error::Inconsistent(format!("non-integral or negative genus from 4χ = {}", chi_q)));
    }
    let mut prongs: Vec<usize> = classes.iter().filter(|c| !c.is_regular()).map(|c| c.prongs).collect();
    prongs.sort_unstable();
    Ok(SingularityReport {
        spine_count: classes.iter().filter(|c| c.is_spine()).count(),
        prongs,
        classes,
        euler_characteristic_quarters: chi_q,
        genus: (twice_g_q / 8) as u64,
    })
}

/// Makes `t` binary (through `H(T)`) and corner, as the census needs.
pub fn prepare_for_census(t: &GeometricType) -> Result<GeometricType, Error> {
    let b = if incidence_matrix(t).is_binary() { t.clone() } else { horizontal_type(t) };
    if has_corner_property(&b) {
        Ok(b)
    } else {
        corner_refine(&b)
    }
}

/// [`genus`] after [`prepare_for_census`].
pub fn census(t: &GeometricType) -> Result<SingularityReport, Error> {
    genus(&prepare_for_census(t)?)
}
