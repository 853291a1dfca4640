//! Powers `T^m` and the horizontal type `H(T)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::incidence_matrix;
use crate::types::{prefix_sums, Cell, GeometricType, HLabel, Sign};
use crate::Error;

/// A chain of horizontal sub-rectangles `(i_0,j_0), …, (i_{m-1},j_{m-1})`
/// with `ξ(i_t, j_t) = i_{t+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HPath {
    pub steps: Vec<HLabel>,
    pub signs: Vec<Sign>,
}

impl HPath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn start(&self) -> usize {
        self.steps[0].i
    }

    /// Product of all signs.
    pub fn sign(&self) -> Sign {
        self.signs.iter().product()
    }

    /// True when the chaining constraint holds in `t`.
    pub fn is_chained(&self, t: &GeometricType) -> bool {
        self.steps.windows(2).all(|w| t.xi(w[0].i, w[0].j) == w[1].i)
            && self.steps.iter().zip(&self.signs).all(|(s, &e)| t.eps(s.i, s.j) == e)
    }
}

/// All `m`-paths starting at `i`, in the horizontal order of `T^m`.
pub fn paths_from(t: &GeometricType, i: usize, m: usize) -> Vec<HPath> {
    let mut out = Vec::new();
    let mut steps = Vec::with_capacity(m);
    let mut signs = Vec::with_capacity(m);
    collect_paths(t, i, m, 1, &mut steps, &mut signs, &mut out);
    out
}

fn collect_paths(
    t: &GeometricType,
    i: usize,
    left: usize,
    sigma: Sign,
    steps: &mut Vec<HLabel>,
    signs: &mut Vec<Sign>,
    out: &mut Vec<HPath>,
) {
    if left == 0 {
        out.push(HPath { steps: steps.clone(), signs: signs.clone() });
        return;
    }
    let h = t.h(i);
    for idx in 0..h {
        let j = if sigma == 1 { idx } else { h - 1 - idx };
        let c = t.phi(i, j);
        steps.push(HLabel { i, j });
        signs.push(c.eps);
        collect_paths(t, c.k, left - 1, sigma * c.eps, steps, signs, out);
        steps.pop();
        signs.pop();
    }
}

/// Number of cells of `T^m` (equal to the entry sum of `A^m`), saturating.
pub fn power_cell_count(t: &GeometricType, m: usize) -> u64 {
    // Row vector of path counts; avoids overflow panics by saturating.
    let a = incidence_matrix(t);
    let n = t.n();
    let mut counts = vec![1u64; n];
    for _ in 0..m {
        let mut next = vec![0u64; n];
        for i in 0..n {
            for k in 0..n {
                next[k] = next[k].saturating_add(counts[i].saturating_mul(a.get(i, k)));
            }
        }
        counts = next;
    }
    counts.iter().fold(0u64, |s, &x| s.saturating_add(x))
}

/// `T^m`, refusing when it would have more than `max_cells` cells.
///
/// Horizontal cells of rectangle `i` are the `m`-paths from `i`, compared on
/// `j_0, j_1, …`, with stage `t` reversed when the signs before it multiply to
/// `-1`. Vertical cells of rectangle `k` are the paths ending in `k`, compared
/// on the last step's `l` first, then on the prefix, with stage `t` reversed
/// when the signs after it multiply to `-1`.
pub fn power(t: &GeometricType, m: usize, max_cells: usize) -> Result<GeometricType, Error> {
    if m == 0 {
        return Err(Error::InvalidArgument("power needs m >= 1".into()));
    }
    let needed = power_cell_count(t, m);
    if needed > max_cells as u64 {
        return Err(Error::CapExceeded { needed, cap: max_cells });
    }
    if m == 1 {
        return Ok(t.clone());
    }
    let n = t.n();
    let rinv = t.rho_inverse();

    // ends[s][k]: number of s-paths ending in k, with ends[0] = 1.
    let mut ends: Vec<Vec<usize>> = vec![vec![1; n]];
    for s in 0..m {
        let mut next = vec![0usize; n];
        for (i, _, c) in t.cells() {
            next[c.k] += ends[s][i];
        }
        ends.push(next);
    }
    // offs[s][k][l]: first vertical slot of step s+1 entering V^k_l.
    let offs: Vec<Vec<Vec<usize>>> = (0..m)
        .map(|s| {
            rinv.iter()
                .map(|col| {
                    let sizes: Vec<usize> = col.iter().map(|hl| ends[s][hl.i]).collect();
                    prefix_sums(&sizes)
                })
                .collect()
        })
        .collect();

    let mut rows: Vec<Vec<Cell>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::new();
        let mut walker = Walker { t, m, ends: &ends, offs: &offs, row: &mut row };
        walker.walk(i, 0, 1, 0);
        rows.push(row);
    }
    let h: Vec<usize> = rows.iter().map(|r| r.len()).collect();
    let v = ends[m].clone();
    Ok(GeometricType::from_parts_unchecked(h, v, rows))
}

struct Walker<'a> {
    t: &'a GeometricType,
    m: usize,
    ends: &'a [Vec<usize>],
    offs: &'a [Vec<Vec<usize>>],
    row: &'a mut Vec<Cell>,
}

impl Walker<'_> {
    // `sigma` is the sign product of the steps taken; `vpos` the vertical slot of
    // the prefix inside rectangle `i` of `T^depth`.
    fn walk(&mut self, i: usize, depth: usize, sigma: Sign, vpos: usize) {
        let h = self.t.h(i);
        for idx in 0..h {
            let j = if sigma == 1 { idx } else { h - 1 - idx };
            let c = self.t.phi(i, j);
            let inner = if c.eps == 1 { vpos } else { self.ends[depth][i] - 1 - vpos };
            let pos = self.offs[depth][c.k][c.l] + inner;
            let s2 = sigma * c.eps;
            if depth + 1 == self.m {
                self.row.push(Cell { k: c.k, l: pos, eps: s2 });
            } else {
                self.walk(c.k, depth + 1, s2, pos);
            }
        }
    }
}

/// Label `r(i,j)` of `H^i_j` as a rectangle of `H(T)`.
pub fn horizontal_label(t: &GeometricType, i: usize, j: usize) -> usize {
    t.hs()[..i].iter().sum::<usize>() + j
}

/// The horizontal type `H(T)`: one rectangle per horizontal sub-rectangle.
pub fn horizontal_type(t: &GeometricType) -> GeometricType {
    let starts = prefix_sums(t.hs());
    let mut h = Vec::with_capacity(t.alpha());
    let mut v = Vec::with_capacity(t.alpha());
    let mut rows = Vec::with_capacity(t.alpha());
    for (i, _, c) in t.cells() {
        let hk = t.h(c.k);
        h.push(hk);
        v.push(t.v(i));
        let row = (0..hk)
            .map(|j0| {
                let target = if c.eps == 1 { j0 } else { hk - 1 - j0 };
                Cell { k: starts[c.k] + target, l: c.l, eps: c.eps }
            })
            .collect();
        rows.push(row);
    }
    GeometricType::from_parts_unchecked(h, v, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::oracle_power_matrix;

    fn db() -> GeometricType {
        GeometricType::new(vec![2], vec![2], vec![vec![Cell::new(0, 0, 1), Cell::new(0, 1, 1)]]).unwrap()
    }

    #[test]
    fn doubling_square_is_bit_reversal() {
        let t2 = power(&db(), 2, 100).unwrap();
        assert_eq!(t2.h(0), 4);
        for j0 in 0..2 {
            for j1 in 0..2 {
                let c = t2.phi(0, 2 * j0 + j1);
                assert_eq!((c.l, c.eps), (2 * j1 + j0, 1));
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(power(&db(), 10, 1000), Err(Error::CapExceeded { needed: 1024, cap: 1000 }));
    }

    #[test]
    fn power_matrix_matches_oracle_on_horseshoe() {
        let hs = GeometricType::new(vec![2], vec![2], vec![vec![Cell::new(0, 0, 1), Cell::new(0, 1, -1)]]).unwrap();
        for m in 1..6 {
            let p = power(&hs, m, 1 << 20).unwrap();
            assert_eq!(incidence_matrix(&p), oracle_power_matrix(&hs, m as u32).unwrap());
        }
    }

    #[test]
    fn horizontal_type_of_doubling() {
        let fs = horizontal_type(&db());
        let expect = GeometricType::new(
            vec![2, 2],
            vec![2, 2],
            vec![vec![Cell::new(0, 0, 1), Cell::new(1, 0, 1)], vec![Cell::new(0, 1, 1), Cell::new(1, 1, 1)]],
        )
        .unwrap();
        assert_eq!(fs, expect);
    }

    #[test]
    fn paths_are_chained_and_ordered_like_power() {
        let hs = GeometricType::new(vec![2], vec![2], vec![vec![Cell::new(0, 0, 1), Cell::new(0, 1, -1)]]).unwrap();
        let ps = paths_from(&hs, 0, 3);
        assert_eq!(ps.len(), 8);
        assert!(ps.iter().all(|p| p.is_chained(&hs)));
        let t3 = power(&hs, 3, 100).unwrap();
        for (j, p) in ps.iter().enumerate() {
            assert_eq!(t3.eps(0, j), p.sign());
        }
    }
}
