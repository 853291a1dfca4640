//! Incidence matrices and the integer linear algebra the rest of the crate needs.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::types::GeometricType;
use crate::Error;

/// Square matrix of non-negative integers, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IncidenceMatrix {
    n: usize,
    a: Vec<u64>,
}

impl IncidenceMatrix {
    pub fn zeros(n: usize) -> Self {
        IncidenceMatrix { n, a: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = 1;
        }
        m
    }

    /// Builds from rows; panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "ragged matrix");
            m.a[i * n..(i + 1) * n].copy_from_slice(r);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, k: usize) -> u64 {
        self.a[i * self.n + k]
    }

    pub fn set(&mut self, i: usize, k: usize, x: u64) {
        self.a[i * self.n + k] = x;
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.a.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.n).map(|i| (0..self.n).map(|k| self.get(i, k)).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        (0..self.n).map(|k| (0..self.n).map(|i| self.get(i, k)).sum()).collect()
    }

    /// Sum of all entries, saturating.
    pub fn total(&self) -> u64 {
        self.a.iter().fold(0u64, |s, &x| s.saturating_add(x))
    }

    pub fn trace(&self) -> u64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                t.set(k, i, self.get(i, k));
            }
        }
        t
    }

    pub fn is_binary(&self) -> bool {
        self.a.iter().all(|&x| x <= 1)
    }

    pub fn is_positive(&self) -> bool {
        self.a.iter().all(|&x| x > 0)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, Error> {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for m in 0..n {
                let x = self.get(i, m);
                if x == 0 {
                    continue;
                }
                for k in 0..n {
                    let y = other.get(m, k);
                    let p = x.checked_mul(y).ok_or(Error::Overflow)?;
                    let s = out.a[i * n + k].checked_add(p).ok_or(Error::Overflow)?;
                    out.a[i * n + k] = s;
                }
            }
        }
        Ok(out)
    }

    /// `A^m` by repeated squaring with overflow checks. `m = 0` gives the identity.
    pub fn checked_pow(&self, mut m: u32) -> Result<Self, Error> {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n);
        while m > 0 {
            if m & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            m >>= 1;
            if m > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Zero pattern only; entries become 0 or 1.
    fn support(&self) -> Vec<bool> {
        self.a.iter().map(|&x| x > 0).collect()
    }

    /// Least `m` in `1..=bound` with `A^m` entrywise positive.
    ///
    /// Computed on zero patterns so it never overflows.
    pub fn least_positive_power(&self, bound: usize) -> Option<usize> {
        let n = self.n;
        if n == 0 {
            return None;
        }
        let base = self.support();
        let mut cur = base.clone();
        for m in 1..=bound {
            if cur.iter().all(|&b| b) {
                return Some(m);
            }
            let mut next = vec![false; n * n];
            for i in 0..n {
                for mid in 0..n {
                    if !cur[i * n + mid] {
                        continue;
                    }
                    for k in 0..n {
                        if base[mid * n + k] {
                            next[i * n + k] = true;
                        }
                    }
                }
            }
            cur = next;
        }
        None
    }

    /// Wielandt's bound: a primitive `n x n` matrix has `A^m > 0` for `m = (n-1)^2 + 1`.
    pub fn primitivity_bound(&self) -> usize {
        let n = self.n.max(1);
        (n - 1) * (n - 1) + 1
    }

    /// Perron root by power iteration on the 1-norm.
    ///
    /// Intended for primitive matrices; converges geometrically there.
    pub fn perron_root(&self) -> f64 {
        let n = self.n;
        if n == 0 {
            return 0.0;
        }
        // A + I has the same Perron vector, no periodicity, and root shifted by one.
        let mut x = vec![1.0f64 / n as f64; n];
        let mut lambda = 0.0f64;
        for _ in 0..100_000 {
            let mut y = vec![0.0f64; n];
            for i in 0..n {
                let mut s = x[i];
                for k in 0..n {
                    s += self.get(i, k) as f64 * x[k];
                }
                y[i] = s;
            }
            let norm: f64 = y.iter().sum();
            if norm == 0.0 {
                return 0.0;
            }
            for v in y.iter_mut() {
                *v /= norm;
            }
            let next = norm - 1.0;
            let diff = if next > lambda { next - lambda } else { lambda - next };
            x = y;
            lambda = next;
            if diff <= 1e-14 * (1.0 + lambda) {
                break;
            }
        }
        lambda
    }
}

impl fmt::Display for IncidenceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for k in 0..self.n {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, k))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `a_{ik} = #{ j : ξ(i,j) = k }`.
pub fn incidence_matrix(t: &GeometricType) -> IncidenceMatrix {
    let mut m = IncidenceMatrix::zeros(t.n());
    for (i, _, c) in t.cells() {
        let x = m.get(i, c.k);
        m.set(i, c.k, x + 1);
    }
    m
}

/// `A(T)^m` by plain multiplication, the oracle for [`crate::algebra::power`].
pub fn oracle_power_matrix(t: &GeometricType, m: u32) -> Result<IncidenceMatrix, Error> {
    incidence_matrix(t).checked_pow(m)
}
