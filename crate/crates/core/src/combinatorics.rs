//! Index tuples `P = (i_1, ..., i_2n)` labeling the cells, their statistics
//! and enumeration.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::relations::leading_terms;
use crate::{Error, Result};

/// A cell label `P` together with the ambient parameter `m`.
///
/// Conventions: `i_{-1} = i_0 = 0` and `i_{2n+1} = m - 3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexTuple {
    m: u32,
    entries: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JkPair {
    pub j: u32,
    pub k: u32,
    pub nu: u32,
    pub mu: u32,
}

impl IndexTuple {
    pub fn new(m: u32, entries: Vec<u32>) -> Result<IndexTuple> {
        if m < 3 {
            return Err(Error::InvalidParameter(format!("m = {} < 3", m)));
        }
        if !entries.len().is_multiple_of(2) {
            return Err(Error::InvalidTuple(format!("odd length {}", entries.len())));
        }
        if let Some(&e) = entries.iter().find(|&&e| e > m - 3) {
            return Err(Error::InvalidTuple(format!("entry {} exceeds m-3 = {}", e, m - 3)));
        }
        for (t, w) in entries.windows(2).enumerate() {
            // t = 0 compares i_1, i_2 (weak); t = 1 compares i_2, i_3 (strict)
            let ok = if t % 2 == 0 { w[0] <= w[1] } else { w[0] < w[1] };
            if !ok {
                return Err(Error::InvalidTuple(format!(
                    "chain broken at i_{} = {}, i_{} = {}",
                    t + 1,
                    w[0],
                    t + 2,
                    w[1]
                )));
            }
        }
        Ok(IndexTuple { m, entries })
    }

    pub fn empty(m: u32) -> Result<IndexTuple> {
        IndexTuple::new(m, Vec::new())
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn n(&self) -> u32 {
        (self.entries.len() / 2) as u32
    }

    /// `i_t` with the boundary conventions applied.
    pub fn i(&self, t: i64) -> u32 {
        if t <= 0 {
            0
        } else if t == 2 * self.n() as i64 + 1 {
            self.m - 3
        } else {
            self.entries[(t - 1) as usize]
        }
    }

    /// Row block `nu`: `[i_{2nu-1}+1, i_{2nu}]`, possibly empty.
    pub fn block(&self, nu: u32) -> (u32, u32) {
        (self.i(2 * nu as i64 - 1) + 1, self.i(2 * nu as i64))
    }

    /// Column gap `mu`: `[i_{2mu}+1, i_{2mu+1}]`, possibly empty.
    pub fn gap(&self, mu: u32) -> (u32, u32) {
        (self.i(2 * mu as i64) + 1, self.i(2 * mu as i64 + 1))
    }

    /// The `nu` with `j` in block `nu`.
    pub fn block_of_row(&self, j: u32) -> Option<u32> {
        (1..=self.n()).find(|&nu| {
            let (lo, hi) = self.block(nu);
            lo <= j && j <= hi
        })
    }

    /// The `mu` with `k` in gap `mu`.
    pub fn gap_of_col(&self, k: u32) -> Option<u32> {
        (0..=self.n()).find(|&mu| {
            let (lo, hi) = self.gap(mu);
            lo <= k && k <= hi
        })
    }

    /// `(e1, e2)` with `e2 = sum (i_2j - i_2j-1)` and `e1 = n + e2`.
    pub fn dim_vector(&self) -> (u32, u32) {
        let e2: u32 = self.entries.chunks(2).map(|c| c[1] - c[0]).sum();
        (self.n() + e2, e2)
    }

    /// `{ i_2j : i_2j = i_2j-1 }`.
    pub fn a_set(&self) -> BTreeSet<u32> {
        self.entries
            .chunks(2)
            .filter(|c| c[0] == c[1])
            .map(|c| c[1])
            .collect()
    }

    /// Union of the row blocks `[i_2j-1 + 1, i_2j]`.
    pub fn b_interval_set(&self) -> BTreeSet<u32> {
        self.entries
            .chunks(2)
            .flat_map(|c| c[0] + 1..=c[1])
            .collect()
    }

    /// Delete every pair whose block is empty.
    pub fn reduce(&self) -> IndexTuple {
        let entries = self
            .entries
            .chunks(2)
            .filter(|c| c[0] != c[1])
            .flatten()
            .copied()
            .collect();
        IndexTuple { m: self.m, entries }
    }

    /// Underlined rows removed when forming `A_{j,k}`: each block minus its
    /// last row.
    pub fn s_rows(&self) -> BTreeSet<u32> {
        self.entries.chunks(2).flat_map(|c| c[0] + 1..c[1]).collect()
    }

    /// Non-pivot columns of `N1(P)` carrying variables:
    /// `[i_2b + 2, i_2b+1]` for `b < n` and `[i_2n + 2, m - 2]`.
    pub fn s_cols(&self) -> BTreeSet<u32> {
        let n = self.n();
        let mut s = BTreeSet::new();
        if n == 0 {
            return s;
        }
        for b in 1..n {
            let (lo, hi) = self.gap(b);
            s.extend(lo + 1..=hi);
        }
        s.extend(self.i(2 * n as i64) + 2..=self.m - 2);
        s
    }

    /// Pairs `(j,k)` with a nonempty leading-term set and `k` not in `A(P)`,
    /// ordered by `k` then `j`.
    pub fn jk_set(&self) -> Vec<JkPair> {
        let a = self.a_set();
        self.jk_candidates()
            .into_iter()
            .filter(|p| !a.contains(&p.k))
            .collect()
    }

    /// Pairs excluded from JK only because `k` lies in `A(P)`.
    pub fn jk_excluded_by_a(&self) -> Vec<JkPair> {
        let a = self.a_set();
        self.jk_candidates()
            .into_iter()
            .filter(|p| a.contains(&p.k))
            .collect()
    }

    fn jk_candidates(&self) -> Vec<JkPair> {
        let mut out = Vec::new();
        for k in 1..=self.m - 3 {
            let Some(mu) = self.gap_of_col(k) else { continue };
            for nu in 1..=mu {
                let (lo, hi) = self.block(nu);
                for j in lo..=hi {
                    if !leading_terms(self, j, k).vars.is_empty() {
                        out.push(JkPair { j, k, nu, mu });
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (t, e) in self.entries.iter().enumerate() {
            if t > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, ")")
    }
}

/// Every index tuple for `m`, ordered by `(n, entries)`.
pub fn enumerate_tuples(m: u32) -> Result<Vec<IndexTuple>> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!("m = {} < 3", m)));
    }
    let top = m - 3;
    let mut out: Vec<Vec<u32>> = Vec::new();
    let mut stack: Vec<(Vec<u32>, u32)> = alloc::vec![(Vec::new(), 0)];
    while let Some((prefix, lo)) = stack.pop() {
        for a in lo..=top {
            for b in a..=top {
                let mut t = prefix.clone();
                t.push(a);
                t.push(b);
                if b < top {
                    stack.push((t.clone(), b + 1));
                }
                out.push(t);
            }
        }
    }
    out.push(Vec::new());
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    Ok(out
        .into_iter()
        .map(|entries| IndexTuple { m, entries })
        .collect())
}
