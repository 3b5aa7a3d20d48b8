//! Exact determinants of polynomial matrices, lazy minor enumeration, and
//! numeric rank over `Q` and `F_q`.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::{Field, Ring};
use crate::matrices::{LabeledMatrix, RowLabel};
use crate::poly::{Poly, Var};
use crate::{Error, Result};

/// Determinant of a square polynomial matrix by Laplace expansion along the
/// sparsest remaining line, memoized on (row set, column set).
pub fn det_poly(entries: &[Vec<Poly>]) -> Result<Poly> {
    let n = entries.len();
    if entries.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("determinant of a non-square matrix".to_string()));
    }
    if n > 64 {
        return Err(Error::Shape("matrices above 64 x 64 are not supported".to_string()));
    }
    let mut row_nz = alloc::vec![0u64; n];
    let mut col_nz = alloc::vec![0u64; n];
    for (r, row) in entries.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            if !e.is_zero() {
                row_nz[r] |= 1 << c;
                col_nz[c] |= 1 << r;
            }
        }
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut ctx = DetCtx {
        entries,
        row_nz,
        col_nz,
        memo: BTreeMap::new(),
    };
    Ok(ctx.det(full, full))
}

struct DetCtx<'a> {
    entries: &'a [Vec<Poly>],
    row_nz: Vec<u64>,
    col_nz: Vec<u64>,
    memo: BTreeMap<(u64, u64), Poly>,
}

/// Bits of `mask` in increasing order.
fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

/// Position of bit `b` among the set bits of `mask`.
fn rank_in(mask: u64, b: usize) -> u32 {
    (mask & ((1u64 << b) - 1)).count_ones()
}

impl DetCtx<'_> {
    fn det(&mut self, rows: u64, cols: u64) -> Poly {
        if rows == 0 {
            return Poly::one();
        }
        if let Some(p) = self.memo.get(&(rows, cols)) {
            return p.clone();
        }
        // the line with the fewest nonzeros among the remaining submatrix
        let mut best: Option<(u32, bool, usize)> = None;
        for r in bits(rows) {
            let cnt = (self.row_nz[r] & cols).count_ones();
            if best.is_none_or(|(b, _, _)| cnt < b) {
                best = Some((cnt, true, r));
            }
        }
        for c in bits(cols) {
            let cnt = (self.col_nz[c] & rows).count_ones();
            if best.is_none_or(|(b, _, _)| cnt < b) {
                best = Some((cnt, false, c));
            }
        }
        let (cnt, is_row, line) = best.expect("nonempty");
        let mut acc = Poly::zero();
        if cnt > 0 {
            if is_row {
                let pr = rank_in(rows, line);
                for c in bits(self.row_nz[line] & cols) {
                    let pc = rank_in(cols, c);
                    let minor = self.det(rows & !(1 << line), cols & !(1 << c));
                    if minor.is_zero() {
                        continue;
                    }
                    let term = &self.entries[line][c] * &minor;
                    if (pr + pc).is_multiple_of(2) {
                        acc += &term;
                    } else {
                        acc -= &term;
                    }
                }
            } else {
                let pc = rank_in(cols, line);
                for r in bits(self.col_nz[line] & rows) {
                    let pr = rank_in(rows, r);
                    let minor = self.det(rows & !(1 << r), cols & !(1 << line));
                    if minor.is_zero() {
                        continue;
                    }
                    let term = &self.entries[r][line] * &minor;
                    if (pr + pc).is_multiple_of(2) {
                        acc += &term;
                    } else {
                        acc -= &term;
                    }
                }
            }
        }
        self.memo.insert((rows, cols), acc.clone());
        acc
    }
}

pub fn det_symbolic(m: &LabeledMatrix) -> Result<Poly> {
    if !m.is_square() {
        return Err(Error::Shape(alloc::format!(
            "determinant of a {} x {} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    det_poly(&m.entries)
}

/// Advance `c` (strictly increasing, entries `< n`) to its colex successor.
pub fn next_colex(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in 0..k {
        let limit = if i + 1 < k { c[i + 1] } else { n };
        if c[i] + 1 < limit {
            c[i] += 1;
            for (t, x) in c.iter_mut().enumerate().take(i) {
                *x = t;
            }
            return true;
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minor {
    pub rows: Vec<RowLabel>,
    pub cols: Vec<u32>,
    pub det: Poly,
}

/// Lazy iterator over all `size x size` minors: column subsets in colex
/// order, and for each of them row subsets in colex order.
pub struct Minors<'a> {
    m: &'a LabeledMatrix,
    rows: Vec<usize>,
    cols: Vec<usize>,
    done: bool,
}

pub fn minors(m: &LabeledMatrix, size: usize) -> Result<Minors<'_>> {
    if size > m.nrows().min(m.ncols()) {
        return Err(Error::Shape(alloc::format!(
            "minor size {} exceeds {} x {}",
            size,
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(Minors {
        m,
        rows: (0..size).collect(),
        cols: (0..size).collect(),
        done: false,
    })
}

impl Iterator for Minors<'_> {
    type Item = Minor;

    fn next(&mut self) -> Option<Minor> {
        if self.done {
            return None;
        }
        let sub = self.m.select(&self.rows, &self.cols);
        let det = det_poly(&sub.entries).expect("square by construction");
        let out = Minor {
            rows: sub.row_labels,
            cols: sub.col_labels,
            det,
        };
        if !next_colex(&mut self.rows, self.m.nrows()) {
            self.rows = (0..self.rows.len()).collect();
            if !next_colex(&mut self.cols, self.m.ncols()) {
                self.done = true;
            }
        }
        Some(out)
    }
}

/// A matrix over a field with labels carried over from its symbolic source.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericMatrix<F> {
    pub row_labels: Vec<RowLabel>,
    pub col_labels: Vec<u32>,
    pub entries: Vec<Vec<F>>,
}

impl<F: Eliminate> NumericMatrix<F> {
    pub fn nrows(&self) -> usize {
        self.entries.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn rank(&self) -> usize {
        F::rank_of(&self.entries, self.ncols())
    }
}

pub fn evaluate_matrix<F: Ring>(
    m: &LabeledMatrix,
    assignment: &BTreeMap<Var, F>,
) -> Result<NumericMatrix<F>> {
    let mut entries = Vec::with_capacity(m.nrows());
    for row in &m.entries {
        let mut r = Vec::with_capacity(row.len());
        for p in row {
            r.push(p.evaluate(assignment)?);
        }
        entries.push(r);
    }
    Ok(NumericMatrix {
        row_labels: m.row_labels.clone(),
        col_labels: m.col_labels.clone(),
        entries,
    })
}

/// Rank and reduced row echelon form over a field.
pub trait Eliminate: Field {
    fn rank_of(rows: &[Vec<Self>], ncols: usize) -> usize {
        rref(rows, ncols).len()
    }
}

impl Eliminate for crate::field::Fq {}

impl Eliminate for BigRational {
    fn rank_of(rows: &[Vec<Self>], ncols: usize) -> usize {
        rank_rational(rows, ncols)
    }
}

/// Nonzero rows of the reduced row echelon form.
pub fn rref<F: Field>(rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let mut a: Vec<Vec<F>> = rows.to_vec();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    a
}

/// Fraction-free (Bareiss) rank of an integer matrix.
pub fn rank_bareiss(rows: &[Vec<BigInt>], ncols: usize) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            for cc in c + 1..ncols {
                let v = &a[r][c] * &a[i][cc] - &a[i][c] * &a[r][cc];
                a[i][cc] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Rank over `Q`: clear denominators row by row, then Bareiss.
pub fn rank_rational(rows: &[Vec<BigRational>], ncols: usize) -> usize {
    let ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter()
                .map(|q| q.numer() * (&l / q.denom()))
                .collect()
        })
        .collect();
    rank_bareiss(&ints, ncols)
}

/// Determinant over a field by Gaussian elimination.
pub fn det_numeric<F: Field>(rows: &[Vec<F>]) -> Result<F> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("determinant of a non-square matrix".to_string()));
    }
    let mut a = rows.to_vec();
    let mut det = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Ok(F::zero());
        };
        if p != c {
            a.swap(p, c);
            det = det.neg();
        }
        det = det.mul(&a[c][c]);
        let inv = a[c][c].inv().expect("nonzero pivot");
        let pivot = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].mul(&inv);
            for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x = x.sub(&f.mul(y));
            }
        }
    }
    Ok(det)
}
