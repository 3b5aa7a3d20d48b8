//! The labeled matrices `N^(2)(P)`, `N^(1)(P)`, `N_1(P)`, `N_2(P)` and the
//! square submatrices `A^P_{j,k}`.
//!
//! `N^(1)(P)` stacks three row families: overlined rows `a` (row `a` of
//! `N^(2)(P)` followed by a zero), underlined rows `a` (a zero followed by
//! row `a`), and primed rows `t+1` for every `t` in `A(P)`. Columns are named
//! `1..=m-2`; in the underlined family column `b` holds `x(a, b-1)`.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::combinatorics::IndexTuple;
use crate::poly::Poly;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    /// Rows of `N^(2)(P)` itself.
    Plain,
    Overline,
    Underline,
    Prime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowLabel {
    pub tag: Tag,
    pub index: u32,
}

impl RowLabel {
    pub const fn plain(a: u32) -> RowLabel {
        RowLabel { tag: Tag::Plain, index: a }
    }
    pub const fn over(a: u32) -> RowLabel {
        RowLabel { tag: Tag::Overline, index: a }
    }
    pub const fn under(a: u32) -> RowLabel {
        RowLabel { tag: Tag::Underline, index: a }
    }
    pub const fn prime(a: u32) -> RowLabel {
        RowLabel { tag: Tag::Prime, index: a }
    }
}

impl fmt::Display for RowLabel {
    /// `5`, `^5` (overline), `_5` (underline), `5'` (prime).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag {
            Tag::Plain => write!(f, "{}", self.index),
            Tag::Overline => write!(f, "^{}", self.index),
            Tag::Underline => write!(f, "_{}", self.index),
            Tag::Prime => write!(f, "{}'", self.index),
        }
    }
}

impl FromStr for RowLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<RowLabel> {
        let s = s.trim();
        let bad = || Error::Parse(alloc::format!("row label {:?}", s));
        let (tag, digits) = if let Some(r) = s.strip_prefix('^') {
            (Tag::Overline, r)
        } else if let Some(r) = s.strip_prefix('_') {
            (Tag::Underline, r)
        } else if let Some(r) = s.strip_suffix('\'') {
            (Tag::Prime, r)
        } else {
            (Tag::Plain, s)
        };
        let index = digits.parse::<u32>().map_err(|_| bad())?;
        Ok(RowLabel { tag, index })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledMatrix {
    pub row_labels: Vec<RowLabel>,
    pub col_labels: Vec<u32>,
    pub entries: Vec<Vec<Poly>>,
}

impl LabeledMatrix {
    pub fn zeros(row_labels: Vec<RowLabel>, col_labels: Vec<u32>) -> LabeledMatrix {
        let entries = (0..row_labels.len())
            .map(|_| alloc::vec![Poly::zero(); col_labels.len()])
            .collect();
        LabeledMatrix {
            row_labels,
            col_labels,
            entries,
        }
    }

    pub fn nrows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r][c]
    }

    pub fn row_index(&self, label: RowLabel) -> Option<usize> {
        self.row_labels.iter().position(|&l| l == label)
    }

    pub fn col_index(&self, label: u32) -> Option<usize> {
        self.col_labels.iter().position(|&l| l == label)
    }

    /// Entry by labels; `None` if either label is absent.
    pub fn at(&self, row: RowLabel, col: u32) -> Option<&Poly> {
        Some(&self.entries[self.row_index(row)?][self.col_index(col)?])
    }

    pub fn is_zero_row(&self, r: usize) -> bool {
        self.entries[r].iter().all(Poly::is_zero)
    }

    pub fn is_zero_col(&self, c: usize) -> bool {
        self.entries.iter().all(|row| row[c].is_zero())
    }

    /// Keep the given row and column positions, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> LabeledMatrix {
        LabeledMatrix {
            row_labels: rows.iter().map(|&r| self.row_labels[r]).collect(),
            col_labels: cols.iter().map(|&c| self.col_labels[c]).collect(),
            entries: rows
                .iter()
                .map(|&r| cols.iter().map(|&c| self.entries[r][c].clone()).collect())
                .collect(),
        }
    }

    /// Vertical concatenation; column labels must agree.
    pub fn stack(&self, other: &LabeledMatrix) -> Result<LabeledMatrix> {
        if self.col_labels != other.col_labels {
            return Err(Error::Shape("stacking matrices with different columns".to_string()));
        }
        let mut out = self.clone();
        out.row_labels.extend_from_slice(&other.row_labels);
        out.entries.extend(other.entries.iter().cloned());
        Ok(out)
    }

    /// Aligned grid with labels, for inspection and diffing.
    pub fn render_text(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|p| p.to_string()).collect())
            .collect();
        let label_w = self
            .row_labels
            .iter()
            .map(|l| l.to_string().len())
            .max()
            .unwrap_or(0);
        let mut widths: Vec<usize> = self.col_labels.iter().map(|c| c.to_string().len()).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut s = String::new();
        s.push_str(&" ".repeat(label_w));
        for (c, w) in self.col_labels.iter().zip(&widths) {
            s.push_str(&alloc::format!(" | {:>w$}", c, w = *w));
        }
        s.push('\n');
        for (label, row) in self.row_labels.iter().zip(&cells) {
            s.push_str(&alloc::format!("{:>w$}", label.to_string(), w = label_w));
            for (c, w) in row.iter().zip(&widths) {
                s.push_str(&alloc::format!(" | {:>w$}", c, w = *w));
            }
            s.push('\n');
        }
        s
    }
}

/// The block `S_{nu,mu}`: rows `[i_{2nu-1}+1, i_{2nu}]`, columns
/// `[i_{2mu}+1, i_{2mu+1}]`, entry `x(a,b)`.
pub fn build_block_s(p: &IndexTuple, nu: u32, mu: u32) -> LabeledMatrix {
    let rows: Vec<u32> = if nu == 0 {
        Vec::new()
    } else {
        let (lo, hi) = p.block(nu);
        (lo..=hi).collect()
    };
    let (clo, chi) = p.gap(mu);
    let cols: Vec<u32> = (clo..=chi).collect();
    let mut m = LabeledMatrix::zeros(rows.iter().map(|&a| RowLabel::plain(a)).collect(), cols.clone());
    for (r, &a) in rows.iter().enumerate() {
        for (c, &b) in cols.iter().enumerate() {
            m.entries[r][c] = Poly::x(a, b);
        }
    }
    m
}

/// The `(m-3) x (m-3)` upper triangular matrix `N^(2)(P)`: a row `a` in block
/// `nu` has `1` on the diagonal and `x(a,b)` for `b` in every gap `mu >= nu`.
pub fn build_n2_full(p: &IndexTuple) -> LabeledMatrix {
    let d = p.m() - 3;
    let mut m = LabeledMatrix::zeros((1..=d).map(RowLabel::plain).collect(), (1..=d).collect());
    for nu in 1..=p.n() {
        let (lo, hi) = p.block(nu);
        for a in lo..=hi {
            let r = (a - 1) as usize;
            m.entries[r][r] = Poly::one();
            for mu in nu..=p.n() {
                let (clo, chi) = p.gap(mu);
                for b in clo..=chi {
                    m.entries[r][(b - 1) as usize] = Poly::x(a, b);
                }
            }
        }
    }
    m
}

/// Columns carrying `y(t+1, l)` in the primed row for `t` in `A(P)`.
pub fn prime_row_columns(p: &IndexTuple, t: u32) -> BTreeSet<u32> {
    p.s_cols().into_iter().filter(|&l| l >= t + 2).collect()
}

/// The primed rows `S'(P)`: `e_{t+1} + sum y(t+1, l) e_l` for `t` in `A(P)`.
pub fn build_s_prime(p: &IndexTuple) -> LabeledMatrix {
    let cols: Vec<u32> = (1..=p.m() - 2).collect();
    let a = p.a_set();
    let mut m = LabeledMatrix::zeros(a.iter().map(|&t| RowLabel::prime(t + 1)).collect(), cols);
    for (r, &t) in a.iter().enumerate() {
        m.entries[r][t as usize] = Poly::one();
        for l in prime_row_columns(p, t) {
            m.entries[r][(l - 1) as usize] = Poly::y(t + 1, l);
        }
    }
    m
}

/// `N^(1)(P)` before zero-row removal: overlined, underlined, primed rows.
pub fn build_n1_full(p: &IndexTuple) -> LabeledMatrix {
    let d = p.m() - 3;
    let n2 = build_n2_full(p);
    let cols: Vec<u32> = (1..=d + 1).collect();
    let mut over = LabeledMatrix::zeros((1..=d).map(RowLabel::over).collect(), cols.clone());
    let mut under = LabeledMatrix::zeros((1..=d).map(RowLabel::under).collect(), cols);
    for r in 0..d as usize {
        for c in 0..d as usize {
            over.entries[r][c] = n2.entries[r][c].clone();
            under.entries[r][c + 1] = n2.entries[r][c].clone();
        }
    }
    over.stack(&under)
        .and_then(|m| m.stack(&build_s_prime(p)))
        .expect("same columns")
}

pub fn strip_zero_rows(m: &LabeledMatrix) -> LabeledMatrix {
    let rows: Vec<usize> = (0..m.nrows()).filter(|&r| !m.is_zero_row(r)).collect();
    let cols: Vec<usize> = (0..m.ncols()).collect();
    m.select(&rows, &cols)
}

pub fn strip_zero_cols(m: &LabeledMatrix) -> LabeledMatrix {
    let rows: Vec<usize> = (0..m.nrows()).collect();
    let cols: Vec<usize> = (0..m.ncols()).filter(|&c| !m.is_zero_col(c)).collect();
    m.select(&rows, &cols)
}

pub fn n1(p: &IndexTuple) -> LabeledMatrix {
    strip_zero_rows(&build_n1_full(p))
}

pub fn n2(p: &IndexTuple) -> LabeledMatrix {
    strip_zero_rows(&build_n2_full(p))
}

/// Remove rows and columns by label, keeping the survivors in order.
pub fn general_submatrix(
    m: &LabeledMatrix,
    remove_rows: &[RowLabel],
    remove_cols: &[u32],
) -> Result<LabeledMatrix> {
    for &r in remove_rows {
        if m.row_index(r).is_none() {
            return Err(Error::InvalidLabel(alloc::format!("row {}", r)));
        }
    }
    for &c in remove_cols {
        if m.col_index(c).is_none() {
            return Err(Error::InvalidLabel(alloc::format!("column {}", c)));
        }
    }
    let rows: Vec<usize> = (0..m.nrows())
        .filter(|&r| !remove_rows.contains(&m.row_labels[r]))
        .collect();
    let cols: Vec<usize> = (0..m.ncols())
        .filter(|&c| !remove_cols.contains(&m.col_labels[c]))
        .collect();
    Ok(m.select(&rows, &cols))
}

/// `A^P_{j,k}`: from `N_1(P)` drop the identically zero columns, the columns
/// of `S_c - {k+1}` and the underlined rows of `S_r - {j}`.
pub fn extract_a(p: &IndexTuple, j: u32, k: u32) -> Result<LabeledMatrix> {
    if !p.jk_set().iter().any(|q| q.j == j && q.k == k) {
        return Err(Error::InvalidPair { j, k });
    }
    let n1 = strip_zero_cols(&n1(p));
    let remove_cols: Vec<u32> = p
        .s_cols()
        .into_iter()
        .filter(|&c| c != k + 1 && n1.col_index(c).is_some())
        .collect();
    let remove_rows: Vec<RowLabel> = p
        .s_rows()
        .into_iter()
        .filter(|&g| g != j)
        .map(RowLabel::under)
        .collect();
    general_submatrix(&n1, &remove_rows, &remove_cols)
}
