//! Cluster variables of the Kronecker quiver and the Euler-characteristic
//! generating function `X_M(m)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::enumerate_tuples;
use crate::{Error, Result};

/// Laurent polynomial in `x1, x2`: exponent pair to coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn monomial(c: impl Into<BigInt>, e1: i64, e2: i64) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term((e1, e2), c.into());
        p
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(1, 0, 0)
    }

    pub fn x1() -> Self {
        LaurentPoly::monomial(1, 1, 0)
    }

    pub fn x2() -> Self {
        LaurentPoly::monomial(1, 0, 1)
    }

    fn add_term(&mut self, e: (i64, i64), c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e1: i64, e2: i64) -> BigInt {
        self.terms.get(&(e1, e2)).cloned().unwrap_or_default()
    }

    pub fn all_positive(&self) -> bool {
        self.terms.values().all(Signed::is_positive)
    }

    /// Value at `x1 = x2 = 1`.
    pub fn at_ones(&self) -> BigInt {
        self.terms.values().sum()
    }

    fn min_exponents(&self) -> (i64, i64) {
        let a = self.terms.keys().map(|e| e.0).min().unwrap_or(0);
        let b = self.terms.keys().map(|e| e.1).min().unwrap_or(0);
        (a, b)
    }

    fn shift(&self, d1: i64, d2: i64) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((a + d1, b + d2), c.clone()))
                .collect(),
        }
    }

    /// Exact quotient; errors when `other` does not divide `self`.
    pub fn div_exact(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        if other.is_zero() {
            return Err(Error::Internal("division by zero".into()));
        }
        // shift both to genuine polynomials, then divide in lex order
        let (s1, s2) = self.min_exponents();
        let (t1, t2) = other.min_exponents();
        let num = self.shift(-s1, -s2);
        let den = other.shift(-t1, -t2);
        let (&lead_e, lead_c) = den.terms.iter().next_back().expect("nonzero");
        let mut rem = num;
        let mut quot = LaurentPoly::zero();
        while let Some((&e, c)) = rem.terms.iter().next_back() {
            let q_e = (e.0 - lead_e.0, e.1 - lead_e.1);
            let (q_c, r) = c.div_rem(lead_c);
            if q_e.0 < 0 || q_e.1 < 0 || !r.is_zero() {
                return Err(Error::Internal("inexact Laurent division".into()));
            }
            let step = LaurentPoly::monomial(q_c, q_e.0, q_e.1);
            let sub = &step * &den;
            for (&k, v) in &sub.terms {
                rem.add_term(k, -v);
            }
            quot.add_term(q_e, step.terms[&q_e].clone());
        }
        Ok(quot.shift(s1 - t1, s2 - t2))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&(a, b), c) in &self.terms {
            for (&(x, y), d) in &rhs.terms {
                out.add_term((a + x, b + y), c * d);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    /// Descending exponents, e.g. `x1^-2*x2^3 + 2*x2 + x1^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (&(a, b), c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<alloc::string::String> = Vec::new();
            for (name, e) in [("x1", a), ("x2", b)] {
                match e {
                    0 => {}
                    1 => factors.push(name.into()),
                    _ => factors.push(alloc::format!("{}^{}", name, e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", abs)?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", abs)?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `x_m` from `x_{m-1} x_{m+1} = x_m^2 + 1`, starting at `x_1`, `x_2`.
/// Every coefficient is checked to be positive.
pub fn cluster_variable(m: u32) -> Result<LaurentPoly> {
    if m == 0 {
        return Err(Error::InvalidParameter("cluster variables start at x_1".into()));
    }
    let mut prev = LaurentPoly::x1();
    let mut cur = LaurentPoly::x2();
    if m == 1 {
        return Ok(prev);
    }
    for _ in 2..m {
        let next = (&(&cur * &cur) + &LaurentPoly::one()).div_exact(&prev)?;
        if !next.all_positive() {
            return Err(Error::Internal("nonpositive coefficient in a cluster variable".into()));
        }
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `chi_(e1,e2)(M(m))`: the number of index tuples with that dimension vector.
pub fn chi_table(m: u32) -> Result<BTreeMap<(u32, u32), u64>> {
    let mut out = BTreeMap::new();
    for p in enumerate_tuples(m)? {
        *out.entry(p.dim_vector()).or_insert(0) += 1;
    }
    Ok(out)
}

/// `X_M = x1^-d1 x2^-d2 sum chi_e x1^(2(d2-q2)) x2^(2 q1)` with `d = (m-2, m-3)`
/// and `q = d - e` the quotient dimension of a subrepresentation of dimension `e`.
pub fn x_of_m(m: u32) -> Result<LaurentPoly> {
    let chi = chi_table(m)?;
    let (d1, d2) = (m as i64 - 2, m as i64 - 3);
    let mut out = LaurentPoly::zero();
    for (&(e1, e2), &c) in &chi {
        let (q1, q2) = (d1 - e1 as i64, d2 - e2 as i64);
        let t = LaurentPoly::monomial(c, 2 * (d2 - q2) - d1, 2 * q1 - d2);
        out = &out + &t;
    }
    Ok(out)
}
