//! Sparse multivariate polynomials with integer coefficients in the
//! variables `x(a,b)` and `y(a,b)`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::field::Ring;
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Kind {
    X,
    Y,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var {
    pub kind: Kind,
    pub a: u32,
    pub b: u32,
}

impl Var {
    pub const fn x(a: u32, b: u32) -> Var {
        Var { kind: Kind::X, a, b }
    }

    pub const fn y(a: u32, b: u32) -> Var {
        Var { kind: Kind::Y, a, b }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            Kind::X => 'x',
            Kind::Y => 'y',
        };
        write!(f, "{}[{},{}]", c, self.a, self.b)
    }
}

/// Power product, stored as `(variable, exponent)` pairs sorted by variable
/// with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Monomial {
        Monomial(alloc::vec![(v, 1)])
    }

    /// Build from arbitrary pairs; merges repeats and drops zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Monomial {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// The monomial with every occurrence of `v` removed.
    pub fn without(&self, v: Var) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(w, _)| w != v).collect())
    }
}

impl Ord for Monomial {
    /// Graded, then lexicographic on the sorted `(variable, exponent)` list.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (idx, (v, e)) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, e)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(1)
    }

    pub fn constant(c: i64) -> Poly {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), BigInt::from(c));
        p
    }

    pub fn var(v: Var) -> Poly {
        let mut p = Poly::zero();
        p.add_term(Monomial::var(v), BigInt::one());
        p
    }

    pub fn x(a: u32, b: u32) -> Poly {
        Poly::var(Var::x(a, b))
    }

    pub fn y(a: u32, b: u32) -> Poly {
        Poly::var(Var::y(a, b))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|&(v, _)| v))
            .collect()
    }

    fn filter_degree(&self, keep: impl Fn(u32) -> bool) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m.degree()))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sum of the total-degree-one terms.
    pub fn linear_part(&self) -> Poly {
        self.filter_degree(|d| d == 1)
    }

    /// Sum of the terms of total degree at least two.
    pub fn nonlinear_part(&self) -> Poly {
        self.filter_degree(|d| d >= 2)
    }

    /// Write `self = c * v + rest` where `v` does not occur in `rest`; only
    /// valid when `v` occurs solely in the degree-one term `v`.
    pub fn split_linear(&self, v: Var) -> Option<(BigInt, Poly)> {
        let mv = Monomial::var(v);
        let mut rest = Poly::zero();
        let mut c = BigInt::zero();
        for (m, k) in &self.terms {
            if *m == mv {
                c = k.clone();
            } else if m.exponent(v) > 0 {
                return None;
            } else {
                rest.add_term(m.clone(), k.clone());
            }
        }
        Some((c, rest))
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        <Poly as Ring>::pow(self, e)
    }

    /// Evaluate in any ring, looking up each variable through `value`.
    pub fn evaluate_with<R: Ring>(&self, value: impl Fn(Var) -> Option<R>) -> Result<R> {
        let mut cache: BTreeMap<Var, R> = BTreeMap::new();
        let mut acc = R::zero();
        for (m, c) in &self.terms {
            let mut t = R::from_bigint(c);
            for &(v, e) in &m.0 {
                let x = match cache.get(&v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = value(v).ok_or(Error::UnboundVariable(v))?;
                        cache.insert(v, x.clone());
                        x
                    }
                };
                t = t.mul(&x.pow(e));
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    pub fn evaluate<R: Ring>(&self, assignment: &BTreeMap<Var, R>) -> Result<R> {
        self.evaluate_with(|v| assignment.get(&v).cloned())
    }

    /// Replace the variables found in `map`; the others stay symbolic.
    pub fn substitute(&self, map: &BTreeMap<Var, Poly>) -> Poly {
        self.evaluate_with(|v| Some(map.get(&v).cloned().unwrap_or_else(|| Poly::var(v))))
            .expect("every variable is bound")
    }

    fn mul_ref(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn from_bigint(n: &BigInt) -> Self {
        Poly::from_terms([(Monomial::one(), n.clone())])
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_ref(o)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_ref(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        self.mul_ref(&rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Poly {
        Poly::var(v)
    }
}

impl fmt::Display for Poly {
    /// Terms ascending in monomial order, e.g. `x[1,3] - x[2,4] + x[2,3]^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", abs, m)?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(alloc::format!("{} at byte {}", what, self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&alloc::format!("expected '{}'", c as char)))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let text = core::str::from_utf8(&self.s[start..self.pos]).map_err(|_| self.err("utf8"))?;
        BigInt::from_str(text).map_err(|_| self.err("bad integer"))
    }

    fn small(&mut self) -> Result<u32> {
        let n = self.integer()?;
        u32::try_from(n).map_err(|_| self.err("index out of range"))
    }

    fn factor(&mut self) -> Result<(Monomial, BigInt)> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok((Monomial::one(), self.integer()?)),
            Some(c @ (b'x' | b'y')) => {
                self.pos += 1;
                self.expect(b'[')?;
                let a = self.small()?;
                self.expect(b',')?;
                let b = self.small()?;
                self.expect(b']')?;
                let v = if c == b'x' { Var::x(a, b) } else { Var::y(a, b) };
                let mut e = 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    e = self.small()?;
                }
                Ok((Monomial::from_pairs([(v, e)]), BigInt::one()))
            }
            _ => Err(self.err("expected factor")),
        }
    }

    fn term(&mut self) -> Result<(Monomial, BigInt)> {
        let (mut m, mut c) = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let (m2, c2) = self.factor()?;
            m = m.mul(&m2);
            c *= c2;
        }
        Ok((m, c))
    }

    fn poly(&mut self) -> Result<Poly> {
        let mut p = Poly::zero();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if !first => break,
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => return Err(self.err("expected '+' or '-'")),
            };
            first = false;
            let (m, c) = self.term()?;
            p.add_term(m, c * sign);
        }
        Ok(p)
    }
}

impl FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Poly> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        if p.peek().is_none() {
            return Err(Error::Parse("empty input".to_string()));
        }
        p.poly()
    }
}

impl Poly {
    pub fn parse(s: &str) -> Result<Poly> {
        s.parse()
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use num_rational::BigRational;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn additive_inverse() {
        let a = Poly::x(1, 3);
        assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn square_of_variable() {
        let a = Poly::x(2, 3);
        let sq = &a * &a;
        assert_eq!(sq.len(), 1);
        assert_eq!(sq.degree_in(Var::x(2, 3)), 2);
        assert_eq!(sq.to_string(), "x[2,3]^2");
    }

    #[test]
    fn distributivity_example() {
        let lhs = Poly::x(6, 8) * (Poly::x(2, 7) + Poly::x(1, 5));
        assert_eq!(lhs, p("x[6,8]*x[2,7] + x[6,8]*x[1,5]"));
    }

    #[test]
    fn evaluate_at_ones() {
        let q = p("x[1,3] - x[2,4] + x[2,3]^2");
        let one = |_v: Var| Some(BigRational::from_integer(1.into()));
        assert_eq!(q.evaluate_with(one).unwrap(), BigRational::from_integer(1.into()));
        let z: BTreeMap<Var, Fq> = BTreeMap::new();
        assert_eq!(Poly::zero().evaluate(&z).unwrap(), Fq::new(0));
    }

    #[test]
    fn unbound_variable_is_named() {
        let q = p("x[1,3] + y[4,9]");
        let mut a = BTreeMap::new();
        a.insert(Var::x(1, 3), Fq::new(2));
        assert_eq!(q.evaluate(&a), Err(Error::UnboundVariable(Var::y(4, 9))));
    }

    #[test]
    fn linear_part_of_constant_is_zero() {
        assert!(Poly::constant(5).linear_part().is_zero());
        assert_eq!(p("3 + x[1,2] - 2*x[2,3]*x[1,1]").linear_part(), Poly::x(1, 2));
    }

    #[test]
    fn rendering_is_canonical() {
        let q = p("x[2,3]^2 - x[2,4] + x[1,3]");
        assert_eq!(q.to_string(), "x[1,3] - x[2,4] + x[2,3]^2");
        assert_eq!(p("-1 + 2*y[4,9]*x[1,3]").to_string(), "-1 + 2*x[1,3]*y[4,9]");
        assert_eq!(p("0").to_string(), "0");
    }

    #[test]
    fn parse_errors() {
        assert!("x[1,".parse::<Poly>().is_err());
        assert!("".parse::<Poly>().is_err());
        assert!("x[1,2] x[2,3]".parse::<Poly>().is_err());
        assert!("z[1,2]".parse::<Poly>().is_err());
    }

    #[test]
    fn substitution() {
        let q = p("x[1,3] - x[2,4]");
        let mut map = BTreeMap::new();
        map.insert(Var::x(1, 3), p("x[2,4] + x[2,3]"));
        assert_eq!(q.substitute(&map), Poly::x(2, 3));
    }

    #[test]
    fn split_linear_rejects_nonlinear_occurrence() {
        let q = p("x[1,3] - x[2,4] + x[2,3]^2");
        let (c, rest) = q.split_linear(Var::x(1, 3)).unwrap();
        assert_eq!(c, BigInt::one());
        assert_eq!(rest, p("-x[2,4] + x[2,3]^2"));
        assert!(q.split_linear(Var::x(2, 3)).is_none());
    }
}
