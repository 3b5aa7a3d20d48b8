//! Coefficient rings used for evaluation: the rationals and `F_q` with
//! `q = 2^61 - 1`.

use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_core::RngCore;

/// Commutative ring with unit, as far as evaluation needs.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_bigint(n: &BigInt) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

pub trait Field: Ring {
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// A uniformly random element.
    fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self;
}

pub const Q_MODULUS: u64 = (1u64 << 61) - 1;

/// Element of the prime field of order `2^61 - 1`, kept reduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq(u64);

impl Fq {
    pub fn new(v: u64) -> Self {
        Fq(v % Q_MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn reduce128(x: u128) -> u64 {
        // 2^61 = 1 mod q
        let lo = (x as u64) & Q_MODULUS;
        let hi = (x >> 61) as u64;
        let s = lo + (hi & Q_MODULUS) + (hi >> 61);
        let s = (s & Q_MODULUS) + (s >> 61);
        if s >= Q_MODULUS {
            s - Q_MODULUS
        } else {
            s
        }
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Ring for Fq {
    fn zero() -> Self {
        Fq(0)
    }
    fn one() -> Self {
        Fq(1)
    }
    fn from_bigint(n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(Q_MODULUS));
        Fq(r.to_u64().unwrap_or(0))
    }
    fn add(&self, o: &Self) -> Self {
        let s = self.0 + o.0;
        Fq(if s >= Q_MODULUS { s - Q_MODULUS } else { s })
    }
    fn sub(&self, o: &Self) -> Self {
        Fq(if self.0 >= o.0 {
            self.0 - o.0
        } else {
            self.0 + Q_MODULUS - o.0
        })
    }
    fn mul(&self, o: &Self) -> Self {
        Fq(Self::reduce128(self.0 as u128 * o.0 as u128))
    }
    fn neg(&self) -> Self {
        Fq(if self.0 == 0 { 0 } else { Q_MODULUS - self.0 })
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl Field for Fq {
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow_u64(Q_MODULUS - 2))
        }
    }

    fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v = rng.next_u64() >> 3;
            if v < Q_MODULUS {
                return Fq(v);
            }
        }
    }
}

impl Fq {
    fn pow_u64(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fq(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }

    /// Small integers in `[-1000, 1000]`; rationals only need to be generic here.
    fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        let v = (rng.next_u32() % 2001) as i64 - 1000;
        BigRational::from_integer(BigInt::from(v))
    }
}

/// Render a rational as `a` or `a/b`.
pub fn rational_to_string(q: &BigRational) -> alloc::string::String {
    use alloc::format;
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else if q.is_negative() {
        format!("-{}/{}", q.numer().abs(), q.denom())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
