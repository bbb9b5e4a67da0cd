//! Exact scalar fields.
//!
//! Everything in the crate is generic over [`Field`]. Two families are
//! provided: prime fields [`Gf<P>`] with the modulus fixed at compile time,
//! and the rationals (`num_rational::BigRational`).

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// An exact field. No floating point anywhere.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Eq
    + Hash
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn from_i64(v: i64) -> Self;

    /// Parse an exact literal: `"3/7"`, `"-2"` for Q; `"12"` for GF(p).
    fn parse_literal(s: &str) -> Result<Self>;

    fn to_literal(&self) -> String {
        self.to_string()
    }

    /// 0 for Q.
    fn characteristic() -> u64;

    /// Short name used in reports: `"Q"` or `"GF:p"`.
    fn name() -> String;

    /// A random element. For Q this draws small numerators and denominators.
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// A random nonzero element.
    fn random_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let x = Self::random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// `(-1)^e`.
    fn sign(e: i64) -> Self {
        if e.rem_euclid(2) == 0 {
            Self::one()
        } else {
            -Self::one()
        }
    }
}

pub(crate) const fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p as u64 {
        if (p as u64).is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Element of GF(P), stored as the canonical representative in `[0, P)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf<const P: u32>(u32);

impl<const P: u32> Gf<P> {
    const PRIME_CHECK: () = assert!(is_prime(P), "GF modulus must be prime");

    pub fn new(v: i64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::PRIME_CHECK;
        Gf(v.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0 as u64;
        let mut acc = 1u64;
        let p = P as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Gf(acc as u32)
    }
}

impl<const P: u32> Debug for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Display for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Gf<P> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        let s = self.0 as u64 + rhs.0 as u64;
        Gf((if s >= P as u64 { s - P as u64 } else { s }) as u32)
    }
}

impl<const P: u32> Sub for Gf<P> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        if self.0 >= rhs.0 {
            Gf(self.0 - rhs.0)
        } else {
            Gf((self.0 as u64 + P as u64 - rhs.0 as u64) as u32)
        }
    }
}

impl<const P: u32> Mul for Gf<P> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Gf((self.0 as u64 * rhs.0 as u64 % P as u64) as u32)
    }
}

impl<const P: u32> Div for Gf<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero in GF(p)")
    }
}

impl<const P: u32> Neg for Gf<P> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Gf(P - self.0)
        }
    }
}

impl<const P: u32> AddAssign for Gf<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u32> SubAssign for Gf<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u32> MulAssign for Gf<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u32> Zero for Gf<P> {
    fn zero() -> Self {
        Gf(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Gf<P> {
    fn one() -> Self {
        Gf::new(1)
    }
}

impl<const P: u32> Field for Gf<P> {
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P as u64 - 2))
        }
    }

    fn from_i64(v: i64) -> Self {
        Gf::new(v)
    }

    fn parse_literal(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = Self::parse_literal(n)?;
            let d = Self::parse_literal(d)?;
            return d
                .inv()
                .map(|di| n * di)
                .ok_or_else(|| Error::Parse(format!("zero denominator in {s:?}")));
        }
        s.parse::<i64>()
            .map(Gf::new)
            .map_err(|e| Error::Parse(format!("bad GF({P}) literal {s:?}: {e}")))
    }

    fn characteristic() -> u64 {
        P as u64
    }

    fn name() -> String {
        format!("GF:{P}")
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Gf(rng.gen_range(0..P))
    }
}

pub type Rational = BigRational;

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn parse_literal(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |e: &dyn Display| Error::Parse(format!("bad rational literal {s:?}: {e}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|e| bad(&e))?;
                let d: BigInt = d.trim().parse().map_err(|e| bad(&e))?;
                if d.is_zero() {
                    return Err(bad(&"zero denominator"));
                }
                Ok(BigRational::new(n, d))
            }
            None => {
                let n: BigInt = s.parse().map_err(|e| bad(&e))?;
                Ok(BigRational::from_integer(n))
            }
        }
    }

    fn to_literal(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn characteristic() -> u64 {
        0
    }

    fn name() -> String {
        "Q".to_string()
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let n: i64 = rng.gen_range(-9..=9);
        let d: i64 = rng.gen_range(1..=4);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
}

/// Absolute-value helper used by reports on Q.
pub fn rational_height(x: &BigRational) -> BigInt {
    x.numer().abs().max(x.denom().abs())
}
