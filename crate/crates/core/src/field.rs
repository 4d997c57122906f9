//! Coefficient fields for the exact linear algebra.
//!
//! Everything downstream is generic over [`Field`]. The default is
//! [`RationalField`] (characteristic zero); [`PrimeField`] exists because
//! Betti numbers of monomial ideals may depend on the characteristic.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Display + Send + Sync;

    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse. Panics on zero; callers only invert pivots.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }
}

/// A rational number, kept in `i64` while numerator and denominator fit and
/// promoted to arbitrary precision otherwise. Always reduced with a positive
/// denominator, and `Small` whenever it fits, so derived equality is value
/// equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rational {
    Small(i64, i64),
    Big(BigRational),
}

impl Rational {
    fn from_i128(mut n: i128, mut d: i128) -> Self {
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        if d < 0 {
            n = -n;
            d = -d;
        }
        let fits = |v: i128| v.unsigned_abs() <= i64::MAX as u128;
        if fits(n) && fits(d) {
            Rational::Small(n as i64, d as i64)
        } else {
            Rational::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => Rational::Small(n, d),
            _ => Rational::Big(r),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational::from_big(r)
    }
}

impl Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(r) => write!(f, "{r}"),
        }
    }
}

/// The rationals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = Rational;

    fn characteristic(&self) -> u64 {
        0
    }
    fn zero(&self) -> Rational {
        Rational::Small(0, 1)
    }
    fn one(&self) -> Rational {
        Rational::Small(1, 1)
    }
    fn from_i64(&self, v: i64) -> Rational {
        Rational::from_i128(v as i128, 1)
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &Rational) -> bool {
        matches!(a, Rational::Small(1, 1))
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        match (a, b) {
            (Rational::Small(p, q), Rational::Small(r, s)) => {
                let (p, q, r, s) = (*p as i128, *q as i128, *r as i128, *s as i128);
                if q == s {
                    Rational::from_i128(p + r, q)
                } else {
                    Rational::from_i128(p * s + r * q, q * s)
                }
            }
            _ => Rational::from_big(a.to_big() + b.to_big()),
        }
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        match (a, b) {
            (Rational::Small(p, q), Rational::Small(r, s)) => {
                Rational::from_i128(*p as i128 * *r as i128, *q as i128 * *s as i128)
            }
            _ => Rational::from_big(a.to_big() * b.to_big()),
        }
    }
    fn neg(&self, a: &Rational) -> Rational {
        match a {
            Rational::Small(n, d) => Rational::Small(-n, *d),
            Rational::Big(r) => Rational::Big(-r),
        }
    }
    fn inv(&self, a: &Rational) -> Rational {
        assert!(!a.is_zero(), "inverse of zero");
        match a {
            Rational::Small(n, d) => Rational::from_i128(*d as i128, *n as i128),
            Rational::Big(r) => Rational::from_big(r.recip()),
        }
    }
}

/// Integers modulo a prime `p < 2^32`, stored as canonical residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..(1 << 32)).contains(&p) || !is_prime(p) {
            return Err(Error::Input(format!(
                "characteristic {p} is not a prime below 2^32"
            )));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        let p = self.p as i64;
        (((v % p) + p) % p) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert_eq!(f.from_i64(-1), 6);
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(32003).is_ok());
    }

    #[test]
    fn rational_ops() {
        let f = RationalField;
        let a = f.from_i64(3);
        let b = f.inv(&f.from_i64(2));
        assert_eq!(f.mul(&a, &b), Rational::Small(3, 2));
        assert!(f.is_zero(&f.sub(&a, &a)));
        assert_eq!(f.mul(&a, &b).to_string(), "3/2");
    }

    #[test]
    fn rational_overflow_promotes_and_demotes() {
        let f = RationalField;
        let big = f.from_i64(i64::MAX);
        let sq = f.mul(&big, &big);
        assert!(matches!(sq, Rational::Big(_)));
        assert_eq!(f.div(&sq, &big), big);
        assert_eq!(f.from_i64(i64::MIN).to_string(), i64::MIN.to_string());
        assert_eq!(f.neg(&f.neg(&f.from_i64(i64::MIN))), f.from_i64(i64::MIN));
    }

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    proptest::proptest! {
        #[test]
        fn rational_matches_bigrational(
            a in proptest::prelude::any::<i64>(), b in 1i64..i64::MAX,
            c in proptest::prelude::any::<i64>(), d in 1i64..i64::MAX,
        ) {
            let f = RationalField;
            let x = Rational::from(big(a, b));
            let y = Rational::from(big(c, d));
            proptest::prop_assert_eq!(f.add(&x, &y), Rational::from(big(a, b) + big(c, d)));
            proptest::prop_assert_eq!(f.mul(&x, &y), Rational::from(big(a, b) * big(c, d)));
            proptest::prop_assert_eq!(f.sub(&x, &y), Rational::from(big(a, b) - big(c, d)));
            if c != 0 {
                proptest::prop_assert_eq!(f.div(&x, &y), Rational::from(big(a, b) / big(c, d)));
            }
        }
    }
}
