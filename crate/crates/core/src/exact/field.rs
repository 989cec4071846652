use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand_core::RngCore;

use crate::error::{Error, Result};

/// Default characteristic for Monte-Carlo genericity.
pub const DEFAULT_CHARACTERISTIC: u64 = 32003;

/// A field context. Elements do not know their field; every operation goes
/// through the context, so a prime field's modulus lives in exactly one place.
pub trait Field: Copy + PartialEq + Eq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    /// 0 for ℚ, `p` for 𝔽_p.
    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn random<R: RngCore + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    fn render(&self, a: &Self::Elem) -> String;

    /// All elements, when the field is finite and small enough to scan.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    /// `acc -= a * b`
    fn sub_mul_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        let prod = self.mul(a, b);
        *acc = self.sub(acc, &prod);
    }

    /// `acc += a * b`
    fn add_mul_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        let prod = self.mul(a, b);
        *acc = self.add(acc, &prod);
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let inv = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, &inv))
    }

    /// Parses `"n"` or `"n/d"` with decimal integers.
    fn parse(&self, text: &str) -> Result<Self::Elem> {
        let text = text.trim();
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| Error::Parse(text.to_string()))?;
        let den = BigInt::from_str(den).map_err(|_| Error::Parse(text.to_string()))?;
        if den.is_zero() {
            return Err(Error::Parse(text.to_string()));
        }
        self.from_ratio(&num, &den)
    }

    /// Fails with [`Error::FieldMismatch`] unless both contexts agree.
    fn check_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch { left: self.characteristic(), right: other.characteristic() })
        }
    }
}

/// 𝔽_p for a prime `p < 2^32`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= (1 << 32) || !is_prime(p) {
            return Err(Error::InvalidCharacteristic(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_big(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = n.mod_floor(&p);
        r.to_u64().unwrap_or(0)
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
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

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_CHARACTERISTIC }
    }
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
        1 % self.p
    }

    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<u64> {
        let d = self.reduce_big(den);
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.reduce_big(num);
        Ok(n * self.pow(d, self.p - 2) % self.p)
    }

    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }

    fn random<R: RngCore + ?Sized>(&self, rng: &mut R) -> u64 {
        // rejection sampling keeps the distribution uniform
        let zone = u64::MAX - u64::MAX % self.p;
        loop {
            let x = rng.next_u64();
            if x < zone {
                return x % self.p;
            }
        }
    }

    fn render(&self, a: &u64) -> String {
        a.to_string()
    }

    fn elements(&self) -> Option<Vec<u64>> {
        if self.p <= 1 << 16 {
            Some((0..self.p).collect())
        } else {
            None
        }
    }

    #[inline]
    fn sub_mul_assign(&self, acc: &mut u64, a: &u64, b: &u64) {
        let prod = a * b % self.p;
        *acc = self.sub(acc, &prod);
    }

    #[inline]
    fn add_mul_assign(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = (*acc + a * b) % self.p;
    }
}

/// The rationals, with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

/// Random rationals are integers drawn uniformly from `[-RANGE, RANGE]`.
const RATIONAL_RANDOM_RANGE: u64 = 1 << 10;

impl Field for Rationals {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<BigRational> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(BigRational::new(num.clone(), den.clone()))
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn random<R: RngCore + ?Sized>(&self, rng: &mut R) -> BigRational {
        let span = 2 * RATIONAL_RANDOM_RANGE + 1;
        let x = (rng.next_u64() % span) as i64 - RATIONAL_RANDOM_RANGE as i64;
        self.from_i64(x)
    }

    fn render(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            let mut s = a.numer().to_string();
            s.push('/');
            s.push_str(&a.denom().to_string());
            s
        }
    }

    fn sub_mul_assign(&self, acc: &mut BigRational, a: &BigRational, b: &BigRational) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *acc -= a * b;
    }

    fn add_mul_assign(&self, acc: &mut BigRational, a: &BigRational, b: &BigRational) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *acc += a * b;
    }
}

/// Runtime description of a field, as configured on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Prime(u64),
}

impl FieldKind {
    pub fn from_characteristic(p: u64) -> Result<Self> {
        if p == 0 {
            Ok(FieldKind::Rational)
        } else {
            PrimeField::new(p).map(|f| FieldKind::Prime(f.modulus()))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldKind::Rational => 0,
            FieldKind::Prime(p) => *p,
        }
    }
}

impl Default for FieldKind {
    fn default() -> Self {
        FieldKind::Prime(DEFAULT_CHARACTERISTIC)
    }
}
