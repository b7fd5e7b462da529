use std::fmt;
use std::ops::Mul;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::factor::{factorize, is_prime};
use super::rational::Rational;
use crate::error::{Error, Result};

/// A rational prime, certified on construction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(BigUint);

impl Prime {
    pub fn new(p: impl Into<BigUint>) -> Result<Self> {
        let p = p.into();
        if is_prime(&p) {
            Ok(Self(p))
        } else {
            Err(Error::BadModulus(p.to_string()))
        }
    }

    /// Caller guarantees primality (e.g. the value came out of `factorize`).
    pub(crate) fn new_unchecked(p: BigUint) -> Self {
        Self(p)
    }

    pub fn two() -> Self {
        Self(BigUint::from(2u32))
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn is_two(&self) -> bool {
        self.0 == BigUint::from(2u32)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A place of Q: the real absolute value or a finite prime. Orders the real
/// place first, then primes ascending.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Real,
    Finite(Prime),
}

impl Place {
    pub fn prime(p: impl Into<BigUint>) -> Result<Self> {
        Prime::new(p).map(Place::Finite)
    }

    pub fn two() -> Self {
        Place::Finite(Prime::two())
    }

    pub fn as_prime(&self) -> Option<&Prime> {
        match self {
            Place::Real => None,
            Place::Finite(p) => Some(p),
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, Place::Real)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "∞"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "Real"),
            Place::Finite(p) => write!(f, "p={p}"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Place::Real => serializer.serialize_str("real"),
            Place::Finite(p) => serializer.collect_str(p),
        }
    }
}

/// Element of Q^x / (Q^x)^2, represented by a signed squarefree integer.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass(BigInt);

impl SquareClass {
    pub fn one() -> Self {
        Self(BigInt::one())
    }

    /// Fails with `NotSquarefree` unless `n` is a nonzero squarefree integer.
    pub fn from_squarefree(n: impl Into<BigInt>) -> Result<Self> {
        let n = n.into();
        if n.is_zero() {
            return Err(Error::ZeroInput);
        }
        if squarefree_part(&n)? != n {
            return Err(Error::NotSquarefree(n.to_string()));
        }
        Ok(Self(n))
    }

    pub fn representative(&self) -> &BigInt {
        &self.0
    }

    pub fn to_rational(&self) -> Rational {
        Rational::from_integer(self.0.clone())
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn negated(&self) -> Self {
        Self(-&self.0)
    }
}

/// Product of classes: for squarefree x, y the product xy / gcd(x,y)^2 is
/// squarefree, so no factoring is needed.
impl Mul for &SquareClass {
    type Output = SquareClass;
    fn mul(self, rhs: &SquareClass) -> SquareClass {
        let g = self.0.gcd(&rhs.0);
        SquareClass(&self.0 * &rhs.0 / (&g * &g))
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

impl Serialize for SquareClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

/// `sign(n) * product of primes with odd exponent in n`.
pub fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    let f = factorize(n)?;
    let mag = f
        .factors()
        .iter()
        .filter(|(_, &e)| e % 2 == 1)
        .fold(BigUint::one(), |acc, (p, _)| acc * p);
    let s = BigInt::from(mag);
    Ok(if f.sign() < 0 { -s } else { s })
}

pub fn square_class(q: &Rational) -> Result<SquareClass> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    squarefree_part(&q.class_integer()).map(SquareClass)
}

fn int_valuation(n: &BigInt, p: &BigUint) -> i64 {
    let p = BigInt::from(p.clone());
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(q: &Rational, p: &Prime) -> Result<i64> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(int_valuation(q.numer(), p.value()) - int_valuation(q.denom(), p.value()))
}

/// Splits a nonzero integer as `p^v * u` with `p` not dividing `u`.
pub(crate) fn split_prime_power(n: &BigInt, p: &BigUint) -> (i64, BigInt) {
    let pb = BigInt::from(p.clone());
    let mut u = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = u.div_rem(&pb);
        if !r.is_zero() {
            return (v, u);
        }
        u = q;
        v += 1;
    }
}

pub fn is_rational_square(q: &Rational) -> bool {
    if q.is_negative() {
        return false;
    }
    if q.is_zero() {
        return true;
    }
    let is_sq = |n: &BigInt| {
        let r = n.sqrt();
        &r * &r == *n
    };
    is_sq(q.numer()) && is_sq(q.denom())
}

/// Primes where `q` has nonzero valuation, ascending.
pub fn support_primes(q: &Rational) -> Result<Vec<Prime>> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut primes: Vec<Prime> = factorize(q.numer())?
        .primes()
        .chain(factorize(q.denom())?.primes())
        .cloned()
        .map(Prime::new_unchecked)
        .collect();
    primes.sort();
    primes.dedup();
    Ok(primes)
}
