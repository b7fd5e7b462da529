//! Local computations over the completions Q_v: quadratic residues, local
//! squares and the Hilbert symbol.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Mul;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{split_prime_power, support_primes, Place, Prime, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    /// `self^e`; only the parity of `e` matters.
    pub fn pow(self, e: u64) -> Self {
        if e.is_multiple_of(2) {
            Sign::Plus
        } else {
            self
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self != rhs)
    }
}

impl std::iter::Product for Sign {
    fn product<I: Iterator<Item = Sign>>(iter: I) -> Sign {
        iter.fold(Sign::Plus, |a, b| a * b)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i8(self.as_i8())
    }
}

/// Legendre symbol (u/p) for an odd prime p not dividing u.
pub fn legendre(u: &BigInt, p: &Prime) -> Result<Sign> {
    if p.is_two() {
        return Err(Error::BadModulus(p.to_string()));
    }
    let pi = BigInt::from(p.value().clone());
    if u.mod_floor(&pi).is_zero() {
        return Err(Error::NotCoprime {
            value: u.to_string(),
            modulus: p.to_string(),
        });
    }
    Ok(legendre_unit(u, p.value()))
}

/// Euler's criterion; `u` must be a unit mod the odd prime `p`.
fn legendre_unit(u: &BigInt, p: &BigUint) -> Sign {
    if let Some(ps) = p.to_u64() {
        let r = u.mod_floor(&BigInt::from(ps)).to_u64().unwrap();
        let mut acc = 1u128;
        let mut base = r as u128;
        let m = ps as u128;
        let mut e = (ps - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        return Sign::from_parity(acc != 1);
    }
    let pi = BigInt::from(p.clone());
    let r = u.mod_floor(&pi).to_biguint().unwrap();
    let e = (p - BigUint::one()) >> 1;
    Sign::from_parity(!r.modpow(&e, p).is_one())
}

fn mod8(u: &BigInt) -> u8 {
    u.mod_floor(&BigInt::from(8)).to_u8().unwrap()
}

/// Whether `q` is a square in Q_v. Units are decided mod p (odd p) or mod 8.
pub fn is_local_square(q: &Rational, v: &Place) -> Result<bool> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    let p = match v {
        Place::Real => return Ok(q.is_positive()),
        Place::Finite(p) => p,
    };
    let (val, unit) = split_prime_power(&q.class_integer(), p.value());
    if val % 2 != 0 {
        return Ok(false);
    }
    Ok(if p.is_two() {
        mod8(&unit) == 1
    } else {
        legendre_unit(&unit, p.value()).is_plus()
    })
}

/// Hilbert symbol (a, b)_v via the closed-form local formulas.
pub fn hilbert_symbol(a: &Rational, b: &Rational, v: &Place) -> Result<Sign> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput);
    }
    let p = match v {
        Place::Real => return Ok(Sign::from_parity(a.is_negative() && b.is_negative())),
        Place::Finite(p) => p,
    };
    let (alpha, u) = split_prime_power(&a.class_integer(), p.value());
    let (beta, w) = split_prime_power(&b.class_integer(), p.value());
    let (alpha, beta) = ((alpha % 2) as u64, (beta % 2) as u64);

    if p.is_two() {
        // eps(x) = (x-1)/2 mod 2, omega(x) = (x^2-1)/8 mod 2
        let (u8_, w8) = (mod8(&u), mod8(&w));
        let eps = |x: u8| (x % 4 == 3) as u64;
        let omega = |x: u8| (x == 3 || x == 5) as u64;
        let e = eps(u8_) * eps(w8) + alpha * omega(w8) + beta * omega(u8_);
        return Ok(Sign::from_parity(e % 2 == 1));
    }

    let p_is_3_mod_4 = (p.value() % 4u32) == BigUint::from(3u32);
    let mut sign = Sign::from_parity(alpha * beta == 1 && p_is_3_mod_4);
    if beta == 1 {
        sign = sign * legendre_unit(&u, p.value());
    }
    if alpha == 1 {
        sign = sign * legendre_unit(&w, p.value());
    }
    Ok(sign)
}

/// `{inf, 2}` together with every prime dividing a numerator or denominator
/// of the given values. Outside this set all Hilbert symbols of the values are +1.
pub fn relevant_places<'a, I>(values: I) -> Result<BTreeSet<Place>>
where
    I: IntoIterator<Item = &'a Rational>,
{
    let mut places = BTreeSet::from([Place::Real, Place::two()]);
    for q in values {
        for p in support_primes(q)? {
            places.insert(Place::Finite(p));
        }
    }
    Ok(places)
}

/// The places where (a, b)_v = -1.
pub fn symbol_support(a: &Rational, b: &Rational) -> Result<BTreeMap<Place, Sign>> {
    let mut out = BTreeMap::new();
    for v in relevant_places([a, b])? {
        let s = hilbert_symbol(a, b, &v)?;
        if s.is_minus() {
            out.insert(v, s);
        }
    }
    Ok(out)
}
