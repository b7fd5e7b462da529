//! Deterministic integer factorization: trial division followed by Brent's
//! variant of Pollard rho, with Miller-Rabin primality certification.
//!
//! Miller-Rabin with the first 13 prime bases is a proof of primality below
//! 3.3 * 10^24; above that bound it is a strong probable-prime test.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_BOUND: u64 = 1 << 16;
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

pub const DEFAULT_FACTOR_BUDGET: u64 = 2_000_000;

static FACTOR_BUDGET: AtomicU64 = AtomicU64::new(DEFAULT_FACTOR_BUDGET);

/// Process-wide rho step budget used by [`factorize`].
pub fn factor_budget() -> u64 {
    FACTOR_BUDGET.load(Ordering::Relaxed)
}

pub fn set_factor_budget(budget: u64) {
    FACTOR_BUDGET.store(budget.max(1), Ordering::Relaxed);
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeFactorization {
    negative: bool,
    factors: BTreeMap<BigUint, u32>,
}

impl PrimeFactorization {
    /// +1 or -1.
    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    /// Prime to exponent, ascending by prime.
    pub fn factors(&self) -> &BTreeMap<BigUint, u32> {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.keys()
    }

    pub fn exponent(&self, p: &BigUint) -> u32 {
        self.factors.get(p).copied().unwrap_or(0)
    }

    pub fn product(&self) -> BigInt {
        let mag = self
            .factors
            .iter()
            .fold(BigUint::one(), |acc, (p, &e)| acc * num_traits::pow(p.clone(), e as usize));
        let n = BigInt::from(mag);
        if self.negative {
            -n
        } else {
            n
        }
    }
}

impl fmt::Display for PrimeFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (p, e) in &self.factors {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

pub fn factorize(n: &BigInt) -> Result<PrimeFactorization> {
    factorize_with_budget(n, factor_budget())
}

pub fn factorize_with_budget(n: &BigInt, budget: u64) -> Result<PrimeFactorization> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let negative = n.sign() == num_bigint::Sign::Minus;
    let mut m = n.magnitude().clone();
    let mut factors = BTreeMap::new();

    let mut divide_out = |m: &mut BigUint, p: u64| {
        let pb = BigUint::from(p);
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            *m = q;
            e += 1;
        }
        if e > 0 {
            *factors.entry(pb).or_insert(0) += e;
        }
    };

    if let Some(mut small) = m.to_u64() {
        // Fast path: everything fits in a machine word.
        let mut d = 2u64;
        while d < TRIAL_BOUND && d * d <= small {
            if small % d == 0 {
                let mut mb = BigUint::from(small);
                divide_out(&mut mb, d);
                small = mb.to_u64().unwrap();
            }
            d += if d == 2 { 1 } else { 2 };
        }
        m = BigUint::from(small);
    } else {
        let mut d = 2u64;
        while d < TRIAL_BOUND {
            if (&m % d).is_zero() {
                divide_out(&mut m, d);
            }
            d += if d == 2 { 1 } else { 2 };
        }
    }

    if !m.is_one() {
        let mut steps = 0u64;
        let mut stack = vec![m];
        while let Some(x) = stack.pop() {
            if x.is_one() {
                continue;
            }
            if is_prime(&x) {
                *factors.entry(x).or_insert(0) += 1;
                continue;
            }
            let f = find_factor(&x, budget, &mut steps)?;
            let cof = &x / &f;
            stack.push(f);
            stack.push(cof);
        }
    }

    Ok(PrimeFactorization { negative, factors })
}

pub fn is_prime(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(small) => is_prime_u64(small),
        None => is_prime_big(n),
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let (d, s) = odd_part_u64(n - 1);
    'witness: for &a in &MR_BASES[..12] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn is_prime_big(n: &BigUint) -> bool {
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn odd_part_u64(n: u64) -> (u64, u32) {
    let s = n.trailing_zeros();
    (n >> s, s)
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Nontrivial factor of the odd composite `n`.
fn find_factor(n: &BigUint, budget: u64, steps: &mut u64) -> Result<BigUint> {
    if n.is_even() {
        return Ok(BigUint::from(2u32));
    }
    if let Some(small) = n.to_u64() {
        for c in 1u64.. {
            if let Some(f) = brent_u64(small, c, budget, steps)? {
                return Ok(BigUint::from(f));
            }
        }
    }
    for c in 1u64.. {
        if let Some(f) = brent_big(n, &BigUint::from(c), budget, steps)? {
            return Ok(f);
        }
    }
    unreachable!()
}

fn tick(steps: &mut u64, by: u64, budget: u64) -> Result<()> {
    *steps += by;
    if *steps > budget {
        Err(Error::FactorizationTimeout { budget })
    } else {
        Ok(())
    }
}

const BATCH: u64 = 64;

fn brent_u64(n: u64, c: u64, budget: u64, steps: &mut u64) -> Result<Option<u64>> {
    let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let (mut x, mut ys);
    let mut g;
    loop {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        loop {
            ys = y;
            let lim = BATCH.min(r - k);
            for _ in 0..lim {
                y = f(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            tick(steps, lim, budget)?;
            g = q.gcd(&n);
            k += lim;
            if k >= r || g != 1 {
                break;
            }
        }
        r *= 2;
        if g != 1 {
            break;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            tick(steps, 1, budget)?;
            g = x.abs_diff(ys).gcd(&n);
            if g != 1 {
                break;
            }
        }
    }
    Ok((g != n).then_some(g))
}

fn brent_big(n: &BigUint, c: &BigUint, budget: u64, steps: &mut u64) -> Result<Option<BigUint>> {
    let f = |x: &BigUint| (x * x + c) % n;
    let abs_diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let one = BigUint::one();
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut x;
    let mut ys;
    let mut g;
    loop {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        loop {
            ys = y.clone();
            let lim = BATCH.min(r - k);
            for _ in 0..lim {
                y = f(&y);
                q = (&q * abs_diff(&x, &y)) % n;
            }
            tick(steps, lim, budget)?;
            g = q.gcd(n);
            k += lim;
            if k >= r || g != one {
                break;
            }
        }
        r *= 2;
        if g != one {
            break;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            tick(steps, 1, budget)?;
            g = abs_diff(&x, &ys).gcd(n);
            if g != one {
                break;
            }
        }
    }
    Ok((&g != n).then_some(g))
}
