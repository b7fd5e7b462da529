//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use qsimplex::arith::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

/// Integers `1..=100` followed by 100 seeded fractions `p/q` with `p, q` in `1..=100`.
pub fn m_sweep(seed: u64) -> Vec<Rational> {
    let mut out: Vec<Rational> = (1..=100i64).map(Rational::from).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let p: i64 = rng.gen_range(1..=100);
        let q: i64 = rng.gen_range(1..=100);
        out.push(Rational::new(p, q).unwrap());
    }
    out
}

pub fn random_fractions(seed: u64, count: usize, max: i64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Rational::new(rng.gen_range(1..=max), rng.gen_range(1..=max)).unwrap())
        .collect()
}

/// Squarefree integers `t` with `0 < t <= bound` by trial division.
pub fn squarefree_up_to(bound: i64) -> Vec<i64> {
    (1..=bound)
        .filter(|&t| (2..=t).take_while(|k| k * k <= t).all(|k| t % (k * k) != 0))
        .collect()
}

/// Decides solvability of `a x^2 + b y^2 = z^2` over `Q_p` by brute force over
/// primitive triples modulo `p^k` (`k = 3` for odd `p`, `k = 6` for `p = 2`).
/// Inputs are first reduced to integers with `p`-valuation 0 or 1, and units are
/// replaced by the least positive integer in the same class modulo squares of
/// `Z/p^k`; each pair of classes is searched once.
pub struct SolvabilityOracle {
    p: i64,
    modulus: i64,
    /// `r` is `z^2` for some `z`
    square: Vec<bool>,
    /// `r` is `z^2` for some unit `z`
    unit_square: Vec<bool>,
    cache: HashMap<(i64, i64), bool>,
}

impl SolvabilityOracle {
    pub fn new(p: i64) -> Self {
        let k = if p == 2 { 6 } else { 3 };
        let modulus = p.pow(k);
        let mut square = vec![false; modulus as usize];
        let mut unit_square = vec![false; modulus as usize];
        for z in 0..modulus {
            let sq = (z * z % modulus) as usize;
            square[sq] = true;
            if z % p != 0 {
                unit_square[sq] = true;
            }
        }
        Self {
            p,
            modulus,
            square,
            unit_square,
            cache: HashMap::new(),
        }
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    /// `p^v * w` with `v` in {0, 1} and `w` the least positive class representative.
    pub fn class_key(&self, q: &Rational) -> i64 {
        let p = BigInt::from(self.p);
        let mut n = q.numer() * q.denom();
        let mut v = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            v += 1;
        }
        let unit = n.mod_floor(&BigInt::from(self.modulus)).to_i64().unwrap();
        let w = (1..self.modulus)
            .filter(|w| w % self.p != 0)
            .find(|w| self.unit_square[(unit * w % self.modulus) as usize])
            .expect("every unit class has a representative");
        if v % 2 == 1 {
            self.p * w
        } else {
            w
        }
    }

    pub fn solvable(&self, a: i64, b: i64) -> bool {
        let m = self.modulus;
        for x in 0..m {
            let ax = a * x % m * x % m;
            for y in 0..m {
                let rhs = ((ax + b * y % m * y) % m) as usize;
                let xy_unit = x % self.p != 0 || y % self.p != 0;
                if (xy_unit && self.square[rhs]) || self.unit_square[rhs] {
                    return true;
                }
            }
        }
        false
    }

    /// +1 or -1.
    pub fn symbol(&mut self, a: &Rational, b: &Rational) -> i8 {
        let key = (self.class_key(a), self.class_key(b));
        let solvable = match self.cache.get(&key) {
            Some(&s) => s,
            None => {
                let s = self.solvable(key.0, key.1);
                self.cache.insert(key, s);
                s
            }
        };
        if solvable {
            1
        } else {
            -1
        }
    }

    /// Same question without any class reduction: `a` and `b` are cleared of
    /// denominators and even powers of `p` only.
    pub fn symbol_unreduced(&self, a: &Rational, b: &Rational) -> i8 {
        let clear = |q: &Rational| {
            let p = BigInt::from(self.p);
            let mut n = q.numer() * q.denom();
            while n.is_multiple_of(&(&p * &p)) {
                n /= &p * &p;
            }
            n.mod_floor(&BigInt::from(self.modulus)).to_i64().unwrap()
        };
        if self.solvable(clear(a), clear(b)) {
            1
        } else {
            -1
        }
    }
}

/// Every reduced fraction `p/q` with `0 < |p| <= bound` and `1 <= q <= bound`.
pub fn small_rationals(bound: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    for p in -bound..=bound {
        for q in 1..=bound {
            if p != 0 && p.gcd(&q) == 1 {
                out.push(Rational::new(p, q).unwrap());
            }
        }
    }
    out
}

/// Real-place symbol straight from the definition: `ax^2 + by^2 = z^2` has a
/// nonzero real solution unless both coefficients are negative.
pub fn real_symbol(a: &Rational, b: &Rational) -> i8 {
    if a.numer().is_negative() && b.numer().is_negative() {
        -1
    } else {
        1
    }
}

pub fn is_zero(q: &Rational) -> bool {
    q.numer().is_zero()
}
