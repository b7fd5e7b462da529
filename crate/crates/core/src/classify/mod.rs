//! Decides whether a positive rational `m` is the squared edge length of a
//! regular `d`-simplex with vertices in `Q^n`.
//!
//! Two independent deciders live here. [`classify_table`] evaluates the
//! closed-form answer, which depends only on the codimension `n - d`, on
//! `d mod 4` and on the squarefree part of `d + 1`. [`classify_engine`] derives
//! the same answer from first principles: it asks whether a positive definite
//! complement form of rank `n - d` with the forced determinant class and local
//! Hasse invariants exists. The two share nothing beyond the arithmetic,
//! local-symbol and quadratic-form primitives, so agreement between them is a
//! meaningful check.

mod engine;
mod sets;
mod table;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::arith::{squarefree_part, Place, Rational};
use crate::error::{Error, Result};
use crate::local::Sign;

pub use engine::{classify_engine, complement_exists, eta_family};
pub use sets::{in_h, in_norm_group_positive, in_u};
pub use table::{classify_table, explain, stabilization_equiv};
pub(crate) use table::check_stabilization_hypotheses;

/// A `(d, n, m)` instance with `1 <= d <= n` and `m > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Query {
    d: u64,
    n: u64,
    m: Rational,
}

impl Query {
    pub fn new(d: u64, n: u64, m: Rational) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidQuery(format!("d = {d} must be at least 1")));
        }
        if n < d {
            return Err(Error::InvalidQuery(format!("n = {n} must be at least d = {d}")));
        }
        if !m.is_positive() {
            return Err(Error::InvalidQuery(format!("m = {m} must be positive")));
        }
        Ok(Self { d, n, m })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> &Rational {
        &self.m
    }

    pub fn codim(&self) -> u64 {
        self.n - self.d
    }
}

/// Quantities every decider needs: `a = m/2`, `c = n - d`, `d + 1 = s u^2`
/// with `s` squarefree, and the parities of `d + 1` and `d(d+1)/2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedParams {
    pub d: u64,
    pub a: Rational,
    pub c: u64,
    pub s: u64,
    pub u: u64,
    pub parity_dplus1: bool,
    pub parity_tri: bool,
}

/// `((d+1) mod 2, d(d+1)/2 mod 2)` indexed by `d mod 4`.
const PARITY_BY_RESIDUE: [(bool, bool); 4] = [(true, false), (false, true), (true, true), (false, false)];

pub fn derive(q: &Query) -> Result<DerivedParams> {
    let dp1 = q.d.checked_add(1).ok_or_else(|| Error::InvalidQuery("d too large".into()))?;
    let s = squarefree_part(&BigInt::from(dp1))?
        .to_u64()
        .expect("squarefree part of a positive u64 fits in u64");
    let u = (dp1 / s).isqrt();
    debug_assert_eq!(s * u * u, dp1);
    let (parity_dplus1, parity_tri) = PARITY_BY_RESIDUE[(q.d % 4) as usize];
    Ok(DerivedParams {
        d: q.d,
        a: q.m() / Rational::from(2),
        c: q.codim(),
        s,
        u,
        parity_dplus1,
        parity_tri,
    })
}

/// The family of required local Hasse invariants of the complement form; only
/// places with value -1 are stored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct EtaFamily(BTreeMap<Place, Sign>);

impl EtaFamily {
    pub fn new(signs: BTreeMap<Place, Sign>) -> Self {
        Self(signs.into_iter().filter(|(_, s)| s.is_minus()).collect())
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn signs(&self) -> &BTreeMap<Place, Sign> {
        &self.0
    }

    pub fn get(&self, v: &Place) -> Sign {
        self.0.get(v).copied().unwrap_or(Sign::Plus)
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    /// Product of all signs; +1 for every family arising from a valid query.
    pub fn product(&self) -> Sign {
        self.0.values().copied().product()
    }

    pub(crate) fn toggle(&mut self, v: Place) {
        if self.0.remove(&v).is_none() {
            self.0.insert(v, Sign::Minus);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CodimRow {
    Zero,
    One,
    Two,
    Stable,
}

impl CodimRow {
    pub fn of(c: u64) -> Self {
        match c {
            0 => CodimRow::Zero,
            1 => CodimRow::One,
            2 => CodimRow::Two,
            _ => CodimRow::Stable,
        }
    }
}

impl fmt::Display for CodimRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodimRow::Zero => "0",
            CodimRow::One => "1",
            CodimRow::Two => "2",
            CodimRow::Stable => ">=3",
        })
    }
}

impl Serialize for CodimRow {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Table,
    Engine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    SymbolCondition,
    SquareClassCondition,
    NormCondition,
}

/// One consulted condition. `place` is `None` for global (determinant or
/// parity) conditions that are not attached to a single place.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalCheck {
    pub place: Option<Place>,
    pub kind: CheckKind,
    pub passed: bool,
    pub detail: String,
}

impl LocalCheck {
    pub(crate) fn new(place: Option<Place>, kind: CheckKind, passed: bool, detail: String) -> Self {
        Self { place, kind, passed, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub member: bool,
    pub method: Method,
    pub row: CodimRow,
    pub column: u8,
    pub checks: Vec<LocalCheck>,
}

impl Verdict {
    pub(crate) fn new(q: &Query, method: Method, member: bool, mut checks: Vec<LocalCheck>) -> Self {
        // global checks first, then the real place, then primes ascending
        checks.sort_by(|x, y| x.place.cmp(&y.place));
        Self {
            member,
            method,
            row: CodimRow::of(q.codim()),
            column: (q.d() % 4) as u8,
            checks,
        }
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &LocalCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// "∞" for the real place, otherwise the prime.
pub fn place_label(v: &Place) -> String {
    match v {
        Place::Real => "∞".to_string(),
        Place::Finite(p) => p.to_string(),
    }
}
