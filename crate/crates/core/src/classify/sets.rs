//! Membership in the positive norm groups `N_t^+` and in the local sets `H_s`,
//! `U_s`. Each predicate also reports the places it consulted.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::arith::{support_primes, Place, Rational, SquareClass};
use crate::error::{Error, Result};
use crate::local::{hilbert_symbol, is_local_square, relevant_places};

use super::{place_label, CheckKind, LocalCheck};

fn require_positive(a: &Rational) -> Result<()> {
    if a.is_positive() {
        Ok(())
    } else {
        Err(Error::PreconditionViolated(format!("{a} must be positive")))
    }
}

fn require_positive_squarefree(s: &BigInt) -> Result<Rational> {
    let class = SquareClass::from_squarefree(s.clone())?;
    if !class.is_positive() {
        return Err(Error::PreconditionViolated(format!("{s} must be positive")));
    }
    Ok(class.to_rational())
}

/// `a` in `N_t^+ = {x^2 - t y^2 > 0}`, decided by the Hasse norm theorem:
/// `(a, t)_v = +1` at every place.
pub fn in_norm_group_positive(a: &Rational, t: &BigInt) -> Result<bool> {
    Ok(norm_checks(a, t)?.0)
}

pub(crate) fn norm_checks(a: &Rational, t: &BigInt) -> Result<(bool, Vec<LocalCheck>)> {
    require_positive(a)?;
    let t = SquareClass::from_squarefree(t.clone())?.to_rational();
    if t == Rational::one() {
        return Ok((
            true,
            vec![LocalCheck::new(
                None,
                CheckKind::NormCondition,
                true,
                format!("N_1^+ is all of Q_>0: {a} = ((a+1)/2)^2 - ((a-1)/2)^2"),
            )],
        ));
    }
    let mut ok = true;
    let mut checks = Vec::new();
    for v in relevant_places([a, &t])? {
        let sym = hilbert_symbol(a, &t, &v)?;
        ok &= sym.is_plus();
        checks.push(LocalCheck::new(
            Some(v.clone()),
            CheckKind::NormCondition,
            sym.is_plus(),
            format!("({a},{t})_{} = {sym}", place_label(&v)),
        ));
    }
    Ok((ok, checks))
}

/// `a` in `H_s`: `(a, s)_p = +1` at every place where `-s` is a local square.
/// Only `2`, the primes of `a` and the primes of `s` can contribute.
pub fn in_h(a: &Rational, s: &BigInt) -> Result<bool> {
    Ok(h_checks(a, s)?.0)
}

pub(crate) fn h_checks(a: &Rational, s: &BigInt) -> Result<(bool, Vec<LocalCheck>)> {
    require_positive(a)?;
    let s = require_positive_squarefree(s)?;
    let minus_s = -&s;
    let mut places: BTreeSet<Place> = BTreeSet::from([Place::two()]);
    places.extend(support_primes(a)?.into_iter().map(Place::Finite));
    places.extend(support_primes(&s)?.into_iter().map(Place::Finite));
    local_condition_checks(&places, &minus_s, a, &s, "H")
}

/// `a` in `U_s`: `(a, -1)_p = +1` at every place where `-as` is a local
/// square. Only `2` and the primes of `a` can contribute.
pub fn in_u(a: &Rational, s: &BigInt) -> Result<bool> {
    Ok(u_checks(a, s)?.0)
}

pub(crate) fn u_checks(a: &Rational, s: &BigInt) -> Result<(bool, Vec<LocalCheck>)> {
    require_positive(a)?;
    let s = require_positive_squarefree(s)?;
    let minus_as = -(a * &s);
    let mut places: BTreeSet<Place> = BTreeSet::from([Place::two()]);
    places.extend(support_primes(a)?.into_iter().map(Place::Finite));
    local_condition_checks(&places, &minus_as, a, &Rational::from(-1), "U")
}

/// At each place where `gate` is a local square require `(a, b)_p = +1`.
fn local_condition_checks(
    places: &BTreeSet<Place>,
    gate: &Rational,
    a: &Rational,
    b: &Rational,
    set_name: &str,
) -> Result<(bool, Vec<LocalCheck>)> {
    let mut ok = true;
    let mut checks = Vec::new();
    for v in places {
        let p = place_label(v);
        if is_local_square(gate, v)? {
            let sym = hilbert_symbol(a, b, v)?;
            ok &= sym.is_plus();
            checks.push(LocalCheck::new(
                Some(v.clone()),
                CheckKind::SymbolCondition,
                sym.is_plus(),
                format!("({a},{b})_{p} = 1 required because {gate} is a square in Q_{p}; got {sym}"),
            ));
        } else {
            checks.push(LocalCheck::new(
                Some(v.clone()),
                CheckKind::SquareClassCondition,
                true,
                format!("{gate} is not a square in Q_{p}: no {set_name} condition"),
            ));
        }
    }
    Ok((ok, checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn norm_group_examples() {
        assert!(in_norm_group_positive(&q("5"), &int(5)).unwrap());
        for t in [-1, 2, -3, 5, 7, 1] {
            assert!(in_norm_group_positive(&q("1"), &int(t)).unwrap());
        }
        assert!(!in_norm_group_positive(&q("3"), &int(-1)).unwrap());
        assert!(in_norm_group_positive(&q("5"), &int(-1)).unwrap());
        assert!(in_norm_group_positive(&q("25/2"), &int(-1)).unwrap());
        assert!(in_norm_group_positive(&q("7/5"), &int(1)).unwrap());
    }

    #[test]
    fn norm_group_rejects_bad_arguments() {
        assert!(matches!(in_norm_group_positive(&q("3"), &int(12)), Err(Error::NotSquarefree(_))));
        assert!(matches!(in_norm_group_positive(&q("-3"), &int(2)), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn h_examples() {
        for s in [1, 2, 3, 5, 6, 7] {
            assert!(in_h(&q("1"), &int(s)).unwrap());
        }
        assert!(in_h(&q("2"), &int(5)).unwrap());
        for a in ["3", "7/2", "15", "1/6"] {
            assert!(in_h(&q(a), &int(1)).unwrap());
        }
        // -7 is a square in Q_2 and (3,7)_2 = -1
        assert!(!in_h(&q("3"), &int(7)).unwrap());
        assert!(matches!(in_h(&q("3"), &int(8)), Err(Error::NotSquarefree(_))));
    }

    #[test]
    fn u_examples() {
        for s in [1, 2, 3, 5, 6] {
            assert!(in_u(&q("1"), &int(s)).unwrap());
        }
        assert!(!in_u(&q("3"), &int(6)).unwrap());
        assert!(in_u(&q("2"), &int(2)).unwrap());
    }

    #[test]
    fn checks_describe_conditions() {
        let (ok, checks) = u_checks(&q("3"), &int(6)).unwrap();
        assert!(!ok);
        let failing: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        assert_eq!(failing.len(), 1);
        assert_eq!(failing[0].place, Some(Place::prime(3u32).unwrap()));
        assert!(failing[0].detail.contains("(3,-1)_3 = 1 required because -18 is a square in Q_3"));
    }
}
