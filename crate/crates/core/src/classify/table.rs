//! Closed-form decider: dispatch on the codimension row and `d mod 4`.
//!
//! | c \ d mod 4 | 0               | 1                          | 2          | 3          |
//! |-------------|-----------------|----------------------------|------------|------------|
//! | 0           | Q>0 if s=1 else empty | 2s(Q*)^2 if s in N_-1^+ else empty | empty | 2s(Q*)^2 |
//! | 1           | 2 N_s^+         | 2 N_-1^+                   | 2 N_-s^+   | Q>0        |
//! | 2           | 2 H_s           | 2 U_s                      | Q>0        | Q>0        |
//! | >= 3        | Q>0             | Q>0                        | Q>0        | Q>0        |

use num_bigint::BigInt;

use crate::arith::{is_rational_square, squarefree_part, Rational};
use crate::error::{Error, Result};

use super::sets::{h_checks, norm_checks, u_checks};
use super::{derive, CheckKind, CodimRow, LocalCheck, Method, Query, Verdict};

pub fn classify_table(q: &Query) -> Result<Verdict> {
    let mut v = table_verdict(q)?;
    v.checks.retain(|c| !c.passed);
    Ok(v)
}

/// Same decision as [`classify_table`], listing every consulted place and
/// condition with its outcome.
pub fn explain(q: &Query) -> Result<Verdict> {
    table_verdict(q)
}

fn square_class_check(a: &Rational, s: u64) -> LocalCheck {
    let ratio = a / Rational::from(s);
    let ok = is_rational_square(&ratio);
    LocalCheck::new(
        None,
        CheckKind::SquareClassCondition,
        ok,
        format!(
            "m/(2s) = {ratio} {} a rational square",
            if ok { "is" } else { "is not" }
        ),
    )
}

/// Rows without a condition: a single passed note, dropped by [`classify_table`].
fn automatic(detail: String) -> (bool, Vec<LocalCheck>) {
    (true, vec![LocalCheck::new(None, CheckKind::NormCondition, true, detail)])
}

fn table_verdict(q: &Query) -> Result<Verdict> {
    let p = derive(q)?;
    let a = &p.a;
    let s = BigInt::from(p.s);
    let row = CodimRow::of(p.c);
    let (member, checks) = match (row, q.d() % 4) {
        (CodimRow::Stable, _) => automatic("codimension >= 3: every positive m occurs".into()),

        (CodimRow::Two, 0) => h_checks(a, &s)?,
        (CodimRow::Two, 1) => u_checks(a, &s)?,
        (CodimRow::Two, 2) => automatic(format!("x = a = {a} solves the binary complement problem")),
        (CodimRow::Two, _) => automatic("x = 1 solves the binary complement problem".into()),

        (CodimRow::One, 0) => norm_checks(a, &s)?,
        (CodimRow::One, 1) => norm_checks(a, &BigInt::from(-1))?,
        (CodimRow::One, 2) => norm_checks(a, &-s)?,
        (CodimRow::One, _) => automatic("d ≡ 3 mod 4: the rank-1 complement has no local condition".into()),

        (CodimRow::Zero, 0) => {
            let ok = p.s == 1;
            let detail = if ok {
                "s=1: determinant condition holds for every m".to_string()
            } else {
                format!("s={} ≠ 1 forces empty row", p.s)
            };
            (ok, vec![LocalCheck::new(None, CheckKind::SquareClassCondition, ok, detail)])
        }
        (CodimRow::Zero, 1) => {
            let sq = square_class_check(a, p.s);
            let (norm_ok, mut checks) = norm_checks(&Rational::from(p.s), &BigInt::from(-1))?;
            let ok = sq.passed && norm_ok;
            checks.push(sq);
            (ok, checks)
        }
        (CodimRow::Zero, 2) => (
            false,
            vec![LocalCheck::new(
                None,
                CheckKind::SquareClassCondition,
                false,
                format!(
                    "d ≡ 2 mod 4: determinant condition forces s=1, impossible as d+1 = {} ≡ 3 mod 4",
                    p.d + 1
                ),
            )],
        ),
        (CodimRow::Zero, _) => {
            let sq = square_class_check(a, p.s);
            (sq.passed, vec![sq])
        }
    };
    Ok(Verdict::new(q, Method::Table, member, checks))
}

/// Checks that `m` is classified identically for `(d, n)` and
/// `(d', n + d' - d)` when `sf(d+1) = sf(d'+1)` and `d ≡ d' mod 4`, and
/// returns the shared membership bit.
pub fn stabilization_equiv(d: u64, d_prime: u64, n: u64, m: &Rational) -> Result<bool> {
    check_stabilization_hypotheses(d, d_prime, n)?;
    let small = classify_table(&Query::new(d, n, m.clone())?)?.member;
    let large = classify_table(&Query::new(d_prime, n + d_prime - d, m.clone())?)?.member;
    if small != large {
        return Err(Error::Disagreement(format!(
            "m = {m}: ({d}, {n}) gives {small} but ({d_prime}, {}) gives {large}",
            n + d_prime - d
        )));
    }
    Ok(small)
}

pub(crate) fn check_stabilization_hypotheses(d: u64, d_prime: u64, n: u64) -> Result<()> {
    let fail = |msg: String| Err(Error::PreconditionViolated(msg));
    if d < 1 || d_prime < d {
        return fail(format!("need 1 <= d <= d', got d = {d}, d' = {d_prime}"));
    }
    if n < d {
        return fail(format!("need n >= d, got n = {n}, d = {d}"));
    }
    if !(d_prime - d).is_multiple_of(4) {
        return fail(format!("d = {d} and d' = {d_prime} differ mod 4"));
    }
    let s1 = squarefree_part(&BigInt::from(d + 1))?;
    let s2 = squarefree_part(&BigInt::from(d_prime + 1))?;
    if s1 != s2 {
        return fail(format!("sf(d+1) = {s1} differs from sf(d'+1) = {s2}"));
    }
    Ok(())
}
