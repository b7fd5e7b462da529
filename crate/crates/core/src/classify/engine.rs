//! The local-global decider. `m = 2a` occurs for `(d, n)` iff some positive
//! definite form `r` of rank `c = n - d` satisfies `aA_d + r ~ n<1>`. For
//! `c >= 1` that happens iff `r` can have determinant class `a^d s` and local
//! Hasse invariants `eta_v = (a,-1)_v^{d(d+1)/2} (a,s)_v^{d+1}`; for `c = 0`
//! the two concrete forms are compared directly.

use crate::arith::{square_class, Place, Rational, SquareClass};
use crate::error::{Error, Result};
use crate::forms::{
    diagonalize_congruence, gram_regular_simplex, invariants, scale, DiagonalForm,
};
use crate::local::{is_local_square, symbol_support};

use super::{derive, place_label, CheckKind, DerivedParams, EtaFamily, LocalCheck, Method, Query, Verdict};

pub fn eta_family(p: &DerivedParams) -> Result<EtaFamily> {
    let mut eta = EtaFamily::trivial();
    if p.parity_tri {
        for v in symbol_support(&p.a, &Rational::from(-1))?.into_keys() {
            eta.toggle(v);
        }
    }
    if p.parity_dplus1 {
        for v in symbol_support(&p.a, &Rational::from(p.s))?.into_keys() {
            eta.toggle(v);
        }
    }
    assert!(
        eta.get(&Place::Real).is_plus(),
        "eta at the real place must be +1 for a > 0, s > 0"
    );
    Ok(eta)
}

/// Whether a positive definite form of rank `c` with determinant class
/// `det_class` and Hasse invariants `eta` exists (`c >= 1`), or whether the
/// two supplied forms are isometric (`c = 0`).
pub fn complement_exists(
    c: u64,
    det_class: &SquareClass,
    eta: &EtaFamily,
    codim0_lhs: Option<&DiagonalForm>,
    codim0_rhs: Option<&DiagonalForm>,
) -> Result<bool> {
    Ok(complement_checks(c, det_class, eta, codim0_lhs, codim0_rhs)?.0)
}

fn complement_checks(
    c: u64,
    det_class: &SquareClass,
    eta: &EtaFamily,
    codim0_lhs: Option<&DiagonalForm>,
    codim0_rhs: Option<&DiagonalForm>,
) -> Result<(bool, Vec<LocalCheck>)> {
    if !det_class.is_positive() {
        return Err(Error::PreconditionViolated(format!(
            "determinant class {det_class} of a positive definite complement must be positive"
        )));
    }
    if eta.signs().contains_key(&Place::Real) {
        return Err(Error::PreconditionViolated("eta must be +1 at the real place".into()));
    }
    match c {
        0 => match (codim0_lhs, codim0_rhs) {
            (Some(l), Some(r)) => compare_forms(l, r),
            _ => Err(Error::MissingForms),
        },
        1 => {
            // r = <delta>, whose Hasse invariant is +1 everywhere
            let checks = eta
                .signs()
                .keys()
                .map(|v| {
                    LocalCheck::new(
                        Some(v.clone()),
                        CheckKind::SymbolCondition,
                        false,
                        format!("eta_{} = -1 but a rank-1 complement has Hasse invariant +1", place_label(v)),
                    )
                })
                .collect();
            Ok((eta.is_trivial(), checks))
        }
        2 => {
            // r = <x, delta/x> has Hasse invariant (x, -delta)_v; a sign family is
            // realizable iff it is trivial wherever -delta is a local square.
            let minus_delta = -det_class.to_rational();
            let mut ok = true;
            let mut checks = Vec::new();
            for v in eta.signs().keys() {
                let square = is_local_square(&minus_delta, v)?;
                ok &= !square;
                checks.push(LocalCheck::new(
                    Some(v.clone()),
                    CheckKind::SymbolCondition,
                    !square,
                    format!(
                        "eta_{p} = -1 requires -delta = {minus_delta} not a square in Q_{p}: {}",
                        if square { "it is" } else { "it is not" },
                        p = place_label(v)
                    ),
                ));
            }
            Ok((ok, checks))
        }
        _ => Ok((true, Vec::new())),
    }
}

fn compare_forms(lhs: &DiagonalForm, rhs: &DiagonalForm) -> Result<(bool, Vec<LocalCheck>)> {
    let (li, ri) = (invariants(lhs)?, invariants(rhs)?);
    let mut checks = Vec::new();
    if li.rank != ri.rank {
        checks.push(LocalCheck::new(
            None,
            CheckKind::SquareClassCondition,
            false,
            format!("rank {} vs {}", li.rank, ri.rank),
        ));
    }
    checks.push(LocalCheck::new(
        None,
        CheckKind::SquareClassCondition,
        li.det_class == ri.det_class,
        format!("determinant classes {} vs {}", li.det_class, ri.det_class),
    ));
    checks.push(LocalCheck::new(
        Some(Place::Real),
        CheckKind::SquareClassCondition,
        (li.positive_count, li.negative_count) == (ri.positive_count, ri.negative_count),
        format!(
            "signatures ({}, {}) vs ({}, {})",
            li.positive_count, li.negative_count, ri.positive_count, ri.negative_count
        ),
    ));
    let places: std::collections::BTreeSet<&Place> = li.hasse.keys().chain(ri.hasse.keys()).collect();
    for v in places {
        let (a, b) = (li.hasse.contains_key(v), ri.hasse.contains_key(v));
        checks.push(LocalCheck::new(
            Some(v.clone()),
            CheckKind::SymbolCondition,
            a == b,
            format!(
                "Hasse invariants at {}: {} vs {}",
                place_label(v),
                if a { "-1" } else { "+1" },
                if b { "-1" } else { "+1" }
            ),
        ));
    }
    Ok((li == ri, checks))
}

/// Determinant class `a^d * s` of the complement, reducing `a^d` mod squares.
fn complement_det_class(p: &DerivedParams) -> Result<SquareClass> {
    let s = Rational::from(p.s);
    if p.d % 2 == 1 {
        square_class(&(&p.a * &s))
    } else {
        square_class(&s)
    }
}

pub fn classify_engine(q: &Query) -> Result<Verdict> {
    let p = derive(q)?;
    let det_class = complement_det_class(&p)?;
    let (member, checks) = if p.c == 0 {
        let a_d = diagonalize_congruence(&gram_regular_simplex(q.d() as usize)?)?;
        let lhs = scale(&a_d, &p.a)?;
        let rhs = DiagonalForm::identity(q.n() as usize);
        complement_checks(0, &det_class, &EtaFamily::trivial(), Some(&lhs), Some(&rhs))?
    } else {
        let eta = eta_family(&p)?;
        complement_checks(p.c, &det_class, &eta, None, None)?
    };
    debug_assert!(member || !checks.iter().all(|c| c.passed));
    Ok(Verdict::new(q, Method::Engine, member, checks))
}
