//! Symbolic labels for the cells of the classification table.

use num_bigint::BigInt;
use qsimplex::arith::Rational;
use qsimplex::classify::{derive, in_norm_group_positive, Query};
use qsimplex::error::Result;

fn subscript(s: &str) -> String {
    if s.chars().count() == 1 {
        format!("_{s}")
    } else {
        format!("_{{{s}}}")
    }
}

fn norm_group(t: &str) -> String {
    format!("2N{}^+", subscript(t))
}

/// The set of admissible `m` for `(d, d + c)`, named as in the table.
pub fn cell_label(d: u64, c: u64) -> Result<String> {
    let p = derive(&Query::new(d, d + c, Rational::one())?)?;
    let s = p.s.to_string();
    let all = "Q_{>0}".to_string();
    let empty = "∅".to_string();
    let square_class = |k: u64| {
        if k == 1 {
            "2(Q^×)²".to_string()
        } else {
            format!("{}(Q^×)²", 2 * k)
        }
    };
    Ok(match (c.min(3), d % 4) {
        (3, _) => all,
        (2, 0) => format!("2H{}", subscript(&s)),
        (2, 1) => format!("2U{}", subscript(&s)),
        (2, _) => all,
        (1, 0) => norm_group(&s),
        (1, 1) => norm_group("−1"),
        (1, 2) => norm_group(&format!("−{s}")),
        (1, _) => all,
        (_, 0) if p.s == 1 => all,
        (_, 0) => empty,
        (_, 1) if in_norm_group_positive(&Rational::from(p.s), &BigInt::from(-1))? => square_class(p.s),
        (_, 1) => empty,
        (_, 2) => empty,
        _ => square_class(p.s),
    })
}
