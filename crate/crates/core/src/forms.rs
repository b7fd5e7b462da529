//! Rational quadratic forms: symmetric matrices, congruence diagonalization
//! and the complete set of Hasse-Minkowski invariants.

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::arith::{square_class, Place, Rational, SquareClass};
use crate::error::{Error, Result};
use crate::local::{hilbert_symbol, relevant_places, Sign};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl SymmetricMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::BadDimension("matrix is not square".into()));
        }
        for i in 0..dim {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(Self {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn scaled(&self, a: &Rational) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|x| x * a).collect(),
        }
    }

    /// Determinant by Gaussian elimination over Q.
    pub fn determinant(&self) -> Rational {
        let n = self.dim;
        let mut m = self.rows();
        let mut det = Rational::one();
        for k in 0..n {
            let Some(piv) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return Rational::zero();
            };
            if piv != k {
                m.swap(piv, k);
                det = -det;
            }
            let pivot = m[k][k].clone();
            det = det * &pivot;
            for i in k + 1..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let f = &m[i][k] / &pivot;
                for j in k..n {
                    let t = &f * &m[k][j];
                    m[i][j] = &m[i][j] - t;
                }
            }
        }
        det
    }
}

/// The d x d Gram matrix of a regular simplex with squared edge 2: 2 on the
/// diagonal, 1 elsewhere.
pub fn gram_regular_simplex(d: usize) -> Result<SymmetricMatrix> {
    if d < 1 {
        return Err(Error::BadDimension("simplex dimension must be at least 1".into()));
    }
    let rows = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| Rational::from(if i == j { 2 } else { 1 }))
                .collect()
        })
        .collect();
    SymmetricMatrix::new(rows)
}

/// Diagonal form `<a_1, ..., a_r>` with nonzero rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct DiagonalForm(Vec<Rational>);

impl DiagonalForm {
    pub fn new(coefficients: Vec<Rational>) -> Result<Self> {
        if coefficients.iter().any(Rational::is_zero) {
            return Err(Error::Degenerate);
        }
        Ok(Self(coefficients))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// `k * <a>`, k copies of one coefficient.
    pub fn repeated(k: usize, a: &Rational) -> Result<Self> {
        Self::new(vec![a.clone(); k])
    }

    pub fn identity(k: usize) -> Self {
        Self(vec![Rational::one(); k])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.0
    }

    pub fn determinant(&self) -> Rational {
        self.0.iter().cloned().product()
    }
}

impl fmt::Debug for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ">")
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotStrategy {
    /// First nonzero diagonal entry of the remaining block.
    #[default]
    FirstNonzero,
    /// Last nonzero diagonal entry of the remaining block.
    LastNonzero,
}

pub fn diagonalize_congruence(g: &SymmetricMatrix) -> Result<DiagonalForm> {
    diagonalize_congruence_with(g, PivotStrategy::FirstNonzero)
}

/// Symmetric Gaussian elimination: finds the diagonal of `P^T g P` for an
/// invertible rational `P`. When every remaining diagonal entry vanishes, a
/// basis vector is replaced by `e_i + e_j` for some `g_ij != 0`, which puts
/// `2 g_ij` on the diagonal.
pub fn diagonalize_congruence_with(
    g: &SymmetricMatrix,
    strategy: PivotStrategy,
) -> Result<DiagonalForm> {
    let n = g.dim();
    let mut m = g.rows();
    let mut diag = Vec::with_capacity(n);

    for k in 0..n {
        let nonzero_diag = |m: &Vec<Vec<Rational>>, i: &usize| !m[*i][*i].is_zero();
        let pivot = match strategy {
            PivotStrategy::FirstNonzero => (k..n).find(|i| nonzero_diag(&m, i)),
            PivotStrategy::LastNonzero => (k..n).rev().find(|i| nonzero_diag(&m, i)),
        };
        let pivot = match pivot {
            Some(p) => p,
            None => {
                let (i, j) = (k..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !m[i][j].is_zero())
                    .ok_or(Error::Degenerate)?;
                // e_i <- e_i + e_j
                for c in 0..n {
                    let t = m[j][c].clone();
                    m[i][c] = &m[i][c] + t;
                }
                for r in 0..n {
                    let t = m[r][j].clone();
                    m[r][i] = &m[r][i] + t;
                }
                i
            }
        };
        if pivot != k {
            m.swap(pivot, k);
            for row in m.iter_mut() {
                row.swap(pivot, k);
            }
        }
        let p = m[k][k].clone();
        for r in k + 1..n {
            if m[r][k].is_zero() {
                continue;
            }
            let f = &m[r][k] / &p;
            for c in k..n {
                let t = &f * &m[k][c];
                m[r][c] = &m[r][c] - t;
            }
            for rr in k..n {
                let t = &f * &m[rr][k];
                m[rr][r] = &m[rr][r] - t;
            }
        }
        diag.push(p);
    }
    DiagonalForm::new(diag)
}

/// Local Hasse invariant: product over i < j of (a_i, a_j)_v.
pub fn hasse_invariant(f: &DiagonalForm, v: &Place) -> Result<Sign> {
    let c = f.coefficients();
    let mut acc = Sign::Plus;
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            acc = acc * hilbert_symbol(&c[i], &c[j], v)?;
        }
    }
    Ok(acc)
}

/// Rank, determinant class, real signature and the places with Hasse
/// invariant -1. Two nondegenerate rational forms are isometric iff these agree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormInvariants {
    pub rank: usize,
    pub det_class: SquareClass,
    pub positive_count: usize,
    pub negative_count: usize,
    pub hasse: BTreeMap<Place, Sign>,
}

pub fn invariants(f: &DiagonalForm) -> Result<FormInvariants> {
    let coeffs = f.coefficients();
    let det_class = if coeffs.is_empty() {
        SquareClass::one()
    } else {
        // the product of the integer class representatives is smaller than the
        // raw determinant and has the same square class
        let reps: Vec<SquareClass> = coeffs.iter().map(square_class).collect::<Result<_>>()?;
        reps.iter().fold(SquareClass::one(), |acc, c| &acc * c)
    };
    let negative_count = coeffs.iter().filter(|a| a.is_negative()).count();
    let mut hasse = BTreeMap::new();
    for v in relevant_places(coeffs)? {
        let e = hasse_invariant(f, &v)?;
        if e.is_minus() {
            hasse.insert(v, e);
        }
    }
    Ok(FormInvariants {
        rank: coeffs.len(),
        det_class,
        positive_count: coeffs.len() - negative_count,
        negative_count,
        hasse,
    })
}

pub fn forms_equivalent(f: &DiagonalForm, g: &DiagonalForm) -> Result<bool> {
    if f.rank() != g.rank() {
        return Ok(false);
    }
    Ok(invariants(f)? == invariants(g)?)
}

pub fn direct_sum(f: &DiagonalForm, g: &DiagonalForm) -> DiagonalForm {
    DiagonalForm(f.0.iter().chain(&g.0).cloned().collect())
}

pub fn scale(f: &DiagonalForm, a: &Rational) -> Result<DiagonalForm> {
    if a.is_zero() {
        return Err(Error::ZeroScale);
    }
    Ok(DiagonalForm(f.0.iter().map(|x| x * a).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn form(v: &[&str]) -> DiagonalForm {
        DiagonalForm::new(v.iter().map(|s| q(s)).collect()).unwrap()
    }

    fn mat(rows: &[&[i64]]) -> SymmetricMatrix {
        SymmetricMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn gram_matrix_shape_and_determinant() {
        assert_eq!(gram_regular_simplex(1).unwrap().rows(), vec![vec![q("2")]]);
        let a2 = gram_regular_simplex(2).unwrap();
        assert_eq!(a2, mat(&[&[2, 1], &[1, 2]]));
        assert_eq!(a2.determinant(), q("3"));
        assert_eq!(gram_regular_simplex(4).unwrap().determinant(), q("5"));
        assert!(gram_regular_simplex(0).is_err());
    }

    #[test]
    fn non_symmetric_rejected() {
        let rows = vec![vec![q("1"), q("2")], vec![q("3"), q("1")]];
        assert_eq!(SymmetricMatrix::new(rows), Err(Error::NotSymmetric));
    }

    #[test]
    fn diagonalize_examples() {
        assert_eq!(diagonalize_congruence(&mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap(), form(&["1", "1", "1"]));
        assert_eq!(diagonalize_congruence(&gram_regular_simplex(2).unwrap()).unwrap(), form(&["2", "3/2"]));
        assert_eq!(diagonalize_congruence(&gram_regular_simplex(1).unwrap()).unwrap(), form(&["2"]));
    }

    #[test]
    fn diagonalize_hyperbolic_plane() {
        // zero diagonal forces the e_i + e_j correction
        let h = mat(&[&[0, 1], &[1, 0]]);
        let d = diagonalize_congruence(&h).unwrap();
        assert_eq!(d, form(&["2", "-1/2"]));
        assert_eq!(d.determinant(), h.determinant());
    }

    #[test]
    fn degenerate_rejected() {
        assert_eq!(diagonalize_congruence(&mat(&[&[1, 1], &[1, 1]])), Err(Error::Degenerate));
        assert_eq!(diagonalize_congruence(&mat(&[&[0, 0], &[0, 0]])), Err(Error::Degenerate));
    }

    #[test]
    fn hasse_examples() {
        for v in [Place::Real, Place::two(), Place::prime(3u32).unwrap()] {
            assert_eq!(hasse_invariant(&form(&["1", "1", "1", "1"]), &v).unwrap(), Sign::Plus);
        }
        assert_eq!(hasse_invariant(&form(&["-1", "-1"]), &Place::Real).unwrap(), Sign::Minus);
        assert_eq!(hasse_invariant(&DiagonalForm::empty(), &Place::Real).unwrap(), Sign::Plus);
        let a4 = diagonalize_congruence(&gram_regular_simplex(4).unwrap()).unwrap();
        for v in [Place::Real, Place::two(), Place::prime(3u32).unwrap(), Place::prime(5u32).unwrap()] {
            assert_eq!(hasse_invariant(&a4, &v).unwrap(), Sign::Plus, "{v:?}");
        }
    }

    #[test]
    fn invariants_examples() {
        let i = invariants(&form(&["1", "1"])).unwrap();
        assert_eq!((i.rank, i.positive_count, i.negative_count), (2, 2, 0));
        assert!(i.det_class.is_trivial() && i.hasse.is_empty());
        let i = invariants(&form(&["2", "2"])).unwrap();
        assert!(i.det_class.is_trivial() && i.hasse.is_empty());
        let i = invariants(&form(&["5"])).unwrap();
        assert_eq!(i.det_class, SquareClass::from_squarefree(5).unwrap());
        assert!(i.hasse.is_empty());
        let i = invariants(&DiagonalForm::empty()).unwrap();
        assert_eq!(i.rank, 0);
        assert!(i.det_class.is_trivial() && i.hasse.is_empty());
    }

    #[test]
    fn equivalence_examples() {
        let a2 = diagonalize_congruence(&gram_regular_simplex(2).unwrap()).unwrap();
        assert!(forms_equivalent(&form(&["1", "1", "1"]), &direct_sum(&a2, &form(&["3"]))).unwrap());
        assert!(forms_equivalent(&form(&["1", "1"]), &form(&["2", "2"])).unwrap());
        assert!(!forms_equivalent(&form(&["1", "1"]), &form(&["1", "2"])).unwrap());
        // same determinant class and signature, different Hasse invariant at 3
        assert!(!forms_equivalent(&form(&["1", "1"]), &form(&["3", "3"])).unwrap());
    }

    #[test]
    fn sum_and_scale() {
        let f = form(&["2", "3"]);
        assert_eq!(direct_sum(&DiagonalForm::empty(), &f), f);
        assert_eq!(direct_sum(&form(&["2"]), &form(&["3"])), f);
        assert_eq!(scale(&form(&["1", "1"]), &q("1")).unwrap(), form(&["1", "1"]));
        assert_eq!(scale(&f, &q("5")).unwrap(), form(&["10", "15"]));
        assert_eq!(scale(&f, &q("0")), Err(Error::ZeroScale));

        let a4 = diagonalize_congruence(&gram_regular_simplex(4).unwrap()).unwrap();
        assert!(forms_equivalent(&direct_sum(&a4, &form(&["5"])), &DiagonalForm::identity(5)).unwrap());
        // 5 A_4 + <25> = 5 (A_4 + <5>) ~ 5 * 5<1> = <5,5,5,5,5>
        let lhs = direct_sum(&scale(&a4, &q("5")).unwrap(), &form(&["25"]));
        assert!(forms_equivalent(&lhs, &DiagonalForm::repeated(5, &q("5")).unwrap()).unwrap());
    }
}
