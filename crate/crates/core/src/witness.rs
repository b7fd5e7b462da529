//! Explicit certificates: checking candidate simplices, fixed constructions,
//! and a bounded search for integer-coordinate witnesses.
//!
//! A failed search says nothing about nonexistence; only the classifier
//! decides that.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Rational;
use crate::classify::{check_stabilization_hypotheses, classify_table, Query};
use crate::error::{Error, Result};

/// Vertices `v_0, ..., v_d` in `Q^n` claimed to form a regular simplex with
/// squared edge length `edge_sq`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    ambient_dim: usize,
    vertices: Vec<Vec<Rational>>,
    edge_sq: Rational,
}

impl Witness {
    pub fn new(ambient_dim: usize, vertices: Vec<Vec<Rational>>, edge_sq: Rational) -> Self {
        Self {
            ambient_dim,
            vertices,
            edge_sq,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn edge_sq(&self) -> &Rational {
        &self.edge_sq
    }

    /// `d`, one less than the number of vertices.
    pub fn simplex_dim(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    /// Multiplies every coordinate by `q`, so the squared edge becomes `m q^2`.
    pub fn scaled(&self, q: &Rational) -> Self {
        Self {
            ambient_dim: self.ambient_dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(|x| x * q).collect())
                .collect(),
            edge_sq: &self.edge_sq * &q.square(),
        }
    }
}

fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn sub(u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

/// True iff the Gram matrix of `v_i - v_0` equals `(m/2) A_d`, i.e. `m` on the
/// diagonal and `m/2` elsewhere, with `m > 0` and `d >= 1`. Such a Gram
/// matrix is nonsingular, so the vertices are affinely independent.
pub fn verify_regular_simplex(w: &Witness) -> Result<bool> {
    if let Some((i, v)) = w.vertices.iter().enumerate().find(|(_, v)| v.len() != w.ambient_dim) {
        return Err(Error::DimensionMismatch(format!(
            "vertex {i} has {} coordinates, ambient dimension is {}",
            v.len(),
            w.ambient_dim
        )));
    }
    if w.vertices.len() < 2 || !w.edge_sq.is_positive() {
        return Ok(false);
    }
    let half = &w.edge_sq / Rational::from(2);
    let origin = &w.vertices[0];
    let diffs: Vec<Vec<Rational>> = w.vertices[1..].iter().map(|v| sub(v, origin)).collect();
    for (i, u) in diffs.iter().enumerate() {
        for (j, v) in diffs.iter().enumerate().skip(i) {
            let expect = if i == j { &w.edge_sq } else { &half };
            if dot(u, v) != *expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `0, e_1 - e_{d+1}, ..., e_d - e_{d+1}` in `Q^{d+1}`, squared edge 2.
pub fn canonical_simplex(d: usize) -> Result<Witness> {
    if d < 1 {
        return Err(Error::BadDimension("simplex dimension must be at least 1".into()));
    }
    let mut vertices = vec![vec![Rational::zero(); d + 1]];
    for i in 0..d {
        let mut v = vec![Rational::zero(); d + 1];
        v[i] = Rational::one();
        v[d] = Rational::from(-1);
        vertices.push(v);
    }
    Ok(Witness::new(d + 1, vertices, Rational::from(2)))
}

/// A regular 4-simplex of squared edge 10 in `Q^5`: the origin and four rows
/// with Gram matrix `5 A_4`.
pub fn four_simplex_in_q5() -> Witness {
    let row = |xs: [&str; 5]| xs.iter().map(|s| s.parse::<Rational>().unwrap()).collect::<Vec<_>>();
    Witness::new(
        5,
        vec![
            vec![Rational::zero(); 5],
            row(["1", "3", "0", "0", "0"]),
            row(["2", "1", "1", "0", "2"]),
            row(["2", "1", "-2", "0", "1"]),
            row(["5/4", "5/4", "-1/4", "5/2", "3/4"]),
        ],
        Rational::from(10),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    coord_bound: u32,
    scale_max: u32,
    effort_budget: u64,
}

impl SearchConfig {
    pub fn new(coord_bound: u32, scale_max: u32, effort_budget: u64) -> Result<Self> {
        if coord_bound < 1 || scale_max < 1 || effort_budget < 1 {
            return Err(Error::PreconditionViolated("search bounds must all be at least 1".into()));
        }
        Ok(Self {
            coord_bound,
            scale_max,
            effort_budget,
        })
    }

    pub fn coord_bound(&self) -> u32 {
        self.coord_bound
    }

    pub fn scale_max(&self) -> u32 {
        self.scale_max
    }

    pub fn effort_budget(&self) -> u64 {
        self.effort_budget
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            coord_bound: 3,
            scale_max: 2,
            effort_budget: 50_000_000,
        }
    }
}

type Vector = Vec<i64>;

/// Node counter shared by one sequential piece of the search.
struct Effort {
    used: u64,
    cap: u64,
}

impl Effort {
    fn new(cap: u64) -> Self {
        Self { used: 0, cap }
    }

    fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.cap
    }
}

#[derive(Debug)]
struct OverBudget;

/// All integer vectors of squared norm `target` with coordinates in
/// `[-bound, bound]`, in descending lexicographic order.
fn vectors_of_norm(
    dim: usize,
    bound: i64,
    target: i64,
    effort: &mut Effort,
) -> std::result::Result<Vec<Vector>, OverBudget> {
    fn descend(
        prefix: &mut Vector,
        dim: usize,
        bound: i64,
        remaining: i64,
        out: &mut Vec<Vector>,
        effort: &mut Effort,
    ) -> std::result::Result<(), OverBudget> {
        if !effort.tick() {
            return Err(OverBudget);
        }
        let left = (dim - prefix.len()) as i64;
        if left == 0 {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return Ok(());
        }
        // the remaining coordinates can absorb at most left * bound^2
        if remaining > left * bound * bound {
            return Ok(());
        }
        for x in (-bound..=bound).rev() {
            let rest = remaining - x * x;
            if rest < 0 || rest > (left - 1) * bound * bound {
                continue;
            }
            prefix.push(x);
            descend(prefix, dim, bound, rest, out, effort)?;
            prefix.pop();
        }
        Ok(())
    }
    let mut out = Vec::new();
    descend(&mut Vec::with_capacity(dim), dim, bound, target, &mut out, effort)?;
    Ok(out)
}

fn dot_i(u: &[i64], v: &[i64]) -> i64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Representative of a signed-permutation orbit: nonnegative, nonincreasing.
fn is_orbit_representative(v: &[i64]) -> bool {
    v.iter().all(|&x| x >= 0) && v.windows(2).all(|w| w[0] >= w[1])
}

/// First `need`-clique (in index order) among `cands`, where adjacency means
/// dot product `half`.
fn extend_clique(
    vectors: &[Vector],
    cands: &[usize],
    need: usize,
    half: i64,
    chosen: &mut Vec<usize>,
    effort: &mut Effort,
) -> std::result::Result<bool, OverBudget> {
    if need == 0 {
        return Ok(true);
    }
    if cands.len() < need {
        return Ok(false);
    }
    for (k, &i) in cands.iter().enumerate() {
        if cands.len() - k < need {
            break;
        }
        if !effort.tick() {
            return Err(OverBudget);
        }
        let next: Vec<usize> = cands[k + 1..]
            .iter()
            .copied()
            .filter(|&j| dot_i(&vectors[i], &vectors[j]) == half)
            .collect();
        chosen.push(i);
        if extend_clique(vectors, &next, need - 1, half, chosen, effort)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

enum Branch {
    Found(u64, Vec<usize>),
    Exhausted(u64),
    OverBudget,
}

/// Clique search below one fixed first vertex.
fn search_branch(vectors: &[Vector], first: usize, d: usize, half: i64, cap: u64) -> Branch {
    let mut effort = Effort::new(cap);
    let mut cands = Vec::new();
    for (j, v) in vectors.iter().enumerate() {
        if !effort.tick() {
            return Branch::OverBudget;
        }
        if j != first && dot_i(&vectors[first], v) == half {
            cands.push(j);
        }
    }
    let mut chosen = vec![first];
    match extend_clique(vectors, &cands, d - 1, half, &mut chosen, &mut effort) {
        Ok(true) => Branch::Found(effort.used, chosen),
        Ok(false) => Branch::Exhausted(effort.used),
        Err(OverBudget) => Branch::OverBudget,
    }
}

const BRANCH_CHUNK: usize = 32;

/// Searches scales `q = 1..=scale_max` with `M = m q^2` integral for `d`
/// integer vectors of norm `M` with pairwise squared distance `M`; together
/// with the origin they form a regular simplex, which is returned scaled by
/// `1/q`.
///
/// Branches (choices of the first vertex) run in parallel in fixed-size
/// chunks, but results and effort are reduced in branch order, so the output
/// and the budget outcome are the same as for a sequential search.
pub fn search_lattice_witness(query: &Query, cfg: &SearchConfig) -> Result<Witness> {
    let d = query.d() as usize;
    let n = query.n() as usize;
    let bound = cfg.coord_bound as i64;
    let budget = cfg.effort_budget;
    let over = || Error::BudgetExceeded { budget };
    let mut used = 0u64;

    for q in 1..=cfg.scale_max as i64 {
        let big_m = query.m() * Rational::from(q * q);
        if !big_m.is_integer() {
            continue;
        }
        let Some(target) = num_traits::ToPrimitive::to_i64(big_m.numer()) else {
            continue;
        };
        if target > (n as i64) * bound * bound {
            continue;
        }
        let mut effort = Effort::new(budget - used);
        let vectors = vectors_of_norm(n, bound, target, &mut effort).map_err(|_| over())?;
        used += effort.used;

        if d >= 2 && target % 2 != 0 {
            continue;
        }
        let half = target / 2;
        let firsts: Vec<usize> = (0..vectors.len())
            .filter(|&i| is_orbit_representative(&vectors[i]))
            .collect();

        for chunk in firsts.chunks(BRANCH_CHUNK) {
            let cap = budget - used;
            let results: Vec<Branch> = chunk
                .par_iter()
                .map(|&first| search_branch(&vectors, first, d, half, cap))
                .collect();
            for r in results {
                match r {
                    Branch::OverBudget => return Err(over()),
                    Branch::Exhausted(cost) => {
                        used += cost;
                        if used > budget {
                            return Err(over());
                        }
                    }
                    Branch::Found(cost, clique) => {
                        used += cost;
                        if used > budget {
                            return Err(over());
                        }
                        return Ok(build_witness(&vectors, &clique, n, q, query.m()));
                    }
                }
            }
        }
    }
    Err(Error::NotFoundWithinBounds)
}

fn build_witness(vectors: &[Vector], clique: &[usize], n: usize, q: i64, m: &Rational) -> Witness {
    let inv = Rational::new(1, q).expect("scale is positive");
    let mut vertices = vec![vec![Rational::zero(); n]];
    vertices.extend(
        clique
            .iter()
            .map(|&i| vectors[i].iter().map(|&x| Rational::from(x) * &inv).collect()),
    );
    let w = Witness::new(n, vertices, m.clone());
    assert!(
        verify_regular_simplex(&w).unwrap_or(false),
        "lattice search produced an invalid simplex"
    );
    w
}

/// Moves a witness for `(d, n, m)` to `(d', n + d' - d, m)` when
/// `sf(d+1) = sf(d'+1)` and `d ≡ d' mod 4`. Membership is guaranteed by the
/// classification; the witness itself comes from a fresh lattice search and
/// may be absent.
pub fn transfer_witness_stabilized(
    w: &Witness,
    d_prime: u64,
    cfg: &SearchConfig,
) -> Result<Option<Witness>> {
    if !verify_regular_simplex(w)? {
        return Err(Error::PreconditionViolated("input is not a regular simplex".into()));
    }
    let d = w.simplex_dim() as u64;
    let n = w.ambient_dim() as u64;
    check_stabilization_hypotheses(d, d_prime, n)?;
    if d_prime == d {
        return Ok(Some(w.clone()));
    }
    let target = Query::new(d_prime, n + d_prime - d, w.edge_sq().clone())?;
    if !classify_table(&target)?.member {
        return Err(Error::Disagreement(format!(
            "m = {} has a witness for ({d}, {n}) but is not classified as a member for ({d_prime}, {})",
            w.edge_sq(),
            target.n()
        )));
    }
    match search_lattice_witness(&target, cfg) {
        Ok(found) => Ok(Some(found)),
        Err(Error::NotFoundWithinBounds | Error::BudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}
