//! End-to-end acceptance criteria. Runs without the libtest harness so each
//! criterion's PASS/FAIL line is always printed; exits nonzero on any failure.

mod common;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use common::{m_sweep, random_fractions, small_rationals, squarefree_up_to, SolvabilityOracle};
use num_bigint::BigInt;
use qsimplex::arith::{Place, Rational};
use qsimplex::classify::{classify_engine, classify_table, Query};
use qsimplex::forms::{diagonalize_congruence, direct_sum, forms_equivalent, gram_regular_simplex, DiagonalForm};
use qsimplex::local::{hilbert_symbol, relevant_places, Sign};
use qsimplex::witness::{four_simplex_in_q5, search_lattice_witness, verify_regular_simplex, SearchConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SWEEP_SEED: u64 = 0x5eed;

struct Outcome {
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { failures: Vec::new() }
    }

    fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.fail(msg());
        }
    }
}

fn run(id: u32, name: &str, limit: Option<Duration>, body: impl FnOnce(&mut Outcome)) -> bool {
    let mut out = Outcome::new();
    let start = Instant::now();
    body(&mut out);
    let elapsed = start.elapsed();
    if let Some(limit) = limit.filter(|l| elapsed > *l) {
        out.fail(format!("runtime {elapsed:?} exceeds {limit:?}"));
    }
    let ok = out.failures.is_empty();
    println!(
        "[{}] criterion {id}: {name} ({elapsed:.2?}){}",
        if ok { "PASS" } else { "FAIL" },
        out.failures.first().map(|f| format!(": {f}")).unwrap_or_default()
    );
    ok
}

fn member(d: u64, n: u64, m: &Rational) -> bool {
    classify_table(&Query::new(d, n, m.clone()).unwrap()).unwrap().member
}

/// Rational square test by integer square roots, independent of the library.
fn is_square_fraction(q: &Rational) -> bool {
    let sq = |n: &BigInt| {
        let r = n.sqrt();
        &r * &r == *n
    };
    q.is_positive() && sq(q.numer()) && sq(q.denom())
}

fn no_four_simplex_in_q4(out: &mut Outcome) {
    for m in m_sweep(SWEEP_SEED) {
        out.check(!member(4, 4, &m), || format!("m = {m} classified as a member"));
    }
}

fn four_simplex_in_q5_example(out: &mut Outcome) {
    out.check(member(4, 5, &Rational::from(10)), || "m = 10 rejected for (4, 5)".into());
    let w = four_simplex_in_q5();
    out.check(verify_regular_simplex(&w).unwrap(), || "built-in 4-simplex fails verification".into());
    let rows = &w.vertices()[1..];
    for (i, u) in rows.iter().enumerate() {
        for (j, v) in rows.iter().enumerate() {
            let g: Rational = u.iter().zip(v).map(|(a, b)| a * b).sum();
            let expect = Rational::from(if i == j { 10 } else { 5 });
            out.check(g == expect, || format!("Gram entry ({i}, {j}) = {g}, expected {expect}"));
        }
    }
}

fn tetrahedron_square_class(out: &mut Outcome) {
    for m in m_sweep(SWEEP_SEED) {
        let half = &m / Rational::from(2);
        let expect = is_square_fraction(&half);
        out.check(member(3, 3, &m) == expect, || format!("m = {m}: expected {expect}"));
    }
    let cfg = SearchConfig::new(1, 1, 1_000_000).unwrap();
    let q = Query::new(3, 3, Rational::from(2)).unwrap();
    match search_lattice_witness(&q, &cfg) {
        Ok(w) => {
            let ints = |v: [i64; 3]| v.iter().map(|&x| Rational::from(x)).collect::<Vec<_>>();
            let expect = vec![ints([0, 0, 0]), ints([1, 1, 0]), ints([1, 0, 1]), ints([0, 1, 1])];
            out.check(w.vertices() == expect.as_slice(), || format!("unexpected witness {:?}", w.vertices()));
        }
        Err(e) => out.fail(format!("search failed: {e}")),
    }
}

fn engine_table_agreement(out: &mut Outcome) {
    let mut ms: Vec<Rational> = squarefree_up_to(50).into_iter().map(|t| Rational::from(2 * t)).collect();
    ms.extend(random_fractions(SWEEP_SEED, 100, 100));
    let cells: Vec<(u64, u64, Rational)> = (1..=12u64)
        .flat_map(|d| (0..=4u64).map(move |c| (d, c)))
        .flat_map(|(d, c)| ms.iter().map(move |m| (d, c, m.clone())))
        .collect();
    let disagreements: Vec<String> = cells
        .par_iter()
        .filter_map(|(d, c, m)| {
            let q = Query::new(*d, d + c, m.clone()).unwrap();
            let t = classify_table(&q).unwrap().member;
            let e = classify_engine(&q).unwrap().member;
            (t != e).then(|| format!("({d}, {}, {m}): table {t}, engine {e}", d + c))
        })
        .collect();
    out.check(disagreements.is_empty(), || {
        format!("{} disagreements, first {}", disagreements.len(), disagreements[0])
    });
}

fn stable_row(out: &mut Outcome) {
    for d in 1..=12 {
        for m in m_sweep(SWEEP_SEED) {
            out.check(member(d, d + 3, &m), || format!("(d, m) = ({d}, {m}) rejected"));
        }
    }
}

fn identities(out: &mut Outcome) {
    for d in 1..=30usize {
        let a = diagonalize_congruence(&gram_regular_simplex(d).unwrap()).unwrap();
        let lhs = direct_sum(&a, &DiagonalForm::new(vec![Rational::from(d as i64 + 1)]).unwrap());
        out.check(forms_equivalent(&lhs, &DiagonalForm::identity(d + 1)).unwrap(), || {
            format!("identity fails for d = {d}")
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED);
    let mut entry = || {
        let p: i64 = rng.gen_range(1..=1_000_000) * if rng.gen_bool(0.5) { 1 } else { -1 };
        Rational::new(p, rng.gen_range(1..=1_000_000i64)).unwrap()
    };
    for _ in 0..1000 {
        let (a, b) = (entry(), entry());
        let product: Sign = relevant_places([&a, &b])
            .unwrap()
            .iter()
            .map(|v| hilbert_symbol(&a, &b, v).unwrap())
            .product();
        out.check(product.is_plus(), || format!("reciprocity fails for ({a}, {b})"));
    }
}

fn stabilization(out: &mut Outcome) {
    let pairs = [(1u64, 49u64), (3, 15), (2, 26), (2, 74)];
    let sf = |n: u64| {
        let mut n = n;
        let mut s = 1;
        let mut k = 2;
        while k * k <= n {
            while n.is_multiple_of(k * k) {
                n /= k * k;
            }
            if n.is_multiple_of(k) {
                s *= k;
                n /= k;
            }
            k += 1;
        }
        s * n
    };
    let sweep = m_sweep(SWEEP_SEED);
    for (d, dp) in pairs {
        if (dp - d) % 4 != 0 || sf(d + 1) != sf(dp + 1) {
            out.fail(format!("pair ({d}, {dp}) violates the hypotheses"));
            continue;
        }
        for n in d..=d + 3 {
            for m in &sweep {
                let small = member(d, n, m);
                let large = member(dp, n + dp - d, m);
                out.check(small == large, || format!("({d}, {n}) vs ({dp}, {}) at m = {m}", n + dp - d));
            }
        }
    }
}

fn symbol_oracle(out: &mut Outcome) {
    let values = small_rationals(30);
    for p in [2i64, 3, 5, 7, 11, 13] {
        let oracle = SolvabilityOracle::new(p);
        let keys: Vec<i64> = values.iter().map(|q| oracle.class_key(q)).collect();
        let mut table: HashMap<(i64, i64), i8> = HashMap::new();
        for &ka in &keys {
            for &kb in &keys {
                table
                    .entry((ka, kb))
                    .or_insert_with(|| if oracle.solvable(ka, kb) { 1 } else { -1 });
            }
        }
        let v = Place::prime(p as u32).unwrap();
        let bad: Vec<String> = values
            .par_iter()
            .zip(&keys)
            .flat_map_iter(|(a, ka)| {
                let (table, v, values, keys) = (&table, &v, &values, &keys);
                values.iter().zip(keys).filter_map(move |(b, kb)| {
                    let closed = hilbert_symbol(a, b, v).unwrap().as_i8();
                    (closed != table[&(*ka, *kb)]).then(|| format!("({a}, {b})_{p}: closed form {closed}"))
                })
            })
            .collect();
        out.check(bad.is_empty(), || format!("{} disagreements, first {}", bad.len(), bad[0]));
    }
}

fn main() -> std::process::ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let results = [
        run(1, "no regular 4-simplex in Q^4 over the m sweep", secs(1), no_four_simplex_in_q4),
        run(2, "4-simplex with squared edge 10 in Q^5", Some(Duration::from_millis(10)), four_simplex_in_q5_example),
        run(3, "tetrahedron in Q^3 iff m/2 is a square", None, tetrahedron_square_class),
        run(4, "engine and table agree on the full grid", secs(30), engine_table_agreement),
        run(5, "codimension 3 admits every m", None, stable_row),
        run(6, "simplex identity for d <= 30 and Hilbert reciprocity", secs(10), identities),
        run(7, "stabilization d -> d'", None, stabilization),
        run(8, "closed-form symbol matches mod p^k solvability", secs(60), symbol_oracle),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        std::process::ExitCode::SUCCESS
    } else {
        std::process::ExitCode::FAILURE
    }
}
