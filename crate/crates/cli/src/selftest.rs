//! Consistency sweeps run by `qsimplex selftest`.

use num_bigint::BigInt;
use qsimplex::arith::{squarefree_part, Place, Rational};
use qsimplex::classify::{classify_engine, classify_table, Query};
use qsimplex::error::{Error, Result};
use qsimplex::forms::{diagonalize_congruence, direct_sum, forms_equivalent, gram_regular_simplex, DiagonalForm};
use qsimplex::local::{hilbert_symbol, relevant_places, Sign};
use qsimplex::witness::{search_lattice_witness, SearchConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct SelftestConfig {
    pub grid_dmax: u64,
    pub grid_codim: u64,
    pub m_bound: i64,
    pub seed: u64,
    /// Negates every Hilbert symbol at 3 inside the reciprocity sweep.
    #[serde(skip)]
    pub inject_symbol_flip: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub name: &'static str,
    pub passed: u64,
    pub total: u64,
}

#[derive(Debug, Default)]
pub struct SelftestOutcome {
    pub tallies: Vec<Tally>,
    pub counterexample: Option<String>,
}

impl SelftestOutcome {
    fn suite(&mut self, name: &'static str, cases: impl IntoIterator<Item = Result<Option<String>>>) -> Result<()> {
        let mut tally = Tally { name, passed: 0, total: 0 };
        for case in cases {
            tally.total += 1;
            match case? {
                None => tally.passed += 1,
                Some(msg) => {
                    self.counterexample.get_or_insert_with(|| format!("{name}: {msg}"));
                }
            }
        }
        self.tallies.push(tally);
        Ok(())
    }
}

fn sweep_m(cfg: &SelftestConfig) -> Result<Vec<Rational>> {
    let mut ms = Vec::new();
    for t in 1..=cfg.m_bound {
        if squarefree_part(&BigInt::from(t))? == BigInt::from(t) {
            ms.push(Rational::from(2 * t));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..100 {
        ms.push(Rational::new(rng.gen_range(1..=cfg.m_bound), rng.gen_range(1..=cfg.m_bound))?);
    }
    Ok(ms)
}

fn agreement(d: u64, n: u64, m: &Rational) -> Result<Option<String>> {
    let q = Query::new(d, n, m.clone())?;
    let t = classify_table(&q)?.member;
    let e = classify_engine(&q)?.member;
    Ok((t != e).then(|| format!("(d, n, m) = ({d}, {n}, {m}): table {t}, engine {e}")))
}

fn reciprocity(a: &Rational, b: &Rational, flip: bool) -> Result<Option<String>> {
    let three = Place::prime(3u32)?;
    let mut places = relevant_places([a, b])?;
    if flip {
        places.insert(three.clone());
    }
    let mut product = Sign::Plus;
    for v in &places {
        let s = hilbert_symbol(a, b, v)?;
        product = product * if flip && *v == three { s * Sign::Minus } else { s };
    }
    Ok(product
        .is_minus()
        .then(|| format!("({a}, {b}): product of local symbols is -1")))
}

fn identity(d: usize) -> Result<Option<String>> {
    let a = diagonalize_congruence(&gram_regular_simplex(d)?)?;
    let lhs = direct_sum(&a, &DiagonalForm::new(vec![Rational::from(d + 1)])?);
    Ok((!forms_equivalent(&lhs, &DiagonalForm::identity(d + 1))?)
        .then(|| format!("d = {d}: A_d + <d+1> is not a sum of d+1 squares")))
}

fn soundness(d: u64, n: u64, m: i64, cfg: &SearchConfig) -> Result<Option<String>> {
    let q = Query::new(d, n, Rational::from(m))?;
    match search_lattice_witness(&q, cfg) {
        Ok(_) if !classify_table(&q)?.member => {
            Ok(Some(format!("(d, n, m) = ({d}, {n}, {m}): witness found for a non-member")))
        }
        Ok(_) | Err(Error::NotFoundWithinBounds | Error::BudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn run(cfg: &SelftestConfig) -> Result<SelftestOutcome> {
    let mut out = SelftestOutcome::default();

    let ms = sweep_m(cfg)?;
    let grid = (1..=cfg.grid_dmax).flat_map(|d| (0..=cfg.grid_codim).map(move |c| (d, d + c)));
    let cases: Vec<_> = grid
        .flat_map(|(d, n)| ms.iter().map(move |m| agreement(d, n, m)))
        .collect();
    out.suite("agreement", cases)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9);
    let mut entry = || {
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        Rational::new(sign * rng.gen_range(1..=1_000_000i64), rng.gen_range(1..=1_000_000i64))
    };
    let mut cases = Vec::new();
    for _ in 0..1000 {
        let (a, b) = (entry()?, entry()?);
        cases.push(reciprocity(&a, &b, cfg.inject_symbol_flip));
    }
    out.suite("reciprocity", cases)?;

    out.suite("identity", (1..=30).map(identity))?;

    let search = SearchConfig::new(3, 2, 20_000_000)?;
    let cases: Vec<_> = (1..=4u64)
        .flat_map(|d| (d..=5).map(move |n| (d, n)))
        .flat_map(|(d, n)| (1..=20).map(move |m| (d, n, m)))
        .map(|(d, n, m)| soundness(d, n, m, &search))
        .collect();
    out.suite("witness soundness", cases)?;

    Ok(out)
}
