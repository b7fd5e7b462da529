//! Exact arithmetic: rationals, factorization, square classes, valuations.

mod factor;
mod rational;
mod square;

pub use factor::{
    factor_budget, factorize, factorize_with_budget, is_prime, is_prime_u64, set_factor_budget,
    PrimeFactorization, DEFAULT_FACTOR_BUDGET,
};
pub use rational::Rational;
pub use square::{
    is_rational_square, square_class, squarefree_part, support_primes, valuation, Place, Prime,
    SquareClass,
};

pub(crate) use square::split_prime_power;
