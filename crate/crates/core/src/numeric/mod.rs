pub mod bigreal;
pub mod gamma;
pub mod poly;
pub mod quad;
pub mod quadfield;
pub mod scalar;
pub mod series;
pub mod taupoly;

use rug::{Integer, Rational};

pub use bigreal::BigReal;
pub use gamma::{beta, gamma, ln_gamma};
pub use poly::RatPoly;
pub use quad::{integrate, Node, Upper};
pub use quadfield::{QNum, QuadField};
pub use scalar::{CPoly, Dual, Field, Module, Ring};
pub use series::{compose, revert_series, FormalSeries};
pub use taupoly::TauPoly;

pub fn factorial(n: u64) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

pub fn binomial(n: u64, k: u64) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// H_n^(p) = Σ_{i=1}^n i^(-p).
pub fn harmonic(n: u64, p: u32) -> Rational {
    let mut acc = Rational::new();
    for i in 1..=n {
        acc += Rational::from((1, Integer::from(Integer::u_pow_u(i as u32, p))));
    }
    acc
}

/// x (x+1) ... (x+d-1) over any ring.
pub fn rising<R: Ring>(x: &R, d: u32) -> R {
    let mut acc = x.one_like();
    for i in 0..d {
        acc = acc.mul(&x.add(&x.from_i64_like(i as i64)));
    }
    acc
}

/// Default working precision: 3.5 bits per term plus 128 guard bits.
pub fn default_precision(n_terms: usize) -> u32 {
    (3.5 * n_terms as f64).ceil() as u32 + 128
}
