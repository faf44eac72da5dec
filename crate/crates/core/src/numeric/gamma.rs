//! Gamma function by the Stirling series with upward argument shifting.

use std::sync::Mutex;

use rug::{Integer, Rational};

use super::bigreal::BigReal;
use crate::error::{Error, Result};

/// Extra bits carried internally by `gamma`/`ln_gamma`.
pub const GAMMA_GUARD_BITS: u32 = 64;

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// B_0..B_n (B_1 = -1/2).
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut cache = BERNOULLI.lock().unwrap();
    if cache.is_empty() {
        cache.push(Rational::from(1));
    }
    while cache.len() <= n {
        let m = cache.len();
        // sum_{j<m} C(m+1, j) B_j + (m+1) B_m = 0
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (j, b) in cache.iter().enumerate() {
            acc += Rational::from(b * &binom);
            binom = binom * (m + 1 - j) as u64 / (j + 1) as u64;
        }
        let bm = -acc / Rational::from(m as u64 + 1);
        cache.push(bm);
    }
    cache[..=n].to_vec()
}

fn stirling_tail(y: &BigReal, wp: u32) -> BigReal {
    // sum_k B_2k / (2k(2k-1) y^(2k-1))
    let y2 = y * y;
    let mut pow = y.clone();
    let mut acc = BigReal::zero(wp);
    let eps_bits = -(wp as f64) - 4.0;
    let kmax = (wp / 4 + 20) as usize;
    let b = bernoulli_numbers(2 * kmax);
    let mut k = 1usize;
    loop {
        let coef = Rational::from(&b[2 * k] / Rational::from((2 * k * (2 * k - 1)) as u64));
        let term = BigReal::from_rational(&coef, wp) / &pow;
        acc += &term;
        if term.log2_abs() < eps_bits + acc.log2_abs().max(-1e9) || k >= kmax {
            break;
        }
        pow = &pow * &y2;
        k += 1;
    }
    acc
}

fn ln_gamma_positive(x: &BigReal, wp: u32) -> BigReal {
    let y_min = (wp / 4 + 16) as f64;
    let mut y = x.with_prec(wp);
    let mut prod = BigReal::from_i64(1, wp);
    while y.to_f64() < y_min {
        prod = &prod * &y;
        y = &y + 1;
    }
    let half = BigReal::from_f64(0.5, wp);
    let two_pi = BigReal::pi(wp) * 2;
    let main = &(&(&y - &half) * &y.ln()) - &y;
    let main = &main + &(two_pi.ln() * &half);
    &(&main + &stirling_tail(&y, wp)) - &prod.ln()
}

fn check_pole(x: &BigReal) -> Result<()> {
    if x.to_f64() <= 0.0 && x.floor() == *x {
        return Err(Error::Domain(format!("gamma pole at {}", x.to_decimal(20))));
    }
    Ok(())
}

/// log |Γ(x)|.
pub fn ln_gamma(x: &BigReal, prec: u32) -> Result<BigReal> {
    check_pole(x)?;
    let wp = prec + GAMMA_GUARD_BITS;
    let x = x.with_prec(wp.max(x.prec()));
    if x.to_f64() >= 0.5 {
        return Ok(ln_gamma_positive(&x, wp).with_prec(prec));
    }
    // reflection: Γ(x)Γ(1-x) = π / sin(πx)
    let pi = BigReal::pi(wp);
    let s = (&pi * &x).sin().abs();
    let one_minus = &BigReal::from_i64(1, wp) - &x;
    let r = &(&pi.ln() - &s.ln()) - &ln_gamma_positive(&one_minus, wp);
    Ok(r.with_prec(prec))
}

pub fn gamma(x: &BigReal, prec: u32) -> Result<BigReal> {
    check_pole(x)?;
    let wp = prec + GAMMA_GUARD_BITS;
    let x = x.with_prec(wp.max(x.prec()));
    if x.to_f64() >= 0.5 {
        return Ok(ln_gamma_positive(&x, wp).exp().with_prec(prec));
    }
    let pi = BigReal::pi(wp);
    let s = (&pi * &x).sin();
    let one_minus = &BigReal::from_i64(1, wp) - &x;
    let g = ln_gamma_positive(&one_minus, wp).exp();
    Ok((&pi / &(&s * &g)).with_prec(prec))
}

pub fn beta(a: &BigReal, b: &BigReal, prec: u32) -> Result<BigReal> {
    let wp = prec + 16;
    let ab = a + b;
    let r = (&(&ln_gamma(a, wp)? + &ln_gamma(b, wp)?) - &ln_gamma(&ab, wp)?).exp();
    let sign = gamma_sign(a) * gamma_sign(b) * gamma_sign(&ab);
    Ok((r * sign).with_prec(prec))
}

fn gamma_sign(x: &BigReal) -> i64 {
    let f = x.to_f64();
    if f > 0.0 {
        1
    } else if (f.floor() as i64) % 2 == 0 {
        1
    } else {
        -1
    }
}
