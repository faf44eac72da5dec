//! Tanh-sinh quadrature with level doubling.

use super::bigreal::BigReal;
use crate::error::{Error, Result};

/// Quadrature node. `from_lower` is x - a computed without cancellation.
#[derive(Clone, Debug)]
pub struct Node {
    pub x: BigReal,
    pub from_lower: BigReal,
    pub to_upper: Option<BigReal>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Upper<'a> {
    Finite(&'a BigReal),
    Infinity,
}

const MAX_LEVEL: u32 = 14;

/// ∫_a^b f over a finite interval; f receives nodes with accurate endpoint distances.
fn tanh_sinh<F>(f: &F, a: &BigReal, b: &BigReal, wp: u32, tol_bits: u32) -> Result<BigReal>
where
    F: Fn(&Node) -> BigReal + Sync,
{
    let width = b - a;
    let half_pi = BigReal::pi(wp) / 2;
    let cutoff = -(wp as f64) - 20.0;

    let eval = |t: &BigReal| -> Option<BigReal> {
        let u = &half_pi * &t.sinh();
        let e2 = (&u * 2).exp();
        let one = BigReal::from_i64(1, wp);
        let from_a = &width / &(&one + &e2.recip());
        let to_b = &width / &(&one + &e2);
        if from_a.is_zero() || to_b.is_zero() {
            return None;
        }
        let ch = u.cosh();
        let w = &(&(&width / 2) * &(&half_pi * &t.cosh())) / &(&ch * &ch);
        if w.log2_abs() < cutoff - 200.0 {
            return None;
        }
        let x = if t.is_sign_negative() { a + &from_a } else { b - &to_b };
        let node = Node { x, from_lower: from_a, to_upper: Some(to_b) };
        let fx = f(&node);
        Some(&w * &fx)
    };

    // sum over t = k h until terms vanish, on both sides
    let side_sum = |h: &BigReal, odd_only: bool, sign: i64| -> BigReal {
        let mut acc = BigReal::zero(wp);
        let mut k: i64 = 1;
        let mut small_run = 0;
        loop {
            if !odd_only || k % 2 == 1 {
                let t = h * (k * sign);
                match eval(&t) {
                    None => break,
                    Some(term) => {
                        if term.log2_abs() < cutoff + acc.log2_abs().max(-1e6) {
                            small_run += 1;
                            if small_run > 3 {
                                break;
                            }
                        } else {
                            small_run = 0;
                        }
                        acc += &term;
                    }
                }
            }
            k += 1;
            if k > 1 << 22 {
                break;
            }
        }
        acc
    };

    let mut h = BigReal::from_f64(0.5, wp);
    let zero = BigReal::zero(wp);
    let mut raw = eval(&zero).unwrap_or_else(|| BigReal::zero(wp));
    raw += &side_sum(&h, false, 1);
    raw += &side_sum(&h, false, -1);
    let mut prev = &raw * &h;
    for _level in 1..=MAX_LEVEL {
        h = &h / 2;
        raw += &side_sum(&h, true, 1);
        raw += &side_sum(&h, true, -1);
        let cur = &raw * &h;
        let diff = (&cur - &prev).abs();
        let scale = cur.abs().log2_abs().max(0.0);
        if diff.is_zero() || diff.log2_abs() < scale - tol_bits as f64 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Precision(format!(
        "tanh-sinh level doubling did not settle by level {MAX_LEVEL}; last estimate {}",
        prev.to_decimal(25)
    )))
}

/// ∫_a^b f(x) dx to about `prec` bits. Infinite upper limits are folded with x -> 1/x.
pub fn integrate<F>(f: F, a: &BigReal, b: Upper<'_>, prec: u32) -> Result<BigReal>
where
    F: Fn(&Node) -> BigReal + Sync,
{
    let wp = prec + 32;
    let tol = prec;
    let a = a.with_prec(wp);
    match b {
        Upper::Finite(b) => {
            let r = tanh_sinh(&f, &a, &b.with_prec(wp), wp, tol)?;
            Ok(r.with_prec(prec))
        }
        Upper::Infinity => {
            let one = BigReal::from_i64(1, wp);
            let split = if a.to_f64() < 1.0 { one.clone() } else { &a + 1 };
            let near = tanh_sinh(&f, &a, &split, wp, tol)?;
            let a_ref = a.clone();
            let g = |node: &Node| -> BigReal {
                let x = node.x.recip();
                let inner = Node { from_lower: &x - &a_ref, x: x.clone(), to_upper: None };
                &f(&inner) * &(&x * &x)
            };
            let zero = BigReal::zero(wp);
            let far = tanh_sinh(&g, &zero, &split.recip(), wp, tol)?;
            Ok((&near + &far).with_prec(prec))
        }
    }
}
