//! Truncated Puiseux series on an arithmetic grid of exponents.

use std::fmt;

use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Σ_{i < order} coeffs[i] · x^(base + i·step).
#[derive(Clone, Debug, PartialEq)]
pub struct FormalSeries {
    pub base: Rational,
    pub step: Rational,
    coeffs: Vec<Rational>,
}

impl FormalSeries {
    pub fn new(base: Rational, step: Rational, coeffs: Vec<Rational>) -> Self {
        assert!(step != 0 || coeffs.len() <= 1, "zero step");
        FormalSeries { base, step, coeffs }
    }

    /// Power series Σ c_i x^i.
    pub fn power_series(coeffs: Vec<Rational>) -> Self {
        FormalSeries::new(Rational::new(), Rational::from(1), coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of x^(base + i·step); None beyond the truncation order.
    pub fn coeff(&self, i: usize) -> Option<&Rational> {
        self.coeffs.get(i)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn exponent(&self, i: usize) -> Rational {
        Rational::from(&self.base + Rational::from(&self.step * i as u64))
    }

    /// Nonzero terms as (exponent, coefficient).
    pub fn terms(&self) -> Vec<(Rational, Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (self.exponent(i), c.clone()))
            .collect()
    }

    pub fn truncate(mut self, order: usize) -> Self {
        self.coeffs.truncate(order);
        self
    }

    fn leading(&self) -> Result<&Rational> {
        match self.coeffs.first() {
            Some(c) if *c != 0 => Ok(c),
            _ => Err(Error::Domain("series has zero leading coefficient".into())),
        }
    }

    /// self^e, for exponents where c0^e is rational.
    pub fn pow(&self, e: &Rational) -> Result<FormalSeries> {
        let c0 = self.leading()?.clone();
        let lead = rational_pow(&c0, e)
            .ok_or_else(|| Error::Domain(format!("{c0}^({e}) is not rational")))?;
        let f: Vec<Rational> = self.coeffs.iter().map(|c| Rational::from(c / &c0)).collect();
        let g = unit_series_pow(&f, e, self.coeffs.len());
        Ok(FormalSeries {
            base: Rational::from(&self.base * e),
            step: self.step.clone(),
            coeffs: g.into_iter().map(|c| c * &lead).collect(),
        })
    }
}

impl fmt::Display for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})x^({e})")?;
        }
        write!(f, " + O(x^({}))", self.exponent(self.coeffs.len()))
    }
}

/// Exact q^e when it exists.
pub fn rational_pow(q: &Rational, e: &Rational) -> Option<Rational> {
    if *q == 1 {
        return Some(Rational::from(1));
    }
    let num = e.numer().to_i32()?;
    let den = e.denom().to_u32()?;
    let root = |z: &Integer| -> Option<Integer> {
        if den == 1 {
            return Some(z.clone());
        }
        if *z < 0 && den % 2 == 0 {
            return None;
        }
        let r = z.clone().root(den);
        if Integer::from(rug::ops::Pow::pow(&r, den)) == *z {
            Some(r)
        } else {
            None
        }
    };
    let base = Rational::from((root(q.numer())?, root(q.denom())?));
    if num >= 0 {
        Some(base.pow_int(num as u32))
    } else {
        Some(base.recip().pow_int((-num) as u32))
    }
}

trait PowInt {
    fn pow_int(self, n: u32) -> Rational;
}

impl PowInt for Rational {
    fn pow_int(self, n: u32) -> Rational {
        let mut acc = Rational::from(1);
        for _ in 0..n {
            acc *= &self;
        }
        acc
    }
}

/// (Σ f_k s^k)^e with f_0 = 1, through `n` coefficients.
pub fn unit_series_pow(f: &[Rational], e: &Rational, n: usize) -> Vec<Rational> {
    let mut g = vec![Rational::from(1)];
    let e1 = Rational::from(e + 1);
    for k in 1..n {
        let mut acc = Rational::new();
        for j in 1..=k.min(f.len().saturating_sub(1)) {
            let w = Rational::from(&e1 * j as u64) - k as u64;
            acc += w * Rational::from(&f[j] * &g[k - j]);
        }
        g.push(acc / k as u64);
    }
    g
}

fn mul_trunc(a: &[Rational], b: &[Rational], n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::new(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += Rational::from(x * y);
        }
    }
    out
}

/// Lagrange inversion of t = s·h(s), h(0) = 1: returns s = Σ_{n≥1} a_n t^n as coefficients of t^1..t^n.
fn invert_unit(h: &[Rational], n: usize) -> Vec<Rational> {
    let hinv = unit_series_pow(h, &Rational::from(-1), n);
    let mut out = Vec::with_capacity(n);
    let mut pw = vec![Rational::from(1)];
    for m in 1..=n {
        pw = mul_trunc(&pw, &hinv, n);
        // [s^(m-1)] h^(-m) / m
        let c = pw.get(m - 1).cloned().unwrap_or_default();
        out.push(c / m as u64);
    }
    out
}

/// Given y = s(x), return x as a series in y through the same number of terms.
pub fn revert_series(s: &FormalSeries) -> Result<FormalSeries> {
    let c0 = s.leading()?.clone();
    let p = s.base.clone();
    let q = s.step.clone();
    if p == 0 {
        return Err(Error::Domain("leading exponent 0 cannot be inverted".into()));
    }
    let n = s.order();
    // y/c0 = x^p (1 + g(x^q)); t := (y/c0)^(q/p) = u (1+g(u))^(q/p), u = x^q
    let f: Vec<Rational> = s.coeffs.iter().map(|c| Rational::from(c / &c0)).collect();
    let qp = Rational::from(&q / &p);
    let h = unit_series_pow(&f, &qp, n);
    let u = invert_unit(&h, n);
    // x = u^(1/q) = t^(1/q) (u/t)^(1/q)
    let ratio: Vec<Rational> = u.clone();
    let inv_q = Rational::from(q.recip_ref());
    let e = unit_series_pow(&ratio, &inv_q, n);
    // x = Σ_m e_m (y/c0)^((1+mq)/p)
    let mut coeffs = Vec::with_capacity(n);
    for (m, em) in e.iter().enumerate() {
        let expo = Rational::from(&Rational::from(&q * m as u64) + 1) / &p;
        let scale = rational_pow(&c0, &Rational::from(-&expo))
            .ok_or_else(|| Error::Domain(format!("{c0}^({expo}) is not rational")))?;
        coeffs.push(Rational::from(em * &scale));
    }
    Ok(FormalSeries { base: p.recip(), step: qp, coeffs })
}

fn rational_gcd(a: &Rational, b: &Rational) -> Rational {
    let num = Integer::from(a.numer() * b.denom()).gcd(&Integer::from(b.numer() * a.denom()));
    Rational::from((num, Integer::from(a.denom() * b.denom())))
}

/// outer(inner(x)), truncated to `order` grid terms.
pub fn compose(outer: &FormalSeries, inner: &FormalSeries, order: usize) -> Result<FormalSeries> {
    let b = inner.base.clone();
    let s = inner.step.clone();
    let base = Rational::from(&b * &outer.base);
    let mut step = s.clone().abs();
    let os = Rational::from(&b * &outer.step);
    if os != 0 {
        step = rational_gcd(&step, &os.abs());
    }
    if step == 0 {
        step = Rational::from(1);
    }
    let step = if s > 0 { step } else { -step };
    let mut out = vec![Rational::new(); order];
    for (j, d) in outer.coeffs.iter().enumerate() {
        if *d == 0 {
            continue;
        }
        let e = outer.exponent(j);
        let pw = inner.pow(&e)?;
        for (i, c) in pw.coeffs.iter().enumerate() {
            let ex = pw.exponent(i);
            let off = Rational::from(&ex - &base) / &step;
            if *off.denom() != 1 || off < 0 {
                return Err(Error::Domain("composition exponents leave the grid".into()));
            }
            let idx = off.numer().to_usize().unwrap_or(usize::MAX);
            if idx < order {
                out[idx] += Rational::from(d * c);
            }
        }
    }
    Ok(FormalSeries { base, step, coeffs: out })
}
