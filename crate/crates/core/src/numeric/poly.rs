//! Dense univariate polynomials with rational coefficients.

use std::fmt;

use num_complex::Complex64;
use rug::{Integer, Rational};

/// Σ coeffs[i] x^i, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| *c == 0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rational::new());
        }
        RatPoly { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        RatPoly::new(vec![c])
    }

    /// x - r
    pub fn root_factor(r: Rational) -> Self {
        RatPoly::new(vec![-r, Rational::from(1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0
    }

    pub fn leading(&self) -> &Rational {
        &self.coeffs[self.coeffs.len() - 1]
    }

    pub fn add(&self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RatPoly::new((0..n).map(|i| self.get(i) + o.get(i)).collect())
    }

    pub fn sub(&self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RatPoly::new((0..n).map(|i| self.get(i) - o.get(i)).collect())
    }

    pub fn mul(&self, o: &RatPoly) -> RatPoly {
        let mut out = vec![Rational::new(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        RatPoly::new(out)
    }

    pub fn scale(&self, c: &Rational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|a| Rational::from(a * c)).collect())
    }

    pub fn monic(&self) -> RatPoly {
        let l = self.leading().clone();
        self.scale(&l.recip())
    }

    fn get(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// (quotient, remainder)
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero());
        let mut r = self.coeffs.clone();
        let dn = d.degree();
        if self.degree() < dn {
            return (RatPoly::constant(Rational::new()), self.clone());
        }
        let mut q = vec![Rational::new(); self.degree() - dn + 1];
        for i in (0..q.len()).rev() {
            let c = Rational::from(&r[i + dn] / d.leading());
            for j in 0..=dn {
                r[i + j] -= Rational::from(&c * &d.coeffs[j]);
            }
            q[i] = c;
        }
        r.truncate(dn.max(1));
        (RatPoly::new(q), RatPoly::new(r))
    }

    /// Positive integer roots, ascending.
    pub fn positive_integer_roots(&self) -> Vec<u64> {
        if self.is_zero() {
            return Vec::new();
        }
        // clear denominators, strip x^k factors
        let mut l = Integer::from(1);
        for c in &self.coeffs {
            l.lcm_mut(c.denom());
        }
        let ints: Vec<Integer> = self.coeffs.iter().map(|c| Rational::from(c * &l).into_numer_denom().0).collect();
        let first = ints.iter().position(|c| *c != 0).unwrap_or(0);
        let ints = &ints[first..];
        let eval = |r: &Integer| {
            let mut acc = Integer::new();
            for c in ints.iter().rev() {
                acc *= r;
                acc += c;
            }
            acc
        };
        let mut cands: Vec<Integer> = (1..=(64 * self.degree().max(1) as u64)).map(Integer::from).collect();
        cands.extend(divisors(&Integer::from(ints[0].abs_ref())));
        cands.sort();
        cands.dedup();
        cands
            .into_iter()
            .filter(|r| eval(r) == 0)
            .filter_map(|r| r.to_u64())
            .collect()
    }
}

impl RatPoly {
    /// All complex roots in double precision (Durand–Kerner).
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let n = self.degree();
        if n == 0 || self.is_zero() {
            return Vec::new();
        }
        let lead = self.leading().to_f64();
        let c: Vec<Complex64> = self.coeffs.iter().map(|x| Complex64::new(x.to_f64() / lead, 0.0)).collect();
        let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a);
        let bound = 1.0 + c[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
        let seed = Complex64::new(0.4, 0.9);
        let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * bound.min(100.0)).collect();
        for _ in 0..2000 {
            let mut moved = 0.0f64;
            for i in 0..n {
                let mut den = Complex64::new(1.0, 0.0);
                for j in 0..n {
                    if i != j {
                        den *= z[i] - z[j];
                    }
                }
                let step = eval(z[i]) / den;
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1.0));
            }
            if moved < 1e-15 {
                break;
            }
        }
        z.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        z
    }
}

fn divisors(n: &Integer) -> Vec<Integer> {
    if *n == 0 {
        return Vec::new();
    }
    let mut rest = n.clone();
    let mut primes: Vec<(Integer, u32)> = Vec::new();
    let mut p = 2u64;
    while p < 1_000_000 && Integer::from(p * p) <= rest {
        let mut e = 0;
        while rest.is_divisible_u(p as u32) {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            primes.push((Integer::from(p), e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        primes.push((rest, 1));
    }
    let mut out = vec![Integer::from(1)];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = Integer::from(1);
            for _ in 0..=e {
                next.push(Integer::from(d * &pk));
                pk *= &p;
            }
        }
        out = next;
    }
    out
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 && !(self.is_zero() && i == 0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}
