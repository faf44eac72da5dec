//! Coefficient rings used by the exact and floating paths of the mode solver.

use std::fmt::Debug;

use rug::Rational;

use super::bigreal::BigReal;

pub trait Ring: Clone + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn from_i64_like(&self, v: i64) -> Self;
    fn from_rational_like(&self, q: &Rational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn one_like(&self) -> Self {
        self.from_i64_like(1)
    }

    fn add_assign(&mut self, o: &Self) {
        *self = self.add(o);
    }

    /// self += a * b
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self = self.add(&a.mul(b));
    }

    fn mul_i64(&self, v: i64) -> Self {
        self.mul(&self.from_i64_like(v))
    }

    /// log2 of the largest component magnitude; -inf at zero.
    fn mag_log2(&self) -> f64;

    /// Working precision of floating components; None when exact.
    fn working_prec(&self) -> Option<u32> {
        None
    }

    /// Zero up to working precision, relative to 2^scale_log2.
    fn negligible_rel(&self, scale_log2: f64) -> bool {
        match self.working_prec() {
            None => self.is_zero(),
            Some(p) => self.mag_log2() < scale_log2.max(0.0) - 0.75 * p as f64,
        }
    }
}

pub trait Field: Ring + PartialEq {
    fn recip(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// log2 |x|; -inf at zero.
    fn log2_abs(&self) -> f64;

    fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    fn to_bigreal(&self, prec: u32) -> BigReal;

    /// Zero test relative to `scale`; exact fields compare exactly.
    fn negligible(&self, _scale: &Self) -> bool {
        self.is_zero()
    }
}

/// A ring carrying an F-linear structure (scalars act on it).
pub trait Module<F: Field>: Ring {
    fn scale(&self, f: &F) -> Self;
    fn embed(f: &F) -> Self;
}

impl Ring for Rational {
    fn mag_log2(&self) -> f64 {
        Field::log2_abs(self)
    }
    fn zero_like(&self) -> Self {
        Rational::new()
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Rational::from(v)
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        q.clone()
    }
    fn add(&self, o: &Self) -> Self {
        Rational::from(self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Rational::from(self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Rational::from(self * o)
    }
    fn neg(&self) -> Self {
        Rational::from(-self)
    }
    fn is_zero(&self) -> bool {
        *self.numer() == 0
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += Rational::from(a * b);
    }
}

impl Field for Rational {
    fn recip(&self) -> Self {
        self.clone().recip()
    }
    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
    fn log2_abs(&self) -> f64 {
        if Ring::is_zero(self) {
            return f64::NEG_INFINITY;
        }
        let n = self.numer().significant_bits() as f64;
        let d = self.denom().significant_bits() as f64;
        if n < 1000.0 && d < 1000.0 {
            Rational::to_f64(self).abs().log2()
        } else {
            BigReal::from_rational(self, 64).log2_abs()
        }
    }
    fn to_bigreal(&self, prec: u32) -> BigReal {
        BigReal::from_rational(self, prec)
    }
}

impl Module<Rational> for Rational {
    fn scale(&self, f: &Rational) -> Self {
        Ring::mul(self, f)
    }
    fn embed(f: &Rational) -> Self {
        f.clone()
    }
}

impl Ring for BigReal {
    fn mag_log2(&self) -> f64 {
        BigReal::log2_abs(self)
    }
    fn working_prec(&self) -> Option<u32> {
        Some(self.prec())
    }
    fn zero_like(&self) -> Self {
        BigReal::zero(self.prec())
    }
    fn from_i64_like(&self, v: i64) -> Self {
        BigReal::from_i64(v, self.prec())
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        BigReal::from_rational(q, self.prec())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        BigReal::is_zero(self)
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        self.add_mul_assign(a, b);
    }
    fn mul_i64(&self, v: i64) -> Self {
        BigReal::mul_i64(self, v)
    }
}

impl Field for BigReal {
    fn recip(&self) -> Self {
        BigReal::recip(self)
    }
    fn to_f64(&self) -> f64 {
        BigReal::to_f64(self)
    }
    fn log2_abs(&self) -> f64 {
        BigReal::log2_abs(self)
    }
    fn to_bigreal(&self, prec: u32) -> BigReal {
        self.with_prec(prec)
    }
    fn negligible(&self, scale: &Self) -> bool {
        if BigReal::is_zero(self) {
            return true;
        }
        let s = BigReal::log2_abs(scale).max(0.0);
        BigReal::log2_abs(self) < s - 0.75 * self.prec() as f64
    }
}

impl Module<BigReal> for BigReal {
    fn scale(&self, f: &BigReal) -> Self {
        self * f
    }
    fn embed(f: &BigReal) -> Self {
        f.clone()
    }
}

/// First-order dual number: value plus derivative with respect to one parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual<F> {
    pub v: F,
    pub d: F,
}

impl<F: Field> Dual<F> {
    pub fn new(v: F, d: F) -> Self {
        Dual { v, d }
    }

    pub fn constant(v: F) -> Self {
        let d = v.zero_like();
        Dual { v, d }
    }
}

impl<F: Field> Ring for Dual<F> {
    fn mag_log2(&self) -> f64 {
        self.v.mag_log2().max(self.d.mag_log2())
    }
    fn working_prec(&self) -> Option<u32> {
        self.v.working_prec()
    }
    fn zero_like(&self) -> Self {
        Dual::constant(self.v.zero_like())
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Dual::constant(self.v.from_i64_like(v))
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        Dual::constant(self.v.from_rational_like(q))
    }
    fn add(&self, o: &Self) -> Self {
        Dual::new(self.v.add(&o.v), self.d.add(&o.d))
    }
    fn sub(&self, o: &Self) -> Self {
        Dual::new(self.v.sub(&o.v), self.d.sub(&o.d))
    }
    fn mul(&self, o: &Self) -> Self {
        let mut d = self.v.mul(&o.d);
        d.add_mul(&self.d, &o.v);
        Dual::new(self.v.mul(&o.v), d)
    }
    fn neg(&self) -> Self {
        Dual::new(self.v.neg(), self.d.neg())
    }
    fn is_zero(&self) -> bool {
        self.v.is_zero() && self.d.is_zero()
    }
    fn add_assign(&mut self, o: &Self) {
        self.v.add_assign(&o.v);
        self.d.add_assign(&o.d);
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        self.v.add_mul(&a.v, &b.v);
        self.d.add_mul(&a.v, &b.d);
        self.d.add_mul(&a.d, &b.v);
    }
}

impl<F: Field> Module<F> for Dual<F> {
    fn scale(&self, f: &F) -> Self {
        Dual::new(self.v.mul(f), self.d.mul(f))
    }
    fn embed(f: &F) -> Self {
        Dual::constant(f.clone())
    }
}

/// Polynomial in one free parameter c, coefficients indexed by power of c.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoly<F> {
    pub coeffs: Vec<F>,
}

impl<F: Field> CPoly<F> {
    pub fn constant(v: F) -> Self {
        CPoly { coeffs: vec![v] }.trimmed()
    }

    /// a + b·c
    pub fn linear(a: F, b: F) -> Self {
        CPoly { coeffs: vec![a, b] }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn coeff(&self, i: usize) -> F {
        match self.coeffs.get(i) {
            Some(c) => c.clone(),
            None => self.coeffs[0].zero_like(),
        }
    }

    pub fn degree(&self) -> usize {
        if self.coeffs.len() == 1 && self.coeffs[0].is_zero() {
            0
        } else {
            self.coeffs.len() - 1
        }
    }

    pub fn eval(&self, c: &F) -> F {
        let mut acc = self.coeffs[self.coeffs.len() - 1].clone();
        for k in (0..self.coeffs.len() - 1).rev() {
            acc = acc.mul(c).add(&self.coeffs[k]);
        }
        acc
    }
}

impl<F: Field> Ring for CPoly<F> {
    fn mag_log2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.mag_log2()).fold(f64::NEG_INFINITY, f64::max)
    }
    fn working_prec(&self) -> Option<u32> {
        self.coeffs[0].working_prec()
    }
    fn zero_like(&self) -> Self {
        CPoly::constant(self.coeffs[0].zero_like())
    }
    fn from_i64_like(&self, v: i64) -> Self {
        CPoly::constant(self.coeffs[0].from_i64_like(v))
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        CPoly::constant(self.coeffs[0].from_rational_like(q))
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        CPoly { coeffs: (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect() }.trimmed()
    }
    fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        CPoly { coeffs: (0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect() }.trimmed()
    }
    fn mul(&self, o: &Self) -> Self {
        let z = self.coeffs[0].zero_like();
        let mut out = vec![z; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j].add_mul(a, b);
            }
        }
        CPoly { coeffs: out }.trimmed()
    }
    fn neg(&self) -> Self {
        CPoly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl<F: Field> Module<F> for CPoly<F> {
    fn scale(&self, f: &F) -> Self {
        CPoly { coeffs: self.coeffs.iter().map(|c| c.mul(f)).collect() }.trimmed()
    }
    fn embed(f: &F) -> Self {
        CPoly::constant(f.clone())
    }
}
