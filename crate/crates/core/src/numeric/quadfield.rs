//! Exact arithmetic in Q(v) with v² = p + q·v.

use std::fmt;

use rug::Rational;

use super::bigreal::BigReal;
use super::scalar::{Field, Module, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct QuadField {
    pub p: Rational,
    pub q: Rational,
}

impl QuadField {
    pub fn new(p: Rational, q: Rational) -> Self {
        QuadField { p, q }
    }

    /// The positive root (q + √(q²+4p))/2.
    pub fn generator_value(&self, prec: u32) -> BigReal {
        let q = BigReal::from_rational(&self.q, prec);
        let disc = &q * &q + BigReal::from_rational(&self.p, prec) * 4;
        (q + disc.sqrt()) / 2
    }
}

/// a + b·v
#[derive(Clone, Debug, PartialEq)]
pub struct QNum {
    pub a: Rational,
    pub b: Rational,
    pub field: QuadField,
}

impl QNum {
    pub fn new(a: Rational, b: Rational, field: &QuadField) -> Self {
        QNum { a, b, field: field.clone() }
    }

    pub fn generator(field: &QuadField) -> Self {
        QNum::new(Rational::new(), Rational::from(1), field)
    }

    pub fn rational(a: Rational, field: &QuadField) -> Self {
        QNum::new(a, Rational::new(), field)
    }
}

impl fmt::Display for QNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*v", self.a, self.b)
        }
    }
}

impl Ring for QNum {
    fn mag_log2(&self) -> f64 {
        Field::log2_abs(self)
    }
    fn zero_like(&self) -> Self {
        QNum::rational(Rational::new(), &self.field)
    }
    fn from_i64_like(&self, v: i64) -> Self {
        QNum::rational(Rational::from(v), &self.field)
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        QNum::rational(q.clone(), &self.field)
    }
    fn add(&self, o: &Self) -> Self {
        QNum::new(Rational::from(&self.a + &o.a), Rational::from(&self.b + &o.b), &self.field)
    }
    fn sub(&self, o: &Self) -> Self {
        QNum::new(Rational::from(&self.a - &o.a), Rational::from(&self.b - &o.b), &self.field)
    }
    fn mul(&self, o: &Self) -> Self {
        let bb = Rational::from(&self.b * &o.b);
        let a = Rational::from(&self.a * &o.a) + Rational::from(&bb * &self.field.p);
        let b = Rational::from(&self.a * &o.b)
            + Rational::from(&self.b * &o.a)
            + Rational::from(&bb * &self.field.q);
        QNum::new(a, b, &self.field)
    }
    fn neg(&self) -> Self {
        QNum::new(Rational::from(-&self.a), Rational::from(-&self.b), &self.field)
    }
    fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

impl Field for QNum {
    fn recip(&self) -> Self {
        // (a + b v)(a + b q - b v) = a² + abq - b²p
        let (a, b) = (&self.a, &self.b);
        let (p, q) = (&self.field.p, &self.field.q);
        let norm = Rational::from(a * a) + Rational::from(a * b) * q - Rational::from(b * b) * p;
        let na = (Rational::from(a + Rational::from(b * q))) / &norm;
        let nb = Rational::from(-b) / &norm;
        QNum::new(na, nb, &self.field)
    }
    fn to_f64(&self) -> f64 {
        self.to_bigreal(64).to_f64()
    }
    fn log2_abs(&self) -> f64 {
        self.to_bigreal(128).log2_abs()
    }
    fn to_bigreal(&self, prec: u32) -> BigReal {
        let v = self.field.generator_value(prec + 32);
        (BigReal::from_rational(&self.a, prec + 32) + v * BigReal::from_rational(&self.b, prec + 32))
            .with_prec(prec)
    }
}

impl Module<QNum> for QNum {
    fn scale(&self, f: &QNum) -> Self {
        self.mul(f)
    }
    fn embed(f: &QNum) -> Self {
        f.clone()
    }
}
