use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

/// Arbitrary-precision real. Binary operations run at the larger of the two precisions.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct BigReal(Float);

impl BigReal {
    pub fn zero(prec: u32) -> Self {
        BigReal(Float::new(prec))
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        BigReal(Float::with_val(prec, v))
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        BigReal(Float::with_val(prec, v))
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        BigReal(Float::with_val(prec, q))
    }

    pub fn from_float(f: Float) -> Self {
        BigReal(f)
    }

    pub fn parse(s: &str, prec: u32) -> Option<Self> {
        Float::parse(s.trim()).ok().map(|p| BigReal(Float::with_val(prec, p)))
    }

    pub fn pi(prec: u32) -> Self {
        BigReal(Float::with_val(prec, Constant::Pi))
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigReal(Float::with_val(prec, &self.0))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    pub fn abs(&self) -> Self {
        BigReal(self.0.clone().abs())
    }

    pub fn sqrt(&self) -> Self {
        BigReal(self.0.clone().sqrt())
    }

    pub fn ln(&self) -> Self {
        BigReal(self.0.clone().ln())
    }

    pub fn exp(&self) -> Self {
        BigReal(self.0.clone().exp())
    }

    pub fn sin(&self) -> Self {
        BigReal(self.0.clone().sin())
    }

    pub fn tanh(&self) -> Self {
        BigReal(self.0.clone().tanh())
    }

    pub fn cosh(&self) -> Self {
        BigReal(self.0.clone().cosh())
    }

    pub fn sinh(&self) -> Self {
        BigReal(self.0.clone().sinh())
    }

    pub fn floor(&self) -> Self {
        BigReal(self.0.clone().floor())
    }

    pub fn recip(&self) -> Self {
        BigReal(self.0.clone().recip())
    }

    pub fn powi(&self, n: i32) -> Self {
        BigReal(self.0.clone().pow(n))
    }

    pub fn powf(&self, e: &BigReal) -> Self {
        let p = self.prec().max(e.prec());
        BigReal(Float::with_val(p, (&self.0).pow(&e.0)))
    }

    pub fn pow_rational(&self, q: &Rational) -> Self {
        let e = Float::with_val(self.prec(), q);
        BigReal(self.0.clone().pow(&e))
    }

    /// Base-2 exponent, or None for zero.
    pub fn exponent(&self) -> Option<i32> {
        self.0.get_exp()
    }

    /// log2 of |x|, with -inf for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (m, e) = self.0.to_f64_exp();
        m.abs().log2() + e as f64
    }

    pub fn to_integer_i64(&self) -> Option<i64> {
        self.0.to_integer().and_then(|i| i.to_i64())
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.0.to_rational()
    }

    pub fn max(&self, o: &Self) -> Self {
        if self >= o {
            self.clone()
        } else {
            o.clone()
        }
    }

    pub fn min(&self, o: &Self) -> Self {
        if self <= o {
            self.clone()
        } else {
            o.clone()
        }
    }

    /// Significant decimal digits string.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".into();
        }
        self.0.to_string_radix(10, Some(digits.max(1)))
    }

    /// Number of decimal digits two values share, measured by relative difference.
    pub fn agreement_digits(&self, other: &Self) -> f64 {
        let diff = (self - other).abs();
        if diff.is_zero() {
            return self.prec() as f64 * std::f64::consts::LOG10_2;
        }
        let scale = self.abs().max(&other.abs());
        (scale.log2_abs() - diff.log2_abs()) * std::f64::consts::LOG10_2
    }

    pub fn add_mul_assign(&mut self, a: &BigReal, b: &BigReal) {
        let p = a.prec().max(b.prec());
        if p > self.prec() {
            self.0.set_prec(p);
        }
        self.0 += &a.0 * &b.0;
    }

    pub fn sub_mul_assign(&mut self, a: &BigReal, b: &BigReal) {
        let p = a.prec().max(b.prec());
        if p > self.prec() {
            self.0.set_prec(p);
        }
        self.0 -= &a.0 * &b.0;
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        BigReal(Float::with_val(self.prec(), &self.0 * q))
    }

    pub fn mul_i64(&self, v: i64) -> Self {
        BigReal(Float::with_val(self.prec(), &self.0 * v))
    }

    pub fn div_i64(&self, v: i64) -> Self {
        BigReal(Float::with_val(self.prec(), &self.0 / v))
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(30))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or((self.prec() as f64 * std::f64::consts::LOG10_2) as usize);
        write!(f, "{}", self.to_decimal(digits))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl<'a, 'b> $tr<&'b BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $m(self, o: &'b BigReal) -> BigReal {
                let p = self.prec().max(o.prec());
                BigReal(Float::with_val(p, (&self.0).$m(&o.0)))
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, o: BigReal) -> BigReal {
                (&self).$m(&o)
            }
        }
        impl<'b> $tr<&'b BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, o: &'b BigReal) -> BigReal {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $m(self, o: BigReal) -> BigReal {
                self.$m(&o)
            }
        }
        impl $tr<i64> for &BigReal {
            type Output = BigReal;
            fn $m(self, o: i64) -> BigReal {
                BigReal(Float::with_val(self.prec(), (&self.0).$m(o)))
            }
        }
        impl $tr<i64> for BigReal {
            type Output = BigReal;
            fn $m(self, o: i64) -> BigReal {
                (&self).$m(o)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0.clone())
    }
}

impl AddAssign<&BigReal> for BigReal {
    fn add_assign(&mut self, o: &BigReal) {
        if o.prec() > self.prec() {
            self.0.set_prec(o.prec());
        }
        self.0 += &o.0;
    }
}

impl SubAssign<&BigReal> for BigReal {
    fn sub_assign(&mut self, o: &BigReal) {
        if o.prec() > self.prec() {
            self.0.set_prec(o.prec());
        }
        self.0 -= &o.0;
    }
}

impl PartialEq<i64> for BigReal {
    fn eq(&self, o: &i64) -> bool {
        self.0 == *o
    }
}

impl PartialOrd<i64> for BigReal {
    fn partial_cmp(&self, o: &i64) -> Option<Ordering> {
        self.0.partial_cmp(o)
    }
}
