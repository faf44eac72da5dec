use super::scalar::{Field, Module, Ring};

/// Polynomial in τ = log Z; `coeffs[s]` multiplies τ^s.
#[derive(Clone, Debug, PartialEq)]
pub struct TauPoly<R> {
    pub coeffs: Vec<R>,
}

impl<R: Ring> TauPoly<R> {
    pub fn zero(like: &R) -> Self {
        TauPoly { coeffs: vec![like.zero_like()] }
    }

    pub fn constant(c: R) -> Self {
        TauPoly { coeffs: vec![c] }
    }

    pub fn from_coeffs(coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty());
        let mut p = TauPoly { coeffs };
        p.trim();
        p
    }

    pub fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn coeff(&self, s: usize) -> R {
        match self.coeffs.get(s) {
            Some(c) => c.clone(),
            None => self.coeffs[0].zero_like(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(o);
        out
    }

    pub fn add_assign(&mut self, o: &Self) {
        if o.coeffs.len() > self.coeffs.len() {
            let z = self.coeffs[0].zero_like();
            self.coeffs.resize(o.coeffs.len(), z);
        }
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            a.add_assign(b);
        }
        self.trim();
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        TauPoly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = TauPoly {
            coeffs: vec![self.coeffs[0].zero_like(); self.coeffs.len() + o.coeffs.len() - 1],
        };
        out.add_mul(self, o);
        out
    }

    /// self += a * b
    pub fn add_mul(&mut self, a: &Self, b: &Self) {
        let n = a.coeffs.len() + b.coeffs.len() - 1;
        if n > self.coeffs.len() {
            let z = self.coeffs[0].zero_like();
            self.coeffs.resize(n, z);
        }
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                self.coeffs[i + j].add_mul(x, y);
            }
        }
    }

    /// d/dτ
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return TauPoly::zero(&self.coeffs[0]);
        }
        TauPoly {
            coeffs: (1..self.coeffs.len()).map(|s| self.coeffs[s].mul_i64(s as i64)).collect(),
        }
    }

    /// (c + D) applied to self, D = d/dτ.
    pub fn shift_op(&self, c: &R) -> Self {
        let mut out = self.clone();
        for s in 0..self.coeffs.len() {
            out.coeffs[s] = self.coeffs[s].mul(c);
            if s + 1 < self.coeffs.len() {
                out.coeffs[s].add_assign(&self.coeffs[s + 1].mul_i64((s + 1) as i64));
            }
        }
        out.trim();
        out
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> TauPoly<S> {
        TauPoly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    pub fn eval(&self, tau: &R) -> R {
        let mut acc = self.coeffs[self.coeffs.len() - 1].clone();
        for s in (0..self.coeffs.len() - 1).rev() {
            acc = acc.mul(tau).add(&self.coeffs[s]);
        }
        acc
    }

    pub fn scale<F: Field>(&self, f: &F) -> Self
    where
        R: Module<F>,
    {
        TauPoly { coeffs: self.coeffs.iter().map(|c| c.scale(f)).collect() }
    }

    /// Evaluate the polynomial at a field point, with coefficients in R.
    pub fn eval_at<F: Field>(&self, tau: &F) -> R
    where
        R: Module<F>,
    {
        let mut acc = self.coeffs[self.coeffs.len() - 1].clone();
        for s in (0..self.coeffs.len() - 1).rev() {
            acc = acc.scale(tau).add(&self.coeffs[s]);
        }
        acc
    }
}

impl<R: Ring> Ring for TauPoly<R> {
    fn zero_like(&self) -> Self {
        TauPoly::zero(&self.coeffs[0])
    }
    fn from_i64_like(&self, v: i64) -> Self {
        TauPoly::constant(self.coeffs[0].from_i64_like(v))
    }
    fn from_rational_like(&self, q: &rug::Rational) -> Self {
        TauPoly::constant(self.coeffs[0].from_rational_like(q))
    }
    fn add(&self, o: &Self) -> Self {
        TauPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        TauPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        TauPoly::mul(self, o)
    }
    fn neg(&self) -> Self {
        TauPoly::neg(self)
    }
    fn is_zero(&self) -> bool {
        TauPoly::is_zero(self)
    }
    fn add_assign(&mut self, o: &Self) {
        TauPoly::add_assign(self, o)
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        TauPoly::add_mul(self, a, b)
    }
    fn mag_log2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.mag_log2()).fold(f64::NEG_INFINITY, f64::max)
    }
    fn working_prec(&self) -> Option<u32> {
        self.coeffs[0].working_prec()
    }
}
