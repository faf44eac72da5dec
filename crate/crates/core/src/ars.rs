//! ARS analysis: resonance polynomial, integer resonances and the
//! compatibility check at the least positive resonance.

use std::fmt;

use num_complex::Complex64;
use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::numeric::{factorial, BigReal, Field, Module, QNum, RatPoly, Ring};
use crate::ode_models::{
    exact_model, model_for, monic_resonance, partition_d2_omega1_exact, quadtree_exact, OdeModel,
};
use crate::psi_engine::solve_modes;
use crate::recurrences::Family;

#[derive(Clone, Debug)]
pub struct ResonanceReport {
    pub family: String,
    /// Monic Φ(r).
    pub polynomial: RatPoly,
    /// Sorted positive integer roots.
    pub integer_resonances: Vec<u64>,
    pub minus_one_is_root: bool,
    /// Non-real roots, one per conjugate pair (Im > 0).
    pub complex_roots: Vec<Complex64>,
}

impl ResonanceReport {
    fn from_poly(family: String, polynomial: RatPoly) -> Self {
        let mut integer_resonances = polynomial.positive_integer_roots();
        integer_resonances.sort_unstable();
        let minus_one_is_root = polynomial.eval(&Rational::from(-1)) == 0;
        let complex_roots = polynomial.complex_roots().into_iter().filter(|z| z.im > 1e-9).collect();
        ResonanceReport { family, polynomial, integer_resonances, minus_one_is_root, complex_roots }
    }

    /// Complex resonances with positive real part. Their terms Z^{r−α} are
    /// not part of the integer-power psi-series.
    pub fn oscillatory(&self) -> Vec<Complex64> {
        self.complex_roots.iter().copied().filter(|z| z.re > 0.0).collect()
    }

    pub fn least(&self) -> Option<u64> {
        self.integer_resonances.first().copied()
    }
}

pub fn resonance_polynomial(family: &Family) -> Result<ResonanceReport> {
    let p = monic_resonance(family)?;
    Ok(ResonanceReport::from_poly(family.name(), p))
}

/// Π_{0≤j<d(m−1)} (d − r + j) − m(dm−1)!/(d−1)!  (d trees of the m-ary kind).
pub fn d_of_m_polynomial(d: u32, m: u32) -> RatPoly {
    let mut p = RatPoly::constant(Rational::from(1));
    for j in 0..d * (m - 1) {
        // (d + j − r)
        p = p.mul(&RatPoly::new(vec![Rational::from(d + j), Rational::from(-1)]));
    }
    let c = Rational::from(factorial(d as u64 * m as u64 - 1) * m) / Rational::from(factorial(d as u64 - 1));
    p.sub(&RatPoly::constant(c)).monic()
}

pub fn d_of_m_resonances(d: u32, m: u32) -> Result<ResonanceReport> {
    if d < 2 || m < 2 {
        return Err(Error::Domain(format!("need d, m >= 2, got d={d}, m={m}")));
    }
    Ok(ResonanceReport::from_poly(format!("d-of-m(d={d},m={m})"), d_of_m_polynomial(d, m)))
}

/// A coefficient kept in the smallest field the family lives in.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Rational(Rational),
    Quadratic(QNum),
    Real(BigReal),
}

impl Value {
    pub fn is_zero(&self) -> bool {
        match self {
            Value::Rational(q) => *q == 0,
            Value::Quadratic(q) => q.is_zero(),
            Value::Real(x) => x.is_zero(),
        }
    }

    pub fn to_bigreal(&self, prec: u32) -> BigReal {
        match self {
            Value::Rational(q) => BigReal::from_rational(q, prec),
            Value::Quadratic(q) => q.to_bigreal(prec),
            Value::Real(x) => x.with_prec(prec),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Value::Rational(q) => Some(q),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rational(q) => write!(f, "{q}"),
            Value::Quadratic(q) => write!(f, "{q}"),
            Value::Real(x) => write!(f, "{}", x.to_decimal(30)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Compatible,
    Incompatible,
}

#[derive(Clone, Debug)]
pub struct CompatibilityReport {
    pub family: String,
    pub resonance: usize,
    pub verdict: Verdict,
    /// Matching residual at r in the ρ-free normalization W = ρ^σ G.
    pub residual: Value,
    /// c_0..c_{r−1}, same normalization.
    pub coefficients: Vec<Value>,
    /// Further roots of Φ met up to the requested index.
    pub shadowed: Vec<usize>,
    /// σ: raw coefficients are c_j ρ^{−σ}.
    pub sigma: Value,
    pub units: &'static str,
}

fn report<F: Field + Module<F>>(
    family: &Family,
    model: &OdeModel<F>,
    r: usize,
    wrap: impl Fn(&F) -> Value,
) -> Result<CompatibilityReport> {
    let zero = model.sigma.zero_like();
    let ps = solve_modes(model, &zero, r)?;
    let least = ps
        .resonance
        .ok_or_else(|| Error::Domain(format!("{}: no positive resonance up to {r}", family.name())))?;
    // W-units when w0 lies in the field, else Y-units (Y = W/w0)
    let (scale, units) = match model.w0_exact() {
        Some(w0) => (w0, "W"),
        None => (zero.one_like(), "Y"),
    };
    let coefficients = ps.modes[..least].iter().map(|m| wrap(&m.coeff(0).mul(&scale))).collect();
    let g = ps.resonance_residual.clone().map(|g| g.coeff(0)).unwrap_or_else(|| zero.clone());
    let residual = if units == "W" { g.mul(&model.w0_power) } else { g };
    let verdict = if ps.compatible == Some(true) { Verdict::Compatible } else { Verdict::Incompatible };
    Ok(CompatibilityReport {
        family: family.name(),
        resonance: least,
        verdict,
        residual: wrap(&residual),
        coefficients,
        shadowed: ps.shadowed.clone(),
        sigma: wrap(&model.sigma),
        units,
    })
}

/// Frobenius coefficients below the least resonance and the residual there.
/// `r` must be a positive integer root of Φ; roots above the least are
/// listed as shadowed.
pub fn frobenius_and_compatibility(family: &Family, r: usize) -> Result<CompatibilityReport> {
    let res = resonance_polynomial(family)?;
    if !res.integer_resonances.contains(&(r as u64)) {
        return Err(Error::Domain(format!("{}: r = {r} is not a resonance", family.name())));
    }
    if family.is_exact() {
        let m = exact_model(family)?;
        return report(family, &m, r, |x| Value::Rational(x.clone()));
    }
    match family {
        Family::QuadtreeMoments => report(family, &quadtree_exact()?, r, |x| Value::Quadratic(x.clone())),
        Family::Partition { d: 2, omega } if *omega == 1 => {
            report(family, &partition_d2_omega1_exact()?, r, |x| Value::Quadratic(x.clone()))
        }
        _ => report(family, &model_for(family, 256)?, r, |x| Value::Real(x.clone())),
    }
}

/// Laurent series Σ_i c[i] Z^{i+low}.
#[derive(Clone, Debug)]
struct Laurent {
    low: i64,
    c: Vec<Rational>,
}

impl Laurent {
    fn mul(&self, o: &Laurent) -> Laurent {
        let n = self.c.len().min(o.c.len());
        let mut c = vec![Rational::new(); n];
        for i in 0..n {
            for j in 0..n - i {
                c[i + j] += Rational::from(&self.c[i] * &o.c[j]);
            }
        }
        Laurent { low: self.low + o.low, c }
    }

    /// θ = z d/dz = −(1 − Z) d/dZ
    fn theta(&self) -> Laurent {
        let n = self.c.len();
        let mut c = vec![Rational::new(); n];
        for i in 0..n {
            let a = i as i64 + self.low;
            let v = Rational::from(&self.c[i] * a);
            // −a Z^{a−1}
            c[i] -= &v;
            // +a Z^a
            if i + 1 < n {
                c[i + 1] += &v;
            }
        }
        Laurent { low: self.low - 1, c }
    }

    fn scale(&self, s: &Rational) -> Laurent {
        Laurent { low: self.low, c: self.c.iter().map(|x| Rational::from(x * s)).collect() }
    }

    /// (1 − Z)^e for integer e ≥ 0
    fn twist(&self, e: u32) -> Laurent {
        let mut out = self.clone();
        for _ in 0..e {
            let mut c = out.c.clone();
            for i in 1..c.len() {
                c[i] -= &out.c[i - 1];
            }
            out.c = c;
        }
        out
    }
}

/// Substitute W = Σ_{k<n} c_k Z^{k−α} into the normalized ODE and return the
/// matched coefficients, index 0 at the dominant order. W = ρ^σ G removes ρ
/// from every term, so no amplitude factor enters.
pub fn laurent_residual(model: &OdeModel<Rational>, coeffs: &[Rational]) -> Result<Vec<Rational>> {
    let n = coeffs.len();
    let w = Laurent { low: -model.alpha, c: coeffs.to_vec() };
    let mut acc: Option<Laurent> = None;
    let mut theta_pows = vec![w.clone()];
    let pmax = model.terms.iter().flat_map(|t| t.factors.iter().map(|f| f.len())).max().unwrap_or(1);
    for j in 1..pmax {
        let next = theta_pows[j - 1].theta();
        theta_pows.push(next);
    }
    let low = model.dominant_offset();
    for t in &model.terms {
        let e = Some(&t.z_power)
            .filter(|z| *z.denom() == 1)
            .and_then(|z| z.numer().to_u32())
            .ok_or_else(|| Error::Unsupported("non-integer z power".into()))?;
        let mut prod: Option<Laurent> = None;
        for f in &t.factors {
            let mut lf = Laurent { low: theta_pows[f.len() - 1].low, c: vec![Rational::new(); n] };
            for (j, cj) in f.iter().enumerate() {
                let p = &theta_pows[j];
                let shift = (p.low - lf.low) as usize;
                for i in 0..n - shift {
                    lf.c[i + shift] += Rational::from(&p.c[i] * cj);
                }
            }
            prod = Some(match prod {
                None => lf,
                Some(p) => p.mul(&lf),
            });
        }
        let term = prod.unwrap().twist(e).scale(&t.coef);
        let shift = (term.low - low) as usize;
        let mut full = vec![Rational::new(); n];
        for i in 0..n.saturating_sub(shift) {
            full[i + shift] = term.c[i].clone();
        }
        let cur = Laurent { low, c: full };
        acc = Some(match acc {
            None => cur,
            Some(a) => Laurent { low, c: a.c.iter().zip(&cur.c).map(|(x, y)| Rational::from(x + y)).collect() },
        });
    }
    Ok(acc.map(|a| a.c).unwrap_or_default())
}

/// For a compatible exact family, check that the Laurent coefficients from the
/// solver satisfy the ODE through `extra` indices beyond r.
pub fn compatible_extends(family: &Family, extra: usize) -> Result<bool> {
    let model = exact_model(family)?;
    let w0 = model.w0_exact().ok_or_else(|| Error::Unsupported("w0 not rational".into()))?;
    let least = resonance_polynomial(family)?
        .least()
        .ok_or_else(|| Error::Domain(format!("{}: no positive resonance", family.name())))?;
    let rep = frobenius_and_compatibility(family, least as usize)?;
    if rep.verdict != Verdict::Compatible {
        return Ok(false);
    }
    let r = rep.resonance;
    let n = r + extra + 1;
    let ps = solve_modes(&model, &Rational::from(1), n)?;
    if ps.modes.iter().any(|m| m.degree() > 0) {
        return Ok(false);
    }
    let coeffs: Vec<Rational> = ps.modes.iter().map(|m| m.coeff(0).mul(&w0)).collect();
    let res = laurent_residual(&model, &coeffs)?;
    Ok(res[..n].iter().all(|x| *x == 0))
}

/// −(4t+2)!(t+1)(216t⁴+522t³+437t²+141t+12)/(4(6t+5)²), with u₀ = 1.
pub fn fringe_closed_form_residual(t: u32) -> Rational {
    let t = t as i64;
    let p = 216 * t.pow(4) + 522 * t.pow(3) + 437 * t * t + 141 * t + 12;
    let num = factorial(4 * t as u64 + 2) * Integer::from(t + 1) * Integer::from(p);
    -Rational::from((num, Integer::from(4 * (6 * t + 5) * (6 * t + 5))))
}
