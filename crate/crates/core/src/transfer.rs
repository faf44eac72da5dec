//! Coefficient asymptotics from psi-series. Each term Z^a (log Z)^ℓ is
//! transferred exactly to an expansion in descending powers of n, with H_n
//! and H_n^(2) kept as symbols.

use std::collections::BTreeMap;
use std::fmt;

use rug::{Integer, Rational};

use crate::connect::ConnectionSolution;
use crate::error::{Error, Result};
use crate::numeric::{factorial, gamma, harmonic, ln_gamma, BigReal, CPoly, Field, Module, QNum, Ring};
use crate::ode_models::{exact_model, model_for, partition_d2_omega1_exact, quadtree_exact, OdeModel};
use crate::par;
use crate::psi_engine::solve_modes;
use crate::recurrences::{gf_coefficients, quadtree_scaled, Family};

/// n^power H_n^harmonic (H_n^(2))^harmonic2
type Key = (i64, u32, u32);

/// Truncated expansion in n with coefficients polynomial in the free constant.
#[derive(Clone, Debug)]
struct NSeries<F> {
    min_pow: i64,
    map: BTreeMap<Key, CPoly<F>>,
    one: F,
}

impl<F: Field> NSeries<F> {
    fn zero(one: &F, min_pow: i64) -> Self {
        NSeries { min_pow, map: BTreeMap::new(), one: one.clone() }
    }

    fn monomial(one: &F, min_pow: i64, key: Key, c: F) -> Self {
        let mut s = Self::zero(one, min_pow);
        s.push(key, CPoly::constant(c));
        s
    }

    fn constant(one: &F, min_pow: i64, c: F) -> Self {
        Self::monomial(one, min_pow, (0, 0, 0), c)
    }

    fn push(&mut self, key: Key, c: CPoly<F>) {
        if key.0 < self.min_pow || c.is_zero() {
            return;
        }
        let e = self.map.entry(key).or_insert_with(|| CPoly::constant(self.one.zero_like()));
        *e = e.add(&c);
        if e.is_zero() {
            self.map.remove(&key);
        }
    }

    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.map {
            out.push(*k, c.clone());
        }
        out
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&self.one.neg()))
    }

    fn scale(&self, f: &F) -> Self {
        let mut out = Self::zero(&self.one, self.min_pow);
        for (k, c) in &self.map {
            out.push(*k, c.scale(f));
        }
        out
    }

    fn scale_c(&self, f: &CPoly<F>) -> Self {
        let mut out = Self::zero(&self.one, self.min_pow);
        for (k, c) in &self.map {
            out.push(*k, c.mul(f));
        }
        out
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(&self.one, self.min_pow);
        for (ka, a) in &self.map {
            for (kb, b) in &o.map {
                out.push((ka.0 + kb.0, ka.1 + kb.1, ka.2 + kb.2), a.mul(b));
            }
        }
        out
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(&self.one, self.min_pow, self.one.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// (n − i)^{−e}, e = 1 or 2
    fn inv_shift(one: &F, min_pow: i64, i: i64, e: u32) -> Self {
        let mut s = Self::zero(one, min_pow);
        for p in e as i64..=-min_pow {
            // coefficient of n^{−p}: C(p−1, e−1) i^{p−e}
            let c = Integer::from(Integer::binomial_u((p - 1) as u32, e - 1)) * ipow(i, (p - e as i64) as u32);
            s.push((-p, 0, 0), CPoly::constant(one.from_rational_like(&Rational::from(c))));
        }
        s
    }
}

/// One term c · n^power · H_n^harmonic · (H_n^(2))^harmonic2.
#[derive(Clone, Debug)]
pub struct ExpansionTerm<F> {
    pub power: i64,
    pub harmonic: u32,
    pub harmonic2: u32,
    /// Polynomial in the free constant c_r.
    pub coeff: CPoly<F>,
}

#[derive(Clone, Debug)]
pub struct AsymptoticExpansion<F> {
    pub family: String,
    /// "W" when coefficients include w0, else "Y" (the factor w0 sits in front).
    pub units: &'static str,
    /// Sequence index n corresponds to [z^{n − index_shift}] of the generating function.
    pub index_shift: i64,
    /// g_N = ρ^{−N − rho_shift} (w0) Σ terms.
    pub rho_shift: i64,
    pub prefactor: String,
    /// Lowest power of n kept.
    pub order: i64,
    /// Decreasing power.
    pub terms: Vec<ExpansionTerm<F>>,
    pub resonance: Option<usize>,
}

impl<F: Field> AsymptoticExpansion<F> {
    pub fn coefficient(&self, power: i64, harmonic: u32, harmonic2: u32) -> Option<&CPoly<F>> {
        self.terms
            .iter()
            .find(|t| t.power == power && t.harmonic == harmonic && t.harmonic2 == harmonic2)
            .map(|t| &t.coeff)
    }

    /// c-free part of the n^power coefficient (zero when absent).
    pub fn plain(&self, power: i64) -> Option<F> {
        self.coefficient(power, 0, 0).map(|c| c.coeff(0))
    }

    pub fn leading(&self) -> &ExpansionTerm<F> {
        &self.terms[0]
    }

    /// Keep powers ≥ −order.
    pub fn truncated(&self, order: i64) -> Self {
        let mut out = self.clone();
        out.order = order.min(self.order);
        out.terms.retain(|t| t.power >= -order);
        out
    }

    /// Divide through by the leading coefficient (which must be c-free).
    pub fn normalized(&self) -> Result<Self> {
        let lead = self.leading().coeff.clone();
        if lead.degree() > 0 {
            return Err(Error::Domain("leading coefficient depends on c".into()));
        }
        let inv = lead.coeff(0).recip();
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff = t.coeff.scale(&inv);
        }
        Ok(out)
    }

    /// Σ terms at n with H_n, H_n^(2) substituted and c given in the
    /// expansion's units.
    pub fn eval(&self, n: u64, c: &BigReal, prec: u32) -> BigReal {
        let nn = BigReal::from_i64(n as i64, prec);
        let need1 = self.terms.iter().any(|t| t.harmonic > 0);
        let need2 = self.terms.iter().any(|t| t.harmonic2 > 0);
        let h1 = if need1 { harmonic_float(n, 1, prec) } else { BigReal::zero(prec) };
        let h2 = if need2 { harmonic_float(n, 2, prec) } else { BigReal::zero(prec) };
        let mut acc = BigReal::zero(prec);
        for t in &self.terms {
            let mut cv = BigReal::zero(prec);
            for k in (0..t.coeff.coeffs.len()).rev() {
                cv = &(&cv * c) + &t.coeff.coeffs[k].to_bigreal(prec);
            }
            let mut v = &cv * &nn.powi(t.power as i32);
            for _ in 0..t.harmonic {
                v = &v * &h1;
            }
            for _ in 0..t.harmonic2 {
                v = &v * &h2;
            }
            acc += &v;
        }
        acc
    }
}

impl<F: Field + fmt::Display> fmt::Display for AsymptoticExpansion<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (", self.prefactor)?;
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let parts: Vec<String> = t
                .coeff
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| match k {
                    0 => format!("{c}"),
                    1 => format!("({c})c"),
                    _ => format!("({c})c^{k}"),
                })
                .collect();
            write!(f, "[{}]", parts.join(" + "))?;
            if t.power != 0 {
                write!(f, " n^{}", t.power)?;
            }
            if t.harmonic > 0 {
                write!(f, " H_n^{}", t.harmonic)?;
            }
            if t.harmonic2 > 0 {
                write!(f, " (H_n^(2))^{}", t.harmonic2)?;
            }
        }
        write!(f, ")")
    }
}

fn ipow(b: i64, e: u32) -> Integer {
    Integer::from(Integer::i_pow_u(b as i32, e))
}

fn harmonic_float(n: u64, p: u32, prec: u32) -> BigReal {
    let mut acc = BigReal::zero(prec + 16);
    for i in (1..=n).rev() {
        acc += &BigReal::from_i64(i as i64, prec + 16).powi(-(p as i32));
    }
    acc.with_prec(prec)
}

/// Exact [z^n](1 − z/ρ)^a (log(1 − z/ρ))^ℓ · ρ^n for integer a and a given n,
/// from the ℓ-th a-derivative of (−1)^n C(a, n). Oracle for the symbolic path.
pub fn coeff_extract_exact(a: i64, ell: u32, n: u64) -> Rational {
    // (−1)^n C(a, n) = Π_{i<n} (i − a) / n!, differentiate ℓ times in a
    let mut poly = vec![Rational::from(1)];
    for i in 0..n as i64 {
        // multiply by (i − a)
        let mut next = vec![Rational::new(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k] += Rational::from(c * i);
            next[k + 1] -= c;
        }
        poly = next;
    }
    let nf = Rational::from(factorial(n));
    let mut acc = Rational::new();
    let x = Rational::from(a);
    for (k, c) in poly.iter().enumerate().rev() {
        if k < ell as usize {
            break;
        }
        // d^ℓ/da^ℓ a^k = k!/(k−ℓ)! a^{k−ℓ}
        let mut f = Rational::from(c);
        for j in 0..ell as usize {
            f *= (k - j) as i64;
        }
        let mut p = Rational::from(1);
        for _ in 0..k - ell as usize {
            p *= &x;
        }
        acc += f * p;
    }
    acc / nf
}

/// Symbolic ρ^n [z^n] Z^a (log Z)^ℓ down to n^{min_pow}.
fn extract_series<F: Field>(one: &F, a: i64, ell: u32, min_pow: i64) -> Result<NSeries<F>> {
    let q = |r: Rational| one.from_rational_like(&r);
    if ell == 0 {
        if a >= 0 {
            return Ok(NSeries::zero(one, min_pow));
        }
        // C(n − a − 1, −a − 1) = Π_{i=1}^{−a−1} (n + i) / (−a−1)!
        let m = (-a - 1) as u32;
        let mut s = NSeries::constant(one, min_pow, q(Rational::from((1, factorial(m as u64)))));
        for i in 1..=m as i64 {
            let mut lin = NSeries::constant(one, min_pow, one.from_i64_like(i));
            lin.push((1, 0, 0), CPoly::constant(one.clone()));
            s = s.mul(&lin);
        }
        return Ok(s);
    }
    if a < 0 {
        return Err(Error::Unsupported(format!("log term at negative exponent {a}")));
    }
    if ell > 3 {
        return Err(Error::Unsupported(format!("log power {ell} > 3")));
    }
    // ℓ! (−1)^{a+1} P [ε^{ℓ−1}] exp(λ1 ε + λ2 ε²),  P = a!(n−a−1)!/n!
    let mut p = NSeries::constant(one, min_pow, q(Rational::from(factorial(a as u64))));
    let mut s1 = NSeries::zero(one, min_pow);
    let mut s2 = NSeries::zero(one, min_pow);
    for i in 0..=a {
        let inv = NSeries::inv_shift(one, min_pow, i, 1);
        p = p.mul(&inv);
        s1 = s1.add(&inv);
        s2 = s2.add(&NSeries::inv_shift(one, min_pow, i, 2));
    }
    let h1 = NSeries::monomial(one, min_pow, (0, 1, 0), one.clone());
    let h2 = NSeries::monomial(one, min_pow, (0, 0, 1), one.clone());
    // λ1 = H_a − H_{n−a−1}, λ2 = −(H_a^(2) + H_{n−a−1}^(2))/2
    let lam1 = NSeries::constant(one, min_pow, q(harmonic(a as u64, 1))).sub(&h1).add(&s1);
    let lam2 = NSeries::constant(one, min_pow, q(harmonic(a as u64, 2)))
        .add(&h2)
        .sub(&s2)
        .scale(&q(Rational::from((-1, 2))));
    let inner = match ell {
        1 => NSeries::constant(one, min_pow, one.clone()),
        2 => lam1,
        _ => lam1.pow(2).scale(&q(Rational::from((1, 2)))).add(&lam2),
    };
    let sign = if a % 2 == 0 { -1 } else { 1 };
    let lf = factorial(ell as u64).to_i64().unwrap() * sign;
    Ok(p.mul(&inner).scale(&one.from_i64_like(lf)))
}

/// ρ^n [z^n] (1 − z/ρ)^a (log(1 − z/ρ))^ℓ as terms down to n^{−order}.
/// ℓ ≥ 1 terms are exact rationals plus H_n, H_n^(2) symbols.
pub fn coeff_extract(a: i64, ell: u32, order: i64) -> Result<Vec<ExpansionTerm<Rational>>> {
    let s = extract_series(&Rational::from(1), a, ell, -order)?;
    Ok(to_terms(&s))
}

fn to_terms<F: Field>(s: &NSeries<F>) -> Vec<ExpansionTerm<F>> {
    let mut terms: Vec<ExpansionTerm<F>> = s
        .map
        .iter()
        .map(|(k, c)| ExpansionTerm { power: k.0, harmonic: k.1, harmonic2: k.2, coeff: c.clone() })
        .collect();
    terms.sort_by(|a, b| b.power.cmp(&a.power).then(b.harmonic.cmp(&a.harmonic)).then(b.harmonic2.cmp(&a.harmonic2)));
    terms
}

/// Re-express a series in N as one in n = N + s.
fn shift_index<F: Field>(x: &NSeries<F>, s: i64) -> NSeries<F> {
    if s == 0 {
        return x.clone();
    }
    let one = &x.one;
    let mp = x.min_pow;
    let mut hs1 = NSeries::zero(one, mp);
    let mut hs2 = NSeries::zero(one, mp);
    // H_N = H_n − Σ_{i<s} 1/(n − i)
    for i in 0..s {
        hs1 = hs1.add(&NSeries::inv_shift(one, mp, i, 1));
        hs2 = hs2.add(&NSeries::inv_shift(one, mp, i, 2));
    }
    let h1 = NSeries::monomial(one, mp, (0, 1, 0), one.clone()).sub(&hs1);
    let h2 = NSeries::monomial(one, mp, (0, 0, 1), one.clone()).sub(&hs2);
    let mut out = NSeries::zero(one, mp);
    for (k, c) in &x.map {
        let mut np = NSeries::zero(one, mp);
        if k.0 >= 0 {
            // (n − s)^p
            for j in 0..=k.0 {
                let b = Integer::from(Integer::binomial_u(k.0 as u32, j as u32)) * ipow(-s, (k.0 - j) as u32);
                np.push((j, 0, 0), CPoly::constant(one.from_rational_like(&Rational::from(b))));
            }
        } else {
            // n^{−q}(1 − s/n)^{−q}
            let qq = -k.0;
            for i in 0..=(qq - 1 - mp).max(0) {
                if -qq - i < mp {
                    break;
                }
                let b = Integer::from(Integer::binomial_u((qq + i - 1) as u32, i as u32)) * ipow(s, i as u32);
                np.push((-qq - i, 0, 0), CPoly::constant(one.from_rational_like(&Rational::from(b))));
            }
        }
        let term = np.mul(&h1.pow(k.1)).mul(&h2.pow(k.2)).scale_c(c);
        out = out.add(&term);
    }
    out
}

fn rational_of<F: Field>(x: &F, what: &str) -> Result<i64> {
    let v = x.to_f64();
    let r = v.round();
    if (v - r).abs() > 1e-9 || !x.sub(&x.from_i64_like(r as i64)).is_zero() && x.working_prec().is_none() {
        return Err(Error::Unsupported(format!("{what} = {v} is not an integer")));
    }
    Ok(r as i64)
}

/// Sequence layer of each family: index shift and the printed prefactor.
fn family_layout(family: &Family) -> (i64, &'static str) {
    match family {
        Family::Boltzmann { .. } => (1, "(-1)^(n-1) t_n = rho^(-n)"),
        Family::QuadtreeMoments => (0, "E(X^m) = m! rho^(-m) / Gamma(m v + 1) *"),
        Family::RelaxedKd { .. } => (0, "E(Y^m) = m! rho^(-m) / Gamma(m beta + 1) *"),
        Family::Partition { .. } => (0, "h_m = m! Gamma(omega) rho^(-m) / Gamma(m lambda + omega) *"),
        Family::MarySearch { .. } | Family::FringeBalanced { .. } => (0, "w0 rho^(-n-1) *"),
        _ => (0, "rho^(-n-1) *"),
    }
}

/// Expansion of the family's coefficients down to n^{−order} from the model.
/// The free constant is taken in W-units when w0 lies in F, else Y-units.
pub fn build_expansion<F: Field>(family: &Family, model: &OdeModel<F>, order: i64) -> Result<AsymptoticExpansion<F>> {
    let one = model.sigma.one_like();
    let alpha = model.alpha;
    let (shift, pre) = family_layout(family);
    let gfp = rational_of(&model.gf_rho_power, "generating-function ρ power")?;
    let k_max = (order + alpha + shift).max(1) as usize;
    let (w0, units) = match model.w0_exact() {
        Some(w) => (w, "W"),
        None => (one.clone(), "Y"),
    };
    let free = CPoly::linear(one.zero_like(), w0.recip());
    let ps = solve_modes(model, &free, k_max)?;
    // (1 − Z)^{twist}
    let tw = &model.gf_twist;
    let mut b = vec![one.clone()];
    for i in 1..=k_max {
        let f = one.from_i64_like(i as i64 - 1).sub(tw).div(&one.from_i64_like(i as i64));
        b.push(b[i - 1].mul(&f));
    }
    let mp = -order - 8 - alpha.abs() - shift;
    let mut acc = NSeries::zero(&one, mp);
    for k in 0..=k_max {
        // coefficient of Z^{k−α}: Σ_i b_i y_{k−i}
        let mut mode = ps.modes[k].scale(&b[0]);
        for i in 1..=k {
            mode = mode.add(&ps.modes[k - i].scale(&b[i]));
        }
        for (ell, c) in mode.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = extract_series(&one, k as i64 - alpha, ell as u32, mp)?;
            acc = acc.add(&e.scale_c(&c.scale(&w0)));
        }
    }
    let mut shifted = shift_index(&acc, shift);
    shifted.map.retain(|k, _| k.0 >= -order);
    Ok(AsymptoticExpansion {
        family: family.name(),
        units,
        index_shift: shift,
        rho_shift: gfp,
        prefactor: pre.to_string(),
        order,
        terms: to_terms(&shifted),
        resonance: ps.resonance,
    })
}

/// Expansion with exact rational coefficients.
pub fn exact_expansion(family: &Family, order: i64) -> Result<AsymptoticExpansion<Rational>> {
    build_expansion(family, &exact_model(family)?, order)
}

/// Expansion over Q(v) for the quadtree and partition (d = 2, ω = 1).
pub fn quadratic_expansion(family: &Family, order: i64) -> Result<AsymptoticExpansion<QNum>> {
    match family {
        Family::QuadtreeMoments => build_expansion(family, &quadtree_exact()?, order),
        Family::Partition { d: 2, omega } if *omega == 1 => build_expansion(family, &partition_d2_omega1_exact()?, order),
        _ => Err(Error::Unsupported(format!("{} has no quadratic-field model", family.name()))),
    }
}

/// Expansion with floating coefficients (any family with a model).
pub fn real_expansion(family: &Family, order: i64, prec: u32) -> Result<AsymptoticExpansion<BigReal>> {
    build_expansion(family, &model_for(family, prec)?, order)
}

#[derive(Clone, Debug)]
pub struct ValidationPoint {
    pub n: u64,
    /// oracle·ρ^{N+shift}(/w0) − expansion(n)
    pub residual: BigReal,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub family: String,
    pub points: Vec<ValidationPoint>,
    /// −slope of log|R| against log n.
    pub fitted_exponent: f64,
    /// Order of the first omitted power.
    pub next_order: i64,
}

impl ValidationReport {
    /// R(n) n^p at each point.
    pub fn scaled(&self, p: i64) -> Vec<(u64, f64)> {
        self.points.iter().map(|pt| (pt.n, (&pt.residual * &BigReal::from_i64(pt.n as i64, pt.residual.prec()).powi(p as i32)).to_f64())).collect()
    }

    /// lim R(n) n^p from the last two points, removing a 1/n correction.
    pub fn scaled_limit(&self, p: i64) -> Option<f64> {
        let s = self.scaled(p);
        if s.len() < 2 {
            return None;
        }
        let (n1, a) = s[s.len() - 2];
        let (n2, b) = s[s.len() - 1];
        let (n1, n2) = (n1 as f64, n2 as f64);
        Some((n2 * b - n1 * a) / (n2 - n1))
    }
}

/// Least-squares slope of y on x.
pub fn loglog_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Compare the expansion with the family's coefficients at the given n,
/// using ρ and c_r from a connection solve.
pub fn validate_expansion<F: Field>(
    family: &Family,
    exp: &AsymptoticExpansion<F>,
    sol: &ConnectionSolution,
    ns: &[u64],
    prec: u32,
) -> Result<ValidationReport> {
    let n_max = *ns.iter().max().ok_or_else(|| Error::Domain("empty n range".into()))?;
    if ns.iter().any(|&n| (n as i64) < exp.index_shift) {
        return Err(Error::Domain("n below the index shift".into()));
    }
    let g = gf_coefficients(family, (n_max as i64 - exp.index_shift) as usize, prec)?;
    let rho = sol.rho.with_prec(prec);
    let model = model_for(family, prec)?;
    let w0 = model.w0_value(prec)?;
    let c = match &sol.c_r {
        Some(c) if exp.units == "Y" => &c.with_prec(prec) / &w0,
        Some(c) => c.with_prec(prec),
        None => BigReal::zero(prec),
    };
    let points: Vec<ValidationPoint> = par::map_collect(0..ns.len(), |i| {
        let n = ns[i];
        let nn = (n as i64 - exp.index_shift) as usize;
        let mut v = &g[nn] * &rho.powi((nn as i64 + exp.rho_shift) as i32);
        if exp.units == "Y" {
            v = &v / &w0;
        }
        ValidationPoint { n, residual: &v - &exp.eval(n, &c, prec) }
    });
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| !p.residual.is_zero())
        .map(|p| ((p.n as f64).ln(), p.residual.abs().ln().to_f64()))
        .collect();
    let fitted_exponent = if pts.len() >= 2 { -loglog_slope(&pts) } else { f64::NAN };
    Ok(ValidationReport { family: family.name(), points, fitted_exponent, next_order: exp.order + 1 })
}

#[derive(Clone, Debug)]
pub struct MgfReport {
    pub z: BigReal,
    pub value: BigReal,
    pub prediction: BigReal,
    /// value / prediction − 1
    pub relative_gap: BigReal,
    /// (value − prediction) e^{−x}, x = (z/ρ)^{1/v}
    pub scaled_gap: BigReal,
    pub terms: usize,
}

/// E(e^{Xz}) for the quadtree limit law by summing moments, against
/// e^x (3x + 9/5 − (22464/21875) x^{−5}), x = (z/ρ)^{1/v}.
pub fn quadtree_mgf(z: &BigReal, rho: &BigReal, prec: u32) -> Result<MgfReport> {
    if z.is_sign_negative() || z.is_zero() {
        return Err(Error::Domain("z must be positive".into()));
    }
    let v = crate::recurrences::quadtree_v(prec);
    let x = (z / rho).powf(&v.recip());
    let xf = x.to_f64();
    let vf = v.to_f64();
    let mut m_max = ((xf + 14.0 * xf.sqrt() + 60.0) / vf).ceil() as usize;
    let lz = z.ln();
    for _ in 0..8 {
        let g = quadtree_scaled(prec, m_max)?;
        let terms: Vec<BigReal> = par::map_collect(0..m_max + 1, |m| {
            let lg = ln_gamma(&(&(&v * m as i64) + 1), prec).expect("positive argument");
            &g[m] * &(&(&lz * &BigReal::from_i64(m as i64, prec)) - &lg).exp()
        });
        let mut value = BigReal::zero(prec);
        for t in &terms {
            value += t;
        }
        if terms[m_max].log2_abs() < value.log2_abs() - (prec as f64) * 0.6 {
            return Ok(mgf_report(z, &x, value, m_max + 1, prec));
        }
        m_max += m_max / 2;
    }
    Err(Error::InsufficientModes(format!("moment sum not converged after {m_max} terms")))
}

fn mgf_report(z: &BigReal, x: &BigReal, value: BigReal, terms: usize, prec: u32) -> MgfReport {
    let ex = x.exp();
    let corr = BigReal::from_rational(&Rational::from((22464, 21875)), prec);
    let inner = &(&(x * 3) + &BigReal::from_rational(&Rational::from((9, 5)), prec)) - &(&corr * &x.powi(-5));
    let prediction = &ex * &inner;
    let relative_gap = &(&value / &prediction) - 1;
    let scaled_gap = &(&value - &prediction) / &ex;
    MgfReport { z: z.clone(), value, prediction, relative_gap, scaled_gap, terms }
}

/// Γ(m v + 1) as used in the moment prefactors.
pub fn moment_gamma(m: u64, v: &BigReal, prec: u32) -> Result<BigReal> {
    gamma(&(&(v * m as i64) + 1), prec)
}
