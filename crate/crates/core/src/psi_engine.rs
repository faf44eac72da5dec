//! Psi-series solver: modes y_k(τ) of Y(Z) = Σ_k y_k(log Z) Z^{k−α}.
//!
//! Each mode solves Q(k + D) y_k = −G_k, D = d/dτ, where G_k collects all
//! contributions of earlier modes. At a root of Q the top τ-degree is raised
//! by one and the constant term becomes free.

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::numeric::{BigReal, Field, Module, Ring, TauPoly};
use crate::ode_models::OdeModel;
use crate::par;

/// Solved psi-series in Y-units (Y = W/w0).
#[derive(Clone, Debug)]
pub struct PsiSeries<F, R> {
    pub model: OdeModel<F>,
    pub alpha: i64,
    /// Least positive integer resonance reached.
    pub resonance: Option<usize>,
    /// Further resonances, whose free constants are set to zero.
    pub shadowed: Vec<usize>,
    /// Compatibility at the least resonance.
    pub compatible: Option<bool>,
    /// G_r with y_r = 0: the singular matching residual in Y-units.
    pub resonance_residual: Option<TauPoly<R>>,
    pub free_constant: R,
    pub modes: Vec<TauPoly<R>>,
}

impl<F: Field, R: Module<F>> PsiSeries<F, R> {
    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// deg y_k <= floor(k/r) for all modes.
    pub fn degree_law_holds(&self) -> bool {
        match self.resonance {
            None => self.modes.iter().all(|m| m.degree() == 0),
            Some(r) => self.modes.iter().enumerate().all(|(k, m)| m.degree() <= k / r),
        }
    }

    /// Modes in W-units when w0 lies in the field.
    pub fn w_modes(&self) -> Option<Vec<TauPoly<R>>> {
        let w0 = self.model.w0_exact()?;
        Some(self.modes.iter().map(|m| m.scale(&w0)).collect())
    }
}

struct Factor<F> {
    poly: Vec<F>,
}

struct TermState<F> {
    coef: F,
    shift: usize,
    binom: Vec<F>,
    binom_finite: bool,
    z_power: F,
    /// indices into the factor table
    factors: Vec<usize>,
}

struct Solver<'a, F: Field, R: Module<F>> {
    model: &'a OdeModel<F>,
    one: F,
    /// tower[j][k] = (θ^j Y)[k], offset −α−j
    tower: Vec<Vec<TauPoly<R>>>,
    factors: Vec<Factor<F>>,
    /// factor series, same order as `factors`
    fvals: Vec<Vec<TauPoly<R>>>,
    terms: Vec<TermState<F>>,
    /// products[t][l][k] for the chain F_0 F_1 ... F_l of term t
    products: Vec<Vec<Vec<TauPoly<R>>>>,
    q: Vec<F>,
    zero: R,
}

fn falling_ratio(s: usize, i: usize) -> Rational {
    // (s+i)!/s!
    let mut acc = Integer::from(1);
    for j in 1..=i {
        acc *= (s + j) as u64;
    }
    Rational::from(acc)
}

impl<'a, F: Field, R: Module<F>> Solver<'a, F, R> {
    fn new(model: &'a OdeModel<F>, zero: R) -> Self {
        let one = model.sigma.one_like();
        let e = model.dominant_offset();
        let mut factors: Vec<Factor<F>> = Vec::new();
        let mut terms = Vec::new();
        for t in &model.terms {
            let mut idx = Vec::new();
            for f in &t.factors {
                let pos = factors.iter().position(|x| x.poly == *f).unwrap_or_else(|| {
                    factors.push(Factor { poly: f.clone() });
                    factors.len() - 1
                });
                idx.push(pos);
            }
            terms.push(TermState {
                coef: model.normalized_coef(t),
                shift: (model.offset(t) - e) as usize,
                binom: vec![one.clone()],
                binom_finite: false,
                z_power: t.z_power.clone(),
                factors: idx,
            });
        }
        let pmax = factors.iter().map(|f| f.poly.len() - 1).max().unwrap_or(0);
        let nterms = terms.len();
        Solver {
            model,
            one,
            tower: vec![Vec::new(); pmax + 1],
            fvals: vec![Vec::new(); factors.len()],
            factors,
            products: (0..nterms).map(|t| vec![Vec::new(); model.terms[t].degree()]).collect(),
            terms,
            q: model.resonance_coeffs(),
            zero,
        }
    }

    fn zero_poly(&self) -> TauPoly<R> {
        TauPoly::zero(&self.zero)
    }

    fn binom(&mut self, t: usize, j: usize) -> F {
        let st = &mut self.terms[t];
        while st.binom.len() <= j && !st.binom_finite {
            let n = st.binom.len() as i64;
            let prev = st.binom[st.binom.len() - 1].clone();
            // b_n = b_{n−1} (n − 1 − e)/n
            let f = self.one.from_i64_like(n - 1).sub(&st.z_power).div(&self.one.from_i64_like(n));
            let b = prev.mul(&f);
            if b.is_zero() {
                st.binom_finite = true;
            } else {
                st.binom.push(b);
            }
        }
        st.binom.get(j).cloned().unwrap_or_else(|| self.one.zero_like())
    }

    /// Write index k of every derived array from the current y_k.
    fn fill(&mut self, k: usize, y: TauPoly<R>, mids: &[Vec<TauPoly<R>>]) {
        let alpha = self.model.alpha;
        // θ-tower
        if self.tower[0].len() == k {
            for col in &mut self.tower {
                col.push(TauPoly::zero(&self.zero));
            }
        }
        self.tower[0][k] = y;
        for j in 1..self.tower.len() {
            let o = -alpha - (j as i64 - 1);
            let c = self.one.from_i64_like(o + k as i64);
            let mut v = self.tower[j - 1][k].shift_op(&R::embed(&c)).neg();
            if k > 0 {
                let c1 = self.one.from_i64_like(o + k as i64 - 1);
                v = v.add(&self.tower[j - 1][k - 1].shift_op(&R::embed(&c1)));
            }
            self.tower[j][k] = v;
        }
        // factor series
        for (fi, f) in self.factors.iter().enumerate() {
            let p = f.poly.len() - 1;
            let mut acc = TauPoly::zero(&self.zero);
            for (j, l) in f.poly.iter().enumerate() {
                if l.is_zero() || k + j < p {
                    continue;
                }
                let src = &self.tower[j][k + j - p];
                acc.add_assign(&src.scale(l));
            }
            if self.fvals[fi].len() == k {
                self.fvals[fi].push(acc);
            } else {
                self.fvals[fi][k] = acc;
            }
        }
        // product chains
        for t in 0..self.terms.len() {
            let fidx = self.terms[t].factors.clone();
            for l in 0..fidx.len() {
                let v = if l == 0 {
                    self.fvals[fidx[0]][k].clone()
                } else {
                    let prev = &self.products[t][l - 1];
                    let fl = &self.fvals[fidx[l]];
                    let mut v = mids[t][l].clone();
                    if k == 0 {
                        v.add_mul(&prev[0], &fl[0]);
                    } else {
                        v.add_mul(&prev[k], &fl[0]);
                        v.add_mul(&prev[0], &fl[k]);
                    }
                    v.trim();
                    v
                };
                if self.products[t][l].len() == k {
                    self.products[t][l].push(v);
                } else {
                    self.products[t][l][k] = v;
                }
            }
        }
    }

    /// Σ_{1<=i<k} P_{l−1}[i] F_l[k−i] for each chain link.
    fn mids(&self, k: usize) -> Vec<Vec<TauPoly<R>>> {
        let zp = self.zero_poly();
        self.terms
            .iter()
            .enumerate()
            .map(|(t, st)| {
                (0..st.factors.len())
                    .map(|l| {
                        if l == 0 || k < 2 {
                            return zp.clone();
                        }
                        let prev = &self.products[t][l - 1];
                        let fl = &self.fvals[st.factors[l]];
                        let mut v = par::sum_map(1..k, &zp, |i, acc| acc.add_mul(&prev[i], &fl[k - i]));
                        v.trim();
                        v
                    })
                    .collect()
            })
            .collect()
    }

    /// Equation value at index k.
    fn equation(&mut self, k: usize) -> TauPoly<R> {
        let mut g = self.zero_poly();
        for t in 0..self.terms.len() {
            let sh = self.terms[t].shift;
            if k < sh {
                continue;
            }
            let last = self.terms[t].factors.len() - 1;
            let top = k - sh;
            let bs: Vec<F> = (0..=top).map(|j| self.binom(t, j)).collect();
            let series = &self.products[t][last];
            let zp = self.zero_poly();
            let mut part = par::sum_map(0..top + 1, &zp, |j, acc| {
                if !bs[j].is_zero() {
                    acc.add_assign(&series[top - j].scale(&bs[j]));
                }
            });
            part = part.scale(&self.terms[t].coef);
            g.add_assign(&part);
        }
        g.trim();
        g
    }

    /// Taylor coefficients of Q at k.
    fn q_at(&self, k: usize) -> Vec<F> {
        let x = self.one.from_i64_like(k as i64);
        let n = self.q.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = self.one.zero_like();
            for j in (i..n).rev() {
                let b = Integer::from(Integer::binomial_u(j as u32, i as u32));
                let c = self.q[j].mul(&self.one.from_rational_like(&Rational::from(b)));
                acc = acc.mul(&x).add(&c);
            }
            // acc currently = Σ_j C(j,i) q_j x^{j−i} evaluated by Horner in x over j ≥ i
            out.push(acc);
        }
        out
    }
}

fn scale_hint<R: Ring>(modes: &[TauPoly<R>]) -> f64 {
    modes.iter().map(|m| m.mag_log2()).fold(0.0, f64::max)
}

/// Solve Q(k + D) y = −g. Returns (y, resonant).
fn solve_mode<F: Field, R: Module<F>>(q: &[F], g: &TauPoly<R>, free: &R, compatible: bool) -> Result<TauPoly<R>> {
    let zero = g.coeffs[0].zero_like();
    let resonant = q[0].is_zero();
    let deg = g.degree();
    let qi = |i: usize| q.get(i).cloned().unwrap_or_else(|| q[0].zero_like());
    if !resonant {
        let inv = q[0].recip();
        let mut y = vec![zero.clone(); deg + 1];
        for s in (0..=deg).rev() {
            let mut acc = g.coeff(s).neg();
            for i in 1..q.len() {
                if s + i > deg {
                    break;
                }
                let f = qi(i).mul(&q[0].from_rational_like(&falling_ratio(s, i)));
                acc = acc.sub(&y[s + i].scale(&f));
            }
            y[s] = acc.scale(&inv);
        }
        return Ok(TauPoly::from_coeffs(y));
    }
    if compatible {
        return Ok(TauPoly::constant(free.clone()));
    }
    if q.len() < 2 || q[1].is_zero() {
        return Err(Error::Model("multiple resonance root".into()));
    }
    let mut y = vec![zero.clone(); deg + 2];
    y[0] = free.clone();
    for s in (0..=deg).rev() {
        let mut acc = g.coeff(s).neg();
        for i in 2..q.len() {
            if s + i > deg + 1 {
                break;
            }
            let f = qi(i).mul(&q[0].from_rational_like(&falling_ratio(s, i)));
            acc = acc.sub(&y[s + i].scale(&f));
        }
        let d = q[1].mul(&q[0].from_i64_like(s as i64 + 1));
        y[s + 1] = acc.scale(&d.recip());
    }
    Ok(TauPoly::from_coeffs(y))
}

/// Solve modes 0..k_max. `free` is the constant term of y_r (Y-units) at the
/// least positive resonance r; later resonances get zero.
pub fn solve_modes<F: Field, R: Module<F>>(model: &OdeModel<F>, free: &R, k_max: usize) -> Result<PsiSeries<F, R>> {
    let zero = free.zero_like();
    let mut s = Solver::new(model, zero.clone());
    let no_mids: Vec<Vec<TauPoly<R>>> = s.terms.iter().map(|t| vec![s.zero_poly(); t.factors.len()]).collect();
    let y0 = TauPoly::constant(R::embed(&s.one));
    s.fill(0, y0.clone(), &no_mids);
    let mut modes = vec![y0];
    let mut resonance = None;
    let mut shadowed = Vec::new();
    let mut compatible = None;
    let mut resonance_residual = None;
    let qscale = s.q.iter().map(|c| c.log2_abs()).fold(0.0, f64::max);
    for k in 1..=k_max {
        let mids = s.mids(k);
        s.fill(k, s.zero_poly(), &mids);
        let g = s.equation(k);
        let mut q = s.q_at(k);
        let kscale = qscale + (k as f64).log2() * s.q.len() as f64;
        if q[0].negligible(&q[0].from_i64_like(1)) || q[0].log2_abs() < kscale - 0.75 * precision_of(&q[0]) {
            q[0] = q[0].zero_like();
        }
        let y = if q[0].is_zero() {
            let scale = scale_hint(&modes) + kscale;
            let compat = g.negligible_rel(scale);
            let free_here = if resonance.is_none() {
                resonance = Some(k);
                compatible = Some(compat);
                resonance_residual = Some(g.clone());
                free.clone()
            } else {
                shadowed.push(k);
                zero.clone()
            };
            solve_mode(&q, &g, &free_here, compat)?
        } else {
            solve_mode(&q, &g, &zero, false)?
        };
        s.fill(k, y.clone(), &mids);
        modes.push(y);
    }
    Ok(PsiSeries {
        model: model.clone(),
        alpha: model.alpha,
        resonance,
        shadowed,
        compatible,
        resonance_residual,
        free_constant: free.clone(),
        modes,
    })
}

fn precision_of<F: Field>(x: &F) -> f64 {
    x.working_prec().map_or(f64::INFINITY, |p| p as f64)
}

/// Y, Y_Z and Y_ZZ at a real point Z in (0, 1).
#[derive(Clone, Debug)]
pub struct YValues<R> {
    pub y: R,
    pub dy: R,
    pub d2y: R,
}

/// Σ_{k<m} y_k(log Z) Z^{k−α} and its first two Z-derivatives.
pub fn evaluate_y<R: Module<BigReal>>(modes: &[TauPoly<R>], alpha: i64, z: &BigReal, m: usize) -> YValues<R> {
    let tau = z.ln();
    let zero = modes[0].coeffs[0].zero_like();
    let prec = z.prec();
    let parts = par::map_collect(0..m.min(modes.len()), |k| {
        let p = &modes[k];
        let dp = p.derivative();
        let ddp = dp.derivative();
        let a = BigReal::from_i64(k as i64 - alpha, prec);
        let v = p.eval_at(&tau);
        let dv = dp.eval_at(&tau);
        let ddv = ddp.eval_at(&tau);
        // Y_Z term: Z^{a−1}(dv + a v)
        let first = dv.add(&v.scale(&a));
        // Y_ZZ term: Z^{a−2}[(a−1)(dv + a v) + ddv + a dv]
        let second = first.scale(&(&a - 1)).add(&ddv).add(&dv.scale(&a));
        let za = z.powi((k as i64 - alpha) as i32);
        let za1 = &za / z;
        let za2 = &za1 / z;
        (v.scale(&za), first.scale(&za1), second.scale(&za2))
    });
    let mut out = YValues { y: zero.clone(), dy: zero.clone(), d2y: zero };
    for (a, b, c) in parts {
        out.y.add_assign(&a);
        out.dy.add_assign(&b);
        out.d2y.add_assign(&c);
    }
    out
}

#[derive(Clone, Debug)]
pub struct EvalResult {
    /// Generating function G(z0)
    pub value: BigReal,
    /// dG/dz at z0
    pub derivative: BigReal,
    pub tail_bound: BigReal,
    pub derivative_tail_bound: BigReal,
    pub modes_used: usize,
    pub fitted_k: BigReal,
}

/// Physical generating function G and dG/dz from Y-values at Z, for any R.
pub fn physical<R: Module<BigReal>>(model: &OdeModel<BigReal>, yv: &YValues<R>, z: &BigReal, rho: &BigReal) -> Result<(R, R, R)> {
    let prec = z.prec();
    let w0 = model.w0_value(prec)?;
    let pre = &w0 * &rho.powf(&-model.gf_rho_power.clone());
    let mu = &model.gf_twist;
    let one_minus = BigReal::from_i64(1, prec) - z;
    let (g, gz, gzz) = if mu.is_zero() {
        (yv.y.clone(), yv.dy.clone(), yv.d2y.clone())
    } else {
        let t0 = one_minus.powf(mu);
        let t1 = &(mu * &t0) / &one_minus;
        let t2 = &(&(mu * &(mu - 1)) * &t0) / &(&one_minus * &one_minus);
        // f = t0 Y; f_Z = t0 Y_Z − t1 Y; f_ZZ = t0 Y_ZZ − 2 t1 Y_Z + t2 Y
        let g = yv.y.scale(&t0);
        let gz = yv.dy.scale(&t0).sub(&yv.y.scale(&t1));
        let gzz = yv.d2y.scale(&t0).sub(&yv.dy.scale(&(&t1 * 2))).add(&yv.y.scale(&t2));
        (g, gz, gzz)
    };
    Ok((g.scale(&pre), gz.scale(&pre), gzz.scale(&pre)))
}

/// K fitted to |y_k(τ0)| <= K |1−τ0|^{k−r} / √(k+1), with a 1.5 safety factor.
pub fn fitted_k<R: Module<BigReal>>(modes: &[TauPoly<R>], tau: &BigReal, r: usize) -> BigReal
where
    R: Ring,
{
    let prec = tau.prec();
    let base = (BigReal::from_i64(1, prec) - tau).abs();
    let mut best = BigReal::zero(prec);
    for (k, m) in modes.iter().enumerate() {
        let v = m.eval_at(tau);
        let mag = BigReal::from_f64(2f64.powf(v.mag_log2().max(-1e6)), 64).with_prec(prec);
        let norm = &(&mag * &BigReal::from_i64(k as i64 + 1, prec).sqrt()) / &base.powi(k as i32 - r as i32);
        best = best.max(&norm);
    }
    &best * &BigReal::from_rational(&Rational::from((3, 2)), prec)
}

/// Evaluate the generating function from a solved series at z0, with tail bounds.
pub fn evaluate_psi(ps: &PsiSeries<BigReal, BigReal>, z0: &BigReal, rho: &BigReal, m: usize) -> Result<EvalResult> {
    let prec = z0.prec();
    let zz = BigReal::from_i64(1, prec) - &(z0 / rho);
    if zz.is_sign_negative() || zz.is_zero() {
        return Err(Error::Branch("Z0 must lie in (0, 1)".into()));
    }
    if zz >= 1 {
        return Err(Error::Branch("Z0 must lie in (0, 1)".into()));
    }
    let m = m.min(ps.modes.len());
    let yv = evaluate_y(&ps.modes, ps.alpha, &zz, m);
    let (g, gz, _) = physical(&ps.model, &yv, &zz, rho)?;
    let tau = zz.ln();
    let r = ps.resonance.unwrap_or(0);
    let k = fitted_k(&ps.modes[..m], &tau, r);
    let (tail, dtail) = psi_tail(&k, &tau, &zz, ps.alpha, r, m);
    let w0 = ps.model.w0_value(prec)?;
    let pre = &w0 * &rho.powf(&-ps.model.gf_rho_power.clone());
    Ok(EvalResult {
        value: g,
        derivative: -(&gz / rho),
        tail_bound: &tail * &pre.abs(),
        derivative_tail_bound: &(&dtail * &pre.abs()) / &rho.abs(),
        modes_used: m,
        fitted_k: k,
    })
}

/// Geometric tail Σ_{k>=m} K|1−τ|^{k−r} Z^{k−α}/√(k+1) and its Z-derivative analogue.
pub fn psi_tail(k: &BigReal, tau: &BigReal, z: &BigReal, alpha: i64, r: usize, m: usize) -> (BigReal, BigReal) {
    let prec = z.prec();
    let base = (BigReal::from_i64(1, prec) - tau).abs();
    let q = &base * z;
    if q >= 1 {
        let inf = BigReal::from_f64(f64::INFINITY, prec);
        return (inf.clone(), inf);
    }
    let lead = &(&(k * &base.powi(m as i32 - r as i32)) * &z.powi((m as i64 - alpha) as i32))
        / &BigReal::from_i64(m as i64 + 1, prec).sqrt();
    let one_q = BigReal::from_i64(1, prec) - &q;
    let tail = &lead / &one_q;
    // derivative terms carry an extra (k−α)/Z plus the τ-derivative; bound by (m + |1−τ|... ) m/Z
    let factor = &BigReal::from_i64(m as i64 + 1, prec) / z;
    let dtail = &(&tail * &factor) / &one_q;
    (tail, dtail)
}

/// d/dρ and d/dc of (G(z0), G'(z0)) with c the free constant in Y-units.
#[derive(Clone, Debug)]
pub struct Sensitivities {
    pub value: BigReal,
    pub derivative: BigReal,
    pub d_value_d_rho: BigReal,
    pub d_derivative_d_rho: BigReal,
    pub d_value_d_c: BigReal,
    pub d_derivative_d_c: BigReal,
}

/// Sensitivities from a series solved over Dual numbers (d/dc carried in the dual part).
pub fn sensitivities(
    ps: &PsiSeries<BigReal, crate::numeric::Dual<BigReal>>,
    z0: &BigReal,
    rho: &BigReal,
    m: usize,
) -> Result<Sensitivities> {
    let prec = z0.prec();
    let zz = BigReal::from_i64(1, prec) - &(z0 / rho);
    if zz.is_sign_negative() || zz.is_zero() || zz >= 1 {
        return Err(Error::Branch("Z0 must lie in (0, 1)".into()));
    }
    let yv = evaluate_y(&ps.modes, ps.alpha, &zz, m.min(ps.modes.len()));
    let (g, gz, gzz) = physical(&ps.model, &yv, &zz, rho)?;
    let s = &ps.model.gf_rho_power;
    let dz = &(z0 / rho) / rho;
    // G(ρ) = ρ^{-s} f(Z(ρ)), dZ/dρ = z0/ρ²
    let g_rho = &(-(&(s * &g.v) / rho)) + &(&gz.v * &dz);
    let gz_rho = &(-(&(s * &gz.v) / rho)) + &(&gzz.v * &dz);
    // G' = −G_Z/ρ
    let deriv = -(&gz.v / rho);
    let deriv_rho = &(&gz.v / &(rho * rho)) - &(&gz_rho / rho);
    Ok(Sensitivities {
        value: g.v.clone(),
        derivative: deriv,
        d_value_d_rho: g_rho,
        d_derivative_d_rho: deriv_rho,
        d_value_d_c: g.d.clone(),
        d_derivative_d_c: -(&gz.d / rho),
    })
}

/// BST modes from the explicit u_{k,s} double-sum recurrence (W-units, k >= 7),
/// started from u_0..u_6.
pub fn bst_explicit_modes<F: Field>(c6: &F, k_max: usize) -> Vec<Vec<F>> {
    let one = c6.one_like();
    let q = |n: i64, d: i64| one.from_rational_like(&Rational::from((n, d)));
    let mut u: Vec<Vec<F>> = vec![
        vec![q(6, 1)],
        vec![q(-12, 5)],
        vec![q(-7, 25)],
        vec![q(-14, 125)],
        vec![q(-63, 1250)],
        vec![q(-161, 9375)],
        vec![c6.clone(), q(-14, 3125)],
    ];
    let fact = |n: usize| one.from_rational_like(&Rational::from(crate::numeric::factorial(n as u64)));
    let get = |u: &Vec<Vec<F>>, k: usize, l: usize| u[k].get(l).cloned().unwrap_or_else(|| one.zero_like());
    for k in 7..=k_max {
        let smax = k / 6;
        let a = one.from_i64_like(k as i64 - 6);
        let b = one.from_i64_like(k as i64 + 1);
        let powi = |x: &F, e: usize| {
            let mut acc = one.clone();
            for _ in 0..e {
                acc = acc.mul(x);
            }
            acc
        };
        // (−1)^n (ca/a^{n+1} − cb/b^{n+1})/7
        let kernel = |n: usize, ca: i64, cb: i64| {
            let t = one
                .from_i64_like(ca)
                .div(&powi(&a, n + 1))
                .sub(&one.from_i64_like(cb).div(&powi(&b, n + 1)))
                .div(&one.from_i64_like(7));
            if n % 2 == 1 {
                t.neg()
            } else {
                t
            }
        };
        let mut row = Vec::with_capacity(smax + 1);
        for s in 0..=smax {
            let mut acc = get(&u, k - 1, s);
            let mut lin = one.zero_like();
            for l in s..=(k - 1) / 6 {
                let w = kernel(l - s, 9, 16).mul(&fact(l));
                lin = lin.add(&get(&u, k - 1, l).mul(&w));
            }
            acc = acc.add(&lin.div(&fact(s)));
            let mut nl = one.zero_like();
            for j in 1..k {
                for l1 in 0..=j / 6 {
                    for l2 in 0..=(k - j) / 6 {
                        if l1 + l2 < s {
                            continue;
                        }
                        let n = l1 + l2 - s;
                        let w = kernel(n, 1, 1).mul(&fact(l1 + l2));
                        nl = nl.add(&get(&u, j, l1).mul(&get(&u, k - j, l2)).mul(&w));
                    }
                }
            }
            acc = acc.add(&nl.div(&fact(s)));
            row.push(acc);
        }
        u.push(row);
    }
    u
}
