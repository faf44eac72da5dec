//! Locating the singularity ρ and the free constant c_r by matching the
//! Taylor side P(z) with the psi-series side at an interior point z0.

use num_complex::Complex64;
use rug::{Integer, Rational};

use crate::ars::resonance_polynomial;
use crate::error::{Error, Result};
use crate::numeric::{BigReal, Dual};
use crate::ode_models::{model_for, OdeModel};
use crate::psi_engine::{evaluate_psi, sensitivities, solve_modes, PsiSeries};
use crate::recurrences::{gf_coefficients, gf_coefficients_exact, induction_rho, partial_sum, Family, TailModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketMethod {
    /// Positivity induction p_n ≤ c(n+1)ϱ^{−n−1}.
    Induction,
    /// Extrapolated coefficient ratios widened by 10^{−3}.
    Ratio,
}

#[derive(Clone, Debug)]
pub struct RhoBracket {
    pub n0: usize,
    pub lower: Option<BigReal>,
    pub upper: BigReal,
    /// ϱ truncated to four decimals, exact (induction only).
    pub truncated: Option<Rational>,
    pub argmin: Option<usize>,
    pub method: BracketMethod,
}

/// floor(10^d · x^{1/k}) / 10^d, exactly.
pub fn truncate_root(x: &Rational, k: u32, digits: u32) -> Rational {
    let ten_d = Integer::from(Integer::u_pow_u(10, digits));
    let s = Integer::from(Integer::u_pow_u(10, digits * k));
    let y = Rational::from(x * &s);
    let fl = y.floor().into_numer_denom().0;
    Rational::from((fl.root(k), ten_d))
}

/// Upper bound ϱ for ρ. BST (d = 2) uses the induction bound; other families
/// fall back to extrapolated ratios.
pub fn bracket_rho(family: &Family, n0: usize, prec: u32) -> Result<RhoBracket> {
    if n0 == 0 {
        return Err(Error::Domain("n0 must be at least 1".into()));
    }
    if *family == Family::bst() {
        let p = gf_coefficients_exact(family, n0)?;
        let (_, vals) = induction_rho(&p, n0);
        let mut best: Option<(BigReal, usize)> = None;
        let mut trunc: Option<Rational> = None;
        for (j, x) in vals.iter().enumerate() {
            let e = Rational::from((1, j as i64 + 1));
            let v = BigReal::from_rational(x, prec).pow_rational(&e);
            if best.as_ref().map_or(true, |(b, _)| v < *b) {
                best = Some((v, j));
            }
            let t = truncate_root(x, j as u32 + 1, 4);
            if trunc.as_ref().map_or(true, |b| t < *b) {
                trunc = Some(t);
            }
        }
        let (upper, j) = best.expect("n0 >= 1");
        return Ok(RhoBracket {
            n0,
            lower: None,
            upper,
            truncated: trunc,
            argmin: Some(j),
            method: BracketMethod::Induction,
        });
    }
    let n = n0.max(400);
    let g = gf_coefficients(family, n + 1, prec)?;
    let r = ratio_extrapolate(&g, n - 1, 6)?;
    let w = BigReal::from_rational(&Rational::from((1, 1000)), prec);
    let one = BigReal::from_i64(1, prec);
    Ok(RhoBracket {
        n0,
        lower: Some(&r * &(&one - &w)),
        upper: &r * &(&one + &w),
        truncated: None,
        argmin: None,
        method: BracketMethod::Ratio,
    })
}

/// ρ from g_j/g_{j+1}, j = n−order..n, extrapolated to j = ∞ in 1/j (Neville).
pub fn ratio_extrapolate(g: &[BigReal], n: usize, order: usize) -> Result<BigReal> {
    if n + 1 >= g.len() || n < order + 1 {
        return Err(Error::Domain("not enough coefficients for extrapolation".into()));
    }
    let prec = g[n].prec();
    let xs: Vec<BigReal> = (n - order..=n).map(|j| BigReal::from_i64(1, prec).div_i64(j as i64)).collect();
    let mut ys: Vec<BigReal> = (n - order..=n).map(|j| &g[j] / &g[j + 1]).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return Err(Error::Domain("zero coefficient in ratio sequence".into()));
    }
    for level in 1..=order {
        for i in (level..=order).rev() {
            // value at x = 0 of the interpolant through points i−level..i
            let num = &(&xs[i] * &ys[i - 1]) - &(&xs[i - level] * &ys[i]);
            ys[i] = &num / &(&xs[i] - &xs[i - level]);
        }
    }
    Ok(ys[order].clone())
}

fn best_z0_fn(x: &BigReal, inv_beta: &BigReal) -> BigReal {
    let one = BigReal::from_i64(1, x.prec());
    let om = &one - x;
    let lhs = x.powf(inv_beta);
    let rhs = &(&one - &om.ln()).abs() * &om;
    &lhs - &rhs
}

/// Root in (1/2, 1) of x^{1/β} = |1 − log(1−x)|(1−x), by bisection.
pub fn best_z0_ratio(beta: &BigReal) -> Result<BigReal> {
    let prec = beta.prec();
    if !(beta.to_f64() > 0.0 && beta.to_f64() < 1.0 + 1e-12) {
        return Err(Error::Domain("beta must lie in (0, 1]".into()));
    }
    let inv = beta.recip();
    let mut lo = BigReal::from_rational(&Rational::from((1, 2)), prec);
    let mut hi = BigReal::from_i64(1, prec) - BigReal::from_f64(1e-30, prec);
    let flo = best_z0_fn(&lo, &inv);
    let fhi = best_z0_fn(&hi, &inv);
    if flo.is_sign_negative() == fhi.is_sign_negative() {
        return Err(Error::Internal("best-z0 bracket has no sign change".into()));
    }
    for _ in 0..prec + 8 {
        let mid = (&lo + &hi).div_i64(2);
        if best_z0_fn(&mid, &inv).is_sign_negative() == flo.is_sign_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((&lo + &hi).div_i64(2))
}

/// Sign changes of the best-z0 function on a uniform grid over (1/2, 1).
pub fn best_z0_sign_changes(beta: &BigReal, points: usize) -> usize {
    let prec = beta.prec();
    let inv = beta.recip();
    let mut last: Option<bool> = None;
    let mut n = 0;
    for i in 1..points {
        let x = BigReal::from_rational(&Rational::from((points as i64 + i as i64, 2 * points as i64)), prec);
        let s = best_z0_fn(&x, &inv).is_sign_negative();
        if last.map_or(false, |l| l != s) {
            n += 1;
        }
        last = Some(s);
    }
    n
}

pub fn choose_z0(rho_est: &BigReal, beta: &BigReal) -> Result<BigReal> {
    if rho_est.is_sign_negative() || rho_est.is_zero() {
        return Err(Error::Domain("rho estimate must be positive".into()));
    }
    Ok(&best_z0_ratio(beta)? * rho_est)
}

#[derive(Clone, Debug)]
pub struct ConnectOptions {
    pub target_digits: u32,
    pub beta_split: Rational,
    pub prec: u32,
    pub max_terms: usize,
    pub max_iter: usize,
    /// Overrides the best-z0 choice of z0/ρ.
    pub z0_ratio: Option<BigReal>,
    pub rho_guess: Option<BigReal>,
}

impl Default for ConnectOptions {
    fn default() -> Self {
        ConnectOptions {
            target_digits: 24,
            beta_split: Rational::from((1, 2)),
            prec: 512,
            max_terms: 1500,
            max_iter: 60,
            z0_ratio: None,
            rho_guess: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConnectionSolution {
    pub family: String,
    pub rho: BigReal,
    /// Free constant in the ρ-free normalization W = ρ^σ G (None without a resonance).
    pub c_r: Option<BigReal>,
    /// c_r ρ^{−σ}: the same constant in the scale of the generating function.
    pub c_r_raw: Option<BigReal>,
    pub resonance: Option<usize>,
    pub z0: BigReal,
    pub n_terms: usize,
    pub m_modes: usize,
    pub residuals: [BigReal; 2],
    pub tail_bounds: [BigReal; 2],
    pub rho_error: BigReal,
    pub c_error: Option<BigReal>,
    pub iterations: usize,
    /// Complex resonances with positive real part; when present the matching
    /// carries an O(Z0^{Re r}) model error not covered by the tail bounds.
    pub oscillatory_resonances: Vec<Complex64>,
}

struct Side {
    value: BigReal,
    derivative: BigReal,
    tail: [BigReal; 2],
}

fn taylor_side(g: &[BigReal], z0: &BigReal, rho: &BigReal, n: usize, alpha: i64) -> Result<Side> {
    let prec = z0.prec();
    // g_j ≈ K ρ^{−j} (j+1)^{α−1}
    let mut k = BigReal::zero(prec);
    let a1 = (alpha - 1).max(0) as i32;
    for j in n / 2..n {
        let v = &(&g[j].abs() * &rho.abs().powi(j as i32)) / &BigReal::from_i64(j as i64 + 1, prec).powi(a1);
        k = k.max(&v);
    }
    let mut poly = vec![BigReal::from_i64(1, prec)];
    for _ in 0..a1 {
        let mut next = vec![BigReal::zero(prec); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i] += c;
            next[i + 1] += c;
        }
        poly = next;
    }
    let tm = TailModel { rho: rho.abs(), shift: BigReal::zero(prec), poly: poly.iter().map(|c| c * &k).collect(), safety: 2 };
    let ps = partial_sum(g, z0, n, &tm)?;
    Ok(Side { value: ps.value, derivative: ps.derivative, tail: [ps.tail_bound, ps.derivative_tail_bound] })
}

fn modes_needed(q: f64, digits: u32, r: usize) -> usize {
    let m = ((digits as f64 + 4.0) * std::f64::consts::LN_10 / -q.ln()).ceil() as usize + 12;
    m.max(r + 4)
}

fn terms_needed(x: f64, digits: u32, alpha: i64) -> usize {
    let base = (digits as f64 + 4.0) * std::f64::consts::LN_10;
    let mut n = (base / -x.ln()).ceil();
    for _ in 0..4 {
        n = ((base + alpha as f64 * n.max(2.0).ln()) / -x.ln()).ceil();
    }
    n as usize + 20
}

/// Solve P_N(z0) = G(z0), P_N'(z0) = G'(z0) for (ρ, c_r) by damped Newton.
pub fn solve_connection(family: &Family, opts: &ConnectOptions) -> Result<ConnectionSolution> {
    let prec = opts.prec;
    let model = model_for(family, prec)?;
    let one = BigReal::from_i64(1, prec);
    let mut n_coeffs = 400.min(opts.max_terms);
    let mut g = gf_coefficients(family, n_coeffs, prec)?;
    let mut rho = match &opts.rho_guess {
        Some(r) => r.with_prec(prec),
        None => ratio_extrapolate(&g, n_coeffs - 2, 6)?,
    };
    if rho.is_sign_negative() {
        return Err(Error::Domain(format!("{}: negative ρ; use the sign-transformed series", family.name())));
    }
    let beta = BigReal::from_rational(&opts.beta_split, prec);
    let x = match &opts.z0_ratio {
        Some(x) => x.with_prec(prec),
        None => best_z0_ratio(&beta)?,
    };
    let z0 = &x * &rho;
    let res = resonance_polynomial(family)?;
    let resonance = res.least().map(|r| r as usize);
    let two_unknowns = resonance.is_some();
    let mut c = BigReal::zero(prec);
    let mut iterations = 0;
    let mut stages: Vec<u32> = vec![12];
    while *stages.last().unwrap() < opts.target_digits + 6 {
        let next = (stages.last().unwrap() + 12).min(opts.target_digits + 6);
        stages.push(next);
    }
    let mut last = None;
    for &digits in &stages {
        let xr = (&z0 / &rho).to_f64();
        let zz = 1.0 - xr;
        let q_u = (1.0 - zz.ln()).abs() * zz;
        let m = modes_needed(q_u, digits, resonance.unwrap_or(0));
        let n = terms_needed(xr, digits, model.alpha).min(opts.max_terms);
        if n + 1 > n_coeffs {
            n_coeffs = (n + 1).max(n_coeffs);
            g = gf_coefficients(family, n_coeffs, prec)?;
        }
        let tol = BigReal::from_f64(10f64.powi(-(digits as i32)), prec);
        let mut converged = false;
        for _ in 0..opts.max_iter {
            iterations += 1;
            let ev = Eval::at(&model, &g, &z0, &rho, &c, m, n)?;
            let (d_rho, d_c) = ev.newton_step(two_unknowns)?;
            // damping on residual growth
            let f0 = ev.norm();
            let mut t = one.clone();
            let mut accepted = None;
            for _ in 0..20 {
                let r1 = &rho + &(&d_rho * &t);
                let c1 = &c + &(&d_c * &t);
                if r1.is_sign_negative() || (&z0 / &r1).to_f64() >= 1.0 {
                    t = t.div_i64(2);
                    continue;
                }
                let e1 = Eval::at(&model, &g, &z0, &r1, &c1, m, n)?;
                if e1.norm() <= f0 || t.to_f64() < 1e-5 {
                    accepted = Some((r1, c1, e1));
                    break;
                }
                t = t.div_i64(2);
            }
            let (r1, c1, e1) = accepted.ok_or_else(|| Error::Convergence("damping failed".into()))?;
            let step_rho = (&r1 - &rho).abs() / rho.abs();
            let cs = c.abs().max(&BigReal::from_f64(1e-30, prec));
            let step_c = (&c1 - &c).abs() / cs;
            rho = r1;
            c = c1;
            last = Some(e1);
            if step_rho < tol && (!two_unknowns || step_c < tol) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence(format!(
                "{}: Newton did not converge at {digits} digits (rho = {})",
                family.name(),
                rho.to_decimal(20)
            )));
        }
    }
    let ev = last.expect("at least one iteration");
    let (err_rho, err_c) = ev.error_estimate(two_unknowns)?;
    let w0 = model.w0_value(prec)?;
    let c_w = &c * &w0;
    let c_raw = &c_w * &rho.powf(&-model.sigma.clone());
    Ok(ConnectionSolution {
        family: family.name(),
        rho,
        c_r: two_unknowns.then(|| c_w.clone()),
        c_r_raw: two_unknowns.then_some(c_raw),
        resonance,
        z0,
        n_terms: ev.n,
        m_modes: ev.m,
        residuals: [ev.f[0].clone(), ev.f[1].clone()],
        tail_bounds: [ev.tail[0].clone(), ev.tail[1].clone()],
        rho_error: err_rho,
        c_error: two_unknowns.then(|| &err_c * &w0),
        iterations,
        oscillatory_resonances: res.oscillatory(),
    })
}

struct Eval {
    f: [BigReal; 2],
    /// ∂F/∂(ρ, c)
    jac: [[BigReal; 2]; 2],
    tail: [BigReal; 2],
    scale: [BigReal; 2],
    m: usize,
    n: usize,
}

impl Eval {
    fn at(model: &OdeModel<BigReal>, g: &[BigReal], z0: &BigReal, rho: &BigReal, c: &BigReal, m: usize, n: usize) -> Result<Eval> {
        let prec = z0.prec();
        let free = Dual::new(c.clone(), BigReal::from_i64(1, prec));
        let ps = solve_modes(model, &free, m)?;
        let s = sensitivities(&ps, z0, rho, m)?;
        let real = real_part(&ps);
        let ev = evaluate_psi(&real, z0, rho, m)?;
        let side = taylor_side(g, z0, rho, n, model.alpha)?;
        let f = [&side.value - &s.value, &side.derivative - &s.derivative];
        let jac = [
            [-s.d_value_d_rho.clone(), -s.d_value_d_c.clone()],
            [-s.d_derivative_d_rho.clone(), -s.d_derivative_d_c.clone()],
        ];
        let tail = [&side.tail[0] + &ev.tail_bound, &side.tail[1] + &ev.derivative_tail_bound];
        let scale = [side.value.abs(), side.derivative.abs()];
        Ok(Eval { f, jac, tail, scale, m, n })
    }

    fn norm(&self) -> BigReal {
        (&self.f[0] / &self.scale[0]).abs().max(&(&self.f[1] / &self.scale[1]).abs())
    }

    fn solve(&self, rhs: [&BigReal; 2], two: bool) -> Result<(BigReal, BigReal)> {
        let prec = self.f[0].prec();
        if !two {
            let d = &self.jac[0][0];
            if d.is_zero() {
                return Err(Error::Convergence("singular Jacobian".into()));
            }
            return Ok((rhs[0] / d, BigReal::zero(prec)));
        }
        let j = &self.jac;
        let det = &(&j[0][0] * &j[1][1]) - &(&j[0][1] * &j[1][0]);
        let size = (&j[0][0] * &j[1][1]).abs().max(&(&j[0][1] * &j[1][0]).abs());
        if det.is_zero() || (&det / &size).abs().log2_abs() < -(prec as f64) / 2.0 {
            return Err(Error::Precision("ill-conditioned Jacobian".into()));
        }
        let a = &(&(&j[1][1] * rhs[0]) - &(&j[0][1] * rhs[1])) / &det;
        let b = &(&(&j[0][0] * rhs[1]) - &(&j[1][0] * rhs[0])) / &det;
        Ok((a, b))
    }

    fn newton_step(&self, two: bool) -> Result<(BigReal, BigReal)> {
        let (a, b) = self.solve([&-&self.f[0], &-&self.f[1]], two)?;
        Ok((a, b))
    }

    /// Propagate tail bounds through the inverse Jacobian.
    fn error_estimate(&self, two: bool) -> Result<(BigReal, BigReal)> {
        let prec = self.f[0].prec();
        if !two {
            let (a, _) = self.solve([&self.tail[0], &self.tail[0]], false)?;
            return Ok((a.abs(), BigReal::zero(prec)));
        }
        let j = &self.jac;
        let det = &(&j[0][0] * &j[1][1]) - &(&j[0][1] * &j[1][0]);
        let a = &(&(&j[1][1].abs() * &self.tail[0]) + &(&j[0][1].abs() * &self.tail[1])) / &det.abs();
        let b = &(&(&j[0][0].abs() * &self.tail[1]) + &(&j[1][0].abs() * &self.tail[0])) / &det.abs();
        Ok((a, b))
    }
}

fn real_part(ps: &PsiSeries<BigReal, Dual<BigReal>>) -> PsiSeries<BigReal, BigReal> {
    PsiSeries {
        model: ps.model.clone(),
        alpha: ps.alpha,
        resonance: ps.resonance,
        shadowed: ps.shadowed.clone(),
        compatible: ps.compatible,
        resonance_residual: ps.resonance_residual.as_ref().map(|r| r.map(|x| x.v.clone())),
        free_constant: ps.free_constant.v.clone(),
        modes: ps.modes.iter().map(|m| m.map(|x| x.v.clone())).collect(),
    }
}
