//! Sequences of every family, computed from their defining recurrences.

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{binomial, gamma, BigReal, Field, Ring};
use crate::par;

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    BstEquality { d: u32 },
    MarySearch { m: u32 },
    FringeBalanced { t: u32 },
    PhyloAgreement,
    QuadtreeMoments,
    RelaxedKd { beta: BigReal },
    Partition { d: u32, omega: BigReal },
    Boltzmann { nu: u32 },
}

impl Family {
    pub fn bst() -> Family {
        Family::BstEquality { d: 2 }
    }

    /// β = (-1 + sqrt(9 - 8s/k)) / 2
    pub fn relaxed_kd_from_pattern(k: u32, s: u32, prec: u32) -> Result<Family> {
        if k == 0 || s == 0 || s >= k {
            return Err(Error::Domain(format!("need 0 < s < k, got k={k}, s={s}")));
        }
        let q = Rational::from((9 * k as i64 - 8 * s as i64, k as i64));
        let beta = (BigReal::from_rational(&q, prec).sqrt() - 1) / 2;
        Ok(Family::RelaxedKd { beta })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Domain(m));
        match self {
            Family::BstEquality { d } if *d < 2 => bad(format!("d = {d} < 2")),
            Family::MarySearch { m } if *m < 2 => bad(format!("m = {m} < 2")),
            Family::RelaxedKd { beta } if !(beta.to_f64() > 0.0 && beta.to_f64() < 1.0) => {
                bad(format!("beta = {} outside (0,1)", beta.to_decimal(12)))
            }
            Family::Partition { d, omega } if *d < 2 || omega.to_f64() <= 0.0 => {
                bad(format!("partition needs d >= 2 and omega > 0, got d={d}"))
            }
            Family::Boltzmann { nu } if *nu < 1 => bad("nu must be >= 1".into()),
            _ => Ok(()),
        }
    }

    /// Rational-coefficient families have an exact mode.
    pub fn is_exact(&self) -> bool {
        !matches!(
            self,
            Family::QuadtreeMoments | Family::RelaxedKd { .. } | Family::Partition { .. }
        )
    }

    pub fn name(&self) -> String {
        match self {
            Family::BstEquality { d: 2 } => "bst".into(),
            Family::BstEquality { d } => format!("dbst(d={d})"),
            Family::MarySearch { m } => format!("mary(m={m})"),
            Family::FringeBalanced { t } => format!("fringe(t={t})"),
            Family::PhyloAgreement => "phylo".into(),
            Family::QuadtreeMoments => "quadtree".into(),
            Family::RelaxedKd { beta } => format!("kd(beta={})", beta.to_decimal(12)),
            Family::Partition { d, omega } => format!("partition(d={d},omega={})", omega.to_decimal(12)),
            Family::Boltzmann { nu } => format!("boltzmann(nu={nu})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Exact,
    Float(u32),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SeqValues {
    Exact(Vec<Rational>),
    Float(Vec<BigReal>),
}

impl SeqValues {
    pub fn len(&self) -> usize {
        match self {
            SeqValues::Exact(v) => v.len(),
            SeqValues::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_float(&self, prec: u32) -> Vec<BigReal> {
        match self {
            SeqValues::Exact(v) => v.iter().map(|q| BigReal::from_rational(q, prec)).collect(),
            SeqValues::Float(v) => v.clone(),
        }
    }
}

/// Sequence values at indices first_index..=n_max.
#[derive(Clone, Debug)]
pub struct SequenceSlice {
    pub family: Family,
    pub first_index: usize,
    pub values: SeqValues,
    pub n_max: usize,
}

impl SequenceSlice {
    pub fn exact(&self, n: usize) -> Option<&Rational> {
        match &self.values {
            SeqValues::Exact(v) => v.get(n.checked_sub(self.first_index)?),
            SeqValues::Float(_) => None,
        }
    }

    pub fn float(&self, n: usize, prec: u32) -> Option<BigReal> {
        let i = n.checked_sub(self.first_index)?;
        match &self.values {
            SeqValues::Exact(v) => v.get(i).map(|q| BigReal::from_rational(q, prec)),
            SeqValues::Float(v) => v.get(i).cloned(),
        }
    }
}

fn conv_at<F: Field>(a: &[F], b: &[F], n: usize, lo: usize, hi: usize) -> F {
    // Σ_{lo <= j <= hi} a_j b_{n-j}
    if hi < lo {
        return a[0].zero_like();
    }
    par::sum_map(lo..hi + 1, &a[0], |j, acc| acc.add_mul(&a[j], &b[n - j]))
}

/// p_n = n^(-d) Σ_{j<n} p_j p_{n-1-j}
pub fn bst_like<F: Field>(d: u32, p0: F, n_max: usize) -> Vec<F> {
    let mut p = vec![p0];
    for n in 1..=n_max {
        let s = conv_at(&p, &p, n - 1, 0, n - 1);
        let nd = Integer::from(Integer::u_pow_u(n as u32, d));
        let q = Rational::from((1, nd));
        p.push(s.mul(&p[0].from_rational_like(&q)));
    }
    p
}

/// m-ary search trees, q_j = 1 for j <= m-2, via iterated 1-D convolution.
pub fn mary<F: Field>(m: u32, one: &F, n_max: usize) -> Vec<F> {
    let m = m as usize;
    let mut q: Vec<F> = Vec::new();
    // powers[k] holds the coefficients of Q^(k+2)
    let mut powers: Vec<Vec<F>> = vec![Vec::new(); m - 1];
    let extend = |q: &Vec<F>, powers: &mut Vec<Vec<F>>, k: usize| {
        for level in 0..powers.len() {
            let v = if level == 0 {
                conv_at(q, q, k, 0, k)
            } else {
                let prev = &powers[level - 1];
                par::sum_map(0..k + 1, one, |i, acc| acc.add_mul(&q[i], &prev[k - i]))
            };
            powers[level].push(v);
        }
    };
    for n in 0..=n_max {
        let v = if n + 2 <= m {
            one.clone()
        } else {
            let idx = n + 1 - m;
            let s = if m == 1 { q[idx].clone() } else { powers[m - 2][idx].clone() };
            let c = binomial(n as u64, (m - 1) as u64);
            let c2 = Integer::from(&c * &c);
            s.mul(&one.from_rational_like(&Rational::from((1, c2))))
        };
        q.push(v);
        extend(&q, &mut powers, n);
    }
    q
}

/// Median-of-(2t+1) BSTs.
pub fn fringe<F: Field>(t: u32, one: &F, n_max: usize) -> Vec<F> {
    let t = t as u64;
    let mut f: Vec<F> = Vec::new();
    let mut w: Vec<F> = Vec::new();
    for n in 0..=n_max {
        let v = if (n as u64) <= 2 * t {
            one.clone()
        } else {
            let s = conv_at(&w, &w, n - 1, 0, n - 1);
            let c = binomial(n as u64, 2 * t + 1);
            s.mul(&one.from_rational_like(&Rational::from((1, Integer::from(&c * &c)))))
        };
        let b = binomial(n as u64, t);
        w.push(v.mul(&one.from_rational_like(&Rational::from(Integer::from(&b * &b)))));
        f.push(v);
    }
    f
}

/// Tjon-Wu Boltzmann coefficients t_n.
pub fn boltzmann<F: Field>(nu: u32, one: &F, n_max: usize) -> Result<Vec<F>> {
    let nu = nu as i64;
    let a = Rational::from((nu * (nu + 1), nu + 2));
    let mut t = vec![one.clone(), one.clone()];
    for n in 2..=n_max {
        let ni = n as i64;
        // (a n(n-1) - (n+1) + 2) t_n = -Σ_{1<=j<n} t_j t_{n-j}
        let left: Rational = Rational::from(&a * (ni * (ni - 1))) - (ni + 1) + 2;
        if left == 0 {
            return Err(Error::Domain(format!("degenerate Boltzmann coefficient at n = {n}")));
        }
        let s = conv_at(&t, &t, n, 1, n - 1);
        t.push(s.neg().mul(&one.from_rational_like(&left.recip())));
    }
    t.truncate(n_max + 1);
    Ok(t)
}

/// v = (√17 - 3)/2
pub fn quadtree_v(prec: u32) -> BigReal {
    (BigReal::from_i64(17, prec).sqrt() - 3) / 2
}

/// a_m / m! for the quadtree partial match recurrence.
pub fn quadtree_scaled(prec: u32, n_max: usize) -> Result<Vec<BigReal>> {
    let wp = prec + 32;
    let v = quadtree_v(wp);
    let one = BigReal::from_i64(1, wp);
    let g2 = gamma(&(&(&v * 2) + 2), wp)?;
    let g1 = gamma(&(&v + 1), wp)?;
    let a1 = &g2 / &(&(&g1 * &g1) * 2);
    let mut al = vec![one, a1];
    for m in 2..=n_max {
        let s = conv_at(&al, &al, m, 1, m - 1);
        let mi = m as i64;
        let den = &(&v * (mi - 1)) * &(&(&v * (mi + 1)) + 3);
        al.push(&(&s * 2) / &den);
    }
    al.truncate(n_max + 1);
    Ok(al.into_iter().map(|x| x.with_prec(prec)).collect())
}

/// b_1 as printed, with Γ³(β+1) in the denominator.
pub fn relaxed_kd_b1(beta: &BigReal, prec: u32) -> Result<BigReal> {
    let g2 = gamma(&(&(beta * 2) + 2), prec)?;
    let g1 = gamma(&(beta + 1), prec)?;
    let b1p = beta + 1;
    let den = &(&(&(beta * &b1p) * &b1p) * &(&(beta * 2) + 1)) * &(&(&g1 * &g1) * &g1);
    Ok(&(&g2 * 2) / &den)
}

/// b_m / m! for relaxed k-d trees.
pub fn relaxed_kd_scaled(beta: &BigReal, prec: u32, n_max: usize) -> Result<Vec<BigReal>> {
    let wp = prec + 32;
    let beta = beta.with_prec(wp);
    let one = BigReal::from_i64(1, wp);
    let mut bs = vec![one.clone(), relaxed_kd_b1(&beta, wp)?];
    let b1p = &beta + 1;
    for m in 2..=n_max {
        let weighted: Vec<BigReal> = (0..m).map(|j| &bs[j] * &(&(&beta * j as i64) + 1)).collect();
        let s = par::sum_map(1..m, &one, |j, acc| acc.add_mul(&weighted[j], &bs[m - j]));
        let mi = m as i64;
        let den = &(&(&(&beta * (mi + 1)) + 1) * (mi - 1)) / &b1p;
        bs.push(&s / &den);
    }
    bs.truncate(n_max + 1);
    Ok(bs.into_iter().map(|x| x.with_prec(prec)).collect())
}

/// Root λ > 0 of rising(ω,d) / rising(λ+ω,d) = 1/2.
pub fn malthusian_lambda(omega: &BigReal, d: u32, prec: u32) -> Result<BigReal> {
    if omega.to_f64() <= 0.0 || d < 2 {
        return Err(Error::Domain("malthusian_lambda needs omega > 0 and d >= 2".into()));
    }
    let wp = prec + 32;
    let omega = omega.with_prec(wp);
    let target = crate::numeric::rising(&omega, d) * 2;
    let f = |lam: &BigReal| crate::numeric::rising(&(lam + &omega), d) - target.clone();
    // f increasing in λ; f(0) < 0
    let mut lo = BigReal::zero(wp);
    let mut hi = BigReal::from_i64(1, wp);
    while f(&hi).to_f64() < 0.0 {
        hi = &hi * 2;
    }
    // bisection to a few bits, then Newton
    for _ in 0..40 {
        let mid = (&lo + &hi) / 2;
        if f(&mid).to_f64() < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = (&lo + &hi) / 2;
    for _ in 0..64 {
        let fx = f(&x);
        // derivative of rising(x+ω, d) = rising * Σ 1/(x+ω+i)
        let r = crate::numeric::rising(&(&x + &omega), d);
        let mut s = BigReal::zero(wp);
        for i in 0..d {
            s += &(&(&x + &omega) + i as i64).recip();
        }
        let step = &fx / &(&r * &s);
        x = &x - &step;
        if step.is_zero() || step.log2_abs() < x.log2_abs() - wp as f64 + 4.0 {
            break;
        }
    }
    Ok(x.with_prec(prec))
}

/// Moments h_m from the printed recurrence with Γ(jλ+ω) tables.
pub fn partition_moments(d: u32, omega: &BigReal, prec: u32, n_max: usize) -> Result<Vec<BigReal>> {
    let wp = prec + 32;
    let omega = omega.with_prec(wp);
    let lam = malthusian_lambda(&omega, d, wp)?;
    let gam: Vec<BigReal> =
        par::map_collect(0..n_max + 1, |j| gamma(&(&(&lam * j as i64) + &omega), wp))
            .into_iter()
            .collect::<Result<_>>()?;
    let g_omega = gamma(&omega, wp)?;
    let g_d_omega = gamma(&(&omega + d as i64), wp)?;
    let mut h = vec![BigReal::from_i64(1, wp), BigReal::from_i64(1, wp)];
    // binomials as floats, built row by row
    let mut row = vec![BigReal::from_i64(1, wp)];
    row.push(BigReal::from_i64(1, wp));
    for m in 2..=n_max {
        let mut next = vec![BigReal::from_i64(1, wp)];
        for j in 1..m {
            next.push(&row[j - 1] + &row[j]);
        }
        next.push(BigReal::from_i64(1, wp));
        row = next;
        let top = gamma(&(&(&lam * m as i64) + &(&omega + d as i64)), wp)?;
        let pre = &g_d_omega / &(&(&g_omega * &g_omega) * &top);
        let terms: Vec<BigReal> = (1..m).map(|j| &(&row[j] * &gam[j]) * &h[j]).collect();
        let s = par::sum_map(1..m, &g_omega, |j, acc| {
            acc.add_mul(&terms[j - 1], &(&gam[m - j] * &h[m - j]))
        });
        // the j = 0 and j = m terms carry h_m itself
        let self_coef = &(&pre * 2) * &(&g_omega * &gam[m]);
        let one = BigReal::from_i64(1, wp);
        h.push(&(&pre * &s) / &(&one - &self_coef));
    }
    h.truncate(n_max + 1);
    Ok(h.into_iter().map(|x| x.with_prec(prec)).collect())
}

/// Taylor coefficients g_m = h_m Γ(mλ+ω) / (m! Γ(ω)) of h(z).
pub fn partition_scaled(d: u32, omega: &BigReal, prec: u32, n_max: usize) -> Result<Vec<BigReal>> {
    let wp = prec + 32;
    let omega = omega.with_prec(wp);
    let lam = malthusian_lambda(&omega, d, wp)?;
    let r0 = crate::numeric::rising(&omega, d);
    let one = BigReal::from_i64(1, wp);
    let g1 = (&crate::numeric::ln_gamma(&(&lam + &omega), wp)? - &crate::numeric::ln_gamma(&omega, wp)?).exp();
    let mut g = vec![one.clone(), g1];
    for m in 2..=n_max {
        let rm = &r0 / &crate::numeric::rising(&(&(&lam * m as i64) + &omega), d);
        let s = conv_at(&g, &g, m, 1, m - 1);
        g.push(&(&rm * &s) / &(&one - &(&rm * 2)));
    }
    g.truncate(n_max + 1);
    Ok(g.into_iter().map(|x| x.with_prec(prec)).collect())
}

fn generic<F: Field>(family: &Family, one: &F, n_max: usize) -> Result<(usize, Vec<F>)> {
    Ok(match family {
        Family::BstEquality { d } => (0, bst_like(*d, one.clone(), n_max)),
        Family::MarySearch { m } => (0, mary(*m, one, n_max)),
        Family::FringeBalanced { t } => (0, fringe(*t, one, n_max)),
        Family::PhyloAgreement => {
            // q_{n+1} = p_n / 2 with p_0 = 2
            let p = bst_like(2, one.mul_i64(2), n_max.saturating_sub(1));
            let half = one.from_rational_like(&Rational::from((1, 2)));
            (1, p.iter().map(|x| x.mul(&half)).collect())
        }
        Family::Boltzmann { nu } => (0, boltzmann(*nu, one, n_max)?),
        _ => return Err(Error::Unsupported("no rational recurrence for this family".into())),
    })
}

/// Values of the family's sequence for n <= n_max.
pub fn sequence(family: &Family, n_max: usize, mode: Mode) -> Result<SequenceSlice> {
    family.validate()?;
    let (first_index, values) = match mode {
        Mode::Exact => {
            if !family.is_exact() {
                return Err(Error::Unsupported(format!(
                    "exact mode unavailable for {}",
                    family.name()
                )));
            }
            let (fi, v) = generic(family, &Rational::from(1), n_max)?;
            (fi, SeqValues::Exact(v))
        }
        Mode::Float(prec) => {
            if family.is_exact() {
                let (fi, v) = generic(family, &BigReal::from_i64(1, prec), n_max)?;
                (fi, SeqValues::Float(v))
            } else {
                let v = match family {
                    Family::QuadtreeMoments => {
                        let wp = prec + 32;
                        let s = quadtree_scaled(wp, n_max)?;
                        let mut fact = BigReal::from_i64(1, wp);
                        let mut out = Vec::with_capacity(s.len());
                        for (m, x) in s.iter().enumerate() {
                            if m > 0 {
                                fact = &fact * m as i64;
                            }
                            out.push((x * &fact).with_prec(prec));
                        }
                        out
                    }
                    Family::RelaxedKd { beta } => {
                        let wp = prec + 32;
                        let s = relaxed_kd_scaled(beta, wp, n_max)?;
                        let mut fact = BigReal::from_i64(1, wp);
                        let mut out = Vec::with_capacity(s.len());
                        for (m, x) in s.iter().enumerate() {
                            if m > 0 {
                                fact = &fact * m as i64;
                            }
                            out.push((x * &fact).with_prec(prec));
                        }
                        out
                    }
                    Family::Partition { d, omega } => partition_moments(*d, omega, prec, n_max)?,
                    _ => unreachable!(),
                };
                (0, SeqValues::Float(v))
            }
        }
    };
    Ok(SequenceSlice { family: family.clone(), first_index, values, n_max })
}

/// Taylor coefficients of the generating function governed by the family's ODE.
pub fn gf_coefficients(family: &Family, n_max: usize, prec: u32) -> Result<Vec<BigReal>> {
    family.validate()?;
    let one = BigReal::from_i64(1, prec);
    Ok(match family {
        Family::PhyloAgreement => bst_like(2, BigReal::from_i64(2, prec), n_max),
        Family::Boltzmann { nu } => alternate_shift(boltzmann(*nu, &one, n_max + 1)?),
        Family::QuadtreeMoments => quadtree_scaled(prec, n_max)?,
        Family::RelaxedKd { beta } => relaxed_kd_scaled(beta, prec, n_max)?,
        Family::Partition { d: 2, omega } => partition_scaled(2, omega, prec, n_max)?,
        Family::Partition { .. } => {
            return Err(Error::Unsupported("generating function for partition d > 2".into()))
        }
        _ => generic(family, &one, n_max)?.1,
    })
}

/// Exact Taylor coefficients for rational families.
pub fn gf_coefficients_exact(family: &Family, n_max: usize) -> Result<Vec<Rational>> {
    family.validate()?;
    let one = Rational::from(1);
    Ok(match family {
        Family::PhyloAgreement => bst_like(2, Rational::from(2), n_max),
        Family::Boltzmann { nu } => alternate_shift(boltzmann(*nu, &one, n_max + 1)?),
        f if f.is_exact() => generic(f, &one, n_max)?.1,
        _ => return Err(Error::Unsupported("exact coefficients need a rational family".into())),
    })
}

// v_j = (-1)^j t_{j+1}
fn alternate_shift<F: Field>(t: Vec<F>) -> Vec<F> {
    t.iter().skip(1).enumerate().map(|(j, x)| if j % 2 == 0 { x.clone() } else { x.neg() }).collect()
}

/// Table 1 bound: ϱ = min_{j<=n0} (c (j+1) / p_j)^(1/(j+1)), c = 6 n0/(n0+2).
pub fn induction_rho(p: &[Rational], n0: usize) -> (Rational, Vec<Rational>) {
    let c = Rational::from((6 * n0 as i64, n0 as i64 + 2));
    let r: Vec<Rational> = (0..=n0).map(|j| Rational::from(&c * (j as i64 + 1)) / &p[j]).collect();
    (c, r)
}

/// Partial sums P_N(z0), P_N'(z0) and a bound on the omitted tail of each.
#[derive(Clone, Debug)]
pub struct PartialSum {
    pub value: BigReal,
    pub derivative: BigReal,
    pub tail_bound: BigReal,
    pub derivative_tail_bound: BigReal,
}

/// Asymptotic template g_j ≈ ρ^(-shift-j) · poly(j) used for tail bounds.
#[derive(Clone, Debug)]
pub struct TailModel {
    pub rho: BigReal,
    pub shift: BigReal,
    /// poly(j) = Σ coeffs[i] j^i
    pub poly: Vec<BigReal>,
    pub safety: i64,
}

impl TailModel {
    /// BST: p_j ≈ ρ^(-j-1)(6j + 18/5).
    pub fn bst(rho: &BigReal) -> TailModel {
        let prec = rho.prec();
        TailModel {
            rho: rho.clone(),
            shift: BigReal::from_i64(1, prec),
            poly: vec![BigReal::from_rational(&Rational::from((18, 5)), prec), BigReal::from_i64(6, prec)],
            safety: 2,
        }
    }

    fn poly_at(&self, j: usize) -> BigReal {
        let x = BigReal::from_i64(j as i64, self.rho.prec());
        let mut acc = BigReal::zero(self.rho.prec());
        for c in self.poly.iter().rev() {
            acc = &(&acc * &x) + c;
        }
        acc.abs()
    }

    /// Bounds on Σ_{j>=N} g_j z0^j and Σ_{j>=N} j g_j z0^(j-1).
    pub fn bounds(&self, z0: &BigReal, n: usize) -> Result<(BigReal, BigReal)> {
        let prec = self.rho.prec().max(z0.prec());
        let x = z0 / &self.rho;
        if x.to_f64() >= 1.0 {
            return Err(Error::Divergence(format!(
                "z0 = {} is not inside the disc of radius {}",
                z0.to_decimal(12),
                self.rho.to_decimal(12)
            )));
        }
        if z0.is_zero() {
            return Ok((BigReal::zero(prec), BigReal::zero(prec)));
        }
        let scale = self.rho.powf(&-&self.shift);
        let mut xp = x.powi(n as i32);
        let mut s0 = BigReal::zero(prec);
        let mut s1 = BigReal::zero(prec);
        let mut j = n;
        loop {
            let t = &self.poly_at(j) * &xp;
            s0 += &t;
            let t1 = &t * j as i64;
            s1 += &t1;
            if t1.log2_abs() < s1.log2_abs() - prec as f64 - 8.0 || j > n + 200_000 {
                break;
            }
            xp = &xp * &x;
            j += 1;
        }
        let b0 = &(&s0 * &scale) * self.safety;
        let b1 = &(&(&s1 * &scale) * self.safety) / z0;
        Ok((b0, b1))
    }
}

/// BST closed-form tail 6 (z0/ρ)^N (N + (3ρ+2z0)/(5(ρ-z0))) / (ρ - z0).
pub fn bst_tail_formula(z0: &BigReal, rho: &BigReal, n: usize) -> BigReal {
    let gap = rho - z0;
    let x = z0 / rho;
    let inner = &BigReal::from_i64(n as i64, rho.prec()) + &(&(&(rho * 3) + &(z0 * 2)) / &(&gap * 5));
    &(&(&x.powi(n as i32) * 6) * &inner) / &gap
}

pub fn partial_sum(coeffs: &[BigReal], z0: &BigReal, n: usize, tail: &TailModel) -> Result<PartialSum> {
    if coeffs.len() < n {
        return Err(Error::Domain(format!("need {n} coefficients, have {}", coeffs.len())));
    }
    let prec = z0.prec();
    let mut value = BigReal::zero(prec);
    let mut derivative = BigReal::zero(prec);
    for j in (0..n).rev() {
        value = &(&value * z0) + &coeffs[j];
        if j >= 1 {
            derivative = &(&derivative * z0) + &(&coeffs[j] * j as i64);
        }
    }
    let (tail_bound, derivative_tail_bound) = tail.bounds(z0, n)?;
    Ok(PartialSum { value, derivative, tail_bound, derivative_tail_bound })
}
