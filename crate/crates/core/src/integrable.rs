//! Boltzmann ν = 1, 2: singularity by quadrature, Δ-series and its inverse,
//! and the closed-form leading asymptotics of t_n.

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::numeric::{beta, integrate, revert_series, BigReal, FormalSeries, Node, Upper};
use crate::recurrences::boltzmann;

#[derive(Clone, Debug)]
pub struct IntegrableSolution {
    pub nu: u32,
    pub zeta_inf: BigReal,
    /// −ζ_∞ (ν = 1) or −ζ_∞³ (ν = 2).
    pub rho: BigReal,
    /// Δ as a series in V^{−1/2−3k} (ν = 1) or L^{−1/2−3k} (ν = 2).
    pub delta_series: FormalSeries,
    /// V (or L) as a series in Δ.
    pub inverse_series: FormalSeries,
}

fn check_nu(nu: u32) -> Result<()> {
    if nu == 1 || nu == 2 {
        Ok(())
    } else {
        Err(Error::Domain(format!("integrable case needs nu in {{1, 2}}, got {nu}")))
    }
}

/// ν = 1: ζ_∞ = (½∫_1^∞ dx/√(x³−1))²;  ν = 2: ζ_∞ = ∫_0^∞ dx/√(4x³+1).
pub fn zeta_infinity(nu: u32, prec: u32) -> Result<BigReal> {
    check_nu(nu)?;
    let wp = prec;
    if nu == 1 {
        let one = BigReal::from_i64(1, wp);
        // x³ − 1 = (x − 1)(x² + x + 1)
        let i = integrate(
            |n: &Node| {
                let x = &n.x;
                (&n.from_lower * &(&(&(x * x) + x) + 1)).sqrt().recip()
            },
            &one,
            Upper::Infinity,
            wp,
        )?;
        let h = &i / 2;
        Ok((&h * &h).with_prec(prec))
    } else {
        let zero = BigReal::zero(wp);
        let i = integrate(|n: &Node| (&(&(&(&n.x * &n.x) * &n.x) * 4) + 1).sqrt().recip(), &zero, Upper::Infinity, wp)?;
        Ok(i.with_prec(prec))
    }
}

/// ν = 2 closed form: (2^{1/3}/6) B(1/6, 1/3).
pub fn zeta_infinity_beta(prec: u32) -> Result<BigReal> {
    let wp = prec + 16;
    let b = beta(&BigReal::from_rational(&Rational::from((1, 6)), wp), &BigReal::from_rational(&Rational::from((1, 3)), wp), wp)?;
    let c = BigReal::from_i64(2, wp).pow_rational(&Rational::from((1, 3)));
    Ok((&(&c * &b) / 6).with_prec(prec))
}

/// −B(1/6, 1/3)³/108.
pub fn rho_nu2_beta(prec: u32) -> Result<BigReal> {
    let wp = prec + 16;
    let b = beta(&BigReal::from_rational(&Rational::from((1, 6)), wp), &BigReal::from_rational(&Rational::from((1, 3)), wp), wp)?;
    Ok((-(&(&(&b * &b) * &b) / 108)).with_prec(prec))
}

fn central(k: u32) -> Integer {
    Integer::from(Integer::binomial_u(2 * k, k))
}

/// Δ from the large-argument expansion of the tail integral, with `order`
/// terms, and its reversion.
pub fn delta_expansions(nu: u32, order: usize) -> Result<(FormalSeries, FormalSeries)> {
    check_nu(nu)?;
    if order < 2 {
        return Err(Error::Domain("order must be at least 2".into()));
    }
    let mut coeffs = Vec::with_capacity(order);
    for k in 0..order as u32 {
        // ∫_V^∞ x^{−1/2−3k−1} dx = V^{−1/2−3k} / (1/2 + 3k)
        let den = Rational::from((6 * k as i64 + 1, 2));
        let c = if nu == 1 {
            // (1 − x^{−3})^{−1/2}
            Rational::from((central(k), Integer::from(Integer::u_pow_u(4, k)))) / den
        } else {
            // ½ x^{−3/2} (1 + x^{−3}/4)^{−1/2}
            let s = if k % 2 == 0 { 1 } else { -1 };
            Rational::from((central(k) * s, Integer::from(Integer::u_pow_u(16, k)) * 2u32)) / den
        };
        coeffs.push(c);
    }
    let delta = FormalSeries::new(Rational::from((-1, 2)), Rational::from(-3), coeffs);
    let inverse = revert_series(&delta)?;
    Ok((delta, inverse))
}

pub fn solve_integrable(nu: u32, order: usize, prec: u32) -> Result<IntegrableSolution> {
    let zeta_inf = zeta_infinity(nu, prec)?;
    let rho = if nu == 1 { -zeta_inf.clone() } else { -(&(&zeta_inf * &zeta_inf) * &zeta_inf) };
    let (delta_series, inverse_series) = delta_expansions(nu, order)?;
    Ok(IntegrableSolution { nu, zeta_inf, rho, delta_series, inverse_series })
}

/// ν = 1: 2(−1)^{n−1}(2n−1)|ρ|^{−n};  ν = 2: 3(−1)^{n−1}(3n−1)|ρ|^{−n}.
pub fn integrable_asymptotics(nu: u32, n: u64, rho: &BigReal) -> Result<BigReal> {
    check_nu(nu)?;
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let k = nu as i64 + 1;
    let v = &rho.abs().powi(-(n as i32)) * (k * (k * n as i64 - 1));
    Ok(if n % 2 == 0 { -v } else { v })
}

/// |t_n / predicted − 1| against the recurrence.
pub fn relative_errors(nu: u32, ns: &[u64], prec: u32) -> Result<Vec<(u64, BigReal)>> {
    let sol_rho = {
        let z = zeta_infinity(nu, prec)?;
        if nu == 1 { -z } else { -(&(&z * &z) * &z) }
    };
    let n_max = ns.iter().copied().max().unwrap_or(1) as usize;
    let t = boltzmann(nu, &Rational::from(1), n_max)?;
    ns.iter()
        .map(|&n| {
            let pred = integrable_asymptotics(nu, n, &sol_rho)?;
            let tn = BigReal::from_rational(&t[n as usize], prec);
            Ok((n, (&(&tn / &pred) - 1).abs()))
        })
        .collect()
}
