//! Family ODEs written in θ = z d/dz form, their ρ-free normalization around
//! Z = 1 − z/ρ, and the first-order mode systems.
//!
//! A model is Σ_t coef_t z^{e_t} Π_i L_{t,i}(θ) G = 0 with every term linear
//! or of a single degree M in G. Writing G = ρ^{-σ} w0 Y(Z) with e_t = σ(m_t − 1)
//! removes ρ; z^{e_t} becomes (1 − Z)^{e_t}.

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::numeric::{factorial, rising, BigReal, Field, QNum, QuadField, RatPoly, Ring};
use crate::recurrences::{malthusian_lambda, quadtree_v, Family};

/// One summand coef · z^{z_power} · Π L_i(θ)G; `factors[i][j]` multiplies θ^j.
#[derive(Clone, Debug)]
pub struct OdeTerm<F> {
    pub coef: F,
    pub z_power: F,
    pub factors: Vec<Vec<F>>,
}

impl<F: Field> OdeTerm<F> {
    fn new(coef: F, z_power: F, factors: Vec<Vec<F>>) -> Self {
        let factors = factors.into_iter().map(trim).collect();
        OdeTerm { coef, z_power, factors }
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn theta_degree(&self, i: usize) -> usize {
        self.factors[i].len() - 1
    }

    fn lead(&self, i: usize) -> &F {
        &self.factors[i][self.factors[i].len() - 1]
    }
}

fn trim<F: Field>(mut p: Vec<F>) -> Vec<F> {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Coefficient product of two polynomials.
pub fn poly_mul<R: Ring>(a: &[R], b: &[R]) -> Vec<R> {
    let mut out = vec![a[0].zero_like(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j].add_mul(x, y);
        }
    }
    out
}

fn poly_add<R: Ring>(a: &[R], b: &[R]) -> Vec<R> {
    let n = a.len().max(b.len());
    let z = a[0].zero_like();
    (0..n).map(|i| a.get(i).unwrap_or(&z).add(b.get(i).unwrap_or(&z))).collect()
}

/// θ(θ−1)…(θ−s+1)
pub fn falling_theta<F: Field>(s: u32, one: &F) -> Vec<F> {
    let mut p = vec![one.clone()];
    for i in 0..s as i64 {
        p = poly_mul(&p, &[one.from_i64_like(-i), one.clone()]);
    }
    p
}

#[derive(Clone, Debug)]
pub struct OdeModel<F> {
    pub name: String,
    pub terms: Vec<OdeTerm<F>>,
    /// W = ρ^σ G is ρ-free.
    pub sigma: F,
    /// Nonlinear degree M.
    pub degree: usize,
    /// Leading order: Y ~ Z^{−α}.
    pub alpha: i64,
    /// w0^{M−1} from the dominant balance.
    pub w0_power: F,
    /// Generating function = ρ^{−gf_rho_power} (1 − Z)^{gf_twist} w0 Y.
    pub gf_twist: F,
    pub gf_rho_power: F,
}

impl<F: Field> OdeModel<F> {
    pub fn new(name: &str, terms: Vec<OdeTerm<F>>, sigma: F, gf_twist: F, gf_rho_power: F) -> Result<Self> {
        let degree = terms.iter().map(|t| t.degree()).max().unwrap_or(0);
        if degree < 2 {
            return Err(Error::Model(format!("{name}: no nonlinear term")));
        }
        for t in &terms {
            let m = t.degree();
            if m != 1 && m != degree {
                return Err(Error::Model(format!("{name}: mixed nonlinear degrees")));
            }
            let want = sigma.mul(&sigma.from_i64_like(m as i64 - 1));
            if t.z_power != want {
                return Err(Error::Model(format!("{name}: normalization leaves ρ in a term")));
            }
        }
        let p_lin = terms.iter().filter(|t| t.degree() == 1).map(|t| t.theta_degree(0)).max();
        let p_nl = terms
            .iter()
            .filter(|t| t.degree() == degree)
            .map(|t| (0..degree).map(|i| t.theta_degree(i)).sum::<usize>())
            .max();
        let (p_lin, p_nl) = match (p_lin, p_nl) {
            (Some(a), Some(b)) => (a as i64, b as i64),
            _ => return Err(Error::Model(format!("{name}: no dominant balance"))),
        };
        let num = p_lin - p_nl;
        let den = degree as i64 - 1;
        if num <= 0 || num % den != 0 {
            return Err(Error::Model(format!("{name}: non-integer leading order")));
        }
        let alpha = num / den;
        let one = sigma.one_like();
        let mut model = OdeModel {
            name: name.to_string(),
            terms,
            sigma,
            degree,
            alpha,
            w0_power: one.clone(),
            gf_twist,
            gf_rho_power,
        };
        let e = model.dominant_offset();
        let (mut a1, mut am) = (one.zero_like(), one.zero_like());
        for t in model.terms.iter().filter(|t| model.offset(t) == e) {
            let mut v = t.coef.clone();
            for i in 0..t.degree() {
                v = v.mul(&model.lead_at(t, i, &one.zero_like()));
            }
            if t.degree() == 1 {
                a1.add_assign(&v);
            } else {
                am.add_assign(&v);
            }
        }
        if a1.is_zero() || am.is_zero() {
            return Err(Error::Model(format!("{}: degenerate leading balance", model.name)));
        }
        model.w0_power = a1.neg().div(&am);
        Ok(model)
    }

    /// Exponent offset of a term: Σ_i (−α − deg L_i).
    pub fn offset(&self, t: &OdeTerm<F>) -> i64 {
        (0..t.degree()).map(|i| -self.alpha - t.theta_degree(i) as i64).sum()
    }

    pub fn dominant_offset(&self) -> i64 {
        self.terms.iter().map(|t| self.offset(t)).min().unwrap()
    }

    /// lead(L_i) Π_{j<p}(α + j − x): the part of L_i(θ) Z^{x−α} at leading order.
    fn lead_at(&self, t: &OdeTerm<F>, i: usize, x: &F) -> F {
        let mut v = t.lead(i).clone();
        for j in 0..t.theta_degree(i) as i64 {
            v = v.mul(&x.from_i64_like(self.alpha + j).sub(x));
        }
        v
    }

    /// Effective coefficient in Y-normalization.
    pub fn normalized_coef(&self, t: &OdeTerm<F>) -> F {
        if t.degree() == 1 {
            t.coef.clone()
        } else {
            t.coef.mul(&self.w0_power)
        }
    }

    /// Q(x): coefficient of y_k Z^{k+E} at x = k.
    pub fn resonance_value(&self, x: &F) -> F {
        let zero = x.zero_like();
        let e = self.dominant_offset();
        let mut acc = zero.clone();
        for t in self.terms.iter().filter(|t| self.offset(t) == e) {
            let c = self.normalized_coef(t);
            for i in 0..t.degree() {
                let mut v = c.mul(&self.lead_at(t, i, x));
                for l in 0..t.degree() {
                    if l != i {
                        v = v.mul(&self.lead_at(t, l, &zero));
                    }
                }
                acc.add_assign(&v);
            }
        }
        acc
    }

    /// Coefficients of Q in x.
    pub fn resonance_coeffs(&self) -> Vec<F> {
        let one = self.sigma.one_like();
        let zero = one.zero_like();
        let e = self.dominant_offset();
        let mut acc = vec![zero.clone()];
        for t in self.terms.iter().filter(|t| self.offset(t) == e) {
            let c = self.normalized_coef(t);
            for i in 0..t.degree() {
                let mut p = vec![c.mul(t.lead(i))];
                for j in 0..t.theta_degree(i) as i64 {
                    p = poly_mul(&p, &[one.from_i64_like(self.alpha + j), one.neg()]);
                }
                for l in 0..t.degree() {
                    if l != i {
                        let s = self.lead_at(t, l, &zero);
                        p = p.iter().map(|a| a.mul(&s)).collect();
                    }
                }
                acc = poly_add(&acc, &p);
            }
        }
        trim(acc)
    }

    /// w0 as a number: the positive (M−1)-th root of w0^{M−1}.
    pub fn w0_value(&self, prec: u32) -> Result<BigReal> {
        let p = self.w0_power.to_bigreal(prec);
        if self.degree == 2 {
            return Ok(p);
        }
        if p.is_sign_negative() {
            return Err(Error::Model(format!("{}: negative w0 power", self.name)));
        }
        let e = Rational::from((1, self.degree as i64 - 1));
        Ok(p.pow_rational(&e))
    }

    /// w0 inside the coefficient field, when M = 2.
    pub fn w0_exact(&self) -> Option<F> {
        (self.degree == 2).then(|| self.w0_power.clone())
    }
}

fn lin<F: Field>(coef: F, l: Vec<F>) -> OdeTerm<F> {
    let z = coef.zero_like();
    OdeTerm::new(coef, z, vec![l])
}

fn nl<F: Field>(coef: F, z_power: F, factors: Vec<Vec<F>>) -> OdeTerm<F> {
    OdeTerm::new(coef, z_power, factors)
}

/// θ^d G − z G² = 0 (d-BST; phylogenetic trees share d = 2).
pub fn bst_like<F: Field>(d: u32, one: &F) -> Result<OdeModel<F>> {
    let mut l = vec![one.zero_like(); d as usize];
    l.push(one.clone());
    let terms = vec![lin(one.clone(), l), nl(one.neg(), one.clone(), vec![vec![one.clone()], vec![one.clone()]])];
    OdeModel::new(&format!("bst(d={d})"), terms, one.clone(), one.zero_like(), one.clone())
}

/// E_{m−1}(θ)² G − (m−1)!² z^{m−1} G^m = 0
pub fn mary<F: Field>(m: u32, one: &F) -> Result<OdeModel<F>> {
    let e = falling_theta(m - 1, one);
    let f = factorial(m as u64 - 1);
    let c = one.from_rational_like(&Rational::from(Integer::from(&f * &f)));
    let terms = vec![
        lin(one.clone(), poly_mul(&e, &e)),
        nl(c.neg(), one.from_i64_like(m as i64 - 1), vec![vec![one.clone()]; m as usize]),
    ];
    OdeModel::new(&format!("mary(m={m})"), terms, one.clone(), one.zero_like(), one.clone())
}

/// E_{2t+1}(θ)² F − C z (E_t(θ)² F)² = 0, C = (2t+1)!²/t!⁴
pub fn fringe<F: Field>(t: u32, one: &F) -> Result<OdeModel<F>> {
    let big = falling_theta(2 * t + 1, one);
    let small = falling_theta(t, one);
    let small2 = poly_mul(&small, &small);
    let f1 = factorial(2 * t as u64 + 1);
    let f2 = factorial(t as u64);
    let f2sq = Integer::from(&f2 * &f2);
    let c = Rational::from((Integer::from(&f1 * &f1), Integer::from(&f2sq * &f2sq)));
    let terms = vec![
        lin(one.clone(), poly_mul(&big, &big)),
        nl(one.from_rational_like(&c).neg(), one.clone(), vec![small2.clone(), small2]),
    ];
    OdeModel::new(&format!("fringe(t={t})"), terms, one.clone(), one.zero_like(), one.clone())
}

/// a θ(θ−1) V + b θ V − z V² = 0 for v_j = (−1)^j t_{j+1}.
pub fn boltzmann<F: Field>(nu: u32, one: &F) -> Result<OdeModel<F>> {
    let nu = nu as i64;
    let a = one.from_rational_like(&Rational::from((nu * (nu + 1), nu + 2)));
    let b = one.from_rational_like(&Rational::from((2 * nu * nu + nu - 2, nu + 2)));
    let terms = vec![
        lin(one.clone(), vec![one.zero_like(), b.sub(&a), a]),
        nl(one.neg(), one.clone(), vec![vec![one.clone()], vec![one.clone()]]),
    ];
    OdeModel::new(&format!("boltzmann(nu={nu})"), terms, one.clone(), one.zero_like(), one.clone())
}

/// v² θ(θ−1) A + 2θA + 2A − 2A² = 0 with v² + 3v − 2 = 0.
pub fn quadtree<F: Field>(v: &F) -> Result<OdeModel<F>> {
    let v2 = v.mul(v);
    let two = v.from_i64_like(2);
    let terms = vec![
        lin(v.one_like(), vec![two.clone(), two.sub(&v2), v2]),
        nl(two.neg(), v.zero_like(), vec![vec![v.one_like()], vec![v.one_like()]]),
    ];
    OdeModel::new("quadtree", terms, v.zero_like(), v.zero_like(), v.zero_like())
}

/// β θ(θ−1)B + (β+1)² θB + (β+1)B − (β+1)B² − β(β+1)(θB)B = 0
pub fn relaxed_kd<F: Field>(beta: &F) -> Result<OdeModel<F>> {
    let one = beta.one_like();
    let b1 = beta.add(&one);
    let terms = vec![
        lin(one.clone(), vec![b1.clone(), b1.mul(&b1).sub(beta), beta.clone()]),
        nl(b1.neg(), beta.zero_like(), vec![vec![one.clone()], vec![one.clone()]]),
        nl(beta.mul(&b1).neg(), beta.zero_like(), vec![vec![beta.zero_like(), one.clone()], vec![one.clone()]]),
    ];
    OdeModel::new("relaxed_kd", terms, beta.zero_like(), beta.zero_like(), beta.zero_like())
}

/// v θ(θ−1) h + θh + h − h² = 0, v = λ²/(ω(ω+1)).
pub fn partition_d2<F: Field>(v: &F) -> Result<OdeModel<F>> {
    let one = v.one_like();
    let terms = vec![
        lin(one.clone(), vec![one.clone(), one.sub(v), v.clone()]),
        nl(one.neg(), v.zero_like(), vec![vec![one.clone()], vec![one.clone()]]),
    ];
    OdeModel::new("partition(d=2)", terms, v.zero_like(), v.zero_like(), v.zero_like())
}

/// Π_{i<d}(λθ − i) H − rising(ω,d) z^{−κ} H² = 0, κ = (d+ω−1)/λ.
pub fn partition<F: Field>(d: u32, lambda: &F, omega: &F) -> Result<OdeModel<F>> {
    let one = lambda.one_like();
    let mut l = vec![one.clone()];
    for i in 0..d as i64 {
        l = poly_mul(&l, &[one.from_i64_like(-i), lambda.clone()]);
    }
    let kappa = omega.add(&one.from_i64_like(d as i64 - 1)).div(lambda);
    let terms = vec![
        lin(one.clone(), l),
        nl(rising(omega, d).neg(), kappa.neg(), vec![vec![one.clone()], vec![one.clone()]]),
    ];
    OdeModel::new(&format!("partition(d={d})"), terms, kappa.neg(), kappa.neg(), one.zero_like())
}

/// Model with BigReal coefficients.
pub fn model_for(family: &Family, prec: u32) -> Result<OdeModel<BigReal>> {
    family.validate()?;
    let one = BigReal::from_i64(1, prec);
    match family {
        Family::BstEquality { d } => bst_like(*d, &one),
        Family::PhyloAgreement => bst_like(2, &one),
        Family::MarySearch { m } => mary(*m, &one),
        Family::FringeBalanced { t } => fringe(*t, &one),
        Family::Boltzmann { nu } => boltzmann(*nu, &one),
        Family::QuadtreeMoments => quadtree(&quadtree_v(prec)),
        Family::RelaxedKd { beta } => relaxed_kd(&beta.with_prec(prec)),
        Family::Partition { d, omega } => {
            let omega = omega.with_prec(prec);
            let lambda = malthusian_lambda(&omega, *d, prec)?;
            if *d == 2 {
                let v = &(&lambda * &lambda) / &(&omega * &(&omega + 1));
                partition_d2(&v)
            } else {
                partition(*d, &lambda, &omega)
            }
        }
    }
}

/// Model with exact rational coefficients.
pub fn exact_model(family: &Family) -> Result<OdeModel<Rational>> {
    family.validate()?;
    let one = Rational::from(1);
    match family {
        Family::BstEquality { d } => bst_like(*d, &one),
        Family::PhyloAgreement => bst_like(2, &one),
        Family::MarySearch { m } => mary(*m, &one),
        Family::FringeBalanced { t } => fringe(*t, &one),
        Family::Boltzmann { nu } => boltzmann(*nu, &one),
        _ => Err(Error::Unsupported(format!("{} has irrational coefficients", family.name()))),
    }
}

/// Q(v) with v² = 2 − 3v.
pub fn quadtree_field() -> QuadField {
    QuadField::new(Rational::from(2), Rational::from(-3))
}

/// Quadtree model over Q(v).
pub fn quadtree_exact() -> Result<OdeModel<QNum>> {
    quadtree(&QNum::generator(&quadtree_field()))
}

/// Partition d = 2 at ω = 1 over Q(λ), λ² = 2 − 3λ, where v = λ²/2.
pub fn partition_d2_omega1_exact() -> Result<OdeModel<QNum>> {
    let l = QNum::generator(&quadtree_field());
    let v = l.mul(&l).div(&l.from_i64_like(2));
    partition_d2(&v)
}

/// Round numeric polynomial coefficients to integers, failing when they are not.
pub fn integer_poly(coeffs: &[BigReal]) -> Result<RatPoly> {
    let lead = coeffs[coeffs.len() - 1].clone();
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        let x = c / &lead;
        let rounded = (&x + &(BigReal::from_rational(&Rational::from((1, 2)), x.prec()))).floor();
        let gap = (&x - &rounded).abs();
        if gap.log2_abs() > -(x.prec() as f64) / 2.0 && !gap.is_zero() {
            return Err(Error::Model("resonance polynomial is not integral".into()));
        }
        out.push(rounded.to_rational().ok_or_else(|| Error::Model("non-finite coefficient".into()))?);
    }
    Ok(RatPoly::new(out))
}

/// Monic resonance polynomial of a family, exact.
pub fn monic_resonance(family: &Family) -> Result<RatPoly> {
    if family.is_exact() {
        let m = exact_model(family)?;
        return Ok(RatPoly::new(m.resonance_coeffs()).monic());
    }
    let m = model_for(family, 256)?;
    integer_poly(&m.resonance_coeffs())
}

#[derive(Clone, Debug)]
pub struct LeadingOrder {
    pub alpha: i64,
    /// The amplitude is reported as w0^power (power = M − 1).
    pub power: u32,
    pub exact_power: Option<Rational>,
    pub closed_form: String,
    pub amplitude: BigReal,
}

pub fn leading_order(family: &Family, prec: u32) -> Result<LeadingOrder> {
    let model = model_for(family, prec)?;
    let exact_power = if family.is_exact() { Some(exact_model(family)?.w0_power) } else { None };
    let closed_form = match family {
        Family::BstEquality { d } => format!("rho*c0 = (2d)!/(2 d!) with d = {d}"),
        Family::PhyloAgreement => "rho*c0 = 6".to_string(),
        Family::MarySearch { m } => format!("(rho*c0)^{} = (2m-1)!/(m-1)!^2 with m = {m}", m - 1),
        Family::FringeBalanced { t } => format!("rho*c0 = (4t+3)! t!^4/(2t+1)!^4 with t = {t}"),
        Family::QuadtreeMoments => "3v^2".to_string(),
        Family::RelaxedKd { .. } => "2/(beta+1)".to_string(),
        Family::Partition { d: 2, .. } => "6v".to_string(),
        Family::Partition { .. } => "lambda^d (2d-1)!/((d-1)! rising(omega,d))".to_string(),
        Family::Boltzmann { .. } => "6 nu(nu+1)/(nu+2)".to_string(),
    };
    Ok(LeadingOrder {
        alpha: model.alpha,
        power: model.degree as u32 - 1,
        exact_power,
        closed_form,
        amplitude: model.w0_value(prec)?,
    })
}

#[derive(Clone, Debug)]
pub struct ModeSystem {
    pub family: Family,
    pub dimension: usize,
    pub matrix: Vec<Vec<Rational>>,
    pub alpha: i64,
    pub leading: LeadingOrder,
    pub memory_terms: String,
    pub nonlinearity_degree: usize,
    pub nonlinearity: String,
    pub normalization: String,
    /// First mode index where the generic mode equation holds.
    pub k0: usize,
    /// True when M is the matrix displayed for the family.
    pub printed: bool,
}

fn bidiagonal(diag_start: i64, s: usize) -> Vec<Vec<Rational>> {
    let mut m = vec![vec![Rational::new(); s]; s];
    for i in 0..s {
        m[i][i] = Rational::from(diag_start + i as i64);
        if i + 1 < s {
            m[i][i + 1] = Rational::from(1);
        }
    }
    m
}

pub fn build_mode_system(family: &Family) -> Result<ModeSystem> {
    family.validate()?;
    let leading = leading_order(family, 256)?;
    let alpha = leading.alpha;
    let fact = |n: u32| Rational::from(factorial(n as u64));
    let (matrix, printed, memory, nonlin, degree) = match family {
        Family::BstEquality { .. } | Family::PhyloAgreement => {
            let d = match family {
                Family::BstEquality { d } => *d,
                _ => 2,
            };
            let s = d as usize;
            let mut m = bidiagonal(d as i64, s);
            let c = fact(2 * d) / fact(d);
            m[s - 1][0] = if d % 2 == 0 { c } else { -c };
            (
                m,
                true,
                "U_j' = U_{j+1}/(1-Z): sum over l<k of u_l^[j+1]".to_string(),
                format!("(-1)^{d} rho U_1^2"),
                2,
            )
        }
        Family::MarySearch { m } => {
            let s = 2 * (*m as usize - 1);
            let mut mat = bidiagonal(2, s);
            mat[s - 1][0] = Rational::from(*m) * fact(2 * m - 1);
            (
                mat,
                true,
                format!("binomial(m-2+k-j, k-j) u_j^[m] from (1-Z)^-(m-1), m = {m}"),
                format!("(m-1)!^2 rho^(m-1) U_1^m, m = {m}"),
                *m as usize,
            )
        }
        Family::FringeBalanced { t } => {
            let s = 4 * *t as usize + 2;
            let mut mat = bidiagonal(2, s);
            mat[s - 1][2 * *t as usize] = Rational::from(2) * fact(4 * t + 3) / fact(2 * t + 1);
            (
                mat,
                true,
                format!("binomial(2t+k-j, k-j) u_j^[2t+2] from (1-Z)^-(2t+1), t = {t}"),
                format!("(2t+1)!^2/t!^4 rho sum mu(i1,i2)(1-Z)^(2t-i1-i2) U_(2t+1-i1) U_(2t+1-i2), t = {t}"),
                2,
            )
        }
        Family::Partition { d, .. } if *d > 2 => {
            return Err(Error::Unsupported("mode system for partition d > 2".into()));
        }
        _ => {
            let q = monic_resonance(family)?;
            if q.degree() != 2 {
                return Err(Error::Internal("second-order family expected".into()));
            }
            let c = q.coeffs();
            let tr = Rational::from(-&c[1]);
            let a = Rational::from(alpha);
            let b = Rational::from(&tr - &a);
            let k = Rational::from(&a * &b) - &c[0];
            let m = vec![vec![a, Rational::from(1)], vec![k, b]];
            let deriv = matches!(family, Family::RelaxedKd { .. });
            (
                m,
                false,
                "(1-Z)^e factors expanded binomially".to_string(),
                if deriv { "U_1^2 and U_1 U_2 (derivative product)".to_string() } else { "U_1^2".to_string() },
                2,
            )
        }
    };
    Ok(ModeSystem {
        family: family.clone(),
        dimension: matrix.len(),
        matrix,
        alpha,
        leading,
        memory_terms: memory,
        nonlinearity_degree: degree,
        nonlinearity: nonlin,
        normalization: "W = rho^sigma G, Y = W/w0".to_string(),
        k0: 1,
        printed,
    })
}

impl ModeSystem {
    /// A_k = kI − M
    pub fn a_k(&self, k: i64) -> Vec<Vec<Rational>> {
        let mut a = self.matrix.clone();
        for (i, row) in a.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = -x.clone();
                if i == j {
                    *x += k;
                }
            }
        }
        a
    }

    /// det(rI − M) by exact interpolation at r = 0..s.
    pub fn characteristic_polynomial(&self) -> RatPoly {
        let s = self.dimension;
        let pts: Vec<(Rational, Rational)> =
            (0..=s as i64).map(|r| (Rational::from(r), determinant(self.a_k(r)))).collect();
        interpolate(&pts)
    }
}

pub fn determinant(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut det = Rational::from(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[r][c] != 0) else {
            return Rational::new();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= &piv;
        for r in c + 1..n {
            if a[r][c] == 0 {
                continue;
            }
            let f = Rational::from(&a[r][c] / &piv);
            for j in c..n {
                let t = Rational::from(&f * &a[c][j]);
                a[r][j] -= t;
            }
        }
    }
    det
}

fn interpolate(pts: &[(Rational, Rational)]) -> RatPoly {
    let mut acc = RatPoly::constant(Rational::new());
    for (i, (xi, yi)) in pts.iter().enumerate() {
        let mut basis = RatPoly::constant(yi.clone());
        for (j, (xj, _)) in pts.iter().enumerate() {
            if i != j {
                let den = Rational::from(xi - xj).recip();
                basis = basis.mul(&RatPoly::root_factor(xj.clone())).scale(&den);
            }
        }
        acc = acc.add(&basis);
    }
    acc
}

impl<F: Field> OdeModel<F> {
    /// Coefficients of the z-form applied to a Taylor series g, up to z^n.
    /// Requires integer z-powers.
    pub fn taylor_residual(&self, g: &[F], n: usize) -> Result<Vec<F>> {
        let zero = g[0].zero_like();
        let mut out = vec![zero.clone(); n + 1];
        for t in &self.terms {
            let e = t.z_power.to_f64();
            if e.fract() != 0.0 || e < 0.0 {
                return Err(Error::Unsupported("non-integer z power".into()));
            }
            let e = e as usize;
            let mut prod: Vec<F> = vec![zero.one_like()];
            for f in &t.factors {
                let lg: Vec<F> = (0..=n)
                    .map(|k| {
                        let x = zero.from_i64_like(k as i64);
                        let mut acc = zero.clone();
                        for c in f.iter().rev() {
                            acc = acc.mul(&x).add(c);
                        }
                        acc.mul(g.get(k).unwrap_or(&zero))
                    })
                    .collect();
                let mut p = poly_mul(&prod, &lg);
                p.truncate(n + 1);
                prod = p;
            }
            for (k, c) in prod.iter().enumerate() {
                if k + e <= n {
                    out[k + e].add_mul(&t.coef, c);
                }
            }
        }
        Ok(out)
    }
}
