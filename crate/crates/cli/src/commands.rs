use psiseries::ars::{frobenius_and_compatibility, fringe_closed_form_residual, resonance_polynomial, Value as ArsValue};
use psiseries::connect::{bracket_rho, solve_connection, ConnectOptions, ConnectionSolution};
use psiseries::integrable::{relative_errors, rho_nu2_beta, solve_integrable};
use psiseries::numeric::{Field, FormalSeries};
use psiseries::recurrences::{sequence, Family, Mode, SeqValues};
use psiseries::transfer::{
    exact_expansion, loglog_slope, quadratic_expansion, quadtree_mgf, real_expansion, validate_expansion,
    AsymptoticExpansion, ValidationReport,
};
use psiseries::{BigReal, Error, Integer, Rational, Result};
use serde_json::{json, Map, Value};

use crate::config::{parse_real, Command, Opts};
use crate::paper::Computed;

pub struct Output {
    pub results: Value,
    pub notes: Vec<String>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub computed: Vec<(String, Computed)>,
}

impl Output {
    fn new(results: Value) -> Self {
        Output { results, notes: Vec::new(), header: Vec::new(), rows: Vec::new(), computed: Vec::new() }
    }

    fn kv_rows(mut self) -> Self {
        self.header = vec!["key", "value"];
        if let Value::Object(m) = &self.results {
            for (k, v) in m {
                let s = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                self.rows.push(vec![k.clone(), s]);
            }
        }
        self
    }
}

pub fn run(cmd: &Command) -> Result<Output> {
    let o = cmd.opts();
    match cmd {
        Command::Sequence(_) => cmd_sequence(o),
        Command::Ars(_) => cmd_ars(o),
        Command::Solve(_) => cmd_solve(o),
        Command::Expand(_) => cmd_expand(o),
        Command::Validate(_) => cmd_validate(o),
        Command::Integrable(_) => cmd_integrable(o),
        Command::Mgf(_) => cmd_mgf(o),
        Command::Bracket(_) => cmd_bracket(o),
    }
}

fn dec(x: &BigReal, o: &Opts) -> String {
    x.to_decimal(o.out_digits())
}

fn short_key(f: &Family) -> Option<&'static str> {
    match f {
        Family::BstEquality { d: 2 } => Some("bst"),
        Family::PhyloAgreement => Some("phylo"),
        Family::QuadtreeMoments => Some("quadtree"),
        _ => None,
    }
}

fn cmd_sequence(o: &Opts) -> Result<Output> {
    let f = o.family()?;
    let n = o.n.unwrap_or(20);
    let mode = if f.is_exact() && !o.float { Mode::Exact } else { Mode::Float(o.prec) };
    let s = sequence(&f, n, mode)?;
    let vals: Vec<String> = match &s.values {
        SeqValues::Exact(v) => v.iter().map(|q| q.to_string()).collect(),
        SeqValues::Float(v) => v.iter().map(|x| dec(x, o)).collect(),
    };
    let mut out = Output::new(json!({
        "family": f.name(),
        "first_index": s.first_index,
        "exact": matches!(mode, Mode::Exact),
        "values": vals,
    }));
    out.header = vec!["n", "value"];
    out.rows = vals.iter().enumerate().map(|(i, v)| vec![(i + s.first_index).to_string(), v.clone()]).collect();
    Ok(out)
}

fn ars_value(v: &ArsValue, o: &Opts) -> String {
    match v {
        ArsValue::Real(x) => dec(x, o),
        other => other.to_string(),
    }
}

fn cmd_ars(o: &Opts) -> Result<Output> {
    let f = o.family()?;
    let res = resonance_polynomial(&f)?;
    let complex: Vec<Value> =
        res.complex_roots.iter().map(|z| json!([format!("{:.12}", z.re), format!("{:.12}", z.im)])).collect();
    let mut results = Map::new();
    results.insert("family".into(), json!(f.name()));
    results.insert("polynomial".into(), json!(res.polynomial.to_string()));
    results.insert("resonances".into(), json!(res.integer_resonances));
    results.insert("minus_one_is_root".into(), json!(res.minus_one_is_root));
    results.insert("complex_resonances".into(), Value::Array(complex));
    let mut notes = Vec::new();
    let mut computed = Vec::new();
    if !res.oscillatory().is_empty() {
        notes.push("complex resonances with positive real part: oscillatory terms outside the psi-series".into());
    }
    let r = o.r.or(res.least().map(|r| r as usize));
    if let Some(r) = r {
        let rep = frobenius_and_compatibility(&f, r)?;
        let verdict = match rep.verdict {
            psiseries::ars::Verdict::Compatible => "compatible",
            psiseries::ars::Verdict::Incompatible => "incompatible",
        };
        results.insert("resonance".into(), json!(rep.resonance));
        results.insert("verdict".into(), json!(verdict));
        results.insert("residual".into(), json!(ars_value(&rep.residual, o)));
        results.insert("coefficients".into(), json!(rep.coefficients.iter().map(|c| ars_value(c, o)).collect::<Vec<_>>()));
        results.insert("shadowed".into(), json!(rep.shadowed));
        results.insert("sigma".into(), json!(ars_value(&rep.sigma, o)));
        results.insert("units".into(), json!(rep.units));
        if let (Family::FringeBalanced { t }, Some(q)) = (&f, rep.residual.as_rational()) {
            if *t >= 1 && rep.resonance == 2 {
                let closed = fringe_closed_form_residual(*t);
                let ratio = Rational::from(q / &closed);
                let verdict = if ratio == 1 { "match" } else { "mismatch" };
                results.insert("closed_form_residual".into(), json!(closed.to_string()));
                notes.push(format!("residual vs closed form: {verdict} (ratio {ratio})"));
            }
        }
        if short_key(&f) == Some("bst") {
            for (i, c) in rep.coefficients.iter().enumerate().skip(1) {
                computed.push((format!("bst.c{i}"), Computed::Exact(c.to_string())));
            }
        }
    }
    let mut out = Output::new(Value::Object(results)).kv_rows();
    out.notes = notes;
    out.computed = computed;
    Ok(out)
}

fn connect_opts(o: &Opts) -> Result<ConnectOptions> {
    Ok(ConnectOptions {
        target_digits: o.digits,
        beta_split: o.beta_split()?,
        prec: o.prec,
        max_terms: o.n.unwrap_or(1500),
        ..ConnectOptions::default()
    })
}

fn solve(f: &Family, o: &Opts) -> Result<ConnectionSolution> {
    solve_connection(f, &connect_opts(o)?)
}

fn solution_json(s: &ConnectionSolution, o: &Opts) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("family".into(), json!(s.family));
    m.insert("rho".into(), json!(dec(&s.rho, o)));
    m.insert("rho_error".into(), json!(s.rho_error.to_decimal(4)));
    if let (Some(r), Some(c)) = (s.resonance, &s.c_r_raw) {
        m.insert(format!("c{r}"), json!(dec(c, o)));
        m.insert("resonance".into(), json!(r));
    }
    if let Some(c) = &s.c_r {
        m.insert("c_r_normalized".into(), json!(dec(c, o)));
    }
    if let Some(e) = &s.c_error {
        m.insert("c_error".into(), json!(e.to_decimal(4)));
    }
    m.insert("z0".into(), json!(dec(&s.z0, o)));
    m.insert("n_terms".into(), json!(s.n_terms));
    m.insert("m_modes".into(), json!(s.m_modes));
    m.insert("iterations".into(), json!(s.iterations));
    m.insert("residuals".into(), json!(s.residuals.iter().map(|x| x.to_decimal(4)).collect::<Vec<_>>()));
    m.insert("tail_bounds".into(), json!(s.tail_bounds.iter().map(|x| x.to_decimal(4)).collect::<Vec<_>>()));
    m
}

fn cmd_solve(o: &Opts) -> Result<Output> {
    let f = o.family()?;
    let s = solve(&f, o)?;
    let mut out = Output::new(Value::Object(solution_json(&s, o))).kv_rows();
    if !s.oscillatory_resonances.is_empty() {
        out.notes.push("complex resonances present: rho and c_r carry a z0-dependent model error".into());
    }
    if matches!(f, Family::Boltzmann { .. }) {
        out.notes.push("rho is the singularity of sum (-1)^j t_(j+1) z^j; the t-series singularity is -rho".into());
    }
    if let Some(k) = short_key(&f) {
        out.computed.push((format!("{k}.rho"), Computed::Real(s.rho.clone())));
        if k == "bst" {
            if let Some(c) = &s.c_r_raw {
                out.computed.push(("bst.c6".into(), Computed::Real(c.clone())));
            }
        }
    }
    Ok(out)
}

enum AnyExpansion {
    Exact(AsymptoticExpansion<Rational>),
    Quadratic(AsymptoticExpansion<psiseries::numeric::QNum>),
    Real(AsymptoticExpansion<BigReal>),
}

fn expansion(f: &Family, order: i64, prec: u32) -> Result<AnyExpansion> {
    if f.is_exact() {
        return Ok(AnyExpansion::Exact(exact_expansion(f, order)?));
    }
    match f {
        Family::QuadtreeMoments => Ok(AnyExpansion::Quadratic(quadratic_expansion(f, order)?)),
        Family::Partition { d: 2, omega } if *omega == 1 => Ok(AnyExpansion::Quadratic(quadratic_expansion(f, order)?)),
        _ => Ok(AnyExpansion::Real(real_expansion(f, order, prec)?)),
    }
}

fn default_order(f: &Family) -> i64 {
    match f {
        Family::BstEquality { d: 2 } | Family::PhyloAgreement => 11,
        Family::MarySearch { m } => 2 * *m as i64 + 1,
        _ => 6,
    }
}

fn expansion_json<F: Field>(e: &AsymptoticExpansion<F>, fmt: impl Fn(&F) -> String) -> (Value, Vec<Vec<String>>) {
    let mut terms = Vec::new();
    let mut rows = Vec::new();
    for t in &e.terms {
        let cs: Vec<String> = t.coeff.coeffs.iter().map(&fmt).collect();
        for (k, c) in cs.iter().enumerate() {
            rows.push(vec![t.power.to_string(), t.harmonic.to_string(), t.harmonic2.to_string(), k.to_string(), c.clone()]);
        }
        terms.push(json!({
            "power": t.power,
            "harmonic": t.harmonic,
            "harmonic2": t.harmonic2,
            "coeff": cs,
        }));
    }
    let v = json!({
        "family": e.family,
        "prefactor": e.prefactor,
        "units": e.units,
        "index_shift": e.index_shift,
        "rho_shift": e.rho_shift,
        "order": e.order,
        "resonance": e.resonance,
        "terms": terms,
    });
    (v, rows)
}

fn cmd_expand(o: &Opts) -> Result<Output> {
    let f = o.family()?;
    let order = o.order.unwrap_or_else(|| default_order(&f));
    let (v, rows) = match expansion(&f, order, o.prec)? {
        AnyExpansion::Exact(e) => expansion_json(&e, |q| q.to_string()),
        AnyExpansion::Quadratic(e) => expansion_json(&e, |q| q.to_string()),
        AnyExpansion::Real(e) => expansion_json(&e, |x| dec(x, o)),
    };
    let mut out = Output::new(v);
    out.header = vec!["power", "harmonic", "harmonic2", "c_power", "coefficient"];
    if short_key(&f) == Some("bst") {
        for r in &rows {
            let key = match (r[0].as_str(), r[1].as_str(), r[3].as_str()) {
                (p, "0", "0") => format!("bst.n^{p}"),
                ("-11", "1", "0") => "bst.n^-11.H_n".into(),
                ("-11", "0", "1") => "bst.n^-11.c6".into(),
                _ => continue,
            };
            out.computed.push((key, Computed::Exact(r[4].clone())));
        }
    }
    out.rows = rows;
    Ok(out)
}

fn grid(o: &Opts, lo: u64, hi: u64, steps: u64) -> Result<Vec<u64>> {
    let a = o.n_min.unwrap_or(lo);
    let b = o.n_max.unwrap_or(hi);
    if a == 0 || b < a {
        return Err(Error::Domain("need 0 < n_min <= n_max".into()));
    }
    let step = o.n_step.unwrap_or(((b - a) / steps).max(1));
    Ok((a..=b).step_by(step as usize).collect())
}

fn cmd_validate(o: &Opts) -> Result<Output> {
    let f = o.family()?;
    let order = o.order.unwrap_or_else(|| default_order(&f) - 1);
    let ns = grid(o, 200, 2000, 10)?;
    let sol = solve(&f, o)?;
    let rep: ValidationReport = match expansion(&f, order, o.prec)? {
        AnyExpansion::Exact(e) => validate_expansion(&f, &e, &sol, &ns, o.prec)?,
        AnyExpansion::Quadratic(e) => validate_expansion(&f, &e, &sol, &ns, o.prec)?,
        AnyExpansion::Real(e) => validate_expansion(&f, &e, &sol, &ns, o.prec)?,
    };
    let p = rep.next_order;
    let scaled = rep.scaled(p);
    let mut out = Output::new(json!({
        "family": rep.family,
        "rho": dec(&sol.rho, o),
        "c_r": sol.c_r.as_ref().map(|c| dec(c, o)),
        "order": order,
        "scale_power": p,
        "fitted_exponent": format!("{:.4}", rep.fitted_exponent),
        "scaled_limit": rep.scaled_limit(p).map(|x| format!("{x:.8e}")),
        "points": rep.points.iter().zip(&scaled).map(|(pt, (_, s))| json!({
            "n": pt.n,
            "residual": pt.residual.to_decimal(12),
            "scaled": format!("{s:.12e}"),
        })).collect::<Vec<_>>(),
    }));
    if !sol.oscillatory_resonances.is_empty() {
        out.notes.push("complex resonances present: residual carries oscillatory terms".into());
    }
    out.header = vec!["n", "residual", "scaled_residual"];
    out.rows = rep
        .points
        .iter()
        .zip(&scaled)
        .map(|(pt, (_, s))| vec![pt.n.to_string(), pt.residual.to_decimal(12), format!("{s:.12e}")])
        .collect();
    Ok(out)
}

fn series_json(s: &FormalSeries) -> Value {
    json!({
        "base": s.base.to_string(),
        "step": s.step.to_string(),
        "coeffs": s.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    })
}

fn cmd_integrable(o: &Opts) -> Result<Output> {
    let nu = o.nu.ok_or_else(|| Error::Domain("integrable needs --nu 1 or --nu 2".into()))?;
    let prec = o.prec.min(256);
    let order = o.order.unwrap_or(5).max(2) as usize;
    let s = solve_integrable(nu, order, prec)?;
    let ns = grid(o, 10, 40, 6)?;
    let errs = relative_errors(nu, &ns, prec)?;
    let mut m = Map::new();
    m.insert("nu".into(), json!(nu));
    m.insert("zeta_inf".into(), json!(dec(&s.zeta_inf, o)));
    m.insert("rho".into(), json!(dec(&s.rho, o)));
    m.insert("delta_series".into(), series_json(&s.delta_series));
    m.insert("inverse_series".into(), series_json(&s.inverse_series));
    let k = nu + 1;
    m.insert("closed_form".into(), json!(format!("t_n ~ {k}(-1)^(n-1)({k}n-1)|rho|^(-n)")));
    m.insert(
        "relative_errors".into(),
        json!(errs.iter().map(|(n, e)| json!({"n": n, "error": e.to_decimal(6)})).collect::<Vec<_>>()),
    );
    let mut out = Output::new(Value::Object(m));
    if nu == 2 {
        let b = rho_nu2_beta(prec)?;
        let agree = s.rho.agreement_digits(&b);
        out.notes.push(format!("rho vs -Beta(1/6,1/3)^3/108: {agree:.0} digits"));
        out.computed.push(("boltzmann2.rho".into(), Computed::Real(s.rho.clone())));
    }
    out.computed.push((format!("boltzmann{nu}.zeta_inf"), Computed::Real(s.zeta_inf.clone())));
    out.header = vec!["n", "relative_error"];
    out.rows = errs.iter().map(|(n, e)| vec![n.to_string(), e.to_decimal(6)]).collect();
    Ok(out)
}

fn cmd_mgf(o: &Opts) -> Result<Output> {
    let f = o.family()?;
    if f != Family::QuadtreeMoments {
        return Err(Error::Unsupported("mgf is available for --family quadtree".into()));
    }
    let zs: Vec<String> = if o.z.is_empty() { ["10", "20", "30", "50"].map(String::from).to_vec() } else { o.z.clone() };
    let sol = solve(&f, o)?;
    let prec = o.prec;
    let v = psiseries::recurrences::quadtree_v(prec);
    let mut pts = Vec::new();
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for z in &zs {
        let zv = parse_real(z, prec)?;
        let r = quadtree_mgf(&zv, &sol.rho, prec)?;
        pts.push((zv.to_f64().ln(), r.scaled_gap.abs().ln().to_f64()));
        rows.push(vec![z.clone(), r.relative_gap.to_decimal(8), r.scaled_gap.to_decimal(8)]);
        items.push(json!({
            "z": z,
            "value": r.value.to_decimal(o.out_digits()),
            "prediction": r.prediction.to_decimal(o.out_digits()),
            "relative_gap": r.relative_gap.to_decimal(8),
            "scaled_gap": r.scaled_gap.to_decimal(8),
            "terms": r.terms,
        }));
    }
    let slope = if pts.len() >= 2 { Some(format!("{:.4}", loglog_slope(&pts))) } else { None };
    let mut out = Output::new(json!({
        "rho": dec(&sol.rho, o),
        "v": dec(&v, o),
        "expected_slope": format!("{:.4}", -6.0 / v.to_f64()),
        "fitted_slope": slope,
        "points": items,
    }));
    out.header = vec!["z", "relative_gap", "scaled_gap"];
    out.rows = rows;
    Ok(out)
}

fn decimal4(q: &Rational) -> String {
    let scaled = Rational::from(q * 10000u32).floor().into_numer_denom().0;
    let i = Integer::from(&scaled / 10000u32);
    let frac = Integer::from(&scaled - Integer::from(&i * 10000u32));
    if frac == 0 {
        return i.to_string();
    }
    let f = format!("{:04}", frac.to_u32().unwrap_or(0));
    format!("{i}.{}", f.trim_end_matches('0'))
}

fn cmd_bracket(o: &Opts) -> Result<Output> {
    let f = o.family()?;
    let n0s: Vec<usize> = match o.n0 {
        Some(n) => vec![n],
        None => (1..=10).chain((20..=90).step_by(10)).collect(),
    };
    let prec = o.prec.min(256);
    let mut items = Vec::new();
    let mut rows = Vec::new();
    let mut computed = Vec::new();
    for n0 in n0s {
        let b = bracket_rho(&f, n0, prec)?;
        let trunc = b.truncated.as_ref().map(decimal4);
        if let Some(t) = &trunc {
            computed.push((format!("bracket.n0={n0}"), Computed::Exact(t.clone())));
        }
        rows.push(vec![n0.to_string(), b.upper.to_decimal(12), trunc.clone().unwrap_or_default()]);
        items.push(json!({
            "n0": n0,
            "upper": b.upper.to_decimal(12),
            "lower": b.lower.as_ref().map(|x| x.to_decimal(12)),
            "truncated": trunc,
            "argmin": b.argmin,
        }));
    }
    let mut out = Output::new(json!({ "family": f.name(), "brackets": items }));
    out.header = vec!["n0", "upper", "truncated"];
    out.rows = rows;
    if f == Family::bst() {
        out.computed = computed;
    }
    Ok(out)
}
