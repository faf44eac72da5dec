use psiseries::integrable::*;
use psiseries::numeric::{compose, rat, BigReal};
use psiseries::ode_models::exact_model;
use psiseries::recurrences::{boltzmann, Family};
use psiseries::transfer::exact_expansion;
use psiseries::Rational;

fn big(s: &str, prec: u32) -> BigReal {
    BigReal::parse(s, prec).unwrap()
}

#[test]
fn singularities() {
    let p = 256;
    let z1 = zeta_infinity(1, p).unwrap();
    assert!(z1.agreement_digits(&big("1.47458599237119248035", p)) > 19.0);
    let two_sqrt = &z1.sqrt() * 2;
    assert!(two_sqrt.agreement_digits(&big("2.42865064788758161181", p)) > 19.0);
    let z2 = zeta_infinity(2, p).unwrap();
    assert!(z2.agreement_digits(&big("1.76663875028544995731", p)) > 19.0);
    assert!(z2.agreement_digits(&zeta_infinity_beta(p).unwrap()) > 70.0);
    let s = solve_integrable(2, 5, p).unwrap();
    assert!(s.rho.agreement_digits(&big("-5.51370157671056775506", p)) > 19.0);
    assert!(s.rho.agreement_digits(&rho_nu2_beta(p).unwrap()) > 70.0);
    assert!(solve_integrable(1, 4, p).unwrap().rho.is_sign_negative());
    assert!(zeta_infinity(3, p).is_err());
}

#[test]
fn delta_series_nu1() {
    let (d, v) = delta_expansions(1, 4).unwrap();
    assert_eq!(d.coeffs(), &[rat(2, 1), rat(1, 7), rat(3, 52), rat(5, 152)]);
    assert_eq!(d.base, rat(-1, 2));
    assert_eq!(v.coeffs(), &[rat(4, 1), rat(1, 112), rat(1, 652288), rat(1, 5552275456)]);
    assert_eq!((v.base.clone(), v.step.clone()), (rat(-2, 1), rat(6, 1)));
}

#[test]
fn delta_series_nu2() {
    let (d, l) = delta_expansions(2, 5).unwrap();
    assert_eq!(d.coeffs()[..4], [rat(1, 1), rat(-1, 56), rat(3, 1664), rat(-5, 19456)]);
    assert_eq!(l.coeffs(), &[rat(1, 1), rat(-1, 28), rat(1, 10192), rat(-1, 5422144), rat(3, 9868302080)]);
}

#[test]
fn series_compose_to_identity() {
    for nu in [1, 2] {
        let (d, inv) = delta_expansions(nu, 6).unwrap();
        let id = compose(&d, &inv, 6).unwrap();
        // Δ(V(Δ)) = Δ
        assert_eq!(id.base, 1);
        assert_eq!(id.coeff(0), Some(&Rational::from(1)));
        assert!(id.coeffs()[1..].iter().all(|c| *c == 0));
    }
}

#[test]
fn closed_form_error_decays() {
    for nu in [1u32, 2] {
        let ns: Vec<u64> = (10..=40).step_by(5).collect();
        let errs = relative_errors(nu, &ns, 256).unwrap();
        let logs: Vec<f64> = errs.iter().map(|(_, e)| e.ln().to_f64()).collect();
        for w in logs.windows(2) {
            assert!(w[1] < w[0], "nu={nu} {logs:?}");
        }
        // geometric: fitted log-ratio per step is negative and steady
        let slope = (logs[logs.len() - 1] - logs[0]) / (ns[ns.len() - 1] - ns[0]) as f64;
        assert!(slope < -0.05, "nu={nu} slope={slope}");
        let e30 = &errs[4].1;
        let e20 = &errs[2].1;
        assert!(e30 < e20);
    }
}

#[test]
fn sign_alternation() {
    let s1 = solve_integrable(1, 3, 128).unwrap();
    let t = boltzmann(1, &Rational::from(1), 40).unwrap();
    for n in 2..=40u64 {
        let p = integrable_asymptotics(1, n, &s1.rho).unwrap();
        assert_eq!(p.is_sign_negative(), t[n as usize] < 0, "n={n}");
    }
}

#[test]
fn k_vanishes_in_the_integrable_cases() {
    for nu in [1, 2] {
        let e = exact_expansion(&Family::Boltzmann { nu }, 8).unwrap();
        assert!(e.terms.iter().all(|t| t.power >= 0), "nu={nu}");
        let m = exact_model(&Family::Boltzmann { nu }).unwrap();
        assert_eq!(m.alpha, 2);
    }
}

