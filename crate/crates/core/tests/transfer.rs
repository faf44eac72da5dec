use psiseries::connect::{solve_connection, ConnectOptions, ConnectionSolution};
use psiseries::numeric::{factorial, rat, BigReal, CPoly, Field, QNum, Ring};
use psiseries::ode_models::quadtree_field;
use psiseries::recurrences::{malthusian_lambda, Family};
use psiseries::transfer::*;
use psiseries::Rational;

fn big(s: &str, prec: u32) -> BigReal {
    BigReal::parse(s, prec).unwrap()
}

fn solve(f: &Family, digits: u32) -> ConnectionSolution {
    let o = ConnectOptions { target_digits: digits, ..ConnectOptions::default() };
    solve_connection(f, &o).unwrap()
}

fn plain(e: &AsymptoticExpansion<Rational>, p: i64) -> Rational {
    e.plain(p).unwrap_or_default()
}

fn term_value(terms: &[ExpansionTerm<Rational>], n: u64) -> Rational {
    let h1 = psiseries::numeric::harmonic(n, 1);
    let h2 = psiseries::numeric::harmonic(n, 2);
    let mut acc = Rational::new();
    for t in terms {
        let mut v = t.coeff.coeff(0);
        let nn = Rational::from(n);
        for _ in 0..t.power.abs() {
            if t.power > 0 {
                v *= &nn;
            } else {
                v /= &nn;
            }
        }
        for _ in 0..t.harmonic {
            v *= &h1;
        }
        for _ in 0..t.harmonic2 {
            v *= &h2;
        }
        acc += v;
    }
    acc
}

#[test]
fn extraction_examples() {
    // (1 − z)^{−2} → n + 1
    let t = coeff_extract(-2, 0, 10).unwrap();
    assert_eq!(t.len(), 2);
    assert_eq!((t[0].power, t[0].coeff.coeff(0)), (1, Rational::from(1)));
    assert_eq!((t[1].power, t[1].coeff.coeff(0)), (0, Rational::from(1)));
    // log(1 − z) → −1/n
    let t = coeff_extract(0, 1, 12).unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!((t[0].power, t[0].coeff.coeff(0)), (-1, Rational::from(-1)));
    // Z^4 log Z → −24 (n−5)!/n!
    let t = coeff_extract(4, 1, 8).unwrap();
    assert_eq!((t[0].power, t[0].coeff.coeff(0)), (-5, Rational::from(-24)));
    assert_eq!((t[1].power, t[1].coeff.coeff(0)), (-6, Rational::from(-240)));
    for n in [5u64, 9, 30] {
        let want = Rational::from((-24 * factorial(n - 5), factorial(n)));
        assert_eq!(coeff_extract_exact(4, 1, n), want);
    }
    // with c_{6,1} = −14/3125
    assert_eq!(Rational::from(-24) * rat(-14, 3125), rat(336, 3125));
}

#[test]
fn polynomial_terms_vanish_beyond_their_degree() {
    for a in 0..6 {
        for n in (a as u64 + 1)..(a as u64 + 8) {
            assert_eq!(coeff_extract_exact(a, 0, n), 0);
        }
        assert!(coeff_extract(a, 0, 20).unwrap().is_empty());
    }
}

#[test]
fn symbolic_extraction_matches_exact_values() {
    let n = 400u64;
    for a in [0i64, 3, 7] {
        for ell in 1..=3u32 {
            let terms = coeff_extract(a, ell, 40).unwrap();
            let approx = term_value(&terms, n);
            let exact = coeff_extract_exact(a, ell, n);
            let err = (approx - &exact).abs();
            let scale = exact.abs();
                        assert!(err < scale / Rational::from(10u32).pow_int(30), "a={a} l={ell}");
        }
    }
}

trait PowInt {
    fn pow_int(self, e: u32) -> Rational;
}
impl PowInt for Rational {
    fn pow_int(self, e: u32) -> Rational {
        let mut acc = Rational::from(1);
        for _ in 0..e {
            acc *= &self;
        }
        acc
    }
}

#[test]
fn bst_expansion_coefficients() {
    let e = exact_expansion(&Family::bst(), 11).unwrap();
    assert_eq!(e.units, "W");
    let want = [
        (1, rat(6, 1)),
        (0, rat(18, 5)),
        (-5, rat(336, 3125)),
        (-6, rat(1008, 3125)),
        (-7, rat(10416, 15625)),
        (-8, rat(91728, 78125)),
        (-9, rat(8234352, 4296875)),
        (-10, rat(12228048, 4296875)),
    ];
    for (p, c) in want {
        let got = e.coefficient(p, 0, 0).unwrap();
        assert_eq!(got.degree(), 0);
        assert_eq!(got.coeff(0), c, "n^{p}");
    }
    for p in -4..=-1 {
        assert!(e.coefficient(p, 0, 0).is_none(), "n^{p} should vanish");
    }
    assert_eq!(e.coefficient(-11, 1, 0).unwrap().coeff(0), rat(9483264, 5078125));
    let c11 = e.coefficient(-11, 0, 0).unwrap();
    assert_eq!(c11.coeff(1), rat(677376, 1625));
    assert_eq!(c11.coeff(0), Rational::from((-11613978096i64, 3630859375i64)));
    assert!(c11.degree() == 1);
}

#[test]
fn bst_expansion_matches_sequence_through_n5() {
    let sol = solve(&Family::bst(), 30);
    let e = exact_expansion(&Family::bst(), 5).unwrap();
    let ns = [200u64, 400, 800, 1400, 2000];
    let rep = validate_expansion(&Family::bst(), &e.truncated(0), &sol, &ns, 384).unwrap();
    for (_, s) in rep.scaled(5) {
        assert!((s / (336.0 / 3125.0) - 1.0).abs() < 0.06, "{s}");
    }
    let lim = rep.scaled_limit(5).unwrap();
    assert!((lim / (336.0 / 3125.0) - 1.0).abs() < 0.01, "{lim}");
    let rep = validate_expansion(&Family::bst(), &e, &sol, &ns, 384).unwrap();
    assert!(rep.fitted_exponent > 5.5, "{}", rep.fitted_exponent);
}

#[test]
fn mary_table() {
    let want = [
        (2, rat(3, 5), Rational::from((56, 3125))),
        (3, rat(4, 7), Rational::from((6927696, 78236585))),
        (4, rat(5, 9), Rational::from((10419284224i64, 15568564095i64))),
        (
            5,
            rat(6, 11),
            Rational::from_str_radix("1526061507281984000/194179984589469879", 10).unwrap(),
        ),
        (
            6,
            rat(7, 13),
            Rational::from_str_radix("132275788517112977050000/942913507718961369877", 10).unwrap(),
        ),
    ];
    for (m, c0, k) in want {
        let e = exact_expansion(&Family::MarySearch { m }, 2 * m as i64 + 1).unwrap();
        assert_eq!(e.units, if m == 2 { "W" } else { "Y" });
        let e = e.normalized().unwrap();
        assert_eq!(plain(&e, 1), 1);
        assert_eq!(plain(&e, 0), c0);
        assert_eq!(Rational::from((m + 1, 2 * m + 1)), c0);
        for p in 1..=2 * m as i64 {
            assert!(e.coefficient(-p, 0, 0).is_none());
        }
        assert_eq!(plain(&e, -(2 * m as i64) - 1), k, "m={m}");
    }
    // λ_m^{m−1} = (2m−1)!/(m−1)!²
    for m in 2..=6u32 {
        let model = psiseries::ode_models::exact_model(&Family::MarySearch { m }).unwrap();
        let f = factorial(m as u64 - 1);
        let want = Rational::from((factorial(2 * m as u64 - 1), f.clone() * f));
        assert_eq!(model.w0_power, want);
    }
}

#[test]
fn mary2_validation() {
    let f = Family::MarySearch { m: 2 };
    let sol = solve(&f, 30);
    let e = exact_expansion(&f, 5).unwrap();
    let rep = validate_expansion(&f, &e.truncated(0), &sol, &[800, 1600, 2400], 384).unwrap();
    let lim = rep.scaled_limit(5).unwrap();
    // W units: λ₂ = 6
    assert!((lim / (336.0 / 3125.0) - 1.0).abs() < 0.02, "{lim}");
}

#[test]
fn d_bst_leading_constants() {
    for d in 2..=5u32 {
        let e = exact_expansion(&Family::BstEquality { d }, 0).unwrap();
        let lead = e.leading();
        assert_eq!(lead.power, d as i64 - 1);
        let f = factorial(d as u64 - 1);
        assert_eq!(lead.coeff.coeff(0), Rational::from((factorial(2 * d as u64 - 1), f.clone() * f)));
        let n = e.normalized().unwrap();
        let want = Rational::from(((d as i64 - 1) * (2 * d as i64 - 1), 3 * d as i64 - 1));
        assert_eq!(plain(&n, d as i64 - 2), want, "d={d}");
    }
    // odd d: the expansion is a polynomial
    let e = exact_expansion(&Family::BstEquality { d: 3 }, 12).unwrap();
    assert!(e.terms.iter().all(|t| t.power >= 0));
    // even d: first log term at n^{−2d−1}
    let e = exact_expansion(&Family::BstEquality { d: 4 }, 9).unwrap();
    assert!(e.terms.iter().filter(|t| t.power < 0).all(|t| t.power == -9));
}

fn boltzmann_k(nu: i64) -> Rational {
    let num = (nu - 1) * (nu - 2) * (nu + 3) * (nu + 4) * (2 * nu + 1) * (2 * nu + 3) * (3 * nu + 2) * (3 * nu + 4);
    let q = nu * nu + 2 * nu + 2;
    let den = Rational::from(43750) * Rational::from(nu).pow_int(5) * Rational::from(nu + 1).pow_int(5) * (nu + 2);
    -(Rational::from(num) * q * q) / den
}

#[test]
fn boltzmann_constants() {
    for nu in 1..=6u32 {
        let e = exact_expansion(&Family::Boltzmann { nu }, 5).unwrap();
        let v = nu as i64;
        assert_eq!(e.index_shift, 1);
        assert_eq!(plain(&e, 1), Rational::from((6 * v * (v + 1), v + 2)));
        assert_eq!(plain(&e, 0), Rational::from((-6 * (v * v + 2 * v + 2), 5 * (v + 2))));
        let k = boltzmann_k(v);
        assert_eq!(e.plain(-5).unwrap_or_default(), Rational::from(24) * k.clone(), "nu={nu}");
        if nu <= 2 {
            assert_eq!(k, 0);
            assert!(e.coefficient(-5, 0, 0).is_none());
        }
    }
}

#[test]
fn boltzmann_validation() {
    let f = Family::Boltzmann { nu: 3 };
    let sol = solve(&f, 30);
    let e = exact_expansion(&f, 5).unwrap();
    let rep = validate_expansion(&f, &e.truncated(0), &sol, &[800, 1600, 2400], 384).unwrap();
    let lim = rep.scaled_limit(5).unwrap();
    let k = boltzmann_k(3).to_f64() * 24.0;
    assert!((lim / k - 1.0).abs() < 0.02, "{lim} {k}");
}

#[test]
fn quadtree_coefficients() {
    let fld = quadtree_field();
    let q = |a: i64, b: i64, d: i64| QNum::new(rat(a, d), rat(b, d), &fld);
    let e = quadratic_expansion(&Family::QuadtreeMoments, 6).unwrap();
    let v = QNum::generator(&fld);
    // 3v², 9v/5
    assert_eq!(e.plain(1).unwrap(), v.mul(&v).mul_i64(3));
    assert_eq!(e.plain(0).unwrap(), q(0, 9, 5));
    // −1404(39v+139)/21875, 8424(139v+495)/21875
    assert_eq!(e.plain(-5).unwrap(), q(-1404 * 139, -1404 * 39, 21875));
    assert_eq!(e.plain(-6).unwrap(), q(8424 * 495, 8424 * 139, 21875));
    for p in 1..=4 {
        assert!(e.coefficient(-p, 0, 0).is_none());
    }
}

#[test]
fn quadtree_validation_and_mgf() {
    let f = Family::QuadtreeMoments;
    let sol = solve(&f, 32);
    let e = real_expansion(&f, 5, 384).unwrap();
    let rep = validate_expansion(&f, &e.truncated(0), &sol, &[1500, 3000], 384).unwrap();
    let v = psiseries::recurrences::quadtree_v(64).to_f64();
    let want = -1404.0 * (39.0 * v + 139.0) / 21875.0;
    let lim = rep.scaled_limit(5).unwrap();
    assert!((lim / want - 1.0).abs() < 0.02, "{lim} {want}");

    let small = quadtree_mgf(&big("0.000001", 256), &sol.rho, 256).unwrap();
    assert!((small.value.to_f64() - 1.0).abs() < 1e-5);
    let mut pts = Vec::new();
    let mut last = f64::INFINITY;
    for z in [10, 20, 30, 50] {
        let r = quadtree_mgf(&BigReal::from_i64(z, 256), &sol.rho, 256).unwrap();
        let rel = r.relative_gap.abs().to_f64();
        assert!(rel < 0.03 && rel < last, "z={z} {rel}");
        last = rel;
        pts.push(((z as f64).ln(), r.scaled_gap.abs().ln().to_f64()));
    }
    let slope = loglog_slope(&pts);
    assert!((slope + 6.0 / v).abs() < 1.0, "{slope}");
}

#[test]
fn partition_d2_constants() {
    // ω = 1: v = λ²/2 in Q(λ)
    let fld = quadtree_field();
    let l = QNum::generator(&fld);
    let v = l.mul(&l).div(&l.from_i64_like(2));
    let e = quadratic_expansion(&Family::Partition { d: 2, omega: BigReal::from_i64(1, 128) }, 5).unwrap();
    let one = v.one_like();
    let k = v.sub(&one).mul(&v.sub(&one))
        .mul(&v.sub(&one.mul_i64(6)))
        .mul(&v.mul_i64(6).sub(&one))
        .mul(&v.mul_i64(2).add(&one.mul_i64(3)))
        .mul(&v.mul_i64(3).add(&one.mul_i64(2)))
        .div(&v.mul(&v).mul(&v).mul(&v).mul(&v).mul_i64(43750));
    assert_eq!(e.plain(1).unwrap(), v.mul_i64(6));
    assert_eq!(e.plain(0).unwrap(), v.sub(&one).mul_i64(-6).div(&one.mul_i64(5)));
    assert_eq!(e.plain(-5).unwrap(), k.mul_i64(-24));
}

#[test]
fn partition_c1() {
    for d in 2..=4u32 {
        for om in ["1", "2.5"] {
            let omega = big(om, 320);
            let f = Family::Partition { d, omega: omega.clone() };
            let e = real_expansion(&f, 0, 320).unwrap().normalized().unwrap();
            let lam = malthusian_lambda(&omega, d, 320).unwrap();
            let binom = (d * (d - 1) / 2) as i64;
            let want = &(&(&(&omega * 2) + (d as i64 - 1)) * binom) / &(&lam * (3 * d as i64 - 1));
            let got = e.plain(d as i64 - 2).unwrap();
            assert!(got.agreement_digits(&want) > 80.0, "d={d} omega={om}");
        }
    }
}

#[test]
fn partition_d2_validation() {
    let omega = BigReal::from_i64(1, 384);
    let f = Family::Partition { d: 2, omega };
    let sol = solve(&f, 32);
    let e = real_expansion(&f, 5, 384).unwrap();
    let rep = validate_expansion(&f, &e.truncated(0), &sol, &[1500, 3000], 384).unwrap();
    let want = e.plain(-5).unwrap().to_f64();
    let lim = rep.scaled_limit(5).unwrap();
    assert!((lim / want - 1.0).abs() < 0.02, "{lim} {want}");
}

#[test]
fn coefficients_do_not_depend_on_precision() {
    let f = Family::QuadtreeMoments;
    let a = real_expansion(&f, 6, 256).unwrap();
    let b = real_expansion(&f, 6, 512).unwrap();
    let x = quadratic_expansion(&f, 6).unwrap();
    for p in [1, 0, -5, -6] {
        let exact = x.plain(p).unwrap().to_bigreal(512);
        assert!(a.plain(p).unwrap().agreement_digits(&exact) > 70.0);
        assert!(b.plain(p).unwrap().agreement_digits(&exact) > 145.0);
    }
    let _ = CPoly::constant(Rational::from(1));
}
