use psiseries::numeric::{factorial, rat, BigReal, Field, RatPoly};
use psiseries::ode_models::*;
use psiseries::recurrences::{gf_coefficients, quadtree_v, Family};
use psiseries::Rational;

fn r(n: i64) -> Rational {
    Rational::from(n)
}

#[test]
fn bst_matrix_as_printed() {
    let ms = build_mode_system(&Family::bst()).unwrap();
    assert_eq!(ms.dimension, 2);
    assert_eq!(ms.matrix, vec![vec![r(2), r(1)], vec![r(12), r(3)]]);
    assert_eq!(ms.a_k(7), vec![vec![r(5), r(-1)], vec![r(-12), r(4)]]);
    assert!(ms.printed);
}

#[test]
fn fringe_and_mary_entries() {
    for t in 0..=4u32 {
        let ms = build_mode_system(&Family::FringeBalanced { t }).unwrap();
        assert_eq!(ms.dimension, 4 * t as usize + 2);
        let want = Rational::from(2 * factorial(4 * t as u64 + 3)) / Rational::from(factorial(2 * t as u64 + 1));
        assert_eq!(ms.matrix[ms.dimension - 1][2 * t as usize], want);
    }
    for m in 2..=6u32 {
        let ms = build_mode_system(&Family::MarySearch { m }).unwrap();
        assert_eq!(ms.dimension, 2 * (m as usize - 1));
        assert_eq!(ms.matrix[ms.dimension - 1][0], Rational::from(m * factorial(2 * m as u64 - 1)));
    }
}

#[test]
fn dbst_corner_magnitude_and_sign() {
    let ms = build_mode_system(&Family::BstEquality { d: 3 }).unwrap();
    assert_eq!(ms.dimension, 3);
    // magnitude as displayed; sign fixed by the determinant identity
    assert_eq!(ms.matrix[2][0].clone().abs(), r(120));
    assert_eq!(ms.matrix[2][0], r(-120));
}

#[test]
fn determinant_matches_resonance_polynomial() {
    let mut fams: Vec<Family> = (2..=8).map(|d| Family::BstEquality { d }).collect();
    fams.extend((2..=8).map(|m| Family::MarySearch { m }));
    fams.extend((0..=4).map(|t| Family::FringeBalanced { t }));
    fams.push(Family::PhyloAgreement);
    fams.push(Family::QuadtreeMoments);
    fams.push(Family::RelaxedKd { beta: BigReal::from_f64(0.5, 256) });
    fams.push(Family::Partition { d: 2, omega: BigReal::from_i64(1, 256) });
    fams.push(Family::Boltzmann { nu: 3 });
    for f in fams {
        let ms = build_mode_system(&f).unwrap();
        let det = ms.characteristic_polynomial();
        let q = monic_resonance(&f).unwrap();
        let (_, rem) = det.div_rem(&q);
        assert!(rem.is_zero(), "{}: {det} vs {q}", f.name());
        assert_eq!(det.degree(), q.degree(), "{}", f.name());
    }
}

#[test]
fn partition_general_d_has_no_system() {
    let f = Family::Partition { d: 3, omega: BigReal::from_i64(1, 256) };
    assert!(matches!(build_mode_system(&f), Err(psiseries::Error::Unsupported(_))));
    assert!(monic_resonance(&f).is_ok());
}

#[test]
fn leading_orders() {
    let lo = leading_order(&Family::bst(), 256).unwrap();
    assert_eq!((lo.alpha, lo.exact_power.clone().unwrap()), (2, r(6)));
    let lo = leading_order(&Family::MarySearch { m: 3 }, 256).unwrap();
    assert_eq!(lo.exact_power.unwrap(), r(30));
    assert!(lo.amplitude.agreement_digits(&BigReal::from_i64(30, 256).sqrt()) > 70.0);
    let lo = leading_order(&Family::FringeBalanced { t: 1 }, 256).unwrap();
    assert_eq!(lo.exact_power.unwrap(), rat(35, 9));
    for d in 2..=5u32 {
        let lo = leading_order(&Family::BstEquality { d }, 256).unwrap();
        assert_eq!(lo.alpha, d as i64);
        let want = Rational::from(factorial(2 * d as u64)) / Rational::from(2 * factorial(d as u64));
        assert_eq!(lo.exact_power.unwrap(), want);
    }
    let v = quadtree_v(256);
    let lo = leading_order(&Family::QuadtreeMoments, 256).unwrap();
    assert!(lo.amplitude.agreement_digits(&(&(&v * &v) * 3)) > 70.0);
    let beta = BigReal::from_f64(0.375, 256);
    let lo = leading_order(&Family::RelaxedKd { beta: beta.clone() }, 256).unwrap();
    assert_eq!(lo.alpha, 1);
    assert!(lo.amplitude.agreement_digits(&(BigReal::from_i64(2, 256) / (&beta + 1))) > 70.0);
    let lo = leading_order(&Family::Boltzmann { nu: 3 }, 256).unwrap();
    assert!(lo.amplitude.agreement_digits(&BigReal::from_rational(&rat(72, 5), 256)) > 70.0);
}

#[test]
fn exact_fields_agree_with_floats() {
    let q = quadtree_exact().unwrap();
    let w0 = q.w0_exact().unwrap();
    let v = quadtree_v(256);
    assert!(w0.to_bigreal(256).agreement_digits(&(&(&v * &v) * 3)) > 70.0);
    let p = partition_d2_omega1_exact().unwrap();
    let f = model_for(&Family::Partition { d: 2, omega: BigReal::from_i64(1, 256) }, 256).unwrap();
    assert!(p.w0_power.to_bigreal(256).agreement_digits(&f.w0_power) > 70.0);
}

fn check_taylor(f: &Family, n: usize, digits: f64) {
    let model = model_for(f, 320).unwrap();
    let g = gf_coefficients(f, n, 320).unwrap();
    let res = model.taylor_residual(&g, n).unwrap();
    for (k, x) in res.iter().enumerate() {
        let scale = g[k].abs() + BigReal::from_i64(1, 320);
        let rel = (x.abs() / scale).log2_abs() / -3.3219;
        assert!(x.is_zero() || rel > digits, "{} k={k}: {x}", f.name());
    }
}

#[test]
fn zform_annihilates_generating_functions() {
    check_taylor(&Family::bst(), 60, 80.0);
    check_taylor(&Family::PhyloAgreement, 60, 80.0);
    check_taylor(&Family::BstEquality { d: 4 }, 40, 80.0);
    check_taylor(&Family::MarySearch { m: 4 }, 40, 80.0);
    check_taylor(&Family::FringeBalanced { t: 2 }, 40, 80.0);
    check_taylor(&Family::Boltzmann { nu: 3 }, 40, 80.0);
    check_taylor(&Family::QuadtreeMoments, 40, 60.0);
    check_taylor(&Family::RelaxedKd { beta: BigReal::from_f64(0.6, 320) }, 40, 60.0);
    check_taylor(&Family::Partition { d: 2, omega: BigReal::from_f64(1.5, 320) }, 40, 60.0);
}

#[test]
fn resonance_polynomials_of_scalar_families() {
    let q = RatPoly::new(vec![r(-6), r(-5), r(1)]);
    assert_eq!(monic_resonance(&Family::QuadtreeMoments).unwrap(), q);
    assert_eq!(monic_resonance(&Family::Boltzmann { nu: 5 }).unwrap(), q);
    assert_eq!(monic_resonance(&Family::Partition { d: 2, omega: BigReal::from_f64(2.5, 256) }).unwrap(), q);
    let kd = RatPoly::new(vec![r(-2), r(-1), r(1)]);
    assert_eq!(monic_resonance(&Family::RelaxedKd { beta: BigReal::from_f64(0.3, 256) }).unwrap(), kd);
}
