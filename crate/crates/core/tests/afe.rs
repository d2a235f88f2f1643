use fewcoef::afe::{
    compute_terms, epsilon_sqrt, error_l1, evaluate, evaluate_with_terms, f1, f2, hardy_z, DeltaValue,
};
use fewcoef::cache::{evaluate_cached, TermsCache};
use fewcoef::instances::{builtin, delta_known};
use fewcoef::lmodel::{fe_classical, fe_zeta, CRat, CoefficientEntry, Surd, TestFunction};
use fewcoef::numerics::{IntegrationPlan, PrecisionContext};
use proptest::prelude::*;
use rug::float::Constant;
use rug::{Complex, Float, Rational};

fn r(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn crit(t: Rational) -> CRat {
    CRat::new(r(1, 2), t)
}

fn diff(a: &Float, b: &str) -> f64 {
    let b = Float::with_val(a.prec(), Float::parse(b).unwrap());
    Float::with_val(a.prec(), a - &b).abs().to_f64()
}

fn zeta_z(t: Rational, g: &TestFunction, digits: u32) -> Float {
    let inst = builtin("zeta", 30).unwrap();
    let e = evaluate(&inst, &crit(t), g, None, &PrecisionContext::new(digits)).unwrap();
    assert!(e.deltas.is_empty());
    e.known_part
}

// reference values: mpmath zeta / siegelz at 40 digits

#[test]
fn zeta_at_one_half() {
    let z = zeta_z(Rational::new(), &TestFunction::one(), 30);
    assert!(z < 0);
    assert!(diff(&z, "-1.460354508809586812889499152515298012467") < 1e-28);
}

#[test]
fn zeta_hardy_z_at_ten() {
    let z = zeta_z(Rational::from(10), &TestFunction::one(), 30);
    assert!(diff(&z, "-1.549194546181022389085217301856860745424") < 1e-28);
}

#[test]
fn zeta_first_zero() {
    let g = TestFunction::one();
    let z = zeta_z(r(14134725, 1000000), &g, 30);
    assert!(z.to_f64().abs() < 1e-5);
    assert!(diff(&z, "-1.124183498394175333001114943581281924661e-7") < 1e-28);
    let below = zeta_z(r(1413, 100), &g, 20);
    let above = zeta_z(r(1414, 100), &g, 20);
    assert!(below < 0 && above > 0);
}

#[test]
fn hardy_z_is_even() {
    let g = TestFunction::one();
    let a = zeta_z(Rational::from(7), &g, 25);
    let b = zeta_z(Rational::from(-7), &g, 25);
    assert!(Float::with_val(a.prec(), &a - &b).abs().to_f64() < 1e-22);
}

#[test]
fn pole_is_rejected() {
    let inst = builtin("zeta", 10).unwrap();
    let ctx = PrecisionContext::new(20);
    let s = CRat::real(1);
    assert!(evaluate(&inst, &s, &TestFunction::one(), None, &ctx).is_err());
}

#[test]
fn invalid_test_function_is_rejected() {
    let inst = builtin("zeta", 10).unwrap();
    let ctx = PrecisionContext::new(20);
    let g = TestFunction::beta(Rational::from(1));
    assert!(evaluate(&inst, &crit(Rational::from(5)), &g, None, &ctx).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn zeta_test_function_independence(beta in -70i64..70, t in 0i64..30) {
        let digits = 30;
        let base = zeta_z(Rational::from(t), &TestFunction::one(), digits);
        let other = zeta_z(Rational::from(t), &TestFunction::beta(r(beta, 100)), digits);
        let d = Float::with_val(base.prec(), &base - &other).abs().to_f64();
        prop_assert!(d < 10f64.powi(-(digits as i32 - 3)), "{}", d);
    }
}

#[test]
fn zeta_independence_fixed_shift() {
    let a = zeta_z(Rational::from(10), &TestFunction::one(), 30);
    let b = zeta_z(Rational::from(10), &TestFunction::beta(r(1, 4)), 30);
    assert!(Float::with_val(a.prec(), &a - &b).abs().to_f64() < 1e-27);
}

#[test]
fn delta_test_function_independence() {
    let inst = delta_known(300).unwrap();
    let ctx = PrecisionContext::new(30);
    let s = crit(Rational::from(10));
    let a = evaluate(&inst, &s, &TestFunction::one(), None, &ctx).unwrap();
    let b = evaluate(&inst, &s, &TestFunction::beta(Rational::from(1)), None, &ctx).unwrap();
    let c = evaluate(&inst, &s, &TestFunction::beta_gauss(r(1, 2), r(1, 100), Rational::from(10)), None, &ctx).unwrap();
    for e in [&b, &c] {
        let d = Float::with_val(a.known_part.prec(), &a.known_part - &e.known_part).abs().to_f64();
        assert!(d < 1e-27, "{d}");
    }
    assert!(a.imag_residual < 1e-25);
}

/// Γ(a, x) = e^{−x} x^a / (x + 1 − a − 1(1−a)/(x + 3 − a − 2(2−a)/(…))), evaluated backward.
fn upper_gamma(a: &Complex, x: &Float, depth: u32) -> Complex {
    let p = a.prec().0;
    let mut t = Complex::with_val(p, x + Float::with_val(p, 2 * depth + 1)) - a;
    for k in (1..=depth).rev() {
        let num = Complex::with_val(p, Complex::with_val(p, k - a) * k);
        let mut next = Complex::with_val(p, x + Float::with_val(p, 2 * k - 1)) - a;
        next -= num / &t;
        t = next;
    }
    let lead = Complex::with_val(p, a * x.clone().ln()) - x;
    lead.exp() / t
}

#[test]
fn zeta_f1_is_incomplete_gamma() {
    let ctx = PrecisionContext::new(30);
    let p = ctx.working_bits;
    let fe = fe_zeta();
    let s = Complex::with_val(p, (0.5, 3));
    let plan = IntegrationPlan::new(1.0, 1.0 / 16.0, 160.0).unwrap();
    let pi = Float::with_val(p + 64, Constant::Pi);
    let a = Complex::with_val(p + 64, &s / 2u32);
    let mut last = f64::INFINITY;
    for n in 1u64..=4 {
        let v = f1(&s, n, &TestFunction::one(), &fe, &plan, &ctx).unwrap();
        let x = Float::with_val(p + 64, &pi * (n * n));
        let expect = upper_gamma(&a, &x, 4000);
        let err = Float::with_val(64, Complex::with_val(p, &v - &expect).abs_ref()).to_f64();
        let size = Float::with_val(64, expect.abs_ref()).to_f64();
        assert!(err < 1e-28 * size.max(1e-10), "n = {n}: {err} vs {size}");
        // decays with n
        let m = Float::with_val(64, v.abs_ref()).to_f64();
        assert!(m < last);
        last = m;
    }
}

#[test]
fn f2_real_for_real_s() {
    let ctx = PrecisionContext::new(25);
    let p = ctx.working_bits;
    let fe = fe_zeta();
    let one_minus_s = Complex::with_val(p, (Float::with_val(p, 2) / 3u32, 0));
    let plan = IntegrationPlan::new(1.0, 1.0 / 16.0, 160.0).unwrap();
    for n in 1..=3 {
        let v = f2(&one_minus_s, n, &TestFunction::one(), &fe, &plan, &ctx).unwrap();
        assert!(v.imag().to_f64().abs() < 1e-25 * v.real().to_f64().abs());
    }
}

#[test]
fn contour_left_of_poles_is_rejected() {
    let ctx = PrecisionContext::new(20);
    let p = ctx.working_bits;
    let fe = fe_zeta();
    let s = Complex::with_val(p, (-2, 1));
    let plan = IntegrationPlan::new(0.5, 1.0 / 8.0, 40.0).unwrap();
    assert!(f1(&s, 1, &TestFunction::one(), &fe, &plan, &ctx).is_err());
}

/// The per-n coefficients from the shared node sums agree with separate f1/f2 integrals.
fn check_slow_path(fe: &fewcoef::lmodel::FunctionalEquation, s: &CRat, g: &TestFunction, cutoff: usize, ns: &[u64]) {
    let ctx = PrecisionContext::new(30);
    let terms = compute_terms(fe, s, g, cutoff, &ctx).unwrap();
    let p = terms.prec();
    let wctx = PrecisionContext::with_bits(30, p).unwrap();
    let sc = s.to_complex(p);
    let one_minus_s = Complex::with_val(p, 1 - &sc);
    let q = fe.q.to_float(p);
    let lnq = Float::with_val(p, q.ln_ref());
    let eps = fe.epsilon.to_complex(p);
    let norm = terms.normalizer();
    let scale = (1..=cutoff as u64).map(|n| terms.magnitude(n)).fold(0.0, f64::max);
    // same nodes plus more: the standalone integrals check their edges against their own size
    let mut plan = terms.plan.plan.clone();
    plan.half_width *= 2.0;
    for &n in ns {
        let lnn = Float::with_val(p, n).ln();
        let a = f1(&sc, n, g, fe, &plan, &wctx).unwrap();
        let b = f2(&one_minus_s, n, g, fe, &plan, &wctx).unwrap();
        let e1 = Complex::with_val(p, &sc * Float::with_val(p, &lnq - &lnn)).exp();
        let e2 = Complex::with_val(p, &one_minus_s * &lnq) - Complex::with_val(p, &one_minus_s * &lnn);
        let mut t = Complex::with_val(p, &a * &e1);
        t += Complex::with_val(p, &b * e2.exp()) * &eps;
        t /= &norm;
        let dr = Float::with_val(p, t.real() - terms.coefficient(n)).abs().to_f64();
        let di = Float::with_val(p, t.imag() - &terms.coeff_im[n as usize - 1]).abs().to_f64();
        assert!(dr < 1e-27 * scale && di < 1e-27 * scale, "n = {n}: {dr} {di} (scale {scale})");
    }
}

#[test]
fn fast_terms_match_direct_integrals_zeta() {
    check_slow_path(&fe_zeta(), &crit(Rational::from(5)), &TestFunction::beta(r(1, 4)), 20, &[1, 2, 3]);
}

#[test]
fn fast_terms_match_direct_integrals_weight_12() {
    let g = TestFunction::beta_gauss(r(1, 2), r(1, 100), Rational::from(10));
    check_slow_path(&fe_classical(12).unwrap(), &crit(Rational::from(10)), &g, 100, &[1, 2, 5, 40]);
}

#[test]
fn affine_in_coefficients() {
    let ctx = PrecisionContext::new(30);
    let base = delta_known(200).unwrap();
    let blind = base.blind(50, Rational::from(1)).unwrap();
    let s = crit(Rational::from(10));
    let terms = compute_terms(&blind.fe, &s, &TestFunction::beta(r(1, 2)), 200, &ctx).unwrap();
    let e = evaluate_with_terms(&blind, &terms).unwrap();
    assert_eq!(e.deltas.len(), 151);
    for (q, v) in [(53u64, r(1, 3)), (97, r(-7, 5)), (150, Rational::from(2))] {
        let table = blind.coeffs.with_symbol_value(q, &Surd::rational(v.clone())).unwrap();
        assert_eq!(table.entry(q), &CoefficientEntry::Known(Surd::rational(v.clone())));
        let mut inst = blind.clone();
        inst.coeffs = table;
        let e2 = evaluate_with_terms(&inst, &terms).unwrap();
        assert!(!e2.deltas.contains_key(&q));
        let b = inst.coeffs.known_value(q, e.known_part.prec()).unwrap();
        let shift = Float::with_val(e.known_part.prec(), e.delta(q).unwrap() * &b);
        let moved = Float::with_val(e.known_part.prec(), &e2.known_part - &e.known_part);
        let err = Float::with_val(64, &moved - &shift).abs().to_f64();
        assert!(err < 1e-40 * shift.to_f64().abs().max(1.0), "q = {q}: {err}");
        // the same step on the evaluation itself
        let e3 = e.with_symbol_value(q, &b);
        let err = Float::with_val(64, &e3.known_part - &e2.known_part).abs().to_f64();
        assert!(err < 1e-40);
    }
    // filling every symbol with τ(n) recovers the fully known evaluation
    let full = evaluate_with_terms(&base, &terms).unwrap();
    let mut acc = e.known_part.clone();
    for (q, d) in &e.deltas {
        acc += Float::with_val(acc.prec(), &d.0 * base.coeffs.known_value(*q, acc.prec()).unwrap());
    }
    assert!(Float::with_val(64, &acc - &full.known_part).abs().to_f64() < 1e-35);
}

#[test]
fn tail_model_self_consistent() {
    let ctx = PrecisionContext::new(30);
    let inst = delta_known(400).unwrap();
    let s = crit(Rational::from(10));
    for g in [
        TestFunction::beta_gauss(r(1, 2), r(1, 100), Rational::from(10)),
        TestFunction::beta_gauss(Rational::new(), r(1, 50), Rational::from(10)),
    ] {
        let e = evaluate(&inst, &s, &g, None, &ctx).unwrap();
        let t = &e.tail;
        let ratio = t.predicted_last / t.actual_last;
        assert!((0.1..=10.0).contains(&ratio), "{g}: {t:?}");
        assert!(t.slope < 0.0);
        assert!(e.tail_bound >= 0.0 && e.tail_bound.is_finite());
        // decreasing over the fit window
        let terms = compute_terms(&inst.fe, &s, &g, 400, &ctx).unwrap();
        let lo = t.fit_end - t.window + 1;
        assert!(terms.magnitude(t.fit_end as u64) < terms.magnitude(lo as u64));
    }
}

#[test]
fn error_l1_trivial_cases() {
    let inst = builtin("zeta", 20).unwrap();
    let ctx = PrecisionContext::new(20);
    let mut e = evaluate(&inst, &crit(Rational::from(5)), &TestFunction::one(), None, &ctx).unwrap();
    e.tail_bound = 0.0;
    assert_eq!(error_l1(&e, 5, 1.0), 0.0);
    e.deltas.insert(83, DeltaValue(Float::with_val(64, 2)));
    assert_eq!(error_l1(&e, 5, 1.0), 10.0);
    e.deltas.insert(4, DeltaValue(Float::with_val(64, -1)));
    assert_eq!(error_l1(&e, 5, 2.0), 20.0 + 30.0);
    e.tail_bound = 0.5;
    assert_eq!(error_l1(&e, 5, 2.0), 50.5);
}

#[test]
fn hardy_z_checks() {
    let ctx = PrecisionContext::new(20);
    let p = ctx.working_bits;
    let fe = fe_classical(12).unwrap();
    let g = TestFunction::one();
    // a real multiple of the normalizer maps to that real number
    let s = crit(Rational::from(3));
    let norm = fewcoef::afe::z_normalizer(&fe, &g, &s.to_complex(p), p).unwrap();
    let lam = Complex::with_val(p, &norm * Float::with_val(p, 2.5));
    let z = hardy_z(&lam, &s, &g, &fe, &ctx).unwrap();
    assert!((z.to_f64() - 2.5).abs() < 1e-18);
    let rotated = Complex::with_val(p, &norm * Complex::with_val(p, (0, 1)));
    assert!(hardy_z(&rotated, &s, &g, &fe, &ctx).is_err());
    assert!(hardy_z(&lam, &CRat::new(r(1, 3), Rational::from(3)), &g, &fe, &ctx).is_err());
    let mut odd = fe.clone();
    odd.epsilon = CRat::real(-1);
    let i = epsilon_sqrt(&odd, p).unwrap();
    assert_eq!(i, Complex::with_val(p, (0, 1)));
    let mut general = fe;
    general.epsilon = CRat::new(r(3, 5), r(4, 5));
    assert!(epsilon_sqrt(&general, p).is_err());
    assert!(hardy_z(&lam, &s, &g, &general, &ctx).is_err());
}

#[test]
fn cache_round_trip() {
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("afe-cache-test");
    let _ = std::fs::remove_dir_all(&dir);
    let cache = TermsCache::new(&dir).unwrap();
    let inst = builtin("zeta", 20).unwrap();
    let ctx = PrecisionContext::new(25);
    let s = crit(Rational::from(4));
    let g = TestFunction::beta(r(1, 5));
    let a = evaluate_cached(Some(&cache), &inst, &s, &g, &ctx).unwrap();
    let b = evaluate_cached(Some(&cache), &inst, &s, &g, &ctx).unwrap();
    let c = evaluate_cached(None, &inst, &s, &g, &ctx).unwrap();
    assert_eq!(a.known_part, b.known_part);
    assert_eq!(a.known_part, c.known_part);
    assert_eq!(a.tail, c.tail);
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 1);
}
