use fewcoef::forms::{
    delta_expansion, eigenform_table, eisenstein, hecke_eigenforms_s24, power_lift, restrict_to_primes, tau,
};
use fewcoef::lmodel::{expand_euler, fe_classical, CoefficientEntry, LocalFactors, Surd};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use std::collections::BTreeMap;

fn ints(v: &[i64]) -> Vec<Integer> {
    v.iter().map(|&x| Integer::from(x)).collect()
}

#[test]
fn eisenstein_leading_terms() {
    assert_eq!(eisenstein(4, 2).unwrap().coeffs, ints(&[1, 240, 2160]));
    assert_eq!(eisenstein(6, 1).unwrap().coeffs, ints(&[1, -504]));
    assert_eq!(eisenstein(6, 30).unwrap().coeffs[0], 1);
    assert!(eisenstein(8, 3).is_err());
}

#[test]
fn delta_leading_terms_and_multiplicativity() {
    let d = delta_expansion(12).unwrap();
    assert_eq!(d.coeffs[0], 0);
    assert_eq!(d.coeffs[1], 1);
    assert_eq!(d.coeffs[2], -24);
    assert_eq!(d.coeffs[3], 252);
    assert_eq!(d.coeffs[6], Integer::from(&d.coeffs[2] * &d.coeffs[3]));
    assert_eq!(d.coeffs[12], Integer::from(&d.coeffs[4] * &d.coeffs[3]));
}

#[test]
fn tau_congruence_mod_691() {
    let t = tau(50);
    for n in 1..=50u32 {
        let mut s = Integer::new();
        for d in 1..=n {
            if n % d == 0 {
                s += Integer::from(d).pow(11);
            }
        }
        let diff = Integer::from(&t[n as usize] - &s);
        assert!(diff.is_divisible(&Integer::from(691)), "n = {n}");
    }
}

#[test]
fn tau_hecke_relation_at_prime_squares() {
    let t = tau(30);
    for p in [2usize, 3, 5] {
        let rhs = Integer::from(t[p].square_ref()) - Integer::from(p).pow(11);
        assert_eq!(t[p * p], rhs);
    }
}

#[test]
fn s24_eigenvalues() {
    let f = hecke_eigenforms_s24(20).unwrap();
    assert_eq!(f.d, 144169);
    let plus = Surd { a: Rational::from(540), b: Rational::from(12) };
    let minus = Surd { a: Rational::from(540), b: Rational::from(-12) };
    assert_eq!(f.a2, [minus, plus]);
    // trace of T_2 from the basis matrix
    let tr = Integer::from(&f.t2[0][0] + &f.t2[1][1]);
    assert_eq!(f.a2[0].add(&f.a2[1]), Surd::rational(Rational::from(tr)));
}

#[test]
fn s24_hecke_relation_and_multiplicativity() {
    let f = hecke_eigenforms_s24(40).unwrap();
    for which in 0..2 {
        let a = f.coefficients(which);
        assert_eq!(a[1], Surd::one());
        let lhs = a[2].mul(&a[2], &f.d).sub(&Surd::rational(Rational::from(Integer::from(2).pow(23))));
        assert_eq!(a[4], lhs);
        assert_eq!(a[6], a[2].mul(&a[3], &f.d));
        assert_eq!(a[35], a[5].mul(&a[7], &f.d));
    }
}

#[test]
fn s24_t3_eigenvalues_solve_t3_characteristic_polynomial() {
    let f = hecke_eigenforms_s24(20).unwrap();
    let m = f.hecke_matrix(3).unwrap();
    let tr = Rational::from(&m[0][0] + &m[1][1]);
    let det = Rational::from(Integer::from(&m[0][0] * &m[1][1]) - Integer::from(&m[0][1] * &m[1][0]));
    for which in 0..2 {
        let a3 = f.coefficients(which)[3].clone();
        let val = a3.mul(&a3, &f.d).sub(&a3.scale(&tr)).add(&Surd::rational(det.clone()));
        assert!(val.is_zero());
    }
}

#[test]
fn eigenform_b2_normalization() {
    let f = hecke_eigenforms_s24(10).unwrap();
    let t = eigenform_table(&f.coefficients(1), 24, &f.d).unwrap();
    let b2 = t.known_value(2, 200).unwrap();
    let expect = (Float::with_val(200, 144169).sqrt() * 12u32 + 540u32) / Float::with_val(200, 2).pow(Float::with_val(200, 23) / 2u32);
    assert!(Float::with_val(200, &b2 - &expect).abs().to_f64() < 1e-50);
}

#[test]
fn power_lift_identity_and_restricted_primes() {
    let f = hecke_eigenforms_s24(120).unwrap();
    let t = eigenform_table(&f.coefficients(1), 24, &f.d).unwrap();
    let fe = fe_classical(24).unwrap();
    let one = power_lift(&t, &fe, 1).unwrap();
    assert_eq!(one.coeffs, t);
    let r = restrict_to_primes(&t, 7).unwrap();
    assert_eq!(r.entry(10), t.entry(10));
    assert_eq!(r.entry(11), &CoefficientEntry::Unknown(11));
    let lifted = power_lift(&r, &fe, 5).unwrap();
    assert_eq!(lifted.degree(), 10);
    assert_eq!(lifted.coeffs.entry(13), &CoefficientEntry::Unknown(13));
    // b_2 of the fifth power is 5 b_2
    let b2 = t.known_value(2, 100).unwrap();
    let l2 = lifted.coeffs.known_value(2, 100).unwrap();
    assert!(Float::with_val(100, l2 - b2 * 5u32).abs().to_f64() < 1e-25);
}

#[test]
fn zeta_squared_is_divisor_function() {
    let mut factors = BTreeMap::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        factors.insert(p, vec![Surd::int(1), Surd::int(-2), Surd::int(1)]);
    }
    let lf = LocalFactors { weight: Rational::new(), sqrt_d: Integer::from(1), factors };
    let t = expand_euler(&lf, 16, 2).unwrap();
    assert_eq!(t.entry(4), &CoefficientEntry::Known(Surd::int(3)));
    assert_eq!(t.entry(12), &CoefficientEntry::Known(Surd::int(6)));
}
