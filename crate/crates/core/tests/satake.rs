use fewcoef::lmodel::{expand_euler, CoefficientEntry, Rho};
use fewcoef::numerics::PrecisionContext;
use fewcoef::satake::{
    exact_local_factor, local_factor, local_factors, round_trip_residual, solve_satake, upsilon20_table, HeckeDatum,
    SatakeTriple,
};
use num_complex::Complex64;
use rug::ops::Pow;
use rug::{Complex, Float, Integer};

fn c64(z: &Complex) -> Complex64 {
    Complex64::new(z.real().to_f64(), z.imag().to_f64())
}

/// All eight Weyl relabelings of (α₀, α₁, α₂).
fn weyl_orbit(a0: Complex64, a1: Complex64, a2: Complex64) -> Vec<[Complex64; 3]> {
    let mut out = Vec::new();
    for &(x, y) in &[(a1, a2), (a2, a1)] {
        for f1 in [false, true] {
            for f2 in [false, true] {
                let mut b0 = a0;
                let mut b1 = x;
                let mut b2 = y;
                if f1 {
                    b0 *= b1;
                    b1 = b1.inv();
                }
                if f2 {
                    b0 *= b2;
                    b2 = b2.inv();
                }
                out.push([b0, b1, b2]);
            }
        }
    }
    out
}

#[test]
fn p2_triple_matches_displayed_digits() {
    let ctx = PrecisionContext::new(30);
    let h = upsilon20_table()[0].clone();
    assert_eq!(h.p, 2);
    assert_eq!(h.lambda_p, -840960);
    let t = solve_satake(&h, &ctx).unwrap();
    let shown = [
        Complex64::new(-0.901413, 0.43296),
        Complex64::new(0.630904, -0.775861),
        Complex64::new(-0.211226, 0.977437),
    ];
    let hit = weyl_orbit(c64(&t.alpha0), c64(&t.alpha1), c64(&t.alpha2)).into_iter().any(|o| {
        o.iter().zip(shown.iter()).all(|(a, b)| (a.re - b.re).abs() < 1e-6 && (a.im - b.im).abs() < 1e-6)
    });
    assert!(hit, "{t:?}");
}

#[test]
fn every_vendored_prime_round_trips_on_the_unit_circle() {
    let ctx = PrecisionContext::new(40);
    for h in upsilon20_table() {
        let t = solve_satake(&h, &ctx).unwrap();
        assert!(round_trip_residual(&h, &t) < 1e-35, "p = {}", h.p);
        assert!(t.unit_defect() < 1e-35, "p = {}", h.p);
        assert!(t.norm_defect() < 1e-35, "p = {}", h.p);
    }
}

#[test]
fn numeric_and_exact_factors_agree() {
    let ctx = PrecisionContext::new(30);
    for h in upsilon20_table().into_iter().take(6) {
        let t = solve_satake(&h, &ctx).unwrap();
        for rho in [Rho::Spin, Rho::Stan, Rho::Adj] {
            let num = local_factor(&t, rho, &ctx).unwrap();
            let (exact, w) = exact_local_factor(&h, rho);
            assert_eq!(num.len(), exact.len());
            assert_eq!(num.len() - 1, rho.degree() as usize);
            for (j, (x, e)) in num.iter().zip(exact.iter()).enumerate() {
                // arithmetic coefficient times p^{-j w}
                let scale = Float::with_val(200, h.p).pow(Float::with_val(200, &w) * -(j as i32));
                let e = Float::with_val(200, e) * scale;
                let diff = Float::with_val(200, x - &e).abs().to_f64();
                assert!(diff < 1e-25, "p={} {:?} X^{j}: {} vs {}", h.p, rho, x, e);
            }
        }
    }
}

#[test]
fn spin_linear_coefficient_is_normalized_eigenvalue() {
    let ctx = PrecisionContext::new(30);
    let h = upsilon20_table()[0].clone();
    let t = solve_satake(&h, &ctx).unwrap();
    let f = local_factor(&t, Rho::Spin, &ctx).unwrap();
    let expected = -(-840960f64) / 2f64.powf(37.0 / 2.0);
    assert!((f[1].to_f64() - expected).abs() < 1e-12);
    // integrality round trip
    let back = Float::with_val(200, &f[1]) * Float::with_val(200, 2).pow(Float::with_val(200, 37) / 2u32);
    assert!((back - 840960f64).abs().to_f64() < 1e-20);
}

#[test]
fn stan_factor_shape() {
    let ctx = PrecisionContext::new(30);
    let t = solve_satake(&upsilon20_table()[3], &ctx).unwrap();
    let f = local_factor(&t, Rho::Stan, &ctx).unwrap();
    assert!((f[0].to_f64() - 1.0).abs() < 1e-30);
    assert!((f[5].to_f64() + 1.0).abs() < 1e-30);
}

#[test]
fn adj_linear_coefficient_is_negated_trace() {
    let ctx = PrecisionContext::new(30);
    let t = solve_satake(&upsilon20_table()[1], &ctx).unwrap();
    let f = local_factor(&t, Rho::Adj, &ctx).unwrap();
    let (a1, a2) = (c64(&t.alpha1), c64(&t.alpha2));
    let tr = 2.0 + a1 + a1.inv() + a2 + a2.inv() + a1 * a2 + (a1 * a2).inv() + a1 / a2 + a2 / a1;
    assert!((f[1].to_f64() + tr.re).abs() < 1e-12);
}

fn weyl_images(t: &SatakeTriple) -> Vec<SatakeTriple> {
    let p = t.alpha0.prec().0;
    let inv = |z: &Complex| Complex::with_val(p, z.recip_ref());
    let swap = SatakeTriple { alpha0: t.alpha0.clone(), alpha1: t.alpha2.clone(), alpha2: t.alpha1.clone() };
    let flip1 = SatakeTriple {
        alpha0: Complex::with_val(p, &t.alpha0 * &t.alpha1),
        alpha1: inv(&t.alpha1),
        alpha2: t.alpha2.clone(),
    };
    let flip2 = SatakeTriple {
        alpha0: Complex::with_val(p, &t.alpha0 * &t.alpha2),
        alpha1: t.alpha1.clone(),
        alpha2: inv(&t.alpha2),
    };
    vec![swap, flip1, flip2]
}

#[test]
fn local_factors_are_weyl_invariant() {
    let ctx = PrecisionContext::new(30);
    for h in upsilon20_table().into_iter().take(5) {
        let t = solve_satake(&h, &ctx).unwrap();
        for rho in [Rho::Spin, Rho::Stan, Rho::Adj] {
            let base = local_factor(&t, rho, &ctx).unwrap();
            for img in weyl_images(&t) {
                let other = local_factor(&img, rho, &ctx).unwrap();
                for (x, y) in base.iter().zip(other.iter()) {
                    assert!(Float::with_val(100, x - y).abs().to_f64() < 1e-30);
                }
            }
        }
    }
}

#[test]
fn bad_data_fails_reconstruction_or_is_reported() {
    // Not an eigenvalue pair of any form: the solve still succeeds but |α| ≠ 1 is visible.
    let ctx = PrecisionContext::new(30);
    let h = HeckeDatum::new(2, Integer::from(10).pow(9), Integer::from(0), 20).unwrap();
    let t = solve_satake(&h, &ctx).unwrap();
    assert!(t.unit_defect() > 1e-3);
    assert!(round_trip_residual(&h, &t) < 1e-20);
}

#[test]
fn stan_table_symbols_start_at_83() {
    let lf = local_factors(&upsilon20_table(), Rho::Stan);
    let table = expand_euler(&lf, 2000, 5).unwrap();
    assert!(matches!(table.entry(82), CoefficientEntry::Known(_)));
    assert_eq!(table.entry(83), &CoefficientEntry::Unknown(83));
    match table.entry(166) {
        CoefficientEntry::Partial { symbol, scalar } => {
            assert_eq!(*symbol, 83);
            assert_eq!(table.entry(2), &CoefficientEntry::Known(scalar.clone()));
        }
        e => panic!("{e:?}"),
    }
}
