use fewcoef::forms::tau;
use fewcoef::instances::builtin;
use fewcoef::lmodel::{
    expand_euler, fe_classical, fe_for, fe_zeta, format_fe, parse_fe, ramanujan_bound, CoefficientEntry,
    CoefficientTable, LocalFactors, Rho, Surd, TestFunction,
};
use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use std::collections::BTreeMap;

fn r(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

#[test]
fn ramanujan_bound_examples() {
    for p in [2u64, 3, 83, 1999] {
        assert_eq!(ramanujan_bound(p, 5), 5);
    }
    for d in 1..6 {
        assert_eq!(ramanujan_bound(1, d), 1);
    }
    assert_eq!(ramanujan_bound(12, 4), 40);
    // d = 2 gives the divisor function
    assert_eq!(ramanujan_bound(360, 2), 24);
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

proptest! {
    #[test]
    fn ramanujan_bound_is_multiplicative(m in 1u64..3000, n in 1u64..3000, d in 1u32..11) {
        prop_assume!(gcd(m, n) == 1);
        prop_assert_eq!(ramanujan_bound(m * n, d), ramanujan_bound(m, d) * ramanujan_bound(n, d));
    }
}

const PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

/// Q_p(X) = ∏(1 − α_i X) expanded, ascending coefficients.
fn q_from_roots(alphas: &[i64]) -> Vec<i64> {
    let mut q = vec![1i64];
    for a in alphas {
        let mut next = vec![0i64; q.len() + 1];
        for (i, c) in q.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= a * c;
        }
        q = next;
    }
    q
}

/// Dirichlet convolution of the sparse series Σ_j h_j(α) p^{-js}, with h_j the complete
/// homogeneous polynomial in the roots, built directly from geometric series.
fn naive_coefficients(roots: &BTreeMap<u64, Vec<i64>>, n_max: u64) -> Vec<i64> {
    let mut b = vec![0i64; n_max as usize + 1];
    b[1] = 1;
    for (p, alphas) in roots {
        // geometric series 1/(1 − αX) multiplied out
        let mut local = vec![0i64; 16];
        local[0] = 1;
        for a in alphas {
            let mut next = vec![0i64; 16];
            for i in 0..16 {
                let mut pw = 1i64;
                for j in 0..16 - i {
                    next[i + j] += local[i] * pw;
                    pw *= a;
                }
            }
            local = next;
        }
        let mut out = vec![0i64; n_max as usize + 1];
        for m in 1..=n_max {
            if b[m as usize] == 0 {
                continue;
            }
            let mut pk = 1u64;
            let mut j = 0;
            while m * pk <= n_max {
                out[(m * pk) as usize] += b[m as usize] * local[j];
                pk *= p;
                j += 1;
            }
        }
        b = out;
    }
    b
}

fn table_from_roots(roots: &BTreeMap<u64, Vec<i64>>, cutoff: usize) -> CoefficientTable {
    let factors = roots
        .iter()
        .map(|(p, a)| (*p, q_from_roots(a).into_iter().map(Surd::int).collect()))
        .collect();
    let lf = LocalFactors { weight: Rational::new(), sqrt_d: Integer::from(1), factors };
    expand_euler(&lf, cutoff, 3).unwrap()
}

fn roots_strategy(primes: usize) -> impl Strategy<Value = BTreeMap<u64, Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-1i64..=1, 0..=3), primes)
        .prop_map(|v| PRIMES.iter().copied().zip(v).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_expansion_matches_naive_product(roots in roots_strategy(10)) {
        let t = table_from_roots(&roots, 30);
        let naive = naive_coefficients(&roots, 30);
        for n in 1..=30u64 {
            prop_assert_eq!(t.entry(n), &CoefficientEntry::Known(Surd::int(naive[n as usize])), "n = {}", n);
        }
    }

    #[test]
    fn known_entries_stable_under_more_known_primes(roots in roots_strategy(10), keep in 3usize..10) {
        let fewer: BTreeMap<u64, Vec<i64>> = roots.iter().take(keep).map(|(p, a)| (*p, a.clone())).collect();
        let small = table_from_roots(&fewer, 40);
        let large = table_from_roots(&roots, 40);
        for n in 1..=40u64 {
            match small.entry(n) {
                CoefficientEntry::Known(v) => prop_assert_eq!(large.entry(n), &CoefficientEntry::Known(v.clone())),
                CoefficientEntry::Unknown(q) => prop_assert_eq!(*q, n),
                CoefficientEntry::Partial { scalar, symbol } => {
                    prop_assert_eq!(small.entry(n / symbol), &CoefficientEntry::Known(scalar.clone()));
                }
            }
        }
    }
}

#[test]
fn zeta_euler_product_is_all_ones() {
    let mut roots = BTreeMap::new();
    for p in PRIMES {
        roots.insert(p, vec![1]);
    }
    let t = table_from_roots(&roots, 30);
    for n in 1..=30 {
        assert_eq!(t.entry(n), &CoefficientEntry::Known(Surd::one()));
    }
}

#[test]
fn delta_factors_give_tau() {
    let tau = tau(10);
    let mut factors = BTreeMap::new();
    for p in [2u64, 3, 5] {
        let q = vec![
            Surd::one(),
            Surd::rational(Rational::from(-&tau[p as usize])),
            Surd::rational(Rational::from(Integer::from(p).pow(11))),
        ];
        factors.insert(p, q);
    }
    let lf = LocalFactors { weight: r(11, 2), sqrt_d: Integer::from(1), factors };
    let t = expand_euler(&lf, 10, 2).unwrap();
    for n in [1u64, 2, 3, 4, 5, 6, 8, 9, 10] {
        assert_eq!(t.entry(n), &CoefficientEntry::Known(Surd::rational(Rational::from(&tau[n as usize]))), "n = {n}");
    }
    assert_eq!(t.entry(7), &CoefficientEntry::Unknown(7));
    let b6 = t.known_value(6, 100).unwrap();
    let b2b3 = t.known_value(2, 100).unwrap() * t.known_value(3, 100).unwrap();
    assert!(Float::with_val(100, b6 - b2b3).abs().to_f64() < 1e-25);
}

#[test]
fn two_unknowns_in_one_index_is_an_error() {
    let lf = LocalFactors { weight: Rational::new(), sqrt_d: Integer::from(1), factors: BTreeMap::new() };
    assert!(expand_euler(&lf, 5, 2).is_ok());
    assert!(expand_euler(&lf, 6, 2).is_err());
}

#[test]
fn expand_euler_rejects_bad_factors() {
    let mut factors = BTreeMap::new();
    factors.insert(2u64, vec![Surd::int(2), Surd::int(1)]);
    let lf = LocalFactors { weight: Rational::new(), sqrt_d: Integer::from(1), factors };
    assert!(expand_euler(&lf, 4, 2).is_err());
    let mut factors = BTreeMap::new();
    factors.insert(2u64, vec![Surd::one(), Surd::int(0), Surd::int(0), Surd::int(1)]);
    let lf = LocalFactors { weight: Rational::new(), sqrt_d: Integer::from(1), factors };
    assert!(expand_euler(&lf, 4, 2).is_err());
}

#[test]
fn upsilon20_standard_table_symbols() {
    let inst = builtin("upsilon20-stan", 2000).unwrap();
    let t = &inst.coeffs;
    assert!(matches!(t.entry(82), CoefficientEntry::Known(_)));
    assert!(matches!(t.entry(79), CoefficientEntry::Known(_)));
    assert_eq!(t.entry(83), &CoefficientEntry::Unknown(83));
    let b2 = match t.entry(2) {
        CoefficientEntry::Known(v) => v.clone(),
        other => panic!("b_2 is {other:?}"),
    };
    assert_eq!(t.entry(166), &CoefficientEntry::Partial { scalar: b2, symbol: 83 });
    // 83 ≤ q < 2000 prime: 281 symbols
    let symbols = t.symbols();
    assert_eq!(symbols.len(), 281);
    assert_eq!(*symbols.iter().next().unwrap(), 83);
}

#[test]
fn table_validation() {
    let ones = vec![Surd::one(); 5];
    assert!(CoefficientTable::known(1, Rational::new(), Integer::from(1), ones.clone()).is_ok());
    let mut bad = ones.clone();
    bad[0] = Surd::int(2);
    assert!(CoefficientTable::known(1, Rational::new(), Integer::from(1), bad).is_err());
    let mut big = ones;
    big[2] = Surd::int(2);
    assert!(CoefficientTable::known(1, Rational::new(), Integer::from(1), big).is_err());
}

#[test]
fn symbol_substitution_and_blinding() {
    let t = builtin("upsilon20-stan", 200).unwrap().coeffs;
    let v = Surd::rational(r(1, 3));
    let t2 = t.with_symbol_value(83, &v).unwrap();
    assert_eq!(t2.entry(83), &CoefficientEntry::Known(v.clone()));
    assert!(matches!(t2.entry(166), CoefficientEntry::Known(_)));
    assert!(!t2.symbols().contains(&83));
    let blind = t.blind_from(10, Rational::from(2)).unwrap();
    assert_eq!(blind.entry(12), &CoefficientEntry::Unknown(12));
    assert_eq!(blind.entry(9), t.entry(9));
    assert_eq!(blind.bound(5), 10.0);
}

#[test]
fn standard_fe_weight_20() {
    let fe = fe_for(Rho::Stan, 20).unwrap();
    assert_eq!(fe.degree, 5);
    let shifts: Vec<(Rational, Rational)> = fe.shifts.iter().map(|g| (g.kappa.clone(), g.lambda.re.clone())).collect();
    assert_eq!(shifts, vec![(r(1, 2), r(0, 1)), (r(1, 1), r(18, 1)), (r(1, 1), r(19, 1))]);
    assert_eq!(fe.epsilon_sign(), Some(1));
}

#[test]
fn adjoint_fe_weight_20() {
    let fe = fe_for(Rho::Adj, 20).unwrap();
    assert_eq!(fe.degree, 10);
    let mut shifts: Vec<(Rational, Rational)> = fe.shifts.iter().map(|g| (g.kappa.clone(), g.lambda.re.clone())).collect();
    shifts.sort();
    let mut expect = vec![
        (r(1, 2), r(1, 2)),
        (r(1, 2), r(1, 2)),
        (r(1, 1), r(1, 1)),
        (r(1, 1), r(18, 1)),
        (r(1, 1), r(19, 1)),
        (r(1, 1), r(37, 1)),
    ];
    expect.sort();
    assert_eq!(shifts, expect);
    assert_eq!(fe.epsilon_sign(), Some(1));
}

#[test]
fn spin_fe_weight_20() {
    let fe = fe_for(Rho::Spin, 20).unwrap();
    assert_eq!(fe.degree, 4);
    assert_eq!(fe.epsilon_sign(), Some(1));
    assert!(fe_for(Rho::Spin, 21).is_err());
    assert!(fe_for(Rho::Stan, 8).is_err());
}

#[test]
fn fe_files_round_trip() {
    let mut all = vec![fe_zeta(), fe_classical(12).unwrap(), fe_classical(24).unwrap(), fe_classical(24).unwrap().power(5).unwrap()];
    for rho in [Rho::Spin, Rho::Stan, Rho::Adj] {
        all.push(fe_for(rho, 20).unwrap());
    }
    for fe in all {
        let text = format_fe(&fe);
        assert_eq!(parse_fe(&text).unwrap(), fe, "{text}");
    }
}

#[test]
fn fe_file_parsing() {
    let text = "# comment\nlabel: toy\ndegree: 1\nQ: 1 * pi^(-1/2)\ngamma: 1/2 0 0\nepsilon: 1 0\npole: 1 0 1 0\npole: 0 0 -1 0\n";
    let fe = parse_fe(text).unwrap();
    assert_eq!(fe.label, "toy");
    assert_eq!(fe.q.pi_exp, r(-1, 2));
    assert_eq!(fe.poles.len(), 2);
    assert!(parse_fe("label: x\ndegree: 1\nQ: 1\ngamma: 1/2 0\nepsilon: 1 0\n").is_err());
    assert!(parse_fe("label: x\ndegree: 2\nQ: 1\ngamma: 1/2 0 0\nepsilon: 1 0\n").is_err());
    assert!(parse_fe("label: x\ndegree: 1\nQ: 1\ngamma: 1/2 0 0\nepsilon: 3/5 1/2\n").is_err());
}

#[test]
fn test_function_validity() {
    let tf = |b: Rational, c: Rational| TestFunction::new(b, c, Rational::new());
    assert!(tf(r(39, 10), Rational::new()).is_valid(5));
    assert!(!tf(r(4, 1), Rational::new()).is_valid(5));
    assert!(tf(r(-39, 10), Rational::new()).is_valid(5));
    assert!(tf(r(100, 1), r(1, 500)).is_valid(2));
    assert!(!tf(Rational::new(), r(-1, 500)).is_valid(10));
    assert!(TestFunction::beta(r(3, 2)).validate(5).is_ok());
    assert!(TestFunction::beta(r(3, 2)).validate(1).is_err());
}
