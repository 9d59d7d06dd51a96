use hdl_core::spectrum::{
    degeneracy, higgs_scalars, nonrel_level, s_pm_value, solve_level, spectral_fn, HiggsScalars, Sign,
};

/// Real root of `u³ − u − 1` by Cardano's formula.
fn plastic_number() -> f64 {
    let r = (23.0f64 / 27.0).sqrt();
    ((1.0 + r) / 2.0).cbrt() + ((1.0 - r) / 2.0).cbrt()
}

/// `k` for which `E` is the `N = 0` level: solve the level equation for the
/// barrier square root and square.
fn invert_for_k(e: f64) -> f64 {
    let root = ((e + 1.0) / 2.0).sqrt() * (e - 1.0) - 1.5;
    (root * root - 0.25) / ((e + 1.0) / 2.0)
}

/// Independent solver for the `k = 0` form `√((E+1)/2)(E−1) = N + 2`
/// (Newton from a point above the root, where the left side is convex).
fn k0_level(n: u32) -> f64 {
    let target = f64::from(n) + 2.0;
    let mut e = 20.0 + f64::from(n);
    for _ in 0..200 {
        let s = ((e + 1.0) / 2.0).sqrt();
        let f = s * (e - 1.0) - target;
        let df = s + (e - 1.0) / (4.0 * s);
        e -= f / df;
    }
    e
}

/// Magnitude of the largest terms in `S±(m)`, used to make residuals relative.
fn weight_scale(m: f64, s: &HiggsScalars) -> f64 {
    let mu = m.abs() + 1.0;
    s.casimir.abs() + s.c3.abs() / 2.0 * mu.powi(4) + s.c1.abs() * mu * mu + s.c0.abs() * (2.0 * mu + 1.0)
}

#[test]
fn ground_level_without_barrier() {
    let u = plastic_number();
    assert!((u * u * u - u - 1.0).abs() < 1e-14);
    let oracle = 2.0 * u * u - 1.0;
    // u(2u² − 2) = 2 ⇔ √((E+1)/2)(E−1) = 2
    assert!((u * (2.0 * u * u - 2.0) - 2.0).abs() < 1e-13);
    let level = solve_level(0, 0.0, 1e-12).unwrap();
    assert!((level.e - oracle).abs() < 1e-10);
    assert!((level.e - 2.509755).abs() < 1e-5);
    assert_eq!(level.d, 1);
    assert!(spectral_fn(2.509755, 0, 0.0).unwrap().abs() < 1e-5);
}

#[test]
fn ground_level_at_three() {
    let k = invert_for_k(3.0);
    assert!((k - 0.757387).abs() < 5e-5);
    assert!((solve_level(0, k, 1e-13).unwrap().e - 3.0).abs() < 1e-10);
    let level = solve_level(0, 0.757387, 1e-12).unwrap();
    assert!((level.e - 3.0).abs() < 1e-4);
    assert_eq!(level.d, 1);
    assert!(spectral_fn(3.0, 0, 0.757387).unwrap().abs() < 1e-4);
}

#[test]
fn degeneracy_counts() {
    let expected = [1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6, 7];
    for n in 0..=12u32 {
        assert_eq!(degeneracy(n), expected[n as usize]);
        let level = solve_level(n, 1.0, 1e-10).unwrap();
        assert_eq!(level.d, expected[n as usize]);
        assert_eq!(n, 2 * level.n + n % 2);
    }
}

#[test]
fn single_sign_change_on_wide_interval() {
    for k in [0.0, 0.1, 0.5, 1.0, 2.0, 3.0, 4.0] {
        for n in 0..=12 {
            let mut changes = 0;
            let mut prev = spectral_fn(1.0, n, k).unwrap();
            for i in 1..=4900 {
                let cur = spectral_fn(1.0 + 0.01 * f64::from(i), n, k).unwrap();
                if (prev < 0.0) != (cur < 0.0) {
                    changes += 1;
                }
                prev = cur;
            }
            assert_eq!(changes, 1, "N={n} k={k}");
        }
    }
}

#[test]
fn levels_increase_with_n_and_k() {
    let ks: Vec<f64> = (0..10).map(|i| 0.4 * f64::from(i)).collect();
    for n in 0..10u32 {
        for w in ks.windows(2) {
            let a = solve_level(n, w[0], 1e-12).unwrap().e;
            let b = solve_level(n, w[1], 1e-12).unwrap().e;
            assert!(b > a);
        }
    }
    for &k in &ks {
        for n in 0..9u32 {
            assert!(solve_level(n + 1, k, 1e-12).unwrap().e > solve_level(n, k, 1e-12).unwrap().e);
        }
    }
}

#[test]
fn weight_span_matches_branch() {
    for k in [0.0, 0.5, 1.0, 2.0] {
        for n in 0..=12u32 {
            let level = solve_level(n, k, 1e-13).unwrap();
            let s = higgs_scalars(level.e, k).unwrap();
            let span = s.weight_span(level.lambda);
            assert!((span - f64::from(n / 2)).abs() < 1e-6, "N={n} k={k} span={span}");
            let other = if level.lambda == 2 { 6 } else { 2 };
            assert!((s.weight_span(other) - f64::from(n / 2)).abs() > 0.4);
        }
    }
}

#[test]
fn ground_weights_and_casimir_without_barrier() {
    let e = solve_level(0, 0.0, 1e-13).unwrap().e;
    let s = higgs_scalars(e, 0.0).unwrap();
    assert!(((2.0 * (e + 1.0)).sqrt() * (e - 1.0) - 4.0).abs() < 1e-10);
    assert!((s.m_bar + 0.25).abs() < 1e-10);
    assert!((s.m_under_2 + 0.25).abs() < 1e-10);
    assert!((s.g - 7.0195).abs() < 1e-4);
    assert!((s.f - 21.0585).abs() < 1e-4);
    assert!((s.casimir - -1478.2).abs() < 0.1);
    assert_eq!(s.casimir, s.casimir_as_printed);
}

#[test]
fn extreme_weights_are_annihilated() {
    for k in [0.0, 0.5, 1.0, 2.0, 3.5] {
        for n in 0..=8u32 {
            let level = solve_level(n, k, 1e-14).unwrap();
            let s = higgs_scalars(level.e, k).unwrap();
            let top = s.m_bar;
            let bottom = s.m_under(level.lambda);
            let up = s_pm_value(top, &s, Sign::Plus);
            let down = s_pm_value(bottom, &s, Sign::Minus);
            assert!(up.abs() < 1e-6 * weight_scale(top, &s), "N={n} k={k} S+={up}");
            assert!(down.abs() < 1e-6 * weight_scale(bottom, &s), "N={n} k={k} S-={down}");
            for j in 1..=level.n {
                let m = top - f64::from(j);
                assert!(s_pm_value(m, &s, Sign::Plus) > 0.0, "N={n} k={k} j={j}");
                let m = bottom + f64::from(j);
                assert!(s_pm_value(m, &s, Sign::Minus) > 0.0, "N={n} k={k} j={j}");
            }
        }
    }
}

#[test]
fn casimir_with_k_squared_fails_annihilation() {
    let level = solve_level(2, 1.0, 1e-14).unwrap();
    let mut s = higgs_scalars(level.e, 1.0).unwrap();
    s.casimir = s.casimir_as_printed;
    let up = s_pm_value(s.m_bar, &s, Sign::Plus);
    assert!(up.abs() > 1e-3 * weight_scale(s.m_bar, &s));
}

#[test]
fn vanishing_barrier_limit() {
    for n in 0..=6u32 {
        let e0 = k0_level(n);
        let target = f64::from(n) + 2.0;
        assert!((((e0 + 1.0) / 2.0).sqrt() * (e0 - 1.0) - target).abs() < 1e-12);
        let e_small = solve_level(n, 1e-6, 1e-12).unwrap().e;
        assert!((e_small - e0).abs() < 1e-4, "N={n}");
        assert!((solve_level(n, 0.0, 1e-12).unwrap().e - e0).abs() < 1e-10);
    }
}

#[test]
fn nonrelativistic_levels() {
    assert!((nonrel_level(0, 0.75) - 2.5).abs() < 1e-15);
    assert!((nonrel_level(2, 0.0) - 4.0).abs() < 1e-15);
    for n in 0..5u32 {
        assert!((nonrel_level(n, 0.0) - (f64::from(n) + 2.0)).abs() < 1e-15);
    }
}

#[test]
fn rejects_invalid_inputs() {
    assert!(solve_level(0, 1.0, 0.0).is_err());
    assert!(solve_level(0, -1.0, 1e-8).is_err());
    assert!(higgs_scalars(1.0, 1.0).is_err());
    assert!(spectral_fn(-2.0, 0, 0.0).is_err());
}
