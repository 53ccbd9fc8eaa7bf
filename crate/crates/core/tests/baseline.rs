use eigdeloc::baseline::{
    chi2_cdf, default_band_params, dyadic_band_counts, f_cdf, g_cdf, h_func, limit_mass, limit_mass_quadrature,
    q_quantile, sphere_subset_mass_simulation, MassSide,
};
use eigdeloc::randgen::{derive_stream, sample_unit_sphere};
use eigdeloc::{Complex64, Field, SeedStream};
use eigdeloc_oracles as oracle;
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn closed_forms_match_quadrature() {
    for delta in [0.01, 0.05, 0.1, 0.2, 0.5, 0.9] {
        for side in [MassSide::Min, MassSide::Max] {
            let a = limit_mass(delta, side).unwrap();
            let b = limit_mass_quadrature(delta, side, 1e-12).unwrap();
            assert!((a - b).abs() <= 1e-8, "{delta} {side:?}: {a} vs {b}");
        }
    }
    assert_eq!(limit_mass(1.0, MassSide::Min).unwrap(), 1.0);
    assert_eq!(limit_mass(1.0, MassSide::Max).unwrap(), 1.0);
    assert!((limit_mass(1.0 - 1e-9, MassSide::Min).unwrap() - 1.0).abs() < 1e-7);
    assert!(limit_mass(0.0, MassSide::Min).is_err());
    assert!(limit_mass(1.5, MassSide::Max).is_err());
}

#[test]
fn small_delta_orders() {
    for delta in [1e-3, 1e-4] {
        let min_ratio = limit_mass(delta, MassSide::Min).unwrap() / (delta * delta / 2.0);
        assert!((min_ratio - 1.0).abs() <= 0.05, "{min_ratio}");
        let l = (1.0 / delta).ln();
        let max_ratio = limit_mass(delta, MassSide::Max).unwrap() / (delta * l);
        assert!((max_ratio - (1.0 + 1.0 / l)).abs() < 1e-12);
    }
    let r = |d: f64| limit_mass(d, MassSide::Max).unwrap() / (d * (1.0 / d).ln());
    assert!(r(1e-8) < r(1e-4) && r(1e-4) < r(1e-3));
}

#[test]
fn cdf_and_quantile_examples() {
    assert_eq!(f_cdf(0.0).unwrap(), 0.0);
    assert!((f_cdf(2f64.ln()).unwrap() - 0.5).abs() < 1e-16);
    assert!((g_cdf(1.0).unwrap() - (1.0 - (-1f64).exp())).abs() < 1e-16);
    assert!(f_cdf(-1.0).is_err());
    assert_eq!(q_quantile(0.0).unwrap(), 0.0);
    assert!((q_quantile(1.0 - (-1f64).exp()).unwrap() - 1.0).abs() < 1e-15);
    assert!(q_quantile(1.0).is_err());
    assert!((h_func(0.5).unwrap() + 2f64.ln()).abs() < 1e-16);
    assert!(h_func(0.0).is_err());
    for i in 0..100 {
        let s = i as f64 / 100.0;
        assert!((f_cdf(q_quantile(s).unwrap()).unwrap() - s).abs() <= 1e-14);
    }
}

#[test]
fn chi_square_cdfs_match_references() {
    let one = ChiSquared::new(1.0).unwrap();
    for i in 1..60 {
        let x = i as f64 * 0.25;
        assert!((chi2_cdf(x, 1).unwrap() - one.cdf(x)).abs() < 1e-9);
        assert!((chi2_cdf(x, 2).unwrap() - oracle::chi2_even_cdf(1, x)).abs() < 1e-15);
    }
    assert!(chi2_cdf(1.0, 3).is_err());
}

#[test]
fn dyadic_band_examples() {
    let zero = vec![Complex64::new(0.0, 0.0); 10];
    assert_eq!(dyadic_band_counts(&zero, 0.5, 4, Field::Complex).unwrap(), vec![0; 4]);
    let n = 8.0;
    let delta = 0.5;
    let base = delta / n;
    let v: Vec<Complex64> = (0..4)
        .map(|k| Complex64::new((base * 2f64.powi(k) * 1.5).sqrt(), 0.0))
        .chain((0..4).map(|_| Complex64::new(0.0, 0.0)))
        .collect();
    assert_eq!(dyadic_band_counts(&v, delta, 4, Field::Complex).unwrap(), vec![1; 4]);
    // Half-open bands: |z|^2 = 0.5 = t_1 with n = 1, delta = 0.25 lands in band 2.
    let edge = vec![Complex64::new(0.5, 0.5)];
    assert_eq!(dyadic_band_counts(&edge, 0.25, 3, Field::Complex).unwrap(), vec![0, 1, 0]);
}

#[test]
fn dyadic_bands_match_a_naive_count() {
    for (t, field) in [(0u64, Field::Complex), (1, Field::Real)] {
        let v = sample_unit_sphere(200, field, &derive_stream(401, t)).unwrap();
        let n = v.len() as f64;
        let delta = 0.3;
        let base = match field {
            Field::Complex => delta / n,
            Field::Real => delta * delta / (n * n),
        };
        let bands = 12;
        let got = dyadic_band_counts(&v, delta, bands, field).unwrap();
        for k in 1..=bands {
            let lo = base * 2f64.powi(k as i32 - 1);
            let hi = base * 2f64.powi(k as i32);
            let naive = v.iter().filter(|z| lo <= z.norm_sqr() && z.norm_sqr() < hi).count();
            assert_eq!(got[k - 1], naive, "band {k}");
        }
        assert!(got.iter().sum::<usize>() <= v.len());
    }
}

#[test]
fn band_defaults() {
    let (d, l) = default_band_params(1000, 100).unwrap();
    assert!((d - 1.0 / 1000f64.ln()).abs() < 1e-15);
    assert_eq!(l, (100.0 / (2.0 * d)).log2().floor() as usize);
}

#[test]
fn sphere_simulation_properties() {
    let s = SeedStream::new(402, 0);
    let full = sphere_subset_mass_simulation(20, 20, Field::Complex, 10, &s).unwrap();
    assert!((full.mean_min_mass - 1.0).abs() < 1e-12);
    let a = sphere_subset_mass_simulation(50, 5, Field::Real, 40, &s).unwrap();
    assert_eq!(a, sphere_subset_mass_simulation(50, 5, Field::Real, 40, &s).unwrap());
    assert!(sphere_subset_mass_simulation(50, 5, Field::Real, 0, &s).is_err());
    let js = serde_json::to_value(&a).unwrap();
    for key in ["n", "m", "field", "trials", "mean_min_mass", "q05", "q50", "q95", "linf_max"] {
        assert!(js.get(key).is_some(), "{key}");
    }
}

#[test]
fn sphere_simulation_converges_to_the_limits() {
    let s = SeedStream::new(403, 0);
    let sum = sphere_subset_mass_simulation(1000, 200, Field::Complex, 50, &s).unwrap();
    let want = 0.2 + 0.8 * 0.8f64.ln();
    assert!((sum.mean_min_mass - want).abs() <= 0.15 * want, "{}", sum.mean_min_mass);
    let want = 0.2 * (1.0 - 0.2f64.ln());
    assert!((sum.mean_max_mass - want).abs() <= 0.10 * want, "{}", sum.mean_max_mass);
}

#[test]
fn complex_sup_norm_stays_below_the_log_bound() {
    let n = 500;
    let sum = sphere_subset_mass_simulation(n, 1, Field::Complex, 1000, &SeedStream::new(404, 0)).unwrap();
    let bound = 3.0 * ((n as f64).ln() / n as f64).sqrt();
    let below = sum.linf.iter().filter(|&&x| x < bound).count();
    assert!(below >= 990, "{below}");
}
