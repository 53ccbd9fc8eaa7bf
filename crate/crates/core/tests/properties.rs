use eigdeloc::deloc::{
    epsilon_schedule, max_subset_mass, min_subset_mass, profile, schedule_identity, ScheduleVariant,
};
use eigdeloc::linalg::{column_submatrix, singular_values};
use eigdeloc::structure::{classify, compress_distance, lcd, levy_from_samples, CompressParams, Compressibility};
use eigdeloc::{Complex64, ComplexMatrix, LcdQuery, TailCurve};
use proptest::prelude::*;

fn vector(max_len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 1..=max_len)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect::<Vec<_>>())
        .prop_filter("nonzero", |v| v.iter().any(|z| z.norm() > 1e-3))
}

fn matrix(max_rows: usize) -> impl Strategy<Value = ComplexMatrix> {
    (2..=max_rows)
        .prop_flat_map(|r| (Just(r), 2..=r))
        .prop_flat_map(|(r, c)| {
            prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), r * c).prop_map(move |d| {
                ComplexMatrix::from_vec(r, c, d.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap()
            })
        })
}

proptest! {
    #[test]
    fn min_mass_grows_with_m_and_reaches_one(v in vector(40)) {
        let p = profile(&v).unwrap();
        let n = v.len();
        let masses: Vec<f64> = (1..=n).map(|m| min_subset_mass(&p, m).unwrap()).collect();
        prop_assert!(masses.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!((masses[n - 1] - 1.0).abs() <= 1e-12);
        prop_assert!(masses.iter().all(|&x| (0.0..=1.0 + 1e-12).contains(&x)));
    }

    #[test]
    fn complementary_masses_sum_to_one(v in vector(40), frac in 0.0..1.0f64) {
        let n = v.len();
        prop_assume!(n >= 2);
        let m = 1 + ((n - 1) as f64 * frac) as usize % (n - 1);
        let p = profile(&v).unwrap();
        let lo = min_subset_mass(&p, m).unwrap();
        let hi = max_subset_mass(&p, n - m).unwrap();
        prop_assert!((lo * lo + hi * hi - 1.0).abs() <= 1e-12);
        prop_assert!(hi * hi >= (n - m) as f64 / n as f64 - 1e-12);
    }

    #[test]
    fn schedules_satisfy_their_identities(t in 1e-3..=1.0f64, n in 2usize..10_000, frac in 0.0..1.0f64) {
        let m = 1 + ((n as f64 - 1.0) * frac) as usize;
        for &v in ScheduleVariant::ALL {
            let eps = epsilon_schedule(v, t, m, n).unwrap();
            let back = schedule_identity(v, eps, m, n);
            prop_assert!((back - t).abs() <= 1e-12 * t, "{} {t} {m} {n}: {back}", v.name());
        }
    }

    #[test]
    fn real_lcd_scales_inversely(a in prop::collection::vec(1i32..6, 2..5), s in 0.5..2.0f64) {
        let a: Vec<f64> = a.into_iter().map(f64::from).collect();
        let base = lcd(&LcdQuery::real(&a)).unwrap();
        let scaled: Vec<f64> = a.iter().map(|x| x * s).collect();
        let q = LcdQuery::real(&scaled);
        let r = lcd(&q).unwrap();
        prop_assume!(base.is_found() && r.is_found());
        let tol = base.resolution + s * r.resolution;
        prop_assert!((s * r.value - base.value).abs() <= tol, "{} vs {}", s * r.value, base.value);
    }

    #[test]
    fn classification_is_exhaustive(v in vector(30), delta in 0.01..0.99f64, rho in 0.01..0.99f64) {
        let nv = eigdeloc::linalg::norm2(&v);
        let x: Vec<Complex64> = v.iter().map(|z| z / nv).collect();
        let (class, d) = classify(&x, CompressParams::new(delta, rho).unwrap());
        prop_assert_eq!(d, compress_distance(&x, delta));
        prop_assert!(d <= 1.0 + 1e-12);
        prop_assert_eq!(class == Compressibility::Compressible, d <= rho);
    }

    #[test]
    fn levy_estimate_is_a_monotone_probability(
        xs in prop::collection::vec(-5.0..5.0f64, 1..200),
        e1 in 1e-3..1.0f64,
        extra in 0.0..1.0f64,
    ) {
        let samples: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        let a = levy_from_samples(&samples, e1).unwrap();
        let b = levy_from_samples(&samples, e1 + extra).unwrap();
        prop_assert!(a.estimate <= 1.0 && a.estimate > 0.0);
        prop_assert!(a.estimate <= b.estimate);
        prop_assert!(a.upper_conf >= a.estimate);
    }

    #[test]
    fn tail_estimates_are_monotone(
        samples in prop::collection::vec(0.0..2.0f64, 1..300),
        mut grid in prop::collection::vec(0.0..2.0f64, 1..20),
    ) {
        grid.sort_by(f64::total_cmp);
        let c = TailCurve::from_samples(&grid, &samples);
        prop_assert!(c.phat.windows(2).all(|w| w[0] <= w[1]));
        for i in 0..grid.len() {
            prop_assert!(c.wilson_lo[i] <= c.phat[i] && c.phat[i] <= c.wilson_hi[i]);
        }
    }

    #[test]
    fn dropping_a_column_interlaces_singular_values(a in matrix(7), pick in 0usize..7) {
        let c = a.cols();
        let keep: Vec<usize> = (0..c).filter(|&j| j != pick % c).collect();
        let s = singular_values(&a).unwrap();
        let t = singular_values(&column_submatrix(&a, &keep).unwrap()).unwrap();
        let tol = 1e-12 * s[0].max(1.0);
        let desc = |v: &[f64]| v.windows(2).all(|w| w[0] >= w[1]);
        prop_assert!(desc(&s) && desc(&t));
        for i in 0..t.len() {
            prop_assert!(s[i] + tol >= t[i] && t[i] + tol >= s[i + 1], "{s:?} {t:?}");
        }
    }
}
