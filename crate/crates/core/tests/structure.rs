mod common;

use common::random_complex;
use eigdeloc::randgen::derive_stream;
use eigdeloc::structure::{
    classify, is_feasible, lcd, lcd_subspace_estimate, level_set_membership, levy_concentration, spread_set,
    totally_spread_check, CompressParams, Compressibility, Membership,
};
use eigdeloc::{Complex64, Field, LcdQuery, LcdStatus, SeedStream};
use eigdeloc_oracles as oracle;
use rand::Rng;

fn real(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

fn e1(n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[0] = 1.0;
    v
}

#[test]
fn lcd_of_flat_vectors_grows_like_root_n() {
    for n in [16usize, 64] {
        let a = vec![1.0 / (n as f64).sqrt(); n];
        let r = lcd(&LcdQuery::real(&a)).unwrap();
        let root = (n as f64).sqrt();
        let analytic = (root - 1.0).max(root / 1.5);
        assert!((r.value - analytic).abs() < 1e-3, "n={n}: {}", r.value);
        assert!(r.value >= 0.7 * root);
    }
}

#[test]
fn lcd_witness_is_feasible_and_json_has_the_record_fields() {
    let q = LcdQuery::new(random_complex(1, 4, 301, 0).row(0).to_vec(), Field::Complex);
    let r = lcd(&q).unwrap();
    assert_eq!(r.status, LcdStatus::Found);
    let (ok, d) = is_feasible(r.witness, &q);
    assert!(ok);
    assert_eq!(d, r.achieved_dist);
    assert!((r.witness.norm() - r.value).abs() <= 1e-12 * r.value);
    let j = r.to_json();
    for key in ["status", "value", "witness_re", "witness_im", "achieved_dist"] {
        assert!(j.get(key).is_some(), "{key}");
    }
    assert_eq!(j["status"], "found");
}

#[test]
fn lcd_agrees_with_brute_force_on_random_complex_vectors() {
    for k in 0..5 {
        let v = random_complex(1, 3, 302, k).row(0).to_vec();
        let ours = lcd(&LcdQuery::new(v.clone(), Field::Complex)).unwrap();
        let brute = oracle::lcd_brute_force(&v, true, 1.0, 0.5, 1e-3, 10.0).expect("finite");
        assert!((ours.value - brute).abs() <= 2e-3, "{} vs {brute}", ours.value);
    }
}

#[test]
fn lcd_of_real_vectors_agrees_with_brute_force() {
    let mut rng = derive_stream(303, 0).rng();
    for _ in 0..10 {
        let v: Vec<f64> = (0..5).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let ours = lcd(&LcdQuery::real(&v)).unwrap();
        let brute = oracle::lcd_brute_force(&real(&v), false, 1.0, 0.5, 1e-4, 10.0);
        match brute {
            Some(b) => assert!((ours.value - b).abs() <= 2e-4, "{} vs {b}", ours.value),
            None => assert_eq!(ours.status, LcdStatus::ExceedsCap),
        }
    }
}

#[test]
fn subspace_estimate_reduces_to_the_scalar_case() {
    let basis = vec![real(&e1(6))];
    let template = LcdQuery::new(basis[0].clone(), Field::Complex);
    let s = SeedStream::new(304, 0);
    let est = lcd_subspace_estimate(&basis, &template, 8, &s).unwrap();
    assert!((est.upper_bound - 2.0 / 3.0).abs() < 1e-3, "{}", est.upper_bound);
    assert_eq!(est.exceeds_cap, 0);
    assert_eq!(est, lcd_subspace_estimate(&basis, &template, 8, &s).unwrap());
    assert!(lcd_subspace_estimate(&[], &template, 8, &s).is_err());
}

#[test]
fn compressibility_examples() {
    let p = CompressParams::new(0.1, 0.5).unwrap();
    let (class, d) = classify(&real(&e1(100)), p);
    assert_eq!((class, d), (Compressibility::Compressible, 0.0));
    let mut x = vec![0.0; 12];
    x[0] = 0.8;
    x[1] = 0.6;
    let (_, d) = classify(&real(&x), CompressParams::new(0.1, 0.5).unwrap());
    assert!((d - 0.6).abs() < 1e-15);
    assert!(CompressParams::new(0.0, 0.5).is_err());
    assert!(CompressParams::new(0.5, 1.0).is_err());
}

#[test]
fn spread_examples() {
    let s = spread_set(&real(&e1(100)), 0.5, 2.0).unwrap();
    assert!(s.indices.is_empty());
    assert_eq!(s.fraction, 0.0);
    let flat = real(&[0.2; 25]);
    assert!(totally_spread_check(&flat, 0.9, 1.1).unwrap());
    assert!(!totally_spread_check(&real(&e1(4)), 0.9, 1.1).unwrap());
    let mut rng = derive_stream(305, 0).rng();
    let d = 36;
    let y: Vec<Complex64> = (0..d)
        .map(|_| {
            let amp = 0.01 / (d as f64).sqrt();
            Complex64::new(1.0 / (d as f64).sqrt() + amp * (rng.random::<f64>() * 2.0 - 1.0), 0.0)
        })
        .collect();
    assert!(totally_spread_check(&y, 0.9, 1.1).unwrap());
}

#[test]
fn level_set_examples() {
    let x = real(&e1(5));
    let t = LcdQuery::real(&e1(5));
    assert_eq!(level_set_membership(&x, 0.6, &t).unwrap().0, Membership::Member);
    assert_eq!(level_set_membership(&x, 2.0, &t).unwrap().0, Membership::NonMember);
    let flat = real(&[0.25; 16]);
    let capped = LcdQuery {
        r_max: 2.5,
        ..LcdQuery::real(&[0.25; 16])
    };
    let (m, r) = level_set_membership(&flat, 1.5, &capped).unwrap();
    assert_eq!(r.status, LcdStatus::ExceedsCap);
    assert_eq!(m, Membership::Indeterminate);
    // 2D falls inside the bracket [LCD - resolution, LCD].
    assert_eq!(level_set_membership(&x, 0.3331, &t).unwrap().0, Membership::Indeterminate);
    assert_eq!(level_set_membership(&x, 1.0 / 3.0 + 1e-4, &t).unwrap().0, Membership::Member);
}

#[test]
fn levy_examples() {
    let s = derive_stream(306, 0);
    let zero = levy_concentration(|_| vec![0.0], 0.1, 2000, &s).unwrap();
    assert_eq!(zero.estimate, 1.0);
    let sign = |r: &mut eigdeloc::randgen::StreamRng| if r.random::<bool>() { 1.0 } else { -1.0 };
    let one = levy_concentration(|r| vec![sign(r)], 0.5, 10_000, &s).unwrap();
    assert!((one.estimate - 0.5).abs() <= 0.02, "{}", one.estimate);
    let two = levy_concentration(|r| vec![sign(r) + sign(r)], 0.5, 10_000, &s).unwrap();
    assert!((two.estimate - 0.5).abs() <= 0.02, "{}", two.estimate);
    assert!(two.upper_conf >= two.estimate && two.upper_conf <= 1.0);
    assert!(levy_concentration(|_| vec![0.0], 0.1, 999, &s).is_err());
}
