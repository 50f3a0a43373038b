use num_complex::Complex64;
use sojourn_lab::partial_waves::{build_table, PhaseShiftTable, TableOptions};
use sojourn_lab::potential::PotentialSpec;
use sojourn_lab::spectral::*;
use std::f64::consts::PI;

fn unit_density(c1: f64, c2: f64) -> HomogeneousMeasureParams {
    // d = 2, α = 3: prefactor 1/2π, so a = 2π c.
    HomogeneousMeasureParams::from_weights(2, 3.0, 2.0 * PI * c1, 2.0 * PI * c2).unwrap()
}

#[test]
fn gamma_exponents() {
    assert_eq!(gamma_exponent(2, 3.0).unwrap(), (0.5, false));
    assert_eq!(gamma_exponent(3, 5.0).unwrap(), (0.5, false));
    assert_eq!(gamma_exponent(2, 2.0).unwrap(), (1.0, true));
    assert!(gamma_exponent(2, 1.0).is_err());
}

#[test]
fn gamma_constant_values() {
    let g = gamma_constant(0.5).unwrap();
    let s = (2.0 * PI).sqrt();
    assert!((g - Complex64::new(-s, s)).norm() < 1e-10);
    // 3i Γ(2/3) e^{iπ/3}, Γ(2/3) = 1.3541179394264004169...
    let expect =
        Complex64::new(0.0, 3.0) * 1.3541179394264004169 * Complex64::from_polar(1.0, PI / 3.0);
    assert!((gamma_constant(1.0 / 3.0).unwrap() - expect).norm() < 1e-8);
    for g in [1.0 / 3.0, 0.5, 2.0 / 3.0] {
        let q = gamma_constant_quadrature(g, true);
        assert!((q - gamma_constant_closed(g).conj()).norm() < 1e-8);
    }
    assert!(gamma_constant(1.0).is_err());
}

#[test]
fn central_constants() {
    let p = predicted_constants_central(-1.0, 2, 3.0).unwrap();
    assert_eq!(p.a1, 0.0);
    assert!((p.a2 - 2.0 * PI).abs() < 1e-12);
    assert!((p.c.norm() - 2.0 * 2.0 * PI * PI.sqrt()).abs() < 1e-9);
    assert!((p.c - p.c_direct).norm() < 1e-6 * p.c.norm());
    assert!((p.c2 - 1.0).abs() < 1e-12 && p.c1 == 0.0);
    let z = predicted_constants_central(0.0, 2, 3.0).unwrap();
    assert_eq!((z.a1, z.a2, z.c), (0.0, 0.0, Complex64::new(0.0, 0.0)));
    for lambda in [0.5, 2.0] {
        let q = predicted_constants_central(-lambda, 2, 3.0).unwrap();
        let f = lambda.powf(0.5);
        assert!((q.a2 - f * p.a2).abs() < 1e-8 * p.a2);
        assert!((q.c - p.c * f).norm() < 1e-8 * p.c.norm());
    }
}

#[test]
fn angular_profiles() {
    let p = predicted_constants(&|_, _| -1.0, 2, 3.0, 16).unwrap();
    let q = predicted_constants_central(-1.0, 2, 3.0).unwrap();
    assert!((p.c - q.c).norm() < 1e-10 * q.c.norm());
    // d = 3, α = 5 (γ = 1/2) against the central closed form.
    let p3 = predicted_constants(&|_, _| 0.7, 3, 5.0, 8).unwrap();
    let q3 = predicted_constants_central(0.7, 3, 5.0).unwrap();
    assert!((p3.c - q3.c).norm() < 1e-8 * q3.c.norm());
    // A sign-changing profile populates both branches (cos at its zeros is only ~1e-16, hence the loose tolerance).
    let mixed = predicted_constants(&|y, _| y[0], 2, 3.0, 64).unwrap();
    assert!(
        mixed.a1 > 0.0 && (mixed.a1 - mixed.a2).abs() < 1e-8 * mixed.a1,
        "{mixed:?}"
    );
}

#[test]
fn measure_trivial_cases() {
    let empty = PhaseShiftTable::from_entries(0.1, 2, &[]);
    let mu = build_mu_h(&empty, 3.0).unwrap();
    assert!(mu.is_zero());
    assert_eq!(mu.atoms().count(), 0);
    let one = PhaseShiftTable::from_entries(1.0, 2, &[(3, PI / 4.0, 2)]);
    let mu = build_mu_h(&one, 3.0).unwrap();
    let atoms: Vec<_> = mu.atoms().collect();
    assert_eq!(atoms.len(), 1);
    assert!((atoms[0].0 - PI / 2.0).abs() < 1e-15 && atoms[0].1 == 2.0);
}

#[test]
fn trace_and_pairing_identities() {
    let t = PhaseShiftTable::from_entries(1.0, 2, &[(0, PI / 2.0, 1)]);
    let tr = trace_power(&t, 1).unwrap();
    assert!((tr - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
    let mu = build_mu_h(&t, 3.0).unwrap();
    let r = mu_pair(&mu, &|z| z - 1.0, 1.0).unwrap();
    assert!((r.value + 2.0).norm() < 1e-15);
    assert!(trace_power(&t, 0).is_err());

    let t = PhaseShiftTable::from_entries(
        0.3,
        2,
        &[(0, -1.3, 1), (1, 0.4, 2), (2, -0.05, 2), (3, 2.9, 2)],
    );
    let mu = build_mu_h(&t, 3.0).unwrap();
    for k in 1..5i64 {
        let tr = trace_power(&t, k).unwrap();
        assert_eq!(trace_power(&t, -k).unwrap(), tr.conj());
        let p = mu_pair(&mu, &move |z: Complex64| z.powi(k as i32) - 1.0, k as f64).unwrap();
        assert!((p.value - tr * mu.weight_scale).norm() < 1e-13);
        assert!(tr.norm() <= trace_power_bound(&t, k));
    }
    // f = 1 is not in the weighted space.
    assert!(mu_pair(&mu, &|_| Complex64::new(1.0, 0.0), 1.0).is_err());
}

#[test]
fn sector_counting() {
    let t = PhaseShiftTable::from_entries(1.0, 2, &[(1, PI / 6.0, 2), (2, 0.75 * PI, 1)]);
    assert_eq!(
        sector_count(&t, PI / 4.0, PI / 2.0, 3.0).unwrap().count,
        2.0
    );
    assert_eq!(sector_count(&t, PI, 1.75 * PI, 3.0).unwrap().count, 1.0);
    assert!(sector_count(&t, 0.0, 1.0, 3.0).is_err());
    let empty = PhaseShiftTable::from_entries(1.0, 2, &[]);
    assert_eq!(sector_count(&empty, 1.0, 2.0, 3.0).unwrap().count, 0.0);
}

#[test]
fn sector_masses() {
    let zero = unit_density(0.0, 0.0);
    assert_eq!(predicted_sector_mass(&zero, 1.0, 2.0).unwrap(), 0.0);
    let p = unit_density(1.0, 0.0);
    let first = sector_mass_branches(&p, PI / 2.0, PI, 1).unwrap();
    assert!((first - 2.0 * ((PI / 2.0).powf(-0.5) - PI.powf(-0.5))).abs() < 1e-14);
    assert!((first - 0.4675).abs() < 2e-4);
    // Oracle: many explicit branches plus the integral of the remaining ones.
    let n = 200_000;
    let head = sector_mass_branches(&p, PI / 2.0, PI, n).unwrap();
    // Σ_{m≥n} (π/2)(2π(m + 3/8))^{-3/2} by its integral plus half the first term.
    let m0 = n as f64 + 0.375;
    let rest = (PI / 2.0) * (2.0 * PI).powf(-1.5) * (2.0 * m0.powf(-0.5) + 0.5 * m0.powf(-1.5));
    let full = predicted_sector_mass(&p, PI / 2.0, PI).unwrap();
    assert!((full - head - rest).abs() < 1e-8, "{full} {head} {rest}");
    let q = unit_density(0.3, 1.0);
    let a =
        predicted_sector_mass(&q, 0.5, 2.0).unwrap() + predicted_sector_mass(&q, 2.0, 4.5).unwrap();
    assert!((a - predicted_sector_mass(&q, 0.5, 4.5).unwrap()).abs() < 1e-12);
}

#[test]
fn fourier_identity_pure_branches() {
    for (c1, c2) in [(1.0, 0.0), (0.0, 1.0), (0.4, 1.3)] {
        let p = unit_density(c1, c2);
        for k in 1..=5 {
            let (q, c) = fourier_pairing(&p, k);
            assert!((q - c).norm() < 1e-6 * c.norm(), "c1={c1} k={k}: {q} {c}");
        }
    }
}

#[test]
fn dyadic_trivial_cases() {
    let empty = PhaseShiftTable::from_entries(1.0, 2, &[]);
    assert!(dyadic_annulus_counts(&empty, 3.0, 10)
        .unwrap()
        .iter()
        .all(|a| a.count == 0.0));
    // |e^{2iδ} - 1| = 2 sin δ = 0.3
    let t = PhaseShiftTable::from_entries(1.0, 2, &[(0, (0.15f64).asin(), 1)]);
    let a = dyadic_annulus_counts(&t, 3.0, 10).unwrap();
    assert_eq!(a[2].count, 1.0);
    assert_eq!(a.iter().map(|x| x.count).sum::<f64>(), 1.0);
}

#[test]
fn reference_table_tail_and_floor() {
    let spec = PotentialSpec::central(2, 3.0, 1.0);
    let base = build_table(&spec, 0.1, &TableOptions::default()).unwrap();
    let finer = build_table(
        &spec,
        0.1,
        &TableOptions {
            delta_floor: 0.5e-9,
            ..Default::default()
        },
    )
    .unwrap();
    let a = trace_power(&base, 1).unwrap();
    let b = trace_power(&finer, 1).unwrap();
    assert!(
        (a - b).norm() < base.tail_bound,
        "{} {}",
        (a - b).norm(),
        base.tail_bound
    );
    let mu = build_mu_h(&base, 3.0).unwrap();
    let abs = mu_pair(
        &mu,
        &|z: Complex64| Complex64::new((z - 1.0).norm(), 0.0),
        1.0,
    )
    .unwrap();
    assert!(abs.value.re.is_finite() && abs.value.re > 0.0 && abs.tail_bound.is_finite());
    let g = trace_power_bound(&base, 3);
    assert!(trace_power(&base, 3).unwrap().norm() <= g);
}

#[test]
fn zero_potential_sweep_passes_trivially() {
    let spec = PotentialSpec::central(2, 3.0, 0.0);
    let tables: Vec<_> = [0.1, 0.05, 0.025]
        .iter()
        .map(|&h| build_table(&spec, h, &TableOptions::default()).unwrap())
        .collect();
    let refs: Vec<&PhaseShiftTable> = tables.iter().collect();
    let p = predicted_constants_central(0.0, 2, 3.0).unwrap();
    let r = convergence_report(&refs, &p, f64::INFINITY, &ConvergenceOptions::default()).unwrap();
    assert!(r.pass);
    assert!(r.traces.iter().all(|t| t.trace == Complex64::new(0.0, 0.0)));
}

#[test]
fn weighted_basket_is_normalized() {
    let basket = weighted_basket();
    assert_eq!(basket.len(), 10);
    // sup |f/(z-1)| by hand: |z+1| → 2, |z²+z+1| → 3, |z-1| → 2, and cos²t / (2 sin(t/2)) → 1/2 at t = π.
    let expected = [1.0, 1.0, 1.0, 0.5, 1.0 / 3.0, 1.0, 1.0, 1.0, 0.5, 2.0];
    for (f, s) in basket.iter().zip(expected) {
        assert!((f.scale - s).abs() < 1e-12, "{} {}", f.name, f.scale);
        assert!(
            (weighted_norm(&|z| f.eval(z), 4096) - 1.0).abs() < 1e-12,
            "{}",
            f.name
        );
    }
    // Atoms right next to z = 1 stay within the declared norm.
    let t = PhaseShiftTable::from_entries(1.0, 2, &[(0, 1e-7, 1), (1, -3e-9, 2), (2, PI / 2.0, 2)]);
    let mu = build_mu_h(&t, 3.0).unwrap();
    for f in &basket {
        mu_pair(&mu, &|z| f.eval(z), 1.0).unwrap();
    }
}
