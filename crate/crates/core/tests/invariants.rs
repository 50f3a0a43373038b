use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use sojourn_lab::classical::{scatter_ray, TrajectoryOptions};
use sojourn_lab::experiment::{fmt_f64, parse_config};
use sojourn_lab::partial_waves::{multiplicity, riccati_bessel, PhaseShiftTable};
use sojourn_lab::potential::PotentialSpec;
use sojourn_lab::special::hurwitz_zeta;
use sojourn_lab::spectral::*;

fn table(shifts: &[(f64, u64)]) -> PhaseShiftTable {
    let e: Vec<(u64, f64, u64)> = shifts
        .iter()
        .enumerate()
        .map(|(l, &(d, m))| (l as u64, d, m))
        .collect();
    PhaseShiftTable::from_entries(0.1, 2, &e)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplicities_match_closed_forms(l in 0u64..10_000) {
        prop_assert_eq!(multiplicity(l, 2), if l == 0 { 1 } else { 2 });
        prop_assert_eq!(multiplicity(l, 3), 2 * l + 1);
        prop_assert_eq!(multiplicity(l, 4), (l + 1) * (l + 1));
    }

    #[test]
    fn riccati_wronskian_is_one(nu in 0.0f64..400.0, x in 0.05f64..2000.0) {
        let rb = riccati_bessel(nu, x);
        prop_assert!((rb.wronskian() - 1.0).abs() < 1e-9, "nu={} x={} w={}", nu, x, rb.wronskian());
    }

    #[test]
    fn hurwitz_recurrence(s in 1.1f64..4.0, a in 0.01f64..5.0) {
        let lhs = hurwitz_zeta(s, a);
        let rhs = hurwitz_zeta(s, a + 1.0) + a.powf(-s);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs());
    }

    #[test]
    fn traces_of_inverse_powers_are_conjugates(
        shifts in prop::collection::vec((-3.0f64..3.0, 1u64..5), 1..40),
        k in 1i64..6,
    ) {
        let t = table(&shifts);
        let tp = trace_power(&t, k).unwrap();
        prop_assert_eq!(trace_power(&t, -k).unwrap(), tp.conj());
        // Against the plain eigenvalue sum.
        let direct: Complex64 = shifts.iter().map(|&(d, m)| (Complex64::from_polar(1.0, 2.0 * k as f64 * d) - 1.0) * m as f64).sum();
        prop_assert!((tp - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
        prop_assert!(tp.norm() <= trace_power_bound(&t, k) * (1.0 + 1e-12));
    }

    #[test]
    fn pairing_respects_the_weighted_bound(shifts in prop::collection::vec((-3.0f64..3.0, 1u64..5), 1..40)) {
        let t = table(&shifts);
        let mu = build_mu_h(&t, 3.0).unwrap();
        // Σ w |z - 1| bounds every pairing with ‖f‖_w ≤ 1.
        let mass: f64 = mu.atoms().map(|(a, w)| w * 2.0 * (0.5 * a).sin().abs()).sum();
        for f in weighted_basket() {
            let r = mu_pair(&mu, &|z| f.eval(z), 1.0).unwrap();
            prop_assert!(r.value.norm() <= mass * (1.0 + 1e-9) + 1e-15, "{}", f.name);
        }
        // Linearity.
        let a = mu_pair(&mu, &|z| z - 1.0, 1.0).unwrap().value;
        let b = mu_pair(&mu, &|z| (z - 1.0) * z, 1.0).unwrap().value;
        let ab = mu_pair(&mu, &|z| (z - 1.0) * (z * 0.5 + 0.5), 1.0).unwrap().value;
        prop_assert!((ab - 0.5 * (a + b)).norm() <= 1e-12 * (1.0 + a.norm() + b.norm()));
    }

    #[test]
    fn sector_mass_is_additive_and_positive(c1 in 0.0f64..3.0, c2 in 0.0f64..3.0, a in 0.05f64..3.0, w1 in 0.01f64..1.5, w2 in 0.01f64..1.5) {
        let p = HomogeneousMeasureParams::from_weights(2, 3.0, 2.0 * PI * c1, 2.0 * PI * c2).unwrap();
        let (b, c) = (a + w1, a + w1 + w2);
        let whole = predicted_sector_mass(&p, a, c).unwrap();
        let parts = predicted_sector_mass(&p, a, b).unwrap() + predicted_sector_mass(&p, b, c).unwrap();
        prop_assert!((whole - parts).abs() <= 1e-11 * (1.0 + whole));
        prop_assert!(whole >= 0.0);
        prop_assert!(predicted_density(&p, b) >= 0.0);
    }

    #[test]
    fn predicted_traces_scale_like_k_to_gamma(g in 0.2f64..3.0, k in 1i64..20) {
        let p = predicted_constants_central(-g, 2, 3.0).unwrap();
        let ratio = p.predicted_trace(k) / p.predicted_trace(1);
        prop_assert!((ratio - Complex64::new((k as f64).sqrt(), 0.0)).norm() < 1e-12 * (k as f64));
        prop_assert_eq!(p.predicted_trace(-k), p.predicted_trace(k).conj());
    }

    #[test]
    fn gamma_quadrature_conjugates(g in 0.1f64..0.9) {
        let a = gamma_constant_quadrature(g, false);
        let b = gamma_constant_quadrature(g, true);
        prop_assert!((a.conj() - b).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn float_fields_round_trip(x in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn configs_round_trip(
        h0 in 0.01f64..1.0,
        ratios in prop::collection::vec(0.1f64..0.95, 0..4),
        k_max in 1u32..10,
        alpha in 2.1f64..8.0,
        strength in -3.0f64..3.0,
    ) {
        let mut h = vec![h0];
        for r in ratios {
            let last = *h.last().unwrap();
            h.push(last * r);
        }
        let text = format!(
            "h_list = {h:?}\nk_max = {k_max}\n[potential]\ndimension = 2\nalpha = {alpha:?}\nstrength = {strength:?}\n"
        );
        let a = parse_config(&text).unwrap().config;
        let b = parse_config(&a.to_toml()).unwrap().config;
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rotated_rays_conserve_energy_and_impact(angle in 0.0f64..(2.0 * PI), b in 3.0f64..50.0) {
        let spec = PotentialSpec::central(2, 3.0, 1.0);
        let omega = [angle.cos(), angle.sin()];
        let eta = [-b * angle.sin(), b * angle.cos()];
        let e = scatter_ray(&spec, &omega, &eta, &TrajectoryOptions::default()).unwrap();
        prop_assert!(e.energy_drift <= 1e-8 && e.angular_momentum_drift <= 1e-8);
        let out = (e.eta_out[0].powi(2) + e.eta_out[1].powi(2)).sqrt();
        prop_assert!((out - b).abs() <= 1e-8 * b);
        // The deflection does not depend on the orientation of the ray.
        let base = scatter_ray(&spec, &[1.0, 0.0], &[0.0, b], &TrajectoryOptions::default()).unwrap();
        prop_assert!((e.deflection() - base.deflection()).abs() <= 1e-9);
    }
}
