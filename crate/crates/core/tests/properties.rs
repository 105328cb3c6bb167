use proptest::prelude::*;
use starbdi::transient::linear_bdi_pmf;
use starbdi::{
    build_cycle_distribution, eulerian_polynomial, kernel_g, kernel_h, limit_law, limit_moments, psi, simulate_path,
    solve_volterra_p0, t_table_recursive, transient_density, DiffusionParams, ModelParams,
};

fn rates() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.05f64..1.0, 0.05f64..1.0, 0.05f64..1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_boundary_values((a, l, m) in rates(), z in 0.0f64..1.0, t in 0.0f64..20.0) {
        let p = ModelParams::new(a, l, m, 2).unwrap();
        prop_assert!((kernel_h(&p, z, 0.0) - 1.0).abs() < 1e-13);
        prop_assert!((kernel_h(&p, 1.0, t) - 1.0).abs() < 1e-13);
        let h = kernel_h(&p, z, t);
        prop_assert!((0.0..=1.0 + 1e-13).contains(&h));
        let (g, gp) = kernel_g(&p, t);
        prop_assert!((0.0..=1.0).contains(&g) && gp >= 0.0);
    }

    #[test]
    fn volterra_solution_is_a_probability((a, l, m) in rates(), d in 1u32..6) {
        let p = ModelParams::new(a, l, m, d).unwrap();
        let law = solve_volterra_p0(&p, 4.0, 400).unwrap();
        prop_assert_eq!(law.p0[0].value, 1.0);
        for e in &law.p0 {
            prop_assert!(e.value > -1e-9 && e.value <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn volterra_decreases_with_rays((a, l, m) in rates(), t in 0.1f64..3.0) {
        let p: Vec<f64> = (1..=4)
            .map(|d| solve_volterra_p0(&ModelParams::new(a, l, m, d).unwrap(), 3.0, 600).unwrap().p0_at(t).unwrap())
            .collect();
        for w in p.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9);
        }
    }

    #[test]
    fn cycle_powers_are_ordered_distributions((a, l, m) in rates()) {
        let p = ModelParams::new(a, l, m, 3).unwrap();
        let cyc = build_cycle_distribution(&p, 4.0, 200, 6).unwrap();
        for j in 1..=6 {
            prop_assert_eq!(cyc.power(j, 0.0), 0.0);
            let mut prev = 0.0;
            for i in 0..=40 {
                let t = 0.1 * i as f64;
                let f = cyc.power(j, t);
                prop_assert!(f >= prev - 1e-12 && f <= 1.0 + 1e-9);
                if j > 1 {
                    prop_assert!(f <= cyc.power(j - 1, t) + 1e-9);
                }
                prev = f;
            }
        }
    }

    #[test]
    fn single_ray_law_is_normalized((a, l, m) in rates(), t in 0.0f64..5.0) {
        let p = ModelParams::new(a, l, m, 1).unwrap();
        let s: f64 = (0..3000).map(|k| linear_bdi_pmf(&p, k, t)).sum();
        prop_assert!((s - 1.0).abs() < 1e-8);
    }

    #[test]
    fn limit_law_mixture_identity(a in 0.05f64..1.0, l in 0.05f64..0.45, d in 1u32..20) {
        let p = ModelParams::new(a, l, 0.5, d).unwrap();
        let law = limit_law(&p, 100);
        for k in 1..=100 {
            prop_assert!((law.pk_limit[k - 1] - law.theta_d * law.nb_pi[k]).abs() < 1e-12);
            prop_assert!(law.pk_limit[k - 1] >= 0.0);
        }
        let mixture0 = law.theta_d * law.nb_pi[0] + (1.0 - law.theta_d);
        prop_assert!((law.p0_limit - mixture0).abs() < 1e-12);
    }

    #[test]
    fn limit_moments_monotone_in_rays(a in 0.05f64..1.0, l in 0.05f64..0.45) {
        let p = ModelParams::new(a, l, 0.5, 1).unwrap();
        let m: Vec<_> = (1..=20).map(|d| limit_moments(&p, Some(d)).unwrap()).collect();
        for w in m.windows(2) {
            prop_assert!(w[1].mean >= w[0].mean);
        }
        let inf = limit_moments(&p, None).unwrap();
        let big = limit_moments(&p, Some(1_000_000)).unwrap();
        prop_assert!((big.mean - inf.mean).abs() < 1e-4 * inf.mean);
        prop_assert!((big.variance - inf.variance).abs() < 1e-4 * inf.variance.abs());
    }

    #[test]
    fn psi_decreases_and_shape_is_fixed(g in 0.2f64..3.0, mu in 0.2f64..2.0, b in -1.0f64..1.0) {
        let dp = DiffusionParams::new(g, mu, b, 0.05).unwrap();
        let mut prev = f64::INFINITY;
        for i in 1..=40 {
            let t = 0.125 * i as f64;
            let v = psi(&dp, t).unwrap();
            prop_assert!(v < prev);
            prev = v;
            prop_assert_eq!(transient_density(&dp, t).unwrap().shape, g);
        }
    }

    #[test]
    fn trajectories_are_valid((a, l, m) in rates(), d in 1u32..6, seed in any::<u64>()) {
        let p = ModelParams::new(a, l, m, d).unwrap();
        let tr = simulate_path(&p, 5.0, seed).unwrap();
        prop_assert!(tr.check(d).is_ok());
        prop_assert_eq!(simulate_path(&p, 5.0, seed).unwrap(), tr);
    }
}

#[test]
fn combinatorial_row_sums() {
    let table = t_table_recursive(12).unwrap();
    let mut fact = num_bigint::BigUint::from(1u32);
    for n in 1..=12usize {
        fact *= n;
        assert_eq!(table.row_sum(n), fact);
        assert_eq!(
            eulerian_polynomial(n).coefficient_sum(),
            num_bigint::BigInt::from(fact.clone())
        );
    }
}
