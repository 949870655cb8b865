mod common;

use common::*;
use num_complex::Complex64;
use qwalk_core::kernels::{first_step_compatibility, phi_matrix_explicit, recurrence_residual};
use qwalk_core::verify::{config_grid, delayed_kraus_explicit};
use qwalk_core::walk::{completeness_residuals, kraus_sequence};
use qwalk_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_op(rng: &mut ChaCha8Rng, terms: usize) -> LaurentOperator {
    LaurentOperator::from_coeffs((0..terms).map(|_| {
        (
            rng.gen_range(-2..=2),
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        )
    }))
}

#[test]
fn hadamard_matches_dense_entrywise_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let a = random_op(&mut rng, 3);
        let b = random_op(&mut rng, 3);
        let window = -3..=3;
        let da = a.to_dense(window.clone()).unwrap();
        let db = b.to_dense(window.clone()).unwrap();
        let want = &da * &db.mapv(|z| z.conj());
        let got = a.hadamard_conj(&b).to_dense(window).unwrap();
        assert_eq!(got.dim(), (7, 7));
        for (x, y) in got.iter().zip(want.iter()) {
            assert!((x - y).norm() < 1e-15);
        }
    }
}

#[test]
fn products_match_dense_products_on_interior() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let a = random_op(&mut rng, 3);
        let b = random_op(&mut rng, 3);
        let wide = -8..=8;
        let dense = a
            .to_dense(wide.clone())
            .unwrap()
            .dot(&b.to_dense(wide.clone()).unwrap());
        let lattice = (&a * &b).to_dense(wide).unwrap();
        // Rows and columns 4..=12 are unaffected by truncation at support ±2 per factor.
        for i in 4..=12 {
            for j in 4..=12 {
                assert!((dense[[i, j]] - lattice[[i, j]]).norm() < 1e-14);
            }
        }
    }
}

#[test]
fn classical_kernel_dense_rows_sum_to_one() {
    let dc = classical_kernel(0.3).unwrap().to_operator();
    let dense = dc.to_dense(-10..=10).unwrap();
    for i in 1..20 {
        let row: Complex64 = dense.row(i).iter().sum();
        let col: Complex64 = dense.column(i).iter().sum();
        assert!((row - 1.0).norm() < 1e-15);
        assert!((col - 1.0).norm() < 1e-15);
    }
}

#[test]
fn step_operator_is_unitary() {
    for p in [0.0, 0.25, 1.0 / 3.0, 0.5, 0.75, 1.0] {
        let cfg = WalkConfig::biased(p, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let v = build_step_operator(&cfg);
        assert!(v.unitarity_residual() < 1e-12, "p = {p}");
        assert!(v.pow(7).unitarity_residual() < 1e-12, "p = {p}");
    }
}

#[test]
fn global_walk_matches_amplitude_oracle() {
    let configs = [
        WalkConfig::symmetric(),
        WalkConfig::biased(0.25, c(0.0, 0.0), c(1.0, 0.0)).unwrap(),
        WalkConfig::biased(0.7, c(0.6, 0.0), c(0.0, -0.8)).unwrap(),
        WalkConfig::new(
            Coin::Unitary([[c(0.0, 0.6), c(0.8, 0.0)], [c(0.8, 0.0), c(0.0, 0.6)]]),
            c(1.0, 0.0),
            c(0.0, 0.0),
            TracingScheme::Global,
        )
        .unwrap(),
    ];
    for cfg in configs {
        let oracle = amplitude_walk(cfg.coin(), cfg.c(), cfg.d(), 30);
        let traj = global_trajectory(&cfg, 30);
        for n in 0..=30 {
            assert!(max_diff(&oracle[n], traj[n].iter()) < 1e-12, "n = {n}");
            if n % 5 == 0 {
                assert!(max_diff(&oracle[n], global_distribution(&cfg, n).iter()) < 1e-12);
                let column = quantum_kernel(&cfg, n);
                assert!(max_diff(&oracle[n], column.iter()) < 1e-12);
            }
        }
    }
}

#[test]
fn symmetric_walk_small_steps_are_exact() {
    let sym = WalkConfig::symmetric();
    let p6 = global_distribution(&sym, 6);
    let want = [
        (-6, 1.0),
        (-4, 18.0),
        (-2, 9.0),
        (0, 8.0),
        (2, 9.0),
        (4, 18.0),
        (6, 1.0),
    ];
    for (k, w) in want {
        assert!((p6.prob(k) - w / 64.0).abs() < 1e-12);
    }
    assert_eq!(p6.support_len(), 7);
}

#[test]
fn symmetric_walk_is_mirror_symmetric() {
    let sym = WalkConfig::symmetric();
    for (n, d) in global_trajectory(&sym, 50).iter().enumerate() {
        assert!(d.max_abs_diff(&d.reflected()) < 1e-12, "n = {n}");
    }
}

#[test]
fn supports_respect_parity() {
    for (cfg, _, _) in config_grid() {
        for (n, d) in global_trajectory(&cfg, 25).iter().enumerate() {
            for k in d.sites() {
                assert!(k.abs() <= n as i64 && (k + n as i64) % 2 == 0, "site {k} at step {n}");
            }
        }
    }
}

#[test]
fn completeness_holds_on_both_sides() {
    for (cfg, pl, cl) in config_grid() {
        for (n, pair) in kraus_sequence(&cfg).take(21).enumerate() {
            let (left, right) = completeness_residuals(&pair.as_slice());
            assert!(left < 1e-12 && right < 1e-12, "p={pl} coin={cl} N={n}");
        }
    }
}

#[test]
fn prompt_walk_matches_binomial() {
    for (cfg, _, _) in config_grid() {
        let q = cfg.right_step_probability();
        for (n, d) in prompt_trajectory(&cfg, 30).iter().enumerate() {
            assert!(max_diff(&binomial_oracle(n, q), d.iter()) < 1e-12);
        }
    }
    let cfg = WalkConfig::biased(0.25, c(0.0, 0.0), c(1.0, 0.0)).unwrap();
    assert!((prompt_distribution(&cfg, 1).prob(1) - 0.75).abs() < 1e-12);
}

#[test]
fn cp_walk_matches_dense_channel() {
    for (m, iterations) in [(1, 6), (2, 5), (3, 3)] {
        for cfg in [
            WalkConfig::symmetric(),
            WalkConfig::biased(1.0 / 3.0, c(0.0, 0.0), c(1.0, 0.0)).unwrap(),
        ] {
            let (half, dense) = dense_delayed_walk(cfg.coin(), cfg.c(), cfg.d(), m, iterations);
            let traj = cp_walk(&cfg, m, iterations).unwrap();
            for (j, (rho, want)) in traj.iter().zip(&dense).enumerate() {
                for ((i, k), v) in rho.iter() {
                    let w = want[[(i + half) as usize, (k + half) as usize]];
                    assert!((v - w).norm() < 1e-12, "m={m} j={j} ({i},{k})");
                }
                let got = dense_diagonal(half, want);
                assert!(max_diff(&got, rho.diagonal().unwrap().iter()) < 1e-12);
            }
        }
    }
}

#[test]
fn cp_walk_second_moment_at_iteration_two() {
    let sym = WalkConfig::symmetric();
    let traj = cp_walk(&sym, 2, 2).unwrap();
    assert_eq!(moment(&traj[0].diagonal().unwrap(), 2), 0.0);
    assert!((moment(&traj[2].diagonal().unwrap(), 2) - 5.0).abs() < 1e-12);
}

#[test]
fn unit_period_cp_walk_is_prompt_walk() {
    for (cfg, _, _) in config_grid() {
        let traj = cp_walk(&cfg, 1, 20).unwrap();
        for (rho, d) in traj.iter().zip(prompt_trajectory(&cfg, 20)) {
            assert!(rho.diagonal().unwrap().max_abs_diff(&d) < 1e-12);
        }
    }
}

#[test]
fn schemes_agree_on_a_single_trace() {
    for (cfg, _, _) in config_grid() {
        for n in 1..=10 {
            let global = global_distribution(&cfg, n);
            let once = cp_apply(&DensityMatrix::pure_site(0), &kraus_pair(&cfg, n).into_vec()).unwrap();
            assert!(once.diagonal().unwrap().max_abs_diff(&global) < 1e-12);
            let walk = cp_walk(&cfg, n, 1).unwrap();
            assert!(walk[1].diagonal().unwrap().max_abs_diff(&global) < 1e-12);
        }
    }
}

#[test]
fn cp_walk_preserves_trace_and_hermiticity() {
    let sym = WalkConfig::symmetric();
    for (m, iterations) in [(1, 100), (2, 40), (3, 20)] {
        for rho in cp_walk(&sym, m, iterations).unwrap() {
            assert!((rho.trace() - 1.0).norm() < 1e-12, "m = {m}");
            assert!(rho.hermiticity_residual() < 1e-12, "m = {m}");
        }
    }
}

#[test]
fn delayed_kraus_generic_path_matches_closed_form() {
    for (cfg, pl, cl) in config_grid() {
        let generic = kraus_delayed(&cfg, 2).unwrap();
        let explicit = delayed_kraus_explicit(&cfg).unwrap();
        for k in 0..2 {
            assert!(generic[k].max_abs_diff(&explicit[k]) < 1e-12, "p={pl} coin={cl}");
        }
        let phi = phi_matrix(&cfg).unwrap();
        assert!(phi.max_abs_diff(&phi_matrix_explicit(&cfg).unwrap()) < 1e-12);
    }
}

#[test]
fn recurrence_and_pseudo_memory() {
    for (cfg, pl, cl) in config_grid() {
        for n in 1..=12 {
            assert!(recurrence_residual(&cfg, n).unwrap() < 1e-10, "p={pl} coin={cl} N={n}");
        }
        let base = recurrence_residual(&cfg, 0).unwrap();
        if first_step_compatibility(&cfg).is_ok() {
            assert!(base < 1e-10);
            for n in 1..=12 {
                let rebuilt = pseudo_memory_reconstruct(&cfg, n).unwrap();
                assert!(rebuilt.max_abs_diff(&global_distribution(&cfg, n)) < 1e-10);
            }
        } else {
            assert!(base > 1e-10);
        }
    }
}

#[test]
fn kernel_walk_and_binomial_solution_agree() {
    for (cfg, _, _) in config_grid() {
        let dq = delayed_kernel(&cfg).unwrap();
        let traj = kernel_walk(&dq, 10, &SiteDistribution::delta(0)).unwrap();
        for (n, d) in traj.iter().enumerate() {
            assert!(binomial_solution(&cfg, n).unwrap().max_abs_diff(d) < 1e-10);
        }
    }
}

#[test]
fn kernel_and_cp_walks_part_after_one_iteration() {
    let sym = WalkConfig::symmetric();
    let dq = delayed_kernel(&sym).unwrap();
    let kw = kernel_walk(&dq, 3, &SiteDistribution::delta(0)).unwrap();
    let cp: Vec<_> = cp_walk(&sym, 2, 3)
        .unwrap()
        .iter()
        .map(|r| r.diagonal().unwrap())
        .collect();
    assert!(kw[0].total_variation(&cp[0]) < 1e-12);
    assert!(kw[1].total_variation(&cp[1]) < 1e-12);
    assert!(kw[2].total_variation(&cp[2]) > 1e-6);
    for (n, d) in kw.iter().enumerate() {
        assert!((moment(d, 2) - 2.0 * n as f64).abs() < 1e-12);
    }
}

#[test]
fn classical_walk_second_moment_is_linear() {
    let cfg = WalkConfig::biased(0.5, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
    for (n, d) in prompt_trajectory(&cfg, 40).iter().enumerate() {
        assert!(moment(d, 1).abs() < 1e-12);
        assert!((moment(d, 2) - n as f64).abs() < 1e-10);
    }
}
