use phigeo::deform::{chi_dual, ts_dual};
use phigeo::families::{builtin_families, cd_family, identity, stretched, tsallis, CdParams};
use phigeo::geometry::{
    cd_entropy_closed, cd_entropy_compare, cd_metrics_closed, conformal_check, divergence_amari, divergence_bregman,
    divergence_csiszar, divergence_naudts, entropy_amari, entropy_from_phi_nu, entropy_naudts, fisher_metric,
    metric_amari, metric_fd_oracle, metric_naudts, naudts_bregman_generator, t_operator, ts_metric_transform,
    ts_metric_transform_printed, Chart, MetricMatrix,
};
use phigeo::sampling::random_points;
use phigeo::{Error, ProbVec};

fn pv(v: &[f64]) -> ProbVec<f64> {
    ProbVec::new(v.to_vec()).unwrap()
}

fn kl(p: &ProbVec<f64>, q: &ProbVec<f64>) -> f64 {
    p.probs().iter().zip(q.probs()).map(|(a, b)| a * (a / b).ln()).sum()
}

fn shannon(p: &ProbVec<f64>) -> f64 {
    -p.probs().iter().map(|x| x * x.ln()).sum::<f64>()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn naudts_entropy_examples() {
    let half = pv(&[0.5, 0.5]);
    let s = entropy_naudts(&identity(), &half).unwrap();
    assert!(close(s, 2f64.ln() + 1.0, 1e-14));
    let t = entropy_naudts(&tsallis(0.5).unwrap(), &half).unwrap();
    let closed = (2.0 * 0.5f64.powf(1.5) / 1.5 - 1.0) / (0.5 - 1.0);
    assert!(close(t, closed, 1e-13), "{t} vs {closed}");
    assert!((t - 1.05719).abs() < 1e-5);
    let vertex = pv(&[1.0, 0.0]);
    assert!(close(entropy_naudts(&identity(), &vertex).unwrap(), 1.0, 1e-15));
}

#[test]
fn naudts_entropy_quadrature_matches_closed_antiderivative() {
    let d = cd_family(0.7, 0.4, None).unwrap();
    let p = pv(&[0.2, 0.3, 0.5]);
    let direct = entropy_naudts(&d, &p).unwrap();
    let closed = cd_entropy_closed(&CdParams::new(0.7, 0.4, None).unwrap(), &p).unwrap();
    assert!(close(closed, 0.7 * direct, 1e-9), "{closed} vs {}", 0.7 * direct);
}

#[test]
fn divergent_naudts_entropy_is_reported() {
    let err = entropy_naudts(&tsallis(2.0).unwrap(), &pv(&[0.5, 0.5])).unwrap_err();
    assert!(matches!(err, Error::DivergentIntegral(_)), "{err:?}");
}

#[test]
fn amari_entropy_examples() {
    let p = pv(&[0.2, 0.3, 0.5]);
    assert!(close(entropy_amari(&identity(), &p).unwrap(), shannon(&p), 1e-15));
    let t = entropy_amari(&tsallis(0.5).unwrap(), &pv(&[0.5, 0.5])).unwrap();
    assert!(close(t, 2.0 * (1.0 - 1.0 / 2f64.sqrt()), 1e-14));
    assert!((t - 0.58579).abs() < 1e-5);
    for d in builtin_families::<f64>().unwrap() {
        let u = ProbVec::uniform(4).unwrap();
        let expected = -d.log(0.25).unwrap();
        assert!(close(entropy_amari(&d, &u).unwrap(), expected, 1e-13), "{}", d.name());
    }
}

#[test]
fn entropy_from_phi_and_nu() {
    let p = pv(&[0.1, 0.6, 0.3]);
    let q = 0.4;
    let tsallis_s: f64 = p.probs().iter().map(|x| (x.powf(q) - x) / (1.0 - q)).sum();
    let v = entropy_from_phi_nu(&tsallis(q).unwrap(), 1.0 - q, &p).unwrap();
    assert!((v - tsallis_s).abs() <= 1e-14);
    assert_eq!(entropy_from_phi_nu(&identity(), 0.7, &p).unwrap(), 0.0);
    let half = entropy_from_phi_nu(&tsallis(2.0).unwrap(), -1.0, &pv(&[0.5, 0.5])).unwrap();
    assert!((half - 0.5).abs() < 1e-15);
    assert!(entropy_from_phi_nu(&identity(), 0.0, &p).is_err());
}

#[test]
fn naudts_divergence_examples() {
    let p = pv(&[0.6, 0.4]);
    let q = pv(&[0.5, 0.5]);
    for d in builtin_families::<f64>().unwrap() {
        assert_eq!(divergence_naudts(&d, &p, &p).unwrap(), 0.0);
    }
    assert!(close(divergence_naudts(&identity(), &p, &q).unwrap(), kl(&p, &q), 1e-13));
    let big_f = |x: f64| (x.powf(1.5) / 1.5 - x) / 0.5;
    let log_q = |x: f64| (0.5 * x.ln()).exp_m1() / 0.5;
    let closed: f64 = p.probs().iter().zip(q.probs()).map(|(&a, &b)| big_f(a) - big_f(b) - log_q(b) * (a - b)).sum();
    let v = divergence_naudts(&tsallis(0.5).unwrap(), &p, &q).unwrap();
    assert!(close(v, closed, 1e-10), "{v} vs {closed}");
}

#[test]
fn amari_divergence_examples() {
    let p = pv(&[0.6, 0.4]);
    let q = pv(&[0.5, 0.5]);
    assert!(close(divergence_amari(&identity(), &p, &q).unwrap(), kl(&p, &q), 1e-14));
    let v = divergence_amari(&tsallis(2.0).unwrap(), &p, &q).unwrap();
    assert!(close(v, 1.0 / 13.0, 1e-14), "{v}");
    assert_eq!(divergence_amari(&tsallis(2.0).unwrap(), &p, &p).unwrap(), 0.0);
}

#[test]
fn csiszar_and_bregman_examples() {
    let p = pv(&[0.2, 0.5, 0.3]);
    let q = pv(&[0.4, 0.4, 0.2]);
    let xlogx = |x: f64| x * x.ln();
    assert!(close(divergence_csiszar(xlogx, &p, &q).unwrap(), kl(&p, &q), 1e-15));
    let chi2: f64 = p.probs().iter().zip(q.probs()).map(|(a, b)| (a - b).powi(2) / b).sum();
    assert!(close(divergence_csiszar(|x: f64| (x - 1.0).powi(2), &p, &q).unwrap(), chi2, 1e-14));
    assert!(divergence_csiszar(|x: f64| (x - 1.0).powi(2), &p, &p).unwrap().abs() < 1e-16);

    let neg_entropy = |v: &ProbVec<f64>| Ok(v.probs().iter().map(|&x| xlogx(x)).sum());
    let grad = |v: &ProbVec<f64>| Ok(v.probs().iter().map(|&x| x.ln() + 1.0).collect());
    assert!(close(divergence_bregman(neg_entropy, grad, &p, &q).unwrap(), kl(&p, &q), 1e-14));
    let sq = |v: &ProbVec<f64>| Ok(v.probs().iter().map(|x| x * x).sum());
    let sq_grad = |v: &ProbVec<f64>| Ok(v.probs().iter().map(|x| 2.0 * x).collect());
    let expected: f64 = p.probs().iter().zip(q.probs()).map(|(a, b)| (a - b).powi(2)).sum();
    assert!(close(divergence_bregman(sq, sq_grad, &p, &q).unwrap(), expected, 1e-14));

    for d in [tsallis(0.5).unwrap(), cd_family(0.7, 0.4, None).unwrap(), stretched(2.0).unwrap()] {
        let (f, g) = naudts_bregman_generator(&d);
        let b = divergence_bregman(f, g, &p, &q).unwrap();
        let n = divergence_naudts(&d, &p, &q).unwrap();
        assert!(close(b, n, 1e-9), "{}: {b} vs {n}", d.name());
    }
}

#[test]
fn metric_examples() {
    let half = pv(&[0.5, 0.5]);
    let g = metric_naudts(&identity(), &half).unwrap();
    assert_eq!(g.to_rows(), vec![vec![4.0]]);
    assert_eq!(g.chart(), Chart::SimplexInterior);
    assert_eq!(metric_naudts(&tsallis(2.0).unwrap(), &half).unwrap().to_rows(), vec![vec![8.0]]);
    assert_eq!(metric_amari(&identity(), &half).unwrap().to_rows(), vec![vec![4.0]]);
    assert!(close(metric_amari(&tsallis(2.0).unwrap(), &half).unwrap().get(0, 0), 16.0, 1e-15));

    let third = ProbVec::<f64>::uniform(3).unwrap();
    let t = tsallis(0.5).unwrap();
    let gn = metric_naudts(&t, &third).unwrap();
    assert!(close(gn.get(0, 0), 2.0 * 3f64.sqrt(), 1e-14));
    assert!(close(gn.get(0, 1), 3f64.sqrt(), 1e-14));
    let oracle = metric_fd_oracle(|a, b| divergence_naudts(&t, a, b), &third).unwrap();
    assert!(oracle.rel_diff(&gn).unwrap() < 1e-5);
    assert!(gn.is_positive_definite());
    assert!(gn.entries().is_symmetric());
}

#[test]
fn metric_matrix_is_symmetrized() {
    let m = phigeo::linalg::Mat::from_rows(&[vec![2.0, 1.0], vec![0.0, 3.0]]).unwrap();
    let g = MetricMatrix::new(m, Chart::Theta, phigeo::geometry::BasePoint::Theta(vec![0.0]));
    assert_eq!(g.get(0, 1), 0.5);
    assert_eq!(g.get(1, 0), 0.5);
    assert!(g.is_positive_definite());
}

#[test]
fn amari_metric_is_scaled_naudts_metric_of_chi() {
    let p = pv(&[0.2, 0.3, 0.5]);
    for d in [tsallis(0.5).unwrap(), tsallis(2.0).unwrap(), cd_family(0.5, 0.0, None).unwrap()] {
        let chi = chi_dual(&d).unwrap();
        let h = d.h(&p).unwrap();
        let lhs = metric_amari(&d, &p).unwrap().scale(h);
        let rhs = metric_naudts(&chi, &p).unwrap();
        assert!(lhs.rel_diff(&rhs).unwrap() < 1e-13, "{}", d.name());
    }
}

#[test]
fn fd_oracle_examples() {
    let p = pv(&[0.4, 0.6]);
    let fisher = fisher_metric(&p).unwrap();
    let oracle = metric_fd_oracle(|a, b| Ok(kl(a, b)), &p).unwrap();
    assert!(oracle.rel_diff(&fisher).unwrap() < 1e-5);
    let t = tsallis(0.5).unwrap();
    let o = metric_fd_oracle(|a, b| divergence_naudts(&t, a, b), &p).unwrap();
    assert!(o.rel_diff(&metric_naudts(&t, &p).unwrap()).unwrap() < 1e-5);
    let s = stretched(2.0).unwrap();
    let o = metric_fd_oracle(|a, b| divergence_amari(&s, a, b), &p).unwrap();
    assert!(o.rel_diff(&metric_amari(&s, &p).unwrap()).unwrap() < 1e-5);
}

#[test]
fn closed_metrics_match_fd_hessians_on_random_points() {
    for d in builtin_families::<f64>().unwrap() {
        for n in [2, 3, 5] {
            for p in random_points::<f64>(11 + n as u64, n, 4).unwrap() {
                let gn = metric_naudts(&d, &p).unwrap();
                let on = metric_fd_oracle(|a, b| divergence_naudts(&d, a, b), &p).unwrap();
                assert!(on.rel_diff(&gn).unwrap() < 1e-4, "{} naudts at {:?}", d.name(), p.probs());
                let ga = metric_amari(&d, &p).unwrap();
                let oa = metric_fd_oracle(|a, b| divergence_amari(&d, a, b), &p).unwrap();
                assert!(oa.rel_diff(&ga).unwrap() < 1e-4, "{} amari at {:?}", d.name(), p.probs());
            }
        }
    }
}

#[test]
fn t_operator_reproduces_amari_metric() {
    let half = pv(&[0.5, 0.5]);
    assert!(close(t_operator(&tsallis(2.0).unwrap(), &half).unwrap().get(0, 0), 16.0, 1e-14));
    for d in builtin_families::<f64>().unwrap() {
        for p in random_points::<f64>(5, 3, 20).unwrap() {
            let t = t_operator(&d, &p).unwrap();
            let a = metric_amari(&d, &p).unwrap();
            assert!(t.rel_diff(&a).unwrap() < 1e-10, "{}", d.name());
        }
    }
}

#[test]
fn ts_transform_matches_ts_dual_metric() {
    let p = pv(&[0.3, 0.2, 0.5]);
    for d in builtin_families::<f64>().unwrap() {
        let t = ts_metric_transform(&d, 0.0, &p).unwrap();
        assert!(t.rel_diff(&metric_naudts(&d, &p).unwrap()).unwrap() < 1e-14);
    }
    for q in [0.5, 2.0, 0.8] {
        let d = tsallis(q).unwrap();
        let dual = ts_dual(&d, 1.0 - q).unwrap();
        for p in random_points::<f64>(3, 3, 10).unwrap() {
            let a = ts_metric_transform(&d, 1.0 - q, &p).unwrap();
            let b = metric_naudts(&dual, &p).unwrap();
            assert!(a.rel_diff(&b).unwrap() < 1e-8, "q = {q}");
        }
    }
}

#[test]
fn ts_transform_identity_example() {
    let half = pv(&[0.5, 0.5]);
    let f = 1.0 + 0.5 * 0.5f64.ln();
    let t = ts_metric_transform(&identity(), 0.5, &half).unwrap();
    let phi_ts = |x: f64| x * (1.0 + 0.5 * x.ln()).powi(2);
    assert!(close(t.get(0, 0), 2.0 / phi_ts(0.5), 1e-13));
    assert!(close(t.get(0, 0), 2.0 * (1.0 / 0.5) / (f * f), 1e-13));
    let printed = ts_metric_transform_printed(&identity(), 0.5, &half).unwrap();
    assert!(close(printed.get(0, 0), 2.0 * (1.0 / 0.5) * f * f, 1e-13));
    let err = ts_metric_transform(&identity(), 0.5, &pv(&[0.1, 0.9])).unwrap_err();
    assert!(matches!(err, Error::Pole(_)));
}

#[test]
fn conformal_duality_examples() {
    let p = pv(&[0.3, 0.7]);
    let r = conformal_check(&identity(), &p).unwrap();
    assert!(r.max_abs_residual < 1e-7, "{r:?}");
    assert!((r.conformal_factor.as_ref().unwrap()[0] - 1.0).abs() < 1e-8);
    let r = conformal_check(&tsallis(0.5).unwrap(), &p).unwrap();
    assert!(r.max_rel_residual < 1e-6, "{r:?}");
    let r = conformal_check(&tsallis(2.0).unwrap(), &pv(&[0.2, 0.3, 0.5])).unwrap();
    assert!(r.max_rel_residual < 1e-6, "{r:?}");
    let r = conformal_check(&cd_family(0.8, 0.5, None).unwrap(), &pv(&[0.25, 0.75])).unwrap();
    assert!(r.max_rel_residual < 1e-6, "{r:?}");
    assert!(r.max_abs_residual >= 0.0);
}

#[test]
fn cd_entropy_alignment() {
    for (c, d) in [(0.7, 0.4), (0.8, 0.5)] {
        let params = CdParams::new(c, d, None).unwrap();
        for p in [pv(&[0.3, 0.7]), pv(&[0.2, 0.3, 0.5])] {
            let cmp = cd_entropy_compare(&params, &p).unwrap();
            assert!(cmp.aligned_residual < 1e-7, "{cmp:?}");
            assert!((cmp.scale - c).abs() < 1e-8, "{cmp:?}");
        }
    }
    let err = cd_entropy_closed(&CdParams::new(1.0, 1.0, None).unwrap(), &pv(&[0.5, 0.5])).unwrap_err();
    assert!(matches!(err, Error::Branch(_)));
}

#[test]
fn cd_closed_metrics() {
    let p = pv(&[0.3, 0.7]);
    let m = cd_metrics_closed(&CdParams::new(1.0, 1.0, None).unwrap(), &p).unwrap();
    let fisher = 1.0 / 0.3 + 1.0 / 0.7;
    assert!(close(m.naudts.get(0, 0), fisher, 1e-14));
    assert!(close(m.amari.get(0, 0), fisher, 1e-14));

    let third = pv(&[1.0 / 3.0, 2.0 / 3.0]);
    let m = cd_metrics_closed(&CdParams::new(0.7, 0.4, None).unwrap(), &third).unwrap();
    assert!(m.naudts_residual < 1e-6 && m.amari_residual < 1e-6, "{m:?}");
    assert!(m.naudts_literal_residual > 1e-3, "{m:?}");

    let p3 = pv(&[0.2, 0.3, 0.5]);
    for q in [0.5, 0.7] {
        let params = CdParams::new(q, 0.0, None).unwrap();
        let m = cd_metrics_closed(&params, &p3).unwrap();
        assert!(m.naudts_residual < 1e-12 && m.amari_residual < 1e-12, "{m:?}");
        let d = cd_family(q, 0.0, None).unwrap();
        let h = d.h(&p3).unwrap();
        let conformal = metric_amari(&d, &p3).unwrap().scale(h);
        let target = fisher_metric(&p3).unwrap().scale(2.0 - q);
        assert!(conformal.rel_diff(&target).unwrap() < 1e-8);
        assert!(m.amari_printed_residual < 1e-12);
        assert!(m.amari_printed.rel_diff(&m.amari).unwrap() > 1e-3);
    }
}

#[test]
fn divergences_are_nonnegative() {
    let pts = random_points::<f64>(99, 3, 200).unwrap();
    for d in builtin_families::<f64>().unwrap() {
        for pair in pts.chunks(2).take(100) {
            let n = divergence_naudts(&d, &pair[0], &pair[1]).unwrap();
            assert!(n >= -1e-12, "{}: {n}", d.name());
            if d.is_concave() {
                let a = divergence_amari(&d, &pair[0], &pair[1]).unwrap();
                assert!(a >= -1e-12, "{}: {a}", d.name());
            }
        }
    }
}

#[test]
fn csiszar_metric_is_rescaled_fisher() {
    let alpha = 1.5;
    type Generator = Box<dyn Fn(f64) -> f64>;
    let fs: Vec<(Generator, f64)> = vec![
        (Box::new(|x: f64| x * x.ln()), 1.0),
        (Box::new(|x: f64| (x - 1.0).powi(2)), 2.0),
        (Box::new(move |x: f64| (x.powf(alpha) - x) / (alpha - 1.0)), alpha),
    ];
    for p in random_points::<f64>(4, 3, 5).unwrap() {
        let fisher = fisher_metric(&p).unwrap();
        for (f, f2) in &fs {
            let o = metric_fd_oracle(|a, b| divergence_csiszar(f, a, b), &p).unwrap();
            assert!(o.rel_diff(&fisher.scale(*f2)).unwrap() < 1e-4);
        }
    }
}

#[test]
fn tsallis_additive_duality_collapse() {
    for q in [0.5, 0.8, 1.5] {
        let sa = tsallis(q).unwrap();
        let sn = tsallis(2.0 - q).unwrap();
        for p in random_points::<f64>(21, 3, 200).unwrap() {
            let a = entropy_amari(&sa, &p).unwrap();
            let n = entropy_naudts(&sn, &p).unwrap();
            let predicted = (1.0 - 1.0 / (q * (1.0 + (1.0 - q) * n))) / (1.0 - q);
            assert!((a - predicted).abs() < 1e-10, "q = {q}: {a} vs {predicted}");
        }
    }
}

#[test]
fn tsallis_amari_metric_is_conformal_to_fisher() {
    for q in [0.5, 2.0, 1.3] {
        let d = tsallis(q).unwrap();
        for p in random_points::<f64>(8, 4, 10).unwrap() {
            let h = d.h(&p).unwrap();
            let target = fisher_metric(&p).unwrap().scale(q / h);
            assert!(metric_amari(&d, &p).unwrap().rel_diff(&target).unwrap() < 1e-10);
        }
    }
}

#[test]
fn metric_is_discontinuous_at_the_singular_point() {
    let p = pv(&[1.0 / 3.0, 2.0 / 3.0]);
    let at = |c: f64, d: f64| {
        let f = cd_family(c, d, None).unwrap();
        (metric_naudts(&f, &p).unwrap().get(0, 0), metric_amari(&f, &p).unwrap().get(0, 0))
    };
    let mut last = (f64::INFINITY, f64::INFINITY);
    for eps in [0.2, 0.1, 0.05, 0.025] {
        let (n, a) = at(1.0 - eps, 0.01);
        assert!(n < last.0 && a < last.1, "eps = {eps}: ({n}, {a}) after {last:?}");
        last = (n, a);
    }
    let along_d_zero = at(1.0 - 1e-4, 0.0);
    let along_c_one = at(1.0, 1e-4);
    assert!((along_d_zero.0 - 4.5).abs() < 1e-2 && (along_d_zero.1 - 4.5).abs() < 1e-2);
    assert!((along_c_one.0 - 2.5).abs() < 1e-2, "{along_c_one:?}");
    assert!(along_c_one.1 < 1.25, "{along_c_one:?}");
}

#[test]
fn uniform_distribution_maximizes_entropies() {
    let u = ProbVec::uniform(3).unwrap();
    let pts = random_points::<f64>(31, 3, 50).unwrap();
    for d in builtin_families::<f64>().unwrap() {
        let sn = entropy_naudts(&d, &u).ok();
        let sa = entropy_amari(&d, &u).unwrap();
        for p in &pts {
            if let Some(sn) = sn {
                assert!(entropy_naudts(&d, p).unwrap() < sn, "{} naudts", d.name());
            }
            assert!(entropy_amari(&d, p).unwrap() < sa, "{} amari at {:?}", d.name(), p.probs());
        }
    }
}

#[test]
fn boundary_points_are_rejected() {
    let p = pv(&[0.0, 1.0]);
    let d = tsallis(0.5).unwrap();
    assert!(matches!(metric_naudts(&d, &p), Err(Error::Boundary(_))));
    assert!(matches!(metric_amari(&d, &p), Err(Error::Boundary(_))));
    assert!(matches!(divergence_amari(&d, &p, &pv(&[0.5, 0.5])), Err(Error::Boundary(_))));
}

#[test]
fn single_precision_metrics() {
    let p = ProbVec::new(vec![0.25f32, 0.75]).unwrap();
    let g = metric_amari(&tsallis(2.0f32).unwrap(), &p).unwrap();
    let h = 0.25f32 * 0.25 + 0.75 * 0.75;
    assert!((g.get(0, 0) - (2.0 / 0.25 + 2.0 / 0.75) / h).abs() < 1e-4);
}
