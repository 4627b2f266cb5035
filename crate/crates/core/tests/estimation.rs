use phigeo::estimation::{
    amari_identity_check, amari_identity_literal, cr_report, dp_dtheta, fisher_general, naudts_identity_check,
    regularity_check, Estimator,
};
use phigeo::families::{cd_family, identity, stretched, tsallis};
use phigeo::geometry::Chart;
use phigeo::maxent::{normalize, ConfigMatrix, PhiExpFamily};
use phigeo::sampling::{random_interior, seeded_rng};
use phigeo::{Deformation, Error, ProbVec};
use rand::Rng;

fn config(n: usize, m: usize) -> ConfigMatrix<f64> {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let x = i as f64 / (n - 1) as f64;
            (0..m).map(|k| if k == 0 { x } else { (x - 0.4).powi(2) }).collect()
        })
        .collect();
    ConfigMatrix::new(&rows).unwrap()
}

fn families() -> Vec<Deformation<f64>> {
    vec![
        identity(),
        tsallis(0.5).unwrap(),
        tsallis(2.0).unwrap(),
        stretched(2.0).unwrap(),
        cd_family(0.8, 0.5, None).unwrap(),
    ]
}

fn family(d: &Deformation<f64>, n: usize, m: usize, rng: &mut impl Rng) -> PhiExpFamily<f64> {
    let theta: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize(d, &config(n, m), &theta).unwrap()
}

#[test]
fn dp_dtheta_matches_finite_differences() {
    let mut rng = seeded_rng(5);
    for d in families() {
        let fam = family(&d, 3, 2, &mut rng);
        let jac = dp_dtheta(&fam).unwrap();
        for k in 0..2 {
            assert!(jac.column(k).iter().sum::<f64>().abs() < 1e-10);
            let h = 1e-6;
            let mut tp = fam.theta().to_vec();
            let mut tm = fam.theta().to_vec();
            tp[k] += h;
            tm[k] -= h;
            let pp = normalize(&d, fam.config(), &tp).unwrap();
            let pm = normalize(&d, fam.config(), &tm).unwrap();
            for i in 0..3 {
                let fd = (pp.pmf().probs()[i] - pm.pmf().probs()[i]) / (2.0 * h);
                assert!((fd - jac[(i, k)]).abs() < 1e-6, "{} ({i},{k}): {fd} vs {}", d.name(), jac[(i, k)]);
            }
        }
    }
}

#[test]
fn identity_family_gives_classical_score_and_fisher() {
    let fam = normalize(&identity(), &config(4, 2), &[0.7, -0.4]).unwrap();
    let p = fam.pmf().probs().to_vec();
    let mean = fam.linear_moments();
    let jac = dp_dtheta(&fam).unwrap();
    for i in 0..4 {
        for j in 0..2 {
            let expected = p[i] * (fam.config().row(i)[j] - mean[j]);
            assert!((jac[(i, j)] - expected).abs() < 1e-14);
        }
    }
    let info = fisher_general(&fam, fam.pmf()).unwrap();
    assert_eq!(info.chart(), Chart::Theta);
    for k in 0..2 {
        for l in 0..2 {
            let cov: f64 =
                (0..4).map(|i| p[i] * (fam.config().row(i)[k] - mean[k]) * (fam.config().row(i)[l] - mean[l])).sum();
            assert!((info.get(k, l) - cov).abs() < 1e-13);
        }
    }
}

#[test]
fn two_state_hand_case() {
    let d = tsallis(0.5).unwrap();
    let fam = normalize(&d, &ConfigMatrix::column(&[0.0, 1.0]).unwrap(), &[0.6]).unwrap();
    let big_p: ProbVec<f64> = ProbVec::new(vec![0.3, 0.7]).unwrap();
    let dp = dp_dtheta(&fam).unwrap()[(1, 0)];
    let expected = dp * dp * (1.0 / 0.7 + 1.0 / 0.3);
    assert!((fisher_general(&fam, &big_p).unwrap().get(0, 0) - expected).abs() < 1e-14);
}

#[test]
fn regularity_holds() {
    let mut rng = seeded_rng(9);
    for d in families() {
        let fam = family(&d, 3, 1, &mut rng);
        for _ in 0..5 {
            let big_p = random_interior(&mut rng, 3).unwrap();
            assert!(regularity_check(&fam, &big_p).unwrap() < 1e-10);
        }
    }
}

#[test]
fn boundary_families_are_rejected() {
    let fam = normalize(&tsallis(0.5).unwrap(), &ConfigMatrix::column(&[0.0, 1.0, 2.0]).unwrap(), &[-1.0]).unwrap();
    assert!(matches!(dp_dtheta(&fam), Err(Error::Boundary(_))));
    let fam = normalize(&identity(), &config(3, 1), &[0.2]).unwrap();
    let edge = ProbVec::new(vec![0.0, 0.5, 0.5]).unwrap();
    assert!(matches!(fisher_general(&fam, &edge), Err(Error::Boundary(_))));
    assert!(matches!(fisher_general(&fam, &ProbVec::uniform(4).unwrap()), Err(Error::Dimension(_))));
}

#[test]
fn cramer_rao_bound_and_equality() {
    let mut rng = seeded_rng(42);
    for d in families() {
        for _ in 0..3 {
            let fam = family(&d, 3, 1, &mut rng);
            let est = Estimator::from_config(fam.config());
            for _ in 0..100 {
                let big_p = random_interior(&mut rng, 3).unwrap();
                let r = cr_report(&fam, &big_p, &est, 0, 0).unwrap();
                assert!(r.slack >= -1e-10, "{}: {r:?}", d.name());
            }
            let escort = d.escort(fam.pmf()).unwrap();
            let r = cr_report(&fam, &escort, &est, 0, 0).unwrap();
            assert!(r.slack.abs() < 1e-8 && r.equality, "{}: {r:?}", d.name());
            let info = fisher_general(&fam, &escort).unwrap();
            assert!(info.eigenvalues().iter().all(|&v| v >= -1e-12));
        }
    }
}

#[test]
fn f_second_matches_finite_differences() {
    let d = tsallis(0.5).unwrap();
    let fam = normalize(&d, &config(3, 1), &[0.4]).unwrap();
    let est = Estimator::new(&[vec![1.0], vec![-2.0], vec![0.5]]).unwrap();
    let r = cr_report(&fam, fam.pmf(), &est, 0, 0).unwrap();
    let mean = |t: f64| -> f64 {
        let f = normalize(&d, fam.config(), &[t]).unwrap();
        f.pmf().probs().iter().zip([1.0, -2.0, 0.5]).map(|(p, c)| p * c).sum()
    };
    let h = 1e-5;
    let fd = (mean(0.4 + h) - mean(0.4 - h)) / (2.0 * h);
    assert!((fd - r.f_second).abs() < 1e-8);
    assert!(r.slack >= -1e-10);
}

#[test]
fn zero_denominator_is_reported() {
    let fam = normalize(&identity(), &config(3, 1), &[0.0]).unwrap();
    let flat = Estimator::new(&[vec![1.0], vec![1.0], vec![1.0]]).unwrap();
    assert!(matches!(cr_report(&fam, fam.pmf(), &flat, 0, 0), Err(Error::ZeroDenominator(_))));
    assert!(matches!(cr_report(&fam, fam.pmf(), &flat, 1, 0), Err(Error::Dimension(_))));
}

#[test]
fn naudts_identity_on_family_matrix() {
    let mut rng = seeded_rng(13);
    for d in families() {
        for (n, m) in [(2, 1), (3, 1), (3, 2)] {
            let fam = family(&d, n, m, &mut rng);
            let report = naudts_identity_check(&fam).unwrap();
            assert!(report.passes(1e-6), "{} ({n},{m}): {report:?}", d.name());
        }
    }
    let fam = normalize(&identity(), &config(3, 1), &[0.5]).unwrap();
    let report = naudts_identity_check(&fam).unwrap();
    assert!(report.max_rel_residual < 1e-13);
    assert!((report.conformal_factor.unwrap()[0] - 1.0).abs() < 1e-15);
}

#[test]
fn amari_identity_on_family_matrix() {
    let mut rng = seeded_rng(17);
    for d in families() {
        for (n, m) in [(2, 1), (3, 1), (3, 2)] {
            let fam = family(&d, n, m, &mut rng);
            let report = amari_identity_check(&fam).unwrap();
            assert!(report.passes(1e-5), "{} ({n},{m}): {report:?}", d.name());
        }
    }
}

#[test]
fn literal_amari_reading_only_holds_for_identity() {
    let fam = normalize(&identity(), &config(3, 1), &[0.5]).unwrap();
    assert!(amari_identity_literal(&fam).unwrap().passes(1e-10));
    let fam = normalize(&tsallis(0.5).unwrap(), &config(3, 1), &[0.5]).unwrap();
    assert!(amari_identity_literal(&fam).unwrap().max_rel_residual > 1e-3);
}
