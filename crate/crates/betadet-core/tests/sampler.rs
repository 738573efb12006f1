use betadet_core::sampler::{sample_beta, sample_det_process, sample_gamma, RngStream};
use betadet_core::stats::{mean, std_error};
use betadet_core::{EnsembleKind, EnsembleParams};
use proptest::prelude::*;

#[test]
fn beta_gamma_algebra() {
    let (a, b) = (0.7, 2.3);
    let draws = 100_000;
    let mut rng = RngStream::new(11, 0);
    let mut x1 = Vec::with_capacity(draws);
    let mut x2 = Vec::with_capacity(draws);
    let mut y1 = Vec::with_capacity(draws);
    let mut y2 = Vec::with_capacity(draws);
    for _ in 0..draws {
        let be = sample_beta(a, b, &mut rng).unwrap();
        let g = sample_gamma(a + b, 1.0, &mut rng).unwrap();
        x1.push(be * g);
        x2.push((1.0 - be) * g);
        y1.push(sample_gamma(a, 1.0, &mut rng).unwrap());
        y2.push(sample_gamma(b, 1.0, &mut rng).unwrap());
    }
    for (x, y) in [(&x1, &y1), (&x2, &y2)] {
        let se = std_error(x).hypot(std_error(y));
        assert!((mean(x) - mean(y)).abs() < 3.0 * se);
        let sq = |v: &Vec<f64>| v.iter().map(|z| z * z).collect::<Vec<f64>>();
        let se2 = std_error(&sq(x)).hypot(std_error(&sq(y)));
        assert!((mean(&sq(x)) - mean(&sq(y))).abs() < 3.0 * se2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reproducible_paths(seed in any::<u64>(), stream in 0u64..1000, beta in 0.2f64..4.0, n in 1usize..60) {
        for kind in [EnsembleKind::Gram, EnsembleKind::Laguerre, EnsembleKind::AuxS] {
            let p = EnsembleParams::new(kind, beta, n).unwrap();
            let a = sample_det_process(&p, &mut RngStream::new(seed, stream)).unwrap();
            let b = sample_det_process(&p, &mut RngStream::new(seed, stream)).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn gram_and_jacobi_nonpositive(seed in any::<u64>(), beta in 0.1f64..4.0, n in 1usize..80, t1 in 0.2f64..2.0, t2 in 0.2f64..2.0) {
        let g = EnsembleParams::gram(beta, n).unwrap();
        let path = sample_det_process(&g, &mut RngStream::new(seed, 0)).unwrap();
        prop_assert!(path.cumlog().iter().all(|&c| c <= 0.0));
        if let Ok(j) = EnsembleParams::jacobi(beta, n, t1, t2) {
            let path = sample_det_process(&j, &mut RngStream::new(seed, 1)).unwrap();
            prop_assert!(path.cumlog().iter().all(|&c| c <= 0.0));
        }
    }
}

#[test]
fn gram_factor_means() {
    let n = 20;
    let p = EnsembleParams::gram(1.5, n).unwrap();
    let draws = 20_000;
    let mut sums: Vec<Vec<f64>> = (0..n).map(|_| Vec::with_capacity(draws)).collect();
    for i in 0..draws {
        let path = sample_det_process(&p, &mut RngStream::new(5, i as u64)).unwrap();
        for (j, d) in path.increments().iter().enumerate() {
            sums[j].push(d.exp());
        }
    }
    for (j, xs) in sums.iter().enumerate() {
        let want = (n - j) as f64 / n as f64;
        let se = std_error(xs).max(1e-12);
        assert!((mean(xs) - want).abs() < 4.0 * se + 1e-12, "factor {}: {} vs {want}", j + 1, mean(xs));
    }
}
