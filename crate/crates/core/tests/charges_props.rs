use mukai_core::charges::{
    coh_action, exp_class, factor_path, inequality_holds, large_volume_threshold, phase, sigma_shift, ChargeVec,
    CohAction, LiftedGL2, ThresholdBranch,
};
use mukai_core::period::{exp_v, TubeChart};
use mukai_core::Lattice;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn shift_moves_phase_by_lambda(re in -5.0..5.0f64, im in -5.0..5.0f64, lambda in -3.0..3.0f64) {
        let z = Complex64::new(re, im);
        prop_assume!(z.norm() > 1e-3);
        let p = phase(z).unwrap();
        let s = sigma_shift(lambda);
        let rotated = Complex64::from_polar(1.0, std::f64::consts::PI * lambda) * z;
        let expected = (p + lambda).rem_euclid(2.0);
        let got = phase(rotated).unwrap();
        let wrap = (got - expected).abs();
        prop_assert!(wrap.min(2.0 - wrap) < 1e-9);
        prop_assert!((s.lift_phase(p) - (p + lambda)).abs() < 1e-9);
    }
}

fn matrix() -> impl Strategy<Value = [[f64; 2]; 2]> {
    prop::collection::vec(-2.0..2.0f64, 4)
        .prop_map(|t| [[t[0], t[1]], [t[2], t[3]]])
        .prop_filter("det > 0.2", |m| m[0][0] * m[1][1] - m[0][1] * m[1][0] > 0.2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factorization_reconstructs_and_is_unique_up_to_even_shift(
        x in -1.0..1.0f64,
        y in 0.5..1.5f64,
        m in matrix(),
        winding in -5i64..=5,
        k in -3i64..=3,
    ) {
        let lat = Lattice::preset("mukai_rank1(2)").unwrap();
        let v0 = lat.point_class().unwrap();
        let chart = TubeChart::new(&v0).unwrap();
        let base = LiftedGL2::new(m, (m[1][0].atan2(m[0][0]) / std::f64::consts::PI).rem_euclid(2.0)).unwrap();
        let samples: Vec<(f64, ChargeVec)> = (0..=400)
            .map(|i| {
                let t = 1.0 + i as f64 / 100.0;
                let z = ChargeVec { z: exp_v(&chart.point(&[x], &[t * y]).unwrap()).unwrap() };
                let g = sigma_shift(winding as f64 * (t - 1.0) / 4.0).compose(&base);
                (t, g.act(&z).unwrap())
            })
            .collect();
        let f = factor_path(&samples, &v0, 0).unwrap();
        prop_assert!(f.max_residual < 1e-9);
        let g = factor_path(&samples, &v0, k).unwrap();
        for (a, b) in f.samples.iter().zip(&g.samples) {
            prop_assert_eq!(b.g.even_shift_from(&a.g, 1e-9), Some(k));
        }
        let first = f.samples.first().unwrap().g.phi0;
        let last = f.samples.last().unwrap().g.phi0;
        prop_assert!((last - first - winding as f64).abs() < 1e-9);
    }

    #[test]
    fn line_twists_are_isometries(l in prop::collection::vec(-4i64..=4, 2)) {
        let lat = Lattice::preset("mukai(<2>+<-2>)").unwrap();
        let g = coh_action(&lat, &CohAction::LineTwist(l.clone())).unwrap();
        prop_assert_eq!(g.apply_raw(&[0, 0, 0, 1]), vec![0, 0, 0, 1]);
        let half = (2 * l[0] * l[0] - 2 * l[1] * l[1]) / 2;
        prop_assert_eq!(g.apply_raw(&[1, 0, 0, 0]), vec![1, l[0], l[1], half]);
    }

    #[test]
    fn threshold_is_sharp(
        e in (1i64..=3, 1i64..=4, -4i64..=4),
        cands in prop::collection::vec((1i64..=3, -3i64..=4, -6i64..=6), 1..6),
    ) {
        let lat = Lattice::preset("mukai_rank1(1)").unwrap();
        let v_e = lat.vector(vec![e.0, e.1, e.2]).unwrap();
        let cs: Vec<_> = cands.iter().map(|c| lat.vector(vec![c.0, c.1, c.2]).unwrap()).collect();
        let h = [q(1)];
        let cert = large_volume_threshold(&v_e, &cs, &h).unwrap();
        for (c, cc) in cs.iter().zip(&cert.candidates) {
            if let ThresholdBranch::Constraining { .. } = cc.branch {
                for n in cert.n0..=cert.n0 + 100 {
                    prop_assert_eq!(inequality_holds(&v_e, c, &h, n).unwrap(), Some(true));
                }
            }
        }
        if cert.n0 > 1 {
            let fails = cs.iter().any(|c| inequality_holds(&v_e, c, &h, cert.n0 - 1).unwrap() == Some(false));
            prop_assert!(fails);
        }
    }

    #[test]
    fn exp_class_pairs_to_minus_one_with_v0(b in -3.0..3.0f64, w in 0.1..3.0f64) {
        let lat = Lattice::preset("mukai_rank1(3)").unwrap();
        let z = exp_class(&lat, &[b], &[w]).unwrap();
        let c = z.charge(&lat.point_class().unwrap()).unwrap();
        prop_assert_eq!(c, Complex64::new(-1.0, 0.0));
    }
}
