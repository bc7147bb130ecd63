//! Worked examples for every public operation, grouped by module.

use weakmean::catalog::{lehmer_handle, Mean};
use weakmean::domain::{InputVector, Interval, ScalarFunction, WeightVector};
use weakmean::error::Error;
use weakmean::filter::{read_pgm, write_pgm, FilterConfig, GrayImage, PgmFormat, TonalFilter, TonalKernel};
use weakmean::means::*;
use weakmean::penalty::*;
use weakmean::robust::*;
use weakmean::transforms::*;
use weakmean::verify::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn uniform(n: usize) -> WeightVector {
    WeightVector::uniform(n)
}

mod means_core {
    use super::*;

    #[test]
    fn arithmetic() {
        assert_eq!(arithmetic_mean(&[2.0, 2.0, 2.0]).unwrap(), 2.0);
        assert_eq!(arithmetic_mean(&[0.0, 1.0]).unwrap(), 0.5);
        assert_eq!(arithmetic_mean(&[1.0, 2.0, 3.0, 4.0]).unwrap(), 2.5);
        assert_eq!(arithmetic_mean(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn power() {
        assert_eq!(power_mean(&[1.0, 3.0], &uniform(2), 1.0).unwrap(), 2.0);
        assert_eq!(power_mean(&[1.0, 1.0], &uniform(2), -1.0).unwrap(), 1.0);
        assert!(close(power_mean(&[0.0, 2.0], &uniform(2), 2.0).unwrap(), 2f64.sqrt(), 1e-15));
        assert!(power_mean(&[-1.0, 2.0], &uniform(2), 0.5).is_err());
    }

    #[test]
    fn quasi_arithmetic() {
        let id = ScalarFunction::identity();
        assert_eq!(quasi_arithmetic_mean(&[1.0, 2.0, 3.0], &uniform(3), &id).unwrap(), 2.0);
        let ln = ScalarFunction::ln();
        assert!(close(quasi_arithmetic_mean(&[1.0, 4.0], &uniform(2), &ln).unwrap(), 2.0, 1e-15));
        for g in [id, ln, ScalarFunction::exp(2.0), ScalarFunction::power(3.0)] {
            assert!(close(quasi_arithmetic_mean(&[0.7; 3], &uniform(3), &g).unwrap(), 0.7, 1e-15));
        }
        let no_inverse = ScalarFunction::new("sin", f64::sin);
        assert_eq!(
            quasi_arithmetic_mean(&[0.1, 0.2], &uniform(2), &no_inverse),
            Err(Error::MissingInverse)
        );
    }

    #[test]
    fn owa_examples() {
        let w = |v: Vec<f64>| WeightVector::new(v).unwrap();
        assert_eq!(owa(&[3.0, 7.0], &w(vec![1.0, 0.0])).unwrap(), 7.0);
        assert_eq!(owa(&[3.0, 7.0], &w(vec![0.0, 1.0])).unwrap(), 3.0);
        assert_eq!(owa(&[3.0, 7.0], &w(vec![0.5, 0.5])).unwrap(), 5.0);
        assert!(matches!(owa(&[3.0], &w(vec![0.5, 0.5])), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn order_statistics() {
        let x = [5.0, 2.0, 9.0];
        assert_eq!(order_statistic(&x, 1).unwrap(), 2.0);
        assert_eq!(order_statistic(&x, 3).unwrap(), 9.0);
        assert_eq!(order_statistic(&x, 2).unwrap(), 5.0);
        assert!(order_statistic(&x, 0).is_err());
        assert!(order_statistic(&x, 4).is_err());
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[1.0, 2.0, 3.0]).unwrap(), 2.0);
        assert_eq!(median(&[1.0, 2.0, 3.0, 10.0]).unwrap(), 2.5);
        assert_eq!(median(&[0.4; 4]).unwrap(), 0.4);
        assert_eq!(median_with(&[1.0, 2.0, 3.0, 10.0], MedianConvention::Lower).unwrap(), 2.0);
        assert_eq!(median_with(&[1.0, 2.0, 3.0, 10.0], MedianConvention::Upper).unwrap(), 3.0);
    }

    #[test]
    fn bajraktarevic() {
        let one = ScalarFunction::constant(1.0);
        let id = ScalarFunction::identity();
        assert_eq!(bajraktarevic_mean(&[2.0, 4.0], &[one.clone(), one], &id).unwrap(), 3.0);
        let t = ScalarFunction::identity();
        assert!(close(bajraktarevic_mean(&[1.0, 2.0], &[t.clone(), t.clone()], &id).unwrap(), 5.0 / 3.0, 1e-15));
        assert!(close(bajraktarevic_mean(&[0.3, 0.3], &[t.clone(), t.clone()], &ScalarFunction::ln()).unwrap(), 0.3, 1e-15));
        assert_eq!(
            bajraktarevic_mean(&[0.0, 0.0], &[t.clone(), t], &id),
            Err(Error::ZeroTotalWeight)
        );
    }

    #[test]
    fn mixture() {
        assert_eq!(mixture_mean(&[1.0, 3.0], &ScalarFunction::constant(4.0)).unwrap(), 2.0);
        assert!(close(mixture_mean(&[1.0, 2.0], &ScalarFunction::identity()).unwrap(), 5.0 / 3.0, 1e-15));
        let w = ScalarFunction::exp(1.0);
        let w7 = ScalarFunction::new("7e^t", |t: f64| 7.0 * t.exp());
        let x = [0.2, 0.9];
        assert!(close(mixture_mean(&x, &w).unwrap(), mixture_mean(&x, &w7).unwrap(), 1e-15));
        assert_eq!(mixture_mean(&[0.0, 0.0], &ScalarFunction::identity()), Err(Error::ZeroTotalWeight));
    }

    #[test]
    fn generalized_mixture() {
        let w = ScalarFunction::power(2.0);
        let x = [0.1, 0.5, 0.9];
        assert!(close(
            generalized_mixture_mean(&x, &[w.clone(), w.clone(), w.clone()]).unwrap(),
            mixture_mean(&x, &w).unwrap(),
            1e-15
        ));
        let sel = [ScalarFunction::constant(1.0), ScalarFunction::constant(0.0)];
        assert_eq!(generalized_mixture_mean(&[4.0, 9.0], &sel).unwrap(), 4.0);
        assert!(close(generalized_mixture_mean(&[1.0, 2.0], &[w.clone(), w]).unwrap(), 1.8, 1e-15));
    }

    #[test]
    fn gini() {
        assert_eq!(gini_mean(&[2.0, 4.0], &uniform(2), 1.0, 0.0).unwrap(), 3.0);
        assert!(close(gini_mean(&[1.0, 2.0], &uniform(2), 1.0, 1.0).unwrap(), 5.0 / 3.0, 1e-15));
        assert!(close(gini_mean(&[0.6, 0.6], &uniform(2), 2.0, -1.5).unwrap(), 0.6, 1e-15));
        assert_eq!(gini_mean(&[0.0, 0.0], &uniform(2), 1.0, -2.0).unwrap(), 0.0);
    }

    #[test]
    fn lehmer() {
        let l = |q: f64, x: &[f64]| lehmer_mean(x, LehmerParams::new(q)).unwrap();
        assert!(close(l(1.0, &[1.0, 0.5]), 5.0 / 6.0, 1e-15));
        assert_eq!(l(2.0, &[1.0, 0.0]), 1.0);
        assert_eq!(l(-2.0, &[0.7, 0.0]), 0.0);
        assert_eq!(l(0.0, &[1.0, 2.0, 3.0]), 2.0);
        assert!(lehmer_mean(&[1.0, -0.5], LehmerParams::new(1.0)).is_err());
    }

    #[test]
    fn lehmer_bound() {
        assert_eq!(lehmer_max_args(1.0).unwrap(), 2.0);
        assert!(close(lehmer_max_args(3.0).unwrap(), 5.0, 1e-12));
        let b = lehmer_max_args(100.0).unwrap();
        assert!(b < 1.0 + std::f64::consts::E.powi(2) && b > 8.0);
        assert!(matches!(lehmer_max_args(0.5), Err(Error::LehmerBoundExcluded { .. })));
    }
}

mod penalty_engine {
    use super::*;

    fn cfg() -> MinimizerConfig {
        MinimizerConfig::default()
    }

    #[test]
    fn minimizers() {
        let y = minimize_penalty(&PenaltySpec::least_squares(), &[1.0, 2.0, 3.0], &cfg()).unwrap();
        assert!(close(y, 2.0, 1e-9));
        let y = minimize_penalty(&PenaltySpec::absolute_deviation(), &[0.0, 0.0, 10.0], &cfg()).unwrap();
        assert!(close(y, 0.0, 1e-9));
        let y = minimize_penalty(&mixture_penalty(ScalarFunction::identity()), &[1.0, 2.0], &cfg()).unwrap();
        assert!(close(y, 5.0 / 3.0, 1e-9));
    }

    #[test]
    fn mixture_penalties() {
        let y = minimize_penalty(&mixture_penalty(ScalarFunction::constant(1.0)), &[1.0, 3.0], &cfg()).unwrap();
        assert!(close(y, 2.0, 1e-9));
        let w = ScalarFunction::identity();
        let y = minimize_penalty(&mixture_penalty(w.clone()), &[1.0, 2.0], &cfg()).unwrap();
        assert!(close(y, mixture_mean(&[1.0, 2.0], &w).unwrap(), 1e-9));
        let y = minimize_penalty(&mixture_penalty(ScalarFunction::power(2.0)), &[1.0, 2.0], &cfg()).unwrap();
        assert!(close(y, 1.8, 1e-9));
    }

    #[test]
    fn shifted_values() {
        let x = InputVector::new(vec![1.0, 2.0], Interval::new(0.0, 10.0).unwrap()).unwrap();
        let v = shifted_penalty_value(&PenaltySpec::least_squares(), &x, 5.0, 1.5).unwrap();
        assert!(close(v, 0.5, 1e-15));
        let x = InputVector::new(vec![1.0, 1.0, 2.0], Interval::new(0.0, 10.0).unwrap()).unwrap();
        assert_eq!(shifted_penalty_value(&PenaltySpec::mode(), &x, 3.0, 1.0).unwrap(), 1.0);
        let unit = InputVector::new(vec![0.5, 0.9], Interval::unit()).unwrap();
        assert!(shifted_penalty_value(&PenaltySpec::least_squares(), &unit, 0.5, 0.7).is_err());
    }

    #[test]
    fn leftmost_mode() {
        let y = minimize_penalty(&PenaltySpec::mode(), &[1.0, 1.0, 2.0, 2.0, 3.0, 4.0, 5.0], &cfg()).unwrap();
        assert_eq!(y, 1.0);
    }

    #[test]
    fn config_errors() {
        assert!(cfg().with_grid_points(2).validate().is_err());
        let empty = minimize_penalty(&PenaltySpec::least_squares(), &[], &cfg());
        assert!(empty.is_err());
        let nan = PenaltySpec::from_whole("nan", PenaltyClass::QuasiConvex, 0.0, |_, _| f64::NAN);
        assert!(matches!(minimize_penalty(&nan, &[0.0, 1.0], &cfg()), Err(Error::NonFinitePenalty { .. })));
    }
}

mod robust_location {
    use super::*;

    #[test]
    fn modes() {
        assert_eq!(mode(&[1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 3.0]).unwrap(), 3.0);
        assert_eq!(mode(&[2.0, 2.0, 2.0, 2.0, 3.0, 3.0, 3.0]).unwrap(), 2.0);
        assert_eq!(mode(&[1.0, 1.0, 2.0, 2.0, 3.0, 4.0, 5.0]).unwrap(), 1.0);
    }

    #[test]
    fn windows() {
        let w = candidate_windows(&[0.0, 1.0, 2.0, 10.0, 11.0]).unwrap();
        let lengths: Vec<f64> = w.iter().map(|w| w.length).collect();
        assert_eq!(lengths, [2.0, 9.0, 9.0]);
        assert_eq!(shortest_window(&[0.0, 1.0, 2.0, 10.0, 11.0]).unwrap().1.k, 1);
        let w = candidate_windows(&[0.3; 3]).unwrap();
        assert!(w.iter().all(|w| w.length == 0.0));
        assert_eq!(shortest_window(&[0.3; 3]).unwrap().1.k, 1);
        let x = [4.0, 0.5, 9.0, 2.0, 2.5, 7.0];
        let x7: Vec<f64> = x.iter().map(|t| t + 7.0).collect();
        assert_eq!(shortest_window(&x).unwrap().1.k, shortest_window(&x7).unwrap().1.k);
        assert!(candidate_windows(&[1.0]).is_err());
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn shorth_examples() {
        let a = shorth(&[1.0, 2.8284271, 4.0, 5.9160798, 6.9202601]).unwrap();
        assert!(close(a, 5.612, 1e-3), "{a}");
        let b = shorth(&[1.4142136, 3.0, 4.1231056, 6.0, 6.9928534]).unwrap();
        assert!(close(b, 2.846, 1e-3), "{b}");
        assert_eq!(shorth(&[0.0, 1.0, 2.0, 10.0, 11.0]).unwrap(), 1.0);
    }

    #[test]
    fn lms_and_lts() {
        let x = [0.0, 1.0, 2.0, 10.0, 11.0];
        assert_eq!(lms(&x).unwrap(), 1.0);
        assert_eq!(lts(&x).unwrap(), 1.0);
        assert_eq!(lms(&[0.2; 4]).unwrap(), 0.2);
        assert_eq!(lts(&[0.2; 4]).unwrap(), 0.2);
        let y = [0.3, 5.0, 1.2, 1.1, 9.0, 0.7];
        let y4: Vec<f64> = y.iter().map(|t| t + 4.0).collect();
        assert!(close(lms(&y4).unwrap(), lms(&y).unwrap() + 4.0, 1e-12));
        assert!(close(lts(&y4).unwrap(), lts(&y).unwrap() + 4.0, 1e-12));
    }

    #[test]
    fn owa_penalties() {
        let w = |v: Vec<f64>| OwaWeights::new(v).unwrap();
        let y = owa_penalty_estimator(&[1.0, 2.0, 6.0], &w(vec![1.0, 1.0, 1.0])).unwrap();
        assert!(close(y, 3.0, 1e-9));
        let y = owa_penalty_estimator(&[0.0, 1.0, 10.0], &w(vec![0.0, 0.0, 1.0])).unwrap();
        assert!(close(y, 5.0, 1e-9));
        let x = [0.0, 1.0, 2.0, 10.0, 11.0];
        let y = owa_penalty_estimator(&x, &w(vec![1.0, 1.0, 1.0, 0.0, 0.0])).unwrap();
        assert!(close(y, lts(&x).unwrap(), 1e-9));
        assert!(OwaWeights::new(vec![0.0, 0.0]).is_err());
        assert!(OwaWeights::new(vec![1.0, -1.0]).is_err());
    }

    #[test]
    fn density() {
        let k = DensityKernel::cauchy();
        assert!(close(density_mean(&[0.4; 3], &k).unwrap(), 0.4, 1e-15));
        assert_eq!(density_mean(&[0.0, 1.0], &k).unwrap(), 0.5);
        assert!(close(density_mean(&[0.0, 0.0, 1.0], &k).unwrap(), 2.0 / 7.0, 1e-12));
    }
}

mod property_verifier {
    use super::*;

    fn cfg() -> SamplerConfig {
        SamplerConfig::default().with_samples(30_000).with_seed(2)
    }

    #[test]
    fn weak_monotonicity() {
        assert!(!check_weak_monotonicity(&Mean::Arithmetic.handle(3), &cfg()).unwrap().is_violated());

        // On [0, 2]³ the witness family around (1, 0, 0) with a = 0.1 fits.
        let l1 = Mean::Lehmer { q: 1.0 }.handle_on(3, Interval::new(0.0, 2.0).unwrap());
        let r = check_weak_monotonicity(&l1, &cfg()).unwrap();
        assert!(r.is_violated() && r.replay(&l1).unwrap());
        let direct = [l1.eval(&[1.0, 0.0, 0.0]).unwrap(), l1.eval(&[1.1, 0.1, 0.1]).unwrap()];
        assert_eq!(direct[0], 1.0);
        assert!(close(direct[1], 0.946153846, 1e-6), "{}", direct[1]);

        let sw = internal_switch_example();
        let r = check_weak_monotonicity(&sw, &cfg()).unwrap();
        assert!(r.is_violated());
        assert_eq!(sw.eval(&[0.75, 0.0]).unwrap(), 0.75);
        assert_eq!(sw.eval(&[1.0, 0.25]).unwrap(), 0.25);
    }

    #[test]
    fn monotonicity() {
        assert!(!check_monotonicity(&Mean::Median.handle(5), &cfg()).unwrap().is_violated());
        let r = check_monotonicity(&Mean::Mode { epsilon: None }.handle(7), &cfg()).unwrap();
        assert!(r.is_violated());
        // The hand-made pair: (1,1,2,2,3,3,3) ≤ (2,2,2,2,3,3,3) but the mode drops.
        let m = Mean::Mode { epsilon: None };
        assert!(m.eval(&[2.0, 2.0, 2.0, 2.0, 3.0, 3.0, 3.0]).unwrap() < m.eval(&[1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 3.0]).unwrap());
        let l = lehmer_handle(1.5, 2);
        assert!(l.eval(&[1.0, 0.5]).unwrap() < l.eval(&[1.0, 0.0]).unwrap());
        assert!(check_monotonicity(&l, &cfg()).unwrap().is_violated());
    }

    #[test]
    fn shift_invariance() {
        assert!(!check_shift_invariance(&Mean::Shorth.handle(5), &cfg()).unwrap().is_violated());
        assert!(!check_shift_invariance(&Mean::Arithmetic.handle(4), &cfg()).unwrap().is_violated());
        let l1 = Mean::Lehmer { q: 1.0 };
        assert!(!close(l1.eval(&[2.0, 3.0]).unwrap(), l1.eval(&[1.0, 2.0]).unwrap() + 1.0, 1e-3));
        assert!(check_shift_invariance(&lehmer_handle(1.0, 2), &cfg()).unwrap().is_violated());
    }

    #[test]
    fn homogeneity() {
        assert!(!check_homogeneity(&lehmer_handle(2.0, 3), &cfg()).unwrap().is_violated());
        assert!(!check_homogeneity(&Mean::Median.handle(4), &cfg()).unwrap().is_violated());
        let wobble = AggregatorHandle::new("wobble", Arity::Variadic, Interval::unit(), |x| {
            let m = arithmetic_mean(x)?;
            Ok(m + 0.1 * m.sin())
        });
        assert!(check_homogeneity(&wobble, &cfg()).unwrap().is_violated());
    }

    #[test]
    fn idempotency_averaging_internality() {
        for m in [Mean::Arithmetic, Mean::Median, Mean::Lehmer { q: 2.0 }, Mean::Shorth, Mean::Density] {
            let h = m.handle(4);
            assert!(!check_idempotency(&h, &cfg()).unwrap().is_violated(), "{}", h.name());
            assert!(!check_averaging(&h, &cfg()).unwrap().is_violated(), "{}", h.name());
        }
        assert!(!check_internality(&Mean::Median.handle(5), &cfg()).unwrap().is_violated());
        let r = check_internality(&Mean::Arithmetic.handle(2), &cfg()).unwrap();
        assert!(r.is_violated());
        assert_eq!(Mean::Arithmetic.eval(&[0.0, 1.0]).unwrap(), 0.5);
    }

    #[test]
    fn directional_derivative_examples() {
        let x = [0.3, 0.1, 0.6, 0.2];
        let d = directional_derivative(&Mean::Arithmetic.handle(4), &x, 1e-6).unwrap();
        assert!(close(d, 0.5, 1e-6));
        let l1 = Mean::Lehmer { q: 1.0 }.handle_on(3, Interval::new(0.0, 2.0).unwrap());
        assert!(directional_derivative(&l1, &[1.0, 0.0, 0.0], 1e-6).unwrap() < 0.0);
        let d = directional_derivative(&Mean::Lms.handle(4), &x, 1e-6).unwrap();
        assert!(close(d, 0.5, 1e-6));
        assert!(directional_derivative(&Mean::Arithmetic.handle(4), &[0.99; 4], 0.1).is_err());
    }

    #[test]
    fn mixture_condition_examples() {
        let unit = Interval::unit();
        assert!(!check_mixture_sufficient_condition(&ScalarFunction::constant(1.0), unit, 201).unwrap().is_violated());
        let r = check_mixture_sufficient_condition(&ScalarFunction::identity(), unit, 201).unwrap();
        assert!(r.is_violated() && r.witness.unwrap().x[0] < 0.5);
        let r = check_mixture_sufficient_condition(&ScalarFunction::exp(5.0), unit, 201).unwrap();
        assert!(r.is_violated() && r.witness.unwrap().x[0] == 0.0);
    }

    #[test]
    fn bound_table_examples() {
        let t = lehmer_bound_table(&[1.0, 3.0, 0.5], 5, &cfg()).unwrap();
        let c = t.cell(1.0, 2).unwrap();
        assert_eq!(c.theory, Theory::WithinBound);
        assert!(!c.empirical.is_violated());
        let c = t.cell(1.0, 3).unwrap();
        assert_eq!(c.theory, Theory::BeyondBound);
        assert!(c.empirical.is_violated());
        let c = t.cell(3.0, 5).unwrap();
        assert_eq!(c.theory, Theory::WithinBound);
        assert!(!c.empirical.is_violated());
        assert!(t.rows.iter().find(|r| r.q == 0.5).unwrap().bound.is_none());
    }
}

mod transforms_examples {
    use super::*;

    #[test]
    fn phi_transforms() {
        let m = Mean::Arithmetic.handle(3);
        let f = phi_transform(&m, &PhiTransform::affine(2.0, 3.0).unwrap()).unwrap();
        let x = [-1.2, -1.1, -1.45];
        assert!(close(f.eval(&x).unwrap(), arithmetic_mean(&x).unwrap(), 1e-12));
        assert!(f.declared().weakly_monotone);

        let id = phi_transform(&m, &PhiTransform::new(ScalarFunction::identity(), Interval::unit()).unwrap()).unwrap();
        assert_eq!(id.eval(&[0.1, 0.2, 0.6]).unwrap(), m.eval(&[0.1, 0.2, 0.6]).unwrap());

        let shorth = Mean::Shorth.handle_on(5, Interval::new(0.0, 8.0).unwrap());
        let sq = PhiTransform::new(ScalarFunction::sqrt(), Interval::new(0.0, 64.0).unwrap()).unwrap();
        let f = phi_transform(&shorth, &sq).unwrap();
        let x = [1.0, 8.0, 16.0, 35.0, 47.9];
        let x1: Vec<f64> = x.iter().map(|t| t + 1.0).collect();
        assert!(close(f.eval(&x).unwrap(), 31.49, 0.05));
        assert!(close(f.eval(&x1).unwrap(), 8.10, 0.05));

        let no_inv = ScalarFunction::new("t^2+sin", |t: f64| t * t + t.sin());
        assert!(PhiTransform::new(no_inv, Interval::unit()).is_err());
    }

    #[test]
    fn duals() {
        let x = [0.15, 0.8, 0.35];
        let m = Mean::Arithmetic.handle(3);
        assert!(close(dual(&m).unwrap().eval(&x).unwrap(), m.eval(&x).unwrap(), 1e-15));
        assert!(close(dual(&Mean::Maximum.handle(3)).unwrap().eval(&x).unwrap(), 0.15, 1e-15));
        let w = ScalarFunction::power(2.0);
        let dm = dual(&Mean::Mixture { w: w.clone() }.handle(3)).unwrap();
        let direct = Mean::Mixture { w: w.reflected() }.eval(&x).unwrap();
        assert!(close(dm.eval(&x).unwrap(), direct, 1e-12));
    }

    #[test]
    fn compositions() {
        let f = compose(&Mean::Arithmetic.handle(2), &Mean::Shorth.handle(5), &Mean::Lms.handle(5)).unwrap();
        assert!(f.declared().weakly_monotone);
        assert!(!check_weak_monotonicity(&f, &SamplerConfig::default().with_samples(20_000)).unwrap().is_violated());

        let med = Mean::Median.handle(3);
        let g = compose(&lehmer_handle(1.0, 2), &med, &med).unwrap();
        assert!(g.declared().weakly_monotone);

        let a = Mean::Arithmetic.handle(2);
        let b = Mean::Arithmetic.handle(4);
        let h = compose(&a, &b, &b).unwrap();
        let x = [0.1, 0.4, 0.9, 0.2];
        assert!(close(h.eval(&x).unwrap(), arithmetic_mean(&x).unwrap(), 1e-15));
        assert!(matches!(compose(&b, &b, &b), Err(Error::ArityMismatch(_))));
    }

    #[test]
    fn switch_function() {
        let f = internal_switch_example();
        assert_eq!(f.eval(&[0.25, 0.0]).unwrap(), 0.25);
        assert_eq!(f.eval(&[0.75, 0.0]).unwrap(), 0.75);
        assert_eq!(f.eval(&[1.0, 0.25]).unwrap(), 0.25);
    }
}

mod tonal_filter {
    use super::*;

    #[test]
    fn pixels() {
        let f = TonalFilter::new(FilterConfig { radius: 1, ..Default::default() }).unwrap();
        assert_eq!(f.filter_pixel(&[0.6; 9], 0.6, 255).unwrap(), 0.6);

        let blur = TonalFilter::new(FilterConfig {
            radius: 1,
            spatial_sigma: f64::INFINITY,
            tonal_kernel: TonalKernel::Cauchy(f64::INFINITY),
            ..Default::default()
        })
        .unwrap();
        let w = [0.1, 0.5, 0.2, 0.9, 0.3, 0.3, 0.0, 1.0, 0.4];
        assert!(close(blur.filter_pixel(&w, 0.3, 255).unwrap(), arithmetic_mean(&w).unwrap(), 1e-15));

        // Three dark pixels and one bright one (the rest of the window dark too).
        let run = |sigma| {
            let f = TonalFilter::new(FilterConfig {
                radius: 1,
                spatial_sigma: f64::INFINITY,
                tonal_kernel: TonalKernel::Gaussian(sigma),
                ..Default::default()
            })
            .unwrap();
            let mut w = [0.0; 9];
            w[5] = 1.0;
            f.filter_pixel(&w, 0.0, 255).unwrap()
        };
        let (loose, tight) = (run(0.3), run(0.05));
        assert!(loose < 0.25 && tight < loose && tight < 1e-50);
    }

    #[test]
    fn images() {
        let f = TonalFilter::new(FilterConfig::default()).unwrap();
        let flat = GrayImage::constant(6, 5, 0.25, 255).unwrap();
        assert_eq!(f.filter_image(&flat).unwrap(), flat);

        let img = GrayImage::from_fn(10, 8, 255, |c, r| ((c * 5 + r * 11) % 50 + 40) as f64 / 255.0).unwrap();
        let c = 0.2;
        let a = f.filter_image(&img).unwrap();
        let b = f.filter_image(&img.shifted(c).unwrap()).unwrap();
        assert!(a.pixels().iter().zip(b.pixels()).all(|(x, y)| close(y - x, c, 1e-9)));

        let step = GrayImage::from_fn(32, 32, 255, |c, _| if c < 16 { 0.2 } else { 0.8 }).unwrap();
        let out = f.filter_image(&step).unwrap();
        let worst = step.pixels().iter().zip(out.pixels()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(worst < 0.01);
    }

    #[test]
    fn pgm() {
        assert_eq!(read_pgm(b"P2 1 1 255 128").unwrap().pixels(), &[128.0 / 255.0]);
        let bytes = b"P5\n3 2\n200\n\x00\x01\x02\x64\xc7\xc8".to_vec();
        assert_eq!(write_pgm(&read_pgm(&bytes).unwrap(), PgmFormat::P5), bytes);
        assert!(matches!(read_pgm(b"P5\n3 2\n200\n\x00"), Err(Error::Pgm(_))));
    }
}
