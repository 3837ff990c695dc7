use proptest::prelude::*;
use slice_hardy::atomic::{minimizing_polynomial, space_dimension, Polynomial};
use slice_hardy::orlicz::luxemburg_norm;
use slice_hardy::slice::{hl_maximal, slice_norm, star_norm};
use slice_hardy::{Cube, GridFunction, GridSpec, OrliczFunction, SliceParams};

fn samples(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, min..max)
}

fn line(values: Vec<f64>) -> GridFunction {
    GridFunction::new(GridSpec::new_1d(-1.0, 1.0 / 16.0, values.len()).unwrap(), values).unwrap()
}

fn functional() -> impl Strategy<Value = OrliczFunction> {
    prop_oneof![
        (0.5f64..4.0).prop_map(|p| OrliczFunction::power(p).unwrap()),
        (0.3f64..0.95).prop_map(|p| OrliczFunction::log_damped(p).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn luxemburg_is_homogeneous(v in samples(1, 40), c in 0.01f64..100.0, phi in functional()) {
        prop_assume!(v.iter().any(|x| *x != 0.0));
        let f = line(v);
        let a = luxemburg_norm(&phi, &f.scaled(c)).unwrap();
        let b = c * luxemburg_norm(&phi, &f).unwrap();
        prop_assert!((a - b).abs() <= 1e-8 * b, "{a} vs {b}");
    }

    #[test]
    fn luxemburg_is_monotone(v in samples(1, 40), shrink in prop::collection::vec(0.0f64..1.0, 40), phi in functional()) {
        let f = line(v.clone());
        let g = line(v.iter().zip(&shrink).map(|(x, s)| x * s).collect());
        prop_assert!(luxemburg_norm(&phi, &g).unwrap() <= luxemburg_norm(&phi, &f).unwrap() * (1.0 + 1e-9));
    }

    #[test]
    fn the_modular_at_the_norm_is_one(v in samples(1, 40), phi in functional()) {
        prop_assume!(v.iter().any(|x| *x != 0.0));
        let f = line(v);
        let l = luxemburg_norm(&phi, &f).unwrap();
        let m: f64 = f.values().iter().map(|x| phi.eval(x.abs() / l)).sum::<f64>() * f.cell_measure();
        prop_assert!((m - 1.0).abs() < 1e-6, "modular {m}");
    }

    #[test]
    fn slice_norm_is_homogeneous_and_translation_invariant(v in samples(4, 48), c in 0.1f64..10.0, shift in 0usize..16, t in 0.2f64..2.0) {
        prop_assume!(v.iter().any(|x| *x != 0.0));
        let p = SliceParams::new(OrliczFunction::log_damped(0.9).unwrap(), 1.0, t).unwrap();
        let f = line(v.clone());
        let n = slice_norm(&f, &p).unwrap();
        prop_assert!((slice_norm(&f.scaled(c), &p).unwrap() - c * n).abs() <= 1e-7 * c * n);
        let moved = GridFunction::new(GridSpec::new_1d(-1.0 + shift as f64 / 16.0, 1.0 / 16.0, v.len()).unwrap(), v).unwrap();
        prop_assert!((slice_norm(&moved, &p).unwrap() - n).abs() <= 1e-9 * n);
    }

    #[test]
    fn star_norm_splits_over_unit_cubes(a in samples(16, 17), b in samples(16, 17)) {
        // cells [-1, 0) and [0, 1) lie in distinct unit cubes
        let phi = OrliczFunction::log_damped(0.9).unwrap();
        let mut both = a.clone();
        both.extend(&b);
        let left: Vec<f64> = a.iter().copied().chain(std::iter::repeat_n(0.0, 16)).collect();
        let right: Vec<f64> = std::iter::repeat_n(0.0, 16).chain(b.iter().copied()).collect();
        let s = star_norm(&line(both), &phi).unwrap();
        let parts = star_norm(&line(left), &phi).unwrap() + star_norm(&line(right), &phi).unwrap();
        prop_assert!((s - parts).abs() <= 1e-12 * s.max(1.0));
    }

    #[test]
    fn maximal_function_dominates(v in samples(2, 60)) {
        let f = line(v);
        let m = hl_maximal(&f);
        for (a, b) in m.values().iter().zip(f.values()) {
            prop_assert!(*a >= b.abs());
        }
        prop_assert!(m.sup_norm() <= f.sup_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn minimizing_polynomial_reproduces_polynomials(coeffs in prop::collection::vec(-3.0f64..3.0, 6), d in 0usize..3, c0 in -0.5f64..0.5, c1 in -0.5f64..0.5) {
        let spec = GridSpec::new_2d([-1.0, -1.0], 1.0 / 32.0, [64, 64]).unwrap();
        let q = Cube::new(&[c0, c1], 0.75).unwrap();
        let k = space_dimension(2, d);
        let p = Polynomial::new(2, d, q.center(), q.side(), coeffs[..k].to_vec()).unwrap();
        let f = p.sample(&spec);
        let fit = minimizing_polynomial(&f, &q, d).unwrap();
        for x in [[c0, c1], [c0 + 0.3, c1 - 0.2], [c0 - 0.35, c1 + 0.1]] {
            prop_assert!((fit.eval(x) - p.eval(x)).abs() < 1e-9);
        }
    }
}
