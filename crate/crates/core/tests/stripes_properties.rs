use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stripecover::gen;
use stripecover::scalar::rat;
use stripecover::stripes::{covers, disjointify, transversal_intersection, uncross};
use stripecover::{Arrangement, Axis, Curve, PlFunction, Scalar};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn grid() -> Vec<Scalar> {
    (-64..=320).map(|k| rat(k, 256)).collect()
}

fn values_at(curves: &[Curve], x: &Scalar) -> Vec<Scalar> {
    curves.iter().map(|c| c.function().value(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn uncross_sorts_the_values_at_every_abscissa(seed: u64, n in 1usize..6) {
        let family = gen::curve_family(&mut rng(seed), Axis::X1, n, 8);
        let sorted = uncross(&family).unwrap();
        prop_assert_eq!(sorted.len(), n);
        for x in grid().iter().step_by(7) {
            let mut expected = values_at(&family, x);
            expected.sort();
            prop_assert_eq!(values_at(&sorted, x), expected);
        }
    }

    #[test]
    fn uncross_fixes_ordered_families(seed: u64, n in 1usize..6) {
        let ordered = gen::ordered_family(&mut rng(seed), n, 8).unwrap();
        let again = uncross(&ordered).unwrap();
        for (a, b) in ordered.iter().zip(&again) {
            prop_assert!(a.function().same_function(b.function()));
        }
    }

    #[test]
    fn uncross_keeps_curves_lipschitz(seed: u64, n in 1usize..6) {
        let sorted = uncross(&gen::curve_family(&mut rng(seed), Axis::X2, n, 8)).unwrap();
        for c in &sorted {
            prop_assert!(c.function().is_lipschitz(&rat(1, 1)));
            prop_assert_eq!(c.axis(), Axis::X2);
        }
    }

    #[test]
    fn disjointify_separates_and_covers(seed: u64, n in 1usize..6) {
        let mut r = rng(seed);
        let delta = gen::thickness(&mut r);
        let ordered = gen::ordered_family(&mut r, n, 8).unwrap();
        let out = disjointify(&ordered, &delta).unwrap();
        for w in out.windows(2) {
            prop_assert!(w[0].function().below_by(w[1].function(), &delta));
        }
        for (a, b) in ordered.iter().zip(&out) {
            prop_assert!(a.function().le_everywhere(b.function()));
        }
        let before = Arrangement::from_curves(ordered, delta.clone()).unwrap();
        let after = Arrangement::from_curves(out, delta).unwrap();
        prop_assert!(after.has_disjoint_interiors());
        let pts: Vec<[Scalar; 2]> = (0..200)
            .map(|i| gen::point_in_stripe(&mut r, &before, i % n))
            .collect();
        prop_assert!(covers(&after.stripes(), &pts).covered);
    }

    #[test]
    fn transversal_crossings_match_dense_sampling(seed: u64, n in 1usize..5) {
        let mut r = rng(seed);
        let arr = gen::disjoint_arrangement(&mut r, Axis::X1, n, 6, &rat(0, 1)).unwrap();
        let g = gen::lipschitz_function(&mut r, 6).scale(&rat(1, 2));
        let lip = g.lipschitz_constant();
        let curve = Curve::new(Axis::X2, g.clone()).unwrap();
        let report = transversal_intersection(&arr, &curve).unwrap();
        let half = arr.delta().clone() / rat(2, 1);
        let width = arr.delta().clone() / (rat(1, 1) - lip.clone());
        prop_assert_eq!(report.crossings.len(), n);
        for c in &report.crossings {
            let f = &arr.functions()[c.stripe];
            prop_assert!(c.hi.clone() - c.lo.clone() <= width);
            // the endpoints sit on the two boundary lines
            prop_assert_eq!(c.lo.clone() - f.value(&g.value(&c.lo)), -half.clone());
            prop_assert_eq!(c.hi.clone() - f.value(&g.value(&c.hi)), half.clone());
            for s in (-256..=768).map(|k| rat(k, 128)) {
                let offset = s.clone() - f.value(&g.value(&s));
                let inside = -half.clone() <= offset && offset <= half;
                prop_assert_eq!(inside, c.lo <= s && s <= c.hi);
            }
        }
        prop_assert!(report.parameter_length <= width * rat(n as i64, 1));
        prop_assert!(report.arclength <= report.bound * (1.0 + 1e-12));
    }

    #[test]
    fn transversal_length_grows_with_thickness(seed: u64, n in 1usize..5, k in 1i64..8) {
        let mut r = rng(seed);
        let fs: Vec<PlFunction> = uncross(&gen::curve_family(&mut r, Axis::X1, n, 6))
            .unwrap()
            .into_iter()
            .map(Curve::into_function)
            .collect();
        let g = gen::lipschitz_function(&mut r, 6).scale(&rat(3, 4));
        let curve = Curve::new(Axis::X2, g).unwrap();
        let thin = Arrangement::new(Axis::X1, rat(k, 64), fs.clone()).unwrap();
        let thick = Arrangement::new(Axis::X1, rat(k + 1, 64), fs).unwrap();
        let a = transversal_intersection(&thin, &curve).unwrap();
        let b = transversal_intersection(&thick, &curve).unwrap();
        prop_assert!(a.parameter_length <= b.parameter_length);
    }
}
