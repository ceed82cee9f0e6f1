use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stripecover::gen;
use stripecover::io;
use stripecover::scalar::{int, rat};
use stripecover::{PlFunction, Scalar};

fn function(seed: u64, breaks: usize) -> PlFunction {
    gen::lipschitz_function(&mut ChaCha8Rng::seed_from_u64(seed), breaks)
}

fn abscissa() -> impl Strategy<Value = Scalar> {
    (-600i64..=600, prop::sample::select(vec![1i64, 3, 7, 256, 512])).prop_map(|(n, d)| rat(n, d))
}

// value by linear interpolation between the two breakpoints around x,
// written independently of the library
fn interpolate(f: &PlFunction, x: &Scalar) -> Scalar {
    let (xs, ys) = (f.breakpoints(), f.values());
    let n = xs.len();
    if x <= &xs[0] {
        return ys[0].clone() + f.left_slope().clone() * (x.clone() - xs[0].clone());
    }
    if x >= &xs[n - 1] {
        return ys[n - 1].clone() + f.right_slope().clone() * (x.clone() - xs[n - 1].clone());
    }
    let i = (1..n).find(|&i| x <= &xs[i]).unwrap();
    let t = (x.clone() - xs[i - 1].clone()) / (xs[i].clone() - xs[i - 1].clone());
    ys[i - 1].clone() + t * (ys[i].clone() - ys[i - 1].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn value_matches_interpolation(seed: u64, x in abscissa()) {
        let f = function(seed, 12);
        prop_assert_eq!(f.value(&x), interpolate(&f, &x));
    }

    #[test]
    fn envelopes_are_pointwise(a: u64, b: u64, xs in prop::collection::vec(abscissa(), 1..20)) {
        let (f, g) = (function(a, 12), function(b, 12));
        let (hi, lo) = (f.max(&g).unwrap(), f.min(&g).unwrap());
        for x in &xs {
            let (u, v) = (f.value(x), g.value(x));
            prop_assert_eq!(hi.value(x), if u >= v { u.clone() } else { v.clone() });
            prop_assert_eq!(lo.value(x), if u <= v { u } else { v });
        }
    }

    #[test]
    fn envelopes_keep_the_lipschitz_bound(a: u64, b: u64) {
        let (f, g) = (function(a, 12), function(b, 12));
        let bound = std::cmp::max(f.lipschitz_constant(), g.lipschitz_constant());
        prop_assert!(f.max(&g).unwrap().is_lipschitz(&bound));
        prop_assert!(f.min(&g).unwrap().is_lipschitz(&bound));
    }

    #[test]
    fn sums_and_differences(a: u64, b: u64, xs in prop::collection::vec(abscissa(), 1..20)) {
        let (f, g) = (function(a, 8), function(b, 8));
        let (s, d) = (f.add(&g).unwrap(), f.sub(&g).unwrap());
        for x in &xs {
            prop_assert_eq!(s.value(x), f.value(x) + g.value(x));
            prop_assert_eq!(d.value(x), f.value(x) - g.value(x));
        }
    }

    #[test]
    fn composition_is_pointwise(a: u64, b: u64, xs in prop::collection::vec(abscissa(), 1..20)) {
        let (f, g) = (function(a, 8), function(b, 8));
        let h = f.compose(&g);
        for x in &xs {
            prop_assert_eq!(h.value(x), f.value(&g.value(x)));
        }
    }

    #[test]
    fn simplification_keeps_the_function(a: u64, b: u64) {
        let m = function(a, 12).max(&function(b, 12)).unwrap();
        let s = m.simplified();
        prop_assert!(s.same_function(&m));
        prop_assert!(s.breakpoints().len() <= m.breakpoints().len());
    }

    #[test]
    fn order_agrees_with_samples(a: u64, gap in 0i64..8, xs in prop::collection::vec(abscissa(), 1..30)) {
        let f = function(a, 12);
        let g = f.shift(&rat(gap, 8));
        prop_assert!(f.le_everywhere(&g));
        prop_assert!(f.below_by(&g, &rat(gap, 8)));
        prop_assert!(!f.below_by(&g, &rat(gap + 1, 8)));
        for x in &xs {
            prop_assert!(f.value(x) <= g.value(x));
        }
    }

    #[test]
    fn increasing_functions_invert(a: u64, y in abscissa()) {
        // x minus a 1/2-Lipschitz function is strictly increasing
        let f = PlFunction::identity().sub(&function(a, 8).scale(&rat(1, 2))).unwrap();
        let x = f.solve_increasing(&y).unwrap();
        prop_assert_eq!(f.value(&x), y);
    }

    #[test]
    fn json_round_trip(a: u64, lo in -4i64..0, hi in 1i64..4, bounded: bool) {
        let f = function(a, 12);
        let f = if bounded { f.with_domain(int(lo), int(hi)).unwrap() } else { f };
        prop_assert_eq!(io::pl_from_json(&io::pl_to_json(&f)).unwrap(), f);
    }
}

#[test]
fn generic_over_floats() {
    let f = function(3, 6);
    let g = f.map_scalar(|x| stripecover::Field::to_f64_lossy(x));
    for k in -10..=10 {
        let x = rat(k, 8);
        let exact = stripecover::Field::to_f64_lossy(&f.value(&x));
        assert!((g.value(&stripecover::Field::to_f64_lossy(&x)) - exact).abs() < 1e-12);
    }
}
