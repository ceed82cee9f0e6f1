//! Small hand-made configurations used by the examples, tests and the bundled
//! corpus.

use crate::error::Result;
use crate::pl::PiecewiseLinear;
use crate::scalar::{dyadic, int, rat, Scalar};
use crate::stripes::{Arrangement, Axis};

type Pl = PiecewiseLinear<Scalar>;

/// `t -> 1 - |t|`.
pub fn tent() -> Pl {
    Pl::polyline(&[(int(-1), int(0)), (int(0), int(1)), (int(1), int(0))], int(1), int(-1))
        .expect("valid tent")
}

/// A horizontal curve and a tent crossing it twice over `[1, 5]`.
pub fn uncross_pair() -> (Pl, Pl) {
    let level = Pl::constant(rat(3, 2));
    let peak = Pl::polyline_extended(&[(int(1), rat(1, 2)), (int(3), rat(5, 2)), (int(5), rat(3, 2))])
        .expect("valid peak");
    (level, peak)
}

/// Two ordered curves whose stripes of thickness 1 overlap.
pub fn disjointify_pair() -> (Pl, Pl) {
    let low = Pl::polyline_extended(&[(int(1), int(1)), (int(3), int(2)), (int(5), int(1))])
        .expect("valid low curve");
    let high = Pl::polyline_extended(&[(int(1), int(2)), (int(3), int(2)), (int(5), int(3))])
        .expect("valid high curve");
    (low, high)
}

/// The disjointified pair at thickness 1.
pub fn disjoint_pair_arrangement() -> Result<Arrangement<Scalar>> {
    let (low, high) = disjointify_pair();
    let raised = high.max(&low.shift(&int(1)))?.simplified();
    Arrangement::new(Axis::X1, int(1), vec![low, raised])
}

/// Arrangement `j` of the approximation sequence: four disjoint stripes of
/// thickness `2^-j / 4` hugging wiggly 1-Lipschitz curves inside the unit
/// square, so that `N * delta = 2^-j`.
pub fn approximation_arrangement(j: u32) -> Result<Arrangement<Scalar>> {
    let delta = dyadic(j + 2);
    let zigzag = |phase: i64| {
        Pl::polyline_extended(&[
            (int(0), rat(phase, 8)),
            (rat(1, 4), rat(phase + 1, 8)),
            (rat(1, 2), rat(phase, 8)),
            (rat(3, 4), rat(phase + 1, 8)),
            (int(1), rat(phase, 8)),
        ])
        .expect("valid zigzag")
    };
    let curves = (0..4)
        .map(|k| zigzag(1 + 2 * k))
        .collect::<Vec<_>>();
    Arrangement::new(Axis::X1, delta, curves)
}
