//! Seeded random instances for the verification campaigns.
//!
//! Everything is drawn on coarse dyadic grids so that the exact arithmetic in
//! the checks stays cheap while still producing crossings, touching stripes
//! and breakpoints that coincide across curves.

use rand::seq::index::sample;
use rand::Rng;

use crate::error::Result;
use crate::pl::PiecewiseLinear;
use crate::scalar::{rat, Scalar};
use crate::stripes::{disjointify, uncross, Arrangement, Axis, Curve};

type Pl = PiecewiseLinear<Scalar>;

/// Grid used for abscissae and sample coordinates.
pub const GRID: i64 = 256;

/// Uniform grid rational in `[lo, hi]` with denominator `den`.
pub fn grid_point<R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Scalar {
    rat(rng.gen_range(lo..=hi), den)
}

/// Uniform rational in `[0, 1]` on the default grid.
pub fn unit<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    grid_point(rng, 0, GRID, GRID)
}

fn slope<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    grid_point(rng, -8, 8, 8)
}

/// Random 1-Lipschitz PL function with `1..=max_breaks` breakpoints in `[0, 1]`
/// and values starting in `[0, 1]`.
pub fn lipschitz_function<R: Rng + ?Sized>(rng: &mut R, max_breaks: usize) -> Pl {
    let k = rng.gen_range(1..=max_breaks);
    let mut idx: Vec<usize> = sample(rng, GRID as usize + 1, k).into_vec();
    idx.sort_unstable();
    let xs: Vec<Scalar> = idx.iter().map(|&i| rat(i as i64, GRID)).collect();
    let mut ys = Vec::with_capacity(k);
    ys.push(unit(rng));
    for w in xs.windows(2) {
        let prev: &Scalar = ys.last().expect("nonempty");
        let next = prev.clone() + slope(rng) * (w[1].clone() - w[0].clone());
        ys.push(next);
    }
    Pl::new(xs, ys, slope(rng), slope(rng)).expect("sorted distinct breakpoints")
}

pub fn curve_family<R: Rng + ?Sized>(rng: &mut R, axis: Axis, n: usize, max_breaks: usize) -> Vec<Curve<Scalar>> {
    (0..n)
        .map(|_| Curve::new(axis, lipschitz_function(rng, max_breaks)).expect("1-Lipschitz"))
        .collect()
}

/// Random thickness `k / 64` with `k` in `1..=8`.
pub fn thickness<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    grid_point(rng, 1, 8, 64)
}

/// Random ordered family: a random family passed through [`uncross`].
pub fn ordered_family<R: Rng + ?Sized>(rng: &mut R, n: usize, max_breaks: usize) -> Result<Vec<Curve<Scalar>>> {
    uncross(&curve_family(rng, Axis::X1, n, max_breaks))
}

/// Random arrangement with disjoint interiors, lifted so that every stripe
/// lies on or above `baseline` over the window `[0, 1]`.
pub fn disjoint_arrangement<R: Rng + ?Sized>(
    rng: &mut R,
    axis: Axis,
    n: usize,
    max_breaks: usize,
    baseline: &Scalar,
) -> Result<Arrangement<Scalar>> {
    let delta = thickness(rng);
    let curves = uncross(&curve_family(rng, axis, n, max_breaks))?;
    let curves = disjointify(&curves, &delta)?;
    let mut fs: Vec<Pl> = curves.into_iter().map(Curve::into_function).collect();
    let window = fs[0].clone().with_domain(rat(0, 1), rat(1, 1))?;
    let lowest = window.infimum().expect("bounded domain") - delta.clone() / rat(2, 1);
    let lift = baseline.clone() - lowest + grid_point(rng, 0, 4, 64);
    for f in &mut fs {
        *f = f.shift(&lift);
    }
    Arrangement::new(axis, delta, fs)
}

/// Uniform grid point inside stripe `l` of an arrangement, with graph
/// parameter in `[0, 1]`.
pub fn point_in_stripe<R: Rng + ?Sized>(rng: &mut R, arr: &Arrangement<Scalar>, l: usize) -> [Scalar; 2] {
    let t = unit(rng);
    let centre = arr.functions()[l].value(&t);
    let offset = arr.delta().clone() * grid_point(rng, -GRID / 2, GRID / 2, GRID);
    arr.axis().join(t, centre + offset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_functions_are_lipschitz() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let f = lipschitz_function(&mut rng, 12);
            assert!(f.is_lipschitz(&rat(1, 1)));
            assert!(f.breakpoints().len() <= 12);
        }
    }

    #[test]
    fn generated_arrangements_are_disjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let arr = disjoint_arrangement(&mut rng, Axis::X1, 5, 6, &rat(0, 1)).unwrap();
            assert!(arr.has_disjoint_interiors());
            let p = point_in_stripe(&mut rng, &arr, 2);
            assert!(arr.stripes()[2].contains(&p));
        }
    }
}
