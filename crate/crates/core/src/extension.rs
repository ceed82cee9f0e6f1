//! Lipschitz extensions of finitely many samples, and sampled estimates of
//! the upper and lower pointwise Lipschitz constants.
//!
//! Samples carry exact rational coordinates. On the line all distances are
//! rational, so the extension is computed exactly; in the plane and in space
//! distances are square roots and the extension is evaluated in `f64`. The
//! consistency check `L >= |f(a) - f(b)| / d(a, b)` is exact in every
//! dimension because it is done on squares.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{max_of, min_of, Scalar};

/// Finite set of distinct points in `R^n` (`n` in 1..=3) with values.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    dim: usize,
    points: Vec<Vec<Scalar>>,
    values: Vec<Scalar>,
}

impl SampleSet {
    pub fn new(dim: usize, points: Vec<Vec<Scalar>>, values: Vec<Scalar>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::invalid("dim", format!("dimension {dim} not in 1..=3")));
        }
        if points.is_empty() {
            return Err(Error::invalid("points", "at least one sample is required"));
        }
        if points.len() != values.len() {
            return Err(Error::invalid(
                "values",
                format!("{} values for {} points", values.len(), points.len()),
            ));
        }
        if let Some(i) = points.iter().position(|p| p.len() != dim) {
            return Err(Error::invalid(
                "points",
                format!("point {i} does not have {dim} coordinates"),
            ));
        }
        for i in 0..points.len() {
            for j in 0..i {
                if points[i] == points[j] {
                    return Err(Error::invalid(
                        "points",
                        format!("points {j} and {i} coincide"),
                    ));
                }
            }
        }
        Ok(Self {
            dim,
            points,
            values,
        })
    }

    /// Samples on the real line.
    pub fn on_line(samples: &[(Scalar, Scalar)]) -> Result<Self> {
        let (points, values) = samples.iter().map(|(x, v)| (vec![x.clone()], v.clone())).unzip();
        Self::new(1, points, values)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<Scalar>] {
        &self.points
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `max |f(a)|`.
    pub fn sup_norm(&self) -> Scalar {
        self.values.iter().map(|v| v.abs()).fold(Scalar::zero(), max_of)
    }

    /// Index of a sample attaining the sup norm.
    pub fn extremal(&self) -> usize {
        let m = self.sup_norm();
        self.values.iter().position(|v| v.abs() == m).unwrap_or(0)
    }

    /// Exact Lipschitz constant over the samples, available on the line.
    pub fn lipschitz_exact(&self) -> Option<Scalar> {
        if self.dim != 1 {
            return None;
        }
        let mut best = Scalar::zero();
        for i in 0..self.len() {
            for j in 0..i {
                let d = (self.points[i][0].clone() - self.points[j][0].clone()).abs();
                let q = (self.values[i].clone() - self.values[j].clone()).abs() / d;
                best = max_of(best, q);
            }
        }
        Some(best)
    }

    /// Lipschitz constant over the samples: `max |f(a) - f(b)| / |a - b|`, 0
    /// for a single sample.
    pub fn lipschitz(&self) -> f64 {
        if let Some(l) = self.lipschitz_exact() {
            return l.to_f64().unwrap_or(f64::INFINITY);
        }
        let mut best = 0f64;
        for i in 0..self.len() {
            for j in 0..i {
                let d = squared_distance(&self.points[i], &self.points[j]).to_f64().unwrap_or(0.0).sqrt();
                let dv = (self.values[i].clone() - self.values[j].clone()).abs().to_f64().unwrap_or(0.0);
                best = best.max(dv / d);
            }
        }
        best
    }

    /// A rational constant the samples admit: the exact one on the line,
    /// otherwise the float estimate nudged upward until the exact check
    /// accepts it.
    pub fn admissible_constant(&self) -> Scalar {
        if let Some(l) = self.lipschitz_exact() {
            return l;
        }
        let mut lip = crate::scalar::from_f64(self.lipschitz()).unwrap_or_else(Scalar::zero);
        while !self.admits_constant(&lip) {
            lip = lip * crate::scalar::rat(1_000_001, 1_000_000) + crate::scalar::rat(1, 1_000_000_000);
        }
        lip
    }

    /// Exact test of `lip >= |f(a) - f(b)| / |a - b|` for every pair.
    pub fn admits_constant(&self, lip: &Scalar) -> bool {
        if lip.is_negative() {
            return false;
        }
        let l2 = lip.clone() * lip.clone();
        (0..self.len()).all(|i| {
            (0..i).all(|j| {
                let dv = self.values[i].clone() - self.values[j].clone();
                dv.clone() * dv <= l2.clone() * squared_distance(&self.points[i], &self.points[j])
            })
        })
    }
}

pub fn squared_distance(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x.clone() - y.clone();
            d.clone() * d
        })
        .fold(Scalar::zero(), |acc, v| acc + v)
}

fn distance_f64(a: &[f64], b: &[Scalar]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y.to_f64().unwrap_or(0.0);
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// McShane extension `F(x) = min_a f(a) + L d(x, a)`, optionally clamped to
/// `[-M, M]` with `M` the sup norm of the samples.
#[derive(Debug, Clone)]
pub struct McShane {
    samples: SampleSet,
    lip: Scalar,
    bound: Option<Scalar>,
}

impl McShane {
    /// Fails unless `lip` dominates the Lipschitz constant of the samples.
    pub fn new(samples: SampleSet, lip: Scalar) -> Result<Self> {
        if !samples.admits_constant(&lip) {
            return Err(Error::Consistency(format!(
                "constant {lip} is below the sample Lipschitz constant {:.6}",
                samples.lipschitz()
            )));
        }
        Ok(Self {
            samples,
            lip,
            bound: None,
        })
    }

    /// Bounded extension using the samples' own Lipschitz constant: it agrees
    /// with the samples, keeps their sup norm and their Lipschitz constant.
    pub fn bounded(samples: SampleSet) -> Self {
        let lip = samples.admissible_constant();
        let bound = Some(samples.sup_norm());
        Self {
            samples,
            lip,
            bound,
        }
    }

    pub fn lipschitz(&self) -> &Scalar {
        &self.lip
    }

    pub fn samples(&self) -> &SampleSet {
        &self.samples
    }

    /// Sup-norm clamp, if this is the bounded variant.
    pub fn clamp(&self) -> Option<&Scalar> {
        self.bound.as_ref()
    }

    /// Exact value on the line; `None` in higher dimension.
    pub fn eval_exact(&self, x: &Scalar) -> Option<Scalar> {
        if self.samples.dim != 1 {
            return None;
        }
        let raw = self
            .samples
            .points
            .iter()
            .zip(&self.samples.values)
            .map(|(a, v)| v.clone() + self.lip.clone() * (x.clone() - a[0].clone()).abs())
            .reduce(min_of)
            .expect("nonempty samples");
        Some(match &self.bound {
            Some(m) => max_of(min_of(raw, m.clone()), -m.clone()),
            None => raw,
        })
    }

    /// Floating-point evaluation in any dimension.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.samples.dim {
            return Err(Error::invalid(
                "query",
                format!("expected {} coordinates, got {}", self.samples.dim, x.len()),
            ));
        }
        let lip = self.lip.to_f64().unwrap_or(f64::INFINITY);
        let raw = self
            .samples
            .points
            .iter()
            .zip(&self.samples.values)
            .map(|(a, v)| v.to_f64().unwrap_or(0.0) + lip * distance_f64(x, a))
            .fold(f64::INFINITY, f64::min);
        Ok(match &self.bound {
            Some(m) => {
                let m = m.to_f64().unwrap_or(0.0);
                raw.clamp(-m, m)
            }
            None => raw,
        })
    }

    /// Evaluates at an exact query: exactly on the line, in `f64` otherwise.
    pub fn eval_point(&self, x: &[Scalar]) -> Result<f64> {
        if self.samples.dim == 1 && x.len() == 1 {
            return Ok(self
                .eval_exact(&x[0])
                .expect("dimension one")
                .to_f64()
                .unwrap_or(f64::NAN));
        }
        let xf: Vec<f64> = x.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        self.eval(&xf)
    }
}

/// Sampled upper and lower pointwise Lipschitz constants at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseLip {
    /// Largest sampled `|f(x) - f(y)| / |x - y|` over all radii.
    pub upper: f64,
    /// Smallest over radii of `sup_{|y - x| <= r} |f(x) - f(y)| / r`.
    pub lower: f64,
    pub radii: Vec<f64>,
    pub samples_per_radius: usize,
}

/// Estimates the upper and lower pointwise Lipschitz constants of `f` at `x`
/// using a fixed schedule of strictly decreasing positive radii. At each
/// radius `r` the ball is probed along evenly spread directions at distances
/// `r k / m` for `k = 1..=m`.
pub fn pointwise_lip<F>(f: F, x: &[f64], radii: &[f64], samples_per_radius: usize) -> Result<PointwiseLip>
where
    F: Fn(&[f64]) -> f64,
{
    if radii.is_empty() {
        return Err(Error::invalid("radii", "empty radius schedule"));
    }
    if radii.iter().any(|r| !(*r > 0.0)) || radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("radii", "radii must be positive and strictly decreasing"));
    }
    if !(1..=3).contains(&x.len()) {
        return Err(Error::invalid("x", "dimension must be 1, 2 or 3"));
    }
    let dirs = directions(x.len(), samples_per_radius.max(8) / 4);
    let steps = 4usize;
    let fx = f(x);
    let mut upper = 0f64;
    let mut lower = f64::INFINITY;
    let mut y = vec![0.0; x.len()];
    for &r in radii {
        let mut sup_diff = 0f64;
        for u in &dirs {
            for k in 1..=steps {
                let s = r * k as f64 / steps as f64;
                for (i, yi) in y.iter_mut().enumerate() {
                    *yi = x[i] + s * u[i];
                }
                let diff = (f(&y) - fx).abs();
                sup_diff = sup_diff.max(diff);
                upper = upper.max(diff / s);
            }
        }
        lower = lower.min(sup_diff / r);
    }
    Ok(PointwiseLip {
        upper,
        lower,
        radii: radii.to_vec(),
        samples_per_radius: dirs.len() * steps,
    })
}

fn directions(dim: usize, count: usize) -> Vec<Vec<f64>> {
    match dim {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..count.max(4))
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / count.max(4) as f64;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        _ => {
            // Fibonacci sphere
            let n = count.max(6);
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..n)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
                    let rho = (1.0 - z * z).sqrt();
                    let a = golden * k as f64;
                    vec![rho * a.cos(), rho * a.sin(), z]
                })
                .collect()
        }
    }
}

/// Geometric radius schedule `r0, r0 q, r0 q^2, ...` of `n` radii.
pub fn geometric_radii(r0: f64, ratio: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| r0 * ratio.powi(k as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn two_on_line() -> SampleSet {
        SampleSet::on_line(&[(int(0), int(0)), (int(1), int(1))]).unwrap()
    }

    #[test]
    fn sample_lipschitz_examples() {
        assert_eq!(two_on_line().lipschitz_exact(), Some(int(1)));
        let single = SampleSet::on_line(&[(int(3), int(7))]).unwrap();
        assert_eq!(single.lipschitz(), 0.0);
        let plane = SampleSet::new(2, vec![vec![int(0), int(0)], vec![int(3), int(4)]], vec![int(0), int(10)]).unwrap();
        assert_eq!(plane.lipschitz(), 2.0);
        assert!(plane.admits_constant(&int(2)));
        assert!(!plane.admits_constant(&rat(19, 10)));
    }

    #[test]
    fn validation() {
        assert!(SampleSet::new(1, vec![], vec![]).is_err());
        assert!(SampleSet::new(4, vec![vec![int(0); 4]], vec![int(0)]).is_err());
        assert!(SampleSet::on_line(&[(int(0), int(0)), (int(0), int(1))]).is_err());
        assert!(SampleSet::new(2, vec![vec![int(0)]], vec![int(0)]).is_err());
    }

    #[test]
    fn mcshane_examples() {
        let e = McShane::new(two_on_line(), int(1)).unwrap();
        assert_eq!(e.eval_exact(&rat(1, 2)), Some(rat(1, 2)));
        assert_eq!(e.eval_exact(&int(2)), Some(int(2)));
        let single = McShane::new(SampleSet::on_line(&[(int(4), rat(5, 3))]).unwrap(), int(0)).unwrap();
        assert_eq!(single.eval_exact(&int(-100)), Some(rat(5, 3)));
        assert!(matches!(
            McShane::new(two_on_line(), rat(1, 2)),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn bounded_examples() {
        let b = McShane::bounded(two_on_line());
        assert_eq!(b.eval_exact(&int(5)), Some(int(1)));
        assert_eq!(b.eval_exact(&rat(1, 3)), Some(rat(1, 3)));
        let zeros = SampleSet::on_line(&[(int(0), int(0)), (int(2), int(0))]).unwrap();
        let z = McShane::bounded(zeros);
        assert_eq!(z.eval_exact(&int(-9)), Some(int(0)));
        assert_eq!(z.eval(&[17.0]).unwrap(), 0.0);
    }

    #[test]
    fn bounded_in_plane_keeps_values() {
        let s = SampleSet::new(
            2,
            vec![vec![int(0), int(0)], vec![int(1), int(0)], vec![int(0), int(1)]],
            vec![int(0), int(1), int(-1)],
        )
        .unwrap();
        let b = McShane::bounded(s.clone());
        for (p, v) in s.points().iter().zip(s.values()) {
            let got = b.eval_point(p).unwrap();
            assert!((got - v.to_f64().unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn pointwise_examples() {
        let radii = geometric_radii(1e-2, 0.5, 10);
        let abs = pointwise_lip(|x| x[0].abs(), &[0.0], &radii, 16).unwrap();
        assert!((abs.upper - 1.0).abs() < 1e-9 && (abs.lower - 1.0).abs() < 1e-9);
        let c = pointwise_lip(|_| 3.0, &[0.5, 0.5], &radii, 16).unwrap();
        assert_eq!((c.upper, c.lower), (0.0, 0.0));
        let small = geometric_radii(1e-3, 0.5, 8);
        let sq = pointwise_lip(|x| x[0] * x[0], &[1.0], &small, 16).unwrap();
        assert!((sq.upper - 2.0).abs() < 1e-3 && (sq.lower - 2.0).abs() < 1e-3);
        assert!(sq.lower <= sq.upper);
    }

    #[test]
    fn radius_schedule_errors() {
        assert!(pointwise_lip(|x| x[0], &[0.0], &[], 8).is_err());
        assert!(pointwise_lip(|x| x[0], &[0.0], &[0.1, 0.2], 8).is_err());
        assert!(pointwise_lip(|x| x[0], &[0.0], &[0.1, 0.0], 8).is_err());
    }
}
