//! Coordinate approximators built from a stripe arrangement with disjoint
//! interiors.
//!
//! For an `x1`-arrangement the approximator is
//!
//! ```text
//! phi(p) = signed length of {p1} x [y0, p2] outside every stripe
//! ```
//!
//! It is constant on each vertical section of a stripe, a translate of `x2`
//! between stripes, 3-Lipschitz, and differs from `p2 - y0` by at most the
//! total thickness `N * delta`. `x2`-arrangements use the same construction
//! with the coordinates swapped, so the approximated coordinate is always the
//! one transverse to the stripe graphs.

use rand::Rng;

use crate::error::{Error, Result};
use crate::pl::PiecewiseLinear;
use crate::scalar::{max_of, min_of, Field};
use crate::stripes::Arrangement;

#[derive(Debug, Clone)]
pub struct CoordApproximator<T> {
    arrangement: Arrangement<T>,
    baseline: T,
    window: (T, T),
}

impl<T: Field> CoordApproximator<T> {
    /// Approximator with baseline 0 on the unit window.
    pub fn new(arrangement: Arrangement<T>) -> Result<Self> {
        Self::with_baseline(arrangement, T::zero(), (T::zero(), T::one()))
    }

    /// `window` is the range of graph parameters over which every stripe must
    /// lie on or above `baseline`.
    pub fn with_baseline(arrangement: Arrangement<T>, baseline: T, window: (T, T)) -> Result<Self> {
        if !arrangement.has_disjoint_interiors() {
            return Err(Error::precondition(
                "arrangement stripes do not have pairwise-disjoint interiors",
            ));
        }
        if window.0 > window.1 {
            return Err(Error::invalid("window", "lower end exceeds upper end"));
        }
        if let Some(lowest) = arrangement.functions().first() {
            let half = arrangement.delta().clone() / T::ratio(2, 1);
            let floor = lowest
                .clone()
                .with_domain(window.0.clone(), window.1.clone())?
                .infimum()
                .expect("bounded window")
                - half;
            if floor < baseline {
                return Err(Error::precondition(format!(
                    "baseline {baseline:?} lies above the lowest stripe (bottom {floor:?}) on the window"
                )));
            }
        }
        Ok(Self {
            arrangement,
            baseline,
            window,
        })
    }

    pub fn arrangement(&self) -> &Arrangement<T> {
        &self.arrangement
    }

    pub fn baseline(&self) -> &T {
        &self.baseline
    }

    pub fn window(&self) -> &(T, T) {
        &self.window
    }

    /// Exact value of the approximator at `p`.
    pub fn phi(&self, p: &[T; 2]) -> T {
        let (t, y) = self.arrangement.axis().split(p);
        self.phi_at(t, y)
    }

    // integral of the complement indicator along the transverse segment from
    // the baseline to y, at graph parameter t
    fn phi_at(&self, t: &T, y: &T) -> T {
        let (lo, hi, sign) = if *y >= self.baseline {
            (&self.baseline, y, T::one())
        } else {
            (y, &self.baseline, -T::one())
        };
        let half = self.arrangement.delta().clone() / T::ratio(2, 1);
        let mut free = hi.clone() - lo.clone();
        for f in self.arrangement.functions() {
            let c = f.value(t);
            let bottom = c.clone() - half.clone();
            if &bottom >= hi {
                // stripes are ordered, so every later one is higher still
                break;
            }
            let top = c + half.clone();
            let overlap = min_of(top, hi.clone()) - max_of(bottom, lo.clone());
            if overlap.is_positive() {
                free = free - overlap;
            }
        }
        sign * free
    }

    /// Transverse deficit `(y - y0) - phi(p)`, the covered length below `p`.
    pub fn deficit(&self, p: &[T; 2]) -> T {
        let (t, y) = self.arrangement.axis().split(p);
        y.clone() - self.baseline.clone() - self.phi_at(t, y)
    }

    /// Restriction to the line with graph parameter fixed at `t`, as a PL
    /// function of the transverse coordinate.
    pub fn restrict_transverse(&self, t: &T) -> PiecewiseLinear<T> {
        let half = self.arrangement.delta().clone() / T::ratio(2, 1);
        let mut knots = vec![self.baseline.clone()];
        for f in self.arrangement.functions() {
            let c = f.value(t);
            knots.push(c.clone() - half.clone());
            knots.push(c + half.clone());
        }
        knots.sort_by(crate::scalar::cmp);
        knots.dedup();
        let ys: Vec<T> = knots.iter().map(|y| self.phi_at(t, y)).collect();
        PiecewiseLinear::new(knots, ys, T::one(), T::one()).expect("sorted knots")
    }

    /// Restriction to the line with transverse coordinate fixed at `y`, as a
    /// PL function of the graph parameter, assembled from PL envelopes.
    pub fn restrict_parallel(&self, y: &T) -> Result<PiecewiseLinear<T>> {
        let (lo, hi, sign) = if *y >= self.baseline {
            (self.baseline.clone(), y.clone(), T::one())
        } else {
            (y.clone(), self.baseline.clone(), -T::one())
        };
        let half = self.arrangement.delta().clone() / T::ratio(2, 1);
        let lo_c = PiecewiseLinear::constant(lo.clone());
        let hi_c = PiecewiseLinear::constant(hi.clone());
        let zero = PiecewiseLinear::constant(T::zero());
        let mut free = PiecewiseLinear::constant(hi - lo);
        for f in self.arrangement.functions() {
            let top = f.shift(&half).min(&hi_c)?;
            let bottom = f.shift(&-half.clone()).max(&lo_c)?;
            let overlap = top.sub(&bottom)?.max(&zero)?;
            free = free.sub(&overlap)?.simplified();
        }
        Ok(free.scale(&sign))
    }
}

/// Outcome of the sampled 3-Lipschitz check.
#[derive(Debug, Clone)]
pub struct LipschitzReport<T> {
    pub pairs: usize,
    /// Largest `|phi(p) - phi(q)| / |p - q|_1`.
    pub max_ratio: T,
    pub witness: Option<([T; 2], [T; 2])>,
    /// Pairs breaking `|dphi| <= |d transverse| + 2 |d parameter|` or
    /// `|dphi|^2 <= 9 |p - q|^2`.
    pub violations: Vec<([T; 2], [T; 2])>,
    /// Pairs drawn per proof case: same vertical line, same stripe, same gap,
    /// arbitrary.
    pub per_case: [usize; 4],
}

impl<T: Field> LipschitzReport<T> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.max_ratio <= T::from_int(3)
    }
}

/// Sampling cases, one per step of the Lipschitz argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairCase {
    SameLine,
    SameStripe,
    SameGap,
    Arbitrary,
}

impl<T: Field> CoordApproximator<T> {
    /// Checks one pair exactly; returns the taxicab ratio and whether both
    /// bounds hold.
    pub fn check_pair(&self, p: &[T; 2], q: &[T; 2]) -> (T, bool) {
        let axis = self.arrangement.axis();
        let (pt, py) = axis.split(p);
        let (qt, qy) = axis.split(q);
        let dphi = (self.phi(p) - self.phi(q)).abs();
        let dt = (pt.clone() - qt.clone()).abs();
        let dy = (py.clone() - qy.clone()).abs();
        let taxicab = dt.clone() + dy.clone();
        let case_bound = dy.clone() + T::from_int(2) * dt.clone();
        let euclid_ok = dphi.clone() * dphi.clone() <= T::from_int(9) * (dt.clone() * dt + dy.clone() * dy);
        let ok = dphi <= case_bound && euclid_ok;
        let ratio = if taxicab.is_zero() {
            T::zero()
        } else {
            dphi / taxicab
        };
        (ratio, ok)
    }

    /// Stratified random pair in the window for the given case.
    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R, case: PairCase) -> ([T; 2], [T; 2]) {
        let axis = self.arrangement.axis();
        let n = self.arrangement.len();
        let t = |rng: &mut R| self.sample_parameter(rng);
        match case {
            PairCase::SameLine => {
                let s = t(rng);
                let (a, b) = (self.sample_transverse(rng, &s), self.sample_transverse(rng, &s));
                (axis.join(s.clone(), a), axis.join(s, b))
            }
            PairCase::SameStripe if n > 0 => {
                let l = rng.gen_range(0..n);
                (self.point_in_stripe(rng, l), self.point_in_stripe(rng, l))
            }
            PairCase::SameGap if n > 0 => {
                let l = rng.gen_range(0..=n);
                (self.point_in_gap(rng, l), self.point_in_gap(rng, l))
            }
            _ => {
                let (s, r) = (t(rng), t(rng));
                let a = self.sample_transverse(rng, &s);
                let b = self.sample_transverse(rng, &r);
                (axis.join(s, a), axis.join(r, b))
            }
        }
    }

    /// Grid point with graph parameter in the window and transverse
    /// coordinate between the baseline and a margin above the top stripe.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> [T; 2] {
        let t = self.sample_parameter(rng);
        let y = self.sample_transverse(rng, &t);
        self.arrangement.axis().join(t, y)
    }

    fn sample_parameter<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let (a, b) = &self.window;
        a.clone() + (b.clone() - a.clone()) * grid_fraction(rng)
    }

    // transverse coordinate between the baseline and a margin above the top stripe
    fn sample_transverse<R: Rng + ?Sized>(&self, rng: &mut R, t: &T) -> T {
        let delta = self.arrangement.delta().clone();
        let top = self
            .arrangement
            .functions()
            .last()
            .map(|f| f.value(t) + delta.clone())
            .unwrap_or_else(|| self.baseline.clone() + T::one());
        let top = max_of(top, self.baseline.clone() + T::one());
        self.baseline.clone() + (top - self.baseline.clone()) * grid_fraction(rng)
    }

    fn point_in_stripe<R: Rng + ?Sized>(&self, rng: &mut R, l: usize) -> [T; 2] {
        let t = self.sample_parameter(rng);
        let delta = self.arrangement.delta().clone();
        let c = self.arrangement.functions()[l].value(&t);
        let y = c - delta.clone() / T::ratio(2, 1) + delta * grid_fraction(rng);
        self.arrangement.axis().join(t, y)
    }

    // gap l lies between stripe l-1 and stripe l (gap 0 above the baseline,
    // gap n above the top stripe)
    fn point_in_gap<R: Rng + ?Sized>(&self, rng: &mut R, l: usize) -> [T; 2] {
        let fs = self.arrangement.functions();
        let half = self.arrangement.delta().clone() / T::ratio(2, 1);
        let t = self.sample_parameter(rng);
        let lo = if l == 0 {
            self.baseline.clone()
        } else {
            fs[l - 1].value(&t) + half.clone()
        };
        let hi = if l == fs.len() {
            lo.clone() + T::one()
        } else {
            fs[l].value(&t) - half
        };
        let y = lo.clone() + (hi - lo) * grid_fraction(rng);
        self.arrangement.axis().join(t, y)
    }

    /// Samples `budget` stratified pairs and checks each exactly.
    pub fn verify_three_lipschitz<R: Rng + ?Sized>(&self, rng: &mut R, budget: usize) -> Result<LipschitzReport<T>> {
        if budget == 0 {
            return Err(Error::invalid("budget", "at least one pair is required"));
        }
        const CASES: [PairCase; 4] = [
            PairCase::SameLine,
            PairCase::SameStripe,
            PairCase::SameGap,
            PairCase::Arbitrary,
        ];
        let mut report = LipschitzReport {
            pairs: 0,
            max_ratio: T::zero(),
            witness: None,
            violations: Vec::new(),
            per_case: [0; 4],
        };
        for i in 0..budget {
            let case = i % 4;
            let (p, q) = self.sample_pair(rng, CASES[case]);
            let (ratio, ok) = self.check_pair(&p, &q);
            report.pairs += 1;
            report.per_case[case] += 1;
            if !ok {
                report.violations.push((p.clone(), q.clone()));
            }
            if ratio > report.max_ratio || report.witness.is_none() {
                report.max_ratio = max_of(ratio, report.max_ratio.clone());
                report.witness = Some((p, q));
            }
        }
        Ok(report)
    }

    /// Checks `0 <= (y - y0) - phi(p) <= N * delta` at every point.
    pub fn verify_approximation(&self, pts: &[[T; 2]]) -> ApproximationReport<T> {
        let cap = self.arrangement.total_thickness();
        let mut max_deficit = T::zero();
        let mut witness = None;
        let mut violations = Vec::new();
        for p in pts {
            let d = self.deficit(p);
            if d.is_negative() || d > cap {
                violations.push((p.clone(), d.clone()));
            }
            if d > max_deficit {
                max_deficit = d;
                witness = Some(p.clone());
            }
        }
        ApproximationReport {
            points: pts.len(),
            max_deficit,
            witness,
            bound: cap,
            violations,
        }
    }

    /// Samples `per_stripe` points in each stripe and checks that `phi` does not
    /// depend on the transverse coordinate there, and that `phi - f_l(t)` is one
    /// constant per stripe.
    pub fn verify_stripe_univariate<R: Rng + ?Sized>(&self, rng: &mut R, per_stripe: usize) -> UnivariateReport<T> {
        let fs = self.arrangement.functions();
        let mut constants = Vec::with_capacity(fs.len());
        let mut failures = Vec::new();
        for (l, f) in fs.iter().enumerate() {
            let mut constant: Option<T> = None;
            for _ in 0..per_stripe {
                let p = self.point_in_stripe(rng, l);
                let (t, _) = self.arrangement.axis().split(&p);
                // same parameter, other end of the section
                let half = self.arrangement.delta().clone() / T::ratio(2, 1);
                let centre = f.value(t);
                let (lo, hi) = (centre.clone() - half.clone(), centre + half);
                let lower = self.arrangement.axis().join(t.clone(), lo);
                let upper = self.arrangement.axis().join(t.clone(), hi);
                let v = self.phi(&p);
                if v != self.phi(&lower) || v != self.phi(&upper) {
                    failures.push((l, p.clone()));
                }
                let c = v - f.value(t);
                match &constant {
                    None => constant = Some(c),
                    Some(k) if *k != c => failures.push((l, p.clone())),
                    Some(_) => {}
                }
            }
            constants.push(constant);
        }
        UnivariateReport {
            constants,
            failures,
        }
    }
}

fn grid_fraction<T: Field, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::ratio(rng.gen_range(0..=crate::gen::GRID), crate::gen::GRID)
}

#[derive(Debug, Clone)]
pub struct ApproximationReport<T> {
    pub points: usize,
    pub max_deficit: T,
    pub witness: Option<[T; 2]>,
    /// `N * delta`.
    pub bound: T,
    pub violations: Vec<([T; 2], T)>,
}

impl<T> ApproximationReport<T> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct UnivariateReport<T> {
    /// Measured `phi - f_l(t)` per stripe (`None` if the stripe was not sampled).
    pub constants: Vec<Option<T>>,
    pub failures: Vec<(usize, [T; 2])>,
}

impl<T> UnivariateReport<T> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `|p2 - p2'| + |q2' - q2| <= |p2 - q2| + |p2' - q2'|` for `p2 <= p2'` and
/// `q2' <= q2`.
pub fn interval_inequality<T: Field>(p2: &T, p2_prime: &T, q2: &T, q2_prime: &T) -> Result<bool> {
    if p2 > p2_prime || q2_prime > q2 {
        return Err(Error::precondition("need p2 <= p2' and q2' <= q2"));
    }
    let d = |a: &T, b: &T| (a.clone() - b.clone()).abs();
    let lhs = d(p2, p2_prime) + d(q2_prime, q2);
    let rhs = d(p2, q2) + d(p2_prime, q2_prime);
    Ok(lhs <= rhs)
}
