//! Continuous piecewise-linear functions on the real line.
//!
//! A [`PiecewiseLinear`] is given by strictly increasing breakpoints, the
//! values at those breakpoints, and one extension slope on each side. Between
//! breakpoints it interpolates linearly; beyond them it is affine. A function
//! may additionally carry a closed domain, in which case checked evaluation
//! outside it fails.
//!
//! All operations are closed over the scalar field: envelopes insert the
//! crossing points of the two inputs, which are rational whenever the inputs
//! are, so with [`Scalar`](crate::Scalar) nothing is ever rounded.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{cmp, max_of, Field};

/// Continuous piecewise-linear function `R -> R`.
#[derive(Clone, PartialEq)]
pub struct PiecewiseLinear<T> {
    xs: Vec<T>,
    ys: Vec<T>,
    // slope of the piece [xs[i], xs[i + 1]]
    slopes: Vec<T>,
    left_slope: T,
    right_slope: T,
    domain: Option<(T, T)>,
}

impl<T: fmt::Debug> fmt::Debug for PiecewiseLinear<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<_> = self.xs.iter().zip(&self.ys).collect();
        f.debug_struct("PiecewiseLinear")
            .field("points", &pts)
            .field("left_slope", &self.left_slope)
            .field("right_slope", &self.right_slope)
            .field("domain", &self.domain)
            .finish()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Envelope {
    Upper,
    Lower,
}

impl<T: Field> PiecewiseLinear<T> {
    pub fn new(xs: Vec<T>, ys: Vec<T>, left_slope: T, right_slope: T) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::invalid("breakpoints", "at least one breakpoint is required"));
        }
        if xs.len() != ys.len() {
            return Err(Error::invalid(
                "values",
                format!("{} values for {} breakpoints", ys.len(), xs.len()),
            ));
        }
        if let Some(i) = xs.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::invalid(
                "breakpoints",
                format!("not strictly increasing at index {}", i + 1),
            ));
        }
        Ok(Self::from_parts(xs, ys, left_slope, right_slope, None))
    }

    fn from_parts(
        xs: Vec<T>,
        ys: Vec<T>,
        left_slope: T,
        right_slope: T,
        domain: Option<(T, T)>,
    ) -> Self {
        let slopes = xs
            .windows(2)
            .zip(ys.windows(2))
            .map(|(x, y)| (y[1].clone() - y[0].clone()) / (x[1].clone() - x[0].clone()))
            .collect();
        Self {
            xs,
            ys,
            slopes,
            left_slope,
            right_slope,
            domain,
        }
    }

    /// Polyline through `points`, continued affinely with the given end slopes.
    pub fn polyline(points: &[(T, T)], left_slope: T, right_slope: T) -> Result<Self> {
        let (xs, ys) = points.iter().cloned().unzip();
        Self::new(xs, ys, left_slope, right_slope)
    }

    /// Polyline through `points` whose extensions continue the first and last
    /// segments. Needs at least two points.
    pub fn polyline_extended(points: &[(T, T)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("breakpoints", "need two points to infer end slopes"));
        }
        let s = |a: &(T, T), b: &(T, T)| (b.1.clone() - a.1.clone()) / (b.0.clone() - a.0.clone());
        let n = points.len();
        let left = s(&points[0], &points[1]);
        let right = s(&points[n - 2], &points[n - 1]);
        Self::polyline(points, left, right)
    }

    /// `x -> y0 + slope * (x - x0)`.
    pub fn affine(x0: T, y0: T, slope: T) -> Self {
        Self::from_parts(vec![x0], vec![y0], slope.clone(), slope, None)
    }

    pub fn constant(c: T) -> Self {
        Self::affine(T::zero(), c, T::zero())
    }

    pub fn identity() -> Self {
        Self::affine(T::zero(), T::zero(), T::one())
    }

    /// Restricts checked evaluation to `[lo, hi]`.
    pub fn with_domain(mut self, lo: T, hi: T) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid("domain", "lower end exceeds upper end"));
        }
        self.domain = Some((lo, hi));
        Ok(self)
    }

    pub fn without_domain(mut self) -> Self {
        self.domain = None;
        self
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.xs
    }

    pub fn values(&self) -> &[T] {
        &self.ys
    }

    pub fn left_slope(&self) -> &T {
        &self.left_slope
    }

    pub fn right_slope(&self) -> &T {
        &self.right_slope
    }

    pub fn domain(&self) -> Option<&(T, T)> {
        self.domain.as_ref()
    }

    pub fn first_breakpoint(&self) -> &T {
        &self.xs[0]
    }

    pub fn last_breakpoint(&self) -> &T {
        &self.xs[self.xs.len() - 1]
    }

    /// Value at `x`, ignoring any declared domain.
    pub fn value(&self, x: &T) -> T {
        let i = self.xs.partition_point(|b| b <= x);
        if i == 0 {
            self.ys[0].clone() + self.left_slope.clone() * (x.clone() - self.xs[0].clone())
        } else if i == self.xs.len() {
            let k = i - 1;
            self.ys[k].clone() + self.right_slope.clone() * (x.clone() - self.xs[k].clone())
        } else {
            let k = i - 1;
            self.ys[k].clone() + self.slopes[k].clone() * (x.clone() - self.xs[k].clone())
        }
    }

    /// Checked evaluation: fails outside a declared domain.
    pub fn eval(&self, x: &T) -> Result<T> {
        if let Some((lo, hi)) = &self.domain {
            if x < lo || x > hi {
                return Err(Error::Domain {
                    x: format!("{x:?}"),
                    lo: format!("{lo:?}"),
                    hi: format!("{hi:?}"),
                });
            }
        }
        Ok(self.value(x))
    }

    /// Classical derivative at `x`; `None` at a breakpoint where the one-sided
    /// slopes differ.
    pub fn slope_at(&self, x: &T) -> Option<T> {
        let i = self.xs.partition_point(|b| b < x);
        let right = self.piece_slope(self.xs.partition_point(|b| b <= x));
        if i < self.xs.len() && &self.xs[i] == x {
            let left = self.piece_slope(i);
            return (left == right).then_some(right);
        }
        Some(right)
    }

    // slope of the piece with index k: 0 is the left extension, xs.len() the right
    fn piece_slope(&self, k: usize) -> T {
        if k == 0 {
            self.left_slope.clone()
        } else if k == self.xs.len() {
            self.right_slope.clone()
        } else {
            self.slopes[k - 1].clone()
        }
    }

    /// Every piece slope, left extension first and right extension last.
    pub fn slopes(&self) -> impl Iterator<Item = &T> + '_ {
        std::iter::once(&self.left_slope)
            .chain(self.slopes.iter())
            .chain(std::iter::once(&self.right_slope))
    }

    /// Largest absolute slope, which for a PL function is its Lipschitz constant.
    pub fn lipschitz_constant(&self) -> T {
        self.slopes()
            .map(|s| s.abs())
            .fold(T::zero(), max_of)
    }

    pub fn is_lipschitz(&self, bound: &T) -> bool {
        self.slopes().all(|s| &s.abs() <= bound)
    }

    /// `f + c`.
    pub fn shift(&self, c: &T) -> Self {
        let mut out = self.clone();
        for y in &mut out.ys {
            *y = y.clone() + c.clone();
        }
        out
    }

    /// `c * f`.
    pub fn scale(&self, c: &T) -> Self {
        let ys = self.ys.iter().map(|y| y.clone() * c.clone()).collect();
        Self::from_parts(
            self.xs.clone(),
            ys,
            self.left_slope.clone() * c.clone(),
            self.right_slope.clone() * c.clone(),
            self.domain.clone(),
        )
    }

    fn merged_domain(&self, other: &Self) -> Result<Option<(T, T)>> {
        match (&self.domain, &other.domain) {
            (Some(a), Some(b)) if a != b => Err(Error::IncompatibleDomains(format!(
                "{a:?} vs {b:?}"
            ))),
            (Some(a), _) | (None, Some(a)) => Ok(Some(a.clone())),
            (None, None) => Ok(None),
        }
    }

    fn union_breakpoints(&self, other: &Self) -> Vec<T> {
        let (a, b) = (&self.xs, &other.xs);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let next = if j == b.len() || (i < a.len() && a[i] < b[j]) {
                i += 1;
                &a[i - 1]
            } else if i == a.len() || b[j] < a[i] {
                j += 1;
                &b[j - 1]
            } else {
                i += 1;
                j += 1;
                &a[i - 1]
            };
            out.push(next.clone());
        }
        out
    }

    /// Builds the function that is affine between consecutive `xs` using `eval`,
    /// reading the extension slopes off unit steps beyond the end points.
    fn sampled_on(xs: Vec<T>, domain: Option<(T, T)>, eval: impl Fn(&T) -> T) -> Self {
        let ys: Vec<T> = xs.iter().map(&eval).collect();
        let first = xs[0].clone();
        let last = xs[xs.len() - 1].clone();
        let left = ys[0].clone() - eval(&(first - T::one()));
        let right = eval(&(last + T::one())) - ys[ys.len() - 1].clone();
        Self::from_parts(xs, ys, left, right, domain)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let domain = self.merged_domain(other)?;
        let xs = self.union_breakpoints(other);
        Ok(Self::sampled_on(xs, domain, |x| self.value(x) + other.value(x)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let domain = self.merged_domain(other)?;
        let xs = self.union_breakpoints(other);
        Ok(Self::sampled_on(xs, domain, |x| self.value(x) - other.value(x)))
    }

    /// Pointwise maximum `f ∨ g`.
    pub fn max(&self, other: &Self) -> Result<Self> {
        self.envelope(other, Envelope::Upper)
    }

    /// Pointwise minimum `f ∧ g`.
    pub fn min(&self, other: &Self) -> Result<Self> {
        self.envelope(other, Envelope::Lower)
    }

    fn envelope(&self, other: &Self, side: Envelope) -> Result<Self> {
        let domain = self.merged_domain(other)?;
        let base = self.union_breakpoints(other);
        let diff = |x: &T| self.value(x) - other.value(x);
        let d: Vec<T> = base.iter().map(diff).collect();
        let n = base.len();

        let mut xs = Vec::with_capacity(n + 2);
        let sd_left = self.left_slope.clone() - other.left_slope.clone();
        if crossing_sign(&d[0], &sd_left) > 0 {
            // d(x) = d0 + sd (x - x0) vanishes left of x0
            xs.push(base[0].clone() - d[0].clone() / sd_left);
        }
        for i in 0..n {
            xs.push(base[i].clone());
            if i + 1 < n && strictly_opposite(&d[i], &d[i + 1]) {
                let (a, b) = (&base[i], &base[i + 1]);
                let t = d[i].clone() / (d[i].clone() - d[i + 1].clone());
                xs.push(a.clone() + t * (b.clone() - a.clone()));
            }
        }
        let sd_right = self.right_slope.clone() - other.right_slope.clone();
        if crossing_sign(&d[n - 1], &sd_right) < 0 {
            xs.push(base[n - 1].clone() - d[n - 1].clone() / sd_right);
        }

        Ok(Self::sampled_on(xs, domain, |x| {
            let (a, b) = (self.value(x), other.value(x));
            match side {
                Envelope::Upper => max_of(a, b),
                Envelope::Lower => crate::scalar::min_of(a, b),
            }
        }))
    }

    /// Composition `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut xs = inner.xs.clone();
        let last = inner.xs.len();
        for b in &self.xs {
            for k in 0..=last {
                let s = inner.piece_slope(k);
                if s.is_zero() {
                    continue;
                }
                let anchor = if k == 0 { 0 } else { k - 1 };
                let x = inner.xs[anchor].clone() + (b.clone() - inner.ys[anchor].clone()) / s;
                let after_lo = k == 0 || x > inner.xs[k - 1];
                let before_hi = k == last || x < inner.xs[k];
                if after_lo && before_hi {
                    xs.push(x);
                }
            }
        }
        xs.sort_by(cmp);
        xs.dedup();
        Self::sampled_on(xs, inner.domain.clone(), |x| self.value(&inner.value(x)))
    }

    /// Greatest lower bound over the domain (or all of `R`); `None` if unbounded.
    pub fn infimum(&self) -> Option<T> {
        self.extremum(Envelope::Lower)
    }

    /// Least upper bound over the domain (or all of `R`); `None` if unbounded.
    pub fn supremum(&self) -> Option<T> {
        self.extremum(Envelope::Upper)
    }

    fn extremum(&self, side: Envelope) -> Option<T> {
        let pick = |a: T, b: T| match side {
            Envelope::Upper => max_of(a, b),
            Envelope::Lower => crate::scalar::min_of(a, b),
        };
        match &self.domain {
            Some((lo, hi)) => {
                let inside = self
                    .xs
                    .iter()
                    .zip(&self.ys)
                    .filter(|(x, _)| *x > lo && *x < hi)
                    .map(|(_, y)| y.clone());
                let ends = [self.value(lo), self.value(hi)];
                ends.into_iter().chain(inside).reduce(pick)
            }
            None => {
                let escapes = match side {
                    Envelope::Lower => self.left_slope.is_positive() || self.right_slope.is_negative(),
                    Envelope::Upper => self.left_slope.is_negative() || self.right_slope.is_positive(),
                };
                if escapes {
                    None
                } else {
                    self.ys.iter().cloned().reduce(pick)
                }
            }
        }
    }

    /// Exact test of `self(t) + gap <= other(t)` for every `t`.
    pub fn below_by(&self, other: &Self, gap: &T) -> bool {
        // on R the difference is PL, so its infimum decides the inequality
        let xs = self.union_breakpoints(other);
        let diff = Self::sampled_on(xs, self.domain.clone().or(other.domain.clone()), |x| {
            other.value(x) - self.value(x)
        });
        diff.infimum().is_some_and(|m| &m >= gap)
    }

    /// Exact test of `self <= other` everywhere.
    pub fn le_everywhere(&self, other: &Self) -> bool {
        self.below_by(other, &T::zero())
    }

    /// Whether both describe the same function on `R` (representations may differ).
    pub fn same_function(&self, other: &Self) -> bool {
        let xs = self.union_breakpoints(other);
        xs.iter().all(|x| self.value(x) == other.value(x))
            && self.left_slope == other.left_slope
            && self.right_slope == other.right_slope
    }

    /// Drops breakpoints where the two adjacent pieces have equal slope.
    pub fn simplified(&self) -> Self {
        if self.xs.len() == 1 {
            return self.clone();
        }
        let n = self.xs.len();
        let mut keep = Vec::with_capacity(n);
        for i in 0..n {
            if self.piece_slope(i) != self.piece_slope(i + 1) {
                keep.push(i);
            }
        }
        if keep.is_empty() {
            keep.push(0);
        }
        let xs = keep.iter().map(|&i| self.xs[i].clone()).collect();
        let ys = keep.iter().map(|&i| self.ys[i].clone()).collect();
        Self::from_parts(
            xs,
            ys,
            self.left_slope.clone(),
            self.right_slope.clone(),
            self.domain.clone(),
        )
    }

    /// Solves `self(x) = y` for a strictly increasing function.
    pub fn solve_increasing(&self, y: &T) -> Result<T> {
        if !self.slopes().all(|s| s.is_positive()) {
            return Err(Error::precondition("function is not strictly increasing"));
        }
        let i = self.ys.partition_point(|v| v <= y);
        let (k, s) = if i == 0 {
            (0, self.left_slope.clone())
        } else {
            (i - 1, self.piece_slope(i))
        };
        Ok(self.xs[k].clone() + (y.clone() - self.ys[k].clone()) / s)
    }

    /// Converts between scalar types.
    pub fn map_scalar<U: Field>(&self, f: impl Fn(&T) -> U) -> PiecewiseLinear<U> {
        PiecewiseLinear::from_parts(
            self.xs.iter().map(&f).collect(),
            self.ys.iter().map(&f).collect(),
            f(&self.left_slope),
            f(&self.right_slope),
            self.domain.as_ref().map(|(a, b)| (f(a), f(b))),
        )
    }
}

// sign of the root offset of d0 + s (x - x0) relative to x0:
// positive means the root lies left of x0, negative right, 0 no root
fn crossing_sign<T: Field>(d0: &T, s: &T) -> i8 {
    if d0.is_zero() || s.is_zero() {
        0
    } else if d0.is_positive() == s.is_positive() {
        1
    } else {
        -1
    }
}

fn strictly_opposite<T: Field>(a: &T, b: &T) -> bool {
    (a.is_positive() && b.is_negative()) || (a.is_negative() && b.is_positive())
}
