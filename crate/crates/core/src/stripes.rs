//! Curves that are graphs of 1-Lipschitz functions, the closed stripes around
//! them, and the two constructions that turn an arbitrary stripe cover into one
//! with ordered curves and pairwise-disjoint interiors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pl::PiecewiseLinear;
use crate::scalar::{cmp, Field};

/// Which coordinate a curve is a graph over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Axis {
    /// `{(t, f(t))}`
    X1,
    /// `{(f(t), t)}`
    X2,
}

impl Axis {
    pub fn other(self) -> Self {
        match self {
            Axis::X1 => Axis::X2,
            Axis::X2 => Axis::X1,
        }
    }

    /// Splits a planar point into (graph parameter, transverse coordinate).
    pub fn split<'a, T>(self, p: &'a [T; 2]) -> (&'a T, &'a T) {
        match self {
            Axis::X1 => (&p[0], &p[1]),
            Axis::X2 => (&p[1], &p[0]),
        }
    }

    /// Inverse of [`Axis::split`].
    pub fn join<T>(self, t: T, y: T) -> [T; 2] {
        match self {
            Axis::X1 => [t, y],
            Axis::X2 => [y, t],
        }
    }
}

impl TryFrom<u8> for Axis {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Axis::X1),
            2 => Ok(Axis::X2),
            _ => Err(format!("axis must be 1 or 2, got {v}")),
        }
    }
}

impl From<Axis> for u8 {
    fn from(a: Axis) -> u8 {
        match a {
            Axis::X1 => 1,
            Axis::X2 => 2,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", u8::from(*self))
    }
}

/// Graph of a 1-Lipschitz PL function over one coordinate axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve<T> {
    axis: Axis,
    f: PiecewiseLinear<T>,
}

impl<T: Field> Curve<T> {
    pub fn new(axis: Axis, f: PiecewiseLinear<T>) -> Result<Self> {
        if !f.is_lipschitz(&T::one()) {
            return Err(Error::precondition(format!(
                "{axis}-curve parametrization has Lipschitz constant {:?} > 1",
                f.lipschitz_constant()
            )));
        }
        Ok(Self { axis, f })
    }

    /// Builds a curve without the Lipschitz check, for transversal curves
    /// whose bound is checked by the caller.
    pub(crate) fn unchecked(axis: Axis, f: PiecewiseLinear<T>) -> Self {
        Self { axis, f }
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn function(&self) -> &PiecewiseLinear<T> {
        &self.f
    }

    pub fn into_function(self) -> PiecewiseLinear<T> {
        self.f
    }
}

/// Closed neighbourhood `{ |y - f(t)| <= delta / 2 }` of a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Stripe<T> {
    pub curve: Curve<T>,
    pub thickness: T,
}

impl<T: Field> Stripe<T> {
    pub fn new(curve: Curve<T>, thickness: T) -> Result<Self> {
        if !thickness.is_positive() {
            return Err(Error::invalid("delta", "stripe thickness must be positive"));
        }
        Ok(Self { curve, thickness })
    }

    pub fn contains(&self, p: &[T; 2]) -> bool {
        let (t, y) = self.curve.axis.split(p);
        let half = self.thickness.clone() / T::ratio(2, 1);
        (y.clone() - self.curve.f.value(t)).abs() <= half
    }

    /// Transverse section at parameter `t`, as a closed interval.
    pub fn section(&self, t: &T) -> (T, T) {
        let c = self.curve.f.value(t);
        let half = self.thickness.clone() / T::ratio(2, 1);
        (c.clone() - half.clone(), c + half)
    }
}

/// Ordered family of stripes over one axis sharing one thickness.
///
/// The `ordered` and `disjoint_interiors` flags are computed exactly on
/// construction, never taken on trust.
#[derive(Debug, Clone, PartialEq)]
pub struct Arrangement<T> {
    axis: Axis,
    delta: T,
    curves: Vec<PiecewiseLinear<T>>,
    ordered: bool,
    disjoint_interiors: bool,
}

impl<T: Field> Arrangement<T> {
    pub fn new(axis: Axis, delta: T, curves: Vec<PiecewiseLinear<T>>) -> Result<Self> {
        if !delta.is_positive() {
            return Err(Error::invalid("delta", "thickness must be positive"));
        }
        if let Some(j) = curves.iter().position(|f| !f.is_lipschitz(&T::one())) {
            return Err(Error::invalid(
                "curves",
                format!("curve {j} is not 1-Lipschitz"),
            ));
        }
        let ordered = curves.windows(2).all(|w| w[0].le_everywhere(&w[1]));
        let disjoint_interiors = curves.windows(2).all(|w| w[0].below_by(&w[1], &delta));
        Ok(Self {
            axis,
            delta,
            curves,
            ordered,
            disjoint_interiors,
        })
    }

    pub fn from_curves(curves: Vec<Curve<T>>, delta: T) -> Result<Self> {
        let axis = common_axis(&curves)?.unwrap_or(Axis::X1);
        Self::new(axis, delta, curves.into_iter().map(Curve::into_function).collect())
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn delta(&self) -> &T {
        &self.delta
    }

    pub fn functions(&self) -> &[PiecewiseLinear<T>] {
        &self.curves
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn is_ordered(&self) -> bool {
        self.ordered
    }

    pub fn has_disjoint_interiors(&self) -> bool {
        self.disjoint_interiors
    }

    pub fn curves(&self) -> Vec<Curve<T>> {
        self.curves
            .iter()
            .map(|f| Curve::unchecked(self.axis, f.clone()))
            .collect()
    }

    pub fn stripes(&self) -> Vec<Stripe<T>> {
        self.curves()
            .into_iter()
            .map(|curve| Stripe {
                curve,
                thickness: self.delta.clone(),
            })
            .collect()
    }

    pub fn contains(&self, p: &[T; 2]) -> bool {
        self.stripe_index_of(p).is_some()
    }

    /// Index of the first stripe containing `p`.
    pub fn stripe_index_of(&self, p: &[T; 2]) -> Option<usize> {
        let (t, y) = self.axis.split(p);
        let half = self.delta.clone() / T::ratio(2, 1);
        self.curves
            .iter()
            .position(|f| (y.clone() - f.value(t)).abs() <= half)
    }

    /// `N * delta`.
    pub fn total_thickness(&self) -> T {
        T::from_int(self.curves.len() as i64) * self.delta.clone()
    }
}

fn common_axis<T>(curves: &[Curve<T>]) -> Result<Option<Axis>> {
    let Some(first) = curves.first() else {
        return Ok(None);
    };
    if curves.iter().any(|c| c.axis != first.axis) {
        return Err(Error::precondition("curves over different axes"));
    }
    Ok(Some(first.axis))
}

/// Replaces a family of curves by one with the same union of graphs whose
/// parametrizations are pointwise ordered, `f_1 <= f_2 <= ... <= f_N`.
///
/// Curves are inserted one at a time into an already ordered family: the new
/// curve is swept upward by alternating pointwise minima and maxima, exactly
/// like one pass of insertion sort run on functions.
pub fn uncross<T: Field>(curves: &[Curve<T>]) -> Result<Vec<Curve<T>>> {
    let Some(axis) = common_axis(curves)? else {
        return Ok(Vec::new());
    };
    if let Some(j) = curves.iter().position(|c| !c.f.is_lipschitz(&T::one())) {
        return Err(Error::precondition(format!("curve {j} is not 1-Lipschitz")));
    }

    let mut sorted: Vec<PiecewiseLinear<T>> = vec![curves[0].f.clone()];
    for incoming in &curves[1..] {
        let mut next = Vec::with_capacity(sorted.len() + 1);
        // carry plays the role of h_{j-1}: the running maximum
        let mut carry = incoming.f.clone();
        for g in &sorted {
            next.push(g.min(&carry)?.simplified());
            carry = g.max(&carry)?.simplified();
        }
        next.push(carry);
        sorted = next;
    }
    Ok(sorted
        .into_iter()
        .map(|f| Curve::unchecked(axis, f))
        .collect())
}

/// Pushes ordered stripes upward until their interiors are pairwise disjoint.
///
/// Runs `h_{k,j} = h_{k-1,j} ∨ (h_{k,k} + delta)` for `j > k`, starting from
/// `h_{0,j} = f_j`, and returns the diagonal `h_{j,j}`. The union of the input
/// stripes stays inside the union of the output stripes.
pub fn disjointify<T: Field>(curves: &[Curve<T>], delta: &T) -> Result<Vec<Curve<T>>> {
    if !delta.is_positive() {
        return Err(Error::precondition("delta must be positive"));
    }
    let Some(axis) = common_axis(curves)? else {
        return Ok(Vec::new());
    };
    if let Some(j) = curves.iter().position(|c| !c.f.is_lipschitz(&T::one())) {
        return Err(Error::precondition(format!("curve {j} is not 1-Lipschitz")));
    }
    if let Some(j) = curves
        .windows(2)
        .position(|w| !w[0].f.le_everywhere(&w[1].f))
    {
        return Err(Error::precondition(format!(
            "curves are not ordered: f_{} > f_{} somewhere (uncross first)",
            j + 1,
            j + 2
        )));
    }

    let mut h: Vec<PiecewiseLinear<T>> = curves.iter().map(|c| c.f.clone()).collect();
    for k in 0..h.len() {
        let raised = h[k].shift(delta);
        for j in k + 1..h.len() {
            h[j] = h[j].max(&raised)?.simplified();
        }
    }
    Ok(h.into_iter().map(|f| Curve::unchecked(axis, f)).collect())
}

/// Outcome of a cover check.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverReport<T> {
    pub covered: bool,
    pub checked: usize,
    /// Indices into the input point list together with the points themselves.
    pub uncovered: Vec<(usize, [T; 2])>,
}

/// Exact membership check of every point against a union of closed stripes.
/// Stripes may have differing thickness and axes.
pub fn covers<T: Field>(stripes: &[Stripe<T>], pts: &[[T; 2]]) -> CoverReport<T> {
    let uncovered: Vec<_> = pts
        .iter()
        .enumerate()
        .filter(|(_, p)| !stripes.iter().any(|s| s.contains(p)))
        .map(|(i, p)| (i, p.clone()))
        .collect();
    CoverReport {
        covered: uncovered.is_empty(),
        checked: pts.len(),
        uncovered,
    }
}

/// Sum of the thicknesses of a stripe family.
pub fn total_thickness<T: Field>(stripes: &[Stripe<T>]) -> T {
    stripes
        .iter()
        .fold(T::zero(), |acc, s| acc + s.thickness.clone())
}

/// Where a transversal curve runs through one stripe.
#[derive(Debug, Clone, PartialEq)]
pub struct StripeCrossing<T> {
    pub stripe: usize,
    /// Closed parameter interval of the transversal curve inside the stripe.
    pub lo: T,
    pub hi: T,
}

/// Intersection of an arrangement with a transversal curve.
#[derive(Debug, Clone, PartialEq)]
pub struct TransversalReport<T> {
    pub crossings: Vec<StripeCrossing<T>>,
    /// Exact length of the union of parameter intervals.
    pub parameter_length: T,
    /// Arclength of the intersection (irrational in general, hence a float).
    pub arclength: f64,
    /// `C(L)` with `arclength <= C(L) * sum(delta)`.
    pub constant: f64,
    pub bound: f64,
}

/// Constant `C(L) = sqrt(1 + L^2) / (1 - L)` bounding the arclength of an
/// `L`-Lipschitz transversal curve inside a stripe of thickness 1.
///
/// Along the transversal curve `s -> (g(s), s)` the offset `s - f(g(s))` from
/// the stripe centre grows at rate at least `1 - L`, so the curve stays inside
/// a stripe of thickness `delta` for a parameter window of length at most
/// `delta / (1 - L)`, and each unit of parameter carries at most
/// `sqrt(1 + L^2)` of arclength.
pub fn transversal_constant(lipschitz: f64) -> f64 {
    (1.0 + lipschitz * lipschitz).sqrt() / (1.0 - lipschitz)
}

/// Computes where `curve`, a graph over the other axis with Lipschitz constant
/// strictly below 1, meets each stripe of `arrangement`.
///
/// Each crossing is a single parameter interval obtained by inverting the
/// strictly increasing PL offset `s - f_l(g(s))`; a declared domain on the
/// transversal parametrization clips it.
pub fn transversal_intersection<T: Field>(
    arrangement: &Arrangement<T>,
    curve: &Curve<T>,
) -> Result<TransversalReport<T>> {
    if curve.axis == arrangement.axis {
        return Err(Error::precondition(
            "transversal curve must be a graph over the other axis",
        ));
    }
    let g = &curve.f;
    let lip = g.lipschitz_constant();
    if lip >= T::one() {
        return Err(Error::precondition(format!(
            "transversal Lipschitz constant {lip:?} must be < 1"
        )));
    }
    let half = arrangement.delta.clone() / T::ratio(2, 1);

    let mut crossings = Vec::new();
    for (l, f) in arrangement.curves.iter().enumerate() {
        let offset = PiecewiseLinear::identity()
            .sub(&f.compose(&g.clone().without_domain()))?;
        let mut lo = offset.solve_increasing(&-half.clone())?;
        let mut hi = offset.solve_increasing(&half)?;
        if let Some((a, b)) = g.domain() {
            if &lo < a {
                lo = a.clone();
            }
            if &hi > b {
                hi = b.clone();
            }
            if lo > hi {
                continue;
            }
        }
        crossings.push(StripeCrossing { stripe: l, lo, hi });
    }

    let mut spans: Vec<(T, T)> = crossings.iter().map(|c| (c.lo.clone(), c.hi.clone())).collect();
    spans.sort_by(|a, b| cmp(&a.0, &b.0));
    let merged = merge_intervals(spans);
    let parameter_length = merged
        .iter()
        .fold(T::zero(), |acc, (a, b)| acc + b.clone() - a.clone());
    let arclength = merged.iter().map(|(a, b)| arclength(g, a, b)).sum();

    let constant = transversal_constant(lip.to_f64_lossy());
    let bound = constant * arrangement.total_thickness().to_f64_lossy();
    Ok(TransversalReport {
        crossings,
        parameter_length,
        arclength,
        constant,
        bound,
    })
}

pub(crate) fn merge_intervals<T: Field>(sorted: Vec<(T, T)>) -> Vec<(T, T)> {
    let mut out: Vec<(T, T)> = Vec::with_capacity(sorted.len());
    for (a, b) in sorted {
        match out.last_mut() {
            Some(last) if a <= last.1 => {
                if b > last.1 {
                    last.1 = b;
                }
            }
            _ => out.push((a, b)),
        }
    }
    out
}

/// Arclength of the graph of `g` over `[a, b]`.
fn arclength<T: Field>(g: &PiecewiseLinear<T>, a: &T, b: &T) -> f64 {
    let mut cuts: Vec<T> = vec![a.clone()];
    cuts.extend(g.breakpoints().iter().filter(|x| *x > a && *x < b).cloned());
    cuts.push(b.clone());
    cuts.windows(2)
        .map(|w| {
            let dx = (w[1].clone() - w[0].clone()).to_f64_lossy();
            let dy = (g.value(&w[1]) - g.value(&w[0])).to_f64_lossy();
            dx.hypot(dy)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::{int, rat, Scalar};

    type Pl = PiecewiseLinear<Scalar>;

    fn c1(f: Pl) -> Curve<Scalar> {
        Curve::new(Axis::X1, f).unwrap()
    }

    #[test]
    fn curve_rejects_steep() {
        let steep = Pl::identity().scale(&int(2));
        assert!(Curve::new(Axis::X1, steep).is_err());
    }

    #[test]
    fn uncross_figure_one() {
        let (g1, g2) = fixtures::uncross_pair();
        let out = uncross(&[c1(g1.clone()), c1(g2.clone())]).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out[0].function().same_function(&g1.min(&g2).unwrap()));
        assert!(out[1].function().same_function(&g1.max(&g2).unwrap()));
        // drawn result: f_1 through (1,1/2), (2,3/2), (5,3/2); h_1 through (2,3/2), (3,5/2), (5,3/2)
        for (x, lo, hi) in [
            (int(1), rat(1, 2), rat(3, 2)),
            (int(2), rat(3, 2), rat(3, 2)),
            (int(3), rat(3, 2), rat(5, 2)),
            (int(5), rat(3, 2), rat(3, 2)),
        ] {
            assert_eq!(out[0].function().value(&x), lo);
            assert_eq!(out[1].function().value(&x), hi);
        }
    }

    #[test]
    fn uncross_fixes_ordered_family() {
        let plateau = Pl::polyline(&[(int(-1), int(0)), (int(0), int(1)), (int(1), int(0))], int(0), int(0)).unwrap();
        let fs = [Pl::constant(int(0)), plateau, Pl::constant(int(2))];
        let curves: Vec<_> = fs.iter().cloned().map(c1).collect();
        let out = uncross(&curves).unwrap();
        for (a, b) in out.iter().zip(&fs) {
            assert!(a.function().same_function(b));
        }
    }

    #[test]
    fn uncross_rejects_mixed_axes() {
        let a = Curve::new(Axis::X1, Pl::constant(int(0))).unwrap();
        let b = Curve::new(Axis::X2, Pl::constant(int(0))).unwrap();
        assert!(matches!(uncross(&[a, b]), Err(Error::Precondition(_))));
    }

    #[test]
    fn disjointify_examples() {
        let d = rat(1, 4);
        let f = fixtures::tent();
        let single = disjointify(&[c1(f.clone())], &d).unwrap();
        assert_eq!(single[0].function(), &f);

        let twice = disjointify(&[c1(f.clone()), c1(f.clone())], &d).unwrap();
        assert!(twice[0].function().same_function(&f));
        assert!(twice[1].function().same_function(&f.shift(&d)));
    }

    #[test]
    fn disjointify_figure_two() {
        let (f1, f2) = fixtures::disjointify_pair();
        let out = disjointify(&[c1(f1.clone()), c1(f2.clone())], &int(1)).unwrap();
        assert!(out[0].function().same_function(&f1));
        // h_{1,2} through (1,2), (3,3), (4,5/2), (5,3)
        for (x, y) in [(1, rat(2, 1)), (3, int(3)), (4, rat(5, 2)), (5, int(3))] {
            assert_eq!(out[1].function().value(&int(x)), y);
        }
        assert!(out[0].function().below_by(out[1].function(), &int(1)));
    }

    #[test]
    fn disjointify_errors() {
        let lo = c1(Pl::constant(int(0)));
        let hi = c1(Pl::constant(int(1)));
        assert!(disjointify(&[hi.clone(), lo.clone()], &int(1)).is_err());
        assert!(disjointify(&[lo, hi], &int(0)).is_err());
    }

    #[test]
    fn cover_boundary_and_empty() {
        let arr = Arrangement::new(Axis::X1, rat(1, 2), vec![Pl::constant(int(0))]).unwrap();
        let stripes = arr.stripes();
        assert!(covers(&stripes, &[]).covered);
        let r = covers(&stripes, &[[int(5), rat(1, 4)], [int(5), rat(-1, 4)], [int(0), rat(1, 3)]]);
        assert!(!r.covered);
        assert_eq!(r.uncovered.len(), 1);
        assert_eq!(r.uncovered[0].0, 2);
    }

    #[test]
    fn axis_two_membership() {
        let s = Stripe::new(Curve::new(Axis::X2, Pl::identity()).unwrap(), int(1)).unwrap();
        // x2-curve {(t, t)}: the point (1/2, 0) has t = 0, |1/2 - 0| = 1/2
        assert!(s.contains(&[rat(1, 2), int(0)]));
        assert!(!s.contains(&[rat(3, 4), int(0)]));
    }

    #[test]
    fn thickness_examples() {
        let fs = vec![Pl::constant(int(0)); 3];
        let arr = Arrangement::new(Axis::X1, rat(1, 8), fs).unwrap();
        assert_eq!(arr.total_thickness(), rat(3, 8));
        assert_eq!(total_thickness(&arr.stripes()), rat(3, 8));
        let empty = Arrangement::<Scalar>::new(Axis::X1, int(1), vec![]).unwrap();
        assert_eq!(empty.total_thickness(), int(0));
        let many = Arrangement::new(Axis::X1, rat(1, 256), vec![Pl::constant(int(0)); 16]).unwrap();
        assert_eq!(many.total_thickness(), rat(1, 16));
    }

    #[test]
    fn flags_are_computed() {
        let arr = Arrangement::new(
            Axis::X1,
            rat(1, 2),
            vec![Pl::constant(int(0)), Pl::constant(rat(1, 2)), Pl::constant(int(1))],
        )
        .unwrap();
        assert!(arr.is_ordered());
        assert!(arr.has_disjoint_interiors());
        let tight = Arrangement::new(Axis::X1, int(1), arr.functions().to_vec()).unwrap();
        assert!(tight.is_ordered());
        assert!(!tight.has_disjoint_interiors());
    }

    #[test]
    fn vertical_line_through_stripe() {
        let delta = rat(1, 3);
        let arr = Arrangement::new(Axis::X1, delta.clone(), vec![fixtures::tent()]).unwrap();
        let line = Curve::new(Axis::X2, Pl::constant(rat(1, 2))).unwrap();
        let r = transversal_intersection(&arr, &line).unwrap();
        assert_eq!(r.crossings.len(), 1);
        assert_eq!(r.parameter_length, delta);
        assert!((r.arclength - 1.0 / 3.0).abs() < 1e-12);
        assert!(r.arclength <= r.bound + 1e-12);
    }

    #[test]
    fn transversal_outside() {
        let arr = Arrangement::new(Axis::X1, rat(1, 4), vec![Pl::constant(int(0))]).unwrap();
        let seg = Pl::constant(int(0)).with_domain(int(5), int(6)).unwrap();
        let r = transversal_intersection(&arr, &Curve::new(Axis::X2, seg).unwrap()).unwrap();
        assert!(r.crossings.is_empty());
        assert_eq!(r.parameter_length, int(0));
        assert_eq!(r.arclength, 0.0);
    }

    #[test]
    fn transversal_preconditions() {
        let arr = Arrangement::new(Axis::X1, rat(1, 4), vec![Pl::constant(int(0))]).unwrap();
        let steep = Curve::new(Axis::X2, Pl::identity()).unwrap();
        assert!(transversal_intersection(&arr, &steep).is_err());
        let same = Curve::new(Axis::X1, Pl::constant(int(0))).unwrap();
        assert!(transversal_intersection(&arr, &same).is_err());
    }

    #[test]
    fn constant_at_zero() {
        assert_eq!(transversal_constant(0.0), 1.0);
        assert!((transversal_constant(0.5) - 5f64.sqrt()).abs() < 1e-12);
    }
}
