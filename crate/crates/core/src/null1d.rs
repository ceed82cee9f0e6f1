//! One-dimensional model: approximate identities built from open covers of a
//! null set, measures split into atoms and a step density, and the derivation
//! `f -> w * f'` acting on piecewise-linear functions.


use crate::error::{Error, Result};
use crate::pl::PiecewiseLinear;
use crate::scalar::{cmp, Field};
use crate::stripes::merge_intervals;

/// Finite union of disjoint open intervals inside a working interval `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenCover1D<T> {
    domain: (T, T),
    intervals: Vec<(T, T)>,
}

impl<T: Field> OpenCover1D<T> {
    pub fn new(domain: (T, T), mut intervals: Vec<(T, T)>) -> Result<Self> {
        if domain.0 > domain.1 {
            return Err(Error::invalid("domain", "lower end exceeds upper end"));
        }
        if let Some(i) = intervals.iter().position(|(lo, hi)| lo >= hi) {
            return Err(Error::invalid("intervals", format!("interval {i} is empty")));
        }
        if let Some(i) = intervals
            .iter()
            .position(|(lo, hi)| lo < &domain.0 || hi > &domain.1)
        {
            return Err(Error::invalid(
                "intervals",
                format!("interval {i} leaves the domain"),
            ));
        }
        intervals.sort_by(|a, b| cmp(&a.0, &b.0));
        if intervals.windows(2).any(|w| w[0].1 > w[1].0) {
            return Err(Error::invalid("intervals", "intervals overlap"));
        }
        Ok(Self { domain, intervals })
    }

    pub fn domain(&self) -> &(T, T) {
        &self.domain
    }

    pub fn intervals(&self) -> &[(T, T)] {
        &self.intervals
    }

    pub fn total_length(&self) -> T {
        self.intervals
            .iter()
            .fold(T::zero(), |acc, (lo, hi)| acc + hi.clone() - lo.clone())
    }

    pub fn contains(&self, x: &T) -> bool {
        self.intervals.iter().any(|(lo, hi)| lo < x && x < hi)
    }
}

/// `phi(x) = integral from a to x of (1 - indicator of the cover)`: slope 0 on
/// the cover, slope 1 elsewhere, on the domain `[a, b]`.
pub fn build_phi_1d<T: Field>(cover: &OpenCover1D<T>) -> PiecewiseLinear<T> {
    let (a, b) = cover.domain.clone();
    let mut xs = vec![a.clone()];
    let mut ys = vec![T::zero()];
    let mut push = |x: T, y: T| {
        if xs.last() == Some(&x) {
            return;
        }
        xs.push(x);
        ys.push(y);
    };
    let mut acc = T::zero();
    let mut cursor = a.clone();
    for (lo, hi) in &cover.intervals {
        acc = acc + lo.clone() - cursor;
        push(lo.clone(), acc.clone());
        push(hi.clone(), acc.clone());
        cursor = hi.clone();
    }
    acc = acc + b.clone() - cursor;
    push(b.clone(), acc);
    PiecewiseLinear::new(xs, ys, T::one(), T::one())
        .and_then(|f| f.with_domain(a, b))
        .expect("cover endpoints are sorted")
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeficitReport<T> {
    /// `max (x - a) - phi(x)` over the domain.
    pub max_deficit: T,
    pub argmax: T,
    pub cover_length: T,
}

/// Largest gap between the shifted identity and `phi`. The deficit is PL with
/// breakpoints among those of `phi`, so checking breakpoints is exact.
pub fn identity_deficit<T: Field>(phi: &PiecewiseLinear<T>, cover: &OpenCover1D<T>) -> Result<DeficitReport<T>> {
    let a = &cover.domain.0;
    let mut best: Option<(T, T)> = None;
    for (x, y) in phi.breakpoints().iter().zip(phi.values()) {
        let d = x.clone() - a.clone() - y.clone();
        if best.as_ref().map_or(true, |(m, _)| d > *m) {
            best = Some((d, x.clone()));
        }
    }
    let (max_deficit, argmax) = best.expect("phi has breakpoints");
    let cover_length = cover.total_length();
    if max_deficit < T::zero() || max_deficit > cover_length {
        return Err(Error::Consistency(format!(
            "deficit {max_deficit:?} outside [0, {cover_length:?}]"
        )));
    }
    Ok(DeficitReport {
        max_deficit,
        argmax,
        cover_length,
    })
}

/// Right-continuous step function on `[cuts[0], cuts[n])`, value `values[i]`
/// on `[cuts[i], cuts[i + 1])`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction<T> {
    cuts: Vec<T>,
    values: Vec<T>,
}

impl<T: Field> StepFunction<T> {
    pub fn new(cuts: Vec<T>, values: Vec<T>) -> Result<Self> {
        if cuts.len() != values.len() + 1 {
            return Err(Error::invalid(
                "values",
                format!("{} values for {} cuts", values.len(), cuts.len()),
            ));
        }
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("cuts", "cuts must be strictly increasing"));
        }
        Ok(Self { cuts, values })
    }

    pub fn constant(lo: T, hi: T, c: T) -> Result<Self> {
        Self::new(vec![lo, hi], vec![c])
    }

    pub fn zero(lo: T, hi: T) -> Self {
        Self::constant(lo, hi, T::zero()).expect("lo < hi")
    }

    pub fn cuts(&self) -> &[T] {
        &self.cuts
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Value at `x`; `None` outside `[cuts[0], cuts[n])`.
    pub fn value(&self, x: &T) -> Option<T> {
        let i = self.cuts.partition_point(|c| c <= x);
        (i >= 1 && i < self.cuts.len()).then(|| self.values[i - 1].clone())
    }

    /// Integral over `[lo, hi]` intersected with the support.
    pub fn integral(&self, lo: &T, hi: &T) -> T {
        let mut acc = T::zero();
        for (w, v) in self.cuts.windows(2).zip(&self.values) {
            let a = if &w[0] > lo { &w[0] } else { lo };
            let b = if &w[1] < hi { &w[1] } else { hi };
            if a < b {
                acc = acc + v.clone() * (b.clone() - a.clone());
            }
        }
        acc
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| v >= &T::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

/// Radon measure on `[a, b]` held in decomposed form: atoms plus a step density.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure1D<T> {
    atoms: Vec<(T, T)>,
    density: StepFunction<T>,
}

impl<T: Field> Measure1D<T> {
    pub fn new(mut atoms: Vec<(T, T)>, density: StepFunction<T>) -> Result<Self> {
        if atoms.iter().any(|(_, m)| m <= &T::zero()) {
            return Err(Error::invalid("atoms", "atom masses must be positive"));
        }
        atoms.sort_by(|a, b| cmp(&a.0, &b.0));
        if atoms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid("atoms", "atom locations must be distinct"));
        }
        if !density.is_nonnegative() {
            return Err(Error::invalid("density", "density must be nonnegative"));
        }
        Ok(Self { atoms, density })
    }

    pub fn atoms(&self) -> &[(T, T)] {
        &self.atoms
    }

    pub fn density(&self) -> &StepFunction<T> {
        &self.density
    }

    pub fn support(&self) -> (T, T) {
        let c = &self.density.cuts;
        (c[0].clone(), c[c.len() - 1].clone())
    }

    /// Mass of the closed interval `[lo, hi]`.
    pub fn measure_of(&self, lo: &T, hi: &T) -> T {
        let atoms = self
            .atoms
            .iter()
            .filter(|(x, _)| x >= lo && x <= hi)
            .fold(T::zero(), |acc, (_, m)| acc + m.clone());
        atoms + self.density.integral(lo, hi)
    }

    pub fn total_mass(&self) -> T {
        let (a, b) = self.support();
        let atoms_out = self
            .atoms
            .iter()
            .filter(|(x, _)| x < &a || x > &b)
            .fold(T::zero(), |acc, (_, m)| acc + m.clone());
        self.measure_of(&a, &b) + atoms_out
    }

    pub fn is_atom(&self, x: &T) -> bool {
        self.atoms
            .binary_search_by(|(loc, _)| cmp(loc, x))
            .is_ok()
    }
}

/// Splits a measure into its absolutely continuous part (the density) and its
/// singular part (the atoms).
pub fn decompose<T: Field>(m: &Measure1D<T>) -> (Measure1D<T>, Measure1D<T>) {
    let (a, b) = m.support();
    let ac = Measure1D {
        atoms: Vec::new(),
        density: m.density.clone(),
    };
    let singular = Measure1D {
        atoms: m.atoms.clone(),
        density: StepFunction::zero(a, b),
    };
    (ac, singular)
}

/// Derivation `f -> w * f'` with respect to a measure: the weight `w` plays the
/// role of the derivation of the identity, and the value on atoms is 0.
#[derive(Debug, Clone)]
pub struct Derivation1D<T> {
    measure: Measure1D<T>,
    weight: StepFunction<T>,
}

/// Result of applying a [`Derivation1D`] to a PL function.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivationResult<T> {
    /// `w * f'` on pieces where the density is positive, 0 elsewhere. The
    /// cuts include every breakpoint of `f`; values there are undefined.
    pub step: StepFunction<T>,
    /// Breakpoints of `f` at which `f'` does not exist.
    pub undefined: Vec<T>,
    /// Atom locations with their value (always 0).
    pub atom_values: Vec<(T, T)>,
}

impl<T: Field> DerivationResult<T> {
    /// Value at `x` under almost-everywhere semantics: 0 on atoms, `None` where
    /// `f'` does not exist or outside the support.
    pub fn value(&self, x: &T) -> Option<T> {
        if self.atom_values.iter().any(|(a, _)| a == x) {
            return Some(T::zero());
        }
        if self.undefined.iter().any(|u| u == x) {
            return None;
        }
        self.step.value(x)
    }

    pub fn is_identically_zero(&self) -> bool {
        self.step.is_zero() && self.atom_values.iter().all(|(_, v)| v.is_zero())
    }
}

impl<T: Field> Derivation1D<T> {
    pub fn new(measure: Measure1D<T>, weight: StepFunction<T>) -> Self {
        Self { measure, weight }
    }

    pub fn measure(&self) -> &Measure1D<T> {
        &self.measure
    }

    pub fn apply(&self, f: &PiecewiseLinear<T>) -> DerivationResult<T> {
        let (a, b) = self.measure.support();
        let mut cuts: Vec<T> = self
            .measure
            .density
            .cuts
            .iter()
            .chain(&self.weight.cuts)
            .chain(f.breakpoints())
            .filter(|x| *x >= &a && *x <= &b)
            .cloned()
            .collect();
        cuts.sort_by(cmp);
        cuts.dedup();
        let values = cuts
            .windows(2)
            .map(|w| {
                let mid = (w[0].clone() + w[1].clone()) / T::ratio(2, 1);
                self.density_weighted(&mid, f)
                    .unwrap_or_else(T::zero)
            })
            .collect();
        let undefined = f
            .breakpoints()
            .iter()
            .filter(|x| f.slope_at(x).is_none())
            .cloned()
            .collect();
        let atom_values = self
            .measure
            .atoms
            .iter()
            .map(|(x, _)| (x.clone(), T::zero()))
            .collect();
        DerivationResult {
            step: StepFunction::new(cuts, values).expect("sorted cuts"),
            undefined,
            atom_values,
        }
    }

    // w(x) * f'(x) where the density is positive, 0 where it vanishes
    fn density_weighted(&self, x: &T, f: &PiecewiseLinear<T>) -> Option<T> {
        let rho = self.measure.density.value(x)?;
        if rho.is_zero() {
            return Some(T::zero());
        }
        Some(self.weight.value(x)? * f.slope_at(x)?)
    }

    /// Pointwise value of the derivation applied to `f` at `x`.
    pub fn apply_at(&self, f: &PiecewiseLinear<T>, x: &T) -> Option<T> {
        if self.measure.is_atom(x) {
            return Some(T::zero());
        }
        self.density_weighted(x, f)
    }

    /// Pointwise value on the product `f * g`, which is piecewise quadratic.
    /// The derivative of a quadratic equals its symmetric difference quotient
    /// over any step that stays inside one piece, so it is computed that way.
    pub fn apply_product_at(&self, f: &PiecewiseLinear<T>, g: &PiecewiseLinear<T>, x: &T) -> Option<T> {
        if self.measure.is_atom(x) {
            return Some(T::zero());
        }
        let rho = self.measure.density.value(x)?;
        if rho.is_zero() {
            return Some(T::zero());
        }
        let step = half_gap_to_breakpoints(x, f.breakpoints().iter().chain(g.breakpoints()))?;
        let fg = |s: &T| f.value(s) * g.value(s);
        let left = x.clone() - step.clone();
        let right = x.clone() + step.clone();
        let derivative = (fg(&right) - fg(&left)) / (step * T::ratio(2, 1));
        Some(self.weight.value(x)? * derivative)
    }
}

// half the distance from x to the nearest breakpoint, or 1 if there are none;
// None if x is itself a breakpoint
fn half_gap_to_breakpoints<'a, T: Field>(x: &T, bps: impl Iterator<Item = &'a T>) -> Option<T> {
    let mut best: Option<T> = None;
    for b in bps {
        let d = (b.clone() - x.clone()).abs();
        if d.is_zero() {
            return None;
        }
        if best.as_ref().map_or(true, |m| d < *m) {
            best = Some(d);
        }
    }
    Some(best.map_or_else(T::one, |d| d / T::ratio(2, 1)))
}

/// Atom approximation of the middle-thirds Cantor measure at `level`: one atom
/// of mass `2^-level` at the centre of every surviving interval.
pub fn cantor_atoms<T: Field>(level: u32) -> Vec<(T, T)> {
    let mut intervals = vec![(T::zero(), T::one())];
    for _ in 0..level {
        let third = T::ratio(1, 3);
        intervals = intervals
            .into_iter()
            .flat_map(|(lo, hi)| {
                let w = (hi.clone() - lo.clone()) * third.clone();
                [(lo.clone(), lo + w.clone()), (hi.clone() - w, hi)]
            })
            .collect();
    }
    let mass = T::one() / T::from_int(1i64 << level);
    intervals
        .into_iter()
        .map(|(lo, hi)| ((lo + hi) / T::ratio(2, 1), mass.clone()))
        .collect()
}

/// Open cover of `[0, 1]` by `pieces` equal intervals spaced evenly, with total
/// length `len`.
pub fn spread_cover<T: Field>(pieces: usize, len: T) -> Result<OpenCover1D<T>> {
    let n = T::from_int(pieces as i64);
    let width = len / n.clone();
    let pitch = T::one() / n;
    let intervals = (0..pieces)
        .map(|k| {
            let centre = pitch.clone() * (T::from_int(k as i64) + T::ratio(1, 2));
            let half = width.clone() / T::ratio(2, 1);
            (centre.clone() - half.clone(), centre + half)
        })
        .collect();
    OpenCover1D::new((T::zero(), T::one()), intervals)
}

/// Union length of possibly overlapping intervals.
pub fn union_length<T: Field>(mut intervals: Vec<(T, T)>) -> T {
    intervals.sort_by(|a, b| cmp(&a.0, &b.0));
    merge_intervals(intervals)
        .into_iter()
        .fold(T::zero(), |acc, (a, b)| acc + b - a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Scalar};

    type Pl = PiecewiseLinear<Scalar>;

    fn unit_cover(intervals: Vec<(Scalar, Scalar)>) -> OpenCover1D<Scalar> {
        OpenCover1D::new((int(0), int(1)), intervals).unwrap()
    }

    #[test]
    fn empty_cover_gives_identity() {
        let phi = build_phi_1d(&unit_cover(vec![]));
        for k in 0..=4 {
            assert_eq!(phi.eval(&rat(k, 4)).unwrap(), rat(k, 4));
        }
        let d = identity_deficit(&phi, &unit_cover(vec![])).unwrap();
        assert_eq!(d.max_deficit, int(0));
    }

    #[test]
    fn single_interval_cover() {
        let cover = unit_cover(vec![(rat(2, 5), rat(3, 5))]);
        let phi = build_phi_1d(&cover);
        assert_eq!(phi.eval(&int(1)).unwrap(), rat(4, 5));
        assert_eq!(phi.eval(&rat(9, 20)).unwrap(), rat(2, 5));
        assert_eq!(phi.eval(&rat(11, 20)).unwrap(), rat(2, 5));
        assert!(phi.slopes().all(|s| s == &int(0) || s == &int(1)));
        assert!(phi.eval(&rat(3, 2)).is_err());
    }

    #[test]
    fn deficit_of_one_fifth() {
        let cover = unit_cover(vec![(rat(1, 5), rat(2, 5))]);
        let d = identity_deficit(&build_phi_1d(&cover), &cover).unwrap();
        assert_eq!(d.max_deficit, rat(1, 5));
        assert_eq!(d.argmax, rat(2, 5));
    }

    #[test]
    fn cover_validation() {
        let bad = OpenCover1D::new((int(0), int(1)), vec![(rat(1, 5), rat(1, 2)), (rat(2, 5), rat(3, 5))]);
        assert!(matches!(bad, Err(Error::Invalid { field: "intervals", .. })));
        assert!(OpenCover1D::new((int(0), int(1)), vec![(rat(1, 2), rat(3, 2))]).is_err());
        assert!(OpenCover1D::new((int(0), int(1)), vec![(rat(1, 2), rat(1, 2))]).is_err());
        // touching components are fine
        assert!(OpenCover1D::new((int(0), int(1)), vec![(int(0), rat(1, 2)), (rat(1, 2), int(1))]).is_ok());
    }

    #[test]
    fn translated_domain() {
        let cover = OpenCover1D::new((int(2), int(3)), vec![(rat(5, 2), rat(11, 4))]).unwrap();
        let phi = build_phi_1d(&cover);
        assert_eq!(phi.eval(&int(3)).unwrap(), rat(3, 4));
        assert_eq!(identity_deficit(&phi, &cover).unwrap().max_deficit, rat(1, 4));
    }

    fn mixed() -> Measure1D<Scalar> {
        let density = StepFunction::new(vec![int(0), rat(1, 2), int(1)], vec![int(2), int(0)]).unwrap();
        Measure1D::new(vec![(rat(3, 4), rat(1, 3)), (rat(1, 4), rat(1, 6))], density).unwrap()
    }

    #[test]
    fn decompose_examples() {
        let m = mixed();
        let (ac, s) = decompose(&m);
        assert!(ac.atoms().is_empty());
        assert!(s.density().is_zero());
        assert_eq!(ac.total_mass() + s.total_mass(), m.total_mass());
        assert_eq!(m.total_mass(), rat(3, 2));

        let atoms_only = Measure1D::new(vec![(int(0), int(1))], StepFunction::zero(int(0), int(1))).unwrap();
        let (ac, s) = decompose(&atoms_only);
        assert_eq!(ac.total_mass(), int(0));
        assert_eq!(s, atoms_only);
    }

    #[test]
    fn measure_validation() {
        let z = StepFunction::zero(int(0), int(1));
        assert!(Measure1D::new(vec![(int(0), int(0))], z.clone()).is_err());
        assert!(Measure1D::new(vec![(int(0), int(1)), (int(0), int(2))], z).is_err());
        let neg = StepFunction::constant(int(0), int(1), int(-1)).unwrap();
        assert!(Measure1D::new(vec![], neg).is_err());
    }

    #[test]
    fn derivation_examples() {
        let m = mixed();
        let w = StepFunction::new(vec![int(0), rat(1, 3), int(1)], vec![int(5), int(7)]).unwrap();
        let d = Derivation1D::new(m, w);

        let id = d.apply(&Pl::identity());
        assert_eq!(id.value(&rat(1, 8)), Some(int(5)));
        assert_eq!(id.value(&rat(2, 5)), Some(int(7)));
        // density vanishes on [1/2, 1)
        assert_eq!(id.value(&rat(7, 8)), Some(int(0)));
        // atom
        assert_eq!(id.value(&rat(1, 4)), Some(int(0)));

        assert!(d.apply(&Pl::constant(int(9))).is_identically_zero());

        let t = Pl::polyline_extended(&[(int(0), int(0)), (rat(1, 5), rat(1, 10)), (int(1), int(-3))]).unwrap();
        let r = d.apply(&t);
        assert_eq!(r.value(&rat(1, 5)), None);
        assert_eq!(r.value(&rat(1, 10)), Some(rat(5, 2)));
    }

    #[test]
    fn cantor_atoms_kill_everything() {
        let atoms = cantor_atoms::<Scalar>(4);
        assert_eq!(atoms.len(), 16);
        let m = Measure1D::new(atoms, StepFunction::zero(int(0), int(1))).unwrap();
        assert_eq!(m.total_mass(), int(1));
        let d = Derivation1D::new(m, StepFunction::constant(int(0), int(1), int(3)).unwrap());
        assert!(d.apply(&Pl::identity()).is_identically_zero());
        assert!(d.apply(&crate::fixtures::tent()).is_identically_zero());
    }

    #[test]
    fn product_rule_pointwise() {
        let m = mixed();
        let w = StepFunction::constant(int(0), int(1), rat(3, 2)).unwrap();
        let d = Derivation1D::new(m, w);
        let f = Pl::polyline_extended(&[(int(0), int(1)), (rat(1, 3), int(2)), (int(1), int(0))]).unwrap();
        let g = Pl::affine(int(0), int(-1), rat(1, 2));
        let x = rat(1, 7);
        let lhs = d.apply_product_at(&f, &g, &x).unwrap();
        let rhs = f.value(&x) * d.apply_at(&g, &x).unwrap() + g.value(&x) * d.apply_at(&f, &x).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(d.apply_product_at(&f, &g, &rat(1, 3)), None);
    }

    #[test]
    fn spread_cover_length() {
        let c = spread_cover(4, rat(1, 8)).unwrap();
        assert_eq!(c.total_length(), rat(1, 8));
        assert_eq!(c.intervals().len(), 4);
        assert_eq!(union_length(vec![(int(0), int(2)), (int(1), int(3)), (int(5), int(6))]), int(4));
    }
}
