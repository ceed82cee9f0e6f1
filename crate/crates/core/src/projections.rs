//! Projections of planar square unions onto rational directions.
//!
//! The main test set is the four-corner Cantor set: its generation-`n`
//! approximation is `4^n` squares of side `4^-n`. Projecting onto the
//! functional `(x, y) -> p x + q y` maps every square to an interval with
//! rational end points, so the projected length is an exact rational.

use std::fmt::Write as _;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::null1d::union_length;
use crate::scalar::{max_of, min_of, Field};

/// Deepest supported generation (about a million squares).
pub const MAX_DEPTH: u32 = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Square<T> {
    pub corner: [T; 2],
    pub side: T,
}

/// Finite union of axis-aligned squares.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareSet<T> {
    pub squares: Vec<Square<T>>,
    pub generation: u32,
}

impl<T: Field> SquareSet<T> {
    pub fn new(squares: Vec<Square<T>>, generation: u32) -> Result<Self> {
        if squares.iter().any(|s| !s.side.is_positive()) {
            return Err(Error::invalid("squares", "side lengths must be positive"));
        }
        Ok(Self {
            squares,
            generation,
        })
    }

    pub fn unit() -> Self {
        Self {
            squares: vec![Square {
                corner: [T::zero(), T::zero()],
                side: T::one(),
            }],
            generation: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    /// Replaces every square by its four corner subsquares of a quarter side.
    pub fn refine_corners(&self) -> Self {
        let squares = self
            .squares
            .iter()
            .flat_map(|s| {
                let q = s.side.clone() / T::from_int(4);
                let far = s.side.clone() - q.clone();
                let [x, y] = s.corner.clone();
                [
                    (T::zero(), T::zero()),
                    (far.clone(), T::zero()),
                    (T::zero(), far.clone()),
                    (far.clone(), far),
                ]
                .into_iter()
                .map(move |(dx, dy)| Square {
                    corner: [x.clone() + dx, y.clone() + dy],
                    side: q.clone(),
                })
            })
            .collect();
        Self {
            squares,
            generation: self.generation + 1,
        }
    }
}

/// Generation `depth` of the four-corner Cantor set in `[0, 1]^2`.
pub fn four_corner<T: Field>(depth: u32) -> Result<SquareSet<T>> {
    if depth > MAX_DEPTH {
        return Err(Error::Budget(format!(
            "depth {depth} exceeds the cap of {MAX_DEPTH} (4^{MAX_DEPTH} squares)"
        )));
    }
    Ok((0..depth).fold(SquareSet::unit(), |s, _| s.refine_corners()))
}

/// Primitive integer direction `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    p: i64,
    q: i64,
}

impl Direction {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::invalid("direction", "zero vector"));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::invalid(
                "direction",
                format!("({p}, {q}) is not primitive"),
            ));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn norm(&self) -> f64 {
        (self.p as f64).hypot(self.q as f64)
    }

    /// Parses `"p,q"`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::invalid("direction", format!("expected `p,q`, got `{s}`"));
        let (p, q) = s.split_once(',').ok_or_else(bad)?;
        let p = p.trim().parse().map_err(|_| bad())?;
        let q = q.trim().parse().map_err(|_| bad())?;
        Self::new(p, q)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionLength<T> {
    /// Length of the image under `(x, y) -> p x + q y`.
    pub exact: T,
    /// `exact / sqrt(p^2 + q^2)`, the length of the orthogonal projection.
    pub normalized: f64,
}

fn functional<T: Field>(d: Direction, x: &T, y: &T) -> T {
    T::from_int(d.p) * x.clone() + T::from_int(d.q) * y.clone()
}

/// Image of one square under the direction functional.
pub fn project_square<T: Field>(s: &Square<T>, d: Direction) -> (T, T) {
    let base = functional(d, &s.corner[0], &s.corner[1]);
    let (p, q) = (T::from_int(d.p), T::from_int(d.q));
    let lo = min_of(p.clone(), T::zero()) + min_of(q.clone(), T::zero());
    let hi = max_of(p, T::zero()) + max_of(q, T::zero());
    (
        base.clone() + s.side.clone() * lo,
        base + s.side.clone() * hi,
    )
}

pub fn project_length<T: Field>(s: &SquareSet<T>, d: Direction) -> ProjectionLength<T> {
    let exact = union_length(s.squares.iter().map(|sq| project_square(sq, d)).collect());
    let normalized = exact.to_f64_lossy() / d.norm();
    ProjectionLength { exact, normalized }
}

/// Rectifiable control: a segment.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment<T> {
    pub a: [T; 2],
    pub b: [T; 2],
}

impl<T: Field> Segment<T> {
    pub fn diagonal() -> Self {
        Self {
            a: [T::zero(), T::zero()],
            b: [T::one(), T::one()],
        }
    }

    pub fn project_length(&self, d: Direction) -> ProjectionLength<T> {
        let exact = (functional(d, &self.b[0], &self.b[1]) - functional(d, &self.a[0], &self.a[1])).abs();
        let normalized = exact.to_f64_lossy() / d.norm();
        ProjectionLength { exact, normalized }
    }
}

/// One cell of a projection report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow<T> {
    /// `"four-corner"` or `"control-diagonal"`.
    pub set: &'static str,
    pub depth: Option<u32>,
    pub direction: Direction,
    pub length: ProjectionLength<T>,
}

/// Projected lengths of the four-corner generations in `depths` for every
/// direction, followed by the diagonal control segment. Rows are sorted by
/// (set, direction, depth).
pub fn projection_report<T: Field>(depths: &[u32], directions: &[Direction]) -> Result<Vec<ReportRow<T>>> {
    let mut depths = depths.to_vec();
    depths.sort_unstable();
    depths.dedup();
    let mut rows = Vec::new();
    let mut sets: Vec<(u32, SquareSet<T>)> = Vec::new();
    for &n in &depths {
        if n > MAX_DEPTH {
            return Err(Error::Budget(format!("depth {n} exceeds {MAX_DEPTH}")));
        }
        let s = match sets.last() {
            Some((m, prev)) => (*m..n).fold(prev.clone(), |s, _| s.refine_corners()),
            None => four_corner(n)?,
        };
        sets.push((n, s));
    }
    for &d in directions {
        for (n, s) in &sets {
            rows.push(ReportRow {
                set: "four-corner",
                depth: Some(*n),
                direction: d,
                length: project_length(s, d),
            });
        }
    }
    let control = Segment::<T>::diagonal();
    for &d in directions {
        rows.push(ReportRow {
            set: "control-diagonal",
            depth: None,
            direction: d,
            length: control.project_length(d),
        });
    }
    Ok(rows)
}

/// Whether, for every direction, the four-corner lengths never increase with
/// depth. Returns the first offending (direction, depth) otherwise.
pub fn check_monotone<T: Field>(rows: &[ReportRow<T>]) -> std::result::Result<(), (Direction, u32)> {
    let mut prev: Option<(Direction, &T)> = None;
    for r in rows.iter().filter(|r| r.set == "four-corner") {
        if let Some((d, len)) = prev {
            if d == r.direction && &r.length.exact > len {
                return Err((d, r.depth.unwrap_or(0)));
            }
        }
        prev = Some((r.direction, &r.length.exact));
    }
    Ok(())
}

/// CSV with a `set,depth,p,q,exact,normalized` header.
pub fn report_csv(rows: &[ReportRow<crate::Scalar>]) -> String {
    let mut out = String::from("set,depth,p,q,exact,normalized\n");
    for r in rows {
        let depth = r.depth.map(|d| d.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.12}",
            r.set,
            depth,
            r.direction.p,
            r.direction.q,
            crate::scalar::fmt_scalar(&r.length.exact),
            r.length.normalized
        );
    }
    out
}

/// The six directions used by the bundled report.
pub fn bundled_directions() -> Vec<Direction> {
    [(1, 0), (0, 1), (1, 1), (1, 2), (2, 1), (1, 3)]
        .into_iter()
        .map(|(p, q)| Direction::new(p, q).expect("primitive"))
        .collect()
}
