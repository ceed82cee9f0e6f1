//! JSON documents for every input and output type.
//!
//! Rationals travel as `["num", "den"]` pairs of decimal strings; readers
//! also accept a bare integer or a `"p/q"` string. Parse errors report the
//! line and column, validation errors the path of the offending field, for
//! example `$.curves[1].breakpoints`.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::SampleSet;
use crate::projections::Square;
use crate::scalar::serde_scalar;
use crate::stripes::Axis;
use crate::{Arrangement, Measure1D, OpenCover1D, PlFunction, Scalar, SquareSet, StepFunction};

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct Num(#[serde(with = "serde_scalar")] Scalar);

fn nums(xs: &[Scalar]) -> Vec<Num> {
    xs.iter().cloned().map(Num).collect()
}

fn unwrap(xs: Vec<Num>) -> Vec<Scalar> {
    xs.into_iter().map(|n| n.0).collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlDoc {
    breakpoints: Vec<Num>,
    values: Vec<Num>,
    left_slope: Num,
    right_slope: Num,
    #[serde(default)]
    domain: Option<[Num; 2]>,
}

impl PlDoc {
    fn build(self) -> Result<PlFunction> {
        let f = PlFunction::new(
            unwrap(self.breakpoints),
            unwrap(self.values),
            self.left_slope.0,
            self.right_slope.0,
        )?;
        match self.domain {
            None => Ok(f),
            Some([lo, hi]) => f
                .with_domain(lo.0, hi.0)
                .map_err(|e| Error::invalid("domain", e.to_string())),
        }
    }
}

impl From<&PlFunction> for PlDoc {
    fn from(f: &PlFunction) -> Self {
        Self {
            breakpoints: nums(f.breakpoints()),
            values: nums(f.values()),
            left_slope: Num(f.left_slope().clone()),
            right_slope: Num(f.right_slope().clone()),
            domain: f.domain().map(|(a, b)| [Num(a.clone()), Num(b.clone())]),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementDoc {
    axis: Axis,
    delta: Num,
    curves: Vec<PlDoc>,
}

impl ArrangementDoc {
    fn build(self) -> Result<Arrangement> {
        let curves = self
            .curves
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.build().map_err(|e| e.at(format!("curves[{i}]"))))
            .collect::<Result<Vec<_>>>()?;
        Arrangement::new(self.axis, self.delta.0, curves)
    }
}

impl From<&Arrangement> for ArrangementDoc {
    fn from(a: &Arrangement) -> Self {
        Self {
            axis: a.axis(),
            delta: Num(a.delta().clone()),
            curves: a.functions().iter().map(PlDoc::from).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSetDoc {
    dim: usize,
    points: Vec<Vec<Num>>,
    values: Vec<Num>,
}

impl SampleSetDoc {
    fn build(self) -> Result<SampleSet> {
        SampleSet::new(
            self.dim,
            self.points.into_iter().map(unwrap).collect(),
            unwrap(self.values),
        )
    }
}

impl From<&SampleSet> for SampleSetDoc {
    fn from(s: &SampleSet) -> Self {
        Self {
            dim: s.dim(),
            points: s.points().iter().map(|p| nums(p)).collect(),
            values: nums(s.values()),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverDoc {
    domain: [Num; 2],
    intervals: Vec<[Num; 2]>,
}

impl CoverDoc {
    fn build(self) -> Result<OpenCover1D> {
        let [a, b] = self.domain;
        OpenCover1D::new(
            (a.0, b.0),
            self.intervals.into_iter().map(|[lo, hi]| (lo.0, hi.0)).collect(),
        )
    }
}

impl From<&OpenCover1D> for CoverDoc {
    fn from(c: &OpenCover1D) -> Self {
        let (a, b) = c.domain().clone();
        Self {
            domain: [Num(a), Num(b)],
            intervals: c
                .intervals()
                .iter()
                .map(|(lo, hi)| [Num(lo.clone()), Num(hi.clone())])
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    cuts: Vec<Num>,
    values: Vec<Num>,
}

impl StepDoc {
    fn build(self) -> Result<StepFunction> {
        StepFunction::new(unwrap(self.cuts), unwrap(self.values))
    }
}

impl From<&StepFunction> for StepDoc {
    fn from(s: &StepFunction) -> Self {
        Self {
            cuts: nums(s.cuts()),
            values: nums(s.values()),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDoc {
    #[serde(default)]
    atoms: Vec<[Num; 2]>,
    density: StepDoc,
}

impl MeasureDoc {
    fn build(self) -> Result<Measure1D> {
        let density = self.density.build().map_err(|e| e.at("density"))?;
        Measure1D::new(
            self.atoms.into_iter().map(|[x, m]| (x.0, m.0)).collect(),
            density,
        )
    }
}

impl From<&Measure1D> for MeasureDoc {
    fn from(m: &Measure1D) -> Self {
        Self {
            atoms: m
                .atoms()
                .iter()
                .map(|(x, w)| [Num(x.clone()), Num(w.clone())])
                .collect(),
            density: StepDoc::from(m.density()),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SquareDoc {
    corner: [Num; 2],
    side: Num,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareSetDoc {
    #[serde(default)]
    generation: u32,
    squares: Vec<SquareDoc>,
}

impl SquareSetDoc {
    fn build(self) -> Result<SquareSet> {
        let squares = self
            .squares
            .into_iter()
            .map(|s| {
                let [x, y] = s.corner;
                Square {
                    corner: [x.0, y.0],
                    side: s.side.0,
                }
            })
            .collect();
        SquareSet::new(squares, self.generation)
    }
}

impl From<&SquareSet> for SquareSetDoc {
    fn from(s: &SquareSet) -> Self {
        Self {
            generation: s.generation,
            squares: s
                .squares
                .iter()
                .map(|q| SquareDoc {
                    corner: [Num(q.corner[0].clone()), Num(q.corner[1].clone())],
                    side: Num(q.side.clone()),
                })
                .collect(),
        }
    }
}

fn parse<D: DeserializeOwned>(text: &str) -> Result<D> {
    serde_json::from_str(text).map_err(|e| Error::Schema {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })
}

fn at_root<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| e.at("$"))
}

fn render<D: Serialize>(doc: &D) -> String {
    let pretty = serde_json::to_string_pretty(doc).expect("documents serialize");
    collapse_pairs(&pretty)
}

// puts every ["num", "den"] pair of pretty-printed output on one line
fn collapse_pairs(pretty: &str) -> String {
    let lines: Vec<&str> = pretty.lines().collect();
    fn quoted(l: &str, comma: bool) -> Option<&str> {
        let t = l.trim();
        let body = if comma { t.strip_suffix(',') } else { Some(t) };
        body.filter(|b| b.len() >= 2 && b.starts_with('"') && b.ends_with('"'))
    }
    let mut out = String::with_capacity(pretty.len());
    let mut i = 0;
    while i < lines.len() {
        if i + 3 < lines.len() && lines[i].ends_with('[') {
            if let (Some(a), Some(b)) = (quoted(lines[i + 1], true), quoted(lines[i + 2], false)) {
                let close = lines[i + 3].trim();
                if close == "]" || close == "]," {
                    out.push_str(&format!("{}{a}, {b}{close}\n", lines[i]));
                    i += 4;
                    continue;
                }
            }
        }
        out.push_str(lines[i]);
        out.push('\n');
        i += 1;
    }
    out
}

pub fn pl_from_json(text: &str) -> Result<PlFunction> {
    at_root(parse::<PlDoc>(text)?.build())
}

pub fn pl_to_json(f: &PlFunction) -> String {
    render(&PlDoc::from(f))
}

pub fn arrangement_from_json(text: &str) -> Result<Arrangement> {
    at_root(parse::<ArrangementDoc>(text)?.build())
}

pub fn arrangement_to_json(a: &Arrangement) -> String {
    render(&ArrangementDoc::from(a))
}

pub fn samples_from_json(text: &str) -> Result<SampleSet> {
    at_root(parse::<SampleSetDoc>(text)?.build())
}

pub fn samples_to_json(s: &SampleSet) -> String {
    render(&SampleSetDoc::from(s))
}

pub fn cover_from_json(text: &str) -> Result<OpenCover1D> {
    at_root(parse::<CoverDoc>(text)?.build())
}

pub fn cover_to_json(c: &OpenCover1D) -> String {
    render(&CoverDoc::from(c))
}

pub fn step_from_json(text: &str) -> Result<StepFunction> {
    at_root(parse::<StepDoc>(text)?.build())
}

pub fn step_to_json(s: &StepFunction) -> String {
    render(&StepDoc::from(s))
}

pub fn measure_from_json(text: &str) -> Result<Measure1D> {
    at_root(parse::<MeasureDoc>(text)?.build())
}

pub fn measure_to_json(m: &Measure1D) -> String {
    render(&MeasureDoc::from(m))
}

pub fn squares_from_json(text: &str) -> Result<SquareSet> {
    at_root(parse::<SquareSetDoc>(text)?.build())
}

pub fn squares_to_json(s: &SquareSet) -> String {
    render(&SquareSetDoc::from(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::{int, rat};

    #[test]
    fn pl_wire_form() {
        let f = fixtures::tent().with_domain(int(-2), int(2)).unwrap();
        let text = pl_to_json(&f);
        assert!(text.contains("\"breakpoints\""));
        assert!(text.contains("[\"-1\", \"1\"],"), "{text}");
        assert_eq!(pl_from_json(&text).unwrap(), f);
    }

    #[test]
    fn lenient_scalars() {
        let f = pl_from_json(
            r#"{"breakpoints":[0,"1/2"],"values":[["0","1"],1],"left_slope":0,"right_slope":"0","domain":null}"#,
        )
        .unwrap();
        assert_eq!(f.value(&rat(1, 4)), rat(1, 2));
    }

    #[test]
    fn diagnostics_name_the_field() {
        let e = pl_from_json(
            r#"{"breakpoints":[1,0],"values":[0,0],"left_slope":0,"right_slope":0}"#,
        )
        .unwrap_err();
        assert!(e.to_string().contains("$.breakpoints"), "{e}");
        let e = arrangement_from_json(
            r#"{"axis":1,"delta":1,"curves":[
                {"breakpoints":[0],"values":[0],"left_slope":0,"right_slope":0},
                {"breakpoints":[0,1],"values":[0],"left_slope":0,"right_slope":0}]}"#,
        )
        .unwrap_err();
        assert!(e.to_string().contains("$.curves[1].values"), "{e}");
        let e = arrangement_from_json(r#"{"axis":3,"delta":1,"curves":[]}"#).unwrap_err();
        assert!(e.to_string().contains("line 1"), "{e}");
        let e = arrangement_from_json(r#"{"axis":1,"delta":["1","0"],"curves":[]}"#).unwrap_err();
        assert!(e.to_string().contains("denominator"), "{e}");
    }

    #[test]
    fn round_trips() {
        let a = fixtures::disjoint_pair_arrangement().unwrap();
        assert_eq!(arrangement_from_json(&arrangement_to_json(&a)).unwrap(), a);
        let c = OpenCover1D::new((int(0), int(1)), vec![(rat(2, 5), rat(3, 5))]).unwrap();
        assert_eq!(cover_from_json(&cover_to_json(&c)).unwrap(), c);
        let m = Measure1D::new(
            vec![(rat(1, 3), int(2))],
            StepFunction::constant(int(0), int(1), int(1)).unwrap(),
        )
        .unwrap();
        assert_eq!(measure_from_json(&measure_to_json(&m)).unwrap(), m);
        let s = SampleSet::new(2, vec![vec![int(0), int(0)], vec![int(1), rat(1, 2)]], vec![int(0), int(1)]).unwrap();
        assert_eq!(samples_from_json(&samples_to_json(&s)).unwrap(), s);
        let q = crate::projections::four_corner::<Scalar>(1).unwrap();
        assert_eq!(squares_from_json(&squares_to_json(&q)).unwrap(), q);
    }

    #[test]
    fn measure_density_errors_are_located() {
        let e = measure_from_json(r#"{"atoms":[],"density":{"cuts":[0,1],"values":[1,2]}}"#).unwrap_err();
        assert!(e.to_string().contains("$.density.values"), "{e}");
    }
}
