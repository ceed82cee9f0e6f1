//! Seeded verification campaigns, one per acceptance criterion.
//!
//! Every campaign draws from its own ChaCha8 stream derived from the run seed
//! and the criterion number, so results do not depend on which campaigns run
//! or in which order. Failures carry a JSON witness holding the offending
//! instance and point.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::coord_approx::{interval_inequality, CoordApproximator};
use crate::error::{Error, Result};
use crate::extension::{McShane, SampleSet};
use crate::fixtures;
use crate::gen::{self, GRID};
use crate::io::{ArrangementDoc, CoverDoc, PlDoc, SampleSetDoc};
use crate::null1d::{build_phi_1d, cantor_atoms, identity_deficit, Derivation1D};
use crate::projections::{
    bundled_directions, check_monotone, four_corner, project_length, projection_report, Direction, Segment,
};
use crate::scalar::{cmp, dyadic, fmt_scalar, from_f64, int, rat, Field, Scalar};
use crate::stripes::{disjointify, uncross, Arrangement, Axis, Curve};
use crate::{Measure1D, OpenCover1D, PlFunction, StepFunction};

/// Tolerance for floating-point checks in dimension above one.
pub const FLOAT_TOL: f64 = 1e-12;

/// Criterion numbers with their short names.
pub const CRITERIA: [(u8, &str); 12] = [
    (1, "uncross sorts values"),
    (2, "uncross keeps slopes in [-1, 1]"),
    (3, "disjointify separation"),
    (4, "disjointify inclusion"),
    (5, "phi is 3-Lipschitz"),
    (6, "phi approximates the coordinate"),
    (7, "phi is univariate on stripes"),
    (8, "interval inequality"),
    (9, "1-D approximate identity"),
    (10, "McShane extension"),
    (11, "derivation model"),
    (12, "four-corner projections"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Counts and measured extremes, one line.
    pub detail: String,
    /// Reproducible counterexample, present exactly when the check failed.
    pub witness: Option<Value>,
}

impl Outcome {
    /// `PASS  5 phi is 3-Lipschitz: ...`
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

/// Random stream for one criterion.
pub fn stream(seed: u64, id: u8) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id as u64);
    rng
}

/// Runs one criterion.
pub fn run(id: u8, seed: u64) -> Result<Outcome> {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .ok_or_else(|| Error::invalid("criterion", format!("no criterion {id}; expected 1..=12")))?;
    let mut rng = stream(seed, id);
    let rng = &mut rng;
    let (detail, witness) = match id {
        1 => uncross_sort(rng)?,
        2 => uncross_slopes(rng)?,
        3 => disjointify_separation(rng)?,
        4 => disjointify_inclusion(rng)?,
        5 => phi_lipschitz(rng)?,
        6 => phi_approximation(rng)?,
        7 => phi_univariate(rng)?,
        8 => interval_quadruples(rng)?,
        9 => approximate_identity(rng)?,
        10 => mcshane(rng)?,
        11 => derivation(rng)?,
        _ => projections()?,
    };
    let witness = witness.map(|mut w| {
        w["criterion"] = json!(id);
        w["seed"] = json!(seed);
        w
    });
    Ok(Outcome {
        id,
        name,
        passed: witness.is_none(),
        detail,
        witness,
    })
}

/// Runs the given criteria on up to `threads` worker threads and returns the
/// outcomes in criterion order.
pub fn run_many(ids: &[u8], seed: u64, threads: usize) -> Result<Vec<Outcome>> {
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(ids.len()));
    std::thread::scope(|scope| {
        for _ in 0..threads.clamp(1, ids.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(&id) = ids.get(i) else { break };
                let r = run(id, seed);
                results.lock().expect("no panics while locked").push((i, r));
            });
        }
    });
    let mut results = results.into_inner().expect("workers finished");
    results.sort_by_key(|(i, _)| *i);
    results.into_iter().map(|(_, r)| r).collect()
}

pub fn run_all(seed: u64, threads: usize) -> Result<Vec<Outcome>> {
    let ids: Vec<u8> = CRITERIA.iter().map(|(i, _)| *i).collect();
    run_many(&ids, seed, threads)
}

/// Plain-text report: a seed header and one line per outcome.
pub fn report(seed: u64, outcomes: &[Outcome]) -> String {
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let mut s = format!("# stripecover verify seed={seed}\n");
    for o in outcomes {
        s.push_str(&o.line());
        s.push('\n');
    }
    s.push_str(&format!("# {passed}/{} criteria passed\n", outcomes.len()));
    s
}

type Campaign = Result<(String, Option<Value>)>;

fn point(p: &[Scalar]) -> String {
    p.iter().map(fmt_scalar).collect::<Vec<_>>().join(",")
}

fn doc<D: serde::Serialize>(d: D) -> Value {
    serde_json::to_value(d).expect("documents serialize")
}

fn arrangement_value(a: &Arrangement<Scalar>) -> Value {
    doc(ArrangementDoc::from(a))
}

fn curves_value(axis: Axis, delta: &Scalar, curves: &[Curve<Scalar>]) -> Value {
    let fs = curves.iter().map(|c| c.function().clone()).collect();
    // the witness keeps whatever came in, even if it would not validate
    match Arrangement::new(axis, delta.clone(), fs) {
        Ok(a) => arrangement_value(&a),
        Err(_) => json!({
            "axis": u8::from(axis),
            "delta": [delta.numer().to_string(), delta.denom().to_string()],
            "curves": curves.iter().map(|c| doc(PlDoc::from(c.function()))).collect::<Vec<_>>(),
        }),
    }
}

fn sorted(mut v: Vec<Scalar>) -> Vec<Scalar> {
    v.sort_by(cmp);
    v
}

// abscissae reach a quarter past [0, 1] on both sides to exercise the
// extension slopes
fn abscissa<R: Rng>(rng: &mut R) -> Scalar {
    gen::grid_point(rng, -GRID / 4, GRID + GRID / 4, GRID)
}

fn uncross_sort<R: Rng>(rng: &mut R) -> Campaign {
    let (instances, per) = (200, 100);
    for k in 0..instances {
        let n = rng.gen_range(1..=8);
        let curves = gen::curve_family(rng, Axis::X1, n, 12);
        let out = uncross(&curves)?;
        for _ in 0..per {
            let x = abscissa(rng);
            let before = sorted(curves.iter().map(|c| c.function().value(&x)).collect());
            let after: Vec<Scalar> = out.iter().map(|c| c.function().value(&x)).collect();
            if before != after {
                let w = json!({"instance": k, "input": curves_value(Axis::X1, &int(1), &curves), "x": fmt_scalar(&x)});
                return Ok((format!("instance {k}: values differ at x = {}", fmt_scalar(&x)), Some(w)));
            }
        }
        if let Some(j) = out.windows(2).position(|w| !w[0].function().le_everywhere(w[1].function())) {
            let w = json!({"instance": k, "input": curves_value(Axis::X1, &int(1), &curves), "pair": j});
            return Ok((format!("instance {k}: outputs {j} and {} not ordered", j + 1), Some(w)));
        }
    }
    Ok((
        format!("{instances} instances, {} abscissae, outputs ordered, 0 failures", instances * per),
        None,
    ))
}

fn uncross_slopes<R: Rng>(rng: &mut R) -> Campaign {
    let instances = 200;
    let mut pieces = 0usize;
    for k in 0..instances {
        let n = rng.gen_range(1..=8);
        let curves = gen::curve_family(rng, Axis::X1, n, 12);
        for (j, c) in uncross(&curves)?.iter().enumerate() {
            let f = c.function();
            pieces += f.slopes().count();
            if let Some(s) = f.slopes().find(|s| s.abs() > int(1)) {
                let w = json!({"instance": k, "input": curves_value(Axis::X1, &int(1), &curves), "output": j});
                return Ok((format!("instance {k}: output {j} has slope {}", fmt_scalar(s)), Some(w)));
            }
        }
    }
    Ok((format!("{instances} instances, {pieces} pieces, all |slope| <= 1"), None))
}

fn disjointify_separation<R: Rng>(rng: &mut R) -> Campaign {
    let instances = 100;
    for k in 0..instances {
        let n = rng.gen_range(2..=8);
        let curves = gen::ordered_family(rng, n, 12)?;
        let delta = gen::thickness(rng);
        let out = disjointify(&curves, &delta)?;
        if let Some(j) = out
            .windows(2)
            .position(|w| !w[0].function().below_by(w[1].function(), &delta))
        {
            let w = json!({"instance": k, "input": curves_value(Axis::X1, &delta, &curves), "pair": j});
            return Ok((format!("instance {k}: h_{} - h_{} < delta somewhere", j + 2, j + 1), Some(w)));
        }
    }
    Ok((format!("{instances} ordered instances, 0 failures"), None))
}

fn disjointify_inclusion<R: Rng>(rng: &mut R) -> Campaign {
    let (instances, per) = (100, 100);
    for k in 0..instances {
        let n = rng.gen_range(1..=8);
        let curves = gen::ordered_family(rng, n, 12)?;
        let delta = gen::thickness(rng);
        let out = disjointify(&curves, &delta)?;
        let outputs = Arrangement::from_curves(out, delta.clone())?;
        for _ in 0..per {
            let l = rng.gen_range(0..n);
            let t = abscissa(rng);
            let centre = curves[l].function().value(&t);
            let y = centre + delta.clone() * gen::grid_point(rng, -GRID / 2, GRID / 2, GRID);
            let p = [t, y];
            if !outputs.contains(&p) {
                let w = json!({"instance": k, "input": curves_value(Axis::X1, &delta, &curves), "point": point(&p)});
                return Ok((format!("instance {k}: ({}) left uncovered", point(&p)), Some(w)));
            }
        }
    }
    Ok((format!("{} points in {instances} instances, all covered", instances * per), None))
}

const ARRANGEMENTS: usize = 50;

// alternates x1- and x2-arrangements above the baseline 0 on the window [0, 1]
fn approximators<R: Rng>(rng: &mut R) -> Result<Vec<CoordApproximator<Scalar>>> {
    (0..ARRANGEMENTS)
        .map(|k| {
            let axis = if k % 2 == 0 { Axis::X1 } else { Axis::X2 };
            let n = rng.gen_range(1..=8);
            let arr = gen::disjoint_arrangement(rng, axis, n, 12, &int(0))?;
            CoordApproximator::with_baseline(arr, int(0), (int(0), int(1)))
        })
        .collect()
}

fn phi_lipschitz<R: Rng>(rng: &mut R) -> Campaign {
    let total = 100_000;
    let per = total / ARRANGEMENTS;
    let mut max_ratio = int(0);
    let mut cases = [0usize; 4];
    for (k, a) in approximators(rng)?.iter().enumerate() {
        let r = a.verify_three_lipschitz(rng, per)?;
        for (c, n) in cases.iter_mut().zip(r.per_case) {
            *c += n;
        }
        if let Some((p, q)) = r.violations.first() {
            let w = json!({
                "arrangement_index": k,
                "arrangement": arrangement_value(a.arrangement()),
                "p": point(p),
                "q": point(q),
            });
            return Ok((format!("arrangement {k}: |dphi| > 3 |p - q|"), Some(w)));
        }
        if r.max_ratio > max_ratio {
            max_ratio = r.max_ratio;
        }
    }
    Ok((
        format!(
            "{ARRANGEMENTS} arrangements, {} pairs (line/stripe/gap/any {}/{}/{}/{}), max |dphi|/|p-q|_1 = {}",
            cases.iter().sum::<usize>(),
            cases[0],
            cases[1],
            cases[2],
            cases[3],
            fmt_scalar(&max_ratio)
        ),
        None,
    ))
}

fn phi_approximation<R: Rng>(rng: &mut R) -> Campaign {
    let per = 10_000;
    let mut worst = int(0);
    for (k, a) in approximators(rng)?.iter().enumerate() {
        let pts: Vec<_> = (0..per).map(|_| a.sample_point(rng)).collect();
        let r = a.verify_approximation(&pts);
        if let Some((p, d)) = r.violations.first() {
            let w = json!({
                "arrangement_index": k,
                "arrangement": arrangement_value(a.arrangement()),
                "point": point(p),
                "deficit": fmt_scalar(d),
            });
            return Ok((format!("arrangement {k}: deficit {} outside [0, N delta]", fmt_scalar(d)), Some(w)));
        }
        let ratio = r.max_deficit / r.bound;
        if ratio > worst {
            worst = ratio;
        }
    }
    let mut sups = Vec::new();
    for j in 1..=10u32 {
        let arr = fixtures::approximation_arrangement(j)?;
        let a = CoordApproximator::with_baseline(arr, int(0), (int(0), int(1)))?;
        let mut pts: Vec<_> = (0..1000).map(|_| a.sample_point(rng)).collect();
        // above every stripe the whole thickness has been skipped
        pts.push([rat(1, 2), int(2)]);
        let r = a.verify_approximation(&pts);
        if !r.passed() || r.max_deficit > dyadic(j) {
            let w = json!({
                "sequence_index": j,
                "arrangement": arrangement_value(a.arrangement()),
                "point": r.witness.as_ref().map(|p| point(p)),
                "deficit": fmt_scalar(&r.max_deficit),
            });
            return Ok((format!("sequence j = {j}: sup deficit {} > 2^-{j}", fmt_scalar(&r.max_deficit)), Some(w)));
        }
        sups.push(fmt_scalar(&r.max_deficit));
    }
    Ok((
        format!(
            "{ARRANGEMENTS} x {per} points, max deficit / (N delta) = {}; sequence sup deficits {}",
            fmt_scalar(&worst),
            sups.join(" ")
        ),
        None,
    ))
}

fn phi_univariate<R: Rng>(rng: &mut R) -> Campaign {
    let per = 100;
    let mut stripes = 0;
    for (k, a) in approximators(rng)?.iter().enumerate() {
        let r = a.verify_stripe_univariate(rng, per);
        let arr = a.arrangement();
        let half = arr.delta().clone() / int(2);
        let fail = |msg: String, l: usize, p: Option<&[Scalar; 2]>| -> Campaign {
            let w = json!({
                "arrangement_index": k,
                "arrangement": arrangement_value(arr),
                "stripe": l,
                "point": p.map(|p| point(p)),
            });
            Ok((msg, Some(w)))
        };
        if let Some((l, p)) = r.failures.first() {
            return fail(format!("arrangement {k}: phi varies on stripe {l}"), *l, Some(p));
        }
        for (l, c) in r.constants.iter().enumerate() {
            // phi at the bottom of stripe l is the free length below it
            let expected = -a.baseline().clone() - half.clone() - arr.delta().clone() * int(l as i64);
            if c.as_ref() != Some(&expected) {
                return fail(format!("arrangement {k}: stripe {l} constant differs from the oracle"), l, None);
            }
        }
        stripes += arr.len();
    }
    Ok((
        format!("{stripes} stripes in {ARRANGEMENTS} arrangements, {per} points each, constants match"),
        None,
    ))
}

fn interval_quadruples<R: Rng>(rng: &mut R) -> Campaign {
    let total = 1_000_000;
    let draw = |rng: &mut R| rat(rng.gen_range(-1000..=1000), rng.gen_range(1..=64));
    for i in 0..total {
        let (a, b, c, d) = (draw(rng), draw(rng), draw(rng), draw(rng));
        let (p2, p2p) = if a <= b { (a, b) } else { (b, a) };
        let (q2p, q2) = if c <= d { (c, d) } else { (d, c) };
        if !interval_inequality(&p2, &p2p, &q2, &q2p)? {
            let w = json!({"index": i, "p2": fmt_scalar(&p2), "p2'": fmt_scalar(&p2p), "q2": fmt_scalar(&q2), "q2'": fmt_scalar(&q2p)});
            return Ok((format!("quadruple {i} violates the inequality"), Some(w)));
        }
    }
    Ok((format!("{total} quadruples, 0 failures"), None))
}

// k disjoint open intervals of total length `len` at random places in [0, 1]
fn random_cover<R: Rng>(rng: &mut R, len: &Scalar) -> Result<OpenCover1D> {
    let k = rng.gen_range(1..=8usize);
    let parts = |rng: &mut R, total: Scalar, n: usize, positive: bool| -> Vec<Scalar> {
        let lo = if positive { 1 } else { 0 };
        let w: Vec<i64> = (0..n).map(|_| rng.gen_range(lo..=16)).collect();
        let sum: i64 = w.iter().sum::<i64>().max(1);
        w.into_iter().map(|x| total.clone() * rat(x, sum)).collect()
    };
    let lengths = parts(rng, len.clone(), k, true);
    let gaps = parts(rng, int(1) - len.clone(), k + 1, false);
    let mut x = int(0);
    let mut intervals = Vec::with_capacity(k);
    for (g, l) in gaps.iter().zip(&lengths) {
        x += g;
        intervals.push((x.clone(), x.clone() + l));
        x += l;
    }
    OpenCover1D::new((int(0), int(1)), intervals)
}

fn approximate_identity<R: Rng>(rng: &mut R) -> Campaign {
    let mut deficits = Vec::new();
    for j in 1..=12u32 {
        let len = dyadic(j);
        let cover = random_cover(rng, &len)?;
        let phi = build_phi_1d(&cover);
        let r = identity_deficit(&phi, &cover)?;
        let witness = |msg: String| -> Campaign {
            let w = json!({"j": j, "cover": doc(CoverDoc::from(&cover))});
            Ok((msg, Some(w)))
        };
        if r.max_deficit.is_negative() || r.max_deficit > len {
            return witness(format!("j = {j}: deficit {} outside [0, 2^-{j}]", fmt_scalar(&r.max_deficit)));
        }
        // oracle: at the right end the deficit is the whole cover length
        let end = int(1) - phi.value(&int(1));
        if end != cover.total_length() || r.max_deficit != end {
            return witness(format!("j = {j}: deficit at 1 is {} but the cover has length {}", fmt_scalar(&end), fmt_scalar(&len)));
        }
        for (lo, hi) in cover.intervals() {
            let mid = (lo.clone() + hi.clone()) / int(2);
            if phi.value(lo) != phi.value(hi) || phi.value(&mid) != phi.value(lo) {
                return witness(format!("j = {j}: phi not constant on ({}, {})", fmt_scalar(lo), fmt_scalar(hi)));
            }
        }
        deficits.push(fmt_scalar(&r.max_deficit));
    }
    Ok((format!("j = 1..12, max deficits {}", deficits.join(" ")), None))
}

fn sample_set<R: Rng>(rng: &mut R, dim: usize) -> Result<SampleSet> {
    let k = rng.gen_range(2..=10);
    let mut points: Vec<Vec<Scalar>> = Vec::with_capacity(k);
    while points.len() < k {
        let p: Vec<Scalar> = (0..dim).map(|_| gen::grid_point(rng, -64, 64, 16)).collect();
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let values = (0..k).map(|_| gen::grid_point(rng, -64, 64, 16)).collect();
    SampleSet::new(dim, points, values)
}

fn query<R: Rng>(rng: &mut R, dim: usize) -> Vec<Scalar> {
    (0..dim).map(|_| gen::grid_point(rng, -96, 96, 16)).collect()
}

fn distance(a: &[Scalar], b: &[Scalar]) -> f64 {
    crate::extension::squared_distance(a, b).to_f64_lossy().sqrt()
}

fn mcshane<R: Rng>(rng: &mut R) -> Campaign {
    let (sets, pairs) = (40, 10_000);
    let per = pairs / sets;
    let mut worst = 0.0f64;
    for k in 0..sets {
        let dim = if k % 2 == 0 { 1 } else { 2 };
        let samples = sample_set(rng, dim)?;
        let witness = |msg: String, extra: Value| -> Campaign {
            let w = json!({"set": k, "samples": doc(SampleSetDoc::from(&samples)), "detail": extra});
            Ok((msg, Some(w)))
        };
        let bump = gen::grid_point(rng, 0, 8, 4);
        let lip = match samples.lipschitz_exact() {
            Some(l) => l + bump,
            None => from_f64(samples.lipschitz()).expect("finite constant") + bump + rat(1, 1_000_000),
        };
        let plain = McShane::new(samples.clone(), lip.clone())?;
        let bounded = McShane::bounded(samples.clone());
        for ext in [&plain, &bounded] {
            for (a, v) in samples.points().iter().zip(samples.values()) {
                let agrees = if dim == 1 {
                    ext.eval_exact(&a[0]).as_ref() == Some(v)
                } else {
                    (ext.eval_point(a)? - v.to_f64_lossy()).abs() <= FLOAT_TOL
                };
                if !agrees {
                    return witness(format!("set {k}: extension misses the sample at ({})", point(a)), json!(point(a)));
                }
            }
        }
        let m = samples.sup_norm();
        let mf = m.to_f64_lossy();
        for _ in 0..per {
            let (x, y) = (query(rng, dim), query(rng, dim));
            for ext in [&plain, &bounded] {
                let l = ext.lipschitz();
                let ok = if dim == 1 {
                    let (fx, fy) = (ext.eval_exact(&x[0]).unwrap(), ext.eval_exact(&y[0]).unwrap());
                    (fx - fy).abs() <= l.clone() * (x[0].clone() - y[0].clone()).abs()
                } else {
                    let gap = (ext.eval_point(&x)? - ext.eval_point(&y)?).abs();
                    let allowed = l.to_f64_lossy() * distance(&x, &y);
                    worst = worst.max(gap - allowed);
                    gap <= allowed + FLOAT_TOL
                };
                if !ok {
                    return witness(format!("set {k}: Lipschitz bound fails"), json!({"x": point(&x), "y": point(&y)}));
                }
            }
            if bounded.eval_point(&x)?.abs() > mf + FLOAT_TOL {
                return witness(format!("set {k}: bounded extension exceeds the sup norm"), json!(point(&x)));
            }
        }
        let e = &samples.points()[samples.extremal()];
        if (bounded.eval_point(e)?.abs() - mf).abs() > FLOAT_TOL {
            return witness(format!("set {k}: sup norm not attained at the extremal sample"), json!(point(e)));
        }
    }
    Ok((
        format!(
            "{sets} sample sets (R^1 exact, R^2 float), {} query pairs, worst float excess {worst:.1e}",
            sets * per
        ),
        None,
    ))
}

fn step<R: Rng>(rng: &mut R, den: i64, lo: i64, hi: i64) -> StepFunction {
    let cuts: Vec<Scalar> = (0..=den).map(|i| rat(i, den)).collect();
    let values = (0..den).map(|_| int(rng.gen_range(lo..=hi))).collect();
    StepFunction::new(cuts, values).expect("uniform cuts")
}

// PL function with breakpoints on the 1/256 grid and arbitrary slopes
fn pl<R: Rng>(rng: &mut R) -> PlFunction {
    let f = gen::lipschitz_function(rng, 6);
    f.scale(&int(rng.gen_range(-3..=3)))
        .shift(&gen::grid_point(rng, -8, 8, 4))
}

// abscissa in (0, 1) off the 1/256 grid, hence never a breakpoint
fn off_grid<R: Rng>(rng: &mut R) -> Scalar {
    rat(rng.gen_range(1..257), 257)
}

fn derivation<R: Rng>(rng: &mut R) -> Campaign {
    let (cases, per) = (20, 100);
    for k in 0..cases {
        let density = step(rng, 8, 0, 3);
        let weight = step(rng, 16, -4, 4);
        let atoms = vec![(rat(1, 3), int(1)), (rat(2, 3), rat(1, 2))];
        let measure = Measure1D::new(atoms, density.clone())?;
        let d = Derivation1D::new(measure, weight.clone());
        let (f, g) = (pl(rng), pl(rng));
        let (a, b) = (gen::grid_point(rng, -8, 8, 4), gen::grid_point(rng, -8, 8, 4));
        let combo = f.scale(&a).add(&g.scale(&b))?;
        let df = d.apply(&f);
        let witness = |msg: String, x: &Scalar| -> Campaign {
            let w = json!({
                "case": k,
                "f": doc(PlDoc::from(&f)),
                "g": doc(PlDoc::from(&g)),
                "x": fmt_scalar(x),
            });
            Ok((msg, Some(w)))
        };
        for _ in 0..per {
            let x = off_grid(rng);
            let (fx, gx) = (d.apply_at(&f, &x), d.apply_at(&g, &x));
            let (Some(fx), Some(gx)) = (fx, gx) else {
                return witness(format!("case {k}: derivation undefined off the breakpoints"), &x);
            };
            if d.apply_at(&combo, &x) != Some(a.clone() * fx.clone() + b.clone() * gx.clone()) {
                return witness(format!("case {k}: linearity fails"), &x);
            }
            let leibniz = f.value(&x) * gx.clone() + g.value(&x) * fx.clone();
            if d.apply_product_at(&f, &g, &x) != Some(leibniz) {
                return witness(format!("case {k}: Leibniz rule fails"), &x);
            }
            // oracle: weight times the difference quotient inside the piece
            let h = rat(1, 257 * 1024);
            let slope = (f.value(&(x.clone() + h.clone())) - f.value(&(x.clone() - h.clone()))) / (h * int(2));
            let expected = if density.value(&x) == Some(int(0)) {
                int(0)
            } else {
                weight.value(&x).unwrap() * slope
            };
            if df.value(&x) != Some(expected) {
                return witness(format!("case {k}: result differs from weight * f'"), &x);
            }
        }
        if !d.apply(&PlFunction::constant(a.clone())).is_identically_zero() {
            return witness(format!("case {k}: nonzero on a constant"), &a);
        }
    }
    for level in 0..=6 {
        let m = Measure1D::new(cantor_atoms(level), StepFunction::zero(int(0), int(1)))?;
        let d = Derivation1D::new(m, StepFunction::constant(int(0), int(1), int(1))?);
        for _ in 0..10 {
            let f = pl(rng);
            if !d.apply(&f).is_identically_zero() {
                let w = json!({"cantor_level": level, "f": doc(PlDoc::from(&f))});
                return Ok((format!("Cantor level {level}: derivation not identically zero"), Some(w)));
            }
        }
    }
    Ok((
        format!("{cases} measures x {per} abscissae linear and Leibniz, atom-only measures give 0 at levels 0..6"),
        None,
    ))
}

fn projections() -> Campaign {
    let east = Direction::new(1, 0)?;
    let mut lengths = Vec::new();
    for n in 0..=6u32 {
        let s = four_corner::<Scalar>(n)?;
        let exact = project_length(&s, east).exact;
        // oracle: distinct x-corners each contribute one disjoint side length
        let mut xs: Vec<Scalar> = s.squares.iter().map(|q| q.corner[0].clone()).collect();
        xs.sort_by(cmp);
        xs.dedup();
        let side = s.squares[0].side.clone();
        let oracle = int(xs.len() as i64) * side;
        if exact != dyadic(n) || exact != oracle {
            let w = json!({"depth": n, "exact": fmt_scalar(&exact), "oracle": fmt_scalar(&oracle)});
            return Ok((format!("depth {n}: length {} is not 2^-{n}", fmt_scalar(&exact)), Some(w)));
        }
        lengths.push(fmt_scalar(&exact));
    }
    let dirs = bundled_directions();
    let rows = projection_report::<Scalar>(&(1..=6).collect::<Vec<_>>(), &dirs)?;
    if let Err((d, n)) = check_monotone(&rows) {
        let w = json!({"direction": [d.p(), d.q()], "depth": n});
        return Ok((format!("direction ({}, {}) grows at depth {n}", d.p(), d.q()), Some(w)));
    }
    let control = Segment::<Scalar>::diagonal();
    let mut swept = 0;
    for p in -8i64..=8 {
        for q in -8i64..=8 {
            let Ok(d) = Direction::new(p, q) else { continue };
            swept += 1;
            if control.project_length(d).exact.is_zero() != (p + q == 0) {
                let w = json!({"direction": [p, q]});
                return Ok((format!("control segment misbehaves at ({p}, {q})"), Some(w)));
            }
        }
    }
    Ok((
        format!(
            "(1,0) lengths {} at depths 0..6; {} directions monotone over depths 1..6; control zero only at (1,-1) among {swept} directions",
            lengths.join(" "),
            dirs.len()
        ),
        None,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_independent_of_order() {
        let a: u64 = stream(7, 3).gen();
        let _ = stream(7, 2).gen::<u64>();
        assert_eq!(a, stream(7, 3).gen::<u64>());
        assert_ne!(a, stream(7, 4).gen::<u64>());
        assert_ne!(a, stream(8, 3).gen::<u64>());
    }

    #[test]
    fn unknown_criterion() {
        assert!(run(13, 0).is_err());
    }

    #[test]
    fn cheap_criteria_pass() {
        for id in [9, 12] {
            let o = run(id, 1).unwrap();
            assert!(o.passed, "{}", o.line());
        }
    }
}
