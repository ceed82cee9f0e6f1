//! Checks for the bundled example documents, chosen by file-name prefix.

use std::fs;
use std::path::Path;

use rand::Rng;
use stripecover::extension::McShane;
use stripecover::io;
use stripecover::null1d::{build_phi_1d, decompose, identity_deficit};
use stripecover::projections::{project_length, Direction};
use stripecover::stripes::{disjointify, uncross};
use stripecover::{gen, verify, Arrangement, Field, Scalar};

use crate::Failure;

const POINTS: usize = 1000;

/// One `(passed, description)` pair per `.json` file, in file-name order.
pub fn check(dir: &Path, seed: u64) -> Result<Vec<(bool, String)>, Failure> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut out = Vec::with_capacity(files.len());
    for path in files {
        let name = path.file_name().expect("file").to_string_lossy().into_owned();
        let text = fs::read_to_string(&path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
        let result = document(&name, &text, seed);
        out.push(match result {
            Ok(detail) => (true, format!("{name}: {detail}")),
            Err(e) => (false, format!("{name}: {e}")),
        });
    }
    Ok(out)
}

fn document(name: &str, text: &str, seed: u64) -> Result<String, String> {
    let e = |e: stripecover::Error| e.to_string();
    if name.starts_with("arrangement") {
        let a = io::arrangement_from_json(text).map_err(e)?;
        let out = disjointify(&uncross(&a.curves()).map_err(e)?, a.delta()).map_err(e)?;
        let out = Arrangement::from_curves(out, a.delta().clone()).map_err(e)?;
        if !out.has_disjoint_interiors() {
            return Err("disjointified stripes overlap".into());
        }
        let mut rng = verify::stream(seed, 0);
        for _ in 0..if a.is_empty() { 0 } else { POINTS } {
            let l = rng.gen_range(0..a.len());
            let p = gen::point_in_stripe(&mut rng, &a, l);
            if !out.contains(&p) {
                return Err("a sampled point left the disjointified cover".into());
            }
        }
        Ok(format!("{} curves uncrossed and disjointified, {POINTS} points covered", a.len()))
    } else if name.starts_with("pl") {
        let f = io::pl_from_json(text).map_err(e)?;
        Ok(format!("{} breakpoints, Lipschitz constant {}", f.breakpoints().len(), stripecover::scalar::fmt_scalar(&f.lipschitz_constant())))
    } else if name.starts_with("samples") {
        let s = io::samples_from_json(text).map_err(e)?;
        let ext = McShane::bounded(s.clone());
        for (a, v) in s.points().iter().zip(s.values()) {
            if (ext.eval_point(a).map_err(e)? - v.to_f64_lossy()).abs() > verify::FLOAT_TOL {
                return Err("extension misses a sample".into());
            }
        }
        Ok(format!("bounded extension agrees on {} samples", s.len()))
    } else if name.starts_with("cover") {
        let c = io::cover_from_json(text).map_err(e)?;
        let r = identity_deficit(&build_phi_1d(&c), &c).map_err(e)?;
        Ok(format!("max deficit {} within the cover length", stripecover::scalar::fmt_scalar(&r.max_deficit)))
    } else if name.starts_with("measure") {
        let m = io::measure_from_json(text).map_err(e)?;
        let (ac, singular) = decompose(&m);
        if ac.total_mass() + singular.total_mass() != m.total_mass() {
            return Err("decomposition loses mass".into());
        }
        Ok(format!("total mass {}", stripecover::scalar::fmt_scalar(&m.total_mass())))
    } else if name.starts_with("step") {
        let s = io::step_from_json(text).map_err(e)?;
        Ok(format!("{} pieces", s.values().len()))
    } else if name.starts_with("squares") {
        let s = io::squares_from_json(text).map_err(e)?;
        let east = Direction::new(1, 0).map_err(e)?;
        let len = project_length(&s, east).exact;
        let total: Scalar = s.squares.iter().map(|q| q.side.clone()).sum();
        if len > total {
            return Err("projection longer than the sum of sides".into());
        }
        Ok(format!("{} squares, (1,0) projection {}", s.len(), stripecover::scalar::fmt_scalar(&len)))
    } else {
        Err("unrecognised document kind".into())
    }
}
