mod corpus;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde_json::json;
use stripecover::coord_approx::CoordApproximator;
use stripecover::extension::McShane;
use stripecover::io::{self, StepDoc};
use stripecover::null1d::{build_phi_1d, identity_deficit, Derivation1D};
use stripecover::projections::{
    bundled_directions, check_monotone, four_corner, project_length, projection_report, report_csv, Direction,
    ReportRow,
};
use stripecover::scalar::{fmt_scalar, parse_point, parse_scalar};
use stripecover::stripes::{disjointify, uncross};
use stripecover::{gen, verify, Arrangement, Error, Scalar};

#[derive(Parser)]
#[command(name = "stripecover", version, about = "Exact stripe-cover constructions and their verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replace the curves of an arrangement by their pointwise-sorted family
    Uncross {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Raise ordered stripes until their interiors are pairwise disjoint
    Disjointify {
        input: PathBuf,
        /// Sort the curves first instead of rejecting unordered input
        #[arg(long)]
        uncross_first: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check that the stripes of an arrangement cover given or sampled points
    Covers {
        /// Arrangement whose stripe union is tested
        #[arg(long)]
        stripes: PathBuf,
        /// Sample points inside the stripes of this arrangement
        #[arg(long)]
        original: Option<PathBuf>,
        /// Point "x,y" to test; may be repeated
        #[arg(long = "point")]
        points: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Evaluate or verify the coordinate approximator of an arrangement
    Phi {
        #[arg(long)]
        arrangement: PathBuf,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        baseline: String,
        /// Graph-parameter window "a,b" on which stripes lie above the baseline
        #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
        window: String,
        /// Point "x,y"; may be repeated
        #[arg(long, allow_hyphen_values = true)]
        eval: Vec<String>,
        #[arg(long, value_enum)]
        verify: Option<PhiCheck>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// One-dimensional approximate identities and derivations
    Null1d {
        #[command(subcommand)]
        command: Null1dCommand,
    },
    /// Evaluate the McShane extension of finitely many samples
    Extend {
        #[arg(long)]
        samples: PathBuf,
        /// Query point, comma-separated; may be repeated
        #[arg(long, required = true, allow_hyphen_values = true)]
        query: Vec<String>,
        /// Clamp to the sup norm of the samples
        #[arg(long, conflicts_with = "lip")]
        bounded: bool,
        /// Lipschitz constant (defaults to the samples' own)
        #[arg(long)]
        lip: Option<String>,
    },
    /// Projected lengths of square unions onto rational directions
    Project {
        #[arg(long, value_enum, conflicts_with = "squares")]
        set: Option<SetKind>,
        /// SquareSet JSON file
        #[arg(long)]
        squares: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        depth: u32,
        /// Direction "p,q"; may be repeated
        #[arg(long = "dir", allow_hyphen_values = true)]
        dirs: Vec<String>,
        /// Tabulate four-corner generations against directions
        #[arg(long, conflicts_with_all = ["squares", "set"])]
        report: bool,
        /// Depths for --report, comma-separated
        #[arg(long, default_value = "1,2,3,4,5,6")]
        depths: String,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the seeded verification campaigns
    Verify {
        #[arg(long, conflicts_with = "criterion")]
        all: bool,
        /// Criterion number 1..=12; may be repeated
        #[arg(long)]
        criterion: Vec<u8>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Directory receiving one witness file per failed criterion
        #[arg(long)]
        witness_dir: Option<PathBuf>,
        /// Also check every bundled example document in this directory
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Null1dCommand {
    /// The function with slope 0 on the cover and 1 elsewhere
    Phi {
        #[arg(long)]
        cover: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        eval: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Largest gap between the identity and phi
    Deficit {
        #[arg(long)]
        cover: PathBuf,
    },
    /// Apply the derivation w * f' of a decomposed measure
    Derive {
        #[arg(long)]
        measure: PathBuf,
        /// Step function playing the role of the derivation of the identity
        #[arg(long)]
        weight: PathBuf,
        /// PL function to differentiate
        #[arg(long)]
        function: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        eval: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PhiCheck {
    Lipschitz,
    Approx,
    Univariate,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetKind {
    FourCorner,
}

enum Failure {
    Input(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) => Failure::Verification(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("cannot read {}: {e}", path.display())))
}

fn load<T>(path: &Path, parse: fn(&str) -> stripecover::Result<T>) -> Result<T, Failure> {
    parse(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| input(format!("cannot write {}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Outcome {
    match output {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn scalar(s: &str) -> Result<Scalar, Failure> {
    parse_scalar(s).map_err(|e| input(e.to_string()))
}

fn coords(s: &str, dim: Option<usize>) -> Result<Vec<Scalar>, Failure> {
    let p = parse_point(s).map_err(|e| input(e.to_string()))?;
    match dim {
        Some(d) if p.len() != d => Err(input(format!("`{s}` has {} coordinates, expected {d}", p.len()))),
        _ => Ok(p),
    }
}

fn point2(s: &str) -> Result<[Scalar; 2], Failure> {
    let mut p = coords(s, Some(2))?;
    let y = p.pop().expect("two coordinates");
    let x = p.pop().expect("two coordinates");
    Ok([x, y])
}

fn show(p: &[Scalar]) -> String {
    p.iter().map(fmt_scalar).collect::<Vec<_>>().join(",")
}

fn threads() -> Result<usize, Failure> {
    match std::env::var("STRIPECOVER_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| input(format!("STRIPECOVER_THREADS must be a positive integer, got `{v}`"))),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn draw_svg(path: Option<&Path>, layers: &[svg::Layer]) -> Outcome {
    match path {
        Some(p) => write(p, &svg::render(layers)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Uncross { input: path, output, svg } => {
            let a = load(&path, io::arrangement_from_json)?;
            let out = uncross(&a.curves())?;
            let out = Arrangement::new(a.axis(), a.delta().clone(), out.into_iter().map(|c| c.into_function()).collect())?;
            emit(output.as_deref(), &io::arrangement_to_json(&out))?;
            draw_svg(
                svg.as_deref(),
                &[svg::Layer { arrangement: &out, colour: "steelblue" }],
            )
        }
        Command::Disjointify {
            input: path,
            uncross_first,
            output,
            svg,
        } => {
            let a = load(&path, io::arrangement_from_json)?;
            let curves = if uncross_first { uncross(&a.curves())? } else { a.curves() };
            let out = disjointify(&curves, a.delta()).map_err(|e| match e {
                Error::Precondition(m) if !uncross_first => input(format!("precondition violated: {m}; rerun with --uncross-first")),
                e => e.into(),
            })?;
            let out = Arrangement::new(a.axis(), a.delta().clone(), out.into_iter().map(|c| c.into_function()).collect())?;
            emit(output.as_deref(), &io::arrangement_to_json(&out))?;
            draw_svg(
                svg.as_deref(),
                &[
                    svg::Layer { arrangement: &a, colour: "gray" },
                    svg::Layer { arrangement: &out, colour: "darkorange" },
                ],
            )
        }
        Command::Covers {
            stripes,
            original,
            points,
            samples,
            seed,
            svg,
        } => covers(&stripes, original.as_deref(), &points, samples, seed, svg.as_deref()),
        Command::Phi {
            arrangement,
            baseline,
            window,
            eval,
            verify,
            samples,
            seed,
            csv,
        } => {
            let a = load(&arrangement, io::arrangement_from_json)?;
            let w = coords(&window, Some(2))?;
            let approx = CoordApproximator::with_baseline(a, scalar(&baseline)?, (w[0].clone(), w[1].clone()))?;
            if eval.is_empty() && verify.is_none() {
                return Err(input("nothing to do: pass --eval or --verify"));
            }
            for e in &eval {
                println!("{}", fmt_scalar(&approx.phi(&point2(e)?)));
            }
            match verify {
                Some(check) => phi_verify(&approx, &arrangement, check, samples, seed, csv.as_deref()),
                None => Ok(()),
            }
        }
        Command::Null1d { command } => null1d(command),
        Command::Extend {
            samples,
            query,
            bounded,
            lip,
        } => {
            let s = load(&samples, io::samples_from_json)?;
            let dim = s.dim();
            let ext = if bounded {
                McShane::bounded(s)
            } else {
                let lip = match lip {
                    Some(l) => scalar(&l)?,
                    None => s.admissible_constant(),
                };
                McShane::new(s, lip).map_err(|e| input(e.to_string()))?
            };
            for q in &query {
                let x = coords(q, Some(dim))?;
                match ext.eval_exact(&x[0]) {
                    Some(v) => println!("{}", fmt_scalar(&v)),
                    None => println!("{}", ext.eval_point(&x)?),
                }
            }
            Ok(())
        }
        Command::Project {
            set,
            squares,
            depth,
            dirs,
            report,
            depths,
            csv,
        } => project(set, squares.as_deref(), depth, &dirs, report, &depths, csv.as_deref()),
        Command::Verify {
            all,
            criterion,
            seed,
            witness_dir,
            corpus,
        } => run_verify(all, &criterion, seed, witness_dir.as_deref(), corpus.as_deref()),
    }
}

fn covers(
    stripes: &Path,
    original: Option<&Path>,
    points: &[String],
    samples: usize,
    seed: u64,
    svg_path: Option<&Path>,
) -> Outcome {
    let target = load(stripes, io::arrangement_from_json)?;
    let mut pts = points.iter().map(|p| point2(p)).collect::<Result<Vec<_>, _>>()?;
    let source = original.map(|p| load(p, io::arrangement_from_json)).transpose()?;
    if let Some(src) = &source {
        if !src.is_empty() {
            let mut rng = verify::stream(seed, 0);
            for _ in 0..samples {
                let l = rng.gen_range(0..src.len());
                pts.push(gen::point_in_stripe(&mut rng, src, l));
            }
        }
    }
    if pts.is_empty() {
        return Err(input("nothing to check: pass --point or --original"));
    }
    let layers: Vec<svg::Layer> = source
        .iter()
        .map(|s| svg::Layer { arrangement: s, colour: "gray" })
        .chain([svg::Layer { arrangement: &target, colour: "seagreen" }])
        .collect();
    draw_svg(svg_path, &layers)?;
    println!("# stripecover covers seed={seed}");
    match pts.iter().find(|p| !target.contains(p)) {
        None => {
            println!("checked {} points: all covered", pts.len());
            Ok(())
        }
        Some(p) => {
            let w = json!({
                "stripes": stripes.display().to_string(),
                "point": show(p),
                "reproduce": format!("stripecover covers --stripes {} --point {}", stripes.display(), show(p)),
            });
            println!("{w}");
            Err(Failure::Verification(format!("point ({}) is not covered", show(p))))
        }
    }
}

fn phi_verify(
    approx: &CoordApproximator<Scalar>,
    path: &Path,
    check: PhiCheck,
    samples: usize,
    seed: u64,
    csv_path: Option<&Path>,
) -> Outcome {
    let mut rng = verify::stream(seed, 0);
    let name = match check {
        PhiCheck::Lipschitz => "lipschitz",
        PhiCheck::Approx => "approx",
        PhiCheck::Univariate => "univariate",
    };
    let mut rows: Vec<[String; 8]> = Vec::new();
    let mut failure: Option<(Vec<String>, String)> = None;
    match check {
        PhiCheck::Lipschitz => {
            let r = approx.verify_three_lipschitz(&mut rng, samples)?;
            let (p, q) = r
                .violations
                .first()
                .or(r.witness.as_ref())
                .map(|(p, q)| (show(p), show(q)))
                .unwrap_or_default();
            if !r.passed() {
                failure = Some((vec![p.clone(), q.clone()], "|phi(p) - phi(q)| exceeds 3 |p - q|".into()));
            }
            rows.push([
                name.into(),
                r.pairs.to_string(),
                fmt_scalar(&r.max_ratio),
                "3".into(),
                r.violations.len().to_string(),
                p,
                q,
                r.passed().to_string(),
            ]);
        }
        PhiCheck::Approx => {
            let pts: Vec<_> = (0..samples).map(|_| approx.sample_point(&mut rng)).collect();
            let r = approx.verify_approximation(&pts);
            let p = r
                .violations
                .first()
                .map(|(p, _)| p)
                .or(r.witness.as_ref())
                .map(|p| show(p))
                .unwrap_or_default();
            if !r.passed() {
                failure = Some((vec![p.clone()], "deficit outside [0, N delta]".into()));
            }
            rows.push([
                name.into(),
                r.points.to_string(),
                fmt_scalar(&r.max_deficit),
                fmt_scalar(&r.bound),
                r.violations.len().to_string(),
                p,
                String::new(),
                r.passed().to_string(),
            ]);
        }
        PhiCheck::Univariate => {
            let r = approx.verify_stripe_univariate(&mut rng, samples);
            for (l, c) in r.constants.iter().enumerate() {
                let bad: Vec<_> = r.failures.iter().filter(|(k, _)| *k == l).collect();
                let p = bad.first().map(|(_, p)| show(p)).unwrap_or_default();
                if !bad.is_empty() && failure.is_none() {
                    failure = Some((vec![p.clone()], format!("phi varies on stripe {l}")));
                }
                rows.push([
                    format!("{name}:{l}"),
                    samples.to_string(),
                    c.as_ref().map(fmt_scalar).unwrap_or_default(),
                    String::new(),
                    bad.len().to_string(),
                    p,
                    String::new(),
                    bad.is_empty().to_string(),
                ]);
            }
        }
    }
    let mut out = format!("# stripecover phi --verify {name} --samples {samples} --seed {seed}\n");
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| input(format!("cannot format CSV: {e}"));
    w.write_record(["check", "samples", "measured", "bound", "violations", "witness_p", "witness_q", "passed"])
        .map_err(csv_err)?;
    for r in &rows {
        w.write_record(r).map_err(csv_err)?;
    }
    out.push_str(&String::from_utf8(w.into_inner().map_err(|e| input(e.to_string()))?).expect("utf-8 CSV"));
    emit(csv_path, &out)?;
    match failure {
        None => Ok(()),
        Some((pts, msg)) => {
            let evals: String = pts.iter().map(|p| format!(" --eval {p}")).collect();
            let w = json!({
                "arrangement": path.display().to_string(),
                "points": pts,
                "reproduce": format!("stripecover phi --arrangement {}{evals}", path.display()),
            });
            eprintln!("{w}");
            Err(Failure::Verification(msg))
        }
    }
}

fn null1d(command: Null1dCommand) -> Outcome {
    match command {
        Null1dCommand::Phi { cover, eval, output } => {
            let c = load(&cover, io::cover_from_json)?;
            let phi = build_phi_1d(&c);
            if eval.is_empty() {
                return emit(output.as_deref(), &io::pl_to_json(&phi));
            }
            let mut text = String::new();
            for x in &eval {
                text.push_str(&fmt_scalar(&phi.eval(&scalar(x)?)?));
                text.push('\n');
            }
            emit(output.as_deref(), &text)
        }
        Null1dCommand::Deficit { cover } => {
            let c = load(&cover, io::cover_from_json)?;
            let r = identity_deficit(&build_phi_1d(&c), &c)?;
            println!("max_deficit {}", fmt_scalar(&r.max_deficit));
            println!("argmax {}", fmt_scalar(&r.argmax));
            println!("cover_length {}", fmt_scalar(&r.cover_length));
            Ok(())
        }
        Null1dCommand::Derive {
            measure,
            weight,
            function,
            eval,
        } => {
            let m = load(&measure, io::measure_from_json)?;
            let w = load(&weight, io::step_from_json)?;
            let f = load(&function, io::pl_from_json)?;
            let d = Derivation1D::new(m, w);
            let r = d.apply(&f);
            if eval.is_empty() {
                let doc = json!({
                    "step": StepDoc::from(&r.step),
                    "undefined": r.undefined.iter().map(fmt_scalar).collect::<Vec<_>>(),
                    "atoms": r.atom_values.iter().map(|(x, v)| [fmt_scalar(x), fmt_scalar(v)]).collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            }
            for x in &eval {
                match r.value(&scalar(x)?) {
                    Some(v) => println!("{}", fmt_scalar(&v)),
                    None => println!("undefined"),
                }
            }
            Ok(())
        }
    }
}

fn directions(dirs: &[String], default: Vec<Direction>) -> Result<Vec<Direction>, Failure> {
    if dirs.is_empty() {
        return Ok(default);
    }
    dirs.iter().map(|d| Direction::parse(d).map_err(Failure::from)).collect()
}

fn project(
    set: Option<SetKind>,
    squares: Option<&Path>,
    depth: u32,
    dirs: &[String],
    report: bool,
    depths: &str,
    csv_path: Option<&Path>,
) -> Outcome {
    if report {
        let depths = depths
            .split(',')
            .map(|d| d.trim().parse::<u32>().map_err(|_| input(format!("invalid depth `{d}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        let rows = projection_report::<Scalar>(&depths, &directions(dirs, bundled_directions())?)?;
        emit(csv_path, &report_csv(&rows))?;
        return check_monotone(&rows).map_err(|(d, n)| {
            Failure::Verification(format!("direction ({},{}) grows at depth {n}", d.p(), d.q()))
        });
    }
    let east = vec![Direction::new(1, 0)?];
    let (name, s) = match (set, squares) {
        (_, Some(path)) => ("custom", load(path, io::squares_from_json)?),
        (Some(SetKind::FourCorner), None) => ("four-corner", four_corner(depth)?),
        (None, None) => return Err(input("pass --set four-corner, --squares FILE or --report")),
    };
    let rows: Vec<ReportRow<Scalar>> = directions(dirs, east)?
        .into_iter()
        .map(|d| ReportRow {
            set: name,
            depth: Some(s.generation),
            direction: d,
            length: project_length(&s, d),
        })
        .collect();
    emit(csv_path, &report_csv(&rows))
}

fn run_verify(all: bool, criteria: &[u8], seed: u64, witness_dir: Option<&Path>, corpus_dir: Option<&Path>) -> Outcome {
    let ids: Vec<u8> = if all {
        verify::CRITERIA.iter().map(|(i, _)| *i).collect()
    } else if !criteria.is_empty() {
        criteria.to_vec()
    } else if corpus_dir.is_some() {
        Vec::new()
    } else {
        return Err(input("pass --all, --criterion N or --corpus DIR"));
    };
    let outcomes = verify::run_many(&ids, seed, threads()?)?;
    let mut failed = 0;
    if !outcomes.is_empty() {
        print!("{}", verify::report(seed, &outcomes));
    }
    if let Some(dir) = witness_dir {
        fs::create_dir_all(dir).map_err(|e| input(format!("cannot create {}: {e}", dir.display())))?;
    }
    for o in outcomes.iter().filter(|o| !o.passed) {
        failed += 1;
        let w = o.witness.as_ref().expect("failures carry witnesses");
        eprintln!("witness {}: {w}", o.id);
        if let Some(dir) = witness_dir {
            let text = serde_json::to_string_pretty(w).expect("serializable") + "\n";
            write(&dir.join(format!("criterion-{}.json", o.id)), &text)?;
        }
    }
    if let Some(dir) = corpus_dir {
        let lines = corpus::check(dir, seed)?;
        for (ok, line) in &lines {
            println!("{} corpus {line}", if *ok { "PASS" } else { "FAIL" });
        }
        failed += lines.iter().filter(|(ok, _)| !ok).count();
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{failed} check(s) failed")))
    }
}
