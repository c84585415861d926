//! Command-line front end over JSON documents.
//!
//! Exit codes: 0 verified, 2 a verifier rejected its candidate, 3 a promise
//! or feasibility violation, 64 bad usage or a malformed document, 1 any
//! other error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::dynamics::{self, ExtragradientOptions, IterateOptions, MapKind};
use crate::error::{Error, Result};
use crate::gallery::{self, GALLERY_VERSION};
use crate::io::{content_hash, parse_rational, Candidate, DocKind, Document};
use crate::model::{Certificate, GadgetKind, Method, MinMaxInstance, Params, QviInstance, Sense};
use crate::reductions::{self, PipelineOptions, ReductionTrace};
use crate::sperner::{self, SpernerOptions};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;
pub const EXIT_PROMISE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "minmax-lab", version, about = "Build, reduce, solve and verify constrained min-max problems, VIs and QVIs")]
struct Cli {
    /// Worker threads for grid scans (defaults to all cores).
    #[arg(long, global = true, env = "MINMAX_LAB_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a named instance.
    Gallery(GalleryArgs),
    /// Transform an instance into another problem class.
    Reduce(ReduceArgs),
    /// Run a solver and write a certificate.
    Solve(SolveArgs),
    /// Check a candidate point against a solution concept.
    Verify(VerifyArgs),
    /// Polymatrix game through the gadget reduction and back.
    Pipeline(PipelineArgs),
    /// Summarize certificates and reports.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GalleryName {
    EqNotVi,
    IrrationalKakutani,
    Nonexistence,
    IndepSet,
    MatchingPennies,
    RandomPolymatrix,
    RandomLinearvi,
}

#[derive(Debug, Args)]
struct GalleryArgs {
    #[arg(long, value_enum)]
    name: GalleryName,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Players of a random polymatrix game.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Dimension of a random affine VI or vertices of the independent-set graph.
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Target independent-set size.
    #[arg(long, default_value = "2", value_parser = number)]
    k: f64,
    /// Edges as `i-j` pairs, comma separated.
    #[arg(long, default_value = "0-1,1-2")]
    edges: String,
    #[arg(long, default_value = "1/10", value_parser = number)]
    eps: f64,
    /// Accuracy ρ of a random affine VI.
    #[arg(long, default_value = "1/10", value_parser = number)]
    rho: f64,
    /// Membership relaxation stored with the irrational Kakutani instance.
    /// Its only exact fixed point is irrational, so grid solvers need slack.
    #[arg(long, default_value = "1/20", value_parser = number)]
    nu: f64,
    #[arg(long)]
    monotone: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Source {
    Polymatrix,
    Linearvi,
    Minmax,
    Gnep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Linearvi,
    MinmaxJc,
    MinmaxBilinear,
    Qvi,
    /// VI over the joint constraint set of a jointly-convex min-max instance.
    JointVi,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    #[arg(long, value_enum)]
    from: Source,
    #[arg(long, value_enum)]
    to: Target,
    input: PathBuf,
    /// Output path; stdout when omitted.
    output: Option<PathBuf>,
    #[arg(long, conflicts_with = "output")]
    out: Option<PathBuf>,
    #[arg(long, default_value = "1", value_parser = number)]
    gamma: f64,
    /// Overrides the game's target regret.
    #[arg(long, value_parser = number)]
    eps_star: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveMethod {
    Gda,
    Sgda,
    Extragradient,
    Sperner,
    Grid,
}

#[derive(Debug, Args)]
struct SolveArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    method: SolveMethod,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cubelets per axis for the Sperner solver.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[arg(long, default_value = "1", value_parser = number)]
    eta: f64,
    #[arg(long, default_value = "1/50", value_parser = number)]
    gamma: f64,
    /// Relaxation used when verifying the Sperner candidate.
    #[arg(long, value_parser = number)]
    nu: Option<f64>,
    /// Accuracy used when verifying the Sperner candidate.
    #[arg(long, value_parser = number)]
    eps: Option<f64>,
    /// Fail instead of relaxing empty constraint slices.
    #[arg(long)]
    strict_slices: bool,
    #[arg(long, default_value = "1/2", value_parser = number)]
    damping: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    #[arg(long, default_value = "1e-8", value_parser = number)]
    target: f64,
    /// Fixed-point tolerance for descent-ascent certificates.
    #[arg(long, default_value = "1e-6", value_parser = number)]
    alpha: f64,
    /// Start point for descent-ascent, comma separated `x` then `y`.
    #[arg(long, value_parser = point)]
    start: Option<PointArg>,
    /// Step of the grid searched by `--method grid`.
    #[arg(long, default_value = "1/200", value_parser = number)]
    grid_step: f64,
    /// The δ-ball lattice uses step `δ / ball_divisions`.
    #[arg(long, default_value = "8", value_parser = number)]
    ball_divisions: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Concept {
    Linearvi,
    Qvi,
    Kakutani,
    LocalMinmax,
    Gda,
    Global,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    concept: Concept,
    /// Candidate, certificate or report document holding the point.
    #[arg(long, conflicts_with = "point")]
    candidate: Option<PathBuf>,
    /// Point as comma separated numbers (`x` then `y` for min-max).
    #[arg(long, value_parser = point)]
    point: Option<PointArg>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Lattice step for local min-max checks (default δ/10) or grid step for
    /// the globalization check (default 1/100).
    #[arg(long, value_parser = number)]
    grid_step: Option<f64>,
    #[arg(long, default_value = "1e-6", value_parser = number)]
    alpha: f64,
    #[arg(long, value_parser = number)]
    nu: Option<f64>,
    #[arg(long, value_parser = number)]
    eps: Option<f64>,
    #[arg(long, value_parser = number)]
    delta: Option<f64>,
    /// Verify a jointly-convex min-max instance as a VI over its joint set.
    #[arg(long)]
    joint: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Gadget {
    Jc,
    Bilinear,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    /// Polymatrix document; a random game is generated when omitted.
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value = "1", value_parser = number)]
    gamma: f64,
    #[arg(long, value_enum, default_value_t = Gadget::Jc)]
    gadget: Gadget,
    #[arg(long, default_value = "1/200", value_parser = number)]
    grid_step: f64,
    #[arg(long, value_parser = number)]
    eps_star: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn number(s: &str) -> std::result::Result<f64, String> {
    parse_rational(s)
}

/// Comma separated coordinates, parsed as one argument.
#[derive(Debug, Clone, PartialEq)]
struct PointArg(Vec<f64>);

fn point(s: &str) -> std::result::Result<PointArg, String> {
    s.split(',').map(parse_rational).collect::<std::result::Result<_, _>>().map(PointArg)
}

/// Entry point used by the binary.
pub fn main() -> i32 {
    run(std::env::args_os())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: thread pool already configured: {e}");
        }
    }
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Maps an error to the process exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PromiseViolation(_) | Error::Infeasible | Error::InfeasibleProbe { .. } => EXIT_PROMISE,
        Error::Document(_)
        | Error::Json(_)
        | Error::InvalidInstance(_)
        | Error::InvalidParameter(_)
        | Error::DimensionMismatch { .. }
        | Error::EmptyConstraintSet
        | Error::WrongConstraintKind
        | Error::Unsupported(_) => EXIT_USAGE,
        Error::Io(io) if io.kind() == std::io::ErrorKind::NotFound => EXIT_USAGE,
        _ => EXIT_FAILED,
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Gallery(a) => cmd_gallery(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Pipeline(a) => cmd_pipeline(a),
        Command::Report(a) => cmd_report(a),
    }
}

fn emit(doc: &Document, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => doc.save(path),
        None => {
            print!("{}", doc.to_json()?);
            Ok(())
        }
    }
}

fn inputs_meta(entries: &[(&Path, &str)]) -> BTreeMap<String, String> {
    entries.iter().map(|(p, h)| (p.display().to_string(), h.to_string())).collect()
}

fn summarize(cert: &Certificate) -> i32 {
    let cmp = match cert.sense {
        Sense::AtLeast => ">=",
        Sense::AtMost => "<=",
    };
    let verdict = if cert.passed { "PASS" } else { "FAIL" };
    eprintln!(
        "{verdict} {:?}: residual {:.6e} {cmp} {:.6e} at {:?}",
        cert.method, cert.residual, cert.threshold, cert.point
    );
    for note in &cert.notes {
        eprintln!("  note: {note}");
    }
    if cert.passed {
        EXIT_OK
    } else {
        EXIT_REJECTED
    }
}

fn cmd_gallery(a: GalleryArgs) -> Result<i32> {
    let name = a.name.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let with_instance = |g: gallery::GalleryInstance| -> Result<Document> {
        Document::new(DocKind::Minmax, &g.instance)?
            .with_meta("probe", Candidate::pair(g.probe.0, g.probe.1))?
            .with_meta("claims", g.claims)
    };
    let doc = match a.name {
        GalleryName::EqNotVi => with_instance(gallery::eq_not_vi())?,
        GalleryName::Nonexistence => with_instance(gallery::nonexistence_instance(a.eps))?,
        GalleryName::IndepSet => with_instance(gallery::independent_set(a.d, &parse_edges(&a.edges)?, a.k)?)?,
        GalleryName::IrrationalKakutani => {
            Document::new(DocKind::Correspondence, &gallery::irrational_kakutani().with_nu(a.nu))?
                .with_meta("probe", Candidate::point(vec![0.70711, 0.70711]))?
        }
        GalleryName::MatchingPennies => Document::new(DocKind::Polymatrix, &gallery::matching_pennies())?,
        GalleryName::RandomPolymatrix => Document::new(DocKind::Polymatrix, &gallery::random_polymatrix(a.n, a.seed)?)?
            .with_meta("seed", a.seed)?,
        GalleryName::RandomLinearvi => {
            Document::new(DocKind::Linearvi, &gallery::random_linearvi(a.d, a.seed, a.monotone, a.rho)?)?
                .with_meta("seed", a.seed)?
        }
    };
    let doc = doc.with_meta("gallery", &name)?.with_meta("gallery_version", GALLERY_VERSION)?;
    emit(&doc, a.out.as_deref())?;
    eprintln!("wrote {} instance {name}", doc.kind.name());
    Ok(EXIT_OK)
}

fn parse_edges(text: &str) -> Result<Vec<[usize; 2]>> {
    let bad = |e: &str| Error::InvalidParameter(format!("malformed edge {e:?}, expected i-j"));
    text.split(',')
        .map(str::trim)
        .filter(|e| !e.is_empty())
        .map(|e| {
            let (i, j) = e.split_once('-').ok_or_else(|| bad(e))?;
            Ok([i.trim().parse().map_err(|_| bad(e))?, j.trim().parse().map_err(|_| bad(e))?])
        })
        .collect()
}

fn cmd_reduce(a: ReduceArgs) -> Result<i32> {
    let (doc, hash) = Document::load(&a.input)?;
    let mut trace = doc.trace.clone();
    let mut push = |t: ReductionTrace| trace.push(t);
    let out = match (a.from, a.to) {
        (Source::Polymatrix, to @ (Target::Linearvi | Target::MinmaxJc | Target::MinmaxBilinear)) => {
            let mut game = doc.polymatrix()?;
            if let Some(e) = a.eps_star {
                game.eps_star = e;
            }
            let (vi, t) = reductions::polymatrix_to_linearvi(&game)?;
            push(t);
            if to == Target::Linearvi {
                Document::new(DocKind::Linearvi, &vi)?
            } else {
                let (inst, t) = gadget(&vi, to, a.gamma)?;
                push(t);
                Document::new(DocKind::Minmax, &inst)?
            }
        }
        (Source::Linearvi, to @ (Target::MinmaxJc | Target::MinmaxBilinear)) => {
            let (inst, t) = gadget(&doc.linearvi()?, to, a.gamma)?;
            push(t);
            Document::new(DocKind::Minmax, &inst)?
        }
        (Source::Minmax, Target::Qvi) => Document::new(DocKind::Qvi, &reductions::minmax_to_qvi(&doc.minmax()?)?)?,
        (Source::Minmax, Target::JointVi) => {
            Document::new(DocKind::Qvi, &reductions::jointly_convex_vi(&doc.minmax()?)?)?
        }
        (Source::Gnep, Target::Qvi) => Document::new(DocKind::Qvi, &reductions::gnep_to_qvi(&doc.gnep()?)?)?,
        (from, to) => return Err(Error::Unsupported(format!("no reduction from {from:?} to {to:?}"))),
    };
    let mut out = out.with_trace(trace).with_meta("inputs", inputs_meta(&[(&a.input, &hash)]))?;
    if let Some(probe) = doc.meta.get("probe") {
        out.meta.insert("probe".into(), probe.clone());
    }
    emit(&out, a.output.as_deref().or(a.out.as_deref()))?;
    eprintln!("wrote {} document", out.kind.name());
    Ok(EXIT_OK)
}

fn gadget(vi: &crate::model::LinearVi, to: Target, gamma: f64) -> Result<(MinMaxInstance, ReductionTrace)> {
    match to {
        Target::MinmaxJc => reductions::linearvi_to_jc_minmax(vi, gamma),
        _ => reductions::linearvi_to_bilinear_minmax(vi, gamma),
    }
}

/// QVI from a qvi, correspondence or min-max document.
fn load_qvi(doc: &Document, joint: bool) -> Result<QviInstance> {
    match doc.kind {
        DocKind::Qvi => doc.qvi(),
        DocKind::Correspondence => QviInstance::kakutani(doc.correspondence()?),
        DocKind::Minmax if joint => reductions::jointly_convex_vi(&doc.minmax()?),
        DocKind::Minmax => reductions::minmax_to_qvi(&doc.minmax()?),
        k => Err(Error::Document(format!("cannot read a QVI from a {} document", k.name()))),
    }
}

fn probe_point(doc: &Document) -> Option<Vec<f64>> {
    doc.meta_as::<Candidate>("probe").and_then(|c| c.stacked().ok())
}

fn certificate_doc(cert: &Certificate, trace: Vec<ReductionTrace>, inputs: &[(&Path, &str)]) -> Result<Document> {
    Ok(Document::new(DocKind::Certificate, cert)?.with_trace(trace).with_meta("inputs", inputs_meta(inputs))?)
}

fn cmd_solve(a: SolveArgs) -> Result<i32> {
    let (doc, hash) = Document::load(&a.input)?;
    let inputs = [(a.input.as_path(), hash.as_str())];
    let mut extra: Vec<(&str, Value)> = Vec::new();
    let cert = match a.method {
        SolveMethod::Gda | SolveMethod::Sgda => {
            let inst = doc.minmax()?;
            let d = inst.dim;
            let start = a.start.clone().map(|p| p.0).or_else(|| probe_point(&doc)).unwrap_or_else(|| vec![0.5; 2 * d]);
            let (x0, y0) = Candidate::point(start).split(d)?;
            let kind = if a.method == SolveMethod::Gda { MapKind::Gda } else { MapKind::Sgda };
            let opts = IterateOptions { damping: a.damping, max_iters: a.max_iters, target_residual: a.target };
            let run = dynamics::iterate(&inst, (&x0, &y0), kind, &opts)?;
            extra.push(("iterations", json!(run.iterations)));
            extra.push(("converged", json!(run.converged)));
            match kind {
                MapKind::Gda => verify::verify_gda_fixed_point(&inst, &run.x, &run.y, a.alpha)?,
                MapKind::Sgda => {
                    let r = dynamics::residual(&inst, &run.x, &run.y, MapKind::Sgda)?;
                    Certificate::new(Method::GdaFixedPoint, linalg_concat(&run.x, &run.y), r, a.alpha, Sense::AtMost)
                        .with_params(Params { alpha: Some(a.alpha), ..Params::default() })
                        .with_note("safe descent-ascent map")
                }
            }
        }
        SolveMethod::Extragradient => {
            let vi = doc.linearvi()?;
            let opts = ExtragradientOptions { step: None, tol: a.target.max(1e-12), max_iters: a.max_iters };
            let run = dynamics::extragradient_vi(&vi.matrix, &vi.c, &opts)?;
            extra.push(("iterations", json!(run.iterations)));
            extra.push(("converged", json!(run.converged)));
            verify::verify_linearvi(&vi, &run.point)
        }
        SolveMethod::Sperner => {
            let mut qvi = load_qvi(&doc, false)?;
            if let Some(nu) = a.nu {
                qvi = qvi.with_nu(nu);
            }
            if let Some(eps) = a.eps {
                qvi = qvi.with_eps(eps);
            }
            let mut opts = SpernerOptions::new(a.grid, a.eta, a.gamma);
            if a.strict_slices {
                opts.empty_slice = sperner::EmptySlicePolicy::Abort;
            }
            let run = sperner::solve_qvi(&qvi, &opts)?;
            extra.push(("simplex", serde_json::to_value(&run.simplex)?));
            extra.push(("solver_params", serde_json::to_value(run.params)?));
            run.certificate
        }
        SolveMethod::Grid => {
            let inst = doc.minmax()?;
            match verify::search_local_minmax(&inst, a.grid_step, inst.delta / a.ball_divisions)? {
                Some(c) => c,
                None => {
                    eprintln!("FAIL no grid point passed the local min-max check");
                    return Ok(EXIT_REJECTED);
                }
            }
        }
    };
    let mut out = certificate_doc(&cert, doc.trace.clone(), &inputs)?;
    for (k, v) in extra {
        out.meta.insert(k.into(), v);
    }
    emit(&out, a.out.as_deref())?;
    Ok(summarize(&cert))
}

fn linalg_concat(x: &[f64], y: &[f64]) -> Vec<f64> {
    crate::linalg::concat(x, y)
}

/// Point from `--point`, a candidate-like document, or the instance's probe.
fn resolve_point(a: &VerifyArgs, doc: &Document) -> Result<(Vec<f64>, Option<(PathBuf, String)>)> {
    if let Some(p) = &a.point {
        return Ok((p.0.clone(), None));
    }
    if let Some(path) = &a.candidate {
        let (cdoc, hash) = Document::load(path)?;
        let z = match cdoc.kind {
            DocKind::Candidate => cdoc.candidate()?.stacked()?,
            DocKind::Certificate => cdoc.certificate()?.point,
            k => return Err(Error::Document(format!("no point in a {} document", k.name()))),
        };
        return Ok((z, Some((path.clone(), hash))));
    }
    probe_point(doc)
        .map(|z| (z, None))
        .ok_or_else(|| Error::InvalidParameter("no point given and the instance has no probe".into()))
}

fn cmd_verify(a: VerifyArgs) -> Result<i32> {
    let (doc, hash) = Document::load(&a.input)?;
    let (z, cand) = resolve_point(&a, &doc)?;
    let minmax = |z: &[f64]| -> Result<(MinMaxInstance, Vec<f64>, Vec<f64>)> {
        let inst = doc.minmax()?;
        let (x, y) = Candidate::point(z.to_vec()).split(inst.dim)?;
        Ok((inst, x, y))
    };
    let cert = match a.concept {
        Concept::Linearvi => verify::verify_linearvi(&doc.linearvi()?, &z),
        Concept::Qvi => {
            let mut qvi = load_qvi(&doc, a.joint)?;
            if let Some(nu) = a.nu {
                qvi = qvi.with_nu(nu);
            }
            if let Some(eps) = a.eps {
                qvi = qvi.with_eps(eps);
            }
            verify::verify_qvi(&qvi, &z)?
        }
        Concept::Kakutani => {
            let mut spec = load_qvi(&doc, a.joint)?.correspondence;
            if let Some(nu) = a.nu {
                spec = spec.with_nu(nu);
            }
            verify::verify_kakutani(&spec, &z)
        }
        Concept::LocalMinmax => {
            let (mut inst, x, y) = minmax(&z)?;
            if a.eps.is_some() || a.delta.is_some() || a.nu.is_some() {
                let (eps, delta, nu) = (a.eps.unwrap_or(inst.eps), a.delta.unwrap_or(inst.delta), a.nu.unwrap_or(inst.nu));
                inst = inst.with_params(eps, delta, nu)?;
            }
            let step = a.grid_step.unwrap_or(inst.delta / 10.0);
            verify::verify_local_minmax(&inst, &x, &y, step)?
        }
        Concept::Gda => {
            let (inst, x, y) = minmax(&z)?;
            verify::verify_gda_fixed_point(&inst, &x, &y, a.alpha)?
        }
        Concept::Global => {
            let (inst, x, y) = minmax(&z)?;
            let eps = a.eps.unwrap_or(inst.eps);
            let delta = a.delta.unwrap_or(inst.delta);
            verify::verify_globalization(&inst, &x, &y, eps, delta, a.grid_step.unwrap_or(0.01))?
        }
    };
    let mut inputs = vec![(a.input.as_path(), hash.as_str())];
    if let Some((p, h)) = &cand {
        inputs.push((p.as_path(), h.as_str()));
    }
    let out = certificate_doc(&cert, doc.trace.clone(), &inputs)?;
    emit(&out, a.out.as_deref())?;
    Ok(summarize(&cert))
}

fn cmd_pipeline(a: PipelineArgs) -> Result<i32> {
    let (mut game, source) = match &a.input {
        Some(path) => {
            let (doc, hash) = Document::load(path)?;
            (doc.polymatrix()?, json!({ "path": path.display().to_string(), "sha256": hash }))
        }
        None => (gallery::random_polymatrix(a.n, a.seed)?, json!({ "seed": a.seed, "n": a.n })),
    };
    if let Some(e) = a.eps_star {
        game.eps_star = e;
    }
    let opts = PipelineOptions {
        gadget: match a.gadget {
            Gadget::Jc => GadgetKind::JointlyConvex,
            Gadget::Bilinear => GadgetKind::Bilinear,
        },
        gamma: a.gamma,
        grid_step: a.grid_step,
        ..PipelineOptions::default()
    };
    let mut report = reductions::run_pipeline(&game, &opts)?;
    if a.input.is_none() {
        report.seed = Some(a.seed);
    }
    let game_hash = content_hash(serde_json::to_string(&game)?.as_bytes());
    let doc = Document::new(DocKind::Report, &report)?
        .with_trace(report.traces.clone())
        .with_meta("source", source)?
        .with_meta("game_sha256", game_hash)?;
    emit(&doc, a.out.as_deref())?;
    match &report.regret {
        Some(r) => eprintln!(
            "{} pipeline: regret {:.6e} <= {:.6e} at {:?}",
            if report.passed { "PASS" } else { "FAIL" },
            r.residual,
            report.tolerance,
            r.point
        ),
        None => eprintln!("FAIL pipeline: no local min-max point found on the grid"),
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_REJECTED })
}

#[derive(Debug, Serialize)]
struct ReportEntry {
    path: String,
    sha256: String,
    kind: DocKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    passed: Option<bool>,
}

fn cmd_report(a: ReportArgs) -> Result<i32> {
    let mut entries = Vec::new();
    for path in &a.inputs {
        let (doc, hash) = Document::load(path)?;
        let mut e = ReportEntry {
            path: path.display().to_string(),
            sha256: hash,
            kind: doc.kind,
            method: None,
            residual: None,
            threshold: None,
            passed: None,
        };
        match doc.kind {
            DocKind::Certificate => {
                let c = doc.certificate()?;
                e.method = Some(c.method);
                e.residual = Some(c.residual);
                e.threshold = Some(c.threshold);
                e.passed = Some(c.passed);
            }
            DocKind::Report => {
                e.passed = doc.data.get("passed").and_then(Value::as_bool);
            }
            _ => {}
        }
        entries.push(e);
    }
    let all_passed = entries.iter().all(|e| e.passed != Some(false));
    println!("{:<40} {:<14} {:<20} {:>14} {:>14}  verdict", "document", "kind", "method", "residual", "threshold");
    for e in &entries {
        let fmt = |v: Option<f64>| v.map(|v| format!("{v:.6e}")).unwrap_or_else(|| "-".into());
        let verdict = match e.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "-",
        };
        let method = e.method.map(|m| format!("{m:?}")).unwrap_or_else(|| "-".into());
        println!(
            "{:<40} {:<14} {:<20} {:>14} {:>14}  {verdict}",
            e.path,
            e.kind.name(),
            method,
            fmt(e.residual),
            fmt(e.threshold)
        );
    }
    if let Some(out) = &a.out {
        let doc = Document::new(DocKind::Report, &json!({ "entries": entries, "passed": all_passed }))?;
        doc.save(out)?;
    }
    Ok(if all_passed { EXIT_OK } else { EXIT_REJECTED })
}
