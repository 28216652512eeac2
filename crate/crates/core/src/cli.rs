//! Command-line front end.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | usage, parse, I/O or size-mismatch error |
//! | 2 | input too large for the brute-force oracle |
//! | 3 | metric file violates the metric axioms |
//! | 4 | cover verification found violations |
//! | 5 | generated space exceeds the point cap |
//! | 6 | a built-in isometry or separation check failed |
//!
//! Results go to standard output (JSON except for `dist` without `--json`);
//! diagnostics go to standard error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::asdim::{cube_distance, verify_brick_cover, verify_interval_cover};
use crate::coarse::{check_isometry, diagram_distances, profile_map};
use crate::diagram::{augment, Diagram};
use crate::embeddings::{
    dranishnikov_s, embed_coarse_union, embed_cube_point, embed_finite_metric, max_points_from_env,
    metric_violations, zkm_space, EmbedError, FiniteMetricSpace,
};
use crate::io::{self, IoError};
use crate::metrics::{Aggregation, DiagramMetric, MetricsError};

/// Isometry checks built into the commands accept this absolute deviation.
pub const ISOMETRY_TOLERANCE: f64 = 1e-9;
/// Wasserstein checks on generated cubes accept this absolute deviation.
pub const WASSERSTEIN_TOLERANCE: f64 = 1e-6;

const METRIC_CHECK_LIMIT: usize = 512;
const EMBED_CHECK_LIMIT: usize = 64;

#[derive(Debug, Parser)]
#[command(name = "coarse-pd", version, about = "Distances and coarse-geometry constructions on persistence diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Distance and optimal matching between two diagram files.
    Dist(DistArgs),
    /// Embed a finite metric space (CSV) isometrically into diagram space.
    Embed(EmbedArgs),
    /// Verify an asymptotic-dimension cover by sampling.
    Cover(CoverArgs),
    /// Generate a test space and run its built-in checks.
    Gen(GenArgs),
    /// Distortion envelopes of a map between finite metric spaces.
    Profile(ProfileArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("metric_kind").args(["bottleneck", "wasserstein"])))]
struct MetricFlag {
    /// Bottleneck distance (default).
    #[arg(long)]
    bottleneck: bool,
    /// p-Wasserstein distance with exponent P >= 1.
    #[arg(long, value_name = "P")]
    wasserstein: Option<f64>,
}

impl MetricFlag {
    fn metric(&self) -> DiagramMetric {
        match self.wasserstein {
            Some(p) => DiagramMetric::Wasserstein(p),
            None => DiagramMetric::Bottleneck,
        }
    }
}

#[derive(Debug, Args)]
struct DistArgs {
    first: PathBuf,
    second: PathBuf,
    #[command(flatten)]
    metric: MetricFlag,
    /// Use exhaustive permutation search (augmented width at most 10).
    #[arg(long)]
    oracle: bool,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct EmbedArgs {
    metric: PathBuf,
    /// Directory for the per-point diagram files.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Space {
    /// The real line, two-family interval cover.
    Line,
    /// One-point diagrams under the bottleneck metric, three-family brick cover.
    D1,
}

#[derive(Debug, Args)]
struct CoverArgs {
    #[arg(long, value_enum)]
    space: Space,
    #[arg(long, value_name = "R")]
    scale: f64,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Extent of the sampled region.
    #[arg(long, default_value_t = 10_000.0)]
    window: f64,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("space_kind").required(true).args(["zkm", "cube", "dranishnikov"])))]
struct GenArgs {
    /// (Z_K)^M with the max word metric.
    #[arg(long, num_args = 2, value_names = ["K", "M"])]
    zkm: Option<Vec<usize>>,
    /// SAMPLES random points of [0,R]^N and their diagram images.
    #[arg(long, num_args = 3, value_names = ["N", "R", "SAMPLES"])]
    cube: Option<Vec<f64>>,
    /// Disjoint union of (Z_n)^m for n <= MAXN, m <= MAXM.
    #[arg(long, num_args = 2, value_names = ["MAXN", "MAXM"])]
    dranishnikov: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for generated metric and diagram files.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("image_source").required(true).args(["image", "diagrams"])))]
struct ProfileArgs {
    /// Source metric file.
    source: PathBuf,
    /// CSV of image distances, indexed like the source.
    #[arg(long)]
    image: Option<PathBuf>,
    /// Diagram files of the images, in source order.
    #[arg(long, num_args = 1..)]
    diagrams: Option<Vec<PathBuf>>,
    #[command(flatten)]
    metric: MetricFlag,
    /// Number of bins across the source distance range.
    #[arg(long, default_value_t = crate::coarse::DEFAULT_BINS)]
    bins: usize,
}

/// A failed command: exit code and message.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        let code = match &e {
            IoError::Metric { source: EmbedError::InvalidMetric(_), .. } => 3,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<EmbedError> for Failure {
    fn from(e: EmbedError) -> Self {
        let code = match e {
            EmbedError::TooLarge { .. } => 5,
            EmbedError::InvalidMetric(_) => 3,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<MetricsError> for Failure {
    fn from(e: MetricsError) -> Self {
        let code = match e {
            MetricsError::OversizeForOracle { .. } => 2,
            MetricsError::InvalidExponent(_) => 1,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<crate::coarse::CoarseError> for Failure {
    fn from(e: crate::coarse::CoarseError) -> Self {
        Failure::new(1, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(1, e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{e}");
            return 1;
        }
        Err(e) => {
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    let outcome = match cli.command {
        Command::Dist(a) => cmd_dist(&a, out),
        Command::Embed(a) => cmd_embed(&a, out, err),
        Command::Cover(a) => cmd_cover(&a, out),
        Command::Gen(a) => cmd_gen(&a, out),
        Command::Profile(a) => cmd_profile(&a, out),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Formats `v` with 12 significant digits in positional notation.
pub fn format_significant(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v:.11}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Failure::new(1, e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn cmd_dist(args: &DistArgs, out: &mut dyn Write) -> Outcome {
    let z = io::read_diagram(&args.first)?;
    let w = io::read_diagram(&args.second)?;
    let metric = args.metric.metric().validate()?;
    let (value, matching) = if args.oracle {
        metric.bruteforce(&z, &w)?
    } else {
        metric.matching(&z, &w)?
    };
    let pair = augment(&z, &w);
    let pairs: Vec<(usize, usize)> = matching.essential_pairs(&pair).collect();

    if args.json {
        let listed: Vec<_> = pairs
            .iter()
            .map(|&(i, j)| {
                json!({
                    "left": i,
                    "right": j,
                    "left_point": point_json(&pair.left[i]),
                    "right_point": point_json(&pair.right[j]),
                    "cost": crate::metrics::pair_cost(&pair, i, j),
                })
            })
            .collect();
        emit_json(
            out,
            &json!({
                "metric": metric,
                "oracle": args.oracle,
                "value": value,
                "width": pair.width(),
                "perfect": matching.is_perfect(&pair),
                "pairs": listed,
            }),
        )?;
    } else {
        writeln!(out, "{}", format_significant(value))?;
        for (i, j) in pairs {
            writeln!(out, "{i} {} -> {j} {}", pair.left[i], pair.right[j])?;
        }
    }
    Ok(0)
}

fn point_json(p: &crate::diagram::DiagramPoint) -> serde_json::Value {
    match p {
        crate::diagram::DiagramPoint::Delta => serde_json::Value::String("Δ".into()),
        crate::diagram::DiagramPoint::Plane(q) => json!([q.birth(), q.death()]),
    }
}

fn diagram_file_name(index: usize) -> String {
    format!("point_{index:04}.json")
}

fn write_diagrams(dir: &Path, diagrams: &[Diagram]) -> Result<Vec<PathBuf>, Failure> {
    fs::create_dir_all(dir)?;
    diagrams
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let path = dir.join(diagram_file_name(k));
            io::write_diagram(&path, d)?;
            Ok(path)
        })
        .collect()
}

fn cmd_embed(args: &EmbedArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let table = io::read_metric_table(&args.metric)?;
    let space = match FiniteMetricSpace::new(table.labels, table.matrix) {
        Ok(space) => space,
        Err(EmbedError::InvalidMetric(violations)) => {
            writeln!(err, "{}: not a metric", args.metric.display())?;
            for v in &violations {
                writeln!(err, "  {v}")?;
            }
            return Ok(3);
        }
        Err(e) => return Err(e.into()),
    };
    let diagrams = embed_finite_metric(&space)?;
    let files = write_diagrams(&args.out, &diagrams)?;
    let deviation = check_isometry(&space, &diagrams, DiagramMetric::Bottleneck)?;
    let ok = deviation <= ISOMETRY_TOLERANCE;
    emit_json(
        out,
        &json!({
            "points": space.len(),
            "labels": space.labels(),
            "files": files,
            "max_deviation": deviation,
            "tolerance": ISOMETRY_TOLERANCE,
            "isometric": ok,
        }),
    )?;
    Ok(if ok { 0 } else { 6 })
}

fn cmd_cover(args: &CoverArgs, out: &mut dyn Write) -> Outcome {
    if !(args.scale.is_finite() && args.scale > 0.0) {
        return Err(Failure::new(1, format!("--scale must be positive, got {}", args.scale)));
    }
    if !(args.window.is_finite() && args.window > 0.0) {
        return Err(Failure::new(1, format!("--window must be positive, got {}", args.window)));
    }
    let trials = args.trials as usize;
    let report = match args.space {
        Space::Line => verify_interval_cover(args.scale, args.window, trials, args.seed),
        Space::D1 => verify_brick_cover(args.scale, args.window, trials, args.seed),
    };
    emit_json(out, &report)?;
    Ok(if report.passed() { 0 } else { 4 })
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Outcome {
    let cap = max_points_from_env();
    if let Some(km) = &args.zkm {
        gen_zkm(km[0], km[1], cap, args.out.as_deref(), out)
    } else if let Some(c) = &args.cube {
        gen_cube(c, cap, args.seed, args.out.as_deref(), out)
    } else if let Some(nm) = &args.dranishnikov {
        gen_dranishnikov(nm[0], nm[1], cap, args.out.as_deref(), out)
    } else {
        Err(Failure::new(1, "one of --zkm, --cube, --dranishnikov is required"))
    }
}

fn gen_zkm(k: usize, m: usize, cap: usize, dir: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let space = zkm_space(k, m, cap)?;
    if let Some(dir) = dir {
        fs::create_dir_all(dir)?;
        io::write_metric(&dir.join("metric.csv"), &space)?;
    }
    let metric_valid = (space.len() <= METRIC_CHECK_LIMIT).then(|| metric_violations(space.matrix()).is_empty());
    let embedding_deviation = if space.len() <= EMBED_CHECK_LIMIT {
        let diagrams = embed_finite_metric(&space)?;
        Some(check_isometry(&space, &diagrams, DiagramMetric::Bottleneck)?)
    } else {
        None
    };
    let ok = metric_valid != Some(false) && embedding_deviation.is_none_or(|d| d <= ISOMETRY_TOLERANCE);
    emit_json(
        out,
        &json!({
            "kind": "zkm",
            "k": k,
            "m": m,
            "points": space.len(),
            "diameter": space.diameter(),
            "metric_valid": metric_valid,
            "embedding_max_deviation": embedding_deviation,
            "ok": ok,
        }),
    )?;
    Ok(if ok { 0 } else { 6 })
}

fn gen_cube(params: &[f64], cap: usize, seed: u64, dir: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let (n, r, samples) = (params[0], params[1], params[2]);
    let whole = |v: f64| v.is_finite() && v >= 1.0 && v.fract() == 0.0;
    if !whole(n) || !whole(samples) {
        return Err(Failure::new(1, "--cube N R SAMPLES needs integer N >= 1 and SAMPLES >= 1"));
    }
    let (n, samples) = (n as usize, samples as usize);
    if samples > cap {
        return Err(EmbedError::TooLarge {
            points: samples as u128,
            cap,
        }
        .into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<f64>> = (0..samples)
        .map(|_| (0..n).map(|_| rng.random_range(0.0..=r.max(0.0))).collect())
        .collect();
    let diagrams = points
        .iter()
        .map(|x| embed_cube_point(x, r))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(dir) = dir {
        write_diagrams(dir, &diagrams)?;
    }

    let mut deviations = Vec::new();
    for (metric, aggregation) in [
        (DiagramMetric::Bottleneck, Aggregation::Max),
        (DiagramMetric::Wasserstein(1.0), Aggregation::PSum(1.0)),
        (DiagramMetric::Wasserstein(2.0), Aggregation::PSum(2.0)),
    ] {
        let image = diagram_distances(&diagrams, metric)?;
        let mut worst: f64 = 0.0;
        for i in 0..samples {
            for j in i + 1..samples {
                worst = worst.max((image[i][j] - cube_distance(&points[i], &points[j], aggregation)).abs());
            }
        }
        deviations.push(worst);
    }
    let ok = deviations[0] <= ISOMETRY_TOLERANCE && deviations[1..].iter().all(|&d| d <= WASSERSTEIN_TOLERANCE);
    emit_json(
        out,
        &json!({
            "kind": "cube",
            "dimension": n,
            "scale": r,
            "samples": samples,
            "seed": seed,
            "max_deviation_bottleneck_vs_linf": deviations[0],
            "max_deviation_w1_vs_l1": deviations[1],
            "max_deviation_w2_vs_l2": deviations[2],
            "ok": ok,
        }),
    )?;
    Ok(if ok { 0 } else { 6 })
}

fn gen_dranishnikov(max_n: usize, max_m: usize, cap: usize, dir: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let union = dranishnikov_s(max_n, max_m, cap)?;
    let base = union.base();
    if let Some(dir) = dir {
        fs::create_dir_all(dir)?;
        io::write_metric(&dir.join("metric.csv"), base)?;
    }

    // Check the prescribed metric against the separation demands directly.
    let mut separations_hold = true;
    for x in 0..base.len() {
        for y in x + 1..base.len() {
            let (a, b) = (union.block_of(x), union.block_of(y));
            if a != b && base.dist(x, y) <= union.required_separation(a, b) {
                separations_hold = false;
            }
        }
    }
    let metric_valid = (base.len() <= METRIC_CHECK_LIMIT).then(|| metric_violations(base.matrix()).is_empty());
    let embedding = if base.len() <= EMBED_CHECK_LIMIT {
        let e = embed_coarse_union(&union)?;
        if let Some(dir) = dir {
            write_diagrams(&dir.join("diagrams"), &e.diagrams)?;
        }
        Some(e.report)
    } else {
        None
    };
    let embedding_ok = embedding
        .as_ref()
        .is_none_or(|r| r.max_intra_deviation <= ISOMETRY_TOLERANCE && r.separations_exceeded() && r.cross_bounds_hold());
    let ok = separations_hold && metric_valid != Some(false) && embedding_ok;

    let blocks: Vec<_> = union
        .blocks()
        .iter()
        .map(|b| {
            let (n, m) = b.word.expect("word-metric blocks");
            json!({ "n": n, "m": m, "points": b.len, "diameter": b.diameter, "radius": b.radius })
        })
        .collect();
    emit_json(
        out,
        &json!({
            "kind": "dranishnikov",
            "max_n": max_n,
            "max_m": max_m,
            "points": base.len(),
            "blocks": blocks,
            "separations_hold": separations_hold,
            "metric_valid": metric_valid,
            "embedding": embedding,
            "ok": ok,
        }),
    )?;
    Ok(if ok { 0 } else { 6 })
}

fn cmd_profile(args: &ProfileArgs, out: &mut dyn Write) -> Outcome {
    let source = io::read_metric(&args.source)?;
    let image = if let Some(path) = &args.image {
        io::read_metric_table(path)?.matrix
    } else {
        let files = args.diagrams.as_deref().unwrap_or_default();
        let diagrams = files
            .iter()
            .map(|p| io::read_diagram(p))
            .collect::<Result<Vec<_>, _>>()?;
        if diagrams.len() != source.len() {
            return Err(Failure::new(
                1,
                format!("{} diagram files for a {}-point space", diagrams.len(), source.len()),
            ));
        }
        diagram_distances(&diagrams, args.metric.metric())?
    };
    if args.bins == 0 {
        return Err(Failure::new(1, "--bins must be at least 1"));
    }
    let max_t = source.diameter();
    let width = if max_t > 0.0 { Some(max_t / args.bins as f64) } else { None };
    let profile = profile_map(&source, &image, width)?;
    emit_json(out, &profile)?;
    Ok(0)
}
