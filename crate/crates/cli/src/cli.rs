//! Command-line front end.
//!
//! Output is JSON by default (`--format text` for `key: value` lines). Exit
//! codes: 0 on success, 1 on domain errors (reported as
//! `{"error":{"kind":..,"message":..}}` on stdout), 2 on usage errors.

use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use ultranorm_core::betweenness::{
    is_metrically_between, minimize_two_point, segment, DEFAULT_SEGMENT_CAP,
};
use ultranorm_core::isometry::{decompose, make_sup_norm_counterexample, verify_isometry};
use ultranorm_core::oracle::{
    exhaustive_betweenness_check, group_closure_check, DEFAULT_SEARCH_CAP, DEFAULT_TRIPLE_CAP,
};
use ultranorm_core::sample::{random_scalar, random_vector};
use ultranorm_core::{
    check_norm_axioms, check_valuation_axioms, distance, norm, Error, FieldSpec, Magnitude,
    NormSamples, NormSpec, Scalar, Vector,
};

use crate::formats::{coords_to_strings, AxialIsometryFile, FormatError, ProbeMapFile};
use crate::search::{default_jobs, enumerate_parallel};

/// Environment variable overriding every enumeration cap.
pub const MAX_ENUM_VAR: &str = "ULTRANORM_MAX_ENUM";

/// Enumerations above this many isometries skip the group-closure check.
const CLOSURE_LIMIT: usize = 2_000;

#[derive(Debug, Parser)]
#[command(
    name = "ultranorm",
    version,
    about = "Exact one-norm geometry over ultrametric valued fields"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormKind {
    One,
    Sup,
    WeightedSup,
}

#[derive(Debug, Args)]
struct NormArgs {
    #[arg(long, value_enum, default_value_t = NormKind::One)]
    norm: NormKind,
    /// Comma-separated positive weights for weighted-sup.
    #[arg(long)]
    weights: Option<String>,
}

impl NormArgs {
    fn spec(&self) -> Result<NormSpec, CliError> {
        match (self.norm, &self.weights) {
            (NormKind::One, None) => Ok(NormSpec::One),
            (NormKind::Sup, None) => Ok(NormSpec::Sup),
            (NormKind::WeightedSup, Some(w)) => {
                let weights = w
                    .split(',')
                    .map(Magnitude::parse)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(NormSpec::weighted_sup(weights)?)
            }
            (NormKind::WeightedSup, None) => {
                Err(CliError::usage("--norm weighted-sup needs --weights"))
            }
            (_, Some(_)) => Err(CliError::usage(
                "--weights only applies to --norm weighted-sup",
            )),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Norm of a vector.
    Norm {
        #[arg(long)]
        field: FieldSpec,
        #[command(flatten)]
        norm: NormArgs,
        #[arg(long = "vec", allow_hyphen_values = true)]
        vector: String,
    },
    /// Distance between two vectors.
    Distance {
        #[arg(long)]
        field: FieldSpec,
        #[command(flatten)]
        norm: NormArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Whether z lies between x and y under the one-norm.
    Between {
        #[arg(long)]
        field: FieldSpec,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// All points between x and y under the one-norm.
    Segment {
        #[arg(long)]
        field: FieldSpec,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Minimum and minimisers of ||c - x||_1 + ||x - a||_1.
    Minimize {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        field: FieldSpec,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Check that a probe map preserves distances.
    Verify {
        /// Probe map JSON file, or - for stdin.
        #[arg(long)]
        probes: String,
        #[command(flatten)]
        norm: NormArgs,
    },
    /// Recover the axial form of a one-norm isometry from its probe map.
    Decompose {
        #[arg(long)]
        probes: String,
    },
    /// Probe map of the sup-norm isometry v -> v + e0 on the sphere of radius ||v0||.
    Counterexample {
        #[arg(long)]
        field: FieldSpec,
        #[arg(long, allow_hyphen_values = true)]
        e0: String,
        #[arg(long, allow_hyphen_values = true)]
        v0: String,
        /// JSON file {"field":..,"points":[[..],..]}; defaults to a small grid.
        #[arg(long)]
        points: Option<String>,
    },
    /// Count the isometries of GF(q)^n by exhaustive search.
    Enumerate {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        norm: NormArgs,
        /// Only isometries fixing the origin.
        #[arg(long)]
        centred: bool,
        #[arg(long)]
        jobs: Option<usize>,
        /// Largest number of points searched.
        #[arg(long)]
        cap: Option<u64>,
        /// Include wall-clock time in the output.
        #[arg(long)]
        timing: bool,
    },
    /// Compare metric and coordinate betweenness on every triple of GF(q)^n.
    CheckBetweenness {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Randomised exact checks of the valuation and norm axioms.
    CheckAxioms {
        #[arg(long)]
        field: FieldSpec,
        #[command(flatten)]
        norm: NormArgs,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
struct CliError {
    kind: &'static str,
    message: String,
    probe: Option<Vector>,
    usage: bool,
}

impl CliError {
    fn usage(message: &str) -> Self {
        CliError {
            kind: "usage",
            message: message.to_string(),
            probe: None,
            usage: true,
        }
    }

    fn io(message: String) -> Self {
        CliError {
            kind: "io",
            message,
            probe: None,
            usage: false,
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::NotPrime(_) => "not-prime",
        Error::FieldMismatch { .. } => "field-mismatch",
        Error::DimensionMismatch { .. } | Error::WrongDimension { .. } | Error::EmptyVector => {
            "dimension-mismatch"
        }
        Error::SegmentTooLarge { .. } | Error::SearchTooLarge { .. } => "enumeration-too-large",
        Error::DecompositionFailure { .. } => "decomposition-failure",
        Error::UnderDetermined { .. } | Error::MissingOrigin => "under-determined",
        Error::Hypothesis(_) => "hypothesis",
        Error::DistanceSum { .. } => "precondition",
        _ => "domain",
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let probe = match &e {
            Error::DecompositionFailure { probe, .. } => Some(probe.clone()),
            _ => None,
        };
        CliError {
            kind: error_kind(&e),
            message: e.to_string(),
            probe,
            usage: false,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Domain(e) => e.into(),
            FormatError::Json(e) => CliError {
                kind: "json",
                message: e.to_string(),
                probe: None,
                usage: false,
            },
        }
    }
}

/// Streams and environment for one invocation.
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
    /// Value of [`MAX_ENUM_VAR`], if set.
    pub max_enum: Option<u64>,
}

impl Io<'_> {
    fn cap(&self, flag: Option<u64>, default: u64) -> u64 {
        flag.or(self.max_enum).unwrap_or(default)
    }

    fn read_source(&mut self, path: &str) -> Result<String, CliError> {
        if path == "-" {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| CliError::io(format!("stdin: {e}")))?;
            Ok(s)
        } else {
            std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{path}: {e}")))
        }
    }
}

/// Runs one invocation and returns the exit code.
pub fn run<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(io.stdout, "{}", e.render());
                    return 0;
                }
                _ => 2,
            };
            let _ = write!(io.stderr, "{}", e.render());
            return code;
        }
    };
    let format = cli.format;
    match execute(cli.command, io) {
        Ok(value) => {
            emit(io.stdout, format, &value);
            0
        }
        Err(e) if e.usage => {
            let _ = writeln!(io.stderr, "error: {}", e.message);
            2
        }
        Err(e) => {
            let mut body = json!({"kind": e.kind, "message": e.message});
            if let Some(p) = &e.probe {
                body["probe"] = json!(coords_to_strings(p));
            }
            emit(io.stdout, format, &json!({ "error": body }));
            1
        }
    }
}

fn emit(out: &mut dyn Write, format: Format, value: &Value) {
    let text = match format {
        Format::Json => serde_json::to_string(value).expect("values serialise"),
        Format::Text => render_text(value),
    };
    let _ = writeln!(out, "{text}");
}

/// `key: value` lines; exact magnitudes also get a decimal approximation.
fn render_text(value: &Value) -> String {
    let Value::Object(map) = value else {
        return value.to_string();
    };
    let mut lines = Vec::new();
    for (key, v) in map {
        let rendered = match v {
            Value::String(s) => {
                let approx = matches!(key.as_str(), "value" | "minimum")
                    .then(|| Magnitude::parse(s).ok())
                    .flatten()
                    .filter(|m| !m.as_ratio().is_integer());
                match approx {
                    Some(m) => format!("{s} (~{})", m.to_decimal(6)),
                    None => s.clone(),
                }
            }
            Value::Object(_) => {
                let inner = render_text(v);
                lines.push(format!("{key}:"));
                lines.extend(inner.lines().map(|l| format!("  {l}")));
                continue;
            }
            other => other.to_string(),
        };
        lines.push(format!("{key}: {rendered}"));
    }
    lines.join("\n")
}

fn vector(field: FieldSpec, text: &str) -> Result<Vector, CliError> {
    Ok(Vector::parse(field, text)?)
}

fn execute(command: Command, io: &mut Io<'_>) -> Result<Value, CliError> {
    match command {
        Command::Norm {
            field,
            norm: n,
            vector: v,
        } => {
            let value = norm(&vector(field, &v)?, &n.spec()?)?;
            Ok(json!({ "value": value.to_string() }))
        }
        Command::Distance { field, norm, x, y } => {
            let value = distance(&vector(field, &x)?, &vector(field, &y)?, &norm.spec()?)?;
            Ok(json!({ "value": value.to_string() }))
        }
        Command::Between { field, x, z, y } => {
            let (x, z, y) = (vector(field, &x)?, vector(field, &z)?, vector(field, &y)?);
            Ok(json!({ "between": is_metrically_between(&x, &z, &y)? }))
        }
        Command::Segment { field, x, y, cap } => {
            let s = segment(
                &vector(field, &x)?,
                &vector(field, &y)?,
                io.cap(cap, DEFAULT_SEGMENT_CAP),
            )?;
            let points: Vec<_> = s.points.iter().map(coords_to_strings).collect();
            Ok(json!({ "segment": points, "k": s.k }))
        }
        Command::Minimize { a, c, field, cap } => {
            let r = minimize_two_point(
                &vector(field, &a)?,
                &vector(field, &c)?,
                io.cap(cap, DEFAULT_SEGMENT_CAP),
            )?;
            let points: Vec<_> = r.witnesses.points.iter().map(coords_to_strings).collect();
            Ok(json!({
                "minimum": r.minimum.to_string(),
                "witnesses": points,
                "k": r.witnesses.k,
            }))
        }
        Command::Verify { probes, norm } => {
            let text = io.read_source(&probes)?;
            let m = crate::formats::read_probe_map(&text)?;
            let r = verify_isometry(&m, &norm.spec()?)?;
            let violations: Vec<_> = r
                .distance_violations
                .iter()
                .map(|d| {
                    json!({
                        "x": coords_to_strings(&d.x),
                        "y": coords_to_strings(&d.y),
                        "domain_distance": d.domain_distance.to_string(),
                        "image_distance": d.image_distance.to_string(),
                    })
                })
                .collect();
            let collisions: Vec<_> = r
                .collisions
                .iter()
                .map(|(x, y)| json!([coords_to_strings(x), coords_to_strings(y)]))
                .collect();
            Ok(json!({
                "pass": r.passed(),
                "pairs_checked": r.pairs_checked,
                "injective": r.injective(),
                "surjective": r.surjective,
                "distance_violations": violations,
                "collisions": collisions,
            }))
        }
        Command::Decompose { probes } => {
            let text = io.read_source(&probes)?;
            let m = crate::formats::read_probe_map(&text)?;
            let iso = decompose(&m)?;
            Ok(serde_json::to_value(AxialIsometryFile::from_isometry(&iso)).expect("serialisable"))
        }
        Command::Counterexample {
            field,
            e0,
            v0,
            points,
        } => {
            let (e0, v0) = (vector(field, &e0)?, vector(field, &v0)?);
            let probes = match points {
                Some(path) => read_points(&io.read_source(&path)?, field)?,
                None if matches!(field, FieldSpec::PAdic(_)) => default_grid(field, e0.dim())?,
                None => Vec::new(),
            };
            let m = make_sup_norm_counterexample(field, &e0, &v0, probes)?;
            Ok(serde_json::to_value(ProbeMapFile::from_probe_map(&m)).expect("serialisable"))
        }
        Command::Enumerate {
            q,
            n,
            norm,
            centred,
            jobs,
            cap,
            timing,
        } => {
            let jobs = jobs.unwrap_or_else(default_jobs).max(1);
            let r = enumerate_parallel(
                q,
                n,
                norm.spec()?,
                centred,
                io.cap(cap, DEFAULT_SEARCH_CAP),
                jobs,
            )?;
            let field = FieldSpec::gf(q)?;
            let points = Vector::enumerate_space(field, n, u64::MAX)?;
            let witnesses: Vec<Vec<Vec<String>>> = r
                .non_axial_witnesses
                .iter()
                .map(|map| map.iter().map(|&i| coords_to_strings(&points[i])).collect())
                .collect();
            let group = (r.isometry_count() <= CLOSURE_LIMIT).then(|| {
                let c = group_closure_check(&r);
                json!({
                    "identity": c.has_identity,
                    "closed_under_composition": c.closed_under_composition,
                    "closed_under_inverse": c.closed_under_inverse,
                })
            });
            let mut out = json!({
                "isometries": r.isometry_count(),
                "axial": r.axial_count,
                "formula": r.predicted().map(|p| u64::try_from(&p).map_or_else(|_| json!(p.to_string()), |v| json!(v))),
                "match": r.matches_prediction(),
                "q": q,
                "n": n,
                "norm": r.norm.name(),
                "centred": centred,
                "search_space": r.search_space.to_string(),
                "nodes": r.nodes_visited,
                "non_axial_witnesses": witnesses,
                "group": group,
            });
            if timing {
                let ms = r.duration.map_or(0.0, |d| d.as_secs_f64() * 1000.0);
                out["duration_ms"] = json!(ms);
            }
            Ok(out)
        }
        Command::CheckBetweenness { q, n, cap } => {
            let r = exhaustive_betweenness_check(q, n, io.cap(cap, DEFAULT_TRIPLE_CAP))?;
            let first = r.first_mismatch.as_ref().map(|(x, z, y)| {
                json!({
                    "x": coords_to_strings(x),
                    "z": coords_to_strings(z),
                    "y": coords_to_strings(y),
                })
            });
            Ok(json!({
                "q": q,
                "n": n,
                "triples": r.triples,
                "metric_between": r.metric_between,
                "mismatches": r.mismatches,
                "first_mismatch": first,
                "pass": r.mismatches == 0,
            }))
        }
        Command::CheckAxioms {
            field,
            norm,
            dim,
            samples,
            seed,
        } => check_axioms(field, &norm.spec()?, dim, samples, seed),
    }
}

fn check_axioms(
    field: FieldSpec,
    spec: &NormSpec,
    dim: usize,
    samples: usize,
    seed: u64,
) -> Result<Value, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scalar_pairs: Vec<(Scalar, Scalar)> = (0..samples)
        .map(|_| {
            (
                random_scalar(field, &mut rng),
                random_scalar(field, &mut rng),
            )
        })
        .collect();
    let vector_samples = NormSamples {
        pairs: (0..samples)
            .map(|_| {
                (
                    random_vector(field, dim, &mut rng),
                    random_vector(field, dim, &mut rng),
                )
            })
            .collect(),
        scalars: std::iter::once(Scalar::zero(field))
            .chain((0..2).map(|_| random_scalar(field, &mut rng)))
            .collect(),
    };
    let v = check_valuation_axioms(field, &scalar_pairs)?;
    let n = check_norm_axioms(spec, field, &vector_samples)?;
    let v_viol: Vec<_> = v
        .violations
        .iter()
        .map(|x| json!({"axiom": x.axiom.name(), "left": x.left.to_string(), "right": x.right.to_string()}))
        .collect();
    let n_viol: Vec<_> = n
        .violations
        .iter()
        .map(|x| json!({"axiom": x.axiom.name(), "x": coords_to_strings(&x.x), "y": coords_to_strings(&x.y)}))
        .collect();
    Ok(json!({
        "field": field.to_string(),
        "norm": spec.name(),
        "samples": samples,
        "valuation": {"pairs": v.pairs_checked, "checks": v.checks, "violations": v_viol},
        "norm_axioms": {"pairs": n.pairs_checked, "checks": n.checks, "violations": n_viol},
        "pass": v.holds() && n.holds(),
    }))
}

#[derive(serde::Deserialize)]
struct PointsFile {
    field: String,
    points: Vec<Vec<String>>,
}

fn read_points(text: &str, field: FieldSpec) -> Result<Vec<Vector>, CliError> {
    let file: PointsFile = serde_json::from_str(text).map_err(FormatError::from)?;
    let file_field: FieldSpec = file.field.parse()?;
    field.check_same(file_field)?;
    Ok(file
        .points
        .iter()
        .map(|p| crate::formats::vector_from_strings(field, p))
        .collect::<Result<Vec<_>, _>>()?)
}

/// All vectors with coordinates in a fixed set of small values.
fn default_grid(field: FieldSpec, n: usize) -> Result<Vec<Vector>, CliError> {
    const VALUES: [&str; 7] = ["0", "1", "2", "1/3", "2/3", "3", "1/9"];
    if n > 3 {
        return Err(CliError::usage(
            "default grid supports n <= 3; pass --points",
        ));
    }
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<&str>| {
                VALUES.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    Ok(out
        .into_iter()
        .map(|p| Vector::parse(field, &p.join(",")))
        .collect::<Result<Vec<_>, _>>()?)
}
