//! `roundness` — negative-type certificates, generalized roundness,
//! polygonal-equality witnesses and virtual-degeneracy reports over JSON
//! inputs.
//!
//! Exit codes: 0 success, 1 negative verdict under an --expect flag,
//! 2 input error, 3 numeric failure.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use report::{AnalysisReport, ErrorBody, ErrorReport, VERSION};
use roundness::hilbert::{affine_dependence, classify_2_polygonal, gamma2_identity, HilbertError};
use roundness::io::{
    load_families, load_metric, load_points, load_simplex, IoError, LoadedSimplex, MetricFile,
    PointsFile, SimplexFile, Universe, UniverseSpec, WeightedVertex,
};
use roundness::lp::{
    construct_vds_pair, elsner_identity_check, gamma_p_lp, infvds_basis, infvds_variant_basis,
    is_virtually_degenerate, vd_kernel, LpError, LpPointSet,
};
use roundness::metric::{cycle_metric, random_ultrametric, FiniteMetricSpace};
use roundness::negtype::{
    equality_witnesses, generalized_roundness, has_negative_type, has_strict_negative_type,
    NegTypeError,
};
use roundness::simplex::{gamma_p, Refined, SignedSimplex, Vertex};
use roundness::Tolerances;

#[derive(Parser)]
#[command(
    name = "roundness",
    version,
    about = "Negative-type certificates, generalized roundness and virtual-degeneracy analysis for finite metric spaces and l_p point sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Tolerance flags shared by every command. Each report echoes the
/// effective values, so every numeric verdict is tied to the knobs it was
/// certified under.
#[derive(Args, Clone, Copy)]
struct ToleranceArgs {
    /// Absolute tolerance on weight sums (simplex balance, degeneracy).
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps_w: f64,
    /// Coordinate clustering tolerance; 0 means exact comparison.
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps_c: f64,
    /// Triangle-inequality slack for metric validation.
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps_tri: f64,
    /// Eigenvalue threshold scale: threshold = eps-eig * max(1, |lambda|max).
    #[arg(long, global = true, default_value_t = 1e-8)]
    eps_eig: f64,
    /// Width at which the roundness bisection stops.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol_p: f64,
}

impl ToleranceArgs {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            eps_w: self.eps_w,
            eps_c: self.eps_c,
            eps_tri: self.eps_tri,
            eps_eig_scale: self.eps_eig,
            tol_p: self.tol_p,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generalized roundness of a metric space by bisection.
    Roundness {
        metric_file: PathBuf,
        /// Bisection cap; spaces that still pass here report at_cap.
        #[arg(long, default_value_t = 16.0)]
        p_max: f64,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Negative-type certificate and equality witnesses at a fixed exponent.
    Witness {
        metric_file: PathBuf,
        #[arg(long)]
        p: f64,
        /// Exit 1 when no witness is found.
        #[arg(long)]
        expect_witness: bool,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// The p-simplex gap of a simplex file.
    Gap {
        simplex_file: PathBuf,
        /// Exponent; required for metric universes, overrides the point-set
        /// exponent otherwise.
        #[arg(long)]
        p: Option<f64>,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Complete refinement of a simplex file.
    Refine {
        simplex_file: PathBuf,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Per-coordinate virtual-degeneracy report for a simplex over points.
    VdCheck {
        simplex_file: PathBuf,
        /// Exit 1 when the simplex is not virtually degenerate.
        #[arg(long)]
        expect_vd: bool,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Kernel of all virtually degenerate weightings of a point set.
    VdSolve {
        points_file: PathBuf,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Squared-defect identity and 2-polygonal classification (p = 2).
    Hilbert {
        simplex_file: PathBuf,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Affine-dependence analysis of a point set.
    Affine {
        points_file: PathBuf,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Numerical-set identity check on two vector families.
    Elsner {
        families_file: PathBuf,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Writes named fixtures as JSON files, byte-identical per flag set.
    Construct {
        #[arg(long)]
        kind: Kind,
        /// Output prefix; files are written as <prefix>.<role>.json.
        #[arg(long)]
        out: PathBuf,
        /// Point count for cycle/ultrametric.
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Seed for the ultrametric generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Vector count for infvds.
        #[arg(long, default_value_t = 2)]
        count: usize,
        /// Truncation length for infvds.
        #[arg(long, default_value_t = 6)]
        dims: usize,
        /// Exponent stored in emitted point-set files.
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// First generator vector (comma-separated reals).
        #[arg(long)]
        u: Option<String>,
        /// Second generator vector (comma-separated reals).
        #[arg(long)]
        v: Option<String>,
        /// Emit the p_n^(-l) variant basis instead of 2^(-l).
        #[arg(long)]
        variant: bool,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Parallelogram,
    Counterexample4,
    VdsPair,
    Infvds,
    Cycle,
    Ultrametric,
}

struct Failure {
    kind: &'static str,
    detail: String,
    violations: Option<Vec<roundness::metric::MetricViolation>>,
    code: u8,
}

impl Failure {
    fn input(detail: impl Into<String>) -> Self {
        Failure { kind: "input", detail: detail.into(), violations: None, code: 2 }
    }

    fn numeric(detail: impl Into<String>) -> Self {
        Failure { kind: "numeric", detail: detail.into(), violations: None, code: 3 }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        let violations = match &e {
            IoError::Metric(v) => Some(v.clone()),
            _ => None,
        };
        Failure { kind: "input", detail: e.to_string(), violations, code: 2 }
    }
}

impl From<LpError> for Failure {
    fn from(e: LpError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<HilbertError> for Failure {
    fn from(e: HilbertError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<NegTypeError> for Failure {
    fn from(e: NegTypeError) -> Self {
        match e {
            NegTypeError::NumericFailure => Failure::numeric(e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

impl From<roundness::simplex::SimplexError> for Failure {
    fn from(e: roundness::simplex::SimplexError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<roundness::metric::MetricError> for Failure {
    fn from(e: roundness::metric::MetricError) -> Self {
        Failure::input(e.to_string())
    }
}

struct Outcome {
    stdout: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command_name = command_name(&cli.command);
    match run(cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code)
        }
        Err(failure) => {
            let report = ErrorReport {
                command: command_name,
                version: VERSION,
                error: ErrorBody {
                    kind: failure.kind,
                    detail: failure.detail,
                    violations: failure.violations,
                },
            };
            print!("{}", report.render());
            ExitCode::from(failure.code)
        }
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Roundness { .. } => "roundness",
        Command::Witness { .. } => "witness",
        Command::Gap { .. } => "gap",
        Command::Refine { .. } => "refine",
        Command::VdCheck { .. } => "vd-check",
        Command::VdSolve { .. } => "vd-solve",
        Command::Hilbert { .. } => "hilbert",
        Command::Affine { .. } => "affine",
        Command::Elsner { .. } => "elsner",
        Command::Construct { .. } => "construct",
    }
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Roundness { metric_file, p_max, tol } => cmd_roundness(&metric_file, p_max, tol),
        Command::Witness { metric_file, p, expect_witness, tol } => {
            cmd_witness(&metric_file, p, expect_witness, tol)
        }
        Command::Gap { simplex_file, p, tol } => cmd_gap(&simplex_file, p, tol),
        Command::Refine { simplex_file, tol } => cmd_refine(&simplex_file, tol),
        Command::VdCheck { simplex_file, expect_vd, tol } => {
            cmd_vd_check(&simplex_file, expect_vd, tol)
        }
        Command::VdSolve { points_file, tol } => cmd_vd_solve(&points_file, tol),
        Command::Hilbert { simplex_file, tol } => cmd_hilbert(&simplex_file, tol),
        Command::Affine { points_file, tol } => cmd_affine(&points_file, tol),
        Command::Elsner { families_file, p, tol } => cmd_elsner(&families_file, p, tol),
        Command::Construct {
            kind,
            out,
            n,
            seed,
            count,
            dims,
            p,
            u,
            v,
            variant,
            tol,
        } => cmd_construct(kind, &out, n, seed, count, dims, p, u, v, variant, tol),
    }
}

fn to_value<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("library types serialize infallibly")
}

fn require_finite(value: f64, what: &str) -> Result<f64, Failure> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Failure::numeric(format!("{what} left the floating range: {value}")))
    }
}

fn cmd_roundness(path: &Path, p_max: f64, args: ToleranceArgs) -> Result<Outcome, Failure> {
    let tol = args.tolerances();
    let space = load_metric(path, tol.eps_tri)?;
    let report = generalized_roundness(&space, p_max, tol.tol_p, &tol)?;
    // witnesses at the computed value when the form still passes there,
    // otherwise at the last certified passing exponent
    let (witnesses, witnesses_at) = match equality_witnesses(&space, report.roundness, &tol) {
        Ok(w) => (w, report.roundness),
        Err(NegTypeError::TypeFails { .. }) => {
            let p = report.certificate_low.p;
            (equality_witnesses(&space, p, &tol)?, p)
        }
        Err(e) => return Err(e.into()),
    };
    let results = json!({
        "roundness": report.roundness,
        "at_cap": report.at_cap,
        "iterations": report.iterations,
        "certificates": {
            "low": to_value(&report.certificate_low),
            "high": to_value(&report.certificate_high),
        },
        "witnesses": to_value(&witnesses),
        "witnesses_at": witnesses_at,
    });
    let inputs = json!({
        "metric_file": path.display().to_string(),
        "points": space.len(),
        "p_max": p_max,
    });
    Ok(Outcome {
        stdout: AnalysisReport::new("roundness", inputs, &tol, results).render(),
        code: 0,
    })
}

fn require_exponent(p: f64) -> Result<(), Failure> {
    if !p.is_finite() || p < 0.0 {
        return Err(Failure::input(format!(
            "exponent must be a finite real >= 0, got {p}"
        )));
    }
    Ok(())
}

fn cmd_witness(
    path: &Path,
    p: f64,
    expect_witness: bool,
    args: ToleranceArgs,
) -> Result<Outcome, Failure> {
    require_exponent(p)?;
    let tol = args.tolerances();
    let space = load_metric(path, tol.eps_tri)?;
    let type_cert = has_negative_type(&space, p, &tol)?;
    let strict_cert = has_strict_negative_type(&space, p, &tol)?;
    let witnesses = equality_witnesses(&space, p, &tol)?;
    let code = if expect_witness && witnesses.is_empty() { 1 } else { 0 };
    let results = json!({
        "p": p,
        "negative_type": to_value(&type_cert),
        "strict_negative_type": to_value(&strict_cert),
        "witness_count": witnesses.len(),
        "witnesses": to_value(&witnesses),
    });
    let inputs = json!({
        "metric_file": path.display().to_string(),
        "points": space.len(),
        "p": p,
        "expect_witness": expect_witness,
    });
    Ok(Outcome {
        stdout: AnalysisReport::new("witness", inputs, &tol, results).render(),
        code,
    })
}

fn load_simplex_file(path: &Path, tol: &Tolerances) -> Result<LoadedSimplex, Failure> {
    Ok(load_simplex(path, tol.eps_tri, tol.eps_c, tol.eps_w)?)
}

fn points_universe(loaded: &LoadedSimplex, command: &str) -> Result<LpPointSet, Failure> {
    match &loaded.universe {
        Universe::Points(ps) => Ok(ps.clone()),
        Universe::Metric(_) => Err(Failure::input(format!(
            "{command} requires a point-set universe, the simplex file references a metric space"
        ))),
    }
}

fn cmd_gap(path: &Path, p: Option<f64>, args: ToleranceArgs) -> Result<Outcome, Failure> {
    if let Some(p) = p {
        require_exponent(p)?;
    }
    let tol = args.tolerances();
    let loaded = load_simplex_file(path, &tol)?;
    let (gap, universe_kind) = match &loaded.universe {
        Universe::Metric(space) => {
            let p = p.ok_or_else(|| {
                Failure::input("--p is required when the universe is a metric space")
            })?;
            (gamma_p(&loaded.simplex, space, p), "metric")
        }
        Universe::Points(ps) => {
            let ps = match p {
                Some(p_override) => LpPointSet::new(p_override, ps.points().to_vec(), tol.eps_c)?,
                None => ps.clone(),
            };
            (gamma_p_lp(&loaded.simplex, &ps)?, "points")
        }
    };
    let results = json!({
        "p": gap.p,
        "gamma": require_finite(gap.value, "the simplex gap")?,
        "universe": universe_kind,
        "degenerate": loaded.simplex.is_degenerate(tol.eps_w),
    });
    let inputs = json!({
        "simplex_file": path.display().to_string(),
        "s": loaded.simplex.s(),
        "t": loaded.simplex.t(),
        "p": p,
    });
    Ok(Outcome {
        stdout: AnalysisReport::new("gap", inputs, &tol, results).render(),
        code: 0,
    })
}

fn vertices_json(side: &[Vertex]) -> Value {
    Value::Array(
        side.iter()
            .map(|v| json!({"id": v.id, "w": v.weight}))
            .collect(),
    )
}

fn cmd_refine(path: &Path, args: ToleranceArgs) -> Result<Outcome, Failure> {
    let tol = args.tolerances();
    let loaded = load_simplex_file(path, &tol)?;
    let numbers = loaded.simplex.repeating_numbers();
    let repeating: Value = numbers
        .0
        .iter()
        .map(|(id, (m, n))| json!({"id": id, "m": m, "n": n}))
        .collect();
    let results = match loaded.simplex.complete_refine(tol.eps_w) {
        Refined::Degenerate => json!({
            "degenerate": true,
            "refined": null,
            "repeating_numbers": repeating,
        }),
        Refined::CompletelyRefined(r) => json!({
            "degenerate": false,
            "refined": {"x": vertices_json(r.xs()), "y": vertices_json(r.ys())},
            "repeating_numbers": repeating,
        }),
    };
    let inputs = json!({
        "simplex_file": path.display().to_string(),
        "s": loaded.simplex.s(),
        "t": loaded.simplex.t(),
    });
    Ok(Outcome {
        stdout: AnalysisReport::new("refine", inputs, &tol, results).render(),
        code: 0,
    })
}

fn cmd_vd_check(path: &Path, expect_vd: bool, args: ToleranceArgs) -> Result<Outcome, Failure> {
    let tol = args.tolerances();
    let loaded = load_simplex_file(path, &tol)?;
    let ps = points_universe(&loaded, "vd-check")?;
    let report = is_virtually_degenerate(&loaded.simplex, &ps, &tol)?;
    let gap = gamma_p_lp(&loaded.simplex, &ps)?;
    // below 2 a zero gap is equivalent to virtual degeneracy; from 2 on the
    // check is only a sufficient certificate for a zero gap
    let classification = if ps.exponent() < 2.0 {
        "equivalent-to-zero-gap"
    } else {
        "sufficient-certificate-only"
    };
    let code = if expect_vd && !report.virtually_degenerate { 1 } else { 0 };
    let results = json!({
        "virtually_degenerate": report.virtually_degenerate,
        "coordinates": to_value(&report.coordinates),
        "gamma": require_finite(gap.value, "the simplex gap")?,
        "p": ps.exponent(),
        "classification": classification,
    });
    let inputs = json!({
        "simplex_file": path.display().to_string(),
        "points": ps.len(),
        "dim": ps.dim(),
        "expect_vd": expect_vd,
    });
    Ok(Outcome {
        stdout: AnalysisReport::new("vd-check", inputs, &tol, results).render(),
        code,
    })
}

fn cmd_vd_solve(path: &Path, args: ToleranceArgs) -> Result<Outcome, Failure> {
    let tol = args.tolerances();
    let ps = load_points(path, tol.eps_c)?;
    let kernel = vd_kernel(&ps, &tol);
    let p = ps.exponent();
    let strict = if p > 0.0 && p < 2.0 {
        Some(kernel.is_trivial())
    } else {
        None
    };
    let results = json!({
        "kernel_dimension": kernel.dimension(),
        "constraint_count": kernel.constraint_count,
        "basis": to_value(&kernel.basis),
        "admits_virtually_degenerate": !kernel.is_trivial(),
        "strict_p_negative_type": strict,
        "p": p,
    });
    let inputs = json!({
        "points_file": path.display().to_string(),
        "points": ps.len(),
        "dim": ps.dim(),
    });
    Ok(Outcome {
        stdout: AnalysisReport::new("vd-solve", inputs, &tol, results).render(),
        code: 0,
    })
}

fn cmd_hilbert(path: &Path, args: ToleranceArgs) -> Result<Outcome, Failure> {
    let tol = args.tolerances();
    let loaded = load_simplex_file(path, &tol)?;
    let ps = points_universe(&loaded, "hilbert")?;
    let identity = gamma2_identity(&loaded.simplex, &ps)?;
    let classes = classify_2_polygonal(&loaded.simplex, &ps, tol.eps_w.sqrt())?;
    let results = json!({
        "lhs": require_finite(identity.lhs, "the squared balance defect")?,
        "gamma2": require_finite(identity.gap, "the simplex gap")?,
        "gap_zero": classes.gap_zero,
        "balanced": classes.balanced,
        "defect_norm": classes.defect_norm,
    });
    let inputs = json!({
        "simplex_file": path.display().to_string(),
        "points": ps.len(),
        "dim": ps.dim(),
    });
    Ok(Outcome {
        stdout: AnalysisReport::new("hilbert", inputs, &tol, results).render(),
        code: 0,
    })
}

fn cmd_affine(path: &Path, args: ToleranceArgs) -> Result<Outcome, Failure> {
    let tol = args.tolerances();
    let ps = load_points(path, tol.eps_c)?;
    let report = affine_dependence(&ps)?;
    let results = json!({
        "rank": report.rank,
        "dependent": report.dependent,
        "dependency": to_value(&report.dependency),
        "strict_2_negative_type": if ps.exponent() == 2.0 { Some(!report.dependent) } else { None },
    });
    let inputs = json!({
        "points_file": path.display().to_string(),
        "points": ps.len(),
        "dim": ps.dim(),
    });
    Ok(Outcome {
        stdout: AnalysisReport::new("affine", inputs, &tol, results).render(),
        code: 0,
    })
}

fn cmd_elsner(path: &Path, p: f64, args: ToleranceArgs) -> Result<Outcome, Failure> {
    require_exponent(p)?;
    let tol = args.tolerances();
    let families = load_families(path)?;
    let report = elsner_identity_check(&families.xs, &families.ys, p, &tol)?;
    let results = json!({
        "p": p,
        "equality_holds": report.equality_holds,
        "per_coordinate_identical": report.per_coordinate_identical,
        "residual": report.residual,
    });
    let inputs = json!({
        "families_file": path.display().to_string(),
        "family_size": families.xs.len(),
        "p": p,
    });
    Ok(Outcome {
        stdout: AnalysisReport::new("elsner", inputs, &tol, results).render(),
        code: 0,
    })
}

fn parse_vector(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| Failure::input(format!("cannot parse '{part}' as a real number")))
        })
        .collect()
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::numeric(format!("serialization failed: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    prefix.with_file_name(name)
}

fn points_file(p: f64, points: &[Vec<f64>]) -> PointsFile {
    PointsFile { p, points: points.to_vec() }
}

fn simplex_file(points: PointsFile, simplex: &SignedSimplex) -> SimplexFile {
    let side = |vs: &[Vertex]| {
        vs.iter()
            .map(|v| WeightedVertex { id: v.id, w: v.weight })
            .collect()
    };
    SimplexFile {
        universe: UniverseSpec::Points(points),
        x: side(simplex.xs()),
        y: side(simplex.ys()),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_construct(
    kind: Kind,
    out: &Path,
    n: usize,
    seed: u64,
    count: usize,
    dims: usize,
    p: f64,
    u: Option<String>,
    v: Option<String>,
    variant: bool,
    args: ToleranceArgs,
) -> Result<Outcome, Failure> {
    let tol = args.tolerances();
    let mut written: Vec<String> = Vec::new();
    let mut extra = json!({});

    let write_metric = |space: &FiniteMetricSpace, written: &mut Vec<String>| {
        let path = with_suffix(out, ".metric.json");
        write_json(&path, &MetricFile::from_space(space))?;
        written.push(path.display().to_string());
        Ok::<(), Failure>(())
    };

    match kind {
        Kind::Cycle => {
            let space = cycle_metric(n)?;
            write_metric(&space, &mut written)?;
        }
        Kind::Ultrametric => {
            let space = random_ultrametric(n, seed)?;
            write_metric(&space, &mut written)?;
        }
        Kind::Parallelogram => {
            let u = parse_vector(u.as_deref().unwrap_or("1,0"))?;
            let v = parse_vector(v.as_deref().unwrap_or("0,1"))?;
            if u.len() != v.len() {
                return Err(Failure::input("u and v must have the same length"));
            }
            let zero = vec![0.0; u.len()];
            let sum: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            let points = vec![zero, sum, u, v];
            let ps = points_file(p, &points);
            let simplex = SignedSimplex::new(
                vec![Vertex::new(0, 1.0), Vertex::new(1, 1.0)],
                vec![Vertex::new(2, 1.0), Vertex::new(3, 1.0)],
                4,
                tol.eps_w,
            )?;
            let points_path = with_suffix(out, ".points.json");
            write_json(&points_path, &ps)?;
            written.push(points_path.display().to_string());
            let simplex_path = with_suffix(out, ".simplex.json");
            write_json(&simplex_path, &simplex_file(ps, &simplex))?;
            written.push(simplex_path.display().to_string());
        }
        Kind::Counterexample4 => {
            let points = vec![
                vec![0.0, 0.0],
                vec![1.0, 1.0],
                vec![3.0, 1.0],
                vec![2.0, 0.0],
            ];
            let ps = points_file(p, &points);
            // the balanced pairing: (0,0) + (3,1) = (1,1) + (2,0)
            let simplex = SignedSimplex::new(
                vec![Vertex::new(0, 1.0), Vertex::new(2, 1.0)],
                vec![Vertex::new(1, 1.0), Vertex::new(3, 1.0)],
                4,
                tol.eps_w,
            )?;
            let points_path = with_suffix(out, ".points.json");
            write_json(&points_path, &ps)?;
            written.push(points_path.display().to_string());
            let simplex_path = with_suffix(out, ".simplex.json");
            write_json(&simplex_path, &simplex_file(ps, &simplex))?;
            written.push(simplex_path.display().to_string());
        }
        Kind::VdsPair => {
            let u = parse_vector(u.as_deref().unwrap_or("1,1,0"))?;
            let v = parse_vector(v.as_deref().unwrap_or("0,1,1"))?;
            let built = construct_vds_pair(&u, &v, tol.eps_w)?;
            let ps = points_file(p, &built.points);
            let points_path = with_suffix(out, ".points.json");
            write_json(&points_path, &ps)?;
            written.push(points_path.display().to_string());
            let simplex_path = with_suffix(out, ".simplex.json");
            write_json(&simplex_path, &simplex_file(ps, &built.simplex))?;
            written.push(simplex_path.display().to_string());
            extra = json!({"kappa": built.kappa});
        }
        Kind::Infvds => {
            let basis = if variant {
                infvds_variant_basis(count, dims)?
            } else {
                infvds_basis(count, dims)?
            };
            let ps = points_file(p, &basis.vectors);
            let points_path = with_suffix(out, ".points.json");
            write_json(&points_path, &ps)?;
            written.push(points_path.display().to_string());
            extra = json!({"pairs": to_value(&basis.pairs), "variant": variant});
        }
    }

    let results = json!({
        "kind": kind_name(kind),
        "written": written,
        "details": extra,
    });
    let inputs = json!({
        "out": out.display().to_string(),
        "n": n,
        "seed": seed,
        "count": count,
        "dims": dims,
        "p": p,
        "variant": variant,
    });
    Ok(Outcome {
        stdout: AnalysisReport::new("construct", inputs, &tol, results).render(),
        code: 0,
    })
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Parallelogram => "parallelogram",
        Kind::Counterexample4 => "counterexample4",
        Kind::VdsPair => "vds-pair",
        Kind::Infvds => "infvds",
        Kind::Cycle => "cycle",
        Kind::Ultrametric => "ultrametric",
    }
}
