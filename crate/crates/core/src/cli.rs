//! The `qso` command line.
//!
//! Exit codes: 0 on success, 1 when a check subcommand answers "no", 2 on
//! input or validation errors (reported on standard error).

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{self, AlgebraVector};
use crate::conjugacy::{self, Permutation};
use crate::dynamics;
use crate::error::QsoError;
use crate::json::{self as formats, to_canonical_string};
use crate::kernel::{self, DiscreteMeasure};
use crate::orthopreserve::{self, OpFamilySpec};
use crate::simplex::{self, SimplexPoint, EPS_SUPP};
use crate::tensor::{QsoTensor, ValidationMode};
use crate::volterra;

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Qso(#[from] QsoError),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "qso", version, about = "Quadratic stochastic operators on finite simplices")]
struct Cli {
    /// Emit machine-readable JSON (sorted keys, 17 significant digits).
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a tensor and print it in canonical form.
    Validate {
        #[command(flatten)]
        op: OpArg,
        /// Symmetrize and rescale instead of rejecting.
        #[arg(long)]
        normalize: bool,
    },
    /// Apply an operator to a point.
    Apply {
        #[command(flatten)]
        op: OpArg,
        #[arg(long, value_name = "LIST")]
        x0: String,
    },
    /// Support, absolute continuity and orthogonality of two points.
    Relate {
        #[arg(long, value_name = "LIST")]
        x0: String,
        #[arg(long, value_name = "LIST")]
        y: String,
    },
    /// Permute the coordinates of a point: `(T_σ x)_i = x_σ(i)`.
    Permute {
        #[arg(long, value_name = "LIST")]
        x0: String,
        /// 1-based images of 1..m, e.g. `2,3,1`.
        #[arg(long, value_name = "LIST")]
        perm: String,
    },
    /// Volterra operators.
    #[command(subcommand)]
    Volterra(VolterraCmd),
    /// Orthogonality-preserving operators on the 2-simplex.
    #[command(subcommand)]
    Op(OpCmd),
    /// Genetic algebra of an operator.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Operators on finite measurable spaces.
    #[command(subcommand)]
    Kernel(KernelCmd),
    /// Trajectories.
    #[command(subcommand)]
    Dyn(DynCmd),
}

#[derive(Debug, Args)]
struct OpArg {
    /// Operator file (tensor or family spec JSON); `-` reads standard input.
    #[arg(long = "op", value_name = "FILE")]
    path: PathBuf,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(long)]
    family: u8,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    gamma: f64,
}

#[derive(Debug, Subcommand)]
enum VolterraCmd {
    /// Exit 0 iff the operator is Volterra.
    Check {
        #[command(flatten)]
        op: OpArg,
    },
    /// Print the skew-symmetric canonical matrix.
    Canonical {
        #[command(flatten)]
        op: OpArg,
    },
    /// Build the operator of a skew-symmetric matrix file.
    FromCanonical {
        #[arg(long, value_name = "FILE")]
        skew: PathBuf,
    },
    /// Decide V(x) ≺ x on vertices and edge midpoints.
    Certificate {
        #[command(flatten)]
        op: OpArg,
    },
    /// Check V(x) ≺ x on random points (with random zero coordinates).
    Property {
        #[command(flatten)]
        op: OpArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
enum OpCmd {
    /// Print the tensor of a family member.
    Build {
        #[command(flatten)]
        spec: FamilyArgs,
    },
    /// Exit 0 iff the operator preserves orthogonality.
    Check {
        #[command(flatten)]
        op: OpArg,
    },
    /// Recover family and parameters.
    Classify {
        #[command(flatten)]
        op: OpArg,
    },
    /// Conjugate by a coordinate permutation.
    Conjugate {
        #[command(flatten)]
        op: OpArg,
        /// 1-based images of 1..m, e.g. `2,3,1`.
        #[arg(long, value_name = "LIST")]
        perm: String,
    },
    /// Conjugacy classes of the six families.
    Classes {
        /// Restrict to these families (repeatable); all six by default.
        #[arg(long)]
        family: Vec<u8>,
    },
}

#[derive(Debug, Subcommand)]
enum AlgebraCmd {
    /// Exit 0 iff the genetic algebra is associative.
    Check {
        #[command(flatten)]
        op: OpArg,
    },
    /// Largest associator coordinate over basis triples.
    Residual {
        #[command(flatten)]
        op: OpArg,
    },
    /// Product of two vectors.
    Product {
        #[command(flatten)]
        op: OpArg,
        #[arg(long, value_name = "LIST")]
        x0: String,
        #[arg(long, value_name = "LIST")]
        y: String,
    },
    /// Evaluate the seven reduced conditions for V2.
    System {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        gamma: f64,
    },
    /// Corner parameters at which V2 is associative.
    SolveV2 {
        /// Decide by basis triples instead of the reduced conditions.
        #[arg(long)]
        basis: bool,
    },
    /// Scan family 1 or 4 for associative members.
    Refute {
        #[arg(long)]
        family: u8,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
    },
}

#[derive(Debug, Subcommand)]
enum KernelCmd {
    /// Apply a kernel to a measure.
    Apply {
        #[command(flatten)]
        op: OpArg,
        #[arg(long, value_name = "LIST")]
        x0: String,
    },
    /// Exit 0 iff the kernel is Volterra.
    Check {
        #[command(flatten)]
        op: OpArg,
    },
    /// Exhaustive subset check (at most 12 atoms).
    Oracle {
        #[command(flatten)]
        op: OpArg,
    },
}

#[derive(Debug, Subcommand)]
enum DynCmd {
    /// Iterate from an initial point and export the trajectory as CSV.
    Iterate {
        #[command(flatten)]
        op: OpArg,
        #[arg(long, value_name = "LIST")]
        x0: String,
        #[arg(long, default_value_t = dynamics::DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long, default_value_t = dynamics::DEFAULT_TOL)]
        tol: f64,
        /// CSV destination; standard output when omitted.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Vertices fixed by the operator.
    Fixed {
        #[command(flatten)]
        op: OpArg,
        #[arg(long, default_value_t = dynamics::DEFAULT_TOL)]
        tol: f64,
    },
}

/// The clap command tree, for help generation and coverage checks.
pub fn command() -> clap::Command {
    Cli::command()
}

/// Runs the CLI against the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI with explicit output streams; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    let mut ctx = Ctx { json: cli.json, out };
    match execute(cli.command, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let name = match &e {
                CliError::Qso(q) => error_name(q),
                CliError::Io(_) => "Io",
                CliError::Usage(_) => "Usage",
            };
            let _ = writeln!(err, "error: {name}: {e}");
            2
        }
    }
}

fn error_name(e: &QsoError) -> &'static str {
    match e {
        QsoError::DimensionMismatch { .. } => "DimensionMismatch",
        QsoError::InvalidDimension(..) => "InvalidDimension",
        QsoError::NotCubic(_) => "NotCubic",
        QsoError::NonFinite { .. } => "NonFinite",
        QsoError::NegativeCoefficient { .. } => "NegativeCoefficient",
        QsoError::NotSymmetric { .. } => "NotSymmetric",
        QsoError::NotStochastic { .. } => "NotStochastic",
        QsoError::NotInSimplex(_) => "NotInSimplex",
        QsoError::NotVolterra { .. } => "NotVolterra",
        QsoError::InvalidSkew(_) => "InvalidSkew",
        QsoError::InvalidFamily(_) => "InvalidFamily",
        QsoError::ParameterOutOfRange { .. } => "ParameterOutOfRange",
        QsoError::DimensionUnsupported(_) => "DimensionUnsupported",
        QsoError::NotOrthogonalityPreserving(_) => "NotOrthogonalityPreserving",
        QsoError::VertexImageNotVertex { .. } => "VertexImageNotVertex",
        QsoError::InvalidPermutation(_) => "InvalidPermutation",
        QsoError::InvalidKernel(_) => "InvalidKernel",
        QsoError::InvalidMeasure(_) => "InvalidMeasure",
        QsoError::TooLarge(..) => "TooLarge",
        QsoError::InvalidArgument(_) => "InvalidArgument",
        QsoError::Format(_) => "Format",
    }
}

struct Ctx<'a> {
    json: bool,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, value: Value, human: impl FnOnce() -> String) -> CliResult<()> {
        let text = if self.json {
            to_canonical_string(&value)
        } else {
            human()
        };
        writeln!(self.out, "{text}").map_err(|e| CliError::Io(e.to_string()))
    }
}

fn read_input(path: &PathBuf) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_operator(op: &OpArg, mode: ValidationMode) -> CliResult<QsoTensor> {
    Ok(formats::parse_operator(&read_input(&op.path)?, mode)?)
}

fn parse_list(text: &str, what: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{what}: cannot parse {s:?} as a number")))
        })
        .collect()
}

fn parse_point(text: &str, what: &str) -> CliResult<SimplexPoint> {
    Ok(SimplexPoint::new(parse_list(text, what)?)?)
}

fn parse_permutation(text: &str) -> CliResult<Permutation> {
    let images: Vec<usize> = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("--perm: cannot parse {s:?}")))
        })
        .collect::<CliResult<_>>()?;
    Ok(Permutation::from_one_based(&images)?)
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|c| formats::format_float(*c)).collect();
    format!("({})", parts.join(", "))
}

fn verdict(flag: bool) -> i32 {
    if flag {
        0
    } else {
        1
    }
}

fn execute(command: Command, ctx: &mut Ctx) -> CliResult<i32> {
    match command {
        Command::Validate { op, normalize } => {
            let mode = if normalize {
                ValidationMode::Normalize
            } else {
                ValidationMode::Strict
            };
            let v = load_operator(&op, mode)?;
            let value = formats::tensor_value(&v);
            let text = to_canonical_string(&value);
            ctx.emit(value, || format!("valid: m = {}\n{text}", v.dim()))?;
            Ok(0)
        }
        Command::Apply { op, x0 } => {
            let v = load_operator(&op, ValidationMode::Strict)?;
            let image = v.apply(&parse_point(&x0, "--x0")?)?;
            ctx.emit(formats::point_value(&image), || fmt_vec(image.coords()))?;
            Ok(0)
        }
        Command::Relate { x0, y } => {
            let (x, y) = (parse_point(&x0, "--x0")?, parse_point(&y, "--y")?);
            let (sx, sy) = (simplex::support(&x, EPS_SUPP), simplex::support(&y, EPS_SUPP));
            let ac_xy = simplex::abs_continuous(&x, &y)?;
            let ac_yx = simplex::abs_continuous(&y, &x)?;
            let orth = simplex::orthogonal(&x, &y)?;
            let dot = x.dot(&y)?;
            ctx.emit(
                json!({
                    "support_x": sx.one_based(),
                    "support_y": sy.one_based(),
                    "x_abs_continuous_y": ac_xy,
                    "y_abs_continuous_x": ac_yx,
                    "equivalent": ac_xy && ac_yx,
                    "orthogonal": orth,
                    "dot": dot,
                }),
                || {
                    format!(
                        "supp(x) = {sx}\nsupp(y) = {sy}\nx ≺ y: {ac_xy}\ny ≺ x: {ac_yx}\northogonal: {orth}\ndot: {}",
                        formats::format_float(dot)
                    )
                },
            )?;
            Ok(0)
        }
        Command::Permute { x0, perm } => {
            let image = conjugacy::permute_point(&parse_permutation(&perm)?, &parse_point(&x0, "--x0")?)?;
            ctx.emit(formats::point_value(&image), || fmt_vec(image.coords()))?;
            Ok(0)
        }
        Command::Volterra(cmd) => volterra_cmd(cmd, ctx),
        Command::Op(cmd) => op_cmd(cmd, ctx),
        Command::Algebra(cmd) => algebra_cmd(cmd, ctx),
        Command::Kernel(cmd) => kernel_cmd(cmd, ctx),
        Command::Dyn(cmd) => dyn_cmd(cmd, ctx),
    }
}

fn volterra_cmd(cmd: VolterraCmd, ctx: &mut Ctx) -> CliResult<i32> {
    match cmd {
        VolterraCmd::Check { op } => {
            let flag = volterra::is_volterra(&load_operator(&op, ValidationMode::Strict)?);
            ctx.emit(json!({ "volterra": flag }), || format!("volterra: {flag}"))?;
            Ok(verdict(flag))
        }
        VolterraCmd::Canonical { op } => {
            let a = volterra::to_canonical(&load_operator(&op, ValidationMode::Strict)?)?;
            let value = serde_json::to_value(formats::SkewJson::from_skew(&a)).expect("serializable");
            let text = to_canonical_string(&value);
            ctx.emit(value, || text)?;
            Ok(0)
        }
        VolterraCmd::FromCanonical { skew } => {
            let a = formats::parse_skew(&read_input(&skew)?)?;
            let value = formats::tensor_value(&volterra::from_canonical(&a));
            let text = to_canonical_string(&value);
            ctx.emit(value, || text)?;
            Ok(0)
        }
        VolterraCmd::Certificate { op } => {
            let v = load_operator(&op, ValidationMode::Strict)?;
            let witness = volterra::volterra_certificate_witness(&v);
            let flag = witness.is_none();
            let w = witness.as_ref().map(|p| p.coords().to_vec());
            ctx.emit(json!({ "certificate": flag, "witness": w }), || match &w {
                None => "certificate: true".to_string(),
                Some(p) => format!("certificate: false (V(x) ⊀ x at x = {})", fmt_vec(p)),
            })?;
            Ok(verdict(flag))
        }
        VolterraCmd::Property { op, samples, seed } => {
            let v = load_operator(&op, ValidationMode::Strict)?;
            let mut rng = StdRng::seed_from_u64(seed);
            let points: Vec<SimplexPoint> = (0..samples)
                .map(|_| SimplexPoint::random_with_zeros(v.dim(), &mut rng))
                .collect();
            let flag = volterra::check_abs_continuity_property(&v, &points)?;
            ctx.emit(
                json!({ "abs_continuous": flag, "samples": samples, "seed": seed }),
                || format!("V(x) ≺ x on {samples} samples: {flag}"),
            )?;
            Ok(verdict(flag))
        }
    }
}

fn op_cmd(cmd: OpCmd, ctx: &mut Ctx) -> CliResult<i32> {
    match cmd {
        OpCmd::Build { spec } => {
            let spec = OpFamilySpec::new(spec.family, spec.alpha, spec.beta, spec.gamma)?;
            let value = formats::tensor_value(&orthopreserve::op_family(&spec)?);
            let text = to_canonical_string(&value);
            ctx.emit(value, || text)?;
            Ok(0)
        }
        OpCmd::Check { op } => {
            let flag = orthopreserve::is_orthogonality_preserving(&load_operator(&op, ValidationMode::Strict)?)?;
            ctx.emit(json!({ "orthogonality_preserving": flag }), || {
                format!("orthogonality preserving: {flag}")
            })?;
            Ok(verdict(flag))
        }
        OpCmd::Classify { op } => {
            let spec = orthopreserve::classify_op(&load_operator(&op, ValidationMode::Strict)?)?;
            ctx.emit(serde_json::to_value(spec).expect("serializable"), || {
                format!(
                    "family {} (alpha = {}, beta = {}, gamma = {})",
                    spec.family,
                    formats::format_float(spec.alpha),
                    formats::format_float(spec.beta),
                    formats::format_float(spec.gamma)
                )
            })?;
            Ok(0)
        }
        OpCmd::Conjugate { op, perm } => {
            let v = load_operator(&op, ValidationMode::Strict)?;
            let w = conjugacy::conjugate(&v, &parse_permutation(&perm)?)?;
            let value = formats::tensor_value(&w);
            let text = to_canonical_string(&value);
            ctx.emit(value, || text)?;
            Ok(0)
        }
        OpCmd::Classes { family } => {
            let families = if family.is_empty() {
                vec![1, 2, 3, 4, 5, 6]
            } else {
                family
            };
            let classes = conjugacy::conjugacy_classes(&families)?;
            ctx.emit(json!(classes), || {
                classes
                    .iter()
                    .map(|c| format!("{{{}}}", c.iter().map(u8::to_string).collect::<Vec<_>>().join(",")))
                    .collect::<Vec<_>>()
                    .join(" ")
            })?;
            Ok(0)
        }
    }
}

fn triple_json(t: &[(f64, f64, f64)]) -> Value {
    json!(t.iter().map(|&(a, b, g)| vec![a, b, g]).collect::<Vec<_>>())
}

fn algebra_cmd(cmd: AlgebraCmd, ctx: &mut Ctx) -> CliResult<i32> {
    match cmd {
        AlgebraCmd::Check { op } => {
            let v = load_operator(&op, ValidationMode::Strict)?;
            let flag = algebra::is_associative(&v);
            ctx.emit(json!({ "associative": flag }), || format!("associative: {flag}"))?;
            Ok(verdict(flag))
        }
        AlgebraCmd::Residual { op } => {
            let r = algebra::associator_residual(&load_operator(&op, ValidationMode::Strict)?);
            ctx.emit(json!({ "residual": r }), || {
                format!("associator residual: {}", formats::format_float(r))
            })?;
            Ok(0)
        }
        AlgebraCmd::Product { op, x0, y } => {
            let v = load_operator(&op, ValidationMode::Strict)?;
            let x = AlgebraVector::new(parse_list(&x0, "--x0")?)?;
            let y = AlgebraVector::new(parse_list(&y, "--y")?)?;
            let p = algebra::product(&v, &x, &y)?;
            ctx.emit(json!({ "product": p.coords() }), || fmt_vec(p.coords()))?;
            Ok(0)
        }
        AlgebraCmd::System { alpha, beta, gamma } => {
            let r = algebra::v2_condition_system(alpha, beta, gamma);
            let holds = algebra::v2_system_holds(alpha, beta, gamma);
            ctx.emit(json!({ "residuals": r, "holds": holds }), || {
                format!("{} holds: {holds}", fmt_vec(&r))
            })?;
            Ok(0)
        }
        AlgebraCmd::SolveV2 { basis } => {
            let solutions = if basis {
                algebra::associative_v2_corners()
            } else {
                algebra::assoc_solutions_v2()
            };
            ctx.emit(triple_json(&solutions), || {
                solutions
                    .iter()
                    .map(|&(a, b, g)| format!("alpha = {a}, beta = {b}, gamma = {g}"))
                    .collect::<Vec<_>>()
                    .join("\n")
            })?;
            Ok(0)
        }
        AlgebraCmd::Refute { family, step } => {
            let report = algebra::refute_associativity(family, step)?;
            ctx.emit(
                json!({
                    "min_residual": report.min_residual,
                    "argmin": report.argmin,
                    "grid_step": report.grid_step,
                    "corner_min_residual": report.corner_min_residual,
                }),
                || {
                    format!(
                        "family {family}: min residual {} at {} (grid step {step}, {} points); corner minimum {}",
                        formats::format_float(report.min_residual),
                        fmt_vec(&report.argmin),
                        report.grid_points,
                        formats::format_float(report.corner_min_residual)
                    )
                },
            )?;
            Ok(0)
        }
    }
}

fn kernel_cmd(cmd: KernelCmd, ctx: &mut Ctx) -> CliResult<i32> {
    match cmd {
        KernelCmd::Apply { op, x0 } => {
            let k = formats::parse_kernel(&read_input(&op.path)?)?;
            let lambda = DiscreteMeasure::new(parse_list(&x0, "--x0")?)?;
            let image = kernel::kernel_apply(&k, &lambda)?;
            ctx.emit(json!({ "weights": image.weights() }), || fmt_vec(image.weights()))?;
            Ok(0)
        }
        KernelCmd::Check { op } => {
            let flag = kernel::kernel_is_volterra(&formats::parse_kernel(&read_input(&op.path)?)?);
            ctx.emit(json!({ "volterra": flag }), || format!("volterra: {flag}"))?;
            Ok(verdict(flag))
        }
        KernelCmd::Oracle { op } => {
            let report = kernel::kernel_volterra_oracle(&formats::parse_kernel(&read_input(&op.path)?)?)?;
            let witness = report
                .witness
                .as_ref()
                .map(|w| json!({ "subset": w.subset, "x": w.x, "y": w.y, "mass": w.mass }));
            ctx.emit(
                json!({
                    "volterra": report.volterra,
                    "witness": witness,
                    "measures_checked": report.measures_checked,
                    "measure_violation": report.measure_violation,
                }),
                || match &report.witness {
                    Some(w) => format!(
                        "volterra: false (P({}, {}, {:?}) = {})",
                        w.x,
                        w.y,
                        w.subset,
                        formats::format_float(w.mass)
                    ),
                    None => format!(
                        "volterra: {} ({} measures checked)",
                        report.volterra, report.measures_checked
                    ),
                },
            )?;
            Ok(verdict(report.volterra))
        }
    }
}

fn dyn_cmd(cmd: DynCmd, ctx: &mut Ctx) -> CliResult<i32> {
    match cmd {
        DynCmd::Iterate {
            op,
            x0,
            max_iter,
            tol,
            out,
        } => {
            let v = load_operator(&op, ValidationMode::Strict)?;
            let traj = dynamics::iterate(&v, &parse_point(&x0, "--x0")?, max_iter, tol)?;
            let summary = json!({
                "status": traj.status.to_string(),
                "iterations": traj.iterations,
                "last": traj.last().coords(),
            });
            match out {
                Some(path) => {
                    let file =
                        std::fs::File::create(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    traj.write_csv(std::io::BufWriter::new(file))
                        .map_err(|e| CliError::Io(e.to_string()))?;
                    ctx.emit(summary, || {
                        format!(
                            "{} after {} iterations; wrote {}",
                            traj.status,
                            traj.iterations,
                            path.display()
                        )
                    })?;
                }
                None => {
                    traj.write_csv(&mut *ctx.out).map_err(|e| CliError::Io(e.to_string()))?;
                }
            }
            Ok(0)
        }
        DynCmd::Fixed { op, tol } => {
            let fixed: Vec<usize> =
                dynamics::fixed_points_on_vertices(&load_operator(&op, ValidationMode::Strict)?, tol)
                    .into_iter()
                    .map(|k| k + 1)
                    .collect();
            ctx.emit(json!({ "fixed_vertices": fixed }), || {
                format!("fixed vertices: {fixed:?}")
            })?;
            Ok(0)
        }
    }
}
