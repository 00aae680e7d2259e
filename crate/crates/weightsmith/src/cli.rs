//! Command-line surface: builds networks from closed-form weight recipes,
//! re-expresses them in deeper architectures, evaluates them on point files,
//! runs the verification studies, and prints parameter reports.
//!
//! This is the only module that touches the filesystem. The exit-code
//! contract is uniform across subcommands: 0 on success (and when every
//! checked assertion passes), 1 on a verification failure, 2 on usage,
//! parse, or I/O problems, and 3 on violated construction preconditions.
//!
//! The primary artifact of a command (a network document or a CSV table)
//! goes to `-o` when given and to stdout otherwise; human-readable summary
//! lines move to stderr whenever the artifact occupies stdout, so piped
//! output stays parseable. Every randomized subcommand requires an explicit
//! `--seed`, which makes identical invocations produce byte-identical files.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::activation::Activation;
use crate::analysis::convergence_study;
use crate::analysis::{cauchy_obstruction_report, runge_table};
use crate::deep::{
    densenet_from_mlp, densenet_from_shallow, mlp_from_shallow, resnet_embedding_param_count,
    resnet_from_shallow, resnet_poly_general, resnet_poly_square,
};
use crate::document::NetworkDocument;
use crate::error::{Error, Result};
use crate::field::{re, FieldTag, Scalar};
use crate::grid::BoxGrid;
use crate::harmonic::{
    fundamental_system_det, hp_basis, hp_dim, random_harmonic_net, rotation_span_rank,
    seeded_box_points, verify_network_harmonic, GegenbauerParams, HarmonicSigma,
};
use crate::poly::{MPoly, MultiIndex};
use crate::relu::{
    mlp_exact_from_shallow_relu, resnet_max_affine, shallow_from_c2, AffinePiece, C2Function,
};
use crate::shallow::{build_monomial_1d, build_polynomial, ShallowNet};
use crate::table::ResultTable;

/// Fixed seed for the deterministic sample set used by the `embed`
/// self-check. Embedding is not a randomized subcommand — its output file
/// depends only on the input document and flags — so the check points are
/// pinned here instead of being caller-provided.
const SELF_CHECK_SEED: u64 = 0x5EED_CAFE;
const SELF_CHECK_POINTS: usize = 120;

#[derive(Parser)]
#[command(
    name = "weightsmith",
    version,
    about = "Constructive network weights over R and C: builders, embeddings, evaluation, and verification studies"
)]
struct Cli {
    /// Scalar field for constructions.
    #[arg(long, global = true, value_enum, default_value_t = FieldArg::R)]
    field: FieldArg,

    /// RNG seed; required by every randomized subcommand.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output file for the command's artifact; stdout when omitted.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    /// Input network document.
    #[arg(short, long, global = true)]
    input: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    /// Real weights and inputs.
    #[value(name = "R", alias = "r")]
    R,
    /// Complex weights and inputs.
    #[value(name = "C", alias = "c")]
    C,
}

impl From<FieldArg> for FieldTag {
    fn from(f: FieldArg) -> FieldTag {
        match f {
            FieldArg::R => FieldTag::Real,
            FieldArg::C => FieldTag::Complex,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Construct a network from scratch and write it as a JSON document.
    Build {
        #[command(subcommand)]
        kind: BuildCmd,
    },
    /// Re-express an existing network in a deeper architecture.
    Embed {
        #[command(subcommand)]
        kind: EmbedCmd,
    },
    /// Evaluate a network document on a CSV file of points.
    Eval {
        /// CSV of evaluation points, one point per row; complex coordinates
        /// as re,im column pairs.
        #[arg(long)]
        points: PathBuf,
    },
    /// Run a verification study and write its result table.
    Verify {
        #[command(subcommand)]
        kind: VerifyCmd,
    },
    /// Summarize a network document: architecture, parameter count, and the
    /// closed-form count when the shape is recognized.
    Report,
}

#[derive(Subcommand)]
enum BuildCmd {
    /// Shallow net whose output recovers a single monomial as the weight
    /// scale shrinks; degree m costs m+1 neurons.
    ShallowMonomial {
        /// Activation with a power series: exp, sin, cos, sinh, cosh,
        /// square, cube, or poly:c0,c1,...
        #[arg(long, default_value = "exp")]
        activation: String,
        /// Monomial degree.
        #[arg(long)]
        degree: usize,
        /// Weight scale; the approximation error shrinks with it.
        #[arg(long)]
        gamma: f64,
        /// Cancel the activation tail exactly (polynomial activations only).
        #[arg(long)]
        pure: bool,
    },
    /// Shallow net approximating a multivariate polynomial read from CSV.
    ShallowPoly {
        /// Polynomial CSV: one row per term, e1,...,ed,re under R and
        /// e1,...,ed,re,im under C.
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, default_value = "exp")]
        activation: String,
        /// Weight scale.
        #[arg(long)]
        gamma: f64,
        /// Offset scale separating the shifted replicas.
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
    },
    /// Residual net computing a polynomial: exactly with the square
    /// activation, to finite-difference accuracy otherwise.
    ResnetPoly {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, default_value = "square")]
        activation: String,
        /// Probe step for the general-activation builder (required when the
        /// activation is not square).
        #[arg(long)]
        step: Option<f64>,
        /// Series expansion point for the general-activation builder.
        #[arg(long)]
        center: Option<f64>,
    },
    /// Rectifier net interpolating a named twice-differentiable target on an
    /// interval; the error halves when the segment count doubles.
    ReluC2 {
        /// Target function: square, exp, or sin.
        #[arg(long)]
        target: String,
        /// Number of interpolation segments.
        #[arg(long)]
        nodes: usize,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 1.0)]
        hi: f64,
    },
    /// Residual rectifier net computing a maximum of affine pieces exactly.
    ReluMaxaffine {
        /// CSV of pieces: one row per piece, w1,...,wd,b.
        #[arg(long)]
        pieces: PathBuf,
    },
    /// Random harmonic network (requires --seed).
    HarmonicNet {
        /// Activation profile: expcos, u2-v2, u3-3uv2, or the deliberately
        /// non-harmonic control u2.
        #[arg(long, default_value = "expcos")]
        sigma: String,
        /// Ambient dimension.
        #[arg(long, default_value_t = 3)]
        hdim: usize,
    },
}

#[derive(Subcommand)]
enum EmbedCmd {
    /// Shallow net -> residual net, exactly, one neuron per block slot.
    Resnet {
        /// Block widths; must sum to the source neuron count.
        #[arg(long, value_delimiter = ',', required = true)]
        widths: Vec<usize>,
        /// Fail (exit 1) when the self-check error exceeds this bound.
        #[arg(long)]
        max_error: Option<f64>,
    },
    /// Shallow net (series activation) -> MLP, accurate to --epsilon on the
    /// unit box.
    Mlp {
        #[arg(long, value_delimiter = ',', required = true)]
        widths: Vec<usize>,
        /// Accuracy budget for the hidden identity lanes.
        #[arg(long)]
        epsilon: f64,
        /// Series expansion point for the lane linearization.
        #[arg(long)]
        center: Option<f64>,
        #[arg(long)]
        max_error: Option<f64>,
    },
    /// Shallow net or MLP -> DenseNet, exactly.
    Densenet {
        #[arg(long)]
        max_error: Option<f64>,
    },
    /// Rectifier shallow net -> MLP, exactly on a box.
    ReluMlp {
        #[arg(long, value_delimiter = ',', required = true)]
        widths: Vec<usize>,
        /// Box lower corner: one value per coordinate, or a single value
        /// broadcast to every coordinate.
        #[arg(long, value_delimiter = ',', default_values_t = vec![-1.0])]
        lo: Vec<f64>,
        /// Box upper corner, same shape rules as --lo.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.0])]
        hi: Vec<f64>,
        #[arg(long)]
        max_error: Option<f64>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Moment gap on a circle: the residue witness against vanishing
    /// polynomial moments.
    Cauchy {
        /// Pole order of the witness.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Annulus radii r,R with 0 < r < R; the contour runs at their
        /// midpoint.
        #[arg(long, value_delimiter = ',', required = true)]
        annulus: Vec<f64>,
        /// CSV of one candidate polynomial (univariate, complex
        /// coefficients); default candidates are the monomials 1..z^4.
        #[arg(long)]
        polys: Option<PathBuf>,
        /// Allowed distance of the witness integral from its exact value.
        #[arg(long, default_value_t = 1e-10)]
        tol_target: f64,
        /// Allowed magnitude of every candidate moment.
        #[arg(long, default_value_t = 1e-12)]
        tol_poly: f64,
    },
    /// Finite-difference Laplacian of a harmonic network document at random
    /// interior points (requires --seed).
    Harmonic {
        /// Number of sample points.
        #[arg(long, default_value_t = 100)]
        points: usize,
        /// Finite-difference step.
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Largest tolerated |Laplacian|.
        #[arg(long, default_value_t = 1e-5)]
        max_error: f64,
    },
    /// Equidistant-node interpolation error growth on the classic rational
    /// witness.
    Runge {
        /// Strictly increasing node counts, e.g. 5,9,13.
        #[arg(long, value_delimiter = ',', required = true)]
        nodes: Vec<usize>,
    },
    /// Error-halving study for a named builder.
    Convergence {
        /// Study id: shallow-monomial, resnet-poly-general, or mlp-embed.
        #[arg(long)]
        study: String,
        /// Strictly decreasing list of study parameters.
        #[arg(long, value_delimiter = ',', required = true)]
        params: Vec<f64>,
        /// Target degree (where the study uses one).
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value = "exp")]
        activation: String,
        /// Grid dimension; defaults to the study's natural dimension.
        #[arg(long)]
        dim: Option<usize>,
        /// Largest allowed successive error ratio; defaults per study.
        #[arg(long)]
        max_ratio: Option<f64>,
    },
    /// Rank of the span of randomly rotated copies of a degree-j harmonic
    /// polynomial in three variables (requires --seed).
    Rotation {
        /// Homogeneity degree j; the expected rank is 2j+1.
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// Number of random rotations; default 3(2j+1).
        #[arg(long)]
        rotations: Option<usize>,
    },
    /// Determinant of a random fundamental system on the unit sphere
    /// (requires --seed).
    Fundamental {
        /// Degree of the zonal family.
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Ambient dimension (>= 3).
        #[arg(long, default_value_t = 3)]
        sphere_dim: usize,
        /// Number of sphere points; default: the full system size.
        #[arg(long)]
        count: Option<usize>,
    },
}

/// Entry point for the binary: parses argv, dispatches, and maps every error
/// onto the documented exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own message; --help/--version report 0, flag
            // errors report 2, matching the usage-error contract.
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Build { kind } => run_build(cli, kind),
        Command::Embed { kind } => run_embed(cli, kind),
        Command::Eval { points } => run_eval(cli, points),
        Command::Verify { kind } => run_verify(cli, kind),
        Command::Report => run_report(cli),
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

fn read_file(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|source| Error::Io { path: path.display().to_string(), source })
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|source| Error::Io { path: path.display().to_string(), source })
}

/// Writes the command's primary artifact to `-o`, or to stdout when `-o` is
/// absent. Returns true when stdout was used, so commentary can move to
/// stderr and keep the artifact parseable.
fn emit_artifact(text: &str, output: &Option<PathBuf>) -> Result<bool> {
    match output {
        Some(path) => {
            write_file(path, text)?;
            Ok(false)
        }
        None => {
            // A closed stdout (e.g. piping into `head`) must not turn into a
            // panic; the artifact consumer chose to stop reading.
            use std::io::Write;
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(true)
        }
    }
}

/// One line of human-readable commentary, routed away from the artifact
/// stream. Write failures (closed pipes) are deliberately ignored.
fn note(artifact_on_stdout: bool, line: String) {
    use std::io::Write;
    if artifact_on_stdout {
        let _ = writeln!(std::io::stderr(), "{line}");
    } else {
        let _ = writeln!(std::io::stdout(), "{line}");
    }
}

fn need_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.ok_or_else(|| {
        Error::Usage(format!("{what} is randomized and needs --seed <u64> for reproducibility"))
    })
}

fn need_input<'a>(input: &'a Option<PathBuf>, what: &str) -> Result<&'a PathBuf> {
    input
        .as_ref()
        .ok_or_else(|| Error::Usage(format!("{what} needs -i <document>")))
}

fn require_real(field: FieldTag, what: &str) -> Result<()> {
    if field == FieldTag::Complex {
        return Err(Error::Usage(format!("{what} is real-valued; use --field R")));
    }
    Ok(())
}

fn field_name(field: FieldTag) -> &'static str {
    match field {
        FieldTag::Real => "R",
        FieldTag::Complex => "C",
    }
}

fn parse_activation(spec: &str, field: FieldTag) -> Result<Activation> {
    match spec {
        "exp" => Ok(Activation::exp(field)),
        "sin" => Ok(Activation::sin(field)),
        "cos" => Ok(Activation::cos(field)),
        "sinh" => Ok(Activation::sinh(field)),
        "cosh" => Ok(Activation::cosh(field)),
        "identity" => Ok(Activation::identity(field)),
        "square" => Ok(Activation::monomial(2, field)),
        "cube" => Ok(Activation::monomial(3, field)),
        "relu" => {
            require_real(field, "the relu activation")?;
            Ok(Activation::relu())
        }
        s if s.starts_with("leaky-relu:") => {
            require_real(field, "the leaky-relu activation")?;
            let slope = s["leaky-relu:".len()..]
                .parse::<f64>()
                .map_err(|_| Error::Usage(format!("bad leaky-relu slope in '{s}'")))?;
            Activation::leaky_relu(slope)
        }
        s if s.starts_with("poly:") => {
            let coeffs = s["poly:".len()..]
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<f64>()
                        .map(re)
                        .map_err(|_| Error::Usage(format!("bad polynomial coefficient '{tok}'")))
                })
                .collect::<Result<Vec<Scalar>>>()?;
            Activation::polynomial(coeffs, field)
        }
        other => Err(Error::Usage(format!(
            "unknown activation '{other}'; expected exp, sin, cos, sinh, cosh, identity, \
             square, cube, relu, leaky-relu:<slope>, or poly:<c0,c1,...>"
        ))),
    }
}

/// Splits CSV text into (1-based line number, trimmed fields), skipping blank
/// lines; tolerates CRLF endings.
fn csv_rows(text: &str) -> Vec<(usize, Vec<String>)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim_end_matches('\r')))
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(n, line)| (n, line.split(',').map(|f| f.trim().to_string()).collect()))
        .collect()
}

fn parse_number(tok: &str, line: usize) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| Error::parse(format!("line {line}: '{tok}' is not a number")))
}

fn parse_exponent(tok: &str, line: usize) -> Result<u32> {
    tok.parse::<u32>().map_err(|_| {
        Error::parse(format!("line {line}: '{tok}' is not a non-negative integer exponent"))
    })
}

/// Parses a polynomial file: one row per term, `e1,...,ed,re` under the real
/// tag and `e1,...,ed,re,im` under the complex tag. The first row fixes the
/// column count, which fixes the variable count.
fn parse_poly_csv(text: &str, field: FieldTag) -> Result<MPoly> {
    let rows = csv_rows(text);
    let coeff_cols = match field {
        FieldTag::Real => 1,
        FieldTag::Complex => 2,
    };
    let first = rows
        .first()
        .ok_or_else(|| Error::parse("polynomial file has no rows"))?;
    if first.1.len() < coeff_cols + 1 {
        return Err(Error::parse(format!(
            "line {}: a term row needs at least one exponent and {} coefficient column(s)",
            first.0, coeff_cols
        )));
    }
    let dim = first.1.len() - coeff_cols;
    let mut p = MPoly::zero(dim, field);
    for (line, toks) in &rows {
        if toks.len() != dim + coeff_cols {
            return Err(Error::parse(format!(
                "line {line}: expected {} columns, got {}",
                dim + coeff_cols,
                toks.len()
            )));
        }
        let exps = toks[..dim]
            .iter()
            .map(|t| parse_exponent(t, *line))
            .collect::<Result<Vec<u32>>>()?;
        let re_part = parse_number(&toks[dim], *line)?;
        let c = match field {
            FieldTag::Real => re(re_part),
            FieldTag::Complex => Scalar::new(re_part, parse_number(&toks[dim + 1], *line)?),
        };
        p.add_term(MultiIndex(exps), c)?;
    }
    Ok(p)
}

/// Parses an evaluation-point file for a network over `field` with input
/// dimension `dim`: real points use one column per coordinate, complex
/// points use re,im column pairs.
fn parse_points_csv(text: &str, field: FieldTag, dim: usize) -> Result<Vec<Vec<Scalar>>> {
    let cols = match field {
        FieldTag::Real => dim,
        FieldTag::Complex => 2 * dim,
    };
    csv_rows(text)
        .iter()
        .map(|(line, toks)| {
            if toks.len() != cols {
                return Err(Error::parse(format!(
                    "line {line}: expected {cols} columns for a dimension-{dim} network over {}, got {}",
                    field_name(field),
                    toks.len()
                )));
            }
            match field {
                FieldTag::Real => toks
                    .iter()
                    .map(|t| parse_number(t, *line).map(re))
                    .collect::<Result<Vec<Scalar>>>(),
                FieldTag::Complex => toks
                    .chunks(2)
                    .map(|pair| {
                        Ok(Scalar::new(
                            parse_number(&pair[0], *line)?,
                            parse_number(&pair[1], *line)?,
                        ))
                    })
                    .collect::<Result<Vec<Scalar>>>(),
            }
        })
        .collect()
}

/// Parses affine pieces: one row per piece, `w1,...,wd,b`.
fn parse_pieces_csv(text: &str) -> Result<Vec<AffinePiece>> {
    let rows = csv_rows(text);
    let first = rows
        .first()
        .ok_or_else(|| Error::parse("pieces file has no rows"))?;
    if first.1.len() < 2 {
        return Err(Error::parse(format!(
            "line {}: a piece row needs at least one slope and one offset column",
            first.0
        )));
    }
    let dim = first.1.len() - 1;
    rows.iter()
        .map(|(line, toks)| {
            if toks.len() != dim + 1 {
                return Err(Error::parse(format!(
                    "line {line}: expected {} columns, got {}",
                    dim + 1,
                    toks.len()
                )));
            }
            let w = toks[..dim]
                .iter()
                .map(|t| parse_number(t, *line))
                .collect::<Result<Vec<f64>>>()?;
            let b = parse_number(&toks[dim], *line)?;
            Ok(AffinePiece { w, b })
        })
        .collect()
}

fn named_c2(name: &str, lo: f64, hi: f64) -> Result<C2Function> {
    match name {
        "square" => C2Function::new(|x| x * x, |x| 2.0 * x, |_| 2.0, lo, hi),
        "exp" => C2Function::new(f64::exp, f64::exp, f64::exp, lo, hi),
        "sin" => C2Function::new(f64::sin, f64::cos, |x| -x.sin(), lo, hi),
        other => Err(Error::Usage(format!(
            "unknown target '{other}'; expected square, exp, or sin"
        ))),
    }
}

fn sigma_from_terms(dim: usize, terms: &[(&[u32], f64)]) -> Result<HarmonicSigma> {
    let mut p = MPoly::zero(dim, FieldTag::Real);
    for (exps, c) in terms {
        p.add_term(MultiIndex(exps.to_vec()), re(*c))?;
    }
    HarmonicSigma::poly_unchecked(p)
}

fn named_sigma(name: &str) -> Result<HarmonicSigma> {
    match name {
        "expcos" => Ok(HarmonicSigma::exp_cos()),
        "u2-v2" => sigma_from_terms(2, &[(&[2, 0], 1.0), (&[0, 2], -1.0)]),
        "u3-3uv2" => sigma_from_terms(2, &[(&[3, 0], 1.0), (&[1, 2], -3.0)]),
        "u2" => sigma_from_terms(1, &[(&[2], 1.0)]),
        other => Err(Error::Usage(format!(
            "unknown sigma '{other}'; expected expcos, u2-v2, u3-3uv2, or u2"
        ))),
    }
}

/// Deterministic sample points in the box [lo, hi] (complex coordinates stay
/// inside the per-coordinate disk of the same radius).
fn self_check_points(field: FieldTag, lo: &[f64], hi: &[f64], count: usize) -> Vec<Vec<Scalar>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SELF_CHECK_SEED);
    let dim = lo.len();
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|i| match field {
                    FieldTag::Real => re(rng.gen_range(lo[i]..=hi[i])),
                    FieldTag::Complex => {
                        let s = std::f64::consts::FRAC_1_SQRT_2;
                        Scalar::new(
                            rng.gen_range(lo[i] * s..=hi[i] * s),
                            rng.gen_range(lo[i] * s..=hi[i] * s),
                        )
                    }
                })
                .collect()
        })
        .collect()
}

fn random_unit_points(seed: u64, count: usize, dim: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            points.push(v.iter().map(|x| x / norm).collect());
        }
    }
    points
}

fn broadcast(vals: &[f64], dim: usize, flag: &str) -> Result<Vec<f64>> {
    if vals.len() == dim {
        Ok(vals.to_vec())
    } else if vals.len() == 1 {
        Ok(vec![vals[0]; dim])
    } else {
        Err(Error::Usage(format!(
            "--{flag} needs 1 or {dim} values, got {}",
            vals.len()
        )))
    }
}

fn monomial_1d_complex(m: u32) -> Result<MPoly> {
    let mut p = MPoly::zero(1, FieldTag::Complex);
    p.add_term(MultiIndex(vec![m]), crate::field::ONE)?;
    Ok(p)
}

fn print_doc_summary(doc: &NetworkDocument, artifact_on_stdout: bool) {
    let say = |line: String| note(artifact_on_stdout, line);
    say(format!("kind: {}", doc.kind()));
    say(format!("field: {}", field_name(doc.field())));
    say(format!("dim: {}", doc.dim()));
    match doc {
        NetworkDocument::Shallow(s) => say(format!("neurons: {}", s.width())),
        NetworkDocument::Resnet(r) => {
            say(format!("state_dim: {}", r.state_dim()));
            let widths: Vec<String> =
                r.blocks().iter().map(|b| b.bias.len().to_string()).collect();
            say(format!("block_widths: {}", widths.join(",")));
        }
        NetworkDocument::Mlp(m) => {
            let widths: Vec<String> =
                m.layers().iter().map(|(_, b)| b.len().to_string()).collect();
            say(format!("layer_widths: {}", widths.join(",")));
        }
        NetworkDocument::Densenet(d) => {
            let widths: Vec<String> =
                d.layers().iter().map(|(_, b)| b.len().to_string()).collect();
            say(format!("layer_widths: {}", widths.join(",")));
        }
        NetworkDocument::Harmonic(h) => say(format!("terms: {}", h.terms().len())),
    }
    say(format!("param_count: {}", doc.param_count()));
}

fn as_shallow(doc: &NetworkDocument) -> Result<&ShallowNet> {
    match doc {
        NetworkDocument::Shallow(s) => Ok(s),
        other => Err(Error::precondition(format!(
            "embedding source must be a shallow network document, got kind '{}'",
            other.kind()
        ))),
    }
}

// ---------------------------------------------------------------------------
// build
// ---------------------------------------------------------------------------

fn run_build(cli: &Cli, kind: &BuildCmd) -> Result<i32> {
    let field: FieldTag = cli.field.into();
    let doc = match kind {
        BuildCmd::ShallowMonomial { activation, degree, gamma, pure } => {
            let act = parse_activation(activation, field)?;
            NetworkDocument::Shallow(build_monomial_1d(&act, *degree, *gamma, *pure)?)
        }
        BuildCmd::ShallowPoly { poly, activation, gamma, beta } => {
            let p = parse_poly_csv(&read_file(poly)?, field)?;
            let act = parse_activation(activation, field)?;
            NetworkDocument::Shallow(build_polynomial(&act, &p, *beta, *gamma)?)
        }
        BuildCmd::ResnetPoly { poly, activation, step, center } => {
            let p = parse_poly_csv(&read_file(poly)?, field)?;
            if activation == "square" {
                NetworkDocument::Resnet(resnet_poly_square(&p)?)
            } else {
                let act = parse_activation(activation, field)?;
                let h = step.ok_or_else(|| {
                    Error::Usage("--step <h> is required when --activation is not square".into())
                })?;
                NetworkDocument::Resnet(resnet_poly_general(&p, &act, h, *center)?)
            }
        }
        BuildCmd::ReluC2 { target, nodes, lo, hi } => {
            require_real(field, "the rectifier interpolant")?;
            let spec = named_c2(target, *lo, *hi)?;
            NetworkDocument::Shallow(shallow_from_c2(&spec, *nodes)?)
        }
        BuildCmd::ReluMaxaffine { pieces } => {
            require_real(field, "the max-affine construction")?;
            let pieces = parse_pieces_csv(&read_file(pieces)?)?;
            NetworkDocument::Resnet(resnet_max_affine(&pieces)?)
        }
        BuildCmd::HarmonicNet { sigma, hdim } => {
            require_real(field, "the harmonic construction")?;
            let seed = need_seed(cli.seed, "build harmonic-net")?;
            let sig = named_sigma(sigma)?;
            if sig.symbolically_harmonic() == Some(false) {
                eprintln!(
                    "warning: sigma '{sigma}' is not harmonic; verification is expected to \
                     flag this network"
                );
            }
            NetworkDocument::Harmonic(random_harmonic_net(seed, *hdim, sig)?)
        }
    };
    let on_stdout = emit_artifact(&doc.to_json_string()?, &cli.output)?;
    print_doc_summary(&doc, on_stdout);
    if let Some(path) = &cli.output {
        note(on_stdout, format!("wrote {}", path.display()));
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// embed
// ---------------------------------------------------------------------------

fn run_embed(cli: &Cli, kind: &EmbedCmd) -> Result<i32> {
    let path = need_input(&cli.input, "embed")?;
    let source = NetworkDocument::parse_str(&read_file(path)?)?;

    // Build the deeper target plus the box on which the self-check samples.
    let (target, box_lo, box_hi, formula, max_error) = match kind {
        EmbedCmd::Resnet { widths, max_error } => {
            let s = as_shallow(&source)?;
            let r = resnet_from_shallow(s, widths)?;
            let formula = Some((
                "2(n+1)(d+1)+n",
                resnet_embedding_param_count(s.width(), s.dim()),
            ));
            let d = s.dim();
            (NetworkDocument::Resnet(r), vec![-1.0; d], vec![1.0; d], formula, *max_error)
        }
        EmbedCmd::Mlp { widths, epsilon, center, max_error } => {
            let s = as_shallow(&source)?;
            let m = mlp_from_shallow(s, widths, *epsilon, *center)?;
            let d = s.dim();
            (NetworkDocument::Mlp(m), vec![-1.0; d], vec![1.0; d], None, *max_error)
        }
        EmbedCmd::Densenet { max_error } => {
            let (net, d) = match &source {
                NetworkDocument::Shallow(s) => (densenet_from_shallow(s)?, s.dim()),
                NetworkDocument::Mlp(m) => (densenet_from_mlp(m)?, m.dim()),
                other => {
                    return Err(Error::precondition(format!(
                        "densenet embedding needs a shallow or mlp source, got kind '{}'",
                        other.kind()
                    )))
                }
            };
            (NetworkDocument::Densenet(net), vec![-1.0; d], vec![1.0; d], None, *max_error)
        }
        EmbedCmd::ReluMlp { widths, lo, hi, max_error } => {
            let s = as_shallow(&source)?;
            let d = s.dim();
            let lo = broadcast(lo, d, "lo")?;
            let hi = broadcast(hi, d, "hi")?;
            let m = mlp_exact_from_shallow_relu(s, &lo, &hi, widths)?;
            (NetworkDocument::Mlp(m), lo, hi, None, *max_error)
        }
    };

    let on_stdout = emit_artifact(&target.to_json_string()?, &cli.output)?;
    let say = |line: String| note(on_stdout, line);
    say(format!("source_kind: {}", source.kind()));
    say(format!("source_param_count: {}", source.param_count()));
    say(format!("target_kind: {}", target.kind()));
    say(format!("target_param_count: {}", target.param_count()));
    if let Some((name, value)) = formula {
        say(format!("formula {name}: {value}"));
    }

    // The embedded network must reproduce its source; measure the worst
    // deviation over a fixed sample of the working box.
    let points = self_check_points(source.field(), &box_lo, &box_hi, SELF_CHECK_POINTS);
    let mut worst = 0.0f64;
    for p in &points {
        let a = source.eval(p)?;
        let b = target.eval(p)?;
        worst = worst.max((a - b).norm());
    }
    say(format!("self_check_points: {}", points.len()));
    say(format!("self_check_max_abs_error: {worst:e}"));
    if let Some(path) = &cli.output {
        say(format!("wrote {}", path.display()));
    }
    if let Some(bound) = max_error {
        if worst > bound {
            return Err(Error::Verification(format!(
                "self-check error {worst:e} exceeds --max-error {bound:e}"
            )));
        }
        say(format!("self_check_bound: {bound:e} (satisfied)"));
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

fn run_eval(cli: &Cli, points_path: &PathBuf) -> Result<i32> {
    let input = need_input(&cli.input, "eval")?;
    let doc = NetworkDocument::parse_str(&read_file(input)?)?;
    let points = parse_points_csv(&read_file(points_path)?, doc.field(), doc.dim())?;
    let header = match doc.field() {
        FieldTag::Real => vec!["value".to_string()],
        FieldTag::Complex => vec!["re".to_string(), "im".to_string()],
    };
    let mut table = ResultTable::new(header)?;
    for p in &points {
        let v = doc.eval(p)?;
        match doc.field() {
            FieldTag::Real => table.push_row(vec![v.re])?,
            FieldTag::Complex => table.push_row(vec![v.re, v.im])?,
        }
    }
    emit_artifact(&table.to_csv(), &cli.output)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

/// Writes the table, prints the summary lines, and converts a failed
/// assertion into the exit-1 verification error (after the table is safely
/// on disk).
fn finish_verify(
    cli: &Cli,
    table: &ResultTable,
    lines: Vec<String>,
    failure: Option<String>,
) -> Result<i32> {
    let on_stdout = emit_artifact(&table.to_csv(), &cli.output)?;
    for line in lines {
        note(on_stdout, line);
    }
    match failure {
        Some(msg) => Err(Error::Verification(msg)),
        None => Ok(0),
    }
}

fn run_verify(cli: &Cli, kind: &VerifyCmd) -> Result<i32> {
    match kind {
        VerifyCmd::Cauchy { k, annulus, polys, tol_target, tol_poly } => {
            if annulus.len() != 2 {
                return Err(Error::Usage(format!(
                    "--annulus needs exactly two radii r,R, got {} value(s)",
                    annulus.len()
                )));
            }
            let candidates: Vec<MPoly> = match polys {
                Some(path) => vec![parse_poly_csv(&read_file(path)?, FieldTag::Complex)?],
                None => (0..=4).map(monomial_1d_complex).collect::<Result<Vec<_>>>()?,
            };
            let report = cauchy_obstruction_report(*k, &candidates, annulus[0], annulus[1])?;
            let mut table = ResultTable::new(
                ["is_target", "integral_re", "integral_im", "magnitude"]
                    .map(String::from)
                    .to_vec(),
            )?;
            table.push_row(vec![
                1.0,
                report.target.integral.re,
                report.target.integral.im,
                report.target.magnitude,
            ])?;
            for c in &report.candidates {
                table.push_row(vec![0.0, c.integral.re, c.integral.im, c.magnitude])?;
            }
            let exact = Scalar::new(0.0, std::f64::consts::TAU);
            let target_err = (report.target.integral - exact).norm();
            let worst = report.candidates.iter().map(|c| c.magnitude).fold(0.0, f64::max);
            let pass = target_err <= *tol_target && worst <= *tol_poly;
            let lines = vec![
                format!("pole_order: {}", report.k),
                format!("contour_radius: {}", report.radius),
                format!("contour_nodes: {}", report.nodes),
                format!("target_magnitude: {}", report.target.magnitude),
                format!("target_integral_error: {target_err:e}"),
                format!("max_candidate_magnitude: {worst:e}"),
                format!("moment_gap: {:e}", report.gap),
                format!("cauchy: {}", if pass { "pass" } else { "fail" }),
            ];
            let failure = (!pass).then(|| {
                format!(
                    "witness integral off by {target_err:e} (tol {tol_target:e}) or a \
                     polynomial moment reached {worst:e} (tol {tol_poly:e})"
                )
            });
            finish_verify(cli, &table, lines, failure)
        }

        VerifyCmd::Harmonic { points, step, max_error } => {
            let input = need_input(&cli.input, "verify harmonic")?;
            let seed = need_seed(cli.seed, "verify harmonic")?;
            let doc = NetworkDocument::parse_str(&read_file(input)?)?;
            let net = match &doc {
                NetworkDocument::Harmonic(h) => h,
                other => {
                    return Err(Error::precondition(format!(
                        "verify harmonic needs a harmonic network document, got kind '{}'",
                        other.kind()
                    )))
                }
            };
            if net.sigma().symbolically_harmonic() == Some(false) {
                eprintln!(
                    "warning: the stored sigma is not harmonic as a polynomial; expecting a \
                     nonzero Laplacian"
                );
            }
            let sample = seeded_box_points(seed, *points, net.dim(), 1.0);
            let worst = verify_network_harmonic(net, &sample, *step)?;
            let mut table = ResultTable::new(
                ["point_count", "step", "max_abs_laplacian"].map(String::from).to_vec(),
            )?;
            table.push_row(vec![sample.len() as f64, *step, worst])?;
            let pass = worst <= *max_error;
            let lines = vec![
                format!("points: {}", sample.len()),
                format!("step: {step:e}"),
                format!("max_abs_laplacian: {worst:e}"),
                format!("bound: {max_error:e}"),
                format!("harmonic: {}", if pass { "pass" } else { "fail" }),
            ];
            let failure = (!pass)
                .then(|| format!("max |Laplacian| {worst:e} exceeds bound {max_error:e}"));
            finish_verify(cli, &table, lines, failure)
        }

        VerifyCmd::Runge { nodes } => {
            let study = runge_table(nodes)?;
            let table = ResultTable::from_convergence(&study)?;
            let pass = study.errors_strictly_increasing();
            let mut lines: Vec<String> = study
                .rows()
                .iter()
                .map(|r| format!("spacing {:.6}: error {:e}", r.parameter, r.sup_error))
                .collect();
            lines.push(format!("runge: {}", if pass { "pass" } else { "fail" }));
            let failure = (!pass).then(|| {
                "equidistant interpolation error failed to increase with the node count"
                    .to_string()
            });
            finish_verify(cli, &table, lines, failure)
        }

        VerifyCmd::Convergence { study, params, degree, activation, dim, max_ratio } => {
            let field: FieldTag = cli.field.into();
            let act = parse_activation(activation, field)?;
            let default_dim = if study == "mlp-embed" { 2 } else { 1 };
            let grid = BoxGrid::symmetric(field, dim.unwrap_or(default_dim), 1.0)?;
            let result = convergence_study(study, &act, *degree, params, &grid)?;
            let table = ResultTable::from_convergence(&result)?;
            let bound = max_ratio.unwrap_or(match study.as_str() {
                "resnet-poly-general" => 0.3,
                _ => 0.6,
            });
            let observed = result.max_ratio();
            let pass = observed.map_or(true, |r| r <= bound);
            let mut lines: Vec<String> = result
                .rows()
                .iter()
                .map(|r| match r.ratio {
                    Some(q) => format!(
                        "{} {:e}: error {:e}, ratio {:.4}",
                        result.parameter_name(),
                        r.parameter,
                        r.sup_error,
                        q
                    ),
                    None => format!(
                        "{} {:e}: error {:e}",
                        result.parameter_name(),
                        r.parameter,
                        r.sup_error
                    ),
                })
                .collect();
            lines.push(format!("max_ratio_bound: {bound}"));
            lines.push(format!("convergence: {}", if pass { "pass" } else { "fail" }));
            let failure = (!pass).then(|| {
                format!(
                    "worst successive error ratio {:.4} exceeds bound {bound}",
                    observed.unwrap_or(f64::NAN)
                )
            });
            finish_verify(cli, &table, lines, failure)
        }

        VerifyCmd::Rotation { degree, rotations } => {
            let seed = need_seed(cli.seed, "verify rotation")?;
            let expected = 2 * (*degree as usize) + 1;
            let count = rotations.unwrap_or(3 * expected);
            let basis = hp_basis(3, *degree)?;
            let p = basis
                .into_iter()
                .next()
                .ok_or_else(|| Error::precondition("no harmonic polynomial at this degree"))?;
            let rank = rotation_span_rank(&p, 3, *degree, count, seed)?;
            let mut table = ResultTable::new(
                ["degree", "rotations", "rank", "expected"].map(String::from).to_vec(),
            )?;
            table.push_row(vec![*degree as f64, count as f64, rank as f64, expected as f64])?;
            let pass = rank == expected;
            let lines = vec![
                format!("degree: {degree}"),
                format!("rotations: {count}"),
                format!("span_rank: {rank}"),
                format!("expected_rank: {expected}"),
                format!("rotation: {}", if pass { "pass" } else { "fail" }),
            ];
            let failure =
                (!pass).then(|| format!("rotated span has rank {rank}, expected {expected}"));
            finish_verify(cli, &table, lines, failure)
        }

        VerifyCmd::Fundamental { degree, sphere_dim, count } => {
            let seed = need_seed(cli.seed, "verify fundamental")?;
            let params = GegenbauerParams::from_dimension(*degree, *sphere_dim)?;
            let expected = hp_dim(*sphere_dim, *degree as u32);
            let m = count.unwrap_or(expected);
            let points = random_unit_points(seed, m, *sphere_dim);
            let system = fundamental_system_det(&points, *degree, params.lambda)?;
            if !system.count_ok {
                eprintln!(
                    "warning: {m} points cannot form a full fundamental system (need {})",
                    system.expected_count
                );
            }
            let mut table = ResultTable::new(
                ["degree", "count", "expected_count", "det"].map(String::from).to_vec(),
            )?;
            table.push_row(vec![
                *degree as f64,
                m as f64,
                system.expected_count as f64,
                system.det,
            ])?;
            let pass = system.count_ok && system.det > 0.0;
            let lines = vec![
                format!("degree: {degree}"),
                format!("points: {m}"),
                format!("expected_count: {}", system.expected_count),
                format!("det: {:e}", system.det),
                format!("fundamental: {}", if pass { "pass" } else { "fail" }),
            ];
            let failure = (!pass).then(|| {
                format!(
                    "fundamental system check failed: det {:e}, count {} (expected {})",
                    system.det, m, system.expected_count
                )
            });
            finish_verify(cli, &table, lines, failure)
        }
    }
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

fn run_report(cli: &Cli) -> Result<i32> {
    let input = need_input(&cli.input, "report")?;
    let doc = NetworkDocument::parse_str(&read_file(input)?)?;
    print_doc_summary(&doc, false);
    match &doc {
        NetworkDocument::Shallow(s) => {
            note(false, format!("formula (d+2)n: {}", (s.dim() + 2) * s.width()));
        }
        NetworkDocument::Resnet(r) if r.state_dim() == r.dim() + 1 => {
            let n: usize = r.blocks().iter().map(|b| b.bias.len()).sum();
            note(
                false,
                format!("formula 2(n+1)(d+1)+n: {}", resnet_embedding_param_count(n, r.dim())),
            );
        }
        _ => {}
    }
    Ok(0)
}
