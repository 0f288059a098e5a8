//! Command-line front end: norm evaluation, K/J functionals, envelopes and
//! representing measures, functor sweeps, operator checks, bilinear bounds,
//! Schatten-side tools, test-function generation and the verification
//! harness.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use extrapkit::bilinear::{self, TabFn};
use extrapkit::envelope::{
    concave_envelope, representing_measure_numeric, MeasureOpts, RepresentingMeasure, WeightSpec,
};
use extrapkit::functors::{self, LatticeParamSpec, LimitWeight, ScaleKind, ScaleSpec};
use extrapkit::norms::{self, QuasiConcaveFn};
use extrapkit::operators::{self, OperatorKind, OperatorSpec};
use extrapkit::schatten::{self, CMatrix, SingularSpectrum};
use extrapkit::testfn::{self, Family};
use extrapkit::{Config, StepFn};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "extrapkit", version, about = "K/J-functional and extrapolation calculus on step functions")]
struct Cli {
    /// TOML config path (falls back to EXTRAPKIT_CONFIG, then defaults).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a space norm of a step function.
    Norm(NormArgs),
    /// K- and J-functionals and the K-curve of a step function.
    Kfun(KfunArgs),
    /// Concave envelope of a weight and its representing measure, as CSV.
    Envelope(EnvelopeArgs),
    /// Extrapolation functor norms.
    #[command(subcommand)]
    Functor(FunctorCmd),
    /// Structural criteria (Marcinkiewicz membership, dilation, tempered).
    #[command(subcommand)]
    Check(CheckCmd),
    /// Model operators: apply, norm sweeps, endpoint checks.
    #[command(subcommand)]
    Op(OpCmd),
    /// Bilinear transforms and endpoint bounds.
    #[command(subcommand)]
    Bilinear(BilinearCmd),
    /// Matrix-side tools: s-numbers, ideal norms, endpoint checks.
    #[command(subcommand)]
    Schatten(SchattenCmd),
    /// Generate test step functions.
    Gen(GenArgs),
    /// Run verification suites; exit code 0 iff all checks pass.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct NormArgs {
    /// lp | lorentz-p1 | lorentz-pinf | llogl | expl | marcinkiewicz |
    /// lambda-p | linf-inf | grand | grand-fk | grand-psi | lambda-psi
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Quasi-concave function, e.g. "power:0.5" or "logpow:0,-1".
    #[arg(long)]
    phi: Option<String>,
    /// Scale parameter b of the triple-log Lorentz weight.
    #[arg(long)]
    b: Option<f64>,
    /// Emit one CSV row per space with default parameters.
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct KfunArgs {
    #[arg(long)]
    input: PathBuf,
    /// Evaluate K(t, f).
    #[arg(long)]
    t: Option<f64>,
    /// Evaluate J(s, f).
    #[arg(long)]
    s: Option<f64>,
    /// Print the full K-curve breakpoints as CSV.
    #[arg(long)]
    curve: bool,
}

#[derive(Args)]
struct EnvelopeArgs {
    /// Weight spec: `const[:c]` | `theta:a,b` | `p:a,b` | `yano` | `psiexp:alpha`.
    #[arg(long)]
    weight: String,
    /// Output file (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FunctorCmd {
    /// sup_p w(p) ||f||_(X_p) over the grid.
    Delta {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "const")]
        weight: String,
        #[arg(long, default_value = "lp")]
        scale: String,
        #[arg(long)]
        p_max: Option<f64>,
    },
    /// Closed-form sum-functor norm.
    Sigma {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
    },
    /// Lattice-parameter functor norm.
    Ffunctor {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "const")]
        weight: String,
        /// sup when omitted; otherwise the L^q exponent.
        #[arg(long)]
        q: Option<f64>,
        /// the measure is dp / p^k
        #[arg(long, default_value_t = 0.0)]
        measure_pow: f64,
    },
    /// Scale K-functional built from the weight's representing measure.
    Scalek {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        weight: String,
        #[arg(long)]
        t: f64,
    },
    /// Limiting norm with weight s^-theta log^c(1/s).
    Limiting {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        #[arg(long, default_value_t = 0.0)]
        log_exp: f64,
        /// q >= 1, or omit for the sup form.
        #[arg(long)]
        q: Option<f64>,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Membership criterion for a Marcinkiewicz space.
    Marcinkiewicz {
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 16.0)]
        c_bound: f64,
    },
    /// Dilation criterion phi(t^2) ~ phi(t).
    StrongExtrap {
        #[arg(long)]
        phi: String,
    },
    /// Tempered-weight criterion M(2 theta) ~ M(theta).
    Tempered {
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 16.0)]
        window: f64,
    },
}

#[derive(Subcommand)]
enum OpCmd {
    /// Discretized transform, written as a step-function JSON.
    Apply {
        #[arg(long)]
        op: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Certified operator-norm lower bounds; CSV (p, lower, p', quality).
    NormSweep {
        #[arg(long)]
        op: String,
        /// comma-separated p list
        #[arg(long, default_value = "1.1,1.5,2,4")]
        p: String,
    },
    /// Endpoint rearrangement inequalities with measured constants.
    YanoCheck {
        #[arg(long)]
        op: String,
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum BilinearCmd {
    /// Multiplicative convolution of two K-curves at t.
    Conv {
        #[arg(long)]
        f: Option<PathBuf>,
        #[arg(long)]
        g: Option<PathBuf>,
        #[arg(long)]
        t: f64,
        /// use the min(1, .) kernel for a missing side
        #[arg(long)]
        min_one: bool,
    },
    /// Bilinear Calderon transform with the unit atom measure.
    Calderon {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        t: f64,
    },
    /// Bilinear K/J constant for the model product map.
    KjCheck {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long, default_value = "const")]
        weight: String,
    },
    /// Endpoint bounds with the three proof addends.
    Lagbi {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
}

#[derive(Subcommand)]
enum SchattenCmd {
    /// Singular values of a matrix (JSON or CSV input).
    Snumbers {
        #[arg(long)]
        input: PathBuf,
    },
    /// Schatten / Matsaev-type norms of a spectrum or matrix.
    Norm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        dual: bool,
    },
    /// K-functional of the spectrum at t.
    Kfun {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        t: f64,
    },
    /// Endpoint ratio of the weighted sup against the dual ideal norm.
    DeltaCheck {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 16.0)]
        p0: f64,
    },
    /// Averaging inequality for an input/output spectrum pair.
    CalderonCheck {
        #[arg(long)]
        input: PathBuf,
        /// spectrum of the transformed operator; defaults to the
        /// Hardy-matrix witness applied to a diagonal matrix
        #[arg(long)]
        ta: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenArgs {
    /// indicator | power | logpow | random | mix
    #[arg(long)]
    family: String,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pieces: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    t_min: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name or "all".
    suite: Option<String>,
    /// List available suites and exit.
    #[arg(long)]
    list: bool,
    /// Directory for report.json / report.csv.
    #[arg(long)]
    report_dir: Option<PathBuf>,
}

fn read_step(path: &Path) -> Result<StepFn> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading step function from {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_step(path: &Path, f: &StepFn) -> Result<()> {
    std::fs::write(path, serde_json::to_string(f)?)?;
    Ok(())
}

fn parse_phi(spec: &str) -> Result<QuasiConcaveFn> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let nums: Vec<f64> = rest
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| s.trim().parse::<f64>().map_err(|e| anyhow!("bad number '{s}': {e}")))
        .collect::<Result<_>>()?;
    match kind {
        "power" => Ok(QuasiConcaveFn::power(*nums.first().ok_or_else(|| anyhow!("power:a"))?)?),
        "logpow" => {
            if nums.len() != 2 {
                bail!("logpow takes two parameters: logpow:a,b");
            }
            Ok(QuasiConcaveFn::log_power(nums[0], nums[1])?)
        }
        other => bail!("unknown phi '{other}' (power:a | logpow:a,b)"),
    }
}

fn parse_weight(spec: &str) -> Result<WeightSpec> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let nums: Vec<f64> = rest
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| s.trim().parse::<f64>().map_err(|e| anyhow!("bad number '{s}': {e}")))
        .collect::<Result<_>>()?;
    match kind {
        "const" => Ok(WeightSpec::constant(nums.first().copied().unwrap_or(1.0))),
        "theta" => {
            if nums.len() != 2 {
                bail!("theta takes two exponents: theta:a,b");
            }
            Ok(WeightSpec::theta_power(nums[0], nums[1]))
        }
        "p" => {
            if nums.len() != 2 {
                bail!("p-form takes two exponents: p:a,b");
            }
            Ok(WeightSpec::p_form(nums[0], nums[1]))
        }
        "yano" => Ok(WeightSpec::yano()),
        "psiexp" => Ok(WeightSpec::PsiExpNeg {
            alpha: nums.first().copied().ok_or_else(|| anyhow!("psiexp:alpha"))?,
        }),
        other => bail!("unknown weight '{other}' (const[:c] | theta:a,b | p:a,b | yano | psiexp:a)"),
    }
}

fn parse_op(name: &str) -> Result<OperatorKind> {
    match name {
        "hardy" => Ok(OperatorKind::HardyP),
        "dual-hardy" => Ok(OperatorKind::DualHardyQ),
        "calderon" => Ok(OperatorKind::CalderonS),
        "identity" => Ok(OperatorKind::Identity),
        other => bail!("unknown operator '{other}' (hardy | dual-hardy | calderon | identity)"),
    }
}

/// Matrix input: JSON `[[[re, im], ...], ...]` or CSV rows `re,im,re,im,...`;
/// a flat JSON array of numbers is read as a diagonal.
fn read_matrix(path: &Path) -> Result<CMatrix> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading matrix from {}", path.display()))?;
    if path.extension().map(|e| e == "csv").unwrap_or(false) {
        let mut rows: Vec<Vec<schatten::Complex<f64>>> = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let cells: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|e| anyhow!("bad CSV cell: {e}")))
                .collect::<Result<_>>()?;
            if cells.len() % 2 != 0 {
                bail!("CSV rows must hold (re, im) pairs");
            }
            rows.push(cells.chunks(2).map(|p| schatten::Complex::new(p[0], p[1])).collect());
        }
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            bail!("CSV matrix must be square");
        }
        return Ok(CMatrix::from_fn(n, n, |i, j| rows[i][j]));
    }
    if let Ok(diag) = serde_json::from_str::<Vec<f64>>(&text) {
        let n = diag.len();
        return Ok(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                schatten::Complex::new(diag[i], 0.0)
            } else {
                schatten::Complex::new(0.0, 0.0)
            }
        }));
    }
    let rows: Vec<Vec<(f64, f64)>> = serde_json::from_str(&text)
        .with_context(|| "matrix JSON must be [[[re, im], ...], ...] or a flat diagonal")?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        bail!("matrix JSON must be square");
    }
    Ok(CMatrix::from_fn(n, n, |i, j| schatten::Complex::new(rows[i][j].0, rows[i][j].1)))
}

fn read_spectrum(path: &Path) -> Result<SingularSpectrum> {
    let text = std::fs::read_to_string(path)?;
    if let Ok(vals) = serde_json::from_str::<Vec<f64>>(&text) {
        return Ok(SingularSpectrum::new(vals)?);
    }
    Ok(schatten::s_numbers(&read_matrix(path)?)?)
}

fn json_out(value: serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
}

fn run() -> Result<i32> {
    let cli = Cli::parse();
    let cfg = Config::resolve(cli.config.as_deref())?;
    match cli.command {
        Command::Norm(args) => cmd_norm(args, &cfg),
        Command::Kfun(args) => cmd_kfun(args),
        Command::Envelope(args) => cmd_envelope(args, &cfg),
        Command::Functor(cmd) => cmd_functor(cmd, &cfg),
        Command::Check(cmd) => cmd_check(cmd, &cfg),
        Command::Op(cmd) => cmd_op(cmd, &cfg),
        Command::Bilinear(cmd) => cmd_bilinear(cmd, &cfg),
        Command::Schatten(cmd) => cmd_schatten(cmd),
        Command::Gen(args) => cmd_gen(args),
        Command::Verify(args) => cmd_verify(args, &cfg),
    }
}

fn norm_by_name(name: &str, f: &StepFn, args: &NormArgs) -> Result<f64> {
    let p = args.p.unwrap_or(2.0);
    let alpha = args.alpha.unwrap_or(1.0);
    Ok(match name {
        "lp" => norms::lp_norm(f, p)?,
        "linf" => norms::lp_norm(f, f64::INFINITY)?,
        "lorentz-p1" => norms::lorentz_p1_norm(f, p)?,
        "lorentz-pinf" => norms::lorentz_pinf_norm(f, p)?,
        "llogl" => norms::llogl_alpha_norm(f, alpha)?,
        "expl" => norms::exp_l_alpha_norm(f, alpha)?,
        "marcinkiewicz" => {
            let phi = parse_phi(args.phi.as_deref().unwrap_or("power:0.5"))?;
            norms::marcinkiewicz_norm(f, &phi)?
        }
        "lambda-p" => {
            let phi = parse_phi(args.phi.as_deref().unwrap_or("power:0.5"))?;
            norms::lambda_p_norm(f, &phi, p)?
        }
        "linf-inf" => norms::linf_inf_norm(f),
        "grand" => norms::grand_lebesgue_norm(f, p, alpha)?,
        "grand-fk" => norms::grand_lebesgue_fk_norm(f, p, alpha)?,
        "grand-psi" => norms::grand_lebesgue_psi_norm(f, p, |e| e.powf(alpha))?,
        "lambda-psi" => norms::lambda_psi_alpha_norm(f, alpha, args.b.unwrap_or(16.0))?,
        other => bail!("unknown space '{other}'"),
    })
}

fn cmd_norm(args: NormArgs, _cfg: &Config) -> Result<i32> {
    let f = read_step(&args.input)?;
    if args.all {
        println!("space,p,alpha,value");
        for (name, p, alpha) in [
            ("lp", 1.0, 0.0),
            ("lp", 2.0, 0.0),
            ("linf", 0.0, 0.0),
            ("lorentz-p1", 2.0, 0.0),
            ("lorentz-pinf", 2.0, 0.0),
            ("llogl", 0.0, 1.0),
            ("expl", 0.0, 1.0),
            ("linf-inf", 0.0, 0.0),
            ("grand", 2.0, 1.0),
            ("grand-fk", 2.0, 1.0),
            ("lambda-psi", 0.0, 1.0),
        ] {
            let sub = NormArgs {
                space: None,
                input: args.input.clone(),
                p: Some(if p > 0.0 { p } else { 2.0 }),
                alpha: Some(if alpha > 0.0 { alpha } else { 1.0 }),
                phi: args.phi.clone(),
                b: args.b,
                all: false,
            };
            match norm_by_name(name, &f, &sub) {
                Ok(v) => println!("{name},{p},{alpha},{v}"),
                Err(e) => println!("{name},{p},{alpha},error: {e}"),
            }
        }
        return Ok(0);
    }
    let space = args.space.clone().ok_or_else(|| anyhow!("--space or --all is required"))?;
    println!("{}", norm_by_name(&space, &f, &args)?);
    Ok(0)
}

fn cmd_kfun(args: KfunArgs) -> Result<i32> {
    let f = read_step(&args.input)?;
    if args.curve {
        let curve = f.k_curve();
        let (ts, ks) = curve.breakpoints();
        println!("t,K");
        for (t, k) in ts.iter().zip(ks) {
            println!("{t},{k}");
        }
        return Ok(0);
    }
    if let Some(s) = args.s {
        println!("{}", f.j_functional(s)?);
        return Ok(0);
    }
    let t = args.t.ok_or_else(|| anyhow!("pass --t, --s or --curve"))?;
    println!("{}", f.k_functional(t));
    Ok(0)
}

fn cmd_envelope(args: EnvelopeArgs, cfg: &Config) -> Result<i32> {
    let weight = parse_weight(&args.weight)?;
    let grid = cfg.envelope_grid();
    let env = concave_envelope(&weight, &grid)?;
    let mu = representing_measure_numeric(&env, MeasureOpts::default())?;
    let mut out = String::from("t,tau,w\n");
    let (ts, vals) = env.grid();
    for (t, v) in ts.iter().zip(vals) {
        out.push_str(&format!("{t},{v},{}\n", mu.density_at(*t)));
    }
    for (r, m) in &mu.atoms {
        out.push_str(&format!("# atom at {r} with mass {m}\n"));
    }
    match args.output {
        Some(path) => std::fs::write(path, out)?,
        None => print!("{out}"),
    }
    Ok(0)
}

fn cmd_functor(cmd: FunctorCmd, cfg: &Config) -> Result<i32> {
    match cmd {
        FunctorCmd::Delta { input, weight, scale, p_max } => {
            let f = read_step(&input)?;
            let kind = match scale.as_str() {
                "lp" => ScaleKind::Lp,
                "lorentz-p1" => ScaleKind::LorentzP1,
                "lorentz-pinf" => ScaleKind::LorentzPInf,
                other => bail!("unknown scale '{other}'"),
            };
            let spec = ScaleSpec::new(
                kind,
                parse_weight(&weight)?,
                p_max.unwrap_or(cfg.grids.p_max),
                cfg.grids.points_per_decade,
            )?;
            let r = functors::delta_functor_norm(&f, &spec)?;
            json_out(serde_json::json!({"value": r.value, "attained_at_p": r.attained_at_p}));
        }
        FunctorCmd::Sigma { input, alpha } => {
            let f = read_step(&input)?;
            json_out(serde_json::json!({"value": functors::sigma_llogl_norm(&f, alpha)?}));
        }
        FunctorCmd::Ffunctor { input, weight, q, measure_pow } => {
            let f = read_step(&input)?;
            let w = parse_weight(&weight)?;
            let spec = match q {
                None => LatticeParamSpec::sup(w, cfg.grids.p_max, cfg.grids.points_per_decade),
                Some(q) => LatticeParamSpec::lq(
                    q,
                    measure_pow,
                    w,
                    cfg.grids.p_max,
                    cfg.grids.points_per_decade,
                ),
            };
            json_out(serde_json::json!({"value": functors::f_functor_norm(&f, &spec)?}));
        }
        FunctorCmd::Scalek { input, weight, t } => {
            let f = read_step(&input)?;
            let sk = functors::ScaleK::new(&parse_weight(&weight)?, &cfg.envelope_grid())?;
            json_out(serde_json::json!({"t": t, "value": sk.eval(t, &f)}));
        }
        FunctorCmd::Limiting { input, theta, log_exp, q } => {
            let f = read_step(&input)?;
            let w = LimitWeight { theta, log_exp };
            let v = functors::limiting_norm(&f, w, q.unwrap_or(f64::INFINITY))?;
            json_out(serde_json::json!({"value": v}));
        }
    }
    Ok(0)
}

fn cmd_check(cmd: CheckCmd, cfg: &Config) -> Result<i32> {
    match cmd {
        CheckCmd::Marcinkiewicz { phi, c_bound } => {
            let rep = functors::marcinkiewicz_extrap_check(&parse_phi(&phi)?, c_bound);
            json_out(serde_json::json!({
                "c": rep.c, "worst_t": rep.worst_t,
                "degenerate": rep.degenerate, "pass": rep.pass,
            }));
            Ok(i32::from(!rep.pass))
        }
        CheckCmd::StrongExtrap { phi } => {
            let rep = functors::strong_extrap_check(&parse_phi(&phi)?, cfg.tolerances.dilation_floor);
            json_out(serde_json::json!({
                "min_ratio": rep.min_ratio, "max_ratio": rep.max_ratio, "pass": rep.pass,
            }));
            Ok(i32::from(!rep.pass))
        }
        CheckCmd::Tempered { weight, window } => {
            let rep = functors::tempered_check(&parse_weight(&weight)?, window);
            json_out(serde_json::json!({"worst_ratio": rep.worst_ratio, "pass": rep.pass}));
            Ok(i32::from(!rep.pass))
        }
    }
}

fn cmd_op(cmd: OpCmd, cfg: &Config) -> Result<i32> {
    match cmd {
        OpCmd::Apply { op, input, output } => {
            let f = read_step(&input)?;
            let spec = OperatorSpec::new(parse_op(&op)?, cfg.grids.operator_resolution)?;
            let out = operators::apply(&spec, &f)?;
            eprintln!(
                "sup error {:.3e}{}",
                out.sup_error,
                if out.unbounded_head { " (logarithmic head not bounded)" } else { "" }
            );
            match output {
                Some(path) => write_step(&path, &out.f)?,
                None => println!("{}", serde_json::to_string(&out.f)?),
            }
        }
        OpCmd::NormSweep { op, p } => {
            let kind = parse_op(&op)?;
            println!("p,lower_bound,p_over_p1,ratio");
            for tok in p.split(',') {
                let p: f64 = tok.trim().parse().map_err(|e| anyhow!("bad p '{tok}': {e}"))?;
                let rep = operators::operator_norm_lower(&kind, p)?;
                println!("{p},{},{},{}", rep.lower, p / (p - 1.0), rep.quality);
            }
        }
        OpCmd::YanoCheck { op, input } => {
            let f = read_step(&input)?;
            let spec = OperatorSpec::new(parse_op(&op)?, cfg.grids.operator_resolution)?;
            let rep = operators::yano_endpoint_check(&spec, &f, cfg.tolerances.yano_c_bound)?;
            json_out(serde_json::json!({
                "c_averaged": rep.c_averaged,
                "c_log": rep.c_log,
                "c_two_sided": rep.c_two_sided,
                "pass": rep.pass,
            }));
            return Ok(i32::from(!rep.pass));
        }
    }
    Ok(0)
}

fn cmd_bilinear(cmd: BilinearCmd, cfg: &Config) -> Result<i32> {
    match cmd {
        BilinearCmd::Conv { f, g, t, min_one } => {
            let side = |path: &Option<PathBuf>| -> Result<TabFn> {
                match path {
                    Some(p) => Ok(TabFn::from_k_curve(&read_step(p)?.k_curve())),
                    None if min_one => Ok(TabFn::min_one()),
                    None => bail!("pass --f/--g or --min-one"),
                }
            };
            let v = bilinear::mult_convolution(&side(&f)?, &side(&g)?, t);
            json_out(serde_json::json!({"t": t, "value": v}));
        }
        BilinearCmd::Calderon { f, g, t } => {
            let v = bilinear::bilinear_calderon(
                &read_step(&f)?,
                &read_step(&g)?,
                t,
                &RepresentingMeasure::dirac(1.0, 1.0),
            );
            json_out(serde_json::json!({"t": t, "value": v}));
        }
        BilinearCmd::KjCheck { f, g, weight } => {
            let env = concave_envelope(&parse_weight(&weight)?, &cfg.envelope_grid())?;
            let rep = bilinear::bilinear_kj_check(&read_step(&f)?, &read_step(&g)?, &env)?;
            json_out(serde_json::json!({
                "c": rep.c, "worst_t": rep.worst.0, "worst_s": rep.worst.1, "worst_h": rep.worst.2,
            }));
        }
        BilinearCmd::Lagbi { f, g } => {
            let rep = bilinear::lagbi_bounds(
                &read_step(&f)?,
                &read_step(&g)?,
                cfg.tolerances.lagbi_c_bound,
            )?;
            json_out(serde_json::json!({
                "c_zero_pair": rep.c_zero_pair,
                "c_exp_pair": rep.c_exp_pair,
                "addend_ratios": rep.addend_ratios,
                "pass": rep.pass,
            }));
            return Ok(i32::from(!rep.pass));
        }
    }
    Ok(0)
}

fn cmd_schatten(cmd: SchattenCmd) -> Result<i32> {
    match cmd {
        SchattenCmd::Snumbers { input } => {
            let sigma = schatten::s_numbers(&read_matrix(&input)?)?;
            json_out(serde_json::json!(sigma.values()));
        }
        SchattenCmd::Norm { input, p, alpha, dual } => {
            let sigma = read_spectrum(&input)?;
            let v = if let Some(p) = p {
                schatten::schatten_norm(&sigma, p)?
            } else if dual {
                schatten::matsaev_dual_norm(&sigma, alpha.unwrap_or(1.0))?
            } else {
                schatten::matsaev_norm(&sigma, alpha.unwrap_or(1.0))?
            };
            println!("{v}");
        }
        SchattenCmd::Kfun { input, t } => {
            let sigma = read_spectrum(&input)?;
            println!("{}", schatten::schatten_k(t, &sigma));
        }
        SchattenCmd::DeltaCheck { input, alpha, p0 } => {
            let sigma = read_spectrum(&input)?;
            let rep = schatten::matsaev_delta_check(&sigma, alpha, p0, 32)?;
            json_out(serde_json::json!({
                "sup_value": rep.sup_value, "dual_norm": rep.dual_norm,
                "ratio": rep.ratio, "degenerate": rep.degenerate,
            }));
        }
        SchattenCmd::CalderonCheck { input, ta } => {
            let sigma_a = read_spectrum(&input)?;
            let sigma_ta = match ta {
                Some(path) => read_spectrum(&path)?,
                None => {
                    let n = sigma_a.len();
                    let a = CMatrix::from_fn(n, n, |i, j| {
                        if i == j {
                            schatten::Complex::new(sigma_a.values()[i], 0.0)
                        } else {
                            schatten::Complex::new(0.0, 0.0)
                        }
                    });
                    schatten::s_numbers(&(schatten::hardy_matrix(n) * a))?
                }
            };
            let rep = schatten::noncomm_calderon_check(&sigma_a, &sigma_ta)?;
            json_out(serde_json::json!({
                "c": rep.c, "worst_t": rep.worst_t, "degenerate": rep.degenerate,
            }));
        }
    }
    Ok(0)
}

fn cmd_gen(args: GenArgs) -> Result<i32> {
    let family = match args.family.as_str() {
        "indicator" => Family::Indicator { a: args.a.unwrap_or(0.5) },
        "power" => Family::Power { a: args.a.unwrap_or(0.5), t_min: args.t_min },
        "logpow" => Family::LogPow { beta: args.beta.unwrap_or(1.0), t_min: args.t_min },
        "random" => Family::Random { seed: args.seed },
        "mix" => Family::IndicatorMix {
            parts: vec![(args.a.unwrap_or(0.5), 1.0), (args.a.unwrap_or(0.5) / 2.0, 2.0)],
        },
        other => bail!("unknown family '{other}'"),
    };
    let f = testfn::generate(&family, args.pieces)?;
    write_step(&args.out, &f)?;
    eprintln!("wrote {} pieces (seed {})", f.pieces().len(), args.seed);
    Ok(0)
}

fn cmd_verify(args: VerifyArgs, cfg: &Config) -> Result<i32> {
    if args.list {
        for s in extrapkit::verify::list_suites() {
            println!("{s}");
        }
        return Ok(0);
    }
    let which = args.suite.as_deref().unwrap_or("all");
    let report = extrapkit::verify::run(Some(which), cfg)?;
    for line in report.summary_lines() {
        println!("{line}");
    }
    if let Some(dir) = args.report_dir {
        report.write_files(&dir)?;
        eprintln!("reports written to {}", dir.display());
    }
    Ok(i32::from(!report.passed))
}

fn main() {
    // die quietly when the consumer of a pipe goes away (e.g. `| head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run() {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
