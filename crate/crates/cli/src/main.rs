use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kummer_asym::expansion::{
    acceptance_grid, decay_sweep, eval_sides, fmt_f64, gamma_ratio_check, write_csv,
    ExpansionCoefficients, ExpansionConfig, SideBySide, Variant,
};
use kummer_asym::identities::run_suite;
use kummer_asym::olver::{
    compute_coefficient_table, f_confluent, lower_coefficients, DEFAULT_ORDER,
};
use kummer_asym::ratpoly::{parse_param_poly, Param};
use kummer_asym::special::{
    bessel_i, bessel_k, kummer_m, kummer_u, LogComplex, Mode, Precision, RiemannPoint,
};
use kummer_asym::temme::{
    gamma_ratio_coefficients, generalized_bernoulli, temme_table, DEFAULT_KMAX, DEFAULT_NMAX,
};
use kummer_asym::{Error, Result};
use num_complex::Complex64;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "kummer-asym",
    version,
    about = "Exact coefficients and numerical checks of Bessel-type expansions of Kummer functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficient polynomials A_s, B_s (variant AB) or a_s, b_s (variant ab).
    Coeffs(CoeffsArgs),
    /// Generating-function coefficients a†, b† with the gamma-ratio d, d̃.
    Temme(TemmeArgs),
    /// Generalized Bernoulli polynomials B_n^{(ell)}(x) in b.
    Bernoulli(BernoulliArgs),
    /// One value of a special-function oracle.
    Oracle(OracleArgs),
    /// Both sides of one expansion.
    Eval(EvalArgs),
    /// The exact identity suite.
    Verify(VerifyArgs),
    /// Decay sweep written as CSV.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CoeffVariant {
    #[value(name = "AB")]
    Capital,
    #[value(name = "ab")]
    Lower,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ParamArg {
    Mu,
    B,
}

impl From<ParamArg> for Param {
    fn from(p: ParamArg) -> Param {
        match p {
            ParamArg::Mu => Param::Mu,
            ParamArg::B => Param::B,
        }
    }
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    #[arg(long, value_enum, default_value = "AB")]
    variant: CoeffVariant,
    #[arg(long, value_enum, default_value = "mu")]
    param: ParamArg,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TemmeArgs {
    #[arg(long, default_value_t = DEFAULT_NMAX)]
    nmax: usize,
    #[arg(long, default_value_t = DEFAULT_KMAX)]
    kmax: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BernoulliArgs {
    #[arg(long)]
    n: usize,
    /// Order parameter as a polynomial in b, e.g. `2-b`.
    #[arg(long, allow_hyphen_values = true)]
    ell: String,
    /// Argument as a polynomial in b, e.g. `1-b/2`.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleFn {
    I,
    K,
    M,
    U,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long = "fn", value_enum)]
    function: OracleFn,
    /// Order of I or K, as `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    /// First parameter of M or U, as `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Second parameter of M or U, as `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Modulus of the argument.
    #[arg(long)]
    r: f64,
    /// Angle of the argument on the Riemann surface.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EvalVariant {
    M,
    UCapital,
    ULower,
    GammaRatio,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long, value_enum)]
    variant: EvalVariant,
    /// `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    #[arg(long, default_value_t = 1.0)]
    z_r: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    z_theta: f64,
    /// Modulus of u.
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    u_theta: f64,
    #[arg(long = "n")]
    n: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_NMAX)]
    nmax: usize,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum)]
    variant: SweepVariant,
    /// Use the pinned acceptance grid instead of the grid flags.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    b: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    z_r: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    z_theta: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    t: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    u_theta: Vec<f64>,
    #[arg(long = "n", value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SweepVariant {
    M,
    UCapital,
    ULower,
}

impl From<SweepVariant> for Variant {
    fn from(v: SweepVariant) -> Variant {
        match v {
            SweepVariant::M => Variant::M,
            SweepVariant::UCapital => Variant::UCapital,
            SweepVariant::ULower => Variant::ULower,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Preset {
    Acceptance,
}

/// Why a run failed: a rejected input or computation, or a write error.
enum Failure {
    Domain(Error),
    Io(io::Error),
    /// The run completed but reported failures of its own.
    Reported,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Run = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = precision()
        .map_err(Failure::from)
        .and_then(|prec| run(cli.command, prec));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Reported) => ExitCode::from(1),
        Err(Failure::Domain(e)) => {
            eprintln!("error kind={} message={:?}", e.kind(), e.to_string());
            ExitCode::from(1)
        }
        // A closed downstream pipe (`| head`) is not a failure.
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error kind=io message={:?}", e.to_string());
            ExitCode::from(1)
        }
    }
}

fn precision() -> Result<Precision> {
    Precision::from_env(Mode::DoubleDouble)
}

fn run(command: Command, prec: Precision) -> Run {
    match command {
        Command::Coeffs(a) => coeffs(a),
        Command::Temme(a) => temme(a),
        Command::Bernoulli(a) => bernoulli(a),
        Command::Oracle(a) => oracle(a, prec),
        Command::Eval(a) => eval(a, prec),
        Command::Verify(a) => verify(a),
        Command::Sweep(a) => sweep(a, prec),
    }
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit_json(out: &Option<PathBuf>, value: &serde_json::Value) -> Run {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("not a complex number {s:?} (use re or re,im)"));
    let (re, im) = match s.split_once(',') {
        Some((r, i)) => (r.trim(), i.trim()),
        None => (s.trim(), "0"),
    };
    Ok(Complex64::new(
        re.parse().map_err(|_| bad())?,
        im.parse().map_err(|_| bad())?,
    ))
}

fn fmt_c(c: Complex64) -> String {
    format!("{},{}", fmt_f64(c.re), fmt_f64(c.im))
}

fn coeffs(args: CoeffsArgs) -> Run {
    let param: Param = args.param.into();
    let table = compute_coefficient_table(&f_confluent(Param::Mu), args.order)?;
    let config = json!({
        "command": "coeffs",
        "order": args.order,
        "variant": match args.variant { CoeffVariant::Capital => "AB", CoeffVariant::Lower => "ab" },
        "param": param.name(),
    });
    let body = match args.variant {
        CoeffVariant::Capital => table.in_param(param).to_json(),
        CoeffVariant::Lower => lower_coefficients(&table)?
            .in_param(param)
            .to_json(args.order),
    };
    match args.format {
        Format::Json => {
            let mut body = body;
            body["config"] = config;
            emit_json(&args.out, &body)
        }
        Format::Text => {
            let mut w = sink(&args.out)?;
            writeln!(w, "# {config}")?;
            let (na, nb) = match args.variant {
                CoeffVariant::Capital => ("A", "B"),
                CoeffVariant::Lower => ("a", "b"),
            };
            let (pa, pb) = match args.variant {
                CoeffVariant::Capital => {
                    let t = table.in_param(param);
                    (t.a().to_vec(), t.b().to_vec())
                }
                CoeffVariant::Lower => {
                    let l = lower_coefficients(&table)?.in_param(param);
                    (l.a, l.b)
                }
            };
            for (s, p) in pa.iter().enumerate() {
                writeln!(w, "{na}_{s} = {p}")?;
            }
            for (s, p) in pb.iter().enumerate() {
                writeln!(w, "{nb}_{s} = {p}")?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn temme(args: TemmeArgs) -> Run {
    let table = temme_table(args.nmax, args.kmax)?;
    let (d, dt) = gamma_ratio_coefficients(args.nmax + 1)?;
    let config = json!({ "command": "temme", "nmax": args.nmax, "kmax": args.kmax });
    match args.format {
        Format::Json => {
            let mut body = table.to_json();
            body["d"] = json!(d);
            body["dtilde"] = json!(dt);
            body["config"] = config;
            emit_json(&args.out, &body)
        }
        Format::Text => {
            let mut w = sink(&args.out)?;
            writeln!(w, "# {config}")?;
            for (n, p) in table.adagger.iter().enumerate() {
                writeln!(w, "adagger_{n} = {p}")?;
            }
            for (n, p) in table.bdagger.iter().enumerate() {
                writeln!(w, "bdagger_{n} = {p}")?;
            }
            for (n, p) in d.iter().enumerate() {
                writeln!(w, "d_{n} = {p}")?;
            }
            for (n, p) in dt.iter().enumerate() {
                writeln!(w, "dtilde_{n} = {p}")?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn bernoulli(args: BernoulliArgs) -> Run {
    let ell = parse_param_poly(Param::B, &args.ell)?;
    let x = parse_param_poly(Param::B, &args.x)?;
    let values = generalized_bernoulli(args.n, &ell, &x)?;
    let config = json!({
        "command": "bernoulli",
        "n": args.n,
        "ell": ell.to_string(),
        "x": x.to_string(),
        "param": "b",
    });
    match args.format {
        Format::Json => emit_json(&args.out, &json!({ "config": config, "values": values })),
        Format::Text => {
            let mut w = sink(&args.out)?;
            writeln!(w, "# {config}")?;
            for (n, p) in values.iter().enumerate() {
                writeln!(w, "B_{n} = {p}")?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn required(name: &str, v: &Option<String>) -> Result<Complex64> {
    let s = v
        .as_ref()
        .ok_or_else(|| Error::Domain(format!("--{name} is required for this function")))?;
    parse_complex(s)
}

fn print_value(w: &mut impl Write, label: &str, v: &LogComplex) -> io::Result<()> {
    writeln!(w, "{label}.logmag = {}", fmt_f64(v.logmag))?;
    writeln!(w, "{label}.phase = {}", fmt_f64(v.principal().phase))?;
    match v.to_complex() {
        Some(c) => writeln!(w, "{label}.value = {}", fmt_c(c)),
        None => writeln!(w, "{label}.value = unrepresentable"),
    }
}

fn oracle(args: OracleArgs, prec: Precision) -> Run {
    let z = RiemannPoint::new(args.r, args.theta)?;
    let mut w = io::stdout().lock();
    let (name, value) = match args.function {
        OracleFn::I | OracleFn::K => {
            let nu = required("nu", &args.nu)?;
            writeln!(
                w,
                "# oracle fn={:?} nu={} r={} theta={} precision={}",
                args.function,
                fmt_c(nu),
                fmt_f64(args.r),
                fmt_f64(args.theta),
                prec.mode.name()
            )?;
            match args.function {
                OracleFn::I => ("I", bessel_i(nu, &z, &prec)?),
                _ => ("K", bessel_k(nu, &z, &prec)?),
            }
        }
        OracleFn::M | OracleFn::U => {
            let a = required("a", &args.a)?;
            let b = required("b", &args.b)?;
            writeln!(
                w,
                "# oracle fn={:?} a={} b={} r={} theta={} precision={}",
                args.function,
                fmt_c(a),
                fmt_c(b),
                fmt_f64(args.r),
                fmt_f64(args.theta),
                prec.mode.name()
            )?;
            match args.function {
                OracleFn::M => ("M", kummer_m(a, b, z.value(), &prec)?),
                _ => ("U", kummer_u(a, b, &z, &prec)?),
            }
        }
    };
    print_value(&mut w, name, &value)?;
    Ok(())
}

fn print_sides(w: &mut impl Write, s: &SideBySide) -> io::Result<()> {
    print_value(w, "lhs", &s.lhs)?;
    print_value(w, "rhs", &s.rhs)?;
    writeln!(w, "rel_discrepancy = {}", fmt_f64(s.discrepancy))
}

fn eval(args: EvalArgs, prec: Precision) -> Run {
    let b = parse_complex(&args.b)?;
    let coeffs = ExpansionCoefficients::new(args.n)?;
    let mut w = io::stdout().lock();
    let variant = match args.variant {
        EvalVariant::GammaRatio => {
            if args.u_theta != 0.0 {
                return Err(Error::Domain(
                    "the gamma-ratio check takes real u (u-theta must be 0)".into(),
                )
                .into());
            }
            writeln!(
                w,
                "# eval variant=gamma-ratio b={} t={} N={} precision={}",
                fmt_c(b),
                fmt_f64(args.t),
                args.n,
                prec.mode.name()
            )?;
            let s = gamma_ratio_check(b, args.t, args.n, &coeffs)?;
            print_sides(&mut w, &s)?;
            return Ok(());
        }
        EvalVariant::M => Variant::M,
        EvalVariant::UCapital => Variant::UCapital,
        EvalVariant::ULower => Variant::ULower,
    };
    let cfg = ExpansionConfig {
        variant,
        b,
        t: args.t,
        u_theta: args.u_theta,
        z: RiemannPoint::new(args.z_r, args.z_theta)?,
        n: args.n,
        prec,
    };
    writeln!(
        w,
        "# eval variant={} b={} z_r={} z_theta={} t={} u_theta={} N={} a={} precision={}",
        variant,
        fmt_c(b),
        fmt_f64(args.z_r),
        fmt_f64(args.z_theta),
        fmt_f64(args.t),
        fmt_f64(args.u_theta),
        args.n,
        fmt_c(cfg.a()),
        prec.mode.name()
    )?;
    let s = eval_sides(&cfg, &coeffs)?;
    print_sides(&mut w, &s)?;
    Ok(())
}

fn verify(args: VerifyArgs) -> Run {
    let outcomes = run_suite(args.nmax)?;
    let mut w = io::stdout().lock();
    writeln!(w, "# verify nmax={}", args.nmax)?;
    let mut failed = 0;
    for o in &outcomes {
        writeln!(w, "{o}")?;
        if !o.passed() {
            failed += 1;
        }
    }
    writeln!(
        w,
        "summary: {} passed, {failed} failed",
        outcomes.len() - failed
    )?;
    w.flush()?;
    if failed > 0 {
        return Err(Failure::Reported);
    }
    Ok(())
}

fn sweep(args: SweepArgs, prec: Precision) -> Run {
    let variant: Variant = args.variant.into();
    let grid = match args.preset {
        Some(Preset::Acceptance) => {
            if !(args.b.is_empty()
                && args.z_r.is_empty()
                && args.z_theta.is_empty()
                && args.t.is_empty()
                && args.u_theta.is_empty()
                && args.n.is_empty())
            {
                return Err(
                    Error::Domain("--preset cannot be combined with grid flags".into()).into(),
                );
            }
            acceptance_grid(variant, prec)
        }
        None => {
            let or = |v: &[f64], d: &[f64]| if v.is_empty() { d.to_vec() } else { v.to_vec() };
            let bs = or(&args.b, &[1.5]);
            let rs = or(&args.z_r, &[1.0]);
            let ths = or(&args.z_theta, &[0.0]);
            let ts = or(&args.t, &[10.0, 20.0, 40.0]);
            let uths = or(&args.u_theta, &[0.0]);
            let ns = if args.n.is_empty() {
                vec![1, 2, 3]
            } else {
                args.n.clone()
            };
            let mut grid = Vec::new();
            for &b in &bs {
                for &r in &rs {
                    for &th in &ths {
                        for &uth in &uths {
                            for &n in &ns {
                                for &t in &ts {
                                    grid.push(ExpansionConfig {
                                        variant,
                                        b: Complex64::new(b, 0.0),
                                        t,
                                        u_theta: uth,
                                        z: RiemannPoint::new(r, th)?,
                                        n,
                                        prec,
                                    });
                                }
                            }
                        }
                    }
                }
            }
            grid
        }
    };
    let max_n = grid.iter().map(|c| c.n).max().unwrap_or(1);
    let coeffs = ExpansionCoefficients::new(max_n)?;
    let report = decay_sweep(&grid, &coeffs)?;
    // With --out the CSV file holds only the table; the resolved
    // configuration and the fits go to standard output. Without it the CSV
    // goes to standard output and the rest to standard error.
    let mut info: Box<dyn Write> = match args.out {
        Some(_) => Box::new(io::stdout().lock()),
        None => Box::new(io::stderr().lock()),
    };
    writeln!(
        info,
        "# sweep variant={} preset={} points={} precision={} out={}",
        variant,
        if args.preset.is_some() {
            "acceptance"
        } else {
            "none"
        },
        grid.len(),
        prec.mode.name(),
        args.out
            .as_ref()
            .map_or("-".to_string(), |p| p.display().to_string())
    )?;
    write_csv(&report.rows, sink(&args.out)?)?;
    let failures = report.rows.iter().filter(|r| r.outcome.is_err()).count();
    for f in &report.fits {
        writeln!(
            info,
            "fit variant={} b={} z_r={} z_theta={} u_theta={} N={} points={} slope={}",
            f.variant,
            fmt_c(f.b),
            fmt_f64(f.z.r),
            fmt_f64(f.z.theta),
            fmt_f64(f.u_theta),
            f.n,
            f.points,
            fmt_f64(f.slope)
        )?;
    }
    writeln!(
        info,
        "summary: {} rows, {failures} failed points, {} fits",
        report.rows.len(),
        report.fits.len()
    )?;
    info.flush()?;
    Ok(())
}
