use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use kspecial::beta_k::{
    beta_k_integral_halfline, beta_k_integral_unit, beta_k_product, beta_k_ratio, BetaKSpec,
};
use kspecial::cli::{
    exit_code, format_real, parse_grid, parse_integer_grid, parse_vector, resolve_profile,
    write_records, Format, InputValue, OutputRecord, PROFILE_ENV,
};
use kspecial::forests::{self, ForestFamily};
use kspecial::gamma_k::{GammaKEvaluator, GammaMethod};
use kspecial::hypergeometric::{
    evaluate, integral_representation_check, transfer_classical, HypergeometricSpec,
};
use kspecial::pochhammer::{self, PochhammerSpec};
use kspecial::verify::{self, Suite};
use kspecial::zeta_k::{zeta_k, ZetaKSpec};
use kspecial::{Error, EvalResult, Method, PrecisionProfile, Result};

#[derive(Parser)]
#[command(
    name = "kspecial",
    version,
    about = "k-deformed special functions: evaluation and identity checks"
)]
struct Cli {
    /// Relative tolerance; overrides the profile named by KSPECIAL_PROFILE.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Absolute tolerance; overrides the profile named by KSPECIAL_PROFILE.
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a function on points or grids (v, v1,v2,… or lo:hi:count).
    Eval(Box<EvalArgs>),
    /// Run an identity suite and print one line per check.
    Verify {
        #[arg(value_enum, default_value = "all")]
        suite: SuiteArg,
    },
    /// Count the planar forests G^a_{n,k}, optionally exporting all of them.
    Forests {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// File receiving the canonical form of every forest.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Largest family that may be exported.
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionArg {
    GammaK,
    BetaK,
    ZetaK,
    Pochhammer,
    Hyper,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Gamma,
    Beta,
    Zeta,
    Hyper,
    Forests,
    Pde,
    Stirling,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Gamma => Suite::Gamma,
            SuiteArg::Beta => Suite::Beta,
            SuiteArg::Zeta => Suite::Zeta,
            SuiteArg::Hyper => Suite::Hyper,
            SuiteArg::Forests => Suite::Forests,
            SuiteArg::Pde => Suite::Pde,
            SuiteArg::Stirling => Suite::Stirling,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct EvalArgs {
    #[arg(value_enum)]
    function: FunctionArg,
    #[arg(long)]
    k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// Numerator parameters of the hypergeometric series.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    a: String,
    /// Numerator steps k_j (default 1 for every a_j).
    #[arg(long)]
    ka: Option<String>,
    /// Denominator parameters of the hypergeometric series.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    b: String,
    /// Denominator steps s_i (default 1 for every b_i).
    #[arg(long, alias = "sb")]
    kb: Option<String>,
    /// gamma-k: scaling|integral|limit|product; beta-k: ratio|halfline|unit|product;
    /// hyper: series|transfer|integral.
    #[arg(long)]
    method: Option<String>,
    /// Pochhammer in exact rational arithmetic (x, k accept p/q).
    #[arg(long)]
    exact: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let env = std::env::var(PROFILE_ENV).ok();
    let profile = match resolve_profile(env.as_deref(), cli.rel_tol, cli.abs_tol) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    match cli.command {
        Command::Eval(args) => match run_eval(&args, &profile) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(&e),
        },
        Command::Verify { suite } => {
            let report = verify::run(suite.into(), &profile);
            print!("{}", report.render());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Forests {
            a,
            n,
            k,
            export,
            cap,
        } => run_forests(a, n, k, export, cap),
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("kspecial: {e}");
    ExitCode::from(exit_code(e) as u8)
}

fn required(value: &Option<String>, name: &str) -> Result<String> {
    value
        .clone()
        .ok_or_else(|| Error::Domain(format!("--{name} is required for this function")))
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

fn reals(names: &[&str], point: &[f64]) -> BTreeMap<String, InputValue> {
    names
        .iter()
        .zip(point)
        .map(|(n, &v)| (n.to_string(), InputValue::Real(v)))
        .collect()
}

type Job = Box<dyn Fn(&[f64]) -> Result<(BTreeMap<String, InputValue>, EvalResult)> + Sync>;

fn run_eval(args: &EvalArgs, profile: &PrecisionProfile) -> Result<()> {
    let profile = *profile;
    if args.exact && !matches!(args.function, FunctionArg::Pochhammer) {
        return Err(Error::Domain("--exact applies to pochhammer only".into()));
    }
    let (tag, axes, job): (&str, Vec<Vec<f64>>, Job) = match args.function {
        FunctionArg::GammaK => {
            let method: GammaMethod = args.method.as_deref().unwrap_or("scaling").parse()?;
            let axes = vec![
                parse_grid(&required(&args.k, "k")?)?,
                parse_grid(&required(&args.x, "x")?)?,
            ];
            let job: Job = Box::new(move |p| {
                let r = GammaKEvaluator::new(p[0], method)?
                    .with_profile(profile)
                    .evaluate(p[1])?;
                Ok((reals(&["k", "x"], p), r))
            });
            ("gamma_k", axes, job)
        }
        FunctionArg::BetaK => {
            let method = args.method.clone().unwrap_or_else(|| "ratio".into());
            if !["ratio", "halfline", "unit", "product"].contains(&method.as_str()) {
                return Err(Error::Domain(format!("unknown beta-k method {method:?}")));
            }
            let axes = vec![
                parse_grid(&required(&args.k, "k")?)?,
                parse_grid(&required(&args.x, "x")?)?,
                parse_grid(&required(&args.y, "y")?)?,
            ];
            let job: Job = Box::new(move |p| {
                let spec = BetaKSpec::new(p[0], p[1], p[2])?;
                let r = match method.as_str() {
                    "ratio" => beta_k_ratio(&spec)?,
                    "halfline" => beta_k_integral_halfline(&spec, &profile)?,
                    "unit" => beta_k_integral_unit(&spec, &profile)?,
                    _ => beta_k_product(&spec, verify::PRODUCT_TERMS)?,
                };
                Ok((reals(&["k", "x", "y"], p), r))
            });
            ("beta_k", axes, job)
        }
        FunctionArg::ZetaK => {
            let axes = vec![
                parse_grid(&required(&args.k, "k")?)?,
                parse_grid(&required(&args.x, "x")?)?,
                parse_grid(&required(&args.s, "s")?)?,
            ];
            let job: Job = Box::new(move |p| {
                let r = zeta_k(&ZetaKSpec::new(p[0], p[1], p[2])?, &profile)?;
                Ok((reals(&["k", "x", "s"], p), r))
            });
            ("zeta_k", axes, job)
        }
        FunctionArg::Pochhammer if args.exact => return run_exact_pochhammer(args),
        FunctionArg::Pochhammer => {
            let ns: Vec<f64> = parse_integer_grid(&required(&args.n, "n")?)?
                .into_iter()
                .map(f64::from)
                .collect();
            let axes = vec![
                parse_grid(&required(&args.x, "x")?)?,
                ns,
                parse_grid(&required(&args.k, "k")?)?,
            ];
            let job: Job = Box::new(move |p| {
                let spec = PochhammerSpec::new(p[0], p[1] as u32, p[2]);
                let value = pochhammer::pochhammer_k(spec)?;
                let mut inputs = reals(&["x", "k"], &[p[0], p[2]]);
                inputs.insert("n".into(), InputValue::Integer(p[1] as u64));
                let err = 2.0 * f64::from(spec.n) * f64::EPSILON * value.abs();
                Ok((
                    inputs,
                    EvalResult::new(value, err, Method::Product, spec.n as usize),
                ))
            });
            ("pochhammer", axes, job)
        }
        FunctionArg::Hyper => {
            let a = parse_vector(&args.a)?;
            let b = parse_vector(&args.b)?;
            let k = match &args.ka {
                Some(t) => parse_vector(t)?,
                None => vec![1.0; a.len()],
            };
            let s = match &args.kb {
                Some(t) => parse_vector(t)?,
                None => vec![1.0; b.len()],
            };
            let spec = HypergeometricSpec::new(a, k, b, s)?;
            let method = args.method.clone().unwrap_or_else(|| "series".into());
            if !["series", "transfer", "integral"].contains(&method.as_str()) {
                return Err(Error::Domain(format!("unknown hyper method {method:?}")));
            }
            let list = |v: &[f64]| {
                v.iter()
                    .map(|x| format_real(*x))
                    .collect::<Vec<_>>()
                    .join(",")
            };
            let mut fixed = BTreeMap::new();
            fixed.insert("a".to_string(), InputValue::Text(list(&spec.a)));
            fixed.insert("ka".to_string(), InputValue::Text(list(&spec.k)));
            fixed.insert("b".to_string(), InputValue::Text(list(&spec.b)));
            fixed.insert("kb".to_string(), InputValue::Text(list(&spec.s)));
            let axes = vec![parse_grid(&required(&args.x, "x")?)?];
            let job: Job = Box::new(move |p| {
                let r = match method.as_str() {
                    "series" => evaluate(&spec, p[0], &profile)?,
                    "transfer" => transfer_classical(&spec, p[0], &profile)?,
                    _ => integral_representation_check(&spec, p[0], &profile)?,
                };
                let mut inputs = fixed.clone();
                inputs.insert("x".into(), InputValue::Real(p[0]));
                Ok((inputs, r))
            });
            ("hyper", axes, job)
        }
    };

    let points = cartesian(&axes);
    // evaluated in parallel, collected in input order
    let results: Vec<Result<OutputRecord>> = points
        .par_iter()
        .map(|p| job(p).map(|(inputs, r)| OutputRecord::from_eval(tag, inputs, &r)))
        .collect();
    let records = results.into_iter().collect::<Result<Vec<_>>>()?;
    emit(&records, args.format)
}

fn run_exact_pochhammer(args: &EvalArgs) -> Result<()> {
    let rationals = |text: &str| -> Result<Vec<_>> {
        text.split(',')
            .map(|t| pochhammer::exact::parse_rational(t.trim()))
            .collect()
    };
    let xs = rationals(&required(&args.x, "x")?)?;
    let ks = rationals(&required(&args.k, "k")?)?;
    let ns = parse_integer_grid(&required(&args.n, "n")?)?;
    let mut records = Vec::new();
    for x in &xs {
        for &n in &ns {
            for k in &ks {
                let value = pochhammer::exact::pochhammer_k(x, n, k);
                let mut inputs = BTreeMap::new();
                inputs.insert("x".to_string(), InputValue::Text(x.to_string()));
                inputs.insert("n".to_string(), InputValue::Integer(u64::from(n)));
                inputs.insert("k".to_string(), InputValue::Text(k.to_string()));
                records.push(OutputRecord {
                    function: "pochhammer".into(),
                    inputs,
                    value: value.to_string(),
                    err_estimate: 0.0,
                    method: "exact".into(),
                });
            }
        }
    }
    emit(&records, args.format)
}

fn emit(records: &[OutputRecord], format: FormatArg) -> Result<()> {
    let format = match format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    let stdout = io::stdout();
    write_records(stdout.lock(), records, format)
}

fn run_forests(a: u32, n: u32, k: u32, export: Option<PathBuf>, cap: u64) -> ExitCode {
    let family = match ForestFamily::new(a, n, k) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    println!("{}", forests::count(&family));
    let Some(path) = export else {
        return ExitCode::SUCCESS;
    };
    let iter = match forests::enumerate(&family, cap) {
        Ok(it) => it,
        Err(e) => return fail(&e),
    };
    let written = File::create(&path).and_then(|file| {
        let mut w = BufWriter::new(file);
        for (i, forest) in iter.enumerate() {
            if i > 0 {
                writeln!(w)?;
            }
            w.write_all(forest.to_canonical().as_bytes())?;
        }
        w.flush()
    });
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kspecial: cannot write {}: {e}", path.display());
            ExitCode::from(2)
        }
    }
}
