//! The `epsdens` command-line front end.
//!
//! Exit status: 0 on success, 1 on input errors, 2 when a computation fails
//! (fit failure, unverified region, failed structural check).

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::calc::FiltrationSpec;
use crate::density::{
    closure_invariance_check, density_report, detect_and_harvest, diagonal_multiplicity_from, epsilon_density,
    mixed_from_last_piece, ordinary_computation, saturated_computation, DensityOptions,
};
use crate::error::{Error, Result};
use crate::hilbert::{fit_binumerator, LengthOracle};
use crate::ideal::MonomialIdeal;
use crate::io;
use crate::piecewise::PiecewisePolynomial;
use crate::qpfit::{fit_chamber, FitOptions};
use crate::ring::RingDescriptor;
use crate::scalar::{format_rational, int, parse_rational, Rational};
use crate::vpf::{chamber_lattice, chambers, period, phi_brute, VPMatrix};

#[derive(Debug, Parser)]
#[command(
    name = "epsdens",
    version,
    about = "Exact density functions and epsilon multiplicity of monomial ideals"
)]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "EPSDENS_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Ideal specification: {"vars": [...], "gens": [...], "quotient": [...]}.
    #[arg(short, long)]
    pub input: PathBuf,
    /// Window for saturation-stabilization detection.
    #[arg(long, default_value_t = 48)]
    pub n_max: u32,
    /// Saturated generators are harvested up to n = c · k_max.
    #[arg(long, default_value_t = 4)]
    pub k_max: u32,
    /// Override of the fit degree (default d - 1).
    #[arg(long)]
    pub degree: Option<u32>,
    /// Largest offset step tried when fitting a chamber.
    #[arg(long, default_value_t = 8)]
    pub offset_kmax: u32,
    /// Sample step for checks and CSV output.
    #[arg(long, default_value = "1/20", value_parser = parse_rational_arg)]
    pub step: Rational,
    /// Exit with status 2 when any structural check fails.
    #[arg(long)]
    pub verify: bool,
    /// Write JSON here instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write CSV samples of the main density here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Ordinary,
    Saturated,
    Epsilon,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Density of the ordinary powers.
    Density(Common),
    /// Density of the saturated powers.
    SatDensity(Common),
    /// The ε-density and ε(I).
    Epsilon(Common),
    /// Full report: all densities, α, β, ε, diagonal and mixed multiplicities.
    Invariants(Common),
    /// Multiplicity of the diagonal subalgebra along (p, q).
    Diag {
        #[command(flatten)]
        common: Common,
        #[arg(long, num_args = 2, value_names = ["P", "Q"], required = true)]
        at: Vec<i64>,
    },
    /// Mixed multiplicities and intersection numbers.
    Mixed(Common),
    /// Vector partition function of a 2-row matrix.
    Vpf {
        /// {"r": r, "columns": [[d, e], ...]}.
        #[arg(short, long)]
        matrix: String,
        /// Evaluate at (m, n) instead of fitting every chamber.
        #[arg(long, num_args = 2, value_names = ["M", "N"])]
        at: Option<Vec<i64>>,
        #[arg(long, default_value_t = 8)]
        offset_kmax: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Numerator of the bigraded length series.
    Series {
        #[command(flatten)]
        common: Common,
        /// Use the saturated powers.
        #[arg(long)]
        saturated: bool,
        /// Box [0, M] × [0, N] (default: from the denominator degrees).
        #[arg(long = "box", num_args = 2, value_names = ["M", "N"])]
        box_size: Option<Vec<u32>>,
    },
    /// CSV samples of a density.
    Sample {
        #[command(flatten)]
        common: Common,
        /// Last sample point (default: last breakpoint + 2).
        #[arg(long, value_parser = parse_rational_arg)]
        to: Option<Rational>,
        #[arg(long, value_enum, default_value_t = Which::Ordinary)]
        which: Which,
    },
    /// Compare the densities of I and of its integral closure.
    CheckClosure(Common),
}

fn parse_rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

impl Common {
    fn options(&self) -> DensityOptions {
        DensityOptions {
            n_max: self.n_max,
            k_max: self.k_max,
            degree: self.degree,
            offset_kmax: self.offset_kmax,
            sample_step: self.step.clone(),
        }
    }

    fn load(&self) -> Result<(RingDescriptor, MonomialIdeal)> {
        let text = std::fs::read_to_string(&self.input)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", self.input.display())))?;
        io::parse_ideal(&text)
    }

    fn job(&self, command: &str, ring: &RingDescriptor, i: &MonomialIdeal) -> Value {
        json!({
            "command": command,
            "input": io::ideal_to_json(ring, i),
            "n_max": self.n_max,
            "k_max": self.k_max,
            "degree": self.degree,
            "offset_kmax": self.offset_kmax,
            "step": format_rational(&self.step),
            "verify": self.verify,
        })
    }
}

/// What a command produced.
struct Outcome {
    json: Value,
    csv: Option<String>,
    /// Names of failed checks, for `--verify`.
    failed: Vec<String>,
}

fn failed_checks(v: &Value) -> Vec<String> {
    let mut out = Vec::new();
    collect_failed(v, &mut out);
    out
}

fn collect_failed(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            if let (Some(Value::String(name)), Some(Value::Bool(false))) = (map.get("name"), map.get("passed")) {
                if !name.ends_with("(informational)") {
                    out.push(name.clone());
                }
            }
            map.values().for_each(|x| collect_failed(x, out));
        }
        Value::Array(a) => a.iter().for_each(|x| collect_failed(x, out)),
        _ => {}
    }
}

fn default_to(f: &PiecewisePolynomial) -> Rational {
    let last = f.breakpoints.last().map_or(0.0, |b| b.to_f64()).ceil() as i64;
    int(last + 2)
}

fn samples(f: &PiecewisePolynomial, step: &Rational, to: Option<&Rational>) -> Result<String> {
    let to = to.cloned().unwrap_or_else(|| default_to(f));
    Ok(io::samples_csv(&f.samples(step, &to)?))
}

fn with_job(mut v: Value, job: Value) -> Value {
    v.as_object_mut().expect("object").insert("job".into(), job);
    v
}

fn run_common(
    name: &str,
    c: &Common,
    body: impl FnOnce(&RingDescriptor, &MonomialIdeal, &DensityOptions) -> Result<(Value, Option<PiecewisePolynomial>)>,
) -> Result<Outcome> {
    let (ring, i) = c.load()?;
    let opts = c.options();
    let (v, main) = body(&ring, &i, &opts)?;
    let csv = match (&c.csv, main) {
        (Some(_), Some(f)) => Some(samples(&f, &c.step, None)?),
        _ => None,
    };
    let failed = failed_checks(&v);
    Ok(Outcome {
        json: with_job(v, c.job(name, &ring, &i)),
        csv,
        failed,
    })
}

#[derive(Deserialize)]
struct MatrixInput {
    r: u32,
    columns: Vec<(u32, u32)>,
}

fn parse_matrix(text: &str) -> Result<VPMatrix> {
    let m: MatrixInput = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    VPMatrix::new(m.r, m.columns)
}

fn vpf_command(matrix: &str, at: Option<&[i64]>, offset_kmax: u32) -> Result<Value> {
    let m = parse_matrix(matrix)?;
    let columns: Vec<Value> = m.columns.iter().map(|&(a, b)| json!([a, b])).collect();
    if let Some(&[a, b]) = at {
        return Ok(json!({"r": m.r, "columns": columns, "at": [a, b], "value": phi_brute(&m, a, b).to_string()}));
    }
    let h = period(&m)?;
    let mut opts = FitOptions::for_partition_function(&m);
    opts.offset_kmax = offset_kmax;
    let mut out = Vec::new();
    for c in chambers(&m)? {
        let fit = fit_chamber(&m, &c, &chamber_lattice(&m, &c), h, &opts)?;
        let cosets: Vec<Value> = fit
            .qp
            .polys
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let (x, y) = fit.qp.lattice.representative(k);
                json!({"representative": [x, y], "poly": p.pretty()})
            })
            .collect();
        out.push(json!({
            "lower_slope": io::rational_json(&c.lower_slope),
            "upper_slope": c.upper_slope.as_ref().map_or(Value::Null, io::rational_json),
            "lattice": [fit.qp.lattice.a, fit.qp.lattice.b, fit.qp.lattice.c],
            "offset": [io::rational_json(&fit.offset.0), io::rational_json(&fit.offset.1)],
            "cosets": cosets,
        }));
    }
    Ok(json!({"r": m.r, "columns": columns, "period": h, "chambers": out}))
}

fn series_command(
    ring: &RingDescriptor,
    i: &MonomialIdeal,
    opts: &DensityOptions,
    saturated: bool,
    box_size: Option<&[u32]>,
) -> Result<Value> {
    let (spec, bidegrees) = if saturated {
        if !ring.is_polynomial() {
            return Err(Error::InvalidInput(
                "saturated series need a polynomial ambient ring".into(),
            ));
        }
        detect_and_harvest(i, opts)?
    } else {
        let b = i.generators().iter().map(|g| (g.degree(), 1)).collect();
        (FiltrationSpec::ordinary(i.clone()), b)
    };
    let r = ring.var_count() as u32;
    let (bm, bn) = match box_size {
        Some(&[a, b]) => (a, b),
        _ => {
            let n: u32 = bidegrees.iter().map(|b| b.1).sum();
            let m: u32 = r + bidegrees.iter().map(|b| b.0).sum::<u32>();
            (m * 5 / 4 + 2, n * 5 / 4 + 2)
        }
    };
    let oracle = LengthOracle::new(ring, spec)?;
    let num = fit_binumerator(&oracle, &bidegrees, r, (bm, bn))?;
    let terms: Vec<Value> = num
        .terms()
        .into_iter()
        .map(|((a, b), c)| json!({"m": a, "n": b, "coeff": c.to_string()}))
        .collect();
    Ok(json!({
        "r": r,
        "bidegrees": bidegrees.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
        "box": [bm, bn],
        "numerator": num.pretty(),
        "terms": terms,
    }))
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Density(c) => run_common("density", c, |ring, i, o| {
            let comp = ordinary_computation(ring, i, o)?;
            Ok((io::computation_json(&comp), Some(comp.density)))
        }),
        Command::SatDensity(c) => run_common("sat-density", c, |ring, i, o| {
            let comp = saturated_computation(ring, i, o)?;
            Ok((io::saturated_json(&comp), Some(comp.inner.density)))
        }),
        Command::Epsilon(c) => run_common("epsilon", c, |ring, i, o| {
            let e = epsilon_density(ring, i, o)?;
            Ok((io::epsilon_json(&e), Some(e.density)))
        }),
        Command::Invariants(c) => run_common("invariants", c, |ring, i, o| {
            let r = density_report(ring, i, o)?;
            Ok((io::report_json(&r), Some(r.ordinary.density)))
        }),
        Command::Diag { common, at } => run_common("diag", common, |ring, i, o| {
            let (p, q) = (at[0], at[1]);
            let comp = ordinary_computation(ring, i, o)?;
            let e = diagonal_multiplicity_from(&comp.density, p, q)?;
            Ok((json!({"p": p, "q": q, "multiplicity": io::rational_json(&e)}), None))
        }),
        Command::Mixed(c) => run_common("mixed", c, |ring, i, o| {
            let comp = ordinary_computation(ring, i, o)?;
            let m = mixed_from_last_piece(comp.density.pieces.last().expect("nonempty"), comp.density.dim)?;
            let mut v = io::mixed_json(&m);
            v["last_piece"] = io::poly_json(comp.density.pieces.last().expect("nonempty"));
            Ok((v, None))
        }),
        Command::Vpf {
            matrix,
            at,
            offset_kmax,
            ..
        } => Ok(Outcome {
            json: vpf_command(matrix, at.as_deref(), *offset_kmax)?,
            csv: None,
            failed: Vec::new(),
        }),
        Command::Series {
            common,
            saturated,
            box_size,
        } => run_common("series", common, |ring, i, o| {
            Ok((series_command(ring, i, o, *saturated, box_size.as_deref())?, None))
        }),
        Command::Sample { common, to, which } => {
            let (ring, i) = common.load()?;
            let opts = common.options();
            let f = match which {
                Which::Ordinary => ordinary_computation(&ring, &i, &opts)?.density,
                Which::Saturated => saturated_computation(&ring, &i, &opts)?.inner.density,
                Which::Epsilon => epsilon_density(&ring, &i, &opts)?.density,
            };
            Ok(Outcome {
                json: Value::Null,
                csv: Some(samples(&f, &common.step, to.as_ref())?),
                failed: Vec::new(),
            })
        }
        Command::CheckClosure(c) => {
            let mut out = run_common("check-closure", c, |ring, i, o| {
                let r = closure_invariance_check(ring, i, o)?;
                Ok((io::closure_json(ring, &r), None))
            })?;
            if out.json["passed"] == json!(false) {
                out.failed.push("closure invariance".into());
            }
            Ok(out)
        }
    }
}

fn output_path(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Density(c)
        | Command::SatDensity(c)
        | Command::Epsilon(c)
        | Command::Invariants(c)
        | Command::Mixed(c)
        | Command::CheckClosure(c)
        | Command::Diag { common: c, .. }
        | Command::Series { common: c, .. }
        | Command::Sample { common: c, .. } => c.output.as_ref(),
        Command::Vpf { output, .. } => output.as_ref(),
    }
}

fn csv_path(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Sample { common, .. } => common.output.as_ref(),
        Command::Density(c) | Command::SatDensity(c) | Command::Epsilon(c) | Command::Invariants(c) => c.csv.as_ref(),
        _ => None,
    }
}

fn verify(cmd: &Command) -> bool {
    match cmd {
        Command::Density(c)
        | Command::SatDensity(c)
        | Command::Epsilon(c)
        | Command::Invariants(c)
        | Command::Mixed(c)
        | Command::Diag { common: c, .. }
        | Command::Series { common: c, .. }
        | Command::Sample { common: c, .. } => c.verify,
        Command::CheckClosure(_) => true,
        Command::Vpf { .. } => false,
    }
}

fn write_text(path: Option<&PathBuf>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    }
}

/// Runs a parsed command and returns the exit status.
pub fn run(cli: &Cli) -> i32 {
    if let Some(n) = cli.threads {
        // Fails only if a pool already exists, in which case it is reused.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let cmd = &cli.command;
    let outcome = match dispatch(cmd) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("epsdens: {e}");
            let _ = write_text(output_path(cmd), &io::to_text(&io::error_json(&e)));
            return if e.is_computation_failure() { 2 } else { 1 };
        }
    };
    let written = match (&outcome.json, cmd) {
        (_, Command::Sample { .. }) => write_text(csv_path(cmd), outcome.csv.as_deref().unwrap_or_default()),
        (json, _) => {
            write_text(output_path(cmd), &io::to_text(json)).and_then(|_| match (&outcome.csv, csv_path(cmd)) {
                (Some(csv), Some(p)) => std::fs::write(p, csv),
                _ => Ok(()),
            })
        }
    };
    if let Err(e) = written {
        eprintln!("epsdens: cannot write output: {e}");
        return 1;
    }
    if verify(cmd) && !outcome.failed.is_empty() {
        eprintln!("epsdens: failed checks: {}", outcome.failed.join(", "));
        return 2;
    }
    0
}

/// Parses arguments and runs; usage errors exit with 1.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            code
        }
    }
}
