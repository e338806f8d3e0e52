//! Command-line front end: parse problem files, dispatch computations, emit
//! machine-readable results. JSON goes to stdout, diagnostics to stderr.
//!
//! Exit codes: 0 success, 2 parse error, 3 exact mode unsupported on the
//! space, 4 dimension/shape error, 5 I/O error, 1 anything else.

use clap::{Parser, Subcommand};
use jointrad::index::{estimate_index, index_bounds, verify_direct_sum_theorems, witness_tuple};
use jointrad::jointcalc::{
    joint_numerical_radius_with_config, joint_operator_norm_with_config, verify_adjoint_radius,
    Mode,
};
use jointrad::operators::{Matrix, OperatorTuple};
use jointrad::optimize::AscentConfig;
use jointrad::range::{
    bounding_box_diagonal, convexity_report, export_range, sample_range, ExportFormat,
    SampleSource,
};
use jointrad::rng::{split_seed, stream_rng};
use jointrad::scalar::Scalar;
use jointrad::{Error, Field, SpaceDescriptor};
use rand::Rng;
use rand_distr::StandardNormal;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "jointradius", version, about = "Joint operator norm, numerical radius, range, and index computations on finite-dimensional lq-built spaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// p-th joint operator norm of a tuple document
    Norm {
        file: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value = "auto")]
        mode: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// p-th joint numerical radius of a tuple document
    Radius {
        file: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value = "auto")]
        mode: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample the joint numerical range, export it, report convexity
    Range {
        file: PathBuf,
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long = "convexity-trials", default_value_t = 200)]
        convexity_trials: usize,
        /// Absolute midpoint-gap tolerance; default is 5% of the sample's
        /// bounding-box diagonal
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Estimate the (p,k)-th joint numerical index of a space document
    Index {
        file: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run property suites, TAP-style output
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        trials: usize,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::UnsupportedExact(_) | Error::CapExceeded { .. } => 3,
        Error::DimensionMismatch { .. }
        | Error::DimensionTooLarge(_)
        | Error::ShapeMismatch(_)
        | Error::SlotMismatch(_)
        | Error::NotEndomorphism
        | Error::ShrinkNotAllowed { .. }
        | Error::InvalidK(_)
        | Error::InvalidExponent(_) => 4,
        Error::Io(_) => 5,
        _ => 1,
    }
}

fn parse_mode(s: &str) -> Result<Mode, Error> {
    match s {
        "exact" => Ok(Mode::Exact),
        "optimize" => Ok(Mode::Optimize),
        "auto" => Ok(Mode::Auto),
        other => Err(Error::Parse(format!("unknown mode {other:?}"))),
    }
}

fn read_json(path: &PathBuf) -> Result<serde_json::Value, Error> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

fn load_tuple(path: &PathBuf) -> Result<OperatorTuple, Error> {
    OperatorTuple::from_json(&read_json(path)?)
}

fn random_tuple<R: Rng>(space: &SpaceDescriptor, k: usize, rng: &mut R) -> OperatorTuple {
    let n = space.dim();
    let complex = space.field() == Field::Complex;
    let mats = (0..k)
        .map(|_| {
            let mut m = Matrix::zero(n, n);
            for i in 0..n {
                for j in 0..n {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = if complex { rng.sample(StandardNormal) } else { 0.0 };
                    m.set(i, j, Scalar::new(re, im));
                }
            }
            m
        })
        .collect();
    OperatorTuple::new(mats, space.clone(), space.clone()).expect("square shapes")
}

struct Tap {
    lines: Vec<(bool, String)>,
}

impl Tap {
    fn new() -> Self {
        Tap { lines: Vec::new() }
    }

    fn check(&mut self, ok: bool, desc: &str) {
        self.lines.push((ok, desc.to_string()));
    }

    fn finish(self) -> u8 {
        println!("1..{}", self.lines.len());
        let mut all_ok = true;
        for (i, (ok, desc)) in self.lines.iter().enumerate() {
            let tag = if *ok { "ok" } else { "not ok" };
            println!("{tag} {} - {desc}", i + 1);
            all_ok &= ok;
        }
        if all_ok {
            0
        } else {
            1
        }
    }
}

fn suite_closedforms(tap: &mut Tap, cfg: &AscentConfig) -> Result<(), Error> {
    let linf4 = SpaceDescriptor::linf(4, Field::Real);
    for (p, k) in [(1.0, 2usize), (2.0, 2), (2.0, 3), (3.0, 4)] {
        let w = witness_tuple(&linf4, p, k)?;
        let nrm = joint_operator_norm_with_config(&w, p, Mode::Exact, cfg)?;
        let rad = joint_numerical_radius_with_config(&w, p, Mode::Exact, cfg)?;
        let expect = 1.0 / (k as f64).powf(1.0 / p);
        let ok = (nrm.value - 1.0).abs() <= 1e-12 && (rad.value - expect).abs() <= 1e-12;
        tap.check(ok, &format!("n_(p,k)(linf^4) = 1/k^(1/p) at p={p}, k={k}"));
    }
    let l1_3 = SpaceDescriptor::l1(3, Field::Real);
    for p in [1.0, 2.0, 4.0] {
        let w = witness_tuple(&l1_3, p, 2)?;
        let nrm = joint_operator_norm_with_config(&w, p, Mode::Exact, cfg)?;
        let rad = joint_numerical_radius_with_config(&w, p, Mode::Exact, cfg)?;
        let expect = 0.5f64.powf(1.0 / p);
        let ok = (nrm.value - 1.0).abs() <= 1e-12 && (rad.value - expect).abs() <= 1e-12;
        tap.check(ok, &format!("n_(p,2)(l1^3) = 1/2^(1/p) at p={p}"));
    }
    let c3 = SpaceDescriptor::l2(3, Field::Complex);
    for (p, expect) in [(2.0, 0.5 / 2.0f64.sqrt()), (3.0, 0.5f64.powf(4.0 / 3.0))] {
        let w = witness_tuple(&c3, p, 2)?;
        let nrm = joint_operator_norm_with_config(&w, p, Mode::Optimize, cfg)?;
        let rad = joint_numerical_radius_with_config(&w, p, Mode::Optimize, cfg)?;
        let ok = (nrm.value - 1.0).abs() <= 1e-6 && (rad.value - expect).abs() <= 1e-3;
        tap.check(ok, &format!("witness ratio on complex l2^3 matches the k=2 closed form at p={p}"));
    }
    Ok(())
}

fn suite_adjoint(tap: &mut Tap, trials: usize, seed: u64) -> Result<(), Error> {
    let l1_3 = SpaceDescriptor::l1(3, Field::Real);
    let mut worst = 0.0f64;
    let mut all = true;
    for t in 0..trials {
        let mut rng = stream_rng(split_seed(seed, 0xadd0), t as u64);
        let tuple = random_tuple(&l1_3, 2, &mut rng);
        let report = verify_adjoint_radius(&tuple, 2.0)?;
        worst = worst.max(report.difference);
        all &= report.pass;
    }
    tap.check(
        all && worst <= 1e-10,
        &format!("w_p(T) = w_p(T*) on l1^3, {trials} trials, max gap {worst:.2e}"),
    );
    Ok(())
}

fn suite_directsum(tap: &mut Tap, trials: usize, seed: u64) -> Result<(), Error> {
    let hosts = [
        (
            SpaceDescriptor::direct_sum(
                vec![SpaceDescriptor::l1(2, Field::Real), SpaceDescriptor::l1(2, Field::Real)],
                jointrad::Exponent::new(1.0).unwrap(),
            ),
            "[l1^2 (+) l1^2]_l1",
        ),
        (
            SpaceDescriptor::direct_sum(
                vec![SpaceDescriptor::l1(2, Field::Real), SpaceDescriptor::l2(2, Field::Real)],
                jointrad::Exponent::Infinity,
            ),
            "[l1^2 (+) l2^2]_linf",
        ),
    ];
    for (host, label) in &hosts {
        let report = verify_direct_sum_theorems(host, 2.0, 2, trials.min(5).max(1), seed)?;
        tap.check(
            report.pass,
            &format!(
                "lifted tuples keep norm and radius on {label}, {} checks, max gap {:.2e}",
                report.checks, report.max_gap
            ),
        );
    }
    Ok(())
}

fn suite_bounds(tap: &mut Tap, trials: usize, seed: u64, cfg: &AscentConfig) -> Result<(), Error> {
    let spaces = [
        (SpaceDescriptor::l1(3, Field::Real), "l1^3", 1.0),
        (SpaceDescriptor::linf(3, Field::Real), "linf^3", 1.0),
        (SpaceDescriptor::l2(3, Field::Complex), "complex l2^3", 0.5),
    ];
    let (p, k) = (2.0, 2usize);
    for (space, label, n_x) in &spaces {
        let bound = n_x / (k as f64).powf(1.0 / p);
        let mut worst = f64::INFINITY;
        let mut all = true;
        for t in 0..trials {
            let mut rng = stream_rng(split_seed(seed, 0xb0), t as u64);
            let tuple = random_tuple(space, k, &mut rng);
            let nrm = joint_operator_norm_with_config(&tuple, p, Mode::Auto, cfg)?;
            if nrm.value <= 1e-8 {
                continue;
            }
            let rad = joint_numerical_radius_with_config(&tuple, p, Mode::Auto, cfg)?;
            let ratio = rad.value / nrm.value;
            worst = worst.min(ratio);
            all &= ratio >= bound - 1e-9;
        }
        tap.check(
            all,
            &format!("w_p/||.||_p >= n(X)/k^(1/p) on {label}, {trials} trials, min ratio {worst:.6}"),
        );
    }
    Ok(())
}

fn run() -> Result<u8, Error> {
    // accepted for compatibility; the library is single-threaded (0 = auto)
    let _ = std::env::var("JOINTRADIUS_THREADS");
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Norm { file, p, mode, seed } => {
            let tuple = load_tuple(&file)?;
            let mode = parse_mode(&mode)?;
            let cfg = AscentConfig { seed, ..Default::default() };
            let result = joint_operator_norm_with_config(&tuple, p, mode, &cfg)?;
            println!("{}", result.to_json());
            Ok(0)
        }
        Cmd::Radius { file, p, mode, seed } => {
            let tuple = load_tuple(&file)?;
            let mode = parse_mode(&mode)?;
            let cfg = AscentConfig { seed, ..Default::default() };
            let result = joint_numerical_radius_with_config(&tuple, p, mode, &cfg)?;
            println!("{}", result.to_json());
            Ok(0)
        }
        Cmd::Range { file, count, seed, out, format, convexity_trials, tol } => {
            let tuple = load_tuple(&file)?;
            let sample = sample_range(&tuple, count, seed, SampleSource::Sampled)?;
            if let Some(path) = &out {
                let fmt = match format.as_str() {
                    "csv" => ExportFormat::Csv,
                    "json" => ExportFormat::Json,
                    other => return Err(Error::Parse(format!("unknown format {other:?}"))),
                };
                export_range(&sample, path, fmt)?;
                eprintln!("wrote {} points to {}", sample.points.len(), path.display());
            }
            let tolerance = tol.unwrap_or_else(|| 0.05 * bounding_box_diagonal(&sample)).max(1e-12);
            let report = convexity_report(&sample, convexity_trials, tolerance, split_seed(seed, 0xc0))?;
            println!("{}", report.to_json());
            Ok(0)
        }
        Cmd::Index { file, p, k, budget, seed } => {
            let space = SpaceDescriptor::from_json(&read_json(&file)?)?;
            let est = estimate_index(&space, p, k, budget, seed)?;
            let bounds = index_bounds(&space, p, k)?;
            let mut obj = est.to_json();
            obj["bounds"] = bounds.to_json();
            println!("{obj}");
            Ok(0)
        }
        Cmd::Verify { suite, seed, trials } => {
            let cfg = AscentConfig { seed: split_seed(seed, 1), ..Default::default() };
            let mut tap = Tap::new();
            let all = suite == "all";
            if all || suite == "closedforms" {
                suite_closedforms(&mut tap, &cfg)?;
            }
            if all || suite == "adjoint" {
                suite_adjoint(&mut tap, trials, seed)?;
            }
            if all || suite == "directsum" {
                suite_directsum(&mut tap, trials, seed)?;
            }
            if all || suite == "bounds" {
                suite_bounds(&mut tap, trials, seed, &cfg)?;
            }
            if tap.lines.is_empty() {
                return Err(Error::Parse(format!("unknown suite {suite:?}")));
            }
            Ok(tap.finish())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
