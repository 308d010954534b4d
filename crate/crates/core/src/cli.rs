//! Command-line front end for `hypheat`.
//!
//! Exit codes: 0 on success, 1 on numeric failure, 2 on usage errors.

use std::fs::File;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::checks::{run_groups, SuiteGroup};
use crate::error::HeatError;
use crate::hyperbolic::{hyperbolic_distance, HalfPlanePoint};
use crate::kernel::{EvalReport, KernelQuery, QuadratureConfig};
use crate::sweep::{evaluate_grid, Execution};
use crate::tcheb::Weight;

pub const CSV_HEADER: &str = "t,r,k,value,error_estimate,tail_bound,evaluations";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hypheat",
    version,
    about = "Weighted hyperbolic heat kernel evaluator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the kernel at one point.
    Eval(EvalArgs),
    /// Evaluate on a (k, t, r) grid.
    Grid(GridArgs),
    /// Run verification suites.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, allow_negative_numbers = true)]
    k: f64,
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["z", "w"], required_unless_present_all = ["z", "w"])]
    r: Option<f64>,
    /// First point as "x,y".
    #[arg(long, allow_hyphen_values = true, requires = "w")]
    z: Option<String>,
    /// Second point as "x,y".
    #[arg(long, allow_hyphen_values = true, requires = "z")]
    w: Option<String>,
    #[arg(long, default_value_t = 1e-8)]
    rel_tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Log-spaced times "a:b:n".
    #[arg(long)]
    t_range: String,
    /// Linearly spaced distances "a:b:n".
    #[arg(long)]
    r_range: String,
    /// Weight or comma-separated weights.
    #[arg(long, allow_hyphen_values = true)]
    k: String,
    #[arg(long, default_value_t = 1e-8)]
    rel_tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; standard output when absent or "-".
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// all, tcheb, bracket, kernel, monotone, asymptotics or tails.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long)]
    rel_tol: Option<f64>,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn numeric(err: HeatError) -> Failure {
    Failure {
        code: EXIT_NUMERIC,
        message: err.to_string(),
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Eval(a) => cmd_eval(&a, stdout),
        Command::Grid(a) => cmd_grid(&a, stdout),
        Command::Check(a) => cmd_check(&a, stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "hypheat: {}", f.message);
            f.code
        }
    }
}

fn config(rel_tol: f64) -> Result<QuadratureConfig, Failure> {
    let cfg = QuadratureConfig::with_rel_tol(rel_tol);
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    Ok(cfg)
}

fn parse_point(text: &str) -> Result<HalfPlanePoint, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(usage(format!("expected \"x,y\", got {text:?}")));
    }
    let x: f64 = parts[0]
        .parse()
        .map_err(|_| usage(format!("bad coordinate {:?}", parts[0])))?;
    let y: f64 = parts[1]
        .parse()
        .map_err(|_| usage(format!("bad coordinate {:?}", parts[1])))?;
    HalfPlanePoint::new(x, y).map_err(|e| usage(e.to_string()))
}

fn weight(k: f64) -> Result<Weight, Failure> {
    Weight::new(k).map_err(|e| usage(e.to_string()))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_row(q: &KernelQuery, rep: &EvalReport) -> String {
    format!(
        "{},{},{},{},{},{},{}\n",
        num(q.t()),
        num(q.r()),
        num(q.k().value()),
        num(rep.value),
        num(rep.error_estimate),
        num(rep.tail_bound),
        rep.evaluations
    )
}

fn json_row(q: &KernelQuery, rep: &EvalReport) -> String {
    format!(
        "{{\"t\":{},\"r\":{},\"k\":{},\"value\":{},\"error_estimate\":{},\"tail_bound\":{},\"evaluations\":{}}}\n",
        num(q.t()),
        num(q.r()),
        num(q.k().value()),
        num(rep.value),
        num(rep.error_estimate),
        num(rep.tail_bound),
        rep.evaluations
    )
}

fn record(format: Format, q: &KernelQuery, rep: &EvalReport) -> String {
    match format {
        Format::Csv => csv_row(q, rep),
        Format::Json => json_row(q, rep),
    }
}

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = config(a.rel_tol)?;
    let r = match (a.r, &a.z, &a.w) {
        (Some(r), None, None) => r,
        (None, Some(z), Some(w)) => {
            let d = hyperbolic_distance(parse_point(z)?, parse_point(w)?);
            // coincident points give a tiny negative rounding at worst
            d.max(0.0)
        }
        _ => return Err(usage("give exactly one of --r or --z/--w")),
    };
    let q = KernelQuery::new(a.t, r, weight(a.k)?).map_err(|e| usage(e.to_string()))?;
    let rep = crate::kernel::eval_kernel(&q, &cfg).map_err(numeric)?;
    let mut text = String::new();
    if a.format == Format::Csv {
        text.push_str(CSV_HEADER);
        text.push('\n');
    }
    text.push_str(&record(a.format, &q, &rep));
    out.write_all(text.as_bytes()).map_err(|e| numeric_io(&e))?;
    Ok(EXIT_OK)
}

fn numeric_io(e: &io::Error) -> Failure {
    Failure {
        code: EXIT_NUMERIC,
        message: format!("write failed: {e}"),
    }
}

fn parse_range(text: &str, what: &str) -> Result<(f64, f64, usize), Failure> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || usage(format!("{what} must be a:b:n, got {text:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    Ok((a, b, n))
}

/// `n` log-spaced times from `a` to `b` inclusive.
pub fn log_spaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| match i {
            0 => a,
            _ if i == n - 1 => b,
            _ => (la + (lb - la) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

/// `n` equally spaced values from `a` to `b` inclusive.
pub fn lin_spaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| match i {
            _ if i == n - 1 => b,
            _ => a + (b - a) * i as f64 / (n - 1) as f64,
        })
        .collect()
}

fn cmd_grid(a: &GridArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = config(a.rel_tol)?;
    let (t0, t1, nt) = parse_range(&a.t_range, "--t-range")?;
    if !(t0 > 0.0 && t1 > 0.0) {
        return Err(usage("--t-range endpoints must be positive"));
    }
    let (r0, r1, nr) = parse_range(&a.r_range, "--r-range")?;
    let ks =
        a.k.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| usage(format!("bad weight {s:?}")))
            })
            .map(|k| k.and_then(weight))
            .collect::<Result<Vec<_>, _>>()?;
    let ts = log_spaced(t0, t1, nt);
    let rs = lin_spaced(r0, r1, nr);
    let mut queries = Vec::with_capacity(ks.len() * ts.len() * rs.len());
    for &k in &ks {
        for &t in &ts {
            for &r in &rs {
                queries.push(KernelQuery::new(t, r, k).map_err(|e| usage(e.to_string()))?);
            }
        }
    }
    let results = evaluate_grid(&queries, &cfg, Execution::Parallel);

    let mut text = String::new();
    if a.format == Format::Csv {
        text.push_str(CSV_HEADER);
        text.push('\n');
    }
    let mut failure = None;
    for (q, res) in queries.iter().zip(results) {
        match res {
            Ok(rep) => text.push_str(&record(a.format, q, &rep)),
            Err(e) => {
                failure = Some(Failure {
                    code: EXIT_NUMERIC,
                    message: format!("t={} r={} k={}: {e}", q.t(), q.r(), q.k()),
                });
                break;
            }
        }
    }
    match a.out.as_deref() {
        None | Some("-") => stdout
            .write_all(text.as_bytes())
            .map_err(|e| numeric_io(&e))?,
        Some(path) => {
            let mut f =
                File::create(path).map_err(|e| usage(format!("cannot create {path}: {e}")))?;
            f.write_all(text.as_bytes()).map_err(|e| numeric_io(&e))?;
        }
    }
    match failure {
        Some(f) => Err(f),
        None => Ok(EXIT_OK),
    }
}

fn cmd_check(a: &CheckArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let groups: Vec<SuiteGroup> =
        match a.suite.as_str() {
            "all" => SuiteGroup::ALL.to_vec(),
            name => vec![SuiteGroup::from_name(name)
                .ok_or_else(|| usage(format!("unknown suite {name:?}")))?],
        };
    let cfg = match a.rel_tol {
        Some(rel) => config(rel)?,
        None => QuadratureConfig::default(),
    };
    let reports = run_groups(&groups, &cfg);
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.to_string());
        text.push('\n');
    }
    out.write_all(text.as_bytes()).map_err(|e| numeric_io(&e))?;
    Ok(if reports.iter().all(|r| r.passed) {
        EXIT_OK
    } else {
        EXIT_NUMERIC
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["hypheat"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn eval_json_record() {
        let (code, out, _) = call(&["eval", "--t", "1", "--r", "1", "--k", "0"]);
        assert_eq!(code, 0);
        let v: f64 = out
            .split("\"value\":")
            .nth(1)
            .unwrap()
            .split(',')
            .next()
            .unwrap()
            .parse()
            .unwrap();
        assert!(v > 0.0);
    }

    #[test]
    fn eval_points_vs_distance() {
        let (_, a, _) = call(&["eval", "--t", "1", "--z", "0,1", "--w", "0,2", "--k", "0.5"]);
        let (_, b, _) = call(&[
            "eval",
            "--t",
            "1",
            "--r",
            "0.6931471805599453",
            "--k",
            "0.5",
        ]);
        assert_eq!(a, b);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["eval", "--t", "1", "--r", "-1", "--k", "0"]).0, 2);
        assert_eq!(call(&["eval", "--t", "1", "--k", "0"]).0, 2);
        assert_eq!(
            call(&["eval", "--t", "1", "--r", "1", "--z", "0,1", "--w", "0,2", "--k", "0"]).0,
            2
        );
        assert_eq!(
            call(&["eval", "--t", "1", "--r", "1", "--k", "0", "--rel-tol", "0"]).0,
            2
        );
        assert_eq!(call(&["check", "--suite", "nosuch"]).0, 2);
        assert_eq!(
            call(&["grid", "--t-range", "1:2", "--r-range", "0:1:2", "--k", "0"]).0,
            2
        );
        assert_eq!(call(&["bogus"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn negative_weight_accepted() {
        let (code, out, _) = call(&[
            "eval", "--t", "1", "--r", "1", "--k", "-2.5", "--format", "csv",
        ]);
        assert_eq!(code, 0);
        assert!(out.starts_with(CSV_HEADER));
    }

    #[test]
    fn grid_cardinality_and_order() {
        let (code, out, _) = call(&[
            "grid",
            "--t-range",
            "0.1:10:3",
            "--r-range",
            "0:2:3",
            "--k",
            "0,-0.5",
        ]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 19);
        assert_eq!(lines[0], CSV_HEADER);
        let k_of = |l: &str| l.split(',').nth(2).unwrap().parse::<f64>().unwrap();
        assert_eq!(k_of(lines[1]), 0.0);
        assert_eq!(k_of(lines[10]), -0.5);
        let r_of = |l: &str| l.split(',').nth(1).unwrap().parse::<f64>().unwrap();
        assert_eq!(r_of(lines[1]), 0.0);
        assert_eq!(r_of(lines[3]), 2.0);
    }

    #[test]
    fn spacing_hits_endpoints() {
        let t = log_spaced(1e-3, 10.0, 5);
        assert_eq!((t[0], t[4]), (1e-3, 10.0));
        assert!((t[1] - 1e-2).abs() < 1e-15);
        assert_eq!(lin_spaced(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(log_spaced(2.0, 5.0, 1), vec![2.0]);
    }
}
