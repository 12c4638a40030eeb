//! The `qgamma` command line, runnable in-process.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use qgamma::{Complex64, Tolerance};

use crate::error::CliError;
use crate::eval::{self, EvalFunc};
use crate::output::{emit, json_string};
use crate::parse::{parse_complex, parse_positive};
use crate::rate::{self, RateFunc};
use crate::table;
use crate::verify::{self, Suite};

/// q-Gamma function, q-Pochhammer symbols and theta functions as q → 1⁻.
///
/// τ is always given explicitly; q = e^{−πτ}. Complex arguments are written
/// RE, RE+IMi or RE-IMi.
#[derive(Parser, Debug)]
#[command(name = "qgamma", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one function at one point
    Eval(EvalArgs),
    /// Approximant error along a τ grid, with a log-log slope fit (CSV)
    Rate(RateArgs),
    /// Run seeded identity suites; exit 1 if any check fails
    Verify(VerifyArgs),
    /// Evaluate one function along a τ grid (CSV)
    Table(TableArgs),
}

#[derive(Args, Debug)]
struct Output {
    /// Emit JSON instead of text/CSV
    #[arg(long)]
    json: bool,
    /// Write the main output to this file
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Grid {
    #[arg(long, default_value = "0.2", value_parser = parse_positive)]
    tau_start: f64,
    #[arg(long, default_value_t = 5)]
    steps: usize,
    #[arg(long, default_value = "2", value_parser = parse_positive)]
    ratio: f64,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(value_enum, value_name = "FUNC", conflicts_with = "func")]
    func_pos: Option<EvalFunc>,
    #[arg(long, value_enum)]
    func: Option<EvalFunc>,
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_complex)]
    z: Complex64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_positive)]
    tau: Option<f64>,
    /// Relative truncation tolerance
    #[arg(long, default_value = "1e-14", value_parser = parse_positive)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct RateArgs {
    #[arg(value_enum, value_name = "FUNC", conflicts_with = "func")]
    func_pos: Option<RateFunc>,
    #[arg(long, value_enum)]
    func: Option<RateFunc>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    z: Complex64,
    #[command(flatten)]
    grid: Grid,
    #[arg(long, default_value = "1e-14", value_parser = parse_positive)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(value_enum, value_name = "FUNC", conflicts_with = "func")]
    func_pos: Option<EvalFunc>,
    #[arg(long, value_enum)]
    func: Option<EvalFunc>,
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_complex)]
    z: Complex64,
    #[command(flatten)]
    grid: Grid,
    #[arg(long, default_value = "1e-14", value_parser = parse_positive)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// Threshold for every residual except the defect-bound ratio
    #[arg(long, default_value = "1e-10", value_parser = parse_positive)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

fn pick<T>(positional: Option<T>, flag: Option<T>) -> Result<T, CliError> {
    positional
        .or(flag)
        .ok_or_else(|| CliError::usage("a function is required (positional or --func)"))
}

fn tolerance(tol: f64) -> Result<Tolerance, CliError> {
    Tolerance::relative(tol).map_err(|e| CliError::usage(e.to_string()))
}

fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Eval(a) => {
            let func = pick(a.func_pos, a.func)?;
            let rec = eval::run_eval(func, a.z, a.tau, tolerance(a.tol)?)?;
            let text = if a.output.json {
                json_string(&rec)?
            } else {
                eval::render_text(&rec)
            };
            emit(&text, a.output.out.as_deref(), out)?;
            Ok(0)
        }
        Command::Rate(a) => {
            let func = pick(a.func_pos, a.func)?;
            let g = a.grid;
            let report =
                rate::run_rate(func, a.z, g.tau_start, g.steps, g.ratio, tolerance(a.tol)?)?;
            if a.output.json {
                emit(&json_string(&report)?, a.output.out.as_deref(), out)?;
            } else {
                let csv = rate::render_csv(&report)?;
                let summary = rate::render_summary(&report);
                match &a.output.out {
                    Some(p) => {
                        emit(&csv, Some(p), out)?;
                        out.write_all(summary.as_bytes())?;
                    }
                    None => {
                        out.write_all(csv.as_bytes())?;
                        err.write_all(summary.as_bytes())?;
                    }
                }
            }
            if report.fit.is_none() {
                writeln!(err, "InsufficientData: an error underflowed to 0; no fit")?;
                return Ok(1);
            }
            Ok(0)
        }
        Command::Table(a) => {
            let func = pick(a.func_pos, a.func)?;
            let g = a.grid;
            let rows =
                table::run_table(func, a.z, g.tau_start, g.steps, g.ratio, tolerance(a.tol)?)?;
            let text = if a.output.json {
                json_string(&rows)?
            } else {
                table::render_csv(&rows)?
            };
            emit(&text, a.output.out.as_deref(), out)?;
            Ok(0)
        }
        Command::Verify(a) => {
            let report = verify::run_verify(a.suite, a.tol, a.seed)?;
            let text = if a.output.json {
                json_string(&report)?
            } else {
                verify::render_text(&report)
            };
            emit(&text, a.output.out.as_deref(), out)?;
            Ok(if report.checks_failed == 0 { 0 } else { 1 })
        }
    }
}

/// Parse `args` (program name first) and run. Returns the exit code:
/// 0 success, 1 numeric or check failure, 2 usage error.
pub fn run_app<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                2
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    let code = match run(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    };
    let _ = out.flush();
    code
}

#[cfg(test)]
mod tests {
    use super::run_app;

    struct Output {
        code: u8,
        stdout: Vec<u8>,
        stderr: Vec<u8>,
    }

    fn qgamma(args: &[&str]) -> Output {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_app(
            std::iter::once("qgamma").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        Output {
            code,
            stdout: out,
            stderr: err,
        }
    }

    fn stdout(o: &Output) -> String {
        String::from_utf8(o.stdout.clone()).unwrap()
    }

    fn field(text: &str, key: &str) -> String {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{key}=")))
            .unwrap_or_else(|| panic!("no {key} in {text}"))
            .to_string()
    }

    fn json(o: &Output) -> serde_json::Value {
        serde_json::from_slice(&o.stdout).expect("valid json")
    }

    #[test]
    fn eval_qgamma_at_two_is_one() {
        let o = qgamma(&["eval", "qgamma", "--tau", "0.1", "--z", "2"]);
        assert_eq!(o.code, 0);
        let v = json(&qgamma(&[
            "eval", "qgamma", "--tau", "0.1", "--z", "2", "--json",
        ]));
        assert!((v["value_re"].as_f64().unwrap() - 1.0).abs() < 1e-13);
        assert_eq!(field(&stdout(&o), "path"), "direct");
    }

    #[test]
    fn eval_dilog_at_one() {
        let v = json(&qgamma(&["eval", "dilog", "--z", "1", "--json"]));
        assert!((v["value_re"].as_f64().unwrap() - 1.644_934_066_848_226_4).abs() < 1e-15);
        assert_eq!(v["tau"], serde_json::Value::Null);
    }

    #[test]
    fn eval_qpoch_half() {
        let tau = (2.0f64.ln() / std::f64::consts::PI).to_string();
        let v = json(&qgamma(&[
            "eval", "--func", "qpoch", "--tau", &tau, "--z", "0.5", "--json",
        ]));
        assert!((v["value_re"].as_f64().unwrap() - 0.288_788_095_086_602_4).abs() < 1e-14);
        assert!((v["q"].as_f64().unwrap() - 0.5).abs() < 1e-15);
        for key in ["log_mag", "phase", "path", "terms_used", "tail_bound"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn eval_negative_and_complex_literals() {
        let o = qgamma(&[
            "eval",
            "qgamma",
            "--tau",
            "0.5",
            "--z",
            "-0.5+0.25i",
            "--json",
        ]);
        assert_eq!(o.code, 0);
        let v = json(&o);
        assert_eq!(v["z"], "-0.5+0.25i");
        assert_eq!(v["path"], "shifted");
    }

    #[test]
    fn exit_code_zero_classes() {
        assert_eq!(qgamma(&["eval", "loggamma", "--z", "5"]).code, 0);
        assert_eq!(
            qgamma(&["verify", "--suite", "dilog", "--tol", "1e-12", "--seed", "7"]).code,
            0
        );
    }

    #[test]
    fn exit_code_one_classes() {
        let o = qgamma(&["eval", "qgamma", "--tau", "0.1", "--z", "-2"]);
        assert_eq!(o.code, 1);
        assert!(String::from_utf8_lossy(&o.stderr).contains("PoleError"));
        let o = qgamma(&["eval", "qpoch-series", "--tau", "0.1", "--z", "1.5"]);
        assert_eq!(o.code, 1);
        assert!(String::from_utf8_lossy(&o.stderr).contains("DomainError"));
        let o = qgamma(&["verify", "--suite", "all", "--tol", "1e-30"]);
        assert_eq!(o.code, 1);
        let text = stdout(&o);
        let last = text.lines().last().unwrap();
        assert!(last.starts_with("suite=all"));
        assert!(!last.contains("checks_failed=0 "));
    }

    #[test]
    fn exit_code_two_classes() {
        for args in [
            &["eval", "qgamma", "--z", "2"][..],
            &["eval", "qgamma", "--tau", "0", "--z", "2"],
            &["eval", "qgamma", "--tau", "0.1", "--z", "1+i"],
            &["eval", "nosuch", "--tau", "0.1"],
            &["eval", "--tau", "0.1"],
            &["rate", "qgamma23", "--z", "2.5", "--steps", "2"],
            &["rate", "qgamma23", "--z", "2.5", "--ratio", "1"],
            &["verify", "--tol", "-1"],
            &["verify", "--suite", "everything"],
            &["frobnicate"],
        ] {
            let o = qgamma(args);
            assert_eq!(o.code, 2, "{args:?}");
        }
    }

    #[test]
    fn rate_csv_schema() {
        let o = qgamma(&[
            "rate",
            "qgamma23",
            "--z",
            "2.5",
            "--tau-start",
            "0.2",
            "--steps",
            "5",
            "--ratio",
            "2",
        ]);
        assert_eq!(o.code, 0);
        let text = stdout(&o);
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("tau,err,value_re,value_im,ref_re,ref_im")
        );
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 5);
        for r in &rows {
            let cells: Vec<&str> = r.split(',').collect();
            assert_eq!(cells.len(), 6);
            for c in cells {
                let mantissa = c.split('e').next().unwrap().replace(['-', '.'], "");
                assert_eq!(mantissa.len(), 17, "{c}");
            }
        }
        let summary = String::from_utf8_lossy(&o.stderr).to_string();
        let slope: f64 = summary
            .split_whitespace()
            .find_map(|w| w.strip_prefix("slope="))
            .unwrap()
            .parse()
            .unwrap();
        assert!((0.85..=1.15).contains(&slope));
    }

    #[test]
    fn rate_json_mirrors_csv() {
        let o = qgamma(&["rate", "--func", "qpoch-lemma2", "--z", "1", "--json"]);
        let v = json(&o);
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 5);
        for key in [
            "tau",
            "err",
            "value_re",
            "value_im",
            "ref_re",
            "ref_im",
            "path",
            "terms_used",
            "tail_bound",
        ] {
            assert!(rows[0].get(key).is_some(), "{key}");
        }
        let csv = stdout(&qgamma(&["rate", "--func", "qpoch-lemma2", "--z", "1"]));
        let first: Vec<f64> = csv
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .map(|c| c.parse().unwrap())
            .collect();
        assert_eq!(first[0], rows[0]["tau"].as_f64().unwrap());
        assert_eq!(first[1], rows[0]["err"].as_f64().unwrap());
        assert!(v["fit"]["slope"].as_f64().is_some());
    }

    #[test]
    fn rate_refuses_fit_when_errors_vanish() {
        // theta asymptotics are exact to double precision once τ is small
        let o = qgamma(&["rate", "theta-asym", "--z", "0.25", "--tau-start", "0.4"]);
        assert_eq!(o.code, 1);
        assert!(String::from_utf8_lossy(&o.stderr).contains("InsufficientData"));
    }

    #[test]
    fn out_flag_writes_file() {
        let dir = std::env::temp_dir().join(format!("qgamma-cli-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("rate.csv");
        let p = path.to_str().unwrap();
        let o = qgamma(&["rate", "qgamma23", "--z", "0.3", "--out", p]);
        assert_eq!(o.code, 0);
        assert!(stdout(&o).contains("slope="));
        let written = std::fs::read_to_string(&path).unwrap();
        assert!(written.starts_with("tau,err,value_re,value_im,ref_re,ref_im\n"));
        let table = dir.join("table.csv");
        let o = qgamma(&[
            "table",
            "qgamma",
            "--z",
            "0.5",
            "--steps",
            "3",
            "--out",
            table.to_str().unwrap(),
        ]);
        assert_eq!(o.code, 0);
        let written = std::fs::read_to_string(&table).unwrap();
        assert_eq!(written.lines().count(), 4);
        assert!(written
            .starts_with("tau,q,value_re,value_im,log_mag,phase,path,terms_used,tail_bound\n"));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn verify_is_deterministic() {
        let a = qgamma(&["verify", "--suite", "all", "--seed", "11", "--json"]);
        let b = qgamma(&["verify", "--suite", "all", "--seed", "11", "--json"]);
        assert_eq!(a.stdout, b.stdout);
        let c = qgamma(&["verify", "--suite", "all", "--seed", "12", "--json"]);
        assert_ne!(a.stdout, c.stdout);
        let v = json(&a);
        assert_eq!(v["checks_failed"], 0);
        assert!(v["checks_run"].as_u64().unwrap() >= v["checks_failed"].as_u64().unwrap());
    }

    #[test]
    fn verify_all_contains_each_suite_run() {
        let all = stdout(&qgamma(&["verify", "--seed", "5"]));
        for suite in ["pochhammer", "theta", "dilog", "binet", "qgamma", "defect"] {
            let one = stdout(&qgamma(&["verify", "--suite", suite, "--seed", "5"]));
            let checks: Vec<&str> = one.lines().filter(|l| !l.starts_with("suite=")).collect();
            assert!(all.contains(&checks.join("\n")), "{suite}");
        }
    }

    #[test]
    fn documented_verify_examples() {
        for suite in ["dilog", "theta"] {
            let tol = if suite == "dilog" { "1e-12" } else { "1e-10" };
            let o = qgamma(&[
                "verify", "--suite", suite, "--tol", tol, "--seed", "7", "--json",
            ]);
            assert_eq!(o.code, 0);
            assert_eq!(json(&o)["checks_failed"], 0);
        }
    }
}
