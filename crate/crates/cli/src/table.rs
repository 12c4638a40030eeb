//! `qgamma table`: `eval` over a geometric τ grid.

use serde::Serialize;

use qgamma::{tau_grid, Complex64, Tolerance};

use crate::error::CliError;
use crate::eval::{run_eval, EvalFunc};
use crate::output::{csv_string, fmt_f64};
use crate::rate::check_grid;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub tau: f64,
    pub q: f64,
    pub value_re: f64,
    pub value_im: f64,
    pub log_mag: Option<f64>,
    pub phase: Option<f64>,
    pub path: &'static str,
    pub terms_used: usize,
    pub tail_bound: f64,
}

pub const TABLE_HEADER: [&str; 9] = [
    "tau",
    "q",
    "value_re",
    "value_im",
    "log_mag",
    "phase",
    "path",
    "terms_used",
    "tail_bound",
];

pub fn run_table(
    func: EvalFunc,
    z: Complex64,
    tau_start: f64,
    steps: usize,
    ratio: f64,
    tol: Tolerance,
) -> Result<Vec<TableRow>, CliError> {
    check_grid(tau_start, steps, ratio)?;
    tau_grid(tau_start, steps, ratio)
        .into_iter()
        .map(|tau| {
            let r = run_eval(func, z, Some(tau), tol)?;
            Ok(TableRow {
                tau,
                q: r.q.unwrap_or(f64::NAN),
                value_re: r.value_re,
                value_im: r.value_im,
                log_mag: r.log_mag,
                phase: r.phase,
                path: r.path,
                terms_used: r.terms_used,
                tail_bound: r.tail_bound,
            })
        })
        .collect()
}

pub fn render_csv(rows: &[TableRow]) -> Result<String, CliError> {
    let opt = |x: Option<f64>| x.map_or_else(|| "-inf".to_string(), fmt_f64);
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                fmt_f64(r.tau),
                fmt_f64(r.q),
                fmt_f64(r.value_re),
                fmt_f64(r.value_im),
                opt(r.log_mag),
                r.phase.map_or_else(String::new, fmt_f64),
                r.path.to_string(),
                r.terms_used.to_string(),
                fmt_f64(r.tail_bound),
            ]
        })
        .collect();
    csv_string(&TABLE_HEADER, &body)
}
