use std::fs;
use std::io::Write;
use std::path::Path;

use super::sweep::CellSummary;
use super::trial::TrialRecord;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 20] = [
    "experiment",
    "n",
    "m",
    "k",
    "rho",
    "d",
    "mu",
    "sigma",
    "theta",
    "trial",
    "seed",
    "algorithm",
    "energy_spent",
    "measurements",
    "pruned_size",
    "dist",
    "exact_success",
    "partial_dist",
    "error",
    "wall_ms",
];

/// Formats like C's `%.9g`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    const P: i32 = 9;
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..P).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (P - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn optf(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

fn row(r: &TrialRecord) -> [String; 20] {
    [
        r.experiment.clone(),
        r.n.to_string(),
        format_float(r.m),
        r.k.to_string(),
        r.rho.to_string(),
        r.d.to_string(),
        if r.mu.is_finite() { format_float(r.mu) } else { String::new() },
        format_float(r.sigma),
        optf(r.theta),
        r.trial.to_string(),
        r.seed.to_string(),
        r.algorithm.to_string(),
        optf(r.energy_spent),
        opt(r.measurements),
        opt(r.pruned_size),
        optf(r.dist),
        opt(r.exact_success.map(u8::from)),
        optf(r.partial_dist),
        r.error.clone().unwrap_or_default(),
        optf(r.wall_ms),
    ]
}

/// Writes records as CSV to any writer.
pub fn write_records<W: Write>(w: W, records: &[TrialRecord]) -> std::result::Result<(), csv::Error> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in records {
        out.write_record(row(r))?;
    }
    out.flush()?;
    Ok(())
}

/// Writes records to `path`, creating parent directories.
pub fn write_csv(path: &Path, records: &[TrialRecord]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    let file = fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_records(file, records).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })
}

/// Plain-text table of cell summaries.
pub fn format_summary(summaries: &[CellSummary]) -> String {
    let mut s = format!(
        "{:>5} {:>7} {:>6} {:>10} {:>5} {:>9} {:>9} {:>8} {:>8} {:>6}\n",
        "cell", "alg", "n", "m", "k", "snr", "theta", "success", "dist", "errors"
    );
    for c in summaries {
        s.push_str(&format!(
            "{:>5} {:>7} {:>6} {:>10} {:>5} {:>9.4} {:>9} {:>8.3} {:>8.4} {:>6}\n",
            c.cell,
            c.algorithm.to_string(),
            c.n,
            format_float(c.m),
            c.k,
            c.mean_snr,
            c.mean_theta.map(|t| format!("{t:.4}")).unwrap_or_else(|| "-".into()),
            c.success_rate,
            c.mean_dist,
            c.errors,
        ));
    }
    s
}
