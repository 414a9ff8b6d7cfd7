//! Run-directory layout: versioned CSVs plus TOML metadata.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use membrane_core::solver::{point_diagnostics, CurveSet, RunMeta, Solution, StepRecord};
use membrane_core::types::{BlowupReport, CharCurve, CharFamily, Grid, UVState};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::CliError;

pub const SCHEMA_LINE: &str = "# schema_version=1";
pub const SNAPSHOTS: &str = "snapshots.csv";
pub const CURVES: &str = "curves.csv";
pub const HISTORY: &str = "history.csv";
pub const TRACED: &str = "traced.csv";
pub const META: &str = "run.toml";
pub const REPORT: &str = "report.toml";
pub const VERIFY: &str = "verify.toml";

pub const SNAPSHOT_HEADER: [&str; 12] =
    ["t", "r", "active", "u", "v", "dv_plus", "dv_minus", "Rt_plus", "Rt_minus", "F", "delta_reconstructed", "hyperbolic"];
pub const CURVE_HEADER: [&str; 4] = ["family", "foot", "t", "r"];
pub const HISTORY_HEADER: [&str; 10] = ["t", "dt", "v_max", "v_max_r", "delta_min", "mass", "rtilde_min", "u_min", "u_max", "violations"];

pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>, CliError> {
    let mut f = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    writeln!(f, "{SCHEMA_LINE}").map_err(|e| io_err(path, e))?;
    Ok(csv::Writer::from_writer(f))
}

fn finish(w: csv::Writer<BufWriter<File>>, path: &Path) -> Result<(), CliError> {
    let mut inner = w.into_inner().map_err(|e| io_err(path, e))?;
    inner.flush().map_err(|e| io_err(path, e))
}

pub fn write_toml<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = toml::to_string(value).map_err(|e| io_err(path, e))?;
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

pub fn read_toml<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    toml::from_str(&text).map_err(|e| io_err(path, e.message()))
}

pub fn write_snapshots(path: &Path, sol: &Solution) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record(SNAPSHOT_HEADER).map_err(|e| io_err(path, e))?;
    let nan = fmt(f64::NAN);
    for s in &sol.snapshots {
        let w_range = s.active_range();
        let diag = point_diagnostics(s, sol.meta.alpha);
        let t = fmt(s.time);
        for i in 0..s.grid.n {
            let mut row = vec![t.clone(), fmt(s.grid.radius(i))];
            if w_range.contains(&i) {
                let d = &diag[i - w_range.start];
                row.push("1".into());
                row.extend([d.u, d.v, d.dv_plus, d.dv_minus, d.rt_plus, d.rt_minus, d.f, d.delta].map(fmt));
                row.push(if d.hyperbolic { "1" } else { "0" }.into());
            } else {
                row.push("0".into());
                row.extend([fmt(s.u[i]), fmt(s.v[i])]);
                row.extend(std::iter::repeat_n(nan.clone(), 6));
                row.push("0".into());
            }
            w.write_record(&row).map_err(|e| io_err(path, e))?;
        }
    }
    finish(w, path)
}

pub fn write_curves<'a>(path: &Path, curves: impl IntoIterator<Item = &'a CharCurve>) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record(CURVE_HEADER).map_err(|e| io_err(path, e))?;
    for c in curves {
        let foot = fmt(c.foot);
        for &(t, r) in &c.samples {
            w.write_record([c.family.name(), &foot, &fmt(t), &fmt(r)]).map_err(|e| io_err(path, e))?;
        }
    }
    finish(w, path)
}

pub fn write_history(path: &Path, hist: &[StepRecord]) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record(HISTORY_HEADER).map_err(|e| io_err(path, e))?;
    for h in hist {
        let mut row: Vec<String> = [h.t, h.dt, h.v_max, h.v_max_r, h.delta_min, h.mass, h.rtilde_min, h.u_min, h.u_max].map(fmt).to_vec();
        row.push(h.violations.to_string());
        w.write_record(&row).map_err(|e| io_err(path, e))?;
    }
    finish(w, path)
}

pub fn write_run_dir(dir: &Path, sol: &Solution) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    write_snapshots(&dir.join(SNAPSHOTS), sol)?;
    write_curves(&dir.join(CURVES), sol.curves.all())?;
    write_history(&dir.join(HISTORY), &sol.history)?;
    write_toml(&dir.join(META), &sol.meta)?;
    write_toml(&dir.join(REPORT), &sol.report)
}

/// Reads a versioned CSV: checks the schema line and the exact header, and
/// returns data rows with their 1-based file line numbers.
fn read_csv(path: &Path, header: &[&str]) -> Result<Vec<(usize, csv::StringRecord)>, CliError> {
    let f = File::open(path).map_err(|e| io_err(path, e))?;
    let mut rd = BufReader::new(f);
    let mut first = String::new();
    rd.read_line(&mut first).map_err(|e| io_err(path, e))?;
    if first.trim_end() != SCHEMA_LINE {
        return Err(io_err(path, format!("expected `{SCHEMA_LINE}` on line 1")));
    }
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(rd);
    let got = r.headers().map_err(|e| io_err(path, e))?.clone();
    if got.iter().ne(header.iter().copied()) {
        let missing = header.iter().find(|h| !got.iter().any(|g| g == **h));
        return Err(io_err(path, format!("header mismatch (missing column {:?})", missing.copied().unwrap_or("?"))));
    }
    let mut out = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let line = k + 3;
        let rec = rec.map_err(|e| io_err(path, format!("line {line}: {e}")))?;
        out.push((line, rec));
    }
    Ok(out)
}

fn num(path: &Path, line: usize, rec: &csv::StringRecord, col: usize, header: &[&str]) -> Result<f64, CliError> {
    rec.get(col)
        .and_then(|s| s.trim().parse::<f64>().ok())
        .ok_or_else(|| io_err(path, format!("line {line}: bad value in column {}", header[col])))
}

pub fn read_curves(path: &Path) -> Result<Vec<CharCurve>, CliError> {
    let rows = read_csv(path, &CURVE_HEADER)?;
    let mut out: Vec<CharCurve> = Vec::new();
    for (line, rec) in rows {
        let family = CharFamily::parse(&rec[0]).ok_or_else(|| io_err(path, format!("line {line}: unknown family {:?}", &rec[0])))?;
        let foot = num(path, line, &rec, 1, &CURVE_HEADER)?;
        let t = num(path, line, &rec, 2, &CURVE_HEADER)?;
        let r = num(path, line, &rec, 3, &CURVE_HEADER)?;
        match out.last_mut() {
            Some(c) if c.family == family && c.foot == foot => c.samples.push((t, r)),
            _ => out.push(CharCurve { family, foot, samples: vec![(t, r)] }),
        }
    }
    Ok(out)
}

fn read_history(path: &Path) -> Result<Vec<StepRecord>, CliError> {
    let rows = read_csv(path, &HISTORY_HEADER)?;
    rows.into_iter()
        .map(|(line, rec)| {
            let x = |c| num(path, line, &rec, c, &HISTORY_HEADER);
            Ok(StepRecord {
                t: x(0)?,
                dt: x(1)?,
                v_max: x(2)?,
                v_max_r: x(3)?,
                delta_min: x(4)?,
                mass: x(5)?,
                rtilde_min: x(6)?,
                u_min: x(7)?,
                u_max: x(8)?,
                violations: rec[9].parse().map_err(|_| io_err(path, format!("line {line}: bad value in column violations")))?,
            })
        })
        .collect()
}

/// Four curves in solver order: C₊ from r1, C₋ from r2, C₀ from η1 then η2.
fn curve_set(path: &Path, curves: Vec<CharCurve>) -> Result<CurveSet, CliError> {
    let mut it = curves.into_iter();
    let mut next = |fam: CharFamily| {
        it.next().filter(|c| c.family == fam).ok_or_else(|| io_err(path, format!("expected a {} curve", fam.name())))
    };
    Ok(CurveSet { plus: next(CharFamily::Plus)?, minus: next(CharFamily::Minus)?, zero_eta1: next(CharFamily::Zero)?, zero_eta2: next(CharFamily::Zero)? })
}

fn read_snapshots(path: &Path, meta: &RunMeta, curves: &CurveSet) -> Result<Vec<UVState>, CliError> {
    let rows = read_csv(path, &SNAPSHOT_HEADER)?;
    let grid = Grid::new(meta.r1, meta.r2, meta.grid_n);
    let n = grid.n;
    if rows.len() % n != 0 || rows.is_empty() {
        return Err(io_err(path, format!("{} rows is not a positive multiple of grid_n = {n}", rows.len())));
    }
    let mut out = Vec::with_capacity(rows.len() / n);
    for chunk in rows.chunks(n) {
        let (line0, rec0) = &chunk[0];
        let time = num(path, *line0, rec0, 0, &SNAPSHOT_HEADER)?;
        let mut u = Vec::with_capacity(n);
        let mut v = Vec::with_capacity(n);
        for (i, (line, rec)) in chunk.iter().enumerate() {
            if num(path, *line, rec, 0, &SNAPSHOT_HEADER)? != time {
                return Err(io_err(path, format!("line {line}: snapshot at t = {time} has {i} rows, expected {n}")));
            }
            let r = num(path, *line, rec, 1, &SNAPSHOT_HEADER)?;
            if (r - grid.radius(i)).abs() > 1e-9 * grid.r2.abs() {
                return Err(io_err(path, format!("line {line}: r = {r} is not grid node {i}")));
            }
            u.push(num(path, *line, rec, 3, &SNAPSHOT_HEADER)?);
            v.push(num(path, *line, rec, 4, &SNAPSHOT_HEADER)?);
        }
        let at = |c: &CharCurve| c.position_at(time).ok_or_else(|| io_err(path, format!("no {} boundary at t = {time}", c.family.name())));
        out.push(UVState { time, grid, u, v, left_boundary: at(&curves.plus)?, right_boundary: at(&curves.minus)? });
    }
    Ok(out)
}

pub fn read_run_dir(dir: &Path) -> Result<Solution, CliError> {
    let need = |f: &str| -> Result<PathBuf, CliError> {
        let p = dir.join(f);
        if p.is_file() {
            Ok(p)
        } else {
            Err(CliError::Input(format!("{}: missing {f}", dir.display())))
        }
    };
    let meta: RunMeta = read_toml(&need(META)?)?;
    let report: BlowupReport = read_toml(&need(REPORT)?)?;
    let cpath = need(CURVES)?;
    let curves = curve_set(&cpath, read_curves(&cpath)?)?;
    let snapshots = read_snapshots(&need(SNAPSHOTS)?, &meta, &curves)?;
    let history = read_history(&need(HISTORY)?)?;
    Ok(Solution { meta, snapshots, curves, history, report })
}
