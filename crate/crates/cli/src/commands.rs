use std::path::Path;

use membrane_core::initdata::{check_assumptions, make_family, FamilyParams, InitDataError, ValidationReport, VALIDATION_SAMPLES};
use membrane_core::solver::{run, SolverError, SolverParams};
use membrane_core::tracer::{collision_time, trace_many};
use membrane_core::types::{BlowupReport, CharFamily};
use membrane_core::verify::{run_property_suite, CheckRecord, VerifyConfig, VerifyReport};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Config, DatumConfig, DatumOutcome};
use crate::io::{self, fmt};
use crate::{CliError, Ctx};

#[derive(Serialize)]
struct ValidateOut<'a> {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    failing_clause: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<&'a str>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    report: Option<&'a ValidationReport>,
}

fn to_toml<T: Serialize>(v: &T) -> String {
    toml::to_string(v).unwrap_or_else(|e| format!("# unprintable: {e}\n"))
}

pub fn validate(ctx: &Ctx, path: &Path) -> Result<(), CliError> {
    let cfg = Config::load(path)?;
    let d = match cfg.datum()? {
        DatumOutcome::Ready(d) => d,
        DatumOutcome::Rejected { clause, detail } => {
            ctx.say(&to_toml(&ValidateOut { status: "fail", failing_clause: Some(clause), detail: Some(&detail), report: None }));
            return Err(CliError::Failed(format!("{clause} fails: {detail}")));
        }
    };
    let rep = check_assumptions(&d, VALIDATION_SAMPLES).map_err(|e| CliError::Input(e.to_string()))?;
    let clause = rep.failing_clause();
    let status = if clause.is_none() { "pass" } else { "fail" };
    ctx.say(&to_toml(&ValidateOut { status, failing_clause: clause, detail: None, report: Some(&rep) }));
    match clause {
        None => Ok(()),
        Some(c) => Err(CliError::Failed(format!("{c} fails"))),
    }
}

pub fn solve(ctx: &Ctx, path: &Path) -> Result<(), CliError> {
    let cfg = Config::load(path)?;
    let d = match cfg.datum()? {
        DatumOutcome::Ready(d) => d,
        DatumOutcome::Rejected { clause, detail } => return Err(CliError::Failed(format!("{clause} fails: {detail}"))),
    };
    let sol = run(&d, &cfg.solver).map_err(|e| match e {
        SolverError::AssumptionsFailed { .. } => CliError::Failed(e.to_string()),
        SolverError::InvalidParams(_) | SolverError::InitData(_) => CliError::Input(e.to_string()),
        other => CliError::Failed(other.to_string()),
    })?;
    io::write_run_dir(&ctx.out, &sol)?;
    ctx.say(&format!("# run directory {}\n{}", ctx.out.display(), to_toml(&sol.report)));
    Ok(())
}

pub fn trace(ctx: &Ctx, run_dir: &Path, family: &str, feet: &[f64]) -> Result<(), CliError> {
    let fam = CharFamily::parse(family).ok_or_else(|| CliError::Input(format!("unknown family {family:?}; use plus, minus or zero")))?;
    let sol = io::read_run_dir(run_dir)?;
    let curves = trace_many(fam, feet, &sol.snapshots).map_err(|e| CliError::Input(e.to_string()))?;
    io::write_curves(&run_dir.join(io::TRACED), &curves)?;
    let collision = collision_time(&sol.snapshots, sol.meta.eta1, sol.meta.eta2).map_err(|e| CliError::Input(e.to_string()))?;
    let mut text = format!("traced = {}\n", curves.len());
    for c in &curves {
        let (t, r) = *c.samples.last().unwrap();
        text += &format!("{} foot {} ends at t = {}, r = {}\n", c.family.name(), fmt(c.foot), fmt(t), fmt(r));
    }
    text += &match collision {
        Some(t) => format!("c0_collision_time = {}\n", fmt(t)),
        None => "c0_collision_time = none\n".into(),
    };
    ctx.say(&text);
    Ok(())
}

pub fn render_verify(rep: &VerifyReport) -> String {
    #[derive(Serialize)]
    struct Out<'a> {
        all_passed: bool,
        checks: &'a [CheckRecord],
    }
    let mut text = to_toml(&Out { all_passed: rep.all_passed(), checks: &rep.checks });
    text += "\n";
    for c in &rep.checks {
        let tag = if !c.applicable { "SKIP" } else if c.passed { "PASS" } else { "FAIL" };
        text += &format!("# {tag} {}\n", c.name);
    }
    text
}

pub fn verify(ctx: &Ctx, run_dir: &Path, refined: Option<&Path>, config: Option<&Path>, full: bool) -> Result<(), CliError> {
    let mut vc = match config {
        Some(p) => Config::load(p)?.verify,
        None => VerifyConfig::default(),
    };
    vc.full |= full;
    let sol = io::read_run_dir(run_dir)?;
    let fine = refined.map(io::read_run_dir).transpose()?;
    let rep = run_property_suite(&sol, fine.as_ref(), &vc);
    io::write_toml(&run_dir.join(io::VERIFY), &rep)?;
    ctx.say(&render_verify(&rep));
    if rep.all_passed() {
        Ok(())
    } else {
        let bad: Vec<&str> = rep.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        Err(CliError::Failed(format!("{} check(s) failed: {}", bad.len(), bad.join(", "))))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub drop: f64,
    pub width: f64,
    pub v0: f64,
    /// "pass", or the first failing clause.
    pub checks: String,
    pub t_blow: Option<f64>,
    pub t_star: Option<f64>,
    pub status: String,
}

impl SweepRow {
    pub fn ratio(&self) -> Option<f64> {
        Some(self.t_blow? / self.t_star?)
    }
}

pub fn sweep_rows(base: FamilyParams, grid: &crate::config::SweepConfig, solver: &SolverParams) -> Vec<SweepRow> {
    let mut combos = Vec::new();
    for &drop in &grid.drop {
        for &width in &grid.width {
            for &v0 in &grid.v0 {
                combos.push((drop, width, v0));
            }
        }
    }
    combos.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)));
    combos
        .par_iter()
        .map(|&(drop, width, v0)| {
            let mut row = SweepRow { drop, width, v0, checks: "pass".into(), t_blow: None, t_star: None, status: "n/a".into() };
            match make_family(FamilyParams { drop, width, v0, ..base }) {
                Err(InitDataError::FamilyRejected { clause, .. }) => row.checks = clause.into(),
                Err(e) => row.checks = format!("error: {e}"),
                Ok(d) => match run(&d, &SolverParams { force: false, ..*solver }) {
                    Ok(sol) => {
                        row.t_blow = sol.report.t_blow_observed;
                        row.t_star = sol.report.t_star_bound;
                        row.status = sol.report.run_status.name().into();
                    }
                    Err(e) => row.status = format!("error: {e}"),
                },
            }
            row
        })
        .collect()
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_else(|| "n/a".into())
}

pub fn sweep(ctx: &Ctx, path: &Path) -> Result<(), CliError> {
    let cfg = Config::load(path)?;
    let base = match cfg.datum {
        DatumConfig::Family(p) => p,
        _ => return Err(CliError::Input("sweep needs [datum] kind = \"family\"".into())),
    };
    let grid = cfg.sweep.as_ref().ok_or_else(|| CliError::Input("missing [sweep] section".into()))?;
    let rows = sweep_rows(base, grid, &cfg.solver);
    std::fs::create_dir_all(&ctx.out).map_err(|e| CliError::Input(format!("{}: {e}", ctx.out.display())))?;
    let mut text = String::from("drop,width,v0,checks,status,t_blow,t_star_bound,ratio\n");
    for r in &rows {
        text += &format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt(r.drop),
            fmt(r.width),
            fmt(r.v0),
            r.checks,
            r.status,
            opt(r.t_blow),
            opt(r.t_star),
            opt(r.ratio())
        );
    }
    let file = ctx.out.join("sweep.csv");
    std::fs::write(&file, format!("{}\n{text}", io::SCHEMA_LINE)).map_err(|e| CliError::Input(format!("{}: {e}", file.display())))?;
    ctx.say(&text);
    Ok(())
}

pub fn report(ctx: &Ctx, run_dir: &Path) -> Result<(), CliError> {
    let rep: BlowupReport = io::read_toml(&run_dir.join(io::REPORT))?;
    let meta: membrane_core::solver::RunMeta = io::read_toml(&run_dir.join(io::META))?;
    let mut text = format!(
        "status = {}\nt_blow = {}\nt_star_bound = {}\ngrid_n = {}\nv0 = {}\neta = [{}, {}]\nv_max = {} at r = {}\nmin delta = {:e}\nmass drift = {:e}\ninvariant violations = {}\nsteps = {}\n",
        rep.run_status.name(),
        opt(rep.t_blow_observed),
        opt(rep.t_star_bound),
        meta.grid_n,
        meta.v0,
        meta.eta1,
        meta.eta2,
        rep.v_max,
        rep.v_max_location,
        rep.delta_min_reconstructed,
        rep.mass_drift_rel,
        rep.invariant_violations,
        rep.steps,
    );
    let vpath = run_dir.join(io::VERIFY);
    if vpath.is_file() {
        let v: VerifyReport = io::read_toml(&vpath)?;
        let failed: Vec<&str> = v.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        text += &format!("verify: {} checks, {} failed {:?}\n", v.checks.len(), failed.len(), failed);
    }
    ctx.say(&text);
    Ok(())
}
