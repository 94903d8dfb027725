//! Implementations of the CLI subcommands.

use crate::config::{
    self, EvolveConfig, InitConfig, LimitsConfig, RiemannConfig, SteadyConfig,
};
use crate::output::{fmt_f64, CaseRecord, Csv, RunManifest};
use bhfluid::acceptance::{run_criterion, CRITERION_COUNT};
use bhfluid::limits::{limit_consistency, LimitKind};
use bhfluid::model::{riemann_invariants, FluidState, PhysParams};
use bhfluid::riemann::{solve_riemann, wave_strength, WaveDescriptor, WaveKind};
use bhfluid::scheme::{run, Level, SampleSequence, SchemeConfig};
use bhfluid::steady::{eval_orbit, make_global_orbit, SonicRegime, SteadyBase, SteadyOrbit};
use bhfluid::{Error, Result};
use std::path::Path;

/// Radii per steady atlas and samples per Riemann profile.
const ATLAS_POINTS: usize = 512;

/// Build one steady-atlas CSV: the global orbit through the case's base
/// point sampled on a log-spaced grid.
fn steady_case_csv(case: &config::SteadyCase) -> Result<String> {
    let p = case.params.build()?;
    let base = SteadyBase::new(case.r0, case.rho0, case.v0, &p)?;
    let orbit = make_global_orbit(&base, &p)?;
    let regime = regime_name(&orbit);
    // Log-spaced window: just outside the horizon up to 10^3 M when a
    // horizon exists, otherwise three decades around the base point.
    let (lo, hi) = if p.horizon() > 0.0 {
        (p.horizon() * (1.0 + 1e-6), 1e3 * p.horizon() / 2.0)
    } else {
        (1e-3 * case.r0, 1e3 * case.r0)
    };
    let step = (hi / lo).ln() / (ATLAS_POINTS - 1) as f64;
    let mut csv = Csv::new(&["r", "rho", "v", "branch_id", "is_shock", "regime"]);
    for i in 0..ATLAS_POINTS {
        let r = lo * (step * i as f64).exp();
        let s = match eval_orbit(&orbit, r) {
            Ok(s) => s,
            Err(_) => continue, // outside the orbit's maximal domain
        };
        let (branch, is_shock) = match orbit.shock_radius {
            Some(rj) => {
                // 0: the branch containing the base point, 1: the far side.
                let branch = usize::from((r < rj) != (case.r0 < rj));
                let next = lo * (step * (i + 1) as f64).exp();
                (branch, usize::from(r <= rj && rj < next))
            }
            None => (0, 0),
        };
        csv.row(&[
            fmt_f64(r),
            fmt_f64(s.rho),
            fmt_f64(s.v),
            branch.to_string(),
            is_shock.to_string(),
            regime.to_string(),
        ]);
    }
    Ok(csv.into_string())
}

fn regime_name(orbit: &SteadyOrbit) -> &'static str {
    match orbit.classification.regime {
        SonicRegime::NoSonicPoint => "no_sonic_point",
        SonicRegime::CriticalSonic { .. } => "critical_sonic",
        SonicRegime::TwoSonicPoints { .. } => "two_sonic_points",
    }
}

/// `steady`: one CSV atlas per case; individual failures are recorded in the
/// manifest and the sweep continues.
pub fn cmd_steady(
    config_path: &Path,
    out: &Path,
    parallel: Option<usize>,
) -> Result<RunManifest> {
    let cfg: SteadyConfig = config::load(config_path)?;
    let mut manifest = RunManifest::new("steady", config_path, out);
    let labels: Vec<String> = cfg
        .cases
        .iter()
        .enumerate()
        .map(|(i, c)| c.label.clone().unwrap_or_else(|| i.to_string()))
        .collect();
    let results: Vec<Result<String>> = thread_pool(parallel, cfg.cases.len())?.install(|| {
        use rayon::prelude::*;
        cfg.cases.par_iter().map(steady_case_csv).collect()
    });
    for (label, result) in labels.iter().zip(results) {
        match result {
            Ok(csv) => {
                manifest.emit(&format!("steady_{label}.csv"), &csv)?;
                manifest.cases.push(CaseRecord { label: label.clone(), status: "ok".into() });
            }
            Err(e) => {
                manifest
                    .cases
                    .push(CaseRecord { label: label.clone(), status: format!("error: {e}") });
            }
        }
    }
    manifest.finish()?;
    Ok(manifest)
}

/// A rayon pool sized by --parallel, capped by the SOLVER_THREADS env var.
fn thread_pool(parallel: Option<usize>, cases: usize) -> Result<rayon::ThreadPool> {
    let mut n = parallel.unwrap_or(1).max(1).min(cases.max(1));
    if let Ok(cap) = std::env::var("SOLVER_THREADS") {
        let cap: usize = cap
            .parse()
            .map_err(|_| Error::Config(format!("SOLVER_THREADS is not a number: {cap}")))?;
        n = n.min(cap.max(1));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn wave_json(w: &WaveDescriptor) -> serde_json::Value {
    let (kind, speeds) = match w.kind {
        WaveKind::Shock { speed } => ("shock", vec![speed]),
        WaveKind::Contact { speed } => ("contact", vec![speed]),
        WaveKind::Rarefaction { speed_lo, speed_hi } => ("rarefaction", vec![speed_lo, speed_hi]),
    };
    serde_json::json!({ "kind": kind, "speeds": speeds })
}

/// `riemann`: solve one Riemann problem; emit the fan record and a sampled
/// self-similar profile.
pub fn cmd_riemann(config_path: &Path, out: &Path) -> Result<RunManifest> {
    let cfg: RiemannConfig = config::load(config_path)?;
    let p = cfg.params.build()?;
    let left = FluidState::new(cfg.left.rho, cfg.left.v, &p)?;
    let right = FluidState::new(cfg.right.rho, cfg.right.v, &p)?;
    let fan = solve_riemann(left, right, cfg.r0, &p)?;
    let strength = wave_strength(fan.left, fan.middle, fan.right);

    let record = serde_json::json!({
        "r0": fan.r0,
        "left": { "rho": fan.left.rho, "v": fan.left.v },
        "middle": { "rho": fan.middle.rho, "v": fan.middle.v },
        "right": { "rho": fan.right.rho, "v": fan.right.v },
        "wave1": wave_json(&fan.wave1),
        "wave2": wave_json(&fan.wave2),
        "strength": strength,
    });

    // Sample in the self-similar coordinate xi = (r - r0)/t, padded past the
    // extreme wave speeds.
    let (lo1, _) = fan.wave1.span();
    let (_, hi2) = fan.wave2.span();
    let pad = 0.25 * (hi2 - lo1).max(1e-3);
    let (lo, hi) = (lo1 - pad, hi2 + pad);
    let mut csv = Csv::new(&["xi", "rho", "v"]);
    for i in 0..ATLAS_POINTS {
        let xi = lo + (hi - lo) * i as f64 / (ATLAS_POINTS - 1) as f64;
        let s = bhfluid::riemann::sample_fan(&fan, xi);
        csv.row(&[fmt_f64(xi), fmt_f64(s.rho), fmt_f64(s.v)]);
    }

    let mut manifest = RunManifest::new("riemann", config_path, out);
    manifest.emit(
        "riemann_record.json",
        &(serde_json::to_string_pretty(&record)
            .map_err(|e| Error::Numerics(format!("record serialization: {e}")))?
            + "\n"),
    )?;
    manifest.emit("riemann_profile.csv", &csv.into_string())?;
    manifest.finish()?;
    Ok(manifest)
}

fn snapshot_csv(level: &Level, p: &PhysParams) -> Result<String> {
    let mut csv = Csv::new(&["t", "r", "rho", "v", "w", "z"]);
    for cell in &level.cells {
        let s = eval_orbit(&cell.orbit, cell.r_base)?;
        let iv = riemann_invariants(s, p)?;
        csv.row(&[
            fmt_f64(level.t),
            fmt_f64(cell.r_base),
            fmt_f64(s.rho),
            fmt_f64(s.v),
            fmt_f64(iv.w),
            fmt_f64(iv.z),
        ]);
    }
    Ok(csv.into_string())
}

/// `evolve`: run the random-choice scheme; emit per-snapshot state CSVs and
/// the per-level diagnostics CSV.
pub fn cmd_evolve(
    config_path: &Path,
    out: &Path,
    seq_offset: Option<u64>,
) -> Result<RunManifest> {
    let cfg: EvolveConfig = config::load(config_path)?;
    let p = cfg.params.build()?;
    let scheme_cfg = SchemeConfig {
        dr: cfg.dr,
        dt: cfg.dt,
        r_lo: cfg.r_lo,
        r_hi: cfg.r_hi,
        t0: cfg.t0,
        t_end: cfg.t_end,
        sequence: SampleSequence::VanDerCorput { offset: seq_offset.unwrap_or(cfg.seq_offset) },
        frozen_fan_only: cfg.frozen_fan_only,
        snapshot_every: cfg.snapshot_every,
        params: p,
    };
    let init: Box<dyn Fn(f64) -> Result<FluidState>> = match cfg.init {
        InitConfig::Steady { r0, rho0, v0 } => {
            let base = SteadyBase::new(r0, rho0, v0, &p)?;
            let orbit = make_global_orbit(&base, &p)?;
            Box::new(move |r| eval_orbit(&orbit, r))
        }
        InitConfig::Riemann { left, right, r_mid } => {
            let sl = FluidState::new(left.rho, left.v, &p)?;
            let sr = FluidState::new(right.rho, right.v, &p)?;
            Box::new(move |r| Ok(if r < r_mid { sl } else { sr }))
        }
    };
    let sol = run(&scheme_cfg, &*init)?;

    let mut manifest = RunManifest::new("evolve", config_path, out);
    for (index, level) in &sol.snapshots {
        manifest.emit(&format!("snapshot_{index:06}.csv"), &snapshot_csv(level, &p)?)?;
    }
    manifest.emit(
        &format!("snapshot_{:06}.csv", sol.final_level.index),
        &snapshot_csv(&sol.final_level, &p)?,
    )?;
    let mut diag = Csv::new(&["t", "tv_lnrho", "tv_velocity", "L_J", "max_wavespeed"]);
    for d in &sol.diagnostics {
        diag.row(&[
            fmt_f64(d.t),
            fmt_f64(d.tv_lnrho),
            fmt_f64(d.tv_velocity),
            fmt_f64(d.l_j),
            fmt_f64(d.max_wavespeed),
        ]);
    }
    manifest.emit("diagnostics.csv", &diag.into_string())?;
    manifest.finish()?;
    Ok(manifest)
}

/// `limits`: consistency deviations between the base model and its limiting
/// members, one row per case.
pub fn cmd_limits(config_path: &Path, out: &Path) -> Result<RunManifest> {
    let cfg: LimitsConfig = config::load(config_path)?;
    let base = cfg.base.build()?;
    let mut csv = Csv::new(&[
        "kind",
        "small",
        "max_flux",
        "max_source",
        "max_eigenvalue",
        "fitted_order",
    ]);
    for case in &cfg.cases {
        let kind = match case.kind.as_str() {
            "non_relativistic" => LimitKind::NonRelativistic,
            "minkowski" => LimitKind::Minkowski,
            "stiff" => LimitKind::Stiff,
            "non_rel_minkowski" => LimitKind::NonRelMinkowski,
            other => return Err(Error::Config(format!("unknown limit kind: {other}"))),
        };
        let report = limit_consistency(&base, kind, case.small)?;
        csv.row(&[
            case.kind.clone(),
            fmt_f64(report.small),
            fmt_f64(report.max_flux),
            fmt_f64(report.max_source),
            fmt_f64(report.max_eigenvalue),
            fmt_f64(report.fitted_order),
        ]);
    }
    let mut manifest = RunManifest::new("limits", config_path, out);
    manifest.emit("limits_report.csv", &csv.into_string())?;
    manifest.finish()?;
    Ok(manifest)
}

/// Parse the --suite selector into criterion ids.
pub fn parse_suite(suite: &str) -> Option<Vec<usize>> {
    if suite == "all" {
        return Some((1..=CRITERION_COUNT).collect());
    }
    let mut ids = Vec::new();
    for part in suite.split(',') {
        let id: usize = part.trim().parse().ok()?;
        if id == 0 || id > CRITERION_COUNT {
            return None;
        }
        ids.push(id);
    }
    Some(ids)
}

/// `verify`: run the selected acceptance criteria, print one report line per
/// criterion, and return whether all of them passed.
pub fn cmd_verify(ids: &[usize], out: Option<(&Path, &Path)>) -> Result<bool> {
    let mut all_pass = true;
    let mut csv = Csv::new(&["id", "name", "measured", "tolerance", "pass", "detail"]);
    for &id in ids {
        let r = run_criterion(id);
        println!(
            "criterion {:2} {:35} measured = {:<12.4e} tolerance = {:<9.1e} {} :: {}",
            r.id,
            r.name,
            r.measured,
            r.tolerance,
            if r.pass { "PASS" } else { "FAIL" },
            r.detail
        );
        csv.row(&[
            r.id.to_string(),
            r.name.to_string(),
            fmt_f64(r.measured),
            fmt_f64(r.tolerance),
            r.pass.to_string(),
            format!("\"{}\"", r.detail.replace('"', "'")),
        ]);
        all_pass &= r.pass;
    }
    if let Some((config_path, dir)) = out {
        let mut manifest = RunManifest::new("verify", config_path, dir);
        manifest.emit("verify_report.csv", &csv.into_string())?;
        manifest.finish()?;
    }
    Ok(all_pass)
}

/// `plot-script`: emit a gnuplot script that renders the CSVs listed in a
/// run manifest.
pub fn cmd_plot_script(manifest_path: &Path, out: &Path) -> Result<()> {
    let text = std::fs::read_to_string(manifest_path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", manifest_path.display())))?;
    let manifest: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("cannot parse {}: {e}", manifest_path.display())))?;
    let files = manifest["files"]
        .as_array()
        .ok_or_else(|| Error::Config("manifest has no files array".into()))?;

    let mut script = String::from(
        "set datafile separator \",\"\nset key autotitle columnhead\nset term pngcairo size 900,600\n",
    );
    for f in files {
        let Some(name) = f["name"].as_str() else { continue };
        if !name.ends_with(".csv") {
            continue;
        }
        let png = name.trim_end_matches(".csv");
        let plot = if name.starts_with("steady_") {
            format!("plot \"{name}\" using 1:3 with lines, \"\" using 1:2 with lines")
        } else if name.starts_with("riemann_profile") {
            format!("plot \"{name}\" using 1:2 with lines, \"\" using 1:3 with lines")
        } else if name.starts_with("snapshot_") {
            format!("plot \"{name}\" using 2:3 with lines, \"\" using 2:4 with lines")
        } else if name.starts_with("diagnostics") {
            format!("plot \"{name}\" using 1:2 with lines, \"\" using 1:4 with lines")
        } else {
            continue;
        };
        script.push_str(&format!("set output \"{png}.png\"\n{plot}\n"));
    }
    std::fs::write(out, script)
        .map_err(|e| Error::Numerics(format!("cannot write {}: {e}", out.display())))?;
    Ok(())
}
