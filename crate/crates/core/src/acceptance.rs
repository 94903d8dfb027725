//! Executable acceptance suite: ten numbered checks covering the whole
//! solver stack, from the critical-configuration algebra to the convergence
//! of the random-choice scheme.
//!
//! Each check returns a [`CriterionResult`] with a representative measured
//! value, the pinned tolerance it is compared against, and a human-readable
//! detail line.  The suite is deterministic: all randomness comes from
//! fixed-seed generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::grp::{eval_grp, solve_grp, weak_residual};
use crate::limits::{limit_consistency, LimitKind};
use crate::model::{
    conserved, eigenvalues, flux, riemann_invariants, source, FluidState, PhysParams,
};
use crate::riemann::{
    rarefaction_state, sample_fan, shock_state, solve_riemann, wave_strength, WaveFamily,
    WaveKind,
};
use crate::scheme::{locate_jump, run, SampleSequence, SchemeConfig};
use crate::steady::{
    classify, eval_orbit, make_global_orbit, p_value, r_min, stiff_steady, SonicRegime,
    SteadyBase,
};

/// Number of checks in the suite.
pub const CRITERION_COUNT: usize = 10;

/// Outcome of one acceptance check.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    /// 1-based criterion number.
    pub id: usize,
    /// Short stable name.
    pub name: &'static str,
    /// Representative measured value (worst deviation or fitted order).
    pub measured: f64,
    /// The pinned tolerance or bound the measurement is compared against.
    pub tolerance: f64,
    pub pass: bool,
    /// Sub-measurements and context for the report line.
    pub detail: String,
}

/// Short stable name of criterion `id` (1-based).
pub fn criterion_name(id: usize) -> &'static str {
    match id {
        1 => "critical-configuration-zeros",
        2 => "sonic-classification-vs-scan",
        3 => "steady-first-integrals",
        4 => "stiff-closed-form-vs-rk4",
        5 => "riemann-solver-soundness",
        6 => "diminishing-wave-strength",
        7 => "grp-exactness-and-orders",
        8 => "well-balanced-random-choice",
        9 => "flat-space-glimm-convergence",
        10 => "limit-consistency-orders",
        _ => "unknown",
    }
}

/// Run one check (1-based id); unknown ids yield a failed result.
pub fn run_criterion(id: usize) -> CriterionResult {
    let out = match id {
        1 => c1_critical_zeros(),
        2 => c2_classification_vs_scan(),
        3 => c3_first_integrals(),
        4 => c4_stiff_closed_form(),
        5 => c5_riemann_soundness(),
        6 => c6_diminishing_strength(),
        7 => c7_grp_orders(),
        8 => c8_well_balanced(),
        9 => c9_flat_convergence(),
        10 => c10_limit_orders(),
        _ => {
            return CriterionResult {
                id,
                name: "unknown",
                measured: f64::NAN,
                tolerance: f64::NAN,
                pass: false,
                detail: format!("no criterion with id {id}"),
            }
        }
    };
    match out {
        Ok(r) => r,
        Err(e) => CriterionResult {
            id,
            name: criterion_name(id),
            measured: f64::NAN,
            tolerance: f64::NAN,
            pass: false,
            detail: format!("aborted: {e}"),
        },
    }
}

/// Run the full suite in order.
pub fn run_all() -> Vec<CriterionResult> {
    (1..=CRITERION_COUNT).map(run_criterion).collect()
}

fn result(
    id: usize,
    measured: f64,
    tolerance: f64,
    pass: bool,
    detail: String,
) -> CriterionResult {
    CriterionResult { id, name: criterion_name(id), measured, tolerance, pass, detail }
}

/// Least-squares slope of ln(y) against ln(x).
fn fitted_order(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

/// 1. The classification function vanishes at the critical configuration
/// (sonic radius paired with sonic velocity) for random parameters.
fn c1_critical_zeros() -> Result<CriterionResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let eps = rng.gen_range(0.05..1.5);
        let k = rng.gen_range(0.05..0.95) / eps;
        let mass = rng.gen_range(0.1..5.0);
        let p = PhysParams::relativistic(eps, k, mass)?;
        worst = worst.max(p_value(r_min(&p), p.k, &p).abs());
    }
    for _ in 0..50 {
        let k = rng.gen_range(0.1..2.0);
        let m = rng.gen_range(0.1..5.0);
        let p = PhysParams::non_relativistic(k, m)?;
        worst = worst.max(p_value(r_min(&p), p.k, &p).abs());
    }
    Ok(result(
        1,
        worst,
        1e-12,
        worst < 1e-12,
        "max |P| at the critical configuration over 100 random parameter draws".into(),
    ))
}

/// 2. The sign of P agrees with a brute-force root count of the sonic
/// equation on a 50x50 grid of base points.
fn c2_classification_vs_scan() -> Result<CriterionResult> {
    let p = PhysParams::relativistic(0.01, 0.3, 1.0)?;
    let rm = r_min(&p);
    let mut checked = 0usize;
    let mut skipped = 0usize;
    let mut disagreements = 0usize;
    // Scan grid: log-spaced global sweep plus two linear refinements around
    // the fold radius, where near-critical root pairs live.
    let mut scan: Vec<f64> = Vec::with_capacity(10_000);
    let (lo, hi) = (p.horizon() * (1.0 + 1e-6), 1e23_f64);
    for i in 0..4000 {
        scan.push(lo * (hi / lo).powf(i as f64 / 3999.0));
    }
    for i in 0..3000 {
        scan.push(rm * (0.5 + 1.0 * i as f64 / 2999.0));
    }
    for i in 0..3000 {
        scan.push(rm * (0.99 + 0.02 * i as f64 / 2999.0));
    }
    scan.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for i in 0..50 {
        let r0 = rm * 10.0_f64.powf(-1.0 + 2.0 * i as f64 / 49.0);
        for j in 0..50 {
            let v0 = p.k * 10.0_f64.powf(-1.0 + 2.0 * j as f64 / 49.0);
            let base = SteadyBase::new(r0, 1.0, v0, &p)?;
            let c = classify(&base, &p)?;
            if c.p_value.abs() <= 1e-8 {
                skipped += 1;
                continue;
            }
            let expected = match c.regime {
                SonicRegime::NoSonicPoint => 0,
                SonicRegime::TwoSonicPoints { .. } => 2,
                SonicRegime::CriticalSonic { .. } => {
                    skipped += 1;
                    continue;
                }
            };
            let mut crossings = 0;
            let mut prev = crate::steady::eval_g(scan[0], p.k, &base, &p);
            for &r in &scan[1..] {
                let cur = crate::steady::eval_g(r, p.k, &base, &p);
                if prev.signum() != cur.signum() {
                    crossings += 1;
                }
                prev = cur;
            }
            checked += 1;
            if crossings != expected {
                disagreements += 1;
            }
        }
    }
    Ok(result(
        2,
        disagreements as f64,
        0.5,
        disagreements == 0 && checked > 0,
        format!("{checked} grid points checked, {skipped} borderline skipped, {disagreements} disagree"),
    ))
}

/// 3. Both first integrals are constant along every constructed orbit, and
/// the steady balance holds in midpoint-quadrature weak form.
fn c3_first_integrals() -> Result<CriterionResult> {
    let pr = PhysParams::relativistic(1.0, 0.3, 1.0)?;
    let p0 = PhysParams::non_relativistic(0.3, 2.0)?;
    let pm = PhysParams::minkowski(1.0, 0.3)?;
    let suite: Vec<(PhysParams, f64, f64, f64, f64, f64)> = vec![
        (pr, 4.0, 1.0, 0.05, 2.4, 30.0),
        (pr, 8.0, 2.0, 0.08, 2.4, 30.0),
        (pr, 10.0, 1.0, 0.05, 2.4, 30.0),
        (pr, 6.0, 0.5, 0.1, 2.4, 30.0),
        (pr, 12.0, 3.0, 0.02, 2.4, 30.0),
        (pr, 10.0, 1.0, -0.05, 2.4, 30.0),
        (pr, 10.0, 1.0, 0.22, 2.4, 30.0),
        (pr, 10.0, 1.0, 0.26, 2.4, 30.0),
        (pr, 10.0, 1.0, 0.24, 2.4, 30.0),
        (pr, 10.0, 1.0, 0.9, 2.4, 30.0),
        (pr, r_min(&pr), 1.0, 0.3, 2.4, 30.0),
        (pr, 5.0, 1.5, 0.12, 2.4, 30.0),
        (pr, 15.0, 0.8, 0.03, 2.4, 30.0),
        (pr, 7.0, 1.0, 0.15, 2.4, 30.0),
        (pr, 20.0, 2.0, 0.1, 2.4, 30.0),
        (pr, 4.0, 0.7, 0.2, 2.4, 30.0),
        (p0, 20.0, 1.0, 0.04, 1.0, 40.0),
        (p0, 15.0, 2.0, 0.1, 1.0, 40.0),
        (p0, 15.0, 1.0, 0.6, 1.0, 40.0),
        (pm, 5.0, 1.0, 0.1, 4.0, 35.0),
    ];
    let mut worst_int = 0.0_f64;
    let mut worst_weak = 0.0_f64;
    for &(p, r0, rho0, v0, lo, hi) in &suite {
        let base = SteadyBase::new(r0, rho0, v0, &p)?;
        let orbit = make_global_orbit(&base, &p)?;
        let shock = orbit.shock_radius;
        let near_shock = |r: f64| shock.map_or(false, |r1| (r - r1).abs() < 0.1);
        // First integrals, referenced per smooth piece.
        let refs = |r: f64| -> f64 {
            // Representative radius on the same side of the shock as r.
            match shock {
                Some(r1) if r < r1 => 0.5 * (lo + r1.min(hi)),
                Some(r1) => 0.5 * (r1.max(lo) + hi),
                None => 0.5 * (lo + hi),
            }
        };
        for i in 0..1000 {
            let r = lo + (hi - lo) * (i as f64 + 0.5) / 1000.0;
            if near_shock(r) {
                continue;
            }
            let s = eval_orbit(&orbit, r)?;
            let sr = eval_orbit(&orbit, refs(r))?;
            let rr = refs(r);
            let (d, dref, c, cref) = if p.eps == 0.0 {
                (
                    r * r * s.rho * s.v,
                    rr * rr * sr.rho * sr.v,
                    0.5 * s.v * s.v + p.k * p.k * s.rho.ln() - p.m / r,
                    0.5 * sr.v * sr.v + p.k * p.k * sr.rho.ln() - p.m / rr,
                )
            } else {
                let e2 = p.eps * p.eps;
                (
                    r * r * s.rho.powf(p.kappa) * s.v,
                    rr * rr * sr.rho.powf(p.kappa) * sr.v,
                    p.alpha(r) * s.rho.powf(1.0 - p.kappa) / (1.0 - e2 * s.v * s.v),
                    p.alpha(rr) * sr.rho.powf(1.0 - p.kappa) / (1.0 - e2 * sr.v * sr.v),
                )
            };
            worst_int = worst_int
                .max((d - dref).abs() / dref.abs().max(1e-12))
                .max((c - cref).abs() / cref.abs().max(1e-3));
        }
        // Weak form of the steady balance over narrow cells, normalized by
        // the local flux/source scale (fluxes grow without bound towards the
        // horizon and the classical potential well).  Two-point Gauss keeps
        // the quadrature error below the root-solver noise floor.
        let h = 1e-3;
        let g = 0.5 * h / 3.0_f64.sqrt();
        for i in 0..1000 {
            let r = lo + (hi - lo) * (i as f64 + 0.5) / 1000.0;
            if near_shock(r) {
                continue;
            }
            let fa = flux(eval_orbit(&orbit, r - 0.5 * h)?, r - 0.5 * h, &p)?;
            let fb = flux(eval_orbit(&orbit, r + 0.5 * h)?, r + 0.5 * h, &p)?;
            let sa = source(eval_orbit(&orbit, r - g)?, r - g, &p)?;
            let sb = source(eval_orbit(&orbit, r + g)?, r + g, &p)?;
            let s1 = h * (1.0 + fa.u1.abs() + sa.u1.abs());
            let s2 = h * (1.0 + fa.u2.abs() + sa.u2.abs());
            worst_weak = worst_weak
                .max((fb.u1 - fa.u1 - 0.5 * h * (sa.u1 + sb.u1)).abs() / s1)
                .max((fb.u2 - fa.u2 - 0.5 * h * (sa.u2 + sb.u2)).abs() / s2);
        }
    }
    let pass = worst_int < 1e-10 && worst_weak < 1e-8;
    Ok(result(
        3,
        worst_int,
        1e-10,
        pass,
        format!(
            "20 orbits, 1000 radii each: first-integral drift {worst_int:.3e} (tol 1e-10), \
             midpoint weak residual {worst_weak:.3e} (tol 1e-8)"
        ),
    ))
}

/// 4. The stiff equilibrium closed form matches an RK4 integration of the
/// steady balance, plus one hand-computed spot value.
fn c4_stiff_closed_form() -> Result<CriterionResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let eps = rng.gen_range(0.6..1.4);
        let mass = rng.gen_range(0.4..2.0);
        let rho0 = rng.gen_range(0.3..3.0);
        let v0 = rng.gen_range(0.02..0.45) / eps;
        let p = PhysParams::stiff(eps, mass)?;
        let b = SteadyBase::new(4.0 * mass, rho0, v0, &p)?;
        for r_end in [50.0 * mass, 3.0 * mass] {
            worst = worst.max(stiff_rk4_deviation(&b, &p, r_end)?);
        }
    }
    let p = PhysParams::stiff(1.0, 1.0)?;
    let b = SteadyBase::new(4.0, 1.0, 0.1, &p)?;
    let spot = (stiff_steady(8.0, &b, &p)?.v - 0.025).abs();
    let pass = worst < 1e-8 && spot < 1e-12;
    Ok(result(
        4,
        worst,
        1e-8,
        pass,
        format!("10 random bases on [3M, 50M]: max relative error {worst:.3e}; spot |v(8) - 0.025| = {spot:.3e}"),
    ))
}

/// Integrate the second steady balance component with RK4 from the base
/// radius to `r_end`, recovering (rho, v) from the conserved mass flux, and
/// return the worst relative deviation from the closed form at checkpoints.
fn stiff_rk4_deviation(b: &SteadyBase, p: &PhysParams, r_end: f64) -> Result<f64> {
    let e2 = p.eps * p.eps;
    let two_m = 2.0 * p.mass_m;
    let a_const = b.d0; // r(r-2M) rho v / (1 - eps^2 v^2)
    let recover = |r: f64, bq: f64| -> (f64, f64) {
        let c = a_const * (r - two_m) / (bq * r);
        let v = if c == 0.0 { 0.0 } else { (1.0 - (1.0 - 4.0 * e2 * c * c).sqrt()) / (2.0 * e2 * c) };
        let x = bq / ((r - two_m) * (r - two_m) * (1.0 + e2 * v * v) / (1.0 - e2 * v * v));
        (x, v)
    };
    let rhs = |r: f64, bq: f64| -> f64 {
        let (x, v) = recover(r, bq);
        let fac = (1.0 + e2 * v * v) / (1.0 - e2 * v * v);
        2.0 * p.mass_m * (r - two_m) / r * fac * x + 2.0 * (r - two_m) * (r - two_m) / r * x
    };
    let gam = 1.0 - e2 * b.v0 * b.v0;
    let mut bq =
        (b.r0 - two_m) * (b.r0 - two_m) * (1.0 + e2 * b.v0 * b.v0) / gam * b.rho0;
    let mut r = b.r0;
    let n = 20_000;
    let h = (r_end - r) / n as f64;
    let mut worst = 0.0_f64;
    for i in 0..n {
        let k1 = rhs(r, bq);
        let k2 = rhs(r + 0.5 * h, bq + 0.5 * h * k1);
        let k3 = rhs(r + 0.5 * h, bq + 0.5 * h * k2);
        let k4 = rhs(r + h, bq + h * k3);
        bq += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        r += h;
        if (i + 1) % 2000 == 0 {
            let (rho_num, v_num) = recover(r, bq);
            let s = stiff_steady(r, b, p)?;
            worst = worst
                .max((rho_num - s.rho).abs() / s.rho)
                .max((v_num - s.v).abs() / s.v.abs().max(1e-30));
        }
    }
    Ok(worst)
}

/// 5. Fuzzed Riemann problems: middle state on both wave curves, exact jump
/// conditions at shocks, strict Lax inequalities, invariants constant across
/// rarefactions.
fn c5_riemann_soundness() -> Result<CriterionResult> {
    let p = PhysParams::relativistic(1.0, 0.3, 1.0)?;
    let r0 = 4.0;
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut worst_curve = 0.0_f64;
    let mut worst_rh = 0.0_f64;
    let mut worst_inv = 0.0_f64;
    let mut lax_violations = 0usize;
    let mut failures = 0usize;
    for _ in 0..10_000 {
        let l = FluidState::new(rng.gen_range(-3.0..3.0_f64).exp(), rng.gen_range(-0.95..0.95), &p)?;
        let r = FluidState::new(rng.gen_range(-3.0..3.0_f64).exp(), rng.gen_range(-0.95..0.95), &p)?;
        let fan = match solve_riemann(l, r, r0, &p) {
            Ok(f) => f,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let m = fan.middle;
        let (lam_l, _) = eigenvalues(l, r0, &p)?;
        let (lam_m, mu_m) = eigenvalues(m, r0, &p)?;
        let (_, mu_r) = eigenvalues(r, r0, &p)?;
        for (wave, family) in [(&fan.wave1, WaveFamily::One), (&fan.wave2, WaveFamily::Two)] {
            let (outer, inner) = match family {
                WaveFamily::One => (l, m),
                WaveFamily::Two => (r, m),
            };
            let strength = (inner.rho.ln() - outer.rho.ln()).abs();
            match wave.kind {
                WaveKind::Shock { speed } => {
                    let (expect, _) = shock_state(outer, inner.rho, family, r0, &p)?;
                    worst_curve = worst_curve.max((expect.v - inner.v).abs());
                    let (a, b) = (wave.left_state, wave.right_state);
                    let (ua, ub) = (conserved(a, r0, &p)?, conserved(b, r0, &p)?);
                    let (fa, fb) = (flux(a, r0, &p)?, flux(b, r0, &p)?);
                    let scale = fa.u1.abs().max(fb.u2.abs()).max(1.0);
                    worst_rh = worst_rh
                        .max((speed * (ub.u1 - ua.u1) - (fb.u1 - fa.u1)).abs() / scale)
                        .max((speed * (ub.u2 - ua.u2) - (fb.u2 - fa.u2)).abs() / scale);
                    if strength > 1e-10 {
                        let strict = match family {
                            WaveFamily::One => {
                                lam_l > speed - 1e-12
                                    && speed > lam_m - 1e-12
                                    && speed < mu_m + 1e-12
                            }
                            WaveFamily::Two => {
                                mu_m > speed - 1e-12
                                    && speed > mu_r - 1e-12
                                    && speed > lam_m - 1e-12
                            }
                        };
                        if !strict {
                            lax_violations += 1;
                        }
                    }
                }
                WaveKind::Rarefaction { .. } => {
                    let expect = rarefaction_state(outer, inner.rho, family, &p)?;
                    worst_curve = worst_curve.max((expect.v - inner.v).abs());
                    let (io, im) =
                        (riemann_invariants(outer, &p)?, riemann_invariants(inner, &p)?);
                    let d = match family {
                        WaveFamily::One => (io.w - im.w).abs(),
                        WaveFamily::Two => (io.z - im.z).abs(),
                    };
                    worst_inv = worst_inv.max(d);
                }
                WaveKind::Contact { .. } => {}
            }
        }
    }
    let pass = failures == 0
        && lax_violations == 0
        && worst_curve < 1e-10
        && worst_rh < 1e-10
        && worst_inv < 1e-12;
    Ok(result(
        5,
        worst_curve.max(worst_rh),
        1e-10,
        pass,
        format!(
            "10000 fuzzed pairs: curve residual {worst_curve:.3e}, jump residual {worst_rh:.3e} \
             (tol 1e-10), invariant drift {worst_inv:.3e} (tol 1e-12), {lax_violations} Lax \
             violations, {failures} solver failures"
        ),
    ))
}

/// 6. Wave-strength subadditivity: splitting a jump through any intermediate
/// state never decreases the total strength.
fn c6_diminishing_strength() -> Result<CriterionResult> {
    let p = PhysParams::relativistic(1.0, 0.3, 1.0)?;
    let r0 = 4.0;
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut worst = f64::NEG_INFINITY;
    let mut failures = 0usize;
    let str_of = |a: FluidState, b: FluidState| -> Result<f64> {
        let fan = solve_riemann(a, b, r0, &p)?;
        Ok(wave_strength(a, fan.middle, b))
    };
    for _ in 0..10_000 {
        let mut draw = || -> Result<FluidState> {
            FluidState::new(rng.gen_range(-2.5..2.5_f64).exp(), rng.gen_range(-0.9..0.9), &p)
        };
        let (l, mid, r) = (draw()?, draw()?, draw()?);
        match (str_of(l, r), str_of(l, mid), str_of(mid, r)) {
            (Ok(slr), Ok(sl), Ok(sr)) => worst = worst.max(slr - sl - sr),
            _ => failures += 1,
        }
    }
    let pass = failures == 0 && worst <= 1e-12;
    Ok(result(
        6,
        worst,
        1e-12,
        pass,
        format!(
            "10000 fuzzed triples: max str(L,R) - str(L,*) - str(*,R) = {worst:.3e}, \
             {failures} solver failures"
        ),
    ))
}

/// 7. Generalized Riemann solutions: exact on equilibria, first-order edge
/// defects, second-order weak residual.
fn c7_grp_orders() -> Result<CriterionResult> {
    let p = PhysParams::relativistic(1.0, 0.3, 1.0)?;
    let b = SteadyBase::new(10.0, 1.0, 0.05, &p)?;
    let orbit = make_global_orbit(&b, &p)?;

    // Exactness on a shared equilibrium.
    let sol = solve_grp(0.0, 10.0, &orbit, &orbit, 0.1, &p)?;
    let mut worst_eq = 0.0_f64;
    for i in 0..20 {
        let t = 0.1 * i as f64 / 19.0;
        for j in 0..20 {
            let r = 9.0 + 2.0 * j as f64 / 19.0;
            let a = eval_grp(&sol, t, r)?;
            let e = eval_orbit(&orbit, r)?;
            worst_eq = worst_eq.max((a.rho - e.rho).abs()).max((a.v - e.v).abs());
        }
    }

    // Jump-condition defect at a genuine shock edge, over four slab lengths.
    let ul0 = eval_orbit(&orbit, 10.0)?;
    let (s_r, speed) = shock_state(ul0, 2.5, WaveFamily::One, 10.0, &p)?;
    let b_r = SteadyBase::new(10.0, s_r.rho, s_r.v, &p)?;
    let right = make_global_orbit(&b_r, &p)?;
    let dts = [0.08, 0.04, 0.02, 0.01];
    let mut defects = Vec::new();
    for &dt in &dts {
        let sol = solve_grp(0.0, 10.0, &orbit, &right, dt, &p)?;
        let rj = 10.0 + speed * dt;
        let sm = eval_grp(&sol, dt, rj - 1e-9)?;
        let sp = eval_grp(&sol, dt, rj + 1e-9)?;
        let (um, up) = (conserved(sm, rj, &p)?, conserved(sp, rj, &p)?);
        let (fm, fp) = (flux(sm, rj, &p)?, flux(sp, rj, &p)?);
        let d1 = speed * (up.u1 - um.u1) - (fp.u1 - fm.u1);
        let d2 = speed * (up.u2 - um.u2) - (fp.u2 - fm.u2);
        defects.push(d1.abs().max(d2.abs()));
    }
    let shock_slope = fitted_order(&dts, &defects);

    // Fan-edge mismatch across a genuine rarefaction, same slab lengths.
    let b_l = SteadyBase::new(10.0, 4.0, 0.05, &p)?;
    let b_r = SteadyBase::new(10.0, 0.5, 0.05, &p)?;
    let left = make_global_orbit(&b_l, &p)?;
    let right = make_global_orbit(&b_r, &p)?;
    let mut mismatches = Vec::new();
    for &dt in &dts {
        let sol = solve_grp(0.0, 10.0, &left, &right, dt, &p)?;
        let [e0, e1, _, _] = sol.wave_edges;
        let mut worst = 0.0_f64;
        for (edge, outside_left) in [(e0, true), (e1, false)] {
            let rj = 10.0 + edge * dt;
            let inner = eval_grp(&sol, dt, rj + if outside_left { 1e-10 } else { -1e-10 })?;
            let outer = eval_grp(&sol, dt, rj + if outside_left { -1e-10 } else { 1e-10 })?;
            worst = worst
                .max((inner.rho - outer.rho).abs() / outer.rho)
                .max((inner.v - outer.v).abs());
        }
        mismatches.push(worst);
    }
    let fan_slope = fitted_order(&dts, &mismatches);

    // Weak residual of the slab solution: second order in the slab length.
    let b_l = SteadyBase::new(10.0, 2.0, 0.05, &p)?;
    let b_r = SteadyBase::new(10.0, 0.8, -0.02, &p)?;
    let left = make_global_orbit(&b_l, &p)?;
    let right = make_global_orbit(&b_r, &p)?;
    let phi = |t: f64, r: f64| (1.0 + t) * (-(r - 10.0) * (r - 10.0) / 0.25).exp();
    let wdts = [0.08, 0.04, 0.02];
    let mut residuals = Vec::new();
    for &dt in &wdts {
        let sol = solve_grp(0.0, 10.0, &left, &right, dt, &p)?;
        residuals.push(weak_residual(&sol, dt, 0.5, &phi, 48, 96)?);
    }
    let weak_slope = fitted_order(&wdts, &residuals);

    let pass = worst_eq < 1e-12
        && (0.7..=1.3).contains(&shock_slope)
        && (0.7..=1.3).contains(&fan_slope)
        && (1.7..=2.3).contains(&weak_slope);
    Ok(result(
        7,
        worst_eq,
        1e-12,
        pass,
        format!(
            "equilibrium deviation {worst_eq:.3e} (tol 1e-12); fitted orders: shock edge \
             {shock_slope:.3} (want 0.7..1.3), fan edge {fan_slope:.3} (want 0.7..1.3), weak \
             residual {weak_slope:.3} (want 1.7..2.3)"
        ),
    ))
}

/// 8. The random-choice scheme preserves smooth and shock-bearing equilibria.
fn c8_well_balanced() -> Result<CriterionResult> {
    let p = PhysParams::relativistic(1.0, 0.3, 1.0)?;
    let cfg = SchemeConfig {
        dr: 0.05,
        dt: 0.02,
        r_lo: 2.5,
        r_hi: 20.0,
        t0: 0.0,
        t_end: 2.0, // 100 steps
        sequence: SampleSequence::VanDerCorput { offset: 0 },
        frozen_fan_only: false,
        snapshot_every: 0,
        params: p,
    };

    // Smooth global orbit.
    let base = SteadyBase::new(4.0, 1.0, 0.05, &p)?;
    let orbit = make_global_orbit(&base, &p)?;
    let sol = run(&cfg, &|r| eval_orbit(&orbit, r))?;
    let mut sup = 0.0_f64;
    for i in 0..700 {
        let r = 2.55 + (19.95 - 2.55) * i as f64 / 699.0;
        let s = sol.final_level.eval(r)?;
        let e = eval_orbit(&orbit, r)?;
        sup = sup.max((s.rho - e.rho).abs() / e.rho).max((s.v - e.v).abs());
    }

    // Shock-bearing global orbit: the discrete jump may hop one cell per
    // step; away from it the datum is exact.
    let base = SteadyBase::new(10.0, 1.0, 0.22, &p)?;
    let orbit = make_global_orbit(&base, &p)?;
    let r1 = orbit.shock_radius.expect("expected a standing shock");
    let mut cfg2 = cfg.clone();
    cfg2.snapshot_every = 1;
    let sol = run(&cfg2, &|r| eval_orbit(&orbit, r))?;
    let mut max_drift = 0.0_f64;
    let mut prev = r1;
    let mut min_strength = f64::INFINITY;
    for (_, lev) in sol
        .snapshots
        .iter()
        .chain(std::iter::once(&(100usize, sol.final_level.clone())))
    {
        let (loc, strength) = locate_jump(lev)?.expect("jump lost");
        max_drift = max_drift.max((loc - prev).abs());
        min_strength = min_strength.min(strength);
        prev = loc;
    }
    let (final_loc, _) = locate_jump(&sol.final_level)?.expect("jump lost");
    let mut l1 = 0.0_f64;
    let n = 700;
    for i in 0..n {
        let r = 2.55 + (19.95 - 2.55) * (i as f64 + 0.5) / n as f64;
        if (r - final_loc).abs() < 2.0 * cfg2.dr {
            continue;
        }
        let s = sol.final_level.eval(r)?;
        let e = eval_orbit(&orbit, r)?;
        l1 += ((s.rho - e.rho).abs() / e.rho + (s.v - e.v).abs()) * (19.95 - 2.55) / n as f64;
    }

    // The locator reports either the intrinsic in-cell shock radius or a
    // displaced interface node, so one step can move the reading by up to a
    // cell width (2 dr).
    let pass = sup < 1e-8 && l1 < 1e-8 && max_drift <= 2.0 * cfg2.dr + 1e-12 && min_strength > 0.5;
    Ok(result(
        8,
        sup.max(l1),
        1e-8,
        pass,
        format!(
            "smooth sup deviation {sup:.3e}, shock-datum L1 outside jump {l1:.3e} (tol 1e-8), \
             max jump drift/step {max_drift:.3} (<= one cell = {}), min strength {min_strength:.3}",
            2.0 * cfg2.dr
        ),
    ))
}

/// 9. Flat-space convergence of the random-choice scheme to the exact
/// self-similar fan, plus the wave-strength growth monitor.
fn c9_flat_convergence() -> Result<CriterionResult> {
    let p = PhysParams::minkowski(1.0, 0.3)?;
    let r_c = 5000.0;
    let sl = FluidState::new(1.5, 0.0, &p)?;
    let sr = FluidState::new(0.6, 0.0, &p)?;
    let fan = solve_riemann(sl, sr, r_c, &p)?;
    let drs = [1.0 / 50.0, 1.0 / 100.0, 1.0 / 200.0, 1.0 / 400.0];
    let mut errors = Vec::new();
    let mut c_monitor = 0.0_f64;
    for (idx, &dr) in drs.iter().enumerate() {
        let dt = dr / 2.5;
        let cfg = SchemeConfig {
            dr,
            dt,
            r_lo: r_c - 2.0,
            r_hi: r_c + 2.0,
            t0: 0.0,
            t_end: 0.5,
            // Offset 0 stalls here: with base-2 van der Corput the counting
            // error at the fixed move threshold s dt/dr doubles along the
            // dyadic resolution subsequence, freezing the shock-position
            // error across these four meshes. Offset 1 avoids the stall.
            sequence: SampleSequence::VanDerCorput { offset: 1 },
            frozen_fan_only: true,
            snapshot_every: 0,
            params: p,
        };
        let sol = run(&cfg, &|r| if r < r_c { Ok(sl) } else { Ok(sr) })?;
        let t = sol.final_level.t;
        let mut l1 = 0.0_f64;
        let n = 1200;
        for i in 0..n {
            let r = r_c - 1.2 + 2.4 * (i as f64 + 0.5) / n as f64;
            let s = sol.final_level.eval(r)?;
            let e = sample_fan(&fan, (r - r_c) / t);
            l1 += ((s.rho - e.rho).abs() + (s.v - e.v).abs()) * 2.4 / n as f64;
        }
        errors.push(l1);
        if idx == drs.len() - 1 {
            // Growth monitor on the finest run: L(J') - L(J) <= C (dt+dr) L(J).
            for w in sol.diagnostics.windows(2) {
                let (l_a, l_b) = (w[0].l_j, w[1].l_j);
                if l_a > 1e-12 {
                    c_monitor = c_monitor.max((l_b - l_a) / ((dt + dr) * l_a));
                }
            }
        }
    }
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    let order = fitted_order(&drs, &errors);
    let pass = monotone && order >= 0.6;
    Ok(result(
        9,
        order,
        0.6,
        pass,
        format!(
            "L1 errors [{}] for dr in {{1/50..1/400}}, monotone = {monotone}, fitted order \
             {order:.3} (want >= 0.6); strength growth constant C = {c_monitor:.3}",
            errors.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>().join(", ")
        ),
    ))
}

/// 10. Cross-limit consistency orders: quadratic in the inverse light speed,
/// linear in the mass, exact for the stiff member.
fn c10_limit_orders() -> Result<CriterionResult> {
    let base = PhysParams::relativistic(1.0, 0.3, 1.0)?;
    let nr = limit_consistency(&base, LimitKind::NonRelativistic, 1e-4)?;
    let mk = limit_consistency(&base, LimitKind::Minkowski, 1e-6)?;
    let stiff_base = PhysParams::stiff(1.0, 1.0)?;
    let st = limit_consistency(&stiff_base, LimitKind::Stiff, 0.0)?;
    let pass = (1.8..=2.2).contains(&nr.fitted_order)
        && (0.8..=1.2).contains(&mk.fitted_order)
        && st.max_deviation() == 0.0;
    Ok(result(
        10,
        nr.fitted_order,
        2.2,
        pass,
        format!(
            "classical-limit order {:.3} (want 1.8..2.2), flat-space order {:.3} (want \
             0.8..1.2), stiff deviation {:.3e} (want exact)",
            nr.fitted_order,
            mk.fitted_order,
            st.max_deviation()
        ),
    ))
}
