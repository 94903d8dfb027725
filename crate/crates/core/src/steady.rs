//! Equilibrium (steady-state) solutions: smooth branches from the first
//! integrals, sonic-point classification, continuous sonic-crossing profiles,
//! steady shocks, and globally defined (possibly discontinuous) orbits.
//!
//! The velocity profile of a smooth equilibrium is the zero set of an
//! algebraic function `G(r, v)` built from the two first integrals.  `G` is
//! strictly monotone in `v` on each side of the sound speed `k`, which makes
//! bracketed root finding reliable; the delicate part of the module is the
//! bookkeeping around sonic points, where branches end and the global
//! construction switches to a jump plus a sonic-crossing continuation.

use crate::error::{Error, Result};
use crate::model::{FluidState, ModelKind, PhysParams};
use crate::roots;

/// |P| below this is treated as exactly critical (the construction is
/// Lipschitz across the boundary, so the choice only selects a code path).
pub const CRITICAL_TOL: f64 = 1e-10;

/// Relative offset used to keep brackets strictly off v = k and off the
/// horizon.
const DELTA: f64 = 1e-12;

/// Number of knots cached per branch for query bracketing.
const KNOTS: usize = 64;

/// Base point of an equilibrium plus its cached first-integral constants.
///
/// For eps > 0 the constants are `d0 = r0^2 rho0^kappa v0` (stored as a
/// logarithm) and `c0 = (1-2M/r0) rho0^(1-kappa) / (1-eps^2 v0^2)`; for
/// eps = 0 they are `d0 = r0^2 rho0 v0` and the Bernoulli-type constant
/// `c0 = v0^2/2 + k^2 ln rho0 - m/r0`.
#[derive(Debug, Clone, Copy)]
pub struct SteadyBase {
    pub r0: f64,
    pub rho0: f64,
    pub v0: f64,
    /// Mass-flux-like first integral (exact value; see `ln_d0` for the form
    /// used in density recovery).
    pub d0: f64,
    /// Second first integral (Bernoulli-type for eps = 0).
    pub c0: f64,
    /// ln(r0^2 v0) + kappa ln rho0 for eps > 0 (NaN when v0 = 0).
    ln_d0: f64,
}

impl SteadyBase {
    /// Build a base point, validating the state against the parameters.
    pub fn new(r0: f64, rho0: f64, v0: f64, p: &PhysParams) -> Result<Self> {
        p.check_radius(r0)?;
        let s = FluidState::new(rho0, v0, p)?;
        let _ = s;
        let (d0, c0, ln_d0) = match p.kind {
            ModelKind::NonRelativistic => (
                r0 * r0 * rho0 * v0,
                0.5 * v0 * v0 + p.k * p.k * rho0.ln() - p.m / r0,
                (r0 * r0 * v0.abs()).ln() + rho0.ln(),
            ),
            ModelKind::Stiff => {
                let gam = 1.0 - p.eps * p.eps * v0 * v0;
                (
                    r0 * (r0 - 2.0 * p.mass_m) * rho0 * v0 / gam,
                    (1.0 - 2.0 * p.mass_m / r0) * rho0 / gam,
                    f64::NAN,
                )
            }
            _ => {
                let gam = 1.0 - p.eps * p.eps * v0 * v0;
                (
                    r0 * r0 * rho0.powf(p.kappa) * v0,
                    p.alpha(r0) * rho0.powf(1.0 - p.kappa) / gam,
                    (r0 * r0 * v0.abs()).ln() + p.kappa * rho0.ln(),
                )
            }
        };
        Ok(Self { r0, rho0, v0, d0, c0, ln_d0 })
    }

    /// Base with the velocity sign flipped (used for the v0 < 0 reflection).
    fn reflected(&self, p: &PhysParams) -> Result<Self> {
        Self::new(self.r0, self.rho0, -self.v0, p)
    }
}

/// Existence regime of sonic points for a given base.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SonicRegime {
    /// P > 0: the smooth branch covers the whole exterior.
    NoSonicPoint,
    /// P = 0 (within [`CRITICAL_TOL`]): the two sonic points coincide at
    /// `r_star` and a continuous crossing exists.
    CriticalSonic { r_star: f64 },
    /// P < 0: the smooth branch ends at one of two sonic radii.  For the
    /// flat-space model (M = 0) the lower radius degenerates to the domain
    /// boundary and is reported as 0.
    TwoSonicPoints { r_under: f64, r_bar: f64 },
}

/// Outcome of sonic classification: the P value, the regime, and the maximal
/// domain (lo, hi) of the smooth branch (hi may be infinite).
#[derive(Debug, Clone, Copy)]
pub struct SonicClassification {
    pub p_value: f64,
    pub regime: SonicRegime,
    pub domain: (f64, f64),
}

impl SonicClassification {
    /// True when `r` lies in the (open) smooth-branch domain.
    pub fn contains(&self, r: f64) -> bool {
        r > self.domain.0 && r < self.domain.1
    }
}

/// Radius where the smooth-branch derivative changes sign: the only possible
/// location of a coincident (critical) sonic point.
pub fn r_min(p: &PhysParams) -> f64 {
    if p.eps == 0.0 {
        p.m / (2.0 * p.k * p.k)
    } else {
        (2.0 - p.kappa) / (1.0 - p.kappa) * p.mass_m
    }
}

/// Velocity-side part of the sonic equation; strictly negative for v0 != k
/// with maximum 0 at v0 = k.
fn l_of_v(v0: f64, p: &PhysParams) -> f64 {
    if p.eps == 0.0 {
        let x = v0 / p.k;
        0.5 - 0.5 * x * x + x.ln()
    } else {
        let e2 = p.eps * p.eps;
        let ek2 = e2 * p.k * p.k;
        p.kappa / (1.0 - p.kappa) * ((1.0 - e2 * v0 * v0) / (1.0 - ek2)).ln() + (v0 / p.k).ln()
    }
}

/// Radius-side part of the sonic equation, normalized so that a sonic point
/// solves `r_side(r) = l_of_v(v0)`; minimized at [`r_min`] and +inf at both
/// domain ends (when M > 0, or m > 0 for eps = 0).
fn r_side(r: f64, base: &SteadyBase, p: &PhysParams) -> f64 {
    let r0 = base.r0;
    if p.eps == 0.0 {
        (r * r / (r0 * r0)).ln() + p.m / (p.k * p.k) * (1.0 / r - 1.0 / r0)
    } else {
        let two_m = 2.0 * p.mass_m;
        (r * r / (r0 * r0)).ln()
            + p.kappa / (1.0 - p.kappa) * ((r / (r - two_m)).ln() - (r0 / (r0 - two_m)).ln())
    }
}

/// The classification function P evaluated directly from (r0, v0).
///
/// Equal (up to rounding) to `r_side(r_min) - l_of_v(v0)`, so its sign
/// decides whether the sonic equation has zero or two roots.
pub fn p_value(r0: f64, v0: f64, p: &PhysParams) -> f64 {
    if p.eps == 0.0 {
        let m = p.m;
        let k = p.k;
        1.5 + (m * m / (4.0 * k * k * k * r0 * r0 * v0)).ln()
            + (v0 * v0 - 2.0 * m / r0) / (2.0 * k * k)
    } else {
        let ka = p.kappa;
        let mm = p.mass_m;
        let e2 = p.eps * p.eps;
        ((2.0 - ka) * (2.0 - ka) / ((1.0 - ka) * (1.0 - ka)) * mm * mm * p.k / (r0 * r0 * v0)).ln()
            + ka / (1.0 - ka)
                * (2.0 * (2.0 - ka) / (1.0 + ka) * (r0 - 2.0 * mm) / (r0 * (1.0 - e2 * v0 * v0)))
                    .ln()
    }
}

/// Residual of the steady-state relation: zero exactly on the velocity
/// profile through the base point.
pub fn eval_g(r: f64, v: f64, base: &SteadyBase, p: &PhysParams) -> f64 {
    let (r0, v0) = (base.r0, base.v0);
    if p.eps == 0.0 {
        0.5 * (v * v - v0 * v0) + p.k * p.k * (r0 * r0 * v0 / (r * r * v)).ln() - p.m / r
            + p.m / r0
    } else {
        let e2 = p.eps * p.eps;
        let two_m = 2.0 * p.mass_m;
        ((1.0 - e2 * v0 * v0) / (1.0 - e2 * v * v)).ln()
            + (1.0 - p.kappa) / p.kappa * (r0 * r0 * v0 / (r * r * v)).ln()
            - (r * (r0 - two_m) / (r0 * (r - two_m))).ln()
    }
}

/// Partial derivative of `eval_g` with respect to v (vanishes only at v = k).
pub fn eval_g_dv(v: f64, p: &PhysParams) -> f64 {
    if p.eps == 0.0 {
        v - p.k * p.k / v
    } else {
        let e2 = p.eps * p.eps;
        2.0 * e2 * v / (1.0 - e2 * v * v) - (1.0 - p.kappa) / p.kappa / v
    }
}

/// Derivative dv/dr along a smooth steady branch (blows up at sonic points).
pub fn steady_dvdr(s: FluidState, r: f64, p: &PhysParams) -> f64 {
    let v = s.v;
    if p.eps == 0.0 {
        v * (2.0 * p.k * p.k * r - p.m) / (r * r * (v * v - p.k * p.k))
    } else {
        let e2 = p.eps * p.eps;
        let two_m = 2.0 * p.mass_m;
        let c = (1.0 - p.kappa) / p.kappa * (r - two_m) - p.mass_m;
        let d = e2 * (v * v - p.k * p.k)
            / ((1.0 - e2 * v * v) * (1.0 - e2 * p.k * p.k));
        v * c / (r * (r - two_m) * d)
    }
}

/// Derivative of the density along a smooth steady branch, obtained by
/// differentiating the mass-flux first integral.
pub fn steady_drhodr(s: FluidState, r: f64, p: &PhysParams) -> f64 {
    let kappa = if p.eps == 0.0 { 1.0 } else { p.kappa };
    let dv = steady_dvdr(s, r, p);
    -(s.rho / kappa) * (2.0 / r + dv / s.v)
}

/// Locate the sonic radii and the maximal domain of the smooth branch.
pub fn classify(base: &SteadyBase, p: &PhysParams) -> Result<SonicClassification> {
    if p.kind == ModelKind::Stiff {
        return Err(Error::Query("stiff equilibria have no sonic structure; use the closed form".into()));
    }
    if !(base.v0 > 0.0) {
        return Err(Error::Query(format!("classification requires v0 > 0, got {}", base.v0)));
    }
    let wall = p.horizon();
    let lv = l_of_v(base.v0, p);

    // Flat space (no gravity well in the radius function): the sonic
    // equation r_side(r) = lv has exactly one root because r_side is
    // strictly increasing from -inf; the branch lives outside it.
    let flat = p.mass_m == 0.0 && (p.eps > 0.0 || p.m == 0.0);
    if flat {
        if base.v0 == p.k {
            return Ok(SonicClassification {
                p_value: 0.0,
                regime: SonicRegime::CriticalSonic { r_star: base.r0 },
                domain: (base.r0, f64::INFINITY),
            });
        }
        let factor = if p.eps == 0.0 { 1.0 / (p.k * p.k) } else { (1.0 - p.kappa) / p.kappa };
        let _ = factor;
        let r_star = base.r0 * (0.5 * lv).exp();
        return Ok(SonicClassification {
            p_value: f64::NEG_INFINITY,
            regime: SonicRegime::TwoSonicPoints { r_under: 0.0, r_bar: r_star },
            domain: (r_star, f64::INFINITY),
        });
    }

    let rmin = r_min(p);
    let pv = p_value(base.r0, base.v0, p);
    if pv > CRITICAL_TOL {
        return Ok(SonicClassification {
            p_value: pv,
            regime: SonicRegime::NoSonicPoint,
            domain: (wall, f64::INFINITY),
        });
    }
    if pv.abs() <= CRITICAL_TOL {
        let domain = if base.r0 >= rmin { (rmin, f64::INFINITY) } else { (wall, rmin) };
        return Ok(SonicClassification {
            p_value: pv,
            regime: SonicRegime::CriticalSonic { r_star: rmin },
            domain,
        });
    }

    // Two distinct roots of r_side(r) = lv, one on each side of rmin.
    let f = |r: f64| r_side(r, base, p) - lv;
    let (lo_a, lo_b) = roots::expand_left_towards(&f, rmin, wall, 2000)?;
    let r_under = roots::bisect(&f, lo_a, lo_b, None)?;
    let (hi_a, hi_b) = roots::expand_right(&f, rmin, 0.5 * rmin, 200)?;
    let r_bar = roots::bisect(&f, hi_a, hi_b, None)?;
    let domain = if base.r0 >= rmin { (r_bar, f64::INFINITY) } else { (wall, r_under) };
    Ok(SonicClassification {
        p_value: pv,
        regime: SonicRegime::TwoSonicPoints { r_under, r_bar },
        domain,
    })
}

/// Solve `eval_g(r, v) = 0` inside a velocity bracket, working in a
/// transformed coordinate so that roots keep full relative accuracy both
/// near v = 0 (log of v) and near the light-speed cap (log of the gap).
fn solve_g_bracket(
    r: f64,
    base: &SteadyBase,
    p: &PhysParams,
    vlo: f64,
    vhi: f64,
    supersonic: bool,
) -> Result<f64> {
    if supersonic && p.eps > 0.0 {
        let cap = 1.0 / p.eps;
        let f = |u: f64| eval_g(r, cap - u.exp(), base, p);
        let df = |u: f64| -u.exp() * eval_g_dv(cap - u.exp(), p);
        let u = roots::bisect(&f, (cap - vhi).ln(), (cap - vlo).ln(), Some(&df))?;
        Ok(cap - u.exp())
    } else {
        let f = |u: f64| eval_g(r, u.exp(), base, p);
        let df = |u: f64| u.exp() * eval_g_dv(u.exp(), p);
        Ok(roots::bisect(&f, vlo.ln(), vhi.ln(), Some(&df))?.exp())
    }
}

/// Solve `eval_g(r, v) = 0` for v on the requested side of the sound speed.
fn branch_root(r: f64, base: &SteadyBase, p: &PhysParams, supersonic: bool) -> Result<f64> {
    let g = |v: f64| eval_g(r, v, base, p);
    let k = p.k;
    if supersonic {
        // g(k+) <= 0 on the branch domain; g -> +inf towards the light speed
        // (eps > 0) or v -> inf (eps = 0).
        let vlo = k * (1.0 + DELTA);
        let glo = g(vlo);
        if glo > 0.0 {
            if glo < 1e-12 {
                return Ok(vlo); // root indistinguishable from v = k
            }
            return Err(Error::Numerics(format!("no supersonic root at r = {r} (g(k+) = {glo})")));
        }
        if p.eps > 0.0 {
            let cap = 1.0 / p.eps;
            // Step the gap to light speed down geometrically until g > 0.
            let mut u = (cap - vlo).ln() - 2.0;
            let mut it = 0;
            while g(cap - u.exp()) < 0.0 {
                u -= 2.0;
                it += 1;
                if it > 400 {
                    return Err(Error::Numerics(format!("no supersonic root bracket at r = {r}")));
                }
            }
            solve_g_bracket(r, base, p, vlo, cap - u.exp(), true)
        } else {
            let mut u = vlo.ln() + 1.0;
            let mut it = 0;
            while g(u.exp()) < 0.0 {
                u += 1.0;
                it += 1;
                if it > 400 {
                    return Err(Error::Numerics(format!("no supersonic root bracket at r = {r}")));
                }
            }
            solve_g_bracket(r, base, p, vlo, u.exp(), false)
        }
    } else {
        // g -> +inf as v -> 0+; g(k-) <= 0 on the branch domain.
        let vhi = k * (1.0 - DELTA);
        let ghi = g(vhi);
        if ghi > 0.0 {
            if ghi < 1e-12 {
                return Ok(vhi);
            }
            return Err(Error::Numerics(format!("no subsonic root at r = {r} (g(k-) = {ghi})")));
        }
        let mut u = vhi.ln() - 1.0;
        let mut it = 0;
        while g(u.exp()) < 0.0 {
            u -= 2.0;
            it += 1;
            if it > 400 {
                return Err(Error::Numerics(format!("no subsonic root bracket at r = {r}")));
            }
        }
        solve_g_bracket(r, base, p, u.exp(), vhi, false)
    }
}

/// Recover the density on a smooth branch from the mass-flux first integral.
fn rho_from_v(r: f64, v: f64, base: &SteadyBase, p: &PhysParams) -> f64 {
    if p.eps == 0.0 {
        (base.ln_d0 - (r * r * v).ln()).exp()
    } else {
        ((base.ln_d0 - (r * r * v).ln()) / p.kappa).exp()
    }
}

/// Evaluate the smooth branch through `base` at radius `r` (errors outside
/// the classified domain, naming the limiting sonic radius).
pub fn eval_smooth(r: f64, base: &SteadyBase, p: &PhysParams) -> Result<FluidState> {
    let class = classify(base, p)?;
    eval_smooth_classified(r, base, &class, p)
}

/// As [`eval_smooth`] with a precomputed classification.
pub fn eval_smooth_classified(
    r: f64,
    base: &SteadyBase,
    class: &SonicClassification,
    p: &PhysParams,
) -> Result<FluidState> {
    if !class.contains(r) && (r - class.domain.0).abs() > DELTA * r && (r - class.domain.1).abs() > DELTA * r {
        return Err(Error::Domain {
            r,
            detail: format!(
                "outside the smooth-branch domain ({}, {})",
                class.domain.0, class.domain.1
            ),
        });
    }
    let v = branch_root(r, base, p, base.v0 > p.k)?;
    let rho = rho_from_v(r, v, base, p);
    FluidState::new(rho, v, p)
}

/// Steady-shock partner of a state: the unique other state joined by a
/// zero-speed discontinuity (`v' = k^2 / v` plus the density jump relation).
pub fn steady_jump(s: FluidState, p: &PhysParams) -> Result<FluidState> {
    if s.v == 0.0 {
        return Err(Error::Query("steady jump undefined for v = 0".into()));
    }
    let k2 = p.k * p.k;
    let v_new = k2 / s.v;
    let e2 = p.eps * p.eps;
    let ratio = (1.0 - e2 * k2 * k2 / (s.v * s.v)) / (1.0 - e2 * s.v * s.v) * (s.v * s.v) / k2;
    if ratio <= 0.0 {
        return Err(Error::Inadmissible {
            rho: s.rho,
            v: v_new,
            detail: "steady jump produces a nonpositive density (|v| <= eps k^2)".into(),
        });
    }
    FluidState::new(s.rho * ratio, v_new, p)
}

/// The critical jump radius: the unique radius along the smooth branch where
/// jumping to the partner state makes that partner exactly critical.
pub fn critical_jump_radius(base: &SteadyBase, p: &PhysParams) -> Result<f64> {
    let class = classify(base, p)?;
    let (r_under, r_bar) = match class.regime {
        SonicRegime::TwoSonicPoints { r_under, r_bar } => (r_under, r_bar),
        _ => {
            return Err(Error::Query(
                "critical jump radius requires the two-sonic-point regime".into(),
            ))
        }
    };
    if r_under == 0.0 && p.mass_m == 0.0 {
        return Err(Error::Query(
            "flat-space sonic branches admit no critical jump radius".into(),
        ));
    }
    let rmin = r_min(p);
    let wall = p.horizon();
    // The branch runs from one sonic endpoint towards infinity (outer case)
    // or towards the horizon (inner case).
    let outer = base.r0 >= rmin;
    let r_sonic = if outer { r_bar } else { r_under };
    let q = |r: f64| -> Result<f64> {
        let s = eval_smooth_classified(r, base, &class, p)?;
        let w = p.k * p.k / s.v;
        let val = p_value(r, w, p);
        if !val.is_finite() {
            return Err(Error::Inadmissible {
                rho: s.rho,
                v: w,
                detail: "jump partner outside the admissible region".into(),
            });
        }
        Ok(val)
    };
    // At the sonic endpoint the jump partner is the sonic state itself and
    // the criticality function equals P of the original data, hence < 0;
    // march away from the endpoint until the sign flips.
    let mut off = 1e-8 * r_sonic;
    let mut neg = if outer { r_sonic + off } else { r_sonic - off };
    let qn = q(neg)?;
    if qn >= 0.0 {
        return Err(Error::Numerics(format!(
            "critical-jump scan: unexpected sign {qn} at the sonic endpoint"
        )));
    }
    let mut pos = None;
    for _ in 0..400 {
        off *= 1.5;
        let r_next = if outer {
            r_sonic + off
        } else {
            let cand = r_sonic - off;
            if cand <= wall { 0.5 * (neg + wall) } else { cand }
        };
        match q(r_next) {
            Ok(val) if val >= 0.0 => {
                pos = Some(r_next);
                break;
            }
            Ok(_) => neg = r_next,
            Err(_) => break, // partner left the admissible region first
        }
    }
    let mut pos = pos.ok_or_else(|| {
        Error::Numerics("critical-jump scan found no sign change along the branch".into())
    })?;
    for _ in 0..200 {
        let mid = 0.5 * (neg + pos);
        if mid == neg || mid == pos {
            break;
        }
        if q(mid)? < 0.0 {
            neg = mid;
        } else {
            pos = mid;
        }
        if (pos - neg).abs() < 1e-14 * (1.0 + mid.abs()) {
            break;
        }
    }
    Ok(0.5 * (neg + pos))
}

/// How a [`SteadyOrbit`] is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    /// One smooth branch (no sonic point, or a flat-space branch limited to
    /// its maximal domain), or the static v = 0 profile.
    Smooth,
    /// Continuous profile crossing v = k once at the critical radius.
    ContinuousSonicCrossing,
    /// Smooth branch plus one steady shock and a sonic-crossing continuation.
    ShockBearing,
    /// Stiff model: the explicit closed form.
    StiffClosedForm,
    /// eps = 0 pipeline (same construction, classical formulas).
    NonRelativistic,
}

/// One evaluatable branch: a base plus mode and a knot cache for query
/// bracketing.
#[derive(Debug, Clone)]
struct Branch {
    base: SteadyBase,
    class: SonicClassification,
    /// For a crossing branch, the radius where v - k changes sign.
    crossing: Option<f64>,
    /// Sorted (r, v) pairs used to seed queries.
    knots: Vec<(f64, f64)>,
}

impl Branch {
    fn new_plain(base: SteadyBase, class: SonicClassification, p: &PhysParams) -> Self {
        let mut b = Self { base, class, crossing: None, knots: Vec::new() };
        b.build_knots(p);
        b
    }

    fn new_crossing(base: SteadyBase, class: SonicClassification, r_star: f64, p: &PhysParams) -> Self {
        let mut b = Self { base, class, crossing: Some(r_star), knots: Vec::new() };
        b.build_knots(p);
        b
    }

    /// Tabulate (r, v) logarithmically around the base radius, clipped to the
    /// branch domain; queries use neighbouring knots as an initial bracket.
    fn build_knots(&mut self, p: &PhysParams) {
        let wall = p.horizon();
        let lo_lim = match self.crossing {
            Some(_) => wall + (self.base.r0 - wall) * 1e-6,
            None => self.class.domain.0.max(wall),
        };
        let lo = lo_lim + (self.base.r0 - lo_lim) * 1e-3;
        let hi = if self.class.domain.1.is_finite() && self.crossing.is_none() {
            self.class.domain.1 - (self.class.domain.1 - self.base.r0) * 1e-3
        } else {
            self.base.r0 * 64.0
        };
        if !(hi > lo) {
            return;
        }
        let (ll, lh) = (lo.ln(), hi.ln());
        for i in 0..KNOTS {
            let r = (ll + (lh - ll) * i as f64 / (KNOTS - 1) as f64).exp();
            if let Ok(s) = self.eval_uncached(r, p) {
                self.knots.push((r, s.v));
            }
        }
    }

    fn eval_uncached(&self, r: f64, p: &PhysParams) -> Result<FluidState> {
        match self.crossing {
            None => eval_smooth_classified(r, &self.base, &self.class, p),
            Some(r_star) => {
                if (r - r_star).abs() <= DELTA * r_star {
                    let rho = rho_from_v(r, p.k, &self.base, p);
                    return FluidState::new(rho, p.k, p);
                }
                let in_domain = self.class.contains(r);
                // Inside the branch domain keep the base's side of v = k;
                // beyond the crossing take the flipped side.  A base exactly
                // at the sound speed counts as subsonic in its domain.
                let supersonic = if in_domain { self.base.v0 > p.k } else { self.base.v0 <= p.k };
                let v = branch_root(r, &self.base, p, supersonic)?;
                let rho = rho_from_v(r, v, &self.base, p);
                FluidState::new(rho, v, p)
            }
        }
    }

    fn eval(&self, r: f64, p: &PhysParams) -> Result<FluidState> {
        // Seed from the knot table when possible: the root must lie within
        // the (padded) velocity range of the bracketing knots.
        if self.knots.len() >= 2 && r >= self.knots[0].0 && r <= self.knots[self.knots.len() - 1].0
        {
            let idx = match self.knots.binary_search_by(|kn| kn.0.partial_cmp(&r).unwrap()) {
                Ok(i) => i,
                Err(i) => i.saturating_sub(1),
            };
            let j = (idx + 1).min(self.knots.len() - 1);
            let (va, vb) = (self.knots[idx].1, self.knots[j].1);
            let (vmin, vmax) = (va.min(vb), va.max(vb));
            // Never let the padded bracket cross v = k from the wrong side.
            let crossing_here = self
                .crossing
                .map(|rs| (r - rs).abs() <= (self.knots[j].0 - self.knots[idx].0))
                .unwrap_or(false);
            if !crossing_here && vmin > 0.0 {
                let supers = vmin > p.k;
                // Pad multiplicatively (in the gap to light speed for a
                // relativistic supersonic branch) to keep relative accuracy.
                let (lo, hi) = if supers && p.eps > 0.0 {
                    let cap = 1.0 / p.eps;
                    (
                        (cap - (cap - vmin) * 2.0).max(p.k * (1.0 + DELTA)),
                        cap - (cap - vmax) * 0.5,
                    )
                } else if supers {
                    ((vmin * 0.5).max(p.k * (1.0 + DELTA)), vmax * 2.0)
                } else {
                    (vmin * 0.5, (vmax * 2.0).min(p.k * (1.0 - DELTA)))
                };
                let g = |v: f64| eval_g(r, v, &self.base, p);
                if lo < hi && g(lo) * g(hi) < 0.0 {
                    if let Ok(v) = solve_g_bracket(r, &self.base, p, lo, hi, supers) {
                        let rho = rho_from_v(r, v, &self.base, p);
                        return FluidState::new(rho, v, p);
                    }
                }
            }
        }
        self.eval_uncached(r, p)
    }
}

/// A globally defined equilibrium.
#[derive(Debug, Clone)]
pub struct SteadyOrbit {
    pub params: PhysParams,
    /// The (original, unreflected) base point.
    pub base: SteadyBase,
    pub classification: SonicClassification,
    pub kind: OrbitKind,
    /// Location of the steady shock, if any.
    pub shock_radius: Option<f64>,
    /// True when the orbit was built from |v0| and evaluation negates v.
    pub reflected: bool,
    /// Main branch (covers the whole domain unless shock-bearing).
    primary: Option<Branch>,
    /// Sonic-crossing continuation on the far side of the shock.
    continuation: Option<Branch>,
    /// True when the smooth part lies on [shock, +inf).
    smooth_is_outer: bool,
    /// Stored one-sided limits at the shock (inner radius side first).
    shock_limits: Option<(FluidState, FluidState)>,
    /// v = 0 everywhere; density from the second integral alone.
    static_profile: bool,
}

impl SteadyOrbit {
    /// One-sided limits (inner side, outer side) at the steady shock.
    pub fn shock_states(&self) -> Result<(FluidState, FluidState)> {
        self.shock_limits
            .ok_or_else(|| Error::Query("orbit has no steady shock".into()))
    }
}

/// The stiff-model equilibrium in closed form.
pub fn stiff_steady(r: f64, base: &SteadyBase, p: &PhysParams) -> Result<FluidState> {
    if p.kind != ModelKind::Stiff {
        return Err(Error::Query("stiff_steady requires the stiff model".into()));
    }
    p.check_radius(r)?;
    let (r0, v0) = (base.r0, base.v0);
    let e2 = p.eps * p.eps;
    let two_m = 2.0 * p.mass_m;
    let v = r0 * r0 / (r * r) * v0;
    let rho = (1.0 - r0.powi(4) * e2 * v0 * v0 / r.powi(4))
        * ((r0 - two_m) * r / (r0 * (r - two_m) * (1.0 - e2 * v0 * v0)))
        * base.rho0;
    FluidState::new(rho, v, p)
}

/// Build the globally defined equilibrium through a base point.
pub fn make_global_orbit(base: &SteadyBase, p: &PhysParams) -> Result<SteadyOrbit> {
    p.check_state(FluidState { rho: base.rho0, v: base.v0 })?;
    if p.kind == ModelKind::Stiff {
        return Ok(SteadyOrbit {
            params: *p,
            base: *base,
            classification: SonicClassification {
                p_value: f64::INFINITY,
                regime: SonicRegime::NoSonicPoint,
                domain: (p.horizon(), f64::INFINITY),
            },
            kind: OrbitKind::StiffClosedForm,
            shock_radius: None,
            reflected: false,
            primary: None,
            continuation: None,
            smooth_is_outer: true,
            shock_limits: None,
            static_profile: false,
        });
    }
    if base.v0 < 0.0 {
        let mut orbit = make_global_orbit(&base.reflected(p)?, p)?;
        orbit.base = *base;
        orbit.reflected = true;
        return Ok(orbit);
    }
    let nonrel = p.eps == 0.0;
    let kind_of = |k: OrbitKind| if nonrel && k == OrbitKind::Smooth { OrbitKind::NonRelativistic } else { k };
    if base.v0 == 0.0 {
        return Ok(SteadyOrbit {
            params: *p,
            base: *base,
            classification: SonicClassification {
                p_value: f64::INFINITY,
                regime: SonicRegime::NoSonicPoint,
                domain: (p.horizon(), f64::INFINITY),
            },
            kind: kind_of(OrbitKind::Smooth),
            shock_radius: None,
            reflected: false,
            primary: None,
            continuation: None,
            smooth_is_outer: true,
            shock_limits: None,
            static_profile: true,
        });
    }
    let class = classify(base, p)?;
    match class.regime {
        SonicRegime::NoSonicPoint => Ok(SteadyOrbit {
            params: *p,
            base: *base,
            classification: class,
            kind: kind_of(OrbitKind::Smooth),
            shock_radius: None,
            reflected: false,
            primary: Some(Branch::new_plain(*base, class, p)),
            continuation: None,
            smooth_is_outer: true,
            shock_limits: None,
            static_profile: false,
        }),
        SonicRegime::CriticalSonic { r_star } => Ok(SteadyOrbit {
            params: *p,
            base: *base,
            classification: class,
            kind: OrbitKind::ContinuousSonicCrossing,
            shock_radius: None,
            reflected: false,
            primary: Some(Branch::new_crossing(*base, class, r_star, p)),
            continuation: None,
            smooth_is_outer: true,
            shock_limits: None,
            static_profile: false,
        }),
        SonicRegime::TwoSonicPoints { r_under, .. } => {
            if r_under == 0.0 && p.mass_m == 0.0 {
                // Flat space: no discontinuous global continuation exists;
                // keep the maximal smooth branch.
                return Ok(SteadyOrbit {
                    params: *p,
                    base: *base,
                    classification: class,
                    kind: kind_of(OrbitKind::Smooth),
                    shock_radius: None,
                    reflected: false,
                    primary: Some(Branch::new_plain(*base, class, p)),
                    continuation: None,
                    smooth_is_outer: true,
                    shock_limits: None,
                    static_profile: false,
                });
            }
            let r1 = match critical_jump_radius(base, p) {
                Ok(r1) => r1,
                // Along a supersonic outer branch the jump criticality
                // function can stay negative over the whole branch: the
                // jumped partner state keeps a bounded sonic domain of its
                // own, so no standing shock yields a global continuation.
                // Keep the maximal smooth branch in that case.
                Err(Error::Numerics(_)) => {
                    return Ok(SteadyOrbit {
                        params: *p,
                        base: *base,
                        classification: class,
                        kind: kind_of(OrbitKind::Smooth),
                        shock_radius: None,
                        reflected: false,
                        primary: Some(Branch::new_plain(*base, class, p)),
                        continuation: None,
                        smooth_is_outer: true,
                        shock_limits: None,
                        static_profile: false,
                    });
                }
                Err(e) => return Err(e),
            };
            let s1 = eval_smooth_classified(r1, base, &class, p)?;
            let jumped = steady_jump(s1, p)?;
            let cont_base = SteadyBase::new(r1, jumped.rho, jumped.v, p)?;
            let cont_class = classify(&cont_base, p)?;
            let r_star = match cont_class.regime {
                SonicRegime::CriticalSonic { r_star } => r_star,
                // The jumped state is critical only up to root-finding
                // tolerance; fall back to the analytic critical radius.
                _ => r_min(p),
            };
            let smooth_is_outer = r1 >= r_min(p);
            let (inner, outer) = if smooth_is_outer { (jumped, s1) } else { (s1, jumped) };
            Ok(SteadyOrbit {
                params: *p,
                base: *base,
                classification: class,
                kind: if nonrel { OrbitKind::NonRelativistic } else { OrbitKind::ShockBearing },
                shock_radius: Some(r1),
                reflected: false,
                primary: Some(Branch::new_plain(*base, class, p)),
                continuation: Some(Branch::new_crossing(cont_base, cont_class, r_star, p)),
                smooth_is_outer,
                shock_limits: Some((inner, outer)),
                static_profile: false,
            })
        }
    }
}

/// eps = 0 pipeline: identical construction with the classical formulas.
pub fn nonrel_orbit(base: &SteadyBase, p: &PhysParams) -> Result<SteadyOrbit> {
    if p.kind != ModelKind::NonRelativistic {
        return Err(Error::Query("nonrel_orbit requires the eps = 0 model".into()));
    }
    make_global_orbit(base, p)
}

/// Evaluate a continuous sonic-crossing profile (critical data only).
pub fn eval_sonic_crossing(r: f64, base: &SteadyBase, p: &PhysParams) -> Result<FluidState> {
    let class = classify(base, p)?;
    let r_star = match class.regime {
        SonicRegime::CriticalSonic { r_star } => r_star,
        _ => {
            return Err(Error::Query(
                "eval_sonic_crossing requires critical (P = 0) data".into(),
            ))
        }
    };
    Branch::new_crossing(*base, class, r_star, p).eval_uncached(r, p)
}

/// Evaluate a global orbit at radius `r`.  At the shock radius itself the
/// smooth-branch side is returned (the closed side of its domain).
pub fn eval_orbit(orbit: &SteadyOrbit, r: f64) -> Result<FluidState> {
    let p = &orbit.params;
    p.check_radius(r)?;
    let s = eval_orbit_unreflected(orbit, r)?;
    if orbit.reflected {
        FluidState::new(s.rho, -s.v, p)
    } else {
        Ok(s)
    }
}

fn eval_orbit_unreflected(orbit: &SteadyOrbit, r: f64) -> Result<FluidState> {
    let p = &orbit.params;
    if orbit.static_profile {
        let rho = if p.eps == 0.0 {
            ((orbit.base.c0 + p.m / r) / (p.k * p.k)).exp()
        } else {
            (orbit.base.c0 / p.alpha(r)).powf(1.0 / (1.0 - p.kappa))
        };
        return FluidState::new(rho, 0.0, p);
    }
    if orbit.kind == OrbitKind::StiffClosedForm {
        return stiff_steady(r, &orbit.base, p);
    }
    match orbit.shock_radius {
        None => orbit.primary.as_ref().unwrap().eval(r, p),
        Some(r1) => {
            let on_smooth = if orbit.smooth_is_outer { r >= r1 } else { r < r1 };
            if on_smooth {
                orbit.primary.as_ref().unwrap().eval(r, p)
            } else {
                orbit.continuation.as_ref().unwrap().eval(r, p)
            }
        }
    }
}
