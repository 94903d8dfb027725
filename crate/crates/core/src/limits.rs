//! Limit members of the model family as first-class configurations.
//!
//! The family degenerates in three directions: `eps -> 0` (classical fluid),
//! `k -> 1/eps` (stiff fluid, both fields linearly degenerate), and `M -> 0`
//! (flat space).  This module exposes those limits explicitly and provides
//! the cross-limit consistency checks: the flux, source, and eigenvalues of
//! the full model converge to the limit model's at the expected rate in the
//! small parameter.

use crate::error::{Error, Result};
use crate::model::{
    eigenvalues, flux, source, FluidState, ModelKind, PhysParams,
};
use crate::riemann::{solve_riemann, RiemannFan, WaveFamily};

/// Which degenerate member of the family a [`LimitCase`] selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    /// k = 1/eps: both characteristic fields linearly degenerate.
    Stiff,
    /// eps = 0: classical fluid, mass enters through the rescaled m.
    NonRelativistic,
    /// M = 0 with eps > 0: special-relativistic flow in flat space.
    Minkowski,
    /// eps = 0 and m = 0: classical flow with no central mass.
    NonRelMinkowski,
}

/// A limit model together with parameters consistent with it.
#[derive(Debug, Clone, Copy)]
pub struct LimitCase {
    /// Which limit the parameters realise.
    pub kind: LimitKind,
    /// Parameters, validated against `kind` at construction.
    pub params: PhysParams,
}

impl LimitCase {
    /// Build a limit case, rejecting parameters that do not realise `kind`.
    pub fn new(kind: LimitKind, params: PhysParams) -> Result<Self> {
        let ok = match kind {
            LimitKind::Stiff => params.kind == ModelKind::Stiff,
            LimitKind::NonRelativistic => params.eps == 0.0,
            LimitKind::Minkowski => params.kind == ModelKind::Minkowski,
            LimitKind::NonRelMinkowski => params.eps == 0.0 && params.m == 0.0,
        };
        if !ok {
            return Err(Error::Parameters(format!(
                "parameters (eps={}, k={}, m={}) do not realise the {kind:?} limit",
                params.eps, params.k, params.m
            )));
        }
        Ok(Self { kind, params })
    }
}

/// Maximum deviations between the full model near a limit and the limit
/// model itself, with the fitted convergence order in the small parameter.
#[derive(Debug, Clone, Copy)]
pub struct DeviationReport {
    /// The limit under study.
    pub kind: LimitKind,
    /// The small parameter at which the full model was evaluated.
    pub small: f64,
    /// Max abs flux deviation over the state grid (at `small`).
    pub max_flux: f64,
    /// Max abs source deviation over the state grid (at `small`).
    pub max_source: f64,
    /// Max abs eigenvalue deviation over the state grid (at `small`).
    pub max_eigenvalue: f64,
    /// Order fitted from the overall deviation at `small` and `small / 2`;
    /// infinite when both deviations vanish (the limit is exact).
    pub fitted_order: f64,
}

impl DeviationReport {
    /// Largest of the three deviation measures.
    pub fn max_deviation(&self) -> f64 {
        self.max_flux.max(self.max_source).max(self.max_eigenvalue)
    }
}

/// The full-model parameters sitting at distance `small` from the limit
/// selected by `kind`, with the surviving parameters taken from `base`.
fn near_limit_params(base: &PhysParams, kind: LimitKind, small: f64) -> Result<PhysParams> {
    match kind {
        // small = eps; the rescaled mass m is held fixed, so M = eps^2 m.
        LimitKind::NonRelativistic => {
            PhysParams::relativistic(small, base.k, small * small * base.m)
        }
        LimitKind::NonRelMinkowski => PhysParams::relativistic(small, base.k, 0.0),
        // small = M.
        LimitKind::Minkowski => PhysParams::relativistic(base.eps, base.k, small),
        // small = 1/eps - k; small = 0 is the stiff model itself.
        LimitKind::Stiff => {
            PhysParams::relativistic(base.eps, 1.0 / base.eps - small, base.mass_m)
        }
    }
}

/// The limit model that `kind` converges to, with parameters from `base`.
fn limit_params(base: &PhysParams, kind: LimitKind) -> Result<PhysParams> {
    match kind {
        LimitKind::NonRelativistic => PhysParams::non_relativistic(base.k, base.m),
        LimitKind::NonRelMinkowski => PhysParams::non_relativistic(base.k, 0.0),
        LimitKind::Minkowski => PhysParams::minkowski(base.eps, base.k),
        LimitKind::Stiff => PhysParams::stiff(base.eps, base.mass_m),
    }
}

/// Max abs deviation of flux, source, and eigenvalues between two parameter
/// sets over a fixed grid of states and radii.
fn grid_deviation(full: &PhysParams, lim: &PhysParams) -> Result<(f64, f64, f64)> {
    let h = full.horizon().max(lim.horizon());
    let radii = [h + 1.0, h + 3.0, h + 8.0];
    let rhos = [0.3, 1.0, 3.0];
    let vels = [-0.5, -0.1, 0.0, 0.2, 0.6];
    let (mut df, mut ds, mut de) = (0.0_f64, 0.0_f64, 0.0_f64);
    for &r in &radii {
        for &rho in &rhos {
            for &v in &vels {
                let sf = FluidState::new(rho, v, full)?;
                let sl = FluidState::new(rho, v, lim)?;
                let ff = flux(sf, r, full)?;
                let fl = flux(sl, r, lim)?;
                df = df.max((ff.u1 - fl.u1).abs()).max((ff.u2 - fl.u2).abs());
                let gf = source(sf, r, full)?;
                let gl = source(sl, r, lim)?;
                ds = ds.max((gf.u1 - gl.u1).abs()).max((gf.u2 - gl.u2).abs());
                let (laf, muf) = eigenvalues(sf, r, full)?;
                let (lal, mul) = eigenvalues(sl, r, lim)?;
                de = de.max((laf - lal).abs()).max((muf - mul).abs());
            }
        }
    }
    Ok((df, ds, de))
}

/// Compare the full model at distance `small` from the limit selected by
/// `kind` against the limit model, over a fixed grid of states and radii.
///
/// The convergence order is fitted from the overall deviation at `small` and
/// at `small / 2`; when `small = 0` the comparison must be exact and the
/// order is reported as infinite.
pub fn limit_consistency(base: &PhysParams, kind: LimitKind, small: f64) -> Result<DeviationReport> {
    if !(small >= 0.0) || !small.is_finite() {
        return Err(Error::Parameters(format!(
            "small parameter must be nonnegative and finite, got {small}"
        )));
    }
    let lim = limit_params(base, kind)?;
    let full = near_limit_params(base, kind, small)?;
    let (max_flux, max_source, max_eigenvalue) = grid_deviation(&full, &lim)?;
    let d1 = max_flux.max(max_source).max(max_eigenvalue);
    let fitted_order = if small == 0.0 || d1 == 0.0 {
        if d1 != 0.0 {
            return Err(Error::Numerics(format!(
                "limit at small = 0 deviates by {d1}"
            )));
        }
        f64::INFINITY
    } else {
        let half = near_limit_params(base, kind, 0.5 * small)?;
        let (a, b, c) = grid_deviation(&half, &lim)?;
        let d2 = a.max(b).max(c);
        (d1 / d2).ln() / 2.0_f64.ln()
    };
    Ok(DeviationReport {
        kind,
        small,
        max_flux,
        max_source,
        max_eigenvalue,
        fitted_order,
    })
}

/// Riemann solver restricted to the stiff model: two contact discontinuities
/// at the state-independent speeds `-+(1 - 2M/r0)/eps`.
pub fn stiff_riemann(
    left: FluidState,
    right: FluidState,
    r0: f64,
    p: &PhysParams,
) -> Result<RiemannFan> {
    if p.kind != ModelKind::Stiff {
        return Err(Error::Parameters(format!(
            "stiff Riemann solver requires k = 1/eps, got eps={}, k={}",
            p.eps, p.k
        )));
    }
    solve_riemann(left, right, r0, p)
}

/// Which half of a classical wave curve to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// Compressive half, `rho >= rho_base`.
    Shock,
    /// Expansive half, `rho <= rho_base`.
    Rarefaction,
}

/// Classical (eps = 0) wave curves in closed form: shocks obey
/// `v - v_base = -+ k (sqrt(rho/rho_base) - sqrt(rho_base/rho))` and
/// rarefactions the logarithmic law `v - v_base = -+ k ln(rho/rho_base)`.
pub fn nonrel_riemann_curves(
    base: FluidState,
    rho: f64,
    family: WaveFamily,
    curve: CurveKind,
    p: &PhysParams,
) -> Result<FluidState> {
    if p.eps != 0.0 {
        return Err(Error::Parameters(format!(
            "classical wave curves require eps = 0, got {}",
            p.eps
        )));
    }
    p.check_state(base)?;
    let sgn = match family {
        WaveFamily::One => -1.0,
        WaveFamily::Two => 1.0,
    };
    let v = match curve {
        CurveKind::Shock => {
            if rho < base.rho {
                return Err(Error::OffBranch(format!(
                    "shock half-curve requires rho >= {}, got {rho}",
                    base.rho
                )));
            }
            let x = (rho / base.rho).sqrt();
            base.v + sgn * p.k * (x - 1.0 / x)
        }
        CurveKind::Rarefaction => {
            if rho > base.rho {
                return Err(Error::OffBranch(format!(
                    "rarefaction half-curve requires rho <= {}, got {rho}",
                    base.rho
                )));
            }
            base.v + sgn * p.k * (rho / base.rho).ln()
        }
    };
    FluidState::new(rho, v, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::riemann_invariants;
    use crate::riemann::{rarefaction_state, shock_state, wave_strength, WaveKind};

    #[test]
    fn limit_case_validates_kind() {
        let stiff = PhysParams::stiff(1.0, 1.0).unwrap();
        assert!(LimitCase::new(LimitKind::Stiff, stiff).is_ok());
        let rel = PhysParams::relativistic(1.0, 0.3, 1.0).unwrap();
        assert!(LimitCase::new(LimitKind::Stiff, rel).is_err());
        assert!(LimitCase::new(LimitKind::Minkowski, rel).is_err());
        let mink = PhysParams::minkowski(1.0, 0.3).unwrap();
        assert!(LimitCase::new(LimitKind::Minkowski, mink).is_ok());
        let nr = PhysParams::non_relativistic(0.3, 1.0).unwrap();
        assert!(LimitCase::new(LimitKind::NonRelativistic, nr).is_ok());
        assert!(LimitCase::new(LimitKind::NonRelMinkowski, nr).is_err());
        let nrm = PhysParams::non_relativistic(0.3, 0.0).unwrap();
        assert!(LimitCase::new(LimitKind::NonRelMinkowski, nrm).is_ok());
    }

    #[test]
    fn nonrel_limit_quadratic_in_eps() {
        let base = PhysParams::relativistic(1.0, 0.3, 1.0).unwrap();
        let rep = limit_consistency(&base, LimitKind::NonRelativistic, 1e-4).unwrap();
        assert!(rep.max_deviation() > 0.0);
        assert!(
            rep.fitted_order > 1.8 && rep.fitted_order < 2.2,
            "fitted order {}",
            rep.fitted_order
        );
    }

    #[test]
    fn nonrel_minkowski_limit_quadratic_in_eps() {
        let base = PhysParams::minkowski(1.0, 0.3).unwrap();
        let rep = limit_consistency(&base, LimitKind::NonRelMinkowski, 1e-4).unwrap();
        assert!(
            rep.fitted_order > 1.8 && rep.fitted_order < 2.2,
            "fitted order {}",
            rep.fitted_order
        );
    }

    #[test]
    fn minkowski_limit_linear_in_mass() {
        let base = PhysParams::relativistic(1.0, 0.3, 1.0).unwrap();
        let rep = limit_consistency(&base, LimitKind::Minkowski, 1e-6).unwrap();
        assert!(rep.max_deviation() > 0.0);
        assert!(
            rep.fitted_order > 0.8 && rep.fitted_order < 1.2,
            "fitted order {}",
            rep.fitted_order
        );
    }

    #[test]
    fn stiff_limit_is_exact() {
        let base = PhysParams::stiff(1.0, 1.0).unwrap();
        let rep = limit_consistency(&base, LimitKind::Stiff, 0.0).unwrap();
        assert_eq!(rep.max_flux, 0.0);
        assert_eq!(rep.max_source, 0.0);
        assert_eq!(rep.max_eigenvalue, 0.0);
        assert!(rep.fitted_order.is_infinite());
    }

    #[test]
    fn stiff_riemann_contacts_and_invariants() {
        let p = PhysParams::stiff(1.0, 1.0).unwrap();
        let r0 = 4.0;
        let l = FluidState::new(2.0, 0.3, &p).unwrap();
        let r = FluidState::new(0.7, -0.2, &p).unwrap();
        let fan = stiff_riemann(l, r, r0, &p).unwrap();
        let a = p.alpha(r0);
        match fan.wave1.kind {
            WaveKind::Contact { speed } => assert_eq!(speed, -a / p.eps),
            ref k => panic!("expected a contact, got {k:?}"),
        }
        match fan.wave2.kind {
            WaveKind::Contact { speed } => assert_eq!(speed, a / p.eps),
            ref k => panic!("expected a contact, got {k:?}"),
        }
        // w crosses the 1-wave unchanged, z crosses the 2-wave unchanged.
        let il = riemann_invariants(l, &p).unwrap();
        let im = riemann_invariants(fan.middle, &p).unwrap();
        let ir = riemann_invariants(r, &p).unwrap();
        assert!((im.w - il.w).abs() < 1e-13);
        assert!((im.z - ir.z).abs() < 1e-13);

        let same = stiff_riemann(l, l, r0, &p).unwrap();
        assert!(wave_strength(l, same.middle, l) < 1e-12);

        let gnl = PhysParams::relativistic(1.0, 0.3, 1.0).unwrap();
        assert!(stiff_riemann(l, r, r0, &gnl).is_err());
    }

    #[test]
    fn classical_shock_hand_value_and_branches() {
        let p = PhysParams::non_relativistic(0.3, 1.0).unwrap();
        let base = FluidState::new(1.0, 0.0, &p).unwrap();
        let s = nonrel_riemann_curves(base, 4.0, WaveFamily::One, CurveKind::Shock, &p).unwrap();
        assert!((s.v - (-0.45)).abs() < 1e-14);
        assert_eq!(s.rho, 4.0);

        let b = nonrel_riemann_curves(base, 1.0, WaveFamily::Two, CurveKind::Shock, &p).unwrap();
        assert_eq!(b.v, base.v);
        assert!(
            nonrel_riemann_curves(base, 0.5, WaveFamily::One, CurveKind::Shock, &p).is_err()
        );
        assert!(
            nonrel_riemann_curves(base, 2.0, WaveFamily::One, CurveKind::Rarefaction, &p)
                .is_err()
        );

        let rel = PhysParams::relativistic(1.0, 0.3, 1.0).unwrap();
        assert!(nonrel_riemann_curves(base, 4.0, WaveFamily::One, CurveKind::Shock, &rel).is_err());
    }

    #[test]
    fn classical_rarefaction_preserves_invariant() {
        let p = PhysParams::non_relativistic(0.4, 1.0).unwrap();
        let base = FluidState::new(2.0, 0.1, &p).unwrap();
        let s =
            nonrel_riemann_curves(base, 0.5, WaveFamily::One, CurveKind::Rarefaction, &p).unwrap();
        let ib = riemann_invariants(base, &p).unwrap();
        let is_ = riemann_invariants(s, &p).unwrap();
        assert!((ib.w - is_.w).abs() < 1e-13);
    }

    #[test]
    fn classical_curves_match_relativistic_at_small_eps() {
        let eps = 1e-5;
        let k = 0.3;
        let p0 = PhysParams::non_relativistic(k, 1.0).unwrap();
        let pe = PhysParams::relativistic(eps, k, eps * eps).unwrap();
        let r0 = 5.0;
        for &(rho0, v0) in &[(1.0, 0.0), (2.0, 0.4), (0.8, -0.3)] {
            let b0 = FluidState::new(rho0, v0, &p0).unwrap();
            let be = FluidState::new(rho0, v0, &pe).unwrap();
            for family in [WaveFamily::One, WaveFamily::Two] {
                let sc =
                    nonrel_riemann_curves(b0, 3.0 * rho0, family, CurveKind::Shock, &p0).unwrap();
                let (se, _) = shock_state(be, 3.0 * rho0, family, r0, &pe).unwrap();
                assert!((sc.v - se.v).abs() < 1e-8, "shock {family:?}: {} vs {}", sc.v, se.v);
                let rc =
                    nonrel_riemann_curves(b0, 0.4 * rho0, family, CurveKind::Rarefaction, &p0)
                        .unwrap();
                let re = rarefaction_state(be, 0.4 * rho0, family, &pe).unwrap();
                assert!((rc.v - re.v).abs() < 1e-8, "fan {family:?}: {} vs {}", rc.v, re.v);
            }
        }
    }

    #[test]
    fn near_degenerate_solver_matches_stiff() {
        let eps = 1.0;
        let ps = PhysParams::stiff(eps, 1.0).unwrap();
        let pn = PhysParams::relativistic(eps, (1.0 / eps) * (1.0 - 1e-10), 1.0).unwrap();
        assert_eq!(pn.kind, ModelKind::Relativistic);
        let r0 = 4.0;
        let l = FluidState::new(2.0, 0.3, &ps).unwrap();
        let r = FluidState::new(0.7, -0.2, &ps).unwrap();
        let fs = stiff_riemann(l, r, r0, &ps).unwrap();
        let fn_ = solve_riemann(l, r, r0, &pn).unwrap();
        assert!((fs.middle.rho - fn_.middle.rho).abs() < 1e-4);
        assert!((fs.middle.v - fn_.middle.v).abs() < 1e-4);
        let (s1, _) = fs.wave1.span();
        let (n1, _) = fn_.wave1.span();
        let (_, s2) = fs.wave2.span();
        let (_, n2) = fn_.wave2.span();
        assert!((s1 - n1).abs() < 1e-4);
        assert!((s2 - n2).abs() < 1e-4);
    }
}
