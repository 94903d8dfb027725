//! Exact Riemann solver for the homogeneous system at a frozen radius.
//!
//! Wave curves are parametrized by density: shocks through the
//! Rankine-Hugoniot relations in the variable `nu = (1+eps v)/((1-eps v) 2eps)`
//! (a Mobius transform of the velocity that turns the jump relations into a
//! quadratic), rarefactions by constancy of the corresponding Riemann
//! invariant.  The middle state comes from a monotone mismatch function in
//! `ln rho`.  The stiff model degenerates to two contact discontinuities and
//! is dispatched separately.

use crate::error::{Error, Result};
use crate::model::{
    conserved, eigenvalues, flux, riemann_invariants, state_from_invariants, FluidState,
    InvariantPair, ModelKind, PhysParams,
};
use crate::roots;

/// Zero-strength threshold: waves with |delta ln rho| below this collapse to
/// a degenerate contact moving at the characteristic speed.
pub const ZERO_STRENGTH: f64 = 1e-14;

/// Vacuum guard for the middle-state search.
pub const RHO_VACUUM: f64 = 1e-250;

/// Characteristic family of a wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveFamily {
    /// Slow family (speed lambda).
    One,
    /// Fast family (speed mu).
    Two,
}

/// Shape of a single wave in the fan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaveKind {
    Shock { speed: f64 },
    Rarefaction { speed_lo: f64, speed_hi: f64 },
    Contact { speed: f64 },
}

/// One wave of the solution, with the states it joins.
#[derive(Debug, Clone, Copy)]
pub struct WaveDescriptor {
    pub family: WaveFamily,
    pub kind: WaveKind,
    pub left_state: FluidState,
    pub right_state: FluidState,
}

impl WaveDescriptor {
    /// Leftmost and rightmost propagation speeds of the wave.
    pub fn span(&self) -> (f64, f64) {
        match self.kind {
            WaveKind::Shock { speed } | WaveKind::Contact { speed } => (speed, speed),
            WaveKind::Rarefaction { speed_lo, speed_hi } => (speed_lo, speed_hi),
        }
    }
}

/// Complete self-similar solution of a Riemann problem at frozen radius.
#[derive(Debug, Clone, Copy)]
pub struct RiemannFan {
    pub r0: f64,
    pub params: PhysParams,
    pub left: FluidState,
    pub middle: FluidState,
    pub right: FluidState,
    pub wave1: WaveDescriptor,
    pub wave2: WaveDescriptor,
}

/// Velocity on the rarefaction half-curve of the given family at density
/// `rho` (at or below the base density), preserving the family's invariant.
pub fn rarefaction_state(
    base: FluidState,
    rho: f64,
    family: WaveFamily,
    p: &PhysParams,
) -> Result<FluidState> {
    p.check_state(base)?;
    if rho > base.rho {
        return Err(Error::OffBranch(format!(
            "rarefaction half-curve requires rho <= {}, got {rho}",
            base.rho
        )));
    }
    let v = curve_velocity(base, rho.ln(), family, false, p);
    FluidState::new(rho, v, p)
}

/// State and speed on the shock half-curve of the given family at density
/// `rho` (at or above the base density).
pub fn shock_state(
    base: FluidState,
    rho: f64,
    family: WaveFamily,
    r0: f64,
    p: &PhysParams,
) -> Result<(FluidState, f64)> {
    p.check_state(base)?;
    p.check_radius(r0)?;
    if rho < base.rho {
        return Err(Error::OffBranch(format!(
            "shock half-curve requires rho >= {}, got {rho}",
            base.rho
        )));
    }
    let v = curve_velocity(base, rho.ln(), family, true, p);
    let s = FluidState::new(rho, v, p)?;
    let speed = jump_speed(base, s, r0, p)?;
    Ok((s, speed))
}

/// Velocity along a wave curve as a function of `ln rho`.
///
/// The full curve glues the rarefaction part (rho below base) to the shock
/// part (rho above base); `shock` selects the formula, and the two parts
/// agree to second order at the base.
fn curve_velocity(base: FluidState, ln_rho: f64, family: WaveFamily, shock: bool, p: &PhysParams) -> f64 {
    let sgn = match family {
        WaveFamily::One => -1.0,
        WaveFamily::Two => 1.0,
    };
    let d = ln_rho - base.rho.ln();
    if p.eps == 0.0 {
        if shock {
            let x = (0.5 * d).exp(); // sqrt(rho / rho_base)
            base.v + sgn * p.k * (x - 1.0 / x)
        } else {
            base.v + sgn * p.k * d
        }
    } else if shock {
        let e = p.eps;
        let x = (0.5 * d).exp();
        let b = sgn * p.chi * (x - 1.0 / x);
        let y = 0.5 * (b + (b * b + 4.0).sqrt()); // sqrt(nu / nu_base)
        // nu/nu_base = y^2 with nu = (1 + eps v)/((1 - eps v) 2 eps).
        let t = (1.0 + e * base.v) / (1.0 - e * base.v) * y * y;
        (t - 1.0) / ((t + 1.0) * e)
    } else {
        let e = p.eps;
        let c = p.k / (1.0 + e * e * p.k * p.k);
        let a = (e * base.v).atanh() + sgn * e * c * d;
        a.tanh() / e
    }
}

/// Propagation speed of the discontinuity joining two states, from the
/// Rankine-Hugoniot quotient of the first conservation component.
fn jump_speed(left: FluidState, right: FluidState, r0: f64, p: &PhysParams) -> Result<f64> {
    let ul = conserved(left, r0, p)?;
    let ur = conserved(right, r0, p)?;
    let fl = flux(left, r0, p)?;
    let fr = flux(right, r0, p)?;
    let du = ur.u1 - ul.u1;
    if du == 0.0 {
        // Zero-strength limit: fall back to the characteristic speed.
        let (lam, _) = eigenvalues(left, r0, p)?;
        return Ok(lam);
    }
    Ok((fr.u1 - fl.u1) / du)
}

/// Solve the Riemann problem with data (left | right) at frozen radius `r0`.
pub fn solve_riemann(left: FluidState, right: FluidState, r0: f64, p: &PhysParams) -> Result<RiemannFan> {
    p.check_state(left)?;
    p.check_state(right)?;
    p.check_radius(r0)?;
    if p.kind == ModelKind::Stiff {
        return solve_stiff(left, right, r0, p);
    }

    // Velocity reached from each side as a function of the middle density:
    // decreasing in rho along the 1-curve, increasing along the 2-curve, so
    // the mismatch is strictly decreasing with a unique zero.
    let v1 = |x: f64| curve_velocity(left, x, WaveFamily::One, x >= left.rho.ln(), p);
    let v2 = |x: f64| curve_velocity(right, x, WaveFamily::Two, x >= right.rho.ln(), p);
    let mismatch = |x: f64| v1(x) - v2(x);

    let mut x0 = 0.5 * (left.rho.ln() + right.rho.ln());
    let m0 = mismatch(x0);
    let (a, b) = if m0 == 0.0 {
        (x0, x0)
    } else if m0 > 0.0 {
        // Root lies at larger density.
        let mut step = 1.0;
        loop {
            let x1 = x0 + step;
            if mismatch(x1) <= 0.0 {
                break (x0, x1);
            }
            x0 = x1;
            step *= 2.0;
            if step > 1e6 {
                return Err(Error::Numerics("middle-state bracket failed upward".into()));
            }
        }
    } else {
        let mut step = 1.0;
        loop {
            let x1 = x0 - step;
            if x1 < RHO_VACUUM.ln() {
                return Err(Error::Numerics(
                    "middle state approaches vacuum; data too strong".into(),
                ));
            }
            if mismatch(x1) >= 0.0 {
                break (x1, x0);
            }
            x0 = x1;
            step *= 2.0;
        }
    };
    let mut x_m = if a == b { a } else { roots::bisect(&|x| mismatch(x), a, b, None)? };
    // Secant polish: bisection stops near 1e-13 in ln rho; a few secant
    // steps push the mismatch to machine precision so that zero-strength
    // waves are recognized exactly.
    let mut x_prev = x_m + 1e-8;
    let mut f_prev = mismatch(x_prev);
    for _ in 0..8 {
        let f_cur = mismatch(x_m);
        if f_cur == 0.0 || f_cur == f_prev {
            break;
        }
        let x_next = x_m - f_cur * (x_m - x_prev) / (f_cur - f_prev);
        if !x_next.is_finite() || (x_next - x_m).abs() > 1.0 {
            break;
        }
        x_prev = x_m;
        f_prev = f_cur;
        x_m = x_next;
    }
    if x_m < RHO_VACUUM.ln() {
        return Err(Error::Numerics("middle density below the vacuum guard".into()));
    }
    let rho_m = x_m.exp();
    let middle = FluidState::new(rho_m, 0.5 * (v1(x_m) + v2(x_m)), p)?;

    let wave1 = build_wave(left, middle, WaveFamily::One, r0, p)?;
    let wave2 = build_wave(middle, right, WaveFamily::Two, r0, p)?;
    Ok(RiemannFan { r0, params: *p, left, middle, right, wave1, wave2 })
}

/// Assemble a single wave descriptor between two states already known to lie
/// on one wave curve.
fn build_wave(
    left: FluidState,
    right: FluidState,
    family: WaveFamily,
    r0: f64,
    p: &PhysParams,
) -> Result<WaveDescriptor> {
    let pick = |s: FluidState| -> Result<f64> {
        let (lam, mu) = eigenvalues(s, r0, p)?;
        Ok(match family {
            WaveFamily::One => lam,
            WaveFamily::Two => mu,
        })
    };
    let dlr = (right.rho.ln() - left.rho.ln()).abs();
    if dlr < ZERO_STRENGTH {
        return Ok(WaveDescriptor {
            family,
            kind: WaveKind::Contact { speed: pick(left)? },
            left_state: left,
            right_state: right,
        });
    }
    // The base of the curve is the outer state (left for family 1, right for
    // family 2); density rises across a shock towards the middle.
    let compressive = match family {
        WaveFamily::One => right.rho > left.rho,
        WaveFamily::Two => left.rho > right.rho,
    };
    let kind = if compressive {
        WaveKind::Shock { speed: jump_speed(left, right, r0, p)? }
    } else {
        WaveKind::Rarefaction { speed_lo: pick(left)?, speed_hi: pick(right)? }
    };
    Ok(WaveDescriptor { family, kind, left_state: left, right_state: right })
}

/// Stiff model: both fields are linearly degenerate and the solution is two
/// contact discontinuities at speeds -(1-2M/r0)/eps and +(1-2M/r0)/eps.  The
/// slow invariant passes through the 1-contact, the fast one through the
/// 2-contact.
fn solve_stiff(left: FluidState, right: FluidState, r0: f64, p: &PhysParams) -> Result<RiemannFan> {
    let iv_l = riemann_invariants(left, p)?;
    let iv_r = riemann_invariants(right, p)?;
    let middle = state_from_invariants(InvariantPair { w: iv_l.w, z: iv_r.z }, p)?;
    let c = p.alpha(r0) / p.eps;
    let wave1 = WaveDescriptor {
        family: WaveFamily::One,
        kind: WaveKind::Contact { speed: -c },
        left_state: left,
        right_state: middle,
    };
    let wave2 = WaveDescriptor {
        family: WaveFamily::Two,
        kind: WaveKind::Contact { speed: c },
        left_state: middle,
        right_state: right,
    };
    Ok(RiemannFan { r0, params: *p, left, middle, right, wave1, wave2 })
}

/// Evaluate the self-similar solution at speed `xi`.
pub fn sample_fan(fan: &RiemannFan, xi: f64) -> FluidState {
    let (s1_lo, s1_hi) = fan.wave1.span();
    let (s2_lo, s2_hi) = fan.wave2.span();
    if xi < s1_lo {
        fan.left
    } else if xi <= s1_hi {
        match fan.wave1.kind {
            WaveKind::Rarefaction { .. } => fan_interior(fan, xi, WaveFamily::One),
            _ => fan.middle,
        }
    } else if xi < s2_lo {
        fan.middle
    } else if xi <= s2_hi {
        match fan.wave2.kind {
            WaveKind::Rarefaction { .. } => fan_interior(fan, xi, WaveFamily::Two),
            _ => fan.right,
        }
    } else {
        fan.right
    }
}

/// Interior of a rarefaction: invert the characteristic speed for v (the
/// eigenvalues depend on v only, so the inversion is a Mobius transform),
/// then recover the density from the conserved invariant.
fn fan_interior(fan: &RiemannFan, xi: f64, family: WaveFamily) -> FluidState {
    let p = &fan.params;
    let alpha = p.alpha(fan.r0);
    let y = xi / alpha;
    let e2k = p.eps * p.eps * p.k;
    let (v, base) = match family {
        WaveFamily::One => ((y + p.k) / (1.0 + e2k * y), fan.left),
        WaveFamily::Two => ((y - p.k) / (1.0 - e2k * y), fan.right),
    };
    let sgn = match family {
        WaveFamily::One => -1.0,
        WaveFamily::Two => 1.0,
    };
    let ln_rho = if p.eps == 0.0 {
        base.rho.ln() + sgn * (v - base.v) / p.k
    } else {
        let c = p.k / (1.0 + p.eps * p.eps * p.k * p.k);
        base.rho.ln() + sgn * ((p.eps * v).atanh() - (p.eps * base.v).atanh()) / (p.eps * c)
    };
    FluidState { rho: ln_rho.exp(), v }
}

/// Total wave strength of a fan: sum of |delta ln rho| over both waves.
pub fn wave_strength(left: FluidState, middle: FluidState, right: FluidState) -> f64 {
    (left.rho.ln() - middle.rho.ln()).abs() + (right.rho.ln() - middle.rho.ln()).abs()
}

/// Interaction diagnostic: strength of the merged Riemann problem versus the
/// summed strengths of the two incoming problems.  The caller asserts
/// `lhs <= rhs` (up to rounding) for the diminishing-total-variation
/// property.
pub fn check_interaction(
    left: FluidState,
    star: FluidState,
    right: FluidState,
    r0: f64,
    p: &PhysParams,
) -> Result<(f64, f64)> {
    let merged = solve_riemann(left, right, r0, p)?;
    let lhs = wave_strength(left, merged.middle, right);
    let fan_a = solve_riemann(left, star, r0, p)?;
    let fan_b = solve_riemann(star, right, r0, p)?;
    let rhs = wave_strength(left, fan_a.middle, star) + wave_strength(star, fan_b.middle, right);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel_params() -> PhysParams {
        PhysParams::relativistic(1.0, 0.3, 1.0).unwrap()
    }

    fn rh_residual(left: FluidState, right: FluidState, speed: f64, r0: f64, p: &PhysParams) -> f64 {
        let ul = conserved(left, r0, p).unwrap();
        let ur = conserved(right, r0, p).unwrap();
        let fl = flux(left, r0, p).unwrap();
        let fr = flux(right, r0, p).unwrap();
        let r1 = speed * (ur.u1 - ul.u1) - (fr.u1 - fl.u1);
        let r2 = speed * (ur.u2 - ul.u2) - (fr.u2 - fl.u2);
        let s1 = fl.u1.abs().max(fr.u1.abs()).max(1e-30);
        let s2 = fl.u2.abs().max(fr.u2.abs()).max(1e-30);
        (r1 / s1).abs().max((r2 / s2).abs())
    }

    #[test]
    fn rarefaction_preserves_invariant_and_base() {
        let p = rel_params();
        let base = FluidState::new(2.0, 0.1, &p).unwrap();
        let same = rarefaction_state(base, 2.0, WaveFamily::One, &p).unwrap();
        assert_eq!(same.v, base.v);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let rho = base.rho * rng.gen_range(1e-4..1.0_f64);
            let s = rarefaction_state(base, rho, WaveFamily::One, &p).unwrap();
            let w0 = riemann_invariants(base, &p).unwrap().w;
            let w1 = riemann_invariants(s, &p).unwrap().w;
            assert!((w0 - w1).abs() < 1e-13, "{w0} vs {w1}");
            let z = rarefaction_state(base, rho, WaveFamily::Two, &p).unwrap();
            let z0 = riemann_invariants(base, &p).unwrap().z;
            let z1 = riemann_invariants(z, &p).unwrap().z;
            assert!((z0 - z1).abs() < 1e-13);
        }
    }

    #[test]
    fn rarefaction_rejects_wrong_side() {
        let p = rel_params();
        let base = FluidState::new(1.0, 0.0, &p).unwrap();
        assert!(matches!(
            rarefaction_state(base, 2.0, WaveFamily::One, &p),
            Err(Error::OffBranch(_))
        ));
        assert!(matches!(
            shock_state(base, 0.5, WaveFamily::One, 4.0, &p),
            Err(Error::OffBranch(_))
        ));
    }

    #[test]
    fn eigenvalue_monotone_along_slow_rarefaction() {
        // lambda increases from left to right across a 1-rarefaction, i.e. as
        // the density drops below the base.
        let p = rel_params();
        let base = FluidState::new(1.0, 0.0, &p).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for i in (1..=20).rev() {
            let rho = 0.05 * i as f64;
            let s = rarefaction_state(base, rho, WaveFamily::One, &p).unwrap();
            let (lam, _) = eigenvalues(s, 4.0, &p).unwrap();
            assert!(lam > prev);
            prev = lam;
        }
    }

    #[test]
    fn shock_satisfies_rankine_hugoniot_and_lax() {
        let p = rel_params();
        let base = FluidState::new(1.0, 0.0, &p).unwrap();
        let (s, speed) = shock_state(base, 2.0, WaveFamily::One, 4.0, &p).unwrap();
        assert!(rh_residual(base, s, speed, 4.0, &p) < 1e-12);
        // Lax: lambda(left) > speed > lambda(right) for the 1-shock with the
        // base on the left.
        let (lam_l, _) = eigenvalues(base, 4.0, &p).unwrap();
        let (lam_r, _) = eigenvalues(s, 4.0, &p).unwrap();
        assert!(lam_l > speed && speed > lam_r, "{lam_l} > {speed} > {lam_r}");
        // Family 2: base on the right, Lax mirrored.
        let (s2, sp2) = shock_state(base, 2.0, WaveFamily::Two, 4.0, &p).unwrap();
        let speed2 = jump_speed(s2, base, 4.0, &p).unwrap();
        assert!((sp2 - speed2).abs() < 1e-12);
        assert!(rh_residual(s2, base, speed2, 4.0, &p) < 1e-12);
        let (_, mu_l) = eigenvalues(s2, 4.0, &p).unwrap();
        let (_, mu_r) = eigenvalues(base, 4.0, &p).unwrap();
        assert!(mu_l > speed2 && speed2 > mu_r);
    }

    #[test]
    fn weak_shock_speed_tends_to_characteristic() {
        let p = rel_params();
        let base = FluidState::new(1.0, 0.05, &p).unwrap();
        let (lam, mu) = eigenvalues(base, 5.0, &p).unwrap();
        let (_, s1) = shock_state(base, 1.0 + 1e-9, WaveFamily::One, 5.0, &p).unwrap();
        let (_, s2) = shock_state(base, 1.0 + 1e-9, WaveFamily::Two, 5.0, &p).unwrap();
        assert!((s1 - lam).abs() < 1e-6, "{s1} vs {lam}");
        assert!((s2 - mu).abs() < 1e-6, "{s2} vs {mu}");
    }

    #[test]
    fn shock_curve_slope_in_invariant_plane() {
        // Along the 1-shock curve the slow invariant is a contraction of the
        // fast one: 0 <= dw/dz < 1 by finite differences.  (The curve is
        // tangent to w = const at the base, so dz/dw diverges there; the
        // bounded slope is the inverse one.)
        let p = rel_params();
        let base = FluidState::new(1.0, 0.0, &p).unwrap();
        let iv = |rho: f64| {
            let (s, _) = shock_state(base, rho, WaveFamily::One, 4.0, &p).unwrap();
            riemann_invariants(s, &p).unwrap()
        };
        for rho in [1.1, 1.5, 2.0, 4.0, 8.0, 20.0] {
            let a = iv(rho);
            let b = iv(rho * 1.001);
            let slope = (b.w - a.w) / (b.z - a.z);
            assert!((0.0..1.0).contains(&slope), "rho={rho}: slope {slope}");
        }
    }

    #[test]
    fn shock_and_rarefaction_meet_to_second_order() {
        // Divided differences of v(rho) along the two parametrizations agree
        // at the base up to O(delta rho) in the second difference.
        let p = rel_params();
        let base = FluidState::new(1.0, 0.1, &p).unwrap();
        let mut prev_gap = f64::INFINITY;
        for h in [0.1, 0.05, 0.025] {
            let vs = |d: f64| curve_velocity(base, (1.0 + d).ln(), WaveFamily::One, true, &p);
            let vr = |d: f64| curve_velocity(base, (1.0 + d).ln(), WaveFamily::One, false, &p);
            let d2s = (vs(2.0 * h) - 2.0 * vs(h) + vs(0.0)) / (h * h);
            let d2r = (vr(2.0 * h) - 2.0 * vr(h) + vr(0.0)) / (h * h);
            let gap = (d2s - d2r).abs();
            assert!(gap < prev_gap);
            assert!(gap < 3.0 * h, "h={h}: second-difference gap {gap}");
            prev_gap = gap;
        }
    }

    #[test]
    fn monotone_coverage_of_wave_curves() {
        // nu strictly decreasing in rho along the full 1-curve, strictly
        // increasing along the full 2-curve.
        let p = rel_params();
        let base = FluidState::new(1.0, 0.2, &p).unwrap();
        let nu = |v: f64| InvariantPair::nu(v, p.eps);
        let mut prev1 = f64::INFINITY;
        let mut prev2 = f64::NEG_INFINITY;
        for i in 0..60 {
            let x = -6.0 + 12.0 * i as f64 / 59.0;
            let v1 = curve_velocity(base, x, WaveFamily::One, x >= 0.0, &p);
            let v2 = curve_velocity(base, x, WaveFamily::Two, x >= 0.0, &p);
            assert!(nu(v1) < prev1);
            assert!(nu(v2) > prev2);
            prev1 = nu(v1);
            prev2 = nu(v2);
        }
    }

    #[test]
    fn trivial_riemann_problem() {
        let p = rel_params();
        let s = FluidState::new(1.5, -0.2, &p).unwrap();
        let fan = solve_riemann(s, s, 4.0, &p).unwrap();
        assert_eq!(fan.middle.rho, s.rho);
        assert!(matches!(fan.wave1.kind, WaveKind::Contact { .. }));
        assert!(matches!(fan.wave2.kind, WaveKind::Contact { .. }));
    }

    #[test]
    fn curve_membership_yields_single_wave() {
        let p = rel_params();
        let left = FluidState::new(1.0, 0.1, &p).unwrap();
        let (right, speed) = shock_state(left, 3.0, WaveFamily::One, 4.0, &p).unwrap();
        let fan = solve_riemann(left, right, 4.0, &p).unwrap();
        assert!((fan.middle.rho - right.rho).abs() / right.rho < 1e-10);
        assert!((fan.middle.v - right.v).abs() < 1e-10);
        match fan.wave1.kind {
            WaveKind::Shock { speed: s } => assert!((s - speed).abs() < 1e-9),
            other => panic!("expected a 1-shock, got {other:?}"),
        }
        match fan.wave2.kind {
            WaveKind::Contact { .. } => {}
            other => panic!("expected zero-strength 2-wave, got {other:?}"),
        }
    }

    #[test]
    fn fuzzed_fans_are_consistent() {
        let p = rel_params();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..1000 {
            let l = FluidState::new((rng.gen_range(-2.0..2.0_f64)).exp(), rng.gen_range(-0.85..0.85), &p).unwrap();
            let r = FluidState::new((rng.gen_range(-2.0..2.0_f64)).exp(), rng.gen_range(-0.85..0.85), &p).unwrap();
            let fan = solve_riemann(l, r, 5.0, &p).unwrap();
            // Middle state on both curves.
            let x = fan.middle.rho.ln();
            let v1 = curve_velocity(l, x, WaveFamily::One, x >= l.rho.ln(), &p);
            let v2 = curve_velocity(r, x, WaveFamily::Two, x >= r.rho.ln(), &p);
            assert!((v1 - fan.middle.v).abs() < 1e-10);
            assert!((v2 - fan.middle.v).abs() < 1e-10);
            // Fan ordering and shock admissibility.
            let (_, hi1) = fan.wave1.span();
            let (lo2, _) = fan.wave2.span();
            assert!(hi1 <= lo2 + 1e-12);
            if let WaveKind::Shock { speed } = fan.wave1.kind {
                assert!(rh_residual(l, fan.middle, speed, 5.0, &p) < 1e-10);
                let (lam_l, _) = eigenvalues(l, 5.0, &p).unwrap();
                let (lam_m, _) = eigenvalues(fan.middle, 5.0, &p).unwrap();
                assert!(lam_l > speed && speed > lam_m);
            }
            if let WaveKind::Shock { speed } = fan.wave2.kind {
                assert!(rh_residual(fan.middle, r, speed, 5.0, &p) < 1e-10);
                let (_, mu_m) = eigenvalues(fan.middle, 5.0, &p).unwrap();
                let (_, mu_r) = eigenvalues(r, 5.0, &p).unwrap();
                assert!(mu_m > speed && speed > mu_r);
            }
        }
    }

    #[test]
    fn sampling_the_fan() {
        let p = rel_params();
        let l = FluidState::new(4.0, 0.0, &p).unwrap();
        let r = FluidState::new(0.5, 0.0, &p).unwrap();
        let fan = solve_riemann(l, r, 5.0, &p).unwrap();
        let (lo1, hi1) = fan.wave1.span();
        let (lo2, hi2) = fan.wave2.span();
        let far_l = sample_fan(&fan, lo1 - 0.1);
        assert_eq!(far_l.rho, l.rho);
        let mid = sample_fan(&fan, 0.5 * (hi1 + lo2));
        assert!((mid.rho - fan.middle.rho).abs() < 1e-14);
        let far_r = sample_fan(&fan, hi2 + 0.1);
        assert_eq!(far_r.rho, r.rho);
        // Interior of a rarefaction solves lambda(state) = xi.
        if let WaveKind::Rarefaction { speed_lo, speed_hi } = fan.wave1.kind {
            let xi = 0.5 * (speed_lo + speed_hi);
            let s = sample_fan(&fan, xi);
            let (lam, _) = eigenvalues(s, 5.0, &p).unwrap();
            assert!((lam - xi).abs() < 1e-10);
            // And it stays on the 1-curve from the left state.
            let w0 = riemann_invariants(l, &p).unwrap().w;
            let w1 = riemann_invariants(s, &p).unwrap().w;
            assert!((w0 - w1).abs() < 1e-12);
        } else {
            panic!("expected a 1-rarefaction for this data");
        }
    }

    #[test]
    fn wave_strength_examples() {
        let p = rel_params();
        let a = FluidState::new(1.0, 0.0, &p).unwrap();
        let b = FluidState::new(std::f64::consts::E, 0.1, &p).unwrap();
        assert_eq!(wave_strength(a, a, a), 0.0);
        assert!((wave_strength(a, b, a) - 2.0).abs() < 1e-14);
        // Fan strength decomposes over the two waves.
        let l = FluidState::new(2.0, 0.3, &p).unwrap();
        let r = FluidState::new(0.7, -0.2, &p).unwrap();
        let fan = solve_riemann(l, r, 5.0, &p).unwrap();
        let per_wave = (l.rho.ln() - fan.middle.rho.ln()).abs()
            + (r.rho.ln() - fan.middle.rho.ln()).abs();
        assert_eq!(wave_strength(l, fan.middle, r), per_wave);
    }

    #[test]
    fn interaction_is_diminishing() {
        let p = rel_params();
        let l = FluidState::new(2.0, 0.3, &p).unwrap();
        let r = FluidState::new(0.7, -0.2, &p).unwrap();
        // Degenerate interaction: star = left.
        let (lhs, rhs) = check_interaction(l, l, r, 5.0, &p).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
        // Exact splitting: star = middle of (left, right).
        let fan = solve_riemann(l, r, 5.0, &p).unwrap();
        let (lhs, rhs) = check_interaction(l, fan.middle, r, 5.0, &p).unwrap();
        assert!((lhs - rhs).abs() < 1e-10);
        // Fuzzed triples.
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..2000 {
            let mk = |rng: &mut ChaCha8Rng| {
                FluidState::new(
                    (rng.gen_range(-2.0..2.0_f64)).exp(),
                    rng.gen_range(-0.8..0.8),
                    &p,
                )
                .unwrap()
            };
            let (a, s, b) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
            let (lhs, rhs) = check_interaction(a, s, b, 5.0, &p).unwrap();
            assert!(lhs <= rhs + 1e-12, "{lhs} > {rhs}");
        }
    }

    #[test]
    fn stiff_model_gives_two_contacts() {
        let p = PhysParams::stiff(1.0, 1.0).unwrap();
        let l = FluidState::new(2.0, 0.3, &p).unwrap();
        let r = FluidState::new(0.5, -0.4, &p).unwrap();
        let fan = solve_riemann(l, r, 5.0, &p).unwrap();
        let c = p.alpha(5.0) / p.eps;
        match (fan.wave1.kind, fan.wave2.kind) {
            (WaveKind::Contact { speed: s1 }, WaveKind::Contact { speed: s2 }) => {
                assert!((s1 + c).abs() < 1e-14 && (s2 - c).abs() < 1e-14);
            }
            other => panic!("expected two contacts, got {other:?}"),
        }
        // Slow invariant continuous across the 1-contact, fast across the 2-.
        let iv_l = riemann_invariants(l, &p).unwrap();
        let iv_m = riemann_invariants(fan.middle, &p).unwrap();
        let iv_r = riemann_invariants(r, &p).unwrap();
        assert!((iv_l.w - iv_m.w).abs() < 1e-12);
        assert!((iv_r.z - iv_m.z).abs() < 1e-12);
        // Contacts satisfy Rankine-Hugoniot at their speeds.
        assert!(rh_residual(l, fan.middle, -c, 5.0, &p) < 1e-12);
        assert!(rh_residual(fan.middle, r, c, 5.0, &p) < 1e-12);
    }

    #[test]
    fn nonrelativistic_fan() {
        let p = PhysParams::non_relativistic(0.3, 1.0).unwrap();
        let l = FluidState::new(2.0, 0.5, &p).unwrap();
        let r = FluidState::new(1.0, -0.5, &p).unwrap();
        let fan = solve_riemann(l, r, 5.0, &p).unwrap();
        // Colliding streams: both waves compressive.
        assert!(matches!(fan.wave1.kind, WaveKind::Shock { .. }));
        assert!(matches!(fan.wave2.kind, WaveKind::Shock { .. }));
        assert!(fan.middle.rho > l.rho.max(r.rho));
        if let WaveKind::Shock { speed } = fan.wave1.kind {
            assert!(rh_residual(l, fan.middle, speed, 5.0, &p) < 1e-10);
        }
    }
}
