//! Physical parameters, primitive/conserved conversions, flux and source
//! evaluation, wave speeds, and Riemann-invariant coordinates for the model
//! family parametrised by (eps, k, M).
//!
//! The family covers four regimes sharing one interface:
//! * `Relativistic` — 0 < eps, 0 < k < 1/eps, M > 0;
//! * `NonRelativistic` — eps = 0 with a finite rescaled mass m (M = eps^2 m = 0,
//!   so there is no horizon but gravity survives in the source term);
//! * `Stiff` — k = 1/eps, both characteristic fields linearly degenerate;
//! * `Minkowski` — M = 0 with eps > 0, flat-space fluid in spherical symmetry.

use crate::error::{Error, Result};

/// Guard band for the velocity admissibility check: `|eps v|` beyond this is
/// rejected rather than clamped.
pub const V_GUARD: f64 = 1.0 - 1e-12;

/// Densities below this are rejected as effectively vacuum.
pub const RHO_MIN: f64 = 1e-300;

/// Which member of the model family a [`PhysParams`] selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// 0 < eps, 0 < k < 1/eps, M > 0.
    Relativistic,
    /// eps = 0 (classical fluid, no horizon, mass enters through m).
    NonRelativistic,
    /// k = 1/eps: extreme pressure law, both fields linearly degenerate.
    Stiff,
    /// M = 0 with eps > 0: special-relativistic fluid in flat space.
    Minkowski,
}

/// Character of the pressure law `p = k^2 rho` for a given (eps, k).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PressureLawClass {
    /// 0 < k < 1/eps: two real distinct wave speeds, both fields genuinely
    /// nonlinear.
    GenuinelyNonlinear,
    /// k = 1/eps: wave speeds independent of the state.
    LinearlyDegenerate,
    /// k = 0: the wave speeds coincide (pressureless limit).
    NonStrictlyHyperbolic,
}

/// Classify the pressure law for raw `(eps, k)` without constructing
/// [`PhysParams`] (which rejects `k = 0`).
pub fn classify_pressure_law(eps: f64, k: f64) -> PressureLawClass {
    if k == 0.0 {
        PressureLawClass::NonStrictlyHyperbolic
    } else if eps > 0.0 && eps * k == 1.0 {
        PressureLawClass::LinearlyDegenerate
    } else {
        PressureLawClass::GenuinelyNonlinear
    }
}

/// Model parameters: inverse light speed `eps`, sound speed `k`, black-hole
/// mass `M`, with the derived constants kept consistent at all times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    /// Inverse light speed, eps >= 0.
    pub eps: f64,
    /// Sound speed, 0 < k <= 1/eps (k = 1/eps selects the stiff model).
    pub k: f64,
    /// Black-hole mass M >= 0 (always eps^2 * m).
    pub mass_m: f64,
    /// Rescaled mass m = M / eps^2 (independent input when eps = 0).
    pub m: f64,
    /// kappa = (1 - eps^2 k^2) / (1 + eps^2 k^2); zero for the stiff model.
    pub kappa: f64,
    /// chi = 2 eps k / (1 + eps^2 k^2); one for the stiff model.
    pub chi: f64,
    /// Which member of the family these parameters select.
    pub kind: ModelKind,
}

impl PhysParams {
    /// Relativistic model with eps > 0: the rescaled mass is m = M / eps^2.
    pub fn relativistic(eps: f64, k: f64, mass_m: f64) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::Parameters(format!("eps must be positive and finite, got {eps}")));
        }
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::Parameters(format!("k must be positive and finite, got {k}")));
        }
        if eps * k > 1.0 {
            return Err(Error::Parameters(format!(
                "sound speed exceeds light speed: eps*k = {} > 1",
                eps * k
            )));
        }
        if !(mass_m >= 0.0) || !mass_m.is_finite() {
            return Err(Error::Parameters(format!("M must be nonnegative and finite, got {mass_m}")));
        }
        let ek2 = (eps * k) * (eps * k);
        let kind = if eps * k == 1.0 {
            ModelKind::Stiff
        } else if mass_m == 0.0 {
            ModelKind::Minkowski
        } else {
            ModelKind::Relativistic
        };
        Ok(Self {
            eps,
            k,
            mass_m,
            m: mass_m / (eps * eps),
            kappa: (1.0 - ek2) / (1.0 + ek2),
            chi: 2.0 * eps * k / (1.0 + ek2),
            kind,
        })
    }

    /// Non-relativistic model (eps = 0) with rescaled mass `m` given directly.
    pub fn non_relativistic(k: f64, m: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::Parameters(format!("k must be positive and finite, got {k}")));
        }
        if !(m >= 0.0) || !m.is_finite() {
            return Err(Error::Parameters(format!("m must be nonnegative and finite, got {m}")));
        }
        Ok(Self {
            eps: 0.0,
            k,
            mass_m: 0.0,
            m,
            kappa: 1.0,
            chi: 0.0,
            kind: ModelKind::NonRelativistic,
        })
    }

    /// Stiff model: k = 1/eps exactly.
    pub fn stiff(eps: f64, mass_m: f64) -> Result<Self> {
        Self::relativistic(eps, 1.0 / eps, mass_m)
    }

    /// Minkowski model: M = 0 with eps > 0.
    pub fn minkowski(eps: f64, k: f64) -> Result<Self> {
        Self::relativistic(eps, k, 0.0)
    }

    /// Horizon radius 2M (zero when eps = 0 or M = 0).
    pub fn horizon(&self) -> f64 {
        2.0 * self.mass_m
    }

    /// The lapse-like factor `1 - 2M/r`.
    pub fn alpha(&self, r: f64) -> f64 {
        1.0 - 2.0 * self.mass_m / r
    }

    /// Reject radii at or inside the horizon (or nonpositive radii).
    pub fn check_radius(&self, r: f64) -> Result<()> {
        if !(r > self.horizon()) || !r.is_finite() {
            return Err(Error::Domain {
                r,
                detail: format!("requires r > 2M = {}", self.horizon()),
            });
        }
        Ok(())
    }

    /// Admissibility check for a fluid state under these parameters.
    pub fn check_state(&self, s: FluidState) -> Result<()> {
        if !(s.rho >= RHO_MIN) || !s.rho.is_finite() {
            return Err(Error::Inadmissible {
                rho: s.rho,
                v: s.v,
                detail: format!("density below {RHO_MIN} or not finite"),
            });
        }
        if !s.v.is_finite() || (self.eps > 0.0 && (self.eps * s.v).abs() > V_GUARD) {
            return Err(Error::Inadmissible {
                rho: s.rho,
                v: s.v,
                detail: format!("|eps v| exceeds the guard band {V_GUARD}"),
            });
        }
        Ok(())
    }

    /// Classify the pressure law these parameters select.
    pub fn pressure_law(&self) -> PressureLawClass {
        classify_pressure_law(self.eps, self.k)
    }

    /// Uniform wave-speed bound `(1 - 2M/r)/eps` at radius `r` (infinite for
    /// the non-relativistic model).
    pub fn speed_bound(&self, r: f64) -> f64 {
        if self.eps == 0.0 {
            f64::INFINITY
        } else {
            self.alpha(r) / self.eps
        }
    }
}

/// Primitive fluid state: density and scalar velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidState {
    /// Mass-energy density, rho > 0.
    pub rho: f64,
    /// Scalar velocity, |v| < 1/eps when eps > 0.
    pub v: f64,
}

impl FluidState {
    /// Construct and validate a state against the model parameters.
    pub fn new(rho: f64, v: f64, p: &PhysParams) -> Result<Self> {
        let s = Self { rho, v };
        p.check_state(s)?;
        Ok(s)
    }
}

/// A pair of conserved densities (also used for flux and source pairs, which
/// live in the same vector space).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedPair {
    pub u1: f64,
    pub u2: f64,
}

/// Riemann-invariant coordinates of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantPair {
    /// Invariant constant across slow (family 1) waves; transported along
    /// the fast (mu) characteristics in smooth flow.
    pub w: f64,
    /// Invariant constant across fast (family 2) waves; transported along
    /// the slow (lambda) characteristics in smooth flow.
    pub z: f64,
}

impl InvariantPair {
    /// Scaled velocity `nu = (1/2eps)(1+eps v)/(1-eps v)`; only defined for
    /// eps > 0.
    pub fn nu(v: f64, eps: f64) -> f64 {
        (1.0 + eps * v) / (1.0 - eps * v) / (2.0 * eps)
    }
}

/// Wave speeds (lambda, mu) of a state at radius `r`.
///
/// One formula covers every kind: for eps = 0 the mass vanishes (M = 0) and
/// the denominators reduce to one, giving `v -+ k`; for k = 1/eps the speeds
/// collapse to the state-independent pair `-+(1 - 2M/r)/eps`.
pub fn eigenvalues(s: FluidState, r: f64, p: &PhysParams) -> Result<(f64, f64)> {
    p.check_radius(r)?;
    p.check_state(s)?;
    let a = p.alpha(r);
    let e2k = p.eps * p.eps * p.k;
    let lambda = a * (s.v - p.k) / (1.0 - e2k * s.v);
    let mu = a * (s.v + p.k) / (1.0 + e2k * s.v);
    Ok((lambda, mu))
}

/// Riemann invariants (w, z) of a state.
pub fn riemann_invariants(s: FluidState, p: &PhysParams) -> Result<InvariantPair> {
    p.check_state(s)?;
    let lr = s.rho.ln();
    if p.eps == 0.0 {
        Ok(InvariantPair {
            w: s.v + p.k * lr,
            z: s.v - p.k * lr,
        })
    } else {
        let vel = (p.eps * s.v).atanh() / p.eps;
        let b = p.k / (1.0 + (p.eps * p.k) * (p.eps * p.k));
        Ok(InvariantPair {
            w: vel + b * lr,
            z: vel - b * lr,
        })
    }
}

/// Exact inverse of [`riemann_invariants`].
pub fn state_from_invariants(iv: InvariantPair, p: &PhysParams) -> Result<FluidState> {
    if !iv.w.is_finite() || !iv.z.is_finite() {
        return Err(Error::Inadmissible {
            rho: f64::NAN,
            v: f64::NAN,
            detail: "non-finite invariants".to_string(),
        });
    }
    let (rho, v) = if p.eps == 0.0 {
        (((iv.w - iv.z) / (2.0 * p.k)).exp(), 0.5 * (iv.w + iv.z))
    } else {
        let b = p.k / (1.0 + (p.eps * p.k) * (p.eps * p.k));
        let rho = ((iv.w - iv.z) / (2.0 * b)).exp();
        let v = (p.eps * 0.5 * (iv.w + iv.z)).tanh() / p.eps;
        (rho, v)
    };
    FluidState::new(rho, v, p)
}

/// Conserved densities (U1, U2) of a state at radius `r`.
pub fn conserved(s: FluidState, r: f64, p: &PhysParams) -> Result<ConservedPair> {
    p.check_radius(r)?;
    p.check_state(s)?;
    let e = p.eps;
    let gam = 1.0 - e * e * s.v * s.v; // 1 - eps^2 v^2
    let e2k = e * e * p.k;
    Ok(ConservedPair {
        u1: r * r * (1.0 + e2k * e2k * s.v * s.v) / gam * s.rho,
        u2: r * (r - 2.0 * p.mass_m) * (1.0 + e * e * p.k * p.k) / gam * s.rho * s.v,
    })
}

/// Flux pair (F1, F2) of a state at radius `r`; note F1 = U2.
pub fn flux(s: FluidState, r: f64, p: &PhysParams) -> Result<ConservedPair> {
    p.check_radius(r)?;
    p.check_state(s)?;
    let e = p.eps;
    let gam = 1.0 - e * e * s.v * s.v;
    let rm = r - 2.0 * p.mass_m;
    Ok(ConservedPair {
        u1: r * rm * (1.0 + e * e * p.k * p.k) / gam * s.rho * s.v,
        u2: rm * rm * (s.v * s.v + p.k * p.k) / gam * s.rho,
    })
}

/// Geometric source pair (S1, S2) = (0, S2) of a state at radius `r`.
///
/// The middle term is written with the rescaled mass `m = M/eps^2` so the
/// same expression is exact for eps = 0 (where it reduces to
/// `S2 = 2 k^2 r rho - m rho`).
pub fn source(s: FluidState, r: f64, p: &PhysParams) -> Result<ConservedPair> {
    p.check_radius(r)?;
    p.check_state(s)?;
    let e = p.eps;
    let gam = 1.0 - e * e * s.v * s.v;
    let rm = r - 2.0 * p.mass_m;
    let e2k = e * e * p.k;
    let s2 = 3.0 * p.mass_m * (1.0 - 2.0 * p.mass_m / r) * (s.v * s.v + p.k * p.k) / gam * s.rho
        - p.m * rm / r * (1.0 + e2k * e2k * s.v * s.v) / gam * s.rho
        + 2.0 * rm * rm * p.k * p.k / r * s.rho;
    Ok(ConservedPair { u1: 0.0, u2: s2 })
}

/// Recover the primitive state from a conserved pair at radius `r`.
///
/// The ratio U2/U1 depends only on v (and r): it equals `c v / (1 + eps^4 k^2
/// v^2)` with `c = (1-2M/r)(1+eps^2 k^2)`, which is strictly monotone on the
/// admissible range, so the small root of the quadratic is the unique
/// admissible velocity.
pub fn primitive_from_conserved(c: ConservedPair, r: f64, p: &PhysParams) -> Result<FluidState> {
    p.check_radius(r)?;
    if !(c.u1 > 0.0) || !c.u1.is_finite() || !c.u2.is_finite() {
        return Err(Error::Inadmissible {
            rho: c.u1,
            v: c.u2,
            detail: "conserved pair requires finite values and u1 > 0".to_string(),
        });
    }
    let e = p.eps;
    let e2k = e * e * p.k;
    let q = c.u2 / c.u1;
    let cc = p.alpha(r) * (1.0 + e * e * p.k * p.k);
    let disc = cc * cc - 4.0 * e2k * e2k * q * q;
    if disc < 0.0 {
        return Err(Error::Inadmissible {
            rho: c.u1,
            v: c.u2,
            detail: "conserved pair outside the image of admissible states".to_string(),
        });
    }
    let v = 2.0 * q / (cc + disc.sqrt());
    let gam = 1.0 - e * e * v * v;
    if gam <= 0.0 {
        return Err(Error::Inadmissible {
            rho: c.u1,
            v,
            detail: "implied |eps v| >= 1".to_string(),
        });
    }
    let rho = c.u1 * gam / (r * r * (1.0 + e2k * e2k * v * v));
    FluidState::new(rho, v, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(eps: f64, k: f64, mass: f64) -> PhysParams {
        PhysParams::relativistic(eps, k, mass).unwrap()
    }

    #[test]
    fn derived_constants_are_consistent() {
        let p = params(1.0, 0.3, 1.0);
        assert_eq!(p.m, 1.0);
        assert!((p.kappa - (1.0 - 0.09) / (1.0 + 0.09)).abs() < 1e-16);
        assert!((p.chi - 0.6 / 1.09).abs() < 1e-16);
        assert_eq!(p.kind, ModelKind::Relativistic);

        let st = PhysParams::stiff(2.0, 1.0).unwrap();
        assert_eq!(st.kind, ModelKind::Stiff);
        assert_eq!(st.kappa, 0.0);
        assert_eq!(st.chi, 1.0);

        let mk = PhysParams::minkowski(1.0, 0.5).unwrap();
        assert_eq!(mk.kind, ModelKind::Minkowski);
        assert_eq!(mk.horizon(), 0.0);

        let nr = PhysParams::non_relativistic(0.4, 2.0).unwrap();
        assert_eq!(nr.kind, ModelKind::NonRelativistic);
        assert_eq!(nr.mass_m, 0.0);
        assert_eq!(nr.m, 2.0);
        assert_eq!(nr.kappa, 1.0);
    }

    #[test]
    fn parameter_validation_rejects_bad_inputs() {
        assert!(PhysParams::relativistic(1.0, 1.5, 1.0).is_err()); // k > 1/eps
        assert!(PhysParams::relativistic(1.0, 0.0, 1.0).is_err());
        assert!(PhysParams::relativistic(1.0, 0.3, -1.0).is_err());
        assert!(PhysParams::non_relativistic(0.3, -2.0).is_err());
    }

    #[test]
    fn eigenvalues_at_rest_are_symmetric() {
        // v = 0 makes lambda = -mu = -(1 - 2M/r) k.
        let p = params(1.0, 0.3, 1.0);
        let s = FluidState::new(1.0, 0.0, &p).unwrap();
        let (l, mu) = eigenvalues(s, 4.0, &p).unwrap();
        assert!((l + 0.15).abs() < 1e-15);
        assert!((mu - 0.15).abs() < 1e-15);
    }

    #[test]
    fn sonic_state_annihilates_lambda() {
        let p = params(1.0, 0.3, 1.0);
        let s = FluidState::new(2.5, 0.3, &p).unwrap();
        for r in [2.5, 4.0, 50.0] {
            let (l, _) = eigenvalues(s, r, &p).unwrap();
            assert_eq!(l, 0.0);
        }
    }

    #[test]
    fn eigenvalues_vanish_at_horizon() {
        let p = params(1.0, 0.3, 1.0);
        let s = FluidState::new(1.0, 0.4, &p).unwrap();
        let (l, mu) = eigenvalues(s, 2.0 + 1e-12, &p).unwrap();
        assert!(l.abs() < 1e-11 && mu.abs() < 1e-11);
    }

    #[test]
    fn eigenvalues_reject_horizon_radius() {
        let p = params(1.0, 0.3, 1.0);
        let s = FluidState::new(1.0, 0.0, &p).unwrap();
        assert!(eigenvalues(s, 2.0, &p).is_err());
        assert!(eigenvalues(s, 1.0, &p).is_err());
    }

    #[test]
    fn stiff_eigenvalues_are_state_independent() {
        let p = PhysParams::stiff(1.0, 1.0).unwrap();
        let r = 5.0;
        let bound = p.alpha(r) / p.eps;
        for (rho, v) in [(1.0, 0.0), (3.0, 0.7), (0.2, -0.5)] {
            let s = FluidState::new(rho, v, &p).unwrap();
            let (l, mu) = eigenvalues(s, r, &p).unwrap();
            assert!((l + bound).abs() < 1e-14);
            assert!((mu - bound).abs() < 1e-14);
        }
    }

    #[test]
    fn invariants_vanish_at_unit_rest_state() {
        for p in [params(1.0, 0.3, 1.0), PhysParams::non_relativistic(0.5, 1.0).unwrap()] {
            let s = FluidState::new(1.0, 0.0, &p).unwrap();
            let iv = riemann_invariants(s, &p).unwrap();
            assert_eq!(iv.w, 0.0);
            assert_eq!(iv.z, 0.0);
        }
    }

    #[test]
    fn invariant_hand_value() {
        // rho = e, v = 0, eps = 1, k = 0.5: k/(1+eps^2 k^2) = 0.4.
        let p = params(1.0, 0.5, 1.0);
        let s = FluidState::new(std::f64::consts::E, 0.0, &p).unwrap();
        let iv = riemann_invariants(s, &p).unwrap();
        assert!((iv.w - 0.4).abs() < 1e-15);
        assert!((iv.z + 0.4).abs() < 1e-15);
        let back = state_from_invariants(iv, &p).unwrap();
        assert!((back.rho - std::f64::consts::E).abs() < 1e-14);
        assert_eq!(back.v, 0.0);
    }

    #[test]
    fn state_from_invariants_rejects_overflow() {
        let p = params(1.0, 0.5, 1.0);
        assert!(state_from_invariants(InvariantPair { w: 1e6, z: -1e6 }, &p).is_err());
    }

    #[test]
    fn conserved_hand_values() {
        let p = params(1.0, 0.3, 1.0);
        let s = FluidState::new(2.0, 0.0, &p).unwrap();
        let c = conserved(s, 4.0, &p).unwrap();
        assert!((c.u1 - 32.0).abs() < 1e-13);
        assert_eq!(c.u2, 0.0);
    }

    #[test]
    fn nonrelativistic_conserved_is_r2_weighted() {
        let p = PhysParams::non_relativistic(0.3, 1.0).unwrap();
        let s = FluidState::new(2.0, -1.5, &p).unwrap();
        let c = conserved(s, 3.0, &p).unwrap();
        assert_eq!(c.u1, 9.0 * 2.0);
        assert_eq!(c.u2, 9.0 * 2.0 * -1.5);
        let f = flux(s, 3.0, &p).unwrap();
        assert_eq!(f.u1, c.u2);
        assert_eq!(f.u2, 9.0 * 2.0 * (1.5 * 1.5 + 0.09));
    }

    #[test]
    fn flux_hand_value() {
        let p = params(1.0, 0.3, 1.0);
        let s = FluidState::new(2.0, 0.0, &p).unwrap();
        let f = flux(s, 4.0, &p).unwrap();
        assert_eq!(f.u1, 0.0);
        assert!((f.u2 - 0.72).abs() < 1e-15);
    }

    #[test]
    fn source_hand_value() {
        // S2 = 0.27 - 1 + 0.36 = -0.37 at v=0, r=4, M=1, rho=2, k=0.3.
        let p = params(1.0, 0.3, 1.0);
        let s = FluidState::new(2.0, 0.0, &p).unwrap();
        let src = source(s, 4.0, &p).unwrap();
        assert_eq!(src.u1, 0.0);
        assert!((src.u2 + 0.37).abs() < 1e-15);
    }

    #[test]
    fn nonrelativistic_source_form() {
        let p = PhysParams::non_relativistic(0.3, 2.0).unwrap();
        let s = FluidState::new(1.5, 0.7, &p).unwrap();
        let src = source(s, 5.0, &p).unwrap();
        assert!((src.u2 - (2.0 * 0.09 * 5.0 * 1.5 - 2.0 * 1.5)).abs() < 1e-14);
    }

    #[test]
    fn minkowski_source_is_geometric_only() {
        let p = PhysParams::minkowski(1.0, 0.3).unwrap();
        let s = FluidState::new(2.0, 0.4, &p).unwrap();
        let src = source(s, 3.0, &p).unwrap();
        assert!((src.u2 - 2.0 * 3.0 * 0.09 * 2.0).abs() < 1e-14);
    }

    #[test]
    fn primitive_roundtrip_hand_value() {
        let p = params(1.0, 0.3, 1.0);
        let s = primitive_from_conserved(ConservedPair { u1: 32.0, u2: 0.0 }, 4.0, &p).unwrap();
        assert!((s.rho - 2.0).abs() < 1e-14);
        assert_eq!(s.v, 0.0);
    }

    #[test]
    fn primitive_rejects_nonpositive_u1() {
        let p = params(1.0, 0.3, 1.0);
        assert!(primitive_from_conserved(ConservedPair { u1: 0.0, u2: 1.0 }, 4.0, &p).is_err());
        assert!(primitive_from_conserved(ConservedPair { u1: -3.0, u2: 1.0 }, 4.0, &p).is_err());
    }

    #[test]
    fn pressure_law_classification() {
        assert_eq!(classify_pressure_law(1.0, 0.3), PressureLawClass::GenuinelyNonlinear);
        assert_eq!(classify_pressure_law(1.0, 1.0), PressureLawClass::LinearlyDegenerate);
        assert_eq!(classify_pressure_law(1.0, 0.0), PressureLawClass::NonStrictlyHyperbolic);
        assert_eq!(params(1.0, 0.3, 1.0).pressure_law(), PressureLawClass::GenuinelyNonlinear);
    }

    #[test]
    fn admissibility_guard_rejects_near_light_speed() {
        let p = params(1.0, 0.3, 1.0);
        assert!(FluidState::new(1.0, 1.0 - 1e-13, &p).is_err());
        assert!(FluidState::new(1e-301, 0.0, &p).is_err());
        assert!(FluidState::new(1.0, 0.999, &p).is_ok());
    }

    #[test]
    fn eps_continuity_with_nonrelativistic_formulas() {
        // eps = 1e-6 relativistic quantities agree with eps = 0 to O(eps^2).
        let eps = 1e-6;
        let m = 2.0;
        let rel = PhysParams::relativistic(eps, 0.3, eps * eps * m).unwrap();
        let nr = PhysParams::non_relativistic(0.3, m).unwrap();
        let s = FluidState { rho: 1.7, v: 0.45 };
        let r = 3.0;
        let (l_r, mu_r) = eigenvalues(s, r, &rel).unwrap();
        let (l_n, mu_n) = eigenvalues(s, r, &nr).unwrap();
        assert!((l_r - l_n).abs() < 1e-10);
        assert!((mu_r - mu_n).abs() < 1e-10);
        let (f_r, f_n) = (flux(s, r, &rel).unwrap(), flux(s, r, &nr).unwrap());
        assert!((f_r.u1 - f_n.u1).abs() / f_n.u1.abs() < 1e-10);
        assert!((f_r.u2 - f_n.u2).abs() / f_n.u2.abs() < 1e-10);
        let (s_r, s_n) = (source(s, r, &rel).unwrap(), source(s, r, &nr).unwrap());
        assert!((s_r.u2 - s_n.u2).abs() < 1e-10);
    }
}
