//! Closed-form results: the two-state population oscillation, wavenumbers
//! of the step region (paper-style approximation and the exact quartic
//! root), stationary scattering states in both regimes, the auxiliary
//! population profile and the apparent speed.

use crate::model::{EnergySpec, FieldPair, Grid, PhysicalParams, Regime};
use crate::C64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("|delta|/J0 = {ratio:.3} is below the guard {guard:.3}; the closed-form branch assumes a detuning well above the coupling")]
    GuardViolated { ratio: f64, guard: f64 },
    #[error("exact quartic roots are only real in the Allowed regime; use the approximate branch for Forbidden states")]
    ExactBranchUnsupported,
}

/// Which dispersion relation fixes k2 (and through k1 = m J0 / k2, k1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DispersionBranch {
    /// k2 = sqrt(2 m |delta|), valid for |delta| >> J0.
    Approximate,
    /// k2^2 is the larger root of k2^4 - 2 m delta k2^2 + (m J0)^2 = 0
    /// (Allowed regime only).
    ExactQuartic,
}

/// Default lower bound on |delta|/J0 accepted by the closed-form branches.
pub const DEFAULT_GUARD_RATIO: f64 = 2.0;

/// Wavenumbers of the scattering problem: `k0` incident, `k1` population
/// oscillation/build-up scale, `k2` propagation (Allowed) or decay
/// (Forbidden) constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumbers {
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
    pub exact: bool,
}

/// Incident and reflected amplitudes plus the step-region amplitude. The
/// second step-region coefficient is fixed by convention: -i*a (Allowed),
/// -a (Forbidden).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingCoefficients {
    pub c_i: C64,
    pub c_r: C64,
    pub a: C64,
}

/// Two-state population transfer from the initial condition (1, 0):
/// (cos(J0 t), -i sin(J0 t)).
pub fn two_state_evolve(j0: f64, t: f64) -> (C64, C64) {
    let phase = j0 * t;
    (C64::new(phase.cos(), 0.0), C64::new(0.0, -phase.sin()))
}

/// Fictitious speed scale sqrt(2|delta|/m) the population profile encodes.
pub fn apparent_speed(delta: f64, mass: f64) -> f64 {
    debug_assert!(delta != 0.0, "apparent_speed needs a nonzero detuning");
    (2.0 * delta.abs() / mass).sqrt()
}

pub fn wavenumbers(
    params: &PhysicalParams,
    spec: &EnergySpec,
    branch: DispersionBranch,
) -> Result<Wavenumbers, AnalyticError> {
    wavenumbers_with_guard(params, spec, branch, DEFAULT_GUARD_RATIO)
}

/// As `wavenumbers` with a caller-chosen guard on |delta|/J0. The guard is
/// an engineering default, not a physics claim; lowering it trades accuracy
/// of the approximate branch for reach.
pub fn wavenumbers_with_guard(
    params: &PhysicalParams,
    spec: &EnergySpec,
    branch: DispersionBranch,
    guard_ratio: f64,
) -> Result<Wavenumbers, AnalyticError> {
    let ratio = spec.delta.abs() / params.j0;
    if ratio < guard_ratio {
        return Err(AnalyticError::GuardViolated { ratio, guard: guard_ratio });
    }
    let k0 = (2.0 * params.mass * spec.energy).sqrt();
    match branch {
        DispersionBranch::Approximate => {
            let k2 = (2.0 * params.mass * spec.delta.abs()).sqrt();
            let k1 = params.mass * params.j0 / k2;
            Ok(Wavenumbers { k0, k1, k2, exact: false })
        }
        DispersionBranch::ExactQuartic => {
            if spec.regime != Regime::Allowed {
                return Err(AnalyticError::ExactBranchUnsupported);
            }
            let r = params.j0 / spec.delta;
            // larger root, so k2 -> sqrt(2 m delta) as J0/delta -> 0
            let k2 = (params.mass * spec.delta * (1.0 + (1.0 - r * r).sqrt())).sqrt();
            let k1 = params.mass * params.j0 / k2;
            Ok(Wavenumbers { k0, k1, k2, exact: true })
        }
    }
}

/// Amplitude matching at x = 0 for a given step-region amplitude `a`.
pub fn matching_coefficients(regime: Regime, k: &Wavenumbers, a: C64) -> MatchingCoefficients {
    let half = C64::new(0.5, 0.0);
    match regime {
        Regime::Allowed => {
            let r = C64::new(k.k2 / k.k0, 0.0);
            MatchingCoefficients {
                c_i: half * (C64::new(1.0, 0.0) + r) * a,
                c_r: half * (C64::new(1.0, 0.0) - r) * a,
                a,
            }
        }
        Regime::Forbidden => {
            let ir = C64::new(0.0, k.k2 / k.k0);
            MatchingCoefficients {
                c_i: half * (C64::new(1.0, 0.0) + ir) * a,
                c_r: half * (C64::new(1.0, 0.0) - ir) * a,
                a,
            }
        }
    }
}

/// Stationary scattering state on the grid for unit incident flux scale set
/// by the step-region amplitude `a`. Plane waves are not normalizable; only
/// ratios and densities relative to `a` are meaningful.
pub fn stationary_state(
    params: &PhysicalParams,
    spec: &EnergySpec,
    grid: &Grid,
    a: C64,
    branch: DispersionBranch,
) -> Result<FieldPair, AnalyticError> {
    let k = wavenumbers(params, spec, branch)?;
    Ok(stationary_state_from(spec, grid, &k, a))
}

/// Stationary state built from explicit wavenumbers (so callers may supply
/// guard-free or externally computed values).
pub fn stationary_state_from(
    spec: &EnergySpec,
    grid: &Grid,
    k: &Wavenumbers,
    a: C64,
) -> FieldPair {
    let coeff = matching_coefficients(spec.regime, k, a);
    let n = grid.n;
    let i0 = grid.step_index();
    let mut psi_m = vec![C64::new(0.0, 0.0); n];
    let mut psi_a = vec![C64::new(0.0, 0.0); n];
    for i in 0..n {
        let x = grid.x(i);
        if i < i0 {
            let ph = C64::new(0.0, k.k0 * x).exp();
            psi_m[i] = coeff.c_i * ph + coeff.c_r * ph.conj();
        } else {
            match spec.regime {
                Regime::Allowed => {
                    let carrier = C64::new(0.0, k.k2 * x).exp();
                    psi_m[i] = a * (k.k1 * x).cos() * carrier;
                    psi_a[i] = -C64::i() * a * (k.k1 * x).sin() * carrier;
                }
                Regime::Forbidden => {
                    let decay = (-k.k2 * x).exp();
                    psi_m[i] = a * (k.k1 * x).cosh() * decay;
                    psi_a[i] = -a * (k.k1 * x).sinh() * decay;
                }
            }
        }
    }
    FieldPair { psi_m, psi_a, grid: *grid, t: 0.0 }
}

/// Per-node auxiliary population profile with a validity mask.
#[derive(Debug, Clone)]
pub struct PaProfile {
    /// p_a(x) in [0, 1] where valid, NaN elsewhere.
    pub values: Vec<f64>,
    pub valid: Vec<bool>,
}

/// p_a(x) = |psi_a|^2 / (|psi_m|^2 + |psi_a|^2); nodes with zero total
/// density are flagged invalid and carry a NaN sentinel.
pub fn pa_profile(field: &FieldPair) -> PaProfile {
    let n = field.grid.n;
    let mut values = vec![f64::NAN; n];
    let mut valid = vec![false; n];
    for i in 0..n {
        let dm = field.psi_m[i].norm_sqr();
        let da = field.psi_a[i].norm_sqr();
        let tot = dm + da;
        if tot > 0.0 {
            values[i] = da / tot;
            valid[i] = true;
        }
    }
    PaProfile { values, valid }
}
