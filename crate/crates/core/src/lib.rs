//! Simulator for a quantum particle in two coupled 1-D waveguides with a
//! step potential at x = 0: closed-form stationary solutions, implicit
//! time-dependent evolution of the coupled pair, a pilot-wave particle
//! layer with stochastic inter-waveguide jumps, and the analysis pipeline
//! that infers a speed from the auxiliary-population profile.
//!
//! Units: SI meters and seconds with hbar = 1 throughout. Energies and
//! potentials carry 1/s, the effective mass carries s/m^2.

pub mod analysis;
pub mod analytic;
pub mod bohmian;
pub mod model;
pub mod tdse;

pub type C64 = num_complex::Complex64;

/// Compensated (Kahan) summation; norms and stored numbers are compared at
/// the 1e-12 level, which plain sequential summation over ~1e4 nodes cannot
/// guarantee.
pub fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}
