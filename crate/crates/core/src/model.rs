//! Domain types shared by every other module: physical parameters, energy
//! classification, the spatial grid and the piecewise potential profile.

use crate::{kahan_sum, C64};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),
    #[error("energy must be positive, got {0:e}")]
    NonPositiveEnergy(f64),
    #[error("delta = E - V0 + J0 = {delta:e} is within {tol:e} of the regime crossover; neither branch applies")]
    DegenerateCrossover { delta: f64, tol: f64 },
    #[error("grid needs at least 3 nodes, got {0}")]
    GridTooSmall(usize),
    #[error("grid bounds invalid: x_min {x_min:e} must be < x_max {x_max:e}")]
    BadGridBounds { x_min: f64, x_max: f64 },
    #[error("x = 0 does not fall on a grid node (nearest offset {offset:e} m, dx {dx:e} m)")]
    StepOffGrid { offset: f64, dx: f64 },
    #[error("grid must straddle the step: x_min < 0 <= x_max")]
    StepOutsideGrid,
    #[error("field array length {got} does not match grid node count {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("psi_a must vanish on hard-wall nodes (x < 0); node {index} is nonzero")]
    WallViolation { index: usize },
}

/// System constants in hbar = 1 units: `mass` in s/m^2, `v0` (step height)
/// and `j0` (inter-waveguide coupling) in 1/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub mass: f64,
    pub v0: f64,
    pub j0: f64,
}

impl PhysicalParams {
    pub fn new(mass: f64, v0: f64, j0: f64) -> Result<Self, ModelError> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(ModelError::InvalidParams(format!("mass must be > 0, got {mass:e}")));
        }
        if !(v0 > 0.0) || !v0.is_finite() {
            return Err(ModelError::InvalidParams(format!("v0 must be > 0, got {v0:e}")));
        }
        if !(j0 > 0.0) || !j0.is_finite() {
            return Err(ModelError::InvalidParams(format!("j0 must be > 0, got {j0:e}")));
        }
        Ok(Self { mass, v0, j0 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Allowed,
    Forbidden,
}

/// A total energy together with its detuning delta = E - V0 + J0 and the
/// regime selected by the sign of delta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySpec {
    pub energy: f64,
    pub delta: f64,
    pub regime: Regime,
}

/// Classify an energy. Rejects the crossover band |delta| <= 1e-12 * V0
/// where neither the propagating nor the evanescent branch applies.
pub fn energy_spec(params: &PhysicalParams, energy: f64) -> Result<EnergySpec, ModelError> {
    if !(energy > 0.0) || !energy.is_finite() {
        return Err(ModelError::NonPositiveEnergy(energy));
    }
    let delta = energy - params.v0 + params.j0;
    let tol = 1e-12 * params.v0;
    if delta.abs() <= tol {
        return Err(ModelError::DegenerateCrossover { delta, tol });
    }
    let regime = if delta > 0.0 { Regime::Allowed } else { Regime::Forbidden };
    Ok(EnergySpec { energy, delta, regime })
}

impl EnergySpec {
    /// Spec from a detuning instead of a total energy.
    pub fn from_delta(params: &PhysicalParams, delta: f64) -> Result<Self, ModelError> {
        energy_spec(params, params.v0 - params.j0 + delta)
    }
}

/// Uniform grid on [x_min, x_max] with the step location x = 0 pinned to a
/// node. Node i sits at x_min + i * dx.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub dx: f64,
    step_index: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self, ModelError> {
        if n < 3 {
            return Err(ModelError::GridTooSmall(n));
        }
        if !(x_min < x_max) {
            return Err(ModelError::BadGridBounds { x_min, x_max });
        }
        let dx = (x_max - x_min) / (n - 1) as f64;
        if x_min >= 0.0 || x_max < 0.0 {
            return Err(ModelError::StepOutsideGrid);
        }
        let ratio = -x_min / dx;
        let step_index = ratio.round() as usize;
        let offset = (ratio - ratio.round()).abs() * dx;
        if offset > 1e-9 * dx {
            return Err(ModelError::StepOffGrid { offset, dx });
        }
        Ok(Self { x_min, x_max, n, dx, step_index })
    }

    /// Position of node i.
    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    /// Index of the node at x = 0; that node belongs to the x >= 0 branch.
    #[inline]
    pub fn step_index(&self) -> usize {
        self.step_index
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.x(i))
    }
}

/// Complex amplitudes of the two waveguide components sampled on a grid.
/// `psi_a` is identically zero on the hard-wall nodes (x < 0).
#[derive(Debug, Clone)]
pub struct FieldPair {
    pub psi_m: Vec<C64>,
    pub psi_a: Vec<C64>,
    pub grid: Grid,
    pub t: f64,
}

impl FieldPair {
    pub fn new(grid: Grid, psi_m: Vec<C64>, psi_a: Vec<C64>, t: f64) -> Result<Self, ModelError> {
        if psi_m.len() != grid.n {
            return Err(ModelError::LengthMismatch { got: psi_m.len(), expected: grid.n });
        }
        if psi_a.len() != grid.n {
            return Err(ModelError::LengthMismatch { got: psi_a.len(), expected: grid.n });
        }
        for (i, v) in psi_a.iter().enumerate().take(grid.step_index()) {
            if v.norm_sqr() != 0.0 {
                return Err(ModelError::WallViolation { index: i });
            }
        }
        Ok(Self { psi_m, psi_a, grid, t })
    }

    /// Zero field at t = 0.
    pub fn zeros(grid: Grid) -> Self {
        Self {
            psi_m: vec![C64::new(0.0, 0.0); grid.n],
            psi_a: vec![C64::new(0.0, 0.0); grid.n],
            grid,
            t: 0.0,
        }
    }

    /// Discrete total norm, sum(|psi_m|^2 + |psi_a|^2) * dx.
    pub fn norm(&self) -> f64 {
        let g = &self.grid;
        kahan_sum(
            self.psi_m
                .iter()
                .zip(&self.psi_a)
                .map(|(m, a)| m.norm_sqr() + a.norm_sqr()),
        ) * g.dx
    }

    /// |psi_m|^2 + |psi_a|^2 per node.
    pub fn total_density(&self) -> Vec<f64> {
        self.psi_m
            .iter()
            .zip(&self.psi_a)
            .map(|(m, a)| m.norm_sqr() + a.norm_sqr())
            .collect()
    }
}

/// Discretized piecewise potentials of the coupled pair plus the hard-wall
/// mask for the auxiliary component. On x < 0 the auxiliary guide does not
/// exist (infinite potential), which is realized as a Dirichlet constraint
/// rather than a large finite value; `v_a` holds 0 there and is unused.
#[derive(Debug, Clone)]
pub struct PotentialProfile {
    pub v_m: Vec<f64>,
    pub v_a: Vec<f64>,
    pub v_i: Vec<f64>,
    pub wall_mask: Vec<bool>,
    pub grid: Grid,
}

/// Potentials of the step system: zero in the incoming region, V0 - J0 in
/// both guides past the step, coupling J0 past the step. The node at
/// exactly x = 0 belongs to the x >= 0 branch.
pub fn build_potential(params: &PhysicalParams, grid: &Grid) -> PotentialProfile {
    let n = grid.n;
    let i0 = grid.step_index();
    let mut v_m = vec![0.0; n];
    let mut v_a = vec![0.0; n];
    let mut v_i = vec![0.0; n];
    let mut wall_mask = vec![false; n];
    for i in 0..n {
        if i >= i0 {
            v_m[i] = params.v0 - params.j0;
            v_a[i] = params.v0 - params.j0;
            v_i[i] = params.j0;
        } else {
            wall_mask[i] = true;
        }
    }
    PotentialProfile { v_m, v_a, v_i, wall_mask, grid: *grid }
}

impl PotentialProfile {
    /// Assemble a profile from raw arrays. Only structural consistency is
    /// checked; the step-system shape is guaranteed by `build_potential`,
    /// while this entry point exists for synthetic scenarios (uniform
    /// potentials, decoupled guides) used in verification.
    pub fn from_arrays(
        grid: Grid,
        v_m: Vec<f64>,
        v_a: Vec<f64>,
        v_i: Vec<f64>,
        wall_mask: Vec<bool>,
    ) -> Result<Self, ModelError> {
        for (name, len) in [("v_m", v_m.len()), ("v_a", v_a.len()), ("v_i", v_i.len()), ("wall_mask", wall_mask.len())] {
            if len != grid.n {
                let _ = name;
                return Err(ModelError::LengthMismatch { got: len, expected: grid.n });
            }
        }
        Ok(Self { v_m, v_a, v_i, wall_mask, grid })
    }

    pub fn max_abs_potential(&self) -> f64 {
        self.v_m
            .iter()
            .chain(&self.v_a)
            .chain(&self.v_i)
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_params() -> PhysicalParams {
        PhysicalParams::new(0.0659, 817e9, 40e9).unwrap()
    }

    #[test]
    fn params_reject_nonpositive() {
        assert!(PhysicalParams::new(0.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, -1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn energy_spec_signs() {
        let p = paper_params();
        let s = energy_spec(&p, 877e9).unwrap();
        assert_eq!(s.regime, Regime::Allowed);
        assert!((s.delta - 100e9).abs() < 1.0);
        let s = energy_spec(&p, 677e9).unwrap();
        assert_eq!(s.regime, Regime::Forbidden);
        assert!((s.delta + 100e9).abs() < 1.0);
    }

    #[test]
    fn energy_spec_rejects_crossover() {
        let p = paper_params();
        // E = V0 - J0 sits exactly on the crossover.
        let err = energy_spec(&p, p.v0 - p.j0).unwrap_err();
        assert!(matches!(err, ModelError::DegenerateCrossover { .. }));
        assert!(energy_spec(&p, -1.0).is_err());
    }

    #[test]
    fn from_delta_round_trips() {
        let p = paper_params();
        let s = EnergySpec::from_delta(&p, -50e9).unwrap();
        assert_eq!(s.regime, Regime::Forbidden);
        assert!((s.energy - 727e9).abs() < 1.0);
    }

    #[test]
    fn grid_requires_node_at_zero() {
        // 11 nodes on [-1, 1]: dx = 0.2, x = 0 on node 5.
        let g = Grid::new(-1.0, 1.0, 11).unwrap();
        assert_eq!(g.step_index(), 5);
        assert!(g.x(5).abs() < 1e-15);
        // 10 nodes on [-1, 1]: no node at zero.
        assert!(matches!(Grid::new(-1.0, 1.0, 10), Err(ModelError::StepOffGrid { .. })));
        assert!(Grid::new(-1.0, 1.0, 2).is_err());
        assert!(Grid::new(1.0, 2.0, 5).is_err());
    }

    #[test]
    fn potential_matches_piecewise_definition() {
        let p = paper_params();
        // x in [-2e-5, 2e-5] with dx = 1e-5: nodes at -2e-5..2e-5.
        let g = Grid::new(-2e-5, 2e-5, 5).unwrap();
        let prof = build_potential(&p, &g);
        // node at x = -1e-5: free region
        assert_eq!(prof.v_m[1], 0.0);
        assert_eq!(prof.v_i[1], 0.0);
        assert!(prof.wall_mask[1]);
        // node at x = 0: step branch, v_m = V0 - J0 = 777e9 exactly
        let i0 = g.step_index();
        assert_eq!(prof.v_m[i0], 777e9);
        assert_eq!(prof.v_a[i0], 777e9);
        assert_eq!(prof.v_i[i0], 40e9);
        assert!(!prof.wall_mask[i0]);
    }

    #[test]
    fn potential_is_pure() {
        let p = paper_params();
        let g = Grid::new(-1e-3, 1e-3, 2001).unwrap();
        let a = build_potential(&p, &g);
        let b = build_potential(&p, &g);
        assert_eq!(a.v_m, b.v_m);
        assert_eq!(a.v_a, b.v_a);
        assert_eq!(a.v_i, b.v_i);
        assert_eq!(a.wall_mask, b.wall_mask);
    }

    #[test]
    fn zero_coupling_gives_zero_vi() {
        let p = PhysicalParams::new(0.0659, 817e9, 1e-30).unwrap();
        let g = Grid::new(-1e-4, 1e-4, 21).unwrap();
        let prof = build_potential(&p, &g);
        assert!(prof.v_i.iter().all(|&v| v.abs() <= 1e-30));
    }

    #[test]
    fn field_pair_validates_wall() {
        let g = Grid::new(-1e-4, 1e-4, 21).unwrap();
        let mut psi_a = vec![C64::new(0.0, 0.0); 21];
        psi_a[2] = C64::new(1.0, 0.0); // x < 0
        let psi_m = vec![C64::new(0.0, 0.0); 21];
        assert!(matches!(
            FieldPair::new(g, psi_m.clone(), psi_a, 0.0),
            Err(ModelError::WallViolation { index: 2 })
        ));
        let bad_len = vec![C64::new(0.0, 0.0); 20];
        assert!(FieldPair::new(g, psi_m, bad_len, 0.0).is_err());
    }
}
