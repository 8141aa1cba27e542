//! Work, irreversible entropy production, and initial-state coherence for one
//! transitionless stroke, in both the operator form (final state against the
//! Gibbs state of the final Hamiltonian) and the closed population form that
//! transport makes exact.
//!
//! Sign convention: work is final minus initial mean energy, so negative
//! values mean work extracted from the medium.

use nalgebra::DMatrix;

use crate::error::ThermoError;
use crate::models::LevelResolved;
use crate::quantum::{
    gibbs_populations, relative_entropy, thermal_state, von_neumann_entropy, DensityMatrix,
    HermitianOperator, C64,
};

/// Endpoint functionals of one stroke for a single initial state.
#[derive(Debug, Clone)]
pub struct StrokeOutcome {
    pub work: f64,
    pub s_irr: f64,
    pub coherence_in: f64,
    pub populations_in: Vec<f64>,
}

/// Mean-energy difference tr(rho_tau H_tau) - tr(rho_0 H_0).
pub fn work(
    rho0: &DensityMatrix,
    h0: &HermitianOperator,
    rho_tau: &DensityMatrix,
    h_tau: &HermitianOperator,
) -> Result<f64, ThermoError> {
    if rho0.dim() != h0.dim() || rho_tau.dim() != h_tau.dim() || rho0.dim() != rho_tau.dim() {
        return Err(ThermoError::LengthMismatch {
            left: rho0.dim(),
            right: h_tau.dim(),
        });
    }
    let final_energy = (rho_tau.matrix() * h_tau.matrix()).trace().re;
    let initial_energy = (rho0.matrix() * h0.matrix()).trace().re;
    Ok(final_energy - initial_energy)
}

/// Transport form of the work: sum_i p_i (E_tau^i - E_0^i) over level-labeled
/// populations.
pub fn work_adiabatic(
    populations: &[f64],
    e0: &[f64],
    e_tau: &[f64],
) -> Result<f64, ThermoError> {
    if populations.len() != e0.len() || e0.len() != e_tau.len() {
        return Err(ThermoError::LengthMismatch {
            left: populations.len(),
            right: e_tau.len(),
        });
    }
    Ok(populations
        .iter()
        .zip(e0.iter().zip(e_tau.iter()))
        .map(|(&p, (&a, &b))| p * (b - a))
        .sum())
}

/// Irreversible entropy production: relative entropy of the final state
/// against the Gibbs state of the final Hamiltonian at inverse temperature
/// beta. Support violations surface as +infinity, never clipped.
pub fn sirr(
    rho_tau: &DensityMatrix,
    h_tau: &HermitianOperator,
    beta: f64,
) -> Result<f64, ThermoError> {
    let gibbs = thermal_state(h_tau, beta)?;
    Ok(relative_entropy(rho_tau, &gibbs)?)
}

/// Transport form of the entropy production: -S(rho_0) - sum_i p_i ln q_i
/// with rho_0 written in the level basis and q the Gibbs populations of the
/// final spectrum in the same labeling. For diagonal states this is the
/// classical KL divergence of the populations from the Gibbs weights.
pub fn sirr_adiabatic(
    rho0_level_basis: &DensityMatrix,
    thermal_pops: &[f64],
) -> Result<f64, ThermoError> {
    if rho0_level_basis.dim() != thermal_pops.len() {
        return Err(ThermoError::LengthMismatch {
            left: rho0_level_basis.dim(),
            right: thermal_pops.len(),
        });
    }
    for (level, &q) in thermal_pops.iter().enumerate() {
        if !(q > 0.0) {
            return Err(ThermoError::ZeroThermalPopulation { level, value: q });
        }
    }
    let cross: f64 = rho0_level_basis
        .diagonal_real()
        .iter()
        .zip(thermal_pops.iter())
        .map(|(&p, &q)| p * q.ln())
        .sum();
    let s = -von_neumann_entropy(rho0_level_basis) - cross;
    // the expression is nonnegative for every valid state; shave round-off
    Ok(s.max(0.0))
}

/// Precomputed level data for one model at fixed inverse temperature: initial
/// and final level energies (branch labels), the level bases at both ends,
/// and the Gibbs populations of the final spectrum.
#[derive(Debug, Clone)]
pub struct StrokeContext {
    pub e0: Vec<f64>,
    pub e_tau: Vec<f64>,
    pub thermal_pops: Vec<f64>,
    pub beta: f64,
    v0: DMatrix<C64>,
    v1: DMatrix<C64>,
    h0: HermitianOperator,
    h_tau: HermitianOperator,
}

impl StrokeContext {
    pub fn new<S: LevelResolved + ?Sized>(model: &S, beta: f64) -> Result<Self, ThermoError> {
        let start = model
            .levels(0.0)
            .map_err(crate::error::FrameError::Model)?;
        let end = model.levels(1.0).map_err(crate::error::FrameError::Model)?;
        let thermal_pops = gibbs_populations(&end.energies, beta)?;
        let h0 = model
            .hamiltonian(0.0)
            .map_err(crate::error::FrameError::Model)?;
        let h_tau = model
            .hamiltonian(1.0)
            .map_err(crate::error::FrameError::Model)?;
        Ok(Self {
            e0: start.energies,
            e_tau: end.energies,
            thermal_pops,
            beta,
            v0: start.vectors,
            v1: end.vectors,
            h0,
            h_tau,
        })
    }

    pub fn dim(&self) -> usize {
        self.e0.len()
    }

    /// Level shifts E_tau^i - E_0^i; work of a level-population vector is its
    /// dot product with these.
    pub fn level_shifts(&self) -> Vec<f64> {
        self.e_tau
            .iter()
            .zip(self.e0.iter())
            .map(|(&b, &a)| b - a)
            .collect()
    }

    /// Initial Hamiltonian of the stroke.
    pub fn h0(&self) -> &HermitianOperator {
        &self.h0
    }

    /// Final Hamiltonian of the stroke.
    pub fn h_tau(&self) -> &HermitianOperator {
        &self.h_tau
    }

    /// Level basis at s=0 (columns in branch-label order).
    pub fn initial_level_basis(&self) -> &DMatrix<C64> {
        &self.v0
    }

    /// A level-basis state as a computational-basis operator.
    pub fn to_computational(&self, rho_level: &DensityMatrix) -> DensityMatrix {
        rho_level.conjugate_by(&self.v0)
    }

    /// A computational-basis initial state re-expressed in the level basis.
    pub fn to_level_basis(&self, rho: &DensityMatrix) -> DensityMatrix {
        let m = self.v0.adjoint() * rho.matrix() * &self.v0;
        DensityMatrix::new(m).expect("basis change preserves state invariants")
    }

    /// Exact transported final state (computational basis) of a level-basis
    /// initial state, dynamical phases omitted: populations and coherence
    /// magnitudes are what the endpoint functionals consume.
    pub fn transported(&self, rho_level: &DensityMatrix) -> DensityMatrix {
        rho_level.conjugate_by(&self.v1)
    }

    /// All endpoint functionals for one initial state given in the level
    /// basis, evaluated with exact transport semantics.
    pub fn stroke(&self, rho_level: &DensityMatrix) -> Result<StrokeOutcome, ThermoError> {
        if rho_level.dim() != self.dim() {
            return Err(ThermoError::LengthMismatch {
                left: rho_level.dim(),
                right: self.dim(),
            });
        }
        let populations_in = rho_level.diagonal_real();
        let work = work_adiabatic(&populations_in, &self.e0, &self.e_tau)?;
        let s_irr = sirr_adiabatic(rho_level, &self.thermal_pops)?;
        let diag = DensityMatrix::from_real_diagonal(&normalize_clip(&populations_in))?;
        let coherence_in =
            (von_neumann_entropy(&diag) - von_neumann_entropy(rho_level)).max(0.0);
        Ok(StrokeOutcome {
            work,
            s_irr,
            coherence_in,
            populations_in,
        })
    }
}

/// Bundle the endpoint functionals for one initial state (level basis) under
/// exact transport. Builds the context internally; use [`StrokeContext`] for
/// batches.
pub fn stroke<S: LevelResolved + ?Sized>(
    rho_level: &DensityMatrix,
    model: &S,
    beta: f64,
) -> Result<StrokeOutcome, ThermoError> {
    StrokeContext::new(model, beta)?.stroke(rho_level)
}

/// Clip round-off negatives and renormalize a population vector.
fn normalize_clip(populations: &[f64]) -> Vec<f64> {
    let clipped: Vec<f64> = populations.iter().map(|&p| p.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    clipped.into_iter().map(|p| p / total).collect()
}
