//! Finite-time unitary evolution under a bare or shortcut-augmented schedule,
//! plus the exact transport map that the shortcut protocol is supposed to
//! reproduce.

use nalgebra::{DMatrix, DVector};

use crate::cd::EigenFrame;
use crate::error::PropagatorError;
use crate::models::DriveSchedule;
use crate::quantum::{eig_hermitian, fidelity, DensityMatrix, HermitianOperator, C64};

/// Below this step count the midpoint integrator is not trusted at all.
pub const MIN_STEPS: usize = 100;
/// Hard failure threshold on ||U^dag U - 1||.
pub const UNITARITY_FAIL: f64 = 1e-6;

/// Outcome of one finite-time evolution.
#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub final_state: DensityMatrix,
    pub unitary: DMatrix<C64>,
    pub steps: usize,
    pub max_unitarity_defect: f64,
}

fn step_exponential(h: &HermitianOperator, dt: f64) -> DMatrix<C64> {
    let eig = eig_hermitian(h);
    let d = DVector::from_iterator(
        eig.values.len(),
        eig.values
            .iter()
            .map(|&e| C64::from_polar(1.0, -e * dt)),
    );
    &eig.vectors * DMatrix::from_diagonal(&d) * eig.vectors.adjoint()
}

fn unitarity_defect(u: &DMatrix<C64>) -> f64 {
    let dim = u.nrows();
    (u.adjoint() * u - DMatrix::<C64>::identity(dim, dim))
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

/// Total evolution operator of the schedule by piecewise-constant midpoint
/// exponential stepping: U = prod_k exp(-i H(s_k + ds/2) tau ds). The state
/// plays no role here, so one unitary can serve a whole batch of initial
/// states.
pub fn evolution_unitary<S: DriveSchedule + ?Sized>(
    schedule: &S,
    with_tqd: bool,
    steps: usize,
) -> Result<(DMatrix<C64>, f64), PropagatorError> {
    if steps < MIN_STEPS {
        return Err(PropagatorError::TooFewSteps { steps });
    }
    let dim = schedule.dim();
    let ds = 1.0 / steps as f64;
    let dt = ds * schedule.tau();
    let mut u = DMatrix::<C64>::identity(dim, dim);
    for k in 0..steps {
        let s_mid = (k as f64 + 0.5) * ds;
        let mut h = schedule.hamiltonian(s_mid)?;
        if with_tqd {
            let cd = schedule.cd_term(s_mid)?;
            h = HermitianOperator::new(h.matrix() + cd.matrix())
                .expect("sum of Hermitian terms is Hermitian");
        }
        u = step_exponential(&h, dt) * u;
    }
    let defect = unitarity_defect(&u);
    if defect > UNITARITY_FAIL {
        return Err(PropagatorError::UnitarityLost { defect });
    }
    Ok((u, defect))
}

/// Evolve an initial state through the full protocol.
pub fn evolve<S: DriveSchedule + ?Sized>(
    schedule: &S,
    with_tqd: bool,
    rho0: &DensityMatrix,
    steps: usize,
) -> Result<EvolutionResult, PropagatorError> {
    let (u, defect) = evolution_unitary(schedule, with_tqd, steps)?;
    Ok(EvolutionResult {
        final_state: rho0.conjugate_by(&u),
        unitary: u,
        steps,
        max_unitarity_defect: defect,
    })
}

/// Evolve with an externally supplied counterdiabatic table (one term per
/// integration midpoint), e.g. the finite-difference construction for a
/// schedule without a closed form.
pub fn evolve_with_cd_table<S: DriveSchedule + ?Sized>(
    schedule: &S,
    cd_at_midpoints: &[HermitianOperator],
    rho0: &DensityMatrix,
) -> Result<EvolutionResult, PropagatorError> {
    let steps = cd_at_midpoints.len();
    if steps < MIN_STEPS {
        return Err(PropagatorError::TooFewSteps { steps });
    }
    let dim = schedule.dim();
    let ds = 1.0 / steps as f64;
    let dt = ds * schedule.tau();
    let mut u = DMatrix::<C64>::identity(dim, dim);
    for (k, cd) in cd_at_midpoints.iter().enumerate() {
        let s_mid = (k as f64 + 0.5) * ds;
        let h = schedule.hamiltonian(s_mid)?;
        let total = HermitianOperator::new(h.matrix() + cd.matrix())
            .expect("sum of Hermitian terms is Hermitian");
        u = step_exponential(&total, dt) * u;
    }
    let defect = unitarity_defect(&u);
    if defect > UNITARITY_FAIL {
        return Err(PropagatorError::UnitarityLost { defect });
    }
    Ok(EvolutionResult {
        final_state: rho0.conjugate_by(&u),
        unitary: u,
        steps,
        max_unitarity_defect: defect,
    })
}

/// Exact transitionless transport: populations in the instantaneous basis are
/// carried unchanged from s=0 to s=1 while coherences pick up the dynamical
/// phase differences exp(-i tau \int (E_i - E_j) ds), integrated by composite
/// Simpson quadrature on the frame grid (odd point count by construction).
///
/// This is the oracle the shortcut-augmented evolution must reproduce; a
/// frame whose degeneracies could not be resolved never gets this far because
/// frame construction already reports it.
pub fn adiabatic_transport(
    rho0: &DensityMatrix,
    frame: &EigenFrame,
) -> Result<DensityMatrix, PropagatorError> {
    let dim = frame.dim();
    if rho0.dim() != dim {
        return Err(PropagatorError::Quantum(
            crate::error::QuantumError::DimensionMismatch {
                left: rho0.dim(),
                right: dim,
            },
        ));
    }
    let v0 = frame.initial_basis();
    let v1 = frame.final_basis();
    let mut in_frame = v0.adjoint() * rho0.matrix() * v0;
    let phases: Vec<f64> = (0..dim)
        .map(|track| -frame.tau() * simpson(&frame.track_energies(track)))
        .collect();
    for i in 0..dim {
        for j in 0..dim {
            in_frame[(i, j)] *= C64::from_polar(1.0, phases[i] - phases[j]);
        }
    }
    let m = v1 * in_frame * v1.adjoint();
    Ok(DensityMatrix::new(m)?)
}

/// Composite Simpson integral of uniformly sampled values on [0, 1]
/// (odd sample count).
fn simpson(values: &[f64]) -> f64 {
    let n = values.len();
    debug_assert!(n >= 3 && n % 2 == 1);
    let h = 1.0 / (n - 1) as f64;
    let mut acc = values[0] + values[n - 1];
    for (k, v) in values.iter().enumerate().take(n - 1).skip(1) {
        acc += if k % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}

/// Fidelity of the evolved state against a fixed target for each duration in
/// `tau_list`. The closure builds the schedule at a given duration.
pub fn fidelity_curve<S, F>(
    make_schedule: F,
    tau_list: &[f64],
    with_tqd: bool,
    rho0: &DensityMatrix,
    target: &DensityMatrix,
    steps: usize,
) -> Result<Vec<(f64, f64)>, PropagatorError>
where
    S: DriveSchedule,
    F: Fn(f64) -> Result<S, crate::error::ModelError>,
{
    if tau_list.is_empty() || tau_list.iter().any(|&t| !(t > 0.0)) {
        return Err(PropagatorError::BadTauList);
    }
    let mut out = Vec::with_capacity(tau_list.len());
    for &tau in tau_list {
        let schedule = make_schedule(tau)?;
        let result = evolve(&schedule, with_tqd, rho0, steps)?;
        let f = fidelity(&result.final_state, target)?;
        out.push((tau, f));
    }
    Ok(out)
}
