//! The two concrete work-medium schedules: a single qubit in a rotating
//! magnetic field and a two-qubit anisotropic Heisenberg pair with a
//! time-dependent coupling, together with their closed-form counterdiabatic
//! terms, spectra, and instantaneous level bases.
//!
//! Basis conventions: sigma_z |up> = +|up>; the two-qubit product basis is
//! ordered |uu>, |ud>, |du>, |dd>, which puts the coupling of the second
//! model on the anti-diagonal. Level labels follow the closed-form branch
//! expressions (not a sort), so a label keeps tracking its branch through
//! any energy crossing.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::ModelError;
use crate::quantum::{kron, pauli_x, pauli_y, pauli_z, HermitianOperator, C64};

fn check_s(s: f64) -> Result<(), ModelError> {
    if !(0.0..=1.0).contains(&s) || s.is_nan() {
        return Err(ModelError::OutOfRange { s });
    }
    Ok(())
}

/// Field-rotation profile B(s) = sin[(pi/2) sin^2(pi s / 2)]; runs 0 -> 1.
pub fn schedule_b(s: f64) -> Result<f64, ModelError> {
    check_s(s)?;
    let inner = (PI * s / 2.0).sin().powi(2);
    Ok((PI / 2.0 * inner).sin())
}

/// Level-splitting profile omega(s) = 1 + tanh(pi s / 2); runs 1 -> 1 + tanh(pi/2).
pub fn schedule_omega(s: f64) -> Result<f64, ModelError> {
    check_s(s)?;
    Ok(1.0 + (PI * s / 2.0).tanh())
}

/// Coupling profile J(s) = cos[(pi/2) cos(pi s / 2)]; runs 0 -> 1.
pub fn schedule_j(s: f64) -> Result<f64, ModelError> {
    check_s(s)?;
    Ok((PI / 2.0 * (PI * s / 2.0).cos()).cos())
}

/// dJ/ds in closed form; vanishes at both endpoints.
pub fn schedule_j_deriv(s: f64) -> Result<f64, ModelError> {
    check_s(s)?;
    let half = PI * s / 2.0;
    Ok(PI * PI / 4.0 * half.sin() * (PI / 2.0 * half.cos()).sin())
}

/// Instantaneous level energies and the unitary whose columns are the level
/// eigenvectors, both in branch-label order (level 1 first).
#[derive(Debug, Clone)]
pub struct LevelFrame {
    pub energies: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

/// A drive protocol: a map s in [0,1] -> Hamiltonian with a total duration
/// tau, plus the counterdiabatic correction that keeps the evolution
/// transitionless. Time is t = s * tau throughout (hbar = 1).
pub trait DriveSchedule {
    fn dim(&self) -> usize;
    fn tau(&self) -> f64;
    fn hamiltonian(&self, s: f64) -> Result<HermitianOperator, ModelError>;
    /// The counterdiabatic term at s. Vanishes at s = 0 and s = 1 for every
    /// schedule whose eigenbasis is stationary at the endpoints.
    fn cd_term(&self, s: f64) -> Result<HermitianOperator, ModelError>;
}

/// Schedules with a closed-form instantaneous level structure, used for the
/// exact transport thermodynamics.
pub trait LevelResolved: DriveSchedule {
    fn levels(&self, s: f64) -> Result<LevelFrame, ModelError>;

    fn level_energies(&self, s: f64) -> Result<Vec<f64>, ModelError> {
        Ok(self.levels(s)?.energies)
    }
}

/// Two-level medium H(s) = omega(s)/2 (B(s) sigma_x + sqrt(1-B^2) sigma_z).
///
/// Level 1 is the upper branch (+omega/2), level 2 the lower branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitModel {
    tau: f64,
}

impl SingleQubitModel {
    pub fn new(tau: f64) -> Result<Self, ModelError> {
        if !(tau > 0.0) {
            return Err(ModelError::BadTau { tau });
        }
        Ok(Self { tau })
    }

    /// Mixing angle theta(s) with B = sin(theta); theta = (pi/2) sin^2(pi s/2).
    fn theta(s: f64) -> f64 {
        PI / 2.0 * (PI * s / 2.0).sin().powi(2)
    }
}

impl DriveSchedule for SingleQubitModel {
    fn dim(&self) -> usize {
        2
    }

    fn tau(&self) -> f64 {
        self.tau
    }

    fn hamiltonian(&self, s: f64) -> Result<HermitianOperator, ModelError> {
        check_s(s)?;
        let w = schedule_omega(s)?;
        // B = sin(theta), sqrt(1 - B^2) = cos(theta); the trig form avoids the
        // cancellation in 1 - B^2 where B approaches 1
        let th = Self::theta(s);
        let m = pauli_x() * C64::new(w / 2.0 * th.sin(), 0.0)
            + pauli_z() * C64::new(w / 2.0 * th.cos(), 0.0);
        Ok(HermitianOperator::new(m).expect("construction is Hermitian"))
    }

    /// Closed-form counterdiabatic term: purely off-diagonal with
    /// H_12 = -(i pi^2 / 8 tau) sin(pi s); independent of omega(s).
    fn cd_term(&self, s: f64) -> Result<HermitianOperator, ModelError> {
        check_s(s)?;
        let coeff = PI * PI / (8.0 * self.tau) * (PI * s).sin();
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(0, 1)] = C64::new(0.0, -coeff);
        m[(1, 0)] = C64::new(0.0, coeff);
        Ok(HermitianOperator::new(m).expect("construction is Hermitian"))
    }
}

impl LevelResolved for SingleQubitModel {
    fn levels(&self, s: f64) -> Result<LevelFrame, ModelError> {
        let w = schedule_omega(s)?;
        let th = Self::theta(s);
        let (c, sn) = ((th / 2.0).cos(), (th / 2.0).sin());
        let mut vectors = DMatrix::<C64>::zeros(2, 2);
        // level 1: upper branch, rotates |up> -> |+>
        vectors[(0, 0)] = C64::new(c, 0.0);
        vectors[(1, 0)] = C64::new(sn, 0.0);
        // level 2: lower branch
        vectors[(0, 1)] = C64::new(-sn, 0.0);
        vectors[(1, 1)] = C64::new(c, 0.0);
        Ok(LevelFrame {
            energies: vec![w / 2.0, -w / 2.0],
            vectors,
        })
    }
}

/// Two interacting qubits
/// H(s) = eps1 s1z + eps2 s2z + J(s)/2 (alpha xx + beta yy + gamma zz).
///
/// Only J(s) is time dependent. The Hamiltonian is block diagonal on the
/// {|uu>,|dd>} and {|ud>,|du>} sectors at all times, and the zz term commutes
/// with everything, so the counterdiabatic correction never involves gamma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitModel {
    pub eps1: f64,
    pub eps2: f64,
    pub alpha: f64,
    pub beta_aniso: f64,
    pub gamma_aniso: f64,
    tau: f64,
}

impl TwoQubitModel {
    pub fn new(
        eps1: f64,
        eps2: f64,
        alpha: f64,
        beta_aniso: f64,
        gamma_aniso: f64,
        tau: f64,
    ) -> Result<Self, ModelError> {
        if !(tau > 0.0) {
            return Err(ModelError::BadTau { tau });
        }
        Ok(Self {
            eps1,
            eps2,
            alpha,
            beta_aniso,
            gamma_aniso,
            tau,
        })
    }

    /// The default working point: eps1 = eps2 = 1, alpha = beta = 1, gamma = 0.
    pub fn isotropic(tau: f64) -> Result<Self, ModelError> {
        Self::new(1.0, 1.0, 1.0, 1.0, 0.0, tau)
    }

    /// Mixing angles of the two 2x2 sectors. The {1,4} sector couples
    /// |uu>,|dd> with strength J(alpha-beta)/2 against the splitting
    /// eps1+eps2; the {2,3} sector couples |ud>,|du> with J(alpha+beta)/2
    /// against eps1-eps2.
    fn sector_angles(&self, s: f64) -> Result<(f64, f64), ModelError> {
        let j = schedule_j(s)?;
        let k14 = j * (self.alpha - self.beta_aniso) / 2.0;
        let h14 = self.eps1 + self.eps2;
        let k23 = j * (self.alpha + self.beta_aniso) / 2.0;
        let h23 = self.eps1 - self.eps2;
        Ok((k14.atan2(h14), k23.atan2(h23)))
    }
}

impl Default for TwoQubitModel {
    fn default() -> Self {
        Self::isotropic(1.0).expect("tau = 1 is valid")
    }
}

impl DriveSchedule for TwoQubitModel {
    fn dim(&self) -> usize {
        4
    }

    fn tau(&self) -> f64 {
        self.tau
    }

    fn hamiltonian(&self, s: f64) -> Result<HermitianOperator, ModelError> {
        let j = schedule_j(s)?;
        let i2 = DMatrix::<C64>::identity(2, 2);
        let m = kron(&pauli_z(), &i2) * C64::new(self.eps1, 0.0)
            + kron(&i2, &pauli_z()) * C64::new(self.eps2, 0.0)
            + kron(&pauli_x(), &pauli_x()) * C64::new(j / 2.0 * self.alpha, 0.0)
            + kron(&pauli_y(), &pauli_y()) * C64::new(j / 2.0 * self.beta_aniso, 0.0)
            + kron(&pauli_z(), &pauli_z()) * C64::new(j / 2.0 * self.gamma_aniso, 0.0);
        Ok(HermitianOperator::new(m).expect("construction is Hermitian"))
    }

    /// Closed-form counterdiabatic term: anti-diagonal, gamma-independent,
    /// vanishing at both endpoints. Entry (1,4) drives the |uu>-|dd> sector,
    /// entry (2,3) the |ud>-|du> sector.
    fn cd_term(&self, s: f64) -> Result<HermitianOperator, ModelError> {
        let j = schedule_j(s)?;
        let jdot = schedule_j_deriv(s)?;
        let tau = self.tau;

        let sector = |coupling: f64, splitting: f64| -> f64 {
            // d/dt of atan(J k / h) over 2: the generator of the sector's
            // basis rotation.
            let num = jdot * coupling * splitting;
            let den = tau * (4.0 * splitting * splitting + j * j * coupling * coupling);
            if den.abs() < f64::MIN_POSITIVE {
                0.0
            } else {
                num / den
            }
        };

        let h14 = sector(self.alpha - self.beta_aniso, self.eps1 + self.eps2);
        let h23 = sector(self.alpha + self.beta_aniso, self.eps1 - self.eps2);

        let mut m = DMatrix::<C64>::zeros(4, 4);
        m[(0, 3)] = C64::new(0.0, -h14);
        m[(3, 0)] = C64::new(0.0, h14);
        m[(1, 2)] = C64::new(0.0, -h23);
        m[(2, 1)] = C64::new(0.0, h23);
        Ok(HermitianOperator::new(m).expect("construction is Hermitian"))
    }
}

impl TwoQubitModel {
    /// Branch-labeled eigenvalues E^1..E^4 in closed form. Levels 1 and 4 are
    /// the +/- branches of the |uu>-|dd> sector, levels 2 and 3 of the
    /// |ud>-|du> sector; labels follow the branches through any crossing.
    pub fn eigenvalues_closed(&self, s: f64) -> Result<[f64; 4], ModelError> {
        let j = schedule_j(s)?;
        self.eigenvalues_closed_at_j(j)
    }

    /// Same branch formulas evaluated at an explicit coupling value.
    pub fn eigenvalues_closed_at_j(&self, j: f64) -> Result<[f64; 4], ModelError> {
        let g = self.gamma_aniso * j;
        let r14 = ((self.alpha - self.beta_aniso).powi(2) * j * j
            + 4.0 * (self.eps1 + self.eps2).powi(2))
        .sqrt();
        let r23 = ((self.alpha + self.beta_aniso).powi(2) * j * j
            + 4.0 * (self.eps1 - self.eps2).powi(2))
        .sqrt();
        Ok([
            0.5 * (g + r14),
            0.5 * (-g + r23),
            0.5 * (-g - r23),
            0.5 * (g - r14),
        ])
    }
}

impl LevelResolved for TwoQubitModel {
    fn levels(&self, s: f64) -> Result<LevelFrame, ModelError> {
        let energies = self.eigenvalues_closed(s)?.to_vec();
        let (th14, th23) = self.sector_angles(s)?;
        let (c14, s14) = ((th14 / 2.0).cos(), (th14 / 2.0).sin());
        let (c23, s23) = ((th23 / 2.0).cos(), (th23 / 2.0).sin());
        let mut v = DMatrix::<C64>::zeros(4, 4);
        // level 1: + branch on (|uu>, |dd>)
        v[(0, 0)] = C64::new(c14, 0.0);
        v[(3, 0)] = C64::new(s14, 0.0);
        // level 2: + branch on (|ud>, |du>)
        v[(1, 1)] = C64::new(c23, 0.0);
        v[(2, 1)] = C64::new(s23, 0.0);
        // level 3: - branch on (|ud>, |du>)
        v[(1, 2)] = C64::new(-s23, 0.0);
        v[(2, 2)] = C64::new(c23, 0.0);
        // level 4: - branch on (|uu>, |dd>)
        v[(0, 3)] = C64::new(-s14, 0.0);
        v[(3, 3)] = C64::new(c14, 0.0);
        Ok(LevelFrame {
            energies,
            vectors: v,
        })
    }
}

/// A time-independent Hamiltonian wrapped as a schedule (its counterdiabatic
/// term is identically zero).
#[derive(Debug, Clone)]
pub struct ConstantSchedule {
    h: HermitianOperator,
    tau: f64,
}

impl ConstantSchedule {
    pub fn new(h: HermitianOperator, tau: f64) -> Result<Self, ModelError> {
        if !(tau > 0.0) {
            return Err(ModelError::BadTau { tau });
        }
        Ok(Self { h, tau })
    }
}

impl DriveSchedule for ConstantSchedule {
    fn dim(&self) -> usize {
        self.h.dim()
    }

    fn tau(&self) -> f64 {
        self.tau
    }

    fn hamiltonian(&self, s: f64) -> Result<HermitianOperator, ModelError> {
        check_s(s)?;
        Ok(self.h.clone())
    }

    fn cd_term(&self, s: f64) -> Result<HermitianOperator, ModelError> {
        check_s(s)?;
        Ok(HermitianOperator::zero(self.h.dim()))
    }
}
