//! Dense complex Hermitian linear algebra and the information-theoretic
//! functionals used by every other module. Dimensions are fixed to 2 or 4
//! (one or two qubits), so everything goes through full eigendecompositions.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::QuantumError;

pub type C64 = Complex<f64>;

/// Max allowed |H - H^dag| entry for a matrix admitted as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Max allowed |tr(rho) - 1| for a density matrix.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues of a density matrix in (-EIG_NEG_TOL, 0) are round-off and get
/// clipped to zero; anything more negative is rejected as an invalid state.
pub const EIG_NEG_TOL: f64 = 1e-10;
/// A sigma-eigenvalue below this counts as "outside the support" in
/// relative_entropy when rho puts more than RELENT_RHO_WEIGHT_TOL on it.
pub const RELENT_SUPPORT_TOL: f64 = 1e-14;
pub const RELENT_RHO_WEIGHT_TOL: f64 = 1e-12;

fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// A dense complex Hermitian matrix of dimension 2 or 4 (energy units, hbar = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    m: DMatrix<C64>,
}

impl HermitianOperator {
    pub fn new(m: DMatrix<C64>) -> Result<Self, QuantumError> {
        let dim = m.nrows();
        if dim != m.ncols() || (dim != 2 && dim != 4) {
            return Err(QuantumError::BadDimension { dim });
        }
        let defect = hermiticity_defect(&m);
        if defect > HERMITICITY_TOL {
            return Err(QuantumError::NotHermitian { defect });
        }
        // Symmetrize away the sub-tolerance defect so downstream algebra sees
        // an exactly Hermitian matrix.
        let sym = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        Ok(Self { m: sym })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            m: DMatrix::zeros(dim, dim),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&x| C64::new(x, 0.0)));
        Self {
            m: DMatrix::from_diagonal(&v),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    /// Largest entry magnitude (the sup norm used by the verification harness).
    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn trace_real(&self) -> f64 {
        self.m.trace().re
    }
}

/// Trace-one positive-semidefinite Hermitian matrix: the state of the medium.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(m: DMatrix<C64>) -> Result<Self, QuantumError> {
        let dim = m.nrows();
        if dim != m.ncols() || (dim != 2 && dim != 4) {
            return Err(QuantumError::BadDimension { dim });
        }
        let defect = hermiticity_defect(&m);
        if defect > HERMITICITY_TOL {
            return Err(QuantumError::NotHermitian { defect });
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(QuantumError::BadTrace { trace: trace.re });
        }
        let sym = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        let eig = eig_of(&sym);
        if let Some(&lo) = eig
            .values
            .iter()
            .find(|&&v| v < -EIG_NEG_TOL)
        {
            return Err(QuantumError::NegativeEigenvalue { value: lo });
        }
        Ok(Self { m: sym })
    }

    /// Rank-one projector onto the given (not necessarily normalized) vector.
    pub fn pure_from(amplitudes: &[C64]) -> Result<Self, QuantumError> {
        let dim = amplitudes.len();
        if dim != 2 && dim != 4 {
            return Err(QuantumError::BadDimension { dim });
        }
        let v = DVector::from_column_slice(amplitudes);
        let n2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if n2 <= 0.0 {
            return Err(QuantumError::BadTrace { trace: 0.0 });
        }
        let v = v / C64::new(n2.sqrt(), 0.0);
        let m = &v * v.adjoint();
        Self::new(m)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self, QuantumError> {
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&x| C64::new(x, 0.0)));
        Self::new(DMatrix::from_diagonal(&v))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let m = DMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0);
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    /// Real parts of the diagonal (the populations when the matrix is written
    /// in the level basis).
    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.m[(i, i)].re).collect()
    }

    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    /// rho -> U rho U^dag without re-validating (U must be unitary).
    pub fn conjugate_by(&self, u: &DMatrix<C64>) -> DensityMatrix {
        DensityMatrix {
            m: u * &self.m * u.adjoint(),
        }
    }
}

/// Real ascending eigenvalues with a unitary matrix of column eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// Cyclic complex Jacobi diagonalization. Hand-rolled because nalgebra's
/// SymmetricEigen mispairs eigenvectors on some block-sparse complex
/// Hermitian inputs (orthonormal vectors, reconstruction residual O(1)).
/// For dim 2 and 4 a handful of sweeps reaches round-off.
fn jacobi_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let dim = m.nrows();
    let mut a = m.clone();
    let mut v = DMatrix::<C64>::identity(dim, dim);
    let scale = a
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    for _ in 0..60 {
        let off = (0..dim)
            .flat_map(|p| ((p + 1)..dim).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm())
            .fold(0.0, f64::max);
        if off <= scale * 5e-16 {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let c = a[(p, q)];
                let mag = c.norm();
                if mag <= scale * 1e-18 {
                    continue;
                }
                let phase = c / C64::new(mag, 0.0);
                let theta = 0.5 * (2.0 * mag).atan2(a[(p, p)].re - a[(q, q)].re);
                let (ct, st) = (theta.cos(), theta.sin());
                let gpp = C64::new(ct, 0.0);
                let gpq = -phase * C64::new(st, 0.0);
                let gqp = phase.conj() * C64::new(st, 0.0);
                let gqq = C64::new(ct, 0.0);
                // A <- G^dag A G applied as column then row update
                for r in 0..dim {
                    let (arp, arq) = (a[(r, p)], a[(r, q)]);
                    a[(r, p)] = arp * gpp + arq * gqp;
                    a[(r, q)] = arp * gpq + arq * gqq;
                }
                for col in 0..dim {
                    let (apc, aqc) = (a[(p, col)], a[(q, col)]);
                    a[(p, col)] = gpp.conj() * apc + gqp.conj() * aqc;
                    a[(q, col)] = gpq.conj() * apc + gqq.conj() * aqc;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for r in 0..dim {
                    let (vrp, vrq) = (v[(r, p)], v[(r, q)]);
                    v[(r, p)] = vrp * gpp + vrq * gqp;
                    v[(r, q)] = vrp * gpq + vrq * gqq;
                }
            }
        }
    }
    ((0..dim).map(|i| a[(i, i)].re).collect(), v)
}

/// Raw Hermitian eigendecomposition, sorted ascending, phases fixed so the
/// largest-magnitude component of each column is real positive.
fn eig_of(m: &DMatrix<C64>) -> EigenDecomposition {
    let (raw_values, raw_vectors) = jacobi_eigen(m);
    let dim = m.nrows();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| raw_values[a].partial_cmp(&raw_values[b]).unwrap());
    let mut values = Vec::with_capacity(dim);
    let mut vectors = DMatrix::<C64>::zeros(dim, dim);
    for (col, &idx) in order.iter().enumerate() {
        values.push(raw_values[idx]);
        let mut v: DVector<C64> = raw_vectors.column(idx).into_owned();
        // standard-basis phase convention
        let mut best = 0usize;
        let mut best_mag = 0.0;
        for (i, c) in v.iter().enumerate() {
            if c.norm() > best_mag {
                best_mag = c.norm();
                best = i;
            }
        }
        if best_mag > 0.0 {
            let ph = v[best] / C64::new(best_mag, 0.0);
            v *= ph.conj();
        }
        vectors.set_column(col, &v);
    }
    EigenDecomposition { values, vectors }
}

/// Eigendecomposition of a validated Hermitian operator. Values ascending,
/// reconstruction residual at round-off level.
pub fn eig_hermitian(h: &HermitianOperator) -> EigenDecomposition {
    eig_of(h.matrix())
}

/// Same decomposition for a density matrix (used by entropy and fidelity).
pub fn eig_density(rho: &DensityMatrix) -> EigenDecomposition {
    eig_of(rho.matrix())
}

fn clip_population(v: f64) -> f64 {
    if v < 0.0 {
        0.0
    } else {
        v
    }
}

/// Matrix square root of a PSD Hermitian matrix via eigendecomposition.
fn psd_sqrt(m: &DMatrix<C64>) -> DMatrix<C64> {
    let eig = eig_of(m);
    let d = DVector::from_iterator(
        eig.values.len(),
        eig.values
            .iter()
            .map(|&v| C64::new(clip_population(v).sqrt(), 0.0)),
    );
    &eig.vectors * DMatrix::from_diagonal(&d) * eig.vectors.adjoint()
}

/// Uhlmann fidelity F(rho, sigma) = (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64, QuantumError> {
    if rho.dim() != sigma.dim() {
        return Err(QuantumError::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let sr = psd_sqrt(rho.matrix());
    let inner = &sr * sigma.matrix() * &sr;
    let eig = eig_of(&inner);
    let s: f64 = eig
        .values
        .iter()
        .map(|&v| clip_population(v).sqrt())
        .sum();
    Ok((s * s).clamp(0.0, 1.0))
}

/// Von Neumann entropy -tr(rho ln rho), with 0 ln 0 := 0.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let eig = eig_density(rho);
    -eig.values
        .iter()
        .map(|&v| {
            let p = clip_population(v);
            if p > 0.0 {
                p * p.ln()
            } else {
                0.0
            }
        })
        .sum::<f64>()
}

/// Relative entropy S(rho || sigma) = tr(rho ln rho) - tr(rho ln sigma).
///
/// Returns `f64::INFINITY` as the designated sentinel when the support of rho
/// leaks outside the support of sigma (a sigma eigenvalue below 1e-14 carrying
/// rho-weight above 1e-12): there Eq.-style relative entropy is unbounded and
/// clipping would silently corrupt downstream boundary plots.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64, QuantumError> {
    if rho.dim() != sigma.dim() {
        return Err(QuantumError::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let re = eig_density(rho);
    let tr_rho_ln_rho: f64 = re
        .values
        .iter()
        .map(|&v| {
            let p = clip_population(v);
            if p > 0.0 {
                p * p.ln()
            } else {
                0.0
            }
        })
        .sum();
    let se = eig_density(sigma);
    let mut tr_rho_ln_sigma = 0.0;
    for j in 0..sigma.dim() {
        let mu = clip_population(se.values[j]);
        let u = se.vectors.column(j);
        // <u_j| rho |u_j>
        let w = (u.adjoint() * rho.matrix() * u)[(0, 0)].re.max(0.0);
        if mu < RELENT_SUPPORT_TOL {
            if w > RELENT_RHO_WEIGHT_TOL {
                return Ok(f64::INFINITY);
            }
            // weight at round-off level on a null direction contributes nothing
        } else {
            tr_rho_ln_sigma += w * mu.ln();
        }
    }
    Ok((tr_rho_ln_rho - tr_rho_ln_sigma).max(0.0))
}

/// rho with all off-diagonal elements removed in the given basis.
pub fn dephase_in_basis(
    rho: &DensityMatrix,
    basis: &EigenDecomposition,
) -> Result<DensityMatrix, QuantumError> {
    if rho.dim() != basis.dim() {
        return Err(QuantumError::DimensionMismatch {
            left: rho.dim(),
            right: basis.dim(),
        });
    }
    let v = &basis.vectors;
    let in_basis = v.adjoint() * rho.matrix() * v;
    let mut diag = DMatrix::<C64>::zeros(rho.dim(), rho.dim());
    for i in 0..rho.dim() {
        diag[(i, i)] = C64::new(in_basis[(i, i)].re, 0.0);
    }
    Ok(DensityMatrix {
        m: v * diag * v.adjoint(),
    })
}

/// Relative entropy of coherence C_rel(rho) = S(rho_diag) - S(rho) in `basis`.
pub fn rel_entropy_of_coherence(
    rho: &DensityMatrix,
    basis: &EigenDecomposition,
) -> Result<f64, QuantumError> {
    let dephased = dephase_in_basis(rho, basis)?;
    Ok((von_neumann_entropy(&dephased) - von_neumann_entropy(rho)).max(0.0))
}

/// Gibbs state exp(-beta H)/Z, computed in the eigenbasis of H with the
/// ground energy subtracted for overflow safety.
pub fn thermal_state(h: &HermitianOperator, beta: f64) -> Result<DensityMatrix, QuantumError> {
    if !(beta > 0.0) {
        return Err(QuantumError::BadBeta { beta });
    }
    let eig = eig_hermitian(h);
    let e0 = eig.values[0];
    let weights: Vec<f64> = eig.values.iter().map(|&e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let d = DVector::from_iterator(
        weights.len(),
        weights.iter().map(|&w| C64::new(w / z, 0.0)),
    );
    let m = &eig.vectors * DMatrix::from_diagonal(&d) * eig.vectors.adjoint();
    Ok(DensityMatrix { m })
}

/// Gibbs populations exp(-beta E_i)/Z for an arbitrary list of level energies
/// (kept in the order given, which need not be sorted).
pub fn gibbs_populations(energies: &[f64], beta: f64) -> Result<Vec<f64>, QuantumError> {
    if !(beta > 0.0) {
        return Err(QuantumError::BadBeta { beta });
    }
    let e0 = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = energies.iter().map(|&e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = w.iter().sum();
    Ok(w.into_iter().map(|x| x / z).collect())
}

/// Pauli matrices in the sigma_z eigenbasis (|up>, |down>), sigma_z|up> = +|up>.
pub fn pauli_x() -> DMatrix<C64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
        ],
    )
}

pub fn pauli_y() -> DMatrix<C64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        ],
    )
}

pub fn pauli_z() -> DMatrix<C64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(-1.0, 0.0),
        ],
    )
}

/// Kronecker product helper for building the two-qubit operators.
pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}
