use thiserror::Error;

/// Errors raised by the linear-algebra and state types.
#[derive(Debug, Clone, Error)]
pub enum QuantumError {
    #[error("matrix is not Hermitian: max |H - H^dag| entry = {defect:e}")]
    NotHermitian { defect: f64 },
    #[error("unsupported dimension {dim} (expected 2 or 4)")]
    BadDimension { dim: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("trace is {trace} (must be 1 within 1e-10)")]
    BadTrace { trace: f64 },
    #[error("density matrix has eigenvalue {value:e} below -1e-10")]
    NegativeEigenvalue { value: f64 },
    #[error("inverse temperature must be positive, got {beta}")]
    BadBeta { beta: f64 },
}

/// Errors raised by the model schedules.
#[derive(Debug, Clone, Error)]
pub enum ModelError {
    #[error("schedule parameter s = {s} outside [0, 1]")]
    OutOfRange { s: f64 },
    #[error("total duration tau must be positive, got {tau}")]
    BadTau { tau: f64 },
}

/// Errors raised while building or differentiating eigenframes.
#[derive(Debug, Clone, Error)]
pub enum FrameError {
    #[error("grid must have at least 3 odd-many points, got {n_grid}")]
    BadGrid { n_grid: usize },
    #[error("eigenvector assignment ambiguous near s = {s}: candidate overlaps {first:.6} and {second:.6} differ by less than 1e-3")]
    UnresolvedDegeneracy { s: f64, first: f64, second: f64 },
    #[error("counterdiabatic term requested at degenerate grid point s = {s} with nonzero coupling")]
    DegenerateCoupling { s: f64 },
    #[error("grid index {k} out of range for frame of {n} points")]
    IndexOutOfRange { k: usize, n: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// Errors raised by the time propagator.
#[derive(Debug, Clone, Error)]
pub enum PropagatorError {
    #[error("step count {steps} below minimum of 100")]
    TooFewSteps { steps: usize },
    #[error("unitarity defect {defect:e} exceeds 1e-6; increase the step count")]
    UnitarityLost { defect: f64 },
    #[error("tau list must be nonempty with positive entries")]
    BadTauList,
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// Errors raised by thermodynamic functionals.
#[derive(Debug, Clone, Error)]
pub enum ThermoError {
    #[error("population/level length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("thermal population {value:e} at level {level} is not strictly positive")]
    ZeroThermalPopulation { level: usize, value: f64 },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Propagator(#[from] PropagatorError),
}

/// Errors raised by the state generators.
#[derive(Debug, Clone, Error)]
pub enum StateError {
    #[error("family parameter {name} = {value} outside its valid range {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("family {family} is only defined for dimension {expected}, model has dimension {actual}")]
    WrongDimension {
        family: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Thermo(#[from] ThermoError),
}

/// Errors raised by the frontier optimizer and parameter sweeps.
#[derive(Debug, Clone, Error)]
pub enum FrontierError {
    #[error("work target {c} infeasible: attainable interval is [{lo}, {hi}]")]
    InfeasibleWork { c: f64, lo: f64, hi: f64 },
    #[error("tilting root-finder did not converge after {iters} bisection steps")]
    RootFinderStalled { iters: usize },
    #[error("need at least 2 frontier points, got {n_points}")]
    TooFewPoints { n_points: usize },
    #[error("sweep values must be sorted ascending")]
    UnsortedSweep,
    #[error(transparent)]
    Thermo(#[from] ThermoError),
}
