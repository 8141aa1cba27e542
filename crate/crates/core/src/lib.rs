//! Simulation and analysis toolkit for transitionless driving on one- and
//! two-qubit work media: shortcut Hamiltonians, finite-time dynamics, and the
//! work / irreversible-entropy / coherence relations over initial states.

pub mod cd;
pub mod error;
pub mod frontier;
pub mod models;
pub mod propagator;
pub mod quantum;
pub mod states;
pub mod thermo;

pub use cd::{build_eigenframe, counterdiabatic_numeric, verify_against_analytic, EigenFrame};
pub use error::{
    FrameError, FrontierError, ModelError, PropagatorError, QuantumError, StateError, ThermoError,
};
pub use models::{
    schedule_b, schedule_j, schedule_omega, ConstantSchedule, DriveSchedule, LevelFrame,
    LevelResolved, SingleQubitModel, TwoQubitModel,
};
pub use frontier::{
    frontier_point, locate_crossings, max_sirr_at_work, min_sirr_at_work, sweep_parameter,
    trace_frontier, FrontierFamily, FrontierPoint, SweepParam, SweepPoint,
};
pub use propagator::{adiabatic_transport, evolve, fidelity_curve, EvolutionResult};
pub use states::{
    family, haar_pure, random_mixed, sample_family, special_states_two_qubit, Family, SampleSpace,
    SpecialTwoQubitStates, StateFamilyTag,
};
pub use thermo::{sirr, sirr_adiabatic, stroke, work, work_adiabatic, StrokeContext, StrokeOutcome};
pub use quantum::{
    eig_hermitian, fidelity, relative_entropy, rel_entropy_of_coherence, thermal_state,
    von_neumann_entropy, DensityMatrix, EigenDecomposition, HermitianOperator, C64,
};
