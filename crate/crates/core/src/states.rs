//! Random-state generation and the named initial-state families.
//!
//! Family matrices live in the level basis (entry (i,i) is the population of
//! branch level i), matching how the analysis expresses its states; use
//! [`crate::thermo::StrokeContext::to_computational`] to turn one into a
//! computational-basis operator. Haar and Hilbert-Schmidt samples are
//! basis-invariant ensembles, so the distinction does not affect them.
//!
//! Sampling is counter-based: sample `index` under `seed` draws from
//! ChaCha8 seeded with `seed` on stream `index`, so batches can be generated
//! independently and reproducibly in any order.

use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

use crate::error::StateError;
use crate::models::TwoQubitModel;
use crate::quantum::{gibbs_populations, DensityMatrix, C64};
use crate::thermo::StrokeContext;

/// Selector for the state generators exposed to scenario files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateFamilyTag {
    Diagonal,
    MaxCoherent,
    CoherentThermal,
    RedBoundary1,
    RedBoundary2,
    HaarPure,
    RandomMixed,
    WorkMax,
    EntropyZero,
}

impl StateFamilyTag {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Diagonal => "diagonal",
            Self::MaxCoherent => "max_coherent",
            Self::CoherentThermal => "coherent_thermal",
            Self::RedBoundary1 => "red_boundary_1",
            Self::RedBoundary2 => "red_boundary_2",
            Self::HaarPure => "haar_pure",
            Self::RandomMixed => "random_mixed",
            Self::WorkMax => "work_max",
            Self::EntropyZero => "entropy_zero",
        }
    }

    pub const ALL: [StateFamilyTag; 9] = [
        Self::Diagonal,
        Self::MaxCoherent,
        Self::CoherentThermal,
        Self::RedBoundary1,
        Self::RedBoundary2,
        Self::HaarPure,
        Self::RandomMixed,
        Self::WorkMax,
        Self::EntropyZero,
    ];
}

impl FromStr for StateFamilyTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown state family '{s}'"))
    }
}

fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn check_dim(family: &'static str, dim: usize, expected: usize) -> Result<(), StateError> {
    if dim != expected {
        return Err(StateError::WrongDimension {
            family,
            expected,
            actual: dim,
        });
    }
    Ok(())
}

fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<(), StateError> {
    if !(lo..=hi).contains(&value) || value.is_nan() {
        return Err(StateError::ParameterOutOfRange { name, value, range });
    }
    Ok(())
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) / C64::new(std::f64::consts::SQRT_2, 0.0)
}

/// Uniform (Haar) random pure state as a rank-one projector.
pub fn haar_pure(dim: usize, seed: u64) -> Result<DensityMatrix, StateError> {
    haar_pure_indexed(dim, seed, 0)
}

/// Sample `index` of the Haar ensemble under `seed`.
pub fn haar_pure_indexed(dim: usize, seed: u64, index: u64) -> Result<DensityMatrix, StateError> {
    if dim != 2 && dim != 4 {
        return Err(StateError::Quantum(
            crate::error::QuantumError::BadDimension { dim },
        ));
    }
    let mut rng = rng_for(seed, index);
    let amps: Vec<C64> = (0..dim).map(|_| complex_gaussian(&mut rng)).collect();
    Ok(DensityMatrix::pure_from(&amps)?)
}

/// Hilbert-Schmidt-distributed full-rank mixed state: G G^dag normalized for
/// a square complex Gaussian G.
pub fn random_mixed(dim: usize, seed: u64) -> Result<DensityMatrix, StateError> {
    random_mixed_indexed(dim, seed, 0)
}

pub fn random_mixed_indexed(
    dim: usize,
    seed: u64,
    index: u64,
) -> Result<DensityMatrix, StateError> {
    if dim != 2 && dim != 4 {
        return Err(StateError::Quantum(
            crate::error::QuantumError::BadDimension { dim },
        ));
    }
    let mut rng = rng_for(seed, index);
    let mut g = DMatrix::<C64>::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            g[(i, j)] = complex_gaussian(&mut rng);
        }
    }
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    Ok(DensityMatrix::new(m / C64::new(tr, 0.0))?)
}

/// Closed-form family members (level-basis matrices).
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// diag(a, 1-a) on a two-level medium.
    Diagonal { a: f64 },
    /// Pure state with populations (a, 1-a) and coherence c = sqrt(a - a^2)
    /// times a phase.
    MaxCoherent { a: f64, phase: f64 },
    /// Gibbs populations (t1, 1-t1) of the final two-level spectrum plus an
    /// off-diagonal element c_prime in [0, sqrt(t1(1-t1))].
    CoherentThermal { t1: f64, c_prime: f64, phase: f64 },
    /// Four-level state populated on levels 1 and 3 only; `c` defaults to the
    /// maximal coherence sqrt(a - a^2).
    RedBoundary1 { a: f64, c: Option<f64>, phase: f64 },
    /// Same on levels 1 and 2.
    RedBoundary2 { a: f64, c: Option<f64>, phase: f64 },
    /// diag(d) on a four-level medium.
    DiagonalFour { d: [f64; 4] },
    /// Pure four-level state sum_i sqrt(d_i) e^{i phi_i} |i>; the maximally
    /// coherent state at those populations.
    PureFour { d: [f64; 4], phases: [f64; 4] },
}

/// Build one family member.
pub fn family(f: &Family) -> Result<DensityMatrix, StateError> {
    match *f {
        Family::Diagonal { a } => {
            check_range("a", a, 0.0, 1.0, "[0, 1]")?;
            Ok(DensityMatrix::from_real_diagonal(&[a, 1.0 - a])?)
        }
        Family::MaxCoherent { a, phase } => {
            check_range("a", a, 0.0, 1.0, "[0, 1]")?;
            let amps = [
                C64::from_polar(a.sqrt(), 0.0),
                C64::from_polar((1.0 - a).sqrt(), phase),
            ];
            Ok(DensityMatrix::pure_from(&amps)?)
        }
        Family::CoherentThermal { t1, c_prime, phase } => {
            check_range("t1", t1, 0.0, 1.0, "[0, 1]")?;
            let cmax = (t1 * (1.0 - t1)).max(0.0).sqrt();
            check_range("c_prime", c_prime, 0.0, cmax, "[0, sqrt(t1 t2)]")?;
            let mut m = DMatrix::<C64>::zeros(2, 2);
            m[(0, 0)] = C64::new(t1, 0.0);
            m[(1, 1)] = C64::new(1.0 - t1, 0.0);
            m[(0, 1)] = C64::from_polar(c_prime, phase);
            m[(1, 0)] = C64::from_polar(c_prime, -phase);
            Ok(DensityMatrix::new(m)?)
        }
        Family::RedBoundary1 { a, c, phase } => two_level_support(a, c, phase, 0, 2),
        Family::RedBoundary2 { a, c, phase } => two_level_support(a, c, phase, 0, 1),
        Family::DiagonalFour { d } => {
            for &x in &d {
                check_range("d", x, 0.0, 1.0, "[0, 1]")?;
            }
            let total: f64 = d.iter().sum();
            check_range("sum(d)", total, 1.0 - 1e-10, 1.0 + 1e-10, "1")?;
            Ok(DensityMatrix::from_real_diagonal(&d)?)
        }
        Family::PureFour { d, phases } => {
            for &x in &d {
                check_range("d", x, 0.0, 1.0, "[0, 1]")?;
            }
            let total: f64 = d.iter().sum();
            check_range("sum(d)", total, 1.0 - 1e-10, 1.0 + 1e-10, "1")?;
            let amps: Vec<C64> = d
                .iter()
                .zip(phases.iter())
                .map(|(&p, &ph)| C64::from_polar(p.sqrt(), ph))
                .collect();
            Ok(DensityMatrix::pure_from(&amps)?)
        }
    }
}

fn two_level_support(
    a: f64,
    c: Option<f64>,
    phase: f64,
    i: usize,
    j: usize,
) -> Result<DensityMatrix, StateError> {
    check_range("a", a, 0.0, 1.0, "[0, 1]")?;
    let cmax = (a * (1.0 - a)).max(0.0).sqrt();
    let c = c.unwrap_or(cmax);
    check_range("c", c, 0.0, cmax, "[0, sqrt(a - a^2)]")?;
    let mut m = DMatrix::<C64>::zeros(4, 4);
    m[(i, i)] = C64::new(a, 0.0);
    m[(j, j)] = C64::new(1.0 - a, 0.0);
    m[(i, j)] = C64::from_polar(c, phase);
    m[(j, i)] = C64::from_polar(c, -phase);
    Ok(DensityMatrix::new(m)?)
}

/// The two distinguished initial states of a two-qubit stroke: the maximal
/// work extractor and the zero-entropy-production state.
#[derive(Debug, Clone)]
pub struct SpecialTwoQubitStates {
    /// Levels attaining max_i (E_0^i - E_tau^i); more than one entry when the
    /// maximum is degenerate.
    pub work_max_levels: Vec<usize>,
    /// Indicator state on each maximizing level (level basis).
    pub work_max: Vec<DensityMatrix>,
    /// Gibbs populations of the final spectrum placed on the branch-matched
    /// initial levels (level basis); transports exactly onto the Gibbs state.
    pub entropy_zero: DensityMatrix,
}

pub fn special_states_two_qubit(
    model: &TwoQubitModel,
    beta: f64,
) -> Result<SpecialTwoQubitStates, StateError> {
    let e0 = model
        .eigenvalues_closed_at_j(0.0)
        .map_err(|e| StateError::Thermo(crate::error::FrameError::Model(e).into()))?;
    let e_tau = model
        .eigenvalues_closed_at_j(1.0)
        .map_err(|e| StateError::Thermo(crate::error::FrameError::Model(e).into()))?;
    let drops: Vec<f64> = e0.iter().zip(e_tau.iter()).map(|(&a, &b)| a - b).collect();
    let best = drops.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let work_max_levels: Vec<usize> = drops
        .iter()
        .enumerate()
        .filter(|(_, &d)| (d - best).abs() <= 1e-12)
        .map(|(i, _)| i)
        .collect();
    let work_max = work_max_levels
        .iter()
        .map(|&level| {
            let mut d = [0.0; 4];
            d[level] = 1.0;
            DensityMatrix::from_real_diagonal(&d).map_err(StateError::Quantum)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let pops = gibbs_populations(&e_tau, beta)
        .map_err(StateError::Quantum)?;
    let entropy_zero = DensityMatrix::from_real_diagonal(&pops)?;
    Ok(SpecialTwoQubitStates {
        work_max_levels,
        work_max,
        entropy_zero,
    })
}

/// Everything a sampler needs to know about the medium.
#[derive(Debug, Clone)]
pub struct SampleSpace<'a> {
    pub dim: usize,
    /// Gibbs populations of the final spectrum, level-label order.
    pub thermal_pops: &'a [f64],
    /// Level shifts E_tau^i - E_0^i, level-label order.
    pub level_shifts: &'a [f64],
}

impl<'a> SampleSpace<'a> {
    pub fn from_context(ctx: &'a StrokeContext, shifts: &'a [f64]) -> Self {
        Self {
            dim: ctx.dim(),
            thermal_pops: &ctx.thermal_pops,
            level_shifts: shifts,
        }
    }
}

fn random_simplex(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    // exponential spacings give the flat Dirichlet
    let mut d: Vec<f64> = (0..dim)
        .map(|_| -rng.gen_range(f64::MIN_POSITIVE..1.0f64).ln())
        .collect();
    let s: f64 = d.iter().sum();
    d.iter_mut().for_each(|x| *x /= s);
    d
}

/// Draw sample `index` of a family under `seed`. Deterministic families
/// (work_max, entropy_zero) ignore the randomness.
pub fn sample_family(
    tag: StateFamilyTag,
    space: &SampleSpace<'_>,
    seed: u64,
    index: u64,
) -> Result<DensityMatrix, StateError> {
    let mut rng = rng_for(seed, index);
    match tag {
        StateFamilyTag::HaarPure => haar_pure_indexed(space.dim, seed, index),
        StateFamilyTag::RandomMixed => random_mixed_indexed(space.dim, seed, index),
        StateFamilyTag::Diagonal => {
            if space.dim == 2 {
                family(&Family::Diagonal {
                    a: rng.gen_range(0.0..=1.0),
                })
            } else {
                let d = random_simplex(4, &mut rng);
                family(&Family::DiagonalFour {
                    d: [d[0], d[1], d[2], d[3]],
                })
            }
        }
        StateFamilyTag::MaxCoherent => {
            if space.dim == 2 {
                family(&Family::MaxCoherent {
                    a: rng.gen_range(0.0..=1.0),
                    phase: rng.gen_range(0.0..2.0 * PI),
                })
            } else {
                let d = random_simplex(4, &mut rng);
                let phases = [
                    rng.gen_range(0.0..2.0 * PI),
                    rng.gen_range(0.0..2.0 * PI),
                    rng.gen_range(0.0..2.0 * PI),
                    rng.gen_range(0.0..2.0 * PI),
                ];
                family(&Family::PureFour {
                    d: [d[0], d[1], d[2], d[3]],
                    phases,
                })
            }
        }
        StateFamilyTag::CoherentThermal => {
            check_dim("coherent_thermal", space.dim, 2)?;
            let t1 = space.thermal_pops[0];
            let cmax = (t1 * (1.0 - t1)).sqrt();
            family(&Family::CoherentThermal {
                t1,
                c_prime: rng.gen_range(0.0..=cmax),
                phase: rng.gen_range(0.0..2.0 * PI),
            })
        }
        StateFamilyTag::RedBoundary1 => {
            check_dim("red_boundary_1", space.dim, 4)?;
            family(&Family::RedBoundary1 {
                a: rng.gen_range(0.0..=1.0),
                c: None,
                phase: 0.0,
            })
        }
        StateFamilyTag::RedBoundary2 => {
            check_dim("red_boundary_2", space.dim, 4)?;
            family(&Family::RedBoundary2 {
                a: rng.gen_range(0.0..=1.0),
                c: None,
                phase: 0.0,
            })
        }
        StateFamilyTag::WorkMax => {
            check_dim("work_max", space.dim, 4)?;
            let drops: Vec<f64> = space.level_shifts.iter().map(|&d| -d).collect();
            let best = drops.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let level = drops
                .iter()
                .position(|&d| (d - best).abs() <= 1e-12)
                .expect("argmax exists");
            let mut d = [0.0; 4];
            d[level] = 1.0;
            Ok(DensityMatrix::from_real_diagonal(&d)?)
        }
        StateFamilyTag::EntropyZero => {
            Ok(DensityMatrix::from_real_diagonal(space.thermal_pops)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{LevelResolved, TwoQubitModel};
    use crate::quantum::{rel_entropy_of_coherence, von_neumann_entropy, EigenDecomposition};
    use approx::assert_relative_eq;

    fn identity_basis(dim: usize) -> EigenDecomposition {
        EigenDecomposition {
            values: vec![0.0; dim],
            vectors: DMatrix::<C64>::identity(dim, dim),
        }
    }

    #[test]
    fn haar_pure_is_rank_one_and_deterministic() {
        for dim in [2usize, 4] {
            let a = haar_pure(dim, 7).unwrap();
            assert_relative_eq!(a.purity(), 1.0, epsilon = 1e-12);
            let b = haar_pure(dim, 7).unwrap();
            assert_eq!(a.matrix(), b.matrix());
            let c = haar_pure(dim, 8).unwrap();
            assert!((a.matrix() - c.matrix()).iter().any(|x| x.norm() > 1e-6));
        }
    }

    #[test]
    fn haar_mean_approaches_maximally_mixed() {
        for dim in [2usize, 4] {
            let n = 10_000u64;
            let mut mean = DMatrix::<C64>::zeros(dim, dim);
            for k in 0..n {
                mean += haar_pure_indexed(dim, 1234, k).unwrap().matrix();
            }
            mean /= C64::new(n as f64, 0.0);
            // diagonal entries are Dirichlet(1,..,1) marginals:
            // var = (d-1)/(d^2 (d+1))
            let var_diag = (dim as f64 - 1.0) / ((dim * dim) as f64 * (dim as f64 + 1.0));
            let tol_diag = 3.0 * (var_diag / n as f64).sqrt();
            // off-diagonal parts have E|rho_ij|^2 = 1/(d(d+1)), split evenly
            let var_off = 0.5 / (dim as f64 * (dim as f64 + 1.0));
            let tol_off = 3.0 * (var_off / n as f64).sqrt();
            for i in 0..dim {
                assert!(
                    (mean[(i, i)].re - 1.0 / dim as f64).abs() <= tol_diag,
                    "diag ({i},{i}): {}",
                    mean[(i, i)].re
                );
                for j in 0..dim {
                    if i != j {
                        assert!(mean[(i, j)].re.abs() <= tol_off);
                        assert!(mean[(i, j)].im.abs() <= tol_off);
                    }
                }
            }
        }
    }

    #[test]
    fn random_mixed_matches_hilbert_schmidt_statistics() {
        let n = 10_000u64;
        let mut spread_sum = 0.0;
        let mut top_sum = 0.0;
        for k in 0..n {
            let rho = random_mixed_indexed(2, 99, k).unwrap();
            let eig = crate::quantum::eig_density(&rho);
            spread_sum += eig.values[1] - eig.values[0];
            top_sum += eig.values[1];
        }
        // flat measure on the state space: mean spread 3/4, mean top 7/8
        assert!((spread_sum / n as f64 - 0.75).abs() <= 0.01);
        assert!((top_sum / n as f64 - 0.875).abs() <= 0.01);
    }

    #[test]
    fn random_mixed_valid_and_full_rank() {
        for dim in [2usize, 4] {
            for k in 0..200 {
                let rho = random_mixed_indexed(dim, 5, k).unwrap();
                let eig = crate::quantum::eig_density(&rho);
                assert!(eig.values[0] > 0.0, "rank-deficient sample");
            }
        }
    }

    #[test]
    fn mixed_coherence_values_fill_the_range() {
        let basis = identity_basis(2);
        let mut values: Vec<f64> = (0..10_000u64)
            .map(|k| {
                let rho = random_mixed_indexed(2, 31, k).unwrap();
                rel_entropy_of_coherence(&rho, &basis).unwrap()
            })
            .collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let max = *values.last().unwrap();
        assert!(values[0] < 0.01);
        assert!(max > 0.4, "max coherence {max}");
        assert!(max < 2.0f64.ln() + 1e-12);
        // occupancy of ten equal bins up to the observed max
        let mut bins = [0usize; 10];
        for v in &values {
            let b = ((v / max) * 10.0).min(9.0) as usize;
            bins[b] += 1;
        }
        assert!(bins.iter().all(|&c| c > 0), "gaps in coverage: {bins:?}");
    }

    #[test]
    fn max_coherent_family_is_pure() {
        for k in 0..100 {
            let a = k as f64 / 100.0;
            let rho = family(&Family::MaxCoherent { a, phase: 0.3 }).unwrap();
            assert!(von_neumann_entropy(&rho) <= 1e-10);
        }
    }

    #[test]
    fn max_coherent_midpoint_has_half_offdiagonal() {
        let rho = family(&Family::MaxCoherent { a: 0.5, phase: 0.0 }).unwrap();
        assert_relative_eq!(rho.matrix()[(0, 1)].re, 0.5, epsilon = 1e-12);
        assert_relative_eq!(rho.purity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn coherent_thermal_with_zero_coherence_is_gibbs_diagonal() {
        let w1 = 1.0 + (PI / 2.0).tanh();
        let t1 = 1.0 / (1.0 + w1.exp());
        let rho = family(&Family::CoherentThermal {
            t1,
            c_prime: 0.0,
            phase: 0.0,
        })
        .unwrap();
        assert_relative_eq!(rho.matrix()[(0, 0)].re, t1, epsilon = 1e-12);
        assert!(rho.matrix()[(0, 1)].norm() == 0.0);
    }

    #[test]
    fn red_families_have_the_right_support() {
        let r1 = family(&Family::RedBoundary1 {
            a: 0.3,
            c: None,
            phase: 0.0,
        })
        .unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected_nonzero =
                    (i == 0 && j == 0) || (i == 2 && j == 2) || (i == 0 && j == 2) || (i == 2 && j == 0);
                assert_eq!(r1.matrix()[(i, j)].norm() > 1e-15, expected_nonzero);
            }
        }
        let r2 = family(&Family::RedBoundary2 {
            a: 0.3,
            c: None,
            phase: 0.0,
        })
        .unwrap();
        assert!(r2.matrix()[(0, 1)].norm() > 0.0);
        assert!(r2.matrix()[(2, 2)].norm() == 0.0);
    }

    #[test]
    fn red_family_coherence_hits_the_binary_entropy_bound() {
        let basis = identity_basis(4);
        for k in 1..20 {
            let a = k as f64 / 20.0;
            let rho = family(&Family::RedBoundary1 {
                a,
                c: None,
                phase: 0.0,
            })
            .unwrap();
            let c = rel_entropy_of_coherence(&rho, &basis).unwrap();
            let h2 = -(a * a.ln() + (1.0 - a) * (1.0 - a).ln());
            assert_relative_eq!(c, h2, epsilon = 1e-9);
        }
    }

    #[test]
    fn family_parameters_validated() {
        assert!(matches!(
            family(&Family::Diagonal { a: 1.2 }),
            Err(StateError::ParameterOutOfRange { .. })
        ));
        assert!(matches!(
            family(&Family::CoherentThermal {
                t1: 0.2,
                c_prime: 0.9,
                phase: 0.0
            }),
            Err(StateError::ParameterOutOfRange { .. })
        ));
        assert!(matches!(
            family(&Family::RedBoundary1 {
                a: 0.5,
                c: Some(0.6),
                phase: 0.0
            }),
            Err(StateError::ParameterOutOfRange { .. })
        ));
    }

    #[test]
    fn special_states_isotropic() {
        let m = TwoQubitModel::isotropic(1.0).unwrap();
        let special = special_states_two_qubit(&m, 1.0).unwrap();
        assert_eq!(special.work_max_levels, vec![2]);
        let d = special.work_max[0].diagonal_real();
        assert_eq!(d, vec![0.0, 0.0, 1.0, 0.0]);

        // transported entropy_zero is the Gibbs state: zero production
        let ctx = StrokeContext::new(&m, 1.0).unwrap();
        let out = ctx.stroke(&special.entropy_zero).unwrap();
        assert!(out.s_irr <= 1e-10);
    }

    #[test]
    fn entropy_zero_populations_permute_past_the_crossing() {
        // gamma beyond the final-spectrum crossing: branch 3 dives below
        // branch 4, so the Gibbs weights on branch labels are no longer
        // sorted against the initial level order
        let before = TwoQubitModel::new(1.5, 0.5, 1.0, 1.0, 0.3, 1.0).unwrap();
        let after = TwoQubitModel::new(1.5, 0.5, 1.0, 1.0, 1.2, 1.0).unwrap();
        let sb = special_states_two_qubit(&before, 1.0).unwrap();
        let sa = special_states_two_qubit(&after, 1.0).unwrap();
        let db = sb.entropy_zero.diagonal_real();
        let da = sa.entropy_zero.diagonal_real();
        // initial energies descend with the branch label, so the Gibbs
        // weights listed by label ascend before the crossing
        assert!(db[3] > db[2] && db[2] > db[1] && db[1] > db[0]);
        // after the crossing the weight of branch 3 overtakes branch 4
        assert!(da[2] > da[3], "expected permuted populations: {da:?}");

        let ctx = StrokeContext::new(&after, 1.0).unwrap();
        assert!(ctx.stroke(&sa.entropy_zero).unwrap().s_irr <= 1e-10);
    }

    #[test]
    fn degenerate_work_maximizers_are_all_reported() {
        // alpha = beta = gamma = 0 decouples the qubits; level shifts pair up
        let m = TwoQubitModel::new(1.0, 1.0, 0.0, 0.0, 0.0, 1.0).unwrap();
        let special = special_states_two_qubit(&m, 1.0).unwrap();
        assert!(special.work_max_levels.len() > 1);
        assert_eq!(special.work_max.len(), special.work_max_levels.len());
    }

    #[test]
    fn sampled_families_are_valid_states() {
        let m = TwoQubitModel::isotropic(1.0).unwrap();
        let ctx = StrokeContext::new(&m, 1.0).unwrap();
        let shifts = ctx.level_shifts();
        let space = SampleSpace::from_context(&ctx, &shifts);
        for tag in [
            StateFamilyTag::Diagonal,
            StateFamilyTag::MaxCoherent,
            StateFamilyTag::RedBoundary1,
            StateFamilyTag::RedBoundary2,
            StateFamilyTag::HaarPure,
            StateFamilyTag::RandomMixed,
            StateFamilyTag::WorkMax,
            StateFamilyTag::EntropyZero,
        ] {
            for k in 0..100 {
                // DensityMatrix::new validates trace/hermiticity/positivity
                let rho = sample_family(tag, &space, 11, k).unwrap();
                assert_eq!(rho.dim(), 4);
            }
        }
    }

    #[test]
    fn sampling_is_reproducible_per_index() {
        let m = TwoQubitModel::isotropic(1.0).unwrap();
        let ctx = StrokeContext::new(&m, 1.0).unwrap();
        let shifts = ctx.level_shifts();
        let space = SampleSpace::from_context(&ctx, &shifts);
        let a = sample_family(StateFamilyTag::MaxCoherent, &space, 21, 5).unwrap();
        let b = sample_family(StateFamilyTag::MaxCoherent, &space, 21, 5).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        let c = sample_family(StateFamilyTag::MaxCoherent, &space, 21, 6).unwrap();
        assert!((a.matrix() - c.matrix()).iter().any(|x| x.norm() > 1e-9));
    }

    #[test]
    fn family_tag_round_trips_through_strings() {
        for tag in StateFamilyTag::ALL {
            assert_eq!(tag.as_str().parse::<StateFamilyTag>().unwrap(), tag);
        }
        assert!("nonsense".parse::<StateFamilyTag>().is_err());
    }

    #[test]
    fn two_qubit_levels_used_by_families_match_model_order() {
        // guard: the level labeling the red families rely on must match the
        // model's branch order at s=0 (level 1 highest for eps1 > eps2 > 0)
        let m = TwoQubitModel::new(1.5, 0.5, 1.0, 1.0, 0.0, 1.0).unwrap();
        let lv = m.levels(0.0).unwrap();
        assert!(lv.energies[0] > lv.energies[1]);
        assert!(lv.energies[1] > lv.energies[2]);
        assert!(lv.energies[2] > lv.energies[3]);
    }
}
