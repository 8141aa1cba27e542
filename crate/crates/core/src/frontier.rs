//! Boundaries of the work / entropy-production region over initial states,
//! and parameter sweeps of the two-qubit medium with crossing detection.
//!
//! At fixed work value C the reachable entropy productions of diagonal states
//! form an interval: the lower end is the constrained KL minimum (solved
//! exactly by exponential tilting), the upper end sits on a vertex of the
//! feasible polytope (support of size at most two, enumerated in closed
//! form). Pure states replace the KL by the linear cross term, so both ends
//! are vertex problems.

use std::str::FromStr;

use crate::error::FrontierError;
use crate::models::TwoQubitModel;
use crate::quantum::gibbs_populations;

/// Which family of initial states the boundary is traced over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontierFamily {
    Diagonal,
    Pure,
}

impl FrontierFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Diagonal => "diagonal",
            Self::Pure => "pure",
        }
    }
}

impl FromStr for FrontierFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "diagonal" => Ok(Self::Diagonal),
            "pure" => Ok(Self::Pure),
            other => Err(format!("unknown frontier family '{other}'")),
        }
    }
}

/// One point of the work-entropy boundary.
#[derive(Debug, Clone)]
pub struct FrontierPoint {
    pub work_target: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub d_min: Vec<f64>,
    pub d_max: Vec<f64>,
}

fn span_of(delta: &[f64]) -> (f64, f64, f64) {
    let lo = delta.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = delta.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi, (hi - lo).max(f64::MIN_POSITIVE))
}

fn check_inputs(c: f64, delta: &[f64], pops: &[f64]) -> Result<(), FrontierError> {
    if delta.len() != pops.len() {
        return Err(FrontierError::Thermo(
            crate::error::ThermoError::LengthMismatch {
                left: delta.len(),
                right: pops.len(),
            },
        ));
    }
    for (level, &p) in pops.iter().enumerate() {
        if !(p > 0.0) {
            return Err(FrontierError::Thermo(
                crate::error::ThermoError::ZeroThermalPopulation { level, value: p },
            ));
        }
    }
    let (lo, hi, span) = span_of(delta);
    if c < lo - 1e-9 * span || c > hi + 1e-9 * span {
        return Err(FrontierError::InfeasibleWork { c, lo, hi });
    }
    Ok(())
}

fn kl_divergence(d: &[f64], p: &[f64]) -> f64 {
    d.iter()
        .zip(p.iter())
        .map(|(&x, &q)| if x > 0.0 { x * (x / q).ln() } else { 0.0 })
        .sum()
}

fn pure_cross(d: &[f64], p: &[f64]) -> f64 {
    -d.iter().zip(p.iter()).map(|(&x, &q)| x * q.ln()).sum::<f64>()
}

/// Gibbs reweighting restricted to the levels whose shift attains the edge.
fn edge_distribution(delta: &[f64], pops: &[f64], edge: f64, span: f64) -> Vec<f64> {
    let mut d = vec![0.0; delta.len()];
    let mut z = 0.0;
    for (i, &dv) in delta.iter().enumerate() {
        if (dv - edge).abs() <= 1e-12 * span {
            d[i] = pops[i];
            z += pops[i];
        }
    }
    d.iter_mut().for_each(|x| *x /= z);
    d
}

/// Tilted distribution d_i proportional to p_i exp(lambda delta_i), computed
/// with the usual max-shift for overflow safety.
fn tilted(lambda: f64, delta: &[f64], pops: &[f64]) -> Vec<f64> {
    let m = delta
        .iter()
        .map(|&d| lambda * d)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut w: Vec<f64> = delta
        .iter()
        .zip(pops.iter())
        .map(|(&d, &p)| (lambda * d - m + p.ln()).exp())
        .collect();
    let z: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= z);
    w
}

fn tilted_mean(lambda: f64, delta: &[f64], pops: &[f64]) -> f64 {
    tilted(lambda, delta, pops)
        .iter()
        .zip(delta.iter())
        .map(|(&d, &s)| d * s)
        .sum()
}

/// Solve the constrained KL minimum over the simplex by tilting: the
/// constraint expectation is strictly monotone in lambda, so a geometric
/// bracket expansion from [-1, 1] followed by bisection to 1e-12 pins it.
fn solve_tilting(c: f64, delta: &[f64], pops: &[f64]) -> Result<Vec<f64>, FrontierError> {
    let mut lo = -1.0f64;
    let mut hi = 1.0f64;
    let mut expansions = 0;
    while tilted_mean(lo, delta, pops) > c {
        lo *= 2.0;
        expansions += 1;
        if expansions > 80 {
            return Err(FrontierError::RootFinderStalled { iters: expansions });
        }
    }
    expansions = 0;
    while tilted_mean(hi, delta, pops) < c {
        hi *= 2.0;
        expansions += 1;
        if expansions > 80 {
            return Err(FrontierError::RootFinderStalled { iters: expansions });
        }
    }
    let mut iters = 0;
    while hi - lo > 1e-12 {
        iters += 1;
        if iters > 200 {
            return Err(FrontierError::RootFinderStalled { iters });
        }
        let mid = 0.5 * (lo + hi);
        if tilted_mean(mid, delta, pops) < c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(tilted(0.5 * (lo + hi), delta, pops))
}

/// Feasible-polytope vertices: population vectors with support of size at
/// most two satisfying both the normalization and the work constraint.
fn feasible_vertices(c: f64, delta: &[f64]) -> Vec<Vec<f64>> {
    let n = delta.len();
    let (_, _, span) = span_of(delta);
    let tol = 1e-9 * span;
    let mut vertices = Vec::new();
    for i in 0..n {
        if (delta[i] - c).abs() <= tol {
            let mut d = vec![0.0; n];
            d[i] = 1.0;
            vertices.push(d);
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = delta[i] - delta[j];
            if gap.abs() <= 1e-14 * span {
                continue;
            }
            let t = (c - delta[j]) / gap;
            if (-1e-12..=1.0 + 1e-12).contains(&t) {
                let t = t.clamp(0.0, 1.0);
                let mut d = vec![0.0; n];
                d[i] = t;
                d[j] = 1.0 - t;
                vertices.push(d);
            }
        }
    }
    vertices
}

/// Minimal entropy production at work value `c`: diagonal states minimize the
/// KL divergence from the Gibbs weights (exponential tilting), pure states
/// minimize the linear cross term (optimum on a polytope vertex).
pub fn min_sirr_at_work(
    c: f64,
    level_shifts: &[f64],
    thermal_pops: &[f64],
    family: FrontierFamily,
) -> Result<(f64, Vec<f64>), FrontierError> {
    check_inputs(c, level_shifts, thermal_pops)?;
    let (lo, hi, span) = span_of(level_shifts);
    if span <= 1e-14 {
        // all shifts equal: the work constraint is vacuous; the KL minimum
        // is the Gibbs point itself, the pure minimum the heaviest level
        return match family {
            FrontierFamily::Diagonal => Ok((0.0, thermal_pops.to_vec())),
            FrontierFamily::Pure => {
                let vertices: Vec<Vec<f64>> = (0..level_shifts.len())
                    .map(|i| {
                        let mut d = vec![0.0; level_shifts.len()];
                        d[i] = 1.0;
                        d
                    })
                    .collect();
                Ok(pick_extreme(vertices, thermal_pops, family, false))
            }
        };
    }
    let at_edge = (c - lo).abs() <= 1e-12 * span || (c - hi).abs() <= 1e-12 * span;
    match family {
        FrontierFamily::Diagonal => {
            if at_edge {
                let edge = if (c - lo).abs() <= 1e-12 * span { lo } else { hi };
                let d = edge_distribution(level_shifts, thermal_pops, edge, span);
                Ok((kl_divergence(&d, thermal_pops), d))
            } else {
                let d = solve_tilting(c, level_shifts, thermal_pops)?;
                Ok((kl_divergence(&d, thermal_pops), d))
            }
        }
        FrontierFamily::Pure => {
            let vertices = feasible_vertices(c, level_shifts);
            Ok(pick_extreme(vertices, thermal_pops, family, false))
        }
    }
}

/// Maximal entropy production at work value `c`: a convex (or linear)
/// objective over the feasible polytope peaks at a vertex, and every vertex
/// has support of size at most two.
pub fn max_sirr_at_work(
    c: f64,
    level_shifts: &[f64],
    thermal_pops: &[f64],
    family: FrontierFamily,
) -> Result<(f64, Vec<f64>), FrontierError> {
    check_inputs(c, level_shifts, thermal_pops)?;
    let (_, _, span) = span_of(level_shifts);
    let vertices = if span <= 1e-14 {
        (0..level_shifts.len())
            .map(|i| {
                let mut d = vec![0.0; level_shifts.len()];
                d[i] = 1.0;
                d
            })
            .collect()
    } else {
        feasible_vertices(c, level_shifts)
    };
    Ok(pick_extreme(vertices, thermal_pops, family, true))
}

fn pick_extreme(
    vertices: Vec<Vec<f64>>,
    pops: &[f64],
    family: FrontierFamily,
    maximize: bool,
) -> (f64, Vec<f64>) {
    debug_assert!(!vertices.is_empty());
    let objective = |d: &[f64]| match family {
        FrontierFamily::Diagonal => kl_divergence(d, pops),
        FrontierFamily::Pure => pure_cross(d, pops),
    };
    let mut best_value = if maximize {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    };
    let mut best = Vec::new();
    for v in vertices {
        let val = objective(&v);
        if (maximize && val > best_value) || (!maximize && val < best_value) {
            best_value = val;
            best = v;
        }
    }
    (best_value, best)
}

/// Both boundary values at one work target.
pub fn frontier_point(
    c: f64,
    level_shifts: &[f64],
    thermal_pops: &[f64],
    family: FrontierFamily,
) -> Result<FrontierPoint, FrontierError> {
    let (s_min, d_min) = min_sirr_at_work(c, level_shifts, thermal_pops, family)?;
    let (s_max, d_max) = max_sirr_at_work(c, level_shifts, thermal_pops, family)?;
    Ok(FrontierPoint {
        work_target: c,
        s_min,
        s_max,
        d_min,
        d_max,
    })
}

/// Trace the boundary over `n_points` work values spanning the feasible
/// interval.
pub fn trace_frontier(
    level_shifts: &[f64],
    thermal_pops: &[f64],
    family: FrontierFamily,
    n_points: usize,
) -> Result<Vec<FrontierPoint>, FrontierError> {
    if n_points < 2 {
        return Err(FrontierError::TooFewPoints { n_points });
    }
    let (lo, hi, _) = span_of(level_shifts);
    (0..n_points)
        .map(|k| {
            let c = lo + (hi - lo) * k as f64 / (n_points - 1) as f64;
            frontier_point(c, level_shifts, thermal_pops, family)
        })
        .collect()
}

/// The pointwise envelope every initial state must respect at work value `c`:
/// the diagonal-family minimum from below (coherence only raises the
/// production at fixed populations) and the pure-family maximum from above.
pub fn containment_bounds(
    c: f64,
    level_shifts: &[f64],
    thermal_pops: &[f64],
) -> Result<(f64, f64), FrontierError> {
    let (s_min, _) = min_sirr_at_work(c, level_shifts, thermal_pops, FrontierFamily::Diagonal)?;
    let (s_max, _) = max_sirr_at_work(c, level_shifts, thermal_pops, FrontierFamily::Pure)?;
    Ok((s_min, s_max))
}

/// Which anisotropy parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Alpha,
    Gamma,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Alpha => "alpha",
            Self::Gamma => "gamma",
        }
    }

    fn apply(self, base: &TwoQubitModel, value: f64) -> TwoQubitModel {
        let mut m = *base;
        match self {
            Self::Alpha => m.alpha = value,
            Self::Gamma => m.gamma_aniso = value,
        }
        m
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "alpha" => Ok(Self::Alpha),
            "gamma" => Ok(Self::Gamma),
            other => Err(format!("unknown sweep parameter '{other}'")),
        }
    }
}

/// One sweep sample: maximal extraction, its entropy cost, the work of the
/// zero-entropy preparation, and whether two branch-labeled final eigenvalues
/// crossed since the previous sample.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub param_name: SweepParam,
    pub param_value: f64,
    pub work_max_extract: f64,
    pub s_irr_at_work_max: f64,
    pub s_irr_zero_work: f64,
    pub crossing_flag: bool,
}

fn endpoint_quantities(
    model: &TwoQubitModel,
    beta: f64,
) -> Result<([f64; 4], Vec<f64>, Vec<f64>), FrontierError> {
    let e0 = model
        .eigenvalues_closed_at_j(0.0)
        .expect("explicit J evaluation cannot fail");
    let e_tau = model
        .eigenvalues_closed_at_j(1.0)
        .expect("explicit J evaluation cannot fail");
    let delta: Vec<f64> = e_tau.iter().zip(e0.iter()).map(|(&b, &a)| b - a).collect();
    let pops = gibbs_populations(&e_tau, beta)
        .map_err(|e| FrontierError::Thermo(e.into()))?;
    Ok((e_tau, delta, pops))
}

/// Sweep one anisotropy parameter over ascending values.
pub fn sweep_parameter(
    base: &TwoQubitModel,
    param: SweepParam,
    values: &[f64],
    beta: f64,
) -> Result<Vec<SweepPoint>, FrontierError> {
    if values.windows(2).any(|w| w[0] > w[1]) {
        return Err(FrontierError::UnsortedSweep);
    }
    let mut out = Vec::with_capacity(values.len());
    let mut prev_e_tau: Option<[f64; 4]> = None;
    for &value in values {
        let model = param.apply(base, value);
        let (e_tau, delta, pops) = endpoint_quantities(&model, beta)?;
        let (work_max_extract, argmin) = delta
            .iter()
            .enumerate()
            .map(|(i, &d)| (d, i))
            .fold((f64::INFINITY, 0usize), |acc, (d, i)| {
                if d < acc.0 {
                    (d, i)
                } else {
                    acc
                }
            });
        let s_irr_at_work_max = -pops[argmin].ln();
        let s_irr_zero_work: f64 = pops.iter().zip(delta.iter()).map(|(&p, &d)| p * d).sum();
        let crossing_flag = match prev_e_tau {
            None => false,
            Some(prev) => pair_sign_change(&prev, &e_tau),
        };
        prev_e_tau = Some(e_tau);
        out.push(SweepPoint {
            param_name: param,
            param_value: value,
            work_max_extract,
            s_irr_at_work_max,
            s_irr_zero_work,
            crossing_flag,
        });
    }
    Ok(out)
}

fn pair_sign_change(prev: &[f64; 4], curr: &[f64; 4]) -> bool {
    for i in 0..4 {
        for j in (i + 1)..4 {
            let a = prev[i] - prev[j];
            let b = curr[i] - curr[j];
            if a * b < 0.0 || (a != 0.0 && b == 0.0) || (a == 0.0 && b != 0.0) {
                return true;
            }
        }
    }
    false
}

/// A located final-spectrum crossing: branch pair and parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub pair: (usize, usize),
    pub at: f64,
}

/// Find every value in [lo, hi] where two branch-labeled final eigenvalues
/// cross, localized by bisection to 1e-7 (comfortably inside the reported
/// 1e-6 resolution). A coarse scan brackets each sign change first.
pub fn locate_crossings(
    base: &TwoQubitModel,
    param: SweepParam,
    lo: f64,
    hi: f64,
) -> Vec<Crossing> {
    let final_gap = |value: f64, i: usize, j: usize| -> f64 {
        let m = param.apply(base, value);
        let e = m
            .eigenvalues_closed_at_j(1.0)
            .expect("explicit J evaluation cannot fail");
        e[i] - e[j]
    };
    let scan = 1024usize;
    let mut found = Vec::new();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let mut prev_v = lo;
            let mut prev_f = final_gap(lo, i, j);
            for k in 1..=scan {
                let v = lo + (hi - lo) * k as f64 / scan as f64;
                let f = final_gap(v, i, j);
                if prev_f * f < 0.0 {
                    let (mut a, mut b, mut fa) = (prev_v, v, prev_f);
                    while b - a > 1e-7 {
                        let mid = 0.5 * (a + b);
                        let fm = final_gap(mid, i, j);
                        if fa * fm <= 0.0 {
                            b = mid;
                        } else {
                            a = mid;
                            fa = fm;
                        }
                    }
                    found.push(Crossing {
                        pair: (i, j),
                        at: 0.5 * (a + b),
                    });
                } else if f == 0.0 && prev_f != 0.0 {
                    found.push(Crossing { pair: (i, j), at: v });
                }
                prev_v = v;
                prev_f = f;
            }
        }
    }
    found.sort_by(|a, b| a.at.partial_cmp(&b.at).unwrap());
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::TwoQubitModel;
    use crate::thermo::StrokeContext;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn isotropic_setup() -> (Vec<f64>, Vec<f64>) {
        let m = TwoQubitModel::isotropic(1.0).unwrap();
        let ctx = StrokeContext::new(&m, 1.0).unwrap();
        (ctx.level_shifts(), ctx.thermal_pops.clone())
    }

    fn random_instance(rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>, f64) {
        let delta: Vec<f64> = loop {
            let d: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut ok = true;
            for i in 0..4 {
                for j in (i + 1)..4 {
                    if (d[i] - d[j]).abs() < 0.1 {
                        ok = false;
                    }
                }
            }
            if ok {
                break d;
            }
        };
        let mut p: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..1.0) + 0.3).collect();
        let z: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= z);
        let (lo, hi, _) = span_of(&delta);
        let c = lo + (hi - lo) * rng.gen_range(0.15..0.85);
        (delta, p, c)
    }

    /// Brute-force oracle: exact-feasibility grid over the two free
    /// populations (the equality constraints fix the other two), plus dense
    /// 1D scans over every zero-coordinate boundary face, which contain the
    /// polytope corners the extrema sit on.
    fn grid_search(
        c: f64,
        delta: &[f64],
        pops: &[f64],
        family: FrontierFamily,
        m: usize,
    ) -> (f64, f64) {
        let objective = |d: &[f64; 4]| match family {
            FrontierFamily::Diagonal => kl_divergence(d, pops),
            FrontierFamily::Pure => pure_cross(d, pops),
        };
        let mut best_min = f64::INFINITY;
        let mut best_max = f64::NEG_INFINITY;
        let denom = delta[3] - delta[2];
        for i in 0..=m {
            let d1 = i as f64 / m as f64;
            for j in 0..=m {
                let d2 = j as f64 / m as f64;
                let r = 1.0 - d1 - d2;
                if r < -1e-12 {
                    continue;
                }
                let w = c - d1 * delta[0] - d2 * delta[1];
                let d4 = (w - r * delta[2]) / denom;
                let d3 = r - d4;
                if d3 < -1e-9 || d4 < -1e-9 {
                    continue;
                }
                let d = [d1, d2, d3.max(0.0), d4.max(0.0)];
                let v = objective(&d);
                best_min = best_min.min(v);
                best_max = best_max.max(v);
            }
        }
        // boundary faces d_k = 0: one free coordinate remains
        let m1 = 100_000usize;
        for k in 0..4usize {
            let live: Vec<usize> = (0..4).filter(|&x| x != k).collect();
            let (i, j, l) = (live[0], live[1], live[2]);
            let gap = delta[l] - delta[j];
            if gap.abs() < 1e-14 {
                continue;
            }
            for step in 0..=m1 {
                let a = step as f64 / m1 as f64;
                let b = ((1.0 - a) * delta[l] - (c - a * delta[i])) / gap;
                let rest = 1.0 - a - b;
                if b < -1e-9 || rest < -1e-9 {
                    continue;
                }
                let mut d = [0.0; 4];
                d[i] = a;
                d[j] = b.max(0.0);
                d[l] = rest.max(0.0);
                let v = objective(&d);
                best_min = best_min.min(v);
                best_max = best_max.max(v);
            }
        }
        (best_min, best_max)
    }

    #[test]
    fn gibbs_work_value_gives_zero_minimum() {
        let (delta, pops) = isotropic_setup();
        let c: f64 = pops.iter().zip(delta.iter()).map(|(&p, &d)| p * d).sum();
        let (s_min, d) = min_sirr_at_work(c, &delta, &pops, FrontierFamily::Diagonal).unwrap();
        assert!(s_min <= 1e-12);
        for (a, b) in d.iter().zip(pops.iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn edge_work_value_forces_the_indicator() {
        let (delta, pops) = isotropic_setup();
        // the most negative shift is attained only by level 3
        let (s_min, d) = min_sirr_at_work(-1.0, &delta, &pops, FrontierFamily::Diagonal).unwrap();
        assert_eq!(d, vec![0.0, 0.0, 1.0, 0.0]);
        assert_relative_eq!(s_min, -pops[2].ln(), epsilon = 1e-12);
        let (s_top, _) = min_sirr_at_work(
            delta.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            &delta,
            &pops,
            FrontierFamily::Diagonal,
        )
        .unwrap();
        assert_relative_eq!(s_top, -pops[1].ln(), epsilon = 1e-12);
    }

    #[test]
    fn infeasible_work_rejected() {
        let (delta, pops) = isotropic_setup();
        assert!(matches!(
            min_sirr_at_work(2.5, &delta, &pops, FrontierFamily::Diagonal),
            Err(FrontierError::InfeasibleWork { .. })
        ));
    }

    #[test]
    fn two_level_feasible_set_is_a_point() {
        let delta = [0.5, -0.5];
        let pops = [0.2, 0.8];
        let c = 0.1;
        let pt = frontier_point(c, &delta, &pops, FrontierFamily::Diagonal).unwrap();
        assert_relative_eq!(pt.s_min, pt.s_max, epsilon = 1e-9);
        // the unique feasible point: d1 - d2 = 0.2 with d1 + d2 = 1
        assert_relative_eq!(pt.d_min[0], 0.6, epsilon = 1e-9);
    }

    #[test]
    fn tilting_satisfies_stationarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1009);
        for _ in 0..100 {
            let (delta, pops, c) = random_instance(&mut rng);
            let (_, d) = min_sirr_at_work(c, &delta, &pops, FrontierFamily::Diagonal).unwrap();
            // grad KL = ln(d/p) + 1 must lie in span{delta, 1}
            let g: Vec<f64> = d
                .iter()
                .zip(pops.iter())
                .map(|(&x, &p)| (x / p).ln() + 1.0)
                .collect();
            // least squares onto [delta, 1]
            let n = 4.0;
            let sd: f64 = delta.iter().sum();
            let sdd: f64 = delta.iter().map(|x| x * x).sum();
            let sg: f64 = g.iter().sum();
            let sdg: f64 = delta.iter().zip(g.iter()).map(|(a, b)| a * b).sum();
            let det = sdd * n - sd * sd;
            let a = (sdg * n - sd * sg) / det;
            let b = (sdd * sg - sd * sdg) / det;
            let resid = g
                .iter()
                .zip(delta.iter())
                .map(|(&gi, &di)| (gi - a * di - b).abs())
                .fold(0.0, f64::max);
            assert!(resid <= 1e-8, "KKT residual {resid:e}");
            let work: f64 = d.iter().zip(delta.iter()).map(|(&x, &s)| x * s).sum();
            assert!((work - c).abs() <= 1e-9);
        }
    }

    #[test]
    fn optimizers_match_grid_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(2027);
        for _ in 0..20 {
            let (delta, pops, c) = random_instance(&mut rng);
            for family in [FrontierFamily::Diagonal, FrontierFamily::Pure] {
                let (s_min, _) = min_sirr_at_work(c, &delta, &pops, family).unwrap();
                let (s_max, _) = max_sirr_at_work(c, &delta, &pops, family).unwrap();
                let (g_min, g_max) = grid_search(c, &delta, &pops, family, 700);
                assert!(
                    (s_min - g_min).abs() <= 1e-3,
                    "{family:?} min {s_min} vs grid {g_min}"
                );
                assert!(
                    (s_max - g_max).abs() <= 1e-3,
                    "{family:?} max {s_max} vs grid {g_max}"
                );
                assert!(s_min <= g_min + 1e-9, "optimizer above the grid floor");
                assert!(s_max >= g_max - 1e-9, "optimizer below the grid ceiling");
            }
        }
    }

    #[test]
    fn frontier_trace_is_consistent() {
        let (delta, pops) = isotropic_setup();
        for family in [FrontierFamily::Diagonal, FrontierFamily::Pure] {
            let points = trace_frontier(&delta, &pops, family, 41).unwrap();
            assert_eq!(points.len(), 41);
            for p in &points {
                assert!(p.s_min <= p.s_max + 1e-9);
            }
            if family == FrontierFamily::Diagonal {
                // KL value function of a linear constraint is convex in C
                for w in points.windows(3) {
                    let mid = 0.5 * (w[0].s_min + w[2].s_min);
                    assert!(w[1].s_min <= mid + 1e-8);
                }
            }
        }
    }

    #[test]
    fn degenerate_shifts_collapse_the_frontier() {
        let delta = [0.3, 0.3, 0.3, 0.3];
        let pops = [0.1, 0.2, 0.3, 0.4];
        let (s_min, d) = min_sirr_at_work(0.3, &delta, &pops, FrontierFamily::Diagonal).unwrap();
        assert!(s_min <= 1e-12);
        assert_eq!(d, pops.to_vec());
        let (s_max, _) = max_sirr_at_work(0.3, &delta, &pops, FrontierFamily::Diagonal).unwrap();
        assert_relative_eq!(s_max, -0.1f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn rejects_too_few_points_and_unsorted_sweeps() {
        let (delta, pops) = isotropic_setup();
        assert!(matches!(
            trace_frontier(&delta, &pops, FrontierFamily::Diagonal, 1),
            Err(FrontierError::TooFewPoints { .. })
        ));
        let base = TwoQubitModel::isotropic(1.0).unwrap();
        assert!(matches!(
            sweep_parameter(&base, SweepParam::Gamma, &[1.0, 0.5], 1.0),
            Err(FrontierError::UnsortedSweep)
        ));
    }

    #[test]
    fn alpha_sweep_monotone_with_known_asymptote() {
        let base = TwoQubitModel::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let values = [1.0, 2.0, 5.0, 10.0, 25.0, 50.0, 100.0, 200.0, 400.0];
        let sweep = sweep_parameter(&base, SweepParam::Alpha, &values, 1.0).unwrap();
        for w in sweep.windows(2) {
            assert!(
                w[1].s_irr_at_work_max < w[0].s_irr_at_work_max,
                "entropy cost not decreasing"
            );
            assert!(
                w[1].work_max_extract < w[0].work_max_extract,
                "extraction not growing"
            );
        }
        let last = sweep.last().unwrap();
        let limit = (1.0 + (-2.0f64).exp()).ln();
        assert!(
            (last.s_irr_at_work_max - limit).abs() <= 2e-3,
            "asymptote {} vs {}",
            last.s_irr_at_work_max,
            limit
        );
    }

    #[test]
    fn gamma_sweep_detects_exactly_one_crossing() {
        let base = TwoQubitModel::new(1.5, 0.5, 1.0, 1.0, 0.0, 1.0).unwrap();
        let values: Vec<f64> = (0..=28).map(|k| 0.1 + 1.4 * k as f64 / 28.0).collect();
        let sweep = sweep_parameter(&base, SweepParam::Gamma, &values, 1.0).unwrap();
        let flagged: Vec<&SweepPoint> = sweep.iter().filter(|p| p.crossing_flag).collect();
        assert_eq!(flagged.len(), 1, "expected one crossing interval");
        let gamma_star = 2.0 - 2.0f64.sqrt();
        assert!(flagged[0].param_value >= gamma_star);

        let crossings = locate_crossings(&base, SweepParam::Gamma, 0.1, 1.5);
        assert_eq!(crossings.len(), 1);
        assert!(
            (crossings[0].at - gamma_star).abs() <= 1e-6,
            "located {} vs {gamma_star}",
            crossings[0].at
        );
        assert_eq!(crossings[0].pair, (2, 3));
    }

    #[test]
    fn work_max_level_is_the_third_branch_across_sweeps() {
        let base = TwoQubitModel::new(1.5, 0.5, 1.0, 1.0, 1.0, 1.0).unwrap();
        for param in [SweepParam::Alpha, SweepParam::Gamma] {
            for k in 0..20 {
                let v = 1.0 + 5.0 * k as f64;
                let m = param.apply(&base, v);
                let e0 = m.eigenvalues_closed_at_j(0.0).unwrap();
                let etau = m.eigenvalues_closed_at_j(1.0).unwrap();
                let drops: Vec<f64> = e0.iter().zip(etau.iter()).map(|(&a, &b)| a - b).collect();
                let argmax = drops
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                    .unwrap()
                    .0;
                assert_eq!(argmax, 2, "{param:?} = {v}");
            }
        }
    }

    #[test]
    fn zero_entropy_work_curve_is_smooth_through_the_crossing() {
        // the zero-entropy preparation is unique and analytic in gamma: its
        // work cannot jump at the crossing, in tension with the reported
        // figure; the sweep must still expose a smooth curve
        let base = TwoQubitModel::new(1.5, 0.5, 1.0, 1.0, 0.0, 1.0).unwrap();
        let values: Vec<f64> = (0..=280).map(|k| 0.1 + 1.4 * k as f64 / 280.0).collect();
        let sweep = sweep_parameter(&base, SweepParam::Gamma, &values, 1.0).unwrap();
        let works: Vec<f64> = sweep.iter().map(|p| p.s_irr_zero_work).collect();
        let max_step = works
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0, f64::max);
        assert!(max_step <= 5e-3, "unexpected jump of size {max_step}");
    }
}
