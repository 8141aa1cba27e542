//! Numeric counterdiabatic construction for an arbitrary Hermitian schedule.
//!
//! The instantaneous eigenvectors are tracked over an s-grid with a
//! parallel-transport gauge (consecutive overlaps real positive), the frame
//! is differentiated by centered finite differences, and the counterdiabatic
//! term is assembled from the off-diagonal part of the rotation generator in
//! the instantaneous basis. Cross-validated against the closed forms shipped
//! by the model schedules.

use nalgebra::{DMatrix, DVector};

use crate::error::FrameError;
use crate::models::DriveSchedule;
use crate::quantum::{eig_hermitian, EigenDecomposition, HermitianOperator, C64};

/// Eigenvalue gap below which a grid point counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Two candidate overlaps closer than this make the track assignment
/// ambiguous (unless they belong to one degenerate cluster).
pub const AMBIGUITY_TOL: f64 = 1e-3;
/// Smallest acceptable consecutive overlap; below this the grid is too
/// coarse to follow the eigenvectors.
pub const MIN_TRACK_OVERLAP: f64 = 0.5;
/// Max tolerated counterdiabatic coupling between exactly degenerate levels;
/// larger values mean the term is genuinely ill-defined at the crossing.
pub const CLUSTER_COUPLING_TOL: f64 = 1e-6;
/// One-sided endpoint estimates below this are snapped to the exact zero
/// matrix (stationary drive at the protocol boundary).
pub const ENDPOINT_SNAP_TOL: f64 = 1e-7;

/// Gauge-continuous instantaneous eigensystem of a schedule over an s-grid.
///
/// Track labels are continuity labels: they start in ascending order at
/// s = 0 (resolved toward s -> 0+ when the start is degenerate) and follow
/// maximal-overlap continuation, so a track keeps its identity through
/// eigenvalue crossings.
#[derive(Debug, Clone)]
pub struct EigenFrame {
    grid: Vec<f64>,
    values: Vec<Vec<f64>>,
    vectors: Vec<DMatrix<C64>>,
    degenerate: Vec<bool>,
    tau: f64,
    dim: usize,
}

impl EigenFrame {
    pub fn n_grid(&self) -> usize {
        self.grid.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Track values at grid point k.
    pub fn values_at(&self, k: usize) -> &[f64] {
        &self.values[k]
    }

    /// Gauge-fixed eigenvector columns at grid point k.
    pub fn vectors_at(&self, k: usize) -> &DMatrix<C64> {
        &self.vectors[k]
    }

    pub fn is_degenerate_at(&self, k: usize) -> bool {
        self.degenerate[k]
    }

    pub fn initial_basis(&self) -> &DMatrix<C64> {
        &self.vectors[0]
    }

    pub fn final_basis(&self) -> &DMatrix<C64> {
        self.vectors.last().expect("frame is nonempty")
    }

    /// Energies of one track across the whole grid.
    pub fn track_energies(&self, track: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[track]).collect()
    }
}

fn degenerate_clusters(values: &[f64]) -> Vec<Vec<usize>> {
    let dim = values.len();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &idx in &order {
        match clusters.last_mut() {
            Some(c) if (values[idx] - values[*c.last().unwrap()]).abs() < DEGENERACY_TOL => {
                c.push(idx)
            }
            _ => clusters.push(vec![idx]),
        }
    }
    clusters
}

fn fix_column_phase_to(prev: &DVector<C64>, col: &mut DVector<C64>) -> f64 {
    let ov = prev.dotc(col); // <prev|col>
    let mag = ov.norm();
    if mag > 0.0 {
        *col *= ov.conj() / C64::new(mag, 0.0);
    }
    mag
}

fn orthonormalize_in_place(cols: &mut [DVector<C64>]) {
    for i in 0..cols.len() {
        for j in 0..i {
            let proj = cols[j].dotc(&cols[i]);
            let prev = cols[j].clone();
            cols[i] -= prev * proj;
        }
        let n: f64 = cols[i].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        cols[i] /= C64::new(n, 0.0);
    }
}

fn best_permutation(overlaps: &DMatrix<f64>) -> Vec<usize> {
    let dim = overlaps.nrows();
    let mut idx: Vec<usize> = (0..dim).collect();
    let mut best: Vec<usize> = idx.clone();
    let mut best_score = f64::NEG_INFINITY;
    permute(&mut idx, 0, &mut |perm| {
        let score: f64 = (0..dim).map(|i| overlaps[(i, perm[i])]).sum();
        if score > best_score {
            best_score = score;
            best = perm.to_vec();
        }
    });
    best
}

fn permute(arr: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == arr.len() {
        visit(arr);
        return;
    }
    for i in k..arr.len() {
        arr.swap(k, i);
        permute(arr, k + 1, visit);
        arr.swap(k, i);
    }
}

/// Raw (per-point, independently phase-fixed) decompositions of a schedule.
pub fn raw_decompositions<S: DriveSchedule + ?Sized>(
    schedule: &S,
    n_grid: usize,
) -> Result<Vec<EigenDecomposition>, FrameError> {
    if n_grid < 3 || n_grid.is_multiple_of(2) {
        return Err(FrameError::BadGrid { n_grid });
    }
    let mut raw = Vec::with_capacity(n_grid);
    for k in 0..n_grid {
        let s = k as f64 / (n_grid - 1) as f64;
        let h = schedule.hamiltonian(s)?;
        raw.push(eig_hermitian(&h));
    }
    Ok(raw)
}

/// Gauge-fix a sequence of raw decompositions into a continuous frame.
///
/// Exposed separately from [`build_eigenframe`] so the gauge construction can
/// be exercised with deliberately re-phased raw input: the result must not
/// depend on the raw eigenvector phases.
pub fn gauge_fix_frame(
    raw: Vec<EigenDecomposition>,
    tau: f64,
) -> Result<EigenFrame, FrameError> {
    let n_grid = raw.len();
    if n_grid < 3 || n_grid.is_multiple_of(2) {
        return Err(FrameError::BadGrid { n_grid });
    }
    let dim = raw[0].dim();
    let grid: Vec<f64> = (0..n_grid)
        .map(|k| k as f64 / (n_grid - 1) as f64)
        .collect();

    let mut values: Vec<Vec<f64>> = Vec::with_capacity(n_grid);
    let mut vectors: Vec<DMatrix<C64>> = Vec::with_capacity(n_grid);
    let mut degenerate: Vec<bool> = Vec::with_capacity(n_grid);

    // Base point: ascending order; degenerate clusters take the basis of the
    // next grid point projected back, which selects the s -> 0+ limit.
    let clusters0 = degenerate_clusters(&raw[0].values);
    degenerate.push(clusters0.iter().any(|c| c.len() > 1));
    let mut cols0: Vec<DVector<C64>> = (0..dim)
        .map(|i| raw[0].vectors.column(i).into_owned())
        .collect();
    for cluster in &clusters0 {
        if cluster.len() < 2 {
            continue;
        }
        // projector onto the degenerate eigenspace
        let mut p = DMatrix::<C64>::zeros(dim, dim);
        for &i in cluster {
            let v = raw[0].vectors.column(i);
            p += v * v.adjoint();
        }
        // continuation candidates from the next point, in ascending order
        let mut scored: Vec<(usize, f64)> = (0..dim)
            .map(|j| {
                let w = raw[1].vectors.column(j);
                let pw = &p * w;
                (j, pw.iter().map(|c| c.norm_sqr()).sum::<f64>())
            })
            .collect();
        scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        let mut chosen: Vec<usize> = scored.iter().take(cluster.len()).map(|x| x.0).collect();
        chosen.sort_by(|&a, &b| raw[1].values[a].partial_cmp(&raw[1].values[b]).unwrap());
        let mut projected: Vec<DVector<C64>> = chosen
            .iter()
            .map(|&j| &p * raw[1].vectors.column(j).into_owned())
            .collect();
        orthonormalize_in_place(&mut projected);
        for (slot, vec) in cluster.iter().zip(projected) {
            cols0[*slot] = vec;
        }
    }
    // standard-basis phase convention at the seed
    for col in cols0.iter_mut() {
        let mut best = 0usize;
        let mut mag = 0.0;
        for (i, c) in col.iter().enumerate() {
            if c.norm() > mag {
                mag = c.norm();
                best = i;
            }
        }
        if mag > 0.0 {
            let ph = col[best] / C64::new(mag, 0.0);
            *col *= ph.conj();
        }
    }
    let mut m0 = DMatrix::<C64>::zeros(dim, dim);
    for (i, c) in cols0.iter().enumerate() {
        m0.set_column(i, c);
    }
    values.push(raw[0].values.clone());
    vectors.push(m0);

    for k in 1..n_grid {
        let prev = &vectors[k - 1];
        let rk = &raw[k];
        let mut overlaps = DMatrix::<f64>::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                overlaps[(i, j)] = prev.column(i).dotc(&rk.vectors.column(j)).norm();
            }
        }
        let perm = best_permutation(&overlaps);
        let clusters = degenerate_clusters(&rk.values);
        degenerate.push(clusters.iter().any(|c| c.len() > 1));
        let in_same_cluster = |a: usize, b: usize| {
            clusters
                .iter()
                .any(|c| c.contains(&a) && c.contains(&b))
        };
        for i in 0..dim {
            let best = overlaps[(i, perm[i])];
            for j in 0..dim {
                if j == perm[i] {
                    continue;
                }
                if overlaps[(i, j)] > best - AMBIGUITY_TOL && !in_same_cluster(perm[i], j) {
                    return Err(FrameError::UnresolvedDegeneracy {
                        s: grid[k],
                        first: best,
                        second: overlaps[(i, j)],
                    });
                }
            }
            if best < MIN_TRACK_OVERLAP && !clusters.iter().any(|c| c.len() > 1 && c.contains(&perm[i])) {
                return Err(FrameError::UnresolvedDegeneracy {
                    s: grid[k],
                    first: best,
                    second: 0.0,
                });
            }
        }

        let mut cols: Vec<DVector<C64>> = (0..dim)
            .map(|i| rk.vectors.column(perm[i]).into_owned())
            .collect();
        let mut vals: Vec<f64> = (0..dim).map(|i| rk.values[perm[i]]).collect();

        // re-basis degenerate clusters by projecting the previous vectors in
        for cluster in &clusters {
            if cluster.len() < 2 {
                continue;
            }
            let mut p = DMatrix::<C64>::zeros(dim, dim);
            for &j in cluster {
                let v = rk.vectors.column(j);
                p += v * v.adjoint();
            }
            let tracks: Vec<usize> = (0..dim).filter(|&i| cluster.contains(&perm[i])).collect();
            let mut projected: Vec<DVector<C64>> = tracks
                .iter()
                .map(|&i| &p * prev.column(i).into_owned())
                .collect();
            orthonormalize_in_place(&mut projected);
            let mean: f64 = cluster.iter().map(|&j| rk.values[j]).sum::<f64>()
                / cluster.len() as f64;
            for (&track, vec) in tracks.iter().zip(projected) {
                cols[track] = vec;
                vals[track] = mean;
            }
        }

        // parallel-transport phase: consecutive overlap real positive
        for i in 0..dim {
            fix_column_phase_to(&prev.column(i).into_owned(), &mut cols[i]);
        }
        let mut mk = DMatrix::<C64>::zeros(dim, dim);
        for (i, c) in cols.iter().enumerate() {
            mk.set_column(i, c);
        }
        values.push(vals);
        vectors.push(mk);
    }

    Ok(EigenFrame {
        grid,
        values,
        vectors,
        degenerate,
        tau,
        dim,
    })
}

/// Build the gauge-continuous eigenframe of a schedule on `n_grid` points
/// (odd, at least 3, so centered differences exist at interior points).
pub fn build_eigenframe<S: DriveSchedule + ?Sized>(
    schedule: &S,
    n_grid: usize,
) -> Result<EigenFrame, FrameError> {
    let raw = raw_decompositions(schedule, n_grid)?;
    gauge_fix_frame(raw, schedule.tau())
}

/// Counterdiabatic term at grid point k from finite differences of the frame:
/// i times the off-diagonal part of the basis-rotation generator, pushed back
/// to the computational basis. Interior points use centered differences,
/// endpoints one-sided second-order stencils (snapped to exact zero when the
/// drive is stationary there).
pub fn counterdiabatic_numeric(
    frame: &EigenFrame,
    k: usize,
) -> Result<HermitianOperator, FrameError> {
    let n = frame.n_grid();
    if k >= n {
        return Err(FrameError::IndexOutOfRange { k, n });
    }
    let dim = frame.dim();
    let ds = 1.0 / (n - 1) as f64;
    let dt = ds * frame.tau();

    let deriv: DMatrix<C64> = if k == 0 {
        (frame.vectors_at(0) * C64::new(-3.0, 0.0)
            + frame.vectors_at(1) * C64::new(4.0, 0.0)
            + frame.vectors_at(2) * C64::new(-1.0, 0.0))
            / C64::new(2.0 * dt, 0.0)
    } else if k == n - 1 {
        (frame.vectors_at(n - 1) * C64::new(3.0, 0.0)
            + frame.vectors_at(n - 2) * C64::new(-4.0, 0.0)
            + frame.vectors_at(n - 3) * C64::new(1.0, 0.0))
            / C64::new(2.0 * dt, 0.0)
    } else {
        (frame.vectors_at(k + 1) - frame.vectors_at(k - 1)) / C64::new(2.0 * dt, 0.0)
    };

    let w = frame.vectors_at(k);
    let generator = w.adjoint() * deriv; // <n| d/dt |m>
    let mut b = generator * C64::new(0.0, 1.0);
    for i in 0..dim {
        b[(i, i)] = C64::new(0.0, 0.0);
    }
    if frame.is_degenerate_at(k) {
        let clusters = degenerate_clusters(frame.values_at(k));
        for cluster in clusters.iter().filter(|c| c.len() > 1) {
            for &i in cluster {
                for &j in cluster {
                    if i == j {
                        continue;
                    }
                    if b[(i, j)].norm() > CLUSTER_COUPLING_TOL {
                        return Err(FrameError::DegenerateCoupling { s: frame.grid[k] });
                    }
                    b[(i, j)] = C64::new(0.0, 0.0);
                }
            }
        }
    }
    let bh = (&b + b.adjoint()) * C64::new(0.5, 0.0);
    let mut h = w * bh * w.adjoint();
    h = (&h + h.adjoint()) * C64::new(0.5, 0.0);
    if (k == 0 || k == n - 1)
        && h.iter().map(|c| c.norm()).fold(0.0, f64::max) <= ENDPOINT_SNAP_TOL
    {
        return Ok(HermitianOperator::zero(dim));
    }
    Ok(HermitianOperator::new(h).expect("symmetrized construction is Hermitian"))
}

/// Sup-norm distance between the finite-difference counterdiabatic term and
/// the schedule's closed form, maximized over the whole grid. Converges at
/// second order in 1/n_grid.
pub fn verify_against_analytic<S: DriveSchedule + ?Sized>(
    schedule: &S,
    n_grid: usize,
) -> Result<f64, FrameError> {
    let frame = build_eigenframe(schedule, n_grid)?;
    let mut sup = 0.0f64;
    for k in 0..n_grid {
        let numeric = counterdiabatic_numeric(&frame, k)?;
        let s = frame.grid[k];
        let analytic = schedule.cd_term(s)?;
        let diff = (numeric.matrix() - analytic.matrix())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        sup = sup.max(diff);
    }
    Ok(sup)
}

/// Numeric counterdiabatic terms at the midpoints of `steps` uniform
/// integration intervals, built on a doubled grid so every midpoint is an
/// interior frame point. Feeds the propagator when a schedule has no closed
/// form to offer.
pub fn numeric_cd_at_midpoints<S: DriveSchedule + ?Sized>(
    schedule: &S,
    steps: usize,
) -> Result<Vec<HermitianOperator>, FrameError> {
    let n_grid = 2 * steps + 1;
    let frame = build_eigenframe(schedule, n_grid)?;
    (0..steps)
        .map(|k| counterdiabatic_numeric(&frame, 2 * k + 1))
        .collect()
}
