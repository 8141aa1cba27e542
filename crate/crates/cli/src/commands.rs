//! Command implementations: each one turns a scenario into CSV (always) and
//! an SVG plot (opt-in), with deterministic bytes for fixed inputs.

use std::fmt;
use std::path::{Path, PathBuf};

use sta_thermo_core::cd::{build_eigenframe, verify_against_analytic};
use sta_thermo_core::frontier::{sweep_parameter, trace_frontier, FrontierFamily};
use sta_thermo_core::models::{DriveSchedule, SingleQubitModel, TwoQubitModel};
use sta_thermo_core::propagator::{adiabatic_transport, fidelity_curve};
use sta_thermo_core::quantum::{thermal_state, DensityMatrix, C64};
use sta_thermo_core::states::{sample_family, SampleSpace, StateFamilyTag};
use sta_thermo_core::thermo::StrokeContext;

use crate::config::{FrontierChoice, ModelId, Scenario};
use crate::svg::{Plot, SeriesKind};
use crate::table::{Cell, Table};

/// Threshold for the verify command: the finite-difference construction must
/// reproduce the closed forms at least this well on the configured grid.
pub const VERIFY_TOL: f64 = 1e-6;

#[derive(Debug)]
pub enum CliError {
    /// Bad scenario or unusable paths: exit status 2.
    Config(String),
    /// The computation itself failed or missed its tolerance: exit status 1.
    Numerical(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

fn numerical(e: impl fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Shortcut,
    Evolve,
    Scatter,
    Coherence,
    Frontier,
    Sweep,
    Verify,
}

impl CommandKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Shortcut => "shortcut",
            Self::Evolve => "evolve",
            Self::Scatter => "scatter",
            Self::Coherence => "coherence",
            Self::Frontier => "frontier",
            Self::Sweep => "sweep",
            Self::Verify => "verify",
        }
    }
}

fn make_single(_sc: &Scenario, tau: f64) -> Result<SingleQubitModel, CliError> {
    SingleQubitModel::new(tau).map_err(|e| CliError::Config(e.to_string()))
}

fn make_two(sc: &Scenario, tau: f64) -> Result<TwoQubitModel, CliError> {
    TwoQubitModel::new(sc.eps1, sc.eps2, sc.alpha, sc.beta_aniso, sc.gamma, tau)
        .map_err(|e| CliError::Config(e.to_string()))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::Config(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, text)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

fn out_paths(out_dir: &Path, command: CommandKind, sc: &Scenario) -> (PathBuf, PathBuf) {
    let stem = format!("{}_{}", command.as_str(), sc.model.as_str());
    (
        out_dir.join(format!("{stem}.csv")),
        out_dir.join(format!("{stem}.svg")),
    )
}

/// Execute one scenario; returns the paths written.
pub fn run(
    command: CommandKind,
    sc: &Scenario,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    match command {
        CommandKind::Shortcut => run_shortcut(sc, out_dir),
        CommandKind::Evolve => run_evolve(sc, out_dir),
        CommandKind::Scatter => run_samples(sc, out_dir, CommandKind::Scatter),
        CommandKind::Coherence => run_samples(sc, out_dir, CommandKind::Coherence),
        CommandKind::Frontier => run_frontier(sc, out_dir),
        CommandKind::Sweep => run_sweep(sc, out_dir),
        CommandKind::Verify => run_verify(sc, out_dir),
    }
}

fn run_shortcut(sc: &Scenario, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let (csv_path, svg_path) = out_paths(out_dir, CommandKind::Shortcut, sc);
    let n = sc.grid;
    let mut written = vec![csv_path.clone()];
    match sc.model {
        ModelId::SingleQubit => {
            let m = make_single(sc, sc.tau)?;
            let mut table = Table::new(vec!["s", "h12_abs"]);
            let mut series = Vec::with_capacity(n);
            for k in 0..n {
                let s = k as f64 / (n - 1) as f64;
                let cd = m.cd_term(s).map_err(numerical)?;
                let mag = cd.matrix()[(0, 1)].norm();
                table.push(vec![Cell::from(s), Cell::from(mag)]);
                series.push((s, mag));
            }
            write_text(&csv_path, &table.to_csv())?;
            if sc.plot {
                let mut plot = Plot::new("counterdiabatic drive strength", "s", "|H_12|");
                plot.add("|H12|", SeriesKind::Line, series);
                write_text(&svg_path, &plot.render())?;
                written.push(svg_path);
            }
        }
        ModelId::TwoQubit => {
            let m = make_two(sc, sc.tau)?;
            let mut table = Table::new(vec!["s", "h14_abs", "h23_abs"]);
            let mut s14 = Vec::with_capacity(n);
            let mut s23 = Vec::with_capacity(n);
            for k in 0..n {
                let s = k as f64 / (n - 1) as f64;
                let cd = m.cd_term(s).map_err(numerical)?;
                let a = cd.matrix()[(0, 3)].norm();
                let b = cd.matrix()[(1, 2)].norm();
                table.push(vec![Cell::from(s), Cell::from(a), Cell::from(b)]);
                s14.push((s, a));
                s23.push((s, b));
            }
            write_text(&csv_path, &table.to_csv())?;
            if sc.plot {
                let mut plot = Plot::new("counterdiabatic drive strength", "s", "|entry|");
                plot.add("|H14|", SeriesKind::Line, s14);
                plot.add("|H23|", SeriesKind::Line, s23);
                write_text(&svg_path, &plot.render())?;
                written.push(svg_path);
            }
        }
    }
    Ok(written)
}

fn initial_state_and_target(
    sc: &Scenario,
) -> Result<(DensityMatrix, DensityMatrix), CliError> {
    match sc.model {
        ModelId::SingleQubit => {
            let m = make_single(sc, sc.tau)?;
            let rho0 =
                DensityMatrix::pure_from(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
            let frame = build_eigenframe(&m, sc.grid).map_err(numerical)?;
            let target = adiabatic_transport(&rho0, &frame).map_err(numerical)?;
            Ok((rho0, target))
        }
        ModelId::TwoQubit => {
            let m = make_two(sc, sc.tau)?;
            let h0 = m.hamiltonian(0.0).map_err(numerical)?;
            let rho0 = thermal_state(&h0, sc.beta).map_err(numerical)?;
            let frame = build_eigenframe(&m, sc.grid).map_err(numerical)?;
            let target = adiabatic_transport(&rho0, &frame).map_err(numerical)?;
            Ok((rho0, target))
        }
    }
}

fn run_evolve(sc: &Scenario, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let (csv_path, svg_path) = out_paths(out_dir, CommandKind::Evolve, sc);
    let (rho0, target) = initial_state_and_target(sc)?;
    let mut table = Table::new(vec!["tau", "fidelity", "with_tqd", "model_id"]);
    let mut plot = Plot::new("fidelity to the transported target", "tau", "fidelity");
    plot.log_x = true;
    for flag in sc.with_tqd.flags() {
        let curve = match sc.model {
            ModelId::SingleQubit => fidelity_curve(
                SingleQubitModel::new,
                &sc.tau_list,
                flag,
                &rho0,
                &target,
                sc.steps,
            ),
            ModelId::TwoQubit => fidelity_curve(
                |tau| TwoQubitModel::new(sc.eps1, sc.eps2, sc.alpha, sc.beta_aniso, sc.gamma, tau),
                &sc.tau_list,
                flag,
                &rho0,
                &target,
                sc.steps,
            ),
        }
        .map_err(numerical)?;
        for &(tau, f) in &curve {
            table.push(vec![
                Cell::from(tau),
                Cell::from(f),
                Cell::from(flag),
                Cell::from(sc.model.as_str()),
            ]);
        }
        plot.add(
            if flag { "with shortcut" } else { "bare" },
            SeriesKind::Line,
            curve,
        );
    }
    write_text(&csv_path, &table.to_csv())?;
    let mut written = vec![csv_path];
    if sc.plot {
        write_text(&svg_path, &plot.render())?;
        written.push(svg_path);
    }
    Ok(written)
}

fn family_supported(tag: StateFamilyTag, dim: usize) -> bool {
    match tag {
        StateFamilyTag::CoherentThermal => dim == 2,
        StateFamilyTag::RedBoundary1
        | StateFamilyTag::RedBoundary2
        | StateFamilyTag::WorkMax
        | StateFamilyTag::EntropyZero => dim == 4,
        _ => true,
    }
}

fn stroke_context(sc: &Scenario) -> Result<StrokeContext, CliError> {
    match sc.model {
        ModelId::SingleQubit => {
            StrokeContext::new(&make_single(sc, sc.tau)?, sc.beta).map_err(numerical)
        }
        ModelId::TwoQubit => {
            StrokeContext::new(&make_two(sc, sc.tau)?, sc.beta).map_err(numerical)
        }
    }
}

fn run_samples(
    sc: &Scenario,
    out_dir: &Path,
    command: CommandKind,
) -> Result<Vec<PathBuf>, CliError> {
    let Some(seed) = sc.seed else {
        return Err(CliError::Config(
            "sampling commands require a seed (config key 'seed' or --seed)".into(),
        ));
    };
    let ctx = stroke_context(sc)?;
    let dim = ctx.dim();
    for &tag in &sc.families {
        if !family_supported(tag, dim) {
            return Err(CliError::Config(format!(
                "family '{}' is not defined for the {} model",
                tag.as_str(),
                sc.model.as_str()
            )));
        }
    }
    let shifts = ctx.level_shifts();
    let space = SampleSpace::from_context(&ctx, &shifts);

    let mut header = vec!["model_id".to_string(), "work".into(), "s_irr".into(), "coherence".into()];
    for i in 1..=dim {
        header.push(format!("pop_{i}"));
    }
    header.push("family_tag".into());
    header.push("seed".into());
    let mut table = Table::new(header);

    let mut work_entropy: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    let mut coh_entropy: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for &tag in &sc.families {
        let draws = match tag {
            StateFamilyTag::WorkMax | StateFamilyTag::EntropyZero => 1,
            _ => sc.count,
        };
        let mut we = Vec::with_capacity(draws);
        let mut ce = Vec::with_capacity(draws);
        for index in 0..draws as u64 {
            let rho = sample_family(tag, &space, seed, index).map_err(numerical)?;
            let out = ctx.stroke(&rho).map_err(numerical)?;
            let mut row = vec![
                Cell::from(sc.model.as_str()),
                Cell::from(out.work),
                Cell::from(out.s_irr),
                Cell::from(out.coherence_in),
            ];
            for &p in &out.populations_in {
                row.push(Cell::from(p));
            }
            row.push(Cell::from(tag.as_str()));
            row.push(Cell::from(index));
            table.push(row);
            we.push((out.work, out.s_irr));
            ce.push((out.coherence_in, out.s_irr));
        }
        work_entropy.push((tag.as_str().to_string(), we));
        coh_entropy.push((tag.as_str().to_string(), ce));
    }

    let (csv_path, svg_path) = out_paths(out_dir, command, sc);
    write_text(&csv_path, &table.to_csv())?;
    let mut written = vec![csv_path];
    if sc.plot {
        let mut plot = match command {
            CommandKind::Coherence => {
                let mut p = Plot::new(
                    "entropy production vs initial coherence",
                    "C_rel",
                    "S_irr",
                );
                for (label, pts) in coh_entropy {
                    p.add(&label, SeriesKind::Points, pts);
                }
                p
            }
            _ => {
                let mut p = Plot::new("work vs entropy production", "work", "S_irr");
                for (label, pts) in work_entropy {
                    p.add(&label, SeriesKind::Points, pts);
                }
                p
            }
        };
        plot.log_x = false;
        write_text(&svg_path, &plot.render())?;
        written.push(svg_path);
    }
    Ok(written)
}

fn run_frontier(sc: &Scenario, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let ctx = stroke_context(sc)?;
    let dim = ctx.dim();
    let shifts = ctx.level_shifts();
    let families: Vec<FrontierFamily> = match sc.frontier_family {
        FrontierChoice::Diagonal => vec![FrontierFamily::Diagonal],
        FrontierChoice::Pure => vec![FrontierFamily::Pure],
        FrontierChoice::Both => vec![FrontierFamily::Diagonal, FrontierFamily::Pure],
    };
    let mut header = vec![
        "model_id".to_string(),
        "family".into(),
        "C".into(),
        "s_min".into(),
        "s_max".into(),
    ];
    for i in 1..=dim {
        header.push(format!("d_min_{i}"));
    }
    for i in 1..=dim {
        header.push(format!("d_max_{i}"));
    }
    let mut table = Table::new(header);
    let mut plot = Plot::new("work-entropy boundary", "work", "S_irr");
    for family in families {
        let points = trace_frontier(&shifts, &ctx.thermal_pops, family, sc.n_points)
            .map_err(numerical)?;
        let mut lower = Vec::with_capacity(points.len());
        let mut upper = Vec::with_capacity(points.len());
        for p in &points {
            let mut row = vec![
                Cell::from(sc.model.as_str()),
                Cell::from(family.as_str()),
                Cell::from(p.work_target),
                Cell::from(p.s_min),
                Cell::from(p.s_max),
            ];
            for &d in &p.d_min {
                row.push(Cell::from(d));
            }
            for &d in &p.d_max {
                row.push(Cell::from(d));
            }
            table.push(row);
            lower.push((p.work_target, p.s_min));
            upper.push((p.work_target, p.s_max));
        }
        plot.add(
            &format!("{} min", family.as_str()),
            SeriesKind::Line,
            lower,
        );
        plot.add(
            &format!("{} max", family.as_str()),
            SeriesKind::Line,
            upper,
        );
    }
    let (csv_path, svg_path) = out_paths(out_dir, CommandKind::Frontier, sc);
    write_text(&csv_path, &table.to_csv())?;
    let mut written = vec![csv_path];
    if sc.plot {
        write_text(&svg_path, &plot.render())?;
        written.push(svg_path);
    }
    Ok(written)
}

fn run_sweep(sc: &Scenario, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    if sc.model != ModelId::TwoQubit {
        return Err(CliError::Config(
            "the sweep command is defined for the two_qubit model".into(),
        ));
    }
    let Some(param) = sc.sweep_param else {
        return Err(CliError::Config("sweep requires the 'param' key".into()));
    };
    let Some(values) = sc.sweep_values.as_ref() else {
        return Err(CliError::Config(
            "sweep requires 'param_values' or param_min/param_max/param_count".into(),
        ));
    };
    let base = make_two(sc, sc.tau)?;
    let points = sweep_parameter(&base, param, values, sc.beta).map_err(numerical)?;
    let mut table = Table::new(vec![
        "param",
        "value",
        "work_max",
        "s_irr_max_state",
        "s_irr_zero_work_work",
        "crossing_flag",
    ]);
    let mut extraction = Vec::with_capacity(points.len());
    let mut entropy = Vec::with_capacity(points.len());
    let mut zero_work = Vec::with_capacity(points.len());
    for p in &points {
        table.push(vec![
            Cell::from(p.param_name.as_str()),
            Cell::from(p.param_value),
            Cell::from(p.work_max_extract),
            Cell::from(p.s_irr_at_work_max),
            Cell::from(p.s_irr_zero_work),
            Cell::from(p.crossing_flag),
        ]);
        extraction.push((p.param_value, p.work_max_extract));
        entropy.push((p.param_value, p.s_irr_at_work_max));
        zero_work.push((p.param_value, p.s_irr_zero_work));
    }
    let (csv_path, svg_path) = out_paths(out_dir, CommandKind::Sweep, sc);
    write_text(&csv_path, &table.to_csv())?;
    let mut written = vec![csv_path];
    if sc.plot {
        let mut plot = Plot::new(
            &format!("sweep over {}", param.as_str()),
            param.as_str(),
            "value",
        );
        plot.add("work at max extraction", SeriesKind::Line, extraction);
        plot.add("S_irr of extractor", SeriesKind::Line, entropy);
        plot.add("work of zero-entropy state", SeriesKind::Line, zero_work);
        write_text(&svg_path, &plot.render())?;
        written.push(svg_path);
    }
    Ok(written)
}

fn run_verify(sc: &Scenario, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let coarse = sc.grid;
    let fine = 2 * sc.grid - 1;
    let (err_coarse, err_fine) = match sc.model {
        ModelId::SingleQubit => {
            let m = make_single(sc, sc.tau)?;
            (
                verify_against_analytic(&m, coarse).map_err(numerical)?,
                verify_against_analytic(&m, fine).map_err(numerical)?,
            )
        }
        ModelId::TwoQubit => {
            let m = make_two(sc, sc.tau)?;
            (
                verify_against_analytic(&m, coarse).map_err(numerical)?,
                verify_against_analytic(&m, fine).map_err(numerical)?,
            )
        }
    };
    let mut table = Table::new(vec!["model_id", "n_grid", "sup_error"]);
    table.push(vec![
        Cell::from(sc.model.as_str()),
        Cell::from(coarse),
        Cell::from(err_coarse),
    ]);
    table.push(vec![
        Cell::from(sc.model.as_str()),
        Cell::from(fine),
        Cell::from(err_fine),
    ]);
    let (csv_path, _) = out_paths(out_dir, CommandKind::Verify, sc);
    write_text(&csv_path, &table.to_csv())?;
    println!(
        "verify {}: sup error {:.3e} at n_grid={}, {:.3e} at n_grid={} (ratio {:.3})",
        sc.model.as_str(),
        err_coarse,
        coarse,
        err_fine,
        fine,
        err_fine / err_coarse
    );
    if err_coarse > VERIFY_TOL {
        return Err(CliError::Numerical(format!(
            "finite-difference construction misses the closed form: sup error {err_coarse:e} > {VERIFY_TOL:e}"
        )));
    }
    Ok(vec![csv_path])
}
