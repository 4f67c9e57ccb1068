//! One runner per figure. Each is a thin sweep over library calls; cells are
//! evaluated in parallel and emitted in grid order.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use log::warn;
use pad_core::integrate::SYMMETRY_TOLERANCE;
use pad_core::{
    conditional_result, ensemble_asymmetry, equivalent_efficiency, joint_density, lossy_conditional_result,
    quadrature_overlap, rate_constrained_fidelity, window_convergence, JointDensityPoint, PadConfig,
    PadError, QuadratureValue, TestEnsemble,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::settings::{Figure, FigureSpec};
use crate::table::{Cell, Format, Table};

/// `|<x|n>|^2` on the x grid for each requested `n`.
pub fn run_pxn(spec: &FigureSpec) -> Result<Table> {
    let xs = spec.axis("x").points();
    let cells: Vec<(u32, f64)> = spec
        .ns
        .iter()
        .flat_map(|&n| xs.iter().map(move |&x| (n, x)))
        .collect();
    let values: Vec<f64> = cells
        .par_iter()
        .map(|&(n, x)| quadrature_overlap(n, QuadratureValue::in_phase(x)).norm_sqr())
        .collect();
    let mut table = Table::new(&["n", "x", "density"]);
    for (&(n, x), v) in cells.iter().zip(values) {
        table.push(vec![n.into(), x.into(), v.into()]);
    }
    Ok(table)
}

/// Joint outcome density of each component along `y = 0`.
pub fn run_density(spec: &FigureSpec) -> Result<Table> {
    let cfg = spec.config;
    cfg.validate()?;
    if let Some(&n) = spec.ns.iter().find(|&&n| n + cfg.p > cfg.n_max) {
        return Err(PadError::PhotonLimit {
            total: n + cfg.p,
            max: cfg.n_max,
        }
        .into());
    }
    let spread = ensemble_asymmetry(&spec.ensemble, &cfg);
    if spread > SYMMETRY_TOLERANCE {
        warn!("density is not rotationally symmetric (relative spread {spread:e}); the x axis alone does not describe it");
    }
    let xs = spec.axis("x").points();
    let cells: Vec<(u32, f64)> = spec
        .ns
        .iter()
        .flat_map(|&n| xs.iter().map(move |&x| (n, x)))
        .collect();
    let values: Vec<f64> = cells
        .par_iter()
        .map(|&(n, x)| joint_density(n, &cfg, JointDensityPoint::new(x, 0.0)))
        .collect();
    let mut table = Table::new(&["n", "x", "density"]);
    for (&(n, x), v) in cells.iter().zip(values) {
        table.push(vec![n.into(), x.into(), v.into()]);
    }
    Ok(table)
}

/// `|F(w + 1) - F(w)|` for `w < w_max`, per ancilla photon number.
pub fn run_window_convergence(spec: &FigureSpec) -> Result<Table> {
    let per_p: Vec<(u32, Vec<f64>)> = spec
        .ps
        .par_iter()
        .map(|&p| Ok((p, window_convergence(p, &spec.config, spec.w_max)?)))
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["p", "w", "fidelity_change"]);
    for (p, diffs) in per_p {
        for (w, d) in diffs.into_iter().enumerate() {
            table.push(vec![p.into(), Cell::Int(w as u64), d.into()]);
        }
    }
    Ok(table)
}

/// Acceptance radius and fidelity at each requested rate, with window `w`.
pub fn run_rates(spec: &FigureSpec) -> Result<Table> {
    let cells: Vec<(f64, u32)> = spec
        .rates
        .iter()
        .flat_map(|&r| spec.ps.iter().map(move |&p| (r, p)))
        .collect();
    let points = cells
        .par_iter()
        .map(|&(r, p)| {
            let cfg = PadConfig { p, ..spec.config };
            Ok(rate_constrained_fidelity(
                &TestEnsemble::window(p, spec.w),
                &cfg,
                r,
            )?)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["R", "p", "delta", "F"]);
    for (&(r, p), pt) in cells.iter().zip(points) {
        table.push(vec![r.into(), p.into(), pt.delta.into(), pt.fidelity.into()]);
    }
    Ok(table)
}

/// Equivalent ideal-counter efficiency over the `(delta, eta)` grid, `eta`
/// varying slowest.
pub fn run_equiv_efficiency(spec: &FigureSpec) -> Result<Table> {
    let deltas = spec.axis("delta").points();
    let etas = spec.axis("eta").points();
    let cells: Vec<(f64, f64)> = etas
        .iter()
        .flat_map(|&eta| deltas.iter().map(move |&delta| (delta, eta)))
        .collect();
    let values = cells
        .par_iter()
        .map(|&(delta, eta)| {
            Ok(equivalent_efficiency(
                &spec.ensemble,
                &spec.config.with_delta(delta).with_eta(eta),
            )?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut table = Table::new(&["delta", "eta", "eta_ideal"]);
    for (&(delta, eta), v) in cells.iter().zip(values) {
        table.push(vec![delta.into(), eta.into(), v.into()]);
    }
    Ok(table)
}

/// Everything needed to reproduce one evaluation, and its result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub p: u32,
    pub w: u32,
    pub delta: f64,
    pub eta: f64,
    pub omega: f64,
    pub lambda: f64,
    pub theta: f64,
    pub phi: f64,
    pub p_delta: f64,
    pub fidelity: f64,
    pub rate: f64,
    pub p_ideal: f64,
}

impl PointRecord {
    const COLUMNS: [&'static str; 12] = [
        "p", "w", "delta", "eta", "omega", "lambda", "theta", "phi", "p_delta", "fidelity", "rate", "p_ideal",
    ];

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&Self::COLUMNS);
        t.push(vec![
            self.p.into(),
            self.w.into(),
            self.delta.into(),
            self.eta.into(),
            self.omega.into(),
            self.lambda.into(),
            self.theta.into(),
            self.phi.into(),
            self.p_delta.into(),
            self.fidelity.into(),
            self.rate.into(),
            self.p_ideal.into(),
        ]);
        t
    }
}

/// Lossless conditioning when `eta = 1`, the lossy model otherwise.
pub fn run_point_query(spec: &FigureSpec) -> Result<PointRecord> {
    let cfg = spec.config;
    let result = if cfg.eta == 1.0 {
        conditional_result(&spec.ensemble, &cfg)?
    } else {
        lossy_conditional_result(&spec.ensemble, &cfg)?
    };
    Ok(PointRecord {
        p: cfg.p,
        w: spec.w,
        delta: cfg.delta,
        eta: cfg.eta,
        omega: cfg.omega,
        lambda: cfg.lambda,
        theta: cfg.theta,
        phi: cfg.phi,
        p_delta: result.p_delta,
        fidelity: result.fidelity,
        rate: result.rate,
        p_ideal: result.p_ideal,
    })
}

/// Runs the figure and encodes it in the requested format.
pub fn render(spec: &FigureSpec) -> Result<Vec<u8>> {
    let table = match spec.figure {
        Figure::Pxn => run_pxn(spec)?,
        Figure::Density => run_density(spec)?,
        Figure::WindowConvergence => run_window_convergence(spec)?,
        Figure::Rates => run_rates(spec)?,
        Figure::EquivEfficiency => run_equiv_efficiency(spec)?,
        Figure::PointQuery => {
            let record = run_point_query(spec)?;
            return Ok(match spec.format {
                Format::Csv => record.to_table().render(Format::Csv),
                Format::Json => {
                    let mut buf = serde_json::to_vec_pretty(&record).expect("plain record");
                    buf.push(b'\n');
                    buf
                }
            });
        }
    };
    Ok(table.render(spec.format))
}

/// Renders and writes to the resolved destination; returns the file path,
/// or `None` when the output went to stdout.
pub fn execute(spec: &FigureSpec) -> Result<Option<PathBuf>> {
    let bytes = render(spec)?;
    match spec.destination() {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|source| CliError::Io {
                    path: dir.to_owned(),
                    source,
                })?;
            }
            fs::write(&path, &bytes).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(Some(path))
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(&bytes)
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
            Ok(None)
        }
    }
}
