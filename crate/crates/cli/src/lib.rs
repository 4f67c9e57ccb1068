//! Figure tables for the homodyne photon-number detector.
//!
//! Every figure is a sweep over `pad-core` calls, written as CSV or JSON.

pub mod cli;
pub mod error;
pub mod figures;
pub mod grid;
pub mod settings;
pub mod table;

pub use cli::Args;
pub use error::{CliError, Result};
pub use figures::{
    execute, render, run_density, run_equiv_efficiency, run_point_query, run_pxn, run_rates,
    run_window_convergence, PointRecord,
};
pub use grid::{Axis, GridSpec};
pub use settings::{Figure, FigureSpec, Overrides, OUT_DIR_ENV};
pub use table::{Cell, Format, Table};
