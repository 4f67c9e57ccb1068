use std::path::PathBuf;

use clap::Parser;

use crate::error::Result;
use crate::settings::{Figure, FigureSpec, Overrides};
use crate::table::Format;

/// Tables behind the figures of the homodyne photon-number detector.
#[derive(Debug, Parser)]
#[command(name = "pad-sim", version)]
pub struct Args {
    #[arg(value_enum)]
    pub figure: Figure,

    /// Ancilla (target) photon number.
    #[arg(long)]
    pub p: Option<u32>,

    /// Half-width of the test-state window around p.
    #[arg(long)]
    pub w: Option<u32>,

    /// Photon numbers to show (pxn, density), comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u32>>,

    /// Acceptance radius.
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,

    /// Homodyne efficiency.
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Option<f64>,

    /// Beam-splitter angle.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,

    /// Beam-splitter phase.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,

    /// Local-oscillator phase of the x detector.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,

    /// Local-oscillator phase of the y detector.
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,

    /// Sweep axes, e.g. `delta=0.01:1.5:30:log,eta=0.9:1:21`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,

    /// Probability rates for `rates`, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub rates: Option<Vec<f64>>,

    /// Largest ancilla photon number swept when --p is absent.
    #[arg(long)]
    pub p_max: Option<u32>,

    /// Number of window steps for `window-convergence`.
    #[arg(long)]
    pub w_max: Option<u32>,

    /// Photon-number cutoff.
    #[arg(long)]
    pub n_max: Option<u32>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Output file. Without it, `$PAD_SIM_OUT_DIR/<figure>.<ext>` or stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// `key=value` file with defaults for any of the options above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Args {
    fn overrides(&self) -> Overrides {
        Overrides {
            p: self.p,
            w: self.w,
            n: self.n.clone(),
            delta: self.delta,
            eta: self.eta,
            omega: self.omega,
            lambda: self.lambda,
            theta: self.theta,
            phi: self.phi,
            grid: self.grid.clone(),
            rates: self.rates.clone(),
            p_max: self.p_max,
            w_max: self.w_max,
            n_max: self.n_max,
            format: self.format,
        }
    }

    pub fn into_spec(self) -> Result<FigureSpec> {
        let file = match &self.config {
            Some(path) => Overrides::from_file(path)?,
            None => Overrides::default(),
        };
        let merged = self.overrides().or(file);
        FigureSpec::resolve(self.figure, merged, self.out)
    }
}
