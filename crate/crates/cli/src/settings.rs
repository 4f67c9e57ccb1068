//! Parameter resolution: command-line flags, then an optional `key=value`
//! config file, then built-in defaults.

use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use pad_core::{PadConfig, PhotonCount, TestEnsemble};

use crate::error::{CliError, Result};
use crate::grid::{Axis, GridSpec};
use crate::table::Format;

/// Directory used for output files when `--out` is absent.
pub const OUT_DIR_ENV: &str = "PAD_SIM_OUT_DIR";

/// Acceptance window used when neither `--w` nor the config file sets one.
pub const DEFAULT_WINDOW: PhotonCount = 2;
pub const DEFAULT_RATES: [f64; 4] = [0.05, 0.1, 0.2, 0.5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Single-mode quadrature densities `|<x|n>|^2`.
    Pxn,
    /// Joint outcome densities along the x axis.
    Density,
    /// Fidelity change per extra window step.
    WindowConvergence,
    /// Fidelity at fixed probability rates.
    Rates,
    /// Equivalent ideal-counter efficiency over (delta, eta).
    EquivEfficiency,
    /// One evaluation with every parameter explicit.
    PointQuery,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Pxn => "pxn",
            Figure::Density => "density",
            Figure::WindowConvergence => "window-convergence",
            Figure::Rates => "rates",
            Figure::EquivEfficiency => "equiv-efficiency",
            Figure::PointQuery => "point-query",
        }
    }

    /// Axes the figure sweeps, with their defaults.
    fn default_grid(self) -> Vec<(&'static str, Axis)> {
        match self {
            Figure::Pxn => vec![("x", Axis::linear(-6.0, 6.0, 241))],
            Figure::Density => vec![("x", Axis::linear(-4.0, 4.0, 161))],
            Figure::EquivEfficiency => vec![
                ("delta", Axis::log(0.01, 1.5, 30)),
                ("eta", Axis::linear(0.9, 1.0, 21)),
            ],
            _ => Vec::new(),
        }
    }
}

/// Every setting that may come from a flag or the config file; `None` means
/// "not given here".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub p: Option<PhotonCount>,
    pub w: Option<PhotonCount>,
    pub n: Option<Vec<PhotonCount>>,
    pub delta: Option<f64>,
    pub eta: Option<f64>,
    pub omega: Option<f64>,
    pub lambda: Option<f64>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub grid: Option<String>,
    pub rates: Option<Vec<f64>>,
    pub p_max: Option<PhotonCount>,
    pub w_max: Option<PhotonCount>,
    pub n_max: Option<PhotonCount>,
    pub format: Option<Format>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("invalid value `{value}` for `{key}`")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_value(key, t))
        .collect()
}

impl Overrides {
    /// Fills every unset field from `fallback`.
    pub fn or(self, fallback: Overrides) -> Overrides {
        Overrides {
            p: self.p.or(fallback.p),
            w: self.w.or(fallback.w),
            n: self.n.or(fallback.n),
            delta: self.delta.or(fallback.delta),
            eta: self.eta.or(fallback.eta),
            omega: self.omega.or(fallback.omega),
            lambda: self.lambda.or(fallback.lambda),
            theta: self.theta.or(fallback.theta),
            phi: self.phi.or(fallback.phi),
            grid: self.grid.or(fallback.grid),
            rates: self.rates.or(fallback.rates),
            p_max: self.p_max.or(fallback.p_max),
            w_max: self.w_max.or(fallback.w_max),
            n_max: self.n_max.or(fallback.n_max),
            format: self.format.or(fallback.format),
        }
    }

    /// Parses `key = value` lines. Blank lines and `#` comments are skipped;
    /// keys accept `-` or `_`.
    pub fn parse_config(text: &str) -> Result<Overrides> {
        let mut o = Overrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("config line {}: expected key=value", lineno + 1)))?;
            let key = key.trim().to_ascii_lowercase().replace('-', "_");
            let value = value.trim();
            match key.as_str() {
                "p" => o.p = Some(parse_value(&key, value)?),
                "w" => o.w = Some(parse_value(&key, value)?),
                "n" => o.n = Some(parse_list(&key, value)?),
                "delta" => o.delta = Some(parse_value(&key, value)?),
                "eta" => o.eta = Some(parse_value(&key, value)?),
                "omega" => o.omega = Some(parse_value(&key, value)?),
                "lambda" => o.lambda = Some(parse_value(&key, value)?),
                "theta" => o.theta = Some(parse_value(&key, value)?),
                "phi" => o.phi = Some(parse_value(&key, value)?),
                "grid" => o.grid = Some(value.to_owned()),
                "rates" => o.rates = Some(parse_list(&key, value)?),
                "p_max" => o.p_max = Some(parse_value(&key, value)?),
                "w_max" => o.w_max = Some(parse_value(&key, value)?),
                "n_max" => o.n_max = Some(parse_value(&key, value)?),
                "format" => {
                    o.format = Some(
                        Format::parse(value)
                            .ok_or_else(|| CliError::usage(format!("unknown format `{value}`")))?,
                    )
                }
                _ => {
                    return Err(CliError::usage(format!(
                        "config line {}: unknown key `{key}`",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(o)
    }

    pub fn from_file(path: &Path) -> Result<Overrides> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse_config(&text).map_err(|e| match e {
            CliError::Usage(msg) => CliError::Usage(format!("{}: {msg}", path.display())),
            other => other,
        })
    }
}

/// A fully resolved request.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub figure: Figure,
    pub config: PadConfig,
    pub w: PhotonCount,
    pub ensemble: TestEnsemble,
    pub grid: GridSpec,
    /// Photon numbers shown by `pxn` and `density`.
    pub ns: Vec<PhotonCount>,
    /// Ancilla photon numbers swept by `window-convergence` and `rates`.
    pub ps: Vec<PhotonCount>,
    pub rates: Vec<f64>,
    pub w_max: PhotonCount,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl FigureSpec {
    /// Applies defaults to `o` and checks the combination. Numerical
    /// parameter ranges are left to the library.
    pub fn resolve(figure: Figure, o: Overrides, output: Option<PathBuf>) -> Result<Self> {
        let defaults = PadConfig::default();
        let explicit_p = o.p.is_some();
        let explicit_w = o.w.is_some();
        let p = o.p.unwrap_or(defaults.p);
        let w = o.w.unwrap_or(DEFAULT_WINDOW);
        let config = PadConfig {
            p,
            omega: o.omega.unwrap_or(defaults.omega),
            lambda: o.lambda.unwrap_or(defaults.lambda),
            theta: o.theta.unwrap_or(defaults.theta),
            phi: o.phi.unwrap_or(defaults.phi),
            delta: o.delta.unwrap_or(defaults.delta),
            eta: o.eta.unwrap_or(defaults.eta),
            n_max: o.n_max.unwrap_or(defaults.n_max),
        };

        let ensemble = if figure == Figure::EquivEfficiency && !explicit_p && !explicit_w {
            // Target |a_1> out of the labels 0..=4.
            TestEnsemble::span(1, 0, 4)?
        } else {
            TestEnsemble::window(p, w)
        };
        let config = if figure == Figure::EquivEfficiency {
            PadConfig {
                p: ensemble.target(),
                ..config
            }
        } else {
            config
        };

        let mut grid = GridSpec::default();
        let allowed = figure.default_grid();
        for (name, axis) in &allowed {
            grid.insert(name, *axis);
        }
        if let Some(text) = &o.grid {
            let given: GridSpec = text
                .parse()
                .map_err(|e| CliError::usage(format!("--grid: {e}")))?;
            for name in given.names() {
                if !allowed.iter().any(|(a, _)| *a == name) {
                    let known: Vec<&str> = allowed.iter().map(|(a, _)| *a).collect();
                    return Err(CliError::usage(format!(
                        "{} has no `{name}` axis (axes: {})",
                        figure.name(),
                        if known.is_empty() {
                            "none".to_owned()
                        } else {
                            known.join(", ")
                        }
                    )));
                }
                grid.insert(name, *given.axis(name).expect("listed axis"));
            }
        }

        let ns = match (&o.n, figure) {
            (Some(ns), _) if ns.is_empty() => return Err(CliError::usage("--n: empty list")),
            (Some(ns), _) => ns.clone(),
            (None, Figure::Density) => ensemble.labels().to_vec(),
            (None, _) => (0..=4).collect(),
        };
        if let Some(&n) = ns.iter().find(|&&n| n > config.n_max) {
            return Err(CliError::usage(format!(
                "photon number {n} exceeds n_max {}",
                config.n_max
            )));
        }

        let default_p_max = if figure == Figure::Rates { 6 } else { 4 };
        let ps = if explicit_p {
            vec![p]
        } else {
            (0..=o.p_max.unwrap_or(default_p_max)).collect()
        };

        let rates = o.rates.unwrap_or_else(|| DEFAULT_RATES.to_vec());
        if rates.is_empty() {
            return Err(CliError::usage("--rates: empty list"));
        }
        let w_max = o.w_max.unwrap_or(4);
        if w_max == 0 {
            return Err(CliError::usage("--w-max must be at least 1"));
        }

        Ok(FigureSpec {
            figure,
            config,
            w,
            ensemble,
            grid,
            ns,
            ps,
            rates,
            w_max,
            format: o.format.unwrap_or(Format::Csv),
            output,
        })
    }

    pub fn axis(&self, name: &str) -> &Axis {
        self.grid
            .axis(name)
            .unwrap_or_else(|| panic!("{} has no `{name}` axis", self.figure.name()))
    }

    /// `--out`, else `$PAD_SIM_OUT_DIR/<figure>.<ext>`, else `None` for stdout.
    pub fn destination(&self) -> Option<PathBuf> {
        if let Some(path) = &self.output {
            return Some(path.clone());
        }
        let dir = env::var_os(OUT_DIR_ENV).filter(|d| !d.is_empty())?;
        Some(PathBuf::from(dir).join(format!("{}.{}", self.figure.name(), self.format.extension())))
    }
}
