//! The photon-added detector: conditional amplitudes after the beam splitter
//! and dual homodyne detection, outcome densities, and the post-selected
//! acceptance probability, fidelity and rate for a windowed test ensemble.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;

use crate::bisect::{bisect, Bracket};
use crate::error::{PadError, Result};
use crate::fock::{
    beamsplitter_output, binomial, hermite_functions, hermite_polynomials, log_factorial, BeamSplitterParams,
    PhotonCount, QuadratureValue, DEFAULT_N_MAX, FLUSH_TO_ZERO,
};
use crate::integrate::{
    disk_integral, rotational_asymmetry, ComponentDensity, DiskIntegral, IntegrationPath, SYMMETRY_TOLERANCE,
};

/// Detector parameters.
///
/// `theta` and `phi` are the local-oscillator phases of the homodyne detectors
/// reading out modes b (`x`) and c (`y`). Only the combination
/// `lambda - theta + phi` enters the conditional state apart from a global
/// phase; see [`PadConfig::effective_lambda`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PadConfig {
    /// Photon number of the auxiliary Fock state in mode c.
    pub p: PhotonCount,
    pub omega: f64,
    pub lambda: f64,
    pub theta: f64,
    pub phi: f64,
    /// Acceptance radius in the `(x, y)` outcome plane.
    pub delta: f64,
    /// Homodyne efficiency, shared by both detectors.
    pub eta: f64,
    /// Largest total photon number the configuration may reach.
    pub n_max: PhotonCount,
}

impl Default for PadConfig {
    fn default() -> Self {
        Self {
            p: 1,
            omega: FRAC_PI_4,
            lambda: FRAC_PI_2,
            theta: 0.0,
            phi: 0.0,
            delta: 0.1,
            eta: 1.0,
            n_max: DEFAULT_N_MAX,
        }
    }
}

impl PadConfig {
    /// Balanced splitter, `lambda = pi/2`, zero LO phases, `delta = 0.1`, unit efficiency.
    pub fn new(p: PhotonCount) -> Self {
        Self { p, ..Self::default() }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_splitter(mut self, omega: f64, lambda: f64) -> Self {
        self.omega = omega;
        self.lambda = lambda;
        self
    }

    pub fn with_phases(mut self, theta: f64, phi: f64) -> Self {
        self.theta = theta;
        self.phi = phi;
        self
    }

    pub fn with_n_max(mut self, n_max: PhotonCount) -> Self {
        self.n_max = n_max;
        self
    }

    /// `lambda - theta + phi`: the only phase the conditional amplitudes
    /// depend on, up to the global factor `exp(-i (n + p) phi)`.
    pub fn effective_lambda(&self) -> f64 {
        self.lambda - self.theta + self.phi
    }

    /// Splitter with the raw (unabsorbed) `lambda`.
    pub fn beam_splitter(&self) -> Result<BeamSplitterParams> {
        BeamSplitterParams::new(self.omega, self.lambda)
    }

    pub fn validate(&self) -> Result<()> {
        BeamSplitterParams::new(self.omega, self.lambda)?;
        for (name, value) in [("theta", self.theta), ("phi", self.phi)] {
            if !value.is_finite() {
                return Err(PadError::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(PadError::InvalidParameter {
                name: "delta",
                value: self.delta,
                reason: "must be finite and non-negative",
            });
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(PadError::InvalidParameter {
                name: "eta",
                value: self.eta,
                reason: "must lie in (0, 1]",
            });
        }
        if self.p > self.n_max {
            return Err(PadError::PhotonLimit {
                total: self.p,
                max: self.n_max,
            });
        }
        Ok(())
    }
}

/// The benchmark input `N_0 sum_n |a_n>|n>` over a window of photon numbers
/// around the target `p`. The `a_n` are orthonormal flags and are never
/// expanded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestEnsemble {
    target: PhotonCount,
    labels: Vec<PhotonCount>,
}

impl TestEnsemble {
    /// Labels `max(0, p - w) ..= p + w`.
    pub fn window(p: PhotonCount, w: PhotonCount) -> Self {
        Self {
            target: p,
            labels: (p.saturating_sub(w)..=p + w).collect(),
        }
    }

    /// Labels `lo ..= hi` with target `p` inside the range.
    pub fn span(p: PhotonCount, lo: PhotonCount, hi: PhotonCount) -> Result<Self> {
        if !(lo <= p && p <= hi) {
            return Err(PadError::InvalidParameter {
                name: "p",
                value: f64::from(p),
                reason: "target must lie inside the label range",
            });
        }
        Ok(Self {
            target: p,
            labels: (lo..=hi).collect(),
        })
    }

    pub fn target(&self) -> PhotonCount {
        self.target
    }

    pub fn labels(&self) -> &[PhotonCount] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn max_label(&self) -> PhotonCount {
        *self
            .labels
            .last()
            .expect("ensemble has at least the target label")
    }

    /// `N_0^2`, the weight of every component.
    pub fn weight(&self) -> f64 {
        1.0 / self.labels.len() as f64
    }

    /// Success probability of an ideal photon counter on this input.
    pub fn p_ideal(&self) -> f64 {
        self.weight()
    }

    fn target_index(&self) -> usize {
        (self.target - self.labels[0]) as usize
    }
}

/// Joint homodyne outcome: `x` read out on mode b, `y` on mode c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDensityPoint {
    pub x: f64,
    pub y: f64,
}

impl JointDensityPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self { x: 0.0, y: 0.0 }
    }

    pub fn from_polar(r: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { x: r * c, y: r * s }
    }

    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Polar angle in `[0, 2 pi)`.
    pub fn angle(&self) -> f64 {
        self.y.atan2(self.x).rem_euclid(TAU)
    }
}

/// Post-selected output ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalResult {
    /// Unnormalised accepted weight of each component `a_n`.
    pub weights: BTreeMap<PhotonCount, f64>,
    /// Total acceptance probability `P_Delta`.
    pub p_delta: f64,
    /// Weight of the target component in the normalised output.
    pub fidelity: f64,
    /// `p_delta / p_ideal`.
    pub rate: f64,
    pub p_ideal: f64,
    /// `None` for the `delta = 0` density-ratio limit.
    pub path: Option<IntegrationPath>,
}

/// Literal double sum of the conditional amplitude for one input component,
/// with everything that does not depend on `(x, y)` precomputed.
#[derive(Debug, Clone)]
struct DoubleSum {
    total: PhotonCount,
    /// `(m + q, C(n,m) C(p,q) e^{i pi (p-q) + i (m+q) lambda} c^{m+p-q} s^{n-m+q})`
    terms: Vec<(PhotonCount, Complex64)>,
    log_norm: f64,
    global_phase: Complex64,
}

impl DoubleSum {
    fn new(n: PhotonCount, cfg: &PadConfig) -> Self {
        let p = cfg.p;
        let lambda = cfg.effective_lambda();
        let (s, c) = cfg.omega.sin_cos();
        let mut terms = Vec::with_capacity(((n + 1) * (p + 1)) as usize);
        for m in 0..=n {
            for q in 0..=p {
                let sign = if (p - q).is_multiple_of(2) { 1.0 } else { -1.0 };
                let real = sign
                    * binomial(n, m)
                    * binomial(p, q)
                    * c.powi((m + p - q) as i32)
                    * s.powi((n - m + q) as i32);
                if real == 0.0 {
                    continue;
                }
                let phase = Complex64::from_polar(1.0, (f64::from(m + q) * lambda).rem_euclid(TAU));
                terms.push((m + q, real * phase));
            }
        }
        let total = n + p;
        let log_norm = 0.5 * (log_factorial(n) + log_factorial(p) + PI.ln() + f64::from(total) * 2f64.ln());
        let global_phase = if cfg.phi == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, -(f64::from(total) * cfg.phi).rem_euclid(TAU))
        };
        Self {
            total,
            terms,
            log_norm,
            global_phase,
        }
    }

    /// `hx`, `hy` hold raw Hermite polynomials up to at least `total`.
    fn eval(&self, x: f64, y: f64, hx: &[f64], hy: &[f64]) -> Complex64 {
        let log_envelope = -0.5 * (x * x + y * y) - self.log_norm;
        if log_envelope < -745.0 {
            return Complex64::new(0.0, 0.0);
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for &(j, coeff) in &self.terms {
            sum += coeff * (hx[j as usize] * hy[(self.total - j) as usize]);
        }
        let out = sum * log_envelope.exp() * self.global_phase;
        if out.norm() < FLUSH_TO_ZERO {
            Complex64::new(0.0, 0.0)
        } else {
            out
        }
    }
}

/// Coefficient of `|a_n, x, y>` in the unnormalised conditional state:
///
/// `e^{-i(n+p)phi - (x^2+y^2)/2} / sqrt(n! p! pi 2^{n+p})
///  * sum_{m,q} C(n,m) C(p,q) e^{i pi (p-q) + i (m+q) lambda'} c^{m+p-q} s^{n-m+q}
///  * H_{m+q}(x) H_{n+p-(m+q)}(y)`
///
/// with `lambda' = lambda - theta + phi`. Loss is ignored here (`cfg.eta` is
/// not read); see [`crate::loss::lossy_joint_density`].
pub fn conditional_amplitude(n: PhotonCount, cfg: &PadConfig, pt: JointDensityPoint) -> Complex64 {
    let sum = DoubleSum::new(n, cfg);
    let hx = hermite_polynomials(sum.total, pt.x);
    let hy = hermite_polynomials(sum.total, pt.y);
    sum.eval(pt.x, pt.y, &hx, &hy)
}

/// Same amplitude by a different route: propagate `|n>|p>` through
/// [`beamsplitter_output`] and project onto `<x_theta| <y_phi|` with the
/// normalised Hermite functions.
pub fn conditional_amplitude_composed(
    n: PhotonCount,
    cfg: &PadConfig,
    pt: JointDensityPoint,
) -> Result<Complex64> {
    let state = beamsplitter_output(n, cfg.p, cfg.beam_splitter()?);
    Ok(state.quadrature_amplitude(
        QuadratureValue::new(pt.x, cfg.theta),
        QuadratureValue::new(pt.y, cfg.phi),
    ))
}

/// `i^k` without rounding.
fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `g(n, p) = sum_{m,q} C(n,m) C(p,q) i^{m-q} H_{m+q}(x) H_{n+p-(m+q)}(y)`, the
/// amplitude kernel of the balanced splitter with `lambda = pi/2`.
pub fn g_function(n: PhotonCount, p: PhotonCount, pt: JointDensityPoint) -> Complex64 {
    let total = n + p;
    let hx = hermite_polynomials(total, pt.x);
    let hy = hermite_polynomials(total, pt.y);
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 0..=n {
        for q in 0..=p {
            let j = (m + q) as usize;
            let real = binomial(n, m) * binomial(p, q) * hx[j] * hy[total as usize - j];
            sum += i_pow(i64::from(m) - i64::from(q)) * real;
        }
    }
    sum
}

/// `|g(n, p)|` at the origin for each `n`. Every `n != p` should vanish.
pub fn origin_vanishing_check(p: PhotonCount, ns: &[PhotonCount]) -> BTreeMap<PhotonCount, f64> {
    ns.iter()
        .map(|&n| (n, g_function(n, p, JointDensityPoint::origin()).norm()))
        .collect()
}

/// `|conditional_amplitude|^2` for a single input component.
pub fn joint_density(n: PhotonCount, cfg: &PadConfig, pt: JointDensityPoint) -> f64 {
    conditional_amplitude(n, cfg, pt).norm_sqr()
}

/// Lossless outcome densities of every component of an ensemble.
#[derive(Debug, Clone)]
pub(crate) struct LosslessDensities {
    sums: Vec<DoubleSum>,
    order: PhotonCount,
}

impl LosslessDensities {
    pub(crate) fn new(ens: &TestEnsemble, cfg: &PadConfig) -> Self {
        let sums: Vec<_> = ens.labels().iter().map(|&n| DoubleSum::new(n, cfg)).collect();
        let order = sums.iter().map(|s| s.total).max().unwrap_or(0);
        Self { sums, order }
    }
}

impl ComponentDensity for LosslessDensities {
    fn len(&self) -> usize {
        self.sums.len()
    }

    fn eval(&self, x: f64, y: f64, out: &mut [f64]) {
        let hx = hermite_polynomials(self.order, x);
        let hy = hermite_polynomials(self.order, y);
        for (o, s) in out.iter_mut().zip(&self.sums) {
            *o = s.eval(x, y, &hx, &hy).norm_sqr();
        }
    }
}

/// `N_0^2 sum_n joint_density(n)`: the outcome density of the whole ensemble.
pub fn ensemble_density(ens: &TestEnsemble, cfg: &PadConfig, pt: JointDensityPoint) -> f64 {
    let dens = LosslessDensities::new(ens, cfg);
    let mut buf = vec![0.0; dens.len()];
    dens.eval(pt.x, pt.y, &mut buf);
    ens.weight() * buf.iter().sum::<f64>()
}

/// Relative angular spread of the lossless ensemble density over the probe grid.
pub fn ensemble_asymmetry(ens: &TestEnsemble, cfg: &PadConfig) -> f64 {
    rotational_asymmetry(&LosslessDensities::new(ens, cfg))
}

pub(crate) fn check_inputs(ens: &TestEnsemble, cfg: &PadConfig) -> Result<()> {
    cfg.validate()?;
    if ens.target() != cfg.p {
        return Err(PadError::TargetMismatch {
            target: ens.target(),
            ancilla: cfg.p,
        });
    }
    let top = ens.max_label() + cfg.p;
    if top > cfg.n_max {
        return Err(PadError::PhotonLimit {
            total: top,
            max: cfg.n_max,
        });
    }
    Ok(())
}

fn is_symmetric<D: ComponentDensity>(dens: &D) -> bool {
    let spread = rotational_asymmetry(dens);
    if spread > SYMMETRY_TOLERANCE {
        log::warn!("outcome density is not rotationally symmetric (spread {spread:e}); using the 2-D rule");
        false
    } else {
        true
    }
}

/// Acceptance probability `P_Delta = 2 pi int_0^Delta P(r) r dr`.
///
/// Uses the one-ray rule when the density passes the symmetry probe and the
/// polar 2-D rule otherwise.
pub fn p_delta(ens: &TestEnsemble, cfg: &PadConfig) -> Result<f64> {
    check_inputs(ens, cfg)?;
    if cfg.delta == 0.0 {
        return Ok(0.0);
    }
    let dens = LosslessDensities::new(ens, cfg);
    let symmetric = is_symmetric(&dens);
    Ok(ens.weight() * disk_integral(&dens, cfg.delta, symmetric).total())
}

/// [`p_delta`] restricted to the one-ray rule; fails instead of falling back.
pub fn p_delta_radial(ens: &TestEnsemble, cfg: &PadConfig) -> Result<f64> {
    check_inputs(ens, cfg)?;
    let dens = LosslessDensities::new(ens, cfg);
    let spread = rotational_asymmetry(&dens);
    if spread > SYMMETRY_TOLERANCE {
        return Err(PadError::SymmetryViolation { spread });
    }
    if cfg.delta == 0.0 {
        return Ok(0.0);
    }
    Ok(ens.weight() * disk_integral(&dens, cfg.delta, true).total())
}

/// `F(0)`: the target's share of the summed density at the origin.
pub fn density_ratio_limit(ens: &TestEnsemble, cfg: &PadConfig) -> Result<f64> {
    check_inputs(ens, cfg)?;
    origin_ratio(ens, &LosslessDensities::new(ens, cfg))
}

pub(crate) fn origin_ratio<D: ComponentDensity>(ens: &TestEnsemble, dens: &D) -> Result<f64> {
    let mut buf = vec![0.0; dens.len()];
    dens.eval(0.0, 0.0, &mut buf);
    let total: f64 = buf.iter().sum();
    if total < FLUSH_TO_ZERO {
        return Err(PadError::Degenerate { p_delta: total });
    }
    Ok(buf[ens.target_index()] / total)
}

fn assemble(ens: &TestEnsemble, integral: &DiskIntegral) -> Result<ConditionalResult> {
    let weight = ens.weight();
    let weights: BTreeMap<_, _> = ens
        .labels()
        .iter()
        .zip(&integral.per_component)
        .map(|(&n, &v)| (n, weight * v))
        .collect();
    let p_delta: f64 = weights.values().sum();
    if p_delta.is_nan() || p_delta < FLUSH_TO_ZERO {
        return Err(PadError::Degenerate { p_delta });
    }
    let fidelity = (weights[&ens.target()] / p_delta).clamp(0.0, 1.0);
    Ok(ConditionalResult {
        weights,
        p_delta,
        fidelity,
        rate: p_delta / ens.p_ideal(),
        p_ideal: ens.p_ideal(),
        path: Some(integral.path),
    })
}

/// Shared by the lossless and lossy paths: disk integration plus the
/// `delta = 0` limit.
pub(crate) fn condition_with<D: ComponentDensity>(
    ens: &TestEnsemble,
    cfg: &PadConfig,
    dens: &D,
) -> Result<ConditionalResult> {
    if cfg.delta == 0.0 {
        let fidelity = origin_ratio(ens, dens)?;
        return Ok(ConditionalResult {
            weights: ens.labels().iter().map(|&n| (n, 0.0)).collect(),
            p_delta: 0.0,
            fidelity,
            rate: 0.0,
            p_ideal: ens.p_ideal(),
            path: None,
        });
    }
    let symmetric = is_symmetric(dens);
    assemble(ens, &disk_integral(dens, cfg.delta, symmetric))
}

/// Post-selected weights, acceptance probability, fidelity and rate.
pub fn conditional_result(ens: &TestEnsemble, cfg: &PadConfig) -> Result<ConditionalResult> {
    check_inputs(ens, cfg)?;
    condition_with(ens, cfg, &LosslessDensities::new(ens, cfg))
}

/// Acceptance radius meeting a requested rate, and the fidelity there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub delta: f64,
    pub fidelity: f64,
    pub bracket: Bracket,
}

/// Radius beyond which the densities of the ensemble are negligible.
fn far_radius(ens: &TestEnsemble, cfg: &PadConfig) -> f64 {
    (2.0 * f64::from(ens.max_label() + cfg.p) + 1.0).sqrt() + 8.0
}

/// Tolerance on `delta` when solving for a target rate.
pub const RATE_DELTA_TOLERANCE: f64 = 1e-9;

/// Solves `P_Delta(delta) = target_rate * P_ideal` for `delta` by bisection
/// and returns the fidelity at the solution. `cfg.delta` is ignored.
pub fn rate_constrained_fidelity(ens: &TestEnsemble, cfg: &PadConfig, target_rate: f64) -> Result<RatePoint> {
    check_inputs(ens, cfg)?;
    if !(target_rate > 0.0 && target_rate.is_finite()) {
        return Err(PadError::InvalidParameter {
            name: "rate",
            value: target_rate,
            reason: "must be positive and finite",
        });
    }
    let dens = LosslessDensities::new(ens, cfg);
    let symmetric = is_symmetric(&dens);
    let weight = ens.weight();
    let accepted = |delta: f64| weight * disk_integral(&dens, delta, symmetric).total();

    let far = far_radius(ens, cfg);
    let max_rate = accepted(far) / ens.p_ideal();
    if target_rate >= max_rate {
        return Err(PadError::UnreachableRate {
            target: target_rate,
            max: max_rate,
        });
    }
    let goal = target_rate * ens.p_ideal();
    let bracket = bisect(|d| Ok(accepted(d) - goal), 0.0, far, RATE_DELTA_TOLERANCE)?;
    let delta = bracket.midpoint();
    let result = condition_with(ens, &cfg.with_delta(delta), &dens)?;
    Ok(RatePoint {
        delta,
        fidelity: result.fidelity,
        bracket,
    })
}

/// `|F(w + 1) - F(w)|` for `w = 0 .. w_max` at the configured `delta`, with
/// ensembles `TestEnsemble::window(p, w)`.
pub fn window_convergence(p: PhotonCount, cfg: &PadConfig, w_max: PhotonCount) -> Result<Vec<f64>> {
    let cfg = PadConfig { p, ..*cfg };
    let fidelities = (0..=w_max)
        .map(|w| conditional_result(&TestEnsemble::window(p, w), &cfg).map(|r| r.fidelity))
        .collect::<Result<Vec<_>>>()?;
    Ok(fidelities.windows(2).map(|f| (f[1] - f[0]).abs()).collect())
}

/// Real-valued Hermite functions at a point, shared with the lossy path.
pub(crate) fn hermite_pair(order: PhotonCount, pt: JointDensityPoint) -> (Vec<f64>, Vec<f64>) {
    (hermite_functions(order, pt.x), hermite_functions(order, pt.y))
}
