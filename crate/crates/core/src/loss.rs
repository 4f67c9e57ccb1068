//! Detector inefficiency: photon loss in front of each homodyne detector,
//! the ideal-but-inefficient photon counter it is compared against, and the
//! counter efficiency that would match the detector's fidelity.

use num_complex::Complex64;

use crate::bisect::{bisect, Bracket};
use crate::conditioning::{
    check_inputs, condition_with, hermite_pair, ConditionalResult, JointDensityPoint, PadConfig, TestEnsemble,
};
use crate::error::{PadError, Result};
use crate::fock::{beamsplitter_output, binomial, hermite_functions, PhotonCount, TwoModeState};
use crate::integrate::ComponentDensity;

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta <= 1.0 {
        Ok(())
    } else {
        Err(PadError::InvalidParameter {
            name: "eta",
            value: eta,
            reason: "must lie in (0, 1]",
        })
    }
}

/// Beam-splitter loss of transmissivity `eta` on one mode: each photon
/// survives independently with probability `eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossChannel {
    eta: f64,
}

impl LossChannel {
    pub fn new(eta: f64) -> Result<Self> {
        check_eta(eta)?;
        Ok(Self { eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Probability that `lost` of `n` photons are lost,
    /// `C(n, lost) eta^{n - lost} (1 - eta)^lost`.
    pub fn branch_weight(&self, n: PhotonCount, lost: PhotonCount) -> f64 {
        if lost > n {
            return 0.0;
        }
        binomial(n, lost) * self.eta.powi((n - lost) as i32) * (1.0 - self.eta).powi(lost as i32)
    }

    /// Branch weights for `lost = 0 ..= n`.
    pub fn branch_weights(&self, n: PhotonCount) -> Vec<f64> {
        (0..=n).map(|lost| self.branch_weight(n, lost)).collect()
    }

    /// Matrix element `<n - lost| K_lost |n>` of the Kraus operator for
    /// `lost` photons.
    fn kraus(&self, n: PhotonCount, lost: PhotonCount) -> f64 {
        self.branch_weight(n, lost).sqrt()
    }

    /// Applies the channel to both modes of a pure two-mode state.
    ///
    /// Branches are labelled by the photons lost from each mode; within a
    /// branch the surviving amplitudes stay coherent. Zero-weight branches
    /// are dropped.
    pub fn apply(&self, state: &TwoModeState) -> Vec<LossBranch> {
        let total = state.total();
        let mut branches = Vec::new();
        for lost_b in 0..=total {
            for lost_c in 0..=total - lost_b {
                let remaining = total - lost_b - lost_c;
                let amplitudes: Vec<Complex64> = (0..=remaining)
                    .map(|jb| {
                        let j = jb + lost_b;
                        let k = total - j;
                        if k < lost_c {
                            return Complex64::new(0.0, 0.0);
                        }
                        state.amplitude(j, k) * self.kraus(j, lost_b) * self.kraus(k, lost_c)
                    })
                    .collect();
                let weight: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
                if weight == 0.0 {
                    continue;
                }
                let state = TwoModeState::from_amplitudes(remaining, amplitudes)
                    .expect("branch amplitudes are finite and sized to the shell")
                    .normalized();
                branches.push(LossBranch {
                    lost_b,
                    lost_c,
                    weight,
                    state,
                });
            }
        }
        branches
    }
}

/// One outcome of the loss channel: a normalised pure state and its probability.
#[derive(Debug, Clone, PartialEq)]
pub struct LossBranch {
    pub lost_b: PhotonCount,
    pub lost_c: PhotonCount,
    pub weight: f64,
    pub state: TwoModeState,
}

/// Independent loss of transmissivity `eta` on both modes.
pub fn apply_loss(state: &TwoModeState, eta: f64) -> Result<Vec<LossBranch>> {
    Ok(LossChannel::new(eta)?.apply(state))
}

/// POVM element of an ideal photon counter with efficiency `eta` reporting
/// `p` clicks: diagonal, with weight `C(m, p) eta^p (1 - eta)^{m - p}` on `|m>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealCounterPovm {
    pub p: PhotonCount,
    eta: f64,
}

impl IdealCounterPovm {
    pub fn new(p: PhotonCount, eta: f64) -> Result<Self> {
        check_eta(eta)?;
        Ok(Self { p, eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `<m| Pi_p |m>`.
    pub fn weight(&self, m: PhotonCount) -> f64 {
        if m < self.p {
            return 0.0;
        }
        binomial(m, self.p) * self.eta.powi(self.p as i32) * (1.0 - self.eta).powi((m - self.p) as i32)
    }
}

/// Fidelity of the ideal counter on the windowed test state reaching up to
/// `n_max` photons: `(sum_{n=p}^{n_max} C(n, p) (1 - eta)^{n - p})^{-1}`.
///
/// # Panics
///
/// Panics if `p > n_max`.
pub fn ideal_fidelity(p: PhotonCount, n_max: PhotonCount, eta: f64) -> f64 {
    assert!(p <= n_max, "ideal_fidelity needs p <= n_max");
    let loss = 1.0 - eta;
    let sum: f64 = (p..=n_max)
        .map(|n| binomial(n, p) * loss.powi((n - p) as i32))
        .sum();
    1.0 / sum
}

/// Outcome densities after loss, for every component of an ensemble.
#[derive(Debug, Clone)]
pub(crate) struct LossyDensities {
    components: Vec<Vec<LossBranch>>,
    order: PhotonCount,
    theta: f64,
    phi: f64,
}

impl LossyDensities {
    pub(crate) fn new(ens: &TestEnsemble, cfg: &PadConfig) -> Result<Self> {
        let channel = LossChannel::new(cfg.eta)?;
        let bs = cfg.beam_splitter()?;
        let components: Vec<_> = ens
            .labels()
            .iter()
            .map(|&n| channel.apply(&beamsplitter_output(n, cfg.p, bs)))
            .collect();
        Ok(Self {
            components,
            order: ens.max_label() + cfg.p,
            theta: cfg.theta,
            phi: cfg.phi,
        })
    }
}

fn branch_density(branches: &[LossBranch], hx: &[f64], hy: &[f64], theta: f64, phi: f64) -> f64 {
    branches
        .iter()
        .map(|b| b.weight * b.state.project(hx, hy, theta, phi).norm_sqr())
        .sum()
}

impl ComponentDensity for LossyDensities {
    fn len(&self) -> usize {
        self.components.len()
    }

    fn eval(&self, x: f64, y: f64, out: &mut [f64]) {
        let hx = hermite_functions(self.order, x);
        let hy = hermite_functions(self.order, y);
        for (o, branches) in out.iter_mut().zip(&self.components) {
            *o = branch_density(branches, &hx, &hy, self.theta, self.phi);
        }
    }
}

/// Outcome density of component `n` with loss `cfg.eta` in front of both
/// detectors: `sum_branches weight * |<x, y|branch>|^2`.
pub fn lossy_joint_density(n: PhotonCount, cfg: &PadConfig, pt: JointDensityPoint) -> Result<f64> {
    let channel = LossChannel::new(cfg.eta)?;
    let branches = channel.apply(&beamsplitter_output(n, cfg.p, cfg.beam_splitter()?));
    let (hx, hy) = hermite_pair(n + cfg.p, pt);
    Ok(branch_density(&branches, &hx, &hy, cfg.theta, cfg.phi))
}

/// [`crate::conditioning::conditional_result`] with the lossy densities.
pub fn lossy_conditional_result(ens: &TestEnsemble, cfg: &PadConfig) -> Result<ConditionalResult> {
    check_inputs(ens, cfg)?;
    condition_with(ens, cfg, &LossyDensities::new(ens, cfg)?)
}

/// Fidelity `F(delta, eta)` of the detector with inefficient homodyning.
pub fn pad_fidelity_lossy(ens: &TestEnsemble, cfg: &PadConfig) -> Result<f64> {
    Ok(lossy_conditional_result(ens, cfg)?.fidelity)
}

/// Tolerance on the equivalent efficiency.
pub const EFFICIENCY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalentEfficiency {
    /// Efficiency an ideal counter needs to match `pad_fidelity`.
    pub eta_ideal: f64,
    pub pad_fidelity: f64,
    /// Final bisection bracket; `None` when the answer is exactly 1.
    pub bracket: Option<Bracket>,
}

/// Solves `ideal_fidelity(p, n_max, eta_ideal) = pad_fidelity_lossy(ens, cfg)`
/// where `n_max` is the ensemble's largest label.
pub fn equivalent_efficiency_detail(ens: &TestEnsemble, cfg: &PadConfig) -> Result<EquivalentEfficiency> {
    let pad = pad_fidelity_lossy(ens, cfg)?;
    match_ideal_counter(ens.target(), ens.max_label(), pad)
}

/// Efficiency of the ideal counter whose fidelity equals `fidelity`.
pub fn match_ideal_counter(
    p: PhotonCount,
    n_max: PhotonCount,
    fidelity: f64,
) -> Result<EquivalentEfficiency> {
    if fidelity >= 1.0 {
        return Ok(EquivalentEfficiency {
            eta_ideal: 1.0,
            pad_fidelity: fidelity,
            bracket: None,
        });
    }
    // eta -> 0 limit of the closed form.
    let floor = ideal_fidelity(p, n_max, 0.0);
    if fidelity <= floor {
        return Err(PadError::OutOfRange { fidelity, floor });
    }
    let bracket = bisect(
        |eta| Ok(ideal_fidelity(p, n_max, eta) - fidelity),
        0.0,
        1.0,
        EFFICIENCY_TOLERANCE,
    )?;
    Ok(EquivalentEfficiency {
        eta_ideal: bracket.midpoint(),
        pad_fidelity: fidelity,
        bracket: Some(bracket),
    })
}

/// Efficiency an ideal photon counter needs to reach the detector's fidelity.
pub fn equivalent_efficiency(ens: &TestEnsemble, cfg: &PadConfig) -> Result<f64> {
    Ok(equivalent_efficiency_detail(ens, cfg)?.eta_ideal)
}
