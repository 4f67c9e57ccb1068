//! Photon-number detection by conditioning two homodyne measurements on
//! landing near the origin.
//!
//! An unknown Fock state `|n>` and an ancilla `|p>` meet on a beam splitter;
//! both outputs are homodyned and the event is accepted when
//! `x^2 + y^2 <= delta^2`. Because the conditional amplitude vanishes at the
//! origin whenever `n != p`, small acceptance radii select `n = p`.
//!
//! * [`fock`]: Fock-space primitives, the beam-splitter output and quadrature overlaps.
//! * [`conditioning`]: amplitudes, acceptance probability, fidelity and rate.
//! * [`loss`]: homodyne inefficiency and the equivalent photon-counter efficiency.
//!
//! ```
//! use pad_core::{conditional_result, PadConfig, TestEnsemble};
//!
//! // Target |1> out of the window 0..=3, accepting |(x, y)| <= 0.1.
//! let ens = TestEnsemble::window(1, 2);
//! let res = conditional_result(&ens, &PadConfig::new(1).with_delta(0.1))?;
//! assert!(res.fidelity > 0.98);
//! assert!(res.rate < 0.02);
//! # Ok::<(), pad_core::PadError>(())
//! ```

mod error;

pub mod bisect;
pub mod conditioning;
pub mod fock;
pub mod integrate;
pub mod loss;

pub use bisect::{bisect, Bracket};
pub use conditioning::{
    conditional_amplitude, conditional_amplitude_composed, conditional_result, density_ratio_limit,
    ensemble_asymmetry, ensemble_density, g_function, joint_density, origin_vanishing_check, p_delta,
    p_delta_radial, rate_constrained_fidelity, window_convergence, ConditionalResult, JointDensityPoint,
    PadConfig, RatePoint, TestEnsemble,
};
pub use error::{PadError, Result};
pub use fock::{
    beamsplitter_output, quadrature_overlap, BeamSplitterParams, PhotonCount, QuadratureValue, TwoModeState,
    DEFAULT_N_MAX,
};
pub use integrate::IntegrationPath;
pub use loss::{
    apply_loss, equivalent_efficiency, equivalent_efficiency_detail, ideal_fidelity,
    lossy_conditional_result, lossy_joint_density, match_ideal_counter, pad_fidelity_lossy,
    EquivalentEfficiency, IdealCounterPovm, LossBranch, LossChannel,
};
