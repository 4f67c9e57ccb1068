//! Finite Fock-space primitives: factorial combinatorics, Hermite functions,
//! quadrature-eigenstate overlaps and the two-mode beam-splitter transform.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{PadError, Result};

/// Photon number of a single mode.
pub type PhotonCount = u32;

/// Default bound on the total photon number handled by a configuration.
pub const DEFAULT_N_MAX: PhotonCount = 24;

/// Magnitudes below this are treated as exact zeros.
pub(crate) const FLUSH_TO_ZERO: f64 = 1e-300;

const LOG_FACTORIAL_TABLE: usize = 1024;

fn log_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(LOG_FACTORIAL_TABLE);
        let mut acc = 0.0;
        table.push(0.0);
        for k in 1..LOG_FACTORIAL_TABLE {
            acc += (k as f64).ln();
            table.push(acc);
        }
        table
    })
}

/// `ln(n!)`.
pub fn log_factorial(n: PhotonCount) -> f64 {
    let n = n as usize;
    let table = log_factorial_table();
    if n < table.len() {
        table[n]
    } else {
        table[table.len() - 1] + (table.len()..=n).map(|k| (k as f64).ln()).sum::<f64>()
    }
}

/// Binomial coefficient `u! / ((u - v)! v!)`.
///
/// Exact (up to the final rounding to `f64`) for `u <= 60`; larger arguments
/// go through the log-factorials.
///
/// # Panics
///
/// Panics if `v > u`.
pub fn binomial(u: PhotonCount, v: PhotonCount) -> f64 {
    assert!(v <= u, "binomial({u}, {v}) requires v <= u");
    let v = v.min(u - v);
    if u <= 60 {
        let mut acc: u128 = 1;
        for i in 0..v as u128 {
            acc = acc * (u as u128 - i) / (i + 1);
        }
        acc as f64
    } else {
        (log_factorial(u) - log_factorial(v) - log_factorial(u - v))
            .exp()
            .round()
    }
}

/// `H_n(0)`: zero for odd `n`, `(-1)^(n/2) n! / (n/2)!` for even `n`.
pub fn hermite_at_zero(n: PhotonCount) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let half = n / 2;
    let magnitude: f64 = (half + 1..=n).map(f64::from).product();
    if half.is_multiple_of(2) {
        magnitude
    } else {
        -magnitude
    }
}

/// Physicists' Hermite polynomials `H_0(x) ..= H_order(x)`.
pub fn hermite_polynomials(order: PhotonCount, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(order as usize + 1);
    out.push(1.0);
    if order == 0 {
        return out;
    }
    out.push(2.0 * x);
    for k in 1..order as usize {
        let next = 2.0 * x * out[k] - 2.0 * k as f64 * out[k - 1];
        out.push(next);
    }
    out
}

/// Harmonic-oscillator eigenfunctions `phi_0(x) ..= phi_order(x)`, where
/// `phi_n(x) = <x|n>` at zero local-oscillator phase.
///
/// Runs the normalised three-term recurrence directly so that nothing
/// overflows for large orders. The Gaussian envelope is applied at the end in
/// the log domain, which keeps large `|x|` finite as well.
pub fn hermite_functions(order: PhotonCount, x: f64) -> Vec<f64> {
    const RESCALE: f64 = 1e150;
    // (value, log scale) pairs: phi_n = value * exp(scale - x^2/2).
    let mut scaled = Vec::with_capacity(order as usize + 1);
    let mut shift = 0.0;
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    scaled.push((cur, shift));
    for k in 0..order {
        let kf = f64::from(k);
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            shift += RESCALE.ln();
        }
        scaled.push((cur, shift));
    }

    let envelope = -0.5 * x * x;
    scaled
        .into_iter()
        .map(|(v, s)| {
            if v == 0.0 {
                return 0.0;
            }
            let mag = (v.abs().ln() + s + envelope).exp();
            if mag < FLUSH_TO_ZERO {
                0.0
            } else {
                mag.copysign(v)
            }
        })
        .collect()
}

/// A homodyne outcome: quadrature amplitude `x` measured at local-oscillator
/// phase `theta`, in the `X = (a + a^dagger)/sqrt(2)` convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureValue {
    pub x: f64,
    pub theta: f64,
}

impl QuadratureValue {
    pub fn new(x: f64, theta: f64) -> Self {
        Self {
            x,
            theta: theta.rem_euclid(TAU),
        }
    }

    /// Outcome at zero local-oscillator phase.
    pub fn in_phase(x: f64) -> Self {
        Self { x, theta: 0.0 }
    }
}

/// `<x_theta|n> = H_n(x) / sqrt(sqrt(pi) 2^n n!) * exp(-x^2/2 - i n theta)`.
pub fn quadrature_overlap(n: PhotonCount, q: QuadratureValue) -> Complex64 {
    let phi = hermite_functions(n, q.x)[n as usize];
    phi * lo_phase(n, q.theta)
}

/// `exp(-i n theta)`, exactly 1 at zero phase.
pub(crate) fn lo_phase(n: PhotonCount, theta: f64) -> Complex64 {
    if theta == 0.0 || n == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, -(n as f64 * theta).rem_euclid(TAU))
    }
}

/// Beam splitter of reflectivity `cos^2(omega)` followed by a phase shift
/// `lambda` on mode b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterParams {
    omega: f64,
    lambda: f64,
}

impl BeamSplitterParams {
    pub fn new(omega: f64, lambda: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&omega) {
            return Err(PadError::InvalidParameter {
                name: "omega",
                value: omega,
                reason: "must lie in [0, pi/2]",
            });
        }
        if !lambda.is_finite() {
            return Err(PadError::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "must be finite",
            });
        }
        Ok(Self {
            omega,
            lambda: lambda.rem_euclid(TAU),
        })
    }

    /// 50:50 splitter with a quarter-wave phase on mode b.
    pub fn balanced() -> Self {
        Self {
            omega: std::f64::consts::FRAC_PI_4,
            lambda: FRAC_PI_2,
        }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Pure state of the two detected modes (b, c) with a fixed total photon
/// number. Amplitudes are indexed by the mode-b occupation `j`; the mode-c
/// occupation is `total - j`, so photon-number conservation is structural.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    total: PhotonCount,
    amplitudes: Vec<Complex64>,
}

impl TwoModeState {
    /// State from amplitudes `[a(0, total), a(1, total - 1), ..., a(total, 0)]`.
    pub fn from_amplitudes(total: PhotonCount, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != total as usize + 1 {
            return Err(PadError::InvalidParameter {
                name: "amplitudes",
                value: amplitudes.len() as f64,
                reason: "length must be total + 1",
            });
        }
        if let Some(bad) = amplitudes.iter().find(|a| !a.is_finite()) {
            return Err(PadError::InvalidParameter {
                name: "amplitudes",
                value: bad.norm(),
                reason: "amplitudes must be finite",
            });
        }
        Ok(Self { total, amplitudes })
    }

    /// The product state `|j>_b |k>_c`.
    pub fn basis(j: PhotonCount, k: PhotonCount) -> Self {
        let total = j + k;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); total as usize + 1];
        amplitudes[j as usize] = Complex64::new(1.0, 0.0);
        Self { total, amplitudes }
    }

    pub fn total(&self) -> PhotonCount {
        self.total
    }

    /// Amplitude of `|j>_b |k>_c`; zero off the conserved shell.
    pub fn amplitude(&self, j: PhotonCount, k: PhotonCount) -> Complex64 {
        if j + k == self.total {
            self.amplitudes[j as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Amplitudes ordered by the mode-b occupation.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `(j, k, amplitude)` triples.
    pub fn iter(&self) -> impl Iterator<Item = (PhotonCount, PhotonCount, Complex64)> + '_ {
        self.amplitudes
            .iter()
            .enumerate()
            .map(move |(j, &a)| (j as PhotonCount, self.total - j as PhotonCount, a))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(mut self) -> Self {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            for a in &mut self.amplitudes {
                *a /= norm;
            }
        }
        self
    }

    /// `<x_theta, y_phi | state>`, with `x` read out on mode b and `y` on mode c.
    pub fn quadrature_amplitude(&self, x: QuadratureValue, y: QuadratureValue) -> Complex64 {
        let hx = hermite_functions(self.total, x.x);
        let hy = hermite_functions(self.total, y.x);
        self.project(&hx, &hy, x.theta, y.theta)
    }

    /// Projection onto quadrature eigenstates given precomputed Hermite
    /// functions of order at least `total` on each axis.
    pub(crate) fn project(&self, hx: &[f64], hy: &[f64], theta: f64, phi: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, k, a) in self.iter() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let real = hx[j as usize] * hy[k as usize];
            acc += a * real * lo_phase(j, theta) * lo_phase(k, phi);
        }
        acc
    }
}

/// Output of the beam splitter and phase shift for input `|n>_b |p>_c`.
///
/// Expands `(n! p!)^{-1/2} sum_{m,q} C(n,m) C(p,q) e^{i pi (p-q) + i (m+q) lambda}
/// c^{m+p-q} s^{n-m+q} b^dagger^{m+q} c^dagger^{n+p-(m+q)} |00>` and collects the
/// coefficient of each `|j, n+p-j>`.
pub fn beamsplitter_output(n: PhotonCount, p: PhotonCount, bs: BeamSplitterParams) -> TwoModeState {
    let total = n + p;
    let (s, c) = bs.omega.sin_cos();
    let log_norm = 0.5 * (log_factorial(n) + log_factorial(p));
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); total as usize + 1];

    for m in 0..=n {
        let bn = binomial(n, m);
        for q in 0..=p {
            let j = m + q;
            let k = total - j;
            let sign = if (p - q).is_multiple_of(2) { 1.0 } else { -1.0 };
            let weight = bn
                * binomial(p, q)
                * c.powi((m + p - q) as i32)
                * s.powi((n - m + q) as i32)
                * (0.5 * (log_factorial(j) + log_factorial(k)) - log_norm).exp();
            if weight == 0.0 {
                continue;
            }
            let phase = Complex64::from_polar(1.0, (j as f64 * bs.lambda).rem_euclid(TAU));
            amplitudes[j as usize] += sign * weight * phase;
        }
    }
    for a in &mut amplitudes {
        if a.re.abs() < FLUSH_TO_ZERO {
            a.re = 0.0;
        }
        if a.im.abs() < FLUSH_TO_ZERO {
            a.im = 0.0;
        }
    }
    TwoModeState { total, amplitudes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_4;

    fn exact_factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// Expands `prod (alpha b^dagger + beta c^dagger)` one photon at a time
    /// as a polynomial in the creation operators.
    fn polynomial_oracle(n: u32, p: u32, omega: f64, lambda: f64) -> Vec<Complex64> {
        let (s, c) = omega.sin_cos();
        let e = Complex64::from_polar(1.0, lambda);
        // b^dagger -> c e^{i lambda} b^dagger + s c^dagger
        // c^dagger -> s e^{i lambda} b^dagger - c c^dagger
        let b_image = [c * e, Complex64::new(s, 0.0)];
        let c_image = [s * e, Complex64::new(-c, 0.0)];
        let total = (n + p) as usize;
        // poly[j][k] multiplies b^dagger^j c^dagger^k
        let mut poly = vec![vec![Complex64::new(0.0, 0.0); total + 1]; total + 1];
        poly[0][0] = Complex64::new(1.0, 0.0);
        let images = std::iter::repeat_n(b_image, n as usize).chain(std::iter::repeat_n(c_image, p as usize));
        for [to_b, to_c] in images {
            let mut next = vec![vec![Complex64::new(0.0, 0.0); total + 1]; total + 1];
            for j in 0..=total {
                for k in 0..=total {
                    let v = poly[j][k];
                    if v.norm() == 0.0 {
                        continue;
                    }
                    if j < total {
                        next[j + 1][k] += v * to_b;
                    }
                    if k < total {
                        next[j][k + 1] += v * to_c;
                    }
                }
            }
            poly = next;
        }
        let input_norm = (exact_factorial(n) * exact_factorial(p)).sqrt();
        (0..=total)
            .map(|j| {
                let k = total - j;
                poly[j][k] * (exact_factorial(j as u32) * exact_factorial(k as u32)).sqrt() / input_norm
            })
            .collect()
    }

    #[test]
    fn log_factorial_values() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        assert_relative_eq!(log_factorial(5), 120f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(log_factorial(5), 4.787491742782046, max_relative = 1e-13);
        for n in [10u32, 50, 100, 170] {
            let direct: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
            assert_relative_eq!(log_factorial(n), direct, max_relative = 1e-13);
        }
    }

    #[test]
    fn log_factorial_past_the_table() {
        let n = LOG_FACTORIAL_TABLE as u32 + 10;
        let direct: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
        assert_relative_eq!(log_factorial(n), direct, max_relative = 1e-13);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 0), 1.0);
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(10, 5), 252.0);
        assert_eq!(binomial(60, 30), 118264581564861424.0);
        // Pascal's rule through the log-domain branch.
        assert_relative_eq!(
            binomial(80, 40),
            binomial(79, 39) + binomial(79, 40),
            max_relative = 1e-12
        );
    }

    #[test]
    #[should_panic]
    fn binomial_rejects_v_above_u() {
        binomial(3, 4);
    }

    #[test]
    fn hermite_at_zero_values() {
        assert_eq!(hermite_at_zero(0), 1.0);
        assert_eq!(hermite_at_zero(1), 0.0);
        assert_eq!(hermite_at_zero(2), -2.0);
        assert_eq!(hermite_at_zero(4), 12.0);
        for n in 0..=20 {
            assert_eq!(hermite_polynomials(n, 0.0)[n as usize], hermite_at_zero(n));
        }
    }

    #[test]
    fn quadrature_overlap_examples() {
        let ground = quadrature_overlap(0, QuadratureValue::in_phase(0.0));
        assert_relative_eq!(ground.re, 0.751125544464943, max_relative = 1e-14);
        assert_eq!(ground.im, 0.0);

        assert_eq!(quadrature_overlap(1, QuadratureValue::in_phase(0.0)).norm(), 0.0);

        // H_2(1) = 2, so 2 e^{-1/2} / sqrt(8 sqrt(pi)).
        let expected = 2.0 * (-0.5f64).exp() / (8.0 * PI.sqrt()).sqrt();
        let got = quadrature_overlap(2, QuadratureValue::in_phase(1.0));
        assert_relative_eq!(got.re, expected, max_relative = 1e-14);
        assert_relative_eq!(expected, 0.322144, max_relative = 1e-6);
    }

    #[test]
    fn overlap_phase_is_minus_n_theta() {
        let q = QuadratureValue::new(0.7, 0.3);
        let z = quadrature_overlap(3, q);
        let real = quadrature_overlap(3, QuadratureValue::in_phase(0.7)).re;
        assert_relative_eq!(z.re, real * (0.9f64).cos(), max_relative = 1e-13);
        assert_relative_eq!(z.im, -real * (0.9f64).sin(), max_relative = 1e-13);
    }

    #[test]
    fn hermite_functions_match_raw_polynomials() {
        // Independent route: H_n(x) e^{-x^2/2} / sqrt(sqrt(pi) 2^n n!) for moderate n.
        for &x in &[-7.5, -2.0, -0.3, 0.0, 0.9, 4.0, 10.0] {
            let raw = hermite_polynomials(60, x);
            let stable = hermite_functions(60, x);
            for n in 0..=60u32 {
                let direct = raw[n as usize] * (-0.5 * x * x).exp()
                    / (PI.sqrt() * 2f64.powi(n as i32) * exact_factorial(n)).sqrt();
                let scale = direct
                    .abs()
                    .max(1e-14 * stable.iter().fold(0.0f64, |m, v| m.max(v.abs())));
                assert!(
                    (stable[n as usize] - direct).abs() <= 1e-11 * scale,
                    "n={n} x={x}: {} vs {direct}",
                    stable[n as usize]
                );
            }
        }
    }

    #[test]
    fn hermite_functions_survive_large_orders() {
        let values = hermite_functions(300, 20.0);
        assert!(values.iter().all(|v| v.is_finite()));
        // Past the turning point sqrt(2n+1) the functions are non-negligible.
        assert!(values[300].abs() > 1e-3);
        let far = hermite_functions(10, 60.0);
        assert!(far.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn hermite_consistency_at_origin() {
        for n in 0..=20u32 {
            let expected = hermite_at_zero(n) / (PI.sqrt() * 2f64.powi(n as i32) * exact_factorial(n)).sqrt();
            let got = quadrature_overlap(n, QuadratureValue::in_phase(0.0)).re;
            assert!(
                (got - expected).abs() <= 1e-13 * expected.abs().max(1e-300),
                "n={n}"
            );
        }
    }

    #[test]
    fn overlap_densities_integrate_to_one() {
        // Composite trapezoid on a fine grid; the integrand decays like a
        // Gaussian so the rule is spectrally accurate.
        let steps = 24_000;
        let h = 24.0 / steps as f64;
        for n in 0..=6u32 {
            let mut sum = 0.0;
            for i in 0..=steps {
                let x = -12.0 + i as f64 * h;
                let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
                sum += w * quadrature_overlap(n, QuadratureValue::in_phase(x)).norm_sqr();
            }
            assert!((sum * h - 1.0).abs() < 1e-9, "n={n}: {}", sum * h);
        }
    }

    #[test]
    fn beamsplitter_single_photon() {
        let bs = BeamSplitterParams::new(FRAC_PI_4, 0.0).unwrap();
        let out = beamsplitter_output(1, 0, bs);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(out.amplitude(1, 0).re, h, max_relative = 1e-15);
        assert_relative_eq!(out.amplitude(0, 1).re, h, max_relative = 1e-15);
        assert_eq!(out.amplitude(1, 0).im, 0.0);
    }

    #[test]
    fn beamsplitter_vacuum_is_invariant() {
        for &(omega, lambda) in &[(0.0, 0.0), (0.4, 2.0), (FRAC_PI_2, 5.0)] {
            let out = beamsplitter_output(0, 0, BeamSplitterParams::new(omega, lambda).unwrap());
            assert_eq!(out.amplitudes(), &[Complex64::new(1.0, 0.0)]);
        }
    }

    #[test]
    fn beamsplitter_two_three_matches_oracle() {
        let bs = BeamSplitterParams::balanced();
        let out = beamsplitter_output(2, 3, bs);
        assert_eq!(out.total(), 5);
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        let oracle = polynomial_oracle(2, 3, FRAC_PI_4, FRAC_PI_2);
        for (j, expected) in oracle.iter().enumerate() {
            assert!((out.amplitudes()[j] - expected).norm() < 1e-10, "j={j}");
        }
    }

    #[test]
    fn beamsplitter_agrees_with_polynomial_oracle() {
        let angles = [0.0, 0.3, FRAC_PI_4, 1.2, FRAC_PI_2];
        let phases = [0.0, 1.0, FRAC_PI_2, 4.0];
        for n in 0..=5 {
            for p in 0..=5 {
                for &omega in &angles {
                    for &lambda in &phases {
                        let out = beamsplitter_output(n, p, BeamSplitterParams::new(omega, lambda).unwrap());
                        let oracle = polynomial_oracle(n, p, omega, lambda);
                        for (j, expected) in oracle.iter().enumerate() {
                            let diff = (out.amplitudes()[j] - expected).norm();
                            assert!(
                                diff < 1e-10,
                                "n={n} p={p} omega={omega} lambda={lambda} j={j}: {diff}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn beamsplitter_unitarity() {
        for n in 0..=6 {
            for p in 0..=6 {
                for i in 0..=8 {
                    let omega = FRAC_PI_2 * i as f64 / 8.0;
                    for l in 0..6 {
                        let bs = BeamSplitterParams::new(omega, TAU * l as f64 / 6.0).unwrap();
                        let out = beamsplitter_output(n, p, bs);
                        assert!((out.norm_sqr() - 1.0).abs() < 1e-12, "n={n} p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn beamsplitter_rejects_out_of_range_angle() {
        assert!(BeamSplitterParams::new(-0.1, 0.0).is_err());
        assert!(BeamSplitterParams::new(1.6, 0.0).is_err());
        assert!(BeamSplitterParams::new(0.5, f64::NAN).is_err());
    }

    #[test]
    fn two_mode_state_shell() {
        let s = TwoModeState::basis(2, 1);
        assert_eq!(s.total(), 3);
        assert_eq!(s.amplitude(2, 1), Complex64::new(1.0, 0.0));
        assert_eq!(s.amplitude(2, 2), Complex64::new(0.0, 0.0));
        assert!(TwoModeState::from_amplitudes(2, vec![Complex64::new(1.0, 0.0)]).is_err());
        assert!(TwoModeState::from_amplitudes(0, vec![Complex64::new(f64::NAN, 0.0)]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn conservation_and_norm(n in 0u32..8, p in 0u32..8, omega in 0.0..FRAC_PI_2, lambda in 0.0..TAU) {
                let out = beamsplitter_output(n, p, BeamSplitterParams::new(omega, lambda).unwrap());
                prop_assert_eq!(out.total(), n + p);
                prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
                for (j, k, _) in out.iter() {
                    prop_assert_eq!(j + k, n + p);
                }
            }

            #[test]
            fn overlap_magnitude_ignores_phase(n in 0u32..30, x in -8.0f64..8.0, theta in -10.0f64..10.0) {
                let a = quadrature_overlap(n, QuadratureValue::new(x, theta)).norm();
                let b = quadrature_overlap(n, QuadratureValue::in_phase(x)).norm();
                prop_assert!((a - b).abs() <= 1e-14 * b.max(1e-300));
            }
        }
    }
}
