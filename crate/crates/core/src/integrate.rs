//! Integration of homodyne outcome densities over the acceptance disk
//! `x^2 + y^2 <= delta^2`.
//!
//! The fast path evaluates one ray and multiplies by `2 pi`, which is only
//! valid for rotationally symmetric densities. [`rotational_asymmetry`] probes
//! that property; callers fall back to [`polar_disk_integral`] otherwise.

use std::f64::consts::{PI, TAU};
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

/// A set of outcome densities evaluated together, one per ensemble component.
pub trait ComponentDensity {
    /// Number of components.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Writes the density of every component at `(x, y)` into `out`.
    fn eval(&self, x: f64, y: f64, out: &mut [f64]);
}

/// Radii at which the angular symmetry probe runs.
pub const SYMMETRY_RADII: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
/// Equally spaced probe angles per radius.
pub const SYMMETRY_ANGLES: usize = 32;
/// Largest relative angular spread accepted for the radial path.
pub const SYMMETRY_TOLERANCE: f64 = 1e-8;
/// Relative change between successive quadrature orders accepted as converged.
pub const QUADRATURE_TOLERANCE: f64 = 1e-9;
/// Starting Gauss-Legendre order of the radial rule.
pub const BASE_ORDER: usize = 64;

const MAX_RADIAL_ORDER: usize = 4096;
const MAX_POLAR_ORDER: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrationPath {
    /// One ray times `2 pi`, after the symmetry probe passed.
    Radial,
    /// Full 2-D polar product rule.
    Polar,
}

/// Per-component integrals of the densities over the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskIntegral {
    pub per_component: Vec<f64>,
    pub path: IntegrationPath,
    /// Radial order of the accepted estimate.
    pub order: usize,
    pub converged: bool,
}

impl DiskIntegral {
    pub fn total(&self) -> f64 {
        self.per_component.iter().sum()
    }
}

fn legendre_rule(order: usize) -> &'static GaussLegendre {
    const CACHED: usize = 8;
    static RULES: [OnceLock<GaussLegendre>; CACHED] = [const { OnceLock::new() }; CACHED];
    let slot = (order / BASE_ORDER).trailing_zeros() as usize;
    assert!(
        order.is_multiple_of(BASE_ORDER) && order.is_power_of_two() && slot < CACHED,
        "unsupported quadrature order {order}"
    );
    RULES[slot].get_or_init(|| GaussLegendre::new(NonZeroUsize::new(order).unwrap()))
}

/// Largest angular spread of the summed density at any probe radius,
/// relative to the largest density seen on the whole probe grid. Scaling by
/// the global peak keeps nodal rings, where the density is zero on every
/// angle, from reading as asymmetric.
pub fn rotational_asymmetry<D: ComponentDensity + ?Sized>(density: &D) -> f64 {
    let mut buf = vec![0.0; density.len()];
    let mut spread = 0.0f64;
    let mut peak = 0.0f64;
    for &r in &SYMMETRY_RADII {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for a in 0..SYMMETRY_ANGLES {
            let angle = TAU * a as f64 / SYMMETRY_ANGLES as f64;
            let (s, c) = angle.sin_cos();
            density.eval(r * c, r * s, &mut buf);
            let total: f64 = buf.iter().sum();
            lo = lo.min(total);
            hi = hi.max(total);
        }
        spread = spread.max(hi - lo);
        peak = peak.max(hi);
    }
    if peak > 1e-300 {
        spread / peak
    } else {
        0.0
    }
}

/// Ray integral `2 pi int_0^delta f(r, 0) r dr` at a fixed Gauss-Legendre order.
pub fn radial_at_order<D: ComponentDensity + ?Sized>(density: &D, delta: f64, order: usize) -> Vec<f64> {
    let mut acc = vec![0.0; density.len()];
    if delta == 0.0 {
        return acc;
    }
    let mut buf = vec![0.0; density.len()];
    let half = 0.5 * delta;
    let mut visit = |node: f64, weight: f64| {
        let r = half * (node + 1.0);
        density.eval(r, 0.0, &mut buf);
        let scale = TAU * half * weight * r;
        for (a, v) in acc.iter_mut().zip(&buf) {
            *a += scale * v;
        }
    };
    if order.is_power_of_two() && order.is_multiple_of(BASE_ORDER) && order <= MAX_RADIAL_ORDER * 2 {
        for &(node, weight) in legendre_rule(order).as_node_weight_pairs() {
            visit(node, weight);
        }
    } else {
        let rule = GaussLegendre::new(NonZeroUsize::new(order.max(1)).unwrap());
        for &(node, weight) in rule.as_node_weight_pairs() {
            visit(node, weight);
        }
    }
    acc
}

fn relative_change(prev: f64, next: f64) -> f64 {
    let diff = (next - prev).abs();
    if diff == 0.0 {
        0.0
    } else {
        diff / next.abs()
    }
}

/// Radial rule starting at [`BASE_ORDER`], doubled until the total changes by
/// less than [`QUADRATURE_TOLERANCE`] relative.
pub fn radial_disk_integral<D: ComponentDensity + ?Sized>(density: &D, delta: f64) -> DiskIntegral {
    let mut order = BASE_ORDER;
    let mut prev = radial_at_order(density, delta, order);
    loop {
        let next_order = order * 2;
        let next = radial_at_order(density, delta, next_order);
        let change = relative_change(prev.iter().sum(), next.iter().sum());
        let converged = change < QUADRATURE_TOLERANCE;
        if converged || next_order >= MAX_RADIAL_ORDER {
            if !converged {
                log::warn!("radial quadrature did not converge at delta={delta} (change {change:e})");
            }
            return DiskIntegral {
                per_component: next,
                path: IntegrationPath::Radial,
                order: next_order,
                converged,
            };
        }
        prev = next;
        order = next_order;
    }
}

fn polar_at_order<D: ComponentDensity + ?Sized>(density: &D, delta: f64, order: usize) -> Vec<f64> {
    let mut acc = vec![0.0; density.len()];
    if delta == 0.0 {
        return acc;
    }
    let mut buf = vec![0.0; density.len()];
    let half = 0.5 * delta;
    let angles: Vec<(f64, f64)> = (0..order)
        .map(|a| (TAU * a as f64 / order as f64).sin_cos())
        .collect();
    let angular_weight = TAU / order as f64;
    for &(node, weight) in legendre_rule(order).as_node_weight_pairs() {
        let r = half * (node + 1.0);
        let scale = half * weight * r * angular_weight;
        for &(s, c) in &angles {
            density.eval(r * c, r * s, &mut buf);
            for (a, v) in acc.iter_mut().zip(&buf) {
                *a += scale * v;
            }
        }
    }
    acc
}

/// Gauss-Legendre in `r` times the periodic trapezoid rule in angle, both
/// doubled together until converged.
pub fn polar_disk_integral<D: ComponentDensity + ?Sized>(density: &D, delta: f64) -> DiskIntegral {
    let mut order = BASE_ORDER;
    let mut prev = polar_at_order(density, delta, order);
    loop {
        let next_order = order * 2;
        let next = polar_at_order(density, delta, next_order);
        let change = relative_change(prev.iter().sum(), next.iter().sum());
        let converged = change < QUADRATURE_TOLERANCE;
        if converged || next_order >= MAX_POLAR_ORDER {
            if !converged {
                log::warn!("polar quadrature did not converge at delta={delta} (change {change:e})");
            }
            return DiskIntegral {
                per_component: next,
                path: IntegrationPath::Polar,
                order: next_order,
                converged,
            };
        }
        prev = next;
        order = next_order;
    }
}

/// Chooses the radial path when the symmetry probe passes, the polar rule
/// otherwise.
pub fn disk_integral<D: ComponentDensity + ?Sized>(density: &D, delta: f64, symmetric: bool) -> DiskIntegral {
    if symmetric {
        radial_disk_integral(density, delta)
    } else {
        polar_disk_integral(density, delta)
    }
}

/// Tensor-product Gauss-Legendre integral over `[-half_width, half_width]^2`.
pub fn square_integral<D: ComponentDensity + ?Sized>(density: &D, half_width: f64, order: usize) -> Vec<f64> {
    let rule = GaussLegendre::new(NonZeroUsize::new(order.max(1)).unwrap());
    let pairs = rule.as_node_weight_pairs();
    let mut acc = vec![0.0; density.len()];
    let mut buf = vec![0.0; density.len()];
    for &(nx, wx) in pairs {
        for &(ny, wy) in pairs {
            density.eval(half_width * nx, half_width * ny, &mut buf);
            let scale = half_width * half_width * wx * wy;
            for (a, v) in acc.iter_mut().zip(&buf) {
                *a += scale * v;
            }
        }
    }
    acc
}

/// Area of the disk, handy for sanity checks.
pub fn disk_area(delta: f64) -> f64 {
    PI * delta * delta
}
