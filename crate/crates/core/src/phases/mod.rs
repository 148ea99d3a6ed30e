//! Geometry of the exterior of the unit cylinder and the closed-form phase
//! objects built on it: distances, the apparent contour seen from the
//! source, the glancing critical values `Γ₀`, `Γ̃`, residuals of the
//! Melrose–Taylor eikonal system, the two-variable boundary phase with its
//! Hessian, and the Littlewood–Paley cutoff system.

mod boundary;
mod cutoffs;
mod glancing;

pub use boundary::{
    boundary_phase, boundary_phase_grad, boundary_phase_hessian, boundary_phase_hessian_fd,
    find_critical_points, z_critical, CriticalPoint, HessianReport, SignRegime,
};
pub use cutoffs::{j_split, make_cutoffs, CutoffSystem, Smoothness, PSI0_ONE, PSI0_TOP, PSI0_ZERO};
pub use glancing::{
    critical_points_ypm, critical_values_ypm, eikonal_residual, gamma0, gamma_tilde, phi_xy,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// A point of the closed exterior domain in cylindrical coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylPoint {
    pub r: f64,
    pub theta: f64,
    pub z: f64,
}

impl CylPoint {
    /// Validates `r ≥ 1` and reduces `θ` to `[0, 2π)`.
    pub fn new(r: f64, theta: f64, z: f64) -> Result<Self> {
        if !(r >= 1.0) || !r.is_finite() || !theta.is_finite() || !z.is_finite() {
            return Err(Error::Domain(format!(
                "exterior point needs finite r >= 1, got ({r}, {theta}, {z})"
            )));
        }
        Ok(Self { r, theta: theta.rem_euclid(std::f64::consts::TAU), z })
    }

    /// Normal distance to the boundary, `x = r − 1`.
    pub fn x(&self) -> f64 {
        self.r - 1.0
    }

    /// Angle measured from the glancing direction, `y = π/2 − θ`.
    pub fn y(&self) -> f64 {
        FRAC_PI_2 - self.theta
    }

    /// Cartesian coordinates.
    pub fn cartesian(&self) -> [f64; 3] {
        [self.r * self.theta.cos(), self.r * self.theta.sin(), self.z]
    }
}

/// The point source at `(s, 0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceConfig {
    pub s: f64,
}

impl SourceConfig {
    pub fn new(s: f64) -> Result<Self> {
        if !(s >= 1.0) || !s.is_finite() {
            return Err(Error::Domain(format!("source radius must be >= 1, got {s}")));
        }
        Ok(Self { s })
    }
}

/// `φ̃(r, θ, z, s) = √(r² − 2sr cosθ + s² + z²)`, the distance from
/// `(r, θ, z)` to `(s, 0, 0)`.
pub fn phi_tilde(r: f64, theta: f64, z: f64, s: f64) -> f64 {
    // (r − s)² + 2rs(1 − cosθ) avoids cancellation near coincidence.
    let d = r - s;
    let half = (0.5 * theta).sin();
    (d * d + 4.0 * r * s * half * half + z * z).sqrt()
}

/// Euclidean distance between `Q` and the source.
pub fn dist_cyl(q: &CylPoint, q0: &SourceConfig) -> f64 {
    phi_tilde(q.r, q.theta, q.z, q0.s)
}

/// Apparent contour of the cylinder seen from the source:
/// `(θ*, y*) = (arccos(1/s), arcsin(1/s))`.
pub fn apparent_contour(s: f64) -> Result<(f64, f64)> {
    if !s.is_finite() || s < 1.0 {
        return Err(Error::Domain(format!("apparent contour needs s > 1, got {s}")));
    }
    if s == 1.0 {
        return Err(Error::Degenerate(
            "source on the boundary: the contour collapses to its generator".into(),
        ));
    }
    let y_star = (1.0 / s).asin();
    Ok((FRAC_PI_2 - y_star, y_star))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

    #[test]
    fn distance_examples() {
        let q0 = SourceConfig::new(2.0).unwrap();
        assert_eq!(dist_cyl(&CylPoint::new(2.0, 0.0, 0.0).unwrap(), &q0), 0.0);
        assert!((dist_cyl(&CylPoint::new(2.0, PI, 0.0).unwrap(), &q0) - 4.0).abs() < 1e-15);
        let q0 = SourceConfig::new(1.0).unwrap();
        let d = dist_cyl(&CylPoint::new(1.0, FRAC_PI_2, 0.0).unwrap(), &q0);
        assert!((d - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn contour() {
        let (t, _) = apparent_contour(SQRT_2).unwrap();
        assert!((t - FRAC_PI_4).abs() < 1e-15);
        for s in [1.1, 2.0, 10.0] {
            let (t, y) = apparent_contour(s).unwrap();
            assert!((t + y - FRAC_PI_2).abs() < 1e-14);
        }
        assert!((apparent_contour(1e12).unwrap().0 - FRAC_PI_2).abs() < 1e-11);
        assert!(matches!(apparent_contour(1.0), Err(Error::Degenerate(_))));
        assert!(CylPoint::new(0.5, 0.0, 0.0).is_err());
    }
}
