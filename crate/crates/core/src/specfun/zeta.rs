//! The canonical Airy variable `ζ̃(ρ)` of the uniform large-order expansions:
//!
//! * `ρ > 1`: `(2/3)(−ζ̃)^{3/2} = √(ρ²−1) − arccos(1/ρ)`, `ζ̃ < 0`;
//! * `ρ < 1`: `(2/3)ζ̃^{3/2} = log[(1+√(1−ρ²))/ρ] − √(1−ρ²)`, `ζ̃ > 0`;
//! * `|ρ − 1| < 10⁻³`: a power series in `1 − ρ`, where the closed forms
//!   suffer cancellation.
//!
//! `ζ̃` solves `ζ̃ (ζ̃')² = 1/ρ² − 1` with `ζ̃(1) = 0`.

use crate::error::{Error, Result};

const SERIES_HALF_WIDTH: f64 = 1e-3;

/// Coefficients of `ζ̃ = 2^{1/3} Σ_k c_k (1−ρ)^k`, `k = 1..7`.
const SERIES: [f64; 7] = [
    1.0,
    0.3,
    0.182_857_142_857_142_857_14, // 32/175
    0.131_682_539_682_539_682_54, // 1037/7875
    0.102_636_487_322_201_607_92,
    0.083_878_638_187_209_615_781,
    0.070_774_259_649_144_002_885,
];

fn cbrt2() -> f64 {
    2f64.cbrt()
}

/// `ζ̃(ρ)` for `ρ > 0`.
pub fn zeta_tilde(rho: f64) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!("zeta_tilde needs rho > 0, got {rho}")));
    }
    let e = 1.0 - rho;
    if e.abs() < SERIES_HALF_WIDTH {
        let mut s = 0.0;
        for &c in SERIES.iter().rev() {
            s = s * e + c;
        }
        return Ok(cbrt2() * s * e);
    }
    if rho < 1.0 {
        let q = (1.0 - rho * rho).sqrt();
        let v = ((1.0 + q) / rho).ln() - q;
        Ok((1.5 * v).powf(2.0 / 3.0))
    } else {
        let q = (rho * rho - 1.0).sqrt();
        let v = q - (1.0 / rho).acos();
        Ok(-(1.5 * v).powf(2.0 / 3.0))
    }
}

/// `ζ̃'(ρ) = −ρ⁻¹ √((1−ρ²)/ζ̃)` (always negative).
pub fn zeta_tilde_deriv(rho: f64) -> Result<f64> {
    let e = 1.0 - rho;
    if e.abs() < SERIES_HALF_WIDTH {
        // d/dρ = −d/de
        let mut s = 0.0;
        for (k, &c) in SERIES.iter().enumerate().rev() {
            s = s * e + c * (k + 1) as f64;
        }
        return Ok(-cbrt2() * s);
    }
    let z = zeta_tilde(rho)?;
    Ok(-((1.0 - rho * rho) / z).sqrt() / rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches_join() {
        for &d in &[SERIES_HALF_WIDTH * 0.999, SERIES_HALF_WIDTH * 1.001] {
            for s in [-1.0, 1.0] {
                let rho = 1.0 + s * d;
                let z = zeta_tilde(rho).unwrap();
                let e = 1.0 - rho;
                let zs = cbrt2() * e * (1.0 + 0.3 * e + SERIES[2] * e * e);
                assert!((z - zs).abs() < 0.2 * d.powi(4), "{rho}");
            }
        }
        assert_eq!(zeta_tilde(1.0).unwrap(), 0.0);
        assert!(zeta_tilde(0.0).is_err());
    }
}
