//! Smooth cutoffs: the dyadic (Littlewood–Paley) partition in the variable
//! `β = 1 − γ²`, the time-frequency bump `χ`, and the glancing window `χ_ε`.

use serde::{Deserialize, Serialize};

/// Regularity of the step profile from which every cutoff is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothness {
    /// Degree-9 polynomial smoothstep, `C⁴` at both ends.
    #[default]
    C4,
    /// `e^{−1/t}/(e^{−1/t} + e^{−1/(1−t)})`, `C^∞`.
    CInf,
}

impl Smoothness {
    /// Monotone step: 0 for `t ≤ 0`, 1 for `t ≥ 1`.
    pub fn step(self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        match self {
            Smoothness::C4 => {
                // 126t⁵ − 420t⁶ + 540t⁷ − 315t⁸ + 70t⁹. The expansion cancels
                // badly near t = 1, so use the symmetry s(t) = 1 − s(1 − t)
                // on the upper half; this also keeps the result in [0, 1].
                let s = |t: f64| t.powi(5) * (126.0 + t * (-420.0 + t * (540.0 + t * (-315.0 + t * 70.0))));
                if t <= 0.5 {
                    s(t)
                } else {
                    1.0 - s(1.0 - t)
                }
            }
            Smoothness::CInf => {
                let a = (-1.0 / t).exp();
                let b = (-1.0 / (1.0 - t)).exp();
                a / (a + b)
            }
        }
    }
}

/// Lower edge of `ψ₀`: zero below this.
pub const PSI0_ZERO: f64 = 1.0 / 64.0;
/// `ψ₀ = 1` from here up to [`PSI0_TOP`].
pub const PSI0_ONE: f64 = 1.0 / 36.0;
/// `ψ₀ = 1` up to here, then decays to zero at 2.
pub const PSI0_TOP: f64 = 1.5;

/// The cutoff system. All members are pure functions of their argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffSystem {
    pub smoothness: Smoothness,
    /// Half-width of the glancing window `χ_ε(x) = χ₀((x−1)/ε)`.
    pub eps: f64,
}

/// Builds the cutoff system with glancing half-width `eps`.
pub fn make_cutoffs(eps: f64, smoothness: Smoothness) -> crate::Result<CutoffSystem> {
    if !(eps > 0.0 && eps <= 0.1) {
        return Err(crate::Error::Domain(format!("eps must lie in (0, 0.1], got {eps}")));
    }
    Ok(CutoffSystem { smoothness, eps })
}

impl CutoffSystem {
    fn lower(&self, b: f64) -> f64 {
        self.smoothness.step((b - PSI0_ZERO) / (PSI0_ONE - PSI0_ZERO))
    }

    /// `ψ₀`: supported in `(1/64, 2)`, equal to 1 on `[1/36, 3/2]`.
    pub fn psi0(&self, b: f64) -> f64 {
        self.lower(b) * (1.0 - self.smoothness.step((b - PSI0_TOP) / (2.0 - PSI0_TOP)))
    }

    /// Dyadic piece `ψ(b) = p(b) − p(b/4)`, where `p` is the lower edge of
    /// `ψ₀`. Supported in `(1/64, 1/9)`, so that
    /// `ψ₀(β) + Σ_{j≥1} ψ(4^j β) = 1` for `0 < β ≤ 3/2` exactly (telescoping).
    pub fn psi(&self, b: f64) -> f64 {
        self.lower(b) - self.lower(0.25 * b)
    }

    /// `ψ_j(β) = ψ(4^j β)` for `j ≥ 1`, and `ψ₀(β)` for `j = 0`.
    pub fn psi_j(&self, j: u32, b: f64) -> f64 {
        if j == 0 {
            self.psi0(b)
        } else {
            self.psi(4f64.powi(j as i32) * b)
        }
    }

    /// Closed interval of `β` outside which `ψ_j(β)` vanishes.
    pub fn psi_j_support(&self, j: u32) -> (f64, f64) {
        if j == 0 {
            (PSI0_ZERO, 2.0)
        } else {
            let f = 4f64.powi(-(j as i32));
            (f * PSI0_ZERO, f * 4.0 * PSI0_ONE)
        }
    }

    /// Largest `j` with `ψ_j(β) ≠ 0` possible: beyond it every piece vanishes.
    pub fn j_max(&self, b: f64) -> u32 {
        if b <= 0.0 {
            return 0;
        }
        // ψ(4^j β) = 0 once 4^{j−1}β ≥ 1/36.
        let mut j = 0u32;
        while 4f64.powi(j as i32) * b < PSI0_ONE && j < 200 {
            j += 1;
        }
        j + 1
    }

    /// `ψ₀(β) + Σ_{j=1..J(β)} ψ_j(β)`.
    pub fn partition_sum(&self, b: f64) -> f64 {
        (0..=self.j_max(b)).map(|j| self.psi_j(j, b)).sum()
    }

    /// `χ`: supported in `[1/2, 2]`, equal to 1 on `[3/4, 3/2]`.
    pub fn chi(&self, x: f64) -> f64 {
        let st = self.smoothness;
        st.step((x - 0.5) / 0.25) * (1.0 - st.step((x - 1.5) / 0.5))
    }

    /// `χ₀`: even, supported in `(−2, 2)`, equal to 1 on `[−3/2, 3/2]`.
    pub fn chi0(&self, x: f64) -> f64 {
        1.0 - self.smoothness.step((x.abs() - 1.5) / 0.5)
    }

    /// `χ_ε(x) = χ₀((x − 1)/ε)`.
    pub fn chi_eps(&self, x: f64) -> f64 {
        self.chi0((x - 1.0) / self.eps)
    }
}

/// `j(s, h) = sup{j ≥ 0 : 2^{−3j} s/h ≥ 1}`, i.e. `⌊log₂(s/h)/3⌋` (0 if `h ≥ s`).
pub fn j_split(s: f64, h: f64) -> u32 {
    let q = s / h;
    if !(q >= 8.0) {
        return 0;
    }
    let mut j = (q.log2() / 3.0).floor().max(0.0) as i32;
    // Guard against rounding in the logarithm.
    while j > 0 && q * 2f64.powi(-3 * j) < 1.0 {
        j -= 1;
    }
    while q * 2f64.powi(-3 * (j + 1)) >= 1.0 {
        j += 1;
    }
    j as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        for sm in [Smoothness::C4, Smoothness::CInf] {
            let c = make_cutoffs(0.05, sm).unwrap();
            assert_eq!(c.psi0(0.5), 1.0);
            for j in 1..10 {
                assert_eq!(c.psi_j(j, 0.5), 0.0);
            }
            assert_eq!(c.chi(1.0), 1.0);
            assert_eq!(c.chi(0.4), 0.0);
            assert_eq!(c.chi0(1.5), 1.0);
            assert_eq!(c.chi0(2.0), 0.0);
            for k in 1..=6 {
                let b = 10f64.powi(-k);
                assert!((c.partition_sum(b) - 1.0).abs() < 1e-10);
            }
        }
        assert_eq!(j_split(std::f64::consts::SQRT_2, 1.0 / 64.0), 2);
        assert_eq!(j_split(1.0, 2.0), 0);
        assert_eq!(j_split(1.0, 1.0 / 8.0), 1);
    }
}
