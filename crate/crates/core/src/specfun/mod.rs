//! Special functions: Airy functions of complex argument, integer-order
//! Bessel/Hankel functions, `ζ̃`, and large-order uniform asymptotics.

pub mod airy;
pub mod bessel;
pub mod scaled;
pub mod uniform;
pub mod zeta;

pub use airy::{airy_ai, airy_all, phi_plus, wronskian_a_aplus, AiryBundle};
pub use bessel::{bessel_j, bessel_y, cyl_seq, hankel_h1, hankel_h1_signed, mod_seq, CylSeq, ModSeq};
pub use scaled::{Scaled, ScaledC};
pub use uniform::{bessel_uniform, hankel_uniform, AsymptoticValue, Regime};
pub use zeta::{zeta_tilde, zeta_tilde_deriv};
