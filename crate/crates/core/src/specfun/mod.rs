//! Special functions consumed by the radial and angular kernels.

mod bessel;
mod gamma;
mod kummer;
mod orthopoly;

pub use bessel::{bessel_i, bessel_i_log, bessel_k, bessel_k_scaled, RealOrder};
pub use gamma::{is_nonpositive_integer, ln_gamma, recip_gamma, sin_pi, LnGamma};
pub use kummer::{kummer_m, kummer_u, whittaker_m, whittaker_w};
pub use orthopoly::{assoc_legendre, jacobi_p};

pub(crate) use bessel::ln_i_scaled_from_ln_x;
pub(crate) use gamma::ln_gamma_pos;
pub(crate) use kummer::{ln_whittaker_m, ln_whittaker_w};
pub(crate) use orthopoly::jacobi_unchecked;
