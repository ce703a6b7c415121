//! Relativistic Aharonov–Bohm–Coulomb Green's function.
//!
//! The energy-domain Green's function of a relativistic spinless particle in
//! a Coulomb potential threaded by an infinitely thin magnetic flux tube is
//! computed channel by channel. Each radial channel is available through
//! several independent routes: the proper-time integral, the z-representation,
//! the summed perturbation series, the resummed z-integral and the closed
//! Whittaker form. The angular weights, the full partial-wave assembly and
//! the bound-state spectrum (poles of the Gamma prefactor) sit on top.
//!
//! Natural units `ħ = c = m = 1` are used throughout: energies are in units
//! of the rest energy and lengths in Compton wavelengths.

pub mod angular;
pub mod error;
pub mod greens;
pub mod quad;
pub mod radial;
pub mod specfun;
pub mod verify;

pub use angular::SpacePoint;
pub use error::{Error, Result};
pub use greens::{BoundState, ComplexEval, TruncationSpec};
pub use quad::{EvalResult, QuadSpec, Transform};
pub use radial::{ChannelIndex, PhysicalParams};
pub use specfun::RealOrder;
