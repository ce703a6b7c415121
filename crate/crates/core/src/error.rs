use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Gamma function evaluated at a non-positive integer.
    #[error("gamma function has a pole at x = {0}")]
    GammaPole(f64),

    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("associated Legendre index |k| = {k} exceeds degree l = {l}")]
    LegendreIndex { l: u32, k: i32 },

    #[error("integrand returned a non-finite value at x = {x}")]
    NonFiniteIntegrand { x: f64 },

    /// The Gamma prefactor argument `(1+λ)/2 - ν` is at, near, or past a
    /// non-positive integer `-n_r` for channel `(q, k)`.
    #[error(
        "channel (q={q}, k={k}) meets bound-state pole n_r={n_r} (Gamma argument {gamma_arg})"
    )]
    Pole {
        q: u32,
        k: i64,
        n_r: u32,
        gamma_arg: f64,
    },

    #[error("{what} did not converge (estimate {value}, error {err_estimate})")]
    NotConverged {
        what: &'static str,
        value: f64,
        err_estimate: f64,
    },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }
}
