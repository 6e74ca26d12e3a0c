//! Self-contained special-function kernels.
//!
//! Everything downstream (free radial solutions, Landau profiles, residual
//! checks) is assembled from four primitives:
//!
//! - [`gamma_fn`]: Lanczos approximation with reflection, 12+ significant
//!   digits away from the poles;
//! - [`bessel_j`]: Bessel function of the first kind for real order, built
//!   from a double-double ascending series plus a stable downward recurrence
//!   for large arguments, targeting 1e-10 relative accuracy on
//!   `x <= 50`, `|nu| <= 20`;
//! - [`kummer_m`]: confluent hypergeometric `M(a, b; z)` with an exact
//!   polynomial branch when `a` is a non-positive integer;
//! - [`laguerre`]: generalized Laguerre polynomials by three-term recurrence.
//!
//! The [`crate::oracle`] module carries a second, independent Bessel series
//! used to cross-check [`bessel_j`]; nothing here is shared with it.

mod bessel;
mod dd;
mod gamma;
mod kummer;

pub use bessel::bessel_j;
pub use gamma::gamma_fn;
pub use kummer::{generalized_binomial, kummer_m, laguerre};

use thiserror::Error;

/// Errors from the special-function kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    /// Gamma evaluated at a non-positive integer.
    #[error("gamma pole at non-positive integer x = {x}")]
    GammaPole { x: f64 },
    /// Bessel `J` needs a nonnegative argument.
    #[error("Bessel argument must be nonnegative, got x = {x}")]
    NegativeArgument { x: f64 },
    /// Bessel `J` of negative non-integer order diverges at the origin.
    #[error("Bessel J of order nu = {nu} diverges at x = 0")]
    SingularAtOrigin { nu: f64 },
    /// Kummer `M(a, b; z)` has poles in `b` at non-positive integers.
    #[error("Kummer M undefined at non-positive integer b = {b}")]
    KummerParameterPole { b: f64 },
    /// An input was NaN or infinite.
    #[error("non-finite input {name}")]
    NonFiniteInput { name: &'static str },
    /// A series failed to converge within the iteration budget.
    #[error("series for {what} did not converge")]
    SeriesNonConvergence { what: &'static str },
}
