//! Relativistic quantum states of a spin-1/2 particle bound to a double-cone
//! surface.
//!
//! The surface is two nappes of a cone joined at the apex, described by an
//! extended radial coordinate `l` that runs over the whole real line (the
//! nappe label is `eta = sign(l)`) and an opening parameter `alpha` in
//! `(0, 1]`, the sine of the half-angle; `alpha = 1` is the plane. The crate
//! covers
//!
//! - the surface geometry entering the Dirac operator: metric, triad, spin
//!   and spinorial connection coefficients, and the gauge data of a uniform
//!   axial magnetic field ([`geometry`]);
//! - the special-function kernels everything else is built from: gamma,
//!   Bessel `J` of real order, Kummer `M`, generalized Laguerre ([`specfun`]);
//! - free modes: Bessel-type radial solutions, the admissibility rule
//!   `nu >= -1/2`, and the discontinuous loss of the cosine branch for any
//!   nonzero angular number, a spectral scar of the apex ([`free_dynamics`]);
//! - Landau levels in the uniform field: index algebra, squared-energy
//!   spectrum with its nappe splitting, and normalized radial profiles
//!   ([`landau`]);
//! - an independent verification layer: a finite-difference Sturm-Liouville
//!   eigensolver, adaptive quadrature, and a second Bessel-series
//!   implementation that shares no code with [`specfun`] ([`oracle`]).
//!
//! Internal computations use natural units; every energy- or field-carrying
//! entry point takes a [`UnitSystem`] so other unit choices stay possible at
//! the boundaries.

pub mod free_dynamics;
pub mod geometry;
pub mod landau;
pub mod oracle;
pub mod specfun;

mod quad;

pub use free_dynamics::{Parity, RadialSolution, Sign, SpinChannel};
pub use geometry::{SurfaceGeometry, UnitSystem};
pub use landau::{FieldConfig, LandauState};
