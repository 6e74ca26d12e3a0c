//! Landau levels on the double cone under a uniform axial magnetic field.
//!
//! Minimal coupling turns the radial problem into a confluent
//! hypergeometric equation. Truncating the series at degree `n` gives the
//! closed-form spectrum; the two nappes (labeled by `eta`) see different
//! energies at the same quantum numbers, and the splitting is an exact
//! algebraic identity. Profiles are Gaussian-damped Kummer polynomials,
//! normalized per nappe against the surface measure.

use crate::free_dynamics::{Sign, SpinChannel};
use crate::geometry::{SurfaceGeometry, UnitSystem};
use crate::specfun::kummer_m;
use thiserror::Error;

/// Residual bound the analytic profiles meet in [`ode_residual`].
pub const ODE_RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LandauError {
    #[error("discrete levels require a positive field strength")]
    ZeroField,
    #[error("invalid field configuration: {reason}")]
    InvalidField { reason: &'static str },
    #[error("field grid must be finite, positive, and strictly ascending")]
    InvalidFieldGrid,
    #[error("profile normalization quadrature failed to converge")]
    NormalizationFailure,
}

/// External field strength and particle mass. Zero field is representable
/// (the free limit) but rejected by every operation that needs discrete
/// levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    b0: f64,
    mass: f64,
}

impl FieldConfig {
    pub fn new(b0: f64, mass: f64) -> Result<Self, LandauError> {
        if !b0.is_finite() || b0 < 0.0 {
            return Err(LandauError::InvalidField {
                reason: "field strength must be finite and non-negative",
            });
        }
        if !mass.is_finite() || mass < 0.0 {
            return Err(LandauError::InvalidField {
                reason: "mass must be finite and non-negative",
            });
        }
        Ok(FieldConfig { b0, mass })
    }

    pub fn b0(&self) -> f64 {
        self.b0
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
}

/// One Landau state: radial index, angular number, spin labels, and nappe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LandauState {
    pub n: u32,
    pub j: i32,
    pub channel: SpinChannel,
    pub eta: Sign,
}

/// Effective angular index `M = j/alpha - lambda s / 2` for the component
/// selected by `channel.lambda`.
pub fn m_index(j: f64, geom: &SurfaceGeometry, channel: SpinChannel) -> f64 {
    j / geom.alpha() - 0.5 * channel.lambda.value() * channel.s.value()
}

/// Cyclotron scale `omega = e B0 alpha / (2 hbar c)`; the dimensionless
/// radial variable is `zeta = omega l^2`.
pub fn cyclotron_scale(
    field: &FieldConfig,
    geom: &SurfaceGeometry,
    units: &UnitSystem,
) -> Result<f64, LandauError> {
    if field.b0 == 0.0 {
        return Err(LandauError::ZeroField);
    }
    Ok(units.e * field.b0 * geom.alpha() / (2.0 * units.hbar * units.c))
}

/// Radial eigenvalue combination
/// `K = (E^2 - m^2 c^4)/(hbar c)^2 + (e B0 eta / 2 hbar c)(j + lambda s alpha)`.
///
/// Well-defined for any field, including the free limit `B0 = 0`.
pub fn k_lambda(
    energy: f64,
    j: f64,
    channel: SpinChannel,
    eta: Sign,
    geom: &SurfaceGeometry,
    field: &FieldConfig,
    units: &UnitSystem,
) -> f64 {
    let hc = units.hbar * units.c;
    let rest = field.mass * units.c * units.c;
    let free_part = (energy * energy - rest * rest) / (hc * hc);
    let coupling = j + channel.lambda.value() * channel.s.value() * geom.alpha();
    free_part + units.e * field.b0 * eta.value() / (2.0 * units.hbar * units.c) * coupling
}

/// Closed-form squared spectrum
/// `E^2 = 2 e B0 hbar c alpha { n + 1/2 + |M|/2 - (eta/4 alpha)(j + lambda s alpha) } + m^2 c^4`.
pub fn energy_squared(
    state: &LandauState,
    geom: &SurfaceGeometry,
    field: &FieldConfig,
    units: &UnitSystem,
) -> f64 {
    let alpha = geom.alpha();
    let j = state.j as f64;
    let m_abs = m_index(j, geom, state.channel).abs();
    let coupling = j + state.channel.lambda.value() * state.channel.s.value() * alpha;
    let brace = state.n as f64 + 0.5 + 0.5 * m_abs - state.eta.value() / (4.0 * alpha) * coupling;
    let rest = field.mass * units.c * units.c;
    2.0 * units.e * field.b0 * units.hbar * units.c * alpha * brace + rest * rest
}

/// Signed energy `branch * sqrt(E^2)`; both particle and antiparticle
/// branches are physical.
pub fn landau_level(
    state: &LandauState,
    geom: &SurfaceGeometry,
    field: &FieldConfig,
    units: &UnitSystem,
    branch: Sign,
) -> f64 {
    branch.value() * energy_squared(state, geom, field, units).sqrt()
}

/// Exact spectral asymmetry between the nappes at fixed quantum numbers:
/// `E^2(eta=-1) - E^2(eta=+1) = e B0 hbar c (j + lambda s alpha)`.
pub fn nappe_splitting(
    state: &LandauState,
    geom: &SurfaceGeometry,
    field: &FieldConfig,
    units: &UnitSystem,
) -> f64 {
    let coupling =
        state.j as f64 + state.channel.lambda.value() * state.channel.s.value() * geom.alpha();
    units.e * field.b0 * units.hbar * units.c * coupling
}

/// Radial amplitude `norm * e^{-zeta/2} zeta^{|M|/2} M(-n, |M|+1; zeta)`
/// with `zeta = omega l^2`. The Kummer factor is an exact polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct LandauProfile {
    m_abs: f64,
    omega: f64,
    n: u32,
    norm: f64,
}

impl LandauProfile {
    pub fn m_abs(&self) -> f64 {
        self.m_abs
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Radius beyond which the profile is Gaussian-negligible; used as the
    /// normalization and sampling cutoff.
    pub fn support_cutoff(&self) -> f64 {
        8.0 * ((2.0 * self.n as f64 + self.m_abs + 1.0) / (2.0 * self.omega)).sqrt()
    }

    /// Amplitude at signed `l`; the profile is even in `l` by construction.
    pub fn eval(&self, l: f64) -> f64 {
        let zeta = self.omega * l * l;
        let f = self.kummer_factor(self.n as i64, self.m_abs + 1.0, zeta);
        self.norm * (-0.5 * zeta).exp() * zeta.powf(0.5 * self.m_abs) * f
    }

    /// First radial derivative, `l != 0`.
    pub fn deriv(&self, l: f64) -> f64 {
        let zeta = self.omega * l * l;
        let (_, g1, _) = self.zeta_derivatives(zeta);
        2.0 * self.omega * l * g1
    }

    /// Second radial derivative, `l != 0`.
    pub fn deriv2(&self, l: f64) -> f64 {
        let zeta = self.omega * l * l;
        let (_, g1, g2) = self.zeta_derivatives(zeta);
        let dz = 2.0 * self.omega * l;
        2.0 * self.omega * g1 + dz * dz * g2
    }

    fn kummer_factor(&self, n: i64, b: f64, zeta: f64) -> f64 {
        kummer_m(-(n as f64), b, zeta).expect("polynomial Kummer branch cannot fail")
    }

    /// Profile and its first two derivatives in `zeta`, via the contiguous
    /// derivative of the Kummer series. Coefficients that vanish (low `n`)
    /// short-circuit so no exploding generic series is ever summed.
    fn zeta_derivatives(&self, zeta: f64) -> (f64, f64, f64) {
        let a = -(self.n as f64);
        let b = self.m_abs + 1.0;
        let p = 0.5 * self.m_abs;
        let f = self.kummer_factor(self.n as i64, b, zeta);
        let f1 = if a == 0.0 {
            0.0
        } else {
            a / b * kummer_m(a + 1.0, b + 1.0, zeta).expect("shifted Kummer in range")
        };
        let f2 = if a == 0.0 || a + 1.0 == 0.0 {
            0.0
        } else {
            a * (a + 1.0) / (b * (b + 1.0))
                * kummer_m(a + 2.0, b + 2.0, zeta).expect("shifted Kummer in range")
        };
        let envelope = (-0.5 * zeta).exp() * zeta.powf(p);
        let h = -0.5 * f + p * f / zeta + f1;
        let h1 = -0.5 * f1 + p * (f1 / zeta - f / (zeta * zeta)) + f2;
        let g = self.norm * envelope * f;
        let g1 = self.norm * envelope * h;
        let g2 = self.norm * envelope * (-0.5 * h + p / zeta * h + h1);
        (g, g1, g2)
    }

    /// Returns the profile rescaled so that the per-nappe surface integral
    /// `2 pi alpha * int |psi|^2 l dl` over the support equals one.
    pub fn normalized(mut self, geom: &SurfaceGeometry) -> Result<Self, LandauError> {
        let cutoff = self.support_cutoff();
        let raw = crate::quad::adaptive_simpson(
            &|l| {
                let p = self.eval(l);
                p * p * l
            },
            0.0,
            cutoff,
            1e-10,
        )
        .map_err(|_| LandauError::NormalizationFailure)?;
        let total = 2.0 * std::f64::consts::PI * geom.alpha() * raw;
        if !(total.is_finite() && total > 0.0) {
            return Err(LandauError::NormalizationFailure);
        }
        self.norm /= total.sqrt();
        Ok(self)
    }
}

/// Unnormalized radial profile for a state; fill the normalization slot with
/// [`LandauProfile::normalized`].
pub fn radial_profile(
    state: &LandauState,
    geom: &SurfaceGeometry,
    field: &FieldConfig,
    units: &UnitSystem,
) -> Result<LandauProfile, LandauError> {
    let omega = cyclotron_scale(field, geom, units)?;
    let m_abs = m_index(state.j as f64, geom, state.channel).abs();
    Ok(LandauProfile {
        m_abs,
        omega,
        n: state.n,
        norm: 1.0,
    })
}

/// Max relative residual of the uncoupled second-order radial equation
/// `psi'' + psi'/l - M^2 psi / l^2 + K psi - omega^2 l^2 psi = 0`
/// over the samples, with `M` and `omega` taken from the profile and the
/// eigenvalue `K` passed explicitly. Samples must exclude zero.
pub fn ode_residual(profile: &LandauProfile, k_value: f64, l_samples: &[f64]) -> f64 {
    let m2 = profile.m_abs * profile.m_abs;
    let w2 = profile.omega * profile.omega;
    let mut worst = 0.0f64;
    for &l in l_samples {
        assert!(
            l != 0.0 && l.is_finite(),
            "samples must be finite and nonzero"
        );
        let psi = profile.eval(l);
        let t_dd = profile.deriv2(l);
        let t_d = profile.deriv(l) / l;
        let t_m = m2 * psi / (l * l);
        let t_k = k_value * psi;
        let t_w = w2 * l * l * psi;
        let r = t_dd + t_d - t_m + t_k - t_w;
        let scale = t_dd.abs() + t_d.abs() + t_m.abs() + t_k.abs() + t_w.abs() + 1e-300;
        worst = worst.max(r.abs() / scale);
    }
    worst
}

/// One output row of the field-sweep table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSweepRow {
    pub alpha: f64,
    pub n: u32,
    pub j: i32,
    pub b: f64,
    pub energy: f64,
}

/// Positive-branch energies over a field sweep, for each opening fraction
/// and each `(n, j)` state. Rows are ordered (alpha, state, B) exactly as
/// given; the field grid must be positive and strictly ascending.
pub fn figure3_data(
    alphas: &[f64],
    states: &[(u32, i32)],
    channel: SpinChannel,
    eta: Sign,
    b_grid: &[f64],
    mass: f64,
    units: &UnitSystem,
) -> Result<Vec<FieldSweepRow>, LandauError> {
    if b_grid.is_empty()
        || b_grid.iter().any(|b| !b.is_finite() || *b <= 0.0)
        || b_grid.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(LandauError::InvalidFieldGrid);
    }
    let mut rows = Vec::with_capacity(alphas.len() * states.len() * b_grid.len());
    for &alpha in alphas {
        let geom = SurfaceGeometry::new(alpha).map_err(|_| LandauError::InvalidField {
            reason: "opening fraction outside (0, 1]",
        })?;
        for &(n, j) in states {
            for &b in b_grid {
                let field = FieldConfig::new(b, mass)?;
                let state = LandauState { n, j, channel, eta };
                let energy = landau_level(&state, &geom, &field, units, Sign::Plus);
                rows.push(FieldSweepRow {
                    alpha,
                    n,
                    j,
                    b,
                    energy,
                });
            }
        }
    }
    Ok(rows)
}
