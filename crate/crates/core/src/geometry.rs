//! Geometry of the double cone and the gauge data of a uniform axial field.
//!
//! Coordinates are `(t, l, phi)` with the extended radial coordinate `l`
//! running over the whole real line; `l > 0` and `l < 0` label the two nappes
//! and `l = 0` is the apex. With `alpha` the sine of the half-opening angle,
//! the line element is
//!
//! ```text
//! ds^2 = -c^2 dt^2 + dl^2 + alpha^2 l^2 dphi^2
//! ```
//!
//! The flat (plane) case is `alpha = 1`; any `alpha < 1` carries a conical
//! deficit concentrated at the apex. A local orthonormal triad for this
//! metric is diagonal, and the only nonvanishing spin-connection component is
//! azimuthal, which is what feeds the Dirac operator's spinorial connection.

use thiserror::Error;

/// Errors from geometric constructors and apex-sensitive evaluations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    /// Opening parameter outside `(0, 1]`.
    #[error("opening parameter alpha = {alpha} outside (0, 1]")]
    InvalidOpening { alpha: f64 },
    /// A unit constant was zero, negative, or not finite.
    #[error("unit constants must be finite and strictly positive")]
    InvalidUnits,
    /// The requested quantity is singular at the apex `l = 0`.
    #[error("quantity is singular at the apex l = 0")]
    ApexSingular,
}

/// Fundamental constants used at the boundaries of the library.
///
/// Defaults to natural units `hbar = c = e = 1`, which every internal formula
/// assumes unless a caller passes something else.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub hbar: f64,
    pub c: f64,
    pub e: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            c: 1.0,
            e: 1.0,
        }
    }
}

impl UnitSystem {
    /// Natural units, the internal default.
    pub fn natural() -> Self {
        Self::default()
    }

    /// Validating constructor; all three constants must be finite and `> 0`.
    pub fn new(hbar: f64, c: f64, e: f64) -> Result<Self, GeometryError> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(hbar) && ok(c) && ok(e) {
            Ok(Self { hbar, c, e })
        } else {
            Err(GeometryError::InvalidUnits)
        }
    }
}

/// The double-cone surface, fully determined by its opening parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceGeometry {
    alpha: f64,
}

impl SurfaceGeometry {
    /// Builds a surface with opening parameter `alpha` in `(0, 1]`.
    pub fn new(alpha: f64) -> Result<Self, GeometryError> {
        if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
            Ok(Self { alpha })
        } else {
            Err(GeometryError::InvalidOpening { alpha })
        }
    }

    /// Sine of the half-opening angle; `1` for the plane.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Nappe label of an extended radial coordinate: `+1` for `l >= 0`, `-1`
/// below. The apex itself is assigned to the upper nappe by convention.
pub fn nappe_sign(l: f64) -> f64 {
    if l < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Diagonal metric components `(g_tt, g_ll, g_phiphi)` at radial coordinate
/// `l`: `(-c^2, 1, alpha^2 l^2)`. Even in `l`, degenerate only at the apex.
pub fn metric_components(geom: &SurfaceGeometry, l: f64, units: &UnitSystem) -> [f64; 3] {
    let a_l = geom.alpha * l;
    [-(units.c * units.c), 1.0, a_l * a_l]
}

/// Inverse triad `e^mu_a` as a diagonal 3x3 matrix: `diag(1, 1, 1/(alpha l))`.
///
/// The azimuthal leg is signed, so it flips with the nappe. Fails at the apex
/// where the frame degenerates.
pub fn inverse_triad(geom: &SurfaceGeometry, l: f64) -> Result<[[f64; 3]; 3], GeometryError> {
    if l == 0.0 {
        return Err(GeometryError::ApexSingular);
    }
    let mut e = [[0.0; 3]; 3];
    e[0][0] = 1.0;
    e[1][1] = 1.0;
    e[2][2] = 1.0 / (geom.alpha * l);
    Ok(e)
}

/// Rebuilds the metric from the inverse triad and returns the worst deviation
/// from [`metric_components`].
///
/// Each diagonal entry is compared as `|delta| / max(1, |g|)`, relative with
/// an absolute floor, so the result stays meaningful at large `|l|` where
/// `g_phiphi` grows like `l^2`. Exact reconstruction gives zero up to a few
/// ulp.
pub fn verify_metric_reconstruction(
    geom: &SurfaceGeometry,
    l: f64,
    units: &UnitSystem,
) -> Result<f64, GeometryError> {
    let inv = inverse_triad(geom, l)?;
    // Direct triad by inverting each diagonal leg; frame indices carry the
    // local Minkowski metric diag(-c^2, 1, 1).
    let frame = [-(units.c * units.c), 1.0, 1.0];
    let g = metric_components(geom, l, units);
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        let direct = 1.0 / inv[i][i];
        let rebuilt = frame[i] * direct * direct;
        let dev = (rebuilt - g[i]).abs() / f64::max(1.0, g[i].abs());
        worst = worst.max(dev);
    }
    Ok(worst)
}

/// The nonvanishing spin-connection component `omega_phi^{2}{}_{1} = alpha`.
///
/// Its antisymmetric partner is [`spin_connection_antisymmetric`]. Both are
/// constant over the surface; the whole curvature sits at the apex.
pub fn spin_connection_coefficient(geom: &SurfaceGeometry) -> f64 {
    geom.alpha
}

/// `omega_phi^{1}{}_{2} = -alpha`, the partner of
/// [`spin_connection_coefficient`].
pub fn spin_connection_antisymmetric(geom: &SurfaceGeometry) -> f64 {
    -geom.alpha
}

/// Scalar coefficient of the azimuthal spinorial connection: the connection
/// is this value times `i Sigma^3`, and the value is `-alpha/2`.
pub fn spinorial_connection_coefficient(geom: &SurfaceGeometry) -> f64 {
    -0.5 * geom.alpha
}

/// Physical (orthonormal-frame) azimuthal component of the vector potential
/// of a uniform axial field `B0`: `A_phi = B0 alpha |l| / 2`. Even in `l`.
pub fn vector_potential(geom: &SurfaceGeometry, b0: f64, l: f64) -> f64 {
    0.5 * b0 * geom.alpha * l.abs()
}

/// Magnetic flux through the loop of constant `|l|`: `pi B0 alpha^2 l^2`,
/// i.e. the uniform field times the area of the loop's projection, a disc of
/// radius `alpha |l|`.
pub fn flux_through_loop(geom: &SurfaceGeometry, b0: f64, l: f64) -> f64 {
    std::f64::consts::PI * b0 * (geom.alpha * l) * (geom.alpha * l)
}
