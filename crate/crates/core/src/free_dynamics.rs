//! Free radial modes on the double cone.
//!
//! With the azimuthal ansatz fixed, each spinor component solves a Bessel
//! equation in the radial coordinate whose order depends on the angular
//! number `j`, the spin label `s`, and the opening fraction `alpha`. The
//! admissible basis changes abruptly as `j` crosses zero: at `j = 0` both
//! the sine and cosine branches survive for both components, while any
//! nonzero `j` removes one negative-order branch. This module computes
//! orders and wavenumbers, classifies admissibility, builds solution pairs
//! consistent with the first-order coupled system, and measures residuals
//! of both the first-order and second-order forms.
//!
//! Convention: the second spinor component is pure imaginary relative to the
//! first; all `psi_b` profiles here are the real amplitude with that phase
//! factored out.

use crate::geometry::{SurfaceGeometry, UnitSystem};
use crate::specfun::bessel_j;
use thiserror::Error;

/// Residual bound accepted by [`coupled_residual`] for a matched pair.
pub const COUPLED_RESIDUAL_TOLERANCE: f64 = 1e-8;

/// Two-valued sign label used for spin, channel, and nappe quantum numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

/// Spin-structure labels: `s` is the sigma-3 eigenvalue of the upper
/// component, `lambda` selects which component an index formula refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinChannel {
    pub lambda: Sign,
    pub s: Sign,
}

/// Behavior under `l -> -l`. The two nappes share the radial profile up to
/// this sign; no apex matching condition is imposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// One Bessel basis function `coeff * J_order(K l)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselBranch {
    pub order: f64,
    pub coeff: f64,
}

/// Functional form of a radial component.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialForm {
    /// `[a sin(Kl) + b cos(Kl)] / sqrt(l)`, the exact `j = 0` basis.
    SinCos { sin_coeff: f64, cos_coeff: f64 },
    /// Linear combination of Bessel functions of fixed orders.
    Bessel { branches: Vec<BesselBranch> },
}

/// A radial solution component: a wavenumber, a functional form with free
/// coefficient slots, and a parity tag for the extension to `l < 0`.
///
/// Constructors enforce that every stored Bessel order is at least `-1/2`,
/// the normalizability bound; coefficients stay freely adjustable.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    wavenumber: f64,
    form: RadialForm,
    parity: Parity,
}

/// One row of a scar scan: orders for both components and whether each
/// negative-order branch is still normalizable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScarRow {
    pub j: f64,
    pub nu_a: f64,
    pub nu_b: f64,
    pub neg_a_admissible: bool,
    pub neg_b_admissible: bool,
}

/// Which basis function seeds a coupling-matched pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchedBranch {
    /// Sine branch, `j = 0` only.
    Sin,
    /// Cosine branch, `j = 0` only.
    Cos,
    /// Positive-order Bessel branch, `j != 0`.
    Positive,
    /// Negative-order Bessel branch, `j != 0`; must itself be admissible.
    Negative,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FreeDynamicsError {
    #[error("energy {energy} lies below the rest-mass threshold {threshold}")]
    SubThreshold { energy: f64, threshold: f64 },
    #[error("kinetic energy must be non-negative, got {epsilon}")]
    NegativeKineticEnergy { epsilon: f64 },
    #[error("wavenumber must be positive and finite, got {k}")]
    NonPositiveWavenumber { k: f64 },
    #[error("zero wavenumber: the profile degenerates and the pair relations are trivial")]
    DegenerateWavenumber,
    #[error("order {order} violates the normalizability bound -1/2")]
    InadmissibleOrder { order: f64 },
    #[error("coupling forces the partner onto order {order}, which is not normalizable")]
    NonNormalizablePartner { order: f64 },
    #[error("branch {branch:?} does not apply at this angular number")]
    BranchMismatch { branch: MatchedBranch },
    #[error("coupled equations inconsistent: max relative residual {residual:e}")]
    InconsistentPair { residual: f64 },
    #[error("invalid input: {reason}")]
    InvalidInput { reason: &'static str },
}

impl RadialSolution {
    /// `j = 0` form with the two trigonometric coefficient slots.
    pub fn sin_cos(
        wavenumber: f64,
        sin_coeff: f64,
        cos_coeff: f64,
        parity: Parity,
    ) -> Result<Self, FreeDynamicsError> {
        check_wavenumber(wavenumber)?;
        if !sin_coeff.is_finite() || !cos_coeff.is_finite() {
            return Err(FreeDynamicsError::InvalidInput {
                reason: "coefficients must be finite",
            });
        }
        Ok(RadialSolution {
            wavenumber,
            form: RadialForm::SinCos {
                sin_coeff,
                cos_coeff,
            },
            parity,
        })
    }

    /// Bessel form from explicit branches; every order must be admissible.
    pub fn bessel(
        wavenumber: f64,
        branches: Vec<BesselBranch>,
        parity: Parity,
    ) -> Result<Self, FreeDynamicsError> {
        check_wavenumber(wavenumber)?;
        if branches.is_empty() {
            return Err(FreeDynamicsError::InvalidInput {
                reason: "at least one Bessel branch is required",
            });
        }
        for b in &branches {
            if !b.order.is_finite() || !b.coeff.is_finite() {
                return Err(FreeDynamicsError::InvalidInput {
                    reason: "branch entries must be finite",
                });
            }
            if !is_normalizable(b.order) {
                return Err(FreeDynamicsError::InadmissibleOrder { order: b.order });
            }
        }
        Ok(RadialSolution {
            wavenumber,
            form: RadialForm::Bessel { branches },
            parity,
        })
    }

    pub fn with_parity(mut self, parity: Parity) -> Self {
        self.parity = parity;
        self
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn form(&self) -> &RadialForm {
        &self.form
    }

    /// Orders of the stored basis; the trigonometric branches map onto
    /// orders +1/2 (sine) and -1/2 (cosine).
    pub fn orders(&self) -> Vec<f64> {
        match &self.form {
            RadialForm::SinCos { .. } => vec![0.5, -0.5],
            RadialForm::Bessel { branches } => branches.iter().map(|b| b.order).collect(),
        }
    }

    /// Number of basis functions carried by this component.
    pub fn basis_count(&self) -> usize {
        match &self.form {
            RadialForm::SinCos { .. } => 2,
            RadialForm::Bessel { branches } => branches.len(),
        }
    }

    /// Overwrites the coefficient slots in basis order (sine before cosine).
    pub fn set_coefficients(&mut self, coeffs: &[f64]) -> Result<(), FreeDynamicsError> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(FreeDynamicsError::InvalidInput {
                reason: "coefficients must be finite",
            });
        }
        match &mut self.form {
            RadialForm::SinCos {
                sin_coeff,
                cos_coeff,
            } => {
                if coeffs.len() != 2 {
                    return Err(FreeDynamicsError::InvalidInput {
                        reason: "sin/cos form takes exactly two coefficients",
                    });
                }
                *sin_coeff = coeffs[0];
                *cos_coeff = coeffs[1];
            }
            RadialForm::Bessel { branches } => {
                if coeffs.len() != branches.len() {
                    return Err(FreeDynamicsError::InvalidInput {
                        reason: "coefficient count must match branch count",
                    });
                }
                for (b, &c) in branches.iter_mut().zip(coeffs) {
                    b.coeff = c;
                }
            }
        }
        Ok(())
    }

    /// Value at signed `l`; `|l|` enters the basis argument and the parity
    /// tag fixes the sign on the lower nappe. Points where the basis is
    /// singular or undefined (the apex for these forms) evaluate to NaN.
    pub fn eval(&self, l: f64) -> f64 {
        if l == 0.0 {
            return f64::NAN;
        }
        let v = self.base_eval(l.abs());
        if l < 0.0 && self.parity == Parity::Odd {
            -v
        } else {
            v
        }
    }

    /// First derivative with respect to signed `l`, `l != 0`.
    pub fn deriv(&self, l: f64) -> f64 {
        if l == 0.0 {
            return f64::NAN;
        }
        let d = self.base_deriv(l.abs());
        if l < 0.0 && self.parity == Parity::Even {
            -d
        } else {
            d
        }
    }

    /// Second derivative with respect to signed `l`, `l != 0`.
    pub fn deriv2(&self, l: f64) -> f64 {
        if l == 0.0 {
            return f64::NAN;
        }
        let d = self.base_deriv2(l.abs());
        if l < 0.0 && self.parity == Parity::Odd {
            -d
        } else {
            d
        }
    }

    fn base_eval(&self, x: f64) -> f64 {
        let k = self.wavenumber;
        match &self.form {
            RadialForm::SinCos {
                sin_coeff,
                cos_coeff,
            } => (sin_coeff * (k * x).sin() + cos_coeff * (k * x).cos()) / x.sqrt(),
            RadialForm::Bessel { branches } => branches
                .iter()
                .map(|b| b.coeff * bessel_j(b.order, k * x).unwrap_or(f64::NAN))
                .sum(),
        }
    }

    fn base_deriv(&self, x: f64) -> f64 {
        let k = self.wavenumber;
        match &self.form {
            RadialForm::SinCos {
                sin_coeff,
                cos_coeff,
            } => {
                let (s, c) = (k * x).sin_cos();
                let g = sin_coeff * s + cos_coeff * c;
                let gp = k * (sin_coeff * c - cos_coeff * s);
                gp / x.sqrt() - 0.5 * g / x.powf(1.5)
            }
            RadialForm::Bessel { branches } => {
                // J'_mu(z) = (J_{mu-1} - J_{mu+1}) / 2, chain rule in z = Kx.
                branches
                    .iter()
                    .map(|b| {
                        let z = k * x;
                        let lo = bessel_j(b.order - 1.0, z).unwrap_or(f64::NAN);
                        let hi = bessel_j(b.order + 1.0, z).unwrap_or(f64::NAN);
                        b.coeff * 0.5 * k * (lo - hi)
                    })
                    .sum()
            }
        }
    }

    fn base_deriv2(&self, x: f64) -> f64 {
        let k = self.wavenumber;
        match &self.form {
            RadialForm::SinCos {
                sin_coeff,
                cos_coeff,
            } => {
                let (s, c) = (k * x).sin_cos();
                let g = sin_coeff * s + cos_coeff * c;
                let gp = k * (sin_coeff * c - cos_coeff * s);
                -k * k * g / x.sqrt() - gp / x.powf(1.5) + 0.75 * g / x.powf(2.5)
            }
            RadialForm::Bessel { branches } => {
                // J''_mu(z) = (J_{mu-2} - 2 J_mu + J_{mu+2}) / 4.
                branches
                    .iter()
                    .map(|b| {
                        let z = k * x;
                        let lo = bessel_j(b.order - 2.0, z).unwrap_or(f64::NAN);
                        let mid = bessel_j(b.order, z).unwrap_or(f64::NAN);
                        let hi = bessel_j(b.order + 2.0, z).unwrap_or(f64::NAN);
                        b.coeff * 0.25 * k * k * (lo - 2.0 * mid + hi)
                    })
                    .sum()
            }
        }
    }
}

fn check_wavenumber(k: f64) -> Result<(), FreeDynamicsError> {
    if !k.is_finite() || k <= 0.0 {
        return Err(FreeDynamicsError::NonPositiveWavenumber { k });
    }
    Ok(())
}

/// Radial wavenumber `K = sqrt(E^2 - m^2 c^4) / (hbar c)`.
///
/// The difference of squares is computed in factored form, which keeps the
/// near-threshold regime accurate.
pub fn wavenumber(energy: f64, mass: f64, units: &UnitSystem) -> Result<f64, FreeDynamicsError> {
    if !energy.is_finite() || !mass.is_finite() || mass < 0.0 {
        return Err(FreeDynamicsError::InvalidInput {
            reason: "energy must be finite and mass non-negative",
        });
    }
    let rest = mass * units.c * units.c;
    let q = (energy.abs() - rest) * (energy.abs() + rest);
    if q < 0.0 {
        return Err(FreeDynamicsError::SubThreshold {
            energy,
            threshold: rest,
        });
    }
    Ok(q.sqrt() / (units.hbar * units.c))
}

/// Low-energy wavenumber `sqrt(2 m epsilon) / hbar` for kinetic energy
/// `epsilon` above rest mass.
pub fn nonrelativistic_wavenumber(
    epsilon: f64,
    mass: f64,
    units: &UnitSystem,
) -> Result<f64, FreeDynamicsError> {
    if !epsilon.is_finite() || !mass.is_finite() || mass < 0.0 {
        return Err(FreeDynamicsError::InvalidInput {
            reason: "kinetic energy must be finite and mass non-negative",
        });
    }
    if epsilon < 0.0 {
        return Err(FreeDynamicsError::NegativeKineticEnergy { epsilon });
    }
    Ok((2.0 * mass * epsilon).sqrt() / units.hbar)
}

/// Bessel orders `(nu_A, nu_B)` for the two components.
///
/// The order equations have perfect-square discriminants, so the exact
/// values are `nu_A = |j/alpha - s/2|` and `nu_B = |j/alpha + s/2|`.
pub fn bessel_orders(j: f64, s: Sign, geom: &SurfaceGeometry) -> (f64, f64) {
    let q = j / geom.alpha();
    let half = 0.5 * s.value();
    ((q - half).abs(), (q + half).abs())
}

/// Normalizability classifier: `J_nu` is admissible iff `nu >= -1/2`.
/// The boundary is closed, which is what keeps the cosine branch at `j = 0`.
pub fn is_normalizable(nu: f64) -> bool {
    nu >= -0.5
}

/// General radial solution pair `(psi_A, psi_B)` at wavenumber `k`, with all
/// admissible branches included and unit coefficients in every slot.
///
/// At `j = 0` both components take the trigonometric form with two free
/// slots each. Otherwise each component carries `J_{+nu}` always and
/// `J_{-nu}` only when that order is still normalizable. Solutions default
/// to even parity; use [`RadialSolution::with_parity`] for the odd sector.
pub fn free_solution(
    j: f64,
    s: Sign,
    geom: &SurfaceGeometry,
    k: f64,
) -> Result<(RadialSolution, RadialSolution), FreeDynamicsError> {
    if !j.is_finite() {
        return Err(FreeDynamicsError::InvalidInput {
            reason: "angular number must be finite",
        });
    }
    check_wavenumber(k)?;
    if j == 0.0 {
        let a = RadialSolution::sin_cos(k, 1.0, 1.0, Parity::Even)?;
        let b = RadialSolution::sin_cos(k, 1.0, 1.0, Parity::Even)?;
        return Ok((a, b));
    }
    let (nu_a, nu_b) = bessel_orders(j, s, geom);
    let build = |nu: f64| -> Result<RadialSolution, FreeDynamicsError> {
        let mut branches = vec![BesselBranch {
            order: nu,
            coeff: 1.0,
        }];
        if nu > 0.0 && is_normalizable(-nu) {
            branches.push(BesselBranch {
                order: -nu,
                coeff: 1.0,
            });
        }
        RadialSolution::bessel(k, branches, Parity::Even)
    };
    Ok((build(nu_a)?, build(nu_b)?))
}

/// Number of admissible basis functions across both components: 4 exactly at
/// `j = 0`, and one fewer as soon as `j` moves off zero (the scar).
pub fn admissible_basis_count(j: f64, s: Sign, geom: &SurfaceGeometry) -> usize {
    let (nu_a, nu_b) = bessel_orders(j, s, geom);
    let per_component = |nu: f64| {
        if nu == 0.0 {
            1
        } else if is_normalizable(-nu) {
            2
        } else {
            1
        }
    };
    per_component(nu_a) + per_component(nu_b)
}

/// Tabulates orders and negative-branch admissibility over a `j` grid, in
/// grid order.
pub fn scar_scan(s: Sign, geom: &SurfaceGeometry, j_grid: &[f64]) -> Vec<ScarRow> {
    j_grid
        .iter()
        .map(|&j| {
            let (nu_a, nu_b) = bessel_orders(j, s, geom);
            ScarRow {
                j,
                nu_a,
                nu_b,
                neg_a_admissible: is_normalizable(-nu_a),
                neg_b_admissible: is_normalizable(-nu_b),
            }
        })
        .collect()
}

/// Builds a `(psi_A, psi_B)` pair whose relative coefficient is fixed by the
/// first-order coupled system, seeded from the chosen branch of `psi_A`.
///
/// The returned `psi_B` is the real amplitude of the second component (its
/// physical phase is a global factor of i). Requires `|E| > m c^2` so the
/// wavenumber is positive. Branch choices whose forced partner would be
/// non-normalizable are refused; near the scar this rules out exactly the
/// pairings the admissibility classifier forbids.
pub fn matched_pair(
    j: f64,
    s: Sign,
    geom: &SurfaceGeometry,
    energy: f64,
    mass: f64,
    units: &UnitSystem,
    branch: MatchedBranch,
) -> Result<(RadialSolution, RadialSolution), FreeDynamicsError> {
    let k = wavenumber(energy, mass, units)?;
    if k == 0.0 {
        return Err(FreeDynamicsError::DegenerateWavenumber);
    }
    let rest = mass * units.c * units.c;
    // kappa = hbar c K / (E + m c^2); well-defined since |E| > m c^2.
    let kappa = units.hbar * units.c * k / (energy + rest);

    if j == 0.0 {
        return match branch {
            MatchedBranch::Sin => Ok((
                RadialSolution::sin_cos(k, 1.0, 0.0, Parity::Even)?,
                RadialSolution::sin_cos(k, 0.0, -kappa, Parity::Even)?,
            )),
            MatchedBranch::Cos => Ok((
                RadialSolution::sin_cos(k, 0.0, 1.0, Parity::Even)?,
                RadialSolution::sin_cos(k, kappa, 0.0, Parity::Even)?,
            )),
            MatchedBranch::Positive | MatchedBranch::Negative => {
                Err(FreeDynamicsError::BranchMismatch { branch })
            }
        };
    }

    let (nu_a, _) = bessel_orders(j, s, geom);
    // sw = s*(j/alpha - s/2) = s*j/alpha - 1/2 decides which contiguous
    // order the derivative relations land on.
    let sw = s.value() * j / geom.alpha() - 0.5;
    let (a_order, b_order, b_coeff) = match branch {
        MatchedBranch::Positive => {
            if sw >= 0.0 {
                (nu_a, nu_a + 1.0, kappa)
            } else {
                (nu_a, nu_a - 1.0, -kappa)
            }
        }
        MatchedBranch::Negative => {
            if !is_normalizable(-nu_a) || nu_a == 0.0 {
                return Err(FreeDynamicsError::InadmissibleOrder { order: -nu_a });
            }
            if sw >= 0.0 {
                (-nu_a, -(nu_a + 1.0), -kappa)
            } else {
                (-nu_a, 1.0 - nu_a, kappa)
            }
        }
        MatchedBranch::Sin | MatchedBranch::Cos => {
            return Err(FreeDynamicsError::BranchMismatch { branch })
        }
    };
    if !is_normalizable(b_order) {
        return Err(FreeDynamicsError::NonNormalizablePartner { order: b_order });
    }
    let psi_a = RadialSolution::bessel(
        k,
        vec![BesselBranch {
            order: a_order,
            coeff: 1.0,
        }],
        Parity::Even,
    )?;
    let psi_b = RadialSolution::bessel(
        k,
        vec![BesselBranch {
            order: b_order,
            coeff: b_coeff,
        }],
        Parity::Even,
    )?;
    Ok((psi_a, psi_b))
}

/// Max relative residual of the two first-order coupled equations over the
/// samples, using fourth-order finite-difference derivatives.
///
/// Returns the residual when it is within [`COUPLED_RESIDUAL_TOLERANCE`],
/// otherwise reports the pair as inconsistent. Samples must be positive and
/// nonzero; the relations are written on the upper nappe.
#[allow(clippy::too_many_arguments)]
pub fn coupled_residual(
    energy: f64,
    mass: f64,
    j: f64,
    s: Sign,
    geom: &SurfaceGeometry,
    psi_a: &RadialSolution,
    psi_b: &RadialSolution,
    l_samples: &[f64],
    units: &UnitSystem,
) -> Result<f64, FreeDynamicsError> {
    if l_samples.is_empty() {
        return Err(FreeDynamicsError::InvalidInput {
            reason: "sample set must be nonempty",
        });
    }
    if l_samples.iter().any(|&l| !l.is_finite() || l <= 0.0) {
        return Err(FreeDynamicsError::InvalidInput {
            reason: "samples must be finite and positive",
        });
    }
    let k = wavenumber(energy, mass, units)?;
    if k == 0.0 {
        return Err(FreeDynamicsError::DegenerateWavenumber);
    }
    let hbar_c = units.hbar * units.c;
    let rest = mass * units.c * units.c;
    let coupling = s.value() * j / geom.alpha();

    let mut worst = 0.0f64;
    for &l in l_samples {
        let h = (0.005 / k.max(1.0)).min(l / 200.0);
        let fa = psi_a.eval(l);
        let fb = psi_b.eval(l);
        let fa_p = stencil_deriv(|x| psi_a.eval(x), l, h);
        let fb_p = stencil_deriv(|x| psi_b.eval(x), l, h);

        let t1 = (energy - rest) / hbar_c * fa;
        let t2 = fb_p + 0.5 * fb / l + coupling * fb / l;
        let r1 = t1 - t2;
        let scale1 = t1.abs() + fb_p.abs() + (0.5 * fb / l).abs() + (coupling * fb / l).abs();

        let u1 = (energy + rest) / hbar_c * fb;
        let u2 = fa_p + 0.5 * fa / l - coupling * fa / l;
        let r2 = u1 + u2;
        let scale2 = u1.abs() + fa_p.abs() + (0.5 * fa / l).abs() + (coupling * fa / l).abs();

        worst = worst.max(r1.abs() / (scale1 + 1e-300));
        worst = worst.max(r2.abs() / (scale2 + 1e-300));
    }
    if worst > COUPLED_RESIDUAL_TOLERANCE {
        return Err(FreeDynamicsError::InconsistentPair { residual: worst });
    }
    Ok(worst)
}

/// Five-point fourth-order first derivative.
fn stencil_deriv<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Max relative residual of the second-order radial equation
/// `l^2 f'' + l f' + (K^2 l^2 - nu^2) f = 0` over the samples, with analytic
/// derivatives of the stored basis.
///
/// The coefficients use the passed `k` and `nu`, so perturbed eigenvalues
/// register as large residuals against a solution built at the true ones.
/// Samples must exclude zero.
pub fn uncoupled_residual(solution: &RadialSolution, k: f64, nu: f64, l_samples: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for &l in l_samples {
        assert!(
            l != 0.0 && l.is_finite(),
            "samples must be finite and nonzero"
        );
        let f = solution.eval(l);
        let fp = solution.deriv(l);
        let fpp = solution.deriv2(l);
        let t_dd = l * l * fpp;
        let t_d = l * fp;
        let t_k = k * k * l * l * f;
        let t_nu = nu * nu * f;
        let r = t_dd + t_d + t_k - t_nu;
        let scale = t_dd.abs() + t_d.abs() + t_k.abs() + t_nu.abs() + 1e-300;
        worst = worst.max(r.abs() / scale);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{SurfaceGeometry, UnitSystem};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn natural() -> UnitSystem {
        UnitSystem::natural()
    }

    fn geom(alpha: f64) -> SurfaceGeometry {
        SurfaceGeometry::new(alpha).unwrap()
    }

    mod wavenumber_op {
        use super::*;

        #[test]
        fn rest_energy_gives_zero() {
            assert_eq!(wavenumber(1.0, 1.0, &natural()).unwrap(), 0.0);
        }

        #[test]
        fn sqrt2_unit_mass() {
            let k = wavenumber(2f64.sqrt(), 1.0, &natural()).unwrap();
            assert_relative_eq!(k, 1.0, max_relative = 1e-14);
        }

        #[test]
        fn massless_is_linear() {
            assert_eq!(wavenumber(5.0, 0.0, &natural()).unwrap(), 5.0);
            assert_eq!(wavenumber(-5.0, 0.0, &natural()).unwrap(), 5.0);
        }

        #[test]
        fn sub_threshold_rejected() {
            let err = wavenumber(0.5, 1.0, &natural()).unwrap_err();
            assert!(matches!(err, FreeDynamicsError::SubThreshold { .. }));
        }

        #[test]
        fn unit_factors_enter_correctly() {
            // c = 2, hbar = 3: K = sqrt(E^2 - m^2 c^4) / (hbar c) = 6/6.
            let units = UnitSystem::new(3.0, 2.0, 1.0).unwrap();
            let k = wavenumber(6.0, 0.0, &units).unwrap();
            assert_relative_eq!(k, 1.0, max_relative = 1e-15);
        }
    }

    mod nonrelativistic {
        use super::*;

        #[test]
        fn zero_kinetic_energy() {
            assert_eq!(
                nonrelativistic_wavenumber(0.0, 1.0, &natural()).unwrap(),
                0.0
            );
        }

        #[test]
        fn half_unit_case() {
            let k = nonrelativistic_wavenumber(0.5, 1.0, &natural()).unwrap();
            assert_relative_eq!(k, 1.0, max_relative = 1e-15);
        }

        #[test]
        fn negative_energy_rejected() {
            assert!(matches!(
                nonrelativistic_wavenumber(-0.1, 1.0, &natural()),
                Err(FreeDynamicsError::NegativeKineticEnergy { .. })
            ));
        }

        #[test]
        fn relativistic_correction_ratio() {
            // K_rel^2 = 2 m eps + eps^2/c^2 exactly, so the relative gap
            // between K_rel^2 and 2 m eps is eps / (2 m c^2).
            let m = 1.0;
            for &ratio in &[1e-2, 1e-3, 1e-4] {
                let eps = ratio * m;
                let k_rel = wavenumber(m + eps, m, &natural()).unwrap();
                let k_nr = nonrelativistic_wavenumber(eps, m, &natural()).unwrap();
                let measured = (k_rel * k_rel - k_nr * k_nr) / (k_nr * k_nr);
                let expected = eps / (2.0 * m);
                assert_relative_eq!(measured, expected, max_relative = 1e-6);
            }
        }
    }

    mod orders {
        use super::*;

        #[test]
        fn zero_j_pins_both_to_half() {
            assert_eq!(bessel_orders(0.0, Sign::Plus, &geom(0.7)), (0.5, 0.5));
        }

        #[test]
        fn unit_j_plane() {
            assert_eq!(bessel_orders(1.0, Sign::Plus, &geom(1.0)), (0.5, 1.5));
        }

        #[test]
        fn negative_j_narrow_cone() {
            assert_eq!(bessel_orders(-1.0, Sign::Plus, &geom(0.5)), (2.5, 1.5));
        }

        #[test]
        fn admissibility_boundary_is_closed() {
            assert!(is_normalizable(-0.5));
            assert!(!is_normalizable(-0.51));
            assert!(is_normalizable(1.5));
        }

        proptest! {
            #[test]
            fn swap_under_j_negation(j in -40.0f64..40.0, alpha in 1e-3f64..=1.0) {
                let g = geom(alpha);
                let (a, b) = bessel_orders(j, Sign::Plus, &g);
                let (a2, b2) = bessel_orders(-j, Sign::Plus, &g);
                prop_assert_eq!(a, b2);
                prop_assert_eq!(b, a2);
            }

            #[test]
            fn swap_under_s_flip(j in -40.0f64..40.0, alpha in 1e-3f64..=1.0) {
                let g = geom(alpha);
                let (a, b) = bessel_orders(j, Sign::Plus, &g);
                let (a2, b2) = bessel_orders(j, Sign::Minus, &g);
                prop_assert_eq!(a, b2);
                prop_assert_eq!(b, a2);
            }

            #[test]
            fn matches_square_root_of_discriminant(
                j in -20.0f64..20.0,
                alpha in 0.05f64..=1.0,
            ) {
                // The defining quadratic has a perfect-square discriminant;
                // the sqrt route loses digits near its zero, so the check is
                // cancellation-tolerant.
                let g = geom(alpha);
                let q = j / alpha;
                let (a, b) = bessel_orders(j, Sign::Plus, &g);
                let disc_a = (q * q - q + 0.25).max(0.0).sqrt();
                let disc_b = (q * q + q + 0.25).max(0.0).sqrt();
                let tol = 2e-7 * (1.0 + q.abs());
                prop_assert!((disc_a - a).abs() <= tol);
                prop_assert!((disc_b - b).abs() <= tol);
            }
        }
    }

    mod solutions {
        use super::*;

        #[test]
        fn zero_j_keeps_four_functions() {
            let (a, b) = free_solution(0.0, Sign::Plus, &geom(0.7), 1.0).unwrap();
            assert!(matches!(a.form(), RadialForm::SinCos { .. }));
            assert!(matches!(b.form(), RadialForm::SinCos { .. }));
            assert_eq!(a.basis_count() + b.basis_count(), 4);
        }

        #[test]
        fn tiny_positive_j_drops_second_component_branch() {
            let (a, b) = free_solution(0.01, Sign::Plus, &geom(0.7), 1.0).unwrap();
            assert_eq!(a.basis_count(), 2);
            assert_eq!(b.basis_count(), 1);
            // -nu_B = -(1/2 + j/alpha) just crossed the bound.
            assert!(b.orders()[0] > 0.5);
        }

        #[test]
        fn large_order_keeps_positive_branch_only() {
            let (a, _) = free_solution(2.0, Sign::Minus, &geom(1.0), 1.0).unwrap();
            assert_eq!(a.orders(), vec![2.5]);
        }

        #[test]
        fn invalid_wavenumber_rejected() {
            assert!(matches!(
                free_solution(0.0, Sign::Plus, &geom(1.0), 0.0),
                Err(FreeDynamicsError::NonPositiveWavenumber { .. })
            ));
        }

        #[test]
        fn constructor_rejects_inadmissible_order() {
            let r = RadialSolution::bessel(
                1.0,
                vec![BesselBranch {
                    order: -0.75,
                    coeff: 1.0,
                }],
                Parity::Even,
            );
            assert!(matches!(
                r,
                Err(FreeDynamicsError::InadmissibleOrder { .. })
            ));
        }

        #[test]
        fn coefficient_slots_are_settable() {
            let (mut a, _) = free_solution(0.0, Sign::Plus, &geom(1.0), 2.0).unwrap();
            a.set_coefficients(&[3.0, 0.0]).unwrap();
            let l = 0.8;
            assert_relative_eq!(
                a.eval(l),
                3.0 * (2.0 * l).sin() / l.sqrt(),
                max_relative = 1e-14
            );
            assert!(a.set_coefficients(&[1.0]).is_err());
        }

        #[test]
        fn parity_controls_lower_nappe_sign() {
            let (a, _) = free_solution(0.0, Sign::Plus, &geom(1.0), 1.0).unwrap();
            let even = a.clone();
            let odd = a.with_parity(Parity::Odd);
            let l = 1.3;
            assert_eq!(even.eval(-l), even.eval(l));
            assert_eq!(odd.eval(-l), -odd.eval(l));
            assert_eq!(even.deriv(-l), -even.deriv(l));
            assert_eq!(odd.deriv(-l), odd.deriv(l));
            assert_eq!(even.deriv2(-l), even.deriv2(l));
            assert_eq!(odd.deriv2(-l), -odd.deriv2(l));
        }

        #[test]
        fn apex_value_is_nan_for_singular_basis() {
            let (a, _) = free_solution(0.0, Sign::Plus, &geom(1.0), 1.0).unwrap();
            assert!(a.eval(0.0).is_nan());
        }
    }

    mod scar {
        use super::*;

        #[test]
        fn admissibility_flips_exactly_at_zero() {
            let rows = scar_scan(Sign::Plus, &geom(0.7), &[-0.01, 0.0, 0.01]);
            assert!(!rows[0].neg_a_admissible && rows[0].neg_b_admissible);
            assert!(rows[1].neg_a_admissible && rows[1].neg_b_admissible);
            assert!(rows[2].neg_a_admissible && !rows[2].neg_b_admissible);
        }

        #[test]
        fn zero_row_is_all_admissible() {
            let rows = scar_scan(Sign::Plus, &geom(0.7), &[0.0]);
            assert_eq!(rows[0].nu_a, 0.5);
            assert_eq!(rows[0].nu_b, 0.5);
            assert!(rows[0].neg_a_admissible && rows[0].neg_b_admissible);
        }

        #[test]
        fn cardinality_discontinuity() {
            let g = geom(0.7);
            assert_eq!(admissible_basis_count(0.0, Sign::Plus, &g), 4);
            assert_eq!(admissible_basis_count(1e-4, Sign::Plus, &g), 3);
            assert_eq!(admissible_basis_count(-1e-4, Sign::Plus, &g), 3);
        }

        #[test]
        fn surviving_branch_converges_to_sine_form() {
            // As j -> 0 the surviving order tends to 1/2, whose closed form
            // is sqrt(2/(pi K l)) sin(K l).
            let g = geom(0.7);
            let k = 1.0;
            let (_, nu_b) = bessel_orders(1e-8, Sign::Plus, &g);
            for &l in &[0.5, 1.0, 3.0] {
                let v = bessel_j(nu_b, k * l).unwrap();
                let limit = (2.0 / (PI * k * l)).sqrt() * (k * l).sin();
                assert_abs_diff_eq!(v, limit, epsilon = 1e-6);
            }
        }

        proptest! {
            #[test]
            fn one_branch_lost_for_small_nonzero_j(
                q in 1e-6f64..=1.0,
                alpha in 0.05f64..=1.0,
                flip in proptest::bool::ANY,
            ) {
                // q = 1/2 exactly collapses one order to zero; that is the
                // excluded degenerate ray, not the scar statement.
                prop_assume!((q - 0.5).abs() > 1e-9);
                let g = geom(alpha);
                let j = if flip { -q * alpha } else { q * alpha };
                prop_assert_eq!(admissible_basis_count(j, Sign::Plus, &g), 3);
            }
        }
    }

    mod matched {
        use super::*;

        fn samples() -> Vec<f64> {
            (1..=25).map(|i| 0.4 + 0.37 * i as f64).collect()
        }

        #[test]
        fn sin_pair_satisfies_coupled_system() {
            let g = geom(0.7);
            let (e, m) = (2f64.sqrt(), 1.0);
            let (a, b) =
                matched_pair(0.0, Sign::Plus, &g, e, m, &natural(), MatchedBranch::Sin).unwrap();
            let r = coupled_residual(e, m, 0.0, Sign::Plus, &g, &a, &b, &samples(), &natural())
                .unwrap();
            assert!(r <= 1e-8, "residual {r}");
        }

        #[test]
        fn cos_pair_satisfies_coupled_system() {
            let g = geom(0.7);
            let (e, m) = (1.7, 0.9);
            let (a, b) =
                matched_pair(0.0, Sign::Plus, &g, e, m, &natural(), MatchedBranch::Cos).unwrap();
            let r = coupled_residual(e, m, 0.0, Sign::Plus, &g, &a, &b, &samples(), &natural())
                .unwrap();
            assert!(r <= 1e-8, "residual {r}");
        }

        #[test]
        fn positive_branch_pairs_across_sign_cases() {
            let cases = [
                (1.0, Sign::Plus, 1.0, 1.3, 0.0),
                (-1.0, Sign::Plus, 1.0, 2f64.sqrt(), 1.0),
                (2.0, Sign::Minus, 0.5, 2.2, 0.8),
                (3.0, Sign::Plus, 0.7, 1.9, 0.4),
            ];
            for &(j, s, alpha, e, m) in &cases {
                let g = geom(alpha);
                let (a, b) =
                    matched_pair(j, s, &g, e, m, &natural(), MatchedBranch::Positive).unwrap();
                let r = coupled_residual(e, m, j, s, &g, &a, &b, &samples(), &natural()).unwrap();
                assert!(r <= 1e-8, "case j={j} alpha={alpha}: residual {r}");
            }
        }

        #[test]
        fn negative_branch_pair_near_scar() {
            // nu_A ~ 0.214 here, so the negative branch is admissible and
            // couples onto the positive branch of the partner.
            let g = geom(0.7);
            let (e, m) = (1.5, 0.5);
            let (a, b) = matched_pair(
                0.2,
                Sign::Plus,
                &g,
                e,
                m,
                &natural(),
                MatchedBranch::Negative,
            )
            .unwrap();
            assert!(a.orders()[0] < 0.0);
            assert!(b.orders()[0] > 0.5);
            let r = coupled_residual(e, m, 0.2, Sign::Plus, &g, &a, &b, &samples(), &natural())
                .unwrap();
            assert!(r <= 1e-8, "residual {r}");
        }

        #[test]
        fn forced_partner_beyond_bound_is_refused() {
            // s j / alpha = 0.8 puts nu_A = 0.3; the negative branch of A is
            // admissible but its partner would sit at order -1.3.
            let g = geom(1.0);
            let r = matched_pair(
                0.8,
                Sign::Plus,
                &g,
                1.4,
                0.3,
                &natural(),
                MatchedBranch::Negative,
            );
            assert!(matches!(
                r,
                Err(FreeDynamicsError::NonNormalizablePartner { .. })
            ));
        }

        #[test]
        fn branch_kind_must_match_angular_number() {
            let g = geom(1.0);
            assert!(matches!(
                matched_pair(
                    0.0,
                    Sign::Plus,
                    &g,
                    1.5,
                    0.5,
                    &natural(),
                    MatchedBranch::Positive
                ),
                Err(FreeDynamicsError::BranchMismatch { .. })
            ));
            assert!(matches!(
                matched_pair(
                    1.0,
                    Sign::Plus,
                    &g,
                    1.5,
                    0.5,
                    &natural(),
                    MatchedBranch::Sin
                ),
                Err(FreeDynamicsError::BranchMismatch { .. })
            ));
        }

        #[test]
        fn rest_energy_pair_is_degenerate() {
            let g = geom(1.0);
            assert!(matches!(
                matched_pair(
                    0.0,
                    Sign::Plus,
                    &g,
                    1.0,
                    1.0,
                    &natural(),
                    MatchedBranch::Sin
                ),
                Err(FreeDynamicsError::DegenerateWavenumber)
            ));
        }

        #[test]
        fn random_pair_is_flagged_inconsistent() {
            let g = geom(0.7);
            let (e, m) = (2f64.sqrt(), 1.0);
            let k = wavenumber(e, m, &natural()).unwrap();
            let (a, _) =
                matched_pair(0.0, Sign::Plus, &g, e, m, &natural(), MatchedBranch::Sin).unwrap();
            // Deliberately wrong partner: cosine with an unrelated factor.
            let b = RadialSolution::sin_cos(k, 0.0, 0.83, Parity::Even).unwrap();
            let err = coupled_residual(e, m, 0.0, Sign::Plus, &g, &a, &b, &samples(), &natural())
                .unwrap_err();
            match err {
                FreeDynamicsError::InconsistentPair { residual } => {
                    assert!(residual > 1e-3, "residual {residual}")
                }
                other => panic!("unexpected error {other:?}"),
            }
        }
    }

    mod residuals {
        use super::*;

        fn samples_in(lo: f64, hi: f64, count: usize) -> Vec<f64> {
            (0..count)
                .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
                .collect()
        }

        #[test]
        fn bessel_half_order_solves_radial_equation() {
            let k = 1.0;
            let sol = RadialSolution::bessel(
                k,
                vec![BesselBranch {
                    order: 0.5,
                    coeff: 1.0,
                }],
                Parity::Even,
            )
            .unwrap();
            let r = uncoupled_residual(&sol, k, 0.5, &samples_in(0.5, 10.0, 20));
            assert!(r <= 1e-8, "residual {r}");
        }

        #[test]
        fn trigonometric_forms_solve_half_order_equation() {
            let k = 1.3;
            for coeffs in [(1.0, 0.0), (0.0, 1.0)] {
                let sol = RadialSolution::sin_cos(k, coeffs.0, coeffs.1, Parity::Even).unwrap();
                let r = uncoupled_residual(&sol, k, 0.5, &samples_in(0.3, 9.0, 25));
                assert!(r <= 1e-12, "residual {r}");
            }
        }

        #[test]
        fn eigenvalue_perturbation_is_detected() {
            let k = 1.0;
            let sol = RadialSolution::bessel(
                k,
                vec![BesselBranch {
                    order: 1.5,
                    coeff: 1.0,
                }],
                Parity::Even,
            )
            .unwrap();
            let samples = samples_in(0.5, 10.0, 20);
            let base = uncoupled_residual(&sol, k, 1.5, &samples);
            let shifted = uncoupled_residual(&sol, k * 1.01, 1.5, &samples);
            assert!(
                shifted >= 1e3 * base.max(1e-15),
                "base {base}, shifted {shifted}"
            );
        }

        #[test]
        fn mixed_branch_solution_still_solves() {
            // Both +nu and -nu solve the same equation, so does any mix.
            let k = 0.8;
            let sol = RadialSolution::bessel(
                k,
                vec![
                    BesselBranch {
                        order: 0.4,
                        coeff: 0.7,
                    },
                    BesselBranch {
                        order: -0.4,
                        coeff: -1.9,
                    },
                ],
                Parity::Even,
            )
            .unwrap();
            let r = uncoupled_residual(&sol, k, 0.4, &samples_in(0.4, 7.0, 15));
            assert!(r <= 1e-8, "residual {r}");
        }
    }
}
