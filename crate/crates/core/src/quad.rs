//! Adaptive Simpson quadrature shared by profile normalization and the
//! verification layer.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct QuadNonConvergence;

const MAX_DEPTH: u32 = 60;
const PANELS: usize = 32;

/// Integrates `f` over `[a, b]` to roughly `rel_tol` relative accuracy.
///
/// A composite pass sets the absolute budget; the recursion then splits
/// intervals until the local Richardson estimate fits. Smooth integrands with
/// mild endpoint power behavior (everything this crate integrates) converge
/// quickly; hitting the depth limit reports failure instead of returning a
/// bad value.
pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<f64, QuadNonConvergence> {
    if a == b {
        return Ok(0.0);
    }
    let mut coarse = 0.0;
    let w = (b - a) / PANELS as f64;
    for i in 0..PANELS {
        let x0 = a + i as f64 * w;
        coarse += simpson(f, x0, x0 + w);
    }
    let eps = rel_tol * coarse.abs().max(1e-300);
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson_points(fa, fm, fb, b - a);
    refine(f, a, m, b, fa, fm, fb, whole, eps, MAX_DEPTH)
}

fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    simpson_points(f(a), f(0.5 * (a + b)), f(b), b - a)
}

fn simpson_points(fa: f64, fm: f64, fb: f64, width: f64) -> f64 {
    width / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> Result<f64, QuadNonConvergence> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_points(fa, flm, fm, m - a);
    let right = simpson_points(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * eps {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(QuadNonConvergence);
    }
    let l = refine(f, a, lm, m, fa, flm, fm, left, 0.5 * eps, depth - 1)?;
    let r = refine(f, m, rm, b, fm, frm, fb, right, 0.5 * eps, depth - 1)?;
    Ok(l + r)
}
