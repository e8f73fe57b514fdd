//! Adaptive Simpson quadrature.
//!
//! All integrands in this crate are piecewise smooth trigonometric or
//! polynomial expressions, so adaptive Simpson with Richardson extrapolation
//! converges quickly once panels are split at the known breakpoints.

use thiserror::Error;

/// Per-panel absolute tolerance used by the closed-form density machinery.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Hard cap on integrand evaluations for a single integral.
pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadratureError {
    #[error("quadrature failed to reach tolerance within the evaluation budget")]
    BudgetExhausted,
}

struct Panel {
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    estimate: f64,
}

fn simpson(a: f64, fa: f64, fm: f64, fb: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    panel: Panel,
    tol: f64,
    depth: usize,
    evals: &mut usize,
    budget: usize,
) -> Result<f64, QuadratureError> {
    let Panel {
        a,
        m,
        b,
        fa,
        fm,
        fb,
        estimate,
    } = panel;
    if *evals + 2 > budget {
        return Err(QuadratureError::BudgetExhausted);
    }
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    *evals += 2;
    let left = simpson(a, fa, flm, fm, m);
    let right = simpson(m, fm, frm, fb, b);
    let refined = left + right;
    let err = refined - estimate;
    if err.abs() <= 15.0 * tol || depth == 0 {
        // Richardson extrapolation knocks out the leading error term.
        return Ok(refined + err / 15.0);
    }
    let l = adaptive(
        f,
        Panel {
            a,
            m: lm,
            b: m,
            fa,
            fm: flm,
            fb: fm,
            estimate: left,
        },
        0.5 * tol,
        depth - 1,
        evals,
        budget,
    )?;
    let r = adaptive(
        f,
        Panel {
            a: m,
            m: rm,
            b,
            fa: fm,
            fm: frm,
            fb,
            estimate: right,
        },
        0.5 * tol,
        depth - 1,
        evals,
        budget,
    )?;
    Ok(l + r)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// `a > b` integrates with the usual sign flip.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64, QuadratureError> {
    integrate_with_breakpoints(f, a, b, &[], tol)
}

/// Integrates `f` over `[a, b]`, pre-splitting panels at every breakpoint
/// that falls strictly inside the interval. Splitting at derivative
/// discontinuities keeps the adaptive recursion shallow.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Result<f64, QuadratureError> {
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate_with_breakpoints(f, b, a, breakpoints, tol).map(|v| -v);
    }
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|x| *x > a && *x < b)
        .collect();
    cuts.sort_unstable_by(f64::total_cmp);
    cuts.dedup();

    let mut nodes = Vec::with_capacity(cuts.len() + 2);
    nodes.push(a);
    nodes.extend(cuts);
    nodes.push(b);

    let panel_tol = tol / nodes.len() as f64;
    let mut evals = 0usize;
    let mut total = 0.0;
    for pair in nodes.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let m = 0.5 * (lo + hi);
        let (fa, fm, fb) = (f(lo), f(m), f(hi));
        evals += 3;
        let estimate = simpson(lo, fa, fm, fb, hi);
        total += adaptive(
            &f,
            Panel {
                a: lo,
                m,
                b: hi,
                fa,
                fm,
                fb,
                estimate,
            },
            panel_tol,
            48,
            &mut evals,
            DEFAULT_BUDGET,
        )?;
    }
    Ok(total)
}
