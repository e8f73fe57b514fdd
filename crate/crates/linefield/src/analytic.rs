//! Closed-form maximum-angle densities, window densities, and a quadrature
//! oracle for fixed-line scenarios without a closed form.
//!
//! Six analytic cases are covered, named by how the inclination angles of the
//! three lines are drawn:
//!
//! | case        | lines                       | ω model              | support      |
//! |-------------|-----------------------------|----------------------|--------------|
//! | `A`         | three random                | constant, [0, π]     | [π/3, π]     |
//! | `B`         | three random                | constant, [π/4,3π/4] | [π/2, π]     |
//! | `C`         | three random                | sine, [0, π]         | [π/3, π]     |
//! | `D`         | three random                | sine, [π/4,3π/4]     | [π/2, π]     |
//! | `DiagConst` | y = x fixed + two random    | constant, restricted | [π/2, π]     |
//! | `DiagSine`  | y = x fixed + two random    | sine, restricted     | [π/2, π]     |
//!
//! The diagonal cases carry closed-form CDFs; cases A–D expose their CDF by
//! adaptive quadrature of the density (panels split at the π/2 breakpoint).

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::quadrature::{self, QuadratureError};
use crate::sampling::{AngleModel, AngleRange, FixedLine, Scenario, Weighting};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("eccentricity must lie in [0, 1), got {0}")]
    BadEccentricity(f64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown case id: {0:?} (expected A, B, C, D, diag-const or diag-sine)")]
pub struct ParseCaseError(String);

/// Identifier of one analytic maximum-angle case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseId {
    A,
    B,
    C,
    D,
    DiagConst,
    DiagSine,
}

impl CaseId {
    pub const ALL: [CaseId; 6] = [
        CaseId::A,
        CaseId::B,
        CaseId::C,
        CaseId::D,
        CaseId::DiagConst,
        CaseId::DiagSine,
    ];

    /// The triangle-generation experiment this case describes.
    pub fn scenario(&self) -> Scenario {
        match self {
            CaseId::A => Scenario::ThreeRandom(AngleModel::new(Weighting::Constant, AngleRange::Full)),
            CaseId::B => {
                Scenario::ThreeRandom(AngleModel::new(Weighting::Constant, AngleRange::Restricted))
            }
            CaseId::C => Scenario::ThreeRandom(AngleModel::new(Weighting::Sine, AngleRange::Full)),
            CaseId::D => {
                Scenario::ThreeRandom(AngleModel::new(Weighting::Sine, AngleRange::Restricted))
            }
            CaseId::DiagConst => Scenario::one_fixed(FixedLine::Diagonal, Weighting::Constant),
            CaseId::DiagSine => Scenario::one_fixed(FixedLine::Diagonal, Weighting::Sine),
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseId::A => "A",
            CaseId::B => "B",
            CaseId::C => "C",
            CaseId::D => "D",
            CaseId::DiagConst => "diag-const",
            CaseId::DiagSine => "diag-sine",
        };
        f.write_str(s)
    }
}

impl FromStr for CaseId {
    type Err = ParseCaseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(CaseId::A),
            "b" => Ok(CaseId::B),
            "c" => Ok(CaseId::C),
            "d" => Ok(CaseId::D),
            "diag-const" | "diagconst" => Ok(CaseId::DiagConst),
            "diag-sine" | "diagsine" => Ok(CaseId::DiagSine),
            _ => Err(ParseCaseError(s.to_string())),
        }
    }
}

/// Number of cached cumulative-quadrature panels backing `cdf` for cases
/// without a closed-form CDF.
const CDF_GRID_PANELS: usize = 64;
const CDF_PANEL_TOL: f64 = 1e-12;

/// One analytic case bundled with its density, CDF, obtuse probability and
/// mode.
#[derive(Debug, Clone)]
pub struct ClosedFormDensity {
    case_id: CaseId,
    support: (f64, f64),
    /// Cumulative mass at grid nodes, for the quadrature-backed CDFs.
    grid: Vec<f64>,
    cumulative: Vec<f64>,
}

impl ClosedFormDensity {
    pub fn new(case_id: CaseId) -> Self {
        let support = match case_id {
            CaseId::A | CaseId::C => (PI / 3.0, PI),
            _ => (FRAC_PI_2, PI),
        };
        let mut density = Self {
            case_id,
            support,
            grid: Vec::new(),
            cumulative: Vec::new(),
        };
        if matches!(case_id, CaseId::A | CaseId::B | CaseId::C | CaseId::D) {
            density.build_cdf_grid();
        }
        density
    }

    fn build_cdf_grid(&mut self) {
        let (lo, hi) = self.support;
        let mut grid = Vec::with_capacity(CDF_GRID_PANELS + 2);
        // π/2 must be a grid node: the density has a breakpoint there.
        if lo < FRAC_PI_2 {
            let left = CDF_GRID_PANELS / 4;
            for i in 0..=left {
                grid.push(lo + (FRAC_PI_2 - lo) * i as f64 / left as f64);
            }
            let right = CDF_GRID_PANELS - left;
            for i in 1..=right {
                grid.push(FRAC_PI_2 + (hi - FRAC_PI_2) * i as f64 / right as f64);
            }
        } else {
            for i in 0..=CDF_GRID_PANELS {
                grid.push(lo + (hi - lo) * i as f64 / CDF_GRID_PANELS as f64);
            }
        }
        let mut cumulative = Vec::with_capacity(grid.len());
        cumulative.push(0.0);
        for pair in grid.windows(2) {
            let panel = quadrature::integrate(|x| self.pdf(x), pair[0], pair[1], CDF_PANEL_TOL)
                .expect("density panels are smooth");
            cumulative.push(cumulative.last().unwrap() + panel);
        }
        self.grid = grid;
        self.cumulative = cumulative;
    }

    pub fn case_id(&self) -> CaseId {
        self.case_id
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    /// Density of the maximum angle at `alpha`; zero outside the support.
    pub fn pdf(&self, alpha: f64) -> f64 {
        let (lo, hi) = self.support;
        if alpha < lo || alpha > hi {
            return 0.0;
        }
        let pi2 = PI * PI;
        match self.case_id {
            CaseId::A => {
                if alpha < FRAC_PI_2 {
                    6.0 * (3.0 * alpha - PI) / pi2
                } else {
                    6.0 * (PI - alpha) / pi2
                }
            }
            CaseId::B => 24.0 * (PI - alpha) * (2.0 * alpha - PI) / (pi2 * PI),
            CaseId::C => {
                if alpha < FRAC_PI_2 {
                    0.75
                        * ((3.0 * alpha - PI) * alpha.cos() + 2.0 * alpha.sin()
                            - 2.0 * (2.0 * alpha).sin()
                            + (3.0 * alpha).sin())
                } else {
                    0.25
                        * (3.0 * (PI - alpha) * alpha.cos() + 3.0 * alpha.sin()
                            - 2.0 * (2.0 * alpha).sin())
                }
            }
            CaseId::D => {
                0.5 * (alpha.cos() + alpha.sin() + (2.0 * alpha).cos() - 2.0 * (2.0 * alpha).sin())
            }
            CaseId::DiagConst => 8.0 * (PI - alpha) / pi2,
            CaseId::DiagSine => 0.5 * (-alpha.cos() + alpha.sin() - (2.0 * alpha).cos()),
        }
    }

    /// P(maximum angle < a), clamped to 0 below the support and 1 above.
    ///
    /// The diagonal cases use their closed forms; A–D integrate the density
    /// (cached cumulative panels plus one short local quadrature).
    pub fn cdf(&self, a: f64) -> f64 {
        let (lo, hi) = self.support;
        if a <= lo {
            return 0.0;
        }
        if a >= hi {
            return 1.0;
        }
        match self.case_id {
            CaseId::DiagConst => (2.0 * a - PI) * (3.0 * PI - 2.0 * a) / (PI * PI),
            CaseId::DiagSine => {
                0.25 * (2.0 - 2.0 * a.cos() - 2.0 * a.sin() - (2.0 * a).sin())
            }
            _ => {
                let k = self.grid.partition_point(|&g| g <= a) - 1;
                let local = quadrature::integrate(|x| self.pdf(x), self.grid[k], a, CDF_PANEL_TOL)
                    .expect("density panels are smooth");
                (self.cumulative[k] + local).clamp(0.0, 1.0)
            }
        }
    }

    /// P(maximum angle > π/2).
    pub fn obtuse_probability(&self) -> f64 {
        match self.case_id {
            CaseId::A => 0.75,
            CaseId::C => 2.0 - 3.0 * PI / 8.0,
            CaseId::B | CaseId::D | CaseId::DiagConst | CaseId::DiagSine => 1.0,
        }
    }

    /// The density's mode: closed form for the diagonal cases, numeric argmax
    /// for A–D.
    pub fn mode(&self) -> f64 {
        match self.case_id {
            CaseId::DiagConst => FRAC_PI_2,
            CaseId::DiagSine => diag_sine_mode(),
            _ => self.numeric_argmax(),
        }
    }

    /// Golden-section argmax over the support, polished by bisecting a
    /// central-difference derivative (the function is flat to second order at
    /// a smooth maximum, so raw golden-section stalls near 1e-8).
    pub fn numeric_argmax(&self) -> f64 {
        let (lo, hi) = self.support;
        let f = |x: f64| self.pdf(x);
        let coarse = golden_section_max(&f, lo, hi, 1e-10);
        refine_argmax(&f, coarse, lo, hi)
    }

    /// Mean of the maximum angle, by quadrature.
    pub fn mean(&self) -> f64 {
        let (lo, hi) = self.support;
        quadrature::integrate_with_breakpoints(|x| x * self.pdf(x), lo, hi, &[FRAC_PI_2], 1e-10)
            .expect("smooth integrand")
    }

    /// Variance of the maximum angle, by quadrature.
    pub fn variance(&self) -> f64 {
        let (lo, hi) = self.support;
        let m = self.mean();
        quadrature::integrate_with_breakpoints(
            |x| (x - m) * (x - m) * self.pdf(x),
            lo,
            hi,
            &[FRAC_PI_2],
            1e-10,
        )
        .expect("smooth integrand")
    }
}

/// Mode of the diagonal sine case: 2·arctan[(−3 + √17 + √(2(5 − √17)))/2].
pub fn diag_sine_mode() -> f64 {
    let s = 17.0f64.sqrt();
    2.0 * (0.5 * (-3.0 + s + (2.0 * (5.0 - s)).sqrt())).atan()
}

fn golden_section_max<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

fn refine_argmax<F: Fn(f64) -> f64>(f: &F, x0: f64, lo: f64, hi: f64) -> f64 {
    let h = 1e-6;
    let deriv = |x: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let mut a = (x0 - 1e-5).max(lo + h);
    let mut b = (x0 + 1e-5).min(hi - h);
    if !(deriv(a) > 0.0 && deriv(b) < 0.0) {
        return x0;
    }
    while b - a > 1e-12 {
        let m = 0.5 * (a + b);
        if deriv(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// A convex window whose inclination-angle density follows the width rule:
/// the measure of lines of inclination ω hitting the window is proportional
/// to the window's width perpendicular to ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowShape {
    /// Any disc: constant width, uniform directions.
    Circle,
    /// The segment [−1, 1] on the x-axis.
    Interval,
    /// The square [−1, 1]².
    Square,
    /// The 2 × 2√(1 − ε²) rectangle of eccentricity ε ∈ [0, 1).
    Rectangle { eccentricity: f64 },
}

/// Normalized inclination-angle density of window-hitting lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowDensity {
    shape: WindowShape,
}

impl WindowDensity {
    pub fn new(shape: WindowShape) -> Result<Self, AnalyticError> {
        if let WindowShape::Rectangle { eccentricity } = shape {
            if !(0.0..1.0).contains(&eccentricity) {
                return Err(AnalyticError::BadEccentricity(eccentricity));
            }
        }
        Ok(Self { shape })
    }

    pub fn shape(&self) -> WindowShape {
        self.shape
    }

    /// Density over ω ∈ [0, π); zero outside.
    pub fn pdf(&self, omega: f64) -> f64 {
        if !(0.0..PI).contains(&omega) {
            return 0.0;
        }
        match self.shape {
            WindowShape::Circle => 1.0 / PI,
            WindowShape::Interval => omega.sin() / 2.0,
            WindowShape::Square => {
                let s2 = (2.0 * omega).sin();
                0.25 * (1.0 + s2).sqrt().max((1.0 - s2).sqrt())
            }
            WindowShape::Rectangle { eccentricity } => {
                let r = (1.0 - eccentricity * eccentricity).sqrt();
                (omega.sin() + r * omega.cos().abs()) / (2.0 * (1.0 + r))
            }
        }
    }

    /// Cumulative distribution over ω, clamped outside [0, π).
    pub fn cdf(&self, omega: f64) -> f64 {
        if omega <= 0.0 {
            return 0.0;
        }
        if omega >= PI {
            return 1.0;
        }
        match self.shape {
            WindowShape::Circle => omega / PI,
            WindowShape::Interval => (1.0 - omega.cos()) / 2.0,
            WindowShape::Square => {
                if omega <= FRAC_PI_2 {
                    (1.0 - omega.cos() + omega.sin()) / 4.0
                } else {
                    0.5 + (1.0 - omega.cos() - omega.sin()) / 4.0
                }
            }
            WindowShape::Rectangle { eccentricity } => {
                let r = (1.0 - eccentricity * eccentricity).sqrt();
                let norm = 2.0 * (1.0 + r);
                if omega <= FRAC_PI_2 {
                    (1.0 - omega.cos() + r * omega.sin()) / norm
                } else {
                    0.5 + (r - omega.cos() - r * omega.sin()) / norm
                }
            }
        }
    }
}

/// Convenience wrapper for evaluating a window density in one call.
pub fn window_pdf(shape: WindowShape, omega: f64) -> Result<f64, AnalyticError> {
    WindowDensity::new(shape).map(|d| d.pdf(omega))
}

/// Conditional CDF of the maximum angle for one fixed line plus two random
/// restricted-range lines, by quadrature — the reference for scenarios
/// without a closed form (vertical x = 0, horizontal y = 0).
///
/// The inner integral over ω₃ is exact: for fixed (ω₁, ω₂) the admissible
/// ω₃-set where all three triangle angles stay below `a` is a union of up to
/// three intervals with endpoints linear in ω₂, whose probability mass comes
/// straight from the model CDF. The outer integral over ω₂ is adaptive
/// Simpson with panels split at the kink candidates.
///
/// For `fixed_omega = π/4` this reproduces both diagonal closed forms.
pub fn scenario_cdf_oracle(
    fixed_omega: f64,
    model: AngleModel,
    a: f64,
) -> Result<f64, QuadratureError> {
    assert!(
        model.range == AngleRange::Restricted,
        "the oracle covers restricted-range scenarios"
    );
    if a >= PI {
        return Ok(1.0);
    }
    if a <= PI / 3.0 {
        return Ok(0.0);
    }
    let (lo, hi) = model.bounds();
    let w1 = fixed_omega;

    // Probability mass of {ω₃ : max angle(w1, w2, ω₃) < a} under the model.
    let inner_mass = move |w2: f64| -> f64 {
        let s = w1.min(w2);
        let t = w1.max(w2);
        let b1 = s.clamp(lo, hi);
        let b2 = t.clamp(lo, hi);
        let mut mass = 0.0;
        let mut add = |piece_lo: f64, piece_hi: f64, lb: f64, ub: f64, ok: bool| {
            if !ok || piece_hi <= piece_lo {
                return;
            }
            let from = lb.max(piece_lo);
            let to = ub.min(piece_hi);
            if to > from {
                mass += model.cdf(to) - model.cdf(from);
            }
        };
        // ω₃ below both: angles (s − ω₃, t − s, π − t + ω₃).
        add(lo, b1, s - a, a - PI + t, t - s < a);
        // ω₃ between: angles (ω₃ − s, t − ω₃, π − (t − s)).
        add(b1, b2, t - a, s + a, PI - (t - s) < a);
        // ω₃ above both: angles (t − s, ω₃ − t, π − (ω₃ − s)).
        add(b2, hi, PI + s - a, t + a, t - s < a);
        mass
    };

    // Candidate kink locations of the outer integrand; extras are harmless.
    let breaks = [
        w1,
        w1 + a,
        w1 - a,
        w1 + (PI - a),
        w1 - (PI - a),
        lo + a,
        hi - a,
        PI + lo - a,
        PI + hi - a,
        a - PI + lo,
        a - PI + hi,
    ];
    let value = quadrature::integrate_with_breakpoints(
        |w2| inner_mass(w2) * model.pdf(w2),
        lo,
        hi,
        &breaks,
        1e-9,
    )?;
    Ok(value.clamp(0.0, 1.0))
}
