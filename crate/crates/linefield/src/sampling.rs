//! Random lines, inclination-angle models, and triangle scenarios.
//!
//! Two competing inclination-angle models are supported, each over the full
//! range [0, π] or the restricted range [π/4, 3π/4]:
//!
//! - **Constant** weighting: ω uniform over its range.
//! - **Sine** weighting: density proportional to sin(ω), the model consistent
//!   with the motion-invariant line measure. Drawing uses the inverse-CDF
//!   maps ω = arccos(1 − 2u) (full) and ω = arccos((1 − 2u)/√2) (restricted).
//!
//! X-intercepts are uniform on [−1, 1] and independent of ω.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use thiserror::Error;

use crate::geometry::{angles_from_inclinations, HesseForm, InterceptForm, TriangleAngles};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("fixed-line scenarios use the restricted angle range")]
    FixedLineNeedsRestrictedRange,
}

/// How inclination angles are weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    Constant,
    Sine,
}

/// The range inclination angles are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleRange {
    /// [0, π]
    Full,
    /// [π/4, 3π/4] — all slopes of magnitude at least 1.
    Restricted,
}

/// A distribution of inclination angles: one of the four
/// weighting × range combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngleModel {
    pub weighting: Weighting,
    pub range: AngleRange,
}

impl AngleModel {
    pub const fn new(weighting: Weighting, range: AngleRange) -> Self {
        Self { weighting, range }
    }

    pub fn bounds(&self) -> (f64, f64) {
        match self.range {
            AngleRange::Full => (0.0, PI),
            AngleRange::Restricted => (FRAC_PI_4, 3.0 * FRAC_PI_4),
        }
    }

    /// Density of ω; zero outside the range.
    pub fn pdf(&self, omega: f64) -> f64 {
        let (lo, hi) = self.bounds();
        if omega < lo || omega > hi {
            return 0.0;
        }
        match (self.weighting, self.range) {
            (Weighting::Constant, AngleRange::Full) => 1.0 / PI,
            (Weighting::Constant, AngleRange::Restricted) => 2.0 / PI,
            (Weighting::Sine, AngleRange::Full) => omega.sin() / 2.0,
            (Weighting::Sine, AngleRange::Restricted) => omega.sin() * FRAC_1_SQRT_2,
        }
    }

    /// Cumulative distribution of ω, clamped to [0, 1] outside the range.
    pub fn cdf(&self, omega: f64) -> f64 {
        let (lo, hi) = self.bounds();
        if omega <= lo {
            return 0.0;
        }
        if omega >= hi {
            return 1.0;
        }
        match (self.weighting, self.range) {
            (Weighting::Constant, AngleRange::Full) => omega / PI,
            (Weighting::Constant, AngleRange::Restricted) => (omega - FRAC_PI_4) * 2.0 / PI,
            (Weighting::Sine, AngleRange::Full) => (1.0 - omega.cos()) / 2.0,
            (Weighting::Sine, AngleRange::Restricted) => 0.5 - omega.cos() * FRAC_1_SQRT_2,
        }
    }

    /// Inverse CDF: maps u ∈ [0, 1] onto the range, nondecreasing in u.
    ///
    /// Pushing Uniform[0,1] through this map realizes the model's density.
    pub fn inv_cdf(&self, u: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&u));
        match (self.weighting, self.range) {
            (Weighting::Constant, AngleRange::Full) => u * PI,
            (Weighting::Constant, AngleRange::Restricted) => FRAC_PI_4 + u * FRAC_PI_2,
            (Weighting::Sine, AngleRange::Full) => (1.0 - 2.0 * u).clamp(-1.0, 1.0).acos(),
            (Weighting::Sine, AngleRange::Restricted) => {
                ((1.0 - 2.0 * u) * FRAC_1_SQRT_2).clamp(-1.0, 1.0).acos()
            }
        }
    }
}

/// The four supported fixed lines of the one-fixed-two-random scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedLine {
    /// y = x
    Diagonal,
    /// y = −x
    AntiDiagonal,
    /// x = 0
    Vertical,
    /// y = 0 (the ω = 0 sentinel; y = 0 has no x-intercept chart).
    Horizontal,
}

impl FixedLine {
    pub fn inclination(&self) -> f64 {
        match self {
            FixedLine::Diagonal => FRAC_PI_4,
            FixedLine::AntiDiagonal => 3.0 * FRAC_PI_4,
            FixedLine::Vertical => FRAC_PI_2,
            FixedLine::Horizontal => 0.0,
        }
    }

    pub fn line(&self) -> InterceptForm {
        InterceptForm::new(0.0, self.inclination())
    }
}

/// A triangle-generation experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    /// Three independent random lines under one angle model.
    ThreeRandom(AngleModel),
    /// One fixed line plus two random lines; the random lines always use the
    /// restricted range.
    OneFixed { fixed: FixedLine, model: AngleModel },
}

impl Scenario {
    pub fn one_fixed(fixed: FixedLine, weighting: Weighting) -> Self {
        Scenario::OneFixed {
            fixed,
            model: AngleModel::new(weighting, AngleRange::Restricted),
        }
    }

    pub fn model(&self) -> AngleModel {
        match self {
            Scenario::ThreeRandom(m) => *m,
            Scenario::OneFixed { model, .. } => *model,
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        match self {
            Scenario::ThreeRandom(_) => Ok(()),
            Scenario::OneFixed { model, .. } => {
                if model.range == AngleRange::Restricted {
                    Ok(())
                } else {
                    Err(ScenarioError::FixedLineNeedsRestrictedRange)
                }
            }
        }
    }

    /// The interval the scenario's maximum angle lives on.
    ///
    /// Restricted-range triples keep the largest inclination gap at most π/2,
    /// forcing an obtuse (or right) triangle; the horizontal fixed line sits
    /// outside the restricted range, so equilateral triangles reappear.
    pub fn max_angle_support(&self) -> (f64, f64) {
        match self {
            Scenario::ThreeRandom(model) => match model.range {
                AngleRange::Full => (PI / 3.0, PI),
                AngleRange::Restricted => (FRAC_PI_2, PI),
            },
            Scenario::OneFixed { fixed, .. } => match fixed {
                FixedLine::Horizontal => (PI / 3.0, PI),
                _ => (FRAC_PI_2, PI),
            },
        }
    }
}

/// One triangle draw plus the number of degenerate draws discarded on the way.
#[derive(Debug, Clone, Copy)]
pub struct TriangleDraw {
    pub angles: TriangleAngles,
    pub resamples: u64,
}

fn line_from_uniforms(model: AngleModel, u_xi: f64, u_omega: f64) -> InterceptForm {
    InterceptForm::new(2.0 * u_xi - 1.0, model.inv_cdf(u_omega))
}

/// Draws one random line: ξ = 2u₁ − 1 and ω = inv_cdf(u₂) from two
/// independent uniforms.
pub fn sample_line(model: AngleModel, rng: &mut RngStream) -> InterceptForm {
    let u_xi = rng.next_uniform();
    let u_omega = rng.next_uniform();
    line_from_uniforms(model, u_xi, u_omega)
}

/// Whether a sampled inclination is clear of the unrepresentable
/// ω ∈ {0, π} boundary. Fixed-scenario sentinels bypass this check.
fn sampled_inclination_ok(omega: f64) -> bool {
    omega > 1e-12 && omega < PI - 1e-12
}

/// Samples one triangle under the scenario, resampling degenerate draws
/// (coincident or boundary inclinations) rather than surfacing them.
pub fn sample_triangle(scenario: &Scenario, rng: &mut RngStream) -> TriangleDraw {
    let mut resamples = 0u64;
    loop {
        let (w, sampled_from) = match scenario {
            Scenario::ThreeRandom(model) => (
                [
                    sample_line(*model, rng).omega(),
                    sample_line(*model, rng).omega(),
                    sample_line(*model, rng).omega(),
                ],
                0,
            ),
            Scenario::OneFixed { fixed, model } => (
                [
                    fixed.inclination(),
                    sample_line(*model, rng).omega(),
                    sample_line(*model, rng).omega(),
                ],
                1,
            ),
        };
        if w[sampled_from..].iter().all(|&x| sampled_inclination_ok(x)) {
            if let Ok(angles) = angles_from_inclinations(w[0], w[1], w[2]) {
                return TriangleDraw { angles, resamples };
            }
        }
        resamples += 1;
    }
}

/// A convex sampling window centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    Circle { radius: f64 },
    Square { half_side: f64 },
    /// [−half_width, half_width] × [−half_height, half_height];
    /// `half_height = 0` degenerates to the x-axis interval.
    Rectangle { half_width: f64, half_height: f64 },
}

impl Window {
    pub fn circle(radius: f64) -> Self {
        assert!(radius > 0.0, "circle radius must be positive");
        Window::Circle { radius }
    }

    pub fn square(half_side: f64) -> Self {
        assert!(half_side > 0.0, "square half-side must be positive");
        Window::Square { half_side }
    }

    pub fn rectangle(half_width: f64, half_height: f64) -> Self {
        assert!(
            half_width > 0.0 && half_height >= 0.0,
            "rectangle needs half_width > 0 and half_height >= 0"
        );
        Window::Rectangle {
            half_width,
            half_height,
        }
    }

    /// The interval [−1, 1] on the x-axis as a degenerate rectangle.
    pub fn unit_interval() -> Self {
        Window::Rectangle {
            half_width: 1.0,
            half_height: 0.0,
        }
    }

    /// Support function h(θ): lines with normal angle θ hit the window
    /// exactly for p ∈ [−h(θ), h(θ)]; the width in direction θ is 2h(θ).
    pub fn support(&self, theta: f64) -> f64 {
        match *self {
            Window::Circle { radius } => radius,
            Window::Square { half_side } => half_side * (theta.cos().abs() + theta.sin().abs()),
            Window::Rectangle {
                half_width,
                half_height,
            } => half_width * theta.cos().abs() + half_height * theta.sin().abs(),
        }
    }

    fn max_support(&self) -> f64 {
        match *self {
            Window::Circle { radius } => radius,
            Window::Square { half_side } => half_side * std::f64::consts::SQRT_2,
            Window::Rectangle {
                half_width,
                half_height,
            } => (half_width * half_width + half_height * half_height).sqrt(),
        }
    }

    /// Whether the line intersects the window (closed, with a hair of slack
    /// for the tangent case).
    pub fn hits(&self, line: &HesseForm) -> bool {
        line.p().abs() <= self.support(line.theta()) * (1.0 + 1e-12) + 1e-300
    }
}

/// Draws a line uniformly with respect to dp·dθ restricted to lines hitting
/// the window.
///
/// The normal angle θ is drawn with density proportional to the window width
/// 2h(θ) by rejection against the constant envelope max 2h, then p is uniform
/// over the hit interval [−h(θ), h(θ)]. For a circle the width is constant
/// and every proposal is accepted.
pub fn sample_window_line(window: &Window, rng: &mut RngStream) -> HesseForm {
    let max_h = window.max_support();
    loop {
        let theta = rng.next_uniform() * PI;
        let h = window.support(theta);
        if rng.next_uniform() * max_h <= h {
            let p = rng.next_uniform_in(-h, h);
            return HesseForm::new(p, theta);
        }
    }
}
