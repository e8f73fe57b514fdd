//! Random triangles from three random lines.
//!
//! A line is drawn by choosing an x-intercept ξ ~ Uniform[−1, 1] and an
//! inclination angle ω; three such lines almost surely bound a triangle.
//! Two competing models for ω — constant weighting and sine weighting (the
//! one consistent with the motion-invariant line measure) — lead to different
//! maximum-angle distributions and obtuse probabilities. This crate provides:
//!
//! - [`geometry`]: line charts (intercept and Hesse normal form), the
//!   transform between them, intersections, and triangle angles.
//! - [`sampling`]: inverse-CDF angle samplers, triangle scenarios, and
//!   window-hitting line sampling under the width measure.
//! - [`analytic`]: the closed-form maximum-angle densities for the six
//!   supported cases, window inclination densities, and a quadrature oracle
//!   for fixed-line scenarios without a closed form.
//! - [`montecarlo`]: a deterministic, worker-invariant simulation engine.
//! - [`stats`]: KS / chi-square goodness-of-fit tests and report building.

pub mod analytic;
pub mod geometry;
pub mod montecarlo;
pub mod quadrature;
pub mod rng;
pub mod sampling;
pub mod stats;

pub use analytic::{CaseId, ClosedFormDensity, WindowDensity, WindowShape};
pub use geometry::{HesseForm, InterceptForm, Point, TriangleAngles};
pub use montecarlo::{EmpiricalDistribution, SimulationConfig};
pub use rng::RngStream;
pub use sampling::{AngleModel, AngleRange, FixedLine, Scenario, Weighting, Window};
pub use stats::{Alpha, GofReport};
