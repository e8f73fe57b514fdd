//! Planar line representations and triangle-angle computation.
//!
//! Two charts describe a line:
//!
//! - **Intercept form** `(ξ, ω)`: x-intercept ξ and inclination angle
//!   ω ∈ [0, π) against the positive x-axis. Cannot represent horizontal
//!   lines (ω = 0 is admitted only as a fixed-scenario sentinel for y = 0).
//! - **Hesse normal form** `(p, θ)`: signed perpendicular distance p from the
//!   origin and normal direction θ ∈ [0, π), so the line is
//!   `x·cos θ + y·sin θ = p`.
//!
//! The chart-to-chart map is piecewise (using cos(ω ± π/2) = ∓sin ω):
//!
//! ```text
//! ω < π/2:  p = −ξ·sin ω,  θ = ω + π/2
//! ω ≥ π/2:  p =  ξ·sin ω,  θ = ω − π/2
//! ```
//!
//! Its 2×2 Jacobian determinant has magnitude sin ω, which is what turns a
//! uniform normal direction θ into the sin(ω)/2 inclination density.

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

/// Coincidence tolerance for inclination angles and for |sin Δω| in
/// intersection tests. These events have probability zero in the continuous
/// model; the tolerance only guards floating-point collisions.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    /// Horizontal line (θ = π/2): no unique x-intercept exists.
    #[error("degenerate line: theta = pi/2 has no x-intercept representation")]
    DegenerateLine,
    /// Two lines with |sin(ω₁ − ω₂)| below [`DEGENERACY_TOL`].
    #[error("parallel lines: |sin(omega_a - omega_b)| <= {DEGENERACY_TOL}")]
    ParallelLines,
    /// Two of three inclinations coincide within [`DEGENERACY_TOL`].
    #[error("degenerate triangle: coincident inclination angles")]
    DegenerateTriangle,
    /// Angles that do not form a triangle (sum ≠ π or a non-positive angle).
    #[error("invalid triangle angles: {0:?}")]
    InvalidAngles([f64; 3]),
}

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// Line through `(xi, 0)` with inclination `omega` ∈ [0, π).
///
/// `omega = π/2` encodes the vertical line x = xi. `omega = 0` is the
/// sentinel for the fixed horizontal line y = 0 (with `xi` ignored); it is
/// never produced by the samplers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterceptForm {
    xi: f64,
    omega: f64,
}

impl InterceptForm {
    /// Builds a line, reducing `omega` into [0, π).
    pub fn new(xi: f64, omega: f64) -> Self {
        let mut w = omega.rem_euclid(PI);
        if w >= PI {
            // rem_euclid can round up to the modulus itself.
            w = 0.0;
        }
        Self { xi, omega: w }
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Converts to Hesse normal form.
    ///
    /// The boundary ω = π/2 belongs to the second branch, so the vertical
    /// line x = ξ maps to (p, θ) = (ξ, 0).
    pub fn to_hesse(&self) -> HesseForm {
        let (xi, w) = (self.xi, self.omega);
        if w < FRAC_PI_2 {
            HesseForm {
                p: -xi * w.sin(),
                theta: w + FRAC_PI_2,
            }
        } else {
            HesseForm {
                p: xi * w.sin(),
                theta: w - FRAC_PI_2,
            }
        }
    }

    /// Inverse of [`InterceptForm::to_hesse`].
    ///
    /// Fails with [`GeometryError::DegenerateLine`] when θ is within
    /// [`DEGENERACY_TOL`] of π/2 (a horizontal line). Otherwise the
    /// inclination is θ − π/2 reduced into [0, π).
    pub fn from_hesse(h: &HesseForm) -> Result<Self, GeometryError> {
        if (h.theta - FRAC_PI_2).abs() <= DEGENERACY_TOL {
            return Err(GeometryError::DegenerateLine);
        }
        if h.theta > FRAC_PI_2 {
            let omega = h.theta - FRAC_PI_2;
            Ok(Self {
                xi: -h.p / omega.sin(),
                omega,
            })
        } else {
            let omega = h.theta + FRAC_PI_2;
            Ok(Self {
                xi: h.p / omega.sin(),
                omega,
            })
        }
    }

    /// |det J| of the (ξ, ω) ↦ (p, θ) transform at this line: sin ω.
    pub fn jacobian_magnitude(&self) -> f64 {
        self.omega.sin()
    }

    /// Signed residual of the line equation at `(x, y)`; zero on the line.
    pub fn residual(&self, x: f64, y: f64) -> f64 {
        let w = self.omega;
        w.sin() * (x - self.xi) - w.cos() * y
    }
}

/// Hesse normal form: the set of (x, y) with `x·cos θ + y·sin θ = p`,
/// p signed, θ ∈ [0, π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HesseForm {
    p: f64,
    theta: f64,
}

impl HesseForm {
    /// Builds a line, folding `theta` into [0, π) (each removed π flips the
    /// sign of `p`, which leaves the line unchanged).
    pub fn new(p: f64, theta: f64) -> Self {
        let mut t = theta.rem_euclid(2.0 * PI);
        let mut p = p;
        // rem_euclid can return the modulus itself for tiny negative inputs,
        // so up to two folds are needed.
        for _ in 0..2 {
            if t >= PI {
                t -= PI;
                p = -p;
            }
        }
        Self { p, theta: t }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Inclination of the line itself: θ + π/2 reduced into [0, π).
    pub fn inclination(&self) -> f64 {
        let w = self.theta + FRAC_PI_2;
        if w >= PI {
            w - PI
        } else {
            w
        }
    }

    /// Signed residual of `x·cos θ + y·sin θ − p`; zero on the line.
    pub fn residual(&self, x: f64, y: f64) -> f64 {
        x * self.theta.cos() + y * self.theta.sin() - self.p
    }
}

/// Intersection point of two lines.
///
/// Errors with [`GeometryError::ParallelLines`] when
/// |sin(ω_a − ω_b)| ≤ [`DEGENERACY_TOL`].
pub fn intersect(a: &InterceptForm, b: &InterceptForm) -> Result<Point, GeometryError> {
    let det = (b.omega - a.omega).sin();
    if det.abs() <= DEGENERACY_TOL {
        return Err(GeometryError::ParallelLines);
    }
    // Each line as x·sin ω − y·cos ω = ξ·sin ω; solve by Cramer's rule.
    let (sa, ca) = a.omega.sin_cos();
    let (sb, cb) = b.omega.sin_cos();
    let ra = a.xi * sa;
    let rb = b.xi * sb;
    Ok(Point {
        x: (rb * ca - ra * cb) / det,
        y: (rb * sa - ra * sb) / det,
    })
}

/// Interior angles of a triangle, each in (0, π), summing to π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleAngles {
    angles: [f64; 3],
}

impl TriangleAngles {
    /// Validates that the three values form genuine triangle angles.
    pub fn new(angles: [f64; 3]) -> Result<Self, GeometryError> {
        let sum: f64 = angles.iter().sum();
        if (sum - PI).abs() > 1e-9 || angles.iter().any(|&a| a <= 0.0) {
            return Err(GeometryError::InvalidAngles(angles));
        }
        Ok(Self { angles })
    }

    pub fn angles(&self) -> [f64; 3] {
        self.angles
    }

    /// The largest interior angle, always in [π/3, π).
    pub fn max_angle(&self) -> f64 {
        self.angles.iter().cloned().fold(f64::MIN, f64::max)
    }

    pub fn is_obtuse(&self) -> bool {
        self.max_angle() > FRAC_PI_2
    }
}

/// Triangle angles of the three lines with the given inclinations.
///
/// With the inclinations sorted as a ≤ b ≤ c the interior angles are
/// b − a, c − b and π − (c − a); intercepts do not enter. Inputs are reduced
/// into [0, π) first. Errors with [`GeometryError::DegenerateTriangle`] when
/// two inclinations coincide within [`DEGENERACY_TOL`].
pub fn angles_from_inclinations(w1: f64, w2: f64, w3: f64) -> Result<TriangleAngles, GeometryError> {
    let mut w = [
        w1.rem_euclid(PI),
        w2.rem_euclid(PI),
        w3.rem_euclid(PI),
    ];
    w.sort_unstable_by(|a, b| a.partial_cmp(b).expect("inclinations must not be NaN"));
    let [a, b, c] = w;
    if b - a <= DEGENERACY_TOL || c - b <= DEGENERACY_TOL {
        return Err(GeometryError::DegenerateTriangle);
    }
    Ok(TriangleAngles {
        angles: [b - a, c - b, PI - (c - a)],
    })
}
