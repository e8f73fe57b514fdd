//! Goodness-of-fit machinery: Kolmogorov–Smirnov and chi-square tests plus a
//! binomial z-score for the obtuse probability, bundled into a [`GofReport`].
//!
//! Thresholds are the asymptotic KS critical values c(α)/√n; every consumer
//! in this crate runs at n ≥ 10⁴ where the asymptotic regime is a good fit.

use std::f64::consts::FRAC_PI_2;

use thiserror::Error;

use crate::analytic::ClosedFormDensity;
use crate::montecarlo::EmpiricalDistribution;
use crate::quadrature;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("empty sample")]
    EmptySample,
    #[error("samples were not retained by the simulation")]
    SamplesNotRetained,
    #[error("asymptotic KS thresholds need n >= 50, got {0}")]
    SmallSample(usize),
    #[error("fewer than 2 bins remain after merging low-expectation bins")]
    DegenerateBins,
    #[error("obtuse z-score is undefined for p in {{0, 1}}; compare counts exactly")]
    DegenerateP,
}

/// Supported significance levels for the KS threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alpha {
    P05,
    P01,
    P001,
}

impl Alpha {
    pub fn value(&self) -> f64 {
        match self {
            Alpha::P05 => 0.05,
            Alpha::P01 => 0.01,
            Alpha::P001 => 0.001,
        }
    }

    /// Asymptotic critical coefficient c(α) with P(D > c/√n) ≈ α.
    pub fn coefficient(&self) -> f64 {
        match self {
            Alpha::P05 => 1.358,
            Alpha::P01 => 1.628,
            Alpha::P001 => 1.949,
        }
    }
}

/// Kolmogorov–Smirnov statistic of sorted `samples` against a reference CDF:
/// D = max_i max(i/n − F(xᵢ), F(xᵢ) − (i−1)/n).
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::EmptySample);
    }
    debug_assert!(
        samples.windows(2).all(|w| w[0] <= w[1]),
        "samples must be sorted ascending"
    );
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d = d.max(above).max(below);
    }
    Ok(d)
}

/// Asymptotic KS acceptance threshold c(α)/√n; requires n ≥ 50.
pub fn ks_threshold(n: usize, alpha: Alpha) -> Result<f64, StatsError> {
    if n < 50 {
        return Err(StatsError::SmallSample(n));
    }
    Ok(alpha.coefficient() / (n as f64).sqrt())
}

/// χ² statistic of the histogram against expected bin masses obtained by
/// quadrature of `pdf` over each bin. Adjacent bins are merged left to right
/// until each group's expectation reaches 5; degrees of freedom are
/// `groups − 1`.
pub fn chi_square<F: Fn(f64) -> f64>(
    e: &EmpiricalDistribution,
    pdf: F,
) -> Result<(f64, usize), StatsError> {
    let edges = e.edges();
    let n = e.n() as f64;
    let expected: Vec<f64> = edges
        .windows(2)
        .map(|w| {
            n * quadrature::integrate_with_breakpoints(&pdf, w[0], w[1], &[FRAC_PI_2], 1e-10)
                .expect("bin integrand is smooth")
        })
        .collect();
    chi_square_grouped(e.counts(), &expected)
}

/// χ² statistic with expected bin masses taken from CDF differences — for
/// references that only expose a CDF (the scenario oracle).
pub fn chi_square_from_cdf<F: Fn(f64) -> f64>(
    e: &EmpiricalDistribution,
    cdf: F,
) -> Result<(f64, usize), StatsError> {
    let n = e.n() as f64;
    let expected: Vec<f64> = e
        .edges()
        .windows(2)
        .map(|w| n * (cdf(w[1]) - cdf(w[0])))
        .collect();
    chi_square_grouped(e.counts(), &expected)
}

const MIN_EXPECTED_PER_GROUP: f64 = 5.0;

fn chi_square_grouped(counts: &[u64], expected: &[f64]) -> Result<(f64, usize), StatsError> {
    let mut groups: Vec<(f64, f64)> = Vec::new();
    let mut acc_obs = 0.0;
    let mut acc_exp = 0.0;
    for (&c, &x) in counts.iter().zip(expected) {
        acc_obs += c as f64;
        acc_exp += x;
        if acc_exp >= MIN_EXPECTED_PER_GROUP {
            groups.push((acc_obs, acc_exp));
            acc_obs = 0.0;
            acc_exp = 0.0;
        }
    }
    // Fold a low-expectation tail into the last group.
    if acc_exp > 0.0 || acc_obs > 0.0 {
        match groups.last_mut() {
            Some(last) => {
                last.0 += acc_obs;
                last.1 += acc_exp;
            }
            None => groups.push((acc_obs, acc_exp)),
        }
    }
    if groups.len() < 2 {
        return Err(StatsError::DegenerateBins);
    }
    let statistic = groups
        .iter()
        .map(|(obs, exp)| {
            let d = obs - exp;
            d * d / exp
        })
        .sum();
    Ok((statistic, groups.len() - 1))
}

/// Binomial z-score of the empirical obtuse fraction against probability `p`:
/// (k/n − p) / √(p(1−p)/n). Undefined for p ∈ {0, 1} (compare counts exactly
/// in the almost-surely-obtuse cases).
pub fn obtuse_z(e: &EmpiricalDistribution, p: f64) -> Result<f64, StatsError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(StatsError::DegenerateP);
    }
    let n = e.n() as f64;
    let fraction = e.obtuse_count() as f64 / n;
    Ok((fraction - p) / (p * (1.0 - p) / n).sqrt())
}

/// Quantified comparison of an empirical distribution against a reference.
///
/// `pass` means the KS statistic is under its threshold and, when an obtuse
/// probability applies, the obtuse check holds (|z| < 3, or an exact count
/// match for p ∈ {0, 1}).
#[derive(Debug, Clone, PartialEq)]
pub struct GofReport {
    pub ks_statistic: f64,
    pub ks_threshold: f64,
    pub chi2_statistic: f64,
    pub chi2_dof: usize,
    pub obtuse_empirical: Option<f64>,
    pub obtuse_analytic: Option<f64>,
    pub obtuse_z: Option<f64>,
    pub pass: bool,
}

impl GofReport {
    /// Report against one of the closed-form maximum-angle densities.
    pub fn against_density(
        e: &EmpiricalDistribution,
        density: &ClosedFormDensity,
        alpha: Alpha,
    ) -> Result<Self, StatsError> {
        let samples = e.samples().ok_or(StatsError::SamplesNotRetained)?;
        let ks = ks_statistic(samples, |a| density.cdf(a))?;
        let threshold = ks_threshold(samples.len(), alpha)?;
        let (chi2, dof) = chi_square(e, |a| density.pdf(a))?;
        Ok(Self::assemble(
            e,
            ks,
            threshold,
            chi2,
            dof,
            Some(density.obtuse_probability()),
        ))
    }

    /// Report against an arbitrary reference CDF (oracle-backed scenarios and
    /// window densities; pass `obtuse_analytic: None` when obtuseness does
    /// not apply).
    pub fn against_cdf<F: Fn(f64) -> f64>(
        e: &EmpiricalDistribution,
        cdf: F,
        obtuse_analytic: Option<f64>,
        alpha: Alpha,
    ) -> Result<Self, StatsError> {
        let samples = e.samples().ok_or(StatsError::SamplesNotRetained)?;
        let ks = ks_statistic(samples, &cdf)?;
        let threshold = ks_threshold(samples.len(), alpha)?;
        let (chi2, dof) = chi_square_from_cdf(e, &cdf)?;
        Ok(Self::assemble(e, ks, threshold, chi2, dof, obtuse_analytic))
    }

    fn assemble(
        e: &EmpiricalDistribution,
        ks: f64,
        threshold: f64,
        chi2: f64,
        dof: usize,
        obtuse_analytic: Option<f64>,
    ) -> Self {
        let ks_ok = ks < threshold;
        let (obtuse_empirical, obtuse_z_value, obtuse_ok) = match obtuse_analytic {
            None => (None, None, true),
            Some(p) if p <= 0.0 => {
                (Some(e.obtuse_fraction()), None, e.obtuse_count() == 0)
            }
            Some(p) if p >= 1.0 => {
                (Some(e.obtuse_fraction()), None, e.obtuse_count() == e.n())
            }
            Some(p) => {
                let z = obtuse_z(e, p).expect("p is interior");
                (Some(e.obtuse_fraction()), Some(z), z.abs() < 3.0)
            }
        };
        Self {
            ks_statistic: ks,
            ks_threshold: threshold,
            chi2_statistic: chi2,
            chi2_dof: dof,
            obtuse_empirical,
            obtuse_analytic,
            obtuse_z: obtuse_z_value,
            pass: ks_ok && obtuse_ok,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::CaseId;
    use crate::montecarlo::{run, SimulationConfig};
    use std::f64::consts::PI;

    #[test]
    fn ks_of_perfect_quantile_sample() {
        // Samples at the (i − ½)/n quantiles of the uniform CDF on [0, 1].
        let n = 100;
        let samples: Vec<f64> = (1..=n).map(|i| (i as f64 - 0.5) / n as f64).collect();
        let d = ks_statistic(&samples, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((d - 1.0 / (2.0 * n as f64)).abs() < 1e-12);
    }

    #[test]
    fn ks_of_single_median_sample() {
        let d = ks_statistic(&[0.5], |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ks_rejects_empty_sample() {
        assert_eq!(ks_statistic(&[], |x| x), Err(StatsError::EmptySample));
    }

    #[test]
    fn ks_fits_case_a_simulation() {
        let e = run(&SimulationConfig::new(CaseId::A.scenario(), 100_000, 7)
            .with_retained_samples())
        .unwrap();
        let density = ClosedFormDensity::new(CaseId::A);
        let d = ks_statistic(e.samples().unwrap(), |a| density.cdf(a)).unwrap();
        assert!(d < 1.95 / (1e5_f64).sqrt(), "D = {d}");
    }

    #[test]
    fn ks_is_invariant_under_monotone_reparameterization() {
        let e = run(&SimulationConfig::new(CaseId::A.scenario(), 20_000, 3)
            .with_retained_samples())
        .unwrap();
        let density = ClosedFormDensity::new(CaseId::A);
        let d_raw = ks_statistic(e.samples().unwrap(), |a| density.cdf(a)).unwrap();
        // Transform samples by a ↦ a³ (strictly increasing on the support)
        // and the reference CDF accordingly.
        let cubed: Vec<f64> = e.samples().unwrap().iter().map(|a| a * a * a).collect();
        let d_cubed = ks_statistic(&cubed, |y| density.cdf(y.cbrt())).unwrap();
        assert!((d_raw - d_cubed).abs() < 1e-12);
    }

    #[test]
    fn ks_threshold_values() {
        assert!((ks_threshold(10_000, Alpha::P01).unwrap() - 0.01628).abs() < 1e-12);
        assert!((ks_threshold(1_000_000, Alpha::P001).unwrap() - 0.001949).abs() < 1e-12);
        assert_eq!(ks_threshold(49, Alpha::P05), Err(StatsError::SmallSample(49)));
        assert!(ks_threshold(50, Alpha::P05).is_ok());
    }

    #[test]
    fn ks_calibration_rejects_at_the_nominal_rate() {
        // 200 independent case-A runs at n = 1e4: the α = 0.05 test should
        // reject roughly 10 of them (99.9% binomial band: 2 to 25).
        let density = ClosedFormDensity::new(CaseId::A);
        let mut rejections = 0;
        for seed in 0..200u64 {
            let e = run(&SimulationConfig::new(CaseId::A.scenario(), 10_000, seed)
                .with_retained_samples())
            .unwrap();
            let d = ks_statistic(e.samples().unwrap(), |a| density.cdf(a)).unwrap();
            if d >= ks_threshold(10_000, Alpha::P05).unwrap() {
                rejections += 1;
            }
        }
        assert!(
            (2..=25).contains(&rejections),
            "rejections = {rejections}, expected near 10"
        );
    }

    #[test]
    fn chi_square_zero_iff_exact_match() {
        // Uniform density over [0, 1] with counts set exactly to expectations.
        let edges: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let counts = vec![100u64; 10];
        let e = EmpiricalDistribution::from_parts(edges.clone(), counts, 0);
        let (stat, dof) = chi_square(&e, |_| 1.0).unwrap();
        assert!(stat.abs() < 1e-18, "stat = {stat}");
        assert_eq!(dof, 9);

        let mut skewed = vec![100u64; 10];
        skewed[0] += 1;
        skewed[9] -= 1;
        let e = EmpiricalDistribution::from_parts(edges, skewed, 0);
        let (stat, _) = chi_square(&e, |_| 1.0).unwrap();
        assert!(stat > 0.0);
    }

    #[test]
    fn chi_square_case_d_within_sampling_band() {
        let e = run(&SimulationConfig::new(CaseId::D.scenario(), 1_000_000, 11)).unwrap();
        let density = ClosedFormDensity::new(CaseId::D);
        let (stat, dof) = chi_square(&e, |a| density.pdf(a)).unwrap();
        let dof_f = dof as f64;
        let spread = 4.0 * (2.0 * dof_f).sqrt();
        assert!(
            stat > dof_f - spread && stat < dof_f + spread,
            "chi2 = {stat}, dof = {dof}"
        );
    }

    #[test]
    fn chi_square_merges_into_degenerate_bins() {
        // Tiny sample against a uniform expectation: every group merge ends
        // in a single bin, which is not testable.
        let edges: Vec<f64> = (0..=4).map(|i| i as f64 / 4.0).collect();
        let e = EmpiricalDistribution::from_parts(edges, vec![6, 0, 0, 0], 0);
        assert_eq!(chi_square(&e, |_| 1.0), Err(StatsError::DegenerateBins));
    }

    #[test]
    fn obtuse_z_zero_at_exact_expectation() {
        let edges: Vec<f64> = (0..=4).map(|i| PI / 3.0 + i as f64 * 0.1).collect();
        let e = EmpiricalDistribution::from_parts(edges, vec![250, 250, 250, 250], 750);
        let z = obtuse_z(&e, 0.75).unwrap();
        assert_eq!(z, 0.0);
    }

    #[test]
    fn obtuse_z_case_a_and_c_within_three_sigma() {
        for (case, p) in [(CaseId::A, 0.75), (CaseId::C, 2.0 - 3.0 * PI / 8.0)] {
            let e = run(&SimulationConfig::new(case.scenario(), 1_000_000, 7)).unwrap();
            let z = obtuse_z(&e, p).unwrap();
            assert!(z.abs() < 3.0, "{case:?}: z = {z}");
        }
    }

    #[test]
    fn obtuse_z_rejects_degenerate_p() {
        let edges: Vec<f64> = (0..=4).map(|i| i as f64).collect();
        let e = EmpiricalDistribution::from_parts(edges, vec![1, 1, 1, 1], 4);
        assert_eq!(obtuse_z(&e, 1.0), Err(StatsError::DegenerateP));
        assert_eq!(obtuse_z(&e, 0.0), Err(StatsError::DegenerateP));
    }

    #[test]
    fn gof_report_passes_for_pinned_case_d() {
        let e = run(&SimulationConfig::new(CaseId::D.scenario(), 100_000, 11)
            .with_retained_samples())
        .unwrap();
        let density = ClosedFormDensity::new(CaseId::D);
        let report = GofReport::against_density(&e, &density, Alpha::P001).unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.obtuse_analytic, Some(1.0));
        assert_eq!(report.obtuse_z, None);
        assert_eq!(report.obtuse_empirical, Some(1.0));
    }

    #[test]
    fn gof_report_needs_samples() {
        let e = run(&SimulationConfig::new(CaseId::D.scenario(), 1_000, 11)).unwrap();
        let density = ClosedFormDensity::new(CaseId::D);
        assert_eq!(
            GofReport::against_density(&e, &density, Alpha::P001),
            Err(StatsError::SamplesNotRetained)
        );
    }

    #[test]
    fn gof_report_without_obtuse_target() {
        let e = run(&SimulationConfig::new(CaseId::A.scenario(), 50_000, 13)
            .with_retained_samples())
        .unwrap();
        let density = ClosedFormDensity::new(CaseId::A);
        let report = GofReport::against_cdf(&e, |a| density.cdf(a), None, Alpha::P001).unwrap();
        assert!(report.pass);
        assert_eq!(report.obtuse_empirical, None);
        assert_eq!(report.obtuse_z, None);
    }
}
