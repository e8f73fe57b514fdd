//! Simulation engine: empirical maximum-angle distributions at scale.
//!
//! Reproducibility contract: sample `i` of a run is drawn from RNG substream
//! `stream_offset + i` of the seed, so results depend only on
//! `(seed, n, scenario)` — never on how samples are partitioned across
//! workers. Shards simulated separately with matching offsets merge into
//! exactly the single-threaded result.

use std::f64::consts::FRAC_PI_2;
use std::ops::Range;

use thiserror::Error;

use crate::rng::RngStream;
use crate::sampling::{sample_triangle, Scenario, ScenarioError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("sample count must be at least 1")]
    ZeroSamples,
    #[error("at least 4 histogram bins are required, got {0}")]
    TooFewBins(usize),
    #[error("worker count must be at least 1")]
    ZeroWorkers,
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistributionError {
    #[error("cannot merge distributions with different bin edges")]
    BinMismatch,
    #[error("samples were not retained; re-run with retain_samples")]
    SamplesNotRetained,
}

/// Parameters of one simulation run.
#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub scenario: Scenario,
    pub n: u64,
    pub seed: u64,
    pub bins: usize,
    pub retain_samples: bool,
    pub workers: usize,
    /// Global index of the first sample; lets shards of a larger run be
    /// simulated independently and merged.
    pub stream_offset: u64,
}

impl SimulationConfig {
    pub fn new(scenario: Scenario, n: u64, seed: u64) -> Self {
        Self {
            scenario,
            n,
            seed,
            bins: 64,
            retain_samples: false,
            workers: 1,
            stream_offset: 0,
        }
    }

    pub fn with_bins(mut self, bins: usize) -> Self {
        self.bins = bins;
        self
    }

    pub fn with_retained_samples(mut self) -> Self {
        self.retain_samples = true;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_stream_offset(mut self, offset: u64) -> Self {
        self.stream_offset = offset;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n == 0 {
            return Err(ConfigError::ZeroSamples);
        }
        if self.bins < 4 {
            return Err(ConfigError::TooFewBins(self.bins));
        }
        if self.workers == 0 {
            return Err(ConfigError::ZeroWorkers);
        }
        self.scenario.validate()?;
        Ok(())
    }
}

/// Histogram (plus optionally the raw samples) of simulated maximum angles.
///
/// Bin edges span the scenario's analytic support. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    n: u64,
    edges: Vec<f64>,
    counts: Vec<u64>,
    obtuse_count: u64,
    degenerate_resamples: u64,
    sorted_samples: Option<Vec<f64>>,
}

impl EmpiricalDistribution {
    /// An empty distribution over the given edges, the identity for
    /// [`EmpiricalDistribution::merge`].
    pub fn empty(edges: Vec<f64>, retain_samples: bool) -> Self {
        assert!(edges.len() >= 2, "need at least one bin");
        let bins = edges.len() - 1;
        Self {
            n: 0,
            edges,
            counts: vec![0; bins],
            obtuse_count: 0,
            degenerate_resamples: 0,
            sorted_samples: retain_samples.then(Vec::new),
        }
    }

    #[cfg(test)]
    pub(crate) fn from_parts(edges: Vec<f64>, counts: Vec<u64>, obtuse_count: u64) -> Self {
        let n = counts.iter().sum();
        Self {
            n,
            edges,
            counts,
            obtuse_count,
            degenerate_resamples: 0,
            sorted_samples: None,
        }
    }

    /// Histograms externally produced samples over the given edges (values
    /// outside the edge range land in the boundary bins). Samples are
    /// retained sorted, so the result supports the goodness-of-fit machinery.
    pub fn from_samples(edges: Vec<f64>, mut samples: Vec<f64>) -> Self {
        assert!(edges.len() >= 2, "need at least one bin");
        assert!(!samples.is_empty(), "need at least one sample");
        let bins = edges.len() - 1;
        let (lo, hi) = (edges[0], edges[bins]);
        let scale = bins as f64 / (hi - lo);
        let mut counts = vec![0u64; bins];
        let mut obtuse = 0u64;
        for &x in &samples {
            let idx = (((x - lo) * scale) as usize).min(bins - 1);
            counts[idx] += 1;
            if x > FRAC_PI_2 {
                obtuse += 1;
            }
        }
        samples.sort_unstable_by(f64::total_cmp);
        Self {
            n: samples.len() as u64,
            edges,
            counts,
            obtuse_count: obtuse,
            degenerate_resamples: 0,
            sorted_samples: Some(samples),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Bin edges, `bins + 1` of them, strictly increasing.
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Samples with maximum angle strictly above π/2.
    pub fn obtuse_count(&self) -> u64 {
        self.obtuse_count
    }

    pub fn degenerate_resamples(&self) -> u64 {
        self.degenerate_resamples
    }

    pub fn samples(&self) -> Option<&[f64]> {
        self.sorted_samples.as_deref()
    }

    pub fn obtuse_fraction(&self) -> f64 {
        self.obtuse_count as f64 / self.n as f64
    }

    /// Fraction of samples ≤ `a` (right-continuous step function).
    pub fn empirical_cdf(&self, a: f64) -> Result<f64, DistributionError> {
        let samples = self
            .sorted_samples
            .as_ref()
            .ok_or(DistributionError::SamplesNotRetained)?;
        let below = samples.partition_point(|&x| x <= a);
        Ok(below as f64 / self.n as f64)
    }

    /// Combines two shards; counts, sample counts and counters add.
    /// Associative and commutative. Requires identical bin edges.
    pub fn merge(&self, other: &Self) -> Result<Self, DistributionError> {
        if self.edges.len() != other.edges.len()
            || self.edges.iter().zip(&other.edges).any(|(a, b)| a != b)
        {
            return Err(DistributionError::BinMismatch);
        }
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(a, b)| a + b)
            .collect();
        let sorted_samples = match (&self.sorted_samples, &other.sorted_samples) {
            (Some(a), Some(b)) => {
                let mut all = Vec::with_capacity(a.len() + b.len());
                all.extend_from_slice(a);
                all.extend_from_slice(b);
                all.sort_unstable_by(f64::total_cmp);
                Some(all)
            }
            _ => None,
        };
        Ok(Self {
            n: self.n + other.n,
            edges: self.edges.clone(),
            counts,
            obtuse_count: self.obtuse_count + other.obtuse_count,
            degenerate_resamples: self.degenerate_resamples + other.degenerate_resamples,
            sorted_samples,
        })
    }
}

struct Accumulator {
    counts: Vec<u64>,
    obtuse: u64,
    resamples: u64,
    samples: Option<Vec<f64>>,
}

fn simulate_range(
    scenario: &Scenario,
    base: &RngStream,
    range: Range<u64>,
    lo: f64,
    hi: f64,
    bins: usize,
    retain: bool,
) -> Accumulator {
    let mut acc = Accumulator {
        counts: vec![0; bins],
        obtuse: 0,
        resamples: 0,
        samples: retain.then(|| Vec::with_capacity((range.end - range.start) as usize)),
    };
    let scale = bins as f64 / (hi - lo);
    for i in range {
        let mut stream = base.substream(i);
        let draw = sample_triangle(scenario, &mut stream);
        let alpha = draw.angles.max_angle();
        acc.resamples += draw.resamples;
        if alpha > FRAC_PI_2 {
            acc.obtuse += 1;
        }
        let idx = (((alpha - lo) * scale) as usize).min(bins - 1);
        acc.counts[idx] += 1;
        if let Some(samples) = &mut acc.samples {
            samples.push(alpha);
        }
    }
    acc
}

/// Runs the simulation described by `config`.
///
/// The result is identical for a fixed `(seed, n, scenario, stream_offset)`
/// no matter how many workers execute it.
pub fn run(config: &SimulationConfig) -> Result<EmpiricalDistribution, ConfigError> {
    config.validate()?;
    let (lo, hi) = config.scenario.max_angle_support();
    let bins = config.bins;
    let edges: Vec<f64> = (0..=bins)
        .map(|i| lo + (hi - lo) * i as f64 / bins as f64)
        .collect();
    let base = RngStream::new(config.seed, 0);
    let first = config.stream_offset;
    let last = config.stream_offset + config.n;

    let accumulators: Vec<Accumulator> = if config.workers == 1 {
        vec![simulate_range(
            &config.scenario,
            &base,
            first..last,
            lo,
            hi,
            bins,
            config.retain_samples,
        )]
    } else {
        let chunk = config.n.div_ceil(config.workers as u64);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..config.workers as u64)
                .map(|w| {
                    let start = (first + w * chunk).min(last);
                    let end = (first + (w + 1) * chunk).min(last);
                    let base = &base;
                    let scenario = &config.scenario;
                    let retain = config.retain_samples;
                    scope.spawn(move || {
                        simulate_range(scenario, base, start..end, lo, hi, bins, retain)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("simulation worker panicked"))
                .collect()
        })
    };

    let mut counts = vec![0u64; bins];
    let mut obtuse = 0u64;
    let mut resamples = 0u64;
    let mut samples = config.retain_samples.then(|| Vec::with_capacity(config.n as usize));
    for acc in accumulators {
        for (total, c) in counts.iter_mut().zip(&acc.counts) {
            *total += c;
        }
        obtuse += acc.obtuse;
        resamples += acc.resamples;
        if let (Some(all), Some(part)) = (&mut samples, acc.samples) {
            all.extend(part);
        }
    }
    if let Some(all) = &mut samples {
        all.sort_unstable_by(f64::total_cmp);
    }

    Ok(EmpiricalDistribution {
        n: config.n,
        edges,
        counts,
        obtuse_count: obtuse,
        degenerate_resamples: resamples,
        sorted_samples: samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::CaseId;
    use std::f64::consts::PI;

    #[test]
    fn zero_samples_rejected_at_validation() {
        let config = SimulationConfig::new(CaseId::A.scenario(), 0, 1);
        assert_eq!(config.validate(), Err(ConfigError::ZeroSamples));
        assert!(run(&config).is_err());
    }

    #[test]
    fn too_few_bins_rejected() {
        let config = SimulationConfig::new(CaseId::A.scenario(), 10, 1).with_bins(3);
        assert_eq!(config.validate(), Err(ConfigError::TooFewBins(3)));
    }

    #[test]
    fn zero_workers_rejected() {
        let config = SimulationConfig::new(CaseId::A.scenario(), 10, 1).with_workers(0);
        assert_eq!(config.validate(), Err(ConfigError::ZeroWorkers));
    }

    #[test]
    fn counts_sum_to_n_and_support_is_respected() {
        for case in CaseId::ALL {
            let config =
                SimulationConfig::new(case.scenario(), 20_000, 3).with_retained_samples();
            let e = run(&config).unwrap();
            assert_eq!(e.counts().iter().sum::<u64>(), e.n());
            let (lo, hi) = case.scenario().max_angle_support();
            let samples = e.samples().unwrap();
            assert!(samples.first().unwrap() >= &(lo - 1e-12), "{case:?}");
            assert!(samples.last().unwrap() <= &(hi + 1e-12), "{case:?}");
        }
    }

    #[test]
    fn restricted_case_is_always_obtuse() {
        let config = SimulationConfig::new(CaseId::B.scenario(), 100_000, 5);
        let e = run(&config).unwrap();
        assert_eq!(e.obtuse_count(), e.n());
    }

    #[test]
    fn unrestricted_obtuse_fraction_near_three_quarters() {
        let config = SimulationConfig::new(CaseId::A.scenario(), 200_000, 7);
        let e = run(&config).unwrap();
        // 3 binomial sigma at n = 2e5.
        let sigma = (0.75 * 0.25 / 2e5_f64).sqrt();
        assert!((e.obtuse_fraction() - 0.75).abs() < 3.0 * sigma);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let reference = run(&SimulationConfig::new(CaseId::C.scenario(), 50_000, 11)
            .with_retained_samples())
        .unwrap();
        for workers in [2, 3, 8] {
            let parallel = run(&SimulationConfig::new(CaseId::C.scenario(), 50_000, 11)
                .with_retained_samples()
                .with_workers(workers))
            .unwrap();
            assert_eq!(reference, parallel, "workers = {workers}");
        }
    }

    #[test]
    fn stream_indexed_shards_merge_into_full_run() {
        let full = run(&SimulationConfig::new(CaseId::D.scenario(), 40_000, 7)
            .with_retained_samples())
        .unwrap();
        let shard_size = 40_000 / 8;
        let mut merged = EmpiricalDistribution::empty(full.edges().to_vec(), true);
        for k in 0..8 {
            let shard = run(&SimulationConfig::new(CaseId::D.scenario(), shard_size, 7)
                .with_retained_samples()
                .with_stream_offset(k * shard_size))
            .unwrap();
            merged = merged.merge(&shard).unwrap();
        }
        assert_eq!(full, merged);
    }

    #[test]
    fn merge_identity_and_commutativity() {
        let a = run(&SimulationConfig::new(CaseId::A.scenario(), 5_000, 1).with_retained_samples())
            .unwrap();
        let b = run(&SimulationConfig::new(CaseId::A.scenario(), 5_000, 2)
            .with_retained_samples()
            .with_stream_offset(5_000))
        .unwrap();
        let empty = EmpiricalDistribution::empty(a.edges().to_vec(), true);
        assert_eq!(a.merge(&empty).unwrap(), a);
        assert_eq!(a.merge(&b).unwrap(), b.merge(&a).unwrap());
        let ab = a.merge(&b).unwrap();
        assert_eq!(ab.n(), 10_000);
        assert_eq!(
            ab.counts().iter().sum::<u64>(),
            a.counts().iter().sum::<u64>() + b.counts().iter().sum::<u64>()
        );
    }

    #[test]
    fn merge_rejects_mismatched_edges() {
        let a = run(&SimulationConfig::new(CaseId::A.scenario(), 100, 1)).unwrap();
        let b = run(&SimulationConfig::new(CaseId::A.scenario(), 100, 1).with_bins(32)).unwrap();
        assert_eq!(a.merge(&b), Err(DistributionError::BinMismatch));
        let c = run(&SimulationConfig::new(CaseId::B.scenario(), 100, 1)).unwrap();
        assert_eq!(a.merge(&c), Err(DistributionError::BinMismatch));
    }

    #[test]
    fn empirical_cdf_steps() {
        let config =
            SimulationConfig::new(CaseId::A.scenario(), 50_000, 7).with_retained_samples();
        let e = run(&config).unwrap();
        assert_eq!(e.empirical_cdf(PI / 3.0 - 0.01).unwrap(), 0.0);
        assert_eq!(e.empirical_cdf(PI).unwrap(), 1.0);
        // Complement of the obtuse probability, within 3 binomial sigma.
        let at_right_angle = e.empirical_cdf(FRAC_PI_2).unwrap();
        let sigma = (0.25 * 0.75 / 50_000.0_f64).sqrt();
        assert!((at_right_angle - 0.25).abs() < 3.0 * sigma);
    }

    #[test]
    fn empirical_cdf_requires_retained_samples() {
        let e = run(&SimulationConfig::new(CaseId::A.scenario(), 100, 1)).unwrap();
        assert_eq!(
            e.empirical_cdf(2.0),
            Err(DistributionError::SamplesNotRetained)
        );
    }

    #[test]
    fn degenerate_resamples_are_rare_but_counted() {
        let config = SimulationConfig::new(CaseId::A.scenario(), 100_000, 9);
        let e = run(&config).unwrap();
        // Coincidence at 1e-12 tolerance is a ~1e-12 probability event.
        assert!(e.degenerate_resamples() < 5);
    }
}
