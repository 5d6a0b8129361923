//! Seeded stochastic simulation of the walk, as an end-to-end check on the
//! exact spectral machinery.
//!
//! Sampling is driven by SplitMix64 streams keyed on (seed, sample index),
//! so identical configurations reproduce byte-identical results and samples
//! are independent of evaluation order. Each step draws one of the 2r+1
//! symbols uniformly (rejection-free multiply-shift), never one of the
//! distinct elements, so torsion-induced coincidences get the accumulated
//! mass automatically.

use crate::error::{Error, Result};
use crate::group::{Distribution, GroupElement, WalkSpec};
use crate::mixing::MixingAnalysis;

const GOLDEN: u64 = 0x9E3779B97F4A7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// SplitMix64: one 64-bit state, additive counter, finalizing mixer.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Stream i of a master seed; used for per-sample generators.
    pub fn stream(seed: u64, index: u64) -> Self {
        Self::new(mix64(seed ^ mix64(index.wrapping_add(GOLDEN))))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform draw from 0..n via multiply-shift.
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Uniform in [0, 1).
    pub fn uniform_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Simulation parameters; the walk is passed alongside.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub steps: u64,
    pub samples: u64,
    pub seed: u64,
}

fn endpoint(walk: &WalkSpec, t: u64, rng: &mut SplitMix64) -> usize {
    let group = walk.group();
    let r = walk.rank();
    let symbols = (2 * r + 1) as u64;
    let mut coords: Vec<u64> = group.identity().coords().to_vec();
    let moduli = group.moduli();
    for _ in 0..t {
        let s = rng.below(symbols);
        if s == 0 {
            continue;
        }
        let i = ((s - 1) % r as u64) as usize;
        let negate = s > r as u64;
        let gen = walk.generators()[i].coords();
        for ((c, &g), &m) in coords.iter_mut().zip(gen).zip(moduli) {
            let delta = if negate { (m - g) % m } else { g };
            *c = (*c + delta) % m;
        }
    }
    coords
        .iter()
        .zip(moduli)
        .fold((0u64, group.order()), |(acc, span), (&c, &m)| {
            let span = span / m;
            (acc + c * span, span)
        })
        .0 as usize
}

/// Endpoint of a single t-step path from the identity.
pub fn sample_path(walk: &WalkSpec, t: u64, seed: u64) -> GroupElement {
    let mut rng = SplitMix64::stream(seed, 0);
    let idx = endpoint(walk, t, &mut rng);
    walk.group().element_at(idx)
}

/// Frequency vector of `samples` independent endpoints.
pub fn empirical_distribution(walk: &WalkSpec, config: &SimConfig) -> Result<Distribution> {
    if config.samples == 0 {
        return Err(Error::InvalidParameter("sample count must be >= 1".into()));
    }
    let n = walk.group().order() as usize;
    let mut counts = vec![0u64; n];
    for i in 0..config.samples {
        let mut rng = SplitMix64::stream(config.seed, i);
        counts[endpoint(walk, config.steps, &mut rng)] += 1;
    }
    let total = config.samples as f64;
    Distribution::new(counts.iter().map(|&c| c as f64 / total).collect())
}

/// Empirical frequencies against the exact P^t, with binomial 5-sigma bands.
#[derive(Debug, Clone)]
pub struct EmpiricalCheck {
    pub max_abs_dev: f64,
    /// Coordinates outside their 5-sigma band.
    pub violations: usize,
    pub observed: Vec<f64>,
    pub expected: Vec<f64>,
    pub band: Vec<f64>,
}

/// Compares `samples` endpoints against the exact distribution
/// uniform + deviation_field(t). Requires at least 10^4 samples, below
/// which the bands are meaningless.
pub fn empirical_check(walk: &WalkSpec, config: &SimConfig) -> Result<EmpiricalCheck> {
    if config.samples < 10_000 {
        return Err(Error::InvalidParameter(
            "empirical check needs at least 1e4 samples".into(),
        ));
    }
    let observed = empirical_distribution(walk, config)?;
    let analysis = MixingAnalysis::new(walk);
    let dev = analysis.deviation_field(config.steps);
    let n = walk.group().order() as f64;
    let inv_n = 1.0 / n;
    let s = config.samples as f64;

    let mut max_abs_dev = 0.0f64;
    let mut violations = 0usize;
    let mut expected = Vec::with_capacity(dev.dev().len());
    let mut band = Vec::with_capacity(dev.dev().len());
    for (&o, &d) in observed.mass().iter().zip(dev.dev()) {
        let p = (inv_n + d).clamp(0.0, 1.0);
        let sigma = (p * (1.0 - p) / s).sqrt();
        let diff = (o - p).abs();
        max_abs_dev = max_abs_dev.max(diff);
        if diff > 5.0 * sigma {
            violations += 1;
        }
        expected.push(p);
        band.push(5.0 * sigma);
    }
    Ok(EmpiricalCheck {
        max_abs_dev,
        violations,
        observed: observed.mass().to_vec(),
        expected,
        band,
    })
}
