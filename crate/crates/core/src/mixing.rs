//! Distance-to-stationarity curves, thresholds, and spectral envelopes.
//!
//! The central quantity is the L1 distance d(t) = |P^t - u|_1 between the
//! time-t distribution from the identity and the uniform distribution u.
//! It ranges over [0, 2] with d(0) = 2(N-1)/N and is non-increasing in t.
//!
//! Everything here is evaluated cancellation-free through the nontrivial
//! modes:
//!
//!   dev_t[x] = (1/N) * sum_{k != 0} lambda_k^t cos(2*pi <k, x>),
//!
//! never by forming P^t and subtracting 1/N. This keeps the curve accurate
//! down to ~1e-300 and makes thresholds at extremely small levels feasible.
//! Mode sums run in ascending character order with Neumaier compensation,
//! so results are bit-reproducible.

use crate::error::{Error, Result};
use crate::group::WalkSpec;
use crate::numeric::{pow_u64, Neumaier};
use crate::spectral::Spectrum;

const SLACK: f64 = 1e-12;

/// Deviation of the time-t distribution from uniform, entry by entry.
#[derive(Debug, Clone)]
pub struct DeviationField {
    dev: Vec<f64>,
    t: u64,
}

impl DeviationField {
    pub fn dev(&self) -> &[f64] {
        &self.dev
    }

    pub fn t(&self) -> u64 {
        self.t
    }
}

/// d(t) samples for t = 0..; optionally stopped early at a floor.
#[derive(Debug, Clone)]
pub struct MixingCurve {
    d_values: Vec<f64>,
    floor_hit: Option<u64>,
}

impl MixingCurve {
    pub fn d_values(&self) -> &[f64] {
        &self.d_values
    }

    /// First t at which d(t) fell below the requested floor, if any.
    pub fn floor_hit(&self) -> Option<u64> {
        self.floor_hit
    }
}

/// The two-sided spectral envelope lambda_m^{2t} <= d(t)^2 <= sum_{k!=0} lambda_k^{2t}.
#[derive(Debug, Clone, Copy)]
pub struct SandwichCheck {
    pub lower: f64,
    pub exact_sq: f64,
    pub upper: f64,
    pub holds: bool,
}

/// Spectral-gap and log-gap products with the 1/2-mixing time.
#[derive(Debug, Clone, Copy)]
pub struct PeresProducts {
    pub gap_product: f64,
    pub log_product: f64,
    pub t_half: u64,
}

/// Phase evaluation strategy; all three produce identical bit patterns for
/// the phases they share, they only differ in speed.
enum PhasePath {
    /// phase(k, x) = k*x mod n.
    Cyclic { n: u64 },
    /// All moduli equal 2: phase is the parity of k AND x.
    TwoTorsion,
    /// General product: phase = sum_j k_j (L/n_j) x_j mod L.
    Product {
        dims: usize,
        /// weighted[k*dims + j] = k_j * (L/n_j) mod L
        weighted: Vec<u64>,
        /// coords[x*dims + j] = x_j
        coords: Vec<u64>,
    },
}

/// Precomputed evaluation engine for one walk.
pub struct MixingAnalysis {
    walk: WalkSpec,
    spectrum: Spectrum,
    /// cos(2*pi*m/L), mirrored so that tab[m] == tab[L-m] bitwise.
    cos_tab: Vec<f64>,
    lcm: u64,
    path: PhasePath,
}

impl MixingAnalysis {
    pub fn new(walk: &WalkSpec) -> Self {
        let group = walk.group();
        let n = group.order() as usize;
        let l = group.phase_lcm();

        let mut cos_tab = vec![0.0; l as usize];
        for m in 0..=(l / 2) {
            let c = (std::f64::consts::TAU * (m as f64 / l as f64)).cos();
            cos_tab[m as usize] = c;
            cos_tab[(l - m) as usize % l as usize] = c;
        }

        let path = if group.moduli().iter().all(|&m| m == 2) {
            PhasePath::TwoTorsion
        } else if group.is_cyclic() {
            PhasePath::Cyclic { n: l }
        } else {
            let dims = group.factor_count();
            let mut weighted = Vec::with_capacity(n * dims);
            let mut coords = Vec::with_capacity(n * dims);
            for idx in 0..n {
                let e = group.element_at(idx);
                for (j, &c) in e.coords().iter().enumerate() {
                    let nj = group.moduli()[j];
                    weighted.push(c * (l / nj) % l);
                    coords.push(c);
                }
            }
            PhasePath::Product {
                dims,
                weighted,
                coords,
            }
        };

        Self {
            walk: walk.clone(),
            spectrum: walk.spectrum(),
            cos_tab,
            lcm: l,
            path,
        }
    }

    pub fn walk(&self) -> &WalkSpec {
        &self.walk
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// lambda_k^t for every mode, with the trivial mode zeroed out.
    fn mode_weights(&self, t: u64) -> Vec<f64> {
        let mut w: Vec<f64> = self
            .spectrum
            .values()
            .iter()
            .map(|&v| pow_u64(v, t))
            .collect();
        w[0] = 0.0;
        w
    }

    /// Evaluates dev[x] = (1/N) sum_{k!=0} weights[k] cos(2*pi <k,x>) for all
    /// x, plus the L1 norm of the result. Fixed ascending-(x, k) order with
    /// Neumaier compensation.
    fn accumulate(&self, weights: &[f64]) -> (Vec<f64>, f64) {
        let n = weights.len();
        let inv_n = 1.0 / n as f64;
        let mut dev = Vec::with_capacity(n);
        let mut l1 = Neumaier::new();
        match &self.path {
            PhasePath::Cyclic { n: modulus } => {
                for x in 0..n as u64 {
                    let mut acc = Neumaier::new();
                    let mut p = 0u64;
                    for &w in weights.iter().skip(1) {
                        p += x;
                        if p >= *modulus {
                            p -= *modulus;
                        }
                        if w != 0.0 {
                            acc.add(w * self.cos_tab[p as usize]);
                        }
                    }
                    let d = acc.value() * inv_n;
                    dev.push(d);
                    l1.add(d.abs());
                }
            }
            PhasePath::TwoTorsion => {
                for x in 0..n {
                    let mut acc = Neumaier::new();
                    for (k, &w) in weights.iter().enumerate().skip(1) {
                        if w != 0.0 {
                            let parity = ((k & x).count_ones() & 1) as usize;
                            acc.add(w * self.cos_tab[parity]);
                        }
                    }
                    let d = acc.value() * inv_n;
                    dev.push(d);
                    l1.add(d.abs());
                }
            }
            PhasePath::Product {
                dims,
                weighted,
                coords,
            } => {
                for x in 0..n {
                    let xc = &coords[x * dims..(x + 1) * dims];
                    let mut acc = Neumaier::new();
                    for (k, &w) in weights.iter().enumerate().skip(1) {
                        if w != 0.0 {
                            let kw = &weighted[k * dims..(k + 1) * dims];
                            let p: u64 = kw.iter().zip(xc).map(|(&a, &b)| a * b).sum();
                            acc.add(w * self.cos_tab[(p % self.lcm) as usize]);
                        }
                    }
                    let d = acc.value() * inv_n;
                    dev.push(d);
                    l1.add(d.abs());
                }
            }
        }
        (dev, l1.value())
    }

    /// P^t - uniform, computed from the nontrivial modes only.
    pub fn deviation_field(&self, t: u64) -> DeviationField {
        let (dev, _) = self.accumulate(&self.mode_weights(t));
        DeviationField { dev, t }
    }

    /// d(t) = |P^t - u|_1, cancellation-free.
    pub fn l1_distance(&self, t: u64) -> f64 {
        self.accumulate(&self.mode_weights(t)).1
    }

    /// d(t) for t = 0..=t_max, stopping once d drops below `floor` (the
    /// first sub-floor sample is kept and recorded).
    pub fn mixing_curve(&self, t_max: u64, floor: f64) -> MixingCurve {
        let mut d_values = Vec::new();
        let mut floor_hit = None;
        for t in 0..=t_max {
            let d = self.l1_distance(t);
            d_values.push(d);
            if d < floor {
                floor_hit = Some(t);
                break;
            }
        }
        MixingCurve {
            d_values,
            floor_hit,
        }
    }

    /// Largest t with d(t) >= level: the first t with d(t) < level, minus
    /// one. d is non-increasing for any Markov chain, so the crossing is
    /// located by doubling plus bisection; the result equals what a forward
    /// scan would return. Evaluations are confined to t <= t_cap.
    pub fn threshold(&self, level: f64, t_cap: u64) -> Result<u64> {
        if !(level > 0.0 && level <= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "threshold level {level} outside (0, 2]"
            )));
        }
        let initial = self.l1_distance(0);
        if level > initial {
            return Err(Error::ThresholdUndefined { level, initial });
        }
        if t_cap == 0 || self.l1_distance(t_cap) >= level {
            return Err(Error::CapExceeded { level, cap: t_cap });
        }
        if self.l1_distance(1) < level {
            return Ok(0);
        }
        // d(lo) >= level; double hi until d(hi) < level.
        let mut lo = 1u64;
        let mut hi = 2u64.min(t_cap);
        while self.l1_distance(hi) >= level {
            lo = hi;
            hi = hi.saturating_mul(2).min(t_cap);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.l1_distance(mid) < level {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(lo)
    }

    /// t(eps) / t(1-eps) on the L1 scale. `None` marks the degenerate case
    /// t(1-eps) = 0, where the ratio carries no information.
    pub fn cutoff_ratio(&self, epsilon: f64, t_cap: u64) -> Result<Option<f64>> {
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "epsilon {epsilon} outside (0, 1/2)"
            )));
        }
        let t_hi = self.threshold(1.0 - epsilon, t_cap)?;
        if t_hi == 0 {
            return Ok(None);
        }
        let t_lo = self.threshold(epsilon, t_cap)?;
        Ok(Some(t_lo as f64 / t_hi as f64))
    }

    /// Checks lambda_m^{2t} <= d(t)^2 <= sum_{k!=0} lambda_k^{2t} with
    /// additive slack 1e-12 on both sides.
    pub fn spectral_sandwich(&self, t: u64) -> SandwichCheck {
        let two_t = t.saturating_mul(2);
        let lower = pow_u64(self.spectrum.dominant_abs(), two_t);
        let mut upper = Neumaier::new();
        for &v in self.spectrum.values().iter().skip(1) {
            upper.add(pow_u64(v, two_t));
        }
        let upper = upper.value();
        let exact = self.l1_distance(t);
        let exact_sq = exact * exact;
        SandwichCheck {
            lower,
            exact_sq,
            upper,
            holds: lower <= exact_sq + SLACK && exact_sq <= upper + SLACK,
        }
    }

    /// (1 - |lambda_m|) * t(1/2) and (-ln |lambda_m|) * t(1/2).
    pub fn peres_products(&self, t_cap: u64) -> Result<PeresProducts> {
        let t_half = self.threshold(0.5, t_cap)?;
        let lam = self.spectrum.dominant_abs();
        Ok(PeresProducts {
            gap_product: (1.0 - lam) * t_half as f64,
            log_product: -lam.ln() * t_half as f64,
            t_half,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{AbelianGroup, Distribution};

    fn cyclic_walk(n: u64, gens: &[i64]) -> WalkSpec {
        let g = AbelianGroup::new(&[n]).unwrap();
        let gens: Vec<_> = gens.iter().map(|&a| g.element(&[a]).unwrap()).collect();
        WalkSpec::new(g, gens, false).unwrap()
    }

    #[test]
    fn deviation_at_time_zero_is_delta_minus_uniform() {
        let w = cyclic_walk(8, &[1]);
        let m = MixingAnalysis::new(&w);
        let dev = m.deviation_field(0);
        assert!((dev.dev()[0] - 7.0 / 8.0).abs() < 1e-13);
        for &d in &dev.dev()[1..] {
            assert!((d + 1.0 / 8.0).abs() < 1e-13);
        }
    }

    #[test]
    fn deviation_z4_small_times() {
        let w = cyclic_walk(4, &[1]);
        let m = MixingAnalysis::new(&w);
        let d1 = m.deviation_field(1);
        let expect1 = [1.0 / 12.0, 1.0 / 12.0, -0.25, 1.0 / 12.0];
        for (a, b) in d1.dev().iter().zip(expect1) {
            assert!((a - b).abs() < 1e-14);
        }
        let d2 = m.deviation_field(2);
        let expect2 = [1.0 / 12.0, -1.0 / 36.0, -1.0 / 36.0, -1.0 / 36.0];
        for (a, b) in d2.dev().iter().zip(expect2) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn deviation_entries_sum_to_zero_and_mirror() {
        let w = cyclic_walk(12, &[1, 5]);
        let m = MixingAnalysis::new(&w);
        let g = w.group();
        for t in [0u64, 1, 3, 10, 40] {
            let dev = m.deviation_field(t);
            let max = dev.dev().iter().fold(0.0f64, |a, &b| a.max(b.abs()));
            let sum: f64 = dev.dev().iter().sum();
            assert!(sum.abs() <= 1e-12 * (max + 1e-300));
            for x in 0..12usize {
                let nx = g.index_of(&g.neg(&g.element_at(x)));
                assert_eq!(dev.dev()[x].to_bits(), dev.dev()[nx].to_bits());
            }
        }
    }

    #[test]
    fn l1_distance_closed_form_z4() {
        let w = cyclic_walk(4, &[1]);
        let m = MixingAnalysis::new(&w);
        assert!((m.l1_distance(0) - 1.5).abs() < 1e-14);
        for t in 1..=30u64 {
            let expect = 1.5 * 3.0f64.powi(-(t as i32));
            let got = m.l1_distance(t);
            assert!(
                ((got - expect) / expect).abs() < 1e-12,
                "t={t}: got {got}, expected {expect}"
            );
        }
    }

    #[test]
    fn l1_matches_convolution_oracle() {
        let w = cyclic_walk(8, &[1, 3]);
        let m = MixingAnalysis::new(&w);
        let u = Distribution::uniform(w.group());
        let x0 = Distribution::point_mass(w.group());
        for t in 0..=30u64 {
            let exact = m.l1_distance(t);
            let brute = w.evolve(&x0, t).l1_distance(&u);
            assert!((exact - brute).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn mixing_curve_z4() {
        let w = cyclic_walk(4, &[1]);
        let m = MixingAnalysis::new(&w);
        let c = m.mixing_curve(3, 0.0);
        let expect = [1.5, 0.5, 1.0 / 6.0, 1.0 / 18.0];
        assert_eq!(c.d_values().len(), 4);
        for (a, b) in c.d_values().iter().zip(expect) {
            assert!((a - b).abs() < 1e-13);
        }
        assert!(c.floor_hit().is_none());

        let single = m.mixing_curve(0, 0.0);
        assert_eq!(single.d_values().len(), 1);
        assert!((single.d_values()[0] - 1.5).abs() < 1e-14);
    }

    #[test]
    fn mixing_curve_floor_stop() {
        let w = cyclic_walk(8, &[1]);
        let m = MixingAnalysis::new(&w);
        let c = m.mixing_curve(200, 1e-12);
        let hit = c.floor_hit().expect("curve should hit 1e-12 within 200 steps");
        assert_eq!(c.d_values().len() as u64, hit + 1);
        assert!(c.d_values()[hit as usize] < 1e-12);
        assert!(c.d_values()[hit as usize - 1] >= 1e-12);
    }

    #[test]
    fn curve_is_monotone() {
        for (n, gens) in [(8u64, vec![1i64]), (16, vec![1, 3]), (12, vec![5])] {
            let m = MixingAnalysis::new(&cyclic_walk(n, &gens));
            let c = m.mixing_curve(200, 0.0);
            for pair in c.d_values().windows(2) {
                assert!(pair[1] <= pair[0] + 1e-12);
            }
        }
    }

    #[test]
    fn threshold_z4_examples() {
        let m = MixingAnalysis::new(&cyclic_walk(4, &[1]));
        assert_eq!(m.threshold(0.5, 1000).unwrap(), 1);
        assert_eq!(m.threshold(0.1, 1000).unwrap(), 2);
        match m.threshold(1.9, 1000) {
            Err(Error::ThresholdUndefined { .. }) => {}
            other => panic!("expected ThresholdUndefined, got {other:?}"),
        }
        assert!(matches!(
            m.threshold(0.0, 1000),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            m.threshold(1e-300, 5),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn threshold_matches_forward_scan() {
        for (n, gens) in [(8u64, vec![1i64]), (12, vec![1, 5]), (16, vec![3])] {
            let m = MixingAnalysis::new(&cyclic_walk(n, &gens));
            for level in [1.5, 1.0, 0.5, 0.25, 0.05, 1e-3, 1e-6] {
                let fast = m.threshold(level, 100_000).unwrap();
                let mut scan = 0u64;
                while m.l1_distance(scan + 1) >= level {
                    scan += 1;
                }
                assert_eq!(fast, scan, "n={n} level={level}");
                let d_at = m.l1_distance(fast);
                let d_next = m.l1_distance(fast + 1);
                assert!(d_at >= level && level > d_next);
            }
        }
    }

    #[test]
    fn cutoff_ratio_degenerate_on_tiny_group() {
        let m = MixingAnalysis::new(&cyclic_walk(4, &[1]));
        // d(1) = 0.5 < 0.95, so t(0.95) = 0 and the ratio is undefined.
        assert_eq!(m.cutoff_ratio(0.05, 1000).unwrap(), None);
        assert!(matches!(
            m.cutoff_ratio(0.7, 1000),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn cutoff_ratio_cycle_vs_hypercube() {
        // Pinned threshold pairs: t(0.05) = 1006, t(0.95) = 104 on Z/64.
        let cycle = MixingAnalysis::new(&cyclic_walk(64, &[1]));
        let cycle_ratio = cycle.cutoff_ratio(0.05, 100_000).unwrap().unwrap();
        assert_eq!(cycle_ratio, 1006.0 / 104.0);

        // The rank-8 hypercube of the same spirit sits closer to 1.
        let g = AbelianGroup::new(&[2; 8]).unwrap();
        let gens = (0..8)
            .map(|i| {
                let mut c = [0i64; 8];
                c[i] = 1;
                g.element(&c).unwrap()
            })
            .collect();
        let hyper = MixingAnalysis::new(&WalkSpec::new(g, gens, false).unwrap());
        let hyper_ratio = hyper.cutoff_ratio(0.05, 10_000).unwrap().unwrap();
        assert_eq!(hyper_ratio, 23.0 / 3.0);
        assert!(hyper_ratio < cycle_ratio);
    }

    #[test]
    fn sandwich_z4_at_t1() {
        let m = MixingAnalysis::new(&cyclic_walk(4, &[1]));
        let s = m.spectral_sandwich(1);
        assert!((s.lower - 1.0 / 9.0).abs() < 1e-14);
        assert!((s.exact_sq - 0.25).abs() < 1e-14);
        assert!((s.upper - 1.0 / 3.0).abs() < 1e-14);
        assert!(s.holds);
    }

    #[test]
    fn sandwich_boundary_t0() {
        for n in [2u64, 3, 4, 8] {
            let m = MixingAnalysis::new(&cyclic_walk(n, &[1]));
            let s = m.spectral_sandwich(0);
            assert!(s.holds, "n={n}: {s:?}");
            assert!((s.lower - 1.0).abs() < 1e-14);
            assert!((s.upper - (n as f64 - 1.0)).abs() < 1e-10);
            let d0 = 2.0 * (n as f64 - 1.0) / n as f64;
            assert!((s.exact_sq - d0 * d0).abs() < 1e-12);
        }
    }

    #[test]
    fn sandwich_holds_over_time() {
        let m = MixingAnalysis::new(&cyclic_walk(8, &[1]));
        for t in 0..=500u64 {
            assert!(m.spectral_sandwich(t).holds, "t={t}");
        }
    }

    #[test]
    fn peres_products_z4() {
        let m = MixingAnalysis::new(&cyclic_walk(4, &[1]));
        let p = m.peres_products(1000).unwrap();
        assert_eq!(p.t_half, 1);
        assert!((p.gap_product - 2.0 / 3.0).abs() < 1e-13);
        assert!((p.log_product - 3.0f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn phase_table_mirrors() {
        let w = cyclic_walk(10, &[1, 3]);
        let m = MixingAnalysis::new(&w);
        for p in 0..10u64 {
            assert_eq!(
                m.cos_tab[p as usize].to_bits(),
                m.cos_tab[((10 - p) % 10) as usize].to_bits()
            );
        }
    }

    #[test]
    fn deep_time_deviation_matches_dominant_mode_asymptote() {
        // Once every subdominant mode is (relatively) dead, the deviation
        // field collapses onto the +-k_m pair.
        let w = cyclic_walk(16, &[1]);
        let m = MixingAnalysis::new(&w);
        let t = 2000u64;
        assert!(m.l1_distance(t) < 1e-40);
        let lam = m.spectrum().dominant_abs();
        let wt = pow_u64(lam, t);
        let dev = m.deviation_field(t);
        for x in 0..16usize {
            let asymptote =
                2.0 * wt * (std::f64::consts::TAU * x as f64 / 16.0).cos() / 16.0;
            if asymptote.abs() > wt * 1e-3 {
                let rel = (dev.dev()[x] - asymptote).abs() / asymptote.abs();
                assert!(rel < 0.01, "x={x}: rel={rel}");
            }
        }
    }
}
