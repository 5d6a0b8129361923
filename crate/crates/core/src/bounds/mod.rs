//! The analytic inequalities behind the no-sharp-cutoff argument, each
//! exposed as a reporting check rather than an assumption.
//!
//! The pipeline: trigonometric/exponential comparisons turn each cosine in
//! an eigenvalue into a Gaussian factor; fractional reduction maps character
//! pairings into (-1/2, 1/2]; the per-mode bound caps lambda_k by
//! exp(-8|<k a./n>|^2/(2r+1)^2); a short mode forces |lambda_m| up; theta
//! sums over the shifted lattice cap the whole spectral tail; and the final
//! chain compares d(t)^2 against the lattice sum and the covering-constant
//! form. Every check carries additive slack 1e-12 and reports rather than
//! clamps: a failure beyond slack is a finding.
//!
//! The covering constant kappa is configuration. At rank 1 the value 2 is
//! forced (the nonzero integers split into two rays), so rank-1 checks
//! default to it; higher ranks require an explicit value.

pub mod lattice;

use crate::error::{Error, Result};
use crate::group::WalkSpec;
use crate::mixing::MixingAnalysis;
use crate::spectral::{pairing_numerator, CharacterIndex};
use lattice::ShiftedLattice;

pub use lattice::{theta_bound_check, ThetaBoundCheck, ThetaSumResult};

const SLACK: f64 = 1e-12;
/// Slack for pointwise transcendental comparisons (exactness at tangency
/// points is spoiled only by rounding).
const GRID_SLACK: f64 = 1e-15;

/// The covering constant forced at rank 1.
pub const KAPPA_RANK1: f64 = 2.0;

/// Smallest translate of x by an integer, in (-1/2, 1/2].
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f > 0.5 {
        f - 1.0
    } else {
        f
    }
}

/// cos x against its Gaussian envelopes. The upper comparison is meaningful
/// on [-3pi/2, 3pi/2], the lower on [-1, 1]; outside, the flag stays unset.
#[derive(Debug, Clone, Copy)]
pub struct TrigBounds {
    pub cos_value: f64,
    pub upper: f64,
    pub lower: f64,
    pub upper_ok: Option<bool>,
    pub lower_ok: Option<bool>,
}

/// upper = e^{-x^2/(2pi^2)}, lower = e^{-x^2}.
pub fn trig_bounds(x: f64) -> TrigBounds {
    let cos_value = x.cos();
    let upper = (-x * x / (2.0 * std::f64::consts::PI * std::f64::consts::PI)).exp();
    let lower = (-x * x).exp();
    let upper_ok = (x.abs() <= 1.5 * std::f64::consts::PI).then(|| cos_value <= upper + GRID_SLACK);
    let lower_ok = (x.abs() <= 1.0).then(|| lower <= cos_value + GRID_SLACK);
    TrigBounds {
        cos_value,
        upper,
        lower,
        upper_ok,
        lower_ok,
    }
}

/// Both directions of commuting a two-term mean with e^{-x^2}.
#[derive(Debug, Clone, Copy)]
pub struct ConcavityCheck {
    /// e^{-a^2/2 - b^2/2} <= (e^{-a^2} + e^{-b^2})/2; holds for all a, b.
    pub left_ok: bool,
    /// (e^{-a^2} + e^{-b^2})/2 <= e^{-((a+b)/2)^2}; meaningful only for
    /// a, b in [-1/sqrt(2), 1/sqrt(2)].
    pub right_ok: Option<bool>,
}

pub fn concavity_pair(a: f64, b: f64) -> ConcavityCheck {
    let mean = 0.5 * (-a * a).exp() + 0.5 * (-b * b).exp();
    let geo = (-0.5 * a * a - 0.5 * b * b).exp();
    let left_ok = geo <= mean + GRID_SLACK;
    let in_range = a.abs() <= std::f64::consts::FRAC_1_SQRT_2
        && b.abs() <= std::f64::consts::FRAC_1_SQRT_2;
    let right_ok = in_range.then(|| {
        let avg = 0.5 * a + 0.5 * b;
        mean <= (-avg * avg).exp() + GRID_SLACK
    });
    ConcavityCheck { left_ok, right_ok }
}

/// The vector <k a_i / n> of reduced character pairings, one entry per
/// generator. Product groups reduce the per-factor pairing sum exactly over
/// the lcm of the moduli before the single rounding division.
#[derive(Debug, Clone)]
pub struct FracVector {
    entries: Vec<f64>,
}

impl FracVector {
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum()
    }

    pub fn linf(&self) -> f64 {
        self.entries.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
    }
}

pub fn frac_vector(walk: &WalkSpec, k: &CharacterIndex) -> FracVector {
    let group = walk.group();
    let l = group.phase_lcm();
    let entries = walk
        .generators()
        .iter()
        .map(|a| {
            let p = pairing_numerator(group, k.coords(), a.coords());
            let num = if 2 * p <= l {
                p as i64
            } else {
                p as i64 - l as i64
            };
            num as f64 / l as f64
        })
        .collect();
    FracVector { entries }
}

/// Per-mode Gaussian cap on an eigenvalue.
#[derive(Debug, Clone, Copy)]
pub struct EigenExpBound {
    pub lambda: f64,
    pub bound: f64,
    pub holds: bool,
}

/// lambda_k <= exp(-8 |<k a./n>|_2^2 / (2r+1)^2), slack 1e-12.
pub fn eigen_exp_bound(walk: &WalkSpec, k: &CharacterIndex) -> EigenExpBound {
    let v = frac_vector(walk, k);
    let denom = (2 * walk.rank() + 1) as f64;
    let bound = (-8.0 * v.norm_sq() / (denom * denom)).exp();
    let lambda = walk.eigenvalue(k);
    EigenExpBound {
        lambda,
        bound,
        holds: lambda <= bound + SLACK,
    }
}

/// The nonzero mode whose pairings are uniformly smallest.
#[derive(Debug, Clone, Copy)]
pub struct ShortMode {
    pub k_star: u64,
    pub linf: f64,
    /// linf <= 1/(2pi), the premise of the lower bound on |lambda_m|.
    pub within_pigeonhole: bool,
}

/// Exhaustively scans k = 1..n-1 for the mode minimizing
/// max_i |<k a_i / n>| (ties to the smallest k). Cyclic walks only.
pub fn short_mode(walk: &WalkSpec) -> Result<ShortMode> {
    let group = walk.group();
    if !group.is_cyclic() {
        return Err(Error::NotCyclic(group.moduli().to_vec()));
    }
    let n = group.order();
    let gens: Vec<u64> = walk.generators().iter().map(|g| g.coords()[0]).collect();
    let mut k_star = 1u64;
    let mut best = f64::INFINITY;
    for k in 1..n {
        let mut worst = 0.0f64;
        for &a in &gens {
            let m = k * a % n;
            let num = if 2 * m <= n { m } else { n - m };
            worst = worst.max(num as f64 / n as f64);
        }
        if worst < best {
            best = worst;
            k_star = k;
        }
    }
    Ok(ShortMode {
        k_star,
        linf: best,
        within_pigeonhole: best <= 1.0 / std::f64::consts::TAU,
    })
}

/// Lower bound on |lambda_m| through the short mode.
#[derive(Debug, Clone, Copy)]
pub struct LambdaLowerBound {
    pub bound: f64,
    pub lambda_short: f64,
    pub lambda_dominant: f64,
    pub holds: bool,
}

/// |lambda_m| >= |lambda_{k*}| >= exp(-8 pi^2 |<k* a./n>|_2^2 / (2r+1)),
/// valid once every pairing of the short mode sits within 1/(2pi).
pub fn lambda_lower_bound(walk: &WalkSpec) -> Result<LambdaLowerBound> {
    let sm = short_mode(walk)?;
    if !sm.within_pigeonhole {
        return Err(Error::BoundNotApplicable { linf: sm.linf });
    }
    let k = CharacterIndex::new(walk.group(), &[sm.k_star as i64])?;
    let v = frac_vector(walk, &k);
    let pi = std::f64::consts::PI;
    let bound = (-8.0 * pi * pi * v.norm_sq() / (2 * walk.rank() + 1) as f64).exp();
    let lambda_short = walk.eigenvalue(&k).abs();
    let lambda_dominant = walk.spectrum().dominant_abs();
    let holds = lambda_dominant + SLACK >= lambda_short && lambda_short >= bound - SLACK;
    Ok(LambdaLowerBound {
        bound,
        lambda_short,
        lambda_dominant,
        holds,
    })
}

/// The end-to-end decay chain at one time t.
#[derive(Debug, Clone)]
pub struct ChainReport {
    pub t: u64,
    pub kappa: f64,
    /// d(t)^2, cancellation-free.
    pub dist_sq: f64,
    /// Truncated lattice sum minus the origin term.
    pub theta_minus_one: f64,
    /// X = |lambda_m|^{-2t/(pi^2 (2r+1))}.
    pub x_factor: f64,
    /// max{kappa/(X-1), kappa/(X-1)^r}; None when X <= 1 (vacuous link).
    pub kappa_bound: Option<f64>,
    pub dist_le_theta: bool,
    /// None when the link is vacuous.
    pub theta_le_kappa: Option<bool>,
    /// No link failed (a vacuous link is not a failure).
    pub holds: bool,
}

/// Evaluates d(t)^2 <= theta(16t/(2r+1)^2) - 1 <= max{kappa/(X-1),
/// kappa/(X-1)^r} link by link.
pub fn chain_check(walk: &WalkSpec, t: u64, kappa: f64) -> Result<ChainReport> {
    if t == 0 {
        return Err(Error::InvalidParameter("chain check requires t >= 1".into()));
    }
    if !(kappa > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "covering constant kappa = {kappa} must be positive"
        )));
    }
    let lat = ShiftedLattice::from_walk(walk)?;
    let r = walk.rank();
    let denom = (2 * r + 1) as f64;
    let c = 16.0 * t as f64 / (denom * denom);
    let theta = lat.theta_sum(c, 1e-12)?;

    let analysis = MixingAnalysis::new(walk);
    let d = analysis.l1_distance(t);
    let dist_sq = d * d;
    let theta_minus_one = theta.value - 1.0;
    let dist_le_theta = dist_sq <= theta_minus_one + SLACK;

    let lam = analysis.spectrum().dominant_abs();
    let pi = std::f64::consts::PI;
    let x_factor = (-2.0 * t as f64 / (pi * pi * denom) * lam.ln()).exp();
    let (kappa_bound, theta_le_kappa) = if x_factor > 1.0 {
        let base = x_factor - 1.0;
        let bound = (kappa / base).max(kappa / base.powi(r as i32));
        let certified = theta.value + theta.tail_bound - 1.0;
        (Some(bound), Some(certified <= bound + SLACK))
    } else {
        (None, None)
    };

    Ok(ChainReport {
        t,
        kappa,
        dist_sq,
        theta_minus_one,
        x_factor,
        kappa_bound,
        dist_le_theta,
        holds: dist_le_theta && theta_le_kappa != Some(false),
        theta_le_kappa,
    })
}

/// The lower bound on t(eps)/t(1-eps) implied by the chain.
#[derive(Debug, Clone, Copy)]
pub struct RatioFloor {
    pub floor: f64,
    /// The floor exceeds 1 only for eps below e^{-2 pi^2 (2r+1) kappa}.
    pub applicable: bool,
}

/// floor = (-ln eps) / (2 pi^2 (2r+1) kappa), taking -ln eps directly so
/// that regimes below the smallest positive double stay expressible.
pub fn ratio_floor_from_log(rank: usize, kappa: f64, minus_ln_eps: f64) -> Result<RatioFloor> {
    if !(kappa > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "covering constant kappa = {kappa} must be positive"
        )));
    }
    let pi = std::f64::consts::PI;
    let denom = 2.0 * pi * pi * (2 * rank + 1) as f64 * kappa;
    Ok(RatioFloor {
        floor: minus_ln_eps / denom,
        applicable: minus_ln_eps > denom,
    })
}

pub fn ratio_floor(walk: &WalkSpec, kappa: f64, epsilon: f64) -> Result<RatioFloor> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon {epsilon} outside (0, 1)"
        )));
    }
    ratio_floor_from_log(walk.rank(), kappa, -epsilon.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::AbelianGroup;

    fn cyclic_walk(n: u64, gens: &[i64]) -> WalkSpec {
        let g = AbelianGroup::new(&[n]).unwrap();
        let gens: Vec<_> = gens.iter().map(|&a| g.element(&[a]).unwrap()).collect();
        WalkSpec::new(g, gens, false).unwrap()
    }

    #[test]
    fn frac_basics() {
        assert!((frac(0.7) + 0.3).abs() < 1e-15);
        assert_eq!(frac(-0.5), 0.5);
        assert_eq!(frac(0.5), 0.5);
        assert_eq!(frac(1.25), 0.25);
        assert_eq!(frac(0.0), 0.0);
        assert_eq!(frac(-3.0), 0.0);
    }

    #[test]
    fn trig_bounds_examples() {
        let at0 = trig_bounds(0.0);
        assert_eq!(at0.cos_value, 1.0);
        assert_eq!(at0.upper, 1.0);
        assert_eq!(at0.lower, 1.0);
        assert_eq!(at0.upper_ok, Some(true));
        assert_eq!(at0.lower_ok, Some(true));

        let at1 = trig_bounds(1.0);
        assert!((at1.cos_value - 0.5403023058681398).abs() < 1e-15);
        assert!((at1.upper - (-1.0 / (2.0 * std::f64::consts::PI.powi(2))).exp()).abs() < 1e-15);
        assert!((at1.lower - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(at1.upper_ok, Some(true));
        assert_eq!(at1.lower_ok, Some(true));

        // 4 < 3pi/2, so only the lower range excludes it; 5 is outside both.
        let at4 = trig_bounds(4.0);
        assert_eq!(at4.upper_ok, Some(true));
        assert_eq!(at4.lower_ok, None);
        let at5 = trig_bounds(5.0);
        assert_eq!(at5.upper_ok, None);
        assert_eq!(at5.lower_ok, None);
    }

    #[test]
    fn concavity_examples() {
        let eq = concavity_pair(0.3, 0.3);
        assert!(eq.left_ok);
        assert_eq!(eq.right_ok, Some(true));

        let mid = concavity_pair(0.5, -0.5);
        assert!(mid.left_ok);
        assert_eq!(mid.right_ok, Some(true));

        let out = concavity_pair(2.0, 0.0);
        assert!(out.left_ok);
        assert_eq!(out.right_ok, None);
    }

    #[test]
    fn frac_vector_examples() {
        let w = cyclic_walk(4, &[1]);
        let k2 = CharacterIndex::new(w.group(), &[2]).unwrap();
        assert_eq!(frac_vector(&w, &k2).entries(), &[0.5]);

        let w8 = cyclic_walk(8, &[1]);
        let k1 = CharacterIndex::new(w8.group(), &[1]).unwrap();
        assert_eq!(frac_vector(&w8, &k1).entries(), &[0.125]);

        let w52 = cyclic_walk(5, &[1, 2]);
        let k2 = CharacterIndex::new(w52.group(), &[2]).unwrap();
        let v = frac_vector(&w52, &k2);
        assert!((v.entries()[0] - 0.4).abs() < 1e-15);
        assert!((v.entries()[1] + 0.2).abs() < 1e-15);
    }

    #[test]
    fn eigen_exp_bound_examples() {
        let w = cyclic_walk(4, &[1]);
        let k2 = CharacterIndex::new(w.group(), &[2]).unwrap();
        let b = eigen_exp_bound(&w, &k2);
        assert!((b.bound - (-2.0f64 / 9.0).exp()).abs() < 1e-15);
        assert!((b.lambda + 1.0 / 3.0).abs() < 1e-14);
        assert!(b.holds);

        let w8 = cyclic_walk(8, &[1]);
        let k1 = CharacterIndex::new(w8.group(), &[1]).unwrap();
        let b = eigen_exp_bound(&w8, &k1);
        assert!((b.bound - (-1.0f64 / 72.0).exp()).abs() < 1e-15);
        assert!(b.holds);

        // Trivial character: zero pairing vector, bound 1.
        let k0 = CharacterIndex::new(w8.group(), &[0]).unwrap();
        let b = eigen_exp_bound(&w8, &k0);
        assert_eq!(b.bound, 1.0);
        assert!(b.holds);
    }

    #[test]
    fn short_mode_examples() {
        let sm8 = short_mode(&cyclic_walk(8, &[1])).unwrap();
        assert_eq!(sm8.k_star, 1);
        assert!((sm8.linf - 0.125).abs() < 1e-15);
        assert!(sm8.within_pigeonhole);

        let sm4 = short_mode(&cyclic_walk(4, &[1])).unwrap();
        assert_eq!(sm4.k_star, 1);
        assert!((sm4.linf - 0.25).abs() < 1e-15);
        assert!(!sm4.within_pigeonhole);

        // Exhaustive-scan fixture: on Z/25 with {1, 7} the best mode is
        // k = 3 at max(|3/25|, |21/25 - 1|) = 4/25, a shade above 1/(2pi).
        let sm25 = short_mode(&cyclic_walk(25, &[1, 7])).unwrap();
        assert_eq!(sm25.k_star, 3);
        assert!((sm25.linf - 0.16).abs() < 1e-15);
        assert!(!sm25.within_pigeonhole);
    }

    #[test]
    fn lambda_lower_bound_examples() {
        let lb = lambda_lower_bound(&cyclic_walk(8, &[1])).unwrap();
        let pi = std::f64::consts::PI;
        let expected = (-8.0 * pi * pi / 3.0 / 64.0).exp();
        assert!((lb.bound - expected).abs() < 1e-15);
        assert!(lb.holds);
        assert!(lb.lambda_dominant >= lb.bound);

        let lb64 = lambda_lower_bound(&cyclic_walk(64, &[1])).unwrap();
        assert!(lb64.holds);

        assert!(matches!(
            lambda_lower_bound(&cyclic_walk(4, &[1])),
            Err(Error::BoundNotApplicable { .. })
        ));
    }

    #[test]
    fn chain_check_small_case() {
        let report = chain_check(&cyclic_walk(8, &[1]), 20, 2.0).unwrap();
        assert!(report.dist_le_theta);
        assert_eq!(report.theta_le_kappa, Some(true));
        assert!(report.holds);
        assert!(report.x_factor > 1.0);
        assert!(chain_check(&cyclic_walk(8, &[1]), 0, 2.0).is_err());
    }

    #[test]
    fn ratio_floor_examples() {
        let pi = std::f64::consts::PI;
        let w = cyclic_walk(16, &[1]);
        // Boundary: eps = e^{-12 pi^2} gives floor exactly 1, not applicable.
        let at_boundary = ratio_floor(&w, 2.0, (-12.0 * pi * pi).exp()).unwrap();
        assert!((at_boundary.floor - 1.0).abs() < 1e-12);
        assert!(!at_boundary.applicable);

        let deep = ratio_floor_from_log(1, 2.0, 240.0).unwrap();
        assert!((deep.floor - 240.0 / (12.0 * pi * pi)).abs() < 1e-12);
        assert!(deep.applicable);

        let moderate = ratio_floor(&w, 2.0, 0.5).unwrap();
        assert!(moderate.floor < 1.0);
        assert!(!moderate.applicable);
    }
}
