//! Parametrized walk families and their cutoff diagnostics.
//!
//! A family is a list of walks of growing order. For each instance the
//! profile records the dominant eigenvalue, both mixing thresholds t(eps)
//! and t(1-eps), their ratio (the cutoff diagnostic: a family has sharp
//! cutoff when the ratio tends to 1), and the spectral-gap products with
//! the 1/2-mixing time. Bounded-rank cycle families keep the ratio away
//! from 1; the hypercube family, whose rank grows with dimension, is the
//! contrast case and is profiled on the same footing.

use serde::{Deserialize, Serialize};

use crate::bounds::ratio_floor_from_log;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, WalkSpec};
use crate::mixing::MixingAnalysis;
use crate::numeric::format_float17;

/// Rule for the second generator of a two-generator cycle family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairRule {
    /// floor(sqrt(n))
    Sqrt,
    /// A fixed residue.
    Fixed(u64),
}

impl PairRule {
    fn apply(&self, n: u64) -> u64 {
        match self {
            PairRule::Sqrt => n.isqrt(),
            PairRule::Fixed(k) => k % n,
        }
    }
}

/// Raw description of a single walk, validated at family build time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkDescriptor {
    pub moduli: Vec<u64>,
    pub generators: Vec<Vec<i64>>,
}

impl WalkDescriptor {
    pub fn build(&self, require_type: bool) -> Result<WalkSpec> {
        let group = AbelianGroup::new(&self.moduli)?;
        let gens = self
            .generators
            .iter()
            .map(|g| group.element(g))
            .collect::<Result<Vec<_>>>()?;
        WalkSpec::new(group, gens, require_type)
    }
}

#[derive(Debug, Clone)]
pub enum FamilyPreset {
    /// Z/n with generator {1}.
    CycleSingle { sizes: Vec<u64> },
    /// Z/n with generators {1, g(n)}.
    CyclePair { sizes: Vec<u64>, rule: PairRule },
    /// Z/n with generators {1, floor(sqrt(n))}.
    CycleSqrt { sizes: Vec<u64> },
    /// (Z/2)^d with the standard basis; rank grows with dimension, the
    /// contrast family.
    Hypercube { dims: Vec<u32> },
    /// An explicit list, validated instance by instance.
    Custom { walks: Vec<WalkDescriptor> },
}

impl FamilyPreset {
    pub fn kind(&self) -> &'static str {
        match self {
            FamilyPreset::CycleSingle { .. } => "cycle_single",
            FamilyPreset::CyclePair { .. } => "cycle_pair",
            FamilyPreset::CycleSqrt { .. } => "cycle_sqrt",
            FamilyPreset::Hypercube { .. } => "hypercube",
            FamilyPreset::Custom { .. } => "custom",
        }
    }
}

fn check_increasing(sizes: &[u64]) -> Result<()> {
    if sizes.is_empty() || sizes.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(
            "family sizes must be strictly increasing".into(),
        ))
    }
}

fn cycle_walk(n: u64, gens: &[u64]) -> Result<WalkSpec> {
    let group = AbelianGroup::new(&[n])?;
    let gens = gens
        .iter()
        .map(|&a| group.element(&[a as i64]))
        .collect::<Result<Vec<_>>>()?;
    WalkSpec::new(group, gens, false)
}

pub fn hypercube_walk(dim: u32) -> Result<WalkSpec> {
    let group = AbelianGroup::new(&vec![2; dim as usize])?;
    let gens = (0..dim as usize)
        .map(|i| {
            let mut coords = vec![0i64; dim as usize];
            coords[i] = 1;
            group.element(&coords)
        })
        .collect::<Result<Vec<_>>>()?;
    WalkSpec::new(group, gens, false)
}

/// Instantiates every walk of a preset, failing with the instance order if
/// one is invalid.
pub fn build_family(preset: &FamilyPreset) -> Result<Vec<WalkSpec>> {
    let wrap = |n: u64| move |e: Error| Error::FamilyInstance { n, source: Box::new(e) };
    match preset {
        FamilyPreset::CycleSingle { sizes } => {
            check_increasing(sizes)?;
            sizes
                .iter()
                .map(|&n| cycle_walk(n, &[1]).map_err(wrap(n)))
                .collect()
        }
        FamilyPreset::CyclePair { sizes, rule } => {
            check_increasing(sizes)?;
            sizes
                .iter()
                .map(|&n| cycle_walk(n, &[1, rule.apply(n)]).map_err(wrap(n)))
                .collect()
        }
        FamilyPreset::CycleSqrt { sizes } => build_family(&FamilyPreset::CyclePair {
            sizes: sizes.clone(),
            rule: PairRule::Sqrt,
        }),
        FamilyPreset::Hypercube { dims } => {
            if dims.is_empty() || !dims.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidParameter(
                    "hypercube dimensions must be strictly increasing".into(),
                ));
            }
            dims.iter()
                .map(|&d| hypercube_walk(d).map_err(wrap(1u64 << d)))
                .collect()
        }
        FamilyPreset::Custom { walks } => walks
            .iter()
            .map(|d| {
                let n: u64 = d.moduli.iter().product();
                d.build(false).map_err(wrap(n))
            })
            .collect(),
    }
}

/// Step cap safely beyond the mixing scale: 10 N^2 in general, and
/// 10 d (ln d + 3) for two-torsion groups where mixing is logarithmic.
pub fn default_t_cap(walk: &WalkSpec) -> u64 {
    let group = walk.group();
    if group.moduli().iter().all(|&m| m == 2) {
        let d = group.factor_count() as f64;
        (10.0 * d * (d.ln() + 3.0)).ceil() as u64
    } else {
        let n = group.order();
        10u64.saturating_mul(n).saturating_mul(n)
    }
}

/// One profiled family instance. `None` marks an explicitly undefined cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub n: u64,
    pub r: usize,
    pub lambda_m: f64,
    pub gap: f64,
    pub t_eps: u64,
    pub t_1meps: u64,
    pub ratio: Option<f64>,
    pub gap_product: f64,
    pub log_product: f64,
    pub ratio_floor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub kind: String,
    pub rows: Vec<FamilyRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

/// Profiles every instance of a family at threshold level `epsilon`.
/// `t_cap` overrides the per-instance default cap; `kappa` fills the
/// rank-1 ratio-floor column when present.
pub fn family_profile(
    preset: &FamilyPreset,
    epsilon: f64,
    t_cap: Option<u64>,
    kappa: Option<f64>,
) -> Result<FamilyReport> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "epsilon {epsilon} outside (0, 1/2)"
        )));
    }
    let mut walks = build_family(preset)?;
    walks.sort_by_key(|w| w.group().order());
    let mut rows = Vec::with_capacity(walks.len());
    for walk in &walks {
        let n = walk.group().order();
        let wrap = |e: Error| Error::FamilyInstance { n, source: Box::new(e) };
        let cap = t_cap.unwrap_or_else(|| default_t_cap(walk));
        let analysis = MixingAnalysis::new(walk);
        let t_1meps = analysis.threshold(1.0 - epsilon, cap).map_err(wrap)?;
        let t_eps = analysis.threshold(epsilon, cap).map_err(wrap)?;
        let ratio = (t_1meps >= 1).then(|| t_eps as f64 / t_1meps as f64);
        let peres = analysis.peres_products(cap).map_err(wrap)?;
        let r = walk.rank();
        let ratio_floor = match kappa {
            Some(k) if r == 1 => Some(ratio_floor_from_log(1, k, -epsilon.ln())?.floor),
            _ => None,
        };
        rows.push(FamilyRow {
            n,
            r,
            lambda_m: analysis.spectrum().dominant_value(),
            gap: analysis.spectrum().gap(),
            t_eps,
            t_1meps,
            ratio,
            gap_product: peres.gap_product,
            log_product: peres.log_product,
            ratio_floor,
        });
    }
    Ok(FamilyReport {
        kind: preset.kind().to_string(),
        rows,
    })
}

pub const FAMILY_CSV_HEADER: &str =
    "N,r,lambda_m,gap,t_eps,t_1meps,ratio,gap_product,log_product,ratio_floor";

fn opt_float(v: Option<f64>) -> String {
    v.map(format_float17).unwrap_or_default()
}

/// Serializes a report. CSV uses the fixed header above, 17 significant
/// digits, LF line endings, and empty cells for undefined values; JSON uses
/// null and round-trips losslessly.
pub fn export_report(report: &FamilyReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => {
            let mut out = String::from(FAMILY_CSV_HEADER);
            out.push('\n');
            for row in &report.rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    row.n,
                    row.r,
                    format_float17(row.lambda_m),
                    format_float17(row.gap),
                    row.t_eps,
                    row.t_1meps,
                    opt_float(row.ratio),
                    format_float17(row.gap_product),
                    format_float17(row.log_product),
                    opt_float(row.ratio_floor),
                ));
            }
            out
        }
        ReportFormat::Json => {
            let mut out = serde_json::to_string_pretty(report).expect("report serializes");
            out.push('\n');
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_single_construction() {
        let preset = FamilyPreset::CycleSingle {
            sizes: (6..=12).map(|e| 1u64 << e).collect(),
        };
        let walks = build_family(&preset).unwrap();
        assert_eq!(walks.len(), 7);
        assert!(walks.iter().all(|w| w.rank() == 1));
        assert_eq!(walks[0].group().order(), 64);
        assert_eq!(walks[6].group().order(), 4096);
    }

    #[test]
    fn hypercube_construction() {
        let preset = FamilyPreset::Hypercube {
            dims: (4..=11).collect(),
        };
        let walks = build_family(&preset).unwrap();
        assert_eq!(walks.len(), 8);
        for (w, d) in walks.iter().zip(4..=11usize) {
            assert_eq!(w.rank(), d);
            assert_eq!(w.group().order(), 1u64 << d);
        }
    }

    #[test]
    fn sqrt_rule() {
        let preset = FamilyPreset::CycleSqrt { sizes: vec![100] };
        let walks = build_family(&preset).unwrap();
        assert_eq!(walks[0].generators()[1].coords(), &[10]);
    }

    #[test]
    fn sizes_must_increase() {
        let preset = FamilyPreset::CycleSingle {
            sizes: vec![8, 8, 16],
        };
        assert!(matches!(
            build_family(&preset),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn bad_instance_is_named() {
        let preset = FamilyPreset::Custom {
            walks: vec![
                WalkDescriptor {
                    moduli: vec![8],
                    generators: vec![vec![1]],
                },
                WalkDescriptor {
                    moduli: vec![4],
                    generators: vec![vec![2]],
                },
            ],
        };
        match build_family(&preset) {
            Err(Error::FamilyInstance { n, source }) => {
                assert_eq!(n, 4);
                assert!(matches!(*source, Error::NotIrreducible { .. }));
            }
            other => panic!("expected FamilyInstance, got {other:?}"),
        }
    }

    #[test]
    fn empty_family_profile() {
        let preset = FamilyPreset::Custom { walks: vec![] };
        let report = family_profile(&preset, 0.05, None, None).unwrap();
        assert!(report.rows.is_empty());
        let csv = export_report(&report, ReportFormat::Csv);
        assert_eq!(csv, format!("{FAMILY_CSV_HEADER}\n"));
    }

    #[test]
    fn profile_small_cycles() {
        let preset = FamilyPreset::CycleSingle {
            sizes: vec![16, 32],
        };
        let report = family_profile(&preset, 0.05, None, Some(2.0)).unwrap();
        assert_eq!(report.rows.len(), 2);
        for row in &report.rows {
            assert_eq!(row.r, 1);
            assert!(row.ratio.is_some());
            assert!(row.t_eps >= row.t_1meps);
            assert!(row.gap > 0.0);
            assert!(row.ratio_floor.is_some());
        }
        assert!(report.rows[0].n < report.rows[1].n);
    }

    #[test]
    fn csv_deterministic_and_shaped() {
        let preset = FamilyPreset::CycleSingle { sizes: vec![16] };
        let report = family_profile(&preset, 0.05, None, None).unwrap();
        let a = export_report(&report, ReportFormat::Csv);
        let b = export_report(&report, ReportFormat::Csv);
        assert_eq!(a, b);
        let lines: Vec<&str> = a.trim_end().lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], FAMILY_CSV_HEADER);
        // ratio_floor column is empty without kappa.
        assert!(lines[1].ends_with(','));
    }

    #[test]
    fn json_round_trip() {
        let preset = FamilyPreset::CycleSingle { sizes: vec![8, 16] };
        let report = family_profile(&preset, 0.2, None, Some(2.0)).unwrap();
        let json = export_report(&report, ReportFormat::Json);
        let parsed: FamilyReport = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, report);
    }

    #[test]
    fn undefined_ratio_serializes_empty() {
        let preset = FamilyPreset::Custom {
            walks: vec![WalkDescriptor {
                moduli: vec![4],
                generators: vec![vec![1]],
            }],
        };
        let report = family_profile(&preset, 0.05, None, None).unwrap();
        assert_eq!(report.rows[0].ratio, None);
        let csv = export_report(&report, ReportFormat::Csv);
        let row = csv.lines().nth(1).unwrap();
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells[6], "");
    }
}
