//! Characters and exact eigenvalues of the walk operator.
//!
//! The characters chi_k(x) = exp(2*pi*i * sum_j k_j x_j / n_j) diagonalize
//! every convolution operator on the group, so the walk operator has the
//! closed-form eigenvalue
//!
//!   lambda_k = ( 1 + 2 * sum_i cos(2*pi * <k, a_i>) ) / (2r + 1),
//!
//! where <k, a> = sum_j k_j a_{i,j} / n_j is the character pairing. Phases
//! are reduced as exact integers over the lcm of the moduli before any
//! floating-point work, and folded into [0, 1/2] so that lambda_k and
//! lambda_{-k} are computed from bitwise-identical cosine arguments.

use crate::error::Result;
use crate::group::{AbelianGroup, WalkSpec};

/// Index of a character, one coordinate per cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharacterIndex {
    coords: Vec<u64>,
}

impl CharacterIndex {
    /// Builds a character index from signed coordinates, reducing each
    /// modulo its factor size.
    pub fn new(group: &AbelianGroup, coords: &[i64]) -> Result<Self> {
        let elem = group.element(coords)?;
        Ok(Self {
            coords: elem.coords().to_vec(),
        })
    }

    /// The character with the given mixed-radix index.
    pub fn from_index(group: &AbelianGroup, index: usize) -> Self {
        Self {
            coords: group.element_at(index).coords().to_vec(),
        }
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    /// Mixed-radix index of this character.
    pub fn index(&self, group: &AbelianGroup) -> usize {
        self.coords
            .iter()
            .zip(group.moduli())
            .fold((0u64, group.order()), |(acc, span), (&c, &m)| {
                let span = span / m;
                (acc + c * span, span)
            })
            .0 as usize
    }

    pub fn is_trivial(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// Exact integer numerator of the pairing sum_j k_j x_j / n_j over the
/// common denominator L = lcm(n_j), reduced mod L.
pub(crate) fn pairing_numerator(group: &AbelianGroup, k: &[u64], x: &[u64]) -> u64 {
    let l = group.phase_lcm();
    let mut acc = 0u64;
    for ((&kj, &xj), &nj) in k.iter().zip(x).zip(group.moduli()) {
        acc = (acc + (kj * xj) % nj * (l / nj)) % l;
    }
    acc
}

/// Folds a phase numerator p/L into min(p, L-p)/L; cos is even and
/// 1-periodic, so this leaves the cosine unchanged while making opposite
/// characters produce identical arguments.
pub(crate) fn fold_phase(p: u64, l: u64) -> u64 {
    p.min(l - p) % l
}

/// All N eigenvalues of a walk, with the dominant nontrivial mode.
#[derive(Debug, Clone)]
pub struct Spectrum {
    values: Vec<f64>,
    dominant_index: usize,
    dominant_value: f64,
}

impl Spectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mixed-radix index of the dominant nontrivial mode k_m.
    pub fn dominant_index(&self) -> usize {
        self.dominant_index
    }

    pub fn dominant_character(&self, group: &AbelianGroup) -> CharacterIndex {
        CharacterIndex::from_index(group, self.dominant_index)
    }

    /// Signed eigenvalue lambda_m at the dominant mode.
    pub fn dominant_value(&self) -> f64 {
        self.dominant_value
    }

    /// |lambda_m|.
    pub fn dominant_abs(&self) -> f64 {
        self.dominant_value.abs()
    }

    /// Spectral gap 1 - |lambda_m|.
    pub fn gap(&self) -> f64 {
        1.0 - self.dominant_value.abs()
    }
}

impl WalkSpec {
    /// Exact eigenvalue of the walk operator at character `k`.
    pub fn eigenvalue(&self, k: &CharacterIndex) -> f64 {
        let group = self.group();
        let l = group.phase_lcm();
        let lf = l as f64;
        let mut acc = 0.0;
        for a in self.generators() {
            let p = fold_phase(pairing_numerator(group, k.coords(), a.coords()), l);
            acc += (std::f64::consts::TAU * (p as f64 / lf)).cos();
        }
        (1.0 + 2.0 * acc) / (2 * self.rank() + 1) as f64
    }

    /// All N eigenvalues, indexed like elements. The dominant mode is the
    /// k != 0 maximizing |lambda_k|; ties break to the smallest index, so
    /// the result is independent of evaluation order.
    pub fn spectrum(&self) -> Spectrum {
        let n = self.group().order() as usize;
        let mut values = Vec::with_capacity(n);
        for idx in 0..n {
            let k = CharacterIndex::from_index(self.group(), idx);
            values.push(self.eigenvalue(&k));
        }
        let mut dominant_index = 1;
        let mut best = values[1].abs();
        for (idx, &v) in values.iter().enumerate().skip(2) {
            if v.abs() > best {
                best = v.abs();
                dominant_index = idx;
            }
        }
        Spectrum {
            dominant_value: values[dominant_index],
            values,
            dominant_index,
        }
    }
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
    fn trivial_character_has_eigenvalue_one() {
        let w = cyclic_walk(12, &[1, 5]);
        let k0 = CharacterIndex::new(w.group(), &[0]).unwrap();
        assert_eq!(w.eigenvalue(&k0), 1.0);
    }

    #[test]
    fn z4_eigenvalues() {
        let w = cyclic_walk(4, &[1]);
        let k2 = CharacterIndex::new(w.group(), &[2]).unwrap();
        assert!((w.eigenvalue(&k2) - (-1.0 / 3.0)).abs() < 1e-15);
        let s = w.spectrum();
        let expected = [1.0, 1.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0];
        for (a, b) in s.values().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(s.dominant_index(), 1);
        assert!((s.dominant_value() - 1.0 / 3.0).abs() < 1e-15);
        assert!((s.gap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn z8_dominant_mode() {
        let w = cyclic_walk(8, &[1]);
        let s = w.spectrum();
        let expected = (1.0 + std::f64::consts::SQRT_2) / 3.0;
        assert_eq!(s.dominant_index(), 1);
        assert!((s.dominant_value() - expected).abs() < 1e-15);
        assert!((s.gap() - (1.0 - expected)).abs() < 1e-15);
    }

    #[test]
    fn product_group_pairing() {
        let g = AbelianGroup::new(&[2, 2]).unwrap();
        let gens = vec![g.element(&[1, 0]).unwrap(), g.element(&[0, 1]).unwrap()];
        let w = WalkSpec::new(g, gens, false).unwrap();
        let k11 = CharacterIndex::new(w.group(), &[1, 1]).unwrap();
        assert!((w.eigenvalue(&k11) - (-0.6)).abs() < 1e-15);
        let s = w.spectrum();
        assert!((s.gap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn eigenvalue_symmetric_under_negation() {
        let w = cyclic_walk(24, &[1, 7]);
        let g = w.group();
        for idx in 0..24usize {
            let k = CharacterIndex::from_index(g, idx);
            let neg = CharacterIndex::from_index(g, g.index_of(&g.neg(&g.element_at(idx))));
            // Bitwise equality: folded phases coincide exactly.
            assert_eq!(w.eigenvalue(&k).to_bits(), w.eigenvalue(&neg).to_bits());
        }
    }

    #[test]
    fn eigenvalues_within_analytic_range() {
        for (n, gens) in [(16u64, vec![3i64, 5]), (27, vec![1, 4, 13])] {
            let w = cyclic_walk(n, &gens);
            let r = w.rank() as f64;
            let floor = (1.0 - 2.0 * r) / (2.0 * r + 1.0);
            for &v in w.spectrum().values() {
                assert!(v <= 1.0 && v >= floor - 1e-12);
            }
        }
    }

    #[test]
    fn dominant_mode_deterministic() {
        let w = cyclic_walk(100, &[3]);
        let a = w.spectrum();
        let b = w.spectrum();
        assert_eq!(a.dominant_index(), b.dominant_index());
        assert_eq!(a.dominant_value().to_bits(), b.dominant_value().to_bits());
    }
}
