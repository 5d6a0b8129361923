//! Finite abelian groups, lazy symmetric walk specifications, and an exact
//! convolution-based evolution oracle.
//!
//! A group is a product of cyclic factors Z/n_1 x ... x Z/n_d. Elements are
//! coordinate tuples reduced modulo the factor sizes, addressed by a
//! mixed-radix index with the first modulus most significant. A walk of rank
//! r applies one of the 2r+1 symbols {+a_1, -a_1, ..., +a_r, -a_r, 0}, each
//! with probability 1/(2r+1); masses of coincident symbols accumulate.

use crate::error::{Error, Result};

/// Group orders above this are refused; every analysis here materializes
/// dense length-N vectors.
pub const MAX_ORDER: u64 = 1 << 22;

/// A finite product of cyclic groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    moduli: Vec<u64>,
    order: u64,
    /// strides[j] = product of moduli[j+1..]; index = sum coords[j]*strides[j].
    strides: Vec<u64>,
    /// lcm of the moduli; common denominator for character phases.
    phase_lcm: u64,
}

/// An element given by reduced coordinates, one per cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl AbelianGroup {
    /// Builds the group Z/n_1 x ... x Z/n_d. Every modulus must be >= 2.
    pub fn new(moduli: &[u64]) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidGroup("empty modulus list".into()));
        }
        let mut order: u64 = 1;
        let mut phase_lcm: u64 = 1;
        for &m in moduli {
            if m < 2 {
                return Err(Error::InvalidGroup(format!("modulus {m} < 2")));
            }
            order = order
                .checked_mul(m)
                .filter(|&n| n <= MAX_ORDER)
                .ok_or_else(|| {
                    Error::InvalidGroup(format!("order exceeds the dense-vector cap {MAX_ORDER}"))
                })?;
            phase_lcm = phase_lcm / gcd(phase_lcm, m) * m;
        }
        let mut strides = vec![1u64; moduli.len()];
        for j in (0..moduli.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * moduli[j + 1];
        }
        Ok(Self {
            moduli: moduli.to_vec(),
            order,
            strides,
            phase_lcm,
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// Number of cyclic factors.
    pub fn factor_count(&self) -> usize {
        self.moduli.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.moduli.len() == 1
    }

    /// Least common multiple of the moduli.
    pub fn phase_lcm(&self) -> u64 {
        self.phase_lcm
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.moduli.len()],
        }
    }

    /// Builds an element from signed coordinates, reducing each modulo its
    /// factor size.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.moduli.len() {
            return Err(Error::ShapeMismatch {
                got: coords.len(),
                want: self.moduli.len(),
            });
        }
        let reduced = coords
            .iter()
            .zip(&self.moduli)
            .map(|(&c, &m)| c.rem_euclid(m as i64) as u64)
            .collect();
        Ok(GroupElement { coords: reduced })
    }

    /// Mixed-radix index of an element, first modulus most significant.
    pub fn index_of(&self, elem: &GroupElement) -> usize {
        elem.coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c * s)
            .sum::<u64>() as usize
    }

    /// Inverse of [`index_of`](Self::index_of).
    pub fn element_at(&self, index: usize) -> GroupElement {
        debug_assert!((index as u64) < self.order);
        let mut rem = index as u64;
        let coords = self
            .strides
            .iter()
            .map(|&s| {
                let c = rem / s;
                rem %= s;
                c
            })
            .collect();
        GroupElement { coords }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.moduli)
            .map(|((&x, &y), &m)| (x + y) % m)
            .collect();
        GroupElement { coords }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        let coords = a
            .coords
            .iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| (m - x) % m)
            .collect();
        GroupElement { coords }
    }
}

/// A lazy symmetric walk: generators a_1..a_r, hold probability 1/(2r+1).
#[derive(Debug, Clone)]
pub struct WalkSpec {
    group: AbelianGroup,
    generators: Vec<GroupElement>,
    /// One-step support as (element index, mass), ascending by index.
    step_support: Vec<(usize, f64)>,
    type_valid: bool,
}

impl WalkSpec {
    /// Validates and builds a walk. Fails if the generators do not generate
    /// the whole group, or if `require_type` is set and the order falls
    /// below pi^r.
    pub fn new(
        group: AbelianGroup,
        generators: Vec<GroupElement>,
        require_type: bool,
    ) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidParameter("no generators supplied".into()));
        }
        for g in &generators {
            if g.coords.len() != group.factor_count() {
                return Err(Error::ShapeMismatch {
                    got: g.coords.len(),
                    want: group.factor_count(),
                });
            }
        }
        let reachable = generated_subgroup_size(&group, &generators);
        if reachable != group.order() {
            return Err(Error::NotIrreducible {
                subgroup: reachable,
                order: group.order(),
            });
        }
        let r = generators.len();
        let type_valid = group.order() as f64 >= std::f64::consts::PI.powi(r as i32);
        if require_type && !type_valid {
            return Err(Error::TypeCondition {
                order: group.order(),
                rank: r,
            });
        }

        // 2r+1 symbols, each of mass 1/(2r+1); coincident symbols accumulate.
        let mut counts = vec![0u32; group.order() as usize];
        counts[group.index_of(&group.identity())] += 1;
        for g in &generators {
            counts[group.index_of(g)] += 1;
            counts[group.index_of(&group.neg(g))] += 1;
        }
        let symbols = (2 * r + 1) as f64;
        let step_support = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(idx, &c)| (idx, c as f64 / symbols))
            .collect();

        Ok(Self {
            group,
            generators,
            step_support,
            type_valid,
        })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Number of generators r.
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Hold probability 1/(2r+1).
    pub fn hold_prob(&self) -> f64 {
        1.0 / (2 * self.rank() + 1) as f64
    }

    /// Whether the order satisfies N >= pi^r.
    pub fn type_valid(&self) -> bool {
        self.type_valid
    }

    /// One-step support as (element index, mass) pairs, ascending by index.
    pub fn step_support(&self) -> &[(usize, f64)] {
        &self.step_support
    }

    /// Dense one-step distribution from the identity.
    pub fn step_distribution(&self) -> Distribution {
        let mut mass = vec![0.0; self.group.order() as usize];
        for &(idx, m) in &self.step_support {
            mass[idx] = m;
        }
        Distribution { mass }
    }

    /// Exact t-fold convolution of `dist` with the step distribution, by
    /// direct summation. This is the brute-force oracle the spectral path is
    /// checked against.
    pub fn evolve(&self, dist: &Distribution, t: u64) -> Distribution {
        let n = self.group.order() as usize;
        debug_assert_eq!(dist.mass.len(), n);
        // Precompute x -> x + s for each support symbol.
        let shift_maps: Vec<Vec<usize>> = self
            .step_support
            .iter()
            .map(|&(s_idx, _)| {
                let s = self.group.element_at(s_idx);
                (0..n)
                    .map(|x| self.group.index_of(&self.group.add(&self.group.element_at(x), &s)))
                    .collect()
            })
            .collect();
        let mut cur = dist.mass.clone();
        let mut next = vec![0.0; n];
        for _ in 0..t {
            next.iter_mut().for_each(|v| *v = 0.0);
            for (map, &(_, m)) in shift_maps.iter().zip(&self.step_support) {
                for (x, &target) in map.iter().enumerate() {
                    next[target] += cur[x] * m;
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        Distribution { mass: cur }
    }
}

/// Size of the subgroup generated by the given elements (breadth-first
/// closure; O(N*r)).
fn generated_subgroup_size(group: &AbelianGroup, generators: &[GroupElement]) -> u64 {
    let n = group.order() as usize;
    let mut seen = vec![false; n];
    let mut queue = vec![group.index_of(&group.identity())];
    seen[queue[0]] = true;
    let mut count = 1u64;
    while let Some(idx) = queue.pop() {
        let elem = group.element_at(idx);
        for g in generators {
            // +g suffices for closure: the subgroup is finite, so inverses
            // are reached as repeated additions.
            let next = group.index_of(&group.add(&elem, g));
            if !seen[next] {
                seen[next] = true;
                count += 1;
                queue.push(next);
            }
        }
    }
    count
}

/// A dense probability vector indexed by element index.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    mass: Vec<f64>,
}

impl Distribution {
    /// Validates non-negativity and total mass 1 within 1e-12.
    pub fn new(mass: Vec<f64>) -> Result<Self> {
        if mass.iter().any(|&m| m < 0.0 || !m.is_finite()) {
            return Err(Error::InvalidParameter(
                "distribution entries must be finite and non-negative".into(),
            ));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "distribution mass {total} differs from 1 by more than 1e-12"
            )));
        }
        Ok(Self { mass })
    }

    /// Point mass at the identity of `group`.
    pub fn point_mass(group: &AbelianGroup) -> Self {
        let mut mass = vec![0.0; group.order() as usize];
        mass[group.index_of(&group.identity())] = 1.0;
        Self { mass }
    }

    /// Uniform distribution 1/N.
    pub fn uniform(group: &AbelianGroup) -> Self {
        let n = group.order();
        Self {
            mass: vec![1.0 / n as f64; n as usize],
        }
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// L1 distance to another distribution.
    pub fn l1_distance(&self, other: &Distribution) -> f64 {
        self.mass
            .iter()
            .zip(&other.mass)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}
