//! The fixed desk-scale verification corpus.
//!
//! A spread of cyclic walks of ranks 1..3 together with two product groups.
//! The two-generator instances are chosen so that every n >= 16 admits a
//! mode with all pairings within 1/(2*pi) (checked by the pigeonhole test);
//! above n ~ 40 any generator pair qualifies.

use crate::group::{AbelianGroup, WalkSpec};

/// Convenience constructor for cyclic walks; panics on invalid input, which
/// in this module would be a corpus definition bug.
pub fn cyclic(n: u64, gens: &[i64]) -> WalkSpec {
    let group = AbelianGroup::new(&[n]).expect("corpus modulus");
    let gens: Vec<_> = gens
        .iter()
        .map(|&a| group.element(&[a]).expect("corpus generator"))
        .collect();
    WalkSpec::new(group, gens, false).expect("corpus walk")
}

pub fn product(moduli: &[u64], gens: &[&[i64]]) -> WalkSpec {
    let group = AbelianGroup::new(moduli).expect("corpus moduli");
    let gens: Vec<_> = gens
        .iter()
        .map(|g| group.element(g).expect("corpus generator"))
        .collect();
    WalkSpec::new(group, gens, false).expect("corpus walk")
}

/// Walks used for the distance/oracle suites: cyclic orders up to 512 at
/// ranks 1..3, plus (Z/2)^2 and Z/4 x Z/6.
pub fn mixing_corpus() -> Vec<WalkSpec> {
    let mut walks = vec![
        cyclic(4, &[1]),
        cyclic(8, &[1]),
        cyclic(16, &[1]),
        cyclic(27, &[1]),
        cyclic(64, &[1]),
        cyclic(100, &[3]),
        cyclic(128, &[1]),
        cyclic(512, &[1]),
        cyclic(16, &[3, 5]),
        cyclic(25, &[4, 6]),
        cyclic(64, &[1, 8]),
        cyclic(128, &[1, 11]),
        cyclic(512, &[1, 23]),
        cyclic(32, &[1, 6, 10]),
        cyclic(128, &[1, 5, 21]),
        cyclic(512, &[1, 31, 101]),
    ];
    walks.push(product(&[2, 2], &[&[1, 0], &[0, 1]]));
    walks.push(product(&[4, 6], &[&[1, 0], &[0, 1]]));
    walks
}

/// Cyclic walks up to order 4096 for the inequality harness.
pub fn cyclic_bounds_corpus() -> Vec<WalkSpec> {
    let mut walks: Vec<WalkSpec> = mixing_corpus()
        .into_iter()
        .filter(|w| w.group().is_cyclic())
        .collect();
    walks.extend([
        cyclic(1024, &[1]),
        cyclic(4096, &[1]),
        cyclic(1024, &[1, 32]),
        cyclic(4096, &[1, 64]),
        cyclic(1024, &[1, 9, 100]),
        cyclic(4096, &[1, 17, 289]),
    ]);
    walks
}

/// Compact instance label, e.g. `Z8{1}`, `Z16{3;5}`, `Z4xZ6{1.0;0.1}`.
/// Comma-free so it can sit in a CSV cell.
pub fn walk_label(walk: &WalkSpec) -> String {
    let moduli = walk
        .group()
        .moduli()
        .iter()
        .map(|m| format!("Z{m}"))
        .collect::<Vec<_>>()
        .join("x");
    let gens = walk
        .generators()
        .iter()
        .map(|g| {
            g.coords()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(".")
        })
        .collect::<Vec<_>>()
        .join(";");
    format!("{moduli}{{{gens}}}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_builds_and_is_irreducible() {
        assert_eq!(mixing_corpus().len(), 18);
        assert!(cyclic_bounds_corpus().len() > 18);
        for w in cyclic_bounds_corpus() {
            assert!(w.group().order() <= 4096);
            assert!(w.group().is_cyclic());
        }
    }

    #[test]
    fn labels() {
        assert_eq!(walk_label(&cyclic(8, &[1])), "Z8{1}");
        assert_eq!(walk_label(&cyclic(16, &[3, 5])), "Z16{3;5}");
        assert_eq!(
            walk_label(&product(&[4, 6], &[&[1, 0], &[0, 1]])),
            "Z4xZ6{1.0;0.1}"
        );
    }
}
