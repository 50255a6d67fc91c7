//! Seeded random bound quivers for property suites.
//!
//! The generator draws quivers whose underlying graph is a path on 2 to 4
//! vertices, with random orientation and a random set of zero relations of
//! length two. Every such algebra is a quotient of a path algebra of type
//! A_n with n <= 4, whose indecomposables are thin of dimension at most n,
//! so a catalog with `max_dim = 4` is complete.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Arrow, BoundQuiverSpec, Quiver, Relation, Term};
use crate::linalg::Fp;
use crate::spec_file::render_spec;

const LABELS: [&str; 3] = ["a", "b", "c"];

pub fn random_type_a_spec(rng: &mut impl Rng) -> BoundQuiverSpec {
    let n = rng.gen_range(2..=4usize);
    let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let arrows: Vec<Arrow> = (0..n - 1)
        .map(|i| {
            let (source, target) = if rng.gen_bool(0.5) {
                (i, i + 1)
            } else {
                (i + 1, i)
            };
            Arrow {
                label: LABELS[i].to_string(),
                source,
                target,
            }
        })
        .collect();
    let mut relations = Vec::new();
    for (i, x) in arrows.iter().enumerate() {
        for (j, y) in arrows.iter().enumerate() {
            if x.target == y.source && rng.gen_bool(0.5) {
                relations.push(Relation {
                    terms: vec![Term {
                        coeff: 1,
                        path: vec![i, j],
                    }],
                });
            }
        }
    }
    BoundQuiverSpec {
        field: Fp::GF2,
        quiver: Quiver::new(vertices, arrows).expect("valid quiver"),
        relations,
    }
}

/// `count` pairwise distinct specs drawn from `seed`.
pub fn random_suite(seed: u64, count: usize) -> Vec<BoundQuiverSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<BoundQuiverSpec> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 10_000 {
        attempts += 1;
        let spec = random_type_a_spec(&mut rng);
        if seen.insert(render_spec(&spec)) {
            out.push(spec);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;

    #[test]
    fn reproducible_and_buildable() {
        let a = random_suite(7, 20);
        let b = random_suite(7, 20);
        assert_eq!(a.len(), 20);
        assert_eq!(a, b);
        for spec in &a {
            let alg = build_algebra(spec).unwrap();
            assert!(!spec.quiver.has_oriented_cycle());
            assert!(spec.quiver.arrows.len() <= 5);
            assert!(alg.check_structure().is_ok());
        }
    }
}
