//! Acceptance run. Prints one PASS/FAIL line per criterion and fails if any
//! criterion fails. `QTORSION_SEED` overrides the random-suite seed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use quiver_torsion::algebra::{FDAlgebra, VertexSet};
use quiver_torsion::catalog::{enumerate_catalog, CatalogOptions, IndecompCatalog};
use quiver_torsion::fixtures;
use quiver_torsion::left_part::{is_hereditary, left_part, prop35_check};
use quiver_torsion::linalg::{nullspace_basis, Fp, Matrix};
use quiver_torsion::module::{
    ext1_dim, hom_dim, is_injective, is_iso, off_corner_bimodule, quotients_all, RightModule,
    DEFAULT_ENUM_CAP,
};
use quiver_torsion::random::random_suite;
use quiver_torsion::torsion::{
    arrow_source_check, classify_all_sigma, gldim_equality_check, prop23_conditions,
    splitness_check, theorem_crosscheck, Caps, ClassificationReport,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn complete_catalog(a: &Arc<FDAlgebra>, max_dim: usize) -> IndecompCatalog {
    enumerate_catalog(
        a,
        &CatalogOptions {
            max_dim,
            assume_complete: true,
            ..Default::default()
        },
    )
    .expect("catalog within budget")
}

fn set(ix: &[usize]) -> VertexSet {
    VertexSet::from_indices(ix.iter().copied())
}

struct Suite {
    name: String,
    catalog: IndecompCatalog,
    classification: ClassificationReport,
}

fn suite_entry(name: String, a: Arc<FDAlgebra>, max_dim: usize) -> Suite {
    let catalog = complete_catalog(&a, max_dim);
    let classification = classify_all_sigma(&a, &Caps::default());
    Suite {
        name,
        catalog,
        classification,
    }
}

fn random_algebras(seed: u64) -> Vec<Suite> {
    random_suite(seed, 20)
        .into_iter()
        .enumerate()
        .map(|(i, spec)| {
            assert!(spec.quiver.vertices.len() <= 4 && spec.quiver.arrows.len() <= 5);
            assert!(!spec.quiver.has_oriented_cycle());
            assert!(spec
                .relations
                .iter()
                .all(|r| r.terms.len() == 1 && r.terms[0].path.len() == 2));
            let a = quiver_torsion::algebra::build_algebra(&spec).expect("random spec builds");
            suite_entry(format!("random#{i}"), a, 4)
        })
        .collect()
}

// ---------------------------------------------------------------------------

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let a = fixtures::e1();
    let c = complete_catalog(&a, 4);
    let r = left_part(&c, &Caps::default());
    let labels = c.labels_of(&r.members);
    let p1 = c.projective_index(0).unwrap();
    let p2 = c.projective_index(1).unwrap();
    ensure(
        r.members.indices == {
            let mut v = vec![p1, p2];
            v.sort();
            v
        },
        || format!("L_A = {labels:?}"),
    )?;
    let b = r.left_support.as_ref().ok_or("left support is zero")?;
    let q = b.ext_quiver();
    ensure(
        b.dim() == 3
            && q.vertices == ["1", "2"]
            && q.arrows.len() == 1
            && q.arrows[0].source == 1
            && q.arrows[0].target == 0
            && is_hereditary(b),
        || format!("left support is not the path algebra of 1 <- 2: {q:?}"),
    )?;
    let ae = r.abelian_exact();
    ensure(ae.is_fail(), || format!("abelian exact verdict {ae:?}"))?;
    let w = ae.witness().unwrap_or_default();
    ensure(w.contains("coker") && w.contains("S2"), || {
        format!("witness {w}")
    })?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!(
        "L_A = {{{}}}, witness {w}, {t:.2?}",
        labels.join(", ")
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let a = fixtures::e2();
    let h_set = set(&[0, 1]);
    let classification = classify_all_sigma(&a, &Caps::default());
    let rec = classification.record(h_set).ok_or("no record for {1,2}")?;
    ensure(rec.valid == Some(true), || {
        format!("{{1,2}} not valid: {rec:?}")
    })?;
    ensure(rec.m_dimvec == [1, 2], || {
        format!("M dimvec {:?}", rec.m_dimvec)
    })?;
    ensure(
        rec.m_injective && rec.m_hereditary_injective.is_pass(),
        || "M not (hereditary) injective".into(),
    )?;
    let h = Arc::new(a.corner(h_set).unwrap());
    let m = off_corner_bimodule(&a, h_set, &h);
    let target = RightModule::projective(&h, 1)
        .unwrap()
        .direct_sum(&RightModule::simple(&h, 1).unwrap());
    ensure(is_iso(&m, &target, DEFAULT_ENUM_CAP).unwrap(), || {
        "M is not P2 + S2 over H".into()
    })?;

    let c = complete_catalog(&a, 5);
    let r = left_part(&c, &Caps::default());
    ensure(
        r.members == c.supported_in(h_set) && r.members.len() == 3,
        || format!("L_A = {:?}", c.labels_of(&r.members)),
    )?;
    ensure(r.abelian_exact().is_pass(), || {
        format!("{:?}", r.abelian_exact())
    })?;
    let p = prop35_check(&c, &r).map_err(|e| e.to_string())?;
    ensure(
        p.left_part_abelian_exact && p.left_part_is_ind_h && p.m_h_injective,
        || format!("{p:?}"),
    )?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!(
        "L_A = {{{}}}, {t:.2?}",
        c.labels_of(&r.members).join(", ")
    ))
}

/// Definition-level test of one vertex subset, independent of the
/// corner-module machinery: the modules supported in `sigma` must be the
/// torsion-free class of a split torsion pair and be closed under
/// quotients, checked on the whole submodule lattice of each entry.
fn oracle_valid(c: &IndecompCatalog, sigma: VertexSet) -> bool {
    let n = c.len();
    let supported = |m: &RightModule| m.support().is_subset(sigma);
    let f: Vec<bool> = c.entries().iter().map(supported).collect();
    let hom = |x: &RightModule, y: &RightModule| hom_dim(x, y);
    let t: Vec<bool> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| f[j])
                .all(|j| hom(c.entry(i), c.entry(j)) == 0)
        })
        .collect();
    // F is exactly the right orthogonal of T.
    let t_perp: Vec<bool> = (0..n)
        .map(|j| {
            (0..n)
                .filter(|&i| t[i])
                .all(|i| hom(c.entry(i), c.entry(j)) == 0)
        })
        .collect();
    if t_perp != f {
        return false;
    }
    // Split: every indecomposable lies on one side.
    if (0..n).any(|i| !t[i] && !f[i]) {
        return false;
    }
    // Closed under quotients.
    (0..n).filter(|&j| f[j]).all(|j| {
        quotients_all(c.entry(j), DEFAULT_ENUM_CAP)
            .expect("small lattice")
            .iter()
            .all(|(q, _)| supported(q))
    })
}

fn criterion_3() -> Outcome {
    let mut lines = Vec::new();
    for (name, a, d, expected) in [
        (
            "E1",
            fixtures::e1(),
            4,
            vec![vec![], vec![0], vec![0, 1, 2]],
        ),
        (
            "E2",
            fixtures::e2(),
            5,
            vec![vec![], vec![0], vec![0, 1], vec![0, 1, 2]],
        ),
    ] {
        let expected: Vec<VertexSet> = expected.iter().map(|s| set(s)).collect();
        let got = classify_all_sigma(&a, &Caps::default()).valid_sets();
        let c = complete_catalog(&a, d);
        let oracle: Vec<VertexSet> = (0u64..(1 << a.vertex_count()))
            .map(VertexSet)
            .filter(|&s| oracle_valid(&c, s))
            .collect();
        ensure(oracle == expected, || {
            format!("{name}: oracle gives {oracle:?}")
        })?;
        ensure(got == expected, || {
            format!("{name}: classify gives {got:?}")
        })?;
        let shown: Vec<String> = got.iter().map(|s| s.display(a.vertex_labels())).collect();
        lines.push(format!("{name} {}", shown.join(" ")));
    }
    Ok(lines.join("; "))
}

fn criterion_4(random: &[Suite], elapsed_setup: Duration) -> Outcome {
    let start = Instant::now();
    let mut subcats = 0;
    let mut inconclusive = 0;
    for s in random {
        let c = &s.catalog;
        ensure(c.missing_standard_modules().is_empty(), || {
            format!(
                "{}: catalog misses {:?}",
                s.name,
                c.missing_standard_modules()
            )
        })?;
        for sub in c.singleton_closures() {
            let r = prop23_conditions(c, &sub, c.max_dim(), &Caps::default());
            subcats += 1;
            inconclusive += r.conditions[1..]
                .iter()
                .filter(|v| v.is_inconclusive())
                .count();
            ensure(r.equivalence_holds(), || {
                format!(
                    "{}: {:?} gives {:?}",
                    s.name,
                    c.labels_of(&sub),
                    r.conditions
                )
            })?;
        }
    }
    let t = start.elapsed() + elapsed_setup;
    ensure(t < Duration::from_secs(300), || format!("took {t:?}"))?;
    Ok(format!(
        "{} algebras, {subcats} subcategories, {inconclusive} inconclusive verdicts, {t:.2?}",
        random.len()
    ))
}

fn criterion_5(all: &[&Suite]) -> Outcome {
    for s in all {
        let x = theorem_crosscheck(&s.catalog, &s.classification, &Caps::default());
        ensure(x.passes(), || format!("{}: {x:?}", s.name))?;
    }
    Ok(format!("{} algebras", all.len()))
}

fn criterion_6(all: &[&Suite]) -> Outcome {
    let mut pairs = 0;
    for s in all {
        let a = s.catalog.algebra();
        for sigma in s.classification.valid_sets() {
            pairs += 1;
            let r = splitness_check(&s.catalog, sigma);
            ensure(r.all_split(), || format!("{} {sigma:?}: {r:?}", s.name))?;
            let v = arrow_source_check(a, sigma);
            ensure(v.is_pass(), || format!("{} {sigma:?}: {v:?}", s.name))?;
        }
    }
    Ok(format!("{pairs} valid subsets"))
}

fn criterion_7(random: &[Suite]) -> Outcome {
    let e2 = complete_catalog(&fixtures::e2(), 5);
    let g = gldim_equality_check(&e2, set(&[0, 1]), 8);
    ensure(
        g.corner_gldim == Some(1) && g.sup_pd == Some(1) && g.verdict.is_pass(),
        || format!("E2 {{1,2}}: {g:?}"),
    )?;
    let (mut conclusive, mut skipped) = (0, 0);
    for s in random {
        for sigma in s.classification.valid_sets() {
            let g = gldim_equality_check(&s.catalog, sigma, 8);
            if g.verdict.is_inconclusive() {
                skipped += 1;
                continue;
            }
            conclusive += 1;
            ensure(g.verdict.is_pass(), || {
                format!("{} {sigma:?}: {g:?}", s.name)
            })?;
        }
    }
    Ok(format!(
        "E2 gl.dim 1; {conclusive} conclusive random cases, {skipped} above the cap"
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for p in [2u8, 3, 5] {
        let f = Fp::new(p).unwrap();
        for _ in 0..50 {
            let (r, c) = (rng.gen_range(1..7), rng.gen_range(1..7));
            let data = (0..r * c).map(|_| rng.gen_range(0..p)).collect();
            let m = Matrix::from_vec(f, r, c, data);
            let kernel = nullspace_basis(&m);
            ensure(m.rank() + kernel.len() == c, || {
                format!("rank-nullity fails on {m:?}")
            })?;
            for v in &kernel {
                let image: Vec<u8> = (0..r)
                    .map(|i| (0..c).fold(0, |acc, j| f.add(acc, f.mul(m.get(i, j), v[j]))))
                    .collect();
                ensure(image.iter().all(|&x| x == 0), || {
                    "kernel vector not killed".into()
                })?;
            }
        }
    }
    let fixtures = [
        ("E1", fixtures::e1(), 4),
        ("E2", fixtures::e2(), 5),
        ("E2-mod", fixtures::e2_modified(), 5),
        ("one-vertex", fixtures::one_vertex(), 4),
        ("A2", fixtures::a2(), 4),
    ];
    for (name, a, d) in fixtures {
        let n = a.vertex_count();
        let peirce: usize = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .map(|(x, y)| a.peirce_dim(set(&[x]), set(&[y])))
            .sum();
        ensure(peirce == a.dim(), || {
            format!("{name}: Peirce sum {peirce} vs dim {}", a.dim())
        })?;
        let c = complete_catalog(&a, d);
        for x in 0..n {
            let p = RightModule::projective(&a, x).unwrap();
            let i = RightModule::injective(&a, x).unwrap();
            ensure(is_injective(&i), || format!("{name}: I{x} not injective"))?;
            for m in c.entries() {
                ensure(hom_dim(&p, m) == m.dimension_vector()[x], || {
                    format!("{name}: Hom(P{x}, M) differs from the dimension vector")
                })?;
                ensure(ext1_dim(&p, m) == 0, || {
                    format!("{name}: Ext1(P{x}, M) nonzero")
                })?;
            }
        }
        ensure(
            is_hereditary(&a) == (name == "A2" || name == "one-vertex"),
            || format!("{name}: heredity"),
        )?;
    }
    Ok("5 fixtures over GF(2), matrices over GF(2), GF(3), GF(5)".into())
}

fn run(id: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    match &outcome {
        Ok(detail) => println!("PASS criterion {id}: {name} ({detail})"),
        Err(why) => println!("FAIL criterion {id}: {name} ({why})"),
    }
    outcome.is_ok()
}

fn main() {
    let seed = std::env::var("QTORSION_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(2024);
    let setup = Instant::now();
    let random = random_algebras(seed);
    let setup = setup.elapsed();
    let fixed = [
        suite_entry("E1".into(), fixtures::e1(), 4),
        suite_entry("E2".into(), fixtures::e2(), 5),
    ];
    let all: Vec<&Suite> = fixed.iter().chain(&random).collect();
    let results = [
        run(1, "left part of E1", criterion_1),
        run(2, "local extension E2", criterion_2),
        run(3, "classification ground truth", criterion_3),
        run(4, "equivalence of conditions (2)-(6)", || {
            criterion_4(&random, setup)
        }),
        run(5, "subset/subcategory bijection", || criterion_5(&all)),
        run(6, "split pairs and arrow sources", || criterion_6(&all)),
        run(7, "global dimension equality", || criterion_7(&random)),
        run(8, "invariant micro-suite", criterion_8),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed (seed {seed})", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
