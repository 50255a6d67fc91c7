//! Split torsion pairs whose torsion-free class is closed under quotients:
//! the structural vertex-subset test, the catalog-side oracles, and the
//! cross-check between them.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{FDAlgebra, Quiver, VertexSet};
use crate::catalog::{IndecompCatalog, SubcategorySpec};
use crate::error::{Error, Result};
use crate::linalg::{combine, CoeffIter, Matrix, Subspace};
use crate::module::{
    decompose, hereditary_injective_witness, hom_space, inclusion_splits, is_generated_by,
    is_injective, submodules_all, torsion_radical, RightModule,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail(String),
    Inconclusive(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::Inconclusive(_))
    }

    /// `Some(true/false)` when conclusive.
    pub fn decided(&self) -> Option<bool> {
        match self {
            Verdict::Pass => Some(true),
            Verdict::Fail(_) => Some(false),
            Verdict::Inconclusive(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&str> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(s) | Verdict::Inconclusive(s) => Some(s),
        }
    }

    fn from_result(r: Result<Option<String>>) -> Verdict {
        match r {
            Ok(None) => Verdict::Pass,
            Ok(Some(w)) => Verdict::Fail(w),
            Err(e) if e.is_inconclusive() => Verdict::Inconclusive(e.to_string()),
            Err(e) => Verdict::Inconclusive(e.to_string()),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail(_) => "FAIL",
            Verdict::Inconclusive(_) => "INCONCLUSIVE",
        }
    }
}

/// Enumeration caps shared by the checks in this module.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    /// Largest finite set (hom set, subspace lattice) scanned exhaustively.
    pub enum_cap: u128,
    pub pd_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enum_cap: crate::module::DEFAULT_ENUM_CAP,
            pd_cap: 8,
        }
    }
}

/// Text form of a module as a sum of catalog entries, e.g. `P2 + S2`.
pub fn describe(catalog: &IndecompCatalog, m: &RightModule, cap: u128) -> String {
    if m.is_zero() {
        return "0".into();
    }
    match decompose(m, cap) {
        Ok(parts) => parts
            .iter()
            .map(|p| match catalog.identify(p) {
                Some(i) => catalog.label(i).to_string(),
                None => format!("?{:?}", p.dimension_vector()),
            })
            .collect::<Vec<_>>()
            .join(" + "),
        Err(_) => format!("{:?}", m.dimension_vector()),
    }
}

/// `Ok(None)` if every indecomposable summand of `m` is an entry of `c`,
/// otherwise the first offending summand's description.
fn add_membership(
    catalog: &IndecompCatalog,
    c: &SubcategorySpec,
    m: &RightModule,
    cap: u128,
) -> Result<Option<String>> {
    for part in decompose(m, cap)? {
        match catalog.identify(&part) {
            Some(i) if c.contains(i) => {}
            Some(i) => return Ok(Some(catalog.label(i).to_string())),
            None => return Ok(Some(format!("uncatalogued {:?}", part.dimension_vector()))),
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Lemma-style checks on arbitrary subcategories

#[derive(Clone, Debug, Serialize)]
pub struct Lemma21Report {
    /// Closed under predecessors.
    pub predecessor_closed: Verdict,
    /// No nonzero map from outside into `C`.
    pub hom_vanishing: Verdict,
    /// `add(C)` is the torsion-free class of a split torsion pair.
    pub split_torsion_free: Verdict,
}

impl Lemma21Report {
    pub fn verdicts(&self) -> [&Verdict; 3] {
        [
            &self.predecessor_closed,
            &self.hom_vanishing,
            &self.split_torsion_free,
        ]
    }
}

pub fn lemma21_check(catalog: &IndecompCatalog, c: &SubcategorySpec) -> Lemma21Report {
    let n = catalog.len();
    let h = catalog.hom_dims();
    let arrow = |x: usize, y: usize| format!("{} -> {}", catalog.label(x), catalog.label(y));

    // (1) chains of nonzero maps ending in C start in C.
    let mut predecessor_closed = Verdict::Pass;
    'outer: for &y in &c.indices {
        for x in 0..n {
            if catalog.reaches(x, y) && !c.contains(x) {
                // Report the last step of a chain that leaves C.
                let step = (0..n)
                    .find(|&z| !c.contains(z) && h[z][y] > 0)
                    .map(|z| arrow(z, y))
                    .unwrap_or_else(|| arrow(x, y));
                predecessor_closed = Verdict::Fail(step);
                break 'outer;
            }
        }
    }

    // (2) every X outside C has Hom(X, C) = 0.
    let hom_vanishing = (0..n)
        .filter(|&x| !c.contains(x))
        .find_map(|x| {
            c.indices
                .iter()
                .find(|&&y| h[x][y] > 0)
                .map(|&y| arrow(x, y))
        })
        .map_or(Verdict::Pass, Verdict::Fail);

    // (3) with T = {X : Hom(X, C) = 0}: every indecomposable is in T or C,
    // and C is exactly the right orthogonal of T.
    let torsion: Vec<usize> = (0..n)
        .filter(|&x| c.indices.iter().all(|&y| h[x][y] == 0))
        .collect();
    let mut split_torsion_free = Verdict::Pass;
    for x in 0..n {
        let in_t = torsion.contains(&x);
        let in_c = c.contains(x);
        if !in_t && !in_c {
            let y = c.indices.iter().find(|&&y| h[x][y] > 0).unwrap();
            split_torsion_free = Verdict::Fail(format!(
                "{} is neither torsion nor in C ({})",
                catalog.label(x),
                arrow(x, *y)
            ));
            break;
        }
        let right_orthogonal = torsion.iter().all(|&t| h[t][x] == 0);
        if right_orthogonal != in_c {
            split_torsion_free = Verdict::Fail(format!(
                "{} {} in C but {} orthogonal to the torsion class",
                catalog.label(x),
                if in_c { "is" } else { "is not" },
                if right_orthogonal { "is" } else { "is not" },
            ));
            break;
        }
    }
    Lemma21Report {
        predecessor_closed,
        hom_vanishing,
        split_torsion_free,
    }
}

// ---------------------------------------------------------------------------
// The six conditions on a predecessor-closed subcategory

pub const PROP23_NAMES: [&str; 6] = [
    "abelian exact (kernels and cokernels)",
    "closed under cokernels",
    "closed under quotients",
    "tops of projectives in C",
    "closed under composition factors",
    "add(C) = Gen(P_C)",
];

#[derive(Clone, Debug, Serialize)]
pub struct Prop23Report {
    pub conditions: Vec<Verdict>,
}

impl Prop23Report {
    /// Whether all conclusive verdicts among conditions (2)-(6) agree.
    pub fn equivalence_holds(&self) -> bool {
        let decided: HashSet<bool> = self.conditions[1..]
            .iter()
            .filter_map(|v| v.decided())
            .collect();
        decided.len() <= 1
    }

    /// The exact decision: condition (5).
    pub fn abelian_exact(&self) -> bool {
        self.conditions[4].is_pass()
    }
}

/// Objects `X1` or `X1 + X2` with entries of `C` and total dimension at
/// most `bound`, with their labels.
fn small_sums(
    catalog: &IndecompCatalog,
    c: &SubcategorySpec,
    bound: usize,
) -> Vec<(String, RightModule)> {
    let mut out = Vec::new();
    for &i in &c.indices {
        let x = catalog.entry(i);
        if x.dim() <= bound {
            out.push((catalog.label(i).to_string(), x.clone()));
        }
    }
    for (k, &i) in c.indices.iter().enumerate() {
        let x = catalog.entry(i);
        for &j in &c.indices[k..] {
            let y = catalog.entry(j);
            if x.dim() + y.dim() <= bound {
                out.push((
                    format!("{} + {}", catalog.label(i), catalog.label(j)),
                    x.direct_sum(y),
                ));
            }
        }
    }
    out
}

/// Every element of `Hom(X, Y)`, or a cap error.
fn all_maps(x: &RightModule, y: &RightModule, cap: u128) -> Result<Vec<Matrix>> {
    let f = x.field();
    let basis = hom_space(x, y);
    let size = f.count(basis.len());
    if size > cap {
        return Err(Error::EnumerationCap {
            what: "hom set",
            size,
            cap,
        });
    }
    Ok(CoeffIter::new(f, basis.len())
        .map(|c| combine(f, &c, &basis, x.dim(), y.dim()))
        .collect())
}

/// Cokernels of maps `X -> Y` with `X` a sum of at most two entries of `C`
/// and `Y` in the small sums: images are sums of images from single entries.
fn cokernel_check(
    catalog: &IndecompCatalog,
    c: &SubcategorySpec,
    targets: &[(String, RightModule)],
    cap: u128,
) -> Result<Option<String>> {
    for (ylabel, y) in targets {
        let mut images: Vec<(String, Subspace)> = Vec::new();
        for &i in &c.indices {
            for f in all_maps(catalog.entry(i), y, cap)? {
                let im = f.row_space();
                if !images.iter().any(|(_, s)| *s == im) {
                    images.push((catalog.label(i).to_string(), im));
                }
            }
        }
        let singles = images.clone();
        for (k, (la, a)) in singles.iter().enumerate() {
            for (lb, b) in &singles[k + 1..] {
                let s = a.sum(b);
                if !images.iter().any(|(_, t)| *t == s) {
                    images.push((format!("{la} + {lb}"), s));
                }
            }
        }
        for (xlabel, im) in &images {
            let (q, _) = y.quotient(im);
            if let Some(bad) = add_membership(catalog, c, &q, cap)? {
                return Ok(Some(format!(
                    "coker({xlabel} -> {ylabel}) = {} has summand {bad} outside C",
                    describe(catalog, &q, cap)
                )));
            }
        }
    }
    Ok(None)
}

/// Kernels of maps `X -> Y1 (+ Y2)` with `X` in the small sums and `Y_i`
/// entries of `C`.
fn kernel_check(
    catalog: &IndecompCatalog,
    c: &SubcategorySpec,
    sources: &[(String, RightModule)],
    cap: u128,
) -> Result<Option<String>> {
    let f = catalog.algebra().field();
    for (xlabel, x) in sources {
        let mut kernels: Vec<Subspace> = Vec::new();
        for &j in &c.indices {
            for m in all_maps(x, catalog.entry(j), cap)? {
                let k = Subspace::span(f, x.dim(), &m.left_kernel());
                if !kernels.contains(&k) {
                    kernels.push(k);
                }
            }
        }
        let singles = kernels.clone();
        for (i, a) in singles.iter().enumerate() {
            for b in &singles[i + 1..] {
                let k = a.intersection(b);
                if !kernels.contains(&k) {
                    kernels.push(k);
                }
            }
        }
        for k in &kernels {
            let (sub, _) = x.submodule(k);
            if let Some(bad) = add_membership(catalog, c, &sub, cap)? {
                return Ok(Some(format!(
                    "a kernel of a map out of {xlabel} has summand {bad} outside C"
                )));
            }
        }
    }
    Ok(None)
}

fn quotient_check(
    catalog: &IndecompCatalog,
    c: &SubcategorySpec,
    objects: &[(String, RightModule)],
    cap: u128,
) -> Result<Option<String>> {
    for (label, x) in objects {
        for u in submodules_all(x, cap)? {
            let (q, _) = x.quotient(&u);
            if let Some(bad) = add_membership(catalog, c, &q, cap)? {
                return Ok(Some(format!(
                    "quotient {} of {label} has summand {bad} outside C",
                    describe(catalog, &q, cap)
                )));
            }
        }
    }
    Ok(None)
}

/// Conditions (1)-(6) for a predecessor-closed `C`. Conditions (1)-(3) range
/// over sums of at most two entries of total dimension at most `bound`.
pub fn prop23_conditions(
    catalog: &IndecompCatalog,
    c: &SubcategorySpec,
    bound: usize,
    caps: &Caps,
) -> Prop23Report {
    let a = catalog.algebra();
    let cap = caps.enum_cap;
    let objects = small_sums(catalog, c, bound);

    let cok = Verdict::from_result(cokernel_check(catalog, c, &objects, cap));
    let c1 = match &cok {
        Verdict::Pass => Verdict::from_result(kernel_check(catalog, c, &objects, cap)),
        other => other.clone(),
    };
    let c3 = Verdict::from_result(quotient_check(catalog, c, &objects, cap));

    // (4) S_x in C for every projective P_x in C.
    let mut c4 = Verdict::Pass;
    for x in 0..a.vertex_count() {
        if let Some(p) = catalog.projective_index(x) {
            if c.contains(p) {
                match catalog.simple_index(x) {
                    Some(s) if c.contains(s) => {}
                    _ => {
                        c4 = Verdict::Fail(format!(
                            "top({}) = S{} not in C",
                            catalog.label(p),
                            a.vertex_labels()[x]
                        ));
                        break;
                    }
                }
            }
        }
    }

    // (5) composition factors read off the dimension vector.
    let mut c5 = Verdict::Pass;
    'five: for &i in &c.indices {
        for x in catalog.entry(i).support().iter() {
            match catalog.simple_index(x) {
                Some(s) if c.contains(s) => {}
                _ => {
                    c5 = Verdict::Fail(format!(
                        "S{} is a composition factor of {} but not in C",
                        a.vertex_labels()[x],
                        catalog.label(i)
                    ));
                    break 'five;
                }
            }
        }
    }

    // (6) add(C) = Gen(P_C), compared entry by entry.
    let (_, pc) = catalog.supporting_projective(c);
    let mut c6 = Verdict::Pass;
    for i in 0..catalog.len() {
        let generated = is_generated_by(&pc, catalog.entry(i));
        if generated != c.contains(i) {
            c6 = Verdict::Fail(format!(
                "{} {} in C but {} generated by P_C",
                catalog.label(i),
                if c.contains(i) { "is" } else { "is not" },
                if generated { "is" } else { "is not" },
            ));
            break;
        }
    }

    Prop23Report {
        conditions: vec![c1, cok, c3, c4, c5, c6],
    }
}

// ---------------------------------------------------------------------------
// Structural classification over vertex subsets

#[derive(Clone, Debug, Serialize)]
pub struct SigmaRecord {
    pub sigma: Vec<String>,
    #[serde(skip)]
    pub set: VertexSet,
    pub forbidden_corner_dim: usize,
    /// Dimension vector of `M = (1 - e) A e` over the corner, in the order
    /// of `sigma`.
    pub m_dimvec: Vec<usize>,
    pub m_basis: Vec<String>,
    pub m_injective: bool,
    pub m_hereditary_injective: Verdict,
    /// `None` when the hereditary-injectivity scan hit a cap.
    pub valid: Option<bool>,
    pub details: Option<ValidDetails>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidDetails {
    pub corner_quiver: QuiverSummary,
    pub torsion_class: String,
    pub torsion_free_class: String,
    /// Global dimension of the corner, `None` if above the cap.
    pub corner_gldim: Option<usize>,
    pub arrow_source_check: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuiverSummary {
    pub vertices: Vec<String>,
    pub arrows: Vec<(String, String, String)>,
}

impl QuiverSummary {
    pub fn of(q: &Quiver) -> Self {
        QuiverSummary {
            vertices: q.vertices.clone(),
            arrows: q
                .arrows
                .iter()
                .map(|a| {
                    (
                        a.label.clone(),
                        q.vertices[a.source].clone(),
                        q.vertices[a.target].clone(),
                    )
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub records: Vec<SigmaRecord>,
}

impl ClassificationReport {
    pub fn valid_sets(&self) -> Vec<VertexSet> {
        self.records
            .iter()
            .filter(|r| r.valid == Some(true))
            .map(|r| r.set)
            .collect()
    }

    pub fn record(&self, sigma: VertexSet) -> Option<&SigmaRecord> {
        self.records.iter().find(|r| r.set == sigma)
    }
}

/// Global dimension of an algebra: the largest projective dimension of a
/// simple, `None` above `cap`.
pub fn global_dimension(a: &Arc<FDAlgebra>, cap: usize) -> Option<usize> {
    let mut best = 0;
    for x in 0..a.vertex_count() {
        best = best.max(RightModule::simple(a, x).unwrap().pd_up_to(cap)?);
    }
    Some(best)
}

/// Structural test for one vertex subset: no paths leave `sigma`, and
/// the off-corner bimodule is hereditary injective over the corner.
pub fn sigma_is_valid(a: &Arc<FDAlgebra>, sigma: VertexSet, caps: &Caps) -> SigmaRecord {
    let names = a.vertex_labels();
    let forbidden = a.forbidden_corner_dim(sigma);
    let mut rec = SigmaRecord {
        sigma: sigma.labels(names).iter().map(|s| s.to_string()).collect(),
        set: sigma,
        forbidden_corner_dim: forbidden,
        m_dimvec: vec![],
        m_basis: crate::module::off_corner_labels(a, sigma),
        m_injective: true,
        m_hereditary_injective: Verdict::Pass,
        valid: Some(forbidden == 0),
        details: None,
    };
    if sigma.is_empty() {
        // C = 0 and M = 0.
        rec.details = Some(ValidDetails {
            corner_quiver: QuiverSummary {
                vertices: vec![],
                arrows: vec![],
            },
            torsion_class: torsion_text(a, sigma.complement(a.vertex_count())),
            torsion_free_class: "0".into(),
            corner_gldim: Some(0),
            arrow_source_check: Verdict::Pass,
        });
        return rec;
    }
    let corner = Arc::new(a.corner(sigma).expect("nonempty subset"));
    let m = crate::module::off_corner_bimodule(a, sigma, &corner);
    rec.m_dimvec = m.dimension_vector();
    rec.m_injective = is_injective(&m);
    rec.m_hereditary_injective = match hereditary_injective_witness(&m, caps.enum_cap) {
        Ok(None) => Verdict::Pass,
        Ok(Some(q)) => Verdict::Fail(format!(
            "quotient with dimension vector {:?} is not injective{}",
            q.dimension_vector(),
            simple_name(&corner, &q)
        )),
        Err(e) => Verdict::Inconclusive(e.to_string()),
    };
    rec.valid = match (&rec.m_hereditary_injective, forbidden) {
        (_, f) if f > 0 => Some(false),
        (Verdict::Pass, _) => Some(true),
        (Verdict::Fail(_), _) => Some(false),
        (Verdict::Inconclusive(_), _) => None,
    };
    if rec.valid == Some(true) {
        rec.details = Some(ValidDetails {
            corner_quiver: QuiverSummary::of(&corner.ext_quiver()),
            torsion_class: torsion_text(a, sigma.complement(a.vertex_count())),
            torsion_free_class: format!("Gen(e_{{{}}}A)", sigma.labels(names).join(",")),
            corner_gldim: global_dimension(&corner, caps.pd_cap),
            arrow_source_check: arrow_source_check(a, sigma),
        });
    }
    rec
}

fn torsion_text(a: &FDAlgebra, out: VertexSet) -> String {
    if out.is_empty() {
        "0".into()
    } else {
        format!("Gen(e_{{{}}}A)", out.labels(a.vertex_labels()).join(","))
    }
}

fn simple_name(corner: &Arc<FDAlgebra>, q: &RightModule) -> String {
    if q.dim() == 1 {
        let x = q.dimension_vector().iter().position(|&d| d == 1).unwrap();
        format!(" (S{})", corner.vertex_labels()[x])
    } else {
        String::new()
    }
}

/// Every vertex subset, in ascending bitmask order.
pub fn classify_all_sigma(a: &Arc<FDAlgebra>, caps: &Caps) -> ClassificationReport {
    let n = a.vertex_count();
    let records = (0u64..(1 << n))
        .map(|mask| sigma_is_valid(a, VertexSet(mask), caps))
        .collect();
    ClassificationReport { records }
}

/// For every Ext-quiver arrow from outside `sigma` into `x` in `sigma`, `x`
/// must be a source of the corner's Ext-quiver.
pub fn arrow_source_check(a: &FDAlgebra, sigma: VertexSet) -> Verdict {
    if sigma.is_empty() {
        return Verdict::Pass;
    }
    let corner = match a.corner(sigma) {
        Ok(c) => c,
        Err(e) => return Verdict::Inconclusive(e.to_string()),
    };
    let cq = corner.ext_quiver();
    let q = a.ext_quiver();
    for arrow in &q.arrows {
        if !sigma.contains(arrow.source) && sigma.contains(arrow.target) {
            let label = &q.vertices[arrow.target];
            let x = cq.vertex_index(label).expect("vertex kept in corner");
            if !cq.is_source(x) {
                return Verdict::Fail(format!(
                    "arrow {} ends at {label}, which is not a source of the corner quiver",
                    arrow.label
                ));
            }
        }
    }
    Verdict::Pass
}

// ---------------------------------------------------------------------------
// Split torsion pairs attached to a valid subset

#[derive(Clone, Debug, Serialize)]
pub struct TorsionEntry {
    pub module: String,
    /// "torsion", "torsion-free" or "mixed".
    pub side: &'static str,
    pub t_dim: usize,
    pub split: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionPairReport {
    pub entries: Vec<TorsionEntry>,
    /// Splitness of `t(X) -> X` on sums of two entries.
    pub pair_sums: Verdict,
}

impl TorsionPairReport {
    pub fn all_split(&self) -> bool {
        self.entries.iter().all(|e| e.side != "mixed" && e.split) && self.pair_sums.is_pass()
    }
}

pub fn splitness_check(catalog: &IndecompCatalog, sigma: VertexSet) -> TorsionPairReport {
    let mut entries = Vec::new();
    for (i, x) in catalog.entries().iter().enumerate() {
        let t = torsion_radical(x, sigma);
        let (sub, incl) = x.submodule(&t);
        let side = if t.is_zero() {
            "torsion-free"
        } else if t.is_full() {
            "torsion"
        } else {
            "mixed"
        };
        entries.push(TorsionEntry {
            module: catalog.label(i).to_string(),
            side,
            t_dim: t.dim(),
            split: inclusion_splits(&sub, x, &incl),
        });
    }
    let mut pair_sums = Verdict::Pass;
    'pairs: for i in 0..catalog.len() {
        for j in i..catalog.len() {
            let x = catalog.entry(i).direct_sum(catalog.entry(j));
            let t = torsion_radical(&x, sigma);
            let (sub, incl) = x.submodule(&t);
            if !inclusion_splits(&sub, &x, &incl) {
                pair_sums = Verdict::Fail(format!(
                    "t({} + {}) is not a summand",
                    catalog.label(i),
                    catalog.label(j)
                ));
                break 'pairs;
            }
        }
    }
    TorsionPairReport { entries, pair_sums }
}

#[derive(Clone, Debug, Serialize)]
pub struct GldimCheck {
    pub corner_gldim: Option<usize>,
    pub sup_pd: Option<usize>,
    pub verdict: Verdict,
}

/// Global dimension of the corner against the largest `pd_A` over catalog
/// entries supported in `sigma`.
pub fn gldim_equality_check(catalog: &IndecompCatalog, sigma: VertexSet, cap: usize) -> GldimCheck {
    let a = catalog.algebra();
    let corner_gldim = if sigma.is_empty() {
        Some(0)
    } else {
        global_dimension(&Arc::new(a.corner(sigma).expect("nonempty")), cap)
    };
    let mut sup_pd = Some(0);
    for &i in &catalog.supported_in(sigma).indices {
        sup_pd = match (sup_pd, catalog.entry(i).pd_up_to(cap)) {
            (Some(s), Some(p)) => Some(s.max(p)),
            _ => None,
        };
    }
    let verdict = match (corner_gldim, sup_pd) {
        (Some(g), Some(s)) if g == s => Verdict::Pass,
        (Some(g), Some(s)) => Verdict::Fail(format!("gl.dim(C) = {g} but sup pd = {s}")),
        _ => Verdict::Inconclusive(format!("a side exceeds the pd cap {cap}")),
    };
    GldimCheck {
        corner_gldim,
        sup_pd,
        verdict,
    }
}

// ---------------------------------------------------------------------------
// Both directions of the correspondence, computed independently

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    /// Valid subsets with their subcategories `C_S` (entry labels).
    pub from_sigma: Vec<(Vec<String>, Vec<String>)>,
    /// Predecessor-closed subcategories closed under composition factors.
    pub from_catalog: Vec<Vec<String>>,
    pub sigma_side: Verdict,
    pub catalog_side: Verdict,
    pub bijection: Verdict,
}

impl CrossCheck {
    pub fn passes(&self) -> bool {
        self.sigma_side.is_pass() && self.catalog_side.is_pass() && self.bijection.is_pass()
    }
}

pub fn theorem_crosscheck(
    catalog: &IndecompCatalog,
    classification: &ClassificationReport,
    caps: &Caps,
) -> CrossCheck {
    let a = catalog.algebra();
    let n = a.vertex_count();
    let names = a.vertex_labels();
    let valid = classification.valid_sets();

    // (a) valid subsets give abelian exact predecessor-closed C_S, and
    // everything outside is generated by (1 - e)A.
    let mut sigma_side = Verdict::Pass;
    let mut from_sigma = Vec::new();
    let mut sigma_cats = Vec::new();
    for &s in &valid {
        let c = catalog.supported_in(s);
        from_sigma.push((
            s.labels(names).iter().map(|x| x.to_string()).collect(),
            catalog.labels_of(&c),
        ));
        sigma_cats.push(c.clone());
        if !sigma_side.is_pass() {
            continue;
        }
        if let Some((x, y)) = catalog.predecessor_closure_witness(&c) {
            sigma_side = Verdict::Fail(format!(
                "C_{} not predecessor-closed: {} -> {}",
                s.display(names),
                catalog.label(x),
                catalog.label(y)
            ));
            continue;
        }
        let report = prop23_conditions(catalog, &c, catalog.max_dim(), caps);
        if let Some((k, v)) = report
            .conditions
            .iter()
            .enumerate()
            .find(|(_, v)| v.is_fail())
        {
            sigma_side = Verdict::Fail(format!(
                "C_{} fails condition ({}): {}",
                s.display(names),
                k + 1,
                v.witness().unwrap_or("")
            ));
            continue;
        }
        let outside = RightModule::projective_of(a, s.complement(n));
        if let Some(i) = (0..catalog.len())
            .find(|&i| !c.contains(i) && !is_generated_by(&outside, catalog.entry(i)))
        {
            sigma_side = Verdict::Fail(format!(
                "{} lies outside C_{} but is not generated by (1-e)A",
                catalog.label(i),
                s.display(names)
            ));
        }
    }

    // (b) abelian exact predecessor-closed subcategories come from valid
    // subsets.
    let mut catalog_side = Verdict::Pass;
    let mut from_catalog = Vec::new();
    let mut catalog_cats = Vec::new();
    match catalog.all_predecessor_closed(caps.enum_cap) {
        Err(e) => catalog_side = Verdict::Inconclusive(e.to_string()),
        Ok(closed) => {
            for c in closed {
                let report = prop23_conditions_exact(catalog, &c);
                if !report {
                    continue;
                }
                from_catalog.push(catalog.labels_of(&c));
                catalog_cats.push(c.clone());
                let (s, _) = catalog.supporting_projective(&c);
                if !catalog_side.is_pass() {
                    continue;
                }
                if !valid.contains(&s) {
                    catalog_side = Verdict::Fail(format!(
                        "{{{}}} has supporting vertices {} which are not valid",
                        catalog.labels_of(&c).join(", "),
                        s.display(names)
                    ));
                } else if catalog.supported_in(s) != c {
                    catalog_side = Verdict::Fail(format!(
                        "{{{}}} differs from C_{}",
                        catalog.labels_of(&c).join(", "),
                        s.display(names)
                    ));
                }
            }
        }
    }

    // (c) the two collections coincide and S -> C_S is injective.
    let bijection = if catalog_side.is_inconclusive() {
        Verdict::Inconclusive("catalog side undecided".into())
    } else {
        let mut a_sorted = sigma_cats.clone();
        a_sorted.sort();
        let distinct = {
            let mut d = a_sorted.clone();
            d.dedup();
            d.len() == a_sorted.len()
        };
        let mut b_sorted = catalog_cats.clone();
        b_sorted.sort();
        if !distinct {
            Verdict::Fail("two valid subsets give the same subcategory".into())
        } else if a_sorted != b_sorted {
            Verdict::Fail(format!(
                "{} valid subsets against {} abelian exact predecessor-closed subcategories",
                a_sorted.len(),
                b_sorted.len()
            ))
        } else {
            Verdict::Pass
        }
    };
    CrossCheck {
        from_sigma,
        from_catalog,
        sigma_side,
        catalog_side,
        bijection,
    }
}

/// Condition (5) alone, the exact decision used to pick out abelian exact
/// subcategories.
fn prop23_conditions_exact(catalog: &IndecompCatalog, c: &SubcategorySpec) -> bool {
    c.indices.iter().all(|&i| {
        catalog
            .entry(i)
            .support()
            .iter()
            .all(|x| catalog.simple_index(x).is_some_and(|s| c.contains(s)))
    })
}
