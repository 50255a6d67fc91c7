//! Brute-force catalogs of indecomposable modules and the predecessor
//! relation on them.
//!
//! Modules are searched dimension vector by dimension vector as
//! representations of the algebra's presentation: one matrix per generator,
//! filtered by the relations as soon as every generator a relation mentions
//! has been assigned. One generator is fixed to a normal form for its own
//! base-change group (rank normal form, or a rational canonical form for a
//! loop), which loses no isomorphism class.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{FDAlgebra, VertexSet};
use crate::error::{Error, Result};
use crate::linalg::{CoeffIter, Fp, Matrix};
use crate::module::{
    hom_dim, is_indecomposable, is_injective, is_iso_indecomposable, RightModule, DEFAULT_ENUM_CAP,
};

#[derive(Clone, Debug)]
pub struct CatalogOptions {
    pub max_dim: usize,
    /// Maximum number of partial assignments visited per dimension vector.
    pub budget: u128,
    /// Caller's assertion that every indecomposable has dimension at most
    /// `max_dim`. Never inferred.
    pub assume_complete: bool,
    /// Cap for endomorphism scans during indecomposability tests.
    pub cap: u128,
}

impl Default for CatalogOptions {
    fn default() -> Self {
        CatalogOptions {
            max_dim: 4,
            budget: 1 << 22,
            assume_complete: false,
            cap: DEFAULT_ENUM_CAP,
        }
    }
}

/// A full subcategory of the catalog, as sorted entry indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubcategorySpec {
    pub indices: Vec<usize>,
}

impl SubcategorySpec {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SubcategorySpec { indices: v }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct IndecompCatalog {
    algebra: Arc<FDAlgebra>,
    max_dim: usize,
    entries: Vec<RightModule>,
    labels: Vec<String>,
    hom_dims: Vec<Vec<usize>>,
    reach: Vec<Vec<bool>>,
    complete: bool,
}

impl IndecompCatalog {
    /// Builds a catalog from already computed, pairwise non-isomorphic
    /// indecomposables.
    pub fn from_entries(
        algebra: &Arc<FDAlgebra>,
        max_dim: usize,
        mut entries: Vec<RightModule>,
        complete: bool,
    ) -> Self {
        entries.sort_by_key(|m| m.sort_key());
        let n = entries.len();
        let hom_dims: Vec<Vec<usize>> = entries
            .iter()
            .map(|x| entries.iter().map(|y| hom_dim(x, y)).collect())
            .collect();
        let mut reach: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| i == j || hom_dims[i][j] > 0).collect())
            .collect();
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        let labels = make_labels(algebra, &entries);
        IndecompCatalog {
            algebra: algebra.clone(),
            max_dim,
            entries,
            labels,
            hom_dims,
            reach,
            complete,
        }
    }

    pub fn algebra(&self) -> &Arc<FDAlgebra> {
        &self.algebra
    }
    pub fn max_dim(&self) -> usize {
        self.max_dim
    }
    pub fn entries(&self) -> &[RightModule] {
        &self.entries
    }
    pub fn entry(&self, i: usize) -> &RightModule {
        &self.entries[i]
    }
    pub fn len(&self) -> usize {
        self.entries.len()
    }
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn hom_dims(&self) -> &[Vec<usize>] {
        &self.hom_dims
    }
    pub fn is_complete(&self) -> bool {
        self.complete
    }
    pub fn all(&self) -> SubcategorySpec {
        SubcategorySpec::new(0..self.len())
    }

    /// Whether entry `i` is a predecessor of entry `j` (reflexive).
    pub fn reaches(&self, i: usize, j: usize) -> bool {
        self.reach[i][j]
    }

    pub fn labels_of(&self, c: &SubcategorySpec) -> Vec<String> {
        c.indices.iter().map(|&i| self.labels[i].clone()).collect()
    }

    /// Index of the entry isomorphic to an indecomposable module.
    pub fn identify(&self, m: &RightModule) -> Option<usize> {
        let dv = m.dimension_vector();
        (0..self.len()).find(|&i| {
            self.entries[i].dimension_vector() == dv && is_iso_indecomposable(&self.entries[i], m)
        })
    }

    pub fn projective_index(&self, x: usize) -> Option<usize> {
        self.identify(&RightModule::projective(&self.algebra, x).ok()?)
    }

    pub fn simple_index(&self, x: usize) -> Option<usize> {
        self.identify(&RightModule::simple(&self.algebra, x).ok()?)
    }

    pub fn injective_index(&self, x: usize) -> Option<usize> {
        self.identify(&RightModule::injective(&self.algebra, x).ok()?)
    }

    /// Indecomposable projectives and injectives the catalog lacks. Any
    /// such module proves the catalog incomplete whatever was asserted.
    pub fn missing_standard_modules(&self) -> Vec<String> {
        let a = &self.algebra;
        let mut out = Vec::new();
        for x in 0..a.vertex_count() {
            let v = &a.vertex_labels()[x];
            if self.projective_index(x).is_none() {
                let d = RightModule::projective(a, x).map_or(0, |m| m.dim());
                out.push(format!("P{v} (dim {d})"));
            }
            if self.injective_index(x).is_none() {
                let d = RightModule::injective(a, x).map_or(0, |m| m.dim());
                out.push(format!("I{v} (dim {d})"));
            }
        }
        out
    }

    /// All entries with a path into some target.
    pub fn predecessors_of(&self, targets: &[usize]) -> SubcategorySpec {
        SubcategorySpec::new((0..self.len()).filter(|&i| targets.iter().any(|&t| self.reach[i][t])))
    }

    /// `None` if `c` is predecessor-closed, otherwise a nonzero map
    /// `X -> Y` with `X` outside and `Y` inside.
    pub fn predecessor_closure_witness(&self, c: &SubcategorySpec) -> Option<(usize, usize)> {
        for &y in &c.indices {
            for x in 0..self.len() {
                if !c.contains(x) && self.hom_dims[x][y] > 0 {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_predecessor_closed(&self, c: &SubcategorySpec) -> bool {
        self.predecessor_closure_witness(c).is_none()
    }

    /// Vertices whose indecomposable projective lies in `c`, and the sum of
    /// those projectives.
    pub fn supporting_projective(&self, c: &SubcategorySpec) -> (VertexSet, RightModule) {
        let mut sigma = VertexSet::empty();
        let mut parts = Vec::new();
        for x in 0..self.algebra.vertex_count() {
            if let Some(i) = self.projective_index(x) {
                if c.contains(i) {
                    sigma.insert(x);
                    parts.push(self.entries[i].clone());
                }
            }
        }
        (sigma, RightModule::sum_of(&self.algebra, &parts))
    }

    /// Entries annihilated by `1 - e_S`, i.e. supported inside `sigma`.
    pub fn supported_in(&self, sigma: VertexSet) -> SubcategorySpec {
        SubcategorySpec::new(
            (0..self.len()).filter(|&i| self.entries[i].support().is_subset(sigma)),
        )
    }

    /// Predecessor closures of every single entry, without repeats.
    pub fn singleton_closures(&self) -> Vec<SubcategorySpec> {
        let mut out: Vec<SubcategorySpec> = Vec::new();
        for t in 0..self.len() {
            let c = self.predecessors_of(&[t]);
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    /// Every predecessor-closed subcategory, or a cap error when there are
    /// more than `cap` entries' worth of subsets to scan.
    pub fn all_predecessor_closed(&self, cap: u128) -> Result<Vec<SubcategorySpec>> {
        let n = self.len();
        if n >= 127 || (1u128 << n) > cap {
            return Err(Error::EnumerationCap {
                what: "predecessor-closed subcategories",
                size: if n >= 127 { u128::MAX } else { 1u128 << n },
                cap,
            });
        }
        // Closed sets are unions of principal down-sets.
        let principal: Vec<SubcategorySpec> = (0..n).map(|t| self.predecessors_of(&[t])).collect();
        let mut out: Vec<SubcategorySpec> = vec![SubcategorySpec::default()];
        let mut i = 0;
        while i < out.len() {
            let cur = out[i].clone();
            for p in &principal {
                let mut v = cur.indices.clone();
                v.extend(&p.indices);
                let next = SubcategorySpec::new(v);
                if !out.contains(&next) {
                    out.push(next);
                }
            }
            i += 1;
        }
        out.sort_by(|a, b| (a.len(), &a.indices).cmp(&(b.len(), &b.indices)));
        Ok(out)
    }
}

fn make_labels(algebra: &Arc<FDAlgebra>, entries: &[RightModule]) -> Vec<String> {
    let names = algebra.vertex_labels();
    let mut labels: Vec<String> = entries
        .iter()
        .map(|m| {
            let dv = m.dimension_vector();
            let mut parts = Vec::new();
            if m.dim() == 1 {
                let x = dv.iter().position(|&d| d == 1).unwrap();
                parts.push(format!("S{}", names[x]));
            }
            let top = m.top_vector();
            if top.iter().sum::<usize>() == 1 && m.is_projective() {
                let x = top.iter().position(|&d| d == 1).unwrap();
                parts.push(format!("P{}", names[x]));
            }
            let soc = m.socle_vector();
            if soc.iter().sum::<usize>() == 1 && is_injective(m) {
                let x = soc.iter().position(|&d| d == 1).unwrap();
                parts.push(format!("I{}", names[x]));
            }
            if parts.is_empty() {
                let dv: Vec<String> = dv.iter().map(|d| d.to_string()).collect();
                parts.push(format!("M({})", dv.join(",")));
            }
            parts.join("=")
        })
        .collect();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for l in &labels {
        *seen.entry(l.clone()).or_default() += 1;
    }
    let mut count: HashMap<String, usize> = HashMap::new();
    for l in labels.iter_mut() {
        if seen[l.as_str()] > 1 {
            let k = count.entry(l.clone()).or_default();
            *k += 1;
            *l = format!("{l}#{k}");
        }
    }
    labels
}

/// Enumerates indecomposables of total dimension `1..=max_dim`.
pub fn enumerate_catalog(
    algebra: &Arc<FDAlgebra>,
    opts: &CatalogOptions,
) -> Result<IndecompCatalog> {
    let mut entries: Vec<RightModule> = Vec::new();
    for dimvec in dimension_vectors(algebra, opts.max_dim) {
        let mut found: Vec<(RightModule, (Vec<usize>, Vec<usize>, usize))> = Vec::new();
        let mut search = Search::new(algebra, &dimvec, opts.budget);
        search.run(&mut |gens| {
            let m = RightModule::from_generator_action(algebra, &dimvec, gens);
            debug_assert!(m.validate().is_ok());
            let key = (m.top_vector(), m.socle_vector(), hom_dim(&m, &m));
            if found
                .iter()
                .any(|(e, k)| *k == key && is_iso_indecomposable(e, &m))
            {
                return Ok(());
            }
            if is_indecomposable(&m, opts.cap)? {
                found.push((m, key));
            }
            Ok(())
        })?;
        entries.extend(found.into_iter().map(|(m, _)| m));
    }
    Ok(IndecompCatalog::from_entries(
        algebra,
        opts.max_dim,
        entries,
        opts.assume_complete,
    ))
}

/// Dimension vectors of total `1..=max_dim` whose support is connected in
/// the Ext-quiver, ordered by total then lexicographically.
pub fn dimension_vectors(algebra: &FDAlgebra, max_dim: usize) -> Vec<Vec<usize>> {
    let n = algebra.vertex_count();
    let q = algebra.ext_quiver();
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    fn rec(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for d in 0..=left {
            cur[i] = d;
            rec(i + 1, left - d, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max_dim, &mut cur, &mut out);
    out.retain(|d| {
        let total: usize = d.iter().sum();
        total > 0 && support_connected(&q, d)
    });
    out.sort_by(|a, b| (a.iter().sum::<usize>(), a).cmp(&(b.iter().sum::<usize>(), b)));
    out
}

fn support_connected(q: &crate::algebra::Quiver, d: &[usize]) -> bool {
    let support: Vec<usize> = (0..d.len()).filter(|&x| d[x] > 0).collect();
    let Some(&start) = support.first() else {
        return true;
    };
    let mut seen = vec![false; d.len()];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for a in &q.arrows {
            for (u, v) in [(a.source, a.target), (a.target, a.source)] {
                if u == x && d[v] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    support.iter().all(|&x| seen[x])
}

/// Depth-first search over generator matrices for one dimension vector.
struct Search<'a> {
    f: Fp,
    algebra: &'a FDAlgebra,
    dimvec: Vec<usize>,
    /// Active generators in assignment order; the first gets normal forms.
    order: Vec<usize>,
    /// Live words (all blocks nonzero) grouped by the level that completes them.
    words_at: Vec<Vec<usize>>,
    prefix: Vec<Option<usize>>,
    /// Relations grouped by the level that completes them.
    rels_at: Vec<Vec<usize>>,
    gens: Vec<Matrix>,
    words: Vec<Option<Matrix>>,
    visited: u128,
    budget: u128,
}

impl<'a> Search<'a> {
    fn new(algebra: &'a FDAlgebra, dimvec: &[usize], budget: u128) -> Self {
        let f = algebra.field();
        let pres = algebra.presentation();
        let basis = algebra.basis();
        let shape = |g: usize| {
            let b = &basis[pres.generators[g]];
            (dimvec[b.source], dimvec[b.target])
        };
        let mut order: Vec<usize> = (0..pres.generators.len())
            .filter(|&g| {
                let (r, c) = shape(g);
                r > 0 && c > 0
            })
            .collect();
        // Largest block first: it gets the normal form.
        order.sort_by_key(|&g| {
            let (r, c) = shape(g);
            std::cmp::Reverse(r * c)
        });
        let mut pos = vec![usize::MAX; pres.generators.len()];
        for (k, &g) in order.iter().enumerate() {
            pos[g] = k;
        }
        let levels = order.len();
        let mut index: HashMap<(usize, &[usize]), usize> = HashMap::new();
        let mut words_at = vec![Vec::new(); levels];
        let mut level_of: Vec<Option<Option<usize>>> = Vec::with_capacity(pres.words.len());
        let mut prefix = Vec::with_capacity(pres.words.len());
        let mut words: Vec<Option<Matrix>> = Vec::with_capacity(pres.words.len());
        for (i, w) in pres.words.iter().enumerate() {
            index.insert((w.source, &w.letters[..]), i);
            prefix.push(w.letters.split_last().map(|(_, p)| index[&(w.source, p)]));
            let live = dimvec[w.source] > 0 && w.letters.iter().all(|&g| pos[g] != usize::MAX);
            if !live {
                level_of.push(None);
                words.push(None);
                continue;
            }
            let lvl = w.letters.iter().map(|&g| pos[g]).max();
            level_of.push(Some(lvl));
            match lvl {
                None => words.push(Some(Matrix::identity(f, dimvec[w.source]))),
                Some(l) => {
                    words_at[l].push(i);
                    words.push(None);
                }
            }
        }
        let mut rels_at = vec![Vec::new(); levels];
        for (r, rel) in pres.relations.iter().enumerate() {
            let w0 = &pres.words[rel[0].0];
            if dimvec[w0.source] == 0 || dimvec[w0.target] == 0 {
                continue;
            }
            let lvl = rel.iter().filter_map(|&(w, _)| level_of[w].flatten()).max();
            if let Some(l) = lvl {
                rels_at[l].push(r);
            }
        }
        let gens = (0..pres.generators.len())
            .map(|g| {
                let (r, c) = shape(g);
                Matrix::zeros(f, r, c)
            })
            .collect();
        Search {
            f,
            algebra,
            dimvec: dimvec.to_vec(),
            order,
            words_at,
            prefix,
            rels_at,
            gens,
            words,
            visited: 0,
            budget,
        }
    }

    fn run(&mut self, leaf: &mut dyn FnMut(&[Matrix]) -> Result<()>) -> Result<()> {
        if self.order.is_empty() {
            return leaf(&self.gens);
        }
        self.level(0, leaf)
    }

    fn candidates(&self, k: usize) -> Vec<Matrix> {
        let g = self.order[k];
        let (r, c) = (self.gens[g].rows(), self.gens[g].cols());
        if k == 0 {
            let b = &self.algebra.basis()[self.algebra.presentation().generators[g]];
            return if b.source == b.target {
                conjugacy_class_reps(self.f, r)
            } else {
                rank_normal_forms(self.f, r, c)
            };
        }
        CoeffIter::new(self.f, r * c)
            .map(|v| Matrix::from_vec(self.f, r, c, v))
            .collect()
    }

    fn level(&mut self, k: usize, leaf: &mut dyn FnMut(&[Matrix]) -> Result<()>) -> Result<()> {
        let pres = self.algebra.presentation();
        for m in self.candidates(k) {
            self.visited += 1;
            if self.visited > self.budget {
                return Err(Error::SearchBudget {
                    dimvec: self.dimvec.clone(),
                    size: self.visited,
                    budget: self.budget,
                });
            }
            self.gens[self.order[k]] = m;
            for &w in &self.words_at[k] {
                let p = self.prefix[w].expect("nontrivial word");
                let last = *pres.words[w].letters.last().unwrap();
                let value = self.words[p]
                    .as_ref()
                    .expect("prefix computed")
                    .mul(&self.gens[last]);
                self.words[w] = Some(value);
            }
            if !self.relations_hold(k) {
                continue;
            }
            if k + 1 == self.order.len() {
                leaf(&self.gens)?;
            } else {
                self.level(k + 1, leaf)?;
            }
        }
        Ok(())
    }

    fn relations_hold(&self, k: usize) -> bool {
        let pres = self.algebra.presentation();
        self.rels_at[k].iter().all(|&r| {
            let rel = &pres.relations[r];
            let w0 = &pres.words[rel[0].0];
            let mut acc = Matrix::zeros(self.f, self.dimvec[w0.source], self.dimvec[w0.target]);
            for &(w, c) in rel {
                if let Some(m) = &self.words[w] {
                    acc.add_scaled(c, m);
                }
            }
            acc.is_zero()
        })
    }
}

/// `[I_r 0; 0 0]` for every rank `r`.
pub fn rank_normal_forms(f: Fp, rows: usize, cols: usize) -> Vec<Matrix> {
    (0..=rows.min(cols))
        .map(|r| {
            let mut m = Matrix::zeros(f, rows, cols);
            for i in 0..r {
                m.set(i, i, 1);
            }
            m
        })
        .collect()
}

/// One matrix per similarity class of `n x n` matrices: block diagonal
/// companion matrices of invariant factor chains `f_1 | f_2 | ... | f_k`.
pub fn conjugacy_class_reps(f: Fp, n: usize) -> Vec<Matrix> {
    let mut polys: Vec<Vec<Vec<u8>>> = vec![Vec::new(); n + 1];
    for (d, slot) in polys.iter_mut().enumerate().skip(1) {
        for mut c in CoeffIter::new(f, d) {
            c.push(1);
            slot.push(c);
        }
    }
    let mut out = Vec::new();
    let mut chain: Vec<Vec<u8>> = Vec::new();
    fn rec(
        f: Fp,
        polys: &[Vec<Vec<u8>>],
        left: usize,
        chain: &mut Vec<Vec<u8>>,
        out: &mut Vec<Matrix>,
        n: usize,
    ) {
        if left == 0 {
            let mut m = Matrix::zeros(f, n, n);
            let mut off = 0;
            for p in chain.iter() {
                let c = companion(f, p);
                m.set_block(off, off, &c);
                off += c.rows();
            }
            out.push(m);
            return;
        }
        let min_deg = chain.last().map_or(1, |p| p.len() - 1);
        for d in min_deg..=left {
            for p in &polys[d] {
                if chain.last().is_some_and(|prev| !poly_divides(f, prev, p)) {
                    continue;
                }
                chain.push(p.clone());
                rec(f, polys, left - d, chain, out, n);
                chain.pop();
            }
        }
    }
    if n == 0 {
        return vec![Matrix::zeros(f, 0, 0)];
    }
    rec(f, &polys, n, &mut chain, &mut out, n);
    out
}

/// Companion matrix of a monic polynomial given low degree first.
fn companion(f: Fp, p: &[u8]) -> Matrix {
    let d = p.len() - 1;
    let mut m = Matrix::zeros(f, d, d);
    for i in 0..d.saturating_sub(1) {
        m.set(i, i + 1, 1);
    }
    for j in 0..d {
        m.set(d - 1, j, f.neg(p[j]));
    }
    m
}

/// Whether monic `a` divides `b`.
fn poly_divides(f: Fp, a: &[u8], b: &[u8]) -> bool {
    let mut r = b.to_vec();
    let da = a.len() - 1;
    while r.len() > da {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - da;
        if lead != 0 {
            for (i, &c) in a.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(lead, c));
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::module::is_iso;

    fn catalog(a: &Arc<FDAlgebra>, max_dim: usize) -> IndecompCatalog {
        enumerate_catalog(
            a,
            &CatalogOptions {
                max_dim,
                assume_complete: true,
                ..Default::default()
            },
        )
        .unwrap()
    }

    /// Number of similarity classes of n x n matrices over GF(q), from the
    /// generating function prod_{k>=1} 1 / (1 - q x^k).
    fn class_count(q: u64, n: usize) -> u64 {
        let mut series = vec![0i64; n + 1];
        series[0] = 1;
        for k in 1..=n {
            for i in k..=n {
                series[i] += q as i64 * series[i - k];
            }
        }
        series[n] as u64
    }

    #[test]
    fn similarity_class_counts() {
        for (p, q) in [(Fp::GF2, 2), (Fp::GF3, 3)] {
            for n in 0..=4 {
                assert_eq!(
                    conjugacy_class_reps(p, n).len() as u64,
                    class_count(q, n),
                    "p={q} n={n}"
                );
            }
        }
        assert_eq!(conjugacy_class_reps(Fp::GF2, 2).len(), 6);
    }

    #[test]
    fn e1_simples_at_dim_one() {
        let a = fixtures::e1();
        let c = catalog(&a, 1);
        assert_eq!(c.len(), 3);
        assert!(c.entries().iter().all(|m| m.dim() == 1));
        for x in 0..3 {
            assert!(c.simple_index(x).is_some());
        }
    }

    #[test]
    fn e1_catalog() {
        let a = fixtures::e1();
        let c = catalog(&a, 4);
        // The separated quiver is A4 with one orientation, so 10 indecomposables,
        // minus the one supported on the relation path 3->2->1 (dimvec 1,1,1 with
        // g.a != 0) which does not exist: the modules are those of E1 itself.
        let p3 = RightModule::projective(&a, 2).unwrap();
        let i1 = RightModule::injective(&a, 0).unwrap();
        assert!(c.identify(&p3).is_some());
        assert!(c.identify(&i1).is_some());
        for i in 0..c.len() {
            assert!(is_indecomposable(c.entry(i), DEFAULT_ENUM_CAP).unwrap());
            for j in 0..i {
                assert!(!is_iso(c.entry(i), c.entry(j), DEFAULT_ENUM_CAP).unwrap());
            }
            assert!(c.hom_dims()[i][i] >= 1);
        }
        let l: Vec<&str> = c.labels().iter().map(|s| s.as_str()).collect();
        assert!(l.contains(&"S1=P1"));
        assert!(l.contains(&"P2"));
    }

    #[test]
    fn a2_corner_has_three_indecomposables() {
        let h = Arc::new(
            fixtures::e2()
                .corner(VertexSet::from_indices([0, 1]))
                .unwrap(),
        );
        let c = catalog(&h, 3);
        assert_eq!(c.len(), 3);
        assert_eq!(c.labels(), &["S2=I2", "S1=P1", "P2=I1"]);
    }

    #[test]
    fn predecessors() {
        let a = fixtures::e1();
        let c = catalog(&a, 4);
        let s1 = c.simple_index(0).unwrap();
        assert_eq!(c.predecessors_of(&[s1]).indices, vec![s1]);
        let p1 = c.projective_index(0).unwrap();
        let p2 = c.projective_index(1).unwrap();
        let only_p2 = SubcategorySpec::new([p2]);
        assert_eq!(c.predecessor_closure_witness(&only_p2), Some((p1, p2)));
        let lp = SubcategorySpec::new([p1, p2]);
        assert!(c.is_predecessor_closed(&lp));
        assert_eq!(
            c.supporting_projective(&lp).0,
            VertexSet::from_indices([0, 1])
        );
        assert_eq!(
            c.supporting_projective(&SubcategorySpec::new([s1])).0,
            VertexSet::from_indices([0])
        );
        let (sigma, p) = c.supporting_projective(&c.all());
        assert_eq!(sigma, a.all_vertices());
        assert_eq!(p.dim(), a.dim());
        for d in c.singleton_closures() {
            assert!(c.is_predecessor_closed(&d));
        }
    }

    #[test]
    fn reachability_is_transitive() {
        let c = catalog(&fixtures::e2(), 3);
        let n = c.len();
        for i in 0..n {
            assert!(c.reaches(i, i));
            for j in 0..n {
                for k in 0..n {
                    if c.reaches(i, j) && c.reaches(j, k) {
                        assert!(c.reaches(i, k));
                    }
                }
            }
        }
    }

    #[test]
    fn projective_hom_dims_match_peirce() {
        for a in [fixtures::e1(), fixtures::e2()] {
            let c = catalog(&a, 5);
            let n = a.vertex_count();
            for x in 0..n {
                for y in 0..n {
                    let (Some(i), Some(j)) = (c.projective_index(x), c.projective_index(y)) else {
                        continue;
                    };
                    let peirce =
                        a.peirce_dim(VertexSet::from_indices([y]), VertexSet::from_indices([x]));
                    assert_eq!(c.hom_dims()[i][j], peirce);
                }
            }
        }
    }

    #[test]
    fn budget_is_reported() {
        let a = fixtures::e2();
        let err = enumerate_catalog(
            &a,
            &CatalogOptions {
                max_dim: 4,
                budget: 10,
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::SearchBudget { .. }));
    }

    #[test]
    fn down_sets() {
        let h = fixtures::a2();
        let c = catalog(&h, 2);
        let all = c.all_predecessor_closed(1 << 16).unwrap();
        // 1 <- 2: S1 -> P2 -> S2, a chain, so four down-sets.
        assert_eq!(all.len(), 4);
    }
}
