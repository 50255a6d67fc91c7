//! Finite-dimensional algebras given by a basis and structure constants,
//! built from bound quivers or cut down to corner algebras `eAe`.
//!
//! Paths compose left to right: the word `a.b` traverses `a` and then `b`,
//! so `e_x A e_y` is spanned by the paths from `x` to `y` and the
//! indecomposable projective `P_x = e_x A` is spanned by paths starting at
//! `x`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Fp, Matrix, Subspace};

/// Default cap on the number of irreducible paths when building an algebra.
pub const DEFAULT_DIM_CAP: usize = 512;
const PATH_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::NonAdmissible(format!("duplicate vertex {v}")));
            }
        }
        for (i, a) in arrows.iter().enumerate() {
            if a.source >= vertices.len() || a.target >= vertices.len() {
                return Err(Error::UnknownVertex(a.label.clone()));
            }
            if arrows[..i].iter().any(|b| b.label == a.label) {
                return Err(Error::NonAdmissible(format!("duplicate arrow {}", a.label)));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }

    /// True iff no arrow ends at `x`.
    pub fn is_source(&self, x: usize) -> bool {
        !self.arrows.iter().any(|a| a.target == x)
    }

    pub fn is_sink(&self, x: usize) -> bool {
        !self.arrows.iter().any(|a| a.source == x)
    }

    pub fn arrow_count(&self, x: usize, y: usize) -> usize {
        self.arrows
            .iter()
            .filter(|a| a.source == x && a.target == y)
            .count()
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for a in &self.arrows {
                for (u, w) in [(a.source, a.target), (a.target, a.source)] {
                    if u == v && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn has_oriented_cycle(&self) -> bool {
        // Kahn's algorithm; loops count as cycles.
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = stack.pop() {
            removed += 1;
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indeg[a.target] -= 1;
                if indeg[a.target] == 0 {
                    stack.push(a.target);
                }
            }
        }
        removed < n
    }
}

/// One term `coeff * a1.a2...ak` of a relation; `path` holds arrow indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: u8,
    pub path: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundQuiverSpec {
    pub field: Fp,
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
}

/// Subset of the vertices of an algebra, as a bitmask over vertex indices.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub fn empty() -> Self {
        VertexSet(0)
    }

    pub fn all(n: usize) -> Self {
        assert!(n <= 64);
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn from_indices(idx: impl IntoIterator<Item = usize>) -> Self {
        VertexSet(idx.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    pub fn contains(self, x: usize) -> bool {
        x < 64 && self.0 >> x & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        self.0 |= 1 << x;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self, n: usize) -> Self {
        VertexSet(!self.0 & VertexSet::all(n).0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn labels(self, names: &[String]) -> Vec<&str> {
        self.iter().map(|i| names[i].as_str()).collect()
    }

    pub fn display(self, names: &[String]) -> String {
        format!("{{{}}}", self.labels(names).join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub source: usize,
    pub target: usize,
    pub label: String,
}

/// Sparse coordinate vector: (basis index, nonzero coefficient), sorted.
pub type Sparse = Vec<(usize, u8)>;

/// Word in the generators of an algebra: a path in its Ext-quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub source: usize,
    pub target: usize,
    /// Indices into `Presentation::generators`. Empty for the trivial word
    /// at `source`.
    pub letters: Vec<usize>,
}

/// A quiver-with-relations description of an algebra, recomputed from its
/// structure constants.
#[derive(Clone, Debug)]
pub struct Presentation {
    /// Basis indices of radical elements that span a complement of J^2 in J;
    /// these are the arrows of the Ext-quiver.
    pub generators: Vec<usize>,
    /// All words of length `0..=loewy_length`; the first `n_vertices` are the
    /// trivial words in vertex order.
    pub words: Vec<Word>,
    /// Linear combinations of words that vanish in the algebra; together
    /// they generate the defining ideal.
    pub relations: Vec<Sparse>,
    /// Each basis element written as a combination of words.
    pub expansions: Vec<Sparse>,
    /// Smallest `N` with `J^N = 0`.
    pub loewy_length: usize,
}

/// Finite-dimensional basic algebra with a basis of elements `e_x b e_y`.
#[derive(Clone)]
pub struct FDAlgebra {
    field: Fp,
    vertices: Vec<String>,
    basis: Vec<BasisElement>,
    mult: Vec<Sparse>,
    idempotents: Vec<usize>,
    radical: Vec<usize>,
    presentation: Presentation,
}

impl fmt::Debug for FDAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FDAlgebra")
            .field("field", &self.field)
            .field("vertices", &self.vertices)
            .field("dim", &self.dim())
            .finish()
    }
}

impl FDAlgebra {
    /// Assembles an algebra from a basis in which the elements listed in
    /// `idempotents` are the vertex idempotents and every other basis
    /// element lies in the radical.
    fn from_parts(
        field: Fp,
        vertices: Vec<String>,
        basis: Vec<BasisElement>,
        mult: Vec<Sparse>,
        idempotents: Vec<usize>,
    ) -> Self {
        let radical = (0..basis.len())
            .filter(|i| !idempotents.contains(i))
            .collect();
        let mut alg = FDAlgebra {
            field,
            vertices,
            basis,
            mult,
            idempotents,
            radical,
            presentation: Presentation {
                generators: vec![],
                words: vec![],
                relations: vec![],
                expansions: vec![],
                loewy_length: 0,
            },
        };
        alg.presentation = alg.compute_presentation();
        alg
    }

    #[inline]
    pub fn field(&self) -> Fp {
        self.field
    }
    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn vertex_labels(&self) -> &[String] {
        &self.vertices
    }
    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }
    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }
    /// Basis index of the idempotent `e_x`.
    pub fn idempotent(&self, x: usize) -> usize {
        self.idempotents[x]
    }
    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }
    pub fn radical_indices(&self) -> &[usize] {
        &self.radical
    }
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }
    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::all(self.vertex_count())
    }

    /// Coordinates of `b_i * b_j`.
    #[inline]
    pub fn product(&self, i: usize, j: usize) -> &[(usize, u8)] {
        &self.mult[i * self.dim() + j]
    }

    pub fn unit(&self) -> Vec<u8> {
        let mut u = vec![0; self.dim()];
        for &e in &self.idempotents {
            u[e] = 1;
        }
        u
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u8> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    pub fn mul(&self, x: &[u8], y: &[u8]) -> Vec<u8> {
        let f = self.field;
        let mut out = vec![0; self.dim()];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let c = f.mul(a, b);
                for &(k, s) in self.product(i, j) {
                    out[k] = f.add(out[k], f.mul(c, s));
                }
            }
        }
        out
    }

    /// Smallest `N` with `J^N = 0`.
    pub fn loewy_length(&self) -> usize {
        self.presentation.loewy_length
    }

    /// Powers `J^1, J^2, ...` up to the first zero power (exclusive).
    pub fn radical_powers(&self) -> Vec<Subspace> {
        let f = self.field;
        let n = self.dim();
        let rad_vecs: Vec<Vec<u8>> = self.radical.iter().map(|&i| self.basis_vector(i)).collect();
        let mut cur = Subspace::span(f, n, &rad_vecs);
        let mut out = Vec::new();
        while !cur.is_zero() {
            let mut next = Vec::new();
            for v in cur.basis() {
                for w in &rad_vecs {
                    let p = self.mul(v, w);
                    if p.iter().any(|&x| x != 0) {
                        next.push(p);
                    }
                }
            }
            out.push(cur);
            cur = Subspace::span(f, n, &next);
        }
        out
    }

    fn compute_presentation(&self) -> Presentation {
        let f = self.field;
        let n = self.dim();
        let powers = self.radical_powers();
        let loewy_length = powers.len() + 1;
        let j2 = powers
            .get(1)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(f, n));
        let mut acc = j2;
        let mut generators = Vec::new();
        for &r in &self.radical {
            let v = self.basis_vector(r);
            if !acc.contains(&v) {
                acc = acc.sum(&Subspace::span(f, n, &[v]));
                generators.push(r);
            }
        }

        // Words of length 0..=loewy_length, breadth first.
        let mut words: Vec<Word> = (0..self.vertex_count())
            .map(|x| Word {
                source: x,
                target: x,
                letters: vec![],
            })
            .collect();
        let mut values: Vec<Vec<u8>> = (0..self.vertex_count())
            .map(|x| self.basis_vector(self.idempotents[x]))
            .collect();
        let mut frontier: Vec<usize> = (0..words.len()).collect();
        for _ in 0..loewy_length.max(1) {
            let mut next = Vec::new();
            for &w in &frontier {
                for (g, &gb) in generators.iter().enumerate() {
                    if self.basis[gb].source != words[w].target {
                        continue;
                    }
                    let mut letters = words[w].letters.clone();
                    letters.push(g);
                    let value = self.mul(&values[w], &self.basis_vector(gb));
                    words.push(Word {
                        source: words[w].source,
                        target: self.basis[gb].target,
                        letters,
                    });
                    values.push(value);
                    next.push(words.len() - 1);
                }
            }
            frontier = next;
        }

        // Relations: left kernel of the evaluation map, block by block.
        let mut blocks: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, w) in words.iter().enumerate() {
            blocks.entry((w.source, w.target)).or_default().push(i);
        }
        let mut relations = Vec::new();
        let mut expansions = vec![Vec::new(); n];
        for ((s, t), idx) in &blocks {
            let rows: Vec<Vec<u8>> = idx.iter().map(|&i| values[i].clone()).collect();
            let eval = Matrix::from_rows(f, n, &rows);
            for k in eval.left_kernel() {
                relations.push(sparse_from(&k, idx));
            }
            // Express each basis element of this block through the words.
            let targets: Vec<usize> = (0..n)
                .filter(|&b| self.basis[b].source == *s && self.basis[b].target == *t)
                .collect();
            if targets.is_empty() {
                continue;
            }
            let red = Matrix::from_rows(f, n, &rows).transpose();
            for b in targets {
                let sol = crate::linalg::solve_linear(&red, &self.basis_vector(b))
                    .expect("shape")
                    .expect("generators span the algebra");
                expansions[b] = sparse_from(&sol, idx);
            }
        }
        Presentation {
            generators,
            words,
            relations,
            expansions,
            loewy_length,
        }
    }

    /// The Ext-quiver: one arrow `x -> y` per generator in `e_x (J/J^2) e_y`.
    pub fn ext_quiver(&self) -> Quiver {
        let arrows = self
            .presentation
            .generators
            .iter()
            .map(|&g| Arrow {
                label: self.basis[g].label.clone(),
                source: self.basis[g].source,
                target: self.basis[g].target,
            })
            .collect();
        Quiver {
            vertices: self.vertices.clone(),
            arrows,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.ext_quiver().is_connected()
    }

    /// `dim e_X A e_Y`.
    pub fn peirce_dim(&self, from: VertexSet, to: VertexSet) -> usize {
        self.basis
            .iter()
            .filter(|b| from.contains(b.source) && to.contains(b.target))
            .count()
    }

    /// `dim e_S A (1 - e_S)`: paths leaving `sigma`.
    pub fn forbidden_corner_dim(&self, sigma: VertexSet) -> usize {
        self.peirce_dim(sigma, sigma.complement(self.vertex_count()))
    }

    /// The corner algebra `e_S A e_S`.
    pub fn corner(&self, sigma: VertexSet) -> Result<FDAlgebra> {
        if sigma.is_empty() {
            return Err(Error::EmptySigma);
        }
        if sigma.iter().any(|x| x >= self.vertex_count()) {
            return Err(Error::UnknownVertex(format!("{sigma:?}")));
        }
        let keep: Vec<usize> = (0..self.dim())
            .filter(|&i| {
                sigma.contains(self.basis[i].source) && sigma.contains(self.basis[i].target)
            })
            .collect();
        let mut new_index = vec![usize::MAX; self.dim()];
        for (k, &i) in keep.iter().enumerate() {
            new_index[i] = k;
        }
        let vmap: Vec<usize> = sigma.iter().collect();
        let vindex = |x: usize| vmap.iter().position(|&v| v == x).unwrap();
        let basis = keep
            .iter()
            .map(|&i| BasisElement {
                source: vindex(self.basis[i].source),
                target: vindex(self.basis[i].target),
                label: self.basis[i].label.clone(),
            })
            .collect();
        let m = keep.len();
        let mut mult = Vec::with_capacity(m * m);
        for &i in &keep {
            for &j in &keep {
                let prod = self
                    .product(i, j)
                    .iter()
                    .map(|&(k, c)| {
                        debug_assert!(new_index[k] != usize::MAX, "corner not closed");
                        (new_index[k], c)
                    })
                    .collect();
                mult.push(prod);
            }
        }
        let idempotents = vmap
            .iter()
            .map(|&x| new_index[self.idempotents[x]])
            .collect();
        let vertices = vmap.iter().map(|&x| self.vertices[x].clone()).collect();
        Ok(FDAlgebra::from_parts(
            self.field,
            vertices,
            basis,
            mult,
            idempotents,
        ))
    }

    /// Checks the idempotent, grading and associativity identities on the
    /// structure constants. Returns a description of the first violation.
    pub fn check_structure(&self) -> std::result::Result<(), String> {
        let n = self.dim();
        let u = self.unit();
        for i in 0..n {
            let b = self.basis_vector(i);
            if self.mul(&u, &b) != b || self.mul(&b, &u) != b {
                return Err(format!("unit fails on {}", self.basis[i].label));
            }
        }
        for (x, &ex) in self.idempotents.iter().enumerate() {
            for (y, &ey) in self.idempotents.iter().enumerate() {
                let p = self.mul(&self.basis_vector(ex), &self.basis_vector(ey));
                let expect = if x == y {
                    self.basis_vector(ex)
                } else {
                    vec![0; n]
                };
                if p != expect {
                    return Err(format!("idempotents {x},{y} not orthogonal"));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let prod = self.product(i, j);
                if self.basis[i].target != self.basis[j].source && !prod.is_empty() {
                    return Err(format!("grading fails at ({i},{j})"));
                }
                for &(k, _) in prod {
                    if self.basis[k].source != self.basis[i].source
                        || self.basis[k].target != self.basis[j].target
                    {
                        return Err(format!("grading fails at ({i},{j})"));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul(&self.basis_vector(i), &self.basis_vector(j));
                for k in 0..n {
                    let bk = self.basis_vector(k);
                    let left = self.mul(&ij, &bk);
                    let right =
                        self.mul(&self.basis_vector(i), &self.mul(&self.basis_vector(j), &bk));
                    if left != right {
                        return Err(format!("associativity fails at ({i},{j},{k})"));
                    }
                }
            }
        }
        if self.radical_powers().len() > n.max(1) {
            return Err("radical not nilpotent".into());
        }
        Ok(())
    }
}

fn sparse_from(coeffs: &[u8], idx: &[usize]) -> Sparse {
    coeffs
        .iter()
        .zip(idx)
        .filter(|(&c, _)| c != 0)
        .map(|(&c, &i)| (i, c))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Path {
    source: usize,
    target: usize,
    word: Vec<usize>,
}

/// Builds `kQ/I` from a bound quiver with admissible relations, using the
/// default dimension cap.
pub fn build_algebra(spec: &BoundQuiverSpec) -> Result<Arc<FDAlgebra>> {
    build_algebra_capped(spec, DEFAULT_DIM_CAP)
}

/// Builds `kQ/I`. The basis consists of the paths that are irreducible
/// modulo the ideal, with respect to the order "length, then lexicographic
/// on arrow labels"; the ideal is computed in the truncations `kQ/J^(L+1)`
/// for growing `L` until every path of length `L` reduces to zero.
pub fn build_algebra_capped(spec: &BoundQuiverSpec, dim_cap: usize) -> Result<Arc<FDAlgebra>> {
    let f = spec.field;
    let q = &spec.quiver;
    let nv = q.vertices.len();

    // Validate relations.
    let mut relations: Vec<Vec<(u8, Path)>> = Vec::new();
    for (ri, rel) in spec.relations.iter().enumerate() {
        let mut terms: Vec<(u8, Path)> = Vec::new();
        let mut ends: Option<(usize, usize)> = None;
        for t in &rel.terms {
            if t.path.len() < 2 {
                return Err(Error::NonAdmissible(format!(
                    "relation {} has a path of length {}",
                    ri + 1,
                    t.path.len()
                )));
            }
            for w in t.path.windows(2) {
                if q.arrows[w[0]].target != q.arrows[w[1]].source {
                    return Err(Error::NonAdmissible(format!(
                        "relation {}: {} and {} do not compose",
                        ri + 1,
                        q.arrows[w[0]].label,
                        q.arrows[w[1]].label
                    )));
                }
            }
            let s = q.arrows[t.path[0]].source;
            let e = q.arrows[*t.path.last().unwrap()].target;
            if *ends.get_or_insert((s, e)) != (s, e) {
                return Err(Error::NonAdmissible(format!(
                    "relation {} mixes non-parallel paths",
                    ri + 1
                )));
            }
            let c = t.coeff % f.p();
            if c == 0 {
                continue;
            }
            let path = Path {
                source: s,
                target: e,
                word: t.path.clone(),
            };
            match terms.iter_mut().find(|(_, p)| *p == path) {
                Some((c0, _)) => *c0 = f.add(*c0, c),
                None => terms.push((c, path)),
            }
        }
        terms.retain(|(c, _)| *c != 0);
        if !terms.is_empty() {
            relations.push(terms);
        }
    }

    // Arrow ranks: lexicographic on labels.
    let mut order: Vec<usize> = (0..q.arrows.len()).collect();
    order.sort_by(|&a, &b| q.arrows[a].label.cmp(&q.arrows[b].label));
    let mut rank = vec![0; q.arrows.len()];
    for (r, &a) in order.iter().enumerate() {
        rank[a] = r;
    }
    let key = |p: &Path| -> (usize, Vec<usize>, usize) {
        (
            p.word.len(),
            p.word.iter().map(|&a| rank[a]).collect(),
            p.source,
        )
    };

    let mut by_len: Vec<Vec<Path>> = vec![(0..nv)
        .map(|x| Path {
            source: x,
            target: x,
            word: vec![],
        })
        .collect()];
    let mut total_paths = nv;
    let mut level = 0usize;
    loop {
        level += 1;
        // Extend to paths of length `level`.
        let mut next = Vec::new();
        for p in &by_len[level - 1] {
            for &a in &order {
                if q.arrows[a].source == p.target {
                    let mut word = p.word.clone();
                    word.push(a);
                    next.push(Path {
                        source: p.source,
                        target: q.arrows[a].target,
                        word,
                    });
                }
            }
        }
        total_paths += next.len();
        if total_paths > PATH_CAP {
            return Err(Error::InfiniteDimensional { cap: dim_cap });
        }
        by_len.push(next);

        let reduction = reduce_truncated(f, &by_len, &relations, level, &key);
        let standard: usize = reduction.standard.len();
        let top_all_zero = by_len[level]
            .iter()
            .all(|p| matches!(reduction.normal.get(p), Some(nf) if nf.is_empty()));
        if top_all_zero {
            return Ok(Arc::new(assemble(f, q, &by_len, reduction, level, key)));
        }
        if standard > dim_cap {
            return Err(Error::InfiniteDimensional { cap: dim_cap });
        }
    }
}

struct Reduction {
    /// Irreducible paths.
    standard: Vec<Path>,
    /// Normal forms of reducible paths as combinations of irreducible ones.
    normal: HashMap<Path, Vec<(Path, u8)>>,
}

fn reduce_truncated<K: Ord>(
    f: Fp,
    by_len: &[Vec<Path>],
    relations: &[Vec<(u8, Path)>],
    level: usize,
    key: &impl Fn(&Path) -> K,
) -> Reduction {
    // Ideal elements u * r * v truncated at length `level`.
    let mut ending_at: HashMap<usize, Vec<&Path>> = HashMap::new();
    let mut starting_at: HashMap<usize, Vec<&Path>> = HashMap::new();
    for p in by_len.iter().flatten() {
        ending_at.entry(p.target).or_default().push(p);
        starting_at.entry(p.source).or_default().push(p);
    }
    let mut blocks: BTreeMap<(usize, usize), Vec<Vec<(u8, Vec<usize>)>>> = BTreeMap::new();
    for rel in relations {
        let (s, t) = (rel[0].1.source, rel[0].1.target);
        let min_len = rel.iter().map(|(_, p)| p.word.len()).min().unwrap();
        if min_len > level {
            continue;
        }
        for u in ending_at.get(&s).into_iter().flatten() {
            for v in starting_at.get(&t).into_iter().flatten() {
                if u.word.len() + v.word.len() + min_len > level {
                    continue;
                }
                let mut elt = Vec::new();
                for (c, p) in rel {
                    let len = u.word.len() + p.word.len() + v.word.len();
                    if len > level {
                        continue;
                    }
                    let mut w = u.word.clone();
                    w.extend_from_slice(&p.word);
                    w.extend_from_slice(&v.word);
                    elt.push((*c, w));
                }
                blocks.entry((u.source, v.target)).or_default().push(elt);
            }
        }
    }

    let mut standard = Vec::new();
    let mut normal = HashMap::new();
    // Group all paths by endpoints, sorted descending so pivots are leading terms.
    let mut groups: BTreeMap<(usize, usize), Vec<Path>> = BTreeMap::new();
    for p in by_len.iter().flatten() {
        groups
            .entry((p.source, p.target))
            .or_default()
            .push(p.clone());
    }
    for ((s, t), mut paths) in groups {
        paths.sort_by(|a, b| key(b).cmp(&key(a)));
        let pos: HashMap<&Vec<usize>, usize> = paths
            .iter()
            .enumerate()
            .map(|(i, p)| (&p.word, i))
            .collect();
        let rows: Vec<Vec<u8>> = blocks
            .get(&(s, t))
            .map(|elts| {
                elts.iter()
                    .map(|elt| {
                        let mut row = vec![0u8; paths.len()];
                        for (c, w) in elt {
                            let i = pos[w];
                            row[i] = f.add(row[i], *c);
                        }
                        row
                    })
                    .collect()
            })
            .unwrap_or_default();
        let space = Subspace::span(f, paths.len(), &rows);
        let mut is_pivot = vec![false; paths.len()];
        for (row, &pc) in space.basis().iter().zip(space.pivots()) {
            is_pivot[pc] = true;
            let nf: Vec<(Path, u8)> = row
                .iter()
                .enumerate()
                .filter(|&(c, &x)| c != pc && x != 0)
                .map(|(c, &x)| (paths[c].clone(), f.neg(x)))
                .collect();
            normal.insert(paths[pc].clone(), nf);
        }
        for (i, p) in paths.into_iter().enumerate() {
            if !is_pivot[i] {
                standard.push(p);
            }
        }
    }
    Reduction { standard, normal }
}

fn assemble<K: Ord>(
    f: Fp,
    q: &Quiver,
    by_len: &[Vec<Path>],
    red: Reduction,
    level: usize,
    key: impl Fn(&Path) -> K,
) -> FDAlgebra {
    let mut standard = red.standard;
    standard.sort_by_key(|a| key(a));
    // Trivial paths first, in vertex order.
    standard.sort_by_key(|p| {
        (
            !p.word.is_empty(),
            if p.word.is_empty() { p.source } else { 0 },
        )
    });
    let index: HashMap<&Path, usize> = standard.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let nv = q.vertices.len();
    let idempotents: Vec<usize> = (0..nv)
        .map(|x| {
            index[&Path {
                source: x,
                target: x,
                word: vec![],
            }]
        })
        .collect();
    let basis: Vec<BasisElement> = standard
        .iter()
        .map(|p| BasisElement {
            source: p.source,
            target: p.target,
            label: if p.word.is_empty() {
                format!("e{}", q.vertices[p.source])
            } else {
                p.word
                    .iter()
                    .map(|&a| q.arrows[a].label.as_str())
                    .collect::<Vec<_>>()
                    .join(".")
            },
        })
        .collect();
    let _ = by_len;
    let n = standard.len();
    let mut mult = Vec::with_capacity(n * n);
    for a in &standard {
        for b in &standard {
            if a.target != b.source {
                mult.push(Vec::new());
                continue;
            }
            let mut word = a.word.clone();
            word.extend_from_slice(&b.word);
            if word.len() > level {
                mult.push(Vec::new());
                continue;
            }
            let path = Path {
                source: a.source,
                target: b.target,
                word,
            };
            let nf: Sparse = match index.get(&path) {
                Some(&i) => vec![(i, 1)],
                None => {
                    let mut v: Vec<(usize, u8)> = red.normal[&path]
                        .iter()
                        .map(|(p, c)| (index[p], *c))
                        .collect();
                    v.sort();
                    v
                }
            };
            mult.push(nf);
        }
    }
    FDAlgebra::from_parts(f, q.vertices.clone(), basis, mult, idempotents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn labels(a: &FDAlgebra) -> Vec<&str> {
        a.basis().iter().map(|b| b.label.as_str()).collect()
    }

    #[test]
    fn e1_basis() {
        let a = fixtures::e1();
        assert_eq!(a.dim(), 6);
        assert_eq!(labels(&a), vec!["e1", "e2", "e3", "a", "b", "g"]);
        let p2: Vec<&str> = a
            .basis()
            .iter()
            .filter(|b| b.source == 1)
            .map(|b| b.label.as_str())
            .collect();
        assert_eq!(p2, vec!["e2", "a"]);
        a.check_structure().unwrap();
    }

    #[test]
    fn e2_projective_three() {
        let a = fixtures::e2();
        a.check_structure().unwrap();
        let p3: Vec<&str> = a
            .basis()
            .iter()
            .filter(|b| b.source == 2)
            .map(|b| b.label.as_str())
            .collect();
        assert_eq!(p3.len(), 5);
        assert_eq!(p3, vec!["e3", "b", "g", "b.a", "g.b"]);
        assert_eq!(a.loewy_length(), 3);
    }

    #[test]
    fn one_vertex_is_the_field() {
        let a = fixtures::one_vertex();
        assert_eq!(a.dim(), 1);
        assert!(a.is_connected());
        assert!(a.ext_quiver().arrows.is_empty());
    }

    #[test]
    fn corners() {
        let a = fixtures::e1();
        let full = a.corner(a.all_vertices()).unwrap();
        assert_eq!(full.dim(), a.dim());
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                assert_eq!(full.product(i, j), a.product(i, j));
            }
        }
        let h = a.corner(VertexSet::from_indices([0, 1])).unwrap();
        assert_eq!(labels(&h), vec!["e1", "e2", "a"]);
        let q = h.ext_quiver();
        assert_eq!(q.arrows.len(), 1);
        assert_eq!((q.arrows[0].source, q.arrows[0].target), (1, 0));

        let e2 = fixtures::e2();
        let h2 = e2.corner(VertexSet::from_indices([0, 1])).unwrap();
        assert_eq!(h2.dim(), 3);
        let q2 = h2.ext_quiver();
        assert_eq!(q2.arrows.len(), 1);
        assert!(q2.is_source(1));
        assert!(!q2.is_source(0));
        assert_eq!(a.corner(VertexSet::empty()).unwrap_err(), Error::EmptySigma);
    }

    #[test]
    fn forbidden_corner() {
        let a = fixtures::e1();
        assert_eq!(a.forbidden_corner_dim(VertexSet::from_indices([0])), 0);
        assert_eq!(a.forbidden_corner_dim(VertexSet::from_indices([1])), 1);
        assert_eq!(a.forbidden_corner_dim(a.all_vertices()), 0);
    }

    #[test]
    fn ext_quiver_round_trip() {
        let a = fixtures::e1();
        let q = a.ext_quiver();
        let labels: Vec<&str> = q.arrows.iter().map(|a| a.label.as_str()).collect();
        assert_eq!(labels, vec!["a", "b", "g"]);
        assert!(!q.is_source(0));
        assert!(q.is_source(2));
        let e2 = fixtures::e2();
        assert_eq!(e2.ext_quiver().arrows.len(), 3);
        assert!(e2.ext_quiver().has_oriented_cycle());
        assert!(!q.has_oriented_cycle());
    }

    #[test]
    fn peirce_decomposition() {
        for a in [fixtures::e1(), fixtures::e2()] {
            let n = a.vertex_count();
            for bits in 0..(1u64 << n) {
                let s = VertexSet(bits);
                let c = s.complement(n);
                let total = a.peirce_dim(s, s)
                    + a.peirce_dim(c, c)
                    + a.peirce_dim(c, s)
                    + a.forbidden_corner_dim(s);
                assert_eq!(total, a.dim());
            }
        }
    }

    #[test]
    fn rejects_short_relation() {
        let q = Quiver::new(
            vec!["1".into(), "2".into()],
            vec![Arrow {
                label: "a".into(),
                source: 0,
                target: 1,
            }],
        )
        .unwrap();
        let spec = BoundQuiverSpec {
            field: Fp::GF2,
            quiver: q,
            relations: vec![Relation {
                terms: vec![Term {
                    coeff: 1,
                    path: vec![0],
                }],
            }],
        };
        assert!(matches!(build_algebra(&spec), Err(Error::NonAdmissible(_))));
    }

    #[test]
    fn loop_without_relation_is_infinite() {
        let q = Quiver::new(
            vec!["1".into()],
            vec![Arrow {
                label: "x".into(),
                source: 0,
                target: 0,
            }],
        )
        .unwrap();
        let spec = BoundQuiverSpec {
            field: Fp::GF3,
            quiver: q,
            relations: vec![],
        };
        assert!(matches!(
            build_algebra_capped(&spec, 20),
            Err(Error::InfiniteDimensional { .. })
        ));
    }

    #[test]
    fn commutativity_relation() {
        // Square 1->2->4, 1->3->4 with a.b - c.d = 0 over GF(3).
        let q = Quiver::new(
            vec!["1".into(), "2".into(), "3".into(), "4".into()],
            vec![
                Arrow {
                    label: "a".into(),
                    source: 0,
                    target: 1,
                },
                Arrow {
                    label: "b".into(),
                    source: 1,
                    target: 3,
                },
                Arrow {
                    label: "c".into(),
                    source: 0,
                    target: 2,
                },
                Arrow {
                    label: "d".into(),
                    source: 2,
                    target: 3,
                },
            ],
        )
        .unwrap();
        let spec = BoundQuiverSpec {
            field: Fp::GF3,
            quiver: q,
            relations: vec![Relation {
                terms: vec![
                    Term {
                        coeff: 1,
                        path: vec![0, 1],
                    },
                    Term {
                        coeff: 2,
                        path: vec![2, 3],
                    },
                ],
            }],
        };
        let a = build_algebra(&spec).unwrap();
        assert_eq!(a.dim(), 9);
        a.check_structure().unwrap();
        // c.d is the larger monomial, so a.b stays in the basis.
        assert!(labels(&a).contains(&"a.b"));
        assert!(!labels(&a).contains(&"c.d"));
    }
}
