//! Dense linear algebra over the prime fields GF(2), GF(3) and GF(5).
//!
//! Vectors are plain `Vec<u8>` of residues. Modules in this crate act on
//! row vectors, so most helpers here (row spaces, left kernels) are phrased
//! in terms of rows; the column-oriented `solve_linear` and
//! `nullspace_basis` follow the usual `A x = b` convention.

use std::fmt;

use crate::error::{Error, Result};

/// A prime field GF(p) with p in {2, 3, 5}.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp(u8);

impl Fp {
    pub fn new(p: u8) -> Result<Self> {
        match p {
            2 | 3 | 5 => Ok(Fp(p)),
            _ => Err(Error::UnsupportedField(p)),
        }
    }

    pub const GF2: Fp = Fp(2);
    pub const GF3: Fp = Fp(3);
    pub const GF5: Fp = Fp(5);

    #[inline]
    pub fn p(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u8 {
        x.rem_euclid(self.0 as i64) as u8
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.0 as u16) as u8
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(self, a: u8) -> u8 {
        assert!(a != 0, "inverse of zero");
        (1..self.0).find(|&b| self.mul(a, b) == 1).unwrap()
    }

    /// `dst += c * src`
    pub fn axpy(self, dst: &mut [u8], c: u8, src: &[u8]) {
        if c == 0 {
            return;
        }
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d = self.add(*d, self.mul(c, s));
            }
        }
    }

    pub fn scale(self, v: &mut [u8], c: u8) {
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }

    /// Number of field elements raised to `k`, saturating.
    pub fn count(self, k: usize) -> u128 {
        (self.0 as u128).checked_pow(k as u32).unwrap_or(u128::MAX)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0)
    }
}

/// Dense row-major matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}x{} over {}]", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            write!(f, "\n  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Result of row reduction.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Fp, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows; entries are reduced mod p.
    pub fn from_rows(field: Fp, cols: usize, rows: &[Vec<u8>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| x % field.p()));
        }
        Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_vec(field: Fp, rows: usize, cols: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), rows * cols);
        let data = data.into_iter().map(|x| x % field.p()).collect();
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    #[inline]
    pub fn field(&self) -> Fp {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn data(&self) -> &[u8] {
        &self.data
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v % self.field.p();
    }
    #[inline]
    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u8] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == (r == c) as u8))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a != 0 {
                    f.axpy(dst, a, other.row(k));
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a != 0 {
                self.field.axpy(&mut out, a, self.row(k));
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: u8, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.field.axpy(&mut self.data, c, &other.data);
    }

    pub fn scaled(&self, c: u8) -> Matrix {
        let mut m = self.clone();
        self.field.scale(&mut m.data, c);
        m
    }

    /// Copies `block` into `self` with its top-left corner at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(r));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field, rows, cols);
        for r in 0..rows {
            let src = (r0 + r) * self.cols + c0;
            m.row_mut(r).copy_from_slice(&self.data[src..src + cols]);
        }
        m
    }

    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    /// Reduced row echelon form. Pivots are chosen as the first nonzero entry
    /// scanning columns left to right and, within a column, rows top to
    /// bottom; pivot entries are normalized to 1.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col));
            f.scale(m.row_mut(row), inv);
            let pivot_row = m.row(row).to_vec();
            for r in 0..m.rows {
                if r != row {
                    let c = m.get(r, col);
                    if c != 0 {
                        f.axpy(m.row_mut(r), f.neg(c), &pivot_row);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref {
            matrix: m,
            rank: pivots.len(),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Matrix::identity(self.field, n));
        let red = aug.rref();
        if red.pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) || red.rank < n {
            return None;
        }
        Some(red.matrix.block(0, n, n, n))
    }

    /// Row vectors `v` with `v * self = 0`.
    pub fn left_kernel(&self) -> Vec<Vec<u8>> {
        nullspace_basis(&self.transpose())
    }

    /// Row space as a canonical subspace of the ambient row space.
    pub fn row_space(&self) -> Subspace {
        Subspace::from_rref(self.rref())
    }

    pub fn pow(&self, k: usize) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Reduced row echelon form with rank and pivot columns.
pub fn rref(m: &Matrix) -> Rref {
    m.rref()
}

/// Solves `A x = b` for a column `b`. Returns `None` when inconsistent.
pub fn solve_linear(a: &Matrix, b: &[u8]) -> Result<Option<Vec<u8>>> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let f = a.field();
    let n = a.cols();
    let mut aug = Matrix::zeros(f, a.rows(), n + 1);
    aug.set_block(0, 0, a);
    for (r, &x) in b.iter().enumerate() {
        aug.set(r, n, x);
    }
    let red = aug.rref();
    if red.pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![0; n];
    for (i, &pc) in red.pivots.iter().enumerate() {
        x[pc] = red.matrix.get(i, n);
    }
    Ok(Some(x))
}

/// Basis of `{x : A x = 0}` as columns, one per free variable.
pub fn nullspace_basis(a: &Matrix) -> Vec<Vec<u8>> {
    let f = a.field();
    let red = a.rref();
    let n = a.cols();
    let mut is_pivot = vec![false; n];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut x = vec![0; n];
        x[free] = 1;
        for (i, &pc) in red.pivots.iter().enumerate() {
            x[pc] = f.neg(red.matrix.get(i, free));
        }
        basis.push(x);
    }
    basis
}

/// A subspace of a row space `GF(p)^n`, stored as its reduced echelon basis.
///
/// Two subspaces are equal iff their stored bases are equal, so this type is
/// usable as a hash key.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<u8>>,
    pivots: Vec<usize>,
    #[doc(hidden)]
    p: u8,
}

impl Subspace {
    pub fn zero(field: Fp, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
            p: field.p(),
        }
    }

    pub fn full(field: Fp, ambient: usize) -> Self {
        Matrix::identity(field, ambient).row_space()
    }

    pub fn span(field: Fp, ambient: usize, vectors: &[Vec<u8>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(field, ambient);
        }
        Matrix::from_rows(field, ambient, vectors).row_space()
    }

    fn from_rref(red: Rref) -> Self {
        let field = red.matrix.field();
        let basis = (0..red.rank).map(|r| red.matrix.row(r).to_vec()).collect();
        Subspace {
            ambient: red.matrix.cols(),
            basis,
            pivots: red.pivots,
            p: field.p(),
        }
    }

    pub fn field(&self) -> Fp {
        Fp(self.p)
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }
    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(self.field(), self.ambient, &self.basis)
    }

    /// Remainder of `v` after eliminating the pivot columns.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let f = self.field();
        let mut r = v.to_vec();
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = r[pc];
            if c != 0 {
                f.axpy(&mut r, f.neg(c), b);
            }
        }
        r
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the stored basis; `None` if `v` is outside.
    pub fn coords(&self, v: &[u8]) -> Option<Vec<u8>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc]).collect())
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(self.field(), self.ambient, &rows)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let f = self.field();
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(f, self.ambient);
        }
        // u in self ∩ other  <=>  u = a*S = b*O, i.e. [a | b] [S; -O] = 0.
        let k = self.dim();
        let mut stacked = Matrix::zeros(f, k + other.dim(), self.ambient);
        for (i, b) in self.basis.iter().enumerate() {
            stacked.row_mut(i).copy_from_slice(b);
        }
        for (i, b) in other.basis.iter().enumerate() {
            let row: Vec<u8> = b.iter().map(|&x| f.neg(x)).collect();
            stacked.row_mut(k + i).copy_from_slice(&row);
        }
        let sm = self.basis_matrix();
        let vecs: Vec<Vec<u8>> = stacked
            .left_kernel()
            .into_iter()
            .map(|ab| sm.apply_row(&ab[..k]))
            .collect();
        Subspace::span(f, self.ambient, &vecs)
    }

    /// Standard basis vectors at the non-pivot columns; they span a
    /// complement of this subspace.
    pub fn complement_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }

    /// Image of `v` in the quotient by this subspace, in the coordinates of
    /// `complement_columns`.
    pub fn quotient_coords(&self, v: &[u8]) -> Vec<u8> {
        let r = self.reduce(v);
        self.complement_columns().iter().map(|&c| r[c]).collect()
    }
}

/// Iterates over all coefficient vectors of length `k` over GF(p), in
/// little-endian counter order starting from zero.
pub struct CoeffIter {
    p: u8,
    cur: Vec<u8>,
    done: bool,
}

impl CoeffIter {
    pub fn new(field: Fp, k: usize) -> Self {
        CoeffIter {
            p: field.p(),
            cur: vec![0; k],
            done: false,
        }
    }
}

impl Iterator for CoeffIter {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let mut i = 0;
        loop {
            if i == self.cur.len() {
                self.done = true;
                break;
            }
            self.cur[i] += 1;
            if self.cur[i] == self.p {
                self.cur[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
        Some(out)
    }
}

/// Linear combination `sum c_i M_i` of equally shaped matrices.
pub fn combine(field: Fp, coeffs: &[u8], mats: &[Matrix], rows: usize, cols: usize) -> Matrix {
    let mut acc = Matrix::zeros(field, rows, cols);
    for (&c, m) in coeffs.iter().zip(mats) {
        acc.add_scaled(c, m);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m2(rows: &[Vec<u8>]) -> Matrix {
        Matrix::from_rows(Fp::GF2, rows[0].len(), rows)
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = Matrix::identity(Fp::GF2, 2);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 2);
        let z = Matrix::zeros(Fp::GF3, 3, 3);
        let r = z.rref();
        assert_eq!(r.matrix, z);
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_rank_one() {
        let r = m2(&[vec![1, 1], vec![1, 1]]).rref();
        assert_eq!(r.matrix, m2(&[vec![1, 1], vec![0, 0]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(Fp::GF5, 3);
        assert_eq!(solve_linear(&id, &[4, 0, 2]).unwrap(), Some(vec![4, 0, 2]));
        let z = Matrix::zeros(Fp::GF5, 2, 2);
        assert_eq!(solve_linear(&z, &[0, 1]).unwrap(), None);
        let a = m2(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(solve_linear(&a, &[0, 1]).unwrap(), Some(vec![1, 1]));
        assert!(matches!(
            solve_linear(&a, &[0, 1, 1]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace_basis(&Matrix::identity(Fp::GF3, 4)).is_empty());
        let z = nullspace_basis(&Matrix::zeros(Fp::GF2, 3, 3));
        assert_eq!(z, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(nullspace_basis(&m2(&[vec![1, 1]])), vec![vec![1, 1]]);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Matrix::from_rows(Fp::GF5, 2, &[vec![2, 1], vec![1, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(m2(&[vec![1, 1], vec![1, 1]]).inverse().is_none());
    }

    #[test]
    fn subspace_intersection_and_quotient() {
        let f = Fp::GF2;
        let u = Subspace::span(f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let w = Subspace::span(f, 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        let i = u.intersection(&w);
        assert_eq!(i.basis(), &[vec![0, 1, 0]]);
        assert_eq!(u.sum(&w).dim(), 3);
        assert_eq!(u.complement_columns(), vec![2]);
        assert_eq!(u.quotient_coords(&[1, 1, 1]), vec![1]);
    }

    #[test]
    fn coeff_iter_counts() {
        assert_eq!(CoeffIter::new(Fp::GF3, 3).count(), 27);
        assert_eq!(CoeffIter::new(Fp::GF2, 0).count(), 1);
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix> {
        (
            prop_oneof![Just(2u8), Just(3u8), Just(5u8)],
            1usize..6,
            1usize..6,
        )
            .prop_flat_map(|(p, r, c)| {
                proptest::collection::vec(0u8..p, r * c)
                    .prop_map(move |d| Matrix::from_vec(Fp::new(p).unwrap(), r, c, d))
            })
    }

    proptest! {
        #[test]
        fn rank_nullity(a in arb_matrix()) {
            let ns = nullspace_basis(&a);
            prop_assert_eq!(a.rank() + ns.len(), a.cols());
            for x in &ns {
                prop_assert!(a.transpose().apply_row(x).iter().all(|&v| v == 0));
            }
        }

        #[test]
        fn rref_idempotent(a in arb_matrix()) {
            let once = a.rref().matrix;
            prop_assert_eq!(once.rref().matrix, once);
        }

        #[test]
        fn solvable_iff_rank_matches(a in arb_matrix(), seed in any::<u64>()) {
            let f = a.field();
            let b: Vec<u8> = (0..a.rows()).map(|i| f.reduce((seed >> (i * 3)) as i64)).collect();
            let mut aug = Matrix::zeros(f, a.rows(), a.cols() + 1);
            aug.set_block(0, 0, &a);
            for (r, &x) in b.iter().enumerate() { aug.set(r, a.cols(), x); }
            let sol = solve_linear(&a, &b).unwrap();
            prop_assert_eq!(sol.is_some(), a.rank() == aug.rank());
            if let Some(x) = sol {
                prop_assert_eq!(a.transpose().apply_row(&x), b);
            }
        }
    }
}
