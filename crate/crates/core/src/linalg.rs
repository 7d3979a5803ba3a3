//! Dense matrices over GF(q): echelon forms, linear solves, kernels and
//! subspaces with canonical bases.
//!
//! Linear maps act on column vectors: the matrix of `f: F^n -> F^m` is
//! `m x n` and its column `j` is `f(e_j)`. Subspaces store their basis as
//! rows in reduced echelon form, which makes equality a plain comparison.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::field::{Elem, Fq};

/// Default largest matrix side accepted by constructors that check caps.
pub const DEFAULT_MAX_DIM: usize = 4000;

static MAX_DIM: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_DIM);

/// Current dimension cap.
pub fn max_dim() -> usize {
    MAX_DIM.load(Ordering::Relaxed)
}

/// Overrides the dimension cap for the whole process.
pub fn set_max_dim(n: usize) {
    MAX_DIM.store(n, Ordering::Relaxed);
}

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: Fq,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows.min(16) {
            writeln!(f, "  {:?}", &self.row(r)[..self.cols.min(24)])?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(field: &Fq, rows: usize, cols: usize) -> Mat {
        Mat { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Fq, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_vec(field: &Fq, rows: usize, cols: usize, data: Vec<Elem>) -> Mat {
        assert_eq!(data.len(), rows * cols, "entries length must be rows * cols");
        Mat { field: field.clone(), rows, cols, data }
    }

    pub fn from_rows(field: &Fq, cols: usize, rows: &[Vec<Elem>]) -> Mat {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Mat { field: field.clone(), rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(field: &Fq, rows: usize, cols: &[Vec<Elem>]) -> Mat {
        let mut m = Mat::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x;
            }
        }
        m
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }
    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn row_mut(&mut self, r: usize) -> &mut [Elem] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn col(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
    pub fn col_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let f = &self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a != 0 {
                    f.add_scaled(orow, other.row(k), a);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut s = 0;
                for (a, &b) in self.row(r).iter().zip(v) {
                    if *a != 0 && b != 0 {
                        s = f.add(s, f.mul(*a, b));
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Mat { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Mat { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scaled(&self, s: Elem) -> Mat {
        let mut m = self.clone();
        self.field.scale(&mut m.data, s);
        m
    }

    /// Block-stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut m = Mat::zeros(&self.field, self.rows, cols);
        for r in 0..self.rows {
            m.data[r * cols..r * cols + self.cols].copy_from_slice(self.row(r));
            m.data[r * cols + self.cols..(r + 1) * cols].copy_from_slice(other.row(r));
        }
        m
    }

    /// Kronecker product; basis pairs are ordered row-major.
    /// `self += s * other`.
    pub fn add_scaled(&mut self, other: &Mat, s: Elem) {
        assert!(self.rows == other.rows && self.cols == other.cols);
        let f = self.field.clone();
        f.add_scaled(&mut self.data, &other.data, s);
    }

    /// `Σ c_i M_i` over matrices of one shape.
    pub fn combination(field: &Fq, rows: usize, cols: usize, coeffs: &[Elem], mats: &[Mat]) -> Mat {
        let mut out = Mat::zeros(field, rows, cols);
        for (&c, m) in coeffs.iter().zip(mats) {
            if c != 0 {
                out.add_scaled(m, c);
            }
        }
        out
    }

    /// Block diagonal matrix.
    pub fn block_diag(field: &Fq, blocks: &[Mat]) -> Mat {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Overwrites the block starting at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        for i in 0..b.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + b.cols].copy_from_slice(b.row(i));
        }
    }

    pub fn kron(&self, other: &Mat) -> Mat {
        let f = &self.field;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut m = Mat::zeros(f, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if b != 0 {
                            m.data[(i * other.rows + k) * c + j * other.cols + l] = f.mul(a, b);
                        }
                    }
                }
            }
        }
        m
    }

    /// Sub-matrix of the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Mat {
        let mut m = Mat::zeros(&self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.data[i * cols.len() + j] = self.get(r, c);
            }
        }
        m
    }

    pub fn check_cap(&self) -> Result<()> {
        if self.rows > max_dim() || self.cols > max_dim() {
            return Err(Error::DimensionCap(format!("{}x{} exceeds {}", self.rows, self.cols, max_dim())));
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Elem>> {
        kernel_from_rref(&rref(self))
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(&self.field, n));
        let r = rref_limited(&aug, n);
        if r.rank < n || r.pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(r.matrix.select(&(0..n).collect::<Vec<_>>(), &(n..2 * n).collect::<Vec<_>>()))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// Result of row reduction.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: Mat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form.
pub fn rref(m: &Mat) -> Rref {
    rref_limited(m, m.cols)
}

/// Row reduction that only pivots on the first `pivot_cols` columns.
pub fn rref_limited(m: &Mat, pivot_cols: usize) -> Rref {
    let mut a = m.clone();
    let f = a.field.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols.min(cols) {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a.data[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for k in 0..cols {
                a.data.swap(pr * cols + k, r * cols + k);
            }
        }
        let inv = f.inv(a.data[r * cols + c]);
        if inv != 1 {
            f.scale(&mut a.data[r * cols + c..(r + 1) * cols], inv);
        }
        let (head, tail) = a.data.split_at_mut(r * cols);
        let (prow, rest) = tail.split_at_mut(cols);
        let prow = &prow[c..];
        for i in 0..r {
            let x = head[i * cols + c];
            if x != 0 {
                f.sub_scaled(&mut head[i * cols + c..(i + 1) * cols], prow, x);
            }
        }
        for i in 0..(rows - r - 1) {
            let x = rest[i * cols + c];
            if x != 0 {
                f.sub_scaled(&mut rest[i * cols + c..(i + 1) * cols], prow, x);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: a, rank: r, pivots }
}

fn kernel_from_rref(r: &Rref) -> Vec<Vec<Elem>> {
    let m = &r.matrix;
    let f = m.field();
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0; cols];
        v[free] = 1;
        for (i, &p) in r.pivots.iter().enumerate() {
            v[p] = f.neg(m.get(i, free));
        }
        basis.push(v);
    }
    basis
}

/// Affine solution set of `A X = B`.
#[derive(Debug, Clone)]
pub struct Solution {
    /// One particular solution, `cols(A) x cols(B)`.
    pub particular: Mat,
    /// Basis of the kernel of `A` (each of length `cols(A)`).
    pub kernel: Vec<Vec<Elem>>,
}

/// Solves `A X = B`, returning `Ok(None)` when the system is inconsistent.
pub fn solve_all(a: &Mat, b: &Mat) -> Result<Option<Solution>> {
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch(format!("A has {} rows, B has {}", a.rows, b.rows)));
    }
    let n = a.cols;
    let aug = a.hstack(b);
    let r = rref_limited(&aug, n);
    // Inconsistent iff a zero row of A carries a nonzero right-hand side.
    for i in r.rank..aug.rows {
        if r.matrix.row(i)[n..].iter().any(|&x| x != 0) {
            return Ok(None);
        }
    }
    let mut particular = Mat::zeros(a.field(), n, b.cols);
    for (i, &p) in r.pivots.iter().enumerate() {
        for j in 0..b.cols {
            particular.set(p, j, r.matrix.get(i, n + j));
        }
    }
    let kernel = kernel_from_rref(&Rref {
        matrix: r.matrix.select(&(0..aug.rows).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>()),
        rank: r.rank,
        pivots: r.pivots.clone(),
    });
    debug_assert!(a.mul(&particular) == *b);
    Ok(Some(Solution { particular, kernel }))
}

/// Solves `A x = b` for one vector.
pub fn solve_vec(a: &Mat, b: &[Elem]) -> Option<Vec<Elem>> {
    let bm = Mat::from_cols(a.field(), b.len(), &[b.to_vec()]);
    solve_all(a, &bm).ok().flatten().map(|s| s.particular.col(0))
}

/// Vector helpers.
pub mod vec_ops {
    use super::*;

    pub fn add(f: &Fq, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
    }
    pub fn sub(f: &Fq, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
    }
    pub fn scale(f: &Fq, a: &[Elem], s: Elem) -> Vec<Elem> {
        a.iter().map(|&x| f.mul(x, s)).collect()
    }
    pub fn is_zero(a: &[Elem]) -> bool {
        a.iter().all(|&x| x == 0)
    }
    /// Linear combination `sum coeffs[i] * vecs[i]`.
    pub fn combine(f: &Fq, len: usize, coeffs: &[Elem], vecs: &[Vec<Elem>]) -> Vec<Elem> {
        let mut out = vec![0; len];
        for (c, v) in coeffs.iter().zip(vecs) {
            f.add_scaled(&mut out, v, *c);
        }
        out
    }
    pub fn unit(len: usize, i: usize) -> Vec<Elem> {
        let mut v = vec![0; len];
        v[i] = 1;
        v
    }
}

/// A subspace of `F^n`, stored by its reduced echelon basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    field: Fq,
    ambient: usize,
    basis: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {})", self.dim(), self.ambient)
    }
}

impl Subspace {
    pub fn zero(field: &Fq, ambient: usize) -> Subspace {
        Subspace { field: field.clone(), ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: &Fq, ambient: usize) -> Subspace {
        let basis = (0..ambient).map(|i| vec_ops::unit(ambient, i)).collect();
        Subspace { field: field.clone(), ambient, basis, pivots: (0..ambient).collect() }
    }

    /// Span of arbitrary generators.
    pub fn span(field: &Fq, ambient: usize, gens: &[Vec<Elem>]) -> Subspace {
        if gens.is_empty() {
            return Subspace::zero(field, ambient);
        }
        let m = Mat::from_rows(field, ambient, gens);
        let r = rref(&m);
        let basis = (0..r.rank).map(|i| r.matrix.row(i).to_vec()).collect();
        Subspace { field: field.clone(), ambient, basis, pivots: r.pivots }
    }

    /// Wraps rows that are already in reduced echelon form with the given
    /// pivots (strictly increasing). Checked in debug builds.
    pub fn from_echelon(field: &Fq, ambient: usize, basis: Vec<Vec<Elem>>, pivots: Vec<usize>) -> Subspace {
        debug_assert_eq!(basis.len(), pivots.len());
        debug_assert!(pivots.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(basis
            .iter()
            .enumerate()
            .all(|(i, r)| pivots.iter().enumerate().all(|(k, &p)| r[p] == if i == k { 1 } else { 0 })));
        Subspace { field: field.clone(), ambient, basis, pivots }
    }

    /// Coordinate subspace spanned by the given standard basis vectors.
    pub fn coordinate(field: &Fq, ambient: usize, indices: &[usize]) -> Subspace {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        let basis = idx.iter().map(|&i| vec_ops::unit(ambient, i)).collect();
        Subspace { field: field.clone(), ambient, basis, pivots: idx }
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Vec<Elem>] {
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

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Ok(Subspace::span(&self.field, self.ambient, &gens))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(&self.field, self.ambient));
        }
        // x*U = y*V  <=>  (x, y) in ker [U; -V]^T
        let f = &self.field;
        let neg_v: Vec<Vec<Elem>> = other.basis.iter().map(|v| vec_ops::scale(f, v, f.neg(1))).collect();
        let mut rows = self.basis.clone();
        rows.extend(neg_v);
        let m = Mat::from_rows(f, self.ambient, &rows).transpose();
        let gens: Vec<Vec<Elem>> =
            m.kernel().iter().map(|k| vec_ops::combine(f, self.ambient, &k[..self.dim()], &self.basis)).collect();
        Ok(Subspace::span(f, self.ambient, &gens))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        let f = &self.field;
        let coeffs: Vec<Elem> = self.pivots.iter().map(|&p| v[p]).collect();
        let recon = vec_ops::combine(f, self.ambient, &coeffs, &self.basis);
        (recon == v).then_some(coeffs)
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        v.len() == self.ambient && self.coords(v).is_some()
    }

    pub fn contains_space(&self, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        Ok(other.basis.iter().all(|v| self.contains(v)))
    }

    /// Reduces `v` modulo the subspace (zeroes the pivot coordinates).
    pub fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut out = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let c = out[p];
            if c != 0 {
                f.sub_scaled(&mut out, b, c);
            }
        }
        out
    }

    /// Coordinates that are not pivots: a canonical complement basis.
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut is_p = vec![false; self.ambient];
        for &p in &self.pivots {
            is_p[p] = true;
        }
        (0..self.ambient).filter(|&i| !is_p[i]).collect()
    }

    /// Image under a linear map given as a matrix.
    pub fn image(&self, map: &Mat) -> Subspace {
        let gens: Vec<Vec<Elem>> = self.basis.iter().map(|v| map.apply(v)).collect();
        Subspace::span(&self.field, map.rows(), &gens)
    }

    /// Matrix whose rows are the basis vectors.
    pub fn basis_matrix(&self) -> Mat {
        Mat::from_rows(&self.field, self.ambient, &self.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> Fq {
        Fq::prime(p).unwrap()
    }

    #[test]
    fn rref_examples() {
        let f = gf(3);
        let r = rref(&Mat::identity(&f, 2));
        assert_eq!((r.rank, r.pivots.clone()), (2, vec![0, 1]));
        assert_eq!(rref(&Mat::zeros(&f, 3, 5)).rank, 0);
        let f5 = gf(5);
        let m = Mat::from_rows(&f5, 2, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_examples() {
        let f = gf(7);
        let b = Mat::from_cols(&f, 2, &[vec![3, 5]]);
        let s = solve_all(&Mat::identity(&f, 2), &b).unwrap().unwrap();
        assert_eq!(s.particular.col(0), vec![3, 5]);
        assert!(s.kernel.is_empty());

        let s = solve_all(&Mat::zeros(&f, 2, 3), &Mat::zeros(&f, 2, 1)).unwrap().unwrap();
        assert_eq!(s.kernel.len(), 3);

        let f2 = gf(2);
        let a = Mat::from_rows(&f2, 2, &[vec![1, 1], vec![0, 0]]);
        let b = Mat::from_cols(&f2, 2, &[vec![1, 1]]);
        assert!(solve_all(&a, &b).unwrap().is_none());
        assert!(matches!(solve_all(&a, &Mat::zeros(&f2, 3, 1)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn subspace_examples() {
        let f = gf(2);
        let u = Subspace::span(&f, 2, &[vec![1, 0]]);
        let v = Subspace::span(&f, 2, &[vec![0, 1]]);
        assert_eq!(u.sum(&Subspace::zero(&f, 2)).unwrap(), u);
        assert_eq!(u.intersection(&u).unwrap(), u);
        // Enumerate all four vectors of F_2^2 for the oracle.
        let all: Vec<Vec<Elem>> = (0..4).map(|c| vec![c & 1, c >> 1]).collect();
        let s = u.sum(&v).unwrap();
        assert!(all.iter().all(|x| s.contains(x)));
        let i = u.intersection(&v).unwrap();
        assert_eq!(all.iter().filter(|x| i.contains(x)).count(), 1);
        assert!(matches!(u.sum(&Subspace::zero(&f, 3)), Err(Error::AmbientMismatch(2, 3))));
    }

    #[test]
    fn inverse_gf4() {
        let f = Fq::new(2, 2).unwrap();
        let m = Mat::from_rows(&f, 2, &[vec![2, 1], vec![1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(&f, 2));
        assert!(Mat::from_rows(&f, 2, &[vec![1, 1], vec![1, 1]]).inverse().is_none());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_mat() -> impl Strategy<Value = (u32, usize, usize, Vec<u32>)> {
            (prop::sample::select(vec![2u32, 3, 5]), 1usize..6, 1usize..6)
                .prop_flat_map(|(p, r, c)| (Just(p), Just(r), Just(c), prop::collection::vec(0..p, r * c)))
        }

        proptest! {
            #[test]
            fn rref_idempotent_and_rank_nullity((p, r, c, data) in arb_mat()) {
                let f = Fq::prime(p).unwrap();
                let m = Mat::from_vec(&f, r, c, data);
                let once = rref(&m);
                let twice = rref(&once.matrix);
                prop_assert_eq!(&once.matrix, &twice.matrix);
                prop_assert_eq!(once.rank + m.kernel().len(), c);
                for k in m.kernel() {
                    prop_assert!(vec_ops::is_zero(&m.apply(&k)));
                }
            }

            #[test]
            fn canonical_basis_ignores_generator_order((p, r, c, data) in arb_mat()) {
                let f = Fq::prime(p).unwrap();
                let m = Mat::from_vec(&f, r, c, data);
                let mut rows = m.row_vecs();
                let a = Subspace::span(&f, c, &rows);
                rows.reverse();
                let b = Subspace::span(&f, c, &rows);
                prop_assert_eq!(a, b);
            }
        }
    }
}
