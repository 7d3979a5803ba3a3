//! Finite-dimensional associative algebras given by structure constants.
//!
//! Products of basis elements are stored sparsely (a compressed row per
//! ordered pair), so monomial algebras such as group algebras and their
//! tensor powers stay cheap even at a few hundred dimensions.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec, Fq};
use crate::groups::FiniteGroup;
use crate::linalg::{max_dim, vec_ops, Mat, Subspace};

pub mod blocks;
pub mod radical;

pub use blocks::{center_and_blocks, group_algebra_blocks, BlockData, CenterBlocks};
pub use radical::{radical_brute_force, radical_of_commutative};

/// Coefficient vector of an algebra element.
pub type AlgebraElement = Vec<Elem>;

#[derive(Clone)]
pub struct StructAlgebra {
    field: Fq,
    dim: usize,
    offsets: Arc<Vec<u32>>,
    entries: Arc<Vec<(u32, Elem)>>,
    unit: Vec<Elem>,
    labels: Vec<String>,
    gens: Vec<Vec<Elem>>,
}

impl std::fmt::Debug for StructAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "StructAlgebra(dim {} over GF({}^{}))", self.dim, self.field.p(), self.field.m())
    }
}

/// `{"field":…, "dim":…, "sc":[[[coeffs]…]…], "unit":[…], "labels":[…]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub field: FieldSpec,
    pub dim: usize,
    pub sc: Vec<Vec<Vec<Elem>>>,
    pub unit: Vec<Elem>,
    pub labels: Vec<String>,
}

/// Sparse vector accumulator used while assembling structure constants.
fn sparse(v: &[Elem]) -> Vec<(u32, Elem)> {
    v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k as u32, c)).collect()
}

impl StructAlgebra {
    /// Builds from a product rule on basis pairs. `gens`, if known, must
    /// generate the algebra; otherwise a generating set is computed.
    pub fn from_fn(
        field: &Fq,
        dim: usize,
        mut product: impl FnMut(usize, usize) -> Vec<(u32, Elem)>,
        unit: Vec<Elem>,
        labels: Vec<String>,
        gens: Option<Vec<Vec<Elem>>>,
    ) -> Result<StructAlgebra> {
        if dim == 0 || dim > max_dim() {
            return Err(Error::DimensionCap(format!("algebra of dimension {dim}")));
        }
        if unit.len() != dim || labels.len() != dim {
            return Err(Error::DimensionMismatch("unit or labels length differs from dimension".into()));
        }
        let mut offsets = Vec::with_capacity(dim * dim + 1);
        let mut entries = Vec::new();
        offsets.push(0u32);
        for i in 0..dim {
            for j in 0..dim {
                let mut e = product(i, j);
                e.retain(|&(_, c)| c != 0);
                e.sort_unstable_by_key(|&(k, _)| k);
                entries.extend(e);
                offsets.push(entries.len() as u32);
            }
        }
        let mut a = StructAlgebra {
            field: field.clone(),
            dim,
            offsets: Arc::new(offsets),
            entries: Arc::new(entries),
            unit,
            labels,
            gens: Vec::new(),
        };
        a.gens = match gens {
            Some(g) => g,
            None => a.compute_generators(),
        };
        Ok(a)
    }

    /// Builds and verifies the unit and associativity laws.
    pub fn from_fn_checked(
        field: &Fq,
        dim: usize,
        product: impl FnMut(usize, usize) -> Vec<(u32, Elem)>,
        unit: Vec<Elem>,
        labels: Vec<String>,
        gens: Option<Vec<Vec<Elem>>>,
    ) -> Result<StructAlgebra> {
        let a = Self::from_fn(field, dim, product, unit, labels, gens)?;
        a.verify(0)?;
        Ok(a)
    }

    pub fn from_json(j: &AlgebraJson) -> Result<StructAlgebra> {
        let f = Fq::new(j.field.p, j.field.m)?;
        if j.sc.len() != j.dim || j.sc.iter().any(|r| r.len() != j.dim || r.iter().any(|v| v.len() != j.dim)) {
            return Err(Error::SchemaError("structure constants must be dim x dim x dim".into()));
        }
        if j.sc.iter().flatten().flatten().chain(&j.unit).any(|&c| c >= f.q()) {
            return Err(Error::SchemaError("coefficient out of range".into()));
        }
        Self::from_fn_checked(&f, j.dim, |a, b| sparse(&j.sc[a][b]), j.unit.clone(), j.labels.clone(), None)
    }

    pub fn to_json(&self) -> AlgebraJson {
        let sc = (0..self.dim).map(|i| (0..self.dim).map(|j| self.mul_basis(i, j)).collect()).collect();
        AlgebraJson {
            field: self.field.spec(),
            dim: self.dim,
            sc,
            unit: self.unit.clone(),
            labels: self.labels.clone(),
        }
    }

    /// Unit law (exhaustive) and associativity (exhaustive up to dimension
    /// 64, otherwise 4000 random triples drawn from `seed`).
    pub fn verify(&self, seed: u64) -> Result<()> {
        let d = self.dim;
        for j in 0..d {
            let e = vec_ops::unit(d, j);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(Error::CheckFailed(format!("unit fails on basis element {j}")));
            }
        }
        let triple = |i: usize, j: usize, k: usize| -> bool {
            let ij = self.mul_basis(i, j);
            let jk = self.mul_basis(j, k);
            self.mul(&ij, &vec_ops::unit(d, k)) == self.mul(&vec_ops::unit(d, i), &jk)
        };
        if d <= 64 {
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        if !triple(i, j, k) {
                            return Err(Error::CheckFailed(format!("associativity fails at ({i},{j},{k})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..4000 {
                let (i, j, k) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d));
                if !triple(i, j, k) {
                    return Err(Error::CheckFailed(format!("associativity fails at ({i},{j},{k})")));
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn unit(&self) -> &[Elem] {
        &self.unit
    }
    pub fn one(&self) -> Vec<Elem> {
        self.unit.clone()
    }
    pub fn zero(&self) -> Vec<Elem> {
        vec![0; self.dim]
    }
    pub fn basis(&self, i: usize) -> Vec<Elem> {
        vec_ops::unit(self.dim, i)
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    /// A set of elements generating the algebra.
    pub fn generators(&self) -> &[Vec<Elem>] {
        &self.gens
    }

    /// Sparse product of two basis elements.
    #[inline]
    pub fn basis_product(&self, i: usize, j: usize) -> &[(u32, Elem)] {
        let k = i * self.dim + j;
        &self.entries[self.offsets[k] as usize..self.offsets[k + 1] as usize]
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> Vec<Elem> {
        let mut out = vec![0; self.dim];
        for &(k, c) in self.basis_product(i, j) {
            out[k as usize] = c;
        }
        out
    }

    pub fn mul(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut out = vec![0; self.dim];
        let ynz: Vec<(usize, Elem)> = y.iter().enumerate().filter(|(_, &c)| c != 0).map(|(j, &c)| (j, c)).collect();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for &(j, yj) in &ynz {
                let s = f.mul(xi, yj);
                for &(k, c) in self.basis_product(i, j) {
                    let k = k as usize;
                    out[k] = f.add(out[k], f.mul(s, c));
                }
            }
        }
        out
    }

    pub fn add(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        vec_ops::add(&self.field, x, y)
    }
    pub fn sub(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        vec_ops::sub(&self.field, x, y)
    }
    pub fn scale(&self, x: &[Elem], s: Elem) -> Vec<Elem> {
        vec_ops::scale(&self.field, x, s)
    }

    pub fn pow(&self, x: &[Elem], mut e: u64) -> Vec<Elem> {
        let mut base = x.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Commutator `xy - yx`.
    pub fn commutator(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        self.sub(&self.mul(x, y), &self.mul(y, x))
    }

    /// Equal structure constants and unit.
    pub fn same_as(&self, other: &StructAlgebra) -> bool {
        self.field == other.field
            && self.dim == other.dim
            && self.unit == other.unit
            && (Arc::ptr_eq(&self.entries, &other.entries)
                || (self.offsets == other.offsets && self.entries == other.entries))
    }

    /// Matrix of `y -> x y`.
    pub fn left_matrix(&self, x: &[Elem]) -> Mat {
        let d = self.dim;
        let f = &self.field;
        let mut m = Mat::zeros(f, d, d);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for j in 0..d {
                for &(k, c) in self.basis_product(i, j) {
                    let v = m.get(k as usize, j);
                    m.set(k as usize, j, f.add(v, f.mul(xi, c)));
                }
            }
        }
        m
    }

    /// Matrix of `y -> y x`.
    pub fn right_matrix(&self, x: &[Elem]) -> Mat {
        let d = self.dim;
        let f = &self.field;
        let mut m = Mat::zeros(f, d, d);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for j in 0..d {
                for &(k, c) in self.basis_product(j, i) {
                    let v = m.get(k as usize, j);
                    m.set(k as usize, j, f.add(v, f.mul(xi, c)));
                }
            }
        }
        m
    }

    pub fn is_commutative(&self) -> bool {
        let g = &self.gens;
        g.iter().enumerate().all(|(i, x)| g[i + 1..].iter().all(|y| vec_ops::is_zero(&self.commutator(x, y))))
    }

    /// Subalgebra generated by `gens`, as a subspace.
    pub fn generated_subalgebra(&self, gens: &[Vec<Elem>]) -> Subspace {
        let mut s = Subspace::span(&self.field, self.dim, std::slice::from_ref(&self.unit));
        loop {
            let mut more: Vec<Vec<Elem>> = s.basis().to_vec();
            for b in s.basis() {
                for g in gens {
                    more.push(self.mul(b, g));
                }
            }
            let next = Subspace::span(&self.field, self.dim, &more);
            if next.dim() == s.dim() {
                return s;
            }
            s = next;
        }
    }

    fn compute_generators(&self) -> Vec<Vec<Elem>> {
        let mut gens: Vec<Vec<Elem>> = Vec::new();
        let mut s = Subspace::span(&self.field, self.dim, std::slice::from_ref(&self.unit));
        for i in 0..self.dim {
            if s.is_full() {
                break;
            }
            let b = self.basis(i);
            if !s.contains(&b) {
                gens.push(b);
                s = self.generated_subalgebra(&gens);
            }
        }
        gens
    }

    /// `A ⊗ A'` on row-major pairs.
    pub fn tensor(&self, other: &StructAlgebra) -> Result<StructAlgebra> {
        if self.field != other.field {
            return Err(Error::DimensionMismatch("tensor factors over different fields".into()));
        }
        let (d1, d2) = (self.dim, other.dim);
        if d1 * d2 > max_dim() {
            return Err(Error::DimensionCap(format!("{d1} x {d2} exceeds {}", max_dim())));
        }
        let f = &self.field;
        let product = |a: usize, b: usize| {
            let (i1, i2) = (a / d2, a % d2);
            let (j1, j2) = (b / d2, b % d2);
            let mut out = Vec::new();
            for &(k1, c1) in self.basis_product(i1, j1) {
                for &(k2, c2) in other.basis_product(i2, j2) {
                    out.push((k1 * d2 as u32 + k2, f.mul(c1, c2)));
                }
            }
            out
        };
        let unit = kron_vec(f, &self.unit, &other.unit);
        let labels = (0..d1 * d2).map(|x| format!("{}⊗{}", self.labels[x / d2], other.labels[x % d2])).collect();
        let mut gens: Vec<Vec<Elem>> = self.gens.iter().map(|g| kron_vec(f, g, &other.unit)).collect();
        gens.extend(other.gens.iter().map(|g| kron_vec(f, &self.unit, g)));
        Self::from_fn(f, d1 * d2, product, unit, labels, Some(gens))
    }

    /// `A^{⊗n}` with left-associated pairing (so indices are row-major tuples).
    pub fn tensor_power(&self, n: usize) -> Result<StructAlgebra> {
        if n == 0 {
            return Self::scalars(&self.field);
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = out.tensor(self)?;
        }
        Ok(out)
    }

    /// The ground field as a one-dimensional algebra.
    pub fn scalars(f: &Fq) -> Result<StructAlgebra> {
        Self::from_fn(f, 1, |_, _| vec![(0, 1)], vec![1], vec!["1".into()], Some(Vec::new()))
    }

    pub fn opposite(&self) -> StructAlgebra {
        let d = self.dim;
        Self::from_fn(
            &self.field,
            d,
            |i, j| self.basis_product(j, i).to_vec(),
            self.unit.clone(),
            self.labels.iter().map(|l| format!("{l}°")).collect(),
            Some(self.gens.clone()),
        )
        .expect("opposite of a valid algebra")
    }

    /// Span of all products `u v`.
    pub fn product_space(&self, u: &Subspace, v: &Subspace) -> Subspace {
        let mut gens = Vec::with_capacity(u.dim() * v.dim());
        for x in u.basis() {
            for y in v.basis() {
                gens.push(self.mul(x, y));
            }
        }
        Subspace::span(&self.field, self.dim, &gens)
    }

    /// Span of `s · g` for basis vectors `s` and generators `g`.
    fn times_gens(&self, s: &Subspace, left: bool) -> Vec<Vec<Elem>> {
        let mut out = Vec::new();
        for b in s.basis() {
            for g in &self.gens {
                out.push(if left { self.mul(g, b) } else { self.mul(b, g) });
            }
        }
        out
    }

    /// Two-sided ideal generated by a subspace.
    pub fn ideal_generated(&self, s: &Subspace) -> Subspace {
        let mut cur = s.clone();
        loop {
            let mut gens: Vec<Vec<Elem>> = cur.basis().to_vec();
            gens.extend(self.times_gens(&cur, true));
            gens.extend(self.times_gens(&cur, false));
            let next = Subspace::span(&self.field, self.dim, &gens);
            if next.dim() == cur.dim() {
                return cur;
            }
            cur = next;
        }
    }

    pub fn is_two_sided_ideal(&self, s: &Subspace) -> bool {
        self.times_gens(s, true).iter().chain(self.times_gens(s, false).iter()).all(|v| s.contains(v))
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        if !s.contains(&self.unit) {
            return false;
        }
        s.basis().iter().all(|x| s.basis().iter().all(|y| s.contains(&self.mul(x, y))))
    }

    /// Whether `I^k = 0` for some `k`; `I` is assumed closed under products.
    pub fn is_nilpotent_space(&self, s: &Subspace) -> bool {
        let mut pow = s.clone();
        for _ in 0..=self.dim {
            if pow.is_zero() {
                return true;
            }
            let next = self.product_space(&pow, s);
            if next.dim() == pow.dim() {
                return false;
            }
            pow = next;
        }
        pow.is_zero()
    }

    pub fn is_nilpotent(&self, x: &[Elem]) -> bool {
        let mut y = x.to_vec();
        for _ in 0..self.dim {
            if vec_ops::is_zero(&y) {
                return true;
            }
            y = self.mul(&y, x);
        }
        vec_ops::is_zero(&y)
    }

    /// `{a : a s = s a}` for `s` in a list that generates the relevant subalgebra.
    pub fn commutant_of(&self, elems: &[Vec<Elem>]) -> Subspace {
        let f = &self.field;
        let constraints = elems.iter().map(|s| self.right_matrix(s).sub(&self.left_matrix(s)));
        intersect_kernels(f, self.dim, constraints)
    }

    pub fn center(&self) -> Subspace {
        self.commutant_of(&self.gens)
    }

    /// `C_A(S)` for a unital subalgebra `S`.
    pub fn centralizer_in(&self, s: &Subspace) -> Result<Subspace> {
        if s.ambient() != self.dim {
            return Err(Error::AmbientMismatch(s.ambient(), self.dim));
        }
        if !self.is_subalgebra(s) {
            return Err(Error::NotSubalgebra("centralizer needs a unital subalgebra".into()));
        }
        let c = self.commutant_of(&subalgebra_generators(self, s));
        if !self.is_subalgebra(&c) {
            return Err(Error::CheckFailed("centralizer is not a subalgebra".into()));
        }
        Ok(c)
    }

    /// The subalgebra on a subspace, in its echelon basis, with the inclusion
    /// matrix (`dim A x dim S`, columns are the basis vectors).
    pub fn subalgebra(&self, s: &Subspace) -> Result<(StructAlgebra, Mat)> {
        if !self.is_subalgebra(s) {
            return Err(Error::NotSubalgebra("subspace is not a unital subalgebra".into()));
        }
        let basis = s.basis().to_vec();
        let k = basis.len();
        let mut table = Vec::with_capacity(k * k);
        for x in &basis {
            for y in &basis {
                table.push(s.coords(&self.mul(x, y)).expect("closed"));
            }
        }
        let unit = s.coords(&self.unit).expect("contains unit");
        let labels = (0..k).map(|i| format!("s{i}")).collect();
        let sub = Self::from_fn(&self.field, k, |i, j| sparse(&table[i * k + j]), unit, labels, None)?;
        let emb = Mat::from_cols(&self.field, self.dim, &basis);
        Ok((sub, emb))
    }

    /// `A / I` with basis the non-pivot coordinates of `I`, and the projection.
    pub fn quotient(&self, ideal: &Subspace) -> Result<(StructAlgebra, Mat)> {
        if ideal.ambient() != self.dim {
            return Err(Error::AmbientMismatch(ideal.ambient(), self.dim));
        }
        if !self.is_two_sided_ideal(ideal) {
            return Err(Error::NotIdeal("subspace is not a two-sided ideal".into()));
        }
        if ideal.is_full() {
            return Err(Error::NotIdeal("quotient by the whole algebra".into()));
        }
        let reps = ideal.complement_indices();
        let k = reps.len();
        let f = &self.field;
        let project = |v: &[Elem]| -> Vec<Elem> {
            let r = ideal.reduce(v);
            reps.iter().map(|&i| r[i]).collect()
        };
        let mut proj = Mat::zeros(f, k, self.dim);
        for j in 0..self.dim {
            let c = project(&self.basis(j));
            for (i, &x) in c.iter().enumerate() {
                proj.set(i, j, x);
            }
        }
        let unit = project(&self.unit);
        let labels = reps.iter().map(|&i| format!("[{}]", self.labels[i])).collect();
        let gens = self.gens.iter().map(|g| project(g)).collect();
        let q = Self::from_fn(
            f,
            k,
            |a, b| {
                let mut out = Vec::new();
                for &(t, c) in self.basis_product(reps[a], reps[b]) {
                    out.push((t, c));
                }
                let mut dense = vec![0; self.dim];
                for (t, c) in out {
                    dense[t as usize] = c;
                }
                sparse(&project(&dense))
            },
            unit,
            labels,
            Some(gens),
        )?;
        Ok((q, proj))
    }

    /// Jacobson radical, with its defining properties re-checked.
    pub fn jacobson_radical(&self) -> Result<Subspace> {
        let j = radical::radical(self);
        if !self.is_two_sided_ideal(&j) {
            return Err(Error::CheckFailed("radical is not an ideal".into()));
        }
        if !self.is_nilpotent_space(&j) {
            return Err(Error::CheckFailed("radical is not nilpotent".into()));
        }
        if !j.is_zero() {
            let (q, _) = self.quotient(&j)?;
            if !radical::radical(&q).is_zero() {
                return Err(Error::CheckFailed("quotient by the radical is not semisimple".into()));
            }
        }
        Ok(j)
    }

    /// Relabels basis element names.
    pub fn with_labels(mut self, labels: Vec<String>) -> StructAlgebra {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }

    /// Replaces the generator list (caller guarantees it generates).
    pub fn with_generators(mut self, gens: Vec<Vec<Elem>>) -> StructAlgebra {
        self.gens = gens;
        self
    }
}

/// Generators of a subalgebra given as a subspace (greedy over its basis).
pub fn subalgebra_generators(a: &StructAlgebra, s: &Subspace) -> Vec<Vec<Elem>> {
    let mut gens: Vec<Vec<Elem>> = Vec::new();
    let mut cur = Subspace::span(a.field(), a.dim(), &[a.unit().to_vec()]);
    for b in s.basis() {
        if cur.dim() == s.dim() {
            break;
        }
        if !cur.contains(b) {
            gens.push(b.clone());
            cur = a.generated_subalgebra(&gens);
        }
    }
    gens
}

/// Common kernel of several `r x n` matrices, computed incrementally.
pub fn intersect_kernels(f: &Fq, n: usize, constraints: impl IntoIterator<Item = Mat>) -> Subspace {
    // Columns of `k` span the current solution space.
    let mut k = Mat::identity(f, n);
    for c in constraints {
        if k.cols() == 0 {
            break;
        }
        let restricted = c.mul(&k);
        let ker = restricted.kernel();
        let kk = Mat::from_cols(f, k.cols(), &ker);
        k = k.mul(&kk);
    }
    Subspace::span(f, n, &k.col_vecs())
}

pub fn kron_vec(f: &Fq, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(f.mul(x, y));
        }
    }
    out
}

/// Group algebra `F G` on the group's element order.
pub fn group_algebra(g: &FiniteGroup, f: &Fq) -> Result<StructAlgebra> {
    let n = g.order();
    if n > 2000 {
        return Err(Error::DimensionCap(format!("group algebra of order {n}")));
    }
    let mut gens: Vec<u32> = Vec::new();
    let mut span = g.trivial_subgroup();
    for x in g.elements() {
        if !span.contains(x) {
            gens.push(x);
            span = g.generated(&gens);
        }
    }
    let gen_vecs = gens.iter().map(|&x| vec_ops::unit(n, x as usize)).collect();
    StructAlgebra::from_fn(
        f,
        n,
        |i, j| vec![(g.mul(i as u32, j as u32), 1)],
        vec_ops::unit(n, g.identity() as usize),
        g.labels().to_vec(),
        Some(gen_vecs),
    )
}

/// Element `sum_{x in S} x` of a group algebra.
pub fn subset_sum(n: usize, elems: &[u32]) -> Vec<Elem> {
    let mut v = vec![0; n];
    for &x in elems {
        v[x as usize] = 1;
    }
    v
}

/// Result of the centralizer tensor check: the map and dimensions.
#[derive(Debug, Clone)]
pub struct CentralizerTensor {
    pub map: Mat,
    pub dim_left: usize,
    pub dim_right: usize,
}

/// Builds `C_A(B) ⊗ C_{A'}(B') -> C_{A⊗A'}(B⊗B')` and checks that it is a
/// multiplicative bijection. `b` and `b2` are unital subalgebras.
pub fn centralizer_tensor_check(
    a: &StructAlgebra,
    b: &Subspace,
    a2: &StructAlgebra,
    b2: &Subspace,
) -> Result<CentralizerTensor> {
    let f = a.field().clone();
    let ca = a.centralizer_in(b)?;
    let ca2 = a2.centralizer_in(b2)?;
    let t = a.tensor(a2)?;
    let bt = tensor_subspace(&f, b, b2);
    let ct = t.centralizer_in(&bt)?;
    let mut cols = Vec::new();
    for x in ca.basis() {
        for y in ca2.basis() {
            cols.push(kron_vec(&f, x, y));
        }
    }
    let map = Mat::from_cols(&f, t.dim(), &cols);
    let image = Subspace::span(&f, t.dim(), &cols);
    if map.rank() != cols.len() {
        return Err(Error::CheckFailed("centralizer tensor map is not injective".into()));
    }
    if image != ct {
        return Err(Error::CheckFailed("centralizer tensor map is not onto the centralizer".into()));
    }
    for (i, x) in ca.basis().iter().enumerate() {
        for (j, y) in ca2.basis().iter().enumerate().take(4) {
            for (k, z) in ca.basis().iter().enumerate().take(4) {
                let w = &ca2.basis()[(i + j + k) % ca2.dim()];
                let lhs = t.mul(&kron_vec(&f, x, y), &kron_vec(&f, z, w));
                let rhs = kron_vec(&f, &a.mul(x, z), &a2.mul(y, w));
                if lhs != rhs {
                    return Err(Error::CheckFailed("centralizer tensor map is not multiplicative".into()));
                }
            }
        }
    }
    Ok(CentralizerTensor { map, dim_left: ca.dim(), dim_right: ca2.dim() })
}

/// `U ⊗ V` inside `F^{m n}` (row-major pairs).
pub fn tensor_subspace(f: &Fq, u: &Subspace, v: &Subspace) -> Subspace {
    let mut gens = Vec::with_capacity(u.dim() * v.dim());
    for x in u.basis() {
        for y in v.basis() {
            gens.push(kron_vec(f, x, y));
        }
    }
    Subspace::span(f, u.ambient() * v.ambient(), &gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 3).unwrap()
    }

    #[test]
    fn group_algebra_examples() {
        let f3 = Fq::new(3, 1).unwrap();
        let a = group_algebra(&s3(), &f3).unwrap();
        assert_eq!(a.dim(), 6);
        a.verify(0).unwrap();
        let f2 = Fq::new(2, 1).unwrap();
        let c2 = group_algebra(&FiniteGroup::cyclic(2).unwrap(), &f2).unwrap();
        assert!(c2.is_commutative());
        let x = vec![1, 1];
        assert_eq!(c2.mul(&x, &x), vec![0, 0]);
        let triv = group_algebra(&FiniteGroup::trivial(), &f3).unwrap();
        assert_eq!(triv.dim(), 1);
    }

    #[test]
    fn tensor_examples() {
        let f2 = Fq::new(2, 1).unwrap();
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let k = group_algebra(&c2, &f2).unwrap();
        let kk = k.tensor(&k).unwrap();
        let v4 = FiniteGroup::direct_product(&c2, &c2).unwrap();
        let kv = group_algebra(&v4, &f2).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(kk.mul_basis(i, j), kv.mul_basis(i, j));
            }
        }
        let s = StructAlgebra::scalars(&f2).unwrap();
        let ks = k.tensor(&s).unwrap();
        assert_eq!(ks.dim(), 2);
        assert_eq!(ks.mul_basis(1, 1), k.mul_basis(1, 1));
        kk.verify(0).unwrap();
    }

    #[test]
    fn center_dimension_is_class_number() {
        for (g, p) in [
            (s3(), 2),
            (s3(), 3),
            (FiniteGroup::from_permutations(&[vec![1, 0, 2, 3], vec![1, 2, 3, 0]], 4).unwrap(), 3),
        ] {
            let f = Fq::new(p, 1).unwrap();
            let a = group_algebra(&g, &f).unwrap();
            assert_eq!(a.center().dim(), g.conjugacy_classes().len());
            let z = a.center();
            for c in g.conjugacy_classes() {
                assert!(z.contains(&subset_sum(g.order(), &c)));
            }
        }
    }

    #[test]
    fn centralizer_examples() {
        let f4 = Fq::new(2, 2).unwrap();
        let g = s3();
        let a = group_algebra(&g, &f4).unwrap();
        let whole = Subspace::full(&f4, 6);
        assert_eq!(a.centralizer_in(&whole).unwrap(), a.center());
        let scalars = Subspace::span(&f4, 6, &[a.one()]);
        assert!(a.centralizer_in(&scalars).unwrap().is_full());
        let a3 = g.generated(&[g.find_perm(&[1, 2, 0]).unwrap()]);
        let b = Subspace::span(&f4, 6, &a3.elements().iter().map(|&x| a.basis(x as usize)).collect::<Vec<_>>());
        assert_eq!(a.centralizer_in(&b).unwrap().dim(), 4);
        let not_sub = Subspace::span(&f4, 6, &[a.basis(1)]);
        assert!(matches!(a.centralizer_in(&not_sub), Err(Error::NotSubalgebra(_))));
    }

    #[test]
    fn centralizer_tensor_examples() {
        let f4 = Fq::new(2, 2).unwrap();
        let g = s3();
        let a = group_algebra(&g, &f4).unwrap();
        let a3 = g.generated(&[g.find_perm(&[1, 2, 0]).unwrap()]);
        let b = Subspace::span(&f4, 6, &a3.elements().iter().map(|&x| a.basis(x as usize)).collect::<Vec<_>>());
        let r = centralizer_tensor_check(&a, &b, &a, &b).unwrap();
        assert_eq!((r.dim_left, r.dim_right), (4, 4));
        let s = StructAlgebra::scalars(&f4).unwrap();
        let full1 = Subspace::full(&f4, 1);
        let r = centralizer_tensor_check(&a, &b, &s, &full1).unwrap();
        assert_eq!(r.map.rank(), 4);
    }

    #[test]
    fn quotient_examples() {
        let f3 = Fq::new(3, 1).unwrap();
        let a = group_algebra(&FiniteGroup::cyclic(3).unwrap(), &f3).unwrap();
        let j = a.jacobson_radical().unwrap();
        assert_eq!(j.dim(), 2);
        let (q, proj) = a.quotient(&j).unwrap();
        assert_eq!(q.dim(), 1);
        assert!(q.jacobson_radical().unwrap().is_zero());
        for x in 0..3 {
            for y in 0..3 {
                let lhs = proj.apply(&a.mul_basis(x, y));
                let rhs = q.mul(&proj.apply(&a.basis(x)), &proj.apply(&a.basis(y)));
                assert_eq!(lhs, rhs);
            }
        }
        let (same, _) = a.quotient(&Subspace::zero(&f3, 3)).unwrap();
        assert_eq!(same.dim(), 3);
        let bad = Subspace::span(&f3, 3, &[a.basis(1)]);
        assert!(matches!(a.quotient(&bad), Err(Error::NotIdeal(_))));
    }

    #[test]
    fn radical_examples() {
        let f4 = Fq::new(2, 2).unwrap();
        let a = group_algebra(&FiniteGroup::cyclic(3).unwrap(), &f4).unwrap();
        assert!(a.jacobson_radical().unwrap().is_zero());
        let s = StructAlgebra::scalars(&f4).unwrap();
        assert!(s.jacobson_radical().unwrap().is_zero());
    }

    #[test]
    fn json_round_trip() {
        let f3 = Fq::new(3, 1).unwrap();
        let a = group_algebra(&s3(), &f3).unwrap();
        let j = serde_json::to_string(&a.to_json()).unwrap();
        let b = StructAlgebra::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        for i in 0..6 {
            for k in 0..6 {
                assert_eq!(a.mul_basis(i, k), b.mul_basis(i, k));
            }
        }
    }
}
