//! Group-graded algebras, crossed products, graded radicals, the Dade group
//! and the graded centralizer quotient `C̄ = C_A(B) / J_gr(C_A(B))`.
//!
//! Every grading here is carried by a homogeneous basis: each basis vector
//! has one degree in the grading group. Block extensions `b·kG` are built on
//! an echelon basis whose rows are supported on single cosets, so this loses
//! nothing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{subalgebra_generators, StructAlgebra};
use crate::error::{Error, Result};
use crate::field::{Elem, Fq};
use crate::groups::{FiniteGroup, GroupHom, Subgroup};
use crate::linalg::{solve_vec, vec_ops, Mat, Subspace};

/// Degrees of basis vectors in a finite group.
#[derive(Debug, Clone)]
pub struct Grading {
    group: FiniteGroup,
    degrees: Vec<u32>,
}

/// `{"group": …, "components": [[basis indices of degree g] for g in G]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GradingJson {
    pub group: crate::groups::GroupJson,
    pub components: Vec<Vec<usize>>,
}

impl Grading {
    pub fn new(group: FiniteGroup, degrees: Vec<u32>) -> Result<Grading> {
        if let Some(&d) = degrees.iter().find(|&&d| d as usize >= group.order()) {
            return Err(Error::NotGraded(format!("degree {d} outside the grading group")));
        }
        Ok(Grading { group, degrees })
    }

    /// Everything in the identity component.
    pub fn trivial(group: FiniteGroup, dim: usize) -> Grading {
        let e = group.identity();
        Grading { group, degrees: vec![e; dim] }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn component_indices(&self, g: u32) -> Vec<usize> {
        (0..self.degrees.len()).filter(|&i| self.degrees[i] == g).collect()
    }

    pub fn component(&self, f: &Fq, g: u32) -> Subspace {
        Subspace::coordinate(f, self.dim(), &self.component_indices(g))
    }

    pub fn project(&self, v: &[Elem], g: u32) -> Vec<Elem> {
        v.iter().zip(&self.degrees).map(|(&c, &d)| if d == g { c } else { 0 }).collect()
    }

    /// Degree of a nonzero homogeneous vector.
    pub fn degree(&self, v: &[Elem]) -> Option<u32> {
        let mut deg = None;
        for (&c, &d) in v.iter().zip(&self.degrees) {
            if c != 0 {
                match deg {
                    None => deg = Some(d),
                    Some(x) if x != d => return None,
                    _ => {}
                }
            }
        }
        deg
    }

    pub fn is_graded_subspace(&self, s: &Subspace) -> bool {
        s.basis().iter().all(|v| self.group.elements().all(|g| s.contains(&self.project(v, g))))
    }

    /// Grading on a graded subspace whose echelon rows are homogeneous.
    pub fn restrict(&self, s: &Subspace) -> Result<Grading> {
        let degrees = s
            .basis()
            .iter()
            .map(|v| if vec_ops::is_zero(v) { Some(self.group.identity()) } else { self.degree(v) })
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| Error::NotGraded("subspace basis is not homogeneous".into()))?;
        Ok(Grading { group: self.group.clone(), degrees })
    }

    /// Grading on `V / I` with basis the non-pivot indices of a graded `I`.
    pub fn quotient(&self, ideal: &Subspace) -> Result<Grading> {
        if !self.is_graded_subspace(ideal) {
            return Err(Error::NotGraded("ideal is not graded".into()));
        }
        let reps = ideal.complement_indices();
        Ok(Grading { group: self.group.clone(), degrees: reps.iter().map(|&i| self.degrees[i]).collect() })
    }

    /// Grading of `V ⊗ W` by `G × H` (row-major basis, index `g |H| + h`).
    pub fn tensor(&self, other: &Grading) -> Result<Grading> {
        let group = FiniteGroup::direct_product(&self.group, &other.group)?;
        let h = other.group.order() as u32;
        let mut degrees = Vec::with_capacity(self.dim() * other.dim());
        for &a in &self.degrees {
            for &b in &other.degrees {
                degrees.push(a * h + b);
            }
        }
        Ok(Grading { group, degrees })
    }

    /// Same degrees read through a group isomorphism or inclusion.
    pub fn map_group(&self, target: &FiniteGroup, hom: &GroupHom) -> Grading {
        Grading { group: target.clone(), degrees: self.degrees.iter().map(|&d| hom.apply(d)).collect() }
    }

    pub fn to_json(&self) -> GradingJson {
        GradingJson {
            group: self.group.to_json(),
            components: self.group.elements().map(|g| self.component_indices(g)).collect(),
        }
    }

    pub fn from_json(j: &GradingJson) -> Result<Grading> {
        let group = FiniteGroup::from_json(&j.group)?;
        if j.components.len() != group.order() {
            return Err(Error::SchemaError("one component per group element expected".into()));
        }
        let dim: usize = j.components.iter().map(|c| c.len()).sum();
        let mut degrees = vec![u32::MAX; dim];
        for (g, comp) in j.components.iter().enumerate() {
            for &i in comp {
                if i >= dim || degrees[i] != u32::MAX {
                    return Err(Error::SchemaError("components must partition the basis".into()));
                }
                degrees[i] = g as u32;
            }
        }
        Ok(Grading { group, degrees })
    }
}

/// An algebra with a grading on a homogeneous basis.
#[derive(Debug, Clone)]
pub struct GradedAlgebra {
    pub alg: StructAlgebra,
    pub grading: Grading,
}

/// One homogeneous unit per degree together with its inverse.
#[derive(Debug, Clone)]
pub struct Units {
    pub units: Vec<Vec<Elem>>,
    pub inverses: Vec<Vec<Elem>>,
}

/// Outcome of a graded isomorphism check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub bijective: bool,
    pub unital: bool,
    pub multiplicative: bool,
    pub graded: bool,
    pub equivariant: Option<bool>,
    pub witness: Option<String>,
}

impl IsoReport {
    pub fn ok(&self) -> bool {
        self.bijective && self.unital && self.multiplicative && self.graded && self.equivariant.unwrap_or(true)
    }
}

const EXHAUSTIVE_PRODUCTS: usize = 250_000;

impl GradedAlgebra {
    pub fn new(alg: StructAlgebra, grading: Grading) -> Result<GradedAlgebra> {
        if grading.dim() != alg.dim() {
            return Err(Error::DimensionMismatch("grading length differs from algebra dimension".into()));
        }
        let ga = GradedAlgebra { alg, grading };
        ga.verify(0)?;
        Ok(ga)
    }

    /// Unit in degree one and `A_x A_y ⊆ A_{xy}` (exhaustive on basis pairs
    /// when affordable, otherwise sampled).
    pub fn verify(&self, seed: u64) -> Result<()> {
        let e = self.grading.group.identity();
        if self.grading.degree(self.alg.unit()) != Some(e) {
            return Err(Error::NotGraded("unit is not in the identity component".into()));
        }
        let d = self.alg.dim();
        let check = |i: usize, j: usize| -> Result<()> {
            let want = self.grading.group.mul(self.grading.degrees[i], self.grading.degrees[j]);
            for &(k, _) in self.alg.basis_product(i, j) {
                if self.grading.degrees[k as usize] != want {
                    return Err(Error::NotGraded(format!(
                        "product of basis elements {i} and {j} leaves degree {want}"
                    )));
                }
            }
            Ok(())
        };
        if d * d <= EXHAUSTIVE_PRODUCTS {
            for i in 0..d {
                for j in 0..d {
                    check(i, j)?;
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..EXHAUSTIVE_PRODUCTS {
                check(rng.gen_range(0..d), rng.gen_range(0..d))?;
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &Fq {
        self.alg.field()
    }
    pub fn dim(&self) -> usize {
        self.alg.dim()
    }
    pub fn group(&self) -> &FiniteGroup {
        &self.grading.group
    }

    pub fn component(&self, g: u32) -> Subspace {
        self.grading.component(self.field(), g)
    }

    pub fn identity_component(&self) -> Subspace {
        self.component(self.grading.group.identity())
    }

    /// The identity component as an algebra, with its inclusion.
    pub fn identity_algebra(&self) -> Result<(StructAlgebra, Mat)> {
        self.alg.subalgebra(&self.identity_component())
    }

    /// Solves `u v = 1` with `v ∈ A_{g^{-1}}`; returns `v` when also `v u = 1`.
    pub fn homogeneous_inverse(&self, u: &[Elem], g: u32) -> Option<Vec<Elem>> {
        let ginv = self.grading.group.inv(g);
        let idx = self.grading.component_indices(ginv);
        let lm = self.alg.left_matrix(u);
        let all: Vec<usize> = (0..self.dim()).collect();
        let sys = lm.select(&all, &idx);
        let sol = solve_vec(&sys, self.alg.unit())?;
        let mut v = vec![0; self.dim()];
        for (k, &i) in idx.iter().enumerate() {
            v[i] = sol[k];
        }
        (self.alg.mul(&v, u) == self.alg.unit()).then_some(v)
    }

    /// A homogeneous unit in every degree, or `NotCrossedProduct(g)` for
    /// the first degree where the seeded search finds none.
    pub fn crossed_product_units(&self, seed: u64) -> Result<Units> {
        let f = self.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut units = Vec::new();
        let mut inverses = Vec::new();
        for g in self.grading.group.elements() {
            let idx = self.grading.component_indices(g);
            if idx.is_empty() {
                return Err(Error::NotCrossedProduct(g as usize));
            }
            let mut found = None;
            if g == self.grading.group.identity() {
                found = Some((self.alg.one(), self.alg.one()));
            }
            for &i in &idx {
                if found.is_some() {
                    break;
                }
                let u = self.alg.basis(i);
                if let Some(v) = self.homogeneous_inverse(&u, g) {
                    found = Some((u, v));
                }
            }
            for _ in 0..64 {
                if found.is_some() {
                    break;
                }
                let mut u = vec![0; self.dim()];
                for &i in &idx {
                    u[i] = rng.gen_range(0..f.q());
                }
                if let Some(v) = self.homogeneous_inverse(&u, g) {
                    found = Some((u, v));
                }
            }
            let (u, v) = found.ok_or(Error::NotCrossedProduct(g as usize))?;
            units.push(u);
            inverses.push(v);
        }
        Ok(Units { units, inverses })
    }

    /// Graded Jacobson radical: `J_gr ∩ A_g = {r ∈ A_g : A_{g^{-1}} r ⊆ J(A_1)}`.
    /// For a crossed product this is `J(A_1) A`.
    pub fn graded_radical(&self) -> Result<Subspace> {
        let f = self.field().clone();
        let d = self.dim();
        let (a1, emb) = self.identity_algebra()?;
        let j1 = a1.jacobson_radical()?;
        let j1_amb = Subspace::span(&f, d, &j1.basis().iter().map(|v| emb.apply(v)).collect::<Vec<_>>());
        let one_idx = self.grading.component_indices(self.grading.group.identity());
        let j1_in_a1 = j1;
        let quot_idx = j1_in_a1.complement_indices();
        let mut gens = Vec::new();
        for g in self.grading.group.elements() {
            let idx = self.grading.component_indices(g);
            if idx.is_empty() {
                continue;
            }
            let inv_idx = self.grading.component_indices(self.grading.group.inv(g));
            // r = Σ x_k e_{idx[k]}; constraint: for each s in A_{g^{-1}}, s r ∈ J(A_1).
            let mut rows: Vec<Vec<Elem>> = Vec::new();
            for &s in &inv_idx {
                let mut block = vec![vec![0; idx.len()]; quot_idx.len()];
                for (k, &i) in idx.iter().enumerate() {
                    let prod = self.alg.mul_basis(s, i);
                    // The identity component is a coordinate subspace, so
                    // its echelon coordinates are the entries at `one_idx`.
                    let local: Vec<Elem> = one_idx.iter().map(|&t| prod[t]).collect();
                    let red = j1_in_a1.reduce(&local);
                    for (r, &qi) in quot_idx.iter().enumerate() {
                        block[r][k] = red[qi];
                    }
                }
                rows.extend(block);
            }
            let m = Mat::from_rows(&f, idx.len(), &rows);
            for v in m.kernel() {
                let mut x = vec![0; d];
                for (k, &i) in idx.iter().enumerate() {
                    x[i] = v[k];
                }
                gens.push(x);
            }
        }
        let jgr = Subspace::span(&f, d, &gens);
        if !self.alg.is_two_sided_ideal(&jgr) {
            return Err(Error::CheckFailed("graded radical is not an ideal".into()));
        }
        if !jgr.contains_space(&j1_amb)? {
            return Err(Error::CheckFailed("graded radical misses J(A_1)".into()));
        }
        Ok(jgr)
    }

    /// `A ⊗ A'` graded by the direct product of the grading groups.
    pub fn tensor(&self, other: &GradedAlgebra) -> Result<GradedAlgebra> {
        let alg = self.alg.tensor(&other.alg)?;
        let grading = self.grading.tensor(&other.grading)?;
        Ok(GradedAlgebra { alg, grading })
    }

    pub fn tensor_power(&self, n: usize) -> Result<GradedAlgebra> {
        let mut out = self.clone();
        for _ in 1..n {
            out = out.tensor(self)?;
        }
        Ok(out)
    }

    /// Dade group of the graded algebra relative to its identity component:
    /// degrees `g` with `1 ∈ C_g C_{g^{-1}}`, `C = C_A(A_1)`. When `Z(A_1)`
    /// is local this is exactly the set of `g` with `A_g ≅ A_1` as
    /// `(A_1, A_1)`-bimodules.
    pub fn dade_group(&self) -> Result<Subgroup> {
        let c = self.alg.centralizer_in(&self.identity_component())?;
        let cg = self.grading.restrict(&c)?;
        dade_from_centralizer(self, &c, &cg)
    }
}

fn dade_from_centralizer(a: &GradedAlgebra, c: &Subspace, cg: &Grading) -> Result<Subgroup> {
    let f = a.field();
    let group = a.group();
    let mut members = Vec::new();
    for g in group.elements() {
        let here: Vec<&Vec<Elem>> =
            c.basis().iter().zip(cg.degrees()).filter(|(_, &d)| d == g).map(|(v, _)| v).collect();
        let there: Vec<&Vec<Elem>> =
            c.basis().iter().zip(cg.degrees()).filter(|(_, &d)| d == group.inv(g)).map(|(v, _)| v).collect();
        let prods: Vec<Vec<Elem>> = here.iter().flat_map(|x| there.iter().map(|y| a.alg.mul(x, y))).collect();
        if Subspace::span(f, a.dim(), &prods).contains(a.alg.unit()) {
            members.push(g);
        }
    }
    group.subgroup(&members)
}

/// `C_A(B)`, its graded radical and the quotient `C̄`, all graded by the
/// grading group of `A`.
#[derive(Debug, Clone)]
pub struct CBar {
    /// `C_A(B)` in the coordinates of `A`.
    pub centralizer: Subspace,
    /// `C_A(B)` as an algebra on its echelon basis.
    pub c: GradedAlgebra,
    /// `J_gr(C)` in the coordinates of `c`.
    pub radical: Subspace,
    pub quotient: GradedAlgebra,
    /// `c` coordinates to `quotient` coordinates.
    pub proj: Mat,
    pub dade: Subgroup,
}

impl CBar {
    pub fn new(a: &GradedAlgebra) -> Result<CBar> {
        let b = a.identity_component();
        let centralizer = a.alg.centralizer_in(&b)?;
        let cgrad = a.grading.restrict(&centralizer)?;
        let dade = dade_from_centralizer(a, &centralizer, &cgrad)?;
        let (calg, _) = a.alg.subalgebra(&centralizer)?;
        let c = GradedAlgebra::new(calg, cgrad)?;
        let radical = c.graded_radical()?;
        let qgrad = c.grading.quotient(&radical)?;
        let (qalg, proj) = if radical.is_zero() {
            (c.alg.clone(), Mat::identity(a.field(), c.dim()))
        } else {
            c.alg.quotient(&radical)?
        };
        let quotient = GradedAlgebra::new(qalg, qgrad)?;
        let outside = quotient.grading.degrees().iter().any(|&g| !dade.contains(g));
        if outside {
            return Err(Error::CheckFailed("C̄ has a component outside the Dade group".into()));
        }
        Ok(CBar { centralizer, c, radical, quotient, proj, dade })
    }

    /// `A` coordinates of a `C̄` basis element (its canonical lift).
    pub fn lift(&self, i: usize) -> Vec<Elem> {
        let reps = self.radical.complement_indices();
        self.centralizer.basis()[reps[i]].clone()
    }

    /// Class in `C̄` of an element of `C_A(B)` given in `A` coordinates.
    pub fn class_of(&self, x: &[Elem]) -> Result<Vec<Elem>> {
        let c = self
            .centralizer
            .coords(x)
            .ok_or_else(|| Error::CheckFailed("element does not centralize the identity component".into()))?;
        Ok(self.proj.apply(&c))
    }

    /// Matrices of conjugation by homogeneous units on `C̄`, one per degree.
    pub fn action(&self, a: &GradedAlgebra, units: &Units) -> Result<Vec<Mat>> {
        let f = a.field();
        let k = self.quotient.dim();
        let mut out = Vec::new();
        for (u, v) in units.units.iter().zip(&units.inverses) {
            let mut m = Mat::zeros(f, k, k);
            for i in 0..k {
                let x = a.alg.mul(&a.alg.mul(u, &self.lift(i)), v);
                let col = self.class_of(&x)?;
                for (r, &c) in col.iter().enumerate() {
                    m.set(r, i, c);
                }
            }
            out.push(m);
        }
        Ok(out)
    }
}

/// Checks that a linear map (columns are images of basis vectors) is a
/// graded algebra isomorphism; with actions, also that it intertwines them.
/// `degree_map` translates degrees of the source grading group into the
/// target one (identity when `None`).
pub fn verify_graded_iso(
    map: &Mat,
    src: &GradedAlgebra,
    tgt: &GradedAlgebra,
    degree_map: Option<&GroupHom>,
    actions: Option<(&[Mat], &[Mat])>,
) -> IsoReport {
    let mut rep = IsoReport {
        bijective: true,
        unital: true,
        multiplicative: true,
        graded: true,
        equivariant: None,
        witness: None,
    };
    if map.rows() != tgt.dim() || map.cols() != src.dim() || map.rank() != src.dim() || src.dim() != tgt.dim() {
        rep.bijective = false;
        rep.witness = Some("map is not a bijection".into());
    }
    if rep.bijective && map.apply(src.alg.unit()) != tgt.alg.unit() {
        rep.unital = false;
        rep.witness = Some("unit is not preserved".into());
    }
    if rep.bijective {
        'outer: for i in 0..src.dim() {
            let gi = src.grading.degrees()[i];
            let want = degree_map.map_or(gi, |h| h.apply(gi));
            let img = map.col(i);
            if !vec_ops::is_zero(&img) && tgt.grading.degree(&img) != Some(want) {
                rep.graded = false;
                rep.witness = Some(format!("basis element {i} of degree {gi} is not sent to degree {want}"));
                break;
            }
            for j in 0..src.dim() {
                let lhs = map.apply(&src.alg.mul_basis(i, j));
                let rhs = tgt.alg.mul(&img, &map.col(j));
                if lhs != rhs {
                    rep.multiplicative = false;
                    rep.witness = Some(format!("product of basis elements {i} and {j} is not preserved"));
                    break 'outer;
                }
            }
        }
    }
    if let Some((sa, ta)) = actions {
        let ok = sa.len() == ta.len() && sa.iter().zip(ta).all(|(s, t)| map.mul(s) == t.mul(map));
        rep.equivariant = Some(ok);
        if !ok && rep.witness.is_none() {
            rep.witness = Some("actions are not intertwined".into());
        }
    }
    rep
}

/// `A = b·kG` graded by `Ḡ = G/N` through `proj: G -> Ḡ`, where `b` is a
/// `G`-invariant central idempotent of `kN`.
#[derive(Debug, Clone)]
pub struct BlockExtension {
    pub group: FiniteGroup,
    pub normal: Subgroup,
    pub gbar: FiniteGroup,
    pub proj: GroupHom,
    pub kg: StructAlgebra,
    /// `b` in the group basis of `kG`.
    pub idempotent: Vec<Elem>,
    /// `b·kG` inside `kG`, on a coset-homogeneous echelon basis.
    pub space: Subspace,
    pub algebra: GradedAlgebra,
    /// Smallest element of each coset, indexed by `Ḡ`.
    pub coset_reps: Vec<u32>,
}

impl BlockExtension {
    /// Grades `b·kG` by `G/N` (`grade_by_quotient`).
    pub fn from_quotient(group: &FiniteGroup, normal: &Subgroup, field: &Fq, b: Vec<Elem>) -> Result<BlockExtension> {
        let (gbar, proj) = group.quotient(normal)?;
        Self::new(group, normal, &gbar, &proj, field, b)
    }

    /// General form: `proj: G -> Ḡ` is onto with kernel `N`.
    pub fn new(
        group: &FiniteGroup,
        normal: &Subgroup,
        gbar: &FiniteGroup,
        proj: &GroupHom,
        field: &Fq,
        b: Vec<Elem>,
    ) -> Result<BlockExtension> {
        proj.verify(group, gbar)?;
        if proj.kernel(group, gbar) != *normal {
            return Err(Error::NotNormal);
        }
        let kg = crate::algebra::group_algebra(group, field)?;
        Self::with_group_algebra(group, normal, gbar, proj, kg, b)
    }

    pub fn with_group_algebra(
        group: &FiniteGroup,
        normal: &Subgroup,
        gbar: &FiniteGroup,
        proj: &GroupHom,
        kg: StructAlgebra,
        b: Vec<Elem>,
    ) -> Result<BlockExtension> {
        let f = kg.field().clone();
        let n = group.order();
        if b.len() != n {
            return Err(Error::DimensionMismatch("idempotent length differs from |G|".into()));
        }
        if (0..n).any(|i| b[i] != 0 && !normal.contains(i as u32)) {
            return Err(Error::NotInvariant("idempotent is not supported on N".into()));
        }
        if kg.mul(&b, &b) != b || vec_ops::is_zero(&b) {
            return Err(Error::NotInvariant("not a nonzero idempotent".into()));
        }
        for g in kg.generators() {
            if kg.mul(g, &b) != kg.mul(&b, g) {
                return Err(Error::NotInvariant("idempotent is not central in kG".into()));
            }
        }
        // Per-coset echelon bases, merged by pivot.
        let mut rows: Vec<(usize, Vec<Elem>, u32)> = Vec::new();
        let mut coset_reps = vec![u32::MAX; gbar.order()];
        for x in group.elements() {
            let d = proj.apply(x) as usize;
            coset_reps[d] = coset_reps[d].min(x);
        }
        let nelems = normal.elements().to_vec();
        for (d, &rep) in coset_reps.iter().enumerate() {
            let coset: Vec<u32> = nelems.iter().map(|&m| group.mul(rep, m)).collect();
            let mut cols = coset.clone();
            cols.sort_unstable();
            let local: Vec<Vec<Elem>> = coset
                .iter()
                .map(|&x| {
                    let v = kg.mul(&b, &vec_ops::unit(n, x as usize));
                    cols.iter().map(|&c| v[c as usize]).collect()
                })
                .collect();
            let sub = Subspace::span(&f, cols.len(), &local);
            for (v, &p) in sub.basis().iter().zip(sub.pivots()) {
                let mut full = vec![0; n];
                for (k, &c) in cols.iter().enumerate() {
                    full[c as usize] = v[k];
                }
                rows.push((cols[p] as usize, full, d as u32));
            }
        }
        rows.sort_by_key(|r| r.0);
        let pivots: Vec<usize> = rows.iter().map(|r| r.0).collect();
        let degrees: Vec<u32> = rows.iter().map(|r| r.2).collect();
        let basis: Vec<Vec<Elem>> = rows.into_iter().map(|r| r.1).collect();
        let space = Subspace::from_echelon(&f, n, basis, pivots);
        let dim = space.dim();
        let table: Vec<Vec<(u32, Elem)>> = (0..dim * dim)
            .map(|ij| {
                let (i, j) = (ij / dim, ij % dim);
                let prod = kg.mul(&space.basis()[i], &space.basis()[j]);
                let c = space.coords(&prod).expect("b·kG is closed");
                c.iter().enumerate().filter(|(_, &x)| x != 0).map(|(k, &x)| (k as u32, x)).collect()
            })
            .collect();
        let unit = space.coords(&b).expect("b lies in b·kG");
        let labels = (0..dim).map(|i| format!("a{i}")).collect();
        let gens: Vec<Vec<Elem>> = kg.generators().iter().map(|g| space.coords(&kg.mul(&b, g)).unwrap()).collect();
        let alg = StructAlgebra::from_fn(&f, dim, |i, j| table[i * dim + j].clone(), unit, labels, Some(gens))?;
        let grading = Grading::new(gbar.clone(), degrees)?;
        let algebra = GradedAlgebra::new(alg, grading)?;
        Ok(BlockExtension {
            group: group.clone(),
            normal: normal.clone(),
            gbar: gbar.clone(),
            proj: proj.clone(),
            kg,
            idempotent: b,
            space,
            algebra,
            coset_reps,
        })
    }

    pub fn field(&self) -> &Fq {
        self.kg.field()
    }

    /// `A` coordinates to the group basis of `kG`.
    pub fn to_ambient(&self, x: &[Elem]) -> Vec<Elem> {
        vec_ops::combine(self.field(), self.kg.dim(), x, self.space.basis())
    }

    pub fn from_ambient(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        self.space.coords(v)
    }

    /// `b·g` in `A` coordinates.
    pub fn element(&self, g: u32) -> Vec<Elem> {
        let v = self.kg.mul(&self.idempotent, &vec_ops::unit(self.kg.dim(), g as usize));
        self.space.coords(&v).expect("b·g lies in b·kG")
    }

    /// `b·n` for a generating set of `N`, in `A` coordinates.
    pub fn identity_generators(&self) -> Vec<Vec<Elem>> {
        let mut gens = Vec::new();
        let mut span = self.group.trivial_subgroup();
        for &x in self.normal.elements() {
            if !span.contains(x) {
                gens.push(x);
                span = self.group.generated(&gens);
            }
        }
        gens.into_iter().map(|x| self.element(x)).collect()
    }

    /// Units `b·g` for the coset representatives.
    pub fn natural_units(&self) -> Units {
        let units = self.coset_reps.iter().map(|&g| self.element(g)).collect();
        let inverses = self.coset_reps.iter().map(|&g| self.element(self.group.inv(g))).collect();
        Units { units, inverses }
    }

    /// `C_A(B)` in `A` coordinates, using generators of `B`.
    pub fn centralizer(&self) -> Subspace {
        self.algebra.alg.commutant_of(&self.identity_generators())
    }

    pub fn cbar(&self) -> Result<CBar> {
        CBar::new(&self.algebra)
    }
}

/// Generators of the identity component of a graded algebra.
pub fn identity_generators(a: &GradedAlgebra) -> Vec<Vec<Elem>> {
    subalgebra_generators(&a.alg, &a.identity_component())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{group_algebra, subset_sum};

    fn s3() -> FiniteGroup {
        FiniteGroup::symmetric(3).unwrap()
    }

    fn a3(g: &FiniteGroup) -> Subgroup {
        let c = g.find_perm(&[1, 2, 0]).unwrap();
        g.generated(&[c])
    }

    #[test]
    fn ks3_graded_by_c2() {
        let g = s3();
        let n = a3(&g);
        let f = Fq::new(3, 1).unwrap();
        let ext = BlockExtension::from_quotient(&g, &n, &f, vec_ops::unit(6, 0)).unwrap();
        let a = &ext.algebra;
        assert_eq!(a.component(0).dim(), 3);
        assert_eq!(a.component(1).dim(), 3);
        assert!(a.crossed_product_units(1).is_ok());
        assert_eq!(a.graded_radical().unwrap().dim(), 4);
        // Trivial Dade group: the transposition sum squares to zero mod 3.
        let cb = ext.cbar().unwrap();
        assert_eq!(cb.dade.order(), 1);
        assert_eq!(cb.c.dim(), 4);
        assert_eq!(cb.quotient.dim(), 1);
    }

    #[test]
    fn principal_block_of_a3_over_gf4() {
        let g = s3();
        let n = a3(&g);
        let f = Fq::new(2, 2).unwrap();
        let b = subset_sum(6, n.elements());
        let ext = BlockExtension::from_quotient(&g, &n, &f, b).unwrap();
        assert_eq!(ext.algebra.dim(), 2);
        assert_eq!(ext.algebra.component(0).dim(), 1);
        assert_eq!(ext.algebra.component(1).dim(), 1);
        let cb = ext.cbar().unwrap();
        assert_eq!(cb.quotient.dim(), 2);
        assert_eq!(cb.dade.order(), 2);
        let units = ext.natural_units();
        let act = cb.action(&ext.algebra, &units).unwrap();
        assert!(act.iter().all(|m| *m == Mat::identity(&f, 2)));
    }

    #[test]
    fn non_invariant_idempotent_is_rejected() {
        let g = s3();
        let n = a3(&g);
        let f = Fq::new(2, 2).unwrap();
        // A primitive idempotent of kA3 over GF(4) that S3 swaps with its conjugate.
        let ka3 = group_algebra(&g, &f).unwrap();
        let w = f.generator();
        let c = g.find_perm(&[1, 2, 0]).unwrap() as usize;
        let c2 = g.mul(c as u32, c as u32) as usize;
        let mut e = vec![0; 6];
        e[0] = 1;
        e[c] = w;
        e[c2] = f.mul(w, w);
        assert_eq!(ka3.mul(&e, &e), e);
        assert!(matches!(BlockExtension::from_quotient(&g, &n, &f, e), Err(Error::NotInvariant(_))));
    }

    #[test]
    fn graded_iso_detects_degree_swap() {
        let g = s3();
        let n = a3(&g);
        let f = Fq::new(2, 2).unwrap();
        let ext = BlockExtension::from_quotient(&g, &n, &f, subset_sum(6, n.elements())).unwrap();
        let a = &ext.algebra;
        let id = Mat::identity(&f, 2);
        assert!(verify_graded_iso(&id, a, a, None, None).ok());
        let swap = Mat::from_rows(&f, 2, &[vec![0, 1], vec![1, 0]]);
        let rep = verify_graded_iso(&swap, a, a, None, None);
        assert!(!rep.ok());
        assert!(rep.witness.is_some());
    }

    #[test]
    fn tensor_grading_and_radical() {
        let g = s3();
        let n = a3(&g);
        let f = Fq::new(3, 1).unwrap();
        let ext = BlockExtension::from_quotient(&g, &n, &f, vec_ops::unit(6, 0)).unwrap();
        let t = ext.algebra.tensor(&ext.algebra).unwrap();
        assert_eq!(t.group().order(), 4);
        assert_eq!(t.crossed_product_units(3).unwrap().units.len(), 4);
        // J(B⊗B) A⊗A has dimension 36 - 4 = 32 since (A/J)⊗(A/J) has dim 4.
        assert_eq!(t.graded_radical().unwrap().dim(), 32);
    }

    #[test]
    fn grading_json_round_trip() {
        let gr = Grading::new(FiniteGroup::cyclic(2).unwrap(), vec![0, 1, 1, 0]).unwrap();
        let back = Grading::from_json(&gr.to_json()).unwrap();
        assert_eq!(back.degrees(), gr.degrees());
    }
}
