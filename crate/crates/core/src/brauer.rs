//! Brauer quotients `A(Q) = A^Q / Σ_R tr_R^Q(A^R)`, defect groups, the
//! Harris–Knörr correspondence and the tensor-power Brauer diagram.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::algebra::{group_algebra_blocks, kron_vec, StructAlgebra};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::graded::BlockExtension;
use crate::groups::{FiniteGroup, Subgroup};
use crate::linalg::{vec_ops, Mat, Subspace};

/// How a group acts on the basis of an algebra.
#[derive(Debug, Clone)]
pub enum Action {
    /// Basis permutations, `perm[g][i]` is the image of basis vector `i`.
    Perm(Vec<Vec<u32>>),
    /// One matrix per group element.
    Linear(Vec<Mat>),
}

/// An algebra with a group acting by algebra automorphisms.
#[derive(Debug, Clone)]
pub struct ActedAlgebra {
    pub alg: StructAlgebra,
    pub group: FiniteGroup,
    pub action: Action,
}

impl ActedAlgebra {
    /// Checks the action is a homomorphism into algebra automorphisms
    /// (multiplicativity on generator-by-basis products).
    pub fn new(alg: StructAlgebra, group: FiniteGroup, action: Action) -> Result<ActedAlgebra> {
        let n = match &action {
            Action::Perm(p) => p.len(),
            Action::Linear(m) => m.len(),
        };
        if n != group.order() {
            return Err(Error::DimensionMismatch("one action entry per group element expected".into()));
        }
        let a = ActedAlgebra { alg, group, action };
        a.verify()?;
        Ok(a)
    }

    fn verify(&self) -> Result<()> {
        let d = self.alg.dim();
        let g = &self.group;
        for x in g.elements() {
            for y in g.elements().take(8) {
                for i in 0..d.min(16) {
                    let e = vec_ops::unit(d, i);
                    if self.act(g.mul(x, y), &e) != self.act(x, &self.act(y, &e)) {
                        return Err(Error::CheckFailed("action is not a homomorphism".into()));
                    }
                }
            }
            if self.act(x, self.alg.unit()) != self.alg.unit() {
                return Err(Error::CheckFailed("action does not fix the unit".into()));
            }
            for gen in self.alg.generators() {
                for j in 0..d {
                    let e = vec_ops::unit(d, j);
                    let lhs = self.act(x, &self.alg.mul(gen, &e));
                    let rhs = self.alg.mul(&self.act(x, gen), &self.act(x, &e));
                    if lhs != rhs {
                        return Err(Error::CheckFailed("action is not by algebra automorphisms".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// `kG` with `G` acting by conjugation.
    pub fn group_algebra_conjugation(g: &FiniteGroup, kg: StructAlgebra) -> Result<ActedAlgebra> {
        if kg.dim() != g.order() {
            return Err(Error::DimensionMismatch("not the group algebra of this group".into()));
        }
        let perms = g.elements().map(|x| g.elements().map(|y| g.conj(x, y)).collect()).collect();
        Ok(ActedAlgebra { alg: kg, group: g.clone(), action: Action::Perm(perms) })
    }

    pub fn act(&self, g: u32, x: &[Elem]) -> Vec<Elem> {
        match &self.action {
            Action::Perm(p) => {
                let mut out = vec![0; x.len()];
                for (i, &c) in x.iter().enumerate() {
                    out[p[g as usize][i] as usize] = c;
                }
                out
            }
            Action::Linear(m) => m[g as usize].apply(x),
        }
    }

    /// `A^{⊗n}` with `G^n` acting factorwise.
    pub fn tensor_power(&self, n: usize) -> Result<ActedAlgebra> {
        let alg = self.alg.tensor_power(n)?;
        let group = FiniteGroup::direct_power(&self.group, n)?;
        let d = self.alg.dim();
        let m = self.group.order();
        let dn = alg.dim();
        let action = match &self.action {
            Action::Perm(p) => {
                let perms = (0..group.order())
                    .map(|t| {
                        let gs = crate::groups::tuple_from_index(t, m, n);
                        (0..dn)
                            .map(|b| {
                                let bs = crate::groups::tuple_from_index(b, d, n);
                                let img: Vec<usize> = gs.iter().zip(&bs).map(|(&g, &i)| p[g][i] as usize).collect();
                                crate::groups::tuple_to_index(&img, d) as u32
                            })
                            .collect()
                    })
                    .collect();
                Action::Perm(perms)
            }
            Action::Linear(mats) => {
                let ms = (0..group.order())
                    .map(|t| {
                        let gs = crate::groups::tuple_from_index(t, m, n);
                        gs[1..].iter().fold(mats[gs[0]].clone(), |acc, &g| acc.kron(&mats[g]))
                    })
                    .collect();
                Action::Linear(ms)
            }
        };
        Ok(ActedAlgebra { alg, group, action })
    }

    /// `A^Q`. For permutation actions the orbit sums form an echelon basis.
    pub fn fixed_points(&self, q: &Subgroup) -> Subspace {
        let f = self.alg.field();
        let d = self.alg.dim();
        match &self.action {
            Action::Perm(p) => {
                let mut seen = vec![false; d];
                let mut rows = Vec::new();
                let mut pivots = Vec::new();
                for i in 0..d {
                    if seen[i] {
                        continue;
                    }
                    let mut v = vec![0; d];
                    for &g in q.elements() {
                        let j = p[g as usize][i] as usize;
                        seen[j] = true;
                        v[j] = 1;
                    }
                    rows.push(v);
                    pivots.push(i);
                }
                Subspace::from_echelon(f, d, rows, pivots)
            }
            Action::Linear(m) => {
                let gens = generators_of(&self.group, q);
                crate::algebra::intersect_kernels(f, d, gens.iter().map(|&g| m[g as usize].sub(&Mat::identity(f, d))))
            }
        }
    }

    /// `tr_R^Q(x) = Σ_{g ∈ Q/R} g·x` for `x ∈ A^R`.
    pub fn relative_trace(&self, q: &Subgroup, r: &Subgroup, x: &[Elem]) -> Result<Vec<Elem>> {
        if !r.is_subset_of(q) {
            return Err(Error::NotSubgroup("R is not contained in Q".into()));
        }
        for &g in r.elements() {
            if self.act(g, x) != x {
                return Err(Error::NotFixed(format!("element moved by {}", self.group.label(g))));
            }
        }
        let f = self.alg.field();
        let mut out = vec![0; x.len()];
        for coset in self.group.left_cosets_within(q, r) {
            out = vec_ops::add(f, &out, &self.act(coset, x));
        }
        Ok(out)
    }

    /// `Σ_{R < Q maximal} tr_R^Q(A^R)`, in the coordinates of `A^Q`.
    pub fn trace_ideal(&self, q: &Subgroup, fixed: &Subspace) -> Result<Subspace> {
        let f = self.alg.field();
        let mut gens = Vec::new();
        for r in maximal_subgroups(&self.group, q) {
            for v in self.fixed_points(&r).basis() {
                let t = self.relative_trace(q, &r, v)?;
                gens.push(fixed.coords(&t).ok_or_else(|| Error::CheckFailed("trace is not Q-fixed".into()))?);
            }
        }
        Ok(Subspace::span(f, fixed.dim(), &gens))
    }

    /// The Brauer quotient with respect to a `p`-subgroup, `p = char k`.
    pub fn brauer_quotient(&self, q: &Subgroup) -> Result<BrauerQuotient> {
        let p = self.alg.field().p();
        if !FiniteGroup::is_p_group(q.order(), p) {
            return Err(Error::CharMismatch { field: p, required: smallest_prime(q.order()) });
        }
        let fixed = self.fixed_points(q);
        let (fixed_alg, _) = self.alg.subalgebra(&fixed)?;
        let trace = self.trace_ideal(q, &fixed)?;
        let (quotient, proj) = if trace.is_zero() {
            (fixed_alg.clone(), Mat::identity(self.alg.field(), fixed.dim()))
        } else if trace.is_full() {
            return Ok(BrauerQuotient { fixed, fixed_alg, trace, quotient: None, proj: None });
        } else {
            fixed_alg.quotient(&trace)?
        };
        Ok(BrauerQuotient { fixed, fixed_alg, trace, quotient: Some(quotient), proj: Some(proj) })
    }
}

/// `A^Q`, the trace ideal and `A(Q)` (absent when the quotient is zero).
#[derive(Debug, Clone)]
pub struct BrauerQuotient {
    pub fixed: Subspace,
    pub fixed_alg: StructAlgebra,
    /// In the coordinates of `fixed`.
    pub trace: Subspace,
    pub quotient: Option<StructAlgebra>,
    /// `fixed` coordinates to `quotient` coordinates.
    pub proj: Option<Mat>,
}

impl BrauerQuotient {
    pub fn dim(&self) -> usize {
        self.quotient.as_ref().map_or(0, |q| q.dim())
    }

    /// `Br_Q(x)` for `x ∈ A^Q` in `A` coordinates.
    pub fn br(&self, x: &[Elem]) -> Result<Vec<Elem>> {
        let c = self.fixed.coords(x).ok_or_else(|| Error::NotFixed("element is not Q-fixed".into()))?;
        Ok(self.proj.as_ref().map_or(Vec::new(), |p| p.apply(&c)))
    }

    /// Canonical lift of a quotient basis element to `A^Q`, in `A` coordinates.
    pub fn lift(&self, i: usize) -> Vec<Elem> {
        let reps = self.trace.complement_indices();
        self.fixed.basis()[reps[i]].clone()
    }
}

fn smallest_prime(n: usize) -> u32 {
    (2..=n.max(2)).find(|&d| n.is_multiple_of(d)).unwrap_or(1) as u32
}

fn generators_of(g: &FiniteGroup, s: &Subgroup) -> Vec<u32> {
    let mut gens = Vec::new();
    let mut span = g.trivial_subgroup();
    for &x in s.elements() {
        if !span.contains(x) {
            gens.push(x);
            span = g.generated(&gens);
        }
    }
    gens
}

/// Maximal subgroups of a `p`-group `Q ≤ G` (those of index `p`).
pub fn maximal_subgroups(g: &FiniteGroup, q: &Subgroup) -> Vec<Subgroup> {
    if q.order() == 1 {
        return Vec::new();
    }
    let mut found: BTreeSet<Subgroup> = q.elements().iter().map(|&x| g.generated(&[x])).collect();
    loop {
        let cur: Vec<Subgroup> = found.iter().cloned().collect();
        let mut added = false;
        for a in &cur {
            for b in &cur {
                let mut gens = a.elements().to_vec();
                gens.extend_from_slice(b.elements());
                let h = g.generated(&gens);
                if h.order() < q.order() && found.insert(h) {
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    let top = found.iter().map(|h| h.order()).filter(|&o| o < q.order()).max().unwrap_or(1);
    found.into_iter().filter(|h| h.order() == top).collect()
}

/// `Br_Q` on a central or `Q`-fixed element of `kG`: restriction of
/// coefficients to `C_G(Q)`.
pub fn brauer_on_group_algebra(g: &FiniteGroup, q: &Subgroup, x: &[Elem]) -> Result<Vec<Elem>> {
    for &s in q.elements() {
        for h in g.elements() {
            if x[h as usize] != x[g.conj(s, h) as usize] {
                return Err(Error::NotFixed("element is not Q-fixed".into()));
            }
        }
    }
    let c = g.centralizer(q);
    Ok((0..g.order() as u32).map(|h| if c.contains(h) { x[h as usize] } else { 0 }).collect())
}

/// Checks the identification `kG(Q) ≅ kC_G(Q)` induced by restricting
/// coefficients. Returns the isomorphism matrix.
pub fn brauer_map_on_group_algebra(g: &FiniteGroup, kg: &StructAlgebra, q: &Subgroup) -> Result<Mat> {
    let acted = ActedAlgebra::group_algebra_conjugation(g, kg.clone())?;
    let bq = acted.brauer_quotient(q)?;
    let f = kg.field();
    let c = g.centralizer(q);
    let celems = c.elements().to_vec();
    let k = bq.dim();
    if k != celems.len() {
        return Err(Error::CheckFailed(format!("dim A(Q) = {k} but |C_G(Q)| = {}", celems.len())));
    }
    let mut map = Mat::zeros(f, k, k);
    for i in 0..k {
        let v = brauer_on_group_algebra(g, q, &bq.lift(i))?;
        for (r, &h) in celems.iter().enumerate() {
            map.set(r, i, v[h as usize]);
        }
    }
    if !map.is_invertible() {
        return Err(Error::CheckFailed("restriction is not bijective on A(Q)".into()));
    }
    let quot = bq.quotient.as_ref().expect("nonzero");
    let pos = |h: u32| celems.binary_search(&h).unwrap();
    for i in 0..k {
        for j in 0..k {
            let lhs = map.apply(&quot.mul_basis(i, j));
            let (x, y) = (map.col(i), map.col(j));
            let mut rhs = vec![0; k];
            for (a, &xa) in x.iter().enumerate() {
                for (b, &yb) in y.iter().enumerate() {
                    if xa != 0 && yb != 0 {
                        let t = pos(g.mul(celems[a], celems[b]));
                        rhs[t] = f.add(rhs[t], f.mul(xa, yb));
                    }
                }
            }
            if lhs != rhs {
                return Err(Error::CheckFailed("restriction is not multiplicative on A(Q)".into()));
            }
        }
    }
    Ok(map)
}

/// Defect group of a block idempotent of `kG`: the first largest class of
/// `p`-subgroups `P` with `Br_P(e) ≠ 0`.
pub fn defect_group(g: &FiniteGroup, e: &[Elem], p: u32) -> Result<Subgroup> {
    let classes = g.p_subgroups_up_to_conjugacy(p);
    for pp in classes.iter().rev() {
        if !vec_ops::is_zero(&brauer_on_group_algebra(g, pp, e)?) {
            return Ok(pp.clone());
        }
    }
    Err(Error::CheckFailed("no p-subgroup detects the block".into()))
}

/// Embedding of a subgroup given as its own group: `index[h]` in `G`.
#[derive(Debug, Clone)]
pub struct Inclusion {
    pub index: Vec<u32>,
}

impl Inclusion {
    /// Matches permutation groups on the same points.
    pub fn by_permutations(sub: &FiniteGroup, g: &FiniteGroup) -> Result<Inclusion> {
        let perms = sub.perms().ok_or_else(|| Error::BadParams("subgroup has no permutations".into()))?;
        let index = perms
            .iter()
            .map(|p| g.find_perm(p).ok_or_else(|| Error::NotSubgroup("permutation not in G".into())))
            .collect::<Result<Vec<u32>>>()?;
        Ok(Inclusion { index })
    }

    /// A subgroup as a group in its own right, with its sorted elements as
    /// indices.
    pub fn of_subgroup(g: &FiniteGroup, s: &Subgroup) -> Result<(FiniteGroup, Inclusion)> {
        let el = s.elements();
        let pos = |x: u32| el.binary_search(&x).expect("subgroup is closed") as u32;
        let table: Vec<Vec<u32>> = el.iter().map(|&a| el.iter().map(|&b| pos(g.mul(a, b))).collect()).collect();
        let labels = el.iter().map(|&x| g.label(x).to_string()).collect();
        let sub = match g.perms() {
            Some(p) => FiniteGroup::from_perm_list(el.iter().map(|&x| p[x as usize].clone()).collect())?,
            None => FiniteGroup::from_table(table, labels)?,
        };
        let index = match g.perms() {
            Some(_) => Inclusion::by_permutations(&sub, g)?.index,
            None => el.to_vec(),
        };
        Ok((sub, Inclusion { index }))
    }

    pub fn identity(n: usize) -> Inclusion {
        Inclusion { index: (0..n as u32).collect() }
    }

    pub fn image(&self, g: &FiniteGroup) -> Result<Subgroup> {
        g.subgroup(&self.index)
    }

    /// Preimage of an element, if it lies in the subgroup.
    pub fn preimage(&self, x: u32) -> Option<u32> {
        self.index.iter().position(|&y| y == x).map(|i| i as u32)
    }

    /// `G^n`-level inclusion for wreath products: `((h_i), σ) -> ((ι h_i), σ)`.
    pub fn wreath(&self, sub_order: usize, g_order: usize, n: usize) -> Inclusion {
        let nf = crate::groups::factorial(n);
        let total = sub_order.pow(n as u32) * nf;
        let index = (0..total)
            .map(|x| {
                let (t, s) = (x / nf, x % nf);
                let hs = crate::groups::tuple_from_index(t, sub_order, n);
                let gs: Vec<usize> = hs.iter().map(|&h| self.index[h] as usize).collect();
                (crate::groups::tuple_to_index(&gs, g_order) * nf + s) as u32
            })
            .collect();
        Inclusion { index }
    }
}

/// A matched pair of blocks with their defect groups.
#[derive(Debug, Clone, Serialize)]
pub struct HkPair {
    pub block: usize,
    pub correspondent: usize,
    pub defect_order: usize,
    pub defect_preserved: bool,
}

/// Blocks of `A = b·kG` (central primitive idempotents of `kG` below `b`),
/// in the group basis.
pub fn blocks_of_extension(ext: &BlockExtension) -> Result<Vec<Vec<Elem>>> {
    let cb = group_algebra_blocks(&ext.group, &ext.kg)?;
    let b = &ext.idempotent;
    Ok(cb.blocks.into_iter().map(|blk| blk.idempotent).filter(|e| ext.kg.mul(e, b) == *e).collect())
}

/// Harris–Knörr pairing between blocks of `b·kG` and of `b'·kG'`,
/// `G' = N_G(Q)`: `β ↔ β'` when `Br_Q(e_β) e_{β'} ≠ 0`.
pub fn harris_knorr(
    ext: &BlockExtension,
    ext2: &BlockExtension,
    incl: &Inclusion,
    q: &Subgroup,
) -> Result<Vec<HkPair>> {
    let g = &ext.group;
    let p = ext.field().p();
    let (nq, _) = g.normalizer_centralizer(q)?;
    if incl.image(g)? != nq {
        return Err(Error::SetupMismatch("G' is not N_G(Q)".into()));
    }
    let blocks = blocks_of_extension(ext)?;
    let blocks2 = blocks_of_extension(ext2)?;
    let mut pairs = Vec::new();
    let mut used = vec![false; blocks2.len()];
    for (i, e) in blocks.iter().enumerate() {
        let br = brauer_on_group_algebra(g, q, e)?;
        let mut local = vec![0; ext2.group.order()];
        for (h, &x) in incl.index.iter().enumerate() {
            local[h] = br[x as usize];
        }
        let hits: Vec<usize> = blocks2
            .iter()
            .enumerate()
            .filter(|(_, e2)| !vec_ops::is_zero(&ext2.kg.mul(&local, e2)))
            .map(|(j, _)| j)
            .collect();
        if hits.len() != 1 || used[hits[0]] {
            return Err(Error::BrauerCorrespondentNotUnique(format!("block {i} meets {} blocks", hits.len())));
        }
        used[hits[0]] = true;
        let d = defect_group(g, e, p)?;
        let d2 = defect_group(&ext2.group, &blocks2[hits[0]], p)?;
        let d2_in_g = g.subgroup(&d2.elements().iter().map(|&h| incl.index[h as usize]).collect::<Vec<_>>())?;
        let preserved = d.order() == d2.order() && g.is_subconjugate(&d2_in_g, &d);
        pairs.push(HkPair { block: i, correspondent: hits[0], defect_order: d.order(), defect_preserved: preserved });
    }
    if used.iter().any(|u| !u) {
        return Err(Error::BrauerCorrespondentNotUnique("pairing is not onto".into()));
    }
    Ok(pairs)
}

/// Dade's map `C_A(B) -> C_{A'}(B')`, `c ↦ Br_Q(c)·b'`, on `C̄`, as a matrix
/// between the `C̄` bases of both sides.
pub fn dade_map(
    ext: &BlockExtension,
    cbar: &crate::graded::CBar,
    ext2: &BlockExtension,
    cbar2: &crate::graded::CBar,
    incl: &Inclusion,
    q: &Subgroup,
) -> Result<Mat> {
    let f = ext.field();
    let k = cbar.quotient.dim();
    let k2 = cbar2.quotient.dim();
    let mut m = Mat::zeros(f, k2, k);
    for i in 0..k {
        let img = dade_element(ext, ext2, incl, q, &cbar.lift(i))?;
        let col = cbar2.class_of(&img)?;
        for (r, &c) in col.iter().enumerate() {
            m.set(r, i, c);
        }
    }
    Ok(m)
}

/// `Br_Q(c)·b'` for `c ∈ C_A(B)` in `A` coordinates, returned in `A'`
/// coordinates.
pub fn dade_element(
    ext: &BlockExtension,
    ext2: &BlockExtension,
    incl: &Inclusion,
    q: &Subgroup,
    c: &[Elem],
) -> Result<Vec<Elem>> {
    let amb = ext.to_ambient(c);
    let br = brauer_on_group_algebra(&ext.group, q, &amb)?;
    let mut local = vec![0; ext2.group.order()];
    for (h, &x) in incl.index.iter().enumerate() {
        local[h] = br[x as usize];
    }
    if (0..br.len()).any(|x| br[x] != 0 && incl.preimage(x as u32).is_none()) {
        return Err(Error::SetupMismatch("C_G(Q) is not inside G'".into()));
    }
    let v = ext2.kg.mul(&local, &ext2.idempotent);
    ext2.from_ambient(&v).ok_or_else(|| Error::CheckFailed("Dade image leaves b'·kG'".into()))
}

/// Outcome of the tensor-power Brauer diagram check.
#[derive(Debug, Clone, Serialize)]
pub struct BrauerDiagram {
    pub dim_fixed_power: usize,
    pub dim_quotient_power: usize,
    pub top_iso: bool,
    pub bottom_iso: bool,
    pub bottom_multiplicative: bool,
    pub commutes: bool,
}

impl BrauerDiagram {
    pub fn ok(&self) -> bool {
        self.top_iso && self.bottom_iso && self.bottom_multiplicative && self.commutes
    }
}

/// The square `(A^Q)^{⊗n} -> (A^{⊗n})^{Q^n}` over `A(Q)^{⊗n} -> A^{⊗n}(Q^n)`
/// with vertical Brauer maps.
pub fn tensor_brauer_diagram_check(a: &ActedAlgebra, q: &Subgroup, n: usize) -> Result<BrauerDiagram> {
    let f = a.alg.field().clone();
    let bq = a.brauer_quotient(q)?;
    let an = a.tensor_power(n)?;
    let m = a.group.order();
    let qn_elems: Vec<u32> = (0..m.pow(n as u32))
        .filter(|&t| crate::groups::tuple_from_index(t, m, n).iter().all(|&g| q.contains(g as u32)))
        .map(|t| t as u32)
        .collect();
    let qn = an.group.subgroup(&qn_elems)?;
    let bqn = an.brauer_quotient(&qn)?;

    // Top map on kron bases of A^Q.
    let fixed_basis = bq.fixed.basis();
    let tuples = fixed_basis.len().pow(n as u32);
    let kron_of = |idx: &[usize], vecs: &[Vec<Elem>]| -> Vec<Elem> {
        idx[1..].iter().fold(vecs[idx[0]].clone(), |acc, &i| kron_vec(&f, &acc, &vecs[i]))
    };
    let mut top = Mat::zeros(&f, bqn.fixed.dim(), tuples);
    for t in 0..tuples {
        let idx = crate::groups::tuple_from_index(t, fixed_basis.len(), n);
        let v = kron_of(&idx, fixed_basis);
        let c = bqn.fixed.coords(&v).ok_or_else(|| Error::CheckFailed("tensor of fixed points not fixed".into()))?;
        for (r, &x) in c.iter().enumerate() {
            top.set(r, t, x);
        }
    }
    let top_iso = top.rows() == top.cols() && top.is_invertible();

    let (p1, pn) = match (&bq.proj, &bqn.proj) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => {
            let both_zero = bq.dim() == 0 && bqn.dim() == 0;
            return Ok(BrauerDiagram {
                dim_fixed_power: tuples,
                dim_quotient_power: 0,
                top_iso,
                bottom_iso: both_zero,
                bottom_multiplicative: both_zero,
                commutes: both_zero,
            });
        }
    };
    let pn_top = pn.mul(&top);
    let br_power = (1..n).fold(p1.clone(), |acc, _| acc.kron(&p1));
    // Bottom map on canonical lifts.
    let k = bq.dim();
    let reps = bq.trace.complement_indices();
    let kn = k.pow(n as u32);
    let mut bottom = Mat::zeros(&f, bqn.dim(), kn);
    for t in 0..kn {
        let idx = crate::groups::tuple_from_index(t, k, n);
        let lifted: Vec<usize> = idx.iter().map(|&i| reps[i]).collect();
        let col = pn_top.col(crate::groups::tuple_to_index(&lifted, fixed_basis.len()));
        for (r, &x) in col.iter().enumerate() {
            bottom.set(r, t, x);
        }
    }
    let commutes = bottom.mul(&br_power) == pn_top;
    let bottom_iso = bottom.rows() == bottom.cols() && bottom.is_invertible();
    let quot = bq.quotient.as_ref().unwrap().tensor_power(n)?;
    let quot_n = bqn.quotient.as_ref().unwrap();
    let mut mult = true;
    'outer: for i in 0..kn {
        for j in 0..kn {
            if bottom.apply(&quot.mul_basis(i, j)) != quot_n.mul(&bottom.col(i), &bottom.col(j)) {
                mult = false;
                break 'outer;
            }
        }
    }
    Ok(BrauerDiagram {
        dim_fixed_power: tuples,
        dim_quotient_power: kn,
        top_iso,
        bottom_iso,
        bottom_multiplicative: mult,
        commutes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::group_algebra;
    use crate::field::Fq;

    fn s3_c3() -> (FiniteGroup, Subgroup) {
        let g = FiniteGroup::symmetric(3).unwrap();
        let c = g.find_perm(&[1, 2, 0]).unwrap();
        let q = g.generated(&[c]);
        (g, q)
    }

    #[test]
    fn fixed_points_and_quotient_of_ks3() {
        let (g, q) = s3_c3();
        let f = Fq::new(3, 1).unwrap();
        let a = ActedAlgebra::group_algebra_conjugation(&g, group_algebra(&g, &f).unwrap()).unwrap();
        let fixed = a.fixed_points(&q);
        assert_eq!(fixed.dim(), 4);
        let bq = a.brauer_quotient(&q).unwrap();
        assert_eq!(bq.dim(), 3);
        assert!(brauer_map_on_group_algebra(&g, &a.alg, &q).is_ok());
    }

    #[test]
    fn linear_and_permutation_actions_agree() {
        let (g, q) = s3_c3();
        let f = Fq::new(3, 1).unwrap();
        let kg = group_algebra(&g, &f).unwrap();
        let perm = ActedAlgebra::group_algebra_conjugation(&g, kg.clone()).unwrap();
        let mats = g
            .elements()
            .map(|x| {
                let cols: Vec<Vec<Elem>> = (0..6).map(|i| perm.act(x, &vec_ops::unit(6, i))).collect();
                Mat::from_cols(&f, 6, &cols)
            })
            .collect();
        let lin = ActedAlgebra::new(kg, g.clone(), Action::Linear(mats)).unwrap();
        assert_eq!(lin.fixed_points(&q), perm.fixed_points(&q));
        assert_eq!(lin.brauer_quotient(&q).unwrap().dim(), 3);
    }

    #[test]
    fn relative_trace_rejects_unfixed() {
        let (g, q) = s3_c3();
        let f = Fq::new(3, 1).unwrap();
        let a = ActedAlgebra::group_algebra_conjugation(&g, group_algebra(&g, &f).unwrap()).unwrap();
        let t = g.find_perm(&[1, 0, 2]).unwrap();
        let one = g.trivial_subgroup();
        let x = vec_ops::unit(6, t as usize);
        let tr = a.relative_trace(&q, &one, &x).unwrap();
        assert_eq!(tr.iter().filter(|&&c| c != 0).count(), 3);
        assert!(matches!(a.relative_trace(&q, &q, &x), Err(Error::NotFixed(_))));
    }

    #[test]
    fn wrong_characteristic() {
        let (g, q) = s3_c3();
        let f = Fq::new(2, 1).unwrap();
        let a = ActedAlgebra::group_algebra_conjugation(&g, group_algebra(&g, &f).unwrap()).unwrap();
        assert!(matches!(a.brauer_quotient(&q), Err(Error::CharMismatch { .. })));
    }

    #[test]
    fn diagram_for_ks3() {
        let (g, q) = s3_c3();
        let f = Fq::new(3, 1).unwrap();
        let a = ActedAlgebra::group_algebra_conjugation(&g, group_algebra(&g, &f).unwrap()).unwrap();
        let d = tensor_brauer_diagram_check(&a, &q, 2).unwrap();
        assert!(d.ok(), "{d:?}");
        assert_eq!(d.dim_quotient_power, 9);
    }

    #[test]
    fn defect_groups_of_s4_mod_3() {
        let g = FiniteGroup::symmetric(4).unwrap();
        let f = Fq::new(3, 1).unwrap();
        let kg = group_algebra(&g, &f).unwrap();
        let cb = group_algebra_blocks(&g, &kg).unwrap();
        let orders: Vec<usize> =
            cb.blocks.iter().map(|b| defect_group(&g, &b.idempotent, 3).unwrap().order()).collect();
        let mut sorted = orders.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 1, 3]);
    }

    #[test]
    fn maximal_subgroups_of_v4() {
        let g = FiniteGroup::symmetric(4).unwrap();
        let a = g.find_perm(&[1, 0, 3, 2]).unwrap();
        let b = g.find_perm(&[2, 3, 0, 1]).unwrap();
        let v = g.generated(&[a, b]);
        assert_eq!(maximal_subgroups(&g, &v).len(), 3);
        assert!(maximal_subgroups(&g, &g.trivial_subgroup()).is_empty());
    }
}
