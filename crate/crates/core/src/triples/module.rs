use std::collections::VecDeque;

use crate::algebra::{blocks::class_algebra, intersect_kernels, StructAlgebra};
use crate::brauer::Inclusion;
use crate::error::{Error, Result};
use crate::field::{Elem, Fq};
use crate::graded::{BlockExtension, GradedAlgebra, Grading};
use crate::groups::FiniteGroup;
use crate::linalg::{solve_vec, vec_ops, Mat};

use super::reduction::Reduction;

/// A module triple `(A, B, V)`: `A = b·kG` graded by `Ḡ = G/N`, and a
/// `G`-invariant absolutely simple `ℓN`-module `V` lying over `b`.
#[derive(Debug, Clone)]
pub struct ModuleTriple {
    pub ext: BlockExtension,
    pub n_group: FiniteGroup,
    pub n_incl: Inclusion,
    pub red: Reduction,
    /// `ρ_V(n)` for every element of `n_group`.
    pub v: Vec<Mat>,
    /// For each `ḡ`, with coset representative `g`, a matrix `T` with
    /// `T ρ(n) = ρ(g n g⁻¹) T`.
    pub twists: Vec<Mat>,
}

impl ModuleTriple {
    pub fn ell(&self) -> &Fq {
        &self.red.ell
    }

    pub fn v_dim(&self) -> usize {
        self.v[0].rows()
    }

    pub fn gbar(&self) -> &FiniteGroup {
        &self.ext.gbar
    }

    /// `ρ_V` at an element of `G` lying in `N`.
    pub fn rho(&self, g: u32) -> &Mat {
        let i = self.n_incl.preimage(g).expect("element of N");
        &self.v[i as usize]
    }

    pub fn ind_dim(&self) -> usize {
        self.gbar().order() * self.v_dim()
    }

    /// Action of `g ∈ G` on `ℓG ⊗_{ℓN} V = ⊕_ḡ t_ḡ ⊗ V`.
    pub fn ind_action(&self, g: u32) -> Mat {
        let grp = &self.ext.group;
        let d = self.v_dim();
        let mut m = Mat::zeros(self.ell(), self.ind_dim(), self.ind_dim());
        for (s, &t) in self.ext.coset_reps.iter().enumerate() {
            let gt = grp.mul(g, t);
            let s2 = self.ext.proj.apply(gt) as usize;
            let n = grp.mul(grp.inv(self.ext.coset_reps[s2]), gt);
            m.set_block(s2 * d, s * d, self.rho(n));
        }
        m
    }

    /// Right multiplication `x ⊗ v ↦ x c ⊗ v` by `c ∈ C_G(N)`.
    pub fn right_mult(&self, c: u32) -> Mat {
        let grp = &self.ext.group;
        let d = self.v_dim();
        let mut m = Mat::zeros(self.ell(), self.ind_dim(), self.ind_dim());
        for (s, &t) in self.ext.coset_reps.iter().enumerate() {
            let tc = grp.mul(t, c);
            let s2 = self.ext.proj.apply(tc) as usize;
            let n = grp.mul(grp.inv(self.ext.coset_reps[s2]), tc);
            m.set_block(s2 * d, s * d, self.rho(n));
        }
        m
    }
}

/// Extends generator images to a representation of `N` and checks the
/// homomorphism property on all pairs.
fn extend_rep(n: &FiniteGroup, ell: &Fq, dim: usize, gens: &[(u32, Mat)]) -> Result<Vec<Mat>> {
    let mut rho: Vec<Option<Mat>> = vec![None; n.order()];
    rho[n.identity() as usize] = Some(Mat::identity(ell, dim));
    let mut queue = VecDeque::from([n.identity()]);
    while let Some(x) = queue.pop_front() {
        for (g, m) in gens {
            let y = n.mul(x, *g);
            if rho[y as usize].is_none() {
                rho[y as usize] = Some(rho[x as usize].as_ref().unwrap().mul(m));
                queue.push_back(y);
            }
        }
    }
    let rho: Vec<Mat> = rho
        .into_iter()
        .map(|m| m.ok_or_else(|| Error::BadParams("generator images do not generate N".into())))
        .collect::<Result<_>>()?;
    for x in n.elements() {
        for y in n.elements() {
            if rho[n.mul(x, y) as usize] != rho[x as usize].mul(&rho[y as usize]) {
                return Err(Error::CheckFailed("generator images do not define a representation".into()));
            }
        }
    }
    Ok(rho)
}

/// Linear maps `T` with `T a_i = b_i T` for all `i`.
pub(crate) fn intertwiners(f: &Fq, r: usize, c: usize, a: &[&Mat], b: &[&Mat]) -> Vec<Mat> {
    let cons = a.iter().zip(b).map(|(x, y)| {
        // vec(T x - y T) with T row-major
        let mut m = Mat::zeros(f, r * c, r * c);
        for i in 0..r {
            for j in 0..c {
                let row = i * c + j;
                for k in 0..c {
                    let v = x.get(k, j);
                    if v != 0 {
                        m.set(row, i * c + k, f.add(m.get(row, i * c + k), v));
                    }
                }
                for k in 0..r {
                    let v = y.get(i, k);
                    if v != 0 {
                        m.set(row, k * c + j, f.sub(m.get(row, k * c + j), v));
                    }
                }
            }
        }
        m
    });
    intersect_kernels(f, r * c, cons).basis().iter().map(|v| Mat::from_vec(f, r, c, v.clone())).collect()
}

/// Scalar by which each class sum of `N` acts on the block `b`, through
/// the class algebra of `N` over `k`.
pub(crate) fn block_central_character(
    grp: &FiniteGroup,
    k: &Fq,
    idem_in_group: &[Elem],
) -> Result<(Vec<Vec<u32>>, Vec<Elem>)> {
    let (z, classes) = class_algebra(grp, k)?;
    let e: Vec<Elem> = classes.iter().map(|c| idem_in_group[c[0] as usize]).collect();
    if z.mul(&e, &e) != e || vec_ops::is_zero(&e) {
        return Err(Error::BadParams("idempotent is not a central idempotent".into()));
    }
    let mut lam = Vec::with_capacity(classes.len());
    for i in 0..classes.len() {
        let ce = z.mul(&vec_ops::unit(classes.len(), i), &e);
        let l = k
            .elements()
            .find(|&l| z.is_nilpotent(&vec_ops::sub(k, &ce, &vec_ops::scale(k, &e, l))))
            .ok_or_else(|| Error::BadParams("idempotent is not primitive in the center".into()))?;
        lam.push(l);
    }
    Ok((classes, lam))
}

/// Reduced central character of a module given by `action(g)` for `g` in
/// `grp`, on the classes listed.
pub(crate) fn module_central_character(
    red: &Reduction,
    classes: &[Vec<u32>],
    dim: usize,
    action: impl Fn(u32) -> Mat,
) -> Result<Vec<Elem>> {
    classes
        .iter()
        .map(|c| {
            let mults = red.eigen_multiplicities(&action(c[0]))?;
            red.central_character(&mults, c.len(), dim)
        })
        .collect()
}

/// Builds and certifies a module triple. `v_gens` gives `ρ_V` on
/// generators of `N` (as elements of `G`).
pub fn build_triple(ext: BlockExtension, red: &Reduction, v_gens: &[(u32, Mat)]) -> Result<ModuleTriple> {
    let grp = &ext.group;
    let ell = &red.ell;
    if grp.order().is_multiple_of(ell.p() as usize) {
        return Err(Error::CharNotCoprime(ell.p(), grp.order()));
    }
    if red.k.q() != ext.field().q() {
        return Err(Error::SetupMismatch("reduction and block extension use different k".into()));
    }
    if !(red.e as u64).is_multiple_of(grp.exponent()) {
        return Err(Error::BadParams(format!("e = {} is not a multiple of exp(G) = {}", red.e, grp.exponent())));
    }
    let (n_group, n_incl) = Inclusion::of_subgroup(grp, &ext.normal)?;
    let dim = v_gens.first().map(|(_, m)| m.rows()).unwrap_or(1);
    let local: Vec<(u32, Mat)> = v_gens
        .iter()
        .map(|(g, m)| {
            n_incl.preimage(*g).map(|x| (x, m.clone())).ok_or_else(|| Error::BadParams("generator outside N".into()))
        })
        .collect::<Result<_>>()?;
    let v = extend_rep(&n_group, ell, dim, &local)?;
    let gens = n_group.generating_set();
    let gm: Vec<&Mat> = gens.iter().map(|&g| &v[g as usize]).collect();
    let ends = intertwiners(ell, dim, dim, &gm, &gm);
    if ends.len() != 1 {
        return Err(Error::NotSimple(format!("End_ℓN(V) has dimension {}", ends.len())));
    }
    let mut twists = Vec::with_capacity(ext.coset_reps.len());
    for &t in &ext.coset_reps {
        let conj: Vec<Mat> = gens
            .iter()
            .map(|&n| v[n_incl.preimage(grp.conj(t, n_incl.index[n as usize])).unwrap() as usize].clone())
            .collect();
        let cm: Vec<&Mat> = conj.iter().collect();
        let sol = intertwiners(ell, dim, dim, &gm, &cm);
        let tw = sol
            .into_iter()
            .next()
            .ok_or_else(|| Error::NotInvariant(format!("V is not stable under {}", grp.label(t))))?;
        twists.push(tw);
    }
    let (classes, lam) = block_central_character(&n_group, &red.k, &restrict_to(&ext.idempotent, &n_incl))?;
    let omega = module_central_character(red, &classes, dim, |x| v[x as usize].clone())?;
    if omega != lam {
        return Err(Error::SetupMismatch("V does not lie in the block b under this reduction".into()));
    }
    Ok(ModuleTriple { ext, n_group, n_incl, red: red.clone(), v, twists })
}

pub(crate) fn restrict_to(x: &[Elem], incl: &Inclusion) -> Vec<Elem> {
    incl.index.iter().map(|&g| x[g as usize]).collect()
}

/// `E(V) = End_{ℓG}(ℓG ⊗_{ℓN} V)^op`, graded by `Ḡ`, with `ℓC_G(N)`
/// mapped in by right multiplication.
#[derive(Debug, Clone)]
pub struct EndoAlgebra {
    pub alg: GradedAlgebra,
    /// Endomorphism matrices of the induced module, one per basis vector.
    pub mats: Vec<Mat>,
    /// Elements of `C_G(N)`, sorted.
    pub centralizer: Vec<u32>,
    /// `ℓC_G(N) -> E(V)`, columns indexed like `centralizer`.
    pub cmap: Mat,
    cols: Mat,
    v_dim: usize,
    id_block: usize,
}

impl EndoAlgebra {
    /// Coordinates of a `G`-endomorphism of the induced module.
    pub fn coords(&self, x: &Mat) -> Option<Vec<Elem>> {
        let key = block_column(x, self.id_block, self.v_dim);
        let c = solve_vec(&self.cols, &key)?;
        let f = x.field();
        let back = Mat::combination(f, x.rows(), x.cols(), &c, &self.mats);
        (back == *x).then_some(c)
    }

    pub fn matrix(&self, c: &[Elem]) -> Mat {
        let m = &self.mats[0];
        Mat::combination(m.field(), m.rows(), m.cols(), c, &self.mats)
    }

    pub fn dim(&self) -> usize {
        self.mats.len()
    }
}

fn block_column(x: &Mat, block: usize, d: usize) -> Vec<Elem> {
    let mut out = Vec::with_capacity(x.rows() * d);
    for c in block * d..(block + 1) * d {
        out.extend(x.col(c));
    }
    out
}

pub fn endo_algebra(t: &ModuleTriple) -> Result<EndoAlgebra> {
    let ell = t.ell().clone();
    let grp = &t.ext.group;
    let dd = t.ind_dim();
    let d = t.v_dim();
    let gens = grp.generating_set();
    let acts: Vec<Mat> = gens.iter().map(|&g| t.ind_action(g)).collect();
    let refs: Vec<&Mat> = acts.iter().collect();
    let all = intertwiners(&ell, dd, dd, &refs, &refs);
    let id_block = t.gbar().identity() as usize;
    let gbar = t.gbar();
    let mut mats: Vec<Mat> = Vec::new();
    let mut degrees = Vec::new();
    let flat: Vec<Vec<Elem>> = all.iter().map(|m| m.data().to_vec()).collect();
    for g in gbar.elements() {
        // vanish outside the g-block of the identity block column
        let cons = (0..gbar.order()).filter(|&r| r != g as usize).map(|r| {
            let mut m = Mat::zeros(&ell, d * d, all.len());
            for (k, x) in all.iter().enumerate() {
                for i in 0..d {
                    for j in 0..d {
                        m.set(i * d + j, k, x.get(r * d + i, id_block * d + j));
                    }
                }
            }
            m
        });
        let sol = intersect_kernels(&ell, all.len(), cons);
        for c in sol.basis() {
            mats.push(Mat::from_vec(&ell, dd, dd, vec_ops::combine(&ell, dd * dd, c, &flat)));
            degrees.push(g);
        }
    }
    if mats.len() != all.len() {
        return Err(Error::CheckFailed("endomorphisms do not split into graded components".into()));
    }
    let cols = Mat::from_cols(&ell, dd * d, &mats.iter().map(|m| block_column(m, id_block, d)).collect::<Vec<_>>());
    let n = mats.len();
    let mut e = EndoAlgebra {
        alg: GradedAlgebra::new(StructAlgebra::scalars(&ell)?, Grading::trivial(gbar.clone(), 1))?,
        mats,
        centralizer: Vec::new(),
        cmap: Mat::zeros(&ell, 0, 0),
        cols,
        v_dim: d,
        id_block,
    };
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            // (φ_i · φ_j)^op = φ_j ∘ φ_i
            let prod = e.mats[j].mul(&e.mats[i]);
            let c = e.coords(&prod).ok_or_else(|| Error::CheckFailed("E(V) is not closed".into()))?;
            table.push(c);
        }
    }
    let unit = e.coords(&Mat::identity(&ell, dd)).ok_or_else(|| Error::CheckFailed("identity not in E(V)".into()))?;
    let labels = (0..n).map(|i| format!("φ{i}[{}]", gbar.label(degrees[i]))).collect();
    let alg = StructAlgebra::from_fn(
        &ell,
        n,
        |i, j| table[i * n + j].iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k as u32, c)).collect(),
        unit,
        labels,
        None,
    )?;
    e.alg = GradedAlgebra::new(alg, Grading::new(gbar.clone(), degrees)?)?;
    e.alg.crossed_product_units(0)?;
    let nsub = &t.ext.normal;
    let cent: Vec<u32> =
        grp.elements().filter(|&c| nsub.elements().iter().all(|&x| grp.mul(c, x) == grp.mul(x, c))).collect();
    let mut cols = Vec::with_capacity(cent.len());
    for &c in &cent {
        let r = t.right_mult(c);
        let v = e
            .coords(&r)
            .ok_or_else(|| Error::CheckFailed(format!("right multiplication by {} is not in E(V)", grp.label(c))))?;
        let deg = t.ext.proj.apply(c);
        if e.alg.grading.degree(&v) != Some(deg) {
            return Err(Error::NotGraded(format!("image of {} has the wrong degree", grp.label(c))));
        }
        cols.push(v);
    }
    e.cmap = Mat::from_cols(&ell, n, &cols);
    for (i, &c) in cent.iter().enumerate() {
        for (j, &c2) in cent.iter().enumerate() {
            let k = cent.binary_search(&grp.mul(c, c2)).expect("C_G(N) is a subgroup");
            if e.alg.alg.mul(&cols[i], &cols[j]) != cols[k] {
                return Err(Error::CheckFailed("ℓC_G(N) -> E(V) is not multiplicative".into()));
            }
        }
    }
    e.centralizer = cent;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{blocks::group_algebra_blocks, blocks::principal_block_index, group_algebra, subset_sum};

    fn s3_a3() -> (FiniteGroup, u32) {
        let g = FiniteGroup::symmetric(3).unwrap();
        let c = g.find_perm(&[1, 2, 0]).unwrap();
        (g, c)
    }

    fn red(ell: u32, k: &Fq, e: u32) -> Reduction {
        Reduction::candidates(&Fq::prime(ell).unwrap(), k, e).unwrap().remove(0)
    }

    fn principal_a3(k: &Fq) -> (BlockExtension, u32) {
        let (g, c) = s3_a3();
        let n = g.generated(&[c]);
        (BlockExtension::from_quotient(&g, &n, k, subset_sum(6, n.elements())).unwrap(), c)
    }

    #[test]
    fn trivial_module_of_a3_is_invariant() {
        let k = Fq::new(2, 2).unwrap();
        let (ext, c) = principal_a3(&k);
        let r = red(7, &k, 6);
        let t = build_triple(ext, &r, &[(c, Mat::identity(&r.ell, 1))]).unwrap();
        assert_eq!(t.ind_dim(), 2);
        let e = endo_algebra(&t).unwrap();
        assert_eq!(e.dim(), 2);
        assert_eq!(e.centralizer.len(), 3);
        assert!(e.alg.crossed_product_units(0).is_ok());
    }

    #[test]
    fn nontrivial_character_of_a3_is_not_invariant() {
        let k = Fq::new(2, 2).unwrap();
        let (g, c) = s3_a3();
        let n = g.generated(&[c]);
        // the two non-principal blocks of kA3 are swapped by S3
        let mut b = vec![0; 6];
        b[c as usize] = 1;
        b[g.mul(c, c) as usize] = 1;
        let ext = BlockExtension::from_quotient(&g, &n, &k, b).unwrap();
        let r = red(7, &k, 6);
        let w = Mat::from_vec(&r.ell, 1, 1, vec![r.ell.pow(r.z, 2)]);
        assert!(matches!(build_triple(ext, &r, &[(c, w)]), Err(Error::NotInvariant(_))));
    }

    #[test]
    fn normal_subgroup_equal_to_group() {
        let k = Fq::new(2, 2).unwrap();
        let (g, _) = s3_a3();
        let kg = group_algebra(&g, &k).unwrap();
        let cb = group_algebra_blocks(&g, &kg).unwrap();
        let b = cb.blocks[principal_block_index(&cb).unwrap()].idempotent.clone();
        let ext = BlockExtension::from_quotient(&g, &g.whole(), &k, b).unwrap();
        let r = red(7, &k, 6);
        let gens: Vec<(u32, Mat)> = g.generating_set().into_iter().map(|x| (x, Mat::identity(&r.ell, 1))).collect();
        let t = build_triple(ext, &r, &gens).unwrap();
        let e = endo_algebra(&t).unwrap();
        assert_eq!(e.dim(), 1);
        assert_eq!(e.centralizer.len(), 1);
    }

    #[test]
    fn reducible_module_is_rejected() {
        let k = Fq::new(2, 2).unwrap();
        let (ext, c) = principal_a3(&k);
        let r = red(7, &k, 6);
        assert!(matches!(build_triple(ext, &r, &[(c, Mat::identity(&r.ell, 2))]), Err(Error::NotSimple(_))));
    }

    #[test]
    fn module_outside_the_block_is_rejected() {
        let k = Fq::new(2, 2).unwrap();
        let g = FiniteGroup::cyclic(3).unwrap();
        let ext = BlockExtension::from_quotient(&g, &g.whole(), &k, subset_sum(3, &[0, 1, 2])).unwrap();
        let r = red(7, &k, 3);
        let w = Mat::from_vec(&r.ell, 1, 1, vec![r.z]);
        assert!(matches!(build_triple(ext.clone(), &r, &[(1, w)]), Err(Error::SetupMismatch(_))));
        assert!(build_triple(ext, &r, &[(1, Mat::identity(&r.ell, 1))]).is_ok());
    }

    #[test]
    fn modular_characteristic_is_rejected() {
        let k = Fq::new(2, 2).unwrap();
        let (ext, c) = principal_a3(&k);
        let r = Reduction::new(&Fq::prime(3).unwrap(), &k, 2, 1).unwrap();
        let one = Mat::identity(&r.ell, 1);
        assert!(matches!(build_triple(ext, &r, &[(c, one)]), Err(Error::CharNotCoprime(3, 6))));
    }
}
