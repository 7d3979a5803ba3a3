use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{intersect_kernels, StructAlgebra};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{rref, vec_ops, Mat, Subspace};

use super::bimodule::Bimodule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A one-sided module as a quotient of a free module: generators `x_i`,
/// `π: A^s -> M` with column `i·dim A + a` equal to `e_a x_i` (or
/// `x_i e_a` on the right), a linear section of `π`, and `ker π`.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub side: Side,
    pub alg: StructAlgebra,
    pub gens: Vec<Vec<Elem>>,
    pub pi: Mat,
    pub section: Mat,
    pub relations: Vec<Vec<Elem>>,
}

fn side_parts(m: &Bimodule, side: Side) -> (&StructAlgebra, &[Mat]) {
    match side {
        Side::Left => (&m.left, m.lacts()),
        Side::Right => (&m.right, m.racts()),
    }
}

/// Chooses generators greedily, preferring the candidate that enlarges the
/// generated submodule most. Candidates are homogeneous when `m` is graded.
pub fn present(m: &Bimodule, side: Side) -> Presentation {
    let f = m.field().clone();
    let (alg, acts) = side_parts(m, side);
    let dim = m.dim();
    let da = alg.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let blocks: Vec<Vec<usize>> = match m.grading() {
        Some(g) => (0..g.group().order() as u32).map(|x| g.component_indices(x)).filter(|c| !c.is_empty()).collect(),
        None => vec![(0..dim).collect()],
    };
    let orbit = |x: &[Elem]| -> Vec<Vec<Elem>> { acts.iter().map(|a| a.apply(x)).collect() };
    let mut gens: Vec<Vec<Elem>> = Vec::new();
    let mut cur = Subspace::zero(&f, dim);
    while cur.dim() < dim {
        let mut cands: Vec<Vec<Elem>> = Vec::new();
        for b in &blocks {
            if b.iter().all(|&i| cur.contains(&vec_ops::unit(dim, i))) {
                continue;
            }
            for _ in 0..2 {
                let mut v = vec![0; dim];
                for &i in b {
                    v[i] = rng.gen_range(0..f.q());
                }
                cands.push(v);
            }
        }
        if let Some(i) = (0..dim).find(|&i| !cur.contains(&vec_ops::unit(dim, i))) {
            cands.push(vec_ops::unit(dim, i));
        }
        let mut best: Option<(usize, Vec<Elem>, Subspace)> = None;
        for c in cands {
            let mut all = cur.basis().to_vec();
            all.extend(orbit(&c));
            let s = Subspace::span(&f, dim, &all);
            if best.as_ref().is_none_or(|(d, _, _)| s.dim() > *d) {
                let full = s.dim() == cur.dim() + da;
                best = Some((s.dim(), c, s));
                if full {
                    break;
                }
            }
        }
        let (_, c, s) = best.expect("an unspanned basis vector is always a candidate");
        gens.push(c);
        cur = s;
    }
    let s = gens.len();
    let mut cols = Vec::with_capacity(s * da);
    for g in &gens {
        cols.extend(orbit(g));
    }
    let pi = Mat::from_cols(&f, dim, &cols);
    let (section, relations) = if dim == 0 {
        (Mat::zeros(&f, 0, 0), Vec::new())
    } else {
        let r = rref(&pi);
        let square = pi.select(&(0..dim).collect::<Vec<_>>(), &r.pivots);
        let inv = square.inverse().expect("pivot columns of a surjection form a basis");
        let mut section = Mat::zeros(&f, s * da, dim);
        for (k, &p) in r.pivots.iter().enumerate() {
            for j in 0..dim {
                section.set(p, j, inv.get(k, j));
            }
        }
        (section, pi.kernel())
    };
    Presentation { side, alg: alg.clone(), gens, pi, section, relations }
}

impl Presentation {
    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    /// Some `c ∈ A^s` with `π(c) = x`.
    pub fn coords(&self, x: &[Elem]) -> Vec<Elem> {
        self.section.apply(x)
    }

    /// Constraints `Σ_{i,a} r_{i,a} e_a n_i = 0`, one block per relation,
    /// on `(n_i) ∈ N^s` where `nacts` act on `N` from the presented side.
    pub fn relation_constraints(&self, nacts: &[Mat], ndim: usize) -> Vec<Mat> {
        let f = self.alg.field();
        let (s, da) = (self.rank(), self.alg.dim());
        self.relations
            .iter()
            .map(|r| {
                let mut m = Mat::zeros(f, ndim, s * ndim);
                for i in 0..s {
                    let block = Mat::combination(f, ndim, ndim, &r[i * da..(i + 1) * da], nacts);
                    m.set_block(0, i * ndim, &block);
                }
                m
            })
            .collect()
    }

    /// Matrix `M -> N` of the module map sending `x_i` to `n_i`.
    pub fn hom_matrix(&self, nacts: &[Mat], ndim: usize, n: &[Elem]) -> Mat {
        let f = self.alg.field();
        let (s, da) = (self.rank(), self.alg.dim());
        let mut cols = Vec::with_capacity(s * da);
        for i in 0..s {
            let ni = &n[i * ndim..(i + 1) * ndim];
            for a in nacts.iter().take(da) {
                cols.push(a.apply(ni));
            }
        }
        Mat::from_cols(f, ndim, &cols).mul(&self.section)
    }

    /// Values on the generators of a module map given as a matrix.
    pub fn values(&self, map: &Mat) -> Vec<Elem> {
        self.gens.iter().flat_map(|g| map.apply(g)).collect()
    }

    /// A module map `σ: M -> A^s` with `π σ = id`, if `M` is projective.
    pub fn splitting(&self) -> Option<Mat> {
        if self.is_free() {
            return Some(self.section.clone());
        }
        let f = self.alg.field();
        let (s, da) = (self.rank(), self.alg.dim());
        let dim = self.pi.rows();
        let one: Vec<Mat> = (0..da)
            .map(|a| {
                let e = self.alg.basis(a);
                let m = match self.side {
                    Side::Left => self.alg.left_matrix(&e),
                    Side::Right => self.alg.right_matrix(&e),
                };
                Mat::block_diag(f, &vec![m; s])
            })
            .collect();
        let nd = s * da;
        let homs = intersect_kernels(f, s * nd, self.relation_constraints(&one, nd));
        // π applied to each generator value, stacked.
        let cols: Vec<Vec<Elem>> = homs
            .basis()
            .iter()
            .map(|h| (0..s).flat_map(|i| self.pi.apply(&h[i * nd..(i + 1) * nd])).collect())
            .collect();
        let target: Vec<Elem> = self.gens.iter().flatten().copied().collect();
        let sys = Mat::from_cols(f, s * dim, &cols);
        let t = crate::linalg::solve_vec(&sys, &target)?;
        let n = vec_ops::combine(f, s * nd, &t, homs.basis());
        Some(self.hom_matrix(&one, nd, &n))
    }
}

/// `Hom` of bimodules `X -> N` as a subspace of `N^s` (values on the left
/// generators of `pres`).
pub fn bimodule_hom_space(x: &Bimodule, pres: &Presentation, n: &Bimodule) -> Result<Subspace> {
    if pres.side != Side::Left {
        return Err(Error::BadParams("bimodule homs use a left presentation".into()));
    }
    if !x.left.same_as(&n.left) || !x.right.same_as(&n.right) {
        return Err(Error::MiddleAlgebraMismatch);
    }
    let f = x.field();
    let (s, nd) = (pres.rank(), n.dim());
    let mut cons = pres.relation_constraints(n.lacts(), nd);
    for h in x.right.generators() {
        let rx = x.right_elem(h);
        let rn = n.right_elem(h);
        let da = x.left.dim();
        for i in 0..s {
            let c = pres.coords(&rx.apply(&pres.gens[i]));
            let mut m = Mat::zeros(f, nd, s * nd);
            for j in 0..s {
                let mut block = n.left_elem(&c[j * da..(j + 1) * da]);
                if j == i {
                    block = block.sub(&rn);
                }
                m.set_block(0, j * nd, &block);
            }
            cons.push(m);
        }
    }
    Ok(intersect_kernels(f, s * nd, cons))
}

/// `Hom` of left modules `X -> N`.
pub fn left_hom_space(pres: &Presentation, n: &Bimodule) -> Subspace {
    let (_, nacts) = side_parts(n, pres.side);
    intersect_kernels(n.field(), pres.rank() * n.dim(), pres.relation_constraints(nacts, n.dim()))
}
