use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::StructAlgebra;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::graded::{verify_graded_iso, CBar, GradedAlgebra, Grading, IsoReport};
use crate::linalg::{vec_ops, Mat, Subspace};

use super::bimodule::Bimodule;
use super::chain::{
    cone, contractible_check, homology_dims, quasi_iso_check, solve_homotopy, tensor_over, ChainMap, Complex, HomSpace,
    TensorComplex,
};
use super::present::{left_hom_space, present, Presentation, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DualFlavor {
    /// `Hom_A(-, A)`.
    ADual,
    /// `Hom_k(-, k)`.
    BaseDual,
}

/// `Hom_A(X_i, A)` as an `(A′, A)`-bimodule; `φ` is stored by its values on
/// the left generators of `X_i`, in the coordinates of `space ⊆ A^s`.
#[derive(Debug, Clone)]
pub struct DualTerm {
    pub pres: Presentation,
    pub space: Subspace,
    pub module: Bimodule,
    reg: Bimodule,
}

impl DualTerm {
    /// Matrix `X_i -> A` of the functional with the given coordinates.
    pub fn functional(&self, coords: &[Elem]) -> Mat {
        let f = self.reg.field();
        let n = vec_ops::combine(f, self.space.ambient(), coords, self.space.basis());
        self.pres.hom_matrix(self.reg.lacts(), self.reg.dim(), &n)
    }

    /// Coordinates of a left-linear map `X_i -> A` given as a matrix.
    pub fn coords_of(&self, map: &Mat) -> Result<Vec<Elem>> {
        self.space.coords(&self.pres.values(map)).ok_or_else(|| Error::CheckFailed("map is not left linear".into()))
    }
}

/// `Hom_A(M, A)`; fails with `NotProjective` unless `M` is a summand of a
/// free module.
pub fn a_dual_term(m: &Bimodule, a_grading: Option<&Grading>) -> Result<DualTerm> {
    let f = m.field().clone();
    let a = &m.left;
    let da = a.dim();
    let pres = present(m, Side::Left);
    if pres.splitting().is_none() {
        return Err(Error::NotProjective(format!(
            "module of dimension {} is not a summand of A^{}",
            m.dim(),
            pres.rank()
        )));
    }
    let reg = Bimodule::regular(a);
    let space = left_hom_space(&pres, &reg);
    let s = pres.rank();
    let mut t = DualTerm { pres, space, module: Bimodule::zero(&m.right, a), reg };
    let dim = t.space.dim();
    let lact = (0..m.right.dim())
        .map(|j| {
            let r = m.rmat(j);
            let cols = (0..dim)
                .map(|b| t.coords_of(&t.functional(&vec_ops::unit(dim, b)).mul(r)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Mat::from_cols(&f, dim, &cols))
        })
        .collect::<Result<Vec<_>>>()?;
    let ract = (0..da)
        .map(|k| {
            let rm = a.right_matrix(&a.basis(k));
            let cols = t
                .space
                .basis()
                .iter()
                .map(|n| {
                    let moved: Vec<Elem> = (0..s).flat_map(|i| rm.apply(&n[i * da..(i + 1) * da])).collect();
                    t.space.coords(&moved).ok_or_else(|| Error::CheckFailed("right action leaves Hom".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Mat::from_cols(&f, dim, &cols))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut module = Bimodule::from_parts(m.right.clone(), a.clone(), dim, lact, ract);
    if let (Some(gm), Some(ga)) = (m.grading(), a_grading) {
        let grp = gm.group();
        let gen_deg: Vec<u32> = t
            .pres
            .gens
            .iter()
            .map(|g| gm.degree(g).ok_or_else(|| Error::NotGraded("generator is not homogeneous".into())))
            .collect::<Result<_>>()?;
        let coord_deg = |c: usize| grp.mul(grp.inv(gen_deg[c / da]), ga.degrees()[c % da]);
        let deg = t
            .space
            .basis()
            .iter()
            .map(|n| {
                let mut ds = n.iter().enumerate().filter(|(_, &v)| v != 0).map(|(c, _)| coord_deg(c));
                let d0 = ds.next().unwrap_or(grp.identity());
                if ds.all(|d| d == d0) {
                    Ok(d0)
                } else {
                    Err(Error::NotGraded("Hom basis vector is not homogeneous".into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        module = module.with_grading(Grading::new(grp.clone(), deg)?)?;
    }
    t.module = module;
    Ok(t)
}

/// The dual complex together with the per-term data for `A`-duals.
#[derive(Debug, Clone)]
pub struct DualComplex {
    pub complex: Complex,
    /// `terms[k]` is the dual of `X_{hi-k}`, i.e. `Y_{-hi+k}`.
    pub terms: Vec<DualTerm>,
}

fn sign(f: &crate::field::Fq, j: i32) -> Elem {
    if j.rem_euclid(2) == 0 {
        f.one()
    } else {
        f.neg(1)
    }
}

/// `Y_j = Hom(X_{-j}, -)` with `d^Y_j(φ) = (-1)^j φ∘d^X`.
pub fn dual_complex(x: &Complex, flavor: DualFlavor, a_grading: Option<&Grading>) -> Result<Complex> {
    match flavor {
        DualFlavor::ADual => Ok(a_dual(x, a_grading)?.complex),
        DualFlavor::BaseDual => {
            let f = x.field();
            let terms: Vec<Bimodule> = (x.lo()..=x.hi()).rev().map(|i| x.term(i).base_dual()).collect();
            let lo = -x.hi();
            let diffs = (lo + 1..=-x.lo()).map(|j| x.d(-j + 1).transpose().scaled(sign(f, j))).collect();
            Ok(Complex::from_parts(&x.right, &x.left, lo, terms, diffs))
        }
    }
}

pub fn a_dual(x: &Complex, a_grading: Option<&Grading>) -> Result<DualComplex> {
    let f = x.field();
    let terms: Vec<DualTerm> =
        (x.lo()..=x.hi()).rev().map(|i| a_dual_term(&x.term(i), a_grading)).collect::<Result<_>>()?;
    let lo = -x.hi();
    let mut diffs = Vec::new();
    for j in lo + 1..=-x.lo() {
        // Y_j = dual of X_{-j}, mapped to Y_{j-1} = dual of X_{-j+1}.
        let (src, tgt) = (&terms[(j - lo) as usize], &terms[(j - 1 - lo) as usize]);
        let dx = x.d(-j + 1);
        let cols = (0..src.space.dim())
            .map(|b| tgt.coords_of(&src.functional(&vec_ops::unit(src.space.dim(), b)).mul(&dx)))
            .collect::<Result<Vec<_>>>()?;
        diffs.push(Mat::from_cols(f, tgt.space.dim(), &cols).scaled(sign(f, j)));
    }
    let complex = Complex::from_parts(&x.right, &x.left, lo, terms.iter().map(|t| t.module.clone()).collect(), diffs);
    complex.verify()?;
    Ok(DualComplex { complex, terms })
}

/// `x ⊗ φ -> φ(x)` on degree 0 of `X ⊗_{A′} Y`.
fn evaluation(x: &Complex, dual: &DualComplex, xy: &TensorComplex) -> ChainMap {
    let f = x.field();
    let da = x.left.dim();
    let lo_y = dual.complex.lo();
    let mut m = Mat::zeros(f, da, xy.complex.dim_at(0));
    for (&(i, j), (off, t)) in xy.pieces.iter().filter(|(k, _)| k.0 + k.1 == 0) {
        let dt = &dual.terms[(j - lo_y) as usize];
        let xd = x.dim_at(i);
        let fun: Vec<Mat> = (0..dt.space.dim()).map(|b| dt.functional(&vec_ops::unit(dt.space.dim(), b))).collect();
        for b in 0..t.dim() {
            let (k, jj) = t.split(b);
            let g = &t.pres.gens[k];
            debug_assert_eq!(g.len(), xd);
            let v = fun[jj].apply(g);
            for r in 0..da {
                m.set(r, off + b, v[r]);
            }
        }
    }
    ChainMap { lo: 0, maps: vec![m] }
}

/// `a′ -> a′ Σ_k φ_k ⊗ x_k` into degree 0 of `Y ⊗_A X`, where `(φ_k, x_k)` is
/// the dual basis from a splitting of `A^s -> X_i`.
fn coevaluation(x: &Complex, dual: &DualComplex, yx: &TensorComplex) -> Result<ChainMap> {
    let f = x.field();
    let da = x.left.dim();
    let lo_y = dual.complex.lo();
    let n0 = yx.complex.dim_at(0);
    let mut e = vec![0; n0];
    for (&(j, i), (off, t)) in yx.pieces.iter().filter(|(k, _)| k.0 + k.1 == 0) {
        let dt = &dual.terms[(j - lo_y) as usize];
        let sigma = dt.pres.splitting().ok_or_else(|| Error::NotProjective(format!("term in degree {i}")))?;
        let s = dt.pres.rank();
        for k in 0..s {
            let values: Vec<Elem> =
                dt.pres.gens.iter().flat_map(|g| sigma.apply(g)[k * da..(k + 1) * da].to_vec()).collect();
            let phi = dt
                .space
                .coords(&values)
                .ok_or_else(|| Error::CheckFailed("dual basis functional is not left linear".into()))?;
            let piece = t.pure(&phi, &dt.pres.gens[k]);
            debug_assert_eq!(x.dim_at(i), dt.pres.gens[k].len());
            for (r, &v) in piece.iter().enumerate() {
                e[off + r] = f.add(e[off + r], v);
            }
        }
    }
    let term = yx.complex.term(0);
    let cols: Vec<Vec<Elem>> = (0..x.right.dim()).map(|a| term.lmat(a).apply(&e)).collect();
    Ok(ChainMap { lo: 0, maps: vec![Mat::from_cols(f, n0, &cols)] })
}

/// Outcome of [`derived_equivalence_check`].
#[derive(Debug, Clone, Serialize)]
pub struct DerivedReport {
    pub derived: bool,
    /// `None` when the cone test was not requested.
    pub rickard: Option<bool>,
    pub evaluation_quasi_iso: bool,
    pub coevaluation_quasi_iso: bool,
    pub graded: Option<bool>,
    pub homology_xy: BTreeMap<i32, usize>,
    pub homology_yx: BTreeMap<i32, usize>,
    pub witnesses: Vec<String>,
}

/// Builds `Y = Hom_A(X, A)` and checks that evaluation `X ⊗_{A′} Y -> A`
/// and coevaluation `A′ -> Y ⊗_A X` are quasi-isomorphisms. With
/// `rickard_test` set, both mapping cones must also be contractible as complexes
/// of bimodules.
pub fn derived_equivalence_check(
    x: &Complex,
    gradings: Option<(&Grading, &Grading)>,
    rickard_test: bool,
) -> Result<DerivedReport> {
    let mut witnesses = Vec::new();
    let dual = a_dual(x, gradings.map(|g| g.0))?;
    let xy = tensor_over(x, &dual.complex)?;
    let yx = tensor_over(&dual.complex, x)?;
    let reg_a = match gradings {
        Some((ga, _)) => Bimodule::regular(&x.left).with_grading(ga.clone())?,
        None => Bimodule::regular(&x.left),
    };
    let reg_a2 = match gradings {
        Some((_, gb)) => Bimodule::regular(&x.right).with_grading(gb.clone())?,
        None => Bimodule::regular(&x.right),
    };
    let a0 = Complex::concentrated(reg_a, 0);
    let a20 = Complex::concentrated(reg_a2, 0);
    let ev = evaluation(x, &dual, &xy);
    let coev = coevaluation(x, &dual, &yx)?;
    let ev_q = quasi_iso_check(&ev, &xy.complex, &a0)?;
    let coev_q = quasi_iso_check(&coev, &a20, &yx.complex)?;
    if !ev_q.pass {
        witnesses.push("evaluation X ⊗ Y -> A is not a quasi-isomorphism".into());
    }
    if !coev_q.pass {
        witnesses.push("coevaluation A′ -> Y ⊗ X is not a quasi-isomorphism".into());
    }
    let graded = if gradings.is_some() {
        let ok = degree_preserving(&ev.maps[0], xy.complex.term_ref(0), a0.term_ref(0))
            && degree_preserving(&coev.maps[0], a20.term_ref(0), yx.complex.term_ref(0));
        if !ok {
            witnesses.push("evaluation or coevaluation does not preserve degrees".into());
        }
        Some(ok)
    } else {
        None
    };
    let derived = ev_q.pass && coev_q.pass && graded.unwrap_or(true);
    let mut rickard = None;
    if derived && rickard_test {
        let right_projective = x.terms().iter().all(|t| present(t, Side::Right).splitting().is_some());
        if !right_projective {
            witnesses.push("a term is not projective as a right module".into());
            rickard = Some(false);
        } else {
            let c1 = contractible_check(&cone(&ev, &xy.complex, &a0)?, HomSpace::Bimodule)?;
            let c2 = contractible_check(&cone(&coev, &a20, &yx.complex)?, HomSpace::Bimodule)?;
            if !c1.is_contractible() {
                witnesses.push("cone of evaluation is not contractible as a bimodule complex".into());
            }
            if !c2.is_contractible() {
                witnesses.push("cone of coevaluation is not contractible as a bimodule complex".into());
            }
            rickard = Some(c1.is_contractible() && c2.is_contractible());
        }
    }
    Ok(DerivedReport {
        derived,
        rickard,
        evaluation_quasi_iso: ev_q.pass,
        coevaluation_quasi_iso: coev_q.pass,
        graded,
        homology_xy: homology_dims(&xy.complex),
        homology_yx: homology_dims(&yx.complex),
        witnesses,
    })
}

fn degree_preserving(m: &Mat, src: Option<&Bimodule>, tgt: Option<&Bimodule>) -> bool {
    let (Some(s), Some(t)) = (src, tgt) else {
        return true;
    };
    let (Some(gs), Some(gt)) = (s.grading(), t.grading()) else {
        return true;
    };
    (0..s.dim()).all(|c| {
        let img = m.col(c);
        vec_ops::is_zero(&img) || gt.degree(&img) == Some(gs.degrees()[c])
    })
}

/// The `ḡ`-component of a graded complex as a complex of
/// `(B, B′)`-bimodules.
pub fn component_complex(
    x: &Complex,
    g: u32,
    b: &StructAlgebra,
    b_emb: &Mat,
    b2: &StructAlgebra,
    b2_emb: &Mat,
) -> Result<(Complex, Vec<Vec<usize>>)> {
    let mut idx = Vec::new();
    let mut terms = Vec::new();
    for t in x.terms() {
        let gr = t.grading().ok_or_else(|| Error::NotGraded("complex term carries no grading".into()))?;
        let ci = gr.component_indices(g);
        terms.push(t.restrict(b, b_emb, b2, b2_emb, &ci)?);
        idx.push(ci);
    }
    let diffs = (x.lo() + 1..=x.hi())
        .map(|i| {
            let k = (i - x.lo()) as usize;
            x.d(i).select(&idx[k - 1], &idx[k])
        })
        .collect();
    Ok((Complex::from_parts(b, b2, x.lo(), terms, diffs), idx))
}

/// The isomorphism `C̄_A(B) -> C̄_{A′}(B′)` induced by a graded two-sided
/// tilting complex, with the check that it is a graded, action-preserving
/// algebra isomorphism.
#[derive(Debug, Clone)]
pub struct CbarIso {
    pub matrix: Mat,
    pub source: CBar,
    pub target: CBar,
    pub report: IsoReport,
}

/// For each homogeneous basis element `c` of `C̄` of degree `ḡ`, solves
/// `λ_c - ρ_{c′} = d h + h d` for `c′ ∈ C_{A′}(B′)_ḡ` and `h`, as maps from
/// the identity component of `X` to its `ḡ`-component, in the space of
/// `(B, B′)`-bimodule maps. `c′` must be unique modulo the graded radical.
pub fn induced_cbar_iso(x: &Complex, a: &GradedAlgebra, a2: &GradedAlgebra) -> Result<CbarIso> {
    if !x.left.same_as(&a.alg) || !x.right.same_as(&a2.alg) {
        return Err(Error::MiddleAlgebraMismatch);
    }
    let f = a.field();
    let source = CBar::new(a)?;
    let target = CBar::new(a2)?;
    let (b, b_emb) = a.identity_algebra()?;
    let (b2, b2_emb) = a2.identity_algebra()?;
    let one = a.group().identity();
    let (x1, idx1) = component_complex(x, one, &b, &b_emb, &b2, &b2_emb)?;
    let cq = &source.quotient;
    let mut cols = Vec::with_capacity(cq.dim());
    let mut cache: BTreeMap<u32, (Complex, Vec<Vec<usize>>)> = BTreeMap::new();
    for i in 0..cq.dim() {
        let g = cq.grading.degrees()[i];
        if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(g) {
            e.insert(component_complex(x, g, &b, &b_emb, &b2, &b2_emb)?);
        }
        let (xg, idxg) = &cache[&g];
        let c = source.lift(i);
        let lam = ChainMap {
            lo: x.lo(),
            maps: x.terms().iter().enumerate().map(|(k, t)| t.left_elem(&c).select(&idxg[k], &idx1[k])).collect(),
        };
        let cands: Vec<Vec<Elem>> = target
            .centralizer
            .basis()
            .iter()
            .zip(target.c.grading.degrees())
            .filter(|(_, &d)| d == g)
            .map(|(v, _)| v.clone())
            .collect();
        let extra: Vec<ChainMap> = cands
            .iter()
            .map(|cp| ChainMap {
                lo: x.lo(),
                maps: x.terms().iter().enumerate().map(|(k, t)| t.right_elem(cp).select(&idxg[k], &idx1[k])).collect(),
            })
            .collect();
        let sol = solve_homotopy(&x1, xg, &lam, &extra, HomSpace::Bimodule)?
            .ok_or_else(|| Error::NoSolution(format!("no c′ of degree {g} matches basis element {i} of C̄")))?;
        let combo = |t: &[Elem]| vec_ops::combine(f, a2.dim(), t, &cands);
        for k in &sol.coeff_kernel {
            if !vec_ops::is_zero(&target.class_of(&combo(k))?) {
                return Err(Error::NotWellDefined(format!(
                    "image of basis element {i} of C̄ is not unique modulo J_gr"
                )));
            }
        }
        cols.push(target.class_of(&combo(&sol.coeffs))?);
    }
    let matrix = Mat::from_cols(f, target.quotient.dim(), &cols);
    let actions = match (a.crossed_product_units(0), a2.crossed_product_units(0)) {
        (Ok(u), Ok(u2)) => Some((source.action(a, &u)?, target.action(a2, &u2)?)),
        _ => None,
    };
    let report = verify_graded_iso(
        &matrix,
        &source.quotient,
        &target.quotient,
        None,
        actions.as_ref().map(|(s, t)| (s.as_slice(), t.as_slice())),
    );
    Ok(CbarIso { matrix, source, target, report })
}
