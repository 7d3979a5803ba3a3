use serde::Serialize;

use crate::algebra::blocks::center_and_blocks;
use crate::brauer::{blocks_of_extension, brauer_on_group_algebra, dade_map, defect_group, harris_knorr, Inclusion};
use crate::complexes::{induced_cbar_iso, Complex};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::graded::{BlockExtension, CBar};
use crate::groups::{FiniteGroup, Subgroup};
use crate::linalg::{Mat, Subspace};

use super::module::{
    block_central_character, endo_algebra, intertwiners, module_central_character, restrict_to, EndoAlgebra,
    ModuleTriple,
};

/// Data asserting `(A, B, V) ≥ (A′, B′, V′)`: the two triples, `G′ ≤ G`,
/// and a graded isomorphism `E(V) -> E(V′)` in the bases of the two
/// endomorphism algebras.
#[derive(Debug, Clone)]
pub struct TripleCertificate {
    pub triple: ModuleTriple,
    pub prime: ModuleTriple,
    pub incl: Inclusion,
    /// `Ḡ′ -> Ḡ` induced by `incl`.
    pub gbar_map: Vec<u32>,
    pub endo: EndoAlgebra,
    pub endo_prime: EndoAlgebra,
    /// Columns are images of the basis of `E(V)`.
    pub iso: Mat,
    /// Defect group `Q ≤ N` of `b`, as a subgroup of `G`.
    pub defect: Option<Subgroup>,
}

fn gbar_map(t: &ModuleTriple, t2: &ModuleTriple, incl: &Inclusion) -> Result<Vec<u32>> {
    let map: Vec<u32> = t2.ext.coset_reps.iter().map(|&x| t.ext.proj.apply(incl.index[x as usize])).collect();
    let mut seen = map.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != t.gbar().order() || map.len() != seen.len() {
        return Err(Error::SetupMismatch("G is not G′N with G′/N′ ≅ G/N".into()));
    }
    let g = &t.ext.group;
    let n2: Vec<u32> = t2.ext.normal.elements().iter().map(|&x| incl.index[x as usize]).collect();
    let meet: Vec<u32> = incl.index.iter().copied().filter(|&x| t.ext.normal.contains(x)).collect();
    let mut n2s = n2.clone();
    n2s.sort_unstable();
    let mut meets = meet;
    meets.sort_unstable();
    if n2s != meets || incl.index.len() != t2.ext.group.order() || incl.index.iter().any(|&x| x as usize >= g.order()) {
        return Err(Error::SetupMismatch("N′ is not G′ ∩ N".into()));
    }
    Ok(map)
}

impl TripleCertificate {
    /// Certificate with a caller-supplied isomorphism.
    pub fn new(
        triple: ModuleTriple,
        prime: ModuleTriple,
        incl: Inclusion,
        iso: Mat,
        defect: Option<Subgroup>,
    ) -> Result<TripleCertificate> {
        let gbar_map = gbar_map(&triple, &prime, &incl)?;
        let endo = endo_algebra(&triple)?;
        let endo_prime = endo_algebra(&prime)?;
        if iso.rows() != endo_prime.dim() || iso.cols() != endo.dim() {
            return Err(Error::DimensionMismatch("iso does not map E(V) to E(V′)".into()));
        }
        Ok(TripleCertificate { triple, prime, incl, gbar_map, endo, endo_prime, iso, defect })
    }

    /// The isomorphism obtained by restricting along `G′ ≤ G`: an
    /// `N′`-isomorphism `T: V′ -> Res V` gives the `G′`-isomorphism
    /// `Θ: t′ ⊗ v′ ↦ t′ ⊗ T v′` from `ℓG′ ⊗ V′` to `Res ℓG ⊗ V`, and
    /// `φ ↦ Θ⁻¹ φ Θ`.
    pub fn by_restriction(
        triple: ModuleTriple,
        prime: ModuleTriple,
        incl: Inclusion,
        defect: Option<Subgroup>,
    ) -> Result<TripleCertificate> {
        if triple.ell().q() != prime.ell().q() || triple.red.k.q() != prime.red.k.q() {
            return Err(Error::SetupMismatch("triples are over different fields".into()));
        }
        let gm = gbar_map(&triple, &prime, &incl)?;
        let ell = triple.ell().clone();
        let (d, d2) = (triple.v_dim(), prime.v_dim());
        let gens = prime.n_group.generating_set();
        let a: Vec<&Mat> = gens.iter().map(|&x| &prime.v[x as usize]).collect();
        let b: Vec<&Mat> =
            gens.iter().map(|&x| triple.rho(incl.index[prime.n_incl.index[x as usize] as usize])).collect();
        let t = intertwiners(&ell, d, d2, &a, &b)
            .into_iter()
            .find(|m| m.is_invertible())
            .ok_or_else(|| Error::SetupMismatch("V′ is not isomorphic to the restriction of V".into()))?;
        let grp = &triple.ext.group;
        let mut theta = Mat::zeros(&ell, triple.ind_dim(), prime.ind_dim());
        for (s2, &t2) in prime.ext.coset_reps.iter().enumerate() {
            let s = gm[s2] as usize;
            let x = incl.index[t2 as usize];
            let n = grp.mul(grp.inv(triple.ext.coset_reps[s]), x);
            theta.set_block(s * d, s2 * d2, &triple.rho(n).mul(&t));
        }
        let inv = theta.inverse().ok_or_else(|| Error::CheckFailed("Θ is not invertible".into()))?;
        let endo = endo_algebra(&triple)?;
        let endo_prime = endo_algebra(&prime)?;
        let cols = endo
            .mats
            .iter()
            .map(|m| {
                endo_prime
                    .coords(&inv.mul(m).mul(&theta))
                    .ok_or_else(|| Error::CheckFailed("transported endomorphism is not G′-linear".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let iso = Mat::from_cols(&ell, endo_prime.dim(), &cols);
        Ok(TripleCertificate { triple, prime, incl, gbar_map: gm, endo, endo_prime, iso, defect })
    }

    /// Composes the isomorphism with an automorphism of `E(V′)`.
    pub fn then(mut self, auto: &Mat) -> TripleCertificate {
        self.iso = auto.mul(&self.iso);
        self
    }
}

/// The graded automorphism of `E(V)` scaling `E_ḡ` by `χ(ḡ)`, for a linear
/// character `χ` of `Ḡ` with values listed per element.
pub fn character_twist(e: &EndoAlgebra, chi: &[Elem]) -> Mat {
    let f = e.alg.field();
    let mut m = Mat::zeros(f, e.dim(), e.dim());
    for (i, &g) in e.alg.grading.degrees().iter().enumerate() {
        m.set(i, i, chi[g as usize]);
    }
    m
}

#[derive(Debug, Clone, Serialize)]
pub struct GeqCReport {
    pub bijective: bool,
    pub multiplicative: bool,
    pub graded: bool,
    pub commutes: bool,
    pub witness: Option<String>,
}

impl GeqCReport {
    pub fn ok(&self) -> bool {
        self.bijective && self.multiplicative && self.graded && self.commutes
    }
}

pub fn verify_geq_c(cert: &TripleCertificate) -> Result<GeqCReport> {
    let e = &cert.endo;
    let e2 = &cert.endo_prime;
    let a = &e.alg.alg;
    let a2 = &e2.alg.alg;
    let iso = &cert.iso;
    let mut witness = None;
    let bijective = iso.rows() == iso.cols() && iso.is_invertible();
    if !bijective {
        witness.get_or_insert_with(|| "iso is not bijective".to_string());
    }
    let mut multiplicative = iso.apply(a.unit()) == a2.unit();
    if !multiplicative {
        witness.get_or_insert_with(|| "iso does not preserve the unit".to_string());
    }
    'outer: for i in 0..a.dim() {
        let xi = iso.col(i);
        for j in 0..a.dim() {
            if iso.apply(&a.mul_basis(i, j)) != a2.mul(&xi, &iso.col(j)) {
                multiplicative = false;
                witness.get_or_insert_with(|| format!("iso(e{i}·e{j}) ≠ iso(e{i})·iso(e{j})"));
                break 'outer;
            }
        }
    }
    let mut graded = true;
    for (i, &g) in e.alg.grading.degrees().iter().enumerate() {
        let want = cert.gbar_map.iter().position(|&x| x == g).map(|x| x as u32);
        let col = iso.col(i);
        let got = e2.alg.grading.degree(&col);
        if !crate::linalg::vec_ops::is_zero(&col) && got != want {
            graded = false;
            witness.get_or_insert_with(|| format!("e{i} of degree {} leaves its component", e.alg.group().label(g)));
            break;
        }
    }
    let mut commutes = true;
    let grp = &cert.triple.ext.group;
    for (i, &c) in e.centralizer.iter().enumerate() {
        let c2 = cert.incl.preimage(c).ok_or_else(|| Error::SetupMismatch("C_G(N) is not inside G′".into()))?;
        let j = e2
            .centralizer
            .binary_search(&c2)
            .map_err(|_| Error::SetupMismatch("C_G(N) does not centralize N′".into()))?;
        if iso.apply(&e.cmap.col(i)) != e2.cmap.col(j) {
            commutes = false;
            witness.get_or_insert_with(|| format!("c = {}", grp.label(c)));
            break;
        }
    }
    Ok(GeqCReport { bijective, multiplicative, graded, commutes, witness })
}

/// Outcome for one intermediate subgroup `N ≤ J ≤ G`.
#[derive(Debug, Clone, Serialize)]
pub struct JReport {
    /// Elements of `J̄ ≤ Ḡ`, by label.
    pub jbar: Vec<String>,
    pub order: usize,
    /// `(β, β′, Harris–Knörr correspondents)` for each simple `W` covering `V`.
    pub pairs: Vec<(usize, usize, bool)>,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeqBReport {
    pub geq_c: GeqCReport,
    pub per_j: Vec<JReport>,
    pub witness: Option<String>,
}

impl GeqBReport {
    pub fn ok(&self) -> bool {
        self.geq_c.ok() && self.per_j.iter().all(|j| j.ok)
    }
}

fn check_local_setup(cert: &TripleCertificate, q: &Subgroup) -> Result<()> {
    let t = &cert.triple;
    let g = &t.ext.group;
    let p = t.ext.field().p();
    if !q.is_subset_of(&t.ext.normal) {
        return Err(Error::SetupMismatch("Q is not inside N".into()));
    }
    let b_n = restrict_to(&t.ext.idempotent, &t.n_incl);
    let d = defect_group(&t.n_group, &b_n, p)?;
    let q_n = t.n_group.subgroup(&q.elements().iter().map(|&x| t.n_incl.preimage(x).unwrap()).collect::<Vec<_>>())?;
    if d.order() != q.order() || !t.n_group.is_subconjugate(&q_n, &d) {
        return Err(Error::SetupMismatch("Q is not a defect group of b".into()));
    }
    let (nq, _) = g.normalizer_centralizer(q)?;
    if cert.incl.image(g)? != nq {
        return Err(Error::SetupMismatch("G′ is not N_G(Q)".into()));
    }
    let br = brauer_on_group_algebra(g, q, &t.ext.idempotent)?;
    let local: Vec<Elem> = cert.incl.index.iter().map(|&x| br[x as usize]).collect();
    let outside = (0..br.len()).any(|x| br[x] != 0 && cert.incl.preimage(x as u32).is_none());
    if outside || local != cert.prime.ext.idempotent {
        return Err(Error::SetupMismatch("b′ is not Br_Q(b)".into()));
    }
    Ok(())
}

/// `J = proj⁻¹(J̄)` as a group, with its inclusion, block extension and the
/// induced-module positions of its cosets.
struct Slice {
    group: FiniteGroup,
    incl: Inclusion,
    ext: BlockExtension,
    cosets: Vec<usize>,
}

fn slice(t: &ModuleTriple, jbar: &[u32]) -> Result<Slice> {
    let g = &t.ext.group;
    let elems: Vec<u32> = g.elements().filter(|&x| jbar.contains(&t.ext.proj.apply(x))).collect();
    let j = g.subgroup(&elems)?;
    let (group, incl) = Inclusion::of_subgroup(g, &j)?;
    let normal: Vec<u32> = t.ext.normal.elements().iter().map(|&x| incl.preimage(x).unwrap()).collect();
    let normal = group.subgroup(&normal)?;
    let b = restrict_to(&t.ext.idempotent, &incl);
    let ext = BlockExtension::from_quotient(&group, &normal, t.ext.field(), b)?;
    let d = t.v_dim();
    let cosets = jbar.iter().flat_map(|&s| (s as usize * d)..(s as usize + 1) * d).collect();
    Ok(Slice { group, incl, ext, cosets })
}

/// Block of `kJ` containing the simple module on the `z`-isotypic part of
/// `ℓJ ⊗_{ℓN} V`.
fn block_of_component(t: &ModuleTriple, e: &EndoAlgebra, s: &Slice, z: &[Elem]) -> Result<usize> {
    let ell = t.ell();
    let mz = e.matrix(z).select(&s.cosets, &s.cosets);
    let u = Subspace::span(ell, s.cosets.len(), &mz.col_vecs());
    if u.is_zero() {
        return Err(Error::CheckFailed("idempotent acts as zero".into()));
    }
    let action = |x: u32| {
        let a = t.ind_action(s.incl.index[x as usize]).select(&s.cosets, &s.cosets);
        let cols: Vec<Vec<Elem>> = u.basis().iter().map(|v| u.coords(&a.apply(v)).expect("J-stable")).collect();
        Mat::from_cols(ell, u.dim(), &cols)
    };
    let blocks = blocks_of_extension(&s.ext)?;
    let mut found = None;
    let mut omega = None;
    for (i, beta) in blocks.iter().enumerate() {
        let (classes, lam) = block_central_character(&s.group, &t.red.k, beta)?;
        let w = match &omega {
            Some(w) => w,
            None => omega.insert(module_central_character(&t.red, &classes, u.dim(), action)?),
        };
        if *w == lam {
            if found.is_some() {
                return Err(Error::CheckFailed("two blocks share a central character".into()));
            }
            found = Some(i);
        }
    }
    found.ok_or_else(|| Error::CheckFailed("no block of kJ contains W".into()))
}

/// Checks `≥_c` and the Harris–Knörr condition at every `N ≤ J ≤ G`.
pub fn verify_geq_b(cert: &TripleCertificate) -> Result<GeqBReport> {
    let q = cert.defect.as_ref().ok_or_else(|| Error::SetupMismatch("no defect group given".into()))?;
    check_local_setup(cert, q)?;
    let geq_c = verify_geq_c(cert)?;
    let mut witness = geq_c.witness.clone();
    let t = &cert.triple;
    let t2 = &cert.prime;
    let gbar = t.gbar();
    let mut per_j = Vec::new();
    for jb in gbar.all_subgroups() {
        let jbar = jb.elements().to_vec();
        let mut jbar2: Vec<u32> =
            jbar.iter().map(|&x| cert.gbar_map.iter().position(|&y| y == x).unwrap() as u32).collect();
        jbar2.sort_unstable();
        let s = slice(t, &jbar)?;
        let s2 = slice(t2, &jbar2)?;
        let incl_j = Inclusion {
            index: s2.incl.index.iter().map(|&x| s.incl.preimage(cert.incl.index[x as usize]).unwrap()).collect(),
        };
        let q_j = s.group.subgroup(&q.elements().iter().map(|&x| s.incl.preimage(x).unwrap()).collect::<Vec<_>>())?;
        let hk = harris_knorr(&s.ext, &s2.ext, &incl_j, &q_j)?;
        let idx: Vec<usize> =
            (0..cert.endo.dim()).filter(|&i| jbar.contains(&cert.endo.alg.grading.degrees()[i])).collect();
        let sub = Subspace::coordinate(cert.endo.alg.field(), cert.endo.dim(), &idx);
        let (ej, emb) = cert.endo.alg.alg.subalgebra(&sub)?;
        let cb = center_and_blocks(&ej)?;
        let mut pairs = Vec::new();
        for blk in &cb.blocks {
            let z = emb.apply(&blk.idempotent);
            let z2 = cert.iso.apply(&z);
            let beta = block_of_component(t, &cert.endo, &s, &z)?;
            let beta2 = block_of_component(t2, &cert.endo_prime, &s2, &z2)?;
            let ok = hk.iter().any(|p| p.block == beta && p.correspondent == beta2);
            if !ok {
                witness.get_or_insert_with(|| {
                    format!("J of order {}: block {beta} of kJ is not the Harris–Knörr correspondent of block {beta2} of kJ′", s.group.order())
                });
            }
            pairs.push((beta, beta2, ok));
        }
        let ok = pairs.iter().all(|p| p.2);
        per_j.push(JReport {
            jbar: jbar.iter().map(|&x| gbar.label(x).to_string()).collect(),
            order: s.group.order(),
            pairs,
            ok,
        });
    }
    Ok(GeqBReport { geq_c, per_j, witness })
}

#[derive(Debug, Clone, Serialize)]
pub struct BrauerCompatReport {
    pub cbar_dim: usize,
    pub phi: Vec<Vec<Elem>>,
    pub dade: Vec<Vec<Elem>>,
    pub ok: bool,
}

/// Matrix of the `C̄` map induced by an algebra isomorphism `ψ: A -> A₂`
/// (columns are images of the basis of `A`).
pub fn transport_cbar(src: &CBar, dst: &CBar, psi: &Mat) -> Result<Mat> {
    let cols = (0..src.quotient.dim()).map(|i| dst.class_of(&psi.apply(&src.lift(i)))).collect::<Result<Vec<_>>>()?;
    Ok(Mat::from_cols(psi.field(), dst.quotient.dim(), &cols))
}

/// Compares the isomorphism `C̄ ≅ C̄′` induced by `x` with Dade's map.
/// `psi` and `psi2` identify the algebras of `x` with `ext.algebra` and
/// `ext2.algebra`; `None` means they coincide.
pub fn brauer_compatibility_check(
    x: &Complex,
    ext: &BlockExtension,
    ext2: &BlockExtension,
    incl: &Inclusion,
    q: &Subgroup,
    psi: Option<(&crate::graded::GradedAlgebra, &Mat)>,
    psi2: Option<(&crate::graded::GradedAlgebra, &Mat)>,
) -> Result<BrauerCompatReport> {
    let a = psi.map(|p| p.0).unwrap_or(&ext.algebra);
    let a2 = psi2.map(|p| p.0).unwrap_or(&ext2.algebra);
    let iso = induced_cbar_iso(x, a, a2)?;
    let (c_ext, c_ext2) = (ext.cbar()?, ext2.cbar()?);
    let d = dade_map(ext, &c_ext, ext2, &c_ext2, incl, q)?;
    let d = match (psi, psi2) {
        (None, None) => d,
        _ => {
            let into = match psi {
                Some((_, m)) => transport_cbar(&iso.source, &c_ext, m)?,
                None => Mat::identity(ext.field(), d.cols()),
            };
            let back = match psi2 {
                Some((_, m)) => transport_cbar(&iso.target, &c_ext2, m)?
                    .inverse()
                    .ok_or_else(|| Error::CheckFailed("C̄′ transport is not invertible".into()))?,
                None => Mat::identity(ext.field(), d.rows()),
            };
            back.mul(&d).mul(&into)
        }
    };
    Ok(BrauerCompatReport {
        cbar_dim: iso.matrix.cols(),
        ok: iso.matrix == d,
        phi: iso.matrix.row_vecs(),
        dade: d.row_vecs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{instance, order_two_character, Witness};

    #[test]
    fn identity_certificate_passes() {
        for name in ["s3-a3-p3", "v4-c2-p2", "c6-c3-p3"] {
            let cert = instance(name, None).unwrap().certificate().unwrap();
            assert_eq!(cert.iso, Mat::identity(cert.iso.field(), cert.iso.rows()), "{name}");
            let r = verify_geq_c(&cert).unwrap();
            assert!(r.ok(), "{name}: {r:?}");
        }
    }

    #[test]
    fn twist_moving_the_centralizer_fails_with_witness() {
        let cert = instance("c6-c3-p3", None).unwrap().certificate().unwrap();
        let chi = order_two_character(cert.triple.gbar(), cert.triple.ell()).unwrap();
        let tw = character_twist(&cert.endo_prime, &chi);
        let r = verify_geq_c(&cert.then(&tw)).unwrap();
        assert!(r.bijective && r.multiplicative && r.graded);
        assert!(!r.commutes);
        assert!(r.witness.unwrap().starts_with("c = "));
    }

    #[test]
    fn geq_b_with_normal_defect_group() {
        let cert = instance("s3-a3-p3", None).unwrap().certificate().unwrap();
        let r = verify_geq_b(&cert).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.per_j.len(), 2);
    }

    #[test]
    fn geq_b_for_s4_over_a4() {
        let cert = instance("s4-a4-p3", None).unwrap().certificate().unwrap();
        let r = verify_geq_b(&cert).unwrap();
        assert!(r.ok(), "{r:?}");
        let orders: Vec<usize> = r.per_j.iter().map(|j| j.order).collect();
        assert_eq!(orders, vec![12, 24]);
    }

    #[test]
    fn scrambled_blocks_fail_at_the_top() {
        let cert = instance("s3-a3-p5", None).unwrap().certificate().unwrap();
        let chi = order_two_character(cert.triple.gbar(), cert.triple.ell()).unwrap();
        let tw = character_twist(&cert.endo_prime, &chi);
        let r = verify_geq_b(&cert.then(&tw)).unwrap();
        assert!(r.geq_c.ok(), "{:?}", r.geq_c);
        assert!(r.per_j[0].ok);
        assert!(!r.per_j[1].ok);
        assert_eq!(r.per_j[1].order, 6);
        assert!(r.witness.unwrap().contains("Harris–Knörr"));
    }

    #[test]
    fn brauer_compatibility_of_witnesses() {
        for name in ["s3-a3-p3", "v4-c2-p2", "c6-c3-p3", "s4-a4-p3"] {
            let inst = instance(name, None).unwrap();
            for w in [Witness::Regular, Witness::Shift, Witness::Morita] {
                let x = inst.witness(w).unwrap();
                let r = brauer_compatibility_check(&x, &inst.ext, &inst.ext2, &inst.incl, &inst.defect, None, None)
                    .unwrap();
                assert!(r.ok, "{name} {w:?}: {r:?}");
            }
        }
    }

    #[test]
    fn character_twist_breaks_brauer_compatibility() {
        let inst = instance("c6-c3-p3", None).unwrap();
        let x = inst.witness(Witness::CharacterTwist).unwrap();
        let r = brauer_compatibility_check(&x, &inst.ext, &inst.ext2, &inst.incl, &inst.defect, None, None).unwrap();
        assert_eq!(r.cbar_dim, 2);
        assert!(!r.ok);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            /// Scaling `E_ḡ` by `c_ḡ` is an algebra map iff `ḡ ↦ c_ḡ` is a
            /// character; for `Ḡ = C2` over `GF(13)` that means `c_1 = 1`
            /// and `c_s = ±1`.
            #[test]
            fn geq_c_under_homogeneous_rescaling(c1 in 1u32..13, cs in 1u32..13) {
                let cert = instance("s3-a3-p5", None).unwrap().certificate().unwrap();
                let gbar = cert.triple.gbar();
                let mut scale = vec![cs; gbar.order()];
                scale[gbar.identity() as usize] = c1;
                let tw = character_twist(&cert.endo_prime, &scale);
                let r = verify_geq_c(&cert.then(&tw)).unwrap();
                let character = c1 == 1 && (cs * cs) % 13 == 1;
                prop_assert!(r.bijective && r.graded);
                prop_assert_eq!(r.ok(), character, "{:?}", r);
            }
        }
    }
}
