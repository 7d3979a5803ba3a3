//! Bundled groups and block instances used by the suites and the CLI.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::blocks::{group_algebra_blocks, principal_block_index};
use crate::algebra::group_algebra;
use crate::brauer::{brauer_on_group_algebra, Inclusion};
use crate::complexes::{Bimodule, Complex};
use crate::error::{Error, Result};
use crate::field::{Elem, Fq};
use crate::graded::BlockExtension;
use crate::groups::{FiniteGroup, GroupHom, GroupJson, Subgroup};
use crate::linalg::Mat;
use crate::triples::{build_triple, ModuleTriple, Reduction, TripleCertificate};

pub const SCHEMA: &str = "blockforge/1";

fn perm_sign(p: &[u32]) -> bool {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 0
}

/// Even permutations of a symmetric group, as a subgroup.
pub fn alternating_in(g: &FiniteGroup) -> Result<Subgroup> {
    let perms = g.perms().ok_or_else(|| Error::BadParams("not a permutation group".into()))?;
    let even: Vec<u32> = g.elements().filter(|&x| perm_sign(&perms[x as usize])).collect();
    g.subgroup(&even)
}

fn builtin_group(id: &str) -> Option<Result<FiniteGroup>> {
    let g = match id {
        "C2" => FiniteGroup::cyclic(2),
        "C3" => FiniteGroup::cyclic(3),
        "C4" => FiniteGroup::cyclic(4),
        "C6" => FiniteGroup::cyclic(6),
        "V4" => FiniteGroup::cyclic(2).and_then(|c| FiniteGroup::direct_product(&c, &c)),
        "S3" => FiniteGroup::symmetric(3),
        "S4" => FiniteGroup::symmetric(4),
        "A3" | "A4" => {
            let n = if id == "A3" { 3 } else { 4 };
            FiniteGroup::symmetric(n).and_then(|s| {
                let a = alternating_in(&s)?;
                Ok(Inclusion::of_subgroup(&s, &a)?.0)
            })
        }
        "C2wrS2" => FiniteGroup::cyclic(2).and_then(|c| Ok(crate::groups::wreath_group(&c, 2)?.group)),
        "S3wrS2" => FiniteGroup::symmetric(3).and_then(|s| Ok(crate::groups::wreath_group(&s, 2)?.group)),
        "1" => Ok(FiniteGroup::trivial()),
        _ => return None,
    };
    Some(g)
}

pub const BUILTIN_GROUPS: &[&str] = &["1", "C2", "C3", "C4", "C6", "V4", "S3", "A3", "S4", "A4", "C2wrS2", "S3wrS2"];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub group: GroupJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogFile {
    pub schema: String,
    pub groups: Vec<CatalogEntry>,
}

/// Reads an external catalog file.
pub fn load_catalog(path: &Path) -> Result<CatalogFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::SchemaError(format!("{}: {e}", path.display())))?;
    let cat: CatalogFile = serde_json::from_str(&text).map_err(|e| Error::SchemaError(e.to_string()))?;
    if cat.schema != SCHEMA {
        return Err(Error::SchemaError(format!("unsupported schema {:?}", cat.schema)));
    }
    Ok(cat)
}

/// Looks a group up, first in `extra` and then among the built-ins.
pub fn named_group(id: &str, extra: Option<&CatalogFile>) -> Result<FiniteGroup> {
    if let Some(c) = extra {
        if let Some(e) = c.groups.iter().find(|e| e.id == id) {
            return FiniteGroup::from_json(&e.group);
        }
    }
    builtin_group(id).unwrap_or_else(|| Err(Error::BadParams(format!("unknown group {id:?}"))))
}

/// The built-in groups as a catalog file.
pub fn builtin_catalog() -> Result<CatalogFile> {
    let groups = BUILTIN_GROUPS
        .iter()
        .map(|&id| Ok(CatalogEntry { id: id.to_string(), group: named_group(id, None)?.to_json() }))
        .collect::<Result<_>>()?;
    Ok(CatalogFile { schema: SCHEMA.to_string(), groups })
}

/// `G`, `N ⊴ G`, the field `k` and the principal block of `kN`; the local
/// side is `G′ = N_G(Q)`, `N′ = N_N(Q)` with `b′ = Br_Q(b)`, graded by the
/// same `Ḡ`; `V` and `V′` are the trivial modules over `ℓ`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: &'static str,
    pub summary: &'static str,
    pub ext: BlockExtension,
    pub ext2: BlockExtension,
    /// `G′ -> G`.
    pub incl: Inclusion,
    /// Defect group of `b` in `G`.
    pub defect: Subgroup,
    pub red: Reduction,
    /// `A′ -> A`, `g′ ↦ ι(g′)·b`, in algebra coordinates.
    pub psi: Mat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    /// `A` as an `(A, A′)`-bimodule through `ψ`.
    Regular,
    /// The regular witness in degree 1.
    Shift,
    /// `ψ` followed by conjugation with a homogeneous unit of `A′`.
    Morita,
    /// `M -> M ⊕ M`, `x ↦ (0, x)` in degrees 1 and 0 for the regular
    /// witness `M`; homotopy equivalent to `M`.
    TwoTerm,
    /// `ψ` followed by `g′ ↦ χ(ḡ)g′` for a nontrivial linear character
    /// `χ` of `Ḡ` of order 2.
    CharacterTwist,
}

impl Witness {
    pub fn parse(s: &str) -> Result<Witness> {
        match s {
            "regular" => Ok(Witness::Regular),
            "shift" => Ok(Witness::Shift),
            "morita" => Ok(Witness::Morita),
            "two-term" => Ok(Witness::TwoTerm),
            "twist" => Ok(Witness::CharacterTwist),
            _ => Err(Error::BadParams(format!("unknown witness {s:?}"))),
        }
    }
}

pub const INSTANCES: &[(&str, &str)] = &[
    ("s3-a3-p3", "S3 over A3, p = 3, k = GF(9), Q = C3 normal"),
    ("v4-c2-p2", "V4 over C2, p = 2, k = GF(2), Q = C2 normal"),
    ("s3-gf4-principal", "S3 over A3, p = 2, k = GF(4), principal block of kA3, Q = 1"),
    ("s4-a4-p3", "S4 over A4, p = 3, k = GF(9), principal block, Q = C3, G′ = S3"),
    ("c6-c3-p3", "C6 over C3, p = 3, k = GF(9), Q = C3 normal"),
    ("s3-a3-p5", "S3 over A3, p = 5, k = GF(25), principal block, Q = 1"),
];

fn principal_block(g: &FiniteGroup, n: &Subgroup, k: &Fq) -> Result<Vec<Elem>> {
    let (ng, incl) = Inclusion::of_subgroup(g, n)?;
    let kn = group_algebra(&ng, k)?;
    let cb = group_algebra_blocks(&ng, &kn)?;
    let i = principal_block_index(&cb).ok_or_else(|| Error::CheckFailed("no principal block".into()))?;
    let mut b = vec![0; g.order()];
    for (x, &c) in cb.blocks[i].idempotent.iter().enumerate() {
        b[incl.index[x] as usize] = c;
    }
    Ok(b)
}

fn setup(
    name: &'static str,
    summary: &'static str,
    g: FiniteGroup,
    n: Subgroup,
    q: Subgroup,
    k: Fq,
    ell: u32,
) -> Result<Instance> {
    let b = principal_block(&g, &n, &k)?;
    let ext = BlockExtension::from_quotient(&g, &n, &k, b.clone())?;
    let (nq, _) = g.normalizer_centralizer(&q)?;
    let (g2, incl) = Inclusion::of_subgroup(&g, &nq)?;
    let n2: Vec<u32> = g2.elements().filter(|&x| n.contains(incl.index[x as usize])).collect();
    let n2 = g2.subgroup(&n2)?;
    let proj2 = GroupHom { images: incl.index.iter().map(|&x| ext.proj.apply(x)).collect() };
    let br = brauer_on_group_algebra(&g, &q, &b)?;
    let b2: Vec<Elem> = incl.index.iter().map(|&x| br[x as usize]).collect();
    let ext2 = BlockExtension::new(&g2, &n2, &ext.gbar, &proj2, &k, b2)?;
    let cols = (0..ext2.algebra.dim())
        .map(|j| {
            let amb = ext2.to_ambient(&ext2.algebra.alg.basis(j));
            let mut up = vec![0; g.order()];
            for (x, &c) in amb.iter().enumerate() {
                up[incl.index[x] as usize] = c;
            }
            ext.from_ambient(&ext.kg.mul(&up, &ext.idempotent))
                .ok_or_else(|| Error::CheckFailed("ι(g′)·b leaves b·kG".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let psi = Mat::from_cols(&k, ext.algebra.dim(), &cols);
    let ellf = Fq::prime(ell)?;
    let e = g.exponent() as u32;
    let red = Reduction::candidates(&ellf, &k, e)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::BadParams("no reduction datum".into()))?;
    Ok(Instance { name, summary, ext, ext2, incl, defect: q, red, psi })
}

/// Builds a named instance. `ell` overrides the default prime for `ℓ`.
pub fn instance(name: &str, ell: Option<u32>) -> Result<Instance> {
    let s3 = || FiniteGroup::symmetric(3);
    match name {
        "s3-a3-p3" => {
            let g = s3()?;
            let n = alternating_in(&g)?;
            setup("s3-a3-p3", INSTANCES[0].1, g, n.clone(), n, Fq::new(3, 2)?, ell.unwrap_or(13))
        }
        "v4-c2-p2" => {
            let g = named_group("V4", None)?;
            let n = g.generated(&[2]);
            setup("v4-c2-p2", INSTANCES[1].1, g, n.clone(), n, Fq::prime(2)?, ell.unwrap_or(5))
        }
        "s3-gf4-principal" => {
            let g = s3()?;
            let n = alternating_in(&g)?;
            let q = g.trivial_subgroup();
            setup("s3-gf4-principal", INSTANCES[2].1, g, n, q, Fq::new(2, 2)?, ell.unwrap_or(13))
        }
        "s4-a4-p3" => {
            let g = FiniteGroup::symmetric(4)?;
            let n = alternating_in(&g)?;
            let c = g.find_perm(&[1, 2, 0, 3]).unwrap();
            let q = g.generated(&[c]);
            setup("s4-a4-p3", INSTANCES[3].1, g, n, q, Fq::new(3, 2)?, ell.unwrap_or(13))
        }
        "c6-c3-p3" => {
            let g = FiniteGroup::cyclic(6)?;
            let n = g.generated(&[2]);
            setup("c6-c3-p3", INSTANCES[4].1, g, n.clone(), n, Fq::new(3, 2)?, ell.unwrap_or(13))
        }
        "s3-a3-p5" => {
            let g = s3()?;
            let n = alternating_in(&g)?;
            let q = g.trivial_subgroup();
            setup("s3-a3-p5", INSTANCES[5].1, g, n, q, Fq::new(5, 2)?, ell.unwrap_or(13))
        }
        _ => Err(Error::BadParams(format!("unknown instance {name:?}"))),
    }
}

/// A generating set of `s`, chosen greedily.
pub fn subgroup_generators(g: &FiniteGroup, s: &Subgroup) -> Vec<u32> {
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

/// The trivial module of `N` as a triple over `ext`, with the first
/// reduction datum that places it in `b`.
pub fn trivial_triple(ext: &BlockExtension, red: &Reduction) -> Result<ModuleTriple> {
    let gens: Vec<(u32, Mat)> =
        subgroup_generators(&ext.group, &ext.normal).into_iter().map(|x| (x, Mat::identity(&red.ell, 1))).collect();
    let mut last = None;
    for r in Reduction::candidates(&red.ell, &red.k, red.e)? {
        let r = if r.xi == red.xi { red.clone() } else { r };
        match build_triple(ext.clone(), &r, &gens) {
            Ok(t) => return Ok(t),
            Err(Error::SetupMismatch(m)) => last = Some(m),
            Err(e) => return Err(e),
        }
    }
    Err(Error::SetupMismatch(last.unwrap_or_else(|| "no reduction datum".into())))
}

impl Instance {
    pub fn field(&self) -> &Fq {
        self.ext.field()
    }

    pub fn triples(&self) -> Result<(ModuleTriple, ModuleTriple)> {
        let t = trivial_triple(&self.ext, &self.red)?;
        let t2 = build_triple(
            self.ext2.clone(),
            &t.red,
            &subgroup_generators(&self.ext2.group, &self.ext2.normal)
                .into_iter()
                .map(|x| (x, Mat::identity(&t.red.ell, 1)))
                .collect::<Vec<_>>(),
        )?;
        Ok((t, t2))
    }

    /// `≥` certificate obtained by restriction along `G′ ≤ G`.
    pub fn certificate(&self) -> Result<TripleCertificate> {
        let (t, t2) = self.triples()?;
        TripleCertificate::by_restriction(t, t2, self.incl.clone(), Some(self.defect.clone()))
    }

    /// `ψ` composed with an automorphism of `A′` given on `A′` coordinates.
    fn twisted(&self, auto: &Mat) -> Result<Complex> {
        let a = &self.ext.algebra;
        let a2 = &self.ext2.algebra;
        let m = Bimodule::twisted(&a.alg, &a2.alg, &self.psi.mul(auto))?.with_grading(a.grading.clone())?;
        Ok(Complex::concentrated(m, 0))
    }

    pub fn witness(&self, w: Witness) -> Result<Complex> {
        let a2 = &self.ext2.algebra;
        let f = self.field();
        let d = a2.dim();
        let gbar = &self.ext.gbar;
        match w {
            Witness::Regular => self.twisted(&Mat::identity(f, d)),
            Witness::Shift => Ok(self.twisted(&Mat::identity(f, d))?.shift(1)),
            Witness::TwoTerm => {
                let m = self.twisted(&Mat::identity(f, d))?.term(0);
                let k = m.dim();
                let inject = Mat::zeros(f, k, k).vstack(&Mat::identity(f, k));
                Complex::new(0, vec![Bimodule::direct_sum(&[&m, &m])?, m], vec![inject])
            }
            Witness::Morita => {
                let central: Vec<u32> = gbar
                    .elements()
                    .filter(|&x| x != gbar.identity() && gbar.elements().all(|y| gbar.mul(x, y) == gbar.mul(y, x)))
                    .collect();
                let Some(&g) = central.last() else {
                    return self.twisted(&Mat::identity(f, d));
                };
                let u = self.ext2.element(self.ext2.coset_reps[g as usize]);
                let ui = self.ext2.element(self.ext2.group.inv(self.ext2.coset_reps[g as usize]));
                let cols: Vec<Vec<Elem>> = (0..d).map(|j| a2.alg.mul(&a2.alg.mul(&u, &a2.alg.basis(j)), &ui)).collect();
                self.twisted(&Mat::from_cols(f, d, &cols))
            }
            Witness::CharacterTwist => {
                let chi = order_two_character(gbar, f)
                    .ok_or_else(|| Error::BadParams("Ḡ has no character of order 2 over k".into()))?;
                let mut m = Mat::zeros(f, d, d);
                for (i, &g) in a2.grading.degrees().iter().enumerate() {
                    m.set(i, i, chi[g as usize]);
                }
                self.twisted(&m)
            }
        }
    }
}

/// A homomorphism `Ḡ -> {±1} ⊆ k*` that is not trivial, if one exists and
/// `char k ≠ 2`.
pub fn order_two_character(g: &FiniteGroup, f: &Fq) -> Option<Vec<Elem>> {
    if f.p() == 2 {
        return None;
    }
    let minus = f.neg(f.one());
    for h in g.all_subgroups() {
        if h.order() * 2 != g.order() || !g.is_normal(&h) {
            continue;
        }
        return Some(g.elements().map(|x| if h.contains(x) { f.one() } else { minus }).collect());
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_groups_have_expected_orders() {
        let orders = [1, 2, 3, 4, 6, 4, 6, 3, 24, 12, 8, 72];
        for (id, n) in BUILTIN_GROUPS.iter().zip(orders) {
            assert_eq!(named_group(id, None).unwrap().order(), n, "{id}");
        }
        assert_eq!(named_group("S3", None).unwrap().conjugacy_classes().len(), 3);
        assert!(named_group("Q8", None).is_err());
    }

    #[test]
    fn all_instances_build() {
        for (name, _) in INSTANCES {
            let inst = instance(name, None).unwrap();
            let (t, t2) = inst.triples().unwrap();
            assert_eq!(t.gbar().order(), t2.gbar().order(), "{name}");
        }
    }

    #[test]
    fn s4_local_side_is_s3_over_c3() {
        let inst = instance("s4-a4-p3", None).unwrap();
        assert_eq!(inst.ext2.group.order(), 6);
        assert_eq!(inst.ext2.normal.order(), 3);
        // b = sum of V4 over GF(9), b′ = 1
        assert_eq!(inst.ext.algebra.dim(), 6);
        assert_eq!(inst.ext2.algebra.dim(), 6);
        assert!(inst.psi.is_invertible());
    }
}
