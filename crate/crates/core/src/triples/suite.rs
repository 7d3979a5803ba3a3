use crate::algebra::kron_vec;
use crate::brauer::Inclusion;
use crate::catalog::{subgroup_generators, Instance};
use crate::complexes::{induced_cbar_iso, Complex};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::graded::{BlockExtension, CBar, GradedAlgebra};
use crate::groups::{tuple_from_index, tuple_to_index, wreath_group, FiniteGroup, GroupHom, Subgroup, WreathGroup};
use crate::linalg::Mat;
use crate::report::Check;
use crate::wreath::{power_complex, wreath_complex, wreath_graded, WreathAlgebra};

use super::module::{build_triple, ModuleTriple};
use super::relations::{brauer_compatibility_check, transport_cbar, verify_geq_b, verify_geq_c, TripleCertificate};

/// `b^{⊗n}·k(G≀Sₙ)` graded by `Ḡ≀Sₙ` through `((g), σ) ↦ ((ḡ), σ)`.
pub fn wreath_extension(ext: &BlockExtension, n: usize, gbar_w: &WreathGroup) -> Result<(BlockExtension, WreathGroup)> {
    let wg = wreath_group(&ext.group, n)?;
    let (m, mb) = (ext.group.order(), ext.gbar.order());
    let id = wg.sym.identity() as usize;
    let images = wg
        .group
        .elements()
        .map(|x| {
            let (t, s) = wg.split(x);
            let tb: Vec<usize> = tuple_from_index(t, m, n).iter().map(|&g| ext.proj.apply(g as u32) as usize).collect();
            gbar_w.index(tuple_to_index(&tb, mb), s)
        })
        .collect();
    let normal: Vec<u32> =
        power_tuples(ext.normal.elements(), n).into_iter().map(|t| wg.index(tuple_to_index(&t, m), id)).collect();
    let normal = wg.group.subgroup(&normal)?;
    let b = power_vec(ext, n);
    let mut bw = vec![0; wg.group.order()];
    for (t, &c) in b.iter().enumerate() {
        bw[wg.index(t, id) as usize] = c;
    }
    let w = BlockExtension::new(&wg.group, &normal, &gbar_w.group, &GroupHom { images }, ext.field(), bw)?;
    Ok((w, wg))
}

/// `b^{⊗n}·kGⁿ` graded by `Ḡⁿ`.
pub fn power_extension(ext: &BlockExtension, n: usize, gbar_n: &FiniteGroup) -> Result<BlockExtension> {
    let gn = FiniteGroup::direct_power(&ext.group, n)?;
    let (m, mb) = (ext.group.order(), ext.gbar.order());
    let images = gn
        .elements()
        .map(|x| {
            let tb: Vec<usize> =
                tuple_from_index(x as usize, m, n).iter().map(|&g| ext.proj.apply(g as u32) as usize).collect();
            tuple_to_index(&tb, mb) as u32
        })
        .collect();
    let normal: Vec<u32> =
        power_tuples(ext.normal.elements(), n).into_iter().map(|t| tuple_to_index(&t, m) as u32).collect();
    let normal = gn.subgroup(&normal)?;
    BlockExtension::new(&gn, &normal, gbar_n, &GroupHom { images }, ext.field(), power_vec(ext, n))
}

fn power_tuples(elems: &[u32], n: usize) -> Vec<Vec<usize>> {
    (0..elems.len().pow(n as u32))
        .map(|i| tuple_from_index(i, elems.len(), n).iter().map(|&j| elems[j] as usize).collect())
        .collect()
}

fn power_vec(ext: &BlockExtension, n: usize) -> Vec<Elem> {
    let f = ext.field();
    (1..n).fold(ext.idempotent.clone(), |acc, _| kron_vec(f, &acc, &ext.idempotent))
}

/// Group-basis vector of a pure tensor of `A`-basis elements.
fn ambient_tensor(ext: &BlockExtension, t: &[usize]) -> Vec<Elem> {
    let f = ext.field();
    let a = &ext.algebra.alg;
    t.iter().skip(1).fold(ext.to_ambient(&a.basis(t[0])), |acc, &i| kron_vec(f, &acc, &ext.to_ambient(&a.basis(i))))
}

/// `A^{⊗n} -> b^{⊗n}kGⁿ` in algebra coordinates.
pub fn power_embedding(ext: &BlockExtension, ext_n: &BlockExtension, n: usize) -> Result<Mat> {
    let d = ext.algebra.dim();
    let cols = (0..d.pow(n as u32))
        .map(|i| {
            ext_n
                .from_ambient(&ambient_tensor(ext, &tuple_from_index(i, d, n)))
                .ok_or_else(|| Error::CheckFailed("tensor leaves b^{⊗n}kGⁿ".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Mat::from_cols(ext.field(), ext_n.algebra.dim(), &cols))
}

/// `A≀Sₙ -> b^{⊗n}k(G≀Sₙ)`, `(a_1⊗…⊗a_n)⊗σ ↦ (a_1,…,a_n)σ`.
pub fn wreath_embedding(
    ext: &BlockExtension,
    w: &WreathAlgebra,
    ext_w: &BlockExtension,
    wg: &WreathGroup,
) -> Result<Mat> {
    let cols = (0..w.algebra.dim())
        .map(|i| {
            let (t, s) = w.split(i);
            let amb = ambient_tensor(ext, &t);
            let mut v = vec![0; wg.group.order()];
            for (x, &c) in amb.iter().enumerate() {
                v[wg.index(x, s as usize) as usize] = c;
            }
            ext_w.from_ambient(&v).ok_or_else(|| Error::CheckFailed("image leaves b^{⊗n}k(G≀Sₙ)".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Mat::from_cols(ext.field(), ext_w.algebra.dim(), &cols))
}

/// Checks that `psi: A -> A₂` is a bijective, multiplicative map sending
/// each homogeneous basis element to the component of the same degree.
pub fn check_graded_iso(a: &GradedAlgebra, a2: &GradedAlgebra, psi: &Mat) -> Option<String> {
    if !psi.is_invertible() {
        return Some("map is not bijective".into());
    }
    if psi.apply(a.alg.unit()) != a2.alg.unit() {
        return Some("unit is not preserved".into());
    }
    for i in 0..a.dim() {
        let x = psi.col(i);
        if a2.grading.degree(&x) != Some(a.grading.degrees()[i]) {
            return Some(format!("basis element {} changes degree", a.alg.labels()[i]));
        }
        for j in 0..a.dim() {
            if psi.apply(&a.alg.mul_basis(i, j)) != a2.alg.mul(&x, &psi.col(j)) {
                return Some(format!("not multiplicative on ({}, {})", a.alg.labels()[i], a.alg.labels()[j]));
            }
        }
    }
    None
}

/// `V^{⊗n}` over `Nⁿ ≤ G≀Sₙ`.
fn power_triple(t: &ModuleTriple, ext_w: BlockExtension, wg: &WreathGroup, n: usize) -> Result<ModuleTriple> {
    let red = t.red.extend(wg.group.exponent() as u32)?;
    let m = t.ext.group.order();
    let id = wg.sym.identity() as usize;
    let one = t.ext.group.identity() as usize;
    let d = t.v_dim();
    let mut gens = Vec::new();
    for q in 0..n {
        for x in subgroup_generators(&t.ext.group, &t.ext.normal) {
            let mut tup = vec![one; n];
            tup[q] = x as usize;
            let mat = (0..n).fold(Mat::identity(&red.ell, 1), |acc, r| {
                acc.kron(&if r == q { t.rho(x).clone() } else { Mat::identity(&red.ell, d) })
            });
            gens.push((wg.index(tuple_to_index(&tup, m), id), mat));
        }
    }
    build_triple(ext_w, &red, &gens)
}

fn stage<T>(checks: &mut Vec<Check>, name: &str, r: Result<(bool, Option<String>, T)>) -> Option<T> {
    match r {
        Ok((ok, w, v)) => {
            checks.push(Check::new(name, ok, w));
            ok.then_some(v)
        }
        Err(e) => {
            checks.push(Check::from_error(name, &e));
            None
        }
    }
}

/// Everything built for the wreath side of an instance.
struct WreathSide {
    w: WreathAlgebra,
    w2: WreathAlgebra,
    ext_w: BlockExtension,
    ext2_w: BlockExtension,
    psi: Mat,
    psi2: Mat,
    incl_w: Inclusion,
    q_n: Subgroup,
}

fn stage_setup(inst: &Instance, n: usize) -> Result<(bool, Option<String>, WreathSide)> {
    let gbar_w = wreath_group(&inst.ext.gbar, n)?;
    let (ext_w, wg) = wreath_extension(&inst.ext, n, &gbar_w)?;
    let (ext2_w, wg2) = wreath_extension(&inst.ext2, n, &gbar_w)?;
    let w = wreath_graded(&inst.ext.algebra, n)?;
    let w2 = wreath_graded(&inst.ext2.algebra, n)?;
    let psi = wreath_embedding(&inst.ext, &w, &ext_w, &wg)?;
    let psi2 = wreath_embedding(&inst.ext2, &w2, &ext2_w, &wg2)?;
    let witness =
        check_graded_iso(w.graded.as_ref().unwrap(), &ext_w.algebra, &psi).map(|s| format!("A≀Sₙ: {s}")).or_else(
            || check_graded_iso(w2.graded.as_ref().unwrap(), &ext2_w.algebra, &psi2).map(|s| format!("A′≀Sₙ: {s}")),
        );
    let incl_w = inst.incl.wreath(inst.ext2.group.order(), inst.ext.group.order(), n);
    let m = inst.ext.group.order();
    let id = wg.sym.identity() as usize;
    let q_n = power_tuples(inst.defect.elements(), n)
        .into_iter()
        .map(|t| wg.index(tuple_to_index(&t, m), id))
        .collect::<Vec<_>>();
    let q_n = wg.group.subgroup(&q_n)?;
    let mut covered: Vec<u32> = incl_w
        .index
        .iter()
        .flat_map(|&x| ext_w.normal.elements().iter().map(move |&y| (x, y)))
        .map(|(x, y)| wg.group.mul(x, y))
        .collect();
    covered.sort_unstable();
    covered.dedup();
    let witness = witness.or_else(|| (covered.len() != wg.group.order()).then(|| "G≀Sₙ ≠ (G′≀Sₙ)Nⁿ".to_string()));
    Ok((witness.is_none(), witness, WreathSide { w, w2, ext_w, ext2_w, psi, psi2, incl_w, q_n }))
}

/// Which stages of [`wreath_triple_suite`] to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WreathScope {
    /// Setup and `≥c` for the wreath triples (i, ii).
    GeqC,
    /// Setup and Brauer compatibility of `X≀Sₙ` (i, iii, iv, v).
    Block,
    /// All six stages.
    Full,
}

/// Runs the stages in `scope` for an instance and witness complex `x` over
/// `(A, A′)`, stopping at the first failure.
pub fn wreath_triple_suite(inst: &Instance, x: &Complex, n: usize, scope: WreathScope) -> Result<Vec<Check>> {
    if !(1..=3).contains(&n) {
        return Err(Error::BadParams("n must be 1, 2 or 3".into()));
    }
    let mut checks = Vec::new();
    let Some(side) = stage(&mut checks, "i: wreath setup", stage_setup(inst, n)) else {
        return Ok(checks);
    };
    let mut cert = None;
    if scope != WreathScope::Block {
        let (t, t2) = inst.triples()?;
        let wreath_cert = || -> Result<TripleCertificate> {
            let wg = wreath_group(&inst.ext.group, n)?;
            let wg2 = wreath_group(&inst.ext2.group, n)?;
            let tw = power_triple(&t, side.ext_w.clone(), &wg, n)?;
            let tw2 = power_triple(&t2, side.ext2_w.clone(), &wg2, n)?;
            TripleCertificate::by_restriction(tw, tw2, side.incl_w.clone(), Some(side.q_n.clone()))
        };
        let r = wreath_cert().and_then(|c| {
            let r = verify_geq_c(&c)?;
            Ok((r.ok(), r.witness.clone(), c))
        });
        cert = stage(&mut checks, "ii: ≥c for the wreath triples", r);
        if cert.is_none() || scope == WreathScope::GeqC {
            return Ok(checks);
        }
    }
    let wa = side.w.graded.as_ref().unwrap();
    let r = (|| {
        let cw = CBar::new(wa)?;
        let wgbar = side.w.group.as_ref().unwrap();
        let outside: Vec<u32> =
            cw.dade.elements().iter().copied().filter(|&x| wgbar.split(x).1 != wgbar.sym.identity() as usize).collect();
        if let Some(&x) = outside.first() {
            return Ok((false, Some(format!("{} lies in (Ḡ≀Sₙ)[b^⊗n] but not in Ḡⁿ", wgbar.group.label(x))), ()));
        }
        let an = inst.ext.algebra.tensor_power(n)?;
        let cn = CBar::new(&an)?;
        let m = transport_cbar(&cn, &cw, &side.w.base_embedding())?;
        let ok = m.is_invertible();
        Ok((ok, (!ok).then(|| format!("C̄ of A^⊗n has dimension {}, C̄ of A≀Sₙ has {}", m.cols(), m.rows())), ()))
    })();
    if stage(&mut checks, "iii: Dade group and C̄ of the wreath product", r).is_none() {
        return Ok(checks);
    }
    let r = stage_squares(inst, x, n);
    if stage(&mut checks, "iv: tensor-power squares", r).is_none() {
        return Ok(checks);
    }
    let r = (|| {
        let xw = wreath_complex(x, &side.w, &side.w2)?.complex;
        let rep = brauer_compatibility_check(
            &xw,
            &side.ext_w,
            &side.ext2_w,
            &side.incl_w,
            &side.q_n,
            Some((wa, &side.psi)),
            Some((side.w2.graded.as_ref().unwrap(), &side.psi2)),
        )?;
        Ok((rep.ok, (!rep.ok).then(|| "φ of X≀Sₙ differs from the Dade map".to_string()), ()))
    })();
    if stage(&mut checks, "v: Brauer compatibility of X≀Sₙ", r).is_none() {
        return Ok(checks);
    }
    if let Some(cert) = cert {
        let r = verify_geq_b(&cert).map(|r| (r.ok(), r.witness.clone(), ()));
        stage(&mut checks, "vi: ≥b for the wreath triples", r);
    }
    Ok(checks)
}

/// `κ: C̄^{⊗n} -> C̄_{A^{⊗n}}`, tensoring canonical lifts.
fn kappa(c: &CBar, cn: &CBar, n: usize) -> Result<Mat> {
    let f = c.quotient.field();
    let k = c.quotient.dim();
    let cols = (0..k.pow(n as u32))
        .map(|i| {
            let t = tuple_from_index(i, k, n);
            let v = t.iter().skip(1).fold(c.lift(t[0]), |acc, &j| kron_vec(f, &acc, &c.lift(j)));
            cn.class_of(&v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Mat::from_cols(f, cn.quotient.dim(), &cols))
}

fn kron_power(m: &Mat, n: usize) -> Mat {
    (1..n).fold(m.clone(), |acc, _| acc.kron(m))
}

fn stage_squares(inst: &Instance, x: &Complex, n: usize) -> Result<(bool, Option<String>, ())> {
    let a = &inst.ext.algebra;
    let a2 = &inst.ext2.algebra;
    let base = brauer_compatibility_check(x, &inst.ext, &inst.ext2, &inst.incl, &inst.defect, None, None)?;
    let f = inst.field();
    let phi = Mat::from_rows(f, base.cbar_dim, &base.phi);
    let dade = Mat::from_rows(f, base.cbar_dim, &base.dade);
    let an = a.tensor_power(n)?;
    let an2 = a2.tensor_power(n)?;
    let (xn, _) = power_complex(x, n, &an.alg, &an2.alg)?;
    let ext_n = power_extension(&inst.ext, n, an.group())?;
    let ext2_n = power_extension(&inst.ext2, n, an2.group())?;
    let psi = power_embedding(&inst.ext, &ext_n, n)?;
    let psi2 = power_embedding(&inst.ext2, &ext2_n, n)?;
    if let Some(w) =
        check_graded_iso(&an, &ext_n.algebra, &psi).or_else(|| check_graded_iso(&an2, &ext2_n.algebra, &psi2))
    {
        return Ok((false, Some(format!("A^⊗n ≅ b^⊗n kGⁿ: {w}")), ()));
    }
    let m = inst.ext.group.order();
    let incl_n = Inclusion {
        index: (0..inst.ext2.group.order().pow(n as u32))
            .map(|i| {
                let t: Vec<usize> = tuple_from_index(i, inst.ext2.group.order(), n)
                    .iter()
                    .map(|&h| inst.incl.index[h] as usize)
                    .collect();
                tuple_to_index(&t, m) as u32
            })
            .collect(),
    };
    let q_n: Vec<u32> =
        power_tuples(inst.defect.elements(), n).into_iter().map(|t| tuple_to_index(&t, m) as u32).collect();
    let q_n = ext_n.group.subgroup(&q_n)?;
    let rep = brauer_compatibility_check(&xn, &ext_n, &ext2_n, &incl_n, &q_n, Some((&an, &psi)), Some((&an2, &psi2)))?;
    let phi_n = Mat::from_rows(f, rep.phi.first().map_or(0, |r| r.len()), &rep.phi);
    let dade_n = Mat::from_rows(f, rep.dade.first().map_or(0, |r| r.len()), &rep.dade);
    let src = induced_cbar_iso(x, a, a2)?;
    let srcn = induced_cbar_iso(&xn, &an, &an2)?;
    let kap = kappa(&src.source, &srcn.source, n)?;
    let kap2 = kappa(&src.target, &srcn.target, n)?;
    if !kap.is_invertible() || !kap2.is_invertible() {
        return Ok((false, Some("κ is not an isomorphism".into()), ()));
    }
    if phi_n.mul(&kap) != kap2.mul(&kron_power(&phi, n)) {
        return Ok((false, Some("φ_{X^⊗n} κ ≠ κ′ φ_X^⊗n".into()), ()));
    }
    if dade_n.mul(&kap) != kap2.mul(&kron_power(&dade, n)) {
        return Ok((false, Some("Br_{Qⁿ} κ ≠ κ′ Br_Q^⊗n".into()), ()));
    }
    Ok((true, None, ()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{instance, Witness};

    fn run(name: &str, w: Witness) -> Vec<Check> {
        let inst = instance(name, None).unwrap();
        let x = inst.witness(w).unwrap();
        wreath_triple_suite(&inst, &x, 2, WreathScope::Full).unwrap()
    }

    #[test]
    fn v4_over_c2_passes_every_stage() {
        let checks = run("v4-c2-p2", Witness::Regular);
        assert_eq!(checks.len(), 6, "{checks:?}");
        assert!(checks.iter().all(|c| c.ok), "{checks:?}");
    }

    #[test]
    fn s3_over_a3_passes_every_stage() {
        let checks = run("s3-a3-p3", Witness::Morita);
        assert_eq!(checks.len(), 6, "{checks:?}");
        assert!(checks.iter().all(|c| c.ok), "{checks:?}");
    }

    #[test]
    fn principal_block_with_trivial_defect_fails_containment() {
        let checks = run("s3-gf4-principal", Witness::Regular);
        let last = checks.last().unwrap();
        assert!(!last.ok);
        assert!(last.name.starts_with("iii"), "{checks:?}");
        assert!(last.witness.as_ref().unwrap().contains("not in Ḡⁿ"));
    }

    #[test]
    fn scopes_select_stages() {
        let inst = instance("v4-c2-p2", None).unwrap();
        let x = inst.witness(Witness::Shift).unwrap();
        let names = |s| wreath_triple_suite(&inst, &x, 2, s).unwrap().into_iter().map(|c| c.name).collect::<Vec<_>>();
        assert_eq!(names(WreathScope::GeqC).len(), 2);
        let block = names(WreathScope::Block);
        assert_eq!(block.len(), 4);
        assert!(block.iter().all(|n| !n.starts_with("ii:") && !n.starts_with("vi:")));
    }

    #[test]
    fn n_out_of_range_is_rejected() {
        let inst = instance("v4-c2-p2", None).unwrap();
        let x = inst.witness(Witness::Regular).unwrap();
        assert!(matches!(wreath_triple_suite(&inst, &x, 0, WreathScope::Full), Err(Error::BadParams(_))));
    }
}
