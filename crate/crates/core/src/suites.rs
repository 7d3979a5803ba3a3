//! Named verification suites. Each returns one [`Check`] per verified
//! statement; mathematical failures become failing checks with a witness,
//! while malformed parameters are returned as errors.

mod local;
mod run;
mod wreath;

pub use local::{geq_b_suite, geq_c_suite, harris_knorr_suite, wreath_relation_suite};
pub use run::{certify, run_checks, run_suite, subgroup_spec, SuiteSpec};
pub use wreath::{
    instance_witnesses, regular_witnesses, wreath_crossed_suite, wreath_derived_suite, wreath_morita_suite,
};

use crate::algebra::{centralizer_tensor_check, tensor_subspace, StructAlgebra};
use crate::brauer::{tensor_brauer_diagram_check, ActedAlgebra};
use crate::catalog::{named_group, CatalogFile};
use crate::error::{Error, Result};
use crate::field::Fq;
use crate::graded::{BlockExtension, GradedAlgebra};
use crate::groups::{FiniteGroup, Subgroup};
use crate::linalg::{vec_ops, Mat, Subspace};
use crate::report::Check;

pub const SUITES: &[&str] = &[
    "radical-tensor",
    "centralizer-tensor",
    "brauer-diagram",
    "wreath-crossed",
    "wreath-morita",
    "wreath-derived",
    "harris-knorr",
    "geq-c",
    "geq-c-wreath",
    "geq-b",
    "block-wreath",
    "geq-b-wreath",
];

/// A graded algebra with a display name.
#[derive(Debug, Clone)]
pub struct Named {
    pub name: String,
    pub alg: GradedAlgebra,
}

/// Runs `body` as one check: `Ok(None)` passes, `Ok(Some(w))` fails with
/// witness `w`, and an error fails with the error text.
pub fn check(name: impl Into<String>, body: impl FnOnce() -> Result<Option<String>>) -> Check {
    let name = name.into();
    match body() {
        Ok(w) => Check::new(name, w.is_none(), w),
        Err(e) => Check::from_error(name, &e),
    }
}

/// The normal subgroup of `g` isomorphic to the catalog group `id`, or the
/// trivial subgroup for `"1"`.
pub fn normal_subgroup_named(g: &FiniteGroup, id: &str, extra: Option<&CatalogFile>) -> Result<Subgroup> {
    let h = named_group(id, extra)?;
    g.all_subgroups()
        .into_iter()
        .filter(|s| s.order() == h.order() && g.is_normal(s))
        .find(|s| crate::brauer::Inclusion::of_subgroup(g, s).map(|(sg, _)| sg.is_isomorphic(&h)).unwrap_or(false))
        .ok_or_else(|| Error::BadParams(format!("no normal subgroup isomorphic to {id}")))
}

/// Parses `G:N,G′:N′,…` into `kG` graded by `G/N`.
pub fn parse_group_pairs(spec: &str, f: &Fq, extra: Option<&CatalogFile>) -> Result<Vec<Named>> {
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (gid, nid) =
                item.trim().split_once(':').ok_or_else(|| Error::BadParams(format!("expected G:N, got {item:?}")))?;
            let g = named_group(gid, extra)?;
            let n = normal_subgroup_named(&g, nid, extra)?;
            Ok(Named { name: format!("k{gid} over {gid}/{nid}"), alg: group_algebra_graded(&g, &n, f)? })
        })
        .collect()
}

/// `kG` graded by `G/N`.
pub fn group_algebra_graded(g: &FiniteGroup, n: &Subgroup, f: &Fq) -> Result<GradedAlgebra> {
    let one = vec_ops::unit(g.order(), g.identity() as usize);
    Ok(BlockExtension::from_quotient(g, n, f, one)?.algebra)
}

fn quotient_of(a: &StructAlgebra, j: &Subspace) -> Result<(StructAlgebra, Mat)> {
    if j.is_zero() {
        Ok((a.clone(), Mat::identity(a.field(), a.dim())))
    } else {
        a.quotient(j)
    }
}

/// Checks that `x_1⊗…⊗x_n ↦ π_1(x_1)⊗…⊗π_n(x_n)` induces an algebra
/// isomorphism `T/J -> A_1/J_1 ⊗ … ⊗ A_n/J_n`.
fn quotient_iso(t: &StructAlgebra, j: &Subspace, factors: &[(&StructAlgebra, &Subspace)]) -> Result<Option<String>> {
    let f = t.field();
    let (q, _) = quotient_of(t, j)?;
    let mut parts = Vec::new();
    for (a, ja) in factors {
        parts.push(quotient_of(a, ja)?);
    }
    let proj = parts.iter().skip(1).fold(parts[0].1.clone(), |acc, p| acc.kron(&p.1));
    let target = parts.iter().skip(1).try_fold(parts[0].0.clone(), |acc, p| acc.tensor(&p.0))?;
    if target.dim() != q.dim() {
        return Ok(Some(format!("dim A/J_gr = {} but the tensor of quotients has dim {}", q.dim(), target.dim())));
    }
    let reps = if j.is_zero() { (0..t.dim()).collect() } else { j.complement_indices() };
    let cols: Vec<Vec<_>> = reps.iter().map(|&r| proj.apply(&t.basis(r))).collect();
    let theta = Mat::from_cols(f, target.dim(), &cols);
    if !theta.is_invertible() {
        return Ok(Some("induced map on quotients is not bijective".into()));
    }
    if theta.apply(q.unit()) != target.unit() {
        return Ok(Some("induced map on quotients is not unital".into()));
    }
    for x in 0..q.dim() {
        for y in 0..q.dim() {
            if theta.apply(&q.mul_basis(x, y)) != target.mul(&cols[x], &cols[y]) {
                return Ok(Some(format!(
                    "induced map is not multiplicative on ({}, {})",
                    q.labels()[x],
                    q.labels()[y]
                )));
            }
        }
    }
    Ok(None)
}

fn radical_identity(t: &GradedAlgebra, factors: &[&GradedAlgebra]) -> Result<Option<String>> {
    let f = t.field();
    let j = t.graded_radical()?;
    let js: Vec<Subspace> = factors.iter().map(|a| a.graded_radical()).collect::<Result<_>>()?;
    let mut sum = Subspace::zero(f, t.dim());
    for k in 0..factors.len() {
        let term = factors
            .iter()
            .enumerate()
            .skip(1)
            .fold(if k == 0 { js[0].clone() } else { Subspace::full(f, factors[0].dim()) }, |acc, (i, a)| {
                tensor_subspace(f, &acc, &if i == k { js[i].clone() } else { Subspace::full(f, a.dim()) })
            });
        sum = sum.sum(&term)?;
    }
    if j != sum {
        return Ok(Some(format!(
            "J_gr of the tensor product has dim {}, the sum of J_gr(A_i) terms has dim {}",
            j.dim(),
            sum.dim()
        )));
    }
    let (b, emb) = t.identity_algebra()?;
    let jb = b.jacobson_radical()?.image(&emb);
    if t.alg.product_space(&Subspace::full(f, t.dim()), &jb) != j {
        return Ok(Some("J_gr differs from A·J(B) for the tensor product".into()));
    }
    if !t.alg.is_nilpotent_space(&j) {
        return Ok(Some("J_gr of the tensor product is not nilpotent".into()));
    }
    let pairs: Vec<(&StructAlgebra, &Subspace)> = factors.iter().map(|a| &a.alg).zip(&js).collect();
    quotient_iso(&t.alg, &j, &pairs)
}

/// `J_gr(A⊗A′) = J_gr(A)⊗A′ + A⊗J_gr(A′)` with the quotient isomorphism for
/// every pair `A, A′` from `algs`, and the `n`-fold forms for `2..=n`.
pub fn radical_tensor_suite(algs: &[Named], n: usize) -> Result<Vec<Check>> {
    if algs.is_empty() {
        return Err(Error::BadParams("no algebras given".into()));
    }
    let mut out = Vec::new();
    for (i, a) in algs.iter().enumerate() {
        for b in &algs[i..] {
            out.push(check(format!("J_gr({} ⊗ {})", a.name, b.name), || {
                radical_identity(&a.alg.tensor(&b.alg)?, &[&a.alg, &b.alg])
            }));
        }
    }
    for a in algs {
        for k in 2..=n {
            out.push(check(format!("J_gr(({})^⊗{k})", a.name), || {
                let factors = vec![&a.alg; k];
                radical_identity(&a.alg.tensor_power(k)?, &factors)
            }));
        }
    }
    Ok(out)
}

/// `C_A(B)⊗C_{A′}(B′) ≅ C_{A⊗A′}(B⊗B′)` for every pair from `algs`.
pub fn centralizer_tensor_suite(algs: &[Named]) -> Result<Vec<Check>> {
    if algs.is_empty() {
        return Err(Error::BadParams("no algebras given".into()));
    }
    let mut out = Vec::new();
    for (i, a) in algs.iter().enumerate() {
        for b in &algs[i..] {
            out.push(check(format!("C({}) ⊗ C({})", a.name, b.name), || {
                let r = centralizer_tensor_check(
                    &a.alg.alg,
                    &a.alg.identity_component(),
                    &b.alg.alg,
                    &b.alg.identity_component(),
                )?;
                let full = r.map.rank() == r.dim_left * r.dim_right;
                Ok((!full).then(|| "centralizer map is not injective".to_string()))
            }));
        }
    }
    Ok(out)
}

/// The Brauer square for `kG` under conjugation, `Q`, and `n`.
pub fn brauer_diagram_suite(g: &FiniteGroup, q: &Subgroup, f: &Fq, n: usize) -> Result<Vec<Check>> {
    if !FiniteGroup::is_p_group(q.order(), f.p()) {
        return Err(Error::BadParams(format!("Q of order {} is not a {}-group", q.order(), f.p())));
    }
    let a = ActedAlgebra::group_algebra_conjugation(g, crate::algebra::group_algebra(g, f)?)?;
    Ok(vec![check(format!("Brauer square, |Q| = {}, n = {n}", q.order()), || {
        let d = tensor_brauer_diagram_check(&a, q, n)?;
        let w = if !d.top_iso {
            Some("(A^Q)^⊗n -> (A^⊗n)^(Q^n) is not bijective")
        } else if !d.bottom_iso {
            Some("A(Q)^⊗n -> A^⊗n(Q^n) is not bijective")
        } else if !d.bottom_multiplicative {
            Some("A(Q)^⊗n -> A^⊗n(Q^n) is not multiplicative")
        } else if !d.commutes {
            Some("square does not commute")
        } else {
            None
        };
        Ok(w.map(str::to_string))
    })])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{instance, Witness};
    use crate::triples::WreathScope;

    fn all_ok(checks: &[Check]) -> bool {
        !checks.is_empty() && checks.iter().all(|c| c.ok)
    }

    #[test]
    fn radical_tensor_on_s3_and_c2() {
        let f = Fq::prime(3).unwrap();
        let algs = parse_group_pairs("S3:A3,C2:1", &f, None).unwrap();
        let checks = radical_tensor_suite(&algs, 2).unwrap();
        assert_eq!(checks.len(), 5);
        assert!(all_ok(&checks), "{checks:?}");
    }

    #[test]
    fn unknown_normal_subgroup_is_bad_params() {
        let f = Fq::prime(3).unwrap();
        assert!(matches!(parse_group_pairs("S3:C2", &f, None), Err(Error::BadParams(_))));
        assert!(matches!(parse_group_pairs("S3", &f, None), Err(Error::BadParams(_))));
    }

    #[test]
    fn centralizer_tensor_on_s3() {
        let f = Fq::new(2, 2).unwrap();
        let algs = parse_group_pairs("S3:A3,C2:C2", &f, None).unwrap();
        assert!(all_ok(&centralizer_tensor_suite(&algs).unwrap()));
    }

    #[test]
    fn brauer_diagram_rejects_non_p_subgroup() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let f = Fq::prime(2).unwrap();
        let c3 = g.generated(&[g.find_perm(&[1, 2, 0]).unwrap()]);
        assert!(matches!(brauer_diagram_suite(&g, &c3, &f, 2), Err(Error::BadParams(_))));
    }

    #[test]
    fn wreath_crossed_for_principal_block() {
        let inst = instance("s3-gf4-principal", None).unwrap();
        let a = Named { name: "b·kS3".into(), alg: inst.ext.algebra.clone() };
        let checks = wreath_crossed_suite(&a, 2, 0).unwrap();
        assert!(all_ok(&checks), "{checks:?}");
    }

    #[test]
    fn wreath_morita_rejects_shift() {
        let inst = instance("v4-c2-p2", None).unwrap();
        assert!(matches!(wreath_morita_suite(&inst, &[Witness::Shift], 2), Err(Error::BadParams(_))));
    }

    #[test]
    fn harris_knorr_for_s4() {
        let inst = instance("s4-a4-p3", None).unwrap();
        let checks = harris_knorr_suite(&inst).unwrap();
        assert_eq!(checks.len(), 2);
        assert!(all_ok(&checks), "{checks:?}");
    }

    #[test]
    fn geq_b_without_defect_is_a_schema_error() {
        let inst = instance("v4-c2-p2", None).unwrap();
        let mut cert = inst.certificate().unwrap();
        cert.defect = None;
        assert!(matches!(geq_b_suite(&inst, &[], &cert), Err(Error::SchemaError(_))));
    }

    #[test]
    fn geq_c_wreath_scope() {
        let inst = instance("v4-c2-p2", None).unwrap();
        let checks = wreath_relation_suite(&inst, Witness::Regular, 2, WreathScope::GeqC).unwrap();
        assert_eq!(checks.len(), 2);
        assert!(all_ok(&checks), "{checks:?}");
    }
}
