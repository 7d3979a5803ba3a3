use crate::brauer::{ActedAlgebra, Action};
use crate::catalog::{Instance, Witness};
use crate::complexes::{derived_equivalence_check, Bimodule, Complex};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::graded::{CBar, GradedAlgebra};
use crate::groups::{tuple_from_index, tuple_to_index, FiniteGroup};
use crate::linalg::Mat;
use crate::report::Check;
use crate::wreath::{
    cn_action, wreath_algebra, wreath_complex, wreath_graded, wreath_isos, zeta_wr, SignCocycle, WreathAlgebra,
};

use super::{check, Named};

fn check_n(n: usize) -> Result<()> {
    if !(1..=3).contains(&n) {
        return Err(Error::BadParams(format!("n = {n} is outside 1..=3")));
    }
    Ok(())
}

/// Degree of each basis element `(a_1⊗…⊗a_n)⊗σ` must be `((deg a_k)_k, σ)`.
fn component_grading(a: &GradedAlgebra, w: &WreathAlgebra) -> Option<String> {
    let wa = w.graded.as_ref()?;
    let wr = w.group.as_ref()?;
    let m = a.group().order();
    for i in 0..w.algebra.dim() {
        let (t, s) = w.split(i);
        let degs: Vec<usize> = t.iter().map(|&j| a.grading.degrees()[j] as usize).collect();
        let want = wr.index(tuple_to_index(&degs, m), s as usize);
        if wa.grading.degrees()[i] != want {
            return Some(format!(
                "basis element {} has degree {}",
                w.algebra.labels()[i],
                wr.group.label(wa.grading.degrees()[i])
            ));
        }
    }
    for x in wr.group.elements() {
        let (t, _) = wr.split(x);
        let expect: usize =
            tuple_from_index(t, m, w.n).iter().map(|&g| a.grading.component_indices(g as u32).len()).product();
        if wa.grading.component_indices(x).len() != expect {
            return Some(format!("component {} has the wrong dimension", wr.group.label(x)));
        }
    }
    None
}

/// `ζ_wr` for the inclusion `C_A(B) -> A`, and its compatibility with the
/// `Ḡ≀Sₙ`-actions: conjugation by `(u_{g_1}⊗…⊗u_{g_n})⊗σ` on `A≀Sₙ` and the
/// induced action on `C^{⊗n}`.
fn zeta_wr_acted(a: &GradedAlgebra, w: &WreathAlgebra) -> Result<Option<String>> {
    let f = a.field();
    let cb = CBar::new(a)?;
    let basis = cb.centralizer.basis().to_vec();
    let zeta = Mat::from_cols(f, a.dim(), &basis);
    let map = zeta_wr(w, &cb.c, &zeta)?;
    let units = a.crossed_product_units(0)?;
    let mats = units
        .units
        .iter()
        .zip(&units.inverses)
        .map(|(u, v)| {
            let cols = basis
                .iter()
                .map(|c| {
                    cb.centralizer
                        .coords(&a.alg.mul(&a.alg.mul(u, c), v))
                        .ok_or_else(|| Error::CheckFailed("conjugation leaves C_A(B)".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Mat::from_cols(f, basis.len(), &cols))
        })
        .collect::<Result<Vec<_>>>()?;
    let acted = ActedAlgebra::new(cb.c.alg.clone(), a.group().clone(), Action::Linear(mats))?;
    let power = cn_action(&acted, &cb.c.grading, w.n)?;
    let wr = w.group.as_ref().expect("graded wreath algebras carry their group");
    let m = a.group().order();
    let ones = vec![a.alg.one(); w.n];
    for x in wr.group.elements() {
        let (t, s) = wr.split(x);
        let tup = tuple_from_index(t, m, w.n);
        let us: Vec<Vec<Elem>> = tup.iter().map(|&g| units.units[g].clone()).collect();
        let vs: Vec<Vec<Elem>> = tup.iter().map(|&g| units.inverses[g].clone()).collect();
        let u = w.algebra.mul(&w.pure(&us, w.sym.identity()), &w.pure(&ones, s as u32));
        let v = w.algebra.mul(&w.pure(&ones, w.sym.inv(s as u32)), &w.pure(&vs, w.sym.identity()));
        for c in 0..map.cols() {
            let lhs = map.apply(&power.acted.act(x, &crate::linalg::vec_ops::unit(map.cols(), c)));
            let rhs = w.algebra.mul(&w.algebra.mul(&u, &map.col(c)), &v);
            if lhs != rhs {
                return Ok(Some(format!("ζ_wr does not intertwine the action of {}", wr.group.label(x))));
            }
        }
    }
    Ok(None)
}

/// `A≀Sₙ` is a `Ḡ≀Sₙ`-graded crossed product with the component grading,
/// and `ζ_wr` is a graded acted homomorphism. `seed` drives the sampled
/// associativity check and the unit search.
pub fn wreath_crossed_suite(a: &Named, n: usize, seed: u64) -> Result<Vec<Check>> {
    check_n(n)?;
    let w = wreath_graded(&a.alg, n)?;
    let wa = w.graded.as_ref().expect("graded input gives a graded wreath product");
    Ok(vec![
        check(format!("{}≀S{n} is a graded algebra", a.name), || {
            wa.verify(seed)?;
            Ok(None)
        }),
        check(format!("{}≀S{n} is a crossed product", a.name), || {
            wa.crossed_product_units(seed)?;
            Ok(None)
        }),
        check(format!("{}≀S{n} component grading", a.name), || Ok(component_grading(&a.alg, &w))),
        check(format!("ζ_wr for {}", a.name), || zeta_wr_acted(&a.alg, &w)),
    ])
}

fn complex_name(w: Witness) -> &'static str {
    match w {
        Witness::Regular => "regular",
        Witness::Shift => "shift",
        Witness::Morita => "Morita",
        Witness::TwoTerm => "two-term",
        Witness::CharacterTwist => "twist",
    }
}

fn wreath_pair(inst: &Instance, n: usize) -> Result<(WreathAlgebra, WreathAlgebra)> {
    Ok((wreath_graded(&inst.ext.algebra, n)?, wreath_graded(&inst.ext2.algebra, n)?))
}

fn iso_check(
    a: &GradedAlgebra,
    a2: &GradedAlgebra,
    x: &Complex,
    wl: &WreathAlgebra,
    wr: &WreathAlgebra,
) -> Result<Option<String>> {
    let wx = wreath_complex(x, wl, wr)?;
    let r = wreath_isos(x, a, a2, wl, wr, &wx)?;
    Ok((!r.ok()).then(|| r.witnesses.join("; ")))
}

fn derived_check(x: &Complex, a: &GradedAlgebra, a2: &GradedAlgebra, need_rickard: bool) -> Result<Option<String>> {
    let r = derived_equivalence_check(x, Some((&a.grading, &a2.grading)), need_rickard)?;
    let ok = r.derived && r.graded == Some(true) && r.rickard != Some(false);
    Ok((!ok).then(|| if r.witnesses.is_empty() { "not a derived equivalence".into() } else { r.witnesses.join("; ") }))
}

/// For graded Morita witnesses `M`: the isomorphisms `f` and `g`, and that
/// `M≀Sₙ` is again a graded Morita equivalence (evaluation and coevaluation
/// are bimodule isomorphisms).
pub fn wreath_morita_suite(inst: &Instance, witnesses: &[Witness], n: usize) -> Result<Vec<Check>> {
    check_n(n)?;
    let (wl, wr) = wreath_pair(inst, n)?;
    let (wa, wa2) = (wl.graded.as_ref().unwrap(), wr.graded.as_ref().unwrap());
    let mut out = Vec::new();
    for &w in witnesses {
        let x = inst.witness(w)?;
        if x.terms().len() != 1 || x.lo() != 0 {
            return Err(Error::BadParams(format!("{} witness is not a bimodule in degree 0", complex_name(w))));
        }
        let name = complex_name(w);
        out.push(check(format!("{name}: M is a graded Morita equivalence"), || {
            derived_check(&x, &inst.ext.algebra, &inst.ext2.algebra, true)
        }));
        out.push(check(format!("{name}: f and g for M≀S{n}"), || {
            iso_check(&inst.ext.algebra, &inst.ext2.algebra, &x, &wl, &wr)
        }));
        out.push(check(format!("{name}: M≀S{n} is a graded Morita equivalence"), || {
            let wx = wreath_complex(&x, &wl, &wr)?.complex;
            derived_check(&wx, wa, wa2, true)
        }));
    }
    Ok(out)
}

/// `σ ↦ 1⊗σ` commutes with every differential of `X≀Sₙ`.
fn sn_commutes(x: &Complex, wl: &WreathAlgebra, wr: &WreathAlgebra) -> Result<Option<String>> {
    let wx = wreath_complex(x, wl, wr)?.complex;
    let ones = vec![wl.base.one(); wl.n];
    for &s in &wl.sigma {
        let e = wl.pure(&ones, s);
        for i in wx.lo() + 1..=wx.hi() {
            let d = wx.d(i);
            if d.mul(&wx.term(i).left_elem(&e)) != wx.term(i - 1).left_elem(&e).mul(&d) {
                return Ok(Some(format!("σ = {} does not commute with d_{i}", wl.sym.label(s))));
            }
        }
    }
    Ok(None)
}

/// The witnesses of an instance, by name.
pub fn instance_witnesses(inst: &Instance, ws: &[Witness]) -> Result<Vec<(String, Complex)>> {
    ws.iter().map(|&w| Ok((complex_name(w).to_string(), inst.witness(w)?))).collect()
}

/// Regular, shifted regular and two-term complexes of `(A, A)`-bimodules.
pub fn regular_witnesses(a: &GradedAlgebra) -> Result<Vec<(String, Complex)>> {
    let f = a.field();
    let m = Bimodule::regular_graded(a);
    let d = m.dim();
    let inject = Mat::zeros(f, d, d).vstack(&Mat::identity(f, d));
    let two = Complex::new(0, vec![Bimodule::direct_sum(&[&m, &m])?, m.clone()], vec![inject])?;
    let reg = Complex::concentrated(m, 0);
    Ok(vec![("regular".into(), reg.clone()), ("shift".into(), reg.shift(1)), ("two-term".into(), two)])
}

/// Cocycle law for `ε`, the `Sₙ`-action on `X^{⊗n}` and the isomorphisms
/// `f, g` for every `n′ ≤ n`, and derived equivalence of `X≀S₂`, for
/// complexes `X` of graded `(A, A′)`-bimodules. With `sigma_check`, also
/// the Rickard branch for `X≀C₃` over the `p = 2` instance given there.
pub fn wreath_derived_suite(
    a: &GradedAlgebra,
    a2: &GradedAlgebra,
    xs: &[(String, Complex)],
    n: usize,
    sigma_check: Option<&Instance>,
) -> Result<Vec<Check>> {
    check_n(n)?;
    let mut out = Vec::new();
    out.push(check("ε satisfies the cocycle law for n ≤ 4", || {
        for k in 1..=4 {
            SignCocycle::new(k)?.verify()?;
        }
        Ok(None)
    }));
    for k in 1..=n {
        let (wl, wr) = (wreath_graded(a, k)?, wreath_graded(a2, k)?);
        for (name, x) in xs {
            out.push(check(format!("{name}: Sₙ commutes with d on X^⊗{k}"), || sn_commutes(x, &wl, &wr)));
            out.push(check(format!("{name}: f and g for X≀S{k}"), || iso_check(a, a2, x, &wl, &wr)));
        }
    }
    let (wl, wr) = (wreath_graded(a, 2)?, wreath_graded(a2, 2)?);
    let (wa, wa2) = (wl.graded.as_ref().unwrap(), wr.graded.as_ref().unwrap());
    for (name, x) in xs {
        out.push(check(format!("{name}: X≀S2 is a graded derived equivalence"), || {
            if let Some(witness) = derived_check(x, a, a2, false)? {
                return Ok(Some(format!("X itself fails: {witness}")));
            }
            derived_check(&wreath_complex(x, &wl, &wr)?.complex, wa, wa2, false)
        }));
    }
    if let Some(p2) = sigma_check {
        out.push(check("X≀C3 is a Rickard equivalence at p = 2", || {
            if p2.field().p() != 2 {
                return Err(Error::BadParams("the Σ = C3 check needs p = 2".into()));
            }
            let s3 = FiniteGroup::symmetric(3)?;
            let c3 = s3.generated(&[s3.find_perm(&[1, 2, 0]).expect("3-cycle")]);
            let x = p2.witness(Witness::Shift)?;
            let wl = wreath_algebra(&p2.ext.algebra.alg, 3, Some(&c3))?;
            let wr = wreath_algebra(&p2.ext2.algebra.alg, 3, Some(&c3))?;
            let wx = wreath_complex(&x, &wl, &wr)?.complex;
            let r = derived_equivalence_check(&wx, None, true)?;
            Ok((!(r.derived && r.rickard == Some(true))).then(|| r.witnesses.join("; ")))
        }));
    }
    Ok(out)
}
