//! The eleven acceptance criteria. Each test prints one `PASS`/`FAIL` line
//! straight to stdout so the lines survive output capture.

use std::collections::BTreeSet;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use blockforge::algebra::blocks::{blocks_brute_force, center_and_blocks};
use blockforge::algebra::radical::radical_brute_force;
use blockforge::algebra::{group_algebra, StructAlgebra};
use blockforge::catalog::{instance, Witness};
use blockforge::field::{Elem, Fq};
use blockforge::groups::{perm_compose, tuple_from_index, wreath_group, FiniteGroup, Perm};
use blockforge::report::Check;
use blockforge::suites::{
    brauer_diagram_suite, centralizer_tensor_suite, geq_b_suite, harris_knorr_suite, instance_witnesses,
    parse_group_pairs, radical_tensor_suite, regular_witnesses, wreath_crossed_suite, wreath_derived_suite,
    wreath_morita_suite, wreath_relation_suite, Named,
};
use blockforge::triples::WreathScope;

fn criterion(id: u32, title: &str, limit_secs: u64, body: impl FnOnce() -> Vec<Check>) {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let (ok, detail) = match &result {
        Ok(checks) => {
            let failed: Vec<String> = checks
                .iter()
                .filter(|c| !c.ok)
                .map(|c| format!("{}: {}", c.name, c.witness.as_deref().unwrap_or("")))
                .collect();
            let in_time = elapsed < Duration::from_secs(limit_secs);
            let mut detail = format!("{} checks", checks.len());
            if !failed.is_empty() {
                detail = format!("{detail}, failed: {}", failed.join(" | "));
            }
            if !in_time {
                detail = format!("{detail}, over the {limit_secs} s budget");
            }
            (!checks.is_empty() && failed.is_empty() && in_time, detail)
        }
        Err(_) => (false, "panicked".to_string()),
    };
    let verdict = if ok { "PASS" } else { "FAIL" };
    let line = format!("criterion {id:>2}: {verdict} {title} ({detail}, {:.2} s)\n", elapsed.as_secs_f64());
    std::io::stdout().write_all(line.as_bytes()).unwrap();
    assert!(ok, "{line}");
}

fn algebra_families() -> Vec<Vec<Named>> {
    let f3 = Fq::prime(3).unwrap();
    let f4 = Fq::new(2, 2).unwrap();
    let mut p2 = parse_group_pairs("S3:A3,C2:1,C2:C2", &f4, None).unwrap();
    let block = instance("s3-gf4-principal", None).unwrap();
    p2.push(Named { name: "b·kS3 over S3/A3".into(), alg: block.ext.algebra.clone() });
    vec![parse_group_pairs("S3:A3,C2:1,A4:V4,S4:A4", &f3, None).unwrap(), p2]
}

#[test]
fn criterion_01_graded_radical_of_tensor_products() {
    criterion(1, "graded radical of tensor products", 60, || {
        let mut out = Vec::new();
        let families = algebra_families();
        for fam in &families {
            out.extend(radical_tensor_suite(fam, 1).unwrap());
        }
        assert!(out.len() >= 6);
        for fam in &families {
            let small: Vec<Named> = fam.iter().filter(|a| a.alg.dim() <= 6).cloned().collect();
            out.extend(radical_tensor_suite(&small, 3).unwrap().into_iter().filter(|c| c.name.contains("^⊗")));
        }
        out
    });
}

#[test]
fn criterion_02_centralizers_of_tensor_products() {
    criterion(2, "centralizers of tensor products", 30, || {
        algebra_families().iter().flat_map(|fam| centralizer_tensor_suite(fam).unwrap()).collect()
    });
}

#[test]
fn criterion_03_brauer_square() {
    criterion(3, "Brauer square for tensor powers", 60, || {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let c3 = s3.generated(&[s3.find_perm(&[1, 2, 0]).unwrap()]);
        let s4 = FiniteGroup::symmetric(4).unwrap();
        let q = s4.generated(&[s4.find_perm(&[1, 0, 3, 2]).unwrap()]);
        let mut out = brauer_diagram_suite(&s3, &c3, &Fq::prime(3).unwrap(), 2).unwrap();
        out.extend(brauer_diagram_suite(&s4, &q, &Fq::prime(2).unwrap(), 2).unwrap());
        out
    });
}

#[test]
fn criterion_04_wreath_crossed_products() {
    criterion(4, "wreath products are crossed products; ζ_wr", 30, || {
        let block = instance("s3-gf4-principal", None).unwrap();
        let a = Named { name: "b·kS3".into(), alg: block.ext.algebra.clone() };
        let ks3 = parse_group_pairs("S3:A3", &Fq::prime(3).unwrap(), None).unwrap().remove(0);
        let mut out = wreath_crossed_suite(&a, 2, 0).unwrap();
        out.extend(wreath_crossed_suite(&ks3, 2, 0).unwrap());
        out
    });
}

#[test]
fn criterion_05_wreath_morita() {
    criterion(5, "Morita equivalences lift to wreath products", 60, || {
        let mut out = Vec::new();
        for name in ["s3-a3-p3", "v4-c2-p2"] {
            let inst = instance(name, None).unwrap();
            out.extend(wreath_morita_suite(&inst, &[Witness::Regular, Witness::Morita], 2).unwrap());
        }
        out
    });
}

#[test]
fn criterion_06_wreath_complexes() {
    criterion(6, "sign cocycle, Sₙ-action and the isomorphisms f, g", 60, || {
        let kc2 = parse_group_pairs("C2:1", &Fq::prime(3).unwrap(), None).unwrap().remove(0).alg;
        let mut out: Vec<Check> = wreath_derived_suite(&kc2, &kc2, &regular_witnesses(&kc2).unwrap(), 3, None).unwrap();
        let inst = instance("v4-c2-p2", None).unwrap();
        let xs = instance_witnesses(&inst, &[Witness::Regular, Witness::Shift, Witness::TwoTerm]).unwrap();
        let checks = wreath_derived_suite(&inst.ext.algebra, &inst.ext2.algebra, &xs, 2, None).unwrap();
        out.extend(checks);
        out
    });
}

#[test]
fn criterion_07_wreath_derived_equivalences() {
    criterion(7, "derived and Rickard equivalences of wreath complexes", 120, || {
        let inst = instance("v4-c2-p2", None).unwrap();
        let p2 = instance("s3-gf4-principal", None).unwrap();
        let xs = instance_witnesses(&inst, &[Witness::Regular, Witness::Shift, Witness::TwoTerm]).unwrap();
        wreath_derived_suite(&inst.ext.algebra, &inst.ext2.algebra, &xs, 1, Some(&p2))
            .unwrap()
            .into_iter()
            .filter(|c| c.name.contains("equivalence"))
            .collect()
    });
}

#[test]
fn criterion_08_harris_knorr() {
    criterion(8, "Harris–Knörr pairing and the Dade isomorphism", 60, || {
        ["s4-a4-p3", "s3-a3-p3", "s3-gf4-principal", "s3-a3-p5"]
            .iter()
            .flat_map(|name| harris_knorr_suite(&instance(name, None).unwrap()).unwrap())
            .collect()
    });
}

#[test]
fn criterion_09_brauer_compatibility_and_geq_b() {
    criterion(9, "Brauer compatibility of witnesses and ≥b", 120, || {
        let mut out = Vec::new();
        for name in ["s3-a3-p3", "v4-c2-p2", "s4-a4-p3", "c6-c3-p3"] {
            let inst = instance(name, None).unwrap();
            let cert = inst.certificate().unwrap();
            let ws = [Witness::Regular, Witness::Shift, Witness::Morita];
            out.extend(geq_b_suite(&inst, &ws, &cert).unwrap());
        }
        out
    });
}

#[test]
fn criterion_10_wreath_triples() {
    criterion(10, "wreath triple suite, all six stages", 180, || {
        let mut out = Vec::new();
        for name in ["v4-c2-p2", "s3-a3-p3"] {
            let inst = instance(name, None).unwrap();
            let checks = wreath_relation_suite(&inst, Witness::Regular, 2, WreathScope::Full).unwrap();
            assert_eq!(checks.len(), 6, "{name} stopped early: {checks:?}");
            out.extend(checks);
        }
        out
    });
}

/// Breadth-first closure of permutation generators, independent of the
/// library's group constructors.
fn naive_closure(gens: &[Perm], degree: usize) -> BTreeSet<Perm> {
    let id: Perm = (0..degree as u32).collect();
    let mut seen = BTreeSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y: Perm = g.iter().map(|&i| x[i as usize]).collect();
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

/// `((g_i), σ)` acting on `n × Ω` by `(i, ω) ↦ (σ(i), g_{σ(i)}(ω))`.
fn imprimitive_perm(g: &FiniteGroup, sym: &FiniteGroup, tuple: &[usize], s: usize) -> Perm {
    let gp = g.perms().unwrap();
    let sigma = &sym.perms().unwrap()[s];
    let deg = gp[0].len();
    let mut out = vec![0; tuple.len() * deg];
    for i in 0..tuple.len() {
        let j = sigma[i] as usize;
        for w in 0..deg {
            out[i * deg + w] = (j * deg + gp[tuple[j]][w] as usize) as u32;
        }
    }
    out
}

fn group_oracles() -> Vec<Check> {
    let mut out = Vec::new();
    let perm_cases: Vec<(&str, Vec<Perm>, usize)> = vec![
        ("S3", vec![vec![1, 0, 2], vec![1, 2, 0]], 3),
        ("S4", vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]], 4),
        ("A4", vec![vec![1, 2, 0, 3], vec![0, 2, 3, 1]], 4),
        ("V4", vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]], 4),
        ("C4", vec![vec![1, 2, 3, 0]], 4),
        ("D8", vec![vec![1, 2, 3, 0], vec![3, 2, 1, 0]], 4),
        ("C6", vec![vec![1, 2, 0, 4, 3]], 5),
    ];
    for (name, gens, d) in perm_cases {
        let g = FiniteGroup::from_permutations(&gens, d).unwrap();
        let perms = g.perms().unwrap();
        let set: BTreeSet<Perm> = perms.iter().cloned().collect();
        let table_ok = g.elements().all(|a| {
            g.elements().all(|b| perms[g.mul(a, b) as usize] == perm_compose(&perms[a as usize], &perms[b as usize]))
        });
        let ok = set == naive_closure(&gens, d) && table_ok && g.order() <= 24;
        out.push(Check::new(format!("closure of {name}"), ok, Some("differs from the naive closure".into())));
    }
    let s4 = FiniteGroup::symmetric(4).unwrap();
    let naive_s4 = naive_closure(&[vec![1, 0, 2, 3], vec![1, 2, 3, 0]], 4);
    let lex: Vec<Perm> = naive_s4.iter().cloned().collect();
    out.push(Check::new(
        "S4 in lexicographic order",
        s4.perms().unwrap() == lex.as_slice(),
        Some("order differs".into()),
    ));
    for (name, base, n) in
        [("C2≀S2", FiniteGroup::cyclic(2).unwrap(), 2), ("C3≀S2", FiniteGroup::cyclic(3).unwrap(), 2)]
    {
        let base = if base.perms().is_some() {
            base
        } else {
            FiniteGroup::from_permutations(
                &[(1..=base.order() as u32).map(|i| i % base.order() as u32).collect()],
                base.order(),
            )
            .unwrap()
        };
        let w = wreath_group(&base, n).unwrap();
        let m = base.order();
        let image = |x: u32| {
            let (t, s) = w.split(x);
            imprimitive_perm(&base, &w.sym, &tuple_from_index(t, m, n), s)
        };
        let images: Vec<Perm> = w.group.elements().map(image).collect();
        let distinct: BTreeSet<Perm> = images.iter().cloned().collect();
        let hom = w.group.elements().all(|a| {
            w.group
                .elements()
                .all(|b| images[w.group.mul(a, b) as usize] == perm_compose(&images[a as usize], &images[b as usize]))
        });
        let gens: Vec<Perm> = w.group.generating_set().iter().map(|&x| images[x as usize].clone()).collect();
        let ok = hom && distinct.len() == w.group.order() && distinct == naive_closure(&gens, n * m);
        out.push(Check::new(
            format!("{name} against its imprimitive action"),
            ok,
            Some("not a faithful action".into()),
        ));
    }
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let s3 = FiniteGroup::symmetric(3).unwrap();
    let p = FiniteGroup::direct_product(&s3, &c2).unwrap();
    let sp = s3.perms().unwrap();
    let as_perm = |x: u32| -> Perm {
        let (a, b) = (x as usize / 2, x as usize % 2);
        let mut v = sp[a].clone();
        v.extend(if b == 0 { [3, 4] } else { [4, 3] });
        v
    };
    let hom =
        p.elements().all(|a| p.elements().all(|b| as_perm(p.mul(a, b)) == perm_compose(&as_perm(a), &as_perm(b))));
    let set: BTreeSet<Perm> = p.elements().map(as_perm).collect();
    let naive = naive_closure(&[vec![1, 0, 2, 3, 4], vec![1, 2, 0, 3, 4], vec![0, 1, 2, 4, 3]], 5);
    out.push(Check::new("S3 × C2 against disjoint permutations", hom && set == naive, Some("mismatch".into())));
    out
}

fn small_algebras() -> Vec<(String, StructAlgebra)> {
    let mut out = Vec::new();
    let groups = [
        ("C2", FiniteGroup::cyclic(2).unwrap()),
        ("C3", FiniteGroup::cyclic(3).unwrap()),
        ("C4", FiniteGroup::cyclic(4).unwrap()),
        ("C6", FiniteGroup::cyclic(6).unwrap()),
        ("V4", FiniteGroup::from_permutations(&[vec![1, 0, 3, 2], vec![2, 3, 0, 1]], 4).unwrap()),
        ("S3", FiniteGroup::symmetric(3).unwrap()),
        ("A4", FiniteGroup::from_permutations(&[vec![1, 2, 0, 3], vec![0, 2, 3, 1]], 4).unwrap()),
    ];
    for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let f = Fq::new(p, m).unwrap();
        for (name, g) in &groups {
            if (f.q() as u64).pow(g.order() as u32) <= 1 << 22 {
                out.push((format!("GF({})·{name}", f.q()), group_algebra(g, &f).unwrap()));
            }
        }
        let c2 = group_algebra(&groups[0].1, &f).unwrap();
        let t2 = upper_triangular(&f, 2);
        out.push((format!("GF({}) T2", f.q()), t2.clone()));
        out.push((format!("GF({}) T3", f.q()), upper_triangular(&f, 3)));
        out.push((format!("GF({}) T2⊗kC2", f.q()), t2.tensor(&c2).unwrap()));
    }
    out.retain(|(_, a)| a.dim() <= 12);
    out
}

/// Upper triangular `n × n` matrices on the matrix units `E_ij`, `i ≤ j`.
fn upper_triangular(f: &Fq, n: usize) -> StructAlgebra {
    let units: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let pos = |i: usize, j: usize| units.iter().position(|&u| u == (i, j)).unwrap() as u32;
    let mut unit = vec![0 as Elem; units.len()];
    for i in 0..n {
        unit[pos(i, i) as usize] = 1;
    }
    let labels = units.iter().map(|(i, j)| format!("E{}{}", i + 1, j + 1)).collect();
    StructAlgebra::from_fn_checked(
        f,
        units.len(),
        |a, b| {
            let ((i, j), (k, l)) = (units[a], units[b]);
            if j == k {
                vec![(pos(i, l), 1)]
            } else {
                vec![]
            }
        },
        unit,
        labels,
        None,
    )
    .unwrap()
}

fn algebra_oracles() -> Vec<Check> {
    let mut out = Vec::new();
    for (name, a) in small_algebras() {
        let fast = a.jacobson_radical().unwrap();
        let slow = radical_brute_force(&a, 1 << 22);
        out.push(Check::new(
            format!("radical of {name}"),
            slow.as_ref() == Some(&fast),
            Some(format!("fast dim {}, brute force {:?}", fast.dim(), slow.map(|s| s.dim()))),
        ));
        let mut fast_blocks: Vec<Vec<Elem>> =
            center_and_blocks(&a).unwrap().blocks.into_iter().map(|b| b.idempotent).collect();
        fast_blocks.sort();
        let slow_blocks = blocks_brute_force(&a, 1 << 22);
        out.push(Check::new(
            format!("blocks of {name}"),
            slow_blocks.as_ref() == Some(&fast_blocks),
            Some(format!("{} blocks, brute force {:?}", fast_blocks.len(), slow_blocks.map(|b| b.len()))),
        ));
    }
    out
}

#[test]
fn criterion_11_oracle_equivalences() {
    criterion(11, "radical, block and group oracles", 120, || {
        let mut out = algebra_oracles();
        out.extend(group_oracles());
        out
    });
}
