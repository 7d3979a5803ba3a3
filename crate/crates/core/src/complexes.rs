//! Bimodules, bounded complexes of bimodules, balanced tensor products,
//! duals, homology, and the derived and Rickard equivalence checks.

mod bimodule;
mod chain;
mod derived;
mod present;
mod tensor;

pub use bimodule::{bimodule_over_c, Bimodule, OverC};
pub use chain::{
    cone, contractible_check, homology, homology_dims, is_bimodule_map, quasi_iso_check, solve_homotopy, tensor_over,
    ChainMap, Complex, ComplexJson, Contractibility, HomSpace, HomologyGroup, Homotopy, HomotopySolution,
    QuasiIsoReport, TensorComplex, TermJson,
};
pub use derived::{
    a_dual, a_dual_term, component_complex, derived_equivalence_check, dual_complex, induced_cbar_iso, CbarIso,
    DerivedReport, DualComplex, DualFlavor, DualTerm,
};
pub use present::{bimodule_hom_space, left_hom_space, present, Presentation, Side};
pub use tensor::{induced_map, tensor_bimodules, BalancedTensor};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{group_algebra, subset_sum, StructAlgebra};
    use crate::field::Fq;
    use crate::graded::{BlockExtension, GradedAlgebra};
    use crate::groups::{FiniteGroup, Subgroup};
    use crate::linalg::{vec_ops, Mat};
    use crate::Error;

    fn kc2() -> StructAlgebra {
        let g = FiniteGroup::cyclic(2).unwrap();
        group_algebra(&g, &Fq::prime(2).unwrap()).unwrap()
    }

    fn ks3_over_a3(f: &Fq, principal: bool) -> BlockExtension {
        let g = FiniteGroup::symmetric(3).unwrap();
        let c = g.find_perm(&[1, 2, 0]).unwrap();
        let n: Subgroup = g.generated(&[c]);
        let b = if principal { subset_sum(6, n.elements()) } else { vec_ops::unit(6, 0) };
        BlockExtension::from_quotient(&g, &n, f, b).unwrap()
    }

    fn regular(a: &StructAlgebra, deg: i32) -> Complex {
        Complex::concentrated(Bimodule::regular(a), deg)
    }

    fn identity_cone(a: &StructAlgebra) -> Complex {
        let m = Bimodule::regular(a);
        Complex::new(0, vec![m.clone(), m], vec![Mat::identity(a.field(), a.dim())]).unwrap()
    }

    #[test]
    fn norm_map_homology_over_gf2() {
        let a = kc2();
        let m = Bimodule::regular(&a);
        let d = a.right_matrix(&[1, 1]);
        let x = Complex::new(0, vec![m.clone(), m], vec![d]).unwrap();
        let h = homology(&x);
        assert_eq!(h.iter().map(|h| h.dim).collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn identity_cone_is_contractible() {
        let a = kc2();
        let x = identity_cone(&a);
        assert!(homology(&x).iter().all(|h| h.dim == 0));
        for space in [HomSpace::Plain, HomSpace::Left, HomSpace::Bimodule] {
            assert!(contractible_check(&x, space).unwrap().is_contractible(), "{space:?}");
        }
        match contractible_check(&regular(&a, 0), HomSpace::Plain).unwrap() {
            Contractibility::NotContractible(w) => assert!(w.contains("H_0")),
            Contractibility::Contractible(_) => panic!("A[0] has homology"),
        }
    }

    #[test]
    fn non_chain_map_is_rejected() {
        let a = kc2();
        let x = identity_cone(&a);
        let y = regular(&a, 0);
        let f = ChainMap { lo: 0, maps: vec![Mat::identity(a.field(), 2)] };
        // Degree 1 maps to zero, but d_1 = id is not killed.
        assert!(matches!(quasi_iso_check(&f, &x, &y), Err(Error::NotChainMap(_))));
        let zero = ChainMap::zero(&y, &y);
        assert!(!quasi_iso_check(&zero, &y, &y).unwrap().pass);
        assert!(quasi_iso_check(&ChainMap::identity(&y), &y, &y).unwrap().pass);
    }

    #[test]
    fn tensor_with_regular_is_identity() {
        let a = kc2();
        let y = identity_cone(&a);
        let t = tensor_over(&regular(&a, 0), &y).unwrap();
        assert_eq!(t.complex.lo(), 0);
        assert_eq!(t.complex.dim_at(0), 2);
        assert_eq!(t.complex.dim_at(1), 2);
        assert_eq!(t.complex.d(1), Mat::identity(a.field(), 2));
    }

    #[test]
    fn koszul_sign_on_degree_one() {
        let f = Fq::prime(3).unwrap();
        let a = group_algebra(&FiniteGroup::trivial(), &f).unwrap();
        let x =
            Complex::new(0, vec![Bimodule::regular(&a), Bimodule::regular(&a)], vec![Mat::identity(&f, 1)]).unwrap();
        let t = tensor_over(&x, &x).unwrap();
        // Degree 2 is x1 ⊗ y1; its image in x1 ⊗ y0 carries (-1)^1.
        let (off, _) = t.pieces[&(1, 0)];
        assert_eq!(t.complex.d(2).get(off, 0), f.neg(1));
        let (off0, _) = t.pieces[&(0, 1)];
        assert_eq!(t.complex.d(2).get(off0, 0), 1);
        assert!(t.complex.d(1).mul(&t.complex.d(2)).is_zero());
    }

    #[test]
    fn shifts_cancel() {
        let a = kc2();
        let t = tensor_over(&regular(&a, 1), &regular(&a, -1)).unwrap();
        assert_eq!(t.complex.lo(), 0);
        assert_eq!(t.complex.hi(), 0);
        assert_eq!(t.complex.dim_at(0), 2);
    }

    #[test]
    fn duals_of_regular_and_two_term() {
        let a = kc2();
        let y = dual_complex(&regular(&a, 0), DualFlavor::ADual, None).unwrap();
        assert_eq!((y.lo(), y.hi(), y.dim_at(0)), (0, 0, 2));
        let m = Bimodule::regular(&a);
        let d = a.right_matrix(&[1, 1]);
        let x = Complex::new(0, vec![m.clone(), m], vec![d.clone()]).unwrap();
        let yb = dual_complex(&x, DualFlavor::BaseDual, None).unwrap();
        assert_eq!((yb.lo(), yb.hi()), (-1, 0));
        // d^Y_0 = (+1) d_1^T.
        assert_eq!(yb.d(0), d.transpose());
        assert!(yb.verify().is_ok());
        let ya = dual_complex(&x, DualFlavor::ADual, None).unwrap();
        assert_eq!(homology_dims(&ya).values().sum::<usize>(), 2);
    }

    #[test]
    fn non_projective_term_is_rejected() {
        let f = Fq::prime(2).unwrap();
        let a = kc2();
        // The trivial module k with both actions through augmentation.
        let aug = Mat::from_rows(&f, 1, &[vec![1]]);
        let m = Bimodule::new(a.clone(), a.clone(), vec![aug.clone(), aug.clone()], vec![aug.clone(), aug]).unwrap();
        let x = Complex::concentrated(m, 0);
        assert!(matches!(dual_complex(&x, DualFlavor::ADual, None), Err(Error::NotProjective(_))));
    }

    #[test]
    fn regular_and_shift_are_rickard() {
        let f = Fq::prime(3).unwrap();
        let ext = ks3_over_a3(&f, false);
        let a = &ext.algebra.alg;
        for deg in [0, 1] {
            let r = derived_equivalence_check(&regular(a, deg), None, true).unwrap();
            assert!(r.derived && r.rickard == Some(true), "{r:?}");
            assert_eq!(r.homology_xy.keys().copied().collect::<Vec<_>>(), vec![0]);
        }
        let x = Complex::concentrated(Bimodule::regular(a), 1);
        assert_eq!(homology_dims(&x).keys().copied().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn doubled_regular_is_not_derived() {
        let a = kc2();
        let m = Bimodule::regular(&a);
        let x = Complex::concentrated(Bimodule::direct_sum(&[&m, &m]).unwrap(), 0);
        let r = derived_equivalence_check(&x, None, true).unwrap();
        assert!(!r.derived);
        assert_ne!(r.homology_xy.get(&0), Some(&a.dim()));
    }

    #[test]
    fn graded_regular_over_c() {
        let f = Fq::prime(3).unwrap();
        let ext = ks3_over_a3(&f, false);
        let a: &GradedAlgebra = &ext.algebra;
        let cb = ext.cbar().unwrap();
        let units = ext.natural_units();
        let m = Bimodule::regular_graded(a);
        let over = OverC::diagonal(&cb.centralizer, units.clone());
        assert!(bimodule_over_c(m, a, a, &over).is_ok());
        // Twisting the right action by conjugation with a transposition moves
        // (123) ∈ C to (132).
        let s = ext.element(ext.coset_reps[1]);
        let sinv = a.homogeneous_inverse(&s, 1).unwrap();
        let cols: Vec<Vec<_>> = (0..a.dim()).map(|j| a.alg.mul(&a.alg.mul(&s, &a.alg.basis(j)), &sinv)).collect();
        let psi = Mat::from_cols(&f, a.dim(), &cols);
        let tw = Bimodule::twisted(&a.alg, &a.alg, &psi).unwrap().with_grading(a.grading.clone()).unwrap();
        assert!(matches!(bimodule_over_c(tw, a, a, &over), Err(Error::OverCViolation(_))));
    }

    #[test]
    fn cbar_iso_of_regular_and_shift_is_identity() {
        let f = Fq::new(2, 2).unwrap();
        let ext = ks3_over_a3(&f, true);
        let a = &ext.algebra;
        for deg in [0, 1] {
            let x = Complex::concentrated(Bimodule::regular_graded(a), deg);
            let r = derived_equivalence_check(&x, Some((&a.grading, &a.grading)), true).unwrap();
            assert!(r.derived && r.rickard == Some(true) && r.graded == Some(true), "{r:?}");
            let iso = induced_cbar_iso(&x, a, a).unwrap();
            assert_eq!(iso.matrix, Mat::identity(&f, 2));
            assert!(iso.report.ok(), "{:?}", iso.report);
        }
    }
}
