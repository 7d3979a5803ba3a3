//! Centers, central primitive idempotents and blocks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::groups::{FiniteGroup, Subgroup};
use crate::linalg::{vec_ops, Mat, Subspace};

use super::{radical_of_commutative, StructAlgebra};

/// A block: central primitive idempotent `e` and the ideal `eA`.
#[derive(Debug, Clone)]
pub struct BlockData {
    pub idempotent: Vec<Elem>,
    pub ideal: Subspace,
    pub defect_group: Option<Subgroup>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockJson {
    pub idempotent: Vec<Elem>,
}

#[derive(Debug, Clone)]
pub struct CenterBlocks {
    pub center: Subspace,
    pub blocks: Vec<BlockData>,
    /// Whether every block's center modulo its radical is the ground field.
    pub split: bool,
}

/// Primitive idempotents of a commutative algebra, lexicographically
/// ordered, plus whether its semisimple quotient is split.
pub fn primitive_idempotents_commutative(z: &StructAlgebra) -> Result<(Vec<Vec<Elem>>, bool)> {
    let f = z.field().clone();
    let d = z.dim();
    let j = radical_of_commutative(z);
    let (zbar, reps) = if j.is_zero() {
        (z.clone(), (0..d).collect::<Vec<_>>())
    } else {
        let (q, _) = z.quotient(&j)?;
        (q, j.complement_indices())
    };
    let n = zbar.dim();
    let q = f.q() as u64;
    // Berlekamp subalgebra {x : x^q = x}.
    let cols: Vec<Vec<Elem>> = (0..n).map(|i| zbar.sub(&zbar.pow(&zbar.basis(i), q), &zbar.basis(i))).collect();
    let berl = Subspace::span(&f, n, &Mat::from_cols(&f, n, &cols).kernel());
    let r = berl.dim();
    let mut idems = vec![zbar.one()];
    for s in berl.basis() {
        if idems.len() == r {
            break;
        }
        let mut next = Vec::new();
        for e in &idems {
            let se = zbar.mul(s, e);
            for a in eigenvalues(&zbar, &se, e) {
                // Lagrange interpolation idempotent for the value `a` on the support of `e`.
                let others: Vec<Elem> = eigenvalues(&zbar, &se, e).into_iter().filter(|&b| b != a).collect();
                let mut t = e.clone();
                for b in others {
                    let shifted = zbar.sub(&se, &zbar.scale(e, b));
                    let denom = f.inv(f.sub(a, b));
                    t = zbar.scale(&zbar.mul(&t, &shifted), denom);
                }
                if !vec_ops::is_zero(&t) {
                    next.push(t);
                }
            }
        }
        idems = next;
    }
    if idems.len() != r {
        return Err(Error::CheckFailed("idempotent splitting did not reach all components".into()));
    }
    let split = r == n;
    let mut lifted = Vec::with_capacity(r);
    for e in idems {
        let mut x = vec![0; d];
        for (k, &i) in reps.iter().enumerate() {
            x[i] = e[k];
        }
        lifted.push(lift_idempotent(z, x)?);
    }
    lifted.sort();
    Ok((lifted, split))
}

/// Distinct values taken by `s` on the components below `e` (roots of the
/// minimal polynomial of `s` in `eZ`).
fn eigenvalues(z: &StructAlgebra, s: &[Elem], e: &[Elem]) -> Vec<Elem> {
    let f = z.field();
    // Krylov sequence e, s, s^2, ... (all inside eZ).
    let mut powers: Vec<Vec<Elem>> = vec![e.to_vec()];
    loop {
        let next = z.mul(powers.last().unwrap(), s);
        let span = Subspace::span(f, z.dim(), &powers);
        if span.contains(&next) {
            let m = Mat::from_cols(f, z.dim(), &powers);
            let c = crate::linalg::solve_vec(&m, &next).expect("in span");
            let k = powers.len();
            // Horner on x^k - sum c_i x^i
            let eval = |x: Elem| (0..k).rev().fold(1, |v, i| f.sub(f.mul(v, x), c[i]));
            return f.elements().filter(|&x| eval(x) == 0).collect();
        }
        powers.push(next);
    }
}

/// `e <- 3e^2 - 2e^3` until idempotent.
pub fn lift_idempotent(a: &StructAlgebra, mut e: Vec<Elem>) -> Result<Vec<Elem>> {
    let f = a.field();
    let three = f.from_int(3);
    let two = f.from_int(2);
    for _ in 0..64 {
        let e2 = a.mul(&e, &e);
        if e2 == e {
            return Ok(e);
        }
        let e3 = a.mul(&e2, &e);
        e = a.sub(&a.scale(&e2, three), &a.scale(&e3, two));
    }
    Err(Error::CheckFailed("idempotent lifting did not converge".into()))
}

fn make_blocks(a: &StructAlgebra, center: Subspace, idems: Vec<Vec<Elem>>, split: bool) -> Result<CenterBlocks> {
    let f = a.field();
    let blocks = idems
        .into_iter()
        .map(|e| {
            let gens: Vec<Vec<Elem>> = (0..a.dim()).map(|i| a.mul(&e, &a.basis(i))).collect();
            BlockData { ideal: Subspace::span(f, a.dim(), &gens), idempotent: e, defect_group: None }
        })
        .collect();
    let cb = CenterBlocks { center, blocks, split };
    verify_blocks(a, &cb)?;
    Ok(cb)
}

/// Checks `sum e = 1`, orthogonality and centrality.
pub fn verify_blocks(a: &StructAlgebra, cb: &CenterBlocks) -> Result<()> {
    let mut total = a.zero();
    for (i, b) in cb.blocks.iter().enumerate() {
        total = a.add(&total, &b.idempotent);
        if !cb.center.contains(&b.idempotent) {
            return Err(Error::CheckFailed(format!("block {i} idempotent is not central")));
        }
        for (j, c) in cb.blocks.iter().enumerate() {
            let prod = a.mul(&b.idempotent, &c.idempotent);
            let want = if i == j { b.idempotent.clone() } else { a.zero() };
            if prod != want {
                return Err(Error::CheckFailed(format!("blocks {i} and {j} are not orthogonal idempotents")));
            }
        }
    }
    if total != a.one() {
        return Err(Error::CheckFailed("block idempotents do not sum to 1".into()));
    }
    Ok(())
}

/// Center and block decomposition of an arbitrary algebra.
pub fn center_and_blocks(a: &StructAlgebra) -> Result<CenterBlocks> {
    let center = a.center();
    let (z, emb) = a.subalgebra(&center)?;
    let (idems, split) = primitive_idempotents_commutative(&z)?;
    let mut mapped: Vec<Vec<Elem>> = idems.iter().map(|e| emb.apply(e)).collect();
    mapped.sort();
    make_blocks(a, center, mapped, split)
}

/// The class-sum algebra `Z(FG)` with the class list used as its basis.
pub fn class_algebra(g: &FiniteGroup, f: &crate::field::Fq) -> Result<(StructAlgebra, Vec<Vec<u32>>)> {
    let classes = g.conjugacy_classes();
    let k = classes.len();
    let mut class_of = vec![0usize; g.order()];
    for (c, cls) in classes.iter().enumerate() {
        for &x in cls {
            class_of[x as usize] = c;
        }
    }
    let is_rep: Vec<bool> = (0..g.order() as u32).map(|x| classes[class_of[x as usize]][0] == x).collect();
    let mut table = vec![vec![0u64; k]; k * k];
    for a in 0..k {
        for b in 0..k {
            for &x in &classes[a] {
                for &y in &classes[b] {
                    let z = g.mul(x, y);
                    if is_rep[z as usize] {
                        table[a * k + b][class_of[z as usize]] += 1;
                    }
                }
            }
        }
    }
    let p = f.p() as u64;
    let labels = classes.iter().map(|c| format!("K[{}]", g.label(c[0]))).collect();
    let mut unit = vec![0; k];
    unit[class_of[g.identity() as usize]] = 1;
    let z = StructAlgebra::from_fn(
        f,
        k,
        |a, b| {
            table[a * k + b]
                .iter()
                .enumerate()
                .filter(|(_, &n)| n % p != 0)
                .map(|(c, &n)| (c as u32, f.from_int((n % p) as i64)))
                .collect()
        },
        unit,
        labels,
        None,
    )?;
    Ok((z, classes))
}

/// Blocks of a group algebra `FG`, computed in the class algebra.
pub fn group_algebra_blocks(g: &FiniteGroup, a: &StructAlgebra) -> Result<CenterBlocks> {
    if a.dim() != g.order() {
        return Err(Error::DimensionMismatch("algebra is not the group algebra of this group".into()));
    }
    let (z, classes) = class_algebra(g, a.field())?;
    let (idems, split) = primitive_idempotents_commutative(&z)?;
    let sums: Vec<Vec<Elem>> = classes.iter().map(|c| super::subset_sum(g.order(), c)).collect();
    let center = Subspace::span(a.field(), a.dim(), &sums);
    let mut mapped: Vec<Vec<Elem>> = idems.iter().map(|e| vec_ops::combine(a.field(), a.dim(), e, &sums)).collect();
    mapped.sort();
    make_blocks(a, center, mapped, split)
}

/// Index of the principal block (augmentation 1) of a group algebra.
pub fn principal_block_index(cb: &CenterBlocks) -> Option<usize> {
    let f = cb.center.field();
    cb.blocks.iter().position(|b| b.idempotent.iter().fold(0, |s, &c| f.add(s, c)) == 1)
}

/// Oracle: all primitive idempotents of `Z(A)` by enumerating the center.
/// `None` if the center has more than `limit` elements.
pub fn blocks_brute_force(a: &StructAlgebra, limit: u64) -> Option<Vec<Vec<Elem>>> {
    let f = a.field();
    let z = a.center();
    let q = f.q() as u64;
    let count = q.checked_pow(z.dim() as u32)?;
    if count > limit {
        return None;
    }
    let mut idems = Vec::new();
    for code in 1..count {
        let mut coeffs = vec![0; z.dim()];
        let mut c = code;
        for x in coeffs.iter_mut() {
            *x = (c % q) as Elem;
            c /= q;
        }
        let e = vec_ops::combine(f, a.dim(), &coeffs, z.basis());
        if a.mul(&e, &e) == e {
            idems.push(e);
        }
    }
    let mut prim: Vec<Vec<Elem>> =
        idems.iter().filter(|e| !idems.iter().any(|g| g != *e && a.mul(g, e) == *g)).cloned().collect();
    prim.sort();
    Some(prim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::group_algebra;
    use crate::field::Fq;

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 3).unwrap()
    }

    #[test]
    fn s3_blocks() {
        let g = s3();
        let f3 = Fq::new(3, 1).unwrap();
        let a = group_algebra(&g, &f3).unwrap();
        let cb = center_and_blocks(&a).unwrap();
        assert_eq!(cb.blocks.len(), 1);
        let f4 = Fq::new(2, 2).unwrap();
        let a = group_algebra(&g, &f4).unwrap();
        let cb = center_and_blocks(&a).unwrap();
        let mut dims: Vec<usize> = cb.blocks.iter().map(|b| b.ideal.dim()).collect();
        dims.sort();
        assert_eq!(dims, vec![2, 4]);
        let via_classes = group_algebra_blocks(&g, &a).unwrap();
        let i1: Vec<_> = cb.blocks.iter().map(|b| b.idempotent.clone()).collect();
        let i2: Vec<_> = via_classes.blocks.iter().map(|b| b.idempotent.clone()).collect();
        assert_eq!(i1, i2);
        assert_eq!(blocks_brute_force(&a, 1 << 16).unwrap(), i1);
        let pb = principal_block_index(&cb).unwrap();
        assert_eq!(cb.blocks[pb].ideal.dim(), 2);
    }

    #[test]
    fn c3_over_gf4_splits_into_three() {
        let f4 = Fq::new(2, 2).unwrap();
        let g = FiniteGroup::cyclic(3).unwrap();
        let a = group_algebra(&g, &f4).unwrap();
        let cb = center_and_blocks(&a).unwrap();
        assert_eq!(cb.blocks.len(), 3);
        assert!(cb.split);
        assert!(cb.blocks.iter().all(|b| b.ideal.dim() == 1));
        // Over GF(2) the two nontrivial characters are conjugate.
        let f2 = Fq::new(2, 1).unwrap();
        let cb = center_and_blocks(&group_algebra(&g, &f2).unwrap()).unwrap();
        assert_eq!(cb.blocks.len(), 2);
        assert!(!cb.split);
    }

    #[test]
    fn s4_blocks_mod_3_and_2() {
        let g = FiniteGroup::from_permutations(&[vec![1, 0, 2, 3], vec![1, 2, 3, 0]], 4).unwrap();
        let f = Fq::new(3, 1).unwrap();
        let a = group_algebra(&g, &f).unwrap();
        let cb = group_algebra_blocks(&g, &a).unwrap();
        // principal block {1, sgn, 2} and the two degree-3 characters of defect zero
        let mut dims: Vec<usize> = cb.blocks.iter().map(|b| b.ideal.dim()).collect();
        dims.sort();
        assert_eq!(dims, vec![6, 9, 9]);
        let f2 = Fq::new(2, 1).unwrap();
        let cb = group_algebra_blocks(&g, &group_algebra(&g, &f2).unwrap()).unwrap();
        assert_eq!(cb.blocks.len(), 1);
    }
}
