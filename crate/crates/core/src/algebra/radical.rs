//! Jacobson radicals.
//!
//! Commutative algebras use the Frobenius kernel. Everything else goes
//! through the characteristic-p trace procedure over the prime field:
//! `I_0 = {x : Tr(xy) = 0 for all y}` and
//! `I_i = {x in I_{i-1} : g_i(xy) = 0 for all y}` with
//! `g_i(x) = Tr(X^{p^i}) / p^i mod p` for an integer lift `X` of the
//! regular representation; `I_l` with `l = floor(log_p D)` is the radical.

use crate::field::{Elem, Fq};
use crate::linalg::{vec_ops, Mat, Subspace};

use super::StructAlgebra;

pub(crate) fn radical(a: &StructAlgebra) -> Subspace {
    if a.is_commutative() {
        radical_of_commutative(a)
    } else {
        trace_radical(a)
    }
}

/// Nilradical of a commutative algebra: the kernel of `x -> x^{q^k}` with
/// `q^k >= dim`.
pub fn radical_of_commutative(a: &StructAlgebra) -> Subspace {
    let f = a.field();
    let d = a.dim();
    let q = f.q() as u64;
    let cols: Vec<Vec<Elem>> = (0..d).map(|j| a.pow(&a.basis(j), q)).collect();
    let frob = Mat::from_cols(f, d, &cols);
    let mut power = frob.clone();
    let mut reach = q;
    while reach < d as u64 {
        power = power.mul(&frob);
        reach *= q;
    }
    Subspace::span(f, d, &power.kernel())
}

/// The algebra viewed over its prime field: basis `ω^k b_i` at index `i m + k`.
struct PrimeView<'a> {
    a: &'a StructAlgebra,
    m: usize,
    omega: Vec<Elem>,
}

impl<'a> PrimeView<'a> {
    fn new(a: &'a StructAlgebra) -> Self {
        let f = a.field();
        let m = f.m() as usize;
        let omega = (0..m)
            .map(|k| {
                let mut c = vec![0u32; m];
                c[k] = 1;
                f.from_coeffs(&c)
            })
            .collect();
        PrimeView { a, m, omega }
    }

    fn big(&self) -> usize {
        self.a.dim() * self.m
    }

    fn lift(&self, x: &[u32]) -> Vec<Elem> {
        let f = self.a.field();
        x.chunks(self.m).map(|c| f.from_coeffs(c)).collect()
    }

    fn lower(&self, x: &[Elem]) -> Vec<u32> {
        let f = self.a.field();
        x.iter().flat_map(|&c| f.coeffs(c)).collect()
    }

    fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        self.lower(&self.a.mul(&self.lift(x), &self.lift(y)))
    }

    /// Prime-field matrix of left multiplication, entries in `0..p`.
    fn left(&self, x: &[u32]) -> Vec<u32> {
        let f = self.a.field();
        let lm = self.a.left_matrix(&self.lift(x));
        let (d, m) = (self.a.dim(), self.m);
        let big = d * m;
        let mut out = vec![0u32; big * big];
        for s in 0..d {
            for j in 0..d {
                let v = lm.get(s, j);
                if v == 0 {
                    continue;
                }
                for l in 0..m {
                    let c = f.coeffs(f.mul(v, self.omega[l]));
                    for (k, &ck) in c.iter().enumerate() {
                        out[(s * m + k) * big + j * m + l] = ck;
                    }
                }
            }
        }
        out
    }
}

fn int_matmul(a: &[u32], b: &[u32], n: usize, modulus: u64) -> Vec<u32> {
    let mut out = vec![0u32; n * n];
    let mut acc = vec![0u64; n];
    for i in 0..n {
        acc.iter_mut().for_each(|x| *x = 0);
        for k in 0..n {
            let x = a[i * n + k] as u64;
            if x == 0 {
                continue;
            }
            let row = &b[k * n..(k + 1) * n];
            for j in 0..n {
                acc[j] += x * row[j] as u64;
            }
            if k % 256 == 255 {
                acc.iter_mut().for_each(|v| *v %= modulus);
            }
        }
        for j in 0..n {
            out[i * n + j] = (acc[j] % modulus) as u32;
        }
    }
    out
}

/// `Tr(X^{p^i}) / p^i mod p` for the integer lift `X` of `mat`.
fn g_value(mat: &[u32], n: usize, p: u64, i: u32) -> u32 {
    let modulus = p.pow(i + 1);
    let mut cur = mat.to_vec();
    for _ in 0..i {
        // cur <- cur^p
        let base = cur.clone();
        let mut acc = base.clone();
        for _ in 1..p {
            acc = int_matmul(&acc, &base, n, modulus);
        }
        cur = acc;
    }
    let tr: u64 = (0..n).map(|k| cur[k * n + k] as u64).sum::<u64>() % modulus;
    let pi = p.pow(i);
    debug_assert_eq!(tr % pi, 0, "power trace not divisible by p^i");
    ((tr / pi) % p) as u32
}

fn trace_radical(a: &StructAlgebra) -> Subspace {
    let f = a.field();
    let p = f.p();
    let fp = Fq::new(p, 1).expect("prime field");
    let view = PrimeView::new(a);
    let big = view.big();
    let units: Vec<Vec<u32>> = (0..big).map(|c| vec_ops::unit(big, c)).collect();
    let dot = |x: &[u32], w: &[u32]| -> u32 { x.iter().zip(w).fold(0u32, |s, (&u, &v)| fp.add(s, fp.mul(u, v))) };

    // Level 0: trace form.
    let traces: Vec<u32> = units
        .iter()
        .map(|e| {
            let l = view.left(e);
            (0..big).fold(0u32, |s, k| fp.add(s, l[k * big + k]))
        })
        .collect();
    let mut gram = Mat::zeros(&fp, big, big);
    for (ai, ea) in units.iter().enumerate() {
        for (bi, eb) in units.iter().enumerate() {
            gram.set(bi, ai, dot(&view.mul(ea, eb), &traces));
        }
    }
    let mut ideal = Subspace::span(&fp, big, &gram.kernel());

    let mut level = 1u32;
    while (p as u64).pow(level) <= big as u64 && !ideal.is_zero() {
        let basis = ideal.basis().to_vec();
        let g: Vec<u32> = basis.iter().map(|v| g_value(&view.left(v), big, p as u64, level)).collect();
        let r = basis.len();
        let mut h = Mat::zeros(&fp, big, r);
        for (ai, v) in basis.iter().enumerate() {
            for (bi, eb) in units.iter().enumerate() {
                let prod = view.mul(v, eb);
                let c = ideal.coords(&prod).expect("trace levels are ideals");
                h.set(bi, ai, dot(&c, &g));
            }
        }
        let gens: Vec<Vec<u32>> = h.kernel().iter().map(|mu| vec_ops::combine(&fp, big, mu, &basis)).collect();
        ideal = Subspace::span(&fp, big, &gens);
        level += 1;
    }
    let gens: Vec<Vec<Elem>> = ideal.basis().iter().map(|v| view.lift(v)).collect();
    Subspace::span(f, a.dim(), &gens)
}

/// Oracle: grows a nilpotent ideal by any coset representative whose ideal
/// together with it stays nilpotent. Returns `None` when the enumeration
/// would exceed `limit` candidates per pass.
pub fn radical_brute_force(a: &StructAlgebra, limit: u64) -> Option<Subspace> {
    let f = a.field();
    let d = a.dim();
    let q = f.q() as u64;
    let mut cur = Subspace::zero(f, d);
    'outer: loop {
        let free = cur.complement_indices();
        let count = q.checked_pow(free.len() as u32)?;
        if count > limit {
            return None;
        }
        for code in 1..count {
            let mut x = vec![0; d];
            let mut c = code;
            for &i in &free {
                x[i] = (c % q) as Elem;
                c /= q;
            }
            if !a.is_nilpotent(&x) {
                continue;
            }
            let mut gens = cur.basis().to_vec();
            gens.push(x);
            let ideal = a.ideal_generated(&Subspace::span(f, d, &gens));
            if ideal.dim() > cur.dim() && a.is_nilpotent_space(&ideal) {
                cur = ideal;
                continue 'outer;
            }
        }
        return Some(cur);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::group_algebra;
    use crate::groups::FiniteGroup;

    #[test]
    fn augmentation_ideal_of_c3_mod_3() {
        let f = Fq::new(3, 1).unwrap();
        let a = group_algebra(&FiniteGroup::cyclic(3).unwrap(), &f).unwrap();
        let j = a.jacobson_radical().unwrap();
        assert_eq!(j.dim(), 2);
        assert_eq!(radical_brute_force(&a, 1 << 20).unwrap(), j);
    }

    #[test]
    fn noncommutative_group_algebras() {
        let s3 = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 3).unwrap();
        // kS3: p = 3 gives a 4-dimensional radical, p = 2 a 1-dimensional one.
        for (p, m, expect) in [(3, 1, 4), (2, 1, 1), (2, 2, 1), (5, 1, 0)] {
            let f = Fq::new(p, m).unwrap();
            let a = group_algebra(&s3, &f).unwrap();
            let j = a.jacobson_radical().unwrap();
            assert_eq!(j.dim(), expect, "p = {p}, m = {m}");
            assert_eq!(trace_radical(&a), j);
            assert_eq!(radical_brute_force(&a, 1 << 20).unwrap(), j);
        }
    }

    #[test]
    fn trace_and_frobenius_agree_on_commutative() {
        for (p, m, n) in [(2, 1, 4), (3, 1, 3), (2, 2, 2), (3, 1, 6)] {
            let f = Fq::new(p, m).unwrap();
            let a = group_algebra(&FiniteGroup::cyclic(n).unwrap(), &f).unwrap();
            assert_eq!(trace_radical(&a), radical_of_commutative(&a));
        }
    }
}
