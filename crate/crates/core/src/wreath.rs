//! Wreath products: `C^{⊗n}` with its `Ḡ≀Sₙ`-action, the crossed product
//! `A≀Sₙ`, the diagonal subalgebra, the Koszul sign cocycle, and wreath
//! products of bimodules and complexes together with the isomorphisms `f`
//! and `g`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{kron_vec, StructAlgebra};
use crate::brauer::{ActedAlgebra, Action};
use crate::complexes::{tensor_over, Bimodule, ChainMap, Complex, TensorComplex};
use crate::error::{Error, Result};
use crate::field::{Elem, Fq};
use crate::graded::{GradedAlgebra, Grading};
use crate::groups::{
    factorial, permute_tuple, tuple_from_index, tuple_to_index, wreath_group, FiniteGroup, Perm, Subgroup, WreathGroup,
};
use crate::linalg::{max_dim, vec_ops, Mat};

fn sym_perms(n: usize) -> Result<(FiniteGroup, Vec<Perm>)> {
    let sym = FiniteGroup::symmetric(n)?;
    let perms = sym.perms().expect("symmetric groups carry permutations").to_vec();
    Ok((sym, perms))
}

/// Tensor product of sparse vectors, row-major.
fn sparse_kron(parts: &[Vec<(u32, Elem)>], dims: &[usize], f: &Fq) -> Vec<(usize, Elem)> {
    let mut acc: Vec<(usize, Elem)> = vec![(0, f.one())];
    for (p, &d) in parts.iter().zip(dims) {
        let mut next = Vec::with_capacity(acc.len() * p.len());
        for &(i, c) in &acc {
            for &(j, e) in p {
                next.push((i * d + j as usize, f.mul(c, e)));
            }
        }
        acc = next;
    }
    acc
}

fn dense_kron(f: &Fq, cols: &[Vec<Elem>]) -> Vec<Elem> {
    cols.iter().skip(1).fold(cols[0].clone(), |acc, c| kron_vec(f, &acc, c))
}

/// `C^{⊗n}` graded by `Ḡⁿ` and acted on by `Ḡ≀Sₙ` through
/// `^((g),σ)(c_1⊗…⊗c_n) = ^{g_1}c_{σ⁻¹(1)} ⊗ … ⊗ ^{g_n}c_{σ⁻¹(n)}`.
#[derive(Debug, Clone)]
pub struct ActedTensorPower {
    pub acted: ActedAlgebra,
    pub grading: Grading,
    pub wreath: WreathGroup,
}

pub fn cn_action(c: &ActedAlgebra, grading: &Grading, n: usize) -> Result<ActedTensorPower> {
    if n == 0 {
        return Err(Error::BadParams("n must be at least 1".into()));
    }
    let f = c.alg.field();
    let d = c.alg.dim();
    let total = d
        .checked_pow(n as u32)
        .filter(|&t| t <= max_dim())
        .ok_or_else(|| Error::DimensionCap(format!("({d})^{n} exceeds {}", max_dim())))?;
    let alg = c.alg.tensor_power(n)?;
    let wr = wreath_group(&c.group, n)?;
    let (_, perms) = sym_perms(n)?;
    let m = c.group.order();
    let nf = factorial(n);
    let units: Vec<Vec<Vec<Elem>>> =
        (0..m as u32).map(|g| (0..d).map(|i| c.act(g, &vec_ops::unit(d, i))).collect()).collect();
    let mut mats = Vec::with_capacity(wr.group.order());
    for x in 0..wr.group.order() {
        let (t, s) = (tuple_from_index(x / nf, m, n), x % nf);
        let mut mat = Mat::zeros(f, total, total);
        for u in 0..total {
            let ut = tuple_from_index(u, d, n);
            let moved = permute_tuple(&perms[s], &ut);
            let cols: Vec<Vec<Elem>> = (0..n).map(|k| units[t[k]][moved[k]].clone()).collect();
            let col = dense_kron(f, &cols);
            for (r, &v) in col.iter().enumerate() {
                mat.set(r, u, v);
            }
        }
        mats.push(mat);
    }
    let acted = ActedAlgebra::new(alg, wr.group.clone(), Action::Linear(mats))?;
    let grp = FiniteGroup::direct_power(grading.group(), n)?;
    let deg = (0..total)
        .map(|u| {
            let ut = tuple_from_index(u, d, n);
            let dt: Vec<usize> = ut.iter().map(|&i| grading.degrees()[i] as usize).collect();
            tuple_to_index(&dt, m) as u32
        })
        .collect();
    Ok(ActedTensorPower { acted, grading: Grading::new(grp, deg)?, wreath: wr })
}

/// `A ≀ Σ = A^{⊗n} ⊗ kΣ` for `Σ ≤ Sₙ`. The basis element `(t, σ)` has index
/// `tuple_index(t) · |Σ| + position of σ in Σ`.
#[derive(Debug, Clone)]
pub struct WreathAlgebra {
    pub base: StructAlgebra,
    pub n: usize,
    pub sym: FiniteGroup,
    /// Elements of `Σ` as indices of `Sₙ`, sorted.
    pub sigma: Vec<u32>,
    pub algebra: StructAlgebra,
    /// `Ḡ≀Sₙ`-grading, present when the base is graded and `Σ = Sₙ`.
    pub graded: Option<GradedAlgebra>,
    pub group: Option<WreathGroup>,
}

impl WreathAlgebra {
    pub fn order(&self) -> usize {
        self.sigma.len()
    }

    pub fn position(&self, s: u32) -> Option<usize> {
        self.sigma.binary_search(&s).ok()
    }

    pub fn index(&self, tuple: &[usize], s: u32) -> usize {
        tuple_to_index(tuple, self.base.dim()) * self.order() + self.position(s).expect("element of Σ")
    }

    /// `(tuple, σ as an index of Sₙ)`.
    pub fn split(&self, i: usize) -> (Vec<usize>, u32) {
        let k = self.order();
        (tuple_from_index(i / k, self.base.dim(), self.n), self.sigma[i % k])
    }

    /// `(a_1 ⊗ … ⊗ a_n) ⊗ σ`.
    pub fn pure(&self, factors: &[Vec<Elem>], s: u32) -> Vec<Elem> {
        let f = self.base.field();
        let t = dense_kron(f, factors);
        let (k, p) = (self.order(), self.position(s).expect("element of Σ"));
        let mut out = vec![0; self.algebra.dim()];
        for (i, &c) in t.iter().enumerate() {
            out[i * k + p] = c;
        }
        out
    }

    /// `A^{⊗n} -> A≀Σ`, `x ↦ x ⊗ id`, as a matrix.
    pub fn base_embedding(&self) -> Mat {
        let f = self.base.field();
        let k = self.order();
        let p = self.position(self.sym.identity()).expect("Σ contains the identity");
        let nb = self.algebra.dim() / k;
        let mut m = Mat::zeros(f, self.algebra.dim(), nb);
        for i in 0..nb {
            m.set(i * k + p, i, 1);
        }
        m
    }
}

/// `A≀Sₙ`, or `A≀Σ` when `sigma` is given as a subgroup of `Sₙ`.
pub fn wreath_algebra(a: &StructAlgebra, n: usize, sigma: Option<&Subgroup>) -> Result<WreathAlgebra> {
    if n == 0 {
        return Err(Error::BadParams("n must be at least 1".into()));
    }
    let (sym, perms) = sym_perms(n)?;
    let sig: Vec<u32> = match sigma {
        Some(s) => {
            sym.subgroup(s.elements())?;
            s.elements().to_vec()
        }
        None => sym.elements().collect(),
    };
    let d = a.dim();
    let k = sig.len();
    let nb = d.checked_pow(n as u32).ok_or_else(|| Error::DimensionCap("tensor power overflows".into()))?;
    let dim = nb.saturating_mul(k);
    if dim > max_dim() {
        return Err(Error::DimensionCap(format!("(dim A)^n |Σ| = {dim} exceeds {}", max_dim())));
    }
    let pos: BTreeMap<u32, usize> = sig.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let f = a.field().clone();
    let dims = vec![d; n];
    let product = |x: usize, y: usize| -> Vec<(u32, Elem)> {
        let (t1, s1) = (tuple_from_index(x / k, d, n), sig[x % k]);
        let (t2, s2) = (tuple_from_index(y / k, d, n), sig[y % k]);
        let moved = permute_tuple(&perms[s1 as usize], &t2);
        let parts: Vec<Vec<(u32, Elem)>> = (0..n).map(|i| a.basis_product(t1[i], moved[i]).to_vec()).collect();
        let s = pos[&sym.mul(s1, s2)];
        sparse_kron(&parts, &dims, &f).into_iter().map(|(i, c)| ((i * k + s) as u32, c)).collect()
    };
    let unit_t = dense_kron(&f, &vec![a.unit().to_vec(); n]);
    let id_pos = pos[&sym.identity()];
    let mut unit = vec![0; dim];
    for (i, &c) in unit_t.iter().enumerate() {
        unit[i * k + id_pos] = c;
    }
    let labels = (0..dim)
        .map(|x| {
            let t = tuple_from_index(x / k, d, n);
            let ls: Vec<&str> = t.iter().map(|&i| a.labels()[i].as_str()).collect();
            format!("({})⊗{}", ls.join("⊗"), sym.label(sig[x % k]))
        })
        .collect();
    let algebra = StructAlgebra::from_fn(&f, dim, product, unit, labels, None)?;
    Ok(WreathAlgebra { base: a.clone(), n, sym, sigma: sig, algebra, graded: None, group: None })
}

/// `A≀Sₙ` graded by `Ḡ≀Sₙ` with `((g),σ)`-component `(A_{g_1}⊗…⊗A_{g_n})⊗σ`.
pub fn wreath_graded(a: &GradedAlgebra, n: usize) -> Result<WreathAlgebra> {
    let mut w = wreath_algebra(&a.alg, n, None)?;
    let wr = wreath_group(a.group(), n)?;
    let (d, m) = (a.dim(), a.group().order());
    let k = w.order();
    let deg = (0..w.algebra.dim())
        .map(|x| {
            let t = tuple_from_index(x / k, d, n);
            let dt: Vec<usize> = t.iter().map(|&i| a.grading.degrees()[i] as usize).collect();
            wr.index(tuple_to_index(&dt, m), x % k)
        })
        .collect();
    w.graded = Some(GradedAlgebra::new(w.algebra.clone(), Grading::new(wr.group.clone(), deg)?)?);
    w.group = Some(wr);
    Ok(w)
}

/// `ζ_wr = ζ^{⊗n}` followed by `x ↦ x ⊗ id`, for `ζ: C -> C_A(B)` given by
/// its matrix. Checks that the image centralizes `B^{⊗n}`, that the map is
/// multiplicative, and that it sends `Ḡⁿ`-degree `(g)` to `((g), id)`.
pub fn zeta_wr(w: &WreathAlgebra, c: &GradedAlgebra, zeta: &Mat) -> Result<Mat> {
    let wa = w.graded.as_ref().ok_or_else(|| Error::NotGraded("wreath algebra carries no grading".into()))?;
    let wr = w.group.as_ref().expect("graded wreath algebras carry their group");
    let f = w.base.field();
    let n = w.n;
    let dc = c.dim();
    let total = dc.pow(n as u32);
    let cols: Vec<Vec<Elem>> = (0..total)
        .map(|u| {
            let ut = tuple_from_index(u, dc, n);
            let factors: Vec<Vec<Elem>> = ut.iter().map(|&i| zeta.col(i)).collect();
            w.pure(&factors, w.sym.identity())
        })
        .collect();
    let map = Mat::from_cols(f, w.algebra.dim(), &cols);
    let one = wr.group.identity();
    let bn: Vec<Vec<Elem>> = wa.grading.component_indices(one).iter().map(|&i| vec_ops::unit(wa.dim(), i)).collect();
    let cn = c.alg.tensor_power(n)?;
    let m = c.group().order();
    for (u, img) in cols.iter().enumerate() {
        if bn.iter().any(|b| w.algebra.mul(b, img) != w.algebra.mul(img, b)) {
            return Err(Error::CheckFailed(format!("ζ_wr of basis element {u} does not centralize B^n")));
        }
        let ut = tuple_from_index(u, dc, n);
        let dt: Vec<usize> = ut.iter().map(|&i| c.grading.degrees()[i] as usize).collect();
        let want = wr.index(tuple_to_index(&dt, m), 0);
        if !vec_ops::is_zero(img) && wa.grading.degree(img) != Some(want) {
            return Err(Error::NotGraded(format!("ζ_wr of basis element {u} has the wrong degree")));
        }
        for v in 0..total {
            if map.apply(&cn.mul_basis(u, v)) != w.algebra.mul(img, &cols[v]) {
                return Err(Error::CheckFailed("ζ_wr is not multiplicative".into()));
            }
        }
    }
    Ok(map)
}

/// `Δ_{Sₙ}` inside `A≀Sₙ ⊗ (A′≀Sₙ)^op`, spanned by `(a⊗σ) ⊗ (a′⊗σ⁻¹)`, with
/// the isomorphism onto `(A⊗A′^op)≀Sₙ` sending it to `(a_k ⊗ (^σa′)_k)_k ⊗ σ`.
#[derive(Debug, Clone)]
pub struct Diagonal {
    pub delta: StructAlgebra,
    pub target: WreathAlgebra,
    pub iso: Mat,
    pub multiplicative: bool,
    pub bijective: bool,
    /// `σ`-components are sent to `σ`-components.
    pub sn_graded: bool,
}

pub fn diagonal_subalgebra(a: &StructAlgebra, a2: &StructAlgebra, n: usize) -> Result<Diagonal> {
    let wa = wreath_algebra(a, n, None)?;
    let wa2 = wreath_algebra(a2, n, None)?;
    let base = a.tensor(&a2.opposite())?;
    let target = wreath_algebra(&base, n, None)?;
    let (d, d2) = (a.dim(), a2.dim());
    let nf = factorial(n);
    let (nb, nb2) = (d.pow(n as u32), d2.pow(n as u32));
    let dim = nb * nb2 * nf;
    let f = a.field().clone();
    let sym = &wa.sym;
    let (_, perms) = sym_perms(n)?;
    // Δ basis index: (t · nb2 + t′) · n! + σ for (t, σ) ⊗ (t′, σ⁻¹).
    let split = |x: usize| (x / nf / nb2, (x / nf) % nb2, x % nf);
    let product = |x: usize, y: usize| -> Vec<(u32, Elem)> {
        let (t1, u1, s1) = split(x);
        let (t2, u2, s2) = split(y);
        let left = wa.algebra.basis_product(t1 * nf + s1, t2 * nf + s2);
        let i1 = sym.inv(s1 as u32) as usize;
        let i2 = sym.inv(s2 as u32) as usize;
        let right = wa2.algebra.basis_product(u2 * nf + i2, u1 * nf + i1);
        let mut out = Vec::with_capacity(left.len() * right.len());
        for &(p, c) in left {
            for &(q, e) in right {
                let (tp, sp) = (p as usize / nf, p as usize % nf);
                let uq = q as usize / nf;
                debug_assert_eq!(q as usize % nf, sym.inv(sp as u32) as usize);
                out.push((((tp * nb2 + uq) * nf + sp) as u32, f.mul(c, e)));
            }
        }
        out
    };
    let unit_a = dense_kron(&f, &vec![a.unit().to_vec(); n]);
    let unit_a2 = dense_kron(&f, &vec![a2.unit().to_vec(); n]);
    let mut unit = vec![0; dim];
    let id = sym.identity() as usize;
    for (i, &c) in unit_a.iter().enumerate() {
        for (j, &e) in unit_a2.iter().enumerate() {
            unit[(i * nb2 + j) * nf + id] = f.mul(c, e);
        }
    }
    let labels = (0..dim).map(|x| format!("δ{x}")).collect();
    let delta = StructAlgebra::from_fn(&f, dim, product, unit, labels, None)?;
    let mut iso = Mat::zeros(&f, target.algebra.dim(), dim);
    for x in 0..dim {
        let (t, u, s) = split(x);
        let tt = tuple_from_index(t, d, n);
        let ut = permute_tuple(&perms[s], &tuple_from_index(u, d2, n));
        let pairs: Vec<usize> = (0..n).map(|k| tt[k] * d2 + ut[k]).collect();
        iso.set(tuple_to_index(&pairs, d * d2) * nf + s, x, 1);
    }
    let bijective = iso.rank() == dim && target.algebra.dim() == dim;
    let sn_graded = (0..dim).all(|x| {
        let col = iso.col(x);
        col.iter().enumerate().all(|(r, &v)| v == 0 || r % nf == x % nf)
    });
    let pairs: Vec<(usize, usize)> = if dim * dim <= 1 << 16 {
        (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).collect()
    } else {
        (0..4096).map(|k| ((k * 7919) % dim, (k * 104_729 + 13) % dim)).collect()
    };
    let multiplicative =
        pairs.iter().all(|&(i, j)| iso.apply(&delta.mul_basis(i, j)) == target.algebra.mul(&iso.col(i), &iso.col(j)));
    Ok(Diagonal { delta, target, iso, multiplicative, bijective, sn_graded })
}

/// Koszul signs for permuting tensor factors: `ε_σ(d) = (-1)^k` where `k`
/// counts pairs `j < l` with `σ(j) > σ(l)` and both `d_j`, `d_l` odd.
#[derive(Debug, Clone)]
pub struct SignCocycle {
    pub n: usize,
    sym: FiniteGroup,
    perms: Vec<Perm>,
}

impl SignCocycle {
    pub fn new(n: usize) -> Result<SignCocycle> {
        if n == 0 || n > 6 {
            return Err(Error::BadParams(format!("sign cocycle supports 1 <= n <= 6, got {n}")));
        }
        let (sym, perms) = sym_perms(n)?;
        Ok(SignCocycle { n, sym, perms })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.sym
    }

    /// `signs[j]` is `(-1)^{d_j}`.
    pub fn eval(&self, sigma: u32, signs: &[i8]) -> i8 {
        let p = &self.perms[sigma as usize];
        let mut e = 1i8;
        for j in 0..self.n {
            for l in j + 1..self.n {
                if p[j] > p[l] && signs[j] < 0 && signs[l] < 0 {
                    e = -e;
                }
            }
        }
        e
    }

    /// Checks `ε_{στ}(d) = ε_σ(^τd) · ε_τ(d)` and `ε_id = 1` on all sign
    /// vectors, which is `^σ(^τx) = ^{στ}x` on homogeneous tensors.
    pub fn verify(&self) -> Result<()> {
        let n = self.n;
        let all: Vec<Vec<i8>> =
            (0..1usize << n).map(|m| (0..n).map(|j| if m >> j & 1 == 1 { -1 } else { 1 }).collect()).collect();
        let id = self.sym.identity();
        for d in &all {
            if self.eval(id, d) != 1 {
                return Err(Error::CheckFailed("ε_id is not identically 1".into()));
            }
            for s in self.sym.elements() {
                for t in self.sym.elements() {
                    let moved = permute_tuple(&self.perms[t as usize], d);
                    if self.eval(self.sym.mul(s, t), d) != self.eval(s, &moved) * self.eval(t, d) {
                        return Err(Error::CheckFailed(format!("cocycle law fails at ({s}, {t})")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Sign of `σ` on a piece of `X^{⊗n}` with the given homological degrees.
fn koszul_sign(f: &Fq, perm: &[u32], degs: &[i32]) -> Elem {
    let mut odd = false;
    for j in 0..degs.len() {
        for l in j + 1..degs.len() {
            if perm[j] > perm[l] && degs[j].rem_euclid(2) == 1 && degs[l].rem_euclid(2) == 1 {
                odd = !odd;
            }
        }
    }
    if odd {
        f.neg(1)
    } else {
        f.one()
    }
}

/// `(degree tuple, offset, factor dimensions)` of one summand.
pub type PowerPiece = (Vec<i32>, usize, Vec<usize>);

/// Layout of `(X^{⊗n})_D = ⊕ X_{i_1}⊗…⊗X_{i_n}` over degree tuples with
/// `Σ i_k = D`, in lexicographic order.
#[derive(Debug, Clone)]
pub struct PowerLayout {
    pub n: usize,
    pub lo: i32,
    /// Summands per total degree.
    pub pieces: BTreeMap<i32, Vec<PowerPiece>>,
    pub dims: BTreeMap<i32, usize>,
}

impl PowerLayout {
    pub fn new(x: &Complex, n: usize) -> PowerLayout {
        let (lo, hi) = (x.lo(), x.hi());
        let width = (hi - lo + 1) as usize;
        let mut pieces: BTreeMap<i32, Vec<PowerPiece>> = BTreeMap::new();
        let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
        for total in n as i32 * lo..=n as i32 * hi {
            dims.insert(total, 0);
            pieces.insert(total, Vec::new());
        }
        for idx in 0..width.pow(n as u32) {
            let t: Vec<i32> = tuple_from_index(idx, width, n).iter().map(|&v| lo + v as i32).collect();
            let total: i32 = t.iter().sum();
            let fd: Vec<usize> = t.iter().map(|&i| x.dim_at(i)).collect();
            let size: usize = fd.iter().product();
            let off = dims[&total];
            pieces.get_mut(&total).unwrap().push((t, off, fd));
            *dims.get_mut(&total).unwrap() += size;
        }
        PowerLayout { n, lo: n as i32 * lo, pieces, dims }
    }

    fn find(&self, total: i32, degs: &[i32]) -> (usize, &[usize]) {
        let p = self.pieces[&total].iter().find(|p| p.0 == degs).expect("piece exists");
        (p.1, &p.2)
    }
}

/// Wreath product of a complex with its layout and the two wreath algebras.
#[derive(Debug, Clone)]
pub struct WreathComplex {
    pub complex: Complex,
    pub layout: PowerLayout,
}

/// `X≀Σ = X^{⊗n} ⊗ kΣ` with
/// `(a⊗σ)(m⊗τ)(a′⊗π) = a·^σm·^{στ}a′ ⊗ στπ`, Koszul signs on `^σ`, and
/// differential `d ⊗ id`. Graded by `Ḡ≀Sₙ` when the terms are graded and
/// both wreath algebras carry gradings.
pub fn wreath_complex(x: &Complex, wl: &WreathAlgebra, wr: &WreathAlgebra) -> Result<WreathComplex> {
    if !wl.base.same_as(&x.left) || !wr.base.same_as(&x.right) || wl.n != wr.n || wl.sigma != wr.sigma {
        return Err(Error::MiddleAlgebraMismatch);
    }
    let f = x.field().clone();
    let n = wl.n;
    let layout = PowerLayout::new(x, n);
    let k = wl.order();
    let (_, perms) = sym_perms(n)?;
    let sym = &wl.sym;
    let graded = wl.graded.is_some() && wr.graded.is_some() && x.terms().iter().all(|t| t.grading().is_some());
    let mut terms = Vec::new();
    for (&total, pieces) in &layout.pieces {
        let dim = layout.dims[&total] * k;
        if dim > max_dim() {
            return Err(Error::DimensionCap(format!("wreath term of dimension {dim}")));
        }
        // Column for basis vector (piece, local tuple, τ) under a left basis element.
        let mut lact = Vec::with_capacity(wl.algebra.dim());
        for e in 0..wl.algebra.dim() {
            let (t, s) = wl.split(e);
            let perm = &perms[s as usize];
            let mut m = Mat::zeros(&f, dim, dim);
            for (degs, off, fd) in pieces {
                let sign = koszul_sign(&f, perm, degs);
                let mdegs = permute_tuple(perm, degs);
                let (moff, mfd) = layout.find(total, &mdegs);
                let size: usize = fd.iter().product();
                for l in 0..size {
                    let b = tuple_from_index_mixed(l, fd);
                    let mb = permute_tuple(perm, &b);
                    let cols: Vec<Vec<Elem>> = (0..n).map(|q| x.term(mdegs[q]).lmat(t[q]).col(mb[q])).collect();
                    let v = dense_kron(&f, &cols);
                    debug_assert_eq!(v.len(), mfd.iter().product::<usize>());
                    for tau_pos in 0..k {
                        let tau = wl.sigma[tau_pos];
                        let st = wl.position(sym.mul(s, tau)).expect("Σ is closed");
                        let col = (off + l) * k + tau_pos;
                        for (r, &c) in v.iter().enumerate() {
                            if c != 0 {
                                m.set((moff + r) * k + st, col, f.mul(sign, c));
                            }
                        }
                    }
                }
            }
            lact.push(m);
        }
        let mut ract = Vec::with_capacity(wr.algebra.dim());
        for e in 0..wr.algebra.dim() {
            let (t, p) = wr.split(e);
            let mut m = Mat::zeros(&f, dim, dim);
            for (degs, off, fd) in pieces {
                let size: usize = fd.iter().product();
                for tau_pos in 0..k {
                    let tau = wl.sigma[tau_pos];
                    let moved = permute_tuple(&perms[tau as usize], &t);
                    let tp = wl.position(sym.mul(tau, p)).expect("Σ is closed");
                    let mats: Vec<Mat> = (0..n).map(|q| x.term(degs[q]).rmat(moved[q]).clone()).collect();
                    for l in 0..size {
                        let b = tuple_from_index_mixed(l, fd);
                        let cols: Vec<Vec<Elem>> = (0..n).map(|q| mats[q].col(b[q])).collect();
                        let v = dense_kron(&f, &cols);
                        for (r, &c) in v.iter().enumerate() {
                            if c != 0 {
                                m.set((off + r) * k + tp, (off + l) * k + tau_pos, c);
                            }
                        }
                    }
                }
            }
            ract.push(m);
        }
        let mut module = Bimodule::from_parts(wl.algebra.clone(), wr.algebra.clone(), dim, lact, ract);
        if graded {
            let wg = wl.group.as_ref().expect("graded wreath algebra");
            let m = wg.base.order();
            let mut deg = vec![0u32; dim];
            for (degs, off, fd) in pieces {
                let grads: Vec<&Grading> = degs.iter().map(|&i| x.term_ref(i).unwrap().grading().unwrap()).collect();
                let size: usize = fd.iter().product();
                for l in 0..size {
                    let b = tuple_from_index_mixed(l, fd);
                    let dt: Vec<usize> = (0..n).map(|q| grads[q].degrees()[b[q]] as usize).collect();
                    for tau_pos in 0..k {
                        deg[(off + l) * k + tau_pos] = wg.index(tuple_to_index(&dt, m), wl.sigma[tau_pos] as usize);
                    }
                }
            }
            module = module.with_grading(Grading::new(wg.group.clone(), deg)?)?;
        }
        terms.push(module);
    }
    let mut diffs = Vec::new();
    let totals: Vec<i32> = layout.pieces.keys().copied().collect();
    for &total in totals.iter().skip(1) {
        let (src, tgt) = (layout.dims[&total], layout.dims[&(total - 1)]);
        let mut dm = Mat::zeros(&f, tgt, src);
        for (degs, off, fd) in &layout.pieces[&total] {
            let mut before = 0i32;
            for q in 0..n {
                let i = degs[q];
                if x.dim_at(i - 1) > 0 && x.dim_at(i) > 0 {
                    let mut tdegs = degs.clone();
                    tdegs[q] = i - 1;
                    let (toff, tfd) = layout.find(total - 1, &tdegs);
                    let mut block = Mat::identity(&f, 1);
                    for r in 0..n {
                        let factor = if r == q { x.d(i) } else { Mat::identity(&f, fd[r]) };
                        block = block.kron(&factor);
                    }
                    debug_assert_eq!(block.rows(), tfd.iter().product::<usize>());
                    let sign = if before.rem_euclid(2) == 1 { f.neg(1) } else { f.one() };
                    let mut cur = Mat::zeros(&f, tgt, src);
                    cur.set_block(toff, *off, &block.scaled(sign));
                    dm = dm.add(&cur);
                }
                before += i;
            }
        }
        diffs.push(dm.kron(&Mat::identity(&f, k)));
    }
    let complex = Complex::new(layout.lo, terms, diffs)?;
    Ok(WreathComplex { complex, layout })
}

fn tuple_from_index_mixed(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut t = vec![0; dims.len()];
    for q in (0..dims.len()).rev() {
        t[q] = idx % dims[q];
        idx /= dims[q];
    }
    t
}

/// `M̃≀Σ` for a single bimodule.
pub fn wreath_bimodule(m: &Bimodule, wl: &WreathAlgebra, wr: &WreathAlgebra) -> Result<Bimodule> {
    let w = wreath_complex(&Complex::concentrated(m.clone(), 0), wl, wr)?;
    Ok(w.complex.term(0))
}

/// `X^{⊗n}` as a complex of `(A^{⊗n}, A′^{⊗n})`-bimodules with the Koszul
/// differential, over given tensor-power algebras.
pub fn power_complex(
    x: &Complex,
    n: usize,
    left: &StructAlgebra,
    right: &StructAlgebra,
) -> Result<(Complex, PowerLayout)> {
    let f = x.field().clone();
    let layout = PowerLayout::new(x, n);
    let (da, da2) = (x.left.dim(), x.right.dim());
    if left.dim() != da.pow(n as u32) || right.dim() != da2.pow(n as u32) {
        return Err(Error::DimensionMismatch("tensor-power algebras have the wrong dimension".into()));
    }
    let mut terms = Vec::new();
    for (&total, pieces) in &layout.pieces {
        let dim = layout.dims[&total];
        let build = |acts: &dyn Fn(i32, usize) -> Mat, alg_dim: usize, base: usize| -> Vec<Mat> {
            (0..alg_dim)
                .map(|e| {
                    let t = tuple_from_index(e, base, n);
                    let blocks: Vec<Mat> = pieces
                        .iter()
                        .map(|(degs, _, _)| (0..n).fold(Mat::identity(&f, 1), |acc, q| acc.kron(&acts(degs[q], t[q]))))
                        .collect();
                    Mat::block_diag(&f, &blocks)
                })
                .collect()
        };
        let lact = build(&|i, a| x.term(i).lmat(a).clone(), left.dim(), da);
        let ract = build(&|i, a| x.term(i).rmat(a).clone(), right.dim(), da2);
        let mut module = Bimodule::from_parts(left.clone(), right.clone(), dim, lact, ract);
        if x.terms().iter().all(|t| t.grading().is_some()) {
            let g0 = x.terms()[0].grading().unwrap().group().clone();
            let grp = FiniteGroup::direct_power(&g0, n)?;
            let m = g0.order();
            let mut deg = Vec::with_capacity(dim);
            for (degs, _, fd) in pieces {
                let size: usize = fd.iter().product();
                for l in 0..size {
                    let b = tuple_from_index_mixed(l, fd);
                    let dt: Vec<usize> = (0..n)
                        .map(|q| x.term_ref(degs[q]).unwrap().grading().unwrap().degrees()[b[q]] as usize)
                        .collect();
                    deg.push(tuple_to_index(&dt, m) as u32);
                }
            }
            module = module.with_grading(Grading::new(grp, deg)?)?;
        }
        terms.push(module);
    }
    let mut diffs = Vec::new();
    let totals: Vec<i32> = layout.pieces.keys().copied().collect();
    for &total in totals.iter().skip(1) {
        let (src, tgt) = (layout.dims[&total], layout.dims[&(total - 1)]);
        let mut dm = Mat::zeros(&f, tgt, src);
        for (degs, off, fd) in &layout.pieces[&total] {
            let mut before = 0i32;
            for q in 0..n {
                let i = degs[q];
                if x.dim_at(i - 1) > 0 && x.dim_at(i) > 0 {
                    let mut tdegs = degs.clone();
                    tdegs[q] = i - 1;
                    let (toff, _) = layout.find(total - 1, &tdegs);
                    let block = (0..n).fold(Mat::identity(&f, 1), |acc, r| {
                        acc.kron(&if r == q { x.d(i) } else { Mat::identity(&f, fd[r]) })
                    });
                    let sign = if before.rem_euclid(2) == 1 { f.neg(1) } else { f.one() };
                    let mut cur = Mat::zeros(&f, tgt, src);
                    cur.set_block(toff, *off, &block.scaled(sign));
                    dm = dm.add(&cur);
                }
                before += i;
            }
        }
        diffs.push(dm);
    }
    Ok((Complex::new(layout.lo, terms, diffs)?, layout))
}

/// Outcome of checking the isomorphisms `f` and `g`.
#[derive(Debug, Clone, Serialize)]
pub struct WreathIsoReport {
    pub f_bijective: bool,
    pub f_chain_map: bool,
    pub f_graded: bool,
    pub g_bijective: bool,
    pub g_chain_map: bool,
    pub g_graded: bool,
    pub witnesses: Vec<String>,
}

impl WreathIsoReport {
    pub fn ok(&self) -> bool {
        self.f_bijective && self.f_chain_map && self.f_graded && self.g_bijective && self.g_chain_map && self.g_graded
    }
}

/// Builds `f: (A≀Sₙ) ⊗_{B^{⊗n}} X^{⊗n} -> X̃≀Sₙ` and
/// `g: X^{⊗n} ⊗_{B′^{⊗n}} (A′≀Sₙ) -> X̃≀Sₙ` for the identity component `X`
/// of a graded complex, and checks that both are bijective chain maps of
/// bimodules preserving `Ḡ≀Sₙ`-degrees.
pub fn wreath_isos(
    x: &Complex,
    a: &GradedAlgebra,
    a2: &GradedAlgebra,
    wl: &WreathAlgebra,
    wr: &WreathAlgebra,
    wx: &WreathComplex,
) -> Result<WreathIsoReport> {
    let f = x.field().clone();
    let n = wl.n;
    let (b, b_emb) = a.identity_algebra()?;
    let (b2, b2_emb) = a2.identity_algebra()?;
    let one = a.group().identity();
    let (x1, idx1) = crate::complexes::component_complex(x, one, &b, &b_emb, &b2, &b2_emb)?;
    let bn = b.tensor_power(n)?;
    let bn2 = b2.tensor_power(n)?;
    let (p1, layout1) = power_complex(&x1.clone(), n, &bn, &bn2)?;
    let wg = wl.group.as_ref().ok_or_else(|| Error::NotGraded("wreath algebra carries no grading".into()))?;
    let id_deg = wg.group.identity();
    // Regrade X^{⊗n} in Ḡ≀Sₙ: everything sits in the identity component.
    let p1 = regrade(&p1, &wg.group, id_deg)?;
    let emb = |bemb: &Mat, w: &WreathAlgebra, bdim: usize| -> Mat {
        let cols: Vec<Vec<Elem>> = (0..bdim.pow(n as u32))
            .map(|u| {
                let ut = tuple_from_index(u, bdim, n);
                let factors: Vec<Vec<Elem>> = ut.iter().map(|&i| bemb.col(i)).collect();
                w.pure(&factors, w.sym.identity())
            })
            .collect();
        Mat::from_cols(&f, w.algebra.dim(), &cols)
    };
    let e1 = emb(&b_emb, wl, b.dim());
    let e2 = emb(&b2_emb, wr, b2.dim());
    let wa = wl.graded.as_ref().unwrap();
    let wa2 = wr.graded.as_ref().unwrap();
    let all_l: Vec<usize> = (0..wl.algebra.dim()).collect();
    let all_r: Vec<usize> = (0..wr.algebra.dim()).collect();
    let reg_l =
        Bimodule::regular_graded(wa).restrict(&wl.algebra, &Mat::identity(&f, wl.algebra.dim()), &bn, &e1, &all_l)?;
    let reg_r =
        Bimodule::regular_graded(wa2).restrict(&bn2, &e2, &wr.algebra, &Mat::identity(&f, wr.algebra.dim()), &all_r)?;
    let tf = tensor_over(&Complex::concentrated(reg_l, 0), &p1)?;
    let tg = tensor_over(&p1, &Complex::concentrated(reg_r, 0))?;
    // ι: X^{⊗n} -> X̃≀Sₙ, identity-component tuples placed at τ = id.
    let k = wl.order();
    let id_pos = wl.position(wl.sym.identity()).unwrap();
    let iota = |total: i32| -> Mat {
        let mut m = Mat::zeros(&f, wx.complex.dim_at(total), p1.dim_at(total));
        for (degs, off1, fd1) in &layout1.pieces[&total] {
            let (off, fd) = wx.layout.find(total, degs);
            let size: usize = fd1.iter().product();
            for l in 0..size {
                let b1 = tuple_from_index_mixed(l, fd1);
                let full: Vec<usize> = (0..n).map(|q| idx1[(degs[q] - x.lo()) as usize][b1[q]]).collect();
                let pos = full.iter().zip(fd).fold(0, |acc, (&v, &d)| acc * d + v);
                m.set((off + pos) * k + id_pos, off1 + l, 1);
            }
        }
        m
    };
    let wxl = restrict_complex(&wx.complex, &wl.algebra, &Mat::identity(&f, wl.algebra.dim()), &bn2, &e2)?;
    let wxr = restrict_complex(&wx.complex, &bn, &e1, &wr.algebra, &Mat::identity(&f, wr.algebra.dim()))?;
    let mut witnesses = Vec::new();
    let (fmap, f_bij, f_gr) = assemble(
        &tf,
        &wxl,
        |total, (_, t)| {
            let io = iota(total);
            let term = wx.complex.term(total);
            let per_gen: Vec<Mat> = t.pres.gens.iter().map(|g| term.left_elem(g).mul(&io)).collect();
            let cols: Vec<Vec<Elem>> = (0..t.dim())
                .map(|c| {
                    let (kk, j) = t.split(c);
                    per_gen[kk].col(j)
                })
                .collect();
            Mat::from_cols(&f, term.dim(), &cols)
        },
        true,
    );
    let f_chain = match fmap.verify(&tf.complex, &wxl) {
        Ok(()) => true,
        Err(e) => {
            witnesses.push(format!("f: {e}"));
            false
        }
    };
    let (gmap, g_bij, g_gr) = assemble(
        &tg,
        &wxr,
        |total, (_, t)| {
            let io = iota(total);
            let term = wx.complex.term(total);
            let per_gen: Vec<Mat> = t
                .pres
                .gens
                .iter()
                .map(|g| io.apply(g))
                .map(|v| {
                    let cols: Vec<Vec<Elem>> = (0..wr.algebra.dim()).map(|e| term.rmat(e).apply(&v)).collect();
                    Mat::from_cols(&f, term.dim(), &cols)
                })
                .collect();
            let cols: Vec<Vec<Elem>> = (0..t.dim())
                .map(|c| {
                    let (kk, j) = t.split(c);
                    per_gen[kk].col(j)
                })
                .collect();
            Mat::from_cols(&f, term.dim(), &cols)
        },
        false,
    );
    let g_chain = match gmap.verify(&tg.complex, &wxr) {
        Ok(()) => true,
        Err(e) => {
            witnesses.push(format!("g: {e}"));
            false
        }
    };
    if !f_bij {
        witnesses.push("f is not bijective".into());
    }
    if !g_bij {
        witnesses.push("g is not bijective".into());
    }
    Ok(WreathIsoReport {
        f_bijective: f_bij,
        f_chain_map: f_chain,
        f_graded: f_gr,
        g_bijective: g_bij,
        g_chain_map: g_chain,
        g_graded: g_gr,
        witnesses,
    })
}

type PieceRef<'a> = (&'a usize, &'a crate::complexes::BalancedTensor);

fn assemble(
    t: &TensorComplex,
    target: &Complex,
    build: impl Fn(i32, PieceRef<'_>) -> Mat,
    left_piece: bool,
) -> (ChainMap, bool, bool) {
    let lo = t.complex.lo();
    let mut maps = Vec::new();
    let mut bij = true;
    let mut graded = true;
    for total in lo..=t.complex.hi() {
        let key = if left_piece { (0, total) } else { (total, 0) };
        let m = match t.pieces.get(&key) {
            Some((off, bt)) => {
                debug_assert_eq!(*off, 0);
                build(total, (off, bt))
            }
            None => Mat::zeros(target.field(), target.dim_at(total), 0),
        };
        if m.rows() != m.cols() || m.rank() != m.cols() {
            bij = false;
        }
        if let (Some(gs), Some(gt)) =
            (t.complex.term_ref(total).and_then(|x| x.grading()), target.term_ref(total).and_then(|x| x.grading()))
        {
            for c in 0..m.cols() {
                let img = m.col(c);
                if !vec_ops::is_zero(&img) && gt.degree(&img) != Some(gs.degrees()[c]) {
                    graded = false;
                }
            }
        }
        maps.push(m);
    }
    (ChainMap { lo, maps }, bij, graded)
}

fn regrade(x: &Complex, group: &FiniteGroup, deg: u32) -> Result<Complex> {
    let terms = x
        .terms()
        .iter()
        .map(|t| t.clone().with_grading(Grading::new(group.clone(), vec![deg; t.dim()])?))
        .collect::<Result<Vec<_>>>()?;
    let diffs = (x.lo() + 1..=x.hi()).map(|i| x.d(i)).collect();
    Complex::new(x.lo(), terms, diffs)
}

/// Restriction of scalars on every term of a complex.
pub fn restrict_complex(
    x: &Complex,
    left: &StructAlgebra,
    left_emb: &Mat,
    right: &StructAlgebra,
    right_emb: &Mat,
) -> Result<Complex> {
    let terms = x
        .terms()
        .iter()
        .map(|t| t.restrict(left, left_emb, right, right_emb, &(0..t.dim()).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let diffs = (x.lo() + 1..=x.hi()).map(|i| x.d(i)).collect();
    Complex::new(x.lo(), terms, diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{group_algebra, subset_sum};
    use crate::complexes::derived_equivalence_check;
    use crate::graded::BlockExtension;

    fn gf(p: u32, m: u32) -> Fq {
        Fq::new(p, m).unwrap()
    }

    fn principal_s3(f: &Fq) -> GradedAlgebra {
        let g = FiniteGroup::symmetric(3).unwrap();
        let c = g.find_perm(&[1, 2, 0]).unwrap();
        let n = g.generated(&[c]);
        BlockExtension::from_quotient(&g, &n, f, subset_sum(6, n.elements())).unwrap().algebra
    }

    #[test]
    fn multiplication_moves_factors() {
        let f = gf(3, 1);
        let a = group_algebra(&FiniteGroup::symmetric(3).unwrap(), &f).unwrap();
        let w = wreath_algebra(&a, 2, None).unwrap();
        let swap = w.sym.find_perm(&[1, 0]).unwrap();
        let id = w.sym.identity();
        let (x, y, u, v) = (a.basis(1), a.basis(3), a.basis(4), a.basis(5));
        let lhs = w.algebra.mul(&w.pure(&[x.clone(), y.clone()], swap), &w.pure(&[u.clone(), v.clone()], id));
        assert_eq!(lhs, w.pure(&[a.mul(&x, &v), a.mul(&y, &u)], swap));
        w.algebra.verify(7).unwrap();
    }

    #[test]
    fn wreath_of_principal_block() {
        let a = principal_s3(&gf(2, 2));
        let w = wreath_graded(&a, 2).unwrap();
        assert_eq!(w.algebra.dim(), 8);
        let wa = w.graded.as_ref().unwrap();
        assert_eq!(wa.group().order(), 8);
        wa.crossed_product_units(0).unwrap();
        assert_eq!(wa.identity_component().dim(), 1);
    }

    #[test]
    fn sign_cocycle_values() {
        let s = SignCocycle::new(3).unwrap();
        let c = s.group().find_perm(&[1, 2, 0]).unwrap();
        let t = s.group().find_perm(&[1, 0, 2]).unwrap();
        assert_eq!(s.eval(c, &[-1, -1, -1]), 1);
        assert_eq!(s.eval(t, &[-1, -1, 1]), -1);
        assert_eq!(s.eval(t, &[-1, 1, 1]), 1);
        for n in 1..=4 {
            SignCocycle::new(n).unwrap().verify().unwrap();
        }
        assert!(SignCocycle::new(7).is_err());
    }

    #[test]
    fn shifted_regular_swaps_with_sign() {
        let f = gf(3, 1);
        let a = group_algebra(&FiniteGroup::cyclic(2).unwrap(), &f).unwrap();
        let w = wreath_algebra(&a, 2, None).unwrap();
        let x = Complex::concentrated(Bimodule::regular(&a), 1);
        let wx = wreath_complex(&x, &w, &w).unwrap();
        assert_eq!((wx.complex.lo(), wx.complex.hi()), (2, 2));
        let term = wx.complex.term(2);
        assert_eq!(term.dim(), 8);
        let swap = w.sym.find_perm(&[1, 0]).unwrap();
        let id = w.sym.identity();
        let e = w.pure(&[a.one(), a.one()], swap);
        // basis (e_0 ⊗ e_1) ⊗ id ↦ -(e_1 ⊗ e_0) ⊗ (12)
        let src = w.pure(&[a.basis(0), a.basis(1)], id);
        let img = term.left_elem(&e).apply(&src);
        assert_eq!(img, vec_ops::scale(&f, &w.pure(&[a.basis(1), a.basis(0)], swap), f.neg(1)));
        let y = Complex::concentrated(Bimodule::regular(&a), 0);
        let wy = wreath_complex(&y, &w, &w).unwrap().complex.term(0);
        assert_eq!(wy.left_elem(&e).apply(&src), w.pure(&[a.basis(1), a.basis(0)], swap));
    }

    #[test]
    fn regular_wreath_is_regular_and_derived() {
        let a = principal_s3(&gf(2, 2));
        let w = wreath_graded(&a, 2).unwrap();
        let x = Complex::concentrated(Bimodule::regular_graded(&a), 0);
        let wx = wreath_complex(&x, &w, &w).unwrap();
        let m = wx.complex.term(0);
        let reg = Bimodule::regular(&w.algebra);
        assert!(m.lacts().iter().zip(reg.lacts()).all(|(p, q)| p == q));
        assert!(m.racts().iter().zip(reg.racts()).all(|(p, q)| p == q));
        let wa = w.graded.as_ref().unwrap();
        let r = derived_equivalence_check(&wx.complex, Some((&wa.grading, &wa.grading)), true).unwrap();
        assert!(r.derived && r.rickard == Some(true) && r.graded == Some(true), "{:?}", r.witnesses);
        let iso = wreath_isos(&x, &a, &a, &w, &w, &wx).unwrap();
        assert!(iso.ok(), "{iso:?}");
    }

    #[test]
    fn isos_for_shifted_two_term_complex() {
        let f = gf(2, 2);
        let a = principal_s3(&f);
        let w = wreath_graded(&a, 2).unwrap();
        let m = Bimodule::regular_graded(&a);
        let x = Complex::new(0, vec![m.clone(), m], vec![Mat::identity(&f, a.dim())]).unwrap().shift(1);
        let wx = wreath_complex(&x, &w, &w).unwrap();
        assert_eq!((wx.complex.lo(), wx.complex.hi()), (2, 4));
        let iso = wreath_isos(&x, &a, &a, &w, &w, &wx).unwrap();
        assert!(iso.ok(), "{iso:?}");
    }

    #[test]
    fn diagonal_of_kc2() {
        let a = group_algebra(&FiniteGroup::cyclic(2).unwrap(), &gf(2, 1)).unwrap();
        let d = diagonal_subalgebra(&a, &a, 2).unwrap();
        assert_eq!(d.delta.dim(), 32);
        assert!(d.multiplicative && d.bijective && d.sn_graded);
        d.delta.verify(1).unwrap();
    }

    #[test]
    fn cn_action_on_group_algebras() {
        let f = gf(3, 1);
        let g = FiniteGroup::symmetric(3).unwrap();
        let kg = group_algebra(&g, &f).unwrap();
        let c = ActedAlgebra::group_algebra_conjugation(&g, kg).unwrap();
        let grading = Grading::new(g.clone(), (0..6).collect()).unwrap();
        let p = cn_action(&c, &grading, 2).unwrap();
        assert_eq!(p.acted.alg.dim(), 36);
        assert_eq!(p.acted.group.order(), 72);
        let one = cn_action(&c, &grading, 1).unwrap();
        for x in 0..6u32 {
            for i in 0..6 {
                let v = vec_ops::unit(6, i);
                assert_eq!(one.acted.act(x, &v), c.act(x, &v));
            }
        }
    }

    #[test]
    fn zeta_wr_lands_in_centralizer() {
        let a = principal_s3(&gf(2, 2));
        let w = wreath_graded(&a, 2).unwrap();
        let z = zeta_wr(&w, &a, &Mat::identity(a.field(), a.dim())).unwrap();
        assert_eq!((z.rows(), z.cols()), (8, 4));
    }

    #[test]
    fn sigma_subgroup_wreath() {
        let a = principal_s3(&gf(2, 2)).alg;
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let c3 = s3.generated(&[s3.find_perm(&[1, 2, 0]).unwrap()]);
        let w = wreath_algebra(&a, 3, Some(&c3)).unwrap();
        assert_eq!(w.algebra.dim(), 8 * 3);
        w.algebra.verify(3).unwrap();
        let x = Complex::concentrated(Bimodule::regular(&a), 1);
        let wx = wreath_complex(&x, &w, &w).unwrap();
        assert_eq!(wx.complex.lo(), 3);
        let r = derived_equivalence_check(&wx.complex, None, true).unwrap();
        assert!(r.derived && r.rickard == Some(true), "{:?}", r.witnesses);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_case() -> impl Strategy<Value = (usize, Vec<u32>, u32, u32)> {
            prop_oneof![Just(2usize), Just(3usize)].prop_flat_map(|n| {
                let d = if n == 2 { 6 } else { 2 };
                let nf = if n == 2 { 2 } else { 6 };
                (Just(n), prop::collection::vec(0u32..3, 2 * n * d), 0..nf as u32, 0..nf as u32)
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            /// `(f, σ)(g, τ) = (f · σ(g), στ)` with `σ(g)_i = g_{σ⁻¹(i)}`.
            #[test]
            fn pure_tensors_multiply_by_permuting((n, coeffs, s, t) in arb_case()) {
                let f = gf(3, 1);
                let g = if n == 2 { FiniteGroup::symmetric(3).unwrap() } else { FiniteGroup::cyclic(2).unwrap() };
                let a = group_algebra(&g, &f).unwrap();
                let w = wreath_algebra(&a, n, None).unwrap();
                let d = a.dim();
                let xs: Vec<Vec<Elem>> = coeffs.chunks(d).map(|c| c.to_vec()).collect();
                let (fs, gs) = xs.split_at(n);
                let perm = &w.sym.perms().unwrap()[s as usize];
                let moved: Vec<Vec<Elem>> = (0..n)
                    .map(|i| gs[perm.iter().position(|&j| j as usize == i).unwrap()].clone())
                    .collect();
                let prod: Vec<Vec<Elem>> = fs.iter().zip(&moved).map(|(x, y)| a.mul(x, y)).collect();
                let lhs = w.algebra.mul(&w.pure(fs, s), &w.pure(gs, t));
                prop_assert_eq!(lhs, w.pure(&prod, w.sym.mul(s, t)));
            }
        }
    }
}
