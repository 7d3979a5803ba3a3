use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::StructAlgebra;
use crate::error::{Error, Result};
use crate::field::{Elem, Fq};
use crate::linalg::{solve_all, vec_ops, Mat, Subspace};

use super::bimodule::Bimodule;
use super::present::{bimodule_hom_space, left_hom_space, present, Side};
use super::tensor::{induced_map, tensor_bimodules, BalancedTensor};

/// Bounded complex of bimodules with `d_i: X_i -> X_{i-1}`.
#[derive(Debug, Clone)]
pub struct Complex {
    pub left: StructAlgebra,
    pub right: StructAlgebra,
    lo: i32,
    terms: Vec<Bimodule>,
    /// `diffs[k]` is `d_{lo+k+1}`.
    diffs: Vec<Mat>,
}

/// `{"terms": [...], "diffs": [...], "range": [lo, hi]}` with terms given by
/// dimension and optional degrees.
#[derive(Debug, Clone, Serialize)]
pub struct ComplexJson {
    pub terms: Vec<TermJson>,
    pub diffs: Vec<Vec<Vec<Elem>>>,
    pub range: [i32; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct TermJson {
    pub dim: usize,
    pub degrees: Option<Vec<u32>>,
}

impl Complex {
    /// Checks shapes, `d∘d = 0`, that each `d` is a bimodule map, and that
    /// it preserves degrees when the terms are graded.
    pub fn new(lo: i32, terms: Vec<Bimodule>, diffs: Vec<Mat>) -> Result<Complex> {
        let first = terms.first().ok_or_else(|| Error::BadParams("complex needs at least one term".into()))?;
        let c = Complex { left: first.left.clone(), right: first.right.clone(), lo, terms, diffs };
        c.verify()?;
        Ok(c)
    }

    pub(crate) fn from_parts(
        left: &StructAlgebra,
        right: &StructAlgebra,
        lo: i32,
        terms: Vec<Bimodule>,
        diffs: Vec<Mat>,
    ) -> Complex {
        Complex { left: left.clone(), right: right.clone(), lo, terms, diffs }
    }

    /// `M` placed in degree `deg`.
    pub fn concentrated(m: Bimodule, deg: i32) -> Complex {
        Complex { left: m.left.clone(), right: m.right.clone(), lo: deg, terms: vec![m], diffs: Vec::new() }
    }

    pub fn verify(&self) -> Result<()> {
        if self.diffs.len() + 1 != self.terms.len() {
            return Err(Error::DimensionMismatch("one differential between consecutive terms".into()));
        }
        for t in &self.terms {
            if !t.left.same_as(&self.left) || !t.right.same_as(&self.right) {
                return Err(Error::MiddleAlgebraMismatch);
            }
        }
        for i in self.lo + 1..=self.hi() {
            let d = self.d(i);
            let (src, tgt) = (self.term(i), self.term(i - 1));
            if d.rows() != tgt.dim() || d.cols() != src.dim() {
                return Err(Error::DimensionMismatch(format!("d_{i} has the wrong shape")));
            }
            if !is_bimodule_map(&d, &src, &tgt) {
                return Err(Error::NotChainMap(format!("d_{i} is not a bimodule map")));
            }
            if let (Some(gs), Some(gt)) = (src.grading(), tgt.grading()) {
                for x in 0..src.dim() {
                    let img = d.col(x);
                    if !vec_ops::is_zero(&img) && gt.degree(&img) != Some(gs.degrees()[x]) {
                        return Err(Error::NotGraded(format!("d_{i} does not preserve degrees")));
                    }
                }
            }
            if i > self.lo + 1 && !self.d(i - 1).mul(&d).is_zero() {
                return Err(Error::CheckFailed(format!("d_{} d_{i} is not zero", i - 1)));
            }
        }
        Ok(())
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }

    pub fn field(&self) -> &Fq {
        self.left.field()
    }

    /// Term in degree `i` (zero outside the range).
    pub fn term(&self, i: i32) -> Bimodule {
        if i < self.lo || i > self.hi() {
            Bimodule::zero(&self.left, &self.right)
        } else {
            self.terms[(i - self.lo) as usize].clone()
        }
    }

    pub fn term_ref(&self, i: i32) -> Option<&Bimodule> {
        if i < self.lo || i > self.hi() {
            None
        } else {
            Some(&self.terms[(i - self.lo) as usize])
        }
    }

    pub fn dim_at(&self, i: i32) -> usize {
        self.term_ref(i).map_or(0, |t| t.dim())
    }

    pub fn terms(&self) -> &[Bimodule] {
        &self.terms
    }

    /// `d_i: X_i -> X_{i-1}`.
    pub fn d(&self, i: i32) -> Mat {
        if i > self.lo && i <= self.hi() {
            self.diffs[(i - self.lo - 1) as usize].clone()
        } else {
            Mat::zeros(self.field(), self.dim_at(i - 1), self.dim_at(i))
        }
    }

    /// `X[k]_i = X_{i-k}` with differential `(-1)^k d`.
    pub fn shift(&self, k: i32) -> Complex {
        let sign = if k % 2 == 0 { self.field().one() } else { self.field().neg(1) };
        Complex {
            left: self.left.clone(),
            right: self.right.clone(),
            lo: self.lo + k,
            terms: self.terms.clone(),
            diffs: self.diffs.iter().map(|d| d.scaled(sign)).collect(),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.terms.iter().map(|t| t.dim()).sum()
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            terms: self
                .terms
                .iter()
                .map(|t| TermJson { dim: t.dim(), degrees: t.grading().map(|g| g.degrees().to_vec()) })
                .collect(),
            diffs: self.diffs.iter().map(|d| d.row_vecs()).collect(),
            range: [self.lo, self.hi()],
        }
    }
}

/// Whether `f: M -> N` commutes with both actions (checked on generators).
pub fn is_bimodule_map(f: &Mat, m: &Bimodule, n: &Bimodule) -> bool {
    m.left.generators().iter().all(|g| f.mul(&m.left_elem(g)) == n.left_elem(g).mul(f))
        && m.right.generators().iter().all(|h| f.mul(&m.right_elem(h)) == n.right_elem(h).mul(f))
}

/// Per-degree maps `X_i -> Y_i`, stored over `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct ChainMap {
    pub lo: i32,
    pub maps: Vec<Mat>,
}

impl ChainMap {
    /// Map in degree `i` (zero outside the stored range).
    pub fn at(&self, i: i32, x: &Complex, y: &Complex) -> Mat {
        let k = i - self.lo;
        if k >= 0 && (k as usize) < self.maps.len() {
            self.maps[k as usize].clone()
        } else {
            Mat::zeros(x.field(), y.dim_at(i), x.dim_at(i))
        }
    }

    pub fn identity(x: &Complex) -> ChainMap {
        ChainMap { lo: x.lo(), maps: x.terms().iter().map(|t| Mat::identity(x.field(), t.dim())).collect() }
    }

    pub fn zero(x: &Complex, y: &Complex) -> ChainMap {
        let (lo, hi) = (x.lo().min(y.lo()), x.hi().max(y.hi()));
        ChainMap { lo, maps: (lo..=hi).map(|i| Mat::zeros(x.field(), y.dim_at(i), x.dim_at(i))).collect() }
    }

    /// Checks shapes, `f d = d f`, and bimodule linearity.
    pub fn verify(&self, x: &Complex, y: &Complex) -> Result<()> {
        let (lo, hi) = (x.lo().min(y.lo()) - 1, x.hi().max(y.hi()) + 1);
        for i in lo..=hi {
            let f = self.at(i, x, y);
            if f.rows() != y.dim_at(i) || f.cols() != x.dim_at(i) {
                return Err(Error::NotChainMap(format!("map in degree {i} has the wrong shape")));
            }
            if x.dim_at(i) > 0 && y.dim_at(i) > 0 && !is_bimodule_map(&f, &x.term(i), &y.term(i)) {
                return Err(Error::NotChainMap(format!("map in degree {i} is not a bimodule map")));
            }
            let lhs = y.d(i).mul(&f);
            let rhs = self.at(i - 1, x, y).mul(&x.d(i));
            if lhs != rhs {
                return Err(Error::NotChainMap(format!("f d != d f in degree {i}")));
            }
        }
        Ok(())
    }
}

/// Degree `+1` maps `h_i: X_i -> Y_{i+1}` stored over `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct Homotopy {
    pub lo: i32,
    pub maps: Vec<Mat>,
}

impl Homotopy {
    pub fn at(&self, i: i32, x: &Complex, y: &Complex) -> Mat {
        let k = i - self.lo;
        if k >= 0 && (k as usize) < self.maps.len() {
            self.maps[k as usize].clone()
        } else {
            Mat::zeros(x.field(), y.dim_at(i + 1), x.dim_at(i))
        }
    }

    /// Whether `f - g = d h + h d` in every degree.
    pub fn witnesses(&self, f: &ChainMap, g: &ChainMap, x: &Complex, y: &Complex) -> bool {
        let (lo, hi) = (x.lo().min(y.lo()), x.hi().max(y.hi()));
        (lo..=hi).all(|i| {
            let lhs = f.at(i, x, y).sub(&g.at(i, x, y));
            let rhs = y.d(i + 1).mul(&self.at(i, x, y)).add(&self.at(i - 1, x, y).mul(&x.d(i)));
            lhs == rhs
        })
    }
}

/// `H_i = ker d_i / im d_{i+1}` with representatives and their degrees.
#[derive(Debug, Clone)]
pub struct HomologyGroup {
    pub degree: i32,
    pub dim: usize,
    pub cycles: Subspace,
    pub boundaries: Subspace,
    pub reps: Vec<Vec<Elem>>,
    pub degrees: Option<Vec<u32>>,
}

pub fn homology(x: &Complex) -> Vec<HomologyGroup> {
    let f = x.field();
    (x.lo()..=x.hi())
        .map(|i| {
            let n = x.dim_at(i);
            let cycles = Subspace::span(f, n, &x.d(i).kernel());
            let boundaries = Subspace::span(f, n, &x.d(i + 1).col_vecs());
            let mut cur = boundaries.clone();
            let mut reps = Vec::new();
            for z in cycles.basis() {
                if !cur.contains(z) {
                    reps.push(z.clone());
                    let mut all = cur.basis().to_vec();
                    all.push(z.clone());
                    cur = Subspace::span(f, n, &all);
                }
            }
            let degrees = x
                .term_ref(i)
                .and_then(|t| t.grading())
                .map(|g| reps.iter().map(|r| g.degree(r).unwrap_or(u32::MAX)).collect());
            HomologyGroup { degree: i, dim: reps.len(), cycles, boundaries, reps, degrees }
        })
        .collect()
}

/// Per-degree homology dimensions, keyed by degree (zeros omitted).
pub fn homology_dims(x: &Complex) -> BTreeMap<i32, usize> {
    homology(x).into_iter().filter(|h| h.dim > 0).map(|h| (h.degree, h.dim)).collect()
}

#[derive(Debug, Clone)]
pub struct QuasiIsoReport {
    pub pass: bool,
    /// Induced maps on homology, in the bases of `reps`.
    pub maps: Vec<(i32, Mat)>,
}

/// Verifies `f` is a chain map, then checks the induced maps on homology.
pub fn quasi_iso_check(f: &ChainMap, x: &Complex, y: &Complex) -> Result<QuasiIsoReport> {
    f.verify(x, y)?;
    let fld = x.field();
    let hx: BTreeMap<i32, HomologyGroup> = homology(x).into_iter().map(|h| (h.degree, h)).collect();
    let hy: BTreeMap<i32, HomologyGroup> = homology(y).into_iter().map(|h| (h.degree, h)).collect();
    let (lo, hi) = (x.lo().min(y.lo()), x.hi().max(y.hi()));
    let mut pass = true;
    let mut maps = Vec::new();
    for i in lo..=hi {
        let (dx, dy) = (hx.get(&i).map_or(0, |h| h.dim), hy.get(&i).map_or(0, |h| h.dim));
        if dx == 0 && dy == 0 {
            continue;
        }
        if dx != dy {
            pass = false;
        }
        let mut m = Mat::zeros(fld, dy, dx);
        if dx > 0 && dy > 0 {
            let (gx, gy) = (&hx[&i], &hy[&i]);
            let mut cols = gy.reps.clone();
            cols.extend(gy.boundaries.basis().iter().cloned());
            let sys = Mat::from_cols(fld, y.dim_at(i), &cols);
            let fi = f.at(i, x, y);
            for (c, r) in gx.reps.iter().enumerate() {
                let sol = crate::linalg::solve_vec(&sys, &fi.apply(r))
                    .ok_or_else(|| Error::NotChainMap(format!("image of a cycle in degree {i} is not a cycle")))?;
                for k in 0..dy {
                    m.set(k, c, sol[k]);
                }
            }
        }
        if dx != dy || !m.is_invertible() {
            pass = false;
        }
        maps.push((i, m));
    }
    Ok(QuasiIsoReport { pass, maps })
}

/// `cone(f)_i = X_{i-1} ⊕ Y_i` with `d(x, y) = (-dx, f x + dy)`.
pub fn cone(f: &ChainMap, x: &Complex, y: &Complex) -> Result<Complex> {
    let fld = x.field();
    let (lo, hi) = ((x.lo() + 1).min(y.lo()), (x.hi() + 1).max(y.hi()));
    let mut terms = Vec::new();
    for i in lo..=hi {
        let (a, b) = (x.term(i - 1), y.term(i));
        terms.push(Bimodule::direct_sum(&[&a, &b])?);
    }
    let mut diffs = Vec::new();
    for i in lo + 1..=hi {
        let (xa, yb) = (x.dim_at(i - 1), y.dim_at(i));
        let (xa2, yb2) = (x.dim_at(i - 2), y.dim_at(i - 1));
        let mut d = Mat::zeros(fld, xa2 + yb2, xa + yb);
        d.set_block(0, 0, &x.d(i - 1).scaled(fld.neg(1)));
        d.set_block(xa2, 0, &f.at(i - 1, x, y));
        d.set_block(xa2, xa, &y.d(i));
        diffs.push(d);
    }
    Ok(Complex::from_parts(&x.left, &x.right, lo, terms, diffs))
}

/// Linear structure a homotopy is required to respect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HomSpace {
    Plain,
    Left,
    Bimodule,
}

/// Basis of maps `X_i -> Y_{i+1}` in the chosen space, plus the vectors of
/// `X_i` on which two such maps must be compared.
fn hom_basis(src: &Bimodule, tgt: &Bimodule, space: HomSpace) -> Result<(Vec<Mat>, Vec<Vec<Elem>>)> {
    let f = src.field();
    if src.dim() == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    match space {
        HomSpace::Plain => {
            let mut maps = Vec::new();
            for r in 0..tgt.dim() {
                for c in 0..src.dim() {
                    let mut m = Mat::zeros(f, tgt.dim(), src.dim());
                    m.set(r, c, 1);
                    maps.push(m);
                }
            }
            Ok((maps, (0..src.dim()).map(|i| vec_ops::unit(src.dim(), i)).collect()))
        }
        HomSpace::Left | HomSpace::Bimodule => {
            let pres = present(src, Side::Left);
            if tgt.dim() == 0 {
                return Ok((Vec::new(), pres.gens));
            }
            let hs =
                if space == HomSpace::Left { left_hom_space(&pres, tgt) } else { bimodule_hom_space(src, &pres, tgt)? };
            let maps = hs.basis().iter().map(|n| pres.hom_matrix(tgt.lacts(), tgt.dim(), n)).collect();
            Ok((maps, pres.gens))
        }
    }
}

/// Solution of `Σ_k t_k F_k + d h + h d = T`.
#[derive(Debug, Clone)]
pub struct HomotopySolution {
    pub coeffs: Vec<Elem>,
    pub homotopy: Homotopy,
    /// Projections onto the `t` coordinates of a basis of the homogeneous
    /// solution space.
    pub coeff_kernel: Vec<Vec<Elem>>,
}

/// Solves for a homotopy `h: X -> Y` (and coefficients of `extra`) with
/// `T - Σ t_k F_k = d h + h d`, all maps in `space`.
pub fn solve_homotopy(
    x: &Complex,
    y: &Complex,
    target: &ChainMap,
    extra: &[ChainMap],
    space: HomSpace,
) -> Result<Option<HomotopySolution>> {
    let fld = x.field();
    let (lo, hi) = (x.lo().min(y.lo() - 1), x.hi().max(y.hi() - 1));
    let mut bases: Vec<Vec<Mat>> = Vec::new();
    let mut tests: BTreeMap<i32, Vec<Vec<Elem>>> = BTreeMap::new();
    for i in lo..=hi {
        let (b, t) = hom_basis(&x.term(i), &y.term(i + 1), space)?;
        bases.push(b);
        tests.insert(i, t);
    }
    let ne = extra.len();
    let offsets: Vec<usize> = bases
        .iter()
        .scan(ne, |acc, b| {
            let o = *acc;
            *acc += b.len();
            Some(o)
        })
        .collect();
    let nunk = ne + bases.iter().map(|b| b.len()).sum::<usize>();
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    let mut rhs: Vec<Elem> = Vec::new();
    for i in x.lo()..=x.hi() {
        let ty = y.dim_at(i);
        if ty == 0 {
            continue;
        }
        let k = (i - lo) as usize;
        let tv = &tests[&i];
        let d_in = x.d(i);
        let d_out = y.d(i + 1);
        let ti = target.at(i, x, y);
        for v in tv {
            let mut block = vec![vec![0; nunk]; ty];
            for (e, fe) in extra.iter().enumerate() {
                let w = fe.at(i, x, y).apply(v);
                for r in 0..ty {
                    block[r][e] = w[r];
                }
            }
            for (b, h) in bases[k].iter().enumerate() {
                let w = d_out.apply(&h.apply(v));
                for r in 0..ty {
                    block[r][offsets[k] + b] = fld.add(block[r][offsets[k] + b], w[r]);
                }
            }
            if k > 0 {
                let dv = d_in.apply(v);
                for (b, h) in bases[k - 1].iter().enumerate() {
                    let w = h.apply(&dv);
                    for r in 0..ty {
                        block[r][offsets[k - 1] + b] = fld.add(block[r][offsets[k - 1] + b], w[r]);
                    }
                }
            }
            rows.extend(block);
            rhs.extend(ti.apply(v));
        }
    }
    let homotopy_of = |sol: &[Elem]| -> Homotopy {
        let maps = (lo..=hi)
            .enumerate()
            .map(|(k, i)| {
                let mut m = Mat::zeros(fld, y.dim_at(i + 1), x.dim_at(i));
                for (b, h) in bases[k].iter().enumerate() {
                    m.add_scaled(h, sol[offsets[k] + b]);
                }
                m
            })
            .collect();
        Homotopy { lo, maps }
    };
    if rows.is_empty() {
        let sol = vec![0; nunk];
        let kernel = (0..ne).map(|e| vec_ops::unit(ne, e)).collect();
        return Ok(Some(HomotopySolution { coeffs: vec![0; ne], homotopy: homotopy_of(&sol), coeff_kernel: kernel }));
    }
    let a = Mat::from_rows(fld, nunk, &rows);
    let b = Mat::from_cols(fld, rhs.len(), &[rhs]);
    match solve_all(&a, &b)? {
        None => Ok(None),
        Some(s) => {
            let sol = s.particular.col(0);
            let coeff_kernel = s.kernel.iter().map(|k| k[..ne].to_vec()).filter(|k| !vec_ops::is_zero(k)).collect();
            Ok(Some(HomotopySolution { coeffs: sol[..ne].to_vec(), homotopy: homotopy_of(&sol), coeff_kernel }))
        }
    }
}

/// Outcome of a contractibility test.
#[derive(Debug, Clone)]
pub enum Contractibility {
    Contractible(Homotopy),
    NotContractible(String),
}

impl Contractibility {
    pub fn is_contractible(&self) -> bool {
        matches!(self, Contractibility::Contractible(_))
    }
}

/// Looks for `h` with `d h + h d = id` in the requested space.
pub fn contractible_check(x: &Complex, space: HomSpace) -> Result<Contractibility> {
    if let Some(h) = homology(x).iter().find(|h| h.dim > 0) {
        return Ok(Contractibility::NotContractible(format!("H_{} has dimension {}", h.degree, h.dim)));
    }
    let id = ChainMap::identity(x);
    let h = match space {
        HomSpace::Plain => plain_contraction(x),
        _ => match solve_homotopy(x, x, &id, &[], space)? {
            Some(s) => s.homotopy,
            None => {
                return Ok(Contractibility::NotContractible(format!("no {space:?} homotopy solves d h + h d = id")))
            }
        },
    };
    if !h.witnesses(&id, &ChainMap::zero(x, x), x, x) {
        return Err(Error::CheckFailed("constructed contraction does not satisfy d h + h d = id".into()));
    }
    Ok(Contractibility::Contractible(h))
}

/// For an exact complex over a field: with `X_i = B_i ⊕ C_i`, `h` inverts
/// `d: C_i -> B_{i-1}` and vanishes on `C_{i-1}`.
fn plain_contraction(x: &Complex) -> Homotopy {
    let f = x.field();
    let (lo, hi) = (x.lo() - 1, x.hi());
    let maps = (lo..=hi)
        .map(|i| {
            // h_i: X_i -> X_{i+1}
            let (n, m) = (x.dim_at(i), x.dim_at(i + 1));
            let mut h = Mat::zeros(f, m, n);
            if n == 0 || m == 0 {
                return h;
            }
            let d = x.d(i + 1);
            let bnd = Subspace::span(f, n, &d.col_vecs());
            let ker_next = Subspace::span(f, m, &d.kernel());
            let comp = ker_next.complement_indices();
            let dc = d.select(&(0..n).collect::<Vec<_>>(), &comp);
            // Basis of X_i: boundaries then complement coordinates.
            let mut basis: Vec<Vec<Elem>> = bnd.basis().to_vec();
            let bcomp = bnd.complement_indices();
            basis.extend(bcomp.iter().map(|&j| vec_ops::unit(n, j)));
            let change = Mat::from_cols(f, n, &basis).inverse().expect("boundaries plus complement span");
            for j in 0..n {
                let coords = change.col(j);
                let bpart: Vec<Elem> = (0..bnd.dim()).map(|k| coords[k]).collect();
                if vec_ops::is_zero(&bpart) {
                    continue;
                }
                let target = vec_ops::combine(f, n, &bpart, bnd.basis());
                let pre = crate::linalg::solve_vec(&dc, &target).expect("boundary is hit from the complement");
                let mut col = vec![0; m];
                for (k, &c) in comp.iter().enumerate() {
                    col[c] = pre[k];
                }
                for r in 0..m {
                    h.set(r, j, col[r]);
                }
            }
            h
        })
        .collect();
    Homotopy { lo, maps }
}

/// `X ⊗_{A′} Y` with its pieces `X_i ⊗ Y_j` located inside each term.
#[derive(Debug, Clone)]
pub struct TensorComplex {
    pub complex: Complex,
    /// `(i, j) -> (offset in term i + j, tensor data)`.
    pub pieces: BTreeMap<(i32, i32), (usize, BalancedTensor)>,
}

/// Total complex with `d(x ⊗ y) = dx ⊗ y + (-1)^{|x|} x ⊗ dy`.
pub fn tensor_over(x: &Complex, y: &Complex) -> Result<TensorComplex> {
    if !x.right.same_as(&y.left) {
        return Err(Error::MiddleAlgebraMismatch);
    }
    let fld = x.field();
    let (lo, hi) = (x.lo() + y.lo(), x.hi() + y.hi());
    let mut pieces = BTreeMap::new();
    let mut terms = Vec::new();
    for n in lo..=hi {
        let mut offset = 0;
        let mut parts = Vec::new();
        for i in x.lo()..=x.hi() {
            let j = n - i;
            if j < y.lo() || j > y.hi() {
                continue;
            }
            let t = tensor_bimodules(&x.term(i), &y.term(j))?;
            let d = t.dim();
            parts.push(t.module.clone());
            pieces.insert((i, j), (offset, t));
            offset += d;
        }
        let refs: Vec<&Bimodule> = parts.iter().collect();
        terms.push(Bimodule::direct_sum(&refs)?);
    }
    let term_dim = |n: i32| terms[(n - lo) as usize].dim();
    let mut diffs = Vec::new();
    for n in lo + 1..=hi {
        let mut d = Mat::zeros(fld, term_dim(n - 1), term_dim(n));
        for (&(i, j), (off, t)) in pieces.iter().filter(|(k, _)| k.0 + k.1 == n) {
            if let Some((off2, t2)) = pieces.get(&(i - 1, j)) {
                let m = induced_map(t, t2, &x.d(i), &Mat::identity(fld, y.dim_at(j)));
                d.set_block(*off2, *off, &m);
            }
            if let Some((off2, t2)) = pieces.get(&(i, j - 1)) {
                let sign = if i.rem_euclid(2) == 0 { fld.one() } else { fld.neg(1) };
                let m = induced_map(t, t2, &Mat::identity(fld, x.dim_at(i)), &y.d(j)).scaled(sign);
                d.set_block(*off2, *off, &m);
            }
        }
        diffs.push(d);
    }
    let complex = Complex::from_parts(&x.left, &y.right, lo, terms, diffs);
    debug_assert!(complex.verify().is_ok());
    Ok(TensorComplex { complex, pieces })
}
