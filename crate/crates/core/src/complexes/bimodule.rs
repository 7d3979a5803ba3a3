use std::sync::Arc;

use crate::algebra::StructAlgebra;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::graded::{GradedAlgebra, Grading, Units};
use crate::linalg::{vec_ops, Mat};

/// A finite-dimensional `(A, A′)`-bimodule, stored as one action matrix per
/// basis element of each algebra, with an optional coordinate grading.
#[derive(Debug, Clone)]
pub struct Bimodule {
    pub left: StructAlgebra,
    pub right: StructAlgebra,
    dim: usize,
    lact: Arc<Vec<Mat>>,
    ract: Arc<Vec<Mat>>,
    grading: Option<Grading>,
}

const EXHAUSTIVE_DIM: usize = 48;

impl Bimodule {
    /// `lact[i]` is `m -> e_i m`, `ract[j]` is `m -> m e′_j`.
    pub fn new(left: StructAlgebra, right: StructAlgebra, lact: Vec<Mat>, ract: Vec<Mat>) -> Result<Bimodule> {
        let dim = lact.first().map_or(0, |m| m.rows());
        let m = Bimodule::from_parts(left, right, dim, lact, ract);
        m.verify()?;
        Ok(m)
    }

    pub(crate) fn from_parts(
        left: StructAlgebra,
        right: StructAlgebra,
        dim: usize,
        lact: Vec<Mat>,
        ract: Vec<Mat>,
    ) -> Bimodule {
        Bimodule { left, right, dim, lact: Arc::new(lact), ract: Arc::new(ract), grading: None }
    }

    /// Zero module.
    pub fn zero(left: &StructAlgebra, right: &StructAlgebra) -> Bimodule {
        let f = left.field();
        Bimodule::from_parts(
            left.clone(),
            right.clone(),
            0,
            vec![Mat::zeros(f, 0, 0); left.dim()],
            vec![Mat::zeros(f, 0, 0); right.dim()],
        )
    }

    /// `A` as an `(A, A)`-bimodule.
    pub fn regular(a: &StructAlgebra) -> Bimodule {
        let d = a.dim();
        let lact = (0..d).map(|i| a.left_matrix(&a.basis(i))).collect();
        let ract = (0..d).map(|i| a.right_matrix(&a.basis(i))).collect();
        Bimodule::from_parts(a.clone(), a.clone(), d, lact, ract)
    }

    /// Graded regular bimodule.
    pub fn regular_graded(a: &GradedAlgebra) -> Bimodule {
        let mut m = Bimodule::regular(&a.alg);
        m.grading = Some(a.grading.clone());
        m
    }

    /// `A` as an `(A, A′)`-bimodule with `m · a′ = m ψ(a′)`; `psi` maps
    /// `A′` coordinates to `A` coordinates and must be an algebra map.
    pub fn twisted(a: &StructAlgebra, a2: &StructAlgebra, psi: &Mat) -> Result<Bimodule> {
        if psi.rows() != a.dim() || psi.cols() != a2.dim() {
            return Err(Error::DimensionMismatch("twist matrix has the wrong shape".into()));
        }
        let d = a.dim();
        let lact = (0..d).map(|i| a.left_matrix(&a.basis(i))).collect();
        let ract = (0..a2.dim()).map(|j| a.right_matrix(&psi.col(j))).collect();
        Bimodule::new(a.clone(), a2.clone(), lact, ract)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &crate::field::Fq {
        self.left.field()
    }

    pub fn lmat(&self, i: usize) -> &Mat {
        &self.lact[i]
    }

    pub fn rmat(&self, j: usize) -> &Mat {
        &self.ract[j]
    }

    pub fn lacts(&self) -> &[Mat] {
        &self.lact
    }

    pub fn racts(&self) -> &[Mat] {
        &self.ract
    }

    /// Matrix of `m -> a m` for an arbitrary element.
    pub fn left_elem(&self, a: &[Elem]) -> Mat {
        Mat::combination(self.field(), self.dim, self.dim, a, &self.lact)
    }

    /// Matrix of `m -> m a′`.
    pub fn right_elem(&self, a: &[Elem]) -> Mat {
        Mat::combination(self.field(), self.dim, self.dim, a, &self.ract)
    }

    pub fn grading(&self) -> Option<&Grading> {
        self.grading.as_ref()
    }

    pub fn with_grading(mut self, g: Grading) -> Result<Bimodule> {
        if g.dim() != self.dim {
            return Err(Error::DimensionMismatch("grading length differs from module dimension".into()));
        }
        self.grading = Some(g);
        Ok(self)
    }

    pub fn without_grading(mut self) -> Bimodule {
        self.grading = None;
        self
    }

    /// Checks the module laws on algebra generators and that the two actions
    /// commute. Small modules are checked on all basis vectors, larger ones
    /// on a fixed set of test vectors.
    pub fn verify(&self) -> Result<()> {
        let f = self.field();
        if self.lact.len() != self.left.dim() || self.ract.len() != self.right.dim() {
            return Err(Error::DimensionMismatch("one action matrix per basis element required".into()));
        }
        if self.lact.iter().chain(self.ract.iter()).any(|m| m.rows() != self.dim || m.cols() != self.dim) {
            return Err(Error::DimensionMismatch("action matrices must be square of the module dimension".into()));
        }
        if self.dim == 0 {
            return Ok(());
        }
        let tests: Vec<Vec<Elem>> = if self.dim <= EXHAUSTIVE_DIM {
            (0..self.dim).map(|i| vec_ops::unit(self.dim, i)).collect()
        } else {
            (0..3u64)
                .map(|s| (0..self.dim).map(|i| f.from_int(((i as i64 + 1) * (s as i64 * 7 + 3)) % 11 - 5)).collect())
                .collect()
        };
        if self.left_elem(self.left.unit()).apply(&tests[0]) != tests[0]
            || self.right_elem(self.right.unit()).apply(&tests[0]) != tests[0]
        {
            return Err(Error::CheckFailed("unit does not act as the identity".into()));
        }
        for v in &tests {
            for g in self.left.generators() {
                let lg = self.left_elem(g);
                for j in 0..self.left.dim() {
                    let lhs = self.left_elem(&self.left.mul(g, &self.left.basis(j))).apply(v);
                    if lhs != lg.apply(&self.lact[j].apply(v)) {
                        return Err(Error::CheckFailed(format!(
                            "left action is not multiplicative at basis element {j}"
                        )));
                    }
                }
                for h in self.right.generators() {
                    let rh = self.right_elem(h);
                    if lg.apply(&rh.apply(v)) != rh.apply(&lg.apply(v)) {
                        return Err(Error::CheckFailed("left and right actions do not commute".into()));
                    }
                }
            }
            for h in self.right.generators() {
                let rh = self.right_elem(h);
                for j in 0..self.right.dim() {
                    let lhs = self.right_elem(&self.right.mul(&self.right.basis(j), h)).apply(v);
                    if lhs != rh.apply(&self.ract[j].apply(v)) {
                        return Err(Error::CheckFailed(format!(
                            "right action is not multiplicative at basis element {j}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Direct sum of bimodules over the same algebras.
    pub fn direct_sum(parts: &[&Bimodule]) -> Result<Bimodule> {
        let first = parts.first().ok_or_else(|| Error::BadParams("empty direct sum".into()))?;
        if parts.iter().any(|p| !p.left.same_as(&first.left) || !p.right.same_as(&first.right)) {
            return Err(Error::MiddleAlgebraMismatch);
        }
        let f = first.field();
        let dim = parts.iter().map(|p| p.dim).sum();
        let lact = (0..first.left.dim())
            .map(|i| Mat::block_diag(f, &parts.iter().map(|p| p.lact[i].clone()).collect::<Vec<_>>()))
            .collect();
        let ract = (0..first.right.dim())
            .map(|j| Mat::block_diag(f, &parts.iter().map(|p| p.ract[j].clone()).collect::<Vec<_>>()))
            .collect();
        let mut out = Bimodule::from_parts(first.left.clone(), first.right.clone(), dim, lact, ract);
        let grads: Option<Vec<&Grading>> = parts.iter().map(|p| p.grading.as_ref()).collect();
        if let Some(gs) = grads {
            let group = gs[0].group().clone();
            let degrees = gs.iter().flat_map(|g| g.degrees().iter().copied()).collect();
            out.grading = Some(Grading::new(group, degrees)?);
        }
        Ok(out)
    }

    /// `M ⊗_k N` as an `(A ⊗ C, A′ ⊗ C′)`-bimodule.
    pub fn outer_tensor(&self, other: &Bimodule) -> Result<Bimodule> {
        let left = self.left.tensor(&other.left)?;
        let right = self.right.tensor(&other.right)?;
        let mut lact = Vec::with_capacity(left.dim());
        for a in self.lact.iter() {
            for c in other.lact.iter() {
                lact.push(a.kron(c));
            }
        }
        let mut ract = Vec::with_capacity(right.dim());
        for a in self.ract.iter() {
            for c in other.ract.iter() {
                ract.push(a.kron(c));
            }
        }
        let mut out = Bimodule::from_parts(left, right, self.dim * other.dim, lact, ract);
        if let (Some(g), Some(h)) = (&self.grading, &other.grading) {
            out.grading = Some(g.tensor(h)?);
        }
        Ok(out)
    }

    /// `Hom_k(M, k)` as an `(A′, A)`-bimodule: `(a′ φ a)(m) = φ(a m a′)`.
    pub fn base_dual(&self) -> Bimodule {
        let lact = self.ract.iter().map(|m| m.transpose()).collect();
        let ract = self.lact.iter().map(|m| m.transpose()).collect();
        let mut out = Bimodule::from_parts(self.right.clone(), self.left.clone(), self.dim, lact, ract);
        out.grading = self.grading.as_ref().map(|g| {
            let grp = g.group().clone();
            let deg = g.degrees().iter().map(|&d| grp.inv(d)).collect();
            Grading::new(grp, deg).expect("inverse degrees are in range")
        });
        out
    }

    /// Restriction of scalars along algebra maps `B -> A`, `B′ -> A′`
    /// (columns are images of basis elements) to the coordinates `indices`,
    /// which must span a `(B, B′)`-submodule.
    pub fn restrict(
        &self,
        left: &StructAlgebra,
        left_emb: &Mat,
        right: &StructAlgebra,
        right_emb: &Mat,
        indices: &[usize],
    ) -> Result<Bimodule> {
        let f = self.field();
        let mut inside = vec![false; self.dim];
        for &i in indices {
            inside[i] = true;
        }
        let cut = |m: &Mat| -> Result<Mat> {
            for &c in indices {
                for r in 0..self.dim {
                    if !inside[r] && m.get(r, c) != 0 {
                        return Err(Error::CheckFailed("coordinates do not span a submodule".into()));
                    }
                }
            }
            Ok(m.select(indices, indices))
        };
        let lact = (0..left.dim())
            .map(|k| cut(&Mat::combination(f, self.dim, self.dim, &left_emb.col(k), &self.lact)))
            .collect::<Result<Vec<_>>>()?;
        let ract = (0..right.dim())
            .map(|k| cut(&Mat::combination(f, self.dim, self.dim, &right_emb.col(k), &self.ract)))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Bimodule::from_parts(left.clone(), right.clone(), indices.len(), lact, ract);
        if let Some(g) = &self.grading {
            let deg = indices.iter().map(|&i| g.degrees()[i]).collect();
            out.grading = Some(Grading::new(g.group().clone(), deg)?);
        }
        Ok(out)
    }

    /// Checks that the grading is compatible with the algebra gradings:
    /// `A_g M_x A′_h ⊆ M_{gxh}` on homogeneous bases.
    pub fn check_graded(&self, a: &Grading, a2: &Grading) -> Result<()> {
        let g = self.grading.as_ref().ok_or_else(|| Error::NotGraded("module carries no grading".into()))?;
        let grp = g.group();
        for m in 0..self.dim {
            let x = g.degrees()[m];
            for (i, l) in self.lact.iter().enumerate() {
                let want = grp.mul(a.degrees()[i], x);
                let img = l.col(m);
                if !vec_ops::is_zero(&img) && g.degree(&img) != Some(want) {
                    return Err(Error::NotGraded(format!(
                        "left basis element {i} moves module basis vector {m} off degree {want}"
                    )));
                }
            }
            for (j, r) in self.ract.iter().enumerate() {
                let want = grp.mul(x, a2.degrees()[j]);
                let img = r.col(m);
                if !vec_ops::is_zero(&img) && g.degree(&img) != Some(want) {
                    return Err(Error::NotGraded(format!(
                        "right basis element {j} moves module basis vector {m} off degree {want}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Identification of a common subalgebra `C` inside `A` and `A′`: pairs
/// `(ζ(c), ζ′(c))` over a basis of `C`, and homogeneous units of `A` that
/// define the `Ḡ`-action `^ḡc = u_ḡ c u_ḡ^{-1}`.
#[derive(Debug, Clone)]
pub struct OverC {
    pub pairs: Vec<(Vec<Elem>, Vec<Elem>)>,
    pub units: Units,
}

impl OverC {
    /// `C = C_A(B)` mapped identically into `A = A′`.
    pub fn diagonal(centralizer: &crate::linalg::Subspace, units: Units) -> OverC {
        OverC { pairs: centralizer.basis().iter().map(|c| (c.clone(), c.clone())).collect(), units }
    }
}

/// Checks the conditions making `m` a graded bimodule over `C`, returning
/// it unchanged on success.
pub fn bimodule_over_c(m: Bimodule, a: &GradedAlgebra, a2: &GradedAlgebra, c: &OverC) -> Result<Bimodule> {
    if !m.left.same_as(&a.alg) || !m.right.same_as(&a2.alg) {
        return Err(Error::MiddleAlgebraMismatch);
    }
    m.verify()?;
    m.check_graded(&a.grading, &a2.grading)?;
    let g = m.grading().expect("checked above").clone();
    let alg = &a.alg;
    for (k, (zc, zc2)) in c.pairs.iter().enumerate() {
        let right = m.right_elem(zc2);
        for x in 0..m.dim() {
            let d = g.degrees()[x] as usize;
            let moved = alg.mul(&alg.mul(&c.units.units[d], zc), &c.units.inverses[d]);
            let lhs = right.col(x);
            let rhs = m.left_elem(&moved).col(x);
            if lhs != rhs {
                return Err(Error::OverCViolation(format!("c = basis element {k} of C, m = module basis vector {x}")));
            }
        }
    }
    Ok(m)
}
