use crate::error::{Error, Result};
use crate::field::Elem;
use crate::graded::Grading;
use crate::linalg::{Mat, Subspace};

use super::bimodule::Bimodule;
use super::present::{present, Presentation, Side};

/// `X ⊗_{A′} Y` realized as `Y^s / R`, where `x_1..x_s` generate `X` as a
/// right `A′`-module and `R` is spanned by `(k_i y)_i` for relations `k`.
/// A class `(y_i)_i` stands for `Σ x_i ⊗ y_i`.
#[derive(Debug, Clone)]
pub struct BalancedTensor {
    pub pres: Presentation,
    pub relations: Subspace,
    /// Coordinates of `Y^s` kept as the basis of the quotient.
    pub basis: Vec<usize>,
    pub module: Bimodule,
    y: Bimodule,
}

impl BalancedTensor {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Class of a vector of `Y^s`.
    pub fn class(&self, v: &[Elem]) -> Vec<Elem> {
        let r = self.relations.reduce(v);
        self.basis.iter().map(|&i| r[i]).collect()
    }

    /// Matrix of `y -> x ⊗ y`.
    pub fn pure_matrix(&self, x: &[Elem]) -> Mat {
        let f = self.y.field();
        let (s, yd, da) = (self.pres.rank(), self.y.dim(), self.y.left.dim());
        let c = self.pres.coords(x);
        let mut stack = Mat::zeros(f, s * yd, yd);
        for l in 0..s {
            stack.set_block(l * yd, 0, &self.y.left_elem(&c[l * da..(l + 1) * da]));
        }
        let cols: Vec<Vec<Elem>> = (0..yd).map(|j| self.class(&stack.col(j))).collect();
        Mat::from_cols(f, self.dim(), &cols)
    }

    pub fn pure(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        self.pure_matrix(x).apply(y)
    }

    /// `(generator index, basis index of Y)` of a quotient basis vector.
    pub fn split(&self, t: usize) -> (usize, usize) {
        let yd = self.y.dim();
        (self.basis[t] / yd, self.basis[t] % yd)
    }
}

/// Balanced tensor of an `(A, A′)`-bimodule and an `(A′, A″)`-bimodule.
pub fn tensor_bimodules(x: &Bimodule, y: &Bimodule) -> Result<BalancedTensor> {
    if !x.right.same_as(&y.left) {
        return Err(Error::MiddleAlgebraMismatch);
    }
    let f = x.field();
    let pres = present(x, Side::Right);
    let (s, yd, dm) = (pres.rank(), y.dim(), y.left.dim());
    let mut gens = Vec::with_capacity(pres.relations.len() * yd);
    for k in &pres.relations {
        let mats: Vec<Mat> = (0..s).map(|i| y.left_elem(&k[i * dm..(i + 1) * dm])).collect();
        for j in 0..yd {
            let v: Vec<Elem> = mats.iter().flat_map(|m| m.col(j)).collect();
            gens.push(v);
        }
    }
    let relations = Subspace::span(f, s * yd, &gens);
    let basis = relations.complement_indices();
    let td = basis.len();
    let mut t = BalancedTensor { pres, relations, basis, module: Bimodule::zero(&x.left, &y.right), y: y.clone() };
    let mut lact = Vec::with_capacity(x.left.dim());
    for a in x.lacts() {
        let per_gen: Vec<Mat> = t.pres.gens.iter().map(|g| t.pure_matrix(&a.apply(g))).collect();
        let cols: Vec<Vec<Elem>> = (0..td)
            .map(|b| {
                let (k, j) = t.split(b);
                per_gen[k].col(j)
            })
            .collect();
        lact.push(Mat::from_cols(f, td, &cols));
    }
    let mut ract = Vec::with_capacity(y.right.dim());
    for r in y.racts() {
        let cols: Vec<Vec<Elem>> = (0..td)
            .map(|b| {
                let (k, j) = t.split(b);
                let mut v = vec![0; s * yd];
                v[k * yd..(k + 1) * yd].copy_from_slice(&r.col(j));
                t.class(&v)
            })
            .collect();
        ract.push(Mat::from_cols(f, td, &cols));
    }
    let mut module = Bimodule::from_parts(x.left.clone(), y.right.clone(), td, lact, ract);
    if let (Some(gx), Some(gy)) = (x.grading(), y.grading()) {
        let gen_deg: Vec<u32> = t
            .pres
            .gens
            .iter()
            .map(|g| gx.degree(g).ok_or_else(|| Error::NotGraded("generator is not homogeneous".into())))
            .collect::<Result<_>>()?;
        let grp = gy.group();
        let deg = (0..td)
            .map(|b| {
                let (k, j) = t.split(b);
                grp.mul(gen_deg[k], gy.degrees()[j])
            })
            .collect();
        module = module.with_grading(Grading::new(grp.clone(), deg)?)?;
    }
    t.module = module;
    Ok(t)
}

/// Matrix of `f ⊗ g: X ⊗ Y -> X′ ⊗ Y′` for bimodule maps `f`, `g`.
pub fn induced_map(src: &BalancedTensor, tgt: &BalancedTensor, f: &Mat, g: &Mat) -> Mat {
    let fld = g.field();
    let per_gen: Vec<Mat> = src.pres.gens.iter().map(|x| tgt.pure_matrix(&f.apply(x)).mul(g)).collect();
    let cols: Vec<Vec<Elem>> = (0..src.dim())
        .map(|b| {
            let (k, j) = src.split(b);
            per_gen[k].col(j)
        })
        .collect();
    Mat::from_cols(fld, tgt.dim(), &cols)
}
