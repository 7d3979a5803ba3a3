use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, Fq};
use crate::linalg::Mat;

/// Integer coefficients of the cyclotomic polynomial `Φ_e`, lowest first.
pub fn cyclotomic_poly(e: u32) -> Vec<i64> {
    let mut num = vec![0i64; e as usize + 1];
    num[0] = -1;
    num[e as usize] = 1;
    for d in 1..e {
        if e.is_multiple_of(d) {
            num = div_exact(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let (da, db) = (a.len() - 1, b.len() - 1);
    let mut q = vec![0i64; da - db + 1];
    for i in (0..=da - db).rev() {
        let c = r[i + db] / b[db];
        q[i] = c;
        for j in 0..=db {
            r[i + j] -= c * b[j];
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Remainder of `Σ v_j x^j` modulo the monic polynomial `phi`.
fn reduce_mod(v: &[i64], phi: &[i64]) -> Vec<i64> {
    let deg = phi.len() - 1;
    let mut r = v.to_vec();
    for i in (deg..r.len()).rev() {
        let c = r[i];
        if c != 0 {
            for j in 0..=deg {
                r[i - deg + j] -= c * phi[j];
            }
        }
    }
    r.truncate(deg);
    r.resize(deg, 0);
    r
}

/// A finite stand-in for a `p`-modular system: `z ∈ ℓ` plays a primitive
/// `e`-th root of unity `ζ` of `K`, and `ξ ∈ k` is its image modulo a prime
/// above `p`, so `ξ` has order the `p′`-part of `e`.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub ell: Fq,
    pub k: Fq,
    pub e: u32,
    pub z: Elem,
    pub xi: Elem,
    phi: Vec<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionJson {
    pub ell: u32,
    pub k: u32,
    pub e: u32,
    pub z: Elem,
    pub xi: Elem,
}

fn p_prime_part(mut e: u32, p: u32) -> u32 {
    while e.is_multiple_of(p) {
        e /= p;
    }
    e
}

impl Reduction {
    pub fn new(ell: &Fq, k: &Fq, e: u32, xi: Elem) -> Result<Reduction> {
        if ell.p() == k.p() {
            return Err(Error::BadParams("ℓ and k must have different characteristics".into()));
        }
        let z = ell
            .root_of_unity(e)
            .ok_or_else(|| Error::BadParams(format!("ℓ = GF({}) has no primitive {e}-th root of unity", ell.q())))?;
        let e2 = p_prime_part(e, k.p());
        if xi == 0 || k.order(xi) != e2 {
            return Err(Error::BadParams(format!("ξ must have order {e2} in k")));
        }
        Ok(Reduction { ell: ell.clone(), k: k.clone(), e, z, xi, phi: cyclotomic_poly(e) })
    }

    /// All reductions with the given `ℓ`, `k`, `e`, in order of `ξ`.
    pub fn candidates(ell: &Fq, k: &Fq, e: u32) -> Result<Vec<Reduction>> {
        let e2 = p_prime_part(e, k.p());
        if !(k.q() - 1).is_multiple_of(e2) {
            return Err(Error::BadParams(format!("k = GF({}) lacks primitive {e2}-th roots of unity", k.q())));
        }
        k.elements().filter(|&x| x != 0 && k.order(x) == e2).map(|x| Reduction::new(ell, k, e, x)).collect()
    }

    /// The reduction for a multiple `e2` of `e` restricting to this one.
    pub fn extend(&self, e2: u32) -> Result<Reduction> {
        if !e2.is_multiple_of(self.e) {
            return Err(Error::BadParams(format!("{e2} is not a multiple of {}", self.e)));
        }
        let m = (e2 / self.e) as u64;
        let base = self.ell.root_of_unity(e2).ok_or_else(|| {
            Error::BadParams(format!("ℓ = GF({}) has no primitive {e2}-th root of unity", self.ell.q()))
        })?;
        let z2 = (1..e2)
            .filter(|&j| gcd(j, e2) == 1)
            .map(|j| self.ell.pow(base, j as u64))
            .find(|&c| self.ell.pow(c, m) == self.z)
            .ok_or_else(|| Error::CheckFailed("no compatible root of unity in ℓ".into()))?;
        let xi2 = Reduction::candidates(&self.ell, &self.k, e2)?
            .into_iter()
            .map(|r| r.xi)
            .find(|&x| self.k.pow(x, m) == self.xi)
            .ok_or_else(|| Error::CheckFailed("no compatible root of unity in k".into()))?;
        let mut r = Reduction::new(&self.ell, &self.k, e2, xi2)?;
        r.z = z2;
        Ok(r)
    }

    pub fn to_json(&self) -> ReductionJson {
        ReductionJson { ell: self.ell.q(), k: self.k.q(), e: self.e, z: self.z, xi: self.xi }
    }

    /// Multiplicities of the eigenvalues `z^j`, `0 <= j < e`, of a matrix of
    /// order dividing `e`.
    pub fn eigen_multiplicities(&self, m: &Mat) -> Result<Vec<usize>> {
        let f = &self.ell;
        let n = m.rows();
        let mut out = Vec::with_capacity(self.e as usize);
        let mut lam = f.one();
        for _ in 0..self.e {
            out.push(n - m.sub(&Mat::identity(f, n).scaled(lam)).rank());
            lam = f.mul(lam, self.z);
        }
        if out.iter().sum::<usize>() != n {
            return Err(Error::CheckFailed("matrix is not diagonalizable over e-th roots of unity".into()));
        }
        Ok(out)
    }

    /// Reduction modulo `p` of `|C|·χ(g)/χ(1)` computed from the eigenvalue
    /// multiplicities of `g` on a module of dimension `dim` whose character
    /// is a multiple of `χ`.
    pub fn central_character(&self, mults: &[usize], class_size: usize, dim: usize) -> Result<Elem> {
        let trace: Vec<i64> = mults.iter().map(|&m| m as i64).collect();
        let coeffs = reduce_mod(&trace, &self.phi);
        let k = &self.k;
        let p = k.p() as i64;
        let mut acc = k.zero();
        let mut pw = k.one();
        for c in coeffs {
            let num = c * class_size as i64;
            if num % dim as i64 != 0 {
                return Err(Error::CheckFailed("central character is not integral".into()));
            }
            let w = (num / dim as i64).rem_euclid(p);
            acc = k.add(acc, k.mul(k.from_int(w), pw));
            pw = k.mul(pw, self.xi);
        }
        Ok(acc)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn reduction_of_a_cube_root() {
        let ell = Fq::prime(7).unwrap();
        let k = Fq::new(2, 2).unwrap();
        let rs = Reduction::candidates(&ell, &k, 6).unwrap();
        assert_eq!(rs.len(), 2);
        let r = &rs[0];
        // one-dimensional module on which g acts by z^2, a cube root of 1
        let m = Mat::from_vec(&ell, 1, 1, vec![ell.pow(r.z, 2)]);
        let mults = r.eigen_multiplicities(&m).unwrap();
        assert_eq!(mults[2], 1);
        assert_eq!(r.central_character(&mults, 1, 1).unwrap(), k.pow(r.xi, 2));
        let r2 = r.extend(12).unwrap_err();
        assert!(matches!(r2, Error::BadParams(_)));
    }
}
