//! Small finite fields GF(p^m).
//!
//! Elements are `u32` codes: the coefficient vector `(c_0, .., c_{m-1})` of
//! `c_0 + c_1 x + .. + c_{m-1} x^{m-1}` modulo the field's modulus, packed
//! little-endian in base `p`. The modulus is the lexicographically smallest
//! monic irreducible polynomial of degree `m` (comparing the packed code of
//! its lower coefficients), so every run agrees on element codes.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A field element code.
pub type Elem = u32;

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// Full addition/multiplication tables are kept below this size.
const TABLE_LIMIT: u32 = 256;

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<Elem>,
    log: Vec<u32>,
    add_tab: Vec<Elem>,
    mul_tab: Vec<Elem>,
}

/// Handle to GF(p^m). Cloning is cheap.
#[derive(Clone)]
pub struct Fq(Arc<Inner>);

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.m == other.0.m
    }
}
impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.m)
    }
}

/// JSON form `{"p":…,"m":…}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn cache() -> &'static Mutex<HashMap<(u32, u32), Fq>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Fq>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

// Polynomials over GF(p) as coefficient vectors, lowest degree first.
fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = poly_trim(a.to_vec());
    let b = poly_trim(b.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let f = (r[dr] * lead_inv) % p;
        for i in 0..=db {
            let idx = dr - db + i;
            r[idx] = (r[idx] + p * p - f * b[i] % p) % p;
        }
        r = poly_trim(r);
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    r as u32
}

fn decode(code: u32, p: u32, len: u32) -> Vec<u32> {
    let mut c = code;
    (0..len)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect()
}

fn encode(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut g = decode(code as u32, p, d as u32);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Fq {
    /// Builds (or fetches from the process-wide cache) GF(p^m).
    pub fn new(p: u32, m: u32) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !(1..=8).contains(&m) || (p as u64).pow(m) > MAX_FIELD_SIZE {
            return Err(Error::DegreeOutOfRange(m));
        }
        let mut guard = cache().lock().unwrap();
        if let Some(f) = guard.get(&(p, m)) {
            return Ok(f.clone());
        }
        let f = Self::build(p, m);
        guard.insert((p, m), f.clone());
        Ok(f)
    }

    pub fn prime(p: u32) -> Result<Fq> {
        Self::new(p, 1)
    }

    fn build(p: u32, m: u32) -> Fq {
        let q = p.pow(m);
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            (0..q)
                .map(|code| {
                    let mut f = decode(code, p, m);
                    f.push(1);
                    f
                })
                .find(|f| is_irreducible(f, p))
                .expect("irreducible polynomials exist in every degree")
        };
        let mulpoly = |a: u32, b: u32| -> u32 {
            if m == 1 {
                return ((a as u64 * b as u64) % p as u64) as u32;
            }
            let da = decode(a, p, m);
            let db = decode(b, p, m);
            let mut prod = vec![0u32; 2 * m as usize];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let mut r = poly_rem(&prod, &modulus, p);
            r.resize(m as usize, 0);
            encode(&r, p)
        };
        // Smallest code of multiplicative order q-1.
        let order = |g: u32| -> u32 {
            let mut x = g;
            let mut k = 1;
            while x != 1 {
                x = mulpoly(x, g);
                k += 1;
            }
            k
        };
        let gen = if q == 2 { 1 } else { (2..q).find(|&g| order(g) == q - 1).unwrap_or(1) };
        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for k in 0..(q - 1) {
            exp[k as usize] = x;
            log[x as usize] = k;
            x = mulpoly(x, gen);
        }
        let mut inner = Inner { p, m, q, modulus, exp, log, add_tab: Vec::new(), mul_tab: Vec::new() };
        if q <= TABLE_LIMIT {
            let mut add_tab = vec![0; (q * q) as usize];
            let mut mul_tab = vec![0; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add_tab[(a * q + b) as usize] = add_digits(p, m, a, b);
                    mul_tab[(a * q + b) as usize] = if a == 0 || b == 0 {
                        0
                    } else {
                        let l = (inner.log[a as usize] + inner.log[b as usize]) % (q - 1);
                        inner.exp[l as usize]
                    };
                }
            }
            inner.add_tab = add_tab;
            inner.mul_tab = mul_tab;
        }
        Fq(Arc::new(inner))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn m(&self) -> u32 {
        self.0.m
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.0.p, m: self.0.m }
    }
    /// Modulus coefficients, lowest degree first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    /// The generator `exp[1]` of the multiplicative group.
    pub fn generator(&self) -> Elem {
        if self.0.q == 2 {
            1
        } else {
            self.0.exp[1]
        }
    }
    pub fn is_prime_field(&self) -> bool {
        self.0.m == 1
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        0
    }
    #[inline]
    pub fn one(&self) -> Elem {
        1
    }

    /// Image of an integer under `Z -> GF(p)`.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.0.p as i64) as Elem
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.0;
        if f.m == 1 {
            let s = a + b;
            if s >= f.p {
                s - f.p
            } else {
                s
            }
        } else if f.p == 2 {
            a ^ b
        } else if !f.add_tab.is_empty() {
            f.add_tab[(a * f.q + b) as usize]
        } else {
            add_digits(f.p, f.m, a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let f = &*self.0;
        if a == 0 || f.p == 2 {
            return a;
        }
        if f.m == 1 {
            return f.p - a;
        }
        let mut out = 0u32;
        let mut mult = 1u32;
        let mut c = a;
        for _ in 0..f.m {
            let d = c % f.p;
            c /= f.p;
            out += ((f.p - d) % f.p) * mult;
            mult *= f.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.0;
        if a == 0 || b == 0 {
            return 0;
        }
        if f.m == 1 {
            return ((a as u64 * b as u64) % f.p as u64) as Elem;
        }
        if !f.mul_tab.is_empty() {
            return f.mul_tab[(a * f.q + b) as usize];
        }
        let l = (f.log[a as usize] + f.log[b as usize]) % (f.q - 1);
        f.exp[l as usize]
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        let f = &*self.0;
        if f.q == 2 {
            return 1;
        }
        let l = f.log[a as usize];
        f.exp[((f.q - 1 - l) % (f.q - 1)) as usize]
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut r = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Elem) -> u32 {
        assert!(a != 0);
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// An element of exact multiplicative order `n`, if `n | q-1`.
    pub fn root_of_unity(&self, n: u32) -> Option<Elem> {
        let q1 = self.0.q - 1;
        if n == 0 || !q1.is_multiple_of(n) {
            return None;
        }
        Some(if q1 == 1 || n == 1 { 1 } else { self.0.exp[(q1 / n) as usize] })
    }

    /// Coefficient vector of an element in the modulus basis.
    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        decode(a, self.0.p, self.0.m)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Elem {
        let mut v: Vec<u32> = c.iter().map(|&x| x % self.0.p).collect();
        v.resize(self.0.m as usize, 0);
        encode(&v, self.0.p)
    }

    /// `dst[i] -= f * src[i]` for all i.
    #[inline]
    pub fn sub_scaled(&self, dst: &mut [Elem], src: &[Elem], f: Elem) {
        if f == 0 {
            return;
        }
        let inner = &*self.0;
        if inner.m == 1 {
            let p = inner.p;
            if p == 2 {
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d ^= s;
                }
                return;
            }
            let nf = (p - f) as u64;
            for (d, &s) in dst.iter_mut().zip(src) {
                if s != 0 {
                    *d = ((*d as u64 + nf * s as u64) % p as u64) as u32;
                }
            }
            return;
        }
        let nf = self.neg(f);
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d = self.add(*d, self.mul(nf, s));
            }
        }
    }

    /// `dst[i] += f * src[i]` for all i.
    #[inline]
    pub fn add_scaled(&self, dst: &mut [Elem], src: &[Elem], f: Elem) {
        if f != 0 {
            self.sub_scaled(dst, src, self.neg(f));
        }
    }

    pub fn scale(&self, v: &mut [Elem], f: Elem) {
        for x in v.iter_mut() {
            *x = self.mul(*x, f);
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.q
    }
}

fn add_digits(p: u32, m: u32, a: u32, b: u32) -> u32 {
    let (mut x, mut y) = (a, b);
    let mut out = 0;
    let mut mult = 1;
    for _ in 0..m {
        out += ((x % p + y % p) % p) * mult;
        x /= p;
        y /= p;
        mult *= p;
    }
    out
}

/// Smallest `m` such that GF(p^m) contains a primitive `e`-th root of unity
/// for `e` the p'-part of `exponent`. Such a field splits every group of that
/// exponent in characteristic `p`.
pub fn splitting_degree(p: u32, exponent: u64) -> u32 {
    let mut e = exponent;
    while e.is_multiple_of(p as u64) {
        e /= p as u64;
    }
    let mut m = 1;
    let mut pm = p as u64 % e.max(1);
    loop {
        if e <= 1 || pm % e == 1 % e {
            return m;
        }
        m += 1;
        pm = pm * p as u64 % e;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_gf2() {
        let f = Fq::new(2, 1).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.mul(1, 1), 1);
    }

    #[test]
    fn gf4_modulus_and_generator() {
        let f = Fq::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // x = code 2 satisfies x^2 = x + 1 = code 3.
        assert_eq!(f.mul(2, 2), 3);
    }

    #[test]
    fn gf9_generator_order_by_enumeration() {
        let f = Fq::new(3, 2).unwrap();
        let g = f.generator();
        let mut seen = std::collections::HashSet::new();
        let mut x = 1;
        loop {
            seen.insert(x);
            x = f.mul(x, g);
            if x == 1 {
                break;
            }
        }
        assert_eq!(seen.len(), 8);
    }

    #[test]
    fn rejects_bad_params() {
        assert_eq!(Fq::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(Fq::new(2, 0).unwrap_err(), Error::DegreeOutOfRange(0));
        assert_eq!(Fq::new(2, 9).unwrap_err(), Error::DegreeOutOfRange(9));
        assert!(Fq::new(5, 8).is_ok());
        assert_eq!(Fq::new(7, 8).unwrap_err(), Error::DegreeOutOfRange(8));
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for &(p, m) in &[(2, 1), (3, 1), (2, 2), (5, 1), (3, 2), (2, 3), (7, 1), (2, 6), (3, 3)] {
            let f = Fq::new(p, m).unwrap();
            let q = f.q();
            if q > 64 {
                continue;
            }
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn large_field_uses_log_tables() {
        let f = Fq::new(3, 6).unwrap();
        let a = 177;
        assert_eq!(f.mul(a, f.inv(a)), 1);
        let f = Fq::new(73, 1).unwrap();
        assert_eq!(f.order(f.generator()), 72);
        assert_eq!(f.order(f.root_of_unity(24).unwrap()), 24);
    }

    #[test]
    fn splitting_degrees() {
        assert_eq!(splitting_degree(2, 6), 2);
        assert_eq!(splitting_degree(3, 6), 1);
        assert_eq!(splitting_degree(3, 12), 2);
        assert_eq!(splitting_degree(2, 2), 1);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_field() -> impl Strategy<Value = (Fq, u32, u32, u32)> {
            prop::sample::select(vec![(2u32, 1u32), (2, 3), (3, 1), (3, 2), (5, 2), (7, 1), (2, 8)]).prop_flat_map(
                |(p, m)| {
                    let f = Fq::new(p, m).unwrap();
                    let q = f.q();
                    (Just(f), 0..q, 0..q, 0..q)
                },
            )
        }

        proptest! {
            #[test]
            fn ring_axioms((f, a, b, c) in arb_field()) {
                prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                prop_assert_eq!(f.add(a, f.neg(a)), 0);
                prop_assert_eq!(f.sub(f.add(a, b), b), a);
            }

            #[test]
            fn inverses_and_frobenius((f, a, b, _c) in arb_field()) {
                if a != 0 {
                    prop_assert_eq!(f.mul(a, f.inv(a)), 1);
                    prop_assert_eq!(f.div(f.mul(a, b), a), b);
                }
                prop_assert_eq!(f.pow(a, f.q() as u64), a);
                let frob = |x| f.pow(x, f.p() as u64);
                prop_assert_eq!(frob(f.add(a, b)), f.add(frob(a), frob(b)));
            }
        }
    }
}
