//! Finite groups stored as full multiplication tables.
//!
//! Element indices are stable and deterministic: groups generated by
//! permutations are enumerated breadth-first from the identity, one layer at
//! a time, each layer sorted by image tuple. Direct powers and wreath
//! products index their elements row-major, which lines up with the tensor
//! ordering used for algebras.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_GROUP_ORDER: usize = 5000;

static MAX_GROUP_ORDER: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_GROUP_ORDER);

/// Current group order cap.
pub fn max_group_order() -> usize {
    MAX_GROUP_ORDER.load(Ordering::Relaxed)
}

/// Overrides the group order cap for the whole process.
pub fn set_max_group_order(n: usize) {
    MAX_GROUP_ORDER.store(n, Ordering::Relaxed);
}

/// A permutation of `0..n` as its image array.
pub type Perm = Vec<u32>;

pub fn perm_compose(a: &[u32], b: &[u32]) -> Perm {
    // (a ∘ b)(i) = a(b(i))
    b.iter().map(|&i| a[i as usize]).collect()
}

pub fn perm_inverse(a: &[u32]) -> Perm {
    let mut inv = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

/// Cycle notation with 1-based points; the identity prints as `()`.
pub fn perm_label(a: &[u32]) -> String {
    let mut seen = vec![false; a.len()];
    let mut out = String::new();
    for start in 0..a.len() {
        if seen[start] || a[start] as usize == start {
            continue;
        }
        let mut cyc = vec![start + 1];
        seen[start] = true;
        let mut x = a[start] as usize;
        while x != start {
            seen[x] = true;
            cyc.push(x + 1);
            x = a[x] as usize;
        }
        out.push('(');
        out.push_str(&cyc.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// Finite group with multiplication table, identity, inverses and labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: u32,
    inverse: Vec<u32>,
    labels: Vec<String>,
    perms: Option<Vec<Perm>>,
}

/// JSON form `{"order":n,"table":[[…]],"labels":[…]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupJson {
    pub order: usize,
    pub table: Vec<Vec<u32>>,
    pub labels: Vec<String>,
}

/// A subgroup as a sorted set of element indices of its parent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    elems: Vec<u32>,
}

impl Subgroup {
    pub fn elements(&self) -> &[u32] {
        &self.elems
    }
    pub fn order(&self) -> usize {
        self.elems.len()
    }
    pub fn contains(&self, g: u32) -> bool {
        self.elems.binary_search(&g).is_ok()
    }
    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elems.iter().all(|&g| other.contains(g))
    }
    /// Builds from raw indices without checking closure.
    pub fn from_sorted_unchecked(mut elems: Vec<u32>) -> Subgroup {
        elems.sort_unstable();
        elems.dedup();
        Subgroup { elems }
    }
}

/// A map between two groups given by images of element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    pub images: Vec<u32>,
}

impl GroupHom {
    pub fn apply(&self, g: u32) -> u32 {
        self.images[g as usize]
    }

    /// Checks `f(xy) = f(x)f(y)` (exhaustive for small domains, sampled above).
    pub fn verify(&self, domain: &FiniteGroup, codomain: &FiniteGroup) -> Result<()> {
        if self.images.len() != domain.order() {
            return Err(Error::CheckFailed("homomorphism image array has wrong length".into()));
        }
        if self.apply(domain.identity()) != codomain.identity() {
            return Err(Error::CheckFailed("homomorphism does not preserve the identity".into()));
        }
        let check = |x: u32, y: u32| self.apply(domain.mul(x, y)) == codomain.mul(self.apply(x), self.apply(y));
        let n = domain.order() as u32;
        if n <= 128 {
            for x in 0..n {
                for y in 0..n {
                    if !check(x, y) {
                        return Err(Error::CheckFailed(format!("f({x}*{y}) != f({x})f({y})")));
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..20000 {
                let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if !check(x, y) {
                    return Err(Error::CheckFailed(format!("f({x}*{y}) != f({x})f({y})")));
                }
            }
        }
        Ok(())
    }

    pub fn kernel(&self, domain: &FiniteGroup, codomain: &FiniteGroup) -> Subgroup {
        let e = codomain.identity();
        Subgroup::from_sorted_unchecked((0..domain.order() as u32).filter(|&g| self.apply(g) == e).collect())
    }
}

impl FiniteGroup {
    /// Builds from a multiplication table, verifying the group axioms.
    pub fn from_table(table: Vec<Vec<u32>>, labels: Vec<String>) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 || n > max_group_order() {
            return Err(Error::OrderCapExceeded(format!("table of order {n}")));
        }
        if labels.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::CheckFailed("table must be square with one label per element".into()));
        }
        let flat: Vec<u32> = table.into_iter().flatten().collect();
        let g = Self::from_flat(n, flat, labels, None)?;
        g.verify_axioms()?;
        Ok(g)
    }

    fn from_flat(n: usize, table: Vec<u32>, labels: Vec<String>, perms: Option<Vec<Perm>>) -> Result<FiniteGroup> {
        if table.iter().any(|&x| x as usize >= n) {
            return Err(Error::CheckFailed("table entry out of range".into()));
        }
        let identity = (0..n as u32)
            .find(|&e| (0..n).all(|x| table[e as usize * n + x] == x as u32 && table[x * n + e as usize] == x as u32))
            .ok_or_else(|| Error::CheckFailed("no identity element".into()))?;
        let mut inverse = vec![u32::MAX; n];
        for x in 0..n {
            for y in 0..n {
                if table[x * n + y] == identity {
                    inverse[x] = y as u32;
                    break;
                }
            }
            if inverse[x] == u32::MAX {
                return Err(Error::CheckFailed(format!("element {x} has no inverse")));
            }
        }
        Ok(FiniteGroup { order: n, table, identity, inverse, labels, perms })
    }

    /// Latin square and associativity (exhaustive up to order 256).
    pub fn verify_axioms(&self) -> Result<()> {
        let n = self.order;
        for x in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for y in 0..n {
                row[self.table[x * n + y] as usize] = true;
                col[self.table[y * n + x] as usize] = true;
            }
            if row.iter().any(|b| !b) || col.iter().any(|b| !b) {
                return Err(Error::CheckFailed("table is not a Latin square".into()));
            }
        }
        let assoc = |a: u32, b: u32, c: u32| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        if n <= 256 {
            for a in 0..n as u32 {
                for b in 0..n as u32 {
                    let ab = self.mul(a, b);
                    for c in 0..n as u32 {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(Error::CheckFailed(format!("associativity fails at ({a},{b},{c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..50000 {
                let (a, b, c) = (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32), rng.gen_range(0..n as u32));
                if !assoc(a, b, c) {
                    return Err(Error::CheckFailed(format!("associativity fails at ({a},{b},{c})")));
                }
            }
        }
        Ok(())
    }

    /// Closure of permutation generators, enumerated breadth-first.
    pub fn from_permutations(gens: &[Perm], degree: usize) -> Result<FiniteGroup> {
        for g in gens {
            if g.len() != degree {
                return Err(Error::NotBijection(format!("generator of length {} on {} points", g.len(), degree)));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x as usize >= degree || seen[x as usize] {
                    return Err(Error::NotBijection(format!("{g:?}")));
                }
                seen[x as usize] = true;
            }
        }
        let id: Perm = (0..degree as u32).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Perm, u32> = HashMap::from([(id, 0)]);
        let mut layer = vec![0usize];
        while !layer.is_empty() {
            let mut next: BTreeSet<Perm> = BTreeSet::new();
            for &x in &layer {
                for g in gens {
                    let y = perm_compose(&elems[x], g);
                    if !index.contains_key(&y) {
                        next.insert(y);
                    }
                }
            }
            layer.clear();
            for y in next {
                if elems.len() >= max_group_order() {
                    return Err(Error::OrderCapExceeded(format!("more than {} elements", max_group_order())));
                }
                index.insert(y.clone(), elems.len() as u32);
                layer.push(elems.len());
                elems.push(y);
            }
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&perm_compose(&elems[a], &elems[b])];
            }
        }
        let labels = elems.iter().map(|p| perm_label(p)).collect();
        Self::from_flat(n, table, labels, Some(elems))
    }

    /// Symmetric group on `n` points, elements in lexicographic order of image tuples.
    pub fn symmetric(n: usize) -> Result<FiniteGroup> {
        let mut perms: Vec<Perm> = Vec::new();
        let mut cur: Perm = (0..n as u32).collect();
        loop {
            perms.push(cur.clone());
            if perms.len() > max_group_order() {
                return Err(Error::OrderCapExceeded(format!("S_{n}")));
            }
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        Self::from_perm_list(perms)
    }

    /// Group from an explicit closed list of permutations (order preserved).
    pub fn from_perm_list(perms: Vec<Perm>) -> Result<FiniteGroup> {
        let n = perms.len();
        let index: HashMap<&Perm, u32> = perms.iter().enumerate().map(|(i, p)| (p, i as u32)).collect();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let c = perm_compose(&perms[a], &perms[b]);
                table[a * n + b] =
                    *index.get(&c).ok_or_else(|| Error::NotSubgroup("permutation list is not closed".into()))?;
            }
        }
        let labels = perms.iter().map(|p| perm_label(p)).collect();
        Self::from_flat(n, table, labels, Some(perms))
    }

    pub fn cyclic(n: usize) -> Result<FiniteGroup> {
        if n == 0 || n > max_group_order() {
            return Err(Error::OrderCapExceeded(format!("C_{n}")));
        }
        let table = (0..n).flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32)).collect();
        let labels = (0..n).map(|k| if k == 0 { "1".into() } else { format!("g^{k}") }).collect();
        Self::from_flat(n, table, labels, None)
    }

    pub fn trivial() -> FiniteGroup {
        Self::cyclic(1).unwrap()
    }

    /// Direct product; the pair `(a, b)` has index `a * |H| + b`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
        let (m, k) = (g.order, h.order);
        let n = m * k;
        if n > max_group_order() {
            return Err(Error::OrderCapExceeded(format!("{m} x {k}")));
        }
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let (a1, a2) = (a / k, a % k);
                let (b1, b2) = (b / k, b % k);
                table[a * n + b] = g.mul(a1 as u32, b1 as u32) * k as u32 + h.mul(a2 as u32, b2 as u32);
            }
        }
        let labels = (0..n).map(|a| format!("({},{})", g.labels[a / k], h.labels[a % k])).collect();
        Self::from_flat(n, table, labels, None)
    }

    /// `G^n` with row-major tuple indices.
    pub fn direct_power(g: &FiniteGroup, n: usize) -> Result<FiniteGroup> {
        let mut out = g.clone();
        for _ in 1..n {
            out = Self::direct_product(&out, g)?;
        }
        if n == 0 {
            return Ok(Self::trivial());
        }
        Ok(out)
    }

    pub fn order(&self) -> usize {
        self.order
    }
    pub fn identity(&self) -> u32 {
        self.identity
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn label(&self, g: u32) -> &str {
        &self.labels[g as usize]
    }
    pub fn perms(&self) -> Option<&[Perm]> {
        self.perms.as_deref()
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }
    /// `g x g^{-1}`
    #[inline]
    pub fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order as u32
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            order: self.order,
            table: self.table.chunks(self.order).map(|r| r.to_vec()).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_json(j: &GroupJson) -> Result<FiniteGroup> {
        if j.table.len() != j.order {
            return Err(Error::SchemaError("group order does not match table".into()));
        }
        Self::from_table(j.table.clone(), j.labels.clone())
    }

    /// Index of a permutation, for permutation groups.
    pub fn find_perm(&self, p: &[u32]) -> Option<u32> {
        self.perms.as_ref()?.iter().position(|q| q.as_slice() == p).map(|i| i as u32)
    }

    pub fn elem_order(&self, g: u32) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.elements().map(|g| self.elem_order(g) as u64).fold(1, |acc, o| acc / gcd(acc, o) * o)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy classes, each sorted, ordered by smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<u32>> {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes = Vec::new();
        for x in self.elements() {
            if class_of[x as usize] != usize::MAX {
                continue;
            }
            let cls: BTreeSet<u32> = self.elements().map(|g| self.conj(g, x)).collect();
            for &y in &cls {
                class_of[y as usize] = classes.len();
            }
            classes.push(cls.into_iter().collect::<Vec<_>>());
        }
        classes
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generating_set(&self) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut cur = self.trivial_subgroup();
        for g in self.elements() {
            if cur.order() == self.order() {
                break;
            }
            if !cur.contains(g) {
                gens.push(g);
                cur = self.generated(&gens);
            }
        }
        gens
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elems: vec![self.identity] }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elems: self.elements().collect() }
    }

    /// Subgroup generated by the given elements.
    pub fn generated(&self, gens: &[u32]) -> Subgroup {
        let mut seen = vec![false; self.order];
        seen[self.identity as usize] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    queue.push_back(y);
                }
            }
        }
        Subgroup { elems: (0..self.order as u32).filter(|&g| seen[g as usize]).collect() }
    }

    /// Validates a set of indices as a subgroup.
    pub fn subgroup(&self, elems: &[u32]) -> Result<Subgroup> {
        let s = Subgroup::from_sorted_unchecked(elems.to_vec());
        if s.elems.iter().any(|&x| x as usize >= self.order) {
            return Err(Error::NotSubgroup("index out of range".into()));
        }
        if !s.contains(self.identity) {
            return Err(Error::NotSubgroup("missing identity".into()));
        }
        for &a in &s.elems {
            if !s.contains(self.inv(a)) {
                return Err(Error::NotSubgroup(format!("not closed under inverse at {a}")));
            }
            for &b in &s.elems {
                if !s.contains(self.mul(a, b)) {
                    return Err(Error::NotSubgroup(format!("not closed: {a}*{b}")));
                }
            }
        }
        Ok(s)
    }

    pub fn conjugate_subgroup(&self, g: u32, h: &Subgroup) -> Subgroup {
        Subgroup::from_sorted_unchecked(h.elems.iter().map(|&x| self.conj(g, x)).collect())
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.elements().all(|g| h.elems.iter().all(|&x| h.contains(self.conj(g, x))))
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        Subgroup { elems: self.elements().filter(|&g| h.elems.iter().all(|&x| h.contains(self.conj(g, x)))).collect() }
    }

    pub fn centralizer(&self, h: &Subgroup) -> Subgroup {
        Subgroup {
            elems: self.elements().filter(|&g| h.elems.iter().all(|&x| self.mul(g, x) == self.mul(x, g))).collect(),
        }
    }

    /// `(N_G(Q), C_G(Q))` after checking that `Q` is a subgroup.
    pub fn normalizer_centralizer(&self, q: &Subgroup) -> Result<(Subgroup, Subgroup)> {
        self.subgroup(&q.elems)?;
        Ok((self.normalizer(q), self.centralizer(q)))
    }

    pub fn intersect(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        Subgroup { elems: a.elems.iter().copied().filter(|&x| b.contains(x)).collect() }
    }

    /// Left cosets `gH`, ordered by smallest element; each coset sorted.
    pub fn left_cosets(&self, h: &Subgroup) -> Vec<Vec<u32>> {
        let mut assigned = vec![false; self.order];
        let mut cosets = Vec::new();
        for g in self.elements() {
            if assigned[g as usize] {
                continue;
            }
            let mut c: Vec<u32> = h.elems.iter().map(|&x| self.mul(g, x)).collect();
            c.sort_unstable();
            for &y in &c {
                assigned[y as usize] = true;
            }
            cosets.push(c);
        }
        cosets
    }

    /// Representatives (smallest elements) of the left cosets `gR` with `g ∈ Q`.
    pub fn left_cosets_within(&self, q: &Subgroup, r: &Subgroup) -> Vec<u32> {
        let mut seen = BTreeSet::new();
        let mut reps = Vec::new();
        for &g in &q.elems {
            if seen.contains(&g) {
                continue;
            }
            reps.push(g);
            for &x in &r.elems {
                seen.insert(self.mul(g, x));
            }
        }
        reps
    }

    /// Quotient by a normal subgroup with its projection.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let cosets = self.left_cosets(n);
        let mut proj = vec![0u32; self.order];
        for (i, c) in cosets.iter().enumerate() {
            for &g in c {
                proj[g as usize] = i as u32;
            }
        }
        let k = cosets.len();
        let mut table = vec![0u32; k * k];
        for a in 0..k {
            for b in 0..k {
                table[a * k + b] = proj[self.mul(cosets[a][0], cosets[b][0]) as usize];
            }
        }
        let labels = cosets.iter().map(|c| format!("{}N", self.labels[c[0] as usize])).collect();
        let q = Self::from_flat(k, table, labels, None)?;
        let hom = GroupHom { images: proj };
        hom.verify(self, &q)?;
        Ok((q, hom))
    }

    pub fn is_p_group(order: usize, p: u32) -> bool {
        let mut n = order;
        while n.is_multiple_of(p as usize) {
            n /= p as usize;
        }
        n == 1
    }

    /// Lexicographically smallest conjugate (as a sorted index list).
    pub fn canonical_conjugate(&self, h: &Subgroup) -> Subgroup {
        self.elements().map(|g| self.conjugate_subgroup(g, h)).min().unwrap()
    }

    /// Conjugacy class representatives of `p`-subgroups, sorted by order.
    ///
    /// Every p-subgroup is reached from the trivial group through a chain of
    /// normal index-p steps, so growing canonical representatives by
    /// p-elements of their normalizers visits every class.
    pub fn p_subgroups_up_to_conjugacy(&self, p: u32) -> Vec<Subgroup> {
        let mut found: BTreeSet<Subgroup> = BTreeSet::new();
        let start = self.trivial_subgroup();
        found.insert(start.clone());
        let mut queue = VecDeque::from([start]);
        let p_elems: Vec<u32> = self.elements().filter(|&g| Self::is_p_group(self.elem_order(g), p)).collect();
        while let Some(h) = queue.pop_front() {
            let norm = self.normalizer(&h);
            for &x in &p_elems {
                if h.contains(x) || !norm.contains(x) {
                    continue;
                }
                let mut gens = h.elems.clone();
                gens.push(x);
                let r = self.generated(&gens);
                if !Self::is_p_group(r.order(), p) {
                    continue;
                }
                let c = self.canonical_conjugate(&r);
                if found.insert(c.clone()) {
                    queue.push_back(c);
                }
            }
        }
        let mut out: Vec<Subgroup> = found.into_iter().collect();
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
        out
    }

    /// Whether some conjugate of `a` is contained in `b`.
    pub fn is_subconjugate(&self, a: &Subgroup, b: &Subgroup) -> bool {
        self.elements().any(|g| self.conjugate_subgroup(g, a).is_subset_of(b))
    }

    /// All subgroups, by closure of cyclic subgroups under joins. Intended for
    /// small groups (the grading groups).
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Subgroup> = self.elements().map(|g| self.generated(&[g])).collect();
        loop {
            let cur: Vec<Subgroup> = found.iter().cloned().collect();
            let mut added = false;
            for a in &cur {
                for b in &cur {
                    let mut gens = a.elems.clone();
                    gens.extend_from_slice(&b.elems);
                    if found.insert(self.generated(&gens)) {
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        let mut out: Vec<Subgroup> = found.into_iter().collect();
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
        out
    }

    /// Exhaustive isomorphism test by backtracking (small groups only).
    pub fn is_isomorphic(&self, other: &FiniteGroup) -> bool {
        if self.order != other.order {
            return false;
        }
        let mut orders_a: Vec<usize> = self.elements().map(|g| self.elem_order(g)).collect();
        let mut orders_b: Vec<usize> = other.elements().map(|g| other.elem_order(g)).collect();
        orders_a.sort_unstable();
        orders_b.sort_unstable();
        if orders_a != orders_b {
            return false;
        }
        // Greedy generating set of self.
        let mut gens = Vec::new();
        let mut span = self.trivial_subgroup();
        for g in self.elements() {
            if !span.contains(g) {
                gens.push(g);
                span = self.generated(&gens);
            }
        }
        let mut images = vec![0u32; gens.len()];
        self.iso_search(other, &gens, &mut images, 0)
    }

    fn iso_search(&self, other: &FiniteGroup, gens: &[u32], images: &mut Vec<u32>, k: usize) -> bool {
        if k == gens.len() {
            return self.extend_to_iso(other, gens, images);
        }
        let want = self.elem_order(gens[k]);
        for y in other.elements() {
            if other.elem_order(y) == want {
                images[k] = y;
                if self.iso_search(other, gens, images, k + 1) {
                    return true;
                }
            }
        }
        false
    }

    fn extend_to_iso(&self, other: &FiniteGroup, gens: &[u32], images: &[u32]) -> bool {
        let mut map = vec![u32::MAX; self.order];
        map[self.identity as usize] = other.identity;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (g, im) in gens.iter().zip(images) {
                let y = self.mul(x, *g);
                let fy = other.mul(map[x as usize], *im);
                if map[y as usize] == u32::MAX {
                    map[y as usize] = fy;
                    queue.push_back(y);
                } else if map[y as usize] != fy {
                    return false;
                }
            }
        }
        let mut hit = vec![false; self.order];
        for &v in &map {
            if v == u32::MAX || hit[v as usize] {
                return false;
            }
            hit[v as usize] = true;
        }
        GroupHom { images: map }.verify(self, other).is_ok()
    }
}

/// Number of permutations of `n` points.
pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// The wreath product `G ≀ S_n` with its two standard embeddings.
#[derive(Debug, Clone)]
pub struct WreathGroup {
    pub group: FiniteGroup,
    pub base: FiniteGroup,
    pub sym: FiniteGroup,
    pub n: usize,
    /// `G^n -> G ≀ S_n`, tuple `t` to `(t, id)`.
    pub base_embedding: GroupHom,
    /// `S_n -> G ≀ S_n`, `σ` to `((1,…,1), σ)`.
    pub sym_embedding: GroupHom,
}

impl WreathGroup {
    /// Index of `((g_1..g_n), σ)` is `tuple_index * n! + σ_index`.
    pub fn index(&self, tuple: usize, sigma: usize) -> u32 {
        (tuple * factorial(self.n) + sigma) as u32
    }
    pub fn split(&self, x: u32) -> (usize, usize) {
        let f = factorial(self.n);
        (x as usize / f, x as usize % f)
    }
}

/// Row-major tuple index helpers for `G^n`.
pub fn tuple_from_index(idx: usize, base: usize, n: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    let mut x = idx;
    for i in (0..n).rev() {
        t[i] = x % base;
        x /= base;
    }
    t
}

pub fn tuple_to_index(t: &[usize], base: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * base + x)
}

/// Left place-permutation action `^σ(h)_i = h_{σ^{-1}(i)}`.
pub fn permute_tuple<T: Clone>(sigma: &[u32], h: &[T]) -> Vec<T> {
    let inv = perm_inverse(sigma);
    (0..h.len()).map(|i| h[inv[i] as usize].clone()).collect()
}

/// `G ≀ S_n` with multiplication `(g, σ)(h, τ) = (g · ^σh, στ)`.
pub fn wreath_group(g: &FiniteGroup, n: usize) -> Result<WreathGroup> {
    let sym = FiniteGroup::symmetric(n)?;
    let sperms: Vec<Perm> = sym.perms().unwrap().to_vec();
    let m = g.order();
    let nf = factorial(n);
    let tuples = m.checked_pow(n as u32).unwrap_or(usize::MAX);
    let total = tuples.saturating_mul(nf);
    if total > max_group_order() {
        return Err(Error::OrderCapExceeded(format!("|G|^n n! = {total}")));
    }
    let decode = |x: usize| (tuple_from_index(x / nf, m, n), x % nf);
    let mut table = vec![0u32; total * total];
    for a in 0..total {
        let (ga, sa) = decode(a);
        for b in 0..total {
            let (gb, sb) = decode(b);
            let moved = permute_tuple(&sperms[sa], &gb);
            let prod: Vec<usize> = ga.iter().zip(&moved).map(|(&x, &y)| g.mul(x as u32, y as u32) as usize).collect();
            let s = sym.mul(sa as u32, sb as u32) as usize;
            table[a * total + b] = (tuple_to_index(&prod, m) * nf + s) as u32;
        }
    }
    let labels = (0..total)
        .map(|x| {
            let (t, s) = decode(x);
            let ls: Vec<&str> = t.iter().map(|&i| g.label(i as u32)).collect();
            format!("(({}),{})", ls.join(","), sym.label(s as u32))
        })
        .collect();
    let group = FiniteGroup::from_flat(total, table, labels, None)?;
    let id_tuple = tuple_to_index(&vec![g.identity() as usize; n], m);
    let base_pow = FiniteGroup::direct_power(g, n)?;
    let base_embedding = GroupHom { images: (0..tuples).map(|t| (t * nf) as u32).collect() };
    let sym_embedding = GroupHom { images: (0..nf).map(|s| (id_tuple * nf + s) as u32).collect() };
    base_embedding.verify(&base_pow, &group)?;
    sym_embedding.verify(&sym, &group)?;
    Ok(WreathGroup { group, base: g.clone(), sym, n, base_embedding, sym_embedding })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 3).unwrap()
    }

    fn s4() -> FiniteGroup {
        FiniteGroup::from_permutations(&[vec![1, 0, 2, 3], vec![1, 2, 3, 0]], 4).unwrap()
    }

    /// Naive closure: repeatedly multiply everything until nothing new appears.
    fn naive_closure(gens: &[Perm], degree: usize) -> BTreeSet<Perm> {
        let mut set: BTreeSet<Perm> = BTreeSet::from([(0..degree as u32).collect()]);
        set.extend(gens.iter().cloned());
        loop {
            let cur: Vec<Perm> = set.iter().cloned().collect();
            let before = set.len();
            for a in &cur {
                for b in &cur {
                    set.insert(perm_compose(a, b));
                }
            }
            if set.len() == before {
                return set;
            }
        }
    }

    #[test]
    fn s3_from_generators() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.conjugacy_classes().len(), 3);
        assert_eq!(g.identity(), 0);
        g.verify_axioms().unwrap();
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = FiniteGroup::from_permutations(&[], 3).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn klein_four() {
        let g = FiniteGroup::from_permutations(&[vec![1, 0, 3, 2], vec![2, 3, 0, 1]], 4).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.is_abelian());
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(matches!(FiniteGroup::from_permutations(&[vec![0, 0, 1]], 3), Err(Error::NotBijection(_))));
    }

    #[test]
    fn closure_agrees_with_naive_oracle() {
        let cases: Vec<(Vec<Perm>, usize)> = vec![
            (vec![vec![1, 0, 2], vec![1, 2, 0]], 3),
            (vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]], 4),
            (vec![vec![1, 2, 0, 3], vec![0, 2, 3, 1]], 4),
            (vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]], 4),
            (vec![vec![1, 2, 3, 0]], 4),
        ];
        for (gens, d) in cases {
            let g = FiniteGroup::from_permutations(&gens, d).unwrap();
            let naive = naive_closure(&gens, d);
            let ours: BTreeSet<Perm> = g.perms().unwrap().iter().cloned().collect();
            assert_eq!(ours, naive);
            assert!(g.order() <= 24);
        }
    }

    #[test]
    fn quotient_examples() {
        let g = s3();
        let a3 = g.generated(&[g.find_perm(&[1, 2, 0]).unwrap()]);
        let (q, proj) = g.quotient(&a3).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj.kernel(&g, &q), a3);
        let (q1, _) = g.quotient(&g.trivial_subgroup()).unwrap();
        assert!(q1.is_isomorphic(&g));
        let (qg, _) = g.quotient(&g.whole()).unwrap();
        assert_eq!(qg.order(), 1);
        let c2 = g.generated(&[g.find_perm(&[1, 0, 2]).unwrap()]);
        assert_eq!(g.quotient(&c2).unwrap_err(), Error::NotNormal);
    }

    #[test]
    fn p_subgroups_examples() {
        let g = s3();
        let p3: Vec<usize> = g.p_subgroups_up_to_conjugacy(3).iter().map(|s| s.order()).collect();
        assert_eq!(p3, vec![1, 3]);
        let p2: Vec<usize> = g.p_subgroups_up_to_conjugacy(2).iter().map(|s| s.order()).collect();
        assert_eq!(p2, vec![1, 2]);
        let c2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(c2.p_subgroups_up_to_conjugacy(3).len(), 1);
        // S4 at p = 2: 1, two classes of C2, C4, two classes of V4, D8.
        let s4 = s4();
        let p2: Vec<usize> = s4.p_subgroups_up_to_conjugacy(2).iter().map(|s| s.order()).collect();
        assert_eq!(p2, vec![1, 2, 2, 4, 4, 4, 8]);
    }

    #[test]
    fn normalizer_centralizer_examples() {
        let g = s3();
        let q = g.generated(&[g.find_perm(&[1, 2, 0]).unwrap()]);
        let (n, c) = g.normalizer_centralizer(&q).unwrap();
        assert_eq!((n.order(), c.order()), (6, 3));
        let (n, c) = g.normalizer_centralizer(&g.trivial_subgroup()).unwrap();
        assert_eq!((n.order(), c.order()), (6, 6));
        let s4 = s4();
        let q = s4.generated(&[s4.find_perm(&[1, 2, 0, 3]).unwrap()]);
        assert_eq!(s4.normalizer(&q).order(), 6);
        let bad = Subgroup::from_sorted_unchecked(vec![0, 1, 2]);
        assert!(s4.normalizer_centralizer(&bad).is_err());
    }

    #[test]
    fn normalizer_restricts_to_normal_subgroup() {
        let s4 = s4();
        let a4 = s4.generated(&[s4.find_perm(&[1, 2, 0, 3]).unwrap(), s4.find_perm(&[0, 2, 3, 1]).unwrap()]);
        assert_eq!(a4.order(), 12);
        for q in s4.p_subgroups_up_to_conjugacy(3).iter().chain(s4.p_subgroups_up_to_conjugacy(2).iter()) {
            if !q.is_subset_of(&a4) {
                continue;
            }
            let lhs = s4.intersect(&s4.normalizer(q), &a4);
            let rhs = Subgroup::from_sorted_unchecked(
                a4.elements()
                    .iter()
                    .copied()
                    .filter(|&g| q.elements().iter().all(|&x| q.contains(s4.conj(g, x))))
                    .collect(),
            );
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn wreath_multiplication_formula() {
        let g = s3();
        let w = wreath_group(&g, 2).unwrap();
        assert_eq!(w.group.order(), 72);
        let swap = 1usize; // S2 in lex order: [id, (12)]
        for g1 in 0..6u32 {
            for g2 in [0u32, 3] {
                for h1 in [1u32, 4] {
                    for h2 in 0..6u32 {
                        let a = w.index(tuple_to_index(&[g1 as usize, g2 as usize], 6), swap);
                        let b = w.index(tuple_to_index(&[h1 as usize, h2 as usize], 6), 0);
                        let expect =
                            w.index(tuple_to_index(&[g.mul(g1, h2) as usize, g.mul(g2, h1) as usize], 6), swap);
                        assert_eq!(w.group.mul(a, b), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn wreath_c2_is_dihedral_of_order_8() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let w = wreath_group(&c2, 2).unwrap();
        assert_eq!(w.group.order(), 8);
        let d8 = FiniteGroup::from_permutations(&[vec![1, 2, 3, 0], vec![0, 3, 2, 1]], 4).unwrap();
        assert_eq!(d8.order(), 8);
        assert!(w.group.is_isomorphic(&d8));
        assert!(!w.group.is_isomorphic(&FiniteGroup::cyclic(8).unwrap()));
    }

    #[test]
    fn wreath_with_one_factor_is_the_group() {
        let g = s3();
        let w = wreath_group(&g, 1).unwrap();
        assert_eq!(w.group.to_json().table, g.to_json().table);
    }

    #[test]
    fn sym_action_law_exhaustive() {
        for n in 1..=3 {
            let sym = FiniteGroup::symmetric(n).unwrap();
            let perms = sym.perms().unwrap();
            for m in [2usize, 3, 6] {
                let count = m.pow(n as u32);
                for t in 0..count {
                    let h = tuple_from_index(t, m, n);
                    for (a, s) in perms.iter().enumerate() {
                        for (b, u) in perms.iter().enumerate() {
                            let st = &perms[sym.mul(a as u32, b as u32) as usize];
                            assert_eq!(permute_tuple(s, &permute_tuple(u, &h)), permute_tuple(st, &h));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn wreath_order_formula() {
        for (g, n) in [(FiniteGroup::cyclic(2).unwrap(), 3), (FiniteGroup::cyclic(3).unwrap(), 2), (s3(), 2)] {
            let w = wreath_group(&g, n).unwrap();
            assert_eq!(w.group.order(), g.order().pow(n as u32) * factorial(n));
        }
        assert!(matches!(wreath_group(&s4(), 3), Err(Error::OrderCapExceeded(_))));
    }

    #[test]
    fn json_round_trip() {
        let g = s3();
        let j = serde_json::to_string(&g.to_json()).unwrap();
        let back = FiniteGroup::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back.to_json().table, g.to_json().table);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_elements() -> impl Strategy<Value = (usize, u32, u32, u32)> {
            (0usize..3).prop_flat_map(|k| {
                let order = [24u32, 72, 18][k];
                (Just(k), 0..order, 0..order, 0..order)
            })
        }

        fn group(k: usize) -> FiniteGroup {
            match k {
                0 => s4(),
                1 => wreath_group(&s3(), 2).unwrap().group,
                _ => wreath_group(&FiniteGroup::cyclic(3).unwrap(), 2).unwrap().group,
            }
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn group_laws((k, a, b, c) in arb_elements()) {
                let g = group(k);
                prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                prop_assert_eq!(g.inv(g.mul(a, b)), g.mul(g.inv(b), g.inv(a)));
                prop_assert_eq!(g.mul(a, g.identity()), a);
                let ab = g.generated(&[a, b]);
                prop_assert_eq!(g.order() % ab.order(), 0);
                prop_assert!(ab.contains(g.mul(a, g.inv(b))));
            }

            #[test]
            fn conjugacy_is_a_partition_by_index((k, a, _b, _c) in arb_elements()) {
                let g = group(k);
                let classes = g.conjugacy_classes();
                prop_assert_eq!(classes.iter().map(Vec::len).sum::<usize>(), g.order());
                let cls = classes.iter().find(|c| c.contains(&a)).unwrap();
                let centralizer = g.elements().filter(|&x| g.mul(x, a) == g.mul(a, x)).count();
                prop_assert_eq!(cls.len() * centralizer, g.order());
            }
        }
    }
}
