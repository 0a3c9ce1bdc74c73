//! Finite Abelian groups presented as direct sums of cyclic groups.
//!
//! A group is an ordered list of cyclic orders `n_1, …, n_k` (each ≥ 2); the
//! empty list is the trivial group. Elements are residue vectors added
//! componentwise. Two groups are isomorphic iff their invariant-factor
//! canonical forms agree.

use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("cyclic factor must be at least 2, got {0}")]
    InvalidFactor(u64),
    #[error("group order overflows 64-bit arithmetic")]
    OrderOverflow,
    #[error("element does not belong to this group")]
    GroupMismatch,
    #[error("{k} does not divide the group order {order}")]
    NotADivisor { k: u64, order: u64 },
    #[error("the given set is not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("cannot parse group spec {0:?}")]
    ParseGroup(String),
    #[error("cannot parse element literal {0:?}")]
    ParseElement(String),
}

/// A finite Abelian group `Z_{n_1} × … × Z_{n_k}`.
///
/// Stored in the factor list as constructed (enumeration produces primary
/// decomposition); use [`AbelianGroup::canonical`] for isomorphism tests.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianGroup {
    factors: Vec<u64>,
    order: u64,
    // strides[i] = product of factors[i+1..]; element index = Σ rᵢ·strides[i]
    strides: Vec<u64>,
    fp: u64,
}

/// An element of an [`AbelianGroup`]: a residue vector plus a fingerprint of
/// the owning group, checked on every binary operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    residues: Vec<u64>,
    fp: u64,
}

fn fingerprint(factors: &[u64]) -> u64 {
    // FNV-1a over the factor list; value semantics so that two independently
    // constructed copies of the same group interoperate.
    let mut h: u64 = 0xcbf29ce484222325;
    for &f in factors {
        for byte in f.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

impl AbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self, GroupError> {
        let mut order: u64 = 1;
        for &f in &factors {
            if f < 2 {
                return Err(GroupError::InvalidFactor(f));
            }
            order = order.checked_mul(f).ok_or(GroupError::OrderOverflow)?;
        }
        let mut strides = vec![1u64; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1];
        }
        let fp = fingerprint(&factors);
        Ok(AbelianGroup { factors, order, strides, fp })
    }

    /// The trivial group of order 1 (empty factor list).
    pub fn trivial() -> Self {
        AbelianGroup { factors: vec![], order: 1, strides: vec![], fp: fingerprint(&[]) }
    }

    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        if n == 1 {
            return Ok(Self::trivial());
        }
        Self::new(vec![n])
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_cyclic(&self) -> bool {
        // True cyclicity, not just rank 1: Z_2×Z_3 is cyclic.
        self.canonical().len() <= 1
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { residues: vec![0; self.factors.len()], fp: self.fp }
    }

    pub fn element(&self, residues: Vec<u64>) -> Result<GroupElement, GroupError> {
        if residues.len() != self.factors.len() {
            return Err(GroupError::GroupMismatch);
        }
        for (r, n) in residues.iter().zip(&self.factors) {
            if r >= n {
                return Err(GroupError::GroupMismatch);
            }
        }
        Ok(GroupElement { residues, fp: self.fp })
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        e.fp == self.fp
            && e.residues.len() == self.factors.len()
            && e.residues.iter().zip(&self.factors).all(|(r, n)| r < n)
    }

    fn check(&self, e: &GroupElement) -> Result<(), GroupError> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(GroupError::GroupMismatch)
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(a)?;
        self.check(b)?;
        let residues = a
            .residues
            .iter()
            .zip(&b.residues)
            .zip(&self.factors)
            .map(|((x, y), n)| (x + y) % n)
            .collect();
        Ok(GroupElement { residues, fp: self.fp })
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(a)?;
        let residues = a
            .residues
            .iter()
            .zip(&self.factors)
            .map(|(x, n)| (n - x) % n)
            .collect();
        Ok(GroupElement { residues, fp: self.fp })
    }

    /// `a - b`, i.e. `a + neg(b)`.
    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    /// Elements in lexicographic residue order (the deterministic order used
    /// by every greedy and backtracking procedure in this crate).
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(move |i| self.element_at(i))
    }

    /// Decode a lexicographic index into an element.
    pub fn element_at(&self, index: u64) -> GroupElement {
        debug_assert!(index < self.order);
        let residues = self
            .factors
            .iter()
            .zip(&self.strides)
            .map(|(n, s)| (index / s) % n)
            .collect();
        GroupElement { residues, fp: self.fp }
    }

    pub fn index_of(&self, e: &GroupElement) -> Result<u64, GroupError> {
        self.check(e)?;
        Ok(e.residues.iter().zip(&self.strides).map(|(r, s)| r * s).sum())
    }

    /// Index-level addition; the hot path for exact search.
    #[inline]
    pub fn index_add(&self, a: u64, b: u64) -> u64 {
        match self.factors.len() {
            0 => 0,
            1 => {
                let n = self.factors[0];
                let s = a + b;
                if s >= n {
                    s - n
                } else {
                    s
                }
            }
            _ => {
                let mut out = 0;
                for (n, s) in self.factors.iter().zip(&self.strides) {
                    let ra = (a / s) % n;
                    let rb = (b / s) % n;
                    let mut r = ra + rb;
                    if r >= *n {
                        r -= n;
                    }
                    out += r * s;
                }
                out
            }
        }
    }

    #[inline]
    pub fn index_neg(&self, a: u64) -> u64 {
        match self.factors.len() {
            0 => 0,
            1 => {
                let n = self.factors[0];
                (n - a) % n
            }
            _ => {
                let mut out = 0;
                for (n, s) in self.factors.iter().zip(&self.strides) {
                    let ra = (a / s) % n;
                    out += ((n - ra) % n) * s;
                }
                out
            }
        }
    }

    #[inline]
    pub fn index_sub(&self, a: u64, b: u64) -> u64 {
        self.index_add(a, self.index_neg(b))
    }

    /// Invariant-factor form `d_1 | d_2 | … | d_r`, ascending. Empty for the
    /// trivial group. Two groups are isomorphic iff these agree.
    pub fn canonical(&self) -> Vec<u64> {
        // Collect prime-power exponents across all stored factors, then zip
        // the largest powers of each prime together.
        let mut by_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for &f in &self.factors {
            for (p, e) in factorize(f) {
                match by_prime.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, es)) => es.push(e),
                    None => by_prime.push((p, vec![e])),
                }
            }
        }
        for (_, es) in &mut by_prime {
            es.sort_unstable_by(|a, b| b.cmp(a));
        }
        let depth = by_prime.iter().map(|(_, es)| es.len()).max().unwrap_or(0);
        let mut inv = Vec::with_capacity(depth);
        for j in 0..depth {
            let mut d = 1u64;
            for (p, es) in &by_prime {
                if let Some(&e) = es.get(j) {
                    d *= p.pow(e);
                }
            }
            inv.push(d);
        }
        inv.reverse(); // ascending, d_1 | d_2 | … | d_r
        inv
    }

    pub fn is_isomorphic(&self, other: &AbelianGroup) -> bool {
        self.canonical() == other.canonical()
    }

    /// Sum of all `|G|` elements.
    pub fn element_sum(&self) -> GroupElement {
        // Componentwise: each residue of Z_n appears |G|/n times, and
        // 0+1+…+(n−1) ≡ 0 (mod n) for odd n, n/2 for even n.
        let residues = self
            .factors
            .iter()
            .map(|&n| {
                if n % 2 == 1 {
                    0
                } else {
                    ((self.order / n) % 2) * (n / 2)
                }
            })
            .collect();
        GroupElement { residues, fp: self.fp }
    }

    /// True iff the 2-part of the group is a single Z_2, i.e. `|G| ≡ 2 (mod 4)`.
    pub fn sylow_two_is_z2(&self) -> bool {
        self.order % 4 == 2
    }

    /// A deterministic subgroup with exactly `k` elements, in lexicographic
    /// order. Exists for every divisor `k` of the order; the choice allocates
    /// each prime's exponent budget to the earliest factors first.
    pub fn subgroup_of_order(&self, k: u64) -> Result<Vec<GroupElement>, GroupError> {
        if k == 0 || self.order % k != 0 {
            return Err(GroupError::NotADivisor { k, order: self.order });
        }
        // d[i] | factors[i] with Π d[i] = k.
        let mut d = vec![1u64; self.factors.len()];
        for (p, mut need) in factorize(k) {
            for (i, &n) in self.factors.iter().enumerate() {
                if need == 0 {
                    break;
                }
                let avail = factorize(n)
                    .into_iter()
                    .find(|(q, _)| *q == p)
                    .map(|(_, e)| e)
                    .unwrap_or(0);
                let take = need.min(avail);
                d[i] *= p.pow(take);
                need -= take;
            }
            if need > 0 {
                // unreachable when k | order
                return Err(GroupError::NotADivisor { k, order: self.order });
            }
        }
        // Subgroup = ⊕ ⟨nᵢ/dᵢ⟩; enumerate residue combinations in lex order.
        let mut elems = Vec::with_capacity(k as usize);
        let mut stack = vec![0u64; self.factors.len()];
        self.collect_sub(&d, 0, &mut stack, &mut elems);
        debug_assert_eq!(elems.len(), k as usize);
        Ok(elems)
    }

    fn collect_sub(&self, d: &[u64], i: usize, cur: &mut Vec<u64>, out: &mut Vec<GroupElement>) {
        if i == self.factors.len() {
            out.push(GroupElement { residues: cur.clone(), fp: self.fp });
            return;
        }
        let step = self.factors[i] / d[i];
        for t in 0..d[i] {
            cur[i] = t * step;
            self.collect_sub(d, i + 1, cur, out);
        }
        cur[i] = 0;
    }

    /// Checks that `h` is a subgroup: nonempty, inside this group, contains
    /// zero and is closed under addition.
    pub fn verify_subgroup(&self, h: &[GroupElement]) -> Result<(), GroupError> {
        if h.is_empty() {
            return Err(GroupError::NotASubgroup("empty set".into()));
        }
        for e in h {
            self.check(e)?;
        }
        let set: std::collections::HashSet<&GroupElement> = h.iter().collect();
        if set.len() != h.len() {
            return Err(GroupError::NotASubgroup("repeated element".into()));
        }
        if !set.contains(&self.zero()) {
            return Err(GroupError::NotASubgroup("missing identity".into()));
        }
        for a in h {
            for b in h {
                let s = self.add(a, b)?;
                if !set.contains(&s) {
                    return Err(GroupError::NotASubgroup(format!(
                        "not closed: {a} + {b} = {s} is outside"
                    )));
                }
            }
        }
        Ok(())
    }

    /// One representative per coset of the verified subgroup `h`, each the
    /// lexicographically least member of its coset, in lexicographic order.
    pub fn coset_representatives(&self, h: &[GroupElement]) -> Result<Vec<GroupElement>, GroupError> {
        self.verify_subgroup(h)?;
        let mut covered = vec![false; self.order as usize];
        let h_idx: Vec<u64> = h.iter().map(|e| self.index_of(e).unwrap()).collect();
        let mut reps = Vec::with_capacity((self.order / h.len() as u64) as usize);
        for i in 0..self.order {
            if covered[i as usize] {
                continue;
            }
            reps.push(self.element_at(i));
            for &j in &h_idx {
                covered[self.index_add(i, j) as usize] = true;
            }
        }
        Ok(reps)
    }

    /// Parse an element literal such as `(1,2)` or `(4)`.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement, GroupError> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| GroupError::ParseElement(s.into()))?;
        let residues: Result<Vec<u64>, _> = if inner.trim().is_empty() {
            Ok(vec![])
        } else {
            inner.split(',').map(|p| p.trim().parse::<u64>()).collect()
        };
        let residues = residues.map_err(|_| GroupError::ParseElement(s.into()))?;
        self.element(residues).map_err(|_| GroupError::ParseElement(s.into()))
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z1");
        }
        let parts: Vec<String> = self.factors.iter().map(|n| format!("Z{n}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FromStr for AbelianGroup {
    type Err = GroupError;

    /// Parses specs like `Z6`, `Z2xZ3`, case-insensitive. `Z1` is the
    /// trivial group.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut factors = Vec::new();
        for part in s.trim().split(['x', 'X']) {
            let p = part.trim();
            let digits = p
                .strip_prefix('Z')
                .or_else(|| p.strip_prefix('z'))
                .ok_or_else(|| GroupError::ParseGroup(s.into()))?;
            let n: u64 = digits.parse().map_err(|_| GroupError::ParseGroup(s.into()))?;
            if n == 0 {
                return Err(GroupError::ParseGroup(s.into()));
            }
            if n > 1 {
                factors.push(n);
            }
        }
        AbelianGroup::new(factors).map_err(|_| GroupError::ParseGroup(s.into()))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.residues.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }
}

impl serde::Serialize for AbelianGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for AbelianGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let spec = <String as serde::Deserialize>::deserialize(d)?;
        spec.parse().map_err(serde::de::Error::custom)
    }
}

impl serde::Serialize for GroupElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.residues.serialize(s)
    }
}

/// Prime factorization by trial division, `(prime, exponent)` pairs ascending.
pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All partitions of `m` with parts in descending order, in descending
/// lexicographic order: `[m], [m−1,1], …, [1,…,1]`.
fn partitions(m: u32) -> Vec<Vec<u32>> {
    fn go(left: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=left.min(cap)).rev() {
            cur.push(part);
            go(left - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}

/// One representative per isomorphism class of Abelian groups of the given
/// order, in primary decomposition (prime powers grouped by ascending prime,
/// exponents descending). The count is Π p(mᵢ) over the prime multiplicities.
pub fn enumerate_groups(order: u64) -> Vec<AbelianGroup> {
    if order == 0 {
        return vec![];
    }
    if order == 1 {
        return vec![AbelianGroup::trivial()];
    }
    let primes = factorize(order);
    // Cartesian product of per-prime partition choices.
    let choices: Vec<Vec<Vec<u32>>> = primes.iter().map(|&(_, e)| partitions(e)).collect();
    let mut groups = Vec::new();
    let mut pick = vec![0usize; primes.len()];
    loop {
        let mut factors = Vec::new();
        for (i, &(p, _)) in primes.iter().enumerate() {
            for &e in &choices[i][pick[i]] {
                factors.push(p.pow(e));
            }
        }
        groups.push(AbelianGroup::new(factors).expect("factors from a valid order"));
        // odometer increment
        let mut i = primes.len();
        loop {
            if i == 0 {
                return groups;
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
}
