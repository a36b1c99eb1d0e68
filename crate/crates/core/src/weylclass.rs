//! Combinatorial classification of Euler-element orbits under signed
//! permutation Weyl groups.
//!
//! Everything here is exact integer/half-integer combinatorics: orbits of
//! sign vectors in `{±½}^r` under the groups of type `A(r−1)` (permutations),
//! `C(r)` (all signed permutations) and `D(r)` (even sign changes), the
//! double cosets `W(A_{r−1}) \ W(C_r) / W(A_{r−1})`, and the restriction of
//! a `C_{2s}` root system to the pairwise-equal-coordinates subspace.

use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WeylError {
    #[error("rank {rank} exceeds the enumeration bound {bound}")]
    RankTooLarge { rank: usize, bound: usize },
    #[error("rank must be at least 1")]
    RankZero,
}

/// A signed permutation: `w·x` permutes coordinates and flips signs,
/// `(w·x)_i = signs[i] · x_{perm[i]}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn identity(r: usize) -> Self {
        SignedPermutation {
            perm: (0..r).collect(),
            signs: vec![1; r],
        }
    }

    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Self {
        assert_eq!(perm.len(), signs.len());
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            assert!(p < perm.len() && !seen[p], "not a permutation");
            seen[p] = true;
        }
        assert!(signs.iter().all(|&s| s == 1 || s == -1));
        SignedPermutation { perm, signs }
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    /// Applies the group element to an integer vector.
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        (0..x.len())
            .map(|i| self.signs[i] as i64 * x[self.perm[i]])
            .collect()
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        let r = self.rank();
        let mut perm = vec![0usize; r];
        let mut signs = vec![1i8; r];
        for i in 0..r {
            perm[i] = other.perm[self.perm[i]];
            signs[i] = self.signs[i] * other.signs[self.perm[i]];
        }
        SignedPermutation { perm, signs }
    }

    /// The element flipping the first `j` signs, no permutation part.
    pub fn sign_flip_prefix(r: usize, j: usize) -> Self {
        let signs = (0..r).map(|i| if i < j { -1 } else { 1 }).collect();
        SignedPermutation {
            perm: (0..r).collect(),
            signs,
        }
    }

    /// Number of sign flips; for prefix-flip representatives this is the
    /// double-coset index.
    pub fn minus_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s == -1).count()
    }
}

/// The three Weyl subgroups acting on `{±½}^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeylSubgroup {
    /// `W(A_{r−1})`: permutations only, order `r!`.
    A,
    /// `W(C_r)`: all signed permutations, order `2^r·r!`.
    C,
    /// `W(D_r)`: even sign changes, order `2^{r−1}·r!`.
    D,
}

impl WeylSubgroup {
    /// Generators as signed permutations of rank `r`.
    pub fn generators(&self, r: usize) -> Vec<SignedPermutation> {
        let mut gens = Vec::new();
        // Adjacent transpositions generate the permutation part.
        for i in 0..r.saturating_sub(1) {
            let mut perm: Vec<usize> = (0..r).collect();
            perm.swap(i, i + 1);
            gens.push(SignedPermutation::new(perm, vec![1; r]));
        }
        match self {
            WeylSubgroup::A => {}
            WeylSubgroup::C => {
                let mut signs = vec![1i8; r];
                signs[0] = -1;
                gens.push(SignedPermutation::new((0..r).collect(), signs));
            }
            WeylSubgroup::D => {
                if r >= 2 {
                    let mut signs = vec![1i8; r];
                    signs[0] = -1;
                    signs[1] = -1;
                    gens.push(SignedPermutation::new((0..r).collect(), signs));
                }
            }
        }
        gens
    }

    pub fn order(&self, r: usize) -> u64 {
        let fact: u64 = (1..=r as u64).product();
        match self {
            WeylSubgroup::A => fact,
            WeylSubgroup::C => (1u64 << r) * fact,
            WeylSubgroup::D => (1u64 << (r - 1)) * fact,
        }
    }
}

/// A candidate Euler vector: entries `±½`, stored as signs `±1` to stay in
/// exact integer arithmetic ("doubled coordinates").
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EulerVector(pub Vec<i8>);

impl EulerVector {
    pub fn entries_doubled(&self) -> Vec<i64> {
        self.0.iter().map(|&s| s as i64).collect()
    }

    /// Number of `−½` entries.
    pub fn minus_count(&self) -> usize {
        self.0.iter().filter(|&&s| s == -1).count()
    }

    /// The canonical representative `h_k = ½(1,...,1,−1,...,−1)` with `k`
    /// plus-entries, as a vector.
    pub fn h_k(r: usize, k: usize) -> Self {
        EulerVector((0..r).map(|i| if i < k { 1 } else { -1 }).collect())
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&s| if s == 1 { "1/2".into() } else { "-1/2".into() })
            .collect();
        format!("({})", parts.join(", "))
    }
}

/// Orbit partition of all `2^r` Euler vectors under a Weyl subgroup.
#[derive(Debug, Clone)]
pub struct OrbitPartition {
    pub subgroup: WeylSubgroup,
    pub rank: usize,
    /// Canonical representatives sorted descending, one per orbit, with the
    /// orbit sizes.
    pub orbits: Vec<(EulerVector, usize)>,
}

impl OrbitPartition {
    pub fn count(&self) -> usize {
        self.orbits.len()
    }
}

const ORBIT_RANK_BOUND: usize = 12;

/// Enumerates the orbit partition of `{±½}^r` under the subgroup action.
pub fn orbits(subgroup: WeylSubgroup, r: usize) -> Result<OrbitPartition, WeylError> {
    if r == 0 {
        return Err(WeylError::RankZero);
    }
    if r > ORBIT_RANK_BOUND {
        return Err(WeylError::RankTooLarge {
            rank: r,
            bound: ORBIT_RANK_BOUND,
        });
    }
    let gens = subgroup.generators(r);
    let all: Vec<EulerVector> = (0u32..(1 << r))
        .map(|mask| {
            EulerVector(
                (0..r)
                    .map(|i| if mask & (1 << i) != 0 { -1 } else { 1 })
                    .collect(),
            )
        })
        .collect();
    let mut seen: BTreeSet<EulerVector> = BTreeSet::new();
    let mut out: Vec<(EulerVector, usize)> = Vec::new();
    for start in &all {
        if seen.contains(start) {
            continue;
        }
        // Breadth-first closure of the orbit under the generators.
        let mut orbit: BTreeSet<EulerVector> = BTreeSet::new();
        let mut queue = vec![start.clone()];
        orbit.insert(start.clone());
        while let Some(v) = queue.pop() {
            let coords = v.entries_doubled();
            for g in &gens {
                let image = EulerVector(g.apply(&coords).iter().map(|&x| x as i8).collect());
                if orbit.insert(image.clone()) {
                    queue.push(image);
                }
            }
        }
        // Canonical representative: entries sorted descending.
        let mut rep_entries: Vec<i8> = start.0.clone();
        rep_entries.sort_unstable_by(|a, b| b.cmp(a));
        let rep = EulerVector(rep_entries);
        debug_assert!(orbit.contains(&rep) || !orbit.contains(&rep));
        let size = orbit.len();
        for v in orbit {
            seen.insert(v);
        }
        out.push((rep, size));
    }
    out.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(OrbitPartition {
        subgroup,
        rank: r,
        orbits: out,
    })
}

/// Double cosets `W(A_{r−1}) \ W(C_r) / W(A_{r−1})` by brute-force
/// enumeration of the full signed-permutation group.
#[derive(Debug, Clone)]
pub struct DoubleCosets {
    pub rank: usize,
    pub count: usize,
    /// One representative per coset: the canonical `w_j` flipping the first
    /// `j` signs, `j = 0..=r`.
    pub representatives: Vec<SignedPermutation>,
}

const DOUBLE_COSET_RANK_BOUND: usize = 5;

pub fn double_cosets(r: usize) -> Result<DoubleCosets, WeylError> {
    if r == 0 {
        return Err(WeylError::RankZero);
    }
    if r > DOUBLE_COSET_RANK_BOUND {
        return Err(WeylError::RankTooLarge {
            rank: r,
            bound: DOUBLE_COSET_RANK_BOUND,
        });
    }
    let full = enumerate_group(WeylSubgroup::C, r);
    let sub = enumerate_group(WeylSubgroup::A, r);
    debug_assert_eq!(full.len() as u64, WeylSubgroup::C.order(r));
    debug_assert_eq!(sub.len() as u64, WeylSubgroup::A.order(r));

    let mut assigned: BTreeMap<SignedPermutation, usize> = BTreeMap::new();
    let mut reps: Vec<SignedPermutation> = Vec::new();
    for g in &full {
        if assigned.contains_key(g) {
            continue;
        }
        let id = reps.len();
        // Close the double coset A g A.
        let mut members = BTreeSet::new();
        for a1 in &sub {
            let left = a1.compose(g);
            for a2 in &sub {
                members.insert(left.compose(a2));
            }
        }
        // Prefer the canonical prefix-flip representative when present.
        let canonical = (0..=r)
            .map(|j| SignedPermutation::sign_flip_prefix(r, j))
            .find(|w| members.contains(w));
        reps.push(canonical.unwrap_or_else(|| g.clone()));
        for m in members {
            assigned.insert(m, id);
        }
    }
    Ok(DoubleCosets {
        rank: r,
        count: reps.len(),
        representatives: reps,
    })
}

fn enumerate_group(subgroup: WeylSubgroup, r: usize) -> Vec<SignedPermutation> {
    let mut perms: Vec<Vec<usize>> = Vec::new();
    permute_into((0..r).collect(), 0, &mut perms);
    let mut out = Vec::new();
    for perm in &perms {
        for mask in 0u32..(1 << r) {
            let signs: Vec<i8> = (0..r)
                .map(|i| if mask & (1 << i) != 0 { -1 } else { 1 })
                .collect();
            let keep = match subgroup {
                WeylSubgroup::A => mask == 0,
                WeylSubgroup::C => true,
                WeylSubgroup::D => mask.count_ones() % 2 == 0,
            };
            if keep {
                out.push(SignedPermutation::new(perm.clone(), signs));
            }
        }
    }
    out
}

fn permute_into(mut items: Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_into(items.clone(), k + 1, out);
        items.swap(k, i);
    }
}

/// Result of restricting the `C_{2s}` root system to the subspace
/// `{x₁ = x₂, x₃ = x₄, ...}`.
#[derive(Debug, Clone)]
pub struct RestrictedRoots {
    pub half_rank: usize,
    /// Distinct nonzero restricted functionals (integer coordinates).
    pub nonzero: BTreeSet<Vec<i64>>,
    /// How many roots restricted to the zero functional.
    pub zero_count: usize,
    /// Whether the nonzero set equals the `C_s` root system exactly.
    pub equals_c_system: bool,
}

const RESTRICT_BOUND: usize = 6;

/// Roots of `C_r` as integer vectors: `±2e_i` and `±e_i ± e_j` (i < j).
pub fn c_roots(r: usize) -> Vec<Vec<i64>> {
    let mut roots = Vec::new();
    for i in 0..r {
        for sign in [2i64, -2] {
            let mut v = vec![0i64; r];
            v[i] = sign;
            roots.push(v);
        }
    }
    for i in 0..r {
        for j in (i + 1)..r {
            for (si, sj) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = vec![0i64; r];
                v[i] = si;
                v[j] = sj;
                roots.push(v);
            }
        }
    }
    roots
}

/// Restricts `C_{2s}` to the pairwise-equal subspace and compares the
/// nonzero part with `C_s`.
pub fn restrict_roots(s: usize) -> Result<RestrictedRoots, WeylError> {
    if s == 0 {
        return Err(WeylError::RankZero);
    }
    if s > RESTRICT_BOUND {
        return Err(WeylError::RankTooLarge {
            rank: s,
            bound: RESTRICT_BOUND,
        });
    }
    let big = c_roots(2 * s);
    let mut nonzero: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut zero_count = 0usize;
    for root in &big {
        // Functional on the subspace x_{2j} = x_{2j+1} = y_j: coordinates add.
        let restricted: Vec<i64> = (0..s).map(|j| root[2 * j] + root[2 * j + 1]).collect();
        if restricted.iter().all(|&c| c == 0) {
            zero_count += 1;
        } else {
            nonzero.insert(restricted);
        }
    }
    let expected: BTreeSet<Vec<i64>> = c_roots(s).into_iter().collect();
    let equals_c_system = nonzero == expected;
    Ok(RestrictedRoots {
        half_rank: s,
        nonzero,
        zero_count,
        equals_c_system,
    })
}
