//! Structured outcomes of sampled verification runs, plus the deterministic
//! seed-splitting scheme shared by every suite.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One disagreeing sample: the raw input vector and the value every
/// predicate reported on it.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Mismatch {
    pub input: Vec<f64>,
    pub values: BTreeMap<String, bool>,
}

/// Outcome of a sampled verification run.
///
/// Invariant: `passes + mismatches.len() + boundary_excluded == samples`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VerifyReport {
    pub command: String,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub samples: u64,
    pub passes: u64,
    pub boundary_excluded: u64,
    pub mismatches: Vec<Mismatch>,
    pub wall_time_ms: u64,
}

impl VerifyReport {
    pub fn new(command: impl Into<String>, seed: u64, tolerances: BTreeMap<String, f64>) -> Self {
        VerifyReport {
            command: command.into(),
            seed,
            tolerances,
            samples: 0,
            passes: 0,
            boundary_excluded: 0,
            mismatches: Vec::new(),
            wall_time_ms: 0,
        }
    }

    pub fn record_pass(&mut self) {
        self.samples += 1;
        self.passes += 1;
    }

    pub fn record_boundary(&mut self) {
        self.samples += 1;
        self.boundary_excluded += 1;
    }

    pub fn record_mismatch(&mut self, input: Vec<f64>, values: BTreeMap<String, bool>) {
        self.samples += 1;
        self.mismatches.push(Mismatch { input, values });
    }

    /// Folds another report's counts into this one.
    pub fn absorb(&mut self, other: VerifyReport) {
        self.samples += other.samples;
        self.passes += other.passes;
        self.boundary_excluded += other.boundary_excluded;
        self.mismatches.extend(other.mismatches);
    }

    pub fn all_passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// Checks the bookkeeping invariant.
    pub fn consistent(&self) -> bool {
        self.passes + self.mismatches.len() as u64 + self.boundary_excluded == self.samples
    }
}

/// Counter-based splitting of one master seed into independent streams.
///
/// Children are derived with a splitmix64 step over `(master, label)`, so a
/// suite can hand out per-sample generators in any order (or in parallel)
/// and still reproduce byte-identical results for a fixed master seed.
#[derive(Debug, Clone, Copy)]
pub struct SeedStream {
    master: u64,
}

impl SeedStream {
    pub fn new(master: u64) -> Self {
        SeedStream { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    /// Derived seed for the labeled child stream.
    pub fn child_seed(&self, label: u64) -> u64 {
        splitmix64(self.master.wrapping_add(splitmix64(label ^ 0x9e37_79b9_7f4a_7c15)))
    }

    /// Deterministic RNG for the labeled child stream.
    pub fn rng(&self, label: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.child_seed(label))
    }

    /// Nested stream, for suites that split further per phase.
    pub fn substream(&self, label: u64) -> SeedStream {
        SeedStream {
            master: self.child_seed(label),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Chebyshev-spaced grid in the open interval `(0, π)`, inset by `margin`
/// at both endpoints. Used by the KMS-condition predicates.
pub fn kms_grid(points: usize, margin: f64) -> Vec<f64> {
    let a = margin;
    let b = std::f64::consts::PI - margin;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (0..points)
        .map(|k| {
            let theta = (2 * k + 1) as f64 * std::f64::consts::PI / (2 * points) as f64;
            mid + half * theta.cos()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn report_invariant_bookkeeping() {
        let mut r = VerifyReport::new("test", 1, BTreeMap::new());
        r.record_pass();
        r.record_boundary();
        r.record_mismatch(vec![1.0], BTreeMap::new());
        assert_eq!(r.samples, 3);
        assert!(r.consistent());
        assert!(!r.all_passed());
    }

    #[test]
    fn seed_streams_are_deterministic_and_distinct() {
        let s = SeedStream::new(42);
        let a: f64 = s.rng(0).random();
        let a2: f64 = s.rng(0).random();
        let b: f64 = s.rng(1).random();
        assert_eq!(a, a2);
        assert_ne!(a, b);
        assert_ne!(s.child_seed(3), SeedStream::new(43).child_seed(3));
    }

    #[test]
    fn kms_grid_stays_in_open_interval() {
        let g = kms_grid(32, 1e-3);
        assert_eq!(g.len(), 32);
        for t in &g {
            assert!(*t > 0.0 && *t < std::f64::consts::PI);
            assert!(*t >= 1e-3 - 1e-12 && *t <= std::f64::consts::PI - 1e-3 + 1e-12);
        }
    }
}
