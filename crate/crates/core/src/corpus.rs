//! Test corpora of valid matrices and batch runs over them.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ckalg::{validate, CkMatrix};
use crate::classify::transpose_consistency;
use crate::diagrams::strong_duality_report;
use crate::error::Result;
use crate::fgab::SearchConfig;
use crate::intmat::IntMatrix;

fn from_bits(n: usize, bits: u64) -> IntMatrix {
    IntMatrix::from_fn(n, n, |i, j| BigInt::from((bits >> (i * n + j)) & 1))
}

/// Every valid `n × n` matrix, ordered by the integer whose bit `i·n + j`
/// is entry `(i, j)`. Only sensible for `n ≤ 4`.
pub fn exhaustive(n: usize) -> Vec<CkMatrix> {
    assert!(n * n < 64, "exhaustive enumeration needs n*n < 64");
    (0u64..1 << (n * n))
        .into_par_iter()
        .filter_map(|bits| validate(&from_bits(n, bits)).ok())
        .collect()
}

/// `count` valid `n × n` matrices drawn by rejection sampling from uniform
/// 0-1 matrices. The same seed gives the same list.
pub fn sample(n: usize, count: usize, seed: u64) -> Vec<CkMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let m = IntMatrix::from_fn(n, n, |_, _| BigInt::from(u8::from(rng.gen_bool(0.5))));
        if let Ok(a) = validate(&m) {
            out.push(a);
        }
    }
    out
}

/// All matrices for `n ≤ 3`, otherwise a seeded sample of `limit`.
pub fn corpus(n: usize, limit: usize, seed: u64) -> Vec<CkMatrix> {
    if n <= 3 {
        exhaustive(n)
    } else {
        sample(n, limit, seed)
    }
}

/// `count` index pairs into a list of length `len`, seeded.
pub fn sample_pairs(len: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
    if len == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    (0..count).map(|_| (rng.gen_range(0..len), rng.gen_range(0..len))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixOutcome {
    pub index: usize,
    pub rows: Vec<Vec<u8>>,
    pub pass: bool,
    pub failed_checks: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusSummary {
    pub size: usize,
    pub seed: u64,
    pub matrices: usize,
    pub passed: usize,
    pub pairs_checked: usize,
    pub pairs_consistent: usize,
    pub outcomes: Vec<MatrixOutcome>,
}

impl CorpusSummary {
    pub fn pass(&self) -> bool {
        self.passed == self.matrices && self.pairs_consistent == self.pairs_checked
    }
}

/// Runs the duality report on every corpus matrix and the transpose
/// consistency check on `limit` sampled pairs.
pub fn run(n: usize, limit: usize, seed: u64, cfg: &SearchConfig) -> Result<CorpusSummary> {
    let mats = corpus(n, limit, seed);
    let outcomes = mats
        .par_iter()
        .enumerate()
        .map(|(index, a)| {
            let report = strong_duality_report(a)?;
            Ok(MatrixOutcome {
                index,
                rows: a.to_bits(),
                pass: report.pass,
                failed_checks: report.failures().count(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs = sample_pairs(mats.len(), limit, seed);
    let consistent = pairs
        .par_iter()
        .map(|&(i, j)| transpose_consistency(&mats[i], &mats[j], cfg))
        .collect::<Result<Vec<bool>>>()?;
    Ok(CorpusSummary {
        size: n,
        seed,
        matrices: mats.len(),
        passed: outcomes.iter().filter(|o| o.pass).count(),
        pairs_checked: pairs.len(),
        pairs_consistent: consistent.iter().filter(|&&c| c).count(),
        outcomes,
    })
}
