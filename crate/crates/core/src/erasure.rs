//! Erasure sampling, the maximum-likelihood correctability test and Monte
//! Carlo failure-rate estimation.
//!
//! An erasure with support `E` is uncorrectable exactly when some vector
//! supported inside `E` lies in `ker hx` but not in the row space of `hz`, or
//! in `ker hz` but not in the row space of `hx`. Three implementations of that
//! test live here:
//!
//! * [`is_correctable`] counts dimensions with four rank computations,
//! * [`is_correctable_bruteforce`] enumerates every vector supported on `E`,
//! * [`CorrectabilityChecker`] is the prepared form used in the sampling loop.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{next_one, xor_into, BitMatrix, EchelonBasis};
use crate::hgp::HgpCode;
use crate::seed::derive_seed;

/// Largest support [`is_correctable_bruteforce`] enumerates by default.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ErasureError {
    #[error("qubit index {index} out of range for a code on {num_qubits} qubits")]
    IndexOutOfRange { index: usize, num_qubits: usize },
    #[error("erasure is over {erasure} qubits but the code has {code}")]
    LengthMismatch { erasure: usize, code: usize },
    #[error("qubit index {0} appears twice in the erasure")]
    Duplicate(usize),
    #[error("erasure of size {size} exceeds the enumeration limit {limit}")]
    EnumerationLimit { size: usize, limit: usize },
    #[error("erasure probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("probability grid is empty")]
    EmptyGrid,
}

/// Set of erased qubits, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Erasure {
    num_qubits: usize,
    support: Vec<usize>,
}

impl Erasure {
    pub fn new(num_qubits: usize, mut support: Vec<usize>) -> Result<Self, ErasureError> {
        support.sort_unstable();
        if let Some(&index) = support.iter().find(|&&i| i >= num_qubits) {
            return Err(ErasureError::IndexOutOfRange { index, num_qubits });
        }
        if let Some(w) = support.windows(2).find(|w| w[0] == w[1]) {
            return Err(ErasureError::Duplicate(w[0]));
        }
        Ok(Self {
            num_qubits,
            support,
        })
    }

    pub fn empty(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            support: Vec::new(),
        }
    }

    pub fn full(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            support: (0..num_qubits).collect(),
        }
    }

    /// Support given by the set bits of `mask` (qubit `i` is bit `i`).
    pub fn from_mask(num_qubits: usize, mask: u64) -> Self {
        assert!(num_qubits <= 64);
        Self {
            num_qubits,
            support: (0..num_qubits).filter(|&i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Qubits not in the erasure, in increasing order.
    pub fn complement(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.num_qubits - self.support.len());
        let mut it = self.support.iter().peekable();
        for i in 0..self.num_qubits {
            if it.peek() == Some(&&i) {
                it.next();
            } else {
                out.push(i);
            }
        }
        out
    }
}

/// Erases each of `num_qubits` qubits independently with probability `p`.
pub fn sample_erasure<R: Rng + ?Sized>(num_qubits: usize, p: f64, rng: &mut R) -> Erasure {
    let mut support = Vec::new();
    fill_erasure(num_qubits, p, rng, &mut support);
    Erasure {
        num_qubits,
        support,
    }
}

fn fill_erasure<R: Rng + ?Sized>(num_qubits: usize, p: f64, rng: &mut R, out: &mut Vec<usize>) {
    out.clear();
    for i in 0..num_qubits {
        if rng.random::<f64>() < p {
            out.push(i);
        }
    }
}

/// Monte Carlo estimate of a failure probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostEstimate {
    pub erasure_prob: f64,
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    pub std_error: f64,
    pub seed: u64,
}

impl CostEstimate {
    pub fn new(erasure_prob: f64, trials: u64, failures: u64, seed: u64) -> Self {
        assert!(trials > 0 && failures <= trials);
        let rate = failures as f64 / trials as f64;
        Self {
            erasure_prob,
            trials,
            failures,
            rate,
            std_error: (rate * (1.0 - rate) / trials as f64).sqrt(),
            seed,
        }
    }

    /// Rate with zero-failure estimates lifted to half a failure, so that
    /// its logarithm is finite.
    pub fn clamped_rate(&self) -> f64 {
        self.rate.max(0.5 / self.trials as f64)
    }

    /// `std_error / rate`; infinite when no failures were seen.
    pub fn relative_error(&self) -> f64 {
        if self.rate == 0.0 {
            f64::INFINITY
        } else {
            self.std_error / self.rate
        }
    }
}

fn check_support(code: &HgpCode, e: &Erasure) -> Result<(), ErasureError> {
    if e.num_qubits() != code.num_qubits() {
        return Err(ErasureError::LengthMismatch {
            erasure: e.num_qubits(),
            code: code.num_qubits(),
        });
    }
    Ok(())
}

/// Maximum-likelihood correctability by dimension counting.
///
/// With `A_S` the columns of `A` in `S`, the erasure is correctable iff
/// `|E| - rank(hx_E) = rank(hz) - rank(hz_Ē)` and the same with `hx`, `hz`
/// exchanged. Both sides count vectors supported on `E`: the left side those
/// in `ker hx`, the right side those in the row space of `hz`, which is a
/// subspace of the former.
pub fn is_correctable(code: &HgpCode, e: &Erasure) -> Result<bool, ErasureError> {
    check_support(code, e)?;
    let inside = e.support();
    let outside = e.complement();
    let select = |m: &BitMatrix, idx: &[usize]| {
        m.select_columns(idx)
            .expect("erasure indices are validated and sorted")
            .rank()
    };
    let kernel_x = inside.len() - select(code.hx(), inside);
    let stab_z = code.rank_hz() - select(code.hz(), &outside);
    if kernel_x != stab_z {
        return Ok(false);
    }
    let kernel_z = inside.len() - select(code.hz(), inside);
    let stab_x = code.rank_hx() - select(code.hx(), &outside);
    Ok(kernel_z == stab_x)
}

/// Correctability by enumerating all `2^|E|` vectors supported on `E`.
/// Row-space membership is decided by comparing ranks after stacking.
pub fn is_correctable_bruteforce(
    code: &HgpCode,
    e: &Erasure,
    limit: usize,
) -> Result<bool, ErasureError> {
    check_support(code, e)?;
    let size = e.len();
    if size > limit || size >= 64 {
        return Err(ErasureError::EnumerationLimit { size, limit });
    }
    let n = code.num_qubits();
    let annihilates = |m: &BitMatrix, v: &BitMatrix| {
        (0..m.rows()).all(|r| {
            m.row(r)
                .iter()
                .zip(v.row(0))
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                % 2
                == 0
        })
    };
    let in_row_space =
        |m: &BitMatrix, rank: usize, v: &BitMatrix| m.vstack(v).expect("same width").rank() == rank;
    for mask in 1u64..(1u64 << size) {
        let mut v = BitMatrix::zeros(1, n);
        for (k, &q) in e.support().iter().enumerate() {
            if mask >> k & 1 == 1 {
                v.set(0, q, true);
            }
        }
        if annihilates(code.hx(), &v) && !in_row_space(code.hz(), code.rank_hz(), &v) {
            return Ok(false);
        }
        if annihilates(code.hz(), &v) && !in_row_space(code.hx(), code.rank_hx(), &v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One half of the prepared test: columns of a check matrix, each extended by
/// its pairing with representatives of the opposite logical operators.
#[derive(Debug, Clone)]
struct Side {
    /// Number of leading check bits; bits at or past this index are logical.
    split: usize,
    stride: usize,
    columns: BitMatrix,
}

impl Side {
    /// `checks` is the matrix whose kernel is searched, `other` the one
    /// whose row space counts as harmless.
    fn new(checks: &BitMatrix, other: &BitMatrix) -> Self {
        // ker(other) = rowspace(checks) + span(logicals); keep a complement.
        let mut basis = EchelonBasis::from_rows(checks);
        let kernel = other.kernel_basis();
        let kept: Vec<usize> = (0..kernel.rows())
            .filter(|&r| basis.insert(kernel.row(r)))
            .collect();
        let logicals = kernel.select_rows(&kept);
        let columns = checks.vstack(&logicals).expect("same width").transpose();
        Self {
            split: checks.rows(),
            stride: columns.stride(),
            columns,
        }
    }

    /// False iff some dependency among the erased columns carries a nonzero
    /// logical part.
    fn correctable(&self, support: &[usize], scratch: &mut Scratch) -> bool {
        scratch.prepare(self.split, self.stride);
        let Scratch {
            slots,
            occupied,
            vector,
        } = scratch;
        for &q in support {
            vector.copy_from_slice(self.columns.row(q));
            let mut from = 0;
            while let Some(bit) = next_one(vector, from) {
                if bit >= self.split {
                    return false;
                }
                let slot = &mut slots[bit * self.stride..(bit + 1) * self.stride];
                if occupied[bit] {
                    xor_into(vector, slot);
                    from = bit + 1;
                } else {
                    slot.copy_from_slice(vector);
                    occupied[bit] = true;
                    break;
                }
            }
        }
        true
    }
}

/// Reusable buffers for [`CorrectabilityChecker::is_correctable`].
#[derive(Debug, Default, Clone)]
pub struct Scratch {
    slots: Vec<u64>,
    occupied: Vec<bool>,
    vector: Vec<u64>,
}

impl Scratch {
    fn prepare(&mut self, split: usize, stride: usize) {
        self.slots.resize(split * stride, 0);
        self.occupied.clear();
        self.occupied.resize(split, false);
        self.vector.resize(stride, 0);
    }
}

/// Correctability test prepared once per code.
///
/// Each erased column of `hx` (extended by its overlap with every
/// representative of `ker hz / rowspace hx`) is inserted into an echelon
/// basis. A column whose check part reduces to zero is a kernel vector of
/// `hx` supported on the erasure; it is a logical operator iff its logical
/// part is nonzero. The `hz` side is symmetric.
#[derive(Debug, Clone)]
pub struct CorrectabilityChecker {
    num_qubits: usize,
    x_side: Side,
    z_side: Side,
}

impl CorrectabilityChecker {
    pub fn new(code: &HgpCode) -> Self {
        Self {
            num_qubits: code.num_qubits(),
            x_side: Side::new(code.hx(), code.hz()),
            z_side: Side::new(code.hz(), code.hx()),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Number of logical qubits seen by the checker.
    pub fn num_logical(&self) -> usize {
        self.x_side.columns.cols() - self.x_side.split
    }

    /// `support` must be sorted, duplicate-free and in range.
    pub fn is_correctable(&self, support: &[usize], scratch: &mut Scratch) -> bool {
        debug_assert!(support.iter().all(|&q| q < self.num_qubits));
        if support.is_empty() {
            return true;
        }
        self.x_side.correctable(support, scratch) && self.z_side.correctable(support, scratch)
    }
}

fn validate(p: f64, trials: u64) -> Result<(), ErasureError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ErasureError::InvalidProbability(p));
    }
    if trials == 0 {
        return Err(ErasureError::NoTrials);
    }
    Ok(())
}

/// Counts uncorrectable erasures among `trials` samples.
///
/// Trial `i` draws from ChaCha8 seeded with `master_seed` on stream `i`, so
/// the count does not depend on how rayon schedules the trials.
pub fn estimate_failure_rate(
    code: &HgpCode,
    p: f64,
    trials: u64,
    master_seed: u64,
) -> Result<CostEstimate, ErasureError> {
    validate(p, trials)?;
    let checker = CorrectabilityChecker::new(code);
    Ok(estimate_with_checker(&checker, p, trials, master_seed))
}

pub(crate) fn estimate_with_checker(
    checker: &CorrectabilityChecker,
    p: f64,
    trials: u64,
    master_seed: u64,
) -> CostEstimate {
    let n = checker.num_qubits();
    let failures = (0..trials)
        .into_par_iter()
        .map_init(
            || (Scratch::default(), Vec::with_capacity(n)),
            |(scratch, support), trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
                rng.set_stream(trial);
                fill_erasure(n, p, &mut rng, support);
                u64::from(!checker.is_correctable(support, scratch))
            },
        )
        .sum();
    CostEstimate::new(p, trials, failures, master_seed)
}

/// One estimate per grid point; point `i` uses seed `derive_seed(master_seed, i)`.
pub fn sweep_curve(
    code: &HgpCode,
    p_grid: &[f64],
    trials: u64,
    master_seed: u64,
) -> Result<Vec<CostEstimate>, ErasureError> {
    if p_grid.is_empty() {
        return Err(ErasureError::EmptyGrid);
    }
    for &p in p_grid {
        validate(p, trials)?;
    }
    let checker = CorrectabilityChecker::new(code);
    Ok(p_grid
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            estimate_with_checker(&checker, p, trials, derive_seed(master_seed, i as u64))
        })
        .collect())
}
