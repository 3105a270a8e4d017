//! Tanner multigraphs with a fixed set of edge slots, and the degree-preserving
//! edge swap that moves between them.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::alist::{self, AlistError};
use crate::gf2::BitMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TannerError {
    #[error("slot {index} out of range (state has {slots} slots)")]
    InvalidSlot { index: usize, slots: usize },
    #[error("a swap needs two distinct slots (got {0} twice)")]
    SameSlot(usize),
    #[error("edge ({check}, {bit}) out of range for a {num_checks}x{num_bits} graph")]
    EdgeOutOfRange {
        check: usize,
        bit: usize,
        num_checks: usize,
        num_bits: usize,
    },
    #[error(
        "infeasible degrees: {num_bits} bits of weight {col_weight} give {} stubs, \
         {num_checks} checks of weight {row_weight} give {}",
        num_bits * col_weight,
        num_checks * row_weight
    )]
    InfeasibleDegrees {
        num_checks: usize,
        num_bits: usize,
        col_weight: usize,
        row_weight: usize,
    },
    #[error("no simple full-rank graph found after {0} attempts")]
    GenerationFailed(usize),
    #[error(transparent)]
    Alist(#[from] AlistError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub check: u32,
    pub bit: u32,
}

impl Edge {
    pub fn new(check: usize, bit: usize) -> Self {
        Self {
            check: check as u32,
            bit: bit as u32,
        }
    }
}

/// Two distinct edge slots, stored with `first < second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SwapAction {
    first: usize,
    second: usize,
}

impl SwapAction {
    /// Orders the pair; fails if both slots are the same.
    pub fn new(a: usize, b: usize) -> Result<Self, TannerError> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Self {
                first: a,
                second: b,
            }),
            std::cmp::Ordering::Greater => Ok(Self {
                first: b,
                second: a,
            }),
            std::cmp::Ordering::Equal => Err(TannerError::SameSlot(a)),
        }
    }

    pub fn first(&self) -> usize {
        self.first
    }

    pub fn second(&self) -> usize {
        self.second
    }

    /// Position of this action in the lexicographic order of
    /// [`TannerState::enumerate_actions`].
    pub fn index(&self, slots: usize) -> usize {
        // pairs (i, j) with i < first come first: sum_{i<first} (slots - 1 - i)
        let before = self.first * (2 * slots - self.first - 1) / 2;
        before + (self.second - self.first - 1)
    }

    /// Inverse of [`SwapAction::index`].
    pub fn from_index(index: usize, slots: usize) -> Self {
        debug_assert!(index < action_count(slots));
        let mut first = 0;
        let mut rest = index;
        loop {
            let row = slots - 1 - first;
            if rest < row {
                return Self {
                    first,
                    second: first + 1 + rest,
                };
            }
            rest -= row;
            first += 1;
        }
    }
}

/// Number of unordered slot pairs.
pub fn action_count(slots: usize) -> usize {
    slots * slots.saturating_sub(1) / 2
}

/// Slot-order independent identity of a state: the sorted edge multiset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateKey {
    num_checks: u32,
    num_bits: u32,
    edges: Vec<Edge>,
}

impl StateKey {
    /// Stable 64-bit fingerprint, identical on every platform.
    pub fn digest(&self) -> u64 {
        let mut hasher = Sha256::new();
        hasher.update(self.num_checks.to_le_bytes());
        hasher.update(self.num_bits.to_le_bytes());
        for e in &self.edges {
            hasher.update(e.check.to_le_bytes());
            hasher.update(e.bit.to_le_bytes());
        }
        let out = hasher.finalize();
        u64::from_le_bytes(out[..8].try_into().expect("sha256 output is 32 bytes"))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

/// Bipartite multigraph between `num_checks` checks and `num_bits` bits,
/// held as an ordered list of edge slots. Parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TannerState {
    num_checks: usize,
    num_bits: usize,
    edges: Vec<Edge>,
}

impl TannerState {
    pub fn new(num_checks: usize, num_bits: usize, edges: Vec<Edge>) -> Result<Self, TannerError> {
        if let Some(e) = edges
            .iter()
            .find(|e| e.check as usize >= num_checks || e.bit as usize >= num_bits)
        {
            return Err(TannerError::EdgeOutOfRange {
                check: e.check as usize,
                bit: e.bit as usize,
                num_checks,
                num_bits,
            });
        }
        Ok(Self {
            num_checks,
            num_bits,
            edges,
        })
    }

    /// One slot per nonzero entry, in row-major order.
    pub fn from_matrix(h: &BitMatrix) -> Self {
        let edges = (0..h.rows())
            .flat_map(|r| h.row_ones(r).map(move |c| Edge::new(r, c)))
            .collect();
        Self {
            num_checks: h.rows(),
            num_bits: h.cols(),
            edges,
        }
    }

    pub fn from_alist(text: &str) -> Result<Self, TannerError> {
        Ok(Self::from_matrix(&alist::parse_matrix(text)?))
    }

    /// Alist text of the collapsed binary matrix.
    pub fn to_alist(&self) -> String {
        alist::write_matrix(&self.binary_matrix())
    }

    /// Configuration-model sample: bit stubs are shuffled and paired with
    /// check stubs in order.
    pub fn random_regular(
        num_checks: usize,
        num_bits: usize,
        col_weight: usize,
        row_weight: usize,
        seed: u64,
    ) -> Result<Self, TannerError> {
        if num_bits * col_weight != num_checks * row_weight {
            return Err(TannerError::InfeasibleDegrees {
                num_checks,
                num_bits,
                col_weight,
                row_weight,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bit_stubs: Vec<usize> = (0..num_bits)
            .flat_map(|b| std::iter::repeat_n(b, col_weight))
            .collect();
        bit_stubs.shuffle(&mut rng);
        let edges = (0..num_checks)
            .flat_map(|c| std::iter::repeat_n(c, row_weight))
            .zip(bit_stubs)
            .map(|(c, b)| Edge::new(c, b))
            .collect();
        Ok(Self {
            num_checks,
            num_bits,
            edges,
        })
    }

    /// Draws configuration-model graphs from seeds derived from `seed` until
    /// one has no parallel edges and a full-rank parity-check matrix.
    pub fn random_regular_full_rank(
        num_checks: usize,
        num_bits: usize,
        col_weight: usize,
        row_weight: usize,
        seed: u64,
        max_attempts: usize,
    ) -> Result<Self, TannerError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..max_attempts {
            let s =
                Self::random_regular(num_checks, num_bits, col_weight, row_weight, rng.random())?;
            if !s.has_parallel_edges() && s.binary_matrix().rank() == num_checks.min(num_bits) {
                return Ok(s);
            }
        }
        Err(TannerError::GenerationFailed(max_attempts))
    }

    pub fn num_checks(&self) -> usize {
        self.num_checks
    }

    pub fn num_bits(&self) -> usize {
        self.num_bits
    }

    pub fn num_slots(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Degree of every check, counting parallel edges.
    pub fn check_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.num_checks];
        for e in &self.edges {
            d[e.check as usize] += 1;
        }
        d
    }

    /// Degree of every bit, counting parallel edges.
    pub fn bit_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.num_bits];
        for e in &self.edges {
            d[e.bit as usize] += 1;
        }
        d
    }

    pub fn has_parallel_edges(&self) -> bool {
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        sorted.windows(2).any(|w| w[0] == w[1])
    }

    fn check_slot(&self, index: usize) -> Result<(), TannerError> {
        if index >= self.edges.len() {
            return Err(TannerError::InvalidSlot {
                index,
                slots: self.edges.len(),
            });
        }
        Ok(())
    }

    /// Crosses the two edges in place: `(u1, v1), (u2, v2)` become
    /// `(u1, v2), (u2, v1)`.
    pub fn swap_in_place(&mut self, action: SwapAction) -> Result<(), TannerError> {
        self.check_slot(action.second)?;
        let (a, b) = (action.first, action.second);
        let (bit_a, bit_b) = (self.edges[a].bit, self.edges[b].bit);
        self.edges[a].bit = bit_b;
        self.edges[b].bit = bit_a;
        Ok(())
    }

    pub fn apply_swap(&self, action: SwapAction) -> Result<Self, TannerError> {
        let mut next = self.clone();
        next.swap_in_place(action)?;
        Ok(next)
    }

    /// Parity-check matrix with parallel edges collapsed to a single one.
    pub fn binary_matrix(&self) -> BitMatrix {
        let mut h = BitMatrix::zeros(self.num_checks, self.num_bits);
        for e in &self.edges {
            h.set(e.check as usize, e.bit as usize, true);
        }
        h
    }

    pub fn canonical_key(&self) -> StateKey {
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        StateKey {
            num_checks: self.num_checks as u32,
            num_bits: self.num_bits as u32,
            edges,
        }
    }

    pub fn action_count(&self) -> usize {
        action_count(self.edges.len())
    }

    /// Every unordered slot pair, lexicographically.
    pub fn enumerate_actions(&self) -> Vec<SwapAction> {
        let n = self.edges.len();
        (0..n)
            .flat_map(|a| {
                (a + 1..n).map(move |b| SwapAction {
                    first: a,
                    second: b,
                })
            })
            .collect()
    }

    /// Uniformly random slot pair. Panics with fewer than two slots.
    pub fn random_action<R: Rng + ?Sized>(&self, rng: &mut R) -> SwapAction {
        let count = self.action_count();
        assert!(count > 0, "state has fewer than two edge slots");
        SwapAction::from_index(rng.random_range(0..count), self.edges.len())
    }

    /// Length of the shortest cycle of the collapsed simple graph, or `None`
    /// when it is a forest.
    pub fn girth(&self) -> Option<usize> {
        let h = self.binary_matrix();
        // vertices: checks 0..m, bits m..m+n
        let m = self.num_checks;
        let total = m + self.num_bits;
        let mut adj = vec![Vec::new(); total];
        for r in 0..m {
            for c in h.row_ones(r) {
                adj[r].push(m + c);
                adj[m + c].push(r);
            }
        }
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; total];
        let mut parent = vec![usize::MAX; total];
        let mut queue = VecDeque::new();
        for root in 0..total {
            dist.fill(usize::MAX);
            parent.fill(usize::MAX);
            dist[root] = 0;
            queue.clear();
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                if best.is_some_and(|g| 2 * dist[u] + 1 >= g) {
                    break;
                }
                for &w in &adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let cycle = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(cycle, |g| g.min(cycle)));
                    }
                }
            }
        }
        best
    }
}
