//! Hypergraph product of a classical parity-check matrix with itself.
//!
//! For an `m x n` matrix `H` the two CSS check matrices are
//!
//! ```text
//! hx = [ H ⊗ I_n | I_m ⊗ Hᵀ ]      (m·n rows)
//! hz = [ I_n ⊗ H | Hᵀ ⊗ I_m ]      (n·m rows)
//! ```
//!
//! on `n² + m²` qubits. The first `n²` qubits form the "bit x bit" block, the
//! remaining `m²` the "check x check" block.

use thiserror::Error;

use crate::gf2::{BitMatrix, Gf2Error};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HgpError {
    #[error("parity-check matrix must have at least one row and one column")]
    Empty,
    #[error("constructed check matrices are not orthogonal (hx * hz^T != 0)")]
    NotOrthogonal,
    #[error(transparent)]
    Shape(#[from] Gf2Error),
}

#[derive(Debug, Clone)]
pub struct HgpCode {
    n: usize,
    m: usize,
    classical_rank: usize,
    hx: BitMatrix,
    hz: BitMatrix,
    rank_hx: usize,
    rank_hz: usize,
}

impl HgpCode {
    /// Assembles `hx`, `hz` from `h` and checks the CSS condition.
    pub fn build(h: &BitMatrix) -> Result<Self, HgpError> {
        let (m, n) = (h.rows(), h.cols());
        if m == 0 || n == 0 {
            return Err(HgpError::Empty);
        }
        let ht = h.transpose();
        let hx = h
            .kron(&BitMatrix::identity(n))
            .hstack(&BitMatrix::identity(m).kron(&ht))?;
        let hz = BitMatrix::identity(n)
            .kron(h)
            .hstack(&ht.kron(&BitMatrix::identity(m)))?;
        if !hx.mul(&hz.transpose())?.is_zero() {
            return Err(HgpError::NotOrthogonal);
        }
        Ok(Self {
            n,
            m,
            classical_rank: h.rank(),
            rank_hx: hx.rank(),
            rank_hz: hz.rank(),
            hx,
            hz,
        })
    }

    /// Classical length `n`.
    pub fn classical_len(&self) -> usize {
        self.n
    }

    /// Classical check count `m`.
    pub fn classical_checks(&self) -> usize {
        self.m
    }

    pub fn classical_rank(&self) -> usize {
        self.classical_rank
    }

    pub fn hx(&self) -> &BitMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &BitMatrix {
        &self.hz
    }

    pub fn rank_hx(&self) -> usize {
        self.rank_hx
    }

    pub fn rank_hz(&self) -> usize {
        self.rank_hz
    }

    /// `N = n² + m²`.
    pub fn num_qubits(&self) -> usize {
        self.n * self.n + self.m * self.m
    }

    /// `K = N - rank(hx) - rank(hz)`.
    pub fn num_logical(&self) -> usize {
        self.num_qubits() - self.rank_hx - self.rank_hz
    }

    /// `(N, K)`.
    pub fn parameters(&self) -> (usize, usize) {
        (self.num_qubits(), self.num_logical())
    }
}

/// Shorthand for [`HgpCode::build`].
pub fn build_hgp(h: &BitMatrix) -> Result<HgpCode, HgpError> {
    HgpCode::build(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tanner::{SwapAction, TannerState};

    #[test]
    fn repetition_pair() {
        let code = build_hgp(&BitMatrix::from_rows(&[[1, 1]]).unwrap()).unwrap();
        assert_eq!(code.parameters(), (5, 1));
        assert_eq!((code.hx().rows(), code.hx().cols()), (2, 5));
        assert_eq!((code.hz().rows(), code.hz().cols()), (2, 5));
    }

    #[test]
    fn distance_three_code() {
        let code = build_hgp(&BitMatrix::from_rows(&[[1, 1, 0], [0, 1, 1]]).unwrap()).unwrap();
        assert_eq!(code.parameters(), (13, 1));
        assert_eq!(code.classical_rank(), 2);
    }

    #[test]
    fn block_layout() {
        let h = BitMatrix::from_rows(&[[1, 1, 0], [0, 1, 1]]).unwrap();
        let code = build_hgp(&h).unwrap();
        let (m, n) = (2, 3);
        // hx row (c, b) has H[c][j] at qubit j*n + b and H[k][b] at n² + c*m + k
        for c in 0..m {
            for b in 0..n {
                let row = c * n + b;
                for j in 0..n {
                    assert_eq!(code.hx().get(row, j * n + b), h.get(c, j));
                }
                for k in 0..m {
                    assert_eq!(code.hx().get(row, n * n + c * m + k), h.get(k, b));
                }
            }
        }
    }

    #[test]
    fn full_rank_regular_gives_k_squared() {
        let s = TannerState::random_regular_full_rank(15, 20, 3, 4, 11, 1000).unwrap();
        let code = build_hgp(&s.binary_matrix()).unwrap();
        assert_eq!(code.parameters(), (625, 25));
        assert!((code.num_logical() as f64 / code.num_qubits() as f64 - 0.04).abs() < 1e-15);
        // LDPC: each row of hx/hz has weight at most row_weight + col_weight
        for r in 0..code.hx().rows() {
            assert!(code.hx().row_weight(r) <= 7);
            assert!(code.hz().row_weight(r) <= 7);
        }
    }

    #[test]
    fn rank_deficient_input_still_counts_k() {
        let mut s = TannerState::random_regular(6, 8, 3, 4, 5).unwrap();
        let mut seed = 1u64;
        for _ in 0..40 {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            let a = (seed >> 33) as usize % s.num_slots();
            let b = (seed >> 13) as usize % s.num_slots();
            if a != b {
                s.swap_in_place(SwapAction::new(a, b).unwrap()).unwrap();
            }
            let h = s.binary_matrix();
            let code = build_hgp(&h).unwrap();
            let (nq, k) = code.parameters();
            assert_eq!(k, nq - code.hx().rank() - code.hz().rank());
            let r = h.rank();
            // K = (n - r)^2 + (m - r)^2 in general
            assert_eq!(k, (8 - r) * (8 - r) + (6 - r) * (6 - r));
        }
    }

    #[test]
    fn empty_matrix_is_rejected() {
        assert_eq!(
            build_hgp(&BitMatrix::zeros(0, 3)).unwrap_err(),
            HgpError::Empty
        );
    }
}
