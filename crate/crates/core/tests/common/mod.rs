//! Reference implementation for codes on at most 20 qubits, using plain
//! bitmasks and exhaustive enumeration. Shares no code with the library.

#![allow(dead_code)]

pub struct MaskCode {
    pub num_qubits: usize,
    pub hx: Vec<u64>,
    pub hz: Vec<u64>,
}

impl MaskCode {
    /// Hypergraph product of `h` (m rows, n columns), with qubits ordered as
    /// the n*n "bit x bit" block followed by the m*m "check x check" block.
    #[allow(clippy::needless_range_loop)]
    pub fn hypergraph_product(h: &[Vec<u8>]) -> Self {
        let m = h.len();
        let n = h[0].len();
        let num_qubits = n * n + m * m;
        assert!(num_qubits <= 20);
        let left = |b: usize, j: usize| b * n + j;
        let right = |c: usize, k: usize| n * n + c * m + k;

        // hx = [H (x) I_n | I_m (x) H^T], rows indexed by (i, a)
        let mut hx = Vec::new();
        for i in 0..m {
            for a in 0..n {
                let mut row = 0u64;
                for j in 0..n {
                    if h[i][j] == 1 {
                        row |= 1 << left(j, a);
                    }
                }
                for c in 0..m {
                    if h[c][a] == 1 {
                        row |= 1 << right(i, c);
                    }
                }
                hx.push(row);
            }
        }
        // hz = [I_n (x) H | H^T (x) I_m], rows indexed by (a, i)
        let mut hz = Vec::new();
        for a in 0..n {
            for i in 0..m {
                let mut row = 0u64;
                for j in 0..n {
                    if h[i][j] == 1 {
                        row |= 1 << left(a, j);
                    }
                }
                for c in 0..m {
                    if h[c][a] == 1 {
                        row |= 1 << right(c, i);
                    }
                }
                hz.push(row);
            }
        }
        Self { num_qubits, hx, hz }
    }

    /// `fails[mask]` says whether the erasure `mask` contains a nontrivial
    /// logical operator.
    pub fn failure_table(&self) -> Vec<bool> {
        let size = 1usize << self.num_qubits;
        let span_x = span(&self.hx, size);
        let span_z = span(&self.hz, size);
        let mut fails = vec![false; size];
        for v in 0..size as u64 {
            let in_ker_x = self.hx.iter().all(|r| (r & v).count_ones() % 2 == 0);
            let in_ker_z = self.hz.iter().all(|r| (r & v).count_ones() % 2 == 0);
            if (in_ker_x && !span_z[v as usize]) || (in_ker_z && !span_x[v as usize]) {
                fails[v as usize] = true;
            }
        }
        // an erasure fails iff one of its subsets is a logical operator
        for bit in 0..self.num_qubits {
            for mask in 0..size {
                if mask >> bit & 1 == 1 && fails[mask ^ (1 << bit)] {
                    fails[mask] = true;
                }
            }
        }
        fails
    }

    /// Exact failure probability under independent erasures with rate `p`.
    pub fn failure_probability(&self, p: f64) -> f64 {
        let n = self.num_qubits as i32;
        self.failure_table()
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(mask, _)| {
                let w = (mask as u64).count_ones() as i32;
                p.powi(w) * (1.0 - p).powi(n - w)
            })
            .sum()
    }
}

fn span(rows: &[u64], size: usize) -> Vec<bool> {
    let mut members = vec![0u64];
    for &r in rows {
        let extra: Vec<u64> = members.iter().map(|m| m ^ r).collect();
        members.extend(extra);
        members.sort_unstable();
        members.dedup();
    }
    let mut table = vec![false; size];
    for m in members {
        table[m as usize] = true;
    }
    table
}

/// `h = [[1,1]]`, the repetition code on two bits.
pub fn rep2() -> Vec<Vec<u8>> {
    vec![vec![1, 1]]
}

/// `h = [[1,1,0],[0,1,1]]`, the repetition code on three bits.
pub fn rep3() -> Vec<Vec<u8>> {
    vec![vec![1, 1, 0], vec![0, 1, 1]]
}

pub fn mask_to_support(mask: u64, num_qubits: usize) -> Vec<usize> {
    (0..num_qubits).filter(|&i| mask >> i & 1 == 1).collect()
}
