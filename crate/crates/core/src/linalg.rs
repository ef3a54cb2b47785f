//! Dense exact linear algebra over Z/l^r.
//!
//! Two workhorses: rank over the residue field F_l (enough for freeness and
//! surjectivity checks, by Nakayama), and a Smith-style diagonalization with
//! valuation pivoting that solves `A x = b` over Z/l^r whenever a solution
//! exists. Over a chain ring the global-minimum-valuation pivot always
//! divides the remaining entries, so the diagonalization never gets stuck.

use crate::coeff::CoeffRing;

/// Row-major dense matrix with entries reduced modulo `ring.modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub ring: CoeffRing,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl Mat {
    pub fn zeros(ring: CoeffRing, rows: usize, cols: usize) -> Self {
        Mat {
            ring,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(ring: CoeffRing, n: usize) -> Self {
        let mut m = Mat::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(ring: CoeffRing, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            for &x in row {
                data.push(ring.reduce_u64(x));
            }
        }
        Mat {
            ring,
            rows: r,
            cols: c,
            data,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = self.ring.reduce_u64(v);
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let ring = self.ring;
        let mut out = Mat::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, ring.add(cur, ring.mul(a, other.get(k, j))));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = self.ring.add(*a, b);
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = self.ring.sub(*a, b);
        }
        out
    }

    pub fn scale(&self, c: u64) -> Mat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = self.ring.mul(*a, c);
        }
        out
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for j in 0..self.cols {
                    acc = self.ring.add(acc, self.ring.mul(self.get(i, j), v[j]));
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Rank of the reduction modulo l, by Gaussian elimination over F_l.
    pub fn rank_mod_ell(&self) -> usize {
        let ell = self.ring.ell;
        let mut m: Vec<u64> = self.data.iter().map(|&x| x % ell).collect();
        let (rows, cols) = (self.rows, self.cols);
        let fl = CoeffRing::new(ell, 1).expect("prime base");
        let mut rank = 0usize;
        for col in 0..cols {
            let pivot = (rank..rows).find(|&i| m[i * cols + col] != 0);
            let Some(p) = pivot else { continue };
            m.swap_chunks(p, rank, cols);
            let inv = fl.inv(m[rank * cols + col]).expect("nonzero mod l");
            for j in 0..cols {
                m[rank * cols + j] = fl.mul(m[rank * cols + j], inv);
            }
            for i in 0..rows {
                if i != rank && m[i * cols + col] != 0 {
                    let f = m[i * cols + col];
                    for j in 0..cols {
                        let s = fl.mul(f, m[rank * cols + j]);
                        m[i * cols + j] = fl.sub(m[i * cols + j], s);
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// Exact matrix power (square matrices).
    pub fn pow(&self, mut e: u64) -> Mat {
        assert_eq!(self.rows, self.cols);
        let mut acc = Mat::identity(self.ring, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

trait SwapChunks {
    fn swap_chunks(&mut self, a: usize, b: usize, width: usize);
}

impl SwapChunks for Vec<u64> {
    fn swap_chunks(&mut self, a: usize, b: usize, width: usize) {
        if a == b {
            return;
        }
        for j in 0..width {
            self.swap(a * width + j, b * width + j);
        }
    }
}

/// Precomputed diagonalization U * A * V = D with D diagonal of l-powers.
///
/// `solve` then answers `A x = b` for any number of right-hand sides.
pub struct SnfSolver {
    ring: CoeffRing,
    rows: usize,
    cols: usize,
    /// Diagonal entries as l-valuations; length min(rows, cols), padded with
    /// `r` (meaning the entry is 0).
    diag_vals: Vec<u32>,
    u: Mat,
    v: Mat,
}

impl SnfSolver {
    pub fn new(a: &Mat) -> Self {
        Self::build(a, true)
    }

    /// Skip the column-transform bookkeeping: diagonal valuations and
    /// solvability checks stay available, `solve` does not. Much faster when
    /// the matrix has many more columns than rows.
    pub fn rows_only(a: &Mat) -> Self {
        Self::build(a, false)
    }

    fn build(a: &Mat, track_v: bool) -> Self {
        let ring = a.ring;
        let (rows, cols) = (a.rows, a.cols);
        let mut m = a.clone();
        let mut u = Mat::identity(ring, rows);
        let mut v = if track_v {
            Mat::identity(ring, cols)
        } else {
            Mat::zeros(ring, 0, 0)
        };
        let steps = rows.min(cols);
        let mut diag_vals = vec![ring.r; steps];
        for t in 0..steps {
            // Global minimum valuation in the remaining block.
            let mut best: Option<(usize, usize, u32)> = None;
            for i in t..rows {
                for j in t..cols {
                    let val = ring.val(m.get(i, j));
                    if val < ring.r && best.map_or(true, |(_, _, bv)| val < bv) {
                        best = Some((i, j, val));
                        if val == 0 {
                            break;
                        }
                    }
                }
                if matches!(best, Some((_, _, 0))) {
                    break;
                }
            }
            let Some((pi, pj, pv)) = best else { break };
            m.data.swap_chunks(pi, t, cols);
            u.data.swap_chunks(pi, t, rows.max(1));
            for i in 0..rows {
                let x = m.get(i, t);
                let y = m.get(i, pj);
                m.set(i, pj, x);
                m.set(i, t, y);
            }
            if track_v {
                for i in 0..cols {
                    let x = v.get(i, t);
                    let y = v.get(i, pj);
                    v.set(i, pj, x);
                    v.set(i, t, y);
                }
            }
            // Normalize the pivot to exactly l^pv.
            let pivot = m.get(t, t);
            let unit = pivot / ring.ell.pow(pv);
            let unit_inv = ring.inv(unit).expect("unit part is a unit");
            for j in 0..cols {
                m.set(t, j, ring.mul(m.get(t, j), unit_inv));
            }
            for j in 0..rows {
                u.set(t, j, ring.mul(u.get(t, j), unit_inv));
            }
            let lead = ring.ell.pow(pv);
            // Clear the pivot column (valuations are >= pv by minimality).
            for i in 0..rows {
                if i == t {
                    continue;
                }
                let entry = m.get(i, t);
                if entry == 0 {
                    continue;
                }
                let c = entry / lead;
                for j in 0..cols {
                    let s = ring.mul(c, m.get(t, j));
                    m.set(i, j, ring.sub(m.get(i, j), s));
                }
                for j in 0..rows {
                    let s = ring.mul(c, u.get(t, j));
                    u.set(i, j, ring.sub(u.get(i, j), s));
                }
            }
            // Clear the pivot row via column operations.
            for j in 0..cols {
                if j == t {
                    continue;
                }
                let entry = m.get(t, j);
                if entry == 0 {
                    continue;
                }
                let c = entry / lead;
                for i in 0..rows {
                    let s = ring.mul(c, m.get(i, t));
                    m.set(i, j, ring.sub(m.get(i, j), s));
                }
                if track_v {
                    for i in 0..cols {
                        let s = ring.mul(c, v.get(i, t));
                        v.set(i, j, ring.sub(v.get(i, j), s));
                    }
                }
            }
            diag_vals[t] = pv;
        }
        SnfSolver {
            ring,
            rows,
            cols,
            diag_vals,
            u,
            v,
        }
    }

    /// l-valuations of the diagonal entries (length min(rows, cols); `r`
    /// stands for a zero entry).
    pub fn diag_valuations(&self) -> &[u32] {
        &self.diag_vals
    }

    /// log_l of the cardinality of the image of A acting on (Z/l^r)^cols.
    pub fn image_size_log(&self) -> u64 {
        self.diag_vals
            .iter()
            .map(|&v| (self.ring.r - v.min(self.ring.r)) as u64)
            .sum()
    }

    /// Whether `A x = b` has a solution, without constructing one. Works in
    /// both construction modes.
    pub fn solvable(&self, b: &[u64]) -> bool {
        assert_eq!(b.len(), self.rows);
        let c = self.u.apply(b);
        for t in 0..self.rows {
            let val = if t < self.diag_vals.len() {
                self.diag_vals[t]
            } else {
                self.ring.r
            };
            if self.ring.val(c[t]) < val {
                return false;
            }
        }
        true
    }

    /// One solution of `A x = b`, or None when the system is inconsistent.
    /// Requires full construction via `new`.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        assert!(
            self.v.rows == self.cols,
            "solve needs the column transform; construct with SnfSolver::new"
        );
        let c = self.u.apply(b);
        let mut z = vec![0u64; self.cols];
        for t in 0..self.rows {
            let val = if t < self.diag_vals.len() {
                self.diag_vals[t]
            } else {
                self.ring.r
            };
            if val >= self.ring.r {
                if c[t] != 0 {
                    return None;
                }
                continue;
            }
            let lead = self.ring.ell.pow(val);
            if c[t] % lead != 0 {
                return None;
            }
            z[t] = c[t] / lead;
        }
        Some(self.v.apply(&z))
    }
}
