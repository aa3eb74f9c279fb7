//! Dense GF(2) matrices and the span/support-reduction routines built on them.

use super::bitset::{word_count, BitSet};
use super::pauli::PauliString;
use crate::error::{Error, Result};

#[inline]
fn bit(words: &[u64], i: usize) -> bool {
    (words[i / 64] >> (i % 64)) & 1 == 1
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Row-major bit matrix. Symplectic rows built by [`BinaryMatrix::from_paulis`] put
/// `x_q` in column `q` and `z_q` in column `n + q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMatrix {
    cols: usize,
    stride: usize,
    rows: usize,
    data: Vec<u64>,
}

impl BinaryMatrix {
    pub fn new(cols: usize) -> Self {
        BinaryMatrix {
            cols,
            stride: word_count(cols),
            rows: 0,
            data: Vec::new(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = word_count(cols);
        BinaryMatrix {
            cols,
            stride,
            rows,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BinaryMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_paulis(paulis: &[PauliString]) -> Result<Self> {
        let n = paulis.first().map_or(0, |p| p.n_qubits());
        let mut m = BinaryMatrix::new(2 * n);
        for p in paulis {
            if p.n_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.n_qubits(),
                });
            }
            m.push_row(&p.symplectic_vector())?;
        }
        Ok(m)
    }

    pub fn row_count(&self) -> usize {
        self.rows
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        bit(self.row(r), c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let row = self.row_mut(r);
        if v {
            row[c / 64] |= 1 << (c % 64);
        } else {
            row[c / 64] &= !(1 << (c % 64));
        }
    }

    pub fn push_row(&mut self, words: &[u64]) -> Result<()> {
        if words.len() != self.stride {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: words.len() * 64,
            });
        }
        if let Some(&last) = words.last() {
            if self.cols % 64 != 0 && last >> (self.cols % 64) != 0 {
                return Err(Error::DimensionMismatch {
                    expected: self.cols,
                    found: 64 * self.stride,
                });
            }
        }
        self.data.extend_from_slice(words);
        self.rows += 1;
        Ok(())
    }

    pub fn push_bits(&mut self, bits: &[bool]) -> Result<()> {
        if bits.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: bits.len(),
            });
        }
        let mut w = vec![0u64; self.stride];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                w[i / 64] |= 1 << (i % 64);
            }
        }
        self.push_row(&w)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for k in 0..self.stride {
                self.data.swap(a * self.stride + k, b * self.stride + k);
            }
        }
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        let s = self.stride;
        let (d, sr) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..dst * s + s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..src * s + s])
        };
        xor_into(d, sr);
    }

    /// In-place reduced row echelon form; returns the rank. Pivot columns are scanned
    /// left to right and the first remaining row with a one becomes the pivot row.
    pub fn echelonize(&mut self) -> usize {
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(rank, p);
            for r in 0..self.rows {
                if r != rank && self.get(r, c) {
                    self.xor_rows(r, rank);
                }
            }
            rank += 1;
        }
        rank
    }
}

/// GF(2) row rank; the input is left untouched.
pub fn rank_gf2(m: &BinaryMatrix) -> usize {
    m.clone().echelonize()
}

/// Finds rows of `basis` whose XOR equals `target`, as a bit mask over row indices.
pub fn solve_in_span(target: &[u64], basis: &BinaryMatrix) -> Result<Option<BitSet>> {
    if target.len() != basis.stride {
        return Err(Error::DimensionMismatch {
            expected: basis.cols,
            found: 64 * target.len(),
        });
    }
    let rows = basis.rows;
    let mut work = basis.clone();
    let mut combos: Vec<BitSet> = (0..rows).map(|i| BitSet::from_indices(rows, [i])).collect();
    let mut used = vec![false; rows];
    let mut pivots = Vec::new();
    for c in 0..basis.cols {
        let Some(p) = (0..rows).find(|&r| !used[r] && work.get(r, c)) else {
            continue;
        };
        used[p] = true;
        pivots.push((c, p));
        for r in 0..rows {
            if r != p && !used[r] && work.get(r, c) {
                work.xor_rows(r, p);
                let src = combos[p].clone();
                combos[r] = sym_diff(&combos[r], &src);
            }
        }
    }
    let mut t = target.to_vec();
    let mut mask = BitSet::empty(rows);
    for &(c, p) in &pivots {
        if bit(&t, c) {
            xor_into(&mut t, work.row(p));
            mask = sym_diff(&mask, &combos[p]);
        }
    }
    Ok(t.iter().all(|&w| w == 0).then_some(mask))
}

fn sym_diff(a: &BitSet, b: &BitSet) -> BitSet {
    let words = a.words().iter().zip(b.words()).map(|(x, y)| x ^ y).collect();
    BitSet::from_words(a.universe(), words)
}

/// Multiplies `p` on the right by an element of the group generated by `gens` so that
/// the result is supported in `region`, tracking phases exactly. Returns `None` when no
/// such element exists.
///
/// Elimination scans the columns outside `region` in the order `x_0..x_{n-1}` then
/// `z_0..z_{n-1}`, taking the lowest-index unused generator as pivot.
pub fn reduce_support(
    p: &PauliString,
    gens: &[PauliString],
    region: &BitSet,
) -> Result<Option<PauliString>> {
    let n = p.n_qubits();
    for g in gens {
        if g.n_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.n_qubits(),
            });
        }
    }
    if region.universe() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: region.universe(),
        });
    }
    let outside: Vec<usize> = region.complement().iter().collect();
    let mut rows: Vec<PauliString> = gens.to_vec();
    let mut used = vec![false; rows.len()];
    let mut pivots: Vec<(usize, bool, usize)> = Vec::new();
    for is_z in [false, true] {
        for &q in &outside {
            let has = |r: &PauliString| if is_z { r.z_bit(q) } else { r.x_bit(q) };
            let Some(piv) = (0..rows.len()).find(|&r| !used[r] && has(&rows[r])) else {
                continue;
            };
            used[piv] = true;
            pivots.push((q, is_z, piv));
            let pivot_row = rows[piv].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if !used[r] && has(row) {
                    row.mul_assign_right(&pivot_row);
                }
            }
        }
    }
    let mut out = p.clone();
    for &(q, is_z, piv) in &pivots {
        let has = if is_z { out.z_bit(q) } else { out.x_bit(q) };
        if has {
            out.mul_assign_right(&rows[piv]);
        }
    }
    Ok(out.supported_in(region).then_some(out))
}

/// Echelon basis of Pauli strings projected onto a fixed set of qubits, ignoring phases.
///
/// This is the bit-only workhorse behind reducibility checks: `p` can be reduced into a
/// region `A` iff its projection onto the complement of `A` lies in the span of the
/// projected generators.
#[derive(Clone, Debug)]
pub struct ProjectedSpan {
    mask: Vec<u64>,
    half: usize,
    basis: Vec<u64>,
    pivots: Vec<usize>,
}

impl ProjectedSpan {
    /// `keep` selects the qubits whose columns are retained.
    pub fn new<'a, I>(gens: I, keep: &BitSet) -> Self
    where
        I: IntoIterator<Item = &'a PauliString>,
    {
        let half = keep.words().len();
        let mut span = ProjectedSpan {
            mask: keep.words().to_vec(),
            half,
            basis: Vec::new(),
            pivots: Vec::new(),
        };
        for g in gens {
            span.insert(g);
        }
        span
    }

    fn project(&self, p: &PauliString) -> Vec<u64> {
        let mut v = Vec::with_capacity(2 * self.half);
        v.extend(p.x_words().iter().zip(&self.mask).map(|(a, m)| a & m));
        v.extend(p.z_words().iter().zip(&self.mask).map(|(a, m)| a & m));
        v
    }

    fn reduce(&self, v: &mut [u64]) {
        let stride = 2 * self.half;
        for (k, &piv) in self.pivots.iter().enumerate() {
            if bit(v, piv) {
                xor_into(v, &self.basis[k * stride..(k + 1) * stride]);
            }
        }
    }

    /// Adds a generator; returns whether the rank grew.
    pub fn insert(&mut self, p: &PauliString) -> bool {
        let mut v = self.project(p);
        self.reduce(&mut v);
        match v.iter().position(|&w| w != 0) {
            Some(w) => {
                let piv = w * 64 + v[w].trailing_zeros() as usize;
                self.basis.extend_from_slice(&v);
                self.pivots.push(piv);
                true
            }
            None => false,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Whether the projection of `p` lies in the span.
    pub fn contains(&self, p: &PauliString) -> bool {
        let mut v = self.project(p);
        self.reduce(&mut v);
        v.iter().all(|&w| w == 0)
    }
}
