//! Interval-level magic structure: minimal linear magic intervals (MLMIs), the centered
//! linear magic length, the full linear extent of magic and the typical MLMI width.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::codestate::CodeState;
use crate::error::{Error, Result};
use crate::magic_gauge::is_full;
use crate::pauli_gf2::BitSet;

/// Which intervals count as contiguous. `Line` takes intervals of the index line
/// `0..L` under either boundary condition; `Ring` adds intervals wrapping from `L − 1`
/// to `0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    #[default]
    Line,
    Ring,
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Geometry::Line => "line",
            Geometry::Ring => "ring",
        })
    }
}

impl std::str::FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "line" => Ok(Geometry::Line),
            "ring" => Ok(Geometry::Ring),
            other => Err(Error::Parse(format!("unknown interval geometry `{other}`"))),
        }
    }
}

/// Contiguous block of qubits `start..=end`, 0-based. A wrapping interval runs from
/// `start` to `L − 1` and continues from `0` to `end`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
    pub wraps: bool,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Self {
        Interval {
            start,
            end,
            wraps: end < start,
        }
    }

    /// Interval of `width` qubits starting at `start` on a ring of `n`.
    pub fn arc(n: usize, start: usize, width: usize) -> Self {
        assert!(width >= 1 && width <= n && start < n);
        if width == n {
            return Interval::new(0, n - 1);
        }
        Interval::new(start, (start + width - 1) % n)
    }

    pub fn width(&self, n: usize) -> usize {
        if self.wraps {
            n - self.start + self.end + 1
        } else {
            self.end - self.start + 1
        }
    }

    pub fn region(&self, n: usize) -> BitSet {
        BitSet::arc(n, self.start, self.width(n))
    }

    pub fn contains(&self, other: &Interval, n: usize) -> bool {
        other.region(n).is_subset(&self.region(n))
    }

    pub fn intersects(&self, other: &Interval, n: usize) -> bool {
        self.region(n).intersects(&other.region(n))
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.start >= n || self.end >= n {
            return Err(Error::BadSites {
                sites: vec![self.start, self.end],
                n_qubits: n,
                reason: "interval endpoint out of range",
            });
        }
        Ok(())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.start, self.end)
    }
}

/// Whether the interval holds a full unit of extractable magic.
pub fn extractable(cs: &CodeState, iv: &Interval) -> Result<bool> {
    iv.check(cs.n_qubits())?;
    Ok(is_full(cs, &iv.region(cs.n_qubits())))
}

/// Incremental echelon basis over column vectors of the generator matrix.
#[derive(Clone)]
struct ColumnBasis {
    words: usize,
    vecs: Vec<u64>,
    pivots: Vec<usize>,
}

impl ColumnBasis {
    fn new(words: usize) -> Self {
        ColumnBasis {
            words,
            vecs: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn insert(&mut self, col: &[u64], scratch: &mut Vec<u64>) {
        scratch.clear();
        scratch.extend_from_slice(col);
        for (k, &p) in self.pivots.iter().enumerate() {
            if (scratch[p / 64] >> (p % 64)) & 1 == 1 {
                let b = &self.vecs[k * self.words..(k + 1) * self.words];
                for (s, v) in scratch.iter_mut().zip(b) {
                    *s ^= v;
                }
            }
        }
        if let Some(w) = scratch.iter().position(|&x| x != 0) {
            self.pivots.push(w * 64 + scratch[w].trailing_zeros() as usize);
            self.vecs.extend_from_slice(scratch);
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Column data for the test "all logicals reducible to A": with `B` the complement,
/// `rank((G ∪ {X̄, Z̄})|_B) == rank(G|_B)`.
struct FullnessScanner {
    n: usize,
    words: usize,
    /// Per qubit: x-column then z-column over all `L + 1` rows.
    all: Vec<u64>,
    /// The same columns with the logical rows cleared.
    stab: Vec<u64>,
}

#[derive(Clone)]
struct Complement {
    all: ColumnBasis,
    stab: ColumnBasis,
}

impl Complement {
    fn is_full(&self) -> bool {
        self.all.rank() == self.stab.rank()
    }
}

impl FullnessScanner {
    fn new(cs: &CodeState) -> Self {
        let n = cs.n_qubits();
        let rows = n + 1;
        let words = rows.div_ceil(64);
        let mut all = vec![0u64; 2 * n * words];
        let mut gens: Vec<&crate::pauli_gf2::PauliString> = cs.stabilizers().iter().collect();
        gens.push(cs.logical_x());
        gens.push(cs.logical_z());
        for (r, g) in gens.iter().enumerate() {
            for q in g.support().iter() {
                let (xb, zb) = (g.x_bit(q), g.z_bit(q));
                if xb {
                    all[(2 * q) * words + r / 64] |= 1 << (r % 64);
                }
                if zb {
                    all[(2 * q + 1) * words + r / 64] |= 1 << (r % 64);
                }
            }
        }
        let mut stab = all.clone();
        for c in 0..2 * n {
            for r in [n - 1, n] {
                stab[c * words + r / 64] &= !(1 << (r % 64));
            }
        }
        FullnessScanner { n, words, all, stab }
    }

    fn empty(&self) -> Complement {
        Complement {
            all: ColumnBasis::new(self.words),
            stab: ColumnBasis::new(self.words),
        }
    }

    fn add_qubit(&self, c: &mut Complement, q: usize, scratch: &mut Vec<u64>) {
        for col in [2 * q, 2 * q + 1] {
            let range = col * self.words..(col + 1) * self.words;
            c.all.insert(&self.all[range.clone()], scratch);
            c.stab.insert(&self.stab[range], scratch);
        }
    }

    /// Shortest full interval starting at each qubit, or `None` if there is none.
    fn shortest_from_each_start(&self, geometry: Geometry) -> Vec<Option<usize>> {
        let n = self.n;
        let mut scratch = Vec::with_capacity(self.words);
        let mut out = vec![None; n];
        match geometry {
            Geometry::Ring => {
                for (s, slot) in out.iter_mut().enumerate() {
                    let mut comp = self.empty();
                    let mut w = n;
                    while w > 1 {
                        let mut next = comp.clone();
                        self.add_qubit(&mut next, (s + w - 1) % n, &mut scratch);
                        if !next.is_full() {
                            break;
                        }
                        comp = next;
                        w -= 1;
                    }
                    *slot = Some(w);
                }
            }
            Geometry::Line => {
                let mut prefix = self.empty();
                for s in 0..n {
                    if s > 0 {
                        self.add_qubit(&mut prefix, s - 1, &mut scratch);
                    }
                    if !prefix.is_full() {
                        break;
                    }
                    let mut comp = prefix.clone();
                    let mut e = n - 1;
                    while e > s {
                        let mut next = comp.clone();
                        self.add_qubit(&mut next, e, &mut scratch);
                        if !next.is_full() {
                            break;
                        }
                        comp = next;
                        e -= 1;
                    }
                    out[s] = Some(e - s + 1);
                }
            }
        }
        out
    }
}

/// All minimal linear magic intervals of a state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlmiSet {
    pub intervals: Vec<Interval>,
    pub n_qubits: usize,
    pub injection_site: usize,
    pub geometry: Geometry,
}

impl MlmiSet {
    pub fn widths(&self) -> Vec<usize> {
        self.intervals.iter().map(|iv| iv.width(self.n_qubits)).collect()
    }

    /// Checks that no interval contains another and that all pairs intersect.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n_qubits;
        for (i, a) in self.intervals.iter().enumerate() {
            for b in &self.intervals[i + 1..] {
                if !a.intersects(b, n) {
                    return Err(Error::InvalidState(format!("MLMIs {a} and {b} do not overlap")));
                }
                if a.contains(b, n) || b.contains(a, n) {
                    return Err(Error::InvalidState(format!("MLMIs {a} and {b} are nested")));
                }
            }
        }
        Ok(())
    }
}

/// Finds every contiguous interval holding a full unit of magic whose proper
/// subintervals hold less. Intervals wrap only under [`Geometry::Ring`].
///
/// # Errors
/// [`Error::NoMagic`] if not even the full system is extractable, which a valid
/// code state never produces.
pub fn minimal_intervals(cs: &CodeState, geometry: Geometry) -> Result<MlmiSet> {
    let n = cs.n_qubits();
    let widths = FullnessScanner::new(cs).shortest_from_each_start(geometry);
    let mut intervals = Vec::new();
    match geometry {
        Geometry::Line => {
            for s in 0..n {
                let Some(w) = widths[s] else { break };
                let end = s + w - 1;
                let dominated = match widths.get(s + 1).copied().flatten() {
                    Some(w2) => s + w2 <= end,
                    None => false,
                };
                if !dominated {
                    intervals.push(Interval::new(s, end));
                }
            }
        }
        Geometry::Ring => {
            let w: Vec<usize> = widths.iter().map(|w| w.expect("full ring always qualifies")).collect();
            if w.iter().all(|&x| x == n) {
                intervals.push(Interval::new(0, n - 1));
            } else {
                for s in 0..n {
                    if w[s] < n && w[(s + 1) % n] >= w[s] {
                        intervals.push(Interval::arc(n, s, w[s]));
                    }
                }
            }
        }
    }
    if intervals.is_empty() {
        return Err(Error::NoMagic);
    }
    let set = MlmiSet {
        intervals,
        n_qubits: n,
        injection_site: cs.injection_site(),
        geometry,
    };
    debug_assert!(set.check_invariants().is_ok(), "{:?}", set.check_invariants());
    Ok(set)
}

/// The interval of width `2k` centered on the bond between qubits `L/2 − 1` and `L/2`,
/// clamped to the system.
fn centered(n: usize, k: usize, geometry: Geometry) -> BitSet {
    let c = n / 2;
    match geometry {
        Geometry::Line => {
            let lo = c.saturating_sub(k);
            let hi = (c + k).min(n);
            BitSet::from_indices(n, lo..hi)
        }
        Geometry::Ring => {
            let w = (2 * k).min(n);
            BitSet::arc(n, (c + n - k % n) % n, w)
        }
    }
}

/// Linear magic length: width of the smallest centered interval holding a full unit.
pub fn lml(cs: &CodeState, geometry: Geometry) -> usize {
    let n = cs.n_qubits();
    let k_max = n.div_ceil(2).max(n - n / 2);
    let (mut lo, mut hi) = (1, k_max);
    debug_assert!(is_full(cs, &centered(n, hi, geometry)));
    while lo < hi {
        let mid = (lo + hi) / 2;
        if is_full(cs, &centered(n, mid, geometry)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    centered(n, lo, geometry).count()
}

/// Full linear extent of magic: the span covered by the MLMIs.
pub fn fleom(m: &MlmiSet) -> Result<usize> {
    let n = m.n_qubits;
    if m.intervals.is_empty() {
        return Err(Error::EmptyInput("MLMI set"));
    }
    match m.geometry {
        Geometry::Line => {
            let lo = m.intervals.iter().map(|iv| iv.start).min().unwrap();
            let hi = m.intervals.iter().map(|iv| iv.end).max().unwrap();
            Ok(hi - lo + 1)
        }
        Geometry::Ring => {
            let mut covered = BitSet::empty(n);
            for iv in &m.intervals {
                covered = covered.union(&iv.region(n));
            }
            if covered.count() == n {
                return Ok(n);
            }
            let start = (0..n).find(|&q| covered.contains(q)).unwrap();
            let (mut gap, mut run) = (0, 0);
            for i in 1..=n {
                if covered.contains((start + i) % n) {
                    run = 0;
                } else {
                    run += 1;
                    gap = gap.max(run);
                }
            }
            Ok(n - gap)
        }
    }
}

/// Modal width of an MLMI width histogram, ties going to the smallest width.
pub fn typical_length(hist: &BTreeMap<usize, u64>) -> Result<usize> {
    let mut best: Option<(usize, u64)> = None;
    for (&w, &c) in hist {
        if c > 0 && best.is_none_or(|(_, bc)| c > bc) {
            best = Some((w, c));
        }
    }
    best.map(|(w, _)| w).ok_or(Error::EmptyInput("width histogram"))
}
