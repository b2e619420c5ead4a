//! Canonical linear k-chord diagrams, exhaustive enumeration and
//! per-diagram statistics.
//!
//! A diagram is stored as a word of `k*n` block labels in first-occurrence
//! form: label `j` first appears before label `j + 1`. Every diagram has
//! exactly one such word, so equality of words is equality of diagrams.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::table::{CountTable, TableKind, TripleTable};
use crate::{Error, Result};

const EMPTY: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    k: usize,
    n: usize,
    word: Vec<usize>,
}

impl Diagram {
    /// The diagram with no chords.
    pub fn empty(k: usize) -> Self {
        Diagram {
            k,
            n: 0,
            word: Vec::new(),
        }
    }

    /// Relabels an arbitrary word by order of first occurrence.
    pub fn canonicalize<T: Eq + Hash>(k: usize, word: &[T]) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("chord size k = {k} < 2")));
        }
        let mut labels: HashMap<&T, usize> = HashMap::new();
        let mut counts: Vec<(usize, usize)> = Vec::new();
        let mut out = Vec::with_capacity(word.len());
        for (pos, sym) in word.iter().enumerate() {
            let next = labels.len();
            let label = *labels.entry(sym).or_insert(next);
            if label == counts.len() {
                counts.push((pos, 0));
            }
            counts[label].1 += 1;
            out.push(label);
        }
        if let Some(&(position, count)) = counts.iter().find(|(_, c)| *c != k) {
            return Err(Error::Multiplicity { position, count, k });
        }
        if !word.len().is_multiple_of(k) {
            return Err(Error::WordLength { len: word.len(), k });
        }
        Ok(Diagram {
            k,
            n: counts.len(),
            word: out,
        })
    }

    /// Accepts a word that must already be canonical.
    pub fn from_canonical(k: usize, word: Vec<usize>) -> Result<Self> {
        let d = Diagram::canonicalize(k, &word)?;
        if d.word != word {
            return Err(Error::NotCanonical);
        }
        Ok(d)
    }

    /// Parses the comma-separated text form, e.g. `"0,1,0,1"`.
    pub fn parse(k: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Diagram::canonicalize::<&str>(k, &[]);
        }
        let symbols: Vec<&str> = text.split(',').map(str::trim).collect();
        Diagram::canonicalize(k, &symbols)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// Sorted vertex positions of each block, indexed by label.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::with_capacity(self.k); self.n];
        for (pos, &label) in self.word.iter().enumerate() {
            blocks[label].push(pos);
        }
        blocks
    }

    pub fn stats(&self) -> BlockStats {
        let blocks = self.blocks();
        let n = blocks.len();
        let span = |b: &Vec<usize>| (b[0], b[b.len() - 1]);

        let mut short_chords = 0;
        let mut components = 0;
        let mut last_short_end: Option<usize> = None;
        // blocks are ordered by their first vertex
        for b in &blocks {
            let (lo, hi) = span(b);
            if hi - lo == self.k - 1 {
                short_chords += 1;
                if last_short_end.is_none_or(|end| end + 1 != lo) {
                    components += 1;
                }
                last_short_end = Some(hi);
            }
        }

        let mut crossed = vec![false; n];
        let mut crossing_pairs = 0;
        for i in 0..n {
            for j in i + 1..n {
                if blocks_cross(&blocks[i], &blocks[j]) {
                    crossed[i] = true;
                    crossed[j] = true;
                    crossing_pairs += 1;
                }
            }
        }

        // Innermost first: a block strictly inside another has a shorter span.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| {
            let (lo, hi) = span(&blocks[i]);
            hi - lo
        });
        let mut free = vec![false; n];
        for &i in &order {
            if crossed[i] {
                continue;
            }
            let (lo, hi) = span(&blocks[i]);
            free[i] = (0..n).all(|j| {
                let (jlo, jhi) = span(&blocks[j]);
                j == i || !(lo < jlo && jhi < hi) || free[j]
            });
        }
        let noncrossing = free.iter().filter(|&&f| f).count();

        BlockStats {
            short_chords,
            components,
            noncrossing,
            crossing_pairs,
        }
    }

    /// Maps each vertex to `U` unless it is the last vertex of its block,
    /// which maps to `D`.
    pub fn encode_lattice_path(&self) -> Result<LatticePath> {
        let stats = self.stats();
        if stats.noncrossing != self.n {
            return Err(Error::NotNonCrossing {
                crossed: self.n - stats.noncrossing,
            });
        }
        let mut remaining = vec![self.k; self.n];
        let steps = self
            .word
            .iter()
            .map(|&label| {
                remaining[label] -= 1;
                if remaining[label] == 0 {
                    Step::Down
                } else {
                    Step::Up
                }
            })
            .collect();
        Ok(LatticePath { steps })
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, label) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{label}")?;
        }
        Ok(())
    }
}

/// Set-partition crossing: some `a < b < a' < b'` with `a, a'` in one block
/// and `b, b'` in the other. Equivalently, the merged position sequence of the
/// two blocks alternates owner at least three times.
pub fn blocks_cross(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    let mut owner: Option<bool> = None;
    let mut switches = 0;
    while i < a.len() || j < b.len() {
        let from_a = j == b.len() || (i < a.len() && a[i] < b[j]);
        if from_a {
            i += 1;
        } else {
            j += 1;
        }
        if owner.is_some_and(|o| o != from_a) {
            switches += 1;
            if switches >= 3 {
                return true;
            }
        }
        owner = Some(from_a);
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BlockStats {
    /// Blocks occupying `k` consecutive positions.
    pub short_chords: usize,
    /// Maximal runs of adjacent short chords.
    pub components: usize,
    /// Uncrossed blocks whose enclosed blocks are all non-crossing too.
    pub noncrossing: usize,
    /// Unordered pairs of crossing blocks.
    pub crossing_pairs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    /// `(0, +1)`
    Up,
    /// `(+1, 0)`
    Down,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePath {
    pub steps: Vec<Step>,
}

impl LatticePath {
    pub fn ups(&self) -> usize {
        self.steps.iter().filter(|s| **s == Step::Up).count()
    }

    pub fn downs(&self) -> usize {
        self.steps.len() - self.ups()
    }

    /// Number of `UD` factors.
    pub fn peaks(&self) -> usize {
        self.steps
            .windows(2)
            .filter(|w| w[0] == Step::Up && w[1] == Step::Down)
            .count()
    }

    /// Number of `U^(k-1) D` factors.
    pub fn full_peaks(&self, k: usize) -> usize {
        self.steps
            .windows(k)
            .filter(|w| w[..k - 1].iter().all(|s| *s == Step::Up) && w[k - 1] == Step::Down)
            .count()
    }

    /// Starts at the origin; ends on `y = (k-1) x`.
    pub fn ends_on_line(&self, k: usize) -> bool {
        self.ups() == (k - 1) * self.downs()
    }

    /// Never drops strictly below `y = (k-1) x`.
    pub fn stays_above_line(&self, k: usize) -> bool {
        let (mut x, mut y) = (0usize, 0usize);
        for s in &self.steps {
            match s {
                Step::Up => y += 1,
                Step::Down => x += 1,
            }
            if y < (k - 1) * x {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            f.write_str(match s {
                Step::Up => "U",
                Step::Down => "D",
            })?;
        }
        Ok(())
    }
}

impl FromStr for LatticePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let steps = s
            .chars()
            .map(|c| match c {
                'U' => Ok(Step::Up),
                'D' => Ok(Step::Down),
                other => Err(Error::InvalidParameter(format!(
                    "bad lattice step {other:?}"
                ))),
            })
            .collect::<Result<_>>()?;
        Ok(LatticePath { steps })
    }
}

/// Visits canonical diagrams in a fixed depth-first order.
///
/// Work splits into independent sub-ranges, one per placement of block 0
/// (vertex 0 plus a `(k-1)`-subset of the remaining vertices), listed in
/// lexicographic order.
#[derive(Debug, Clone, Copy)]
pub struct DiagramEnumerator {
    k: usize,
    n: usize,
    noncrossing_only: bool,
}

impl DiagramEnumerator {
    pub fn new(k: usize, n: usize) -> Self {
        assert!(k >= 2, "chord size k must be at least 2");
        DiagramEnumerator {
            k,
            n,
            noncrossing_only: false,
        }
    }

    /// Restricts the walk to diagrams without any crossing pair, pruning
    /// every branch as soon as a completed block crosses an earlier one.
    pub fn noncrossing(k: usize, n: usize) -> Self {
        DiagramEnumerator {
            noncrossing_only: true,
            ..DiagramEnumerator::new(k, n)
        }
    }

    /// Placements of block 0 other than vertex 0, one per sub-range.
    pub fn subranges(&self) -> Vec<Vec<usize>> {
        if self.n == 0 {
            return vec![Vec::new()];
        }
        let len = self.k * self.n;
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(self.k - 1);
        fn rec(
            from: usize,
            len: usize,
            need: usize,
            cur: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if need == 0 {
                out.push(cur.clone());
                return;
            }
            for p in from..=len - need {
                cur.push(p);
                rec(p + 1, len, need - 1, cur, out);
                cur.pop();
            }
        }
        rec(1, len, self.k - 1, &mut current, &mut out);
        out
    }

    pub fn visit_all<F: FnMut(&Diagram)>(&self, mut visit: F) {
        for r in self.subranges() {
            self.visit_subrange(&r, &mut visit);
        }
    }

    pub fn visit_subrange<F: FnMut(&Diagram)>(&self, first_block_rest: &[usize], visit: &mut F) {
        let len = self.k * self.n;
        let mut walk = Walk {
            k: self.k,
            noncrossing_only: self.noncrossing_only,
            diagram: Diagram {
                k: self.k,
                n: self.n,
                word: vec![EMPTY; len],
            },
            blocks: vec![Vec::with_capacity(self.k); self.n],
        };
        if self.n == 0 {
            visit(&walk.diagram);
            return;
        }
        walk.diagram.word[0] = 0;
        walk.blocks[0].push(0);
        for &p in first_block_rest {
            walk.diagram.word[p] = 0;
            walk.blocks[0].push(p);
        }
        walk.place(1, 1, visit);
    }

    /// Folds every diagram in parallel, one accumulator per sub-range.
    pub fn par_fold<A, Id, V, R>(&self, identity: Id, visit: V, reduce: R) -> A
    where
        A: Send,
        Id: Fn() -> A + Sync + Send,
        V: Fn(&mut A, &Diagram) + Sync + Send,
        R: Fn(A, A) -> A + Sync + Send,
    {
        self.subranges()
            .into_par_iter()
            .map(|r| {
                let mut acc = identity();
                self.visit_subrange(&r, &mut |d: &Diagram| visit(&mut acc, d));
                acc
            })
            .reduce(&identity, reduce)
    }
}

struct Walk {
    k: usize,
    noncrossing_only: bool,
    diagram: Diagram,
    blocks: Vec<Vec<usize>>,
}

impl Walk {
    fn place<F: FnMut(&Diagram)>(&mut self, label: usize, from: usize, visit: &mut F) {
        let word_len = self.diagram.word.len();
        let Some(first) = (from..word_len).find(|&p| self.diagram.word[p] == EMPTY) else {
            visit(&self.diagram);
            return;
        };
        self.diagram.word[first] = label;
        self.blocks[label].push(first);
        self.choose(label, first + 1, self.k - 1, first, visit);
        self.blocks[label].pop();
        self.diagram.word[first] = EMPTY;
    }

    fn choose<F: FnMut(&Diagram)>(
        &mut self,
        label: usize,
        from: usize,
        need: usize,
        first: usize,
        visit: &mut F,
    ) {
        if need == 0 {
            if self.noncrossing_only
                && (0..label).any(|j| blocks_cross(&self.blocks[j], &self.blocks[label]))
            {
                return;
            }
            self.place(label + 1, first + 1, visit);
            return;
        }
        for q in from..self.diagram.word.len() {
            if self.diagram.word[q] != EMPTY {
                continue;
            }
            self.diagram.word[q] = label;
            self.blocks[label].push(q);
            self.choose(label, q + 1, need - 1, first, visit);
            self.blocks[label].pop();
            self.diagram.word[q] = EMPTY;
        }
    }
}

/// Calls `visit` once per canonical diagram with `n` blocks of size `k`.
pub fn enumerate_diagrams<F: FnMut(&Diagram)>(k: usize, n: usize, visit: F) {
    DiagramEnumerator::new(k, n).visit_all(visit);
}

/// Histograms of every statistic over all diagrams of one `(k, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleHistograms {
    pub k: usize,
    pub n: usize,
    pub total: u64,
    pub short: Vec<u64>,
    pub components: Vec<u64>,
    /// `short_by_noncrossing[m][l]`.
    pub short_by_noncrossing: Vec<Vec<u64>>,
}

impl OracleHistograms {
    fn zeros(k: usize, n: usize) -> Self {
        OracleHistograms {
            k,
            n,
            total: 0,
            short: vec![0; n + 1],
            components: vec![0; n + 1],
            short_by_noncrossing: vec![vec![0; n + 1]; n + 1],
        }
    }

    fn record(&mut self, s: &BlockStats) {
        self.total += 1;
        self.short[s.short_chords] += 1;
        self.components[s.components] += 1;
        self.short_by_noncrossing[s.noncrossing][s.short_chords] += 1;
    }

    fn merge(mut self, other: OracleHistograms) -> Self {
        self.total += other.total;
        for (a, b) in self.short.iter_mut().zip(&other.short) {
            *a += b;
        }
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            *a += b;
        }
        for (ra, rb) in self
            .short_by_noncrossing
            .iter_mut()
            .zip(&other.short_by_noncrossing)
        {
            for (a, b) in ra.iter_mut().zip(rb) {
                *a += b;
            }
        }
        self
    }

    /// Enumerates every diagram on the current rayon pool.
    pub fn compute(k: usize, n: usize) -> Self {
        DiagramEnumerator::new(k, n).par_fold(
            || OracleHistograms::zeros(k, n),
            |acc, d| acc.record(&d.stats()),
            OracleHistograms::merge,
        )
    }

    /// The fully non-crossing stratum `m = n`, i.e. row `n` of `T`.
    pub fn noncrossing_row(&self) -> &[u64] {
        &self.short_by_noncrossing[self.n]
    }

    pub fn triple_table(&self) -> TripleTable {
        let mut t = TripleTable::zeros(self.k, self.n);
        for (m, row) in self.short_by_noncrossing.iter().enumerate() {
            for (l, &c) in row.iter().enumerate() {
                t.set(l, m, BigInt::from(c));
            }
        }
        t
    }
}

/// Oracle triangles for rows `0..=n_max` of one statistic kind.
pub fn oracle_tables(k: usize, n_max: usize) -> Vec<OracleHistograms> {
    (0..=n_max)
        .map(|n| OracleHistograms::compute(k, n))
        .collect()
}

pub fn oracle_count_table(hists: &[OracleHistograms], kind: TableKind) -> CountTable {
    let k = hists.first().map_or(2, |h| h.k);
    let rows = hists
        .iter()
        .map(|h| {
            let row: &[u64] = match kind {
                TableKind::ShortChords => &h.short,
                TableKind::Components => &h.components,
                TableKind::NoncrossingShort => h.noncrossing_row(),
            };
            row.iter().map(|&c| BigInt::from(c)).collect()
        })
        .collect();
    CountTable::from_rows(k, kind, rows)
}
