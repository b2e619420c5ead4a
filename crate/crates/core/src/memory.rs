//! The generalized game of memory: `n` sets of `k` matching cards laid out
//! on the vertices of a board graph.
//!
//! A block whose `k` vertices induce a connected subgraph is a polyomino.
//! On the path board polyominoes are exactly short chords.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinat::binomial;
use crate::diagram::{Diagram, DiagramEnumerator};
use crate::exact::total_diagrams;
use crate::{Error, ExactInteger, ExactRational, Result};

/// Identifier of the sampling stream layout, recorded with every estimate.
pub const RNG_ALGORITHM: &str = "chacha8/stream-per-chunk/4096";
const SAMPLES_PER_STREAM: u64 = 4096;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Geometry {
    Path { len: usize },
    Grid { rows: usize, cols: usize },
    Torus { rows: usize, cols: usize },
}

/// Simple undirected graph on `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Board {
    vertex_count: usize,
    neighbors: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    geometry: Option<Geometry>,
}

/// On-disk board description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoardFile {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

impl Board {
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::MalformedEdges(
                "board needs at least one vertex".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        let mut neighbors = vec![Vec::new(); vertex_count];
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::MalformedEdges(format!(
                    "edge ({u}, {v}) leaves 0..{vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::MalformedEdges(format!("self-loop at {u}")));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::MalformedEdges(format!("duplicate edge ({u}, {v})")));
            }
            neighbors[u].push(v);
            neighbors[v].push(u);
            normalized.push(key);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(Board {
            vertex_count,
            neighbors,
            edges: normalized,
            geometry: None,
        })
    }

    pub fn path(len: usize) -> Result<Self> {
        let edges: Vec<_> = (1..len).map(|i| (i - 1, i)).collect();
        let mut b = Board::from_edges(len, &edges)?;
        b.geometry = Some(Geometry::Path { len });
        Ok(b)
    }

    /// Row-major `rows x cols` grid.
    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        let at = |r: usize, c: usize| r * cols + c;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    edges.push((at(r, c), at(r, c + 1)));
                }
                if r + 1 < rows {
                    edges.push((at(r, c), at(r + 1, c)));
                }
            }
        }
        let mut b = Board::from_edges(rows * cols, &edges)?;
        b.geometry = Some(Geometry::Grid { rows, cols });
        Ok(b)
    }

    /// Grid with wrap-around in both directions; both sides must be >= 3 so
    /// the graph stays simple.
    pub fn torus(rows: usize, cols: usize) -> Result<Self> {
        if rows < 3 || cols < 3 {
            return Err(Error::InvalidParameter(format!(
                "torus sides must be >= 3, got {rows}x{cols}"
            )));
        }
        let at = |r: usize, c: usize| r * cols + c;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                edges.push((at(r, c), at(r, (c + 1) % cols)));
                edges.push((at(r, c), at((r + 1) % rows, c)));
            }
        }
        let mut b = Board::from_edges(rows * cols, &edges)?;
        b.geometry = Some(Geometry::Torus { rows, cols });
        Ok(b)
    }

    pub fn from_file(file: &BoardFile) -> Result<Self> {
        let edges: Vec<_> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        Board::from_edges(file.vertices, &edges)
    }

    pub fn to_file(&self) -> BoardFile {
        BoardFile {
            vertices: self.vertex_count,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn geometry(&self) -> Option<Geometry> {
        self.geometry
    }

    /// Whether `vertices` induce a connected subgraph.
    pub fn induces_connected(&self, vertices: &[usize]) -> bool {
        if vertices.is_empty() {
            return true;
        }
        let inside: BTreeSet<usize> = vertices.iter().copied().collect();
        let mut reached = BTreeSet::from([vertices[0]]);
        let mut stack = vec![vertices[0]];
        while let Some(v) = stack.pop() {
            for &w in &self.neighbors[v] {
                if inside.contains(&w) && reached.insert(w) {
                    stack.push(w);
                }
            }
        }
        reached.len() == inside.len()
    }

    /// Connected components of the subgraph induced by `vertices`.
    pub fn induced_components(&self, vertices: &[usize]) -> usize {
        let inside: BTreeSet<usize> = vertices.iter().copied().collect();
        let mut reached = BTreeSet::new();
        let mut components = 0;
        for &start in &inside {
            if !reached.insert(start) {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &self.neighbors[v] {
                    if inside.contains(&w) && reached.insert(w) {
                        stack.push(w);
                    }
                }
            }
        }
        components
    }
}

/// Number of `k`-vertex subsets inducing a connected subgraph.
///
/// Each subset is generated once, from its smallest vertex `v`: the search
/// only adds vertices larger than `v` that neighbour the current set but are
/// not in the neighbourhood of any vertex added earlier (the exclusive
/// extension rule), which gives every subset a unique parent chain.
pub fn connected_k_subgraphs(board: &Board, k: usize) -> ExactInteger {
    fn extend(
        board: &Board,
        root: usize,
        k: usize,
        set: &mut Vec<usize>,
        ext: Vec<usize>,
        closed: &mut Vec<bool>,
        count: &mut u64,
    ) {
        if set.len() == k {
            *count += 1;
            return;
        }
        let mut ext = ext;
        while let Some(w) = ext.pop() {
            // exclusive neighbours of w: larger than root, outside set ∪ N(set)
            let mut added = Vec::new();
            let mut next = ext.clone();
            for &x in board.neighbors(w) {
                if x > root && !closed[x] {
                    closed[x] = true;
                    added.push(x);
                    next.push(x);
                }
            }
            set.push(w);
            extend(board, root, k, set, next, closed, count);
            set.pop();
            for x in added {
                closed[x] = false;
            }
        }
    }

    if k == 0 {
        return BigInt::from(1);
    }
    let mut count = 0u64;
    let n = board.vertex_count();
    for root in 0..n {
        // closed marks vertices in the set or already adjacent to it
        let mut closed = vec![false; n];
        closed[root] = true;
        let mut ext = Vec::new();
        for &x in board.neighbors(root) {
            if x > root {
                closed[x] = true;
                ext.push(x);
            }
        }
        let mut set = vec![root];
        extend(board, root, k, &mut set, ext, &mut closed, &mut count);
    }
    BigInt::from(count)
}

fn check_size(board: &Board, k: usize, n: usize) -> Result<()> {
    if board.vertex_count() != k * n {
        return Err(Error::SizeMismatch {
            vertices: board.vertex_count(),
            expected: k * n,
        });
    }
    Ok(())
}

/// `C(kn, k)^{-1} n r` with `r` the number of connected `k`-subgraphs.
pub fn mean_polyominoes(board: &Board, k: usize, n: usize) -> Result<ExactRational> {
    check_size(board, k, n)?;
    if n == 0 {
        return Ok(ExactRational::from_integer(BigInt::from(0)));
    }
    let r = connected_k_subgraphs(board, k);
    Ok(ExactRational::new(BigInt::from(n) * r, binomial(k * n, k)))
}

/// Cards on a board: `assignment[v]` is the set label at vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement<'a> {
    board: &'a Board,
    k: usize,
    assignment: Vec<usize>,
}

impl<'a> Placement<'a> {
    pub fn new(board: &'a Board, k: usize, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != board.vertex_count() {
            return Err(Error::SizeMismatch {
                vertices: board.vertex_count(),
                expected: assignment.len(),
            });
        }
        // reuses the multiplicity check of the diagram word
        Diagram::canonicalize(k, &assignment)?;
        Ok(Placement {
            board,
            k,
            assignment,
        })
    }

    pub fn from_diagram(board: &'a Board, d: &Diagram) -> Result<Self> {
        check_size(board, d.k(), d.n())?;
        Ok(Placement {
            board,
            k: d.k(),
            assignment: d.word().to_vec(),
        })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn stats(&self) -> PlacementStats {
        placement_stats_of(self.board, self.k, &self.assignment)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PlacementStats {
    pub polyominoes: usize,
    pub components: usize,
}

fn placement_stats_of(board: &Board, k: usize, assignment: &[usize]) -> PlacementStats {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &label) in assignment.iter().enumerate() {
        groups.entry(label).or_default().push(v);
    }
    let mut occupied = Vec::new();
    let mut polyominoes = 0;
    for vertices in groups.values() {
        debug_assert_eq!(vertices.len(), k);
        if board.induces_connected(vertices) {
            polyominoes += 1;
            occupied.extend_from_slice(vertices);
        }
    }
    PlacementStats {
        polyominoes,
        components: board.induced_components(&occupied),
    }
}

/// Exact histogram over `(polyominoes, components)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PlacementHistogram {
    pub counts: BTreeMap<PlacementStats, u64>,
}

impl PlacementHistogram {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn polyomino_marginal(&self) -> BTreeMap<usize, u64> {
        let mut out = BTreeMap::new();
        for (s, c) in &self.counts {
            *out.entry(s.polyominoes).or_insert(0) += c;
        }
        out
    }

    pub fn component_marginal(&self) -> BTreeMap<usize, u64> {
        let mut out = BTreeMap::new();
        for (s, c) in &self.counts {
            *out.entry(s.components).or_insert(0) += c;
        }
        out
    }

    pub fn polyomino_mean(&self) -> ExactRational {
        let weighted: u64 = self
            .counts
            .iter()
            .map(|(s, c)| s.polyominoes as u64 * c)
            .sum();
        ExactRational::new(BigInt::from(weighted), BigInt::from(self.total()))
    }

    /// `polyominoes,components,count` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("polyominoes,components,count\n");
        for (s, c) in &self.counts {
            out.push_str(&format!("{},{},{}\n", s.polyominoes, s.components, c));
        }
        out
    }

    fn merge(mut self, other: PlacementHistogram) -> Self {
        for (s, c) in other.counts {
            *self.counts.entry(s).or_insert(0) += c;
        }
        self
    }
}

/// Every unlabeled partition of the board into `k`-sets, split on the block
/// containing vertex 0. Refuses when `N(k, n)` exceeds `budget`.
pub fn exhaustive_distribution(
    board: &Board,
    k: usize,
    n: usize,
    budget: u64,
) -> Result<PlacementHistogram> {
    check_size(board, k, n)?;
    let required = total_diagrams(k, n);
    if required > BigInt::from(budget) {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(DiagramEnumerator::new(k, n).par_fold(
        PlacementHistogram::default,
        |acc, d| {
            let s = placement_stats_of(board, k, d.word());
            *acc.counts.entry(s).or_insert(0) += 1;
        },
        PlacementHistogram::merge,
    ))
}

/// Monte Carlo estimate of the polyomino mean.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSummary {
    pub samples: u64,
    pub seed: u64,
    pub rng: &'static str,
    pub mean: f64,
    pub standard_error: f64,
    /// Polyomino count -> number of samples.
    pub histogram: BTreeMap<usize, u64>,
}

#[derive(Default)]
struct Moments {
    n: u64,
    sum: u64,
    sum_sq: u64,
    histogram: BTreeMap<usize, u64>,
}

/// Uniform random placements by shuffling the vertex list and cutting it
/// into consecutive `k`-blocks.
///
/// Samples are drawn in chunks of 4096, chunk `c` using ChaCha8 stream `c`
/// of `seed`, so the result depends on `(seed, samples)` only.
pub fn sample_placements(
    board: &Board,
    k: usize,
    n: usize,
    samples: u64,
    seed: u64,
) -> Result<SampleSummary> {
    check_size(board, k, n)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be >= 1".into()));
    }
    let chunks = samples.div_ceil(SAMPLES_PER_STREAM);
    let moments = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let here = SAMPLES_PER_STREAM.min(samples - chunk * SAMPLES_PER_STREAM);
            let mut vertices: Vec<usize> = (0..board.vertex_count()).collect();
            let mut assignment = vec![0usize; board.vertex_count()];
            let mut m = Moments::default();
            for _ in 0..here {
                vertices.shuffle(&mut rng);
                for (i, &v) in vertices.iter().enumerate() {
                    assignment[v] = i / k;
                }
                let p = placement_stats_of(board, k, &assignment).polyominoes as u64;
                m.n += 1;
                m.sum += p;
                m.sum_sq += p * p;
                *m.histogram.entry(p as usize).or_insert(0) += 1;
            }
            m
        })
        .reduce(Moments::default, |mut a, b| {
            a.n += b.n;
            a.sum += b.sum;
            a.sum_sq += b.sum_sq;
            for (p, c) in b.histogram {
                *a.histogram.entry(p).or_insert(0) += c;
            }
            a
        });
    let count = moments.n as f64;
    let mean = moments.sum as f64 / count;
    let variance = if moments.n > 1 {
        (moments.sum_sq as f64 - count * mean * mean) / (count - 1.0)
    } else {
        0.0
    };
    Ok(SampleSummary {
        samples,
        seed,
        rng: RNG_ALGORITHM,
        mean,
        standard_error: (variance.max(0.0) / count).sqrt(),
        histogram: moments.histogram,
    })
}
