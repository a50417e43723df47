//! Immutable simple undirected graphs in compressed sparse row form.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;

/// Dense vertex id in `0..n`.
pub type Vertex = u32;

/// A simple undirected graph on vertices `0..n`.
///
/// Neighbour lists are sorted, symmetric and free of loops and duplicates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(n * n.saturating_sub(1));
        offsets.push(0);
        for v in 0..n {
            targets.extend((0..n).filter(|&u| u != v).map(|u| u as Vertex));
            offsets.push(targets.len());
        }
        Graph { offsets, targets }
    }

    /// Builds a graph from an edge list, rejecting loops and out-of-range
    /// endpoints. Repeated edges collapse to one.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let edges: Vec<(Vertex, Vertex)> = edges.into_iter().collect();
        for &(u, v) in &edges {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(Error::VertexOutOfRange { vertex: w as u64, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
        }
        Ok(Self::from_edge_vec(n, &edges))
    }

    /// Trusted builder: endpoints must be in range and distinct.
    pub(crate) fn from_edge_vec(n: usize, edges: &[(Vertex, Vertex)]) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in edges {
            debug_assert!(u != v);
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0 as Vertex; offsets[n]];
        for &(u, v) in edges {
            targets[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            targets[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        // Sort each row, then squeeze out duplicates in place.
        let mut write = 0;
        let mut start = 0;
        for v in 0..n {
            let end = offsets[v + 1];
            targets[start..end].sort_unstable();
            let row_start = write;
            for i in start..end {
                let t = targets[i];
                if write == row_start || targets[write - 1] != t {
                    targets[write] = t;
                    write += 1;
                }
            }
            start = end;
            offsets[v + 1] = write;
        }
        targets.truncate(write);
        Graph { offsets, targets }
    }

    /// Builds from rows that are already sorted, symmetric and loop-free.
    pub(crate) fn from_sorted_rows(rows: Vec<Vec<Vertex>>) -> Self {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        let total = rows.iter().map(Vec::len).sum();
        let mut targets = Vec::with_capacity(total);
        for row in rows {
            targets.extend_from_slice(&row);
            offsets.push(targets.len());
        }
        Graph { offsets, targets }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Position of `v` inside the neighbour list of `u`, if adjacent.
    pub(crate) fn arc_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.neighbors(u)
            .binary_search(&v)
            .ok()
            .map(|i| self.offsets[u as usize] + i)
    }

    #[inline]
    pub(crate) fn row_start(&self, v: Vertex) -> usize {
        self.offsets[v as usize]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + Clone {
        0..self.n() as Vertex
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices().flat_map(move |u| {
            let row = self.neighbors(u);
            let from = row.partition_point(|&w| w <= u);
            row[from..].iter().map(move |&w| (u, w))
        })
    }

    pub fn min_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edge union of two graphs on the same vertex set.
    pub fn union(&self, other: &Graph) -> Result<Graph, Error> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch(self.n(), other.n()));
        }
        let mut offsets = Vec::with_capacity(self.n() + 1);
        let mut targets = Vec::with_capacity(self.targets.len() + other.targets.len());
        offsets.push(0);
        for v in self.vertices() {
            let (a, b) = (self.neighbors(v), other.neighbors(v));
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    core::cmp::Ordering::Less => {
                        targets.push(a[i]);
                        i += 1;
                    }
                    core::cmp::Ordering::Greater => {
                        targets.push(b[j]);
                        j += 1;
                    }
                    core::cmp::Ordering::Equal => {
                        targets.push(a[i]);
                        i += 1;
                        j += 1;
                    }
                }
            }
            targets.extend_from_slice(&a[i..]);
            targets.extend_from_slice(&b[j..]);
            offsets.push(targets.len());
        }
        Ok(Graph { offsets, targets })
    }

    /// Subgraph induced by `vertices`; local vertex `i` is `vertices[i]`.
    pub fn induced(&self, vertices: &[Vertex]) -> Graph {
        let mut local = vec![Vertex::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v as usize] = i as Vertex;
        }
        let rows = vertices
            .iter()
            .map(|&v| {
                let mut row: Vec<Vertex> = self
                    .neighbors(v)
                    .iter()
                    .map(|&w| local[w as usize])
                    .filter(|&w| w != Vertex::MAX)
                    .collect();
                row.sort_unstable();
                row
            })
            .collect();
        Graph::from_sorted_rows(rows)
    }

    /// Image of the graph under `v -> perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.n(), "permutation length must equal n");
        let mut rows = vec![Vec::new(); self.n()];
        for v in self.vertices() {
            let mut row: Vec<Vertex> = self.neighbors(v).iter().map(|&w| perm[w as usize]).collect();
            row.sort_unstable();
            rows[perm[v as usize] as usize] = row;
        }
        Graph::from_sorted_rows(rows)
    }

    /// 64-bit FNV-1a over the sorted edge list, each endpoint as little-endian `u32`.
    pub fn digest(&self) -> u64 {
        let mut h = Fnv1a::new();
        for (u, v) in self.edges() {
            h.write(&u.to_le_bytes());
            h.write(&v.to_le_bytes());
        }
        h.finish()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edge_count())
            .finish()
    }
}

/// 64-bit FNV-1a of `bytes`.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = Fnv1a::new();
    h.write(bytes);
    h.finish()
}

pub(crate) struct Fnv1a(u64);

impl Fnv1a {
    pub(crate) fn new() -> Self {
        Fnv1a(0xcbf2_9ce4_8422_2325)
    }

    pub(crate) fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    pub(crate) fn finish(&self) -> u64 {
        self.0
    }
}

/// Sorted, duplicate-free set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn from_vec(mut members: Vec<Vertex>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexSet(members)
    }

    pub fn full(n: usize) -> Self {
        VertexSet((0..n as Vertex).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn iter(&self) -> core::iter::Copied<core::slice::Iter<'_, Vertex>> {
        self.0.iter().copied()
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// Boolean membership table over `0..n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for v in self.iter() {
            m[v as usize] = true;
        }
        m
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        VertexSet::from_vec(iter.into_iter().collect())
    }
}

impl From<Vec<Vertex>> for VertexSet {
    fn from(v: Vec<Vertex>) -> Self {
        VertexSet::from_vec(v)
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = Vertex;
    type IntoIter = core::iter::Copied<core::slice::Iter<'a, Vertex>>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

/// Pairwise disjoint blocks of vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Partition {
    blocks: Vec<VertexSet>,
}

impl Partition {
    /// Checks that blocks are disjoint and lie inside `0..n`.
    pub fn new(blocks: Vec<VertexSet>, n: usize) -> Result<Self, Error> {
        block_index(&blocks, n)?;
        Ok(Partition { blocks })
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn into_blocks(self) -> Vec<VertexSet> {
        self.blocks
    }

    pub fn is_exact_cover(&self, n: usize) -> bool {
        self.blocks.iter().map(VertexSet::len).sum::<usize>() == n
    }

    /// Block id of every vertex in `0..n`, `None` for uncovered vertices.
    pub fn block_of(&self, n: usize) -> Vec<Option<u32>> {
        let mut owner = vec![None; n];
        for (i, b) in self.blocks.iter().enumerate() {
            for v in b {
                owner[v as usize] = Some(i as u32);
            }
        }
        owner
    }
}

/// Owner table for possibly unvalidated blocks.
pub(crate) fn block_index(blocks: &[VertexSet], n: usize) -> Result<Vec<u32>, Error> {
    let mut owner = vec![u32::MAX; n];
    for (i, b) in blocks.iter().enumerate() {
        for v in b {
            let slot = owner
                .get_mut(v as usize)
                .ok_or(Error::VertexOutOfRange { vertex: v as u64, n })?;
            if *slot != u32::MAX {
                return Err(Error::BlockOverlap(v));
            }
            *slot = i as u32;
        }
    }
    Ok(owner)
}
