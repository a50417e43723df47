//! Breadth-first search and connected components.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Graph, Vertex};

/// Hop count marking an unreachable vertex in distance arrays.
pub const UNREACHABLE: u32 = u32::MAX;

/// A hop distance that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u32),
    Infinite,
}

impl Distance {
    pub fn from_hops(d: u32) -> Self {
        if d == UNREACHABLE {
            Distance::Infinite
        } else {
            Distance::Finite(d)
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Distance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => s.serialize_u32(*d),
            Distance::Infinite => s.serialize_str("inf"),
        }
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Distance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = Distance;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a hop count or \"inf\"")
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Distance, E> {
                u32::try_from(v)
                    .ok()
                    .filter(|&d| d != UNREACHABLE)
                    .map(Distance::Finite)
                    .ok_or_else(|| E::custom("hop count out of range"))
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Distance, E> {
                if v == "inf" {
                    Ok(Distance::Infinite)
                } else {
                    Err(E::invalid_value(serde::de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Hop distances from `source`; unreachable vertices hold [`UNREACHABLE`].
pub fn bfs_distances(g: &Graph, source: Vertex) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; g.n()];
    let mut queue = Vec::with_capacity(g.n());
    bfs_into(g, source, &mut dist, &mut queue);
    dist
}

/// BFS into caller-owned buffers (`dist` must be all [`UNREACHABLE`]).
/// Returns the eccentricity of `source` within its component and the number
/// of vertices reached.
pub(crate) fn bfs_into(g: &Graph, source: Vertex, dist: &mut [u32], queue: &mut Vec<Vertex>) -> (u32, usize) {
    queue.clear();
    dist[source as usize] = 0;
    queue.push(source);
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        let dv = dist[v as usize] + 1;
        for &w in g.neighbors(v) {
            if dist[w as usize] == UNREACHABLE {
                dist[w as usize] = dv;
                queue.push(w);
            }
        }
    }
    let last = *queue.last().expect("source is always queued");
    (dist[last as usize], queue.len())
}

/// Component id of every vertex, plus the number of components.
pub fn components(g: &Graph) -> (Vec<u32>, usize) {
    let mut comp = vec![u32::MAX; g.n()];
    let mut stack = Vec::new();
    let mut count = 0u32;
    for s in g.vertices() {
        if comp[s as usize] != u32::MAX {
            continue;
        }
        comp[s as usize] = count;
        stack.push(s);
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if comp[w as usize] == u32::MAX {
                    comp[w as usize] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    (comp, count as usize)
}

pub fn is_connected(g: &Graph) -> bool {
    g.n() <= 1 || components(g).1 == 1
}

/// Whether `members` induces a connected subgraph (the empty set does not).
pub fn induces_connected(g: &Graph, members: &[Vertex]) -> bool {
    let Some(&first) = members.first() else {
        return false;
    };
    let mut inside = alloc::collections::BTreeSet::new();
    inside.extend(members.iter().copied());
    let mut seen = alloc::collections::BTreeSet::new();
    seen.insert(first);
    let mut stack = vec![first];
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if inside.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == inside.len()
}

/// Shortest path in the union of `layers` from any vertex with
/// `start[v]` to any vertex with `goal[v]`, moving only through vertices with
/// `allowed[v]`. Endpoints must be allowed too.
pub(crate) fn shortest_path_between(
    layers: &[&Graph],
    allowed: &[bool],
    start: &[Vertex],
    goal: &[bool],
) -> Option<Vec<Vertex>> {
    let n = allowed.len();
    let mut parent = vec![Vertex::MAX; n];
    let mut queue = Vec::new();
    for &s in start {
        if allowed[s as usize] && parent[s as usize] == Vertex::MAX {
            parent[s as usize] = s;
            queue.push(s);
        }
    }
    let mut head = 0;
    let mut hit = None;
    'search: while head < queue.len() {
        let v = queue[head];
        head += 1;
        if goal[v as usize] {
            hit = Some(v);
            break;
        }
        for g in layers {
            for &w in g.neighbors(v) {
                let wi = w as usize;
                if allowed[wi] && parent[wi] == Vertex::MAX {
                    parent[wi] = v;
                    if goal[wi] {
                        hit = Some(w);
                        break 'search;
                    }
                    queue.push(w);
                }
            }
        }
    }
    let mut v = hit?;
    let mut path = vec![v];
    while parent[v as usize] != v {
        v = parent[v as usize];
        path.push(v);
    }
    path.reverse();
    Some(path)
}
