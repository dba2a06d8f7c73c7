//! Small labelled simple graphs, named patterns, and copy counting.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::xring::{Attachment, XExpr};

/// A labelled simple graph on at most 64 vertices, stored as adjacency bitmasks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphInstance {
    n: usize,
    adj: Vec<u64>,
}

impl GraphInstance {
    pub fn empty(n: usize) -> Self {
        assert!(n <= 64, "at most 64 vertices");
        GraphInstance { n, adj: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > 64 {
            return Err(Error::OutOfRange(format!("{n} vertices exceeds 64")));
        }
        let mut graph = Self::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::OutOfRange(format!("edge ({u},{v}) outside {n} vertices")));
            }
            if u == v {
                return Err(Error::OutOfRange(format!("loop at {u}")));
            }
            if graph.has_edge(u, v) {
                return Err(Error::OutOfRange(format!("duplicate edge ({u},{v})")));
            }
            graph.add_edge(u, v);
        }
        Ok(graph)
    }

    pub fn from_masks(adj: Vec<u64>) -> Self {
        GraphInstance { n: adj.len(), adj }
    }

    pub fn cycle(p: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..p).map(|i| (i, (i + 1) % p)).collect();
        Self::from_edges(p, &edges).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Self {
        let mut graph = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                graph.add_edge(u, v);
            }
        }
        graph
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut graph = Self::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                graph.add_edge(u, v);
            }
        }
        graph
    }

    /// Parses a pattern name: `c<p>` (cycle), `k<n>` (complete), `k<n>-e`, `k<a>,<b>`.
    pub fn named(name: &str) -> Result<Self> {
        let lower = name.trim().to_ascii_lowercase();
        let bad = || Error::Parse(format!("unknown pattern '{name}'"));
        if lower == "triangle" {
            return Ok(Self::cycle(3));
        }
        if let Some(rest) = lower.strip_prefix('c') {
            let p: usize = rest.parse().map_err(|_| bad())?;
            if !(3..=64).contains(&p) {
                return Err(bad());
            }
            return Ok(Self::cycle(p));
        }
        if let Some(rest) = lower.strip_prefix('k') {
            if let Some((a, b)) = rest.split_once(',') {
                let a: usize = a.parse().map_err(|_| bad())?;
                let b: usize = b.parse().map_err(|_| bad())?;
                return Ok(Self::complete_bipartite(a, b));
            }
            if let Some(base) = rest.strip_suffix("-e") {
                let n: usize = base.parse().map_err(|_| bad())?;
                if n < 2 {
                    return Err(bad());
                }
                let mut graph = Self::complete(n);
                graph.remove_edge(0, 1);
                return Ok(graph);
            }
            let n: usize = rest.parse().map_err(|_| bad())?;
            if n == 0 || n > 64 {
                return Err(bad());
            }
            return Ok(Self::complete(n));
        }
        Err(bad())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn masks(&self) -> &[u64] {
        &self.adj
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.adj[v].count_ones()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            let mut higher = self.adj[u] & !((2u64 << u) - 1);
            while higher != 0 {
                let v = higher.trailing_zeros() as usize;
                out.push((u, v));
                higher &= higher - 1;
            }
        }
        out
    }

    pub fn excess(&self) -> i64 {
        self.edge_count() as i64 - self.n as i64
    }

    /// The empty graph has no components and so is not connected.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let full = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                next |= self.adj[v];
                f &= f - 1;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen & full == full
    }

    /// Connected components as vertex bitmasks.
    pub fn components(&self) -> Vec<u64> {
        let mut unseen: u64 = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let mut out = Vec::new();
        while unseen != 0 {
            let start = unseen & unseen.wrapping_neg();
            let mut seen = start;
            let mut frontier = start;
            while frontier != 0 {
                let mut next = 0u64;
                let mut f = frontier;
                while f != 0 {
                    let v = f.trailing_zeros() as usize;
                    next |= self.adj[v];
                    f &= f - 1;
                }
                frontier = next & !seen;
                seen |= next;
            }
            out.push(seen);
            unseen &= !seen;
        }
        out
    }

    /// Largest edges-minus-vertices value over components.
    pub fn max_component_excess(&self) -> i64 {
        self.components()
            .into_iter()
            .map(|comp| {
                let vertices = comp.count_ones() as i64;
                let mut degree_sum = 0i64;
                let mut c = comp;
                while c != 0 {
                    let v = c.trailing_zeros() as usize;
                    degree_sum += (self.adj[v] & comp).count_ones() as i64;
                    c &= c - 1;
                }
                degree_sum / 2 - vertices
            })
            .max()
            .unwrap_or(-1)
    }

    pub fn triangle_count(&self) -> u64 {
        let mut through_edges = 0u64;
        for (u, v) in self.edges() {
            through_edges += (self.adj[u] & self.adj[v]).count_ones() as u64;
        }
        through_edges / 3
    }

    /// Vertices of the 2-core (degree-1 vertices pruned repeatedly) as a bitmask.
    pub fn two_core(&self) -> u64 {
        let mut alive: u64 = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        loop {
            let mut removed = false;
            let mut a = alive;
            while a != 0 {
                let v = a.trailing_zeros() as usize;
                if (self.adj[v] & alive).count_ones() < 2 {
                    alive &= !(1 << v);
                    removed = true;
                }
                a &= a - 1;
            }
            if !removed {
                return alive;
            }
        }
    }

    /// For a graph with exactly one triangle: how many triangle vertices have degree at
    /// least three in the 2-core. `None` when the triangle count is not one.
    pub fn triangle_core_type(&self) -> Option<u32> {
        if self.triangle_count() != 1 {
            return None;
        }
        let core = self.two_core();
        let (u, v) = self.edges().into_iter().find(|&(u, v)| self.adj[u] & self.adj[v] != 0)?;
        let w = (self.adj[u] & self.adj[v]).trailing_zeros() as usize;
        Some([u, v, w].iter().filter(|&&x| (self.adj[x] & core).count_ones() >= 3).count() as u32)
    }

    /// Number of injective homomorphisms from `self` into `host` (copies times automorphisms).
    pub fn embeddings_into(&self, host: &GraphInstance) -> u64 {
        let order = self.search_order();
        let mut image = vec![usize::MAX; self.n];
        let mut count = 0u64;
        self.extend(host, &order, 0, &mut image, 0, &mut count, u64::MAX);
        count
    }

    pub fn has_copy_in(&self, host: &GraphInstance) -> bool {
        let order = self.search_order();
        let mut image = vec![usize::MAX; self.n];
        let mut count = 0u64;
        self.extend(host, &order, 0, &mut image, 0, &mut count, 1);
        count > 0
    }

    /// Order vertices so each one (after the first of its component) has an earlier neighbour.
    fn search_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.n);
        let mut placed = 0u64;
        for start in 0..self.n {
            if placed >> start & 1 == 1 {
                continue;
            }
            let mut queue = VecDeque::from([start]);
            placed |= 1 << start;
            while let Some(v) = queue.pop_front() {
                order.push(v);
                let mut nb = self.adj[v] & !placed;
                while nb != 0 {
                    let w = nb.trailing_zeros() as usize;
                    placed |= 1 << w;
                    queue.push_back(w);
                    nb &= nb - 1;
                }
            }
        }
        order
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        host: &GraphInstance,
        order: &[usize],
        depth: usize,
        image: &mut [usize],
        used: u64,
        count: &mut u64,
        limit: u64,
    ) {
        if *count >= limit {
            return;
        }
        if depth == order.len() {
            *count += 1;
            return;
        }
        let v = order[depth];
        let host_all: u64 = if host.n == 64 { u64::MAX } else { (1u64 << host.n) - 1 };
        let mut candidates = host_all & !used;
        let mut nb = self.adj[v];
        while nb != 0 {
            let w = nb.trailing_zeros() as usize;
            if image[w] != usize::MAX {
                candidates &= host.adj[image[w]];
            }
            nb &= nb - 1;
        }
        let needed = self.degree(v);
        while candidates != 0 {
            let x = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            if host.degree(x) < needed {
                continue;
            }
            image[v] = x;
            self.extend(host, order, depth + 1, image, used | 1 << x, count, limit);
            image[v] = usize::MAX;
        }
    }

    pub fn automorphism_count(&self) -> u64 {
        self.embeddings_into(self)
    }

    /// Number of (not necessarily induced) subgraphs of `host` isomorphic to `self`.
    pub fn copies_in(&self, host: &GraphInstance) -> u64 {
        if self.n == 3 && self.edge_count() == 3 {
            return host.triangle_count();
        }
        self.embeddings_into(host) / self.automorphism_count()
    }

    /// Connected with at least three vertices and no cut vertex.
    pub fn is_two_connected(&self) -> bool {
        if self.n < 3 || !self.is_connected() {
            return false;
        }
        (0..self.n).all(|v| {
            let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
            self.induced(&keep).is_connected()
        })
    }

    pub fn induced(&self, vertices: &[usize]) -> GraphInstance {
        let mut out = GraphInstance::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    out.add_edge(i, j);
                }
            }
        }
        out
    }

    /// `c(H) = 1/|Aut(H)|`: the EGF of all labellings is `c(H) z^n`.
    pub fn labeling_constant(&self) -> BigRational {
        BigRational::new(BigInt::from(1), BigInt::from(self.automorphism_count()))
    }

    /// The pattern as a smooth-form monomial `c(H) z^n` tagged with its excess.
    pub fn attachment(&self) -> Attachment {
        let egf = XExpr::t_power(self.n as u32, self.excess()).scale(&self.labeling_constant());
        Attachment { egf, two_connected: self.is_two_connected() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_patterns() {
        assert_eq!(GraphInstance::named("c3").unwrap().edge_count(), 3);
        assert_eq!(GraphInstance::named("k4-e").unwrap().edge_count(), 5);
        assert_eq!(GraphInstance::named("k2,3").unwrap().edge_count(), 6);
        assert!(GraphInstance::named("zz").is_err());
    }

    #[test]
    fn automorphisms() {
        assert_eq!(GraphInstance::cycle(3).automorphism_count(), 6);
        assert_eq!(GraphInstance::cycle(5).automorphism_count(), 10);
        assert_eq!(GraphInstance::complete(4).automorphism_count(), 24);
        assert_eq!(GraphInstance::named("k4-e").unwrap().automorphism_count(), 4);
        assert_eq!(GraphInstance::complete_bipartite(2, 3).automorphism_count(), 12);
    }

    #[test]
    fn copies() {
        let k4 = GraphInstance::complete(4);
        assert_eq!(GraphInstance::cycle(3).copies_in(&k4), 4);
        assert_eq!(GraphInstance::cycle(4).copies_in(&k4), 3);
        let k23 = GraphInstance::complete_bipartite(2, 3);
        assert_eq!(GraphInstance::cycle(3).copies_in(&k23), 0);
        assert_eq!(GraphInstance::cycle(4).copies_in(&k23), 3);
        assert!(GraphInstance::cycle(4).has_copy_in(&k23));
    }

    #[test]
    fn connectivity_and_core() {
        let path = GraphInstance::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(path.is_connected());
        assert_eq!(path.two_core(), 0);
        assert!(!path.is_two_connected());
        assert!(GraphInstance::cycle(4).is_two_connected());
        let split = GraphInstance::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!split.is_connected());
        assert_eq!(split.components().len(), 2);
        let pendant = GraphInstance::from_edges(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        assert_eq!(pendant.triangle_core_type(), Some(0));
        assert_eq!(pendant.max_component_excess(), 0);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(GraphInstance::from_edges(3, &[(0, 0)]).is_err());
        assert!(GraphInstance::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(GraphInstance::from_edges(3, &[(0, 5)]).is_err());
    }

    #[test]
    fn empty_graph_is_not_connected() {
        assert!(!GraphInstance::empty(0).is_connected());
        assert!(GraphInstance::empty(1).is_connected());
    }
}
