//! Exact classification of one component: excess, cycle lengths present, copies of small
//! forbidden graphs.

use std::collections::HashMap;

use crate::census::ForbiddenSet;
use crate::oracle::graph::GraphInstance;

/// Work limit for the exhaustive searches of one component.
pub const DEFAULT_SEARCH_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentClass {
    pub excess: i64,
    /// One flag per forbidden member: polygons in increasing length, then other graphs.
    pub hits: Vec<bool>,
    /// Set when a search ran out of budget; the flags are then unreliable.
    pub exhausted: bool,
}

/// Local simple view of a component's 2-core.
struct Core {
    adjacency: Vec<Vec<usize>>,
    /// Length of the unique cycle when the component is unicyclic.
    cycle_length: Option<usize>,
}

fn build_core(vertex_count: usize, edges: &[(usize, usize)], excess: i64) -> Core {
    let mut degree = vec![0usize; vertex_count];
    let mut multi: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for &(u, v) in edges {
        degree[u] += 1;
        degree[v] += 1;
        multi[u].push(v);
        if u != v {
            multi[v].push(u);
        }
    }
    let mut alive = vec![true; vertex_count];
    let mut stack: Vec<usize> = (0..vertex_count).filter(|&v| degree[v] <= 1).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &w in &multi[v] {
            if alive[w] && w != v {
                degree[w] -= 1;
                if degree[w] == 1 {
                    stack.push(w);
                }
            }
        }
    }
    let remaining = alive.iter().filter(|&&a| a).count();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for (v, neighbours) in multi.iter().enumerate() {
        if !alive[v] {
            continue;
        }
        let mut simple: Vec<usize> = neighbours.iter().copied().filter(|&w| w != v && alive[w]).collect();
        simple.sort_unstable();
        simple.dedup();
        adjacency[v] = simple;
    }
    Core { adjacency, cycle_length: (excess == 0).then_some(remaining) }
}

/// Searches for a simple cycle of length `p` through vertices `≥ start`, starting at `start`.
fn cycle_through(core: &Core, start: usize, p: usize, budget: &mut u64) -> Option<bool> {
    fn walk(core: &Core, start: usize, at: usize, depth: usize, p: usize, on_path: &mut [bool], budget: &mut u64) -> Option<bool> {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        for &next in &core.adjacency[at] {
            if next == start && depth == p && p >= 3 {
                return Some(true);
            }
            if next > start && !on_path[next] && depth < p {
                on_path[next] = true;
                let found = walk(core, start, next, depth + 1, p, on_path, budget);
                on_path[next] = false;
                if found != Some(false) {
                    return found;
                }
            }
        }
        Some(false)
    }
    let mut on_path = vec![false; core.adjacency.len()];
    on_path[start] = true;
    walk(core, start, start, 1, p, &mut on_path, budget)
}

fn has_cycle(core: &Core, p: usize, budget: &mut u64) -> Option<bool> {
    if let Some(length) = core.cycle_length {
        return Some(length == p);
    }
    for start in 0..core.adjacency.len() {
        if core.adjacency[start].len() < 2 {
            continue;
        }
        match cycle_through(core, start, p, budget) {
            Some(false) => {}
            other => return other,
        }
    }
    Some(false)
}

/// Backtracking search for a (not necessarily induced) copy of `pattern` in `host`.
fn has_copy(pattern: &GraphInstance, host: &[Vec<usize>], budget: &mut u64) -> Option<bool> {
    let k = pattern.vertex_count();
    if k == 0 {
        return Some(true);
    }
    // Order pattern vertices so each one after the first touches an earlier one.
    let mut order = vec![(0..k).max_by_key(|&v| pattern.degree(v)).expect("nonempty")];
    while order.len() < k {
        let next = (0..k)
            .filter(|v| !order.contains(v))
            .max_by_key(|&v| (order.iter().filter(|&&u| pattern.has_edge(u, v)).count(), pattern.degree(v)))
            .expect("pattern vertex left");
        order.push(next);
    }
    let host_adjacent = |a: usize, b: usize| host[a].binary_search(&b).is_ok();
    fn extend(
        depth: usize,
        order: &[usize],
        pattern: &GraphInstance,
        host: &[Vec<usize>],
        image: &mut Vec<usize>,
        used: &mut [bool],
        budget: &mut u64,
        host_adjacent: &dyn Fn(usize, usize) -> bool,
    ) -> Option<bool> {
        if depth == order.len() {
            return Some(true);
        }
        let vertex = order[depth];
        let anchor = (0..depth).find(|&i| pattern.has_edge(order[i], vertex));
        let candidates: Vec<usize> = match anchor {
            Some(i) => host[image[i]].clone(),
            None => (0..host.len()).collect(),
        };
        for candidate in candidates {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            if used[candidate] || host[candidate].len() < pattern.degree(vertex) as usize {
                continue;
            }
            if (0..depth).all(|i| !pattern.has_edge(order[i], vertex) || host_adjacent(image[i], candidate)) {
                used[candidate] = true;
                image.push(candidate);
                let found = extend(depth + 1, order, pattern, host, image, used, budget, host_adjacent);
                image.pop();
                used[candidate] = false;
                if found != Some(false) {
                    return found;
                }
            }
        }
        Some(false)
    }
    let mut used = vec![false; host.len()];
    extend(0, &order, pattern, host, &mut Vec::with_capacity(k), &mut used, budget, &host_adjacent)
}

/// Classifies a component given as global vertex labels and its edges (loops and repeated
/// edges allowed).
pub fn classify_component(vertices: &[usize], edges: &[(usize, usize)], forbidden: &ForbiddenSet, budget: u64) -> ComponentClass {
    let excess = edges.len() as i64 - vertices.len() as i64;
    let members = forbidden.polygon_set().len() + forbidden.others().len();
    if excess < 0 || members == 0 {
        return ComponentClass { excess, hits: vec![false; members], exhausted: false };
    }
    let index: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let local: Vec<(usize, usize)> = edges.iter().map(|(u, v)| (index[u], index[v])).collect();
    let core = build_core(vertices.len(), &local, excess);
    let mut remaining = budget;
    let mut exhausted = false;
    let mut hits = Vec::with_capacity(members);
    for &p in forbidden.polygon_set() {
        match has_cycle(&core, p as usize, &mut remaining) {
            Some(found) => hits.push(found),
            None => {
                exhausted = true;
                hits.push(false);
            }
        }
    }
    if !forbidden.others().is_empty() {
        // Patterns with pendant vertices may use tree parts, so search the whole component.
        let mut full: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
        for &(u, v) in &local {
            if u != v {
                full[u].push(v);
                full[v].push(u);
            }
        }
        for list in &mut full {
            list.sort_unstable();
            list.dedup();
        }
        for pattern in forbidden.others() {
            let host = if (0..pattern.vertex_count()).all(|v| pattern.degree(v) >= 2) { &core.adjacency } else { &full };
            match has_copy(pattern, host, &mut remaining) {
                Some(found) => hits.push(found),
                None => {
                    exhausted = true;
                    hits.push(false);
                }
            }
        }
    }
    ComponentClass { excess, hits, exhausted }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classify(graph: &GraphInstance, forbidden: &str) -> ComponentClass {
        let vertices: Vec<usize> = (0..graph.vertex_count()).map(|v| v * 7 + 3).collect();
        let edges: Vec<(usize, usize)> = graph.edges().iter().map(|&(u, v)| (vertices[u], vertices[v])).collect();
        classify_component(&vertices, &edges, &forbidden.parse().unwrap(), DEFAULT_SEARCH_BUDGET)
    }

    #[test]
    fn small_components() {
        let triangle = classify(&GraphInstance::cycle(3), "3,4");
        assert_eq!((triangle.excess, triangle.hits.clone()), (0, vec![true, false]));
        let k23 = classify(&GraphInstance::complete_bipartite(2, 3), "3,4");
        assert_eq!((k23.excess, k23.hits.clone()), (1, vec![false, true]));
        let tree = GraphInstance::from_edges(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        let tree = classify(&tree, "3");
        assert_eq!((tree.excess, tree.hits.clone()), (-1, vec![false]));
        let k4 = classify(&GraphInstance::complete(4), "5,k4");
        assert_eq!((k4.excess, k4.hits.clone()), (2, vec![false, true]));
        let c5_tail = GraphInstance::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (4, 5), (5, 6)]).unwrap();
        assert_eq!(classify(&c5_tail, "3,5").hits, vec![false, true]);
    }

    #[test]
    fn multigraph_cycles_are_not_polygons() {
        let c = classify_component(&[0, 1], &[(0, 1), (0, 1), (1, 1)], &ForbiddenSet::triangle(), DEFAULT_SEARCH_BUDGET);
        assert_eq!((c.excess, c.hits), (1, vec![false]));
        let looped = classify_component(&[5], &[(5, 5)], &ForbiddenSet::triangle(), DEFAULT_SEARCH_BUDGET);
        assert_eq!((looped.excess, looped.hits), (0, vec![false]));
    }

    #[test]
    fn tiny_budget_is_reported() {
        let k = GraphInstance::complete(6);
        let vertices: Vec<usize> = (0..6).collect();
        let c = classify_component(&vertices, &k.edges(), &"7".parse().unwrap(), 3);
        assert!(c.exhausted);
    }

    #[test]
    fn agrees_with_mask_search() {
        // Every connected graph on 5 vertices with 5..=7 edges, against the bitmask oracle.
        let pairs: Vec<(usize, usize)> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            let graph = GraphInstance::from_edges(5, &edges).unwrap();
            if !graph.is_connected() || !(5..=7).contains(&edges.len()) {
                continue;
            }
            let got = classify(&graph, "3,4,5").hits;
            let want: Vec<bool> = [3, 4, 5].iter().map(|&p| GraphInstance::cycle(p).has_copy_in(&graph)).collect();
            assert_eq!(got, want, "{edges:?}");
        }
    }
}
