//! Exhaustive enumeration of small labelled graphs and multigraphs.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::oracle::graph::GraphInstance;
use crate::oracle::multigraph::MultigraphInstance;
use crate::oracle::predicate::{Atom, Predicate};
use crate::series::{binomial, Rational};
use crate::Model;

/// Largest number of edge subsets a single census may visit.
pub const SUBSET_LIMIT: u64 = 400_000_000;
pub const GRAPH_VERTEX_LIMIT: usize = 9;
pub const MULTIGRAPH_VERTEX_LIMIT: usize = 6;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// Runs `job` on a dedicated pool when a worker count is given.
pub(crate) fn with_workers<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(count) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(count.max(1))
                .build()
                .map_err(|e| Error::ResourceLimit(e.to_string()))?;
            Ok(pool.install(job))
        }
    }
}

/// Sum of predicate weights over all `m`-edge simple graphs on `n` labelled vertices.
pub fn brute_census(n: usize, m: usize, predicate: &Predicate, workers: Option<usize>) -> Result<BigInt> {
    if n > GRAPH_VERTEX_LIMIT {
        return Err(Error::ResourceLimit(format!("graph census limited to n <= {GRAPH_VERTEX_LIMIT}")));
    }
    let universe = pairs(n);
    if m > universe.len() {
        return Ok(BigInt::zero());
    }
    let subsets = binomial(universe.len() as u64, m as u64);
    if subsets > BigInt::from(SUBSET_LIMIT) {
        return Err(Error::ResourceLimit(format!("{subsets} edge subsets exceed {SUBSET_LIMIT}")));
    }
    if m == 0 {
        return Ok(BigInt::from(predicate.weight(&GraphInstance::empty(n))));
    }
    let total = with_workers(workers, || {
        (0..universe.len())
            .into_par_iter()
            .map(|first| {
                let mut graph = GraphInstance::empty(n);
                let (u, v) = universe[first];
                graph.add_edge(u, v);
                let mut acc = 0u128;
                visit(&universe, first + 1, m - 1, &mut graph, predicate, &mut acc);
                acc
            })
            .sum::<u128>()
    })?;
    Ok(BigInt::from(total))
}

fn visit(universe: &[(usize, usize)], from: usize, left: usize, graph: &mut GraphInstance, predicate: &Predicate, acc: &mut u128) {
    if left == 0 {
        *acc += predicate.weight(graph) as u128;
        return;
    }
    for index in from..=universe.len() - left {
        let (u, v) = universe[index];
        graph.add_edge(u, v);
        visit(universe, index + 1, left - 1, graph, predicate, acc);
        graph.remove_edge(u, v);
    }
}

/// κ-weighted sum over all `m`-edge multigraphs (loops allowed) on `n` labelled vertices.
pub fn brute_census_multigraph(n: usize, m: usize, predicate: &Predicate) -> Result<Rational> {
    if n > MULTIGRAPH_VERTEX_LIMIT {
        return Err(Error::ResourceLimit(format!("multigraph census limited to n <= {MULTIGRAPH_VERTEX_LIMIT}")));
    }
    if !predicate.is_multigraph_compatible() {
        return Err(Error::Parse(format!("predicate '{predicate}' is not defined on multigraphs")));
    }
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|x| (x..n).map(move |y| (x, y))).collect();
    let count = binomial((m + slots.len()).saturating_sub(1) as u64, m as u64);
    if count > BigInt::from(SUBSET_LIMIT / 10) {
        return Err(Error::ResourceLimit(format!("{count} multisets exceed the multigraph limit")));
    }
    let mut total = Rational::zero();
    let mut graph = MultigraphInstance::empty(n);
    fill(&slots, 0, m, &mut graph, predicate, &mut total);
    Ok(total)
}

fn fill(slots: &[(usize, usize)], index: usize, left: usize, graph: &mut MultigraphInstance, predicate: &Predicate, total: &mut Rational) {
    if index == slots.len() {
        if left == 0 && multigraph_weight(predicate, graph) {
            *total += graph.kappa();
        }
        return;
    }
    let (x, y) = slots[index];
    let start = if index + 1 == slots.len() { left } else { 0 };
    for count in start..=left {
        graph.set_multiplicity(x, y, count as u32);
        fill(slots, index + 1, left - count, graph, predicate, total);
    }
    graph.set_multiplicity(x, y, 0);
}

fn multigraph_weight(predicate: &Predicate, graph: &MultigraphInstance) -> bool {
    predicate.atoms().iter().all(|atom| match atom {
        Atom::Connected => graph.is_connected(),
        Atom::Excess(k) => graph.excess() == *k,
        Atom::MaxExcess(k) => graph.max_component_excess() <= *k,
        _ => false,
    })
}

/// Dispatches on the model; graph counts are returned as integral rationals.
pub fn census(model: Model, n: usize, m: usize, predicate: &Predicate, workers: Option<usize>) -> Result<Rational> {
    match model {
        Model::Graph => brute_census(n, m, predicate, workers).map(Rational::from_integer),
        Model::Multigraph => brute_census_multigraph(n, m, predicate),
    }
}

/// Per-`n` counts for a fixed excess: `census(n, n + k)` for `n = 0..=nmax`.
pub fn census_by_excess(nmax: usize, excess: i64, predicate: &Predicate) -> Result<Vec<Rational>> {
    (0..=nmax)
        .map(|n| {
            let m = n as i64 + excess;
            if m < 0 || m as usize > n * n.saturating_sub(1) / 2 {
                Ok(Rational::zero())
            } else {
                brute_census(n, m as usize, predicate, None).map(Rational::from_integer)
            }
        })
        .collect()
}

pub fn as_u64(value: &BigInt) -> u64 {
    value.to_u64().expect("fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Pow;

    fn pred(text: &str) -> Predicate {
        text.parse().unwrap()
    }

    #[test]
    fn completeness() {
        for n in 0..=6usize {
            let big_n = n * n.saturating_sub(1) / 2;
            for m in 0..=big_n {
                let all = brute_census(n, m, &pred(""), None).unwrap();
                assert_eq!(all, binomial(big_n as u64, m as u64));
            }
        }
    }

    #[test]
    fn small_known_counts() {
        assert_eq!(brute_census(5, 6, &pred("connected&c3free"), None).unwrap(), BigInt::from(10));
        assert_eq!(brute_census(4, 4, &pred("connected&onecopy:c3"), None).unwrap(), BigInt::from(12));
        assert_eq!(brute_census(4, 4, &pred("connected&c3free"), None).unwrap(), BigInt::from(3));
        assert_eq!(brute_census(4, 5, &pred("connected"), None).unwrap(), BigInt::from(6));
        assert_eq!(brute_census(4, 3, &pred("connected"), None).unwrap(), BigInt::from(16));
    }

    #[test]
    fn multigraph_sequence_identity() {
        for n in 1..=4usize {
            for m in 0..=4usize {
                let total = brute_census_multigraph(n, m, &pred("")).unwrap();
                let scaled = total * Rational::from_integer(BigInt::from(2).pow(m as u32) * crate::series::factorial(m));
                assert_eq!(scaled, Rational::from_integer(BigInt::from(n).pow((2 * m) as u32)), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn limits() {
        assert!(matches!(brute_census(10, 3, &pred(""), None), Err(Error::ResourceLimit(_))));
        assert!(matches!(brute_census_multigraph(7, 1, &pred("")), Err(Error::ResourceLimit(_))));
        assert!(matches!(brute_census_multigraph(2, 1, &pred("c3free")), Err(Error::Parse(_))));
    }

    #[test]
    fn worker_pool_gives_same_answer() {
        let p = pred("connected");
        assert_eq!(brute_census(6, 7, &p, Some(2)).unwrap(), brute_census(6, 7, &p, None).unwrap());
    }
}
