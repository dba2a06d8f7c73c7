//! A tiny conjunction language over graph properties.
//!
//! Atoms, joined with `&`:
//! `connected`, `excess:k`, `maxexcess:k`, `c3free`, `cpfree:p`, `free:H`,
//! `onecopy:H`, `copies:H=c`, `juxta:H`, `coretype:j`.
//! Patterns `H` use the names accepted by [`GraphInstance::named`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::oracle::graph::GraphInstance;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Connected,
    Excess(i64),
    MaxExcess(i64),
    Free(GraphInstance),
    Copies(GraphInstance, u64),
    /// Weight `s`: edges whose single deletion removes every copy, on graphs with at least two copies.
    Juxta(GraphInstance),
    /// Exactly one triangle, with this many of its vertices of degree ≥ 3 in the 2-core.
    CoreType(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Predicate {
    atoms: Vec<Atom>,
    source: String,
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.source)
    }
}

fn parse_int<T: FromStr>(text: &str, atom: &str) -> Result<T> {
    text.trim().parse().map_err(|_| Error::Parse(format!("bad number in '{atom}'")))
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut atoms = Vec::new();
        for raw in text.split('&') {
            let atom = raw.trim();
            if atom.is_empty() {
                continue;
            }
            let (head, arg) = match atom.split_once(':') {
                Some((h, a)) => (h.trim(), Some(a.trim())),
                None => (atom, None),
            };
            let need = || arg.ok_or_else(|| Error::Parse(format!("'{head}' needs an argument")));
            match head {
                "connected" => atoms.push(Atom::Connected),
                "c3free" => atoms.push(Atom::Free(GraphInstance::cycle(3))),
                "excess" => atoms.push(Atom::Excess(parse_int(need()?, atom)?)),
                "maxexcess" => atoms.push(Atom::MaxExcess(parse_int(need()?, atom)?)),
                "cpfree" => {
                    for p in need()?.split(',') {
                        let p: usize = parse_int(p, atom)?;
                        if p < 3 {
                            return Err(Error::Parse(format!("cycle length {p} < 3")));
                        }
                        atoms.push(Atom::Free(GraphInstance::cycle(p)));
                    }
                }
                "free" => atoms.push(Atom::Free(GraphInstance::named(need()?)?)),
                "onecopy" => atoms.push(Atom::Copies(GraphInstance::named(need()?)?, 1)),
                "copies" => {
                    let (name, count) = need()?
                        .split_once('=')
                        .ok_or_else(|| Error::Parse(format!("'{atom}' needs H=c")))?;
                    atoms.push(Atom::Copies(GraphInstance::named(name)?, parse_int(count, atom)?));
                }
                "juxta" => atoms.push(Atom::Juxta(GraphInstance::named(need()?)?)),
                "coretype" => atoms.push(Atom::CoreType(parse_int(need()?, atom)?)),
                other => return Err(Error::Parse(format!("unknown atom '{other}'"))),
            }
        }
        if atoms.iter().filter(|a| matches!(a, Atom::Juxta(_))).count() > 1 {
            return Err(Error::Parse("at most one juxta atom".into()));
        }
        Ok(Predicate { atoms, source: text.trim().to_string() })
    }
}

/// Number of edges `e` of `graph` such that `graph - e` has no copy of `pattern`.
pub fn kill_edges(pattern: &GraphInstance, graph: &GraphInstance) -> u64 {
    let is_triangle = pattern.vertex_count() == 3 && pattern.edge_count() == 3;
    if is_triangle {
        let total = graph.triangle_count();
        let masks = graph.masks();
        return graph
            .edges()
            .into_iter()
            .filter(|&(u, v)| (masks[u] & masks[v]).count_ones() as u64 == total)
            .count() as u64;
    }
    let mut scratch = graph.clone();
    graph
        .edges()
        .into_iter()
        .filter(|&(u, v)| {
            scratch.remove_edge(u, v);
            let free = !pattern.has_copy_in(&scratch);
            scratch.add_edge(u, v);
            free
        })
        .count() as u64
}

impl Predicate {
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Only connectivity and excess make sense on multigraphs.
    pub fn is_multigraph_compatible(&self) -> bool {
        self.atoms.iter().all(|a| matches!(a, Atom::Connected | Atom::Excess(_) | Atom::MaxExcess(_)))
    }

    /// Weight of a graph: 0 or 1 for plain conjunctions, `s` when a juxta atom is present.
    pub fn weight(&self, graph: &GraphInstance) -> u64 {
        let mut weight = 1u64;
        for atom in &self.atoms {
            let ok = match atom {
                Atom::Connected => graph.is_connected(),
                Atom::Excess(k) => graph.excess() == *k,
                Atom::MaxExcess(k) => graph.max_component_excess() <= *k,
                Atom::Free(h) => !h.has_copy_in(graph),
                Atom::Copies(h, c) => h.copies_in(graph) == *c,
                Atom::Juxta(h) => {
                    if h.copies_in(graph) < 2 {
                        false
                    } else {
                        weight *= kill_edges(h, graph);
                        true
                    }
                }
                Atom::CoreType(j) => graph.triangle_core_type() == Some(*j),
            };
            if !ok || weight == 0 {
                return 0;
            }
        }
        weight
    }
}
