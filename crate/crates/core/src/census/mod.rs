//! Constants, closed forms and recurrences for connected sparse graph families.

pub mod closed;
pub mod constants;
pub mod inequality;
pub mod partition;
pub mod residual;
pub mod wright;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::oracle::graph::GraphInstance;

pub use closed::{closed_form, ClosedForm};
pub use constants::{wright_constants, ConstantTable};
pub use wright::compute_wk;

/// Forbidden configurations: cycle lengths plus arbitrary small graphs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ForbiddenSet {
    polygons: BTreeSet<u32>,
    others: Vec<GraphInstance>,
}

impl ForbiddenSet {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn polygons(lengths: &[u32]) -> Result<Self> {
        let mut out = Self::default();
        for &p in lengths {
            out.add_polygon(p)?;
        }
        Ok(out)
    }

    pub fn triangle() -> Self {
        Self::polygons(&[3]).expect("3 is a valid length")
    }

    pub fn add_polygon(&mut self, p: u32) -> Result<()> {
        if p < 3 {
            return Err(Error::OutOfRange(format!("polygon length {p} < 3")));
        }
        self.polygons.insert(p);
        Ok(())
    }

    /// Adds a non-polygon member; it must be connected and contain a cycle.
    pub fn add_graph(&mut self, graph: GraphInstance) -> Result<()> {
        if !graph.is_connected() || graph.excess() < 0 {
            return Err(Error::OutOfRange("forbidden graphs must be connected and multicyclic".into()));
        }
        self.others.push(graph);
        Ok(())
    }

    pub fn polygon_set(&self) -> &BTreeSet<u32> {
        &self.polygons
    }

    pub fn polygon_list(&self) -> Vec<u32> {
        self.polygons.iter().copied().collect()
    }

    pub fn others(&self) -> &[GraphInstance] {
        &self.others
    }

    pub fn is_empty(&self) -> bool {
        self.polygons.is_empty() && self.others.is_empty()
    }

    pub fn is_triangle_only(&self) -> bool {
        self.others.is_empty() && self.polygons.len() == 1 && self.polygons.contains(&3)
    }

    /// `Σ_{p ∈ Θ} 1/(2p)`.
    pub fn polygon_exponent(&self) -> f64 {
        self.polygons.iter().map(|&p| 1.0 / (2.0 * p as f64)).sum()
    }
}

impl FromStr for ForbiddenSet {
    type Err = Error;

    /// Comma-separated members: `none`, bare integers or `c<p>` for polygons, other names as
    /// accepted by [`GraphInstance::named`].
    fn from_str(text: &str) -> Result<Self> {
        let mut out = Self::default();
        for raw in text.split(',') {
            let item = raw.trim().to_ascii_lowercase();
            if item.is_empty() || item == "none" {
                continue;
            }
            let polygon = item.parse::<u32>().ok().or_else(|| item.strip_prefix('c').and_then(|p| p.parse().ok()));
            match polygon {
                Some(p) => out.add_polygon(p)?,
                None => out.add_graph(GraphInstance::named(&item)?)?,
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ForbiddenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("none");
        }
        let mut parts: Vec<String> = self.polygons.iter().map(|p| format!("c{p}")).collect();
        parts.extend(self.others.iter().map(|g| format!("graph({} vertices, {} edges)", g.vertex_count(), g.edge_count())));
        f.write_str(&parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_members() {
        let set: ForbiddenSet = "c3, 4".parse().unwrap();
        assert_eq!(set.polygon_list(), vec![3, 4]);
        assert!(!set.is_triangle_only());
        let with_k4: ForbiddenSet = "3,k4".parse().unwrap();
        assert_eq!(with_k4.others().len(), 1);
        assert!("c2".parse::<ForbiddenSet>().is_err());
        assert!("none".parse::<ForbiddenSet>().unwrap().is_empty());
        assert!((set.polygon_exponent() - (1.0 / 6.0 + 1.0 / 8.0)).abs() < 1e-15);
    }
}
