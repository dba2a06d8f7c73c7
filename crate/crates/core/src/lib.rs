//! Exact generating functions, Wright-type constants, asymptotics and Monte Carlo
//! for connected sparse labelled graphs that avoid forbidden subgraphs.

pub mod asymptotics;
pub mod census;
pub mod error;
pub mod oracle;
pub mod probability;
pub mod series;
pub mod simulator;
pub mod xring;

use std::fmt;
use std::str::FromStr;

pub use error::{Error, Result};
pub use series::{Rational, Series};
pub use xring::XExpr;

/// Simple graphs, or multigraphs with loops weighted by the compensation factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Graph,
    Multigraph,
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "graph" => Ok(Model::Graph),
            "multigraph" => Ok(Model::Multigraph),
            other => Err(Error::Parse(format!("unknown model '{other}'"))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Graph => "graph",
            Model::Multigraph => "multigraph",
        })
    }
}
