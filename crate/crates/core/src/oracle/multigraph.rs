//! Small labelled multigraphs with loops, weighted by the compensation factor.

use num_bigint::BigInt;
use num_traits::One;

use crate::series::{factorial, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultigraphInstance {
    n: usize,
    mult: Vec<Vec<u32>>,
}

impl MultigraphInstance {
    pub fn empty(n: usize) -> Self {
        MultigraphInstance { n, mult: vec![vec![0; n]; n] }
    }

    /// Adds one edge `x–y`; `x == y` adds a loop.
    pub fn add_edge(&mut self, x: usize, y: usize) {
        self.mult[x][y] += 1;
        if x != y {
            self.mult[y][x] += 1;
        }
    }

    pub fn set_multiplicity(&mut self, x: usize, y: usize, count: u32) {
        self.mult[x][y] = count;
        self.mult[y][x] = count;
    }

    pub fn multiplicity(&self, x: usize, y: usize) -> u32 {
        self.mult[x][y]
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> u64 {
        (0..self.n).map(|x| (x..self.n).map(|y| self.mult[x][y] as u64).sum::<u64>()).sum()
    }

    pub fn excess(&self) -> i64 {
        self.edge_count() as i64 - self.n as i64
    }

    /// `κ(M) = 1 / Π_x (2^{m_xx} Π_{y ≥ x} m_xy!)`.
    pub fn kappa(&self) -> Rational {
        let mut denom = BigInt::one();
        for x in 0..self.n {
            denom *= BigInt::from(2u32).pow(self.mult[x][x]);
            for y in x..self.n {
                denom *= factorial(self.mult[x][y] as usize);
            }
        }
        Rational::new(BigInt::one(), denom)
    }

    /// Components as vertex lists; loops and multiplicities do not affect connectivity.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for w in 0..self.n {
                    if !seen[w] && self.mult[v][w] > 0 {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    pub fn max_component_excess(&self) -> i64 {
        self.components()
            .iter()
            .map(|comp| {
                let edges: u64 = comp
                    .iter()
                    .map(|&x| comp.iter().filter(|&&y| y >= x).map(|&y| self.mult[x][y] as u64).sum::<u64>())
                    .sum();
                edges as i64 - comp.len() as i64
            })
            .max()
            .unwrap_or(-1)
    }
}
