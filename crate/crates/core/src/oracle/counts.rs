//! Connected counts `c(n, n+k)` through the exponential formula.
//!
//! Polynomials in `w` are truncated at degree `nmax + kmax`, which is a ring
//! homomorphism, so the logarithm of the all-graphs series can be taken exactly.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use crate::error::{Error, Result};
use crate::series::{binomial, factorial, BivariateEgf, Rational, Series};
use crate::Model;

/// Table of exact `c(n, n+k)` for `n ≤ nmax`, `-1 ≤ k ≤ kmax`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectedTable {
    pub model: Model,
    pub nmax: usize,
    pub kmax: i64,
    rows: Vec<Vec<Rational>>,
}

impl ConnectedTable {
    /// `c(n, n+k)`; counts are κ-weighted for multigraphs.
    pub fn get(&self, n: usize, k: i64) -> Rational {
        let m = n as i64 + k;
        if n > self.nmax || k > self.kmax || m < 0 {
            return Rational::zero();
        }
        self.rows[n].get(m as usize).cloned().unwrap_or_else(Rational::zero)
    }

    /// `Σ_n c(n, n+k) z^n / n!`.
    pub fn series(&self, k: i64) -> Series {
        let counts: Vec<Rational> = (0..=self.nmax).map(|n| self.get(n, k)).collect();
        Series::from_counts(&counts, self.nmax)
    }

    pub fn bivariate(&self) -> BivariateEgf {
        let mut out = BivariateEgf::new(self.nmax);
        for n in 0..=self.nmax {
            let fact = Rational::from_integer(factorial(n));
            for (m, c) in self.rows[n].iter().enumerate() {
                out.set(n, m, c / &fact);
            }
        }
        out
    }
}

/// Exact connected counts by the rooted recurrence
/// `c_n(w) = g_n(w) - Σ_{j<n} C(n-1, j-1) c_j(w) g_{n-j}(w)` over truncated polynomials.
pub fn connected_counts(model: Model, nmax: usize, kmax: i64) -> Result<ConnectedTable> {
    if nmax < 1 || kmax < -1 {
        return Err(Error::OutOfRange("need nmax >= 1 and kmax >= -1".into()));
    }
    let degree = (nmax as i64 + kmax) as usize;
    // Multigraph coefficients are carried as sequence counts s = 2^m m! * (κ-weighted count).
    let all: Vec<Vec<BigInt>> = (0..=nmax)
        .map(|n| {
            (0..=degree)
                .map(|m| match model {
                    Model::Graph => binomial((n * n.saturating_sub(1) / 2) as u64, m as u64),
                    Model::Multigraph => BigInt::from(n).pow((2 * m) as u32),
                })
                .collect()
        })
        .collect();
    let binom_rows: Vec<Vec<BigInt>> = match model {
        Model::Graph => Vec::new(),
        Model::Multigraph => (0..=degree).map(|m| (0..=m).map(|l| binomial(m as u64, l as u64)).collect()).collect(),
    };
    let mut connected: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); degree + 1]; nmax + 1];
    for n in 1..=nmax {
        let mut row = all[n].clone();
        for j in 1..n {
            let choose = binomial((n - 1) as u64, (j - 1) as u64);
            let rest = &all[n - j];
            for (l, cj) in connected[j].iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                let scaled = cj * &choose;
                for m in l..=degree {
                    let g = &rest[m - l];
                    if g.is_zero() {
                        continue;
                    }
                    let mut term = &scaled * g;
                    if let Model::Multigraph = model {
                        term *= &binom_rows[m][l];
                    }
                    row[m] -= term;
                }
            }
        }
        connected[n] = row;
    }
    let rows = connected
        .into_iter()
        .map(|row| {
            row.into_iter()
                .enumerate()
                .map(|(m, s)| match model {
                    Model::Graph => Rational::from_integer(s),
                    Model::Multigraph => {
                        Rational::new(s, BigInt::from(2).pow(m as u32) * factorial(m))
                    }
                })
                .collect()
        })
        .collect();
    Ok(ConnectedTable { model, nmax, kmax, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute::{brute_census, brute_census_multigraph};
    use crate::series::{int, rat};

    #[test]
    fn small_values() {
        let table = connected_counts(Model::Graph, 8, 3).unwrap();
        assert_eq!(table.get(4, -1), int(16));
        assert_eq!(table.get(3, 0), int(1));
        assert_eq!(table.get(4, 1), int(6));
        assert_eq!(table.get(5, -1), int(125));
    }

    #[test]
    fn agrees_with_brute_force() {
        let table = connected_counts(Model::Graph, 7, 15).unwrap();
        let connected = "connected".parse().unwrap();
        for n in 1..=7usize {
            for m in 0..=n * (n - 1) / 2 {
                let k = m as i64 - n as i64;
                if k > 15 {
                    continue;
                }
                let brute = brute_census(n, m, &connected, None).unwrap();
                assert_eq!(table.get(n, k), Rational::from_integer(brute), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn multigraph_agrees_with_brute_force() {
        let table = connected_counts(Model::Multigraph, 4, 2).unwrap();
        let connected = "connected".parse().unwrap();
        for n in 1..=4usize {
            for k in -1..=2i64 {
                let m = n as i64 + k;
                if m < 0 {
                    continue;
                }
                let brute = brute_census_multigraph(n, m as usize, &connected).unwrap();
                assert_eq!(table.get(n, k), brute, "n={n} k={k}");
            }
        }
        assert_eq!(table.get(1, 0), rat(1, 2));
        assert_eq!(table.get(2, 0), rat(3, 2));
    }
}
