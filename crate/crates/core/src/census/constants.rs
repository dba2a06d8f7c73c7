//! Wright-type constants: `b_k`, `c_k`, and the forbidden-polygon variants `c'_k`, `c'^ξ_k`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::series::{rat, rational_to_f64, Rational};

/// Sequences indexed by `k = 0..=kmax`; entry 0 carries the convention `b_0 = 1/2` and is zero elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantTable {
    pub kmax: usize,
    pub polygons: u32,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
    pub cprime: Vec<Rational>,
    pub cprime_xi: Vec<Rational>,
    pub calb: Vec<Rational>,
}

fn q(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `Σ_{t=1}^{k-1} t (3k - 3t - 1) b_t γ_{k-t}`.
fn mixed_sum(k: usize, b: &[Rational], gamma: &[Rational]) -> Rational {
    (1..k).fold(Rational::zero(), |acc, t| {
        let weight = (t * (3 * k - 3 * t - 1)) as i64;
        acc + q(weight) * &b[t] * &gamma[k - t]
    })
}

pub fn b_sequence(kmax: usize) -> Vec<Rational> {
    let mut b = vec![rat(1, 2), rat(5, 24)];
    for k in 1..kmax {
        let conv = (1..k).fold(Rational::zero(), |acc, t| acc + q((t * (k - t)) as i64) * &b[t] * &b[k - t]);
        let next = (q((3 * k * (k + 1)) as i64) * &b[k] + q(3) * conv) / q(2 * (k as i64 + 1));
        b.push(next);
    }
    b.truncate(kmax + 1);
    b
}

/// Second-order sequence with a generic `b_k` coefficient `lead(k)`:
/// `2(3k+2) γ_{k+1} = 8(k+1) b_{k+1} + lead(k) b_k + (3k+2)(3k-1) γ_k + 6 Σ t(3k-3t-1) b_t γ_{k-t}`.
fn second_order(kmax: usize, b: &[Rational], first: Rational, lead: impl Fn(usize) -> Rational) -> Vec<Rational> {
    let mut gamma = vec![Rational::zero(), first];
    for k in 1..kmax {
        let k_i = k as i64;
        let rhs = q(8 * (k_i + 1)) * &b[k + 1]
            + lead(k) * &b[k]
            + q((3 * k_i + 2) * (3 * k_i - 1)) * &gamma[k]
            + q(6) * mixed_sum(k, b, &gamma);
        gamma.push(rhs / q(2 * (3 * k_i + 2)));
    }
    gamma.truncate(kmax + 1);
    gamma
}

/// Closed route: `γ_1 = c_1 + r/4`, `γ_{k+1} = c_{k+1} + (3/2) r k b_k`.
fn closed_route(kmax: usize, b: &[Rational], c: &[Rational], polygons: u32) -> Vec<Rational> {
    let r = q(polygons as i64);
    let mut out = vec![Rational::zero(), &c[1] + &r * rat(1, 4)];
    for k in 1..kmax {
        out.push(&c[k + 1] + rat(3, 2) * &r * q(k as i64) * &b[k]);
    }
    out.truncate(kmax + 1);
    out
}

/// Builds every sequence up to `kmax` for `polygons` forbidden cycle lengths, checking both
/// routes for `c'` and `c'^ξ`. A mismatch is a fatal consistency failure.
pub fn wright_constants(kmax: usize, polygons: u32) -> Result<ConstantTable> {
    if kmax < 1 {
        return Err(Error::OutOfRange("kmax must be at least 1".into()));
    }
    let b = b_sequence(kmax + 1);
    let c = second_order(kmax + 1, &b, rat(19, 24), |k| q(3 * k as i64));
    let cprime = closed_route(kmax, &b, &c, 1);
    let cprime_raw = second_order(kmax, &b, rat(25, 24), |k| q(6 * k as i64));
    if cprime != cprime_raw {
        return Err(Error::Consistency("c' routes disagree".into()));
    }
    let r = polygons as i64;
    let cprime_xi = closed_route(kmax, &b, &c, polygons);
    let cprime_xi_raw = second_order(kmax, &b, rat(19 + 6 * r, 24), |k| q(3 * k as i64 * (r + 1)));
    if cprime_xi != cprime_xi_raw {
        return Err(Error::Consistency(format!("c'^xi routes disagree for r = {polygons}")));
    }
    let calb = (0..=kmax)
        .map(|k| (1..k).fold(Rational::zero(), |acc, t| acc + q((t * (k - t)) as i64) * &b[t] * &b[k - t]))
        .collect();
    Ok(ConstantTable {
        kmax,
        polygons,
        b: b[..=kmax].to_vec(),
        c: c[..=kmax].to_vec(),
        cprime,
        cprime_xi,
        calb,
    })
}

/// `d_k = b_k / ((3/2)^k (k-1)!)`, which tends to `1/(2π)`.
pub fn wright_d(b: &[Rational], k: usize) -> f64 {
    assert!(k >= 1);
    let log_scale = k as f64 * 1.5f64.ln() + statrs::function::gamma::ln_gamma(k as f64);
    (crate::series::ln_abs_rational(&b[k]) - log_scale).exp()
}

impl ConstantTable {
    /// Lower and upper ends of the band `k b_k ≤ c'^ξ_k ≤ ((19+6r)/5) k b_k`.
    pub fn band(&self, k: usize) -> (Rational, Rational) {
        let low = q(k as i64) * &self.b[k];
        let high = rat(19 + 6 * self.polygons as i64, 5) * &low;
        (low, high)
    }

    pub fn band_holds(&self) -> bool {
        (1..=self.kmax).all(|k| {
            let (low, high) = self.band(k);
            low <= self.cprime_xi[k] && self.cprime_xi[k] <= high
        })
    }

    pub fn b_f64(&self, k: usize) -> f64 {
        self.b[k].to_f64().unwrap_or_else(|| rational_to_f64(&self.b[k]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        let table = wright_constants(4, 1).unwrap();
        assert_eq!(table.b[0], rat(1, 2));
        assert_eq!(table.b[1], rat(5, 24));
        assert_eq!(table.b[2], rat(5, 16));
        assert_eq!(table.c[1], rat(19, 24));
        assert_eq!(table.c[2], rat(65, 48));
        assert_eq!(table.cprime[1], rat(25, 24));
        assert_eq!(table.cprime[2], rat(5, 3));
        assert_eq!(table.cprime[2], &table.c[2] + rat(3, 2) * &table.b[1]);
    }

    #[test]
    fn dual_routes_agree() {
        for r in 0..=3 {
            let table = wright_constants(20, r).unwrap();
            assert!(table.band_holds());
            if r == 0 {
                assert_eq!(table.cprime_xi, table.c);
            }
        }
    }

    #[test]
    fn symmetric_convolution_identity() {
        let b = b_sequence(20);
        for k in 2..=20 {
            let weighted = (1..k).fold(Rational::zero(), |acc, t| acc + q(t as i64) * &b[t] * &b[k - t]);
            let plain = (1..k).fold(Rational::zero(), |acc, t| acc + &b[t] * &b[k - t]);
            assert_eq!(weighted, plain * rat(k as i64, 2));
        }
    }

    #[test]
    fn d_sequence_increases_toward_limit() {
        let b = b_sequence(30);
        let limit = 1.0 / (2.0 * std::f64::consts::PI);
        let ds: Vec<f64> = (1..=30).map(|k| wright_d(&b, k)).collect();
        // d_1 = d_2 = 5/36, strictly increasing afterwards
        assert!((ds[0] - ds[1]).abs() < 1e-12);
        assert!(ds[1..].windows(2).all(|w| w[0] < w[1]));
        assert!(ds.iter().all(|&d| d < limit));
        assert!((ds[29] - limit).abs() < 0.01);
    }
}
