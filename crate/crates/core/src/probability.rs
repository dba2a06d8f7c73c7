//! Leading-order probabilities for the component structure of random graphs near
//! `m = n/2`, and the weights turning EGF coefficients into probabilities.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::census::constants::b_sequence;
use crate::error::{Error, Result};
use crate::series::{binomial, factorial, ln_bigint, rat, rational_to_f64, Rational};
use crate::Model;

/// `counts[i]` is the number of components of excess `i + 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComponentProfile {
    pub counts: Vec<u32>,
}

impl ComponentProfile {
    pub fn new(counts: Vec<u32>) -> Self {
        ComponentProfile { counts }
    }

    /// `r = Σ i r_i`.
    pub fn total(&self) -> u32 {
        self.counts.iter().enumerate().map(|(i, &r)| (i as u32 + 1) * r).sum()
    }

    pub fn count_of(&self, excess: usize) -> u32 {
        excess.checked_sub(1).and_then(|i| self.counts.get(i)).copied().unwrap_or(0)
    }
}

/// Excess-`k` components contractible to a forbidden `H` are removed, replacing `b_k` by
/// `b_k - c(H)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deduction {
    pub k: usize,
    pub c_h: Rational,
}

fn validate(deductions: &[Deduction], b: &[Rational]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for deduction in deductions {
        if deduction.k == 0 || !seen.insert(deduction.k) {
            return Err(Error::OutOfRange(format!("deduction excess {} repeated or zero", deduction.k)));
        }
        if deduction.c_h.is_negative() || deduction.c_h > b[deduction.k] {
            return Err(Error::OutOfRange(format!("c(H) = {} outside [0, b_{}]", deduction.c_h, deduction.k)));
        }
    }
    Ok(())
}

/// The rational part `(4/3)^r Π (b_k - c_k)^{r_k} / r_k! · r!/(2r)!`.
pub fn profile_weight(profile: &ComponentProfile, deductions: &[Deduction]) -> Result<Rational> {
    let kmax = profile.counts.len().max(deductions.iter().map(|d| d.k).max().unwrap_or(0)).max(1);
    let b = b_sequence(kmax);
    validate(deductions, &b)?;
    let r = profile.total() as usize;
    let mut weight = rat(4, 3).pow(r as i32) * Rational::new(factorial(r), factorial(2 * r));
    for (index, &count) in profile.counts.iter().enumerate() {
        let k = index + 1;
        let mut base = b[k].clone();
        if let Some(deduction) = deductions.iter().find(|d| d.k == k) {
            base -= &deduction.c_h;
        }
        weight *= base.pow(count as i32) / Rational::from_integer(factorial(count as usize));
    }
    Ok(weight)
}

/// `Σ_{p ∈ Θ} 1/(2p)`.
pub fn polygon_exponent(theta: &[u32]) -> Result<f64> {
    let unique: BTreeSet<u32> = theta.iter().copied().collect();
    if unique.iter().any(|&p| p < 3) {
        return Err(Error::OutOfRange("polygon lengths start at 3".into()));
    }
    Ok(unique.iter().map(|&p| 1.0 / (2.0 * p as f64)).sum())
}

/// `√(2/3)`, the probability of no complex component with no constraints.
pub fn acyclic_constant() -> f64 {
    (2.0f64 / 3.0).sqrt()
}

/// Leading-order probability of exactly `profile` with every component `C_p`-free for `p ∈ Θ`.
pub fn profile_probability(profile: &ComponentProfile, theta: &[u32], deductions: &[Deduction]) -> Result<f64> {
    let weight = rational_to_f64(&profile_weight(profile, deductions)?);
    Ok(weight * acyclic_constant() * (-polygon_exponent(theta)?).exp())
}

/// Probability that every component has excess at most `max_excess` (0 or 1) and no cycle
/// length in `Θ` occurs.
pub fn low_complexity_probability(max_excess: u32, theta: &[u32]) -> Result<f64> {
    let polygons = (-polygon_exponent(theta)?).exp();
    match max_excess {
        0 => Ok(acyclic_constant() * polygons),
        1 => Ok(acyclic_constant() * (5.0f64 / 18.0).sqrt().cosh() * polygons),
        other => Err(Error::OutOfRange(format!("max excess {other} is not 0 or 1"))),
    }
}

/// Every profile with `Σ i r_i ≤ max_total`.
pub fn profiles_up_to(max_total: u32) -> Vec<ComponentProfile> {
    fn extend(prefix: &mut Vec<u32>, left: u32, out: &mut Vec<ComponentProfile>) {
        let k = prefix.len() as u32 + 1;
        if k > left {
            let mut counts = prefix.clone();
            while counts.last() == Some(&0) {
                counts.pop();
            }
            out.push(ComponentProfile::new(counts));
            return;
        }
        for r in 0..=left / k {
            prefix.push(r);
            extend(prefix, left - r * k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), max_total, &mut out);
    out
}

/// Exact weight turning `[w^m z^n] F` into a probability.
pub fn coeff_weight(model: Model, n: usize, m: usize) -> Result<Rational> {
    match model {
        Model::Graph => {
            let pairs = (n * n.saturating_sub(1) / 2) as u64;
            if m as u64 > pairs {
                return Err(Error::OutOfRange(format!("m = {m} exceeds C({n}, 2)")));
            }
            Ok(Rational::new(factorial(n), binomial(pairs, m as u64)))
        }
        Model::Multigraph => {
            if n == 0 {
                return Err(Error::OutOfRange("multigraph weight needs n >= 1".into()));
            }
            let numer = BigInt::from(2).pow(m as u32) * factorial(m) * factorial(n);
            Ok(Rational::new(numer, BigInt::from(n).pow(2 * m as u32)))
        }
    }
}

pub fn coeff_to_probability_exact(model: Model, n: usize, m: usize, coeff: &Rational) -> Result<Rational> {
    Ok(coeff_weight(model, n, m)? * coeff)
}

pub fn coeff_to_probability(model: Model, n: usize, m: usize, coeff: &Rational) -> Result<f64> {
    Ok(rational_to_f64(&coeff_to_probability_exact(model, n, m, coeff)?))
}

/// `ln C(C(n,2), m) - ln(n^{2m} / (2^m m!)) + m/n + m²/n²`, which vanishes as `n` grows
/// with `m = Θ(n)`.
pub fn ratio_identity_gap(n: usize, m: usize) -> f64 {
    let pairs = (n * n.saturating_sub(1) / 2) as u64;
    let graphs = ln_bigint(&binomial(pairs, m as u64));
    let sequences = 2.0 * m as f64 * (n as f64).ln() - m as f64 * std::f64::consts::LN_2 - ln_bigint(&factorial(m));
    let (mf, nf) = (m as f64, n as f64);
    graphs - sequences + mf / nf + mf * mf / (nf * nf)
}

/// `m(n, μ) = ⌊(n/2)(1 + μ n^{-1/3})⌋` for `|μ| ≤ n^{1/12}`.
pub fn edge_window(n: usize, mu: f64) -> Result<usize> {
    let nf = n as f64;
    if n == 0 || mu.abs() > nf.powf(1.0 / 12.0) {
        return Err(Error::OutOfRange(format!("|μ| = {} exceeds n^(1/12)", mu.abs())));
    }
    Ok((nf / 2.0 * (1.0 + mu * nf.powf(-1.0 / 3.0))).floor() as usize)
}


#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};
    use crate::census::closed::{catalogue, ClosedForm};
    use crate::series::BivariateEgf;
    use proptest::prelude::*;

    #[test]
    fn headline_values() {
        assert!((low_complexity_probability(0, &[]).unwrap() - 0.8165).abs() < 5e-5);
        assert!((low_complexity_probability(0, &[3, 4]).unwrap() - 0.6099).abs() < 5e-5);
        assert!((low_complexity_probability(1, &[3]).unwrap() - 0.789).abs() < 5e-4);
        assert!(low_complexity_probability(2, &[]).is_err());
        let single = ComponentProfile::new(vec![1]);
        let expected = 4.0 / 3.0 * acyclic_constant() * 5.0 / 24.0 / 2.0;
        assert!((profile_probability(&single, &[], &[]).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn bicyclic_profiles_sum_to_cosh() {
        let total: f64 = (0..30).map(|r| profile_probability(&ComponentProfile::new(vec![r]), &[3], &[]).unwrap()).sum();
        assert!((total - low_complexity_probability(1, &[3]).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn partial_sums_increase_towards_one() {
        let mut previous = 0.0;
        for max_total in [0u32, 2, 4, 8, 12] {
            let sum: f64 = profiles_up_to(max_total).iter().map(|p| profile_probability(p, &[], &[]).unwrap()).sum();
            assert!(sum > previous && sum <= 1.0 + 1e-12, "R={max_total} sum={sum}");
            previous = sum;
        }
        assert!(previous > 0.99, "{previous}");
    }

    #[test]
    fn deductions() {
        let b = b_sequence(2);
        let profile = ComponentProfile::new(vec![1, 2]);
        let zero = Deduction { k: 2, c_h: Rational::zero() };
        assert_eq!(profile_weight(&profile, &[zero]).unwrap(), profile_weight(&profile, &[]).unwrap());
        let full = Deduction { k: 2, c_h: b[2].clone() };
        assert!(profile_weight(&profile, &[full.clone()]).unwrap().is_zero());
        assert!(!profile_weight(&ComponentProfile::new(vec![1]), &[full.clone()]).unwrap().is_zero());
        let over = Deduction { k: 2, c_h: &b[2] + rat(1, 100) };
        assert!(profile_weight(&profile, &[over]).is_err());
        assert!(profile_weight(&profile, &[full.clone(), full]).is_err());
        // Tetrahedron constant.
        let k4 = Deduction { k: 3, c_h: rat(1, 24) };
        assert!(profile_probability(&ComponentProfile::new(vec![0, 0, 1]), &[], &[k4]).unwrap() > 0.0);
    }

    #[test]
    fn forced_outcomes() {
        let triangle = BivariateEgf::from_excess(&catalogue(ClosedForm::Unicyclic).eval(3), 0);
        assert_eq!(coeff_to_probability_exact(Model::Graph, 3, 3, &triangle.coeff(3, 3)).unwrap(), Rational::one());
        let loops = BivariateEgf::from_excess(&catalogue(ClosedForm::UnicyclicMultigraph).eval(1), 0);
        assert_eq!(coeff_to_probability_exact(Model::Multigraph, 1, 1, &loops.coeff(1, 1)).unwrap(), Rational::one());
        assert!(coeff_weight(Model::Graph, 3, 4).is_err());
    }

    #[test]
    fn ratio_identity_gap_shrinks() {
        let gaps: Vec<f64> = [100usize, 1000, 10000].iter().map(|&n| ratio_identity_gap(n, n / 2).abs()).collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2] && gaps[2] < 1e-3, "{gaps:?}");
    }

    #[test]
    fn window_helper() {
        assert_eq!(edge_window(1000, 0.0).unwrap(), 500);
        assert!(edge_window(1000, 1.0).unwrap() > 500);
        assert!(edge_window(1000, 5.0).is_err());
    }

    proptest! {
        #[test]
        fn adding_a_polygon_scales_by_its_factor(counts in proptest::collection::vec(0u32..3, 0..4), p in 3u32..12) {
            let profile = ComponentProfile::new(counts);
            let base = profile_probability(&profile, &[], &[]).unwrap();
            let with = profile_probability(&profile, &[p], &[]).unwrap();
            prop_assert!((with - base * (-1.0 / (2.0 * p as f64)).exp()).abs() <= 1e-14 * base.max(1e-300));
        }
    }
}
