//! Log-space asymptotic estimates for tree polynomials and connected counts, with exact
//! references for comparison.

use std::f64::consts::{LN_2, PI};

use statrs::function::gamma::ln_gamma;

use crate::census::wright::compute_wk;
use crate::error::{Error, Result};
use crate::series::{ln_abs_rational, ln_bigint, tree_polynomial, Rational};
use crate::Model;

/// Saddle point data for `t_n(a n + β)` with `h(u) = u - ln u - a ln(1 - u)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaddleContext {
    pub a: f64,
    pub u0: f64,
    pub rho: f64,
}

impl SaddleContext {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::OutOfRange(format!("saddle rate a = {a} must lie in (0, 1)")));
        }
        let u0 = saddle_point(a);
        let rho = u0 * (1.0 + a - 2.0 * u0 + u0 * u0) / ((1.0 - u0) * (1.0 - u0));
        Ok(SaddleContext { a, u0, rho })
    }

    pub fn h(&self, u: f64) -> f64 {
        u - u.ln() - self.a * (1.0 - u).ln()
    }

    pub fn h_prime(&self, u: f64) -> f64 {
        1.0 - 1.0 / u + self.a / (1.0 - u)
    }

    pub fn h_second(&self, u: f64) -> f64 {
        1.0 / (u * u) + self.a / ((1.0 - u) * (1.0 - u))
    }
}

/// `u0 = 1 + a/2 - √(a(1 + a/4))`.
pub fn saddle_point(a: f64) -> f64 {
    1.0 + a / 2.0 - (a * (1.0 + a / 4.0)).sqrt()
}

fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// `ln t̂_n(a n + β)` from the saddle-point estimate.
pub fn tn_saddle(n: usize, a: f64, beta: f64) -> Result<f64> {
    let ctx = SaddleContext::new(a)?;
    let nf = n as f64;
    if a * nf + beta < 1.0 {
        return Err(Error::OutOfRange("a n + β must be at least 1".into()));
    }
    let u0 = ctx.u0;
    let log_gap = (1.0 - u0).ln();
    Ok(ln_factorial(n) - LN_2 - 0.5 * (PI * nf).ln() + nf * u0 + (1.0 - beta) * log_gap - nf * u0.ln() - a * nf * log_gap)
}

/// Leading term of `ln t_n(y)` for fixed `y > 0`.
pub fn tn_fixed(n: usize, y: f64) -> Result<f64> {
    if n < 1 || y <= 0.0 {
        return Err(Error::OutOfRange("need n >= 1 and y > 0".into()));
    }
    let nf = n as f64;
    Ok(0.5 * (2.0 * PI).ln() + (nf - 0.5 + y / 2.0) * nf.ln() - (y / 2.0) * LN_2 - ln_gamma(y / 2.0))
}

/// Exact `ln t_n(y)` for integer `y ≥ 1`.
pub fn tn_exact_ln(n: usize, y: i64) -> Result<f64> {
    if y < 1 {
        return Err(Error::OutOfRange("exact log needs y >= 1".into()));
    }
    Ok(ln_bigint(&tree_polynomial(n, y)))
}

/// `ln` of the large-`k` estimate of `c(n, n+k)` with `d_k` replaced by `1/(2π)`.
pub fn c_asymptotic(n: usize, k: i64) -> Result<f64> {
    if n < 1 || k < 1 {
        return Err(Error::OutOfRange("need n >= 1 and k >= 1".into()));
    }
    let nf = n as f64;
    let kf = k as f64;
    Ok(-(2.0 * PI).ln() + 0.5 * (3.0 * PI).ln() + 0.5 * kf * (1.0 - (12.0 * kf).ln()) + (nf + 0.5 * (3.0 * kf - 1.0)) * nf.ln())
}

/// Exact `c(n, n+k)` through the symbolic `W_k`.
pub fn connected_exact(n: usize, k: i64) -> Result<Rational> {
    if k < 1 {
        return Err(Error::OutOfRange("need k >= 1".into()));
    }
    Ok(compute_wk(k as usize, Model::Graph)?[k as usize].count(n))
}

/// `c(n, n+k) / ĉ(n, n+k)`.
pub fn connected_ratio(n: usize, k: i64) -> Result<f64> {
    let exact = connected_exact(n, k)?;
    Ok((ln_abs_rational(&exact) - c_asymptotic(n, k)?).exp())
}

/// `k t_n(3k-1) / t_n(3k)`, exact up to the final float conversion.
pub fn driver_ratio(n: usize, k: i64) -> Result<f64> {
    if k < 1 {
        return Err(Error::OutOfRange("need k >= 1".into()));
    }
    Ok((k as f64).ln().exp() * (tn_exact_ln(n, 3 * k - 1)? - tn_exact_ln(n, 3 * k)?).exp())
}

/// One saddle-point comparison against the exact value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaddlePoint {
    pub n: usize,
    pub exponent: i64,
    pub beta: i64,
    pub relative_error: f64,
    pub tolerance: f64,
}

impl SaddlePoint {
    pub fn within(&self) -> bool {
        self.relative_error <= self.tolerance
    }
}

/// Compares `t̂_n(m + β)` with the exact value where `m = a n`; the tolerance is
/// `scale (√a + 1/√(a n))`.
pub fn saddle_comparison(n: usize, exponent: i64, beta: i64, scale: f64) -> Result<SaddlePoint> {
    let a = exponent as f64 / n as f64;
    let estimate = tn_saddle(n, a, beta as f64)?;
    let exact = tn_exact_ln(n, exponent + beta)?;
    Ok(SaddlePoint {
        n,
        exponent,
        beta,
        relative_error: (estimate - exact).exp_m1().abs(),
        tolerance: scale * (a.sqrt() + 1.0 / (exponent as f64).sqrt()),
    })
}

/// Residuals of the singular expansion of `T` near `z = 1/e`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularRow {
    pub delta: f64,
    /// `residuals[j]` is `(T - Σ_{i ≤ j} e_i δ^i) / δ^{j+1}`.
    pub residuals: Vec<f64>,
}

const SINGULAR_TERMS: usize = 4;

fn singular_coefficients() -> [f64; SINGULAR_TERMS] {
    let root2 = std::f64::consts::SQRT_2;
    [1.0, -root2, 2.0 / 3.0, -11.0 / 36.0 * root2]
}

/// `T((1 - δ²)/e)` computed as `1 - v`, where `v` solves
/// `Σ_{j≥2} (j-1) v^j / j! = δ²` by Newton steps (the power series sum avoids cancellation).
pub fn tree_near_singularity(delta: f64) -> f64 {
    let target = delta * delta;
    let mut v = std::f64::consts::SQRT_2 * delta;
    for _ in 0..60 {
        let mut term = v;
        let mut total = 0.0;
        for j in 2..80 {
            term *= v / j as f64;
            total += (j - 1) as f64 * term;
            if term.abs() < 1e-300 {
                break;
            }
        }
        let slope = v * v.exp();
        if slope == 0.0 {
            break;
        }
        let step = (total - target) / slope;
        v -= step;
        if step.abs() <= 1e-17 * v.abs().max(1e-300) {
            break;
        }
    }
    1.0 - v
}

/// Residual table for the first `terms` coefficients (at most four).
pub fn singular_expansion_check(terms: usize, deltas: &[f64]) -> Result<Vec<SingularRow>> {
    if terms == 0 || terms > SINGULAR_TERMS {
        return Err(Error::OutOfRange(format!("between 1 and {SINGULAR_TERMS} terms")));
    }
    let coefficients = singular_coefficients();
    Ok(deltas
        .iter()
        .map(|&delta| {
            let value = tree_near_singularity(delta);
            let mut partial = 0.0;
            let residuals = (0..terms)
                .map(|j| {
                    partial += coefficients[j] * delta.powi(j as i32);
                    (value - partial) / delta.powi(j as i32 + 1)
                })
                .collect();
            SingularRow { delta, residuals }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::constants::{wright_constants, wright_d};

    #[test]
    fn saddle_point_is_critical() {
        let mut a = 1e-6;
        while a <= 0.5 {
            let ctx = SaddleContext::new(a).unwrap();
            assert!(ctx.u0 > 0.0 && ctx.u0 < 1.0);
            assert!(ctx.h_prime(ctx.u0).abs() < 1e-12, "a={a}");
            let curvature = ctx.h_second(ctx.u0);
            // h''(u0) = 2 + 3√a + O(a); the O(a) part stays below 4a on the whole grid, while
            // the looser band 2 + 4√a only holds for small a.
            let correction = curvature - 2.0 - 3.0 * a.sqrt();
            assert!(correction >= 0.0 && correction <= 4.0 * a, "a={a} h''={curvature}");
            if a <= 0.1 {
                assert!(curvature <= 2.0 + 4.0 * a.sqrt(), "a={a} h''={curvature}");
            }
            assert!(ctx.rho > 0.0);
            a *= 3.0;
        }
        assert!((saddle_point(0.01) - (1.005 - 0.010025f64.sqrt())).abs() < 1e-15);
        assert!(SaddleContext::new(1.0).is_err());
    }

    #[test]
    fn saddle_grid_within_tolerance() {
        for n in [100usize, 200, 400, 800, 1600] {
            let rules = [3 * (n as f64).powf(0.2).floor() as i64, 3 * (n as f64).powf(0.25).floor() as i64];
            for exponent in rules {
                for beta in -1..=1 {
                    let point = saddle_comparison(n, exponent, beta, 5.0).unwrap();
                    assert!(point.within(), "{point:?}");
                }
            }
        }
    }

    #[test]
    fn saddle_error_shrinks_with_n() {
        let error = |n: usize| saddle_comparison(n, 3 * (n as f64).powf(0.25).floor() as i64, 0, 5.0).unwrap().relative_error;
        assert!(error(1600) < error(100));
    }

    #[test]
    fn fixed_y_estimates() {
        assert!((tn_fixed(37, 1.0).unwrap() - 37f64 * 37f64.ln()).abs() < 1e-9);
        for (n, y) in [(100usize, 3i64), (50, 2)] {
            let ratio = (tn_fixed(n, y as f64).unwrap() - tn_exact_ln(n, y).unwrap()).exp();
            // The neglected term is a factor 1/√n below the leading one.
            assert!((ratio - 1.0).abs() <= 2.0 / (n as f64).sqrt(), "n={n} y={y} ratio={ratio}");
        }
        assert!(tn_fixed(10, 0.0).is_err());
    }

    #[test]
    fn connected_estimate_is_monotone_in_n() {
        let values: Vec<f64> = (10..20).map(|n| c_asymptotic(n, 3).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(connected_exact(4, 1).unwrap(), Rational::from_integer(6.into()));
    }

    #[test]
    fn connected_ratio_approaches_one() {
        let at = |n: usize| connected_ratio(n, (n as f64).powf(0.3).floor() as i64).unwrap();
        let (early, late) = (at(200), at(800));
        assert!((late - 1.0).abs() < (early - 1.0).abs(), "{early} {late}");
    }

    #[test]
    fn driver_ratio_decreases_for_fixed_k() {
        for k in 2..=4 {
            let ratios: Vec<f64> = [200usize, 400, 800, 1600].iter().map(|&n| driver_ratio(n, k).unwrap()).collect();
            assert!(ratios.windows(2).all(|w| w[1] < w[0]), "k={k} {ratios:?}");
        }
    }

    #[test]
    fn driver_ratio_jumps_when_floored_k_steps() {
        // With k = ⌊n^0.2⌋ the ratio rises each time k increments (200 → 400 moves k from 2
        // to 3), so the sequence over 200..1600 is not monotone.
        let at = |n: usize| driver_ratio(n, (n as f64).powf(0.2).floor() as i64).unwrap();
        assert!(at(400) > at(200));
        assert!(at(800) < at(400));
    }

    #[test]
    fn singular_expansion_residuals_stabilise() {
        let rows = singular_expansion_check(4, &[1e-2, 5e-3, 2.5e-3, 1.25e-3]).unwrap();
        for pair in rows.windows(2) {
            // Each scaled residual settles near the next coefficient.
            assert!((pair[0].residuals[0] - pair[1].residuals[0]).abs() < 0.02);
        }
        let last = rows.last().unwrap();
        assert!((last.residuals[1] - 2.0 / 3.0).abs() < 0.005);
        assert!((last.residuals[2] + 11.0 / 36.0 * std::f64::consts::SQRT_2).abs() < 0.01);
        assert_eq!(tree_near_singularity(0.0), 1.0);
    }

    #[test]
    fn d_sequence_heads_to_limit() {
        let table = wright_constants(30, 0).unwrap();
        let gap = |k: usize| (wright_d(&table.b, k) - 1.0 / (2.0 * PI)).abs();
        assert!(gap(30) < gap(10) && gap(10) < gap(3));
    }
}
