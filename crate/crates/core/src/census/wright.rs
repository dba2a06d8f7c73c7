//! Connected graphs of every excess through the differential recurrence.
//!
//! Reading edge pointing as `k + θ` and using `θ - Tθ = T d/dT`, the recurrence becomes
//! `Δ_{k+1} W_{k+1} = Ω_k W_k + Λ_k` (graphs) with `Ω_k` built on `θ W_0`; the multigraph
//! version swaps `Ω_k` for `θ² + 2 (θ W_0) θ`. Each step is inverted exactly and checked
//! against the exponential-formula counts at the two smallest non-trivial sizes.

use num_bigint::BigInt;

use crate::census::closed::{catalogue, ClosedForm};
use crate::error::{Error, Result};
use crate::oracle::counts::connected_counts;
use crate::series::Rational;
use crate::xring::{lambda_sum, Pin, XExpr};
use crate::Model;

/// Smallest `n` carrying a connected graph of excess `k` in the model.
pub fn first_size(model: Model, excess: i64) -> usize {
    match model {
        Model::Multigraph => 1,
        Model::Graph => (1..).find(|&n: &usize| (n * n.saturating_sub(1) / 2) as i64 >= n as i64 + excess).expect("unbounded"),
    }
}

/// Right side of `Δ_{k+1} W_{k+1} = ...` given `W_0..=W_k`.
pub fn recurrence_rhs(model: Model, ws: &[XExpr]) -> Result<XExpr> {
    let k = ws.len() as i64 - 1;
    if k < 0 {
        return Err(Error::OutOfRange("need at least the unicyclic term".into()));
    }
    let base = ws[0].theta();
    let rhs = if k == 0 {
        let mut out = base.theta().add(&base.mul(&base)?);
        if model == Model::Graph {
            out = out.sub(&base.scale(&Rational::from_integer(BigInt::from(3))));
        }
        out
    } else {
        let lifted = match model {
            Model::Graph => ws[k as usize].omega(k, &base)?,
            Model::Multigraph => ws[k as usize].omega_multigraph(&base)?,
        };
        lifted.add(&lambda_sum(&ws[1..k as usize])?.with_excess(k))
    };
    Ok(rhs.with_excess(k + 1))
}

/// `W_0, W_1, ..., W_kmax` for the model; `W_0` is the unicyclic closed form.
pub fn compute_wk(kmax: usize, model: Model) -> Result<Vec<XExpr>> {
    if kmax < 1 {
        return Err(Error::OutOfRange("kmax must be at least 1".into()));
    }
    let largest_pin = first_size(model, kmax as i64) + 1;
    let oracle = connected_counts(model, largest_pin, kmax as i64)?;
    let unicyclic = match model {
        Model::Graph => ClosedForm::Unicyclic,
        Model::Multigraph => ClosedForm::UnicyclicMultigraph,
    };
    let mut ws = vec![catalogue(unicyclic)];
    for k in 1..=kmax as i64 {
        let rhs = recurrence_rhs(model, &ws)?;
        let n = first_size(model, k);
        let pins: Vec<Pin> = [n, n + 1].iter().map(|&n| Pin { n, value: oracle.get(n, k) }).collect();
        ws.push(rhs.delta_invert(k, &pins)?);
    }
    Ok(ws)
}

/// `n₀(k) = 3/2 + √(2k + 9/4)`: below it no connected graph of excess `k` exists.
pub fn vanishing_threshold(excess: i64) -> f64 {
    1.5 + (2.0 * excess as f64 + 2.25).sqrt()
}
