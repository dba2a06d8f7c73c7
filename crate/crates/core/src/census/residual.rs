//! Series-level residuals of the forbidden-subgraph functional equation.
//!
//! Univariate form for excess `k`:
//! `(k+1+θ) W_{k+1} + Σ_H e(H) S_{k+1,H} + J_{k+1}
//!   = ((θ²-θ)/2 - k - θ) W_k + Σ_{-1 ≤ p ≤ q, p+q=k} (θW_p)(θW_q) / (1+δ_pq)`
//! with `θ²/2` replacing the first operator for multigraphs.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::census::closed::{catalogue, closed_form, ClosedForm};
use crate::census::wright::compute_wk;
use crate::census::ForbiddenSet;
use crate::error::{Error, Result};
use crate::oracle::kernel::{kernel_census, KernelPart};
use crate::series::{rat, Rational, Series};
use crate::xring::XExpr;
use crate::Model;

/// One excess level of a forbidden family: ξ-free graphs, exactly one copy (weighted by the
/// copy's edge count), and juxtapositions (weighted by shared edges).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyLevel {
    pub free: XExpr,
    pub solo: XExpr,
    pub juxta: XExpr,
}

fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Exact EGFs for excess `k ≥ 1`. Triangle-free graphs use the catalogue for `k ≤ 2`;
/// everything else with polygon constraints comes from the kernel census (`k ≤ 3`).
pub fn family_level(excess: i64, forbidden: &ForbiddenSet, model: Model) -> Result<FamilyLevel> {
    if excess < 1 {
        return Err(Error::OutOfRange("family levels start at excess 1".into()));
    }
    if !forbidden.others().is_empty() {
        return Err(Error::OutOfRange("only polygon constraints have exact families".into()));
    }
    if forbidden.is_empty() {
        let ws = compute_wk(excess as usize, model)?;
        let zero = XExpr::zero(excess);
        return Ok(FamilyLevel { free: ws[excess as usize].clone(), solo: zero.clone(), juxta: zero });
    }
    if model == Model::Graph && forbidden.is_triangle_only() && excess <= 2 {
        let (free, solo, juxta) = if excess == 1 {
            (ClosedForm::BicyclicTriangleFree, ClosedForm::BicyclicOneTriangle, ClosedForm::BicyclicJuxtaposed)
        } else {
            (ClosedForm::TricyclicTriangleFree, ClosedForm::TricyclicOneTriangle, ClosedForm::TricyclicJuxtaposed)
        };
        return Ok(FamilyLevel { free: catalogue(free), solo: catalogue(solo).scale(&int(3)), juxta: catalogue(juxta) });
    }
    let census = kernel_census(model, excess as usize, &forbidden.polygon_list())?;
    let mut solo = XExpr::zero(excess);
    for &p in forbidden.polygon_set() {
        solo = solo.add(&census.part(KernelPart::Solo(Some(p))).scale(&int(p as i64)));
    }
    Ok(FamilyLevel { free: census.part(KernelPart::Free), solo, juxta: census.part(KernelPart::Juxta) })
}

/// `W_{-1}, W_0, ..., W_{top}` of the ξ-free family.
pub fn free_family(top: i64, forbidden: &ForbiddenSet, model: Model) -> Result<Vec<XExpr>> {
    let unicyclic = match model {
        Model::Graph => ClosedForm::UnicyclicPolygonFree,
        Model::Multigraph => ClosedForm::UnicyclicPolygonFreeMultigraph,
    };
    let mut out = vec![catalogue(ClosedForm::Unrooted), closed_form(unicyclic, forbidden)?];
    if forbidden.is_empty() && top >= 1 {
        out.extend(compute_wk(top as usize, model)?.into_iter().skip(1));
        return Ok(out);
    }
    for excess in 1..=top {
        out.push(family_level(excess, forbidden, model)?.free);
    }
    Ok(out)
}

/// Left minus right side of the functional equation at excess `k`, evaluated to `order`.
pub fn recurrence_residual(k: i64, forbidden: &ForbiddenSet, model: Model, order: usize) -> Result<Series> {
    if k < 0 {
        return Err(Error::OutOfRange("k must be nonnegative".into()));
    }
    let family = free_family(k + 1, forbidden, model)?;
    let top = family_level(k + 1, forbidden, model)?;
    // family[p + 1] is W_p.
    let evals: Vec<Series> = family.iter().map(|w| w.eval(order)).collect();
    let pointed: Vec<Series> = evals.iter().map(Series::theta).collect();
    let w_next = &evals[(k + 2) as usize];
    let lhs = w_next
        .scale(&int(k + 1))
        .add(&pointed[(k + 2) as usize])
        .add(&top.solo.eval(order))
        .add(&top.juxta.eval(order));
    let w_k = &evals[(k + 1) as usize];
    let twice_pointed = pointed[(k + 1) as usize].theta();
    let mut rhs = match model {
        Model::Graph => twice_pointed
            .sub(&pointed[(k + 1) as usize])
            .scale(&rat(1, 2))
            .sub(&w_k.scale(&int(k)))
            .sub(&pointed[(k + 1) as usize]),
        Model::Multigraph => twice_pointed.scale(&rat(1, 2)),
    };
    let mut p = -1;
    while p <= k - p {
        let q = k - p;
        let mut term = pointed[(p + 1) as usize].mul(&pointed[(q + 1) as usize]);
        if p == q {
            term = term.scale(&rat(1, 2));
        }
        rhs = rhs.add(&term);
        p += 1;
    }
    Ok(lhs.sub(&rhs))
}

/// True when every coefficient of the residual vanishes.
pub fn residual_vanishes(k: i64, forbidden: &ForbiddenSet, model: Model, order: usize) -> Result<bool> {
    Ok(recurrence_residual(k, forbidden, model, order)?.coeffs().iter().all(Zero::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_free_residuals_vanish() {
        let triangle = ForbiddenSet::triangle();
        for k in 0..=1 {
            assert!(residual_vanishes(k, &triangle, Model::Graph, 25).unwrap(), "k={k}");
        }
    }

    #[test]
    fn plain_residuals_vanish() {
        for k in 0..=3 {
            assert!(residual_vanishes(k, &ForbiddenSet::none(), Model::Graph, 20).unwrap(), "k={k}");
            assert!(residual_vanishes(k, &ForbiddenSet::none(), Model::Multigraph, 20).unwrap(), "k={k}");
        }
    }

    #[test]
    fn polygon_sets_through_the_kernel_census() {
        let set = ForbiddenSet::polygons(&[3, 4]).unwrap();
        for k in 0..=2 {
            assert!(residual_vanishes(k, &set, Model::Graph, 18).unwrap(), "k={k}");
        }
    }

    #[test]
    fn wrong_juxtaposition_reading_breaks_the_identity() {
        // Counting every copy-carrying graph in J (instead of only those with two or more
        // copies) double counts the single-copy graphs.
        let triangle = ForbiddenSet::triangle();
        let residual = recurrence_residual(0, &triangle, Model::Graph, 12).unwrap();
        let extra = catalogue(ClosedForm::BicyclicOneTriangle).eval(12);
        assert!(residual.coeffs().iter().all(Zero::is_zero));
        assert!(!residual.add(&extra).coeffs().iter().all(Zero::is_zero));
    }
}
