//! Coefficientwise inequality suites for triangle-free families.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::census::constants::wright_constants;
use crate::census::residual::family_level;
use crate::census::wright::{compute_wk, vanishing_threshold};
use crate::census::ForbiddenSet;
use crate::error::{Error, Result};
use crate::series::{rat, rational_to_f64, x_power_series, Rational, Series};
use crate::Model;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InequalityKind {
    /// `b_k t_n(3k) - c'_k t_n(3k-1) ≤ n![zⁿ] W_{k,C3} ≤ b_k t_n(3k)`.
    Wright,
    /// `S_{k+1,C3} ⪯ (3/2 + ε) k b_k X^{-(3k+2)}`.
    SBound,
    /// `J_{k+1,C3} ⪯ (6 + ε)(k-1) b_{k-1} X^{-(3k-1)}`, `k ≥ 2`.
    JBound,
    /// `k b_k ≤ c'^ξ_k ≤ ((19+6r)/5) k b_k` for every index up to `k`.
    Constants,
    /// `[zⁿ] W_k = 0` below `n₀(k)`.
    Vanishing,
}

impl InequalityKind {
    pub fn name(self) -> &'static str {
        match self {
            InequalityKind::Wright => "wright",
            InequalityKind::SBound => "sbound",
            InequalityKind::JBound => "jbound",
            InequalityKind::Constants => "constants",
            InequalityKind::Vanishing => "vanishing",
        }
    }
}

impl FromStr for InequalityKind {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "wright" => Ok(InequalityKind::Wright),
            "sbound" => Ok(InequalityKind::SBound),
            "jbound" => Ok(InequalityKind::JBound),
            "constants" => Ok(InequalityKind::Constants),
            "vanishing" => Ok(InequalityKind::Vanishing),
            other => Err(Error::Parse(format!("unknown inequality '{other}'"))),
        }
    }
}

impl fmt::Display for InequalityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of a coefficientwise check. `checked` counts the indices compared (sizes `n` for
/// series checks, constant indices for the band).
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub kind: InequalityKind,
    pub k: i64,
    pub order: usize,
    pub holds: bool,
    pub checked: usize,
    pub first_violation: Option<usize>,
    /// Smallest ε making the bound hold up to `order` (bound checks only).
    pub minimal_epsilon: Option<f64>,
}

/// Parameters not shared by every check.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckParams {
    pub epsilon: Rational,
    /// Number of forbidden polygons for the constants band.
    pub polygons: u32,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams { epsilon: rat(1, 2), polygons: 1 }
    }
}

fn triangle_level(excess: i64) -> Result<crate::census::residual::FamilyLevel> {
    family_level(excess, &ForbiddenSet::triangle(), Model::Graph)
}

/// Compares `lower ≤ value ≤ upper` coefficientwise; `None` bounds are skipped.
fn compare(value: &Series, lower: Option<&Series>, upper: Option<&Series>, order: usize) -> (bool, Option<usize>) {
    for n in 0..=order {
        let v = value.coeff(n);
        let below = lower.is_some_and(|low| low.coeff(n) > v);
        let above = upper.is_some_and(|up| up.coeff(n) < v);
        if below || above {
            return (false, Some(n));
        }
    }
    (true, None)
}

/// Smallest `factor` with `value ⪯ factor · shape` on `0..=order`.
fn minimal_factor(value: &Series, shape: &Series, order: usize) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    for n in 0..=order {
        let v = value.coeff(n);
        let s = shape.coeff(n);
        if s.is_zero() {
            if v.is_positive() {
                return None;
            }
            continue;
        }
        let ratio = v / s;
        if best.as_ref().map_or(true, |b| &ratio > b) {
            best = Some(ratio);
        }
    }
    best
}

fn bound_report(kind: InequalityKind, k: i64, order: usize, value: &Series, shape: &Series, base: Rational, offset: Rational, epsilon: &Rational) -> InequalityReport {
    let bound = shape.scale(&((offset.clone() + epsilon) * &base));
    let (holds, first_violation) = compare(value, None, Some(&bound), order);
    let minimal_epsilon = minimal_factor(value, shape, order).map(|factor| rational_to_f64(&(factor / base - offset)));
    InequalityReport { kind, k, order, holds, checked: order + 1, first_violation, minimal_epsilon }
}

/// Runs one inequality suite up to size `order`.
pub fn inequality_check(kind: InequalityKind, k: i64, order: usize, params: &CheckParams) -> Result<InequalityReport> {
    if k < 1 {
        return Err(Error::OutOfRange("inequality checks start at k = 1".into()));
    }
    match kind {
        InequalityKind::Wright => {
            let table = wright_constants(k as usize, 1)?;
            let value = triangle_level(k)?.free.eval(order);
            let upper = x_power_series(3 * k, order).scale(&table.b[k as usize]);
            let lower = upper.sub(&x_power_series(3 * k - 1, order).scale(&table.cprime[k as usize]));
            let (holds, first_violation) = compare(&value, Some(&lower), Some(&upper), order);
            Ok(InequalityReport { kind, k, order, holds, checked: order + 1, first_violation, minimal_epsilon: None })
        }
        InequalityKind::SBound => {
            let table = wright_constants(k as usize, 1)?;
            let value = triangle_level(k + 1)?.solo.scale(&rat(1, 3)).eval(order);
            let shape = x_power_series(3 * k + 2, order);
            let base = rat(k, 1) * &table.b[k as usize];
            Ok(bound_report(kind, k, order, &value, &shape, base, rat(3, 2), &params.epsilon))
        }
        InequalityKind::JBound => {
            if k < 2 {
                return Err(Error::OutOfRange("the juxtaposition bound starts at k = 2".into()));
            }
            let table = wright_constants(k as usize, 1)?;
            let value = triangle_level(k + 1)?.juxta.eval(order);
            let shape = x_power_series(3 * k - 1, order);
            let base = rat(k - 1, 1) * &table.b[(k - 1) as usize];
            Ok(bound_report(kind, k, order, &value, &shape, base, rat(6, 1), &params.epsilon))
        }
        InequalityKind::Constants => {
            let table = wright_constants(k as usize, params.polygons)?;
            let first_violation = (1..=k as usize).find(|&index| {
                let (low, high) = table.band(index);
                table.cprime_xi[index] < low || table.cprime_xi[index] > high
            });
            Ok(InequalityReport {
                kind,
                k,
                order: k as usize,
                holds: first_violation.is_none(),
                checked: k as usize,
                first_violation,
                minimal_epsilon: None,
            })
        }
        InequalityKind::Vanishing => {
            let ws = compute_wk(k as usize, Model::Graph)?;
            let threshold = vanishing_threshold(k);
            let first_violation = (0..=order).take_while(|&n| (n as f64) < threshold).find(|&n| !ws[k as usize].count(n).is_zero());
            let checked = (0..=order).take_while(|&n| (n as f64) < threshold).count();
            Ok(InequalityReport { kind, k, order, holds: first_violation.is_none(), checked, first_violation, minimal_epsilon: None })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(kind: InequalityKind, k: i64, order: usize) -> InequalityReport {
        inequality_check(kind, k, order, &CheckParams::default()).unwrap()
    }

    #[test]
    fn wright_inequalities_hold() {
        for k in 1..=2 {
            let report = run(InequalityKind::Wright, k, 40);
            assert!(report.holds, "{report:?}");
        }
    }

    #[test]
    fn solo_bound_for_tricyclic_is_five_twelfths() {
        let report = run(InequalityKind::SBound, 1, 40);
        assert!(report.holds, "{report:?}");
        assert!(report.minimal_epsilon.unwrap() <= 0.5 + 1e-12);
    }

    #[test]
    fn juxtaposition_bound_at_k2() {
        let report = run(InequalityKind::JBound, 2, 40);
        assert!(report.holds, "{report:?}");
        assert!(run(InequalityKind::JBound, 2, 10).minimal_epsilon.is_some());
    }

    #[test]
    fn tight_epsilon_exposes_violation() {
        let strict = CheckParams { epsilon: rat(-3, 2), polygons: 1 };
        let report = inequality_check(InequalityKind::SBound, 1, 40, &strict).unwrap();
        assert!(!report.holds);
        assert!(report.first_violation.is_some());
    }

    #[test]
    fn constants_band_and_vanishing() {
        for r in 0..=3 {
            let params = CheckParams { polygons: r, ..CheckParams::default() };
            assert!(inequality_check(InequalityKind::Constants, 12, 0, &params).unwrap().holds);
        }
        for k in 1..=6 {
            assert!(run(InequalityKind::Vanishing, k, 20).holds);
        }
        assert_eq!("jbound".parse::<InequalityKind>().unwrap(), InequalityKind::JBound);
    }
}
