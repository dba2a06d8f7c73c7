//! Laurent polynomials in `X = 1 - T(z)` with an optional `ln(1/X)` term.
//!
//! A term `c * X^{-t}` is stored under key `t`; negative keys are positive powers
//! of `X`, which is how polynomial-in-`T` content is carried. The excess tag records
//! the edges-minus-vertices value of the family so that the bivariate form
//! `w^k F(wz)` can be recovered and edge pointing becomes `excess + theta`.
//!
//! The same representation doubles as the "smooth" form of a family: read `X` as
//! `1 - z` instead of `1 - T(z)`. Substituting `z -> T` is then the identity on the
//! stored data, and pointing in the smooth world is [`XExpr::t_pointing`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::series::{binomial, cayley_tree_series, tree_log_count, tree_polynomial, Rational, Series};

#[derive(Clone, PartialEq, Eq)]
pub struct XExpr {
    terms: BTreeMap<i64, Rational>,
    log_coeff: Rational,
    excess: i64,
}

/// An exact value the inverse of the difference operator must reproduce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pin {
    pub n: usize,
    pub value: Rational,
}

fn r(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

impl XExpr {
    pub fn zero(excess: i64) -> Self {
        XExpr { terms: BTreeMap::new(), log_coeff: Rational::zero(), excess }
    }

    pub fn constant(value: Rational, excess: i64) -> Self {
        Self::monomial(0, value, excess)
    }

    /// `coeff * X^{-t}`.
    pub fn monomial(t: i64, coeff: Rational, excess: i64) -> Self {
        let mut out = Self::zero(excess);
        out.add_term(t, coeff);
        out
    }

    /// `coeff * ln(1/X)`.
    pub fn log_term(coeff: Rational, excess: i64) -> Self {
        XExpr { terms: BTreeMap::new(), log_coeff: coeff, excess }
    }

    /// `T^j = (1 - X)^j` expanded in the basis.
    pub fn t_power(j: u32, excess: i64) -> Self {
        let mut out = Self::zero(excess);
        for i in 0..=j {
            let mut c = Rational::from_integer(binomial(j as u64, i as u64));
            if i % 2 == 1 {
                c = -c;
            }
            out.add_term(-(i as i64), c);
        }
        out
    }

    /// `Σ_j coeffs[j] T^j`.
    pub fn from_t_poly(coeffs: &[Rational], excess: i64) -> Self {
        let mut out = Self::zero(excess);
        for (j, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&Self::t_power(j as u32, excess).scale(c));
            }
        }
        out
    }

    /// Convenience for integer-coefficient polynomials in `T` over `denom * X^{pole}`.
    pub fn rational_in_t(numer: &[i64], denom: i64, pole: i64, excess: i64) -> Self {
        let coeffs: Vec<Rational> = numer.iter().map(|&c| Rational::new(BigInt::from(c), BigInt::from(denom))).collect();
        Self::from_t_poly(&coeffs, excess).over_x(pole).expect("no logarithm")
    }

    fn add_term(&mut self, t: i64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(t).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, Rational> {
        &self.terms
    }

    /// Coefficient of `X^{-t}`.
    pub fn coeff(&self, t: i64) -> Rational {
        self.terms.get(&t).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn log_coeff(&self) -> &Rational {
        &self.log_coeff
    }

    pub fn excess(&self) -> i64 {
        self.excess
    }

    pub fn with_excess(mut self, excess: i64) -> Self {
        self.excess = excess;
        self
    }

    pub fn has_log(&self) -> bool {
        !self.log_coeff.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.log_coeff.is_zero()
    }

    /// Largest `t` with a nonzero coefficient of `X^{-t}`.
    pub fn top_power(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn bottom_power(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn add(&self, other: &XExpr) -> XExpr {
        let mut out = self.clone();
        for (&t, c) in &other.terms {
            out.add_term(t, c.clone());
        }
        out.log_coeff += &other.log_coeff;
        out
    }

    pub fn sub(&self, other: &XExpr) -> XExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> XExpr {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, factor: &Rational) -> XExpr {
        if factor.is_zero() {
            return XExpr::zero(self.excess);
        }
        XExpr {
            terms: self.terms.iter().map(|(&t, c)| (t, c * factor)).collect(),
            log_coeff: &self.log_coeff * factor,
            excess: self.excess,
        }
    }

    /// Product in the ring; a logarithm may only meet a constant.
    pub fn mul(&self, other: &XExpr) -> Result<XExpr> {
        if self.has_log() || other.has_log() {
            let (with_log, plain) = if self.has_log() { (self, other) } else { (other, self) };
            if with_log.has_log() && plain.has_log() {
                return Err(Error::LogProduct);
            }
            let is_constant = plain.terms.keys().all(|&t| t == 0);
            if !is_constant {
                return Err(Error::LogProduct);
            }
            return Ok(with_log.scale(&plain.coeff(0)).with_excess(self.excess));
        }
        let mut out = XExpr::zero(self.excess);
        for (&t1, c1) in &self.terms {
            for (&t2, c2) in &other.terms {
                out.add_term(t1 + t2, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exponent: u32) -> Result<XExpr> {
        let mut out = XExpr::constant(Rational::one(), self.excess);
        for _ in 0..exponent {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Multiplies by `X^{-j}`.
    pub fn over_x(&self, j: i64) -> Result<XExpr> {
        if self.has_log() {
            return Err(Error::UnexpectedLog);
        }
        Ok(XExpr {
            terms: self.terms.iter().map(|(&t, c)| (t + j, c.clone())).collect(),
            log_coeff: Rational::zero(),
            excess: self.excess,
        })
    }

    /// Exact division by `T = 1 - X`.
    pub fn div_t(&self) -> Result<XExpr> {
        if self.has_log() {
            return Err(Error::UnexpectedLog);
        }
        // In powers X^j (j = -t): a_j = q_j - q_{j-1}, so q_j is a running sum from the bottom.
        let mut quotient = XExpr::zero(self.excess);
        if let (Some(lo), Some(hi)) = (self.bottom_power(), self.top_power()) {
            let mut running = Rational::zero();
            for t in (lo..=hi).rev() {
                running += self.coeff(t);
                if t > lo {
                    quotient.add_term(t, running.clone());
                }
            }
            if !running.is_zero() {
                return Err(Error::NotDivisibleByT);
            }
        }
        Ok(quotient)
    }

    /// `T d/dT`, equivalently `z d/dz` read in the smooth world.
    pub fn t_pointing(&self) -> XExpr {
        let mut out = XExpr::zero(self.excess);
        for (&t, c) in &self.terms {
            let scaled = c * r(t);
            out.add_term(t + 1, scaled.clone());
            out.add_term(t, -scaled);
        }
        if self.has_log() {
            out.add_term(1, self.log_coeff.clone());
            out.add_term(0, -self.log_coeff.clone());
        }
        out
    }

    /// Vertex pointing `z d/dz` in the `T` world: `X^{-t} -> t T X^{-t-2}`, `ln(1/X) -> T X^{-2}`.
    pub fn theta(&self) -> XExpr {
        self.t_pointing().over_x(1).expect("pointing removes the logarithm")
    }

    /// Edge pointing `w d/dw` on `w^k F(wz)`, i.e. `k + theta`.
    pub fn theta_w(&self) -> XExpr {
        self.theta().add(&self.scale(&r(self.excess)))
    }

    /// `Δ_k F = 2(k + T d/dT) F`, monomial rule `Δ_k X^{-t} = 2t X^{-t-1} + 2(k-t) X^{-t}`.
    pub fn delta(&self, k: i64) -> Result<XExpr> {
        if self.has_log() {
            return Err(Error::UnexpectedLog);
        }
        Ok(self.scale(&r(k)).add(&self.t_pointing()).scale(&r(2)))
    }

    /// Solves `Δ_k W = self` and checks the result against the pins.
    ///
    /// For `k >= 1` the operator is injective on this ring, so the solution is unique when
    /// it exists; pins act as an independent check on the whole pipeline.
    pub fn delta_invert(&self, k: i64, pins: &[Pin]) -> Result<XExpr> {
        if k < 1 {
            return Err(Error::OutOfRange(format!("difference operator index must be >= 1, got {k}")));
        }
        if self.has_log() {
            return Err(Error::UnexpectedLog);
        }
        // Equation at index s: R_s = 2(k - s) w_s + 2(s - 1) w_{s-1}.
        let mut solution = XExpr::zero(self.excess);
        if let (Some(lo), Some(hi)) = (self.bottom_power(), self.top_power()) {
            let mut upper = Rational::zero();
            for s in (2..=hi).rev() {
                let value = (self.coeff(s) - r(2 * (k - s)) * &upper) / r(2 * (s - 1));
                solution.add_term(s - 1, value.clone());
                upper = value;
            }
            let mut lower = Rational::zero();
            for s in lo..=0 {
                let value = (self.coeff(s) - r(2 * (s - 1)) * &lower) / r(2 * (k - s));
                solution.add_term(s, value.clone());
                lower = value;
            }
        }
        if solution.delta(k)? != self.clone().with_excess(solution.excess) {
            return Err(Error::NotInImage(k));
        }
        for pin in pins {
            let found = solution.count(pin.n);
            if found != pin.value {
                return Err(Error::PinInconsistent {
                    n: pin.n,
                    expected: pin.value.to_string(),
                    found: found.to_string(),
                });
            }
        }
        Ok(solution)
    }

    /// `Ω_k F = (θ² - 3θ - 2k) F + 2 (base_pointed) θF` for the simple-graph recurrence.
    pub fn omega(&self, k: i64, base_pointed: &XExpr) -> Result<XExpr> {
        if self.has_log() || base_pointed.has_log() {
            return Err(Error::UnexpectedLog);
        }
        let pointed = self.theta();
        let mut out = pointed.theta().sub(&pointed.scale(&r(3))).sub(&self.scale(&r(2 * k)));
        out = out.add(&base_pointed.mul(&pointed)?.scale(&r(2)));
        Ok(out.with_excess(self.excess))
    }

    /// Multigraph analogue: `θ² F + 2 (base_pointed) θF`.
    pub fn omega_multigraph(&self, base_pointed: &XExpr) -> Result<XExpr> {
        if self.has_log() || base_pointed.has_log() {
            return Err(Error::UnexpectedLog);
        }
        let pointed = self.theta();
        let out = pointed.theta().add(&base_pointed.mul(&pointed)?.scale(&r(2)));
        Ok(out.with_excess(self.excess))
    }

    /// Coefficients in the tree-polynomial basis, highest index first: the count at size `n`
    /// is `Σ a_t t_n(t)` (plus the logarithmic part).
    pub fn tree_basis(&self) -> Vec<(i64, Rational)> {
        self.terms.iter().rev().map(|(&t, c)| (t, c.clone())).collect()
    }

    /// `n! [z^n]` of the expression, through tree polynomials.
    pub fn count(&self, n: usize) -> Rational {
        let mut total = Rational::zero();
        for (&t, c) in &self.terms {
            total += c * Rational::from_integer(tree_polynomial(n, t));
        }
        if self.has_log() {
            total += &self.log_coeff * Rational::from_integer(tree_log_count(n));
        }
        total
    }

    /// Evaluation to a truncated series through powers of `1 - T` and `ln M`.
    pub fn eval(&self, order: usize) -> Series {
        let x = Series::one(order).sub(&cayley_tree_series(order));
        let m = x.inverse().expect("1 - T is invertible");
        let mut out = Series::zero(order);
        if let (Some(lo), Some(hi)) = (self.bottom_power(), self.top_power()) {
            let mut power = Series::one(order);
            for t in 0..=hi.max(0) {
                if t >= lo {
                    out = out.add(&power.scale(&self.coeff(t)));
                }
                power = power.mul(&m);
            }
            let mut power = x.clone();
            for t in (lo.min(0)..0).rev() {
                out = out.add(&power.scale(&self.coeff(t)));
                power = power.mul(&x);
            }
        }
        if self.has_log() {
            out = out.add(&m.log().expect("M has constant term 1").scale(&self.log_coeff));
        }
        out
    }

    /// Coefficients of `X^{-3k}` and `X^{-3k+1}` of a `(k+1)`-cyclic family.
    pub fn leading_coefficients(&self, k: i64) -> Result<(Rational, Rational)> {
        if let Some(top) = self.top_power() {
            if top > 3 * k {
                return Err(Error::OutOfRange(format!("term X^-{top} above X^-{}", 3 * k)));
            }
        }
        if self.has_log() {
            return Err(Error::UnexpectedLog);
        }
        Ok((self.coeff(3 * k), self.coeff(3 * k - 1)))
    }
}

impl fmt::Display for XExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&t, c)| match t {
                0 => c.to_string(),
                _ => format!("{c}*X^{}", -t),
            })
            .collect();
        if self.has_log() {
            parts.push(format!("{}*ln(1/X)", self.log_coeff));
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

impl fmt::Debug for XExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XExpr[k={}]({self})", self.excess)
    }
}

/// `Λ_k = Σ_{t=1}^{k-1} (θ W_t)(θ W_{k-t})` where `ws[t-1]` is `W_t`.
pub fn lambda_sum(ws: &[XExpr]) -> Result<XExpr> {
    let k = ws.len() as i64 + 1;
    for (i, w) in ws.iter().enumerate() {
        if w.excess() != i as i64 + 1 {
            return Err(Error::ExcessMismatch(format!("entry {} has excess {}", i + 1, w.excess())));
        }
        if w.has_log() {
            return Err(Error::UnexpectedLog);
        }
    }
    let pointed: Vec<XExpr> = ws.iter().map(XExpr::theta).collect();
    let mut out = XExpr::zero(k);
    for t in 1..k {
        let term = pointed[(t - 1) as usize].mul(&pointed[(k - t - 1) as usize])?;
        out = out.add(&term);
    }
    Ok(out.with_excess(k))
}

/// A small configuration glued onto a family, in smooth form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attachment {
    pub egf: XExpr,
    pub two_connected: bool,
}

/// Result of a composition; `exact` is false when only an upper bound is guaranteed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composition {
    pub expr: XExpr,
    pub exact: bool,
}

/// Gluing by a shared vertex, optionally through a path: `[1/z (1/(1-z))? (zF')(zH')]` at `z = T`.
pub fn compose_serial(smooth: &XExpr, attachment: &Attachment, with_path: bool) -> Result<Composition> {
    let mut product = smooth.t_pointing().mul(&attachment.egf.t_pointing())?;
    if with_path {
        product = product.over_x(1)?;
    }
    let expr = product.div_t()?.with_excess(smooth.excess() + attachment.egf.excess() + 1);
    Ok(Composition { expr, exact: attachment.two_connected })
}

/// Gluing along a shared edge: `[2/(wz²) (w∂_w F)(w∂_w H)]` at `wz = T`.
pub fn compose_parallel(smooth: &XExpr, attachment: &Attachment) -> Result<Composition> {
    let edge_pointed = |e: &XExpr| e.t_pointing().add(&e.scale(&r(e.excess())));
    let product = edge_pointed(smooth).mul(&edge_pointed(&attachment.egf))?.scale(&r(2));
    let expr = product.div_t()?.div_t()?.with_excess(smooth.excess() + attachment.egf.excess() + 1);
    Ok(Composition { expr, exact: attachment.two_connected })
}

impl XExpr {
    /// Expansion back into a polynomial in `T` over `X^{pole}`: returns the numerator
    /// coefficients of `self * X^{pole}` as a polynomial in `T`, if it has no negative-`t` tail
    /// beyond what such a numerator can carry.
    pub fn numerator_in_t(&self, pole: i64) -> Result<Vec<Rational>> {
        let shifted = self.over_x(-pole)?;
        if let Some(top) = shifted.top_power() {
            if top > 0 {
                return Err(Error::OutOfRange(format!("pole of order {} exceeds {pole}", top + pole)));
            }
        }
        // Σ_j a_j X^j with X = 1 - T: coefficient of T^i is Σ_j a_j C(j, i) (-1)^i.
        let degree = shifted.bottom_power().map(|b| -b).unwrap_or(0).max(0) as usize;
        let mut coeffs = vec![Rational::zero(); degree + 1];
        for (&t, c) in &shifted.terms {
            let j = (-t) as u64;
            for (i, slot) in coeffs.iter_mut().enumerate().take(j as usize + 1) {
                let mut term = c * Rational::from_integer(binomial(j, i as u64));
                if i % 2 == 1 {
                    term = -term;
                }
                *slot += term;
            }
        }
        while coeffs.len() > 1 && coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        Ok(coeffs)
    }

    /// True when every count `n! [z^n]` for `n <= order` is a nonnegative integer.
    pub fn counts_are_natural(&self, order: usize) -> bool {
        (0..=order).all(|n| {
            let c = self.count(n);
            c.is_integer() && !c.is_negative()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    fn x(t: i64, c: Rational) -> XExpr {
        XExpr::monomial(t, c, 0)
    }

    #[test]
    fn basis_round_trip() {
        for j in 0..=20u32 {
            let expr = XExpr::t_power(j, 0);
            let numer = expr.numerator_in_t(0).unwrap();
            let mut expected = vec![Rational::zero(); j as usize + 1];
            expected[j as usize] = Rational::one();
            assert_eq!(numer, expected);
        }
    }

    #[test]
    fn theta_of_constant_vanishes() {
        assert!(XExpr::constant(rat(3, 2), 0).theta().is_zero());
    }

    #[test]
    fn theta_of_triangle_free_unicyclic() {
        let unicyclic = XExpr::log_term(rat(1, 2), 0).sub(&XExpr::from_t_poly(
            &[int0(), rat(1, 2), rat(1, 4), rat(1, 6)],
            0,
        ));
        let expected = XExpr::rational_in_t(&[0, 0, 0, 0, 1], 2, 2, 0);
        assert_eq!(unicyclic.theta(), expected);
    }

    fn int0() -> Rational {
        Rational::zero()
    }

    #[test]
    fn delta_monomials() {
        assert_eq!(XExpr::constant(Rational::one(), 0).delta(4).unwrap(), XExpr::constant(r(8), 0));
        let expected = x(3, r(4)).add(&x(2, r(2)));
        assert_eq!(x(2, Rational::one()).delta(3).unwrap(), expected);
    }

    #[test]
    fn delta_has_trivial_kernel() {
        // T^k is not annihilated; Δ_k T^k = 4k T^k
        for k in 1..=8 {
            let tk = XExpr::t_power(k as u32, 0);
            assert_eq!(tk.delta(k).unwrap(), tk.scale(&r(4 * k)));
        }
    }

    #[test]
    fn division_by_t() {
        let t3 = XExpr::t_power(3, 0);
        assert_eq!(t3.div_t().unwrap(), XExpr::t_power(2, 0));
        let mixed = x(4, r(1)).sub(&x(3, r(1)));
        // X^-4 - X^-3 = T X^-4
        assert_eq!(mixed.div_t().unwrap(), x(4, r(1)));
        assert_eq!(x(2, r(1)).div_t(), Err(Error::NotDivisibleByT));
    }

    #[test]
    fn lambda_small_cases() {
        let w1 = XExpr::rational_in_t(&[0, 0, 0, 0, 6, -1], 24, 3, 1);
        assert!(lambda_sum(&[]).unwrap().is_zero());
        let pointed = w1.theta();
        assert_eq!(lambda_sum(&[w1.clone()]).unwrap(), pointed.mul(&pointed).unwrap().with_excess(2));
        let w2 = x(6, rat(5, 16)).with_excess(2);
        let expected = pointed.mul(&w2.theta()).unwrap().scale(&r(2)).with_excess(3);
        assert_eq!(lambda_sum(&[w1, w2]).unwrap(), expected);
        assert!(matches!(lambda_sum(&[x(1, r(1))]), Err(Error::ExcessMismatch(_))));
    }

    #[test]
    fn omega_triangle_free_monomial_rule() {
        let base_pointed = XExpr::rational_in_t(&[0, 0, 0, 0, 1], 2, 2, 0);
        for k in 1..=3 {
            for t in -2..=5i64 {
                let got = x(t, r(1)).omega(k, &base_pointed).unwrap();
                let expected = [
                    (t + 4, t * (t + 3)),
                    (t + 3, -t * (2 * t + 8)),
                    (t + 2, t * (t + 8)),
                    (t + 1, -7 * t),
                    (t, 5 * t - 2 * k),
                    (t - 1, -t),
                ]
                .iter()
                .fold(XExpr::zero(0), |acc, &(p, c)| acc.add(&x(p, r(c))));
                assert_eq!(got, expected, "k={k} t={t}");
            }
        }
        assert_eq!(XExpr::constant(r(1), 0).omega(5, &base_pointed).unwrap(), XExpr::constant(r(-10), 0));
    }

    #[test]
    fn delta_inverse_recovers_input() {
        let e = x(5, rat(3, 7)).add(&x(2, r(-2))).add(&x(-1, rat(1, 3))).with_excess(3);
        let image = e.delta(3).unwrap();
        let pin = Pin { n: 5, value: e.count(5) };
        assert_eq!(image.delta_invert(3, &[pin.clone()]).unwrap(), e);
        let bad = Pin { n: 5, value: pin.value + r(1) };
        assert!(matches!(image.delta_invert(3, &[bad]), Err(Error::PinInconsistent { .. })));
    }

    #[test]
    fn delta_inverse_rejects_non_image() {
        // index s = k has no w_k contribution, so a lone X^{-k} term with k > 1 is unreachable
        // unless it comes with the matching X^{-(k-1)} partner
        let rhs = x(3, r(1)).with_excess(3);
        assert_eq!(rhs.delta_invert(3, &[]), Err(Error::NotInImage(3)));
    }

    #[test]
    fn eval_matches_counts() {
        let e = x(3, rat(5, 24)).add(&x(-2, r(3))).add(&XExpr::log_term(rat(1, 2), 0));
        let series = e.eval(15);
        for n in 0..=15 {
            assert_eq!(series.count(n), e.count(n));
        }
    }

    #[test]
    fn unrooted_tree_counts() {
        let trees = XExpr::from_t_poly(&[Rational::zero(), r(1), rat(-1, 2)], -1);
        assert_eq!(trees.count(4), r(16));
        assert_eq!(trees.theta(), XExpr::t_power(1, -1));
        let m = x(1, r(1));
        assert_eq!(m.count(3), r(27));
    }

    #[test]
    fn degenerate_compositions() {
        let vertex = Attachment { egf: XExpr::t_power(1, -1), two_connected: true };
        let serial = compose_serial(&vertex.egf, &vertex, false).unwrap();
        assert_eq!(serial.expr, XExpr::t_power(1, -1));
        let edge = Attachment { egf: XExpr::t_power(2, -1).scale(&rat(1, 2)), two_connected: true };
        let parallel = compose_parallel(&edge.egf, &edge).unwrap();
        assert_eq!(parallel.expr, edge.egf);
    }

    #[test]
    fn log_products_are_rejected() {
        let log = XExpr::log_term(r(1), 0);
        assert_eq!(log.mul(&log), Err(Error::LogProduct));
        assert_eq!(log.mul(&x(1, r(1))), Err(Error::LogProduct));
        assert_eq!(log.mul(&XExpr::constant(r(2), 0)).unwrap(), XExpr::log_term(r(2), 0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_expr() -> impl Strategy<Value = XExpr> {
            (proptest::collection::btree_map(-4i64..=6, -9i64..=9, 0..5), -3i64..=3).prop_map(|(terms, log)| {
                let mut e = XExpr::log_term(rat(log, 2), 0);
                for (t, c) in terms {
                    e = e.add(&x(t, r(c)));
                }
                e
            })
        }

        proptest! {
            #[test]
            fn theta_commutes_with_evaluation(e in small_expr()) {
                prop_assert_eq!(e.theta().eval(10), e.eval(10).theta());
            }

            #[test]
            fn delta_inverse_is_left_inverse(e in small_expr(), k in 1i64..6) {
                let plain = XExpr { log_coeff: Rational::zero(), ..e };
                let image = plain.delta(k).unwrap();
                prop_assert_eq!(image.delta_invert(k, &[]).unwrap(), plain);
            }

            #[test]
            fn multiplication_matches_series(a in small_expr(), b in small_expr()) {
                let a = XExpr { log_coeff: Rational::zero(), ..a };
                let b = XExpr { log_coeff: Rational::zero(), ..b };
                prop_assert_eq!(a.mul(&b).unwrap().eval(9), a.eval(9).mul(&b.eval(9)));
            }
        }
    }
}
