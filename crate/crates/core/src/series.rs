//! Truncated power series with exact rational coefficients.
//!
//! Invariants:
//! - a `Series` of order `N` always holds exactly `N + 1` coefficients;
//! - binary operations truncate to the smaller of the two orders;
//! - nothing here ever rounds.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Natural log of a positive big integer, accurate to double precision.
pub fn ln_bigint(value: &BigInt) -> f64 {
    assert!(value.is_positive(), "ln of non-positive integer");
    let bits = value.bits();
    if bits <= 1000 {
        return value.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = value >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of |value| for a nonzero rational.
pub fn ln_abs_rational(value: &Rational) -> f64 {
    ln_bigint(&value.numer().abs()) - ln_bigint(value.denom())
}

/// Rational to f64 without overflowing on huge numerators and denominators.
pub fn rational_to_f64(value: &Rational) -> f64 {
    if value.is_zero() {
        return 0.0;
    }
    let magnitude = ln_abs_rational(value).exp();
    if value.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

/// A series `c_0 + c_1 z + ... + c_N z^N` truncated at order `N`.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "Series[{}]", terms.join(", "))
    }
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(value: Rational, order: usize) -> Self {
        let mut series = Self::zero(order);
        series.coeffs[0] = value;
        series
    }

    /// The monomial `coeff * z^power`, zero if the power exceeds the order.
    pub fn monomial(power: usize, coeff: Rational, order: usize) -> Self {
        let mut series = Self::zero(order);
        if power <= order {
            series.coeffs[power] = coeff;
        }
        series
    }

    /// Builds a series from coefficients, padding with zeros or truncating to `order`.
    pub fn from_coeffs(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        Series { coeffs }
    }

    /// Series whose coefficients are `counts[n] / n!`.
    pub fn from_counts(counts: &[Rational], order: usize) -> Self {
        let mut series = Self::zero(order);
        let mut fact = BigInt::one();
        for (n, count) in counts.iter().enumerate().take(order + 1) {
            if n > 0 {
                fact *= BigInt::from(n);
            }
            series.coeffs[n] = count / Rational::from_integer(fact.clone());
        }
        series
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn set_coeff(&mut self, n: usize, value: Rational) {
        self.coeffs[n] = value;
    }

    /// `n! [z^n]` of the series, the count of labelled structures on `n` vertices.
    pub fn count(&self, n: usize) -> Rational {
        &self.coeffs[n] * Rational::from_integer(factorial(n))
    }

    /// All counts `n! [z^n]` for `n = 0..=N`.
    pub fn counts(&self) -> Vec<Rational> {
        let mut fact = BigInt::one();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if n > 0 {
                    fact *= BigInt::from(n);
                }
                c * Rational::from_integer(fact.clone())
            })
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.clone(), order)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|n| &self.coeffs[n] + &other.coeffs[n]).collect();
        Series { coeffs }
    }

    pub fn sub(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|n| &self.coeffs[n] - &other.coeffs[n]).collect();
        Series { coeffs }
    }

    pub fn neg(&self) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, factor: &Rational) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    pub fn mul(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Series { coeffs }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Series> {
        if self.coeffs[0].is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let order = self.order();
        let lead_inv = self.coeffs[0].recip();
        let mut out = vec![Rational::zero(); order + 1];
        out[0] = lead_inv.clone();
        for n in 1..=order {
            let mut acc = Rational::zero();
            for i in 1..=n {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i] * &out[n - i];
                }
            }
            out[n] = -acc * &lead_inv;
        }
        Ok(Series { coeffs: out })
    }

    pub fn div(&self, other: &Series) -> Result<Series> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Integer power; negative exponents go through the inverse series.
    pub fn pow(&self, exponent: i64) -> Result<Series> {
        let base = if exponent < 0 { self.inverse()? } else { self.clone() };
        let mut remaining = exponent.unsigned_abs();
        let mut result = Series::one(self.order());
        let mut square = base;
        while remaining > 0 {
            if remaining & 1 == 1 {
                result = result.mul(&square);
            }
            remaining >>= 1;
            if remaining > 0 {
                square = square.mul(&square);
            }
        }
        Ok(result)
    }

    /// `z d/dz`, which multiplies the n-th coefficient by n.
    pub fn theta(&self) -> Series {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * Rational::from_integer(BigInt::from(n)))
            .collect();
        Series { coeffs }
    }

    /// Logarithm via `n a_n = Σ_{i=1}^{n} i f_i g_{n-i}` style recurrence; constant term must be 1.
    pub fn log(&self) -> Result<Series> {
        if !self.coeffs[0].is_one() {
            return Err(Error::LogConstantTerm);
        }
        let order = self.order();
        // L = log F satisfies F * theta(L) = theta(F).
        let mut theta_log = vec![Rational::zero(); order + 1];
        for n in 1..=order {
            let mut acc = Rational::from_integer(BigInt::from(n)) * &self.coeffs[n];
            for i in 1..n {
                if !self.coeffs[n - i].is_zero() {
                    acc -= &theta_log[i] * &self.coeffs[n - i];
                }
            }
            theta_log[n] = acc;
        }
        let coeffs = theta_log
            .into_iter()
            .enumerate()
            .map(|(n, c)| if n == 0 { c } else { c / Rational::from_integer(BigInt::from(n)) })
            .collect();
        Ok(Series { coeffs })
    }

    /// Exponential; constant term must be 0.
    pub fn exp(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::ExpConstantTerm);
        }
        let order = self.order();
        let theta_arg = self.theta();
        let mut out = vec![Rational::zero(); order + 1];
        out[0] = Rational::one();
        for n in 1..=order {
            let mut acc = Rational::zero();
            for i in 1..=n {
                if !theta_arg.coeffs[i].is_zero() {
                    acc += &theta_arg.coeffs[i] * &out[n - i];
                }
            }
            out[n] = acc / Rational::from_integer(BigInt::from(n));
        }
        Ok(Series { coeffs: out })
    }

    /// Substitutes the Cayley tree function for `z`: returns `F(T(z))`.
    pub fn at_tree(&self) -> Series {
        let order = self.order();
        let tree = cayley_tree_series(order);
        let mut result = Series::zero(order);
        for c in self.coeffs.iter().rev() {
            result = result.mul(&tree);
            result.coeffs[0] += c;
        }
        result
    }
}

/// `T(z) = Σ n^{n-1} z^n / n!`, the rooted labelled tree series.
pub fn cayley_tree_series(order: usize) -> Series {
    let mut series = Series::zero(order);
    let mut fact = BigInt::one();
    for n in 1..=order {
        fact *= BigInt::from(n);
        let count = num_traits::pow(BigInt::from(n), n - 1);
        series.coeffs[n] = Rational::new(count, fact.clone());
    }
    series
}

/// `(1 - T(z))^{-t}` truncated at `order`.
pub fn x_power_series(t: i64, order: usize) -> Series {
    let tree = cayley_tree_series(order);
    let x = Series::one(order).sub(&tree);
    if t >= 0 {
        x.inverse().expect("1 - T is invertible").pow(t).expect("nonnegative power")
    } else {
        x.pow(-t).expect("nonnegative power")
    }
}

/// `t_n(y) = n! [z^n] (1 - T)^{-y}`, computed exactly through Lagrange inversion:
/// `t_n(y) = y Σ_{k<n} C(y+k, k) (n-1)!/(n-1-k)! n^{n-1-k}` for `n ≥ 1`.
pub fn tree_polynomial(n: usize, y: i64) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    if y == 0 {
        return BigInt::zero();
    }
    lagrange_sum(n, |k, binom_prev| {
        // C(y+k, k) = C(y+k-1, k-1) (y+k) / k
        if k == 0 {
            BigInt::one()
        } else {
            (binom_prev * BigInt::from(y + k as i64)).div_floor(&BigInt::from(k))
        }
    }) * BigInt::from(y)
}

/// `n! [z^n] ln(1/(1 - T))`, the derivative of `t_n(y)` at `y = 0`.
pub fn tree_log_count(n: usize) -> BigInt {
    if n == 0 {
        return BigInt::zero();
    }
    lagrange_sum(n, |_, _| BigInt::one())
}

fn lagrange_sum(n: usize, mut weight: impl FnMut(usize, &BigInt) -> BigInt) -> BigInt {
    let base = BigInt::from(n);
    let mut powers = Vec::with_capacity(n);
    let mut p = BigInt::one();
    for _ in 0..n {
        powers.push(p.clone());
        p *= &base;
    }
    let mut total = BigInt::zero();
    let mut falling = BigInt::one();
    let mut binom = BigInt::one();
    for k in 0..n {
        if k > 0 {
            falling *= BigInt::from(n - k);
        }
        binom = weight(k, &binom);
        if binom.is_zero() {
            // C(y+k, k) vanishes for every later k once y+k hits zero with y < 0
            break;
        }
        total += &binom * &falling * &powers[n - 1 - k];
    }
    total
}

/// A series in `z` whose coefficients carry an edge index: `Σ c_{n,m} w^m z^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateEgf {
    rows: Vec<BTreeMap<usize, Rational>>,
}

impl BivariateEgf {
    pub fn new(order: usize) -> Self {
        BivariateEgf { rows: vec![BTreeMap::new(); order + 1] }
    }

    /// Lifts a fixed-excess univariate series `F` to `w^k F(wz)`.
    pub fn from_excess(series: &Series, excess: i64) -> Self {
        let mut out = Self::new(series.order());
        for (n, c) in series.coeffs().iter().enumerate() {
            let m = n as i64 + excess;
            if !c.is_zero() && m >= 0 {
                out.rows[n].insert(m as usize, c.clone());
            }
        }
        out
    }

    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn coeff(&self, n: usize, m: usize) -> Rational {
        self.rows.get(n).and_then(|row| row.get(&m)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, n: usize, m: usize, value: Rational) {
        if value.is_zero() {
            self.rows[n].remove(&m);
        } else {
            self.rows[n].insert(m, value);
        }
    }

    pub fn row(&self, n: usize) -> &BTreeMap<usize, Rational> {
        &self.rows[n]
    }

    /// The univariate slice at excess `k`: `Σ_n c_{n,n+k} z^n`.
    pub fn excess_slice(&self, excess: i64) -> Series {
        let coeffs = (0..=self.order())
            .map(|n| {
                let m = n as i64 + excess;
                if m < 0 {
                    Rational::zero()
                } else {
                    self.coeff(n, m as usize)
                }
            })
            .collect();
        Series::from_coeffs(coeffs, self.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(values: &[i64], order: usize) -> Series {
        Series::from_coeffs(values.iter().map(|&v| int(v)).collect(), order)
    }

    #[test]
    fn product_of_conjugates() {
        let product = poly(&[1, 1], 4).mul(&poly(&[1, -1], 4));
        assert_eq!(product, poly(&[1, 0, -1], 4));
    }

    #[test]
    fn log_of_graph_series_counts_connected_graphs() {
        let order = 4;
        let counts: Vec<Rational> =
            (0..=order).map(|n| Rational::from_integer(BigInt::from(2).pow((n * (n.max(1) - 1) / 2) as u32))).collect();
        let connected = Series::from_counts(&counts, order).log().unwrap();
        assert_eq!(connected.count(3), int(4));
        assert_eq!(connected.count(4), int(38));
    }

    #[test]
    fn tree_series_matches_rooted_counts() {
        let tree = cayley_tree_series(8);
        assert_eq!(tree.coeff(1), &int(1));
        assert_eq!(tree.coeff(3), &rat(3, 2));
        for n in 1..=8 {
            assert_eq!(tree.count(n), Rational::from_integer(num_traits::pow(BigInt::from(n), n - 1)));
        }
        let z = Series::monomial(1, int(1), 8);
        assert_eq!(z.mul(&tree.exp().unwrap()), tree);
    }

    #[test]
    fn x_powers_of_small_exponents() {
        assert_eq!(x_power_series(0, 5), Series::one(5));
        let m = x_power_series(1, 6);
        for n in 0..=6 {
            assert_eq!(m.count(n), Rational::from_integer(num_traits::pow(BigInt::from(n), n)));
        }
        assert_eq!(m.coeff(2), &int(2));
        assert_eq!(x_power_series(-1, 3).coeff(1), &int(-1));
    }

    #[test]
    fn tree_polynomial_matches_series_route() {
        for y in -5..=6 {
            let series = x_power_series(y, 12);
            for n in 0..=12 {
                assert_eq!(series.count(n), Rational::from_integer(tree_polynomial(n, y)), "n={n} y={y}");
            }
        }
        assert_eq!(tree_polynomial(3, 1), BigInt::from(27));
        let m = x_power_series(1, 4);
        let cube = m.mul(&m).mul(&m);
        assert_eq!(Rational::from_integer(tree_polynomial(4, 3)), cube.count(4));
    }

    #[test]
    fn tree_log_count_matches_log_of_m() {
        let log_m = x_power_series(1, 12).log().unwrap();
        for n in 0..=12 {
            assert_eq!(log_m.count(n), Rational::from_integer(tree_log_count(n)));
        }
    }

    #[test]
    fn unrooted_trees_point_to_rooted() {
        let tree = cayley_tree_series(10);
        let unrooted = tree.sub(&tree.mul(&tree).scale(&rat(1, 2)));
        assert_eq!(unrooted.theta(), tree);
        assert_eq!(unrooted.count(4), int(16));
    }

    #[test]
    fn substitution_of_tree_into_identity() {
        let z = Series::monomial(1, int(1), 7);
        assert_eq!(z.at_tree(), cayley_tree_series(7));
    }

    #[test]
    fn inverse_and_errors() {
        assert_eq!(poly(&[0, 1], 3).inverse(), Err(Error::ZeroConstantTerm));
        assert_eq!(poly(&[2, 1], 3).log(), Err(Error::LogConstantTerm));
        let geometric = poly(&[1, -1], 5).inverse().unwrap();
        assert_eq!(geometric, poly(&[1, 1, 1, 1, 1, 1], 5));
    }

    #[test]
    fn ln_bigint_on_large_values() {
        let big = num_traits::pow(BigInt::from(3), 2000);
        assert!((ln_bigint(&big) - 2000.0 * 3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn bivariate_slice_round_trip() {
        let tree = cayley_tree_series(6);
        let lifted = BivariateEgf::from_excess(&tree, -1);
        assert_eq!(lifted.coeff(3, 2), rat(3, 2));
        assert_eq!(lifted.excess_slice(-1), tree);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_series(order: usize) -> impl Strategy<Value = Series> {
            proptest::collection::vec(-5i64..=5, order + 1)
                .prop_map(move |v| Series::from_coeffs(v.into_iter().map(int).collect(), order))
        }

        proptest! {
            #[test]
            fn x_powers_multiply(t1 in -4i64..=4, t2 in -4i64..=4) {
                let product = x_power_series(t1, 8).mul(&x_power_series(t2, 8));
                prop_assert_eq!(product, x_power_series(t1 + t2, 8));
            }

            #[test]
            fn exp_log_round_trip(mut s in small_series(7)) {
                s.set_coeff(0, int(1));
                prop_assert_eq!(s.log().unwrap().exp().unwrap(), s);
            }

            #[test]
            fn negative_power_inverts(mut s in small_series(6), e in 1i64..4) {
                s.set_coeff(0, int(1));
                let back = s.pow(-e).unwrap().mul(&s.pow(e).unwrap());
                prop_assert_eq!(back, Series::one(6));
            }
        }
    }
}
