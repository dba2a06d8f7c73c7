//! Smooth bicyclic graphs through partition generating functions.
//!
//! Series here are ordinary generating functions truncated at a fixed order.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::series::{rat, Rational, Series};
use crate::xring::XExpr;

/// `1 / Π_{j ≤ parts} (1 - z^j)`.
fn part_product_inverse(parts: usize, order: usize) -> Series {
    let mut out = Series::one(order);
    for j in 1..=parts {
        // Dividing by (1 - z^j) is a running sum with stride j.
        let mut coeffs = out.coeffs().to_vec();
        for n in j..=order {
            let prev = coeffs[n - j].clone();
            coeffs[n] += prev;
        }
        out = Series::from_coeffs(coeffs, order);
    }
    out
}

fn shifted(series: &Series, by: usize) -> Series {
    series.mul(&Series::monomial(by, Rational::one(), series.order()))
}

/// Partitions into exactly `i` parts: `z^i / Π_{j≤i}(1 - z^j)`.
pub fn parts_exactly(i: usize, order: usize) -> Series {
    shifted(&part_product_inverse(i, order), i)
}

/// Partitions into exactly `i` distinct parts: `z^{i(i+1)/2} / Π_{j≤i}(1 - z^j)`.
pub fn distinct_parts_exactly(i: usize, order: usize) -> Series {
    shifted(&part_product_inverse(i, order), i * (i + 1) / 2)
}

/// `1 / (1 - z^j)`.
fn geometric(j: usize, order: usize) -> Series {
    part_product_inverse(0, order).mul(&{
        let mut coeffs = vec![Rational::zero(); order + 1];
        for n in (0..=order).step_by(j) {
            coeffs[n] = Rational::one();
        }
        Series::from_coeffs(coeffs, order)
    })
}

/// The seven-term sum counting smooth bicyclic graphs by vertex number, as an OGF in `z`
/// whose `z^n` coefficient is `n! [z^n]` of the smooth EGF divided by `n!`.
pub fn smooth_bicyclic_partition(order: usize) -> Series {
    let g1 = geometric(1, order);
    let g2 = geometric(2, order);
    let g3 = geometric(3, order);
    let mono = |power: usize| Series::monomial(power, Rational::one(), order);
    let theta_shape = shifted(&distinct_parts_exactly(3, order).add(&distinct_parts_exactly(2, order)), 2).scale(&rat(1, 2));
    let dumbbell_loops = mono(5).mul(&g3).scale(&rat(1, 12));
    let eye_glasses = mono(4)
        .mul(&g2)
        .add(&mono(5).mul(&g1).mul(&g2))
        .sub(&mono(5).mul(&g3))
        .scale(&rat(1, 4));
    let handcuffs = mono(6).mul(&g1).mul(&g1).mul(&g2).scale(&rat(1, 4));
    let figure_eight = mono(5).mul(&g1).mul(&g2).scale(&rat(1, 8));
    theta_shape.add(&dumbbell_loops).add(&eye_glasses).add(&handcuffs).add(&figure_eight)
}

/// `z⁴ (6 - z) / (24 (1 - z)³)`.
pub fn smooth_bicyclic_closed(order: usize) -> Series {
    let numer = Series::from_coeffs(vec![Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero(), rat(6, 24), rat(-1, 24)], order);
    let g1 = geometric(1, order);
    numer.mul(&g1).mul(&g1).mul(&g1)
}

/// The closed form read as a polynomial in `T` over powers of `X = 1 - T`, so substituting
/// `z → T` gives the bicyclic EGF directly.
pub fn smooth_bicyclic_as_xexpr() -> XExpr {
    XExpr::rational_in_t(&[0, 0, 0, 0, 6, -1], 24, 3, 1)
}

/// Partitions of `n` into exactly `parts` parts, all distinct when `distinct` is set,
/// counted by recursion on the largest part.
pub fn count_partitions(n: usize, parts: usize, distinct: bool) -> BigInt {
    fn go(n: usize, parts: usize, max: usize, distinct: bool) -> BigInt {
        if parts == 0 {
            return if n == 0 { BigInt::one() } else { BigInt::zero() };
        }
        let mut total = BigInt::zero();
        for largest in 1..=max.min(n) {
            let next_max = if distinct { largest - 1 } else { largest };
            total += go(n - largest, parts - 1, next_max, distinct);
        }
        total
    }
    go(n, parts, n, distinct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::closed::{catalogue, ClosedForm};
    use crate::series::factorial;

    #[test]
    fn product_forms_match_direct_counts() {
        for i in 1..=4 {
            let plain = parts_exactly(i, 30);
            let distinct = distinct_parts_exactly(i, 30);
            for n in 0..=30 {
                assert_eq!(plain.coeff(n), &Rational::from_integer(count_partitions(n, i, false)), "i={i} n={n}");
                assert_eq!(distinct.coeff(n), &Rational::from_integer(count_partitions(n, i, true)), "i={i} n={n}");
            }
        }
    }

    #[test]
    fn seven_terms_sum_to_closed_form() {
        let sum = smooth_bicyclic_partition(40);
        assert_eq!(sum, smooth_bicyclic_closed(40));
        assert_eq!(sum.coeff(3), &Rational::zero());
        assert_eq!(sum.coeff(4) * Rational::from_integer(factorial(4)), Rational::from_integer(BigInt::from(6)));
    }

    #[test]
    fn tree_substitution_gives_bicyclic() {
        let closed = smooth_bicyclic_closed(20);
        assert_eq!(closed.at_tree(), catalogue(ClosedForm::Bicyclic).eval(20));
        assert_eq!(smooth_bicyclic_as_xexpr(), catalogue(ClosedForm::Bicyclic));
    }
}
