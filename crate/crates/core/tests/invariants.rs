use proptest::prelude::*;

use xifree::census::{closed_form, compute_wk, ClosedForm, ForbiddenSet};
use xifree::oracle::connected_counts;
use xifree::series::{rat, tree_polynomial, x_power_series};
use xifree::{Model, Rational, Series, XExpr};

const ORDER: usize = 18;

fn expr_strategy() -> impl Strategy<Value = XExpr> {
    prop::collection::vec((-3i64..7, -20i64..20, 1i64..7), 1..5).prop_map(|terms| {
        terms
            .into_iter()
            .fold(XExpr::zero(1), |acc, (t, num, den)| acc.add(&XExpr::monomial(t, rat(num, den), 1)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn theta_commutes_with_evaluation(expr in expr_strategy()) {
        prop_assert_eq!(expr.theta().eval(ORDER), expr.eval(ORDER).theta());
    }

    #[test]
    fn multiplication_commutes_with_evaluation(left in expr_strategy(), right in expr_strategy()) {
        let product = left.mul(&right).unwrap();
        prop_assert_eq!(product.eval(ORDER), left.eval(ORDER).mul(&right.eval(ORDER)));
    }

    #[test]
    fn counts_agree_with_series_coefficients(expr in expr_strategy(), n in 0usize..ORDER) {
        prop_assert_eq!(expr.count(n), expr.eval(ORDER).count(n));
    }

    #[test]
    fn x_powers_multiply(first in -4i64..6, second in -4i64..6) {
        let product = x_power_series(first, ORDER).mul(&x_power_series(second, ORDER));
        prop_assert_eq!(product, x_power_series(first + second, ORDER));
    }

    #[test]
    fn tree_polynomials_match_x_powers(y in -5i64..8, n in 0usize..ORDER) {
        let series = x_power_series(y, ORDER);
        prop_assert_eq!(Rational::from_integer(tree_polynomial(n, y)), series.count(n));
    }
}

#[test]
fn closed_forms_evaluate_consistently() {
    let order = 30;
    for form in ClosedForm::all() {
        let forbidden = if form.takes_polygons() { ForbiddenSet::triangle() } else { ForbiddenSet::none() };
        let expr = closed_form(form, &forbidden).unwrap();
        if expr.has_log() {
            continue;
        }
        let series = expr.eval(order);
        assert_eq!(expr.theta().eval(order), series.theta(), "{}", form.name());
        for n in 0..=order {
            assert_eq!(expr.count(n), series.count(n), "{} at n = {n}", form.name());
        }
    }
}

#[test]
fn pipeline_families_count_connected_graphs() {
    let nmax = 16;
    for model in [Model::Graph, Model::Multigraph] {
        let table = connected_counts(model, nmax, 4).unwrap();
        let families = compute_wk(4, model).unwrap();
        for (k, family) in families.iter().enumerate().skip(1) {
            let expected: Series = table.series(k as i64);
            for n in 0..=nmax {
                assert_eq!(family.count(n), expected.count(n), "{model} k = {k} n = {n}");
            }
        }
    }
}

#[test]
fn leading_coefficients_of_low_families() {
    let families = compute_wk(3, Model::Graph).unwrap();
    // W_1 = T^4 (6 - T) / (24 X^3) expands to (1 - X)^4 (5 + X) / (24 X^3).
    assert_eq!(families[1].leading_coefficients(1).unwrap(), (rat(5, 24), rat(-19, 24)));
    assert_eq!(families[2].leading_coefficients(2).unwrap().0, rat(5, 16));
    assert_eq!(families[3].leading_coefficients(3).unwrap().0, rat(1105, 1152));
}
