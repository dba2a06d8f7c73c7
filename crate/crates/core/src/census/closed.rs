//! Catalogue of exact EGFs in the `X = 1 - T` ring.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::census::ForbiddenSet;
use crate::error::{Error, Result};
use crate::series::{rat, Rational};
use crate::xring::XExpr;
use crate::Model;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClosedForm {
    /// Unrooted trees, `T - T²/2`.
    Unrooted,
    /// Connected unicyclic graphs.
    Unicyclic,
    /// Connected unicyclic multigraphs, `½ ln(1/X)`.
    UnicyclicMultigraph,
    UnicyclicTriangleFree,
    UnicyclicTriangleFreeMultigraph,
    /// Unicyclic graphs with none of the forbidden polygon lengths.
    UnicyclicPolygonFree,
    UnicyclicPolygonFreeMultigraph,
    Bicyclic,
    BicyclicTriangleFree,
    /// Bicyclic graphs with exactly one triangle.
    BicyclicOneTriangle,
    /// Bicyclic graphs with two or more triangles, weighted by shared edges.
    BicyclicJuxtaposed,
    TricyclicTriangleFree,
    TricyclicOneTriangle,
    TricyclicJuxtaposed,
}

const NAMES: [(ClosedForm, &str); 14] = [
    (ClosedForm::Unrooted, "unrooted"),
    (ClosedForm::Unicyclic, "w0"),
    (ClosedForm::UnicyclicMultigraph, "w0-multi"),
    (ClosedForm::UnicyclicTriangleFree, "w0-c3"),
    (ClosedForm::UnicyclicTriangleFreeMultigraph, "w0-c3-multi"),
    (ClosedForm::UnicyclicPolygonFree, "w0-xi"),
    (ClosedForm::UnicyclicPolygonFreeMultigraph, "w0-xi-multi"),
    (ClosedForm::Bicyclic, "w1"),
    (ClosedForm::BicyclicTriangleFree, "w1-c3"),
    (ClosedForm::BicyclicOneTriangle, "s1-c3"),
    (ClosedForm::BicyclicJuxtaposed, "j1-c3"),
    (ClosedForm::TricyclicTriangleFree, "w2-c3"),
    (ClosedForm::TricyclicOneTriangle, "s2-c3"),
    (ClosedForm::TricyclicJuxtaposed, "j2-c3"),
];

impl ClosedForm {
    pub fn all() -> impl Iterator<Item = ClosedForm> {
        NAMES.iter().map(|(form, _)| *form)
    }

    pub fn name(self) -> &'static str {
        NAMES.iter().find(|(form, _)| *form == self).map(|(_, name)| *name).expect("every form is named")
    }

    pub fn excess(self) -> i64 {
        use ClosedForm::*;
        match self {
            Unrooted => -1,
            Unicyclic | UnicyclicMultigraph | UnicyclicTriangleFree | UnicyclicTriangleFreeMultigraph
            | UnicyclicPolygonFree | UnicyclicPolygonFreeMultigraph => 0,
            Bicyclic | BicyclicTriangleFree | BicyclicOneTriangle | BicyclicJuxtaposed => 1,
            TricyclicTriangleFree | TricyclicOneTriangle | TricyclicJuxtaposed => 2,
        }
    }

    pub fn model(self) -> Model {
        use ClosedForm::*;
        match self {
            UnicyclicMultigraph | UnicyclicTriangleFreeMultigraph | UnicyclicPolygonFreeMultigraph => Model::Multigraph,
            _ => Model::Graph,
        }
    }

    /// True for the forms that depend on a caller-supplied polygon set.
    pub fn takes_polygons(self) -> bool {
        matches!(self, ClosedForm::UnicyclicPolygonFree | ClosedForm::UnicyclicPolygonFreeMultigraph)
    }
}

impl FromStr for ClosedForm {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let key = text.trim().to_ascii_lowercase();
        NAMES
            .iter()
            .find(|(_, name)| *name == key)
            .map(|(form, _)| *form)
            .ok_or_else(|| Error::UnknownName(text.to_string()))
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `½ ln(1/X) - Σ_{p ∈ lengths} T^p / (2p)`.
fn unicyclic_without(lengths: impl IntoIterator<Item = u32>) -> XExpr {
    let mut out = XExpr::log_term(rat(1, 2), 0);
    for p in lengths {
        out = out.sub(&XExpr::t_power(p, 0).scale(&rat(1, 2 * p as i64)));
    }
    out
}

/// The exact expression. `forbidden` is read only by the polygon-free unicyclic forms;
/// every other form ignores it.
pub fn closed_form(form: ClosedForm, forbidden: &ForbiddenSet) -> Result<XExpr> {
    use ClosedForm::*;
    if form.takes_polygons() && !forbidden.others().is_empty() {
        return Err(Error::OutOfRange("unicyclic closed form only handles forbidden polygons".into()));
    }
    let expr = match form {
        Unrooted => XExpr::from_t_poly(&[Rational::zero(), rat(1, 1), rat(-1, 2)], -1),
        // Loops and double edges read as cycles of length 1 and 2.
        Unicyclic => unicyclic_without([1, 2]),
        UnicyclicMultigraph => unicyclic_without([]),
        UnicyclicTriangleFree => unicyclic_without([1, 2, 3]),
        UnicyclicTriangleFreeMultigraph => unicyclic_without([3]),
        UnicyclicPolygonFree => unicyclic_without([1, 2].into_iter().chain(forbidden.polygon_list())),
        UnicyclicPolygonFreeMultigraph => unicyclic_without(forbidden.polygon_list()),
        Bicyclic => XExpr::rational_in_t(&[0, 0, 0, 0, 6, -1], 24, 3, 1),
        BicyclicTriangleFree => XExpr::rational_in_t(&[0, 0, 0, 0, 0, 2, 6, -3], 24, 3, 1),
        BicyclicOneTriangle => XExpr::rational_in_t(&[0, 0, 0, 0, 0, 2, -1], 4, 2, 1),
        BicyclicJuxtaposed => XExpr::rational_in_t(&[0, 0, 0, 0, 1], 4, 0, 1),
        TricyclicTriangleFree => XExpr::rational_in_t(&[0, 0, 0, 0, 0, 0, 7, 36, -18, -40, 40, -10], 48, 6, 2),
        TricyclicOneTriangle => XExpr::rational_in_t(&[0, 0, 0, 0, 0, 0, 48, 18, -140, 119, -30], 48, 5, 2),
        TricyclicJuxtaposed => XExpr::rational_in_t(&[0, 0, 0, 0, 0, 2, 5, -4], 6, 2, 2),
    };
    Ok(expr)
}

/// Shorthand for forms that take no parameters.
pub fn catalogue(form: ClosedForm) -> XExpr {
    closed_form(form, &ForbiddenSet::none()).expect("parameter-free forms always build")
}
