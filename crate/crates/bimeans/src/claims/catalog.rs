//! The fixed claim catalog: nine composite theorem claims, eight lemma-level
//! shape claims, and three three-term inequalities.
//!
//! Lemma-level monotonicity/log-shape assertions are embodied as midpoint
//! inequalities: log-convexity of `t -> f(t)` is `f(A(p,q)) <= G(f(p), f(q))`,
//! log-concavity the reverse, and plain (value) convexity/concavity uses `A`
//! on the outside. Three-term claims compare `f(p)^2` with
//! `f(p-1) f(p+1)` on the squared scale.

use super::{ClaimSpec, Expr, Hypothesis, ParamExpr, Relation, Var};
use crate::means::{AlzerVariant, ClassicalKind};

use ClassicalKind::{Arithmetic as A, Geometric as G, Identric as I, Logarithmic as L};
use Var::{Nu, Omega, P, Q};

fn p() -> ParamExpr {
    ParamExpr::Coord(P)
}
fn q() -> ParamExpr {
    ParamExpr::Coord(Q)
}
fn omega() -> ParamExpr {
    ParamExpr::Coord(Omega)
}
fn nu() -> ParamExpr {
    ParamExpr::Coord(Nu)
}

/// The fixed built-in catalog, in report order (lexicographic by id).
pub fn catalog() -> Vec<ClaimSpec> {
    let paper = AlzerVariant::Paper;
    let mut claims = vec![
        // --- corollary: J_p log-convex in p on (0, infinity) for b > a ---
        ClaimSpec {
            id: "C2.3",
            statement: "J_{A(p,q)} <= G(J_p, J_q)   [J log-convex in p]",
            lhs: Expr::Alzer(ParamExpr::mean(A, p(), q()), paper),
            rhs: Expr::classical(G, Expr::Alzer(p(), paper), Expr::Alzer(q(), paper)),
            relation: Relation::Le,
            hypothesis: Hypothesis::PosOrdersSecondGt,
            depends_on: &[],
            vars: &[P, Q],
        },
        // --- Mildorf: M_p concave in p (value space) for p >= 1 ---
        ClaimSpec {
            id: "L2.3a",
            statement: "A(M_p, M_q) <= M_{A(p,q)}   [M concave in p, value space]",
            lhs: Expr::classical(A, Expr::Power(p()), Expr::Power(q())),
            rhs: Expr::Power(ParamExpr::mean(A, p(), q())),
            relation: Relation::Le,
            hypothesis: Hypothesis::OrdersGeOne,
            depends_on: &[],
            vars: &[P, Q],
        },
        // --- Mildorf: M_p convex in p (value space) for p <= -1 ---
        ClaimSpec {
            id: "L2.3b",
            statement: "A(M_p, M_q) >= M_{A(p,q)}   [M convex in p, value space]",
            lhs: Expr::classical(A, Expr::Power(p()), Expr::Power(q())),
            rhs: Expr::Power(ParamExpr::mean(A, p(), q())),
            relation: Relation::Ge,
            hypothesis: Hypothesis::OrdersLeMinusOne,
            depends_on: &[],
            vars: &[P, Q],
        },
        // --- M_p log-concave in p on (0, infinity) ---
        ClaimSpec {
            id: "L2.4a",
            statement: "G(M_p, M_q) <= M_{A(p,q)}   [M log-concave in p, p,q > 0]",
            lhs: Expr::classical(G, Expr::Power(p()), Expr::Power(q())),
            rhs: Expr::Power(ParamExpr::mean(A, p(), q())),
            relation: Relation::Le,
            hypothesis: Hypothesis::PosOrders,
            depends_on: &["L2.3a", "L2.3b"],
            vars: &[P, Q],
        },
        // --- M_p log-concave in p on (-infinity, 0) for b >= a (as printed) ---
        ClaimSpec {
            id: "L2.4b",
            statement: "G(M_p, M_q) <= M_{A(p,q)}   [M log-concave in p, p,q < 0]",
            lhs: Expr::classical(G, Expr::Power(p()), Expr::Power(q())),
            rhs: Expr::Power(ParamExpr::mean(A, p(), q())),
            relation: Relation::Le,
            hypothesis: Hypothesis::NegOrdersSecondGe,
            depends_on: &["L2.3a", "L2.3b"],
            vars: &[P, Q],
        },
        // --- Lehmer log-convex in p on (0, infinity) (as printed) ---
        ClaimSpec {
            id: "L2.5",
            statement: "L_{A(p,q)} <= G(L_p, L_q)   [Lehmer log-convex in p]",
            lhs: Expr::Lehmer(ParamExpr::mean(A, p(), q())),
            rhs: Expr::classical(G, Expr::Lehmer(p()), Expr::Lehmer(q())),
            relation: Relation::Le,
            hypothesis: Hypothesis::PosOrdersSecondGe,
            depends_on: &[],
            vars: &[P, Q],
        },
        // --- weighted mean log-convex in the weight for b >= a > 1 (as printed) ---
        ClaimSpec {
            id: "L2.6a",
            statement: "M_p(A(w,v)) <= G(M_p(w), M_p(v))   [weight-curve log-convex, b >= a > 1]",
            lhs: Expr::Weighted { order: p(), weight: ParamExpr::mean(A, omega(), nu()) },
            rhs: Expr::classical(
                G,
                Expr::Weighted { order: p(), weight: omega() },
                Expr::Weighted { order: p(), weight: nu() },
            ),
            relation: Relation::Le,
            hypothesis: Hypothesis::WeightsSecondGeFirstGtOne,
            depends_on: &[],
            vars: &[P, Omega, Nu],
        },
        // --- weighted mean log-concave in the weight for a >= b > 1 (as printed) ---
        ClaimSpec {
            id: "L2.6b",
            statement: "G(M_p(w), M_p(v)) <= M_p(A(w,v))   [weight-curve log-concave, a >= b > 1]",
            lhs: Expr::classical(
                G,
                Expr::Weighted { order: p(), weight: omega() },
                Expr::Weighted { order: p(), weight: nu() },
            ),
            rhs: Expr::Weighted { order: p(), weight: ParamExpr::mean(A, omega(), nu()) },
            relation: Relation::Le,
            hypothesis: Hypothesis::WeightsFirstGeSecondGtOne,
            depends_on: &[],
            vars: &[P, Omega, Nu],
        },
        // --- composite claims over the power family ---
        ClaimSpec {
            id: "T1.1",
            statement: "L(M_p, M_q) <= M_{L(p,q)}",
            lhs: Expr::classical(L, Expr::Power(p()), Expr::Power(q())),
            rhs: Expr::Power(ParamExpr::mean(L, p(), q())),
            relation: Relation::Le,
            hypothesis: Hypothesis::PosOrdersOrNonPosSecondGe,
            depends_on: &["L2.4a", "L2.4b"],
            vars: &[P, Q],
        },
        ClaimSpec {
            id: "T1.2",
            statement: "L(M_p, M_q) <= M_{A(p,q)}",
            lhs: Expr::classical(L, Expr::Power(p()), Expr::Power(q())),
            rhs: Expr::Power(ParamExpr::mean(A, p(), q())),
            relation: Relation::Le,
            hypothesis: Hypothesis::PosOrdersOrNonPosSecondGe,
            depends_on: &["L2.4a", "L2.4b"],
            vars: &[P, Q],
        },
        ClaimSpec {
            id: "T1.3",
            statement: "I(M_p, M_q) <= M_{A(p,q)}",
            lhs: Expr::classical(I, Expr::Power(p()), Expr::Power(q())),
            rhs: Expr::Power(ParamExpr::mean(A, p(), q())),
            relation: Relation::Le,
            hypothesis: Hypothesis::PosOrdersOrNonPosSecondGe,
            depends_on: &["L2.4a", "L2.4b"],
            vars: &[P, Q],
        },
        // --- composite claims over the Lehmer family ---
        ClaimSpec {
            id: "T2.1",
            statement: "L(L_p, L_q) >= L_{L(p,q)}",
            lhs: Expr::classical(L, Expr::Lehmer(p()), Expr::Lehmer(q())),
            rhs: Expr::Lehmer(ParamExpr::mean(L, p(), q())),
            relation: Relation::Ge,
            hypothesis: Hypothesis::PosOrdersSecondGe,
            depends_on: &["L2.5"],
            vars: &[P, Q],
        },
        ClaimSpec {
            id: "T2.2",
            statement: "L(L_p, L_q) >= L_{A(p,q)}",
            lhs: Expr::classical(L, Expr::Lehmer(p()), Expr::Lehmer(q())),
            rhs: Expr::Lehmer(ParamExpr::mean(A, p(), q())),
            relation: Relation::Ge,
            hypothesis: Hypothesis::PosOrdersSecondGe,
            depends_on: &["L2.5"],
            vars: &[P, Q],
        },
        ClaimSpec {
            id: "T2.3",
            statement: "I(L_p, L_q) >= L_{I(p,q)}",
            lhs: Expr::classical(I, Expr::Lehmer(p()), Expr::Lehmer(q())),
            rhs: Expr::Lehmer(ParamExpr::mean(I, p(), q())),
            relation: Relation::Ge,
            hypothesis: Hypothesis::PosOrdersSecondGe,
            depends_on: &["L2.5"],
            vars: &[P, Q],
        },
        // --- composite claims over the weighted power family ---
        ClaimSpec {
            id: "T3.1",
            statement: "L(M_p(w), M_p(v)) <= M_p(L(w,v))",
            lhs: Expr::classical(
                L,
                Expr::Weighted { order: p(), weight: omega() },
                Expr::Weighted { order: p(), weight: nu() },
            ),
            rhs: Expr::Weighted { order: p(), weight: ParamExpr::mean(L, omega(), nu()) },
            relation: Relation::Le,
            hypothesis: Hypothesis::WeightsFirstGeSecondGeOne,
            depends_on: &["L2.6a", "L2.6b"],
            vars: &[P, Omega, Nu],
        },
        ClaimSpec {
            id: "T3.2",
            statement: "L(M_p(w), M_p(v)) <= M_p(A(w,v))",
            lhs: Expr::classical(
                L,
                Expr::Weighted { order: p(), weight: omega() },
                Expr::Weighted { order: p(), weight: nu() },
            ),
            rhs: Expr::Weighted { order: p(), weight: ParamExpr::mean(A, omega(), nu()) },
            relation: Relation::Le,
            hypothesis: Hypothesis::WeightsFirstGeSecondGeOne,
            depends_on: &["L2.6a", "L2.6b"],
            vars: &[P, Omega, Nu],
        },
        ClaimSpec {
            id: "T3.3",
            statement: "I(M_p(w), M_p(v)) <= M_p(A(w,v))",
            lhs: Expr::classical(
                I,
                Expr::Weighted { order: p(), weight: omega() },
                Expr::Weighted { order: p(), weight: nu() },
            ),
            rhs: Expr::Weighted { order: p(), weight: ParamExpr::mean(A, omega(), nu()) },
            relation: Relation::Le,
            hypothesis: Hypothesis::WeightsFirstGeSecondGeOne,
            depends_on: &["L2.6a", "L2.6b"],
            vars: &[P, Omega, Nu],
        },
        // --- three-term consequences (squared scale) ---
        ClaimSpec {
            id: "TT-J",
            statement: "J_p^2 <= J_{p-1} J_{p+1}",
            lhs: Expr::square(Expr::Alzer(p(), paper)),
            rhs: Expr::product(
                Expr::Alzer(ParamExpr::Shift(P, -1.0), paper),
                Expr::Alzer(ParamExpr::Shift(P, 1.0), paper),
            ),
            relation: Relation::Le,
            hypothesis: Hypothesis::CenterGtOneSecondGt,
            depends_on: &["C2.3"],
            vars: &[P],
        },
        ClaimSpec {
            id: "TT-L",
            statement: "L_p^2 <= L_{p-1} L_{p+1}",
            lhs: Expr::square(Expr::Lehmer(p())),
            rhs: Expr::product(
                Expr::Lehmer(ParamExpr::Shift(P, -1.0)),
                Expr::Lehmer(ParamExpr::Shift(P, 1.0)),
            ),
            relation: Relation::Le,
            hypothesis: Hypothesis::CenterGtOneSecondGe,
            depends_on: &["L2.5"],
            vars: &[P],
        },
        ClaimSpec {
            id: "TT-W",
            statement: "M_p(u)^2 <= M_p(u-1) M_p(u+1)",
            lhs: Expr::square(Expr::Weighted { order: p(), weight: omega() }),
            rhs: Expr::product(
                Expr::Weighted { order: p(), weight: ParamExpr::Shift(Omega, -1.0) },
                Expr::Weighted { order: p(), weight: ParamExpr::Shift(Omega, 1.0) },
            ),
            relation: Relation::Le,
            hypothesis: Hypothesis::CenterWeightGtOneSecondGeFirstGtOne,
            depends_on: &["L2.6a", "L2.6b"],
            vars: &[P, Omega],
        },
    ];
    claims.sort_by(|x, y| x.id.cmp(y.id));
    claims
}

/// Look up one claim by id.
pub fn find_claim(id: &str) -> Option<ClaimSpec> {
    catalog().into_iter().find(|c| c.id == id)
}
