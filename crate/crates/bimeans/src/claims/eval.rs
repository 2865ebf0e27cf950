//! Signed-margin evaluation of claims at working and extended precision.
//!
//! The two evaluators are deliberately independent routes: the working one
//! goes through the stable log-space kernels in [`crate::means`], the
//! extended one through the direct defining formulas in [`crate::oracle`].
//! Error bounds are forward estimates: log-space bounds compose through
//! outer means (whose log-partials sum to 1), parameter rounding enters via
//! the curve derivative, and the subtraction of two nearly equal sides is
//! tracked by an explicit amplification factor on the extended route.

use super::{ClaimSpec, Expr, ParamExpr, Point, Precision, Relation, Var, Witness};
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::means::{self, ClassicalKind, MeanSpec, PositivePair};
use crate::oracle;
use crate::params::{dlog, CurveFamily, ParamCurve};

const EPS: f64 = f64::EPSILON;

fn coord(pt: &Point, var: Var) -> Result<f64> {
    let v = match var {
        Var::P => pt.p,
        Var::Q => pt.q,
        Var::Omega => pt.omega,
        Var::Nu => pt.nu,
    };
    v.ok_or_else(|| Error::Config(format!("point is missing coordinate {var:?}")))
}

// ---------------------------------------------------------------------------
// parameter expressions
// ---------------------------------------------------------------------------

/// Classical mean of two parameter values. The logarithmic mean extends to
/// nonpositive arguments by odd reflection (`L(x,y) = -L(-x,-y)`, and 0 when
/// either argument is 0), which is the reading that makes the nonpositive
/// order branch meaningful; `L(0,0) = 0` then selects the geometric branch
/// of the power mean downstream.
fn classical_param(kind: ClassicalKind, x: f64, y: f64) -> Result<f64> {
    if x == y {
        return Ok(x);
    }
    match kind {
        ClassicalKind::Arithmetic => Ok(0.5 * x + 0.5 * y),
        ClassicalKind::Logarithmic => {
            if x == 0.0 || y == 0.0 {
                Ok(0.0)
            } else if x > 0.0 && y > 0.0 {
                Ok(means::classical_mean(kind, &PositivePair::new(x, y)?)?.value)
            } else if x < 0.0 && y < 0.0 {
                Ok(-means::classical_mean(kind, &PositivePair::new(-x, -y)?)?.value)
            } else {
                Err(Error::ParamDomain {
                    family: "parameter-mean",
                    detail: format!("logarithmic mean of mixed-sign parameters ({x}, {y})"),
                })
            }
        }
        _ => {
            if x > 0.0 && y > 0.0 {
                Ok(means::classical_mean(kind, &PositivePair::new(x, y)?)?.value)
            } else {
                Err(Error::ParamDomain {
                    family: "parameter-mean",
                    detail: format!("{} mean needs positive parameters, got ({x}, {y})", kind.name()),
                })
            }
        }
    }
}

/// Extended-precision twin of [`classical_param`].
fn classical_param_dd(kind: ClassicalKind, x: Dd, y: Dd) -> Result<Dd> {
    if x == y {
        return Ok(x);
    }
    let pos = |v: Dd| v.hi > 0.0;
    let zero = |v: Dd| v.is_zero();
    match kind {
        ClassicalKind::Arithmetic => Ok(x.add(y).div_f64(2.0)),
        ClassicalKind::Logarithmic => {
            if zero(x) || zero(y) {
                Ok(Dd::ZERO)
            } else if pos(x) && pos(y) {
                Ok(oracle::classical_dd(kind, x, y))
            } else if !pos(x) && !pos(y) {
                Ok(oracle::classical_dd(kind, x.neg(), y.neg()).neg())
            } else {
                Err(Error::ParamDomain {
                    family: "parameter-mean",
                    detail: "logarithmic mean of mixed-sign parameters".into(),
                })
            }
        }
        _ => {
            if pos(x) && pos(y) {
                Ok(oracle::classical_dd(kind, x, y))
            } else {
                Err(Error::ParamDomain {
                    family: "parameter-mean",
                    detail: format!("{} mean needs positive parameters", kind.name()),
                })
            }
        }
    }
}

/// `(value, absolute error bound)` of a parameter expression.
fn eval_param(pe: &ParamExpr, pt: &Point) -> Result<(f64, f64)> {
    match pe {
        ParamExpr::Coord(v) => Ok((coord(pt, *v)?, 0.0)),
        ParamExpr::Shift(v, d) => {
            let t = coord(pt, *v)? + d;
            Ok((t, EPS * t.abs()))
        }
        ParamExpr::Mean(kind, x, y) => {
            let (vx, ex) = eval_param(x, pt)?;
            let (vy, ey) = eval_param(y, pt)?;
            let t = classical_param(*kind, vx, vy)?;
            // classical means have partials bounded by 1 in each argument on
            // the relevant ranges; add a generous eval-rounding term
            let err = ex + ey + 8.0 * EPS * (1.0 + t.abs());
            Ok((t, err))
        }
    }
}

fn eval_param_dd(pe: &ParamExpr, pt: &Point) -> Result<Dd> {
    match pe {
        ParamExpr::Coord(v) => Ok(Dd::from(coord(pt, *v)?)),
        ParamExpr::Shift(v, d) => Ok(Dd::from_sum(coord(pt, *v)?, *d)),
        ParamExpr::Mean(kind, x, y) => {
            classical_param_dd(*kind, eval_param_dd(x, pt)?, eval_param_dd(y, pt)?)
        }
    }
}

// ---------------------------------------------------------------------------
// working-precision expression evaluation
// ---------------------------------------------------------------------------

struct Node {
    value: f64,
    log_value: f64,
    /// Absolute error bound of `log_value`.
    log_err: f64,
}

/// `|d log mean / dt|` of the parametric leaf, used to propagate parameter
/// rounding into the leaf's log error.
fn param_sensitivity(curve: &ParamCurve, t: f64) -> f64 {
    if curve.in_domain(t) {
        dlog(curve, t, 1).map(f64::abs).unwrap_or(0.0)
    } else if matches!(curve.family, CurveFamily::PowerInOrder) && t == 0.0 {
        // d log M_t/dt at t = 0 is u^2/2
        let u = 0.5 * curve.log_ratio;
        0.5 * u * u
    } else {
        0.0
    }
}

fn leaf_node(spec: &MeanSpec, pair: &PositivePair, t: f64, t_err: f64, fam: CurveFamily) -> Result<Node> {
    let r = means::eval(spec, pair)?;
    let mut log_err = r.abs_error_bound;
    if t_err > 0.0 {
        let curve = ParamCurve::new(fam, *pair)?;
        log_err += 2.0 * param_sensitivity(&curve, t) * t_err;
    }
    Ok(Node { value: r.value, log_value: r.log_value, log_err })
}

fn eval_expr(expr: &Expr, pt: &Point) -> Result<Node> {
    let pair = PositivePair::new(pt.a, pt.b)?;
    match expr {
        Expr::Power(pe) => {
            let (t, te) = eval_param(pe, pt)?;
            leaf_node(&MeanSpec::Power(t), &pair, t, te, CurveFamily::PowerInOrder)
        }
        Expr::Lehmer(pe) => {
            let (t, te) = eval_param(pe, pt)?;
            leaf_node(&MeanSpec::Lehmer(t), &pair, t, te, CurveFamily::LehmerInOrder)
        }
        Expr::Alzer(pe, variant) => {
            let (t, te) = eval_param(pe, pt)?;
            leaf_node(
                &MeanSpec::Alzer { order: t, variant: *variant },
                &pair,
                t,
                te,
                CurveFamily::AlzerInOrder(*variant),
            )
        }
        Expr::Weighted { order, weight } => {
            let (p, pe_err) = eval_param(order, pt)?;
            let (w, we) = eval_param(weight, pt)?;
            if pe_err > 0.0 {
                return Err(Error::Config("weighted order must be a direct coordinate".into()));
            }
            leaf_node(
                &MeanSpec::WeightedPower { order: p, weight: w },
                &pair,
                w,
                we,
                CurveFamily::WeightedInWeight { order: p },
            )
        }
        Expr::Classical(kind, x, y) => {
            let nx = eval_expr(x, pt)?;
            let ny = eval_expr(y, pt)?;
            let outer = means::classical_mean(*kind, &PositivePair::new(nx.value, ny.value)?)?;
            // log-partials of a homogeneous mean are nonnegative and sum to 1
            Ok(Node {
                value: outer.value,
                log_value: outer.log_value,
                log_err: nx.log_err.max(ny.log_err) + outer.abs_error_bound,
            })
        }
        Expr::Square(x) => {
            let nx = eval_expr(x, pt)?;
            Ok(Node {
                value: nx.value * nx.value,
                log_value: 2.0 * nx.log_value,
                log_err: 2.0 * nx.log_err + 2.0 * EPS,
            })
        }
        Expr::Product(x, y) => {
            let nx = eval_expr(x, pt)?;
            let ny = eval_expr(y, pt)?;
            Ok(Node {
                value: nx.value * ny.value,
                log_value: nx.log_value + ny.log_value,
                log_err: nx.log_err + ny.log_err + 2.0 * EPS,
            })
        }
    }
}

/// Evaluate a claim at one point (working precision).
///
/// The point must satisfy the claim's hypothesis. The margin is oriented so
/// that negative means violation; the error bound is a conservative absolute
/// bound on the margin.
pub fn evaluate_claim(claim: &ClaimSpec, pt: &Point) -> Result<Witness> {
    if !claim.hypothesis.satisfied(pt) {
        return Err(Error::HypothesisViolated(claim.id.to_string()));
    }
    let lhs = eval_expr(&claim.lhs, pt)?;
    let rhs = eval_expr(&claim.rhs, pt)?;
    let margin = match claim.relation {
        Relation::Le => rhs.value - lhs.value,
        Relation::Ge => lhs.value - rhs.value,
    };
    let error_bound = 2.0
        * (lhs.value * lhs.log_err + rhs.value * rhs.log_err
            + 4.0 * EPS * (lhs.value.abs() + rhs.value.abs()));
    Ok(Witness {
        point: *pt,
        lhs: lhs.value,
        rhs: rhs.value,
        margin,
        error_bound,
        precision: Precision::Working,
    })
}

// ---------------------------------------------------------------------------
// extended-precision expression evaluation
// ---------------------------------------------------------------------------

struct DdNode {
    value: Dd,
    rel_err: f64,
}

fn eval_expr_dd(expr: &Expr, pt: &Point) -> Result<DdNode> {
    let (a, b) = (Dd::from(pt.a), Dd::from(pt.b));
    let leaf = |value: Dd, t: Dd, fam: CurveFamily| -> Result<DdNode> {
        // parameter expressions carry ~ATOM_REL relative error; propagate it
        // through the curve slope when the parameter was itself computed
        let pair = PositivePair::new(pt.a, pt.b)?;
        let curve = ParamCurve::new(fam, pair)?;
        let sens = param_sensitivity(&curve, t.to_f64());
        let rel = oracle::ATOM_REL * (1.0 + sens * (1.0 + t.to_f64().abs()));
        Ok(DdNode { value, rel_err: rel })
    };
    match expr {
        Expr::Power(pe) => {
            let t = eval_param_dd(pe, pt)?;
            leaf(oracle::power_dd(t, a, b), t, CurveFamily::PowerInOrder)
        }
        Expr::Lehmer(pe) => {
            let t = eval_param_dd(pe, pt)?;
            leaf(oracle::lehmer_dd(t, a, b), t, CurveFamily::LehmerInOrder)
        }
        Expr::Alzer(pe, variant) => {
            let t = eval_param_dd(pe, pt)?;
            leaf(
                oracle::alzer_dd(t.to_f64(), a, b, *variant)?,
                t,
                CurveFamily::AlzerInOrder(*variant),
            )
        }
        Expr::Weighted { order, weight } => {
            let p = eval_param_dd(order, pt)?;
            let w = eval_param_dd(weight, pt)?;
            leaf(
                oracle::weighted_power_dd(p, w, a, b),
                w,
                CurveFamily::WeightedInWeight { order: p.to_f64() },
            )
        }
        Expr::Classical(kind, x, y) => {
            let nx = eval_expr_dd(x, pt)?;
            let ny = eval_expr_dd(y, pt)?;
            if nx.value == ny.value {
                // exact diagonal: the mean is the argument itself
                return Ok(DdNode { value: nx.value, rel_err: nx.rel_err.max(ny.rel_err) });
            }
            let value = oracle::classical_dd(*kind, nx.value, ny.value);
            // for the difference-quotient means, input errors are amplified
            // by (x + y)/|x - y|; the others have bounded log-partials
            let amp = match kind {
                ClassicalKind::Logarithmic | ClassicalKind::Identric => {
                    let num = nx.value.add(ny.value).abs().to_f64();
                    let den = nx.value.sub(ny.value).abs().to_f64().max(1e-290);
                    (num / den).min(1e15).max(1.0)
                }
                _ => 1.0,
            };
            Ok(DdNode {
                value,
                rel_err: (nx.rel_err + ny.rel_err) * 2.0 * amp + oracle::ATOM_REL,
            })
        }
        Expr::Square(x) => {
            let nx = eval_expr_dd(x, pt)?;
            Ok(DdNode { value: nx.value.sqr(), rel_err: 2.0 * nx.rel_err + oracle::ATOM_REL })
        }
        Expr::Product(x, y) => {
            let nx = eval_expr_dd(x, pt)?;
            let ny = eval_expr_dd(y, pt)?;
            Ok(DdNode {
                value: nx.value.mul(ny.value),
                rel_err: nx.rel_err + ny.rel_err + oracle::ATOM_REL,
            })
        }
    }
}

/// Re-evaluate a claim at one point with the extended-precision oracle.
pub fn oracle_eval(claim: &ClaimSpec, pt: &Point) -> Result<Witness> {
    if !claim.hypothesis.satisfied(pt) {
        return Err(Error::HypothesisViolated(claim.id.to_string()));
    }
    let lhs = eval_expr_dd(&claim.lhs, pt)?;
    let rhs = eval_expr_dd(&claim.rhs, pt)?;
    let margin = match claim.relation {
        Relation::Le => rhs.value.sub(lhs.value),
        Relation::Ge => lhs.value.sub(rhs.value),
    };
    let lv = lhs.value.to_f64();
    let rv = rhs.value.to_f64();
    let error_bound =
        lhs.rel_err * lv.abs() + rhs.rel_err * rv.abs() + 1e-31 * (lv.abs() + rv.abs());
    Ok(Witness {
        point: *pt,
        lhs: lv,
        rhs: rv,
        margin: margin.to_f64(),
        error_bound,
        precision: Precision::Extended,
    })
}

#[cfg(test)]
mod tests {
    use super::super::catalog::find_claim;
    use super::*;
    use std::f64::consts::E;

    fn pt(a: f64, b: f64, p: f64, q: f64) -> Point {
        Point { a, b, p: Some(p), q: Some(q), omega: None, nu: None }
    }

    fn pt_w(a: f64, b: f64, p: f64, w: f64, v: f64) -> Point {
        Point { a, b, p: Some(p), q: None, omega: Some(w), nu: Some(v) }
    }

    #[test]
    fn t11_candidate_violation_point() {
        // expected values confirmed by the extended-precision oracle (and an
        // independent 200-bit computation) before freezing
        let claim = find_claim("T1.1").unwrap();
        let w = evaluate_claim(&claim, &pt(1.0, E, 1.0, 3.0)).unwrap();
        assert!((w.lhs - 2.0213491325705175).abs() < 1e-13, "lhs {}", w.lhs);
        assert!((w.rhs - 2.0171786243461415).abs() < 1e-13, "rhs {}", w.rhs);
        assert!((w.margin - (-0.0041705082243760)).abs() < 1e-13, "margin {}", w.margin);
        // the oracle agrees on the sign and value
        let o = oracle_eval(&claim, &pt(1.0, E, 1.0, 3.0)).unwrap();
        assert!((o.margin - w.margin).abs() <= w.error_bound, "working-extended gap");
        assert!(o.margin < -o.error_bound);
    }

    #[test]
    fn t12_holds_at_candidate_point() {
        let claim = find_claim("T1.2").unwrap();
        let w = evaluate_claim(&claim, &pt(1.0, E, 1.0, 3.0)).unwrap();
        assert!((w.rhs - 2.0480546988460355).abs() < 1e-13, "rhs {}", w.rhs);
        assert!((w.margin - 0.0267055662755180).abs() < 1e-13, "margin {}", w.margin);
    }

    #[test]
    fn equal_orders_give_exactly_zero_margin() {
        for id in ["T1.1", "T1.2", "T1.3", "T2.1", "T2.2", "T2.3", "L2.4a", "L2.5"] {
            let claim = find_claim(id).unwrap();
            let w = evaluate_claim(&claim, &pt(1.0, 4.0, 2.5, 2.5)).unwrap();
            assert_eq!(w.margin, 0.0, "{id}");
            assert!(w.error_bound > 0.0);
        }
        for id in ["T3.1", "T3.2", "T3.3", "L2.6b"] {
            let claim = find_claim(id).unwrap();
            let w = evaluate_claim(&claim, &pt_w(4.0, 2.0, 1.5, 3.0, 3.0)).unwrap();
            assert_eq!(w.margin, 0.0, "{id}");
        }
    }

    #[test]
    fn zero_order_corner_uses_geometric_branch() {
        // p = q = 0 in the nonpositive branch: L(0,0) = 0 and M_0 = G
        let claim = find_claim("T1.1").unwrap();
        let point = pt(1.0, 4.0, 0.0, 0.0);
        assert!(claim.hypothesis.satisfied(&point));
        let w = evaluate_claim(&claim, &point).unwrap();
        assert_eq!(w.margin, 0.0);
        // mixed corner p = 0, q < 0: L(0, q) = 0, both sides finite
        let w = evaluate_claim(&claim, &pt(1.0, 4.0, 0.0, -2.0)).unwrap();
        assert!(w.margin.is_finite());
    }

    #[test]
    fn hypothesis_violation_is_an_error() {
        let claim = find_claim("T2.1").unwrap();
        // a > b violates b >= a
        let bad = pt(3.0, 1.0, 1.0, 2.0);
        assert!(matches!(evaluate_claim(&claim, &bad), Err(Error::HypothesisViolated(_))));
        assert!(matches!(oracle_eval(&claim, &bad), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn t31_candidate_violation_point() {
        // L(3, 2.5) vs M_1(L(1,3); 4, 2), oracle-confirmed
        let claim = find_claim("T3.1").unwrap();
        let w = evaluate_claim(&claim, &pt_w(4.0, 2.0, 1.0, 1.0, 3.0)).unwrap();
        assert!((w.lhs - 2.7424074738735386).abs() < 1e-13, "lhs {}", w.lhs);
        assert!((w.rhs - 2.7090995492955533).abs() < 1e-13, "rhs {}", w.rhs);
        assert!(w.margin < 0.0);
        let o = oracle_eval(&claim, &pt_w(4.0, 2.0, 1.0, 1.0, 3.0)).unwrap();
        assert!(o.margin < -o.error_bound);
        assert!((o.margin - w.margin).abs() <= w.error_bound);
    }

    #[test]
    fn t22_candidate_violation_point() {
        let claim = find_claim("T2.2").unwrap();
        let w = evaluate_claim(&claim, &pt(1.0, E, 1.0, 3.0)).unwrap();
        assert!((w.lhs - 2.1698819763144717).abs() < 1e-13, "lhs {}", w.lhs);
        assert!((w.rhs - 2.2561646711990355).abs() < 1e-13, "rhs {}", w.rhs);
        assert!(w.margin < 0.0);
    }

    #[test]
    fn three_term_margins_match_param_module() {
        use crate::params::{three_term, CurveFamily, ParamCurve};
        // TT-L at (1, e), center 2
        let claim = find_claim("TT-L").unwrap();
        let point = Point { a: 1.0, b: E, p: Some(2.0), q: None, omega: None, nu: None };
        let w = evaluate_claim(&claim, &point).unwrap();
        let curve =
            ParamCurve::new(CurveFamily::LehmerInOrder, PositivePair::new(1.0, E).unwrap()).unwrap();
        let tt = three_term(&curve, 2.0).unwrap();
        // claim margin is rhs - lhs = -(three-term margin)
        assert!((w.margin + tt).abs() < 1e-12, "{} vs {}", w.margin, -tt);
        assert!((tt - 0.41739).abs() < 1e-4);
    }

    #[test]
    fn scaling_invariance_of_margins() {
        for id in ["T1.1", "T2.2", "T3.1"] {
            let claim = find_claim(id).unwrap();
            let base = if id == &"T3.1"[..] {
                pt_w(4.0, 2.0, 1.0, 1.0, 3.0)
            } else {
                pt(1.0, E, 1.0, 3.0)
            };
            let m0 = evaluate_claim(&claim, &base).unwrap().margin;
            for t in [0.5, 2.0, 10.0] {
                let m1 = evaluate_claim(&claim, &base.scaled_pair(t)).unwrap().margin;
                let rel = (m1 - t * m0).abs() / (t * m0).abs();
                assert!(rel <= 1e-12, "{id} t={t}: {m1} vs {}", t * m0);
            }
        }
    }
}
