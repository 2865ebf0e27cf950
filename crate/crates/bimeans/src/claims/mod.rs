//! Catalog, evaluation, and deterministic counterexample search for the
//! composite mean inequalities.
//!
//! A claim compares two closed expressions built from means (classical means
//! of computed values, parametric means whose parameter may itself be a
//! classical mean of the point's order/weight coordinates, plus squares and
//! products for the three-term inequalities). Margins are oriented so that
//! negative always means violation, and no verdict says "violated" until the
//! extended-precision oracle has confirmed the sign.

mod catalog;
mod eval;
mod probe;
mod search;

pub use catalog::catalog;
pub use eval::{evaluate_claim, oracle_eval};
pub use probe::{mn_convexity_probe, ProbeClass, ProbeFunction, ProbeReport};
pub use search::{audit_all, search, AuditReport};

use crate::error::{Error, Result};
use crate::means::{AlzerVariant, ClassicalKind};

// ---------------------------------------------------------------------------
// points
// ---------------------------------------------------------------------------

/// A sample point: the argument pair plus whichever parameters a claim uses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub a: f64,
    pub b: f64,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub omega: Option<f64>,
    pub nu: Option<f64>,
}

impl Point {
    pub fn pair_only(a: f64, b: f64) -> Point {
        Point { a, b, p: None, q: None, omega: None, nu: None }
    }

    /// Lexicographic order on (a, b, p, q, omega, nu); used only for
    /// deterministic tie-breaking among equal margins.
    pub fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        let key = |pt: &Point| {
            [
                pt.a,
                pt.b,
                pt.p.unwrap_or(f64::NEG_INFINITY),
                pt.q.unwrap_or(f64::NEG_INFINITY),
                pt.omega.unwrap_or(f64::NEG_INFINITY),
                pt.nu.unwrap_or(f64::NEG_INFINITY),
            ]
        };
        key(self).partial_cmp(&key(other)).unwrap_or(std::cmp::Ordering::Equal)
    }

    pub fn scaled_pair(&self, t: f64) -> Point {
        Point { a: t * self.a, b: t * self.b, ..*self }
    }
}

/// Claim variables beyond the argument pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    P,
    Q,
    Omega,
    Nu,
}

// ---------------------------------------------------------------------------
// expressions
// ---------------------------------------------------------------------------

/// A parameter expression: a point coordinate, a shifted coordinate, or a
/// classical mean of two parameter expressions (the "parameter means"
/// L(p,q), A(p,q), I(p,q) and A(w,v), L(w,v)).
#[derive(Clone, Debug)]
pub enum ParamExpr {
    Coord(Var),
    Shift(Var, f64),
    Mean(ClassicalKind, Box<ParamExpr>, Box<ParamExpr>),
}

impl ParamExpr {
    pub fn mean(kind: ClassicalKind, x: ParamExpr, y: ParamExpr) -> ParamExpr {
        ParamExpr::Mean(kind, Box::new(x), Box::new(y))
    }
}

/// A closed mean expression over a point.
#[derive(Clone, Debug)]
pub enum Expr {
    /// Power mean of the point's pair at a parameter expression.
    Power(ParamExpr),
    /// Lehmer mean of the pair at a parameter expression.
    Lehmer(ParamExpr),
    /// Alzer ratio of the pair at a parameter expression.
    Alzer(ParamExpr, AlzerVariant),
    /// Weighted power mean of the pair: fixed-order coordinate, weight expression.
    Weighted { order: ParamExpr, weight: ParamExpr },
    /// Classical mean of two computed values.
    Classical(ClassicalKind, Box<Expr>, Box<Expr>),
    /// Square of a computed value (three-term left sides).
    Square(Box<Expr>),
    /// Product of two computed values (three-term right sides).
    Product(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn classical(kind: ClassicalKind, x: Expr, y: Expr) -> Expr {
        Expr::Classical(kind, Box::new(x), Box::new(y))
    }

    pub fn square(x: Expr) -> Expr {
        Expr::Square(Box::new(x))
    }

    pub fn product(x: Expr, y: Expr) -> Expr {
        Expr::Product(Box::new(x), Box::new(y))
    }
}

/// Claim orientation. Margins are `rhs - lhs` for `<=` and `lhs - rhs` for
/// `>=`, so negative margins are violations either way.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }
}

// ---------------------------------------------------------------------------
// hypotheses
// ---------------------------------------------------------------------------

/// The hypothesis domains appearing in the catalog, decidable pointwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    /// (p, q > 0) or (p, q <= 0 and b >= a).
    PosOrdersOrNonPosSecondGe,
    /// p, q > 0 and b >= a.
    PosOrdersSecondGe,
    /// p, q > 0 and b > a.
    PosOrdersSecondGt,
    /// p, q > 0 (pair unrestricted).
    PosOrders,
    /// p, q < 0 and b >= a.
    NegOrdersSecondGe,
    /// p, q >= 1 (pair unrestricted).
    OrdersGeOne,
    /// p, q <= -1 (pair unrestricted).
    OrdersLeMinusOne,
    /// a >= b >= 1 and p, omega, nu > 0.
    WeightsFirstGeSecondGeOne,
    /// b >= a > 1 and p, omega, nu > 0.
    WeightsSecondGeFirstGtOne,
    /// a >= b > 1 and p, omega, nu > 0.
    WeightsFirstGeSecondGtOne,
    /// p > 1 and b >= a.
    CenterGtOneSecondGe,
    /// p > 1 and b > a.
    CenterGtOneSecondGt,
    /// p > 0, omega > 1 (the three-term weight center) and b >= a > 1.
    CenterWeightGtOneSecondGeFirstGtOne,
}

/// Which side of the pair the sampled spread lands on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairOrientation {
    /// (a, b) = (anchor, anchor * ratio): b is the larger argument.
    SecondLarger,
    /// (a, b) = (anchor * ratio, anchor): a is the larger argument.
    FirstLarger,
}

/// Sign branches over which a claim's order coordinates are sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderBranch {
    Positive,
    NonPositive,
}

impl Hypothesis {
    pub fn satisfied(&self, pt: &Point) -> bool {
        let (a, b) = (pt.a, pt.b);
        let p = pt.p.unwrap_or(f64::NAN);
        let q = pt.q.unwrap_or(f64::NAN);
        let w = pt.omega.unwrap_or(f64::NAN);
        let v = pt.nu.unwrap_or(f64::NAN);
        match self {
            Hypothesis::PosOrdersOrNonPosSecondGe => {
                (p > 0.0 && q > 0.0) || (p <= 0.0 && q <= 0.0 && b >= a)
            }
            Hypothesis::PosOrdersSecondGe => p > 0.0 && q > 0.0 && b >= a,
            Hypothesis::PosOrdersSecondGt => p > 0.0 && q > 0.0 && b > a,
            Hypothesis::PosOrders => p > 0.0 && q > 0.0,
            Hypothesis::NegOrdersSecondGe => p < 0.0 && q < 0.0 && b >= a,
            Hypothesis::OrdersGeOne => p >= 1.0 && q >= 1.0,
            Hypothesis::OrdersLeMinusOne => p <= -1.0 && q <= -1.0,
            Hypothesis::WeightsFirstGeSecondGeOne => {
                a >= b && b >= 1.0 && p > 0.0 && w > 0.0 && v > 0.0
            }
            Hypothesis::WeightsSecondGeFirstGtOne => {
                b >= a && a > 1.0 && p > 0.0 && w > 0.0 && v > 0.0
            }
            Hypothesis::WeightsFirstGeSecondGtOne => {
                a >= b && b > 1.0 && p > 0.0 && w > 0.0 && v > 0.0
            }
            Hypothesis::CenterGtOneSecondGe => p > 1.0 && b >= a,
            Hypothesis::CenterGtOneSecondGt => p > 1.0 && b > a,
            Hypothesis::CenterWeightGtOneSecondGeFirstGtOne => {
                p > 0.0 && w > 1.0 && b >= a && a > 1.0
            }
        }
    }

    /// Human-readable hypothesis description for reports.
    pub fn describe(&self) -> &'static str {
        match self {
            Hypothesis::PosOrdersOrNonPosSecondGe => "(p,q > 0) or (p,q <= 0 and b >= a)",
            Hypothesis::PosOrdersSecondGe => "p,q > 0 and b >= a",
            Hypothesis::PosOrdersSecondGt => "p,q > 0 and b > a",
            Hypothesis::PosOrders => "p,q > 0",
            Hypothesis::NegOrdersSecondGe => "p,q < 0 and b >= a",
            Hypothesis::OrdersGeOne => "p,q >= 1",
            Hypothesis::OrdersLeMinusOne => "p,q <= -1",
            Hypothesis::WeightsFirstGeSecondGeOne => "a >= b >= 1 and p,omega,nu > 0",
            Hypothesis::WeightsSecondGeFirstGtOne => "b >= a > 1 and p,omega,nu > 0",
            Hypothesis::WeightsFirstGeSecondGtOne => "a >= b > 1 and p,omega,nu > 0",
            Hypothesis::CenterGtOneSecondGe => "p > 1 and b >= a",
            Hypothesis::CenterGtOneSecondGt => "p > 1 and b > a",
            Hypothesis::CenterWeightGtOneSecondGeFirstGtOne => "p > 0, omega > 1 and b >= a > 1",
        }
    }

    /// How grid ratios map onto argument pairs for this hypothesis.
    pub fn pair_orientation(&self) -> PairOrientation {
        match self {
            Hypothesis::WeightsFirstGeSecondGeOne | Hypothesis::WeightsFirstGeSecondGtOne => {
                PairOrientation::FirstLarger
            }
            _ => PairOrientation::SecondLarger,
        }
    }

    /// Base value of the smaller argument. Hypotheses demanding both
    /// arguments strictly above 1 anchor at 2 (an `a = 1` anchor could never
    /// satisfy them); margins scale linearly with the anchor.
    pub fn pair_anchor(&self) -> f64 {
        match self {
            Hypothesis::WeightsSecondGeFirstGtOne
            | Hypothesis::WeightsFirstGeSecondGtOne
            | Hypothesis::CenterWeightGtOneSecondGeFirstGtOne => 2.0,
            _ => 1.0,
        }
    }

    /// Sign branches to sample for the order coordinates.
    pub fn order_branches(&self) -> &'static [OrderBranch] {
        match self {
            Hypothesis::PosOrdersOrNonPosSecondGe => {
                &[OrderBranch::Positive, OrderBranch::NonPositive]
            }
            Hypothesis::NegOrdersSecondGe | Hypothesis::OrdersLeMinusOne => {
                &[OrderBranch::NonPositive]
            }
            _ => &[OrderBranch::Positive],
        }
    }

    /// Construct the argument pair for a sampled spread ratio.
    pub fn make_pair(&self, ratio: f64) -> (f64, f64) {
        let anchor = self.pair_anchor();
        match self.pair_orientation() {
            PairOrientation::SecondLarger => (anchor, anchor * ratio),
            PairOrientation::FirstLarger => (anchor * ratio, anchor),
        }
    }
}

// ---------------------------------------------------------------------------
// claims
// ---------------------------------------------------------------------------

/// One catalogued inequality.
#[derive(Clone, Debug)]
pub struct ClaimSpec {
    pub id: &'static str,
    /// The inequality as text, e.g. `L(M_p, M_q) <= M_{L(p,q)}`.
    pub statement: &'static str,
    pub lhs: Expr,
    pub rhs: Expr,
    pub relation: Relation,
    pub hypothesis: Hypothesis,
    /// Claims whose truth the source argument chains through.
    pub depends_on: &'static [&'static str],
    /// Coordinates this claim actually uses (beyond the pair).
    pub vars: &'static [Var],
}

/// Evaluation precision of a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Working,
    Extended,
}

impl Precision {
    pub fn name(self) -> &'static str {
        match self {
            Precision::Working => "working",
            Precision::Extended => "extended",
        }
    }
}

/// One evaluated point of a claim.
#[derive(Clone, Copy, Debug)]
pub struct Witness {
    pub point: Point,
    pub lhs: f64,
    pub rhs: f64,
    /// Oriented slack: negative means violation.
    pub margin: f64,
    pub error_bound: f64,
    pub precision: Precision,
}

/// Audit outcome for one claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    HoldsOnSample,
    Violated,
    Vacuous,
    Indeterminate,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::HoldsOnSample => "holds_on_sample",
            Status::Violated => "violated",
            Status::Vacuous => "vacuous",
            Status::Indeterminate => "indeterminate",
        }
    }
}

/// Verdict for one claim under one search configuration.
#[derive(Clone, Debug)]
pub struct ClaimVerdict {
    pub id: String,
    pub status: Status,
    /// The decisive worst witness (absent only for vacuous verdicts).
    pub worst: Option<Witness>,
    pub samples_evaluated: u64,
    pub skipped: u64,
    pub config_fingerprint: String,
    /// `(claim id, status)` for each dependency; filled by [`audit_all`].
    pub depends_on_status: Vec<(String, Status)>,
}

// ---------------------------------------------------------------------------
// search configuration
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridScale {
    Linear,
    Log,
}

impl GridScale {
    pub fn name(self) -> &'static str {
        match self {
            GridScale::Linear => "linear",
            GridScale::Log => "log",
        }
    }
}

/// One variable's sampling range.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub scale: GridScale,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, count: usize, scale: GridScale) -> Result<Self> {
        let spec = GridSpec { lo, hi, count, scale };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::Config(format!("grid needs lo < hi, got [{}, {}]", self.lo, self.hi)));
        }
        if self.count < 2 {
            return Err(Error::Config(format!("grid needs count >= 2, got {}", self.count)));
        }
        if self.scale == GridScale::Log && self.lo <= 0.0 {
            return Err(Error::Config(format!("log grid needs lo > 0, got {}", self.lo)));
        }
        Ok(())
    }

    /// Inclusive uniform grid in the declared scale.
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        let mut out = Vec::with_capacity(n);
        let (lo, hi) = match self.scale {
            GridScale::Linear => (self.lo, self.hi),
            GridScale::Log => (self.lo.ln(), self.hi.ln()),
        };
        for i in 0..n {
            let v = if i == 0 {
                self.lo
            } else if i + 1 == n {
                self.hi
            } else {
                let raw = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                match self.scale {
                    GridScale::Linear => raw,
                    GridScale::Log => raw.exp(),
                }
            };
            out.push(v);
        }
        out
    }

    /// One uniform draw in the declared scale.
    pub fn sample<R: rand::Rng>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        match self.scale {
            GridScale::Linear => self.lo + u * (self.hi - self.lo),
            GridScale::Log => (self.lo.ln() + u * (self.hi.ln() - self.lo.ln())).exp(),
        }
    }
}

/// Deterministic sampling plan shared by every claim.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Spread ratio max/min of the argument pair.
    pub ratio: GridSpec,
    /// Extra ratio points appended to the grid (near-diagonal probe).
    pub extra_ratios: Vec<f64>,
    /// Order coordinates p and q.
    pub order: GridSpec,
    /// Weight coordinates omega and nu (and the three-term weight center).
    pub weight: GridSpec,
    pub random_count: usize,
    pub seed: u64,
    pub refinement_rounds: usize,
    pub shrink_factor: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            ratio: GridSpec { lo: 1.01, hi: 20.0, count: 24, scale: GridScale::Log },
            extra_ratios: vec![1.0 + 1e-6],
            order: GridSpec { lo: 0.05, hi: 5.0, count: 20, scale: GridScale::Linear },
            weight: GridSpec { lo: 0.1, hi: 10.0, count: 16, scale: GridScale::Log },
            random_count: 2000,
            seed: 42,
            refinement_rounds: 6,
            shrink_factor: 0.5,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        self.ratio.validate()?;
        self.order.validate()?;
        self.weight.validate()?;
        for &r in &self.extra_ratios {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::Config(format!("extra ratio must be positive, got {r}")));
            }
        }
        if !(self.shrink_factor > 0.0 && self.shrink_factor < 1.0) {
            return Err(Error::Config(format!(
                "shrink factor must lie in (0,1), got {}",
                self.shrink_factor
            )));
        }
        Ok(())
    }

    /// Stable fingerprint of the whole configuration.
    pub fn fingerprint(&self) -> String {
        let mut s = String::new();
        let grid = |g: &GridSpec| format!("{:?}|{:?}|{}|{};", g.lo, g.hi, g.count, g.scale.name());
        s.push_str(&grid(&self.ratio));
        for r in &self.extra_ratios {
            s.push_str(&format!("{r:?},"));
        }
        s.push(';');
        s.push_str(&grid(&self.order));
        s.push_str(&grid(&self.weight));
        s.push_str(&format!(
            "{}|{}|{}|{:?}",
            self.random_count, self.seed, self.refinement_rounds, self.shrink_factor
        ));
        format!("{:016x}", fnv1a64(s.as_bytes()))
    }
}

/// FNV-1a 64-bit hash (stable across platforms and runs).
pub(crate) fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_values_hit_endpoints_exactly() {
        let g = GridSpec { lo: 1.01, hi: 20.0, count: 24, scale: GridScale::Log };
        let v = g.values();
        assert_eq!(v.len(), 24);
        assert_eq!(v[0], 1.01);
        assert_eq!(v[23], 20.0);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::default().validate().is_ok());
        let mut c = SearchConfig::default();
        c.shrink_factor = 1.0;
        assert!(c.validate().is_err());
        assert!(GridSpec::new(2.0, 1.0, 8, GridScale::Linear).is_err());
        assert!(GridSpec::new(-1.0, 1.0, 8, GridScale::Log).is_err());
        assert!(GridSpec::new(1.0, 2.0, 1, GridScale::Linear).is_err());
    }

    #[test]
    fn fingerprint_is_sensitive_and_stable() {
        let c = SearchConfig::default();
        let f1 = c.fingerprint();
        let f2 = c.fingerprint();
        assert_eq!(f1, f2);
        let mut c2 = c.clone();
        c2.seed = 43;
        assert_ne!(f1, c2.fingerprint());
    }

    #[test]
    fn hypothesis_pair_construction() {
        let h = Hypothesis::WeightsFirstGeSecondGeOne; // a >= b >= 1
        let (a, b) = h.make_pair(2.0);
        assert!(a >= b && b >= 1.0);
        let h = Hypothesis::WeightsSecondGeFirstGtOne; // b >= a > 1
        let (a, b) = h.make_pair(2.0);
        assert!(b >= a && a > 1.0);
        let h = Hypothesis::PosOrdersSecondGe;
        let (a, b) = h.make_pair(3.0);
        assert!(b >= a);
    }
}
