//! Stable evaluation of the nine bivariate mean families, in value space and
//! log space.
//!
//! Families: arithmetic `A`, geometric `G`, harmonic `H`, logarithmic `L`,
//! identric `I`, power `M_p` (with `M_0 = G`), weighted power `M_p(w; a, b)`,
//! Lehmer `L_p`, and the modified Alzer ratio `J_p` in two prefactor variants.
//!
//! Every evaluator:
//! - canonically orders the arguments first, so symmetric families are
//!   bit-identically symmetric;
//! - continuously extends to `a = b` (tagged [`EvalPath::Limit`]);
//! - switches to guarded series/`expm1` paths when `|log(b/a)|` (or `|p·u|`
//!   for the power mean) drops below `1e-6`, keeping relative error near
//!   machine epsilon through the removable singularities;
//! - works in log space when factoring powers, so nothing overflows for
//!   `a, b` in `[1e-300, 1e300]` and `|p| <= 1e4`;
//! - reports a conservative absolute error bound for its log value.

use crate::error::{Error, Result};
use crate::stable::{log_abs_expm1, log_add_exp, log_mean_exp, log_ratio, logcosh};

/// Series/`expm1` guard threshold on `|log(b/a)|` (and on `|p·u|` for the
/// power mean).
pub const SERIES_THRESHOLD: f64 = 1e-6;

const EPS: f64 = f64::EPSILON;

/// A pair of positive, finite reals: the arguments of every mean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PositivePair {
    a: f64,
    b: f64,
}

impl PositivePair {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
            Ok(PositivePair { a, b })
        } else {
            Err(Error::InvalidPair { a, b })
        }
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    #[inline]
    pub fn min(&self) -> f64 {
        self.a.min(self.b)
    }

    #[inline]
    pub fn max(&self) -> f64 {
        self.a.max(self.b)
    }

    /// b/a.
    #[inline]
    pub fn ratio(&self) -> f64 {
        self.b / self.a
    }

    /// Signed log ratio `log(b/a)`, cancellation-free near the diagonal.
    #[inline]
    pub fn log_ratio_signed(&self) -> f64 {
        if self.a == self.b {
            0.0
        } else if self.b > self.a {
            log_ratio(self.b, self.a)
        } else {
            -log_ratio(self.a, self.b)
        }
    }
}

/// The five classical (parameter-free) means.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassicalKind {
    Arithmetic,
    Geometric,
    Harmonic,
    Logarithmic,
    Identric,
}

impl ClassicalKind {
    pub const ALL: [ClassicalKind; 5] = [
        ClassicalKind::Arithmetic,
        ClassicalKind::Geometric,
        ClassicalKind::Harmonic,
        ClassicalKind::Logarithmic,
        ClassicalKind::Identric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassicalKind::Arithmetic => "arithmetic",
            ClassicalKind::Geometric => "geometric",
            ClassicalKind::Harmonic => "harmonic",
            ClassicalKind::Logarithmic => "logarithmic",
            ClassicalKind::Identric => "identric",
        }
    }
}

/// Prefactor convention for the modified Alzer ratio.
///
/// `Paper` uses `(p+1)/p`, which does not fix the diagonal (`J_p(a,a) != a`);
/// `Normalized` uses `p/(p+1)` and is a true mean. Both are first-class and
/// selected explicitly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlzerVariant {
    Paper,
    Normalized,
}

impl AlzerVariant {
    pub fn name(self) -> &'static str {
        match self {
            AlzerVariant::Paper => "paper",
            AlzerVariant::Normalized => "normalized",
        }
    }
}

/// Tagged description of one mean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeanSpec {
    Classical(ClassicalKind),
    Power(f64),
    WeightedPower { order: f64, weight: f64 },
    Lehmer(f64),
    Alzer { order: f64, variant: AlzerVariant },
}

/// Which evaluation route produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalPath {
    Direct,
    Series,
    Limit,
    LogSpace,
}

impl EvalPath {
    pub fn name(self) -> &'static str {
        match self {
            EvalPath::Direct => "direct",
            EvalPath::Series => "series",
            EvalPath::Limit => "limit",
            EvalPath::LogSpace => "logspace",
        }
    }
}

/// One mean evaluation: value, log value, a conservative absolute rounding
/// bound for the log value, and the route taken.
#[derive(Clone, Copy, Debug)]
pub struct EvalResult {
    pub value: f64,
    pub log_value: f64,
    /// Estimated absolute rounding error of `log_value` (always finite).
    pub abs_error_bound: f64,
    pub path: EvalPath,
    /// Set when a parameter lies outside the family's conventionally stated
    /// domain (Lehmer with `p <= 0`); the value is still the defining formula.
    pub outside_conventional_domain: bool,
}

impl EvalResult {
    fn new(value: f64, log_value: f64, err: f64, path: EvalPath) -> Self {
        EvalResult {
            value,
            log_value,
            abs_error_bound: err,
            path,
            outside_conventional_domain: false,
        }
    }
}

/// Canonically ordered pair geometry shared by the evaluators.
struct Geom {
    hi: f64,
    lo: f64,
    l_hi: f64,
    l_lo: f64,
    /// Precise `log(hi/lo) >= 0`.
    delta: f64,
    /// Midpoint of the logs, i.e. `log G`.
    mid: f64,
}

impl Geom {
    fn of(pair: &PositivePair) -> Geom {
        let (hi, lo) = (pair.max(), pair.min());
        let (l_hi, l_lo) = (hi.ln(), lo.ln());
        let delta = if hi == lo { 0.0 } else { log_ratio(hi, lo) };
        Geom { hi, lo, l_hi, l_lo, delta, mid: 0.5 * (l_hi + l_lo) }
    }

    /// `(hi - lo)/lo`; exact up to one rounding for ratios below 2.
    #[inline]
    fn t(&self) -> f64 {
        (self.hi - self.lo) / self.lo
    }
}

fn limit_at_diagonal(a: f64) -> EvalResult {
    let log = a.ln();
    EvalResult::new(a, log, EPS * (2.0 + log.abs()), EvalPath::Limit)
}

#[inline]
fn clamp_to_pair(v: f64, g: &Geom) -> f64 {
    v.clamp(g.lo, g.hi)
}

// ---------------------------------------------------------------------------
// classical means
// ---------------------------------------------------------------------------

/// Evaluate one of A, G, H, L, I.
///
/// `L` and `I` are continuously extended at `a = b`; below the series
/// threshold they use guarded truncated series in `t = (hi - lo)/lo`.
pub fn classical_mean(kind: ClassicalKind, pair: &PositivePair) -> Result<EvalResult> {
    if pair.a == pair.b {
        return Ok(limit_at_diagonal(pair.a));
    }
    let g = Geom::of(pair);
    Ok(match kind {
        ClassicalKind::Arithmetic => {
            let v = 0.5 * g.hi + 0.5 * g.lo;
            let log = v.ln();
            EvalResult::new(v, log, EPS * (4.0 + log.abs()), EvalPath::Direct)
        }
        ClassicalKind::Geometric => {
            let v = g.hi.sqrt() * g.lo.sqrt();
            EvalResult::new(v, g.mid, EPS * (4.0 + 0.5 * (g.l_hi.abs() + g.l_lo.abs())), EvalPath::Direct)
        }
        ClassicalKind::Harmonic => {
            let v = 2.0 / (1.0 / g.hi + 1.0 / g.lo);
            let log = v.ln();
            EvalResult::new(v, log, EPS * (5.0 + log.abs()), EvalPath::Direct)
        }
        ClassicalKind::Logarithmic => log_mean(&g),
        ClassicalKind::Identric => identric_mean(&g),
    })
}

fn log_mean(g: &Geom) -> EvalResult {
    if g.delta < SERIES_THRESHOLD {
        let t = g.t();
        // t/log1p(t) = 1 + t/2 - t^2/12 + t^3/24 - ...
        let corr = t * (0.5 + t * (-1.0 / 12.0 + t / 24.0));
        let log = g.l_lo + corr.ln_1p();
        let v = g.lo * (1.0 + corr);
        EvalResult::new(v, log, EPS * (4.0 + g.l_lo.abs()), EvalPath::Series)
    } else {
        // L = (hi - lo)/log(hi/lo); delta is the cancellation-free log ratio
        let v = (g.hi - g.lo) / g.delta;
        let log = v.ln();
        EvalResult::new(v, log, EPS * (5.0 + log.abs()), EvalPath::Direct)
    }
}

fn identric_mean(g: &Geom) -> EvalResult {
    let (log, path, err) = if g.delta < SERIES_THRESHOLD {
        let t = g.t();
        // log I = log lo + t/2 - t^2/6 + t^3/12 - ...
        let corr = t * (0.5 + t * (-1.0 / 6.0 + t / 12.0));
        (g.l_lo + corr, EvalPath::Series, EPS * (4.0 + g.l_lo.abs()))
    } else if g.delta <= 690.0 {
        // log I = log lo + (1+t) log1p(t)/t - 1
        let t = g.t();
        let q = (1.0 + t) * t.ln_1p() / t - 1.0;
        (g.l_lo + q, EvalPath::Direct, EPS * (6.0 + g.l_lo.abs() + q.abs()))
    } else {
        // extreme ratios: the defining quotient has no cancellation left
        let q = (g.hi * g.l_hi - g.lo * g.l_lo) / (g.hi - g.lo) - 1.0;
        (q, EvalPath::Direct, EPS * (6.0 + g.l_hi.abs() + q.abs()))
    };
    let v = clamp_to_pair(log.exp(), g);
    EvalResult::new(v, log, err, path)
}

// ---------------------------------------------------------------------------
// power mean
// ---------------------------------------------------------------------------

/// Power mean `M_p = ((a^p + b^p)/2)^{1/p}`, `M_0 = G` exactly.
///
/// Uses `log M_p = (log a + log b)/2 + logcosh(p u)/p` with
/// `u = log(max/min)/2`, switching to the even series
/// `p u^2/2 (1 - (p u)^2/6 (1 - ...))` for `|p u|` below the threshold.
pub fn power_mean(p: f64, pair: &PositivePair) -> Result<EvalResult> {
    if !p.is_finite() {
        return Err(Error::ParamDomain { family: "power", detail: format!("order must be finite, got {p}") });
    }
    if pair.a == pair.b {
        return Ok(limit_at_diagonal(pair.a));
    }
    let g = Geom::of(pair);
    if p == 0.0 {
        let v = g.hi.sqrt() * g.lo.sqrt();
        return Ok(EvalResult::new(
            v,
            g.mid,
            EPS * (4.0 + 0.5 * (g.l_hi.abs() + g.l_lo.abs())),
            EvalPath::Direct,
        ));
    }
    let u = 0.5 * g.delta;
    let x = p * u;
    let (corr, path) = if x.abs() < SERIES_THRESHOLD {
        // (1/p) logcosh(p u) = (p u^2/2)(1 - x^2/6 (1 - 4x^2/15) - ...)
        let x2 = x * x;
        ((0.5 * p * u * u) * (1.0 - x2 / 6.0 * (1.0 - 4.0 * x2 / 15.0)), EvalPath::Series)
    } else {
        (logcosh(x) / p, EvalPath::LogSpace)
    };
    let log = g.mid + corr;
    let v = clamp_to_pair(log.exp(), &g);
    let err = EPS * (4.0 + 0.5 * (g.l_hi.abs() + g.l_lo.abs()) + 2.0 * corr.abs());
    Ok(EvalResult::new(v, log, err, path))
}

// ---------------------------------------------------------------------------
// weighted power mean
// ---------------------------------------------------------------------------

/// Weighted power mean `((a^p + w b^p)/(1 + w))^{1/p}` for `p > 0`, `w > 0`.
///
/// Evaluated in log space with the dominant power factored out, so nothing
/// overflows; homogeneous of degree 1 and equal to `M_p` at `w = 1`. Not
/// symmetric: the weight multiplies `b`.
pub fn weighted_power_mean(p: f64, weight: f64, pair: &PositivePair) -> Result<EvalResult> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::ParamDomain { family: "weighted_power", detail: format!("order must be positive and finite, got {p}") });
    }
    if !(weight > 0.0) || !weight.is_finite() {
        return Err(Error::ParamDomain { family: "weighted_power", detail: format!("weight must be positive and finite, got {weight}") });
    }
    if pair.a == pair.b {
        return Ok(limit_at_diagonal(pair.a));
    }
    let (la, lb) = (pair.a.ln(), pair.b.ln());
    let lw = weight.ln();
    let lse = log_add_exp(p * la, lw + p * lb);
    let log = (lse - weight.ln_1p()) / p;
    let g = Geom::of(pair);
    let v = clamp_to_pair(log.exp(), &g);
    let err = EPS * (6.0 + (lse.abs() + weight.ln_1p()) / p.max(1.0) + log.abs());
    Ok(EvalResult::new(v, log, err, EvalPath::LogSpace))
}

// ---------------------------------------------------------------------------
// Lehmer mean
// ---------------------------------------------------------------------------

/// Lehmer mean `(a^p + b^p)/(a^{p-1} + b^{p-1})`, any real `p`.
///
/// The conventional statement of the family restricts to `p > 0`; results for
/// `p <= 0` carry [`EvalResult::outside_conventional_domain`].
pub fn lehmer_mean(p: f64, pair: &PositivePair) -> Result<EvalResult> {
    if !p.is_finite() {
        return Err(Error::ParamDomain { family: "lehmer", detail: format!("order must be finite, got {p}") });
    }
    let flagged = p <= 0.0;
    if pair.a == pair.b {
        let mut r = limit_at_diagonal(pair.a);
        r.outside_conventional_domain = flagged;
        return Ok(r);
    }
    let g = Geom::of(pair);
    // log L_p = [max(p l_hi, p l_lo) - max((p-1) l_hi, (p-1) l_lo)]
    //         + log1p(e^{-|p| d}) - log1p(e^{-|p-1| d})
    // The bracket simplifies exactly per sign regime, avoiding cancellation.
    let base = if p >= 1.0 {
        g.l_hi
    } else if p <= 0.0 {
        g.l_lo
    } else {
        g.l_lo + p * g.delta
    };
    let q = p - 1.0;
    let log = base + (-(p.abs() * g.delta)).exp().ln_1p() - (-(q.abs() * g.delta)).exp().ln_1p();
    let v = clamp_to_pair(log.exp(), &g);
    let mut r = EvalResult::new(v, log, EPS * (8.0 + log.abs()), EvalPath::LogSpace);
    r.outside_conventional_domain = flagged;
    Ok(r)
}

// ---------------------------------------------------------------------------
// modified Alzer ratio
// ---------------------------------------------------------------------------

/// Modified Alzer ratio `J_p` with explicit prefactor variant.
///
/// `Paper`: `((p+1)/p) (a^{p+1} - b^{p+1})/(a^p - b^p)`, `p` not in `{0, -1}`;
/// at `a = b` the continuous limit `a (p+1)^2/p^2` (not a mean value).
/// `Normalized`: prefactor `p/(p+1)`; at `a = b` the limit is `a`, and at
/// `p = -1` the continuous limit `G^2/L`. Power differences go through
/// `expm1` of log ratios, so precision survives near the diagonal.
pub fn alzer_mean(p: f64, pair: &PositivePair, variant: AlzerVariant) -> Result<EvalResult> {
    if p == 0.0 || !p.is_finite() {
        return Err(Error::ParamDomain { family: "alzer", detail: format!("order must be finite and nonzero, got {p}") });
    }
    let q = p + 1.0;
    if q == 0.0 && variant == AlzerVariant::Paper {
        return Err(Error::ParamDomain { family: "alzer", detail: "order -1 makes the (p+1)/p prefactor singular".into() });
    }
    let g = Geom::of(pair);
    if pair.a == pair.b {
        return Ok(match variant {
            AlzerVariant::Paper => {
                let log = pair.a.ln() + 2.0 * (q.abs().ln() - p.abs().ln());
                EvalResult::new(log.exp(), log, EPS * (6.0 + log.abs()), EvalPath::Limit)
            }
            AlzerVariant::Normalized => limit_at_diagonal(pair.a),
        });
    }
    if q == 0.0 {
        // normalized variant at p = -1: lim J = G^2 / L
        let l = log_mean(&g);
        let log = (g.l_hi + g.l_lo) - l.log_value;
        let v = clamp_to_pair(log.exp(), &g);
        return Ok(EvalResult::new(v, log, l.abs_error_bound + EPS * (4.0 + log.abs()), EvalPath::Limit));
    }
    // |a^c - b^c| = e^{c l_hi} |expm1(-c delta)|
    let lae_q = log_abs_expm1(-q * g.delta);
    let lae_p = log_abs_expm1(-p * g.delta);
    let log_quot = g.l_hi + lae_q - lae_p;
    let prefactor = match variant {
        AlzerVariant::Paper => q.abs().ln() - p.abs().ln(),
        AlzerVariant::Normalized => p.abs().ln() - q.abs().ln(),
    };
    let log = prefactor + log_quot;
    let v = match variant {
        AlzerVariant::Paper => log.exp(),
        AlzerVariant::Normalized => clamp_to_pair(log.exp(), &g),
    };
    let path = if g.delta < SERIES_THRESHOLD { EvalPath::Series } else { EvalPath::LogSpace };
    let err = EPS * (10.0 + log.abs() + 0.5 * (lae_q.abs() + lae_p.abs()));
    Ok(EvalResult::new(v, log, err, path))
}

// ---------------------------------------------------------------------------
// front door
// ---------------------------------------------------------------------------

/// Evaluate any mean described by a [`MeanSpec`].
pub fn eval(spec: &MeanSpec, pair: &PositivePair) -> Result<EvalResult> {
    match *spec {
        MeanSpec::Classical(kind) => classical_mean(kind, pair),
        MeanSpec::Power(p) => power_mean(p, pair),
        MeanSpec::WeightedPower { order, weight } => weighted_power_mean(order, weight, pair),
        MeanSpec::Lehmer(p) => lehmer_mean(p, pair),
        MeanSpec::Alzer { order, variant } => alzer_mean(order, pair, variant),
    }
}

/// Log-space front door: `(log_value, abs_error_bound)`.
pub fn log_eval(spec: &MeanSpec, pair: &PositivePair) -> Result<(f64, f64)> {
    eval(spec, pair).map(|r| (r.log_value, r.abs_error_bound))
}
