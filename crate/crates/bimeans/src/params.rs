//! First and second derivatives of the parameter maps `t -> log mean(t)`,
//! finite-difference cross-validation, and interval classification of
//! monotonicity and log-convexity.
//!
//! The closed forms are derived directly from the defining formulas (not
//! transcribed from any printed source; see `FORMULA_LEDGER.md` at the repo
//! root for the discrepancies that motivated this). With `lam = b/a` and
//! `L = ln lam`:
//!
//! - power curve `f(p) = log M_p`: with `u = L/2`, `x = p u`,
//!   `f'  = (x tanh x - logcosh x)/p^2`,
//!   `f'' = (x^2 sech^2 x - 2x tanh x + 2 logcosh x)/p^3`;
//! - Lehmer curve `g(p) = log L_p`: with `z_c = c L`,
//!   `g'  = L sinh(L/2) / (2 cosh(z_p/2) cosh(z_{p-1}/2))`,
//!   `g'' = -L^2 sinh((2p-1)L/2) sinh(L/2) / (4 cosh^2(z_p/2) cosh^2(z_{p-1}/2))`
//!   (the product identities make both cancellation-free and give exact
//!   signs: `g' > 0` for all real `p`, `sign(g'') = -sign(2p - 1)`);
//! - Alzer curve `h(p) = log J_p` (printed-prefactor form): with
//!   `w(z) = e^z/(e^z - 1)` and `q = p + 1`,
//!   `h'  = 1/q - 1/p + L (w(qL) - w(pL))`,
//!   `h'' = 1/p^2 - 1/q^2 + L^2 (w'(qL) - w'(pL))`,
//!   with the Laurent series of `w` taking over when both `|pL|, |qL|` are
//!   small; the normalized variant subtracts the derivative of
//!   `2 log(q/p)`;
//! - weighted curve `k(w) = log M_p(w; a, b)` (fixed `p > 0`): with
//!   `r = lam^p`,
//!   `k'  = (r - 1) / (p (1 + w r)(1 + w))`,
//!   `k'' = -(r - 1)(1 + r + 2 w r) / (p (1 + w)^2 (1 + w r)^2)`
//!   (the numerators simplify exactly; `r - 1 = expm1(pL)` carries the sign
//!   of `b - a`).
//!
//! Every closed form must pass [`fd_check`], which differences the
//! extended-precision log mean so that stencil noise stays far below the
//! 1e-6 validation tolerance even for tiny derivatives.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::means::{self, AlzerVariant, MeanSpec, PositivePair};
use crate::oracle;
use crate::stable::{exp_ratio_pole, exp_ratio_pole_deriv, log_abs_sinh, logcosh};

const EPS: f64 = f64::EPSILON;

/// Which parameter map a curve follows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CurveFamily {
    /// `p -> M_p(a, b)`.
    PowerInOrder,
    /// `p -> L_p(a, b)`.
    LehmerInOrder,
    /// `p -> J_p(a, b)` in the given prefactor variant.
    AlzerInOrder(AlzerVariant),
    /// `w -> M_p(w; a, b)` for a fixed order `p > 0`.
    WeightedInWeight { order: f64 },
}

impl CurveFamily {
    pub fn name(self) -> &'static str {
        match self {
            CurveFamily::PowerInOrder => "power",
            CurveFamily::LehmerInOrder => "lehmer",
            CurveFamily::AlzerInOrder(_) => "alzer",
            CurveFamily::WeightedInWeight { .. } => "weighted",
        }
    }
}

/// A parameter curve: family plus the fixed argument pair.
#[derive(Clone, Copy, Debug)]
pub struct ParamCurve {
    pub family: CurveFamily,
    pub pair: PositivePair,
    /// Cached `b/a`.
    pub ratio: f64,
    /// Cached signed `ln(b/a)`, cancellation-free near the diagonal.
    pub log_ratio: f64,
}

impl ParamCurve {
    pub fn new(family: CurveFamily, pair: PositivePair) -> Result<Self> {
        if let CurveFamily::WeightedInWeight { order } = family {
            if !(order > 0.0) || !order.is_finite() {
                return Err(Error::ParamDomain {
                    family: "weighted",
                    detail: format!("fixed order must be positive, got {order}"),
                });
            }
        }
        Ok(ParamCurve {
            family,
            pair,
            ratio: pair.ratio(),
            log_ratio: pair.log_ratio_signed(),
        })
    }

    /// Is `t` inside the curve's parameter domain?
    pub fn in_domain(&self, t: f64) -> bool {
        if !t.is_finite() {
            return false;
        }
        match self.family {
            CurveFamily::PowerInOrder => t != 0.0,
            CurveFamily::LehmerInOrder => true,
            CurveFamily::AlzerInOrder(_) => t != 0.0 && t != -1.0,
            CurveFamily::WeightedInWeight { .. } => t > 0.0,
        }
    }

    fn domain_err(&self, t: f64) -> Error {
        Error::ParamDomain {
            family: self.family.name(),
            detail: format!("parameter {t} outside the curve domain"),
        }
    }

    /// The mean evaluated by this curve at parameter `t`.
    pub fn spec_at(&self, t: f64) -> MeanSpec {
        match self.family {
            CurveFamily::PowerInOrder => MeanSpec::Power(t),
            CurveFamily::LehmerInOrder => MeanSpec::Lehmer(t),
            CurveFamily::AlzerInOrder(variant) => MeanSpec::Alzer { order: t, variant },
            CurveFamily::WeightedInWeight { order } => {
                MeanSpec::WeightedPower { order, weight: t }
            }
        }
    }

    /// `log mean(t)` at working precision.
    pub fn log_mean(&self, t: f64) -> Result<f64> {
        means::log_eval(&self.spec_at(t), &self.pair).map(|(lg, _)| lg)
    }

    /// `log mean(t)` at extended precision.
    pub fn log_mean_dd(&self, t: f64) -> Result<Dd> {
        oracle::log_mean_dd(&self.spec_at(t), &self.pair)
    }
}

// ---------------------------------------------------------------------------
// closed-form derivatives
// ---------------------------------------------------------------------------

/// `d/dt` or `d^2/dt^2` of `log mean` along the curve, closed form.
pub fn dlog(curve: &ParamCurve, t: f64, order: u8) -> Result<f64> {
    assert!(order == 1 || order == 2, "derivative order must be 1 or 2");
    if !curve.in_domain(t) {
        return Err(curve.domain_err(t));
    }
    let lam_log = curve.log_ratio;
    Ok(match curve.family {
        CurveFamily::PowerInOrder => power_dlog(lam_log, t, order),
        CurveFamily::LehmerInOrder => lehmer_dlog(lam_log, t, order),
        CurveFamily::AlzerInOrder(variant) => alzer_dlog(lam_log, t, order, variant),
        CurveFamily::WeightedInWeight { order: p } => weighted_dlog(lam_log, p, t, order),
    })
}

fn power_dlog(lam_log: f64, p: f64, order: u8) -> f64 {
    let u = 0.5 * lam_log;
    let x = p * u;
    if order == 1 {
        if x.abs() < 0.05 {
            // (x tanh x - logcosh x)/x^2 = 1/2 - x^2/4 + x^4/9 - 17x^6/360 + 279x^8/14175
            let x2 = x * x;
            u * u
                * (0.5
                    + x2 * (-0.25 + x2 * (1.0 / 9.0 + x2 * (-17.0 / 360.0 + x2 * (279.0 / 14175.0)))))
        } else if x.abs() > 350.0 {
            std::f64::consts::LN_2 / (p * p)
        } else {
            (x * x.tanh() - logcosh(x)) / (p * p)
        }
    } else if x.abs() < 0.05 {
        // (x^2 sech^2 x - 2x tanh x + 2 logcosh x)/x^4
        //   = -1/2 + 4x^2/9 - 17x^4/60 + 248x^6/1575
        let x2 = x * x;
        p * u * u * u * u
            * (-0.5 + x2 * (4.0 / 9.0 + x2 * (-17.0 / 60.0 + x2 * (248.0 / 1575.0))))
    } else if x.abs() > 350.0 {
        -2.0 * std::f64::consts::LN_2 / (p * p * p)
    } else {
        let sech = 1.0 / x.cosh();
        (x * x * sech * sech - 2.0 * x * x.tanh() + 2.0 * logcosh(x)) / (p * p * p)
    }
}

fn lehmer_dlog(lam_log: f64, p: f64, order: u8) -> f64 {
    if lam_log == 0.0 {
        return 0.0;
    }
    let l = lam_log;
    let zp = p * l;
    let zq = (p - 1.0) * l;
    let overflow = zp.abs().max(zq.abs()) > 700.0 || ((2.0 * p - 1.0) * l).abs() > 700.0;
    if order == 1 {
        if overflow {
            let log_mag =
                l.abs().ln() + log_abs_sinh(0.5 * l) - std::f64::consts::LN_2 - logcosh_half(zp)
                    - logcosh_half(zq);
            log_mag.exp() // sign of l * sinh(l/2) is always +
        } else {
            l * (0.5 * l).sinh() / (2.0 * (0.5 * zp).cosh() * (0.5 * zq).cosh())
        }
    } else {
        // sign(g'') = -sign(2p - 1); magnitude via the product identity
        let s = 2.0 * p - 1.0;
        if overflow {
            let log_mag = 2.0 * l.abs().ln() + log_abs_sinh(0.5 * s * l) + log_abs_sinh(0.5 * l)
                - (4.0f64).ln()
                - 2.0 * logcosh_half(zp)
                - 2.0 * logcosh_half(zq);
            -s.signum() * log_mag.exp()
        } else {
            let cp = (0.5 * zp).cosh();
            let cq = (0.5 * zq).cosh();
            -l * l * (0.5 * s * l).sinh() * (0.5 * l).sinh() / (4.0 * cp * cp * cq * cq)
        }
    }
}

/// `log cosh(z/2)` (helper for the overflow-guarded Lehmer branch).
fn logcosh_half(z: f64) -> f64 {
    logcosh(0.5 * z)
}

fn alzer_dlog(lam_log: f64, p: f64, order: u8, variant: AlzerVariant) -> f64 {
    let l = lam_log;
    let q = p + 1.0;
    let paper = if l == 0.0 {
        // continuous limit curve a ((p+1)/p)^2: only the prefactor varies
        if order == 1 {
            2.0 * (1.0 / q - 1.0 / p)
        } else {
            2.0 * (1.0 / (p * p) - 1.0 / (q * q))
        }
    } else {
        let zp = p * l;
        let zq = q * l;
        let series = zp.abs().max(zq.abs()) < 0.05;
        if order == 1 {
            if series {
                // L (w(qL) - w(pL)) = 1/q - 1/p + L^2/12 - L^4 (q^3-p^3)/720
                //                     + L^6 (q^5-p^5)/30240
                let l2 = l * l;
                let c3 = q * q * q - p * p * p;
                let c5 = 5.0 * p * p * p * p + 10.0 * p * p * p + 10.0 * p * p + 5.0 * p + 1.0;
                2.0 * (1.0 / q - 1.0 / p) + l2 * (1.0 / 12.0 + l2 * (-c3 / 720.0 + l2 * c5 / 30240.0))
            } else {
                (1.0 / q - 1.0 / p) + l * (exp_ratio_pole(zq) - exp_ratio_pole(zp))
            }
        } else if series {
            // L^2 (w'(qL) - w'(pL)) = 1/p^2 - 1/q^2 - L^4 (q^2-p^2)/240
            //                         + L^6 (q^4-p^4)/6048
            let l2 = l * l;
            let c2 = 2.0 * p + 1.0;
            let c4 = 4.0 * p * p * p + 6.0 * p * p + 4.0 * p + 1.0;
            2.0 * (1.0 / (p * p) - 1.0 / (q * q)) + l2 * l2 * (-c2 / 240.0 + l2 * c4 / 6048.0)
        } else {
            (1.0 / (p * p) - 1.0 / (q * q))
                + l * l * (exp_ratio_pole_deriv(zq) - exp_ratio_pole_deriv(zp))
        }
    };
    match variant {
        AlzerVariant::Paper => paper,
        AlzerVariant::Normalized => {
            // h_norm = h_paper - 2(log|q| - log|p|)
            if order == 1 {
                paper - 2.0 * (1.0 / q - 1.0 / p)
            } else {
                paper - 2.0 * (1.0 / (p * p) - 1.0 / (q * q))
            }
        }
    }
}

fn weighted_dlog(lam_log: f64, p: f64, w: f64, order: u8) -> f64 {
    if lam_log == 0.0 {
        return 0.0;
    }
    let zl = p * lam_log;
    if zl > 700.0 {
        // r -> infinity limits
        return if order == 1 {
            1.0 / (p * w * (1.0 + w))
        } else {
            -(1.0 + 2.0 * w) / (p * (1.0 + w) * (1.0 + w) * w * w)
        };
    }
    if zl < -700.0 {
        // r -> 0 limits
        return if order == 1 {
            -1.0 / (p * (1.0 + w))
        } else {
            1.0 / (p * (1.0 + w) * (1.0 + w))
        };
    }
    let r = zl.exp();
    let rm1 = zl.exp_m1();
    if order == 1 {
        rm1 / (p * (1.0 + w * r) * (1.0 + w))
    } else {
        -rm1 * (1.0 + r + 2.0 * w * r) / (p * (1.0 + w) * (1.0 + w) * (1.0 + w * r) * (1.0 + w * r))
    }
}

// ---------------------------------------------------------------------------
// finite-difference validation
// ---------------------------------------------------------------------------

/// Outcome of one closed-form vs finite-difference comparison.
#[derive(Clone, Copy, Debug)]
pub struct FdCheck {
    pub closed_form: f64,
    pub finite_difference: f64,
    pub rel_err: f64,
}

/// Default step: `1e-5 max(1, |t|)` for order 1, `1e-4 max(1, |t|)` for 2.
pub fn fd_step(order: u8, t: f64) -> f64 {
    let scale = t.abs().max(1.0);
    if order == 1 {
        1e-5 * scale
    } else {
        1e-4 * scale
    }
}

/// Central finite difference of `log mean` vs the closed form.
///
/// Order 1 uses the 2nd-order central stencil, order 2 the 5-point stencil.
/// The curve values are taken at extended precision so the difference noise
/// (`~eps/h^2` in binary64) cannot mask small derivatives.
pub fn fd_check(curve: &ParamCurve, t: f64, order: u8, h: f64) -> Result<FdCheck> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Stencil(format!("step must be positive and finite, got {h}")));
    }
    for probe in [t - 2.0 * h, t - h, t, t + h, t + 2.0 * h] {
        if !curve.in_domain(probe) {
            return Err(Error::Stencil(format!(
                "{} curve: stencil point {probe} leaves the domain",
                curve.family.name()
            )));
        }
    }
    let closed_form = dlog(curve, t, order)?;
    let f = |tt: f64| curve.log_mean_dd(tt);
    let finite_difference = if order == 1 {
        let fp = f(t + h)?;
        let fm = f(t - h)?;
        fp.sub(fm).div_f64(2.0 * h).to_f64()
    } else {
        let fm2 = f(t - 2.0 * h)?;
        let fm1 = f(t - h)?;
        let f0 = f(t)?;
        let fp1 = f(t + h)?;
        let fp2 = f(t + 2.0 * h)?;
        // (-f(t+2h) + 16 f(t+h) - 30 f(t) + 16 f(t-h) - f(t-2h)) / (12 h^2)
        fp2.neg()
            .add(fp1.mul_f64(16.0))
            .sub(f0.mul_f64(30.0))
            .add(fm1.mul_f64(16.0))
            .sub(fm2)
            .div_f64(12.0 * h * h)
            .to_f64()
    };
    let scale = closed_form.abs().max(finite_difference.abs());
    let rel_err = if scale == 0.0 {
        0.0
    } else {
        (closed_form - finite_difference).abs() / scale
    };
    Ok(FdCheck { closed_form, finite_difference, rel_err })
}

/// Finite-difference second derivative of the power-mean VALUE (not log) in
/// the order `p`, 5-point stencil; the stencil must not cross `p = 0`.
pub fn plain_d2_power(pair: &PositivePair, p: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Stencil(format!("step must be positive and finite, got {h}")));
    }
    if p == 0.0 || (p - 2.0 * h) * (p + 2.0 * h) <= 0.0 {
        return Err(Error::Stencil(format!(
            "stencil [{}, {}] crosses the power-mean branch point at 0",
            p - 2.0 * h,
            p + 2.0 * h
        )));
    }
    let f = |t: f64| oracle::mean_dd(&MeanSpec::Power(t), pair);
    let fm2 = f(p - 2.0 * h)?;
    let fm1 = f(p - h)?;
    let f0 = f(p)?;
    let fp1 = f(p + h)?;
    let fp2 = f(p + 2.0 * h)?;
    if fm2 == fm1 && fm1 == f0 && f0 == fp1 && fp1 == fp2 {
        return Ok(0.0); // constant curve (a = b)
    }
    Ok(fp2
        .neg()
        .add(fp1.mul_f64(16.0))
        .sub(f0.mul_f64(30.0))
        .add(fm1.mul_f64(16.0))
        .sub(fm2)
        .div_f64(12.0 * h * h)
        .to_f64())
}

// ---------------------------------------------------------------------------
// interval classification
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    NonMonotone,
    Flat,
}

impl Monotonicity {
    pub fn name(self) -> &'static str {
        match self {
            Monotonicity::Increasing => "increasing",
            Monotonicity::Decreasing => "decreasing",
            Monotonicity::NonMonotone => "non-monotone",
            Monotonicity::Flat => "flat",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogShape {
    LogConvex,
    LogConcave,
    Mixed,
    Degenerate,
}

impl LogShape {
    pub fn name(self) -> &'static str {
        match self {
            LogShape::LogConvex => "log-convex",
            LogShape::LogConcave => "log-concave",
            LogShape::Mixed => "mixed",
            LogShape::Degenerate => "degenerate",
        }
    }
}

/// One grid sample of a curve.
#[derive(Clone, Copy, Debug)]
pub struct CurveSample {
    pub t: f64,
    pub log_mean: f64,
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Classification of a curve over an interval.
#[derive(Clone, Debug)]
pub struct CurveReport {
    pub family: CurveFamily,
    pub pair: PositivePair,
    pub interval: (f64, f64),
    pub samples: Vec<CurveSample>,
    pub monotonicity: Monotonicity,
    pub log_shape: LogShape,
    pub min_d2: f64,
    pub argmin_d2: f64,
    pub max_d2: f64,
    pub argmax_d2: f64,
}

/// A derivative sample counts as zero when `|d| <= 1e-10 (1 + |log mean|)`.
fn classification_tol(log_mean: f64) -> f64 {
    1e-10 * (1.0 + log_mean.abs())
}

/// Sample `d1`/`d2` on a uniform inclusive grid and classify monotonicity and
/// log-shape. Ties in the extremal-`d2` argument break toward smaller `t`.
pub fn classify_curve(
    curve: &ParamCurve,
    interval: (f64, f64),
    n_samples: usize,
) -> Result<CurveReport> {
    let (t_lo, t_hi) = interval;
    if n_samples < 16 {
        return Err(Error::Config(format!("need at least 16 samples, got {n_samples}")));
    }
    if !(t_lo < t_hi) || !t_lo.is_finite() || !t_hi.is_finite() {
        return Err(Error::Config(format!("bad interval [{t_lo}, {t_hi}]")));
    }
    let step = (t_hi - t_lo) / (n_samples - 1) as f64;
    let mut samples = Vec::with_capacity(n_samples);
    let (mut pos1, mut neg1, mut zero1) = (0usize, 0usize, 0usize);
    let (mut pos2, mut neg2, mut zero2) = (0usize, 0usize, 0usize);
    let (mut min_d2, mut argmin_d2) = (f64::INFINITY, t_lo);
    let (mut max_d2, mut argmax_d2) = (f64::NEG_INFINITY, t_lo);
    for i in 0..n_samples {
        let t = if i + 1 == n_samples { t_hi } else { t_lo + i as f64 * step };
        if !curve.in_domain(t) {
            return Err(curve.domain_err(t));
        }
        let r = means::eval(&curve.spec_at(t), &curve.pair)?;
        let d1 = dlog(curve, t, 1)?;
        let d2 = dlog(curve, t, 2)?;
        let tol = classification_tol(r.log_value);
        if d1 > tol {
            pos1 += 1;
        } else if d1 < -tol {
            neg1 += 1;
        } else {
            zero1 += 1;
        }
        if d2 > tol {
            pos2 += 1;
        } else if d2 < -tol {
            neg2 += 1;
        } else {
            zero2 += 1;
        }
        if d2 < min_d2 {
            min_d2 = d2;
            argmin_d2 = t;
        }
        if d2 > max_d2 {
            max_d2 = d2;
            argmax_d2 = t;
        }
        samples.push(CurveSample { t, log_mean: r.log_value, value: r.value, d1, d2 });
    }
    let monotonicity = match (pos1, neg1, zero1) {
        (0, 0, _) => Monotonicity::Flat,
        (_, 0, _) => Monotonicity::Increasing,
        (0, _, _) => Monotonicity::Decreasing,
        _ => Monotonicity::NonMonotone,
    };
    let log_shape = match (pos2, neg2, zero2) {
        (0, 0, _) => LogShape::Degenerate,
        (_, 0, _) => LogShape::LogConvex,
        (0, _, _) => LogShape::LogConcave,
        _ => LogShape::Mixed,
    };
    Ok(CurveReport {
        family: curve.family,
        pair: curve.pair,
        interval,
        samples,
        monotonicity,
        log_shape,
        min_d2,
        argmin_d2,
        max_d2,
        argmax_d2,
    })
}

// ---------------------------------------------------------------------------
// three-term inequality margin
// ---------------------------------------------------------------------------

/// `mean(c)^2 - mean(c-1) mean(c+1)` in log space:
/// `exp(l_- + l_+) expm1(2 l_c - l_- - l_+)`.
///
/// A negative margin is consistent with the "`<=`" form of the three-term
/// log-convexity inequalities.
pub fn three_term(curve: &ParamCurve, center: f64) -> Result<f64> {
    for probe in [center - 1.0, center, center + 1.0] {
        if !curve.in_domain(probe) {
            return Err(curve.domain_err(probe));
        }
    }
    let lc = curve.log_mean(center)?;
    let lm = curve.log_mean(center - 1.0)?;
    let lp = curve.log_mean(center + 1.0)?;
    Ok((lm + lp).exp() * (2.0 * lc - lm - lp).exp_m1())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::E;

    fn pair(a: f64, b: f64) -> PositivePair {
        PositivePair::new(a, b).unwrap()
    }

    fn curve(family: CurveFamily, a: f64, b: f64) -> ParamCurve {
        ParamCurve::new(family, pair(a, b)).unwrap()
    }

    #[test]
    fn dlog_examples() {
        // constant curve when a = b
        let c = curve(CurveFamily::LehmerInOrder, 5.0, 5.0);
        assert_eq!(dlog(&c, 2.0, 1).unwrap(), 0.0);
        assert_eq!(dlog(&c, 2.0, 2).unwrap(), 0.0);
        // power curve on (1, e) at p = 1: 0.5 tanh(0.5) - logcosh(0.5)
        let c = curve(CurveFamily::PowerInOrder, 1.0, E);
        let want = 0.5 * 0.5f64.tanh() - logcosh(0.5);
        let got = dlog(&c, 1.0, 1).unwrap();
        assert!((got - want).abs() < 1e-15);
        assert!((got - 0.110944).abs() < 1e-6);
        // weighted curve on (4, 2), p = 1, at w = 1: d/dw log((4+2w)/(1+w)) = -1/6
        let c = curve(CurveFamily::WeightedInWeight { order: 1.0 }, 4.0, 2.0);
        let got = dlog(&c, 1.0, 1).unwrap();
        assert!((got - (-1.0 / 6.0)).abs() < 1e-15, "{got}");
    }

    #[test]
    fn dlog_domain_errors() {
        let c = curve(CurveFamily::PowerInOrder, 1.0, 2.0);
        assert!(dlog(&c, 0.0, 1).is_err());
        let c = curve(CurveFamily::AlzerInOrder(AlzerVariant::Paper), 1.0, 2.0);
        assert!(dlog(&c, -1.0, 1).is_err());
        let c = curve(CurveFamily::WeightedInWeight { order: 2.0 }, 1.0, 2.0);
        assert!(dlog(&c, -0.5, 2).is_err());
        assert!(ParamCurve::new(CurveFamily::WeightedInWeight { order: 0.0 }, pair(1.0, 2.0)).is_err());
    }

    #[test]
    fn fd_check_examples() {
        // any curve at a = b: both zero, rel_err zero
        let c = curve(CurveFamily::PowerInOrder, 3.0, 3.0);
        let r = fd_check(&c, 2.0, 1, 1e-5).unwrap();
        assert_eq!(r.closed_form, 0.0);
        assert_eq!(r.finite_difference, 0.0);
        assert_eq!(r.rel_err, 0.0);
        // power on (1, e) at t = 1
        let c = curve(CurveFamily::PowerInOrder, 1.0, E);
        let r = fd_check(&c, 1.0, 1, 1e-5).unwrap();
        assert!(r.rel_err <= 1e-6, "rel_err {}", r.rel_err);
        // weighted on (4, 2), p = 1, t = 1
        let c = curve(CurveFamily::WeightedInWeight { order: 1.0 }, 4.0, 2.0);
        let r = fd_check(&c, 1.0, 1, fd_step(1, 1.0)).unwrap();
        assert!((r.closed_form - (-1.0 / 6.0)).abs() < 1e-12);
        assert!((r.finite_difference - (-1.0 / 6.0)).abs() < 1e-8);
        assert!(r.rel_err <= 1e-6);
    }

    #[test]
    fn fd_check_stencil_guard() {
        let c = curve(CurveFamily::PowerInOrder, 1.0, 2.0);
        // t - 2h crosses 0
        assert!(fd_check(&c, 1e-5, 1, 1e-5).is_err());
    }

    #[test]
    fn plain_d2_power_signs() {
        let p13 = pair(1.0, E);
        // value-concave in p at p = 2 (p >= 1)
        let d2 = plain_d2_power(&p13, 2.0, 1e-4).unwrap();
        assert!(d2 < -1e-6, "{d2}");
        // value-convex in p at p = -2 (p <= -1)
        let d2 = plain_d2_power(&p13, -2.0, 1e-4).unwrap();
        assert!(d2 > 1e-6, "{d2}");
        // constant curve at a = b
        let d2 = plain_d2_power(&pair(3.0, 3.0), 5.0, 1e-4).unwrap();
        assert_eq!(d2, 0.0);
        // stencil crossing zero errors
        assert!(plain_d2_power(&p13, 1e-5, 1e-4).is_err());
    }

    #[test]
    fn classify_examples() {
        // power curve on (1, e) over [0.1, 5]: increasing and log-concave
        let c = curve(CurveFamily::PowerInOrder, 1.0, E);
        let r = classify_curve(&c, (0.1, 5.0), 256).unwrap();
        assert_eq!(r.monotonicity, Monotonicity::Increasing);
        assert_eq!(r.log_shape, LogShape::LogConcave);
        // lehmer curve on (1, e) over [0.5, 4]: increasing; the engine finds
        // log-concave (second derivative changes sign at p = 1/2, and is
        // negative beyond it)
        let c = curve(CurveFamily::LehmerInOrder, 1.0, E);
        let r = classify_curve(&c, (0.5, 4.0), 256).unwrap();
        assert_eq!(r.monotonicity, Monotonicity::Increasing);
        assert_eq!(r.log_shape, LogShape::LogConcave);
        // any curve with a = b: flat and degenerate
        let c = curve(CurveFamily::LehmerInOrder, 2.0, 2.0);
        let r = classify_curve(&c, (0.5, 4.0), 64).unwrap();
        assert_eq!(r.monotonicity, Monotonicity::Flat);
        assert_eq!(r.log_shape, LogShape::Degenerate);
        // alzer paper curve on (1, e) over [0.5, 4]: decreasing, log-convex
        let c = curve(CurveFamily::AlzerInOrder(AlzerVariant::Paper), 1.0, E);
        let r = classify_curve(&c, (0.5, 4.0), 256).unwrap();
        assert_eq!(r.monotonicity, Monotonicity::Decreasing);
        assert_eq!(r.log_shape, LogShape::LogConvex);
    }

    #[test]
    fn three_term_examples() {
        // lehmer on (1, e) centered at 2: positive (squares exceed the product)
        let c = curve(CurveFamily::LehmerInOrder, 1.0, E);
        let m = three_term(&c, 2.0).unwrap();
        assert!((m - 0.41739).abs() < 1e-4, "{m}");
        // alzer paper on (1, 2) centered at 2: 12.25 - 6 * 20/7
        let c = curve(CurveFamily::AlzerInOrder(AlzerVariant::Paper), 1.0, 2.0);
        let m = three_term(&c, 2.0).unwrap();
        let want = 12.25 - 6.0 * (20.0 / 7.0);
        assert!((m - want).abs() < 1e-12, "{m} vs {want}");
        // any (true-mean) curve at a = b: exactly zero
        for fam in [
            CurveFamily::PowerInOrder,
            CurveFamily::LehmerInOrder,
            CurveFamily::AlzerInOrder(AlzerVariant::Normalized),
            CurveFamily::WeightedInWeight { order: 1.5 },
        ] {
            let c = curve(fam, 7.0, 7.0);
            assert_eq!(three_term(&c, 2.0).unwrap(), 0.0, "{fam:?}");
        }
    }

    #[test]
    fn diagonal_collapses_curves_exactly() {
        for fam in [
            CurveFamily::PowerInOrder,
            CurveFamily::LehmerInOrder,
            CurveFamily::AlzerInOrder(AlzerVariant::Normalized),
            CurveFamily::WeightedInWeight { order: 2.0 },
        ] {
            let c = curve(fam, 4.0, 4.0);
            assert_eq!(dlog(&c, 1.7, 1).unwrap(), 0.0, "{fam:?}");
            assert_eq!(dlog(&c, 1.7, 2).unwrap(), 0.0, "{fam:?}");
        }
        // the paper-variant Alzer limit curve a((p+1)/p)^2 is NOT constant:
        // its log-derivative is the prefactor's
        let c = curve(CurveFamily::AlzerInOrder(AlzerVariant::Paper), 4.0, 4.0);
        let d1 = dlog(&c, 2.0, 1).unwrap();
        assert!((d1 - 2.0 * (1.0 / 3.0 - 0.5)).abs() < 1e-15);
    }

    fn any_family() -> impl Strategy<Value = CurveFamily> {
        prop_oneof![
            Just(CurveFamily::PowerInOrder),
            Just(CurveFamily::LehmerInOrder),
            Just(CurveFamily::AlzerInOrder(AlzerVariant::Paper)),
            Just(CurveFamily::AlzerInOrder(AlzerVariant::Normalized)),
            (0.2f64..4.0).prop_map(|p| CurveFamily::WeightedInWeight { order: p }),
        ]
    }

    proptest! {
        #[test]
        fn closed_forms_match_finite_differences(
            family in any_family(),
            a in 0.2f64..5.0,
            b in 0.2f64..5.0,
            t_raw in 0.15f64..4.0,
            order in 1u8..=2,
        ) {
            let c = curve(family, a, b);
            let t = t_raw;
            let h = fd_step(order, t);
            prop_assume!(c.in_domain(t - 2.0 * h) && c.in_domain(t + 2.0 * h));
            let r = fd_check(&c, t, order, h).unwrap();
            let small = r.closed_form.abs() < 1e-8;
            if small {
                prop_assert!((r.closed_form - r.finite_difference).abs() <= 1e-4,
                    "{family:?} t={t} order={order}: {} vs {}", r.closed_form, r.finite_difference);
            } else {
                prop_assert!(r.rel_err <= 1e-6,
                    "{family:?} t={t} order={order}: {} vs {} rel {}", r.closed_form, r.finite_difference, r.rel_err);
            }
        }

        #[test]
        fn derivative_sign_structure(a in 0.05f64..20.0, b in 0.05f64..20.0, t in -6f64..6.0) {
            prop_assume!(a != b);
            // power mean order-monotonicity: d1 > 0 for all a != b, t != 0
            if t != 0.0 {
                let c = curve(CurveFamily::PowerInOrder, a, b);
                prop_assert!(dlog(&c, t, 1).unwrap() > 0.0);
            }
            // lehmer: d1 > 0 for all real t
            let c = curve(CurveFamily::LehmerInOrder, a, b);
            prop_assert!(dlog(&c, t, 1).unwrap() > 0.0);
            // weighted: sign(d1) = sign(b - a) for w > 0, p > 0
            if t > 0.05 {
                let c = curve(CurveFamily::WeightedInWeight { order: 1.3 }, a, b);
                let d1 = dlog(&c, t, 1).unwrap();
                prop_assert!(d1.signum() == (b - a).signum(), "d1={d1}, b-a={}", b - a);
            }
        }

        #[test]
        fn classification_is_scale_invariant(
            family in any_family(),
            a in 0.2f64..5.0,
            b in 0.2f64..5.0,
            scale in prop_oneof![Just(0.5f64), Just(2.0f64), Just(10.0f64)],
        ) {
            let c0 = curve(family, a, b);
            let c1 = curve(family, scale * a, scale * b);
            for t in [0.3f64, 1.2, 2.8] {
                for order in [1u8, 2] {
                    let d0 = dlog(&c0, t, order).unwrap();
                    let d1 = dlog(&c1, t, order).unwrap();
                    // mixed tolerance: the one-ulp jitter of log(b/a) under
                    // scaling is amplified when d2 itself nearly cancels
                    prop_assert!((d0 - d1).abs() <= 1e-12 * (1.0 + d0.abs()),
                        "{family:?} order {order} t={t}: {d0} vs {d1}");
                }
            }
        }
    }
}
