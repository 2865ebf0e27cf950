//! Saturation-safe scalar kernels used by the mean evaluators.
//!
//! Everything here is branch-stable in the sense that each function keeps
//! near-full relative accuracy over its whole argument range, including the
//! regimes where the naive formula overflows, underflows, or cancels.

use std::f64::consts::LN_2;

/// `log(cosh(x))` with full relative accuracy everywhere and no overflow.
///
/// For `|x| <= 1` uses `cosh x - 1 = 2 sinh^2(x/2)`, so
/// `logcosh(x) = log1p(2 sinh^2(x/2))` — cancellation-free down to x = 0
/// (where it returns exactly 0). Beyond that,
/// `logcosh(x) = |x| - ln 2 + log1p(e^{-2|x|})`, which saturates safely.
#[inline]
pub fn logcosh(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 1.0 {
        let s = (0.5 * ax).sinh();
        (2.0 * s * s).ln_1p()
    } else {
        ax - LN_2 + (-2.0 * ax).exp().ln_1p()
    }
}

/// `log|e^x - 1|` for `x != 0`, safe against overflow of `e^x`.
#[inline]
pub fn log_abs_expm1(x: f64) -> f64 {
    if x > 700.0 {
        // e^x - 1 = e^x (1 - e^-x)
        x + (-(-x).exp()).ln_1p()
    } else if x > 0.0 {
        x.exp_m1().ln()
    } else {
        (-x.exp_m1()).ln()
    }
}

/// `log|sinh(x)|` for `x != 0`, safe against overflow.
#[inline]
pub fn log_abs_sinh(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-3 {
        // sinh x = x (1 + x^2/6 + x^4/120)
        let x2 = ax * ax;
        ax.ln() + (x2 / 6.0 * (1.0 + x2 / 20.0)).ln_1p()
    } else {
        // |sinh x| = e^{|x|}(1 - e^{-2|x|})/2
        ax - LN_2 + (-(-2.0 * ax).exp()).ln_1p()
    }
}

/// `log(e^x + e^y)` with the larger exponent factored out.
#[inline]
pub fn log_add_exp(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `log((e^x + e^y)/2)`.
#[inline]
pub fn log_mean_exp(x: f64, y: f64) -> f64 {
    log_add_exp(x, y) - LN_2
}

/// The signed, cancellation-free log ratio `log(hi/lo)` for `hi >= lo > 0`.
///
/// For ratios below 2 the difference `hi - lo` is exact (Sterbenz), so
/// `log1p((hi - lo)/lo)` keeps full relative accuracy even when the pair is
/// only a few ulps apart; the plain log difference takes over for wide pairs.
#[inline]
pub fn log_ratio(hi: f64, lo: f64) -> f64 {
    debug_assert!(hi >= lo && lo > 0.0);
    if hi < 2.0 * lo {
        ((hi - lo) / lo).ln_1p()
    } else {
        hi.ln() - lo.ln()
    }
}

/// `x/(1 - e^{-x})` companion: `w(z) = e^z/(e^z - 1) = -1/expm1(-z)`, `z != 0`.
///
/// This is the kernel of the difference-quotient log-derivatives; it has a
/// simple pole at 0 handled by callers via its Laurent series.
#[inline]
pub fn exp_ratio_pole(z: f64) -> f64 {
    -1.0 / (-z).exp_m1()
}

/// Derivative of [`exp_ratio_pole`]: `w'(z) = -e^z/(e^z - 1)^2`, `z != 0`.
#[inline]
pub fn exp_ratio_pole_deriv(z: f64) -> f64 {
    if z > 700.0 {
        return -(-z).exp(); // -e^z/e^{2z}, effectively 0
    }
    let m = z.exp_m1();
    -(m + 1.0) / (m * m)
}
