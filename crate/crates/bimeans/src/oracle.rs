//! Extended-precision re-evaluation of the mean families from their direct
//! defining formulas.
//!
//! This is the anti-rounding arbiter: ~106-bit arithmetic, no shared code
//! with the working-precision evaluators in [`crate::means`], and no series
//! shortcuts beyond error-bounded kernels inside [`crate::dd`]. Claim margins
//! that look negative at working precision are confirmed here before any
//! verdict says "violated".

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::means::{AlzerVariant, ClassicalKind, MeanSpec, PositivePair};

/// Baseline relative error of one extended-precision mean evaluation.
///
/// The kernels in [`crate::dd`] come in around 1e-30 relative; a factor of a
/// few hundred of headroom keeps this a sound per-atom bound, and it sits far
/// below the 1e-25 ceiling the oracle must guarantee on desk-scale inputs.
pub const ATOM_REL: f64 = 1e-27;

/// Signed `ln(x/y)` without cancellation for close arguments.
pub fn log_ratio_dd(x: Dd, y: Dd) -> Dd {
    let d = x.sub(y);
    if d.is_zero() {
        return Dd::ZERO;
    }
    if d.hi.abs() < 0.5 * y.hi.abs() {
        d.div(y).ln_1p()
    } else {
        x.ln().sub(y.ln())
    }
}

fn sorted(x: Dd, y: Dd) -> (Dd, Dd) {
    if x.lt(y) {
        (y, x)
    } else {
        (x, y)
    }
}

/// Classical means A, G, H, L, I on extended-precision arguments.
///
/// Bitwise-equal arguments short-circuit to the argument itself, so the
/// diagonal is exact.
pub fn classical_dd(kind: ClassicalKind, x: Dd, y: Dd) -> Dd {
    if x == y {
        return x;
    }
    match kind {
        ClassicalKind::Arithmetic => x.add(y).div_f64(2.0),
        ClassicalKind::Geometric => x.mul(y).sqrt(),
        ClassicalKind::Harmonic => Dd::from(2.0).div(x.recip().add(y.recip())),
        ClassicalKind::Logarithmic => {
            let (hi, lo) = sorted(x, y);
            hi.sub(lo).div(log_ratio_dd(hi, lo))
        }
        ClassicalKind::Identric => {
            let (hi, lo) = sorted(x, y);
            let d = hi.sub(lo);
            let log_i = if d.hi < 0.5 * lo.hi {
                // log I = log lo + (1+t) log1p(t)/t - 1, t = (hi-lo)/lo
                let t = d.div(lo);
                lo.ln().add(t.add_f64(1.0).mul(t.ln_1p()).div(t)).sub_f64(1.0)
            } else {
                // (hi ln hi - lo ln lo)/(hi - lo) - 1: no cancellation for wide pairs
                hi.mul(hi.ln()).sub(lo.mul(lo.ln())).div(d).sub_f64(1.0)
            };
            log_i.exp()
        }
    }
}

/// Power mean with extended-precision order (`t = 0` takes the G branch).
pub fn power_dd(t: Dd, x: Dd, y: Dd) -> Dd {
    if x == y {
        return x;
    }
    if t.is_zero() {
        return x.mul(y).sqrt();
    }
    let s = x.powdd(t).add(y.powdd(t)).div_f64(2.0);
    s.ln().div(t).exp()
}

/// Weighted power mean `((x^p + w y^p)/(1+w))^{1/p}`.
pub fn weighted_power_dd(p: Dd, w: Dd, x: Dd, y: Dd) -> Dd {
    if x == y {
        return x;
    }
    let num = x.powdd(p).add(w.mul(y.powdd(p)));
    num.div(w.add_f64(1.0)).ln().div(p).exp()
}

/// Lehmer mean `(x^p + y^p)/(x^{p-1} + y^{p-1})`.
pub fn lehmer_dd(p: Dd, x: Dd, y: Dd) -> Dd {
    if x == y {
        return x;
    }
    let q = p.sub_f64(1.0);
    x.powdd(p).add(y.powdd(p)).div(x.powdd(q).add(y.powdd(q)))
}

/// Modified Alzer ratio, both prefactor variants.
pub fn alzer_dd(p: f64, x: Dd, y: Dd, variant: AlzerVariant) -> Result<Dd> {
    if p == 0.0 || (p == -1.0 && variant == AlzerVariant::Paper) {
        return Err(Error::ParamDomain { family: "alzer", detail: format!("order {p} out of domain") });
    }
    let pd = Dd::from(p);
    let qd = Dd::from_sum(p, 1.0);
    if x == y {
        return Ok(match variant {
            AlzerVariant::Paper => x.mul(qd.div(pd).sqr()),
            AlzerVariant::Normalized => x,
        });
    }
    if qd.is_zero() {
        // normalized at p = -1: continuous limit G^2/L
        let g = classical_dd(ClassicalKind::Geometric, x, y);
        let l = classical_dd(ClassicalKind::Logarithmic, x, y);
        return Ok(g.sqr().div(l));
    }
    let quot = x.powdd(qd).sub(y.powdd(qd)).div(x.powdd(pd).sub(y.powdd(pd)));
    Ok(match variant {
        AlzerVariant::Paper => qd.div(pd).mul(quot),
        AlzerVariant::Normalized => pd.div(qd).mul(quot),
    })
}

/// Re-evaluate any [`MeanSpec`] at extended precision from exact `f64` inputs.
pub fn mean_dd(spec: &MeanSpec, pair: &PositivePair) -> Result<Dd> {
    let x = Dd::from(pair.a());
    let y = Dd::from(pair.b());
    Ok(match *spec {
        MeanSpec::Classical(kind) => classical_dd(kind, x, y),
        MeanSpec::Power(p) => power_dd(Dd::from(p), x, y),
        MeanSpec::WeightedPower { order, weight } => {
            weighted_power_dd(Dd::from(order), Dd::from(weight), x, y)
        }
        MeanSpec::Lehmer(p) => lehmer_dd(Dd::from(p), x, y),
        MeanSpec::Alzer { order, variant } => alzer_dd(order, x, y, variant)?,
    })
}

/// Extended-precision `log mean` (used by finite-difference validation).
pub fn log_mean_dd(spec: &MeanSpec, pair: &PositivePair) -> Result<Dd> {
    Ok(mean_dd(spec, pair)?.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn pair(a: f64, b: f64) -> PositivePair {
        PositivePair::new(a, b).unwrap()
    }

    fn rel_dd(got: Dd, want: Dd) -> f64 {
        let d = got.sub(want);
        (d.hi.abs() + d.lo.abs()) / want.hi.abs().max(1e-300)
    }

    #[test]
    fn diagonal_is_exact() {
        let five = Dd::from(5.0);
        let l = classical_dd(ClassicalKind::Logarithmic, five, five);
        assert_eq!(l, five);
    }

    #[test]
    fn power_zero_equals_geometric_bitwise() {
        let x = Dd::from(4.0);
        let y = Dd::from(9.0);
        let m0 = power_dd(Dd::ZERO, x, y);
        let g = classical_dd(ClassicalKind::Geometric, x, y);
        assert_eq!(m0, g);
        assert!((m0.to_f64() - 6.0).abs() < 1e-15);
    }

    #[test]
    fn identric_closed_form() {
        // log I(1, b) = b ln b/(b - 1) - 1; at b = e this is 1/(e-1), but the
        // input here is the f64 approximation of e, so use the general form
        let b = Dd::from(E);
        let got = classical_dd(ClassicalKind::Identric, Dd::from(1.0), b);
        let want = b.mul(b.ln()).div(b.sub_f64(1.0)).sub_f64(1.0).exp();
        assert!(rel_dd(got, want) < 1e-27);
        // and the e^{1/(e-1)} desk value holds to f64-of-e accuracy
        assert!((got.to_f64() - (1.0 / (E - 1.0)).exp()).abs() < 1e-15);
    }

    #[test]
    fn lehmer_closed_form() {
        // L_2(1, e) = (1 + e^2)/(1 + e)
        let e = Dd::from(E);
        let got = lehmer_dd(Dd::from(2.0), Dd::from(1.0), e);
        let want = e.sqr().add_f64(1.0).div(e.add_f64(1.0));
        assert!(rel_dd(got, want) < 1e-28);
    }

    #[test]
    fn alzer_paper_examples() {
        let got = alzer_dd(1.0, Dd::from(1.0), Dd::from(2.0), AlzerVariant::Paper).unwrap();
        assert!(rel_dd(got, Dd::from(6.0)) < 1e-28);
        let lim = alzer_dd(1.0, Dd::from(3.0), Dd::from(3.0), AlzerVariant::Paper).unwrap();
        assert!(rel_dd(lim, Dd::from(12.0)) < 1e-30);
    }

    #[test]
    fn working_precision_agrees_with_oracle_near_diagonal() {
        // spot-check of the stability contract at |log(b/a)| = 1e-9
        let b = 1.0 + 1.000000000500000001e-9;
        let p = pair(1.0, b);
        for spec in [
            MeanSpec::Classical(ClassicalKind::Logarithmic),
            MeanSpec::Classical(ClassicalKind::Identric),
            MeanSpec::Power(2.0),
            MeanSpec::Power(-3.0),
            MeanSpec::Lehmer(2.0),
            MeanSpec::Alzer { order: 2.0, variant: AlzerVariant::Paper },
            MeanSpec::Alzer { order: 0.7, variant: AlzerVariant::Normalized },
        ] {
            let working = crate::means::eval(&spec, &p).unwrap().value;
            let extended = mean_dd(&spec, &p).unwrap().to_f64();
            let rel = (working - extended).abs() / extended;
            assert!(rel <= 1e-13, "{spec:?}: {working:e} vs {extended:e}, rel {rel:e}");
        }
    }

    #[test]
    fn log_ratio_dd_keeps_relative_accuracy() {
        let x = Dd::from(1.0 + 1e-12);
        let y = Dd::from(1.0);
        let got = log_ratio_dd(x, y);
        // ln(1+u) with u = 1e-12 + tiny representation error
        let u = x.sub_f64(1.0);
        let want = u.sub(u.sqr().div_f64(2.0));
        assert!(rel_dd(got, want) < 1e-24);
    }
}
